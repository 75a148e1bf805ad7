//! Restriction from `H_n` to `H_n^R` for irreducible modules, graded by `{1, X_0}`.

use serde_json::json;

use crate::algebra::AlgebraDesc;
use crate::characters::character;
use crate::error::{HeckeError, Result};
use crate::linalg::Matrix;
use crate::modrep::{
    hom_space, is_irreducible, is_isomorphic, restrict, sub_module, twist_psi, twist_sigma,
    ModuleRep, Submodule,
};
use crate::scalars::Scalar;

#[derive(Clone, Debug)]
pub enum CliffordOutcome {
    /// The restriction is irreducible.
    Irreducible(ModuleRep),
    /// The `±1` eigenspaces of the normalized intertwiner `M → M^σ`.
    Splits(ModuleRep, ModuleRep),
}

#[derive(Clone, Debug)]
pub struct CliffordReport {
    /// Scalar of the central element `X_0^2 X_1 ... X_n`.
    pub mu: Scalar,
    pub outcome: CliffordOutcome,
    pub sigma_selfiso: bool,
    /// Some `X_j`, `j >= 1`, has eigenvalue `-1`.
    pub minus_one_present: bool,
}

impl CliffordReport {
    pub fn to_json(&self) -> Result<String> {
        let (tag, parts) = match &self.outcome {
            CliffordOutcome::Irreducible(m) => ("Irreducible", vec![m]),
            CliffordOutcome::Splits(a, b) => ("Splits", vec![a, b]),
        };
        let parts: Vec<serde_json::Value> = parts
            .into_iter()
            .map(|m| {
                serde_json::from_str(&m.to_json()?).map_err(|e| HeckeError::Parse(e.to_string()))
            })
            .collect::<Result<_>>()?;
        let v = json!({
            "mu": self.mu,
            "outcome": tag,
            "parts": parts,
            "sigma_selfiso": self.sigma_selfiso,
            "minus_one_present": self.minus_one_present,
        });
        serde_json::to_string(&v).map_err(|e| HeckeError::Parse(e.to_string()))
    }
}

fn full_b(m: &ModuleRep) -> Result<()> {
    let d = m.desc();
    if *d != AlgebraDesc::b(d.n(), d.p().clone(), d.q().clone())? {
        return Err(HeckeError::Domain(format!(
            "Clifford restriction needs an H_n-module, got {d}"
        )));
    }
    Ok(())
}

/// The scalar by which `X_0^2 X_1 ... X_n` acts.
pub fn central_scalar(m: &ModuleRep) -> Result<Scalar> {
    full_b(m)?;
    let mut c = m.mat_x(0).mul(m.mat_x(0));
    for j in 1..=m.n() {
        c = c.mul(m.mat_x(j));
    }
    c.as_scalar()
        .ok_or_else(|| HeckeError::Domain("X0^2 X1...Xn does not act as a scalar".into()))
}

pub fn clifford_restrict(m: &ModuleRep) -> Result<CliffordReport> {
    full_b(m)?;
    if !is_irreducible(m)? {
        return Err(HeckeError::Domain(
            "Clifford restriction needs an irreducible module".into(),
        ));
    }
    let d = m.desc();
    let mu = central_scalar(m)?;
    let minus_one = -Scalar::one();
    let minus_one_present = character(m)?
        .entries()
        .keys()
        .any(|t| t[1..].contains(&minus_one));
    let res = restrict(m, &AlgebraDesc::r(d.n(), d.p().clone(), d.q().clone())?)?;
    let homs = hom_space(m, &twist_sigma(m)?)?;
    let Some(s) = homs.first() else {
        return Ok(CliffordReport {
            mu,
            outcome: CliffordOutcome::Irreducible(res),
            sigma_selfiso: false,
            minus_one_present,
        });
    };
    let sq = s.mul(s);
    let c = sq
        .as_scalar()
        .ok_or_else(|| HeckeError::Domain("square of the intertwiner is not a scalar".into()))?;
    let root = c.sqrt_exact().ok_or_else(|| {
        HeckeError::NonRationalEigenvalue(format!(
            "intertwiner squares to {c}, which is not a rational square"
        ))
    })?;
    let s = s.scale(&root.inv());
    let part = |sign: Scalar| -> Result<ModuleRep> {
        let sub = Submodule::from_vectors(m.dim(), s.sub_scalar(&sign).kernel());
        if !sub.is_invariant(&res) {
            return Err(HeckeError::NotInvariant(
                "eigenspace of the intertwiner".into(),
            ));
        }
        sub_module(&res, &sub)
    };
    let (plus, minus) = (part(Scalar::one())?, part(-Scalar::one())?);
    if plus.dim() + minus.dim() != m.dim() || !is_irreducible(&plus)? || !is_irreducible(&minus)? {
        return Err(HeckeError::Domain(
            "intertwiner eigenspaces are not two simple modules".into(),
        ));
    }
    Ok(CliffordReport {
        mu,
        outcome: CliffordOutcome::Splits(plus, minus),
        sigma_selfiso: true,
        minus_one_present,
    })
}

/// `N, N^ψ, ...` until the twist returns to `N` up to isomorphism (at most two steps).
pub fn psi_orbit(n: &ModuleRep) -> Result<Vec<ModuleRep>> {
    let mut orbit = vec![n.clone()];
    loop {
        let next = twist_psi(orbit.last().expect("nonempty"))?;
        if is_isomorphic(&next, n)? {
            return Ok(orbit);
        }
        if orbit.len() == 2 {
            return Err(HeckeError::Domain("psi orbit longer than two".into()));
        }
        orbit.push(next);
    }
}

/// Matrix of `X_0 Π_{j>=1} (1 + X_j)`.
#[must_use]
pub fn grading_element(m: &ModuleRep) -> Matrix {
    let id = Matrix::identity(m.dim());
    (1..=m.n()).fold(m.mat_x(0).clone(), |acc, j| acc.mul(&id.add(m.mat_x(j))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::FormalCharacter;
    use crate::fixtures::{default_p, default_q, h1_example, h2_example, l_a0_q2};
    use crate::functors::{build_from_path, principal_series, SeriesKind};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn example_one_splits() {
        let m = h1_example(&default_p(), &s(5)).unwrap();
        let r = clifford_restrict(&m).unwrap();
        assert!(r.sigma_selfiso);
        assert!(r.minus_one_present);
        assert_eq!(r.mu, s(-25));
        let CliffordOutcome::Splits(a, b) = &r.outcome else {
            panic!("expected a split")
        };
        assert_eq!((a.dim(), b.dim()), (1, 1));
        assert!(!is_isomorphic(a, b).unwrap());
        let orbit = psi_orbit(a).unwrap();
        assert_eq!(orbit.len(), 2);
        assert!(is_isomorphic(&orbit[1], b).unwrap());
        let mut sum = character(a).unwrap();
        sum.add_all(&character(b).unwrap());
        let whole = restrict(&m, &AlgebraDesc::r(1, default_p(), default_q()).unwrap()).unwrap();
        assert_eq!(sum, character(&whole).unwrap());
        assert!(r.to_json().unwrap().contains("\"outcome\":\"Splits\""));
    }

    #[test]
    fn example_two_stays_irreducible() {
        let m = h2_example(&default_p(), &default_q(), &s(5)).unwrap();
        let r = clifford_restrict(&m).unwrap();
        assert!(!r.sigma_selfiso);
        assert!(matches!(r.outcome, CliffordOutcome::Irreducible(_)));
    }

    #[test]
    fn no_minus_one_means_irreducible_restriction() {
        let (p, q) = (default_p(), default_q());
        let mods = vec![
            l_a0_q2(&p, &q, &s(5)).unwrap(),
            principal_series(SeriesKind::B, Some(&s(5)), &s(7), 2, &p, &q).unwrap(),
            build_from_path(&s(3), &[s(7), Scalar::new(1, 7)], &p, &q)
                .unwrap()
                .result
                .irreducible()
                .unwrap()
                .clone(),
        ];
        for m in mods {
            let r = clifford_restrict(&m).unwrap();
            assert!(!r.minus_one_present);
            assert!(!r.sigma_selfiso);
            let CliffordOutcome::Irreducible(res) = &r.outcome else {
                panic!("unexpected split")
            };
            assert!(is_irreducible(res).unwrap());
            let g = grading_element(&m);
            let c = g.as_scalar().expect("grading element acts as a scalar");
            assert_eq!(
                grading_element(&twist_sigma(&m).unwrap()).as_scalar(),
                Some(-&c)
            );
        }
    }

    #[test]
    fn psi_orbits_have_length_dividing_two() {
        let (p, q) = (default_p(), default_q());
        let m = l_a0_q2(&p, &q, &s(5)).unwrap();
        let r = restrict(&m, &AlgebraDesc::r(1, p, q).unwrap()).unwrap();
        let len = psi_orbit(&r).unwrap().len();
        assert!(len == 1 || len == 2);
        assert_ne!(character(&r).unwrap(), FormalCharacter::new());
    }

    #[test]
    fn rejects_non_b_modules() {
        let m = h1_example(&default_p(), &s(5)).unwrap();
        let r = restrict(&m, &AlgebraDesc::r(1, default_p(), default_q()).unwrap()).unwrap();
        assert!(clifford_restrict(&r).is_err());
    }
}
