//! Named example modules.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{AlgebraDesc, Lattice};
use crate::characters::character;
use crate::error::{HeckeError, Result};
use crate::functors::{crystal_f, induce, principal_series, CrystalResult, SeriesKind};
use crate::linalg::Matrix;
use crate::modrep::{outer_tensor, ModuleRep};
use crate::scalars::Scalar;

pub fn default_p() -> Scalar {
    Scalar::from_int(2)
}

pub fn default_q() -> Scalar {
    Scalar::from_int(3)
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn diag2(a: Scalar, b: Scalar) -> Matrix {
    Matrix::diag(&[a, b])
}

/// Two-dimensional `H_1`-module with `X_1 = -1` and `X_0` swapping the basis vectors.
pub fn h1_example(p: &Scalar, a0: &Scalar) -> Result<ModuleRep> {
    let desc = AlgebraDesc::b(1, p.clone(), default_q())?;
    let t0 = diag2(p.clone(), -p.inv());
    let x0 = Matrix::from_rows(vec![vec![s(0), a0.clone()], vec![a0.clone(), s(0)]]);
    let x1 = Matrix::scalar(2, &s(-1));
    let m = ModuleRep::new(
        desc,
        BTreeMap::from([(0, t0)]),
        BTreeMap::from([(0, x0), (1, x1)]),
    )?;
    Ok(m.with_hints([a0.clone(), -a0, s(-1)]))
}

/// Two-dimensional `H_2`-module that stays irreducible over `H_2^R`.
pub fn h2_example(p: &Scalar, q: &Scalar, a0: &Scalar) -> Result<ModuleRep> {
    let desc = AlgebraDesc::b(2, p.clone(), q.clone())?;
    let one = s(1);
    let kp = p - &p.inv();
    let q2 = q * q;
    let d = &q2 + &one;
    let p2 = p * p;
    let top = &(&(&(&p2 * &p2) * &q2) + &(&(&q2 * &q2) * &p2)) + &(&p2 + &q2);
    let bot = &(&(p * &q2) * &(&p2 - &one)) * &d;
    let t0 = Matrix::from_rows(vec![
        vec![&(&kp * &q2) / &d, &top / &bot],
        vec![&(&q2 * &kp) / &d, &kp / &d],
    ]);
    let t1 = diag2(-q.inv(), q.clone());
    let x0 = diag2(a0.clone(), -&(a0 * &q2));
    let x1 = diag2(-&q2, -q2.inv());
    let x2 = Matrix::scalar(2, &s(-1));
    let m = ModuleRep::new(
        desc,
        BTreeMap::from([(0, t0), (1, t1)]),
        BTreeMap::from([(0, x0), (1, x1), (2, x2)]),
    )?;
    Ok(m.with_hints([a0.clone(), -&(a0 * &q2), -&q2, -q2.inv(), s(-1)]))
}

/// `L(a_0, q^2)`: the two-dimensional `H_1`-module with `X_1` eigenvalues `q^2, q^{-2}`.
pub fn l_a0_q2(p: &Scalar, q: &Scalar, a0: &Scalar) -> Result<ModuleRep> {
    let desc = AlgebraDesc::b(1, p.clone(), q.clone())?;
    let kp = p - &p.inv();
    let q2 = q * q;
    let t0 = Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(1), kp.clone()]]);
    let x0 = Matrix::from_rows(vec![
        vec![a0.clone(), -&(&(&kp * a0) * &q2)],
        vec![s(0), a0 * &q2],
    ]);
    let x1 = Matrix::from_rows(vec![
        vec![q2.clone(), &kp * &(&q2 + &s(1))],
        vec![s(0), q2.inv()],
    ]);
    let m = ModuleRep::new(
        desc,
        BTreeMap::from([(0, t0)]),
        BTreeMap::from([(0, x0), (1, x1)]),
    )?;
    Ok(m.with_hints([a0.clone(), a0 * &q2, q2.clone(), q2.inv()]))
}

/// One-dimensional `H_1`-module with `T_0 = p`, which forces `X_1 = p^2`.
pub fn l_a0_p2(p: &Scalar, q: &Scalar, a0: &Scalar) -> Result<ModuleRep> {
    let desc = AlgebraDesc::b(1, p.clone(), q.clone())?;
    let x = BTreeMap::from([(0, Matrix::scalar(1, a0)), (1, Matrix::scalar(1, &(p * p)))]);
    Ok(
        ModuleRep::new(desc, BTreeMap::from([(0, Matrix::scalar(1, p))]), x)?
            .with_hints([a0.clone(), p * p]),
    )
}

/// `ind (L(a_0, p^2) ⊠ (c))` up to `H_2`.
pub fn shuffle_ex_1(p: &Scalar, q: &Scalar, a0: &Scalar, c: &Scalar) -> Result<ModuleRep> {
    let one = ModuleRep::one_dim(
        AlgebraDesc::new(Lattice::Reduced, 1, p.clone(), q.clone(), BTreeSet::new())?,
        std::slice::from_ref(c),
    )?;
    induce(
        &outer_tensor(&l_a0_p2(p, q, a0)?, &one)?,
        &AlgebraDesc::b(2, p.clone(), q.clone())?,
    )
}

/// `ind ((a_0) ⊠ L^A(-q^{-2}, -1, -q^2))` up to `H_3`.
pub fn shuffle_ex_2(p: &Scalar, q: &Scalar, a0: &Scalar) -> Result<ModuleRep> {
    let q2 = q * q;
    let vals = [-q2.inv(), s(-1), -&q2];
    let a3 = AlgebraDesc::a(3, p.clone(), q.clone())?;
    let x = vals
        .iter()
        .enumerate()
        .map(|(i, v)| (i + 1, Matrix::scalar(1, v)))
        .collect();
    let t = BTreeMap::from([(1, Matrix::scalar(1, q)), (2, Matrix::scalar(1, q))]);
    let la = ModuleRep::new(a3, t, x)?.with_hints(vals);
    let lat = ModuleRep::one_dim(
        AlgebraDesc::new(Lattice::Full, 0, p.clone(), q.clone(), BTreeSet::new())?,
        std::slice::from_ref(a0),
    )?;
    induce(
        &outer_tensor(&lat, &la)?,
        &AlgebraDesc::b(3, p.clone(), q.clone())?,
    )
}

/// The two halves of `f̃_1 L(a_0, q^2)`, ordered by character.
pub fn small_counterexample_parts(
    p: &Scalar,
    q: &Scalar,
    a0: &Scalar,
) -> Result<(ModuleRep, ModuleRep)> {
    match crystal_f(&l_a0_q2(p, q, a0)?, &s(1))? {
        CrystalResult::SplitPair(x, y) => {
            if character(&x)? <= character(&y)? {
                Ok((x, y))
            } else {
                Ok((y, x))
            }
        }
        other => Err(HeckeError::Domain(format!(
            "expected a split, got {}",
            other.tag()
        ))),
    }
}

/// A named module with a fixed recipe.
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> Result<ModuleRep>,
}

impl Fixture {
    pub fn build(&self) -> Result<ModuleRep> {
        (self.build)()
    }

    /// Pretty JSON; identical bytes on every run.
    pub fn to_json(&self) -> Result<String> {
        self.build()?.to_json_pretty()
    }
}

fn pq() -> (Scalar, Scalar) {
    (default_p(), default_q())
}

fn counterexample_part(k: usize) -> Result<ModuleRep> {
    let (p, q) = pq();
    let (x, y) = small_counterexample_parts(&p, &q, &s(5))?;
    Ok(if k == 0 { x } else { y })
}

/// Every named fixture, with `p = 2`, `q = 3`.
#[must_use]
pub fn registry() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "h1-example",
            description: "H_1, X_1 = -1, X_0 swaps; a_0 = 5",
            build: || h1_example(&default_p(), &s(5)),
        },
        Fixture {
            name: "h2-example",
            description: "H_2, irreducible over H_2^R; a_0 = 5",
            build: || h2_example(&default_p(), &default_q(), &s(5)),
        },
        Fixture {
            name: "shuffle-ex-1",
            description: "ind L(5, p^2) ⊠ (11) to H_2",
            build: || {
                let (p, q) = pq();
                shuffle_ex_1(&p, &q, &s(5), &s(11))
            },
        },
        Fixture {
            name: "shuffle-ex-2",
            description: "ind (5) ⊠ L^A(-q^-2, -1, -q^2) to H_3",
            build: || {
                let (p, q) = pq();
                shuffle_ex_2(&p, &q, &s(5))
            },
        },
        Fixture {
            name: "katoA2",
            description: "type A principal series (7, 7)",
            build: || {
                let (p, q) = pq();
                principal_series(SeriesKind::A, None, &s(7), 2, &p, &q)
            },
        },
        Fixture {
            name: "katoA3",
            description: "type A principal series (7, 7, 7)",
            build: || {
                let (p, q) = pq();
                principal_series(SeriesKind::A, None, &s(7), 3, &p, &q)
            },
        },
        Fixture {
            name: "katoB1",
            description: "cosocle of ind (5, 7) to H_1",
            build: || {
                let (p, q) = pq();
                principal_series(SeriesKind::B, Some(&s(5)), &s(7), 1, &p, &q)
            },
        },
        Fixture {
            name: "katoB2",
            description: "cosocle of ind (5, 7, 7) to H_2",
            build: || {
                let (p, q) = pq();
                principal_series(SeriesKind::B, Some(&s(5)), &s(7), 2, &p, &q)
            },
        },
        Fixture {
            name: "L-a0-q2",
            description: "L(5, q^2), X_1 eigenvalues q^2, q^-2",
            build: || {
                let (p, q) = pq();
                l_a0_q2(&p, &q, &s(5))
            },
        },
        Fixture {
            name: "smallcounterex-1",
            description: "first simple summand of cosoc f_1 L(5, q^2)",
            build: || counterexample_part(0),
        },
        Fixture {
            name: "smallcounterex-2",
            description: "second simple summand of cosoc f_1 L(5, q^2)",
            build: || counterexample_part(1),
        },
    ]
}

pub fn find(name: &str) -> Result<Fixture> {
    registry()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| HeckeError::Domain(format!("no fixture named {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modrep::{is_irreducible, module_ok};

    #[test]
    fn registry_builds_valid_modules() {
        let all = registry();
        assert!(all.len() >= 8);
        for f in &all {
            let m = f.build().unwrap();
            assert!(module_ok(&m), "{}", f.name);
            let back = ModuleRep::from_json(&f.to_json().unwrap()).unwrap();
            assert_eq!(back, m, "{}", f.name);
        }
        let parts = [
            find("smallcounterex-1").unwrap().build().unwrap(),
            find("smallcounterex-2").unwrap().build().unwrap(),
        ];
        assert!(parts
            .iter()
            .all(|m| m.dim() == 4 && is_irreducible(m).unwrap()));
        assert!(find("nope").is_err());
    }

    #[test]
    fn rebuild_is_byte_identical() {
        for f in registry() {
            assert_eq!(f.to_json().unwrap(), f.to_json().unwrap(), "{}", f.name);
        }
    }
}
