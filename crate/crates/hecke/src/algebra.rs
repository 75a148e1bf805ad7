//! Normal-form elements `Σ T_w P_w` of the affine Hecke algebra of type B and its subalgebras.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::scalars::{LaurentPoly, Scalar, Weight};
use crate::weyl::{self, WeylElem};

/// Which lattice variables are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lattice {
    /// `X_0, ..., X_n`
    Full,
    /// `X_1, ..., X_n`
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    B,
    R,
    A,
    Lattice,
    ReducedLattice,
    ParabolicB,
    ParabolicR,
}

impl Variant {
    #[must_use]
    pub fn lattice(self) -> Lattice {
        match self {
            Variant::B | Variant::Lattice | Variant::ParabolicB => Lattice::Full,
            _ => Lattice::Reduced,
        }
    }
}

/// An algebra: rank, parameters, lattice and the finite generators `T_i` present.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DescRepr", into = "DescRepr")]
pub struct AlgebraDesc {
    variant: Variant,
    n: usize,
    p: Scalar,
    q: Scalar,
    gens: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct DescRepr {
    variant: Variant,
    n: usize,
    p: Scalar,
    q: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<usize>>,
}

impl TryFrom<DescRepr> for AlgebraDesc {
    type Error = HeckeError;

    fn try_from(r: DescRepr) -> Result<Self> {
        let gens = match r.variant {
            Variant::ParabolicB | Variant::ParabolicR => r
                .gens
                .ok_or_else(|| HeckeError::Parse("parabolic variant needs \"gens\"".into()))?
                .into_iter()
                .collect(),
            v => default_gens(v, r.n),
        };
        AlgebraDesc::new(r.variant.lattice(), r.n, r.p, r.q, gens)
    }
}

impl From<AlgebraDesc> for DescRepr {
    fn from(d: AlgebraDesc) -> Self {
        let gens = matches!(d.variant, Variant::ParabolicB | Variant::ParabolicR)
            .then(|| d.gens.iter().copied().collect());
        DescRepr {
            variant: d.variant,
            n: d.n,
            p: d.p,
            q: d.q,
            gens,
        }
    }
}

fn default_gens(v: Variant, n: usize) -> BTreeSet<usize> {
    match v {
        Variant::B | Variant::R => (0..n).collect(),
        Variant::A => (1..n).collect(),
        _ => BTreeSet::new(),
    }
}

impl AlgebraDesc {
    /// Canonical descriptor; the variant label is derived from lattice and generators.
    pub fn new(
        lattice: Lattice,
        n: usize,
        p: Scalar,
        q: Scalar,
        gens: BTreeSet<usize>,
    ) -> Result<Self> {
        for (name, v) in [("p", &p), ("q", &q)] {
            if v.is_zero() || v.abs().is_one() {
                return Err(HeckeError::InvalidParameters(format!(
                    "{name} = {v} is zero or a root of unity"
                )));
            }
        }
        if let Some(&g) = gens.iter().find(|&&g| g >= n) {
            return Err(HeckeError::OutOfRange(format!(
                "generator T{g} in rank {n}"
            )));
        }
        if lattice == Lattice::Reduced && gens.contains(&0) && n == 0 {
            return Err(HeckeError::OutOfRange("T0 in rank 0".into()));
        }
        let all: BTreeSet<usize> = (0..n).collect();
        let type_a: BTreeSet<usize> = (1..n).collect();
        let variant = match lattice {
            Lattice::Full if gens == all => Variant::B,
            Lattice::Full if gens.is_empty() => Variant::Lattice,
            Lattice::Full => Variant::ParabolicB,
            Lattice::Reduced if gens == all => Variant::R,
            Lattice::Reduced if gens == type_a => Variant::A,
            Lattice::Reduced if gens.is_empty() => Variant::ReducedLattice,
            Lattice::Reduced => Variant::ParabolicR,
        };
        Ok(AlgebraDesc {
            variant,
            n,
            p,
            q,
            gens,
        })
    }

    /// From a variant label; `gens` is required exactly for the parabolic variants.
    pub fn from_parts(
        variant: Variant,
        n: usize,
        p: Scalar,
        q: Scalar,
        gens: Option<Vec<usize>>,
    ) -> Result<Self> {
        DescRepr {
            variant,
            n,
            p,
            q,
            gens,
        }
        .try_into()
    }

    /// `gens` is `Some` exactly for the parabolic variants.
    #[must_use]
    pub fn parabolic_gens(&self) -> Option<Vec<usize>> {
        matches!(self.variant, Variant::ParabolicB | Variant::ParabolicR)
            .then(|| self.gens.iter().copied().collect())
    }

    pub fn b(n: usize, p: Scalar, q: Scalar) -> Result<Self> {
        Self::new(Lattice::Full, n, p, q, (0..n).collect())
    }

    pub fn r(n: usize, p: Scalar, q: Scalar) -> Result<Self> {
        Self::new(Lattice::Reduced, n, p, q, (0..n).collect())
    }

    pub fn a(n: usize, p: Scalar, q: Scalar) -> Result<Self> {
        Self::new(Lattice::Reduced, n, p, q, (1..n).collect())
    }

    #[must_use]
    pub fn variant(&self) -> Variant {
        self.variant
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn p(&self) -> &Scalar {
        &self.p
    }

    #[must_use]
    pub fn q(&self) -> &Scalar {
        &self.q
    }

    #[must_use]
    pub fn gens(&self) -> &BTreeSet<usize> {
        &self.gens
    }

    #[must_use]
    pub fn lattice(&self) -> Lattice {
        self.variant.lattice()
    }

    #[must_use]
    pub fn has_x0(&self) -> bool {
        self.lattice() == Lattice::Full
    }

    /// Indices `j` of the lattice generators `X_j` present.
    #[must_use]
    pub fn x_indices(&self) -> Vec<usize> {
        let start = usize::from(!self.has_x0());
        (start..=self.n).collect()
    }

    /// Same parameters, different lattice/generators.
    pub fn with(&self, lattice: Lattice, n: usize, gens: BTreeSet<usize>) -> Result<Self> {
        Self::new(lattice, n, self.p.clone(), self.q.clone(), gens)
    }

    /// Quadratic parameter of `T_i`: `p` for `i = 0`, else `q`.
    #[must_use]
    pub fn param(&self, i: usize) -> &Scalar {
        if i == 0 {
            &self.p
        } else {
            &self.q
        }
    }

    /// `param - param^{-1}`.
    #[must_use]
    pub fn kappa(&self, i: usize) -> Scalar {
        let t = self.param(i);
        t - &t.inv()
    }

    /// `true` if `w` lies in the finite Weyl group generated by the present `T_i`.
    #[must_use]
    pub fn contains_weyl(&self, w: &WeylElem) -> bool {
        w.rank() == self.n && weyl::is_in_parabolic(w, &self.gens)
    }
}

impl fmt::Display for AlgebraDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}(n={}, p={}, q={}",
            self.variant, self.n, self.p, self.q
        )?;
        if matches!(self.variant, Variant::ParabolicB | Variant::ParabolicR) {
            let g: Vec<String> = self.gens.iter().map(usize::to_string).collect();
            write!(f, ", gens={{{}}}", g.join(","))?;
        }
        write!(f, ")")
    }
}

/// Element `Σ_w T_w P_w` in the basis `{T_w X^c}`.
#[derive(Clone, PartialEq, Eq)]
pub struct NormalFormElem {
    desc: Arc<AlgebraDesc>,
    terms: BTreeMap<WeylElem, LaurentPoly>,
}

impl NormalFormElem {
    #[must_use]
    pub fn zero(desc: &Arc<AlgebraDesc>) -> Self {
        NormalFormElem {
            desc: Arc::clone(desc),
            terms: BTreeMap::new(),
        }
    }

    #[must_use]
    pub fn one(desc: &Arc<AlgebraDesc>) -> Self {
        Self::from_poly(desc, LaurentPoly::one(desc.n + 1))
    }

    #[must_use]
    pub fn scalar(desc: &Arc<AlgebraDesc>, c: Scalar) -> Self {
        Self::from_poly(desc, LaurentPoly::constant(desc.n + 1, c))
    }

    /// Lattice element (`X_0` must be absent from `f` in reduced variants).
    #[must_use]
    pub fn from_poly(desc: &Arc<AlgebraDesc>, f: LaurentPoly) -> Self {
        let mut e = Self::zero(desc);
        e.add_term(WeylElem::identity(desc.n), f);
        e
    }

    /// `T_i`.
    pub fn t(desc: &Arc<AlgebraDesc>, i: usize) -> Result<Self> {
        if !desc.gens.contains(&i) {
            return Err(HeckeError::OutOfRange(format!(
                "T{i} is not a generator of {desc}"
            )));
        }
        Ok(Self::tw(desc, WeylElem::simple(desc.n, i)?))
    }

    /// `T_w`; the caller guarantees `w` lies in the allowed Weyl group.
    #[must_use]
    pub fn tw(desc: &Arc<AlgebraDesc>, w: WeylElem) -> Self {
        let mut e = Self::zero(desc);
        e.add_term(w, LaurentPoly::one(desc.n + 1));
        e
    }

    /// `X_j^e`.
    pub fn x(desc: &Arc<AlgebraDesc>, j: usize, e: i32) -> Result<Self> {
        if j > desc.n || (j == 0 && !desc.has_x0()) {
            return Err(HeckeError::OutOfRange(format!(
                "X{j} is not a generator of {desc}"
            )));
        }
        Ok(Self::from_poly(desc, LaurentPoly::var(desc.n + 1, j, e)))
    }

    /// `X^c` for an exponent vector of length `n+1`.
    pub fn monomial(desc: &Arc<AlgebraDesc>, c: Weight) -> Result<Self> {
        if c.len() != desc.n + 1 {
            return Err(HeckeError::RankMismatch(c.len(), desc.n + 1));
        }
        if c[0] != 0 && !desc.has_x0() {
            return Err(HeckeError::OutOfRange("X0 is not a generator".into()));
        }
        Ok(Self::from_poly(
            desc,
            LaurentPoly::monomial(c, Scalar::one()),
        ))
    }

    #[must_use]
    pub fn desc(&self) -> &Arc<AlgebraDesc> {
        &self.desc
    }

    #[must_use]
    pub fn terms(&self) -> &BTreeMap<WeylElem, LaurentPoly> {
        &self.terms
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: WeylElem, f: LaurentPoly) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(g) => {
                g.add_assign_scaled(&f, &Scalar::one());
                if g.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, f);
            }
        }
    }

    fn check_same(&self, other: &NormalFormElem) -> Result<()> {
        if self.desc != other.desc {
            return Err(HeckeError::Incompatible(format!(
                "{} vs {}",
                self.desc, other.desc
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NormalFormElem) -> Result<NormalFormElem> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, f) in &other.terms {
            out.add_term(w.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &NormalFormElem) -> Result<NormalFormElem> {
        self.try_add(&other.scale(&-Scalar::one()))
    }

    #[must_use]
    pub fn scale(&self, c: &Scalar) -> NormalFormElem {
        let mut out = Self::zero(&self.desc);
        if c.is_zero() {
            return out;
        }
        for (w, f) in &self.terms {
            out.terms.insert(w.clone(), f.scale(c));
        }
        out
    }

    /// Exact product in normal form.
    pub fn try_mul(&self, other: &NormalFormElem) -> Result<NormalFormElem> {
        Engine::new().mul(self, other)
    }

    /// Longest Weyl part present, if any.
    #[must_use]
    pub fn top_length(&self) -> Option<usize> {
        self.terms.keys().map(WeylElem::length).max()
    }

    /// Anti-automorphism `τ` read on this element as a basis-1 expression:
    /// `Σ T_w P_w ↦ Σ P_w T_{w^{-1}}`, returned as raw `(w^{-1}, P_w)` pairs.
    fn tau_raw(&self) -> Vec<(WeylElem, LaurentPoly)> {
        self.terms
            .iter()
            .map(|(w, f)| (w.inverse(), f.clone()))
            .collect()
    }

    /// Rewrite in the basis `{X^c T_w}`: map `w ↦ P_w` meaning `Σ P_w T_w`.
    pub fn to_basis1(&self) -> Result<Basis1Elem> {
        let engine = Engine::new();
        // τ(self) = Σ P_w T_{w^{-1}}; straighten it into Σ T_v Q_v, then apply τ again
        let mut z = Self::zero(&self.desc);
        for (winv, f) in self.tau_raw() {
            let left = Self::from_poly(&self.desc, f);
            let prod = engine.mul(&left, &Self::tw(&self.desc, winv))?;
            z = z.try_add(&prod)?;
        }
        let terms = z.terms.into_iter().map(|(v, q)| (v.inverse(), q)).collect();
        Ok(Basis1Elem { terms })
    }

    /// JSON form `[{"word": [...], "monomials": [{"exp": [...], "coeff": "..."}]}]`.
    #[must_use]
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(w, f)| {
                let monos: Vec<serde_json::Value> = f
                    .terms()
                    .map(|(e, c)| serde_json::json!({"exp": e, "coeff": c.to_string()}))
                    .collect();
                serde_json::json!({"word": w.reduced_word(), "monomials": monos})
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for NormalFormElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, p) in &self.terms {
            for (e, c) in p.terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let word: Vec<String> = w.reduced_word().iter().map(usize::to_string).collect();
                let exps: Vec<String> = e.iter().map(i32::to_string).collect();
                write!(f, "T[{}] * ({c}) X({})", word.join(","), exps.join(","))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NormalFormElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element written as `Σ P_w T_w` (lattice on the left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis1Elem {
    pub terms: BTreeMap<WeylElem, LaurentPoly>,
}

impl fmt::Display for Basis1Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, p) in &self.terms {
            for (e, c) in p.terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let word: Vec<String> = w.reduced_word().iter().map(usize::to_string).collect();
                let exps: Vec<String> = e.iter().map(i32::to_string).collect();
                write!(f, "({c}) X({}) * T[{}]", exps.join(","), word.join(","))?;
            }
        }
        Ok(())
    }
}

/// Straightening engine. `flip_crossing` negates every correction term when a
/// monomial crosses a `T_i`; it exists only to check that the relation suite
/// notices a broken engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct Engine {
    flip_crossing: bool,
}

impl Engine {
    #[must_use]
    pub fn new() -> Self {
        Engine {
            flip_crossing: false,
        }
    }

    #[must_use]
    pub fn mutated() -> Self {
        Engine {
            flip_crossing: true,
        }
    }

    /// `X^c T_j = T_j X^{s_j c} + R`; returns `s_j c` and the monomials of
    /// `R / κ_j` with their signs.
    #[must_use]
    pub fn cross(c: &[i32], j: usize) -> (Weight, Vec<(Weight, i64)>) {
        let mut sc = c.to_vec();
        let mut rest = Vec::new();
        if j == 0 {
            // R = κ_p X_1 (f - s_0 f)/(X_1 - 1)
            sc[1] = c[0] - c[1];
            let d = 2 * c[1] - c[0];
            if d > 0 {
                for k in 0..d {
                    let mut m = c.to_vec();
                    m[1] -= k;
                    rest.push((m, 1));
                }
            } else {
                for k in 1..=-d {
                    let mut m = c.to_vec();
                    m[1] += k;
                    rest.push((m, -1));
                }
            }
        } else {
            // R = κ (f - s_j f)/(1 - X_j X_{j+1}^{-1})
            sc.swap(j, j + 1);
            let d = c[j] - c[j + 1];
            if d > 0 {
                for k in 1..=d {
                    let mut m = c.to_vec();
                    m[j] -= k;
                    m[j + 1] += k;
                    rest.push((m, -1));
                }
            } else {
                for k in 0..-d {
                    let mut m = c.to_vec();
                    m[j] += k;
                    m[j + 1] -= k;
                    rest.push((m, 1));
                }
            }
        }
        (sc, rest)
    }

    /// `P T_j = T_j s_j(P) + R(P)`.
    fn cross_poly(
        &self,
        desc: &AlgebraDesc,
        f: &LaurentPoly,
        j: usize,
    ) -> (LaurentPoly, LaurentPoly) {
        let rank = desc.n + 1;
        let mut kappa = desc.kappa(j);
        if self.flip_crossing {
            kappa = -kappa;
        }
        let mut sf = LaurentPoly::zero(rank);
        let mut r = LaurentPoly::zero(rank);
        for (c, a) in f.terms() {
            let (sc, rest) = Self::cross(c, j);
            sf.add_term(sc, a.clone());
            if !rest.is_empty() {
                let ak = a * &kappa;
                for (m, s) in rest {
                    let coef = if s > 0 { ak.clone() } else { -&ak };
                    r.add_term(m, coef);
                }
            }
        }
        (sf, r)
    }

    /// `elem · T_j`.
    pub fn right_mul_t(&self, elem: &NormalFormElem, j: usize) -> Result<NormalFormElem> {
        let desc = &elem.desc;
        if !desc.gens.contains(&j) {
            return Err(HeckeError::OutOfRange(format!(
                "T{j} is not a generator of {desc}"
            )));
        }
        let kappa = desc.kappa(j);
        let mut out = NormalFormElem::zero(desc);
        for (u, f) in &elem.terms {
            let (sf, r) = self.cross_poly(desc, f, j);
            let us = u.times_simple(j);
            if us.length() > u.length() {
                out.add_term(us, sf);
            } else {
                out.add_term(u.clone(), sf.scale(&kappa));
                out.add_term(us, sf);
            }
            out.add_term(u.clone(), r);
        }
        Ok(out)
    }

    /// Exact product `a · b`.
    pub fn mul(&self, a: &NormalFormElem, b: &NormalFormElem) -> Result<NormalFormElem> {
        a.check_same(b)?;
        let mut out = NormalFormElem::zero(&a.desc);
        for (v, q) in &b.terms {
            let mut t = a.clone();
            for j in v.reduced_word() {
                t = self.right_mul_t(&t, j)?;
            }
            for (w, f) in t.terms {
                out.add_term(w, f.try_mul(q)?);
            }
        }
        Ok(out)
    }

    /// Product of several factors, left to right.
    pub fn mul_all(&self, factors: &[&NormalFormElem]) -> Result<NormalFormElem> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| HeckeError::Domain("empty product".into()))?;
        let mut acc = (*first).clone();
        for f in rest {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }
}

/// Normal form of `X^c T_w`.
pub fn x_times_tw(desc: &Arc<AlgebraDesc>, c: Weight, w: &WeylElem) -> Result<NormalFormElem> {
    let engine = Engine::new();
    let mut e = NormalFormElem::monomial(desc, c)?;
    for j in w.reduced_word() {
        e = engine.right_mul_t(&e, j)?;
    }
    Ok(e)
}

/// `T_w X^c` rewritten with the lattice on the left.
pub fn tw_times_x(desc: &Arc<AlgebraDesc>, w: &WeylElem, c: Weight) -> Result<Basis1Elem> {
    let mut e = NormalFormElem::zero(desc);
    e.add_term(w.clone(), LaurentPoly::monomial(c, Scalar::one()));
    e.to_basis1()
}

/// One instance of a defining relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub family: String,
    pub instance: String,
    pub pass: bool,
}

/// Relation instances `(family, label, lhs - rhs)` for a descriptor.
pub fn relation_instances(
    desc: &Arc<AlgebraDesc>,
    engine: Engine,
) -> Result<Vec<(String, String, NormalFormElem)>> {
    let n = desc.n;
    let gens = desc.gens.clone();
    let one = NormalFormElem::one(desc);
    let t = |i: usize| NormalFormElem::t(desc, i);
    let x = |j: usize, e: i32| NormalFormElem::x(desc, j, e);
    let m = |fs: &[&NormalFormElem]| engine.mul_all(fs);
    let mut out = Vec::new();
    for &i in &gens {
        let ti = t(i)?;
        let k = desc.kappa(i);
        let lhs = m(&[&ti, &ti])?.try_sub(&ti.scale(&k))?.try_sub(&one)?;
        let fam = if i == 0 { "1" } else { "2" };
        out.push((fam.to_string(), format!("(T{i}-t)(T{i}+1/t)=0"), lhs));
    }
    for &i in gens.iter().filter(|&&i| i >= 1) {
        if gens.contains(&(i + 1)) {
            let (a, b) = (t(i)?, t(i + 1)?);
            let d = m(&[&a, &b, &a])?.try_sub(&m(&[&b, &a, &b])?)?;
            out.push((
                "3".into(),
                format!("T{i}T{}T{i}=T{}T{i}T{}", i + 1, i + 1, i + 1),
                d,
            ));
        }
    }
    for &i in &gens {
        for &j in gens.iter().filter(|&&j| j > i + 1) {
            let (a, b) = (t(i)?, t(j)?);
            let d = m(&[&a, &b])?.try_sub(&m(&[&b, &a])?)?;
            out.push(("4".into(), format!("T{i}T{j}=T{j}T{i}"), d));
        }
    }
    if gens.contains(&0) && gens.contains(&1) {
        let (a, b) = (t(1)?, t(0)?);
        let d = m(&[&a, &b, &a, &b])?.try_sub(&m(&[&b, &a, &b, &a])?)?;
        out.push(("5".into(), "T1T0T1T0=T0T1T0T1".into(), d));
    }
    if gens.contains(&0) {
        let t0 = t(0)?;
        if desc.has_x0() {
            let d = m(&[&t0, &x(0, 1)?, &t0])?.try_sub(&m(&[&x(0, 1)?, &x(1, 1)?])?)?;
            out.push(("6".into(), "T0X0T0=X0X1".into(), d));
        } else {
            let x1 = x(1, 1)?;
            let rhs = m(&[&t0, &x(1, -1)?])?.try_add(&x1.try_add(&one)?.scale(&desc.kappa(0)))?;
            let d = m(&[&x1, &t0])?.try_sub(&rhs)?;
            out.push(("6".into(), "X1T0=T0X1^-1+(p-1/p)(X1+1)".into(), d));
        }
    }
    for &i in &gens {
        for j in desc.x_indices() {
            if j == i || j == i + 1 {
                continue;
            }
            let (a, b) = (t(i)?, x(j, 1)?);
            let d = m(&[&a, &b])?.try_sub(&m(&[&b, &a])?)?;
            out.push(("7".into(), format!("T{i}X{j}=X{j}T{i}"), d));
        }
    }
    for &i in gens.iter().filter(|&&i| i >= 1 && i < n) {
        let ti = t(i)?;
        let d = m(&[&ti, &x(i, 1)?, &ti])?.try_sub(&x(i + 1, 1)?)?;
        out.push(("8".into(), format!("T{i}X{i}T{i}=X{}", i + 1), d));
    }
    Ok(out)
}

/// Evaluate every defining relation as a normal-form identity.
pub fn check_defining_relations(desc: &AlgebraDesc) -> Result<Vec<RelationCheck>> {
    check_relations_with(desc, Engine::new())
}

pub fn check_relations_with(desc: &AlgebraDesc, engine: Engine) -> Result<Vec<RelationCheck>> {
    let desc = Arc::new(desc.clone());
    Ok(relation_instances(&desc, engine)?
        .into_iter()
        .map(|(family, instance, d)| RelationCheck {
            family,
            instance,
            pass: d.is_zero(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::enumerate_group;
    use proptest::prelude::*;

    fn desc_b(n: usize) -> Arc<AlgebraDesc> {
        Arc::new(AlgebraDesc::b(n, Scalar::from_int(2), Scalar::from_int(3)).unwrap())
    }

    fn poly(rank: usize, terms: &[(&[i32], i64)]) -> LaurentPoly {
        let mut f = LaurentPoly::zero(rank);
        for (e, c) in terms {
            f.add_term(e.to_vec(), Scalar::from_int(*c));
        }
        f
    }

    /// Crossing `X^c T_j` one unit exponent at a time, using only the eight unit rules.
    fn cross_unit_steps(desc: &Arc<AlgebraDesc>, c: &[i32], j: usize) -> NormalFormElem {
        let rank = desc.n + 1;
        let tj = NormalFormElem::t(desc, j).unwrap();
        // find a nonzero coordinate to peel off
        let Some(k) = c.iter().position(|&e| e != 0) else {
            return tj;
        };
        let step = c[k].signum();
        let mut rest = c.to_vec();
        rest[k] -= step;
        // X^c T_j = X^{rest} (X^{unit} T_j)
        let kappa = desc.kappa(j);
        let mut xu_t = NormalFormElem::zero(desc);
        let mut mono = |e: Weight, s: Scalar, w: Option<WeylElem>| {
            let w = w.unwrap_or_else(|| WeylElem::identity(desc.n));
            xu_t.add_term(w, LaurentPoly::monomial(e, s));
        };
        let sj = Some(WeylElem::simple(desc.n, j).unwrap());
        let e = |pairs: &[(usize, i32)]| {
            let mut v = vec![0; rank];
            for &(i, x) in pairs {
                v[i] += x;
            }
            v
        };
        let kp = kappa.clone();
        match (j, k, step) {
            (0, 1, 1) => {
                mono(e(&[(1, -1)]), Scalar::one(), sj);
                mono(e(&[(1, 1)]), kp.clone(), None);
                mono(e(&[]), kp, None);
            }
            (0, 1, -1) => {
                mono(e(&[(1, 1)]), Scalar::one(), sj);
                mono(e(&[(1, 1)]), -&kp, None);
                mono(e(&[]), -kp, None);
            }
            (0, 0, 1) => {
                mono(e(&[(0, 1), (1, 1)]), Scalar::one(), sj);
                mono(e(&[(0, 1), (1, 1)]), -kp, None);
            }
            (0, 0, -1) => {
                mono(e(&[(0, -1), (1, -1)]), Scalar::one(), sj);
                mono(e(&[(0, -1)]), kp, None);
            }
            (j, k, 1) if k == j => {
                mono(e(&[(j + 1, 1)]), Scalar::one(), sj);
                mono(e(&[(j + 1, 1)]), -kp, None);
            }
            (j, k, 1) if k == j + 1 => {
                mono(e(&[(j, 1)]), Scalar::one(), sj);
                mono(e(&[(j + 1, 1)]), kp, None);
            }
            (j, k, -1) if k == j => {
                mono(e(&[(j + 1, -1)]), Scalar::one(), sj);
                mono(e(&[(j, -1)]), kp, None);
            }
            (j, k, -1) if k == j + 1 => {
                mono(e(&[(j, -1)]), Scalar::one(), sj);
                mono(e(&[(j, -1)]), -kp, None);
            }
            (_, k, s) => {
                mono(e(&[(k, s)]), Scalar::one(), sj);
            }
        }
        // X^{rest} · (Σ T_w m_w) = Σ (X^{rest} T_w) m_w, recursing on X^{rest} T_j
        let mut out = NormalFormElem::zero(desc);
        for (w, f) in xu_t.terms() {
            let head = if w.is_identity() {
                NormalFormElem::monomial(desc, rest.clone()).unwrap()
            } else {
                cross_unit_steps(desc, &rest, j)
            };
            let tail = NormalFormElem::from_poly(desc, f.clone());
            out = out
                .try_add(&Engine::new().mul(&head, &tail).unwrap())
                .unwrap();
        }
        out
    }

    #[test]
    fn t_squared() {
        let d = desc_b(2);
        let t1 = NormalFormElem::t(&d, 1).unwrap();
        let sq = t1.try_mul(&t1).unwrap();
        let expect = t1
            .scale(&d.kappa(1))
            .try_add(&NormalFormElem::one(&d))
            .unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn x1_t0_derived_relation() {
        let d = desc_b(2);
        let lhs = NormalFormElem::x(&d, 1, 1)
            .unwrap()
            .try_mul(&NormalFormElem::t(&d, 0).unwrap())
            .unwrap();
        let kp = d.kappa(0);
        let mut expect = NormalFormElem::t(&d, 0)
            .unwrap()
            .try_mul(&NormalFormElem::x(&d, 1, -1).unwrap())
            .unwrap();
        expect = expect
            .try_add(&NormalFormElem::from_poly(
                &d,
                poly(3, &[(&[0, 1, 0], 1), (&[0, 0, 0], 1)]).scale(&kp),
            ))
            .unwrap();
        assert_eq!(lhs, expect);
    }

    #[test]
    fn braid_of_length_four() {
        let d = desc_b(2);
        let (t0, t1) = (
            NormalFormElem::t(&d, 0).unwrap(),
            NormalFormElem::t(&d, 1).unwrap(),
        );
        let e = Engine::new();
        let a = e.mul_all(&[&t1, &t0, &t1, &t0]).unwrap();
        let b = e.mul_all(&[&t0, &t1, &t0, &t1]).unwrap();
        assert!(a.try_sub(&b).unwrap().is_zero());
    }

    #[test]
    fn relation_suite_passes() {
        let (p, q) = (Scalar::from_int(2), Scalar::from_int(3));
        for n in 1..=3 {
            for desc in [
                AlgebraDesc::b(n, p.clone(), q.clone()),
                AlgebraDesc::r(n, p.clone(), q.clone()),
                AlgebraDesc::a(n, p.clone(), q.clone()),
            ] {
                let desc = desc.unwrap();
                let report = check_defining_relations(&desc).unwrap();
                for r in &report {
                    assert!(r.pass, "{desc}: {} failed", r.instance);
                }
                if n == 3 && desc.variant() != Variant::R {
                    assert!(report.iter().any(|r| r.family == "3"));
                }
            }
        }
    }

    #[test]
    fn mutated_engine_breaks_relation_eight() {
        let d = AlgebraDesc::b(2, Scalar::from_int(2), Scalar::from_int(3)).unwrap();
        let report = check_relations_with(&d, Engine::mutated()).unwrap();
        assert!(report.iter().any(|r| r.family == "8" && !r.pass));
    }

    #[test]
    fn closed_form_crossing_matches_unit_steps() {
        for n in 1..=2 {
            let d = desc_b(n);
            let range = -2..=2;
            for j in 0..n {
                for c0 in range.clone() {
                    for c1 in range.clone() {
                        for c2 in if n == 2 { range.clone() } else { 0..=0 } {
                            let c: Weight = if n == 2 {
                                vec![c0, c1, c2]
                            } else {
                                vec![c0, c1]
                            };
                            let fast = x_times_tw(&d, c.clone(), &WeylElem::simple(n, j).unwrap())
                                .unwrap();
                            let slow = cross_unit_steps(&d, &c, j);
                            assert_eq!(fast, slow, "c={c:?} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn x_times_tw_top_term() {
        let d = desc_b(2);
        for e in enumerate_group(2).unwrap().iter() {
            for i in 0..=2 {
                let mut ei = vec![0; 3];
                ei[i] = 1;
                let c = e.elem.act_on_weight(&ei);
                let prod = x_times_tw(&d, c, &e.elem).unwrap();
                let top = &prod.terms()[&e.elem];
                assert_eq!(*top, LaurentPoly::monomial(ei.clone(), Scalar::one()));
                for w in prod.terms().keys() {
                    assert!(w.length() <= e.elem.length());
                }
            }
        }
    }

    #[test]
    fn tw_times_x_lemma() {
        // T_w X_i = X_{w(i)} T_w + lower terms
        let d = desc_b(2);
        for e in enumerate_group(2).unwrap().iter() {
            for i in 0..=2 {
                let mut ei = vec![0; 3];
                ei[i] = 1;
                let b1 = tw_times_x(&d, &e.elem, ei.clone()).unwrap();
                let top = &b1.terms[&e.elem];
                assert_eq!(
                    *top,
                    LaurentPoly::monomial(e.elem.act_on_weight(&ei), Scalar::one())
                );
                for w in b1.terms.keys() {
                    assert!(w.length() <= e.elem.length());
                }
            }
        }
        // T_1 X_1 = X_2 T_1 - κ X_2 (from X_2 T_1 = T_1 X_1 + κ X_2)
        let s1 = WeylElem::simple(2, 1).unwrap();
        let b1 = tw_times_x(&d, &s1, vec![0, 1, 0]).unwrap();
        assert_eq!(b1.terms[&s1], LaurentPoly::var(3, 2, 1));
        assert_eq!(
            b1.terms[&WeylElem::identity(2)],
            LaurentPoly::var(3, 2, 1).scale(&-d.kappa(1))
        );
    }

    #[test]
    fn central_elements_commute() {
        for n in 1..=3 {
            let d = desc_b(n);
            let mut c = vec![1; n + 1];
            c[0] = 2;
            let z1 = NormalFormElem::monomial(&d, c).unwrap();
            let mut f = LaurentPoly::var(n + 1, 0, 1);
            for i in 1..=n {
                let mut g = LaurentPoly::one(n + 1);
                g.add_assign_scaled(&LaurentPoly::var(n + 1, i, 1), &Scalar::one());
                f = f.try_mul(&g).unwrap();
            }
            let z2 = NormalFormElem::from_poly(&d, f);
            for z in [z1, z2] {
                for i in 0..n {
                    let t = NormalFormElem::t(&d, i).unwrap();
                    assert_eq!(z.try_mul(&t).unwrap(), t.try_mul(&z).unwrap(), "n={n} T{i}");
                }
            }
        }
    }

    #[test]
    fn desc_json_roundtrip() {
        let d = AlgebraDesc::new(
            Lattice::Full,
            2,
            Scalar::from_int(2),
            Scalar::from_int(3),
            [0].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(d.variant(), Variant::ParabolicB);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"variant":"ParabolicB","n":2,"p":"2","q":"3","gens":[0]}"#
        );
        let back: AlgebraDesc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(
            serde_json::from_str::<AlgebraDesc>(r#"{"variant":"B","n":2,"p":"1","q":"3"}"#)
                .is_err()
        );
        assert!(serde_json::from_str::<AlgebraDesc>(
            r#"{"variant":"ParabolicR","n":2,"p":"2","q":"3"}"#
        )
        .is_err());
    }

    #[test]
    fn display_forms() {
        let d = desc_b(2);
        let e = NormalFormElem::x(&d, 1, 1)
            .unwrap()
            .try_mul(&NormalFormElem::t(&d, 1).unwrap())
            .unwrap();
        let s = e.to_string();
        assert!(s.contains("T[1] * (1) X(0,0,1)"), "{s}");
        assert_eq!(e.to_json().as_array().unwrap().len(), 2);
    }

    fn arb_elem(d: Arc<AlgebraDesc>) -> impl Strategy<Value = NormalFormElem> {
        proptest::collection::vec(
            (
                0usize..8,
                proptest::collection::vec(-1i32..=1, 3),
                -3i64..=3,
            ),
            1..3,
        )
        .prop_map(move |ts| {
            let g = enumerate_group(2).unwrap();
            let mut e = NormalFormElem::zero(&d);
            for (w, c, k) in ts {
                e.add_term(
                    g[w].elem.clone(),
                    LaurentPoly::monomial(c, Scalar::from_int(k)),
                );
            }
            e
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn associativity(a in arb_elem(desc_b(2)), b in arb_elem(desc_b(2)), c in arb_elem(desc_b(2))) {
            let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
            let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }
    }
}
