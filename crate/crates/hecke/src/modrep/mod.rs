//! Finite-dimensional modules given by generator matrices.

mod hom;
mod irreducible;
mod socle;
mod weights;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDesc, Lattice, NormalFormElem, RelationCheck, Variant};
use crate::error::{HeckeError, Result};
use crate::linalg::{Echelon, Matrix, Vector};
use crate::scalars::{LaurentPoly, Scalar};
use crate::weyl::WeylElem;

pub use hom::{hom_space, is_isomorphic};
pub use irreducible::{irreducibility, is_irreducible, Irreducibility};
pub use socle::{
    composition_factors, cosocle, cosocle_summands, find_simple_submodule, multiplicity_of, socle,
    socle_summands, SocleResult,
};
pub use weights::{eigenspace, jordan_block_sizes, weight_spaces, WeightSpace};

/// Default seed for every randomized choice; each call site XORs in its own tag.
pub const DEFAULT_SEED: u64 = 0xB00B5;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Replace the seed of the randomized searches. Seeds change running times and
/// possibly `Unknown` verdicts, never a decided answer.
pub fn set_seed(seed: u64) {
    SEED.store(seed, AtomicOrdering::Relaxed);
}

#[must_use]
pub fn current_seed() -> u64 {
    SEED.load(AtomicOrdering::Relaxed)
}

/// Weight spaces computed on demand; ignored by comparisons.
#[derive(Clone, Default)]
struct WeightCache(Arc<OnceLock<Vec<WeightSpace>>>);

impl WeightCache {
    fn get(&self) -> Option<&Vec<WeightSpace>> {
        self.0.get()
    }

    fn get_or_init(&self, f: impl FnOnce() -> Vec<WeightSpace>) -> &Vec<WeightSpace> {
        self.0.get_or_init(f)
    }

    fn filled(ws: Vec<WeightSpace>) -> Self {
        WeightCache(Arc::new(OnceLock::from(ws)))
    }
}

impl PartialEq for WeightCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for WeightCache {}

impl fmt::Debug for WeightCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.get().is_some() { "cached" } else { "empty" })
    }
}

/// A module: one matrix per generator `T_i` and `X_j` present in the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRep {
    desc: Arc<AlgebraDesc>,
    dim: usize,
    t: BTreeMap<usize, Matrix>,
    x: BTreeMap<usize, Matrix>,
    x_inv: BTreeMap<usize, Matrix>,
    hints: BTreeSet<Scalar>,
    weights: WeightCache,
}

impl ModuleRep {
    /// Checks shapes and invertibility of the `X_j`; relations are checked by [`verify_module`].
    pub fn new(
        desc: AlgebraDesc,
        t: BTreeMap<usize, Matrix>,
        x: BTreeMap<usize, Matrix>,
    ) -> Result<Self> {
        let dim = x.values().chain(t.values()).next().map_or(0, Matrix::rows);
        Self::with_dim(desc, dim, t, x)
    }

    /// As [`ModuleRep::new`] with the dimension given, which matters only when
    /// the algebra has no generators at all.
    pub fn with_dim(
        desc: AlgebraDesc,
        dim: usize,
        t: BTreeMap<usize, Matrix>,
        x: BTreeMap<usize, Matrix>,
    ) -> Result<Self> {
        let desc = Arc::new(desc);
        let want_t: Vec<usize> = desc.gens().iter().copied().collect();
        let have_t: Vec<usize> = t.keys().copied().collect();
        if want_t != have_t {
            return Err(HeckeError::Domain(format!(
                "expected T matrices {want_t:?}, got {have_t:?}"
            )));
        }
        let want_x = desc.x_indices();
        let have_x: Vec<usize> = x.keys().copied().collect();
        if want_x != have_x {
            return Err(HeckeError::Domain(format!(
                "expected X matrices {want_x:?}, got {have_x:?}"
            )));
        }
        for m in t.values().chain(x.values()) {
            if m.rows() != dim || m.cols() != dim {
                return Err(HeckeError::Domain(
                    "generator matrices must be square of equal size".into(),
                ));
            }
        }
        let mut x_inv = BTreeMap::new();
        for (&j, m) in &x {
            let inv = m
                .inverse()
                .map_err(|_| HeckeError::Domain(format!("X{j} matrix is not invertible")))?;
            x_inv.insert(j, inv);
        }
        Ok(ModuleRep {
            desc,
            dim,
            t,
            x,
            x_inv,
            hints: BTreeSet::new(),
            weights: WeightCache::default(),
        })
    }

    /// Zero-dimensional module.
    #[must_use]
    pub fn zero(desc: &AlgebraDesc) -> Self {
        let t = desc
            .gens()
            .iter()
            .map(|&i| (i, Matrix::zeros(0, 0)))
            .collect();
        let x: BTreeMap<usize, Matrix> = desc
            .x_indices()
            .into_iter()
            .map(|j| (j, Matrix::zeros(0, 0)))
            .collect();
        ModuleRep {
            desc: Arc::new(desc.clone()),
            dim: 0,
            t,
            x: x.clone(),
            x_inv: x,
            hints: BTreeSet::new(),
            weights: WeightCache::default(),
        }
    }

    /// One-dimensional module over a lattice algebra with the given eigenvalues
    /// (one per present `X_j`).
    pub fn one_dim(desc: AlgebraDesc, values: &[Scalar]) -> Result<Self> {
        if !desc.gens().is_empty() {
            return Err(HeckeError::Domain(
                "one_dim needs an algebra without T generators".into(),
            ));
        }
        let idx = desc.x_indices();
        if idx.len() != values.len() {
            return Err(HeckeError::RankMismatch(values.len(), idx.len()));
        }
        let x = idx
            .into_iter()
            .zip(values)
            .map(|(j, v)| (j, Matrix::scalar(1, v)))
            .collect();
        Ok(ModuleRep::with_dim(desc, 1, BTreeMap::new(), x)?.with_hints(values.iter().cloned()))
    }

    #[must_use]
    pub fn with_hints(mut self, hints: impl IntoIterator<Item = Scalar>) -> Self {
        self.hints
            .extend(hints.into_iter().filter(|h| !h.is_zero()));
        self
    }

    #[must_use]
    pub fn hints(&self) -> &BTreeSet<Scalar> {
        &self.hints
    }

    #[must_use]
    pub fn desc(&self) -> &AlgebraDesc {
        &self.desc
    }

    #[must_use]
    pub fn desc_arc(&self) -> &Arc<AlgebraDesc> {
        &self.desc
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.desc.n()
    }

    #[must_use]
    pub fn mat_t(&self, i: usize) -> &Matrix {
        &self.t[&i]
    }

    #[must_use]
    pub fn mat_x(&self, j: usize) -> &Matrix {
        &self.x[&j]
    }

    #[must_use]
    pub fn mat_x_inv(&self, j: usize) -> &Matrix {
        &self.x_inv[&j]
    }

    #[must_use]
    pub fn t_mats(&self) -> &BTreeMap<usize, Matrix> {
        &self.t
    }

    #[must_use]
    pub fn x_mats(&self) -> &BTreeMap<usize, Matrix> {
        &self.x
    }

    /// All generator matrices: `T_i` first, then `X_j`.
    #[must_use]
    pub fn generators(&self) -> Vec<&Matrix> {
        self.t.values().chain(self.x.values()).collect()
    }

    /// `T_w` along the canonical reduced word.
    #[must_use]
    pub fn mat_tw(&self, w: &WeylElem) -> Matrix {
        let mut m = Matrix::identity(self.dim);
        for i in w.reduced_word() {
            m = m.mul(&self.t[&i]);
        }
        m
    }

    /// Apply `T_w` to a vector.
    #[must_use]
    pub fn apply_tw(&self, w: &WeylElem, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for i in w.reduced_word().into_iter().rev() {
            v = self.t[&i].mul_vec(&v);
        }
        v
    }

    /// `X^c` for an exponent vector of length `n+1`.
    #[must_use]
    pub fn mat_monomial(&self, c: &[i32]) -> Matrix {
        let mut m = Matrix::identity(self.dim);
        for (j, &e) in c.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e > 0 { &self.x[&j] } else { &self.x_inv[&j] };
            m = m.mul(&base.pow(e.unsigned_abs()));
        }
        m
    }

    #[must_use]
    pub fn mat_poly(&self, f: &LaurentPoly) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, a) in f.terms() {
            m = m.add(&self.mat_monomial(c).scale(a));
        }
        m
    }

    /// Matrix of an algebra element.
    pub fn act(&self, e: &NormalFormElem) -> Result<Matrix> {
        if **e.desc() != *self.desc {
            return Err(HeckeError::Incompatible(format!(
                "{} vs {}",
                e.desc(),
                self.desc
            )));
        }
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (w, f) in e.terms() {
            m = m.add(&self.mat_tw(w).mul(&self.mat_poly(f)));
        }
        Ok(m)
    }

    /// Generator matrices by name (`T0`, `X1`, ...).
    #[must_use]
    pub fn named_mats(&self) -> BTreeMap<String, Matrix> {
        let mut out = BTreeMap::new();
        for (i, m) in &self.t {
            out.insert(format!("T{i}"), m.clone());
        }
        for (j, m) in &self.x {
            out.insert(format!("X{j}"), m.clone());
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&ModuleRepr::from(self)).map_err(|e| HeckeError::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        serde_json::to_string_pretty(&ModuleRepr::from(self))
            .map_err(|e| HeckeError::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: ModuleRepr =
            serde_json::from_str(s).map_err(|e| HeckeError::Parse(e.to_string()))?;
        r.try_into()
    }

    /// Same module seen over another algebra with identical matrices (used after
    /// rebuilding a descriptor).
    fn with_desc(
        &self,
        desc: AlgebraDesc,
        dim: usize,
        t: BTreeMap<usize, Matrix>,
        x: BTreeMap<usize, Matrix>,
    ) -> Result<Self> {
        Ok(ModuleRep::with_dim(desc, dim, t, x)?.with_hints(self.hints.iter().cloned()))
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleRepr {
    variant: Variant,
    n: usize,
    p: Scalar,
    q: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<usize>>,
    dim: usize,
    mats: BTreeMap<String, Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    hints: Vec<Scalar>,
}

impl From<&ModuleRep> for ModuleRepr {
    fn from(m: &ModuleRep) -> Self {
        let d = &m.desc;
        ModuleRepr {
            variant: d.variant(),
            n: d.n(),
            p: d.p().clone(),
            q: d.q().clone(),
            gens: d.parabolic_gens(),
            dim: m.dim,
            mats: m
                .named_mats()
                .into_iter()
                .map(|(k, v)| (k, v.to_rows()))
                .collect(),
            hints: m.hints.iter().cloned().collect(),
        }
    }
}

impl TryFrom<ModuleRepr> for ModuleRep {
    type Error = HeckeError;

    fn try_from(r: ModuleRepr) -> Result<Self> {
        let desc = AlgebraDesc::from_parts(r.variant, r.n, r.p, r.q, r.gens)?;
        let mut t = BTreeMap::new();
        let mut x = BTreeMap::new();
        for (name, rows) in r.mats {
            if rows.len() != r.dim || rows.iter().any(|row| row.len() != r.dim) {
                return Err(HeckeError::Parse(format!(
                    "matrix {name} is not {0}x{0}",
                    r.dim
                )));
            }
            let (kind, idx) = name.split_at(1);
            let idx: usize = idx
                .parse()
                .map_err(|_| HeckeError::Parse(format!("bad generator name {name:?}")))?;
            let m = if r.dim == 0 {
                Matrix::zeros(0, 0)
            } else {
                Matrix::from_rows(rows)
            };
            let slot = match kind {
                "T" => &mut t,
                "X" => &mut x,
                _ => return Err(HeckeError::Parse(format!("bad generator name {name:?}"))),
            };
            if slot.insert(idx, m).is_some() {
                return Err(HeckeError::Parse(format!("duplicate generator {name}")));
            }
        }
        if r.dim == 0 {
            return Ok(ModuleRep::zero(&desc));
        }
        Ok(ModuleRep::with_dim(desc, r.dim, t, x)?.with_hints(r.hints))
    }
}

/// Evaluate every defining relation on the matrices.
#[must_use]
pub fn verify_module(m: &ModuleRep) -> Vec<RelationCheck> {
    let d = &m.desc;
    let dim = m.dim;
    let id = Matrix::identity(dim);
    let mut out = Vec::new();
    let mut push = |family: &str, instance: String, pass: bool| {
        out.push(RelationCheck {
            family: family.to_string(),
            instance,
            pass,
        });
    };
    for (&i, ti) in &m.t {
        let par = d.param(i);
        let lhs = ti
            .sub_scalar(par)
            .mul(&ti.add(&Matrix::scalar(dim, &par.inv())));
        let fam = if i == 0 { "1" } else { "2" };
        push(fam, format!("(T{i}-t)(T{i}+1/t)=0"), lhs.is_zero());
    }
    for (&i, a) in m.t.iter().filter(|(&i, _)| i >= 1) {
        if let Some(b) = m.t.get(&(i + 1)) {
            let ok = a.mul(b).mul(a) == b.mul(a).mul(b);
            push(
                "3",
                format!("T{i}T{}T{i}=T{}T{i}T{}", i + 1, i + 1, i + 1),
                ok,
            );
        }
    }
    for (&i, a) in &m.t {
        for (&j, b) in m.t.iter().filter(|(&j, _)| j > i + 1) {
            push("4", format!("T{i}T{j}=T{j}T{i}"), a.mul(b) == b.mul(a));
        }
    }
    if let (Some(t0), Some(t1)) = (m.t.get(&0), m.t.get(&1)) {
        let ok = t1.mul(t0).mul(t1).mul(t0) == t0.mul(t1).mul(t0).mul(t1);
        push("5", "T1T0T1T0=T0T1T0T1".into(), ok);
    }
    if let Some(t0) = m.t.get(&0) {
        let x1 = &m.x[&1];
        if d.has_x0() {
            let ok = t0.mul(&m.x[&0]).mul(t0) == m.x[&0].mul(x1);
            push("6", "T0X0T0=X0X1".into(), ok);
        } else {
            let rhs = t0.mul(&m.x_inv[&1]).add(&x1.add(&id).scale(&d.kappa(0)));
            push("6", "X1T0=T0X1^-1+(p-1/p)(X1+1)".into(), x1.mul(t0) == rhs);
        }
    }
    for (&i, ti) in &m.t {
        for (&j, xj) in &m.x {
            if j == i || j == i + 1 {
                continue;
            }
            push("7", format!("T{i}X{j}=X{j}T{i}"), ti.mul(xj) == xj.mul(ti));
        }
    }
    for (&i, ti) in m.t.iter().filter(|(&i, _)| i >= 1) {
        let ok = ti.mul(&m.x[&i]).mul(ti) == m.x[&(i + 1)];
        push("8", format!("T{i}X{i}T{i}=X{}", i + 1), ok);
    }
    let xs: Vec<(&usize, &Matrix)> = m.x.iter().collect();
    for (k, (&i, a)) in xs.iter().enumerate() {
        for (&j, b) in &xs[k + 1..] {
            push("P", format!("X{i}X{j}=X{j}X{i}"), a.mul(b) == b.mul(a));
        }
    }
    out
}

/// `true` iff every relation holds.
#[must_use]
pub fn module_ok(m: &ModuleRep) -> bool {
    verify_module(m).iter().all(|r| r.pass)
}

/// Restriction to a subalgebra (fewer `T_i`, possibly dropping `X_0`).
pub fn restrict(m: &ModuleRep, target: &AlgebraDesc) -> Result<ModuleRep> {
    let d = &m.desc;
    if target.n() != d.n() || target.p() != d.p() || target.q() != d.q() {
        return Err(HeckeError::Incompatible(format!(
            "cannot restrict {d} to {target}"
        )));
    }
    if !target.gens().is_subset(d.gens()) || (target.has_x0() && !d.has_x0()) {
        return Err(HeckeError::Incompatible(format!(
            "{target} is not a subalgebra of {d}"
        )));
    }
    let t = target
        .gens()
        .iter()
        .map(|&i| (i, m.t[&i].clone()))
        .collect();
    let x = target
        .x_indices()
        .into_iter()
        .map(|j| (j, m.x[&j].clone()))
        .collect();
    m.with_desc(target.clone(), m.dim, t, x)
}

/// Outer tensor product `M ⊠ N`: the generators of `N` (no `T_0`, no `X_0`) are shifted by `rank M`.
pub fn outer_tensor(m: &ModuleRep, n: &ModuleRep) -> Result<ModuleRep> {
    let (dm, dn) = (&m.desc, &n.desc);
    if dn.has_x0() || dn.gens().contains(&0) {
        return Err(HeckeError::Incompatible(
            "right factor must have neither X0 nor T0".into(),
        ));
    }
    if dm.p() != dn.p() || dm.q() != dn.q() {
        return Err(HeckeError::Incompatible("parameters differ".into()));
    }
    let (n1, n2) = (dm.n(), dn.n());
    let mut gens: BTreeSet<usize> = dm.gens().clone();
    gens.extend(dn.gens().iter().map(|&i| i + n1));
    let desc = dm.with(dm.lattice(), n1 + n2, gens)?;
    let (im, inn) = (Matrix::identity(m.dim), Matrix::identity(n.dim));
    let mut t = BTreeMap::new();
    for (&i, a) in &m.t {
        t.insert(i, a.kronecker(&inn));
    }
    for (&i, b) in &n.t {
        t.insert(i + n1, im.kronecker(b));
    }
    let mut x = BTreeMap::new();
    for (&j, a) in &m.x {
        x.insert(j, a.kronecker(&inn));
    }
    for (&j, b) in &n.x {
        x.insert(j + n1, im.kronecker(b));
    }
    let hints: Vec<Scalar> = m.hints.iter().chain(&n.hints).cloned().collect();
    Ok(ModuleRep::with_dim(desc, m.dim * n.dim, t, x)?.with_hints(hints))
}

/// `M ⊕ N` over the same algebra.
pub fn direct_sum(m: &ModuleRep, n: &ModuleRep) -> Result<ModuleRep> {
    if m.desc != n.desc {
        return Err(HeckeError::Incompatible(format!(
            "{} vs {}",
            m.desc, n.desc
        )));
    }
    let block = |a: &Matrix, b: &Matrix| {
        let mut out = Matrix::zeros(m.dim + n.dim, m.dim + n.dim);
        for i in 0..m.dim {
            for j in 0..m.dim {
                out.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..n.dim {
            for j in 0..n.dim {
                out.set(m.dim + i, m.dim + j, b.get(i, j).clone());
            }
        }
        out
    };
    let t = m.t.iter().map(|(&i, a)| (i, block(a, &n.t[&i]))).collect();
    let x = m.x.iter().map(|(&j, a)| (j, block(a, &n.x[&j]))).collect();
    let hints: Vec<Scalar> = m.hints.iter().chain(&n.hints).cloned().collect();
    Ok(ModuleRep::with_dim((*m.desc).clone(), m.dim + n.dim, t, x)?.with_hints(hints))
}

/// `σ`: `X_0 ↦ -X_0`.
pub fn twist_sigma(m: &ModuleRep) -> Result<ModuleRep> {
    if !m.desc.has_x0() {
        return Err(HeckeError::Domain("sigma twist needs X0".into()));
    }
    let mut x = m.x.clone();
    let neg = x[&0].scale(&-Scalar::one());
    x.insert(0, neg);
    let hints: Vec<Scalar> = m.hints.iter().flat_map(|h| [h.clone(), -h]).collect();
    Ok(m.with_desc((*m.desc).clone(), m.dim, m.t.clone(), x)?
        .with_hints(hints))
}

/// `ψ`: conjugation by `X_0`, i.e. `T_0 ↦ X_1 T_0^{-1}` and every other generator fixed.
pub fn twist_psi(m: &ModuleRep) -> Result<ModuleRep> {
    let Some(t0) = m.t.get(&0) else {
        return Err(HeckeError::Domain("psi twist needs T0".into()));
    };
    let t0_inv = t0.sub_scalar(&m.desc.kappa(0));
    let mut t = m.t.clone();
    t.insert(0, m.x[&1].mul(&t0_inv));
    m.with_desc((*m.desc).clone(), m.dim, t, m.x.clone())
}

/// Twist by `x`: the result is a module over the algebra with generators
/// `target_gens`, where `T_i` acts as `T_{x^{-1} s_i x}` and `X_j` as `X^{x^{-1} e_j}`.
pub fn twist_by(m: &ModuleRep, x: &WeylElem, target_gens: &BTreeSet<usize>) -> Result<ModuleRep> {
    let d = &m.desc;
    let n = d.n();
    if x.rank() != n {
        return Err(HeckeError::RankMismatch(x.rank(), n));
    }
    let xinv = x.inverse();
    let mut t = BTreeMap::new();
    for &i in target_gens {
        let s = WeylElem::simple(n, i)?;
        let c = xinv.mul(&s).mul(x);
        let word = c.reduced_word();
        if word.len() != 1 || !d.gens().contains(&word[0]) {
            return Err(HeckeError::Domain(format!(
                "x^-1 s_{i} x is not a generator of {d}"
            )));
        }
        t.insert(i, m.t[&word[0]].clone());
    }
    let mut xm = BTreeMap::new();
    for j in d.x_indices() {
        let mut e = vec![0; n + 1];
        e[j] = 1;
        let c = xinv.act_on_weight(&e);
        if !d.has_x0() && c[0] != 0 {
            return Err(HeckeError::Domain(
                "twist leaves the reduced lattice".into(),
            ));
        }
        xm.insert(j, m.mat_monomial(&c));
    }
    let desc = d.with(d.lattice(), n, target_gens.clone())?;
    let hints: Vec<Scalar> = m.hints.iter().flat_map(|h| [h.clone(), h.inv()]).collect();
    Ok(ModuleRep::with_dim(desc, m.dim, t, xm)?.with_hints(hints))
}

/// `M^τ`: every generator matrix transposed.
#[must_use]
pub fn tau_dual(m: &ModuleRep) -> ModuleRep {
    let t = m.t.iter().map(|(&i, a)| (i, a.transpose())).collect();
    let x: BTreeMap<usize, Matrix> = m.x.iter().map(|(&j, a)| (j, a.transpose())).collect();
    let x_inv = m.x_inv.iter().map(|(&j, a)| (j, a.transpose())).collect();
    let weights = match m.weights.get().map(|ws| weights::dual_weight_spaces(ws, m.dim)) {
        Some(Ok(ws)) => WeightCache::filled(ws),
        _ => WeightCache::default(),
    };
    ModuleRep {
        desc: Arc::clone(&m.desc),
        dim: m.dim,
        t,
        x,
        x_inv,
        hints: m.hints.clone(),
        weights,
    }
}

/// Subspace of a module, stored in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Submodule {
    ech: Echelon,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.ech.dim() == other.ech.dim() && self.ech.rows() == other.ech.rows()
    }
}

impl Eq for Submodule {}

impl Submodule {
    #[must_use]
    pub fn zero(ambient: usize) -> Self {
        Submodule {
            ech: Echelon::new(ambient),
        }
    }

    #[must_use]
    pub fn full(ambient: usize) -> Self {
        Submodule {
            ech: Echelon::from_vectors(ambient, Matrix::identity(ambient).to_rows()),
        }
    }

    #[must_use]
    pub fn from_vectors(ambient: usize, vs: impl IntoIterator<Item = Vector>) -> Self {
        Submodule {
            ech: Echelon::from_vectors(ambient, vs),
        }
    }

    #[must_use]
    pub fn ambient(&self) -> usize {
        self.ech.dim()
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.ech.rank() == 0
    }

    #[must_use]
    pub fn is_full(&self) -> bool {
        self.ech.is_full()
    }

    #[must_use]
    pub fn basis(&self) -> &[Vector] {
        self.ech.rows()
    }

    #[must_use]
    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }

    #[must_use]
    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.ech.contains(v)
    }

    #[must_use]
    pub fn contains_sub(&self, other: &Submodule) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Columns are the basis vectors.
    #[must_use]
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.ambient(), self.basis())
    }

    #[must_use]
    pub fn sum(&self, other: &Submodule) -> Submodule {
        let mut ech = self.ech.clone();
        for v in other.basis() {
            ech.insert(v.clone());
        }
        Submodule { ech }
    }

    /// `{v : w·v = 0 for all w in self}`.
    #[must_use]
    pub fn annihilator(&self) -> Submodule {
        let n = self.ambient();
        if self.is_zero() {
            return Submodule::full(n);
        }
        Submodule::from_vectors(n, self.ech.to_matrix().kernel())
    }

    /// Image of each basis vector under `f` (columns of `f` index this space).
    #[must_use]
    pub fn map(&self, f: &Matrix) -> Submodule {
        Submodule::from_vectors(f.rows(), self.basis().iter().map(|v| f.mul_vec(v)))
    }

    /// Whether the subspace is invariant under every generator of `m`.
    #[must_use]
    pub fn is_invariant(&self, m: &ModuleRep) -> bool {
        m.generators()
            .iter()
            .all(|g| self.basis().iter().all(|v| self.contains(&g.mul_vec(v))))
    }
}

/// Smallest submodule containing the seeds.
#[must_use]
pub fn spin(m: &ModuleRep, seeds: &[Vector]) -> Submodule {
    let gens = m.generators();
    let mut ech = Echelon::new(m.dim);
    let mut queue: Vec<Vector> = Vec::new();
    for s in seeds {
        let r = ech.reduce(s);
        if r.iter().any(|x| !x.is_zero()) && ech.insert(r.clone()) {
            queue.push(r);
        }
    }
    let mut k = 0;
    while k < queue.len() && !ech.is_full() {
        let v = queue[k].clone();
        k += 1;
        for g in &gens {
            let w = g.mul_vec(&v);
            let r = ech.reduce(&w);
            if r.iter().any(|x| !x.is_zero()) {
                ech.insert(r.clone());
                queue.push(r);
                if ech.is_full() {
                    break;
                }
            }
        }
    }
    Submodule { ech }
}

/// Action on an invariant subspace, in the echelon basis of `s`.
pub fn sub_module(m: &ModuleRep, s: &Submodule) -> Result<ModuleRep> {
    if s.is_zero() {
        return Ok(ModuleRep::zero(&m.desc));
    }
    let b = s.basis_matrix();
    let restrict = |g: &Matrix| -> Result<Matrix> {
        let gb = g.mul(&b);
        b.solve_left(&gb)
            .map_err(|_| HeckeError::NotInvariant("subspace is not a submodule".into()))
    };
    let mut t = BTreeMap::new();
    for (&i, a) in &m.t {
        t.insert(i, restrict(a)?);
    }
    let mut x = BTreeMap::new();
    for (&j, a) in &m.x {
        x.insert(j, restrict(a)?);
    }
    m.with_desc((*m.desc).clone(), s.dim(), t, x)
}

/// Action on `M / S` in the basis of standard vectors at the non-pivot columns of `S`.
pub fn quotient(m: &ModuleRep, s: &Submodule) -> Result<ModuleRep> {
    if !s.is_invariant(m) {
        return Err(HeckeError::NotInvariant(
            "quotient by a non-submodule".into(),
        ));
    }
    if s.is_full() {
        return Ok(ModuleRep::zero(&m.desc));
    }
    let pivots: BTreeSet<usize> = s.ech.pivots().iter().copied().collect();
    let free: Vec<usize> = (0..m.dim).filter(|c| !pivots.contains(c)).collect();
    let project = |g: &Matrix| -> Matrix {
        let k = free.len();
        let mut out = Matrix::zeros(k, k);
        for (jj, &j) in free.iter().enumerate() {
            let col = g.col(j);
            let r = s.ech.reduce(&col);
            for (ii, &i) in free.iter().enumerate() {
                out.set(ii, jj, r[i].clone());
            }
        }
        out
    };
    let t = m.t.iter().map(|(&i, a)| (i, project(a))).collect();
    let x = m.x.iter().map(|(&j, a)| (j, project(a))).collect();
    let mut out = m.with_desc((*m.desc).clone(), free.len(), t, x)?;
    // weight spaces of M / S are the images of those of M
    if let Some(ws) = m.weights.get() {
        let image = |v: &Vector| -> Vector {
            let r = s.ech.reduce(v);
            free.iter().map(|&i| r[i].clone()).collect()
        };
        out.weights = WeightCache::filled(weights::image_weight_spaces(ws, image, free.len()));
    }
    Ok(out)
}

/// Descriptor of the lattice algebra `F[X_0^{±1}]` (or `F` when `lattice` is reduced) at rank 0.
pub fn rank_zero_desc(lattice: Lattice, p: Scalar, q: Scalar) -> Result<AlgebraDesc> {
    AlgebraDesc::new(lattice, 0, p, q, BTreeSet::new())
}
