//! Parabolic induction and restriction, `Δ_a`, `e_a`, `f_a` and the crystal operators.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use crate::algebra::{x_times_tw, AlgebraDesc, Engine, Lattice, NormalFormElem};
use crate::characters::character;
use crate::error::{HeckeError, Result};
use crate::linalg::Matrix;
use crate::modrep::{
    cosocle, cosocle_summands, is_isomorphic, outer_tensor, restrict, socle, sub_module,
    weight_spaces, ModuleRep, Submodule,
};
use crate::scalars::{LaurentPoly, Scalar};
use crate::weyl::{is_in_parabolic, min_coset_reps, split_coset, WeylElem};

/// One term `T_{d'} T_u P` of `g · T_d`.
#[derive(Debug)]
struct Term {
    target: usize,
    u_word: Vec<usize>,
    poly: LaurentPoly,
}

#[derive(Debug)]
struct Table {
    reps: Vec<WeylElem>,
    /// Per generator (`T_i` in order, then `X_j`), per coset rep.
    actions: Vec<Vec<Vec<Term>>>,
}

type TableKey = (usize, Lattice, Vec<usize>, Vec<usize>, Scalar, Scalar);

fn tables() -> &'static Mutex<HashMap<TableKey, Arc<Table>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<Table>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn build_table(src: &AlgebraDesc, tgt: &Arc<AlgebraDesc>) -> Result<Table> {
    let n = tgt.n();
    let reps: Vec<WeylElem> = min_coset_reps(n, src.gens())?
        .into_iter()
        .filter(|d| is_in_parabolic(d, tgt.gens()))
        .collect();
    let index: BTreeMap<&WeylElem, usize> = reps.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let engine = Engine::new();
    let mut actions = Vec::new();
    let mut gens: Vec<NormalFormElem> = Vec::new();
    for &i in tgt.gens() {
        gens.push(NormalFormElem::t(tgt, i)?);
    }
    let xs = tgt.x_indices();
    for g in gens
        .iter()
        .map(Some)
        .chain(xs.iter().map(|_| None))
        .enumerate()
    {
        let (k, g) = g;
        let mut per_rep = Vec::with_capacity(reps.len());
        for d in &reps {
            let prod = match g {
                Some(t) => engine.mul(t, &NormalFormElem::tw(tgt, d.clone()))?,
                None => {
                    let j = xs[k - gens.len()];
                    let mut e = vec![0; n + 1];
                    e[j] = 1;
                    x_times_tw(tgt, e, d)?
                }
            };
            let mut terms = Vec::new();
            for (w, f) in prod.terms() {
                let (dd, u_word) = split_coset(w, src.gens());
                let target = *index.get(&dd).ok_or_else(|| {
                    HeckeError::Domain(format!("{dd:?} is not a coset representative"))
                })?;
                terms.push(Term {
                    target,
                    u_word,
                    poly: f.clone(),
                });
            }
            per_rep.push(terms);
        }
        actions.push(per_rep);
    }
    Ok(Table { reps, actions })
}

fn table(src: &AlgebraDesc, tgt: &Arc<AlgebraDesc>) -> Result<Arc<Table>> {
    let key: TableKey = (
        tgt.n(),
        tgt.lattice(),
        src.gens().iter().copied().collect(),
        tgt.gens().iter().copied().collect(),
        tgt.p().clone(),
        tgt.q().clone(),
    );
    if let Some(t) = tables().lock().expect("table cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(build_table(src, tgt)?);
    tables()
        .lock()
        .expect("table cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&t));
    Ok(t)
}

/// Distinguished coset representatives used as the basis of `ind_src^tgt`, in basis order.
pub fn induction_reps(src: &AlgebraDesc, tgt: &AlgebraDesc) -> Result<Vec<WeylElem>> {
    check_induction(src, tgt)?;
    Ok(table(src, &Arc::new(tgt.clone()))?.reps.clone())
}

fn check_induction(src: &AlgebraDesc, tgt: &AlgebraDesc) -> Result<()> {
    if src.n() != tgt.n()
        || src.lattice() != tgt.lattice()
        || src.p() != tgt.p()
        || src.q() != tgt.q()
    {
        return Err(HeckeError::Incompatible(format!(
            "cannot induce from {src} to {tgt}"
        )));
    }
    if !src.gens().is_subset(tgt.gens()) {
        return Err(HeckeError::Incompatible(format!(
            "{src} is not a parabolic subalgebra of {tgt}"
        )));
    }
    Ok(())
}

/// `ind_src^tgt M` on the basis `T_d ⊗ m`, `d` ordered by (length, word), then the basis of `M`.
pub fn induce(m: &ModuleRep, target: &AlgebraDesc) -> Result<ModuleRep> {
    let src = m.desc();
    check_induction(src, target)?;
    let tgt = Arc::new(target.clone());
    let tab = table(src, &tgt)?;
    let k = m.dim();
    let big = tab.reps.len() * k;
    let mut tw_cache: HashMap<Vec<usize>, Matrix> = HashMap::new();
    let mut mats = Vec::with_capacity(tab.actions.len());
    for per_rep in &tab.actions {
        let mut g = Matrix::zeros(big, big);
        for (col, terms) in per_rep.iter().enumerate() {
            for term in terms {
                let tu = tw_cache.entry(term.u_word.clone()).or_insert_with(|| {
                    term.u_word
                        .iter()
                        .fold(Matrix::identity(k), |acc, i| acc.mul(m.mat_t(*i)))
                });
                let block = tu.mul(&m.mat_poly(&term.poly));
                for r in 0..k {
                    for c in 0..k {
                        let v = block.get(r, c);
                        if !v.is_zero() {
                            let e = g.get_mut(term.target * k + r, col * k + c);
                            *e += v;
                        }
                    }
                }
            }
        }
        mats.push(g);
    }
    let nt = target.gens().len();
    let t: BTreeMap<usize, Matrix> = target
        .gens()
        .iter()
        .copied()
        .zip(mats.drain(..nt))
        .collect();
    let x: BTreeMap<usize, Matrix> = target.x_indices().into_iter().zip(mats).collect();
    let mut hints: BTreeSet<Scalar> = m.hints().clone();
    if k > 0 {
        for w in weight_spaces(m)? {
            for d in &tab.reps {
                let moved = match target.lattice() {
                    Lattice::Full => d.act_on_tuple(&w.weight),
                    Lattice::Reduced => d.act_on_reduced_tuple(&w.weight),
                };
                hints.extend(moved);
            }
        }
    }
    Ok(ModuleRep::with_dim(target.clone(), big, t, x)?.with_hints(hints))
}

/// The algebra families a crystal operator moves within.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    B,
    R,
    A,
}

impl Family {
    #[must_use]
    pub fn of(desc: &AlgebraDesc) -> Family {
        match desc.lattice() {
            Lattice::Full => Family::B,
            Lattice::Reduced if desc.gens().contains(&0) => Family::R,
            Lattice::Reduced => Family::A,
        }
    }

    pub fn desc(self, n: usize, p: Scalar, q: Scalar) -> Result<AlgebraDesc> {
        match self {
            Family::B => AlgebraDesc::b(n, p, q),
            Family::R => AlgebraDesc::r(n, p, q),
            Family::A => AlgebraDesc::a(n, p, q),
        }
    }
}

/// The subspace where `X_{n-k+1}, ..., X_n` all have generalized eigenvalue `a`,
/// as a module over the generators that survive.
pub fn delta(m: &ModuleRep, a: &Scalar, k: usize) -> Result<ModuleRep> {
    let n = m.n();
    if k > n {
        return Err(HeckeError::OutOfRange(format!(
            "delta with m = {k} > n = {n}"
        )));
    }
    if k == 0 {
        return Ok(m.clone());
    }
    let mut gens = m.desc().gens().clone();
    gens.remove(&(n - k));
    let target = m.desc().with(m.desc().lattice(), n, gens)?;
    let res = restrict(m, &target)?;
    let vs = weight_spaces(m)?
        .into_iter()
        .filter(|w| w.weight[w.weight.len() - k..].iter().all(|x| x == a))
        .flat_map(|w| w.vectors());
    sub_module(&res, &Submodule::from_vectors(m.dim(), vs))
}

/// `Δ` on the left: `X_1, ..., X_k` with generalized eigenvalue `a` (lattices without `X_0`).
pub fn delta_star(m: &ModuleRep, a: &Scalar, k: usize) -> Result<ModuleRep> {
    let n = m.n();
    if m.desc().has_x0() || m.desc().gens().contains(&0) {
        return Err(HeckeError::Domain(
            "left delta needs neither X0 nor T0".into(),
        ));
    }
    if k > n {
        return Err(HeckeError::OutOfRange(format!(
            "delta with m = {k} > n = {n}"
        )));
    }
    if k == 0 {
        return Ok(m.clone());
    }
    let mut gens = m.desc().gens().clone();
    gens.remove(&k);
    let target = m.desc().with(Lattice::Reduced, n, gens)?;
    let res = restrict(m, &target)?;
    let vs = weight_spaces(m)?
        .into_iter()
        .filter(|w| w.weight[..k].iter().all(|x| x == a))
        .flat_map(|w| w.vectors());
    sub_module(&res, &Submodule::from_vectors(m.dim(), vs))
}

/// Forget `X_n` from a module on which `T_{n-1}` is absent.
pub fn drop_last(m: &ModuleRep) -> Result<ModuleRep> {
    let n = m.n();
    if n == 0 || m.desc().gens().contains(&(n - 1)) {
        return Err(HeckeError::Domain(
            "drop_last needs n >= 1 and no T_{n-1}".into(),
        ));
    }
    let desc = m
        .desc()
        .with(m.desc().lattice(), n - 1, m.desc().gens().clone())?;
    if m.dim() == 0 {
        return Ok(ModuleRep::zero(&desc));
    }
    let x = m
        .x_mats()
        .iter()
        .filter(|(&j, _)| j < n)
        .map(|(&j, a)| (j, a.clone()))
        .collect();
    Ok(ModuleRep::with_dim(desc, m.dim(), m.t_mats().clone(), x)?
        .with_hints(m.hints().iter().cloned()))
}

/// Forget `X_1` and shift the remaining indices down (no `X_0`, `T_0`, `T_1`).
pub fn drop_first(m: &ModuleRep) -> Result<ModuleRep> {
    let n = m.n();
    let d = m.desc();
    if n == 0 || d.has_x0() || d.gens().contains(&0) || d.gens().contains(&1) {
        return Err(HeckeError::Domain(
            "drop_first needs n >= 1 and no X0, T0, T1".into(),
        ));
    }
    let gens: BTreeSet<usize> = d.gens().iter().map(|i| i - 1).collect();
    let desc = d.with(Lattice::Reduced, n - 1, gens)?;
    if m.dim() == 0 {
        return Ok(ModuleRep::zero(&desc));
    }
    let t = m
        .t_mats()
        .iter()
        .map(|(&i, a)| (i - 1, a.clone()))
        .collect();
    let x = m
        .x_mats()
        .iter()
        .filter(|(&j, _)| j >= 2)
        .map(|(&j, a)| (j - 1, a.clone()))
        .collect();
    Ok(ModuleRep::with_dim(desc, m.dim(), t, x)?.with_hints(m.hints().iter().cloned()))
}

/// `ε_a`: length of the longest `a`-tail in the character (the `X_0` slot never counts).
pub fn eps(m: &ModuleRep, a: &Scalar) -> Result<usize> {
    Ok(character(m)?.tail_length(a, usize::from(m.desc().has_x0())))
}

/// `ε*_a`: longest run of `a` at the start (lattices without `X_0`).
pub fn eps_star(m: &ModuleRep, a: &Scalar) -> Result<usize> {
    if m.desc().has_x0() {
        return Err(HeckeError::Domain(
            "eps_star needs a lattice without X0".into(),
        ));
    }
    Ok(character(m)?.head_length(a, 0))
}

/// `e_a M = res Δ_a M`, a module over the next smaller algebra of the same family (zero at rank 0).
pub fn e_lower(m: &ModuleRep, a: &Scalar) -> Result<ModuleRep> {
    if m.n() == 0 {
        return Ok(ModuleRep::zero(m.desc()));
    }
    drop_last(&delta(m, a, 1)?)
}

/// `e*_a`: the mirror image acting at `X_1` (type A).
pub fn e_star_lower(m: &ModuleRep, a: &Scalar) -> Result<ModuleRep> {
    if m.n() == 0 {
        return Ok(ModuleRep::zero(m.desc()));
    }
    drop_first(&delta_star(m, a, 1)?)
}

/// `f_a M = ind (M ⊠ (a))` within the family of `M`.
pub fn f_raise(m: &ModuleRep, a: &Scalar) -> Result<ModuleRep> {
    f_raise_in(m, a, Family::of(m.desc()))
}

pub fn f_raise_in(m: &ModuleRep, a: &Scalar, family: Family) -> Result<ModuleRep> {
    let d = m.desc();
    let one = ModuleRep::one_dim(
        AlgebraDesc::new(
            Lattice::Reduced,
            1,
            d.p().clone(),
            d.q().clone(),
            BTreeSet::new(),
        )?,
        std::slice::from_ref(a),
    )?;
    let tensor = outer_tensor(m, &one)?;
    induce(
        &tensor,
        &family.desc(d.n() + 1, d.p().clone(), d.q().clone())?,
    )
}

/// `f*_a N = ind ((a) ⊠ N)` in type A.
pub fn f_star_raise(m: &ModuleRep, a: &Scalar) -> Result<ModuleRep> {
    let d = m.desc();
    if Family::of(d) != Family::A {
        return Err(HeckeError::Domain(
            "f_star is defined for type A modules".into(),
        ));
    }
    let one = ModuleRep::one_dim(
        AlgebraDesc::new(
            Lattice::Reduced,
            1,
            d.p().clone(),
            d.q().clone(),
            BTreeSet::new(),
        )?,
        std::slice::from_ref(a),
    )?;
    let tensor = outer_tensor(&one, m)?;
    induce(
        &tensor,
        &AlgebraDesc::a(d.n() + 1, d.p().clone(), d.q().clone())?,
    )
}

/// `ẽ_a M = soc e_a M` (the zero module when `ε_a(M) = 0`).
pub fn crystal_e(m: &ModuleRep, a: &Scalar) -> Result<ModuleRep> {
    let e = e_lower(m, a)?;
    if e.dim() == 0 {
        return Ok(e);
    }
    sub_module(&e, &socle(&e)?)
}

/// `ẽ*_a N = soc e*_a N` (type A).
pub fn crystal_e_star(m: &ModuleRep, a: &Scalar) -> Result<ModuleRep> {
    let e = e_star_lower(m, a)?;
    if e.dim() == 0 {
        return Ok(e);
    }
    sub_module(&e, &socle(&e)?)
}

/// Outcome of `f̃_a`.
#[derive(Clone, Debug)]
pub enum CrystalResult {
    Irreducible(ModuleRep),
    /// Two non-isomorphic simple summands.
    SplitPair(ModuleRep, ModuleRep),
    /// The whole cosocle, with a description of what was found.
    ReducibleCosocle(ModuleRep, String),
}

impl CrystalResult {
    #[must_use]
    pub fn tag(&self) -> &'static str {
        match self {
            CrystalResult::Irreducible(_) => "Irreducible",
            CrystalResult::SplitPair(..) => "SplitPair",
            CrystalResult::ReducibleCosocle(..) => "ReducibleCosocle",
        }
    }

    #[must_use]
    pub fn irreducible(&self) -> Option<&ModuleRep> {
        match self {
            CrystalResult::Irreducible(m) => Some(m),
            _ => None,
        }
    }

    #[must_use]
    pub fn parts(&self) -> Vec<&ModuleRep> {
        match self {
            CrystalResult::Irreducible(m) | CrystalResult::ReducibleCosocle(m, _) => vec![m],
            CrystalResult::SplitPair(a, b) => vec![a, b],
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let parts: Vec<Value> = self
            .parts()
            .into_iter()
            .map(|m| {
                serde_json::from_str(&m.to_json()?).map_err(|e| HeckeError::Parse(e.to_string()))
            })
            .collect::<Result<_>>()?;
        let mut v = json!({ "tag": self.tag(), "parts": parts });
        if let CrystalResult::ReducibleCosocle(_, why) = self {
            v["diagnostics"] = Value::String(why.clone());
        }
        Ok(v.to_string())
    }
}

fn classify(f: &ModuleRep) -> Result<CrystalResult> {
    let parts = cosocle_summands(f)?;
    match parts.len() {
        1 => Ok(CrystalResult::Irreducible(
            parts.into_iter().next().expect("one part"),
        )),
        2 if !is_isomorphic(&parts[0], &parts[1])? => {
            let mut it = parts.into_iter();
            Ok(CrystalResult::SplitPair(
                it.next().expect("two parts"),
                it.next().expect("two parts"),
            ))
        }
        k => {
            let dims: Vec<usize> = parts.iter().map(ModuleRep::dim).collect();
            Ok(CrystalResult::ReducibleCosocle(
                cosocle(f)?,
                format!("cosocle has {k} simple summands of dimensions {dims:?}"),
            ))
        }
    }
}

/// `f̃_a M = cosoc f_a M`, classified.
pub fn crystal_f(m: &ModuleRep, a: &Scalar) -> Result<CrystalResult> {
    classify(&f_raise(m, a)?)
}

pub fn crystal_f_in(m: &ModuleRep, a: &Scalar, family: Family) -> Result<CrystalResult> {
    classify(&f_raise_in(m, a, family)?)
}

/// `f̃*_a N = cosoc f*_a N` (type A).
pub fn crystal_f_star(m: &ModuleRep, a: &Scalar) -> Result<CrystalResult> {
    classify(&f_star_raise(m, a)?)
}

/// Principal series shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    A,
    B,
}

/// Type A: `ind (a, ..., a)` to `H_n^A`. Type B: the cosocle of `ind (a_0, a, ..., a)` to `H_n`.
pub fn principal_series(
    kind: SeriesKind,
    a0: Option<&Scalar>,
    a: &Scalar,
    n: usize,
    p: &Scalar,
    q: &Scalar,
) -> Result<ModuleRep> {
    match kind {
        SeriesKind::A => {
            let lat = AlgebraDesc::new(Lattice::Reduced, n, p.clone(), q.clone(), BTreeSet::new())?;
            let seed = ModuleRep::one_dim(lat, &vec![a.clone(); n])?;
            induce(&seed, &AlgebraDesc::a(n, p.clone(), q.clone())?)
        }
        SeriesKind::B => {
            if a.abs().is_one() {
                return Err(HeckeError::Domain(
                    "type B principal series needs a != ±1".into(),
                ));
            }
            let a0 =
                a0.ok_or_else(|| HeckeError::Domain("type B principal series needs a0".into()))?;
            let lat = AlgebraDesc::new(Lattice::Full, n, p.clone(), q.clone(), BTreeSet::new())?;
            let mut vals = vec![a0.clone()];
            vals.extend(std::iter::repeat_n(a.clone(), n));
            let seed = ModuleRep::one_dim(lat, &vals)?;
            cosocle(&induce(&seed, &AlgebraDesc::b(n, p.clone(), q.clone())?)?)
        }
    }
}

/// The one-dimensional module `(a_0)` of `F[X_0^{±1}]`.
pub fn seed(a0: &Scalar, p: &Scalar, q: &Scalar) -> Result<ModuleRep> {
    ModuleRep::one_dim(
        AlgebraDesc::new(Lattice::Full, 0, p.clone(), q.clone(), BTreeSet::new())?,
        std::slice::from_ref(a0),
    )
}

/// Result of following a path of crystal operators.
#[derive(Clone, Debug)]
pub struct PathOutcome {
    pub result: CrystalResult,
    /// Number of operators applied (the last one may be where it stopped).
    pub steps: usize,
}

/// `f̃_{a_k} ... f̃_{a_1} (a_0)`, stopping at the first step without an irreducible cosocle.
pub fn build_from_path(
    a0: &Scalar,
    path: &[Scalar],
    p: &Scalar,
    q: &Scalar,
) -> Result<PathOutcome> {
    let mut cur = CrystalResult::Irreducible(seed(a0, p, q)?);
    for (k, a) in path.iter().enumerate() {
        let m = match &cur {
            CrystalResult::Irreducible(m) => m.clone(),
            _ => unreachable!("loop stops at non-irreducible results"),
        };
        cur = crystal_f(&m, a)?;
        if cur.irreducible().is_none() {
            return Ok(PathOutcome {
                result: cur,
                steps: k + 1,
            });
        }
    }
    Ok(PathOutcome {
        result: cur,
        steps: path.len(),
    })
}

/// Generators `i ∈ I` with `x^{-1} s_i x` a simple reflection in `J`.
#[must_use]
pub fn conjugate_gens(
    x: &WeylElem,
    i_gens: &BTreeSet<usize>,
    j_gens: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    let n = x.rank();
    let xinv = x.inverse();
    i_gens
        .iter()
        .copied()
        .filter(|&i| {
            let c = xinv
                .mul(&WeylElem::simple(n, i).expect("generator in range"))
                .mul(x);
            let w = c.reduced_word();
            w.len() == 1 && j_gens.contains(&w[0])
        })
        .collect()
}

#[cfg(test)]
mod tests;
