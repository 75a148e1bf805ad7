//! Formal characters, shuffles, central orbits and blocks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDesc, Lattice};
use crate::error::{HeckeError, Result};
use crate::linalg::{Matrix, Vector};
use crate::modrep::{sub_module, weight_spaces, ModuleRep, Submodule};
use crate::scalars::Scalar;

/// Multiset of eigenvalue tuples, one entry per lattice generator present.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalCharacter {
    entries: BTreeMap<Vec<Scalar>, usize>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    tuple: Vec<Scalar>,
    mult: usize,
}

impl FormalCharacter {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn single(tuple: Vec<Scalar>) -> Self {
        let mut c = Self::new();
        c.add(tuple, 1);
        c
    }

    /// Each tuple with multiplicity one.
    #[must_use]
    pub fn from_iter_tuples(tuples: impl IntoIterator<Item = Vec<Scalar>>) -> Self {
        let mut c = Self::new();
        for t in tuples {
            c.add(t, 1);
        }
        c
    }

    pub fn add(&mut self, tuple: Vec<Scalar>, mult: usize) {
        if mult > 0 {
            *self.entries.entry(tuple).or_insert(0) += mult;
        }
    }

    pub fn add_all(&mut self, other: &FormalCharacter) {
        for (t, &m) in &other.entries {
            self.add(t.clone(), m);
        }
    }

    #[must_use]
    pub fn entries(&self) -> &BTreeMap<Vec<Scalar>, usize> {
        &self.entries
    }

    #[must_use]
    pub fn mult(&self, tuple: &[Scalar]) -> usize {
        self.entries.get(tuple).copied().unwrap_or(0)
    }

    /// Sum of multiplicities.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.entries.values().sum()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Length of the tuples, if any.
    #[must_use]
    pub fn rank(&self) -> Option<usize> {
        self.entries.keys().next().map(Vec::len)
    }

    #[must_use]
    pub fn map_tuples(&self, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> FormalCharacter {
        let mut out = FormalCharacter::new();
        for (t, &m) in &self.entries {
            out.add(f(t), m);
        }
        out
    }

    /// Longest run of trailing entries equal to `a` among all tuples, never reaching into the first `skip` slots.
    #[must_use]
    pub fn tail_length(&self, a: &Scalar, skip: usize) -> usize {
        self.entries
            .keys()
            .map(|t| t.iter().skip(skip).rev().take_while(|x| *x == a).count())
            .max()
            .unwrap_or(0)
    }

    /// Longest run of leading entries equal to `a`, skipping the first `skip` slots.
    #[must_use]
    pub fn head_length(&self, a: &Scalar, skip: usize) -> usize {
        self.entries
            .keys()
            .map(|t| t.iter().skip(skip).take_while(|x| *x == a).count())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| HeckeError::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Vec<Entry> =
            serde_json::from_str(s).map_err(|e| HeckeError::Parse(e.to_string()))?;
        let mut out = FormalCharacter::new();
        let mut rank = None;
        for e in v {
            if e.mult == 0 {
                return Err(HeckeError::Parse("multiplicity must be positive".into()));
            }
            if *rank.get_or_insert(e.tuple.len()) != e.tuple.len() {
                return Err(HeckeError::Parse("tuples of different lengths".into()));
            }
            if e.tuple.iter().any(Scalar::is_zero) {
                return Err(HeckeError::Parse("eigenvalues must be nonzero".into()));
            }
            out.add(e.tuple, e.mult);
        }
        Ok(out)
    }

    /// One row per tuple: entries then multiplicity.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (t, m) in &self.entries {
            let cols: Vec<String> = t.iter().map(ToString::to_string).collect();
            s.push_str(&cols.join(","));
            s.push_str(&format!(",{m}\n"));
        }
        s
    }
}

impl Serialize for FormalCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(t, &m)| Entry {
            tuple: t.clone(),
            mult: m,
        }))
    }
}

impl fmt::Display for FormalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(t, m)| {
                let inner: Vec<String> = t.iter().map(ToString::to_string).collect();
                if *m == 1 {
                    format!("[({})]", inner.join(","))
                } else {
                    format!("{m}[({})]", inner.join(","))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Formal character of a module. Fails when some eigenvalue is not rational.
pub fn character(m: &ModuleRep) -> Result<FormalCharacter> {
    let mut out = FormalCharacter::new();
    for w in weight_spaces(m)? {
        out.add(w.weight.clone(), w.dim());
    }
    debug_assert_eq!(out.dim(), m.dim());
    Ok(out)
}

/// How the right-hand factor may be moved past the left one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShuffleKind {
    /// Tuples `(a_0; a_1..a_m)`; inverting `b_j` multiplies `a_0` by `b_j`.
    B,
    /// Tuples `(a_1..a_m)` without `X_0`.
    R,
    /// Plain shuffles, no inversions.
    A,
}

fn three_way(xs: &[&[Scalar]], cur: &mut Vec<Scalar>, out: &mut Vec<Vec<Scalar>>) {
    if xs.iter().all(|x| x.is_empty()) {
        out.push(cur.clone());
        return;
    }
    for k in 0..xs.len() {
        if let Some((h, rest)) = xs[k].split_first() {
            let mut next: Vec<&[Scalar]> = xs.to_vec();
            next[k] = rest;
            cur.push(h.clone());
            three_way(&next, cur, out);
            cur.pop();
        }
    }
}

/// Character of `ind (M ⊠ K)` from the characters of `M` and `K`.
///
/// For each prefix `b_1..b_r` of a tuple of `K`, the reversed inverted prefix,
/// the remaining `b_{r+1}..b_k` and the entries of `M` are shuffled together.
#[must_use]
pub fn shuffle_character_with(
    ch_m: &FormalCharacter,
    ch_k: &FormalCharacter,
    kind: ShuffleKind,
) -> FormalCharacter {
    let mut out = FormalCharacter::new();
    for (a, &ma) in ch_m.entries() {
        for (b, &mb) in ch_k.entries() {
            let (head, body): (Option<&Scalar>, &[Scalar]) = match kind {
                ShuffleKind::B => (a.first(), &a[1..]),
                _ => (None, &a[..]),
            };
            let max_r = if kind == ShuffleKind::A { 0 } else { b.len() };
            for r in 0..=max_r {
                let inverted: Vec<Scalar> = b[..r].iter().rev().map(Scalar::inv).collect();
                let rest = &b[r..];
                let mut tails = Vec::new();
                three_way(&[body, &inverted, rest], &mut Vec::new(), &mut tails);
                let c0 = head.map(|h| b[..r].iter().fold(h.clone(), |acc, x| &acc * x));
                for t in tails {
                    let mut tuple = Vec::with_capacity(t.len() + 1);
                    if let Some(c) = &c0 {
                        tuple.push(c.clone());
                    }
                    tuple.extend(t);
                    out.add(tuple, ma * mb);
                }
            }
        }
    }
    out
}

/// Shuffle for the full lattice.
#[must_use]
pub fn shuffle_character(ch_m: &FormalCharacter, ch_k: &FormalCharacter) -> FormalCharacter {
    shuffle_character_with(ch_m, ch_k, ShuffleKind::B)
}

/// Orbit of a tuple under the Weyl group generated by `gens`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralCharOrbit {
    pub representative: Vec<Scalar>,
    pub orbit: BTreeSet<Vec<Scalar>>,
}

fn apply_simple(t: &[Scalar], i: usize, lattice: Lattice) -> Vec<Scalar> {
    let mut u = t.to_vec();
    let off = usize::from(lattice == Lattice::Full);
    if i == 0 {
        if lattice == Lattice::Full {
            u[0] = &t[0] * &t[1];
            u[1] = t[1].inv();
        } else {
            u[0] = t[0].inv();
        }
    } else {
        u.swap(off + i - 1, off + i);
    }
    u
}

/// Orbit under the subgroup generated by `gens`.
pub fn orbit_under(
    a: &[Scalar],
    lattice: Lattice,
    gens: &BTreeSet<usize>,
) -> Result<CentralCharOrbit> {
    if a.iter().any(Scalar::is_zero) {
        return Err(HeckeError::Domain("tuple entries must be nonzero".into()));
    }
    let n = if lattice == Lattice::Full {
        a.len().saturating_sub(1)
    } else {
        a.len()
    };
    if lattice == Lattice::Full && a.is_empty() {
        return Err(HeckeError::Domain(
            "full lattice tuples start with a_0".into(),
        ));
    }
    if gens.iter().any(|&i| i >= n) {
        return Err(HeckeError::OutOfRange(format!(
            "generator out of range for rank {n}"
        )));
    }
    let mut orbit = BTreeSet::new();
    let mut queue = VecDeque::from([a.to_vec()]);
    orbit.insert(a.to_vec());
    while let Some(t) = queue.pop_front() {
        for &i in gens {
            let u = apply_simple(&t, i, lattice);
            if orbit.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    let representative = orbit.iter().next().cloned().unwrap_or_default();
    Ok(CentralCharOrbit {
        representative,
        orbit,
    })
}

/// Orbit of `(a_0, ..., a_n)` under the whole finite Weyl group of type B.
pub fn central_orbit(a: &[Scalar]) -> Result<CentralCharOrbit> {
    let n = a.len().saturating_sub(1);
    orbit_under(a, Lattice::Full, &(0..n).collect())
}

/// Split a module by central character (orbits of its own Weyl group).
pub fn block_decompose(m: &ModuleRep) -> Result<Vec<ModuleRep>> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    let d: &AlgebraDesc = m.desc();
    let mut groups: BTreeMap<Vec<Scalar>, Vec<Vector>> = BTreeMap::new();
    for w in weight_spaces(m)? {
        let orb = orbit_under(&w.weight, d.lattice(), d.gens())?;
        groups
            .entry(orb.representative)
            .or_default()
            .extend(w.vectors());
    }
    groups
        .into_values()
        .map(|vs| sub_module(m, &Submodule::from_vectors(m.dim(), vs)))
        .collect()
}

/// Whether the characters are linearly independent as vectors indexed by tuples.
#[must_use]
pub fn char_linearly_independent(chars: &[FormalCharacter]) -> bool {
    let tuples: BTreeSet<&Vec<Scalar>> = chars.iter().flat_map(|c| c.entries().keys()).collect();
    let index: BTreeMap<&Vec<Scalar>, usize> =
        tuples.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let rows: Vec<Vector> = chars
        .iter()
        .map(|c| {
            let mut row = vec![Scalar::zero(); index.len()];
            for (t, &m) in c.entries() {
                row[index[t]] = Scalar::from_int(m as i64);
            }
            row
        })
        .collect();
    if rows.is_empty() {
        return true;
    }
    if index.is_empty() {
        return false;
    }
    Matrix::from_rows(rows).rank() == chars.len()
}
