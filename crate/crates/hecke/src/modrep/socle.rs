//! Socle, cosocle and composition factors.
//!
//! Every simple submodule contains a simultaneous eigenvector of the lattice, so
//! the socle is complete once every such eigenvector lies in it.

use crate::error::{HeckeError, Result};
use crate::linalg::Vector;

use super::{
    eigenspace, hom_space, irreducibility, is_isomorphic, quotient, spin, sub_module, tau_dual,
    weight_spaces, Irreducibility, ModuleRep, Submodule,
};

#[derive(Clone, Debug)]
pub struct SocleResult {
    pub socle: Submodule,
    /// Simple submodules whose direct sum is the socle.
    pub summands: Vec<Submodule>,
    /// One representative per isomorphism type, in order of discovery.
    pub types: Vec<ModuleRep>,
}

fn all_eigenvectors(m: &ModuleRep) -> Result<Vec<Vector>> {
    Ok(weight_spaces(m)?
        .iter()
        .flat_map(|w| eigenspace(m, w))
        .collect())
}

/// Coordinates of `t` (a submodule of `sub_module(m, s)`) pushed back into `m`.
fn lift(s: &Submodule, t: &Submodule) -> Submodule {
    t.map(&s.basis_matrix())
}

/// Some simple submodule, found by descending from the span of an eigenvector.
pub fn find_simple_submodule(m: &ModuleRep) -> Result<Submodule> {
    if m.dim() == 0 {
        return Err(HeckeError::Domain(
            "the zero module has no simple submodule".into(),
        ));
    }
    let ws = weight_spaces(m)?;
    let smallest = ws
        .iter()
        .min_by_key(|w| w.dim())
        .expect("nonzero module has a weight");
    let v = eigenspace(m, smallest)
        .into_iter()
        .next()
        .expect("weight space has an eigenvector");
    let mut s = spin(m, &[v]);
    loop {
        let sub = sub_module(m, &s)?;
        match irreducibility(&sub)? {
            Irreducibility::Irreducible => return Ok(s),
            Irreducibility::Reducible(t) => s = lift(&s, &t),
            Irreducibility::Unknown(msg) => return Err(HeckeError::Undecided(msg)),
        }
    }
}

/// Sum of the images of all homomorphisms `L → M`, split into simple pieces.
fn isotypic(l: &ModuleRep, m: &ModuleRep) -> Result<Vec<Submodule>> {
    let mut acc = Submodule::zero(m.dim());
    let mut parts = Vec::new();
    for phi in hom_space(l, m)? {
        let im = Submodule::full(l.dim()).map(&phi);
        if !acc.contains_sub(&im) {
            acc = acc.sum(&im);
            parts.push(im);
        }
    }
    Ok(parts)
}

/// Isomorphism types of simple submodules of `m`.
fn socle_types(m: &ModuleRep) -> Result<Vec<ModuleRep>> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    socle_types_from(m, find_simple_submodule(m)?)
}

fn socle_types_from(m: &ModuleRep, first: Submodule) -> Result<Vec<ModuleRep>> {
    let l = sub_module(m, &first)?;
    let parts = isotypic(&l, m)?;
    let t = parts.iter().fold(Submodule::zero(m.dim()), |a, b| a.sum(b));
    let mut types = vec![l];
    if all_eigenvectors(m)?.iter().all(|v| t.contains(v)) {
        return Ok(types);
    }
    // other simple submodules survive in M/T; keep only the types that really occur in M
    for cand in socle_types(&quotient(m, &t)?)? {
        if hom_space(&cand, m)?.is_empty() {
            continue;
        }
        let mut known = false;
        for k in &types {
            if is_isomorphic(k, &cand)? {
                known = true;
                break;
            }
        }
        if !known {
            types.push(cand);
        }
    }
    Ok(types)
}

pub fn socle_summands(m: &ModuleRep) -> Result<SocleResult> {
    if m.dim() == 0 {
        return Ok(SocleResult {
            socle: Submodule::zero(0),
            summands: Vec::new(),
            types: Vec::new(),
        });
    }
    let first = find_simple_submodule(m)?;
    if first.is_full() {
        return Ok(SocleResult {
            socle: first.clone(),
            summands: vec![first],
            types: vec![m.clone()],
        });
    }
    let types = socle_types_from(m, first)?;
    let mut socle = Submodule::zero(m.dim());
    let mut summands = Vec::new();
    for l in &types {
        for part in isotypic(l, m)? {
            socle = socle.sum(&part);
            summands.push(part);
        }
    }
    Ok(SocleResult {
        socle,
        summands,
        types,
    })
}

pub fn socle(m: &ModuleRep) -> Result<Submodule> {
    Ok(socle_summands(m)?.socle)
}

fn known_simple(m: &ModuleRep) -> Result<bool> {
    Ok(m.dim() > 0 && matches!(irreducibility(m)?, Irreducibility::Irreducible))
}

/// `M / rad M`, with `rad M` the annihilator of the socle of `M^τ`.
pub fn cosocle(m: &ModuleRep) -> Result<ModuleRep> {
    // weight bases of M^τ can be much larger than those of M
    if known_simple(m)? {
        return Ok(m.clone());
    }
    let s = socle(&tau_dual(m))?;
    quotient(m, &s.annihilator())
}

/// Simple summands of the cosocle, one per simple summand of `soc(M^τ)`.
pub fn cosocle_summands(m: &ModuleRep) -> Result<Vec<ModuleRep>> {
    if known_simple(m)? {
        return Ok(vec![m.clone()]);
    }
    socle_summands(&tau_dual(m))?
        .summands
        .iter()
        .map(|s| quotient(m, &s.annihilator()))
        .collect()
}

/// Composition factors from the bottom up.
pub fn composition_factors(m: &ModuleRep) -> Result<Vec<ModuleRep>> {
    let mut out = Vec::new();
    let mut cur = m.clone();
    while cur.dim() > 0 {
        let s = find_simple_submodule(&cur)?;
        out.push(sub_module(&cur, &s)?);
        cur = quotient(&cur, &s)?;
    }
    Ok(out)
}

/// How often the simple module `l` occurs as a composition factor of `m`.
pub fn multiplicity_of(l: &ModuleRep, m: &ModuleRep) -> Result<usize> {
    let mut k = 0;
    for f in composition_factors(m)? {
        if f.dim() == l.dim() && is_isomorphic(&f, l)? {
            k += 1;
        }
    }
    Ok(k)
}
