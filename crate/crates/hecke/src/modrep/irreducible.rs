//! Irreducibility through a weight space of minimal multiplicity.
//!
//! With `e` the projection onto a generalized weight space `M[a]`, `M` is
//! absolutely irreducible iff `M[a]` generates `M`, `M^τ[a]` generates `M^τ`,
//! and the image of `eAe` is all of `End(M[a])`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HeckeError, Result};
use crate::linalg::modp::{ModEchelon, ModMatrix};
use crate::linalg::{Echelon, Matrix, Vector};
use crate::scalars::Scalar;

use super::{current_seed, spin, tau_dual, weight_spaces, ModuleRep, Submodule};

#[derive(Clone, Debug)]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero submodule.
    Reducible(Submodule),
    /// Irreducible over the rationals could not be told apart from absolutely irreducible.
    Unknown(String),
}

const NORTON_TRIES: usize = 24;

pub fn irreducibility(m: &ModuleRep) -> Result<Irreducibility> {
    let d = m.dim();
    if d == 0 {
        return Err(HeckeError::Domain(
            "the zero module is not irreducible".into(),
        ));
    }
    if d == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let ws = weight_spaces(m)?;
    let (ai, a) = ws
        .iter()
        .enumerate()
        .min_by_key(|(_, w)| w.dim())
        .expect("nonzero module has a weight");
    let e = a.dim();

    let s1 = spin(m, &a.vectors());
    if !s1.is_full() {
        return Ok(Irreducibility::Reducible(s1));
    }
    let mt = tau_dual(m);
    let wst = weight_spaces(&mt)?;
    let at = wst
        .iter()
        .find(|w| w.weight == a.weight)
        .expect("transpose has the same weights");
    let s2 = spin(&mt, &at.vectors());
    if !s2.is_full() {
        return Ok(Irreducibility::Reducible(s2.annihilator()));
    }
    if e == 1 {
        return Ok(Irreducibility::Irreducible);
    }

    // projection onto M[a] along the other weight spaces
    let all_cols: Vec<Vector> = ws.iter().flat_map(|w| w.vectors()).collect();
    let p = Matrix::from_cols(d, &all_cols);
    let pinv = p.inverse()?;
    let offset: usize = ws[..ai].iter().map(|w| w.dim()).sum();
    let rows: Vec<usize> = (offset..offset + e).collect();
    let pi = pinv.select_rows(&rows);
    let iota = a.basis.clone();

    if eae_full_mod_p(&gens_of(m), &pi, &iota) {
        return Ok(Irreducibility::Irreducible);
    }

    // spin ι under left multiplication, watching the rank of π(Aι)
    let flat = |x: &Matrix| -> Vector { (0..x.rows()).flat_map(|i| x.row(i).to_vec()).collect() };
    let gens = m.generators();
    let mut big = Echelon::new(d * e);
    let mut small = Echelon::new(e * e);
    let mut queue = vec![iota.clone()];
    big.insert(flat(&iota));
    small.insert(flat(&pi.mul(&iota)));
    let mut k = 0;
    while k < queue.len() {
        if small.is_full() {
            return Ok(Irreducibility::Irreducible);
        }
        let cur = queue[k].clone();
        k += 1;
        for g in &gens {
            let next = g.mul(&cur);
            if big.insert(flat(&next)) {
                small.insert(flat(&pi.mul(&next)));
                queue.push(next);
            }
        }
    }
    if small.is_full() {
        return Ok(Irreducibility::Irreducible);
    }

    // eAe acts on M[a] through a proper subalgebra: look for a proper invariant subspace
    let alg: Vec<Matrix> = small
        .rows()
        .iter()
        .map(|r| Matrix::from_rows((0..e).map(|i| r[i * e..(i + 1) * e].to_vec()).collect()))
        .collect();
    let alg_t: Vec<Matrix> = alg.iter().map(Matrix::transpose).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(current_seed() ^ 0x1ED);
    for attempt in 0..NORTON_TRIES {
        let x = if attempt < alg.len() {
            alg[attempt].clone()
        } else {
            let mut acc = Matrix::zeros(e, e);
            for y in &alg {
                acc = acc.add(&y.scale(&Scalar::from_int(rng.gen_range(-9..=9))));
            }
            acc
        };
        let (roots, _) = x.char_poly().rational_roots(&[]);
        for (lambda, _) in roots {
            let shifted = x.sub_scalar(&lambda);
            for u in shifted.kernel() {
                let span = Echelon::from_vectors(
                    e,
                    std::iter::once(u.clone()).chain(alg.iter().map(|y| y.mul_vec(&u))),
                );
                if span.rank() < e {
                    let seed = iota.mul_vec(&closure(&alg, &u, e)[0]);
                    return Ok(Irreducibility::Reducible(spin(m, &[seed])));
                }
            }
            for u in shifted.transpose().kernel() {
                let span = closure(&alg_t, &u, e);
                if span.len() < e {
                    // annihilator of a proper dual submodule is a proper submodule of M[a]
                    let ann = Submodule::from_vectors(e, span).annihilator();
                    let seed = iota.mul_vec(&ann.basis()[0]);
                    return Ok(Irreducibility::Reducible(spin(m, &[seed])));
                }
            }
        }
    }
    Ok(Irreducibility::Unknown(format!(
        "weight space of dimension {e} carries an algebra of dimension {} < {}",
        small.rank(),
        e * e
    )))
}

fn gens_of(m: &ModuleRep) -> Vec<Matrix> {
    m.generators().into_iter().cloned().collect()
}

/// The exact loop below, run over `Z/pZ`: full rank there forces full rank over `Q`.
fn eae_full_mod_p(gens: &[Matrix], pi: &Matrix, iota: &Matrix) -> bool {
    let (Some(pi), Some(iota)) = (ModMatrix::reduce(pi), ModMatrix::reduce(iota)) else {
        return false;
    };
    let Some(gens) = gens
        .iter()
        .map(ModMatrix::reduce)
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let e = iota.cols();
    let mut big = ModEchelon::new(iota.rows() * e);
    let mut small = ModEchelon::new(e * e);
    big.insert(iota.flat());
    small.insert(pi.mul(&iota).flat());
    let mut queue = vec![iota];
    let mut k = 0;
    while k < queue.len() && !small.is_full() {
        let cur = queue[k].clone();
        k += 1;
        for g in &gens {
            let next = g.mul(&cur);
            if big.insert(next.flat()) {
                small.insert(pi.mul(&next).flat());
                queue.push(next);
            }
        }
    }
    small.is_full()
}

/// Span of `{u} ∪ {y u}` closed under the algebra (which contains the identity).
fn closure(alg: &[Matrix], u: &[Scalar], e: usize) -> Vec<Vector> {
    let mut ech = Echelon::new(e);
    let mut queue = vec![u.to_vec()];
    ech.insert(u.to_vec());
    let mut k = 0;
    while k < queue.len() {
        let v = queue[k].clone();
        k += 1;
        for y in alg {
            let w = y.mul_vec(&v);
            if ech.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    queue
}

/// `Ok(true/false)` when decided; `Undecided` otherwise.
pub fn is_irreducible(m: &ModuleRep) -> Result<bool> {
    match irreducibility(m)? {
        Irreducibility::Irreducible => Ok(true),
        Irreducibility::Reducible(_) => Ok(false),
        Irreducibility::Unknown(msg) => Err(HeckeError::Undecided(msg)),
    }
}
