//! Simultaneous generalized eigenspaces of the lattice generators.

use crate::error::{HeckeError, Result};
use crate::linalg::{Echelon, Matrix, Poly, Vector};
use crate::scalars::Scalar;

use super::ModuleRep;

/// Generalized weight space: `weight` lists eigenvalues of the present `X_j` in
/// index order; `basis` has the spanning vectors as columns.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub weight: Vec<Scalar>,
    pub basis: Matrix,
}

impl WeightSpace {
    #[must_use]
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    #[must_use]
    pub fn vectors(&self) -> Vec<Vector> {
        self.basis.to_cols()
    }
}

/// Generalized eigenspace of `a` at `c`, as a kernel chain of `a - c`.
fn generalized_kernel(a: &Matrix, c: &Scalar) -> Vec<Vector> {
    let shifted = a.sub_scalar(c);
    let mut ker = shifted.kernel();
    if ker.is_empty() {
        return ker;
    }
    let mut power = shifted.clone();
    loop {
        power = power.mul(&shifted);
        let next = power.kernel();
        if next.len() == ker.len() {
            return ker;
        }
        ker = next;
    }
}

/// Generalized eigenspaces at the hinted values, if they fill the whole space.
fn split_by_hints(a: &Matrix, hints: &[Scalar]) -> Option<Vec<(Scalar, Matrix)>> {
    let k = a.rows();
    let mut parts = Vec::new();
    let mut total = 0;
    for c in hints {
        let ker = generalized_kernel(a, c);
        if !ker.is_empty() {
            total += ker.len();
            parts.push((c.clone(), Matrix::from_cols(k, &ker)));
        }
    }
    if total != k {
        return None;
    }
    parts.sort_by(|x, y| x.0.cmp(&y.0));
    Some(parts)
}

fn split_by_char_poly(a: &Matrix, hints: &[Scalar]) -> std::result::Result<Vec<(Scalar, Matrix)>, Poly> {
    let (roots, rest) = a.char_poly().rational_roots(hints);
    if rest.degree() > 0 {
        return Err(rest);
    }
    Ok(roots
        .into_iter()
        .map(|(c, mult)| {
            let ker = a.sub_scalar(&c).pow(mult as u32).kernel();
            debug_assert_eq!(ker.len(), mult);
            (c, Matrix::from_cols(a.rows(), &ker))
        })
        .collect())
}

/// Split the module into simultaneous generalized eigenspaces, one `X_j` at a time.
/// The result is cached on the module.
///
/// Fails with `NonRationalEigenvalue` when some characteristic polynomial has an
/// irreducible factor of degree > 1.
pub fn weight_spaces(m: &ModuleRep) -> Result<Vec<WeightSpace>> {
    if let Some(ws) = m.weights.get() {
        return Ok(ws.clone());
    }
    let ws = compute_weight_spaces(m)?;
    Ok(m.weights.get_or_init(|| ws).clone())
}

/// Weight spaces of `M^τ` from those of `M`: the rows of the inverse weight basis
/// belonging to one weight span that weight space of the dual.
pub(super) fn dual_weight_spaces(ws: &[WeightSpace], dim: usize) -> Result<Vec<WeightSpace>> {
    let cols: Vec<Vector> = ws.iter().flat_map(WeightSpace::vectors).collect();
    let inv = Matrix::from_cols(dim, &cols).inverse()?;
    let mut out = Vec::with_capacity(ws.len());
    let mut offset = 0;
    for w in ws {
        let rows: Vec<Vector> = (offset..offset + w.dim()).map(|i| inv.row(i).to_vec()).collect();
        offset += w.dim();
        out.push(WeightSpace { weight: w.weight.clone(), basis: Matrix::from_cols(dim, &rows) });
    }
    Ok(out)
}

/// Weight spaces of a quotient, given the projection onto its coordinates.
pub(super) fn image_weight_spaces(ws: &[WeightSpace], image: impl Fn(&Vector) -> Vector, dim: usize) -> Vec<WeightSpace> {
    ws.iter()
        .filter_map(|w| {
            let mut ech = Echelon::new(dim);
            let mut cols = Vec::new();
            for v in w.vectors() {
                let u = image(&v);
                if ech.insert(u.clone()) {
                    cols.push(u);
                }
            }
            (!cols.is_empty()).then(|| WeightSpace { weight: w.weight.clone(), basis: Matrix::from_cols(dim, &cols) })
        })
        .collect()
}

pub(super) fn compute_weight_spaces(m: &ModuleRep) -> Result<Vec<WeightSpace>> {
    let hints: Vec<Scalar> = m.hints().iter().cloned().collect();
    let mut spaces = vec![(Vec::new(), Matrix::identity(m.dim()))];
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    for (j, x) in m.x_mats() {
        let mut next = Vec::new();
        for (w, b) in spaces {
            let a = b.solve_left(&x.mul(&b))?;
            let k = a.rows();
            if k == 1 {
                let mut w2: Vec<Scalar> = w.clone();
                w2.push(a.get(0, 0).clone());
                next.push((w2, b));
                continue;
            }
            let parts = match split_by_hints(&a, &hints) {
                Some(parts) => parts,
                None => split_by_char_poly(&a, &hints).map_err(|rest| HeckeError::NonRationalEigenvalue(format!("X{j}: {rest}")))?,
            };
            for (c, kmat) in parts {
                let mut w2 = w.clone();
                w2.push(c);
                next.push((w2, b.mul(&kmat)));
            }
        }
        spaces = next;
    }
    let mut out: Vec<WeightSpace> = spaces
        .into_iter()
        .map(|(weight, basis)| WeightSpace { weight, basis })
        .collect();
    out.sort_by(|a, b| a.weight.cmp(&b.weight));
    Ok(out)
}

/// Simultaneous (true) eigenvectors inside a generalized weight space.
#[must_use]
pub fn eigenspace(m: &ModuleRep, ws: &WeightSpace) -> Vec<Vector> {
    let b = &ws.basis;
    let mut stacked: Option<Matrix> = None;
    for ((_, x), c) in m.x_mats().iter().zip(&ws.weight) {
        let blk = x.sub_scalar(c).mul(b);
        stacked = Some(match stacked {
            None => blk,
            Some(s) => s.vcat(&blk),
        });
    }
    let Some(s) = stacked else {
        return b.to_cols();
    };
    s.kernel().into_iter().map(|k| b.mul_vec(&k)).collect()
}

/// Jordan block sizes of `a` at eigenvalue `c`, largest first.
#[must_use]
pub fn jordan_block_sizes(a: &Matrix, c: &Scalar) -> Vec<usize> {
    let n = a.rows();
    let shifted = a.sub_scalar(c);
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    loop {
        p = p.mul(&shifted);
        let r = p.rank();
        if r == *ranks.last().unwrap() {
            break;
        }
        ranks.push(r);
    }
    // number of blocks of size >= k is ranks[k-1] - ranks[k]
    let ge: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in 0..ge.len() {
        let next = ge.get(k + 1).copied().unwrap_or(0);
        for _ in 0..ge[k] - next {
            sizes.push(k + 1);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}
