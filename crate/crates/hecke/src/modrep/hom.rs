//! Homomorphism spaces by spinning a basis of the source.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HeckeError, Result};
use crate::linalg::{Echelon, Matrix, Vector};
use crate::scalars::Scalar;

use super::{current_seed, eigenspace, weight_spaces, ModuleRep};

/// Echelon over the source module that remembers how each row was built from tree vectors.
struct Tracked {
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    combos: Vec<BTreeMap<usize, Scalar>>,
}

impl Tracked {
    /// Residual of `v` and the combination of tree vectors that was subtracted.
    fn reduce(&self, v: &[Scalar]) -> (Vector, BTreeMap<usize, Scalar>) {
        let mut v = v.to_vec();
        let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
        for ((row, &p), c) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] -= &(&f * x);
                }
            }
            for (&l, a) in c {
                let e = combo.entry(l).or_insert_with(Scalar::zero);
                *e += &(&f * a);
            }
        }
        combo.retain(|_, a| !a.is_zero());
        (v, combo)
    }

    /// Insert the residual `r` of tree vector `k`, where `tree_k = r + combo`.
    fn insert(&mut self, r: Vector, k: usize, combo: BTreeMap<usize, Scalar>) {
        let p = r
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero residual");
        let inv = r[p].inv();
        let row: Vector = r.iter().map(|x| x * &inv).collect();
        // row = (tree_k - combo) / r[p]
        let mut c: BTreeMap<usize, Scalar> =
            combo.into_iter().map(|(l, a)| (l, -&(&a * &inv))).collect();
        c.insert(k, inv);
        self.rows.push(row);
        self.pivots.push(p);
        self.combos.push(c);
    }
}

enum Node {
    Root { block: usize },
    Child { parent: usize, gen: usize },
}

/// Basis of `Hom(M, N)`; each element is a `dim N × dim M` matrix.
pub fn hom_space(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<Matrix>> {
    if m.desc() != n.desc() {
        return Err(HeckeError::Incompatible(format!(
            "{} vs {}",
            m.desc(),
            n.desc()
        )));
    }
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(Vec::new());
    }
    let wm = weight_spaces(m)?;
    let wn = weight_spaces(n)?;
    let gm = m.generators();
    let gn = n.generators();

    // spin a basis of M out of weight vectors, recording tree shape and relations
    let mut tracked = Tracked {
        rows: Vec::new(),
        pivots: Vec::new(),
        combos: Vec::new(),
    };
    let mut tree: Vec<Vector> = Vec::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut relations: Vec<(usize, usize, BTreeMap<usize, Scalar>)> = Vec::new();
    let mut blocks: Vec<Matrix> = Vec::new();
    // an eigenvector must land on an eigenvector, so root it first: for cyclic M this
    // leaves only the eigenspace of N as unknowns
    let smallest = wm
        .iter()
        .min_by_key(|w| w.dim())
        .expect("nonzero module has a weight");
    let first = eigenspace(m, smallest)
        .into_iter()
        .next()
        .expect("weight space has an eigenvector");
    let first_block = match wn.iter().find(|w| w.weight == smallest.weight) {
        Some(t) => Matrix::from_cols(n.dim(), &eigenspace(n, t)),
        None => Matrix::zeros(n.dim(), 0),
    };
    let roots = std::iter::once((first, Some(first_block))).chain(wm.iter().flat_map(|ws| {
        let target = wn.iter().find(|w| w.weight == ws.weight);
        ws.vectors()
            .into_iter()
            .map(move |v| (v, target.map(|t| t.basis.clone())))
    }));
    for (s, target) in roots {
        let (r, combo) = tracked.reduce(&s);
        if r.iter().all(Scalar::is_zero) {
            continue;
        }
        let k = tree.len();
        tracked.insert(r, k, combo);
        tree.push(s);
        blocks.push(target.unwrap_or_else(|| Matrix::zeros(n.dim(), 0)));
        nodes.push(Node::Root {
            block: blocks.len() - 1,
        });
        let mut idx = k;
        while idx < tree.len() {
            for (g, mat) in gm.iter().enumerate() {
                let w = mat.mul_vec(&tree[idx]);
                let (r, combo) = tracked.reduce(&w);
                if r.iter().all(Scalar::is_zero) {
                    relations.push((idx, g, combo));
                } else {
                    let kk = tree.len();
                    tracked.insert(r, kk, combo);
                    tree.push(w);
                    nodes.push(Node::Child {
                        parent: idx,
                        gen: g,
                    });
                }
            }
            idx += 1;
        }
    }
    debug_assert_eq!(tree.len(), m.dim());

    // unknowns: one coordinate block per root, in the matching weight space of N
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.cols();
            Some(o)
        })
        .collect();
    let u: usize = blocks.iter().map(Matrix::cols).sum();
    if u == 0 {
        return Ok(Vec::new());
    }
    let mut w: Vec<Matrix> = Vec::with_capacity(tree.len());
    for node in &nodes {
        let wk = match node {
            Node::Root { block } => {
                let mut e = Matrix::zeros(n.dim(), u);
                let b = &blocks[*block];
                for i in 0..n.dim() {
                    for j in 0..b.cols() {
                        e.set(i, offsets[*block] + j, b.get(i, j).clone());
                    }
                }
                e
            }
            Node::Child { parent, gen } => gn[*gen].mul(&w[*parent]),
        };
        w.push(wk);
    }
    let mut constraints = Echelon::new(u);
    for (k, g, combo) in &relations {
        let mut c = gn[*g].mul(&w[*k]);
        for (&l, a) in combo {
            c = c.sub(&w[l].scale(a));
        }
        for i in 0..c.rows() {
            constraints.insert(c.row(i).to_vec());
        }
        if constraints.is_full() {
            return Ok(Vec::new());
        }
    }
    let sols = constraints.to_matrix().kernel();
    let v = Matrix::from_cols(m.dim(), &tree);
    let vinv = v.inverse()?;
    Ok(sols
        .into_iter()
        .map(|z| {
            let cols: Vec<Vector> = w.iter().map(|wk| wk.mul_vec(&z)).collect();
            Matrix::from_cols(n.dim(), &cols).mul(&vinv)
        })
        .collect())
}

const ISO_RETRIES: u64 = 8;
const ISO_RANGE: i64 = 1000;

/// Isomorphism test: characters, then an invertible element of `Hom(M, N)`.
///
/// A one-dimensional hom space is decided exactly. Larger ones try seeded random
/// combinations; a nonzero determinant polynomial of degree `dim` misses all
/// `ISO_RETRIES` probes from a range of 2001 values with negligible probability.
pub fn is_isomorphic(m: &ModuleRep, n: &ModuleRep) -> Result<bool> {
    if m.desc() != n.desc() || m.dim() != n.dim() {
        return Ok(false);
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    let cm: Vec<(Vec<Scalar>, usize)> = weight_spaces(m)?
        .into_iter()
        .map(|w| (w.weight.clone(), w.dim()))
        .collect();
    let cn: Vec<(Vec<Scalar>, usize)> = weight_spaces(n)?
        .into_iter()
        .map(|w| (w.weight.clone(), w.dim()))
        .collect();
    if cm != cn {
        return Ok(false);
    }
    let homs = hom_space(m, n)?;
    match homs.len() {
        0 => Ok(false),
        1 => Ok(!homs[0].det().is_zero()),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(current_seed() ^ 0x150);
            for _ in 0..ISO_RETRIES {
                let mut acc = Matrix::zeros(n.dim(), m.dim());
                for h in &homs {
                    acc =
                        acc.add(&h.scale(&Scalar::from_int(rng.gen_range(-ISO_RANGE..=ISO_RANGE))));
                }
                if !acc.det().is_zero() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
