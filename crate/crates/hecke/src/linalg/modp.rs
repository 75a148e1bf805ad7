//! Matrices over `Z/pZ` for a fixed 61-bit prime.
//!
//! Ranks computed here are lower bounds for the ranks of the rational matrices
//! they reduce from, so a full rank mod `p` is a proof of full rank over `Q`.

use super::Matrix;

/// `2^61 - 1`.
pub const P: u64 = (1 << 61) - 1;

#[must_use]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

#[must_use]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[must_use]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[must_use]
pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue (`p` prime).
#[must_use]
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    /// Reduction of `m`; `None` if some denominator vanishes mod `P`.
    #[must_use]
    pub fn reduce(m: &Matrix) -> Option<Self> {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for x in m.row(i) {
                data.push(x.residue(P)?);
            }
        }
        Some(ModMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data,
        })
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[must_use]
    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut data = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = add(*o, mul(a, b, P), P);
                }
            }
        }
        ModMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Row-major entries.
    #[must_use]
    pub fn flat(&self) -> &[u64] {
        &self.data
    }
}

/// Incremental row echelon form mod `P`.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModEchelon {
    #[must_use]
    pub fn new(width: usize) -> Self {
        ModEchelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Adds `v` to the span; `true` if the rank went up.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width, "width mismatch");
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p];
            if f == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row).skip(p) {
                *x = sub(*x, mul(f, r, P), P);
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[p], P);
        for x in &mut v[p..] {
            *x = mul(*x, s, P);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}
