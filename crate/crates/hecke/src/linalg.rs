//! Dense exact linear algebra over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{HeckeError, Result};
use crate::scalars::Scalar;

pub mod modp;

pub type Vector = Vec<Scalar>;

/// Row-major dense matrix of scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    #[must_use]
    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    #[must_use]
    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Panics if the rows are ragged.
    #[must_use]
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    #[must_use]
    pub fn from_cols(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    #[must_use]
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    #[must_use]
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[must_use]
    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    #[must_use]
    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    #[must_use]
    pub fn to_cols(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// `Some(c)` when the matrix is `c` times the identity.
    #[must_use]
    pub fn as_scalar(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(Scalar::zero());
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if (i == j && *x != c) || (i != j && !x.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    #[must_use]
    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    #[must_use]
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, b) in orow.iter().enumerate() {
                    if !b.is_zero() {
                        let t = a * b;
                        out.data[base + j] += t;
                    }
                }
            }
        }
        out
    }

    #[must_use]
    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        let mut out = vec![Scalar::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = Scalar::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            *o = acc;
        }
        out
    }

    /// Row vector times matrix, `v^T A`.
    #[must_use]
    pub fn vec_mul(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Scalar::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.row(i).iter().enumerate() {
                if !b.is_zero() {
                    out[j] += a * b;
                }
            }
        }
        out
    }

    #[must_use]
    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    #[must_use]
    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    #[must_use]
    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self - c I`.
    #[must_use]
    pub fn sub_scalar(&self, c: &Scalar) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] -= c;
        }
        m
    }

    /// Non-negative integer power.
    #[must_use]
    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    #[must_use]
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * r2 + k, j * c2 + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Columns `cols` as a new matrix.
    #[must_use]
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    #[must_use]
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation.
    #[must_use]
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    #[must_use]
    pub fn vcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let t = self.get(r, j);
                    if !t.is_zero() {
                        let v = self.get(i, j) - &(&f * t);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    #[must_use]
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
            if e.rank() == self.cols {
                break;
            }
        }
        e.rank()
    }

    /// Basis of the right null space `{v : A v = 0}`.
    #[must_use]
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hcat(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(HeckeError::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.select_cols(&cols))
    }

    #[must_use]
    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            let inv = piv.inv();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = m.get(c, j);
                    if !t.is_zero() {
                        let v = m.get(i, j) - &(&f * t);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    /// Solve `self * X = rhs` for `X` when `self` has full column rank and a
    /// solution exists.
    pub fn solve_left(&self, rhs: &Matrix) -> Result<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let k = self.cols;
        let aug = self.hcat(rhs);
        let (r, pivots) = aug.rref();
        if pivots.len() < k || pivots[k - 1] != k - 1 || pivots.len() > k {
            return Err(HeckeError::NotInvariant(
                "system has no exact solution".into(),
            ));
        }
        let mut out = Matrix::zeros(k, rhs.cols);
        for i in 0..k {
            for j in 0..rhs.cols {
                out.set(i, j, r.get(i, k + j).clone());
            }
        }
        Ok(out)
    }

    /// Characteristic polynomial `det(x I - A)` via Hessenberg reduction.
    #[must_use]
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // reduce to upper Hessenberg form by similarity
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let piv_inv = h.get(m, m - 1).inv();
            for i in m + 1..n {
                let u = h.get(i, m - 1) * &piv_inv;
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = h.get(m, j);
                    if !t.is_zero() {
                        let v = h.get(i, j) - &(&u * t);
                        h.set(i, j, v);
                    }
                }
                for r in 0..n {
                    let t = h.get(r, i);
                    if !t.is_zero() {
                        let v = h.get(r, m) + &(&u * t);
                        h.set(r, m, v);
                    }
                }
            }
        }
        // recurrence on leading principal minors
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for m in 1..=n {
            let x_minus = Poly::from_coeffs(vec![-h.get(m - 1, m - 1), Scalar::one()]);
            let mut p = x_minus.mul(&ps[m - 1]);
            let mut t = Scalar::one();
            for i in 1..m {
                t *= h.get(m - i, m - i - 1);
                if t.is_zero() {
                    break;
                }
                let c = &t * h.get(m - i - 1, m - 1);
                p = p.sub(&ps[m - i - 1].scale(&c));
            }
            ps.push(p);
        }
        ps.pop().unwrap()
    }
}

/// Incrementally maintained row-echelon basis of a subspace of `F^dim`.
///
/// Rows are kept fully reduced: each pivot column is zero in every other row.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    #[must_use]
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    #[must_use]
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    #[must_use]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtract the span component; the residual is zero iff `v` lies in the span.
    #[must_use]
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] -= &(&f * x);
                }
            }
        }
        v
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` is in the span.
    #[must_use]
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let r = self.reduce(v);
        if r.iter().all(Scalar::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    #[must_use]
    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Insert a vector; returns true if the rank grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    row[j] -= &(&f * x);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    /// Rows as a `rank x dim` matrix (reduced row echelon form).
    #[must_use]
    pub fn to_matrix(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(0, self.dim);
        }
        Matrix::from_rows(self.rows.clone())
    }

    #[must_use]
    pub fn from_vectors(dim: usize, vs: impl IntoIterator<Item = Vector>) -> Self {
        let mut e = Echelon::new(dim);
        for v in vs {
            e.insert(v);
            if e.is_full() {
                break;
            }
        }
        e
    }
}

/// Dense univariate polynomial over the rationals, coefficients low to high.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    #[must_use]
    pub fn from_coeffs(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    #[must_use]
    pub fn one() -> Self {
        Poly(vec![Scalar::one()])
    }

    #[must_use]
    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    /// Degree; the zero polynomial reports 0.
    #[must_use]
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    #[must_use]
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    #[must_use]
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    #[must_use]
    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        Poly::from_coeffs(out)
    }

    #[must_use]
    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    #[must_use]
    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    #[must_use]
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dl = d.0.len();
        if r.len() < dl {
            return (Poly(vec![]), self.clone());
        }
        let lead_inv = d.0[dl - 1].inv();
        let mut q = vec![Scalar::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dl - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &(&c * dc);
            }
            q[k] = c;
        }
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    #[must_use]
    pub fn monic(&self) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    #[must_use]
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divide out `(x - root)` as often as possible; returns the multiplicity.
    pub fn strip_root(&mut self, root: &Scalar) -> usize {
        let lin = Poly::from_coeffs(vec![-root, Scalar::one()]);
        let mut m = 0;
        while self.degree() >= 1 && self.eval(root).is_zero() {
            let (q, _) = self.div_rem(&lin);
            *self = q;
            m += 1;
        }
        m
    }

    /// Integer primitive polynomial with the same roots.
    #[must_use]
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.0 {
            l = l.lcm(&c.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    /// All rational roots with multiplicity. `hints` are tried first; the
    /// rational root theorem handles whatever is left of the square-free part.
    #[must_use]
    pub fn rational_roots(&self, hints: &[Scalar]) -> (Vec<(Scalar, usize)>, Poly) {
        let mut rest = self.clone();
        let mut out: Vec<(Scalar, usize)> = Vec::new();
        if rest.degree() >= 1 && rest.0[0].is_zero() {
            let m = rest.strip_root(&Scalar::zero());
            out.push((Scalar::zero(), m));
        }
        for h in hints {
            if rest.degree() == 0 {
                break;
            }
            if out.iter().any(|(r, _)| r == h) {
                continue;
            }
            let m = rest.strip_root(h);
            if m > 0 {
                out.push((h.clone(), m));
            }
        }
        if rest.degree() >= 1 {
            let sqfree = {
                let g = rest.gcd(&rest.derivative());
                rest.div_rem(&g).0
            };
            for cand in rational_root_candidates(&sqfree) {
                if rest.degree() == 0 {
                    break;
                }
                let m = rest.strip_root(&cand);
                if m > 0 {
                    out.push((cand, m));
                }
            }
        }
        out.sort();
        (out, rest)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

const TRIAL_LIMIT: u64 = 200_000;

fn small_prime_factors(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        // either prime or a product of large primes; treated as one factor
        out.push((n, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in small_prime_factors(n) {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
        if ds.len() > 20_000 {
            break;
        }
    }
    ds
}

fn rational_root_candidates(p: &Poly) -> Vec<Scalar> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let ints = p.to_primitive_integer();
    let a0 = &ints[0];
    let an = &ints[ints.len() - 1];
    if a0.is_zero() {
        return vec![Scalar::zero()];
    }
    let mut out = Vec::new();
    let dn = divisors(a0);
    let dd = divisors(an);
    for n in &dn {
        for d in &dd {
            for s in [1i64, -1] {
                let c = Scalar::from_bigints(n * BigInt::from(s), d.clone());
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d)
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_ints(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), Scalar::one());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_err());
        assert!(s.det().is_zero());
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn char_poly_matches_det() {
        let m = Matrix::from_ints(&[&[2, 1, 0, 3], &[1, -1, 4, 0], &[0, 5, 2, 1], &[7, 0, 1, 1]]);
        let cp = m.char_poly();
        assert_eq!(cp.degree(), 4);
        for x in [0i64, 1, -2, 5] {
            let x = Scalar::from_int(x);
            let direct = Matrix::scalar(4, &x).sub(&m).det();
            assert_eq!(cp.eval(&x), direct);
        }
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x - 2/3)^2 (x + 5) (x^2 + 1)
        let lin = |r: Scalar| Poly::from_coeffs(vec![-r, Scalar::one()]);
        let p = lin(q(2, 3))
            .mul(&lin(q(2, 3)))
            .mul(&lin(q(-5, 1)))
            .mul(&Poly::from_coeffs(vec![
                Scalar::one(),
                Scalar::zero(),
                Scalar::one(),
            ]));
        let (roots, rest) = p.rational_roots(&[]);
        assert_eq!(roots, vec![(q(-5, 1), 1), (q(2, 3), 2)]);
        assert_eq!(rest.degree(), 2);
        let (roots2, _) = p.rational_roots(&[q(-5, 1)]);
        assert_eq!(roots2, roots);
    }

    #[test]
    fn echelon_coords() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![q(1, 1), q(2, 1), q(0, 1)]));
        assert!(e.insert(vec![q(0, 1), q(1, 1), q(1, 1)]));
        assert!(!e.insert(vec![q(1, 1), q(3, 1), q(1, 1)]));
        assert!(e.contains(&[q(2, 1), q(5, 1), q(1, 1)]));
        assert!(!e.contains(&[q(0, 1), q(0, 1), q(1, 1)]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn solve_left_recovers_restriction() {
        let b = Matrix::from_ints(&[&[1, 0], &[1, 1], &[0, 2]]);
        let a = Matrix::from_ints(&[&[3, 1], &[0, -1]]);
        let c = b.mul(&a);
        assert_eq!(b.solve_left(&c).unwrap(), a);
        let bad = Matrix::from_ints(&[&[1, 0], &[0, 0], &[0, 0]]);
        assert!(b
            .solve_left(&bad.hcat(&Matrix::from_ints(&[&[0], &[1], &[0]])))
            .is_err());
    }
}
