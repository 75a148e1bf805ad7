//! The finite Weyl group of type B_n as signed permutations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::scalars::Scalar;

/// Largest rank for which the whole group is enumerated.
pub const ENUMERATION_BOUND: usize = 5;

/// Signed permutation in window form: `window[k] = w(k+1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylElem {
    window: Vec<i32>,
}

impl fmt::Debug for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(i32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl WeylElem {
    #[must_use]
    pub fn identity(n: usize) -> Self {
        WeylElem {
            window: (1..=n as i32).collect(),
        }
    }

    pub fn from_window(window: Vec<i32>) -> Result<Self> {
        let n = window.len();
        let mut seen = vec![false; n + 1];
        for &x in &window {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(HeckeError::Domain(format!(
                    "not a signed permutation: {window:?}"
                )));
            }
            seen[a] = true;
        }
        Ok(WeylElem { window })
    }

    /// Simple reflection `s_i` in rank `n`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(HeckeError::OutOfRange(format!(
                "generator s_{i} in rank {n}"
            )));
        }
        let mut w = Self::identity(n);
        w.mul_simple_right(i);
        Ok(w)
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.window.len()
    }

    #[must_use]
    pub fn window(&self) -> &[i32] {
        &self.window
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.window
            .iter()
            .enumerate()
            .all(|(k, &x)| x == k as i32 + 1)
    }

    /// Image of a signed index `i` in ±1..±n.
    #[must_use]
    pub fn apply(&self, i: i32) -> i32 {
        let v = self.window[i.unsigned_abs() as usize - 1];
        if i < 0 {
            -v
        } else {
            v
        }
    }

    /// Composition `self ∘ other`.
    #[must_use]
    pub fn mul(&self, other: &WeylElem) -> WeylElem {
        assert_eq!(self.rank(), other.rank());
        WeylElem {
            window: other.window.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    #[must_use]
    pub fn inverse(&self) -> WeylElem {
        let mut inv = vec![0; self.rank()];
        for (k, &x) in self.window.iter().enumerate() {
            let pos = x.unsigned_abs() as usize - 1;
            inv[pos] = if x < 0 { -(k as i32 + 1) } else { k as i32 + 1 };
        }
        WeylElem { window: inv }
    }

    /// `self <- self * s_i`.
    pub fn mul_simple_right(&mut self, i: usize) {
        if i == 0 {
            self.window[0] = -self.window[0];
        } else {
            self.window.swap(i - 1, i);
        }
    }

    /// `self <- s_i * self`.
    pub fn mul_simple_left(&mut self, i: usize) {
        for x in &mut self.window {
            let a = x.abs();
            if i == 0 {
                if a == 1 {
                    *x = -*x;
                }
            } else if a == i as i32 {
                *x = x.signum() * (i as i32 + 1);
            } else if a == i as i32 + 1 {
                *x = x.signum() * i as i32;
            }
        }
    }

    #[must_use]
    pub fn times_simple(&self, i: usize) -> WeylElem {
        let mut w = self.clone();
        w.mul_simple_right(i);
        w
    }

    #[must_use]
    pub fn simple_times(&self, i: usize) -> WeylElem {
        let mut w = self.clone();
        w.mul_simple_left(i);
        w
    }

    /// Coxeter length.
    #[must_use]
    pub fn length(&self) -> usize {
        let w = &self.window;
        let n = w.len();
        let mut l = 0;
        for i in 0..n {
            if w[i] < 0 {
                l += 1;
            }
            for j in i + 1..n {
                if w[i] > w[j] {
                    l += 1;
                }
                if w[i] + w[j] < 0 {
                    l += 1;
                }
            }
        }
        l
    }

    /// `l(w s_i) < l(w)`.
    #[must_use]
    pub fn has_right_descent(&self, i: usize) -> bool {
        if i == 0 {
            self.window[0] < 0
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    /// `l(s_i w) < l(w)`.
    #[must_use]
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    /// Lexicographically smallest reduced word.
    #[must_use]
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        let n = self.rank();
        loop {
            let inv = w.inverse();
            let Some(i) = (0..n).find(|&i| inv.has_right_descent(i)) else {
                break;
            };
            word.push(i);
            w.mul_simple_left(i);
        }
        word
    }

    /// Action on exponent vectors of length `n+1` (index 0 is `X_0`).
    ///
    /// `s_i` swaps `c_i, c_{i+1}`; `s_0` sends `(c_0, c_1)` to `(c_0, c_0 - c_1)`.
    #[must_use]
    pub fn act_on_weight(&self, c: &[i32]) -> Vec<i32> {
        assert_eq!(c.len(), self.rank() + 1, "weight rank mismatch");
        let mut out = vec![0; c.len()];
        out[0] = c[0];
        for (k, &x) in self.window.iter().enumerate() {
            let t = x.unsigned_abs() as usize;
            out[t] = if x < 0 { c[0] - c[k + 1] } else { c[k + 1] };
        }
        out
    }

    /// Action on eigenvalue tuples `(a_0, a_1, ..., a_n)`: `(w·a)_j = a^{w^{-1} e_j}`.
    #[must_use]
    pub fn act_on_tuple(&self, a: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(a.len(), self.rank() + 1);
        let inv = self.inverse();
        let n1 = a.len();
        (0..n1)
            .map(|j| {
                let mut e = vec![0; n1];
                e[j] = 1;
                let c = inv.act_on_weight(&e);
                let mut v = Scalar::one();
                for (x, &k) in a.iter().zip(&c) {
                    if k != 0 {
                        v *= x.pow(k);
                    }
                }
                v
            })
            .collect()
    }

    /// Action on tuples `(a_1, ..., a_n)` of the lattice without `X_0`.
    #[must_use]
    pub fn act_on_reduced_tuple(&self, a: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(a.len(), self.rank());
        let mut out = vec![Scalar::zero(); a.len()];
        for (k, &x) in self.window.iter().enumerate() {
            let t = x.unsigned_abs() as usize - 1;
            out[t] = if x < 0 { a[k].inv() } else { a[k].clone() };
        }
        out
    }

    /// Embed into rank `m >= n`, fixing the extra positions, shifted by `offset`.
    #[must_use]
    pub fn embed(&self, m: usize, offset: usize) -> WeylElem {
        assert!(offset + self.rank() <= m);
        let mut w = WeylElem::identity(m);
        for (k, &x) in self.window.iter().enumerate() {
            w.window[offset + k] = x.signum() * (x.abs() + offset as i32);
        }
        w
    }

    /// `(length, reduced word)` ordering key.
    #[must_use]
    pub fn order_key(&self) -> (usize, Vec<usize>) {
        let w = self.reduced_word();
        (w.len(), w)
    }
}

impl FromStr for WeylElem {
    type Err = HeckeError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| HeckeError::Parse(format!("expected [..] window, got {s:?}")))?;
        let mut window = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: i32 = part
                .replace('\u{2212}', "-")
                .parse()
                .map_err(|_| HeckeError::Parse(format!("bad entry {part:?}")))?;
            window.push(v);
        }
        WeylElem::from_window(window)
    }
}

/// Product of simple reflections, multiplied successively on the right.
pub fn word_to_elem(n: usize, word: &[usize]) -> Result<WeylElem> {
    let mut w = WeylElem::identity(n);
    for &i in word {
        if i >= n {
            return Err(HeckeError::OutOfRange(format!(
                "generator s_{i} in rank {n}"
            )));
        }
        w.mul_simple_right(i);
    }
    Ok(w)
}

/// Element of the group together with its canonical reduced word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumerated {
    pub elem: WeylElem,
    pub word: Vec<usize>,
}

type EnumCache = Mutex<HashMap<usize, Arc<Vec<Enumerated>>>>;

fn enum_cache() -> &'static EnumCache {
    static CACHE: OnceLock<EnumCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All `2^n n!` elements ordered by (length, reduced word).
pub fn enumerate_group(n: usize) -> Result<Arc<Vec<Enumerated>>> {
    if n > ENUMERATION_BOUND {
        return Err(HeckeError::OutOfRange(format!(
            "rank {n} exceeds enumeration bound {ENUMERATION_BOUND}"
        )));
    }
    if let Some(v) = enum_cache().lock().unwrap().get(&n) {
        return Ok(Arc::clone(v));
    }
    let mut elems = Vec::new();
    let mut perm: Vec<i32> = (1..=n as i32).collect();
    permutations(&mut perm, 0, &mut |p| {
        for signs in 0u32..(1 << n) {
            let window = p
                .iter()
                .enumerate()
                .map(|(k, &x)| if signs >> k & 1 == 1 { -x } else { x })
                .collect();
            let elem = WeylElem { window };
            let word = elem.reduced_word();
            elems.push(Enumerated { elem, word });
        }
    });
    elems.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    let arc = Arc::new(elems);
    enum_cache().lock().unwrap().insert(n, Arc::clone(&arc));
    Ok(arc)
}

fn permutations(v: &mut Vec<i32>, k: usize, f: &mut impl FnMut(&[i32])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Composition `(m_0; m_1, ..., m_l)` describing a standard parabolic subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParabolicShape {
    pub m0: usize,
    pub parts: Vec<usize>,
}

impl ParabolicShape {
    pub fn new(m0: usize, parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(HeckeError::Domain(
                "parts of a shape must be positive".into(),
            ));
        }
        Ok(ParabolicShape { m0, parts })
    }

    /// The whole group `(n)`.
    #[must_use]
    pub fn full(n: usize) -> Self {
        ParabolicShape {
            m0: n,
            parts: vec![],
        }
    }

    /// The trivial subgroup `(0; 1, ..., 1)`.
    #[must_use]
    pub fn trivial(n: usize) -> Self {
        ParabolicShape {
            m0: 0,
            parts: vec![1; n],
        }
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.m0 + self.parts.iter().sum::<usize>()
    }

    /// Generator subset `I ⊆ {0, ..., n-1}`.
    #[must_use]
    pub fn generators(&self) -> BTreeSet<usize> {
        let mut gens: BTreeSet<usize> = (0..self.m0).collect();
        let mut start = self.m0 + 1;
        for &m in &self.parts {
            gens.extend(start..start + m - 1);
            start += m;
        }
        gens
    }
}

impl fmt::Display for ParabolicShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        if parts.is_empty() {
            write!(f, "({})", self.m0)
        } else {
            write!(f, "({};{})", self.m0, parts.join(","))
        }
    }
}

impl FromStr for ParabolicShape {
    type Err = HeckeError;

    /// Accepts `(m0;m1,...)` or `(m0,m1,...)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| HeckeError::Parse(format!("expected (..) shape, got {s:?}")))?;
        let nums: Vec<usize> = inner
            .split([',', ';'])
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| HeckeError::Parse(format!("bad shape entry {p:?}")))
            })
            .collect::<Result<_>>()?;
        let (&m0, rest) = nums
            .split_first()
            .ok_or_else(|| HeckeError::Parse("empty shape".into()))?;
        ParabolicShape::new(m0, rest.to_vec())
    }
}

#[must_use]
pub fn is_in_parabolic(w: &WeylElem, gens: &BTreeSet<usize>) -> bool {
    w.reduced_word().iter().all(|i| gens.contains(i))
}

/// Minimal length representatives of the left cosets `w W_I`.
pub fn min_coset_reps(n: usize, gens: &BTreeSet<usize>) -> Result<Vec<WeylElem>> {
    Ok(enumerate_group(n)?
        .iter()
        .filter(|e| gens.iter().all(|&j| !e.elem.has_right_descent(j)))
        .map(|e| e.elem.clone())
        .collect())
}

/// Minimal length representatives of the right cosets `W_I w`.
pub fn min_right_coset_reps(n: usize, gens: &BTreeSet<usize>) -> Result<Vec<WeylElem>> {
    Ok(enumerate_group(n)?
        .iter()
        .filter(|e| gens.iter().all(|&j| !e.elem.has_left_descent(j)))
        .map(|e| e.elem.clone())
        .collect())
}

/// Minimal length `(W_I, W_J)` double coset representatives.
pub fn double_coset_reps(
    n: usize,
    i_gens: &BTreeSet<usize>,
    j_gens: &BTreeSet<usize>,
) -> Result<Vec<WeylElem>> {
    Ok(enumerate_group(n)?
        .iter()
        .filter(|e| {
            i_gens.iter().all(|&i| !e.elem.has_left_descent(i))
                && j_gens.iter().all(|&j| !e.elem.has_right_descent(j))
        })
        .map(|e| e.elem.clone())
        .collect())
}

/// Split `w = d u` with `d` minimal in `w W_I` and `u ∈ W_I`; returns `(d, word of u)`.
#[must_use]
pub fn split_coset(w: &WeylElem, gens: &BTreeSet<usize>) -> (WeylElem, Vec<usize>) {
    let mut d = w.clone();
    let mut u_rev = Vec::new();
    while let Some(&j) = gens.iter().find(|&&j| d.has_right_descent(j)) {
        d.mul_simple_right(j);
        u_rev.push(j);
    }
    u_rev.reverse();
    (d, u_rev)
}

/// Longest element of `W_I`.
pub fn longest_in_parabolic(n: usize, gens: &BTreeSet<usize>) -> Result<WeylElem> {
    Ok(enumerate_group(n)?
        .iter()
        .filter(|e| e.word.iter().all(|i| gens.contains(i)))
        .max_by_key(|e| e.word.len())
        .map(|e| e.elem.clone())
        .expect("identity always present"))
}

/// Longest element `d` of `D_{I,I}` together with `w_0` and `w_{0,I}`.
#[derive(Clone, Debug)]
pub struct LongestRep {
    pub d: WeylElem,
    pub w0: WeylElem,
    pub w0_i: WeylElem,
}

pub fn longest_double_rep(n: usize, gens: &BTreeSet<usize>) -> Result<LongestRep> {
    let reps = double_coset_reps(n, gens, gens)?;
    let d = reps
        .iter()
        .max_by_key(|w| w.length())
        .cloned()
        .expect("identity always present");
    let full: BTreeSet<usize> = (0..n).collect();
    Ok(LongestRep {
        d,
        w0: longest_in_parabolic(n, &full)?,
        w0_i: longest_in_parabolic(n, gens)?,
    })
}
