//! Multisegments on a formal line `λ^base q^{2i}` and their crystal combinatorics.
//!
//! Everything here is integer exponents; scalars only appear in [`Segment::values`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::scalars::Scalar;

/// `(λ^base q^{2 lo}, ..., λ^base q^{2 hi})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    #[serde(default)]
    pub base: i32,
    pub lo: i32,
    pub hi: i32,
}

impl Segment {
    pub fn new(base: i32, lo: i32, hi: i32) -> Result<Self> {
        if lo > hi {
            return Err(HeckeError::Domain(format!(
                "segment ({lo}..{hi}) has lo > hi"
            )));
        }
        Ok(Segment { base, lo, hi })
    }

    #[must_use]
    pub fn point(base: i32, e: i32) -> Self {
        Segment { base, lo: e, hi: e }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Image under `x ↦ x^{-1}`, read backwards.
    #[must_use]
    pub fn bar(&self) -> Self {
        Segment {
            base: -self.base,
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// The eigenvalues `λ^base q^{2i}` for `i = lo..=hi`.
    #[must_use]
    pub fn values(&self, lambda: &Scalar, q: &Scalar) -> Vec<Scalar> {
        let q2 = q * q;
        let lb = lambda.pow(self.base);
        (self.lo..=self.hi).map(|i| &lb * &q2.pow(i)).collect()
    }

    fn right_key(&self) -> (i32, i32, i32) {
        (self.base, self.lo, -self.hi)
    }

    fn left_key(&self) -> (i32, i32, i32) {
        (self.base, self.hi, -self.lo)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}..{})", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Right,
    Left,
}

impl Order {
    /// Compare two segments; `Greater` means bigger in this order.
    #[must_use]
    pub fn cmp(self, a: &Segment, b: &Segment) -> Ordering {
        match self {
            Order::Right => a.right_key().cmp(&b.right_key()),
            Order::Left => a.left_key().cmp(&b.left_key()),
        }
    }
}

/// A point `λ^base q^{2 exp}` of a formal line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub base: i32,
    pub exp: i32,
}

impl Point {
    #[must_use]
    pub fn new(base: i32, exp: i32) -> Self {
        Point { base, exp }
    }

    #[must_use]
    pub fn inv(self) -> Self {
        Point {
            base: -self.base,
            exp: -self.exp,
        }
    }

    #[must_use]
    pub fn value(self, lambda: &Scalar, q: &Scalar) -> Scalar {
        &lambda.pow(self.base) * &(q * q).pow(self.exp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrystalOp {
    E,
    F,
    EStar,
    FStar,
}

impl FromStr for CrystalOp {
    type Err = HeckeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(CrystalOp::E),
            "f" => Ok(CrystalOp::F),
            "e*" | "estar" => Ok(CrystalOp::EStar),
            "f*" | "fstar" => Ok(CrystalOp::FStar),
            _ => Err(HeckeError::Parse(format!("unknown crystal operator {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Multisegment {
    segments: Vec<Segment>,
    #[serde(default)]
    order: Option<Order>,
}

/// Multisegments are multisets: equality ignores listing order.
impl PartialEq for Multisegment {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for Multisegment {}

impl std::hash::Hash for Multisegment {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.sorted().hash(h);
    }
}

impl PartialOrd for Multisegment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Multisegment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sorted().cmp(&other.sorted())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Plus,
    Minus,
}

/// Outcome of cancelling `-+` pairs: unmatched `+` positions, then unmatched `-` positions.
struct Bracket {
    plus: Vec<usize>,
    minus: Vec<usize>,
}

fn bracket(signs: impl Iterator<Item = (usize, Sign)>) -> Bracket {
    let mut plus = Vec::new();
    let mut minus: Vec<usize> = Vec::new();
    for (i, s) in signs {
        match s {
            Sign::Minus => minus.push(i),
            Sign::Plus => {
                if minus.pop().is_none() {
                    plus.push(i);
                }
            }
        }
    }
    Bracket { plus, minus }
}

impl Multisegment {
    #[must_use]
    pub fn new(segments: Vec<Segment>) -> Self {
        Multisegment {
            segments,
            order: None,
        }
    }

    #[must_use]
    pub fn empty() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    #[must_use]
    pub fn order(&self) -> Option<Order> {
        self.order
    }

    /// Total number of entries, i.e. the rank of the algebra it labels.
    #[must_use]
    pub fn len(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    fn sorted(&self) -> Vec<Segment> {
        let mut v = self.segments.clone();
        v.sort();
        v
    }

    /// Stable sort, smallest first.
    #[must_use]
    pub fn normalize(&self, order: Order) -> Multisegment {
        let mut segments = self.segments.clone();
        segments.sort_by(|a, b| order.cmp(a, b));
        Multisegment {
            segments,
            order: Some(order),
        }
    }

    /// Segments largest first in the right order: the listing whose induced
    /// module has the corresponding simple cosocle.
    #[must_use]
    pub fn standard_listing(&self) -> Vec<Segment> {
        let mut v = self.normalize(Order::Right).segments;
        v.reverse();
        v
    }

    /// Reflection through `x ↦ x^{-1}`.
    #[must_use]
    pub fn bar(&self) -> Multisegment {
        Multisegment::new(self.segments.iter().rev().map(Segment::bar).collect())
    }

    /// Signs in decreasing right order: `+` for segments ending at `a q^{-2}`, `-` for those ending at `a`.
    fn right_signs(&self, a: Point) -> (Vec<Segment>, Bracket) {
        let list = self.standard_listing();
        let b = bracket(list.iter().enumerate().filter_map(|(i, s)| {
            if s.base != a.base {
                None
            } else if s.hi == a.exp {
                Some((i, Sign::Minus))
            } else if s.hi == a.exp - 1 {
                Some((i, Sign::Plus))
            } else {
                None
            }
        }));
        (list, b)
    }

    /// Signs in increasing left order: `+` for segments starting at `a q^2`, `-` for those starting at `a`.
    fn left_signs(&self, a: Point) -> (Vec<Segment>, Bracket) {
        let list = self.normalize(Order::Left).segments;
        let b = bracket(list.iter().enumerate().filter_map(|(i, s)| {
            if s.base != a.base {
                None
            } else if s.lo == a.exp {
                Some((i, Sign::Minus))
            } else if s.lo == a.exp + 1 {
                Some((i, Sign::Plus))
            } else {
                None
            }
        }));
        (list, b)
    }

    #[must_use]
    pub fn eps(&self, a: Point) -> usize {
        self.right_signs(a).1.minus.len()
    }

    #[must_use]
    pub fn eps_star(&self, a: Point) -> usize {
        self.left_signs(a).1.minus.len()
    }

    /// `ẽ_a`: shorten the segment of the leftmost uncancelled `-`; `None` when `ε_a = 0`.
    #[must_use]
    pub fn e(&self, a: Point) -> Option<Multisegment> {
        let (mut list, b) = self.right_signs(a);
        let &i = b.minus.first()?;
        if list[i].lo == list[i].hi {
            list.remove(i);
        } else {
            list[i].hi -= 1;
        }
        Some(Multisegment::new(list).normalize(Order::Right))
    }

    /// `f̃_a`: extend the segment of the rightmost uncancelled `+`, or add `(a)`.
    #[must_use]
    pub fn f(&self, a: Point) -> Multisegment {
        let (mut list, b) = self.right_signs(a);
        match b.plus.last() {
            Some(&i) => list[i].hi += 1,
            None => list.push(Segment::point(a.base, a.exp)),
        }
        Multisegment::new(list).normalize(Order::Right)
    }

    #[must_use]
    pub fn e_star(&self, a: Point) -> Option<Multisegment> {
        let (mut list, b) = self.left_signs(a);
        let &i = b.minus.first()?;
        if list[i].lo == list[i].hi {
            list.remove(i);
        } else {
            list[i].lo += 1;
        }
        Some(Multisegment::new(list).normalize(Order::Right))
    }

    #[must_use]
    pub fn f_star(&self, a: Point) -> Multisegment {
        let (mut list, b) = self.left_signs(a);
        match b.plus.last() {
            Some(&i) => list[i].lo -= 1,
            None => list.push(Segment::point(a.base, a.exp)),
        }
        Multisegment::new(list).normalize(Order::Right)
    }

    /// One of the four operators; `None` is the zero module.
    #[must_use]
    pub fn apply(&self, a: Point, op: CrystalOp) -> Option<Multisegment> {
        match op {
            CrystalOp::E => self.e(a),
            CrystalOp::F => Some(self.f(a)),
            CrystalOp::EStar => self.e_star(a),
            CrystalOp::FStar => Some(self.f_star(a)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| HeckeError::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Multisegment =
            serde_json::from_str(s).map_err(|e| HeckeError::Parse(e.to_string()))?;
        for seg in &m.segments {
            Segment::new(seg.base, seg.lo, seg.hi)?;
        }
        Ok(match m.order {
            Some(o) => m.normalize(o),
            None => m,
        })
    }
}

/// All multisegments on one line with entries in `lo..=hi` and total length `1..=max_len`,
/// plus the empty one; each listed in increasing right order.
#[must_use]
pub fn enumerate(base: i32, lo: i32, hi: i32, max_len: usize) -> Vec<Multisegment> {
    let mut segs = Vec::new();
    for a in lo..=hi {
        for b in a..=hi {
            segs.push(Segment { base, lo: a, hi: b });
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        segs: &[Segment],
        start: usize,
        budget: usize,
        cur: &mut Vec<Segment>,
        out: &mut Vec<Multisegment>,
    ) {
        out.push(Multisegment::new(cur.clone()).normalize(Order::Right));
        for i in start..segs.len() {
            let l = segs[i].len();
            if l <= budget {
                cur.push(segs[i]);
                rec(segs, i, budget - l, cur, out);
                cur.pop();
            }
        }
    }
    rec(&segs, 0, max_len, &mut cur, &mut out);
    out.sort();
    out
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

fn parse_int(s: &str) -> Result<i32> {
    let t = s.trim().replace('\u{2212}', "-");
    t.parse::<i32>()
        .map_err(|_| HeckeError::Parse(format!("bad exponent {s:?}")))
}

/// `[(lo..hi),(e),...]`; `−` and `-` are both accepted; base 0.
impl FromStr for Multisegment {
    type Err = HeckeError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| HeckeError::Parse("multisegment must be enclosed in [ ]".into()))?
            .trim();
        let mut segments = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| HeckeError::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| HeckeError::Parse("unclosed segment".into()))?;
            let seg = &body[..close];
            let (lo, hi) = match seg.split_once("..") {
                Some((a, b)) => (parse_int(a)?, parse_int(b)?),
                None => {
                    let e = parse_int(seg)?;
                    (e, e)
                }
            };
            segments.push(Segment::new(0, lo, hi)?);
            rest = body[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(HeckeError::Parse("trailing comma".into()));
                }
            } else if !rest.is_empty() {
                return Err(HeckeError::Parse(format!("expected ',' at {rest:?}")));
            }
        }
        Ok(Multisegment::new(segments))
    }
}
