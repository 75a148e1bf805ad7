//! Type A multisegments as matrix modules, the induction dictionary into `H_n^R`
//! on a generic line, and crystal graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{AlgebraDesc, Lattice};
use crate::characters::{character, FormalCharacter};
use crate::error::{HeckeError, Result};
use crate::functors::{
    crystal_e, crystal_e_star, crystal_f, crystal_f_in, crystal_f_star, eps, eps_star, induce,
    seed, CrystalResult, Family,
};
use crate::linalg::Matrix;
use crate::modrep::{cosocle_summands, is_irreducible, is_isomorphic, outer_tensor, ModuleRep};
use crate::multiseg::{Multisegment, Point, Segment};
use crate::scalars::Scalar;

/// The line `I_λ = {λ q^{2i}, λ^{-1} q^{2i}}`, cut to `|i| <= window`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaLine {
    pub lambda: Scalar,
    pub q: Scalar,
    pub p: Scalar,
    pub window: u32,
}

impl Default for LambdaLine {
    fn default() -> Self {
        LambdaLine {
            lambda: Scalar::from_int(5),
            q: Scalar::from_int(3),
            p: Scalar::from_int(2),
            window: 2,
        }
    }
}

impl LambdaLine {
    #[must_use]
    pub fn value(&self, a: Point) -> Scalar {
        a.value(&self.lambda, &self.q)
    }

    /// `λ^{-1} q^{2i}` then `λ q^{2i}`, `i` ascending.
    #[must_use]
    pub fn window_points(&self) -> Vec<Point> {
        let w = self.window as i32;
        [-1, 1]
            .into_iter()
            .flat_map(|b| (-w..=w).map(move |e| Point::new(b, e)))
            .collect()
    }

    #[must_use]
    pub fn window_values(&self) -> Vec<Scalar> {
        self.window_points()
            .into_iter()
            .map(|a| self.value(a))
            .collect()
    }

    /// Which side of the line a scalar sits on, if any (inside the window).
    #[must_use]
    pub fn locate(&self, a: &Scalar) -> Option<Point> {
        self.window_points()
            .into_iter()
            .find(|&pt| &self.value(pt) == a)
    }

    /// `p^2, ±q, ±1` avoid the line and the two halves are disjoint, within the window.
    #[must_use]
    pub fn genericity_check(&self) -> bool {
        self.genericity_failure().is_none()
    }

    #[must_use]
    pub fn genericity_failure(&self) -> Option<String> {
        if self.lambda.is_zero() {
            return Some("lambda = 0".into());
        }
        let one = Scalar::from_int(1);
        let bad = [
            (&self.p * &self.p, "p^2"),
            (self.q.clone(), "q"),
            (-&self.q, "-q"),
            (one.clone(), "1"),
            (-&one, "-1"),
        ];
        let w = self.window as i32;
        for pt in self.window_points() {
            let v = self.value(pt);
            if let Some((_, name)) = bad.iter().find(|(b, _)| b == &v) {
                return Some(format!("{name} = λ^{} q^{}", pt.base, 2 * pt.exp));
            }
        }
        for i in -w..=w {
            for j in -w..=w {
                if self.value(Point::new(1, i)) == self.value(Point::new(-1, j)) {
                    return Some(format!("λ q^{} = λ^-1 q^{}", 2 * i, 2 * j));
                }
            }
        }
        None
    }

    fn require_generic(&self) -> Result<()> {
        match self.genericity_failure() {
            Some(why) => Err(HeckeError::Domain(format!("line is not generic: {why}"))),
            None => Ok(()),
        }
    }
}

/// One-dimensional type A module on which every `T_j` acts as `q`.
pub fn segment_module(seg: &Segment, line: &LambdaLine) -> Result<ModuleRep> {
    let vals = seg.values(&line.lambda, &line.q);
    let k = vals.len();
    let desc = AlgebraDesc::a(k, line.p.clone(), line.q.clone())?;
    let t = (1..k).map(|j| (j, Matrix::scalar(1, &line.q))).collect();
    let x = vals
        .iter()
        .enumerate()
        .map(|(l, v)| (l + 1, Matrix::scalar(1, v)))
        .collect();
    Ok(ModuleRep::new(desc, t, x)?.with_hints(vals))
}

fn trivial_a(line: &LambdaLine) -> Result<ModuleRep> {
    ModuleRep::one_dim(
        AlgebraDesc::new(
            Lattice::Reduced,
            0,
            line.p.clone(),
            line.q.clone(),
            BTreeSet::new(),
        )?,
        &[],
    )
}

/// `ind (L_{Γ_1} ⊠ ... ⊠ L_{Γ_m})` with the segments largest first in the right order.
pub fn standard_module(gamma: &Multisegment, line: &LambdaLine) -> Result<ModuleRep> {
    let mut acc = trivial_a(line)?;
    for seg in gamma.standard_listing() {
        acc = outer_tensor(&acc, &segment_module(&seg, line)?)?;
    }
    induce(
        &acc,
        &AlgebraDesc::a(gamma.len(), line.p.clone(), line.q.clone())?,
    )
}

/// `N_Γ`, the simple cosocle of the standard module.
pub fn n_module(gamma: &Multisegment, line: &LambdaLine) -> Result<ModuleRep> {
    if gamma.is_empty() {
        return trivial_a(line);
    }
    let mut parts = cosocle_summands(&standard_module(gamma, line)?)?;
    if parts.len() != 1 {
        return Err(HeckeError::Domain(format!(
            "standard module of {gamma} has {} cosocle summands",
            parts.len()
        )));
    }
    Ok(parts.remove(0))
}

/// `M_Γ = ind_{H_n^A}^{H_n^R} N_Γ` for `Γ` on the `λ^{-1}` half; certified irreducible.
pub fn dict_a_to_b(gamma: &Multisegment, line: &LambdaLine) -> Result<ModuleRep> {
    line.require_generic()?;
    if let Some(s) = gamma.segments().iter().find(|s| s.base != -1) {
        return Err(HeckeError::Domain(format!(
            "segment {s} is not on the λ^-1 half"
        )));
    }
    let n = n_module(gamma, line)?;
    let m = induce(
        &n,
        &AlgebraDesc::r(gamma.len(), line.p.clone(), line.q.clone())?,
    )?;
    if !is_irreducible(&m)? {
        return Err(HeckeError::Domain(format!(
            "induced module of {gamma} is reducible"
        )));
    }
    Ok(m)
}

/// The multisegment predicted for `f̃_a M_Γ`: `f̃_a Γ` on the `λ^{-1}` half, `f̃*_{a^{-1}} Γ` on the `λ` half.
#[must_use]
pub fn predicted_f(gamma: &Multisegment, a: Point) -> Multisegment {
    if a.base == -1 {
        gamma.f(a)
    } else {
        gamma.f_star(a.inv())
    }
}

#[must_use]
pub fn predicted_e(gamma: &Multisegment, a: Point) -> Option<Multisegment> {
    if a.base == -1 {
        gamma.e(a)
    } else {
        gamma.e_star(a.inv())
    }
}

#[must_use]
pub fn predicted_eps(gamma: &Multisegment, a: Point) -> usize {
    if a.base == -1 {
        gamma.eps(a)
    } else {
        gamma.eps_star(a.inv())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub gamma: String,
    pub a: Scalar,
    pub predicted: String,
    /// `ε_a(M_Γ)` and the value read off `Γ`.
    pub eps: (usize, usize),
    /// `ε_a(N_Γ) + ε*_{a^{-1}}(N_Γ)`, an upper bound for `ε_a(M_Γ)`.
    pub eps_bound: usize,
    pub f_tag: String,
    pub f_matches: bool,
    pub e_matches: bool,
}

impl EdgeReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.eps.0 == self.eps.1
            && self.eps.0 <= self.eps_bound
            && self.f_tag == "Irreducible"
            && self.f_matches
            && self.e_matches
    }
}

/// Computes `f̃_a M_Γ` and `ẽ_a M_Γ` by linear algebra and compares them with the
/// modules of the predicted multisegments.
pub fn crystal_edge_check(gamma: &Multisegment, a: Point, line: &LambdaLine) -> Result<EdgeReport> {
    Dictionary::new(line.clone()).edge_check(gamma, a)
}

/// The dictionary on one line, remembering each `M_Γ` it has built.
#[derive(Clone, Debug)]
pub struct Dictionary {
    line: LambdaLine,
    built: HashMap<Vec<Segment>, ModuleRep>,
}

impl Dictionary {
    #[must_use]
    pub fn new(line: LambdaLine) -> Self {
        Dictionary {
            line,
            built: HashMap::new(),
        }
    }

    #[must_use]
    pub fn line(&self) -> &LambdaLine {
        &self.line
    }

    /// `M_Γ`, as [`dict_a_to_b`].
    pub fn module(&mut self, gamma: &Multisegment) -> Result<ModuleRep> {
        let mut key = gamma.segments().to_vec();
        key.sort_unstable();
        if let Some(m) = self.built.get(&key) {
            return Ok(m.clone());
        }
        let m = dict_a_to_b(gamma, &self.line)?;
        self.built.insert(key, m.clone());
        Ok(m)
    }

    pub fn edge_check(&mut self, gamma: &Multisegment, a: Point) -> Result<EdgeReport> {
        let av = self.line.value(a);
        let m = self.module(gamma)?;
        let n = n_module(gamma, &self.line)?;
        let eps_m = eps(&m, &av)?;
        let eps_bound = eps(&n, &av)? + eps_star(&n, &av.inv())?;
        let pred = predicted_f(gamma, a);
        let res = crystal_f_in(&m, &av, Family::R)?;
        let f_matches = match res.irreducible() {
            Some(fm) => is_isomorphic(fm, &self.module(&pred)?)?,
            None => false,
        };
        let e = crystal_e(&m, &av)?;
        let e_matches = match predicted_e(gamma, a) {
            None => e.dim() == 0,
            Some(g) => e.dim() > 0 && is_isomorphic(&e, &self.module(&g)?)?,
        };
        Ok(EdgeReport {
            gamma: gamma.to_string(),
            a: av,
            predicted: pred.to_string(),
            eps: (eps_m, predicted_eps(gamma, a)),
            eps_bound,
            f_tag: res.tag().to_string(),
            f_matches,
            e_matches,
        })
    }
}

/// Comparison of the combinatorial operators with the modules `N_Γ` (type A, line `λ`).
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub gamma: String,
    pub a: i32,
    pub eps: (usize, usize),
    pub eps_star: (usize, usize),
    pub e: bool,
    pub e_star: bool,
    pub f: bool,
    pub f_star: bool,
}

impl OracleReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.eps.0 == self.eps.1
            && self.eps_star.0 == self.eps_star.1
            && self.e
            && self.e_star
            && self.f
            && self.f_star
    }
}

fn same_or_zero(
    computed: &ModuleRep,
    predicted: Option<Multisegment>,
    line: &LambdaLine,
) -> Result<bool> {
    match predicted {
        None => Ok(computed.dim() == 0),
        Some(g) => Ok(computed.dim() > 0 && is_isomorphic(computed, &n_module(&g, line)?)?),
    }
}

fn f_matches(res: &CrystalResult, predicted: &Multisegment, line: &LambdaLine) -> Result<bool> {
    match res.irreducible() {
        Some(m) => is_isomorphic(m, &n_module(predicted, line)?),
        None => Ok(false),
    }
}

/// Runs all six operators on `N_Γ` at `a = λ q^{2 exp}`, with `Γ` moved onto the `λ` line.
/// `f̃`, `f̃*` are only computed when `with_f` is set (they raise the rank).
pub fn multiseg_oracle(
    gamma: &Multisegment,
    exp: i32,
    line: &LambdaLine,
    with_f: bool,
) -> Result<OracleReport> {
    let gamma = &Multisegment::new(
        gamma
            .segments()
            .iter()
            .map(|s| Segment { base: 1, ..*s })
            .collect(),
    );
    let a = Point::new(1, exp);
    let av = line.value(a);
    let n = n_module(gamma, line)?;
    let (e, e_star) = if gamma.is_empty() {
        (gamma.e(a).is_none(), gamma.e_star(a).is_none())
    } else {
        (
            same_or_zero(&crystal_e(&n, &av)?, gamma.e(a), line)?,
            same_or_zero(&crystal_e_star(&n, &av)?, gamma.e_star(a), line)?,
        )
    };
    let (f, f_star) = if with_f {
        (
            f_matches(&crystal_f(&n, &av)?, &gamma.f(a), line)?,
            f_matches(&crystal_f_star(&n, &av)?, &gamma.f_star(a), line)?,
        )
    } else {
        (true, true)
    };
    Ok(OracleReport {
        gamma: gamma.to_string(),
        a: exp,
        eps: (eps(&n, &av)?, gamma.eps(a)),
        eps_star: (eps_star(&n, &av)?, gamma.eps_star(a)),
        e,
        e_star,
        f,
        f_star,
    })
}

/// A frontier node and its `f̃` results, one per label.
type Expansion = (usize, Vec<(Scalar, CrystalResult)>);

#[derive(Clone, Debug, Serialize)]
pub struct GraphNode {
    pub id: usize,
    /// `a_0` followed by the labels of the edges from the seed.
    pub path: Vec<Scalar>,
    pub rank: usize,
    pub dim: usize,
    pub character: FormalCharacter,
    #[serde(skip)]
    pub module: ModuleRep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub a: Scalar,
}

/// A step whose cosocle is not simple; recorded instead of an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMark {
    pub from: usize,
    pub a: Scalar,
    pub tag: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrystalGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub marks: Vec<GraphMark>,
}

fn label(path: &[Scalar]) -> String {
    let rest: Vec<String> = path[1..].iter().map(ToString::to_string).collect();
    format!("L({};{})", path[0], rest.join(","))
}

impl CrystalGraph {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| HeckeError::Parse(e.to_string()))
    }

    #[must_use]
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n");
        for n in &self.nodes {
            let _ = writeln!(
                s,
                "  n{} [label=\"{}\\ndim {}\"];",
                n.id,
                label(&n.path),
                n.dim
            );
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.a);
        }
        for (k, m) in self.marks.iter().enumerate() {
            let _ = writeln!(
                s,
                "  m{k} [shape=point];\n  n{} -> m{k} [style=dashed, label=\"{} {}\"];",
                m.from, m.a, m.tag
            );
        }
        s.push_str("}\n");
        s
    }

    /// Nodes of rank `k`.
    pub fn level(&self, k: usize) -> impl Iterator<Item = &GraphNode> {
        self.nodes.iter().filter(move |n| n.rank == k)
    }
}

/// No `X_j` (`j >= 1`) eigenvalue is `±1`: there characters determine simple modules.
fn avoids_unit(ch: &FormalCharacter) -> bool {
    ch.entries()
        .keys()
        .all(|t| t.iter().skip(1).all(|v| !v.abs().is_one()))
}

fn expand(m: &ModuleRep, labels: &[Scalar]) -> Result<Vec<(Scalar, CrystalResult)>> {
    labels
        .iter()
        .map(|a| Ok((a.clone(), crystal_f(m, a)?)))
        .collect()
}

/// Breadth-first search from the rank-zero module `(a_0)` along `f̃_a`, `a` in the window,
/// up to rank `n_max`. Nodes of one rank are identified by their characters (by an
/// isomorphism test when an eigenvalue `±1` shows up); each level is
/// expanded on scoped threads and the result does not depend on scheduling.
pub fn build_graph(line: &LambdaLine, a0: &Scalar, n_max: usize) -> Result<CrystalGraph> {
    if n_max > 3 {
        return Err(HeckeError::OutOfRange(format!("n_max = {n_max} > 3")));
    }
    let labels = line.window_values();
    let root = seed(a0, &line.p, &line.q)?;
    let mut nodes = vec![GraphNode {
        id: 0,
        path: vec![a0.clone()],
        rank: 0,
        dim: 1,
        character: character(&root)?,
        module: root,
    }];
    let mut edges = Vec::new();
    let mut marks = Vec::new();
    let mut frontier = vec![0usize];
    for _ in 0..n_max {
        let threads = std::thread::available_parallelism()
            .map_or(1, usize::from)
            .min(frontier.len())
            .max(1);
        let chunks: Vec<Vec<usize>> = frontier
            .chunks(frontier.len().div_ceil(threads))
            .map(<[usize]>::to_vec)
            .collect();
        let results: Vec<Result<Vec<Expansion>>> =
            std::thread::scope(|sc| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|chunk| {
                        let nodes = &nodes;
                        let labels = &labels;
                        sc.spawn(move || {
                            chunk
                                .iter()
                                .map(|&id| Ok((id, expand(&nodes[id].module, labels)?)))
                                .collect()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("graph worker panicked"))
                    .collect()
            });
        let mut by_char: BTreeMap<FormalCharacter, Vec<usize>> = BTreeMap::new();
        let mut next = Vec::new();
        for chunk in results {
            for (from, outs) in chunk? {
                for (a, res) in outs {
                    match res {
                        CrystalResult::Irreducible(m) => {
                            let ch = character(&m)?;
                            let same = by_char.get(&ch).cloned().unwrap_or_default();
                            let found = if avoids_unit(&ch) {
                                same.first().copied()
                            } else {
                                let mut hit = None;
                                for id in same {
                                    if is_isomorphic(&nodes[id].module, &m)? {
                                        hit = Some(id);
                                        break;
                                    }
                                }
                                hit
                            };
                            let to = match found {
                                Some(id) => id,
                                None => {
                                    let id = nodes.len();
                                    let mut path = nodes[from].path.clone();
                                    path.push(a.clone());
                                    nodes.push(GraphNode {
                                        id,
                                        path,
                                        rank: m.n(),
                                        dim: m.dim(),
                                        character: ch.clone(),
                                        module: m,
                                    });
                                    by_char.entry(ch).or_default().push(id);
                                    next.push(id);
                                    id
                                }
                            };
                            edges.push(GraphEdge { from, to, a });
                        }
                        other => marks.push(GraphMark {
                            from,
                            a,
                            tag: other.tag().to_string(),
                        }),
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(CrystalGraph {
        nodes,
        edges,
        marks,
    })
}
