use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hecke::algebra::{check_defining_relations, AlgebraDesc, Lattice, Variant};
use hecke::characters::{char_linearly_independent, character, shuffle_character, FormalCharacter};
use hecke::clifford::{clifford_restrict, CliffordOutcome};
use hecke::crystal::{build_graph, multiseg_oracle, Dictionary, LambdaLine};
use hecke::fixtures::{
    self, default_p, default_q, h1_example, h2_example, l_a0_p2, l_a0_q2, shuffle_ex_1,
    shuffle_ex_2,
};
use hecke::functors::{
    build_from_path, conjugate_gens, crystal_e, crystal_f, e_lower, eps, induce, principal_series,
    CrystalResult, Family, SeriesKind,
};
use hecke::modrep::{
    hom_space, is_irreducible, is_isomorphic, jordan_block_sizes, multiplicity_of, outer_tensor,
    restrict, socle, sub_module, tau_dual, twist_by, twist_sigma, verify_module,
};
use hecke::multiseg::{enumerate, Multisegment};
use hecke::weyl::{double_coset_reps, longest_double_rep, ParabolicShape};
use hecke::{ModuleRep, Scalar};

type Check = std::result::Result<String, String>;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn pq() -> (Scalar, Scalar) {
    (default_p(), default_q())
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: hecke::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn lattice(n: usize, vals: &[Scalar]) -> ModuleRep {
    let (p, q) = pq();
    ModuleRep::one_dim(
        AlgebraDesc::new(Lattice::Full, n, p, q, BTreeSet::new()).unwrap(),
        vals,
    )
    .unwrap()
}

fn reduced_one(a: &Scalar) -> ModuleRep {
    let (p, q) = pq();
    ModuleRep::one_dim(
        AlgebraDesc::new(Lattice::Reduced, 1, p, q, BTreeSet::new()).unwrap(),
        std::slice::from_ref(a),
    )
    .unwrap()
}

fn b(n: usize) -> AlgebraDesc {
    let (p, q) = pq();
    AlgebraDesc::b(n, p, q).unwrap()
}

fn shape_desc(n: usize, gens: BTreeSet<usize>) -> AlgebraDesc {
    let (p, q) = pq();
    AlgebraDesc::new(Lattice::Full, n, p, q, gens).unwrap()
}

fn relations() -> Check {
    let (p, q) = pq();
    let mut count = 0;
    for fam in [Family::B, Family::R, Family::A] {
        for n in 1..=3 {
            let desc = ok(fam.desc(n, p.clone(), q.clone()))?;
            let checks = ok(check_defining_relations(&desc))?;
            if let Some(bad) = checks.iter().find(|c| !c.pass) {
                return Err(format!(
                    "{desc}: relation {} fails at {}",
                    bad.family, bad.instance
                ));
            }
            count += checks.len();
        }
    }
    Ok(format!("{count} relation instances"))
}

fn example_one() -> Check {
    let m = ok(h1_example(&default_p(), &s(5)))?;
    ensure!(verify_module(&m).iter().all(|c| c.pass), "relations fail");
    ensure!(ok(is_irreducible(&m))?, "not irreducible");
    let homs = ok(hom_space(&m, &ok(twist_sigma(&m))?))?;
    ensure!(homs.len() == 1, "Hom(M, M^σ) has dim {}", homs.len());
    let h = &homs[0];
    ensure!(
        h.get(0, 1).is_zero()
            && h.get(1, 0).is_zero()
            && *h.get(0, 0) == -h.get(1, 1)
            && !h.get(0, 0).is_zero(),
        "intertwiner is not proportional to diag(1,-1)"
    );
    let r = ok(clifford_restrict(&m))?;
    let CliffordOutcome::Splits(a, c) = &r.outcome else {
        return Err("restriction does not split".into());
    };
    ensure!(
        a.dim() == 1 && c.dim() == 1,
        "part dims {} and {}",
        a.dim(),
        c.dim()
    );
    ensure!(!ok(is_isomorphic(a, c))?, "parts are isomorphic");
    Ok("splits into two 1-dim parts".into())
}

fn example_two() -> Check {
    let (p, q) = pq();
    let m = ok(h2_example(&p, &q, &s(5)))?;
    let checks = verify_module(&m);
    let families: BTreeSet<&str> = checks.iter().map(|c| c.family.as_str()).collect();
    ensure!(checks.iter().all(|c| c.pass), "relations fail");
    let vacuous: Vec<&str> = ["1", "2", "3", "4", "5", "6", "7", "8"]
        .into_iter()
        .filter(|f| !families.contains(f))
        .collect();
    ensure!(
        vacuous.iter().all(|f| *f == "3" || *f == "4"),
        "families {vacuous:?} were never evaluated"
    );
    ensure!(ok(is_irreducible(&m))?, "not irreducible over H_2");
    let r = ok(restrict(&m, &ok(AlgebraDesc::r(2, p, q))?))?;
    ensure!(ok(is_irreducible(&r))?, "not irreducible over H_2^R");
    Ok(format!(
        "dim {}, {} families checked, {vacuous:?} have no instances at n = 2",
        m.dim(),
        families.len()
    ))
}

fn shuffle_examples() -> Check {
    let (p, q) = pq();
    let (a0, c) = (s(5), s(11));
    let p2 = &p * &p;
    let one = ok(character(&ok(shuffle_ex_1(&p, &q, &a0, &c))?))?;
    let want1 = FormalCharacter::from_iter_tuples([
        vec![a0.clone(), p2.clone(), c.clone()],
        vec![a0.clone(), c.clone(), p2.clone()],
        vec![&a0 * &c, c.inv(), p2.clone()],
        vec![&a0 * &c, p2.clone(), c.inv()],
    ]);
    ensure!(one == want1, "first example: {one}");
    let lp2 = ok(character(&ok(l_a0_p2(&p, &q, &a0))?))?;
    ensure!(
        shuffle_character(&lp2, &FormalCharacter::single(vec![c])) == want1,
        "first shuffle differs"
    );

    let q2 = &q * &q;
    let (mq2, mqi, m1) = (-&q2, -q2.inv(), s(-1));
    let aq = &a0 * &q2.inv();
    let two = ok(character(&ok(shuffle_ex_2(&p, &q, &a0))?))?;
    let mut want2 = FormalCharacter::new();
    want2.add(vec![a0.clone(), mqi.clone(), m1.clone(), mq2.clone()], 1);
    want2.add(vec![-&aq, mq2.clone(), m1.clone(), mq2.clone()], 1);
    want2.add(vec![-&aq, m1.clone(), mq2.clone(), mq2.clone()], 2);
    want2.add(vec![aq.clone(), m1.clone(), mq2.clone(), mq2.clone()], 2);
    want2.add(vec![aq.clone(), mq2.clone(), m1.clone(), mq2.clone()], 1);
    want2.add(vec![-&a0, mqi.clone(), m1.clone(), mq2.clone()], 1);
    ensure!(two == want2, "second example: {two}");
    let sh = shuffle_character(
        &FormalCharacter::single(vec![a0]),
        &FormalCharacter::single(vec![mqi, m1, mq2]),
    );
    ensure!(sh == want2, "second shuffle differs");
    Ok("4-term and 8-term characters".into())
}

fn kato_a() -> Check {
    let (p, q) = pq();
    let a = s(7);
    for n in 2..=3usize {
        let m = ok(principal_series(SeriesKind::A, None, &a, n, &p, &q))?;
        let fact: usize = (1..=n).product();
        ensure!(ok(is_irreducible(&m))?, "n={n}: reducible");
        ensure!(m.dim() == fact, "n={n}: dim {}", m.dim());
        let mut want = FormalCharacter::new();
        want.add(vec![a.clone(); n], fact);
        ensure!(ok(character(&m))? == want, "n={n}: character");
        let blocks = jordan_block_sizes(m.mat_x(n), &a);
        ensure!(
            blocks.iter().all(|&k| k == n),
            "n={n}: Jordan blocks {blocks:?}"
        );
        let gens: BTreeSet<usize> = (1..n - 1).collect();
        let res = ok(restrict(
            &m,
            &ok(AlgebraDesc::new(
                Lattice::Reduced,
                n,
                p.clone(),
                q.clone(),
                gens,
            ))?,
        ))?;
        let soc = ok(sub_module(&res, &ok(socle(&res))?))?;
        let smaller = ok(outer_tensor(
            &ok(principal_series(SeriesKind::A, None, &a, n - 1, &p, &q))?,
            &reduced_one(&a),
        ))?;
        ensure!(
            ok(is_isomorphic(&soc, &smaller))?,
            "n={n}: socle of the restriction"
        );
    }
    Ok("n = 2, 3".into())
}

/// Irreducible modules used by the crystal and independence checks.
struct Corpus {
    mods: Vec<ModuleRep>,
}

fn corpus() -> hecke::Result<Corpus> {
    let (p, q) = pq();
    let mut mods = Vec::new();
    for f in fixtures::registry() {
        let m = f.build()?;
        if is_irreducible(&m)? {
            mods.push(m);
        }
    }
    let line = LambdaLine {
        window: 1,
        ..LambdaLine::default()
    };
    for a0 in [s(7), s(5)] {
        let g = build_graph(&line, &a0, 2)?;
        mods.extend(g.nodes.into_iter().map(|n| n.module));
    }
    for path in [
        vec![s(7)],
        vec![s(7), s(7)],
        vec![s(7), s(11)],
        vec![s(11), s(7)],
    ] {
        if let CrystalResult::Irreducible(m) = build_from_path(&s(5), &path, &p, &q)?.result {
            mods.push(m);
        }
    }
    Ok(Corpus { mods })
}

fn kato_b(corpus: &Corpus) -> Check {
    let (p, q) = pq();
    let l = ok(principal_series(
        SeriesKind::B,
        Some(&s(5)),
        &s(7),
        2,
        &p,
        &q,
    ))?;
    ensure!(ok(is_irreducible(&l))?, "cosocle is reducible");
    let t = [s(5), s(7), s(7)];
    ensure!(ok(character(&l))?.mult(&t) > 0, "character misses (5,7,7)");
    let mut hits = 0;
    for m in &corpus.mods {
        if m.desc() == l.desc() && ok(character(m))?.mult(&t) > 0 {
            ensure!(
                ok(is_isomorphic(m, &l))?,
                "a second irreducible contains (5,7,7)"
            );
            hits += 1;
        }
    }
    ensure!(hits > 0, "the corpus never produced L(5,7,7)");
    Ok(format!("{hits} corpus hits, all isomorphic"))
}

fn splitting() -> Check {
    let (p, q) = pq();
    let l = ok(l_a0_q2(&p, &q, &s(5)))?;
    let CrystalResult::SplitPair(x, y) = ok(crystal_f(&l, &s(1)))? else {
        return Err("no split".into());
    };
    ensure!(x.dim() == 4 && y.dim() == 4, "dims {} {}", x.dim(), y.dim());
    ensure!(
        ok(is_irreducible(&x))? && ok(is_irreducible(&y))?,
        "a part is reducible"
    );
    ensure!(!ok(is_isomorphic(&x, &y))?, "parts are isomorphic");
    let (cx, cy) = (ok(character(&x))?, ok(character(&y))?);
    let t1 = [s(5), s(1), s(9)];
    let t2 = [s(45), s(1), Scalar::new(1, 9)];
    ensure!(
        cx.mult(&t1) > 0 && cy.mult(&t2) > 0,
        "characters {cx} / {cy}"
    );
    Ok("two 4-dim irreducibles".into())
}

/// The crystal identities of one `(M, a)`.
fn crystal_props(m: &ModuleRep, a: &Scalar) -> Check {
    let e0 = ok(eps(m, a))?;
    let f = ok(crystal_f(m, a))?;
    let fm = f
        .irreducible()
        .ok_or_else(|| format!("f̃ gives {}", f.tag()))?;
    ensure!(
        ok(eps(fm, a))? == e0 + 1,
        "ε(f̃M) = {}, ε(M) = {e0}",
        ok(eps(fm, a))?
    );
    ensure!(ok(is_isomorphic(&ok(crystal_e(fm, a))?, m))?, "ẽf̃M ≇ M");
    let e = ok(e_lower(m, a))?;
    if m.n() == 0 {
        ensure!(e0 == 0 && e.dim() == 0, "rank zero with ε = {e0}");
        return Ok(String::new());
    }
    let blocks = jordan_block_sizes(m.mat_x(m.n()), a);
    ensure!(
        blocks.iter().copied().max().unwrap_or(0) == e0,
        "Jordan blocks {blocks:?}, ε = {e0}"
    );
    if e0 == 0 {
        ensure!(e.dim() == 0, "e_a M nonzero with ε = 0");
        return Ok(String::new());
    }
    let et = ok(crystal_e(m, a))?;
    ensure!(ok(multiplicity_of(&et, &e))? == e0, "[e_a M : ẽ_a M] ≠ ε");
    ensure!(ok(hom_space(&e, &e))?.len() == e0, "dim End(e_a M) ≠ ε");
    Ok(String::new())
}

fn crystal_properties(corpus: &Corpus) -> Check {
    let fresh = s(13);
    let mut seen: Vec<ModuleRep> = Vec::new();
    let mut pairs = 0;
    for m in &corpus.mods {
        if Family::of(m.desc()) != Family::B || m.n() > 2 {
            continue;
        }
        if seen.iter().any(|x| {
            x.desc() == m.desc() && x.dim() == m.dim() && is_isomorphic(x, m).unwrap_or(false)
        }) {
            continue;
        }
        seen.push(m.clone());
        let ch = ok(character(m))?;
        let mut labels: BTreeSet<Scalar> = ch
            .entries()
            .keys()
            .filter_map(|t| t.last().cloned())
            .filter(|a| !a.abs().is_one())
            .collect();
        if m.n() == 0 {
            labels.insert(s(7));
        }
        labels.insert(fresh.clone());
        for a in labels {
            crystal_props(m, &a)
                .map_err(|e| format!("{} dim {} at a = {a}: {e}", m.desc(), m.dim()))?;
            pairs += 1;
        }
    }
    ensure!(seen.len() >= 20, "only {} irreducibles", seen.len());
    Ok(format!("{} irreducibles, {pairs} (M, a) pairs", seen.len()))
}

fn mackey_case(n: usize, i: &ParabolicShape, j: &ParabolicShape, m: &ModuleRep) -> Check {
    let (ig, jg) = (i.generators(), j.generators());
    let lhs = ok(character(&ok(restrict(
        &ok(induce(m, &b(n)))?,
        &shape_desc(n, ig.clone()),
    ))?))?;
    let mut rhs = FormalCharacter::new();
    for x in ok(double_coset_reps(n, &ig, &jg))? {
        let k_i = conjugate_gens(&x, &ig, &jg);
        let k_j = conjugate_gens(&x.inverse(), &jg, &ig);
        let res = ok(restrict(m, &shape_desc(n, k_j)))?;
        let tw = ok(twist_by(&res, &x, &k_i))?;
        rhs.add_all(&ok(character(&ok(induce(
            &tw,
            &shape_desc(n, ig.clone()),
        ))?))?);
    }
    ensure!(lhs == rhs, "I = {i}, J = {j}: sides differ");
    Ok(String::new())
}

fn mackey() -> Check {
    let (p, q) = pq();
    let one = ParabolicShape::new(1, vec![1]).map_err(|e| e.to_string())?;
    let m2 = ok(outer_tensor(
        &ok(l_a0_p2(&p, &q, &s(5)))?,
        &reduced_one(&s(11)),
    ))?;
    mackey_case(2, &one, &one, &m2)?;
    let s21 = ParabolicShape::new(2, vec![1]).map_err(|e| e.to_string())?;
    let s12 = ParabolicShape::new(1, vec![2]).map_err(|e| e.to_string())?;
    let m3 = ok(induce(
        &lattice(3, &[s(5), s(7), s(11), s(13)]),
        &shape_desc(3, s21.generators()),
    ))?;
    mackey_case(3, &s21, &s21, &m3)?;
    mackey_case(3, &s12, &s21, &m3)?;
    Ok("three (I, J) pairs".into())
}

fn duality() -> Check {
    let (p, q) = pq();
    let i = ParabolicShape::new(1, vec![1])
        .map_err(|e| e.to_string())?
        .generators();
    let d = ok(longest_double_rep(2, &i))?.d;
    let seeds = [
        ok(outer_tensor(
            &ok(l_a0_p2(&p, &q, &s(5)))?,
            &reduced_one(&s(11)),
        ))?,
        ok(outer_tensor(
            &ok(l_a0_p2(&p, &q, &s(7)))?,
            &reduced_one(&s(13)),
        ))?,
        ok(outer_tensor(
            &ok(l_a0_q2(&p, &q, &s(5)))?,
            &reduced_one(&s(11)),
        ))?,
    ];
    for m in &seeds {
        let lhs = tau_dual(&ok(induce(m, &b(2)))?);
        let rhs = ok(induce(&ok(twist_by(&tau_dual(m), &d, &i))?, &b(2)))?;
        ensure!(
            ok(is_isomorphic(&lhs, &rhs))?,
            "seed of dim {}: not isomorphic",
            m.dim()
        );
    }
    Ok("3 seeds".into())
}

fn oracle() -> Check {
    let line = LambdaLine::default();
    let mut count = 0;
    for g in enumerate(0, -1, 1, 3) {
        for exp in -2..=2 {
            let r = ok(multiseg_oracle(&g, exp, &line, g.len() < 3))?;
            ensure!(r.pass(), "{r:?}");
            count += 1;
        }
    }
    Ok(format!("{count} (Γ, a) pairs"))
}

fn dictionary_gammas() -> Vec<Multisegment> {
    enumerate(-1, -1, 1, 2)
}

fn dictionary(irreps: &mut Vec<ModuleRep>) -> Check {
    let line = LambdaLine::default();
    ensure!(line.genericity_check(), "line is not generic");
    let mut dict = Dictionary::new(line.clone());
    let mut count = 0;
    for g in dictionary_gammas() {
        irreps.push(ok(dict.module(&g))?);
        for a in line.window_points() {
            let r = ok(dict.edge_check(&g, a))?;
            ensure!(r.pass(), "{r:?}");
            count += 1;
        }
    }
    Ok(format!("{count} (Γ, a) pairs"))
}

fn independence(corpus: &Corpus, dict: &[ModuleRep]) -> Check {
    let mut classes: Vec<((Variant, usize), Vec<ModuleRep>)> = Vec::new();
    for m in corpus.mods.iter().chain(dict) {
        let key = (m.desc().variant(), m.n());
        let idx = match classes.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                classes.push((key, Vec::new()));
                classes.len() - 1
            }
        };
        let bucket = &mut classes[idx].1;
        if !bucket.iter().any(|x| {
            x.desc() == m.desc() && x.dim() == m.dim() && is_isomorphic(x, m).unwrap_or(false)
        }) {
            bucket.push(m.clone());
        }
    }
    let mut total = 0;
    for ((v, n), mods) in &classes {
        let chars: Vec<FormalCharacter> = mods
            .iter()
            .map(character)
            .collect::<hecke::Result<_>>()
            .map_err(|e| e.to_string())?;
        ensure!(
            char_linearly_independent(&chars),
            "{v:?} rank {n}: dependent characters"
        );
        total += mods.len();
    }
    Ok(format!("{total} irreducibles in {} classes", classes.len()))
}

fn run(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(ToString::to_string))
            .unwrap_or_default())
    });
    let t = start.elapsed();
    let pass = out.is_ok() && t <= budget;
    let detail = match &out {
        Ok(d) if t > budget => format!("{d}; over budget"),
        Ok(d) => d.clone(),
        Err(e) => e.clone(),
    };
    println!(
        "criterion {id:>2} {name}: {} [{:.2}s / {}s] {detail}",
        if pass { "PASS" } else { "FAIL" },
        t.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut all = true;
    all &= run(1, "relation suite", secs(10), relations);
    all &= run(2, "rank one Clifford example", secs(1), example_one);
    all &= run(3, "rank two example", secs(5), example_two);
    all &= run(4, "shuffle characters", secs(5), shuffle_examples);
    all &= run(5, "Kato type A", secs(30), kato_a);
    let built = Instant::now();
    let corpus = match corpus() {
        Ok(c) => c,
        Err(e) => {
            println!("corpus construction failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "corpus: {} irreducibles in {:.2}s",
        corpus.mods.len(),
        built.elapsed().as_secs_f64()
    );
    all &= run(6, "Kato type B", secs(30), || kato_b(&corpus));
    all &= run(7, "splitting at 1", secs(30), splitting);
    all &= run(8, "crystal properties", secs(300), || {
        crystal_properties(&corpus)
    });
    all &= run(9, "Mackey characters", secs(120), mackey);
    all &= run(10, "duality", secs(60), duality);
    all &= run(11, "multisegment oracle", secs(300), oracle);
    let mut dict = Vec::new();
    all &= run(12, "type A to B dictionary", secs(300), || {
        dictionary(&mut dict)
    });
    all &= run(13, "character independence", secs(30), || {
        independence(&corpus, &dict)
    });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
