use super::*;
use crate::characters::{shuffle_character, shuffle_character_with, FormalCharacter, ShuffleKind};
use crate::fixtures::{default_p, default_q, l_a0_q2};
use crate::modrep::{hom_space, is_irreducible, jordan_block_sizes, module_ok, tau_dual, twist_by};
use crate::weyl::{double_coset_reps, longest_double_rep, ParabolicShape};

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn r(a: i64, b: i64) -> Scalar {
    Scalar::new(a, b)
}

fn pq() -> (Scalar, Scalar) {
    (default_p(), default_q())
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

/// One-dimensional `H_1`-module with `T_0 = p`: forces `X_1 = p^2`.
fn l_a0_p2(a0: &Scalar) -> ModuleRep {
    let p = default_p();
    let x = BTreeMap::from([
        (0, Matrix::scalar(1, a0)),
        (1, Matrix::scalar(1, &(&p * &p))),
    ]);
    ModuleRep::new(b(1), BTreeMap::from([(0, Matrix::scalar(1, &p))]), x).unwrap()
}

#[test]
fn rank_one_principal_series() {
    let m = induce(&lattice(1, &[s(5), s(7)]), &b(1)).unwrap();
    assert_eq!(m.dim(), 2);
    assert!(module_ok(&m));
    let ch = character(&m).unwrap();
    assert_eq!(
        ch,
        FormalCharacter::from_iter_tuples([vec![s(5), s(7)], vec![s(35), r(1, 7)]])
    );
    assert!(is_irreducible(&m).unwrap());
}

#[test]
fn first_shuffle_example() {
    let (a0, c, p) = (s(5), s(11), default_p());
    let p2 = &p * &p;
    let m = outer_tensor(&l_a0_p2(&a0), &reduced_one(&c)).unwrap();
    let ind = induce(&m, &b(2)).unwrap();
    assert!(module_ok(&ind));
    let ch = character(&ind).unwrap();
    let want = FormalCharacter::from_iter_tuples([
        vec![a0.clone(), p2.clone(), c.clone()],
        vec![a0.clone(), c.clone(), p2.clone()],
        vec![&a0 * &c, c.inv(), p2.clone()],
        vec![&a0 * &c, p2.clone(), c.inv()],
    ]);
    assert_eq!(ch, want);
    let via_shuffle = shuffle_character(
        &character(&l_a0_p2(&a0)).unwrap(),
        &FormalCharacter::single(vec![c]),
    );
    assert_eq!(via_shuffle, want);
}

#[test]
fn second_shuffle_example() {
    let (p, q) = pq();
    let a0 = s(5);
    let q2 = &q * &q;
    let (mq2, mqi, m1) = (-&q2, -q2.inv(), s(-1));
    let a3 = AlgebraDesc::a(3, p.clone(), q.clone()).unwrap();
    let xs = BTreeMap::from([
        (1, Matrix::scalar(1, &mqi)),
        (2, Matrix::scalar(1, &m1)),
        (3, Matrix::scalar(1, &mq2)),
    ]);
    let ts = BTreeMap::from([(1, Matrix::scalar(1, &q)), (2, Matrix::scalar(1, &q))]);
    let la = ModuleRep::new(a3, ts, xs).unwrap();
    assert!(module_ok(&la));
    let m = outer_tensor(&lattice(0, std::slice::from_ref(&a0)), &la).unwrap();
    let ind = induce(&m, &b(3)).unwrap();
    assert_eq!(ind.dim(), 8);
    let reps = induction_reps(m.desc(), &b(3)).unwrap();
    let words: Vec<Vec<usize>> = reps.iter().map(WeylElem::reduced_word).collect();
    assert_eq!(words.len(), 8);
    let ch = character(&ind).unwrap();
    let aq = &a0 * &q2.inv();
    let mut want = FormalCharacter::new();
    want.add(vec![a0.clone(), mqi.clone(), m1.clone(), mq2.clone()], 1);
    want.add(vec![-&aq, mq2.clone(), m1.clone(), mq2.clone()], 1);
    want.add(vec![-&aq, m1.clone(), mq2.clone(), mq2.clone()], 2);
    want.add(vec![aq.clone(), m1.clone(), mq2.clone(), mq2.clone()], 2);
    want.add(vec![aq.clone(), mq2.clone(), m1.clone(), mq2.clone()], 1);
    want.add(vec![-&a0, mqi.clone(), m1.clone(), mq2.clone()], 1);
    assert_eq!(ch, want);
    let via_shuffle =
        shuffle_character(&FormalCharacter::single(vec![a0]), &character(&la).unwrap());
    assert_eq!(via_shuffle, want);
}

#[test]
fn reduced_and_type_a_shuffles_match_induction() {
    let (p, q) = pq();
    let rl = AlgebraDesc::new(Lattice::Reduced, 2, p.clone(), q.clone(), BTreeSet::new()).unwrap();
    let seed = ModuleRep::one_dim(rl, &[s(7), s(11)]).unwrap();
    let single = FormalCharacter::single(vec![s(7)]);
    let other = FormalCharacter::single(vec![s(11)]);
    let ind_a = induce(&seed, &AlgebraDesc::a(2, p.clone(), q.clone()).unwrap()).unwrap();
    assert_eq!(
        character(&ind_a).unwrap(),
        shuffle_character_with(&single, &other, ShuffleKind::A)
    );
    let ind_r = induce(
        &seed,
        &AlgebraDesc::new(Lattice::Reduced, 2, p, q, BTreeSet::from([0])).unwrap(),
    )
    .unwrap();
    // R_1 ⊗ (lattice in X_2): only the first slot can be inverted
    let r_sh = shuffle_character_with(&FormalCharacter::single(vec![]), &single, ShuffleKind::R);
    let want = r_sh.map_tuples(|t| {
        let mut t = t.to_vec();
        t.push(s(11));
        t
    });
    assert_eq!(character(&ind_r).unwrap(), want);
}

#[test]
fn kato_type_a() {
    let (p, q) = pq();
    let a = s(7);
    let m = principal_series(SeriesKind::A, None, &a, 3, &p, &q).unwrap();
    assert_eq!(m.dim(), 6);
    assert!(module_ok(&m));
    assert_eq!(character(&m).unwrap(), {
        let mut c = FormalCharacter::new();
        c.add(vec![a.clone(); 3], 6);
        c
    });
    assert!(is_irreducible(&m).unwrap());
    assert_eq!(jordan_block_sizes(m.mat_x(3), &a), vec![3, 3]);
    assert_eq!(eps(&m, &a).unwrap(), 3);
    let two = principal_series(SeriesKind::A, None, &a, 2, &p, &q).unwrap();
    let res = restrict(
        &m,
        &AlgebraDesc::new(Lattice::Reduced, 3, p, q, BTreeSet::from([1])).unwrap(),
    )
    .unwrap();
    let soc = socle(&res).unwrap();
    let soc_m = sub_module(&res, &soc).unwrap();
    assert_eq!(soc_m.dim(), 2);
    let e = crystal_e(&m, &a).unwrap();
    assert!(is_isomorphic(&e, &two).unwrap());
}

#[test]
fn delta_of_principal_series() {
    let m = induce(&lattice(2, &[s(5), s(7), s(7)]), &b(2)).unwrap();
    assert_eq!(m.dim(), 8);
    let d0 = delta(&m, &s(7), 0).unwrap();
    assert_eq!(d0, m);
    let d2 = delta(&m, &s(7), 2).unwrap();
    assert_eq!(d2.dim(), 2);
    assert!(module_ok(&d2));
    assert_eq!(delta(&m, &s(3), 1).unwrap().dim(), 0);
    assert_eq!(eps(&m, &s(7)).unwrap(), 2);
}

#[test]
fn kato_type_b_rank_two() {
    let (p, q) = pq();
    let l = principal_series(SeriesKind::B, Some(&s(5)), &s(7), 2, &p, &q).unwrap();
    assert!(is_irreducible(&l).unwrap());
    assert!(character(&l).unwrap().mult(&[s(5), s(7), s(7)]) > 0);
    assert!(principal_series(SeriesKind::B, Some(&s(5)), &s(1), 2, &p, &q).is_err());
}

#[test]
fn crystal_f_from_seed() {
    let (p, q) = pq();
    let out = crystal_f(&seed(&s(5), &p, &q).unwrap(), &s(7)).unwrap();
    let m = out.irreducible().expect("irreducible").clone();
    assert_eq!(m.dim(), 2);
    assert!(is_irreducible(&m).unwrap());
    assert_eq!(eps(&m, &s(7)).unwrap(), 1);
    let back = crystal_e(&m, &s(7)).unwrap();
    assert!(is_isomorphic(&back, &seed(&s(5), &p, &q).unwrap()).unwrap());
    let json = out.to_json().unwrap();
    assert!(json.starts_with("{\"parts\":") || json.contains("\"tag\":\"Irreducible\""));
}

#[test]
fn small_counterexample_splits() {
    let (p, q) = pq();
    let a0 = s(5);
    let l = l_a0_q2(&p, &q, &a0).unwrap();
    let from_path = build_from_path(&a0, &[&q * &q], &p, &q).unwrap();
    assert!(is_isomorphic(from_path.result.irreducible().unwrap(), &l).unwrap());
    let out = crystal_f(&l, &s(1)).unwrap();
    let CrystalResult::SplitPair(x, y) = &out else {
        panic!("expected a split, got {}", out.tag())
    };
    assert_eq!((x.dim(), y.dim()), (4, 4));
    assert!(is_irreducible(x).unwrap() && is_irreducible(y).unwrap());
    let cx = character(x).unwrap();
    let cy = character(y).unwrap();
    let t1 = vec![s(5), s(1), s(9)];
    let t2 = vec![s(45), s(1), r(1, 9)];
    assert!((cx.mult(&t1) > 0 && cy.mult(&t2) > 0) || (cy.mult(&t1) > 0 && cx.mult(&t2) > 0));
    let path = build_from_path(&a0, &[&q * &q, s(1)], &p, &q).unwrap();
    assert_eq!(path.steps, 2);
    assert_eq!(path.result.tag(), "SplitPair");
}

#[test]
fn frobenius_dimensions() {
    let m = outer_tensor(&l_a0_p2(&s(5)), &reduced_one(&s(11))).unwrap();
    let ind = induce(&m, &b(2)).unwrap();
    let n = ind.clone();
    let res = restrict(&n, m.desc()).unwrap();
    assert_eq!(
        hom_space(&ind, &n).unwrap().len(),
        hom_space(&m, &res).unwrap().len()
    );
    let other = induce(&lattice(2, &[s(5), s(4), s(11)]), &b(2)).unwrap();
    let res2 = restrict(&other, m.desc()).unwrap();
    assert_eq!(
        hom_space(&ind, &other).unwrap().len(),
        hom_space(&m, &res2).unwrap().len()
    );
}

#[test]
fn e_of_f_contains_the_module() {
    let l = l_a0_q2(&default_p(), &default_q(), &s(5)).unwrap();
    let e = e_lower(&f_raise(&l, &s(7)).unwrap(), &s(7)).unwrap();
    assert!(!hom_space(&l, &e).unwrap().is_empty());
}

/// `ch res_I ind_J M` against `Σ_x ch ind_{I ∩ xJ}^I x(res M)`.
fn mackey(n: usize, i: &ParabolicShape, j: &ParabolicShape, m: &ModuleRep) {
    let (ig, jg) = (i.generators(), j.generators());
    let lhs = character(&restrict(&induce(m, &b(n)).unwrap(), &shape_desc(n, ig.clone())).unwrap())
        .unwrap();
    let mut rhs = FormalCharacter::new();
    for x in double_coset_reps(n, &ig, &jg).unwrap() {
        let k_i = conjugate_gens(&x, &ig, &jg);
        let k_j = conjugate_gens(&x.inverse(), &jg, &ig);
        let res = restrict(m, &shape_desc(n, k_j)).unwrap();
        let tw = twist_by(&res, &x, &k_i).unwrap();
        assert!(module_ok(&tw));
        rhs.add_all(&character(&induce(&tw, &shape_desc(n, ig.clone())).unwrap()).unwrap());
    }
    assert_eq!(lhs, rhs);
}

#[test]
fn mackey_rank_two() {
    let sh = ParabolicShape::new(1, vec![1]).unwrap();
    let m = outer_tensor(&l_a0_p2(&s(5)), &reduced_one(&s(11))).unwrap();
    mackey(2, &sh, &sh, &m);
}

#[test]
fn duality_rank_two() {
    let i = ParabolicShape::new(1, vec![1]).unwrap().generators();
    let d = longest_double_rep(2, &i).unwrap().d;
    let m = outer_tensor(&l_a0_p2(&s(5)), &reduced_one(&s(11))).unwrap();
    let lhs = tau_dual(&induce(&m, &b(2)).unwrap());
    let rhs = induce(&twist_by(&tau_dual(&m), &d, &i).unwrap(), &b(2)).unwrap();
    assert!(is_isomorphic(&lhs, &rhs).unwrap());
}
