use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cocycle::Cocycle;
use crate::finite_group::Subgroup;
use crate::presentation::tests::{arb_presentation, bilinear_v4, elementary, fine};
use crate::presentation::{AlgebraElement, Presentation};

const A: Elem = 2;
const B: Elem = 1;
const AB: Elem = 3;

fn var(id: u32, degree: Elem) -> GradedVariable {
    GradedVariable {
        id: VarId(id),
        degree,
        tag: VarTag::Plain,
    }
}

fn mono(c: i64, factors: &[u32]) -> GradedMonomial {
    GradedMonomial {
        coefficient: CycloScalar::from_int(1, c),
        factors: factors.iter().map(|&k| VarId(k)).collect(),
    }
}

fn sb(h: Elem, i: usize, j: usize) -> StdBasisElement {
    StdBasisElement { h, i, j }
}

fn assign(pairs: &[(u32, StdBasisElement)]) -> BasisAssignment {
    pairs.iter().map(|&(k, b)| (VarId(k), b)).collect()
}

fn trivial_v4() -> Presentation {
    fine(Cocycle::trivial(Group::klein_four(), 1))
}

/// Reference evaluation: expand every alternation and multiply out.
fn brute_evaluate(
    p: &GradedPolynomial,
    pres: &Presentation,
    a: &BTreeMap<VarId, AlgebraElement>,
) -> AlgebraElement {
    let mut values = a.clone();
    for (z, q) in p.composition() {
        values.insert(*z, brute_evaluate(q, pres, a));
    }
    let mut out = AlgebraElement::zero();
    for m in p.expanded(u128::MAX).unwrap() {
        let mut prod: Option<AlgebraElement> = None;
        for f in &m.factors {
            let v = &values[f];
            prod = Some(match prod {
                None => v.clone(),
                Some(x) => pres.multiply(&x, v),
            });
        }
        out = out.add(&prod.unwrap().scale(&m.coefficient));
    }
    out
}

#[test]
fn evaluation_examples() {
    let bil = fine(bilinear_v4());
    let x = GradedPolynomial::monomial(vec![var(0, 0)]);
    let v = evaluate_basis(&x, &bil, &assign(&[(0, sb(0, 0, 0))])).unwrap();
    assert_eq!(v, AlgebraElement::basis(sb(0, 0, 0)));

    let anti = GradedPolynomial::new(
        vec![var(0, A), var(1, B)],
        vec![mono(1, &[0, 1]), mono(1, &[1, 0])],
    )
    .unwrap();
    let comm = GradedPolynomial::new(
        vec![var(0, A), var(1, B)],
        vec![mono(1, &[0, 1]), mono(-1, &[1, 0])],
    )
    .unwrap();
    let a = assign(&[(0, sb(A, 0, 0)), (1, sb(B, 0, 0))]);
    assert!(evaluate_basis(&anti, &bil, &a).unwrap().is_zero());
    // the group algebra is commutative: the anticommutator doubles, the
    // commutator vanishes
    let v = evaluate_basis(&anti, &trivial_v4(), &a).unwrap();
    assert_eq!(
        v,
        AlgebraElement::term(sb(AB, 0, 0), CycloScalar::from_int(1, 2))
    );
    assert!(evaluate_basis(&comm, &trivial_v4(), &a).unwrap().is_zero());

    let wrong = assign(&[(0, sb(B, 0, 0)), (1, sb(B, 0, 0))]);
    assert_eq!(
        evaluate_basis(&anti, &bil, &wrong),
        Err(PolyError::DegreeMismatch {
            var: VarId(0),
            expected: A
        })
    );
    assert_eq!(
        evaluate_basis(&anti, &bil, &assign(&[(0, sb(A, 0, 0))])),
        Err(PolyError::MissingAssignment(VarId(1)))
    );
}

#[test]
fn alternation_examples() {
    let m = GradedPolynomial::monomial(vec![var(0, 0), var(1, 0), var(2, 0)]);
    assert_eq!(m.clone().alternate(&[]).unwrap(), m);
    let two = GradedPolynomial::monomial(vec![var(0, 0), var(1, 0)])
        .alternate(&[vec![VarId(0), VarId(1)]])
        .unwrap();
    assert_eq!(
        two.expanded(100).unwrap(),
        vec![mono(1, &[0, 1]), mono(-1, &[1, 0])]
    );
    let three = m
        .clone()
        .alternate(&[vec![VarId(0), VarId(1)], vec![VarId(2)]])
        .unwrap();
    assert_eq!(
        three.expanded(100).unwrap(),
        vec![mono(1, &[0, 1, 2]), mono(-1, &[1, 0, 2])]
    );
    assert_eq!(three.expanded_len(), 2);
    assert_eq!(
        m.clone()
            .alternate(&[vec![VarId(0), VarId(1)], vec![VarId(1), VarId(2)]]),
        Err(PolyError::SetsNotDisjoint)
    );
    let mixed = GradedPolynomial::monomial(vec![var(0, 0), var(1, 1)]);
    assert_eq!(
        mixed.alternate(&[vec![VarId(0), VarId(1)]]),
        Err(PolyError::MixedDegreesInSet)
    );
}

#[test]
fn construction_errors() {
    assert_eq!(
        GradedPolynomial::new(vec![var(0, 0), var(0, 1)], vec![]),
        Err(PolyError::DuplicateVariable(VarId(0)))
    );
    assert_eq!(
        GradedPolynomial::new(vec![var(0, 0), var(1, 0)], vec![mono(1, &[0, 0])]),
        Err(PolyError::NotMultilinear(0))
    );
    assert_eq!(
        GradedPolynomial::new(vec![var(0, 0)], vec![mono(1, &[0, 5])]),
        Err(PolyError::UnknownVariable(VarId(5)))
    );
}

#[test]
fn identity_examples() {
    let c2 = fine(Cocycle::trivial(Group::cyclic(2), 1));
    let comm = GradedPolynomial::new(
        vec![var(0, 0), var(1, 0)],
        vec![mono(1, &[0, 1]), mono(-1, &[1, 0])],
    )
    .unwrap();
    assert!(is_identity(&comm, &c2, DEFAULT_BUDGET).is_identity());

    let anti = GradedPolynomial::new(
        vec![var(0, A), var(1, B)],
        vec![mono(1, &[0, 1]), mono(1, &[1, 0])],
    )
    .unwrap();
    assert!(is_identity(&anti, &fine(bilinear_v4()), DEFAULT_BUDGET).is_identity());
    match is_identity(&anti, &trivial_v4(), DEFAULT_BUDGET) {
        IdentityVerdict::NonIdentity { witness, value } => {
            assert_eq!(
                evaluate_basis(&anti, &trivial_v4(), &witness).unwrap(),
                value
            );
            assert!(!value.is_zero());
        }
        v => panic!("{v:?}"),
    }

    let single = GradedPolynomial::monomial(vec![var(0, 1)]);
    assert!(is_identity(&single, &c2, DEFAULT_BUDGET).is_non_identity());
    // no elements of degree g in the (e, e) algebra
    let ee = elementary(Group::cyclic(2), vec![0, 0]);
    assert!(is_identity(&single, &ee, DEFAULT_BUDGET).is_identity());
    // budget exhaustion
    let big = GradedPolynomial::monomial((0..6).map(|k| var(k, 0)).collect());
    let m3 = elementary(Group::cyclic(2), vec![0, 0, 0]);
    assert!(matches!(
        is_identity(&big, &m3, 10),
        IdentityVerdict::Inconclusive { .. }
    ));
}

#[test]
fn pigeonhole() {
    // three alternating degree-e variables on a two-dimensional e-part
    let p = GradedPolynomial::monomial(vec![var(0, 0), var(1, 0), var(2, 0)])
        .alternate(&[vec![VarId(0), VarId(1), VarId(2)]])
        .unwrap();
    let pres = elementary(Group::cyclic(2), vec![0, 1]);
    match is_identity(&p, &pres, DEFAULT_BUDGET) {
        IdentityVerdict::Identity { proof } => assert!(proof.pigeonhole),
        v => panic!("{v:?}"),
    }
}

#[test]
fn binomial_examples() {
    let bil = bilinear_v4();
    let triv = Cocycle::trivial(Group::klein_four(), 1);
    assert!(binomial_lambda(&bil, &[A, B], &[0, 1]).unwrap().is_one());
    assert_eq!(
        binomial_lambda(&bil, &[A, B], &[1, 0]).unwrap(),
        CycloScalar::from_int(1, -1)
    );
    assert!(binomial_lambda(&triv, &[A, B, AB], &[2, 0, 1])
        .unwrap()
        .is_one());
    let s3 = Group::symmetric(3);
    let c = Cocycle::trivial(s3.clone(), 1);
    let (x, y) = (1, 2);
    if s3.mul(x, y) != s3.mul(y, x) {
        assert_eq!(
            binomial_lambda(&c, &[x, y], &[1, 0]),
            Err(PolyError::ProductsDisagree)
        );
    }
    assert!(matches!(
        binomial_lambda(&bil, &[A, B], &[0, 0]),
        Err(PolyError::InvalidPermutation(_))
    ));

    let pb = build_binomial(&bil, &[A, B], &[1, 0]).unwrap();
    assert_eq!(pb.monomials(), &[mono(1, &[0, 1]), mono(1, &[1, 0])]);
    let pt = build_binomial(&triv, &[A, B], &[1, 0]).unwrap();
    assert_eq!(pt.monomials(), &[mono(1, &[0, 1]), mono(-1, &[1, 0])]);
    assert!(is_identity(&pb, &fine(bil.clone()), DEFAULT_BUDGET).is_identity());
    assert!(is_identity(&pb, &fine(triv.clone()), DEFAULT_BUDGET).is_non_identity());
    assert!(is_identity(&pt, &fine(triv), DEFAULT_BUDGET).is_identity());
    assert!(is_identity(&pt, &fine(bil), DEFAULT_BUDGET).is_non_identity());
}

#[test]
fn regev_small() {
    let r1 = regev(1, 0, 0);
    let c2 = elementary(Group::cyclic(2), vec![0]);
    let v = evaluate_basis(&r1, &c2, &assign(&[(0, sb(0, 0, 0)), (1, sb(0, 0, 0))])).unwrap();
    assert_eq!(v, AlgebraElement::basis(sb(0, 0, 0)));

    let r2 = regev(2, 0, 0);
    assert_eq!(r2.variables().len(), 8);
    assert_eq!(r2.expanded_len(), 576);
    assert_eq!(r2.expanded(1000).unwrap().len(), 576);
    let m2 = elementary(Group::cyclic(1), vec![0, 0]);
    let units: Vec<StdBasisElement> = (0..2)
        .flat_map(|i| (0..2).map(move |j| sb(0, i, j)))
        .collect();
    let mut a = BasisAssignment::new();
    for k in 0..4 {
        a.insert(VarId(k), units[k as usize]);
        a.insert(VarId(4 + k), units[(3 - k) as usize]);
    }
    let v = evaluate_basis(&r2, &m2, &a).unwrap();
    assert_eq!(v.terms().len(), 2);
    let c = v.terms()[&sb(0, 0, 0)].clone();
    assert!(!c.is_zero());
    assert_eq!(v.terms()[&sb(0, 1, 1)], c);
    let brute = brute_evaluate(
        &r2,
        &m2,
        &a.iter()
            .map(|(k, b)| (*k, AlgebraElement::basis(*b)))
            .collect(),
    );
    assert_eq!(v, brute);
    // one unit missing from X
    a.insert(VarId(1), units[0]);
    assert!(evaluate_basis(&r2, &m2, &a).unwrap().is_zero());
    // r = 2 is central on M_2: a nonidentity that commutes with everything
    assert!(is_identity(&r2, &m2, DEFAULT_BUDGET).is_non_identity());
}

#[test]
fn regev_three_is_central() {
    let r3 = regev(3, 0, 0);
    let m3 = elementary(Group::cyclic(1), vec![0, 0, 0]);
    let units: Vec<StdBasisElement> = (0..3)
        .flat_map(|i| (0..3).map(move |j| sb(0, i, j)))
        .collect();
    let mut a = BasisAssignment::new();
    for k in 0..9 {
        a.insert(VarId(k), units[k as usize]);
        a.insert(VarId(9 + k), units[k as usize]);
    }
    let v = evaluate_basis(&r3, &m3, &a).unwrap();
    let c = v.terms()[&sb(0, 0, 0)].clone();
    assert!(!c.is_zero());
    assert_eq!(
        v,
        (0..3).fold(AlgebraElement::zero(), |acc, i| acc
            .add(&AlgebraElement::term(sb(0, i, i), c.clone())))
    );
}

#[test]
fn separator_examples() {
    let bil = bilinear_v4();
    let triv = Cocycle::trivial(Group::klein_four(), 1);
    let s = build_cocycle_separator(&bil, std::slice::from_ref(&triv), 1).unwrap();
    assert!(!s.degenerate);
    assert_eq!(
        s.polynomial.monomials(),
        &[mono(1, &[0, 1]), mono(-1, &[1, 0])]
    );
    assert!(is_identity(&s.polynomial, &fine(triv.clone()), DEFAULT_BUDGET).is_identity());
    assert!(is_identity(&s.polynomial, &fine(bil.clone()), DEFAULT_BUDGET).is_non_identity());

    let s = build_cocycle_separator(&triv, std::slice::from_ref(&bil), 1).unwrap();
    assert_eq!(
        s.polynomial.monomials(),
        &[mono(1, &[0, 1]), mono(1, &[1, 0])]
    );
    assert!(is_identity(&s.polynomial, &fine(bil.clone()), DEFAULT_BUDGET).is_identity());
    assert!(is_identity(&s.polynomial, &fine(triv.clone()), DEFAULT_BUDGET).is_non_identity());

    let d = build_cocycle_separator(&bil, &[], 1).unwrap();
    assert!(d.degenerate);
    assert_eq!(d.polynomial.variables(), &[var(0, 0)]);

    assert_eq!(
        build_cocycle_separator(&bil, std::slice::from_ref(&bil), 1).unwrap_err(),
        PolyError::CocyclesCohomologous(0)
    );
}

#[test]
fn separator_with_regev() {
    let bil = bilinear_v4();
    let triv = Cocycle::trivial(Group::klein_four(), 1);
    let s = build_cocycle_separator(&bil, std::slice::from_ref(&triv), 2).unwrap();
    assert_eq!(s.polynomial.composition().len(), 2);
    let g = Group::klein_four();
    let on = |c: &Cocycle| Presentation::new(g.clone(), g.whole(), c.clone(), vec![0, 0]).unwrap();
    assert!(is_identity(&s.polynomial, &on(&triv), DEFAULT_BUDGET).is_identity());
    match is_identity(&s.polynomial, &on(&bil), DEFAULT_BUDGET) {
        IdentityVerdict::NonIdentity { witness, value } => {
            assert_eq!(
                evaluate_basis(&s.polynomial, &on(&bil), &witness).unwrap(),
                value
            );
        }
        v => panic!("{v:?}"),
    }
}

fn eval_witness(p: &Probe, pres: &Presentation) -> AlgebraElement {
    evaluate_basis(&p.polynomial, pres, &p.witness).unwrap()
}

#[test]
fn block_probe_examples() {
    let c2 = Group::cyclic(2);
    let f = fine(Cocycle::trivial(c2.clone(), 1));
    let p = build_block_probe(&f, &c2.trivial_subgroup()).unwrap();
    assert_eq!(p.designated.iter().map(Vec::len).sum::<usize>(), 1);
    assert!(!eval_witness(&p, &f).is_zero());

    let el = elementary(c2.clone(), vec![0, 1]);
    let p = build_block_probe(&el, &c2.trivial_subgroup()).unwrap();
    let bridges: Vec<&GradedVariable> = p
        .polynomial
        .variables()
        .iter()
        .filter(|v| v.tag == VarTag::Bridge)
        .collect();
    assert_eq!(bridges.len(), 1);
    assert_eq!(bridges[0].degree, 1);
    assert_eq!(p.witness[&bridges[0].id], sb(0, 0, 1));
    assert_eq!(p.designated.len(), 2);
    let v = eval_witness(&p, &el);
    assert_eq!(v, AlgebraElement::basis(sb(0, 0, 1)));

    let p = build_block_probe(&el, &c2.whole()).unwrap();
    assert!(p
        .polynomial
        .variables()
        .iter()
        .all(|v| v.tag != VarTag::Bridge));
    assert_eq!(p.designated.iter().map(Vec::len).sum::<usize>(), 4);
    assert!(!eval_witness(&p, &el).is_zero());
}

#[test]
fn global_probe_examples() {
    let c2 = Group::cyclic(2);
    let el = elementary(c2.clone(), vec![0, 1]);
    let g = build_global_probe(&el, false, DEFAULT_SIZE_CAP).unwrap();
    let b = build_block_probe_scoped(&el, &c2.trivial_subgroup(), AlternationScope::PerSegment)
        .unwrap();
    assert_eq!(g.polynomial, b.polynomial);

    let f = fine(bilinear_v4());
    let g = build_global_probe(&f, false, DEFAULT_SIZE_CAP).unwrap();
    let b = build_block_probe(&f, &Group::klein_four().whole()).unwrap();
    assert_eq!(g.polynomial, b.polynomial);

    let g = build_global_probe(&f, true, DEFAULT_SIZE_CAP).unwrap();
    assert!(g.polynomial.monomials().len() > 1);
    assert!(!eval_witness(&g, &f).is_zero());
    assert!(matches!(
        build_global_probe(&f, true, 3),
        Err(PolyError::BudgetExceeded { .. })
    ));
}

#[test]
fn json_roundtrip() {
    let s = build_cocycle_separator(
        &bilinear_v4(),
        &[Cocycle::trivial(Group::klein_four(), 1)],
        2,
    )
    .unwrap();
    let text = serde_json::to_string(&s.polynomial).unwrap();
    let back: GradedPolynomial = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s.polynomial);
    let bad = r#"{"variables":[{"id":0,"degree":0,"tag":"plain"}],"monomials":[{"coefficient":{"n":1,"coeffs":["1"]},"factors":[0,0]}]}"#;
    assert!(serde_json::from_str::<GradedPolynomial>(bad).is_err());
}

#[test]
fn render_notation() {
    let p = build_binomial(&bilinear_v4(), &[A, B], &[1, 0]).unwrap();
    let text = p.render(&Group::klein_four());
    assert_eq!(text, "x_{0,a} x_{1,b} + x_{1,b} x_{0,a}");
}

fn random_element(pres: &Presentation, degree: Elem, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for &b in pres.tables().basis_of_degree(degree) {
        let c = rng.gen_range(-2i64..3);
        out.add_term(pres.basis_element(b), CycloScalar::from_int(1, c));
    }
    out
}

/// A random polynomial of 2 to 4 variables with degrees drawn from the
/// support, 1 to 3 monomials and a random alternation.
fn random_poly(pres: &Presentation, rng: &mut ChaCha8Rng) -> GradedPolynomial {
    let support: Vec<Elem> = pres
        .ambient()
        .elements()
        .filter(|&g| !pres.tables().basis_of_degree(g).is_empty())
        .collect();
    let k = rng.gen_range(2..5u32);
    let deg0 = support[rng.gen_range(0..support.len())];
    let vars: Vec<GradedVariable> = (0..k)
        .map(|i| {
            let d = if i < 2 {
                deg0
            } else {
                support[rng.gen_range(0..support.len())]
            };
            var(i, d)
        })
        .collect();
    let mut monomials = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        let mut f: Vec<u32> = (0..k).collect();
        for i in (1..f.len()).rev() {
            f.swap(i, rng.gen_range(0..=i));
        }
        monomials.push(mono(rng.gen_range(-2i64..3), &f));
    }
    let p = GradedPolynomial::new(vars, monomials).unwrap();
    if rng.gen_bool(0.5) {
        p.alternate(&[vec![VarId(0), VarId(1)]]).unwrap()
    } else {
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_matches_expansion(pres in arb_presentation(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&pres, &mut rng);
        let a: BTreeMap<VarId, AlgebraElement> = p
            .variables()
            .iter()
            .map(|v| (v.id, random_element(&pres, v.degree, &mut rng)))
            .collect();
        prop_assert_eq!(evaluate(&p, &pres, &a).unwrap(), brute_evaluate(&p, &pres, &a));
    }

    #[test]
    fn verdicts_agree_with_random_evaluation(pres in arb_presentation(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&pres, &mut rng);
        let verdict = is_identity(&p, &pres, DEFAULT_BUDGET);
        prop_assert_eq!(&verdict, &is_identity_with(&p, &pres, DEFAULT_BUDGET, 3));
        match verdict {
            IdentityVerdict::Identity { .. } => {
                for _ in 0..5 {
                    let a: BTreeMap<VarId, AlgebraElement> = p
                        .variables()
                        .iter()
                        .map(|v| (v.id, random_element(&pres, v.degree, &mut rng)))
                        .collect();
                    prop_assert!(evaluate(&p, &pres, &a).unwrap().is_zero());
                }
            }
            IdentityVerdict::NonIdentity { witness, value } => {
                prop_assert!(!value.is_zero());
                prop_assert_eq!(evaluate_basis(&p, &pres, &witness).unwrap(), value);
            }
            IdentityVerdict::Inconclusive { .. } => prop_assert!(false, "small polynomials fit the budget"),
        }
    }

    #[test]
    fn alternation_antisymmetry(pres in arb_presentation(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&pres, &mut rng).alternate_mixed(&[]).unwrap();
        let p = if p.alternation().is_empty() {
            p.alternate(&[vec![VarId(0), VarId(1)]]).unwrap()
        } else {
            p
        };
        let swapped: Vec<GradedMonomial> = p
            .expanded(u128::MAX)
            .unwrap()
            .into_iter()
            .map(|m| GradedMonomial {
                coefficient: -&m.coefficient,
                factors: m
                    .factors
                    .iter()
                    .map(|&v| match v.0 { 0 => VarId(1), 1 => VarId(0), _ => v })
                    .collect(),
            })
            .collect();
        let mut swapped = swapped;
        swapped.sort_by(|a, b| a.factors.cmp(&b.factors));
        prop_assert_eq!(p.expanded(u128::MAX).unwrap(), swapped);
    }

    #[test]
    fn probes_allocate(pres in arb_presentation(), which in 0usize..3) {
        let g = pres.ambient();
        let t: Subgroup = match which {
            0 => g.trivial_subgroup(),
            1 => pres.subgroup().clone(),
            _ => g.whole(),
        };
        let probe = build_block_probe(&pres, &t).unwrap();
        prop_assert!(!eval_witness(&probe, &pres).is_zero());
        // the bare word at the witness
        let word = GradedPolynomial::monomial(
            probe.word.iter().map(|v| probe.polynomial.variable(*v).unwrap().clone()).collect(),
        );
        prop_assert!(!evaluate_basis(&word, &pres, &probe.witness).unwrap().is_zero());
        // transposing two designated values of one set kills the word
        for set in &probe.designated {
            for x in 0..set.len() {
                for y in x + 1..set.len() {
                    let mut w = probe.witness.clone();
                    let (bx, by) = (w[&set[x]], w[&set[y]]);
                    w.insert(set[x], by);
                    w.insert(set[y], bx);
                    prop_assert!(evaluate_basis(&word, &pres, &w).unwrap().is_zero());
                }
            }
        }
        // replacing a designated value by another of its degree kills it too
        let tables = pres.tables();
        for set in &probe.designated {
            let v = set[0];
            let own = pres.basis_index(&probe.witness[&v]).unwrap();
            for &b in tables.basis_of_degree(tables.degree(own)) {
                if b != own {
                    let mut w = probe.witness.clone();
                    w.insert(v, pres.basis_element(b));
                    prop_assert!(evaluate_basis(&word, &pres, &w).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn global_probe_witness(pres in arb_presentation(), with_regev in any::<bool>()) {
        if pres.matrix_size() <= 2 {
            let probe = build_global_probe(&pres, with_regev, DEFAULT_SIZE_CAP).unwrap();
            prop_assert!(!eval_witness(&probe, &pres).is_zero());
        }
    }
}
