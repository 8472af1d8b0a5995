use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tnngrass::families::{
    bj_expression, check_lattice_closure, logsupmod_expression, lpp_expression, FamilySpec, LatticeClosure,
};
use tnngrass::index_set::subsets;
use tnngrass::numeric::{generate_test_point, positroid, CompiledExpression, IntegerPlucker, SampleMode};
use tnngrass::{certificate_sums, decide, decide_principal, int, ratio, GrassmannContext, IndexSet, Rational};

fn s(v: &[usize]) -> IndexSet {
    IndexSet::new(v.iter().copied()).unwrap()
}

#[test]
fn logsupmod_is_valid_for_small_grassmannians() {
    for m in 1..=3 {
        for n in m..=6 - m {
            let ctx = GrassmannContext::new(m, n).unwrap();
            let sets = subsets(m + n, m);
            for i in &sets {
                for j in &sets {
                    let e = logsupmod_expression(i, j, ctx).unwrap();
                    assert!(e.len() <= 2);
                    assert!(decide(&e).is_valid(), "{i} {j}");
                }
            }
        }
    }
}

#[test]
fn logsupmod_holds_at_test_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ctx = GrassmannContext::new(3, 4).unwrap();
    let sets = subsets(7, 3);
    let points: Vec<IntegerPlucker> = (0..20)
        .map(|seed| {
            let mode = if seed % 2 == 0 { SampleMode::Embedded } else { SampleMode::Structured };
            IntegerPlucker::new(&generate_test_point(ctx, mode, seed, 5))
        })
        .collect();
    for _ in 0..200 {
        use rand::seq::SliceRandom;
        let i = sets.choose(&mut rng).unwrap();
        let j = sets.choose(&mut rng).unwrap();
        let e = CompiledExpression::new(&logsupmod_expression(i, j, ctx).unwrap());
        assert!(points.iter().all(|p| e.sign(p) >= 0));
    }
}

#[test]
fn bj_is_valid_and_principal() {
    for n in 2..=6 {
        for k in 0..n / 2 {
            let e = bj_expression(n, k).unwrap();
            assert!(e.is_principal().unwrap());
            assert!(decide(&e).is_valid(), "n = {n}, k = {k}");
            assert!(decide_principal(&e).unwrap().is_valid(), "n = {n}, k = {k}");
        }
        assert!(bj_expression(n, n / 2).is_err());
    }
    assert!(bj_expression(1, 0).is_err());
}

#[test]
fn bj_small_cases() {
    // n = 2 is a11 a22 - det A, i.e. Δ13 Δ24 - Δ12 Δ34.
    let e = bj_expression(2, 0).unwrap().normalize();
    let mut terms: Vec<(Rational, IndexSet, IndexSet)> =
        e.terms().iter().map(|t| (t.coeff.clone(), t.left.clone(), t.right.clone())).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(
        terms,
        vec![(int(-1), s(&[3, 4]), s(&[1, 2])), (int(1), s(&[1, 3]), s(&[2, 4]))]
    );

    let e = bj_expression(3, 0).unwrap();
    let mut plain: Vec<Rational> = certificate_sums(&e, false).unwrap().into_iter().map(|r| r.sum).collect();
    plain.sort();
    assert_eq!(plain, vec![int(0), ratio(1, 3), ratio(1, 3), ratio(2, 3), ratio(2, 3)]);
    let mut sym: Vec<Rational> = certificate_sums(&e, true).unwrap().into_iter().map(|r| r.sum).collect();
    sym.sort();
    assert_eq!(sym, vec![int(0), ratio(2, 3), ratio(2, 3)]);
}

#[test]
fn lpp_is_valid_for_small_matrices() {
    for n in 1..=3 {
        for k in 0..=n {
            let sets = subsets(n, k);
            for p in &sets {
                for q in &sets {
                    for r in &sets {
                        for t in &sets {
                            let e = lpp_expression(p, q, r, t, n).unwrap();
                            assert!(decide(&e).is_valid(), "{p} {q} {r} {t}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn family_specs_build() {
    let ctx = GrassmannContext::new(2, 2).unwrap();
    let specs = [
        FamilySpec::LogSupMod { ctx, i: s(&[1, 4]), j: s(&[2, 3]) },
        FamilySpec::Lpp { n: 2, p: s(&[1]), q: s(&[2]), r: s(&[2]), s: s(&[1]) },
        FamilySpec::Bj { n: 4, k: 1 },
        FamilySpec::PlueckerRelation { ctx, common: IndexSet::empty(), points: [1, 2, 3, 4] },
    ];
    for spec in &specs {
        assert!(decide(&spec.build().unwrap()).is_valid(), "{spec:?}");
    }
    assert_eq!(specs[0].build().unwrap(), specs[1].build().unwrap());
}

#[test]
fn positroids_are_lattices() {
    for m in 1..=4 {
        for n in m..=8 - m {
            let ctx = GrassmannContext::new(m, n).unwrap();
            for seed in 0..100 {
                let mode = if seed % 4 == 0 { SampleMode::Embedded } else { SampleMode::Structured };
                let pt = generate_test_point(ctx, mode, seed, 3);
                let sets = positroid(&pt);
                let closure = check_lattice_closure(&sets).unwrap();
                assert_eq!(closure, LatticeClosure::Closed, "{ctx} seed {seed}");
            }
        }
    }
}

#[test]
fn lattice_closure_witness() {
    let closure = check_lattice_closure(&[s(&[1, 4]), s(&[2, 3])]).unwrap();
    assert!(!closure.is_closed());
    let LatticeClosure::Violated { min, max, .. } = closure else {
        unreachable!()
    };
    assert_eq!((min, max), (s(&[1, 3]), s(&[2, 4])));
    assert!(check_lattice_closure(&[s(&[1]), s(&[1, 2])]).is_err());
}
