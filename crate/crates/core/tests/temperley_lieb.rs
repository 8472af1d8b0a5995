use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tnngrass::families::random_complementary_expression;
use tnngrass::index_set::catalan;
use tnngrass::numeric::{generate_tp_matrix, BidiagonalWeights};
use tnngrass::tl::{jones_normal_forms, verify_decomposition, Permutation, TLWord, TemperleyLieb};
use tnngrass::{certificate_sums, int, ratio, Matching, Rational};

#[test]
fn basis_has_catalan_size() {
    for n in 1..=8 {
        assert_eq!(jones_normal_forms(n).len() as u128, catalan(n));
        let alg = TemperleyLieb::new(n).unwrap();
        assert_eq!(alg.basis().len() as u128, catalan(n));
    }
}

#[test]
fn matchings_are_a_bijection() {
    for n in 1..=6 {
        let alg = TemperleyLieb::new(n).unwrap();
        let images: BTreeSet<Matching> = alg.basis().iter().map(|w| alg.to_matching(w).unwrap()).collect();
        assert_eq!(images.len() as u128, catalan(n));
    }
}

#[test]
fn products_of_generators_land_in_the_basis() {
    for n in 2..=4 {
        let alg = TemperleyLieb::new(n).unwrap();
        let basis: BTreeSet<&TLWord> = alg.basis().iter().collect();
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &words {
                for g in 1..n {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            for w in &next {
                let e = alg.word(w).unwrap();
                let terms: Vec<_> = e.terms().collect();
                assert_eq!(terms.len(), 1, "{w:?}");
                let (nf, coeff) = terms[0];
                assert!(basis.contains(nf));
                assert!(coeff.is_positive());
                // Reducing the normal form again is a fixed point.
                assert_eq!(alg.word(nf.generators()).unwrap(), alg.basis_element(nf));
            }
            words = next;
        }
    }
}

#[test]
fn multiplication_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 2..=5 {
        let alg = TemperleyLieb::new(n).unwrap();
        let random = |rng: &mut ChaCha8Rng| {
            let mut e = alg.basis_element(alg.basis().choose(rng).unwrap()).scale(&int(rng.gen_range(-3..=3)));
            for _ in 0..3 {
                let w = alg.basis().choose(rng).unwrap();
                e = e.add(&alg.basis_element(w).scale(&ratio(rng.gen_range(-3..=3), rng.gen_range(1..4))));
            }
            e
        };
        for _ in 0..30 {
            let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
            let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}

fn random_permutation(n: usize, rng: &mut impl Rng) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

/// A uniformly chosen right descent is peeled off at each step, so
/// different calls give different reduced words of the same permutation.
fn random_reduced_word(w: &Permutation, rng: &mut impl Rng) -> Vec<usize> {
    let mut cur = w.one_line().to_vec();
    let mut word = Vec::new();
    loop {
        let descents: Vec<usize> = (0..cur.len().saturating_sub(1)).filter(|&i| cur[i] > cur[i + 1]).collect();
        let Some(&i) = descents.choose(rng) else { break };
        cur.swap(i, i + 1);
        word.push(i + 1);
    }
    word.reverse();
    word
}

#[test]
fn sigma_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for n in 1..=5 {
        let alg = TemperleyLieb::new(n).unwrap();
        for _ in 0..30 {
            let u = random_permutation(n, &mut rng);
            let w = random_permutation(n, &mut rng);
            let lhs = alg.sigma(&u.compose(&w)).unwrap();
            let rhs = alg.multiply(&alg.sigma(&u).unwrap(), &alg.sigma(&w).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "u = {u}, w = {w}");
        }
    }
}

#[test]
fn sigma_ignores_the_choice_of_reduced_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for n in 1..=5 {
        let alg = TemperleyLieb::new(n).unwrap();
        for w in Permutation::all(n) {
            let want = alg.sigma(&w).unwrap();
            for _ in 0..5 {
                let word = random_reduced_word(&w, &mut rng);
                assert_eq!(word.len(), w.inversions());
                assert_eq!(alg.sigma_of_word(&word).unwrap(), want, "{w} via {word:?}");
            }
        }
    }
}

#[test]
fn decomposition_identity() {
    for n in 1..=4 {
        assert!(verify_decomposition(n).unwrap(), "n = {n}");
    }
}

fn random_tp(n: usize, rng: &mut impl Rng) -> tnngrass::RationalMatrix {
    let pairs = n * (n - 1) / 2;
    let mut draw = |k: usize| -> Vec<Rational> {
        (0..k).map(|_| ratio(rng.gen_range(1..12), rng.gen_range(1..12))).collect()
    };
    let w = BidiagonalWeights {
        lower: draw(pairs),
        upper: draw(pairs),
        diag: draw(n),
    };
    generate_tp_matrix(n, &w).unwrap()
}

#[test]
fn immanants_are_nonnegative_on_tp_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for n in 1..=4 {
        let alg = TemperleyLieb::new(n).unwrap();
        for _ in 0..100 {
            let a = random_tp(n, &mut rng);
            let values = alg.immanants(&a).unwrap();
            assert!(values.iter().all(|v| !v.is_negative()), "{a}");
            // Imm_1 is the determinant.
            assert_eq!(alg.immanant(&TLWord::unit(), &a).unwrap(), a.determinant().unwrap());
        }
    }
}

#[test]
fn certificate_rows_are_tl_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for n in 1..=4 {
        let alg = TemperleyLieb::new(n).unwrap();
        let by_matching: BTreeMap<Matching, TLWord> =
            alg.basis().iter().map(|w| (alg.to_matching(w).unwrap(), w.clone())).collect();
        for _ in 0..50 {
            let e = random_complementary_expression(n, 5, &mut rng);
            if e.is_empty() {
                continue;
            }
            for row in certificate_sums(&e, false).unwrap() {
                let tau = &by_matching[&row.matching];
                let mut want = int(0);
                for t in e.terms() {
                    let b = alg.b_vector(&t.left).unwrap();
                    if b.iter().any(|(w, hit)| w == tau && *hit) {
                        want += &t.coeff;
                    }
                }
                assert_eq!(row.sum, want, "{e} at {}", row.matching);
            }
        }
    }
}
