mod common;

use std::sync::OnceLock;

use common::*;
use forestconn::exactnum::{
    compare_to_exp, exp_enclosure, from_natural, ratio, ExactRational, ExpOrdering,
};
use forestconn::forestcount::{partial_egf_sum, CountTable};
use forestconn::sampler::{prufer_decode, prufer_encode, PruferSequence};
use forestconn::weightmodel::{
    conn_prob_weighted, forest_counts_by_component_count, forest_mass_total,
    mass_by_component_count, rhs_theorem, tree_mass_total, verify_kappa_ratio, verify_massk,
    WeightVector,
};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

fn rational(lo: i64, hi: i64, den_max: i64) -> impl Strategy<Value = ExactRational> {
    (1..=den_max).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| ratio(n, d)))
}

fn any_rational() -> impl Strategy<Value = ExactRational> {
    (-10_000i64..=10_000, 1i64..=500).prop_map(|(n, d)| ratio(n, d))
}

fn weights(t_max: usize, w_max: u64) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(1..=w_max, 1..=t_max).prop_map(|w| WeightVector::new(w).unwrap())
}

type EdgeList = Vec<(usize, usize)>;

/// Trees on `[t]` for `t <= 7`, from the brute-force enumerator.
fn trees(t: usize) -> &'static [EdgeList] {
    static TREES: OnceLock<Vec<Vec<EdgeList>>> = OnceLock::new();
    &TREES.get_or_init(|| {
        (0..=7)
            .map(|t| {
                brute_forests(t)
                    .into_iter()
                    .filter(|f| f.len() + 1 == t)
                    .collect()
            })
            .collect()
    })[t]
}

fn table() -> &'static CountTable {
    static TABLE: OnceLock<CountTable> = OnceLock::new();
    TABLE.get_or_init(|| CountTable::with_n_max(200))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exp_enclosure_contains_oracle(x in rational(-13, 1, 97), terms in prop::sample::select(vec![10u32, 20, 40])) {
        let iv = exp_enclosure(&x, terms);
        let truth = exp_oracle(&x);
        let tol = oracle_tolerance();
        prop_assert!(iv.lo() <= &(&truth + &tol));
        prop_assert!(iv.hi() >= &(&truth - &tol));
    }

    #[test]
    fn exp_width_halves_when_terms_double(x in rational(-1, 1, 97), terms in prop::sample::select(vec![10u32, 20])) {
        let coarse = exp_enclosure(&x, terms).width();
        let fine = exp_enclosure(&x, 2 * terms).width();
        prop_assert!(fine * ratio(2, 1) <= coarse);
    }

    #[test]
    fn rational_field_laws(a in any_rational(), b in any_rational(), c in any_rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let sum = &a + &b;
        prop_assert!(sum.numer().gcd(sum.denom()).is_one());
    }

    #[test]
    fn prufer_bijection(entries in (3usize..=10).prop_flat_map(|t| prop::collection::vec(0..t, t - 2).prop_map(move |e| (t, e)))) {
        let (t, entries) = entries;
        let seq = PruferSequence::new(t, entries).unwrap();
        let tree = prufer_decode(&seq);
        prop_assert_eq!(tree.edges().len(), t - 1);
        prop_assert_eq!(components_of(t, tree.edges()), 1);
        prop_assert_eq!(prufer_encode(&tree).unwrap(), seq);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generalized_cayley(w in weights(7, 9)) {
        let brute: BigUint = trees(w.t()).iter().map(|f| brute_mass(w.weights(), f)).sum();
        prop_assert_eq!(&tree_mass_total(&w), &brute);
        let product: BigUint = w.weights().iter().map(|&x| BigUint::from(x)).product();
        let formula = from_natural(&product) * ratio(w.total() as i64, 1).pow(w.t() as i32 - 2);
        prop_assert_eq!(from_natural(&brute), formula);
    }

    #[test]
    fn component_masses_decompose_total(w in weights(9, 9)) {
        let sum: BigUint = (1..=w.t()).map(|k| mass_by_component_count(&w, k).unwrap()).sum();
        prop_assert_eq!(sum, forest_mass_total(&w).unwrap());
    }

    #[test]
    fn conn_prob_weighted_bounds(w in weights(8, 9)) {
        let p = conn_prob_weighted(&w).unwrap();
        prop_assert!(p >= table().conn_prob(w.t()));
        let t_over_n = ratio(w.t() as i64, w.total() as i64);
        prop_assert_eq!(compare_to_exp(&p, &t_over_n), ExpOrdering::Greater);
    }

    #[test]
    fn conn_prob_weighted_is_symmetric(w in weights(7, 9), rot in 0usize..7) {
        let mut ws = w.weights().to_vec();
        let r = rot % ws.len();
        ws.rotate_left(r);
        ws.reverse();
        let permuted = WeightVector::new(ws).unwrap();
        prop_assert_eq!(conn_prob_weighted(&w).unwrap(), conn_prob_weighted(&permuted).unwrap());
    }

    #[test]
    fn kappa_ratio_holds(w in weights(7, 9)) {
        prop_assert!(verify_kappa_ratio(&w).unwrap().holds());
    }

    #[test]
    fn rhs_theorem_is_a_minimum(n in 1usize..=200, num in 1i64..=9) {
        let alpha = ratio(num, 10);
        let (t_star, value) = rhs_theorem(table(), n, &alpha).unwrap();
        let t_min = (num as usize * n) / 10 + 1;
        prop_assert!(t_star >= t_min && t_star <= n);
        for t in t_min..=n {
            prop_assert!(value <= table().conn_prob(t));
        }
        prop_assert_eq!(value, table().conn_prob(t_star));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn massk_random_sweep(w in prop::collection::vec(1u64..=9, 3..=7).prop_map(|w| WeightVector::new(w).unwrap())) {
        for k in 1..=w.t() {
            prop_assert!(verify_massk(&w, k).unwrap(), "w={} k={}", w, k);
        }
    }
}

#[test]
fn massk_exhaustive_small_grid() {
    for t in 3..=7usize {
        let base = 3u64;
        for idx in 0..base.pow(t as u32) {
            let mut rest = idx;
            let ws: Vec<u64> = (0..t)
                .map(|_| {
                    let d = rest % base;
                    rest /= base;
                    d + 1
                })
                .collect();
            let w = WeightVector::new(ws).unwrap();
            for k in 1..=t {
                assert!(verify_massk(&w, k).unwrap(), "w={w} k={k}");
            }
        }
    }
}

#[test]
fn unit_component_counts_match_enumeration() {
    for t in 1..=7 {
        let mut by_k = vec![BigUint::from(0u32); t];
        for f in brute_forests(t) {
            by_k[components_of(t, &f) - 1] += 1u32;
        }
        assert_eq!(forest_counts_by_component_count(t).unwrap(), by_k);
    }
}

#[test]
fn conn_prob_in_unit_interval() {
    let one = ratio(1, 1);
    assert_eq!(table().conn_prob(1), one);
    for n in 2..=200 {
        let p = table().conn_prob(n);
        assert!(p > ratio(0, 1) && p < one, "n={n}");
    }
}

#[test]
fn egf_partial_sums_increase() {
    let t = CountTable::with_n_max(12);
    for k in 0..12 {
        let a = partial_egf_sum(&t, k, 40);
        let b = partial_egf_sum(&t, k + 1, 40);
        assert!(b.lo() > a.hi(), "k={k}");
    }
}

#[test]
fn lemma_bound_for_small_n() {
    let third = ratio(1, 3);
    for n in 2..=200 {
        assert_eq!(
            compare_to_exp(&table().conn_prob(n), &third),
            ExpOrdering::Less,
            "n={n}"
        );
    }
}

#[test]
fn egf_sum_matches_oracle() {
    let t = CountTable::with_n_max(6);
    let e_inv = exp_oracle(&ratio(-1, 1));
    let mut direct = ratio(0, 1);
    for j in 0..=2 {
        direct += q(t.forests(j), &factorial(j)) * e_inv.pow(j as i32);
    }
    let iv = partial_egf_sum(&t, 2, 40);
    let tol = oracle_tolerance();
    assert!(iv.lo() <= &(&direct + &tol) && iv.hi() >= &(&direct - &tol));
}
