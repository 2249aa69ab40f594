mod common;

use std::collections::BTreeMap;

use common::*;
use forestconn::exactnum::{exp_enclosure, from_natural, ratio, ExactRational};
use forestconn::forestcount::{count_forests, frag_count, CountTable};
use forestconn::graphcore::{
    alterable_closure, equiv_classes, is_bridge_alterable, random_seed_class, verify_theorem,
    GraphClass, LabeledGraph,
};
use forestconn::sampler::RngHandle;
use forestconn::weightmodel::{
    forest_counts_by_component_count, forest_mass_total, mass, masses_by_component_count,
    tree_mass_total, Forest, WeightVector,
};
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

fn random_weights(rng: &mut RngHandle, t: usize, max: u64) -> WeightVector {
    WeightVector::new((0..t).map(|_| rng.gen_range(1..=max)).collect()).unwrap()
}

#[test]
fn exp_enclosures_contain_oracle() {
    let tol = oracle_tolerance();
    for (num, den) in [
        (1, 1),
        (-1, 1),
        (-1, 3),
        (-12, 25),
        (-13, 1),
        (1, 2),
        (-7, 2),
        (5, 7),
    ] {
        let x = ratio(num, den);
        let truth = exp_oracle(&x);
        for terms in [10, 20, 40, 80] {
            let iv = exp_enclosure(&x, terms);
            assert!(iv.lo() <= &(&truth + &tol), "x={x} terms={terms}");
            assert!(iv.hi() >= &(&truth - &tol), "x={x} terms={terms}");
        }
    }
}

#[test]
fn exp_of_one_is_tight() {
    let iv = exp_enclosure(&ratio(1, 1), 30);
    assert!(iv.width() < ratio(1, 10i64.pow(18)) * ratio(1, 100));
    let truth = exp_oracle(&ratio(1, 1));
    let tol = oracle_tolerance();
    assert!(iv.lo() <= &(&truth + &tol) && iv.hi() >= &(&truth - &tol));
}

#[test]
fn forest_counts_match_enumeration() {
    for n in 0..=7 {
        let forests = brute_forests(n);
        assert_eq!(count_forests(n), BigUint::from(forests.len()), "n={n}");
        if n >= 1 {
            let mut by_k = vec![BigUint::from(0u32); n];
            for f in &forests {
                by_k[components_of(n, f) - 1] += 1u32;
            }
            assert_eq!(forest_counts_by_component_count(n).unwrap(), by_k, "n={n}");
        }
    }
}

#[test]
fn frag_histogram_matches_enumeration() {
    let table = CountTable::with_n_max(8);
    for n in 1..=8 {
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        let forests = brute_forests(n);
        for f in &forests {
            let largest = component_sizes(n, f).into_iter().max().unwrap();
            *hist.entry(n - largest).or_default() += 1;
        }
        assert_eq!(hist.values().sum::<u64>(), forests.len() as u64);
        assert_eq!(BigUint::from(forests.len()), *table.forests(n));
        for j in 0..n.div_ceil(2) {
            let expected = hist.get(&j).copied().unwrap_or(0);
            assert_eq!(
                frag_count(&table, n, j).unwrap(),
                BigUint::from(expected),
                "n={n} j={j}"
            );
        }
    }
}

#[test]
fn forest_mass_dp_matches_enumeration() {
    let mut rng = RngHandle::new(2024);
    for t in 1..=7 {
        let forests = brute_forests(t);
        let mut vectors = vec![WeightVector::unit(t)];
        vectors.extend((0..6).map(|_| random_weights(&mut rng, t, 9)));
        for w in vectors {
            let by_k = brute_masses_by_k(w.weights(), &forests);
            let total: BigUint = by_k.iter().sum();
            assert_eq!(forest_mass_total(&w).unwrap(), total, "w={w}");
            assert_eq!(masses_by_component_count(&w).unwrap(), by_k, "w={w}");
            assert_eq!(tree_mass_total(&w), by_k[0], "w={w}");
        }
    }
}

#[test]
fn mass_matches_degree_product() {
    let mut rng = RngHandle::new(5);
    for t in 1..=6 {
        let w = random_weights(&mut rng, t, 9);
        for f in brute_forests(t) {
            let forest = Forest::new(t, f.iter().copied()).unwrap();
            assert_eq!(mass(&forest, &w).unwrap(), brute_mass(w.weights(), &f));
        }
    }
}

#[test]
fn mass_is_multiplicative_over_components() {
    let mut rng = RngHandle::new(6);
    for t in 1..=6 {
        let w = random_weights(&mut rng, t, 9);
        for f in brute_forests(t) {
            let forest = Forest::new(t, f.iter().copied()).unwrap();
            let mut product = BigUint::from(1u32);
            for comp in forest.components() {
                let local = |v: usize| comp.iter().position(|&c| c == v).unwrap();
                let edges: Vec<(usize, usize)> = f
                    .iter()
                    .filter(|(u, _)| comp.contains(u))
                    .map(|&(u, v)| (local(u), local(v)))
                    .collect();
                let sub_w =
                    WeightVector::new(comp.iter().map(|&v| w.weights()[v]).collect()).unwrap();
                let tree = Forest::new(comp.len(), edges).unwrap();
                assert!(tree.is_tree());
                product *= mass(&tree, &sub_w).unwrap();
            }
            assert_eq!(mass(&forest, &w).unwrap(), product);
        }
    }
}

#[test]
fn bridges_match_recount() {
    for n in 1..=6 {
        let space = 1u64 << (n * (n - 1) / 2);
        let step = if n == 6 { 7 } else { 1 };
        for mask in (0..space).step_by(step) {
            let g = LabeledGraph::new(n, mask).unwrap();
            let edges = mask_edges(n, mask);
            assert_eq!(g.edge_list(), edges);
            assert_eq!(g.bridges(), brute_bridges(n, &edges), "{g}");
            assert_eq!(g.component_count(), components_of(n, &edges));
        }
    }
}

#[test]
fn bridgeless_core_is_idempotent() {
    for n in 1..=5 {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let core = LabeledGraph::new(n, mask).unwrap().bridgeless_core();
            assert_eq!(core.bridgeless_core(), core);
            assert!(core.bridges().is_empty());
        }
    }
}

#[test]
fn equivalence_classes_match_enumeration() {
    for n in 1..=5 {
        let mut tallies: BTreeMap<Vec<(usize, usize)>, (u64, u64)> = BTreeMap::new();
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let edges = mask_edges(n, mask);
            let bridges = brute_bridges(n, &edges);
            let core: Vec<_> = edges
                .iter()
                .filter(|e| !bridges.contains(e))
                .copied()
                .collect();
            let entry = tallies.entry(core).or_default();
            entry.0 += 1;
            if components_of(n, &edges) == 1 {
                entry.1 += 1;
            }
        }
        let classes = equiv_classes(n).unwrap();
        assert_eq!(classes.len(), tallies.len());
        for class in classes {
            let (members, connected) = tallies[&class.core.edge_list()];
            assert_eq!(class.member_count, members);
            assert_eq!(class.connected_count, connected);
            let mut sizes = component_sizes(n, &class.core.edge_list());
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            let sizes: Vec<u64> = sizes.into_iter().map(|s| s as u64).collect();
            assert_eq!(class.weight_vector.weights(), sizes.as_slice());
        }
    }
}

#[test]
fn closures_are_unions_of_classes() {
    let mut rng = RngHandle::new(99);
    for n in 2..=5 {
        for _ in 0..10 {
            let seeds = rng.gen_range(1..=4);
            let seed = random_seed_class(n, seeds, &mut rng).unwrap();
            let closure = alterable_closure(&seed, n);
            assert!(is_bridge_alterable(&closure, n));
            assert!(seed.members(n).all(|g| closure.contains(&g)));
            for g in closure.members(n) {
                let class = GraphClass::equivalence_class(g.bridgeless_core()).unwrap();
                assert!(class.members(n).all(|h| closure.contains(&h)));
            }
        }
    }
}

#[test]
fn theorem_holds_for_every_single_class() {
    for n in 1..=6 {
        let mut classes: BTreeMap<u64, GraphClass> = BTreeMap::new();
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let g = LabeledGraph::new(n, mask).unwrap();
            classes
                .entry(g.bridgeless_core().mask())
                .or_default()
                .insert(g);
        }
        assert_eq!(classes.len(), equiv_classes(n).unwrap().len());
        classes.into_par_iter().for_each(|(core, class)| {
            let report = verify_theorem(&class, n).unwrap();
            assert!(report.all_pass(), "n={n} core mask={core}");
        });
    }
}

#[test]
fn tree_masses_match_cayley_formula() {
    let mut rng = RngHandle::new(17);
    for t in 1..=7 {
        let trees: Vec<_> = brute_forests(t)
            .into_iter()
            .filter(|f| f.len() + 1 == t)
            .collect();
        for _ in 0..5 {
            let w = random_weights(&mut rng, t, 9);
            let brute: BigUint = trees.iter().map(|f| brute_mass(w.weights(), f)).sum();
            let n = BigUint::from(w.total());
            let product: BigUint = w.weights().iter().map(|&x| BigUint::from(x)).product();
            let formula: ExactRational =
                from_natural(&product) * from_natural(&n).pow(t as i32 - 2);
            assert_eq!(from_natural(&brute), formula, "w={w}");
        }
    }
}
