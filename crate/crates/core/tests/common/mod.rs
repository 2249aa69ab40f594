//! Independent brute-force oracles. Nothing here calls into the library's
//! counting, mass, graph or exponential code.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Fixed-point scale for the exponential oracle: 10^70.
pub fn oracle_scale() -> BigInt {
    BigInt::from(10u32).pow(70)
}

/// The oracle's guaranteed absolute accuracy, far below 10^-50.
pub fn oracle_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(55))
}

/// `e^x * 10^70` in truncated fixed point, accurate to well under `10^-55`
/// for `|x| <= 20`. Evaluates `e^|x|` by a plain Taylor sum and
/// inverts for negative `x`.
pub fn exp_fixed(x: &BigRational) -> BigInt {
    let scale = oracle_scale();
    let ax = x.abs();
    let (p, q) = (ax.numer().clone(), ax.denom().clone());
    let mut term = scale.clone();
    let mut sum = scale.clone();
    let mut k = 1u32;
    while !term.is_zero() {
        term = term * &p / (&q * BigInt::from(k));
        sum += &term;
        k += 1;
    }
    if x.is_negative() {
        &scale * &scale / sum
    } else {
        sum
    }
}

pub fn exp_oracle(x: &BigRational) -> BigRational {
    BigRational::new(exp_fixed(x), oracle_scale())
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Every forest on `0..n`, as sorted edge lists: each pair of `K_n` in
/// lexicographic order is either skipped or taken when its endpoints carry
/// different component labels.
pub fn brute_forests(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        pairs: &[(usize, usize)],
        labels: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some((&(u, v), rest)) = pairs.split_first() else {
            out.push(edges.clone());
            return;
        };
        go(rest, labels, edges, out);
        let (a, b) = (labels[u], labels[v]);
        if a != b {
            let saved = labels.clone();
            labels.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);
            edges.push((u, v));
            go(rest, labels, edges, out);
            edges.pop();
            *labels = saved;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    go(&pairs, &mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Sizes of the connected components of `(0..n, edges)`.
pub fn component_sizes(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
        }
    }
    let mut sizes = vec![0usize; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        sizes[r] += 1;
    }
    sizes.retain(|&s| s > 0);
    sizes
}

pub fn components_of(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// `prod w_i^deg(i)`.
pub fn brute_mass(w: &[u64], edges: &[(usize, usize)]) -> BigUint {
    let mut deg = vec![0u32; w.len()];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    w.iter()
        .zip(&deg)
        .map(|(&wi, &d)| BigUint::from(wi).pow(d))
        .product()
}

/// Masses of all forests on `[t]`, bucketed by component count (`k - 1`).
pub fn brute_masses_by_k(w: &[u64], forests: &[Vec<(usize, usize)>]) -> Vec<BigUint> {
    let t = w.len();
    let mut out = vec![BigUint::zero(); t];
    for f in forests {
        out[components_of(t, f) - 1] += brute_mass(w, f);
    }
    out
}

/// Edge list of a lexicographic pair mask on `0..n`.
pub fn mask_edges(n: usize, mask: u64) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .enumerate()
        .filter(|&(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect()
}

/// Bridges by deleting each edge and recounting components.
pub fn brute_bridges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let base = components_of(n, edges);
    (0..edges.len())
        .filter(|&i| {
            let rest: Vec<_> = edges
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &e)| e)
                .collect();
            components_of(n, &rest) > base
        })
        .map(|i| edges[i])
        .collect()
}

/// Exact rational from a ratio of naturals.
pub fn q(numer: &BigUint, denom: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(numer.clone()), BigInt::from(denom.clone()))
}

/// `n!` as a natural.
pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}
