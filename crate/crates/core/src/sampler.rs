//! Exact samplers for uniform random forests and the mass-weighted forest
//! model, built on Prüfer sequences.
//!
//! All discrete choices draw a uniform integer below an exact common
//! denominator, so no distribution is skewed by floating point.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::{BigUint, RandBigInt};
use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::exactnum::{to_f64, ExactRational};
use crate::forestcount::CountTable;
use crate::weightmodel::{members, Forest, MassTable, ModelError, WeightVector};

/// Largest ground set for [`sample_weighted_forest`].
pub const MAX_FOREST_SAMPLER_T: usize = 16;

/// Two-sided 99% standard normal quantile.
const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("invalid Prüfer sequence: {0}")]
    InvalidSequence(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("t = {t} exceeds the sampler limit of {max}")]
    TooLarge { t: usize, max: usize },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Word of length `t - 2` over `[t]` (0-based entries).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferSequence {
    t: usize,
    entries: Vec<usize>,
}

impl PruferSequence {
    pub fn new(t: usize, entries: Vec<usize>) -> Result<Self, SampleError> {
        if t < 2 {
            return Err(SampleError::InvalidSequence(format!("t = {t} < 2")));
        }
        if entries.len() != t - 2 {
            return Err(SampleError::InvalidSequence(format!(
                "length {} but t - 2 = {}",
                entries.len(),
                t - 2
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= t) {
            return Err(SampleError::InvalidSequence(format!(
                "entry {} outside [{t}]",
                bad + 1
            )));
        }
        Ok(Self { t, entries })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// Tree whose smallest-leaf removal order reproduces the sequence.
pub fn prufer_decode(seq: &PruferSequence) -> Forest {
    let t = seq.t;
    let mut degree = vec![1usize; t];
    for &e in &seq.entries {
        degree[e] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..t).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(t - 1);
    for &e in &seq.entries {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, e));
        degree[leaf] = 0;
        degree[e] -= 1;
        if degree[e] == 1 {
            leaves.push(Reverse(e));
        }
    }
    let Reverse(a) = leaves.pop().expect("two vertices remain");
    let Reverse(b) = leaves.pop().expect("two vertices remain");
    edges.push((a, b));
    Forest::new(t, edges).expect("Prüfer decoding yields a tree")
}

pub fn prufer_encode(tree: &Forest) -> Result<PruferSequence, SampleError> {
    let t = tree.t();
    if t < 2 || !tree.is_tree() {
        return Err(SampleError::NotATree(tree.to_literal()));
    }
    let mut degree = tree.degrees();
    // XOR of the remaining neighbours; a leaf's is exactly its neighbour.
    let mut neighbour_xor = vec![0usize; t];
    for &(u, v) in tree.edges() {
        neighbour_xor[u] ^= v;
        neighbour_xor[v] ^= u;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..t).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut entries = Vec::with_capacity(t - 2);
    while entries.len() < t - 2 {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        let parent = neighbour_xor[leaf];
        entries.push(parent);
        degree[leaf] = 0;
        neighbour_xor[parent] ^= leaf;
        degree[parent] -= 1;
        if degree[parent] == 1 {
            leaves.push(Reverse(parent));
        }
    }
    PruferSequence::new(t, entries)
}

/// Seeded deterministic generator; the same seed reproduces the same stream.
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    rng: ChaCha12Rng,
}

impl RngHandle {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` derived from `base` as `base ^ index`.
    pub fn stream(base: u64, index: u64) -> Self {
        Self::new(base ^ index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.gen_range(0..bound)
    }

    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        self.rng.gen_biguint_below(bound)
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Index `i` with probability `weights[i] / sum(weights)`, given the prefix sums.
fn pick_from_prefix(prefix: &[u64], rng: &mut RngHandle) -> usize {
    let total = *prefix.last().expect("nonempty weights");
    let r = rng.below(total);
    prefix.partition_point(|&c| c <= r)
}

fn pick_from_prefix_big(prefix: &[BigUint], rng: &mut RngHandle) -> usize {
    let total = prefix.last().expect("nonempty weights");
    let r = rng.below_big(total);
    prefix.partition_point(|c| c <= &r)
}

fn prefix_sums(weights: &[u64]) -> Vec<u64> {
    weights
        .iter()
        .scan(0u64, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect()
}

/// Tree on `labels` (global vertex ids) where each Prüfer entry is drawn with
/// probability proportional to `prefix`-encoded weights.
fn weighted_tree_edges(
    labels: &[usize],
    prefix: &[u64],
    rng: &mut RngHandle,
) -> Vec<(usize, usize)> {
    let k = labels.len();
    if k < 2 {
        return Vec::new();
    }
    let entries = (0..k - 2).map(|_| pick_from_prefix(prefix, rng)).collect();
    let local = prufer_decode(&PruferSequence { t: k, entries });
    local
        .edges()
        .iter()
        .map(|&(u, v)| (labels[u], labels[v]))
        .collect()
}

/// Tree on `[t]` with probability `mass(T) / (N n^(t-2))`.
pub fn sample_weighted_tree(w: &WeightVector, rng: &mut RngHandle) -> Result<Forest, SampleError> {
    if w.t() < 2 {
        return Err(SampleError::Precondition(
            "weighted tree sampling needs t >= 2".into(),
        ));
    }
    let labels: Vec<usize> = (0..w.t()).collect();
    let edges = weighted_tree_edges(&labels, &prefix_sums(w.weights()), rng);
    Ok(Forest::new(w.t(), edges)?)
}

/// Sampler for forests on `[t]` with probability `mass(F) / mass(F_t)`.
#[derive(Debug, Clone)]
pub struct WeightedForestSampler {
    weights: WeightVector,
    table: MassTable,
}

impl WeightedForestSampler {
    pub fn new(w: &WeightVector) -> Result<Self, SampleError> {
        if w.t() > MAX_FOREST_SAMPLER_T {
            return Err(SampleError::TooLarge {
                t: w.t(),
                max: MAX_FOREST_SAMPLER_T,
            });
        }
        Ok(Self {
            weights: w.clone(),
            table: MassTable::build(w)?,
        })
    }

    /// Block containing the least element of `s`, drawn with probability
    /// `W(T) M(S \ T) / M(S)`.
    fn pick_block(&self, s: u32, rng: &mut RngHandle) -> u32 {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let r = rng.below_big(self.table.total(s));
        let mut acc = BigUint::default();
        let mut sub = rest;
        loop {
            let block = sub | low;
            acc += self.table.block_weight(block) * self.table.total(s ^ block);
            if r < acc {
                return block;
            }
            assert!(sub != 0, "block weights must sum to the forest total");
            sub = (sub - 1) & rest;
        }
    }

    pub fn sample(&self, rng: &mut RngHandle) -> Forest {
        let mut remaining = self.table.full_mask();
        let mut edges = Vec::new();
        while remaining != 0 {
            let block = self.pick_block(remaining, rng);
            let labels: Vec<usize> = members(block).collect();
            let prefix = prefix_sums(&self.weights.restrict(block));
            edges.extend(weighted_tree_edges(&labels, &prefix, rng));
            remaining &= !block;
        }
        Forest::new(self.weights.t(), edges).expect("blocks carry disjoint trees")
    }
}

pub fn sample_weighted_forest(
    w: &WeightVector,
    rng: &mut RngHandle,
) -> Result<Forest, SampleError> {
    Ok(WeightedForestSampler::new(w)?.sample(rng))
}

/// Uniform sampler on the forests of `[n]`.
#[derive(Debug, Clone)]
pub struct UniformForestSampler {
    n: usize,
    /// `prefix[m][k-1]` = sum over sizes `1..=k` of the vertex-one component terms on `m` vertices.
    prefix: Vec<Vec<BigUint>>,
}

impl UniformForestSampler {
    pub fn new(n: usize) -> Self {
        Self::with_table(&CountTable::with_n_max(n), n)
    }

    pub fn with_table(table: &CountTable, n: usize) -> Self {
        let prefix = (0..=n)
            .map(|m| {
                let mut acc = BigUint::default();
                table
                    .vertex_one_component_terms(m)
                    .into_iter()
                    .map(|term| {
                        acc += term;
                        acc.clone()
                    })
                    .collect()
            })
            .collect();
        Self { n, prefix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the component containing the least of `m` remaining vertices.
    pub fn component_size(&self, m: usize, rng: &mut RngHandle) -> usize {
        pick_from_prefix_big(&self.prefix[m], rng) + 1
    }

    pub fn sample(&self, rng: &mut RngHandle) -> Forest {
        let mut remaining: Vec<usize> = (0..self.n).collect();
        let mut edges = Vec::new();
        while !remaining.is_empty() {
            let m = remaining.len();
            let k = self.component_size(m, rng);
            let mut chosen = vec![false; m];
            chosen[0] = true;
            for i in index::sample(rng, m - 1, k - 1).into_iter() {
                chosen[i + 1] = true;
            }
            let mut block = Vec::with_capacity(k);
            let mut rest = Vec::with_capacity(m - k);
            for (&v, &c) in remaining.iter().zip(&chosen) {
                if c {
                    block.push(v);
                } else {
                    rest.push(v);
                }
            }
            let unit = prefix_sums(&vec![1; block.len()]);
            edges.extend(weighted_tree_edges(&block, &unit, rng));
            remaining = rest;
        }
        Forest::new(self.n, edges).expect("blocks carry disjoint trees")
    }
}

pub fn sample_uniform_forest(n: usize, rng: &mut RngHandle) -> Forest {
    UniformForestSampler::new(n).sample(rng)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub connected: u64,
    pub samples: u64,
    pub fraction: f64,
    /// 99% normal-approximation half-width.
    pub half_width: f64,
}

impl Estimate {
    pub fn brackets(&self, value: f64) -> bool {
        (self.fraction - value).abs() <= self.half_width
    }
}

/// Monte Carlo estimate of `Pr(F_n connected)` from uniform forest draws.
pub fn estimate_conn_prob(
    n: usize,
    samples: u64,
    rng: &mut RngHandle,
) -> Result<Estimate, SampleError> {
    if n == 0 || samples == 0 {
        return Err(SampleError::Precondition(
            "need n >= 1 and at least one sample".into(),
        ));
    }
    // F_n is connected exactly when the component of vertex 1 spans [n].
    let sampler = UniformForestSampler::new(n);
    let connected = (0..samples)
        .filter(|_| sampler.component_size(n, rng) == n)
        .count() as u64;
    let fraction = connected as f64 / samples as f64;
    let half_width = Z_99 * (fraction * (1.0 - fraction) / samples as f64).sqrt();
    Ok(Estimate {
        connected,
        samples,
        fraction,
        half_width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    /// Upper-tail probability of the statistic.
    pub p_value: f64,
}

/// Pearson goodness-of-fit statistic of `observed` against exact probabilities.
pub fn chi_square(observed: &[u64], expected: &[ExactRational]) -> Result<ChiSquare, SampleError> {
    if observed.len() != expected.len() || observed.len() < 2 {
        return Err(SampleError::Precondition(format!(
            "need matching category lists of length >= 2, got {} and {}",
            observed.len(),
            expected.len()
        )));
    }
    let total: ExactRational = expected.iter().sum();
    if total != ExactRational::from_integer(1.into()) {
        return Err(SampleError::Precondition(format!(
            "expected probabilities sum to {total}, not 1"
        )));
    }
    let n = observed.iter().sum::<u64>() as f64;
    let mut statistic = 0.0;
    let mut categories = 0usize;
    for (&o, p) in observed.iter().zip(expected) {
        let e = n * to_f64(p);
        if e > 0.0 {
            statistic += (o as f64 - e).powi(2) / e;
            categories += 1;
        } else if o > 0 {
            statistic = f64::INFINITY;
        }
    }
    let dof = categories.saturating_sub(1).max(1);
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let p_value = if statistic.is_finite() {
        1.0 - dist.cdf(statistic)
    } else {
        0.0
    };
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
    })
}
