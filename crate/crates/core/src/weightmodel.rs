//! The weighted forest model: forests on `[t]` whose probability is
//! proportional to `mass(F) = prod_i n_i^deg(i)`.
//!
//! Totals are computed with a subset DP that always removes the block
//! containing the smallest remaining element, so every set partition of `[t]`
//! is visited exactly once. A block `T` contributes the tree mass
//! `W(T) = p(T) * s(T)^(|T|-2)` with `p` the product and `s` the sum of the
//! weights in `T`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{
    compare_to_exp, exp_enclosure, natural_ratio, ratio, ExactRational, ExpOrdering, RatInterval,
};
use crate::forestcount::CountTable;
use crate::graphcore::format_literal;

/// Largest ground set the subset DP accepts.
pub const MAX_DP_T: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("weight vector must have at least one entry")]
    EmptyWeights,
    #[error("weights must be positive integers")]
    ZeroWeight,
    #[error("cannot parse weight vector {0:?}")]
    Parse(String),
    #[error("forest is on {forest} vertices but the weight vector has {weights} entries")]
    DimensionMismatch { forest: usize, weights: usize },
    #[error("t = {t} exceeds the limit of {max}")]
    TooLarge { t: usize, max: usize },
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("invalid block partition: {0}")]
    InvalidPartition(String),
    #[error("component count k = {k} outside 1..={t}")]
    KOutOfRange { k: usize, t: usize },
    #[error("alpha must satisfy 0 < alpha < 1")]
    InvalidAlpha,
    #[error("{0}")]
    Precondition(String),
}

/// Component sizes `(n_1, ..., n_t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    weights: Vec<u64>,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::EmptyWeights);
        }
        if weights.contains(&0) {
            return Err(ModelError::ZeroWeight);
        }
        Ok(Self { weights })
    }

    pub fn unit(t: usize) -> Self {
        Self {
            weights: vec![1; t.max(1)],
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn t(&self) -> usize {
        self.weights.len()
    }

    /// `n = sum n_i`.
    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `N = prod n_i`.
    pub fn product(&self) -> BigUint {
        self.weights.iter().fold(BigUint::one(), |acc, &w| acc * w)
    }

    /// Weights of the elements in `mask`, in increasing element order.
    pub fn restrict(&self, mask: u32) -> Vec<u64> {
        members(mask).map(|i| self.weights[i]).collect()
    }

    fn block_product(&self, mask: u32) -> BigUint {
        members(mask).fold(BigUint::one(), |acc, i| acc * self.weights[i])
    }

    fn block_sum(&self, mask: u32) -> u64 {
        members(mask).map(|i| self.weights[i]).sum()
    }

    /// Total mass of the trees spanning the block `mask`.
    pub fn block_weight(&self, mask: u32) -> BigUint {
        let size = mask.count_ones() as usize;
        if size <= 1 {
            return BigUint::one();
        }
        self.block_product(mask) * num_traits::pow(BigUint::from(self.block_sum(mask)), size - 2)
    }

    fn check_dp_size(&self) -> Result<(), ModelError> {
        if self.t() > MAX_DP_T {
            return Err(ModelError::TooLarge {
                t: self.t(),
                max: MAX_DP_T,
            });
        }
        Ok(())
    }
}

impl FromStr for WeightVector {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let weights = s
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ModelError::Parse(s.to_string()))?;
        Self::new(weights)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

pub(crate) fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Acyclic graph on `[t]`; vertices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    t: usize,
    edges: Vec<(usize, usize)>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Forest {
    /// Builds a forest from 0-based edges; rejects loops, repeats and cycles.
    pub fn new(
        t: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        let mut normalized: Vec<(usize, usize)> = Vec::new();
        let mut sets = DisjointSets::new(t);
        for (u, v) in edges {
            if u >= t || v >= t {
                return Err(ModelError::InvalidForest(format!(
                    "edge ({}, {}) outside [{t}]",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(ModelError::InvalidForest(format!("loop at {}", u + 1)));
            }
            if !sets.union(u, v) {
                return Err(ModelError::InvalidForest(format!(
                    "edge ({}, {}) closes a cycle",
                    u.min(v) + 1,
                    u.max(v) + 1
                )));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        Ok(Self {
            t,
            edges: normalized,
        })
    }

    pub fn empty(t: usize) -> Self {
        Self {
            t,
            edges: Vec::new(),
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.t];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// `kappa(F)`; a forest has `t - |E|` components.
    pub fn component_count(&self) -> usize {
        self.t - self.edges.len()
    }

    pub fn is_tree(&self) -> bool {
        self.t >= 1 && self.component_count() == 1
    }

    /// Vertex sets of the components, each sorted, ordered by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut sets = DisjointSets::new(self.t);
        for &(u, v) in &self.edges {
            sets.union(u, v);
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut index_of_root = vec![usize::MAX; self.t];
        for v in 0..self.t {
            let root = sets.find(v);
            if index_of_root[root] == usize::MAX {
                index_of_root[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index_of_root[root]].push(v);
        }
        blocks
    }

    /// Graph literal `n:<t>;edges:(u,v),...` with 1-based vertices.
    pub fn to_literal(&self) -> String {
        format_literal(self.t, self.edges.iter().copied())
    }
}

/// Unordered set partition of `[t]`, blocks stored as bitmasks sorted by
/// least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    t: usize,
    blocks: Vec<u32>,
}

impl BlockPartition {
    pub fn new(t: usize, blocks: impl IntoIterator<Item = u32>) -> Result<Self, ModelError> {
        if t > 32 {
            return Err(ModelError::TooLarge { t, max: 32 });
        }
        let full: u32 = if t == 32 { u32::MAX } else { (1u32 << t) - 1 };
        let mut seen = 0u32;
        let mut blocks: Vec<u32> = blocks.into_iter().collect();
        for &b in &blocks {
            if b == 0 {
                return Err(ModelError::InvalidPartition("empty block".into()));
            }
            if b & !full != 0 {
                return Err(ModelError::InvalidPartition(format!(
                    "block {b:#b} outside [{t}]"
                )));
            }
            if seen & b != 0 {
                return Err(ModelError::InvalidPartition("blocks overlap".into()));
            }
            seen |= b;
        }
        if seen != full {
            return Err(ModelError::InvalidPartition(
                "blocks do not cover [t]".into(),
            ));
        }
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        Ok(Self { t, blocks })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `J(U)`: the blocks with at least two elements.
    pub fn non_singleton_blocks(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().copied().filter(|b| b.count_ones() >= 2)
    }
}

/// All set partitions of `[t]` via restricted growth strings.
pub fn set_partitions(t: usize) -> Vec<BlockPartition> {
    fn grow(pos: usize, t: usize, blocks: &mut Vec<u32>, out: &mut Vec<BlockPartition>) {
        if pos == t {
            out.push(
                BlockPartition::new(t, blocks.iter().copied()).expect("valid by construction"),
            );
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << pos;
            grow(pos + 1, t, blocks, out);
            blocks[b] &= !(1 << pos);
        }
        blocks.push(1 << pos);
        grow(pos + 1, t, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    grow(0, t, &mut Vec::new(), &mut out);
    out
}

pub fn mass(forest: &Forest, w: &WeightVector) -> Result<BigUint, ModelError> {
    if forest.t() != w.t() {
        return Err(ModelError::DimensionMismatch {
            forest: forest.t(),
            weights: w.t(),
        });
    }
    Ok(forest
        .degrees()
        .iter()
        .zip(w.weights())
        .fold(BigUint::one(), |acc, (&d, &n)| {
            acc * num_traits::pow(BigUint::from(n), d)
        }))
}

/// Total mass of spanning trees of `[t]`: `N * n^(t-2)`, or 1 when `t = 1`.
pub fn tree_mass_total(w: &WeightVector) -> BigUint {
    if w.t() == 1 {
        return BigUint::one();
    }
    w.product() * num_traits::pow(BigUint::from(w.total()), w.t() - 2)
}

pub fn partition_mass(partition: &BlockPartition, w: &WeightVector) -> Result<BigUint, ModelError> {
    if partition.t() != w.t() {
        return Err(ModelError::DimensionMismatch {
            forest: partition.t(),
            weights: w.t(),
        });
    }
    Ok(partition
        .non_singleton_blocks()
        .fold(BigUint::one(), |acc, b| acc * w.block_weight(b)))
}

/// Block weights `W(T)` and forest mass totals `M(S)` for every subset of `[t]`.
#[derive(Debug, Clone)]
pub struct MassTable {
    t: usize,
    block: Vec<BigUint>,
    total: Vec<BigUint>,
}

impl MassTable {
    pub fn build(w: &WeightVector) -> Result<Self, ModelError> {
        w.check_dp_size()?;
        let t = w.t();
        let size = 1usize << t;
        let block: Vec<BigUint> = (0..size as u32).map(|m| w.block_weight(m)).collect();
        let mut total = vec![BigUint::zero(); size];
        total[0] = BigUint::one();
        for s in 1..size as u32 {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            let mut acc = BigUint::zero();
            // Enumerate every submask `sub` of `rest`, including 0.
            let mut sub = rest;
            loop {
                let block_mask = sub | low;
                acc += &block[block_mask as usize] * &total[(s ^ block_mask) as usize];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            total[s as usize] = acc;
        }
        Ok(Self { t, block, total })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.t) - 1) as u32
    }

    pub fn block_weight(&self, mask: u32) -> &BigUint {
        &self.block[mask as usize]
    }

    /// Total forest mass on the subset `mask`.
    pub fn total(&self, mask: u32) -> &BigUint {
        &self.total[mask as usize]
    }

    pub fn forest_total(&self) -> &BigUint {
        self.total(self.full_mask())
    }
}

pub fn forest_mass_total(w: &WeightVector) -> Result<BigUint, ModelError> {
    Ok(MassTable::build(w)?.forest_total().clone())
}

/// `mass(F_t^k)` for every `k = 1..=t`; entry `k - 1` holds component count `k`.
pub fn masses_by_component_count(w: &WeightVector) -> Result<Vec<BigUint>, ModelError> {
    w.check_dp_size()?;
    let t = w.t();
    let size = 1usize << t;
    let block: Vec<BigUint> = (0..size as u32).map(|m| w.block_weight(m)).collect();
    // by_k[s][k] = mass of forests on s with exactly k components
    let mut by_k: Vec<Vec<BigUint>> = vec![Vec::new(); size];
    by_k[0] = vec![BigUint::one()];
    for s in 1..size as u32 {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut acc = vec![BigUint::zero(); s.count_ones() as usize + 1];
        let mut sub = rest;
        loop {
            let block_mask = sub | low;
            let remaining = &by_k[(s ^ block_mask) as usize];
            let bw = &block[block_mask as usize];
            for (k, m) in remaining.iter().enumerate() {
                if !m.is_zero() {
                    acc[k + 1] += bw * m;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        by_k[s as usize] = acc;
    }
    let mut full = std::mem::take(&mut by_k[size - 1]);
    full.remove(0);
    Ok(full)
}

pub fn mass_by_component_count(w: &WeightVector, k: usize) -> Result<BigUint, ModelError> {
    if k == 0 || k > w.t() {
        return Err(ModelError::KOutOfRange { k, t: w.t() });
    }
    Ok(masses_by_component_count(w)?.swap_remove(k - 1))
}

/// `|F_t^k|` for `k = 1..=t`: unit weights turn block masses into Cayley counts.
pub fn forest_counts_by_component_count(t: usize) -> Result<Vec<BigUint>, ModelError> {
    masses_by_component_count(&WeightVector::unit(t))
}

fn massk_holds(w: &WeightVector, mass_k: &BigUint, count_k: &BigUint) -> bool {
    // mass_k <= N (n/t)^(t-2) count_k, cleared of denominators
    let t = w.t();
    let lhs = mass_k * num_traits::pow(BigUint::from(t), t - 2);
    let rhs = w.product() * num_traits::pow(BigUint::from(w.total()), t - 2) * count_k;
    lhs <= rhs
}

/// `mass(F_t^k) <= N (n/t)^(t-2) |F_t^k|`, decided exactly.
pub fn verify_massk(w: &WeightVector, k: usize) -> Result<bool, ModelError> {
    if w.t() < 3 {
        return Err(ModelError::Precondition(format!(
            "verify_massk needs t >= 3, got {}",
            w.t()
        )));
    }
    if k == 0 || k > w.t() {
        return Err(ModelError::KOutOfRange { k, t: w.t() });
    }
    let mass_k = mass_by_component_count(w, k)?;
    let count_k = &forest_counts_by_component_count(w.t())?[k - 1];
    Ok(massk_holds(w, &mass_k, count_k))
}

/// [`verify_massk`] for every `k`, sharing one DP; `counts` may be
/// precomputed with [`forest_counts_by_component_count`].
pub fn verify_massk_all(w: &WeightVector, counts: &[BigUint]) -> Result<Vec<bool>, ModelError> {
    if w.t() < 3 {
        return Err(ModelError::Precondition(format!(
            "verify_massk needs t >= 3, got {}",
            w.t()
        )));
    }
    let masses = masses_by_component_count(w)?;
    Ok(masses
        .iter()
        .zip(counts)
        .map(|(m, c)| massk_holds(w, m, c))
        .collect())
}

/// `Pr(F^n connected) = mass(T_t) / mass(F_t)`.
pub fn conn_prob_weighted(w: &WeightVector) -> Result<ExactRational, ModelError> {
    if w.t() == 1 {
        return Ok(ExactRational::one());
    }
    Ok(natural_ratio(&tree_mass_total(w), &forest_mass_total(w)?))
}

/// `Pr(kappa(F^n) = i)` for `i = 1..=t`.
pub fn kappa_distribution(w: &WeightVector) -> Result<Vec<ExactRational>, ModelError> {
    let masses = masses_by_component_count(w)?;
    let total: BigUint = masses.iter().sum();
    Ok(masses.iter().map(|m| natural_ratio(m, &total)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaCheck {
    /// `Pr(kappa = i+1) <= (1/i)(t/n) Pr(kappa = i)` for every `i < t`.
    pub ratio_holds: bool,
    /// First `i` where the ratio bound fails.
    pub first_violation: Option<usize>,
    /// `Pr(connected)` against `e^{-t/n}`; `Greater` is the expected outcome.
    pub exp_bound: ExpOrdering,
}

impl KappaCheck {
    pub fn holds(&self) -> bool {
        self.ratio_holds && self.exp_bound == ExpOrdering::Greater
    }
}

pub fn verify_kappa_ratio(w: &WeightVector) -> Result<KappaCheck, ModelError> {
    let dist = kappa_distribution(w)?;
    let t = w.t();
    let t_over_n = ratio(t as i64, w.total() as i64);
    let first_violation = (1..t).find(|&i| {
        let bound = &t_over_n * &dist[i - 1] / num_bigint::BigInt::from(i);
        dist[i] > bound
    });
    Ok(KappaCheck {
        ratio_holds: first_violation.is_none(),
        first_violation,
        exp_bound: compare_to_exp(&dist[0], &t_over_n),
    })
}

/// A value that is either rational or `e^{exponent}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Rational(ExactRational),
    Exp(ExactRational),
}

impl BoundValue {
    /// Exact where possible; `None` when an exponential comparison cannot be
    /// resolved within the refinement cap.
    pub fn try_cmp(&self, other: &BoundValue) -> Option<Ordering> {
        use BoundValue::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Some(a.cmp(b)),
            (Exp(a), Exp(b)) => Some(a.cmp(b)),
            (Rational(p), Exp(x)) => match compare_to_exp(p, &-x) {
                ExpOrdering::Less => Some(Ordering::Less),
                ExpOrdering::Greater => Some(Ordering::Greater),
                ExpOrdering::Undecidable => None,
            },
            (Exp(_), Rational(_)) => other.try_cmp(self).map(Ordering::reverse),
        }
    }

    pub fn enclosure(&self, terms: u32) -> RatInterval {
        match self {
            BoundValue::Rational(p) => RatInterval::point(p.clone()),
            BoundValue::Exp(x) => exp_enclosure(x, terms),
        }
    }
}

/// `min_{t=1..n} max{e^{-t/n}, Pr(F_t connected)}` with its minimizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gen1Bound {
    pub t_star: usize,
    /// `Pr(F_{t*} connected)`.
    pub rational_branch: ExactRational,
    /// Enclosure of `e^{-t*/n}`.
    pub exp_branch: RatInterval,
    /// Whichever branch is the max at `t*`.
    pub value: BoundValue,
}

const GEN1_DISPLAY_TERMS: u32 = 40;

pub fn rhs_gen1(table: &CountTable, n: usize) -> Result<Gen1Bound, ModelError> {
    if n == 0 || table.n_max() < n {
        return Err(ModelError::Precondition(format!(
            "need 1 <= n <= {}, got {n}",
            table.n_max()
        )));
    }
    let mut best: Option<(usize, BoundValue)> = None;
    for t in 1..=n {
        let p = table.conn_prob(t);
        let exponent = ratio(-(t as i64), n as i64);
        let branch_max = match compare_to_exp(&p, &-&exponent) {
            ExpOrdering::Greater => BoundValue::Rational(p),
            _ => BoundValue::Exp(exponent),
        };
        let replace = match &best {
            None => true,
            Some((_, current)) => branch_max.try_cmp(current) == Some(Ordering::Less),
        };
        if replace {
            best = Some((t, branch_max));
        }
    }
    let (t_star, value) = best.expect("n >= 1");
    Ok(Gen1Bound {
        t_star,
        rational_branch: table.conn_prob(t_star),
        exp_branch: exp_enclosure(&ratio(-(t_star as i64), n as i64), GEN1_DISPLAY_TERMS),
        value,
    })
}

/// `min_{alpha n < t <= n} Pr(F_t connected)` and its smallest minimizer.
pub fn rhs_theorem(
    table: &CountTable,
    n: usize,
    alpha: &ExactRational,
) -> Result<(usize, ExactRational), ModelError> {
    if alpha <= &ExactRational::zero() || alpha >= &ExactRational::one() {
        return Err(ModelError::InvalidAlpha);
    }
    if n == 0 || table.n_max() < n {
        return Err(ModelError::Precondition(format!(
            "need 1 <= n <= {}, got {n}",
            table.n_max()
        )));
    }
    let scaled = alpha * num_bigint::BigInt::from(n);
    let floor = scaled.floor().to_integer();
    let t_min = usize::try_from(floor).expect("alpha n is nonnegative") + 1;
    let mut best: Option<(usize, ExactRational)> = None;
    for t in t_min..=n {
        let p = table.conn_prob(t);
        if best.as_ref().is_none_or(|(_, b)| &p < b) {
            best = Some((t, p));
        }
    }
    Ok(best.expect("t = n is always in range"))
}

/// The deduction of the `alpha = 1/3` bound from the per-class bound:
/// `rhs_gen1(n) >= rhs_theorem(n, 1/3)`.
pub fn verify_deduction(table: &CountTable, n: usize) -> Result<bool, ModelError> {
    let gen1 = rhs_gen1(table, n)?;
    let (_, theorem) = rhs_theorem(table, n, &ratio(1, 3))?;
    Ok(matches!(
        gen1.value.try_cmp(&BoundValue::Rational(theorem)),
        Some(Ordering::Greater | Ordering::Equal)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(ws: &[u64]) -> WeightVector {
        WeightVector::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn weight_vector_parsing() {
        assert_eq!("1,2,3".parse::<WeightVector>().unwrap(), wv(&[1, 2, 3]));
        assert_eq!(" 4, 5 ".parse::<WeightVector>().unwrap(), wv(&[4, 5]));
        assert_eq!("1,0".parse::<WeightVector>(), Err(ModelError::ZeroWeight));
        assert!("1,,2".parse::<WeightVector>().is_err());
        assert!("".parse::<WeightVector>().is_err());
        assert_eq!(wv(&[1, 2, 3]).to_string(), "1,2,3");
    }

    #[test]
    fn forest_validation() {
        assert!(Forest::new(3, [(0, 1), (1, 2), (0, 2)]).is_err());
        assert!(Forest::new(3, [(0, 0)]).is_err());
        assert!(Forest::new(3, [(0, 3)]).is_err());
        assert!(Forest::new(3, [(0, 1), (1, 0)]).is_err());
        let f = Forest::new(4, [(2, 0), (3, 1)]).unwrap();
        assert_eq!(f.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(f.component_count(), 2);
        assert_eq!(f.components(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(f.to_literal(), "n:4;edges:(1,3),(2,4)");
    }

    #[test]
    fn mass_examples() {
        let w = wv(&[1, 2, 3]);
        assert_eq!(mass(&Forest::empty(3), &w).unwrap(), BigUint::one());
        let path = Forest::new(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(mass(&path, &w).unwrap(), BigUint::from(18u32));
        let edge = Forest::new(2, [(0, 1)]).unwrap();
        assert_eq!(mass(&edge, &wv(&[4, 7])).unwrap(), BigUint::from(28u32));
        assert_eq!(
            mass(&edge, &w),
            Err(ModelError::DimensionMismatch {
                forest: 2,
                weights: 3
            })
        );
    }

    #[test]
    fn totals() {
        assert_eq!(tree_mass_total(&wv(&[1, 2, 3])), BigUint::from(36u32));
        assert_eq!(tree_mass_total(&wv(&[5])), BigUint::one());
        assert_eq!(
            tree_mass_total(&WeightVector::unit(5)),
            BigUint::from(125u32)
        );
        assert_eq!(
            forest_mass_total(&wv(&[1, 2, 3])).unwrap(),
            BigUint::from(48u32)
        );
        assert_eq!(
            forest_mass_total(&wv(&[1, 1, 1])).unwrap(),
            BigUint::from(7u32)
        );
        assert_eq!(
            forest_mass_total(&wv(&[4, 7])).unwrap(),
            BigUint::from(29u32)
        );
        assert!(matches!(
            forest_mass_total(&WeightVector::unit(21)),
            Err(ModelError::TooLarge { t: 21, .. })
        ));
    }

    #[test]
    fn component_masses() {
        let w = wv(&[1, 2, 3]);
        let by_k = masses_by_component_count(&w).unwrap();
        assert_eq!(by_k, vec![BigUint::from(36u32), 11u32.into(), 1u32.into()]);
        assert_eq!(mass_by_component_count(&w, 1).unwrap(), tree_mass_total(&w));
        assert!(mass_by_component_count(&w, 0).is_err());
        assert!(mass_by_component_count(&w, 4).is_err());
    }

    #[test]
    fn partitions() {
        let w = wv(&[1, 2, 3]);
        let p = BlockPartition::new(3, [0b011, 0b100]).unwrap();
        assert_eq!(partition_mass(&p, &w).unwrap(), BigUint::from(2u32));
        let singletons = BlockPartition::new(3, [1, 2, 4]).unwrap();
        assert_eq!(partition_mass(&singletons, &w).unwrap(), BigUint::one());
        let whole = BlockPartition::new(3, [0b111]).unwrap();
        assert_eq!(partition_mass(&whole, &w).unwrap(), tree_mass_total(&w));
        assert!(BlockPartition::new(3, [0b011, 0b110]).is_err());
        assert!(BlockPartition::new(3, [0b011]).is_err());
        // Bell numbers
        let bell: Vec<usize> = (0..=6).map(|t| set_partitions(t).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn massk_examples() {
        let w = wv(&[1, 2, 3]);
        assert!(verify_massk(&w, 1).unwrap());
        assert!(verify_massk(&w, 2).unwrap());
        assert!(verify_massk(&w, 3).unwrap());
        assert!(verify_massk(&wv(&[1, 2]), 1).is_err());
        for k in 1..=5 {
            assert!(verify_massk(&WeightVector::unit(5), k).unwrap());
        }
    }

    #[test]
    fn weighted_connectivity() {
        assert_eq!(conn_prob_weighted(&wv(&[1, 2, 3])).unwrap(), ratio(3, 4));
        assert_eq!(conn_prob_weighted(&wv(&[1, 1, 1])).unwrap(), ratio(3, 7));
        assert_eq!(conn_prob_weighted(&wv(&[3, 1])).unwrap(), ratio(3, 4));
        assert_eq!(conn_prob_weighted(&wv(&[9])).unwrap(), ratio(1, 1));
    }

    #[test]
    fn kappa_examples() {
        let d = kappa_distribution(&wv(&[1, 2, 3])).unwrap();
        assert_eq!(d, vec![ratio(36, 48), ratio(11, 48), ratio(1, 48)]);
        assert!(verify_kappa_ratio(&wv(&[1, 1])).unwrap().holds());
        assert!(verify_kappa_ratio(&wv(&[1, 2, 3])).unwrap().holds());
        assert!(verify_kappa_ratio(&wv(&[4])).unwrap().holds());
    }

    #[test]
    fn theorem_rhs_examples() {
        let table = CountTable::with_n_max(10);
        assert_eq!(
            rhs_theorem(&table, 4, &ratio(1, 3)).unwrap(),
            (4, ratio(8, 19))
        );
        assert_eq!(
            rhs_theorem(&table, 2, &ratio(1, 3)).unwrap(),
            (2, ratio(1, 2))
        );
        assert_eq!(
            rhs_theorem(&table, 6, &ratio(12, 25)).unwrap(),
            (4, ratio(8, 19))
        );
        assert_eq!(
            rhs_theorem(&table, 4, &ratio(1, 1)),
            Err(ModelError::InvalidAlpha)
        );
        assert!(rhs_theorem(&table, 11, &ratio(1, 3)).is_err());
    }

    #[test]
    fn deduction_small_n() {
        let table = CountTable::with_n_max(30);
        for n in 1..=30 {
            assert!(verify_deduction(&table, n).unwrap(), "n={n}");
        }
    }
}
