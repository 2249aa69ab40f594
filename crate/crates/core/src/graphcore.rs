//! Labeled graphs on `[n]` as edge bitmasks, bridges, bridgeless cores and the
//! equivalence classes they induce, plus brute-force checks of the class
//! identity and the connectivity lower bound for bridge-alterable classes.
//!
//! Edge `i` of the mask is the `i`-th pair of `(1,2),(1,3),...,(n-1,n)` in
//! lexicographic order.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::{ratio, ExactRational};
use crate::forestcount::CountTable;
use crate::report::{Quantity, Report, ReportRow, Status};
use crate::weightmodel::{
    conn_prob_weighted, forest_mass_total, rhs_theorem, tree_mass_total, ModelError, WeightVector,
};

/// Largest `n` whose `C(n,2)` pairs fit the 64-bit edge mask.
pub const MAX_GRAPH_N: usize = 11;
/// Exhaustive enumeration limit (`2^21` graphs).
pub const MAX_ENUM_N: usize = 7;
/// Limit for the class-identity and theorem sweeps.
pub const MAX_VERIFY_N: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("cannot parse graph literal {0:?}")]
    Parse(String),
    #[error("n = {n} exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid edge ({u}, {v}) for n = {n}")]
    InvalidEdge { n: usize, u: usize, v: usize },
    #[error("class is not bridge-alterable on [{n}]: {violation}")]
    NotAlterable { n: usize, violation: String },
    #[error("class has no members on [{0}]")]
    EmptyClass(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the 0-based pair `u < v` in lexicographic order.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect()
}

/// `n:<n>;edges:(u,v),...` with 1-based vertices; input edges are 0-based.
pub fn format_literal(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> String {
    let parts: Vec<String> = edges
        .into_iter()
        .map(|(u, v)| format!("({},{})", u + 1, v + 1))
        .collect();
    format!("n:{n};edges:{}", parts.join(","))
}

/// Parses a graph literal into `n` and 0-based edges with `u < v`.
pub fn parse_literal(s: &str) -> Result<(usize, Vec<(usize, usize)>), GraphError> {
    let bad = || GraphError::Parse(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (n_part, edge_part) = compact.split_once(';').ok_or_else(bad)?;
    let n: usize = n_part
        .strip_prefix("n:")
        .and_then(|x| x.parse().ok())
        .ok_or_else(bad)?;
    let body = edge_part.strip_prefix("edges:").ok_or_else(bad)?;
    let mut edges = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = inner.find(')').ok_or_else(bad)?;
        let (u, v) = inner[..close].split_once(',').ok_or_else(bad)?;
        let u: usize = u.parse().map_err(|_| bad())?;
        let v: usize = v.parse().map_err(|_| bad())?;
        if u == 0 || v == 0 || u >= v || v > n {
            return Err(GraphError::InvalidEdge { n, u, v });
        }
        edges.push((u - 1, v - 1));
        rest = &inner[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(bad());
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(bad());
        }
    }
    Ok((n, edges))
}

/// Simple undirected graph on `[n]`, `n <= 11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: usize,
    edges: u64,
}

impl LabeledGraph {
    pub fn new(n: usize, edges: u64) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_GRAPH_N {
            return Err(GraphError::TooLarge {
                n,
                max: MAX_GRAPH_N,
            });
        }
        let m = pair_count(n);
        if m < 64 && edges >> m != 0 {
            return Err(GraphError::Parse(format!(
                "edge mask {edges:#x} too wide for n = {n}"
            )));
        }
        Ok(Self { n, edges })
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::new(n, 0)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1u64 << pair_count(n)) - 1)
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GraphError::InvalidEdge {
                    n,
                    u: u + 1,
                    v: v + 1,
                });
            }
            g = g.with_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones() as usize
    }

    fn bit(&self, u: usize, v: usize) -> u64 {
        let (a, b) = (u.min(v), u.max(v));
        1u64 << pair_index(self.n, a, b)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges & self.bit(u, v) != 0
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Self {
        Self {
            n: self.n,
            edges: self.edges | self.bit(u, v),
        }
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        Self {
            n: self.n,
            edges: self.edges & !self.bit(u, v),
        }
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        pairs(self.n)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| self.edges >> i & 1 == 1)
            .map(|(_, p)| p)
            .collect()
    }

    /// Neighbourhood bitmask of every vertex.
    pub fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.n];
        for (u, v) in self.edge_list() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    /// Vertex masks of the components, ordered by least vertex.
    pub fn components(&self) -> Vec<u32> {
        let adj = self.adjacency();
        let mut seen = 0u32;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u32 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = adj[v] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.n
    }

    /// Bridges as an edge mask, found with a lowlink DFS.
    pub fn bridge_mask(&self) -> u64 {
        struct Search<'a> {
            graph: &'a LabeledGraph,
            adj: Vec<u32>,
            order: Vec<usize>,
            low: Vec<usize>,
            clock: usize,
            bridges: u64,
        }
        impl Search<'_> {
            fn visit(&mut self, v: usize, parent: Option<usize>) {
                self.clock += 1;
                self.order[v] = self.clock;
                self.low[v] = self.clock;
                let mut nbrs = self.adj[v];
                while nbrs != 0 {
                    let u = nbrs.trailing_zeros() as usize;
                    nbrs &= nbrs - 1;
                    if Some(u) == parent {
                        continue;
                    }
                    if self.order[u] == 0 {
                        self.visit(u, Some(v));
                        self.low[v] = self.low[v].min(self.low[u]);
                        if self.low[u] > self.order[v] {
                            self.bridges |= self.graph.bit(u, v);
                        }
                    } else {
                        self.low[v] = self.low[v].min(self.order[u]);
                    }
                }
            }
        }
        let mut search = Search {
            graph: self,
            adj: self.adjacency(),
            order: vec![0; self.n],
            low: vec![0; self.n],
            clock: 0,
            bridges: 0,
        };
        for v in 0..self.n {
            if search.order[v] == 0 {
                search.visit(v, None);
            }
        }
        search.bridges
    }

    pub fn bridges(&self) -> Vec<(usize, usize)> {
        Self {
            n: self.n,
            edges: self.bridge_mask(),
        }
        .edge_list()
    }

    /// `b(G)`: `G` with every bridge removed.
    pub fn bridgeless_core(&self) -> Self {
        Self {
            n: self.n,
            edges: self.edges & !self.bridge_mask(),
        }
    }

    /// Component sizes sorted in descending order.
    pub fn component_weights(&self) -> WeightVector {
        let mut sizes: Vec<u64> = self
            .components()
            .iter()
            .map(|c| c.count_ones() as u64)
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        WeightVector::new(sizes).expect("components are nonempty")
    }

    pub fn to_literal(&self) -> String {
        format_literal(self.n, self.edge_list())
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl FromStr for LabeledGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, edges) = parse_literal(s)?;
        Self::from_edges(n, edges)
    }
}

/// Reads one graph literal per line, skipping blank lines and `#` comments.
pub fn parse_graph_list(text: &str) -> Result<Vec<LabeledGraph>, GraphError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

fn check_enum(n: usize, max: usize) -> Result<(), GraphError> {
    if n == 0 || n > max {
        return Err(GraphError::TooLarge { n, max });
    }
    Ok(())
}

/// Every graph on `[n]`, in mask order.
pub fn all_graphs(n: usize) -> Result<impl Iterator<Item = LabeledGraph>, GraphError> {
    check_enum(n, MAX_ENUM_N)?;
    let count = 1u64 << pair_count(n);
    Ok((0..count).map(move |edges| LabeledGraph { n, edges }))
}

/// Class generated by `count` uniformly random graphs on `[n]`.
pub fn random_seed_class<R: rand::Rng + ?Sized>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Result<GraphClass, GraphError> {
    check_enum(n, MAX_ENUM_N)?;
    let space = 1u64 << pair_count(n);
    Ok(GraphClass::from_graphs((0..count).map(|_| LabeledGraph {
        n,
        edges: rng.gen_range(0..space),
    })))
}

/// A b-equivalence class: every graph whose bridgeless core is `core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    pub core: LabeledGraph,
    pub member_count: u64,
    pub connected_count: u64,
    pub weight_vector: WeightVector,
}

/// Partitions all `2^C(n,2)` graphs on `[n]` by bridgeless core.
pub fn equiv_classes(n: usize) -> Result<Vec<EquivClass>, GraphError> {
    check_enum(n, MAX_ENUM_N)?;
    let count = 1u64 << pair_count(n);
    let tallies: HashMap<u64, (u64, u64)> = (0..count)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<u64, (u64, u64)>, edges| {
            let g = LabeledGraph { n, edges };
            let entry = acc.entry(g.bridgeless_core().edges).or_default();
            entry.0 += 1;
            if g.is_connected() {
                entry.1 += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (core, (m, c)) in b {
                let e = a.entry(core).or_default();
                e.0 += m;
                e.1 += c;
            }
            a
        });
    let mut classes: Vec<EquivClass> = tallies
        .into_iter()
        .map(|(edges, (member_count, connected_count))| {
            let core = LabeledGraph { n, edges };
            EquivClass {
                core,
                member_count,
                connected_count,
                weight_vector: core.component_weights(),
            }
        })
        .collect();
    classes.sort_by_key(|c| c.core.edges);
    Ok(classes)
}

/// Checks `Pr(R^B connected) = Pr(F^n connected)` for every class on `[n]`,
/// together with the member and connected counts against the mass totals.
pub fn verify_class_identity(n: usize) -> Result<Report, GraphError> {
    check_enum(n, MAX_VERIFY_N)?;
    let mut report = Report::new();
    for class in equiv_classes(n)? {
        let observed = ratio(class.connected_count as i64, class.member_count as i64);
        let predicted = conn_prob_weighted(&class.weight_vector)?;
        let members_ok =
            BigUint::from(class.member_count) == forest_mass_total(&class.weight_vector)?;
        let connected_ok =
            BigUint::from(class.connected_count) == tree_mass_total(&class.weight_vector);
        let status = if observed == predicted && members_ok && connected_ok {
            Status::Pass
        } else {
            Status::Fail
        };
        report.push(
            ReportRow::new("class_identity", status)
                .param("n", n)
                .param("core", class.core.to_literal())
                .param("weights", &class.weight_vector)
                .param("members", class.member_count)
                .param("connected", class.connected_count)
                .lhs(Quantity::rational(&observed))
                .rhs(Quantity::rational(&predicted)),
        );
    }
    Ok(report)
}

/// Explicit per-`n` sets of graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphClass {
    members: BTreeMap<usize, BTreeSet<u64>>,
}

impl GraphClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graphs(graphs: impl IntoIterator<Item = LabeledGraph>) -> Self {
        let mut class = Self::new();
        for g in graphs {
            class.insert(g);
        }
        class
    }

    pub fn insert(&mut self, g: LabeledGraph) -> bool {
        self.members.entry(g.n).or_default().insert(g.edges)
    }

    pub fn contains(&self, g: &LabeledGraph) -> bool {
        self.members.get(&g.n).is_some_and(|s| s.contains(&g.edges))
    }

    pub fn len(&self, n: usize) -> usize {
        self.members.get(&n).map_or(0, BTreeSet::len)
    }

    pub fn is_empty(&self, n: usize) -> bool {
        self.len(n) == 0
    }

    pub fn members(&self, n: usize) -> impl Iterator<Item = LabeledGraph> + '_ {
        self.members
            .get(&n)
            .into_iter()
            .flatten()
            .map(move |&edges| LabeledGraph { n, edges })
    }

    pub fn forests(n: usize) -> Result<Self, GraphError> {
        Ok(Self::from_graphs(
            all_graphs(n)?.filter(LabeledGraph::is_forest),
        ))
    }

    pub fn all(n: usize) -> Result<Self, GraphError> {
        Ok(Self::from_graphs(all_graphs(n)?))
    }

    pub fn connected(n: usize) -> Result<Self, GraphError> {
        Ok(Self::from_graphs(
            all_graphs(n)?.filter(LabeledGraph::is_connected),
        ))
    }

    /// The full b-equivalence class of `core`.
    pub fn equivalence_class(core: LabeledGraph) -> Result<Self, GraphError> {
        let target = core.bridgeless_core();
        Ok(Self::from_graphs(
            all_graphs(core.n)?.filter(|g| g.bridgeless_core() == target),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `G + uv` is missing although `u`, `v` lie in different components.
    AddBridge,
    /// `G - e` is missing although `e` is a bridge of `G`.
    DeleteBridge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub graph: LabeledGraph,
    pub edge: (usize, usize),
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            ViolationKind::AddBridge => "adding",
            ViolationKind::DeleteBridge => "deleting",
        };
        write!(
            f,
            "{op} bridge ({},{}) to {} leaves the class",
            self.edge.0 + 1,
            self.edge.1 + 1,
            self.graph
        )
    }
}

fn addable_violation(class: &GraphClass, n: usize) -> Option<Violation> {
    for g in class.members(n) {
        let comps = g.components();
        for (i, &a) in comps.iter().enumerate() {
            for &b in &comps[i + 1..] {
                for u in crate::weightmodel::members(a) {
                    for v in crate::weightmodel::members(b) {
                        let (u, v) = (u.min(v), u.max(v));
                        if !class.contains(&g.with_edge(u, v)) {
                            return Some(Violation {
                                graph: g,
                                edge: (u, v),
                                kind: ViolationKind::AddBridge,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

fn deletable_violation(class: &GraphClass, n: usize) -> Option<Violation> {
    for g in class.members(n) {
        for (u, v) in g.bridges() {
            if !class.contains(&g.without_edge(u, v)) {
                return Some(Violation {
                    graph: g,
                    edge: (u, v),
                    kind: ViolationKind::DeleteBridge,
                });
            }
        }
    }
    None
}

pub fn is_bridge_addable(class: &GraphClass, n: usize) -> bool {
    addable_violation(class, n).is_none()
}

/// First witness that `class` restricted to `[n]` is not bridge-alterable.
pub fn alterability_violation(class: &GraphClass, n: usize) -> Option<Violation> {
    addable_violation(class, n).or_else(|| deletable_violation(class, n))
}

pub fn is_bridge_alterable(class: &GraphClass, n: usize) -> bool {
    alterability_violation(class, n).is_none()
}

/// Smallest superset of `seed` on `[n]` closed under adding and deleting bridges.
pub fn alterable_closure(seed: &GraphClass, n: usize) -> GraphClass {
    let mut closure = GraphClass::new();
    let mut queue: VecDeque<LabeledGraph> = seed.members(n).collect();
    for g in &queue {
        closure.insert(*g);
    }
    while let Some(g) = queue.pop_front() {
        let mut neighbours = Vec::new();
        for (u, v) in g.bridges() {
            neighbours.push(g.without_edge(u, v));
        }
        let comps = g.components();
        for (i, &a) in comps.iter().enumerate() {
            for &b in &comps[i + 1..] {
                for u in crate::weightmodel::members(a) {
                    for v in crate::weightmodel::members(b) {
                        neighbours.push(g.with_edge(u.min(v), u.max(v)));
                    }
                }
            }
        }
        for h in neighbours {
            if closure.insert(h) {
                queue.push_back(h);
            }
        }
    }
    closure
}

/// Fraction of connected members of `class` on `[n]`.
pub fn connected_fraction(class: &GraphClass, n: usize) -> Option<ExactRational> {
    let total = class.len(n);
    if total == 0 {
        return None;
    }
    let connected = class.members(n).filter(LabeledGraph::is_connected).count();
    Some(ratio(connected as i64, total as i64))
}

/// Checks `Pr(R_n connected) >= min_{n/3 < t <= n} Pr(F_t connected)` for a
/// bridge-alterable class.
pub fn verify_theorem(class: &GraphClass, n: usize) -> Result<Report, GraphError> {
    check_enum(n, MAX_VERIFY_N)?;
    let lhs = connected_fraction(class, n).ok_or(GraphError::EmptyClass(n))?;
    if let Some(v) = alterability_violation(class, n) {
        return Err(GraphError::NotAlterable {
            n,
            violation: v.to_string(),
        });
    }
    let table = CountTable::with_n_max(n);
    let (t_star, rhs) = rhs_theorem(&table, n, &ratio(1, 3))?;
    let status = if lhs >= rhs {
        Status::Pass
    } else {
        Status::Fail
    };
    let margin = &lhs - &rhs;
    Ok(std::iter::once(
        ReportRow::new("theorem", status)
            .param("n", n)
            .param("members", class.len(n))
            .param("t_star", t_star)
            .lhs(Quantity::rational(&lhs))
            .rhs(Quantity::rational(&rhs))
            .note(format!("margin {}/{}", margin.numer(), margin.denom())),
    )
    .collect())
}
