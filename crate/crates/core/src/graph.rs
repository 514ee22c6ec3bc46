//! The colored-graph instance model: an undirected graph whose vertices carry
//! color sets, with designated endpoints `s`, `t` and a color budget `k`.

use std::collections::VecDeque;
use std::fmt;

use crate::color::{ColorId, ColorSet};
use crate::error::{Error, Result};

pub type Vertex = usize;

/// An ordered vertex sequence. The empty path stands for an absent segment.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }
}

impl From<Vec<Vertex>> for Path {
    fn from(v: Vec<Vertex>) -> Self {
        Path(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange { vertex: Vertex },
    Loop { vertex: Vertex },
    DuplicateEdge { u: Vertex, v: Vertex },
    Asymmetric { u: Vertex, v: Vertex },
    ColorOutOfRange { vertex: Vertex, color: ColorId },
    SourceEqualsTarget,
    VertexUncovered { vertex: Vertex },
    EdgeUncovered { u: Vertex, v: Vertex },
    RunningIntersection { vertex: Vertex },
    NotATree(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Violation::Loop { vertex } => write!(f, "loop at {vertex}"),
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge {u}-{v}"),
            Violation::Asymmetric { u, v } => {
                write!(f, "asymmetric adjacency: {v} listed at {u} but not {u} at {v}")
            }
            Violation::ColorOutOfRange { vertex, color } => {
                write!(f, "color out of range: {color} at vertex {vertex}")
            }
            Violation::SourceEqualsTarget => write!(f, "source equals target"),
            Violation::VertexUncovered { vertex } => write!(f, "vertex {vertex} in no bag"),
            Violation::EdgeUncovered { u, v } => write!(f, "edge {u}-{v} in no bag"),
            Violation::RunningIntersection { vertex } => {
                write!(f, "running intersection violated for vertex {vertex}")
            }
            Violation::NotATree(msg) => write!(f, "bag links do not form a tree: {msg}"),
        }
    }
}

/// Problems found by [`validate_instance`]. Warnings never make an instance
/// malformed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.to_string().contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Vec<Vec<Vertex>>,
    chi: Vec<ColorSet>,
    n_colors: usize,
    source: Vertex,
    target: Vertex,
    budget: usize,
    length_bound: Option<usize>,
}

impl ColoredGraph {
    /// Builds and validates an instance from an edge list. Duplicate edges in
    /// the list are rejected.
    pub fn new(
        n: usize,
        n_colors: usize,
        edges: &[(Vertex, Vertex)],
        chi: Vec<ColorSet>,
        source: Vertex,
        target: Vertex,
        budget: usize,
    ) -> Result<Self> {
        let g = Self::from_edges_unchecked(n, n_colors, edges, chi, source, target, budget);
        let report = validate_instance(&g);
        if report.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    /// Builds an instance without validation. Out-of-range endpoints are
    /// kept as dangling entries so that [`validate_instance`] can report them.
    pub fn from_edges_unchecked(
        n: usize,
        n_colors: usize,
        edges: &[(Vertex, Vertex)],
        mut chi: Vec<ColorSet>,
        source: Vertex,
        target: Vertex,
        budget: usize,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u < n {
                adj[u].push(v);
            }
            if v < n && u != v {
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        chi.resize(n, ColorSet::new());
        Self { adj, chi, n_colors, source, target, budget, length_bound: None }
    }

    /// Builds an instance from adjacency lists as given; lists are sorted but
    /// otherwise untouched.
    pub fn from_adjacency_unchecked(
        mut adj: Vec<Vec<Vertex>>,
        chi: Vec<ColorSet>,
        n_colors: usize,
        source: Vertex,
        target: Vertex,
        budget: usize,
    ) -> Self {
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { adj, chi, n_colors, source, target, budget, length_bound: None }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn chi(&self, v: Vertex) -> &ColorSet {
        &self.chi[v]
    }

    pub fn chis(&self) -> &[ColorSet] {
        &self.chi
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn target(&self) -> Vertex {
        self.target
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn length_bound(&self) -> Option<usize> {
        self.length_bound
    }

    pub fn with_budget(mut self, k: usize) -> Self {
        self.budget = k;
        self
    }

    pub fn with_length_bound(mut self, ell: Option<usize>) -> Self {
        self.length_bound = ell;
        self
    }

    pub fn with_endpoints(mut self, s: Vertex, t: Vertex) -> Self {
        self.source = s;
        self.target = t;
        self
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn is_empty_vertex(&self, v: Vertex) -> bool {
        self.chi[v].is_empty()
    }

    /// Union of all vertex color sets.
    pub fn used_colors(&self) -> ColorSet {
        let mut all = ColorSet::new();
        for c in &self.chi {
            all.union_with(c);
        }
        all
    }

    pub fn color_vertices(&self, c: ColorId) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.chi[v].contains(c)).collect()
    }

    /// BFS distances from `from`; unreachable vertices get `None`.
    pub fn distances_from(&self, from: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path from `from` to `to` through vertices accepted by
    /// `allowed` (the endpoints must be accepted too). Neighbors are explored
    /// in ascending id order, so the result is deterministic.
    pub fn shortest_path_within(
        &self,
        from: Vertex,
        to: Vertex,
        allowed: impl Fn(Vertex) -> bool,
    ) -> Option<Vec<Vertex>> {
        if !allowed(from) || !allowed(to) {
            return None;
        }
        let mut pred = vec![usize::MAX; self.n()];
        pred[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[u] {
                if pred[w] == usize::MAX && allowed(w) {
                    pred[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Vertices reachable from `from` through vertices accepted by `allowed`.
    pub fn component_of(&self, from: Vertex, allowed: impl Fn(Vertex) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        if !allowed(from) {
            return seen;
        }
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0, |_| true).iter().all(|&b| b)
    }

    /// Induced subgraph on the vertices flagged in `keep`. Returns the new
    /// graph and, for each new vertex, its id in `self`. The endpoints must
    /// be kept.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (ColoredGraph, Vec<Vertex>) {
        let old_of: Vec<Vertex> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_of = vec![usize::MAX; self.n()];
        for (i, &v) in old_of.iter().enumerate() {
            new_of[v] = i;
        }
        let adj = old_of
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| keep[w])
                    .map(|&w| new_of[w])
                    .collect()
            })
            .collect();
        let chi = old_of.iter().map(|&v| self.chi[v].clone()).collect();
        let mut g = ColoredGraph::from_adjacency_unchecked(
            adj,
            chi,
            self.n_colors,
            new_of[self.source],
            new_of[self.target],
            self.budget,
        );
        g.length_bound = self.length_bound;
        (g, old_of)
    }

    /// Replaces the color sets (and universe size). Used by normalization
    /// and compaction.
    pub(crate) fn with_chi(mut self, chi: Vec<ColorSet>, n_colors: usize) -> Self {
        self.chi = chi;
        self.n_colors = n_colors;
        self
    }
}

/// Reports structural violations. An empty report means the instance is a
/// simple undirected graph with in-range colors and `s != t`. A warning is
/// added when the edge count rules out planarity.
pub fn validate_instance(g: &ColoredGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = g.n();
    for (u, ns) in g.adj.iter().enumerate() {
        for (i, &v) in ns.iter().enumerate() {
            if v >= n {
                report.violations.push(Violation::VertexOutOfRange { vertex: v });
                continue;
            }
            if v == u {
                report.violations.push(Violation::Loop { vertex: u });
                continue;
            }
            if i > 0 && ns[i - 1] == v {
                if u < v {
                    report.violations.push(Violation::DuplicateEdge { u, v });
                }
                continue;
            }
            if g.adj[v].binary_search(&u).is_err() {
                report.violations.push(Violation::Asymmetric { u, v });
            }
        }
    }
    for (v, c) in g.chi.iter().enumerate() {
        for color in c.iter().filter(|&color| color >= g.n_colors) {
            report.violations.push(Violation::ColorOutOfRange { vertex: v, color });
        }
    }
    for endpoint in [g.source, g.target] {
        if endpoint >= n {
            report.violations.push(Violation::VertexOutOfRange { vertex: endpoint });
        }
    }
    if g.source == g.target {
        report.violations.push(Violation::SourceEqualsTarget);
    }
    if n >= 3 && report.violations.is_empty() {
        let m = g.edge_count();
        if m > 3 * n - 6 {
            report
                .warnings
                .push(format!("not planar: {m} edges exceed 3n-6 = {}", 3 * n - 6));
        }
    }
    report
}

/// The smallest color whose vertex set does not induce a connected subgraph.
pub fn first_disconnected_color(g: &ColoredGraph) -> Option<ColorId> {
    let universe = g.used_colors().max_color().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<Vertex>> = vec![Vec::new(); universe];
    for v in 0..g.n() {
        for c in g.chi[v].iter() {
            members[c].push(v);
        }
    }
    members.iter().enumerate().find_map(|(c, vs)| {
        let first = *vs.first()?;
        let seen = g.component_of(first, |w| g.chi[w].contains(c));
        (!vs.iter().all(|&v| seen[v])).then_some(c)
    })
}

pub fn is_color_connected(g: &ColoredGraph) -> bool {
    first_disconnected_color(g).is_none()
}

/// Checks that `p` is a simple path in `g` (consecutive vertices adjacent).
pub fn validate_path(g: &ColoredGraph, p: &Path) -> Result<()> {
    let mut seen = vec![false; g.n()];
    for (i, &v) in p.0.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::InvalidPath(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidPath(format!("vertex {v} repeated")));
        }
        if i > 0 && !g.has_edge(p.0[i - 1], v) {
            return Err(Error::InvalidPath(format!("{} and {v} are not adjacent", p.0[i - 1])));
        }
    }
    Ok(())
}

/// Checks that `p` is a simple `s`-`t` path of `g`.
pub fn validate_st_path(g: &ColoredGraph, p: &Path) -> Result<()> {
    validate_path(g, p)?;
    if p.first() != Some(g.source()) || p.last() != Some(g.target()) {
        return Err(Error::InvalidPath("path does not run from s to t".into()));
    }
    Ok(())
}

/// Union of the color sets along `p`.
pub fn chi_of_path(g: &ColoredGraph, p: &Path) -> Result<ColorSet> {
    validate_path(g, p)?;
    Ok(chi_of_vertices(g, &p.0))
}

/// Union of color sets over arbitrary vertices (walks included).
pub fn chi_of_vertices(g: &ColoredGraph, vs: &[Vertex]) -> ColorSet {
    let mut out = ColorSet::new();
    for &v in vs {
        out.union_with(&g.chi[v]);
    }
    out
}

/// Maximum number of vertices carrying a single color; 0 for colorless
/// graphs.
pub fn intersection_number(g: &ColoredGraph) -> usize {
    let mut counts = std::collections::HashMap::<ColorId, usize>::new();
    for c in &g.chi {
        for color in c.iter() {
            *counts.entry(color).or_default() += 1;
        }
    }
    counts.values().copied().max().unwrap_or(0)
}
