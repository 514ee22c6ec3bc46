//! Tree decompositions: elimination-order heuristics, a small exact solver,
//! validation, and conversion to nice form with `s` and `t` in every bag.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, ValidationReport, Vertex, Violation};

/// Largest graph accepted by [`Strategy::ExactSmall`].
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    MinFill,
    MinDegree,
    ExactSmall,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min-fill" => Ok(Strategy::MinFill),
            "min-degree" => Ok(Strategy::MinDegree),
            "exact-small" => Ok(Strategy::ExactSmall),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

/// Bags linked into a rooted tree by parent pointers. Bags are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(|p| p.is_none())
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(i);
            }
        }
        ch
    }

    /// Replaces every vertex by `map[v]` (dropping `None`) and dedups bags.
    /// Used to carry a decomposition through contraction; the image of a
    /// valid decomposition under a contraction of connected classes is
    /// valid.
    pub fn map_vertices(&self, map: impl Fn(Vertex) -> Option<Vertex>) -> TreeDecomposition {
        let bags = self
            .bags
            .iter()
            .map(|b| {
                let set: BTreeSet<Vertex> = b.iter().filter_map(|&v| map(v)).collect();
                set.into_iter().collect()
            })
            .collect();
        TreeDecomposition { bags, parent: self.parent.clone() }
    }
}

pub fn decompose(g: &ColoredGraph, strategy: Strategy) -> Result<TreeDecomposition> {
    let order = match strategy {
        Strategy::MinFill => greedy_order(g, Greedy::Fill),
        Strategy::MinDegree => greedy_order(g, Greedy::Degree),
        Strategy::ExactSmall => {
            if g.n() > EXACT_LIMIT {
                return Err(Error::Decomposition(format!(
                    "exact-small accepts at most {EXACT_LIMIT} vertices, got {}",
                    g.n()
                )));
            }
            exact_order(g)
        }
    };
    Ok(from_elimination_order(g, &order))
}

#[derive(Clone, Copy)]
enum Greedy {
    Fill,
    Degree,
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let ns: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination order; ties broken by smaller vertex id. Scores are
/// maintained incrementally: eliminating `v` only changes the scores of
/// vertices within distance two of `v`.
fn greedy_order(g: &ColoredGraph, rule: Greedy) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let score = |adj: &[BTreeSet<Vertex>], v: Vertex| match rule {
        Greedy::Fill => fill_in(adj, v),
        Greedy::Degree => adj[v].len(),
    };
    let mut current: Vec<usize> = (0..n).map(|v| score(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (current[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        order.push(v);
        let ns: Vec<Vertex> = adj[v].iter().copied().collect();
        for &a in &ns {
            adj[a].remove(&v);
        }
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        let mut touched: BTreeSet<Vertex> = ns.iter().copied().collect();
        for &a in &ns {
            touched.extend(adj[a].iter().copied());
        }
        for u in touched {
            if !queue.remove(&(current[u], u)) {
                continue;
            }
            current[u] = score(&adj, u);
            queue.insert((current[u], u));
        }
    }
    order
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through
/// eliminated vertices: the neighborhood of `v` in the elimination graph.
fn elim_neighbors(adj: &[u32], eliminated: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(u) = stack.pop() {
        let mut ns = adj[u] & !seen;
        while ns != 0 {
            let w = ns.trailing_zeros() as usize;
            ns &= ns - 1;
            seen |= 1 << w;
            if eliminated & (1 << w) != 0 {
                stack.push(w);
            } else {
                out |= 1 << w;
            }
        }
    }
    out
}

struct ExactSearch {
    adj: Vec<u32>,
    n: usize,
    best: usize,
    best_order: Vec<Vertex>,
    order: Vec<Vertex>,
    seen: HashMap<u32, usize>,
}

impl ExactSearch {
    fn run(&mut self, eliminated: u32, width: usize) {
        let remaining = self.n - eliminated.count_ones() as usize;
        if remaining == 0 || remaining - 1 <= width {
            let total = width.max(remaining.saturating_sub(1));
            if total < self.best {
                self.best = total;
                self.best_order = self.order.clone();
                self.best_order.extend((0..self.n).filter(|&v| eliminated & (1 << v) == 0));
            }
            return;
        }
        match self.seen.get(&eliminated) {
            Some(&w) if w <= width => return,
            _ => {
                self.seen.insert(eliminated, width);
            }
        }
        let degrees: Vec<(usize, Vertex)> = (0..self.n)
            .filter(|&v| eliminated & (1 << v) == 0)
            .map(|v| (elim_neighbors(&self.adj, eliminated, v).count_ones() as usize, v))
            .collect();
        // Minimum degree lower-bounds the treewidth of what is left.
        let min_deg = degrees.iter().map(|d| d.0).min().unwrap_or(0);
        if width.max(min_deg) >= self.best {
            return;
        }
        let mut sorted = degrees;
        sorted.sort_unstable();
        for (d, v) in sorted {
            let w = width.max(d);
            if w >= self.best {
                break;
            }
            self.order.push(v);
            self.run(eliminated | (1 << v), w);
            self.order.pop();
        }
    }
}

/// Branch and bound over elimination orders, memoized on the eliminated
/// set. Starts from the min-fill order as the incumbent.
fn exact_order(g: &ColoredGraph) -> Vec<Vertex> {
    let n = g.n();
    let incumbent = greedy_order(g, Greedy::Fill);
    let best = from_elimination_order(g, &incumbent).width();
    let adj = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut search = ExactSearch {
        adj,
        n,
        best,
        best_order: incumbent,
        order: Vec::new(),
        seen: HashMap::new(),
    };
    search.run(0, 0);
    search.best_order
}

/// Builds the decomposition induced by an elimination order: the bag of `v`
/// is `v` plus its later neighbors in the filled graph, attached to the bag
/// of the earliest of those neighbors. Separate components are chained
/// together at their roots.
pub fn from_elimination_order(g: &ColoredGraph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent_vertex = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in later.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        parent_vertex.push(later.iter().copied().min_by_key(|&u| pos[u]));
    }
    let mut parent: Vec<Option<usize>> = parent_vertex.iter().map(|p| p.map(|u| pos[u])).collect();
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    if let Some((&last, rest)) = roots.split_last() {
        for &r in rest {
            parent[r] = Some(last);
        }
    }
    TreeDecomposition { bags, parent }
}

/// Checks coverage of vertices and edges, running intersection, and that
/// the parent links form a single rooted tree.
pub fn validate_decomposition(g: &ColoredGraph, td: &TreeDecomposition) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nb = td.bags.len();
    if td.parent.len() != nb {
        report
            .violations
            .push(Violation::NotATree(format!("{} bags but {} parent links", nb, td.parent.len())));
        return report;
    }
    let roots = td.parent.iter().filter(|p| p.is_none()).count();
    if nb > 0 && roots != 1 {
        report.violations.push(Violation::NotATree(format!("{roots} roots")));
    }
    for i in 0..nb {
        let mut cur = i;
        let mut steps = 0;
        while let Some(p) = td.parent[cur] {
            if p >= nb {
                report.violations.push(Violation::NotATree(format!("bag {cur} has parent {p}")));
                break;
            }
            cur = p;
            steps += 1;
            if steps > nb {
                report.violations.push(Violation::NotATree(format!("cycle through bag {i}")));
                break;
            }
        }
    }
    if !report.is_empty() {
        return report;
    }

    let n = g.n();
    let sets: Vec<BTreeSet<Vertex>> = td.bags.iter().map(|b| b.iter().copied().collect()).collect();
    let mut count = vec![0usize; n];
    let mut linked = vec![0usize; n];
    for (i, bag) in sets.iter().enumerate() {
        for &v in bag {
            if v >= n {
                report.violations.push(Violation::VertexOutOfRange { vertex: v });
                continue;
            }
            count[v] += 1;
            if td.parent[i].is_some_and(|p| sets[p].contains(&v)) {
                linked[v] += 1;
            }
        }
    }
    for v in 0..n {
        if count[v] == 0 {
            report.violations.push(Violation::VertexUncovered { vertex: v });
        } else if count[v] - linked[v] != 1 {
            report.violations.push(Violation::RunningIntersection { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        if !sets.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            report.violations.push(Violation::EdgeUncovered { u, v });
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub bag: Vec<Vertex>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// A nice decomposition whose nodes are stored children-first, so a single
/// forward pass visits every child before its parent. The root is last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
    pub source: Vertex,
    pub target: Vertex,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain decomposition over the same bags, for validation.
    pub fn to_decomposition(&self) -> TreeDecomposition {
        let mut parent = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(i);
            }
        }
        TreeDecomposition { bags: self.nodes.iter().map(|x| x.bag.clone()).collect(), parent }
    }

    /// Checks the per-kind bag relations and the `{s, t}` conditions.
    pub fn check(&self) -> std::result::Result<(), String> {
        let st = sorted(vec![self.source, self.target]);
        if self.nodes.get(self.root).map(|r| &r.bag) != Some(&st) {
            return Err("root bag is not {s,t}".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if !node.bag.contains(&self.source) || !node.bag.contains(&self.target) {
                return Err(format!("node {i} misses s or t"));
            }
            if node.children.iter().any(|&c| c >= i) {
                return Err(format!("node {i} precedes a child"));
            }
            let child = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NodeKind::Leaf => node.children.is_empty() && node.bag == st,
                NodeKind::Introduce(v) => {
                    node.children.len() == 1
                        && !child(0).contains(&v)
                        && *child(0) == without(&node.bag, v)
                        && node.bag.contains(&v)
                }
                NodeKind::Forget(v) => {
                    node.children.len() == 1
                        && child(0).contains(&v)
                        && without(child(0), v) == node.bag
                }
                NodeKind::Join => {
                    node.children.len() == 2 && *child(0) == node.bag && *child(1) == node.bag
                }
            };
            if !ok {
                return Err(format!("node {i} violates its {:?} relation", node.kind));
            }
        }
        Ok(())
    }
}

fn sorted(mut v: Vec<Vertex>) -> Vec<Vertex> {
    v.sort_unstable();
    v.dedup();
    v
}

fn without(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    bag.iter().copied().filter(|&x| x != v).collect()
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<Vertex>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    /// Extends `top` (with bag `from`) to bag `to`: forget `from \ to`,
    /// then introduce `to \ from`, each in ascending order.
    fn chain(&mut self, mut top: usize, from: &[Vertex], to: &[Vertex]) -> usize {
        let mut bag = from.to_vec();
        for &v in from.iter().filter(|v| !to.contains(v)) {
            bag.retain(|&x| x != v);
            top = self.push(bag.clone(), NodeKind::Forget(v), vec![top]);
        }
        for &v in to.iter().filter(|v| !from.contains(v)) {
            bag.push(v);
            bag.sort_unstable();
            top = self.push(bag.clone(), NodeKind::Introduce(v), vec![top]);
        }
        top
    }
}

/// Converts a valid decomposition into nice form. `s` and `t` are added to
/// every bag; leaves start from `{s, t}` and the root is forgotten down to
/// `{s, t}`. Multiple children are combined with a left-deep row of binary
/// joins.
pub fn make_nice(td: &TreeDecomposition, s: Vertex, t: Vertex) -> NiceDecomposition {
    let st = sorted(vec![s, t]);
    let mut b = NiceBuilder { nodes: Vec::new() };
    let Some(root) = td.root() else {
        let root = b.push(st, NodeKind::Leaf, vec![]);
        return NiceDecomposition { nodes: b.nodes, root, source: s, target: t };
    };
    let bags: Vec<Vec<Vertex>> = td
        .bags
        .iter()
        .map(|bag| sorted(bag.iter().copied().chain([s, t]).collect()))
        .collect();
    let children = td.children();

    // Iterative postorder so that long path-like decompositions do not
    // exhaust the stack.
    let mut top = vec![usize::MAX; bags.len()];
    let mut stack = vec![(root, false)];
    while let Some((i, expanded)) = stack.pop() {
        if !expanded {
            stack.push((i, true));
            stack.extend(children[i].iter().rev().map(|&c| (c, false)));
            continue;
        }
        let bag = &bags[i];
        let tops: Vec<usize> =
            children[i].iter().map(|&c| b.chain(top[c], &bags[c], bag)).collect();
        top[i] = match tops.split_first() {
            None => {
                let leaf = b.push(st.clone(), NodeKind::Leaf, vec![]);
                b.chain(leaf, &st, bag)
            }
            Some((&first, rest)) => rest
                .iter()
                .fold(first, |acc, &x| b.push(bag.clone(), NodeKind::Join, vec![acc, x])),
        };
    }
    let root = b.chain(top[root], &bags[root], &st);
    NiceDecomposition { nodes: b.nodes, root, source: s, target: t }
}
