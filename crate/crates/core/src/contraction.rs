//! Endpoint normalization and color contraction.
//!
//! Contracting an edge `xy` with `χ(x) = χ(y)` into a single vertex neither
//! creates nor destroys k-valid s-t paths on color-connected graphs, so the
//! solvers work on the irreducible quotient and lift the answer back.

use std::collections::{BTreeSet, VecDeque};

use crate::color::{ColorId, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Path, Vertex};

/// Record of a sequence of edge contractions.
///
/// `merges` are `(kept, absorbed)` pairs in original vertex ids, where each
/// id names the class it represents at the time of the merge. `vertex_map`
/// sends every original vertex to its vertex in the contracted graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContractionTrace {
    pub merges: Vec<(Vertex, Vertex)>,
    pub vertex_map: Vec<Vertex>,
}

impl ContractionTrace {
    pub fn identity(n: usize) -> Self {
        Self { merges: Vec::new(), vertex_map: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.merges.is_empty()
    }

    /// Number of vertices of the contracted graph.
    pub fn contracted_len(&self) -> usize {
        self.vertex_map.iter().max().map_or(0, |&m| m + 1)
    }

    /// Original vertices grouped by contracted vertex, ascending.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut classes = vec![Vec::new(); self.contracted_len()];
        for (v, &z) in self.vertex_map.iter().enumerate() {
            classes[z].push(v);
        }
        classes
    }

    /// Composes `self` (original → mid) with `next` (mid → final). Merge
    /// pairs of `next` are translated to original ids via class minima.
    pub fn then(&self, next: &ContractionTrace) -> ContractionTrace {
        let classes = self.classes();
        let mut merges = self.merges.clone();
        merges.extend(next.merges.iter().map(|&(a, b)| (classes[a][0], classes[b][0])));
        let vertex_map = self.vertex_map.iter().map(|&z| next.vertex_map[z]).collect();
        ContractionTrace { merges, vertex_map }
    }
}

/// Outcome of [`normalize_st`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Instance(ColoredGraph),
    EarlyNo,
    EarlyYes(Path),
}

/// Makes `s` and `t` empty and nonadjacent.
///
/// Every path pays for `χ(s) ∪ χ(t)`, so those colors are charged against
/// the budget up front and then removed from every vertex. Removing them
/// globally (not only from `s` and `t`) keeps the instance color-connected
/// and does not change which paths fit the reduced budget.
pub fn normalize_st(g: &ColoredGraph) -> Normalized {
    let (s, t) = (g.source(), g.target());
    let forced = g.chi(s).union(g.chi(t));
    if forced.len() > g.budget() {
        return Normalized::EarlyNo;
    }
    if g.has_edge(s, t) {
        return Normalized::EarlyYes(Path(vec![s, t]));
    }
    let k = g.budget() - forced.len();
    let chi = g.chis().iter().map(|c| c.difference(&forced)).collect();
    let n_colors = g.n_colors();
    Normalized::Instance(g.clone().with_chi(chi, n_colors).with_budget(k))
}

/// Drops colors that appear on no vertex and renumbers the rest densely.
/// Returns the new graph and, for each new color id, the original id.
pub fn compact_colors(g: &ColoredGraph) -> (ColoredGraph, Vec<ColorId>) {
    let used: Vec<ColorId> = g.used_colors().iter().collect();
    let mut new_of = vec![usize::MAX; used.last().map_or(0, |&m| m + 1)];
    for (i, &c) in used.iter().enumerate() {
        new_of[c] = i;
    }
    let chi = g.chis().iter().map(|c| c.remap(|x| Some(new_of[x]))).collect();
    (g.clone().with_chi(chi, used.len()), used)
}

/// Restricts `g` to the connected component of `s`. Returns `None` when `t`
/// lies elsewhere. Color classes are connected, so each lies wholly inside
/// or outside the kept component.
pub fn restrict_to_source_component(g: &ColoredGraph) -> Option<(ColoredGraph, Vec<Vertex>)> {
    let keep = g.component_of(g.source(), |_| true);
    if !keep[g.target()] {
        return None;
    }
    Some(g.induced_subgraph(&keep))
}

/// Mutable working copy used by every contraction routine. Vertex ids stay
/// original until [`Contractor::finish`] compacts them.
pub(crate) struct Contractor<'a> {
    g: &'a ColoredGraph,
    adj: Vec<BTreeSet<Vertex>>,
    chi: Vec<ColorSet>,
    alive: Vec<bool>,
    rep: Vec<Vertex>,
    source: Vertex,
    target: Vertex,
    merges: Vec<(Vertex, Vertex)>,
}

impl<'a> Contractor<'a> {
    pub(crate) fn new(g: &'a ColoredGraph) -> Self {
        Self {
            g,
            adj: (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect(),
            chi: g.chis().to_vec(),
            alive: vec![true; g.n()],
            rep: (0..g.n()).collect(),
            source: g.source(),
            target: g.target(),
            merges: Vec::new(),
        }
    }

    pub(crate) fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v]
    }

    pub(crate) fn chi(&self, v: Vertex) -> &ColorSet {
        &self.chi[v]
    }

    pub(crate) fn alive(&self, v: Vertex) -> bool {
        self.alive[v]
    }

    pub(crate) fn is_st_pair(&self, x: Vertex, y: Vertex) -> bool {
        (x == self.source && y == self.target) || (x == self.target && y == self.source)
    }

    /// Merges `absorb` into `keep`; the merged vertex gets `χ(keep) ∪
    /// χ(absorb)`. Parallel edges collapse.
    pub(crate) fn merge(&mut self, keep: Vertex, absorb: Vertex) {
        debug_assert!(self.adj[keep].contains(&absorb));
        let moved = std::mem::take(&mut self.adj[absorb]);
        for w in moved {
            self.adj[w].remove(&absorb);
            if w != keep {
                self.adj[w].insert(keep);
                self.adj[keep].insert(w);
            }
        }
        let extra = std::mem::take(&mut self.chi[absorb]);
        self.chi[keep].union_with(&extra);
        self.alive[absorb] = false;
        self.rep[absorb] = keep;
        if self.source == absorb {
            self.source = keep;
        }
        if self.target == absorb {
            self.target = keep;
        }
        self.merges.push((keep, absorb));
    }

    fn find(&self, mut v: Vertex) -> Vertex {
        while self.rep[v] != v {
            v = self.rep[v];
        }
        v
    }

    pub(crate) fn finish(self) -> (ColoredGraph, ContractionTrace) {
        let n = self.g.n();
        let mut new_id = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if self.alive[v] {
                new_id[v] = next;
                next += 1;
            }
        }
        let vertex_map: Vec<Vertex> = (0..n).map(|v| new_id[self.find(v)]).collect();
        let mut adj = vec![Vec::new(); next];
        let mut chi = vec![ColorSet::new(); next];
        for v in (0..n).filter(|&v| self.alive[v]) {
            adj[new_id[v]] = self.adj[v].iter().map(|&w| new_id[w]).collect();
            chi[new_id[v]] = self.chi[v].clone();
        }
        let g = ColoredGraph::from_adjacency_unchecked(
            adj,
            chi,
            self.g.n_colors(),
            new_id[self.source],
            new_id[self.target],
            self.g.budget(),
        )
        .with_length_bound(self.g.length_bound());
        (g, ContractionTrace { merges: self.merges, vertex_map })
    }
}

/// Contracts the edge `xy`, requiring `χ(x) = χ(y)`. The merged vertex keeps
/// the smaller id (later ids shift down by one) and becomes the source or
/// target if either endpoint was.
pub fn color_contract(
    g: &ColoredGraph,
    x: Vertex,
    y: Vertex,
) -> Result<(ColoredGraph, ContractionTrace)> {
    if x >= g.n() || y >= g.n() || !g.has_edge(x, y) {
        return Err(Error::Contraction(format!("{x} and {y} are not adjacent")));
    }
    if g.chi(x) != g.chi(y) {
        return Err(Error::Contraction(format!("{x} and {y} carry different colors")));
    }
    let mut c = Contractor::new(g);
    if c.is_st_pair(x, y) {
        return Err(Error::Contraction("refusing to merge s with t".into()));
    }
    c.merge(x.min(y), x.max(y));
    Ok(c.finish())
}

/// Applies color contractions until no adjacent pair other than `{s, t}`
/// has equal color sets.
///
/// Vertices are scanned in ascending id; each vertex absorbs its
/// smallest-id equal neighbor until none is left, then the scan moves on.
/// A finished vertex never regains an applicable pair, since every vertex it
/// becomes adjacent to later already carried a different color set.
pub fn reduce_to_irreducible(g: &ColoredGraph) -> (ColoredGraph, ContractionTrace) {
    let mut c = Contractor::new(g);
    let mut v = 0;
    while v < g.n() {
        if !c.alive(v) {
            v += 1;
            continue;
        }
        let partner = c
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| c.chi(w) == c.chi(v) && !c.is_st_pair(v, w));
        match partner {
            Some(w) => {
                let (keep, absorb) = (v.min(w), v.max(w));
                c.merge(keep, absorb);
                v = keep;
            }
            None => v += 1,
        }
    }
    c.finish()
}

/// True when no adjacent pair other than `{s, t}` shares a color set.
pub fn is_irreducible(g: &ColoredGraph) -> bool {
    g.edges().all(|(u, v)| {
        g.chi(u) != g.chi(v)
            || (u == g.source() && v == g.target())
            || (u == g.target() && v == g.source())
    })
}

/// Replays `trace.merges` on `g` and returns the contracted graph; used to
/// audit traces.
pub fn replay(g: &ColoredGraph, trace: &ContractionTrace) -> Result<ColoredGraph> {
    let mut c = Contractor::new(g);
    for &(keep, absorb) in &trace.merges {
        if !c.alive(keep) || !c.alive(absorb) || !c.neighbors(keep).contains(&absorb) {
            return Err(Error::Contraction(format!("merge ({keep},{absorb}) not applicable")));
        }
        c.merge(keep, absorb);
    }
    Ok(c.finish().0)
}

/// Maps a path of the contracted graph back to `original`.
///
/// Each contracted vertex is a connected class of original vertices. The
/// lift enters a class, walks inside it (breadth-first) to a vertex with an
/// edge into the next class, and continues; it starts at the original `s`
/// and ends at the original `t`. Classes are disjoint, so the result is a
/// simple path, and its color set is contained in that of `p` (equal when
/// the classes are color-uniform, as after color contraction).
pub fn lift_path(trace: &ContractionTrace, original: &ColoredGraph, p: &Path) -> Result<Path> {
    if trace.vertex_map.len() != original.n() {
        return Err(Error::InvalidPath("trace does not match the original graph".into()));
    }
    let zs = p.vertices();
    if zs.is_empty() {
        return Ok(Path::empty());
    }
    let classes = trace.classes();
    let map = &trace.vertex_map;
    let (s, t) = (original.source(), original.target());
    if map[s] != zs[0] || map[t] != *zs.last().unwrap() {
        return Err(Error::InvalidPath("path endpoints do not cover s and t".into()));
    }
    if zs.iter().any(|&z| z >= classes.len()) {
        return Err(Error::InvalidPath("vertex outside the contracted graph".into()));
    }

    let mut out = Vec::new();
    let mut entry = s;
    for (i, &z) in zs.iter().enumerate() {
        let inside = |v: Vertex| map[v] == z;
        let segment = match zs.get(i + 1) {
            Some(&next) => walk_to(original, entry, inside, |v| {
                original.neighbors(v).iter().any(|&w| map[w] == next)
            })
            .ok_or_else(|| Error::InvalidPath(format!("no edge between {z} and {next}")))?,
            None => walk_to(original, entry, inside, |v| v == t)
                .ok_or_else(|| Error::InvalidPath("class of t is not connected".into()))?,
        };
        let exit = *segment.last().unwrap();
        out.extend(segment);
        if let Some(&next) = zs.get(i + 1) {
            entry = *original
                .neighbors(exit)
                .iter()
                .find(|&&w| map[w] == next)
                .unwrap();
        }
    }
    let lifted = Path(out);
    crate::graph::validate_path(original, &lifted)?;
    Ok(lifted)
}

/// BFS from `from` inside `inside` to the first vertex accepted by `goal`
/// (ascending neighbor order).
fn walk_to(
    g: &ColoredGraph,
    from: Vertex,
    inside: impl Fn(Vertex) -> bool,
    goal: impl Fn(Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    let mut pred = std::collections::HashMap::from([(from, from)]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if goal(u) {
            let mut path = vec![u];
            let mut cur = u;
            while cur != from {
                cur = pred[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(u) {
            if inside(w) && !pred.contains_key(&w) {
                pred.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    None
}
