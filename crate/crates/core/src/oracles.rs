//! Brute-force ground truth. Nothing here shares code with the dynamic
//! program beyond the graph type and plain BFS.

use std::collections::VecDeque;

use crate::color::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{chi_of_vertices, ColoredGraph, Path, Vertex};

/// Largest graph accepted by [`enumerate_minimal_set`].
pub const MINIMAL_SET_LIMIT: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParetoLabel {
    pub colors: ColorSet,
    pub length: usize,
    pub vertex: Vertex,
    pub pred: Option<usize>,
}

fn label_dominates(a: &ParetoLabel, b: &ParetoLabel) -> bool {
    a.colors.is_subset(&b.colors) && a.length <= b.length
}

/// Label-correcting search over `(color set, length)` labels, FIFO order.
/// Returns every surviving label at `t` together with the arena.
fn pareto_search(g: &ColoredGraph, ell: Option<usize>) -> (Vec<ParetoLabel>, Vec<usize>) {
    let s = g.source();
    let mut arena = vec![ParetoLabel { colors: g.chi(s).clone(), length: 0, vertex: s, pred: None }];
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    at[s].push(0);
    let mut alive = vec![true];
    let mut queue = VecDeque::from([0]);
    while let Some(li) = queue.pop_front() {
        if !alive[li] {
            continue;
        }
        let (u, len) = (arena[li].vertex, arena[li].length);
        if ell.is_some_and(|e| len >= e) {
            continue;
        }
        for &w in g.neighbors(u) {
            let cand = ParetoLabel {
                colors: arena[li].colors.union(g.chi(w)),
                length: len + 1,
                vertex: w,
                pred: Some(li),
            };
            if at[w].iter().any(|&j| label_dominates(&arena[j], &cand)) {
                continue;
            }
            at[w].retain(|&j| {
                let keep = !label_dominates(&cand, &arena[j]);
                if !keep {
                    alive[j] = false;
                }
                keep
            });
            arena.push(cand);
            alive.push(true);
            let id = arena.len() - 1;
            at[w].push(id);
            queue.push_back(id);
        }
    }
    let t_labels = at[g.target()].clone();
    (arena, t_labels)
}

fn trace_back(arena: &[ParetoLabel], mut li: usize) -> Path {
    let mut out = vec![arena[li].vertex];
    while let Some(p) = arena[li].pred {
        li = p;
        out.push(arena[li].vertex);
    }
    out.reverse();
    erase_loops(out)
}

/// Shortcuts repeated vertices so a walk becomes a simple path over a
/// subset of its vertices.
fn erase_loops(walk: Vec<Vertex>) -> Path {
    let mut out: Vec<Vertex> = Vec::with_capacity(walk.len());
    for v in walk {
        if let Some(pos) = out.iter().position(|&x| x == v) {
            out.truncate(pos);
        }
        out.push(v);
    }
    Path(out)
}

fn best_label(arena: &[ParetoLabel], labels: &[usize]) -> Option<(usize, Path)> {
    labels
        .iter()
        .min_by_key(|&&l| (arena[l].colors.len(), arena[l].length))
        .map(|&l| (arena[l].colors.len(), trace_back(arena, l)))
}

/// Minimum number of colors over all s-t paths, with a witness; `None` when
/// `t` is unreachable.
pub fn pareto_exact(g: &ColoredGraph) -> Option<(usize, Path)> {
    let (arena, labels) = pareto_search(g, None);
    best_label(&arena, &labels)
}

/// Minimum number of colors over s-t paths with at most `ell` edges.
pub fn bounded_pareto(g: &ColoredGraph, ell: usize) -> Option<(usize, Path)> {
    let (arena, labels) = pareto_search(g, Some(ell));
    best_label(&arena, &labels)
}

/// Calls `visit` on every `size`-subset of `0..n` in lexicographic order;
/// stops early when `visit` returns `true`.
fn for_each_combination(n: usize, size: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if size > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn xp_search(g: &ColoredGraph, max_size: usize) -> Option<(usize, Path)> {
    let colors: Vec<usize> = g.used_colors().iter().collect();
    for size in 0..=max_size.min(colors.len()) {
        let mut found = None;
        for_each_combination(colors.len(), size, |idx| {
            let allowed: ColorSet = idx.iter().map(|&i| colors[i]).collect();
            found = g.shortest_path_within(g.source(), g.target(), |v| g.chi(v).is_subset(&allowed));
            found.is_some()
        });
        if let Some(p) = found {
            return Some((size, Path(p)));
        }
    }
    None
}

/// Decides k-validity by trying every color subset of size at most `k`,
/// smallest first; the witness is a shortest path within the first subset
/// that connects `s` to `t`.
pub fn xp_subset_solver(g: &ColoredGraph, k: usize) -> Result<Option<Path>> {
    let n_colors = g.used_colors().len();
    if n_colors > 24 && k >= 4 {
        return Err(Error::Guard(format!("{n_colors} colors with k = {k}")));
    }
    Ok(xp_search(g, k).map(|(_, p)| p))
}

/// Minimum color count by subset search (no budget).
pub fn xp_optimum(g: &ColoredGraph) -> Result<Option<usize>> {
    let n_colors = g.used_colors().len();
    if n_colors > 24 {
        return Err(Error::Guard(format!("{n_colors} colors")));
    }
    Ok(xp_search(g, n_colors).map(|(c, _)| c))
}

/// Every simple `u`-`v` path avoiding `w` with at most `k` colors, in DFS
/// order with ascending neighbors.
pub fn all_valid_paths(g: &ColoredGraph, u: Vertex, v: Vertex, w: Vertex, k: usize) -> Vec<Path> {
    fn dfs(
        g: &ColoredGraph,
        v: Vertex,
        w: Vertex,
        k: usize,
        stack: &mut Vec<Vertex>,
        on: &mut [bool],
        chi: &ColorSet,
        out: &mut Vec<Path>,
    ) {
        let cur = *stack.last().unwrap();
        if cur == v {
            out.push(Path(stack.clone()));
            return;
        }
        for &x in g.neighbors(cur) {
            if x == w || on[x] {
                continue;
            }
            let next = chi.union(g.chi(x));
            if next.len() > k {
                continue;
            }
            on[x] = true;
            stack.push(x);
            dfs(g, v, w, k, stack, on, &next, out);
            stack.pop();
            on[x] = false;
        }
    }
    let mut out = Vec::new();
    if u == w || v == w || g.chi(u).len() > k {
        return out;
    }
    let mut on = vec![false; g.n()];
    on[u] = true;
    dfs(g, v, w, k, &mut vec![u], &mut on, &g.chi(u).clone(), &mut out);
    out
}

/// Greedily extracts, in DFS order, a maximal set of k-valid `u`-`v` paths
/// in `G − w` that is minimal with respect to `w`:
/// (i) no two paths agree on `χ(P) ∩ χ(w)`;
/// (ii) no path's colors contain another's;
/// (iii) no path in `G − w` between the ends uses a strict subset of a
/// member's colors.
pub fn enumerate_minimal_set(
    g: &ColoredGraph,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    k: usize,
) -> Result<Vec<Path>> {
    if g.n() > MINIMAL_SET_LIMIT {
        return Err(Error::Guard(format!(
            "minimal-set enumeration limited to {MINIMAL_SET_LIMIT} vertices, got {}",
            g.n()
        )));
    }
    let paths = all_valid_paths(g, u, v, w, k);
    // Any u-v path in G − w (valid or not) can witness (iii); paths over k
    // colors cannot be strictly inside a k-valid one, so the valid ones
    // suffice.
    let color_sets: Vec<ColorSet> = paths.iter().map(|p| chi_of_vertices(g, p.vertices())).collect();
    let mut chosen: Vec<usize> = Vec::new();
    for (i, c) in color_sets.iter().enumerate() {
        let improvable = color_sets.iter().any(|d| d.len() < c.len() && d.is_subset(c));
        if improvable {
            continue;
        }
        let sig = c.intersection(g.chi(w));
        let clash = chosen.iter().any(|&j| {
            let d = &color_sets[j];
            d.intersection(g.chi(w)) == sig || d.is_subset(c) || c.is_subset(d)
        });
        if !clash {
            chosen.push(i);
        }
    }
    Ok(chosen.into_iter().map(|i| paths[i].clone()).collect())
}

/// Re-checks properties (i)–(iii) of a candidate minimal set.
pub fn is_minimal_set(g: &ColoredGraph, u: Vertex, v: Vertex, w: Vertex, k: usize, set: &[Path]) -> bool {
    let sets: Vec<ColorSet> = set.iter().map(|p| chi_of_vertices(g, p.vertices())).collect();
    let all: Vec<ColorSet> = all_valid_paths(g, u, v, w, k)
        .iter()
        .map(|p| chi_of_vertices(g, p.vertices()))
        .collect();
    for (i, a) in sets.iter().enumerate() {
        if a.len() > k || all.iter().any(|d| d.len() < a.len() && d.is_subset(a)) {
            return false;
        }
        for b in &sets[i + 1..] {
            if a.intersection(g.chi(w)) == b.intersection(g.chi(w)) || a.is_subset(b) || b.is_subset(a) {
                return false;
            }
        }
    }
    true
}

/// A minimum `x`-`y` vertex separator (excluding `x` and `y`) via unit
/// vertex capacities and augmenting paths; `None` when `x` and `y` are
/// adjacent or equal.
pub fn min_vertex_separator(g: &ColoredGraph, x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
    if x == y || g.has_edge(x, y) {
        return None;
    }
    // Vertex v splits into in = 2v and out = 2v+1; x and y have infinite
    // internal capacity.
    let n = g.n();
    let big = n + 1;
    let mut cap: std::collections::HashMap<(usize, usize), usize> = Default::default();
    let mut adj = vec![Vec::new(); 2 * n];
    let mut add = |a: usize, b: usize, c: usize, cap: &mut std::collections::HashMap<(usize, usize), usize>| {
        *cap.entry((a, b)).or_default() += c;
        cap.entry((b, a)).or_default();
        adj[a].push(b);
        adj[b].push(a);
    };
    for v in 0..n {
        let c = if v == x || v == y { big } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut cap);
    }
    for (a, b) in g.edges() {
        add(2 * a + 1, 2 * b, big, &mut cap);
        add(2 * b + 1, 2 * a, big, &mut cap);
    }
    let (src, sink) = (2 * x + 1, 2 * y);
    loop {
        let mut pred = vec![usize::MAX; 2 * n];
        pred[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if pred[b] == usize::MAX && cap[&(a, b)] > 0 {
                    pred[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if pred[sink] == usize::MAX {
            let reach = |v: usize| pred[v] != usize::MAX;
            let sep = (0..n).filter(|&v| reach(2 * v) && !reach(2 * v + 1)).collect();
            return Some(sep);
        }
        let mut b = sink;
        while b != src {
            let a = pred[b];
            *cap.get_mut(&(a, b)).unwrap() -= 1;
            *cap.get_mut(&(b, a)).unwrap() += 1;
            b = a;
        }
    }
}
