//! Instance generators: the vertex-cover and multicolored-clique reduction
//! gadgets, the universal "apex" color connector, and seeded random planar
//! instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::color::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Vertex};

/// A plain undirected graph, the input of the reductions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Normalized `(min, max)` edges, sorted and deduplicated.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Generator(format!("loop at {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::Generator(format!("edge {u}-{v} outside 0..{n}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self { n, edges: set.into_iter().collect() })
    }

    /// Parses `u v` lines; an optional `n <count>` line fixes the vertex
    /// count, which otherwise is one past the largest id.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad integer {t:?}") })
            };
            match toks.as_slice() {
                [] => {}
                ["n", c] => n = Some(num(c)?),
                [u, v] => edges.push((num(u)?, num(v)?)),
                _ => return Err(Error::Parse { line: i + 1, msg: "expected 'u v' or 'n <count>'".into() }),
            }
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        Self::new(n, &edges)
    }
}

/// Minimum vertex cover size by exhaustive search (small graphs only).
pub fn min_vertex_cover(h: &SimpleGraph) -> usize {
    assert!(h.n <= 24, "exhaustive vertex cover on {} vertices", h.n);
    (0u32..(1 << h.n))
        .filter(|m| h.edges.iter().all(|&(u, v)| m & (1 << u) != 0 || m & (1 << v) != 0))
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// The outerplanar vertex-cover gadget: empty `z₀ … z_m` in a row, and for
/// the i-th edge `{p, j}` (`p < j`) a pair `xᵢ`, `yᵢ` with colors `{j}` and
/// `{p}`, both adjacent to `z_{i−1}`, `zᵢ` and each other. An s-t path has
/// to pick an endpoint color for every edge, so the minimum number of
/// colors is the minimum vertex cover of `h`. Vertex ids: `zᵢ = i`,
/// `xᵢ = m + 2i − 1`, `yᵢ = m + 2i` (edges numbered from 1).
///
/// The output is not color-connected in general; wrap it with
/// [`gen_apex_connected`] for the FPT solvers.
pub fn gen_vertex_cover(h: &SimpleGraph, k: usize) -> Result<ColoredGraph> {
    if h.edges.is_empty() {
        return Err(Error::Generator("vertex-cover gadget needs at least one edge".into()));
    }
    let h = SimpleGraph::new(h.n, &h.edges)?;
    let m = h.edges.len();
    let n = 3 * m + 1;
    let mut chi = vec![ColorSet::new(); n];
    let mut edges = Vec::with_capacity(5 * m);
    for (i, &(p, j)) in h.edges.iter().enumerate() {
        let i = i + 1;
        let (x, y) = (m + 2 * i - 1, m + 2 * i);
        chi[x] = ColorSet::singleton(j);
        chi[y] = ColorSet::singleton(p);
        edges.extend([(i - 1, x), (i - 1, y), (x, y), (i, x), (i, y)]);
    }
    ColoredGraph::new(n, h.n, &edges, chi, 0, m, k)
}

/// Adds one vertex adjacent to everything and carrying every color in use.
/// The result is color-connected; a path through the new vertex pays for
/// all colors, so answers are unchanged whenever `k` is below that count.
pub fn gen_apex_connected(g: &ColoredGraph) -> ColoredGraph {
    let n = g.n();
    let mut adj: Vec<Vec<Vertex>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    for list in &mut adj {
        list.push(n);
    }
    adj.push((0..n).collect());
    let mut chi = g.chis().to_vec();
    chi.push(g.used_colors());
    ColoredGraph::from_adjacency_unchecked(adj, chi, g.n_colors(), g.source(), g.target(), g.budget())
        .with_length_bound(g.length_bound())
}

/// A graph whose vertices are split into `k` classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedGraph {
    pub graph: SimpleGraph,
    pub class_of: Vec<usize>,
    pub k: usize,
}

impl PartitionedGraph {
    pub fn class(&self, j: usize) -> Vec<usize> {
        (0..self.graph.n).filter(|&v| self.class_of[v] == j).collect()
    }

    /// Edges between different classes, in sorted order; edge `i` gets
    /// color `i`.
    pub fn cross_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| self.class_of[u] != self.class_of[v])
            .collect()
    }
}

impl PartitionedGraph {
    /// `SimpleGraph` text plus one `class <v> <j>` line per vertex; `k` is
    /// one past the largest class.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rest = String::new();
        let mut classes = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
            if toks.first() != Some(&"class") {
                rest.push_str(line);
                rest.push('\n');
                continue;
            }
            rest.push('\n');
            let bad = || Error::Parse { line: i + 1, msg: "expected 'class <v> <j>'".into() };
            let [_, v, j] = toks.as_slice() else { return Err(bad()) };
            classes.push((v.parse::<usize>().map_err(|_| bad())?, j.parse::<usize>().map_err(|_| bad())?));
        }
        let graph = SimpleGraph::parse(&rest)?;
        let n = graph.n.max(classes.iter().map(|&(v, _)| v + 1).max().unwrap_or(0));
        let graph = SimpleGraph { n, ..graph };
        let mut class_of = vec![None; n];
        for (v, j) in classes {
            if class_of[v].replace(j).is_some() {
                return Err(Error::Generator(format!("vertex {v} has two classes")));
            }
        }
        let class_of: Vec<usize> = class_of
            .into_iter()
            .enumerate()
            .map(|(v, j)| j.ok_or_else(|| Error::Generator(format!("vertex {v} has no class"))))
            .collect::<Result<_>>()?;
        let k = class_of.iter().map(|&j| j + 1).max().unwrap_or(0);
        Ok(Self { graph, class_of, k })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.graph.n);
        for &(u, v) in &self.graph.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        for (v, j) in self.class_of.iter().enumerate() {
            out.push_str(&format!("class {v} {j}\n"));
        }
        out
    }
}

/// `k` classes of `class_size` vertices; each cross-class pair is an edge
/// with probability `p`.
pub fn gen_random_partitioned(k: usize, class_size: usize, p: f64, seed: u64) -> PartitionedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k * class_size;
    let class_of: Vec<usize> = (0..n).map(|v| v / class_size.max(1)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if class_of[u] != class_of[v] && rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    PartitionedGraph { graph: SimpleGraph { n, edges }, class_of, k }
}

/// Exhaustive multicolored-clique test: one vertex per class, pairwise
/// adjacent.
pub fn has_multicolored_clique(p: &PartitionedGraph) -> bool {
    let classes: Vec<Vec<usize>> = (0..p.k).map(|j| p.class(j)).collect();
    let adjacent = |u: usize, v: usize| p.graph.edges.contains(&(u.min(v), u.max(v)));
    fn pick(classes: &[Vec<usize>], chosen: &mut Vec<usize>, adjacent: &dyn Fn(usize, usize) -> bool) -> bool {
        let j = chosen.len();
        if j == classes.len() {
            return true;
        }
        for &v in &classes[j] {
            if chosen.iter().all(|&u| adjacent(u, v)) {
                chosen.push(v);
                if pick(classes, chosen, adjacent) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pick(&classes, &mut Vec::new(), &adjacent)
}

/// The multicolored-clique gadget with budget `k' = k(k−1)/2`.
///
/// For each vertex `u` of class `j` there is a gadget holding, for every
/// other class in increasing order, copies of `u`'s neighbors in that class
/// (copy of `v` colored by the edge `uv`); consecutive class copies are
/// joined through one empty connector vertex. Empty `z₀ … z_k` chain the
/// gadgets class by class, `s = z₀`, `t = z_k`. Edges inside a class are
/// ignored. Only cross-class edges receive colors.
pub fn gen_multicolored_clique(p: &PartitionedGraph) -> Result<ColoredGraph> {
    let k = p.k;
    if k < 2 {
        return Err(Error::Generator(format!("clique gadget needs k >= 2, got {k}")));
    }
    if p.class_of.len() != p.graph.n || p.class_of.iter().any(|&c| c >= k) {
        return Err(Error::Generator("class assignment does not cover 0..n with classes 0..k".into()));
    }
    let cross = p.cross_edges();
    let color_of = |u: usize, v: usize| cross.binary_search(&(u.min(v), u.max(v))).ok();

    let mut chi: Vec<ColorSet> = vec![ColorSet::new(); k + 1];
    let mut edges = Vec::new();
    let fresh = |chi: &mut Vec<ColorSet>, c: ColorSet| {
        chi.push(c);
        chi.len() - 1
    };
    for j in 0..k {
        for u in p.class(j) {
            let others: Vec<usize> = (0..k).filter(|&x| x != j).collect();
            let mut layers: Vec<Vec<Vertex>> = Vec::with_capacity(k - 1);
            for &j2 in &others {
                let layer = p
                    .class(j2)
                    .into_iter()
                    .filter_map(|v| color_of(u, v))
                    .map(|c| fresh(&mut chi, ColorSet::singleton(c)))
                    .collect();
                layers.push(layer);
            }
            for r in 0..layers.len() - 1 {
                let y = fresh(&mut chi, ColorSet::new());
                edges.extend(layers[r].iter().map(|&a| (a, y)));
                edges.extend(layers[r + 1].iter().map(|&b| (y, b)));
            }
            edges.extend(layers[0].iter().map(|&a| (j, a)));
            edges.extend(layers[k - 2].iter().map(|&b| (b, j + 1)));
        }
    }
    let n = chi.len();
    ColoredGraph::new(n, cross.len(), &edges, chi, 0, k, k * (k - 1) / 2)
}

type Point = (i64, i64);

fn orient(a: Point, b: Point, c: Point) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2) = (orient(a, b, c).signum(), orient(a, b, d).signum());
    let (o3, o4) = (orient(c, d, a).signum(), orient(c, d, b).signum());
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Seeded random color-connected planar instance with budget 0 (callers
/// set their own budget).
///
/// Distinct integer points are joined greedily by straight segments, in
/// order of increasing length, whenever a segment neither crosses an
/// existing one nor passes through a point; the resulting triangulation is
/// thinned by deleting random edges that do not disconnect it. Each color
/// is a random connected region grown from a random vertex, avoiding the
/// endpoints, which are empty and chosen nonadjacent when possible.
pub fn gen_random_planar(n: usize, n_colors: usize, seed: u64) -> Result<ColoredGraph> {
    if n < 2 {
        return Err(Error::Generator(format!("need at least 2 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 8 * n as i64;
    let mut points: Vec<Point> = Vec::with_capacity(n);
    let mut taken = BTreeSet::new();
    while points.len() < n {
        let p = (rng.gen_range(0..span), rng.gen_range(0..span));
        if taken.insert(p) {
            points.push(p);
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let sq = |(u, v): (usize, usize)| {
        let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
        dx * dx + dy * dy
    };
    pairs.sort_by_key(|&e| (sq(e), e));
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (u, v) in pairs {
        let (a, b) = (points[u], points[v]);
        if (0..n).any(|r| r != u && r != v && on_segment(a, b, points[r])) {
            continue;
        }
        let blocked = edges.iter().any(|&(c, d)| {
            c != u && c != v && d != u && d != v && cross_properly(a, b, points[c], points[d])
        });
        if !blocked {
            edges.push((u, v));
        }
    }

    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    let mut alive = vec![true; edges.len()];
    for i in order {
        if !rng.gen_bool(0.35) {
            continue;
        }
        alive[i] = false;
        let kept: Vec<(usize, usize)> =
            edges.iter().zip(&alive).filter(|(_, &a)| a).map(|(&e, _)| e).collect();
        let probe = ColoredGraph::from_edges_unchecked(n, 0, &kept, vec![], 0, 1, 0);
        if !probe.is_connected() {
            alive[i] = true;
        }
    }
    let kept: Vec<(usize, usize)> = edges.iter().zip(&alive).filter(|(_, &a)| a).map(|(&e, _)| e).collect();
    let skeleton = ColoredGraph::from_edges_unchecked(n, 0, &kept, vec![], 0, 1, 0);

    let nonadjacent: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !skeleton.has_edge(u, v))
        .collect();
    let (s, t) = if let Some(&pair) = nonadjacent.choose(&mut rng) {
        if rng.gen_bool(0.5) { pair } else { (pair.1, pair.0) }
    } else {
        (0, 1)
    };

    let inner: Vec<Vertex> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut chi = vec![ColorSet::new(); n];
    if !inner.is_empty() {
        let max_region = (n / 4).max(1);
        for c in 0..n_colors {
            let size = rng.gen_range(1..=max_region);
            let start = *inner.choose(&mut rng).unwrap();
            let mut region = vec![start];
            let mut member = vec![false; n];
            member[start] = true;
            while region.len() < size {
                let frontier: Vec<Vertex> = region
                    .iter()
                    .flat_map(|&v| skeleton.neighbors(v).iter().copied())
                    .filter(|&w| !member[w] && w != s && w != t)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let Some(&next) = frontier.choose(&mut rng) else { break };
                member[next] = true;
                region.push(next);
            }
            for v in region {
                chi[v].insert(c);
            }
        }
    }
    ColoredGraph::new(n, n_colors, &kept, chi, s, t, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_color_connected;
    use crate::oracles::xp_optimum;

    #[test]
    fn vc_small_cases() {
        let k2 = SimpleGraph::new(2, &[(0, 1)]).unwrap();
        let g = gen_vertex_cover(&k2, 1).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(xp_optimum(&g).unwrap(), Some(1));

        let p4 = SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(min_vertex_cover(&p4), 2);
        assert_eq!(xp_optimum(&gen_vertex_cover(&p4, 2).unwrap()).unwrap(), Some(2));

        let k3 = SimpleGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(xp_optimum(&gen_vertex_cover(&k3, 2).unwrap()).unwrap(), Some(2));

        assert!(gen_vertex_cover(&SimpleGraph::default(), 0).is_err());
    }

    #[test]
    fn apex_connects_colors() {
        let p4 = SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let raw = gen_vertex_cover(&p4, 2).unwrap();
        assert!(!is_color_connected(&raw));
        let apex = gen_apex_connected(&raw);
        assert!(is_color_connected(&apex));
        assert_eq!(xp_optimum(&apex).unwrap(), Some(2));

        let empty = ColoredGraph::new(3, 0, &[(0, 1), (1, 2)], vec![], 0, 2, 0).unwrap();
        let apex = gen_apex_connected(&empty);
        assert!(apex.chi(3).is_empty());
        assert_eq!(xp_optimum(&apex).unwrap(), Some(0));
    }

    #[test]
    fn clique_gadget_small() {
        let one_edge = PartitionedGraph {
            graph: SimpleGraph::new(2, &[(0, 1)]).unwrap(),
            class_of: vec![0, 1],
            k: 2,
        };
        let g = gen_multicolored_clique(&one_edge).unwrap();
        assert_eq!(g.budget(), 1);
        assert_eq!(xp_optimum(&g).unwrap(), Some(1));

        let none = PartitionedGraph { graph: SimpleGraph::new(2, &[]).unwrap(), class_of: vec![0, 1], k: 2 };
        assert_eq!(xp_optimum(&gen_multicolored_clique(&none).unwrap()).unwrap(), None);

        let tri = PartitionedGraph {
            graph: SimpleGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
            class_of: vec![0, 1, 2],
            k: 3,
        };
        let g = gen_multicolored_clique(&tri).unwrap();
        assert_eq!(g.budget(), 3);
        assert!(has_multicolored_clique(&tri));
        assert_eq!(xp_optimum(&g).unwrap(), Some(3));

        let bad = PartitionedGraph { k: 1, ..tri };
        assert!(gen_multicolored_clique(&bad).is_err());
    }

    #[test]
    fn random_planar_shape() {
        let g = gen_random_planar(2, 3, 7).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.used_colors().is_empty());
        for seed in 0..50 {
            let g = gen_random_planar(12, 5, seed).unwrap();
            assert!(is_color_connected(&g));
            assert!(g.is_connected());
            assert!(g.edge_count() <= 3 * 12 - 6);
            assert!(!g.has_edge(g.source(), g.target()));
            assert!(g.chi(g.source()).is_empty() && g.chi(g.target()).is_empty());
            assert_eq!(g, gen_random_planar(12, 5, seed).unwrap());
        }
    }

    #[test]
    fn edge_list_parsing() {
        let h = SimpleGraph::parse("# triangle\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(h.n, 3);
        assert_eq!(h.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(SimpleGraph::parse("n 5\n0 1\n").unwrap().n, 5);
        assert!(SimpleGraph::parse("0 0\n").is_err());
    }

    #[test]
    fn partitioned_text_round_trip() {
        let p = gen_random_partitioned(3, 2, 0.6, 9);
        assert_eq!(p.graph.n, 6);
        assert!(p.graph.edges.iter().all(|&(u, v)| p.class_of[u] != p.class_of[v]));
        assert_eq!(PartitionedGraph::parse(&p.to_text()).unwrap(), p);
        assert!(PartitionedGraph::parse("0 1\nclass 0 0\n").is_err());
    }
}
