#![allow(dead_code)]

use colpath::generators::gen_random_planar;
use colpath::graph::chi_of_vertices;
use colpath::repset::{refine, Answer, Mode, PathSequence};
use colpath::{chi_of_path, validate_path, ColorSet, ColoredGraph, Path, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random color-connected planar instance: n in 4..=14, up to 6 colors,
/// budget up to 4.
pub fn instance(seed: u64) -> ColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(4..=14);
    let colors = rng.gen_range(0..=6);
    let k = rng.gen_range(0..=4);
    gen_random_planar(n, colors, seed).unwrap().with_budget(k)
}

/// Same, bounded in size.
pub fn small_instance(seed: u64, max_n: usize) -> ColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xface);
    let n = rng.gen_range(4..=max_n);
    let colors = rng.gen_range(0..=6);
    let k = rng.gen_range(0..=4);
    gen_random_planar(n, colors, seed).unwrap().with_budget(k)
}

/// Uncolored connected graph on `n` vertices: a random tree plus `extra`
/// random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> ColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && !edges.contains(&(u.min(v), u.max(v))) && !edges.contains(&(u.max(v), u.min(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    ColoredGraph::new(n, 0, &edges, vec![ColorSet::new(); n], 0, n - 1, 0).unwrap()
}

pub fn random_set(rng: &mut impl Rng, universe: usize) -> ColorSet {
    (0..universe).filter(|_| rng.gen_bool(0.5)).collect()
}

pub fn check_st_path(g: &ColoredGraph, p: &Path, ell: Option<usize>) {
    validate_path(g, p).unwrap();
    assert_eq!(p.first(), Some(g.source()));
    assert_eq!(p.last(), Some(g.target()));
    assert!(chi_of_path(g, p).unwrap().len() <= g.budget());
    if let Some(ell) = ell {
        assert!(p.length() <= ell);
    }
}

pub fn check_witness(g: &ColoredGraph, ans: &Answer, ell: Option<usize>) {
    if let Answer::Yes(p) = ans {
        check_st_path(g, p, ell);
    }
}

/// Every `a`-`b` path whose interior lies in `below`.
pub fn paths_through(g: &ColoredGraph, a: Vertex, b: Vertex, below: &[bool]) -> Vec<Path> {
    fn dfs(g: &ColoredGraph, b: Vertex, below: &[bool], stack: &mut Vec<Vertex>, out: &mut Vec<Path>) {
        let cur = *stack.last().unwrap();
        for &x in g.neighbors(cur) {
            if x == b {
                let mut p = stack.clone();
                p.push(b);
                out.push(Path(p));
            } else if below[x] && !stack.contains(&x) && out.len() < 400 {
                stack.push(x);
                dfs(g, b, below, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    dfs(g, b, below, &mut vec![a], &mut out);
    out
}

pub struct Setup {
    pub g: ColoredGraph,
    pub bag: Vec<Vertex>,
    pub below: Vec<bool>,
    /// Bag vertices in pattern order.
    pub pattern: Vec<Vertex>,
    pub inputs: Vec<PathSequence>,
}

pub fn setup(seed: u64) -> Option<Setup> {
    let g = small_instance(seed, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<Vertex> = (0..g.n()).collect();
    verts.shuffle(&mut rng);
    let size = rng.gen_range(2..=4.min(g.n() - 1));
    let bag: Vec<Vertex> = verts[..size].to_vec();
    let below: Vec<bool> = (0..g.n()).map(|v| !bag.contains(&v) && rng.gen_bool(0.7)).collect();
    let pattern = bag[..rng.gen_range(2..=size)].to_vec();
    let choices: Vec<Vec<Path>> = pattern
        .windows(2)
        .map(|w| {
            let mut ps = paths_through(&g, w[0], w[1], &below);
            if rng.gen_bool(0.3) {
                ps.push(Path::empty());
            }
            ps
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return None;
    }
    let inputs = (0..60)
        .map(|_| {
            let paths = choices.iter().map(|c| c.choose(&mut rng).unwrap().clone()).collect();
            PathSequence::new(&g, paths)
        })
        .collect();
    Some(Setup { g, bag, below, pattern, inputs })
}

/// Admissible inputs of `s` that no refine output dominates, and the
/// output count.
pub fn refine_violations(s: &Setup, mode: Mode) -> (usize, usize) {
    let k = s.g.budget() + 1;
    let bag_chi = chi_of_vertices(&s.g, &s.bag);
    let out = refine(&s.g, mode, k, &s.bag, &s.below, &s.inputs);
    let admissible = |x: &PathSequence| {
        x.chi.len() <= k
            && match mode {
                Mode::LengthAware { ell } => x.length <= ell,
                Mode::ColorOnly => true,
            }
    };
    let missed = s
        .inputs
        .iter()
        .filter(|x| admissible(x) && !out.iter().any(|o| mode.dominates(o, x, &bag_chi)))
        .count();
    (missed, out.len())
}
