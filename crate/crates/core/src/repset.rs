//! Representative-set dynamic programming over a nice tree decomposition.
//!
//! For every bag the table maps a *pattern* — the order in which a solution
//! threads the bag's vertices, and which consecutive pairs are already
//! joined by a path through forgotten vertices — to a small set of path
//! sequences that stands in for all conforming sequences. A sequence `S₁`
//! may replace `S₂` when
//!
//! ```text
//! |χ(S₁) ∪ (χ(S₂) ∩ χ(X))| ≤ |χ(S₂)|
//! ```
//!
//! i.e. whatever `S₂`'s colors could still share with the rest of the graph
//! (only through the bag `X`), `S₁` costs no more. The length-aware variant
//! additionally requires `|S₁| ≤ |S₂|`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use smallvec::SmallVec;

use crate::color::{subsets_by_cardinality, ColorSet};
use crate::contraction::{
    compact_colors, lift_path, normalize_st, reduce_to_irreducible, restrict_to_source_component,
    Normalized,
};
use crate::error::{Error, Result};
use crate::graph::{
    chi_of_path, chi_of_vertices, first_disconnected_color, validate_instance, validate_st_path,
    ColoredGraph, Path, Vertex,
};
use crate::io::SolveStats;
use crate::td::{
    decompose, make_nice, validate_decomposition, NiceDecomposition, NodeKind, Strategy,
    TreeDecomposition,
};

pub const DEFAULT_TABLE_CAP: usize = 1_000_000;

/// Above this many colors a walk is refined by greedy color elimination
/// instead of exhaustive subset search. Both give a containment-minimal
/// color set; only the exhaustive search also minimizes cardinality.
pub const SUBSET_SEARCH_LIMIT: usize = 16;

/// `(v₁=s, σ₁, v₂, …, σ_{r-1}, v_r=t)`: `sigma[j]` says whether `verts[j]`
/// and `verts[j+1]` are already joined below the bag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub verts: SmallVec<[Vertex; 8]>,
    pub sigma: SmallVec<[bool; 8]>,
}

impl Pattern {
    pub fn new(verts: &[Vertex], sigma: &[bool]) -> Self {
        assert_eq!(verts.len(), sigma.len() + 1);
        Self { verts: verts.into(), sigma: sigma.into() }
    }

    pub fn gaps(&self) -> usize {
        self.sigma.len()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.verts.iter().position(|&x| x == v)
    }

    /// Inserts `v` inside gap `q` (which must be open) with the given
    /// presence bits on its two sides.
    fn insert(&self, q: usize, v: Vertex, left: bool, right: bool) -> Self {
        let mut p = self.clone();
        p.verts.insert(q + 1, v);
        p.sigma[q] = left;
        p.sigma.insert(q + 1, right);
        p
    }

    /// Removes the interior vertex at `pos`, fusing its two (closed) gaps.
    fn remove(&self, pos: usize) -> Self {
        let mut p = self.clone();
        p.verts.remove(pos);
        p.sigma.remove(pos);
        p.sigma[pos - 1] = true;
        p
    }
}

/// All patterns over a bag: every arrangement of useful (`|χ(v)| ≤ k`) bag
/// vertices between `s` and `t`, with every choice of presence bits, sorted
/// by vertex sequence and then bits.
pub fn enumerate_patterns(g: &ColoredGraph, bag: &[Vertex], k: usize) -> Vec<Pattern> {
    let (s, t) = (g.source(), g.target());
    let middle: Vec<Vertex> = bag
        .iter()
        .copied()
        .filter(|&v| v != s && v != t && g.chi(v).len() <= k)
        .collect();
    let mut out = Vec::new();
    let mut current = vec![s];
    let mut used = vec![false; middle.len()];
    fn arrange(
        middle: &[Vertex],
        used: &mut [bool],
        current: &mut Vec<Vertex>,
        t: Vertex,
        out: &mut Vec<Pattern>,
    ) {
        current.push(t);
        let gaps = current.len() - 1;
        for bits in 0..(1u32 << gaps) {
            let sigma: Vec<bool> = (0..gaps).map(|j| bits & (1 << (gaps - 1 - j)) != 0).collect();
            out.push(Pattern::new(current, &sigma));
        }
        current.pop();
        for i in 0..middle.len() {
            if !used[i] {
                used[i] = true;
                current.push(middle[i]);
                arrange(middle, used, current, t, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    arrange(&middle, &mut used, &mut current, t, &mut out);
    out.sort();
    out
}

/// One path per pattern gap (empty where the gap is open), with cached
/// color union and total length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathSequence {
    pub paths: Vec<Path>,
    pub chi: ColorSet,
    pub length: usize,
}

impl PathSequence {
    pub fn new(g: &ColoredGraph, paths: Vec<Path>) -> Self {
        let mut chi = ColorSet::new();
        let mut length = 0;
        for p in &paths {
            chi.union_with(&chi_of_vertices(g, p.vertices()));
            length += p.length();
        }
        Self { paths, chi, length }
    }

    /// Per-segment lengths.
    pub fn profile(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p.length()).collect()
    }

    fn split_gap(
        &self,
        g: &ColoredGraph,
        q: usize,
        left: Option<[Vertex; 2]>,
        right: Option<[Vertex; 2]>,
    ) -> Self {
        let mut out = self.clone();
        let edge = |e: Option<[Vertex; 2]>, out: &mut PathSequence| match e {
            Some(e) => {
                out.chi.union_with(g.chi(e[0]));
                out.chi.union_with(g.chi(e[1]));
                out.length += 1;
                Path(e.to_vec())
            }
            None => Path::empty(),
        };
        let l = edge(left, &mut out);
        let r = edge(right, &mut out);
        out.paths[q] = l;
        out.paths.insert(q + 1, r);
        out
    }

    /// Concatenates the paths on both sides of pattern position `pos`.
    fn glue(&self, pos: usize) -> Self {
        let mut out = self.clone();
        let right = out.paths.remove(pos);
        out.paths[pos - 1].0.extend_from_slice(&right.0[1..]);
        out
    }
}

/// Colors-only dominance on raw color sets.
pub fn preceq_colors(a: &ColorSet, b: &ColorSet, bag_chi: &ColorSet) -> bool {
    a.union_len(&b.intersection(bag_chi)) <= b.len()
}

pub fn preceq(s1: &PathSequence, s2: &PathSequence, bag_chi: &ColorSet) -> bool {
    preceq_colors(&s1.chi, &s2.chi, bag_chi)
}

pub fn preceq_with_length(s1: &PathSequence, s2: &PathSequence, bag_chi: &ColorSet) -> bool {
    s1.length <= s2.length && preceq(s1, s2, bag_chi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ColorOnly,
    LengthAware { ell: usize },
}

impl Mode {
    fn admits(&self, s: &PathSequence, k: usize) -> bool {
        s.chi.len() <= k
            && match *self {
                Mode::ColorOnly => true,
                Mode::LengthAware { ell } => s.length <= ell,
            }
    }

    pub fn dominates(&self, a: &PathSequence, b: &PathSequence, bag_chi: &ColorSet) -> bool {
        match self {
            Mode::ColorOnly => preceq(a, b, bag_chi),
            Mode::LengthAware { .. } => preceq_with_length(a, b, bag_chi),
        }
    }

    fn order(&self, a: &PathSequence, b: &PathSequence) -> Ordering {
        let head = a.chi.len().cmp(&b.chi.len());
        let head = match self {
            Mode::ColorOnly => head,
            Mode::LengthAware { .. } => head.then(a.length.cmp(&b.length)),
        };
        head.then_with(|| a.chi.cmp_bits(&b.chi)).then_with(|| a.paths.cmp(&b.paths))
    }

    /// Sequences sharing a key are totally ordered by dominance, so only the
    /// first of each key (in [`Mode::order`]) can survive.
    fn key(&self, s: &PathSequence, bag_chi: &ColorSet) -> (ColorSet, Vec<usize>) {
        let sig = s.chi.intersection(bag_chi);
        match self {
            Mode::ColorOnly => (sig, Vec::new()),
            Mode::LengthAware { .. } => (sig, s.profile()),
        }
    }

    /// Dominance thinning in the deterministic order; on mutual dominance
    /// the earlier sequence stays.
    pub fn thin(&self, mut cands: Vec<PathSequence>, k: usize, bag_chi: &ColorSet) -> Vec<PathSequence> {
        cands.retain(|s| self.admits(s, k));
        cands.sort_by(|a, b| self.order(a, b));
        cands.dedup();
        let mut keys = HashSet::new();
        let mut kept: Vec<PathSequence> = Vec::new();
        for s in cands {
            if !keys.insert(self.key(&s, bag_chi)) {
                continue;
            }
            if kept.iter().any(|x| self.dominates(x, &s, bag_chi)) {
                continue;
            }
            kept.retain(|x| !self.dominates(&s, x, bag_chi));
            kept.push(s);
        }
        kept
    }
}

/// Replaces the walk from `u` to `v` with colors `walk_chi` by a path whose
/// interior lies in `below`.
///
/// Colors-only: the shortest path under the first color subset (smallest
/// cardinality, then bit order) that admits a connection — a
/// containment-minimal choice. Length-aware: the shortest path using only
/// vertices with colors inside `walk_chi`, which is never longer than the
/// walk.
pub fn refine_walk(
    g: &ColoredGraph,
    mode: Mode,
    below: &dyn Fn(Vertex) -> bool,
    u: Vertex,
    v: Vertex,
    walk_chi: &ColorSet,
) -> Option<Path> {
    let search = |allowed: &ColorSet| {
        g.shortest_path_within(u, v, |x| {
            (x == u || x == v || below(x)) && g.chi(x).is_subset(allowed)
        })
    };
    let found = match mode {
        Mode::LengthAware { .. } => search(walk_chi),
        Mode::ColorOnly if walk_chi.len() <= SUBSET_SEARCH_LIMIT => {
            let ends = g.chi(u).union(g.chi(v));
            subsets_by_cardinality(walk_chi)
                .filter(|c| ends.is_subset(c))
                .find_map(|c| search(&c))
        }
        Mode::ColorOnly => {
            let mut current = walk_chi.clone();
            for c in walk_chi.iter() {
                let mut smaller = current.clone();
                smaller.remove(c);
                if search(&smaller).is_some() {
                    current = smaller;
                }
            }
            search(&current)
        }
    };
    found.map(Path)
}

/// Refines every walk of every sequence and thins the result, for a bag
/// whose forgotten-below set is `below`.
pub fn refine(
    g: &ColoredGraph,
    mode: Mode,
    k: usize,
    bag: &[Vertex],
    below: &[bool],
    sequences: &[PathSequence],
) -> Vec<PathSequence> {
    let bag_chi = chi_of_vertices(g, bag);
    let below = |x: Vertex| below[x];
    let mut memo = HashMap::new();
    let refined = sequences
        .iter()
        .filter_map(|s| refine_sequence(g, mode, &below, &mut memo, s))
        .collect();
    mode.thin(refined, k, &bag_chi)
}

type WalkMemo = HashMap<(Vertex, Vertex, ColorSet), Option<Path>>;

fn refine_sequence(
    g: &ColoredGraph,
    mode: Mode,
    below: &dyn Fn(Vertex) -> bool,
    memo: &mut WalkMemo,
    s: &PathSequence,
) -> Option<PathSequence> {
    let mut paths = Vec::with_capacity(s.paths.len());
    for p in &s.paths {
        if p.is_empty() {
            paths.push(Path::empty());
            continue;
        }
        let (u, v) = (p.first().unwrap(), p.last().unwrap());
        let walk_chi = chi_of_vertices(g, p.vertices());
        let key = (u, v, walk_chi);
        let refined = memo
            .entry(key)
            .or_insert_with_key(|(u, v, c)| refine_walk(g, mode, below, *u, *v, c))
            .clone()?;
        paths.push(refined);
    }
    Some(PathSequence::new(g, paths))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BagTable {
    pub entries: BTreeMap<Pattern, Vec<PathSequence>>,
}

impl BagTable {
    pub fn get(&self, p: &Pattern) -> &[PathSequence] {
        self.entries.get(p).map_or(&[], |v| v.as_slice())
    }

    /// Total number of stored sequences.
    pub fn size(&self) -> usize {
        self.entries.values().map(|v| v.len()).sum()
    }
}

/// The dynamic program over one nice decomposition of `g`.
pub struct Dp<'a> {
    g: &'a ColoredGraph,
    nice: &'a NiceDecomposition,
    mode: Mode,
    k: usize,
    cap: usize,
    forget_at: Vec<usize>,
    post: Vec<usize>,
    low: Vec<usize>,
}

pub struct DpRun {
    pub root: BagTable,
    pub max_table: usize,
}

impl<'a> Dp<'a> {
    pub fn new(g: &'a ColoredGraph, nice: &'a NiceDecomposition, mode: Mode, k: usize, cap: usize) -> Self {
        let m = nice.nodes.len();
        let mut forget_at = vec![usize::MAX; g.n()];
        for (i, node) in nice.nodes.iter().enumerate() {
            if let NodeKind::Forget(v) = node.kind {
                forget_at[v] = i;
            }
        }
        // Post-order numbers and subtree minima give O(1) ancestry tests.
        let mut post = vec![0; m];
        let mut low = vec![usize::MAX; m];
        let mut counter = 0;
        let mut stack = vec![(nice.root, false)];
        while let Some((i, done)) = stack.pop() {
            if done {
                post[i] = counter;
                low[i] = low[i].min(counter);
                counter += 1;
                for &c in &nice.nodes[i].children {
                    low[i] = low[i].min(low[c]);
                }
            } else {
                stack.push((i, true));
                stack.extend(nice.nodes[i].children.iter().map(|&c| (c, false)));
            }
        }
        Self { g, nice, mode, k, cap, forget_at, post, low }
    }

    /// Whether `v` has been forgotten in the subtree of `node`.
    pub fn below(&self, node: usize, v: Vertex) -> bool {
        let f = self.forget_at[v];
        f != usize::MAX && self.low[node] <= self.post[f] && self.post[f] <= self.post[node]
    }

    fn useful(&self, v: Vertex) -> bool {
        self.g.chi(v).len() <= self.k
    }

    /// Computes the table of `node` from its children's tables.
    pub fn step(&self, node: usize, children: &[&BagTable]) -> Result<BagTable> {
        let g = self.g;
        let nd = &self.nice.nodes[node];
        if children.len() != nd.children.len() {
            return Err(Error::Decomposition(format!(
                "node {node} expects {} child tables, got {}",
                nd.children.len(),
                children.len()
            )));
        }
        let (s, t) = (self.nice.source, self.nice.target);
        let mut cands: BTreeMap<Pattern, Vec<PathSequence>> = BTreeMap::new();
        match nd.kind {
            NodeKind::Leaf => {
                let open = Pattern::new(&[s, t], &[false]);
                let closed = Pattern::new(&[s, t], &[true]);
                let mut table = BagTable::default();
                table.entries.insert(open, vec![PathSequence::new(g, vec![Path::empty()])]);
                table.entries.insert(closed, Vec::new());
                return Ok(table);
            }
            NodeKind::Introduce(v) => {
                for (pat, seqs) in &children[0].entries {
                    cands.entry(pat.clone()).or_default().extend(seqs.iter().cloned());
                    if !self.useful(v) || seqs.is_empty() {
                        continue;
                    }
                    // `v` has no neighbor below the bag yet, so a path ending
                    // at `v` can only be a direct edge from a pattern
                    // neighbor.
                    for q in (0..pat.gaps()).filter(|&q| !pat.sigma[q]) {
                        let (a, b) = (pat.verts[q], pat.verts[q + 1]);
                        for (left, right) in [(false, false), (false, true), (true, false), (true, true)] {
                            if (left && !g.has_edge(a, v)) || (right && !g.has_edge(v, b)) {
                                continue;
                            }
                            let entry = cands.entry(pat.insert(q, v, left, right)).or_default();
                            for seq in seqs {
                                entry.push(seq.split_gap(
                                    g,
                                    q,
                                    left.then_some([a, v]),
                                    right.then_some([v, b]),
                                ));
                            }
                        }
                    }
                }
                self.finish(node, cands, false)
            }
            NodeKind::Forget(v) => {
                for (pat, seqs) in &children[0].entries {
                    match pat.position(v) {
                        None => cands.entry(pat.clone()).or_default().extend(seqs.iter().cloned()),
                        Some(pos) if pat.sigma[pos - 1] && pat.sigma[pos] => {
                            let entry = cands.entry(pat.remove(pos)).or_default();
                            entry.extend(seqs.iter().map(|seq| seq.glue(pos)));
                        }
                        // `v` leaves the bag unvisited: nothing can reach it later.
                        Some(_) => {}
                    }
                }
                self.finish(node, cands, true)
            }
            NodeKind::Join => {
                let mut by_verts: HashMap<&[Vertex], Vec<(&Pattern, &Vec<PathSequence>)>> =
                    HashMap::new();
                for (pat, seqs) in &children[1].entries {
                    by_verts.entry(&pat.verts[..]).or_default().push((pat, seqs));
                }
                for (p1, seqs1) in &children[0].entries {
                    let Some(partners) = by_verts.get(&p1.verts[..]) else { continue };
                    for &(p2, seqs2) in partners {
                        if p1.sigma.iter().zip(&p2.sigma).any(|(a, b)| *a && *b) {
                            continue;
                        }
                        let mut pat = p1.clone();
                        for (x, y) in pat.sigma.iter_mut().zip(&p2.sigma) {
                            *x |= *y;
                        }
                        let entry = cands.entry(pat).or_default();
                        for s1 in seqs1 {
                            for s2 in seqs2 {
                                let chi = s1.chi.union(&s2.chi);
                                if chi.len() > self.k {
                                    continue;
                                }
                                let paths = p2
                                    .sigma
                                    .iter()
                                    .enumerate()
                                    .map(|(j, &from2)| {
                                        if from2 { s2.paths[j].clone() } else { s1.paths[j].clone() }
                                    })
                                    .collect();
                                entry.push(PathSequence { paths, chi, length: s1.length + s2.length });
                            }
                        }
                    }
                }
                self.finish(node, cands, false)
            }
        }
    }

    fn finish(
        &self,
        node: usize,
        cands: BTreeMap<Pattern, Vec<PathSequence>>,
        refine_paths: bool,
    ) -> Result<BagTable> {
        let g = self.g;
        let bag_chi = chi_of_vertices(g, &self.nice.nodes[node].bag);
        let below = |x: Vertex| self.below(node, x);
        let mut memo = WalkMemo::new();
        let mut table = BagTable::default();
        for (pat, mut seqs) in cands {
            seqs.retain(|s| self.mode.admits(s, self.k));
            if seqs.len() > self.cap {
                return Err(Error::TableCap { node, size: seqs.len(), cap: self.cap });
            }
            if refine_paths {
                seqs = seqs
                    .iter()
                    .filter_map(|s| refine_sequence(g, self.mode, &below, &mut memo, s))
                    .collect();
            }
            let kept = self.mode.thin(seqs, self.k, &bag_chi);
            if !kept.is_empty() {
                table.entries.insert(pat, kept);
            }
        }
        Ok(table)
    }

    /// Runs the whole program bottom-up; child tables are dropped as soon as
    /// their parent is built.
    pub fn run(&self) -> Result<DpRun> {
        let mut tables: Vec<Option<BagTable>> = vec![None; self.nice.nodes.len()];
        let mut max_table = 0;
        for i in 0..self.nice.nodes.len() {
            let kids: Vec<BagTable> = self.nice.nodes[i]
                .children
                .iter()
                .map(|&c| tables[c].take().expect("child table computed"))
                .collect();
            let refs: Vec<&BagTable> = kids.iter().collect();
            let table = self.step(i, &refs)?;
            max_table = max_table.max(table.size());
            tables[i] = Some(table);
        }
        let root = tables[self.nice.root].take().unwrap_or_default();
        Ok(DpRun { root, max_table })
    }

    /// The witness stored for the closed root pattern `(s,1,t)`, if any.
    pub fn answer(&self, run: &DpRun) -> Option<Path> {
        let closed = Pattern::new(&[self.nice.source, self.nice.target], &[true]);
        run.root.get(&closed).first().map(|s| s.paths[0].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes(Path),
    No,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            Answer::Yes(p) => Some(p),
            Answer::No => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub table_cap: usize,
    /// A decomposition of the input graph to use instead of computing one.
    pub decomposition: Option<TreeDecomposition>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { strategy: Strategy::MinFill, table_cap: DEFAULT_TABLE_CAP, decomposition: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub answer: Answer,
    pub stats: SolveStats,
}

impl Outcome {
    fn trivial(answer: Answer) -> Self {
        Self { answer, stats: SolveStats::default() }
    }
}

/// Rejects malformed or non-color-connected input and checks an imported
/// decomposition against it.
pub(crate) fn precheck(g: &ColoredGraph, opts: &SolveOptions) -> Result<()> {
    let report = validate_instance(g);
    if !report.is_empty() {
        return Err(Error::InvalidInstance(report));
    }
    if let Some(color) = first_disconnected_color(g) {
        return Err(Error::NotColorConnected { color });
    }
    if let Some(td) = &opts.decomposition {
        let report = validate_decomposition(g, td);
        if !report.is_empty() {
            return Err(Error::Decomposition(format!("imported decomposition invalid: {report}")));
        }
    }
    Ok(())
}

/// Decomposes `work`, or carries the imported decomposition over through
/// `to_work` (original vertex → working vertex).
pub(crate) fn decomposition_for(
    work: &ColoredGraph,
    opts: &SolveOptions,
    to_work: impl Fn(Vertex) -> Option<Vertex>,
) -> Result<NiceDecomposition> {
    let td = match &opts.decomposition {
        Some(td) => td.map_vertices(to_work),
        None => decompose(work, opts.strategy)?,
    };
    Ok(make_nice(&td, work.source(), work.target()))
}

/// Runs the program on a normalized working graph and returns the witness
/// in working ids.
pub(crate) fn run_dp(
    work: &ColoredGraph,
    nice: &NiceDecomposition,
    mode: Mode,
    cap: usize,
) -> Result<(Option<Path>, SolveStats)> {
    let dp = Dp::new(work, nice, mode, work.budget(), cap);
    let run = dp.run()?;
    let stats = SolveStats { width: nice.width(), max_table: run.max_table, nodes: nice.len() };
    Ok((dp.answer(&run), stats))
}

pub fn solve_colored_path(g: &ColoredGraph) -> Result<Answer> {
    Ok(solve_colored_path_with(g, &SolveOptions::default())?.answer)
}

/// Decides whether a k-valid s-t path exists; on YES the path is returned
/// in `g`'s own vertex ids.
///
/// The instance is normalized (empty, nonadjacent `s`, `t`), cut down to
/// the component of `s`, color-contracted to an irreducible graph, and
/// solved there; the witness is lifted back.
pub fn solve_colored_path_with(g: &ColoredGraph, opts: &SolveOptions) -> Result<Outcome> {
    precheck(g, opts)?;
    let normalized = match normalize_st(g) {
        Normalized::EarlyNo => return Ok(Outcome::trivial(Answer::No)),
        Normalized::EarlyYes(p) => return Ok(Outcome::trivial(Answer::Yes(p))),
        Normalized::Instance(h) => h,
    };
    let Some((component, old_of)) = restrict_to_source_component(&normalized) else {
        return Ok(Outcome::trivial(Answer::No));
    };
    let (compact, _) = compact_colors(&component);
    let (work, trace) = reduce_to_irreducible(&compact);

    let finish = |p: Path, stats: SolveStats| -> Result<Outcome> {
        let lifted = lift_path(&trace, &compact, &p)?;
        let path = Path(lifted.vertices().iter().map(|&v| old_of[v]).collect());
        validate_st_path(g, &path)?;
        if chi_of_path(g, &path)?.len() > g.budget() {
            return Err(Error::InvalidPath("witness exceeds the color budget".into()));
        }
        Ok(Outcome { answer: Answer::Yes(path), stats })
    };

    if work.has_edge(work.source(), work.target()) {
        return finish(Path(vec![work.source(), work.target()]), SolveStats::default());
    }
    let mut new_of = vec![None; g.n()];
    for (i, &v) in old_of.iter().enumerate() {
        new_of[v] = Some(trace.vertex_map[i]);
    }
    let nice = decomposition_for(&work, opts, |v| new_of[v])?;
    let (found, stats) = run_dp(&work, &nice, Mode::ColorOnly, opts.table_cap)?;
    match found {
        Some(p) => finish(p, stats),
        None => Ok(Outcome { answer: Answer::No, stats }),
    }
}
