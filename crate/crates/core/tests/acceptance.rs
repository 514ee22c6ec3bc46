//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::time::{Duration, Instant};

use colpath::bounded::{contract_distant, solve_bounded};
use colpath::generators::{gen_multicolored_clique, gen_vertex_cover, PartitionedGraph, SimpleGraph};
use colpath::geometry::{parse_scene, rasterize_scene, render_svg, write_scene, Obstacle, ObstacleScene};
use colpath::oracles::{bounded_pareto, pareto_exact, xp_optimum, xp_subset_solver};
use colpath::repset::{preceq_colors, solve_colored_path, Answer, Mode};
use colpath::{chi_of_path, reduce_to_irreducible, validate_path, ColoredGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{instance, random_set, refine_violations, setup, small_instance};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        println!("{} [{id}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.failed += usize::from(!ok);
    }
}

/// Witness is an s-t path in `g` within both budgets.
fn witness_ok(g: &ColoredGraph, ans: &Answer, ell: Option<usize>) -> bool {
    match ans {
        Answer::No => true,
        Answer::Yes(p) => {
            validate_path(g, p).is_ok()
                && p.first() == Some(g.source())
                && p.last() == Some(g.target())
                && chi_of_path(g, p).is_ok_and(|c| c.len() <= g.budget())
                && ell.is_none_or(|l| p.length() <= l)
        }
    }
}

fn oracle_equivalence(r: &mut Report) {
    let start = Instant::now();
    let (mut mismatches, mut bad_witness, mut yes) = (0, 0, 0);
    let total = 500;
    for seed in 10_000..10_000 + total {
        let g = instance(seed);
        let ans = solve_colored_path(&g).unwrap();
        let pareto = pareto_exact(&g).is_some_and(|(c, _)| c <= g.budget());
        let xp = xp_subset_solver(&g, g.budget()).unwrap().is_some();
        mismatches += usize::from(ans.is_yes() != pareto || pareto != xp);
        bad_witness += usize::from(!witness_ok(&g, &ans, None));
        yes += usize::from(ans.is_yes());
    }
    let t = start.elapsed();
    r.line(
        1,
        "oracle equivalence",
        mismatches == 0 && bad_witness == 0 && t <= Duration::from_secs(300),
        format!("{total} instances ({yes} yes), {mismatches} mismatches, {bad_witness} bad witnesses, {:.1}s (limit 300s)", t.as_secs_f64()),
    );
}

fn bounded_equivalence(r: &mut Report) {
    let (mut mismatches, mut bad_witness, mut yes) = (0, 0, 0);
    let total = 300;
    for seed in 20_000..20_000 + total {
        let g = instance(seed);
        let ell = (seed % 9) as usize;
        let ans = solve_bounded(&g, ell).unwrap();
        let want = bounded_pareto(&g, ell).is_some_and(|(c, _)| c <= g.budget());
        mismatches += usize::from(ans.is_yes() != want);
        bad_witness += usize::from(!witness_ok(&g, &ans, Some(ell)));
        yes += usize::from(ans.is_yes());
    }
    r.line(
        2,
        "bounded-length equivalence",
        mismatches == 0 && bad_witness == 0,
        format!("{total} instances (ℓ ≤ 8, {yes} yes), {mismatches} mismatches, {bad_witness} bad witnesses"),
    );
}

fn vc_brute(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|s| edges.iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn vertex_cover_soundness(r: &mut Report) {
    let check = |n: usize, edges: Vec<(usize, usize)>| {
        let h = SimpleGraph::new(n, &edges).unwrap();
        let g = gen_vertex_cover(&h, 0).unwrap();
        xp_optimum(&g).unwrap() == Some(vc_brute(n, &edges))
    };
    let (mut graphs, mut wrong) = (0, 0);
    for n in 2..=6 {
        let all = pairs(n);
        for mask in 1u32..1 << all.len() {
            let edges = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            graphs += 1;
            wrong += usize::from(!check(n, edges));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sampled = 0;
    for n in 7..=8 {
        let all = pairs(n);
        while sampled < 300 * (n - 6) {
            let density = rng.gen_range(0.1..0.7);
            let edges: Vec<_> = all.iter().copied().filter(|_| rng.gen_bool(density)).collect();
            if edges.is_empty() {
                continue;
            }
            sampled += 1;
            wrong += usize::from(!check(n, edges));
        }
    }
    r.line(
        3,
        "vertex-cover reduction",
        wrong == 0,
        format!("{graphs} graphs exhaustive (n ≤ 6) + {sampled} sampled (n = 7, 8), {wrong} optimum mismatches"),
    );
}

fn clique_brute(p: &PartitionedGraph) -> bool {
    let classes: Vec<Vec<usize>> = (0..p.k).map(|j| p.class(j)).collect();
    let adj = |u: usize, v: usize| p.graph.edges.contains(&(u.min(v), u.max(v)));
    let mut idx = vec![0usize; p.k];
    if classes.iter().any(|c| c.is_empty()) {
        return false;
    }
    loop {
        let pick: Vec<usize> = (0..p.k).map(|j| classes[j][idx[j]]).collect();
        if (0..p.k).all(|a| (a + 1..p.k).all(|b| adj(pick[a], pick[b]))) {
            return true;
        }
        let mut j = 0;
        while j < p.k {
            idx[j] += 1;
            if idx[j] < classes[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == p.k {
            return false;
        }
    }
}

fn partitioned(sizes: &[usize], edge_mask: u64, cross: &[(usize, usize)]) -> PartitionedGraph {
    let class_of: Vec<usize> = sizes.iter().enumerate().flat_map(|(j, &s)| std::iter::repeat_n(j, s)).collect();
    let n = class_of.len();
    let edges: Vec<_> = cross.iter().enumerate().filter(|(i, _)| edge_mask >> i & 1 == 1).map(|(_, &e)| e).collect();
    PartitionedGraph { graph: SimpleGraph::new(n, &edges).unwrap(), class_of, k: sizes.len() }
}

fn cross_pairs(sizes: &[usize]) -> Vec<(usize, usize)> {
    let class_of: Vec<usize> = sizes.iter().enumerate().flat_map(|(j, &s)| std::iter::repeat_n(j, s)).collect();
    pairs(class_of.len()).into_iter().filter(|&(u, v)| class_of[u] != class_of[v]).collect()
}

fn clique_soundness(r: &mut Report) {
    let decide = |p: &PartitionedGraph| {
        let g = gen_multicolored_clique(p).unwrap();
        g.budget() == p.k * (p.k - 1) / 2 && xp_subset_solver(&g, g.budget()).unwrap().is_some() == clique_brute(p)
    };
    let (mut exhaustive, mut sampled, mut wrong, mut yes) = (0, 0, 0, 0);
    // k = 2: every partitioned graph with class sizes ≤ 3.
    for a in 1..=3 {
        for b in 1..=3 {
            let cross = cross_pairs(&[a, b]);
            for mask in 0..1u64 << cross.len() {
                let p = partitioned(&[a, b], mask, &cross);
                exhaustive += 1;
                yes += usize::from(clique_brute(&p));
                wrong += usize::from(!decide(&p));
            }
        }
    }
    // k = 3: sampled, class sizes 1..=3 each.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    while sampled < 400 {
        let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=3)).collect();
        let cross = cross_pairs(&sizes);
        let density = rng.gen_range(0.3..0.95);
        let mask = (0..cross.len()).filter(|_| rng.gen_bool(density)).fold(0u64, |m, i| m | 1 << i);
        let p = partitioned(&sizes, mask, &cross);
        sampled += 1;
        yes += usize::from(clique_brute(&p));
        wrong += usize::from(!decide(&p));
    }
    r.line(
        4,
        "clique-gadget reduction",
        wrong == 0,
        format!("k=2: {exhaustive} exhaustive, k=3: {sampled} sampled ({yes} with a clique), {wrong} decision mismatches"),
    );
}

fn dominance_algebra(r: &mut Report) {
    const TRIALS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = 6;
    let (mut trans, mut mono, mut join) = ((0, 0), (0, 0), (0, 0));
    while trans.0 < TRIALS {
        let (a, b, c, x) = (random_set(&mut rng, u), random_set(&mut rng, u), random_set(&mut rng, u), random_set(&mut rng, u));
        if preceq_colors(&a, &b, &x) && preceq_colors(&b, &c, &x) {
            trans.0 += 1;
            trans.1 += usize::from(!preceq_colors(&a, &c, &x));
        }
    }
    while mono.0 < TRIALS {
        let (a, b, xj) = (random_set(&mut rng, u), random_set(&mut rng, u), random_set(&mut rng, u));
        let xi = xj.iter().filter(|_| rng.gen_bool(0.5)).collect();
        if preceq_colors(&a, &b, &xj) {
            mono.0 += 1;
            mono.1 += usize::from(!preceq_colors(&a, &b, &xi));
        }
    }
    while join.0 < TRIALS {
        let x = random_set(&mut rng, u);
        let (a, b, a2, b2) = (random_set(&mut rng, u), random_set(&mut rng, u), random_set(&mut rng, u), random_set(&mut rng, u));
        if a.intersection(&b).is_subset(&x) && preceq_colors(&a2, &a, &x) && preceq_colors(&b2, &b, &x) {
            join.0 += 1;
            join.1 += usize::from(!preceq_colors(&a2.union(&b2), &a.union(&b), &x));
        }
    }
    r.line(
        5,
        "dominance algebra",
        trans.1 + mono.1 + join.1 == 0,
        format!(
            "transitivity {}/{} ok, bag-monotonicity {}/{} ok, join-combination {}/{} ok",
            trans.0 - trans.1, trans.0, mono.0 - mono.1, mono.0, join.0 - join.1, join.0
        ),
    );
}

fn refine_contract(r: &mut Report) {
    let (mut suites, mut checked, mut color_missed, mut length_missed) = (0, 0, 0, 0);
    for seed in 0..600u64 {
        let Some(s) = setup(seed) else { continue };
        suites += 1;
        checked += s.inputs.len();
        color_missed += refine_violations(&s, Mode::ColorOnly).0;
        length_missed += refine_violations(&s, Mode::LengthAware { ell: 1 + (seed % 9) as usize }).0;
    }
    r.line(
        6,
        "refine contract",
        suites >= 200 && color_missed + length_missed == 0,
        format!(
            "{suites} random suites (n ≤ 12), {checked} input sequences; undominated: color-only {color_missed}, two-coordinate {length_missed}"
        ),
    );
}

fn contraction_safety(r: &mut Report) {
    let (mut reduced, mut reduce_wrong) = (0, 0);
    for seed in 30_000..30_250 {
        let g = small_instance(seed, 12);
        let (h, _) = reduce_to_irreducible(&g);
        reduced += 1;
        reduce_wrong += usize::from(pareto_exact(&g).map(|x| x.0) != pareto_exact(&h).map(|x| x.0));
    }
    let (mut distant, mut distant_wrong, mut shrunk) = (0, 0, 0);
    let mut seed = 40_000;
    while distant < 250 {
        seed += 1;
        let g = instance(seed);
        let ell = (seed % 6) as usize;
        if g.distances_from(g.source())[g.target()].is_none_or(|d| d > ell + 1) {
            continue;
        }
        let (h, _) = contract_distant(&g, ell);
        distant += 1;
        shrunk += usize::from(h.n() < g.n());
        distant_wrong += usize::from(bounded_pareto(&g, ell).map(|x| x.0) != bounded_pareto(&h, ell).map(|x| x.0));
    }
    r.line(
        7,
        "contraction safety",
        reduce_wrong == 0 && distant_wrong == 0,
        format!(
            "reduce_to_irreducible: {reduced} instances, {reduce_wrong} optimum changes; contract_distant: {distant} instances ({shrunk} shrunk), {distant_wrong} answer changes"
        ),
    );
}

fn scene_pipeline(r: &mut Report) {
    let start = Instant::now();
    let d = |cx, cy, r| Obstacle::Disk { cx, cy, r };
    let rect = |x1, y1, x2, y2| Obstacle::Rect { x1, y1, x2, y2 };
    let scene = ObstacleScene {
        width: 64.0,
        height: 64.0,
        resolution: 1,
        obstacles: vec![
            rect(20.0, 0.0, 22.0, 64.0),
            d(42.0, 6.0, 7.0),
            d(42.0, 18.0, 7.0),
            d(42.0, 30.0, 7.0),
            d(42.0, 42.0, 7.0),
            d(42.0, 55.0, 9.5),
            rect(28.0, 10.0, 35.0, 40.0),
            Obstacle::Polygon(vec![(50.0, 20.0), (62.0, 24.0), (54.0, 40.0)]),
            d(10.0, 50.0, 5.0),
            rect(4.0, 4.0, 12.0, 12.0),
        ],
        start: (2.5, 32.5),
        goal: (61.5, 32.5),
    };
    let outcome = (|| -> colpath::Result<(usize, String)> {
        let scene = parse_scene(&write_scene(&scene))?;
        let g = rasterize_scene(&scene)?;
        for k in 0..=scene.obstacles.len() {
            if let Answer::Yes(p) = solve_colored_path(&g.clone().with_budget(k))? {
                return Ok((k, render_svg(&scene, Some(&p))?));
            }
        }
        Err(colpath::Error::Scene("no path at any budget".into()))
    })();
    let t = start.elapsed();
    match outcome {
        Ok((k, svg)) => {
            let ok = svg.contains("<polyline") && t <= Duration::from_secs(60);
            r.line(
                8,
                "scene pipeline",
                ok,
                format!("64×64 cells, 10 obstacles, optimum {k}, SVG {} bytes with polyline, {:.2}s (limit 60s)", svg.len(), t.as_secs_f64()),
            );
        }
        Err(e) => r.line(8, "scene pipeline", false, format!("{e}")),
    }
}

fn main() {
    let mut r = Report { failed: 0 };
    oracle_equivalence(&mut r);
    bounded_equivalence(&mut r);
    vertex_cover_soundness(&mut r);
    clique_soundness(&mut r);
    dominance_algebra(&mut r);
    refine_contract(&mut r);
    contraction_safety(&mut r);
    scene_pipeline(&mut r);
    if r.failed > 0 {
        println!("{} acceptance criteria failed", r.failed);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
