//! Colored paths with an additional length budget `ℓ`, and the solvers that
//! reduce other settings to it.

use crate::contraction::{
    compact_colors, lift_path, normalize_st, reduce_to_irreducible, restrict_to_source_component,
    Contractor, ContractionTrace, Normalized,
};
use crate::error::{Error, Result};
use crate::graph::{chi_of_path, intersection_number, validate_st_path, ColoredGraph, Path, Vertex};
use crate::io::SolveStats;
use crate::repset::{decomposition_for, precheck, run_dp, Answer, Mode, Outcome, SolveOptions};

pub use crate::repset::preceq_with_length;

/// Absorbs every vertex farther than `ℓ + 1` from `s` into a neighbor.
///
/// The smallest-id far vertex is merged into its smallest-id neighbor, the
/// merged vertex carrying both color sets; this repeats until no far vertex
/// is left. A merged vertex is never nearer than `ℓ + 1`, so distances of
/// near vertices do not change and no s-t path of length at most `ℓ` is
/// created or destroyed. `t` must be within distance `ℓ + 1`.
pub fn contract_distant(g: &ColoredGraph, ell: usize) -> (ColoredGraph, ContractionTrace) {
    let dist = g.distances_from(g.source());
    let far: Vec<bool> = dist.iter().map(|d| d.is_some_and(|d| d > ell + 1)).collect();
    let mut c = Contractor::new(g);
    for v in 0..g.n() {
        // Earlier far vertices were merged into their neighbors, so `v` is
        // still alive here; its smallest alive neighbor exists because `v`
        // is connected to `s`.
        if far[v] && c.alive(v) {
            let into = *c.neighbors(v).iter().next().expect("far vertex has a neighbor");
            c.merge(into, v);
        }
    }
    c.finish()
}

pub fn refine_with_length(
    g: &ColoredGraph,
    k: usize,
    ell: usize,
    bag: &[Vertex],
    below: &[bool],
    sequences: &[crate::repset::PathSequence],
) -> Vec<crate::repset::PathSequence> {
    crate::repset::refine(g, Mode::LengthAware { ell }, k, bag, below, sequences)
}

pub fn solve_bounded(g: &ColoredGraph, ell: usize) -> Result<Answer> {
    Ok(solve_bounded_with(g, ell, &SolveOptions::default())?.answer)
}

/// Decides whether an s-t path with at most `k` colors and at most `ell`
/// edges exists. Color contraction is not applied here: it can shorten
/// paths.
pub fn solve_bounded_with(g: &ColoredGraph, ell: usize, opts: &SolveOptions) -> Result<Outcome> {
    precheck(g, opts)?;
    let no = || Ok(Outcome { answer: Answer::No, stats: SolveStats::default() });
    let normalized = match normalize_st(g) {
        Normalized::EarlyNo => return no(),
        Normalized::EarlyYes(p) if p.length() <= ell => {
            return Ok(Outcome { answer: Answer::Yes(p), stats: SolveStats::default() })
        }
        Normalized::EarlyYes(_) => return no(),
        Normalized::Instance(h) => h,
    };
    let Some((component, old_of)) = restrict_to_source_component(&normalized) else {
        return no();
    };
    if component.distances_from(component.source())[component.target()].is_none_or(|d| d > ell) {
        return no();
    }
    let (compact, _) = compact_colors(&component);
    let (work, trace) = contract_distant(&compact, ell);

    let mut new_of = vec![None; g.n()];
    for (i, &v) in old_of.iter().enumerate() {
        new_of[v] = Some(trace.vertex_map[i]);
    }
    let nice = decomposition_for(&work, opts, |v| new_of[v])?;
    let (found, stats) = run_dp(&work, &nice, Mode::LengthAware { ell }, opts.table_cap)?;
    let Some(p) = found else {
        return Ok(Outcome { answer: Answer::No, stats });
    };
    let lifted = lift_path(&trace, &compact, &p)?;
    let path = Path(lifted.vertices().iter().map(|&v| old_of[v]).collect());
    validate_st_path(g, &path)?;
    if path.length() > ell || chi_of_path(g, &path)?.len() > g.budget() {
        return Err(Error::InvalidPath("witness violates the budgets".into()));
    }
    Ok(Outcome { answer: Answer::Yes(path), stats })
}

/// The bounded solver with a caller-chosen length cap.
pub fn solve_via_length_bound(g: &ColoredGraph, h_of_k: usize) -> Result<Answer> {
    solve_bounded(g, h_of_k)
}

/// Length cap that is safe for the color-only question on an irreducible
/// graph: a path with at most `k` colors has at most `k·ι` nonempty
/// vertices and, apart from the endpoints' own edge, no two consecutive
/// empty vertices.
pub fn intersection_length_bound(k: usize, iota: usize) -> usize {
    2 * k * iota + 1
}

pub fn solve_bounded_intersection(g: &ColoredGraph) -> Result<Answer> {
    Ok(solve_bounded_intersection_with(g, &SolveOptions::default())?.answer)
}

/// Answers the color-only question through the bounded solver, using the
/// cap [`intersection_length_bound`] computed on the normalized, irreducible
/// graph (its budget and intersection number).
pub fn solve_bounded_intersection_with(g: &ColoredGraph, opts: &SolveOptions) -> Result<Outcome> {
    precheck(g, opts)?;
    let normalized = match normalize_st(g) {
        Normalized::EarlyNo => return Ok(Outcome { answer: Answer::No, stats: SolveStats::default() }),
        Normalized::EarlyYes(p) => {
            return Ok(Outcome { answer: Answer::Yes(p), stats: SolveStats::default() })
        }
        Normalized::Instance(h) => h,
    };
    let Some((component, old_of)) = restrict_to_source_component(&normalized) else {
        return Ok(Outcome { answer: Answer::No, stats: SolveStats::default() });
    };
    let (compact, _) = compact_colors(&component);
    let (work, trace) = reduce_to_irreducible(&compact);
    let ell = intersection_length_bound(work.budget(), intersection_number(&work));
    // An imported decomposition refers to `g`; carry it over to `work`.
    let inner_opts = SolveOptions {
        decomposition: opts.decomposition.as_ref().map(|td| {
            let mut new_of = vec![None; g.n()];
            for (i, &v) in old_of.iter().enumerate() {
                new_of[v] = Some(trace.vertex_map[i]);
            }
            td.map_vertices(|v| new_of[v])
        }),
        ..opts.clone()
    };
    let out = solve_bounded_with(&work, ell, &inner_opts)?;
    let answer = match out.answer {
        Answer::No => Answer::No,
        Answer::Yes(p) => {
            let lifted = lift_path(&trace, &compact, &p)?;
            let path = Path(lifted.vertices().iter().map(|&v| old_of[v]).collect());
            validate_st_path(g, &path)?;
            Answer::Yes(path)
        }
    };
    Ok(Outcome { answer, stats: out.stats })
}
