//! Line-oriented text formats for instances, decompositions and solutions.
//! `#` starts a comment; blank lines are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::color::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{validate_instance, ColoredGraph, Path, Vertex};
use crate::td::TreeDecomposition;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse { line, msg: format!("expected a non-negative integer, got {tok:?}") })
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<()> {
    if toks.len() != n {
        return Err(Error::Parse {
            line,
            msg: format!("'{}' takes {} fields, got {}", toks[0], n - 1, toks.len() - 1),
        });
    }
    Ok(())
}

/// Parses an instance without structural validation; loops, duplicate
/// edges and out-of-range colors survive so [`validate_instance`] can report
/// them. Syntax errors, vertex ids outside `0..n` and repeated `p`/`s`/`t`
/// lines are rejected here.
pub fn parse_instance_unchecked(text: &str) -> Result<ColoredGraph> {
    let mut header: Option<(usize, usize, usize, Option<usize>)> = None;
    let mut s = None;
    let mut t = None;
    let mut edges = Vec::new();
    let mut chi: Vec<ColorSet> = Vec::new();
    let mut seen_color_line = Vec::new();

    for (line, toks) in content_lines(text) {
        let vertex = |tok: &str, n: usize| -> Result<Vertex> {
            let v: Vertex = num(line, tok)?;
            if v >= n {
                return Err(Error::Parse { line, msg: format!("vertex {v} out of range 0..{n}") });
            }
            Ok(v)
        };
        if toks[0] == "p" {
            if header.is_some() {
                return Err(Error::Parse { line, msg: "duplicate 'p' line".into() });
            }
            if !(5..=6).contains(&toks.len()) || toks[1] != "colpath" {
                return Err(Error::Parse {
                    line,
                    msg: "expected 'p colpath <n> <n_colors> <k> [<ell>]'".into(),
                });
            }
            let n: usize = num(line, toks[2])?;
            let ell = toks.get(5).map(|x| num(line, x)).transpose()?;
            header = Some((n, num(line, toks[3])?, num(line, toks[4])?, ell));
            chi = vec![ColorSet::new(); n];
            seen_color_line = vec![false; n];
            continue;
        }
        let Some((n, _, _, _)) = header else {
            return Err(Error::Parse { line, msg: "'p' line must come first".into() });
        };
        match toks[0] {
            "e" => {
                arity(line, &toks, 3)?;
                edges.push((vertex(toks[1], n)?, vertex(toks[2], n)?));
            }
            "c" => {
                if toks.len() < 2 {
                    return Err(Error::Parse { line, msg: "'c' needs a vertex".into() });
                }
                let v = vertex(toks[1], n)?;
                if std::mem::replace(&mut seen_color_line[v], true) {
                    return Err(Error::Parse { line, msg: format!("duplicate 'c' line for {v}") });
                }
                for tok in &toks[2..] {
                    chi[v].insert(num(line, tok)?);
                }
            }
            "s" | "t" => {
                arity(line, &toks, 2)?;
                let slot = if toks[0] == "s" { &mut s } else { &mut t };
                if slot.is_some() {
                    return Err(Error::Parse { line, msg: format!("duplicate '{}' line", toks[0]) });
                }
                *slot = Some(vertex(toks[1], n)?);
            }
            other => {
                return Err(Error::Parse { line, msg: format!("unknown record {other:?}") });
            }
        }
    }
    let (n, n_colors, k, ell) =
        header.ok_or(Error::Parse { line: 0, msg: "missing 'p' line".into() })?;
    let s = s.ok_or(Error::Parse { line: 0, msg: "missing 's' line".into() })?;
    let t = t.ok_or(Error::Parse { line: 0, msg: "missing 't' line".into() })?;
    Ok(ColoredGraph::from_edges_unchecked(n, n_colors, &edges, chi, s, t, k).with_length_bound(ell))
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<ColoredGraph> {
    let g = parse_instance_unchecked(text)?;
    let report = validate_instance(&g);
    if !report.is_empty() {
        return Err(Error::InvalidInstance(report));
    }
    Ok(g)
}

/// Canonical text form: header, endpoints, sorted edges, then nonempty
/// color lines in vertex order.
pub fn write_instance(g: &ColoredGraph) -> String {
    let mut out = String::new();
    write!(out, "p colpath {} {} {}", g.n(), g.n_colors(), g.budget()).unwrap();
    if let Some(ell) = g.length_bound() {
        write!(out, " {ell}").unwrap();
    }
    out.push('\n');
    writeln!(out, "s {}", g.source()).unwrap();
    writeln!(out, "t {}", g.target()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    for v in 0..g.n() {
        if !g.chi(v).is_empty() {
            write!(out, "c {v}").unwrap();
            for c in g.chi(v).iter() {
                write!(out, " {c}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition> {
    let mut n_bags = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    for (line, toks) in content_lines(text) {
        let bag_id = |tok: &str, nb: usize| -> Result<usize> {
            let b: usize = num(line, tok)?;
            if b >= nb {
                return Err(Error::Parse { line, msg: format!("bag {b} out of range 0..{nb}") });
            }
            Ok(b)
        };
        match toks[0] {
            "td" => {
                if n_bags.is_some() {
                    return Err(Error::Parse { line, msg: "duplicate 'td' line".into() });
                }
                arity(line, &toks, 3)?;
                let nb: usize = num(line, toks[1])?;
                let _width: usize = num(line, toks[2])?;
                n_bags = Some(nb);
                bags = vec![None; nb];
                parent = vec![None; nb];
            }
            "b" | "a" => {
                let nb = n_bags
                    .ok_or(Error::Parse { line, msg: "'td' line must come first".into() })?;
                if toks.len() < 2 {
                    return Err(Error::Parse { line, msg: "missing bag id".into() });
                }
                let id = bag_id(toks[1], nb)?;
                if toks[0] == "b" {
                    if bags[id].is_some() {
                        return Err(Error::Parse { line, msg: format!("duplicate bag {id}") });
                    }
                    let mut bag = toks[2..].iter().map(|x| num(line, x)).collect::<Result<Vec<_>>>()?;
                    bag.sort_unstable();
                    bag.dedup();
                    bags[id] = Some(bag);
                } else {
                    arity(line, &toks, 3)?;
                    let child = bag_id(toks[2], nb)?;
                    if parent[child].replace(id).is_some() {
                        return Err(Error::Parse { line, msg: format!("bag {child} has two parents") });
                    }
                }
            }
            other => return Err(Error::Parse { line, msg: format!("unknown record {other:?}") }),
        }
    }
    if n_bags.is_none() {
        return Err(Error::Parse { line: 0, msg: "missing 'td' line".into() });
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(Error::Parse { line: 0, msg: format!("bag {i} never listed") }))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition { bags, parent })
}

pub fn write_decomposition(td: &TreeDecomposition) -> String {
    let mut out = format!("td {} {}\n", td.bags.len(), td.width());
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {i}").unwrap();
        for v in bag {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for (child, p) in td.parent.iter().enumerate() {
        if let Some(p) = p {
            writeln!(out, "a {p} {child}").unwrap();
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub width: usize,
    pub max_table: usize,
    pub nodes: usize,
}

/// What a solver prints: the decision and, on YES, a witness path in the
/// input graph with its colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub path: Option<Path>,
    pub colors: ColorSet,
    pub length: Option<usize>,
    pub stats: Option<SolveStats>,
}

impl Solution {
    pub fn no() -> Self {
        Self { path: None, colors: ColorSet::new(), length: None, stats: None }
    }

    pub fn is_yes(&self) -> bool {
        self.path.is_some()
    }
}

pub fn write_solution(sol: &Solution) -> String {
    let mut out = String::new();
    match &sol.path {
        None => out.push_str("SOLUTION no\n"),
        Some(p) => {
            out.push_str("SOLUTION yes\npath");
            for v in p.vertices() {
                write!(out, " {v}").unwrap();
            }
            out.push_str("\ncolors");
            for c in sol.colors.iter() {
                write!(out, " {c}").unwrap();
            }
            out.push('\n');
            if let Some(l) = sol.length {
                writeln!(out, "length {l}").unwrap();
            }
        }
    }
    if let Some(st) = &sol.stats {
        writeln!(out, "stats width={} max_table={} nodes={}", st.width, st.max_table, st.nodes)
            .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two routes
p colpath 4 2 1
s 0
t 3
e 0 1
e 1 3
e 0 2
e 2 3
c 1 0
c 2 0 1
";

    #[test]
    fn round_trip() {
        let g = parse_instance(SAMPLE).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.chi(2).len(), 2);
        let text = write_instance(&g);
        let again = parse_instance(&text).unwrap();
        assert_eq!(again, g);
        assert_eq!(write_instance(&again), text);
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(parse_instance("p colpath 2 0 0\np colpath 2 0 0\ns 0\nt 1\n").is_err());
        assert!(parse_instance("p colpath 2 0 0\ns 0\ns 1\nt 1\n").is_err());
        assert!(parse_instance("e 0 1\n").is_err());
        assert!(parse_instance("p colpath 2 0 0\ns 0\nt 5\n").is_err());
        assert!(parse_instance("p colpath 2 0 x\ns 0\nt 1\n").is_err());
        assert!(parse_instance("p colpath 2 0 0\ns 0\n").is_err());
    }

    #[test]
    fn loops_reach_the_validator() {
        let g = parse_instance_unchecked("p colpath 4 1 0\ns 0\nt 1\ne 3 3\n").unwrap();
        assert!(validate_instance(&g).contains("loop at 3"));
        assert!(matches!(
            parse_instance("p colpath 4 1 0\ns 0\nt 1\ne 3 3\n"),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn length_bound_survives() {
        let g = parse_instance("p colpath 2 0 0 5\ns 0\nt 1\ne 0 1\n").unwrap();
        assert_eq!(g.length_bound(), Some(5));
        assert!(write_instance(&g).starts_with("p colpath 2 0 0 5\n"));
    }

    #[test]
    fn decomposition_round_trip() {
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![1, 3]],
            parent: vec![None, Some(0), Some(0)],
        };
        let text = write_decomposition(&td);
        assert!(text.starts_with("td 3 1\n"));
        assert_eq!(parse_decomposition(&text).unwrap(), td);
    }

    #[test]
    fn solution_text() {
        let sol = Solution {
            path: Some(Path(vec![0, 1, 3])),
            colors: ColorSet::singleton(0),
            length: Some(2),
            stats: Some(SolveStats { width: 2, max_table: 3, nodes: 9 }),
        };
        assert_eq!(
            write_solution(&sol),
            "SOLUTION yes\npath 0 1 3\ncolors 0\nlength 2\nstats width=2 max_table=3 nodes=9\n"
        );
        assert_eq!(write_solution(&Solution::no()), "SOLUTION no\n");
    }
}
