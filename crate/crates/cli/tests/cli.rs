use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use colpath::generators::{gen_random_planar, gen_vertex_cover, SimpleGraph};
use colpath::io::{parse_instance, write_instance};
use colpath::oracles::xp_optimum;
use colpath::{chi_of_path, validate_path, Path as VPath};

fn colpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colpath")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn witness(out: &str) -> VPath {
    let line = out.lines().find(|l| l.starts_with("path ")).expect("path line");
    VPath(line.split_whitespace().skip(1).map(|t| t.parse().unwrap()).collect())
}

const P4: &str = "0 1\n1 2\n2 3\n";

/// apex(VC(P4)) at the given budget, written by the CLI itself.
fn apex_p4(dir: &Path) -> String {
    let edges = write(dir, "p4.edges", P4);
    let vc = dir.join("vc.col").to_string_lossy().into_owned();
    let apex = dir.join("apex.col").to_string_lossy().into_owned();
    assert!(colpath(&["generate", "--family", "vc", "--input", &edges, "-o", &vc]).status.success());
    assert!(colpath(&["generate", "--family", "apex", "--input", &vc, "-o", &apex]).status.success());
    apex
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.col", "p colpath 3 1\ne 0 1\n");
    let o = colpath(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let missing = dir.path().join("nope.col");
    assert_eq!(colpath(&["solve", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn vertex_cover_gadget_decisions() {
    let dir = tempfile::tempdir().unwrap();
    let apex = apex_p4(dir.path());
    let g = parse_instance(&fs::read_to_string(&apex).unwrap()).unwrap();
    assert_eq!(xp_optimum(&g).unwrap(), Some(2));

    let yes = colpath(&["solve", &apex, "--alg", "repset", "--k", "2"]);
    assert_eq!(yes.status.code(), Some(0));
    let p = witness(&stdout(&yes));
    validate_path(&g, &p).unwrap();
    assert_eq!((p.first(), p.last()), (Some(g.source()), Some(g.target())));
    assert!(chi_of_path(&g, &p).unwrap().len() <= 2);

    assert_eq!(colpath(&["solve", &apex, "--alg", "repset", "--k", "1"]).status.code(), Some(1));
    for alg in ["xp", "pareto"] {
        assert_eq!(colpath(&["solve", &apex, "--alg", alg, "--k", "2"]).status.code(), Some(0));
        assert_eq!(colpath(&["solve", &apex, "--alg", alg, "--k", "1"]).status.code(), Some(1));
    }
}

#[test]
fn raw_gadget_needs_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let h = SimpleGraph::parse(P4).unwrap();
    let raw = write(dir.path(), "raw.col", &write_instance(&gen_vertex_cover(&h, 2).unwrap()));
    let o = colpath(&["solve", &raw]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("color "));
    assert_eq!(colpath(&["solve", &raw, "--fallback-oracle"]).status.code(), Some(0));
    assert_eq!(colpath(&["solve", &raw, "--fallback-oracle", "--k", "1"]).status.code(), Some(1));
}

#[test]
fn stats_and_optimize_keep_decision() {
    let dir = tempfile::tempdir().unwrap();
    let apex = apex_p4(dir.path());
    let plain = colpath(&["solve", &apex, "--k", "2"]);
    let with_stats = colpath(&["solve", &apex, "--k", "2", "--stats"]);
    assert_eq!(plain.status.code(), with_stats.status.code());
    assert!(stdout(&with_stats).contains("stats width="));
    let opt = colpath(&["solve", &apex, "--optimize"]);
    assert!(stdout(&opt).starts_with("optimum 2\n"), "{}", stdout(&opt));
}

#[test]
fn generate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.edges", "0 1\n1 2\n0 2\n");
    let o = colpath(&["generate", "--family", "vc", "--input", &k3]);
    assert!(o.status.success());
    let text = stdout(&o);
    let g = colpath::io::parse_instance_unchecked(&text).unwrap();
    assert_eq!(write_instance(&g), text);

    for fam in [["--family", "random"], ["--family", "mcc"]] {
        let a = colpath(&["generate", fam[0], fam[1], "--seed", "7"]);
        let b = colpath(&["generate", fam[0], fam[1], "--seed", "7"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        let g = colpath::io::parse_instance_unchecked(&stdout(&a)).unwrap();
        assert_eq!(write_instance(&g), stdout(&a));
    }
}

#[test]
fn validate_reports() {
    let dir = tempfile::tempdir().unwrap();
    let apex = apex_p4(dir.path());
    let o = colpath(&["validate", &apex]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OK"));

    let vc = dir.path().join("vc.col");
    let o = colpath(&["validate", vc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("not color-connected"));

    let looped = write(dir.path(), "loop.col", "p colpath 2 0 0\ns 0\nt 1\ne 0 0\ne 0 1\n");
    assert_eq!(colpath(&["validate", &looped]).status.code(), Some(2));

    let td = write(dir.path(), "apex.td", "td 1 11\nb 0 0 1 2 3 4 5 6 7 8 9 10\n");
    let o = colpath(&["validate", &apex, "--td", &td]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let short = write(dir.path(), "short.td", "td 1 1\nb 0 0 1\n");
    assert_eq!(colpath(&["validate", &apex, "--td", &short]).status.code(), Some(2));
}

#[test]
fn imported_decomposition_matches() {
    let dir = tempfile::tempdir().unwrap();
    let apex = apex_p4(dir.path());
    let td = write(dir.path(), "apex.td", "td 1 11\nb 0 0 1 2 3 4 5 6 7 8 9 10\n");
    for k in ["1", "2"] {
        let a = colpath(&["solve", &apex, "--k", k]);
        let b = colpath(&["solve", &apex, "--k", k, "--td", &td]);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn table_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_random_planar(40, 8, 3).unwrap().with_budget(3);
    let f = write(dir.path(), "g.col", &write_instance(&g));
    let o = colpath(&["solve", &f, "--table-cap", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn scenes_solve_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "s.scene", "scene 8 8 2\nrect 3 0 5 8\ndisk 2 2 1\nstart 0.5 4\ngoal 7.5 4\n");
    assert_eq!(colpath(&["solve", &scene, "--k", "0"]).status.code(), Some(1));
    let o = colpath(&["solve", &scene, "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let sol = write(dir.path(), "s.sol", &stdout(&o));

    let svg = stdout(&colpath(&["render", &scene, "--solution", &sol]));
    assert!(svg.contains("<polyline") && svg.matches(r#"class="obstacle""#).count() == 2);
    assert_eq!(svg, stdout(&colpath(&["render", &scene, "--k", "1"])));

    let inst = stdout(&colpath(&["rasterize", &scene, "--k", "1"]));
    let g = parse_instance(&inst).unwrap();
    assert_eq!((g.n(), g.n_colors(), g.budget()), (256, 2, 1));

    let sliver = write(dir.path(), "bad.scene", "scene 8 8 1\nrect 2.1 2.1 2.2 2.2\nstart 0.5 4\ngoal 7.5 4\n");
    assert_eq!(colpath(&["rasterize", &sliver]).status.code(), Some(2));
}

#[test]
fn bench_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    for seed in 0..20u64 {
        let g = gen_random_planar(8 + seed as usize % 8, 4, seed).unwrap().with_budget(seed as usize % 3);
        fs::write(corpus.join(format!("i{seed:02}.col")), write_instance(&g)).unwrap();
    }
    let o = colpath(&["bench", corpus.to_str().unwrap(), "--algs", "repset,xp,pareto", "--workers", "4"]);
    assert!(o.status.success());
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        rd.headers().unwrap().iter().collect::<Vec<_>>(),
        ["instance", "alg", "k", "ell", "decision", "width", "max_table", "nodes", "millis"]
    );
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 60);
    for chunk in rows.chunks(3) {
        assert!(chunk.iter().all(|r| r[0] == chunk[0][0]));
        assert!(chunk.iter().all(|r| r[4] == chunk[0][4] && (&r[4] == "yes" || &r[4] == "no")), "{chunk:?}");
    }
}
