//! Obstacle scenes: parsing, rasterization to 4-connected grid instances,
//! and SVG rendering.
//!
//! A cell is covered by an obstacle when the obstacle contains the cell
//! center (boundary included). Obstacle `i` becomes color `i`.

use std::fmt::Write as _;

use crate::color::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{validate_path, ColoredGraph, Path, Vertex};

pub use crate::graph::intersection_number;

#[derive(Clone, Debug, PartialEq)]
pub enum Obstacle {
    Disk { cx: f64, cy: f64, r: f64 },
    Rect { x1: f64, y1: f64, x2: f64, y2: f64 },
    Polygon(Vec<(f64, f64)>),
}

impl Obstacle {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            Obstacle::Disk { cx, cy, r } => (x - cx).powi(2) + (y - cy).powi(2) <= r * r,
            Obstacle::Rect { x1, y1, x2, y2 } => {
                x1.min(*x2) <= x && x <= x1.max(*x2) && y1.min(*y2) <= y && y <= y1.max(*y2)
            }
            Obstacle::Polygon(pts) => {
                let n = pts.len();
                if (0..n).any(|i| on_segment(pts[i], pts[(i + 1) % n], (x, y))) {
                    return true;
                }
                // Even-odd rule.
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (pts[i], pts[(i + 1) % n]);
                    if (a.1 > y) != (b.1 > y) && x < a.0 + (y - a.1) * (b.0 - a.0) / (b.1 - a.1) {
                        inside = !inside;
                    }
                }
                inside
            }
        }
    }
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    orient(a, b, p) == 0.0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn segments_meet(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// True when no two non-adjacent edges of the polygon meet and adjacent
/// edges meet only at their shared corner.
pub fn is_simple_polygon(pts: &[(f64, f64)]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let edge = |i: usize| (pts[i], pts[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Sharing a corner is fine; folding back along each other is not.
                let (p, q) = if j == i + 1 { (a, d) } else { (b, c) };
                let corner = if j == i + 1 { b } else { a };
                if orient(p, corner, q) == 0.0 && (on_segment(corner, p, q) || on_segment(corner, q, p)) {
                    return false;
                }
            } else if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstacleScene {
    pub width: f64,
    pub height: f64,
    pub resolution: usize,
    pub obstacles: Vec<Obstacle>,
    pub start: (f64, f64),
    pub goal: (f64, f64),
}

impl ObstacleScene {
    pub fn columns(&self) -> usize {
        (self.width * self.resolution as f64).ceil() as usize
    }

    pub fn rows(&self) -> usize {
        (self.height * self.resolution as f64).ceil() as usize
    }

    pub fn cell_center(&self, v: Vertex) -> (f64, f64) {
        let cols = self.columns();
        let res = self.resolution as f64;
        (((v % cols) as f64 + 0.5) / res, ((v / cols) as f64 + 0.5) / res)
    }

    pub fn cell_of(&self, (x, y): (f64, f64)) -> Vertex {
        let res = self.resolution as f64;
        let col = ((x * res).floor() as usize).min(self.columns() - 1);
        let row = ((y * res).floor() as usize).min(self.rows() - 1);
        row * self.columns() + col
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        if !(finite(self.width) && finite(self.height) && self.width > 0.0 && self.height > 0.0) {
            return Err(Error::Scene("extent must be positive".into()));
        }
        if self.resolution == 0 {
            return Err(Error::Scene("resolution must be at least 1".into()));
        }
        let inside = |(x, y): (f64, f64)| (0.0..=self.width).contains(&x) && (0.0..=self.height).contains(&y);
        if !inside(self.start) || !inside(self.goal) {
            return Err(Error::Scene("start and goal must lie inside the extent".into()));
        }
        if self.cell_of(self.start) == self.cell_of(self.goal) {
            return Err(Error::Scene("start and goal fall into the same cell".into()));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            match o {
                Obstacle::Disk { r, .. } if r.is_nan() || *r < 0.0 => {
                    return Err(Error::Scene(format!("obstacle {i}: negative radius")));
                }
                Obstacle::Polygon(pts) if !is_simple_polygon(pts) => {
                    return Err(Error::Scene(format!("obstacle {i}: polygon is not simple")));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

pub fn parse_scene(text: &str) -> Result<ObstacleScene> {
    let mut header = None;
    let mut obstacles = Vec::new();
    let mut start = None;
    let mut goal = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else { continue };
        let nums = rest
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad number {t:?}") }))
            .collect::<Result<Vec<f64>>>()?;
        let want = |n: usize| -> Result<()> {
            if nums.len() != n {
                return Err(Error::Parse { line, msg: format!("'{head}' takes {n} numbers") });
            }
            Ok(())
        };
        match head {
            "scene" => {
                want(3)?;
                if header.is_some() {
                    return Err(Error::Parse { line, msg: "duplicate 'scene' line".into() });
                }
                let res = rest[2]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse { line, msg: "resolution must be an integer".into() })?;
                header = Some((nums[0], nums[1], res));
            }
            "disk" => {
                want(3)?;
                obstacles.push(Obstacle::Disk { cx: nums[0], cy: nums[1], r: nums[2] });
            }
            "rect" => {
                want(4)?;
                obstacles.push(Obstacle::Rect { x1: nums[0], y1: nums[1], x2: nums[2], y2: nums[3] });
            }
            "poly" => {
                if nums.len() < 6 || nums.len() % 2 != 0 {
                    return Err(Error::Parse { line, msg: "'poly' takes at least 3 coordinate pairs".into() });
                }
                obstacles.push(Obstacle::Polygon(nums.chunks(2).map(|c| (c[0], c[1])).collect()));
            }
            "start" | "goal" => {
                want(2)?;
                let slot = if head == "start" { &mut start } else { &mut goal };
                if slot.replace((nums[0], nums[1])).is_some() {
                    return Err(Error::Parse { line, msg: format!("duplicate '{head}' line") });
                }
            }
            other => return Err(Error::Parse { line, msg: format!("unknown record {other:?}") }),
        }
    }
    let (width, height, resolution) = header.ok_or(Error::Parse { line: 0, msg: "missing 'scene' line".into() })?;
    let scene = ObstacleScene {
        width,
        height,
        resolution,
        obstacles,
        start: start.ok_or(Error::Parse { line: 0, msg: "missing 'start' line".into() })?,
        goal: goal.ok_or(Error::Parse { line: 0, msg: "missing 'goal' line".into() })?,
    };
    scene.validate()?;
    Ok(scene)
}

pub fn write_scene(scene: &ObstacleScene) -> String {
    let mut out = format!("scene {} {} {}\n", scene.width, scene.height, scene.resolution);
    for o in &scene.obstacles {
        match o {
            Obstacle::Disk { cx, cy, r } => writeln!(out, "disk {cx} {cy} {r}"),
            Obstacle::Rect { x1, y1, x2, y2 } => writeln!(out, "rect {x1} {y1} {x2} {y2}"),
            Obstacle::Polygon(pts) => {
                out.push_str("poly");
                for (x, y) in pts {
                    write!(out, " {x} {y}").unwrap();
                }
                writeln!(out)
            }
        }
        .unwrap();
    }
    writeln!(out, "start {} {}", scene.start.0, scene.start.1).unwrap();
    writeln!(out, "goal {} {}", scene.goal.0, scene.goal.1).unwrap();
    out
}

/// The grid graph of a scene: one vertex per cell (row-major), 4-adjacency,
/// cell colors = obstacles covering the cell center, budget 0.
///
/// Fails with [`Error::Resolution`] when some obstacle covers no cell
/// center or covers a set of cells that is not 4-connected.
pub fn rasterize_scene(scene: &ObstacleScene) -> Result<ColoredGraph> {
    scene.validate()?;
    let (cols, rows) = (scene.columns(), scene.rows());
    let n = cols * rows;
    let mut chi = vec![ColorSet::new(); n];
    for (v, c) in chi.iter_mut().enumerate() {
        let (x, y) = scene.cell_center(v);
        for (i, o) in scene.obstacles.iter().enumerate() {
            if o.contains(x, y) {
                c.insert(i);
            }
        }
    }
    let mut edges = Vec::with_capacity(2 * n);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    let g = ColoredGraph::new(
        n,
        scene.obstacles.len(),
        &edges,
        chi,
        scene.cell_of(scene.start),
        scene.cell_of(scene.goal),
        0,
    )?;
    for i in 0..scene.obstacles.len() {
        let cells = g.color_vertices(i);
        let Some(&first) = cells.first() else {
            return Err(Error::Resolution { obstacle: i });
        };
        let reach = g.component_of(first, |v| g.chi(v).contains(i));
        if !cells.iter().all(|&v| reach[v]) {
            return Err(Error::Resolution { obstacle: i });
        }
    }
    Ok(g)
}

fn fmt_num(x: f64) -> String {
    let s = format!("{:.3}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Draws the scene in its own coordinates (y grows downward): a frame,
/// translucent obstacles, start/goal markers and, when given, the path as a
/// polyline over cell centers. Output bytes depend only on the inputs.
pub fn render_svg(scene: &ObstacleScene, path: Option<&Path>) -> Result<String> {
    scene.validate()?;
    if let Some(p) = path {
        let g = rasterize_scene(scene)?;
        validate_path(&g, p)?;
    }
    let scale = 16.0;
    let (w, h) = (scene.width, scene.height);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt_num(w * scale),
        fmt_num(h * scale),
        fmt_num(w),
        fmt_num(h)
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect class="frame" x="0" y="0" width="{}" height="{}" fill="white" stroke="black" stroke-width="{}"/>"#,
        fmt_num(w),
        fmt_num(h),
        fmt_num(w.max(h) / 400.0)
    )
    .unwrap();
    for (i, o) in scene.obstacles.iter().enumerate() {
        let style = r##"fill="#c0392b" fill-opacity="0.35" stroke="#7b241c""##;
        match o {
            Obstacle::Disk { cx, cy, r } => writeln!(
                out,
                r#"<circle class="obstacle" id="o{i}" cx="{}" cy="{}" r="{}" {style}/>"#,
                fmt_num(*cx),
                fmt_num(*cy),
                fmt_num(*r)
            ),
            Obstacle::Rect { x1, y1, x2, y2 } => writeln!(
                out,
                r#"<rect class="obstacle" id="o{i}" x="{}" y="{}" width="{}" height="{}" {style}/>"#,
                fmt_num(x1.min(*x2)),
                fmt_num(y1.min(*y2)),
                fmt_num((x2 - x1).abs()),
                fmt_num((y2 - y1).abs())
            ),
            Obstacle::Polygon(pts) => {
                let points: Vec<String> =
                    pts.iter().map(|(x, y)| format!("{},{}", fmt_num(*x), fmt_num(*y))).collect();
                writeln!(
                    out,
                    r#"<polygon class="obstacle" id="o{i}" points="{}" {style}/>"#,
                    points.join(" ")
                )
            }
        }
        .unwrap();
    }
    if let Some(p) = path {
        let points: Vec<String> = p
            .vertices()
            .iter()
            .map(|&v| {
                let (x, y) = scene.cell_center(v);
                format!("{},{}", fmt_num(x), fmt_num(y))
            })
            .collect();
        writeln!(
            out,
            r##"<polyline class="path" points="{}" fill="none" stroke="#1f618d" stroke-width="{}"/>"##,
            points.join(" "),
            fmt_num(w.max(h) / 150.0)
        )
        .unwrap();
    }
    let marker = w.max(h) / 80.0;
    for (class, (x, y), color) in [("start", scene.start, "#1e8449"), ("goal", scene.goal, "#6c3483")] {
        writeln!(
            out,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
            fmt_num(x),
            fmt_num(y),
            fmt_num(marker)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::xp_optimum;

    fn scene(obstacles: Vec<Obstacle>, res: usize) -> ObstacleScene {
        ObstacleScene { width: 8.0, height: 8.0, resolution: res, obstacles, start: (0.5, 4.0), goal: (7.5, 4.0) }
    }

    #[test]
    fn empty_scene_is_free() {
        let g = rasterize_scene(&scene(vec![], 1)).unwrap();
        assert_eq!(g.n(), 64);
        assert_eq!(xp_optimum(&g).unwrap(), Some(0));
    }

    #[test]
    fn wall_costs_one() {
        let wall = Obstacle::Rect { x1: 3.0, y1: 0.0, x2: 5.0, y2: 8.0 };
        let g = rasterize_scene(&scene(vec![wall], 1)).unwrap();
        assert_eq!(xp_optimum(&g).unwrap(), Some(1));
    }

    #[test]
    fn overlapping_disks_wall() {
        let a = Obstacle::Disk { cx: 4.0, cy: 2.0, r: 2.6 };
        let b = Obstacle::Disk { cx: 4.0, cy: 6.0, r: 2.6 };
        let g = rasterize_scene(&scene(vec![a, b], 2)).unwrap();
        assert_eq!(xp_optimum(&g).unwrap(), Some(1));
    }

    #[test]
    fn thin_obstacle_is_a_resolution_error() {
        let sliver = Obstacle::Rect { x1: 2.1, y1: 2.1, x2: 2.2, y2: 2.2 };
        assert!(matches!(rasterize_scene(&scene(vec![sliver], 1)), Err(Error::Resolution { obstacle: 0 })));
    }

    #[test]
    fn polygon_checks() {
        assert!(is_simple_polygon(&[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]));
        assert!(!is_simple_polygon(&[(0.0, 0.0), (4.0, 4.0), (4.0, 0.0), (0.0, 4.0)]));
        let tri = Obstacle::Polygon(vec![(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)]);
        assert!(tri.contains(1.0, 1.0) && tri.contains(2.0, 2.0) && !tri.contains(3.0, 3.0));
    }

    #[test]
    fn scene_round_trip() {
        let text = "scene 8 8 2\ndisk 4 4 1.5\nrect 1 1 2 3\npoly 5 5 7 5 6 7\nstart 0.5 0.5\ngoal 7.5 7.5\n";
        let s = parse_scene(text).unwrap();
        assert_eq!(write_scene(&s), text);
        assert!(parse_scene("scene 8 8 0\nstart 1 1\ngoal 2 2\n").is_err());
        assert!(parse_scene("scene 8 8 1\nstart 1 1\ngoal 9 2\n").is_err());
    }

    #[test]
    fn svg_shape_count_and_determinism() {
        let s = scene(
            vec![
                Obstacle::Disk { cx: 2.0, cy: 2.0, r: 1.0 },
                Obstacle::Rect { x1: 4.0, y1: 4.0, x2: 6.0, y2: 6.0 },
                Obstacle::Polygon(vec![(1.0, 5.0), (3.0, 5.0), (2.0, 7.0)]),
            ],
            1,
        );
        let a = render_svg(&s, None).unwrap();
        assert_eq!(a.matches(r#"class="obstacle""#).count(), 3);
        assert_eq!(a, render_svg(&s, None).unwrap());
        let empty = render_svg(&scene(vec![], 1), None).unwrap();
        assert_eq!(empty.matches(r#"class="obstacle""#).count(), 0);
        assert!(empty.contains(r#"class="frame""#) && empty.contains(r#"class="start""#));
        let with_path = render_svg(&scene(vec![], 1), Some(&Path(vec![32, 33, 34]))).unwrap();
        assert!(with_path.contains("<polyline"));
        assert!(render_svg(&scene(vec![], 1), Some(&Path(vec![32, 34]))).is_err());
    }

    #[test]
    fn disk_intersection_number_grows() {
        let counts: Vec<usize> = [2, 4, 8]
            .iter()
            .map(|&res| {
                let s = scene(vec![Obstacle::Disk { cx: 4.0, cy: 4.0, r: 2.0 }], res);
                intersection_number(&rasterize_scene(&s).unwrap())
            })
            .collect();
        assert!(counts[0] < counts[1] && counts[1] < counts[2], "{counts:?}");
    }
}
