//! SVG pictures of domains, covers and schedules.
//!
//! Coordinates are converted to decimals with 12 significant digits here and
//! nowhere else; the picture is for people, not for further computation.

use std::fmt::Write as _;

use crate::geom::{Point, PolygonalDomain};
use crate::model::{measure_exposure, Configuration, Schedule};
use crate::scalar::Scalar;

const COLORS: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const SCALE: f64 = 40.0;
const MARGIN: f64 = 1.5;

/// Everything that can appear in one picture.
#[derive(Clone, Debug)]
pub struct Scene<T> {
    pub domain: Option<PolygonalDomain<T>>,
    pub cover: Vec<PolygonalDomain<T>>,
    pub schedule: Option<Schedule<T>>,
    /// Extra configurations drawn as outlined boxes, e.g. start and target.
    pub configurations: Vec<Configuration<T>>,
}

impl<T> Default for Scene<T> {
    fn default() -> Self {
        Scene { domain: None, cover: Vec::new(), schedule: None, configurations: Vec::new() }
    }
}

/// Decimal with at most 12 significant digits and no trailing zeros.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 12) as usize;
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

struct Frame {
    x0: f64,
    y1: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn px(&self, x: f64) -> String {
        fmt_num((x - self.x0) * SCALE)
    }

    fn py(&self, y: f64) -> String {
        fmt_num((self.y1 - y) * SCALE)
    }

    fn point<T: Scalar>(&self, p: &Point<T>) -> String {
        format!("{},{}", self.px(p.x.approx()), self.py(p.y.approx()))
    }
}

fn ring_path<T: Scalar>(f: &Frame, ring: &[Point<T>]) -> String {
    let mut d = String::new();
    for (i, p) in ring.iter().enumerate() {
        let _ = write!(d, "{}{} ", if i == 0 { "M" } else { "L" }, f.point(p));
    }
    d.push('Z');
    d
}

fn domain_path<T: Scalar>(f: &Frame, s: &PolygonalDomain<T>) -> String {
    s.rings().map(|r| ring_path(f, r)).collect::<Vec<_>>().join(" ")
}

impl<T: Scalar> Scene<T> {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut add = |p: &Point<T>| pts.push((p.x.approx(), p.y.approx()));
        for s in self.domain.iter().chain(&self.cover) {
            for p in s.vertices() {
                add(&p);
            }
        }
        if let Some(m) = &self.schedule {
            for tr in &m.trajectories {
                for (_, p) in &tr.breakpoints {
                    add(p);
                }
            }
        }
        for c in &self.configurations {
            for p in &c.points {
                add(p);
            }
        }
        if pts.is_empty() {
            return (0.0, 0.0, 1.0, 1.0);
        }
        let x0 = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - MARGIN;
        let y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - MARGIN;
        let x1 = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + MARGIN;
        let y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + MARGIN;
        (x0, y0, x1, y1)
    }

    fn boxes(&self, f: &Frame, out: &mut String, c: &Configuration<T>, dashed: bool) {
        for (i, (p, s)) in c.points.iter().zip(&c.shapes).enumerate() {
            let (hw, hh) = (s.half_width.approx(), s.half_height.approx());
            let (x, y) = (p.x.approx(), p.y.approx());
            let _ = writeln!(
                out,
                "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>",
                f.px(x - hw),
                f.py(y + hh),
                fmt_num(2.0 * hw * SCALE),
                fmt_num(2.0 * hh * SCALE),
                COLORS[i % COLORS.len()],
                if dashed { " stroke-dasharray=\"4 3\"" } else { "" }
            );
        }
    }

    /// Renders the scene. Cover is shaded, the domain outlined, trajectories
    /// drawn per robot with exposed stretches highlighted, and a timeline
    /// below marks the exposed intervals.
    pub fn to_svg(&self) -> String {
        let (x0, y0, x1, y1) = self.bounds();
        let f = Frame { x0, y1, width: (x1 - x0) * SCALE, height: (y1 - y0) * SCALE };
        let timeline = if self.schedule.is_some() { 50.0 } else { 0.0 };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = fmt_num(f.width),
            h = fmt_num(f.height + timeline)
        );
        out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for s in &self.cover {
            let _ = writeln!(
                out,
                "  <path class=\"cover\" d=\"{}\" fill=\"#cfe8cf\" fill-rule=\"evenodd\" stroke=\"#6a9f6a\"/>",
                domain_path(&f, s)
            );
        }
        if let Some(d) = &self.domain {
            let _ = writeln!(
                out,
                "  <path class=\"domain\" d=\"{}\" fill=\"none\" fill-rule=\"evenodd\" stroke=\"black\" stroke-width=\"2\"/>",
                domain_path(&f, d)
            );
        }
        for (i, c) in self.configurations.iter().enumerate() {
            self.boxes(&f, &mut out, c, i == 0);
        }
        if let Some(m) = &self.schedule {
            self.draw_schedule(&f, &mut out, m);
        }
        out.push_str("</svg>\n");
        out
    }

    fn draw_schedule(&self, f: &Frame, out: &mut String, m: &Schedule<T>) {
        for (i, tr) in m.trajectories.iter().enumerate() {
            let pts: Vec<String> = tr.breakpoints.iter().map(|(_, p)| f.point(p)).collect();
            let _ = writeln!(
                out,
                "  <polyline class=\"trajectory\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
                pts.join(" "),
                COLORS[i % COLORS.len()]
            );
        }
        let report = if self.cover.is_empty() { None } else { Some(measure_exposure(m, &self.cover)) };
        if let Some(r) = &report {
            for (a, b) in &r.intervals {
                for tr in &m.trajectories {
                    let mut pts = vec![f.point(&tr.position_at(a))];
                    for (t, p) in &tr.breakpoints {
                        if t > a && t < b {
                            pts.push(f.point(p));
                        }
                    }
                    pts.push(f.point(&tr.position_at(b)));
                    let _ = writeln!(
                        out,
                        "  <polyline class=\"exposed\" points=\"{}\" fill=\"none\" stroke=\"#e41a1c\" stroke-width=\"4\" stroke-opacity=\"0.6\"/>",
                        pts.join(" ")
                    );
                }
            }
        }
        self.boxes(f, out, &m.end_configuration(), false);

        // timeline
        let (t0, t1) = (m.start_time().approx(), m.end_time().approx());
        let span = if t1 > t0 { t1 - t0 } else { 1.0 };
        let left = 10.0;
        let width = f.width - 20.0;
        let top = f.height + 15.0;
        let _ = writeln!(
            out,
            "  <rect class=\"timeline\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"12\" fill=\"#cfe8cf\" stroke=\"black\"/>",
            fmt_num(left),
            fmt_num(top),
            fmt_num(width)
        );
        if let Some(r) = &report {
            for (a, b) in &r.intervals {
                let xa = left + (a.approx() - t0) / span * width;
                let xb = left + (b.approx() - t0) / span * width;
                let _ = writeln!(
                    out,
                    "  <rect class=\"exposed-interval\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"12\" fill=\"#e41a1c\"/>",
                    fmt_num(xa),
                    fmt_num(top),
                    fmt_num(xb - xa)
                );
            }
        }
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"10\" font-family=\"sans-serif\">t = {} .. {}</text>",
            fmt_num(left),
            fmt_num(top + 25.0),
            fmt_num(t0),
            fmt_num(t1)
        );
    }
}
