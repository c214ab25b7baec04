//! SVG pictures in the affine chart `z = 1`.

use std::fmt::Write;

use num_traits::ToPrimitive;

use kummer_lab::config::{Selection, SexticConfiguration};
use kummer_lab::projective::{ProjLine, ProjPoint, RationalMap};
use kummer_lab::scalar::Rational;

const SIZE: f64 = 800.0;
const LINE_COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn affine(p: &ProjPoint) -> Option<(f64, f64)> {
    let [x, y, z] = p.coords().each_ref().map(f);
    (z != 0.0).then(|| (x / z, y / z))
}

struct View {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl View {
    fn fit(points: &[(f64, f64)]) -> Self {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
        for &(x, y) in points {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y) * 1.2;
        let (cx, cy) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
        View { x0: cx - span / 2.0, y0: cy - span / 2.0, scale: SIZE / span }
    }

    fn px(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.x0) * self.scale, SIZE - (y - self.y0) * self.scale)
    }

    fn world(&self) -> (f64, f64, f64, f64) {
        let span = SIZE / self.scale;
        (self.x0, self.x0 + span, self.y0, self.y0 + span)
    }
}

/// Segment of `ax + by + c = 0` inside the view, if any.
fn clip_line(l: &ProjLine, v: &View) -> Option<((f64, f64), (f64, f64))> {
    let [a, b, c] = l.coords().each_ref().map(f);
    let (x0, x1, y0, y1) = v.world();
    let mut pts = Vec::new();
    if b != 0.0 {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if (y0..=y1).contains(&y) {
                pts.push((x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if (x0..=x1).contains(&x) {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup();
    (pts.len() >= 2).then(|| (pts[0], pts[pts.len() - 1]))
}

/// Polyline pieces of a parametrized conic, broken where it crosses `z = 0`.
fn conic_paths(map: &RationalMap, v: &View) -> Vec<Vec<(f64, f64)>> {
    let forms = map.forms();
    let n = 720;
    let mut paths = Vec::new();
    let mut cur: Vec<(f64, f64)> = Vec::new();
    let (x0, x1, y0, y1) = v.world();
    let margin = (x1 - x0) * 2.0;
    for k in 0..=n {
        let th = std::f64::consts::PI * k as f64 / n as f64;
        let (t, u) = (th.sin(), th.cos());
        let ev = |b: &kummer_lab::binary_form::BinaryForm| {
            b.coeffs().iter().enumerate().map(|(i, c)| f(c) * t.powi(i as i32) * u.powi((b.degree() - i) as i32)).sum::<f64>()
        };
        let [x, y, z] = [ev(&forms[0]), ev(&forms[1]), ev(&forms[2])];
        let p = (x / z, y / z);
        let inside = z.abs() > 1e-12 && p.0 > x0 - margin && p.0 < x1 + margin && p.1 > y0 - margin && p.1 < y1 + margin;
        if inside {
            cur.push(p);
        } else if cur.len() > 1 {
            paths.push(std::mem::take(&mut cur));
        } else {
            cur.clear();
        }
    }
    if cur.len() > 1 {
        paths.push(cur);
    }
    paths
}

fn path_d(points: &[(f64, f64)], v: &View) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = v.px(*p);
        let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
    }
    d.trim_end().to_string()
}

pub fn render_svg(cfg: &SexticConfiguration, fit: Option<&(Selection, RationalMap)>) -> String {
    let finite: Vec<(f64, f64)> = cfg.nodes().values().filter_map(affine).collect();
    let v = View::fit(&finite);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(par) = cfg.base_parametrization() {
        for p in conic_paths(&par.map, &v) {
            let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, path_d(&p, &v));
        }
    }
    for (k, l) in cfg.lines().iter().enumerate() {
        if let Some((a, b)) = clip_line(l, &v) {
            let (pa, pb) = (v.px(a), v.px(b));
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="1"/>"#,
                pa.0, pa.1, pb.0, pb.1, LINE_COLORS[k]
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{}">l{}</text>"#,
                pb.0.clamp(4.0, SIZE - 20.0),
                pb.1.clamp(14.0, SIZE - 4.0),
                LINE_COLORS[k],
                k + 1
            );
        }
    }
    if let Some((sel, map)) = fit {
        for p in conic_paths(map, &v) {
            let _ = writeln!(
                s,
                r#"<path d="{}" fill="none" stroke="magenta" stroke-width="1.5" stroke-dasharray="6 3"/>"#,
                path_d(&p, &v)
            );
        }
        let names: Vec<String> = sel.iter().map(|l| format!("q{l}")).collect();
        let _ = writeln!(s, r#"<text x="8" y="{}" font-size="12" fill="magenta">fitted conic through {}</text>"#, SIZE - 8.0, names.join(", "));
    }
    let mut at_infinity = Vec::new();
    for (label, p) in cfg.nodes() {
        match affine(p) {
            Some(a) => {
                let (x, y) = v.px(a);
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="black"/>"#);
                let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11">q{label}</text>"#, x + 5.0, y - 5.0);
            }
            None => at_infinity.push(format!("q{label} = {p}")),
        }
    }
    for (i, t) in at_infinity.iter().enumerate() {
        let _ = writeln!(s, r#"<text x="8" y="{}" font-size="12">at infinity: {t}</text>"#, 18 + 16 * i);
    }
    s.push_str("</svg>\n");
    s
}
