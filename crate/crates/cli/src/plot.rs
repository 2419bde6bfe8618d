//! Two-panel SVG: the fundamental domain with the located zeros, and their
//! images in the j-plane together with the image of the lower arcs.

use eiszero::group_registry::GroupDescriptor;
use eiszero::modular_forms::{build_hauptmodul, Evaluable, HauptEval};
use eiszero::numeric::{BigFloat, Complex};
use eiszero::zero_locator::ZeroReport;
use eiszero::Result;
use std::fmt::Write;

const PANEL: f64 = 420.0;
const PAD: f64 = 40.0;
const ARC_SAMPLES: usize = 160;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + PAD + (x - self.x0) / (self.x1 - self.x0) * (PANEL - 2.0 * PAD)
    }
    fn py(&self, y: f64) -> f64 {
        PAD + (self.y1 - y) / (self.y1 - self.y0) * (PANEL - 2.0 * PAD)
    }
    fn path(&self, pts: &[(f64, f64)]) -> String {
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, self.px(x), self.py(y));
        }
        d
    }
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (l, r) = (f.left + PAD, f.left + PANEL - PAD);
    let (t, b) = (PAD, PANEL - PAD);
    let _ = writeln!(out, r##"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="#999"/>"##, r - l, b - t);
    for (v, anchor) in [(f.x0, "start"), (f.x1, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" font-size="10" text-anchor="{anchor}">{}</text>"#,
            f.px(v),
            b + 14.0,
            fmt_num(v)
        );
    }
    for v in [f.y0, f.y1] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
            l - 4.0,
            f.py(v) + 3.0,
            fmt_num(v)
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{xlabel}</text>"#, (l + r) / 2.0, b + 28.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{ylabel}</text>"#, l, t - 8.0);
}

fn fmt_num(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn colour(i: usize, n: usize) -> String {
    let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
    let r = (40.0 + 200.0 * t) as u8;
    let b = (220.0 - 180.0 * t) as u8;
    format!("rgb({r},60,{b})")
}

/// Samples of j along the lower arcs, as points of the j-plane.
fn arc_image(g: &GroupDescriptor) -> Result<Vec<Vec<(f64, f64)>>> {
    let j = build_hauptmodul(g, 8)?;
    let ev = HauptEval::<BigFloat>::new(&j, 96);
    let mut out = Vec::new();
    for a in &g.arcs {
        let (t0, t1) = a.angle_range();
        let mut pts = Vec::new();
        for i in 1..ARC_SAMPLES {
            let (x, y) = a.point(t0 + (t1 - t0) * i as f64 / ARC_SAMPLES as f64);
            if y < 1e-3 {
                continue;
            }
            let v = ev.eval(&Complex::from_f64(x, y, 96)).0.to_f64();
            if v.re.is_finite() && v.im.is_finite() {
                pts.push((v.re, v.im));
            }
        }
        out.push(pts);
    }
    Ok(out)
}

pub fn render(g: &GroupDescriptor, reports: &[&ZeroReport]) -> Result<String> {
    let h = g.h();
    let (a0, a1) = reports.first().map_or((0.0, 0.0), |r| (r.a0, r.a1));
    let mut ymax = reports
        .iter()
        .flat_map(|r| r.zeros.iter().map(|z| z.z_f64().1))
        .fold(g.y0().max(g.y1()), f64::max);
    ymax = (ymax * 1.25).max(0.6 * h);
    let dom = Frame { x0: -0.6 * h, x1: 0.6 * h, y0: 0.0, y1: ymax, left: 0.0 };

    let (lo, hi) = (a0.min(a1), a0.max(a1));
    let span = (hi - lo).max(1.0);
    let (mut jx0, mut jx1) = (lo - 0.1 * span, hi + 0.1 * span);
    let mut jy = 0.25 * span;
    for r in reports {
        for z in &r.zeros {
            let (re, im) = z.j_f64();
            jx0 = jx0.min(re - 0.1 * span);
            jx1 = jx1.max(re + 0.1 * span);
            jy = jy.max(1.1 * im.abs());
        }
    }
    let jp = Frame { x0: jx0, x1: jx1, y0: -jy, y1: jy, left: PANEL };

    let weights: Vec<String> = reports.iter().map(|r| r.weight.to_string()).collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        2.0 * PANEL,
        PANEL + 20.0,
        2.0 * PANEL,
        PANEL + 20.0
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="16" font-size="13" text-anchor="middle">{} weights {}</text>"#,
        PANEL,
        escape(&g.name),
        weights.join(",")
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="jclip"><rect x="{}" y="{PAD}" width="{}" height="{}"/></clipPath></defs>"#,
        PANEL + PAD,
        PANEL - 2.0 * PAD,
        PANEL - 2.0 * PAD
    );

    axes(&mut s, &dom, "Re z", "Im z");
    let mut outline = vec![(-h / 2.0, ymax)];
    for a in &g.arcs {
        let (t0, t1) = a.angle_range();
        outline.extend((0..=ARC_SAMPLES).map(|i| a.point(t0 + (t1 - t0) * i as f64 / ARC_SAMPLES as f64)));
    }
    if g.arcs.is_empty() {
        outline.push((-h / 2.0, 0.0));
        outline.push((h / 2.0, 0.0));
    }
    outline.push((h / 2.0, ymax));
    let _ = writeln!(s, r##"<path d="{}" fill="#eef3fb" stroke="#224" stroke-width="1.2"/>"##, dom.path(&outline));

    axes(&mut s, &jp, "Re j", "Im j");
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c33" stroke-width="3" opacity="0.35"/>"##,
        jp.px(lo),
        jp.py(0.0),
        jp.px(hi),
        jp.py(0.0)
    );
    for curve in arc_image(g)? {
        if curve.len() > 1 {
            let _ = writeln!(
                s,
                r##"<path d="{}" fill="none" stroke="#224" stroke-width="1" clip-path="url(#jclip)"/>"##,
                jp.path(&curve)
            );
        }
    }

    for (i, r) in reports.iter().enumerate() {
        let c = colour(i, reports.len());
        for z in &r.zeros {
            let (x, y) = z.z_f64();
            let (jr, ji) = z.j_f64();
            let stroke = if z.on_arc { "none" } else { "black" };
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.6" fill="{c}" stroke="{stroke}"><title>w={} {x:.6}+{y:.6}i</title></circle>"#,
                dom.px(x),
                dom.py(y),
                r.weight
            );
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.6" fill="{c}" stroke="{stroke}" clip-path="url(#jclip)"/>"#,
                jp.px(jr),
                jp.py(ji)
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
