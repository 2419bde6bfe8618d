//! The part of the fundamental domain that can carry zeros: below a ceiling
//! set by the expansion at infinity and outside horodiscs at the finite
//! cusps set by the cusp expansions.

use super::boxes::{Rect, MIN_Y};
use crate::error::Result;
use crate::modular_forms::{cusp_expansion, EisensteinForm};
use crate::group_registry::GroupDescriptor;
use crate::series_core::GrowthModel;
use std::f64::consts::PI;

/// Share of the leading term the rest of an expansion may reach.
const BUDGET: f64 = 0.25;

/// Disc tangent to the real line at `x` with radius `r`.
#[derive(Clone, Copy, Debug)]
struct Disc {
    x: f64,
    r: f64,
}

#[derive(Debug)]
pub struct SearchRegion {
    discs: Vec<Disc>,
    pub y_ceil: f64,
}

/// Largest |q| for which sum m_n |q|^n stays within budget, given ln m_n
/// for exponents n >= 1 relative to the leading one and an optional bound
/// on the omitted tail.
fn zero_free_ratio(terms: &[(i64, f64)], tail: impl Fn(f64) -> f64) -> f64 {
    let sum = |r: f64| -> f64 {
        let lr = r.ln();
        terms.iter().map(|&(n, lm)| (lm + n as f64 * lr).exp()).sum::<f64>() + tail(r)
    };
    let last_ok = |r: f64| {
        terms.last().is_none_or(|&(n, lm)| lm + n as f64 * r.ln() < (1e-12f64).ln())
    };
    let ok = |r: f64| sum(r) <= BUDGET && last_ok(r);
    let (mut lo, mut hi) = (1e-300f64, 0.5f64);
    if ok(hi) {
        return hi;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl SearchRegion {
    pub fn new(g: &GroupDescriptor, form: &EisensteinForm) -> Result<Self> {
        let h = g.h();
        let f = &form.qexp;
        let terms: Vec<(i64, f64)> =
            f.terms().filter(|(n, c)| *n >= 1 && **c != 0).map(|(n, c)| (n, crate::series_core::Coeff::ln_abs(c))).collect();
        let model = GrowthModel::fit_auto(f);
        let last = f.order() - 1;
        let r = zero_free_ratio(&terms, |r| model.tail(last, r));
        let y_ceil = -h * r.ln() / (2.0 * PI);

        let mut discs = Vec::new();
        for class in g.cusp_classes.iter().filter(|c| c.label != "inf") {
            let rep = g.class_representative(&class.label);
            let ex = cusp_expansion(form, rep, 40)?;
            let mags = ex.magnitudes();
            let lead = mags[0].1.ln();
            let rel: Vec<(i64, f64)> = mags[1..].iter().map(|&(n, m)| (n - ex.order, m.ln() - lead)).collect();
            let r = zero_free_ratio(&rel, |_| 0.0);
            let w = class.width.to_f64();
            let big_y = -w * r.ln() / (2.0 * PI);
            for &pi in &class.points {
                let p = &g.cusp_points[pi];
                let Some(x) = p.point.as_ref() else { continue };
                let c = p.scaling.c.to_f64();
                if c == 0.0 {
                    continue;
                }
                let rad = 0.5 / (c * c * big_y);
                for t in [-h, 0.0, h] {
                    discs.push(Disc { x: x.to_f64() + t, r: rad });
                }
            }
        }
        Ok(SearchRegion { discs, y_ceil })
    }

    /// Lowest height above x that is in the domain and outside every disc.
    pub fn y_need(&self, g: &GroupDescriptor, x: f64) -> f64 {
        let mut y = g.y_low(x);
        for d in &self.discs {
            let dx = x - d.x;
            if dx.abs() >= d.r {
                continue;
            }
            let s = (d.r * d.r - dx * dx).sqrt();
            if y < d.r + s {
                y = d.r + s;
            }
        }
        y
    }

    /// Column boxes covering the search region, slightly wider than the strip.
    pub fn columns(&self, g: &GroupDescriptor, ncol: usize) -> Vec<Rect> {
        let h = g.h();
        let (lo, hi) = (-h / 2.0 - 0.00731 * h, h / 2.0 + 0.00917 * h);
        let top = self.y_ceil * 1.0137;
        let mut out = Vec::new();
        for i in 0..ncol {
            let xa = lo + (hi - lo) * i as f64 / ncol as f64;
            let xb = lo + (hi - lo) * (i + 1) as f64 / ncol as f64;
            let mut ymin = f64::INFINITY;
            for k in 0..=32 {
                let x = xa + (xb - xa) * k as f64 / 32.0;
                ymin = ymin.min(self.y_need(g, x));
            }
            let bottom = (0.95 * ymin).max(2.0 * MIN_Y);
            if bottom < top {
                out.push(Rect::new(xa, xb, bottom, top));
            }
        }
        out
    }
}
