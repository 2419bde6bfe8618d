//! Argument-principle counting on axis-aligned boxes and recursive isolation.

use crate::error::{Error, Result};
use crate::modular_forms::Evaluable;
use crate::numeric::{Complex, Real};
use std::f64::consts::PI;

/// Lowest admissible Im z for a box edge.
pub const MIN_Y: f64 = 1e-6;

/// Largest allowed phase-change bound per contour step.
const STEP_BOUND: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }
    pub fn around(x: f64, y: f64, r: f64) -> Self {
        Rect::new(x - r, x + r, y - r, y + r)
    }
    pub fn diam(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }
    pub fn expand(&self, d: f64) -> Rect {
        Rect::new(self.x0 - d, self.x1 + d, (self.y0 - d).max(0.5 * self.y0), self.y1 + d)
    }
    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        x >= self.x0 - tol && x <= self.x1 + tol && y >= self.y0 - tol && y <= self.y1 + tol
    }
    /// Counterclockwise corners starting bottom left.
    fn corners(&self) -> [(f64, f64); 4] {
        [(self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1)]
    }
    /// Splits across the longer side at fraction t.
    pub fn split(&self, t: f64) -> (Rect, Rect) {
        if self.x1 - self.x0 >= self.y1 - self.y0 {
            let m = self.x0 + t * (self.x1 - self.x0);
            (Rect::new(self.x0, m, self.y0, self.y1), Rect::new(m, self.x1, self.y0, self.y1))
        } else {
            let m = self.y0 + t * (self.y1 - self.y0);
            (Rect::new(self.x0, self.x1, self.y0, m), Rect::new(self.x0, self.x1, m, self.y1))
        }
    }
}

struct Sample<T> {
    z: Complex<T>,
    v: Complex<T>,
    dv: Complex<T>,
}

fn sample<T: Real>(f: &impl Evaluable<T>, z: Complex<T>) -> Sample<T> {
    let (v, dv) = f.eval(&z);
    Sample { z, v, dv }
}

/// |f'/f| * len, or infinity where f vanishes or is not finite.
fn log_slope<T: Real>(s: &Sample<T>, len: f64) -> f64 {
    let a = s.v.abs();
    if !a.is_finite() || a == a.zero_like() {
        return f64::INFINITY;
    }
    let r = (s.dv.abs() / a).to_f64() * len;
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

/// Phase increment along [a, b]. `None` means the segment could not be
/// resolved, i.e. f has a zero on or extremely near it.
fn phase<T: Real>(f: &impl Evaluable<T>, a: &Sample<T>, b: &Sample<T>, floor: f64) -> Option<f64> {
    let d = b.z.clone() - a.z.clone();
    let len = d.abs().to_f64();
    if log_slope(a, len) <= STEP_BOUND && log_slope(b, len) <= STEP_BOUND {
        let r = b.v.clone() / a.v.clone();
        let t = r.arg().to_f64();
        return t.is_finite().then_some(t);
    }
    if len < floor {
        return None;
    }
    let mid = a.z.clone() + d.scale_f64(0.5);
    let m = sample(f, mid);
    Some(phase(f, a, &m, floor)? + phase(f, &m, b, floor)?)
}

/// Winding number of f around the box, or `None` when a zero sits on the
/// contour.
fn winding<T: Real>(f: &impl Evaluable<T>, r: &Rect, prec: u32) -> Result<Option<i64>> {
    if r.y0 < MIN_Y {
        return Err(Error::BelowFloor(r.y0, MIN_Y));
    }
    let floor = 1e-13 * r.diam().max(1e-300);
    let c = r.corners();
    let mut pts = Vec::with_capacity(16);
    for i in 0..4 {
        let (xa, ya) = c[i];
        let (xb, yb) = c[(i + 1) % 4];
        for k in 0..4 {
            let t = k as f64 / 4.0;
            pts.push(Complex::<T>::from_f64(xa + t * (xb - xa), ya + t * (yb - ya), prec));
        }
    }
    let samples: Vec<Sample<T>> = pts.into_iter().map(|z| sample(f, z)).collect();
    let mut total = 0.0;
    for i in 0..samples.len() {
        let j = (i + 1) % samples.len();
        match phase(f, &samples[i], &samples[j], floor) {
            Some(t) => total += t,
            None => return Ok(None),
        }
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 0.25 {
        return Err(Error::QuadratureFailed);
    }
    Ok(Some(n as i64))
}

/// Number of zeros, with multiplicity, inside a box. When a zero lies on the
/// contour the box is pushed outward by multiples of 1e-3 of its diameter;
/// the box actually used is returned alongside the count.
pub fn count_zeros_in_box<T: Real>(f: &impl Evaluable<T>, r: &Rect, prec: u32) -> Result<(i64, Rect)> {
    for k in 0..8 {
        let b = if k == 0 { *r } else { r.expand(1e-3 * r.diam() * k as f64) };
        if let Some(n) = winding(f, &b, prec)? {
            return Ok((n, b));
        }
    }
    Err(Error::JitterExhausted)
}

/// Newton iteration with the multiplicity-n step.
/// Iterates leaving `keep` are abandoned.
pub fn newton<T: Real>(
    f: &impl Evaluable<T>,
    z0: Complex<T>,
    n: i64,
    tol: f64,
    iters: u32,
    keep: impl Fn(f64, f64) -> bool,
) -> Option<Complex<T>> {
    let mut z = z0;
    let nf = z.re.lift(n as f64);
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        let (v, dv) = f.eval(&z);
        if dv.abs() == dv.abs().zero_like() {
            return (v.abs() == v.abs().zero_like()).then_some(z);
        }
        let step = (v / dv).scale(&nf);
        let s = step.abs().to_f64();
        if !s.is_finite() {
            return None;
        }
        z = z - step;
        if z.im.to_f64() <= 0.0 || !keep(z.re.to_f64(), z.im.to_f64()) {
            return None;
        }
        if s <= tol {
            return Some(z);
        }
        // stalled at the precision floor of a multiple root
        if s >= last && s < tol.sqrt() {
            return Some(z);
        }
        last = s;
    }
    None
}

/// An isolated zero: its position and its multiplicity from the winding
/// number of a small box around it.
#[derive(Clone, Debug)]
pub struct Isolated<T> {
    pub z: Complex<T>,
    pub multiplicity: i64,
}

pub struct Isolator<'a, T, F> {
    pub f: &'a F,
    pub prec: u32,
    /// Half-size of the confirming box around a Newton limit at height
    /// `scale`; it shrinks in proportion to Im z below that.
    pub tiny: f64,
    pub scale: f64,
    pub newton_tol: f64,
    _t: std::marker::PhantomData<T>,
}

const SPLITS: [f64; 6] = [0.5, 0.4871, 0.5163, 0.4419, 0.5647, 0.3907];

impl<'a, T: Real, F: Evaluable<T>> Isolator<'a, T, F> {
    pub fn new(f: &'a F, prec: u32, scale: f64) -> Self {
        Isolator {
            f,
            prec,
            tiny: 1e-7 * scale,
            scale,
            newton_tol: 2f64.powi(-(prec as i32) / 2).max(1e-300) * scale,
            _t: std::marker::PhantomData,
        }
    }

    fn tiny_at(&self, y: f64) -> f64 {
        self.tiny * (y / self.scale).min(1.0)
    }

    fn confirm(&self, r: &Rect, n: i64) -> Result<Option<Isolated<T>>> {
        let (cx, cy) = r.center();
        let z0 = Complex::<T>::from_f64(cx, cy, self.prec);
        let reach = 2.0 * r.diam();
        let keep = |x: f64, y: f64| y >= 0.5 * r.y0 && (x - cx).hypot(y - cy) <= reach;
        let Some(z) = newton(self.f, z0, n, self.newton_tol, 80, keep) else { return Ok(None) };
        let (x, y) = (z.re.to_f64(), z.im.to_f64());
        if !r.contains(x, y, 0.05 * r.diam()) {
            return Ok(None);
        }
        for k in 0..4 {
            let t = self.tiny_at(y) * (1.0 + 0.37 * k as f64);
            if let Some(m) = winding(self.f, &Rect::around(x, y, t), self.prec)? {
                return Ok((m == n).then_some(Isolated { z, multiplicity: n }));
            }
        }
        Ok(None)
    }

    /// Isolates the `n` zeros known to lie in `r`.
    pub fn isolate(&self, r: &Rect, n: i64, depth: u32, out: &mut Vec<Isolated<T>>) -> Result<()> {
        if n == 0 {
            return Ok(());
        }
        let tiny = self.tiny_at(r.y0);
        if n == 1 || r.diam() < 1e3 * tiny {
            if let Some(z) = self.confirm(r, n)? {
                out.push(z);
                return Ok(());
            }
        }
        if depth > 64 || r.diam() < 10.0 * tiny {
            return Err(Error::NewtonDiverged(format!("{:.6}+{:.6}i", r.center().0, r.center().1)));
        }
        for t in SPLITS {
            let (a, b) = r.split(t);
            let (Some(na), Some(nb)) = (winding(self.f, &a, self.prec)?, winding(self.f, &b, self.prec)?) else {
                continue;
            };
            if na + nb != n || na < 0 || nb < 0 {
                continue;
            }
            self.isolate(&a, na, depth + 1, out)?;
            return self.isolate(&b, nb, depth + 1, out);
        }
        Err(Error::JitterExhausted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Poly(Vec<(f64, f64)>);

    impl Evaluable<f64> for Poly {
        fn eval(&self, z: &Complex<f64>) -> (Complex<f64>, Complex<f64>) {
            let mut v = Complex::one(53);
            let mut d = Complex::zero(53);
            for &(a, b) in &self.0 {
                let t = z.clone() - Complex::new(a, b);
                d = d * t.clone() + v.clone();
                v = v * t;
            }
            (v, d)
        }
    }

    #[test]
    fn counts_polynomial_roots() {
        let p = Poly(vec![(0.3, 0.4), (0.3, 0.4), (-0.2, 0.7), (2.0, 2.0)]);
        let r = Rect::new(-1.0, 1.0, 0.1, 1.0);
        assert_eq!(count_zeros_in_box(&p, &r, 53).unwrap().0, 3);
        let far = Rect::new(-1.0, 1.0, 1.5, 1.9);
        assert_eq!(count_zeros_in_box(&p, &far, 53).unwrap().0, 0);
    }

    #[test]
    fn root_on_edge_jitters() {
        let p = Poly(vec![(0.0, 0.5)]);
        let r = Rect::new(0.0, 1.0, 0.25, 1.0);
        let (n, used) = count_zeros_in_box(&p, &r, 53).unwrap();
        assert_eq!(n, 1);
        assert!(used != r);
    }

    #[test]
    fn isolates_with_multiplicity() {
        let p = Poly(vec![(0.3, 0.4), (0.3, 0.4), (-0.2, 0.7)]);
        let r = Rect::new(-1.0, 1.0, 0.1, 1.0);
        let iso = Isolator::new(&p, 53, 1.0);
        let mut out = Vec::new();
        iso.isolate(&r, 3, 0, &mut out).unwrap();
        out.sort_by(|a, b| a.z.re.partial_cmp(&b.z.re).unwrap());
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].multiplicity, 1);
        assert_eq!(out[1].multiplicity, 2);
        assert!((out[1].z.re - 0.3).abs() < 1e-7 && (out[1].z.im - 0.4).abs() < 1e-7);
    }

    #[test]
    fn low_box_rejected() {
        let p = Poly(vec![]);
        let r = Rect::new(0.0, 1.0, 0.0, 1.0);
        assert!(matches!(count_zeros_in_box(&p, &r, 53), Err(Error::BelowFloor(..))));
    }
}
