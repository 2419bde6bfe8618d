use super::{ArcSegment, CuspPoint, GroupDescriptor};
use crate::error::{Error, Result};
use crate::modular_forms::{build_hauptmodul, Evaluable, HauptEval, Hauptmodul};
use crate::numeric::{BigFloat, Complex, Real};
use rug::Rational;

/// Height in the local coordinate at which a cusp value is read off.
fn cusp_height(p: &CuspPoint) -> f64 {
    20.0 * p.width.to_f64() + 10.0
}

/// Limit of the hauptmodul at a finite cusp, read off far up the cusp's
/// vertical in the local coordinate.
pub fn cusp_value<T: Real + Send + Sync>(eval: &HauptEval<T>, p: &CuspPoint, prec: u32) -> Complex<T> {
    let tau = Complex::<T>::from_f64(0.0, cusp_height(p), prec);
    eval.eval(&p.scaling.act(&tau)).0
}

/// Value of the hauptmodul at a point of the closed domain; points on the
/// real line are cusps and use the limit along the cusp's vertical.
fn value_at<T: Real + Send + Sync>(
    g: &GroupDescriptor,
    eval: &HauptEval<T>,
    x: &Rational,
    y2: &Rational,
    prec: u32,
) -> Result<Complex<T>> {
    if *y2 == 0 {
        let p = g
            .cusp_points
            .iter()
            .find(|p| p.point.as_ref() == Some(x))
            .ok_or_else(|| Error::UnknownCusp(x.to_string()))?;
        return Ok(cusp_value(eval, p, prec));
    }
    let y = T::from_rational(y2, prec).sqrt();
    Ok(eval.eval(&Complex::new(T::from_rational(x, prec), y)).0)
}

/// (a0, a1) = j at -h/2 + i y0 and at i y1, real parts.
pub fn compute_a0_a1(g: &GroupDescriptor, j: &Hauptmodul, prec: u32) -> Result<(f64, f64)> {
    let eval = HauptEval::<BigFloat>::new(j, prec);
    let half = Rational::from(-(&g.width / Rational::from(2)));
    let v0 = value_at(g, &eval, &half, &g.y0_sq, prec)?;
    let v1 = value_at(g, &eval, &Rational::new(), &g.y1_sq, prec)?;
    for v in [&v0, &v1] {
        let (re, im) = (v.re.to_f64(), v.im.to_f64());
        if g.acceptable && im.abs() > 1e-20 * re.abs().max(1.0) {
            return Err(Error::ImaginaryPart(im, g.name.clone()));
        }
    }
    Ok((v0.re.to_f64(), v1.re.to_f64()))
}

/// A critical point on the lower arcs with its hauptmodul value.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub z: (f64, f64),
    pub j: f64,
    pub at_cusp: bool,
}

/// Relative size below which d Re j / dtheta is numerically flat.
const FLAT: f64 = 1e-8;
/// Sign changes this close to the real line are the approach to a cusp.
const CUSP_APPROACH: f64 = 1e-3;

/// sign(dy/dtheta) * sign(d Re j / dtheta) along an arc; 0 where j is flat
/// to working precision (the approach to a cusp on the real line).
fn ratio_sign(a: &ArcSegment, eval: &HauptEval<f64>, theta: f64) -> f64 {
    let (x, y) = a.point(theta);
    let r = a.radius();
    let (v, dj) = eval.eval(&Complex::new(x, y));
    let dz = Complex::new(-r * theta.sin(), r * theta.cos());
    let djt = (dj * dz).re;
    if !djt.is_finite() || !v.re.is_finite() {
        return f64::NAN;
    }
    if djt.abs() < FLAT * v.abs().max(1.0) {
        return 0.0;
    }
    let dy = r * theta.cos();
    dy.signum() * djt.signum()
}

fn bisect(a: &ArcSegment, eval: &HauptEval<f64>, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = ratio_sign(a, eval, lo);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let s = ratio_sign(a, eval, mid);
        if s == s_lo || s == 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Number of classes of critical points where dy/dj changes sign, plus the
/// cusp classes of the counting set.
pub fn compute_c(g: &GroupDescriptor) -> Result<i64> {
    let j = build_hauptmodul(g, 8)?;
    Ok(compute_c_with(g, &j, 2048)?.0)
}

pub fn compute_c_with(
    g: &GroupDescriptor,
    j: &Hauptmodul,
    samples: usize,
) -> Result<(i64, Vec<CriticalPoint>)> {
    let eval = HauptEval::<f64>::new(j, 53);
    let mut crit: Vec<CriticalPoint> = Vec::new();
    let mut push_point = |x: f64, y: f64, at_cusp: bool, jv: f64| {
        crit.push(CriticalPoint { z: (x, y), j: jv, at_cusp });
    };
    let jre = |x: f64, y: f64| eval.eval(&Complex::new(x, y)).0.re;
    // first and last sign of each arc, for junction comparisons
    let mut ends: Vec<(f64, f64)> = Vec::new();
    for (ai, a) in g.arcs.iter().enumerate() {
        let (t0, t1) = a.angle_range();
        let step = (t1 - t0) / samples as f64;
        let mut prev: Option<(f64, f64)> = None;
        let mut first = 0.0;
        for i in 0..samples {
            let th = t0 + (i as f64 + 0.5) * step;
            let s = ratio_sign(a, &eval, th);
            if !s.is_finite() {
                return Err(Error::Indeterminate(ai));
            }
            if s == 0.0 {
                continue;
            }
            if let Some((pth, ps)) = prev {
                if ps != s {
                    let tc = bisect(a, &eval, pth, th);
                    let (x, y) = a.point(tc);
                    if y > CUSP_APPROACH {
                        push_point(x, y, false, jre(x, y));
                    }
                }
            } else {
                first = s;
            }
            prev = Some((th, s));
        }
        if prev.is_none() {
            return Err(Error::Indeterminate(ai));
        }
        ends.push((first, prev.map(|p| p.1).unwrap_or(first)));
    }
    let n = g.arcs.len();
    for i in 0..n {
        // the last arc wraps to the first through the glued vertical sides
        let next = (i + 1) % n;
        let a = &g.arcs[i];
        let y2 = a.height_sq_at(&a.x_to);
        if y2 == 0 {
            continue;
        }
        if ends[i].1 != ends[next].0 {
            let x = a.x_to.to_f64();
            let y = y2.to_f64().sqrt();
            push_point(x, y, false, jre(x, y));
        }
    }
    for class in g.counting_set() {
        let p = g.class_representative(&class.label);
        let tau = Complex::<f64>::from_f64(0.0, cusp_height(p), 53);
        let v = eval.eval(&p.scaling.act(&tau)).0.re;
        let x = p.point.as_ref().map_or(0.0, |q| q.to_f64());
        push_point(x, 0.0, true, v);
    }
    let mut reps: Vec<f64> = Vec::new();
    for c in &crit {
        let tol = 1e-10 * c.j.abs().max(1.0);
        if !reps.iter().any(|r| (r - c.j).abs() <= tol) {
            reps.push(c.j);
        }
    }
    Ok((reps.len() as i64, crit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_registry::get_group;

    #[test]
    fn sl2z_a0_a1() {
        let g = get_group("SL2Z").unwrap();
        let j = build_hauptmodul(&g, 10).unwrap();
        let (a0, a1) = compute_a0_a1(&g, &j, 128).unwrap();
        assert!((a0 + 744.0).abs() < 1e-9, "{a0}");
        assert!((a1 - 984.0).abs() < 1e-9, "{a1}");
    }

    #[test]
    fn small_level_c_values() {
        let cases = [
            ("SL2Z", 0),
            ("Gamma0_2", 0),
            ("Gamma0_3", 1),
            ("Gamma0_4", 1),
            ("Gamma0_6+3", 2),
            ("Gamma0*_4", 0),
        ];
        for (name, c) in cases {
            let g = get_group(name).unwrap();
            assert_eq!(compute_c(&g).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn imaginary_arc_values_are_indeterminate() {
        let g = get_group("Gamma0_12+3").unwrap();
        assert!(matches!(compute_c(&g), Err(Error::Indeterminate(_))));
    }
}
