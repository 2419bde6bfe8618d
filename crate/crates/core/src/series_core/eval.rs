use super::{Coeff, QSeries};
use crate::error::{Error, Result};
use crate::numeric::{Complex, Real};

/// |a_n| <= C n^d for n >= 1, stored as (ln C, d).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthModel {
    pub ln_c: f64,
    pub d: f64,
}

const SAFETY: f64 = 4.0;

impl GrowthModel {
    /// C = 4 max_n |a_n| / n^d over the retained positive exponents.
    pub fn fit<C: Coeff>(f: &QSeries<C>, d: f64) -> Self {
        let mut best = f64::NEG_INFINITY;
        for (n, c) in f.terms() {
            if n >= 1 {
                best = best.max(c.ln_abs() - d * (n as f64).ln());
            }
        }
        if best == f64::NEG_INFINITY {
            // no nonzero positive-exponent data: treat as a polynomial
            return GrowthModel { ln_c: f64::NEG_INFINITY, d };
        }
        GrowthModel { ln_c: best + SAFETY.ln(), d }
    }

    /// Smallest integer degree whose normalised maximum sits in the first
    /// half of the retained range, then fitted as above.
    pub fn fit_auto<C: Coeff>(f: &QSeries<C>) -> Self {
        let logs: Vec<(f64, f64)> = f
            .terms()
            .filter(|(n, c)| *n >= 1 && !c.is_zero())
            .map(|(n, c)| ((n as f64).ln(), c.ln_abs()))
            .collect();
        if logs.len() < 2 {
            return Self::fit(f, 0.0);
        }
        let half = f.order() as f64 / 2.0;
        let mut d = 0.0;
        while d < 1.0e5 {
            let (mut arg, mut best) = (0.0, f64::NEG_INFINITY);
            for &(ln_n, la) in &logs {
                let v = la - d * ln_n;
                if v > best {
                    best = v;
                    arg = ln_n.exp();
                }
            }
            if arg <= half {
                break;
            }
            d += 1.0;
        }
        Self::fit(f, d)
    }

    /// Bound on sum_{n > m} C n^d r^n, or infinity when the terms are not
    /// yet decreasing at n = m + 1.
    pub fn tail(&self, m: i64, r: f64) -> f64 {
        if r <= 0.0 || self.ln_c == f64::NEG_INFINITY {
            return 0.0;
        }
        let n = (m.max(0) + 1) as f64;
        let ratio = (1.0 + 1.0 / n).powf(self.d) * r;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        let ln_first = self.ln_c + self.d * n.ln() + n * r.ln();
        ln_first.exp() / (1.0 - ratio)
    }
}

/// Truncation order for tail below 2^-p at height y_min.
pub fn choose_truncation(model: &GrowthModel, y_min: f64, h: f64, p: u32) -> i64 {
    let rate = 2.0 * std::f64::consts::PI * y_min / h;
    let start = ((p as f64 * std::f64::consts::LN_2 + model.ln_c) / rate).ceil();
    let mut m = (start.max(64.0)) as i64;
    let r = (-rate).exp();
    let target = (-(p as f64) * std::f64::consts::LN_2).exp();
    while model.tail(m, r) >= target && m < 1_000_000 {
        m += (m / 8).max(1);
    }
    m
}

/// Horner evaluation in q_h with a tail estimate.
pub fn evaluate<T: Real, C: Coeff>(
    f: &QSeries<C>,
    z: &Complex<T>,
    y_floor: f64,
) -> Result<(Complex<T>, f64)> {
    let y = z.im.to_f64();
    if y < y_floor {
        return Err(Error::BelowFloor(y, y_floor));
    }
    let prec = z.precision();
    let h = T::from_rational(f.width(), prec);
    let two_pi = T::pi(prec) * T::from_f64_prec(2.0, prec);
    let q = z.scale(&(two_pi / h)).mul_i().exp();
    let mut acc = Complex::<T>::zero(prec);
    for c in f.coeffs().iter().rev() {
        acc = acc * q.clone() + c.to_complex::<T>(prec);
    }
    if f.lead() != 0 {
        acc = acc * q.powi(f.lead());
    }
    let r = q.abs().to_f64();
    let model = GrowthModel::fit_auto(f);
    let tail = model.tail(f.order() - 1, r);
    Ok((acc, tail))
}
