//! Evaluation anywhere in the upper half-plane by reduction to the standard
//! domain of SL2(Z) followed by rapidly convergent q-series.

use crate::numeric::{Complex, Real};
use crate::series_core::{bernoulli, eisenstein_level1, sigma_table};
use rug::{Integer, Rational};

fn t<T: Real>(x: f64, prec: u32) -> T {
    T::from_f64_prec(x, prec)
}

fn ti<T: Real>(x: i128, prec: u32) -> T {
    T::from_integer(&Integer::from(x), prec)
}

fn two_pi_i<T: Real>(prec: u32) -> Complex<T> {
    Complex::new(t(0.0, prec), T::pi(prec) * t(2.0, prec))
}

/// tau = g z with g = [[a, b], [c, d]] in SL2(Z) and tau in the standard domain.
#[derive(Clone, Debug)]
pub struct Reduced<T> {
    pub tau: Complex<T>,
    pub g: [i128; 4],
    /// c z + d
    pub j: Complex<T>,
}

pub fn reduce<T: Real>(z: &Complex<T>) -> Reduced<T> {
    let prec = z.precision();
    let mut tau = z.clone();
    let (mut a, mut b, mut c, mut d) = (1i128, 0i128, 0i128, 1i128);
    for _ in 0..1_000_000 {
        let n = tau.re.to_f64().round();
        if n != 0.0 {
            tau.re = tau.re.clone() - t(n, prec);
            let n = n as i128;
            a -= n * c;
            b -= n * d;
        }
        if tau.norm_sqr().to_f64() < 1.0 - 1e-12 {
            tau = -tau.recip();
            (a, b, c, d) = (-c, -d, a, b);
        } else {
            break;
        }
    }
    let j = Complex::new(z.re.clone() * ti(c, prec) + ti(d, prec), z.im.clone() * ti(c, prec));
    Reduced { tau, g: [a, b, c, d], j }
}

/// Dedekind sum s(h, k) for k > 0, by reciprocity.
pub fn dedekind_sum(h: i128, k: i128) -> Rational {
    assert!(k > 0);
    let h = h.rem_euclid(k);
    if h == 0 {
        return Rational::new();
    }
    let num = Integer::from(h * h + k * k + 1);
    let den = Integer::from(12 * h * k);
    Rational::from((num, den)) - Rational::from((1, 4)) - dedekind_sum(k, h)
}

/// Number of series terms so that |q|^n < 2^-(p+16) for Im tau >= 0.86.
fn terms_for(prec: u32) -> usize {
    ((prec as f64 + 16.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * 0.86)).ceil()
        as usize
        + 2
}

/// Level-one Eisenstein series with real coefficients, evaluated with its
/// derivative d/dz.
#[derive(Clone, Debug)]
pub struct LevelOne<T> {
    pub weight: u32,
    coeffs: Vec<T>,
    prec: u32,
}

impl<T: Real> LevelOne<T> {
    pub fn new(weight: u32, prec: u32) -> Self {
        let k = weight / 2;
        // |a_n| <= (8k/|B_2k|) n^(2k-1)
        let ln_c = (Rational::from(8 * k) / bernoulli(weight).abs()).to_f64().ln();
        let model = crate::series_core::GrowthModel { ln_c, d: (weight - 1) as f64 };
        let m = crate::series_core::choose_truncation(&model, 0.86, 1.0, prec + 16) as usize;
        let e = eisenstein_level1(weight, m).expect("even weight >= 4");
        let coeffs = e.coeffs().iter().map(|c| T::from_rational(c, prec)).collect();
        LevelOne { weight, coeffs, prec }
    }

    /// Value and d/dtau at a reduced point.
    pub fn at_reduced(&self, tau: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let q = (two_pi_i::<T>(self.prec) * tau.clone()).exp();
        let mut v = Complex::zero(self.prec);
        let mut dv = Complex::zero(self.prec);
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            v = v * q.clone() + Complex::from_real(c.clone());
            dv = dv * q.clone() + Complex::from_real(c.clone() * t(n as f64, self.prec));
        }
        (v, dv * two_pi_i(self.prec))
    }

    /// Value and derivative at any point of the upper half-plane.
    pub fn eval(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let r = reduce(z);
        self.eval_reduced(&r)
    }

    pub fn eval_reduced(&self, r: &Reduced<T>) -> (Complex<T>, Complex<T>) {
        let (e, de) = self.at_reduced(&r.tau);
        let w = self.weight as i64;
        let jinv = r.j.recip();
        // E(z) = J^-w E(tau), E'(z) = J^-w-2 E'(tau) - w c J^-w-1 E(tau)
        let jw = jinv.powi(w);
        let val = jw.clone() * e.clone();
        let c = ti::<T>(r.g[2], self.prec) * t(w as f64, self.prec);
        let der = jw.clone() * jinv.clone() * jinv.clone() * de - (jw * jinv * e).scale(&c);
        (val, der)
    }
}

/// Quasimodular E_2.
#[derive(Clone, Debug)]
pub struct E2<T> {
    coeffs: Vec<T>,
    prec: u32,
}

impl<T: Real> E2<T> {
    pub fn new(prec: u32) -> Self {
        let m = terms_for(prec) + 8;
        let s = sigma_table(1, m);
        let coeffs = s
            .iter()
            .enumerate()
            .map(|(n, v)| {
                if n == 0 {
                    t(1.0, prec)
                } else {
                    T::from_integer(&Integer::from(v * -24), prec)
                }
            })
            .collect();
        E2 { coeffs, prec }
    }

    fn at_reduced(&self, tau: &Complex<T>) -> Complex<T> {
        let q = (two_pi_i::<T>(self.prec) * tau.clone()).exp();
        let mut v = Complex::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            v = v * q.clone() + Complex::from_real(c.clone());
        }
        v
    }

    /// E_2(z) = J^-2 (E_2(tau) + (6 i c / pi) J).
    pub fn eval_reduced(&self, r: &Reduced<T>) -> Complex<T> {
        let p = self.prec;
        let e = self.at_reduced(&r.tau);
        let k = ti::<T>(r.g[2], p) * t(6.0, p) / T::pi(p);
        let corr = r.j.mul_i().scale(&k);
        let jinv = r.j.recip();
        (e + corr) * jinv.clone() * jinv
    }

    pub fn eval(&self, z: &Complex<T>) -> Complex<T> {
        self.eval_reduced(&reduce(z))
    }
}

/// log of Dedekind eta at a reduced point: 2 pi i tau / 24 + log of the
/// pentagonal sum.
fn log_eta_at_reduced<T: Real>(tau: &Complex<T>, prec: u32) -> Complex<T> {
    let tpi = two_pi_i::<T>(prec);
    let q = (tpi.clone() * tau.clone()).exp();
    let pre = (tpi * tau.clone()).scale(&(t::<T>(1.0, prec) / t(24.0, prec)));
    let limit = terms_for(prec) as i64;
    let mut s = Complex::one(prec);
    let mut k: i64 = 1;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        if e1 > limit {
            break;
        }
        let e2 = k * (3 * k + 1) / 2;
        let term = q.powi(e1) + q.powi(e2);
        s = if k % 2 == 1 { s - term } else { s + term };
        k += 1;
    }
    pre + s.ln()
}

/// eta(z) for any z in the upper half-plane.
pub fn eta<T: Real>(z: &Complex<T>) -> Complex<T> {
    eta_reduced(&reduce(z), z.precision())
}

pub fn eta_reduced<T: Real>(r: &Reduced<T>, prec: u32) -> Complex<T> {
    log_eta_reduced(r, prec).exp()
}

/// A logarithm of eta(z) (branch unspecified), z = g^-1 tau.
pub fn log_eta_reduced<T: Real>(r: &Reduced<T>, prec: u32) -> Complex<T> {
    let e = log_eta_at_reduced(&r.tau, prec);
    // z = M tau with M = g^-1
    let [a, b, c, d] = r.g;
    let (mut ma, mut mb, mut mc, mut md) = (d, -b, -c, a);
    if mc < 0 || (mc == 0 && md < 0) {
        (ma, mb, mc, md) = (-ma, -mb, -mc, -md);
    }
    let ex = if mc == 0 {
        // z = tau + mb
        Rational::from((Integer::from(mb), 12))
    } else {
        Rational::from((Integer::from(ma + md), Integer::from(12 * mc))) - dedekind_sum(md, mc)
    };
    let two = Rational::from(2);
    let q = Rational::from(&ex / &two).floor();
    let red = Rational::from(ex - q * two);
    let phase = Complex::new(t(0.0, prec), T::from_rational(&red, prec) * T::pi(prec));
    if mc == 0 {
        return e + phase;
    }
    let ct = r.tau.scale(&ti(mc, prec)).add_real(&ti(md, prec));
    let half_log = (-ct.mul_i()).ln().scale(&(t::<T>(1.0, prec) / t(2.0, prec)));
    e + phase + half_log
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::BigFloat;

    #[test]
    fn dedekind_sum_small() {
        // s(1, k) = (k-1)(k-2)/(12k)
        for k in 1..20i128 {
            let expect = Rational::from(((k - 1) * (k - 2), 12 * k));
            assert_eq!(dedekind_sum(1, k), expect);
        }
        // brute force oracle
        let saw = |x: Rational| -> Rational {
            if *x.denom() == 1 {
                Rational::new()
            } else {
                let f = Rational::from(x.floor_ref());
                x - f - Rational::from((1, 2))
            }
        };
        for k in 1..15i128 {
            for h in -20..20i128 {
                if crate::exact::gcd(h as i64, k as i64) != 1 {
                    continue;
                }
                let mut s = Rational::new();
                for r in 1..k {
                    s += saw(Rational::from((r, k))) * saw(Rational::from((h * r, k)));
                }
                assert_eq!(dedekind_sum(h, k), s, "{h} {k}");
            }
        }
    }

    #[test]
    fn reduction_lands_in_domain() {
        let z = Complex::<f64>::new(0.3127, 0.0013);
        let r = reduce(&z);
        assert!(r.tau.re.abs() <= 0.5 + 1e-12);
        assert!(r.tau.norm_sqr() >= 1.0 - 1e-9);
        let [a, b, c, d] = r.g;
        assert_eq!(a * d - b * c, 1);
    }

    #[test]
    fn e4_modularity() {
        let e4 = LevelOne::<BigFloat>::new(4, 128);
        let z = Complex::<BigFloat>::from_f64(0.1, 0.35, 128);
        // gamma = [[2, 1], [7, 4]]
        let gz = (z.scale_f64(2.0).add_real(&BigFloat::new(128, 1.0)))
            / (z.scale_f64(7.0).add_real(&BigFloat::new(128, 4.0)));
        let j = z.scale_f64(7.0).add_real(&BigFloat::new(128, 4.0));
        let (a, _) = e4.eval(&gz);
        let (b, _) = e4.eval(&z);
        let diff = (a - j.powi(4) * b.clone()).abs().to_f64();
        assert!(diff < 1e-30 * b.abs().to_f64().max(1.0), "{diff}");
    }

    #[test]
    fn eta_transformation_and_product() {
        let z = Complex::<BigFloat>::from_f64(0.21, 0.05, 128);
        let v = eta(&z);
        // direct product at a moderately small height, q^(1/24) prod (1 - q^n)
        let p = 128;
        let q = (two_pi_i::<BigFloat>(p) * z.clone()).exp();
        let inv24 = BigFloat::new(p, 1.0) / BigFloat::new(p, 24.0);
        let mut prod = (two_pi_i::<BigFloat>(p) * z.clone()).scale(&inv24).exp();
        let mut qn = q.clone();
        for _ in 0..4000 {
            prod = prod * (Complex::one(p) - qn.clone());
            qn = qn * q.clone();
        }
        assert!((v - prod).abs().to_f64() < 1e-25);
    }

    #[test]
    fn derivatives_match_differences() {
        let e = LevelOne::<BigFloat>::new(12, 160);
        let z = Complex::<BigFloat>::from_f64(-0.2, 0.4, 160);
        let hstep = 1e-20;
        let zp = z.clone() + Complex::from_f64(hstep, 0.0, 160);
        let zm = z.clone() - Complex::from_f64(hstep, 0.0, 160);
        let (_, d) = e.eval(&z);
        let fd = (e.eval(&zp).0 - e.eval(&zm).0).scale_f64(0.5 / hstep);
        assert!((d.clone() - fd).abs().to_f64() < 1e-15 * d.abs().to_f64());
        let e2 = E2::<BigFloat>::new(160);
        // Ramanujan: E2' = 2 pi i (E2^2 - E4) / 12
        let e4 = LevelOne::<BigFloat>::new(4, 160);
        let fd2 = (e2.eval(&zp) - e2.eval(&zm)).scale_f64(0.5 / hstep);
        let v = e2.eval(&z);
        let r = (v.clone() * v - e4.eval(&z).0) * two_pi_i(160);
        let r = r.scale_f64(1.0 / 12.0);
        assert!((r.clone() - fd2).abs().to_f64() < 1e-15 * r.abs().to_f64());
    }
}
