//! Truncated Laurent series in `q_h = exp(2 pi i z / h)`.
//!
//! A [`QSeries`] stores the coefficients at exponents `lead .. lead + M`;
//! exponents from `lead + M + 1` on are unknown. Coefficients live either in
//! the exact rationals or in MPFR complex numbers of a stated precision.

mod classical;
mod eval;

pub use classical::{
    bernoulli, delta, e2_series, eisenstein_level1, eta_expansion, eta_quotient, klein_j,
    sigma_table,
};
pub use eval::{choose_truncation, evaluate, GrowthModel};

use crate::error::{Error, Result};
use crate::exact::fmt_rational;
use crate::numeric::{BigComplex, BigFloat, Complex, Real};
use rug::{Float, Integer, Rational};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Exact,
    Complex(u32),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Exact => write!(f, "exact"),
            Domain::Complex(p) => write!(f, "complex{p}"),
        }
    }
}

pub trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn zero_in(d: Domain) -> Self;
    fn one_in(d: Domain) -> Self;
    fn from_rational(q: &Rational, d: Domain) -> Self;
    fn domain(&self) -> Domain;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn to_complex<T: Real>(&self, prec: u32) -> Complex<T>;
    /// Natural log of the absolute value; `-inf` for zero.
    fn ln_abs(&self) -> f64;
}

fn ln_abs_integer(n: &Integer) -> f64 {
    if *n == 0 {
        return f64::NEG_INFINITY;
    }
    let (m, e) = n.to_f64_exp();
    m.abs().ln() + (e as f64) * std::f64::consts::LN_2
}

impl Coeff for Rational {
    fn zero_in(_: Domain) -> Self {
        Rational::new()
    }
    fn one_in(_: Domain) -> Self {
        Rational::from(1)
    }
    fn from_rational(q: &Rational, _: Domain) -> Self {
        q.clone()
    }
    fn domain(&self) -> Domain {
        Domain::Exact
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn inv(&self) -> Self {
        Rational::from(self.recip_ref())
    }
    fn to_complex<T: Real>(&self, prec: u32) -> Complex<T> {
        Complex::from_real(T::from_rational(self, prec))
    }
    fn ln_abs(&self) -> f64 {
        ln_abs_integer(self.numer()) - ln_abs_integer(self.denom())
    }
}

impl Coeff for BigComplex {
    fn zero_in(d: Domain) -> Self {
        Complex::zero(prec_of(d))
    }
    fn one_in(d: Domain) -> Self {
        Complex::one(prec_of(d))
    }
    fn from_rational(q: &Rational, d: Domain) -> Self {
        Complex::from_real(BigFloat(Float::with_val(prec_of(d), q)))
    }
    fn domain(&self) -> Domain {
        Domain::Complex(self.precision())
    }
    fn is_zero(&self) -> bool {
        self.re.0.is_zero() && self.im.0.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn to_complex<T: Real>(&self, prec: u32) -> Complex<T> {
        if T::from_f64_prec(0.0, prec).precision() == 53 {
            return Complex::new(
                T::from_f64_prec(self.re.to_f64(), prec),
                T::from_f64_prec(self.im.to_f64(), prec),
            );
        }
        // Route through exact rationals so no bits are lost between precisions.
        let re = self.re.0.to_rational().unwrap_or_default();
        let im = self.im.0.to_rational().unwrap_or_default();
        Complex::new(T::from_rational(&re, prec), T::from_rational(&im, prec))
    }
    fn ln_abs(&self) -> f64 {
        if Coeff::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        let a = Float::with_val(64, self.re.0.clone().hypot(&self.im.0));
        a.ln().to_f64()
    }
}

fn prec_of(d: Domain) -> u32 {
    match d {
        Domain::Exact => 128,
        Domain::Complex(p) => p,
    }
}

#[derive(Clone, Debug)]
pub struct QSeries<C> {
    width: Rational,
    lead: i64,
    coeffs: Vec<C>,
    domain: Domain,
}

pub type ExactSeries = QSeries<Rational>;

impl<C: Coeff> QSeries<C> {
    /// Builds a series from coefficients at `lead, lead+1, ...`; the first
    /// unknown exponent is `lead + coeffs.len()`.
    pub fn new(width: Rational, lead: i64, coeffs: Vec<C>, domain: Domain) -> Self {
        assert!(width > 0, "width must be positive");
        let mut s = QSeries { width, lead, coeffs, domain };
        s.normalize();
        s
    }

    pub fn from_fn(
        width: Rational,
        lead: i64,
        order: i64,
        domain: Domain,
        f: impl Fn(i64) -> C,
    ) -> Self {
        let coeffs = (lead..order).map(f).collect();
        Self::new(width, lead, coeffs, domain)
    }

    pub fn zero(width: Rational, order: i64, domain: Domain) -> Self {
        QSeries { width, lead: order - 1, coeffs: vec![C::zero_in(domain)], domain }
    }

    pub fn constant(c: C, width: Rational, order: i64) -> Self {
        let domain = c.domain();
        Self::monomial(c, 0, width, order, domain)
    }

    pub fn one(width: Rational, order: i64, domain: Domain) -> Self {
        Self::monomial(C::one_in(domain), 0, width, order, domain)
    }

    pub fn monomial(c: C, exp: i64, width: Rational, order: i64, domain: Domain) -> Self {
        assert!(exp < order);
        let mut coeffs = vec![C::zero_in(domain); (order - exp) as usize];
        coeffs[0] = c;
        Self::new(width, exp, coeffs, domain)
    }

    fn normalize(&mut self) {
        let first = self.coeffs.iter().position(|c| !c.is_zero());
        match first {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.lead += k as i64;
            }
            None => {
                let order = self.order();
                self.lead = order - 1;
                self.coeffs = vec![C::zero_in(self.domain)];
            }
        }
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }
    pub fn lead(&self) -> i64 {
        self.lead
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    /// M: the number of retained coefficients minus one.
    pub fn trunc_order(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }
    /// First exponent whose coefficient is unknown.
    pub fn order(&self) -> i64 {
        self.lead + self.coeffs.len() as i64
    }
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    /// Coefficient at exponent n; `None` when n is beyond the truncation.
    pub fn coeff(&self, n: i64) -> Option<C> {
        if n >= self.order() {
            None
        } else if n < self.lead {
            Some(C::zero_in(self.domain))
        } else {
            Some(self.coeffs[(n - self.lead) as usize].clone())
        }
    }
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        let l = self.lead;
        self.coeffs.iter().enumerate().map(move |(i, c)| (l + i as i64, c))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.width != o.width {
            return Err(Error::WidthMismatch(fmt_rational(&self.width), fmt_rational(&o.width)));
        }
        if self.domain != o.domain {
            return Err(Error::DomainMismatch(self.domain.to_string(), o.domain.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let order = self.order().min(o.order());
        let lead = self.lead.min(o.lead).min(order - 1);
        let zero = C::zero_in(self.domain);
        let coeffs = (lead..order)
            .map(|n| {
                let a = self.coeff(n).unwrap_or_else(|| zero.clone());
                let b = o.coeff(n).unwrap_or_else(|| zero.clone());
                a.add(&b)
            })
            .collect();
        Ok(Self::new(self.width.clone(), lead, coeffs, self.domain))
    }

    pub fn neg(&self) -> Self {
        QSeries {
            width: self.width.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            domain: self.domain,
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::new(
            self.width.clone(),
            self.lead,
            self.coeffs.iter().map(|c| c.mul(s)).collect(),
            self.domain,
        )
    }

    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        if order <= self.lead {
            return Self::zero(self.width.clone(), order, self.domain);
        }
        let keep = (order - self.lead) as usize;
        Self::new(self.width.clone(), self.lead, self.coeffs[..keep].to_vec(), self.domain)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let lead = self.lead + o.lead;
        let order = (self.lead + o.order()).min(o.lead + self.order());
        let len = (order - lead).max(1) as usize;
        let mut out = vec![C::zero_in(self.domain); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Ok(Self::new(self.width.clone(), lead, out, self.domain))
    }

    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroLeading);
        }
        let a = &self.coeffs;
        let len = a.len();
        let inv0 = a[0].inv();
        let mut b: Vec<C> = Vec::with_capacity(len);
        b.push(inv0.clone());
        for n in 1..len {
            let mut s = C::zero_in(self.domain);
            for i in 1..=n {
                if !a[i].is_zero() {
                    s = s.add(&a[i].mul(&b[n - i]));
                }
            }
            b.push(s.mul(&inv0).neg());
        }
        Ok(Self::new(self.width.clone(), -self.lead, b, self.domain))
    }

    pub fn pow_int(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.reciprocal()?.pow_int(-e);
        }
        let rel = self.coeffs.len() as i64;
        let mut acc = Self::one(self.width.clone(), rel, self.domain);
        let mut base = self.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// f(z) -> f(z + h/2): the coefficient at n picks up (-1)^n.
    pub fn half_period_shift(&self) -> Self {
        QSeries {
            width: self.width.clone(),
            lead: self.lead,
            coeffs: self
                .terms()
                .map(|(n, c)| if n.rem_euclid(2) == 1 { c.neg() } else { c.clone() })
                .collect(),
            domain: self.domain,
        }
    }

    /// f(z) -> f(m z), keeping the width.
    pub fn rescale(&self, m: u32) -> Self {
        self.rescale_to(m, &self.width.clone()).expect("same width is always consistent")
    }

    /// f(z) -> f(m z) expressed in `q_{h'}` for the target width `h'`.
    /// Exponents scale by `m h' / h`, which must be a positive integer.
    pub fn rescale_to(&self, m: u32, target_width: &Rational) -> Result<Self> {
        let factor = Rational::from(m) * target_width.clone() / self.width.clone();
        if *factor.denom() != 1 || factor <= 0 {
            return Err(Error::InconsistentWidth(fmt_rational(&factor)));
        }
        let f = factor.numer().to_i64().expect("small factor");
        if f == 1 {
            let mut s = self.clone();
            s.width = target_width.clone();
            return Ok(s);
        }
        let lead = self.lead * f;
        let order = self.order() * f;
        let mut coeffs = vec![C::zero_in(self.domain); (order - lead) as usize];
        for (n, c) in self.terms() {
            coeffs[(n * f - lead) as usize] = c.clone();
        }
        Ok(Self::new(target_width.clone(), lead, coeffs, self.domain))
    }

    /// q d/dq, i.e. (h / 2 pi i) d/dz.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(n, c)| c.mul(&C::from_rational(&Rational::from(n), self.domain)))
            .collect();
        Self::new(self.width.clone(), self.lead, coeffs, self.domain)
    }

    /// Exact agreement of all coefficients below `order`.
    pub fn agrees_to(&self, o: &Self, order: i64) -> bool
    where
        C: PartialEq,
    {
        if self.width != o.width || order > self.order() || order > o.order() {
            return false;
        }
        let lo = self.lead.min(o.lead);
        (lo..order).all(|n| self.coeff(n) == o.coeff(n))
    }

    pub fn to_complex(&self, prec: u32) -> QSeries<BigComplex> {
        QSeries {
            width: self.width.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.to_complex::<BigFloat>(prec)).collect(),
            domain: Domain::Complex(prec),
        }
    }
}

impl ExactSeries {
    pub fn exact(width: Rational, lead: i64, coeffs: Vec<Rational>) -> Self {
        Self::new(width, lead, coeffs, Domain::Exact)
    }
    /// Integer-coefficient convenience constructor with width 1.
    pub fn from_ints(lead: i64, coeffs: &[i64]) -> Self {
        Self::exact(Rational::from(1), lead, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }
    pub fn scale_q(&self, s: &Rational) -> Self {
        self.scale(s)
    }
    /// Stable text form: one `exponent<TAB>num/den` line per coefficient.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.terms() {
            out.push_str(&format!("{}\t{}/{}\n", n, c.numer(), c.denom()));
        }
        out
    }
}

impl<C: Coeff + PartialEq> PartialEq for QSeries<C> {
    fn eq(&self, o: &Self) -> bool {
        self.width == o.width && self.lead == o.lead && self.coeffs == o.coeffs
    }
}

impl fmt::Display for ExactSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", fmt_rational(c))?,
                1 => write!(f, "({})q", fmt_rational(c))?,
                _ => write!(f, "({})q^{}", fmt_rational(c), n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(lead: i64, c: &[i64]) -> ExactSeries {
        ExactSeries::from_ints(lead, c)
    }

    #[test]
    fn add_cancels_leading() {
        let f = s(-1, &[1, -24, 0, 0]);
        let g = s(0, &[24, 0, 0]);
        let h = f.add(&g).unwrap();
        assert_eq!(h.lead(), -1);
        assert_eq!(h.coeff(0).unwrap(), 0);
        let z = ExactSeries::zero(Rational::from(1), 10, Domain::Exact);
        assert_eq!(f.add(&z).unwrap(), f);
        let a = s(0, &[1, 240]).add(&s(0, &[1, -24])).unwrap();
        assert_eq!(a, s(0, &[2, 216]));
    }

    #[test]
    fn width_mismatch_is_error() {
        let f = s(0, &[1, 1]);
        let g = ExactSeries::exact(Rational::from(2), 0, vec![Rational::from(1)]);
        assert!(matches!(f.add(&g), Err(Error::WidthMismatch(..))));
    }

    #[test]
    fn precision_mismatch_is_domain_error() {
        let f = s(0, &[1, 1]).to_complex(64);
        let g = s(0, &[1, 1]).to_complex(128);
        assert!(matches!(f.add(&g), Err(Error::DomainMismatch(..))));
    }

    #[test]
    fn mul_and_reciprocal() {
        let qi = s(-1, &[1, 0, 0, 0]);
        let q = s(1, &[1, 0, 0, 0]);
        let one = qi.mul(&q).unwrap();
        assert_eq!(one.lead(), 0);
        assert_eq!(one.coeff(0).unwrap(), 1);
        let g = s(0, &[1, -1, 0, 0, 0, 0]).reciprocal().unwrap();
        assert_eq!(g, s(0, &[1, 1, 1, 1, 1, 1]));
        let p = s(0, &[1, 1, 0, 0]).pow_int(2).unwrap();
        assert_eq!(p, s(0, &[1, 2, 1, 0]));
        assert!(matches!(
            ExactSeries::zero(Rational::from(1), 4, Domain::Exact).reciprocal(),
            Err(Error::ZeroLeading)
        ));
    }

    #[test]
    fn shift_and_rescale() {
        let f = s(-1, &[1, -24, 276]);
        assert_eq!(f.half_period_shift(), s(-1, &[-1, -24, -276]));
        assert_eq!(f.half_period_shift().half_period_shift(), f);
        assert_eq!(s(0, &[1, 1]).rescale(3), s(0, &[1, 0, 0, 1, 0, 0]));
        assert_eq!(s(-1, &[1]).rescale(2), s(-2, &[1, 0]));
        let g = s(0, &[1, 1]);
        assert!(g.rescale_to(1, &Rational::from((1, 2))).is_err());
        assert_eq!(g.rescale_to(1, &Rational::from(3)).unwrap().coeff(3).unwrap(), 1);
    }

    #[test]
    fn trunc_order_bookkeeping() {
        let f = s(0, &[1, 2, 3, 4, 5]);
        let g = s(0, &[1, 1, 1]);
        let h = f.mul(&g).unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(h.trunc_order(), 2);
    }
}
