//! Floating point backends.
//!
//! Everything numeric in the crate is written against [`Real`], which has two
//! implementations: plain `f64` for fast screening and [`BigFloat`], a thin
//! wrapper over an MPFR float with a fixed mantissa width.

use rug::float::Constant;
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn precision(&self) -> u32;
    fn from_f64_prec(x: f64, prec: u32) -> Self;
    fn from_rational(q: &Rational, prec: u32) -> Self;
    fn from_integer(n: &Integer, prec: u32) -> Self;
    fn to_f64(&self) -> f64;
    fn pi(prec: u32) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// The same value rounded to `prec` bits.
    fn to_prec(&self, prec: u32) -> Self;
    /// log2 |x| to within one, without overflow for very large or small x.
    fn log2_abs(&self) -> f64;

    fn lift(&self, x: f64) -> Self {
        Self::from_f64_prec(x, self.precision())
    }
    fn lift_q(&self, q: &Rational) -> Self {
        Self::from_rational(q, self.precision())
    }
    fn zero_like(&self) -> Self {
        self.lift(0.0)
    }
    fn one_like(&self) -> Self {
        self.lift(1.0)
    }
    fn pi_like(&self) -> Self {
        Self::pi(self.precision())
    }
    fn is_negative(&self) -> bool {
        *self < self.zero_like()
    }
    fn sq(&self) -> Self {
        self.clone() * self.clone()
    }
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn precision(&self) -> u32 {
        53
    }
    fn from_f64_prec(x: f64, _prec: u32) -> Self {
        x
    }
    fn from_rational(q: &Rational, _prec: u32) -> Self {
        q.to_f64()
    }
    fn from_integer(n: &Integer, _prec: u32) -> Self {
        n.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pi(_prec: u32) -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_prec(&self, _prec: u32) -> Self {
        *self
    }
    fn log2_abs(&self) -> f64 {
        self.abs().log2()
    }
}

/// MPFR float with a fixed precision. Binary operations round to the
/// precision of the left operand.
#[derive(Clone)]
pub struct BigFloat(pub Float);

impl BigFloat {
    pub fn new(prec: u32, x: f64) -> Self {
        BigFloat(Float::with_val(prec, x))
    }
    pub fn inner(&self) -> &Float {
        &self.0
    }
    /// Decimal rendering with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        format_sci(&self.0, digits)
    }
}

pub(crate) fn format_sci(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    // rug prints e.g. "1.2340000e2"; normalise the exponent marker
    s.replace('@', "e")
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat($tr::$m(self.0, rhs.0))
            }
        }
    };
}
big_binop!(Add, add);
big_binop!(Sub, sub);
big_binop!(Mul, mul);
big_binop!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Real for BigFloat {
    fn precision(&self) -> u32 {
        self.0.prec()
    }
    fn from_f64_prec(x: f64, prec: u32) -> Self {
        BigFloat(Float::with_val(prec, x))
    }
    fn from_rational(q: &Rational, prec: u32) -> Self {
        BigFloat(Float::with_val(prec, q))
    }
    fn from_integer(n: &Integer, prec: u32) -> Self {
        BigFloat(Float::with_val(prec, n))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn pi(prec: u32) -> Self {
        BigFloat(Float::with_val(prec, Constant::Pi))
    }
    fn sqrt(&self) -> Self {
        BigFloat(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        BigFloat(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        BigFloat(self.0.clone().ln())
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.0.prec()));
        (BigFloat(s), BigFloat(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        BigFloat(self.0.clone().atan2(&x.0))
    }
    fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }
    fn floor(&self) -> Self {
        BigFloat(self.0.clone().floor())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn to_prec(&self, prec: u32) -> Self {
        BigFloat(Float::with_val(prec, &self.0))
    }
    fn log2_abs(&self) -> f64 {
        match self.0.get_exp() {
            Some(e) => e as f64,
            None if self.0.is_zero() => f64::NEG_INFINITY,
            None => f64::INFINITY,
        }
    }
}

/// Complex number over a [`Real`] backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

pub type BigComplex = Complex<BigFloat>;

impl<T: Real> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }
    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(T::from_f64_prec(re, prec), T::from_f64_prec(im, prec))
    }
    pub fn from_real(re: T) -> Self {
        let im = re.zero_like();
        Complex { re, im }
    }
    pub fn zero(prec: u32) -> Self {
        Self::from_f64(0.0, 0.0, prec)
    }
    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }
    pub fn i(prec: u32) -> Self {
        Self::from_f64(0.0, 1.0, prec)
    }
    pub fn precision(&self) -> u32 {
        self.re.precision()
    }
    pub fn zero_like(&self) -> Self {
        Self::zero(self.precision())
    }
    pub fn one_like(&self) -> Self {
        Self::one(self.precision())
    }
    pub fn lift(&self, re: f64, im: f64) -> Self {
        Self::from_f64(re, im, self.precision())
    }
    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm_sqr(&self) -> T {
        self.re.sq() + self.im.sq()
    }
    pub fn abs(&self) -> T {
        // scaled to avoid overflow in f64 for large moduli
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == big.zero_like() {
            return big;
        }
        let r = small / big.clone();
        big * (r.one_like() + r.sq()).sqrt()
    }
    pub fn arg(&self) -> T {
        self.im.atan2(&self.re)
    }
    pub fn scale(&self, s: &T) -> Self {
        Complex::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }
    pub fn scale_f64(&self, s: f64) -> Self {
        let s = self.re.lift(s);
        self.scale(&s)
    }
    pub fn add_real(&self, s: &T) -> Self {
        Complex::new(self.re.clone() + s.clone(), self.im.clone())
    }
    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(self.re.clone() / n.clone(), -self.im.clone() / n)
    }
    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(m.clone() * c, m * s)
    }
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }
    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        let zero = r.zero_like();
        if r == zero {
            return self.zero_like();
        }
        let half = r.lift(0.5);
        let a = ((r.clone() + self.re.clone()) * half.clone()).sqrt();
        let b = ((r - self.re.clone()) * half).sqrt();
        if self.im.is_negative() {
            Complex::new(a, -b)
        } else {
            Complex::new(a, b)
        }
    }
    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return self.recip().powi(-e);
        }
        let mut base = self.clone();
        let mut acc = self.one_like();
        let mut n = e as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
    pub fn to_f64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }
    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: Real> Add for Complex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Real> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Real> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Complex::new(re, im)
    }
}

impl<T: Real> Div for Complex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm_sqr();
        let re = self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone();
        let im = self.im * rhs.re - self.re * rhs.im;
        Complex::new(re / n.clone(), im / n)
    }
}

impl<T: Real> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

/// Change precision of a complex value (f64 -> big or big -> big).
pub fn convert<S: Real, T: Real>(z: &Complex<S>, prec: u32) -> Complex<T> {
    Complex::new(
        T::from_f64_prec(z.re.to_f64(), prec),
        T::from_f64_prec(z.im.to_f64(), prec),
    )
}

pub fn big_to_prec(z: &BigComplex, prec: u32) -> BigComplex {
    Complex::new(
        BigFloat(Float::with_val(prec, &z.re.0)),
        BigFloat(Float::with_val(prec, &z.im.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_branch() {
        let z = Complex::<f64>::new(-4.0, -0.0);
        let r = z.sqrt();
        assert!((r.re).abs() < 1e-15);
        assert!((r.im.abs() - 2.0).abs() < 1e-15);
        let w = Complex::<BigFloat>::from_f64(3.0, 4.0, 128).sqrt();
        assert!((w.re.to_f64() - 2.0).abs() < 1e-30);
        assert!((w.im.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let z = Complex::<f64>::new(0.3, -1.1);
        let mut acc = Complex::one(53);
        for _ in 0..7 {
            acc = acc * z.clone();
        }
        let p = z.powi(7);
        assert!((p - acc).abs() < 1e-12);
        let inv = z.powi(-3) * z.powi(3);
        assert!((inv.re - 1.0).abs() < 1e-14 && inv.im.abs() < 1e-14);
    }

    #[test]
    fn big_pi_digits() {
        let p = BigFloat::pi(200);
        assert_eq!(&p.to_sci(30)[..12], "3.1415926535");
    }
}
