//! Exact helpers: quadratic surds, 2x2 matrices over them, cyclotomic
//! elements and small integer utilities.

use crate::numeric::{Complex, Real};
use rug::{Integer, Rational};
use std::fmt;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    if g != 1 {
        None
    } else {
        Some(x.rem_euclid(m))
    }
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Parse "p/q", "p" or "-p/q".
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: Integer = a.trim().parse().ok()?;
            let b: Integer = b.trim().parse().ok()?;
            if b == 0 {
                None
            } else {
                Some(Rational::from((a, b)))
            }
        }
        None => s.parse::<Integer>().ok().map(Rational::from),
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// a + b*sqrt(d) with rational a, b and squarefree-ish positive integer d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub d: u32,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::new(), d: 1 }
    }
    pub fn int(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }
    pub fn new(a: Rational, b: Rational, d: u32) -> Self {
        let mut s = Surd { a, b, d };
        s.normalize();
        s
    }
    fn normalize(&mut self) {
        if self.d == 1 {
            let b = std::mem::take(&mut self.b);
            self.a += b;
        }
        if self.b == 0 {
            self.d = 1;
        }
    }
    pub fn is_rational(&self) -> bool {
        self.b == 0
    }
    fn radicand(&self, other: &Surd) -> Option<u32> {
        match (self.b == 0, other.b == 0) {
            (true, true) => Some(1),
            (true, false) => Some(other.d),
            (false, true) => Some(self.d),
            (false, false) if self.d == other.d => Some(self.d),
            _ => None,
        }
    }
    pub fn add(&self, o: &Surd) -> Option<Surd> {
        let d = self.radicand(o)?;
        Some(Surd::new(
            Rational::from(&self.a + &o.a),
            Rational::from(&self.b + &o.b),
            d,
        ))
    }
    pub fn neg(&self) -> Surd {
        Surd::new(-self.a.clone(), -self.b.clone(), self.d)
    }
    pub fn sub(&self, o: &Surd) -> Option<Surd> {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Surd) -> Option<Surd> {
        let d = self.radicand(o)?;
        let a = Rational::from(&self.a * &o.a) + Rational::from(&self.b * &o.b) * Rational::from(d);
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        Some(Surd::new(a, b, d))
    }
    pub fn to_real<T: Real>(&self, prec: u32) -> T {
        let a = T::from_rational(&self.a, prec);
        if self.b == 0 {
            return a;
        }
        let root = T::from_f64_prec(self.d as f64, prec).sqrt();
        a + T::from_rational(&self.b, prec) * root
    }
    pub fn to_f64(&self) -> f64 {
        self.to_real::<f64>(53)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", fmt_rational(&self.a))
        } else if self.a == 0 {
            write!(f, "{}*sqrt({})", fmt_rational(&self.b), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", fmt_rational(&self.a), fmt_rational(&self.b), self.d)
        }
    }
}

/// 2x2 matrix [[a, b], [c, d]] with surd entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Surd,
    pub b: Surd,
    pub c: Surd,
    pub d: Surd,
}

impl Mat2 {
    pub fn int(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a: Surd::int(a), b: Surd::int(b), c: Surd::int(c), d: Surd::int(d) }
    }
    pub fn identity() -> Self {
        Self::int(1, 0, 0, 1)
    }
    pub fn translation(t: &Rational) -> Self {
        Mat2 {
            a: Surd::int(1),
            b: Surd::rational(t.clone()),
            c: Surd::int(0),
            d: Surd::int(1),
        }
    }
    pub fn det(&self) -> Option<Surd> {
        self.a.mul(&self.d)?.sub(&self.b.mul(&self.c)?)
    }
    pub fn mul(&self, o: &Mat2) -> Option<Mat2> {
        Some(Mat2 {
            a: self.a.mul(&o.a)?.add(&self.b.mul(&o.c)?)?,
            b: self.a.mul(&o.b)?.add(&self.b.mul(&o.d)?)?,
            c: self.c.mul(&o.a)?.add(&self.d.mul(&o.c)?)?,
            d: self.c.mul(&o.b)?.add(&self.d.mul(&o.d)?)?,
        })
    }
    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> Mat2 {
        Mat2 { a: self.d.clone(), b: self.b.neg(), c: self.c.neg(), d: self.a.clone() }
    }
    /// Conjugate by the translation z -> z + t: returns T^{-1} M T.
    pub fn conjugate_translate(&self, t: &Rational) -> Option<Mat2> {
        let tm = Mat2::translation(t);
        let ti = Mat2::translation(&Rational::from(-t));
        ti.mul(self)?.mul(&tm)
    }
    pub fn entries_f64(&self) -> [f64; 4] {
        [self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.d.to_f64()]
    }
    pub fn entries<T: Real>(&self, prec: u32) -> [T; 4] {
        [
            self.a.to_real(prec),
            self.b.to_real(prec),
            self.c.to_real(prec),
            self.d.to_real(prec),
        ]
    }
    /// Moebius action.
    pub fn act<T: Real>(&self, z: &Complex<T>) -> Complex<T> {
        let [a, b, c, d] = self.entries::<T>(z.precision());
        let num = z.scale(&a).add_real(&b);
        let den = z.scale(&c).add_real(&d);
        num / den
    }
    /// Automorphy factor c z + d.
    pub fn cocycle<T: Real>(&self, z: &Complex<T>) -> Complex<T> {
        let [_, _, c, d] = self.entries::<T>(z.precision());
        z.scale(&c).add_real(&d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Integer polynomial coefficients, lowest degree first.
fn poly_div_exact(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let mut rem: Vec<Integer> = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    let mut quo = vec![Integer::new(); rem.len().saturating_sub(dn)];
    for i in (0..quo.len()).rev() {
        let q = Integer::from(&rem[i + dn] / &lead);
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= Integer::from(&q * dj);
        }
        quo[i] = q;
    }
    quo
}

/// Cyclotomic polynomial Phi_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<Integer> {
    let mut num = vec![Integer::new(); n as usize + 1];
    num[0] = Integer::from(-1);
    num[n as usize] = Integer::from(1);
    let mut p = num;
    for d in divisors(n) {
        if d < n {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

/// Element of Q(zeta_n) written as sum c_j zeta_n^j, j in 0..n.
#[derive(Clone, Debug)]
pub struct Cyclo {
    pub n: u32,
    pub c: Vec<Rational>,
}

impl Cyclo {
    pub fn zero(n: u32) -> Self {
        Cyclo { n, c: vec![Rational::new(); n as usize] }
    }
    /// Add `coef * zeta_n^j`.
    pub fn add_term(&mut self, coef: &Rational, j: i64) {
        let idx = j.rem_euclid(self.n as i64) as usize;
        self.c[idx] += coef;
    }
    pub fn is_zero(&self) -> bool {
        if self.c.iter().all(|x| *x == 0) {
            return true;
        }
        // reduce modulo Phi_n
        let phi = cyclotomic_poly(self.n);
        let deg = phi.len() - 1;
        let mut r = self.c.clone();
        for i in (deg..r.len()).rev() {
            if r[i] == 0 {
                continue;
            }
            let q = r[i].clone();
            for (j, pj) in phi.iter().enumerate() {
                r[i - deg + j] -= Rational::from(&q * pj);
            }
        }
        r.iter().all(|x| *x == 0)
    }
    pub fn to_complex<T: Real>(&self, prec: u32) -> Complex<T> {
        let two_pi = T::pi(prec) * T::from_f64_prec(2.0, prec);
        let mut acc = Complex::<T>::zero(prec);
        for (j, cj) in self.c.iter().enumerate() {
            if *cj == 0 {
                continue;
            }
            let ang = two_pi.clone() * T::from_f64_prec(j as f64 / self.n as f64, prec);
            let (s, c) = ang.sin_cos();
            let v = T::from_rational(cj, prec);
            acc = acc + Complex::new(c * v.clone(), s * v);
        }
        acc
    }
}
