//! Divisor polynomials assembled from located zeros, and the polynomial
//! forms of the half-period and rescaling identities.

use crate::error::{Error, Result};
use crate::modular_forms::{build_hauptmodul, Evaluable, HauptEval};
use crate::numeric::{big_to_prec, BigComplex, BigFloat, Complex, Real};
use crate::group_registry::get_group;
use crate::zero_locator::{Convention, Root, ZeroReport};

#[derive(Clone, Debug)]
pub struct DivisorPolynomial {
    pub group: String,
    pub weight: u32,
    pub convention: Convention,
    pub roots: Vec<Root>,
    /// Monic, lowest degree first.
    pub coeffs: Vec<BigComplex>,
    pub precision: u32,
}

impl DivisorPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigComplex) -> BigComplex {
        let mut acc = Complex::zero(self.precision);
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Coefficients highest degree first.
    pub fn descending(&self) -> Vec<BigComplex> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Largest |Im| over the coefficients, relative to max(1, |c|).
    pub fn max_relative_imag(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.im.to_f64().abs() / c.abs().to_f64().max(1.0))
            .fold(0.0, f64::max)
    }
}

/// prod (X - r)^m, lowest degree first.
pub fn expand_roots(roots: &[(BigComplex, i64)], prec: u32) -> Vec<BigComplex> {
    let mut c = vec![Complex::one(prec)];
    for (r, m) in roots {
        let r = big_to_prec(r, prec);
        for _ in 0..*m {
            let mut next = vec![Complex::zero(prec); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + ci.clone();
                next[i] = next[i].clone() - ci.clone() * r.clone();
            }
            c = next;
        }
    }
    c
}

pub fn from_zeros(report: &ZeroReport, conv: Convention) -> DivisorPolynomial {
    let prec = 2 * report.precision;
    let roots = report.roots(conv);
    let pairs: Vec<(BigComplex, i64)> = roots.iter().map(|r| (r.j.clone(), r.multiplicity)).collect();
    DivisorPolynomial {
        group: report.group.clone(),
        weight: report.weight,
        convention: conv,
        coeffs: expand_roots(&pairs, prec),
        roots,
        precision: prec,
    }
}

/// All roots, with repetition, by Aberth iteration.
pub fn extract_roots(p: &DivisorPolynomial) -> Vec<BigComplex> {
    let d = p.degree();
    if d == 0 {
        return Vec::new();
    }
    let prec = p.precision;
    let deriv: Vec<BigComplex> =
        (1..=d).map(|i| p.coeffs[i].scale(&BigFloat::from_f64_prec(i as f64, prec))).collect();
    let dp = |x: &BigComplex| {
        let mut acc = Complex::zero(prec);
        for c in deriv.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    };
    // Cauchy bound for the starting circle
    let bound = 1.0 + p.coeffs[..d].iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max);
    let mut z: Vec<BigComplex> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64;
            Complex::from_f64(bound * 0.5 * t.cos(), bound * 0.5 * t.sin(), prec)
        })
        .collect();
    let tiny = 2f64.powi(-(prec as i32) * 3 / 4);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let ratio = p.eval(&z[i]) / dp(&z[i]);
            let mut s = Complex::zero(prec);
            for (k, zk) in z.iter().enumerate() {
                if k != i {
                    s = s + (z[i].clone() - zk.clone()).recip();
                }
            }
            let w = ratio.clone() / (Complex::one(prec) - ratio * s);
            if !w.is_finite() {
                continue;
            }
            moved = moved.max(w.abs().to_f64() / z[i].abs().to_f64().max(1.0));
            z[i] = z[i].clone() - w;
        }
        if moved < tiny {
            break;
        }
    }
    z
}

/// Whether `pc` equals (-1)^d p(-X) coefficientwise within `tol`, relative
/// to max(1, |coefficient|).
pub fn conjugation_identity_check(p: &DivisorPolynomial, pc: &DivisorPolynomial, tol: f64) -> Result<bool> {
    if p.degree() != pc.degree() {
        return Err(Error::DegreeMismatch(p.degree(), pc.degree()));
    }
    let d = p.degree();
    for i in 0..=d {
        let flipped = if (d + i) % 2 == 0 { p.coeffs[i].clone() } else { -p.coeffs[i].clone() };
        let other = big_to_prec(&pc.coeffs[i], p.precision);
        let scale = flipped.abs().to_f64().max(other.abs().to_f64()).max(1.0);
        if (flipped - other).abs().to_f64() > tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (j, multiplicity) pairs with duplicate j-values folded together.
fn fold_by_j(items: Vec<(BigComplex, i64)>, tol: f64) -> Vec<(Complex<f64>, i64)> {
    let mut out: Vec<(Complex<f64>, i64)> = Vec::new();
    for (j, m) in items {
        let jf = j.to_f64();
        if !out.iter().any(|(k, _)| (k.clone() - jf.clone()).abs() <= tol * jf.abs().max(1.0)) {
            out.push((jf, m));
        }
    }
    out
}

/// Whether the zeros in `big` are exactly the images z = (w + t h) / m,
/// 0 <= t < m, of the zeros w in `small`, compared through the big group's
/// hauptmodul.
pub fn rescale_identity_check(big: &ZeroReport, small: &ZeroReport, m: u32, tol: f64) -> Result<bool> {
    if big.weight != small.weight {
        return Err(Error::UnrelatedGroups(big.group.clone(), small.group.clone()));
    }
    let gb = get_group(&big.group)?;
    let gs = get_group(&small.group)?;
    if m != 1 && gb.rescale_of.as_ref().is_none_or(|r| r.base != gs.name || r.factor != m) {
        return Err(Error::UnrelatedGroups(big.group.clone(), small.group.clone()));
    }
    let prec = big.precision;
    let jev = HauptEval::<BigFloat>::new(&build_hauptmodul(&gb, 24)?, prec);
    let mf = BigFloat::from_f64_prec(m as f64, prec);
    let hs = BigFloat::from_rational(&gs.width, prec);
    let mut images = Vec::new();
    for z in &small.zeros {
        let w = big_to_prec(&z.z, prec);
        for t in 0..m {
            let shifted = w.add_real(&(hs.clone() * BigFloat::from_f64_prec(t as f64, prec)));
            let img = Complex::new(shifted.re / mf.clone(), shifted.im / mf.clone());
            images.push((jev.eval(&img).0, z.multiplicity));
        }
    }
    let lhs = fold_by_j(images, tol);
    let rhs = fold_by_j(big.zeros.iter().map(|z| (z.j.clone(), z.multiplicity)).collect(), tol);
    if lhs.len() != rhs.len() {
        return Err(Error::CardinalityMismatch(lhs.len(), rhs.len()));
    }
    let mut used = vec![false; rhs.len()];
    for (j, mult) in &lhs {
        let hit = rhs.iter().enumerate().position(|(i, (k, n))| {
            !used[i] && n == mult && (k.clone() - j.clone()).abs() <= tol * j.abs().max(1.0)
        });
        match hit {
            Some(i) => used[i] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(roots: &[(f64, f64, i64)], prec: u32) -> DivisorPolynomial {
        let pairs: Vec<(BigComplex, i64)> =
            roots.iter().map(|&(a, b, m)| (Complex::from_f64(a, b, prec), m)).collect();
        DivisorPolynomial {
            group: "test".into(),
            weight: 4,
            convention: Convention::WINDING,
            roots: Vec::new(),
            coeffs: expand_roots(&pairs, prec),
            precision: prec,
        }
    }

    #[test]
    fn empty_is_one() {
        let p = poly(&[], 128);
        assert_eq!(p.degree(), 0);
        assert_eq!(p.coeffs[0].re.to_f64(), 1.0);
    }

    #[test]
    fn expansion_matches_vieta() {
        let p = poly(&[(2.0, 0.0, 1), (-3.0, 0.0, 2)], 128);
        let c: Vec<f64> = p.coeffs.iter().map(|c| c.re.to_f64()).collect();
        // (X - 2)(X + 3)^2 = X^3 + 4X^2 - 3X - 18
        assert_eq!(c, vec![-18.0, -3.0, 4.0, 1.0]);
    }

    #[test]
    fn aberth_round_trip() {
        let rs = [(-744.0, 0.0, 1), (120.5, 0.0, 1), (900.25, 0.0, 1), (3.0, 4.0, 1)];
        let p = poly(&rs, 256);
        let mut got: Vec<(f64, f64)> = extract_roots(&p).iter().map(|z| (z.re.to_f64(), z.im.to_f64())).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<(f64, f64)> = rs.iter().map(|&(a, b, _)| (a, b)).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g.0 - w.0).abs() < 1e-8 && (g.1 - w.1).abs() < 1e-8, "{g:?} {w:?}");
        }
    }

    #[test]
    fn conjugation_sign_algebra() {
        let x = poly(&[(0.0, 0.0, 1)], 128);
        assert!(conjugation_identity_check(&x, &x, 1e-8).unwrap());
        let p = poly(&[(5.0, 0.0, 1), (-2.0, 0.0, 1)], 128);
        let q = poly(&[(-5.0, 0.0, 1), (2.0, 0.0, 1)], 128);
        assert!(conjugation_identity_check(&p, &q, 1e-8).unwrap());
        assert!(conjugation_identity_check(&q, &p, 1e-8).unwrap());
        let off = poly(&[(-5.0 + 1e-6, 0.0, 1), (2.0, 0.0, 1)], 128);
        assert!(!conjugation_identity_check(&p, &off, 1e-8).unwrap());
        let cubic = poly(&[(1.0, 0.0, 3)], 128);
        assert!(matches!(conjugation_identity_check(&p, &cubic, 1e-8), Err(Error::DegreeMismatch(2, 3))));
    }
}
