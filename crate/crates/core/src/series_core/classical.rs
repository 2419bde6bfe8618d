use super::{Domain, ExactSeries};
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::sync::Mutex;

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Even-index Bernoulli number B_{2k} (B_2 = 1/6, B_4 = -1/30, ...).
/// Computed from tangent numbers, cached.
pub fn bernoulli(two_k: u32) -> Rational {
    assert!(two_k >= 2 && two_k % 2 == 0);
    let k = (two_k / 2) as usize;
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.len() < k {
        let n = k.max(2 * cache.len()).max(32);
        let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
        t[1] = Integer::from(1);
        for j in 2..=n {
            t[j] = Integer::from(&t[j - 1] * (j as u64 - 1));
        }
        for i in 2..=n {
            for j in i..=n {
                let a = Integer::from(&t[j - 1] * (j - i) as u64);
                let b = Integer::from(&t[j] * (j - i + 2) as u64);
                t[j] = a + b;
            }
        }
        let mut out = Vec::with_capacity(n);
        for (i, ti) in t.iter().enumerate().skip(1) {
            let p = Integer::from(1) << (2 * i as u32);
            let den = Integer::from(&p * (p.clone() - 1u32));
            let mut num = Integer::from(ti * (2 * i as u64));
            if i % 2 == 0 {
                num = -num;
            }
            out.push(Rational::from((num, den)));
        }
        *cache = out;
    }
    cache[k - 1].clone()
}

/// sigma_s(n) for n in 0..=m (entry 0 is 0).
pub fn sigma_table(s: u32, m: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); m + 1];
    for d in 1..=m {
        let p = Integer::from(d as u64).pow(s);
        let mut j = d;
        while j <= m {
            out[j] += &p;
            j += d;
        }
    }
    out
}

fn check_weight(w: u32) -> Result<()> {
    if w < 4 || w % 2 == 1 {
        Err(Error::BadWeight(w as i64))
    } else {
        Ok(())
    }
}

/// Level-one Eisenstein series of weight `w` with coefficients at 0..=m.
pub fn eisenstein_level1(w: u32, m: usize) -> Result<ExactSeries> {
    check_weight(w)?;
    let k = w / 2;
    let factor = -Rational::from(4 * k) / bernoulli(w);
    let sig = sigma_table(w - 1, m);
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(Rational::from(1));
    for s in sig.into_iter().skip(1) {
        coeffs.push(Rational::from(&factor * Rational::from(s)));
    }
    Ok(ExactSeries::exact(Rational::from(1), 0, coeffs))
}

/// The quasimodular E_2 = 1 - 24 sum sigma_1(n) q^n.
pub fn e2_series(m: usize) -> ExactSeries {
    let sig = sigma_table(1, m);
    let coeffs = sig
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { Rational::from(1) } else { Rational::from(s * -24) })
        .collect();
    ExactSeries::exact(Rational::from(1), 0, coeffs)
}

fn pentagonal(m: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); m + 1];
    let mut k: usize = 0;
    loop {
        let e1 = if k == 0 { 0 } else { k * (3 * k - 1) / 2 };
        if e1 > m {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out[e1] = Integer::from(sign);
        let e2 = k * (3 * k + 1) / 2;
        if k > 0 && e2 <= m {
            out[e2] = Integer::from(sign);
        }
        k += 1;
    }
    out
}

/// prod_{n>=1} (1 - q^n) with coefficients at 0..=m.
pub fn eta_expansion(m: usize) -> ExactSeries {
    let c = pentagonal(m).into_iter().map(Rational::from).collect();
    ExactSeries::exact(Rational::from(1), 0, c)
}

/// Power f^r of an integer series with f[0] = 1 (Miller's recurrence).
fn int_series_pow(f: &[Integer], r: i64, len: usize) -> Vec<Integer> {
    let mut g = vec![Integer::new(); len];
    g[0] = Integer::from(1);
    let nz: Vec<usize> = (1..f.len().min(len)).filter(|&k| f[k] != 0).collect();
    for n in 1..len {
        let mut s = Integer::new();
        for &k in &nz {
            if k > n {
                break;
            }
            let w = (r + 1) * k as i64 - n as i64;
            if w != 0 {
                s += Integer::from(&f[k] * &g[n - k]) * w;
            }
        }
        g[n] = s / n as u64;
    }
    g
}

fn int_series_mul(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if *y != 0 {
                out[i + j] += Integer::from(x * y);
            }
        }
    }
    out
}

/// prod_d eta(d z)^{r_d}, with the q^{sum d r / 24} prefactor folded into the
/// lead exponent. Coefficients are returned at `lead ..= lead + m`.
pub fn eta_quotient(recipe: &[(u32, i32)], m: usize) -> Result<ExactSeries> {
    let total: i64 = recipe.iter().map(|&(d, r)| d as i64 * r as i64).sum();
    if total % 24 != 0 {
        return Err(Error::FractionalEta(total));
    }
    let len = m + 1;
    let mut acc = vec![Integer::new(); len];
    acc[0] = Integer::from(1);
    for &(d, r) in recipe {
        assert!(d > 0, "eta divisor must be positive");
        if r == 0 {
            continue;
        }
        let base = pentagonal(len);
        let mut f = vec![Integer::new(); len];
        for (n, c) in base.into_iter().enumerate() {
            let e = n * d as usize;
            if e < len {
                f[e] = c;
            }
        }
        let p = int_series_pow(&f, r as i64, len);
        acc = int_series_mul(&acc, &p, len);
    }
    let coeffs = acc.into_iter().map(Rational::from).collect();
    Ok(ExactSeries::new(Rational::from(1), total / 24, coeffs, Domain::Exact))
}

/// Delta = eta^24 = q - 24 q^2 + ...
pub fn delta(m: usize) -> ExactSeries {
    eta_quotient(&[(1, 24)], m).expect("integral")
}

/// Klein's J = E4^3 / Delta - 744, coefficients at -1 ..= m.
pub fn klein_j(m: usize) -> ExactSeries {
    let e4 = eisenstein_level1(4, m + 2).expect("weight 4");
    let num = e4.pow_int(3).expect("pow");
    let d = delta(m + 2);
    let j = num.mul(&d.reciprocal().expect("unit")).expect("same width");
    let c = ExactSeries::constant(Rational::from(744), Rational::from(1), j.order());
    j.sub(&c).expect("same width").truncate(m as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &ExactSeries, n: usize) -> Vec<i64> {
        s.coeffs().iter().take(n).map(|c| c.numer().to_i64().unwrap()).collect()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(6), Rational::from((1, 42)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(40), Rational::from((Integer::from(-261082718496449122051i128), 13530)));
    }

    #[test]
    fn pentagonal_start() {
        let e = eta_expansion(12);
        assert_eq!(ints(&e, 13), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]);
    }

    #[test]
    fn miller_power_matches_multiplication() {
        let f: Vec<Integer> = pentagonal(30);
        let p3 = int_series_pow(&f, 3, 31);
        let direct = int_series_mul(&int_series_mul(&f, &f, 31), &f, 31);
        assert_eq!(p3, direct);
        let inv = int_series_pow(&f, -1, 31);
        let one = int_series_mul(&inv, &f, 31);
        assert_eq!(one[0], 1);
        assert!(one[1..].iter().all(|c| *c == 0));
    }

    #[test]
    fn klein_j_start() {
        let j = klein_j(3);
        assert_eq!(j.lead(), -1);
        assert_eq!(ints(&j, 5), vec![1, 0, 196884, 21493760, 864299970]);
    }
}
