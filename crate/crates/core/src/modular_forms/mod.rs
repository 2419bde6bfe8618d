//! Eisenstein series for the cusp at infinity, canonical hauptmoduls, cusp
//! expansions and their numeric evaluators.

pub mod evaluate;

use crate::error::{Error, Result};
use crate::exact::{divisors, gcd, lcm, mod_inverse, Cyclo, Mat2};
use crate::numeric::{BigComplex, Complex, Real};
use crate::group_registry::{CuspPoint, GroupDescriptor, HauptRecipe};
use crate::series_core::{e2_series, eisenstein_level1, eta_quotient, klein_j, Domain, ExactSeries, QSeries};
use evaluate::{eta_reduced, log_eta_reduced, reduce, LevelOne, E2};
use rug::Rational;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Vanishing order of a form at one cusp class, in the local parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspOrder {
    pub class: String,
    pub width: Rational,
    pub order: i64,
}

#[derive(Clone, Debug)]
pub struct EisensteinForm {
    pub group: String,
    pub weight: u32,
    pub qexp: ExactSeries,
    /// E = sum c_d E_level1(d (z + shift))
    pub combo: Vec<(u32, Rational)>,
    pub shift: Rational,
    pub cusp_orders: Vec<CuspOrder>,
}

impl EisensteinForm {
    pub fn order_at(&self, class: &str) -> Option<i64> {
        self.cusp_orders.iter().find(|c| c.class == class).map(|c| c.order)
    }
}

#[derive(Clone, Debug)]
pub struct Hauptmodul {
    pub group: String,
    pub qexp: ExactSeries,
    /// Constant term of the raw recipe, removed by normalization.
    pub raw_constant: Rational,
    pub recipe: HauptRecipe,
    pub shift: Rational,
    pub negate: bool,
}

fn swap_al(c: i64, e: i64) -> i64 {
    let ce = gcd(c, e);
    (e / ce) * (c / ce)
}

/// Cusp denominators (divisors of N) equivalent to infinity under the
/// adjoined involutions.
fn infinity_class(level: u32, al: &[u32]) -> Vec<i64> {
    let mut set = vec![level as i64];
    let mut i = 0;
    while i < set.len() {
        for &e in al {
            let s = swap_al(set[i], e as i64);
            if !set.contains(&s) {
                set.push(s);
            }
        }
        i += 1;
    }
    set
}

/// Solves A x = b over Q; `None` unless the solution exists and is unique.
fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let rows = a.len();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (r..rows).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Rational::from(1) / a[r][col].clone();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && a[i][col] != 0 {
                let f = a[i][col].clone();
                for j in 0..n {
                    let v = Rational::from(&f * &a[r][j]);
                    a[i][j] -= v;
                }
                let v = Rational::from(&f * &b[r]);
                b[i] -= v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if r < n || b[r..].iter().any(|x| *x != 0) {
        return None;
    }
    Some(b[..n].to_vec())
}

fn rpow(base: &Rational, e: i64) -> Rational {
    let mut out = Rational::from(1);
    let b = if e < 0 { Rational::from(1) / base.clone() } else { base.clone() };
    for _ in 0..e.abs() {
        out *= &b;
    }
    out
}

/// Coefficients c_d (d | N) of the Eisenstein series in the span of E(d z).
pub fn solve_combo(level: u32, al: &[u32], weight: u32) -> Option<Vec<(u32, Rational)>> {
    let k = (weight / 2) as i64;
    let ds = divisors(level);
    let idx = |d: u32| ds.iter().position(|&x| x == d).expect("divisor");
    let inf = infinity_class(level, al);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    rows.push(vec![Rational::from(1); ds.len()]);
    rhs.push(Rational::from(1));
    for &c in &ds {
        if inf.contains(&(c as i64)) {
            continue;
        }
        // constant term of E(d z) at a cusp of denominator c
        rows.push(
            ds.iter()
                .map(|&d| rpow(&Rational::from((gcd(c as i64, d as i64), d as i64)), 2 * k))
                .collect(),
        );
        rhs.push(Rational::new());
    }
    for &e in al {
        for &d in &ds {
            let g = gcd(d as i64, e as i64);
            let ds_ = (d as i64 * e as i64 / (g * g)) as u32;
            if ds_ == d {
                continue;
            }
            // c_{d*} - (d*/d)^k c_d = 0
            let mut row = vec![Rational::new(); ds.len()];
            row[idx(ds_)] += 1;
            row[idx(d)] -= rpow(&Rational::from((ds_ as i64, d as i64)), k);
            rows.push(row);
            rhs.push(Rational::new());
        }
    }
    let x = solve_exact(rows, rhs)?;
    Some(ds.into_iter().zip(x).collect())
}

fn check_weight(weight: u32) -> Result<()> {
    if weight < 4 || weight % 2 == 1 {
        Err(Error::BadWeight(weight as i64))
    } else {
        Ok(())
    }
}

fn shift_is_half(g: &GroupDescriptor) -> Result<bool> {
    if g.shift == 0 {
        Ok(false)
    } else if g.shift == Rational::from(&g.width / 2u32) {
        Ok(true)
    } else {
        Err(Error::Registry(format!("{}: unsupported shift", g.name)))
    }
}

/// Builds E^Gamma with coefficients at exponents 0..=m.
pub fn build_eisenstein(g: &GroupDescriptor, weight: u32, m: usize) -> Result<EisensteinForm> {
    check_weight(weight)?;
    if !g.is_good(weight) {
        return Err(Error::NotGood(g.name.clone(), weight));
    }
    let combo = solve_combo(g.eisenstein.level, &g.eisenstein.atkin_lehner, weight)
        .ok_or_else(|| Error::SingularSystem(g.name.clone(), weight))?;
    let e = eisenstein_level1(weight, m)?;
    let order = m as i64 + 1;
    let mut acc = ExactSeries::zero(g.width.clone(), order, Domain::Exact);
    for (d, c) in &combo {
        if *c == 0 {
            continue;
        }
        let term = e.rescale(*d).truncate(order).scale(c);
        acc = acc.add(&term)?;
    }
    if shift_is_half(g)? {
        acc = acc.half_period_shift();
    }
    let mut form = EisensteinForm {
        group: g.name.clone(),
        weight,
        qexp: acc,
        combo,
        shift: g.shift.clone(),
        cusp_orders: Vec::new(),
    };
    for class in &g.cusp_classes {
        let order = if class.label == "inf" {
            0
        } else {
            let p = g.class_representative(&class.label);
            cusp_expansion(&form, p, 4)?.order
        };
        form.cusp_orders.push(CuspOrder {
            class: class.label.clone(),
            width: class.width.clone(),
            order,
        });
    }
    Ok(form)
}

/// Expansion of a form at a cusp in its local parameter q_w, w the cusp width.
#[derive(Clone, Debug)]
pub struct CuspExpansion {
    pub width: Rational,
    /// (exponent, coefficient) for exponents below `order_bound`, nonzero only.
    pub terms: Vec<(i64, Cyclo)>,
    pub order_bound: i64,
    /// First exponent with a nonzero coefficient.
    pub order: i64,
}

impl CuspExpansion {
    pub fn to_series(&self, prec: u32) -> QSeries<BigComplex> {
        let lead = self.order;
        let len = (self.order_bound - lead).max(1) as usize;
        let mut c = vec![BigComplex::zero(prec); len];
        for (n, v) in &self.terms {
            if *n >= lead && *n < self.order_bound {
                c[(n - lead) as usize] = v.to_complex(prec);
            }
        }
        QSeries::new(self.width.clone(), lead, c, Domain::Complex(prec))
    }

    /// |b_n| for the retained terms, as floats.
    pub fn magnitudes(&self) -> Vec<(i64, f64)> {
        self.terms.iter().map(|(n, c)| (*n, c.to_complex::<f64>(53).abs())).collect()
    }
}

fn integral_matrix(m: &Mat2) -> Option<[i64; 4]> {
    let mut out = [0i64; 4];
    for (slot, s) in out.iter_mut().zip([&m.a, &m.b, &m.c, &m.d]) {
        if !s.is_rational() || *s.a.denom() != 1 {
            return None;
        }
        *slot = s.a.numer().to_i64()?;
    }
    Some(out)
}

/// Exact expansion at the cusp `p`, retaining exponents below `min_terms`
/// beyond the leading one (the bound grows until a nonzero term is seen).
pub fn cusp_expansion(form: &EisensteinForm, p: &CuspPoint, min_terms: i64) -> Result<CuspExpansion> {
    let k = (form.weight / 2) as i64;
    let shift = Mat2::translation(&form.shift);
    let m = shift.mul(&p.scaling).and_then(|x| integral_matrix(&x)).ok_or_else(|| {
        Error::UnknownCusp(format!("{:?} has a non-integral scaling matrix", p.point))
    })?;
    let [_, _, gam, del] = m;
    let w = p.width.clone();
    let mut bound = min_terms.max(1);
    loop {
        let mut nmax = 0i64;
        let mut l = 1i64;
        let mut parts = Vec::new();
        for (d, c) in &form.combo {
            if *c == 0 {
                continue;
            }
            let d = *d as i64;
            let a = gcd(d, gam);
            let dd = d / a;
            let b = if dd == 1 { 0 } else { (del * mod_inverse(gam / a, dd).expect("coprime")).rem_euclid(dd) };
            // exponent of term n: n a w / dd
            let step = Rational::from((a, dd)) * w.clone();
            let n_hi = (Rational::from(bound) / step.clone()).ceil().numer().to_i64().unwrap_or(0);
            nmax = nmax.max(n_hi);
            l = lcm(l, dd);
            parts.push((c.clone() * rpow(&Rational::from(dd), -2 * k), dd, b, step));
        }
        let e = eisenstein_level1(form.weight, nmax as usize)?;
        let mut acc: BTreeMap<Rational, Cyclo> = BTreeMap::new();
        for (coef, dd, b, step) in &parts {
            for (n, an) in e.terms() {
                let ex = Rational::from(n) * step.clone();
                if ex >= bound {
                    break;
                }
                let v = Rational::from(&*coef * an);
                acc.entry(ex).or_insert_with(|| Cyclo::zero(l as u32)).add_term(&v, n * b * (l / dd));
            }
        }
        let mut terms = Vec::new();
        for (ex, c) in acc {
            if c.is_zero() {
                continue;
            }
            if *ex.denom() != 1 {
                return Err(Error::BadRecipe(form.group.clone(), format!("fractional exponent {ex} at cusp")));
            }
            terms.push((ex.numer().to_i64().expect("small"), c));
        }
        if let Some(first) = terms.first() {
            let order = first.0;
            if bound >= order + min_terms {
                return Ok(CuspExpansion { width: w, terms, order_bound: bound, order });
            }
            bound = order + min_terms;
        } else {
            if bound > 4096 {
                return Err(Error::BadRecipe(form.group.clone(), "form vanishes identically at cusp".into()));
            }
            bound *= 2;
        }
    }
}

/// Number of cusp classes in the counting set where the form vanishes to odd order.
pub fn compute_s1(g: &GroupDescriptor, form: &EisensteinForm) -> i64 {
    g.counting_set()
        .iter()
        .filter(|c| form.order_at(&c.label).is_some_and(|o| o % 2 == 1))
        .count() as i64
}

/// Vanishing order at a cusp from values along the vertical approach
/// tau = iY in the local coordinate of the scaling matrix.
pub fn estimate_cusp_order<T: Real>(
    f: &impl Evaluable<T>,
    weight: u32,
    p: &CuspPoint,
    y1: f64,
    y2: f64,
    prec: u32,
) -> f64 {
    let mag = |y: f64| -> f64 {
        let tau = Complex::<T>::from_f64(0.0, y, prec);
        let z = p.scaling.act(&tau);
        let (v, _) = f.eval(&z);
        let j = p.scaling.cocycle(&tau);
        (v / j.powi(weight as i64)).abs().to_f64().ln()
    };
    let w = p.width.to_f64();
    -w * (mag(y1) - mag(y2)) / (2.0 * std::f64::consts::PI * (y1 - y2))
}

/// Raw recipe expansion with coefficients through q^m.
fn raw_hauptmodul(recipe: &HauptRecipe, m: usize) -> Result<ExactSeries> {
    let order = m as i64 + 1;
    let s = match recipe {
        HauptRecipe::KleinJ => {
            let j = klein_j(m);
            j.add(&ExactSeries::constant(Rational::from(744), Rational::from(1), j.order()))?
        }
        HauptRecipe::Eta(f) => eta_quotient(f, m + 2)?,
        HauptRecipe::FrickeE2(n) => {
            let nn = *n;
            let e2 = e2_series(m + 4);
            let num = e2.rescale(nn).truncate(m as i64 + 4).scale(&Rational::from(nn)).sub(&e2)?;
            let num = num.scale(&Rational::from((1, nn as i64 - 1)));
            let den = eta_quotient(&[(1, 2), (nn, 2)], m + 4)?;
            num.mul(&den.reciprocal()?)?
        }
    };
    Ok(s.truncate(order))
}

/// Canonical hauptmodul 1/q + 0 + O(q) with coefficients through q^m.
pub fn build_hauptmodul(g: &GroupDescriptor, m: usize) -> Result<Hauptmodul> {
    let raw = raw_hauptmodul(&g.hauptmodul, m)?;
    if raw.lead() != -1 || raw.coeffs()[0] != 1 {
        return Err(Error::BadRecipe(g.name.clone(), format!("lead exponent {}", raw.lead())));
    }
    let c0 = raw.coeff(0).unwrap_or_default();
    let mut s = raw.sub(&ExactSeries::constant(c0.clone(), Rational::from(1), raw.order()))?;
    s = ExactSeries::exact(g.width.clone(), s.lead(), s.coeffs().to_vec());
    let half = shift_is_half(g)?;
    if half {
        s = s.half_period_shift();
    }
    if g.negate_hauptmodul {
        s = s.neg();
    }
    Ok(Hauptmodul {
        group: g.name.clone(),
        qexp: s,
        raw_constant: c0,
        recipe: g.hauptmodul.clone(),
        shift: g.shift.clone(),
        negate: g.negate_hauptmodul,
    })
}

pub fn conjugate_form(f: &ExactSeries) -> ExactSeries {
    f.half_period_shift()
}

pub fn conjugate_hauptmodul(j: &Hauptmodul, target: &GroupDescriptor) -> Hauptmodul {
    Hauptmodul {
        group: target.name.clone(),
        qexp: j.qexp.half_period_shift().neg(),
        raw_constant: j.raw_constant.clone(),
        recipe: j.recipe.clone(),
        shift: target.shift.clone(),
        negate: !j.negate,
    }
}

/// Value and z-derivative at a point of the upper half-plane.
pub trait Evaluable<T: Real>: Sync {
    fn eval(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>);
}

struct EisLevel<T> {
    terms: Vec<(T, u32)>,
    e: LevelOne<T>,
    shift: T,
}

impl<T: Real> EisLevel<T> {
    fn new(combo: &[(u32, Rational)], weight: u32, shift: &Rational, prec: u32) -> Self {
        EisLevel {
            terms: combo.iter().filter(|(_, c)| *c != 0).map(|(d, c)| (T::from_rational(c, prec), *d)).collect(),
            e: LevelOne::new(weight, prec),
            shift: T::from_rational(shift, prec),
        }
    }

    /// Value, derivative, and log2 of the largest single term.
    fn eval(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>, f64) {
        let prec = z.precision();
        let w = z.add_real(&self.shift);
        let mut v = Complex::zero(prec);
        let mut dv = Complex::zero(prec);
        let mut big = f64::NEG_INFINITY;
        for (c, d) in &self.terms {
            let df = T::from_f64_prec(*d as f64, prec);
            let (e, de) = self.e.eval(&w.scale(&df));
            let term = e.scale(c);
            big = big.max(term.abs().log2_abs());
            v = v + term;
            dv = dv + de.scale(&(c.clone() * df));
        }
        (v, dv, big)
    }
}

/// Numerical E^Gamma. Near the finite cusps the level-one terms cancel
/// heavily; when more than a quarter of the bits are lost the point is
/// re-evaluated at doubled precision, up to eight times the base.
pub struct EisEval<T> {
    combo: Vec<(u32, Rational)>,
    weight: u32,
    shift: Rational,
    prec: u32,
    levels: [OnceLock<EisLevel<T>>; 4],
}

impl<T: Real> EisEval<T> {
    pub fn new(form: &EisensteinForm, prec: u32) -> Self {
        let ev = EisEval {
            combo: form.combo.clone(),
            weight: form.weight,
            shift: form.shift.clone(),
            prec,
            levels: Default::default(),
        };
        ev.level(0);
        ev
    }

    fn level(&self, i: usize) -> &EisLevel<T> {
        self.levels[i].get_or_init(|| EisLevel::new(&self.combo, self.weight, &self.shift, self.prec << i))
    }
}

impl<T: Real + Send + Sync> Evaluable<T> for EisEval<T> {
    fn eval(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let base = z.precision();
        let (v, dv, big) = self.level(0).eval(z);
        if base <= 53 {
            return (v, dv);
        }
        let mut lost = big - v.abs().log2_abs();
        let mut out = (v, dv);
        for i in 1..self.levels.len() {
            if !(lost > base as f64 / 4.0) {
                break;
            }
            let p = self.prec << i;
            let zi = Complex::new(z.re.to_prec(p), z.im.to_prec(p));
            let (v, dv, big) = self.level(i).eval(&zi);
            lost = big - v.abs().log2_abs() - (p - base) as f64;
            out = (
                Complex::new(v.re.to_prec(base), v.im.to_prec(base)),
                Complex::new(dv.re.to_prec(base), dv.im.to_prec(base)),
            );
        }
        out
    }
}

pub struct HauptEval<T> {
    recipe: HauptRecipe,
    shift: T,
    negate: bool,
    c0: T,
    e4: LevelOne<T>,
    e6: LevelOne<T>,
    e2: E2<T>,
    prec: u32,
}

impl<T: Real> HauptEval<T> {
    pub fn new(j: &Hauptmodul, prec: u32) -> Self {
        HauptEval {
            recipe: j.recipe.clone(),
            shift: T::from_rational(&j.shift, prec),
            negate: j.negate,
            c0: T::from_rational(&j.raw_constant, prec),
            e4: LevelOne::new(4, prec),
            e6: LevelOne::new(6, prec),
            e2: E2::new(prec),
            prec,
        }
    }

    fn two_pi_i(&self) -> Complex<T> {
        let p = self.prec;
        Complex::new(T::from_f64_prec(0.0, p), T::pi(p) * T::from_f64_prec(2.0, p))
    }

    fn raw(&self, w: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let p = self.prec;
        let tpi = self.two_pi_i();
        match &self.recipe {
            HauptRecipe::KleinJ => {
                let r = reduce(w);
                let (e4, _) = self.e4.at_reduced(&r.tau);
                let (e6, _) = self.e6.at_reduced(&r.tau);
                let delta = eta_reduced(&Reduced0::of(&r.tau), p).powi(24);
                let e4sq = e4.clone() * e4.clone();
                let v = e4sq.clone() * e4 / delta.clone();
                let dtau = -(tpi * e4sq * e6 / delta);
                let jinv = r.j.recip();
                (v, dtau * jinv.clone() * jinv)
            }
            HauptRecipe::Eta(f) => {
                let mut lv = Complex::zero(p);
                let mut logd = Complex::zero(p);
                for &(d, r) in f {
                    let df = T::from_f64_prec(d as f64, p);
                    let red = reduce(&w.scale(&df));
                    lv = lv + log_eta_reduced(&red, p).scale(&T::from_f64_prec(r as f64, p));
                    let e2 = self.e2.eval_reduced(&red);
                    logd = logd + e2.scale(&(df * T::from_f64_prec(r as f64, p)));
                }
                // eta'/eta = (pi i / 12) E2
                let logd = logd * tpi.scale(&(T::from_f64_prec(1.0, p) / T::from_f64_prec(24.0, p)));
                let v = lv.exp();
                (v.clone(), v * logd)
            }
            HauptRecipe::FrickeE2(n) => {
                let nf = T::from_f64_prec(*n as f64, p);
                let r1 = reduce(w);
                let rn = reduce(&w.scale(&nf));
                let e2a = self.e2.eval_reduced(&r1);
                let e2b = self.e2.eval_reduced(&rn);
                let e4a = self.e4.eval_reduced(&r1).0;
                let e4b = self.e4.eval_reduced(&rn).0;
                let inv = T::from_f64_prec(1.0, p) / (nf.clone() - T::from_f64_prec(1.0, p));
                let g = (e2b.scale(&nf) - e2a.clone()).scale(&inv);
                let d2 = |e2: &Complex<T>, e4: &Complex<T>| {
                    (e2.clone() * e2.clone() - e4.clone()) * tpi.scale(&(T::from_f64_prec(1.0, p) / T::from_f64_prec(12.0, p)))
                };
                let gd = (d2(&e2b, &e4b).scale(&(nf.clone() * nf.clone())) - d2(&e2a, &e4a)).scale(&inv);
                let lh = (log_eta_reduced(&r1, p) + log_eta_reduced(&rn, p)).scale_f64(2.0);
                let h = lh.exp();
                let logh = (e2a.scale_f64(2.0) + e2b.scale(&(nf * T::from_f64_prec(2.0, p))))
                    * tpi.scale(&(T::from_f64_prec(1.0, p) / T::from_f64_prec(24.0, p)));
                let v = g / h.clone();
                let dv = gd / h - v.clone() * logh;
                (v, dv)
            }
        }
    }
}

/// Reduction record for a point already in the standard domain.
struct Reduced0;

impl Reduced0 {
    fn of<T: Real>(tau: &Complex<T>) -> evaluate::Reduced<T> {
        evaluate::Reduced { tau: tau.clone(), g: [1, 0, 0, 1], j: tau.one_like() }
    }
}

impl<T: Real + Send + Sync> Evaluable<T> for HauptEval<T> {
    fn eval(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let w = z.add_real(&self.shift);
        let (v, d) = self.raw(&w);
        let v = v - Complex::from_real(self.c0.clone());
        if self.negate {
            (-v, -d)
        } else {
            (v, d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_registry::get_group;

    #[test]
    fn gamma0_2_weight4_by_hand() {
        // (16 E4(2z) - E4(z)) / 15
        let c = solve_combo(2, &[], 4).unwrap();
        assert_eq!(c, vec![(1, Rational::from((-1, 15))), (2, Rational::from((16, 15)))]);
    }

    #[test]
    fn infinity_classes() {
        assert_eq!(infinity_class(6, &[2]), vec![6, 3]);
        assert_eq!(infinity_class(12, &[3]), vec![12, 4]);
        assert_eq!(infinity_class(11, &[11]), vec![11, 1]);
    }

    #[test]
    fn gamma0_2_hauptmodul() {
        let g = get_group("Gamma0_2").unwrap();
        let j = build_hauptmodul(&g, 3).unwrap();
        let c: Vec<i64> = j.qexp.coeffs().iter().map(|x| x.numer().to_i64().unwrap()).collect();
        assert_eq!(c, vec![1, 0, 276, -2048, 11202]);
        assert_eq!(j.raw_constant, -24);
    }

    #[test]
    fn fricke_11_hauptmodul_start() {
        let g = get_group("Gamma0*_11").unwrap();
        let j = build_hauptmodul(&g, 2).unwrap();
        assert_eq!(j.qexp.lead(), -1);
        assert_eq!(j.qexp.coeff(0).unwrap(), 0);
        assert_eq!(j.qexp.coeff(1).unwrap(), 17);
    }

    #[test]
    fn cusp_orders_positive() {
        for name in crate::group_registry::list_groups() {
            let g = get_group(&name).unwrap();
            for w in [4, 6, 8, 12] {
                let f = build_eisenstein(&g, w, 20).unwrap();
                assert_eq!(f.qexp.coeff(0).unwrap(), 1);
                for c in &f.cusp_orders {
                    if c.class == "inf" {
                        assert_eq!(c.order, 0);
                    } else {
                        assert!(c.order >= 1, "{name} {w} {c:?}");
                    }
                }
            }
        }
    }
}
