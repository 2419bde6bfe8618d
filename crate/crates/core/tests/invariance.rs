use eiszero::modular_forms::{build_eisenstein, build_hauptmodul, conjugate_hauptmodul, EisEval, Evaluable, HauptEval};
use eiszero::numeric::{BigFloat, Complex, Real};
use eiszero::group_registry::{compute_c, compute_c_with, conjugate_group, get_group, list_groups};

const PREC: u32 = 128;

fn all_groups() -> Vec<eiszero::group_registry::GroupDescriptor> {
    let mut out = Vec::new();
    for name in list_groups() {
        let g = get_group(&name).unwrap();
        out.push(conjugate_group(&g));
        out.push(g);
    }
    out
}

fn sample_points(g: &eiszero::group_registry::GroupDescriptor) -> Vec<Complex<BigFloat>> {
    let h = g.h();
    [(-0.31, 0.07), (0.12, 0.2), (0.43, 0.04)]
        .iter()
        .map(|&(fx, dy)| {
            let x = fx * h;
            Complex::from_f64(x, g.y_low(x) + dy, PREC)
        })
        .collect()
}

fn rel(a: &Complex<BigFloat>, b: &Complex<BigFloat>) -> f64 {
    let d = (a.clone() - b.clone()).abs().to_f64();
    d / b.abs().to_f64().max(1.0)
}

#[test]
fn hauptmodul_invariant_under_generators() {
    for g in all_groups() {
        let j = build_hauptmodul(&g, 8).unwrap();
        let ev = HauptEval::<BigFloat>::new(&j, PREC);
        for z in sample_points(&g) {
            let v = ev.eval(&z).0;
            for m in &g.generators {
                let w = ev.eval(&m.act(&z)).0;
                assert!(rel(&w, &v) < 1e-20, "{} {m}: {}", g.name, rel(&w, &v));
            }
        }
    }
}

#[test]
fn eisenstein_transforms_with_weight() {
    for g in all_groups() {
        for w in [4u32, 6] {
            if !g.is_good(w) {
                continue;
            }
            let f = build_eisenstein(&g, w, 4).unwrap();
            let ev = EisEval::<BigFloat>::new(&f, PREC);
            for z in sample_points(&g) {
                let v = ev.eval(&z).0;
                for m in &g.generators {
                    let lhs = ev.eval(&m.act(&z)).0;
                    let rhs = m.cocycle(&z).powi(w as i64) * v.clone();
                    assert!(rel(&lhs, &rhs) < 1e-20, "{} w={w} {m}: {}", g.name, rel(&lhs, &rhs));
                }
            }
        }
    }
}

#[test]
fn numeric_eisenstein_matches_expansion() {
    for g in all_groups() {
        let f = build_eisenstein(&g, 8, 60).unwrap();
        let ev = EisEval::<BigFloat>::new(&f, PREC);
        let z = Complex::from_f64(0.13 * g.h(), 0.9 * g.h(), PREC);
        let k = BigFloat::pi(PREC) * BigFloat::new(PREC, 2.0) / BigFloat::from_rational(&g.width, PREC);
        let q = z.mul_i().scale(&k).exp();
        let mut sum = Complex::zero(PREC);
        let mut qn = Complex::one(PREC);
        for (_, c) in f.qexp.terms() {
            sum = sum + qn.scale(&BigFloat::from_rational(c, PREC));
            qn = qn * q.clone();
        }
        let v = ev.eval(&z).0;
        assert!(rel(&v, &sum) < 1e-25, "{}: {}", g.name, rel(&v, &sum));
    }
}

#[test]
fn arc_values_real_for_acceptable_groups() {
    for g in all_groups().into_iter().filter(|g| g.acceptable) {
        let j = build_hauptmodul(&g, 8).unwrap();
        let ev = HauptEval::<BigFloat>::new(&j, PREC);
        for a in &g.arcs {
            let (t0, t1) = a.angle_range();
            for i in 1..20 {
                let th = t0 + (t1 - t0) * i as f64 / 20.0;
                let (x, y) = a.point(th);
                // exact point on the circle at working precision
                let c = BigFloat::from_rational(&a.center, PREC);
                let r = BigFloat::from_rational(&a.radius2, PREC).sqrt();
                let (s, co) = BigFloat::new(PREC, th).sin_cos();
                let z = Complex::new(c + r.clone() * co, r * s);
                let v = ev.eval(&z).0;
                let im = v.im.to_f64().abs();
                assert!(im < 1e-15 * v.re.to_f64().abs().max(1.0), "{} at {x},{y}: {im}", g.name);
            }
        }
    }
}

#[test]
fn compute_c_stable_under_denser_sampling() {
    for g in all_groups().into_iter().filter(|g| g.acceptable) {
        let j = build_hauptmodul(&g, 8).unwrap();
        let (c1, _) = compute_c_with(&g, &j, 2048).unwrap();
        let (c2, _) = compute_c_with(&g, &j, 4096).unwrap();
        assert_eq!(c1, c2, "{}", g.name);
    }
}

#[test]
fn c_minus_s1_matches_registry() {
    for name in list_groups() {
        let g = get_group(&name).unwrap();
        let Some(expected) = g.c_minus_s_expected else { continue };
        let c = compute_c(&g).unwrap();
        for w in (4..=20).step_by(2) {
            let f = build_eisenstein(&g, w, 4).unwrap();
            let s1 = eiszero::modular_forms::compute_s1(&g, &f);
            assert_eq!(c - s1, expected, "{name} w={w}");
        }
    }
}

#[test]
fn conjugate_of_gamma0_2_hauptmodul_is_registry_one() {
    let g2 = get_group("Gamma0_2").unwrap();
    let g4 = get_group("Gamma0*_4").unwrap();
    let j2 = build_hauptmodul(&g2, 30).unwrap();
    let j4 = build_hauptmodul(&g4, 30).unwrap();
    let flipped = conjugate_hauptmodul(&j2, &g4);
    assert!(flipped.qexp.agrees_to(&j4.qexp, 30));
    for (n, c) in j2.qexp.terms() {
        let sign = if (n - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        assert_eq!(j4.qexp.coeff(n).unwrap(), c.clone() * sign, "n={n}");
    }
}

#[test]
fn rescaled_families_agree() {
    for (big, small, m) in [("Gamma0_9", "Gamma0_3", 3u32), ("Gamma0_12+3", "Gamma0_6+3", 2)] {
        let gb = get_group(big).unwrap();
        let gs = get_group(small).unwrap();
        for w in (4..=12).step_by(2) {
            let fb = build_eisenstein(&gb, w, 60).unwrap();
            let fs = build_eisenstein(&gs, w, 60).unwrap();
            let r = fs.qexp.rescale(m);
            assert!(fb.qexp.agrees_to(&r, 60), "{big} w={w}");
        }
    }
}
