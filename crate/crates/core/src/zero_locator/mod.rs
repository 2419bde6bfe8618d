//! Zeros of E^Gamma in the fundamental domain: location, classification
//! against the lower arcs and the interval [a0, a1], and the verdicts.

pub mod boxes;
pub mod region;

pub use boxes::{count_zeros_in_box, Rect};

use crate::error::{Error, Result};
use crate::exact::Mat2;
use crate::modular_forms::{build_eisenstein, build_hauptmodul, compute_s1, EisEval, Evaluable, HauptEval};
use crate::numeric::{BigComplex, BigFloat, Complex, Real};
use crate::group_registry::{compute_a0_a1, compute_c, cusp_value, GroupDescriptor};
use boxes::{Isolated, Isolator};
use rayon::prelude::*;
use region::SearchRegion;
use rug::Rational;
use std::fmt;
use std::io::Write;

/// Position of Re j relative to a0 and a1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    /// in [a0, a1]
    Both,
    /// in [a0, inf) but above a1
    HalfLineOnly,
    /// in (-inf, a1] but below a0
    LowerOnly,
    /// not real, or in neither set
    Neither,
}

impl Interval {
    pub fn label(self) -> &'static str {
        match self {
            Interval::Both => "a0_a1",
            Interval::HalfLineOnly => "a0_inf",
            Interval::LowerOnly => "inf_a1",
            Interval::Neither => "outside",
        }
    }
    pub fn in_halfline(self) -> bool {
        matches!(self, Interval::Both | Interval::HalfLineOnly)
    }
    pub fn in_lower(self) -> bool {
        matches!(self, Interval::Both | Interval::LowerOnly)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroKind {
    Interior,
    Elliptic(u32),
    Boundary,
}

impl fmt::Display for ZeroKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroKind::Interior => write!(f, "interior"),
            ZeroKind::Elliptic(e) => write!(f, "elliptic({e})"),
            ZeroKind::Boundary => write!(f, "boundary"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Zero {
    pub z: BigComplex,
    pub multiplicity: i64,
    pub j: BigComplex,
    pub on_arc: bool,
    pub arc_distance: f64,
    pub j_real: bool,
    pub in_interval: Interval,
    pub kind: ZeroKind,
}

impl Zero {
    pub fn z_f64(&self) -> (f64, f64) {
        (self.z.re.to_f64(), self.z.im.to_f64())
    }
    pub fn j_f64(&self) -> (f64, f64) {
        (self.j.re.to_f64(), self.j.im.to_f64())
    }
    /// Contribution to the valence formula.
    pub fn valence(&self) -> Rational {
        match self.kind {
            ZeroKind::Elliptic(e) => Rational::from((self.multiplicity, e as i64)),
            _ => Rational::from(self.multiplicity),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub delta_geom: f64,
    pub delta_imag: f64,
}

impl Tolerances {
    pub fn defaults(g: &GroupDescriptor, a0: f64, a1: f64) -> Self {
        Tolerances { delta_geom: 1e-6 * g.h(), delta_imag: 1e-8 * (a1 - a0).abs().max(1.0) }
    }
}

/// Euclidean distance from (x, y) to the nearest lower arc.
pub fn arc_distance(g: &GroupDescriptor, x: f64, y: f64) -> f64 {
    let mut best = f64::INFINITY;
    for a in &g.arcs {
        let (t0, t1) = a.angle_range();
        let th = y.atan2(x - a.center_f());
        let d = if th <= t0 && th >= t1 {
            ((x - a.center_f()).hypot(y) - a.radius()).abs()
        } else {
            let (xa, ya) = a.point(t0);
            let (xb, yb) = a.point(t1);
            (x - xa).hypot(y - ya).min((x - xb).hypot(y - yb))
        };
        best = best.min(d);
    }
    best
}

pub fn interval_of(j: (f64, f64), a0: f64, a1: f64, delta_imag: f64) -> (bool, Interval) {
    let real = j.1.abs() < delta_imag;
    if !real {
        return (false, Interval::Neither);
    }
    let ge = j.0 >= a0 - delta_imag;
    let le = j.0 <= a1 + delta_imag;
    let iv = match (ge, le) {
        (true, true) => Interval::Both,
        (true, false) => Interval::HalfLineOnly,
        (false, true) => Interval::LowerOnly,
        (false, false) => Interval::Neither,
    };
    (true, iv)
}

/// Classification fields of a zero at z with hauptmodul value j.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub on_arc: bool,
    pub arc_distance: f64,
    pub j_real: bool,
    pub in_interval: Interval,
    pub on_boundary: bool,
}

pub fn classify_zero(
    z: (f64, f64),
    j: (f64, f64),
    g: &GroupDescriptor,
    a0: f64,
    a1: f64,
    tol: &Tolerances,
) -> Classification {
    let d = arc_distance(g, z.0, z.1);
    let (j_real, in_interval) = interval_of(j, a0, a1, tol.delta_imag);
    Classification {
        on_arc: d < tol.delta_geom,
        arc_distance: d,
        j_real,
        in_interval,
        on_boundary: g.on_boundary(z.0, z.1, tol.delta_geom),
    }
}

/// Which zero classes enter the divisor polynomial, and with what weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllipticWeight {
    /// the z-multiplicity from the winding number
    Winding,
    /// floor(multiplicity / order), the power of (X - j(e)) it forces
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convention {
    pub elliptic: EllipticWeight,
    pub include_cusps: bool,
}

impl Convention {
    pub const WINDING: Convention = Convention { elliptic: EllipticWeight::Winding, include_cusps: false };
    pub const DIVISOR: Convention = Convention { elliptic: EllipticWeight::Reduced, include_cusps: true };

    pub fn parse(s: &str) -> Option<Convention> {
        match s {
            "winding" => Some(Self::WINDING),
            "divisor" => Some(Self::DIVISOR),
            _ => None,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.elliptic {
            EllipticWeight::Winding => "winding",
            EllipticWeight::Reduced => "reduced",
        };
        let c = if self.include_cusps { "included" } else { "excluded" };
        write!(f, "elliptic={e} cusps={c}")
    }
}

/// A finite cusp class with the form's order there and the hauptmodul's
/// value at it.
#[derive(Clone, Debug)]
pub struct CuspRecord {
    pub class: String,
    pub width: Rational,
    pub order: i64,
    pub j: BigComplex,
}

/// A root of the divisor polynomial.
#[derive(Clone, Debug)]
pub struct Root {
    pub j: BigComplex,
    pub multiplicity: i64,
    pub cusp: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdicts {
    /// c - s1
    pub bound_halfline: i64,
    /// 2 (c - s1)
    pub bound_interval: i64,
    pub deg_p: i64,
    pub off_halfline_count: i64,
    pub off_interval_count: i64,
    pub off_lower_count: i64,
    /// distinct odd-multiplicity roots on [a0, inf), cusp images included
    pub m_halfline: i64,
    pub m_halfline_without_cusps: i64,
    pub m_lower: i64,
    pub m_lower_without_cusps: i64,
    pub verdict_11prime: bool,
    pub verdict_12: bool,
    pub verdict_31: bool,
}

#[derive(Clone, Debug)]
pub struct ZeroReport {
    pub group: String,
    pub weight: u32,
    pub precision: u32,
    pub acceptable: bool,
    pub zeros: Vec<Zero>,
    pub cusps: Vec<CuspRecord>,
    pub valence_expected: Rational,
    pub valence_found: Rational,
    pub a0: f64,
    pub a1: f64,
    pub c: Option<i64>,
    pub s1: i64,
    pub tolerances: Tolerances,
    pub verdicts: Option<Verdicts>,
}

impl ZeroReport {
    /// Roots of the divisor polynomial under a convention.
    pub fn roots(&self, conv: Convention) -> Vec<Root> {
        let mut out = Vec::new();
        for z in &self.zeros {
            let m = match (z.kind, conv.elliptic) {
                (ZeroKind::Elliptic(e), EllipticWeight::Reduced) => z.multiplicity / e as i64,
                _ => z.multiplicity,
            };
            if m > 0 {
                out.push(Root { j: z.j.clone(), multiplicity: m, cusp: false });
            }
        }
        if conv.include_cusps {
            for c in self.cusps.iter().filter(|c| c.order > 0) {
                out.push(Root { j: c.j.clone(), multiplicity: c.order, cusp: true });
            }
        }
        out
    }

    /// Zeros off the lower arcs, counted with multiplicity.
    pub fn off_arc_count(&self) -> i64 {
        self.zeros.iter().filter(|z| !z.on_arc).map(|z| z.multiplicity).sum()
    }

    pub fn max_off_arc_distance(&self) -> f64 {
        self.zeros.iter().filter(|z| !z.on_arc).map(|z| z.arc_distance).fold(0.0, f64::max)
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    pub fn valence_ok(&self) -> bool {
        self.valence_found == self.valence_expected
    }

    /// Verdicts asserted only for acceptable groups.
    pub fn asserted(&self) -> bool {
        self.acceptable && self.verdicts.is_some()
    }

    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.as_ref().is_some_and(|v| v.verdict_11prime && v.verdict_12 && v.verdict_31)
    }
}

/// The three verdicts from the divisor roots (reduced elliptic weights,
/// cusp images included) and the bound c - s1.
pub fn interval_verdicts(report: &ZeroReport, c: i64, s1: i64) -> Verdicts {
    let b = c - s1;
    let roots = report.roots(Convention::DIVISOR);
    let tol = report.tolerances.delta_imag;
    let mut v = Verdicts {
        bound_halfline: b,
        bound_interval: 2 * b,
        deg_p: 0,
        off_halfline_count: 0,
        off_interval_count: 0,
        off_lower_count: 0,
        m_halfline: 0,
        m_halfline_without_cusps: 0,
        m_lower: 0,
        m_lower_without_cusps: 0,
        verdict_11prime: false,
        verdict_12: false,
        verdict_31: false,
    };
    for r in &roots {
        let (_, iv) = interval_of((r.j.re.to_f64(), r.j.im.to_f64()), report.a0, report.a1, tol);
        let odd = r.multiplicity % 2 == 1;
        v.deg_p += r.multiplicity;
        if iv.in_halfline() {
            if odd {
                v.m_halfline += 1;
                v.m_halfline_without_cusps += i64::from(!r.cusp);
            }
        } else {
            v.off_halfline_count += r.multiplicity;
        }
        if iv.in_lower() {
            if odd {
                v.m_lower += 1;
                v.m_lower_without_cusps += i64::from(!r.cusp);
            }
        } else {
            v.off_lower_count += r.multiplicity;
        }
        if iv != Interval::Both {
            v.off_interval_count += r.multiplicity;
        }
    }
    v.verdict_11prime = v.off_halfline_count <= b && v.m_halfline + b >= v.deg_p;
    v.verdict_31 = v.off_lower_count <= b && v.m_lower + b >= v.deg_p;
    v.verdict_12 = v.off_interval_count <= 2 * b;
    v
}

#[derive(Clone, Debug)]
pub struct LocateOptions {
    pub precision: u32,
    /// Number of q-expansion coefficients kept for the zero-free bounds.
    pub trunc: usize,
    pub delta_geom: Option<f64>,
    pub delta_imag: Option<f64>,
}

impl Default for LocateOptions {
    fn default() -> Self {
        LocateOptions { precision: 128, trunc: 100, delta_geom: None, delta_imag: None }
    }
}

struct Candidate {
    z: BigComplex,
    multiplicity: i64,
    elliptic: Option<u32>,
}

/// Points equivalent to each elliptic point that may appear in the closed
/// domain: translates and images under one generator step.
fn elliptic_images(g: &GroupDescriptor) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    let h = g.h();
    for (i, e) in g.elliptic.iter().enumerate() {
        let (x, y) = e.to_f64();
        for t in [-h, 0.0, h] {
            out.push((i, x + t, y));
        }
        let z = Complex::new(x, y);
        let mut mats: Vec<Mat2> = g.generators.clone();
        mats.extend(g.generators.iter().map(Mat2::inverse_sl2));
        for m in mats {
            let w = m.act(&z);
            out.push((i, w.re, w.im));
        }
    }
    out
}

fn exact_elliptic(g: &GroupDescriptor, i: usize, prec: u32) -> BigComplex {
    let e = &g.elliptic[i];
    Complex::new(BigFloat::from_rational(&e.x, prec), BigFloat::from_rational(&e.y2, prec).sqrt())
}

fn find_raw(
    g: &GroupDescriptor,
    f: &EisEval<BigFloat>,
    region: &SearchRegion,
    ncol: usize,
    prec: u32,
) -> Result<Vec<Isolated<BigFloat>>> {
    let iso = Isolator::new(f, prec, g.h());
    let cols = region.columns(g, ncol);
    let found: Vec<Result<Vec<Isolated<BigFloat>>>> = cols
        .par_iter()
        .map(|r| {
            let (n, used) = count_zeros_in_box(f, r, prec)?;
            let mut out = Vec::new();
            iso.isolate(&used, n, 0, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in found {
        all.extend(r?);
    }
    Ok(all)
}

fn fold(
    g: &GroupDescriptor,
    raw: Vec<Isolated<BigFloat>>,
    jev: &HauptEval<BigFloat>,
    prec: u32,
) -> Vec<(Candidate, BigComplex)> {
    let h = g.h();
    let images = elliptic_images(g);
    let mut cands: Vec<Candidate> = Vec::new();
    for iso in raw {
        let (x, y) = (iso.z.re.to_f64(), iso.z.im.to_f64());
        if !g.in_closed_domain(x, y, 1e-9 * h) {
            continue;
        }
        let snap = images.iter().find(|(_, ex, ey)| (x - ex).hypot(y - ey) < 1e-6 * h);
        let (z, elliptic) = match snap {
            Some(&(i, _, _)) => (exact_elliptic(g, i, prec), Some(g.elliptic[i].order)),
            None => (iso.z, None),
        };
        cands.push(Candidate { z, multiplicity: iso.multiplicity, elliptic });
    }
    cands.sort_by(|a, b| {
        let ka = (a.z.re.to_f64(), a.z.im.to_f64());
        let kb = (b.z.re.to_f64(), b.z.im.to_f64());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<(Candidate, BigComplex)> = Vec::new();
    for c in cands {
        let j = jev.eval(&c.z).0;
        let jf = j.to_f64();
        let dup = kept.iter().any(|(_, k)| {
            let d = (k.to_f64() - jf.clone()).abs();
            d < 1e-8_f64.max(1e-14 * jf.abs())
        });
        if !dup {
            kept.push((c, j));
        }
    }
    kept
}

/// Locates every zero of E^Gamma of the given weight in the closed
/// fundamental domain and checks the valence formula exactly.
pub fn locate_zeros(g: &GroupDescriptor, weight: u32, opts: &LocateOptions) -> Result<ZeroReport> {
    let prec = opts.precision;
    if prec < 64 {
        return Err(Error::Config(format!("precision {prec} below 64 bits")));
    }
    let form = build_eisenstein(g, weight, opts.trunc.max(20))?;
    let j = build_hauptmodul(g, 24)?;
    let f = EisEval::<BigFloat>::new(&form, prec);
    let jev = HauptEval::<BigFloat>::new(&j, prec);
    let (a0, a1) = compute_a0_a1(g, &j, prec)?;
    let mut tol = Tolerances::defaults(g, a0, a1);
    if let Some(d) = opts.delta_geom {
        tol.delta_geom = d;
    }
    if let Some(d) = opts.delta_imag {
        tol.delta_imag = d;
    }
    let c = if g.acceptable { Some(compute_c(g)?) } else { compute_c(g).ok() };
    let s1 = compute_s1(g, &form);
    let region = SearchRegion::new(g, &form)?;

    let mut cusps = Vec::new();
    let mut valence_cusps = Rational::new();
    for co in &form.cusp_orders {
        valence_cusps += co.order;
        if co.class == "inf" {
            continue;
        }
        let p = g.class_representative(&co.class);
        cusps.push(CuspRecord {
            class: co.class.clone(),
            width: co.width.clone(),
            order: co.order,
            j: cusp_value(&jev, p, prec),
        });
    }
    let valence_expected = Rational::from((weight as i64 * g.index as i64, 12));

    let base = 12 + 4 * g.arcs.len();
    let mut last = None;
    for ncol in [base, 2 * base + 1] {
        let raw = find_raw(g, &f, &region, ncol, prec)?;
        let kept = fold(g, raw, &jev, prec);
        let mut found = valence_cusps.clone();
        let mut zeros = Vec::new();
        for (cand, jv) in kept {
            let zf = (cand.z.re.to_f64(), cand.z.im.to_f64());
            let cl = classify_zero(zf, (jv.re.to_f64(), jv.im.to_f64()), g, a0, a1, &tol);
            let kind = match cand.elliptic {
                Some(e) => ZeroKind::Elliptic(e),
                None if cl.on_boundary => ZeroKind::Boundary,
                None => ZeroKind::Interior,
            };
            let z = Zero {
                z: cand.z,
                multiplicity: cand.multiplicity,
                j: jv,
                on_arc: cl.on_arc,
                arc_distance: cl.arc_distance,
                j_real: cl.j_real,
                in_interval: cl.in_interval,
                kind,
            };
            found += z.valence();
            zeros.push(z);
        }
        if found == valence_expected {
            let mut report = ZeroReport {
                group: g.name.clone(),
                weight,
                precision: prec,
                acceptable: g.acceptable,
                zeros,
                cusps,
                valence_expected,
                valence_found: found,
                a0,
                a1,
                c,
                s1,
                tolerances: tol,
                verdicts: None,
            };
            if let Some(c) = c {
                report.verdicts = Some(interval_verdicts(&report, c, s1));
            }
            return Ok(report);
        }
        last = Some(found);
    }
    Err(Error::ValenceMismatch {
        group: g.name.clone(),
        weight,
        expected: valence_expected.to_string(),
        found: last.map(|q| q.to_string()).unwrap_or_default(),
    })
}

/// One line of a weight sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub weight: u32,
    pub total_zeros: i64,
    pub off_arc_count: i64,
    pub max_off_arc_distance: f64,
}

impl SweepRow {
    pub fn of(r: &ZeroReport) -> Self {
        SweepRow {
            weight: r.weight,
            total_zeros: r.total_multiplicity(),
            off_arc_count: r.off_arc_count(),
            max_off_arc_distance: r.max_off_arc_distance(),
        }
    }
}

/// Reports for several weights, in weight order.
pub fn sweep_reports(g: &GroupDescriptor, weights: &[u32], opts: &LocateOptions) -> Result<Vec<ZeroReport>> {
    let mut ws = weights.to_vec();
    ws.sort_unstable();
    ws.dedup();
    for &w in &ws {
        if w < 4 || w % 2 == 1 || !g.is_good(w) {
            return Err(Error::NotGood(g.name.clone(), w));
        }
    }
    ws.par_iter().map(|&w| locate_zeros(g, w, opts)).collect()
}

pub fn sweep(g: &GroupDescriptor, weights: &[u32], opts: &LocateOptions) -> Result<Vec<SweepRow>> {
    Ok(sweep_reports(g, weights, opts)?.iter().map(SweepRow::of).collect())
}

pub const CSV_HEADER: &str = "group,weight,re_z,im_z,multiplicity,re_j,im_j,on_arc,in_interval,kind";

/// Significant digits printed for a run at `prec` bits: the Newton target
/// is 2^(-prec/2).
pub fn csv_digits(prec: u32) -> usize {
    ((prec as f64 / 2.0) * std::f64::consts::LOG10_2).floor() as usize
}

/// Rows ordered by weight, then Re z, then Im z.
pub fn write_csv(reports: &[&ZeroReport], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    let mut rows: Vec<(u32, f64, f64, String)> = Vec::new();
    for r in reports {
        let d = csv_digits(r.precision);
        for z in &r.zeros {
            let (x, y) = z.z_f64();
            let line = format!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.group,
                r.weight,
                z.z.re.to_sci(d),
                z.z.im.to_sci(d),
                z.multiplicity,
                z.j.re.to_sci(d),
                z.j.im.to_sci(d),
                z.on_arc,
                z.in_interval.label(),
                z.kind
            );
            rows.push((r.weight, x, y, line));
        }
    }
    rows.sort_by(|a, b| (a.0, a.1, a.2).partial_cmp(&(b.0, b.1, b.2)).unwrap_or(std::cmp::Ordering::Equal));
    for (_, _, _, line) in rows {
        writeln!(out, "{line}")?;
    }
    Ok(())
}
