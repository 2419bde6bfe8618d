//! Static registry of genus-zero groups.
//!
//! The data ships as `data/registry.json` together with its SHA-256 digest;
//! the digest is checked when the registry is first loaded.

mod constants;
mod geometry;

pub use constants::{compute_a0_a1, compute_c, compute_c_with, cusp_value, CriticalPoint};
pub use geometry::ArcSegment;

use crate::error::{Error, Result};
use crate::exact::{egcd, gcd, parse_rational, rat, Mat2, Surd};
use rug::Rational;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::sync::OnceLock;

pub const REGISTRY_JSON: &str = include_str!("../../data/registry.json");
pub const REGISTRY_SHA256: &str = include_str!("../../data/registry.json.sha256");

#[derive(Clone, Debug, PartialEq)]
pub enum HauptRecipe {
    KleinJ,
    Eta(Vec<(u32, i32)>),
    /// (N E_2(N z) - E_2(z)) / ((N - 1) eta(z)^2 eta(N z)^2)
    FrickeE2(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EisRecipe {
    pub level: u32,
    pub atkin_lehner: Vec<u32>,
}

/// A cusp of the closed fundamental domain.
#[derive(Clone, Debug)]
pub struct CuspPoint {
    /// `None` is the cusp at infinity.
    pub point: Option<Rational>,
    /// Label of the equivalence class.
    pub class: String,
    /// Sends infinity to the cusp; determinant one.
    pub scaling: Mat2,
    /// Width in the local parameter of `scaling`.
    pub width: Rational,
}

#[derive(Clone, Debug)]
pub struct CuspClass {
    pub label: String,
    pub width: Rational,
    pub fixed_by_atkin_lehner: bool,
    /// Excluded from the s^1 counting set.
    pub excluded: bool,
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticPoint {
    pub x: Rational,
    pub y2: Rational,
    pub order: u32,
}

impl EllipticPoint {
    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y2.to_f64().sqrt())
    }
}

#[derive(Clone, Debug)]
pub struct RescaleOf {
    pub base: String,
    pub factor: u32,
}

#[derive(Clone, Debug)]
pub struct GroupDescriptor {
    pub name: String,
    pub level: u32,
    pub atkin_lehner: Vec<u32>,
    pub index: u32,
    pub width: Rational,
    pub cusp_points: Vec<CuspPoint>,
    pub cusp_classes: Vec<CuspClass>,
    pub elliptic: Vec<EllipticPoint>,
    pub arcs: Vec<ArcSegment>,
    pub y0_sq: Rational,
    pub y1_sq: Rational,
    pub acceptable: bool,
    pub good_min_weight: u32,
    pub hauptmodul: HauptRecipe,
    pub eisenstein: EisRecipe,
    pub generators: Vec<Mat2>,
    pub c_minus_s_expected: Option<i64>,
    pub rescale_of: Option<RescaleOf>,
    pub conjugate_of: Option<String>,
    /// Forms of this group are the recipe forms evaluated at z + shift.
    pub shift: Rational,
    /// Hauptmodul is the negated recipe (half-period conjugates).
    pub negate_hauptmodul: bool,
}

impl GroupDescriptor {
    pub fn h(&self) -> f64 {
        self.width.to_f64()
    }
    pub fn y0(&self) -> f64 {
        self.y0_sq.to_f64().sqrt()
    }
    pub fn y1(&self) -> f64 {
        self.y1_sq.to_f64().sqrt()
    }
    pub fn is_good(&self, weight: u32) -> bool {
        weight >= self.good_min_weight && weight % 2 == 0
    }
    pub fn class(&self, label: &str) -> Option<&CuspClass> {
        self.cusp_classes.iter().find(|c| c.label == label)
    }
    pub fn class_of_point(&self, p: &CuspPoint) -> &CuspClass {
        self.class(&p.class).expect("registry consistency")
    }
    /// Representative point (first listed) of each class.
    pub fn class_representative(&self, label: &str) -> &CuspPoint {
        let c = self.class(label).expect("known class");
        &self.cusp_points[c.points[0]]
    }
    pub fn counting_set(&self) -> Vec<&CuspClass> {
        self.cusp_classes.iter().filter(|c| !c.excluded).collect()
    }
}

#[derive(Deserialize)]
struct RawRegistry {
    schema: u32,
    groups: Vec<RawGroup>,
}

#[derive(Deserialize)]
struct RawCusp {
    point: String,
    class: String,
}

#[derive(Deserialize)]
struct RawElliptic {
    x: String,
    y2: String,
    order: u32,
}

#[derive(Deserialize)]
struct RawArc {
    center: String,
    radius2: String,
    x_from: String,
    x_to: String,
}

#[derive(Deserialize)]
struct RawHaupt {
    kind: String,
    #[serde(default)]
    factors: Vec<(u32, i32)>,
    #[serde(default)]
    level: u32,
}

#[derive(Deserialize)]
struct RawEis {
    level: u32,
    atkin_lehner: Vec<u32>,
}

#[derive(Deserialize)]
struct RawRescale {
    base: String,
    factor: u32,
}

type RawSurd = (String, String, u32);

#[derive(Deserialize)]
struct RawGroup {
    name: String,
    level: u32,
    atkin_lehner: Vec<u32>,
    index: u32,
    width: String,
    cusps: Vec<RawCusp>,
    elliptic: Vec<RawElliptic>,
    arcs: Vec<RawArc>,
    y0_sq: String,
    y1_sq: String,
    acceptable: bool,
    good_min_weight: u32,
    hauptmodul: RawHaupt,
    eisenstein: RawEis,
    generators: Vec<[RawSurd; 4]>,
    excluded_cusps: Vec<String>,
    #[serde(default)]
    c_minus_s_expected: Option<i64>,
    #[serde(default)]
    rescale_of: Option<RawRescale>,
    #[serde(default)]
    conjugate_of: Option<String>,
}

fn q(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::Registry(format!("bad rational {s:?}")))
}

fn surd(s: &RawSurd) -> Result<Surd> {
    Ok(Surd::new(q(&s.0)?, q(&s.1)?, s.2))
}

/// SL2(Z) matrix sending infinity to a/c.
pub fn sl2z_scaling(p: &Rational) -> Mat2 {
    let a = p.numer().to_i64().expect("small cusp");
    let c = p.denom().to_i64().expect("small cusp");
    // a d - b c = 1
    let (_, x, y) = egcd(a, c);
    Mat2::int(a, -y, c, x)
}

/// Gamma_0(N) class data for a cusp with denominator c: (width, fixed by W_e).
fn gamma0_width(level: u32, c: i64, al: &[u32]) -> (Rational, bool) {
    let n = level as i64;
    let cc = gcd(c, n);
    let w = n / gcd(cc * cc, n);
    let fixed = al.iter().any(|&e| {
        let ce = gcd(cc, e as i64);
        ce * ce == e as i64
    });
    let width = if fixed { rat(w, 2) } else { rat(w, 1) };
    (width, fixed)
}

fn convert(raw: RawGroup) -> Result<GroupDescriptor> {
    let width = q(&raw.width)?;
    let mut points = Vec::new();
    let mut classes: Vec<CuspClass> = Vec::new();
    for (i, c) in raw.cusps.iter().enumerate() {
        let (point, scaling, cw, fixed) = if c.point == "inf" {
            (None, Mat2::identity(), width.clone(), false)
        } else {
            let p = q(&c.point)?;
            let m = sl2z_scaling(&p);
            let den = p.denom().to_i64().unwrap_or(1);
            let (w, fixed) = gamma0_width(raw.level, den, &raw.atkin_lehner);
            (Some(p), m, w, fixed)
        };
        match classes.iter_mut().find(|k| k.label == c.class) {
            Some(k) => {
                if k.width != cw {
                    return Err(Error::Registry(format!("{}: width clash in {}", raw.name, c.class)));
                }
                k.points.push(i);
            }
            None => classes.push(CuspClass {
                label: c.class.clone(),
                width: cw.clone(),
                fixed_by_atkin_lehner: fixed,
                excluded: raw.excluded_cusps.contains(&c.class),
                points: vec![i],
            }),
        }
        points.push(CuspPoint { point, class: c.class.clone(), scaling, width: cw });
    }
    if !points.iter().any(|p| p.point.is_none()) {
        return Err(Error::Registry(format!("{}: no cusp at infinity", raw.name)));
    }
    let elliptic = raw
        .elliptic
        .iter()
        .map(|e| Ok(EllipticPoint { x: q(&e.x)?, y2: q(&e.y2)?, order: e.order }))
        .collect::<Result<Vec<_>>>()?;
    let arcs = raw
        .arcs
        .iter()
        .map(|a| Ok(ArcSegment::new(q(&a.center)?, q(&a.radius2)?, q(&a.x_from)?, q(&a.x_to)?)))
        .collect::<Result<Vec<_>>>()?;
    let hauptmodul = match raw.hauptmodul.kind.as_str() {
        "klein_j" => HauptRecipe::KleinJ,
        "eta" => HauptRecipe::Eta(raw.hauptmodul.factors.clone()),
        "fricke_e2" => HauptRecipe::FrickeE2(raw.hauptmodul.level),
        k => return Err(Error::Registry(format!("unknown recipe kind {k}"))),
    };
    let generators = raw
        .generators
        .iter()
        .map(|g| {
            Ok(Mat2 { a: surd(&g[0])?, b: surd(&g[1])?, c: surd(&g[2])?, d: surd(&g[3])? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupDescriptor {
        name: raw.name,
        level: raw.level,
        atkin_lehner: raw.atkin_lehner,
        index: raw.index,
        width,
        cusp_points: points,
        cusp_classes: classes,
        elliptic,
        arcs,
        y0_sq: q(&raw.y0_sq)?,
        y1_sq: q(&raw.y1_sq)?,
        acceptable: raw.acceptable,
        good_min_weight: raw.good_min_weight,
        hauptmodul,
        eisenstein: EisRecipe { level: raw.eisenstein.level, atkin_lehner: raw.eisenstein.atkin_lehner },
        generators,
        c_minus_s_expected: raw.c_minus_s_expected,
        rescale_of: raw.rescale_of.map(|r| RescaleOf { base: r.base, factor: r.factor }),
        conjugate_of: raw.conjugate_of,
        shift: Rational::new(),
        negate_hauptmodul: false,
    })
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Parses a registry document after checking it against `checksum`.
pub fn load_registry(text: &str, checksum: &str) -> Result<Vec<GroupDescriptor>> {
    let got = sha256_hex(text);
    if got != checksum.trim() {
        return Err(Error::Registry(format!("checksum mismatch: {got}")));
    }
    let raw: RawRegistry =
        serde_json::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
    if raw.schema != 1 {
        return Err(Error::Registry(format!("unsupported schema {}", raw.schema)));
    }
    let groups = raw.groups.into_iter().map(convert).collect::<Result<Vec<_>>>()?;
    for g in &groups {
        geometry::check_descriptor(g)?;
    }
    Ok(groups)
}

fn registry() -> &'static [GroupDescriptor] {
    static REG: OnceLock<Vec<GroupDescriptor>> = OnceLock::new();
    REG.get_or_init(|| load_registry(REGISTRY_JSON, REGISTRY_SHA256).expect("shipped registry is valid"))
}

pub fn list_groups() -> Vec<String> {
    registry().iter().map(|g| g.name.clone()).collect()
}

/// Looks up a registry group. Names of the form `conj(NAME)` resolve to the
/// half-period conjugate of `NAME`.
pub fn get_group(name: &str) -> Result<GroupDescriptor> {
    if let Some(inner) = name.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
        return Ok(conjugate_group(&get_group(inner)?));
    }
    registry()
        .iter()
        .find(|g| g.name == name)
        .cloned()
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))
}

fn conjugate_name(name: &str) -> String {
    match name {
        "Gamma0_2" => "Gamma0*_4".to_string(),
        "Gamma0*_4" => "Gamma0_2".to_string(),
        _ => match name.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("conj({name})"),
        },
    }
}

fn shift_point(p: &Rational, half: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    if *p >= 0 {
        out.push(Rational::from(p - half));
    }
    if *p <= 0 {
        out.push(Rational::from(p + half));
    }
    out
}

/// The conjugate T^{-1} G T by the half-period translation T: z -> z + h/2.
pub fn conjugate_group(g: &GroupDescriptor) -> GroupDescriptor {
    let half = Rational::from(&g.width / 2u32);
    let neg_half = Rational::from(-&half);
    let mut cusp_points: Vec<CuspPoint> = Vec::new();
    for p in &g.cusp_points {
        match &p.point {
            None => cusp_points.push(p.clone()),
            Some(x) => {
                for (k, nx) in shift_point(x, &half).into_iter().enumerate() {
                    if cusp_points.iter().any(|c| c.point.as_ref() == Some(&nx)) {
                        continue;
                    }
                    // nx = x - h/2 uses T^{-1} sigma, nx = x + h/2 uses T sigma
                    let t = if *x >= 0 && k == 0 { &neg_half } else { &half };
                    let scaling = Mat2::translation(t).mul(&p.scaling).expect("rational");
                    cusp_points.push(CuspPoint {
                        point: Some(nx),
                        class: p.class.clone(),
                        scaling,
                        width: p.width.clone(),
                    });
                }
            }
        }
    }
    cusp_points.sort_by(|a, b| match (&a.point, &b.point) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, _) => std::cmp::Ordering::Less,
        (_, None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    });
    let cusp_classes = g
        .cusp_classes
        .iter()
        .map(|c| CuspClass {
            points: cusp_points
                .iter()
                .enumerate()
                .filter(|(_, p)| p.class == c.label)
                .map(|(i, _)| i)
                .collect(),
            ..c.clone()
        })
        .map(|mut c| {
            // the counting-set convention refers to the points 0 and -h/2
            c.excluded = c.label == "inf"
                || c.points.iter().any(|&i| {
                    let p = &cusp_points[i].point;
                    p.as_ref().is_some_and(|x| *x == 0 || *x == neg_half)
                });
            c
        })
        .collect();
    let mut elliptic: Vec<EllipticPoint> = Vec::new();
    for e in &g.elliptic {
        // keep one representative per class, preferring the left copy
        let nx = shift_point(&e.x, &half);
        let pick = nx.iter().min().cloned().expect("nonempty");
        elliptic.push(EllipticPoint { x: pick, y2: e.y2.clone(), order: e.order });
    }
    let arcs = geometry::conjugate_arcs(&g.arcs, &half);
    let generators = g
        .generators
        .iter()
        .map(|m| m.conjugate_translate(&half).expect("same radicand"))
        .collect();
    let mut shift = Rational::from(&g.shift + &half);
    if shift >= g.width {
        shift -= &g.width;
    }
    GroupDescriptor {
        name: conjugate_name(&g.name),
        level: g.level,
        atkin_lehner: g.atkin_lehner.clone(),
        index: g.index,
        width: g.width.clone(),
        cusp_points,
        cusp_classes,
        elliptic,
        arcs,
        y0_sq: g.y1_sq.clone(),
        y1_sq: g.y0_sq.clone(),
        acceptable: g.acceptable,
        good_min_weight: g.good_min_weight,
        hauptmodul: g.hauptmodul.clone(),
        eisenstein: g.eisenstein.clone(),
        generators,
        c_minus_s_expected: g.c_minus_s_expected,
        rescale_of: None,
        conjugate_of: if g.negate_hauptmodul { None } else { Some(g.name.clone()) },
        shift,
        negate_hauptmodul: !g.negate_hauptmodul,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_matrices_have_det_one() {
        for name in list_groups() {
            let g = get_group(&name).unwrap();
            for p in &g.cusp_points {
                assert_eq!(p.scaling.det().unwrap(), Surd::int(1), "{name}");
                if let Some(x) = &p.point {
                    let m = p.scaling.entries_f64();
                    assert!((m[0] / m[2] - x.to_f64()).abs() < 1e-15);
                }
            }
            for m in &g.generators {
                assert_eq!(m.det().unwrap(), Surd::int(1), "{name}");
            }
        }
    }

    #[test]
    fn tampered_registry_rejected() {
        let bad = REGISTRY_JSON.replacen("\"index\": 4", "\"index\": 5", 1);
        assert!(matches!(load_registry(&bad, REGISTRY_SHA256), Err(Error::Registry(_))));
    }

    #[test]
    fn unknown_group() {
        assert!(matches!(get_group("Gamma0_13"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn conjugate_of_gamma0_2_is_gamma0_star_4() {
        let g = get_group("Gamma0_2").unwrap();
        let c = conjugate_group(&g);
        assert_eq!(c.name, "Gamma0*_4");
        let reg = get_group("Gamma0*_4").unwrap();
        assert_eq!(c.arcs, reg.arcs);
        assert_eq!(c.y0_sq, g.y1_sq);
        assert_eq!(c.y1_sq, g.y0_sq);
        assert_eq!(c.cusp_classes.len(), reg.cusp_classes.len());
        let back = conjugate_group(&c);
        assert_eq!(back.arcs, g.arcs);
        assert_eq!(back.shift, 0);
        assert!(!back.negate_hauptmodul);
    }
}
