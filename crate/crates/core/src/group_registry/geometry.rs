use super::GroupDescriptor;
use crate::error::{Error, Result};
use rug::Rational;

/// A piece of the lower boundary: the circle |z - center|^2 = radius2 over
/// x_from <= x <= x_to. Listed left to right, which is the positive
/// orientation of the boundary of the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcSegment {
    pub center: Rational,
    pub radius2: Rational,
    pub x_from: Rational,
    pub x_to: Rational,
}

impl ArcSegment {
    pub fn new(center: Rational, radius2: Rational, x_from: Rational, x_to: Rational) -> Self {
        ArcSegment { center, radius2, x_from, x_to }
    }
    pub fn center_f(&self) -> f64 {
        self.center.to_f64()
    }
    pub fn radius(&self) -> f64 {
        self.radius2.to_f64().sqrt()
    }
    /// Angle about the center of a point on the circle with abscissa x.
    pub fn angle_at(&self, x: f64) -> f64 {
        ((x - self.center_f()) / self.radius()).clamp(-1.0, 1.0).acos()
    }
    /// (theta_start, theta_end) in traversal order; theta decreases.
    pub fn angle_range(&self) -> (f64, f64) {
        (self.angle_at(self.x_from.to_f64()), self.angle_at(self.x_to.to_f64()))
    }
    pub fn point(&self, theta: f64) -> (f64, f64) {
        let r = self.radius();
        (self.center_f() + r * theta.cos(), r * theta.sin())
    }
    pub fn contains_x(&self, x: f64) -> bool {
        x >= self.x_from.to_f64() && x <= self.x_to.to_f64()
    }
    pub fn height_sq_at(&self, x: &Rational) -> Rational {
        let dx = Rational::from(x - &self.center);
        Rational::from(&self.radius2 - Rational::from(&dx * &dx))
    }
    pub fn height(&self, x: f64) -> f64 {
        let dx = x - self.center_f();
        (self.radius2.to_f64() - dx * dx).max(0.0).sqrt()
    }
    /// Hyperbolic area above the arc, between its endpoints.
    pub fn area_above(&self) -> f64 {
        let a = |x: &Rational| {
            let dx = Rational::from(x - &self.center).to_f64();
            dx.atan2(self.height_sq_at(x).to_f64().max(0.0).sqrt())
        };
        a(&self.x_to) - a(&self.x_from)
    }
    fn shifted(&self, t: &Rational, from: Rational, to: Rational) -> ArcSegment {
        ArcSegment {
            center: Rational::from(&self.center + t),
            radius2: self.radius2.clone(),
            x_from: Rational::from(&from + t),
            x_to: Rational::from(&to + t),
        }
    }
}

impl GroupDescriptor {
    /// Lowest point of the closed domain above x (x clamped to the strip).
    pub fn y_low(&self, x: f64) -> f64 {
        let hh = self.h() / 2.0;
        let x = x.clamp(-hh, hh);
        self.arcs.iter().filter(|a| a.contains_x(x)).map(|a| a.height(x)).fold(0.0, f64::max)
    }

    pub fn in_closed_domain(&self, x: f64, y: f64, tol: f64) -> bool {
        x.abs() <= self.h() / 2.0 + tol && y >= self.y_low(x) - tol
    }

    /// Distance in x to the vertical sides, or to the arcs measured radially.
    pub fn on_boundary(&self, x: f64, y: f64, tol: f64) -> bool {
        if (x.abs() - self.h() / 2.0).abs() <= tol {
            return true;
        }
        self.arcs.iter().any(|a| {
            a.contains_x(x) && {
                let d = ((x - a.center_f()).hypot(y) - a.radius()).abs();
                d <= tol
            }
        })
    }

    pub fn area(&self) -> f64 {
        self.arcs.iter().map(ArcSegment::area_above).sum()
    }
}

/// Arcs of the domain translated by the half period: pieces right of 0 move
/// left by h/2, pieces left of 0 move right.
pub fn conjugate_arcs(arcs: &[ArcSegment], half: &Rational) -> Vec<ArcSegment> {
    let neg = Rational::from(-half);
    let zero = Rational::new();
    let mut out = Vec::new();
    for a in arcs {
        if a.x_from < 0 {
            let to = (&a.x_to).min(&zero).clone();
            out.push(a.shifted(half, a.x_from.clone(), to));
        }
        if a.x_to > 0 {
            let from = (&a.x_from).max(&zero).clone();
            out.push(a.shifted(&neg, from, a.x_to.clone()));
        }
    }
    out.sort_by(|p, q| p.x_from.cmp(&q.x_from));
    let mut merged: Vec<ArcSegment> = Vec::new();
    for a in out {
        if let Some(last) = merged.last_mut() {
            if last.center == a.center && last.radius2 == a.radius2 && last.x_to == a.x_from {
                last.x_to = a.x_to;
                continue;
            }
        }
        merged.push(a);
    }
    merged
}

fn bad(g: &GroupDescriptor, what: &str) -> Error {
    Error::Registry(format!("{}: {what}", g.name))
}

/// Structural checks: contiguous real arcs, boundary heights, area and genus.
pub fn check_descriptor(g: &GroupDescriptor) -> Result<()> {
    let half = Rational::from(&g.width / 2u32);
    let first = g.arcs.first().ok_or_else(|| bad(g, "no arcs"))?;
    if first.x_from != Rational::from(-&half) || g.arcs.last().unwrap().x_to != half {
        return Err(bad(g, "arcs do not span the strip"));
    }
    for w in g.arcs.windows(2) {
        if w[0].x_to != w[1].x_from {
            return Err(bad(g, "arcs not contiguous"));
        }
        if w[0].height_sq_at(&w[0].x_to) != w[1].height_sq_at(&w[1].x_from) {
            return Err(bad(g, "arcs do not meet"));
        }
    }
    for a in &g.arcs {
        if a.height_sq_at(&a.x_from) < 0 || a.height_sq_at(&a.x_to) < 0 {
            return Err(bad(g, "arc endpoint off the circle"));
        }
    }
    if first.height_sq_at(&first.x_from) != g.y0_sq {
        return Err(bad(g, "y0 inconsistent with arcs"));
    }
    let zero = Rational::new();
    let at0 = g
        .arcs
        .iter()
        .filter(|a| a.x_from <= 0 && a.x_to >= 0)
        .map(|a| a.height_sq_at(&zero))
        .max()
        .unwrap_or_default();
    if at0 != g.y1_sq {
        return Err(bad(g, "y1 inconsistent with arcs"));
    }
    let area = g.area();
    let expected = g.index as f64 * std::f64::consts::PI / 3.0;
    if (area - expected).abs() > 1e-9 {
        return Err(bad(g, &format!("area {area} vs {expected}")));
    }
    // area / 2 pi = 2g - 2 + sum (1 - 1/e) + cusps, with g = 0
    let mut rhs = -2.0 + g.cusp_classes.len() as f64;
    for e in &g.elliptic {
        rhs += 1.0 - 1.0 / e.order as f64;
    }
    if (area / (2.0 * std::f64::consts::PI) - rhs).abs() > 1e-9 {
        return Err(bad(g, "genus is not zero"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::group_registry::{get_group, list_groups};

    #[test]
    fn every_group_is_consistent() {
        for name in list_groups() {
            let g = get_group(&name).unwrap();
            super::check_descriptor(&g).unwrap();
            let c = crate::group_registry::conjugate_group(&g);
            super::check_descriptor(&c).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn elliptic_points_lie_on_arcs() {
        for name in list_groups() {
            let g = get_group(&name).unwrap();
            for e in &g.elliptic {
                let (x, y) = e.to_f64();
                assert!(g.on_boundary(x, y, 1e-12), "{name} {x} {y}");
                assert!(g.in_closed_domain(x, y, 1e-12));
            }
        }
    }

    #[test]
    fn sl2z_domain() {
        let g = get_group("SL2Z").unwrap();
        assert!((g.y_low(0.0) - 1.0).abs() < 1e-15);
        assert!((g.area() - std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert!(!g.in_closed_domain(0.0, 0.9, 1e-9));
    }
}
