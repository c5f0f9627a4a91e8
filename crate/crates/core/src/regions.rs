//! Boundedness regions in the `(1/p, s)` and `(1/p, 1/q)` planes.
//!
//! Regions are stored as exact vertex lists in the order the theorems state
//! them: `(0,0)`, up the left side, across the top, down to `(1,0)` for the
//! Sobolev plane, and `(0,0)` along the lower boundary to `(1,1)` for the
//! Lebesgue plane. Half-plane data is recovered on demand for membership.
//!
//! The two-case polygon for the `2 eta'/(1+2 eta') < eta <= 1/2` regime is
//! not convex (its top dips to the diagonal segment between `(eta,eta)` and
//! `(1-eta,1-eta)`), so membership uses an exact even-odd test that does not
//! assume convexity; the trapezoid families are still checked convex at
//! construction.

use serde::{Deserialize, Serialize};

use crate::exponents::{AnalysisReport, Regime};
use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremTag {
    T11,
    T12c1,
    T12c2,
    T13,
    T14,
    ISaSe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plane {
    /// Axes `(1/p, s)`.
    SobolevPlane,
    /// Axes `(1/p, 1/q)`.
    LebesguePlane,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("regime is undetermined; no region applies")]
    UndeterminedRegime,
    #[error("projective map has a pole at y = -1")]
    PoleError,
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("vertex list violates convexity: {0}")]
    NonConvex(String),
}

/// A boundedness region as an ordered exact vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPolygon {
    pub theorem: TheoremTag,
    pub plane: Plane,
    pub interior_only: bool,
    pub vertices: Vec<(Rat, Rat)>,
}

fn cross(o: &(Rat, Rat), a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    let ax = &a.0 - &o.0;
    let ay = &a.1 - &o.1;
    let bx = &b.0 - &o.0;
    let by = &b.1 - &o.1;
    &ax * &by - &ay * &bx
}

/// Drops consecutive duplicates; when `merge_collinear` also drops middle
/// points of straight runs (used for the trapezoid families, whose vertex
/// formulas can degenerate at extreme exponents).
fn canonicalize(mut vertices: Vec<(Rat, Rat)>, merge_collinear: bool) -> Vec<(Rat, Rat)> {
    vertices.dedup();
    if vertices.len() > 1 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    if merge_collinear && vertices.len() >= 3 {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(vertices.len());
        let n = vertices.len();
        for i in 0..n {
            let prev = &vertices[(i + n - 1) % n];
            let next = &vertices[(i + 1) % n];
            if !cross(prev, &vertices[i], next).is_zero() {
                out.push(vertices[i].clone());
            }
        }
        if out.len() >= 3 {
            return out;
        }
    }
    vertices
}

/// All turns share one orientation and none are straight.
fn is_strictly_convex(vertices: &[(Rat, Rat)]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let mut sign = 0i8;
    for i in 0..n {
        let c = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
        if c.is_zero() {
            return false;
        }
        let s = if c.is_positive() { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if s != sign {
            return false;
        }
    }
    true
}

impl RegionPolygon {
    fn new_convex(
        theorem: TheoremTag,
        plane: Plane,
        vertices: Vec<(Rat, Rat)>,
    ) -> Result<Self, RegionError> {
        let vertices = canonicalize(vertices, true);
        if !is_strictly_convex(&vertices) {
            return Err(RegionError::NonConvex(format!("{theorem:?}: {vertices:?}")));
        }
        Ok(RegionPolygon {
            theorem,
            plane,
            interior_only: true,
            vertices,
        })
    }

    fn new_simple(theorem: TheoremTag, plane: Plane, vertices: Vec<(Rat, Rat)>) -> Self {
        RegionPolygon {
            theorem,
            plane,
            interior_only: true,
            vertices: canonicalize(vertices, false),
        }
    }

    /// Exact membership. `closed = false` tests the open interior (the form
    /// the theorems are stated in); `closed = true` includes the boundary.
    pub fn contains(&self, pt: &(Rat, Rat), closed: bool) -> bool {
        if self.on_boundary(pt) {
            return closed;
        }
        // even-odd ray cast toward +x
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let mut inside = false;
        for i in 0..n {
            let p1 = &self.vertices[i];
            let p2 = &self.vertices[(i + 1) % n];
            if (p1.1 > pt.1) != (p2.1 > pt.1) {
                // x of the edge at height pt.y
                let t = (&pt.1 - &p1.1) / (&p2.1 - &p1.1);
                let x_int = &p1.0 + &(&t * &(&p2.0 - &p1.0));
                if x_int > pt.0 {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn on_boundary(&self, pt: &(Rat, Rat)) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let p1 = &self.vertices[i];
            let p2 = &self.vertices[(i + 1) % n];
            if !cross(p1, p2, pt).is_zero() {
                continue;
            }
            let in_x = (&p1.0).min(&p2.0) <= &pt.0 && &pt.0 <= (&p1.0).max(&p2.0);
            let in_y = (&p1.1).min(&p2.1) <= &pt.1 && &pt.1 <= (&p1.1).max(&p2.1);
            if in_x && in_y {
                return true;
            }
        }
        false
    }

    /// Twice the signed area of the stored traversal.
    pub fn signed_area_doubled(&self) -> Rat {
        let n = self.vertices.len();
        let mut acc = Rat::zero();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            acc += &(&p.0 * &q.1) - &(&p.1 * &q.0);
        }
        acc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("region serialization cannot fail")
    }

    /// CSV with header `x,y`, decimals rendered to 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for (x, y) in &self.vertices {
            out.push_str(&format!(
                "{},{}\n",
                fmt_significant(x.to_f64(), 12),
                fmt_significant(y.to_f64(), 12)
            ));
        }
        out
    }
}

/// Formats with the given number of significant digits, plain decimal.
pub fn fmt_significant(v: f64, digits: i32) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - mag);
    let rounded = (v * scale).round() / scale;
    format!("{rounded}")
}

/// The trapezoid bounded by `y = 0`, `y = height`, `y = 2x`, `y = 2 - 2x`.
pub fn theorem_11_trapezoid(height: &Rat) -> Result<RegionPolygon, RegionError> {
    if !height.is_positive() {
        return Err(RegionError::InvalidExponents(
            "trapezoid height must be positive".into(),
        ));
    }
    let half = Rat::new(1, 2);
    let vertices = vec![
        (Rat::zero(), Rat::zero()),
        (&half * height, height.clone()),
        (Rat::one() - &half * height, height.clone()),
        (Rat::one(), Rat::zero()),
    ];
    RegionPolygon::new_convex(TheoremTag::T11, Plane::SobolevPlane, vertices)
}

fn shoulder(eta_prime: &Rat) -> (Rat, Rat) {
    let beta = eta_prime / &(Rat::one() + Rat::from_int(2) * eta_prime.clone());
    let two_beta = Rat::from_int(2) * beta.clone();
    (beta, two_beta)
}

/// Polygon for `2 eta'/(1+2 eta') < eta <= 1/2`: vertices `(0,0)`,
/// `(beta, 2 beta)`, `(eta, eta)`, `(1-eta, 1-eta)`, `(1-beta, 2 beta)`,
/// `(1,0)` with `beta = eta'/(1+2 eta')`. This vertex list is not in convex
/// position: the top dips to the diagonal between its two middle vertices.
pub fn theorem_12_case1(eta: &Rat, eta_prime: &Rat) -> Result<RegionPolygon, RegionError> {
    let (beta, two_beta) = shoulder(eta_prime);
    if !(&two_beta < eta && eta <= &Rat::new(1, 2)) {
        return Err(RegionError::InvalidExponents(format!(
            "case 1 needs 2*eta'/(1+2*eta') < eta <= 1/2, got eta = {eta}, eta' = {eta_prime}"
        )));
    }
    let vertices = vec![
        (Rat::zero(), Rat::zero()),
        (beta.clone(), two_beta.clone()),
        (eta.clone(), eta.clone()),
        (Rat::one() - eta.clone(), Rat::one() - eta.clone()),
        (Rat::one() - beta, two_beta),
        (Rat::one(), Rat::zero()),
    ];
    Ok(RegionPolygon::new_simple(
        TheoremTag::T12c1,
        Plane::SobolevPlane,
        vertices,
    ))
}

/// Polygon for `2 eta'/(1+2 eta') < eta`, `eta > 1/2`: vertices `(0,0)`,
/// `(beta, 2 beta)`, `(1/2, eta)`, `(1-beta, 2 beta)`, `(1,0)`.
pub fn theorem_12_case2(eta: &Rat, eta_prime: &Rat) -> Result<RegionPolygon, RegionError> {
    let (beta, two_beta) = shoulder(eta_prime);
    if !(&two_beta < eta && eta > &Rat::new(1, 2) && eta <= &Rat::one()) {
        return Err(RegionError::InvalidExponents(format!(
            "case 2 needs 2*eta'/(1+2*eta') < eta and 1/2 < eta <= 1, got eta = {eta}, eta' = {eta_prime}"
        )));
    }
    let vertices = vec![
        (Rat::zero(), Rat::zero()),
        (beta.clone(), two_beta.clone()),
        (Rat::new(1, 2), eta.clone()),
        (Rat::one() - beta, two_beta),
        (Rat::one(), Rat::zero()),
    ];
    RegionPolygon::new_convex(TheoremTag::T12c2, Plane::SobolevPlane, vertices)
}

/// The Sobolev-plane region for the analyzed regime.
pub fn sobolev_region(report: &AnalysisReport) -> Result<RegionPolygon, RegionError> {
    let (eta, eta_prime) = match (&report.eta.value, &report.eta_prime.value) {
        (Some(e), Some(ep)) => (e, ep),
        _ => return Err(RegionError::UndeterminedRegime),
    };
    match report.regime {
        Regime::Thm11Sharp => {
            let eta1 = report.eta1.clone().expect("determined regime carries eta1");
            theorem_11_trapezoid(&eta1)
        }
        Regime::Thm12Case1 => theorem_12_case1(eta, eta_prime),
        Regime::Thm12Case2 => theorem_12_case2(eta, eta_prime),
        Regime::Undetermined => Err(RegionError::UndeterminedRegime),
    }
}

/// The fractional-linear map `(x, y) -> ((x+y)/(y+1), x/(y+1))` that carries
/// Sobolev-plane regions to Lebesgue-plane regions.
pub fn projective_map(pt: &(Rat, Rat)) -> Result<(Rat, Rat), RegionError> {
    let den = &pt.1 + &Rat::one();
    if den.is_zero() {
        return Err(RegionError::PoleError);
    }
    Ok(((&pt.0 + &pt.1) / den.clone(), &pt.0 / &den))
}

/// The Lebesgue trapezoid bounded by `y = x`, `y = x - eta/(eta+1)`,
/// `y = x/3`, and `y = 3x - 2`.
pub fn theorem_13_trapezoid(eta: &Rat) -> Result<RegionPolygon, RegionError> {
    if !eta.is_positive() {
        return Err(RegionError::InvalidExponents("eta must be positive".into()));
    }
    let two = Rat::from_int(2);
    let den = &two * &(eta + &Rat::one());
    // y = x - eta/(eta+1) meets y = x/3 and y = 3x - 2
    let v1 = (Rat::from_int(3) * eta.clone() / den.clone(), eta / &den);
    let v2 = ((eta + &two) / den.clone(), (&two - eta) / den);
    let vertices = vec![(Rat::zero(), Rat::zero()), v1, v2, (Rat::one(), Rat::one())];
    RegionPolygon::new_convex(TheoremTag::T13, Plane::LebesguePlane, vertices)
}

/// The Lebesgue-plane region for the analyzed regime: the sharp trapezoid
/// when `eta <= 2 eta'/(1+2 eta')`, otherwise the projective image of the
/// Sobolev polygon (valid vertexwise because the map is fractional-linear
/// and `y + 1 > 0` on the domain).
pub fn lebesgue_region(report: &AnalysisReport) -> Result<RegionPolygon, RegionError> {
    match report.regime {
        Regime::Thm11Sharp => {
            let eta = report
                .eta
                .value
                .clone()
                .ok_or(RegionError::UndeterminedRegime)?;
            theorem_13_trapezoid(&eta)
        }
        Regime::Thm12Case1 | Regime::Thm12Case2 => projective_image(&sobolev_region(report)?),
        Regime::Undetermined => Err(RegionError::UndeterminedRegime),
    }
}

/// Maps a Sobolev-plane region vertexwise into the Lebesgue plane.
pub fn projective_image(region: &RegionPolygon) -> Result<RegionPolygon, RegionError> {
    let vertices = region
        .vertices
        .iter()
        .map(projective_map)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RegionPolygon::new_simple(
        TheoremTag::T14,
        Plane::LebesguePlane,
        vertices,
    ))
}

/// The comparison polygon for convex finite-line-type surfaces with polygon
/// vertices `(a,0)` and `(0,b)`: vertices `(0,0)`, `(1/a, 2/a)`,
/// `(1/b, 1/a + 1/b)`, `(1 - 1/b, 1/a + 1/b)`, `(1 - 1/a, 2/a)`, `(1,0)`;
/// the slope `+-1` edges disappear when `a = b`.
pub fn isase_region(a: i64, b: i64) -> Result<RegionPolygon, RegionError> {
    if a % 2 != 0 || b % 2 != 0 || b < 2 || b > a {
        return Err(RegionError::InvalidExponents(format!(
            "need even integers 2 <= b <= a, got a = {a}, b = {b}"
        )));
    }
    let inv_a = Rat::new(1, a);
    let inv_b = Rat::new(1, b);
    let top = &inv_a + &inv_b;
    let vertices = vec![
        (Rat::zero(), Rat::zero()),
        (inv_a.clone(), Rat::from_int(2) * inv_a.clone()),
        (inv_b.clone(), top.clone()),
        (Rat::one() - inv_b, top),
        (Rat::one() - inv_a.clone(), Rat::from_int(2) * inv_a),
        (Rat::one(), Rat::zero()),
    ];
    RegionPolygon::new_convex(TheoremTag::ISaSe, Plane::SobolevPlane, vertices)
}
