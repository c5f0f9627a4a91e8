//! Newton polygons and the growth-index calculus.
//!
//! For a bivariate polynomial `g` vanishing at the origin, the Newton polygon
//! `N(g)` is the convex hull of the quadrants `{x >= a, y >= b}` over the
//! support of `g`. The Newton distance `d(g)` is the smallest `t` with
//! `(t,t) in N(g)`, and the sublevel growth index is `eta = 1/d(g)` whenever
//! the diagonal meets the polygon at a vertex, on one of the unbounded rays,
//! or inside a compact edge whose root order does not exceed `d(g)`. When the
//! edge-order condition fails, the offending edge necessarily has integer or
//! reciprocal-integer inverse slope, and a shear `y -> y + r x^m` (or the
//! transposed version) can remove the high-multiplicity root; iterating this
//! bounded adaptation either reaches a readable polygon or reports the index
//! as undetermined.

use serde::{Deserialize, Serialize};

use crate::poly::{Poly2, ShearAxis};
use crate::rat::Rat;
use crate::unipoly::{RootField, UniPoly, UniPolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("edge does not belong to the polygon of this polynomial")]
    EdgeMismatch,
}

/// A compact boundary edge of a Newton polygon.
///
/// `lo` is the endpoint with larger x and smaller y; `hi` the other one.
/// The slope is `-1/m` with `m > 0` rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub lo: (u32, u32),
    pub hi: (u32, u32),
    pub m: Rat,
    /// `g_e(1,y)`: the edge polynomial restricted to the segment, in `y`.
    pub edge_poly: Vec<Rat>,
    /// Maximum multiplicity of a nonzero complex root of `g_e(1,y)`.
    pub o: u32,
    /// Same, counting only real roots.
    pub o_real: u32,
}

impl Edge {
    pub fn edge_poly_y(&self) -> UniPoly {
        UniPoly::from_coeffs(self.edge_poly.clone())
    }
}

/// Where the diagonal `y = x` first meets the polygon boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HitKind {
    Vertex,
    CompactEdgeInterior,
    VerticalRayInterior,
    HorizontalRayInterior,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalHit {
    pub kind: HitKind,
    /// Present exactly when `kind` is `CompactEdgeInterior`.
    pub edge: Option<Edge>,
}

/// Newton polygon of a nonzero polynomial: vertex chain (ordered by strictly
/// increasing y), compact edges, and the Newton distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(u32, u32)>,
    compact_edges: Vec<Edge>,
    d: Rat,
}

impl NewtonPolygon {
    /// Vertices ordered by strictly increasing y (so strictly decreasing x).
    pub fn vertices(&self) -> &[(u32, u32)] {
        &self.vertices
    }

    pub fn compact_edges(&self) -> &[Edge] {
        &self.compact_edges
    }

    /// Base of the horizontal ray: the vertex with minimal y.
    pub fn horizontal_ray_base(&self) -> (u32, u32) {
        self.vertices[0]
    }

    /// Base of the vertical ray: the vertex with maximal y (minimal x).
    pub fn vertical_ray_base(&self) -> (u32, u32) {
        *self.vertices.last().unwrap()
    }

    /// Newton distance: the least `t` with `(t,t)` in the polygon.
    pub fn distance(&self) -> &Rat {
        &self.d
    }

    /// Exact membership test for the (closed, unbounded) polygon.
    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        let a_min = Rat::from_int(self.vertical_ray_base().0 as i64);
        let b_min = Rat::from_int(self.horizontal_ray_base().1 as i64);
        if x < &a_min || y < &b_min {
            return false;
        }
        self.compact_edges.iter().all(|e| {
            let c = Rat::from_int(e.lo.0 as i64) + &e.m * &Rat::from_int(e.lo.1 as i64);
            x + &(&e.m * y) >= c
        })
    }
}

/// Constructs the Newton polygon of `p`.
pub fn newton_polygon(p: &Poly2) -> Result<NewtonPolygon, NewtonError> {
    let support: Vec<(u32, u32)> = p.support().collect();
    if support.is_empty() {
        return Err(NewtonError::ZeroPolynomial);
    }

    // First vertex: minimal y, then minimal x among those.
    let start = *support
        .iter()
        .min_by_key(|&&(a, b)| (b, a))
        .expect("nonempty support");

    // Walk the lower-left chain: from the current vertex, the next one is the
    // candidate (smaller x, larger y) whose connecting edge is shallowest,
    // i.e. maximizes m = dx/dy; on ties take the farthest point.
    let mut vertices = vec![start];
    let mut cur = start;
    loop {
        let mut next: Option<(u32, u32)> = None;
        for &q in &support {
            if q.0 >= cur.0 || q.1 <= cur.1 {
                continue;
            }
            next = Some(match next {
                None => q,
                Some(best) => {
                    // m(q) ? m(best):  (cur.a-q.a)*(best.b-cur.b) vs (cur.a-best.a)*(q.b-cur.b)
                    let lhs = (cur.0 - q.0) as u64 * (best.1 - cur.1) as u64;
                    let rhs = (cur.0 - best.0) as u64 * (q.1 - cur.1) as u64;
                    if lhs > rhs || (lhs == rhs && q.1 > best.1) {
                        q
                    } else {
                        best
                    }
                }
            });
        }
        match next {
            None => break,
            Some(v) => {
                vertices.push(v);
                cur = v;
            }
        }
    }

    let compact_edges: Vec<Edge> = vertices
        .windows(2)
        .map(|w| build_edge(p, w[0], w[1]))
        .collect();

    // d = max over the facet constraints along the diagonal.
    let a_min = Rat::from_int(vertices.last().unwrap().0 as i64);
    let b_min = Rat::from_int(vertices[0].1 as i64);
    let mut d = if a_min >= b_min { a_min } else { b_min };
    for e in &compact_edges {
        let c = Rat::from_int(e.lo.0 as i64) + &e.m * &Rat::from_int(e.lo.1 as i64);
        let t = c / (Rat::one() + e.m.clone());
        if t > d {
            d = t;
        }
    }

    Ok(NewtonPolygon {
        vertices,
        compact_edges,
        d,
    })
}

fn build_edge(p: &Poly2, lo: (u32, u32), hi: (u32, u32)) -> Edge {
    let dx = lo.0 as i64 - hi.0 as i64; // > 0
    let dy = hi.1 as i64 - lo.1 as i64; // > 0
    let m = Rat::new(dx, dy);
    let mut coeffs = vec![Rat::zero(); hi.1 as usize + 1];
    for ((a, b), c) in p.terms() {
        if b < lo.1 || b > hi.1 {
            continue;
        }
        // on the segment: (lo.a - a) * dy == (b - lo.b) * dx
        if (lo.0 as i64 - a as i64) * dy == (b as i64 - lo.1 as i64) * dx {
            coeffs[b as usize] = c.clone();
        }
    }
    let edge_poly = UniPoly::from_coeffs(coeffs);
    let o = edge_order(&edge_poly, RootField::Complex).expect("edge polynomial is nonzero");
    let o_real = edge_order(&edge_poly, RootField::Real).expect("edge polynomial is nonzero");
    Edge {
        lo,
        hi,
        m,
        edge_poly: edge_poly.coeffs().to_vec(),
        o,
        o_real,
    }
}

/// Newton distance of a polygon.
pub fn newton_distance(np: &NewtonPolygon) -> Rat {
    np.distance().clone()
}

/// Classifies where `(d, d)` sits on the polygon boundary. A hit that
/// coincides with a vertex classifies as `Vertex` no matter what else is
/// incident there.
pub fn diagonal_classification(np: &NewtonPolygon) -> DiagonalHit {
    let d = np.distance().clone();
    for &(a, b) in np.vertices() {
        if a == b && Rat::from_int(a as i64) == d {
            return DiagonalHit {
                kind: HitKind::Vertex,
                edge: None,
            };
        }
    }
    if Rat::from_int(np.vertical_ray_base().0 as i64) == d {
        return DiagonalHit {
            kind: HitKind::VerticalRayInterior,
            edge: None,
        };
    }
    if Rat::from_int(np.horizontal_ray_base().1 as i64) == d {
        return DiagonalHit {
            kind: HitKind::HorizontalRayInterior,
            edge: None,
        };
    }
    for e in np.compact_edges() {
        let c = Rat::from_int(e.lo.0 as i64) + &e.m * &Rat::from_int(e.lo.1 as i64);
        if c == &d * &(Rat::one() + e.m.clone()) {
            return DiagonalHit {
                kind: HitKind::CompactEdgeInterior,
                edge: Some(e.clone()),
            };
        }
    }
    unreachable!("the diagonal point (d,d) lies on some facet by construction")
}

/// The edge polynomial `g_e(1,y)` of an edge of `newton_polygon(p)`.
pub fn edge_polynomial(p: &Poly2, e: &Edge) -> Result<UniPoly, NewtonError> {
    let np = newton_polygon(p)?;
    let own = np
        .compact_edges()
        .iter()
        .find(|candidate| candidate.lo == e.lo && candidate.hi == e.hi);
    match own {
        Some(real) if real == e => Ok(real.edge_poly_y()),
        _ => Err(NewtonError::EdgeMismatch),
    }
}

/// Maximum multiplicity of a zero of `u` away from the origin, per the chosen
/// root field; 0 when there is no such zero.
pub fn edge_order(u: &UniPoly, field: RootField) -> Result<u32, UniPolyError> {
    if u.is_zero() {
        return Err(UniPolyError::ZeroPolynomial);
    }
    let (_, stripped) = u.strip_zero_root();
    if stripped.degree() == Some(0) {
        return Ok(0);
    }
    let classes = stripped.squarefree_decomposition()?;
    let mut best = 0u32;
    for (mult, factor) in &classes {
        match field {
            RootField::Complex => best = best.max(*mult),
            RootField::Real => {
                use crate::unipoly::Bound;
                let n = factor.count_real_roots(&Bound::NegInf, &Bound::PosInf)?;
                if n > 0 {
                    best = best.max(*mult);
                }
            }
        }
    }
    Ok(best)
}

/// One applied adaptation step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearStep {
    pub c: Rat,
    pub m: u32,
    pub axis: ShearAxis,
}

/// How a growth index was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexMethod {
    NewtonDistance,
    ShearAdapted,
    Undetermined,
}

/// The growth index `eta` of a polynomial, together with the evidence that
/// produced it: the diagonal classification of the original polygon, the
/// edge-order condition there, and any shears applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthIndex {
    pub value: Option<Rat>,
    pub method: IndexMethod,
    pub hit: DiagonalHit,
    pub shears_applied: Vec<ShearStep>,
    /// `Some(o(e) <= d)` when the original hit is a compact edge interior.
    pub condition_oe_le_d: Option<bool>,
}

impl GrowthIndex {
    pub fn is_determined(&self) -> bool {
        self.value.is_some()
    }
}

/// Configuration for [`growth_index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthConfig {
    pub field: RootField,
    pub max_shears: u32,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            field: RootField::Complex,
            max_shears: 32,
        }
    }
}

fn order_for(e: &Edge, field: RootField) -> u32 {
    match field {
        RootField::Complex => e.o,
        RootField::Real => e.o_real,
    }
}

/// `g_e(x, 1)`: the edge polynomial read along x, used when the edge is
/// steeper than slope -1 and the adaptation must shear the other axis.
fn edge_poly_x(p: &Poly2, e: &Edge) -> UniPoly {
    let dx = e.lo.0 as i64 - e.hi.0 as i64;
    let dy = e.hi.1 as i64 - e.lo.1 as i64;
    let mut coeffs = vec![Rat::zero(); e.lo.0 as usize + 1];
    for ((a, b), c) in p.terms() {
        if a > e.lo.0 || a < e.hi.0 || b < e.lo.1 || b > e.hi.1 {
            continue;
        }
        if (e.lo.0 as i64 - a as i64) * dy == (b as i64 - e.lo.1 as i64) * dx {
            coeffs[a as usize] = c.clone();
        }
    }
    UniPoly::from_coeffs(coeffs)
}

/// Picks a rational root of `u` (away from zero) whose multiplicity exceeds
/// `d`; highest multiplicity first, then smallest root. Roots are extracted
/// from the square-free multiplicity classes, which keeps the factoring
/// cheap even when shears have inflated the coefficients.
fn shear_root(u: &UniPoly, d: &Rat) -> Option<(Rat, u32)> {
    let (_, stripped) = u.strip_zero_root();
    if stripped.degree().is_none_or(|deg| deg == 0) {
        return None;
    }
    let classes = stripped.squarefree_decomposition().ok()?;
    let mut best: Option<(Rat, u32)> = None;
    for (mult, factor) in classes {
        if &Rat::from_int(mult as i64) <= d {
            continue;
        }
        let (roots, _complete) = factor.rational_roots();
        for (root, _) in roots {
            let better = match &best {
                None => true,
                Some((r, m)) => mult > *m || (mult == *m && root < *r),
            };
            if better {
                best = Some((root, mult));
            }
        }
    }
    best
}

/// Computes the growth index of `p` (which must vanish at the origin).
pub fn growth_index(p: &Poly2, cfg: &GrowthConfig) -> Result<GrowthIndex, NewtonError> {
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    if !p.coeff(0, 0).is_zero() {
        return Err(NewtonError::AssumptionViolated(
            "polynomial does not vanish at the origin".into(),
        ));
    }

    let original_np = newton_polygon(p)?;
    let original_hit = diagonal_classification(&original_np);
    let condition = original_hit
        .edge
        .as_ref()
        .map(|e| Rat::from_int(order_for(e, cfg.field) as i64) <= *original_np.distance());

    let mut work = p.clone();
    let mut trail: Vec<ShearStep> = Vec::new();

    loop {
        let np = if trail.is_empty() {
            original_np.clone()
        } else {
            newton_polygon(&work)?
        };
        let hit = diagonal_classification(&np);
        let d = np.distance().clone();

        let settled = match &hit.edge {
            None => true,
            Some(e) => Rat::from_int(order_for(e, cfg.field) as i64) <= d,
        };
        if settled {
            return Ok(GrowthIndex {
                value: Some(d.recip()),
                method: if trail.is_empty() {
                    IndexMethod::NewtonDistance
                } else {
                    IndexMethod::ShearAdapted
                },
                hit: original_hit,
                shears_applied: trail,
                condition_oe_le_d: condition,
            });
        }
        if trail.len() as u32 >= cfg.max_shears {
            break;
        }

        let e = hit.edge.as_ref().expect("unsettled hit is an edge");
        // The offending edge has m or 1/m integer; otherwise no adaptation
        // applies and the index is undetermined from this calculus.
        let step = if e.m.is_integer() {
            let m = e.m.to_i64().and_then(|v| u32::try_from(v).ok());
            m.and_then(|m| {
                shear_root(&e.edge_poly_y(), &d).map(|(r, _)| ShearStep {
                    c: r,
                    m,
                    axis: ShearAxis::YByX,
                })
            })
        } else if e.m.recip().is_integer() {
            let m = e.m.recip().to_i64().and_then(|v| u32::try_from(v).ok());
            m.and_then(|m| {
                shear_root(&edge_poly_x(&work, e), &d).map(|(r, _)| ShearStep {
                    c: r,
                    m,
                    axis: ShearAxis::XByY,
                })
            })
        } else {
            None
        };

        match step {
            None => break,
            Some(step) => {
                work = work.shear(&step.c, step.m, step.axis);
                if work.is_zero() {
                    // cannot happen for a polynomial vanishing at the origin
                    // with nonzero edge terms, but guard anyway
                    break;
                }
                trail.push(step);
            }
        }
    }

    Ok(GrowthIndex {
        value: None,
        method: IndexMethod::Undetermined,
        hit: original_hit,
        shears_applied: trail,
        condition_oe_le_d: condition,
    })
}

/// Re-export of the Sturm-based counter at the module surface.
pub fn real_root_count(
    u: &UniPoly,
    lo: &crate::unipoly::Bound,
    hi: &crate::unipoly::Bound,
) -> Result<usize, UniPolyError> {
    u.count_real_roots(lo, hi)
}
