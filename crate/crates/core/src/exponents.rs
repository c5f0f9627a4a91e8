//! The exponent dichotomy: combines the growth index of the surface with the
//! growth index of its Hessian determinant, checks the standing hypotheses,
//! and renders the sharpness verdict.

use serde::{Deserialize, Serialize};

use crate::newton::{
    diagonal_classification, growth_index, newton_polygon, GrowthConfig, GrowthIndex, HitKind,
    NewtonError,
};
use crate::poly::{Poly2, Var};
use crate::rat::Rat;

/// Standing hypotheses on the surface polynomial, each checked exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumptions {
    pub s_zero_at_origin: bool,
    pub gradient_zero: bool,
    pub hessian_zero_at_origin: bool,
    pub hessian_not_identically_zero: bool,
    pub s_not_identically_zero: bool,
}

impl Assumptions {
    pub fn all_pass(&self) -> bool {
        self.s_zero_at_origin
            && self.gradient_zero
            && self.hessian_zero_at_origin
            && self.hessian_not_identically_zero
            && self.s_not_identically_zero
    }

    /// Names of the flags that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.s_zero_at_origin {
            out.push("s_zero_at_origin");
        }
        if !self.gradient_zero {
            out.push("gradient_zero");
        }
        if !self.hessian_zero_at_origin {
            out.push("hessian_zero_at_origin");
        }
        if !self.hessian_not_identically_zero {
            out.push("hessian_not_identically_zero");
        }
        if !self.s_not_identically_zero {
            out.push("s_not_identically_zero");
        }
        out
    }
}

/// Which boundedness statement governs the exponent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `eta <= 2 eta' / (1 + 2 eta')`: the height-`eta1` trapezoid is sharp
    /// up to endpoints.
    Thm11Sharp,
    /// `2 eta' / (1 + 2 eta') < eta <= 1/2`.
    Thm12Case1,
    /// `2 eta' / (1 + 2 eta') < eta` and `eta > 1/2`.
    Thm12Case2,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

/// Sharpness of the two region theorems for the analyzed surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessVerdict {
    pub thm11_sharp: TriState,
    pub thm13_sharp: TriState,
    pub reasons: Vec<String>,
}

/// Full analysis of one surface polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub eta: GrowthIndex,
    pub eta_prime: GrowthIndex,
    /// `min(eta, 2 eta' / (1 + 2 eta'))`; present iff both indices are.
    pub eta1: Option<Rat>,
    pub regime: Regime,
    pub assumptions: Assumptions,
    pub sharpness: SharpnessVerdict,
}

impl AnalysisReport {
    /// `2 eta' / (1 + 2 eta')` when `eta'` is determined.
    pub fn hessian_bound(&self) -> Option<Rat> {
        self.eta_prime
            .value
            .as_ref()
            .map(sobolev_height_from_eta_prime)
    }
}

/// The map `eta' -> 2 eta' / (1 + 2 eta')`.
pub fn sobolev_height_from_eta_prime(eta_prime: &Rat) -> Rat {
    let two = Rat::from_int(2);
    let num = &two * eta_prime;
    let den = Rat::one() + &two * eta_prime;
    num / den
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyzeError {
    #[error("assumption violated: {}", failed.join(", "))]
    AssumptionViolated {
        failed: Vec<&'static str>,
        assumptions: Assumptions,
    },
    #[error("growth index undetermined for {target}")]
    UndeterminedIndex {
        target: &'static str,
        report: Box<AnalysisReport>,
    },
    #[error("hessian determinant is identically zero")]
    HessianIdenticallyZero,
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

/// Evaluates the standing hypotheses exactly. Flags, not failures.
pub fn check_assumptions(s: &Poly2) -> Assumptions {
    let h = s.hessian_det();
    Assumptions {
        s_zero_at_origin: s.coeff(0, 0).is_zero(),
        gradient_zero: s.partial(Var::X, 1).coeff(0, 0).is_zero()
            && s.partial(Var::Y, 1).coeff(0, 0).is_zero(),
        hessian_zero_at_origin: h.coeff(0, 0).is_zero(),
        hessian_not_identically_zero: !h.is_zero(),
        s_not_identically_zero: !s.is_zero(),
    }
}

/// Growth index of the Hessian determinant of `s`.
pub fn hessian_index(s: &Poly2, cfg: &GrowthConfig) -> Result<GrowthIndex, AnalyzeError> {
    let h = s.hessian_det();
    if h.is_zero() {
        return Err(AnalyzeError::HessianIdenticallyZero);
    }
    Ok(growth_index(&h, cfg)?)
}

/// Runs the full exponent analysis of a surface polynomial.
pub fn analyze(s: &Poly2, cfg: &GrowthConfig) -> Result<AnalysisReport, AnalyzeError> {
    let assumptions = check_assumptions(s);
    if !assumptions.all_pass() {
        return Err(AnalyzeError::AssumptionViolated {
            failed: assumptions.failures(),
            assumptions,
        });
    }

    let eta = growth_index(s, cfg)?;
    let eta_prime = hessian_index(s, cfg)?;

    let (eta1, regime) = match (&eta.value, &eta_prime.value) {
        (Some(e), Some(ep)) => {
            let bound = sobolev_height_from_eta_prime(ep);
            let eta1 = if e <= &bound {
                e.clone()
            } else {
                bound.clone()
            };
            let regime = if e <= &bound {
                Regime::Thm11Sharp
            } else if e <= &Rat::new(1, 2) {
                Regime::Thm12Case1
            } else {
                Regime::Thm12Case2
            };
            (Some(eta1), regime)
        }
        _ => (None, Regime::Undetermined),
    };

    let sharpness = sharpness_verdict(s, &eta, &eta_prime);
    let report = AnalysisReport {
        eta,
        eta_prime,
        eta1,
        regime,
        assumptions,
        sharpness,
    };

    if !report.eta.is_determined() {
        return Err(AnalyzeError::UndeterminedIndex {
            target: "S",
            report: Box::new(report),
        });
    }
    if !report.eta_prime.is_determined() {
        return Err(AnalyzeError::UndeterminedIndex {
            target: "H",
            report: Box::new(report),
        });
    }
    Ok(report)
}

/// Sharpness of the trapezoid theorems for this surface.
///
/// The height-`eta1` Sobolev trapezoid is sharp up to endpoints exactly when
/// `eta <= 2 eta' / (1 + 2 eta')`. The Lebesgue trapezoid additionally needs
/// the diagonal to meet `N(S)` at a vertex, on a ray, or inside a compact
/// edge whose order is at most `d(S)`.
pub fn sharpness_verdict(
    s: &Poly2,
    eta: &GrowthIndex,
    eta_prime: &GrowthIndex,
) -> SharpnessVerdict {
    let mut reasons = Vec::new();

    let thm11 = match (&eta.value, &eta_prime.value) {
        (Some(e), Some(ep)) => {
            let bound = sobolev_height_from_eta_prime(ep);
            if e <= &bound {
                reasons.push(format!("eta = {e} <= 2*eta'/(1+2*eta') = {bound}"));
                TriState::Yes
            } else {
                reasons.push(format!("eta = {e} > 2*eta'/(1+2*eta') = {bound}"));
                TriState::No
            }
        }
        _ => {
            reasons.push("a growth index is undetermined".into());
            TriState::Unknown
        }
    };

    let polygon_condition = match newton_polygon(s) {
        Err(_) => None,
        Ok(np) => {
            let hit = diagonal_classification(&np);
            match hit.kind {
                HitKind::Vertex | HitKind::VerticalRayInterior | HitKind::HorizontalRayInterior => {
                    reasons.push(format!("diagonal meets N(S) at a {:?}", hit.kind));
                    Some(true)
                }
                HitKind::CompactEdgeInterior => {
                    let e = hit.edge.as_ref().expect("edge hit carries its edge");
                    let d = np.distance();
                    let o = Rat::from_int(e.o as i64);
                    if &o <= d {
                        reasons.push(format!("diagonal edge has o(e) = {} <= d(S) = {d}", e.o));
                        Some(true)
                    } else {
                        reasons.push(format!("diagonal edge has o(e) = {} > d(S) = {d}", e.o));
                        Some(false)
                    }
                }
            }
        }
    };

    let thm13 = match (thm11, polygon_condition) {
        (TriState::Unknown, _) | (_, None) => TriState::Unknown,
        (TriState::Yes, Some(true)) => TriState::Yes,
        _ => TriState::No,
    };

    // The verdict conditions on N(S) only; when the diagonal also meets a
    // compact edge of N(H), record that edge's order condition for context.
    if let Some(cond) = eta_prime.condition_oe_le_d {
        reasons.push(format!(
            "informational: hessian diagonal edge satisfies o(e') <= d(H): {cond}"
        ));
    }

    SharpnessVerdict {
        thm11_sharp: thm11,
        thm13_sharp: thm13,
        reasons,
    }
}
