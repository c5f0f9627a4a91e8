//! Exact analysis of bivariate polynomial surface graphs: Newton polygons,
//! sublevel growth indices, and the sharp Sobolev / Lebesgue boundedness
//! regions of the associated averaging operator, plus a Monte Carlo sublevel
//! engine that verifies the exact exponents numerically.

pub mod exponents;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod regions;
pub mod sublevel;
pub mod unipoly;

pub use exponents::{
    analyze, check_assumptions, hessian_index, AnalysisReport, AnalyzeError, Assumptions, Regime,
    SharpnessVerdict, TriState,
};
pub use newton::{
    diagonal_classification, edge_order, growth_index, newton_distance, newton_polygon,
    real_root_count, DiagonalHit, Edge, GrowthConfig, GrowthIndex, HitKind, IndexMethod,
    NewtonError, NewtonPolygon, ShearStep,
};
pub use parse::{parse_poly, ParseError};
pub use poly::{Poly2, ShearAxis, Var};
pub use rat::Rat;
pub use regions::{
    isase_region, lebesgue_region, projective_image, projective_map, sobolev_region,
    theorem_11_trapezoid, theorem_12_case1, theorem_12_case2, theorem_13_trapezoid, Plane,
    RegionError, RegionPolygon, TheoremTag,
};
pub use sublevel::{
    estimate, fit_growth, run_ladder, sublevel_measure, verify_indices, FitGrowth, Rung, Sampler,
    SublevelConfig, SublevelError, SublevelEstimate, TargetVerification, VerificationReport,
};
pub use unipoly::{Bound, RootField, UniPoly, UniPolyError};
