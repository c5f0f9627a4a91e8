//! Structural invariants of the analysis pipeline beyond the randomized
//! acceptance families: polygon geometry, shear soundness, the
//! vertex-anchored exponent identity, serialization stability, and the
//! statistical sanity of the sublevel sampler.

mod common;

use common::*;
use newton_sobolev::newton::HitKind;
use newton_sobolev::poly::Var;
use newton_sobolev::regions::TheoremTag;
use newton_sobolev::*;
use proptest::prelude::*;

fn default_cfg() -> GrowthConfig {
    GrowthConfig::default()
}

proptest! {
    #[test]
    fn mixed_partials_commute(p in poly(6, 6)) {
        let xy = p.partial(Var::X, 1).partial(Var::Y, 1);
        let yx = p.partial(Var::Y, 1).partial(Var::X, 1);
        prop_assert_eq!(xy, yx);
    }

    /// For a linear shear the Hessian determinant commutes with the
    /// substitution outright; for higher shears the correction term is
    /// c m (m-1) x^(m-2) * (p_y p_yy) composed with the shear.
    #[test]
    fn hessian_shear_identity(p in poly(5, 5), c in rat(), m in 1u32..=4) {
        let sheared_hessian = p.shear(&c, m, ShearAxis::YByX).hessian_det();
        let hessian_sheared = p.hessian_det().shear(&c, m, ShearAxis::YByX);
        if m == 1 {
            prop_assert_eq!(sheared_hessian, hessian_sheared);
        } else {
            let factor = Rat::from_int((m * (m - 1)) as i64) * c.clone();
            let py_pyy = p.partial(Var::Y, 1).mul(&p.partial(Var::Y, 2));
            let correction = Poly2::monomial(factor, m - 2, 0)
                .mul(&py_pyy.shear(&c, m, ShearAxis::YByX));
            prop_assert_eq!(sheared_hessian, hessian_sheared.add(&correction));
        }
    }

    #[test]
    fn polygon_support_containment(p in poly_nonzero()) {
        let np = newton_polygon(&p).unwrap();
        for (a, b) in p.support() {
            prop_assert!(np.contains(&Rat::from_int(a as i64), &Rat::from_int(b as i64)));
        }
        for v in np.vertices() {
            prop_assert!(!p.coeff(v.0, v.1).is_zero(), "vertices carry support");
        }
        // (d, d) is the first diagonal point inside the polygon
        let d = np.distance();
        prop_assert!(np.contains(d, d));
        let shrunk = d - &Rat::new(1, 1000);
        prop_assert!(!np.contains(&shrunk, &shrunk));
    }

    #[test]
    fn polygon_slope_monotonicity(p in poly_nonzero()) {
        let np = newton_polygon(&p).unwrap();
        let ms: Vec<Rat> = np.compact_edges().iter().map(|e| e.m.clone()).collect();
        for w in ms.windows(2) {
            prop_assert!(w[0] > w[1], "m strictly decreases along increasing y");
        }
    }

    #[test]
    fn polygon_scaling_invariance(p in poly_nonzero(), c in rat_nonzero()) {
        let np1 = newton_polygon(&p).unwrap();
        let np2 = newton_polygon(&p.scale(&c)).unwrap();
        prop_assert_eq!(np1.vertices(), np2.vertices());
        prop_assert_eq!(np1.distance(), np2.distance());
        prop_assert_eq!(
            diagonal_classification(&np1).kind,
            diagonal_classification(&np2).kind
        );
    }

    #[test]
    fn monomial_distance_and_index(a in 0u32..=7, b in 0u32..=7, c in rat_nonzero()) {
        prop_assume!(a + b > 0);
        let p = Poly2::monomial(c, a, b);
        let np = newton_polygon(&p).unwrap();
        let d = Rat::from_int(a.max(b) as i64);
        prop_assert_eq!(np.distance(), &d);
        let gi = growth_index(&p, &default_cfg()).unwrap();
        prop_assert_eq!(gi.value, Some(d.recip()));
    }

    /// Applying the recorded shear trail to the original polynomial yields a
    /// polynomial whose index reads directly off its polygon, with the same
    /// value.
    #[test]
    fn shear_soundness(
        c in rat_nonzero(),
        m in 1u32..=4,
        n in 2u32..=4,
        swap in proptest::bool::ANY,
    ) {
        // (y - c x^m)^n, transposed half the time
        let base = Poly2::monomial(Rat::one(), 0, 1)
            .sub(&Poly2::monomial(c, m, 0));
        let mut p = Poly2::constant(Rat::one());
        for _ in 0..n {
            p = p.mul(&base);
        }
        if swap {
            p = p.transpose();
        }
        let gi = growth_index(&p, &default_cfg()).unwrap();
        prop_assert_eq!(gi.method, IndexMethod::ShearAdapted);
        prop_assert_eq!(gi.value.clone(), Some(Rat::new(1, n as i64)));
        let mut adapted = p.clone();
        for step in &gi.shears_applied {
            adapted = adapted.shear(&step.c, step.m, step.axis);
        }
        let direct = growth_index(&adapted, &default_cfg()).unwrap();
        prop_assert_eq!(direct.method, IndexMethod::NewtonDistance);
        prop_assert_eq!(direct.value, gi.value);
    }

    /// Surfaces anchored at a diagonal vertex (d, d) with everything else in
    /// the anchored quadrant satisfy eta = 1/d, eta' = 1/(2d-2), and the
    /// sharp identity eta = 2 eta'/(1 + 2 eta').
    #[test]
    fn diagonal_vertex_anchored_family(
        d in 2u32..=6,
        c in rat_nonzero(),
        extra in prop::collection::vec((0u32..=4, 0u32..=4, rat()), 0..=3),
    ) {
        let mut p = Poly2::monomial(c, d, d);
        for (da, db, coeff) in extra {
            if (da, db) != (0, 0) {
                p.add_term(d + da, d + db, coeff);
            }
        }
        let report = analyze(&p, &default_cfg()).unwrap();
        let eta = Rat::new(1, d as i64);
        let eta_prime = Rat::new(1, (2 * d - 2) as i64);
        prop_assert_eq!(report.eta.value.clone(), Some(eta.clone()));
        prop_assert_eq!(report.eta.hit.kind, HitKind::Vertex);
        prop_assert_eq!(report.eta_prime.value.clone(), Some(eta_prime.clone()));
        prop_assert_eq!(report.regime, Regime::Thm11Sharp);
        // the sharp identity, exactly
        let bound = Rat::from_int(2) * eta_prime.clone()
            / (Rat::one() + Rat::from_int(2) * eta_prime);
        prop_assert_eq!(eta, bound);
    }

    #[test]
    fn sobolev_regions_are_mirror_symmetric(h in rat_unit()) {
        let region = theorem_11_trapezoid(&h).unwrap();
        let mut mirrored: Vec<(Rat, Rat)> = region
            .vertices
            .iter()
            .map(|(x, y)| (Rat::one() - x.clone(), y.clone()))
            .collect();
        let mut original = region.vertices.clone();
        mirrored.sort();
        original.sort();
        prop_assert_eq!(original, mirrored);
    }

    #[test]
    fn case1_polygon_structure(ep_num in 1i64..=5, ep_den in 11i64..=24, t in rat_unit()) {
        // eta' < 1/2 so that the case-1 band is nonempty
        let eta_prime = Rat::new(ep_num, ep_den);
        let bound = Rat::from_int(2) * eta_prime.clone()
            / (Rat::one() + Rat::from_int(2) * eta_prime.clone());
        let eta = &bound + &(t * (Rat::new(1, 2) - bound.clone()));
        prop_assume!(eta > bound && eta <= Rat::new(1, 2));
        let region = theorem_12_case1(&eta, &eta_prime).unwrap();
        // the diagonal pair breaks full mirror symmetry, but the x
        // coordinates still come in (x, 1-x) pairs
        let mut mirrored_x: Vec<Rat> = region
            .vertices
            .iter()
            .map(|(x, _)| Rat::one() - x.clone())
            .collect();
        let mut original_x: Vec<Rat> = region.vertices.iter().map(|(x, _)| x.clone()).collect();
        mirrored_x.sort();
        original_x.sort();
        prop_assert_eq!(original_x, mirrored_x);
        // the shoulder vertices are genuine mirror images
        prop_assert!(region.vertices.contains(&(
            eta_prime.clone() / (Rat::one() + Rat::from_int(2) * eta_prime.clone()),
            bound.clone()
        )));
        // traversal is clockwise and nondegenerate
        prop_assert!(region.signed_area_doubled().is_negative());
        // strictly below 1/2 the top genuinely dips: the list is not convex
        if eta < Rat::new(1, 2) {
            prop_assert_eq!(region.vertices.len(), 6);
        }
    }

    #[test]
    fn lebesgue_regions_lie_below_diagonal(h in rat_unit()) {
        let region = theorem_13_trapezoid(&h).unwrap();
        for (x, y) in &region.vertices {
            prop_assert!(y <= x);
        }
        prop_assert!(region.signed_area_doubled().is_positive());
    }

    #[test]
    fn t11_region_grows_with_height(h1 in rat_unit(), h2 in rat_unit()) {
        prop_assume!(h1 < h2);
        let small = theorem_11_trapezoid(&h1).unwrap();
        let big = theorem_11_trapezoid(&h2).unwrap();
        for v in &small.vertices {
            prop_assert!(big.contains(v, true));
        }
        // strict growth: the top edge midpoint of the small region is
        // interior to the big one, and conversely the big top is outside
        // the small closed region.
        let mid_small = (Rat::new(1, 2), h1.clone());
        prop_assert!(big.contains(&mid_small, false));
        let mid_big = (Rat::new(1, 2), h2.clone());
        prop_assert!(!small.contains(&mid_big, true));
    }

    #[test]
    fn display_round_trips(p in poly(6, 6)) {
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), p);
    }

    /// The map eta' -> 2 eta'/(1+2 eta') is strictly increasing on (0, 1],
    /// so eta1 = min(eta, image) is monotone in both indices.
    #[test]
    fn sobolev_height_map_is_strictly_increasing(a in rat_unit(), b in rat_unit()) {
        prop_assume!(a < b);
        use newton_sobolev::exponents::sobolev_height_from_eta_prime;
        prop_assert!(sobolev_height_from_eta_prime(&a) < sobolev_height_from_eta_prime(&b));
    }
}

#[test]
fn sharpness_is_unknown_on_undetermined_indices() {
    use newton_sobolev::exponents::sharpness_verdict;
    use newton_sobolev::newton::{DiagonalHit, HitKind};
    let s = parse_poly("y^2 - 2*x^2*y + x^4").unwrap();
    let determined = growth_index(&s, &GrowthConfig::default()).unwrap();
    let undetermined = GrowthIndex {
        value: None,
        method: IndexMethod::Undetermined,
        hit: DiagonalHit {
            kind: HitKind::CompactEdgeInterior,
            edge: None,
        },
        shears_applied: vec![],
        condition_oe_le_d: Some(false),
    };
    for (eta, eta_prime) in [
        (&undetermined, &determined),
        (&determined, &undetermined),
        (&undetermined, &undetermined),
    ] {
        let verdict = sharpness_verdict(&s, eta, eta_prime);
        assert_eq!(verdict.thm11_sharp, TriState::Unknown);
        assert_eq!(verdict.thm13_sharp, TriState::Unknown);
    }
}

#[test]
fn case2_polygon_is_convex_and_symmetric() {
    let eta = Rat::new(3, 4);
    let eta_prime = Rat::new(1, 4);
    let region = theorem_12_case2(&eta, &eta_prime).unwrap();
    assert_eq!(region.theorem, TheoremTag::T12c2);
    assert_eq!(region.vertices.len(), 5);
    assert!(region.signed_area_doubled().is_negative());
    // rejects out-of-regime exponents
    assert!(theorem_12_case2(&Rat::new(1, 2), &Rat::new(1, 4)).is_err());
    assert!(theorem_12_case1(&Rat::new(3, 4), &Rat::new(1, 4)).is_err());
}

#[test]
fn report_json_round_trip_is_byte_identical() {
    for text in [
        "y^4 + x^4*y^2 + x^8",
        "y^3 + x*y^2 + x^2*y + x^3",
        "y^4 + x^8",
        "y^2 - 2*x^2*y + x^4",
    ] {
        let report = analyze(&parse_poly(text).unwrap(), &GrowthConfig::default()).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}

// ---------------------------------------------------------------------------
// sublevel sampler statistics
// ---------------------------------------------------------------------------

/// Closed-form measure of {|x^alpha y^beta| < delta} in [-r, r]^2.
fn monomial_sublevel_measure(alpha: u32, beta: u32, delta: f64, r: f64) -> f64 {
    assert!(alpha + beta > 0);
    if alpha == 0 {
        let half = delta.powf(1.0 / beta as f64).min(r);
        return 2.0 * r * 2.0 * half;
    }
    if beta == 0 {
        return monomial_sublevel_measure(beta, alpha, delta, r);
    }
    let (a, b) = (alpha as f64, beta as f64);
    if delta >= r.powf(a + b) {
        return 4.0 * r * r;
    }
    let x_c = (delta / r.powf(b)).powf(1.0 / a);
    let integral = if alpha == beta {
        delta.powf(1.0 / b) * (r / x_c).ln()
    } else {
        let e = 1.0 - a / b;
        delta.powf(1.0 / b) * (r.powf(e) - x_c.powf(e)) / e
    };
    4.0 * (r * x_c + integral)
}

fn small_cfg(sampler: Sampler) -> SublevelConfig {
    SublevelConfig {
        half_width: 1.0,
        delta_min_exp: 4,
        delta_max_exp: 12,
        samples_per_rung: 1 << 16,
        sampler,
        seed: 0,
        tolerance: 0.1,
    }
}

#[test]
fn prng_estimates_match_closed_forms_within_three_sigma() {
    for (text, alpha, beta) in [
        ("y", 0u32, 1u32),
        ("y^2", 0, 2),
        ("x*y", 1, 1),
        ("x^2*y", 2, 1),
        ("x^2*y^3", 2, 3),
    ] {
        let g = parse_poly(text).unwrap();
        let cfg = small_cfg(Sampler::Prng);
        for rung in run_ladder(&g, &cfg).unwrap() {
            let exact = monomial_sublevel_measure(alpha, beta, rung.delta, cfg.half_width);
            let slack = 3.0 * rung.std_error + 1e-9;
            assert!(
                (rung.measure - exact).abs() <= slack,
                "{text} at delta={}: est {} vs exact {} (3se = {slack})",
                rung.delta,
                rung.measure,
                exact
            );
        }
    }
}

#[test]
fn prng_ladder_is_monotone_within_noise() {
    let g = parse_poly("x*y + y^3 - x^4").unwrap();
    let cfg = small_cfg(Sampler::Prng);
    let rungs = run_ladder(&g, &cfg).unwrap();
    for w in rungs.windows(2) {
        let slack = 3.0 * (w[0].std_error + w[1].std_error);
        assert!(
            w[1].measure <= w[0].measure + slack,
            "nested sublevel sets shrink with delta"
        );
    }
}

#[test]
fn coefficient_scaling_leaves_exponent_fit_invariant() {
    for text in ["y^2", "x^2*y"] {
        let g = parse_poly(text).unwrap();
        let doubled = g.scale(&Rat::from_int(2));
        let cfg = small_cfg(Sampler::Halton);
        let fit = |q: &Poly2| {
            let rungs = run_ladder(q, &cfg).unwrap();
            fit_growth(
                &rungs
                    .iter()
                    .map(|r| (r.delta, r.measure))
                    .collect::<Vec<_>>(),
            )
            .unwrap()
            .eta_hat
        };
        let (e1, e2) = (fit(&g), fit(&doubled));
        assert!(
            (e1 - e2).abs() < 0.05,
            "{text}: eta_hat {e1} vs doubled {e2}"
        );
    }
}

#[test]
fn monomial_closed_form_ladder_fits_reciprocal_distance() {
    // the analytic sublevel measures of a monomial fit to 1/max(alpha, beta)
    for (alpha, beta) in [(0u32, 2u32), (1, 1), (2, 1), (3, 2)] {
        let rungs: Vec<(f64, f64)> = (8..=24)
            .map(|j| {
                let d = 0.5f64.powi(j);
                (d, monomial_sublevel_measure(alpha, beta, d, 1.0))
            })
            .collect();
        let fit = fit_growth(&rungs).unwrap();
        let exact = 1.0 / alpha.max(beta) as f64;
        assert!(
            (fit.eta_hat - exact).abs() < 0.05,
            "x^{alpha} y^{beta}: eta_hat = {} vs 1/max = {exact}",
            fit.eta_hat
        );
    }
}

#[test]
fn quasi_homogeneous_surface_fits_its_newton_exponent() {
    // y^2 + x^4 scales exactly: m(delta) is a pure power delta^(3/4) on the
    // unit box, so the fitted exponent matches 1/d = 3/4 tightly.
    let g = parse_poly("y^2 + x^4").unwrap();
    let np = newton_polygon(&g).unwrap();
    assert_eq!(np.distance(), &Rat::new(4, 3));
    let cfg = SublevelConfig {
        half_width: 1.0,
        delta_min_exp: 6,
        delta_max_exp: 16,
        samples_per_rung: 1 << 16,
        sampler: Sampler::Halton,
        seed: 0,
        tolerance: 0.1,
    };
    let rungs = run_ladder(&g, &cfg).unwrap();
    let fit = fit_growth(
        &rungs
            .iter()
            .map(|r| (r.delta, r.measure))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    assert!(
        (fit.eta_hat - 0.75).abs() < 0.05,
        "eta_hat = {} for exact 3/4",
        fit.eta_hat
    );
}

#[test]
fn halton_and_grid_ladders_are_reproducible() {
    let g = parse_poly("y^2 + x^4").unwrap();
    for sampler in [Sampler::Halton, Sampler::Grid] {
        let cfg = small_cfg(sampler);
        assert_eq!(run_ladder(&g, &cfg).unwrap(), run_ladder(&g, &cfg).unwrap());
    }
}
