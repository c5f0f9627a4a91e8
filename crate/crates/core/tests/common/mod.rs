//! Shared proptest strategies for the integration test suites.
#![allow(dead_code)] // each test binary uses its own subset

use newton_sobolev::{Poly2, Rat};
use proptest::prelude::*;

pub fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d))
}

pub fn rat_nonzero() -> impl Strategy<Value = Rat> {
    rat().prop_filter("nonzero", |r| !r.is_zero())
}

/// A rational in (0, 1].
pub fn rat_unit() -> impl Strategy<Value = Rat> {
    (1i64..=12).prop_flat_map(|d| (1i64..=d).prop_map(move |n| Rat::new(n, d)))
}

pub fn poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=max_exp, 0..=max_exp, rat()), 0..=max_terms).prop_map(|terms| {
        let mut p = Poly2::zero();
        for (a, b, c) in terms {
            p.add_term(a, b, c);
        }
        p
    })
}

pub fn poly_nonzero() -> impl Strategy<Value = Poly2> {
    poly(6, 6).prop_filter("nonzero", |p| !p.is_zero())
}

/// Nonzero polynomial vanishing at the origin.
pub fn poly_vanishing() -> impl Strategy<Value = Poly2> {
    poly(6, 6)
        .prop_map(|p| {
            let c = p.coeff(0, 0);
            if c.is_zero() {
                p
            } else {
                p.sub(&Poly2::constant(c))
            }
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn unipoly() -> impl Strategy<Value = newton_sobolev::UniPoly> {
    prop::collection::vec(rat(), 1..=7)
        .prop_map(newton_sobolev::UniPoly::from_coeffs)
        .prop_filter("nonzero", |u| !u.is_zero())
}
