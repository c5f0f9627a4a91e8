//! Sparse bivariate polynomials over exact rationals.
//!
//! `Poly2` is the substrate for everything: the surface `S(t1,t2)`, its
//! Hessian determinant `H`, adapted shears, and edge restrictions. Terms are
//! kept in a sorted map from exponent pairs to nonzero coefficients; every
//! operation re-canonicalizes so that support queries are reliable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::rat::Rat;

/// Which variable a univariate operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Axis of a shear substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ShearAxis {
    /// `y -> y + c * x^m`, i.e. the polynomial becomes `p(x, y + c x^m)`.
    #[serde(rename = "y_by_x")]
    YByX,
    /// `x -> x + c * y^m`.
    #[serde(rename = "x_by_y")]
    XByY,
}

/// Sparse bivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero; the zero polynomial has an
/// empty term map.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly2::zero();
        p.add_term(0, 0, c);
        p
    }

    /// Single term `c * x^a * y^b`.
    pub fn monomial(c: Rat, a: u32, b: u32) -> Self {
        let mut p = Poly2::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Exponent pairs carrying nonzero coefficients, in ascending `(a, b)` order.
    pub fn support(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rat)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `c * x^a y^b`, dropping the slot if the sum cancels.
    pub fn add_term(&mut self, a: u32, b: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, b)).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, -c);
        }
        out
    }

    pub fn neg(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a, b), c) in self.terms() {
            out.add_term(a, b, -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a1, b1), c1) in self.terms() {
            for ((a2, b2), c2) in other.terms() {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a, b), k) in self.terms() {
            out.add_term(a, b, c * k);
        }
        out
    }

    /// Iterated exact partial derivative.
    pub fn partial(&self, var: Var, order: u32) -> Poly2 {
        let mut cur = self.clone();
        for _ in 0..order {
            let mut next = Poly2::zero();
            for ((a, b), c) in cur.terms() {
                match var {
                    Var::X if a > 0 => {
                        next.add_term(a - 1, b, c * &Rat::from_int(a as i64));
                    }
                    Var::Y if b > 0 => {
                        next.add_term(a, b - 1, c * &Rat::from_int(b as i64));
                    }
                    _ => {}
                }
            }
            cur = next;
        }
        cur
    }

    /// Hessian determinant `p_xx * p_yy - p_xy^2`, exact.
    pub fn hessian_det(&self) -> Poly2 {
        let pxx = self.partial(Var::X, 2);
        let pyy = self.partial(Var::Y, 2);
        let pxy = self.partial(Var::X, 1).partial(Var::Y, 1);
        pxx.mul(&pyy).sub(&pxy.mul(&pxy))
    }

    /// Shear substitution: `p(x, y + c x^m)` for [`ShearAxis::YByX`],
    /// `p(x + c y^m, y)` for [`ShearAxis::XByY`]. Exact binomial expansion.
    pub fn shear(&self, c: &Rat, m: u32, axis: ShearAxis) -> Poly2 {
        assert!(m >= 1, "shear exponent must be positive");
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Poly2::zero();
        for ((a, b), coeff) in self.terms() {
            let e = match axis {
                ShearAxis::YByX => b,
                ShearAxis::XByY => a,
            };
            // (v + c u^m)^e = sum_k C(e,k) v^k c^(e-k) u^(m(e-k))
            let mut c_pow = Rat::one();
            for k in (0..=e).rev() {
                let bin: BigInt = binomial(BigInt::from(e), BigInt::from(k));
                let term_c = coeff * &(Rat::from(bin) * c_pow.clone());
                match axis {
                    ShearAxis::YByX => out.add_term(a + m * (e - k), k, term_c),
                    ShearAxis::XByY => out.add_term(k, b + m * (e - k), term_c),
                }
                c_pow *= c.clone();
            }
        }
        out
    }

    /// Swaps the roles of x and y.
    pub fn transpose(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a, b), c) in self.terms() {
            out.add_term(b, a, c.clone());
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rat(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for ((a, b), c) in self.terms() {
            acc += c * &(x.pow(a) * y.pow(b));
        }
        acc
    }

    /// Compiles the coefficients to f64 once for fast repeated evaluation.
    pub fn compile_f64(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms()
                .map(|((a, b), c)| (c.to_f64(), a as i32, b as i32))
                .collect(),
        }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.compile_f64().eval(x, y)
    }

    /// Minimal total degree over the support (the vanishing order at the
    /// origin), or `None` for the zero polynomial.
    pub fn vanishing_order(&self) -> Option<u32> {
        self.support().map(|(a, b)| a + b).min()
    }
}

/// f64 view of a polynomial for the sublevel sampler's inner loop.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, i32, i32)>,
}

impl CompiledPoly {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for &(c, a, b) in &self.terms {
            acc += c * x.powi(a) * y.powi(b);
        }
        acc
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending y-degree, then descending x-degree: reparsable and stable.
        let mut keys: Vec<(u32, u32)> = self.support().collect();
        keys.sort_by_key(|&(a, b)| (std::cmp::Reverse(b), std::cmp::Reverse(a)));
        let mut first = true;
        for (a, b) in keys {
            let c = self.coeff(a, b);
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != Rat::one() || (a == 0 && b == 0) {
                parts.push(mag.to_string());
            }
            if a > 0 {
                parts.push(if a == 1 { "x".into() } else { format!("x^{a}") });
            }
            if b > 0 {
                parts.push(if b == 1 { "y".into() } else { format!("y^{b}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly2 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn add_cancels() {
        assert!(p("x^2").add(&p("-x^2")).is_zero());
    }

    #[test]
    fn mul_identity_and_square() {
        let q = p("3/4*x^2*y - 7*y^3 + 1");
        assert_eq!(q.mul(&Poly2::constant(Rat::one())), q);
        // (y - x^2)^2 = y^2 - 2 x^2 y + x^4
        let s = p("y - x^2");
        assert_eq!(s.mul(&s), p("y^2 - 2*x^2*y + x^4"));
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(p("y^4").partial(Var::Y, 2), p("12*y^2"));
        assert_eq!(p("x^8").partial(Var::X, 2), p("56*x^6"));
        assert_eq!(p("5").partial(Var::X, 1), Poly2::zero());
        // mixed partials commute
        let q = p("x^3*y^2 - 2*x*y^5 + x");
        assert_eq!(
            q.partial(Var::X, 1).partial(Var::Y, 1),
            q.partial(Var::Y, 1).partial(Var::X, 1)
        );
    }

    #[test]
    fn hessian_example_values() {
        // S = y^n + a x y^n gives H = -a^2 n^2 y^(2n-2); here n = 3, a = 2.
        let s = p("y^3 + 2*x*y^3");
        assert_eq!(s.hessian_det(), p("-36*y^4"));
        // monomial closed form: c^2 ab(1-a-b) x^(2a-2) y^(2b-2)
        let m = p("3*x^2*y^3");
        assert_eq!(m.hessian_det(), p("-216*x^2*y^4"));
    }

    #[test]
    fn hessian_example1_family() {
        for a in [Rat::from_int(1), Rat::from_int(2), Rat::new(1, 2)] {
            let s = p("y^4 + x^8").add(&Poly2::monomial(a.clone(), 4, 2));
            let mut expect = Poly2::zero();
            expect.add_term(2, 4, Rat::from_int(144) * a.clone());
            expect.add_term(
                6,
                2,
                Rat::from_int(672) - Rat::from_int(40) * a.clone() * a.clone(),
            );
            expect.add_term(10, 0, Rat::from_int(112) * a.clone());
            assert_eq!(s.hessian_det(), expect);
        }
    }

    #[test]
    fn shear_examples() {
        let s = p("y - x^2").mul(&p("y - x^2"));
        assert_eq!(s.shear(&Rat::one(), 2, ShearAxis::YByX), p("y^2"));
        let q = p("x^3*y - 5*y^2");
        assert_eq!(q.shear(&Rat::zero(), 3, ShearAxis::YByX), q);
        assert_eq!(
            p("y^3 + x^3").shear(&Rat::one(), 1, ShearAxis::YByX),
            p("y^3 + 3*x*y^2 + 3*x^2*y + 2*x^3")
        );
        // x-axis shear: (x + y^2)^2 substituted into x^2
        assert_eq!(
            p("x^2").shear(&Rat::one(), 2, ShearAxis::XByY),
            p("x^2 + 2*x*y^2 + y^4")
        );
    }

    #[test]
    fn evaluation() {
        assert_eq!(
            p("y^4 + x^8").eval_rat(&Rat::one(), &Rat::one()),
            Rat::from_int(2)
        );
        assert_eq!(
            p("144*x^2*y^4 + 632*x^6*y^2 + 112*x^10").eval_rat(&Rat::one(), &Rat::one()),
            Rat::from_int(888)
        );
        assert_eq!(
            Poly2::zero().eval_rat(&Rat::new(5, 7), &Rat::new(-3, 2)),
            Rat::zero()
        );
        let c = p("x*y - 2").compile_f64();
        assert_eq!(c.eval(3.0, 4.0), 10.0);
    }

    #[test]
    fn display_reparses() {
        let q = p("-1/2*x^10 + 144*x^2*y^4 - y + 3");
        assert_eq!(parse_poly(&q.to_string()).unwrap(), q);
        assert_eq!(Poly2::zero().to_string(), "0");
    }
}
