//! Dense univariate polynomials over exact rationals.
//!
//! Edge polynomials `g_e(1,y)` are low degree, so a dense coefficient list
//! with plain Euclidean algorithms is plenty. This module carries the root
//! machinery the Newton-polygon calculus needs: square-free (Yun)
//! decomposition for multiplicity classes, Sturm sequences for exact real
//! root counting, and rational root extraction for adapted shears.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

/// Whether root multiplicities are counted over the complex numbers or only
/// at real roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootField {
    Complex,
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniPolyError {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not square-free")]
    NotSquareFree,
}

/// Dense univariate polynomial; `coeffs[i]` multiplies `y^i`.
/// Invariant: the leading coefficient is nonzero unless the list is empty.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

/// An interval bound for real root counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(Rat),
    PosInf,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// `c * y^n`.
    pub fn monomial(c: Rat, n: usize) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = c;
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rat::from_int(i as i64))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|k| k * c).collect())
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rat::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            while rem.last().is_some_and(Rat::is_zero) {
                rem.pop();
            }
            if rem.len() <= d {
                break;
            }
            let shift = rem.len() - 1 - d;
            let factor = rem.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let delta = c * &factor;
                rem[shift + i] -= delta;
            }
            quo[shift] = factor;
            rem.pop();
        }
        (UniPoly::from_coeffs(quo), UniPoly::from_coeffs(rem))
    }

    /// Divides the leading coefficient out.
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Splits off the largest power of `y` dividing the polynomial.
    /// Returns `(k, q)` with `self = y^k * q` and `q(0) != 0`.
    pub fn strip_zero_root(&self) -> (usize, UniPoly) {
        if self.is_zero() {
            return (0, UniPoly::zero());
        }
        let k = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero polynomial has a nonzero coefficient");
        (k, UniPoly::from_coeffs(self.coeffs[k..].to_vec()))
    }

    /// Yun's square-free decomposition: returns `(multiplicity, factor)`
    /// pairs with each factor square-free of positive degree, so that the
    /// input equals `lead * prod factor_i^multiplicity_i`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(u32, UniPoly)>, UniPolyError> {
        if self.is_zero() {
            return Err(UniPolyError::ZeroPolynomial);
        }
        let f = self.monic();
        if f.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let g = f.gcd(&df);
        let mut out = Vec::new();
        let mut c = f.div_rem(&g).0;
        let mut d = df.div_rem(&g).0.sub(&c.derivative());
        let mut i = 1u32;
        while c.degree().is_some_and(|deg| deg > 0) {
            let a = c.gcd(&d);
            if a.degree().is_some_and(|deg| deg > 0) {
                out.push((i, a.clone()));
            }
            c = c.div_rem(&a).0;
            d = d.div_rem(&a).0.sub(&c.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// Sign of the polynomial at a bound (for Sturm evaluation); `0` when the
    /// value vanishes.
    fn sign_at(&self, bound: &Bound) -> i8 {
        match bound {
            Bound::At(x) => {
                let v = self.eval(x);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Bound::PosInf => match self.leading() {
                None => 0,
                Some(l) => {
                    if l.is_positive() {
                        1
                    } else {
                        -1
                    }
                }
            },
            Bound::NegInf => match self.leading() {
                None => 0,
                Some(l) => {
                    let deg_odd = self.degree().unwrap() % 2 == 1;
                    let s = if l.is_positive() { 1 } else { -1 };
                    if deg_odd {
                        -s
                    } else {
                        s
                    }
                }
            },
        }
    }

    /// Exact number of distinct real roots in `(lo, hi]` of a square-free
    /// polynomial, by Sturm's theorem.
    pub fn count_real_roots(&self, lo: &Bound, hi: &Bound) -> Result<usize, UniPolyError> {
        if self.is_zero() {
            return Err(UniPolyError::ZeroPolynomial);
        }
        if self.gcd(&self.derivative()).degree().is_some_and(|d| d > 0) {
            return Err(UniPolyError::NotSquareFree);
        }
        if self.degree() == Some(0) {
            return Ok(0);
        }
        // Sturm chain: p0 = f, p1 = f', p_{i+1} = -rem(p_{i-1}, p_i)
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&Rat::from_int(-1)));
        }
        let variations = |b: &Bound| {
            let mut count = 0usize;
            let mut prev = 0i8;
            for p in &chain {
                let s = p.sign_at(b);
                if s == 0 {
                    continue;
                }
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
            count
        };
        let vl = variations(lo);
        let vh = variations(hi);
        Ok(vl.saturating_sub(vh))
    }

    /// Clears denominators and content: returns integer coefficients with
    /// gcd 1, up to sign equal to the input times a positive rational.
    fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        ints.iter().map(|v| v / &content).collect()
    }

    /// All rational roots with multiplicities. Requires a nonzero constant
    /// term (strip `y^k` first). Returns roots sorted ascending.
    ///
    /// Divisor enumeration uses trial division with a bail-out; the returned
    /// `complete` flag is false when a huge coefficient could not be fully
    /// factored or the candidate set was truncated (candidates may then be
    /// missing, never wrong).
    pub fn rational_roots(&self) -> (Vec<(Rat, u32)>, bool) {
        const MAX_DIVISORS: usize = 64;
        if self.is_zero() || self.degree() == Some(0) {
            return (Vec::new(), true);
        }
        debug_assert!(!self.coeff(0).is_zero(), "strip zero roots first");
        let ints = self.primitive_integer_coeffs();
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        let (mut num_divs, c1) = divisors(&a0);
        let (mut den_divs, c2) = divisors(&an);
        let mut complete = c1 && c2;
        if num_divs.len() > MAX_DIVISORS {
            num_divs.truncate(MAX_DIVISORS);
            complete = false;
        }
        if den_divs.len() > MAX_DIVISORS {
            den_divs.truncate(MAX_DIVISORS);
            complete = false;
        }
        let mut roots = Vec::new();
        for p in &num_divs {
            for q in &den_divs {
                if p.gcd(q) != BigInt::one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = Rat::from_big(p * BigInt::from(sign), q.clone());
                    if !self.eval(&cand).is_zero() {
                        continue;
                    }
                    let mult = self.root_multiplicity(&cand);
                    debug_assert!(mult > 0);
                    roots.push((cand, mult));
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        roots.dedup_by(|a, b| a.0 == b.0);
        (roots, complete)
    }

    /// Exact multiplicity of `r` as a root (0 when not a root).
    pub fn root_multiplicity(&self, r: &Rat) -> u32 {
        let divisor = UniPoly::from_coeffs(vec![-r, Rat::one()]);
        let mut mult = 0;
        let mut cur = self.clone();
        loop {
            if cur.degree().is_none_or(|d| d == 0) {
                return mult;
            }
            let (q, rem) = cur.div_rem(&divisor);
            if rem.is_zero() {
                mult += 1;
                cur = q;
            } else {
                return mult;
            }
        }
    }
}

/// All positive divisors of `n` (which must be positive), via trial division
/// entirely in u64. The boolean is false when the number was too large to
/// factor completely, in which case the list may be incomplete (candidates
/// can be missed, never invented).
fn divisors(n: &BigInt) -> (Vec<BigInt>, bool) {
    use num_traits::ToPrimitive;
    debug_assert!(n.is_positive());
    let Some(mut rest) = n.to_u64() else {
        return (vec![BigInt::one()], false);
    };
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut complete = true;
    let mut p: u64 = 2;
    while p <= 65_536 && p * p <= rest {
        let mut k = 0u32;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if k > 0 {
            factors.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        // no prime factor <= 65536, so rest is prime when below 2^32
        if rest < (1u64 << 32) || p * p > rest {
            factors.push((rest, 1));
        } else {
            complete = false;
        }
    }
    let mut divs: Vec<u64> = vec![1];
    for (prime, k) in factors {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for &d in &divs {
            let mut pw = 1u64;
            for i in 0..=k {
                next.push(d.saturating_mul(pw));
                if i < k {
                    match pw.checked_mul(prime) {
                        Some(v) => pw = v,
                        None => break,
                    }
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        divs = next;
    }
    (divs.into_iter().map(BigInt::from).collect(), complete)
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != Rat::one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "y")?;
                } else {
                    write!(f, "y^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (y+1)(y^2+1) = y^3 + y^2 + y + 1
        let f = up(&[1, 1, 1, 1]);
        let (q, r) = f.div_rem(&up(&[1, 1]));
        assert_eq!(q, up(&[1, 0, 1]));
        assert!(r.is_zero());
        let g = up(&[1, 0, 1]).mul(&up(&[-2, 1]));
        assert_eq!(f.gcd(&g), up(&[1, 0, 1]).monic());
    }

    #[test]
    fn squarefree_classes() {
        // (y^2+1)^2: one class of multiplicity 2
        let f = up(&[1, 0, 1]).mul(&up(&[1, 0, 1]));
        let classes = f.squarefree_decomposition().unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].0, 2);
        assert_eq!(classes[0].1, up(&[1, 0, 1]));

        // (y+1)(y-2)^3
        let f = up(&[1, 1]).mul(&up(&[-2, 1]).mul(&up(&[-2, 1])).mul(&up(&[-2, 1])));
        let classes = f.squarefree_decomposition().unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0], (1, up(&[1, 1])));
        assert_eq!(classes[1], (3, up(&[-2, 1])));
    }

    #[test]
    fn sturm_counts() {
        let inf = (Bound::NegInf, Bound::PosInf);
        assert_eq!(up(&[1, 0, 1]).count_real_roots(&inf.0, &inf.1).unwrap(), 0);
        assert_eq!(
            up(&[-2, 0, 1])
                .count_real_roots(&Bound::At(Rat::zero()), &Bound::PosInf)
                .unwrap(),
            1
        );
        assert_eq!(
            up(&[1, 1, 1, 1])
                .count_real_roots(&Bound::NegInf, &Bound::At(Rat::zero()))
                .unwrap(),
            1
        );
        // not square-free is rejected
        let sq = up(&[1, 1]).mul(&up(&[1, 1]));
        assert_eq!(
            sq.count_real_roots(&inf.0, &inf.1),
            Err(UniPolyError::NotSquareFree)
        );
    }

    #[test]
    fn rational_root_extraction() {
        // 6y^3 + y^2 - y  -> y(3y - 1)(2y + 1); strip then roots 1/3, -1/2
        let f = up(&[0, -1, 1, 6]);
        let (k, stripped) = f.strip_zero_root();
        assert_eq!(k, 1);
        let (roots, complete) = stripped.rational_roots();
        assert!(complete);
        assert_eq!(roots, vec![(Rat::new(-1, 2), 1), (Rat::new(1, 3), 1)]);
        // (y-1)^2 (y+3)
        let f = up(&[-1, 1]).mul(&up(&[-1, 1])).mul(&up(&[3, 1]));
        let (roots, _) = f.rational_roots();
        assert_eq!(roots, vec![(Rat::from_int(-3), 1), (Rat::from_int(1), 2)]);
    }

    #[test]
    fn multiplicity() {
        let f = up(&[-1, 1]).mul(&up(&[-1, 1])).mul(&up(&[1, 1]));
        assert_eq!(f.root_multiplicity(&Rat::one()), 2);
        assert_eq!(f.root_multiplicity(&Rat::from_int(-1)), 1);
        assert_eq!(f.root_multiplicity(&Rat::from_int(5)), 0);
    }
}
