//! Exact integer and rational arithmetic.
//!
//! Everything downstream is built on this module: arbitrary-precision
//! rationals, modular inverses, Hirzebruch-Jung continued fractions, and
//! perfect-square detection. There is no floating point anywhere.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always stored in lowest terms with a positive
/// denominator. Equality and ordering are exact.
///
/// The canonical text form is `"num/den"` with the sign on the numerator and
/// `"0/1"` for zero; this is the serialization used by every CSV and JSON
/// emitter in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `n/d` from machine integers; panics on `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Exact integer value, if this rational is an integer that fits in i64.
    pub fn to_integer(&self) -> Option<i64> {
        if self.0.is_integer() {
            i64::try_from(self.0.to_integer()).ok()
        } else {
            None
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRationalLiteral(s.to_owned());
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(n, d)))
            }
            None => {
                let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Rational::from_int(n))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Greatest common divisor, nonnegative. Errors when both inputs are zero.
pub fn gcd(a: i64, b: i64) -> Result<i64> {
    if a == 0 && b == 0 {
        return Err(Error::GcdBothZero);
    }
    Ok(num_integer::gcd(a, b))
}

/// The inverse of `q` mod `p`, normalized to `1 <= q' <= p`.
///
/// `mod_inverse(1, 1) = 1` by convention, so the `p = 1` (S^3) case
/// degenerates cleanly.
pub fn mod_inverse(q: i64, p: i64) -> Result<i64> {
    if p < 1 {
        return Err(Error::OutOfRange { what: "modulus p", got: p });
    }
    if p == 1 {
        return Ok(1);
    }
    // extended Euclid over i128
    let (mut r0, mut r1) = (p as i128, (q as i128).rem_euclid(p as i128));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { q, p });
    }
    let inv = t0.rem_euclid(p as i128) as i64;
    Ok(if inv == 0 { p } else { inv })
}

/// A Hirzebruch-Jung continued fraction `[a_1, ..., a_n]` with every
/// `a_i >= 2`, evaluating to `a_1 - 1/(a_2 - 1/(... - 1/a_n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CFExpansion {
    terms: Vec<i64>,
}

impl CFExpansion {
    pub fn new(terms: Vec<i64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::OutOfRange { what: "continued fraction length", got: 0 });
        }
        if let Some(&bad) = terms.iter().find(|&&a| a < 2) {
            return Err(Error::BadCfTerm(bad));
        }
        Ok(CFExpansion { terms })
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn reversed(&self) -> CFExpansion {
        let mut terms = self.terms.clone();
        terms.reverse();
        CFExpansion { terms }
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, a) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, "]")
    }
}

fn check_hj_pre(p: i64, q: i64) -> Result<()> {
    if !(p > q && q > 0) {
        return Err(Error::InvalidLensSpace { p, q });
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

/// Hirzebruch-Jung expansion of `p/q` in run-length form: a list of
/// `(term, count)` pairs with `count >= 1`, adjacent terms distinct whenever
/// one of them is 2.
///
/// Runs of 2's are collapsed analytically, so the cost is the length of the
/// Euclid chain of `(p, q)` even when the expansion itself has ~p terms
/// (e.g. `p/(p-1) = [2, 2, ..., 2]`).
pub fn hj_expand_rle(p: i64, q: i64) -> Result<Vec<(i64, i64)>> {
    check_hj_pre(p, q)?;
    let (mut p, mut q) = (p as i128, q as i128);
    let mut out: Vec<(i64, i64)> = Vec::new();
    loop {
        let a = (p + q - 1) / q; // ceiling division keeps every term >= 2
        if a == 2 {
            // While the quotient stays 2, the state steps (s, s-d) -> (s-d, s-2d)
            // with d = p - q constant.
            let d = p - q;
            if d == 1 {
                // gcd(p, d) = 1 forces d = 1 whenever the run reaches the end;
                // the tail is exactly p - 1 twos.
                out.push((2, (p - 1) as i64));
                break;
            }
            let k = p / d - 1; // number of twos before the quotient exceeds 2
            out.push((2, k as i64));
            let s = p - k * d; // lands in (d, 2d)
            p = s;
            q = s - d;
        } else {
            out.push((a as i64, 1));
            let r = a * q - p;
            if r == 0 {
                break;
            }
            p = q;
            q = r;
        }
    }
    Ok(out)
}

/// Hirzebruch-Jung expansion of `p/q` with the terms materialized.
///
/// Requires `p > q > 0` coprime. Errors when the expansion would have more
/// than 10^6 terms; use [`hj_expand_rle`] for such inputs.
pub fn hj_expand(p: i64, q: i64) -> Result<CFExpansion> {
    let rle = hj_expand_rle(p, q)?;
    let total: i64 = rle.iter().map(|&(_, c)| c).sum();
    if total > 1_000_000 {
        return Err(Error::Overflow("materialized continued fraction"));
    }
    let mut terms = Vec::with_capacity(total as usize);
    for (a, count) in rle {
        for _ in 0..count {
            terms.push(a);
        }
    }
    CFExpansion::new(terms)
}

/// Evaluate a Hirzebruch-Jung expansion back to a coprime pair `(p, q)` with
/// `p > q > 0`. Inverse of [`hj_expand`].
pub fn hj_eval(cf: &CFExpansion) -> Result<(i64, i64)> {
    let mut num: i128 = 1;
    let mut den: i128 = 0;
    for &a in cf.terms().iter().rev() {
        let next = (a as i128)
            .checked_mul(num)
            .and_then(|x| x.checked_sub(den))
            .ok_or(Error::Overflow("hj_eval"))?;
        den = num;
        num = next;
        if num > i64::MAX as i128 {
            return Err(Error::Overflow("hj_eval"));
        }
    }
    Ok((num as i64, den as i64))
}

/// `Some(r)` with `r*r == n` when `n` is a perfect square, `None` otherwise.
///
/// Integer Newton iteration with an exact verification multiply.
pub fn exact_sqrt(n: i64) -> Result<Option<i64>> {
    if n < 0 {
        return Err(Error::OutOfRange { what: "exact_sqrt argument", got: n });
    }
    if n < 2 {
        return Ok(Some(n));
    }
    let n = n as u128;
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    Ok(if x * x == n { Some(x as i64) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 8).unwrap(), 4);
        assert_eq!(gcd(7, 1).unwrap(), 1);
        for k in 0..50 {
            assert_eq!(gcd(2 * k + 1, 2).unwrap(), 1);
        }
        assert_eq!(gcd(0, 0), Err(Error::GcdBothZero));
        assert_eq!(gcd(-12, 8).unwrap(), 4);
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(2, 7).unwrap(), 4);
        assert_eq!(mod_inverse(3, 13).unwrap(), 9);
        for p in 1..40 {
            assert_eq!(mod_inverse(1, p).unwrap(), 1);
        }
        assert_eq!(mod_inverse(2, 4), Err(Error::NotInvertible { q: 2, p: 4 }));
    }

    #[test]
    fn mod_inverse_involution() {
        for p in 2..200 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let inv = mod_inverse(q, p).unwrap();
                assert_eq!(mod_inverse(inv, p).unwrap(), q, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn hj_expand_examples() {
        assert_eq!(hj_expand(7, 1).unwrap().terms(), &[7]);
        assert_eq!(hj_expand(7, 2).unwrap().terms(), &[4, 2]);
        assert_eq!(hj_expand(10, 3).unwrap().terms(), &[4, 2, 2]);
        assert_eq!(hj_expand(7, 4).unwrap().terms(), &[2, 4]);
        assert_eq!(hj_expand(7, 5).unwrap().terms(), &[2, 2, 3]);
        assert_eq!(hj_expand(3, 2).unwrap().terms(), &[2, 2]);
        assert_eq!(hj_expand(2, 1).unwrap().terms(), &[2]);
        assert!(hj_expand(4, 2).is_err());
        assert!(hj_expand(2, 3).is_err());
    }

    #[test]
    fn hj_eval_examples() {
        let cf = |t: &[i64]| CFExpansion::new(t.to_vec()).unwrap();
        assert_eq!(hj_eval(&cf(&[7])).unwrap(), (7, 1));
        assert_eq!(hj_eval(&cf(&[4, 2])).unwrap(), (7, 2));
        assert_eq!(hj_eval(&cf(&[2, 4])).unwrap(), (7, 4));
    }

    #[test]
    fn hj_round_trip_and_product_bound() {
        for p in 2..=500i64 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let cf = hj_expand(p, q).unwrap();
                assert_eq!(hj_eval(&cf).unwrap(), (p, q), "round trip p={p} q={q}");

                // product bound: prod (a_i - 1) <= p, and the strengthened
                // form with one end factor not decremented
                let prod: i128 = cf.terms().iter().map(|&a| (a - 1) as i128).product();
                assert!(prod <= p as i128, "product bound p={p} q={q}");
                let n = cf.len();
                let head: i128 = cf.terms()[0] as i128
                    * cf.terms()[1..].iter().map(|&a| (a - 1) as i128).product::<i128>();
                let tail: i128 = cf.terms()[..n - 1]
                    .iter()
                    .map(|&a| (a - 1) as i128)
                    .product::<i128>()
                    * cf.terms()[n - 1] as i128;
                assert!(head <= p as i128, "strengthened head bound p={p} q={q}");
                assert!(tail <= p as i128, "strengthened tail bound p={p} q={q}");

                // reversal: same numerator
                let (pr, _) = hj_eval(&cf.reversed()).unwrap();
                assert_eq!(pr, p, "reversal numerator p={p} q={q}");
            }
        }
    }

    #[test]
    fn hj_rle_matches_expansion() {
        for p in 2..=300i64 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let rle = hj_expand_rle(p, q).unwrap();
                let flat: Vec<i64> = rle
                    .iter()
                    .flat_map(|&(a, c)| std::iter::repeat(a).take(c as usize))
                    .collect();
                assert_eq!(flat, hj_expand(p, q).unwrap().terms(), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn hj_rle_large_input() {
        // p/(p-1) is all twos; the RLE form handles it in Euclid time
        let p = 1_000_000_007i64;
        let rle = hj_expand_rle(p, p - 1).unwrap();
        assert_eq!(rle, vec![(2, p - 1)]);
    }

    #[test]
    fn exact_sqrt_examples() {
        assert_eq!(exact_sqrt(16).unwrap(), Some(4));
        assert_eq!(exact_sqrt(15).unwrap(), None);
        assert_eq!(exact_sqrt(25).unwrap(), Some(5));
        assert_eq!(exact_sqrt(0).unwrap(), Some(0));
        assert_eq!(exact_sqrt(1).unwrap(), Some(1));
        assert!(exact_sqrt(-1).is_err());
        for r in 0..2000i64 {
            assert_eq!(exact_sqrt(r * r).unwrap(), Some(r));
        }
    }

    #[test]
    fn rational_canonical_strings() {
        assert_eq!(Rational::ratio(3, -6).to_string(), "-1/2");
        assert_eq!(Rational::zero().to_string(), "0/1");
        assert_eq!(Rational::ratio(-9, 14).to_string(), "-9/14");
        let r: Rational = "-9/14".parse().unwrap();
        assert_eq!(r, Rational::ratio(-9, 14));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn rational_addition_is_exact(
            a in -10_000i64..10_000, b in 1i64..10_000,
            c in -10_000i64..10_000, d in 1i64..10_000,
        ) {
            // a/b + c/d must match the cross-multiplication identity exactly
            let sum = Rational::ratio(a, b) + Rational::ratio(c, d);
            let expect = Rational::new(
                BigInt::from(a) * BigInt::from(d) + BigInt::from(c) * BigInt::from(b),
                BigInt::from(b) * BigInt::from(d),
            ).unwrap();
            prop_assert_eq!(sum, expect);
        }
    }

    proptest! {
        #[test]
        fn rational_string_round_trip(n in -100_000i64..100_000, d in 1i64..100_000) {
            let r = Rational::ratio(n, d);
            let back: Rational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
