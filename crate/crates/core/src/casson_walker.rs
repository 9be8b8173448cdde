//! Casson-Walker invariants of lens spaces, by two independent routes.
//!
//! The reciprocity recursion
//!
//! ```text
//! lambda(L(p,q)) = 1/4 - (p^2+q^2+1)/12pq - lambda(L(q, p mod q))
//! ```
//!
//! with lambda(S^3) = 0, and the Hirzebruch-Jung continued fraction formula
//!
//! ```text
//! lambda(p,q) = -(q/p + q'/p + sum(a_i - 3)) / 12,   qq' = 1 (mod p).
//! ```
//!
//! Both are exact rationals and must agree on every input; `dcw_check` ties
//! them to the d-invariant recursion through sum d(L(p,q)) = p lambda(L(p,q)).

use num_bigint::BigInt;
use serde::Serialize;

use crate::d_invariant::DCalc;
use crate::error::{Error, Result};
use crate::exact_arith::{hj_expand_rle, mod_inverse, Rational};
use crate::lens_space::LensSpace;

fn check_pair(p: i64, q: i64) -> Result<i64> {
    if p < 1 {
        return Err(Error::OutOfRange { what: "lambda p", got: p });
    }
    let q = q.rem_euclid(p);
    if p > 1 && num_integer::gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(q)
}

/// Casson-Walker invariant by the reciprocity recursion.
///
/// Reduction keeps every state in canonical coprime form `(p, p mod q)`, so
/// the orientation sign rule `lambda(p,-q) = -lambda(p,q)` never has to be
/// applied to a negative representative.
pub fn lambda_rec(p: i64, q: i64) -> Result<Rational> {
    let q = check_pair(p, q)?;
    let mut acc = Rational::zero();
    let mut sign_flip = false;
    let (mut p, mut q) = (p, q);
    while p > 1 {
        let (pp, qq) = (p as i128, q as i128);
        let num = BigInt::from(3 * pp * qq) - BigInt::from(pp * pp + qq * qq + 1);
        let term = Rational::new(num, BigInt::from(12 * pp * qq))?;
        acc = if sign_flip { acc - term } else { acc + term };
        sign_flip = !sign_flip;
        (p, q) = (q, p % q);
    }
    Ok(acc)
}

/// Casson-Walker invariant by the continued fraction formula.
///
/// Works from the run-length expansion, so large `p` costs only the Euclid
/// chain length.
pub fn lambda_cf(p: i64, q: i64) -> Result<Rational> {
    let q = check_pair(p, q)?;
    if p == 1 {
        return Ok(Rational::zero());
    }
    let q_inv = mod_inverse(q, p)?;
    let mut cf_sum = BigInt::from(0); // sum of (a_i - 3)
    for (a, count) in hj_expand_rle(p, q)? {
        cf_sum += BigInt::from(a as i128 - 3) * BigInt::from(count);
    }
    // -(q/p + q'/p + cf_sum)/12 = -(q + q' + p*cf_sum) / 12p
    let num = BigInt::from(q) + BigInt::from(q_inv) + BigInt::from(p) * cf_sum;
    Rational::new(-num, BigInt::from(12i128 * p as i128))
}

/// Preferred lambda route (the recursion).
pub fn lambda(p: i64, q: i64) -> Result<Rational> {
    lambda_rec(p, q)
}

/// The gap statistic `Delta = 12 (lambda(p,q) - lambda(p,1))`.
pub fn delta(p: i64, q: i64) -> Result<Rational> {
    let base = if p == 1 { Rational::zero() } else { lambda_rec(p, 1)? };
    Ok(Rational::from_int(12) * (lambda_rec(p, q)? - base))
}

/// Exact check of `sum_i d(p,q,i) = p * lambda(p,q)`, the identity tying the
/// d-invariant recursion to the Casson-Walker recursion. A `false` here
/// means one of the two recursions is broken.
pub fn dcw_check(p: i64, q: i64) -> Result<bool> {
    dcw_check_with(&mut DCalc::new(), p, q)
}

/// [`dcw_check`] reusing a shared memo table.
pub fn dcw_check_with(calc: &mut DCalc, p: i64, q: i64) -> Result<bool> {
    let q = check_pair(p, q)?;
    let y = LensSpace::new(p, q)?;
    let sum: Rational = calc.d_multiset(y).into_iter().sum();
    Ok(sum == Rational::from_int(p) * lambda_rec(p, q)?)
}

/// Which route produced a [`LambdaValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMethod {
    Recursion,
    ContinuedFraction,
}

/// A computed Casson-Walker value together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaValue {
    pub space: LensSpace,
    pub value: Rational,
    pub method: LambdaMethod,
}

impl LambdaValue {
    pub fn by_recursion(y: LensSpace) -> Result<Self> {
        Ok(LambdaValue {
            space: y,
            value: lambda_rec(y.p(), y.q())?,
            method: LambdaMethod::Recursion,
        })
    }

    pub fn by_continued_fraction(y: LensSpace) -> Result<Self> {
        Ok(LambdaValue {
            space: y,
            value: lambda_cf(y.p(), y.q())?,
            method: LambdaMethod::ContinuedFraction,
        })
    }
}
