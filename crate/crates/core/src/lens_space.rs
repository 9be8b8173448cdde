//! Oriented lens spaces and their classification.
//!
//! Orientation convention: -p surgery on the unknot produces L(p, 1).
//! Oriented homeomorphism is L(p,q) = L(p,q') iff q' = q or qq' = 1 (mod p);
//! q -> p - q reverses orientation and is deliberately *not* quotiented out.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::mod_inverse;

/// An oriented lens space L(p, q), stored canonically with `0 <= q < p` and
/// `gcd(p, q) = 1` for `p > 1`. `L(1, 0)` denotes S^3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawLensSpace")]
pub struct LensSpace {
    p: i64,
    q: i64,
}

#[derive(Deserialize)]
struct RawLensSpace {
    p: i64,
    q: i64,
}

impl TryFrom<RawLensSpace> for LensSpace {
    type Error = Error;
    fn try_from(raw: RawLensSpace) -> Result<Self> {
        LensSpace::new(raw.p, raw.q)
    }
}

impl LensSpace {
    /// Canonicalize `(p, q)`: reduce `q` mod `p` into `[0, p)` and check
    /// coprimality. Accepts any integer `q`, including negatives.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 1 {
            return Err(Error::OutOfRange { what: "lens space p", got: p });
        }
        let q = q.rem_euclid(p);
        if p > 1 && num_integer::gcd(p, q) != 1 {
            return Err(Error::InvalidLensSpace { p, q });
        }
        Ok(LensSpace { p, q })
    }

    pub fn s3() -> Self {
        LensSpace { p: 1, q: 0 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_s3(&self) -> bool {
        self.p == 1
    }

    /// The same manifold with reversed orientation: L(p, p - q).
    pub fn reverse(&self) -> LensSpace {
        if self.p == 1 {
            *self
        } else {
            LensSpace { p: self.p, q: self.p - self.q }
        }
    }

    /// Orientation-preserving homeomorphism test:
    /// `p` equal and `q2 = q1` or `q1 q2 = 1 (mod p)`.
    pub fn oriented_homeo(&self, other: &LensSpace) -> bool {
        if self.p != other.p {
            return false;
        }
        if self.q == other.q {
            return true;
        }
        // both q's are units mod p here, so the inverse always exists
        mod_inverse(self.q, self.p).map(|inv| inv % self.p == other.q).unwrap_or(false)
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

impl fmt::Debug for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A Spin^c structure label `i` in `Z/p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SpincLabel(i64);

impl SpincLabel {
    pub fn new(i: i64, p: i64) -> Self {
        SpincLabel(i.rem_euclid(p))
    }

    pub fn index(&self) -> i64 {
        self.0
    }
}

/// One canonical representative (smallest q) per oriented-homeomorphism class
/// of lens spaces with |H_1| = p, ordered by q.
pub fn enumerate_classes(p: i64) -> Result<Vec<LensSpace>> {
    if p < 1 {
        return Err(Error::OutOfRange { what: "lens space p", got: p });
    }
    if p == 1 {
        return Ok(vec![LensSpace::s3()]);
    }
    let mut out = Vec::new();
    for q in 1..p {
        if num_integer::gcd(p, q) != 1 {
            continue;
        }
        if q <= mod_inverse(q, p)? {
            out.push(LensSpace { p, q });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        assert_eq!(LensSpace::new(7, 9).unwrap(), LensSpace::new(7, 2).unwrap());
        assert_eq!(LensSpace::new(1, 0).unwrap(), LensSpace::s3());
        assert_eq!(LensSpace::new(1, 5).unwrap(), LensSpace::s3());
        assert_eq!(LensSpace::new(7, -2).unwrap(), LensSpace::new(7, 5).unwrap());
        assert!(LensSpace::new(4, 2).is_err());
        assert!(LensSpace::new(0, 1).is_err());
        assert!(LensSpace::new(5, 0).is_err());
    }

    #[test]
    fn reverse_examples() {
        let l = |p, q| LensSpace::new(p, q).unwrap();
        assert_eq!(l(7, 2).reverse(), l(7, 5));
        for p in 2..30 {
            assert_eq!(l(p, 1).reverse(), l(p, p - 1));
        }
        assert_eq!(l(11, 3).reverse().reverse(), l(11, 3));
        assert_eq!(LensSpace::s3().reverse(), LensSpace::s3());
    }

    #[test]
    fn oriented_homeo_examples() {
        let l = |p, q| LensSpace::new(p, q).unwrap();
        assert!(l(7, 2).oriented_homeo(&l(7, 4)));
        assert!(l(13, 3).oriented_homeo(&l(13, 9)));
        assert!(!l(7, 2).oriented_homeo(&l(7, 3)));
        assert!(!l(7, 2).oriented_homeo(&l(11, 2)));
    }

    #[test]
    fn oriented_homeo_is_equivalence_relation() {
        for p in 1..=60i64 {
            let all: Vec<LensSpace> = (0..p.max(1))
                .filter_map(|q| LensSpace::new(p, q).ok())
                .collect();
            for a in &all {
                assert!(a.oriented_homeo(a));
                for b in &all {
                    assert_eq!(a.oriented_homeo(b), b.oriented_homeo(a));
                    for c in &all {
                        if a.oriented_homeo(b) && b.oriented_homeo(c) {
                            assert!(a.oriented_homeo(c), "{a} {b} {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_classes_examples() {
        let l = |p, q| LensSpace::new(p, q).unwrap();
        assert_eq!(enumerate_classes(2).unwrap(), vec![l(2, 1)]);
        assert_eq!(enumerate_classes(5).unwrap(), vec![l(5, 1), l(5, 2), l(5, 4)]);
        assert_eq!(
            enumerate_classes(7).unwrap(),
            vec![l(7, 1), l(7, 2), l(7, 3), l(7, 6)]
        );
        assert_eq!(enumerate_classes(1).unwrap(), vec![LensSpace::s3()]);
    }

    #[test]
    fn class_count_matches_inversion_orbits() {
        for p in 1..=60i64 {
            let classes = enumerate_classes(p).unwrap();
            // direct orbit count of q -> q^-1 on the units mod p
            let orbits = if p == 1 {
                1
            } else {
                let mut seen = std::collections::HashSet::new();
                let mut count = 0usize;
                for q in 1..p {
                    if num_integer::gcd(p, q) != 1 || seen.contains(&q) {
                        continue;
                    }
                    seen.insert(q);
                    seen.insert(mod_inverse(q, p).unwrap() % p);
                    count += 1;
                }
                count
            };
            assert_eq!(classes.len(), orbits, "p={p}");
        }
    }

    #[test]
    fn reverse_induces_involution_on_classes() {
        for p in 1..=60i64 {
            let classes = enumerate_classes(p).unwrap();
            let class_of = |y: &LensSpace| {
                classes
                    .iter()
                    .position(|c| c.oriented_homeo(y))
                    .expect("every lens space lies in an enumerated class")
            };
            for c in &classes {
                let r = c.reverse();
                let idx = class_of(&r);
                // applying reverse twice returns to the starting class
                assert_eq!(class_of(&classes[idx].reverse()), class_of(c), "p={p} {c}");
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let y = LensSpace::new(7, 2).unwrap();
        let json = serde_json::to_string(&y).unwrap();
        assert_eq!(json, r#"{"p":7,"q":2}"#);
        let back: LensSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, y);
        assert!(serde_json::from_str::<LensSpace>(r#"{"p":4,"q":2}"#).is_err());
    }
}
