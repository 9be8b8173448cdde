//! Heegaard Floer correction terms (d-invariants) of lens spaces.
//!
//! Computed by the Ozsvath-Szabo recursion
//!
//! ```text
//! d(L(p,q), s_i) = 1/4 - (2i+1-p-q)^2 / 4pq - d(L(q, p mod q), s_{i mod q})
//! ```
//!
//! with base case d(S^3) = 0, plus the closed forms for q = 1, 2, and the
//! grading maxima E(p,k) whose multiset is the d-invariants of L(p,1).

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::Rational;
use crate::lens_space::{LensSpace, SpincLabel};

/// Memoized d-invariant calculator.
///
/// Tables are keyed on the canonically reduced pair `(p, q)` and hold all `p`
/// values at once; a full table costs one rational operation per Spin^c
/// structure per Euclid step. Values are deterministic, so census workers can
/// each use a private calculator.
#[derive(Default)]
pub struct DCalc {
    tables: HashMap<(i64, i64), Rc<Vec<Rational>>>,
}

impl DCalc {
    pub fn new() -> Self {
        Self::default()
    }

    /// `d(L(p,q), s_i)`. `q` and `i` are reduced mod `p`; `gcd(p,q) = 1`
    /// is required for `p > 1`.
    pub fn d(&mut self, p: i64, q: i64, i: i64) -> Result<Rational> {
        if p < 1 {
            return Err(Error::OutOfRange { what: "d-invariant p", got: p });
        }
        let q = q.rem_euclid(p);
        if p > 1 && num_integer::gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        let i = i.rem_euclid(p);
        let table = self.table(p, q);
        Ok(table[i as usize].clone())
    }

    pub fn d_table(&mut self, y: LensSpace) -> DTable {
        let table = self.table(y.p(), y.q());
        DTable { space: y, values: table.as_ref().clone() }
    }

    /// The multiset `{ d(p,q,i) : 0 <= i < p }` as a sorted vector.
    pub fn d_multiset(&mut self, y: LensSpace) -> Vec<Rational> {
        let table = self.table(y.p(), y.q());
        let mut values = table.as_ref().clone();
        values.sort();
        values
    }

    // Invariant on entry: p >= 1, 0 <= q < p, gcd(p,q) = 1 for p > 1.
    fn table(&mut self, p: i64, q: i64) -> Rc<Vec<Rational>> {
        if let Some(t) = self.tables.get(&(p, q)) {
            return t.clone();
        }
        // walk the Euclid chain down to a known table, then fill back up
        let mut chain = Vec::new();
        let (mut cp, mut cq) = (p, q);
        while cp > 1 && !self.tables.contains_key(&(cp, cq)) {
            chain.push((cp, cq));
            (cp, cq) = (cq, cp % cq);
        }
        if cp == 1 {
            self.tables.entry((1, 0)).or_insert_with(|| Rc::new(vec![Rational::zero()]));
        }
        for (tp, tq) in chain.into_iter().rev() {
            let sub = self.tables[&(tq, tp % tq)].clone();
            let mut values = Vec::with_capacity(tp as usize);
            for i in 0..tp {
                values.push(recursion_step(tp, tq, i, &sub[(i % tq) as usize]));
            }
            self.tables.insert((tp, tq), Rc::new(values));
        }
        self.tables[&(p, q)].clone()
    }
}

// 1/4 - (2i+1-p-q)^2/(4pq) - sub  ==  (pq - (2i+1-p-q)^2)/(4pq) - sub
fn recursion_step(p: i64, q: i64, i: i64, sub: &Rational) -> Rational {
    let (p, q, i) = (p as i128, q as i128, i as i128);
    let s = 2 * i + 1 - p - q;
    let num = BigInt::from(p * q) - BigInt::from(s) * BigInt::from(s);
    let term = Rational::new(num, BigInt::from(4 * p * q)).expect("4pq != 0");
    term - sub
}

/// One-shot `d(L(p,q), s_i)` with a fresh memo table.
pub fn d(p: i64, q: i64, i: i64) -> Result<Rational> {
    DCalc::new().d(p, q, i)
}

/// One-shot sorted multiset of d-invariants of `y`.
pub fn d_multiset(y: LensSpace) -> Vec<Rational> {
    DCalc::new().d_multiset(y)
}

/// Closed forms for q = 1 and q = 2 (valid for `0 <= i < p`):
///
/// ```text
/// d(p,1,i) = (1 - (2i-p)^2/p) / 4
/// d(p,2,i) = (2 - (2i-p-1)^2/2p) / 4   (i even)
///          =    (- (2i-p-1)^2/2p) / 4  (i odd)
/// ```
pub fn d_closed(p: i64, q: i64, i: i64) -> Result<Rational> {
    if p < 1 {
        return Err(Error::OutOfRange { what: "d-invariant p", got: p });
    }
    if !(0..p.max(1)).contains(&i) && !(p == 1 && i == 0) {
        return Err(Error::OutOfRange { what: "Spin^c index i", got: i });
    }
    let (pp, ii) = (p as i128, i as i128);
    match q {
        1 => {
            let s = 2 * ii - pp;
            Rational::new(BigInt::from(pp - s * s), BigInt::from(4 * pp))
        }
        2 => {
            if p % 2 == 0 {
                return Err(Error::NotCoprime { p, q });
            }
            let s = 2 * ii - pp - 1;
            let num = if i % 2 == 0 { 4 * pp - s * s } else { -(s * s) };
            Rational::new(BigInt::from(num), BigInt::from(8 * pp))
        }
        _ => Err(Error::OutOfRange { what: "closed form q", got: q }),
    }
}

/// The slot range `(-p/2, p/2] ∩ Z`: one slot per residue class mod p.
pub fn slot_range(p: i64) -> std::ops::RangeInclusive<i64> {
    -((p - 1) / 2)..=p / 2
}

/// `E(p,k)`: the maximal grading shift over `i = k (mod p)`,
///
/// ```text
/// E(p,k) = max { (1 - (2i-p)^2/p)/4 : i = k (p) } = (1 - (p - 2|k̄|)^2/p)/4
/// ```
///
/// where `k̄` is the representative of `k` in `(-p/2, p/2]`. The multiset
/// `{E(p,k)}` over the slot range equals the d-invariants of L(p,1).
pub fn e_invariant(p: i64, k: i64) -> Result<Rational> {
    if p < 1 {
        return Err(Error::OutOfRange { what: "E(p,k) p", got: p });
    }
    let mut kbar = k.rem_euclid(p);
    if kbar > p / 2 {
        kbar -= p;
    }
    let (pp, kk) = (p as i128, kbar.unsigned_abs() as i128);
    let s = pp - 2 * kk;
    Rational::new(BigInt::from(pp - s * s), BigInt::from(4 * pp))
}

/// The full vector of `E(p,k)` over the slot range, indexed by `k`.
pub struct EVector {
    p: i64,
    values: Vec<Rational>, // index 0 corresponds to the smallest slot
}

impl EVector {
    pub fn new(p: i64) -> Result<Self> {
        let values = slot_range(p).map(|k| e_invariant(p, k)).collect::<Result<_>>()?;
        Ok(EVector { p, values })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn get(&self, k: i64) -> &Rational {
        let lo = *slot_range(self.p).start();
        let mut kbar = k.rem_euclid(self.p);
        if kbar > self.p / 2 {
            kbar -= self.p;
        }
        &self.values[(kbar - lo) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        slot_range(self.p).zip(self.values.iter())
    }
}

/// The d-invariants of one lens space, indexed by Spin^c label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTable {
    space: LensSpace,
    values: Vec<Rational>,
}

/// One row of the CSV/JSON export of a [`DTable`].
#[derive(Clone, Debug, Serialize)]
pub struct DRow {
    pub p: i64,
    pub q: i64,
    pub i: i64,
    pub d: Rational,
}

impl DTable {
    pub fn space(&self) -> LensSpace {
        self.space
    }

    pub fn get(&self, label: SpincLabel) -> &Rational {
        &self.values[label.index() as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn multiset(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v
    }

    /// Export rows ordered by `i` ascending (byte-stable).
    pub fn rows(&self) -> Vec<DRow> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, d)| DRow {
                p: self.space.p(),
                q: self.space.q(),
                i: i as i64,
                d: d.clone(),
            })
            .collect()
    }

    /// CSV with header `p,q,i,d`, `d` in canonical `num/den` form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,i,d\n");
        for row in self.rows() {
            out.push_str(&format!("{},{},{},{}\n", row.p, row.q, row.i, row.d));
        }
        out
    }
}
