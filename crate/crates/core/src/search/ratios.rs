use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::geometry::bratio_solve;
use crate::rational::{self, int, one, rat, Rational};

/// `{ j/i : i, j >= 1, i + j <= r - 1 }`: a side of `i` steps extended by
/// `j` steps within one edge.
pub fn allowed_ratios(r: i64) -> BTreeSet<Rational> {
    let mut out = BTreeSet::new();
    for i in 1..r {
        for j in 1..r - i {
            out.insert(rat(j, i));
        }
    }
    out
}

/// Some side length `a` makes both `a` and `a * b` whole and fits in `r` points.
pub fn step_feasible(b: &Rational, r: i64) -> bool {
    (1..r).any(|a| {
        let ext = b * int(a);
        ext.is_integer() && int(a) + ext <= int(r - 1)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RatioTuple(#[serde(serialize_with = "rational::vec::serialize")] pub [Rational; 4]);

impl RatioTuple {
    /// The relabeling `(b1, b2, b3, b4) -> (b2, b1, b4, b3)`.
    pub fn swap(&self) -> RatioTuple {
        let [b1, b2, b3, b4] = self.0.clone();
        RatioTuple([b2, b1, b4, b3])
    }

    pub fn canonical(&self) -> RatioTuple {
        self.clone().min(self.swap())
    }

    /// Both relations `b2 b3 = b1 (b2 + 1)` and `b1 b4 = (b1 + 1) b2`.
    pub fn satisfies_relations(&self) -> bool {
        let [b1, b2, b3, b4] = &self.0;
        b2 * b3 == b1 * (b2 + one()) && b1 * b4 == (b1 + one()) * b2
    }

    pub fn feasible(&self, r: i64) -> bool {
        let allowed = allowed_ratios(r);
        self.satisfies_relations()
            && self
                .0
                .iter()
                .all(|b| allowed.contains(b) && step_feasible(b, r))
    }
}

impl fmt::Display for RatioTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioEnumeration {
    pub r: i64,
    /// Every feasible tuple, in `(b1, b2)` order.
    pub raw: Vec<RatioTuple>,
    /// One representative per swap orbit, sorted.
    pub orbits: Vec<RatioTuple>,
}

pub fn ratio_enumeration(r: i64) -> RatioEnumeration {
    let allowed = allowed_ratios(r);
    let mut raw = Vec::new();
    for b1 in &allowed {
        for b2 in &allowed {
            let Ok((b3, b4)) = bratio_solve(b1, b2) else {
                continue;
            };
            debug_assert!(!b3.is_zero() && !b4.is_zero());
            let t = RatioTuple([b1.clone(), b2.clone(), b3, b4]);
            if t.feasible(r) {
                raw.push(t);
            }
        }
    }
    let orbits: BTreeSet<RatioTuple> = raw.iter().map(RatioTuple::canonical).collect();
    RatioEnumeration {
        r,
        raw,
        orbits: orbits.into_iter().collect(),
    }
}

/// Canonical representatives of the feasible ratio tuples for `r`.
pub fn enumerate_ratio_tuples(r: i64) -> Vec<RatioTuple> {
    ratio_enumeration(r).orbits
}
