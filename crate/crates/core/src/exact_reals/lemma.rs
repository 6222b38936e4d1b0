//! Certified refinement of `x <= q + e` to `x <= q + e / 2^k` for a
//! nonnegative upper real with `x^2 <= q x`.

use num_traits::{One, Signed, Zero};

use crate::rational::{pow2_neg, Q};

use super::{RealError, UpperReal};

/// One inference `x <= q + e  =>  x <= q + e/2`, justified by
/// `x^2 <= q x <= q^2 + q e <= (q + e/2)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementStep {
    pub e: Q,
    pub lhs: Q,
    pub rhs: Q,
    pub bound: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementCertificate {
    pub q: Q,
    pub e: Q,
    pub start: Q,
    pub steps: Vec<RefinementStep>,
}

impl RefinementCertificate {
    /// The final bound `q + e / 2^k`.
    pub fn bound(&self) -> Q {
        self.steps
            .last()
            .map_or_else(|| self.start.clone(), |s| s.bound.clone())
    }

    /// All bounds from `q + e` down to the final one.
    pub fn chain(&self) -> Vec<Q> {
        std::iter::once(self.start.clone())
            .chain(self.steps.iter().map(|s| s.bound.clone()))
            .collect()
    }

    /// Re-checks every step with exact rational arithmetic.
    pub fn replay(&self) -> bool {
        let two = Q::from_integer(2.into());
        let mut e = self.e.clone();
        if self.start != &self.q + &e {
            return false;
        }
        for step in &self.steps {
            let lhs = &self.q * &self.q + &self.q * &e;
            let half = &e / &two;
            let rhs = (&self.q + &half) * (&self.q + &half);
            if step.e != e || step.lhs != lhs || step.rhs != rhs || lhs > rhs {
                return false;
            }
            if step.bound != &self.q + &half {
                return false;
            }
            e = half;
        }
        true
    }
}

fn test_points(limit: &Q) -> Vec<Q> {
    let eighth = Q::new(1.into(), 8.into());
    let mut out = Vec::new();
    let mut r = Q::zero();
    while r <= *limit && out.len() < 4096 {
        r += &eighth;
        out.push(r.clone());
    }
    out
}

/// Refines `x <= q + e` into `x <= q + e/2^k`.
///
/// The hypotheses are spot-checked: `x <= q + e` just above `q + e`, and
/// `x^2 <= q x` on rational test points `r` (whenever `q x < r` also
/// `x^2 < r`). The first failing point is reported.
pub fn lemma1_refine(x: &UpperReal, q: &Q, e: &Q, k: u32) -> Result<RefinementCertificate, RealError> {
    if q.is_negative() {
        return Err(RealError::SignContract);
    }
    if !e.is_positive() {
        return Err(RealError::NonPositivePrecision);
    }
    let start = q + e;
    for j in 1..=12 {
        let r = &start + pow2_neg(j);
        if !x.lt(&r) {
            return Err(RealError::StartContract(r));
        }
    }
    let square = x.mul_nonneg(x)?;
    let qx = x.scale(q);
    let limit = square.bound().max(qx.bound()) + Q::one();
    for r in test_points(&limit) {
        if qx.lt(&r) && !square.lt(&r) {
            return Err(RealError::SquareContract(r));
        }
    }
    let two = Q::from_integer(2.into());
    let mut cur = e.clone();
    let mut steps = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let half = &cur / &two;
        steps.push(RefinementStep {
            lhs: q * q + q * &cur,
            rhs: (q + &half) * (q + &half),
            bound: q + &half,
            e: cur,
        });
        cur = half;
    }
    Ok(RefinementCertificate {
        q: q.clone(),
        e: e.clone(),
        start,
        steps,
    })
}
