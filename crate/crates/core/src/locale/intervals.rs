//! Finite unions of open intervals with rational endpoints.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::rational::{parse_q, Q};
use crate::syntax::SyntaxError;

/// A finite union of open rational intervals, stored as sorted disjoint
/// components. Touching intervals such as `(0,1/2)|(1/2,1)` stay separate
/// because the shared endpoint is not a member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSet {
    comps: Vec<(Q, Q)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { comps: Vec::new() }
    }

    /// The interval `(p, q)`; panics unless `p < q`.
    pub fn interval(p: Q, q: Q) -> Self {
        assert!(p < q, "malformed interval ({p}, {q})");
        Self { comps: vec![(p, q)] }
    }

    pub fn try_interval(p: Q, q: Q) -> Result<Self, String> {
        if p < q {
            Ok(Self::interval(p, q))
        } else {
            Err(format!("malformed interval ({p},{q})"))
        }
    }

    /// `(0, 1)`.
    pub fn unit() -> Self {
        Self::interval(Q::zero(), Q::from_integer(1.into()))
    }

    pub fn from_intervals<I: IntoIterator<Item = (Q, Q)>>(items: I) -> Self {
        let mut comps: Vec<(Q, Q)> = items.into_iter().filter(|(p, q)| p < q).collect();
        comps.sort();
        let mut merged: Vec<(Q, Q)> = Vec::with_capacity(comps.len());
        for (p, q) in comps {
            match merged.last_mut() {
                Some(last) if p < last.1 => {
                    if q > last.1 {
                        last.1 = q;
                    }
                }
                _ => merged.push((p, q)),
            }
        }
        Self { comps: merged }
    }

    pub fn components(&self) -> &[(Q, Q)] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn contains_point(&self, x: &Q) -> bool {
        self.comps.iter().any(|(p, q)| p < x && x < q)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.comps.iter().chain(other.comps.iter()).cloned())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (a, b) in &self.comps {
            for (c, d) in &other.comps {
                let lo = a.max(c).clone();
                let hi = b.min(d).clone();
                if lo < hi {
                    out.push((lo, hi));
                }
            }
        }
        Self::from_intervals(out)
    }

    /// Whether `(p, q)` lies inside a single component.
    pub fn covers_interval(&self, p: &Q, q: &Q) -> bool {
        self.comps.iter().any(|(c, d)| c <= p && q <= d)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.comps.iter().all(|(p, q)| other.covers_interval(p, q))
    }

    /// Components of the closure: closed intervals, with touching
    /// components merged.
    pub fn closure_components(&self) -> Vec<(Q, Q)> {
        let mut out: Vec<(Q, Q)> = Vec::new();
        for (p, q) in &self.comps {
            match out.last_mut() {
                Some(last) if *p <= last.1 => last.1 = q.clone(),
                _ => out.push((p.clone(), q.clone())),
            }
        }
        out
    }

    /// `self` minus the closed interval `[p, q]`.
    pub fn minus_closed(&self, p: &Q, q: &Q) -> Self {
        let mut out = Vec::new();
        for (c, d) in &self.comps {
            out.push((c.clone(), p.min(d).clone()));
            out.push((q.max(c).clone(), d.clone()));
        }
        Self::from_intervals(out)
    }

    /// Sum of component lengths.
    pub fn measure(&self) -> Q {
        self.comps.iter().fold(Q::zero(), |acc, (p, q)| acc + q - p)
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntervalSet({self})")
    }
}

/// `(p,q)|(r,s)`; the empty set prints as `()`.
impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self.comps.iter().map(|(p, q)| format!("({p},{q})")).collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for IntervalSet {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: String| SyntaxError::new(0, m);
        let s = s.trim();
        if s == "()" {
            return Ok(Self::empty());
        }
        let mut items = Vec::new();
        for part in s.split('|') {
            let inner = part
                .trim()
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| err(format!("expected `(p,q)`, got {part:?}")))?;
            let (p, q) = inner
                .split_once(',')
                .ok_or_else(|| err(format!("expected `(p,q)`, got {part:?}")))?;
            let p = parse_q(p).map_err(|e| err(e.to_string()))?;
            let q = parse_q(q).map_err(|e| err(e.to_string()))?;
            if p >= q {
                return Err(err(format!("malformed interval ({p},{q})")));
            }
            items.push((p, q));
        }
        Ok(Self::from_intervals(items))
    }
}
