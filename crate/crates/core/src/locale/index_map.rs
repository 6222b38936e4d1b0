//! Partial maps between subsets of ℕ with computable preimages.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::natset::{NatSet, MAX_PERIOD};

/// A partial function ℕ ⇀ ℕ: either a finite table or the affine rule
/// `n ↦ (a n + b) / d` on an eventually periodic domain.
#[derive(Clone, PartialEq, Eq)]
pub enum IndexMap {
    Table(BTreeMap<u64, u64>),
    Affine { dom: NatSet, a: u64, b: i64, d: u64 },
}

impl fmt::Debug for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexMap::Table(t) => {
                let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                write!(f, "table{{{}}}", parts.join(","))
            }
            IndexMap::Affine { dom, a, b, d } => write!(f, "n -> ({a}n{b:+})/{d} on {dom}"),
        }
    }
}

impl IndexMap {
    pub fn table<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        IndexMap::Table(pairs.into_iter().collect())
    }

    pub fn identity() -> Self {
        IndexMap::Affine {
            dom: NatSet::all(),
            a: 1,
            b: 0,
            d: 1,
        }
    }

    /// Validates that `(a n + b) / d` is a natural number for every `n` in
    /// `dom`.
    pub fn affine(dom: NatSet, a: u64, b: i64, d: u64) -> Result<Self, String> {
        if d == 0 || d > MAX_PERIOD {
            return Err(format!("divisor {d} out of range"));
        }
        let bad_residues: Vec<u64> = (0..d)
            .filter(|&r| (a as i128 * r as i128 + b as i128).rem_euclid(d as i128) != 0)
            .collect();
        let mut bad = NatSet::periodic(d, bad_residues);
        if a == 0 {
            if b < 0 {
                bad = NatSet::all();
            }
        } else if b < 0 {
            let limit = (-b as u64).div_ceil(a);
            bad = bad.union(&NatSet::range(limit));
        }
        let clash = dom.intersection(&bad);
        if let Some(n) = clash.first() {
            return Err(format!("affine rule undefined at {n}"));
        }
        Ok(IndexMap::Affine { dom, a, b, d })
    }

    pub fn domain(&self) -> NatSet {
        match self {
            IndexMap::Table(t) => NatSet::finite(t.keys().copied()),
            IndexMap::Affine { dom, .. } => dom.clone(),
        }
    }

    pub fn apply(&self, n: u64) -> Option<u64> {
        match self {
            IndexMap::Table(t) => t.get(&n).copied(),
            IndexMap::Affine { dom, a, b, d } => {
                if !dom.contains(n) {
                    return None;
                }
                let v = *a as i128 * n as i128 + *b as i128;
                (v >= 0 && v % *d as i128 == 0).then(|| (v / *d as i128) as u64)
            }
        }
    }

    /// `{n in dom | f(n) in target}`.
    pub fn preimage(&self, target: &NatSet) -> NatSet {
        match self {
            IndexMap::Table(t) => NatSet::finite(t.iter().filter(|(_, v)| target.contains(**v)).map(|(k, _)| *k)),
            IndexMap::Affine { dom, a, b, d } => {
                if *a == 0 {
                    let c = (*b / *d as i64) as u64;
                    return if target.contains(c) {
                        dom.clone()
                    } else {
                        NatSet::empty()
                    };
                }
                let (a, b, d) = (*a as i128, *b as i128, *d as i128);
                let pt = target.period() as i128;
                let modulus = d * pt;
                let period = (dom.period() as i128).lcm(&modulus);
                assert!(period <= MAX_PERIOD as i128, "preimage period too large");
                let pattern_at = |r: i128| {
                    let v = (a * r + b).rem_euclid(modulus);
                    dom.pattern_contains(r as u64) && v % d == 0 && target.pattern_contains((v / d) as u64)
                };
                let residues: Vec<u64> = (0..period).filter(|&r| pattern_at(r)).map(|r| r as u64).collect();
                let base = NatSet::periodic(period as u64, residues);
                let mut candidates: Vec<u64> = dom.exceptions().collect();
                for e in target.exceptions() {
                    let num = d * e as i128 - b;
                    if num >= 0 && num % a == 0 {
                        candidates.push((num / a) as u64);
                    }
                }
                if b < 0 {
                    candidates.extend(0..((-b) as u64).div_ceil(a as u64));
                }
                let mut add = Vec::new();
                let mut remove = Vec::new();
                for n in candidates {
                    let actual = self.apply(n).is_some_and(|m| target.contains(m));
                    if actual != base.contains(n) {
                        if actual {
                            add.push(n);
                        } else {
                            remove.push(n);
                        }
                    }
                }
                base.union(&NatSet::finite(add)).difference(&NatSet::finite(remove))
            }
        }
    }

    /// `then ∘ self`: first `self`, then `then`.
    pub fn and_then(&self, then: &IndexMap) -> IndexMap {
        match (self, then) {
            (
                IndexMap::Affine {
                    dom: d1,
                    a: a1,
                    b: b1,
                    d: q1,
                },
                IndexMap::Affine {
                    dom: d2,
                    a: a2,
                    b: b2,
                    d: q2,
                },
            ) => {
                let dom = d1.intersection(&self.preimage(d2));
                let a = a1 * a2;
                let b = *a2 as i64 * b1 + b2 * *q1 as i64;
                let d = q1 * q2;
                let g = (a as i64).gcd(&b).gcd(&(d as i64)).max(1) as u64;
                IndexMap::affine(dom, a / g, b / g as i64, d / g).expect("composite of defined rules is defined")
            }
            _ => {
                let dom = self.domain().intersection(&self.preimage(&then.domain()));
                let points = dom.finite_members().expect("table composites have finite domain");
                IndexMap::table(
                    points
                        .into_iter()
                        .filter_map(|n| Some((n, then.apply(self.apply(n)?)?))),
                )
            }
        }
    }

    /// Whether every point has finitely many preimages.
    pub fn finite_fibers(&self) -> bool {
        match self {
            IndexMap::Table(_) => true,
            IndexMap::Affine { dom, a, .. } => *a > 0 || dom.is_finite(),
        }
    }

    /// The image of a finite set.
    pub fn image_of_finite(&self, s: &NatSet) -> Option<NatSet> {
        let pts = s.finite_members()?;
        Some(NatSet::finite(pts.into_iter().filter_map(|n| self.apply(n))))
    }
}
