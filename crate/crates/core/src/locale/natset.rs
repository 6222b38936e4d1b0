//! Eventually periodic subsets of the natural numbers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::syntax::SyntaxError;

/// Largest period accepted when combining sets; keeps every operation cheap.
pub const MAX_PERIOD: u64 = 1 << 12;

/// A subset of ℕ of the form "periodic pattern, except at finitely many
/// points". Finite and cofinite sets are the period-1 cases.
///
/// The representation is canonical (minimal period, exceptions relative to
/// the pattern), so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NatSet {
    pattern: Vec<bool>,
    exceptions: BTreeSet<u64>,
}

impl NatSet {
    fn normalized(pattern: Vec<bool>, exceptions: BTreeSet<u64>) -> Self {
        let p = pattern.len();
        let period = (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (0..p).all(|i| pattern[i] == pattern[i % d]))
            .unwrap_or(p);
        let mut pattern = pattern;
        pattern.truncate(period);
        Self { pattern, exceptions }
    }

    pub fn empty() -> Self {
        Self {
            pattern: vec![false],
            exceptions: BTreeSet::new(),
        }
    }

    pub fn all() -> Self {
        Self {
            pattern: vec![true],
            exceptions: BTreeSet::new(),
        }
    }

    pub fn finite<I: IntoIterator<Item = u64>>(points: I) -> Self {
        Self {
            pattern: vec![false],
            exceptions: points.into_iter().collect(),
        }
    }

    pub fn cofinite<I: IntoIterator<Item = u64>>(missing: I) -> Self {
        Self {
            pattern: vec![true],
            exceptions: missing.into_iter().collect(),
        }
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: u64) -> Self {
        Self::finite(0..n)
    }

    pub fn singleton(n: u64) -> Self {
        Self::finite([n])
    }

    /// `{n | n mod period in residues}`.
    pub fn periodic<I: IntoIterator<Item = u64>>(period: u64, residues: I) -> Self {
        assert!(period > 0 && period <= MAX_PERIOD, "period out of range");
        let mut pattern = vec![false; period as usize];
        for r in residues {
            pattern[(r % period) as usize] = true;
        }
        Self::normalized(pattern, BTreeSet::new())
    }

    pub fn evens() -> Self {
        Self::periodic(2, [0])
    }

    pub fn odds() -> Self {
        Self::periodic(2, [1])
    }

    pub fn period(&self) -> u64 {
        self.pattern.len() as u64
    }

    pub fn pattern_contains(&self, n: u64) -> bool {
        self.pattern[(n % self.period()) as usize]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.pattern_contains(n) != self.exceptions.contains(&n)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.exceptions.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.pattern.iter().all(|b| !b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.pattern.iter().all(|&b| b)
    }

    pub fn is_all(&self) -> bool {
        self.is_cofinite() && self.exceptions.is_empty()
    }

    /// Members of a finite set in increasing order.
    pub fn finite_members(&self) -> Option<Vec<u64>> {
        self.is_finite().then(|| self.exceptions.iter().copied().collect())
    }

    /// Points missing from a cofinite set.
    pub fn cofinite_missing(&self) -> Option<Vec<u64>> {
        self.is_cofinite().then(|| self.exceptions.iter().copied().collect())
    }

    /// Number of members, when finite.
    pub fn count(&self) -> Option<usize> {
        self.is_finite().then(|| self.exceptions.len())
    }

    /// Residues of the periodic part.
    pub fn residues(&self) -> Vec<u64> {
        (0..self.period()).filter(|&r| self.pattern[r as usize]).collect()
    }

    /// Points where membership differs from the periodic pattern.
    pub fn exceptions(&self) -> impl Iterator<Item = u64> + '_ {
        self.exceptions.iter().copied()
    }

    /// Members below `limit`, in increasing order.
    pub fn members_below(&self, limit: u64) -> Vec<u64> {
        (0..limit).filter(|&n| self.contains(n)).collect()
    }

    /// The least member, if any.
    pub fn first(&self) -> Option<u64> {
        if self.is_empty() {
            return None;
        }
        let bound = self.exceptions.iter().next_back().map_or(0, |m| m + 1) + self.period();
        (0..bound).find(|&n| self.contains(n))
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let p = self.period().lcm(&other.period());
        assert!(p <= MAX_PERIOD, "combined period {p} exceeds the supported maximum");
        let pattern: Vec<bool> = (0..p)
            .map(|r| op(self.pattern_contains(r), other.pattern_contains(r)))
            .collect();
        let exceptions = self
            .exceptions
            .iter()
            .chain(other.exceptions.iter())
            .copied()
            .filter(|&n| op(self.contains(n), other.contains(n)) != pattern[(n % p) as usize])
            .collect();
        Self::normalized(pattern, exceptions)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        Self {
            pattern: self.pattern.iter().map(|b| !b).collect(),
            exceptions: self.exceptions.clone(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

impl fmt::Debug for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NatSet({self})")
    }
}

fn braces(items: impl Iterator<Item = u64>) -> String {
    let parts: Vec<String> = items.map(|n| n.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Canonical syntax: `{1,2}`, `cofinite{0}`, `mod 2{0}` optionally
/// followed by `^{...}` listing points where membership is flipped.
impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            return f.write_str(&braces(self.exceptions()));
        }
        if self.is_cofinite() {
            return write!(f, "cofinite{}", braces(self.exceptions()));
        }
        write!(f, "mod {}{}", self.period(), braces(self.residues().into_iter()))?;
        if !self.exceptions.is_empty() {
            write!(f, "^{}", braces(self.exceptions()))?;
        }
        Ok(())
    }
}

pub(crate) fn parse_braced_list(s: &str) -> Result<(Vec<&str>, &str), String> {
    let s = s.trim_start();
    let rest = s.strip_prefix('{').ok_or_else(|| format!("expected `{{` in {s:?}"))?;
    let close = rest.find('}').ok_or_else(|| format!("missing `}}` in {s:?}"))?;
    let inner = rest[..close].trim();
    let items = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    Ok((items, &rest[close + 1..]))
}

fn parse_points(items: &[&str]) -> Result<Vec<u64>, String> {
    items
        .iter()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| format!("expected a natural number, got {t:?}"))
        })
        .collect()
}

impl FromStr for NatSet {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: String| SyntaxError::new(0, m);
        let s = s.trim();
        let (base, rest) = if let Some(rest) = s.strip_prefix("cofinite") {
            let (items, rest) = parse_braced_list(rest).map_err(err)?;
            (Self::cofinite(parse_points(&items).map_err(err)?), rest)
        } else if let Some(rest) = s.strip_prefix("mod") {
            let rest = rest.trim_start();
            let digits = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let period: u64 = rest[..digits]
                .parse()
                .map_err(|_| err(format!("expected a period in {s:?}")))?;
            if period == 0 || period > MAX_PERIOD {
                return Err(err(format!("period {period} out of range")));
            }
            let (items, rest) = parse_braced_list(&rest[digits..]).map_err(err)?;
            let residues = parse_points(&items).map_err(err)?;
            if residues.iter().any(|&r| r >= period) {
                return Err(err(format!("residue out of range in {s:?}")));
            }
            (Self::periodic(period, residues), rest)
        } else {
            let (items, rest) = parse_braced_list(s).map_err(err)?;
            (Self::finite(parse_points(&items).map_err(err)?), rest)
        };
        let rest = rest.trim();
        if rest.is_empty() {
            return Ok(base);
        }
        let flips = rest
            .strip_prefix('^')
            .ok_or_else(|| err(format!("trailing input {rest:?}")))?;
        let (items, tail) = parse_braced_list(flips).map_err(err)?;
        if !tail.trim().is_empty() {
            return Err(err(format!("trailing input {tail:?}")));
        }
        let flip = Self::finite(parse_points(&items).map_err(err)?);
        Ok(base.difference(&flip).union(&flip.difference(&base)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = NatSet::finite([1, 2, 3]);
        let b = NatSet::cofinite([2]);
        assert_eq!(a.intersection(&b), NatSet::finite([1, 3]));
        assert_eq!(a.union(&b), NatSet::all());
        assert_eq!(b.complement(), NatSet::finite([2]));
        assert!(NatSet::finite([0, 1]).is_subset(&NatSet::all()));
        assert!(!NatSet::cofinite([0]).is_subset(&NatSet::finite([1, 2])));
        assert_eq!(NatSet::evens().union(&NatSet::odds()), NatSet::all());
        assert!(NatSet::evens().intersection(&NatSet::odds()).is_empty());
        let m4 = NatSet::periodic(4, [0]);
        assert!(m4.is_subset(&NatSet::evens()));
        assert_eq!(NatSet::evens().difference(&m4), NatSet::periodic(4, [2]));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(NatSet::periodic(4, [0, 2]), NatSet::evens());
        let x = NatSet::evens().union(&NatSet::finite([3]));
        assert_eq!(x.to_string(), "mod 2{0}^{3}");
        assert_eq!(x.difference(&NatSet::finite([3])), NatSet::evens());
        assert!(NatSet::evens().complement() == NatSet::odds());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "{}",
            "{0,5}",
            "cofinite{}",
            "cofinite{1,4}",
            "mod 2{1}",
            "mod 3{0,2}^{1,3}",
        ] {
            let parsed: NatSet = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert!("mod 0{}".parse::<NatSet>().is_err());
        assert!("{a}".parse::<NatSet>().is_err());
        assert!("{1} x".parse::<NatSet>().is_err());
    }

    #[test]
    fn first_member() {
        assert_eq!(NatSet::cofinite([0, 1]).first(), Some(2));
        assert_eq!(NatSet::odds().first(), Some(1));
        assert_eq!(NatSet::empty().first(), None);
    }
}
