use std::fmt;
use std::str::FromStr;

use super::{FiniteFrame, FrameError};

/// An element of a specific [`FiniteFrame`]. Binary operations check that
/// both operands come from the same frame.
#[derive(Clone, Copy)]
pub struct FrameElement<'a> {
    frame: &'a FiniteFrame,
    id: usize,
}

impl fmt::Debug for FrameElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.frame.name(), self.name())
    }
}

impl PartialEq for FrameElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.frame.same_frame(other.frame) && self.id == other.id
    }
}

impl Eq for FrameElement<'_> {}

impl<'a> FrameElement<'a> {
    pub(crate) fn new(frame: &'a FiniteFrame, id: usize) -> Self {
        Self { frame, id }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn name(&self) -> &'a str {
        self.frame.element_name(self.id)
    }

    pub fn frame(&self) -> &'a FiniteFrame {
        self.frame
    }

    fn check(&self, other: &FrameElement<'_>) -> Result<(), FrameError> {
        if self.frame.same_frame(other.frame) {
            Ok(())
        } else {
            Err(FrameError::Mismatch)
        }
    }

    fn lift(&self, id: usize) -> FrameElement<'a> {
        FrameElement::new(self.frame, id)
    }

    pub fn leq(&self, other: &FrameElement<'_>) -> Result<bool, FrameError> {
        self.check(other)?;
        Ok(self.frame.leq(self.id, other.id))
    }

    pub fn join(&self, other: &FrameElement<'_>) -> Result<FrameElement<'a>, FrameError> {
        self.check(other)?;
        Ok(self.lift(self.frame.join(self.id, other.id)))
    }

    pub fn meet(&self, other: &FrameElement<'_>) -> Result<FrameElement<'a>, FrameError> {
        self.check(other)?;
        Ok(self.lift(self.frame.meet(self.id, other.id)))
    }

    /// Heyting implication: the largest `c` with `self ∧ c <= other`.
    pub fn implies(&self, other: &FrameElement<'_>) -> Result<FrameElement<'a>, FrameError> {
        self.check(other)?;
        Ok(self.lift(self.frame.implies(self.id, other.id)))
    }

    /// Pseudo-complement `self ⇒ ⊥`.
    pub fn negation(&self) -> FrameElement<'a> {
        self.lift(self.frame.negation(self.id))
    }

    /// The opens of the closed complement: the up-set `{V | self <= V}`.
    pub fn closed_complement(&self) -> Vec<FrameElement<'a>> {
        (0..self.frame.len())
            .filter(|&v| self.frame.leq(self.id, v))
            .map(|v| self.lift(v))
            .collect()
    }

    pub fn way_below(&self, other: &FrameElement<'_>) -> Result<bool, FrameError> {
        self.check(other)?;
        Ok(self.frame.way_below(self.id, other.id))
    }

    /// A witness `W` with `other ∨ W = ⊤` and `self ∧ W = ⊥`, if any.
    pub fn rather_below(&self, other: &FrameElement<'_>) -> Result<Option<FrameElement<'a>>, FrameError> {
        self.check(other)?;
        Ok(self.frame.rather_below(self.id, other.id).map(|w| self.lift(w)))
    }

    pub fn completely_below(&self, other: &FrameElement<'_>) -> Result<bool, FrameError> {
        self.check(other)?;
        Ok(self.frame.completely_below(self.id, other.id))
    }

    /// A dyadic scale from `self` to `other`, see [`FiniteFrame::build_scale`].
    pub fn build_scale(&self, other: &FrameElement<'_>, depth: u32) -> Result<Scale, FrameError> {
        self.check(other)?;
        self.frame.build_scale(self.id, other.id, depth)
    }
}

/// A family `U_q` indexed by `q = k / 2^depth`, `k = 0..=2^depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scale {
    pub depth: u32,
    pub members: Vec<usize>,
}

impl Scale {
    pub fn at(&self, k: usize) -> usize {
        self.members[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Compact,
    Regular,
    CompletelyRegular,
    LocallyCompact,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Compact,
        Property::Regular,
        Property::CompletelyRegular,
        Property::LocallyCompact,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Property::Compact => "compact",
            Property::Regular => "regular",
            Property::CompletelyRegular => "completely_regular",
            Property::LocallyCompact => "locally_compact",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

/// An open `V` together with the opens related to it whose join falls short
/// of `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub open: usize,
    pub related: Vec<usize>,
    pub join: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl FiniteFrame {
    /// The rather-below relation as a matrix.
    pub fn rather_below_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n)
            .map(|a| (0..n).map(|b| self.rather_below(a, b).is_some()).collect())
            .collect()
    }

    fn completely_below_matrix(&self) -> &Vec<Vec<bool>> {
        self.completely_below.get_or_init(|| {
            let n = self.len();
            let mut rel = self.rather_below_matrix();
            // Largest interpolative subrelation: drop pairs without an
            // interpolant until nothing changes.
            loop {
                let next: Vec<Vec<bool>> = (0..n)
                    .map(|x| {
                        (0..n)
                            .map(|y| rel[x][y] && (0..n).any(|z| rel[x][z] && rel[z][y]))
                            .collect()
                    })
                    .collect();
                if next == rel {
                    break rel;
                }
                rel = next;
            }
        })
    }

    pub fn completely_below(&self, a: usize, b: usize) -> bool {
        self.completely_below_matrix()[a][b]
    }

    /// Dyadic scale by repeated midpoint interpolation in the completely
    /// below relation. Interpolants are chosen first in [`Self::enumeration`].
    pub fn build_scale(&self, a: usize, b: usize, depth: u32) -> Result<Scale, FrameError> {
        if !self.completely_below(a, b) {
            return Err(FrameError::NotCompletelyBelow);
        }
        let rel = self.completely_below_matrix();
        let size = 1usize << depth;
        let mut members = vec![usize::MAX; size + 1];
        members[0] = a;
        members[size] = b;
        let mut stack = vec![(0usize, size)];
        while let Some((lo, hi)) = stack.pop() {
            if hi - lo < 2 {
                continue;
            }
            let mid = (lo + hi) / 2;
            let (x, y) = (members[lo], members[hi]);
            let z = self
                .enumeration
                .iter()
                .copied()
                .find(|&z| rel[x][z] && rel[z][y])
                .expect("fixed point of interpolation always has an interpolant");
            members[mid] = z;
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
        Ok(Scale { depth, members })
    }

    pub fn check_property(&self, property: Property) -> PropertyVerdict {
        let n = self.len();
        if property == Property::Compact {
            let holds = self.way_below(self.top, self.top);
            return PropertyVerdict {
                property,
                holds,
                counterexample: (!holds).then(|| Counterexample {
                    open: self.top,
                    related: vec![],
                    join: self.bottom,
                }),
            };
        }
        let related = |u: usize, v: usize| match property {
            Property::Regular => self.rather_below(u, v).is_some(),
            Property::CompletelyRegular => self.completely_below(u, v),
            Property::LocallyCompact => self.way_below(u, v),
            Property::Compact => unreachable!(),
        };
        for &v in &self.enumeration {
            let below: Vec<usize> = (0..n).filter(|&u| related(u, v)).collect();
            let join = self.join_all(below.iter().copied());
            if join != v {
                return PropertyVerdict {
                    property,
                    holds: false,
                    counterexample: Some(Counterexample {
                        open: v,
                        related: below,
                        join,
                    }),
                };
            }
        }
        PropertyVerdict {
            property,
            holds: true,
            counterexample: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_frames::FiniteFrame;

    fn sierpinski() -> FiniteFrame {
        FiniteFrame::sierpinski()
    }

    #[test]
    fn sierpinski_implication_and_negation() {
        let s = sierpinski();
        let (z, u, one) = (
            s.element_by_name("0").unwrap(),
            s.element_by_name("u").unwrap(),
            s.element_by_name("1").unwrap(),
        );
        assert_eq!(u.implies(&z).unwrap(), z);
        assert_eq!(u.negation(), z);
        assert_eq!(z.negation(), one);
        for x in [z, u, one] {
            assert_eq!(x.implies(&x).unwrap(), one);
        }
        assert_eq!(u.closed_complement(), vec![u, one]);
    }

    #[test]
    fn sierpinski_relations() {
        let s = sierpinski();
        let (z, u, one) = (
            s.element_by_name("0").unwrap(),
            s.element_by_name("u").unwrap(),
            s.element_by_name("1").unwrap(),
        );
        assert_eq!(u.rather_below(&u).unwrap(), None);
        assert_eq!(z.rather_below(&u).unwrap(), Some(one));
        assert!(u.completely_below(&one).unwrap());
        assert!(!u.completely_below(&u).unwrap());
        assert!(one.way_below(&one).unwrap());

        let v = s.check_property(Property::Regular);
        assert!(!v.holds);
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.open, u.id());
        assert_eq!(cx.join, z.id());
        assert!(s.check_property(Property::Compact).holds);
        assert!(s.check_property(Property::LocallyCompact).holds);
    }

    #[test]
    fn sierpinski_scale() {
        let s = sierpinski();
        let u = s.element_by_name("u").unwrap();
        let one = s.element_by_name("1").unwrap();
        let scale = u.build_scale(&one, 2).unwrap();
        assert_eq!(scale.members.len(), 5);
        assert_eq!(scale.at(0), u.id());
        assert_eq!(scale.at(4), one.id());
        for w in scale.members.windows(2) {
            assert!(s.rather_below(w[0], w[1]).is_some());
        }
        assert_eq!(u.build_scale(&u, 2), Err(FrameError::NotCompletelyBelow));
    }

    #[test]
    fn constant_scale_when_endpoints_agree() {
        let b = FiniteFrame::boolean(2);
        let scale = b.build_scale(1, 1, 3).unwrap();
        assert!(scale.members.iter().all(|&m| m == 1));
    }

    #[test]
    fn boolean_relations_are_order() {
        let b = FiniteFrame::boolean(2);
        for a in 0..4 {
            for c in 0..4 {
                let le = b.leq(a, c);
                assert_eq!(b.rather_below(a, c).is_some(), le);
                assert_eq!(b.completely_below(a, c), le);
                assert_eq!(b.way_below(a, c), le);
                // ¬a ∨ c, with ¬a the set complement
                assert_eq!(b.implies(a, c), b.join(b.negation(a), c));
                if le {
                    assert_eq!(b.rather_below(a, c), Some(3 ^ a));
                }
            }
        }
        for p in Property::ALL {
            assert!(b.check_property(p).holds);
        }
    }

    #[test]
    fn mismatched_frames_are_rejected() {
        let a = FiniteFrame::sierpinski();
        let b = FiniteFrame::sierpinski();
        let x = a.element(0);
        let y = b.element(0);
        assert_eq!(x.implies(&y).unwrap_err(), FrameError::Mismatch);
        assert_eq!(x.rather_below(&y).unwrap_err(), FrameError::Mismatch);
    }
}
