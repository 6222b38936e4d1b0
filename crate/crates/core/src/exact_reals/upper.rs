use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{bits_for, exact_sqrt, pow2_neg, scaled_isqrt, ComplexQ, Q};

use super::RealError;

/// Finest refinement used when an `lt` query has to be decided by
/// bracketing: queries within `2^-MAX_QUERY_BITS` of the value answer false.
pub const MAX_QUERY_BITS: u32 = 128;

type Predicate = Arc<dyn Fn(&Q) -> bool + Send + Sync>;
type Members = Arc<dyn Fn(usize) -> Option<UpperReal> + Send + Sync>;
type Modulus = Arc<dyn Fn(&Q) -> Vec<UpperReal> + Send + Sync>;

/// An enumerable family of upper reals together with a modulus: for every
/// `eps > 0`, `modulus(eps)` is a finite subfamily whose maximum is within
/// `eps` of every member.
#[derive(Clone)]
pub struct SupFamily {
    members: Members,
    modulus: Modulus,
}

impl SupFamily {
    pub fn new(
        members: impl Fn(usize) -> Option<UpperReal> + Send + Sync + 'static,
        modulus: impl Fn(&Q) -> Vec<UpperReal> + Send + Sync + 'static,
    ) -> Self {
        Self {
            members: Arc::new(members),
            modulus: Arc::new(modulus),
        }
    }

    pub fn member(&self, i: usize) -> Option<UpperReal> {
        (self.members)(i)
    }

    pub fn subfamily(&self, eps: &Q) -> Vec<UpperReal> {
        (self.modulus)(eps)
    }
}

enum Node {
    Rational(Q),
    /// `sqrt(s)` for a nonnegative rational `s`.
    Sqrt(Q),
    Predicate {
        lt: Predicate,
        bound: Q,
        floor: Q,
    },
    Add(UpperReal, UpperReal),
    MulNonneg(UpperReal, UpperReal),
    Scale(Q, UpperReal),
    Max(Vec<UpperReal>),
    Sup {
        family: SupFamily,
        bound: Q,
        floor: Option<Q>,
    },
    Continuous(super::ContinuousReal),
}

/// An upper semicontinuous real given by its strict rational upper bounds.
///
/// `lt(q)` answers "x < q". Besides the predicate every value can produce a
/// bracket `(lo, hi)` with `!lt(lo)`, `lt(hi)` and `hi - lo <= prec`, which is
/// what compound operations search over.
#[derive(Clone)]
pub struct UpperReal(Arc<Node>);

impl fmt::Debug for UpperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "UpperReal({v})"),
            None => {
                let (lo, hi) = self.bracket(&pow2_neg(16));
                write!(f, "UpperReal(~[{lo}, {hi}))")
            }
        }
    }
}

impl UpperReal {
    fn node(n: Node) -> Self {
        Self(Arc::new(n))
    }

    pub fn rational(v: Q) -> Self {
        Self::node(Node::Rational(v))
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    /// `sqrt(s)` for `s >= 0`.
    pub fn sqrt(s: Q) -> Self {
        assert!(!s.is_negative(), "sqrt of a negative rational");
        match exact_sqrt(&s) {
            Some(r) => Self::rational(r),
            None => Self::node(Node::Sqrt(s)),
        }
    }

    /// `|z|` for a complex rational.
    pub fn modulus(z: &ComplexQ) -> Self {
        if z.im.is_zero() {
            Self::rational(z.re.abs())
        } else {
            Self::sqrt(z.norm_sqr())
        }
    }

    /// Wraps a caller-supplied predicate. `bound` must satisfy `lt(bound)`
    /// and `floor` must satisfy `!lt(floor)`.
    pub fn from_predicate(
        lt: impl Fn(&Q) -> bool + Send + Sync + 'static,
        bound: Q,
        floor: Q,
    ) -> Result<Self, RealError> {
        if !lt(&bound) {
            return Err(RealError::BoundNotAbove(bound));
        }
        if lt(&floor) {
            return Err(RealError::FloorNotBelow(floor));
        }
        Ok(Self::node(Node::Predicate {
            lt: Arc::new(lt),
            bound,
            floor,
        }))
    }

    /// Supremum of an enumerable family with a modulus.
    pub fn sup(family: SupFamily) -> Result<Self, RealError> {
        if family.member(0).is_none() {
            return Err(RealError::EmptyFamily);
        }
        let sub = family.subfamily(&Q::one());
        if sub.is_empty() {
            return Err(RealError::EmptyFamily);
        }
        let bound = sub.iter().map(|m| m.bound()).max().expect("non-empty") + Q::one();
        let floor = family.member(0).and_then(|m| m.floor());
        Ok(Self::node(Node::Sup { family, bound, floor }))
    }

    pub fn from_continuous(c: super::ContinuousReal) -> Self {
        Self::node(Node::Continuous(c))
    }

    /// A rational `B` with `self < B`.
    pub fn bound(&self) -> Q {
        match &*self.0 {
            Node::Rational(v) => v + Q::one(),
            Node::Sqrt(s) => s.max(&Q::one()).clone() + Q::one(),
            Node::Predicate { bound, .. } | Node::Sup { bound, .. } => bound.clone(),
            Node::Add(a, b) => a.bound() + b.bound(),
            Node::MulNonneg(a, b) => a.bound() * b.bound(),
            Node::Scale(c, a) => c * a.bound() + Q::one(),
            Node::Max(xs) => xs.iter().map(|x| x.bound()).max().expect("non-empty max"),
            Node::Continuous(c) => c.approx(&Q::one()).1 + Q::one(),
        }
    }

    /// A rational known to be `<= self`, when one is available.
    pub fn floor(&self) -> Option<Q> {
        match &*self.0 {
            Node::Rational(v) => Some(v.clone()),
            Node::Sqrt(_) => Some(Q::zero()),
            Node::Predicate { floor, .. } => Some(floor.clone()),
            Node::Add(a, b) => Some(a.floor()? + b.floor()?),
            Node::MulNonneg(..) => Some(Q::zero()),
            Node::Scale(c, a) => a.floor().map(|f| c * f),
            Node::Max(xs) => xs.iter().filter_map(|x| x.floor()).max(),
            Node::Sup { floor, .. } => floor.clone(),
            Node::Continuous(c) => Some(c.approx(&Q::one()).0),
        }
    }

    /// Whether a nonnegative rational floor is known, so `lt(q)` fails for
    /// every `q < 0`.
    pub fn is_certified_nonneg(&self) -> bool {
        self.floor().is_some_and(|f| !f.is_negative())
    }

    /// The exact rational value when the structure determines one.
    pub fn exact(&self) -> Option<Q> {
        match &*self.0 {
            Node::Rational(v) => Some(v.clone()),
            Node::Add(a, b) => Some(a.exact()? + b.exact()?),
            Node::MulNonneg(a, b) => Some(a.exact()? * b.exact()?),
            Node::Scale(c, a) => Some(c * a.exact()?),
            Node::Max(xs) => xs
                .iter()
                .map(|x| x.exact())
                .collect::<Option<Vec<_>>>()?
                .into_iter()
                .max(),
            _ => None,
        }
    }

    /// `self < q`.
    pub fn lt(&self, q: &Q) -> bool {
        if let Some(v) = self.exact() {
            return v < *q;
        }
        match &*self.0 {
            Node::Sqrt(s) => q.is_positive() && *s < q * q,
            Node::Predicate { lt, .. } => lt(q),
            Node::Max(xs) => xs.iter().all(|x| x.lt(q)),
            _ => self.lt_by_refinement(q),
        }
    }

    fn lt_by_refinement(&self, q: &Q) -> bool {
        let mut bits = 0;
        while bits <= MAX_QUERY_BITS {
            let (lo, hi) = self.bracket(&pow2_neg(bits));
            if hi < *q {
                return true;
            }
            if lo >= *q {
                return false;
            }
            bits += 4;
        }
        false
    }

    /// `(lo, hi)` with `lo <= self < hi` and `hi - lo <= prec`.
    pub fn bracket(&self, prec: &Q) -> (Q, Q) {
        assert!(prec.is_positive(), "precision must be positive");
        match &*self.0 {
            Node::Rational(v) => (v.clone(), v + prec),
            Node::Sqrt(s) => {
                let k = bits_for(prec);
                let m = scaled_isqrt(s, k);
                let den = BigInt::one() << k as usize;
                (Q::new(m.clone(), den.clone()), Q::new(m + 1, den))
            }
            Node::Predicate { lt, bound, floor } => bisect(lt.as_ref(), floor.clone(), bound.clone(), prec),
            Node::Add(a, b) => {
                let half = prec / Q::from_integer(2.into());
                let (la, ha) = a.bracket(&half);
                let (lb, hb) = b.bracket(&half);
                (la + lb, ha + hb)
            }
            Node::MulNonneg(a, b) => {
                let p = (prec / (a.bound() + b.bound() + Q::from_integer(2.into()))).min(Q::one());
                let (la, ha) = a.bracket(&p);
                let (lb, hb) = b.bracket(&p);
                let zero = Q::zero();
                (la.max(zero.clone()) * lb.max(zero), ha * hb)
            }
            Node::Scale(c, a) => {
                if c.is_zero() {
                    return (Q::zero(), prec.clone());
                }
                let (l, h) = a.bracket(&(prec / c));
                (c * l, c * h)
            }
            Node::Max(xs) => {
                let bs: Vec<(Q, Q)> = xs.iter().map(|x| x.bracket(prec)).collect();
                let lo = bs.iter().map(|b| b.0.clone()).max().expect("non-empty");
                let hi = bs.iter().map(|b| b.1.clone()).max().expect("non-empty");
                (lo, hi)
            }
            Node::Sup { family, .. } => {
                let half = prec / Q::from_integer(2.into());
                let sub = family.subfamily(&half);
                assert!(!sub.is_empty(), "modulus returned an empty subfamily");
                let bs: Vec<(Q, Q)> = sub.iter().map(|x| x.bracket(&half)).collect();
                let lo = bs.iter().map(|b| b.0.clone()).max().expect("non-empty");
                let hi = bs.iter().map(|b| b.1.clone()).max().expect("non-empty");
                (lo, hi + half)
            }
            Node::Continuous(c) => {
                let half = prec / Q::from_integer(2.into());
                let (l, u) = c.approx(&half);
                (l, u + half)
            }
        }
    }

    /// The upper bound of a bracket of width `prec`.
    pub fn upper_approx(&self, prec: &Q) -> Q {
        self.bracket(prec).1
    }

    pub fn add(&self, other: &UpperReal) -> UpperReal {
        Self::node(Node::Add(self.clone(), other.clone()))
    }

    pub fn mul_nonneg(&self, other: &UpperReal) -> Result<UpperReal, RealError> {
        if !self.is_certified_nonneg() || !other.is_certified_nonneg() {
            return Err(RealError::SignContract);
        }
        Ok(Self::node(Node::MulNonneg(self.clone(), other.clone())))
    }

    /// `c * self` for a rational `c >= 0`.
    pub fn scale(&self, c: &Q) -> UpperReal {
        assert!(!c.is_negative(), "scale factor must be nonnegative");
        Self::node(Node::Scale(c.clone(), self.clone()))
    }

    pub fn max(&self, other: &UpperReal) -> UpperReal {
        Self::max_of(vec![self.clone(), other.clone()])
    }

    pub fn max_of(xs: Vec<UpperReal>) -> UpperReal {
        assert!(!xs.is_empty(), "max of an empty list");
        if xs.len() == 1 {
            return xs.into_iter().next().expect("one element");
        }
        Self::node(Node::Max(xs))
    }
}

fn bisect(lt: &(dyn Fn(&Q) -> bool + Send + Sync), mut lo: Q, mut hi: Q, prec: &Q) -> (Q, Q) {
    let two = Q::from_integer(2.into());
    while &hi - &lo > *prec {
        let mid = (&lo + &hi) / &two;
        if lt(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Sound comparison at precision `prec`: returns false only when
/// `x > y` has been certified. When true, `x < y + prec`.
pub fn certify_le(x: &UpperReal, y: &UpperReal, prec: &Q) -> bool {
    let (lx, _) = x.bracket(prec);
    let (_, hy) = y.bracket(prec);
    lx < hy
}

/// Whether the brackets of `x` and `y` at `prec` overlap. Equal values
/// always agree; agreeing values differ by less than `2 * prec`.
pub fn agree_within(x: &UpperReal, y: &UpperReal, prec: &Q) -> bool {
    let (lx, hx) = x.bracket(prec);
    let (ly, hy) = y.bracket(prec);
    lx < hy && ly < hx
}
