use num_traits::{One, Signed};

use crate::cstar::{AlgElement, DeskAlgebra};
use crate::exact_reals::ContinuousReal;
use crate::locale::{Discrete, Grid, Locale, LocaleError, NatSet};
use crate::rational::{qi, Q};

use super::{spec, SpectrumError};

/// A bracket `lo <= ‖h‖ < hi`. When `lo >= 0` the witness is a positive
/// open on which `|h| > lo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormBracket<O> {
    pub lo: Q,
    pub hi: Q,
    pub witness: Option<O>,
}

/// The located search behind the continuity of the norm. With
/// `L = {q | q < 0 or (|h| > q) is positive}`, each step splits `[lo, hi]`
/// at thirds `q < q'` and uses the dichotomy "either `‖h‖ < q'` or
/// `q ∈ L`", decided by positivity of the open `level(q)` where `|h| > q`.
/// The search starts from `lo = -1` and the declared bound `hi`.
pub fn norm_from_positivity_in<L: Locale>(
    x: &L,
    level: impl Fn(&Q) -> L::Open,
    bound: &Q,
    eps: &Q,
) -> Result<NormBracket<L::Open>, SpectrumError> {
    if !eps.is_positive() {
        return Err(SpectrumError::NonPositiveEps);
    }
    let mut lo = qi(-1);
    let mut hi = bound.clone();
    let mut witness = None;
    let three = qi(3);
    while &hi - &lo > *eps {
        let third = (&hi - &lo) / &three;
        let q = &lo + &third;
        let q2 = &hi - &third;
        let u = level(&q);
        let positive = if q.is_negative() {
            true
        } else {
            x.positive(&u).ok_or(SpectrumError::NotOvert)?
        };
        if positive {
            if !q.is_negative() {
                witness = Some(u);
            }
            lo = q;
        } else {
            hi = q2;
        }
    }
    if lo.is_negative() {
        witness = None;
    }
    Ok(NormBracket { lo, hi, witness })
}

fn declared_bound(h: &AlgElement) -> Q {
    h.coords().map(|(_, v)| v.modulus_bound()).max().unwrap_or_default() + Q::one()
}

/// `{j | |h_j| > q}`, decided by a coordinate scan.
fn level_set(h: &AlgElement, q: &Q) -> NatSet {
    NatSet::finite(h.coords().filter(|(_, v)| v.modulus_gt(q)).map(|(i, _)| i))
}

/// [`norm_from_positivity_in`] on `Spec A`, with the witness reduced to a
/// single index `j` where `|h_j| > lo`.
pub fn norm_from_positivity(a: &DeskAlgebra, h: &AlgElement, eps: &Q) -> Result<NormBracket<u64>, SpectrumError> {
    let h = a.element(h.clone())?;
    let x = spec(a);
    let b = norm_from_positivity_in(&x, |q| level_set(&h, q), &declared_bound(&h), eps)?;
    Ok(NormBracket {
        lo: b.lo,
        hi: b.hi,
        witness: b.witness.and_then(|u| u.first()),
    })
}

/// `‖h‖` as a continuous real driven by [`norm_from_positivity`].
pub fn norm_continuous(a: &DeskAlgebra, h: &AlgElement) -> Result<ContinuousReal, SpectrumError> {
    let h = a.element(h.clone())?;
    let a = a.clone();
    Ok(ContinuousReal::new(move |eps| {
        let b = norm_from_positivity(&a, &h, eps).expect("spectra of desk algebras are overt");
        (b.lo, b.hi)
    }))
}

/// Local positivity on the sampled opens: every nonempty open contains a
/// positive basic open (a single point).
pub fn local_positivity(x: &Discrete, grid: &Grid) -> Result<(), String> {
    for u in x.sample_opens(grid) {
        if u.is_empty() {
            if x.positive(&u) == Some(true) {
                return Err("the empty open is positive".into());
            }
            continue;
        }
        let j = u.first().expect("nonempty");
        if x.positive(&NatSet::singleton(j)) != Some(true) {
            return Err(format!("{u} has no positive basic open"));
        }
    }
    Ok(())
}

/// A locale with its positivity predicate withheld.
#[derive(Debug, Clone)]
pub struct NoPositivity<L: Locale>(pub L);

impl<L: Locale> Locale for NoPositivity<L> {
    type Open = L::Open;

    fn name(&self) -> &str {
        self.0.name()
    }
    fn top(&self) -> L::Open {
        self.0.top()
    }
    fn bottom(&self) -> L::Open {
        self.0.bottom()
    }
    fn join(&self, a: &L::Open, b: &L::Open) -> L::Open {
        self.0.join(a, b)
    }
    fn meet(&self, a: &L::Open, b: &L::Open) -> L::Open {
        self.0.meet(a, b)
    }
    fn leq(&self, a: &L::Open, b: &L::Open) -> bool {
        self.0.leq(a, b)
    }
    fn negation(&self, a: &L::Open) -> L::Open {
        self.0.negation(a)
    }
    fn way_below(&self, a: &L::Open, b: &L::Open) -> bool {
        self.0.way_below(a, b)
    }
    fn omega(&self, u: &L::Open) -> Option<L::Open> {
        self.0.omega(u)
    }
    fn positive(&self, _a: &L::Open) -> Option<bool> {
        None
    }
    fn approximants(&self, v: &L::Open, stage: u32) -> Vec<L::Open> {
        self.0.approximants(v, stage)
    }
    fn sample_opens(&self, grid: &Grid) -> Vec<L::Open> {
        self.0.sample_opens(grid)
    }
    fn witness_grid(&self, grid: &Grid) -> Vec<L::Open> {
        self.0.witness_grid(grid)
    }
    fn parse_open(&self, text: &str) -> Result<L::Open, LocaleError> {
        self.0.parse_open(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{pow2_neg, q};

    #[test]
    fn brackets() {
        let fs = DeskAlgebra::finsupp();
        let eps = pow2_neg(20);
        let h: AlgElement = "0:1/2".parse().unwrap();
        let b = norm_from_positivity(&fs, &h, &eps).unwrap();
        assert!(b.lo <= q(1, 2) && q(1, 2) < b.hi && &b.hi - &b.lo <= eps);
        assert_eq!(b.witness, Some(0));
        let h: AlgElement = "0:3/10,1:7/10".parse().unwrap();
        let b = norm_from_positivity(&fs, &h, &eps).unwrap();
        assert!(b.lo <= q(7, 10) && q(7, 10) < b.hi);
        assert_eq!(b.witness, Some(1));
        let b = norm_from_positivity(&fs, &AlgElement::zero(), &eps).unwrap();
        assert!(b.lo.is_negative() && b.hi.is_positive() && b.witness.is_none());
    }

    #[test]
    fn withheld_positivity() {
        let x = NoPositivity(spec(&DeskAlgebra::finsupp()));
        let h: AlgElement = "0:1".parse().unwrap();
        let r = norm_from_positivity_in(&x, |q| level_set(&h, q), &qi(2), &pow2_neg(4));
        assert_eq!(r.unwrap_err(), SpectrumError::NotOvert);
        assert!(local_positivity(&spec(&DeskAlgebra::finsupp()), &Grid::small()).is_ok());
    }
}
