//! Presentations of locally compact regular locales with decidable
//! relations, and the gluing predicate ω.

mod discrete;
mod frame;
mod index_map;
mod interval;
mod intervals;
mod natset;
mod presentation;

pub use discrete::Discrete;
pub use frame::FramePresentation;
pub use index_map::IndexMap;
pub use interval::Interval;
pub use intervals::IntervalSet;
pub use natset::{NatSet, MAX_PERIOD};
pub use presentation::{parse_locales, LocaleKind, LocalePresentation, LocaleSpec, OpenExpr};

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::finite_frames::Property;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocaleError {
    #[error("unsupported open form")]
    UnsupportedForm,
    #[error("open {0} is not contained in the space")]
    OutsideSpace(String),
    #[error("cannot parse open {0:?}: {1}")]
    Parse(String, String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
}

/// Bounds for the generated grids that stand in for "all opens" on
/// infinite instances. Everything generated from a grid is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    /// Discrete instances: supports are drawn from `0..=max_point`.
    pub max_point: u64,
    /// Interval instances: endpoints are multiples of `1/denominator`.
    pub denominator: u32,
    /// Interval instances: at most this many components per open.
    pub max_components: usize,
    /// Number of approximation stages used by the spot checks.
    pub stages: u32,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            max_point: 7,
            denominator: 8,
            max_components: 2,
            stages: 4,
        }
    }
}

impl Grid {
    pub fn small() -> Self {
        Self {
            max_point: 4,
            denominator: 4,
            max_components: 1,
            stages: 3,
        }
    }
}

/// A locale with decidable order, negation, way-below, and a decision
/// procedure for ω.
pub trait Locale: Clone + Send + Sync + 'static {
    type Open: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn name(&self) -> &str;
    fn top(&self) -> Self::Open;
    fn bottom(&self) -> Self::Open;
    fn join(&self, a: &Self::Open, b: &Self::Open) -> Self::Open;
    fn meet(&self, a: &Self::Open, b: &Self::Open) -> Self::Open;
    fn leq(&self, a: &Self::Open, b: &Self::Open) -> bool;
    /// The pseudocomplement `a ⇒ ∅`.
    fn negation(&self, a: &Self::Open) -> Self::Open;
    fn way_below(&self, a: &Self::Open, b: &Self::Open) -> bool;

    /// ω(u): some `W ≪ X` with `u ∨ W = X`; returns such a `W`.
    fn omega(&self, u: &Self::Open) -> Option<Self::Open>;

    /// Positivity; `None` when the presentation has no positivity
    /// capability.
    fn positive(&self, a: &Self::Open) -> Option<bool>;

    /// Opens way below `v` whose joins over increasing stages exhaust `v`.
    fn approximants(&self, v: &Self::Open, stage: u32) -> Vec<Self::Open>;

    /// The declared sample of opens for spot checks.
    fn sample_opens(&self, grid: &Grid) -> Vec<Self::Open>;

    /// Candidates for the defining `∃W` search of ω.
    fn witness_grid(&self, grid: &Grid) -> Vec<Self::Open>;

    /// Every open, when there are finitely many.
    fn all_opens(&self) -> Option<Vec<Self::Open>> {
        None
    }

    fn parse_open(&self, text: &str) -> Result<Self::Open, LocaleError>;

    fn show(&self, a: &Self::Open) -> String {
        a.to_string()
    }

    fn eq_open(&self, a: &Self::Open, b: &Self::Open) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    fn way_below_whole(&self, a: &Self::Open) -> bool {
        self.way_below(a, &self.top())
    }

    fn is_cover(&self, a: &Self::Open) -> bool {
        self.leq(&self.top(), a)
    }

    fn join_all<'a, I: IntoIterator<Item = &'a Self::Open>>(&self, items: I) -> Self::Open {
        items.into_iter().fold(self.bottom(), |acc, x| self.join(&acc, x))
    }

    /// A witness `W` with `b ∨ W = X` and `a ∧ W = ∅`, when `a ⊲ b`.
    fn rather_below_witness(&self, a: &Self::Open, b: &Self::Open) -> Option<Self::Open> {
        let w = self.negation(a);
        self.is_cover(&self.join(b, &w)).then_some(w)
    }

    fn rather_below(&self, a: &Self::Open, b: &Self::Open) -> bool {
        self.rather_below_witness(a, b).is_some()
    }

    /// Defaults to `⊲`, which is correct whenever `⊲` already interpolates.
    fn completely_below(&self, a: &Self::Open, b: &Self::Open) -> bool {
        self.rather_below(a, b)
    }

    /// The relation a spot check for `property` decomposes opens along.
    fn relation(&self, property: Property, a: &Self::Open, b: &Self::Open) -> bool {
        match property {
            Property::Regular => self.rather_below(a, b),
            Property::CompletelyRegular => self.completely_below(a, b),
            Property::LocallyCompact | Property::Compact => self.way_below(a, b),
        }
    }
}

/// Locales whose open sublocales are presented by the same data.
pub trait HasSubspaces: Locale {
    /// The open sublocale `u`, with opens the opens of `self` below `u`.
    fn subspace(&self, u: &Self::Open) -> Self;
}

/// The defining search for ω over a witness grid: the first `W` in grid
/// order with `W ≪ X` and `u ∨ W = X`.
pub fn omega_by_search<L: Locale>(x: &L, u: &L::Open, witnesses: &[L::Open]) -> Option<L::Open> {
    witnesses
        .iter()
        .find(|w| x.way_below_whole(w) && x.is_cover(&x.join(u, w)))
        .cloned()
}

/// Checks that ω is monotone and meet-preserving on a pair, and that
/// `ω(X)` holds.
pub fn omega_cartesian_check<L: Locale>(x: &L, a: &L::Open, b: &L::Open) -> bool {
    let wa = x.omega(a).is_some();
    let wb = x.omega(b).is_some();
    let wm = x.omega(&x.meet(a, b)).is_some();
    let top = x.omega(&x.top()).is_some();
    let monotone = !x.leq(a, b) || !wa || wb;
    top && monotone && wm == (wa && wb)
}

/// Result of a spot check of compactness, (complete) regularity or local
/// compactness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpotVerdict<O> {
    pub property: Property,
    pub holds: bool,
    /// The open whose decomposition failed.
    pub open: Option<O>,
    /// The related opens that were found below it.
    pub related: Vec<O>,
    /// A probe `P ≪ V` not covered by the related opens.
    pub uncovered: Option<O>,
}

impl<O> SpotVerdict<O> {
    fn pass(property: Property) -> Self {
        Self {
            property,
            holds: true,
            open: None,
            related: Vec::new(),
            uncovered: None,
        }
    }
}

/// Spot-checks `property` on the sampled opens of `x`.
///
/// Compactness is `X ≪ X`. For the other properties each sampled `V` is
/// decomposed into the opens `U` related to it among its approximants;
/// every sampled probe `P ≪ V` must lie below the join of
/// those `U` at some stage. On finite instances the probes include `V`
/// itself, which makes the check exact.
pub fn spot_check<L: Locale>(x: &L, property: Property, grid: &Grid) -> SpotVerdict<L::Open> {
    if property == Property::Compact {
        let top = x.top();
        if x.way_below_whole(&top) {
            return SpotVerdict::pass(property);
        }
        return SpotVerdict {
            property,
            holds: false,
            open: Some(top),
            related: Vec::new(),
            uncovered: None,
        };
    }
    let samples = x.all_opens().unwrap_or_else(|| x.sample_opens(grid));
    for v in &samples {
        let probes: Vec<&L::Open> = samples.iter().filter(|p| x.way_below(p, v)).collect();
        let mut related: Vec<L::Open> = Vec::new();
        let mut covered = vec![false; probes.len()];
        for stage in 0..=grid.stages {
            for a in x.approximants(v, stage) {
                if x.relation(property, &a, v) && !related.contains(&a) {
                    related.push(a);
                }
            }
            let j = x.join_all(&related);
            for (c, p) in covered.iter_mut().zip(&probes) {
                *c = *c || x.leq(p, &j);
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            related.sort();
            return SpotVerdict {
                property,
                holds: false,
                open: Some(v.clone()),
                related,
                uncovered: Some(probes[i].clone()),
            };
        }
    }
    SpotVerdict::pass(property)
}

/// The largest interpolative subrelation of `rel` on a finite list of
/// opens: iterate `R ↦ {(x,y) ∈ R | ∃z. x R z R y}` to a fixed point.
pub fn largest_interpolative<O>(opens: &[O], rel: impl Fn(&O, &O) -> bool) -> Vec<Vec<bool>> {
    let n = opens.len();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| rel(&opens[i], &opens[j])).collect())
        .collect();
    loop {
        let next: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| r[i][j] && (0..n).any(|k| r[i][k] && r[k][j])).collect())
            .collect();
        if next == r {
            return r;
        }
        r = next;
    }
}
