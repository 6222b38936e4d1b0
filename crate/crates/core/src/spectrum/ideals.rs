use std::fmt;
use std::str::FromStr;

use crate::compactification::{is_proper, PartialMap};
use crate::cstar::{AlgElement, DeskAlgebra, IndexMorphism, StarAlgebra};
use crate::locale::{Discrete, Grid, IndexMap, Locale, NatSet};

use super::{index_set, spec, SpectrumError};

/// The closed ideal of functions vanishing off `supp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedIdealDesc {
    pub supp: NatSet,
}

impl ClosedIdealDesc {
    pub fn new(supp: NatSet) -> Self {
        Self { supp }
    }

    pub fn zero() -> Self {
        Self::new(NatSet::empty())
    }

    pub fn whole(a: &DeskAlgebra) -> Self {
        Self::new(index_set(a))
    }

    pub fn contains(&self, x: &AlgElement) -> bool {
        x.support().iter().all(|&i| self.supp.contains(i))
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.supp.is_subset(&other.supp)
    }

    /// Checks that the support lies in the index set of `a`.
    pub fn within(self, a: &DeskAlgebra) -> Result<Self, SpectrumError> {
        if self.supp.is_subset(&index_set(a)) {
            Ok(self)
        } else {
            Err(SpectrumError::OutOfRange(self.to_string(), a.name().to_string()))
        }
    }

    /// Parses `ideal supp={..}` or `ideal cosupp={..}` relative to `a`.
    pub fn parse_for(a: &DeskAlgebra, text: &str) -> Result<Self, SpectrumError> {
        let t = text.trim();
        let t = t.strip_prefix("ideal").unwrap_or(t).trim();
        let err = |m: &str| SpectrumError::Parse(text.to_string(), m.to_string());
        let (cosupp, body) = if let Some(b) = t.strip_prefix("cosupp=") {
            (true, b)
        } else if let Some(b) = t.strip_prefix("supp=") {
            (false, b)
        } else {
            return Err(err("expected supp={..} or cosupp={..}"));
        };
        let set: NatSet = body.parse().map_err(|e: crate::syntax::SyntaxError| err(&e.message))?;
        let supp = if cosupp { index_set(a).difference(&set) } else { set };
        Self::new(supp).within(a)
    }
}

/// `ideal supp={..}`, or `ideal cosupp={..}` when the support is cofinite.
impl fmt::Display for ClosedIdealDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.supp.cofinite_missing() {
            Some(missing) if !self.supp.is_finite() => {
                write!(f, "ideal cosupp={}", NatSet::finite(missing))
            }
            _ => write!(f, "ideal supp={}", self.supp),
        }
    }
}

impl FromStr for ClosedIdealDesc {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_for(&DeskAlgebra::finsupp(), s)
    }
}

/// `⋃_{i ∈ I} D(i)`, taken over the basis elements `e_j` generating `I`.
pub fn ideal_to_open(a: &DeskAlgebra, ideal: &ClosedIdealDesc) -> NatSet {
    let universe = index_set(a);
    match ideal.supp.finite_members() {
        Some(js) => js
            .into_iter()
            .map(|j| NatSet::finite(AlgElement::basis(j).support()))
            .fold(NatSet::empty(), |acc, d| acc.union(&d))
            .intersection(&universe),
        None => ideal.supp.intersection(&universe),
    }
}

/// The functions vanishing outside `u`.
pub fn open_to_ideal(a: &DeskAlgebra, u: &NatSet) -> ClosedIdealDesc {
    ClosedIdealDesc::new(u.intersection(&index_set(a)))
}

/// The least closed ideal containing `f(I)`: spanned by the images
/// `f(e_i)` of the generators, whose supports are the fibres `σ⁻¹(i)`.
pub fn pushforward_ideal(f: &IndexMorphism, ideal: &ClosedIdealDesc) -> ClosedIdealDesc {
    match ideal.supp.finite_members() {
        Some(gens) => {
            let supp = gens
                .into_iter()
                .map(|i| NatSet::finite(f.apply(&AlgElement::basis(i)).support()))
                .fold(NatSet::empty(), |acc, s| acc.union(&s));
            ClosedIdealDesc::new(supp)
        }
        None => ClosedIdealDesc::new(f.sigma.preimage(&ideal.supp).intersection(&index_set(&f.target))),
    }
}

/// The same ideal computed on spectra: the preimage of the open of `I`
/// under the induced map, turned back into an ideal.
pub fn pushforward_ideal_via_spectra(f: &IndexMorphism, ideal: &ClosedIdealDesc) -> ClosedIdealDesc {
    let g = induced_map(f);
    let u = ideal_to_open(&f.source, ideal);
    open_to_ideal(&f.target, &g.pullback(&u))
}

/// The partial map `Spec B ⇀ Spec A` induced by `f : A → B`: the character
/// `ev_j ∘ f` is `ev_i` when `f(e_i)_j ≠ 0` and zero otherwise. For `ℂⁿ`
/// targets the table is computed from `f` on the basis; otherwise it is
/// read off the index map.
pub fn induced_map(f: &IndexMorphism) -> PartialMap<Discrete, Discrete> {
    let label = format!("spec[{}]", f.sigma);
    let table = match (f.target.dim(), f.source.dim()) {
        (Some(m), Some(n)) => {
            let mut pairs = Vec::new();
            for j in 0..m {
                if let Some(i) = (0..n).find(|&i| !f.apply(&AlgElement::basis(i)).coord(j).is_zero()) {
                    pairs.push((j, i));
                }
            }
            IndexMap::table(pairs)
        }
        _ => f.sigma.clone(),
    };
    PartialMap::from_index_map(spec(&f.target), spec(&f.source), table, &label)
        .expect("index morphisms land in the source spectrum")
}

/// Outcome of [`nondegenerate_iff_proper`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegVerdict {
    /// The ideal spanned by `f(A)` is dense, i.e. everything.
    pub nondegenerate: bool,
    /// The induced map is total, `g*(Spec A) = Spec B`.
    pub total: bool,
    pub proper: bool,
    pub dom: NatSet,
}

impl NondegVerdict {
    pub fn agree(&self) -> bool {
        self.nondegenerate == (self.total && self.proper)
    }
}

pub fn nondegenerate_iff_proper(f: &IndexMorphism, grid: &Grid) -> NondegVerdict {
    let spanned = pushforward_ideal(f, &ClosedIdealDesc::whole(&f.source));
    let nondegenerate = spanned.supp == index_set(&f.target);
    let g = induced_map(f);
    let dom = g.pullback(&g.target.top());
    NondegVerdict {
        nondegenerate,
        total: g.source.eq_open(&dom, &g.source.top()),
        proper: is_proper(&g, grid).holds,
        dom,
    }
}
