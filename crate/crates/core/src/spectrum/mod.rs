//! Spectra of the desk algebras as locales, characters, the correspondence
//! between closed ideals and open sublocales, and norms recovered from
//! positivity of the spectrum.

mod characters;
mod ideals;
mod positivity;

pub use characters::{characters, characters_of_unitization, extend_character, Character, PlusCharacter};
pub use ideals::{
    ideal_to_open, induced_map, nondegenerate_iff_proper, open_to_ideal, pushforward_ideal,
    pushforward_ideal_via_spectra, ClosedIdealDesc, NondegVerdict,
};
pub use positivity::{
    local_positivity, norm_continuous, norm_from_positivity, norm_from_positivity_in, NoPositivity, NormBracket,
};

use std::fmt;

use thiserror::Error;

use crate::compactification::{Compactification, CompactifyError, InfOpen};
use crate::cstar::{AlgElement, CStarError, DeskAlgebra, StarAlgebra};
use crate::locale::{Discrete, Grid, Locale, LocaleError, NatSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("locale not overt in this presentation")]
    NotOvert,
    #[error("character is zero on the ideal; no canonical extension")]
    ZeroOnIdeal,
    #[error("cannot parse ideal {0:?}: {1}")]
    Parse(String, String),
    #[error("ideal {0} is not contained in {1}")]
    OutOfRange(String, String),
    #[error("precision must be positive")]
    NonPositiveEps,
    #[error(transparent)]
    CStar(#[from] CStarError),
    #[error(transparent)]
    Compactify(#[from] CompactifyError),
}

/// The index set of an algebra: `{0..n-1}` or ℕ.
pub fn index_set(a: &DeskAlgebra) -> NatSet {
    match a.dim() {
        Some(n) => NatSet::range(n),
        None => NatSet::all(),
    }
}

/// `Spec A`: the discrete locale on the coordinate evaluations.
pub fn spec(a: &DeskAlgebra) -> Discrete {
    Discrete::new(&format!("spec({})", a.name()), index_set(a))
}

/// `D(f)`: the indices where `|f| > 0`.
pub fn d_open(a: &DeskAlgebra, f: &AlgElement) -> Result<NatSet, SpectrumError> {
    let f = a.element(f.clone())?;
    Ok(NatSet::finite(f.support()))
}

/// An open of `Spec∞ A`: a set of characters of `A⁺`, given by the
/// extended evaluations it contains and whether it contains `χ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharSet {
    pub points: NatSet,
    pub inf: bool,
}

impl fmt::Display for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inf {
            write!(f, "{}+inf", self.points)
        } else {
            write!(f, "{}", self.points)
        }
    }
}

/// `Spec∞ A`, presented directly by the sets `D(c, z)` of characters of
/// `A⁺` where `|χ(c, z)| > 0`. The set `D(c, z)` contains `χ∞` iff
/// `z ≠ 0`, and then misses only the finitely many `i` with `c_i = -z`;
/// opens are unions of such sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecInfty {
    name: String,
    universe: NatSet,
}

pub fn spec_infty(a: &DeskAlgebra) -> SpecInfty {
    SpecInfty {
        name: format!("specinf({})", a.name()),
        universe: index_set(a),
    }
}

impl SpecInfty {
    pub fn is_open(&self, s: &CharSet) -> bool {
        s.points.is_subset(&self.universe) && (!s.inf || self.universe.difference(&s.points).is_finite())
    }

    /// `D(c, z)`.
    pub fn d(&self, c: &AlgElement, z: &crate::rational::ComplexQ) -> CharSet {
        if z.is_zero() {
            return CharSet {
                points: NatSet::finite(c.support()),
                inf: false,
            };
        }
        let vanish = c.coords().filter(|(_, v)| (*v + z).is_zero()).map(|(i, _)| i);
        CharSet {
            points: self.universe.difference(&NatSet::finite(vanish)),
            inf: true,
        }
    }
}

impl Locale for SpecInfty {
    type Open = CharSet;

    fn name(&self) -> &str {
        &self.name
    }

    fn top(&self) -> CharSet {
        CharSet {
            points: self.universe.clone(),
            inf: true,
        }
    }

    fn bottom(&self) -> CharSet {
        CharSet {
            points: NatSet::empty(),
            inf: false,
        }
    }

    fn join(&self, a: &CharSet, b: &CharSet) -> CharSet {
        CharSet {
            points: a.points.union(&b.points),
            inf: a.inf || b.inf,
        }
    }

    fn meet(&self, a: &CharSet, b: &CharSet) -> CharSet {
        CharSet {
            points: a.points.intersection(&b.points),
            inf: a.inf && b.inf,
        }
    }

    fn leq(&self, a: &CharSet, b: &CharSet) -> bool {
        a.points.is_subset(&b.points) && (!a.inf || b.inf)
    }

    /// The interior of the complement; it contains `χ∞` iff `a` has
    /// finitely many points and misses `χ∞`.
    fn negation(&self, a: &CharSet) -> CharSet {
        CharSet {
            points: self.universe.difference(&a.points),
            inf: !a.inf && a.points.is_finite(),
        }
    }

    /// The closure of `a` is `a` plus `χ∞` when `a` is infinite; it must lie
    /// in `b`.
    fn way_below(&self, a: &CharSet, b: &CharSet) -> bool {
        self.leq(a, b) && (!(a.inf || !a.points.is_finite()) || b.inf)
    }

    fn omega(&self, _u: &CharSet) -> Option<CharSet> {
        Some(self.top())
    }

    fn positive(&self, a: &CharSet) -> Option<bool> {
        Some(a.inf || !a.points.is_empty())
    }

    fn approximants(&self, v: &CharSet, stage: u32) -> Vec<CharSet> {
        let mut out = vec![CharSet {
            points: v.points.intersection(&NatSet::range(4 * (stage as u64 + 1))),
            inf: false,
        }];
        if v.inf {
            out.push(v.clone());
        }
        out
    }

    fn sample_opens(&self, grid: &Grid) -> Vec<CharSet> {
        let base = Discrete::new(&self.name, self.universe.clone());
        let mut out = Vec::new();
        for points in base.sample_opens(grid) {
            for inf in [false, true] {
                let s = CharSet {
                    points: points.clone(),
                    inf,
                };
                if self.is_open(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    fn witness_grid(&self, grid: &Grid) -> Vec<CharSet> {
        self.sample_opens(grid)
    }

    fn all_opens(&self) -> Option<Vec<CharSet>> {
        let base = Discrete::new(&self.name, self.universe.clone());
        let opens = base.all_opens()?;
        Some(
            opens
                .into_iter()
                .flat_map(|p| [false, true].map(|inf| CharSet { points: p.clone(), inf }))
                .collect(),
        )
    }

    fn parse_open(&self, text: &str) -> Result<CharSet, LocaleError> {
        let t = text.trim();
        let (p, inf) = match t.strip_suffix("+inf") {
            Some(rest) => (rest, true),
            None => (t, false),
        };
        let points: NatSet = p
            .parse()
            .map_err(|e: crate::syntax::SyntaxError| LocaleError::Parse(text.to_string(), e.message))?;
        let s = CharSet { points, inf };
        if !self.is_open(&s) {
            return Err(LocaleError::Parse(
                text.to_string(),
                "not an open of the spectrum".into(),
            ));
        }
        Ok(s)
    }

    fn completely_below(&self, a: &CharSet, b: &CharSet) -> bool {
        self.rather_below(a, b)
    }
}

/// Checks that `(S, inf) ↦ (S, inf)` is an isomorphism from the sampled
/// opens of `Spec∞ A` onto those of the compactification of `Spec A`:
/// it is a bijection of the samples and preserves and reflects `≤` and
/// `≪`. Returns the number of opens compared.
pub fn check_spec_infty_iso(a: &DeskAlgebra, grid: &Grid) -> Result<usize, String> {
    let s = spec_infty(a);
    let xi = Compactification::unchecked(spec(a));
    let left = s.sample_opens(grid);
    let right = xi.sample_opens(grid);
    let phi = |c: &CharSet| InfOpen::new(c.points.clone(), c.inf);
    let mapped: Vec<InfOpen<NatSet>> = left.iter().map(phi).collect();
    let mut sorted_l = mapped.clone();
    let mut sorted_r = right.clone();
    sorted_l.sort();
    sorted_r.sort();
    if sorted_l != sorted_r {
        return Err("the sampled opens do not correspond".into());
    }
    for (x, fx) in left.iter().zip(&mapped) {
        for (y, fy) in left.iter().zip(&mapped) {
            if s.leq(x, y) != xi.leq(fx, fy) {
                return Err(format!("order differs at {x}, {y}"));
            }
            if s.way_below(x, y) != xi.way_below(fx, fy) {
                return Err(format!("way-below differs at {x}, {y}"));
            }
        }
    }
    Ok(left.len())
}

/// Checks on sampled elements that `Spec` is the union of the `D(f)` and
/// that every `D(c, z)` is an open of `Spec∞`.
pub fn check_d_covers(a: &DeskAlgebra) -> bool {
    let s = spec_infty(a);
    let grid = a.validation_grid();
    let union = grid
        .iter()
        .fold(NatSet::empty(), |acc, f| acc.union(&NatSet::finite(f.support())));
    let expected = match a.dim() {
        Some(n) => NatSet::range(n),
        None => NatSet::range(3),
    };
    let all_open = grid.iter().all(|c| {
        [crate::rational::ComplexQ::zero(), crate::rational::ComplexQ::one()]
            .iter()
            .all(|z| s.is_open(&s.d(c, z)))
    });
    union == expected && all_open
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectra_of_instances() {
        let c3 = DeskAlgebra::findim(3);
        assert_eq!(spec(&c3).all_opens().unwrap().len(), 8);
        assert_eq!(spec_infty(&c3).all_opens().unwrap().len(), 16);
        assert!(check_spec_infty_iso(&c3, &Grid::default()).is_ok());
        assert!(check_spec_infty_iso(&DeskAlgebra::finsupp(), &Grid::small()).is_ok());
        assert!(check_d_covers(&c3));
        assert!(check_d_covers(&DeskAlgebra::finsupp()));
    }

    #[test]
    fn d_open_examples() {
        let fs = DeskAlgebra::finsupp();
        assert_eq!(d_open(&fs, &AlgElement::basis(0)).unwrap(), NatSet::singleton(0));
        assert_eq!(d_open(&fs, &AlgElement::zero()).unwrap(), NatSet::empty());
        let f: AlgElement = "1:1/2,3:1/4".parse().unwrap();
        assert_eq!(d_open(&fs, &f).unwrap(), NatSet::finite([1, 3]));
    }

    #[test]
    fn d_sets_of_the_unitization() {
        let s = spec_infty(&DeskAlgebra::finsupp());
        let c: AlgElement = "0:-1,2:1".parse().unwrap();
        let d = s.d(&c, &crate::rational::ComplexQ::one());
        assert_eq!(
            d,
            CharSet {
                points: NatSet::cofinite([0]),
                inf: true
            }
        );
    }
}
