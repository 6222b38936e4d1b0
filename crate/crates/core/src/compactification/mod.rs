//! The one-point compactification `X∞` of a locally compact regular locale,
//! with opens the pairs `(U, p)` such that `p ⇒ ω(U)`.

mod checks;
mod maps;
mod retraction;

pub use checks::{
    check_compact_infty, check_regular_all, check_regular_infty, sample_cover_families, CompactVerdict, RegularVerdict,
};
pub use maps::{extend_to_infty, is_proper, restrict_from_infty, InfMap, PartialMap, ProperVerdict};
pub use retraction::{r_u, Retraction};

use std::fmt;

use thiserror::Error;

use crate::finite_frames::{FiniteFrame, Property};
use crate::locale::{largest_interpolative, spot_check, Grid, Locale, LocaleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompactifyError {
    #[error("not an open of X∞: {0}")]
    NotAnInfOpen(String),
    #[error("{locale} fails the {property} spot check at {open}")]
    Precondition {
        locale: String,
        property: Property,
        open: String,
        detail: String,
    },
    #[error("presentation cannot express r_U: {0}")]
    CannotExpressRetraction(String),
    #[error(
        "map is not proper: {open} is way below the target but its preimage {preimage} is not way below the domain"
    )]
    NotProper { open: String, preimage: String },
    #[error("map does not send ∞ to ∞: {0}")]
    NotPointed(String),
    #[error("not a frame map: {0}")]
    NotFrameMap(String),
    #[error("not finitely renderable")]
    NotFinite,
    #[error(transparent)]
    Locale(#[from] LocaleError),
}

/// An open of `X∞`: the part `u` in `X` and whether it contains `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfOpen<O> {
    pub u: O,
    pub p: bool,
}

impl<O> InfOpen<O> {
    pub fn new(u: O, p: bool) -> Self {
        Self { u, p }
    }
}

/// `u` or `u+inf`.
impl<O: fmt::Display> fmt::Display for InfOpen<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p {
            write!(f, "{}+inf", self.u)
        } else {
            write!(f, "{}", self.u)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compactification<L: Locale> {
    base: L,
    name: String,
}

impl<L: Locale> Compactification<L> {
    /// Builds `X∞` without running the spot checks; see [`compactify`].
    pub fn unchecked(base: L) -> Self {
        let name = format!("{}.inf", base.name());
        Self { base, name }
    }

    pub fn base(&self) -> &L {
        &self.base
    }

    pub fn is_legal(&self, a: &InfOpen<L::Open>) -> bool {
        !a.p || self.base.omega(&a.u).is_some()
    }

    /// Validates the constraint `p ⇒ ω(u)`.
    pub fn open(&self, u: L::Open, p: bool) -> Result<InfOpen<L::Open>, CompactifyError> {
        let a = InfOpen::new(u, p);
        if self.is_legal(&a) {
            Ok(a)
        } else {
            Err(CompactifyError::NotAnInfOpen(self.show(&a)))
        }
    }

    /// `X` as the open `(X, ⊥)`.
    pub fn embed(&self, u: L::Open) -> InfOpen<L::Open> {
        InfOpen::new(u, false)
    }

    fn check(&self, a: &InfOpen<L::Open>) -> Result<(), CompactifyError> {
        if self.is_legal(a) {
            Ok(())
        } else {
            Err(CompactifyError::NotAnInfOpen(self.show(a)))
        }
    }

    pub fn inf_meet(&self, a: &InfOpen<L::Open>, b: &InfOpen<L::Open>) -> Result<InfOpen<L::Open>, CompactifyError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.meet(a, b))
    }

    pub fn inf_join(&self, a: &InfOpen<L::Open>, b: &InfOpen<L::Open>) -> Result<InfOpen<L::Open>, CompactifyError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.join(a, b))
    }

    /// The frame of opens as a [`FiniteFrame`], when `X` has finitely many
    /// opens.
    pub fn to_finite_frame(&self) -> Result<FiniteFrame, CompactifyError> {
        let opens = self.all_opens().ok_or(CompactifyError::NotFinite)?;
        let names: Vec<String> = opens.iter().map(|a| self.show(a)).collect();
        let mut pairs = Vec::new();
        for (i, a) in opens.iter().enumerate() {
            for (j, b) in opens.iter().enumerate() {
                if i != j && self.leq(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        Ok(FiniteFrame::from_index_pairs(&self.name, names, &pairs).expect("opens of X∞ form a frame"))
    }
}

/// Spot-checks local compactness and regularity of `x`, then builds `X∞`.
pub fn compactify<L: Locale>(x: L, grid: &Grid) -> Result<Compactification<L>, CompactifyError> {
    for property in [Property::LocallyCompact, Property::Regular] {
        let v = spot_check(&x, property, grid);
        if !v.holds {
            let open = v.open.as_ref().map(|o| x.show(o)).unwrap_or_default();
            let related: Vec<String> = v.related.iter().map(|o| x.show(o)).collect();
            let detail = format!(
                "join of related opens {{{}}} = {} misses {}",
                related.join(", "),
                x.show(&x.join_all(&v.related)),
                v.uncovered.as_ref().map(|o| x.show(o)).unwrap_or_default()
            );
            return Err(CompactifyError::Precondition {
                locale: x.name().to_string(),
                property,
                open,
                detail,
            });
        }
    }
    Ok(Compactification::unchecked(x))
}

impl<L: Locale> Locale for Compactification<L> {
    type Open = InfOpen<L::Open>;

    fn name(&self) -> &str {
        &self.name
    }

    fn top(&self) -> Self::Open {
        InfOpen::new(self.base.top(), true)
    }

    fn bottom(&self) -> Self::Open {
        InfOpen::new(self.base.bottom(), false)
    }

    fn join(&self, a: &Self::Open, b: &Self::Open) -> Self::Open {
        InfOpen::new(self.base.join(&a.u, &b.u), a.p || b.p)
    }

    fn meet(&self, a: &Self::Open, b: &Self::Open) -> Self::Open {
        InfOpen::new(self.base.meet(&a.u, &b.u), a.p && b.p)
    }

    fn leq(&self, a: &Self::Open, b: &Self::Open) -> bool {
        (!a.p || b.p) && self.base.leq(&a.u, &b.u)
    }

    /// `¬(U, p) = (¬U, ¬p ∧ ω(¬U))`.
    fn negation(&self, a: &Self::Open) -> Self::Open {
        let n = self.base.negation(&a.u);
        let p = !a.p && self.base.omega(&n).is_some();
        InfOpen::new(n, p)
    }

    /// `X∞` is compact regular, where `≪` coincides with `⊲`.
    fn way_below(&self, a: &Self::Open, b: &Self::Open) -> bool {
        self.rather_below(a, b)
    }

    fn omega(&self, _u: &Self::Open) -> Option<Self::Open> {
        Some(self.top())
    }

    fn positive(&self, a: &Self::Open) -> Option<bool> {
        if a.p {
            return Some(true);
        }
        self.base.positive(&a.u)
    }

    /// `(V, ⊥)` for the approximants `V` of `U`, and when `p` also
    /// `(U ∧ ¬W, ⊤)` for the ω-witness `W` of `U`.
    fn approximants(&self, v: &Self::Open, stage: u32) -> Vec<Self::Open> {
        let mut out: Vec<Self::Open> = self
            .base
            .approximants(&v.u, stage)
            .into_iter()
            .map(|a| InfOpen::new(a, false))
            .collect();
        if v.p {
            if let Some(w) = self.base.omega(&v.u) {
                let t = InfOpen::new(self.base.meet(&v.u, &self.base.negation(&w)), true);
                if self.is_legal(&t) {
                    out.push(t);
                }
            }
        }
        out
    }

    fn sample_opens(&self, grid: &Grid) -> Vec<Self::Open> {
        let mut out = Vec::new();
        for u in self.base.sample_opens(grid) {
            let legal = self.base.omega(&u).is_some();
            out.push(InfOpen::new(u.clone(), false));
            if legal {
                out.push(InfOpen::new(u, true));
            }
        }
        out
    }

    fn witness_grid(&self, grid: &Grid) -> Vec<Self::Open> {
        self.sample_opens(grid)
    }

    fn all_opens(&self) -> Option<Vec<Self::Open>> {
        let base = self.base.all_opens()?;
        let mut out = Vec::new();
        for u in base {
            let legal = self.base.omega(&u).is_some();
            out.push(InfOpen::new(u.clone(), false));
            if legal {
                out.push(InfOpen::new(u, true));
            }
        }
        Some(out)
    }

    /// `<open of X>` or `<open of X>+inf`.
    fn parse_open(&self, text: &str) -> Result<Self::Open, LocaleError> {
        let t = text.trim();
        let (u, p) = match t.strip_suffix("+inf") {
            Some(rest) => (rest.trim(), true),
            None => (t, false),
        };
        let u = if u.is_empty() {
            self.base.bottom()
        } else {
            self.base.parse_open(u)?
        };
        let a = InfOpen::new(u, p);
        if !self.is_legal(&a) {
            return Err(LocaleError::Parse(text.to_string(), "not an open of X∞".into()));
        }
        Ok(a)
    }

    fn show(&self, a: &Self::Open) -> String {
        if a.p {
            format!("{}+inf", self.base.show(&a.u))
        } else {
            self.base.show(&a.u)
        }
    }

    fn completely_below(&self, a: &Self::Open, b: &Self::Open) -> bool {
        match self.all_opens() {
            Some(opens) => {
                let (Some(i), Some(j)) = (opens.iter().position(|x| x == a), opens.iter().position(|x| x == b)) else {
                    return false;
                };
                largest_interpolative(&opens, |x, y| self.rather_below(x, y))[i][j]
            }
            None => self.rather_below(a, b),
        }
    }
}
