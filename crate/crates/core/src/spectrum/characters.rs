use std::fmt;
use std::sync::Arc;

use crate::cstar::{AlgElement, DeskAlgebra, StarAlgebra};
use crate::rational::ComplexQ;

use super::{ClosedIdealDesc, SpectrumError};

type Eval = Arc<dyn Fn(&AlgElement) -> ComplexQ + Send + Sync>;

/// A linear, multiplicative, star-preserving functional, possibly only
/// defined on an ideal.
#[derive(Clone)]
pub struct Character {
    pub algebra: DeskAlgebra,
    pub label: String,
    eval: Eval,
    /// An element with nonzero value, if one is known.
    pub nonzero_witness: Option<AlgElement>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.label, self.algebra.name())
    }
}

impl Character {
    pub fn new(
        algebra: &DeskAlgebra,
        label: &str,
        nonzero_witness: Option<AlgElement>,
        eval: impl Fn(&AlgElement) -> ComplexQ + Send + Sync + 'static,
    ) -> Self {
        Self {
            algebra: algebra.clone(),
            label: label.to_string(),
            eval: Arc::new(eval),
            nonzero_witness,
        }
    }

    /// `x ↦ x_i`.
    pub fn evaluation(a: &DeskAlgebra, i: u64) -> Self {
        Self::new(a, &format!("ev{i}"), Some(AlgElement::basis(i)), move |x| x.coord(i))
    }

    pub fn eval(&self, x: &AlgElement) -> ComplexQ {
        (self.eval)(x)
    }

    /// The restriction to an ideal, with a basis element of the ideal as
    /// witness when the character does not vanish on it.
    pub fn restrict(&self, ideal: &ClosedIdealDesc) -> Self {
        let candidates = ideal.supp.members_below(ideal.supp.first().map_or(0, |f| f + 64));
        let witness = candidates
            .into_iter()
            .map(AlgElement::basis)
            .find(|e| !self.eval(e).is_zero());
        Self {
            algebra: self.algebra.clone(),
            label: format!("{}|{}", self.label, ideal),
            eval: Arc::clone(&self.eval),
            nonzero_witness: witness,
        }
    }

    /// Linearity, multiplicativity and star preservation on the pairs of
    /// `samples`.
    pub fn check_laws(&self, samples: &[AlgElement]) -> Result<(), String> {
        for x in samples {
            if self.eval(&x.star()) != self.eval(x).conj() {
                return Err(format!("{} does not preserve the star at {x}", self.label));
            }
            for y in samples {
                if self.eval(&x.mul(y)) != &self.eval(x) * &self.eval(y) {
                    return Err(format!("{} is not multiplicative at {x}, {y}", self.label));
                }
                if self.eval(&x.add(y)) != &self.eval(x) + &self.eval(y) {
                    return Err(format!("{} is not additive at {x}, {y}", self.label));
                }
            }
        }
        Ok(())
    }

    pub fn agrees_with(&self, other: &Character, samples: &[AlgElement]) -> bool {
        samples.iter().all(|x| self.eval(x) == other.eval(x))
    }
}

/// Characters of `ℂⁿ` found by solving the multiplicativity equations on the
/// basis: the values `a_i = χ(e_i)` satisfy `a_i a_j = δ_ij a_i`, so each
/// `a_i ∈ {0, 1}` and at most one is nonzero. For the finitely supported
/// algebra the first `limit` coordinate evaluations are listed; any
/// multiplicative functional nonzero at some `f` is nonzero at an `e_i` in
/// the support of `f`, and `e_i e_j = 0` pins it to that coordinate.
pub fn characters(a: &DeskAlgebra, limit: usize) -> Vec<Character> {
    let Some(n) = a.dim() else {
        return (0..limit as u64).map(|i| Character::evaluation(a, i)).collect();
    };
    solve_idempotent_values(n as usize, false)
        .into_iter()
        .filter_map(|vals| {
            let i = vals.iter().position(|v| !v.is_zero())?;
            Some(Character::evaluation(a, i as u64))
        })
        .collect()
}

/// Value vectors `(a_0, ..., a_{n-1}[, b])` in `{0,1}` solving
/// `a_i a_j = δ_ij a_i`, and with `unital` also `a_i b = a_i`, `b² = b`;
/// the zero vector is dropped.
fn solve_idempotent_values(n: usize, unital: bool) -> Vec<Vec<ComplexQ>> {
    let len = n + usize::from(unital);
    let mut out = Vec::new();
    for mask in 1u64..(1 << len) {
        let vals: Vec<ComplexQ> = (0..len)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    ComplexQ::one()
                } else {
                    ComplexQ::zero()
                }
            })
            .collect();
        let a = &vals[..n];
        let mut ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let rhs = if i == j { a[i].clone() } else { ComplexQ::zero() };
                &a[i] * &a[j] == rhs
            })
        });
        if unital {
            let b = &vals[n];
            ok = ok && &(b * b) == b && a.iter().all(|ai| &(ai * b) == ai);
        }
        if ok {
            out.push(vals);
        }
    }
    out
}

/// A character of `A⁺` for `A = ℂⁿ`: either the extension of a coordinate
/// evaluation or `χ∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlusCharacter {
    Extended(u64),
    Infty,
}

/// Solves for the characters of `(ℂⁿ)⁺` on the basis `(e_i, 0), (0, 1)`
/// and classifies them by their restriction to `ℂⁿ`.
pub fn characters_of_unitization(n: u64) -> Vec<PlusCharacter> {
    solve_idempotent_values(n as usize, true)
        .into_iter()
        .map(|vals| match vals[..n as usize].iter().position(|v| !v.is_zero()) {
            Some(i) => PlusCharacter::Extended(i as u64),
            None => PlusCharacter::Infty,
        })
        .collect()
}

/// Extends a character that is nonzero on `ideal` to the whole algebra by
/// `χ(c) = χ(c i) / χ(i)` for the witness `i`.
pub fn extend_character(a: &DeskAlgebra, ideal: &ClosedIdealDesc, chi: &Character) -> Result<Character, SpectrumError> {
    let w = chi.nonzero_witness.clone().ok_or(SpectrumError::ZeroOnIdeal)?;
    let chi_w = chi.eval(&w);
    if chi_w.is_zero() || !ideal.contains(&w) {
        return Err(SpectrumError::ZeroOnIdeal);
    }
    let inner = chi.clone();
    let label = chi.label.split('|').next().unwrap_or(&chi.label).to_string();
    Ok(Character::new(a, &label, Some(w.clone()), move |c| {
        inner.eval(&c.mul(&w)).checked_div(&chi_w).expect("nonzero")
    }))
}
