use crate::locale::{HasSubspaces, Locale};

use super::{Compactification, CompactifyError, InfOpen};

/// The retraction `r_U : X∞ → U∞` for an open `U` of `X`, which is the
/// identity on `U` and sends everything outside `U` to `∞`.
#[derive(Debug, Clone)]
pub struct Retraction<L: Locale> {
    pub source: Compactification<L>,
    pub target: Compactification<L>,
    u: L::Open,
}

pub fn r_u<L: HasSubspaces>(x: &L, u: &L::Open) -> Retraction<L> {
    Retraction {
        source: Compactification::unchecked(x.clone()),
        target: Compactification::unchecked(x.subspace(u)),
        u: u.clone(),
    }
}

impl<L: Locale> Retraction<L> {
    pub fn u(&self) -> &L::Open {
        &self.u
    }

    /// `r_U*(V, ⊥) = (V, ⊥)` and `r_U*(V, ⊤) = (V ∨ ¬W, ⊤)`, where `W` is the
    /// ω-witness of `V` in `U` and `¬W` is taken in `X`; `¬W` is the largest
    /// `D` with `W ∧ D = 0`, and `U ∨ D` must cover `X∞`.
    pub fn pullback(&self, a: &InfOpen<L::Open>) -> Result<InfOpen<L::Open>, CompactifyError> {
        let x = self.source.base();
        let sub = self.target.base();
        if !self.target.is_legal(a) || !sub.leq(&a.u, &sub.top()) {
            return Err(CompactifyError::NotAnInfOpen(self.target.show(a)));
        }
        if !a.p {
            return Ok(a.clone());
        }
        let w = sub.omega(&a.u).expect("legal");
        let d = x.negation(&w);
        let lifted = InfOpen::new(x.join(&a.u, &d), true);
        if !self.source.is_legal(&InfOpen::new(d.clone(), true)) || !x.is_cover(&x.join(&self.u, &d)) {
            return Err(CompactifyError::CannotExpressRetraction(format!(
                "{} with witness {}",
                self.target.show(a),
                x.show(&w)
            )));
        }
        Ok(lifted)
    }
}
