use crate::exact_reals::agree_within;
use crate::rational::{pow2_neg, ComplexQ};

use super::{AlgElement, CStarError, DeskAlgebra, StarAlgebra, UnitElement, Unitization};

/// The isomorphism `C(X∞) ≅ C₀(X)⁺` for `X` discrete on `n` points, where
/// `C(X∞) = ℂⁿ⁺¹` with `∞` at index `n`.
#[derive(Debug, Clone)]
pub struct FunctionsIso {
    pub n: u64,
    pub plus: Unitization,
    pub on_compactification: DeskAlgebra,
}

pub fn functions_on_compactification(n: u64) -> FunctionsIso {
    FunctionsIso {
        n,
        plus: Unitization::unchecked(DeskAlgebra::findim(n)),
        on_compactification: DeskAlgebra::new(&format!("C(disc{n}.inf)"), super::AlgebraKind::FinDim(n + 1)),
    }
}

impl FunctionsIso {
    /// `(h, z) ↦ (h + z on X, z at ∞)`.
    pub fn forward(&self, x: &UnitElement) -> AlgElement {
        AlgElement::from_pairs(
            (0..self.n)
                .map(|i| (i, &x.c.coord(i) + &x.z))
                .chain([(self.n, x.z.clone())]),
        )
    }

    /// `f ↦ (f - f(∞), f(∞))`, the unique decomposition `h + z`.
    pub fn backward(&self, f: &AlgElement) -> UnitElement {
        let z = f.coord(self.n);
        let h = AlgElement::from_pairs((0..self.n).map(|i| (i, &f.coord(i) - &z)));
        UnitElement::new(h, z)
    }

    /// Checks both round trips, multiplicativity, the involution and
    /// isometry at precision `2^-bits` on the given elements.
    pub fn verify(&self, elements: &[UnitElement], bits: u32) -> Result<(), CStarError> {
        let prec = pow2_neg(bits);
        let cx = &self.on_compactification;
        let fail = |law: &str, x: &dyn std::fmt::Display| CStarError::Validation {
            law: law.to_string(),
            element: x.to_string(),
        };
        for (i, x) in elements.iter().enumerate() {
            let fx = self.forward(x);
            if self.backward(&fx) != *x {
                return Err(fail("backward after forward", x));
            }
            if self.forward(&self.backward(&fx)) != fx {
                return Err(fail("forward after backward", &fx));
            }
            if self.forward(&self.plus.star(x)) != cx.star(&fx) {
                return Err(fail("involution", x));
            }
            if !agree_within(&self.plus.plus_norm(x), &cx.norm(&fx), &prec) {
                return Err(fail("isometry", x));
            }
            if let Some(y) = elements.get((i * 7 + 3) % elements.len()) {
                if self.forward(&self.plus.mul(x, y)) != cx.mul(&fx, &self.forward(y)) {
                    return Err(fail("multiplicativity", x));
                }
            }
        }
        Ok(())
    }

    /// The constant function `z` on `X∞`.
    pub fn constant(&self, z: ComplexQ) -> AlgElement {
        AlgElement::from_pairs((0..=self.n).map(|i| (i, z.clone())))
    }
}
