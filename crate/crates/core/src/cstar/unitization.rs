use std::fmt;

use crate::exact_reals::{agree_within, certify_le, SupFamily, UpperReal};
use crate::rational::{pow2_neg, qi, ComplexQ};

use super::{grid_values, AlgElement, CStarError, DeskAlgebra, StarAlgebra};

/// An element `(c, z)` of `C⁺`, standing for `c + z·1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitElement {
    pub c: AlgElement,
    pub z: ComplexQ,
}

impl UnitElement {
    pub fn new(c: AlgElement, z: ComplexQ) -> Self {
        Self { c, z }
    }
}

impl fmt::Display for UnitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.c, self.z)
    }
}

/// The unitization `C⁺` of a desk algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unitization {
    base: DeskAlgebra,
    name: String,
}

impl Unitization {
    /// Builds `C⁺` without validating it; see [`unitize`].
    pub fn unchecked(base: DeskAlgebra) -> Self {
        let name = format!("{}+", base.name());
        Self { base, name }
    }

    pub fn base(&self) -> &DeskAlgebra {
        &self.base
    }

    pub fn embed(&self, c: AlgElement) -> UnitElement {
        UnitElement::new(c, ComplexQ::zero())
    }

    /// `c c' + c' z`, the element whose norm the sup ranges over.
    fn term(&self, b: &AlgElement, x: &UnitElement) -> AlgElement {
        b.mul(&x.c).add(&b.scale(&x.z))
    }

    /// The supremum of `‖b c + b z‖` over the dense unit ball, with the
    /// basis elements on the dominating indices as modulus: every member
    /// `|b_j| |c_j + z|` is bounded by the member at `e_j`.
    fn ball_sup(&self, x: &UnitElement) -> UpperReal {
        let this = self.clone();
        let y = x.clone();
        let this2 = self.clone();
        let y2 = x.clone();
        let family = SupFamily::new(
            move |i| this.base.unit_ball(i).map(|b| this.term(&b, &y).sup_norm()),
            move |_eps| {
                this2
                    .base
                    .dominating_indices(&y2.c.support())
                    .into_iter()
                    .map(|j| this2.term(&AlgElement::basis(j), &y2).sup_norm())
                    .collect()
            },
        );
        UpperReal::sup(family).expect("the unit ball is non-empty")
    }

    /// `‖(c, z)‖ = max(|z|, sup_{‖b‖≤1} ‖b c + b z‖)`.
    pub fn plus_norm(&self, x: &UnitElement) -> UpperReal {
        UpperReal::modulus(&x.z).max(&self.ball_sup(x))
    }

    /// `max(|z|, max_j |c_j + z|)` over the dominating indices.
    pub fn plus_norm_closed(&self, x: &UnitElement) -> UpperReal {
        let mut parts = vec![UpperReal::modulus(&x.z)];
        for j in self.base.dominating_indices(&x.c.support()) {
            parts.push(UpperReal::modulus(&(&x.c.coord(j) + &x.z)));
        }
        UpperReal::max_of(parts)
    }

    /// The sup term alone, which vanishes on `(1, -1)` when `C` is unital.
    pub fn naive_norm(&self, x: &UnitElement) -> UpperReal {
        self.ball_sup(x)
    }

    /// The maximum of `‖b c + b z‖` over the first `count` unit-ball
    /// elements; a lower bound for the sup term.
    pub fn ball_prefix_max(&self, x: &UnitElement, count: usize) -> UpperReal {
        let parts: Vec<UpperReal> = (0..count)
            .filter_map(|i| self.base.unit_ball(i))
            .map(|b| self.term(&b, x).sup_norm())
            .collect();
        UpperReal::max_of(parts)
    }

    pub fn parse_element(&self, c: &str, z: &str) -> Result<UnitElement, CStarError> {
        let c = self.base.parse_element(c)?;
        let z: ComplexQ = z
            .parse()
            .map_err(|e| CStarError::Parse(z.to_string(), format!("{e}")))?;
        Ok(UnitElement::new(c, z))
    }

    /// Checks the C*-identity, `‖x‖ = ‖x*‖`, the bounds
    /// `‖(c,z)‖ <= |z| + ‖c‖ <= 3‖(c,z)‖` and agreement with the closed form
    /// at `x`, at query precision `2^-bits`.
    pub fn validate_at(&self, x: &UnitElement, bits: u32) -> Result<(), CStarError> {
        let prec = pow2_neg(bits);
        let fail = |law: &str| CStarError::Validation {
            law: law.to_string(),
            element: x.to_string(),
        };
        let n = self.plus_norm(x);
        if !agree_within(&n, &self.plus_norm_closed(x), &prec) {
            return Err(fail("closed form of the norm"));
        }
        let xx = self.plus_norm(&self.mul(&self.star(x), x));
        if !agree_within(&xx, &n.mul_nonneg(&n)?, &prec) {
            return Err(fail("C*-identity"));
        }
        if !agree_within(&n, &self.plus_norm(&self.star(x)), &prec) {
            return Err(fail("norm of the adjoint"));
        }
        let split = UpperReal::modulus(&x.z).add(&self.base.norm(&x.c));
        if !certify_le(&n, &split, &prec) {
            return Err(fail("bound ‖(c,z)‖ <= |z| + ‖c‖"));
        }
        if !certify_le(&split, &n.scale(&qi(3)), &prec) {
            return Err(fail("bound |z| + ‖c‖ <= 3‖(c,z)‖"));
        }
        Ok(())
    }
}

impl StarAlgebra for Unitization {
    type Elem = UnitElement;

    fn name(&self) -> &str {
        &self.name
    }

    fn zero(&self) -> UnitElement {
        UnitElement::new(AlgElement::zero(), ComplexQ::zero())
    }

    fn unit(&self) -> Option<UnitElement> {
        Some(UnitElement::new(AlgElement::zero(), ComplexQ::one()))
    }

    fn add(&self, a: &UnitElement, b: &UnitElement) -> UnitElement {
        UnitElement::new(a.c.add(&b.c), &a.z + &b.z)
    }

    /// `(c,z)(c',z') = (cc' + cz' + zc', zz')`.
    fn mul(&self, a: &UnitElement, b: &UnitElement) -> UnitElement {
        let c = a.c.mul(&b.c).add(&a.c.scale(&b.z)).add(&b.c.scale(&a.z));
        UnitElement::new(c, &a.z * &b.z)
    }

    fn star(&self, a: &UnitElement) -> UnitElement {
        UnitElement::new(a.c.star(), a.z.conj())
    }

    fn scale(&self, k: &ComplexQ, a: &UnitElement) -> UnitElement {
        UnitElement::new(a.c.scale(k), k * &a.z)
    }

    fn norm(&self, a: &UnitElement) -> UpperReal {
        self.plus_norm(a)
    }

    fn validation_grid(&self) -> Vec<UnitElement> {
        let mut out = Vec::new();
        for c in self.base.validation_grid() {
            for z in grid_values() {
                out.push(UnitElement::new(c.clone(), z));
            }
        }
        out
    }
}

/// Builds `C⁺` and validates it on the grid at precision `2^-16`.
pub fn unitize(base: &DeskAlgebra) -> Result<Unitization, CStarError> {
    let u = Unitization::unchecked(base.clone());
    for x in u.validation_grid() {
        u.validate_at(&x, 16)?;
    }
    Ok(u)
}

/// `χ∞(c, z) = z`.
pub fn chi_infty(x: &UnitElement) -> ComplexQ {
    x.z.clone()
}
