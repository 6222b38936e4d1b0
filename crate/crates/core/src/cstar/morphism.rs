use std::fmt;
use std::sync::Arc;

use crate::exact_reals::certify_le;
use crate::locale::{IndexMap, NatSet};
use crate::rational::pow2_neg;

use super::{AlgElement, CStarError, DeskAlgebra, StarAlgebra, UnitElement, Unitization};

type Action<A, B> = Arc<dyn Fn(&<A as StarAlgebra>::Elem) -> <B as StarAlgebra>::Elem + Send + Sync>;

/// A *-morphism between star algebras, given by its action on elements.
#[derive(Clone)]
pub struct Morphism<A: StarAlgebra, B: StarAlgebra> {
    pub source: A,
    pub target: B,
    pub label: String,
    action: Action<A, B>,
}

impl<A: StarAlgebra, B: StarAlgebra> fmt::Debug for Morphism<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.label, self.source.name(), self.target.name())
    }
}

impl<A: StarAlgebra, B: StarAlgebra> Morphism<A, B> {
    pub fn new(
        source: A,
        target: B,
        label: &str,
        action: impl Fn(&A::Elem) -> B::Elem + Send + Sync + 'static,
    ) -> Self {
        Self {
            source,
            target,
            label: label.to_string(),
            action: Arc::new(action),
        }
    }

    pub fn zero(source: A, target: B) -> Self {
        let t = target.clone();
        Self::new(source, target, "0", move |_| t.zero())
    }

    pub fn apply(&self, x: &A::Elem) -> B::Elem {
        (self.action)(x)
    }

    /// Additivity, multiplicativity, star preservation and `‖f(x)‖ <= ‖x‖`
    /// on the source's validation grid (pairs taken along a stride).
    pub fn check_star_morphism(&self) -> Result<(), CStarError> {
        let (a, b) = (&self.source, &self.target);
        let grid = a.validation_grid();
        let prec = pow2_neg(16);
        for (i, x) in grid.iter().enumerate() {
            let fx = self.apply(x);
            if self.apply(&a.star(x)) != b.star(&fx) {
                return Err(CStarError::NotMorphism(format!("star fails at {x}")));
            }
            if !certify_le(&b.norm(&fx), &a.norm(x), &prec) {
                return Err(CStarError::NotMorphism(format!("norm increases at {x}")));
            }
            for y in grid.iter().skip(i).step_by(17) {
                let fy = self.apply(y);
                if self.apply(&a.mul(x, y)) != b.mul(&fx, &fy) {
                    return Err(CStarError::NotMorphism(format!("product of {x} and {y}")));
                }
                if self.apply(&a.add(x, y)) != b.add(&fx, &fy) {
                    return Err(CStarError::NotMorphism(format!("sum of {x} and {y}")));
                }
            }
        }
        Ok(())
    }
}

/// `c ↦ (c, 0)`.
pub fn inclusion_into_unitization(a: &DeskAlgebra) -> Morphism<DeskAlgebra, Unitization> {
    let u = Unitization::unchecked(a.clone());
    let u2 = u.clone();
    Morphism::new(a.clone(), u, "incl", move |c| u2.embed(c.clone()))
}

/// The unital extension `(c, z) ↦ f(c) + z·1_B` of a morphism into a unital
/// algebra.
pub fn extend_morphism_unital<B: StarAlgebra>(
    f: &Morphism<DeskAlgebra, B>,
) -> Result<Morphism<Unitization, B>, CStarError> {
    let unit = f.target.unit().ok_or(CStarError::TargetNotUnital)?;
    f.check_star_morphism()?;
    let g = f.clone();
    let target = f.target.clone();
    Ok(Morphism::new(
        Unitization::unchecked(f.source.clone()),
        f.target.clone(),
        &format!("{}+", f.label),
        move |x: &UnitElement| target.add(&g.apply(&x.c), &target.scale(&x.z, &unit)),
    ))
}

/// The morphism `f(x)_j = x_{σ(j)}` induced by a partial index map `σ` from
/// target indices to source indices; `f(x)_j = 0` off the domain of `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMorphism {
    pub source: DeskAlgebra,
    pub target: DeskAlgebra,
    pub sigma: IndexMap,
}

impl IndexMorphism {
    pub fn new(source: DeskAlgebra, target: DeskAlgebra, sigma: IndexMap) -> Result<Self, CStarError> {
        let dom = sigma.domain();
        if let Some(n) = target.dim() {
            if let Some(j) = dom.difference(&NatSet::range(n)).first() {
                return Err(CStarError::OutOfRange {
                    algebra: target.name().to_string(),
                    index: j,
                });
            }
        }
        if let Some(m) = source.dim() {
            let outside = sigma.preimage(&NatSet::range(m).complement());
            if let Some(j) = outside.first() {
                return Err(CStarError::OutOfRange {
                    algebra: source.name().to_string(),
                    index: sigma.apply(j).unwrap_or(j),
                });
            }
        }
        if !sigma.finite_fibers() {
            return Err(CStarError::NotMorphism(format!("{sigma} has an infinite fiber")));
        }
        Ok(Self { source, target, sigma })
    }

    pub fn identity(a: &DeskAlgebra) -> Self {
        let sigma = match a.dim() {
            Some(n) => IndexMap::table((0..n).map(|i| (i, i))),
            None => IndexMap::identity(),
        };
        Self::new(a.clone(), a.clone(), sigma).expect("identity is a morphism")
    }

    pub fn apply(&self, x: &AlgElement) -> AlgElement {
        let supp = NatSet::finite(x.support());
        let pre = self.sigma.preimage(&supp);
        let js = pre.finite_members().expect("finite fibers");
        AlgElement::from_pairs(js.into_iter().map(|j| {
            let i = self.sigma.apply(j).expect("in the domain");
            (j, x.coord(i))
        }))
    }

    pub fn then(&self, g: &IndexMorphism) -> Result<IndexMorphism, CStarError> {
        IndexMorphism::new(self.source.clone(), g.target.clone(), g.sigma.and_then(&self.sigma))
    }

    pub fn as_morphism(&self) -> Morphism<DeskAlgebra, DeskAlgebra> {
        let me = self.clone();
        Morphism::new(
            self.source.clone(),
            self.target.clone(),
            &self.sigma.to_string(),
            move |x| me.apply(x),
        )
    }
}
