//! Desk-scale commutative C*-algebras: `ℂⁿ` and the finitely supported
//! functions on ℕ (dense in `c₀(ℕ)`), with complex-rational scalars and
//! upper-real norms, and their unitizations.

mod functions;
mod morphism;
mod unitization;

pub use functions::{functions_on_compactification, FunctionsIso};
pub use morphism::{extend_morphism_unital, inclusion_into_unitization, IndexMorphism, Morphism};
pub use unitization::{chi_infty, unitize, UnitElement, Unitization};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exact_reals::{RealError, UpperReal};
use crate::rational::{q, ComplexQ, Q};
use crate::syntax::{content_lines, key_value, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CStarError {
    #[error("index {index} outside {algebra}")]
    OutOfRange { algebra: String, index: u64 },
    #[error("cannot parse element {0:?}: {1}")]
    Parse(String, String),
    #[error("target not unital")]
    TargetNotUnital,
    #[error("{law} fails at {element}")]
    Validation { law: String, element: String },
    #[error("not a *-morphism: {0}")]
    NotMorphism(String),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// A finitely supported complex-rational function on an index set; zero
/// coordinates are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgElement {
    coords: BTreeMap<u64, ComplexQ>,
}

impl AlgElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, ComplexQ)>>(pairs: I) -> Self {
        let mut coords: BTreeMap<u64, ComplexQ> = BTreeMap::new();
        for (i, v) in pairs {
            let e = coords.entry(i).or_default();
            *e = &*e + &v;
        }
        coords.retain(|_, v| !v.is_zero());
        Self { coords }
    }

    /// Real rational coordinates in order, starting at index 0.
    pub fn real(values: &[Q]) -> Self {
        Self::from_pairs(
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (i as u64, ComplexQ::real(v.clone()))),
        )
    }

    pub fn basis(i: u64) -> Self {
        Self::from_pairs([(i, ComplexQ::one())])
    }

    pub fn coord(&self, i: u64) -> ComplexQ {
        self.coords.get(&i).cloned().unwrap_or_default()
    }

    pub fn coords(&self) -> impl Iterator<Item = (u64, &ComplexQ)> {
        self.coords.iter().map(|(i, v)| (*i, v))
    }

    pub fn support(&self) -> Vec<u64> {
        self.coords.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_pairs(self.coords.iter().chain(&other.coords).map(|(i, v)| (*i, v.clone())))
    }

    pub fn neg(&self) -> Self {
        self.scale(&ComplexQ::real(Q::from_integer((-1).into())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        Self::from_pairs(
            self.coords
                .iter()
                .filter_map(|(i, v)| other.coords.get(i).map(|w| (*i, v * w))),
        )
    }

    pub fn star(&self) -> Self {
        Self::from_pairs(self.coords.iter().map(|(i, v)| (*i, v.conj())))
    }

    pub fn scale(&self, c: &ComplexQ) -> Self {
        Self::from_pairs(self.coords.iter().map(|(i, v)| (*i, c * v)))
    }

    /// `max_i |x_i|`.
    pub fn sup_norm(&self) -> UpperReal {
        if self.coords.is_empty() {
            return UpperReal::zero();
        }
        UpperReal::max_of(self.coords.values().map(UpperReal::modulus).collect())
    }

    /// `max_i |x_i|^2`, which is rational.
    pub fn sup_norm_sqr(&self) -> Q {
        self.coords.values().map(|v| v.norm_sqr()).max().unwrap_or_default()
    }
}

/// `idx:value` pairs separated by commas, e.g. `0:1/2,3:1/4+1*i`; `0` is
/// the zero element.
impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coords.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for AlgElement {
    type Err = CStarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "0" {
            return Ok(Self::zero());
        }
        let err = |m: String| CStarError::Parse(s.to_string(), m);
        let mut pairs = Vec::new();
        for part in t.split(',') {
            let (i, v) = part
                .split_once(':')
                .ok_or_else(|| err(format!("expected idx:value in {part:?}")))?;
            let i: u64 = i.trim().parse().map_err(|_| err(format!("bad index {i:?}")))?;
            let v: ComplexQ = v.trim().parse().map_err(|e| err(format!("{e}")))?;
            pairs.push((i, v));
        }
        Ok(Self::from_pairs(pairs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `ℂⁿ` with the max norm.
    FinDim(u64),
    /// Finitely supported functions ℕ → ℂ with the sup norm.
    FinSupp,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::FinDim(n) => write!(f, "findim {n}"),
            AlgebraKind::FinSupp => write!(f, "finsupp"),
        }
    }
}

/// A commutative *-algebra with an upper-real norm.
pub trait StarAlgebra: Clone + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn name(&self) -> &str;
    fn zero(&self) -> Self::Elem;
    fn unit(&self) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &ComplexQ, a: &Self::Elem) -> Self::Elem;
    fn norm(&self, a: &Self::Elem) -> UpperReal;
    /// A deterministic grid of elements for validating laws.
    fn validation_grid(&self) -> Vec<Self::Elem>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeskAlgebra {
    name: String,
    kind: AlgebraKind,
}

/// Coordinate values used by the validation grids.
fn grid_values() -> Vec<ComplexQ> {
    vec![
        ComplexQ::zero(),
        ComplexQ::one(),
        ComplexQ::real(q(-1, 2)),
        ComplexQ::new(q(1, 4), q(3, 4)),
    ]
}

impl DeskAlgebra {
    pub fn new(name: &str, kind: AlgebraKind) -> Self {
        Self {
            name: name.to_string(),
            kind,
        }
    }

    /// `ℂⁿ`, named `c{n}`.
    pub fn findim(n: u64) -> Self {
        assert!(n > 0, "ℂ^0 is not supported");
        Self::new(&format!("c{n}"), AlgebraKind::FinDim(n))
    }

    /// Finitely supported functions on ℕ, named `finsupp-nat`.
    pub fn finsupp() -> Self {
        Self::new("finsupp-nat", AlgebraKind::FinSupp)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn dim(&self) -> Option<u64> {
        match self.kind {
            AlgebraKind::FinDim(n) => Some(n),
            AlgebraKind::FinSupp => None,
        }
    }

    pub fn contains_index(&self, i: u64) -> bool {
        self.dim().is_none_or(|n| i < n)
    }

    pub fn element(&self, x: AlgElement) -> Result<AlgElement, CStarError> {
        match x.support().into_iter().find(|&i| !self.contains_index(i)) {
            Some(index) => Err(CStarError::OutOfRange {
                algebra: self.name.clone(),
                index,
            }),
            None => Ok(x),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<AlgElement, CStarError> {
        self.element(text.parse()?)
    }

    /// The indices `e_j` whose products with `y` dominate every `‖b y‖` for
    /// `b` in the unit ball: all of them for `ℂⁿ`, and for the finitely
    /// supported algebra the support of `y` plus one index outside it.
    pub fn dominating_indices(&self, support: &[u64]) -> Vec<u64> {
        match self.kind {
            AlgebraKind::FinDim(n) => (0..n).collect(),
            AlgebraKind::FinSupp => {
                let mut out = support.to_vec();
                out.push(support.iter().max().map_or(0, |m| m + 1));
                out
            }
        }
    }

    /// The `i`-th element of a dense enumeration of the unit ball. Level `k`
    /// lists the elements whose coordinates are Gaussian dyadics
    /// `(a + b i)/2^k` of modulus at most 1, supported on the first `n`
    /// indices for `ℂⁿ` and on the first `k + 1` indices otherwise.
    pub fn unit_ball(&self, mut i: usize) -> Option<AlgElement> {
        for k in 0..16u32 {
            let values = dyadic_disc(k);
            let m = match self.kind {
                AlgebraKind::FinDim(n) => n as u32,
                AlgebraKind::FinSupp => k + 1,
            };
            let size = (values.len() as u128).checked_pow(m);
            match size {
                Some(s) if (i as u128) >= s => i -= s as usize,
                _ => {
                    let mut rest = i;
                    let pairs = (0..m as u64).map(|pos| {
                        let v = values[rest % values.len()].clone();
                        rest /= values.len();
                        (pos, v)
                    });
                    return Some(AlgElement::from_pairs(pairs.collect::<Vec<_>>()));
                }
            }
        }
        None
    }
}

/// Gaussian dyadics `(a + b i)/2^k` in the closed unit disc.
fn dyadic_disc(k: u32) -> Vec<ComplexQ> {
    let s = 1i64 << k;
    let mut out = Vec::new();
    for a in -s..=s {
        for b in -s..=s {
            if a * a + b * b <= s * s {
                out.push(ComplexQ::new(q(a, s), q(b, s)));
            }
        }
    }
    out.sort_by_key(|z| z.norm_sqr());
    out
}

impl StarAlgebra for DeskAlgebra {
    type Elem = AlgElement;

    fn name(&self) -> &str {
        &self.name
    }

    fn zero(&self) -> AlgElement {
        AlgElement::zero()
    }

    fn unit(&self) -> Option<AlgElement> {
        self.dim()
            .map(|n| AlgElement::from_pairs((0..n).map(|i| (i, ComplexQ::one()))))
    }

    fn add(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        a.add(b)
    }

    fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        a.mul(b)
    }

    fn star(&self, a: &AlgElement) -> AlgElement {
        a.star()
    }

    fn scale(&self, c: &ComplexQ, a: &AlgElement) -> AlgElement {
        a.scale(c)
    }

    fn norm(&self, a: &AlgElement) -> UpperReal {
        a.sup_norm()
    }

    /// Every assignment of the grid values to the first three indices.
    fn validation_grid(&self) -> Vec<AlgElement> {
        let m = self.dim().map_or(3, |n| n.min(3));
        let vals = grid_values();
        let mut out = vec![AlgElement::zero()];
        for pos in 0..m {
            out = out
                .iter()
                .flat_map(|x| {
                    vals.iter()
                        .map(move |v| x.add(&AlgElement::from_pairs([(pos, v.clone())])))
                })
                .collect();
        }
        out
    }
}

/// Parses `algebra <name>` / `kind: findim n | finsupp` blocks.
pub fn parse_algebras(text: &str) -> Result<Vec<(DeskAlgebra, usize)>, SyntaxError> {
    let mut out: Vec<(DeskAlgebra, usize)> = Vec::new();
    let mut current: Option<(String, usize)> = None;
    for (line, content) in content_lines(text) {
        if let Some(name) = content.strip_prefix("algebra ") {
            if let Some((n, l)) = current.take() {
                return Err(SyntaxError::new(l, format!("algebra {n} has no kind")));
            }
            current = Some((name.trim().to_string(), line));
            continue;
        }
        let (key, value) = key_value(content)
            .ok_or_else(|| SyntaxError::new(line, format!("expected `key: value`, got {content:?}")))?;
        let Some((name, start)) = current.take() else {
            return Err(SyntaxError::new(line, "expected `algebra <name>`"));
        };
        if key != "kind" {
            return Err(SyntaxError::new(line, format!("unknown key {key:?}")));
        }
        let kind = if value == "finsupp" {
            AlgebraKind::FinSupp
        } else if let Some(n) = value.strip_prefix("findim") {
            match n.trim().parse::<u64>() {
                Ok(n) if n > 0 => AlgebraKind::FinDim(n),
                _ => return Err(SyntaxError::new(line, format!("bad dimension {:?}", n.trim()))),
            }
        } else {
            return Err(SyntaxError::new(line, format!("unknown algebra kind {value:?}")));
        };
        out.push((DeskAlgebra::new(&name, kind), start));
    }
    if let Some((n, l)) = current {
        return Err(SyntaxError::new(l, format!("algebra {n} has no kind")));
    }
    Ok(out)
}
