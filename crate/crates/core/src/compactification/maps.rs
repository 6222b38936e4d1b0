use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::locale::{Discrete, Grid, HasSubspaces, IndexMap, Interval, IntervalSet, Locale};
use crate::rational::Q;

use super::{r_u, Compactification, CompactifyError, InfOpen};

type Pullback<X, Y> = Arc<dyn Fn(&<Y as Locale>::Open) -> <X as Locale>::Open + Send + Sync>;
type InfPullback<X, Y> =
    Arc<dyn Fn(&InfOpen<<Y as Locale>::Open>) -> Result<InfOpen<<X as Locale>::Open>, CompactifyError> + Send + Sync>;

/// A map from the open sublocale `dom` of `source` to `target`, given by
/// its frame-level pullback.
#[derive(Clone)]
pub struct PartialMap<X: Locale, Y: Locale> {
    pub source: X,
    pub target: Y,
    pub dom: X::Open,
    pub label: String,
    pullback: Pullback<X, Y>,
}

impl<X: Locale, Y: Locale> fmt::Debug for PartialMap<X, Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : {} -> {} on {}",
            self.label,
            self.source.name(),
            self.target.name(),
            self.source.show(&self.dom)
        )
    }
}

impl<X: Locale, Y: Locale> PartialMap<X, Y> {
    /// The pullback is cut down to `dom`.
    pub fn new(
        source: X,
        target: Y,
        dom: X::Open,
        label: &str,
        pullback: impl Fn(&Y::Open) -> X::Open + Send + Sync + 'static,
    ) -> Self {
        Self {
            source,
            target,
            dom,
            label: label.to_string(),
            pullback: Arc::new(pullback),
        }
    }

    /// A map given on basic opens of the target: `f*(e)` is the join of the
    /// listed images of basics below `e`; unlisted basics pull back to `0`.
    pub fn from_basics(source: X, target: Y, dom: X::Open, label: &str, basics: Vec<(Y::Open, X::Open)>) -> Self
    where
        X: 'static,
        Y: 'static,
    {
        let (s, t) = (source.clone(), target.clone());
        Self::new(source, target, dom, label, move |e| {
            s.join_all(basics.iter().filter(|(b, _)| t.leq(b, e)).map(|(_, img)| img))
        })
    }

    pub fn pullback(&self, v: &Y::Open) -> X::Open {
        self.source.meet(&(self.pullback)(v), &self.dom)
    }

    pub fn is_total(&self) -> bool {
        self.source.is_cover(&self.dom)
    }

    /// `g ∘ self`, defined on `self*(dom g)`.
    pub fn then<Z: Locale>(&self, g: &PartialMap<Y, Z>) -> PartialMap<X, Z>
    where
        X: 'static,
        Y: 'static,
    {
        let (f, g2) = (self.clone(), g.clone());
        PartialMap::new(
            self.source.clone(),
            g.target.clone(),
            self.pullback(&g.dom),
            &format!("{}.{}", g.label, self.label),
            move |w| f.pullback(&g2.pullback(w)),
        )
    }

    /// Checks on the sampled opens of the target that the pullback sends `Y`
    /// to `dom`, preserves `0`, binary meets and binary joins, and lands
    /// below `dom`.
    pub fn check_frame_map(&self, grid: &Grid) -> Result<(), CompactifyError> {
        let (x, y) = (&self.source, &self.target);
        if !x.eq_open(&self.pullback(&y.top()), &self.dom) {
            return Err(CompactifyError::NotFrameMap(format!(
                "the target pulls back to {} rather than the domain {}",
                x.show(&self.pullback(&y.top())),
                x.show(&self.dom)
            )));
        }
        if !x.eq_open(&self.pullback(&y.bottom()), &x.bottom()) {
            return Err(CompactifyError::NotFrameMap("0 does not pull back to 0".into()));
        }
        let samples: Vec<Y::Open> = y.sample_opens(grid).into_iter().take(64).collect();
        let pulled: Vec<X::Open> = samples.iter().map(|v| self.pullback(v)).collect();
        for (i, a) in samples.iter().enumerate() {
            for (j, b) in samples.iter().enumerate().skip(i + 1) {
                let meet_ok = x.eq_open(&self.pullback(&y.meet(a, b)), &x.meet(&pulled[i], &pulled[j]));
                let join_ok = x.eq_open(&self.pullback(&y.join(a, b)), &x.join(&pulled[i], &pulled[j]));
                if !meet_ok || !join_ok {
                    let op = if meet_ok { "join" } else { "meet" };
                    return Err(CompactifyError::NotFrameMap(format!(
                        "{op} of {} and {} is not preserved",
                        y.show(a),
                        y.show(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn agrees_with(&self, other: &PartialMap<X, Y>, opens: &[Y::Open]) -> bool {
        self.source.eq_open(&self.dom, &other.dom)
            && opens
                .iter()
                .all(|v| self.source.eq_open(&self.pullback(v), &other.pullback(v)))
    }
}

impl PartialMap<Discrete, Discrete> {
    /// The map of discrete spaces induced by a partial function of points.
    pub fn from_index_map(
        source: Discrete,
        target: Discrete,
        f: IndexMap,
        label: &str,
    ) -> Result<Self, CompactifyError> {
        let dom = f.domain().intersection(source.universe());
        if !dom.is_subset(&f.preimage(target.universe())) {
            return Err(CompactifyError::NotFrameMap(format!(
                "{f} leaves {} on its domain",
                target.name()
            )));
        }
        let d = dom.clone();
        Ok(Self::new(source, target, dom, label, move |v| {
            f.preimage(v).intersection(&d)
        }))
    }
}

impl PartialMap<Interval, Interval> {
    /// `t ↦ s t + o` on `dom`.
    pub fn affine(
        source: Interval,
        target: Interval,
        dom: IntervalSet,
        s: Q,
        o: Q,
        label: &str,
    ) -> Result<Self, CompactifyError> {
        if s.is_zero() {
            return Err(CompactifyError::NotFrameMap(
                "constant maps of intervals are not expressible".into(),
            ));
        }
        if !dom.is_subset(source.universe()) {
            return Err(CompactifyError::NotFrameMap(format!(
                "{dom} is not an open of {}",
                source.name()
            )));
        }
        let pre = move |v: &IntervalSet| {
            IntervalSet::from_intervals(v.components().iter().map(|(p, q)| {
                let (a, b) = ((p - &o) / &s, (q - &o) / &s);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            }))
        };
        let m = Self::new(source, target, dom, label, pre);
        if !m.source.eq_open(&m.pullback(m.target.universe()), &m.dom) {
            return Err(CompactifyError::NotFrameMap(format!(
                "{} leaves {} on its domain",
                m.label,
                m.target.name()
            )));
        }
        Ok(m)
    }
}

/// Outcome of [`is_proper`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperVerdict {
    pub holds: bool,
    /// `(U, f*(U))` with `U ≪ Y` but `f*(U)` not way below the domain.
    pub counterexample: Option<(String, String)>,
}

/// Checks on the sampled way-below-whole opens `U` of the target that
/// `f*(U)` is way below the domain of `f`.
pub fn is_proper<X: Locale, Y: Locale>(f: &PartialMap<X, Y>, grid: &Grid) -> ProperVerdict {
    let y = &f.target;
    let mut opens = y.sample_opens(grid);
    opens.extend(y.witness_grid(grid));
    for u in opens.iter().filter(|u| y.way_below_whole(u)) {
        let pre = f.pullback(u);
        if !f.source.way_below(&pre, &f.dom) {
            return ProperVerdict {
                holds: false,
                counterexample: Some((y.show(u), f.source.show(&pre))),
            };
        }
    }
    ProperVerdict {
        holds: true,
        counterexample: None,
    }
}

/// A map `X∞ → Y∞` given by its pullback.
#[derive(Clone)]
pub struct InfMap<X: Locale, Y: Locale> {
    pub source: Compactification<X>,
    pub target: Compactification<Y>,
    pub label: String,
    pullback: InfPullback<X, Y>,
}

impl<X: Locale, Y: Locale> fmt::Debug for InfMap<X, Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.label, self.source.name(), self.target.name())
    }
}

impl<X: Locale, Y: Locale> InfMap<X, Y> {
    pub fn new(
        source: Compactification<X>,
        target: Compactification<Y>,
        label: &str,
        pullback: impl Fn(&InfOpen<Y::Open>) -> Result<InfOpen<X::Open>, CompactifyError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            source,
            target,
            label: label.to_string(),
            pullback: Arc::new(pullback),
        }
    }

    /// Validates the input and the output against `p ⇒ ω(u)`.
    pub fn pullback(&self, b: &InfOpen<Y::Open>) -> Result<InfOpen<X::Open>, CompactifyError> {
        if !self.target.is_legal(b) {
            return Err(CompactifyError::NotAnInfOpen(self.target.show(b)));
        }
        let a = (self.pullback)(b)?;
        if !self.source.is_legal(&a) {
            return Err(CompactifyError::NotAnInfOpen(self.source.show(&a)));
        }
        Ok(a)
    }

    pub fn then<Z: Locale>(&self, g: &InfMap<Y, Z>) -> InfMap<X, Z>
    where
        X: 'static,
        Y: 'static,
    {
        let (f, g2) = (self.clone(), g.clone());
        InfMap::new(
            self.source.clone(),
            g.target.clone(),
            &format!("{}.{}", g.label, self.label),
            move |c| f.pullback(&g2.pullback(c)?),
        )
    }

    pub fn agrees_with(&self, other: &InfMap<X, Y>, opens: &[InfOpen<Y::Open>]) -> bool {
        opens.iter().all(|b| match (self.pullback(b), other.pullback(b)) {
            (Ok(a1), Ok(a2)) => self.source.eq_open(&a1, &a2),
            (Err(e1), Err(e2)) => e1 == e2,
            _ => false,
        })
    }
}

/// `f∞` for a proper partial map `f`: on a total map `(f∞)*(U, p) =
/// (f*(U), p)`; a partial map with domain `D` is first extended to
/// `D∞ → Y∞` and then composed with `r_D : X∞ → D∞`.
pub fn extend_to_infty<X, Y>(f: &PartialMap<X, Y>, grid: &Grid) -> Result<InfMap<X, Y>, CompactifyError>
where
    X: HasSubspaces + 'static,
    Y: Locale + 'static,
{
    let verdict = is_proper(f, grid);
    if let Some((open, preimage)) = verdict.counterexample {
        return Err(CompactifyError::NotProper { open, preimage });
    }
    let source = Compactification::unchecked(f.source.clone());
    let target = Compactification::unchecked(f.target.clone());
    let label = format!("{}.inf", f.label);
    let f2 = f.clone();
    if f.is_total() {
        return Ok(InfMap::new(source, target, &label, move |b| {
            Ok(InfOpen::new(f2.pullback(&b.u), b.p))
        }));
    }
    let r = r_u(&f.source, &f.dom);
    Ok(InfMap::new(source, target, &label, move |b| {
        r.pullback(&InfOpen::new(f2.pullback(&b.u), b.p))
    }))
}

/// The partial proper map underlying a pointed `g : X∞ → Y∞`: the domain
/// is `g*(Y)` and `f*(V)` is the `X`-part of `g*(V, ⊥)`.
pub fn restrict_from_infty<X, Y>(g: &InfMap<X, Y>, grid: &Grid) -> Result<PartialMap<X, Y>, CompactifyError>
where
    X: Locale + 'static,
    Y: Locale + 'static,
{
    for b in g.target.sample_opens(grid) {
        let a = g.pullback(&b)?;
        if a.p != b.p {
            return Err(CompactifyError::NotPointed(format!(
                "{} pulls back to {}",
                g.target.show(&b),
                g.source.show(&a)
            )));
        }
    }
    let y = g.target.base();
    let dom = g.pullback(&InfOpen::new(y.top(), false))?.u;
    let g2 = g.clone();
    Ok(PartialMap::new(
        g.source.base().clone(),
        y.clone(),
        dom,
        g.label.strip_suffix(".inf").unwrap_or(&format!("{}.fin", g.label)),
        move |v| {
            g2.pullback(&InfOpen::new(v.clone(), false))
                .map(|a| a.u)
                .expect("opens without ∞ always pull back")
        },
    ))
}
