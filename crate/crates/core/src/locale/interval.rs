use std::collections::BTreeSet;

use crate::rational::Q;

use super::intervals::IntervalSet;
use super::{Grid, HasSubspaces, Locale, LocaleError};

/// An open subspace of the real line given by finitely many rational
/// intervals; by default the unit interval `(0,1)`. Opens are finite unions
/// of rational open intervals inside the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    name: String,
    universe: IntervalSet,
}

impl Interval {
    pub fn new(name: &str, universe: IntervalSet) -> Self {
        Self {
            name: name.to_string(),
            universe,
        }
    }

    pub fn unit() -> Self {
        Self::new("unit", IntervalSet::unit())
    }

    pub fn universe(&self) -> &IntervalSet {
        &self.universe
    }

    pub fn open(&self, a: IntervalSet) -> Result<IntervalSet, LocaleError> {
        if a.is_subset(&self.universe) {
            Ok(a)
        } else {
            Err(LocaleError::OutsideSpace(a.to_string()))
        }
    }

    /// Rational grid points `k/den` lying in the closure of the universe.
    fn grid_points(&self, den: u32) -> Vec<Vec<Q>> {
        self.universe
            .components()
            .iter()
            .map(|(c, d)| {
                let lo = (c * Q::from_integer(den.into())).ceil().to_integer();
                let hi = (d * Q::from_integer(den.into())).floor().to_integer();
                let mut pts = Vec::new();
                let mut k = lo;
                while k <= hi {
                    pts.push(Q::new(k.clone(), den.into()));
                    k += 1;
                }
                pts
            })
            .collect()
    }

    fn single_intervals(&self, den: u32, strict: bool) -> Vec<(usize, IntervalSet)> {
        let mut out = Vec::new();
        for (ci, pts) in self.grid_points(den).iter().enumerate() {
            let (c, d) = &self.universe.components()[ci];
            for (i, p) in pts.iter().enumerate() {
                for q in &pts[i + 1..] {
                    if strict && (p <= c || q >= d) {
                        continue;
                    }
                    out.push((ci, IntervalSet::interval(p.clone(), q.clone())));
                }
            }
        }
        out
    }
}

impl Locale for Interval {
    type Open = IntervalSet;

    fn name(&self) -> &str {
        &self.name
    }

    fn top(&self) -> IntervalSet {
        self.universe.clone()
    }

    fn bottom(&self) -> IntervalSet {
        IntervalSet::empty()
    }

    fn join(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.union(b)
    }

    fn meet(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.intersection(b)
    }

    fn leq(&self, a: &IntervalSet, b: &IntervalSet) -> bool {
        a.is_subset(b)
    }

    /// The interior of the complement: the universe minus the closure.
    fn negation(&self, a: &IntervalSet) -> IntervalSet {
        a.closure_components()
            .iter()
            .fold(self.universe.clone(), |acc, (p, q)| acc.minus_closed(p, q))
    }

    /// Every closure component `[p,q]` of `a` sits in a component `(c,d)` of
    /// `b` with `c < p` and `q < d`.
    fn way_below(&self, a: &IntervalSet, b: &IntervalSet) -> bool {
        a.closure_components()
            .iter()
            .all(|(p, q)| b.components().iter().any(|(c, d)| c < p && q < d))
    }

    /// ω(u) holds iff, in every component `(c,d)` of the universe not
    /// already contained in `u`, `u` contains some `(c,a)` and some `(b,d)`.
    /// The witness keeps four fifths of each end slack:
    /// `(c + 4(a-c)/5, d - 4(d-b)/5)`.
    fn omega(&self, u: &IntervalSet) -> Option<IntervalSet> {
        let four_fifths = Q::new(4.into(), 5.into());
        let mut pieces = Vec::new();
        for (c, d) in self.universe.components() {
            if u.covers_interval(c, d) {
                continue;
            }
            let left = u.components().iter().find(|(p, _)| p == c)?;
            let right = u.components().iter().find(|(_, q)| q == d)?;
            let lo = c + (&left.1 - c) * &four_fifths;
            let hi = d - (d - &right.0) * &four_fifths;
            pieces.push((lo, hi));
        }
        Some(IntervalSet::from_intervals(pieces))
    }

    fn positive(&self, a: &IntervalSet) -> Option<bool> {
        Some(!a.is_empty())
    }

    /// Each component `(p,q)` shrunk to `(p+δ, q-δ)` with
    /// `δ = (q-p)/2^(stage+2)`.
    fn approximants(&self, v: &IntervalSet, stage: u32) -> Vec<IntervalSet> {
        let scale = Q::from_integer((1u64 << (stage + 2)).into());
        let comps = v.components().iter().map(|(p, q)| {
            let delta = (q - p) / &scale;
            (p + &delta, q - &delta)
        });
        vec![IntervalSet::from_intervals(comps)]
    }

    fn sample_opens(&self, grid: &Grid) -> Vec<IntervalSet> {
        let singles: Vec<IntervalSet> = self
            .single_intervals(grid.denominator, false)
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |s: IntervalSet| {
            if seen.insert(s.clone()) {
                out.push(s);
            }
        };
        push(IntervalSet::empty());
        push(self.universe.clone());
        let mut layer: Vec<IntervalSet> = singles.clone();
        for s in &layer {
            push(s.clone());
        }
        for _ in 1..grid.max_components {
            let mut next = Vec::new();
            for a in &layer {
                for b in &singles {
                    if b > a {
                        let u = a.union(b);
                        if u.components().len() > a.components().len() {
                            next.push(u.clone());
                        }
                        push(u);
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Unions of one interval per universe component, strictly inside it,
    /// on the doubled grid.
    fn witness_grid(&self, grid: &Grid) -> Vec<IntervalSet> {
        let per_comp: Vec<Vec<IntervalSet>> = {
            let singles = self.single_intervals(2 * grid.denominator, true);
            (0..self.universe.components().len())
                .map(|ci| {
                    let mut opts = vec![IntervalSet::empty()];
                    opts.extend(singles.iter().filter(|(c, _)| *c == ci).map(|(_, s)| s.clone()));
                    opts
                })
                .collect()
        };
        let mut out = vec![IntervalSet::empty()];
        for opts in per_comp {
            out = out.iter().flat_map(|w| opts.iter().map(move |o| w.union(o))).collect();
        }
        out
    }

    fn parse_open(&self, text: &str) -> Result<IntervalSet, LocaleError> {
        let t = text.trim();
        if t.starts_with('{') || t.starts_with("cofinite") || t.starts_with("mod") {
            return Err(LocaleError::UnsupportedForm);
        }
        let set: IntervalSet = t
            .parse()
            .map_err(|e: crate::syntax::SyntaxError| LocaleError::Parse(text.to_string(), e.message))?;
        self.open(set)
    }
}

impl HasSubspaces for Interval {
    fn subspace(&self, u: &IntervalSet) -> Self {
        Self::new(&format!("{}|{}", self.name, u), u.intersection(&self.universe))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locale::omega_by_search;
    use num_traits::{One, Zero};

    fn lower_half() -> IntervalSet {
        IntervalSet::interval(Q::zero(), Q::one() / Q::from_integer(2.into()))
    }

    fn iv(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    #[test]
    fn relations() {
        let x = Interval::unit();
        assert!(x.leq(&iv("(0,1/2)"), &iv("(0,1/4)|(1/8,3/4)")));
        assert!(x.way_below(&iv("(1/4,1/2)"), &iv("(1/8,3/4)")));
        assert!(!x.way_below(&iv("(0,1/2)"), &x.top()));
        assert!(x.is_cover(&iv("(0,2/3)|(1/3,1)")));
        assert!(x.rather_below(&iv("(0,1/2)"), &iv("(0,3/4)")));
        assert!(!x.rather_below(&iv("(0,1/2)"), &iv("(0,1/2)")));
        assert_eq!(x.negation(&iv("(1/4,1/2)")), iv("(0,1/4)|(1/2,1)"));
        assert_eq!(x.negation(&x.top()), IntervalSet::empty());
    }

    #[test]
    fn omega_examples() {
        let x = Interval::unit();
        assert_eq!(x.omega(&iv("(0,1/4)|(3/4,1)")), Some(iv("(1/5,4/5)")));
        assert_eq!(x.omega(&iv("(0,1/2)")), None);
        assert_eq!(x.omega(&x.top()), Some(IntervalSet::empty()));
        assert_eq!(x.omega(&iv("(0,3/4)")), None);
        assert_eq!(x.omega(&iv("(1/4,1)")), None);
        let w = x.omega(&iv("(0,1/8)|(1/4,1/2)|(7/8,1)")).unwrap();
        assert!(x.way_below_whole(&w));
        assert!(x.is_cover(&x.join(&w, &iv("(0,1/8)|(1/4,1/2)|(7/8,1)"))));
    }

    #[test]
    fn omega_matches_search() {
        let x = Interval::unit();
        let grid = Grid {
            max_components: 2,
            ..Grid::default()
        };
        let witnesses = x.witness_grid(&grid);
        for u in x.sample_opens(&grid) {
            assert_eq!(
                x.omega(&u).is_some(),
                omega_by_search(&x, &u, &witnesses).is_some(),
                "{u}"
            );
        }
    }

    #[test]
    fn subspace_lower_half() {
        let x = Interval::unit();
        let h = x.subspace(&lower_half());
        assert_eq!(h.omega(&iv("(0,1/8)|(3/8,1/2)")), Some(iv("(1/10,2/5)")));
        assert!(!h.way_below_whole(&iv("(1/4,1/2)")));
        assert!(h.way_below_whole(&iv("(1/4,3/8)")));
        assert_eq!(h.negation(&iv("(1/4,1/2)")), iv("(0,1/4)"));
    }

    #[test]
    fn rejects_point_syntax() {
        assert_eq!(
            Interval::unit().parse_open("cofinite{1}"),
            Err(LocaleError::UnsupportedForm)
        );
        assert!(Interval::unit().parse_open("(1/2,3/2)").is_err());
    }
}
