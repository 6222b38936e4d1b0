use super::natset::NatSet;
use super::{Grid, HasSubspaces, Locale, LocaleError};

/// A discrete space whose points form an eventually periodic subset of ℕ
/// (all of ℕ, a finite range, the evens, ...). Opens are the expressible
/// subsets of the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrete {
    name: String,
    universe: NatSet,
}

impl Discrete {
    pub fn new(name: &str, universe: NatSet) -> Self {
        Self {
            name: name.to_string(),
            universe,
        }
    }

    pub fn naturals() -> Self {
        Self::new("nat", NatSet::all())
    }

    /// The discrete space on `{0, ..., n-1}`.
    pub fn finite(n: u64) -> Self {
        Self::new(&format!("disc{n}"), NatSet::range(n))
    }

    pub fn universe(&self) -> &NatSet {
        &self.universe
    }

    pub fn is_finite(&self) -> bool {
        self.universe.is_finite()
    }

    pub fn point(&self, n: u64) -> Option<NatSet> {
        self.universe.contains(n).then(|| NatSet::singleton(n))
    }

    /// Checks that `a` lies inside the universe.
    pub fn open(&self, a: NatSet) -> Result<NatSet, LocaleError> {
        if a.is_subset(&self.universe) {
            Ok(a)
        } else {
            Err(LocaleError::OutsideSpace(a.to_string()))
        }
    }

    fn subsets_of(points: &[u64]) -> impl Iterator<Item = NatSet> + '_ {
        (0..1u64 << points.len()).map(move |mask| {
            NatSet::finite(
                points
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p),
            )
        })
    }
}

impl Locale for Discrete {
    type Open = NatSet;

    fn name(&self) -> &str {
        &self.name
    }

    fn top(&self) -> NatSet {
        self.universe.clone()
    }

    fn bottom(&self) -> NatSet {
        NatSet::empty()
    }

    fn join(&self, a: &NatSet, b: &NatSet) -> NatSet {
        a.union(b)
    }

    fn meet(&self, a: &NatSet, b: &NatSet) -> NatSet {
        a.intersection(b)
    }

    fn leq(&self, a: &NatSet, b: &NatSet) -> bool {
        a.is_subset(b)
    }

    fn negation(&self, a: &NatSet) -> NatSet {
        self.universe.difference(a)
    }

    fn way_below(&self, a: &NatSet, b: &NatSet) -> bool {
        a.is_finite() && a.is_subset(b)
    }

    fn way_below_whole(&self, a: &NatSet) -> bool {
        a.is_finite()
    }

    /// ω(e) holds iff the complement of `e` is finite, which is then the
    /// witness.
    fn omega(&self, u: &NatSet) -> Option<NatSet> {
        let rest = self.universe.difference(u);
        rest.is_finite().then_some(rest)
    }

    fn positive(&self, a: &NatSet) -> Option<bool> {
        Some(!a.is_empty())
    }

    fn approximants(&self, v: &NatSet, stage: u32) -> Vec<NatSet> {
        vec![v.intersection(&NatSet::range(4 * (stage as u64 + 1)))]
    }

    fn sample_opens(&self, grid: &Grid) -> Vec<NatSet> {
        if let Some(all) = self.all_opens() {
            return all;
        }
        let points = self.universe.members_below(grid.max_point + 1);
        let mut out: Vec<NatSet> = Self::subsets_of(&points).collect();
        out.extend(Self::subsets_of(&points).map(|f| self.universe.difference(&f)));
        for p in [NatSet::evens(), NatSet::odds(), NatSet::periodic(3, [0])] {
            out.push(p.intersection(&self.universe));
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|o| seen.insert(o.clone()));
        out
    }

    fn witness_grid(&self, grid: &Grid) -> Vec<NatSet> {
        let points = match self.universe.finite_members() {
            Some(all) => all,
            None => self.universe.members_below(grid.max_point + 1),
        };
        Self::subsets_of(&points).collect()
    }

    fn all_opens(&self) -> Option<Vec<NatSet>> {
        let points = self.universe.finite_members()?;
        (points.len() <= 12).then(|| Self::subsets_of(&points).collect())
    }

    fn parse_open(&self, text: &str) -> Result<NatSet, LocaleError> {
        let set: NatSet = text
            .parse()
            .map_err(|e: crate::syntax::SyntaxError| LocaleError::Parse(text.to_string(), e.message))?;
        self.open(set)
    }

    fn completely_below(&self, a: &NatSet, b: &NatSet) -> bool {
        a.is_subset(b)
    }
}

impl HasSubspaces for Discrete {
    fn subspace(&self, u: &NatSet) -> Self {
        Self::new(&format!("{}|{}", self.name, u), u.intersection(&self.universe))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locale::omega_by_search;

    #[test]
    fn naturals() {
        let n = Discrete::naturals();
        assert!(n.leq(&NatSet::finite([0, 1]), &NatSet::cofinite([])));
        assert!(!n.leq(&NatSet::cofinite([0]), &NatSet::finite([1, 2])));
        assert!(n.way_below_whole(&NatSet::finite([0, 1])));
        assert!(!n.way_below_whole(&NatSet::all()));
        assert_eq!(n.omega(&NatSet::cofinite([5])), Some(NatSet::finite([5])));
        assert_eq!(n.omega(&n.top()), Some(NatSet::empty()));
        assert_eq!(n.omega(&NatSet::evens()), None);
        assert_eq!(n.positive(&NatSet::singleton(7)), Some(true));
        assert_eq!(n.positive(&NatSet::empty()), Some(false));
    }

    #[test]
    fn finite_universe() {
        let d = Discrete::finite(3);
        assert!(d.is_cover(&NatSet::finite([0, 1, 2])));
        assert_eq!(d.all_opens().unwrap().len(), 8);
        assert!(d.parse_open("{3}").is_err());
        assert!(d.way_below_whole(&d.top()));
    }

    #[test]
    fn omega_matches_search() {
        let n = Discrete::naturals();
        let grid = Grid::default();
        let witnesses = n.witness_grid(&grid);
        for u in n.sample_opens(&grid) {
            assert_eq!(
                n.omega(&u).is_some(),
                omega_by_search(&n, &u, &witnesses).is_some(),
                "{u}"
            );
        }
    }

    #[test]
    fn subspace_of_evens() {
        let n = Discrete::naturals();
        let e = n.subspace(&NatSet::evens());
        assert_eq!(e.omega(&NatSet::periodic(4, [0]).union(&NatSet::finite([2]))), None);
        assert_eq!(
            e.omega(&NatSet::evens().difference(&NatSet::finite([4]))),
            Some(NatSet::finite([4]))
        );
        assert_eq!(
            e.negation(&NatSet::finite([0])),
            NatSet::evens().difference(&NatSet::finite([0]))
        );
    }
}
