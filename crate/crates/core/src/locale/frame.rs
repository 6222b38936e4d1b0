use std::sync::Arc;

use crate::finite_frames::FiniteFrame;
use crate::locale::natset::parse_braced_list;

use super::{largest_interpolative, Grid, HasSubspaces, Locale, LocaleError};

/// A finite frame viewed as a locale; the opens are the elements below
/// `universe` (the whole frame unless this is an open sublocale).
#[derive(Debug, Clone)]
pub struct FramePresentation {
    name: String,
    frame: Arc<FiniteFrame>,
    universe: usize,
}

impl FramePresentation {
    pub fn new(frame: FiniteFrame) -> Self {
        let top = frame.top();
        Self {
            name: frame.name().to_string(),
            frame: Arc::new(frame),
            universe: top,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn frame(&self) -> &FiniteFrame {
        &self.frame
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn element(&self, name: &str) -> Result<usize, LocaleError> {
        let id = self
            .frame
            .id_of(name)
            .ok_or_else(|| LocaleError::UnknownElement(name.to_string()))?;
        if self.frame.leq(id, self.universe) {
            Ok(id)
        } else {
            Err(LocaleError::OutsideSpace(name.to_string()))
        }
    }
}

impl Locale for FramePresentation {
    type Open = usize;

    fn name(&self) -> &str {
        &self.name
    }

    fn top(&self) -> usize {
        self.universe
    }

    fn bottom(&self) -> usize {
        self.frame.bottom()
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        self.frame.join(*a, *b)
    }

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.frame.meet(*a, *b)
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.frame.leq(*a, *b)
    }

    fn negation(&self, a: &usize) -> usize {
        self.frame.meet(self.frame.negation(*a), self.universe)
    }

    fn way_below(&self, a: &usize, b: &usize) -> bool {
        self.frame.way_below(*a, *b)
    }

    /// Finite frames are compact, so the top element is always a witness.
    fn omega(&self, _u: &usize) -> Option<usize> {
        Some(self.universe)
    }

    fn positive(&self, a: &usize) -> Option<bool> {
        Some(*a != self.frame.bottom())
    }

    fn approximants(&self, v: &usize, _stage: u32) -> Vec<usize> {
        self.frame
            .enumeration()
            .iter()
            .copied()
            .filter(|&u| self.frame.leq(u, *v))
            .collect()
    }

    fn sample_opens(&self, _grid: &Grid) -> Vec<usize> {
        self.approximants(&self.universe, 0)
    }

    fn witness_grid(&self, _grid: &Grid) -> Vec<usize> {
        self.approximants(&self.universe, 0)
    }

    fn all_opens(&self) -> Option<Vec<usize>> {
        Some(self.approximants(&self.universe, 0))
    }

    /// `{a,b}` denotes the join of the named elements; a bare name is
    /// accepted too.
    fn parse_open(&self, text: &str) -> Result<usize, LocaleError> {
        let t = text.trim();
        if t.starts_with("cofinite") || t.starts_with("mod") || t.starts_with('(') {
            return Err(LocaleError::UnsupportedForm);
        }
        if !t.starts_with('{') {
            return self.element(t);
        }
        let (items, rest) = parse_braced_list(t).map_err(|m| LocaleError::Parse(text.to_string(), m))?;
        if !rest.trim().is_empty() {
            return Err(LocaleError::Parse(text.to_string(), "trailing input".into()));
        }
        let ids = items.iter().map(|n| self.element(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.frame.join_all(ids))
    }

    fn show(&self, a: &usize) -> String {
        self.frame.element_name(*a).to_string()
    }

    fn completely_below(&self, a: &usize, b: &usize) -> bool {
        if self.universe == self.frame.top() {
            return self.frame.completely_below(*a, *b);
        }
        let opens = self.approximants(&self.universe, 0);
        let (Some(i), Some(j)) = (opens.iter().position(|x| x == a), opens.iter().position(|x| x == b)) else {
            return false;
        };
        largest_interpolative(&opens, |x, y| self.rather_below(x, y))[i][j]
    }
}

impl HasSubspaces for FramePresentation {
    fn subspace(&self, u: &usize) -> Self {
        Self {
            name: format!("{}|{}", self.name, self.show(u)),
            frame: Arc::clone(&self.frame),
            universe: self.frame.meet(*u, self.universe),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_frames::Property;
    use crate::locale::spot_check;

    #[test]
    fn delegates_to_the_frame() {
        let s = FramePresentation::new(FiniteFrame::sierpinski());
        let u = s.parse_open("u").unwrap();
        assert!(s.way_below(&u, &s.top()));
        assert_eq!(s.omega(&u), Some(s.top()));
        assert!(s.is_cover(&s.parse_open("{u,1}").unwrap()));
        assert_eq!(s.parse_open("cofinite{}"), Err(LocaleError::UnsupportedForm));
        let v = spot_check(&s, Property::Regular, &Grid::default());
        assert!(!v.holds);
        assert_eq!(v.open, Some(u));
        assert!(spot_check(&s, Property::Compact, &Grid::default()).holds);
    }

    #[test]
    fn boolean_frames_pass_every_check() {
        let b = FramePresentation::new(FiniteFrame::boolean(3));
        for p in Property::ALL {
            assert!(spot_check(&b, p, &Grid::default()).holds, "{p}");
        }
    }

    #[test]
    fn subspace_negation() {
        let b = FramePresentation::new(FiniteFrame::boolean(2));
        let sub = b.subspace(&1);
        assert_eq!(sub.top(), 1);
        assert_eq!(sub.negation(&1), 0);
        assert_eq!(sub.negation(&0), 1);
        assert!(sub.completely_below(&1, &1));
    }
}
