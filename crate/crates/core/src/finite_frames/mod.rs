//! Finite distributive lattices used as fully decidable frames.
//!
//! Every relation between opens (way below, rather below, completely
//! below) is decided here by exhaustive computation, which makes this layer
//! the reference model that the infinite presentations are checked against.

mod dot;
mod generate;
mod relations;
mod text;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use thiserror::Error;

pub use relations::{Counterexample, FrameElement, Property, PropertyVerdict, Scale};
pub use text::{parse_lattices, LatticeSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame mismatch")]
    Mismatch,
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("no least upper bound for {0} and {1}")]
    NoJoin(String, String),
    #[error("no greatest lower bound for {0} and {1}")]
    NoMeet(String, String),
    #[error("not distributive: {a} ∧ ({b} ∨ {c}) ≠ ({a} ∧ {b}) ∨ ({a} ∧ {c})")]
    NotDistributive { a: String, b: String, c: String },
    #[error("not completely below")]
    NotCompletelyBelow,
}

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// A finite distributive lattice with explicit order and operation tables.
///
/// Elements are addressed by their index `0..len()`. Instances are immutable
/// after construction.
#[derive(Debug)]
pub struct FiniteFrame {
    uid: u64,
    name: String,
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    /// Linear extension of the order (by height, then index); used for
    /// deterministic tie-breaking.
    enumeration: Vec<usize>,
    completely_below: OnceLock<Vec<Vec<bool>>>,
}

impl Clone for FiniteFrame {
    fn clone(&self) -> Self {
        Self {
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
            name: self.name.clone(),
            names: self.names.clone(),
            leq: self.leq.clone(),
            join: self.join.clone(),
            meet: self.meet.clone(),
            bottom: self.bottom,
            top: self.top,
            enumeration: self.enumeration.clone(),
            completely_below: OnceLock::new(),
        }
    }
}

impl FiniteFrame {
    /// Builds a frame from element names and order pairs `(a, b)` meaning
    /// `a <= b`. The reflexive-transitive closure of the pairs is taken, so
    /// covering pairs suffice.
    pub fn new<S: AsRef<str>>(name: &str, elements: &[S], pairs: &[(S, S)]) -> Result<Self, FrameError> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FrameError::DuplicateElement(n.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| FrameError::UnknownElement(s.to_string()))
        };
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx_pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_index_pairs(name, names, &idx_pairs)
    }

    /// Same as [`FiniteFrame::new`] with elements already numbered.
    pub fn from_index_pairs(name: &str, names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(FrameError::NotAntisymmetric(names[i].clone(), names[j].clone()));
                }
            }
        }

        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&c| {
                    if upper {
                        leq[a][c] && leq[b][c]
                    } else {
                        leq[c][a] && leq[c][b]
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| if upper { leq[c][d] } else { leq[d][c] }))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = bound(a, b, true).ok_or_else(|| FrameError::NoJoin(names[a].clone(), names[b].clone()))?;
                meet[a][b] =
                    bound(a, b, false).ok_or_else(|| FrameError::NoMeet(names[a].clone(), names[b].clone()))?;
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b][x]))
            .expect("finite lattice has a bottom");
        let top = (0..n)
            .find(|&t| (0..n).all(|x| leq[x][t]))
            .expect("finite lattice has a top");

        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(FrameError::NotDistributive {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }

        let height: Vec<usize> = (0..n)
            .map(|x| (0..n).filter(|&y| y != x && leq[y][x]).count())
            .collect();
        let mut enumeration: Vec<usize> = (0..n).collect();
        enumeration.sort_by_key(|&x| (height[x], x));

        Ok(Self {
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
            name: name.to_string(),
            names,
            leq,
            join,
            meet,
            bottom,
            top,
            enumeration,
            completely_below: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn element_name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join[acc][x])
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet[acc][x])
    }

    /// Elements in the fixed enumeration order (a linear extension of `<=`).
    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    pub fn element(&self, id: usize) -> FrameElement<'_> {
        assert!(id < self.len(), "element id out of range");
        FrameElement::new(self, id)
    }

    pub fn element_by_name(&self, name: &str) -> Result<FrameElement<'_>, FrameError> {
        self.id_of(name)
            .map(|id| FrameElement::new(self, id))
            .ok_or_else(|| FrameError::UnknownElement(name.to_string()))
    }

    pub(crate) fn same_frame(&self, other: &FiniteFrame) -> bool {
        self.uid == other.uid
    }

    /// Largest `c` with `a ∧ c <= b`.
    pub fn implies(&self, a: usize, b: usize) -> usize {
        self.join_all((0..self.len()).filter(|&c| self.leq[self.meet[a][c]][b]))
    }

    pub fn negation(&self, a: usize) -> usize {
        self.implies(a, self.bottom)
    }

    /// In a finite frame every directed family contains its supremum, so
    /// `a ≪ b` reduces to `a <= b`.
    pub fn way_below(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// `a ⊲ b`, returning the largest witness `¬a` when it exists.
    pub fn rather_below(&self, a: usize, b: usize) -> Option<usize> {
        let w = self.negation(a);
        (self.join[b][w] == self.top).then_some(w)
    }

    /// Whether `a` has a complement.
    pub fn is_complemented(&self, a: usize) -> bool {
        self.join[a][self.negation(a)] == self.top
    }

    /// The covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Join-irreducible elements (nonzero, not the join of two strictly
    /// smaller elements).
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&x| x != self.bottom)
            .filter(|&x| {
                let below: Vec<usize> = (0..n).filter(|&y| y != x && self.leq[y][x]).collect();
                self.join_all(below.iter().copied()) != x
            })
            .collect()
    }

    /// An order isomorphism `self -> other` given as `map[i]`, found by
    /// matching the posets of join-irreducibles.
    pub fn isomorphism(&self, other: &FiniteFrame) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let ja = self.join_irreducibles();
        let jb = other.join_irreducibles();
        if ja.len() != jb.len() {
            return None;
        }
        let mut assign = vec![usize::MAX; ja.len()];
        let mut used = vec![false; jb.len()];
        if !self.match_irreducibles(other, &ja, &jb, 0, &mut assign, &mut used) {
            return None;
        }
        let map: Vec<usize> = (0..self.len())
            .map(|x| {
                other.join_all(
                    ja.iter()
                        .enumerate()
                        .filter(|(_, &j)| self.leq[j][x])
                        .map(|(k, _)| jb[assign[k]]),
                )
            })
            .collect();
        let bijective = {
            let mut seen = vec![false; other.len()];
            map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        };
        let order_iso = (0..self.len()).all(|a| (0..self.len()).all(|b| self.leq[a][b] == other.leq[map[a]][map[b]]));
        (bijective && order_iso).then_some(map)
    }

    fn match_irreducibles(
        &self,
        other: &FiniteFrame,
        ja: &[usize],
        jb: &[usize],
        k: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == ja.len() {
            return true;
        }
        for cand in 0..jb.len() {
            if used[cand] {
                continue;
            }
            let consistent = (0..k).all(|prev| {
                self.leq[ja[prev]][ja[k]] == other.leq[jb[assign[prev]]][jb[cand]]
                    && self.leq[ja[k]][ja[prev]] == other.leq[jb[cand]][jb[assign[prev]]]
            });
            if consistent {
                used[cand] = true;
                assign[k] = cand;
                if self.match_irreducibles(other, ja, jb, k + 1, assign, used) {
                    return true;
                }
                used[cand] = false;
            }
        }
        false
    }
}
