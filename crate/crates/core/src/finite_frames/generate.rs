use super::{FiniteFrame, FrameError};

pub(crate) fn subset_name(mask: u64, width: usize) -> String {
    let members: Vec<String> = (0..width)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

impl FiniteFrame {
    /// The three-element chain `0 < u < 1`.
    pub fn sierpinski() -> Self {
        Self::new("sierpinski", &["0", "u", "1"], &[("0", "u"), ("u", "1")]).expect("chain is a distributive lattice")
    }

    /// The chain with `len` elements named `0..len`.
    pub fn chain(len: usize) -> Self {
        let names: Vec<String> = (0..len).map(|i| i.to_string()).collect();
        let pairs: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_index_pairs(&format!("chain{len}"), names, &pairs).expect("chain is a distributive lattice")
    }

    /// The powerset of `{0..n}`; element `i` is the subset with bitmask `i`.
    pub fn boolean(n: usize) -> Self {
        let size = 1usize << n;
        let names: Vec<String> = (0..size).map(|m| subset_name(m as u64, n)).collect();
        let mut pairs = Vec::new();
        for m in 0..size {
            for bit in 0..n {
                if m >> bit & 1 == 0 {
                    pairs.push((m, m | 1 << bit));
                }
            }
        }
        Self::from_index_pairs(&format!("bool{n}"), names, &pairs).expect("powerset is a distributive lattice")
    }

    /// The lattice of down-sets of a finite poset on `points` elements, where
    /// `order` lists pairs `(i, j)` with `i <= j`. Every finite distributive
    /// lattice arises this way.
    pub fn downsets(name: &str, points: usize, order: &[(usize, usize)]) -> Result<Self, FrameError> {
        assert!(points < 64, "poset too large");
        let mut below = vec![vec![false; points]; points];
        for (i, row) in below.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in order {
            below[i][j] = true;
        }
        for k in 0..points {
            for i in 0..points {
                for j in 0..points {
                    if below[i][k] && below[k][j] {
                        below[i][j] = true;
                    }
                }
            }
        }
        let is_down = |mask: u64| {
            (0..points).all(|j| mask >> j & 1 == 0 || (0..points).all(|i| !below[i][j] || mask >> i & 1 == 1))
        };
        let sets: Vec<u64> = (0..1u64 << points).filter(|&m| is_down(m)).collect();
        let names: Vec<String> = sets.iter().map(|&m| subset_name(m, points)).collect();
        let mut pairs = Vec::new();
        for (a, &x) in sets.iter().enumerate() {
            for (b, &y) in sets.iter().enumerate() {
                if a != b && x & y == x {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_index_pairs(name, names, &pairs)
    }
}
