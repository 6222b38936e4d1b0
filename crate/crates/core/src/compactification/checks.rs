use crate::locale::{Grid, Locale};

use super::{Compactification, InfOpen};

/// Outcome of [`check_compact_infty`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactVerdict {
    pub holds: bool,
    /// Indices into the family of a finite subcover.
    pub subcover: Vec<usize>,
    pub reason: Option<String>,
}

impl CompactVerdict {
    fn fail(reason: String) -> Self {
        Self {
            holds: false,
            subcover: Vec::new(),
            reason: Some(reason),
        }
    }
}

/// Extracts a finite subcover from a covering family of `X∞`, given as a
/// generator that is queried for indices `0..limit`.
///
/// Some member `(U_i0, ⊤)` contains `∞`; its ω-witness `W` is way below `X`,
/// so finitely many members cover the part of `W` left uncovered by `U_i0`.
/// These are collected greedily in index order.
pub fn check_compact_infty<L: Locale>(
    xi: &Compactification<L>,
    family: impl Fn(usize) -> Option<InfOpen<L::Open>>,
    limit: usize,
) -> CompactVerdict {
    let x = xi.base();
    let members: Vec<(usize, InfOpen<L::Open>)> = (0..limit).filter_map(|i| family(i).map(|m| (i, m))).collect();
    if let Some((_, bad)) = members.iter().find(|(_, m)| !xi.is_legal(m)) {
        return CompactVerdict::fail(format!("{} is not an open of {}", xi.show(bad), xi.name()));
    }
    let Some((i0, first)) = members.iter().find(|(_, m)| m.p) else {
        return CompactVerdict::fail(format!("no member among the first {limit} contains ∞"));
    };
    let w = x.omega(&first.u).expect("legal opens with ∞ have an ω-witness");
    let mut subcover = vec![*i0];
    let mut covered = first.u.clone();
    for (i, m) in &members {
        if x.leq(&w, &covered) {
            break;
        }
        let before = x.meet(&w, &covered);
        let after = x.meet(&w, &x.join(&covered, &m.u));
        if !x.leq(&after, &before) {
            subcover.push(*i);
            covered = x.join(&covered, &m.u);
        }
    }
    if !x.leq(&w, &covered) {
        return CompactVerdict::fail(format!(
            "the first {limit} members do not cover the witness {} of {}",
            x.show(&w),
            xi.show(first)
        ));
    }
    subcover.sort_unstable();
    let join = xi.join_all(
        subcover
            .iter()
            .map(|&i| &members.iter().find(|(j, _)| *j == i).unwrap().1),
    );
    debug_assert!(xi.is_cover(&join));
    CompactVerdict {
        holds: true,
        subcover,
        reason: None,
    }
}

/// Covering families of `X∞` built from the grid: each legal sampled
/// `(U, ⊤)` followed by the witness-grid opens of `X`. Only families that
/// actually cover are returned.
pub fn sample_cover_families<L: Locale>(xi: &Compactification<L>, grid: &Grid) -> Vec<Vec<InfOpen<L::Open>>> {
    let x = xi.base();
    let fillers: Vec<InfOpen<L::Open>> = x
        .witness_grid(grid)
        .into_iter()
        .filter(|w| x.way_below_whole(w))
        .map(|w| InfOpen::new(w, false))
        .collect();
    let mut out = Vec::new();
    for u in x.sample_opens(grid) {
        let Ok(head) = xi.open(u, true) else { continue };
        let mut fam = vec![head];
        fam.extend(fillers.iter().cloned());
        if xi.is_cover(&xi.join_all(&fam)) {
            out.push(fam);
        }
    }
    out
}

/// Outcome of [`check_regular_infty`] for one open `A` of `X∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularVerdict<O> {
    pub open: InfOpen<O>,
    pub holds: bool,
    /// Pairs `(T, W)` with `T ⊲ A` witnessed by `W`.
    pub terms: Vec<(InfOpen<O>, InfOpen<O>)>,
    pub reason: Option<String>,
}

/// Decomposes `A = (U, p)` into opens rather below it, each with an explicit
/// witness: `(V, ⊥)` for the approximants `V` of `U`, witnessed by
/// `(¬V, ⊤)`, and when `p` the open `(U ∧ ¬W, ⊤)` for the ω-witness `W` of
/// `U`, witnessed by `(W, ⊥)`. Every sampled probe `P ≪ U` must lie below
/// the join of the terms.
pub fn check_regular_infty<L: Locale>(
    xi: &Compactification<L>,
    a: &InfOpen<L::Open>,
    grid: &Grid,
) -> RegularVerdict<L::Open> {
    let x = xi.base();
    let mut terms = Vec::new();
    let fail = |terms, reason: String| RegularVerdict {
        open: a.clone(),
        holds: false,
        terms,
        reason: Some(reason),
    };
    if !xi.is_legal(a) {
        return fail(terms, format!("{} is not an open of {}", xi.show(a), xi.name()));
    }
    for stage in 0..=grid.stages {
        for v in x.approximants(&a.u, stage) {
            let t = InfOpen::new(v.clone(), false);
            let w = InfOpen::new(x.negation(&v), true);
            if !terms.iter().any(|(s, _)| *s == t) {
                terms.push((t, w));
            }
        }
    }
    if a.p {
        let w = x.omega(&a.u).expect("legal");
        let t = InfOpen::new(x.meet(&a.u, &x.negation(&w)), true);
        terms.push((t, InfOpen::new(w, false)));
    }
    for (t, w) in &terms {
        if !xi.is_legal(w) {
            let r = format!(
                "witness {} for {} is not an open of {}",
                xi.show(w),
                xi.show(t),
                xi.name()
            );
            return fail(terms.clone(), r);
        }
        let disjoint = xi.leq(&xi.meet(t, w), &xi.bottom());
        let covers = xi.is_cover(&xi.join(a, w));
        if !disjoint || !covers || !xi.leq(t, a) {
            let r = format!("{} does not witness {} ⊲ {}", xi.show(w), xi.show(t), xi.show(a));
            return fail(terms.clone(), r);
        }
    }
    let j = xi.join_all(terms.iter().map(|(t, _)| t));
    if j.p != a.p {
        return fail(terms, "the terms miss ∞".into());
    }
    for probe in x.sample_opens(grid) {
        if x.way_below(&probe, &a.u) && !x.leq(&probe, &j.u) {
            let r = format!("probe {} is not covered by the terms", x.show(&probe));
            return fail(terms, r);
        }
    }
    RegularVerdict {
        open: a.clone(),
        holds: true,
        terms,
        reason: None,
    }
}

/// Runs [`check_regular_infty`] over the sampled opens, returning the first
/// failure if any.
pub fn check_regular_all<L: Locale>(xi: &Compactification<L>, grid: &Grid) -> Result<usize, RegularVerdict<L::Open>> {
    let samples = xi.sample_opens(grid);
    for a in &samples {
        let v = check_regular_infty(xi, a, grid);
        if !v.holds {
            return Err(v);
        }
    }
    Ok(samples.len())
}
