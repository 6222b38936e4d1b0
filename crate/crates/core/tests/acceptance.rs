//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.
//!
//! Golden reports live in `tests/golden`; set `POINTFREE_UPDATE_GOLDEN=1`
//! to rewrite them.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pointfree::cli;
use pointfree::compactification::{
    check_compact_infty, check_regular_all, compactify, extend_to_infty, restrict_from_infty, sample_cover_families,
    Compactification, InfOpen, PartialMap,
};
use pointfree::cstar::{
    functions_on_compactification, AlgElement, DeskAlgebra, IndexMorphism, StarAlgebra, UnitElement, Unitization,
};
use pointfree::exact_reals::{agree_within, certify_le, lemma1_refine, UpperReal};
use pointfree::finite_frames::{parse_lattices, FiniteFrame, Property};
use pointfree::locale::{Discrete, Grid, IndexMap, Interval, IntervalSet, Locale, NatSet};
use pointfree::rational::{pow2_neg, q, qi, ComplexQ, Q};
use pointfree::spectrum::{
    characters, ideal_to_open, nondegenerate_iff_proper, norm_from_positivity, open_to_ideal, pushforward_ideal,
    pushforward_ideal_via_spectra, spec, ClosedIdealDesc,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn workspace_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../workspace")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

// ---------------------------------------------------------------- 1

fn random_lattice(rng: &mut ChaCha8Rng, idx: usize) -> FiniteFrame {
    let points = rng.gen_range(1..=5);
    let mut order = Vec::new();
    for i in 0..points {
        for j in i + 1..points {
            if rng.gen_bool(0.35) {
                order.push((i, j));
            }
        }
    }
    FiniteFrame::downsets(&format!("random{idx}"), points, &order).expect("down-sets form a distributive lattice")
}

fn matrix(n: usize, rel: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
    (0..n).map(|a| (0..n).map(|b| rel(a, b)).collect()).collect()
}

/// Directed subsets of a frame with few elements, by brute force.
fn way_below_by_directed_sets(f: &FiniteFrame) -> Vec<Vec<bool>> {
    let n = f.len();
    let mut directed = Vec::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let ok = members.iter().all(|&x| {
            members
                .iter()
                .all(|&y| members.iter().any(|&z| f.leq(x, z) && f.leq(y, z)))
        });
        if ok {
            directed.push(members);
        }
    }
    matrix(n, |a, b| {
        directed
            .iter()
            .filter(|d| f.leq(b, f.join_all(d.iter().copied())))
            .all(|d| d.iter().any(|&x| f.leq(a, x)))
    })
}

/// `b` reachable from `a` in exactly `2^depth` steps of `rel`: a dyadic
/// scale of that depth.
fn scale_exists(rel: &[Vec<bool>], a: usize, b: usize, depth: u32) -> bool {
    let n = rel.len();
    let mut reach = vec![false; n];
    reach[a] = true;
    for _ in 0..(1u32 << depth) {
        let mut next = vec![false; n];
        for x in (0..n).filter(|&x| reach[x]) {
            for y in 0..n {
                if rel[x][y] {
                    next[y] = true;
                }
            }
        }
        reach = next;
    }
    reach[b]
}

fn check_frame(f: &FiniteFrame, stats: &mut [usize; 3]) -> Result<(), String> {
    let n = f.len();
    let name = f.name().to_string();
    let (bot, top) = (f.bottom(), f.top());
    for a in 0..n {
        ensure!(f.leq(bot, a) && f.leq(a, top), "{name}: bounds fail at {a}");
        for b in 0..n {
            let (j, m) = (f.join(a, b), f.meet(a, b));
            ensure!(f.leq(a, j) && f.leq(b, j), "{name}: join not an upper bound");
            ensure!(f.leq(m, a) && f.leq(m, b), "{name}: meet not a lower bound");
            for c in 0..n {
                if f.leq(a, c) && f.leq(b, c) {
                    ensure!(f.leq(j, c), "{name}: join of {a},{b} not least");
                }
                if f.leq(c, a) && f.leq(c, b) {
                    ensure!(f.leq(c, m), "{name}: meet of {a},{b} not greatest");
                }
                ensure!(
                    f.join(f.join(a, b), c) == f.join(a, f.join(b, c)),
                    "{name}: join not associative"
                );
                ensure!(
                    f.meet(f.meet(a, b), c) == f.meet(a, f.meet(b, c)),
                    "{name}: meet not associative"
                );
                ensure!(
                    f.meet(a, f.join(b, c)) == f.join(f.meet(a, b), f.meet(a, c)),
                    "{name}: distributivity fails at ({a},{b},{c})"
                );
                ensure!(
                    f.leq(f.meet(a, c), b) == f.leq(c, f.implies(a, b)),
                    "{name}: Heyting adjunction fails at ({a},{b},{c})"
                );
            }
            ensure!(j == f.join(b, a) && m == f.meet(b, a), "{name}: not commutative");
            ensure!(
                f.join(a, f.meet(a, b)) == a && f.meet(a, f.join(a, b)) == a,
                "{name}: absorption fails"
            );
        }
        ensure!(f.join(a, a) == a && f.meet(a, a) == a, "{name}: not idempotent");
    }

    let leq = matrix(n, |a, b| f.leq(a, b));
    let rb_oracle = matrix(n, |a, b| (0..n).any(|w| f.join(b, w) == top && f.meet(a, w) == bot));
    let rb = matrix(n, |a, b| match f.rather_below(a, b) {
        Some(w) => f.join(b, w) == top && f.meet(a, w) == bot,
        None => false,
    });
    ensure!(rb == rb_oracle, "{name}: rather below differs from the witness search");
    let wb = matrix(n, |a, b| f.way_below(a, b));
    if n <= 8 {
        ensure!(
            wb == way_below_by_directed_sets(f),
            "{name}: way below differs from directed-set search"
        );
    }
    let cb = matrix(n, |a, b| f.completely_below(a, b));

    for (label, rel) in [("way below", &wb), ("rather below", &rb), ("completely below", &cb)] {
        for a in 0..n {
            for b in 0..n {
                if !rel[a][b] {
                    continue;
                }
                ensure!(leq[a][b], "{name}: {label} not inside <= at ({a},{b})");
                for c in 0..n {
                    for d in 0..n {
                        if leq[c][a] && leq[b][d] {
                            ensure!(rel[c][d], "{name}: {label} not stable under <= at ({c},{d})");
                        }
                        if rel[c][d] {
                            ensure!(
                                rel[f.join(a, c)][f.join(b, d)],
                                "{name}: {label} not closed under joins at ({a},{b}),({c},{d})"
                            );
                        }
                    }
                }
            }
        }
    }
    let regular = f.check_property(Property::Regular).holds;
    let creg = f.check_property(Property::CompletelyRegular).holds;
    let compact = f.check_property(Property::Compact).holds;
    ensure!(compact, "{name}: finite frame not compact");
    for a in 0..n {
        for b in 0..n {
            if regular && wb[a][b] {
                ensure!(rb[a][b], "{name}: regular but way below does not imply rather below");
            }
            if creg && wb[a][b] {
                ensure!(
                    cb[a][b],
                    "{name}: completely regular but way below does not imply completely below"
                );
            }
            if compact && rb[a][b] {
                ensure!(wb[a][b], "{name}: compact but rather below does not imply way below");
            }
            if cb[a][b] {
                ensure!(rb[a][b], "{name}: completely below does not imply rather below");
            }
            let by_scale = scale_exists(&rb_oracle, a, b, 4);
            ensure!(
                cb[a][b] == by_scale,
                "{name}: completely below ({a},{b}) = {} but depth-4 scale search says {by_scale}",
                cb[a][b]
            );
            stats[1] += 1;
            if cb[a][b] {
                let s = f.build_scale(a, b, 4).map_err(|e| format!("{name}: {e}"))?;
                ensure!(s.at(0) == a && s.at(16) == b, "{name}: scale endpoints wrong");
                for k in 0..16 {
                    ensure!(
                        rb_oracle[s.at(k)][s.at(k + 1)],
                        "{name}: scale step {k} not rather below"
                    );
                }
                stats[2] += 1;
            }
        }
    }
    stats[0] += 1;
    Ok(())
}

fn criterion_1() -> Outcome {
    let text = fs::read_to_string(workspace_dir().join("frames.lattice")).map_err(|e| e.to_string())?;
    let mut frames = parse_lattices(&text).map_err(|e| e.to_string())?;
    frames.extend([FiniteFrame::sierpinski(), FiniteFrame::chain(5)]);
    frames.extend((1..=5).map(FiniteFrame::boolean));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    frames.extend((0..50).map(|i| random_lattice(&mut rng, i)));
    ensure!(frames.iter().all(|f| f.len() <= 32), "a frame exceeds 32 elements");
    let mut stats = [0usize; 3];
    for f in &frames {
        check_frame(f, &mut stats)?;
    }
    Ok(format!(
        "{} frames, {} pairs matched the scale search, {} scales built",
        stats[0], stats[1], stats[2]
    ))
}

// ---------------------------------------------------------------- 2

/// The convergent sequence `{0, 1, 2, ..., ∞}`: an open is its trace on
/// `0..8`, whether it contains every `n >= 8`, and whether it contains `∞`.
/// Opens containing `∞` must contain a tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SeqOpen {
    low: u8,
    tail: bool,
    inf: bool,
}

impl SeqOpen {
    fn all() -> Vec<SeqOpen> {
        let mut out = Vec::new();
        for low in 0..=255u8 {
            for tail in [false, true] {
                for inf in [false, true] {
                    if !inf || tail {
                        out.push(SeqOpen { low, tail, inf });
                    }
                }
            }
        }
        out
    }

    fn leq(self, o: SeqOpen) -> bool {
        self.low & !o.low == 0 && (!self.tail || o.tail) && (!self.inf || o.inf)
    }

    fn join(self, o: SeqOpen) -> SeqOpen {
        SeqOpen {
            low: self.low | o.low,
            tail: self.tail || o.tail,
            inf: self.inf || o.inf,
        }
    }

    fn meet(self, o: SeqOpen) -> SeqOpen {
        SeqOpen {
            low: self.low & o.low,
            tail: self.tail && o.tail,
            inf: self.inf && o.inf,
        }
    }
}

fn nat_grid_opens() -> Vec<NatSet> {
    let mut out = Vec::new();
    for mask in 0u32..256 {
        let pts: Vec<u64> = (0..8).filter(|i| mask >> i & 1 == 1).collect();
        out.push(NatSet::finite(pts.clone()));
        let missing: Vec<u64> = (0..8).filter(|i| mask >> i & 1 == 0).collect();
        out.push(NatSet::cofinite(missing));
    }
    out
}

fn to_seq(a: &InfOpen<NatSet>) -> SeqOpen {
    let mut low = 0u8;
    for i in 0..8 {
        if a.u.contains(i) {
            low |= 1 << i;
        }
    }
    SeqOpen {
        low,
        tail: a.u.contains(8) && a.u.is_cofinite(),
        inf: a.p,
    }
}

fn check_nat_model() -> Result<usize, String> {
    let xi = Compactification::unchecked(Discrete::naturals());
    let mut opens = Vec::new();
    for u in nat_grid_opens() {
        for p in [false, true] {
            let a = InfOpen::new(u.clone(), p);
            if xi.is_legal(&a) {
                opens.push(a);
            }
        }
    }
    let images: Vec<SeqOpen> = opens.iter().map(to_seq).collect();
    let distinct: BTreeSet<SeqOpen> = images.iter().copied().collect();
    let model: BTreeSet<SeqOpen> = SeqOpen::all().into_iter().collect();
    ensure!(
        distinct.len() == images.len(),
        "two opens of nat.inf have the same image"
    );
    ensure!(
        distinct == model,
        "image of nat.inf is not the convergent-sequence frame ({} vs {})",
        distinct.len(),
        model.len()
    );
    for (a, sa) in opens.iter().zip(&images) {
        for (b, sb) in opens.iter().zip(&images) {
            ensure!(xi.leq(a, b) == sa.leq(*sb), "order differs at {a}, {b}");
        }
    }
    // joins and meets on a sparse sample of pairs
    for (i, (a, sa)) in opens.iter().zip(&images).enumerate().step_by(7) {
        for (b, sb) in opens.iter().zip(&images).skip(i % 5).step_by(11) {
            let j = xi.inf_join(a, b).map_err(|e| e.to_string())?;
            let m = xi.inf_meet(a, b).map_err(|e| e.to_string())?;
            ensure!(to_seq(&j) == sa.join(*sb), "join differs at {a}, {b}");
            ensure!(to_seq(&m) == sa.meet(*sb), "meet differs at {a}, {b}");
        }
    }
    Ok(opens.len())
}

fn compact_regular<L: Locale>(x: L, grid: &Grid) -> Result<(usize, usize), String> {
    let name = x.name().to_string();
    let xi = compactify(x, grid).map_err(|e| format!("{name}: {e}"))?;
    let families = sample_cover_families(&xi, grid);
    for fam in &families {
        let v = check_compact_infty(&xi, |i| fam.get(i).cloned(), fam.len());
        ensure!(v.holds, "{name}: compactness check failed: {:?}", v.reason);
    }
    let regular = check_regular_all(&xi, grid)
        .map_err(|v| format!("{name}: regularity failed at {} ({:?})", v.open, v.reason))?;
    Ok((families.len(), regular))
}

fn criterion_2() -> Outcome {
    let grid = Grid::default();
    for n in 1..=4u64 {
        let xi = compactify(Discrete::finite(n), &grid).map_err(|e| e.to_string())?;
        let frame = xi.to_finite_frame().map_err(|e| e.to_string())?;
        ensure!(
            frame.len() == 1 << (n + 1),
            "disc{n}: {} opens, expected {}",
            frame.len(),
            1 << (n + 1)
        );
        // compare with the discrete space on n + 1 points, ∞ as bit n
        let opens = xi.all_opens().ok_or("finite compactification without all_opens")?;
        let mask =
            |a: &InfOpen<NatSet>| (0..n).filter(|&i| a.u.contains(i)).fold(0u32, |m, i| m | 1 << i) | (a.p as u32) << n;
        let masks: BTreeSet<u32> = opens.iter().map(mask).collect();
        ensure!(masks.len() == 1 << (n + 1), "disc{n}: opens do not biject with subsets");
        for a in &opens {
            for b in &opens {
                ensure!(
                    xi.leq(a, b) == (mask(a) & !mask(b) == 0),
                    "disc{n}: order differs at {a}, {b}"
                );
            }
        }
    }
    let seq = check_nat_model()?;
    let mut checked = Vec::new();
    for n in 1..=4 {
        compact_regular(Discrete::finite(n), &grid)?;
    }
    checked.push(compact_regular(Discrete::naturals(), &grid)?);
    checked.push(compact_regular(Interval::unit(), &grid)?);
    Ok(format!(
        "2^(n+1) opens for n=1..4, nat.inf matches the sequence model on {seq} opens, compact/regular PASS (nat {:?}, unit {:?})",
        checked[0], checked[1]
    ))
}

// ---------------------------------------------------------------- 3

fn random_natset(rng: &mut ChaCha8Rng) -> NatSet {
    let pts = |rng: &mut ChaCha8Rng| -> Vec<u64> { (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..16)).collect() };
    match rng.gen_range(0..4) {
        0 => NatSet::finite(pts(rng)),
        1 => NatSet::cofinite(pts(rng)),
        2 => {
            let period = rng.gen_range(2..5);
            let residues: Vec<u64> = (0..period).filter(|_| rng.gen_bool(0.5)).collect();
            NatSet::periodic(period, residues).union(&NatSet::finite(pts(rng)))
        }
        _ => NatSet::cofinite(pts(rng)).difference(&NatSet::finite(pts(rng))),
    }
}

fn random_intervals(rng: &mut ChaCha8Rng) -> IntervalSet {
    let mut out = IntervalSet::empty();
    if rng.gen_bool(0.5) {
        let a = rng.gen_range(1..16);
        let b = rng.gen_range(a..16);
        out = IntervalSet::from_intervals([(Q::zero(), q(a, 16)), (q(b, 16), Q::one())]);
    }
    for _ in 0..rng.gen_range(0..4) {
        let a = rng.gen_range(0..16);
        let b = rng.gen_range(a + 1..=16);
        out = out.union(&IntervalSet::interval(q(a, 16), q(b, 16)));
    }
    out
}

/// ∃ finite `W ⊆ {0..k}` (inside the universe) with `U ∪ W` everything.
fn nat_omega_search(universe: &NatSet, u: &NatSet) -> Option<NatSet> {
    (0..=24u64)
        .map(|k| NatSet::range(k).intersection(universe))
        .find(|w| universe.is_subset(&u.union(w)))
}

/// ∃ `W = (a, b)` with `0 < a < b < 1` on the grid `1/32` and `U ∪ W = (0, 1)`.
fn unit_omega_search(u: &IntervalSet) -> Option<IntervalSet> {
    let unit = IntervalSet::unit();
    for a in 1..32 {
        for b in a + 1..32 {
            let w = IntervalSet::interval(q(a, 32), q(b, 32));
            if u.union(&w) == unit {
                return Some(w);
            }
        }
    }
    None
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut agree = 0;
    let instances = [
        Discrete::finite(4),
        Discrete::naturals(),
        Discrete::new("evens", NatSet::evens()),
    ];
    for x in &instances {
        for _ in 0..500 {
            let u = random_natset(&mut rng).intersection(x.universe());
            let decided = x.omega(&u);
            let searched = nat_omega_search(x.universe(), &u);
            ensure!(
                decided.is_some() == searched.is_some(),
                "{}: omega({u}) = {decided:?} but the search found {searched:?}",
                x.name()
            );
            if let Some(w) = decided {
                ensure!(
                    w.is_finite() && x.universe().is_subset(&u.union(&w)),
                    "{}: bad witness {w} for {u}",
                    x.name()
                );
            }
            agree += 1;
        }
    }
    let unit = Interval::unit();
    let mut hits = 0;
    for _ in 0..500 {
        let u = random_intervals(&mut rng);
        let decided = unit.omega(&u);
        let searched = unit_omega_search(&u);
        ensure!(
            decided.is_some() == searched.is_some(),
            "unit: omega({u}) = {decided:?} but the search found {searched:?}"
        );
        if let Some(w) = decided {
            let closure = w.closure_components();
            let inside = closure.iter().all(|(a, b)| a.is_positive() && *b < Q::one());
            ensure!(
                inside && u.union(&w) == IntervalSet::unit(),
                "unit: bad witness {w} for {u}"
            );
            hits += 1;
        }
        agree += 1;
    }
    Ok(format!(
        "{agree}/{agree} sampled opens agree over 4 instances ({hits} interval opens with ω)"
    ))
}

// ---------------------------------------------------------------- 4

fn nat_maps() -> Vec<PartialMap<Discrete, Discrete>> {
    let nat = Discrete::naturals();
    let evens = Discrete::new("evens", NatSet::evens());
    let all = NatSet::all();
    let m = |dom: &NatSet, a, b, d, label| {
        PartialMap::from_index_map(
            nat.clone(),
            nat.clone(),
            IndexMap::affine(dom.clone(), a, b, d).unwrap(),
            label,
        )
        .unwrap()
    };
    vec![
        m(&all, 1, 0, 1, "identity"),
        m(&all, 1, 1, 1, "shift"),
        m(&all, 1, 3, 1, "shift3"),
        m(&all, 2, 0, 1, "double"),
        m(&NatSet::evens(), 1, 0, 2, "halve"),
        m(&NatSet::cofinite([0, 1]), 1, -2, 1, "unshift2"),
        PartialMap::from_index_map(evens, nat.clone(), IndexMap::identity(), "even-inclusion").unwrap(),
    ]
}

fn finite_maps() -> Vec<PartialMap<Discrete, Discrete>> {
    let (d4, d2) = (Discrete::finite(4), Discrete::finite(2));
    vec![
        PartialMap::from_index_map(
            d4.clone(),
            d2.clone(),
            IndexMap::table([(0, 0), (1, 1), (2, 0), (3, 1)]),
            "fold",
        )
        .unwrap(),
        PartialMap::from_index_map(d4, d2, IndexMap::table([(0, 0), (2, 1)]), "partial-fold").unwrap(),
    ]
}

/// Interval maps `t ↦ s t + o` with their slope and offset.
fn interval_maps() -> Vec<(PartialMap<Interval, Interval>, Q, Q)> {
    let unit = Interval::unit;
    let iv = |a, b, c, d| IntervalSet::interval(q(a, b), q(c, d));
    [
        (IntervalSet::unit(), qi(1), qi(0), "id-unit"),
        (IntervalSet::unit(), qi(-1), qi(1), "flip"),
        (iv(1, 2, 1, 1), qi(2), qi(-1), "stretch-right"),
        (iv(0, 1, 1, 2), qi(2), qi(0), "stretch-left"),
        (iv(1, 4, 3, 4), qi(2), q(-1, 2), "stretch-middle"),
        (iv(1, 4, 1, 2), qi(-4), qi(2), "flip-quarter"),
    ]
    .into_iter()
    .map(|(dom, s, o, label)| {
        (
            PartialMap::affine(unit(), unit(), dom, s.clone(), o.clone(), label).unwrap(),
            s,
            o,
        )
    })
    .collect()
}

/// Points sent outside the domain go to ∞.
fn discrete_point_oracle(
    f: &PartialMap<Discrete, Discrete>,
    g: &InfOpen<NatSet>,
    a: &InfOpen<NatSet>,
    sigma: impl Fn(u64) -> Option<u64>,
) -> Result<(), String> {
    for n in 0..40 {
        if !f.source.universe().contains(n) {
            continue;
        }
        let expected = if f.dom.contains(n) {
            sigma(n).is_some_and(|m| g.u.contains(m))
        } else {
            g.p
        };
        ensure!(
            a.u.contains(n) == expected,
            "{}: point {n} misplaced in the pullback of {g}",
            f.label
        );
    }
    ensure!(a.p == g.p, "{}: ∞ not fixed", f.label);
    Ok(())
}

fn round_trip<X, Y>(f: &PartialMap<X, Y>, grid: &Grid) -> Result<usize, String>
where
    X: pointfree::locale::HasSubspaces,
    Y: Locale,
{
    let g = extend_to_infty(f, grid).map_err(|e| format!("{}: {e}", f.label))?;
    let back = restrict_from_infty(&g, grid).map_err(|e| format!("{}: {e}", f.label))?;
    let target_opens = f.target.sample_opens(grid);
    ensure!(
        f.agrees_with(&back, &target_opens),
        "{}: restrict after extend is not the identity",
        f.label
    );
    let again = extend_to_infty(&back, grid).map_err(|e| format!("{}: {e}", f.label))?;
    let inf_opens = g.target.sample_opens(grid);
    ensure!(
        g.agrees_with(&again, &inf_opens),
        "{}: extend after restrict is not the identity",
        f.label
    );
    Ok(target_opens.len() + inf_opens.len())
}

fn criterion_4() -> Outcome {
    let grid = Grid::small();
    let mut maps = 0;
    let mut opens = 0;
    let sigmas: Vec<Box<dyn Fn(u64) -> Option<u64>>> = vec![
        Box::new(Some),
        Box::new(|n| Some(n + 1)),
        Box::new(|n| Some(n + 3)),
        Box::new(|n| Some(2 * n)),
        Box::new(|n| (n % 2 == 0).then_some(n / 2)),
        Box::new(|n| n.checked_sub(2)),
        Box::new(Some),
    ];
    for (f, sigma) in nat_maps().iter().zip(&sigmas) {
        opens += round_trip(f, &grid)?;
        let g = extend_to_infty(f, &grid).map_err(|e| e.to_string())?;
        for b in g.target.sample_opens(&grid) {
            let a = g.pullback(&b).map_err(|e| e.to_string())?;
            discrete_point_oracle(f, &b, &a, sigma)?;
        }
        maps += 1;
    }
    for f in finite_maps() {
        opens += round_trip(&f, &grid)?;
        maps += 1;
    }
    for (f, slope, offset) in interval_maps() {
        opens += round_trip(&f, &grid)?;
        let g = extend_to_infty(&f, &grid).map_err(|e| e.to_string())?;
        for b in g.target.sample_opens(&grid) {
            let a = g.pullback(&b).map_err(|e| e.to_string())?;
            ensure!(a.p == b.p, "{}: ∞ not fixed", f.label);
            for k in 1..64 {
                let t = q(k, 64);
                let expected = if f.dom.contains_point(&t) {
                    b.u.contains_point(&(&slope * &t + &offset))
                } else {
                    b.p
                };
                ensure!(
                    a.u.contains_point(&t) == expected,
                    "{}: point {t} misplaced in the pullback of {b}",
                    f.label
                );
            }
        }
        maps += 1;
    }

    let mut triples = 0;
    let nm = nat_maps();
    let nat_opens = Discrete::naturals().sample_opens(&grid);
    for f in &nm[..6] {
        for g in &nm[..6] {
            for h in &nm[..6] {
                let left = f.then(g).then(h);
                let right = f.then(&g.then(h));
                ensure!(
                    left.agrees_with(&right, &nat_opens),
                    "({};{});{} differs from {};({};{})",
                    f.label,
                    g.label,
                    h.label,
                    f.label,
                    g.label,
                    h.label
                );
                triples += 1;
            }
        }
    }
    let im: Vec<_> = interval_maps().into_iter().map(|(f, _, _)| f).collect();
    let unit_opens = Interval::unit().sample_opens(&grid);
    for f in &im {
        for g in &im {
            for h in &im {
                let left = f.then(g).then(h);
                let right = f.then(&g.then(h));
                ensure!(
                    left.agrees_with(&right, &unit_opens),
                    "({};{});{} differs from {};({};{})",
                    f.label,
                    g.label,
                    h.label,
                    f.label,
                    g.label,
                    h.label
                );
                triples += 1;
            }
        }
    }
    Ok(format!(
        "{maps} maps round-trip on {opens} opens, {triples} composition triples associative"
    ))
}

// ---------------------------------------------------------------- 5

fn random_dyadic(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-16i64..=16).into(), (1i64 << rng.gen_range(0..=4)).into())
}

fn random_complex(rng: &mut ChaCha8Rng) -> ComplexQ {
    if rng.gen_bool(0.5) {
        ComplexQ::real(random_dyadic(rng))
    } else {
        ComplexQ::new(random_dyadic(rng), random_dyadic(rng))
    }
}

fn random_unit_element(rng: &mut ChaCha8Rng, a: &DeskAlgebra) -> UnitElement {
    let pairs: Vec<(u64, ComplexQ)> = match a.dim() {
        Some(n) => (0..n).map(|i| (i, random_complex(rng))).collect(),
        None => (0..rng.gen_range(0..=4))
            .map(|_| (rng.gen_range(0..10), random_complex(rng)))
            .collect(),
    };
    UnitElement::new(AlgElement::from_pairs(pairs), random_complex(rng))
}

/// `‖(c, z)‖²` as the largest `|f|²` of the function `c + z` on the
/// one-point compactification of the index set.
fn plus_norm_sqr_oracle(a: &DeskAlgebra, x: &UnitElement) -> Q {
    let mut best = x.z.norm_sqr();
    let indices: Vec<u64> = match a.dim() {
        Some(n) => (0..n).collect(),
        None => x.c.support(),
    };
    for j in indices {
        best = best.max((&x.c.coord(j) + &x.z).norm_sqr());
    }
    best
}

fn brackets_sqrt(x: &UpperReal, s: &Q, prec: &Q) -> bool {
    let (lo, hi) = x.bracket(prec);
    (lo.is_negative() || &lo * &lo <= *s) && *s < &hi * &hi
}

fn brackets(x: &UpperReal, v: &Q, prec: &Q) -> bool {
    let (lo, hi) = x.bracket(prec);
    lo <= *v && *v < hi
}

fn criterion_5() -> Outcome {
    let prec = pow2_neg(16);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let algebras = [
        DeskAlgebra::findim(1),
        DeskAlgebra::findim(2),
        DeskAlgebra::findim(3),
        DeskAlgebra::finsupp(),
    ];
    let mut count = 0;
    for a in &algebras {
        let plus = Unitization::unchecked(a.clone());
        for _ in 0..130 {
            let x = random_unit_element(&mut rng, a);
            let n = plus.plus_norm(&x);
            let s = plus_norm_sqr_oracle(a, &x);
            ensure!(
                brackets_sqrt(&n, &s, &prec),
                "{}: norm of {x} misses the closed form",
                plus.name()
            );
            let xx = plus.mul(&plus.star(&x), &x);
            let nxx = plus.plus_norm(&xx);
            ensure!(brackets(&nxx, &s, &prec), "{}: ‖x*x‖ of {x} misses ‖x‖²", plus.name());
            ensure!(
                agree_within(&nxx, &n.mul_nonneg(&n).map_err(|e| e.to_string())?, &prec),
                "{}: C*-identity fails at {x}",
                plus.name()
            );
            let split = UpperReal::modulus(&x.z).add(&a.norm(&x.c));
            ensure!(
                certify_le(&split, &n.scale(&qi(3)), &prec),
                "{}: |z| + ‖c‖ > 3‖x‖ at {x}",
                plus.name()
            );
            count += 1;
        }
    }
    let c1 = Unitization::unchecked(DeskAlgebra::findim(1));
    let x = UnitElement::new(AlgElement::real(&[qi(1)]), ComplexQ::real(qi(-1)));
    let plus = c1.plus_norm(&x);
    let naive = c1.naive_norm(&x);
    ensure!(
        brackets(&plus, &qi(1), &prec),
        "plus norm of (1,-1) is not 1: {:?}",
        plus.bracket(&prec)
    );
    ensure!(
        brackets(&naive, &Q::zero(), &prec),
        "naive norm of (1,-1) is not 0: {:?}",
        naive.bracket(&prec)
    );
    Ok(format!(
        "{count} elements pass the C*-identity and norm equivalence; ‖(1,-1)‖ = 1, naive = 0"
    ))
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    for n in 1..=3u64 {
        let iso = functions_on_compactification(n);
        let a = DeskAlgebra::findim(n);
        let elements: Vec<UnitElement> = (0..120).map(|_| random_unit_element(&mut rng, &a)).collect();
        iso.verify(&elements, 16).map_err(|e| format!("n = {n}: {e}"))?;
        for x in &elements {
            let f = iso.forward(x);
            let sup = (0..=n).map(|j| f.coord(j).norm_sqr()).max().unwrap_or_default();
            ensure!(
                sup == plus_norm_sqr_oracle(&a, x),
                "n = {n}: sup of {f} differs from the norm of {x}"
            );
            ensure!(f.coord(n) == x.z, "n = {n}: value at ∞ of {f} is not the scalar of {x}");
        }
        count += elements.len();
    }
    Ok(format!("{count} elements, isometric and multiplicative for n = 1..3"))
}

// ---------------------------------------------------------------- 7

fn subset(mask: u32, n: u64) -> NatSet {
    NatSet::finite((0..n).filter(|i| mask >> i & 1 == 1))
}

fn criterion_7() -> Outcome {
    let mut cases = 0;
    for n in 1..=4u64 {
        let a = DeskAlgebra::findim(n);
        ensure!(
            characters(&a, 64).len() == n as usize,
            "ℂ^{n}: wrong number of characters"
        );
        let opens = spec(&a).all_opens().ok_or("finite spectrum without all_opens")?;
        ensure!(opens.len() == 1 << n, "ℂ^{n}: spectrum has {} opens", opens.len());
        for m in 0..1u32 << n {
            let s = subset(m, n);
            let ideal = ClosedIdealDesc::new(s.clone());
            // the ideal generated by e_i for i in s is nonzero exactly at the points of s
            let zero_set: Vec<u64> = (0..n)
                .filter(|&j| {
                    s.finite_members()
                        .unwrap()
                        .iter()
                        .any(|&i| !AlgElement::basis(i).coord(j).is_zero())
                })
                .collect();
            let u = ideal_to_open(&a, &ideal);
            ensure!(u == NatSet::finite(zero_set), "ℂ^{n}: open of {ideal} is {u}");
            ensure!(
                open_to_ideal(&a, &u) == ideal,
                "ℂ^{n}: ideal round trip fails at {ideal}"
            );
            ensure!(
                ideal_to_open(&a, &open_to_ideal(&a, &s)) == s,
                "ℂ^{n}: open round trip fails at {s}"
            );
            for m2 in 0..1u32 << n {
                let t = subset(m2, n);
                let j = ClosedIdealDesc::new(t.clone());
                ensure!(
                    ideal.leq(&j) == ideal_to_open(&a, &ideal).is_subset(&ideal_to_open(&a, &j)),
                    "ℂ^{n}: order not preserved"
                );
                ensure!(
                    s.is_subset(&t) == open_to_ideal(&a, &s).leq(&open_to_ideal(&a, &t)),
                    "ℂ^{n}: order not reflected"
                );
            }
            cases += 1;
        }
    }

    let fs = DeskAlgebra::finsupp();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let s = random_natset(&mut rng);
        let ideal = ClosedIdealDesc::new(s.clone());
        ensure!(
            open_to_ideal(&fs, &ideal_to_open(&fs, &ideal)) == ideal,
            "finsupp: round trip fails at {ideal}"
        );
        ensure!(
            ideal_to_open(&fs, &open_to_ideal(&fs, &s)) == s,
            "finsupp: open round trip fails at {s}"
        );
    }

    let grid = Grid::small();
    let mut pairs = 0;
    let mut morphisms = 0;
    for _ in 0..40 {
        let m = rng.gen_range(1..=4u64);
        let k = rng.gen_range(1..=4u64);
        let mut table = Vec::new();
        for j in 0..k {
            if rng.gen_bool(0.8) {
                table.push((j, rng.gen_range(0..m)));
            }
        }
        let f = IndexMorphism::new(
            DeskAlgebra::findim(m),
            DeskAlgebra::findim(k),
            IndexMap::table(table.clone()),
        )
        .map_err(|e| e.to_string())?;
        let verdict = nondegenerate_iff_proper(&f, &grid);
        ensure!(
            verdict.agree(),
            "{}: nondegenerate {} but total {} proper {}",
            f.sigma,
            verdict.nondegenerate,
            verdict.total,
            verdict.proper
        );
        ensure!(
            verdict.nondegenerate == (table.len() as u64 == k),
            "{}: nondegeneracy misjudged",
            f.sigma
        );
        morphisms += 1;
        let s = subset(rng.gen_range(0..1u32 << m), m);
        let ideal = ClosedIdealDesc::new(s.clone());
        let oracle = NatSet::finite(table.iter().filter(|(_, i)| s.contains(*i)).map(|(j, _)| *j));
        let direct = pushforward_ideal(&f, &ideal);
        ensure!(
            direct.supp == oracle,
            "{}: pushforward of {ideal} is {direct}, expected supp={oracle}",
            f.sigma
        );
        ensure!(
            pushforward_ideal_via_spectra(&f, &ideal) == direct,
            "{}: spectra route differs at {ideal}",
            f.sigma
        );
        pairs += 1;
    }
    for (a, b, d) in [(1, 0, 1), (1, 1, 1), (2, 0, 1), (1, -3, 1)] {
        let dom = if b < 0 {
            NatSet::cofinite(0..(-b) as u64)
        } else {
            NatSet::all()
        };
        let sigma = IndexMap::affine(dom, a, b, d).map_err(|e| e.to_string())?;
        let f = IndexMorphism::new(fs.clone(), fs.clone(), sigma.clone()).map_err(|e| e.to_string())?;
        let verdict = nondegenerate_iff_proper(&f, &grid);
        ensure!(verdict.agree(), "{sigma}: nondegenerate and proper disagree");
        morphisms += 1;
        for _ in 0..4 {
            let s = NatSet::finite((0..3).map(|_| rng.gen_range(0..12)));
            let ideal = ClosedIdealDesc::new(s.clone());
            let oracle = sigma.preimage(&s);
            let direct = pushforward_ideal(&f, &ideal);
            ensure!(direct.supp == oracle, "{sigma}: pushforward of {ideal} is {direct}");
            ensure!(
                pushforward_ideal_via_spectra(&f, &ideal) == direct,
                "{sigma}: spectra route differs at {ideal}"
            );
            pairs += 1;
        }
    }
    Ok(format!(
        "{cases} exhaustive cases for n <= 4, {pairs} pushforward pairs, {morphisms} morphisms agree"
    ))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let eps = pow2_neg(20);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut elements = vec![
        (
            DeskAlgebra::finsupp(),
            AlgElement::from_pairs([(0, ComplexQ::real(q(1, 2)))]),
        ),
        (DeskAlgebra::findim(2), AlgElement::real(&[q(3, 10), q(7, 10)])),
        (DeskAlgebra::finsupp(), AlgElement::zero()),
    ];
    while elements.len() < 200 {
        let a = if rng.gen_bool(0.5) {
            DeskAlgebra::findim(rng.gen_range(1..=4))
        } else {
            DeskAlgebra::finsupp()
        };
        let x = random_unit_element(&mut rng, &a).c;
        let scaled = x.scale(&ComplexQ::real(q(rng.gen_range(1..20), rng.gen_range(1..20))));
        elements.push((a, scaled));
    }
    let mut witnessed = 0;
    for (a, h) in &elements {
        let b = norm_from_positivity(a, h, &eps).map_err(|e| e.to_string())?;
        let s = h.coords().map(|(_, v)| v.norm_sqr()).max().unwrap_or_default();
        ensure!(&b.hi - &b.lo <= eps, "{h}: bracket wider than eps");
        ensure!(s < &b.hi * &b.hi, "{h}: upper end {} not above the norm", b.hi);
        if b.lo.is_negative() {
            ensure!(b.witness.is_none(), "{h}: negative lower end with a witness");
            ensure!(s < &eps * &eps, "{h}: negative lower end for a norm above eps");
        } else {
            let j = b
                .witness
                .ok_or_else(|| format!("{h}: lower end {} without a witness", b.lo))?;
            ensure!(
                h.coord(j).norm_sqr() > &b.lo * &b.lo,
                "{h}: witness {j} does not exceed {}",
                b.lo
            );
            witnessed += 1;
        }
    }
    Ok(format!(
        "{} elements bracketed within 2^-20, {witnessed} lower ends witnessed",
        elements.len()
    ))
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let k = 20;
    let contracts = [
        (UpperReal::zero(), qi(1), qi(1)),
        (UpperReal::rational(qi(1)), qi(1), q(1, 2)),
        (UpperReal::rational(q(1, 2)), qi(1), qi(1)),
        (UpperReal::rational(q(3, 4)), q(3, 4), q(1, 8)),
        (UpperReal::sqrt(qi(2)), q(3, 2), q(1, 4)),
    ];
    for (x, qq, e) in &contracts {
        let cert =
            lemma1_refine(x, qq, e, k).map_err(|err| format!("valid contract (q={qq}, e={e}) rejected: {err}"))?;
        ensure!(cert.replay(), "certificate for q={qq} does not replay");
        let chain = cert.chain();
        ensure!(chain.len() == k as usize + 1, "chain has {} bounds", chain.len());
        for (i, b) in chain.iter().enumerate() {
            let expected = qq + e * pow2_neg(i as u32);
            ensure!(*b == expected, "bound {i} is {b}, expected {expected}");
        }
        ensure!(chain.windows(2).all(|w| w[1] < w[0]), "chain not decreasing");
        ensure!(cert.bound() == qq + e * pow2_neg(k), "final bound is {}", cert.bound());
        ensure!(x.lt(&cert.bound()), "x not below the final bound");
    }
    for e in [qi(1), qi(2)] {
        let r = lemma1_refine(&UpperReal::rational(qi(3)), &qi(2), &e, k);
        ensure!(r.is_err(), "x = 3, q = 2, e = {e} accepted");
    }
    Ok(format!(
        "{} contracts refined to q + e·2^-20, x = 3, q = 2 rejected",
        contracts.len()
    ))
}

// ---------------------------------------------------------------- 10

const GOLDEN: &[(&str, &[&str])] = &[
    ("list", &["list"]),
    ("check_sierpinski_regular", &["check", "sierpinski", "regular"]),
    ("check_bool3_compact", &["check", "bool3", "compact"]),
    ("check_nat_overt", &["check", "nat", "overt"]),
    ("check_unit_locally_compact", &["check", "unit", "locally_compact"]),
    ("check_unknown", &["check", "nosuch", "compact"]),
    ("compactify_disc4", &["compactify", "disc4"]),
    ("compactify_nat", &["compactify", "nat"]),
    ("compactify_sierpinski", &["compactify", "sierpinski"]),
    ("dual_c3", &["dual", "c3"]),
    ("dual_c1", &["dual", "c1"]),
    ("dual_finsupp_ideal", &["dual", "finsupp-nat", "--ideal", "supp={0,2}"]),
    ("dual_c3_machine", &["--machine", "dual", "c3"]),
    ("norm_c3", &["norm", "c3", "0:1,1:-3,2:1/2"]),
    ("unitize_c1", &["unitize", "c1", "0:1", "--scalar", "-1"]),
    ("map_check_halve", &["map-check", "halve"]),
    ("map_check_collapse", &["map-check", "collapse"]),
    ("map_check_stretch", &["map-check", "stretch"]),
    ("export_sierpinski", &["export", "sierpinski"]),
    ("export_bool2_inf", &["export", "bool2.inf"]),
    ("export_nat", &["export", "nat"]),
];

fn golden_text(args: &[&str], out: &cli::Outcome) -> String {
    format!(
        "$ pointfree {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        args.join(" "),
        out.code,
        out.stdout,
        out.stderr
    )
}

fn run_in_process(args: &[&str]) -> cli::Outcome {
    let ws = workspace_dir();
    let mut full = vec![
        "pointfree".to_string(),
        "--workspace".to_string(),
        ws.display().to_string(),
    ];
    full.extend(args.iter().map(|a| a.to_string()));
    cli::run(full)
}

fn criterion_10() -> Outcome {
    let update = std::env::var_os("POINTFREE_UPDATE_GOLDEN").is_some();
    let dir = golden_dir();
    if update {
        fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    }
    let mut codes = BTreeSet::new();
    for (name, args) in GOLDEN {
        let first = golden_text(args, &run_in_process(args));
        let second = golden_text(args, &run_in_process(args));
        ensure!(first == second, "{name}: two runs differ");
        let path = dir.join(format!("{name}.txt"));
        if update {
            fs::write(&path, &first).map_err(|e| e.to_string())?;
        }
        let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(first == expected, "{name}: report differs from {}", path.display());
        let code = run_in_process(args).code;
        codes.insert(code);
    }
    ensure!(
        codes == BTreeSet::from([0, 1, 2]),
        "golden set does not cover exit codes 0/1/2: {codes:?}"
    );

    let bin = env!("CARGO_BIN_EXE_pointfree");
    for (args, code) in [
        (&["check", "bool3", "compact"][..], 0),
        (&["check", "sierpinski", "regular"][..], 1),
        (&["compactify", "sierpinski"][..], 1),
        (&["export", "nat"][..], 2),
        (&["dual", "nosuch"][..], 2),
        (&["frobnicate"][..], 2),
        (&["--eps", "0", "norm", "c1", "0:1"][..], 2),
    ] {
        let out = Command::new(bin)
            .arg("--workspace")
            .arg(workspace_dir())
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.code() == Some(code),
            "{args:?}: exit {:?}, expected {code}",
            out.status.code()
        );
        if code == 2 {
            ensure!(!out.stderr.is_empty(), "{args:?}: no message on stderr");
        }
    }
    Ok(format!(
        "{} golden reports stable, exit codes 0/1/2 honored",
        GOLDEN.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("frame and relation suite", criterion_1),
        ("compactification correctness", criterion_2),
        ("omega against the witness search", criterion_3),
        ("proper-map bijection", criterion_4),
        ("unitization norm", criterion_5),
        ("C(X∞) ≅ C₀(X)⁺", criterion_6),
        ("duality tables", criterion_7),
        ("norm from positivity", criterion_8),
        ("lemma1_refine", criterion_9),
        ("CLI golden files", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    let start = Instant::now();
    for (i, (label, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let t = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n:>2} PASS  {label}: {detail} ({secs:.1}s)"),
            Err(reason) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {label}: {reason} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {failed} failed, {:.1}s", start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
