use std::fs;
use std::path::Path;

use num_traits::Signed;

use crate::compactification::{
    check_compact_infty, check_regular_all, compactify, extend_to_infty, is_proper, restrict_from_infty,
    sample_cover_families, Compactification, CompactifyError, PartialMap,
};
use crate::cstar::{chi_infty, unitize, AlgebraKind, DeskAlgebra, StarAlgebra, UnitElement, Unitization};
use crate::finite_frames::{FiniteFrame, Property};
use crate::locale::{spot_check, Grid, HasSubspaces, Locale, LocalePresentation};
use crate::rational::Q;
use crate::spectrum::{
    characters, check_spec_infty_iso, ideal_to_open, norm_from_positivity, open_to_ideal, spec, spec_infty,
    ClosedIdealDesc,
};

use super::report::Report;
use super::workspace::{AnyMap, Space};
use super::CliError;

/// Dispatches a generic body over the concrete presentation type.
macro_rules! with_locale {
    ($p:expr, $x:ident => $body:expr) => {
        match $p {
            LocalePresentation::Finite($x) => $body,
            LocalePresentation::Discrete($x) => $body,
            LocalePresentation::Interval($x) => $body,
        }
    };
}

/// Runs `$body` with `$x` bound to the plain locale or, for `X.inf`, to
/// the unchecked compactification.
/// Runs `$body` on the named space; a `.inf` whose base fails the
/// compactification precondition is reported and yields `false`.
macro_rules! with_space {
    ($s:expr, $grid:expr, $r:expr, $x:ident => $body:expr) => {
        match $s {
            Space::Plain(p) => with_locale!(p, $x => $body),
            Space::Inf(p) => with_locale!(p, base => {
                let name = format!("{}.inf", base.name());
                match precondition(base, $grid, &name, $r) {
                    Some($x) => $body,
                    None => false,
                }
            }),
        }
    };
}

fn precondition<L: Locale>(base: L, grid: &Grid, name: &str, r: &mut Report) -> Option<Compactification<L>> {
    match compactify(base, grid) {
        Ok(xi) => Some(xi),
        Err(e) => {
            r.field("target", name);
            match e {
                CompactifyError::Precondition { property, open, .. } => {
                    r.field("precondition", property);
                    r.field("counterexample", format!("V = {open}"));
                }
                e => {
                    r.field("error", e);
                }
            }
            None
        }
    }
}

/// A property accepted by `check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckProperty {
    Frame(Property),
    Overt,
}

impl std::str::FromStr for CheckProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "overt" {
            return Ok(CheckProperty::Overt);
        }
        s.parse::<Property>().map(CheckProperty::Frame).map_err(|_| {
            format!("unknown property {s:?}; expected compact, regular, completely_regular, locally_compact or overt")
        })
    }
}

fn samples_of<L: Locale>(x: &L, grid: &Grid) -> Vec<L::Open> {
    x.all_opens().unwrap_or_else(|| x.sample_opens(grid))
}

fn braces(items: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(", "))
}

fn check_generic<L: Locale>(x: &L, property: CheckProperty, grid: &Grid, r: &mut Report) -> bool {
    let samples = samples_of(x, grid);
    r.field("samples", samples.len());
    match property {
        CheckProperty::Frame(p) => {
            let v = spot_check(x, p, grid);
            if let Some(open) = &v.open {
                r.field("counterexample", format!("V = {}", x.show(open)));
                r.field("related", braces(v.related.iter().map(|o| x.show(o))));
                r.field("join", x.show(&x.join_all(&v.related)));
                if let Some(u) = &v.uncovered {
                    r.field("uncovered", x.show(u));
                }
            }
            v.holds
        }
        CheckProperty::Overt => {
            for u in &samples {
                match x.positive(u) {
                    None => {
                        r.field("reason", "no positivity predicate");
                        return false;
                    }
                    Some(p) if p == x.leq(u, &x.bottom()) => {
                        r.field("counterexample", format!("V = {}", x.show(u)));
                        r.field("positive", p);
                        return false;
                    }
                    Some(_) => {}
                }
            }
            true
        }
    }
}

pub fn check(space: Space, property: CheckProperty, grid: &Grid, r: &mut Report) -> bool {
    let holds = with_space!(space, grid, r, x => {
        r.field("target", x.name());
        r.field("property", match property {
            CheckProperty::Frame(p) => p.as_str(),
            CheckProperty::Overt => "overt",
        });
        check_generic(&x, property, grid, r)
    });
    r.verdict("verdict", holds);
    holds
}

fn mark(p: bool) -> &'static str {
    if p {
        "⊤"
    } else {
        "⊥"
    }
}

const SAMPLE_ROWS: usize = 6;

fn compactify_generic<L: Locale>(x: L, grid: &Grid, r: &mut Report) -> bool {
    r.field("target", x.name());
    let xi = match compactify(x.clone(), grid) {
        Ok(xi) => xi,
        Err(CompactifyError::Precondition {
            property, open, detail, ..
        }) => {
            r.field("precondition", property);
            r.field("counterexample", format!("V = {open}"));
            r.field("detail", detail);
            r.verdict("verdict", false);
            return false;
        }
        Err(e) => {
            r.field("error", e);
            r.verdict("verdict", false);
            return false;
        }
    };
    r.field("registered", xi.name());
    match xi.all_opens() {
        Some(all) => {
            r.field("opens", all.len());
        }
        None => {
            let samples = xi.sample_opens(grid);
            r.field("samples", samples.len());
            let pick = |p: bool| samples.iter().filter(move |a| a.p == p).take(SAMPLE_ROWS);
            let rows = pick(false)
                .chain(pick(true))
                .map(|a| {
                    let w = x.omega(&a.u).map_or("-".to_string(), |w| x.show(&w));
                    vec![xi.show(a), x.show(&a.u), mark(a.p).to_string(), w]
                })
                .collect();
            r.table("sample_opens", &["open", "u", "p", "omega_witness"], rows);
        }
    }
    let families = sample_cover_families(&xi, grid);
    let mut compact = true;
    for fam in &families {
        let v = check_compact_infty(&xi, |i| fam.get(i).cloned(), fam.len());
        if !v.holds {
            r.field("compact_counterexample", v.reason.unwrap_or_default());
            compact = false;
            break;
        }
    }
    r.field("cover_families", families.len());
    r.verdict("compact_infty", compact);
    let regular = match check_regular_all(&xi, grid) {
        Ok(n) => {
            r.field("regular_opens", n);
            true
        }
        Err(v) => {
            r.field("regular_counterexample", xi.show(&v.open));
            r.field("regular_reason", v.reason.unwrap_or_default());
            false
        }
    };
    r.verdict("regular_infty", regular);
    r.verdict("verdict", compact && regular);
    compact && regular
}

pub fn compactify_cmd(space: Space, grid: &Grid, r: &mut Report) -> bool {
    let holds = with_space!(space, grid, r, x => compactify_generic(x, grid, r));
    if r.get("verdict").is_none() {
        r.verdict("verdict", holds);
    }
    holds
}

const SAMPLED_TABLE_ROWS: usize = 16;

pub fn dual(a: &DeskAlgebra, ideal: Option<&str>, grid: &Grid, r: &mut Report) -> Result<bool, CliError> {
    r.field("algebra", a.name());
    r.field(
        "kind",
        match a.kind() {
            AlgebraKind::FinDim(n) => format!("findim {n}"),
            AlgebraKind::FinSupp => "finsupp".to_string(),
        },
    );
    let x = spec(a);
    r.field("spec", x.name());
    r.field("points", x.universe());
    let chars = characters(a, 4);
    let mut labels: Vec<String> = chars.iter().map(|c| c.label.clone()).collect();
    if a.dim().is_none() {
        labels.push("...".into());
    }
    r.field("characters", labels.join(" "));
    r.field("spec_infty", spec_infty(a).name());
    let iso = check_spec_infty_iso(a, grid);
    if let Ok(n) = &iso {
        r.field("spec_infty_opens", n);
    }
    r.verdict("spec_infty_iso", iso.is_ok());
    let mut ok = iso.is_ok();
    if let Some(text) = ideal {
        let i = ClosedIdealDesc::parse_for(a, text)?;
        let u = ideal_to_open(a, &i);
        let back = open_to_ideal(a, &u);
        r.field("ideal", &i).field("open", &u).field("back", &back);
        r.verdict("round_trip", back == i);
        ok &= back == i;
    } else {
        let (opens, exhaustive) = match x.all_opens() {
            Some(all) => (all, true),
            None => (x.sample_opens(grid), false),
        };
        let ideals: Vec<ClosedIdealDesc> = opens.iter().map(|u| open_to_ideal(a, u)).collect();
        let mut rows = Vec::new();
        let (mut there, mut back) = (true, true);
        for (u, i) in opens.iter().zip(&ideals) {
            let u2 = ideal_to_open(a, i);
            let i2 = open_to_ideal(a, &u2);
            there &= u2 == *u;
            back &= i2 == *i;
            rows.push(vec![
                i.to_string(),
                u.to_string(),
                mark(u2 == *u && i2 == *i).to_string(),
            ]);
        }
        let mut order = true;
        for (u, i) in opens.iter().zip(&ideals) {
            for (v, j) in opens.iter().zip(&ideals) {
                order &= u.is_subset(v) == i.leq(j);
            }
        }
        r.field("table", if exhaustive { "exhaustive" } else { "sampled" });
        r.field("pairs", rows.len());
        if !exhaustive {
            rows.truncate(SAMPLED_TABLE_ROWS);
        }
        r.table("ideals", &["ideal", "open", "round_trip"], rows);
        r.verdict("open_ideal_open", there);
        r.verdict("ideal_open_ideal", back);
        r.verdict("order", order);
        ok &= there && back && order;
    }
    r.verdict("verdict", ok);
    Ok(ok)
}

fn bracket(lo: &Q, hi: &Q) -> String {
    format!("{lo}..{hi}")
}

pub fn norm(a: &DeskAlgebra, element: &str, eps: &Q, r: &mut Report) -> Result<bool, CliError> {
    let h = a.parse_element(element)?;
    r.field("algebra", a.name()).field("element", &h).field("eps", eps);
    let b = norm_from_positivity(a, &h, eps)?;
    r.field("bracket", bracket(&b.lo, &b.hi));
    r.field(
        "witness",
        b.witness.map_or("none".to_string(), |j| format!("index {j}")),
    );
    let s = h.sup_norm_sqr();
    r.field("norm_squared", &s);
    let above = b.lo.is_negative() || &b.lo * &b.lo < s;
    let below = s < &b.hi * &b.hi;
    let witnessed = b.lo.is_negative() || b.witness.is_some();
    let holds = above && below && witnessed && &b.hi - &b.lo <= *eps;
    r.verdict("verdict", holds);
    Ok(holds)
}

pub fn unitize_cmd(
    a: &DeskAlgebra,
    element: Option<&str>,
    scalar: &str,
    eps: &Q,
    r: &mut Report,
) -> Result<bool, CliError> {
    r.field("algebra", a.name());
    let plus = Unitization::unchecked(a.clone());
    r.field("unitization", plus.name());
    let validated = match unitize(a) {
        Ok(_) => {
            r.field("validated", plus.validation_grid().len());
            true
        }
        Err(e) => {
            r.field("validation_error", e);
            false
        }
    };
    r.verdict("validation", validated);
    let mut ok = validated;
    if let Some(c) = element {
        let x: UnitElement = plus.parse_element(c, scalar)?;
        r.field("element", &x);
        let (lo, hi) = plus.plus_norm(&x).bracket(eps);
        r.field("norm", bracket(&lo, &hi));
        let (lo, hi) = plus.plus_norm_closed(&x).bracket(eps);
        r.field("closed_form", bracket(&lo, &hi));
        let (lo, hi) = plus.naive_norm(&x).bracket(eps);
        r.field("naive_norm", bracket(&lo, &hi));
        r.field("chi_infty", chi_infty(&x));
        let laws = plus.validate_at(&x, 16);
        if let Err(e) = &laws {
            r.field("law_error", e);
        }
        r.verdict("laws", laws.is_ok());
        ok &= laws.is_ok();
    }
    r.verdict("verdict", ok);
    Ok(ok)
}

/// How far `map-check` goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MapAction {
    IsProper,
    Extend,
    Restrict,
}

impl std::str::FromStr for MapAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "is_proper" => Ok(MapAction::IsProper),
            "extend" => Ok(MapAction::Extend),
            "restrict" | "all" => Ok(MapAction::Restrict),
            _ => Err(format!(
                "unknown action {s:?}; expected is_proper, extend, restrict or all"
            )),
        }
    }
}

fn map_check_generic<X: HasSubspaces, Y: HasSubspaces>(
    f: &PartialMap<X, Y>,
    action: MapAction,
    grid: &Grid,
    r: &mut Report,
) -> bool {
    let (x, y) = (&f.source, &f.target);
    r.field("map", &f.label)
        .field("source", x.name())
        .field("target", y.name());
    r.field("dom", x.show(&f.dom)).field("total", f.is_total());
    let frame = f.check_frame_map(grid);
    if let Err(e) = &frame {
        r.field("frame_map_error", e);
    }
    r.verdict("frame_map", frame.is_ok());
    let proper = is_proper(f, grid);
    if let Some((u, pre)) = &proper.counterexample {
        r.field("counterexample", format!("U = {u}, f*(U) = {pre}"));
    }
    r.verdict("proper", proper.holds);
    let mut ok = frame.is_ok() && proper.holds;
    if action >= MapAction::Extend && ok {
        match extend_to_infty(f, grid) {
            Ok(g) => {
                let samples = g.target.sample_opens(grid);
                let mut errors = None;
                let mut rows = Vec::new();
                for b in &samples {
                    match g.pullback(b) {
                        Ok(a) if rows.len() < SAMPLE_ROWS * 2 => rows.push(vec![g.target.show(b), g.source.show(&a)]),
                        Ok(_) => {}
                        Err(e) => {
                            errors.get_or_insert_with(|| format!("{}: {e}", g.target.show(b)));
                        }
                    }
                }
                r.field("extension", &g.label);
                r.table("pullbacks", &["open", "pullback"], rows);
                if let Some(e) = &errors {
                    r.field("extend_error", e);
                }
                r.verdict("extend", errors.is_none());
                ok &= errors.is_none();
                if action >= MapAction::Restrict && errors.is_none() {
                    let round = match restrict_from_infty(&g, grid) {
                        Ok(f2) => f2.agrees_with(f, &y.sample_opens(grid)),
                        Err(e) => {
                            r.field("restrict_error", e);
                            false
                        }
                    };
                    r.verdict("round_trip", round);
                    ok &= round;
                }
            }
            Err(e) => {
                r.field("extend_error", e);
                r.verdict("extend", false);
                ok = false;
            }
        }
    }
    r.verdict("verdict", ok);
    ok
}

pub fn map_check(map: &AnyMap, action: MapAction, grid: &Grid, r: &mut Report) -> bool {
    with_any_map!(map, f => map_check_generic(f, action, grid, r))
}

/// The frame of opens of `x` as a lattice, when finite.
pub fn finite_frame_of<L: Locale>(x: &L) -> Option<FiniteFrame> {
    let opens = x.all_opens()?;
    let names: Vec<String> = opens.iter().map(|a| x.show(a)).collect();
    let mut pairs = Vec::new();
    for (i, a) in opens.iter().enumerate() {
        for (j, b) in opens.iter().enumerate() {
            if i != j && x.leq(a, b) {
                pairs.push((i, j));
            }
        }
    }
    FiniteFrame::from_index_pairs(x.name(), names, &pairs).ok()
}

fn export_generic<L: Locale>(x: &L, out: Option<&Path>, r: &mut Report) -> Result<bool, CliError> {
    let frame = finite_frame_of(x).ok_or(CliError::NotFinite(x.name().to_string()))?;
    let dot = frame.to_dot();
    r.field("target", x.name());
    r.field("nodes", frame.len());
    r.field("edges", frame.covers().len());
    match out {
        Some(p) => {
            fs::write(p, &dot).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            r.field("out", p.display());
        }
        None => {
            r.block("dot", &dot);
        }
    }
    Ok(true)
}

pub fn export(space: Space, out: Option<&Path>, grid: &Grid, r: &mut Report) -> Result<bool, CliError> {
    match space {
        Space::Plain(p) => with_locale!(p, x => export_generic(&x, out, r)),
        Space::Inf(p) => with_locale!(p, base => {
            let name = base.name().to_string();
            if base.all_opens().is_none() {
                return Err(CliError::NotFinite(format!("{name}.inf")));
            }
            match precondition(base, grid, &format!("{name}.inf"), r) {
                Some(xi) => export_generic(&xi, out, r),
                None => {
                    r.verdict("verdict", false);
                    Ok(false)
                }
            }
        }),
    }
}
