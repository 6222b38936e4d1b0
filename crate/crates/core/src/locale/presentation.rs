//! A kind-tagged wrapper over the three instance families, with the
//! locale spec file format:
//!
//! ```text
//! locale nat
//! kind: discrete
//! points: nat
//! ```
//!
//! `kind: finite` takes `frame: <lattice name>`; `kind: discrete` takes
//! `points: nat`, `points: finite <n>` or a point-set expression such as
//! `mod 2{0}`; `kind: interval` takes an optional `universe: (p,q)|...`.

use std::fmt;

use crate::syntax::{content_lines, key_value, SyntaxError};

use super::{Discrete, FramePresentation, Interval, IntervalSet, Locale, LocaleError, NatSet};

/// An open of one of the instance families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpenExpr {
    Points(NatSet),
    Intervals(IntervalSet),
    Element(usize),
}

impl fmt::Display for OpenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenExpr::Points(s) => write!(f, "{s}"),
            OpenExpr::Intervals(s) => write!(f, "{s}"),
            OpenExpr::Element(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum LocalePresentation {
    Finite(FramePresentation),
    Discrete(Discrete),
    Interval(Interval),
}

macro_rules! dispatch {
    ($self:expr, $x:ident => $body:expr) => {
        match $self {
            LocalePresentation::Finite($x) => $body,
            LocalePresentation::Discrete($x) => $body,
            LocalePresentation::Interval($x) => $body,
        }
    };
}

impl LocalePresentation {
    pub fn name(&self) -> &str {
        dispatch!(self, x => x.name())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LocalePresentation::Finite(_) => "finite",
            LocalePresentation::Discrete(_) => "discrete",
            LocalePresentation::Interval(_) => "interval",
        }
    }

    pub fn parse_open(&self, text: &str) -> Result<OpenExpr, LocaleError> {
        Ok(match self {
            LocalePresentation::Finite(x) => OpenExpr::Element(x.parse_open(text)?),
            LocalePresentation::Discrete(x) => OpenExpr::Points(x.parse_open(text)?),
            LocalePresentation::Interval(x) => OpenExpr::Intervals(x.parse_open(text)?),
        })
    }

    pub fn top(&self) -> OpenExpr {
        match self {
            LocalePresentation::Finite(x) => OpenExpr::Element(x.top()),
            LocalePresentation::Discrete(x) => OpenExpr::Points(x.top()),
            LocalePresentation::Interval(x) => OpenExpr::Intervals(x.top()),
        }
    }

    pub fn show(&self, e: &OpenExpr) -> String {
        match (self, e) {
            (LocalePresentation::Finite(x), OpenExpr::Element(a)) => x.show(a),
            _ => e.to_string(),
        }
    }

    fn pair<R>(
        &self,
        a: &OpenExpr,
        b: &OpenExpr,
        fin: impl Fn(&FramePresentation, &usize, &usize) -> R,
        disc: impl Fn(&Discrete, &NatSet, &NatSet) -> R,
        int: impl Fn(&Interval, &IntervalSet, &IntervalSet) -> R,
    ) -> Result<R, LocaleError> {
        match (self, a, b) {
            (LocalePresentation::Finite(x), OpenExpr::Element(a), OpenExpr::Element(b)) => Ok(fin(x, a, b)),
            (LocalePresentation::Discrete(x), OpenExpr::Points(a), OpenExpr::Points(b)) => Ok(disc(x, a, b)),
            (LocalePresentation::Interval(x), OpenExpr::Intervals(a), OpenExpr::Intervals(b)) => Ok(int(x, a, b)),
            _ => Err(LocaleError::UnsupportedForm),
        }
    }

    pub fn open_leq(&self, a: &OpenExpr, b: &OpenExpr) -> Result<bool, LocaleError> {
        self.pair(
            a,
            b,
            |x, a, b| x.leq(a, b),
            |x, a, b| x.leq(a, b),
            |x, a, b| x.leq(a, b),
        )
    }

    pub fn way_below(&self, a: &OpenExpr, b: &OpenExpr) -> Result<bool, LocaleError> {
        self.pair(
            a,
            b,
            |x, a, b| x.way_below(a, b),
            |x, a, b| x.way_below(a, b),
            |x, a, b| x.way_below(a, b),
        )
    }

    pub fn is_cover(&self, e: &OpenExpr) -> Result<bool, LocaleError> {
        let top = self.top();
        self.open_leq(&top, e)
    }

    pub fn way_below_whole(&self, e: &OpenExpr) -> Result<bool, LocaleError> {
        let top = self.top();
        self.way_below(e, &top)
    }

    pub fn omega(&self, e: &OpenExpr) -> Result<Option<OpenExpr>, LocaleError> {
        match (self, e) {
            (LocalePresentation::Finite(x), OpenExpr::Element(a)) => Ok(x.omega(a).map(OpenExpr::Element)),
            (LocalePresentation::Discrete(x), OpenExpr::Points(a)) => Ok(x.omega(a).map(OpenExpr::Points)),
            (LocalePresentation::Interval(x), OpenExpr::Intervals(a)) => Ok(x.omega(a).map(OpenExpr::Intervals)),
            _ => Err(LocaleError::UnsupportedForm),
        }
    }

    pub fn positive(&self, e: &OpenExpr) -> Result<Option<bool>, LocaleError> {
        match (self, e) {
            (LocalePresentation::Finite(x), OpenExpr::Element(a)) => Ok(x.positive(a)),
            (LocalePresentation::Discrete(x), OpenExpr::Points(a)) => Ok(x.positive(a)),
            (LocalePresentation::Interval(x), OpenExpr::Intervals(a)) => Ok(x.positive(a)),
            _ => Err(LocaleError::UnsupportedForm),
        }
    }

    /// Whether the opens are finite in number.
    pub fn is_finite(&self) -> bool {
        match self {
            LocalePresentation::Finite(_) => true,
            LocalePresentation::Discrete(d) => d.all_opens().is_some(),
            LocalePresentation::Interval(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocaleKind {
    Finite { frame: String },
    Discrete { points: NatSet },
    Interval { universe: IntervalSet },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocaleSpec {
    pub name: String,
    pub line: usize,
    pub kind: LocaleKind,
}

impl LocaleSpec {
    /// Builds the presentation; `lookup` resolves lattice names.
    pub fn build(
        &self,
        lookup: impl Fn(&str) -> Option<crate::finite_frames::FiniteFrame>,
    ) -> Result<LocalePresentation, SyntaxError> {
        Ok(match &self.kind {
            LocaleKind::Finite { frame } => {
                let f = lookup(frame).ok_or_else(|| {
                    SyntaxError::new(self.line, format!("locale {}: unknown lattice {frame:?}", self.name))
                })?;
                LocalePresentation::Finite(FramePresentation::new(f).named(&self.name))
            }
            LocaleKind::Discrete { points } => LocalePresentation::Discrete(Discrete::new(&self.name, points.clone())),
            LocaleKind::Interval { universe } => {
                LocalePresentation::Interval(Interval::new(&self.name, universe.clone()))
            }
        })
    }
}

/// Parses every `locale` block in `text`.
pub fn parse_locales(text: &str) -> Result<Vec<LocaleSpec>, SyntaxError> {
    struct Partial {
        name: String,
        line: usize,
        kind: Option<String>,
        payload: Option<(usize, String, String)>,
    }
    let mut blocks: Vec<Partial> = Vec::new();
    for (no, line) in content_lines(text) {
        if let Some(name) = line.strip_prefix("locale ") {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(SyntaxError::new(no, "expected `locale <name>`"));
            }
            blocks.push(Partial {
                name: name.to_string(),
                line: no,
                kind: None,
                payload: None,
            });
            continue;
        }
        let cur = blocks
            .last_mut()
            .ok_or_else(|| SyntaxError::new(no, "expected `locale <name>` header"))?;
        match key_value(line) {
            Some(("kind", k)) => {
                if cur.kind.is_some() {
                    return Err(SyntaxError::new(no, "duplicate `kind:` line"));
                }
                cur.kind = Some(k.to_string());
            }
            Some((key @ ("frame" | "points" | "universe"), v)) => {
                if cur.payload.is_some() {
                    return Err(SyntaxError::new(no, "duplicate payload line"));
                }
                cur.payload = Some((no, key.to_string(), v.to_string()));
            }
            _ => return Err(SyntaxError::new(no, format!("unrecognised line {line:?}"))),
        }
    }
    blocks
        .into_iter()
        .map(|b| {
            let kind = b
                .kind
                .ok_or_else(|| SyntaxError::new(b.line, format!("locale {}: missing `kind:`", b.name)))?;
            let payload = b.payload.as_ref().map(|(n, k, v)| (*n, k.as_str(), v.as_str()));
            let kind = match (kind.as_str(), payload) {
                ("finite", Some((_, "frame", v))) => LocaleKind::Finite { frame: v.to_string() },
                ("finite", _) => return Err(SyntaxError::new(b.line, "finite locale needs `frame: <lattice>`")),
                ("discrete", Some((n, "points", v))) => LocaleKind::Discrete {
                    points: parse_points(v).map_err(|m| SyntaxError::new(n, m))?,
                },
                ("discrete", _) => return Err(SyntaxError::new(b.line, "discrete locale needs `points:`")),
                ("interval", None) => LocaleKind::Interval {
                    universe: IntervalSet::unit(),
                },
                ("interval", Some((n, "universe", v))) => {
                    let u: IntervalSet = v.parse().map_err(|e: SyntaxError| SyntaxError::new(n, e.message))?;
                    if !u.is_subset(&IntervalSet::unit()) || u.is_empty() {
                        return Err(SyntaxError::new(n, "universe must be a non-empty open of (0,1)"));
                    }
                    LocaleKind::Interval { universe: u }
                }
                ("interval", Some((n, key, _))) => {
                    return Err(SyntaxError::new(n, format!("unexpected `{key}:` for interval locale")))
                }
                (other, _) => return Err(SyntaxError::new(b.line, format!("unknown kind {other:?}"))),
            };
            Ok(LocaleSpec {
                name: b.name,
                line: b.line,
                kind,
            })
        })
        .collect()
}

fn parse_points(v: &str) -> Result<NatSet, String> {
    let v = v.trim();
    if v == "nat" {
        return Ok(NatSet::all());
    }
    if let Some(n) = v.strip_prefix("finite") {
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| format!("expected `finite <n>`, got {v:?}"))?;
        return Ok(NatSet::range(n));
    }
    v.parse::<NatSet>().map_err(|e| e.message)
}
