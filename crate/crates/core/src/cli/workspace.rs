//! Loading a directory of `*.lattice`, `*.locale`, `*.algebra` and `*.map`
//! files into one name registry.
//!
//! Map files follow
//!
//! ```text
//! map halve : nat -> nat
//! dom: mod 2{0}
//! rule: n -> (n+0)/2
//! ```
//!
//! where `rule:` (`n -> (a*n+b)/d` between discrete locales, `t -> s*t+o`
//! between intervals) may replace the `basic <b> -> <open>` lines.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::compactification::PartialMap;
use crate::cstar::{parse_algebras, DeskAlgebra};
use crate::finite_frames::{parse_lattices, FiniteFrame};
use crate::locale::{parse_locales, Discrete, FramePresentation, HasSubspaces, IndexMap, Interval, LocalePresentation};
use crate::rational::{parse_q, Q};
use crate::syntax::{content_lines, key_value, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkspaceError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}: {source}")]
    Syntax {
        file: String,
        #[source]
        source: SyntaxError,
    },
    #[error("{file}: line {line}: name {name:?} already defined in {first}")]
    Duplicate {
        file: String,
        line: usize,
        name: String,
        first: String,
    },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("{0:?} is not a {1}")]
    WrongKind(String, &'static str),
}

/// A map spec as written; checked against its locales at load time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub dom: String,
    pub rule: Option<String>,
    pub basics: Vec<(String, String)>,
    file: String,
    line: usize,
}

/// A loaded partial map, whatever the kinds of its locales.
#[derive(Clone)]
pub enum AnyMap {
    FF(PartialMap<FramePresentation, FramePresentation>),
    FD(PartialMap<FramePresentation, Discrete>),
    FI(PartialMap<FramePresentation, Interval>),
    DF(PartialMap<Discrete, FramePresentation>),
    DD(PartialMap<Discrete, Discrete>),
    DI(PartialMap<Discrete, Interval>),
    IF(PartialMap<Interval, FramePresentation>),
    ID(PartialMap<Interval, Discrete>),
    II(PartialMap<Interval, Interval>),
}

/// Dispatches a generic body over the concrete map type.
macro_rules! with_any_map {
    ($m:expr, $f:ident => $body:expr) => {
        match $m {
            $crate::cli::AnyMap::FF($f) => $body,
            $crate::cli::AnyMap::FD($f) => $body,
            $crate::cli::AnyMap::FI($f) => $body,
            $crate::cli::AnyMap::DF($f) => $body,
            $crate::cli::AnyMap::DD($f) => $body,
            $crate::cli::AnyMap::DI($f) => $body,
            $crate::cli::AnyMap::IF($f) => $body,
            $crate::cli::AnyMap::ID($f) => $body,
            $crate::cli::AnyMap::II($f) => $body,
        }
    };
}

#[derive(Clone)]
enum Object {
    Lattice(FiniteFrame),
    Locale(LocalePresentation),
    Algebra(DeskAlgebra),
    Map(MapSpec, AnyMap),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Lattice(_) => "lattice",
            Object::Locale(_) => "locale",
            Object::Algebra(_) => "algebra",
            Object::Map(..) => "map",
        }
    }
}

/// A locale named in a command, possibly the compactification `X.inf` of a
/// registered locale.
#[derive(Debug, Clone)]
pub enum Space {
    Plain(LocalePresentation),
    Inf(LocalePresentation),
}

#[derive(Clone, Default)]
pub struct Workspace {
    objects: BTreeMap<String, (Object, String)>,
}

const EXTENSIONS: [&str; 4] = ["lattice", "locale", "algebra", "map"];

impl Workspace {
    /// Reads every recognised file of `dir`. Files are processed by
    /// extension in the order lattices, locales, algebras, maps, and by
    /// name within one extension.
    pub fn load(dir: &Path) -> Result<Self, WorkspaceError> {
        let io = |p: &Path, e: std::io::Error| WorkspaceError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        };
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .and_then(|x| x.to_str())
                    .is_some_and(|x| EXTENSIONS.contains(&x))
            })
            .collect();
        files.sort();
        let mut sources = Vec::new();
        for p in files {
            let text = fs::read_to_string(&p).map_err(|e| io(&p, e))?;
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            sources.push((name, text));
        }
        Self::from_sources(&sources)
    }

    /// Builds a workspace from `(file name, contents)` pairs; the extension
    /// of the file name selects the format.
    pub fn from_sources(sources: &[(String, String)]) -> Result<Self, WorkspaceError> {
        let mut ws = Workspace::default();
        for ext in EXTENSIONS {
            let mut group: Vec<&(String, String)> = sources
                .iter()
                .filter(|(n, _)| n.rsplit('.').next() == Some(ext))
                .collect();
            group.sort_by(|a, b| a.0.cmp(&b.0));
            for (file, text) in group {
                ws.load_file(ext, file, text)?;
            }
        }
        Ok(ws)
    }

    fn syntax(file: &str, source: SyntaxError) -> WorkspaceError {
        WorkspaceError::Syntax {
            file: file.to_string(),
            source,
        }
    }

    fn insert(&mut self, file: &str, line: usize, name: &str, obj: Object) -> Result<(), WorkspaceError> {
        if name.ends_with(".inf") {
            return Err(Self::syntax(
                file,
                SyntaxError::new(line, "names ending in .inf are reserved"),
            ));
        }
        if let Some((_, first)) = self.objects.get(name) {
            return Err(WorkspaceError::Duplicate {
                file: file.to_string(),
                line,
                name: name.to_string(),
                first: first.clone(),
            });
        }
        self.objects.insert(name.to_string(), (obj, file.to_string()));
        Ok(())
    }

    fn load_file(&mut self, ext: &str, file: &str, text: &str) -> Result<(), WorkspaceError> {
        match ext {
            "lattice" => {
                let lines = header_lines(text, "lattice ");
                let frames = parse_lattices(text).map_err(|e| Self::syntax(file, e))?;
                for (frame, line) in frames.into_iter().zip(lines) {
                    let name = frame.name().to_string();
                    self.insert(file, line, &name, Object::Lattice(frame))?;
                }
            }
            "locale" => {
                for spec in parse_locales(text).map_err(|e| Self::syntax(file, e))? {
                    let pres = spec
                        .build(|n| self.lattice(n).ok())
                        .map_err(|e| Self::syntax(file, e))?;
                    self.insert(file, spec.line, &spec.name, Object::Locale(pres))?;
                }
            }
            "algebra" => {
                for (alg, line) in parse_algebras(text).map_err(|e| Self::syntax(file, e))? {
                    let name = crate::cstar::StarAlgebra::name(&alg).to_string();
                    self.insert(file, line, &name, Object::Algebra(alg))?;
                }
            }
            "map" => {
                for mut spec in parse_maps(text).map_err(|e| Self::syntax(file, e))? {
                    spec.file = file.to_string();
                    let map = self.build_map(&spec).map_err(|e| Self::syntax(file, e))?;
                    let (name, line) = (spec.name.clone(), spec.line);
                    self.insert(file, line, &name, Object::Map(spec, map))?;
                }
            }
            _ => unreachable!("filtered by extension"),
        }
        Ok(())
    }

    fn get(&self, name: &str) -> Result<&Object, WorkspaceError> {
        self.objects
            .get(name)
            .map(|(o, _)| o)
            .ok_or_else(|| WorkspaceError::UnknownName(name.to_string()))
    }

    /// Registered names with their kinds, sorted by name.
    pub fn names(&self) -> Vec<(String, &'static str)> {
        self.objects.iter().map(|(n, (o, _))| (n.clone(), o.kind())).collect()
    }

    pub fn lattice(&self, name: &str) -> Result<FiniteFrame, WorkspaceError> {
        match self.get(name)? {
            Object::Lattice(f) => Ok(f.clone()),
            _ => Err(WorkspaceError::WrongKind(name.to_string(), "lattice")),
        }
    }

    /// A locale, or a lattice viewed as a finite locale.
    pub fn locale(&self, name: &str) -> Result<LocalePresentation, WorkspaceError> {
        match self.get(name)? {
            Object::Locale(p) => Ok(p.clone()),
            Object::Lattice(f) => Ok(LocalePresentation::Finite(FramePresentation::new(f.clone()))),
            _ => Err(WorkspaceError::WrongKind(name.to_string(), "locale")),
        }
    }

    /// Resolves `X` or `X.inf`.
    pub fn space(&self, name: &str) -> Result<Space, WorkspaceError> {
        match name.strip_suffix(".inf") {
            Some(base) => Ok(Space::Inf(self.locale(base)?)),
            None => Ok(Space::Plain(self.locale(name)?)),
        }
    }

    pub fn algebra(&self, name: &str) -> Result<DeskAlgebra, WorkspaceError> {
        match self.get(name)? {
            Object::Algebra(a) => Ok(a.clone()),
            _ => Err(WorkspaceError::WrongKind(name.to_string(), "algebra")),
        }
    }

    pub fn map(&self, name: &str) -> Result<(MapSpec, AnyMap), WorkspaceError> {
        match self.get(name)? {
            Object::Map(s, m) => Ok((s.clone(), m.clone())),
            _ => Err(WorkspaceError::WrongKind(name.to_string(), "map")),
        }
    }

    fn build_map(&self, spec: &MapSpec) -> Result<AnyMap, SyntaxError> {
        let err = |m: String| SyntaxError::new(spec.line, format!("map {}: {m}", spec.name));
        let src = self.locale(&spec.source).map_err(|e| err(e.to_string()))?;
        let dst = self.locale(&spec.target).map_err(|e| err(e.to_string()))?;
        use LocalePresentation as P;
        Ok(match (src, dst) {
            (P::Discrete(x), P::Discrete(y)) if spec.rule.is_some() => {
                AnyMap::DD(discrete_rule(x, y, spec).map_err(err)?)
            }
            (P::Interval(x), P::Interval(y)) if spec.rule.is_some() => {
                AnyMap::II(interval_rule(x, y, spec).map_err(err)?)
            }
            _ if spec.rule.is_some() => return Err(err("`rule:` needs two discrete or two interval locales".into())),
            (P::Finite(x), P::Finite(y)) => AnyMap::FF(by_basics(x, y, spec).map_err(err)?),
            (P::Finite(x), P::Discrete(y)) => AnyMap::FD(by_basics(x, y, spec).map_err(err)?),
            (P::Finite(x), P::Interval(y)) => AnyMap::FI(by_basics(x, y, spec).map_err(err)?),
            (P::Discrete(x), P::Finite(y)) => AnyMap::DF(by_basics(x, y, spec).map_err(err)?),
            (P::Discrete(x), P::Discrete(y)) => AnyMap::DD(by_basics(x, y, spec).map_err(err)?),
            (P::Discrete(x), P::Interval(y)) => AnyMap::DI(by_basics(x, y, spec).map_err(err)?),
            (P::Interval(x), P::Finite(y)) => AnyMap::IF(by_basics(x, y, spec).map_err(err)?),
            (P::Interval(x), P::Discrete(y)) => AnyMap::ID(by_basics(x, y, spec).map_err(err)?),
            (P::Interval(x), P::Interval(y)) => AnyMap::II(by_basics(x, y, spec).map_err(err)?),
        })
    }
}

/// Line numbers of the block headers starting with `prefix`.
fn header_lines(text: &str, prefix: &str) -> Vec<usize> {
    content_lines(text)
        .filter(|(_, l)| l.starts_with(prefix))
        .map(|(n, _)| n)
        .collect()
}

fn by_basics<X: HasSubspaces, Y: HasSubspaces>(x: X, y: Y, spec: &MapSpec) -> Result<PartialMap<X, Y>, String> {
    let dom = x.parse_open(&spec.dom).map_err(|e| format!("dom: {e}"))?;
    let mut basics = Vec::new();
    for (b, img) in &spec.basics {
        let b = y.parse_open(b).map_err(|e| format!("basic {b}: {e}"))?;
        let img = x.parse_open(img).map_err(|e| format!("basic image {img}: {e}"))?;
        basics.push((b, img));
    }
    Ok(PartialMap::from_basics(x, y, dom, &spec.name, basics))
}

fn discrete_rule(x: Discrete, y: Discrete, spec: &MapSpec) -> Result<PartialMap<Discrete, Discrete>, String> {
    use crate::locale::Locale;
    let dom = x.parse_open(&spec.dom).map_err(|e| format!("dom: {e}"))?;
    let rule = spec.rule.as_deref().unwrap_or_default();
    let (a, b, d) = parse_index_rule(rule)?;
    let f = IndexMap::affine(dom, a, b, d)?;
    PartialMap::from_index_map(x, y, f, &spec.name).map_err(|e| e.to_string())
}

fn interval_rule(x: Interval, y: Interval, spec: &MapSpec) -> Result<PartialMap<Interval, Interval>, String> {
    use crate::locale::Locale;
    let dom = x.parse_open(&spec.dom).map_err(|e| format!("dom: {e}"))?;
    let rule = spec.rule.as_deref().unwrap_or_default();
    let (s, o) = parse_linear(strip_arrow(rule, "t")?, "t")?;
    PartialMap::affine(x, y, dom, s, o, &spec.name).map_err(|e| e.to_string())
}

fn strip_arrow<'a>(rule: &'a str, var: &str) -> Result<&'a str, String> {
    let (lhs, rhs) = rule
        .split_once("->")
        .ok_or_else(|| format!("expected `{var} -> ...` in rule {rule:?}"))?;
    if lhs.trim() != var {
        return Err(format!("expected `{var} -> ...` in rule {rule:?}"));
    }
    Ok(rhs.trim())
}

/// `n -> (a*n+b)/d`, `n -> a*n+b`, `n -> n`.
fn parse_index_rule(rule: &str) -> Result<(u64, i64, u64), String> {
    let rhs: String = strip_arrow(rule, "n")?.chars().filter(|c| !c.is_whitespace()).collect();
    let (body, d) = match rhs.strip_prefix('(').and_then(|r| r.rsplit_once(")/")) {
        Some((inner, d)) => (
            inner.to_string(),
            d.parse::<u64>().map_err(|_| format!("bad divisor {d:?}"))?,
        ),
        None => (rhs.clone(), 1),
    };
    let (a, b) = parse_linear(&body, "n")?;
    let int = |v: &Q, what: &str| {
        if v.is_integer() {
            v.to_integer()
                .try_into()
                .map_err(|_| format!("{what} {v} out of range"))
        } else {
            Err(format!("{what} {v} is not an integer"))
        }
    };
    let a: i64 = int(&a, "coefficient")?;
    let a = u64::try_from(a).map_err(|_| "negative coefficient".to_string())?;
    Ok((a, int(&b, "offset")?, d))
}

/// `s*v+o`, `s*v-o`, `s*v`, `v+o`, `v` as `(s, o)`.
fn parse_linear(text: &str, var: &str) -> Result<(Q, Q), String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("expected a linear expression in {var}, got {text:?}");
    let pos = t.find(var).ok_or_else(bad)?;
    let (coef, rest) = (&t[..pos], &t[pos + var.len()..]);
    let s = match coef {
        "" => Q::from_integer(1.into()),
        "-" => Q::from_integer((-1).into()),
        c => parse_q(c.strip_suffix('*').ok_or_else(bad)?).map_err(|_| bad())?,
    };
    let o = if rest.is_empty() {
        Q::from_integer(0.into())
    } else if let Some(r) = rest.strip_prefix('+') {
        parse_q(r).map_err(|_| bad())?
    } else if rest.starts_with('-') {
        parse_q(rest).map_err(|_| bad())?
    } else {
        return Err(bad());
    };
    Ok((s, o))
}

/// Parses every `map` block in `text`.
pub fn parse_maps(text: &str) -> Result<Vec<MapSpec>, SyntaxError> {
    let mut out: Vec<MapSpec> = Vec::new();
    let mut dom_seen: Vec<bool> = Vec::new();
    for (no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("map ") {
            let (name, arrow) = rest
                .split_once(':')
                .ok_or_else(|| SyntaxError::new(no, "expected `map <name> : <src> -> <dst>`"))?;
            let (src, dst) = arrow
                .split_once("->")
                .ok_or_else(|| SyntaxError::new(no, "expected `map <name> : <src> -> <dst>`"))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(SyntaxError::new(no, "bad map name"));
            }
            out.push(MapSpec {
                name: name.to_string(),
                source: src.trim().to_string(),
                target: dst.trim().to_string(),
                dom: String::new(),
                rule: None,
                basics: Vec::new(),
                file: String::new(),
                line: no,
            });
            dom_seen.push(false);
            continue;
        }
        let cur = out
            .last_mut()
            .ok_or_else(|| SyntaxError::new(no, "expected `map <name> : <src> -> <dst>` header"))?;
        if let Some(rest) = line.strip_prefix("basic ") {
            let (b, img) = rest
                .split_once("->")
                .ok_or_else(|| SyntaxError::new(no, "expected `basic <b> -> <open>`"))?;
            cur.basics.push((b.trim().to_string(), img.trim().to_string()));
            continue;
        }
        match key_value(line) {
            Some(("dom", v)) => {
                let seen = dom_seen.last_mut().expect("one flag per block");
                if *seen {
                    return Err(SyntaxError::new(no, "duplicate `dom:` line"));
                }
                *seen = true;
                cur.dom = v.to_string();
            }
            Some(("rule", v)) => {
                if cur.rule.is_some() {
                    return Err(SyntaxError::new(no, "duplicate `rule:` line"));
                }
                cur.rule = Some(v.to_string());
            }
            _ => return Err(SyntaxError::new(no, format!("unrecognised line {line:?}"))),
        }
    }
    for (m, seen) in out.iter().zip(&dom_seen) {
        if !seen {
            return Err(SyntaxError::new(m.line, format!("map {}: missing `dom:`", m.name)));
        }
        if m.rule.is_some() && !m.basics.is_empty() {
            return Err(SyntaxError::new(
                m.line,
                format!("map {}: `rule:` and `basic` lines are exclusive", m.name),
            ));
        }
    }
    Ok(out)
}
