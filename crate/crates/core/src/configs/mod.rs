//! Finite point configurations and the constructions that produce them.
//!
//! A [`Configuration`] is a labelled list of distinct points of `P^n` over a
//! [`FieldSpec`]. When it was built from coordinate expressions, the
//! expressions are kept so the same configuration can be rebuilt over a
//! different prime (used for two-prime cross checks) and saved verbatim.

mod expr;
mod io;
mod named;

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use expr::{eval, ExprError};
pub use io::{load, load_str, save, to_json};
pub use named::{golden_columns, named, NAMED_LABELS};

use crate::field::{FieldError, FieldSpec, PrimeField, Symbol, DEFAULT_MIN_BOUND};
use crate::projgeom::{segre, Flat, GeomError, ProjPoint};
use crate::util::binom;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("grid parameters contain a repeated point")]
    DuplicateParams,
    #[error("the Y1Y2 standard construction needs an even n, got {0}")]
    OddNForY1Y2(usize),
    #[error("the standard construction needs n >= 3, got {0}")]
    NTooSmall(usize),
    #[error("configuration `{0}` does not come from the standard construction (or was already extended)")]
    NotStandard(String),
    #[error("unknown configuration label `{0}`")]
    UnknownLabel(String),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("configuration has no points")]
    Empty,
    #[error("point {point} has {got} coordinates, expected {expected}")]
    WrongLength { point: usize, got: usize, expected: usize },
    #[error("point {point}, coordinate {coord}: {source}")]
    Expr { point: usize, coord: usize, source: ExprError },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unresolvable symbol: {0}")]
    UnresolvableSymbol(String),
    #[error("configuration `{0}` has no symbolic description and cannot be rebuilt over another prime")]
    NotSymbolic(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Prime selection for constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Lower bound for the automatically chosen prime.
    pub min_bound: u64,
    /// Use this prime instead of searching.
    pub prime: Option<u64>,
    /// Seed for symbol resolution.
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { min_bound: DEFAULT_MIN_BOUND, prime: None, seed: 0 }
    }
}

impl BuildOptions {
    pub fn with_prime(prime: u64) -> Self {
        BuildOptions { prime: Some(prime), ..Self::default() }
    }

    pub fn field_spec(&self, symbols: &[Symbol]) -> Result<FieldSpec, ConfigError> {
        Ok(match self.prime {
            Some(p) => FieldSpec::with_prime(p, symbols, self.seed)?,
            None => FieldSpec::choose(symbols, self.min_bound, self.seed)?,
        })
    }
}

/// Which of the two auxiliary lines the standard construction adds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    Y1,
    Y2,
    Y1Y2,
}

impl std::str::FromStr for Which {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "y1" => Ok(Which::Y1),
            "y2" => Ok(Which::Y2),
            "y1y2" => Ok(Which::Y1Y2),
            other => Err(format!("expected y1, y2 or y1y2, got `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardTag {
    pub n: usize,
    pub which: Which,
    #[serde(default)]
    pub extended: bool,
}

/// Optional metadata attached to a configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tags {
    /// Expected `(a, b)` with `a <= b`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard: Option<StandardTag>,
}

impl Tags {
    pub fn shape(a: usize, b: usize) -> Self {
        Tags { shape: Some((a.min(b), a.max(b))), standard: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub label: String,
    pub spec: FieldSpec,
    pub ambient_dim: usize,
    pub points: Vec<ProjPoint>,
    /// Source expressions, one row per point, when the configuration is symbolic.
    pub exprs: Option<Vec<Vec<String>>>,
    pub tags: Tags,
}

impl Configuration {
    /// Wrap explicit points, checking a common ambient space and distinctness.
    pub fn from_points(label: &str, spec: FieldSpec, points: Vec<ProjPoint>, tags: Tags) -> Result<Self, ConfigError> {
        let ambient_dim = points.first().ok_or(ConfigError::Empty)?.ambient_dim();
        for (k, p) in points.iter().enumerate() {
            if p.ambient_dim() != ambient_dim {
                return Err(ConfigError::WrongLength { point: k, got: p.ambient_dim() + 1, expected: ambient_dim + 1 });
            }
        }
        check_distinct(&points)?;
        Ok(Configuration { label: label.to_string(), spec, ambient_dim, points, exprs: None, tags })
    }

    /// Evaluate expression rows over `spec`.
    pub fn from_exprs(label: &str, spec: FieldSpec, rows: Vec<Vec<String>>, tags: Tags) -> Result<Self, ConfigError> {
        let width = rows.first().ok_or(ConfigError::Empty)?.len();
        let f = spec.field;
        let mut points = Vec::with_capacity(rows.len());
        for (k, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(ConfigError::WrongLength { point: k, got: row.len(), expected: width });
            }
            let mut coords = Vec::with_capacity(width);
            for (c, e) in row.iter().enumerate() {
                coords.push(eval(e, &spec).map_err(|source| ConfigError::Expr { point: k, coord: c, source })?);
            }
            points.push(ProjPoint::new(f, coords)?);
        }
        let mut cfg = Self::from_points(label, spec, points, tags)?;
        cfg.exprs = Some(rows);
        Ok(cfg)
    }

    pub fn field(&self) -> PrimeField {
        self.spec.field
    }

    pub fn prime(&self) -> u64 {
        self.spec.prime()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same configuration over another prime.
    ///
    /// Symbolic configurations are re-evaluated from their expressions; the
    /// generated named sets are rebuilt through the registry.
    pub fn over_prime(&self, prime: u64) -> Result<Self, ConfigError> {
        let opts = BuildOptions { prime: Some(prime), seed: self.spec.seed, ..BuildOptions::default() };
        if let Some(rows) = &self.exprs {
            let spec = opts.field_spec(&self.spec.symbols)?;
            return Self::from_exprs(&self.label, spec, rows.clone(), self.tags.clone());
        }
        if NAMED_LABELS.contains(&self.label.as_str()) {
            return named(&self.label, &opts);
        }
        Err(ConfigError::NotSymbolic(self.label.clone()))
    }

    /// The sub-configuration on the given indices.
    pub fn subset(&self, label: &str, indices: &[usize], tags: Tags) -> Result<Self, ConfigError> {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let mut cfg = Self::from_points(label, self.spec.clone(), points, tags)?;
        cfg.exprs = self.exprs.as_ref().map(|rows| indices.iter().map(|&i| rows[i].clone()).collect());
        Ok(cfg)
    }

    /// Union with another configuration over the same field.
    pub fn union(&self, label: &str, other: &Configuration, tags: Tags) -> Result<Self, ConfigError> {
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let mut cfg = Self::from_points(label, self.spec.clone(), points, tags)?;
        if let (Some(a), Some(b)) = (&self.exprs, &other.exprs) {
            if self.spec.symbols == other.spec.symbols {
                cfg.exprs = Some(a.iter().chain(b).cloned().collect());
            }
        }
        Ok(cfg)
    }
}

fn check_distinct(points: &[ProjPoint]) -> Result<(), ConfigError> {
    let mut seen: HashMap<&ProjPoint, usize> = HashMap::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        if let Some(&j) = seen.get(p) {
            return Err(ConfigError::DuplicatePoint(j, k));
        }
        seen.insert(p, k);
    }
    Ok(())
}

/// `u^k` as an expression, with the exponent reduced modulo the order `n`.
pub(crate) fn upow(sym: &str, k: usize, n: usize) -> String {
    match k % n {
        0 => "1".to_string(),
        1 => sym.to_string(),
        e => format!("{sym}^{e}"),
    }
}

/// `-u^k`.
pub(crate) fn neg_upow(sym: &str, k: usize, n: usize) -> String {
    format!("-{}", upow(sym, k, n))
}

/// Segre product of two parameter lists, ordered by the first factor.
pub fn grid(label: &str, spec: FieldSpec, params_a: &[ProjPoint], params_b: &[ProjPoint]) -> Result<Configuration, ConfigError> {
    for list in [params_a, params_b] {
        if check_distinct(list).is_err() {
            return Err(ConfigError::DuplicateParams);
        }
    }
    let f = spec.field;
    let mut points = Vec::with_capacity(params_a.len() * params_b.len());
    for a in params_a {
        for b in params_b {
            points.push(segre(f, a, b)?);
        }
    }
    Configuration::from_points(label, spec, points, Tags::shape(params_a.len(), params_b.len()))
}

/// The `(a, b)`-grid on `xw = yz` with roots-of-unity parameters `[1:u^i]`, `[1:w^j]`.
pub fn roots_grid(a: usize, b: usize, opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[Symbol::order("u", a as u64), Symbol::order("w", b as u64)])?;
    let mut rows = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            // [1:u^i] x [1:w^j] -> [1 : w^j : u^i : u^i w^j]
            let ui = upow("u", i, a);
            let wj = upow("w", j, b);
            rows.push(vec!["1".to_string(), wj.clone(), ui.clone(), format!("{ui}*{wj}")]);
        }
    }
    Configuration::from_exprs(&format!("grid-{a}-{b}"), spec, rows, Tags::shape(a, b))
}

/// `X` plus one or both auxiliary lines, with `u` of order `n`.
///
/// `X = {[1 : u^j : u^i : u^(i+j)]}`, `Y1 = {[1:0:0:-u^i]}`, `Y2 = {[0:1:-u^i:0]}`.
pub fn std_construction(n: usize, which: Which, opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    if n < 3 {
        return Err(ConfigError::NTooSmall(n));
    }
    if which == Which::Y1Y2 && n % 2 == 1 {
        return Err(ConfigError::OddNForY1Y2(n));
    }
    let spec = opts.field_spec(&[Symbol::order("u", n as u64)])?;
    let rows = std_rows(n, which);
    let extra = if which == Which::Y1Y2 { 2 } else { 1 };
    let tags = Tags { shape: Some((n, n + extra)), standard: Some(StandardTag { n, which, extended: false }) };
    let label = format!("std-{n}-{}", format!("{which:?}").to_lowercase());
    Configuration::from_exprs(&label, spec, rows, tags)
}

pub(crate) fn std_rows(n: usize, which: Which) -> Vec<Vec<String>> {
    let z = || "0".to_string();
    let one = || "1".to_string();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            rows.push(vec![one(), upow("u", j, n), upow("u", i, n), upow("u", i + j, n)]);
        }
    }
    if matches!(which, Which::Y1 | Which::Y1Y2) {
        rows.extend((0..n).map(|i| vec![one(), z(), z(), neg_upow("u", i, n)]));
    }
    if matches!(which, Which::Y2 | Which::Y1Y2) {
        rows.extend((0..n).map(|i| vec![z(), one(), neg_upow("u", i, n), z()]));
    }
    rows
}

/// Add the points that enlarge a standard configuration to a bigger geproci set.
///
/// Y1: the row `[1:0:u^i:0]` on the ruling through `[1:0:0:0]`, plus that point.
/// Y2: the row `[0:1:0:u^i]` plus `[0:1:0:0]`.
/// Y1Y2: both rows plus the four coordinate points.
pub fn extend_standard(z: &Configuration) -> Result<Configuration, ConfigError> {
    let tag = match z.tags.standard {
        Some(t) if !t.extended => t,
        _ => return Err(ConfigError::NotStandard(z.label.clone())),
    };
    let Some(rows) = &z.exprs else {
        return Err(ConfigError::NotStandard(z.label.clone()));
    };
    let n = tag.n;
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<String>>();
    let mut rows = rows.clone();
    let row_y1 = |i: usize| vec!["1".into(), "0".into(), upow("u", i, n), "0".into()];
    let row_y2 = |i: usize| vec!["0".into(), "1".into(), "0".into(), upow("u", i, n)];
    let (added_shape, extra): (usize, Vec<Vec<String>>) = match tag.which {
        Which::Y1 => {
            let mut e: Vec<Vec<String>> = (0..n).map(row_y1).collect();
            e.push(s(&["1", "0", "0", "0"]));
            (n + 1, e)
        }
        Which::Y2 => {
            let mut e: Vec<Vec<String>> = (0..n).map(row_y2).collect();
            e.push(s(&["0", "1", "0", "0"]));
            (n + 1, e)
        }
        Which::Y1Y2 => {
            let mut e: Vec<Vec<String>> = (0..n).map(row_y1).collect();
            e.extend((0..n).map(row_y2));
            e.push(s(&["1", "0", "0", "0"]));
            e.push(s(&["0", "1", "0", "0"]));
            e.push(s(&["0", "0", "1", "0"]));
            e.push(s(&["0", "0", "0", "1"]));
            (n + 2, e)
        }
    };
    rows.extend(extra);
    let tags = Tags {
        shape: Some((added_shape, added_shape)),
        standard: Some(StandardTag { extended: true, ..tag }),
    };
    Configuration::from_exprs(&format!("{}-ext", z.label), z.spec.clone(), rows, tags)
}

/// Remove every point lying on one of `lines`.
///
/// If all removed lines carry the same number `k` of points and `k` is one
/// side of the tagged shape `(a, b)`, that side's partner shrinks by the
/// number of lines: removing `j` lines of `a` points from an `(a, b)` set
/// leaves an `(a, b - j)` candidate.
pub fn remove_lines(z: &Configuration, lines: &[Flat]) -> Result<Configuration, ConfigError> {
    if lines.is_empty() {
        return Ok(z.clone());
    }
    let f = z.field();
    let on_line = |p: &ProjPoint| lines.iter().any(|l| l.contains(f, p));
    let keep: Vec<usize> = (0..z.len()).filter(|&i| !on_line(&z.points[i])).collect();
    let counts: Vec<usize> = lines.iter().map(|l| z.points.iter().filter(|p| l.contains(f, p)).count()).collect();
    let shape = z.tags.shape.and_then(|(a, b)| {
        let k = counts[0];
        if counts.iter().any(|&c| c != k) {
            return None;
        }
        let j = lines.len();
        let (x, y) = if k == a && b > j {
            (a, b - j)
        } else if k == b && a > j {
            (a - j, b)
        } else {
            return None;
        };
        Some((x.min(y), x.max(y)))
    });
    let tags = Tags { shape, standard: None };
    z.subset(&format!("{}-minus-{}", z.label, lines.len()), &keep, tags)
}

/// Which coordinate flats a [`skeleton`] consists of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonKind {
    /// The coordinate lines.
    Lines,
    /// The coordinate flats of codimension 2.
    Codim2,
}

/// A finite union of flats of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatUnion {
    pub ambient_dim: usize,
    pub flats: Vec<Flat>,
}

impl FlatUnion {
    /// Dimension of each flat.
    pub fn flat_dim(&self) -> usize {
        self.flats.first().map_or(0, |f| f.dim())
    }

    /// `binom(t + k, k)` random points on each `k`-flat.
    pub fn sample_points<R: Rng + ?Sized>(&self, field: PrimeField, t: usize, rng: &mut R) -> Vec<ProjPoint> {
        let k = self.flat_dim();
        let per = binom(t + k, k) as usize;
        let mut out = Vec::with_capacity(per * self.flats.len());
        for flat in &self.flats {
            let mut produced = 0;
            while produced < per {
                let mut v = vec![field.zero(); self.ambient_dim + 1];
                for row in flat.basis() {
                    let c = field.random(rng);
                    for (x, &b) in v.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(c, b));
                    }
                }
                if let Ok(p) = ProjPoint::new(field, v) {
                    out.push(p);
                    produced += 1;
                }
            }
        }
        out
    }
}

/// All coordinate lines, or all codimension-2 coordinate flats, of `P^n`.
pub fn skeleton(field: PrimeField, n: usize, kind: SkeletonKind) -> FlatUnion {
    let k = match kind {
        SkeletonKind::Lines => 1,
        SkeletonKind::Codim2 => n.saturating_sub(2),
    };
    let coords: Vec<ProjPoint> = (0..=n).map(|i| ProjPoint::coordinate(n, i)).collect();
    let flats = crate::util::subsets(n + 1, k + 1)
        .into_iter()
        .map(|s| {
            let pts: Vec<&ProjPoint> = s.iter().map(|&i| &coords[i]).collect();
            Flat::span(field, &pts).expect("coordinate points share an ambient space")
        })
        .collect();
    FlatUnion { ambient_dim: n, flats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::span_dim;

    fn opts() -> BuildOptions {
        BuildOptions::default()
    }

    fn on_quadric(cfg: &Configuration, p: &ProjPoint) -> bool {
        let f = cfg.field();
        let c = p.coords();
        f.mul(c[0], c[3]) == f.mul(c[1], c[2])
    }

    #[test]
    fn standard_cardinalities() {
        assert_eq!(std_construction(3, Which::Y1, &opts()).unwrap().len(), 12);
        assert_eq!(std_construction(4, Which::Y1Y2, &opts()).unwrap().len(), 24);
        assert_eq!(std_construction(6, Which::Y1Y2, &opts()).unwrap().len(), 48);
        assert_eq!(std_construction(5, Which::Y2, &opts()).unwrap().len(), 30);
        assert!(matches!(std_construction(5, Which::Y1Y2, &opts()), Err(ConfigError::OddNForY1Y2(5))));
        assert!(matches!(std_construction(2, Which::Y1, &opts()), Err(ConfigError::NTooSmall(2))));
    }

    #[test]
    fn grid_part_on_quadric_and_lines_off_it() {
        for (n, which) in [(3usize, Which::Y1), (4, Which::Y1Y2), (5, Which::Y2), (6, Which::Y1Y2)] {
            let z = std_construction(n, which, &opts()).unwrap();
            for (k, p) in z.points.iter().enumerate() {
                assert_eq!(on_quadric(&z, p), k < n * n, "n={n} point {k}");
            }
        }
    }

    #[test]
    fn extensions() {
        let e = extend_standard(&std_construction(3, Which::Y1, &opts()).unwrap()).unwrap();
        assert_eq!(e.len(), 16);
        assert_eq!(e.tags.shape, Some((4, 4)));
        let q = e.points.last().unwrap();
        assert!(on_quadric(&e, q));
        // Q lies on the line through the Y1 points
        let f = e.field();
        let y1: Vec<&ProjPoint> = e.points[9..12].iter().collect();
        assert!(Flat::span(f, &y1).unwrap().contains(f, q));
        let k = extend_standard(&std_construction(4, Which::Y1Y2, &opts()).unwrap()).unwrap();
        assert_eq!(k.len(), 36);
        assert!(matches!(extend_standard(&k), Err(ConfigError::NotStandard(_))));
    }

    #[test]
    fn removing_nothing_is_identity() {
        let z = std_construction(4, Which::Y1, &opts()).unwrap();
        assert_eq!(remove_lines(&z, &[]).unwrap(), z);
    }

    #[test]
    fn removing_grid_rows_of_std6() {
        let z = std_construction(6, Which::Y1, &opts()).unwrap();
        let f = z.field();
        let row = |i: usize| {
            let pts: Vec<&ProjPoint> = z.points[6 * i..6 * i + 2].iter().collect();
            Flat::span(f, &pts).unwrap()
        };
        let two = remove_lines(&z, &[row(0), row(1)]).unwrap();
        assert_eq!(two.len(), 30);
        assert_eq!(two.tags.shape, Some((5, 6)));
        let three = remove_lines(&z, &[row(0), row(1), row(2)]).unwrap();
        assert_eq!(three.len(), 24);
        assert_eq!(three.tags.shape, Some((4, 6)));
    }

    #[test]
    fn grid_rejects_repeats() {
        let spec = opts().field_spec(&[]).unwrap();
        let f = spec.field;
        let a = vec![ProjPoint::from_i64(f, &[1, 0]).unwrap(), ProjPoint::from_i64(f, &[2, 0]).unwrap()];
        let b = vec![ProjPoint::from_i64(f, &[1, 1]).unwrap()];
        assert!(matches!(grid("g", spec, &a, &b), Err(ConfigError::DuplicateParams)));
    }

    #[test]
    fn roots_grid_shape() {
        let g = roots_grid(3, 5, &opts()).unwrap();
        assert_eq!(g.len(), 15);
        assert!(g.points.iter().all(|p| on_quadric(&g, p)));
        assert_eq!(span_dim(g.field(), &g.points).unwrap(), 3);
    }

    #[test]
    fn skeleton_counts() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(skeleton(f, 3, SkeletonKind::Lines).flats.len(), 6);
        assert_eq!(skeleton(f, 5, SkeletonKind::Lines).flats.len(), 15);
        let c2 = skeleton(f, 4, SkeletonKind::Codim2);
        assert_eq!(c2.flats.len(), 10);
        assert_eq!(c2.flat_dim(), 2);
    }

    #[test]
    fn over_prime_rebuilds() {
        let z = std_construction(4, Which::Y1, &opts()).unwrap();
        let p = crate::field::choose_prime(&[crate::field::SymbolConstraint::Order(4)], 1_000_000).unwrap();
        let other = z.over_prime(p).unwrap();
        assert_eq!(other.prime(), p);
        assert_eq!(other.len(), z.len());
        assert_eq!(other.exprs, z.exprs);
    }
}
