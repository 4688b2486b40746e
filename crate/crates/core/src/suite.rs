//! Named acceptance groups, each a list of pass/fail checks with a JSON payload.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::combinat::{self, line_census, lines_of, plane_census, weak_comb_equivalent, CombinatError, Equivalence};
use crate::configs::{self, extend_standard, named, remove_lines, roots_grid, skeleton, std_construction, BuildOptions, ConfigError, Configuration, SkeletonKind, Tags, Which};
use crate::field::{Fe, FieldError, FieldSpec, PrimeField, Symbol};
use crate::geproci::{cbp_ambient, detect_grid, geprocb, is_ci222_p4, is_geproci, remembers, GeprociError, GridShape, Verdict};
use crate::ks::{self, KsError};
use crate::polyideal::{exp_factorial, ideal_dim_points, macaulay_matrix, weddle_interp_matrix, MonomialBasis, PolyError};
use crate::projgeom::{cross_ratio, harmonic_conjugate, span_dim, Flat, GeomError, ProjPoint};
use crate::unexpected::{self, lines_skeleton_cubic_cones, skeleton_dims, skeleton_f, Support, UnexpError};
use crate::util::binom;
use crate::weddle::{random_point_on_line, verify_reducible_weddle, weddle_degree, weddle_member, WeddleContext, WeddleDegree, WeddleError};

pub const DEFAULT_SEED: u64 = 1;
const TRIALS: usize = 3;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite group `{0}`")]
    UnknownGroup(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geproci(#[from] GeprociError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Weddle(#[from] WeddleError),
    #[error(transparent)]
    Unexpected(#[from] UnexpError),
    #[error(transparent)]
    Ks(#[from] KsError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error("no {0} found")]
    Missing(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub id: usize,
    pub group: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Group names in criterion order.
pub const GROUPS: [&str; 13] = [
    "geproci",
    "grids",
    "census",
    "equiv",
    "weddle",
    "unexpected",
    "oracle",
    "cbp",
    "ci222",
    "memory",
    "ks",
    "harmonic",
    "determinism",
];

pub fn run_group(name: &str, seed: u64) -> Result<GroupReport, SuiteError> {
    let id = GROUPS.iter().position(|g| *g == name).ok_or_else(|| SuiteError::UnknownGroup(name.into()))? + 1;
    let mut out = Checks::default();
    match name {
        "geproci" => geproci_group(&mut out, seed),
        "grids" => grids_group(&mut out),
        "census" => census_group(&mut out),
        "equiv" => equiv_group(&mut out),
        "weddle" => weddle_group(&mut out, seed),
        "unexpected" => unexpected_group(&mut out, seed),
        "oracle" => oracle_group(&mut out, seed),
        "cbp" => cbp_group(&mut out, seed),
        "ci222" => ci222_group(&mut out, seed),
        "memory" => memory_group(&mut out, seed),
        "ks" => ks_group(&mut out),
        "harmonic" => harmonic_group(&mut out, seed),
        _ => determinism_group(&mut out, seed),
    }
    Ok(GroupReport { id, group: name.to_string(), seed, checks: out.0 })
}

/// Run every group on its own thread.
pub fn run_all(seed: u64) -> Vec<GroupReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = GROUPS.iter().map(|g| s.spawn(move || run_group(g, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked").expect("known group")).collect()
    })
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    /// Record a check; an error becomes a failed check carrying the message.
    fn add(&mut self, name: impl Into<String>, body: impl FnOnce() -> Result<(bool, Value), SuiteError>) {
        let (passed, value) = body().unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
        self.0.push(Check { name: name.into(), passed, value });
    }
}

fn opts() -> BuildOptions {
    BuildOptions::default()
}

/// The grid rows of `std(6, Y1)` kept in the three `(5,6)` sets, each with the line `Y1`.
const FIVE_SIX_ROWS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 1, 3, 4], [0, 2, 3, 4]];

pub fn five_six_sets() -> Result<[Configuration; 3], SuiteError> {
    let base = std_construction(6, Which::Y1, &opts())?;
    let build = |k: usize| -> Result<Configuration, SuiteError> {
        let mut idx: Vec<usize> = FIVE_SIX_ROWS[k].iter().flat_map(|&i| 6 * i..6 * i + 6).collect();
        idx.extend(36..42);
        Ok(base.subset(&format!("z{}", k + 1), &idx, Tags::shape(5, 6))?)
    };
    Ok([build(0)?, build(1)?, build(2)?])
}

/// `std(6, Y1)` with its first `rows` grid rows removed.
fn std6_minus_rows(rows: usize) -> Result<Configuration, SuiteError> {
    let z = std_construction(6, Which::Y1, &opts())?;
    let f = z.field();
    let lines = (0..rows)
        .map(|i| Flat::span(f, &[&z.points[6 * i], &z.points[6 * i + 1]]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(remove_lines(&z, &lines)?)
}

fn geproci_corpus() -> Result<Vec<(Configuration, usize, usize)>, SuiteError> {
    let o = opts();
    let mut v = vec![(named("d4", &o)?, 3, 4), (named("f4", &o)?, 4, 6)];
    for n in 3..=6 {
        v.push((std_construction(n, Which::Y1, &o)?, n, n + 1));
        v.push((std_construction(n, Which::Y2, &o)?, n, n + 1));
    }
    for n in [4, 6] {
        v.push((std_construction(n, Which::Y1Y2, &o)?, n, n + 2));
    }
    v.push((std6_minus_rows(2)?, 5, 6));
    v.push((std6_minus_rows(3)?, 4, 6));
    v.push((extend_standard(&std_construction(3, Which::Y1, &o)?)?, 4, 4));
    v.push((extend_standard(&std_construction(4, Which::Y1Y2, &o)?)?, 6, 6));
    for (label, a, b) in [("klein", 6, 10), ("penrose", 5, 8), ("half-penrose", 4, 5), ("h4", 6, 10), ("pts120", 10, 12)] {
        v.push((named(label, &o)?, a, b));
    }
    Ok(v)
}

fn geproci_group(out: &mut Checks, seed: u64) {
    let corpus = match geproci_corpus() {
        Ok(c) => c,
        Err(e) => return out.add("corpus", || Err(e)),
    };
    for (z, a, b) in corpus {
        out.add(format!("{} is ({a},{b})-geproci", z.label), || {
            let d = is_geproci(&z, a, b, TRIALS, seed)?;
            Ok((d.verdict == Verdict::Yes, json!({ "verdict": d.verdict, "prime": z.prime(), "points": z.len(), "reason": d.reason })))
        });
    }
}

fn shape_name(g: &GridShape) -> Value {
    match g {
        GridShape::Grid { a, b, .. } => json!({ "kind": "grid", "a": a, "b": b }),
        GridShape::HalfGrid { points_per_line, lines } => json!({ "kind": "half-grid", "points_per_line": points_per_line, "lines": lines.len() }),
        GridShape::Neither => json!({ "kind": "neither" }),
    }
}

fn grids_group(out: &mut Checks) {
    for (a, b) in [(3, 4), (4, 5), (2, 6)] {
        out.add(format!("grid({a},{b}) is a grid"), || {
            let g = detect_grid(&roots_grid(a, b, &opts())?, None)?;
            Ok((matches!(g, GridShape::Grid { a: x, b: y, .. } if (x, y) == (a, b)), shape_name(&g)))
        });
    }
    for label in ["d4", "f4", "klein"] {
        out.add(format!("{label} is a half grid"), || {
            let g = detect_grid(&named(label, &opts())?, None)?;
            Ok((matches!(g, GridShape::HalfGrid { .. }), shape_name(&g)))
        });
    }
    for label in ["penrose", "h4", "pts120"] {
        out.add(format!("{label} is neither"), || {
            let g = detect_grid(&named(label, &opts())?, None)?;
            Ok((g == GridShape::Neither, shape_name(&g)))
        });
    }
}

fn histogram_value(h: &BTreeMap<usize, usize>) -> Value {
    json!(h.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>())
}

fn expect_lines(out: &mut Checks, name: &str, z: &Configuration, expected: &[(usize, usize)]) {
    out.add(format!("{name} line census"), || {
        let c = line_census(z.field(), &z.points);
        Ok((c.histogram == expected.iter().copied().collect(), histogram_value(&c.histogram)))
    });
}

fn census_group(out: &mut Checks) {
    let o = opts();
    let (d4, f4, penrose, half) = match (|| -> Result<_, SuiteError> {
        Ok((named("d4", &o)?, named("f4", &o)?, named("penrose", &o)?, named("half-penrose", &o)?))
    })() {
        Ok(v) => v,
        Err(e) => return out.add("build", || Err(e)),
    };
    expect_lines(out, "d4", &d4, &[(2, 18), (3, 16)]);
    out.add("d4 has 12 six-point planes", || {
        let c = plane_census(d4.field(), &d4.points)?;
        Ok((c.count(6) == 12, histogram_value(&c.histogram)))
    });
    expect_lines(out, "f4", &f4, &[(2, 60), (3, 32), (4, 18)]);
    expect_lines(out, "penrose", &penrose, &[(2, 240), (4, 90)]);
    out.add("penrose has 330 lines", || {
        let c = line_census(penrose.field(), &penrose.points);
        Ok((c.total() == 330, json!(c.total())))
    });
    out.add("half-penrose has 10 four-point lines and no five-point line", || {
        let c = line_census(half.field(), &half.points);
        Ok((c.count(4) == 10 && c.histogram.keys().all(|&k| k < 5), histogram_value(&c.histogram)))
    });
    let planes: [[(usize, usize); 4]; 3] = [
        [(3, 366), (4, 168), (5, 30), (10, 30)],
        [(3, 408), (4, 192), (5, 18), (10, 30)],
        [(3, 324), (4, 144), (5, 42), (10, 30)],
    ];
    match five_six_sets() {
        Ok(zs) => {
            for (k, z) in zs.iter().enumerate() {
                expect_lines(out, &z.label, z, &[(2, 216), (3, 36), (4, 6), (6, 5)]);
                out.add(format!("{} plane census", z.label), || {
                    let c = plane_census(z.field(), &z.points)?;
                    Ok((c.histogram == planes[k].iter().copied().collect(), histogram_value(&c.histogram)))
                });
            }
        }
        Err(e) => out.add("(5,6) sets", || Err(e)),
    }
}

/// A `(3,3)`-grid on a random smooth quadric through random rulings.
fn random_grid33(spec: FieldSpec, seed: u64) -> Result<Configuration, SuiteError> {
    let f = spec.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = |rng: &mut ChaCha8Rng| -> Vec<ProjPoint> {
        let mut v: Vec<ProjPoint> = Vec::new();
        while v.len() < 3 {
            let p = ProjPoint::random(f, 1, rng);
            if !v.contains(&p) {
                v.push(p);
            }
        }
        v
    };
    let (pa, pb) = (params(&mut rng), params(&mut rng));
    let g = configs::grid("grid-33", spec, &pa, &pb)?;
    let change = crate::linalg::Matrix::random(f, 4, 4, &mut rng);
    let pts = g
        .points
        .iter()
        .map(|p| ProjPoint::new(f, change.mul_vec(p.coords()).expect("4x4 on P^3")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Configuration::from_points("grid-33", g.spec.clone(), pts, g.tags.clone())?)
}

fn equiv_group(out: &mut Checks) {
    match five_six_sets() {
        Ok(zs) => {
            for (a, b) in [(0, 2), (0, 1), (1, 2)] {
                out.add(format!("{} and {} are distinguished", zs[a].label, zs[b].label), || {
                    let e = weak_comb_equivalent(&zs[a], &zs[b], 12)?;
                    let ok = matches!(&e, Equivalence::Distinguished { invariant } if invariant.contains("K_{3,3}") || invariant.contains("K_{1,3}"));
                    Ok((ok, serde_json::to_value(&e).unwrap_or(Value::Null)))
                });
            }
        }
        Err(e) => out.add("(5,6) sets", || Err(e)),
    }
    out.add("two (3,3)-grids are equivalent", || {
        let g1 = roots_grid(3, 3, &opts())?;
        let g2 = random_grid33(opts().field_spec(&[])?, 5)?;
        let e = weak_comb_equivalent(&g1, &g2, 16)?;
        Ok((matches!(e, Equivalence::Equivalent { .. }), serde_json::to_value(&e).unwrap_or(Value::Null)))
    });
    out.add("d4 with Brianchon points and a (3,3)-grid differ", || {
        let z = named("d4-brianchon", &opts())?;
        let grid = z.subset("grid", &(0..9).collect::<Vec<_>>(), Tags::shape(3, 3))?;
        let e = weak_comb_equivalent(&grid, &roots_grid(3, 3, &opts())?, 16)?;
        let b = combinat::brianchon_points(&grid)?;
        let named_b: Vec<&ProjPoint> = z.points[9..].iter().collect();
        let found = b.iter().any(|triple| triple.iter().all(|p| named_b.contains(&p)));
        Ok((matches!(e, Equivalence::Equivalent { .. }) && found, json!({ "grid": e, "brianchon_listed": found })))
    });
}

fn random_points(f: PrimeField, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<ProjPoint> {
    (0..k).map(|_| ProjPoint::random(f, n, rng)).collect()
}

/// Random points with every `n + 1` of them spanning `P^n`.
fn lgp_points(f: PrimeField, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<ProjPoint> {
    loop {
        let pts = random_points(f, n, k, rng);
        let ok = crate::util::subsets(k, (n + 1).min(k)).iter().all(|s| {
            let sub: Vec<ProjPoint> = s.iter().map(|&i| pts[i].clone()).collect();
            span_dim(f, &sub).map(|d| d == sub.len() - 1).unwrap_or(false)
        });
        if ok {
            return pts;
        }
    }
}

fn degree_value(d: &WeddleDegree) -> Value {
    match d {
        WeddleDegree::Degree(k) => json!(k),
        WeddleDegree::IdenticallyZero => json!("identically zero"),
    }
}

fn weddle_group(out: &mut Checks, seed: u64) {
    let f = match opts().field_spec(&[]) {
        Ok(s) => s.field,
        Err(e) => return out.add("field", || Err(e.into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = [("6 points in P^3", 3, 6, 2, 4), ("10 points in P^4", 4, 10, 2, 5), ("10 points in P^3", 3, 10, 3, 10)];
    for (name, n, k, d, expected) in cases {
        let z = lgp_points(f, n, k, &mut rng);
        out.add(format!("weddle degree of {name}, d = {d}"), || {
            let ctx = WeddleContext::new(f, &z, d, seed)?;
            let deg = weddle_degree(&ctx, seed)?;
            Ok((deg == WeddleDegree::Degree(expected), degree_value(&deg)))
        });
    }
    out.add("weddle locus of a (2,3)-grid", || {
        let g = roots_grid(2, 3, &opts())?;
        let ctx = WeddleContext::new(g.field(), &g.points, 2, seed)?;
        let deg = weddle_degree(&ctx, seed)?;
        Ok((deg == WeddleDegree::IdenticallyZero, degree_value(&deg)))
    });
    let abc = [f.random_nonzero(&mut rng), f.random_nonzero(&mut rng), f.random_nonzero(&mut rng)];
    out.add("reducible weddle fixture", || {
        let r = verify_reducible_weddle(f, abc, 200, seed)?;
        Ok((r.passed(), serde_json::to_value(&r).unwrap_or(Value::Null)))
    });
    let five = lgp_points(f, 3, 5, &mut rng);
    let seven = lgp_points(f, 3, 7, &mut rng);
    let mut probe_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    out.add("membership for 5 points: exactly the pair lines", || {
        let ctx = WeddleContext::new(f, &five, 2, seed)?;
        let mut on_lines = 0;
        for s in crate::util::subsets(5, 2) {
            if weddle_member(&ctx, &random_point_on_line(f, &five[s[0]], &five[s[1]], &mut probe_rng))? {
                on_lines += 1;
            }
        }
        let mut off = 0;
        for _ in 0..20 {
            if weddle_member(&ctx, &ProjPoint::random(f, 3, &mut probe_rng))? {
                off += 1;
            }
        }
        Ok((on_lines == 10 && off == 0, json!({ "pair_lines_in_locus": on_lines, "random_probes_in_locus": off })))
    });
    out.add("membership for 7 points: no pair line", || {
        let ctx = WeddleContext::new(f, &seven, 2, seed)?;
        let mut hits = 0;
        for s in crate::util::subsets(7, 2) {
            if weddle_member(&ctx, &random_point_on_line(f, &seven[s[0]], &seven[s[1]], &mut probe_rng))? {
                hits += 1;
            }
        }
        Ok((hits == 0, json!({ "pair_lines_in_locus": hits })))
    });
}

fn report_value(r: &unexpected::UnexpReport) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

fn unexpected_group(out: &mut Checks, seed: u64) {
    let f = match opts().field_spec(&[]) {
        Ok(s) => s.field,
        Err(e) => return out.add("field", || Err(e.into())),
    };
    for (n, stated) in [(4usize, 0i64), (5, 5), (6, 15)] {
        out.add(format!("cubic cones on the line skeleton of P^{n}"), || {
            let s = skeleton(f, n, SkeletonKind::Lines);
            let got = unexpected::adim(f, Support::Flats(&s), 3, 3, TRIALS, seed)? as i64;
            let formula = lines_skeleton_cubic_cones(n);
            Ok((got == formula && got == stated, json!({ "computed": got, "formula": formula, "stated": stated })))
        });
    }
    for (n, m) in [(3usize, 6usize), (3, 8), (4, 10)] {
        out.add(format!("codim-2 skeleton of P^{n} at m = {m}"), || {
            let s = skeleton(f, n, SkeletonKind::Codim2);
            let (idim_formula, cone_formula) = skeleton_dims(n, m);
            let idim = unexpected::ideal_dim(f, Support::Flats(&s), m, TRIALS, seed)? as i64;
            let adim = unexpected::adim(f, Support::Flats(&s), m, m, TRIALS, seed)? as i64;
            let vdim = idim - binom(m + n - 1, n) as i64;
            let fv = skeleton_f(m, n);
            let unexpected_now = adim > vdim.max(0);
            let ok = idim == idim_formula && adim == cone_formula && adim - vdim == fv && (fv > 0) == unexpected_now;
            Ok((ok, json!({ "ideal_dim": idim, "adim": adim, "vdim": vdim, "f": fv })))
        });
    }
    out.add("closed forms of f for m <= 20", || {
        let mut bad = Vec::new();
        for (n, expect) in [(2usize, (|_m: i64| 0) as fn(i64) -> i64), (3, |_m| 7), (4, |m| 25 * m - 80)] {
            let r = binom(n + 1, 2) as usize;
            for m in r..=20 {
                if skeleton_f(m, n) != expect(m as i64) {
                    bad.push((n, m, skeleton_f(m, n)));
                }
            }
        }
        Ok((bad.is_empty(), json!(bad)))
    });
    let predicate_cases: [(&str, usize, bool); 7] =
        [("d4", 3, true), ("d4", 4, true), ("grid-2-4", 4, false), ("f4", 4, true), ("f4", 6, true), ("penrose", 5, true), ("penrose", 8, true)];
    for (label, t, expected) in predicate_cases {
        out.add(format!("C({t}) for {label} is {expected}"), || {
            let z = if label == "grid-2-4" { roots_grid(2, 4, &opts())? } else { named(label, &opts())? };
            let r = unexpected::c_predicate(z.field(), Support::Points(&z.points), t, TRIALS, seed)?;
            Ok((r.unexpected == expected, report_value(&r)))
        });
    }
    for (label, t, expected) in [("f4", 4usize, 12usize), ("penrose", 5, 20)] {
        out.add(format!("dim [I({label})]_{t} = {expected}"), || {
            let z = named(label, &opts())?;
            let got = ideal_dim_points(z.field(), &z.points, z.ambient_dim + 1, t);
            Ok((got == expected, json!(got)))
        });
    }
    let tables: [(&str, Vec<(usize, usize)>, Vec<usize>); 5] = [
        ("ks13", (5..=7).map(|d| (d, d - 1)).collect(), vec![0, 1, 2]),
        ("ks21", (7..=13).map(|d| (d, d - 1)).collect(), (0..=6).collect()),
        ("e7", vec![(4, 4)], vec![64]),
        ("e8", vec![(4, 4), (5, 5)], vec![99, 343]),
        ("rays300", (22..=25).map(|m| (m, m)).collect(), vec![2, 6, 28, 52]),
    ];
    for (label, degrees, expected) in tables {
        out.add(format!("adim table of {label}"), || {
            let z = named(label, &opts())?;
            let mut got = Vec::new();
            for &(t, m) in &degrees {
                got.push(unexpected::adim(z.field(), Support::Points(&z.points), t, m, TRIALS, seed)?);
            }
            Ok((got == expected, json!({ "degrees": degrees, "adim": got })))
        });
    }
    for n in 2..=7 {
        out.add(format!("skeleton form in P^{n}"), || {
            let r = unexpected::verify_skeleton_t(f, n, seed)?;
            Ok((r.passed(), serde_json::to_value(&r).unwrap_or(Value::Null)))
        });
    }
}

fn oracle_group(out: &mut Checks, seed: u64) {
    let f = match opts().field_spec(&[]) {
        Ok(s) => s.field,
        Err(e) => return out.add("field", || Err(e.into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.add("interpolation and Macaulay ranks agree on 50 instances", || {
        let mut mismatches = Vec::new();
        for trial in 0..50 {
            let d = 1 + trial % 4;
            let k = rng.gen_range(1..=12usize.min(binom(d + 3, 3) as usize));
            let raw: Vec<Vec<Fe>> = (0..k).map(|_| (0..4).map(|_| f.random(&mut rng)).collect()).collect();
            let q: Vec<Fe> = (0..4).map(|_| f.random(&mut rng)).collect();
            let l = weddle_interp_matrix(f, &raw, d, &q)?.rank();
            let t = macaulay_matrix(f, &raw, d, &q)?.rank();
            if l != t {
                mismatches.push((trial, l, t));
            }
        }
        Ok((mismatches.is_empty(), json!({ "mismatches": mismatches })))
    });
    out.add("a 4x4 minor pair scales by the factorial factor", || {
        let d = 3;
        let basis = MonomialBasis::new(4, d);
        let d_fact = f.from_u64(6);
        for _ in 0..20 {
            let raw: Vec<Vec<Fe>> = (0..6).map(|_| (0..4).map(|_| f.random(&mut rng)).collect()).collect();
            let q: Vec<Fe> = (0..4).map(|_| f.random(&mut rng)).collect();
            let n = weddle_interp_matrix(f, &raw, d, &q)?.transpose();
            let t = macaulay_matrix(f, &raw, d, &q)?;
            let mut rows: Vec<usize> = (0..basis.len()).collect();
            let mut cols: Vec<usize> = (0..t.cols()).collect();
            shuffle(&mut rows, &mut rng);
            shuffle(&mut cols, &mut rng);
            let (rows, cols) = (&rows[..4], &cols[..4]);
            let minor_t = t.select_rows(rows).select_cols(cols).det()?;
            if minor_t.is_zero() {
                continue;
            }
            let minor_n = n.select_rows(rows).select_cols(cols).det()?;
            let point_cols = cols.iter().filter(|&&c| c < raw.len()).count();
            let prod_e = rows.iter().fold(f.one(), |acc, &i| f.mul(acc, exp_factorial(f, &basis.exps()[i])));
            let factor = f.div(prod_e, f.pow(d_fact, point_cols as u64)).expect("nonzero");
            let ok = minor_n == f.mul(factor, minor_t);
            return Ok((ok, json!({ "rows": rows, "cols": cols, "point_columns": point_cols })));
        }
        Err(SuiteError::Missing("nonzero 4x4 minor"))
    });
}

fn shuffle<T>(v: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..v.len()).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
}

fn cbp_group(out: &mut Checks, seed: u64) {
    match geproci_corpus() {
        Ok(corpus) => {
            for (z, _, _) in corpus {
                out.add(format!("{} is geproCB", z.label), || {
                    let d = geprocb(&z, TRIALS, seed)?;
                    Ok((d.is_yes(), json!({ "verdict": d.verdict })))
                });
            }
        }
        Err(e) => out.add("corpus", || Err(e)),
    }
    out.add("10 points on a quadric plus one point: geproCB but not CB in P^3", || {
        let z = quadric_plus_point(seed)?;
        let d = geprocb(&z, TRIALS, seed)?;
        let ambient = cbp_ambient(&z);
        Ok((d.is_yes() && !ambient, json!({ "geprocb": d.verdict, "cbp_ambient": ambient })))
    });
}

/// Ten random points of `xw = yz` and one random point off it.
pub fn quadric_plus_point(seed: u64) -> Result<Configuration, SuiteError> {
    let spec = opts().field_spec(&[])?;
    let f = spec.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    while pts.len() < 10 {
        let p = crate::projgeom::segre(f, &ProjPoint::random(f, 1, &mut rng), &ProjPoint::random(f, 1, &mut rng))?;
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts.push(ProjPoint::random(f, 3, &mut rng));
    Ok(Configuration::from_points("quadric-plus-point", spec, pts, Tags::default())?)
}

fn ci222_group(out: &mut Checks, seed: u64) {
    let spec = match opts().field_spec(&[]) {
        Ok(s) => s,
        Err(e) => return out.add("field", || Err(e.into())),
    };
    let f = spec.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..20 {
        let forced = k % 2 == 1;
        let pts = if forced { lgp_points(f, 4, 8, &mut rng) } else { random_points(f, 4, 8, &mut rng) };
        let kind = if forced { "general-position" } else { "uniform" };
        out.add(format!("{kind} 8 points #{k} are not (2,2,2)"), || {
            let z = Configuration::from_points("p4-8", spec.clone(), pts, Tags::default())?;
            let d = is_ci222_p4(&z, TRIALS, seed + k as u64)?;
            Ok((d.verdict == Verdict::No, json!({ "verdict": d.verdict })))
        });
    }
}

/// A `(k,k)`-grid of `z` on a quadric: two families of `k` pairwise skew `k`-point lines, every pair meeting in `z`.
///
/// Returns `grid[i][j]`, the index of the point on the `i`-th line of the first family and the `j`-th of the second.
pub fn square_grid(z: &Configuration, k: usize) -> Option<Vec<Vec<usize>>> {
    let f = z.field();
    let lines: Vec<Vec<usize>> = lines_of(f, &z.points).into_iter().filter(|l| l.len() == k).collect();
    let meet = |a: &[usize], b: &[usize]| a.iter().filter(|i| b.contains(i)).count();
    let skew = |a: &[usize], b: &[usize]| {
        let pts: Vec<ProjPoint> = [a[0], a[1], b[0], b[1]].iter().map(|&i| z.points[i].clone()).collect();
        span_dim(f, &pts).map(|d| d == 3).unwrap_or(false)
    };
    let n = lines.len();
    let mut chosen: Vec<usize> = Vec::new();
    fn families(
        n: usize,
        k: usize,
        from: usize,
        chosen: &mut Vec<usize>,
        ok: &dyn Fn(usize, usize) -> bool,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == k {
            return found(chosen);
        }
        for v in from..n {
            if chosen.iter().all(|&u| ok(u, v)) {
                chosen.push(v);
                if families(n, k, v + 1, chosen, ok, found) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let ok = |u: usize, v: usize| meet(&lines[u], &lines[v]) == 0 && skew(&lines[u], &lines[v]);
    let mut result = None;
    families(n, k, 0, &mut chosen, &ok, &mut |first: &[usize]| {
        let partners: Vec<usize> = (0..n).filter(|&v| first.iter().all(|&u| meet(&lines[u], &lines[v]) == 1)).collect();
        if partners.len() < k {
            return false;
        }
        let mut second = Vec::new();
        let sub_ok = |u: usize, v: usize| ok(partners[u], partners[v]);
        let mut grid = None;
        families(partners.len(), k, 0, &mut second, &sub_ok, &mut |s: &[usize]| {
            let g: Vec<Vec<usize>> = first
                .iter()
                .map(|&a| s.iter().map(|&b| *lines[a].iter().find(|i| lines[partners[b]].contains(i)).expect("meet")).collect())
                .collect();
            grid = Some(g);
            true
        });
        result = grid;
        result.is_some()
    });
    result
}

/// The set of `binom(k+1, 2) + k` points of a `(k,k)`-subgrid plus one point off it that should remember `z`.
pub fn memory_subset(z: &Configuration, k: usize) -> Option<Vec<usize>> {
    let grid = square_grid(z, k)?;
    let mut w: Vec<usize> = Vec::new();
    for (i, row) in grid.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if (i + 1) + (j + 1) <= k + 2 {
                w.push(p);
            }
        }
    }
    let on_grid: Vec<usize> = grid.iter().flatten().copied().collect();
    w.push((0..z.len()).find(|i| !on_grid.contains(i))?);
    Some(w)
}

fn memory_group(out: &mut Checks, seed: u64) {
    out.add("std(4,Y1) remembers the F4 model at cones of degree 4", || {
        let z = std_construction(4, Which::Y1Y2, &opts())?;
        let w = z.subset("std-4-y1", &(0..20).collect::<Vec<_>>(), Tags::default())?;
        let r = remembers(&w, &z, 4, TRIALS, 0, seed)?;
        Ok((r.decision.is_yes(), json!({ "verdict": r.decision.verdict })))
    });
    out.add("27 points remember klein at cones of degree 6", || {
        let z = named("klein", &opts())?;
        let idx = memory_subset(&z, 6).ok_or(SuiteError::Missing("(6,6)-subgrid on a quadric"))?;
        let w = z.subset("klein-memory", &idx, Tags::default())?;
        let r = remembers(&w, &z, 6, TRIALS, 50, seed)?;
        let ok = w.len() == 27 && r.decision.is_yes() && r.probes_failing == 50;
        Ok((ok, json!({ "w": idx, "verdict": r.decision.verdict, "probes": r.probes, "probes_failing": r.probes_failing })))
    });
}

fn ks_group(out: &mut Checks) {
    for label in ["ks13", "ks21", "peres33", "penrose"] {
        out.add(format!("{label} is a KS set"), || {
            let start = Instant::now();
            let g = ks::ortho_graph(&named(label, &opts())?)?;
            let verdict = ks::is_ks_set(&g);
            let fast = start.elapsed().as_secs() < 30;
            Ok((verdict && fast && g.disagreements == 0, json!({ "ks": verdict, "bases": g.bases.len(), "edges": g.edges.len(), "under_30s": fast })))
        });
    }
    out.add("one orthonormal basis is not a KS set", || {
        let spec = opts().field_spec(&[])?;
        let pts = (0..3).map(|i| ProjPoint::coordinate(2, i)).collect();
        let x = Configuration::from_points("basis", spec, pts, Tags::default())?;
        let g = ks::ortho_graph_pair(&x, &x)?;
        let verdict = ks::is_ks_set(&g);
        Ok((!verdict && g.bases.len() == 1, json!({ "ks": verdict })))
    });
}

fn harmonic_group(out: &mut Checks, seed: u64) {
    let f = match opts().field_spec(&[]) {
        Ok(s) => s.field,
        Err(e) => return out.add("field", || Err(e.into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = ProjPoint::random(f, 3, &mut rng);
    let b = ProjPoint::random(f, 3, &mut rng);
    let c = random_point_on_line(f, &a, &b, &mut rng);
    out.add("harmonic conjugate round trip", || {
        let d = harmonic_conjugate(f, &a, &b, &c)?;
        let back = harmonic_conjugate(f, &a, &b, &d)?;
        let cr = cross_ratio(f, &a, &b, &c, &d)?;
        Ok((back == c && cr == f.neg(f.one()), json!({ "round_trip": back == c })))
    });
    out.add("exactly 8 harmonic orderings", || {
        let d = harmonic_conjugate(f, &a, &b, &c)?;
        let quad = [&a, &b, &c, &d];
        let mut harmonic = 0;
        for perm in permutations4() {
            let [w, x, y, z] = perm.map(|i| quad[i]);
            if cross_ratio(f, w, x, y, z)? == f.neg(f.one()) {
                harmonic += 1;
            }
        }
        Ok((harmonic == 8, json!(harmonic)))
    });
    for n in [5u64, 7] {
        out.add(format!("cross ratio of consecutive {n}-th roots of unity"), || {
            let spec = FieldSpec::choose(&[Symbol::order("u", n)], crate::field::DEFAULT_MIN_BOUND, seed)?;
            let f = spec.field;
            let g = spec.get("u")?;
            let mut failures = 0;
            for e in (1..n).filter(|e| gcd(*e, n) == 1) {
                let u = f.pow(g, e);
                let expected = f.div(f.pow(f.add(u, f.one()), 2), f.add(f.add(f.mul(u, u), u), f.one())).expect("u^2+u+1 != 0");
                for t in 0..n {
                    let pt = |s: u64| ProjPoint::new(f, vec![f.one(), f.pow(u, t + s)]);
                    if cross_ratio(f, &pt(0)?, &pt(1)?, &pt(2)?, &pt(3)?)? != expected {
                        failures += 1;
                    }
                }
            }
            Ok((failures == 0, json!({ "prime": f.modulus(), "failures": failures })))
        });
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

fn determinism_group(out: &mut Checks, seed: u64) {
    for group in ["census", "weddle", "unexpected", "oracle", "memory", "ks", "harmonic", "equiv", "ci222"] {
        out.add(format!("{group} payload is reproducible"), || {
            let first = serde_json::to_string(&run_group(group, seed)?).expect("serializable");
            let second = serde_json::to_string(&run_group(group, seed)?).expect("serializable");
            Ok((first == second, json!({ "bytes": first.len() })))
        });
    }
    out.add("geproci decisions are reproducible", || {
        let z = named("d4", &opts())?;
        let a = serde_json::to_string(&is_geproci(&z, 3, 4, TRIALS, seed)?).expect("serializable");
        let b = serde_json::to_string(&is_geproci(&z, 3, 4, TRIALS, seed)?).expect("serializable");
        Ok((a == b, json!({ "bytes": a.len() })))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_group_is_an_error() {
        assert!(matches!(run_group("nope", 1), Err(SuiteError::UnknownGroup(_))));
    }

    #[test]
    fn permutations_are_all_distinct() {
        let p = permutations4();
        assert_eq!(p.len(), 24);
        let set: std::collections::BTreeSet<_> = p.iter().collect();
        assert_eq!(set.len(), 24);
    }

    #[test]
    fn memory_subset_of_klein_has_27_points() {
        let z = named("klein", &opts()).unwrap();
        let w = memory_subset(&z, 6).unwrap();
        assert_eq!(w.len(), 27);
        let grid = square_grid(&z, 6).unwrap();
        let pts: Vec<ProjPoint> = grid.iter().flatten().map(|&i| z.points[i].clone()).collect();
        assert_eq!(ideal_dim_points(z.field(), &pts, 4, 2), 1);
    }
}
