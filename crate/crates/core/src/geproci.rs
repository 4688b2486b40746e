//! Randomized certificates for properties of general projections.
//!
//! A "trial" samples a vertex `P` uniformly over `F_p`, projects, and does
//! exact linear algebra on the image. Kernel dimensions can only jump up on
//! a closed set of vertices, so a dimension that is too small at a random
//! vertex is a certificate of failure for the general vertex. Dimensions that
//! match give a positive certificate with error at most `D/p` per trial.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util::{stream_rng, Stream};
use crate::combinat::lines_of;
use crate::configs::Configuration;
use crate::field::PrimeField;
use crate::linalg::Matrix;
use crate::polyideal::{coprime_plane_curves, eval_matrix, generated_to_next_degree, hilbert_function, ideal_dim_points, monomial_forms, Form, MonomialBasis, PolyError};
use crate::projgeom::{project_from, span_dim, GeomError, ProjPoint};
use crate::util::binom;

const MAX_VERTEX_RESAMPLES: usize = 200;
const COMPLEMENT_CANDIDATES: usize = 5;

#[derive(Debug, Error)]
pub enum GeprociError {
    #[error("expected {expected} points, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("expected points of P^{expected}, got P^{got}")]
    WrongAmbient { expected: usize, got: usize },
    #[error("the subset is not contained in the configuration (point {0})")]
    NotSubset(usize),
    #[error("no admissible projection vertex found after {0} samples")]
    NoVertex(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub prime: u64,
    pub seed: u64,
    pub vertices: Vec<String>,
    /// Kernel dimensions observed at each vertex, in the order the test computes them.
    pub kernel_dims: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub trials: usize,
    pub witness: Option<Witness>,
    pub reason: String,
}

impl Decision {
    fn degenerate(trials: usize, span: usize, ambient: usize) -> Self {
        Decision {
            verdict: Verdict::Degenerate,
            trials,
            witness: None,
            reason: format!("points span a P^{span} inside P^{ambient}"),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

enum TrialOutcome {
    Certified,
    Obstructed(String),
    Unclear(String),
}

struct TrialRunner {
    field: PrimeField,
    rng: ChaCha8Rng,
    witness: Witness,
}

impl TrialRunner {
    fn new(field: PrimeField, seed: u64) -> Self {
        TrialRunner {
            field,
            rng: stream_rng(seed, Stream::Vertices),
            witness: Witness { prime: field.modulus(), seed, vertices: Vec::new(), kernel_dims: Vec::new() },
        }
    }

    /// Samples a vertex off `z` whose projection keeps the points distinct.
    fn project(&mut self, z: &[ProjPoint]) -> Result<(ProjPoint, Vec<ProjPoint>), GeprociError> {
        let n = z[0].ambient_dim();
        for _ in 0..MAX_VERTEX_RESAMPLES {
            let p = ProjPoint::random(self.field, n, &mut self.rng);
            match project_from(self.field, &p, z) {
                Ok(img) => {
                    self.witness.vertices.push(p.to_string());
                    return Ok((p, img));
                }
                Err(GeomError::VertexInZ(_)) | Err(GeomError::Collision(..)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        Err(GeprociError::NoVertex(MAX_VERTEX_RESAMPLES))
    }

    fn finish(self, trials: usize, outcomes: Vec<TrialOutcome>, what: &str) -> Decision {
        let mut verdict = Verdict::Yes;
        let mut reason = format!("{what} certified at {trials} random vertices");
        for (i, o) in outcomes.iter().enumerate() {
            match o {
                TrialOutcome::Certified => {}
                TrialOutcome::Obstructed(r) => {
                    verdict = Verdict::No;
                    reason = format!("trial {}: {r}", i + 1);
                    break;
                }
                TrialOutcome::Unclear(r) => {
                    if verdict == Verdict::Yes {
                        verdict = Verdict::Inconclusive;
                        reason = format!("trial {}: {r}", i + 1);
                    }
                }
            }
        }
        Decision { verdict, trials, witness: Some(self.witness), reason }
    }
}

fn check_ambient(z: &Configuration, expected: usize) -> Result<(), GeprociError> {
    if z.ambient_dim != expected {
        return Err(GeprociError::WrongAmbient { expected, got: z.ambient_dim });
    }
    Ok(())
}

/// Kernel of the degree-`t` evaluation matrix of plane points, as forms.
fn plane_kernel(field: PrimeField, pts: &[ProjPoint], t: usize) -> Vec<Form> {
    eval_matrix(field, pts, 3, t)
        .kernel_basis()
        .into_iter()
        .map(|coeffs| Form { nvars: 3, degree: t, coeffs })
        .collect()
}

/// Kernel vectors of degree `b` that extend the span of `F * (forms of degree b - a)`, chosen greedily.
fn complement_candidates(field: PrimeField, f: &Form, kernel_b: &[Form]) -> Vec<Form> {
    let b = kernel_b.first().map_or(f.degree, |g| g.degree);
    let cols = MonomialBasis::new(3, b).len();
    let mut span = Matrix::zeros(field, 0, cols);
    for m in monomial_forms(3, b - f.degree) {
        span.push_row(&f.mul(field, &m).coeffs);
    }
    let mut rank = span.rank();
    let mut out = Vec::new();
    for g in kernel_b {
        let mut trial = span.clone();
        trial.push_row(&g.coeffs);
        let r = trial.rank();
        if r > rank {
            out.push(g.clone());
            span = trial;
            rank = r;
            if out.len() == COMPLEMENT_CANDIDATES {
                break;
            }
        }
    }
    out
}

/// Tests whether the projection of `z` from a general point is a complete intersection of type `(a, b)`.
pub fn is_geproci(z: &Configuration, a: usize, b: usize, trials: usize, seed: u64) -> Result<Decision, GeprociError> {
    check_ambient(z, 3)?;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if z.len() != a * b {
        return Err(GeprociError::WrongCardinality { expected: a * b, got: z.len() });
    }
    let field = z.field();
    let span = span_dim(field, &z.points)?;
    if span < 3 {
        return Ok(Decision::degenerate(trials, span, 3));
    }
    let need_a = if a == b { 2 } else { 1 };
    let need_b = binom(b - a + 2, 2) as usize + 1;
    let mut runner = TrialRunner::new(field, seed);
    let mut outcomes = Vec::with_capacity(trials);
    for _ in 0..trials {
        let (_, img) = runner.project(&z.points)?;
        let ker_a = plane_kernel(field, &img, a);
        let mut dims = vec![ker_a.len()];
        let outcome = if ker_a.len() < need_a {
            too_few(a, ker_a.len(), need_a)
        } else if ker_a.len() > need_a {
            TrialOutcome::Unclear(format!("{} forms of degree {a}, expected {need_a}", ker_a.len()))
        } else if a == b {
            let mut rng = stream_rng(seed.wrapping_add(runner.witness.vertices.len() as u64), Stream::Cones);
            if coprime_plane_curves(field, &ker_a[0], &ker_a[1], &mut rng)? {
                TrialOutcome::Certified
            } else {
                TrialOutcome::Unclear("the pencil has a fixed component".into())
            }
        } else {
            let ker_b = plane_kernel(field, &img, b);
            dims.push(ker_b.len());
            if ker_b.len() < need_b {
                too_few(b, ker_b.len(), need_b)
            } else if ker_b.len() > need_b {
                TrialOutcome::Unclear(format!("{} forms of degree {b}, expected {need_b}", ker_b.len()))
            } else {
                let mut rng = stream_rng(seed.wrapping_add(runner.witness.vertices.len() as u64), Stream::Cones);
                let mut certified = false;
                for g in complement_candidates(field, &ker_a[0], &ker_b) {
                    if coprime_plane_curves(field, &ker_a[0], &g, &mut rng)? {
                        certified = true;
                        break;
                    }
                }
                if certified {
                    TrialOutcome::Certified
                } else {
                    TrialOutcome::Unclear("no coprime complement of degree b found".into())
                }
            }
        };
        runner.witness.kernel_dims.push(dims);
        outcomes.push(outcome);
    }
    Ok(runner.finish(trials, outcomes, &format!("complete intersection of type ({a},{b})")))
}

fn too_few(t: usize, got: usize, need: usize) -> TrialOutcome {
    TrialOutcome::Obstructed(format!("only {got} forms of degree {t} through the projection, need {need}"))
}

/// Outcome of [`detect_grid`]. Lines are given as sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridShape {
    Grid { a: usize, b: usize, lines_a: Vec<Vec<usize>>, lines_b: Vec<Vec<usize>> },
    HalfGrid { points_per_line: usize, lines: Vec<Vec<usize>> },
    Neither,
}

fn skew(field: PrimeField, z: &[ProjPoint], l1: &[usize], l2: &[usize]) -> bool {
    let pts = [z[l1[0]].clone(), z[l1[1]].clone(), z[l2[0]].clone(), z[l2[1]].clone()];
    span_dim(field, &pts).map(|d| d == 3).unwrap_or(false)
}

/// Partitions of `z` into pairwise skew lines carrying exactly `k` points each, up to `limit` of them.
fn skew_line_partitions(field: PrimeField, z: &[ProjPoint], lines: &[Vec<usize>], k: usize, limit: usize) -> Vec<Vec<usize>> {
    let candidates: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].len() == k).collect();
    if k == 0 || z.len() % k != 0 || candidates.len() < z.len() / k {
        return Vec::new();
    }
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); z.len()];
    for &c in &candidates {
        for &p in &lines[c] {
            through[p].push(c);
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used = vec![false; z.len()];
    partition_search(field, z, lines, &through, &mut used, &mut chosen, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn partition_search(
    field: PrimeField,
    z: &[ProjPoint],
    lines: &[Vec<usize>],
    through: &[Vec<usize>],
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(chosen.clone());
        return;
    };
    for &c in &through[first] {
        let l = &lines[c];
        if l.iter().any(|&p| used[p]) {
            continue;
        }
        if !chosen.iter().all(|&o| skew(field, z, &lines[o], l)) {
            continue;
        }
        for &p in l {
            used[p] = true;
        }
        chosen.push(c);
        partition_search(field, z, lines, through, used, chosen, out, limit);
        chosen.pop();
        for &p in l {
            used[p] = false;
        }
    }
}

fn full_incidence(lines: &[Vec<usize>], a_side: &[usize], b_side: &[usize]) -> bool {
    a_side.iter().all(|&x| {
        b_side.iter().all(|&y| {
            let sx: BTreeSet<usize> = lines[x].iter().copied().collect();
            lines[y].iter().filter(|p| sx.contains(p)).count() == 1
        })
    })
}

const PARTITION_LIMIT: usize = 256;

/// Classifies `z` as a grid, half grid or neither, for the shape `(a, b)`.
///
/// With `shape = None` the configuration's own shape tag is used, and if it
/// has none every factorization `|Z| = ab` with `2 <= a <= b` is tried.
pub fn detect_grid(z: &Configuration, shape: Option<(usize, usize)>) -> Result<GridShape, GeprociError> {
    check_ambient(z, 3)?;
    let field = z.field();
    let shapes: Vec<(usize, usize)> = match shape.or(z.tags.shape) {
        Some((a, b)) => vec![(a.min(b), a.max(b))],
        None => (2..=z.len()).filter(|a| z.len() % a == 0 && a * a <= z.len()).map(|a| (a, z.len() / a)).collect(),
    };
    let lines = lines_of(field, &z.points);
    let mut half = None;
    for (a, b) in shapes {
        if a * b != z.len() {
            continue;
        }
        // side_b: a lines of b points; side_a: b lines of a points
        let side_b = skew_line_partitions(field, &z.points, &lines, b, PARTITION_LIMIT);
        let side_a = if a == b { side_b.clone() } else { skew_line_partitions(field, &z.points, &lines, a, PARTITION_LIMIT) };
        for pb in &side_b {
            for pa in &side_a {
                if full_incidence(&lines, pb, pa) {
                    let take = |p: &[usize]| p.iter().map(|&i| lines[i].clone()).collect();
                    return Ok(GridShape::Grid { a, b, lines_a: take(pa), lines_b: take(pb) });
                }
            }
        }
        if half.is_none() {
            // a half grid side needs at least three points per line
            let side = side_b.first().filter(|_| b >= 3).map(|p| (b, p)).or_else(|| side_a.first().filter(|_| a >= 3).map(|p| (a, p)));
            if let Some((k, p)) = side {
                half = Some(GridShape::HalfGrid { points_per_line: k, lines: p.iter().map(|&i| lines[i].clone()).collect() });
            }
        }
    }
    Ok(half.unwrap_or(GridShape::Neither))
}

/// Tests whether the projection of 8 points of `P^4` from a general point is a complete intersection of three quadrics.
pub fn is_ci222_p4(z: &Configuration, trials: usize, seed: u64) -> Result<Decision, GeprociError> {
    check_ambient(z, 4)?;
    if z.len() != 8 {
        return Err(GeprociError::WrongCardinality { expected: 8, got: z.len() });
    }
    let field = z.field();
    let span = span_dim(field, &z.points)?;
    if span < 4 {
        return Ok(Decision::degenerate(trials, span, 4));
    }
    let mut runner = TrialRunner::new(field, seed);
    let mut outcomes = Vec::with_capacity(trials);
    for _ in 0..trials {
        let (_, img) = runner.project(&z.points)?;
        let hf: Vec<usize> = (0..=3).map(|t| hilbert_function(field, &img, 4, t)).collect();
        let quadrics = 10 - hf[2];
        runner.witness.kernel_dims.push(vec![quadrics, 20 - hf[3]]);
        let outcome = if hf != [1, 4, 7, 8] {
            if quadrics < 3 {
                TrialOutcome::Obstructed(format!("Hilbert function {hf:?} leaves {quadrics} quadrics, need 3"))
            } else {
                TrialOutcome::Unclear(format!("Hilbert function {hf:?} differs from (1, 4, 7, 8)"))
            }
        } else if !generated_to_next_degree(field, &img, 4, 2) {
            TrialOutcome::Unclear("the quadrics do not generate the cubics".into())
        } else {
            TrialOutcome::Certified
        };
        outcomes.push(outcome);
    }
    Ok(runner.finish(trials, outcomes, "complete intersection of type (2,2,2)"))
}

/// Hilbert function of the points up to the degree where it reaches their number.
fn saturating_hf(field: PrimeField, pts: &[ProjPoint], nvars: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for t in 0.. {
        let h = hilbert_function(field, pts, nvars, t);
        out.push(h);
        if h == pts.len() {
            break;
        }
    }
    out
}

/// Whether all subsets obtained by dropping one point share a Hilbert function.
pub fn has_cbp(field: PrimeField, pts: &[ProjPoint]) -> bool {
    if pts.len() <= 2 {
        return true;
    }
    let nvars = pts[0].coords().len();
    let mut first: Option<Vec<usize>> = None;
    for q in 0..pts.len() {
        let rest: Vec<ProjPoint> = pts.iter().enumerate().filter(|&(i, _)| i != q).map(|(_, p)| p.clone()).collect();
        let hf = saturating_hf(field, &rest, nvars);
        match &first {
            None => first = Some(hf),
            Some(f) if *f != hf => return false,
            _ => {}
        }
    }
    true
}

/// Cayley–Bacharach property of a general projection to the plane.
pub fn geprocb(z: &Configuration, trials: usize, seed: u64) -> Result<Decision, GeprociError> {
    check_ambient(z, 3)?;
    let field = z.field();
    let mut runner = TrialRunner::new(field, seed);
    let mut outcomes = Vec::with_capacity(trials);
    for _ in 0..trials {
        if z.len() <= 2 {
            outcomes.push(TrialOutcome::Certified);
            continue;
        }
        let (_, img) = runner.project(&z.points)?;
        outcomes.push(if has_cbp(field, &img) {
            TrialOutcome::Certified
        } else {
            TrialOutcome::Obstructed("removing different points gives different Hilbert functions".into())
        });
    }
    Ok(runner.finish(trials, outcomes, "Cayley-Bacharach property of the projection"))
}

/// Cayley–Bacharach property of the configuration in its own ambient space.
pub fn cbp_ambient(z: &Configuration) -> bool {
    has_cbp(z.field(), &z.points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryReport {
    pub decision: Decision,
    /// Random points off `Z` tested in the last trial, and how many of them the cones through `W` miss.
    pub probes: usize,
    pub probes_failing: usize,
}

/// Whether the general degree-`m` cones through `w` contain all of `z`.
pub fn remembers(w: &Configuration, z: &Configuration, m: usize, trials: usize, probes: usize, seed: u64) -> Result<MemoryReport, GeprociError> {
    check_ambient(z, 3)?;
    let field = z.field();
    let in_z: BTreeSet<&ProjPoint> = z.points.iter().collect();
    if let Some(i) = w.points.iter().position(|p| !in_z.contains(p)) {
        return Err(GeprociError::NotSubset(i));
    }
    let mut runner = TrialRunner::new(field, seed);
    let mut outcomes = Vec::with_capacity(trials);
    let mut probes_failing = 0;
    for trial in 0..trials {
        // project Z, then read off the images of W by position
        let (vertex, img_z) = runner.project(&z.points)?;
        let index: std::collections::HashMap<&ProjPoint, usize> = z.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let img_w: Vec<ProjPoint> = w.points.iter().map(|p| img_z[index[p]].clone()).collect();
        let cones = eval_matrix(field, &img_w, 3, m).kernel_basis();
        let basis = MonomialBasis::new(3, m);
        let vanishes = |q: &ProjPoint| {
            let row = basis.eval_row(field, q.coords());
            cones.iter().all(|k| crate::linalg::dot(field, &row, k).is_zero())
        };
        runner.witness.kernel_dims.push(vec![cones.len()]);
        let missed = img_z.iter().position(|q| !vanishes(q));
        outcomes.push(match missed {
            None => TrialOutcome::Certified,
            Some(i) => TrialOutcome::Obstructed(format!("point {i} of Z is off the cones of degree {m} through W")),
        });
        if trial + 1 == trials {
            probes_failing = 0;
            let mut taken = 0;
            while taken < probes {
                let q = ProjPoint::random(field, 3, &mut runner.rng);
                if in_z.contains(&q) || q == vertex {
                    continue;
                }
                taken += 1;
                let img = project_from(field, &vertex, std::slice::from_ref(&q))?;
                if !vanishes(&img[0]) {
                    probes_failing += 1;
                }
            }
        }
    }
    let decision = runner.finish(trials, outcomes, &format!("memory at cones of degree {m}"));
    Ok(MemoryReport { decision, probes, probes_failing })
}

/// `dim [I(pi_P(z))]_t` at one random vertex; used for diagnostics.
pub fn projected_ideal_dim(z: &Configuration, t: usize, seed: u64) -> Result<usize, GeprociError> {
    let mut runner = TrialRunner::new(z.field(), seed);
    let (_, img) = runner.project(&z.points)?;
    Ok(ideal_dim_points(z.field(), &img, 3, t))
}
