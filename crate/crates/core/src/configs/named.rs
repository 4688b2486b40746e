//! Registry of named configurations.

use crate::field::{Fe, FieldSpec, Symbol};
use crate::linalg::Matrix;
use crate::projgeom::ProjPoint;

use super::{std_construction, std_rows, upow, BuildOptions, ConfigError, Configuration, Tags, Which};

/// Every label accepted by [`named`], besides the `bK` family for any `K >= 3`.
pub const NAMED_LABELS: &[&str] = &[
    "d4",
    "d4-brianchon",
    "d4-cube",
    "f4",
    "klein",
    "penrose",
    "half-penrose",
    "h4",
    "b3",
    "b4",
    "b5",
    "b6",
    "b7",
    "ks13",
    "ks21",
    "peres33",
    "rays300",
    "pts120",
    "e7",
    "e8",
];

/// Build a named configuration.
pub fn named(label: &str, opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    match label {
        "d4" => from_digits(label, &D4_ROOTS, opts, Tags::shape(3, 4)),
        "d4-brianchon" => from_digits(label, &D4_BRIANCHON, opts, Tags::shape(3, 4)),
        "d4-cube" => d4_cube(opts),
        "f4" => from_digits(label, &F4, opts, Tags::shape(4, 6)),
        "klein" => klein(opts),
        "penrose" => penrose(opts),
        "half-penrose" => {
            let p = penrose(opts)?;
            let idx: Vec<usize> = HALF_PENROSE.iter().map(|i| i - 1).collect();
            p.subset(label, &idx, Tags::shape(4, 5))
        }
        "h4" => h4(opts),
        "ks13" => from_digits(label, &KS13, opts, Tags::default()),
        "ks21" => ks21(opts),
        "peres33" => peres33(opts),
        "rays300" => rays300(opts),
        "pts120" => pts120(opts),
        "e7" => e7(opts),
        "e8" => e8(opts),
        other => match other.strip_prefix('b').and_then(|k| k.parse::<usize>().ok()) {
            Some(k) if k >= 3 => b_root(k, opts),
            _ => Err(ConfigError::UnknownLabel(other.to_string())),
        },
    }
}

/// Twelve points of the `D_4` root model (`*` stands for `-1`).
const D4_ROOTS: [&str; 12] =
    ["1100", "*100", "1010", "10*0", "1001", "100*", "0110", "01*0", "0101", "010*", "0011", "001*"];

/// A `(3,3)`-grid with three collinear Brianchon points.
const D4_BRIANCHON: [&str; 12] =
    ["0010", "0011", "0001", "1010", "1111", "0101", "1000", "1100", "0100", "1101", "1011", "01*0"];

const F4: [&str; 24] = [
    "1000", "0100", "1100", "1*00", //
    "0010", "0001", "0011", "001*", //
    "1010", "0101", "1111", "1*1*", //
    "10*0", "010*", "11**", "1**1", //
    "1001", "01*0", "11*1", "1*11", //
    "100*", "0110", "111*", "1***",
];

const KS13: [&str; 13] = ["100", "010", "001", "011", "01*", "101", "10*", "110", "1*0", "*11", "1*1", "11*", "111"];

const PERES33: [&str; 33] = [
    "100", "010", "001", "110", "101", "011", "1*0", "10*", "01*", "01v", "10v", "1v0", "0*v", "*0v", "*v0", "0v1",
    "v01", "v10", "0v*", "v0*", "v*0", "11v", "**v", "1*v", "*1v", "1v1", "1v*", "*v*", "*v1", "v11", "v1*", "v*1",
    "v**",
];

const PENROSE: [[&str; 4]; 40] = [
    ["1", "t", "t^2", "0"],
    ["1", "0", "0", "0"],
    ["0", "1", "0", "0"],
    ["0", "0", "1", "0"],
    ["-1", "0", "t^2", "1"],
    ["0", "-1", "t", "1"],
    ["t^2", "1", "0", "1"],
    ["t", "0", "1", "1"],
    ["0", "t^2", "1", "-1"],
    ["1", "t^(-2)", "0", "1"],
    ["0", "t", "-1", "1"],
    ["t^(-1)", "0", "1", "1"],
    ["1", "0", "t", "-1"],
    ["1", "t^2", "0", "1"],
    ["t^(-2)", "1", "0", "1"],
    ["0", "1", "t^2", "-1"],
    ["1", "1", "0", "1"],
    ["0", "1", "1", "-1"],
    ["-1", "0", "1", "1"],
    ["t^2", "t", "1", "0"],
    ["0", "0", "0", "1"],
    ["0", "t^2", "1", "t"],
    ["t", "0", "1", "t^2"],
    ["t^(-2)", "t^2", "0", "1"],
    ["0", "1", "1", "t"],
    ["1", "0", "-1", "t^(-1)"],
    ["1", "0", "-1", "t"],
    ["1", "1", "0", "t^2"],
    ["1", "1", "0", "t^(-2)"],
    ["0", "1", "1", "t^(-1)"],
    ["-1", "1", "t^(-1)", "0"],
    ["-1", "1", "t", "0"],
    ["t^2", "-1", "1", "0"],
    ["t", "1", "-1", "0"],
    ["1", "t^(-1)", "1", "0"],
    ["1", "t", "1", "0"],
    ["1", "t^2", "0", "t^(-2)"],
    ["0", "1", "t^2", "t"],
    ["t", "0", "t^2", "1"],
    ["1", "-1", "1", "0"],
];

/// One-based indices of a `(4,5)` half grid inside the Penrose set, five collinear quadruples.
pub const HALF_PENROSE: [usize; 20] = [1, 2, 32, 35, 29, 7, 37, 3, 30, 15, 5, 36, 11, 14, 39, 40, 8, 17, 33, 38];

/// The 24 points completing the extended `F_4` standard set to the Klein configuration (`u = i`).
const KLEIN_EXTRA: [[&str; 4]; 24] = [
    ["1", "u", "-1", "u"],
    ["1", "-u", "-1", "-u"],
    ["1", "1", "-1", "1"],
    ["1", "-1", "-1", "-1"],
    ["1", "u", "1", "-u"],
    ["1", "-u", "1", "u"],
    ["1", "1", "1", "-1"],
    ["1", "-1", "1", "1"],
    ["1", "u", "u", "1"],
    ["1", "-u", "u", "-1"],
    ["1", "1", "u", "-u"],
    ["1", "-1", "u", "u"],
    ["1", "u", "-u", "-1"],
    ["1", "-u", "-u", "1"],
    ["1", "1", "-u", "u"],
    ["1", "-1", "-u", "-u"],
    ["1", "u", "0", "0"],
    ["1", "-u", "0", "0"],
    ["1", "1", "0", "0"],
    ["1", "-1", "0", "0"],
    ["0", "0", "1", "-u"],
    ["0", "0", "1", "u"],
    ["0", "0", "1", "-1"],
    ["0", "0", "1", "1"],
];

fn digit_expr(c: char) -> String {
    match c {
        '*' => "-1".to_string(),
        other => other.to_string(),
    }
}

fn from_digits(label: &str, rows: &[&str], opts: &BuildOptions, tags: Tags) -> Result<Configuration, ConfigError> {
    let uses_v = rows.iter().any(|r| r.contains('v'));
    let symbols = if uses_v { vec![Symbol::minpoly("v", &[-2, 0, 1])] } else { vec![] };
    let spec = opts.field_spec(&symbols)?;
    let rows = rows.iter().map(|r| r.chars().map(digit_expr).collect()).collect();
    Configuration::from_exprs(label, spec, rows, tags)
}

fn to_rows<const N: usize>(rows: &[[&str; N]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn d4_cube(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[])?;
    let mut rows: Vec<Vec<String>> = ["0001", "1001", "0101", "0011", "0111", "1011", "1101", "1111"]
        .iter()
        .map(|r| r.chars().map(digit_expr).collect())
        .collect();
    rows.push(vec!["1/2".into(), "1/2".into(), "1/2".into(), "1".into()]);
    for r in ["1000", "0100", "0010"] {
        rows.push(r.chars().map(digit_expr).collect());
    }
    Configuration::from_exprs("d4-cube", spec, rows, Tags::shape(3, 4))
}

fn penrose(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[Symbol::minpoly("t", &[1, -1, 1])])?;
    Configuration::from_exprs("penrose", spec, to_rows(&PENROSE), Tags::shape(5, 8))
}

fn klein(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let base = super::extend_standard(&std_construction(4, Which::Y1Y2, opts)?)?;
    let mut rows = base.exprs.clone().expect("standard sets are symbolic");
    rows.extend(to_rows(&KLEIN_EXTRA));
    Configuration::from_exprs("klein", base.spec.clone(), rows, Tags::shape(6, 10))
}

/// `X u Y1 u Y2` for `n = 5` together with the rescaled grid `[1 : q u^j : q u^i : u^(i+j)]`, `q = 1/u + u - 1`.
fn h4(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let n = 5;
    let spec = opts.field_spec(&[Symbol::order("u", n as u64)])?;
    let mut rows = std_rows(n, Which::Y1Y2);
    let q = "(u^(-1)+u-1)";
    for i in 0..n {
        for j in 0..n {
            rows.push(vec![
                "1".into(),
                format!("{q}*{}", upow("u", j, n)),
                format!("{q}*{}", upow("u", i, n)),
                upow("u", i + j, n),
            ]);
        }
    }
    Configuration::from_exprs("h4", spec, rows, Tags::shape(6, 10))
}

fn ks21(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[Symbol::order("q", 3)])?;
    let raw: [[&str; 3]; 21] = [
        ["0", "1", "-1"],
        ["0", "1", "-q"],
        ["0", "1", "-q^2"],
        ["-1", "0", "1"],
        ["-q", "0", "1"],
        ["-q^2", "0", "1"],
        ["1", "-1", "0"],
        ["1", "-q", "0"],
        ["1", "-q^2", "0"],
        ["1", "0", "0"],
        ["0", "1", "0"],
        ["0", "0", "1"],
        ["1", "1", "1"],
        ["1", "q", "q^2"],
        ["1", "q^2", "q"],
        ["1", "q^2", "q^2"],
        ["q^2", "1", "q^2"],
        ["q^2", "q^2", "1"],
        ["1", "q", "q"],
        ["q", "1", "q"],
        ["q", "q", "1"],
    ];
    Configuration::from_exprs("ks21", spec, to_rows(&raw), Tags::default())
}

fn peres33(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    from_digits("peres33", &PERES33, opts, Tags::default())
}

/// `B_k`: the `e_i` and `e_i +- e_j` in `P^(k-1)`.
fn b_root(k: usize, opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[])?;
    let mut rows = Vec::new();
    let unit = |i: usize| {
        let mut r = vec!["0".to_string(); k];
        r[i] = "1".into();
        r
    };
    for i in 0..k {
        rows.push(unit(i));
    }
    for i in 0..k {
        for j in i + 1..k {
            for sign in ["1", "-1"] {
                let mut r = unit(i);
                r[j] = sign.into();
                rows.push(r);
            }
        }
    }
    Configuration::from_exprs(&format!("b{k}"), spec, rows, Tags::default())
}

/// `E_8` roots up to sign, the half-integral ones scaled by 2.
fn e8_rows() -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for s in [1i64, -1] {
                let mut r = vec![0i64; 8];
                r[i] = 1;
                r[j] = s;
                rows.push(r);
            }
        }
    }
    // (+-1)^8 with an even number of minus signs, first sign fixed to + to pick one of each +- pair
    for mask in 0u32..128 {
        let mut r = vec![1i64; 8];
        for (b, x) in r.iter_mut().enumerate().skip(1) {
            if mask >> (b - 1) & 1 == 1 {
                *x = -1;
            }
        }
        if r.iter().filter(|&&x| x < 0).count() % 2 == 0 {
            rows.push(r);
        }
    }
    rows
}

fn int_rows(rows: &[Vec<i64>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn e8(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[])?;
    Configuration::from_exprs("e8", spec, int_rows(&e8_rows()), Tags::default())
}

/// `E_7` as the `E_8` roots orthogonal to `e7 + e8`, written in the first seven coordinates.
fn e7(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = opts.field_spec(&[])?;
    let rows: Vec<Vec<i64>> = e8_rows()
        .into_iter()
        .filter(|r| r[6] + r[7] == 0)
        .map(|r| r[..7].to_vec())
        .collect();
    Configuration::from_exprs("e7", spec, int_rows(&rows), Tags::default())
}

fn golden_spec(opts: &BuildOptions) -> Result<FieldSpec, ConfigError> {
    opts.field_spec(&[Symbol::minpoly("phi", &[-1, -1, 1]), Symbol::minpoly("v", &[-2, 0, 1])])
}

fn matrix(spec: &FieldSpec, entries: [[&str; 4]; 4], scale: &str) -> Result<Matrix, ConfigError> {
    let f = spec.field;
    let s = super::eval(scale, spec).map_err(|source| ConfigError::Expr { point: 0, coord: 0, source })?;
    let mut rows = Vec::new();
    for (r, row) in entries.iter().enumerate() {
        let mut out = Vec::new();
        for (c, e) in row.iter().enumerate() {
            let v = super::eval(e, spec).map_err(|source| ConfigError::Expr { point: r, coord: c, source })?;
            out.push(f.mul(v, s));
        }
        rows.push(out);
    }
    Ok(Matrix::from_rows(f, 4, &rows))
}

struct Golden {
    u: Matrix,
    v: Matrix,
    w: Matrix,
    t: Matrix,
}

fn golden_matrices(spec: &FieldSpec) -> Result<Golden, ConfigError> {
    let u = matrix(spec, [["1", "1", "1", "-1"], ["1", "1", "-1", "1"], ["1", "-1", "1", "1"], ["1", "-1", "-1", "-1"]], "1/2")?;
    let v = matrix(
        spec,
        [["phi", "0", "-1", "1/phi"], ["0", "phi", "-1/phi", "-1"], ["1", "1/phi", "phi", "0"], ["-1/phi", "1", "0", "phi"]],
        "1/2",
    )?;
    let w = matrix(
        spec,
        [["1/phi", "-phi", "0", "1"], ["phi", "1/phi", "1", "0"], ["0", "-1", "1/phi", "-phi"], ["-1", "0", "phi", "1/phi"]],
        "1/2",
    )?;
    let t = matrix(spec, [["1", "-1", "0", "0"], ["-1", "-1", "0", "0"], ["0", "0", "-1", "-1"], ["0", "0", "-1", "1"]], "1/v")?;
    Ok(Golden { u, v, w, t })
}

fn mat_pow(m: &Matrix, e: usize) -> Matrix {
    let mut acc = Matrix::identity(m.field(), m.rows());
    for _ in 0..e {
        acc = acc.mul(m).expect("square");
    }
    acc
}

/// Columns of a list of matrices as projective points, first occurrence kept.
fn columns(spec: &FieldSpec, mats: &[Matrix]) -> Vec<ProjPoint> {
    let f = spec.field;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for m in mats {
        for c in 0..m.cols() {
            let col: Vec<Fe> = (0..m.rows()).map(|r| m.get(r, c)).collect();
            let p = ProjPoint::new(f, col).expect("orthogonal matrices have nonzero columns");
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    out
}

fn rays300(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = golden_spec(opts)?;
    let g = golden_matrices(&spec)?;
    let mut mats = Vec::new();
    for n in 0..5 {
        for m in 0..5 {
            for l in 0..3 {
                let prod = mat_pow(&g.w, n).mul(&mat_pow(&g.v, m)).and_then(|x| x.mul(&mat_pow(&g.u, l)));
                mats.push(prod.expect("square"));
            }
        }
    }
    let points = columns(&spec, &mats);
    Configuration::from_points("rays300", spec, points, Tags::default())
}

fn pts120(opts: &BuildOptions) -> Result<Configuration, ConfigError> {
    let spec = golden_spec(opts)?;
    let g = golden_matrices(&spec)?;
    let mut mats = Vec::new();
    for k in 0..5 {
        for i in 0..2 {
            for j in 0..3 {
                let prod = mat_pow(&g.v, k).mul(&mat_pow(&g.t, i)).and_then(|x| x.mul(&mat_pow(&g.u, j)));
                mats.push(prod.expect("square"));
            }
        }
    }
    let points = columns(&spec, &mats);
    Configuration::from_points("pts120", spec, points, Tags::shape(10, 12))
}

/// Columns of `id, U, U^2` and of `T^i U^j`, exposed for cross checks against `d4` and `f4`.
pub fn golden_columns(opts: &BuildOptions, with_t: bool, with_v: bool) -> Result<Configuration, ConfigError> {
    let spec = golden_spec(opts)?;
    let g = golden_matrices(&spec)?;
    let mut mats = Vec::new();
    let ks = if with_v { 5 } else { 1 };
    let is = if with_t { 2 } else { 1 };
    for k in 0..ks {
        for i in 0..is {
            for j in 0..3 {
                let prod = mat_pow(&g.v, k).mul(&mat_pow(&g.t, i)).and_then(|x| x.mul(&mat_pow(&g.u, j)));
                mats.push(prod.expect("square"));
            }
        }
    }
    let points = columns(&spec, &mats);
    Configuration::from_points("golden-columns", spec, points, Tags::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        let opts = BuildOptions::default();
        let expected = [
            ("d4", 12),
            ("d4-brianchon", 12),
            ("d4-cube", 12),
            ("f4", 24),
            ("klein", 60),
            ("penrose", 40),
            ("half-penrose", 20),
            ("h4", 60),
            ("b3", 9),
            ("b4", 16),
            ("b7", 49),
            ("ks13", 13),
            ("ks21", 21),
            ("peres33", 33),
            ("rays300", 300),
            ("pts120", 120),
            ("e7", 63),
            ("e8", 120),
        ];
        for (label, n) in expected {
            let z = named(label, &opts).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert_eq!(z.len(), n, "{label}");
        }
        assert!(matches!(named("nope", &opts), Err(ConfigError::UnknownLabel(_))));
    }

    #[test]
    fn golden_matrix_orders() {
        // the generators have the stated orders as projective transformations
        let spec = golden_spec(&BuildOptions::default()).unwrap();
        let g = golden_matrices(&spec).unwrap();
        let is_scalar = |m: &Matrix| {
            let c = m.get(0, 0);
            !c.is_zero() && (0..4).all(|i| (0..4).all(|j| m.get(i, j) == if i == j { c } else { Fe::ZERO }))
        };
        for (m, k) in [(&g.u, 3), (&g.v, 5), (&g.w, 5), (&g.t, 2)] {
            assert!(is_scalar(&mat_pow(m, k)));
            assert!(!is_scalar(m));
        }
    }

    #[test]
    fn golden_columns_sizes() {
        let opts = BuildOptions::default();
        assert_eq!(golden_columns(&opts, false, false).unwrap().len(), 12);
        assert_eq!(golden_columns(&opts, true, false).unwrap().len(), 24);
        assert_eq!(golden_columns(&opts, false, true).unwrap().len(), 60);
    }
}
