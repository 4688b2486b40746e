//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::combinat::{line_census, plane_census, weak_comb_equivalent, CombinatError, Equivalence};
use crate::configs::{extend_standard, load_str, named, roots_grid, save, std_construction, BuildOptions, ConfigError, Configuration, Tags, Which};
use crate::geproci::{cbp_ambient, geprocb, is_ci222_p4, is_geproci, remembers, Decision, GeprociError, Verdict};
use crate::ks::{self, KsError};
use crate::suite::{self, SuiteError};
use crate::unexpected::{self, Support, UnexpError};
use crate::weddle::{weddle_degree, weddle_member, WeddleContext, WeddleDegree, WeddleError};

#[derive(Debug, Parser)]
#[command(name = "geproci", version, about = "Exact checks for point configurations in projective space over prime fields")]
pub struct Cli {
    /// Print the JSON report instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = suite::DEFAULT_SEED)]
    pub seed: u64,
    /// Work over this prime instead of the one stored with the configuration.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a configuration: a named label, `grid A B`, `std N WHICH` or `extend N WHICH`.
    Construct {
        kind: String,
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certify a property of general projections.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Count lines or planes by the number of points they carry.
    Census { kind: CensusKind, file: PathBuf },
    /// Weddle locus membership of probe points, or the degree of the locus.
    Weddle {
        action: WeddleAction,
        #[arg(short)]
        d: usize,
        file: PathBuf,
        #[arg(long)]
        probe: Option<PathBuf>,
    },
    /// Dimensions of cones with a general vertex.
    Unexpected {
        quantity: UnexpQuantity,
        #[arg(short)]
        t: usize,
        /// Multiplicity at the vertex; defaults to the degree.
        #[arg(short)]
        m: Option<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        file: PathBuf,
    },
    /// Search for a truth assignment on the orthogonality graph.
    Ks { file: PathBuf },
    /// Cayley–Bacharach property of the general projection, or of the set itself.
    Cbp {
        #[arg(long)]
        ambient: bool,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        file: PathBuf,
    },
    /// Whether the cones through a subset contain the whole configuration.
    Remember {
        #[arg(short)]
        m: usize,
        /// File with the subset's point indices (JSON array or whitespace separated).
        #[arg(long)]
        subset: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Random points off the configuration to test as well.
        #[arg(long, default_value_t = 0)]
        probes: usize,
        file: PathBuf,
    },
    /// Compare the incidence structures of two configurations.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Largest size for the exhaustive bijection search.
        #[arg(long, default_value_t = 12)]
        bound: usize,
    },
    /// Run acceptance groups, all of them without a name.
    Suite { name: Option<String> },
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    Geproci {
        #[arg(short)]
        a: usize,
        #[arg(short)]
        b: usize,
        #[arg(short, long, default_value_t = 3)]
        trials: usize,
        file: PathBuf,
    },
    Ci222 {
        #[arg(short, long, default_value_t = 3)]
        trials: usize,
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CensusKind {
    Lines,
    Planes,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeddleAction {
    Member,
    Degree,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UnexpQuantity {
    Adim,
    Vdim,
    C,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Config(#[from] ConfigError),
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
    Suite(#[from] SuiteError),
}

/// The machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub verdict: Verdict,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub data: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Yes => 0,
            Verdict::No | Verdict::Degenerate => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

fn yes_no(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load(path: &Path, prime: Option<u64>) -> Result<Configuration, CliError> {
    Ok(load_str(&read(path)?, prime)?)
}

fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    if let Ok(v) = serde_json::from_str::<Vec<usize>>(text) {
        return Ok(v);
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("`{s}` is not a point index"))))
        .collect()
}

fn param<T: std::str::FromStr>(params: &[String], k: usize, what: &str) -> Result<T, CliError> {
    let s = params.get(k).ok_or_else(|| CliError::Usage(format!("missing {what}")))?;
    s.parse().map_err(|_| CliError::Usage(format!("bad {what}: `{s}`")))
}

fn decision_report(d: &Decision, prime: u64, seed: u64) -> Report {
    Report { verdict: d.verdict, prime, seed, trials: d.trials, data: serde_json::to_value(d).unwrap_or(Value::Null) }
}

/// Execute a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let seed = cli.seed;
    let report = |verdict, prime, trials, data| Report { verdict, prime, seed, trials, data };
    match &cli.command {
        Command::Construct { kind, params, output } => {
            let opts = BuildOptions { prime: cli.prime, ..BuildOptions::default() };
            let cfg = match kind.as_str() {
                "grid" => roots_grid(param(params, 0, "A")?, param(params, 1, "B")?, &opts)?,
                "std" | "extend" => {
                    let n: usize = param(params, 0, "N")?;
                    let which: Which = params
                        .get(1)
                        .ok_or_else(|| CliError::Usage("missing WHICH (y1, y2 or y1y2)".into()))?
                        .parse()
                        .map_err(CliError::Usage)?;
                    let z = std_construction(n, which, &opts)?;
                    if kind == "extend" {
                        extend_standard(&z)?
                    } else {
                        z
                    }
                }
                label => named(label, &opts)?,
            };
            if let Some(path) = output {
                save(&cfg, path)?;
            }
            let data = json!({ "label": cfg.label, "points": cfg.len(), "ambient_dim": cfg.ambient_dim, "output": output });
            Ok(report(Verdict::Yes, cfg.prime(), 0, data))
        }
        Command::Check { what: CheckCommand::Geproci { a, b, trials, file } } => {
            let z = load(file, cli.prime)?;
            Ok(decision_report(&is_geproci(&z, *a, *b, *trials, seed)?, z.prime(), seed))
        }
        Command::Check { what: CheckCommand::Ci222 { trials, file } } => {
            let z = load(file, cli.prime)?;
            Ok(decision_report(&is_ci222_p4(&z, *trials, seed)?, z.prime(), seed))
        }
        Command::Census { kind, file } => {
            let z = load(file, cli.prime)?;
            let census = match kind {
                CensusKind::Lines => line_census(z.field(), &z.points),
                CensusKind::Planes => plane_census(z.field(), &z.points)?,
            };
            let data: serde_json::Map<String, Value> = census.histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            Ok(report(Verdict::Yes, z.prime(), 0, Value::Object(data)))
        }
        Command::Weddle { action, d, file, probe } => {
            let z = load(file, cli.prime)?;
            let ctx = WeddleContext::new(z.field(), &z.points, *d, seed)?;
            match action {
                WeddleAction::Degree => {
                    let deg = weddle_degree(&ctx, seed)?;
                    let data = match deg {
                        WeddleDegree::Degree(k) => json!({ "degree": k }),
                        WeddleDegree::IdenticallyZero => json!({ "degree": "identically zero" }),
                    };
                    Ok(report(Verdict::Yes, z.prime(), 0, data))
                }
                WeddleAction::Member => {
                    let path = probe.as_ref().ok_or_else(|| CliError::Usage("weddle member needs --probe FILE".into()))?;
                    let probes = load(path, Some(z.prime()))?;
                    let member = probes.points.iter().map(|p| weddle_member(&ctx, p)).collect::<Result<Vec<bool>, _>>()?;
                    let verdict = yes_no(member.iter().all(|&m| m));
                    Ok(report(verdict, z.prime(), 0, json!({ "generic_rank": ctx.generic_rank(), "member": member })))
                }
            }
        }
        Command::Unexpected { quantity, t, m, trials, file } => {
            let z = load(file, cli.prime)?;
            let m = m.unwrap_or(*t);
            let support = Support::Points(&z.points);
            let (verdict, data) = match quantity {
                UnexpQuantity::Adim => (Verdict::Yes, json!({ "adim": unexpected::adim(z.field(), support, *t, m, *trials, seed)? })),
                UnexpQuantity::Vdim => (Verdict::Yes, json!({ "vdim": unexpected::vdim(z.field(), support, *t, m, *trials, seed)? })),
                UnexpQuantity::C => {
                    let r = unexpected::report(z.field(), support, *t, m, *trials, seed)?;
                    (yes_no(r.unexpected), serde_json::to_value(&r).unwrap_or(Value::Null))
                }
            };
            Ok(report(verdict, z.prime(), *trials, data))
        }
        Command::Ks { file } => {
            let z = load(file, cli.prime)?;
            let g = ks::ortho_graph(&z)?;
            let assignment = ks::truth_assignment(&g);
            let data = json!({
                "primes": [g.primes.0, g.primes.1],
                "edges": g.edges.len(),
                "bases": g.bases.len(),
                "disagreements": g.disagreements,
                "assignment": assignment.map(|a| a.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| i).collect::<Vec<_>>()),
            });
            Ok(report(yes_no(ks::is_ks_set(&g)), z.prime(), 0, data))
        }
        Command::Cbp { ambient, trials, file } => {
            let z = load(file, cli.prime)?;
            if *ambient {
                Ok(report(yes_no(cbp_ambient(&z)), z.prime(), 0, json!({ "ambient": true })))
            } else {
                Ok(decision_report(&geprocb(&z, *trials, seed)?, z.prime(), seed))
            }
        }
        Command::Remember { m, subset, trials, probes, file } => {
            let z = load(file, cli.prime)?;
            let idx = parse_indices(&read(subset)?)?;
            if let Some(&bad) = idx.iter().find(|&&i| i >= z.len()) {
                return Err(CliError::Usage(format!("index {bad} is out of range for {} points", z.len())));
            }
            let w = z.subset(&format!("{}-subset", z.label), &idx, Tags::default())?;
            let r = remembers(&w, &z, *m, *trials, *probes, seed)?;
            let data = json!({ "decision": r.decision, "probes": r.probes, "probes_failing": r.probes_failing });
            Ok(report(r.decision.verdict, z.prime(), *trials, data))
        }
        Command::Equiv { first, second, bound } => {
            let a = load(first, cli.prime)?;
            let b = load(second, Some(a.prime()))?;
            let e = weak_comb_equivalent(&a, &b, *bound)?;
            let verdict = match e {
                Equivalence::Equivalent { .. } => Verdict::Yes,
                Equivalence::Distinguished { .. } => Verdict::No,
                Equivalence::Unknown => Verdict::Inconclusive,
            };
            Ok(report(verdict, a.prime(), 0, serde_json::to_value(&e).unwrap_or(Value::Null)))
        }
        Command::Suite { name } => {
            let reports = match name {
                Some(n) => vec![suite::run_group(n, seed)?],
                None => suite::run_all(seed),
            };
            let verdict = yes_no(reports.iter().all(|r| r.passed()));
            let prime = BuildOptions::default().field_spec(&[]).map(|s| s.prime()).unwrap_or(0);
            Ok(report(verdict, prime, 3, serde_json::to_value(&reports).unwrap_or(Value::Null)))
        }
    }
}

/// Human-readable rendering of a report.
pub fn render(cli: &Cli, r: &Report) -> String {
    let mut out = String::new();
    match (&cli.command, &r.data) {
        (Command::Census { .. }, Value::Object(map)) => {
            out.push_str("points  count\n");
            for (k, v) in map {
                out.push_str(&format!("{k:>6}  {v}\n"));
            }
        }
        (Command::Suite { .. }, Value::Array(groups)) => {
            for g in groups {
                let checks = g["checks"].as_array().cloned().unwrap_or_default();
                let passed = checks.iter().all(|c| c["passed"] == json!(true));
                out.push_str(&format!("{:>2} {:<12} {}\n", g["id"], g["group"].as_str().unwrap_or(""), if passed { "PASS" } else { "FAIL" }));
                for c in checks.iter().filter(|c| c["passed"] != json!(true)) {
                    out.push_str(&format!("     failed: {} -> {}\n", c["name"].as_str().unwrap_or(""), c["value"]));
                }
            }
        }
        (_, Value::Object(map)) => {
            for (k, v) in map {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        (_, v) => out.push_str(&format!("{v}\n")),
    }
    out.push_str(&format!("verdict: {:?} (prime {}, seed {})\n", r.verdict, r.prime, r.seed).to_lowercase());
    out
}

/// Parse `std::env::args`, run, print, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string(&r).expect("report serializes"));
            } else {
                print!("{}", render(&cli, &r));
            }
            r.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("geproci").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn subcommands_parse() {
        parse(&["check", "geproci", "-a", "3", "-b", "4", "-t", "2", "--seed", "5", "d4.json"]);
        parse(&["unexpected", "c", "-t", "4", "-m", "4", "f4.json"]);
        parse(&["weddle", "member", "-d", "2", "z.json", "--probe", "q.json"]);
        parse(&["census", "planes", "z.json", "--json"]);
        parse(&["remember", "-m", "4", "--subset", "w.txt", "z.json"]);
        parse(&["construct", "std", "4", "y1y2", "-o", "f4.json"]);
        parse(&["suite"]);
        assert!(Cli::try_parse_from(["geproci", "census", "cubes", "z.json"]).is_err());
    }

    #[test]
    fn indices_in_either_format() {
        assert_eq!(parse_indices("[0, 2, 5]").unwrap(), vec![0, 2, 5]);
        assert_eq!(parse_indices("0 2\n5,7").unwrap(), vec![0, 2, 5, 7]);
        assert!(parse_indices("0 x").is_err());
    }

    #[test]
    fn census_of_a_constructed_file() {
        let dir = std::env::temp_dir().join(format!("geproci-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("d4.json");
        let p = path.to_str().unwrap();
        execute(&parse(&["construct", "d4", "-o", p])).unwrap();
        let r = execute(&parse(&["census", "lines", p])).unwrap();
        assert_eq!(r.data, json!({ "2": 18, "3": 16 }));
        let c = execute(&parse(&["check", "geproci", "-a", "3", "-b", "4", p])).unwrap();
        assert_eq!(c.exit_code(), 0);
        let again = execute(&parse(&["check", "geproci", "-a", "3", "-b", "4", p])).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), serde_json::to_string(&again).unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
