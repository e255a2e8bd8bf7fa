//! Command-line front end. [`run`] returns the exit code and the rendered
//! report so that it can be tested without spawning a process.
//!
//! Exit codes: 0 success, 1 a check failed or internal error, 2 unreadable
//! or invalid input, 3 diagram over the crossing bound, 4 movie endpoints
//! with a nonzero differential.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complex::{build_complex_with, graded_generators, ComplexError, Frobenius, DEFAULT_CROSSING_BOUND};
use crate::diagram::{fixture, fixture_names, Diagram, DiagramError};
use crate::homology::{bracket_oracle_bounded, euler_characteristic, homology, HomologyError};
use crate::matrix::PolyMatrix;
use crate::movie::{induced_self_map, random_r2_dance, report_for, run_counterexample, CounterexampleReport, Movie, MovieError};

/// Environment variable overriding the crossing bound.
pub const BOUND_VAR: &str = "KHC_MAX_CROSSINGS";

pub const VERDICT: &str = "KHOVANOV CONJECTURE OVER Z2[c]: REFUTED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "khc", version, about = "Khovanov homology over Z2[c] and movie chain maps")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bigraded homology of a diagram file (or fixture name).
    Homology { diagram: PathBuf },
    /// Euler characteristic against the Kauffman bracket.
    Euler { diagram: PathBuf },
    /// Map induced by a movie on its endpoint homology.
    Movie { movie: PathBuf },
    /// The sliding movie on the two-component unlink.
    Counterexample,
    /// Random R2-only movies on the unlink, checked against id mod c.
    FuzzR2 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// R2 moves creating bigons, per movie.
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        let code = match e {
            ComplexError::Diagram(_) => 2,
            ComplexError::TooManyCrossings { .. } | ComplexError::TooLarge { .. } => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Complex(c) => c.into(),
            HomologyError::TooManyCrossings { .. } => Failure { code: 3, message: e.to_string() },
            _ => Failure { code: 1, message: e.to_string() },
        }
    }
}

impl From<MovieError> for Failure {
    fn from(e: MovieError) -> Self {
        match e {
            MovieError::Diagram(d) => d.into(),
            MovieError::Complex(c) => c.into(),
            MovieError::Homology(h) => h.into(),
            MovieError::Parse(_) | MovieError::NotIsotopic => {
                Failure { code: 2, message: e.to_string() }
            }
            MovieError::NonZeroDifferential => Failure { code: 4, message: e.to_string() },
            _ => Failure { code: 1, message: e.to_string() },
        }
    }
}

fn crossing_bound() -> Result<usize, Failure> {
    match std::env::var(BOUND_VAR) {
        Err(_) => Ok(DEFAULT_CROSSING_BOUND),
        Ok(v) => v.parse().map_err(|_| Failure { code: 2, message: format!("{BOUND_VAR}={v} is not a count") }),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    if !path.exists() {
        if let Some(name) = path.to_str().filter(|n| fixture_names().contains(n)) {
            return Ok(fixture(name)?);
        }
    }
    Ok(Diagram::from_json(&read(path)?)?)
}

fn matrix_text(m: &PolyMatrix, labels: &[String]) -> String {
    let cells: Vec<Vec<String>> =
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()).collect();
    let width = cells.iter().flatten().chain(labels).map(|s| s.chars().count()).max().unwrap_or(1);
    let pad = |s: &str| format!("{s:>width$}");
    let mut out = format!("{} |", pad(""));
    for l in labels {
        out += &format!(" {}", pad(l));
    }
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        out += &format!("{} |", pad(&labels[r]));
        for cell in row {
            out += &format!(" {}", pad(cell));
        }
        out.push('\n');
    }
    out
}

fn report_json(r: &CounterexampleReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["map"] = serde_json::to_value(r.map.dump()).expect("map serializes");
    v
}

fn report_text(r: &CounterexampleReport) -> String {
    let diff = r.phi_matrix.add(&PolyMatrix::identity(r.phi_matrix.rows()));
    format!(
        "phi (rows: targets, columns: sources):\n{}phi - id:\n{}id mod c: {}\nid: {}\nphi - id divisible by c: {}\nbidegree (0,0): {}\ninvertible: {}\n",
        matrix_text(&r.phi_matrix, &r.generators),
        matrix_text(&diff, &r.generators),
        r.identity_mod_c,
        r.identity,
        r.divisible_by_c,
        r.bidegree_preserving,
        r.invertible,
    )
}

fn execute(cli: &Cli) -> Result<(i32, Value, String), Failure> {
    match &cli.command {
        Command::Homology { diagram } => {
            let d = load_diagram(diagram)?;
            let bound = crossing_bound()?;
            let cx = build_complex_with(&d, &Frobenius::standard(), bound)?;
            let table = homology(&cx)?;
            let euler = euler_characteristic(&cx);
            let oracle = bracket_oracle_bounded(&d, bound)?;
            let ok = euler == oracle;
            let mut text = String::new();
            for ((i, j), g) in &table.groups {
                let _ = write!(text, "({i},{j}): free {}", g.free);
                if !g.torsion.is_empty() {
                    let t: Vec<String> = g.torsion.iter().map(|e| format!("Z2[c]/(c^{e})")).collect();
                    let _ = write!(text, ", torsion {}", t.join(" + "));
                }
                text.push('\n');
            }
            let _ = writeln!(text, "euler: {euler}\nbracket oracle: {oracle}\nmatch: {ok}");
            let v = json!({"homology": table, "euler": euler, "bracket_oracle": oracle, "euler_matches_bracket": ok});
            Ok((if ok { 0 } else { 1 }, v, text))
        }
        Command::Euler { diagram } => {
            let d = load_diagram(diagram)?;
            let bound = crossing_bound()?;
            let cx = graded_generators(&d, bound)?;
            let (euler, oracle) = (euler_characteristic(&cx), bracket_oracle_bounded(&d, bound)?);
            let ok = euler == oracle;
            let text = format!("euler: {euler}\nbracket oracle: {oracle}\nmatch: {ok}\n");
            Ok((if ok { 0 } else { 1 }, json!({"euler": euler, "bracket_oracle": oracle, "match": ok}), text))
        }
        Command::Movie { movie } => {
            let m = Movie::from_json(&read(movie)?)?;
            let r = report_for(induced_self_map(&m)?);
            let mut v = report_json(&r);
            v["events"] = json!(m.events.len());
            Ok((0, v, report_text(&r)))
        }
        Command::Counterexample => {
            let r = run_counterexample()?;
            let code = if r.refutes() { 0 } else { 1 };
            let verdict = if r.refutes() { VERDICT.to_string() } else { "NOT REPRODUCED".to_string() };
            let mut v = report_json(&r);
            v["verdict"] = json!(verdict);
            Ok((code, v, format!("{}{verdict}\n", report_text(&r))))
        }
        Command::FuzzR2 { seed, steps, trials } => {
            let mut runs = Vec::new();
            let mut text = String::new();
            let mut all = true;
            for s in *seed..seed + trials {
                let m = random_r2_dance(s, *steps)?;
                let f = induced_self_map(&m)?;
                let (mod_c, id) = (f.mod_c().is_identity(), f.is_identity());
                all &= mod_c;
                let _ = writeln!(text, "seed {s}: {} events, id mod c: {mod_c}, id: {id}", m.events.len());
                runs.push(json!({"seed": s, "events": m.events.len(), "identity_mod_c": mod_c, "identity": id}));
            }
            Ok((if all { 0 } else { 1 }, json!({"runs": runs, "all_identity_mod_c": all}), text))
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok((code, v, text)) => Outcome {
            code,
            output: match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Format::Text => text,
            },
        },
        Err(f) => Outcome { code: f.code, output: format!("error: {}\n", f.message) },
    }
}
