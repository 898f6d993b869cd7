//! The `dmt` command line: argument parsing, dispatch and JSON reports.
//!
//! Exit codes: 0 on success, 1 when the library reports an error (the error
//! is printed as JSON on standard output), 2 on usage errors.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::collapse::{level_subcomplex, verify_dmt_a, CollapseSequence};
use crate::complex::{Limits, SimplicialComplex};
use crate::error::DmtError;
use crate::flow::{verify_phibar_collapse, FlowOperator};
use crate::generate::random_connected_complex;
use crate::io::{emit_scx, parse_off, parse_scx, to_dot};
use crate::minmax::category::LsFamilies;
use crate::minmax::mountain::sublevel_splits_at;
use crate::minmax::{check_minmax_data, mountain_pass_with, MinMaxReport, PathOptions, PathProblem};
use crate::morse::MorseFunction;
use crate::simplex::Simplex;

#[derive(Debug, Parser)]
#[command(name = "dmt", version, about = "Discrete Morse theory on simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Scx,
    Off,
}

#[derive(Debug, Args)]
struct Input {
    /// Input file.
    #[arg(long = "in", value_name = "PATH")]
    path: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct Output {
    /// Emit JSON (the default for every command except `random` and `export-dot`).
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    /// Emit the Hasse diagram of the input in DOT instead of the report.
    #[arg(long)]
    dot: bool,
}

#[derive(Debug, Args)]
struct Enum {
    /// Largest complex size for exhaustive enumeration.
    #[arg(long = "max-enum", value_name = "N")]
    max_enum: Option<usize>,
}

#[derive(Debug, Args)]
struct Minima {
    /// The lower local minimum.
    #[arg(long = "min0", value_name = "V")]
    min0: usize,
    /// The higher local minimum, where paths start.
    #[arg(long = "min1", value_name = "V")]
    min1: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Morse conditions.
    Validate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// List critical simplices and values.
    Critical {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// List the gradient pairs.
    Gradient {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Flow matrices per dimension, with their checks.
    Flow {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Sublevel complexes, at one level or at every value.
    Levels {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
        #[arg(long, value_name = "A", allow_negative_numbers = true)]
        level: Option<f64>,
    },
    /// Collapse K^A onto K^B (with --to) or onto the closure of its flow image.
    Collapse {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
        #[arg(long, value_name = "A", allow_negative_numbers = true)]
        level: f64,
        #[arg(long, value_name = "B", allow_negative_numbers = true)]
        to: Option<f64>,
    },
    /// Betti numbers mod 2, Euler characteristic and Morse counts.
    Homology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Mountain-pass value between two local minima.
    MountainPass {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        minima: Minima,
    },
    /// Discrete geometric category and its critical values.
    Lscat {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        limits: Enum,
    },
    /// Check min-max data: the path family with --min0/--min1, else the category families.
    MinmaxCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
        #[arg(long = "min0", value_name = "V", requires = "min1")]
        min0: Option<usize>,
        #[arg(long = "min1", value_name = "V", requires = "min0")]
        min1: Option<usize>,
        #[command(flatten)]
        limits: Enum,
    },
    /// A random connected complex with a random Morse function, as .scx.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Hasse diagram with gradient arrows in DOT.
    ExportDot {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line given by `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: 1,
            stdout: render(&error_json(&e)),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Errors surfaced by the command line: library errors plus file access.
#[derive(Debug)]
enum CliError {
    Dmt(DmtError),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Dmt(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<DmtError> for CliError {
    fn from(e: DmtError) -> Self {
        CliError::Dmt(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn error_json(e: &CliError) -> Value {
    let mut err = json!({ "message": e.to_string() });
    match e {
        CliError::Io(_) => err["kind"] = json!("IoError"),
        CliError::Dmt(d) => {
            err["kind"] = json!(d.kind());
            match d {
                DmtError::Parse { line, .. } => err["line"] = json!(line),
                DmtError::MorseConditionViolated(vs) => {
                    err["violations"] = vs
                        .iter()
                        .map(|v| json!({ "simplex": v.simplex.vertices(), "upper": v.upper, "lower": v.lower }))
                        .collect();
                }
                DmtError::DeformationViolated(a) | DmtError::CriticalValueInWindow(a) => {
                    err["value"] = num(*a)
                }
                DmtError::ClosureViolated { map, .. } => err["map"] = json!(map),
                _ => {}
            }
        }
    }
    json!({ "schema": 1, "error": err })
}

/// Integral values are written as JSON integers so output does not depend on
/// float formatting.
fn num(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        json!(x as i64)
    } else {
        json!(x)
    }
}

fn cell(s: &Simplex) -> Value {
    json!(s.vertices())
}

fn cells<'a>(it: impl IntoIterator<Item = &'a Simplex>) -> Value {
    Value::Array(it.into_iter().map(cell).collect())
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn report(mut body: Value) -> String {
    body["schema"] = json!(1);
    render(&body)
}

struct Loaded {
    complex: SimplicialComplex,
    function: Option<MorseFunction>,
}

impl Loaded {
    fn function(&self) -> CliResult<&MorseFunction> {
        self.function.as_ref().ok_or_else(|| {
            DmtError::PreconditionViolated(
                "this command needs a Morse function; the input has no values".into(),
            )
            .into()
        })
    }
}

fn load(input: &Input) -> CliResult<Loaded> {
    let text = std::fs::read_to_string(&input.path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.path.display())))?;
    let format = input.format.unwrap_or_else(|| {
        match input.path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("off") => Format::Off,
            _ => Format::Scx,
        }
    });
    Ok(match format {
        Format::Scx => {
            let (complex, function) = parse_scx(&text)?;
            Loaded { complex, function }
        }
        Format::Off => Loaded {
            complex: parse_off(&text)?,
            function: None,
        },
    })
}

fn dot_of(loaded: &Loaded) -> CliResult<String> {
    Ok(to_dot(&loaded.complex, loaded.function.as_ref())?)
}

fn limits_of(e: &Enum) -> Limits {
    e.max_enum.map_or_else(Limits::default, Limits::with_enumeration)
}

fn collapse_json(seq: &CollapseSequence) -> Value {
    json!({
        "steps": seq.steps().iter().map(|(a, b)| json!([cell(a), cell(b)])).collect::<Vec<_>>(),
        "start_size": seq.start().len(),
        "end": cells(seq.end().simplices()),
    })
}

fn minmax_report_json(r: &MinMaxReport) -> Value {
    json!({
        "epsilon": num(r.epsilon),
        "family_size": r.family_size,
        "closure_checks": r.closure_checks,
        "deformations": r.deformations.iter().map(|(a, h)| json!({ "value": num(*a), "map": h })).collect::<Vec<_>>(),
    })
}

fn dispatch(command: Command) -> CliResult<String> {
    // commands that read an input share the --dot switch
    let with_input = |input: &Input, out: &Output, body: &dyn Fn(&Loaded) -> CliResult<Value>| -> CliResult<String> {
        let loaded = load(input)?;
        if out.dot {
            return dot_of(&loaded);
        }
        Ok(report(body(&loaded)?))
    };
    match command {
        Command::Validate { input, out } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            Ok(json!({
                "valid": true,
                "simplices": f.complex().len(),
                "critical_count": f.critical_indices().len(),
                "injective": f.is_injective(),
            }))
        }),
        Command::Critical { input, out } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            let idx = f.critical_indices();
            let top = f.complex().dim().unwrap_or(0);
            let mut counts = vec![0usize; top + 1];
            for &i in &idx {
                counts[f.complex().simplex(i).dim()] += 1;
            }
            Ok(json!({
                "critical": cells(idx.iter().map(|&i| f.complex().simplex(i))),
                "values": idx.iter().map(|&i| num(f.value_at(i))).collect::<Vec<_>>(),
                "counts": counts,
            }))
        }),
        Command::Gradient { input, out } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            let g = f.gradient_field()?;
            Ok(json!({
                "pairs": g.pairs().iter().map(|(a, b)| json!([cell(a), cell(b)])).collect::<Vec<_>>(),
                "critical": cells(&g.critical_cells()),
            }))
        }),
        Command::Flow { input, out } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            let flow = FlowOperator::new(f)?;
            let k = f.complex();
            let mut dims = Vec::new();
            for p in 0..=k.dim().unwrap_or(0) {
                let report = flow.check_flow_matrix(p)?;
                let m = flow.flow_matrix(p)?;
                let base = k.dim_range(p).start;
                let mut entries = Vec::new();
                for row in 0..m.row_count() {
                    for (col, a) in m.row(row) {
                        entries.push(json!([cell(k.simplex(base + row)), cell(k.simplex(base + col)), a]));
                    }
                }
                dims.push(json!({
                    "dim": p,
                    "simplices": cells(k.simplices_of_dim(p)),
                    "entries": entries,
                    "critical": report.critical,
                    "off_diagonal": report.off_diagonal,
                }));
            }
            Ok(json!({ "dimensions": dims, "checked": true }))
        }),
        Command::Levels { input, out, level } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            Ok(match level {
                Some(a) => {
                    let lvl = level_subcomplex(f, a);
                    json!({
                        "threshold": num(a),
                        "sublevel": cells(&lvl.sublevel),
                        "complex": cells(lvl.complex.simplices()),
                        "betti": lvl.complex.betti_numbers_mod2(),
                    })
                }
                None => json!({
                    "levels": f.distinct_values().into_iter().map(|a| {
                        let lvl = level_subcomplex(f, a);
                        json!({
                            "threshold": num(a),
                            "sublevel_size": lvl.sublevel.len(),
                            "complex_size": lvl.complex.len(),
                            "betti": lvl.complex.betti_numbers_mod2(),
                            "critical": f.critical_values().contains(&a),
                        })
                    }).collect::<Vec<_>>()
                }),
            })
        }),
        Command::Collapse { input, out, level, to } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            Ok(match to {
                Some(b) => {
                    let seq = verify_dmt_a(f, b, level)?;
                    seq.replay()?;
                    let mut body = collapse_json(&seq);
                    body["from"] = num(level);
                    body["to"] = num(b);
                    body
                }
                None => {
                    let seq = verify_phibar_collapse(f, level)?;
                    seq.replay()?;
                    let mut body = collapse_json(&seq);
                    body["from"] = num(level);
                    body["onto"] = json!("Phi_bar");
                    body
                }
            })
        }),
        Command::Homology { input, out } => with_input(&input, &out, &|l| {
            let k = &l.complex;
            let betti = k.betti_numbers_mod2();
            let mut body = json!({
                "betti": betti,
                "euler": k.euler_characteristic(),
                "f_vector": k.f_vector(),
                "components": k.component_count(),
            });
            if let Some(f) = &l.function {
                let mut m = vec![0usize; betti.len()];
                for i in f.critical_indices() {
                    m[k.simplex(i).dim()] += 1;
                }
                let alt: i64 = m.iter().enumerate().map(|(p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
                body["morse_counts"] = json!(m);
                body["morse_euler_matches"] = json!(alt == k.euler_characteristic());
                body["weak_inequalities_hold"] = json!(m.iter().zip(&betti).all(|(a, b)| a >= b));
            }
            Ok(body)
        }),
        Command::MountainPass { input, out, minima } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            let mp = mountain_pass_with(f, minima.min1, minima.min0, PathOptions::default())?;
            Ok(json!({
                "c": num(mp.value),
                "edge": cell(&mp.edge),
                "witness": mp.witness.vertices(),
                "family_size": mp.family_size,
                "made_injective": mp.made_injective,
                "min0": minima.min0,
                "min1": minima.min1,
                "sublevel_disconnected": sublevel_splits_at(f, minima.min1)?,
            }))
        }),
        Command::Lscat { input, out, limits } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            let g = f.make_injective();
            let r = LsFamilies::new(&g, &limits_of(&limits))?.solve()?;
            let original = |s: &Simplex| num(f.value(s).expect("cell of K"));
            Ok(json!({
                "dgcat": r.dgcat,
                "critical_cells": r.critical_cells,
                "bound_holds": r.bound_holds(),
                "made_injective": !f.is_injective(),
                "levels": r.levels.iter().map(|lv| json!({
                    "k": lv.k,
                    "c": original(&lv.cell),
                    "cell": cell(&lv.cell),
                    "witness": cells(lv.witness.simplices()),
                })).collect::<Vec<_>>(),
            }))
        }),
        Command::MinmaxCheck { input, out, min0, min1, limits } => with_input(&input, &out, &|l| {
            let f = l.function()?;
            let g = f.make_injective();
            let flow = Arc::new(FlowOperator::new(&g)?);
            match (min0, min1) {
                (Some(v0), Some(v1)) => {
                    let problem = PathProblem::new(&g, v1, v0, PathOptions::default())?;
                    let paths = problem.enumerate()?;
                    let r = check_minmax_data(&problem.instance(flow, &paths))?;
                    Ok(json!({ "instance": "paths", "report": minmax_report_json(&r) }))
                }
                _ => {
                    let fam = LsFamilies::new(&g, &limits_of(&limits))?;
                    let mut reports = Vec::new();
                    for k in 1..=(fam.dgcat() + 1) as usize {
                        let r = check_minmax_data(&fam.instance(k, Arc::clone(&flow)))?;
                        reports.push(json!({ "k": k, "report": minmax_report_json(&r) }));
                    }
                    Ok(json!({ "instance": "category", "reports": reports }))
                }
            }
        }),
        Command::Random { seed, vertices, dim, json } => {
            let k = random_connected_complex(seed, vertices, dim);
            let f = MorseFunction::random(k, seed);
            let text = emit_scx(&f);
            Ok(if json {
                report(json!({
                    "seed": seed,
                    "scx": text,
                    "critical_count": f.critical_indices().len(),
                }))
            } else {
                text
            })
        }
        Command::ExportDot { input, json } => {
            let loaded = load(&input)?;
            let dot = dot_of(&loaded)?;
            Ok(if json { report(json!({ "dot": dot })) } else { dot })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["dmt"]).code, 2);
        assert_eq!(run(["dmt", "random"]).code, 2);
        assert_eq!(run(["dmt", "frobnicate"]).code, 2);
        assert_eq!(run(["dmt", "critical"]).code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["dmt", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("mountain-pass"));
    }

    #[test]
    fn missing_file_is_a_domain_error() {
        let out = run(["dmt", "critical", "--in", "/nonexistent/x.scx"]);
        assert_eq!(out.code, 1);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["kind"], "IoError");
    }

    #[test]
    fn numbers_are_integral_when_possible() {
        assert_eq!(num(4.0).to_string(), "4");
        assert_eq!(num(-0.5).to_string(), "-0.5");
    }

    #[test]
    fn random_is_deterministic() {
        let a = run(["dmt", "random", "--seed", "7"]);
        let b = run(["dmt", "random", "--seed", "7"]);
        assert_eq!(a, b);
        assert_eq!(a.code, 0);
        let (_, f) = parse_scx(&a.stdout).unwrap();
        assert!(f.is_some());
    }
}
