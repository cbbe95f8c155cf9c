//! The `dynepi` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input, 3 internal invariant
//! violation (a false announcement, a broken token count, a bad solve).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dynepi_core::prisoners::{
    closed_form_t3, exact_counter_expectation, exact_uniform_expectation, CounterProtocol,
    MixedProtocol, Protocol, SimError, SolveError, UniformProtocol, DAYS_PER_YEAR,
    DEFAULT_STEP_CAP,
};
use dynepi_core::puzzles::{self, PuzzleResult, Weekday};
use dynepi_core::{parse_formula_for, KripkeModel, Value};
use serde_json::json;

use crate::batch::{run_batch, run_batch_serial};
use crate::document::{load_model, save_model};
use crate::dot::{export_dot, EdgeStyle};
use crate::export::{write_counter_chain, write_records, write_table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "dynepi",
    version,
    about = "Epistemic puzzle solver and prisoner simulator"
)]
struct Cli {
    /// More diagnostics on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one of the built-in puzzles.
    Puzzle {
        #[arg(value_enum)]
        name: PuzzleName,
        /// Print the world count after every announcement.
        #[arg(long)]
        trace: bool,
        /// Write round-<k>.dot for every step into this directory.
        #[arg(long, value_name = "DIR")]
        dot: Option<PathBuf>,
    },
    /// Evaluate a formula on a model file.
    Check {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Without it, print every world where the formula holds.
        #[arg(long, value_name = "ID")]
        world: Option<String>,
    },
    /// Publicly announce a formula and save the resulting model.
    Update {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Prisoners and the light bulb.
    Prison {
        #[command(subcommand)]
        command: PrisonCommand,
    },
}

#[derive(Subcommand, Debug)]
enum PrisonCommand {
    /// Monte Carlo batch; prints a JSON report.
    Simulate {
        #[arg(long, value_enum)]
        protocol: SimProtocol,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        runs: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        cap: u64,
        /// Per-run CSV output.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Index of the counter for the counter protocol.
        #[arg(long, default_value_t = 0)]
        counter: usize,
        /// Constant counter probability for the mixed protocol instead of the
        /// default policy.
        #[arg(long)]
        probability: Option<f64>,
        /// Run on the calling thread only.
        #[arg(long)]
        serial: bool,
    },
    /// Exact expected escape time.
    Exact {
        #[arg(long, value_enum)]
        protocol: ExactProtocol,
        #[arg(long)]
        n: u32,
        /// Full table as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Evaluate the three-prisoner formula for T at token values A, B, C.
    ClosedForm { a: u64, b: u64, c: u64 },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PuzzleName {
    Cheryl,
    Blind,
    Abby,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimProtocol {
    Counter,
    Uniform,
    Mixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExactProtocol {
    Uniform,
    Counter,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e)
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Setup(_) | SimError::Protocol(_) => Failure::invalid(e),
            _ => Failure::internal(e),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::OutOfRange { .. } | SolveError::ZeroTokens => Failure::invalid(e),
            _ => Failure::internal(e),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::invalid(e)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let verbose = cli.verbose;
    match cli.command {
        Command::Puzzle { name, trace, dot } => puzzle(name, trace, dot.as_deref(), out),
        Command::Check {
            model,
            formula,
            world,
        } => check(&model, &formula, world.as_deref(), out),
        Command::Update {
            model,
            formula,
            out: path,
        } => {
            let m = read_model(&model)?;
            let f = parse_formula_for(&formula, &m).map_err(Failure::invalid)?;
            let updated = m.update(&f).map_err(Failure::invalid)?;
            fs::write(&path, save_model(&updated))?;
            writeln!(out, "{} of {} worlds remain", updated.len(), m.len())?;
            Ok(())
        }
        Command::Prison { command } => prison(command, verbose, out, err),
    }
}

fn read_model(path: &Path) -> Result<KripkeModel, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    load_model(&bytes).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn check(
    path: &Path,
    formula: &str,
    world: Option<&str>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let m = read_model(path)?;
    let f = parse_formula_for(formula, &m).map_err(Failure::invalid)?;
    match world {
        Some(w) => writeln!(out, "{}", m.eval_formula(w, &f).map_err(Failure::invalid)?)?,
        None => {
            for id in m.satisfying(&f).map_err(Failure::invalid)? {
                writeln!(out, "{id}")?;
            }
        }
    }
    Ok(())
}

fn puzzle(
    name: PuzzleName,
    trace: bool,
    dot: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let (initial, result, styles): (KripkeModel, PuzzleResult, [(&str, EdgeStyle); 2]) = match name
    {
        PuzzleName::Cheryl => (
            puzzles::build_cheryl(),
            puzzles::solve_cheryl().map_err(Failure::internal)?,
            [("Albert", EdgeStyle::Dotted), ("Bernard", EdgeStyle::Solid)],
        ),
        PuzzleName::Blind => (
            puzzles::build_blind(),
            puzzles::solve_blind().map_err(Failure::internal)?,
            [("A", EdgeStyle::Solid), ("B", EdgeStyle::Dotted)],
        ),
        PuzzleName::Abby => (
            puzzles::build_abby(),
            puzzles::solve_abby().map_err(Failure::internal)?,
            [("Abby", EdgeStyle::Solid), ("Barry", EdgeStyle::Dotted)],
        ),
    };
    if trace {
        for (k, step) in result.trace.steps.iter().enumerate() {
            writeln!(out, "{k}: {} worlds  {}", step.count, step.label)?;
        }
        let counts: Vec<String> = result
            .trace
            .counts()
            .iter()
            .map(|c| c.to_string())
            .collect();
        writeln!(out, "counts: {}", counts.join(" "))?;
    }
    if let Some(dir) = dot {
        fs::create_dir_all(dir)?;
        for (k, step) in result.trace.steps.iter().enumerate() {
            let ids: Vec<&str> = step.worlds.iter().map(String::as_str).collect();
            let sub = initial.submodel(&ids).map_err(Failure::internal)?;
            let text = export_dot(&sub, &styles).map_err(Failure::internal)?;
            fs::write(dir.join(format!("round-{k}.dot")), text)?;
        }
    }
    let answer = match name {
        PuzzleName::Cheryl => format!(
            "{} {}",
            result.value("month").expect("month"),
            result.value("day").expect("day")
        ),
        PuzzleName::Blind => result.value("c").expect("c").to_string(),
        PuzzleName::Abby => match result.value("abby") {
            Some(Value::Int(d)) if (1..=7).contains(d) => Weekday(*d as u8).to_string(),
            other => return Err(Failure::internal(format!("unexpected answer {other:?}"))),
        },
    };
    writeln!(out, "{answer}")?;
    Ok(())
}

fn write_file(
    path: &Path,
    fill: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>,
) -> Result<(), Failure> {
    let mut buf = Vec::new();
    fill(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

fn prison(
    command: PrisonCommand,
    verbose: u8,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    match command {
        PrisonCommand::Simulate {
            protocol,
            n,
            runs,
            seed,
            cap,
            csv,
            counter,
            probability,
            serial,
        } => {
            let p: Box<dyn Protocol> = match protocol {
                SimProtocol::Counter => {
                    if counter >= n as usize {
                        return Err(Failure::invalid(format!(
                            "counter index {counter} must be below n = {n}"
                        )));
                    }
                    Box::new(CounterProtocol::new(counter))
                }
                SimProtocol::Uniform => Box::new(UniformProtocol),
                SimProtocol::Mixed => match probability {
                    Some(q) if !(0.0..=1.0).contains(&q) => {
                        return Err(Failure::invalid(format!("probability {q} not in [0, 1]")))
                    }
                    Some(q) => Box::new(MixedProtocol::constant(q)),
                    None => Box::new(MixedProtocol::default()),
                },
            };
            let batch = if serial {
                run_batch_serial(p.as_ref(), n, runs, seed, cap)?
            } else {
                run_batch(p.as_ref(), n, runs, seed, cap)?
            };
            if batch.report.capped > 0 {
                writeln!(
                    err,
                    "warning: {} of {} runs hit the cap of {cap} days and are excluded from the statistics",
                    batch.report.capped, batch.report.runs
                )?;
            }
            if let Some(path) = csv {
                write_file(&path, |buf| write_records(buf, &batch.records))?;
                if verbose > 0 {
                    writeln!(err, "wrote {}", path.display())?;
                }
            }
            let text = serde_json::to_string_pretty(&batch.report).map_err(Failure::internal)?;
            writeln!(out, "{text}")?;
            Ok(())
        }
        PrisonCommand::Exact { protocol, n, csv } => {
            let report = match protocol {
                ExactProtocol::Uniform => {
                    let table = exact_uniform_expectation(n)?;
                    let init = table
                        .initial()
                        .ok_or_else(|| Failure::internal("no initial state"))?;
                    if verbose > 0 {
                        writeln!(
                            err,
                            "{} states, max residual {:e}",
                            table.entries.len(),
                            table.max_residual
                        )?;
                    }
                    if let Some(path) = csv {
                        write_file(&path, |buf| write_table(buf, &table))?;
                    }
                    json!({
                        "protocol": "uniform",
                        "n": n,
                        "expected_days": init.days,
                        "expected_years": init.days / DAYS_PER_YEAR,
                        "exact": init.exact.as_ref().map(|r| r.to_string()),
                        "states": table.entries.len(),
                        "max_residual": table.max_residual,
                    })
                }
                ExactProtocol::Counter => {
                    let chain = exact_counter_expectation(n)?;
                    if let Some(path) = csv {
                        write_file(&path, |buf| write_counter_chain(buf, &chain))?;
                    }
                    let days = chain.expected_days();
                    json!({
                        "protocol": "counter",
                        "n": n,
                        "expected_days": days,
                        "expected_years": days / DAYS_PER_YEAR,
                        "exact": chain.expected().to_string(),
                        "states": chain.values.len(),
                    })
                }
            };
            let text = serde_json::to_string_pretty(&report).map_err(Failure::internal)?;
            writeln!(out, "{text}")?;
            Ok(())
        }
        PrisonCommand::ClosedForm { a, b, c } => {
            writeln!(out, "{}", closed_form_t3(a, b, c)?)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynepi_core::prisoners::Light;

    #[test]
    fn simulation_failures_map_to_exit_codes() {
        let false_announcement = SimError::FalseAnnouncement {
            prisoner: 0,
            day: 1,
            missing: 2,
        };
        assert_eq!(Failure::from(false_announcement).code, EXIT_INTERNAL);
        let broken = SimError::Conservation {
            day: 3,
            held: 2,
            light: Light::Off,
            n: 3,
        };
        assert_eq!(Failure::from(broken).code, EXIT_INTERNAL);
        assert_eq!(Failure::from(SimError::Setup("x")).code, EXIT_INVALID);
        assert_eq!(
            Failure::from(SolveError::Residual { residual: 1.0 }).code,
            EXIT_INTERNAL
        );
    }
}
