//! Argument parsing and dispatch for the `germlift` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use germlift::fixtures;
use germlift::groebner::OrderChoice;
use germlift::io::{AugmentCheck, DerlogMode, Manifest, ManifestError, Task, TaskArgs, TaskOp};

use crate::report::{Report, Verdict};
use crate::runner::{run_manifest, run_task, Options, UsageError};
use crate::suite::{self, Fixtures};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "germlift", version, about = "Liftable vector fields over map germs, with exact certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Monomial order: auto uses the ring's weights when it declares them.
    #[arg(long, global = true, default_value = "auto")]
    pub order: OrderChoice,
    /// Budget in seconds for every Gröbner basis computation of a task.
    #[arg(long, global = true, env = "GERMLIFT_TIMEOUT", value_name = "SEC")]
    pub timeout: Option<f64>,
    /// Print schema-versioned JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print witnesses and every passing check.
    #[arg(long, global = true)]
    pub show_witness: bool,
    /// Include wall-clock timing in JSON output.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ManifestArg {
    /// Manifest file, or the name of a bundled fixture.
    #[arg(short = 'm', long = "manifest", value_name = "PATH")]
    pub manifest: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify each field of a list as liftable over a map.
    LiftCheck {
        #[command(flatten)]
        manifest: ManifestArg,
        #[arg(long)]
        map: String,
        #[arg(long)]
        fields: String,
    },
    /// Compute Lift of the core from Lift of a stable unfolding.
    FromUnfolding {
        #[command(flatten)]
        manifest: ManifestArg,
        #[arg(long)]
        unfolding: String,
        /// Field list generating Lift of the unfolding.
        #[arg(long)]
        fields: String,
        /// Field list the result must equal.
        #[arg(long)]
        expect: Option<String>,
        /// Compare the result with Derlog of this divisor.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Logarithmic vector fields along a divisor.
    Derlog {
        #[command(flatten)]
        manifest: ManifestArg,
        #[arg(long)]
        divisor: String,
        #[arg(long, default_value = "delta")]
        mode: DerlogMode,
        #[arg(long)]
        expect: Option<String>,
    },
    /// Checks on the augmentation of a germ.
    Augment {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Augmentation declared in the manifest.
        #[arg(long = "spec", visible_alias = "augmentation")]
        spec: String,
        #[arg(short = 'k', long)]
        k: u32,
        #[arg(long)]
        check: AugmentCheck,
    },
    /// Run the tasks declared in a manifest.
    Run {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Only these task ids.
        #[arg(long = "task", value_name = "ID")]
        tasks: Vec<String>,
    },
    /// Run every acceptance criterion on the bundled fixtures.
    PaperSuite {
        /// Criterion numbers or tags, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Directory holding replacement fixture manifests.
        #[arg(long, value_name = "DIR")]
        fixtures: Option<PathBuf>,
        /// Cases per property suite.
        #[arg(long, default_value_t = crate::properties::DEFAULT_CASES)]
        cases: usize,
        #[arg(long, default_value_t = crate::properties::DEFAULT_SEED)]
        seed: u64,
    },
}

fn load_manifest(name: &str) -> Result<Manifest, ManifestError> {
    let path = Path::new(name);
    if !path.exists() {
        if let Some(text) = fixtures::ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t) {
            return text.parse();
        }
    }
    Manifest::load(path)
}

fn options(g: &Global) -> Result<Options, UsageError> {
    let timeout = match g.timeout {
        None => None,
        Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(UsageError(format!("invalid timeout {s}"))),
    };
    Ok(Options {
        order: g.order,
        timeout,
        timing: g.timing,
    })
}

fn single(op: TaskOp, args: TaskArgs) -> Task {
    Task {
        id: op.to_string(),
        op,
        args,
    }
}

fn emit(out: &mut dyn Write, reports: &[Report], g: &Global, many: bool) -> std::io::Result<()> {
    if g.json {
        if many {
            let values: Vec<_> = reports.iter().collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&values).expect("reports serialize"))
        } else {
            writeln!(out, "{}", reports[0].to_json())
        }
    } else {
        for r in reports {
            write!(out, "{}", r.render(g.show_witness))?;
        }
        Ok(())
    }
}

/// A passing verdict stands only if its certificates re-verify.
fn settle(reports: &mut [Report]) {
    for r in reports.iter_mut() {
        if r.verdict == Verdict::Pass {
            if let Err(e) = r.reverify() {
                r.checks.push(crate::report::Check {
                    name: "certificates re-verify".into(),
                    verdict: Verdict::Fail,
                    detail: e,
                });
                r.verdict = Verdict::Fail;
            }
        }
    }
}

/// Parses `args` and runs the command, writing to `out` and `err`.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_USAGE } else { 0 };
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "germlift: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "germlift: {m}");
            EXIT_DATA
        }
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<ManifestError> for Failure {
    fn from(e: ManifestError) -> Self {
        Failure::Data(e.to_string())
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = &cli.global;
    let opts = options(g)?;
    let (manifest, tasks) = match &cli.command {
        Command::PaperSuite {
            only,
            fixtures,
            cases,
            seed,
        } => {
            let fx = match fixtures {
                Some(dir) => Fixtures::from_dir(dir)?,
                None => Fixtures::bundled()?,
            };
            let config = suite::Config {
                only: only.clone(),
                cases: *cases,
                seed: *seed,
                options: opts,
            };
            let results = suite::run(&fx, &config)?;
            let text = if g.json {
                suite::to_json(&results, g.timing)
            } else {
                suite::render(&results, g.show_witness)
            };
            let _ = write!(out, "{text}");
            return Ok(suite::overall(&results).exit_code());
        }
        Command::LiftCheck { manifest, map, fields } => (
            manifest,
            vec![single(
                TaskOp::LiftCheck,
                TaskArgs {
                    map: Some(map.clone()),
                    fields: Some(fields.clone()),
                    ..TaskArgs::default()
                },
            )],
        ),
        Command::FromUnfolding {
            manifest,
            unfolding,
            fields,
            expect,
            divisor,
        } => (
            manifest,
            vec![single(
                TaskOp::FromUnfolding,
                TaskArgs {
                    unfolding: Some(unfolding.clone()),
                    fields: Some(fields.clone()),
                    expect: expect.clone(),
                    divisor: divisor.clone(),
                    ..TaskArgs::default()
                },
            )],
        ),
        Command::Derlog {
            manifest,
            divisor,
            mode,
            expect,
        } => (
            manifest,
            vec![single(
                TaskOp::Derlog,
                TaskArgs {
                    divisor: Some(divisor.clone()),
                    mode: Some(*mode),
                    expect: expect.clone(),
                    ..TaskArgs::default()
                },
            )],
        ),
        Command::Augment { manifest, spec, k, check } => (
            manifest,
            vec![single(
                TaskOp::Augment,
                TaskArgs {
                    augmentation: Some(spec.clone()),
                    k: Some(*k),
                    check: Some(*check),
                    ..TaskArgs::default()
                },
            )],
        ),
        Command::Run { manifest, tasks } => {
            let m = load_manifest(&manifest.manifest)?;
            let mut reports = run_manifest(&m, tasks, &opts)?;
            settle(&mut reports);
            let _ = emit(out, &reports, g, true);
            let worst = reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass);
            return Ok(worst.exit_code());
        }
    };
    let m = load_manifest(&manifest.manifest)?;
    let mut reports = Vec::new();
    for t in &tasks {
        reports.push(run_task(&m, t, &opts)?);
    }
    settle(&mut reports);
    let _ = emit(out, &reports, g, false);
    Ok(reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass).exit_code())
}
