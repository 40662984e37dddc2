use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cosym::error::Error;
use cosym::gallery;
use cosym::manifest::{self, PolicyDoc, Selection};
use cosym::mutate::mutate_and_expect_failure;
use cosym::report::{Overall, Report};

#[derive(Parser)]
#[command(name = "cosym", version, about = "Check cosymplectic structures, groupoids, actions, reductions and Morita bimodules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a manifest and run the selected checks.
    Check {
        manifest: PathBuf,
        /// Comma-separated check families: structure, groupoid, action,
        /// reduction, morita or all.
        #[arg(long, default_value = "all")]
        select: String,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Worked examples.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
    /// Replace one expression in a gallery manifest and require a failure.
    Mutate {
        name: String,
        /// JSON pointer to an expression string, e.g. /structures/std3/omega/terms/x y
        #[arg(long)]
        target: String,
        #[arg(long)]
        replace: String,
        /// A check id that must fail.
        #[arg(long)]
        check: Option<String>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum GalleryCommand {
    List,
    /// Run one entry and print its report.
    Run {
        name: String,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print an entry's manifest.
    Export { name: String },
    /// Run every entry and compare against its expected outcome.
    Verify {
        #[command(flatten)]
        policy: PolicyArgs,
    },
}

#[derive(Args, Clone, Default)]
struct PolicyArgs {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sampling box for every coordinate.
    #[arg(long = "box", num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    bounds: Option<Vec<f64>>,
}

impl PolicyArgs {
    fn doc(&self) -> PolicyDoc {
        PolicyDoc {
            samples: self.samples,
            tolerance: self.tol,
            seed: self.seed,
            bounds: self.bounds.as_ref().map(|b| (b[0], b[1])),
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Include per-check timings.
    #[arg(long)]
    timings: bool,
}

fn say(text: &str) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    stdout.flush()
}

fn emit(report: &Report, out: &OutputArgs) -> Result<ExitCode> {
    match out.format {
        Format::Text => say(&report.to_text(out.timings))?,
        Format::Json => say(&report.to_json(out.timings))?,
    }
    Ok(match report.status {
        Overall::Pass => ExitCode::SUCCESS,
        _ => ExitCode::FAILURE,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            manifest: path,
            select,
            policy,
            output,
        } => {
            let selection = Selection::parse_list(&select)?;
            let overrides = policy.doc();
            let m = manifest::load_manifest(&path, &overrides).with_context(|| format!("loading {}", path.display()))?;
            let report = manifest::run_checks(&m, &selection, &m.policy);
            emit(&report, &output)
        }
        Command::Gallery { command } => match command {
            GalleryCommand::List => {
                for e in gallery::entries() {
                    let outcome = if e.expect_pass { "pass" } else { "fail" };
                    say(&format!("{:<22} {outcome:<5} {}", e.name, e.description))?;
                }
                Ok(ExitCode::SUCCESS)
            }
            GalleryCommand::Run { name, policy, output } => {
                let report = gallery::find(&name)?.run(&policy.doc())?;
                emit(&report, &output)
            }
            GalleryCommand::Export { name } => {
                say(&gallery::find(&name)?.build()?.to_json())?;
                Ok(ExitCode::SUCCESS)
            }
            GalleryCommand::Verify { policy } => {
                let mut bad = 0;
                for e in gallery::entries() {
                    let report = e.run(&policy.doc())?;
                    let mismatches = e.mismatches(&report);
                    if mismatches.is_empty() {
                        say(&format!("ok   {}", e.name))?;
                    } else {
                        bad += 1;
                        say(&format!("FAIL {}", e.name))?;
                        for m in mismatches {
                            say(&format!("     {m}"))?;
                        }
                    }
                }
                Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
            }
        },
        Command::Mutate {
            name,
            target,
            replace,
            check,
            policy,
            output,
        } => {
            let entry = gallery::find(&name)?;
            if !entry.expect_pass {
                bail!("`{name}` already fails without a mutation");
            }
            match mutate_and_expect_failure(entry, &target, &replace, check.as_deref(), &policy.doc()) {
                Ok(report) => {
                    emit(&report, &output)?;
                    eprintln!("mutation detected");
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::Undetected(msg)) => {
                    eprintln!("{msg}");
                    Ok(ExitCode::FAILURE)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
