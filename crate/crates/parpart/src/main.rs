use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use parpart::formats::{condition_json, rational_str, to_canonical_string, write_json, Artifact, SystemFile};
use parpart::pipeline;
use parpart::verification::{resolve_workers, verify_artifact, VerifyOptions, WORKERS_ENV};
use parpart_core::verify::{brute_force_search, check_conditions, ConditionReport};
use parpart_core::{Error as CoreError, Mode, Threshold};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "parpart", version, about = "Bag-free clique packings, cycle powers and parpartition families")]
struct Cli {
    /// Output style for stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for verification (0 = one per core).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Guaranteed,
    BestEffort,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Guaranteed => Mode::Guaranteed,
            ModeArg::BestEffort => Mode::BestEffort,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the disjointness/intersection system on the k-subsets of [n].
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Threshold as "p/q".
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate seeded synthetic systems.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Evaluate conditions 1.1, 1.2, 2.1, 2.2 for a system.
    Conditions {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find floor(m/l) disjoint G1-cliques with no bag between any two.
    Decompose {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Guaranteed)]
        mode: ModeArg,
        /// Count every bad candidate and check the bound.
        #[arg(long)]
        audit: bool,
        #[arg(short, long)]
        output: PathBuf,
        /// Where to write the run report (stdout otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Find a cyclic order whose (l-1)-th power lies in G1 with no bagged windows.
    Hampower {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        l: usize,
        /// Required for synthetic systems; subset systems use q = m.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Guaranteed)]
        mode: ModeArg,
        #[arg(long)]
        audit: bool,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Independently verify a family or order; exits 0 iff no violations.
    Verify {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        artifact: PathBuf,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        q: Option<usize>,
        /// Queries per sampled count audit.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive search for a bag-free clique family (m <= 20).
    Oracle {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        target: usize,
    },
}

#[derive(Subcommand)]
enum SynthKind {
    /// Dense G1 with the given minimum degree; G2 and G3 empty.
    Dense {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        min_degree: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Add sparse G2, G3 avoiding the G1 of an existing system.
    Pair {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        max2: usize,
        #[arg(long)]
        max3: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Dense G1 and a sparse pair in one step (pair seed = seed + 1).
    System {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        min_degree: usize,
        #[arg(long)]
        max2: usize,
        #[arg(long)]
        max3: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn condition_table(conditions: &[ConditionReport]) -> String {
    conditions
        .iter()
        .map(|c| {
            format!(
                "{:<20} {:>14} {} {:<14} {}\n",
                c.id,
                rational_str(&c.lhs),
                c.relation.symbol(),
                rational_str(&c.rhs),
                if c.holds { "holds" } else { "FAILS" }
            )
        })
        .collect()
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => print!("{}", to_canonical_string(value)),
        Format::Text => print!("{}", text()),
    }
}

fn save<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_json(path, value).with_context(|| format!("writing {}", path.display()))
}

fn read_system(path: &Path) -> Result<SystemFile> {
    Ok(SystemFile::read(path)?)
}

fn threshold(s: &Option<String>) -> Result<Option<Threshold>> {
    s.as_deref().map(str::parse).transpose().map_err(Into::into)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Reduce { n, k, alpha, beta, output } => {
            let out = pipeline::reduce(pipeline::subset_params(n, k, &alpha, &beta)?)?;
            if let Some(path) = output {
                save(&path, &out.system)?;
            }
            emit(format, &out.summary, || {
                let s = &out.summary;
                let mut t = format!(
                    "m = {}\ndeg1 = {} (measured {}..{})\ndeg2 = {} (measured {}..{})\ndeg3 = {} (measured {}..{})\n",
                    s["m"],
                    s["formula"]["deg1"].as_str().unwrap_or_default(),
                    s["measured"]["g1"]["min"],
                    s["measured"]["g1"]["max"],
                    s["formula"]["deg2"].as_str().unwrap_or_default(),
                    s["measured"]["g2"]["min"],
                    s["measured"]["g2"]["max"],
                    s["formula"]["deg3"].as_str().unwrap_or_default(),
                    s["measured"]["g3"]["min"],
                    s["measured"]["g3"]["max"],
                );
                for w in s["warnings"].as_array().into_iter().flatten() {
                    t.push_str(&format!("warning: {}\n", w.as_str().unwrap_or_default()));
                }
                t
            });
        }
        Command::Synth { kind } => {
            let (sys, path) = match kind {
                SynthKind::Dense { m, min_degree, seed, output } => (pipeline::synth_dense(m, min_degree, seed)?, output),
                SynthKind::Pair { sys, max2, max3, seed, output } => {
                    (pipeline::synth_pair(&read_system(&sys)?, max2, max3, seed)?, output)
                }
                SynthKind::System { m, min_degree, max2, max3, seed, output } => {
                    (pipeline::synth_system(m, min_degree, max2, max3, seed)?, output)
                }
            };
            save(&path, &sys)?;
            let summary = json!({ "m": sys.m, "e1": sys.g1.len(), "e2": sys.g2.len(), "e3": sys.g3.len(), "output": path });
            emit(format, &summary, || {
                format!("wrote {} (m = {}, |E1| = {}, |E2| = {}, |E3| = {})\n", path.display(), sys.m, sys.g1.len(), sys.g2.len(), sys.g3.len())
            });
        }
        Command::Conditions { sys, l, q, output } => {
            let system = read_system(&sys)?.to_system()?;
            let reports = check_conditions(
                system.vertex_count() as u64,
                l as u64,
                q as u64,
                system.min_degree1() as u64,
                system.max_degree2() as u64,
                system.max_degree3() as u64,
            );
            let value = Value::Array(reports.iter().map(condition_json).collect());
            if let Some(path) = output {
                save(&path, &value)?;
            }
            emit(format, &value, || condition_table(&reports));
        }
        Command::Decompose { sys, l, mode, audit, output, report } => {
            let run = pipeline::decompose(&read_system(&sys)?, l, mode.into(), audit)?;
            save(&output, &run.artifact)?;
            finish_run(format, &run.report_json, report.as_deref(), || {
                format!("wrote {} ({} blocks)\n", output.display(), run.artifact.blocks.as_ref().map_or(0, Vec::len))
            })?;
            if run.bad_count.as_ref().is_some_and(|a| !a.passed) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Hampower { sys, l, q, mode, audit, output, report } => {
            let run = pipeline::hampower(&read_system(&sys)?, l, q, mode.into(), audit)?;
            save(&output, &run.artifact)?;
            finish_run(format, &run.report_json, report.as_deref(), || {
                format!("wrote {} (cyclic order of {} vertices)\n", output.display(), run.artifact.m)
            })?;
            if run.bad_count.as_ref().is_some_and(|a| !a.passed) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { sys, artifact, alpha, beta, q, samples, seed, output } => {
            let system = read_system(&sys)?;
            let art = Artifact::read(&artifact)?;
            let opts = VerifyOptions {
                alpha: threshold(&alpha)?,
                beta: threshold(&beta)?,
                q,
                samples,
                seed,
                workers: resolve_workers(cli.workers),
            };
            let report = verify_artifact(&system, &art, &opts)?;
            let value = report.to_json();
            if let Some(path) = output {
                save(&path, &value)?;
            }
            emit(format, &value, || report.to_text());
            if !report.ok() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Oracle { sys, l, target } => {
            let system = read_system(&sys)?.to_system()?;
            let found = brute_force_search(&system, l, target)?;
            let value = json!({ "exists": found.is_some(), "witness": found });
            emit(format, &value, || match &found {
                Some(w) => format!("exists: {w:?}\n"),
                None => "does not exist\n".to_owned(),
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn finish_run(format: Format, report: &Value, path: Option<&Path>, text: impl FnOnce() -> String) -> Result<()> {
    match path {
        Some(p) => {
            save(p, report)?;
            emit(format, report, text);
        }
        None => print!("{}", to_canonical_string(report)),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            if let Some(CoreError::ConditionUnmet(table)) = err.downcast_ref::<CoreError>() {
                eprint!("error: conditions unmet\n{}", condition_table(table));
            } else if let Some(CoreError::ConditionUnmet(table)) =
                err.downcast_ref::<parpart::Error>().and_then(|e| match e {
                    parpart::Error::Core(c) => Some(c),
                    _ => None,
                })
            {
                eprint!("error: conditions unmet\n{}", condition_table(table));
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(2)
        }
    }
}
