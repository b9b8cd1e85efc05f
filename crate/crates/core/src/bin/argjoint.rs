use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use argjoint::commands::{self, RunConfig, SynthConfig};
use argjoint::eval::{Method, Overwrite, Task};
use argjoint::synth::CorpusSpec;
use argjoint::{CorpusKind, Error, JointWeights, Variant};

/// Joint decoding of argumentation-mining sub-task scores.
#[derive(Parser)]
#[command(name = "argjoint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a corpus and write JSON Lines predictions.
    Decode {
        #[command(flatten)]
        run: RunArgs,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-fold evaluation with paired t-tests against `separate`.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        /// Output directory for report.json, rows.csv and summary.csv;
        /// the summary goes to stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Overwrite a fraction of scores with gold and re-decode.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Task whose scores are overwritten; all tasks if omitted.
        #[arg(long)]
        task: Option<Task>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
        fractions: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode under a grid of combination weights.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Target microtext task; ignored for essays, which sweep `v`.
        #[arg(long, default_value = "cc")]
        task: Task,
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
        grid: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic corpus with known gold structure.
    Synth {
        #[arg(long)]
        kind: CorpusKind,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long, default_value_t = 0.4)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report schema problems and gold-constraint violations.
    Validate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Corpus in JSON Lines form.
    corpus: PathBuf,
    #[arg(long)]
    kind: CorpusKind,
    /// Decoding method; `evaluate` accepts a comma-separated list and
    /// defaults to all three.
    #[arg(long, value_delimiter = ',')]
    method: Vec<Method>,
    /// Microtext weights w1,w2,w3,w4 for cc, ro, fu, at.
    #[arg(long, value_parser = parse_weights, default_value = "0.25,0.25,0.25,0.25")]
    weights: [f64; 4],
    /// Essay balance between component and relation scores.
    #[arg(long, default_value_t = 0.5)]
    v: f64,
    /// Essay evidence-graph mix of premise and support scores.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Essay constraint variant, overriding the one stored per instance.
    #[arg(long)]
    variant: Option<Variant>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn parse_weights(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated weights, got {}", v.len()))
}

impl RunArgs {
    fn config(&self, default_methods: &[Method]) -> RunConfig {
        let [w1, w2, w3, w4] = self.weights;
        RunConfig {
            corpus: self.corpus.clone(),
            kind: self.kind,
            methods: if self.method.is_empty() {
                default_methods.to_vec()
            } else {
                self.method.clone()
            },
            weights: JointWeights::microtext(w1, w2, w3, w4).with_v(self.v).with_beta(self.beta),
            variant: self.variant,
            seed: self.seed,
            k: self.k,
            jobs: self.jobs.max(1),
        }
    }
}

fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(path)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Decode { run, out } => {
            let summary = commands::cmd_decode(&run.config(&[Method::Ilp]), sink(out.as_deref())?)?;
            if summary.infeasible_count > 0 {
                eprintln!(
                    "{} infeasible instance(s): {}",
                    summary.infeasible_count,
                    summary.infeasible_ids.join(", ")
                );
            }
        }
        Command::Evaluate { run, out } => {
            let evaluation = commands::cmd_evaluate(&run.config(&Method::ALL), out.as_deref())?;
            if out.is_none() {
                evaluation.write_summary_csv(io::stdout().lock())?;
            }
        }
        Command::Simulate {
            run,
            task,
            fractions,
            out,
        } => {
            let target = task.map_or(Overwrite::All, Overwrite::Task);
            commands::cmd_simulate(&run.config(&[Method::Ilp]), target, &fractions, sink(out.as_deref())?)?;
        }
        Command::Sweep { run, task, grid, out } => {
            commands::cmd_sweep(&run.config(&[Method::Ilp]), task, &grid, sink(out.as_deref())?)?;
        }
        Command::Synth {
            kind,
            count,
            n_min,
            n_max,
            variant,
            epsilon,
            seed,
            out,
        } => {
            let config = SynthConfig {
                kind,
                spec: CorpusSpec {
                    count,
                    n_min,
                    n_max,
                    epsilon,
                    seed,
                },
                variant,
            };
            commands::cmd_synth(&config, sink(out.as_deref())?)?;
        }
        Command::Validate { run, out } => {
            let report = commands::cmd_validate(&run.config(&[Method::Ilp]), sink(out.as_deref())?)?;
            if report.schema_errors > 0 {
                return Err(Error::Usage(format!(
                    "{} of {} instance(s) are malformed",
                    report.schema_errors, report.instances
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
