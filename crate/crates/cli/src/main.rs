use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use infodyn::montecarlo::default_workers;
use infodyn::output::{now, write_experiment, RunMetadata};
use infodyn::scenarios::{figures, Experiment, ExperimentOutput, Overrides};
use infodyn::{run_experiment, Error};

/// Monte Carlo simulator for Bayesian belief dynamics under noisy information.
#[derive(Parser, Debug)]
#[command(name = "infodyn", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Master seed for every run in the experiment.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of Monte Carlo paths per run.
    #[arg(long, global = true)]
    paths: Option<usize>,
    /// Time step in years.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "INFODYN_WORKERS")]
    workers: Option<usize>,
    /// Output directory (default: runs/<experiment name>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the resolved config as JSON and exit without running.
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one of the built-in experiments (1 to 6).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        number: u8,
    },
    /// Run an experiment described by a JSON config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Win probability against today's poll support.
    PollCurve {
        /// JSON config of kind `poll_curve`; defaults to the built-in sweep.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Search for the most damaging release time of a disinformation pulse.
    TimingSearch {
        /// JSON config of kind `timing_search`; defaults to the built-in search.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn read_experiment(path: &Path) -> Result<Experiment, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
    Experiment::from_json(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn expect_kind(exp: Experiment, want: &str, path: &Path) -> Result<Experiment, Failure> {
    let ok = matches!(
        (&exp, want),
        (Experiment::PollCurve(_), "poll_curve") | (Experiment::TimingSearch(_), "timing_search")
    );
    if ok {
        Ok(exp)
    } else {
        Err(Failure::Config(format!(
            "{}: expected a config of kind {want}",
            path.display()
        )))
    }
}

fn resolve(command: &Command) -> Result<Experiment, Failure> {
    Ok(match command {
        Command::Figure { number } => figures::figure(*number)?,
        Command::Simulate { config } => read_experiment(config)?,
        Command::PollCurve { config: Some(p) } => expect_kind(read_experiment(p)?, "poll_curve", p)?,
        Command::PollCurve { config: None } => Experiment::PollCurve(figures::poll_curve()),
        Command::TimingSearch { config: Some(p) } => expect_kind(read_experiment(p)?, "timing_search", p)?,
        Command::TimingSearch { config: None } => Experiment::TimingSearch(figures::timing_search()),
    })
}

fn report(out: &ExperimentOutput) -> String {
    let mut text = String::new();
    match out {
        ExperimentOutput::Scenarios { runs, .. } => {
            for r in runs {
                let s = &r.summary;
                let _ = write!(
                    text,
                    "{:<24} paths={:<6} escape={:.4} converged={:.4} diverted={:.4} median_pi_truth={:.4}",
                    s.id, s.n_paths, s.escape_fraction, s.converged_fraction, s.diverted_fraction, s.terminal.q50
                );
                if let Some(sep) = &s.separation {
                    let _ = write!(
                        text,
                        " median_halving={}",
                        sep.median_halving_time.map_or("never".into(), |t| format!("{t:.3}"))
                    );
                    if let Some(up) = sep.upward_fraction_at_checkpoint {
                        let _ = write!(text, " upward_at_checkpoint={up:.4}");
                    }
                }
                if s.regime_switches.max > 0 {
                    let _ = write!(text, " switched={:.4}", s.regime_switches.fraction_with_switch);
                }
                text.push('\n');
            }
        }
        ExperimentOutput::PollCurve(p) => {
            for sigma in p.rows.iter().map(|r| r.sigma).fold(Vec::new(), |mut v, s| {
                if !v.contains(&s) {
                    v.push(s);
                }
                v
            }) {
                if let Some(r) = p.row(0.52, sigma) {
                    let _ = writeln!(text, "sigma={sigma} s=0.52 win={:.4} (se {:.4})", r.estimate, r.stderr);
                }
            }
        }
        ExperimentOutput::TimingSearch(t) => {
            let _ = writeln!(
                text,
                "best onset={} wrong={:.4} baseline={:.4}",
                t.best_onset, t.best_wrong_fraction, t.baseline_wrong_fraction
            );
        }
    }
    text
}

/// Writes to stdout, ignoring a closed pipe (`infodyn ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let mut exp = resolve(&cli.command)?;
    exp.apply(Overrides {
        seed: g.seed,
        n_paths: g.paths,
        dt: g.dt,
    });
    exp.validate()?;
    if g.dump_config {
        emit(&(exp.to_json() + "\n"));
        return Ok(());
    }
    let workers = g.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(Failure::Config("--workers must be at least 1".into()));
    }
    let out_dir = g.out.clone().unwrap_or_else(|| Path::new("runs").join(exp.name()));

    let started = now();
    let output = run_experiment(&exp, workers)?;
    let finished = now();
    let meta = RunMetadata {
        started,
        finished,
        workers,
    };
    write_experiment(&out_dir, &exp, &output, &meta)?;
    emit(&format!("{}wrote {}\n", report(&output), out_dir.display()));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
