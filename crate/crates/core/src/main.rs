//! Command-line front end: single runs, sweeps and figure bundles written as
//! CSV with a JSON sidecar.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ofdm_feedback::config::parse_config;
use ofdm_feedback::experiment::{
    run_figure, run_scheme, sweep, Axis, ExperimentRecord, RunOverrides, SchemeConfig,
};
use ofdm_feedback::output::{emit_csv, emit_json};
use ofdm_feedback::{selftest, Error};

#[derive(Debug, Parser)]
#[command(
    version,
    about = "Limited-feedback power and bit allocation simulator for OFDM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scheme at one operating point
    Run(Common),
    /// Sweep one parameter of the configured scheme
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary: K, R, B, M or SNR (dB)
        #[arg(long)]
        axis: String,
        /// Comma-separated axis values
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Vec<f64>,
    },
    /// Reproduce the curve set of one figure (1-6)
    Figure {
        id: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in oracle checks
    Selftest,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat TOML configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count override
    #[arg(long)]
    trials: Option<u64>,
    /// Overwrite existing result files
    #[arg(long)]
    force: bool,
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

impl Common {
    fn overrides(&self) -> RunOverrides {
        RunOverrides {
            seed: self.seed,
            trials: self.trials,
            training_trials: None,
        }
    }

    fn load(&self) -> Result<SchemeConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => SchemeConfig::default(),
        };
        self.overrides().apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    fn write(&self, stem: &str, records: &[ExperimentRecord]) -> Result<(), Failure> {
        fs::create_dir_all(&self.out)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", self.out.display())))?;
        let csv = self.out.join(format!("{stem}.csv"));
        let json = self.out.join(format!("{stem}.json"));
        if !self.force {
            for path in [&csv, &json] {
                refuse_overwrite(path)?;
            }
        }
        emit_csv(records, &csv)?;
        emit_json(records, &json)?;
        for rec in records {
            eprintln!(
                "{} {}={:.6} (stderr {:.2e}, k={}, r={}, {:.2?})",
                rec.config.scheme, rec.metric, rec.mean, rec.stderr, rec.k, rec.r, rec.wall_time
            );
        }
        println!("wrote {} and {}", csv.display(), json.display());
        Ok(())
    }
}

fn refuse_overwrite(path: &Path) -> Result<(), Failure> {
    if path.exists() {
        return Err(Failure::Runtime(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        )));
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(common) => {
            let cfg = common.load()?;
            let rec = run_scheme(&cfg)?;
            common.write("run", &[rec])
        }
        Command::Sweep {
            common,
            axis,
            values,
        } => {
            let cfg = common.load()?;
            let axis: Axis = axis.parse()?;
            if values.is_empty() {
                return Err(Failure::Config("sweep needs at least one value".into()));
            }
            let records = sweep(axis, &values, &cfg)?;
            common.write(
                &format!("sweep_{}", axis.to_string().to_lowercase()),
                &records,
            )
        }
        Command::Figure { id, common } => {
            if !(1..=6).contains(&id) {
                return Err(Failure::Config(format!(
                    "figure id must lie in 1..=6, got {id}"
                )));
            }
            let records = run_figure(id, common.overrides())?;
            common.write(&format!("fig{id}"), &records)
        }
        Command::Selftest => {
            let outcomes = selftest::run_all();
            let passed = outcomes.iter().filter(|o| o.passed).count();
            for o in &outcomes {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                println!("{tag} {} {}", o.name, o.detail);
            }
            println!("{passed}/{} checks passed", outcomes.len());
            if passed == outcomes.len() {
                Ok(())
            } else {
                Err(Failure::Runtime(format!(
                    "{} selftest checks failed",
                    outcomes.len() - passed
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("ERROR: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("ERROR: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("ERROR: {msg}");
            ExitCode::from(1)
        }
    }
}
