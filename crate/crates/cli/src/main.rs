use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iqy_spectra::commands::{
    cmd_crosscheck, cmd_reproduce_tables, cmd_spectrum, cmd_wavefunction, emit, CliError,
};
use iqy_spectra::config::{ConfigError, Preset, RunConfig, Settings};

/// Spin and pseudospin Dirac spectra of the inversely quadratic Yukawa
/// potential with tensor coupling.
#[derive(Parser)]
#[command(name = "iqy-spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy sweep over n, kappa and H.
    Spectrum(Common),
    /// Check the published tables against the model.
    ReproduceTables(Common),
    /// Compare closed-form roots with shooting eigenvalues.
    Crosscheck {
        #[command(flatten)]
        common: Common,
        /// Accept roots of the squared energy equation that are not bound states.
        #[arg(long, hide = true)]
        corrupt_residual: bool,
    },
    /// Sample both radial components of one state.
    Wavefunction {
        #[command(flatten)]
        common: Common,
        /// Radial number; defaults to n-min.
        #[arg(long)]
        n: Option<usize>,
        /// Evaluate at this energy instead of solving for a root.
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// key=value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// spin or pspin
    #[arg(long)]
    symmetry: Option<String>,
    /// M, fm⁻¹
    #[arg(long, allow_hyphen_values = true)]
    mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<String>,
    /// α, fm⁻¹
    #[arg(long, allow_hyphen_values = true)]
    screening: Option<String>,
    /// Tensor strength; repeat or give a comma list.
    #[arg(long = "tensor-h", allow_hyphen_values = true)]
    tensor_h: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    cs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    cps: Option<String>,
    #[arg(long = "n-min")]
    n_min: Option<String>,
    #[arg(long = "n-max")]
    n_max: Option<String>,
    /// Comma list, e.g. -1,2
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// lo,hi in fm⁻¹
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// strict or relaxed
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

impl Common {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let mut flags = Settings::default();
        let single = [
            ("symmetry", &self.symmetry),
            ("mass", &self.mass),
            ("v0", &self.v0),
            ("screening", &self.screening),
            ("cs", &self.cs),
            ("cps", &self.cps),
            ("n-min", &self.n_min),
            ("n-max", &self.n_max),
            ("kappa", &self.kappa),
            ("window", &self.window),
            ("tol", &self.tol),
            ("mode", &self.mode),
            ("out", &self.out),
            ("format", &self.format),
        ];
        for (key, value) in single {
            if let Some(v) = value {
                flags.set(key, v.as_str())?;
            }
        }
        if !self.tensor_h.is_empty() {
            flags.set("tensor-h", self.tensor_h.join(","))?;
        }
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(file.merge(flags))
    }

    fn resolve(&self, preset: Preset) -> Result<RunConfig, ConfigError> {
        RunConfig::resolve(&self.settings()?, preset)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, text) = match cli.command {
        Command::Spectrum(c) => {
            let cfg = c.resolve(Preset::Tables)?;
            let text = cmd_spectrum(&cfg)?;
            (cfg, text)
        }
        Command::ReproduceTables(c) => {
            let cfg = c.resolve(Preset::Tables)?;
            let text = cmd_reproduce_tables(&cfg)?;
            (cfg, text)
        }
        Command::Crosscheck {
            common,
            corrupt_residual,
        } => {
            let cfg = common.resolve(Preset::Desk)?;
            match cmd_crosscheck(&cfg, corrupt_residual) {
                Ok(text) => (cfg, text),
                Err(CliError::CrosscheckFailed { failures, report }) => {
                    emit(cfg.out.as_deref(), &report)?;
                    return Err(CliError::CrosscheckFailed { failures, report });
                }
                Err(e) => return Err(e),
            }
        }
        Command::Wavefunction { common, n, energy } => {
            let cfg = common.resolve(Preset::Desk)?;
            let kappa = match cfg.kappas[..] {
                [k] => k,
                _ => {
                    return Err(ConfigError::Invalid {
                        key: "kappa".into(),
                        value: format!("{:?}", cfg.kappas),
                        reason: "the wavefunction command takes a single value".into(),
                    }
                    .into())
                }
            };
            let text = cmd_wavefunction(&cfg, n.unwrap_or(cfg.n_min), kappa, energy)?;
            (cfg, text)
        }
    };
    emit(cfg.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
