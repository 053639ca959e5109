use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diracosc_cli::config::{BranchArg, Convention, Method, PartitionOptions, TemperatureGrid, Variant};
use diracosc_cli::fig1::DEFAULT_ALPHAS;
use diracosc_cli::{load_config, run, CliError, CliResult, OutputFormat, RunConfig, Task};
use diracosc_core::algebra::DEFAULT_GRID_POINTS;
use diracosc_core::{MomentumBound, OscillatorParams};

/// Spectra, partition functions and thermodynamics of the deformed Dirac oscillator.
#[derive(Parser)]
#[command(name = "diracosc", version)]
struct Cli {
    /// Run the configuration stored in this JSON file instead of a subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format of the main table.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Output file (a directory for `fig1`); standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    omega: f64,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    alpha: f64,
    /// 1 for the full algebra, 0 for minimal length only.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    /// Boundary momentum; 1/alpha when omitted.
    #[arg(long, allow_negative_numbers = true)]
    p_bound: Option<f64>,
}

impl ParamArgs {
    fn build(&self) -> CliResult<OscillatorParams> {
        let p = OscillatorParams::new(self.m, self.omega, self.alpha, self.gamma)?;
        Ok(match self.p_bound {
            Some(b) => p.with_p_bound(MomentumBound::Explicit(b))?,
            None => p,
        })
    }
}

#[derive(Args, Clone, Copy)]
struct PartitionArgs {
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Convention::Consistent)]
    convention: Convention,
    #[arg(long, value_enum, default_value_t = Variant::MaxMomentum)]
    variant: Variant,
    /// Energy cutoff of the spectrum; sqrt(m² + P_b²) when omitted.
    #[arg(long, allow_negative_numbers = true)]
    e_cut: Option<f64>,
    /// Upper index of the numeric Euler–Maclaurin integral.
    #[arg(long)]
    n_max: Option<usize>,
}

impl From<PartitionArgs> for PartitionOptions {
    fn from(a: PartitionArgs) -> Self {
        PartitionOptions {
            method: a.method,
            convention: a.convention,
            variant: a.variant,
            e_cut: a.e_cut,
            n_max: a.n_max,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct TemperatureArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 40)]
    t_steps: usize,
}

impl From<TemperatureArgs> for TemperatureGrid {
    fn from(a: TemperatureArgs) -> Self {
        TemperatureGrid {
            t_min: a.t_min,
            t_max: a.t_max,
            t_steps: a.t_steps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels E_n of one branch.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = BranchArg::Zero)]
        branch: BranchArg,
        /// Emit levels 0..=n_max regardless of any cutoff.
        #[arg(long, conflicts_with = "e_cut")]
        n_max: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        e_cut: Option<f64>,
    },
    /// Partition function over a temperature grid.
    Partition {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        temperatures: TemperatureArgs,
    },
    /// Free energy, internal energy, entropy and heat capacity.
    Thermo {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        temperatures: TemperatureArgs,
    },
    /// Compare closed-form levels with a discretized b⁺b⁻.
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Half-width of the momentum domain; min(20, P_b) when omitted.
        #[arg(long, allow_negative_numbers = true)]
        p_cut: Option<f64>,
    },
    /// Normalized ground-state upper component on the momentum grid.
    Wavefunction {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = BranchArg::Zero)]
        branch: BranchArg,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
    /// Thermodynamic curves for several alpha, one CSV per quantity and alpha.
    Fig1 {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        temperatures: TemperatureArgs,
        /// Also emit the undeformed (alpha = 0) curves.
        #[arg(long)]
        reference: bool,
        /// Also draw one SVG per quantity.
        #[arg(long)]
        svg: bool,
    },
}

fn config_from(command: Command) -> CliResult<RunConfig> {
    let (params, task) = match command {
        Command::Spectrum {
            params,
            branch,
            n_max,
            e_cut,
        } => (params, Task::Spectrum { branch, n_max, e_cut }),
        Command::Partition {
            params,
            partition,
            temperatures,
        } => (
            params,
            Task::Partition {
                options: partition.into(),
                temperatures: temperatures.into(),
            },
        ),
        Command::Thermo {
            params,
            partition,
            temperatures,
        } => (
            params,
            Task::Thermo {
                options: partition.into(),
                temperatures: temperatures.into(),
            },
        ),
        Command::Oracle {
            params,
            grid_points,
            levels,
            p_cut,
        } => (
            params,
            Task::Oracle {
                grid_points,
                levels,
                p_cut,
            },
        ),
        Command::Wavefunction {
            params,
            branch,
            grid_points,
        } => (params, Task::Wavefunction { branch, grid_points }),
        Command::Fig1 {
            params,
            alphas,
            partition,
            temperatures,
            reference,
            svg,
        } => (
            params,
            Task::Fig1 {
                alphas,
                options: partition.into(),
                temperatures: temperatures.into(),
                reference,
                svg,
            },
        ),
    };
    Ok(RunConfig {
        params: params.build()?,
        output_format: OutputFormat::Csv,
        output_path: None,
        task,
    })
}

fn resolve(cli: Cli) -> CliResult<RunConfig> {
    let mut config = match (cli.config, cli.command) {
        (Some(path), None) => load_config(&path)?,
        (None, Some(command)) => config_from(command)?,
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --config or a subcommand, not both".into())),
        (None, None) => return Err(CliError::Usage("missing subcommand (or --config)".into())),
    };
    if let Some(format) = cli.format {
        config.output_format = format;
    }
    if let Some(output) = cli.output {
        config.output_path = Some(output);
    }
    Ok(config)
}

fn fail(err: &CliError) -> ExitCode {
    let record = serde_json::json!({ "error": err.record() });
    eprintln!("{record}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let text = text.trim_end().trim_start_matches("error: ");
            return fail(&CliError::Usage(text.to_owned()));
        }
    };
    let config = match resolve(cli) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(&config) {
        Ok(artifact) => {
            let to_stdout = config.output_path.is_none() || matches!(config.task, Task::Fig1 { .. });
            if to_stdout {
                let mut out = std::io::stdout().lock();
                if out
                    .write_all(artifact.primary.as_bytes())
                    .and_then(|_| out.flush())
                    .is_err()
                {
                    return ExitCode::from(1);
                }
            }
            // JSON output already carries them
            if config.output_format == OutputFormat::Csv {
                for d in &artifact.diagnostics {
                    eprintln!("{}", serde_json::json!({ "diagnostic": d }));
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
