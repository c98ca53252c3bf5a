use std::path::PathBuf;
use std::process::ExitCode;

use bellscope::cli::{self, Command, Format, InputSpec, Mode, RunConfig};
use bellscope::physical::Quantity;
use bellscope::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bellscope",
    version,
    about = "Bell state measurement by two-photon absorption",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    /// Read the whole run configuration from a JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DeviceArgs {
    /// Built-in device: standard or shortcut.
    #[arg(long, conflicts_with = "device_file")]
    device: Option<String>,
    /// Device description in JSON.
    #[arg(long)]
    device_file: Option<PathBuf>,
    /// Crystal absorption efficiency.
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Outcome distribution for one input state.
    Simulate {
        #[command(flatten)]
        device: DeviceArgs,
        /// Bell label or JSON list of four [re, im] amplitudes.
        #[arg(long)]
        input: String,
        /// Propagation mode; montecarlo is implied by --trials.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Monte Carlo trials.
        #[arg(long)]
        trials: Option<u64>,
        /// Monte Carlo seed (falls back to BELLSCOPE_SEED, then 0).
        #[arg(long, requires = "trials")]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Confusion matrix of a device over the four Bell inputs.
    Confusion {
        #[command(flatten)]
        device: DeviceArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Geometrical factors and, given a model, the relative absorption rate.
    Selection {
        #[arg(long)]
        input: String,
        #[arg(long)]
        model_file: Option<PathBuf>,
        /// Photon energies in eV.
        #[arg(long)]
        w1: Option<f64>,
        #[arg(long)]
        w2: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Absolute rates and cavity requirements.
    Params {
        #[arg(long, conflicts_with = "params_file")]
        preset: Option<String>,
        #[arg(long)]
        params_file: Option<PathBuf>,
        /// Cavity lifetime, for example "10ps".
        #[arg(long, value_parser = parse_quantity)]
        cavity_lifetime: Option<Quantity>,
        /// Photon energies in eV for the resonance check.
        #[arg(long, requires = "w2")]
        w1: Option<f64>,
        #[arg(long, requires = "w1")]
        w2: Option<f64>,
        #[arg(long)]
        transition_energy: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Confusion matrix of the four-pass quantum-dot protocol.
    Qdot {
        #[arg(long)]
        eta: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Montecarlo,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    let s = s.trim();
    let split = s
        .find(|c: char| c.is_ascii_alphabetic() || c == 'µ')
        .ok_or_else(|| format!("{s:?} has no unit"))?;
    let value: f64 = s[..split]
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} has no numeric value"))?;
    Ok(Quantity::new(value, s[split..].trim()))
}

fn apply_common(config: &mut RunConfig, common: Common) {
    config.format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    config.output = common.output;
}

fn apply_device(config: &mut RunConfig, device: DeviceArgs) {
    config.device = device.device;
    config.device_file = device.device_file;
    config.eta = device.eta;
}

fn build_config(sub: Sub) -> bellscope::Result<RunConfig> {
    let config = match sub {
        Sub::Simulate {
            device,
            input,
            mode,
            trials,
            seed,
            common,
        } => {
            let mut c = RunConfig::new(Command::Simulate);
            apply_device(&mut c, device);
            c.input = Some(InputSpec::parse(&input)?);
            c.mode = match (mode, trials) {
                (Some(ModeArg::Exact), Some(_)) => {
                    return Err(Error::InvalidParameter(
                        "--trials only applies to montecarlo mode".into(),
                    ))
                }
                (Some(ModeArg::Exact), None) | (None, None) => Mode::Exact,
                (_, Some(trials)) => Mode::Montecarlo { trials, seed },
                (Some(ModeArg::Montecarlo), None) => {
                    return Err(Error::InvalidParameter(
                        "montecarlo mode needs --trials".into(),
                    ))
                }
            };
            apply_common(&mut c, common);
            c
        }
        Sub::Confusion { device, common } => {
            let mut c = RunConfig::new(Command::Confusion);
            apply_device(&mut c, device);
            apply_common(&mut c, common);
            c
        }
        Sub::Selection {
            input,
            model_file,
            w1,
            w2,
            common,
        } => {
            let mut c = RunConfig::new(Command::Selection);
            c.input = Some(InputSpec::parse(&input)?);
            c.model_file = model_file;
            c.w1 = w1;
            c.w2 = w2;
            apply_common(&mut c, common);
            c
        }
        Sub::Params {
            preset,
            params_file,
            cavity_lifetime,
            w1,
            w2,
            transition_energy,
            tolerance,
            common,
        } => {
            let mut c = RunConfig::new(Command::Params);
            c.preset = preset;
            c.params_file = params_file;
            c.cavity_lifetime = cavity_lifetime;
            c.w1 = w1;
            c.w2 = w2;
            c.transition_energy = transition_energy;
            c.tolerance = tolerance;
            apply_common(&mut c, common);
            c
        }
        Sub::Qdot { eta, common } => {
            let mut c = RunConfig::new(Command::Qdot);
            c.eta = eta;
            apply_common(&mut c, common);
            c
        }
    };
    Ok(config)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let config = match (args.config, args.command) {
        (Some(path), _) => RunConfig::from_file(&path),
        (None, Some(sub)) => build_config(sub),
        (None, None) => {
            eprintln!("error: give a subcommand or --config <FILE>; see --help");
            return ExitCode::from(cli::EXIT_CONFIG as u8);
        }
    };
    let result = config.and_then(|c| cli::execute(&c).map(|text| (c, text)));
    match result {
        Ok((config, text)) => {
            if config.output.is_none() {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code(&err) as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_table_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn quantities_parse() {
        let q = parse_quantity("10 ps").unwrap();
        assert_eq!(q.value, 10.0);
        assert_eq!(q.unit, "ps");
        assert!(parse_quantity("ps").is_err());
    }
}
