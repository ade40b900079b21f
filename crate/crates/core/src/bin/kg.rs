use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kg_core::harness::{self, Example, ModelSource, OutputFormat, RunConfig, ShiftPolicy};
use kg_core::models::{HarmonicParams, SquareWellParams, DEFAULT_GRID_POINTS, DEFAULT_HALF_WIDTH};
use kg_core::Error;

const USAGE_EXIT: u8 = 64;

#[derive(Parser)]
#[command(name = "kg", version, about = "Spectra and perturbation bounds for Klein-Gordon Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, sign types and pencil residuals.
    Spectrum(Common),
    /// Every relative constant and the predicted gap intervals.
    Bounds(Common),
    /// Perturb the model and check each bound against the true deviations.
    Verify(Common),
    /// Eigenvalue trajectories over a coupling range.
    Sweep(Common),
    /// Recompute one of the worked examples.
    Reproduce {
        #[arg(value_enum)]
        example: ExampleArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    Example1,
    Example2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Report,
}

#[derive(Args)]
struct Common {
    /// Model file (JSON).
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Square well with coupling tau.
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Perturbation size.
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Harmonic oscillator with field strength alpha.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long, allow_negative_numbers = true, value_name = "R", group = "shift_policy")]
    shift: Option<f64>,
    #[arg(long, group = "shift_policy")]
    optimize_shift: bool,
    #[arg(long, group = "shift_policy")]
    paper_shift: bool,
    /// Coupling range `a:b`.
    #[arg(long, value_name = "A:B", allow_hyphen_values = true, value_parser = parse_range)]
    sweep_range: Option<(f64, f64)>,
    #[arg(long, default_value_t = harness::DEFAULT_STEPS)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

impl Common {
    fn config(&self, needs_model: bool) -> Result<RunConfig, Error> {
        let harmonic = HarmonicParams {
            alpha: self.alpha.unwrap_or(0.0),
            beta: self.beta.unwrap_or(0.0),
            grid_points: self.grid_points.unwrap_or(DEFAULT_GRID_POINTS),
            half_width: self.half_width.unwrap_or(DEFAULT_HALF_WIDTH),
        };
        let mut sources = Vec::new();
        if let Some(path) = &self.model {
            sources.push(ModelSource::File(path.clone()));
        }
        if let Some(tau) = self.tau {
            sources.push(ModelSource::SquareWell(SquareWellParams { tau, eta: self.eta }));
        }
        if self.alpha.is_some() {
            sources.push(ModelSource::Harmonic(harmonic));
        }
        if sources.len() > 1 {
            return Err(Error::InvalidArgument(
                "give exactly one of --model, --tau, --alpha".into(),
            ));
        }
        let harmonic_only = self.beta.is_some() || self.grid_points.is_some() || self.half_width.is_some();
        if harmonic_only && needs_model && !matches!(sources.first(), Some(ModelSource::Harmonic(_))) {
            return Err(Error::InvalidArgument(
                "--beta, --grid-points and --half-width need --alpha".into(),
            ));
        }
        let model = sources.pop();
        if needs_model && model.is_none() {
            return Err(Error::InvalidArgument("no model given (use --model, --tau or --alpha)".into()));
        }
        let shift = if let Some(r) = self.shift {
            ShiftPolicy::Explicit(r)
        } else if self.optimize_shift {
            ShiftPolicy::Optimized
        } else if self.paper_shift {
            ShiftPolicy::Paper
        } else {
            ShiftPolicy::Default
        };
        Ok(RunConfig {
            model,
            shift,
            eta: self.eta,
            seed: self.seed,
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Report => OutputFormat::Report,
            },
            sweep_range: self.sweep_range,
            steps: self.steps,
            harmonic,
        })
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (text, out) = match &cli.command {
        Command::Spectrum(c) => (harness::cmd_spectrum(&c.config(true)?)?, &c.out),
        Command::Bounds(c) => (harness::cmd_bounds(&c.config(true)?)?, &c.out),
        Command::Verify(c) => (harness::cmd_verify(&c.config(true)?)?, &c.out),
        Command::Sweep(c) => (harness::cmd_sweep(&c.config(true)?)?, &c.out),
        Command::Reproduce { example, common } => {
            let which = match example {
                ExampleArg::Example1 => Example::Example1,
                ExampleArg::Example2 => Example::Example2,
            };
            (harness::cmd_reproduce(which, &common.config(false)?)?, &common.out)
        }
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
