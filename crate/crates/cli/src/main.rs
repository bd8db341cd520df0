//! Command-line entry point.
//!
//! Exit codes: 0 on success, 1 on validation/parse errors, 2 on I/O errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mmwave_noma::model::Scheme;
use mmwave_noma::montecarlo::McConfig;
use mmwave_noma::Error;
use mmwave_noma_cli::{
    emit_csv, load_scenario, parse_snr_grid, run_sweep, write_csv, Method, Overrides, Preset,
    ScenarioSource, SweepConfig, THRESHOLD_3DB,
};

/// Outage-probability curves for a NOMA mmWave D2D downlink.
///
/// Sweeps the transmit SNR (source power in dB over unit AWGN) and evaluates
/// the outage of each selected user under NOMA and/or the OMA benchmark by
/// any subset of: the exact closed form, indicator Monte Carlo, and the
/// semi-analytic oracle. Results are emitted as CSV. The decoding threshold
/// is fixed at 3 dB; identical invocations produce byte-identical output.
#[derive(Debug, Parser)]
#[command(name = "mmwave-noma", version)]
struct Cli {
    /// Named parameter set: fig2-ideal or fig3-u2.
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    preset: Option<String>,

    /// Scenario JSON file (see the repository README for the schema).
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// SNR grid in dB: `start:stop:step` (inclusive) or a single value.
    #[arg(long, default_value = "0:50:5")]
    snr: String,

    /// Comma-separated 1-based user indices; defaults to every user.
    #[arg(long)]
    users: Option<String>,

    /// Comma-separated schemes: noma, oma.
    #[arg(long, default_value = "noma,oma")]
    schemes: String,

    /// Comma-separated methods: analytic, mc, oracle.
    #[arg(long, default_value = "analytic")]
    methods: String,

    /// Trials per Monte Carlo row; also the oracle sample count.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,

    /// Base RNG seed for the sampling methods.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the per-cluster interferer count (ring layout, R = 30 m,
    /// M = 8).
    #[arg(long)]
    k: Option<usize>,

    /// Override the hardware impairment level of all users and interferers.
    #[arg(long)]
    kappa: Option<f64>,

    /// Override the CSI error variance of all users.
    #[arg(long)]
    csi_var: Option<f64>,

    /// Override all SIC residual fractions.
    #[arg(long)]
    xi: Option<f64>,
}

fn run(cli: &Cli) -> Result<(), Error> {
    let source = match (&cli.preset, &cli.scenario) {
        (Some(name), None) => ScenarioSource::Preset(name.parse::<Preset>()?),
        (None, Some(path)) => ScenarioSource::File(path.clone()),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let overrides = Overrides {
        k: cli.k,
        kappa: cli.kappa,
        csi_var: cli.csi_var,
        xi: cli.xi,
    };
    let scenario = load_scenario(&source, &overrides)?;

    let users = match &cli.users {
        Some(list) => parse_list(list, "user")?,
        None => (1..=scenario.num_users()).collect(),
    };
    let schemes = cli
        .schemes
        .split(',')
        .map(|s| match s.trim() {
            "noma" => Ok(Scheme::Noma),
            "oma" => Ok(Scheme::Oma),
            other => Err(Error::Validation(format!(
                "unknown scheme `{other}` (expected noma or oma)"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let methods = cli
        .methods
        .split(',')
        .map(|s| s.trim().parse::<Method>())
        .collect::<Result<Vec<_>, _>>()?;

    let config = SweepConfig {
        snr_grid_db: parse_snr_grid(&cli.snr)?,
        users,
        schemes,
        methods,
        threshold: THRESHOLD_3DB,
        mc: McConfig::new(cli.trials, cli.seed, 1 << 16)?,
    };
    let rows = run_sweep(&scenario, &config)?;

    match &cli.out {
        Some(path) => emit_csv(&rows, path),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv(&rows, &mut lock)
                .and_then(|()| lock.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Validation(format!("invalid {what} index `{s}`")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Io { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
