//! Command implementations behind the `lmmse-snr` binary.
//!
//! Each command resolves its flags into a [`SystemConfig`], runs the library
//! and returns a [`Report`]. Rendering is separate from computation so the
//! same report can be written as CSV or JSON.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lmmse_snr::{
    ber_curve, db_to_linear, empirical_moments, empirical_outage, fitted_law, outage_curve,
    power_profile, read_power_file, run_trials, EmpiricalSpec, QuadratureSpec, SystemConfig,
};

/// Environment variable read when `--seed` is not given.
pub const SEED_ENV: &str = "LMMSE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "lmmse-snr",
    version,
    about = "LMMSE output SNR moments, BER and outage"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic moments and the fitted generalized Gamma parameters.
    Moments(MomentsArgs),
    /// Analytic QPSK BER over an input SNR sweep.
    Ber(BerArgs),
    /// Saddle-point outage probability over a threshold grid.
    Outage(OutageArgs),
    /// Asymptotic versus Monte Carlo moments.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// Receive antennas.
    #[arg(long)]
    pub n: usize,
    /// Interfering users.
    #[arg(long)]
    pub k: usize,
    /// Receive correlation coefficient, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    /// Power of the user of interest.
    #[arg(long, default_value_t = 1.0)]
    pub p0: f64,
    /// `preset` or a file with one power per line, in units of p0.
    #[arg(long, default_value = "preset")]
    pub powers: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Emit JSON with full double precision instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Input SNR p0 / rho in dB.
    #[arg(long)]
    pub snr_db: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct BerArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.0)]
    pub snr_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub snr_max: f64,
    #[arg(long, default_value_t = 5.0)]
    pub snr_step: f64,
    /// Gauss-Legendre nodes for the BER integral.
    #[arg(long, default_value_t = lmmse_snr::metrics::DEFAULT_NODES)]
    pub nodes: usize,
    /// Monte Carlo trials per SNR point; omit for theory only.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Db,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct OutageArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub snr_db: f64,
    /// Smallest threshold, in dB with `--grid db`.
    #[arg(long)]
    pub threshold_min: f64,
    #[arg(long)]
    pub threshold_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Spacing of the threshold grid; the threshold column uses the same unit.
    #[arg(long, value_enum, default_value_t = GridKind::Linear)]
    pub grid: GridKind,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub snr_db: f64,
    #[arg(long)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(lmmse_snr::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_validation() => 2,
            CliError::Model(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Model(e) if e.is_validation() => write!(f, "validation error: {e}"),
            CliError::Model(e) => write!(f, "numeric error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lmmse_snr::Error> for CliError {
    fn from(e: lmmse_snr::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub flags: serde_json::Value,
    pub config: SystemConfig,
    pub seed: Option<u64>,
    pub version: &'static str,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsReport {
    pub delta: f64,
    pub delta_tilde: f64,
    pub gamma: f64,
    pub gamma_tilde: f64,
    pub omega_sq: f64,
    pub nu: f64,
    pub mean: f64,
    pub variance: f64,
    pub third_central: f64,
    pub alpha: f64,
    pub b: f64,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageLine {
    pub threshold: f64,
    pub pout_saddle: f64,
    pub pout_empirical: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateLine {
    pub moment: &'static str,
    pub asymptotic: f64,
    pub empirical: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Moments(MomentsReport),
    Ber(Vec<lmmse_snr::BerRow>),
    Outage(Vec<OutageLine>),
    Validate(Vec<ValidateLine>),
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Moments(m) => {
                s.push_str("key,value\n");
                let value = serde_json::to_value(m).expect("plain struct");
                // struct order, not map order
                let keys = [
                    "delta",
                    "delta_tilde",
                    "gamma",
                    "gamma_tilde",
                    "omega_sq",
                    "nu",
                    "mean",
                    "variance",
                    "third_central",
                    "alpha",
                    "b",
                    "xi",
                ];
                for key in keys {
                    let _ = writeln!(s, "{key},{}", num(value[key].as_f64().unwrap_or(f64::NAN)));
                }
            }
            Report::Ber(rows) => {
                s.push_str("snr_db,ber_theory,ber_empirical,trials,seed\n");
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        num(r.snr_db),
                        num(r.ber_theory),
                        opt(r.ber_empirical.map(num)),
                        opt(r.trials),
                        opt(r.seed)
                    );
                }
            }
            Report::Outage(rows) => {
                s.push_str("threshold,pout_saddle,pout_empirical\n");
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{},{},{}",
                        num(r.threshold),
                        num(r.pout_saddle),
                        opt(r.pout_empirical.map(num))
                    );
                }
            }
            Report::Validate(rows) => {
                s.push_str("moment,asymptotic,empirical,relative_error\n");
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        r.moment,
                        num(r.asymptotic),
                        num(r.empirical),
                        num(r.relative_error)
                    );
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = match self {
            Report::Moments(m) => serde_json::to_string_pretty(m),
            Report::Ber(r) => serde_json::to_string_pretty(r),
            Report::Outage(r) => serde_json::to_string_pretty(r),
            Report::Validate(r) => serde_json::to_string_pretty(r),
        }
        .expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Shortest round-trip decimal, always with `.` as separator.
fn num(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ModelArgs {
    pub fn config(&self, snr_db: f64) -> CliResult<SystemConfig> {
        if !snr_db.is_finite() {
            return Err(CliError::Usage(format!(
                "input SNR {snr_db} dB is not finite"
            )));
        }
        let powers = if self.powers == "preset" {
            power_profile(self.k, self.p0)?
        } else {
            read_power_file(Path::new(&self.powers))?
                .into_iter()
                .map(|p| p * self.p0)
                .collect()
        };
        let config = SystemConfig::from_snr_db(self.n, self.k, self.a, snr_db, self.p0, powers);
        lmmse_snr::validate_config(&config)?;
        Ok(config)
    }
}

pub fn cmd_moments(args: &MomentsArgs) -> CliResult<(SystemConfig, Report)> {
    let config = args.model.config(args.snr_db)?;
    let (m, law) = fitted_law(&config)?;
    let report = MomentsReport {
        delta: m.delta,
        delta_tilde: m.delta_tilde,
        gamma: m.gamma,
        gamma_tilde: m.gamma_tilde,
        omega_sq: m.omega_sq,
        nu: m.nu,
        mean: m.mean,
        variance: m.variance,
        third_central: m.third_central,
        alpha: law.alpha,
        b: law.b,
        xi: law.xi,
    };
    Ok((config, Report::Moments(report)))
}

/// Grid `min, min + step, ...` up to `max` inclusive (with slack for rounding).
pub fn snr_grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(CliError::Usage("SNR grid bounds must be finite".into()));
    }
    if step <= 0.0 {
        return Err(CliError::Usage(format!(
            "--snr-step must be positive, got {step}"
        )));
    }
    if max < min {
        return Err(CliError::Usage(format!(
            "--snr-max {max} is below --snr-min {min}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

pub fn cmd_ber(args: &BerArgs) -> CliResult<(SystemConfig, Report)> {
    let grid = snr_grid(args.snr_min, args.snr_max, args.snr_step)?;
    let base = args.model.config(args.snr_min)?;
    let q = QuadratureSpec::new(args.nodes)?;
    let empirical = args.trials.map(|trials| EmpiricalSpec {
        trials,
        seed: args.seed,
    });
    let rows = ber_curve(&base, &grid, &q, empirical)?;
    Ok((base, Report::Ber(rows)))
}

/// Threshold grid; returns `(display value, linear threshold)` pairs.
pub fn threshold_grid(
    min: f64,
    max: f64,
    points: usize,
    kind: GridKind,
) -> CliResult<Vec<(f64, f64)>> {
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if !(min.is_finite() && max.is_finite()) || max < min {
        return Err(CliError::Usage(format!(
            "bad threshold range [{min}, {max}]"
        )));
    }
    if kind == GridKind::Linear && min <= 0.0 {
        return Err(CliError::Usage(format!(
            "linear thresholds must be positive, got {min}"
        )));
    }
    let step = if points > 1 {
        (max - min) / (points - 1) as f64
    } else {
        0.0
    };
    Ok((0..points)
        .map(|i| {
            let x = if i + 1 == points && points > 1 {
                max
            } else {
                min + i as f64 * step
            };
            let linear = match kind {
                GridKind::Linear => x,
                GridKind::Db => db_to_linear(x),
            };
            (x, linear)
        })
        .collect())
}

pub fn cmd_outage(args: &OutageArgs) -> CliResult<(SystemConfig, Report)> {
    let grid = threshold_grid(
        args.threshold_min,
        args.threshold_max,
        args.points,
        args.grid,
    )?;
    let config = args.model.config(args.snr_db)?;
    let (_, law) = fitted_law(&config)?;
    let samples = match args.trials {
        Some(trials) => Some(run_trials(&config, trials, args.seed)?),
        None => None,
    };
    let linear: Vec<f64> = grid.iter().map(|g| g.1).collect();
    let rows = outage_curve(&law, &linear, None)?;
    let lines = grid
        .iter()
        .zip(rows)
        .map(|(&(shown, y), row)| OutageLine {
            threshold: shown,
            pout_saddle: row.pout_saddle,
            pout_empirical: samples.as_ref().map(|s| empirical_outage(s, y)),
        })
        .collect();
    Ok((config, Report::Outage(lines)))
}

pub fn cmd_validate(args: &ValidateArgs) -> CliResult<(SystemConfig, Report)> {
    let config = args.model.config(args.snr_db)?;
    let (m, _) = fitted_law(&config)?;
    let samples = run_trials(&config, args.trials, args.seed)?;
    let e = empirical_moments(&samples)?;
    let line = |moment, asymptotic: f64, empirical: f64| ValidateLine {
        moment,
        asymptotic,
        empirical,
        relative_error: (asymptotic - empirical).abs() / empirical.abs(),
    };
    let rows = vec![
        line("first", m.mean, e.mean),
        line("second", m.variance, e.variance),
        line("third", m.third_central, e.third_central),
    ];
    Ok((config, Report::Validate(rows)))
}

/// Result of [`execute`]: the rendered output plus its manifest.
pub struct Outcome {
    pub body: String,
    pub manifest: RunManifest,
    pub out: Option<PathBuf>,
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let (name, flags, seed, output, result) = match &cli.command {
        Command::Moments(a) => ("moments", to_value(a), None, &a.output, cmd_moments(a)),
        Command::Ber(a) => (
            "ber",
            to_value(a),
            a.trials.map(|_| a.seed),
            &a.output,
            cmd_ber(a),
        ),
        Command::Outage(a) => (
            "outage",
            to_value(a),
            a.trials.map(|_| a.seed),
            &a.output,
            cmd_outage(a),
        ),
        Command::Validate(a) => (
            "validate",
            to_value(a),
            Some(a.seed),
            &a.output,
            cmd_validate(a),
        ),
    };
    let (config, report) = result?;
    let body = if output.json {
        report.to_json()
    } else {
        report.to_csv()
    };
    let manifest = RunManifest {
        command: name,
        flags,
        config,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    Ok(Outcome {
        body,
        manifest,
        out: output.out.clone(),
    })
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("flag structs serialize")
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let file_name = path.file_name().ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Sidecar path for the manifest of `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_grid_includes_endpoint() {
        assert_eq!(
            snr_grid(0.0, 20.0, 5.0).unwrap(),
            vec![0.0, 5.0, 10.0, 15.0, 20.0]
        );
        assert_eq!(snr_grid(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert_eq!(snr_grid(3.0, 3.0, 1.0).unwrap(), vec![3.0]);
        assert!(snr_grid(0.0, 1.0, 0.0).is_err());
        assert!(snr_grid(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn threshold_grid_kinds() {
        let g = threshold_grid(1.0, 3.0, 3, GridKind::Linear).unwrap();
        assert_eq!(g, vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        let g = threshold_grid(0.0, 10.0, 2, GridKind::Db).unwrap();
        assert_eq!(g[1].0, 10.0);
        assert!((g[1].1 - 10.0).abs() < 1e-12);
        assert!(threshold_grid(0.0, 1.0, 3, GridKind::Linear).is_err());
        assert!(threshold_grid(1.0, 2.0, 0, GridKind::Linear).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::Model(lmmse_snr::Error::Unstable { value: 1.0 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::Model(lmmse_snr::Error::Domain("bad".into())).exit_code(),
            2
        );
    }

    #[test]
    fn csv_formatting() {
        let r = Report::Outage(vec![OutageLine {
            threshold: 0.5,
            pout_saddle: 1e-20,
            pout_empirical: None,
        }]);
        assert_eq!(
            r.to_csv(),
            "threshold,pout_saddle,pout_empirical\n0.5,0.00000000000000000001,\n"
        );
    }
}
