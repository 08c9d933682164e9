//! Command-line front end. Every command that writes files also writes a
//! `<stem>.manifest.json` listing parameters and SHA-256 checksums.
//!
//! Exit codes: 0 success, 1 invalid input, 2 computation or verification
//! failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::design::{optimize_quality, DesignProblem};
use crate::distribution::TypeDistribution;
use crate::error::ScreenError;
use crate::model::{Equilibrium, ModelParams, SignalNoise};
use crate::sim::{best_response_check, simulate_rents, simulate_value, SimConfig};
use crate::valuation::{firm_value, sign_map};
use crate::verify::{run_all, VerifyOptions};

/// Significant digits kept in every emitted number.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "screenlab",
    version,
    about = "Screening equilibria under a noisy internal signal"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contract, zone boundaries and rent curve.
    Equilibrium(EquilibriumArgs),
    /// Sign map of the firm-value gradient over the noise square.
    Gradmap(GradmapArgs),
    /// Optimal information quality net of its cost.
    Design(DesignArgs),
    /// Brute-force oracle: exhaustive reporting game and Monte Carlo payoffs.
    Simulate(SimulateArgs),
    /// Numeric checks of the model's qualitative claims.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CostArgs {
    /// Firm's investment cost.
    #[arg(long, default_value_t = 0.24)]
    pub k: f64,
    /// Manager's private cost.
    #[arg(long, default_value_t = 0.24)]
    pub c: f64,
}

#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    /// Probability of a bad signal after success.
    #[arg(long, default_value_t = 0.25)]
    pub q1: f64,
    /// Probability of a good signal after failure.
    #[arg(long, default_value_t = 0.25)]
    pub q0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    /// `uniform` or `beta:a,b`.
    #[arg(long, default_value = "uniform")]
    pub dist: String,
    /// Two-column CSV `(theta, weight)` defining a discrete prior; overrides --dist.
    #[arg(long)]
    pub dist_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    #[command(flatten)]
    pub costs: CostArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Rent-curve CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Points on the rent curve.
    #[arg(long, default_value_t = 199)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct GradmapArgs {
    #[command(flatten)]
    pub costs: CostArgs,
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 20)]
    pub grid_n: usize,
    #[arg(long, default_value = "gradmap.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub costs: CostArgs,
    #[command(flatten)]
    pub dist: DistArgs,
    /// Scale of the information cost `zeta / q`.
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: f64,
    /// Profile CSV; the result JSON goes next to it.
    #[arg(long, default_value = "design.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub costs: CostArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, env = "SCREENLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 99)]
    pub theta_grid_n: usize,
    #[arg(long, default_value_t = 512)]
    pub report_grid_n: usize,
    #[arg(long, default_value = "simulate.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub costs: CostArgs,
    /// Coarser grids.
    #[arg(long)]
    pub quick: bool,
    /// Optional JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(ScreenError),
    Io(String),
    VerificationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(e) => match e {
                ScreenError::Invalid(_)
                | ScreenError::Domain(_)
                | ScreenError::OutsideOptionTooHigh { .. }
                | ScreenError::NeedsDensity => 1,
                _ => 2,
            },
            CliError::Io(_) | CliError::VerificationFailed(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::VerificationFailed(n) => write!(f, "{n} suite(s) failed"),
        }
    }
}

impl From<ScreenError> for CliError {
    fn from(e: ScreenError) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `out`, errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Equilibrium(a) => cmd_equilibrium(a, out),
        Command::Gradmap(a) => cmd_gradmap(a, out),
        Command::Design(a) => cmd_design(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Number as written to CSV.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !(n.is_i64() || n.is_u64()) => json!(round_sig(x)),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with sorted keys, rounded numbers and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut s =
        serde_json::to_string_pretty(&round_json(v)).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    /// Output path to SHA-256 of its contents.
    pub artifacts: BTreeMap<String, String>,
}

/// `dir/stem.manifest.json` for an output `dir/stem.ext`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}

fn write_artifacts(
    command: &str,
    parameters: Value,
    seed: Option<u64>,
    files: &[(PathBuf, String)],
) -> CliResult<PathBuf> {
    let mut artifacts = BTreeMap::new();
    for (path, contents) in files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, contents)?;
        artifacts.insert(path.display().to_string(), sha256_hex(contents.as_bytes()));
    }
    let manifest = RunManifest {
        command: command.into(),
        parameters,
        seed,
        artifacts,
    };
    let path = manifest_path(&files[0].0);
    fs::write(&path, to_json(&manifest)?)?;
    Ok(path)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(vec![]);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn params(c: &CostArgs) -> CliResult<ModelParams> {
    Ok(ModelParams::new(c.k, c.c)?)
}

fn noise(n: &NoiseArgs) -> CliResult<SignalNoise> {
    Ok(SignalNoise::new(n.q1, n.q0)?)
}

/// Reads a headerless or headed two-column `(theta, weight)` CSV.
pub fn read_dist_file(path: &Path) -> CliResult<TypeDistribution> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(CliError::Usage(format!(
                "{}: line {} needs two columns",
                path.display(),
                i + 1
            )));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(t), Ok(w)) => points.push((t, w)),
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::Usage(format!(
                    "{}: line {} is not numeric",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(TypeDistribution::discrete(points)?)
}

fn distribution(d: &DistArgs) -> CliResult<TypeDistribution> {
    match &d.dist_file {
        Some(path) => read_dist_file(path),
        None => Ok(d.dist.parse()?),
    }
}

fn dist_label(d: &DistArgs) -> String {
    match &d.dist_file {
        Some(p) => format!("file:{}", p.display()),
        None => d.dist.clone(),
    }
}

fn cmd_equilibrium(a: EquilibriumArgs, out: &mut dyn Write) -> CliResult<()> {
    let eq = Equilibrium::solve(params(&a.costs)?, noise(&a.noise)?);
    writeln!(out, "w*      = {}", fmt_num(eq.w_star))?;
    writeln!(out, "theta1  = {}", fmt_num(eq.theta1))?;
    writeln!(out, "theta0  = {}", fmt_num(eq.theta0))?;
    writeln!(out, "commit  = {}", fmt_num(eq.theta_commit()))?;
    if let Some(path) = a.out {
        if a.points < 2 {
            return Err(CliError::Usage(format!(
                "--points >= 2 violated ({})",
                a.points
            )));
        }
        let n = a.points;
        let rows = (1..=n)
            .map(|i| {
                let t = i as f64 / (n + 1) as f64;
                let zone = eq.zone(t)?;
                Ok(vec![
                    fmt_num(t),
                    format!("{zone:?}"),
                    fmt_num(eq.zone_rent(t, zone)),
                ])
            })
            .collect::<CliResult<Vec<_>>>()?;
        let csv = csv_string(&["theta", "zone", "rent"], rows)?;
        let parameters = json!({"k": a.costs.k, "c": a.costs.c, "q1": a.noise.q1, "q0": a.noise.q0, "points": n});
        let manifest = write_artifacts("equilibrium", parameters, None, &[(path.clone(), csv)])?;
        writeln!(out, "wrote {} and {}", path.display(), manifest.display())?;
    }
    Ok(())
}

fn cmd_gradmap(a: GradmapArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.grid_n < 2 {
        return Err(CliError::Usage(format!(
            "--grid-n >= 2 violated ({})",
            a.grid_n
        )));
    }
    let dist = distribution(&a.dist)?;
    let cells = sign_map(params(&a.costs)?, &dist, a.grid_n)?;
    let rows = cells.iter().map(|c| {
        vec![
            fmt_num(c.q1),
            fmt_num(c.q0),
            fmt_num(c.dv_dq1),
            fmt_num(c.dv_dq0),
            c.sign1.to_string(),
            c.sign0.to_string(),
        ]
    });
    let csv = csv_string(&["q1", "q0", "dV_dq1", "dV_dq2", "sign1", "sign0"], rows)?;
    let parameters =
        json!({"k": a.costs.k, "c": a.costs.c, "dist": dist_label(&a.dist), "grid_n": a.grid_n});
    let manifest = write_artifacts("gradmap", parameters, None, &[(a.out.clone(), csv)])?;
    let negative = cells.iter().filter(|c| c.sign1 < 0 && c.sign0 < 0).count();
    let positive = cells.iter().filter(|c| c.sign1 > 0 && c.sign0 > 0).count();
    writeln!(
        out,
        "{} cells: {negative} with both partials negative, {positive} with both positive",
        cells.len()
    )?;
    writeln!(out, "wrote {} and {}", a.out.display(), manifest.display())?;
    Ok(())
}

fn cmd_design(a: DesignArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.zeta.is_nan() || a.zeta <= 0.0 {
        return Err(CliError::Usage(format!("--zeta > 0 violated ({})", a.zeta)));
    }
    let dist = distribution(&a.dist)?;
    let problem = DesignProblem::new(params(&a.costs)?, dist, a.zeta)?;
    let result = optimize_quality(&problem)?;
    let rows = result.profile.iter().map(|p| {
        vec![
            fmt_num(p.q),
            fmt_num(p.value),
            fmt_num(p.cost),
            fmt_num(p.net),
        ]
    });
    let csv = csv_string(&["q", "V", "h", "net"], rows)?;
    let json_path = a.out.with_extension("json");
    let parameters =
        json!({"k": a.costs.k, "c": a.costs.c, "dist": dist_label(&a.dist), "zeta": a.zeta});
    let manifest = write_artifacts(
        "design",
        parameters,
        None,
        &[(a.out.clone(), csv), (json_path.clone(), to_json(&result)?)],
    )?;
    writeln!(out, "q*     = {}", fmt_num(result.q_star))?;
    writeln!(out, "net V  = {}", fmt_num(result.net_value))?;
    writeln!(out, "corner = {}", result.is_corner)?;
    writeln!(
        out,
        "wrote {}, {} and {}",
        a.out.display(),
        json_path.display(),
        manifest.display()
    )?;
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.trials < 1 {
        return Err(CliError::Usage("--trials >= 1 violated (0)".into()));
    }
    let config = SimConfig::new(a.theta_grid_n, a.report_grid_n, a.trials, a.seed)?;
    let dist = distribution(&a.dist)?;
    let eq = Equilibrium::solve(params(&a.costs)?, noise(&a.noise)?);
    let game = best_response_check(&eq, config)?;
    let rents = simulate_rents(&eq, &dist, config)?;
    let value = simulate_value(&eq, &dist, config)?;
    let quadrature = firm_value(&eq, &dist)?;
    let closed_rent = rents
        .theta
        .iter()
        .map(|&t| eq.rent(t))
        .collect::<Result<Vec<_>, _>>()?;
    let within = rents
        .empirical_rent
        .iter()
        .zip(&rents.std_errors.rent)
        .zip(&closed_rent)
        .filter(|((m, se), r)| (*m - *r).abs() <= 3.0 * **se)
        .count();
    let sim_value = value.empirical_value.unwrap_or(f64::NAN);
    let value_se = value.std_errors.value.unwrap_or(f64::NAN);
    let report = json!({
        "config": config,
        "equilibrium": {"w_star": eq.w_star, "theta1": eq.theta1, "theta0": eq.theta0},
        "best_response": game,
        "rents": rents,
        "value": value,
        "reference": {"rent": closed_rent, "value": quadrature},
    });
    let parameters = json!({
        "k": a.costs.k, "c": a.costs.c, "q1": a.noise.q1, "q0": a.noise.q0,
        "dist": dist_label(&a.dist), "trials": a.trials,
        "theta_grid_n": a.theta_grid_n, "report_grid_n": a.report_grid_n,
    });
    let manifest = write_artifacts(
        "simulate",
        parameters,
        Some(a.seed),
        &[(a.out.clone(), to_json(&report)?)],
    )?;
    writeln!(
        out,
        "max IC violation   = {:.3e} (grid bound {:.3e})",
        game.ic_violation, game.ic_grid_bound
    )?;
    writeln!(out, "rent bins in 3 SE  = {within}/{}", closed_rent.len())?;
    writeln!(
        out,
        "value: simulated {} +- {} vs quadrature {} ({:.2} SE)",
        fmt_num(sim_value),
        fmt_num(value_se),
        fmt_num(quadrature),
        (sim_value - quadrature) / value_se
    )?;
    writeln!(out, "wrote {} and {}", a.out.display(), manifest.display())?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let opts = VerifyOptions {
        params: params(&a.costs)?,
        quick: a.quick,
    };
    let suites = run_all(&opts)?;
    for s in &suites {
        let verdict = if s.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {:<30} margin {:+.3e}", s.name, s.margin())?;
        for c in &s.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(out, "     {mark} {}: {}", c.name, c.detail)?;
        }
    }
    let failed = suites.iter().filter(|s| !s.passed()).count();
    writeln!(
        out,
        "{} of {} suites pass",
        suites.len() - failed,
        suites.len()
    )?;
    if let Some(path) = a.out {
        let parameters = json!({"k": a.costs.k, "c": a.costs.c, "quick": a.quick});
        write_artifacts("verify", parameters, None, &[(path, to_json(&suites)?)])?;
    }
    if failed > 0 {
        return Err(CliError::VerificationFailed(failed));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("screenlab").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn equilibrium_reports_and_validates() {
        let (code, out, _) = run_capture(&[
            "equilibrium",
            "--k",
            "0.24",
            "--c",
            "0.24",
            "--q1",
            "0.5",
            "--q0",
            "0.5",
        ]);
        assert_eq!(code, 0);
        assert!(
            out.contains("theta1  = 0.48") && out.contains("theta0  = 0.48"),
            "{out}"
        );
        let (code, _, err) = run_capture(&["equilibrium", "--k", "0.6", "--c", "0.5"]);
        assert_eq!(code, 1);
        assert!(err.contains("k + c < 1 violated"), "{err}");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["gradmap", "--grid-n", "1"]).0, 1);
        assert_eq!(run_capture(&["design", "--zeta", "-1"]).0, 1);
        assert_eq!(run_capture(&["simulate", "--trials", "0"]).0, 1);
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(
            manifest_path(Path::new("out/gradmap.csv")),
            PathBuf::from("out/gradmap.manifest.json")
        );
    }
}
