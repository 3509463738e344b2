//! Command-line front end. Exit codes: 0 success, 1 computation or I/O
//! failure, 2 invalid arguments.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{power_law_fit, qcrb_curve, qfi_scaling, kappa_to_c02, SensitivityInput, RB87_ENERGY_RATIO_HZ};
use crate::error::Error;
use crate::fock::OperatorKind;
use crate::metrology::{qcrb, qfi_cat, qfi_dicke, qfi_dicke_fast, qfi_pure, DickeFrame, EstimationContext};
use crate::protocols::{parity_scan, KtGrid, MomentProtocol, MomentScan};
use crate::spin::HalfInteger;
use crate::states::{dicke_balanced, noon_state, paired_dfs_cat, product_state, twin_fock_superposition};
use crate::CollectiveOperator;

pub const EXIT_OK: u8 = 0;
pub const EXIT_COMPUTE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "lsv-metrology", version, about = "Precision bounds for the quadratic κ·Σ(j_z)² coupling with entangled probes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum Fisher information and Cramér–Rao bound of one probe state
    Qfi(QfiArgs),
    /// SQL / Heisenberg / Dicke Cramér–Rao curves
    Fig1(Fig1Args),
    /// Dicke-state Fisher information and its power-law fit
    Fig2(Fig2Args),
    /// NOON parity signal, simulated and closed form
    Parity(ParityArgs),
    /// Jx² moment-measurement precision of the Dicke state
    Moment(MomentArgs),
    /// Convert δκ/2π into a bound on C₀⁽²⁾
    Sensitivity(SensitivityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateName {
    Noon,
    Dicke,
    Pairs,
    Twinfock,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameArg {
    Prepared,
    Ramsey,
}

impl From<FrameArg> for DickeFrame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::Prepared => DickeFrame::Prepared,
            FrameArg::Ramsey => DickeFrame::Ramsey,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Timing {
    /// Probe duration T in seconds
    #[arg(long = "T", default_value_t = 1.0)]
    #[serde(rename = "T")]
    pub duration: f64,
    /// Number of experimental trials ν
    #[arg(long = "nu", default_value_t = 1)]
    pub nu: u64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct QfiArgs {
    #[arg(long, value_enum)]
    pub state: StateName,
    #[arg(long = "n")]
    pub n: usize,
    /// Single-particle spin for `pairs` (e.g. 7/2)
    #[arg(long = "j")]
    pub j: Option<String>,
    #[arg(long = "m-hi")]
    pub m_hi: Option<String>,
    #[arg(long = "m-lo")]
    pub m_lo: Option<String>,
    /// Frame of the Dicke probe relative to the generator
    #[arg(long, value_enum, default_value_t = FrameArg::Ramsey)]
    pub frame: FrameArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub timing: Timing,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Fig1Args {
    #[arg(long = "n-min", default_value_t = 2)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 10_000)]
    pub n_max: usize,
    #[arg(long, default_value_t = 40)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = FrameArg::Ramsey)]
    pub frame: FrameArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub timing: Timing,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Fig2Args {
    #[arg(long = "n-min", default_value_t = 10)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 1000)]
    pub n_max: usize,
    #[arg(long, default_value_t = 25)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = FrameArg::Ramsey)]
    pub frame: FrameArg,
    /// Table path; the fit is written to `<out>.fit.json`
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ParityArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long = "kt-min", default_value_t = 0.0)]
    pub kt_min: f64,
    #[arg(long = "kt-max", default_value_t = PI)]
    pub kt_max: f64,
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MomentArgs {
    #[arg(long = "n", conflicts_with = "sweep", required_unless_present = "sweep")]
    pub n: Option<usize>,
    /// `a:b:even`, `a:b:step` or a comma-separated list of N
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long = "kt-min", default_value_t = KtGrid::moment_default().kt_min)]
    pub kt_min: f64,
    #[arg(long = "kt-max", default_value_t = KtGrid::moment_default().kt_max)]
    pub kt_max: f64,
    #[arg(long, default_value_t = KtGrid::moment_default().points)]
    pub points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub timing: Timing,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Scan path; the optimum goes to `<out>.optimum.json`, a sweep fit to `<out>.fit.json`
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SensitivityArgs {
    /// δκ/2π in Hz
    #[arg(long = "delta-kappa-over-2pi", allow_negative_numbers = true)]
    pub delta_kappa_over_2pi: f64,
    /// ΔE/(hC₀⁽²⁾) in Hz
    #[arg(long = "energy-ratio", default_value_t = RB87_ENERGY_RATIO_HZ, allow_negative_numbers = true)]
    pub energy_ratio: f64,
    /// Δ(j_z²) of the probe levels
    #[arg(long = "jz2-fluct", default_value_t = 1.0, allow_negative_numbers = true)]
    pub jz2_fluct: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Compute(_) => EXIT_COMPUTE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) | Self::Compute(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Compute(e.to_string())
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {msg}"))
}

/// Argument-level failures of the library surface as exit code 2.
fn flag_error(flag: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::OddParticleCount(_) | Error::TooFewParticles { .. } => usage(flag, e),
        Error::InvalidGrid(_) | Error::TooFewPoints(_) | Error::InvalidQuantumNumbers(_) | Error::ParseHalfInteger(_) => {
            usage(flag, e)
        }
        Error::InvalidContext(_) | Error::InvalidSensitivity(_) => usage(flag, e),
        other => other.into(),
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Qfi(a) => cmd_qfi(a),
        Command::Fig1(a) => cmd_fig1(a),
        Command::Fig2(a) => cmd_fig2(a),
        Command::Parity(a) => cmd_parity(a),
        Command::Moment(a) => cmd_moment(a),
        Command::Sensitivity(a) => cmd_sensitivity(a),
    }
}

// --- formatting ---------------------------------------------------------------

/// 17 significant digits; round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn timing_context(t: &Timing, particles: usize) -> Result<EstimationContext, CliError> {
    if !(t.duration > 0.0 && t.duration.is_finite()) {
        return Err(usage("--T", format!("must be positive, got {}", t.duration)));
    }
    if t.nu < 1 {
        return Err(usage("--nu", "must be at least 1"));
    }
    Ok(EstimationContext { duration: t.duration, trials: t.nu, particles, spin: HalfInteger::ONE })
}

// --- output sink --------------------------------------------------------------

#[derive(Serialize)]
struct OutputDigest {
    path: String,
    sha256: String,
}

/// Collects output files and writes the run manifest next to the primary one.
struct Sink {
    command: &'static str,
    parameters: Value,
    primary: Option<PathBuf>,
    digests: Vec<OutputDigest>,
    started: Instant,
}

impl Sink {
    fn new(command: &'static str, parameters: &impl Serialize, primary: Option<&Path>) -> Self {
        Self {
            command,
            parameters: serde_json::to_value(parameters).expect("arguments serialize"),
            primary: primary.map(Path::to_path_buf),
            digests: Vec::new(),
            started: Instant::now(),
        }
    }

    fn sibling(&self, suffix: &str) -> PathBuf {
        let primary = self.primary.as_ref().expect("sibling outputs need --out");
        let mut name = primary.as_os_str().to_owned();
        name.push(suffix);
        PathBuf::from(name)
    }

    fn write_file(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        std::fs::write(path, contents)
            .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
        self.digests.push(OutputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
        });
        Ok(())
    }

    /// Primary data: to `--out` when given, else standard output.
    fn emit(&mut self, contents: &str) -> Result<(), CliError> {
        match self.primary.clone() {
            Some(p) => self.write_file(&p, contents),
            None => {
                print!("{contents}");
                Ok(())
            }
        }
    }

    fn emit_sibling(&mut self, suffix: &str, contents: &str) -> Result<(), CliError> {
        let path = self.sibling(suffix);
        self.write_file(&path, contents)
    }

    fn finish(self) -> Result<(), CliError> {
        if self.primary.is_none() {
            return Ok(());
        }
        let path = self.sibling(".manifest.json");
        let manifest = json!({
            "command": self.command,
            "parameters": self.parameters,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "wall_time_s": self.started.elapsed().as_secs_f64(),
            "outputs": self.digests,
        });
        std::fs::write(&path, json_text(&manifest))
            .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))
    }
}

// --- commands -----------------------------------------------------------------

fn parse_half(flag: &str, s: &str) -> Result<HalfInteger, CliError> {
    s.parse().map_err(|e: Error| usage(flag, e))
}

fn cmd_qfi(a: &QfiArgs) -> Result<(), CliError> {
    let ctx = timing_context(&a.timing, a.n)?;
    let needs_even = matches!(a.state, StateName::Dicke | StateName::Pairs | StateName::Twinfock);
    if needs_even && !a.n.is_multiple_of(2) {
        return Err(usage("--n", format!("N must be even, got {}", a.n)));
    }
    if a.n == 0 {
        return Err(usage("--n", "N must be at least 1"));
    }
    let mut spin = HalfInteger::ONE;
    let mut frame = None;
    let fisher = match a.state {
        StateName::Noon => qfi_cat(&noon_state(a.n).map_err(flag_error("--n"))?),
        StateName::Twinfock => qfi_cat(&twin_fock_superposition(a.n).map_err(flag_error("--n"))?),
        StateName::Dicke => {
            frame = Some(DickeFrame::from(a.frame));
            qfi_dicke(a.n, a.frame.into()).map_err(flag_error("--n"))?
        }
        StateName::Pairs => {
            spin = parse_half("--j", a.j.as_deref().unwrap_or("7/2"))?;
            let m_hi = match &a.m_hi {
                Some(s) => parse_half("--m-hi", s)?,
                None => spin,
            };
            let m_lo = match &a.m_lo {
                Some(s) => parse_half("--m-lo", s)?,
                None if spin.is_integer() => HalfInteger::ZERO,
                None => HalfInteger::HALF,
            };
            qfi_cat(&paired_dfs_cat(a.n, spin, m_hi, m_lo).map_err(flag_error("--j"))?)
        }
        StateName::Product => {
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            let state = product_state(a.n, [h, h, C64::new(0.0, 0.0)]).map_err(flag_error("--n"))?;
            let generator = CollectiveOperator::build(state.basis(), OperatorKind::Generator);
            qfi_pure(&state, &generator)?
        }
    };
    let bound = qcrb(fisher, &ctx)?;
    let record = json!({
        "state": a.state,
        "N": a.n,
        "j": spin.to_string(),
        "frame": frame,
        "F_Q": fisher,
        "qcrb_rad_per_s": bound,
        "T": ctx.duration,
        "nu": ctx.trials,
    });
    let mut sink = Sink::new("qfi", a, a.out.as_deref());
    sink.emit(&json_text(&record))?;
    sink.finish()
}

fn cmd_fig1(a: &Fig1Args) -> Result<(), CliError> {
    let ctx = timing_context(&a.timing, a.n_min)?;
    let rows = qcrb_curve(a.n_min, a.n_max, a.points, &ctx, a.frame.into()).map_err(flag_error("--points"))?;
    let text = match a.format {
        Format::Csv => csv(
            "N,dk_sql,dk_hl,dk_dicke,improvement_db",
            rows.iter().map(|r| {
                vec![r.n.to_string(), fmt_f64(r.dk_sql), fmt_f64(r.dk_hl), fmt_f64(r.dk_dicke), fmt_f64(r.improvement_db)]
            }),
        ),
        Format::Json => json_text(&json!({
            "frame": DickeFrame::from(a.frame),
            "T": ctx.duration,
            "nu": ctx.trials,
            "units": {"dk": "rad/s", "improvement_db": "dB"},
            "rows": rows,
        })),
    };
    let mut sink = Sink::new("fig1", a, a.out.as_deref());
    sink.emit(&text)?;
    sink.finish()
}

fn cmd_fig2(a: &Fig2Args) -> Result<(), CliError> {
    let (rows, fit) = qfi_scaling(a.n_min, a.n_max, a.points, a.frame.into()).map_err(flag_error("--points"))?;
    let text = match a.format {
        Format::Csv => csv("N,fq_dicke", rows.iter().map(|r| vec![r.n.to_string(), fmt_f64(r.fq_dicke)])),
        Format::Json => json_text(&json!({ "frame": DickeFrame::from(a.frame), "rows": rows })),
    };
    let fit_record = json!({
        "a": fit.prefactor,
        "gamma": fit.exponent,
        "r2": fit.r_squared,
        "n_range": [fit.n_min, fit.n_max],
        "frame": DickeFrame::from(a.frame),
    });
    let mut sink = Sink::new("fig2", a, Some(&a.out));
    sink.emit(&text)?;
    sink.emit_sibling(".fit.json", &json_text(&fit_record))?;
    sink.finish()
}

fn cmd_parity(a: &ParityArgs) -> Result<(), CliError> {
    if a.n == 0 {
        return Err(usage("--n", "N must be at least 1"));
    }
    let grid = KtGrid::new(a.kt_min, a.kt_max, a.points).map_err(flag_error("--points"))?;
    let scan = parity_scan(a.n, &grid)?;
    let text = match a.format {
        Format::Csv => csv(
            "kt,parity_sim,parity_closed_form,abs_diff",
            scan.rows.iter().map(|r| {
                vec![
                    fmt_f64(r.kt),
                    fmt_f64(r.parity),
                    fmt_opt(r.closed_form),
                    fmt_opt(r.closed_form.map(|c| (c - r.parity).abs())),
                ]
            }),
        ),
        Format::Json => json_text(&json!({
            "N": scan.particles,
            "rows": scan.rows.iter().map(|r| json!({
                "kt": r.kt,
                "parity_sim": r.parity,
                "parity_closed_form": r.closed_form,
                "abs_diff": r.closed_form.map(|c| (c - r.parity).abs()),
            })).collect::<Vec<_>>(),
        })),
    };
    let mut sink = Sink::new("parity", a, a.out.as_deref());
    sink.emit(&text)?;
    sink.finish()
}

/// `a:b:even`, `a:b:odd`, `a:b:step`, `a:b` or `n1,n2,...`.
pub fn parse_sweep(text: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("cannot parse {s:?} as a particle count"));
    let ns: Vec<usize> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(format!("expected a:b[:step], got {text:?}"));
        }
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        if lo > hi {
            return Err(format!("empty range {lo}:{hi}"));
        }
        match parts.get(2).map(|s| s.trim()) {
            None => (lo..=hi).collect(),
            Some("even") => (lo..=hi).filter(|n| n % 2 == 0).collect(),
            Some("odd") => (lo..=hi).filter(|n| n % 2 == 1).collect(),
            Some(step) => {
                let step = num(step)?;
                if step == 0 {
                    return Err("step must be positive".into());
                }
                (lo..=hi).step_by(step).collect()
            }
        }
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ns.is_empty() {
        return Err(format!("{text:?} selects no particle counts"));
    }
    Ok(ns)
}

#[derive(Serialize)]
struct OptimumRecord {
    #[serde(rename = "N")]
    n: usize,
    kt: f64,
    dk: f64,
    slope: f64,
    dk_qcrb: f64,
    #[serde(rename = "T")]
    duration: f64,
    nu: u64,
}

fn cmd_moment(a: &MomentArgs) -> Result<(), CliError> {
    let ns = match (&a.sweep, a.n) {
        (Some(s), _) => parse_sweep(s).map_err(|e| usage("--sweep", e))?,
        (None, Some(n)) => vec![n],
        (None, None) => return Err(usage("--n", "either --n or --sweep is required")),
    };
    if let Some(&n) = ns.iter().find(|&&n| n % 2 != 0 || n < 2) {
        return Err(usage(if a.sweep.is_some() { "--sweep" } else { "--n" }, format!("N must be even and at least 2, got {n}")));
    }
    let ctx = timing_context(&a.timing, ns[0])?;
    let grid = KtGrid::new(a.kt_min, a.kt_max, a.points).map_err(flag_error("--points"))?;

    use rayon::prelude::*;
    let scans: Vec<(MomentScan, f64)> = ns
        .par_iter()
        .map(|&n| {
            let ctx = ctx.with_particles(n);
            let scan = MomentProtocol::new(dicke_balanced(n)?).scan(&grid, &ctx)?;
            let bound = qcrb(qfi_dicke_fast(n)?, &ctx)?;
            Ok((scan, bound))
        })
        .collect::<Result<_, Error>>()?;

    let mut optima = Vec::with_capacity(scans.len());
    for (scan, bound) in &scans {
        let best = scan.optimum.ok_or_else(|| {
            CliError::Compute(format!("N = {}: {}", scan.particles, Error::AllUnbounded))
        })?;
        optima.push(OptimumRecord {
            n: scan.particles,
            kt: best.kt,
            dk: best.delta_kappa.expect("optimum is bounded"),
            slope: best.slope,
            dk_qcrb: *bound,
            duration: ctx.duration,
            nu: ctx.trials,
        });
    }

    let sweep = a.sweep.is_some();
    let text = match a.format {
        Format::Csv => {
            let header = if sweep { "N,kt,mean_jx2,var_jx2,slope,dk" } else { "kt,mean_jx2,var_jx2,slope,dk" };
            let mut out = String::new();
            let _ = writeln!(out, "{header}");
            for (scan, _) in &scans {
                for r in &scan.rows {
                    let mut cells = Vec::with_capacity(6);
                    if sweep {
                        cells.push(scan.particles.to_string());
                    }
                    cells.extend([fmt_f64(r.kt), fmt_f64(r.mean_jx2), fmt_f64(r.var_jx2), fmt_f64(r.slope), fmt_opt(r.delta_kappa)]);
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            out
        }
        Format::Json => json_text(&json!({
            "scans": scans.iter().map(|(scan, _)| json!({
                "N": scan.particles,
                "rows": scan.rows.iter().map(|r| json!({
                    "kt": r.kt,
                    "mean_jx2": r.mean_jx2,
                    "var_jx2": r.var_jx2,
                    "slope": r.slope,
                    "dk": r.delta_kappa,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    };

    let mut sink = Sink::new("moment", a, Some(&a.out));
    sink.emit(&text)?;
    let optimum_record = if sweep { json!({ "optima": optima }) } else { serde_json::to_value(&optima[0]).expect("serializes") };
    sink.emit_sibling(".optimum.json", &json_text(&optimum_record))?;
    if sweep {
        let points: Vec<(f64, f64)> = optima.iter().map(|o| (o.n as f64, o.dk)).collect();
        let fit = power_law_fit(&points).map_err(flag_error("--sweep"))?;
        let fit_record = json!({
            "a": fit.prefactor,
            "b": -fit.exponent,
            "exponent": fit.exponent,
            "r2": fit.r_squared,
            "n_range": [fit.n_min, fit.n_max],
        });
        sink.emit_sibling(".fit.json", &json_text(&fit_record))?;
    }
    sink.finish()
}

fn cmd_sensitivity(a: &SensitivityArgs) -> Result<(), CliError> {
    if a.energy_ratio.is_nan() || a.energy_ratio <= 0.0 {
        return Err(usage("--energy-ratio", format!("must be positive, got {}", a.energy_ratio)));
    }
    if a.jz2_fluct.is_nan() || a.jz2_fluct <= 0.0 {
        return Err(usage("--jz2-fluct", format!("must be positive, got {}", a.jz2_fluct)));
    }
    let input = SensitivityInput::new(a.delta_kappa_over_2pi, a.energy_ratio, a.jz2_fluct)
        .map_err(flag_error("--delta-kappa-over-2pi"))?;
    let bound = kappa_to_c02(&input)?;
    let record = json!({
        "c02_bound": bound,
        "delta_kappa_over_2pi_hz": input.delta_kappa_over_2pi,
        "energy_ratio_hz": input.energy_ratio,
        "jz2_fluct": input.jz2_fluct,
    });
    let mut sink = Sink::new("sensitivity", a, a.out.as_deref());
    sink.emit(&json_text(&record))?;
    sink.finish()
}
