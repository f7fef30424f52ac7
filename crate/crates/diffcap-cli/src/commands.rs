use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use rand_core::{RngCore, SeedableRng};

use diffcap::capacity::solve_w;
use diffcap::diffusion::impulse_response;
use diffcap::simulator::{
    boundary_times, decode, effective_alpha, encode, markov_boundary_concentrations, sample_times,
    trace_full, trace_markov, DEFAULT_SAMPLES_PER_SYMBOL, DEFAULT_THRESHOLD,
};
use diffcap::timing::{solve_t01, solve_t10, solve_t11, F_TILDE_MAX, F_TILDE_MIN};
use diffcap::SymbolDurations;

use crate::config::Config;
use crate::csvfmt::fmt_sig;
use crate::errors::CliError;

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Plain-text key=value file supplying defaults for the flags
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write CSV here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

/// How the high→high symbol is closed out in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphaPolicy {
    /// T11 = T00 with the decode-safe (clamped) rate fraction
    Paper,
    /// alpha = 0 with T11 from the exact timing equation
    Zero,
}

impl FromStr for AlphaPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(AlphaPolicy::Paper),
            "zero" => Ok(AlphaPolicy::Zero),
            other => Err(format!("unknown alpha policy '{other}' (expected paper|zero)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceMode {
    /// One-symbol memory model
    Markov,
    /// Exact superposition of every emitted pulse
    Full,
}

impl FromStr for TraceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markov" => Ok(TraceMode::Markov),
            "full" => Ok(TraceMode::Full),
            other => Err(format!("unknown mode '{other}' (expected markov|full)")),
        }
    }
}

impl fmt::Display for TraceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceMode::Markov => write!(f, "markov"),
            TraceMode::Full => write!(f, "full"),
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    })
}

/// Summary lines go to stdout regardless of `--output`; a closed pipe is
/// surfaced as an error instead of a panic.
fn print_line(line: &str) -> Result<(), CliError> {
    let mut stdout = std::io::stdout();
    writeln!(stdout, "{line}")?;
    Ok(())
}

fn require_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_nan() || v <= 0.0 || v.is_infinite() {
        return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// impulse

#[derive(Debug, Args)]
pub struct ImpulseArgs {
    /// Transmitter–receiver distance r
    #[arg(long, allow_hyphen_values = true)]
    pub dist: Option<f64>,
    /// Diffusion coefficient D
    #[arg(long, allow_hyphen_values = true)]
    pub diff_coeff: Option<f64>,
    /// Last sample time
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    /// Number of linearly spaced samples
    #[arg(long)]
    pub n_points: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_impulse(args: ImpulseArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let dist = cfg.resolve(args.dist, "dist", Some(2.0))?;
    let diff_coeff = cfg.resolve(args.diff_coeff, "diff-coeff", Some(1.0))?;
    let t_max = cfg.resolve(args.t_max, "t-max", Some(10.0))?;
    let n_points = cfg.resolve(args.n_points, "n-points", Some(200))?;
    require_positive("dist", dist)?;
    require_positive("diff-coeff", diff_coeff)?;
    require_positive("t-max", t_max)?;
    if n_points < 1 {
        return Err(CliError::Usage("n-points must be at least 1".into()));
    }

    let peak_t = dist * dist / (4.0 * diff_coeff);
    let peak_g = (-1.0f64).exp() / (std::f64::consts::PI * dist * dist);

    let mut out = open_output(args.common.output.as_ref())?;
    writeln!(out, "# analytic peak: t={}, g={}", fmt_sig(peak_t), fmt_sig(peak_g))?;
    writeln!(out, "t,g")?;
    for i in 1..=n_points {
        let t = t_max * i as f64 / n_points as f64;
        let g = impulse_response(dist, t, diff_coeff)?;
        writeln!(out, "{},{}", fmt_sig(t), fmt_sig(g))?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep / timing

pub const SWEEP_HEADER: &str = "f_tilde,t01,t10,t11,alpha_used,w,capacity,capacity_per_t00";

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub f_tilde: f64,
    pub t01: f64,
    pub t10: f64,
    pub t11: f64,
    pub alpha_used: f64,
    pub w: f64,
    pub capacity: f64,
    pub capacity_per_t00: f64,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        [
            self.f_tilde,
            self.t01,
            self.t10,
            self.t11,
            self.alpha_used,
            self.w,
            self.capacity,
            self.capacity_per_t00,
        ]
        .map(fmt_sig)
        .join(",")
    }
}

/// Solve one operating point: durations, the rate fraction dictated by the
/// alpha policy, and the capacity.
pub fn solve_row(f_tilde: f64, t00: f64, policy: AlphaPolicy) -> Result<SweepRow, diffcap::Error> {
    let t01 = solve_t01(f_tilde)?;
    let t10 = solve_t10(f_tilde, t01)?;
    let (t11, alpha_used) = match policy {
        AlphaPolicy::Paper => {
            let d = SymbolDurations::new(t00, t01, t10, t00)?;
            let (alpha, _overshoot) = effective_alpha(f_tilde, &d)?;
            (t00, alpha)
        }
        AlphaPolicy::Zero => {
            let t11 = solve_t11(f_tilde, t01, 0.0)?.ok_or_else(|| {
                diffcap::Error::NoSolution(format!(
                    "no positive high→high duration at f_tilde={f_tilde}"
                ))
            })?;
            (t11, 0.0)
        }
    };
    let d = SymbolDurations::new(t00, t01, t10, t11)?;
    let r = solve_w(&d)?;
    Ok(SweepRow {
        f_tilde,
        t01,
        t10,
        t11,
        alpha_used,
        w: r.w,
        capacity: r.capacity,
        capacity_per_t00: r.capacity_per_t00,
    })
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Smallest normalized production rate
    #[arg(allow_hyphen_values = true)]
    pub f_min: Option<f64>,
    /// Largest normalized production rate
    #[arg(allow_hyphen_values = true)]
    pub f_max: Option<f64>,
    /// Grid step
    #[arg(long, allow_hyphen_values = true)]
    pub step: Option<f64>,
    /// Fundamental interval T00 in τ0 units
    #[arg(long, allow_hyphen_values = true)]
    pub t00: Option<f64>,
    /// High→high closing policy
    #[arg(long, value_enum)]
    pub alpha_policy: Option<AlphaPolicy>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let f_min = cfg.resolve(args.f_min, "f-min", None)?;
    let f_max = cfg.resolve(args.f_max, "f-max", None)?;
    let step = cfg.resolve(args.step, "step", Some(0.05))?;
    let t00 = cfg.resolve(args.t00, "t00", Some(1.0))?;
    let policy = cfg.resolve(args.alpha_policy, "alpha-policy", Some(AlphaPolicy::Paper))?;

    let range_ok = f_min >= F_TILDE_MIN && f_max <= F_TILDE_MAX && f_min < f_max;
    if !range_ok {
        return Err(CliError::Usage(format!(
            "sweep range requires {F_TILDE_MIN:e} <= f_min < f_max <= {F_TILDE_MAX:e}, got [{f_min}, {f_max}]"
        )));
    }
    require_positive("step", step)?;
    require_positive("t00", t00)?;

    let n = ((f_max - f_min) / step + 1e-9).floor() as usize;
    let mut rows: Vec<Result<SweepRow, (f64, diffcap::Error)>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let f = (f_min + step * i as f64).min(f_max);
        rows.push(solve_row(f, t00, policy).map_err(|e| (f, e)));
    }

    if rows.iter().all(|r| r.is_err()) {
        return Err(CliError::Solver(format!(
            "every grid point in [{f_min}, {f_max}] failed"
        )));
    }

    let mut out = open_output(args.common.output.as_ref())?;
    writeln!(out, "{SWEEP_HEADER}")?;
    let mut best: Option<&SweepRow> = None;
    for row in &rows {
        match row {
            Ok(r) => {
                writeln!(out, "{}", r.csv_line())?;
                if best.is_none_or(|b| r.capacity_per_t00 > b.capacity_per_t00) {
                    best = Some(r);
                }
            }
            Err((f, e)) => writeln!(out, "# f_tilde={}: {e}", fmt_sig(*f))?,
        }
    }
    out.flush()?;
    drop(out);

    let best = best.expect("at least one row succeeded");
    print_line(&format!(
        "# max: f_tilde={} capacity_per_t00={} w={} t01+t10={}",
        fmt_sig(best.f_tilde),
        fmt_sig(best.capacity_per_t00),
        fmt_sig(best.w),
        fmt_sig(best.t01 + best.t10)
    ))?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct TimingArgs {
    /// Normalized production rate F̃
    #[arg(long, allow_hyphen_values = true)]
    pub f_tilde: Option<f64>,
    /// Fundamental interval T00 in τ0 units
    #[arg(long, allow_hyphen_values = true)]
    pub t00: Option<f64>,
    /// High→high closing policy
    #[arg(long, value_enum)]
    pub alpha_policy: Option<AlphaPolicy>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_timing(args: TimingArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let f_tilde = cfg.resolve(args.f_tilde, "f-tilde", None)?;
    let t00 = cfg.resolve(args.t00, "t00", Some(1.0))?;
    let policy = cfg.resolve(args.alpha_policy, "alpha-policy", Some(AlphaPolicy::Paper))?;
    require_positive("t00", t00)?;
    if !(F_TILDE_MIN..=F_TILDE_MAX).contains(&f_tilde) {
        return Err(CliError::Usage(format!(
            "f-tilde must lie in [{F_TILDE_MIN:e}, {F_TILDE_MAX:e}], got {f_tilde}"
        )));
    }

    let row = solve_row(f_tilde, t00, policy).map_err(CliError::from)?;
    let mut out = open_output(args.common.output.as_ref())?;
    writeln!(out, "{SWEEP_HEADER}")?;
    writeln!(out, "{}", row.csv_line())?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// capacity

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(allow_hyphen_values = true)]
    pub t00: Option<f64>,
    #[arg(allow_hyphen_values = true)]
    pub t01: Option<f64>,
    #[arg(allow_hyphen_values = true)]
    pub t10: Option<f64>,
    #[arg(allow_hyphen_values = true)]
    pub t11: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cmd_capacity(args: CapacityArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let t00 = cfg.resolve(args.t00, "t00", None)?;
    let t01 = cfg.resolve(args.t01, "t01", None)?;
    let t10 = cfg.resolve(args.t10, "t10", None)?;
    let t11 = cfg.resolve(args.t11, "t11", None)?;
    for (name, v) in [("t00", t00), ("t01", t01), ("t10", t10), ("t11", t11)] {
        require_positive(name, v)?;
    }

    let d = SymbolDurations::new(t00, t01, t10, t11).map_err(CliError::from)?;
    let r = solve_w(&d).map_err(CliError::from)?;
    let mut out = open_output(args.common.output.as_ref())?;
    writeln!(
        out,
        "W={} capacity={} capacity_per_t00={}",
        fmt_sig(r.w),
        fmt_sig(r.capacity),
        fmt_sig(r.capacity_per_t00)
    )?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Bit string to transmit, e.g. 1011
    #[arg(long)]
    pub bits: Option<String>,
    /// Transmit N random bits instead of --bits
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// RNG seed for --random
    #[arg(long)]
    pub seed: Option<u64>,
    /// Normalized production rate F̃
    #[arg(long, allow_hyphen_values = true)]
    pub f_tilde: Option<f64>,
    /// Fundamental interval T00 in τ0 units
    #[arg(long, allow_hyphen_values = true)]
    pub t00: Option<f64>,
    /// Trace model
    #[arg(long, value_enum)]
    pub mode: Option<TraceMode>,
    /// Samples per symbol in the trace CSV
    #[arg(long)]
    pub samples_per_symbol: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_bits(s: &str) -> Result<Vec<bool>, CliError> {
    if s.is_empty() {
        return Err(CliError::Usage("bit string must be non-empty".into()));
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::Usage(format!(
                "bit string may contain only 0 and 1, got '{other}'"
            ))),
        })
        .collect()
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let bits_arg = cfg.resolve_optional(args.bits, "bits")?;
    let random = cfg.resolve_optional(args.random, "random")?;
    let seed = cfg.resolve(args.seed, "seed", Some(0))?;
    let f_tilde = cfg.resolve(args.f_tilde, "f-tilde", Some(3.9))?;
    let t00 = cfg.resolve(args.t00, "t00", Some(1.0))?;
    let mode = cfg.resolve(args.mode, "mode", Some(TraceMode::Markov))?;
    let samples_per_symbol = cfg.resolve(
        args.samples_per_symbol,
        "samples-per-symbol",
        Some(DEFAULT_SAMPLES_PER_SYMBOL),
    )?;
    require_positive("t00", t00)?;
    if samples_per_symbol < 1 {
        return Err(CliError::Usage("samples-per-symbol must be at least 1".into()));
    }

    let bits = match (bits_arg, random) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either bits or random, not both".into()))
        }
        (Some(s), None) => parse_bits(&s)?,
        (None, Some(n)) => {
            if n == 0 {
                return Err(CliError::Usage("random bit count must be at least 1".into()));
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.next_u32() & 1 == 1).collect()
        }
        (None, None) => {
            return Err(CliError::Usage("one of bits or random is required".into()))
        }
    };

    // default policy: T11 = T00 with the decode-safe rate fraction
    let t01 = solve_t01(f_tilde).map_err(CliError::from)?;
    let t10 = solve_t10(f_tilde, t01).map_err(CliError::from)?;
    let d = SymbolDurations::new(t00, t01, t10, t00).map_err(CliError::from)?;
    let (alpha, _) = effective_alpha(f_tilde, &d).map_err(CliError::from)?;
    let (symbols, schedule) = encode(&bits, &d, f_tilde, alpha).map_err(CliError::from)?;

    let markov_bounds = markov_boundary_concentrations(&symbols, &d, f_tilde);
    let (trace, decoded, deviation) = match mode {
        TraceMode::Markov => {
            let trace = trace_markov(&symbols, &d, f_tilde, samples_per_symbol);
            let decoded = decode(&markov_bounds, DEFAULT_THRESHOLD);
            (trace, decoded, None)
        }
        TraceMode::Full => {
            let times = sample_times(&symbols, samples_per_symbol);
            let trace = trace_full(&schedule, &times);
            let full_bounds: Vec<f64> = trace_full(&schedule, &boundary_times(&symbols))
                .iter()
                .map(|s| s.concentration)
                .collect();
            let decoded = decode(&full_bounds, DEFAULT_THRESHOLD);
            let deviation = full_bounds
                .iter()
                .zip(&markov_bounds)
                .map(|(f, m)| (f - m).abs())
                .fold(0.0f64, f64::max);
            (trace, decoded, Some(deviation))
        }
    };

    let mut out = open_output(args.common.output.as_ref())?;
    writeln!(out, "t,concentration")?;
    for sample in &trace {
        writeln!(out, "{},{}", fmt_sig(sample.t), fmt_sig(sample.concentration))?;
    }
    out.flush()?;
    drop(out);

    let mismatches = decoded.iter().zip(&bits).filter(|(d, b)| d != b).count();
    print_line(&format!("# mode={mode} decoded={}", bits_to_string(&decoded)))?;
    print_line(&format!("# mismatches={mismatches}"))?;
    if let Some(dev) = deviation {
        print_line(&format!("# max_boundary_deviation={}", fmt_sig(dev)))?;
    }
    Ok(())
}
