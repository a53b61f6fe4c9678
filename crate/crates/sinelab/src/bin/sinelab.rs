//! Command-line driver: coefficient tables, kernel evaluation, decomposition
//! residuals, distances to the sine process, Haar sampling, and rate sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use sinelab::counting::{chain_on_interval, dpp_count_law, tv_integer};
use sinelab::experiments::{emit_report, rate_sweep, ReportFormat, SweepConfig};
use sinelab::haar::{bulk_rescale, eigenangles, mc_count_law, sample_element};
use sinelab::kernels::{csc_float, EnsembleId, KernelSpec, Scaling};
use sinelab::opcalc::{
    a_trace_norm_bound, difference_from_sine_on, verify_decomposition_a,
    verify_decomposition_k23, DEFAULT_GRID_SIZE,
};
use sinelab::series::{CoeffKind, CoeffTable};
use sinelab::Error;

#[derive(Parser)]
#[command(
    name = "sinelab",
    version,
    about = "Eigenangle kernel laboratory for the classical compact groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffKindArg {
    Csc,
    Cot,
    Tan,
    Bernoulli,
}

impl From<CoeffKindArg> for CoeffKind {
    fn from(arg: CoeffKindArg) -> Self {
        match arg {
            CoeffKindArg::Csc => CoeffKind::Csc,
            CoeffKindArg::Cot => CoeffKind::CotCorrection,
            CoeffKindArg::Tan => CoeffKind::Tan,
            CoeffKindArg::Bernoulli => CoeffKind::Bernoulli,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecompWhich {
    A,
    Aprime,
    K23,
}

#[derive(Subcommand)]
enum Command {
    /// Print a coefficient table with exact-rational and float columns
    Coeffs {
        #[arg(long, value_enum)]
        kind: CoeffKindArg,
        /// Largest table position k (entries 0..=k)
        #[arg(long = "max-k", default_value_t = 20)]
        max_k: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Sample a kernel on a uniform grid and emit the matrix
    KernelEval {
        #[arg(long, value_parser = EnsembleId::from_str)]
        ensemble: EnsembleId,
        /// Kernel size parameter (nontrivial angle count; ignored for sine)
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, value_parser = Scaling::from_str)]
        scaling: Scaling,
        /// Sample points per axis
        #[arg(long)]
        grid: usize,
        /// Half-width of the bulk window (unused for raw scaling)
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Max-abs residual of an operator decomposition identity
    VerifyDecomposition {
        #[arg(long, value_enum, ignore_case = true)]
        which: DecompWhich,
        /// Degree index of the difference block (unused for k23)
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Nyström grid size
        #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
        n: usize,
    },
    /// Trace norm of (bulk kernel - sine kernel) on [-s, s]
    Tracenorm {
        #[arg(long, value_parser = EnsembleId::from_str)]
        ensemble: EnsembleId,
        /// Matrix dimension of the group element
        #[arg(long = "n-matrix")]
        n_matrix: u32,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
        grid: usize,
    },
    /// Counting-law distances to the sine process on an interval
    W1 {
        #[arg(long, value_parser = EnsembleId::from_str)]
        ensemble: EnsembleId,
        /// Matrix dimension of the group element
        #[arg(long = "n-matrix")]
        n_matrix: u32,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
        grid: usize,
        /// Measurement window [lo, hi]; defaults to [-s, s]
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        interval: Option<Vec<f64>>,
    },
    /// Draw Haar samples and emit their eigenangles
    Sample {
        #[arg(long, value_parser = EnsembleId::from_str)]
        ensemble: EnsembleId,
        /// Matrix dimension of the group element
        #[arg(long = "n-matrix")]
        n_matrix: u32,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the angle rows to this file instead of stdout
        #[arg(long = "emit-angles")]
        emit_angles: Option<PathBuf>,
    },
    /// Empirical counting law versus the exact Poisson-binomial one
    McCompare {
        #[arg(long, value_parser = EnsembleId::from_str)]
        ensemble: EnsembleId,
        /// Matrix dimension of the group element
        #[arg(long = "n-matrix")]
        n_matrix: u32,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Distance-to-sine sweep over matrix sizes with fitted slopes
    RateSweep {
        #[arg(long)]
        ensemble: Option<String>,
        /// Comma-separated angle counts, e.g. 16,32,64,128,256
        #[arg(long = "n-list")]
        n_list: Option<String>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        /// Monte Carlo samples per row (0 disables the cross-check)
        #[arg(long = "mc-samples")]
        mc_samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// key=value file supplying defaults for any flag above
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the CSV report here as well as stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a log-log SVG plot here
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes early (e.g. `... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> sinelab::Result<()> {
    if let Ok(raw) = std::env::var("SINELAB_THREADS") {
        let threads: usize = raw.trim().parse().map_err(|_| {
            Error::Config(format!("SINELAB_THREADS must be a positive integer, got `{raw}`"))
        })?;
        if threads == 0 {
            return Err(Error::Config("SINELAB_THREADS must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool setup failed: {e}")))?;
    }
    match Cli::parse().command {
        Command::Coeffs { kind, max_k, format } => run_coeffs(kind.into(), max_k, format),
        Command::KernelEval {
            ensemble,
            n,
            scaling,
            grid,
            s,
            format,
        } => run_kernel_eval(ensemble, n, scaling, grid, s, &format),
        Command::VerifyDecomposition { which, k, s, n } => run_verify(which, k, s, n),
        Command::Tracenorm {
            ensemble,
            n_matrix,
            s,
            grid,
        } => run_tracenorm(ensemble, n_matrix, s, grid),
        Command::W1 {
            ensemble,
            n_matrix,
            s,
            grid,
            interval,
        } => run_w1(ensemble, n_matrix, s, grid, interval),
        Command::Sample {
            ensemble,
            n_matrix,
            count,
            seed,
            emit_angles,
        } => run_sample(ensemble, n_matrix, count, seed, emit_angles),
        Command::McCompare {
            ensemble,
            n_matrix,
            s,
            samples,
            seed,
        } => run_mc_compare(ensemble, n_matrix, s, samples, seed),
        Command::RateSweep {
            ensemble,
            n_list,
            s,
            grid,
            mc_samples,
            seed,
            config,
            out,
            svg,
        } => run_rate_sweep(SweepDraft {
            ensemble,
            n_list,
            s,
            grid,
            mc_samples,
            seed,
            out,
            svg,
            config,
        }),
    }
}

/// Angle count carried by a matrix of the given dimension, or a parity error.
fn angle_count(ensemble: EnsembleId, n_matrix: u32) -> sinelab::Result<u32> {
    ensemble.angle_count_for_matrix_dim(n_matrix).ok_or_else(|| {
        Error::Config(format!(
            "matrix dimension {n_matrix} does not fit ensemble {ensemble} (wrong parity or too small)"
        ))
    })
}

fn run_coeffs(kind: CoeffKind, max_k: usize, format: TableFormat) -> sinelab::Result<()> {
    let table = CoeffTable::new(kind, max_k);
    let entries = &table.entries()[..=max_k];
    match format {
        TableFormat::Csv => {
            println!("k,index,exact,float");
            for e in entries {
                println!("{},{},{},{}", e.k, e.index, e.exact, e.float);
            }
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "k": e.k,
                        "index": e.index,
                        "exact": e.exact.to_string(),
                        "float": e.float,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("static serialization"));
        }
    }
    Ok(())
}

fn run_kernel_eval(
    ensemble: EnsembleId,
    n: u32,
    scaling: Scaling,
    grid: usize,
    s: f64,
    format: &str,
) -> sinelab::Result<()> {
    if format != "csv" {
        return Err(Error::Config(format!(
            "kernel-eval emits csv only, got `{format}`"
        )));
    }
    if grid == 0 {
        return Err(Error::Config("grid must be positive".into()));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Config(format!("s must be positive, got {s}")));
    }
    let spec = KernelSpec::new(ensemble, n, scaling)?;
    let points: Vec<f64> = match scaling {
        // raw domain is half-open, so the right endpoint is excluded
        Scaling::Raw => {
            let end = spec.raw_domain_end();
            (0..grid).map(|i| end * i as f64 / grid as f64).collect()
        }
        Scaling::Bulk => {
            if grid == 1 {
                vec![0.0]
            } else {
                (0..grid)
                    .map(|i| -s + 2.0 * s * i as f64 / (grid as f64 - 1.0))
                    .collect()
            }
        }
    };
    let mut out = String::new();
    for &x in &points {
        let mut first = true;
        for &y in &points {
            if !first {
                out.push(',');
            }
            out.push_str(&format!("{}", spec.eval(x, y)?));
            first = false;
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn run_verify(which: DecompWhich, k: u32, s: f64, n: usize) -> sinelab::Result<()> {
    match which {
        DecompWhich::A => {
            let r = verify_decomposition_a(k, s, n, false)?;
            println!("max_abs_residual = {r:e}");
        }
        DecompWhich::Aprime => {
            let r = verify_decomposition_a(k, s, n, true)?;
            println!("max_abs_residual = {r:e}");
        }
        DecompWhich::K23 => {
            let (r2, r3) = verify_decomposition_k23(s, n)?;
            println!("k2_residual = {r2:e}");
            println!("k3_residual = {r3:e}");
        }
    }
    Ok(())
}

/// Upper bound for the unitary difference trace norm, assembled from the
/// per-degree closed-form block bounds weighted by the series coefficients.
fn unitary_series_bound(n: u32, s: f64) -> f64 {
    let nf = n as f64;
    let mut acc = 0.0;
    for k in 0..60u32 {
        let term = csc_float(k as usize) * a_trace_norm_bound(k, s)
            / nf.powi(2 * k as i32 + 2);
        acc += term;
        if term < acc * 1e-18 {
            break;
        }
    }
    acc
}

fn run_tracenorm(ensemble: EnsembleId, n_matrix: u32, s: f64, grid: usize) -> sinelab::Result<()> {
    let n = angle_count(ensemble, n_matrix)?;
    let spec = KernelSpec::bulk(ensemble, n)?;
    let tnorm = difference_from_sine_on(&spec, (-s, s), grid)?.trace_norm()?;
    println!("trace_norm = {tnorm:e}");
    let bound = (ensemble == EnsembleId::U).then(|| unitary_series_bound(n, s));
    if let Some(b) = bound {
        println!("series_bound = {b:e}");
    }
    println!("ensemble,n_matrix,s,grid,trace_norm,series_bound");
    println!(
        "{ensemble},{n_matrix},{s},{grid},{tnorm},{}",
        bound.map(|b| b.to_string()).unwrap_or_default()
    );
    Ok(())
}

fn run_w1(
    ensemble: EnsembleId,
    n_matrix: u32,
    s: f64,
    grid: usize,
    interval: Option<Vec<f64>>,
) -> sinelab::Result<()> {
    let n = angle_count(ensemble, n_matrix)?;
    let spec = KernelSpec::bulk(ensemble, n)?;
    let (lo, hi) = match interval {
        Some(pair) => (pair[0], pair[1]),
        None => (-s, s),
    };
    let chain = chain_on_interval(&spec, (lo, hi), grid)?;
    let (law, _) = dpp_count_law(&spec, (lo, hi), grid)?;
    println!("ensemble,n_matrix,s,lo,hi,grid,dtv,w1,trace_norm,mean,variance");
    println!(
        "{ensemble},{n_matrix},{s},{lo},{hi},{grid},{},{},{},{},{}",
        chain.dtv,
        chain.w1,
        chain.trace_norm,
        law.mean(),
        law.variance()
    );
    Ok(())
}

fn run_sample(
    ensemble: EnsembleId,
    n_matrix: u32,
    count: u64,
    seed: u64,
    emit_angles: Option<PathBuf>,
) -> sinelab::Result<()> {
    let n = angle_count(ensemble, n_matrix)?;
    let mut rows = String::from("sample,angle,bulk_rescaled\n");
    for i in 0..count {
        let g = sample_element(ensemble, n, seed, i)?;
        let sample = eigenangles(&g)?;
        let rescaled = bulk_rescale(&sample);
        for (a, b) in sample.angles().iter().zip(&rescaled) {
            rows.push_str(&format!("{i},{a},{b}\n"));
        }
    }
    match emit_angles {
        Some(path) => {
            fs::write(&path, rows)?;
            println!("ensemble,n_matrix,count,seed,angles_per_sample");
            println!("{ensemble},{n_matrix},{count},{seed},{n}");
        }
        None => print!("{rows}"),
    }
    Ok(())
}

fn run_mc_compare(
    ensemble: EnsembleId,
    n_matrix: u32,
    s: f64,
    samples: usize,
    seed: u64,
) -> sinelab::Result<()> {
    let n = angle_count(ensemble, n_matrix)?;
    let (empirical, stderrs) = mc_count_law(ensemble, n, (-s, s), samples, seed)?;
    let spec = KernelSpec::bulk(ensemble, n)?;
    let (exact, _) = dpp_count_law(&spec, (-s, s), DEFAULT_GRID_SIZE)?;
    println!("tv = {}", tv_integer(&empirical, &exact));
    println!(
        "mean_empirical = {} mean_exact = {}",
        empirical.mean(),
        exact.mean()
    );
    println!(
        "variance_empirical = {} variance_exact = {}",
        empirical.variance(),
        exact.variance()
    );
    println!("k,empirical,exact,stderr");
    let len = empirical.support_len().max(exact.support_len());
    for k in 0..len {
        println!(
            "{k},{},{},{}",
            empirical.pmf().get(k).copied().unwrap_or(0.0),
            exact.pmf().get(k).copied().unwrap_or(0.0),
            stderrs.get(k).copied().unwrap_or(0.0)
        );
    }
    Ok(())
}

/// rate-sweep settings before defaulting: CLI flags take precedence, then the
/// config file, then built-in defaults.
struct SweepDraft {
    ensemble: Option<String>,
    n_list: Option<String>,
    s: Option<f64>,
    grid: Option<usize>,
    mc_samples: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    config: Option<PathBuf>,
}

fn parse_config_value<T: FromStr>(key: &str, value: &str) -> sinelab::Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for config key `{key}`")))
}

fn apply_config_file(draft: &mut SweepDraft, path: &Path) -> sinelab::Result<()> {
    let text = fs::read_to_string(path)?;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "config line {} is not key=value: `{line}`",
                idx + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "ensemble" => {
                if draft.ensemble.is_none() {
                    draft.ensemble = Some(value.to_string());
                }
            }
            "n-list" => {
                if draft.n_list.is_none() {
                    draft.n_list = Some(value.to_string());
                }
            }
            "s" => {
                if draft.s.is_none() {
                    draft.s = Some(parse_config_value(key, value)?);
                }
            }
            "grid" => {
                if draft.grid.is_none() {
                    draft.grid = Some(parse_config_value(key, value)?);
                }
            }
            "mc-samples" => {
                if draft.mc_samples.is_none() {
                    draft.mc_samples = Some(parse_config_value(key, value)?);
                }
            }
            "seed" => {
                if draft.seed.is_none() {
                    draft.seed = Some(parse_config_value(key, value)?);
                }
            }
            "out" => {
                if draft.out.is_none() {
                    draft.out = Some(PathBuf::from(value));
                }
            }
            "svg" => {
                if draft.svg.is_none() {
                    draft.svg = Some(PathBuf::from(value));
                }
            }
            other => {
                return Err(Error::Config(format!("unknown config key `{other}`")));
            }
        }
    }
    Ok(())
}

fn parse_n_list(raw: &str) -> sinelab::Result<Vec<u32>> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad N value `{}` in list", tok.trim())))
        })
        .collect()
}

fn run_rate_sweep(mut draft: SweepDraft) -> sinelab::Result<()> {
    if let Some(path) = draft.config.take() {
        apply_config_file(&mut draft, &path)?;
    }
    let ensemble_raw = draft
        .ensemble
        .ok_or_else(|| Error::Config("ensemble is required (flag or config file)".into()))?;
    let config = SweepConfig {
        ensemble: EnsembleId::from_str(&ensemble_raw)?,
        n_values: parse_n_list(draft.n_list.as_deref().unwrap_or("16,32,64,128,256"))?,
        s: draft.s.unwrap_or(1.0),
        grid_size: draft.grid.unwrap_or(DEFAULT_GRID_SIZE),
        seed: draft.seed.unwrap_or(0),
        mc_samples: draft.mc_samples.unwrap_or(0),
    };
    let report = rate_sweep(&config)?;
    let csv = emit_report(&report, ReportFormat::Csv)?;
    print!("{csv}");
    println!(
        "slope_w1 = {:.6} (r_squared = {:.6})",
        report.slope_w1, report.r_squared_w1
    );
    println!(
        "slope_trace_norm = {:.6} (r_squared = {:.6})",
        report.slope_tnorm, report.r_squared_tnorm
    );
    if let Some(path) = draft.out {
        fs::write(&path, &csv)?;
    }
    if let Some(path) = draft.svg {
        fs::write(&path, emit_report(&report, ReportFormat::Svg)?)?;
    }
    Ok(())
}
