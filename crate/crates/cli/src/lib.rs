//! Sweeps and simulations for AWCN channels, emitted as CSV or JSON tables.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use awcn_core::blahut::{self, ba_capacity_at_power_with, discretize_awcn};
use awcn_core::bounds::{bounds_sweep, DEFAULT_GENIE_TOL};
use awcn_core::decoding::{
    fixed_pair_mc, ml_two_codeword_mc, nn_error_conditional, nn_error_limit, nn_error_mc, nn_error_mc_aggregated,
    nn_two_codeword_error, Decoder, EnsembleKind,
};
use awcn_core::gmi::{self, gmi_sweep};
use awcn_core::vector::{best_combiner, vector_cpuc, vector_genie_ub, vector_power_gain_bracket};
use awcn_core::{ChannelParams, EnsembleSpec, GmiControls, GridSpec, RandomStream, VectorChannel};

pub mod parse;
pub mod table;

use table::{Cell, Table};

pub const DEFAULT_SEED: u64 = 42;

const GMI_STREAM: u64 = 1;
const DECODE_STREAM: u64 = 2;
const VECTOR_STREAM: u64 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] awcn_core::Error),
    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    /// 2 for bad input or output, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io { .. } => 2,
            CliError::Core(e) if !e.is_numeric() => 2,
            CliError::Core(_) | CliError::NotConverged(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Io { .. } => "io",
            CliError::Core(e) if !e.is_numeric() => "validation",
            CliError::Core(_) => "numeric",
            CliError::NotConverged(_) => "not_converged",
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "awcn", version, about = "Capacity bounds and simulations for additive white Cauchy noise channels")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Closed-form and quadrature capacity bounds over a γ = P/λ² grid.
    Bounds(BoundsArgs),
    /// Blahut–Arimoto capacity of the discretized channel.
    Ba(BaArgs),
    /// GMI of the Cauchy ML decoder on an AWGN channel.
    Gmi(GmiArgs),
    /// Two-codeword decoding error simulations.
    DecodeSim(DecodeArgs),
    /// Single-input multi-output bounds.
    Vector(VectorArgs),
}

/// γ values from a log-range, an explicit list, or a power list divided by λ².
#[derive(Debug, Clone, Args)]
pub struct GammaArgs {
    /// `lo:hi:points-per-decade`
    #[arg(long, conflicts_with_all = ["gammas", "power"])]
    pub gamma_grid: Option<String>,
    /// Comma-separated γ values.
    #[arg(long, conflicts_with = "power")]
    pub gammas: Option<String>,
    /// Comma-separated input powers; γ = P/λ².
    #[arg(long)]
    pub power: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

impl GammaArgs {
    fn resolve(&self, default_grid: &str) -> Result<Vec<f64>, CliError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(CliError::Validation("--lambda must be finite and > 0".into()));
        }
        let gammas = match (&self.gamma_grid, &self.gammas, &self.power) {
            (Some(g), _, _) => parse::log_grid(g)?,
            (_, Some(list), _) => parse::number_list(list)?,
            (_, _, Some(p)) => parse::number_list(p)?
                .into_iter()
                .map(|p| p / (self.lambda * self.lambda))
                .collect(),
            _ => parse::log_grid(default_grid)?,
        };
        if gammas.iter().any(|&g| g.is_nan() || g < 0.0) {
            return Err(CliError::Validation("γ values must be >= 0".into()));
        }
        Ok(gammas)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub grid: GammaArgs,
    /// Quadrature tolerance of the genie-aided bound.
    #[arg(long, default_value_t = DEFAULT_GENIE_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BaArgs {
    #[command(flatten)]
    pub grid: GammaArgs,
    /// Certificate tolerance.
    #[arg(long, default_value_t = blahut::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = blahut::DEFAULT_INPUTS)]
    pub m_inputs: usize,
    #[arg(long, default_value_t = blahut::DEFAULT_OUTPUTS)]
    pub b_outputs: usize,
    #[arg(long, default_value_t = blahut::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GmiArgs {
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Comma-separated λ²/σ² values; fractions like `1/9` are accepted.
    #[arg(long, default_value = "1/9,1,9")]
    pub lambda2_ratios: String,
    /// Comma-separated P/σ² values.
    #[arg(long, default_value = "0,1,5,10,20")]
    pub snr: String,
    #[arg(long, default_value_t = gmi::DEFAULT_MC_SAMPLES)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = gmi::DEFAULT_QUAD_NODES)]
    pub quad_nodes: usize,
    #[arg(long, default_value_t = gmi::DEFAULT_THETA_LO, allow_negative_numbers = true)]
    pub theta_lo: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Per-symbol noise, fresh pair per trial.
    Symbol,
    /// Per-symbol codeword differences, noise summed in closed form.
    Aggregate,
    /// Exact pairwise error averaged over random pairs.
    Conditional,
    /// Pairs drawn once, noise resampled; one row per pair with the exact error.
    FixedPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Nn,
    Ml,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    /// Comma-separated ensembles: gaussian, antipodal.
    #[arg(long, default_value = "gaussian,antipodal")]
    pub ensembles: String,
    #[arg(long, default_value = "10,100,1000,10000")]
    pub block_lens: String,
    /// Comma-separated P/λ² values.
    #[arg(long, default_value = "1")]
    pub gammas: String,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Codeword pairs per cell.
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    /// Noise trials per pair (fixed-pair method).
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Method::Symbol)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = DecoderArg::Nn)]
    pub decoder: DecoderArg,
}

#[derive(Debug, Clone, Args)]
pub struct VectorArgs {
    /// Comma-separated branch gains; repeat for several channels.
    #[arg(long = "gains", default_values = ["1,1", "1,2,3"])]
    pub gains: Vec<String>,
    #[command(flatten)]
    pub grid: GammaArgs,
    #[arg(long, default_value_t = awcn_core::vector::DEFAULT_GENIE_SAMPLES)]
    pub mc_samples: usize,
}

/// Computes the table for `config` without writing it.
pub fn build_table(config: &RunConfig) -> Result<Table, CliError> {
    match &config.command {
        Command::Bounds(a) => bounds_table(a),
        Command::Ba(a) => ba_table(a),
        Command::Gmi(a) => gmi_table(a, config.seed),
        Command::DecodeSim(a) => decode_table(a, config.seed),
        Command::Vector(a) => vector_table(a, config.seed),
    }
}

/// Builds, renders and writes the table. Unconverged solver rows are still
/// written before the error is returned.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let table = build_table(config)?;
    let text = match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &config.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?,
    }
    if let Command::Ba(_) = config.command {
        let idx = table.columns.iter().position(|&c| c == "converged").unwrap_or(0);
        let failed: Vec<String> = table
            .rows
            .iter()
            .filter(|r| r[idx] == Cell::Bool(false))
            .map(|r| match r[0] {
                Cell::Num(g) => table::format_number(g),
                _ => String::new(),
            })
            .collect();
        if !failed.is_empty() {
            return Err(CliError::NotConverged(format!(
                "Blahut–Arimoto did not converge at γ = {}",
                failed.join(", ")
            )));
        }
    }
    Ok(())
}

fn bounds_table(a: &BoundsArgs) -> Result<Table, CliError> {
    let mut gammas = a.grid.resolve("1e-2:1e3:25")?;
    gammas.sort_by(f64::total_cmp);
    let mut t = Table::new(&["gamma", "lb_epi", "ub_genie", "ub_cpuc", "mi_antipodal"]);
    for r in bounds_sweep(&gammas, a.tol)? {
        t.push(vec![
            Cell::Num(r.gamma),
            Cell::Num(r.lb_epi),
            Cell::Num(r.ub_genie),
            Cell::Num(r.ub_cpuc),
            Cell::Num(r.mi_antipodal),
        ]);
    }
    Ok(t)
}

fn ba_table(a: &BaArgs) -> Result<Table, CliError> {
    let gammas = match (&a.grid.gamma_grid, &a.grid.gammas, &a.grid.power) {
        (None, None, None) => vec![1.0, 10.0, 100.0],
        _ => a.grid.resolve("")?,
    };
    let lambda = a.grid.lambda;
    let mut t = Table::new(&["gamma", "ba_rate", "avg_cost", "iterations", "converged"]);
    for &g in &gammas {
        let power = g * lambda * lambda;
        let cp = ChannelParams::new(lambda, power)?;
        let grid = GridSpec {
            m_inputs: a.m_inputs,
            b_outputs: a.b_outputs,
            ..GridSpec::default_for(&cp)
        };
        let ch = discretize_awcn(&cp, &grid)?;
        let sol = ba_capacity_at_power_with(&ch, power, a.tol, a.max_iter)?;
        t.push(vec![
            Cell::Num(g),
            Cell::Num(sol.rate),
            Cell::Num(sol.avg_cost),
            Cell::Int(sol.iterations as u64),
            Cell::Bool(sol.converged),
        ]);
    }
    Ok(t)
}

fn gmi_table(a: &GmiArgs, seed: u64) -> Result<Table, CliError> {
    let ratios = parse::number_list(&a.lambda2_ratios)?;
    let snrs = parse::number_list(&a.snr)?;
    let controls = GmiControls {
        theta_lo: a.theta_lo,
        quad_nodes: a.quad_nodes,
        mc_samples: a.mc_samples,
        rs: RandomStream::new(seed, GMI_STREAM),
    };
    let lambda2: Vec<f64> = ratios.iter().map(|r| r * a.sigma2).collect();
    let rows = gmi_sweep(a.sigma2, &lambda2, &snrs, &controls)?;
    let mut t = Table::new(&["snr", "lambda2_over_sigma2", "gmi", "theta_star", "std_error", "awgn_capacity"]);
    let per_ratio = snrs.len();
    for (i, r) in rows.iter().enumerate() {
        t.push(vec![
            Cell::Num(r.snr),
            Cell::Num(ratios[i / per_ratio]),
            Cell::Num(r.estimate.value),
            Cell::Num(r.estimate.theta_star),
            Cell::Num(r.estimate.std_error),
            Cell::Num(r.awgn_capacity),
        ]);
    }
    Ok(t)
}

fn decode_table(a: &DecodeArgs, seed: u64) -> Result<Table, CliError> {
    let kinds = a
        .ensembles
        .split(',')
        .map(|s| s.trim().parse::<EnsembleKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let block_lens = parse::count_list(&a.block_lens)?;
    let gammas = parse::number_list(&a.gammas)?;
    if a.decoder == DecoderArg::Ml && a.method != Method::Symbol && a.method != Method::FixedPair {
        return Err(CliError::Validation(
            "the ml decoder supports only the symbol and fixed-pair methods".into(),
        ));
    }
    let base = RandomStream::new(seed, DECODE_STREAM);
    let lambda = a.lambda;
    let mut t = Table::new(&["ensemble", "N", "P_over_lambda2", "mc_error", "std_error", "analytic_limit"]);
    let mut cell = 0u64;
    for &kind in &kinds {
        for &n in &block_lens {
            for &g in &gammas {
                let spec = EnsembleSpec {
                    kind,
                    power: g * lambda * lambda,
                    block_len: n,
                    pairs: a.pairs,
                    rs: base.substream(cell),
                };
                cell += 1;
                let limit = match a.decoder {
                    DecoderArg::Nn => nn_error_limit(kind, spec.power, lambda)?,
                    DecoderArg::Ml => f64::NAN,
                };
                let head = |est: f64, se: f64, reference: f64| {
                    vec![
                        Cell::Text(kind.name().to_string()),
                        Cell::Int(n as u64),
                        Cell::Num(g),
                        Cell::Num(est),
                        Cell::Num(se),
                        Cell::Num(reference),
                    ]
                };
                if a.method == Method::FixedPair {
                    spec.validate()?;
                    let decoder = match a.decoder {
                        DecoderArg::Nn => Decoder::NearestNeighbor,
                        DecoderArg::Ml => Decoder::CauchyMl { lambda },
                    };
                    let noise = spec.rs.substream(u64::MAX);
                    for i in 0..a.pairs as u64 {
                        let pair = spec.draw_pair(i);
                        let mc = fixed_pair_mc(&pair, lambda, decoder, a.trials, &noise.substream(i))?;
                        let exact = match a.decoder {
                            DecoderArg::Nn => nn_two_codeword_error(&pair, lambda)?,
                            DecoderArg::Ml => f64::NAN,
                        };
                        t.push(head(mc.mean, mc.std_error, exact));
                    }
                    continue;
                }
                let est = match (a.decoder, a.method) {
                    (DecoderArg::Ml, _) => ml_two_codeword_mc(&spec, lambda)?,
                    (DecoderArg::Nn, Method::Symbol) => nn_error_mc(&spec, lambda)?,
                    (DecoderArg::Nn, Method::Aggregate) => nn_error_mc_aggregated(&spec, lambda)?,
                    (DecoderArg::Nn, _) => nn_error_conditional(&spec, lambda)?,
                };
                t.push(head(est.mean, est.std_error, limit));
            }
        }
    }
    Ok(t)
}

fn vector_table(a: &VectorArgs, seed: u64) -> Result<Table, CliError> {
    let gammas = a.grid.resolve("1e-2:1e3:1")?;
    let lambda = a.grid.lambda;
    let base = RandomStream::new(seed, VECTOR_STREAM);
    let mut t = Table::new(&["h", "P_over_lambda2", "lb_selection", "ub_genie_mc", "cpuc_slope", "gain_bracket"]);
    let mut cell = 0u64;
    for (j, spec) in a.gains.iter().enumerate() {
        let gains = parse::number_list(spec)?;
        let reference = VectorChannel::new(gains, lambda, 1.0)?;
        let bracket = vector_power_gain_bracket(&reference, a.mc_samples, &base.substream(u64::MAX - j as u64))?;
        for &g in &gammas {
            let vc = VectorChannel::new(reference.gains().to_vec(), lambda, g * lambda * lambda)?;
            let ub = vector_genie_ub(&vc, a.mc_samples, &base.substream(cell))?;
            cell += 1;
            t.push(vec![
                Cell::List(vc.gains().to_vec()),
                Cell::Num(g),
                Cell::Num(best_combiner(&vc).1),
                Cell::Num(ub.mean),
                Cell::Num(vector_cpuc(&vc) * lambda * lambda),
                Cell::List(vec![bracket.lower, bracket.upper]),
            ]);
        }
    }
    Ok(t)
}
