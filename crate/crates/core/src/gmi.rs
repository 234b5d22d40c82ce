//! Generalized mutual information of the Cauchy ML decoder on an AWGN
//! channel with Gaussian input.
//!
//! For `θ < 0` the objective is
//! `θ·E[log(λ² + (Y-X)²)] - E[log E_X̄[(λ² + (Y-X̄)²)^θ]]`
//! and the GMI is its supremum over `θ`. The first term is a 1-D smooth
//! expectation evaluated by quadrature; the second is Monte Carlo over `Y`
//! with the inner Gaussian expectation done by Gauss–Hermite in log domain.
//! Every evaluation for one problem reuses the same `Y` draws.

use rayon::prelude::*;

use crate::bounds::expected_log1p_scaled_square;
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::optimize::{argmax, golden_section_max, is_unimodal};
use crate::quadrature::GaussHermite;
use crate::rng::{standard_normal, RandomStream};
use crate::scalar::log_sum_exp;
use crate::Real;

pub const DEFAULT_THETA_LO: f64 = -5.0;
pub const DEFAULT_QUAD_NODES: usize = 128;
pub const DEFAULT_MC_SAMPLES: usize = 200_000;
/// Upper end of the `θ` search interval.
pub const THETA_HI: f64 = -1e-6;

const PROBE_POINTS: usize = 9;
const FALLBACK_GRID: usize = 65;
const FIRST_TERM_TOL: f64 = 1e-12;
/// Largest `samples × nodes` table of cached log-bases (f64 entries).
const CACHE_LIMIT: usize = 1 << 26;

/// Numeric controls shared by every cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmiControls<T> {
    pub theta_lo: T,
    pub quad_nodes: usize,
    pub mc_samples: usize,
    pub rs: RandomStream,
}

impl<T: Real> Default for GmiControls<T> {
    fn default() -> Self {
        Self {
            theta_lo: T::lit(DEFAULT_THETA_LO),
            quad_nodes: DEFAULT_QUAD_NODES,
            mc_samples: DEFAULT_MC_SAMPLES,
            rs: RandomStream::default(),
        }
    }
}

/// AWGN noise variance `σ²`, decoder scale `λ²`, input power `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmiProblem<T> {
    pub sigma2: T,
    pub lambda2: T,
    pub power: T,
    pub controls: GmiControls<T>,
}

impl<T: Real> GmiProblem<T> {
    pub fn new(sigma2: T, lambda2: T, power: T) -> Self {
        Self {
            sigma2,
            lambda2,
            power,
            controls: GmiControls::default(),
        }
    }

    pub fn with_controls(mut self, controls: GmiControls<T>) -> Self {
        self.controls = controls;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("sigma2", self.sigma2)?;
        ensure_positive("lambda2", self.lambda2)?;
        ensure_nonnegative("power", self.power)?;
        let c = &self.controls;
        if !c.theta_lo.is_finite() || c.theta_lo >= T::lit(THETA_HI) {
            return Err(Error::invalid("theta_lo", format!("must be finite and < {THETA_HI}")));
        }
        if c.quad_nodes < 16 {
            return Err(Error::invalid("quad_nodes", "need at least 16 nodes"));
        }
        if c.mc_samples < 1000 {
            return Err(Error::invalid("mc_samples", "need at least 1000 samples"));
        }
        Ok(())
    }

    /// Matched-decoder rate `½ log(1 + P/σ²)`.
    pub fn awgn_capacity(&self) -> T {
        awgn_capacity(self.power / self.sigma2)
    }
}

pub fn awgn_capacity<T: Real>(snr: T) -> T {
    snr.ln_1p() / T::lit(2.0)
}

/// Objective value at one `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue<T> {
    pub value: T,
    pub std_error: T,
}

/// Result of the `θ` maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmiEstimate<T> {
    /// `max(raw_value, 0)`.
    pub value: T,
    pub raw_value: T,
    pub theta_star: T,
    pub std_error: T,
    /// The maximizer sits on the lower end of the (widened) bracket.
    pub at_boundary: bool,
    /// The probe was not unimodal and a dense grid was searched instead.
    pub grid_fallback: bool,
}

/// Precomputed state for evaluating the objective at many `θ` with common
/// random numbers.
pub struct GmiEvaluator<T> {
    lambda2: T,
    /// `E[log(λ² + σ²N²)]`
    log_metric_mean: T,
    outputs: Vec<T>,
    /// `log(λ² + (y - x̄)²)` for every output and node, when small enough.
    log_bases: Option<Vec<T>>,
    inner_nodes: Vec<T>,
    inner_log_weights: Vec<T>,
    degenerate: bool,
}

impl<T: Real> GmiEvaluator<T> {
    pub fn new(prob: &GmiProblem<T>) -> Result<Self> {
        prob.validate()?;
        let degenerate = prob.power == T::zero();
        let log_metric_mean = prob.lambda2.ln()
            + expected_log1p_scaled_square(prob.sigma2 / prob.lambda2, T::lit(FIRST_TERM_TOL).max(T::epsilon() * T::lit(1e3)))?;
        let gh = GaussHermite::<T>::new(prob.controls.quad_nodes)?;
        let amp = prob.power.sqrt();
        let sigma = prob.sigma2.sqrt();
        let outputs = if degenerate {
            Vec::new()
        } else {
            let mut rng = prob.controls.rs.rng();
            (0..prob.controls.mc_samples)
                .map(|_| {
                    let x: T = amp * standard_normal::<T, _>(&mut rng);
                    let n: T = standard_normal(&mut rng);
                    x + sigma * n
                })
                .collect()
        };
        let inner_nodes: Vec<T> = gh.nodes.iter().map(|&t| amp * t).collect();
        let log_bases = (outputs.len() * inner_nodes.len() <= CACHE_LIMIT).then(|| {
            outputs
                .iter()
                .flat_map(|&y| inner_nodes.iter().map(move |&x| (prob.lambda2 + (y - x) * (y - x)).ln()))
                .collect()
        });
        Ok(Self {
            lambda2: prob.lambda2,
            log_metric_mean,
            outputs,
            log_bases,
            inner_nodes,
            inner_log_weights: gh.log_weights,
            degenerate,
        })
    }

    /// `log E_X̄[(λ² + (y - X̄)²)^θ]`
    fn log_inner(&self, j: usize, theta: T, buf: &mut Vec<T>) -> T {
        buf.clear();
        match &self.log_bases {
            Some(cache) => {
                let k = self.inner_nodes.len();
                buf.extend(
                    cache[j * k..(j + 1) * k]
                        .iter()
                        .zip(&self.inner_log_weights)
                        .map(|(&lb, &lw)| lw + theta * lb),
                );
            }
            None => {
                let y = self.outputs[j];
                buf.extend(
                    self.inner_nodes
                        .iter()
                        .zip(&self.inner_log_weights)
                        .map(|(&x, &lw)| lw + theta * (self.lambda2 + (y - x) * (y - x)).ln()),
                );
            }
        }
        log_sum_exp(buf)
    }

    pub fn objective(&self, theta: T) -> Result<ObjectiveValue<T>> {
        if theta.is_nan() || theta >= T::zero() {
            return Err(Error::invalid("theta", "must be < 0"));
        }
        if self.degenerate {
            return Ok(ObjectiveValue {
                value: T::zero(),
                std_error: T::zero(),
            });
        }
        let mut buf = Vec::with_capacity(self.inner_nodes.len());
        let (sum, sum_sq) = (0..self.outputs.len()).fold((T::zero(), T::zero()), |(s, s2), j| {
            let l = self.log_inner(j, theta, &mut buf);
            (s + l, s2 + l * l)
        });
        let n = T::count(self.outputs.len());
        let mean = sum / n;
        let var = ((sum_sq / n - mean * mean) * n / (n - T::one())).max(T::zero());
        let value = theta * self.log_metric_mean - mean;
        if !value.is_finite() {
            return Err(Error::invalid("theta", format!("objective is not finite at θ = {theta}")));
        }
        Ok(ObjectiveValue {
            value,
            std_error: (var / n).sqrt(),
        })
    }
}

pub fn gmi_objective<T: Real>(prob: &GmiProblem<T>, theta: T) -> Result<ObjectiveValue<T>> {
    GmiEvaluator::new(prob)?.objective(theta)
}

/// `sup_{θ<0}` of the objective: a 9-point probe on `[θ_lo, -1e-6]` locates
/// the peak, golden-section search refines it. A peak on `θ_lo` widens the
/// bracket four-fold once.
pub fn gmi_maximize<T: Real>(prob: &GmiProblem<T>) -> Result<GmiEstimate<T>> {
    let eval = GmiEvaluator::new(prob)?;
    let hi = T::lit(THETA_HI);
    if eval.degenerate {
        return Ok(GmiEstimate {
            value: T::zero(),
            raw_value: T::zero(),
            theta_star: hi,
            std_error: T::zero(),
            at_boundary: false,
            grid_fallback: false,
        });
    }
    let f = |theta: T| eval.objective(theta).map(|o| o.value);

    let mut lo = prob.controls.theta_lo;
    let mut widened = false;
    let (grid, values, grid_fallback) = loop {
        let grid = linspace(lo, hi, PROBE_POINTS);
        let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<T>>>()?;
        let (grid, values, fallback) = if is_unimodal(&values) {
            (grid, values, false)
        } else {
            let dense = linspace(lo, hi, FALLBACK_GRID);
            let dv = dense.iter().map(|&t| f(t)).collect::<Result<Vec<T>>>()?;
            (dense, dv, true)
        };
        if argmax(&values) == Some(0) && !widened {
            lo = lo * T::lit(4.0);
            widened = true;
            continue;
        }
        break (grid, values, fallback);
    };
    let best = argmax(&values).unwrap_or(0);
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    let xtol = (b - a).abs() * T::lit(1e-4);
    let peak = golden_section_max(f, a, b, xtol, 200)?;
    let (theta_star, raw) = if peak.value >= values[best] {
        (peak.x, peak.value)
    } else {
        (grid[best], values[best])
    };
    let at_theta = eval.objective(theta_star)?;
    Ok(GmiEstimate {
        value: raw.max(T::zero()),
        raw_value: raw,
        theta_star,
        std_error: at_theta.std_error,
        at_boundary: best == 0,
        grid_fallback,
    })
}

fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    (0..n).map(|i| a + (b - a) * T::count(i) / T::count(n - 1)).collect()
}

/// One cell of the GMI table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmiRow<T> {
    /// `P/σ²`
    pub snr: T,
    pub lambda2: T,
    pub estimate: GmiEstimate<T>,
    pub awgn_capacity: T,
}

/// GMI for every `(λ², P/σ²)` pair, `λ²`-major. Cell `i` uses substream `i`
/// of `controls.rs`.
pub fn gmi_sweep<T: Real>(
    sigma2: T,
    lambda2_list: &[T],
    snr_grid: &[T],
    controls: &GmiControls<T>,
) -> Result<Vec<GmiRow<T>>> {
    if lambda2_list.is_empty() || snr_grid.is_empty() {
        return Err(Error::Empty("gmi_sweep needs nonempty lambda2 and snr lists"));
    }
    let cells: Vec<(T, T)> = lambda2_list
        .iter()
        .flat_map(|&l2| snr_grid.iter().map(move |&snr| (l2, snr)))
        .collect();
    cells
        .par_iter()
        .enumerate()
        .map(|(i, &(lambda2, snr))| {
            let prob = GmiProblem::new(sigma2, lambda2, snr * sigma2).with_controls(GmiControls {
                rs: controls.rs.substream(i as u64),
                ..*controls
            });
            Ok(GmiRow {
                snr,
                lambda2,
                estimate: gmi_maximize(&prob)?,
                awgn_capacity: awgn_capacity(snr),
            })
        })
        .collect()
}
