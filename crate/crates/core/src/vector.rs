//! Single-input multi-output AWCN: `Y = h X + Z` with i.i.d. Cauchy branch
//! noise, linear combining front ends, and rate bounds.
//!
//! A combiner `β` on the simplex turns the vector output into a scalar
//! channel with gain `βᵀh` and Cauchy noise of scale `Σ βᵢ λ = λ`, so the
//! best linear front end simply selects the strongest branch.

use rayon::prelude::*;

use crate::bounds::{lb_epi_gamma, ChannelParams};
use crate::cauchy::combine_scales;
use crate::decoding::McEstimate;
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::rng::{standard_normal, RandomStream};
use crate::Real;

pub const DEFAULT_GENIE_SAMPLES: usize = 1_000_000;
/// `P/λ²` at which the high-power power gain is estimated.
pub const REFERENCE_GAMMA: f64 = 1e8;
const SIMPLEX_TOL: f64 = 1e-12;
const MIN_SAMPLES: usize = 1000;
const CHUNK: usize = 4096;

/// Branch gains `h`, per-branch noise scale `λ`, input power `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorChannel<T> {
    gains: Vec<T>,
    lambda: T,
    power: T,
}

impl<T: Real> VectorChannel<T> {
    /// Negative gains are replaced by their magnitudes.
    pub fn new(gains: Vec<T>, lambda: T, power: T) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::Empty("vector channel needs at least one branch"));
        }
        let gains = gains
            .into_iter()
            .map(|h| {
                if h.is_finite() {
                    Ok(h.abs())
                } else {
                    Err(Error::invalid("gains", format!("must be finite, got {h}")))
                }
            })
            .collect::<Result<Vec<T>>>()?;
        if gains.iter().all(|&h| h == T::zero()) {
            return Err(Error::invalid("gains", "at least one gain must be nonzero"));
        }
        ensure_positive("lambda", lambda)?;
        ensure_nonnegative("power", power)?;
        Ok(Self { gains, lambda, power })
    }

    pub fn gains(&self) -> &[T] {
        &self.gains
    }

    pub fn k(&self) -> usize {
        self.gains.len()
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn power(&self) -> T {
        self.power
    }

    /// `P/λ²`
    pub fn gamma(&self) -> T {
        self.power / (self.lambda * self.lambda)
    }

    pub fn h_max(&self) -> T {
        self.gains.iter().copied().fold(T::zero(), T::max)
    }

    /// `‖h‖²`
    pub fn norm_sq(&self) -> T {
        self.gains.iter().map(|&h| h * h).sum()
    }

    fn with_power(&self, power: T) -> Self {
        Self {
            power,
            ..self.clone()
        }
    }
}

/// Nonnegative combining weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Combiner<T> {
    beta: Vec<T>,
}

impl<T: Real> Combiner<T> {
    pub fn new(beta: Vec<T>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Empty("combiner needs at least one weight"));
        }
        for &b in &beta {
            ensure_nonnegative("beta", b)?;
        }
        let total: T = beta.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(SIMPLEX_TOL) {
            return Err(Error::invalid("beta", format!("weights sum to {total}, not 1")));
        }
        Ok(Self { beta })
    }

    /// Unit vector on branch `index` of `k`.
    pub fn selection(k: usize, index: usize) -> Result<Self> {
        if index >= k {
            return Err(Error::invalid("index", format!("{index} out of range for {k} branches")));
        }
        let mut beta = vec![T::zero(); k];
        beta[index] = T::one();
        Ok(Self { beta })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Empty("combiner needs at least one weight"));
        }
        Ok(Self {
            beta: vec![T::one() / T::count(k); k],
        })
    }

    pub fn beta(&self) -> &[T] {
        &self.beta
    }
}

/// Scalar channel seen after combining.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combined<T> {
    /// `βᵀh`
    pub gain: T,
    pub noise_scale: T,
    /// Noise scale and received power `(βᵀh)² P`.
    pub channel: ChannelParams<T>,
}

pub fn combine<T: Real>(vc: &VectorChannel<T>, c: &Combiner<T>) -> Result<Combined<T>> {
    if vc.k() != c.beta.len() {
        return Err(Error::LengthMismatch {
            left: vc.k(),
            right: c.beta.len(),
        });
    }
    let gain: T = vc.gains.iter().zip(&c.beta).map(|(&h, &b)| h * b).sum();
    let noise_scale = combine_scales(&c.beta, &vec![vc.lambda; vc.k()])?;
    Ok(Combined {
        gain,
        noise_scale,
        channel: ChannelParams::new(noise_scale, gain * gain * vc.power)?,
    })
}

/// Selection of the strongest branch (lowest index on ties) and the
/// resulting lower bound `½ log(1 + e h_max² P / (8πλ²))`.
pub fn best_combiner<T: Real>(vc: &VectorChannel<T>) -> (Combiner<T>, T) {
    let mut best = 0;
    for (i, &h) in vc.gains.iter().enumerate() {
        if h > vc.gains[best] {
            best = i;
        }
    }
    let h = vc.gains[best];
    let beta = (0..vc.k()).map(|i| if i == best { T::one() } else { T::zero() }).collect();
    (Combiner { beta }, lb_epi_gamma(h * h * vc.gamma()))
}

/// Genie-aided upper bound `½ E[log(1 + Σ hᵢ²Vᵢ² P/λ²)]`, `V` standard
/// normal in `k` dimensions, by Monte Carlo.
pub fn vector_genie_ub<T: Real>(vc: &VectorChannel<T>, mc: usize, rs: &RandomStream) -> Result<McEstimate<T>> {
    if mc < MIN_SAMPLES {
        return Err(Error::invalid("mc", format!("need at least {MIN_SAMPLES} samples")));
    }
    if vc.power == T::zero() {
        return Ok(McEstimate {
            mean: T::zero(),
            std_error: T::zero(),
            trials: mc,
        });
    }
    let gamma = vc.gamma();
    let h2: Vec<T> = vc.gains.iter().map(|&h| h * h).collect();
    let chunks = mc.div_ceil(CHUNK);
    let partial: Vec<(T, T)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rs.substream(c as u64).rng();
            let n = CHUNK.min(mc - c * CHUNK);
            (0..n).fold((T::zero(), T::zero()), |(s, s2), _| {
                let energy: T = h2
                    .iter()
                    .map(|&g| {
                        let v: T = standard_normal(&mut rng);
                        g * v * v
                    })
                    .sum();
                let x = (gamma * energy).ln_1p() / T::lit(2.0);
                (s + x, s2 + x * x)
            })
        })
        .collect();
    let (sum, sum_sq) = partial
        .into_iter()
        .fold((T::zero(), T::zero()), |(a, b), (s, s2)| (a + s, b + s2));
    let n = T::count(mc);
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - T::one())).max(T::zero());
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials: mc,
    })
}

/// High-power power gain: bracket `[h_max², ‖h‖²]` plus the Monte Carlo
/// value `exp(2(ub - ½ log γ))` at `γ = 10⁸`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGainBracket<T> {
    pub lower: T,
    pub upper: T,
    pub estimate: T,
    pub std_error: T,
}

impl<T: Real> PowerGainBracket<T> {
    /// Estimate does not exceed `‖h‖²` beyond three standard errors.
    pub fn estimate_below_upper(&self) -> bool {
        self.estimate <= self.upper + T::lit(3.0) * self.std_error
    }
}

pub fn vector_power_gain_bracket<T: Real>(
    vc: &VectorChannel<T>,
    mc: usize,
    rs: &RandomStream,
) -> Result<PowerGainBracket<T>> {
    let gamma_ref = T::lit(REFERENCE_GAMMA);
    let reference = vc.with_power(gamma_ref * vc.lambda * vc.lambda);
    let ub = vector_genie_ub(&reference, mc, rs)?;
    let estimate = (T::lit(2.0) * ub.mean - gamma_ref.ln()).exp();
    let h = vc.h_max();
    Ok(PowerGainBracket {
        lower: h * h,
        upper: vc.norm_sq(),
        estimate,
        std_error: T::lit(2.0) * estimate * ub.std_error,
    })
}

/// Capacity per unit cost `‖h‖²/(4λ²)`.
pub fn vector_cpuc<T: Real>(vc: &VectorChannel<T>) -> T {
    vc.norm_sq() / (T::lit(4.0) * vc.lambda * vc.lambda)
}
