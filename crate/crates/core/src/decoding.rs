//! Decoding metrics and two-codeword error analysis on AWCN.
//!
//! Nearest-neighbor decoding compares `Σ (y - x)²`; the Cauchy ML decoder
//! compares `Σ log(1 + (y - x)²/λ²)`. For a pair with difference
//! `d = x₂ - x₁`, nearest-neighbor decoding errs exactly when the Cauchy
//! variable `(1/N) Σ dₙ zₙ` exceeds `(1/2N) Σ dₙ²`, which gives a closed form.

use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::cauchy::CauchyParam;
use crate::error::{ensure_positive, Error, Result};
use crate::rng::{standard_normal, RandomStream};
use crate::Real;

/// Cauchy ML per-symbol metric `log(1 + (y - x)²/λ²)`.
#[inline]
pub fn awcn_ml_metric<T: Real>(x: T, y: T, lambda: T) -> T {
    let r = (y - x) / lambda;
    (r * r).ln_1p()
}

/// Squared Euclidean per-symbol distance.
#[inline]
pub fn nn_metric<T: Real>(x: T, y: T) -> T {
    (y - x) * (y - x)
}

/// Two equal-length codewords.
#[derive(Debug, Clone, PartialEq)]
pub struct CodewordPair<T> {
    x1: Vec<T>,
    x2: Vec<T>,
}

impl<T: Real> CodewordPair<T> {
    pub fn new(x1: Vec<T>, x2: Vec<T>) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::LengthMismatch {
                left: x1.len(),
                right: x2.len(),
            });
        }
        if x1.is_empty() {
            return Err(Error::Empty("codewords need length >= 1"));
        }
        Ok(Self { x1, x2 })
    }

    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }

    pub fn x1(&self) -> &[T] {
        &self.x1
    }

    pub fn x2(&self) -> &[T] {
        &self.x2
    }

    fn diffs(&self) -> impl Iterator<Item = T> + '_ {
        self.x1.iter().zip(&self.x2).map(|(&a, &b)| b - a)
    }

    /// `(1/N) Σ (x₂ₙ - x₁ₙ)²`
    pub fn mean_sq_diff(&self) -> T {
        self.diffs().map(|d| d * d).sum::<T>() / T::count(self.len())
    }

    /// `(1/N) Σ |x₂ₙ - x₁ₙ|`
    pub fn mean_abs_diff(&self) -> T {
        self.diffs().map(T::abs).sum::<T>() / T::count(self.len())
    }
}

/// Exact probability that nearest-neighbor decoding picks `x₂` when `x₁` was
/// sent over AWCN with scale `λ`:
/// `½ - arctan(msd / (2λ·mad)) / π`.
pub fn nn_two_codeword_error<T: Real>(pair: &CodewordPair<T>, lambda: T) -> Result<T> {
    ensure_positive("lambda", lambda)?;
    let mad = pair.mean_abs_diff();
    if mad == T::zero() {
        return Err(Error::IdenticalCodewords);
    }
    Ok(error_from_ratio(pair.mean_sq_diff() / (T::lit(2.0) * lambda * mad)))
}

fn error_from_ratio<T: Real>(ratio: T) -> T {
    T::lit(0.5) - ratio.atan() / T::PI()
}

/// Symbol distribution of an i.i.d. random codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    /// `N(0, P)` symbols.
    Gaussian,
    /// Equiprobable `±√P` symbols.
    Antipodal,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::Antipodal => "antipodal",
        }
    }

    fn draw<T: Real, R: Rng + ?Sized>(self, amplitude: T, rng: &mut R) -> T {
        match self {
            EnsembleKind::Gaussian => amplitude * standard_normal::<T, R>(rng),
            EnsembleKind::Antipodal => {
                if rng.random::<bool>() {
                    amplitude
                } else {
                    -amplitude
                }
            }
        }
    }

    /// One draw of `x₂ - x₁` for independent symbols.
    fn draw_difference<T: Real, R: Rng + ?Sized>(self, amplitude: T, rng: &mut R) -> T {
        match self {
            EnsembleKind::Gaussian => amplitude * T::SQRT_2() * standard_normal::<T, R>(rng),
            EnsembleKind::Antipodal => match rng.random::<u32>() & 3 {
                0 => T::lit(2.0) * amplitude,
                3 => T::lit(-2.0) * amplitude,
                _ => T::zero(),
            },
        }
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(EnsembleKind::Gaussian),
            "antipodal" => Ok(EnsembleKind::Antipodal),
            other => Err(Error::invalid("ensemble", format!("unknown ensemble `{other}`"))),
        }
    }
}

/// Random-coding experiment: `pairs` codeword pairs of length `block_len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec<T> {
    pub kind: EnsembleKind,
    pub power: T,
    pub block_len: usize,
    pub pairs: usize,
    pub rs: RandomStream,
}

impl<T: Real> EnsembleSpec<T> {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("power", self.power)?;
        if self.block_len == 0 {
            return Err(Error::invalid("block_len", "must be >= 1"));
        }
        if self.pairs == 0 {
            return Err(Error::invalid("pairs", "must be >= 1"));
        }
        Ok(())
    }

    /// Draws codeword pair `index` from its own substream.
    pub fn draw_pair(&self, index: u64) -> CodewordPair<T> {
        let (x1, x2) = self.symbols(index).unzip();
        CodewordPair { x1, x2 }
    }

    /// `(Σ dₙ², Σ |dₙ|)` for a pair drawn through its difference law.
    fn difference_sums(&self, index: u64) -> (T, T) {
        let mut rng = self.rs.substream(2 * index).rng();
        let amp = self.power.sqrt();
        (0..self.block_len).fold((T::zero(), T::zero()), |(sq, abs), _| {
            let d = self.kind.draw_difference(amp, &mut rng);
            (sq + d * d, abs + d.abs())
        })
    }

    /// Symbol pairs `(x₁ₙ, x₂ₙ)` of codeword pair `index`, drawn lazily.
    fn symbols(&self, index: u64) -> impl Iterator<Item = (T, T)> {
        let mut rng = self.rs.substream(2 * index).rng();
        let amp = self.power.sqrt();
        let kind = self.kind;
        (0..self.block_len).map(move |_| {
            let a = kind.draw(amp, &mut rng);
            let b = kind.draw(amp, &mut rng);
            (a, b)
        })
    }
}

/// Large-`N` limit of the nearest-neighbor pairwise error for the ensemble.
pub fn nn_error_limit<T: Real>(kind: EnsembleKind, power: T, lambda: T) -> Result<T> {
    ensure_positive("lambda", lambda)?;
    let gamma = crate::error::ensure_nonnegative("power", power)? / (lambda * lambda);
    let ratio = match kind {
        EnsembleKind::Gaussian => (T::PI() * gamma).sqrt() / T::lit(2.0),
        EnsembleKind::Antipodal => gamma.sqrt(),
    };
    Ok(error_from_ratio(ratio))
}

/// Pairwise decoding rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decoder<T> {
    NearestNeighbor,
    CauchyMl { lambda: T },
}

impl<T: Real> Decoder<T> {
    /// Per-symbol contribution to `metric(x₂) - metric(x₁)` given the
    /// difference `d = x₂ - x₁` and noise `z` (so `y - x₁ = z`,
    /// `y - x₂ = z - d`). The decoder errs when the block sum is negative.
    #[inline]
    fn margin(&self, d: T, z: T) -> T {
        match *self {
            Decoder::NearestNeighbor => d * (d - T::lit(2.0) * z),
            Decoder::CauchyMl { lambda } => awcn_ml_metric(d, z, lambda) - awcn_ml_metric(T::zero(), z, lambda),
        }
    }
}

/// Monte Carlo mean and its standard error (binomial for error rates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub trials: usize,
}

impl<T: Real> McEstimate<T> {
    /// From a count of half-errors (ties count 1, errors 2).
    fn from_half_errors(half_errors: u64, trials: usize) -> Self {
        let n = T::count(trials);
        let mean = T::lit(half_errors as f64) / (T::lit(2.0) * n);
        Self {
            mean,
            std_error: (mean * (T::one() - mean) / n).sqrt(),
            trials,
        }
    }
}

/// 2 for an error, 1 for a tie, 0 for a correct decision.
fn decide<T: Real>(margin: T) -> u64 {
    if margin < T::zero() {
        2
    } else if margin == T::zero() {
        1
    } else {
        0
    }
}

fn ensemble_mc<T: Real>(spec: &EnsembleSpec<T>, noise: &CauchyParam<T>, decoder: Decoder<T>) -> Result<McEstimate<T>> {
    spec.validate()?;
    let half_errors: u64 = (0..spec.pairs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = spec.rs.substream(2 * i + 1).rng();
            let margin: T = spec
                .symbols(i)
                .map(|(a, b)| decoder.margin(b - a, noise.sample(&mut rng)))
                .sum();
            decide(margin)
        })
        .sum();
    Ok(McEstimate::from_half_errors(half_errors, spec.pairs))
}

/// Nearest-neighbor pairwise error over random codeword pairs: one fresh
/// pair and one noise block per trial.
pub fn nn_error_mc<T: Real>(spec: &EnsembleSpec<T>, lambda: T) -> Result<McEstimate<T>> {
    ensemble_mc(spec, &CauchyParam::new(lambda)?, Decoder::NearestNeighbor)
}

/// Nearest-neighbor pairwise error with the noise summed in closed form.
///
/// Each trial draws the codeword difference `d = x₂ - x₁` symbol by symbol
/// from its exact law. Given `d`, the decision statistic `Σ dₙzₙ` is Cauchy
/// with scale `λ Σ|dₙ|`, so one draw replaces the noise block.
pub fn nn_error_mc_aggregated<T: Real>(spec: &EnsembleSpec<T>, lambda: T) -> Result<McEstimate<T>> {
    spec.validate()?;
    let noise = CauchyParam::new(lambda)?;
    let half_errors: u64 = (0..spec.pairs as u64)
        .into_par_iter()
        .map(|i| {
            let (sq, abs) = spec.difference_sums(i);
            if abs == T::zero() {
                return 1;
            }
            let mut rng = spec.rs.substream(2 * i + 1).rng();
            let z: T = abs * noise.sample(&mut rng);
            decide(sq - T::lit(2.0) * z)
        })
        .sum();
    Ok(McEstimate::from_half_errors(half_errors, spec.pairs))
}

/// Ensemble nearest-neighbor error as the average of the exact pairwise
/// error over random pairs; the standard error is the spread across pairs.
/// Uses the same pairs as [`nn_error_mc_aggregated`].
pub fn nn_error_conditional<T: Real>(spec: &EnsembleSpec<T>, lambda: T) -> Result<McEstimate<T>> {
    spec.validate()?;
    ensure_positive("lambda", lambda)?;
    let (sum, sum_sq) = (0..spec.pairs as u64)
        .into_par_iter()
        .map(|i| {
            let (sq, abs) = spec.difference_sums(i);
            if abs == T::zero() {
                T::lit(0.5)
            } else {
                error_from_ratio(sq / (T::lit(2.0) * lambda * abs))
            }
        })
        .collect::<Vec<T>>()
        .into_iter()
        .fold((T::zero(), T::zero()), |(s, s2), p| (s + p, s2 + p * p));
    let n = T::count(spec.pairs);
    let mean = sum / n;
    let var = if spec.pairs > 1 {
        ((sum_sq - n * mean * mean) / (n - T::one())).max(T::zero())
    } else {
        T::zero()
    };
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials: spec.pairs,
    })
}

/// Cauchy-ML pairwise error over random codeword pairs.
pub fn ml_two_codeword_mc<T: Real>(spec: &EnsembleSpec<T>, lambda: T) -> Result<McEstimate<T>> {
    ensemble_mc(spec, &CauchyParam::new(lambda)?, Decoder::CauchyMl { lambda })
}

/// Error rate of `decoder` for a fixed pair, resampling only the noise.
pub fn fixed_pair_mc<T: Real>(
    pair: &CodewordPair<T>,
    lambda: T,
    decoder: Decoder<T>,
    trials: usize,
    rs: &RandomStream,
) -> Result<McEstimate<T>> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be >= 1"));
    }
    let noise = CauchyParam::new(lambda)?;
    let diffs: Vec<T> = pair.diffs().collect();
    let half_errors: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rs.substream(t).rng();
            decide(diffs.iter().map(|&d| decoder.margin(d, noise.sample(&mut rng))).sum::<T>())
        })
        .sum();
    Ok(McEstimate::from_half_errors(half_errors, trials))
}
