//! Closed-form capacity bounds for the scalar AWCN channel `Y = X + Z`.
//!
//! Every quantity depends on the channel only through `γ = P/λ²`. Rates are
//! in nats per channel use.

use crate::cauchy::normal_pdf;
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::quadrature::integrate_panels;
use crate::scalar::EULER_GAMMA;
use crate::Real;

/// Default absolute accuracy of the genie bound quadrature.
pub const DEFAULT_GENIE_TOL: f64 = 1e-9;

const GENIE_MAX_PANELS: usize = 4000;

/// Scalar channel: Cauchy scale `λ` and average input power `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    lambda: T,
    power: T,
}

impl<T: Real> ChannelParams<T> {
    pub fn new(lambda: T, power: T) -> Result<Self> {
        Ok(Self {
            lambda: ensure_positive("lambda", lambda)?,
            power: ensure_nonnegative("power", power)?,
        })
    }

    /// Unit-scale channel with `P = γ`.
    pub fn from_gamma(gamma: T) -> Result<Self> {
        Self::new(T::one(), gamma)
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn power(&self) -> T {
        self.power
    }

    /// `γ = P/λ²`.
    pub fn gamma(&self) -> T {
        self.power / (self.lambda * self.lambda)
    }
}

/// One row of the bound comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport<T> {
    pub gamma: T,
    pub lb_epi: T,
    pub ub_genie: T,
    pub ub_cpuc: T,
    pub mi_antipodal: T,
}

impl<T: Real> BoundsReport<T> {
    /// The tighter of the two upper bounds.
    pub fn ub_min(&self) -> T {
        self.ub_genie.min(self.ub_cpuc)
    }

    pub fn gap(&self) -> T {
        self.ub_min() - self.lb_epi
    }
}

/// Gaussian-input lower bound `½ log(1 + eγ/(8π))`.
pub fn lb_epi<T: Real>(cp: &ChannelParams<T>) -> T {
    lb_epi_gamma(cp.gamma())
}

pub(crate) fn lb_epi_gamma<T: Real>(gamma: T) -> T {
    if gamma == T::zero() {
        return T::zero();
    }
    let e = T::one().exp();
    (e * gamma / (T::lit(8.0) * T::PI())).ln_1p() / T::lit(2.0)
}

/// Genie-aided upper bound `½ E[log(1 + γV²)]`, `V ~ N(0, 1)`, to absolute
/// accuracy `tol`.
pub fn ub_genie<T: Real>(cp: &ChannelParams<T>, tol: T) -> Result<T> {
    ensure_positive("tol", tol)?;
    Ok(expected_log1p_scaled_square(cp.gamma(), T::lit(2.0) * tol)? / T::lit(2.0))
}

/// `E[log(1 + c·V²)]` for standard normal `V`, to absolute accuracy `tol`.
///
/// The integrand `log(1 + c v²)·2φ(v)` is integrated over `[0, v_max]`; the
/// neglected tail is bounded by `2φ(v)/v · (log(1 + c v²) + 2)` at `v_max`
/// and kept below `tol/10`.
pub(crate) fn expected_log1p_scaled_square<T: Real>(c: T, tol: T) -> Result<T> {
    ensure_nonnegative("gamma", c)?;
    if c == T::zero() {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    let tail_budget = tol / T::lit(10.0);
    let tail = |v: T| two * normal_pdf(v) / v * ((c * v * v).ln_1p() + two);
    let mut v_max = T::lit(4.0);
    while tail(v_max) > tail_budget {
        v_max = v_max + T::lit(0.5);
        if v_max > T::lit(60.0) {
            return Err(Error::invalid("tol", "tail truncation cannot reach the requested accuracy"));
        }
    }
    // The integrand bends sharply around v ~ 1/sqrt(c); put a break there.
    let knee = c.sqrt().recip();
    let mut breaks = vec![T::zero()];
    for b in [knee / T::lit(16.0), knee, T::one()] {
        if b > *breaks.last().unwrap() && b < v_max {
            breaks.push(b);
        }
    }
    breaks.push(v_max);
    let body = integrate_panels(
        |v: T| (c * v * v).ln_1p() * two * normal_pdf(v),
        &breaks,
        tol * T::lit(0.9),
        GENIE_MAX_PANELS,
    )?;
    Ok(body.value)
}

/// Capacity-per-unit-cost upper bound `γ/4`.
pub fn ub_cpuc<T: Real>(cp: &ChannelParams<T>) -> T {
    cp.gamma() / T::lit(4.0)
}

/// Mutual information of equiprobable `±√P` input,
/// `log(2√(λ²+P) / (λ + √(λ²+P)))`, evaluated as `log1p(γ / (1 + √(1+γ))²)`.
pub fn mi_antipodal<T: Real>(cp: &ChannelParams<T>) -> T {
    mi_antipodal_gamma(cp.gamma())
}

pub(crate) fn mi_antipodal_gamma<T: Real>(gamma: T) -> T {
    let s = T::one() + (T::one() + gamma).sqrt();
    (gamma / (s * s)).ln_1p()
}

/// High-power offset of [`lb_epi`]: `½ log(e/(8π))`.
pub fn lb_epi_asymptotic_offset<T: Real>() -> T {
    (T::one().exp() / (T::lit(8.0) * T::PI())).ln() / T::lit(2.0)
}

/// High-power offset of [`ub_genie`]: `½ E[log V²] = -(γ_E + log 2)/2`.
pub fn ub_genie_asymptotic_offset<T: Real>() -> T {
    -(T::lit(EULER_GAMMA) + T::LN_2()) / T::lit(2.0)
}

/// All bounds on a sorted, nonempty `γ` grid.
pub fn bounds_sweep<T: Real>(gammas: &[T], tol: T) -> Result<Vec<BoundsReport<T>>> {
    if gammas.is_empty() {
        return Err(Error::Empty("bounds_sweep needs at least one gamma"));
    }
    if gammas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("gammas", "grid must be sorted ascending"));
    }
    gammas
        .iter()
        .map(|&gamma| {
            let cp = ChannelParams::from_gamma(gamma)?;
            Ok(BoundsReport {
                gamma,
                lb_epi: lb_epi(&cp),
                ub_genie: ub_genie(&cp, tol)?,
                ub_cpuc: ub_cpuc(&cp),
                mi_antipodal: mi_antipodal(&cp),
            })
        })
        .collect()
}

/// The `γ` above which the genie bound is tighter than the per-unit-cost
/// bound. Below it `γ/4` is the smaller upper bound.
pub fn genie_cpuc_crossover<T: Real>(tol: T) -> Result<T> {
    let diff = |g: T| -> Result<T> {
        let cp = ChannelParams::from_gamma(g)?;
        Ok(ub_genie(&cp, tol)? - ub_cpuc(&cp))
    };
    let (mut lo, mut hi) = (T::lit(1e-3), T::lit(1e3));
    if diff(lo)? <= T::zero() || diff(hi)? >= T::zero() {
        return Err(Error::invalid("gamma", "no sign change of ub_genie - ub_cpuc on [1e-3, 1e3]"));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if diff(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - T::one() < T::lit(1e-12) {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}
