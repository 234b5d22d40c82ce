//! Power-constrained Blahut–Arimoto on a discretized AWCN channel.
//!
//! For a fixed price `s ≥ 0` on the input cost the iteration maximizes
//! `I(p) - s·E_p[cost]` by the multiplicative update
//! `p'ᵢ ∝ pᵢ · exp(D(Wᵢ ‖ q) - s·costᵢ)`. An outer bisection on `s` then hits
//! the requested average power.

use crate::bounds::ChannelParams;
use crate::cauchy::CauchyParam;
use crate::error::{ensure_positive, Error, Result};
use crate::scalar::log_sum_exp;
use crate::Real;

pub const DEFAULT_INPUTS: usize = 201;
pub const DEFAULT_OUTPUTS: usize = 2001;
pub const DEFAULT_INPUT_SPAN: f64 = 4.0;
/// Default bound on the certified suboptimality `max aᵢ - log Σ pᵢ e^{aᵢ}`.
pub const DEFAULT_TOL: f64 = 1e-5;
/// Looser certificate used while searching for the multiplier.
const SEARCH_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITER: usize = 50_000;

/// Relative band `|avg_cost - P| ≤ 0.5% · P` accepted by the power search.
pub const POWER_BAND: f64 = 0.005;

/// Finite-alphabet channel: inputs, output bins and a row-stochastic
/// transition matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedChannel<T> {
    inputs: Vec<T>,
    output_edges: Vec<T>,
    transition: Vec<T>,
    cost: Vec<T>,
}

impl<T: Real> DiscretizedChannel<T> {
    /// Builds a channel from explicit rows. `output_edges` has one more entry
    /// than each row. Input cost is `x²`.
    pub fn from_rows(inputs: Vec<T>, output_edges: Vec<T>, rows: &[Vec<T>]) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::Empty("channel needs at least one input"));
        }
        if rows.len() != inputs.len() {
            return Err(Error::LengthMismatch {
                left: inputs.len(),
                right: rows.len(),
            });
        }
        let b = output_edges.len().saturating_sub(1);
        if b == 0 {
            return Err(Error::Empty("channel needs at least one output bin"));
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::count(64 * b));
        let mut transition = Vec::with_capacity(inputs.len() * b);
        for row in rows {
            if row.len() != b {
                return Err(Error::LengthMismatch { left: b, right: row.len() });
            }
            if row.iter().any(|&w| w.is_nan() || w < T::zero()) {
                return Err(Error::invalid("transition", "probabilities must be >= 0"));
            }
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > tol {
                return Err(Error::invalid("transition", format!("row sums to {sum}, not 1")));
            }
            transition.extend_from_slice(row);
        }
        let cost = inputs.iter().map(|&x| x * x).collect();
        Ok(Self {
            inputs,
            output_edges,
            transition,
            cost,
        })
    }

    pub fn inputs(&self) -> &[T] {
        &self.inputs
    }

    pub fn output_edges(&self) -> &[T] {
        &self.output_edges
    }

    pub fn cost(&self) -> &[T] {
        &self.cost
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.output_edges.len() - 1
    }

    pub fn row(&self, i: usize) -> &[T] {
        let b = self.n_outputs();
        &self.transition[i * b..(i + 1) * b]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.transition.chunks_exact(self.n_outputs())
    }
}

/// Grid layout for [`discretize_awcn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub m_inputs: usize,
    pub b_outputs: usize,
    /// Inputs cover `±input_span·√P`.
    pub input_span: T,
    /// Interior output bins cover `±output_span` (amplitude units).
    pub output_span: T,
}

impl<T: Real> GridSpec<T> {
    /// 201 inputs on `±4√P`, 2001 interior bins on `±max(50λ, 20√P)`.
    pub fn default_for(cp: &ChannelParams<T>) -> Self {
        Self {
            m_inputs: DEFAULT_INPUTS,
            b_outputs: DEFAULT_OUTPUTS,
            input_span: T::lit(DEFAULT_INPUT_SPAN),
            output_span: (T::lit(50.0) * cp.lambda()).max(T::lit(20.0) * cp.power().sqrt()),
        }
    }
}

/// Uniform input grid, uniform interior output bins plus two unbounded edge
/// bins; every entry is an exact Cauchy CDF difference.
pub fn discretize_awcn<T: Real>(cp: &ChannelParams<T>, grid: &GridSpec<T>) -> Result<DiscretizedChannel<T>> {
    let GridSpec {
        m_inputs,
        b_outputs,
        input_span,
        output_span,
    } = *grid;
    if m_inputs < 2 {
        return Err(Error::invalid("m_inputs", "need at least 2 inputs"));
    }
    if b_outputs < 4 {
        return Err(Error::invalid("b_outputs", "need at least 4 interior bins"));
    }
    ensure_positive("input_span", input_span)?;
    ensure_positive("output_span", output_span)?;
    ensure_positive("power", cp.power())?;
    let noise = CauchyParam::new(cp.lambda())?;

    let x_max = input_span * cp.power().sqrt();
    let inputs: Vec<T> = (0..m_inputs)
        .map(|i| x_max * symmetric_fraction(i, m_inputs - 1))
        .collect();
    let mut edges = Vec::with_capacity(b_outputs + 3);
    edges.push(T::neg_infinity());
    edges.extend((0..=b_outputs).map(|j| output_span * symmetric_fraction(j, b_outputs)));
    edges.push(T::infinity());

    let bin_mass = |lo: T, hi: T| {
        if lo >= T::zero() {
            noise.sf(lo) - noise.sf(hi)
        } else {
            noise.cdf(hi) - noise.cdf(lo)
        }
    };
    let rows: Vec<Vec<T>> = inputs
        .iter()
        .map(|&x| edges.windows(2).map(|e| bin_mass(e[0] - x, e[1] - x)).collect())
        .collect();
    DiscretizedChannel::from_rows(inputs, edges, &rows)
}

/// `(2i - n)/n`, exactly antisymmetric about `i = n/2`.
fn symmetric_fraction<T: Real>(i: usize, n: usize) -> T {
    (T::count(2 * i) - T::count(n)) / T::count(n)
}

/// `I(p; W)` in nats.
pub fn mutual_information<T: Real>(ch: &DiscretizedChannel<T>, p: &[T]) -> T {
    let q = output_distribution(ch, p);
    ch.rows()
        .zip(p)
        .filter(|(_, &pi)| pi > T::zero())
        .map(|(row, &pi)| {
            let d: T = row
                .iter()
                .zip(&q)
                .filter(|(&w, _)| w > T::zero())
                .map(|(&w, &qj)| w * (w / qj).ln())
                .sum();
            pi * d
        })
        .sum()
}

fn output_distribution<T: Real>(ch: &DiscretizedChannel<T>, p: &[T]) -> Vec<T> {
    let mut q = vec![T::zero(); ch.n_outputs()];
    for (row, &pi) in ch.rows().zip(p) {
        if pi > T::zero() {
            for (qj, &w) in q.iter_mut().zip(row) {
                *qj = *qj + pi * w;
            }
        }
    }
    q
}

/// Bookkeeping of one iteration, evaluated at the distribution *before* the
/// update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaStep<T> {
    /// `I(p) - s·E_p[cost]`.
    pub objective: T,
    /// `log Σ pᵢ exp(aᵢ)`, a lower bound on the optimum.
    pub lower: T,
    /// `maxᵢ aᵢ`, an upper bound on the optimum.
    pub upper: T,
}

impl<T: Real> BaStep<T> {
    pub fn gap(&self) -> T {
        self.upper - self.lower
    }
}

/// Iteration state of the cost-weighted Blahut–Arimoto map.
///
/// With over-relaxation enabled the update uses `exp(μ·aᵢ)` with a growing
/// step `μ ≥ 1`; a step whose objective falls below its predecessor is
/// discarded in favour of the plain (`μ = 1`) update, so the reported
/// objective never decreases.
pub struct BlahutArimoto<'a, T> {
    ch: &'a DiscretizedChannel<T>,
    multiplier: T,
    p: Vec<T>,
    plain: Vec<T>,
    neg_row_entropy: Vec<T>,
    q: Vec<T>,
    log_q: Vec<T>,
    exponent: Vec<T>,
    scratch: Vec<T>,
    relax: Option<Relaxation<T>>,
}

struct Relaxation<T> {
    step: T,
    pending: bool,
    last_objective: T,
}

const MAX_RELAXATION: f64 = 64.0;

impl<'a, T: Real> BlahutArimoto<'a, T> {
    /// Starts from `initial` (renormalized) or the uniform distribution.
    pub fn new(ch: &'a DiscretizedChannel<T>, multiplier: T, initial: Option<&[T]>) -> Result<Self> {
        if !multiplier.is_finite() || multiplier < T::zero() {
            return Err(Error::invalid("multiplier", "must be finite and >= 0"));
        }
        let m = ch.n_inputs();
        let p: Vec<T> = match initial {
            Some(init) if init.len() != m => {
                return Err(Error::LengthMismatch {
                    left: m,
                    right: init.len(),
                })
            }
            Some(init) => {
                let total: T = init.iter().copied().sum();
                init.iter().map(|&x| x / total).collect()
            }
            None => vec![T::one() / T::count(m); m],
        };
        let neg_row_entropy = ch
            .rows()
            .map(|row| row.iter().filter(|&&w| w > T::zero()).map(|&w| w * w.ln()).sum())
            .collect();
        Ok(Self {
            ch,
            multiplier,
            plain: p.clone(),
            p,
            neg_row_entropy,
            q: vec![T::zero(); ch.n_outputs()],
            log_q: vec![T::zero(); ch.n_outputs()],
            exponent: vec![T::zero(); m],
            scratch: vec![T::zero(); m],
            relax: None,
        })
    }

    /// Enables the safeguarded over-relaxed update.
    pub fn over_relaxed(mut self) -> Self {
        self.relax = Some(Relaxation {
            step: T::one(),
            pending: false,
            last_objective: T::neg_infinity(),
        });
        self
    }

    pub fn input_dist(&self) -> &[T] {
        &self.p
    }

    pub fn into_input_dist(self) -> Vec<T> {
        self.p
    }

    /// Fills `exponent` for the current `p` and returns the objective.
    fn evaluate(&mut self) -> T {
        let floor = T::min_positive_value();
        // Rows this light change q below rounding; skipping them is most of
        // the saving once the optimum concentrates on a few inputs.
        let negligible = T::epsilon() * T::epsilon();
        self.q.iter_mut().for_each(|x| *x = T::zero());
        for (row, &pi) in self.ch.rows().zip(&self.p) {
            if pi > negligible {
                axpy(pi, row, &mut self.q);
            }
        }
        for (lq, &qj) in self.log_q.iter_mut().zip(&self.q) {
            *lq = qj.max(floor).ln();
        }
        for (i, row) in self.ch.rows().enumerate() {
            self.exponent[i] = self.neg_row_entropy[i] - dot(row, &self.log_q) - self.multiplier * self.ch.cost[i];
        }
        self.p
            .iter()
            .zip(&self.exponent)
            .filter(|(&pi, _)| pi > T::zero())
            .map(|(&pi, &a)| pi * a)
            .sum()
    }

    pub fn step(&mut self) -> BaStep<T> {
        let mut objective = self.evaluate();
        if let Some(r) = &mut self.relax {
            if r.pending && objective < r.last_objective {
                std::mem::swap(&mut self.p, &mut self.plain);
                r.step = T::one();
                objective = self.evaluate();
            }
        }
        for ((s, &pi), &a) in self.scratch.iter_mut().zip(&self.p).zip(&self.exponent) {
            *s = pi.ln() + a;
        }
        let lower = log_sum_exp(&self.scratch);
        let upper = self.exponent.iter().copied().fold(T::neg_infinity(), T::max);

        let step = self.relax.as_ref().map_or(T::one(), |r| r.step);
        if step > T::one() {
            tilt(&self.p, &self.exponent, lower, T::one(), &mut self.plain);
            let (p, exponent, scratch) = (&self.p, &self.exponent, &mut self.scratch);
            tilt(p, exponent, lower, step, scratch);
            std::mem::swap(&mut self.p, &mut self.scratch);
        } else {
            let (p, exponent, scratch) = (&self.p, &self.exponent, &mut self.scratch);
            tilt(p, exponent, lower, T::one(), scratch);
            std::mem::swap(&mut self.p, &mut self.scratch);
            self.plain.copy_from_slice(&self.p);
        }
        if let Some(r) = &mut self.relax {
            r.pending = step > T::one();
            r.last_objective = objective;
            r.step = (r.step * T::lit(1.5)).min(T::lit(MAX_RELAXATION));
        }
        BaStep { objective, lower, upper }
    }
}

/// `out ∝ p · exp(step·(a - shift))`, normalized.
fn tilt<T: Real>(p: &[T], a: &[T], shift: T, step: T, out: &mut [T]) {
    let mut terms: Vec<T> = p.iter().zip(a).map(|(&pi, &ai)| pi.ln() + step * (ai - shift)).collect();
    let norm = log_sum_exp(&terms);
    for (o, t) in out.iter_mut().zip(terms.drain(..)) {
        *o = (t - norm).exp();
    }
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// Dot product with eight independent accumulators.
fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    let mut acc = [T::zero(); 8];
    let xc = x.chunks_exact(8);
    let yc = y.chunks_exact(8);
    let tail: T = xc.remainder().iter().zip(yc.remainder()).map(|(&a, &b)| a * b).sum();
    for (a, b) in xc.zip(yc) {
        for k in 0..8 {
            acc[k] = acc[k] + a[k] * b[k];
        }
    }
    acc.iter().copied().sum::<T>() + tail
}

/// Result of a Blahut–Arimoto solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BaSolution<T> {
    /// Mutual information of `input_dist` through the channel, nats.
    pub rate: T,
    pub avg_cost: T,
    pub input_dist: Vec<T>,
    /// Lagrange price `s` on the input cost; 0 when the power constraint is
    /// inactive.
    pub multiplier: T,
    pub iterations: usize,
    pub converged: bool,
    /// Final `upper - lower` bound gap of the fixed-`s` objective.
    pub gap: T,
}

pub fn ba_fixed_multiplier<T: Real>(
    ch: &DiscretizedChannel<T>,
    s: T,
    tol: T,
    max_iter: usize,
) -> Result<BaSolution<T>> {
    ba_fixed_multiplier_from(ch, s, tol, max_iter, None)
}

/// [`ba_fixed_multiplier`] warm-started from `initial`.
pub fn ba_fixed_multiplier_from<T: Real>(
    ch: &DiscretizedChannel<T>,
    s: T,
    tol: T,
    max_iter: usize,
    initial: Option<&[T]>,
) -> Result<BaSolution<T>> {
    ensure_positive("tol", tol)?;
    let mut ba = BlahutArimoto::new(ch, s, initial)?.over_relaxed();
    let mut iterations = 0;
    let mut gap = T::infinity();
    let mut converged = false;
    while iterations < max_iter {
        let step = ba.step();
        iterations += 1;
        gap = step.gap();
        if gap < tol {
            converged = true;
            break;
        }
    }
    let input_dist = ba.into_input_dist();
    Ok(BaSolution {
        rate: mutual_information(ch, &input_dist),
        avg_cost: input_dist.iter().zip(ch.cost()).map(|(&p, &c)| p * c).sum(),
        input_dist,
        multiplier: s,
        iterations,
        converged,
        gap,
    })
}

/// Capacity estimate under `E[X²] ≤ power`: bisection on the multiplier
/// until `(1 - 0.5%)·power ≤ avg_cost ≤ power`. If the unpriced solution
/// already meets the budget it is returned with multiplier 0.
pub fn ba_capacity_at_power<T: Real>(ch: &DiscretizedChannel<T>, power: T, tol: T) -> Result<BaSolution<T>> {
    ba_capacity_at_power_with(ch, power, tol, DEFAULT_MAX_ITER)
}

pub fn ba_capacity_at_power_with<T: Real>(
    ch: &DiscretizedChannel<T>,
    power: T,
    tol: T,
    max_iter: usize,
) -> Result<BaSolution<T>> {
    ensure_positive("power", power)?;
    ensure_positive("tol", tol)?;
    let search_tol = tol.max(T::lit(SEARCH_TOL));
    let band_lo = power * (T::one() - T::lit(POWER_BAND));
    let in_band = |c: T| c >= band_lo && c <= power;
    // Warm starts are blended with uniform so no input is stuck at zero.
    let blend = |p: &[T]| -> Vec<T> {
        let eps = T::lit(1e-2);
        let u = T::one() / T::count(p.len());
        p.iter().map(|&x| (T::one() - eps) * x + eps * u).collect()
    };
    let polish = |s: T, warm: &[T]| ba_fixed_multiplier_from(ch, s, tol, max_iter, Some(&blend(warm)));

    let free = ba_fixed_multiplier(ch, T::zero(), search_tol, max_iter)?;
    if free.avg_cost <= power {
        let sol = polish(T::zero(), &free.input_dist)?;
        if sol.avg_cost <= power {
            return Ok(sol);
        }
    }

    let mut lo = T::zero();
    let mut hi = power.recip();
    let mut warm = free.input_dist;
    let mut feasible: BaSolution<T>;
    loop {
        feasible = ba_fixed_multiplier_from(ch, hi, search_tol, max_iter, Some(&blend(&warm)))?;
        warm.clone_from(&feasible.input_dist);
        if feasible.avg_cost <= power {
            break;
        }
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > T::lit(1e12) / power {
            return Err(Error::invalid("power", "no multiplier meets the power budget"));
        }
    }
    for _ in 0..200 {
        if in_band(feasible.avg_cost) {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let sol = ba_fixed_multiplier_from(ch, mid, search_tol, max_iter, Some(&blend(&warm)))?;
        warm.clone_from(&sol.input_dist);
        if sol.avg_cost > power {
            lo = mid;
        } else {
            hi = mid;
            feasible = sol;
        }
    }
    if tol >= search_tol {
        return Ok(feasible);
    }
    let sol = polish(feasible.multiplier, &feasible.input_dist)?;
    // Polishing moves the cost slightly; keep whichever iterate is feasible.
    Ok(if sol.avg_cost <= power { sol } else { feasible })
}
