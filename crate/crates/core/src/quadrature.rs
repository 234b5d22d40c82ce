//! Adaptive Gauss–Kronrod integration and Gauss–Hermite rules.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::Real;

// 15-point Kronrod abscissae (non-negative half) and weights; the 7-point
// Gauss rule reuses the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: T,
    pub panels: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half_len,
        error: ((kronrod - gauss) * half_len).abs(),
    }
}

/// Integrates `f` over `[a, b]` by global adaptive bisection of 15-point
/// Gauss–Kronrod panels until the summed error estimate falls below `tol`.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: T, max_panels: usize) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_panels(f, &[a, b], tol, max_panels)
}

/// Like [`integrate`], starting from the panels delimited by `breaks`.
pub fn integrate_panels<T, F>(f: F, breaks: &[T], tol: T, max_panels: usize) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if breaks.len() < 2 {
        return Err(Error::Empty("integration needs at least one panel"));
    }
    let mut panels: Vec<Panel<T>> = breaks.windows(2).map(|w| gk15(&f, w[0], w[1])).collect();
    loop {
        let value: T = panels.iter().map(|p| p.value).sum();
        let error: T = panels.iter().map(|p| p.error).sum();
        if error <= tol {
            return Ok(Integral {
                value,
                abs_error: error,
                panels: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels[worst];
        let mid = T::lit(0.5) * (p.a + p.b);
        if panels.len() >= max_panels || !(mid > p.a && mid < p.b) || !error.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                achieved: error.as_f64(),
                requested: tol.as_f64(),
                panels: panels.len(),
            });
        }
        panels[worst] = gk15(&f, p.a, mid);
        panels.push(gk15(&f, mid, p.b));
    }
}

/// Gauss–Hermite rule normalized for a standard normal weight:
/// `E[g(N)] ≈ Σ weights[k] · g(nodes[k])`, with `Σ weights = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub log_weights: Vec<T>,
}

impl<T: Real> GaussHermite<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("Gauss-Hermite rule needs at least one node"));
        }
        let (x, w) = hermite_physicists(n);
        let sqrt2 = std::f64::consts::SQRT_2;
        let log_sqrt_pi = 0.5 * std::f64::consts::PI.ln();
        Ok(Self {
            nodes: x.iter().map(|&t| T::lit(sqrt2 * t)).collect(),
            weights: w.iter().map(|&(_, lw)| T::lit((lw - log_sqrt_pi).exp())).collect(),
            log_weights: w.iter().map(|&(_, lw)| T::lit(lw - log_sqrt_pi)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `E[g(N)]` for `N ~ N(0, 1)`.
    pub fn expect<F: Fn(T) -> T>(&self, g: F) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// Nodes and (weight, log weight) for `∫ e^{-x²} g(x) dx`, ascending, by
/// Newton iteration on the orthonormal Hermite recurrence.
fn hermite_physicists(n: usize) -> (Vec<f64>, Vec<(f64, f64)>) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^(-1/4)
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    let mut z = 0.0_f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        let weight = 2.0 / (pp * pp);
        w[i] = (weight, weight.ln());
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[m - 1] = 0.0;
    }
    // Newton ran from the largest root down; return ascending order.
    x.reverse();
    w.reverse();
    (x, w)
}
