//! Centered Cauchy law and standard normal primitives.
//!
//! The Cauchy density with scale `λ` is `(λ/π) / (λ² + z²)`. Its differential
//! entropy is `log(4πλ)` nats, and a draw can be generated as the ratio `U/V`
//! of independent normals `U ~ N(0, λ²)`, `V ~ N(0, 1)`.

use rand::Rng;
use rand_distr::Distribution;

use crate::error::{ensure_positive, Error, Result};
use crate::rng::{standard_normal, RandomStream};
use crate::Real;

/// Scale parameter `λ > 0` of a centered Cauchy law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyParam<T> {
    lambda: T,
}

impl<T: Real> CauchyParam<T> {
    pub fn new(lambda: T) -> Result<Self> {
        ensure_positive("lambda", lambda).map(|lambda| Self { lambda })
    }

    #[inline]
    pub fn lambda(&self) -> T {
        self.lambda
    }

    #[inline]
    pub fn pdf(&self, z: T) -> T {
        cauchy_pdf(z, self)
    }

    #[inline]
    pub fn cdf(&self, z: T) -> T {
        cauchy_cdf(z, self)
    }

    #[inline]
    pub fn sf(&self, z: T) -> T {
        cauchy_cdf(-z, self)
    }

    pub fn entropy(&self) -> T {
        cauchy_entropy(self)
    }
}

impl<T: Real> Distribution<T> for CauchyParam<T> {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        loop {
            let u: T = standard_normal(rng);
            let v: T = standard_normal(rng);
            if v != T::zero() {
                return self.lambda * u / v;
            }
        }
    }
}

#[inline]
pub fn cauchy_pdf<T: Real>(z: T, p: &CauchyParam<T>) -> T {
    let l = p.lambda;
    l / (T::PI() * (l * l + z * z))
}

/// `F(z) = 1/2 + arctan(z/λ)/π`, evaluated as `atan2(λ, -z)/π` so the lower
/// tail keeps full relative precision.
#[inline]
pub fn cauchy_cdf<T: Real>(z: T, p: &CauchyParam<T>) -> T {
    p.lambda.atan2(-z) / T::PI()
}

pub fn cauchy_entropy<T: Real>(p: &CauchyParam<T>) -> T {
    (T::lit(4.0) * T::PI() * p.lambda).ln()
}

/// `n` i.i.d. draws from the stream `rs`.
pub fn cauchy_sample<T: Real>(n: usize, p: &CauchyParam<T>, rs: &RandomStream) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::Empty("cauchy_sample needs n >= 1"));
    }
    let mut rng = rs.rng();
    Ok(p.sample_iter(&mut rng).take(n).collect())
}

/// Scale of `Σ aᵢ Zᵢ` for independent centered Cauchy `Zᵢ` with scales `λᵢ`.
pub fn combine_scales<T: Real>(coeffs: &[T], scales: &[T]) -> Result<T> {
    if coeffs.len() != scales.len() {
        return Err(Error::LengthMismatch {
            left: coeffs.len(),
            right: scales.len(),
        });
    }
    if coeffs.is_empty() {
        return Err(Error::Empty("combine_scales needs at least one term"));
    }
    for &s in scales {
        ensure_positive("scales", s)?;
    }
    Ok(coeffs.iter().zip(scales).map(|(&a, &l)| a.abs() * l).sum())
}

#[inline]
pub fn normal_pdf<T: Real>(x: T) -> T {
    (-(x * x) / T::lit(2.0)).exp() / (T::lit(2.0) * T::PI()).sqrt()
}

pub fn normal_cdf<T: Real>(x: T) -> T {
    T::lit(0.5 * libm::erfc(-x.as_f64() / std::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use approx::assert_relative_eq;

    fn unit() -> CauchyParam<f64> {
        CauchyParam::new(1.0).unwrap()
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(CauchyParam::new(0.0_f64).is_err());
        assert!(CauchyParam::new(-1.0_f64).is_err());
        assert!(CauchyParam::new(f64::NAN).is_err());
    }

    #[test]
    fn pdf_points() {
        assert_relative_eq!(cauchy_pdf(0.0, &unit()), 1.0 / std::f64::consts::PI, epsilon = 1e-15);
        for &l in &[0.3, 1.0, 7.5] {
            let p = CauchyParam::new(l).unwrap();
            assert_relative_eq!(p.pdf(l), 1.0 / (2.0 * std::f64::consts::PI * l), max_relative = 1e-14);
            assert_eq!(p.pdf(2.5), p.pdf(-2.5));
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        for &l in &[0.5_f64, 1.0, 3.0] {
            let p = CauchyParam::new(l).unwrap();
            let r = integrate(|z| p.pdf(z), -1e6 * l, 1e6 * l, 1e-10, 4000).unwrap();
            assert!((r.value - 1.0).abs() < 1e-6, "λ={l}: {}", r.value);
        }
    }

    #[test]
    fn cdf_points() {
        for &l in &[0.2, 1.0, 4.0] {
            let p = CauchyParam::new(l).unwrap();
            assert_eq!(p.cdf(0.0), 0.5);
            assert_relative_eq!(p.cdf(l), 0.75, epsilon = 1e-15);
            assert_relative_eq!(p.cdf(-l), 0.25, epsilon = 1e-15);
            assert_eq!(p.cdf(f64::INFINITY), 1.0);
            assert_eq!(p.cdf(f64::NEG_INFINITY), 0.0);
        }
    }

    #[test]
    fn pdf_is_derivative_of_cdf() {
        for &l in &[0.5, 1.0, 2.0] {
            let p = CauchyParam::new(l).unwrap();
            let h = 1e-5 * l;
            let worst = (0..10_000)
                .map(|i| -20.0 * l + 40.0 * l * i as f64 / 9_999.0)
                .map(|z| ((p.cdf(z + h) - p.cdf(z - h)) / (2.0 * h) - p.pdf(z)).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "λ={l}: {worst}");
        }
    }

    #[test]
    fn entropy_values() {
        assert_relative_eq!(cauchy_entropy(&unit()), 2.531_024_246_969_290_7, epsilon = 1e-12);
        let l = std::f64::consts::E / (4.0 * std::f64::consts::PI);
        assert_relative_eq!(CauchyParam::new(l).unwrap().entropy(), 1.0, epsilon = 1e-15);
        let two = CauchyParam::new(2.0).unwrap().entropy();
        assert_relative_eq!(two - unit().entropy(), 2.0f64.ln(), epsilon = 1e-15);
        for i in 1..50 {
            let l = 0.01 * 1.3f64.powi(i);
            let d = CauchyParam::new(l).unwrap().entropy() - unit().entropy();
            assert_relative_eq!(d, l.ln(), epsilon = 1e-13);
        }
    }

    #[test]
    fn sample_rejects_empty_and_is_deterministic() {
        let rs = RandomStream::new(9, 2);
        assert_eq!(cauchy_sample(0, &unit(), &rs), Err(Error::Empty("cauchy_sample needs n >= 1")));
        let a = cauchy_sample(1000, &unit(), &rs).unwrap();
        let b = cauchy_sample(1000, &unit(), &rs).unwrap();
        assert_eq!(a, b);
        let c = cauchy_sample(1000, &unit(), &RandomStream::new(9, 3)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn combine_scales_cases() {
        assert_eq!(combine_scales(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(combine_scales(&[0.5, 0.5], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(combine_scales(&[-3.0], &[2.0]).unwrap(), 6.0);
        assert!(matches!(combine_scales(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(combine_scales::<f64>(&[], &[]), Err(Error::Empty(_))));
        assert!(combine_scales(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn normal_primitives() {
        assert_relative_eq!(normal_pdf(0.0), 0.398_942_280_401_432_7, epsilon = 1e-15);
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_relative_eq!(normal_cdf(1.959_963_984_540_054), 0.975, epsilon = 1e-12);
        let r = integrate(normal_pdf, -10.0, 10.0, 1e-12, 200).unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn works_in_single_precision() {
        let p = CauchyParam::new(1.0_f32).unwrap();
        assert!((p.cdf(1.0) - 0.75).abs() < 1e-6);
        assert!((p.entropy() - 2.531_024).abs() < 1e-5);
        let s = cauchy_sample(10, &p, &RandomStream::default()).unwrap();
        assert!(s.iter().all(|x| x.is_finite()));
    }
}
