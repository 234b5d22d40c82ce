//! One-dimensional maximization.

use crate::error::Result;
use crate::Real;

/// `(φ - 1)`, the golden-section interior fraction.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum<T> {
    pub x: T,
    pub value: T,
    pub evaluations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `xtol`.
pub fn golden_section_max<T, F>(mut f: F, a: T, b: T, xtol: T, max_iter: usize) -> Result<Maximum<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let r = T::lit(INV_PHI);
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evaluations = 2;
    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
    }
    let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(Maximum { x, value, evaluations })
}

/// True when `values` rise (weakly) to a single peak and then fall (weakly).
pub fn is_unimodal<T: Real>(values: &[T]) -> bool {
    let Some(peak) = argmax(values) else {
        return true;
    };
    values[..=peak].windows(2).all(|w| w[0] <= w[1]) && values[peak..].windows(2).all(|w| w[0] >= w[1])
}

/// Index of the first maximum.
pub fn argmax<T: Real>(values: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(j) if values[j] >= v => {}
            _ => best = Some(i),
        }
    }
    best
}
