//! Grid and list arguments.

use crate::CliError;

/// `lo:hi:points-per-decade`, both ends included.
pub fn log_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, ppd] = parts[..] else {
        return Err(CliError::Validation(format!("grid `{spec}` must look like lo:hi:points-per-decade")));
    };
    let lo = number(lo)?;
    let hi = number(hi)?;
    let ppd: usize = ppd
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("points per decade `{ppd}` is not a positive integer")))?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || ppd == 0 {
        return Err(CliError::Validation(format!("grid `{spec}` needs 0 < lo <= hi and points per decade >= 1")));
    }
    let n = ((hi / lo).log10() * ppd as f64).round() as usize;
    Ok((0..=n).map(|i| lo * 10f64.powf(i as f64 / ppd as f64)).collect())
}

/// A decimal number or a fraction `a/b`.
pub fn number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Validation(format!("`{s}` is not a number"));
    let x = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().map_err(|_| bad())? / b.trim().parse::<f64>().map_err(|_| bad())?,
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

/// Comma-separated numbers; an empty list is an error.
pub fn number_list(s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::Validation("empty list".into()));
    }
    s.split(',').map(number).collect()
}

pub fn count_list(s: &str) -> Result<Vec<usize>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::Validation("empty list".into()));
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|x| x.fract() == 0.0 && *x >= 1.0 && *x <= 1e15)
                .map(|x| x as usize)
                .ok_or_else(|| CliError::Validation(format!("`{t}` is not a positive integer")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_size() {
        let g = log_grid("1e-2:1e3:25").unwrap();
        assert_eq!(g.len(), 126);
        assert_eq!(g[0], 1e-2);
        assert!((g[125] - 1e3).abs() < 1e-9);
        assert_eq!(log_grid("5:5:3").unwrap(), vec![5.0]);
    }

    #[test]
    fn grid_rejections() {
        for bad in ["", "1:2", "0:1:3", "2:1:3", "1:10:0", "a:1:2", "1:10:x"] {
            assert!(log_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(number_list("1/9, 1,9").unwrap(), vec![1.0 / 9.0, 1.0, 9.0]);
        assert!(number_list("").is_err());
        assert!(number_list("1,,2").is_err());
        assert!(number("1/0").is_err());
        assert_eq!(count_list("10,1e6").unwrap(), vec![10, 1_000_000]);
        assert!(count_list("0").is_err());
        assert!(count_list("1.5").is_err());
    }
}
