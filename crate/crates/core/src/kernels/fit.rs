use serde::{Deserialize, Serialize};

use crate::error::{HillError, Result};

/// Least-squares line through `(ln m, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_log_slope(points: &[(f64, f64)]) -> Result<LogFit> {
    if points.len() < 3 {
        return Err(HillError::Domain(format!("need >= 3 points for a rate fit, got {}", points.len())));
    }
    if let Some(&(m, v)) = points.iter().find(|&&(m, v)| m.is_nan() || v.is_nan() || m <= 0.0 || v <= 0.0) {
        return Err(HillError::Domain(format!("log fit needs positive data, got ({m}, {v})")));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(HillError::Domain("log fit needs at least two distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok(LogFit { slope, intercept: my - slope * mx })
}

/// Ratio of the largest to the smallest value (boundedness diagnostic).
pub fn max_min_ratio(values: &[f64]) -> Option<f64> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (min > 0.0 && max.is_finite()).then(|| max / min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let inv: Vec<_> = (2..20).map(|m| (m as f64, 1.0 / m as f64)).collect();
        assert!((fit_log_slope(&inv).unwrap().slope + 1.0).abs() < 1e-12);
        let inv2: Vec<_> = (2..20).map(|m| (m as f64, (m as f64).powi(-2))).collect();
        let fit = fit_log_slope(&inv2).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
    }

    #[test]
    fn noisy_power_law() {
        // deterministic ±1% wobble
        let pts: Vec<_> = (3..40)
            .map(|m| {
                let x = m as f64;
                let noise = 1.0 + 0.01 * ((m * 7919) % 13) as f64 / 6.0 - 0.01;
                (x, 3.0 * x.powf(-1.5) * noise)
            })
            .collect();
        let s = fit_log_slope(&pts).unwrap().slope;
        assert!((-1.6..=-1.4).contains(&s), "{s}");
    }

    #[test]
    fn domain_errors() {
        assert!(fit_log_slope(&[(1.0, 1.0), (2.0, 0.5)]).is_err());
        assert!(fit_log_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert_eq!(max_min_ratio(&[2.0, 4.0, 1.0]), Some(4.0));
        assert_eq!(max_min_ratio(&[0.0, 1.0]), None);
    }
}
