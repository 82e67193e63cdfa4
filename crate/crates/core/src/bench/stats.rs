//! Pearson correlation and ordinary least squares.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{HqwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub r: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Two-sided t-test p-value for `r = 0`; only with five or more points.
    pub p_value: Option<f64>,
    pub n: usize,
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    Some(if s.len().is_multiple_of(2) {
        (s[m - 1] + s[m]) / 2.0
    } else {
        s[m]
    })
}

/// Sample Pearson `r` and the least-squares line `y = slope·x + intercept`.
pub fn pearson_and_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(HqwError::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let n = xs.len();
    if n < 2 {
        return Err(HqwError::Parameter(format!(
            "need at least 2 points, got {n}"
        )));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let scale = |m: f64| 1e-24 * (1.0 + m * m) * n as f64;
    if sxx <= scale(mx) {
        return Err(HqwError::Degenerate("zero variance in x".into()));
    }
    if syy <= scale(my) {
        return Err(HqwError::Degenerate("zero variance in y".into()));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let p_value = if n >= 5 {
        let dof = (n - 2) as f64;
        if 1.0 - r * r <= 0.0 {
            Some(0.0)
        } else {
            let t = r * (dof / (1.0 - r * r)).sqrt();
            let dist =
                StudentsT::new(0.0, 1.0, dof).map_err(|e| HqwError::Degenerate(e.to_string()))?;
            Some(2.0 * (1.0 - dist.cdf(t.abs())))
        }
    } else {
        None
    };
    Ok(LinearFit {
        r,
        slope,
        intercept,
        p_value,
        n,
    })
}
