//! Least-squares helpers.

/// Result of an ordinary least-squares line fit y ≈ intercept + slope·x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    LineFit { slope, intercept, rms }
}

/// Slope of log y against log x (entries with y ≤ 0 are skipped).
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        x.iter().zip(y).filter(|(_, &b)| b > 0.0 && b.is_finite()).map(|(a, b)| (a.ln(), b.ln())).unzip();
    if lx.len() < 2 {
        return None;
    }
    Some(linear_fit(&lx, &ly).slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0];
        let f = linear_fit(&x, &[3.0, 5.0, 7.0]);
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-14 && f.rms < 1e-14);
        let p = log_log_slope(&[1.0, 10.0, 100.0], &[1.0, 0.1, 0.01]).unwrap();
        assert!((p + 1.0).abs() < 1e-14);
    }
}
