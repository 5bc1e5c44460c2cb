//! Ordinary least squares with a Student-t error bar on the slope.

use statrs::distribution::{ContinuousCDF, StudentsT};

/// Straight-line fit `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; 0 for an exact or two-point fit.
    pub slope_se: f64,
    pub points: usize,
}

impl LineFit {
    /// Half-width of the one-sided 84% Student-t interval on the slope,
    /// `t_{0.84, N−2} · SE`. Zero when fewer than three points were fitted.
    pub fn slope_stderr(&self) -> f64 {
        if self.points < 3 || self.slope_se == 0.0 {
            return 0.0;
        }
        let t = StudentsT::new(0.0, 1.0, (self.points - 2) as f64)
            .expect("positive dof")
            .inverse_cdf(0.84);
        t * self.slope_se
    }
}

/// Least-squares line through `(x, y)`. `None` with fewer than two points or
/// constant `x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if n > 2 {
        let sse: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - slope * x - intercept).powi(2))
            .sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        intercept,
        slope_se,
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!(f.slope_stderr() < 1e-12);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0]).is_none());
        assert!(fit_line(&[1.0], &[0.0]).is_none());
    }

    #[test]
    fn noisy_line_error_bar() {
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 0.0, 1.0, 4.0]).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && (f.intercept - 0.0).abs() < 1e-12);
        // Residuals 1, −1, −1, 1: SSE = 4, Sxx = 5.
        assert!((f.slope_se - (4.0f64 / 2.0 / 5.0).sqrt()).abs() < 1e-12);
        // t quantile at 0.84 with 2 dof, from an independent implementation.
        let ratio = f.slope_stderr() / f.slope_se;
        assert!((ratio - 1.311_578_474_677_8).abs() < 1e-8, "{ratio}");
    }
}
