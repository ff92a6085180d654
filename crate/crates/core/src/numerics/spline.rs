//! Clamped cubic spline with first and second derivatives.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline through `(x, y)` with end slopes taken from the cubic through the four
    /// nearest samples at each end.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() || n < 4 {
            return Err(Error::Domain("spline needs at least four matching samples".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("spline abscissae must be strictly increasing".into()));
        }
        let d0 = end_slope(&x[..4], &y[..4]);
        let xr: Vec<f64> = x[n - 4..].iter().rev().copied().collect();
        let yr: Vec<f64> = y[n - 4..].iter().rev().copied().collect();
        let dn = end_slope(&xr, &yr);

        // tridiagonal system for the knot second derivatives
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        diag[0] = h[0] / 3.0;
        sup[0] = h[0] / 6.0;
        rhs[0] = (y[1] - y[0]) / h[0] - d0;
        for i in 1..n - 1 {
            sub[i] = h[i - 1] / 6.0;
            diag[i] = (h[i - 1] + h[i]) / 3.0;
            sup[i] = h[i] / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
        }
        sub[n - 1] = h[n - 2] / 6.0;
        diag[n - 1] = h[n - 2] / 3.0;
        rhs[n - 1] = dn - (y[n - 1] - y[n - 2]) / h[n - 2];
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(Self { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// Value, first and second derivative at `t`. Points outside the knot range are
    /// evaluated on the nearest end segment.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (y1 - y0) / h + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        let d2 = a * m0 + b * m1;
        [value, d1, d2]
    }
}

/// Derivative at `xs[0]` of the cubic interpolating four points.
fn end_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let x0 = xs[0];
    let mut total = ys[0] * xs[1..].iter().map(|&xk| 1.0 / (x0 - xk)).sum::<f64>();
    for j in 1..xs.len() {
        let num: f64 = (1..xs.len()).filter(|&k| k != j).map(|k| x0 - xs[k]).product();
        let den: f64 = (0..xs.len()).filter(|&k| k != j).map(|k| xs[j] - xs[k]).product();
        total += ys[j] * num / den;
    }
    total
}
