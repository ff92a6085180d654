//! Limits of sampled sequences `f(h)` as `h -> 0`.

use crate::error::{Error, Result};

/// Outcome of a limit extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite {
        value: f64,
        error: f64,
    },
    /// Samples grow without bound; `sign` is the direction of growth.
    Divergent {
        sign: f64,
    },
}

impl Limit {
    pub fn value(&self) -> Option<f64> {
        match self {
            Limit::Finite { value, .. } => Some(*value),
            Limit::Divergent { .. } => None,
        }
    }
}

/// Samples `f` at `h0, h0/2, h0/4, h0/8` and extrapolates to `h = 0`.
///
/// Converged sequences are accelerated with Aitken's delta-squared process on the last
/// three samples. Differences that fail to shrink are reported as divergence, and
/// differences that change sign produce [`Error::NonConvergent`] carrying the samples.
pub fn limit_at_zero<F>(mut f: F, h0: f64) -> Result<Limit>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut samples = Vec::with_capacity(4);
    for k in 0..4 {
        let h = h0 / f64::powi(2.0, k);
        samples.push((h, f(h)?));
    }
    classify(&samples)
}

/// Applies the same classification as [`limit_at_zero`] to precomputed samples ordered
/// by decreasing `h`.
pub fn classify(samples: &[(f64, f64)]) -> Result<Limit> {
    if samples.len() < 4 {
        return Err(Error::Domain("need at least four samples".into()));
    }
    let v: Vec<f64> = samples.iter().map(|s| s.1).collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonConvergent {
            msg: "non-finite sample".into(),
            samples: samples.to_vec(),
        });
    }
    let n = v.len();
    let last = v[n - 1];
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if hi - lo <= 1e-12 * (1.0 + last.abs()) {
        return Ok(Limit::Finite {
            value: last,
            error: hi - lo,
        });
    }
    let d: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let floor = 1e-13 * (1.0 + last.abs());
    let signs_flip = d
        .windows(2)
        .any(|w| w[0].abs() > floor && w[1].abs() > floor && w[0].signum() != w[1].signum());
    if signs_flip {
        return Err(Error::NonConvergent {
            msg: "samples oscillate".into(),
            samples: samples.to_vec(),
        });
    }
    let m = d.len();
    let not_shrinking = (1..m).all(|i| d[i].abs() >= 0.999 * d[i - 1].abs());
    if not_shrinking {
        return Ok(Limit::Divergent {
            sign: d[m - 1].signum(),
        });
    }
    let aitken = |a: f64, b: f64, c: f64| {
        let den = (c - b) - (b - a);
        if den.abs() <= f64::EPSILON * (a.abs() + b.abs() + c.abs()) {
            c
        } else {
            c - (c - b) * (c - b) / den
        }
    };
    let value = aitken(v[n - 3], v[n - 2], v[n - 1]);
    let previous = aitken(v[n - 4], v[n - 3], v[n - 2]);
    Ok(Limit::Finite {
        value,
        error: (value - previous).abs(),
    })
}
