//! Spatial Schwarzschild slice in arclength form.
//!
//! In the conformally flat chart the metric is `(1 + m/2r)^4 (dr^2 + r^2 dS^2)`, so
//! `A = 4 pi (r + c)^4 / r^2` and `ds/dr = (r + c)^2 / r^2` with `c = m/2`. For `m < 0`
//! arclength is measured from the singular sphere `r = -c`; for `m > 0` from the
//! horizon `r = c`. Both are written in terms of the offset from that sphere so the
//! small-`s` regime keeps full precision.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Schwarzschild {
    m: f64,
}

impl Schwarzschild {
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() || m == 0.0 {
            return Err(Error::Domain(format!(
                "Schwarzschild mass must be finite and non-zero, got {m}"
            )));
        }
        Ok(Self { m })
    }

    fn rho0(&self) -> f64 {
        0.5 * self.m.abs()
    }

    /// Arclength as a function of the offset `u` from the inner sphere.
    fn arclength(&self, u: f64) -> f64 {
        let r0 = self.rho0();
        let t = u / r0;
        if self.m < 0.0 {
            if t < 0.1 {
                // s/r0 = sum_{n>=3} (-1)^{n+1} (n-2)/n t^n
                let mut sum = 0.0;
                let mut tn = t * t * t;
                let mut sign = 1.0;
                for n in 3..60 {
                    let term = sign * (n as f64 - 2.0) / n as f64 * tn;
                    sum += term;
                    if term.abs() < 1e-18 * sum.abs() {
                        break;
                    }
                    tn *= t;
                    sign = -sign;
                }
                r0 * sum
            } else {
                u - 2.0 * r0 * t.ln_1p() + r0 * u / (r0 + u)
            }
        } else {
            u + 2.0 * r0 * t.ln_1p() + r0 * u / (r0 + u)
        }
    }

    fn speed(&self, u: f64) -> f64 {
        let r0 = self.rho0();
        if self.m < 0.0 {
            let q = u / (r0 + u);
            q * q
        } else {
            let q = (2.0 * r0 + u) / (r0 + u);
            q * q
        }
    }

    /// Offset `u` at arclength `s` by safeguarded Newton iteration.
    fn offset(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let r0 = self.rho0();
        let (mut lo, mut hi, mut u);
        if self.m < 0.0 {
            // speed lies in [0, 1], and s ~ u^3 / (3 r0^2) near the singular sphere
            lo = 0.0;
            hi = s + 2.0 * r0 * (1.0 + s / r0).ln() + 4.0 * r0;
            u = if s < r0 {
                (3.0 * r0 * r0 * s).cbrt()
            } else {
                s + 2.0 * r0 * (s / r0).ln()
            };
        } else {
            // speed lies in [1, 4]
            lo = s / 4.0;
            hi = s;
            u = if s < r0 { s / 4.0 } else { s - 2.0 * r0 * (s / r0).ln() };
        }
        while self.arclength(hi) < s {
            hi *= 2.0;
        }
        for _ in 0..200 {
            if !(u > lo && u < hi) {
                u = 0.5 * (lo + hi);
            }
            let f = self.arclength(u) - s;
            if f > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let step = f / self.speed(u);
            let next = u - step;
            if (next - u).abs() <= 4.0 * f64::EPSILON * u || f == 0.0 {
                return next.clamp(lo, hi);
            }
            u = next;
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
        }
        u
    }

    /// `[A, A', A'']` at arclength `s`.
    pub fn jet(&self, s: f64) -> [f64; 3] {
        let r0 = self.rho0();
        let u = self.offset(s);
        if self.m < 0.0 {
            // c = -r0, so r + c = u and r - c = r + r0
            let r = r0 + u;
            let a = 4.0 * PI * u.powi(4) / (r * r);
            let a1 = 8.0 * PI * u * (r + r0) / r;
            let a2 = 8.0 * PI * (r * r + r0 * r0) / (u * u);
            [a, a1, a2]
        } else {
            // c = r0, so r + c = 2 r0 + u and r - c = u
            let r = r0 + u;
            let p = 2.0 * r0 + u;
            let a = 4.0 * PI * p.powi(4) / (r * r);
            let a1 = 8.0 * PI * p * u / r;
            let a2 = 8.0 * PI * (r * r + r0 * r0) / (p * p);
            [a, a1, a2]
        }
    }
}
