//! Dormand–Prince 5(4) integrator for scalar initial value problems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            initial_step: 1e-2,
            max_steps: 1_000_000,
        }
    }
}

/// How an integration run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// The right-hand side refused to evaluate; the message is passed through.
    Halted(String),
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    /// Accepted `(t, y)` pairs including the initial point.
    pub steps: Vec<(f64, f64)>,
    pub termination: Termination,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `dy/dt = rhs(t, y)` from `(t0, y0)` to `t_end`.
///
/// `rhs` may return `Err` to stop the run (e.g. when the flow leaves the region where
/// it is defined); the solution then carries [`Termination::Halted`] and every step
/// accepted so far.
pub fn dormand_prince<F>(mut rhs: F, t0: f64, y0: f64, t_end: f64, opts: OdeOptions) -> Result<OdeSolution>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    if !(t_end > t0) {
        return Err(Error::Domain(format!("t_end ({t_end}) must exceed t0 ({t0})")));
    }
    let mut steps = vec![(t0, y0)];
    let (mut t, mut y) = (t0, y0);
    let mut h = opts.initial_step.abs().min(t_end - t0).max(1e-12);
    let mut k = [0.0; 7];
    k[0] = match rhs(t, y) {
        Ok(v) => v,
        Err(e) => {
            return Ok(OdeSolution {
                steps,
                termination: Termination::Halted(e.to_string()),
            })
        }
    };

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(OdeSolution {
                steps,
                termination: Termination::Completed,
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let mut halted = None;
        for s in 1..7 {
            let ys = y + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            match rhs(t + C[s] * h, ys) {
                Ok(v) => k[s] = v,
                Err(e) => {
                    halted = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = halted {
            // shrink towards the obstruction before giving up
            if h > 1e-10 * (1.0 + t.abs()) {
                h *= 0.25;
                continue;
            }
            return Ok(OdeSolution {
                steps,
                termination: Termination::Halted(e.to_string()),
            });
        }
        let y_new = y + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err_abs = h * (0..7).map(|j| E[j] * k[j]).sum::<f64>();
        let scale = opts.abs_tol + opts.rel_tol * y.abs().max(y_new.abs());
        let err = (err_abs / scale).abs();
        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            steps.push((t, y));
            k[0] = k[6];
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if !h.is_finite() || h < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::Numerical(format!("step size underflow at t = {t}")));
        }
    }
    Err(Error::Numerical(format!("exceeded {} steps", opts.max_steps)))
}
