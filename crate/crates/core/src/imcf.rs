//! Inverse mean curvature flow of coordinate spheres in a spherically symmetric
//! profile. Spheres move outward at speed `1/H` with `H = A'/A`, which reduces the
//! flow to `dr/dt = A / A'`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::ode::{dormand_prince, OdeOptions, Termination};
use crate::spherical::{hawking_mass_sphere, radial_capacity, scalar_curvature, AreaProfile};

/// Decreases of the Hawking mass below this are treated as integrator noise.
pub const MONOTONICITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub r: f64,
    pub area: f64,
    pub hawking: f64,
    pub mean_curvature: f64,
}

/// A step over which the Hawking mass dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub delta_m: f64,
    /// Scalar curvature at the two ends of the step.
    pub curvature: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub states: Vec<FlowState>,
    pub violations: Vec<Violation>,
    /// Set when `A'` vanished ahead of the flow and integration stopped early.
    pub horizon_reached: bool,
}

fn state<P: AreaProfile + ?Sized>(profile: &P, t: f64, r: f64) -> Result<FlowState> {
    let [a, a1, _] = profile.jet(r)?;
    Ok(FlowState {
        t,
        r,
        area: a,
        hawking: hawking_mass_sphere(profile, r)?,
        mean_curvature: a1 / a,
    })
}

/// Integrates the radial flow from `r0` for time `t_end`. `dt` is the initial step.
pub fn imcf_flow<P: AreaProfile + ?Sized>(profile: &P, r0: f64, t_end: f64, dt: f64) -> Result<FlowTrace> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let [_, a1, _] = profile.jet(r0)?;
    if !(a1 > 0.0) {
        return Err(Error::Domain(format!(
            "A' = {a1} at r0 = {r0}; the sphere is not expanding"
        )));
    }
    let rhs = |_t: f64, r: f64| -> Result<f64> {
        let [a, a1, _] = profile.jet(r)?;
        if !(a1 > 1e-12 * a) {
            return Err(Error::Degenerate(format!("horizon reached at r = {r}")));
        }
        Ok(a / a1)
    };
    let opts = OdeOptions {
        initial_step: dt,
        ..OdeOptions::default()
    };
    let sol = dormand_prince(rhs, 0.0, r0, t_end, opts)?;
    let states = sol
        .steps
        .iter()
        .map(|&(t, r)| state(profile, t, r))
        .collect::<Result<Vec<_>>>()?;
    let mut trace = FlowTrace {
        states,
        violations: vec![],
        horizon_reached: matches!(sol.termination, Termination::Halted(_)),
    };
    trace.violations = geroch_report(&trace, profile)?;
    Ok(trace)
}

/// Steps where the Hawking mass decreases by more than [`MONOTONICITY_TOL`]. Empty when
/// the scalar curvature is non-negative along the whole trace.
pub fn geroch_report<P: AreaProfile + ?Sized>(trace: &FlowTrace, profile: &P) -> Result<Vec<Violation>> {
    if trace.states.is_empty() {
        return Err(Error::Domain("empty flow trace".into()));
    }
    let curvature = trace
        .states
        .iter()
        .map(|s| scalar_curvature(profile, s.r))
        .collect::<Result<Vec<_>>>()?;
    if curvature.iter().all(|&r| r >= -MONOTONICITY_TOL) {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for (i, w) in trace.states.windows(2).enumerate() {
        let delta = w[1].hawking - w[0].hawking;
        if delta < -MONOTONICITY_TOL {
            out.push(Violation {
                t: w[1].t,
                delta_m: delta,
                curvature: (curvature[i], curvature[i + 1]),
            });
        }
    }
    Ok(out)
}

/// `2 sqrt(alpha) + 2 sqrt(beta)` with `alpha = 16 pi A0` and
/// `beta = (16 pi)^{3/2} sqrt(A0) |m0|`.
pub fn capacity_energy_bound(area0: f64, m0: f64) -> Result<f64> {
    if !(area0 >= 0.0 && area0.is_finite() && m0.is_finite()) {
        return Err(Error::Domain(format!(
            "need finite area0 >= 0 and m0, got {area0}, {m0}"
        )));
    }
    let alpha = 16.0 * PI * area0;
    let beta = (16.0 * PI).powf(1.5) * area0.sqrt() * m0.abs();
    Ok(2.0 * alpha.sqrt() + 2.0 * beta.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityCheck {
    pub capacity: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares the capacity of the sphere at `r0` with the bound built from its area and
/// Hawking mass.
pub fn verify_capacity_bound<P: AreaProfile + ?Sized>(profile: &P, r0: f64) -> Result<CapacityCheck> {
    let [a, a1, _] = profile.jet(r0)?;
    if !(a1 > 0.0) {
        return Err(Error::Domain(format!(
            "A' = {a1} at r0 = {r0}; sphere is not outward minimizing"
        )));
    }
    let capacity = radial_capacity(profile, r0)?;
    let bound = capacity_energy_bound(a, hawking_mass_sphere(profile, r0)?)?;
    Ok(CapacityCheck {
        capacity,
        bound,
        holds: capacity <= bound,
    })
}
