//! Critical curves, caustics and cusps of the combined lens.
//!
//! All curve computations happen in the frame where the shear lies along `x1`; the
//! caustic and survey routines rotate back to the model's frame.

mod survey;

pub use survey::{image_count_survey, SourceGrid, Survey, SurveyCell};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lens::{lens_map, rotate, ComplexPoint, LensModel};

/// Samples closer than this to the `gamma* = 1` pole are emitted as gaps.
pub const GAP_TOL: f64 = 1e-9;

/// Largest `|d eta / dZ| / |1 - kappa|` accepted as a cusp.
pub const CUSP_TOL: f64 = 1e-7;

/// Lens with the convergence scaled out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedLens {
    pub m_star: f64,
    pub gamma_star: f64,
    /// `sign(1 - kappa)`.
    pub eps_kappa: i8,
}

impl ReducedLens {
    /// An equivalent lens with `|1 - kappa| = 1`.
    pub fn unit_model(&self) -> LensModel {
        LensModel {
            m: self.m_star,
            kappa: 1.0 - self.eps_kappa as f64,
            gamma: self.gamma_star,
            theta: 0.0,
        }
    }

    /// `(m, gamma)` of the original lens with convergence `kappa`.
    pub fn restore(&self, kappa: f64) -> (f64, f64) {
        let s = (1.0 - kappa).abs();
        (self.m_star * s, self.gamma_star * s)
    }
}

pub fn reduce(model: &LensModel) -> Result<ReducedLens> {
    let s = 1.0 - model.kappa;
    if s == 0.0 {
        return Err(Error::Degenerate(
            "kappa = 1 has no reduced form; use critical_points_kappa1".into(),
        ));
    }
    Ok(ReducedLens {
        m_star: model.m / s.abs(),
        gamma_star: model.gamma / s.abs(),
        eps_kappa: if s > 0.0 { 1 } else { -1 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub phi: f64,
    pub z_plus: ComplexPoint,
    pub z_minus: ComplexPoint,
    /// Images `(eta(z_plus), eta(z_minus))`, present once mapped by [`caustic_curve`].
    pub caustic: Option<(ComplexPoint, ComplexPoint)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCurve {
    pub samples: Vec<CurveSample>,
    /// Parameter values skipped because the curve runs off to infinity there.
    pub gaps: Vec<f64>,
}

/// Critical points `z^2 = m* / (e^{-i phi} - gamma*)` on a uniform grid of `n` angles.
///
/// The two branches are kept continuous by swapping whenever the principal root lands
/// closer to the previous sample's other branch.
pub fn critical_curve(reduced: &ReducedLens, n_samples: usize) -> Result<CriticalCurve> {
    if n_samples < 4 {
        return Err(Error::Domain(format!("need at least 4 samples, got {n_samples}")));
    }
    if reduced.m_star == 0.0 || !reduced.m_star.is_finite() || !(reduced.gamma_star >= 0.0) {
        return Err(Error::Domain("critical curve needs m* != 0 and gamma* >= 0".into()));
    }
    let mut samples = Vec::with_capacity(n_samples);
    let mut gaps = Vec::new();
    let mut prev: Option<ComplexPoint> = None;
    for k in 0..n_samples {
        let phi = TAU * k as f64 / n_samples as f64;
        match critical_point(reduced, phi) {
            None => {
                gaps.push(phi);
                prev = None;
            }
            Some(mut z) => {
                if let Some(p) = prev {
                    if (z - p).norm() > (-z - p).norm() {
                        z = -z;
                    }
                }
                prev = Some(z);
                samples.push(CurveSample {
                    phi,
                    z_plus: z,
                    z_minus: -z,
                    caustic: None,
                });
            }
        }
    }
    Ok(CriticalCurve { samples, gaps })
}

/// Principal-root critical point at angle `phi`, or `None` inside a gap.
pub fn critical_point(reduced: &ReducedLens, phi: f64) -> Option<ComplexPoint> {
    let den = Complex64::from_polar(1.0, -phi) - reduced.gamma_star;
    if den.norm() < GAP_TOL {
        return None;
    }
    Some((reduced.m_star / den).sqrt())
}

/// Critical points of the `kappa = 1` lens, where `gamma + m / conj(z)^2 = 0`, i.e.
/// `conj(z)^2 = -m / gamma`. For `m < 0` they sit on the `x1` axis.
pub fn critical_points_kappa1(m: f64, gamma: f64) -> Result<Vec<ComplexPoint>> {
    if !(m.is_finite() && gamma.is_finite()) || m == 0.0 || gamma < 0.0 {
        return Err(Error::Domain("need finite m != 0 and gamma >= 0".into()));
    }
    if gamma == 0.0 {
        return Ok(vec![]);
    }
    let z = Complex64::new(-m / gamma, 0.0).sqrt();
    Ok(vec![z, -z])
}

/// Caustic set of a lens.
#[derive(Debug, Clone, PartialEq)]
pub enum Caustic {
    Curve(CriticalCurve),
    /// `kappa = 1`: isolated `(critical point, caustic point)` pairs.
    Points(Vec<(ComplexPoint, ComplexPoint)>),
}

/// Maps the critical set through the lens. Positions are in the model's own frame.
pub fn caustic_curve(model: &LensModel, n_samples: usize) -> Result<Caustic> {
    if model.kappa == 1.0 {
        let mut out = Vec::new();
        for z in critical_points_kappa1(model.m, model.gamma)? {
            let z = rotate(z, model.theta);
            out.push((z, lens_map(z, model)?));
        }
        return Ok(Caustic::Points(out));
    }
    let mut curve = critical_curve(&reduce(model)?, n_samples)?;
    for s in &mut curve.samples {
        s.z_plus = rotate(s.z_plus, model.theta);
        s.z_minus = rotate(s.z_minus, model.theta);
        s.caustic = Some((lens_map(s.z_plus, model)?, lens_map(s.z_minus, model)?));
    }
    Ok(Caustic::Curve(curve))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspLabel {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    Phi5,
    Phi6,
}

impl CuspLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CuspLabel::Phi1 => "phi1",
            CuspLabel::Phi2 => "phi2",
            CuspLabel::Phi3 => "phi3",
            CuspLabel::Phi4 => "phi4",
            CuspLabel::Phi5 => "phi5",
            CuspLabel::Phi6 => "phi6",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearRegime {
    /// `gamma*^2 < 3/4`
    Weak,
    /// `3/4 <= gamma*^2 < 1`
    Intermediate,
    /// `gamma* = 1`: the critical curve reaches infinity.
    Boundary,
    /// `gamma*^2 > 1`
    Strong,
}

impl ShearRegime {
    pub fn of(gamma_star: f64) -> Self {
        if (gamma_star - 1.0).abs() <= GAP_TOL {
            ShearRegime::Boundary
        } else if gamma_star * gamma_star < 0.75 {
            ShearRegime::Weak
        } else if gamma_star < 1.0 {
            ShearRegime::Intermediate
        } else {
            ShearRegime::Strong
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuspSet {
    pub angles: Vec<(f64, CuspLabel)>,
    /// Number of cusps on the caustic; each angle contributes one per branch.
    pub count: usize,
    pub regime: ShearRegime,
    /// `gamma* = 0` with `kappa > 1`: the caustic collapses to a point.
    pub degenerate_point: bool,
}

/// `w^3` with `w = 1 - gamma* e^{-i phi}`.
pub fn w_cubed(gamma_star: f64, phi: f64) -> Complex64 {
    let w = 1.0 - Complex64::from_polar(gamma_star, -phi);
    w * w * w
}

/// `Im(w^3) = gamma sin(phi) [4 gamma^2 cos^2(phi) - 6 gamma cos(phi) + 3 - gamma^2]`.
pub fn im_w_cubed(gamma_star: f64, phi: f64) -> f64 {
    let (g, c) = (gamma_star, phi.cos());
    g * phi.sin() * (4.0 * g * g * c * c - 6.0 * g * c + 3.0 - g * g)
}

/// Candidate cusp angles: the zeros of `Im(w^3)` in `[0, 2 pi)`.
pub fn candidate_angles(gamma_star: f64) -> Vec<(f64, CuspLabel)> {
    let mut out = vec![(0.0, CuspLabel::Phi1), (PI, CuspLabel::Phi2)];
    let g = gamma_star;
    let disc = 4.0 * g * g - 3.0;
    if g > 0.0 && disc >= 0.0 {
        let root = disc.sqrt();
        let c3 = (3.0 + root) / (4.0 * g);
        let c4 = (3.0 - root) / (4.0 * g);
        if c3.abs() <= 1.0 {
            let p = c3.acos();
            out.push((p, CuspLabel::Phi3));
            out.push((TAU - p, CuspLabel::Phi5));
        }
        if c4.abs() <= 1.0 {
            let p = c4.acos();
            out.push((p, CuspLabel::Phi4));
            out.push((TAU - p, CuspLabel::Phi6));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `|d eta / dZ| / |1 - kappa|` at the critical point for angle `phi`, where `Z` is the
/// unit tangent of the critical curve. Vanishes exactly at cusps.
pub fn cusp_residual(reduced: &ReducedLens, phi: f64) -> Option<f64> {
    let z = critical_point(reduced, phi)?;
    let (s, b) = tangent_terms(reduced, z)?;
    let t = tangent(reduced, z, b)?;
    Some((s * t + b * t.conj()).norm() / s.abs())
}

/// `c = -b conj(T)^2 / s`, of unit modulus on the critical curve and equal to 1 at a cusp.
pub fn cusp_indicator(reduced: &ReducedLens, phi: f64) -> Option<Complex64> {
    let z = critical_point(reduced, phi)?;
    let (s, b) = tangent_terms(reduced, z)?;
    let t = tangent(reduced, z, b)?;
    Some(-b * t.conj() * t.conj() / s)
}

fn tangent_terms(reduced: &ReducedLens, z: ComplexPoint) -> Option<(f64, Complex64)> {
    let zb = z.conj();
    let b = reduced.gamma_star + reduced.m_star / (zb * zb);
    Some((reduced.eps_kappa as f64, b))
}

fn tangent(reduced: &ReducedLens, z: ComplexPoint, b: Complex64) -> Option<Complex64> {
    // tangent = 2i dJ/d(conj z) = 4 i m b* / conj(z)^3
    let zb = z.conj();
    let tz = Complex64::new(0.0, 4.0) * reduced.m_star * b.conj() / (zb * zb * zb);
    let n = tz.norm();
    (n > 0.0 && n.is_finite()).then(|| tz / n)
}

/// Cusp angles selected from the candidates by `sign Re(w^3) = -eps_kappa`, each
/// confirmed against the numerical cusp condition.
pub fn cusp_angles(reduced: &ReducedLens) -> Result<CuspSet> {
    let g = reduced.gamma_star;
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::Domain(format!("gamma* must be non-negative, got {g}")));
    }
    let regime = ShearRegime::of(g);
    if g == 0.0 {
        return Ok(CuspSet {
            angles: vec![],
            count: 0,
            regime,
            degenerate_point: reduced.eps_kappa < 0,
        });
    }
    let target = -(reduced.eps_kappa as f64);
    let mut angles = Vec::new();
    for (phi, label) in candidate_angles(g) {
        let w3 = w_cubed(g, phi);
        if w3.re * target <= 0.0 {
            continue;
        }
        match cusp_residual(reduced, phi) {
            Some(r) if r <= CUSP_TOL => angles.push((phi, label)),
            Some(r) => {
                return Err(Error::Numerical(format!(
                    "candidate {} = {phi} fails the cusp condition (residual {r:e})",
                    label.name()
                )))
            }
            None => {}
        }
    }
    let count = 2 * angles.len();
    Ok(CuspSet {
        angles,
        count,
        regime,
        degenerate_point: false,
    })
}

/// Cusp angles located by scanning the numerical condition on `n` uniform angles and
/// bisecting each sign change of `Im c` with `Re c > 0`.
pub fn scan_cusps(reduced: &ReducedLens, n: usize) -> Vec<f64> {
    let eval = |phi: f64| cusp_indicator(reduced, phi);
    let mut found: Vec<f64> = Vec::new();
    let step = TAU / n as f64;
    let push = |phi: f64, found: &mut Vec<f64>| {
        let phi = phi.rem_euclid(TAU);
        if !found.iter().any(|&p| angle_distance(p, phi) < 2.0 * step) {
            found.push(phi);
        }
    };
    for k in 0..n {
        let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
        let (Some(ca), Some(cb)) = (eval(a), eval(b)) else {
            continue;
        };
        if ca.re <= 0.0 || cb.re <= 0.0 {
            continue;
        }
        if ca.im == 0.0 {
            push(a, &mut found);
            continue;
        }
        if ca.im * cb.im > 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (a, b, ca.im);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let Some(cm) = eval(mid) else { break };
            if cm.im * flo <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = cm.im;
            }
        }
        push(0.5 * (lo + hi), &mut found);
    }
    found.sort_by(f64::total_cmp);
    found
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
