//! Zipoy–Voorhees solutions: static axisymmetric vacuum metrics
//!
//! ```text
//! g = -e^{2 lambda} dt^2 + e^{-2 lambda} [rho^2 dtheta^2 + e^{2 mu} (drho^2 + dz^2)]
//! ```
//!
//! generated by a uniform rod of mass `m` on the axis segment `|z| <= a`.

mod diagnostics;

pub use diagnostics::{
    adm_flux, cylinder_area, cylinder_area_exponent, energy_exponent, level_set_capacity, level_set_energy,
    level_set_energy_on_level, level_set_mass_integrand, log_slope, vacuum_residuals, EnergyClass, Residuals, WeylGrid,
    RESIDUAL_MARGIN,
};

use crate::error::{Error, Result};

/// Ratios within this of 1 are treated as the excluded case `m = a`.
const RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZVModel {
    pub m: f64,
    pub a: f64,
}

impl ZVModel {
    pub fn new(m: f64, a: f64) -> Result<Self> {
        if !(m.is_finite() && a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("need finite m and a > 0, got m={m}, a={a}")));
        }
        Ok(Self { m, a })
    }

    /// Line density `m / 2a`.
    pub fn delta(&self) -> f64 {
        self.m / (2.0 * self.a)
    }

    pub fn ratio(&self) -> f64 {
        self.m / self.a
    }

    /// `m = a`: the rod is the Schwarzschild horizon, excluded from the asymptotic
    /// statements.
    pub fn is_excluded(&self) -> bool {
        (self.ratio() - 1.0).abs() <= RATIO_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylPoint {
    pub rho: f64,
    pub z: f64,
}

impl WeylPoint {
    pub fn new(rho: f64, z: f64) -> Self {
        Self { rho, z }
    }
}

/// First derivatives of the potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    pub lambda_rho: f64,
    pub lambda_z: f64,
    pub mu_rho: f64,
    pub mu_z: f64,
}

struct Rod {
    r_plus: f64,
    r_minus: f64,
    /// `R+ + R- - 2a`, free of cancellation.
    s_minus: f64,
    s_plus: f64,
}

fn rod(p: WeylPoint, zv: &ZVModel) -> Result<Rod> {
    if !(p.rho.is_finite() && p.z.is_finite()) || p.rho < 0.0 {
        return Err(Error::Domain(format!("invalid point ({}, {})", p.rho, p.z)));
    }
    let a = zv.a;
    let rho2 = p.rho * p.rho;
    let r_plus = rho2.add_sq(p.z + a);
    let r_minus = rho2.add_sq(p.z - a);
    // R+ - (z + a) and R- - (a - z), each >= 0
    let gap = |r: f64, d: f64| if d <= 0.0 { r - d } else { rho2 / (r + d) };
    let s_minus = gap(r_plus, p.z + a) + gap(r_minus, a - p.z);
    if !(s_minus > 0.0) {
        return Err(Error::SingularPoint(format!("({}, {}) lies on the rod", p.rho, p.z)));
    }
    Ok(Rod {
        r_plus,
        r_minus,
        s_minus,
        s_plus: r_plus + r_minus + 2.0 * a,
    })
}

trait AddSq {
    fn add_sq(self, d: f64) -> f64;
}

impl AddSq for f64 {
    fn add_sq(self, d: f64) -> f64 {
        (self + d * d).sqrt()
    }
}

/// `(lambda, mu)` at `p`.
pub fn zv_potentials(p: WeylPoint, zv: &ZVModel) -> Result<(f64, f64)> {
    if zv.m == 0.0 {
        rod(p, zv)?;
        return Ok((0.0, 0.0));
    }
    let r = rod(p, zv)?;
    let lambda = zv.delta() * (r.s_minus / r.s_plus).ln();
    let ratio = 4.0 * r.r_plus * r.r_minus / (r.s_minus * r.s_plus);
    let mu = -(zv.m * zv.m) / (2.0 * zv.a * zv.a) * ratio.ln();
    Ok((lambda, mu))
}

/// Closed-form first derivatives of `lambda` and `mu`.
pub fn zv_gradient(p: WeylPoint, zv: &ZVModel) -> Result<Gradient> {
    let r = rod(p, zv)?;
    if zv.m == 0.0 {
        return Ok(Gradient {
            lambda_rho: 0.0,
            lambda_z: 0.0,
            mu_rho: 0.0,
            mu_z: 0.0,
        });
    }
    let a = zv.a;
    let (rho, z) = (p.rho, p.z);
    let s = r.r_plus + r.r_minus;
    let s_rho = rho / r.r_plus + rho / r.r_minus;
    let s_z = (z + a) / r.r_plus + (z - a) / r.r_minus;
    let prod = r.s_minus * r.s_plus;
    let lambda_s = 2.0 * zv.m / prod;
    let k = -(zv.m * zv.m) / (2.0 * a * a);
    let log_s = 2.0 * s / prod;
    let rp2 = r.r_plus * r.r_plus;
    let rm2 = r.r_minus * r.r_minus;
    Ok(Gradient {
        lambda_rho: lambda_s * s_rho,
        lambda_z: lambda_s * s_z,
        mu_rho: k * (rho / rp2 + rho / rm2 - s_rho * log_s),
        mu_z: k * ((z + a) / rp2 + (z - a) / rm2 - s_z * log_s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_value() {
        let zv = ZVModel::new(1.0, 0.5).unwrap();
        let (l, mu) = zv_potentials(WeylPoint::new(0.0, 2.0), &zv).unwrap();
        assert!((l - (0.6f64).ln()).abs() < 1e-15);
        assert!(mu.abs() < 1e-15);
    }

    #[test]
    fn far_field() {
        let zv = ZVModel::new(1.3, 1.0).unwrap();
        let r = 1e3;
        for th in [0.3, 1.0, 2.0] {
            let p = WeylPoint::new(r * f64::sin(th), r * f64::cos(th));
            let (l, mu) = zv_potentials(p, &zv).unwrap();
            assert!((l + zv.m / r).abs() < 1e-5 * zv.m / r);
            assert!(mu.abs() < 1e-5);
        }
    }

    #[test]
    fn sign_of_lambda() {
        let p = WeylPoint::new(0.7, 0.2);
        assert!(zv_potentials(p, &ZVModel::new(1.0, 1.0).unwrap()).unwrap().0 < 0.0);
        assert!(zv_potentials(p, &ZVModel::new(-1.0, 1.0).unwrap()).unwrap().0 > 0.0);
    }

    #[test]
    fn on_rod_is_singular() {
        let zv = ZVModel::new(1.0, 1.0).unwrap();
        assert!(matches!(
            zv_potentials(WeylPoint::new(0.0, 0.3), &zv),
            Err(Error::SingularPoint(_))
        ));
        assert!(ZVModel::new(1.0, 0.0).is_err());
    }

    #[test]
    fn near_rod_keeps_precision() {
        let zv = ZVModel::new(-1.0, 1.0).unwrap();
        let rho: f64 = 1e-9;
        let (l, _) = zv_potentials(WeylPoint::new(rho, 0.0), &zv).unwrap();
        // S - 2a = rho^2 / (R + 1) * 2 exactly at z = 0
        let want =
            -0.5 * ((rho * rho / (1.0 + (1.0 + rho * rho).sqrt()) * 2.0) / (2.0 * (1.0 + rho * rho).sqrt() + 2.0)).ln();
        assert!((l - want).abs() < 1e-13 * want.abs());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for zv in [ZVModel::new(1.3, 1.0).unwrap(), ZVModel::new(-0.7, 0.4).unwrap()] {
            for (rho, z) in [(0.3, 0.1), (1.5, -2.0), (0.05, 1.3)] {
                let g = zv_gradient(WeylPoint::new(rho, z), &zv).unwrap();
                let h = 1e-6;
                let f = |r: f64, zz: f64| zv_potentials(WeylPoint::new(r, zz), &zv).unwrap();
                let (lp, mp) = f(rho + h, z);
                let (lm, mm) = f(rho - h, z);
                assert!(((lp - lm) / (2.0 * h) - g.lambda_rho).abs() < 1e-6);
                assert!(((mp - mm) / (2.0 * h) - g.mu_rho).abs() < 1e-6);
                let (lp, mp) = f(rho, z + h);
                let (lm, mm) = f(rho, z - h);
                assert!(((lp - lm) / (2.0 * h) - g.lambda_z).abs() < 1e-6);
                assert!(((mp - mm) / (2.0 * h) - g.mu_z).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn flags() {
        let zv = ZVModel::new(2.0, 2.0).unwrap();
        assert!(zv.is_excluded());
        assert!(!ZVModel::new(2.0, 1.0).unwrap().is_excluded());
        assert_eq!(ZVModel::new(1.0, 0.5).unwrap().delta(), 1.0);
    }
}
