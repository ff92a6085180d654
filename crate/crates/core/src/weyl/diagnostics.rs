//! Field-equation residuals, flux mass, and near-rod asymptotics.

use super::{zv_gradient, zv_potentials, Gradient, WeylPoint, ZVModel};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{gauss_legendre_integrate, integrate_with_breakpoints, QuadOptions};
use std::f64::consts::PI;

/// Minimum distance between residual sample points and the rod.
pub const RESIDUAL_MARGIN: f64 = 1e-3;
const FD_STEP: f64 = 1e-5;
const FLUX_NODES: usize = 64;
const AREA_REL_TOL: f64 = 1e-8;

/// Rectangular sample grid in the `(rho, z)` half-plane, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylGrid {
    pub rho_min: f64,
    pub rho_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub n_rho: usize,
    pub n_z: usize,
}

impl WeylGrid {
    pub fn points(&self) -> Vec<WeylPoint> {
        let lin = |lo: f64, hi: f64, n: usize, i: usize| {
            if n <= 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.n_rho * self.n_z);
        for i in 0..self.n_rho {
            for j in 0..self.n_z {
                out.push(WeylPoint::new(
                    lin(self.rho_min, self.rho_max, self.n_rho, i),
                    lin(self.z_min, self.z_max, self.n_z, j),
                ));
            }
        }
        out
    }
}

/// Maximum absolute residuals of the three vacuum equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `lambda_rr + lambda_r / rho + lambda_zz`
    pub harmonic: f64,
    /// `mu_rho - rho (lambda_rho^2 - lambda_z^2)`
    pub mu_rho: f64,
    /// `mu_z - 2 rho lambda_rho lambda_z`
    pub mu_z: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.harmonic.max(self.mu_rho).max(self.mu_z)
    }
}

fn rod_distance(p: WeylPoint, a: f64) -> f64 {
    let dz = (p.z.abs() - a).max(0.0);
    p.rho.hypot(dz)
}

/// Checks the vacuum equations by central differences of the closed-form potentials.
///
/// Second derivatives of `lambda` difference the analytic gradient; `mu_rho`, `mu_z`
/// difference `mu` itself, so they are compared against an independent quantity.
pub fn vacuum_residuals(zv: &ZVModel, grid: &WeylGrid) -> Result<Residuals> {
    let mut res = Residuals {
        harmonic: 0.0,
        mu_rho: 0.0,
        mu_z: 0.0,
    };
    for p in grid.points() {
        let dist = rod_distance(p, zv.a);
        if !(p.rho > 0.0) || dist < RESIDUAL_MARGIN {
            return Err(Error::Domain(format!(
                "grid point ({}, {}) is within {RESIDUAL_MARGIN} of the rod or on the axis",
                p.rho, p.z
            )));
        }
        let h = FD_STEP * dist.min(p.rho);
        let at = |dr: f64, dz: f64| WeylPoint::new(p.rho + dr, p.z + dz);
        let g = zv_gradient(p, zv)?;
        let (gr_p, gr_m) = (zv_gradient(at(h, 0.0), zv)?, zv_gradient(at(-h, 0.0), zv)?);
        let (gz_p, gz_m) = (zv_gradient(at(0.0, h), zv)?, zv_gradient(at(0.0, -h), zv)?);
        let l_rr = (gr_p.lambda_rho - gr_m.lambda_rho) / (2.0 * h);
        let l_zz = (gz_p.lambda_z - gz_m.lambda_z) / (2.0 * h);
        let mu = |q: WeylPoint| zv_potentials(q, zv).map(|v| v.1);
        let mu_r = (mu(at(h, 0.0))? - mu(at(-h, 0.0))?) / (2.0 * h);
        let mu_z = (mu(at(0.0, h))? - mu(at(0.0, -h))?) / (2.0 * h);

        let r1 = l_rr + g.lambda_rho / p.rho + l_zz;
        let r2 = mu_r - p.rho * (g.lambda_rho.powi(2) - g.lambda_z.powi(2));
        let r3 = mu_z - 2.0 * p.rho * g.lambda_rho * g.lambda_z;
        res.harmonic = res.harmonic.max(r1.abs());
        res.mu_rho = res.mu_rho.max(r2.abs());
        res.mu_z = res.mu_z.max(r3.abs());
    }
    Ok(res)
}

fn radial_derivative(g: &Gradient, th: f64) -> f64 {
    th.sin() * g.lambda_rho + th.cos() * g.lambda_z
}

/// Mass read off the outward flux of `grad lambda` through the coordinate sphere of the
/// given radius.
pub fn adm_flux(zv: &ZVModel, radius: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > zv.a) {
        return Err(Error::Domain(format!(
            "flux sphere radius {radius} must exceed the rod half-length {}",
            zv.a
        )));
    }
    let mut failure = None;
    let integral = gauss_legendre_integrate(
        |th| {
            let p = WeylPoint::new(radius * th.sin(), radius * th.cos());
            match zv_gradient(p, zv) {
                Ok(g) => radial_derivative(&g, th) * th.sin(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        PI,
        FLUX_NODES,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(0.5 * radius * radius * integral)
}

/// Dyadic breakpoints on `[-a, a]` clustering towards both rod ends down to a scale
/// below `rho`.
fn rod_breakpoints(a: f64, rho: f64) -> Vec<f64> {
    let mut right = vec![0.0];
    let mut gap = 0.5 * a;
    while gap > 1e-3 * rho && gap > a * 1e-14 {
        right.push(a - gap);
        gap *= 0.5;
    }
    right.push(a);
    let mut pts: Vec<f64> = right.iter().skip(1).rev().map(|x| -x).collect();
    pts.extend(right);
    pts
}

fn integrate_rod<F: FnMut(WeylPoint) -> Result<f64>>(zv: &ZVModel, rho: f64, mut f: F) -> Result<f64> {
    let mut failure = None;
    let opts = QuadOptions {
        rel_tol: AREA_REL_TOL,
        abs_tol: 0.0,
        max_intervals: 20_000,
    };
    let r = integrate_with_breakpoints(
        |z| match f(WeylPoint::new(rho, z)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &rod_breakpoints(zv.a, rho),
        opts,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("cylinder radius must be positive, got {rho}")))
    }
}

/// Area of the cylinder of coordinate radius `rho` around the rod.
pub fn cylinder_area(zv: &ZVModel, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let integral = integrate_rod(zv, rho, |p| {
        let (l, mu) = zv_potentials(p, zv)?;
        Ok((mu - 2.0 * l).exp())
    })?;
    Ok(2.0 * PI * rho * integral)
}

fn excluded(zv: &ZVModel) -> Result<()> {
    if zv.is_excluded() {
        Err(Error::Domain("excluded case m = a".into()))
    } else {
        Ok(())
    }
}

/// Predicted small-`rho` exponent of the cylinder area, `(m/a)^2 - 2m/a + 1`.
pub fn cylinder_area_exponent(zv: &ZVModel) -> Result<f64> {
    excluded(zv)?;
    let x = zv.ratio();
    Ok(x * x - 2.0 * x + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyClass {
    /// Exponent negative: the energy of thin cylinders blows up.
    MinusInfinity,
    /// Exponent zero.
    Boundary,
    /// Exponent positive: the energy vanishes in the limit.
    ZeroMass,
}

const EXPONENT_TOL: f64 = 1e-12;

/// Exponent of `rho` in the small-cylinder energy and its sign class.
pub fn energy_exponent(zv: &ZVModel) -> Result<(f64, EnergyClass)> {
    if zv.m == 0.0 {
        return Err(Error::Domain("energy exponent needs m != 0".into()));
    }
    excluded(zv)?;
    let x = zv.ratio();
    let e = if x > 0.0 {
        2.0 / 3.0 * x * x + x - 1.0
    } else {
        2.0 / 3.0 * x * x - x / 3.0 - 1.0
    };
    let class = if e.abs() <= EXPONENT_TOL {
        EnergyClass::Boundary
    } else if e < 0.0 {
        EnergyClass::MinusInfinity
    } else {
        EnergyClass::ZeroMass
    };
    Ok((e, class))
}

fn check_level(l: f64) -> Result<()> {
    if l.is_finite() && l != 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("level L must be finite and != 1, got {l}")))
    }
}

/// `|L-1|^{-4/3} e^{(4/3)(lambda - mu)} |grad lambda|^{4/3}` at `p`.
pub fn level_set_mass_integrand(zv: &ZVModel, p: WeylPoint, l: f64) -> Result<f64> {
    check_level(l)?;
    let (lam, mu) = zv_potentials(p, zv)?;
    let g = zv_gradient(p, zv)?;
    let grad2 = g.lambda_rho.powi(2) + g.lambda_z.powi(2);
    if grad2 == 0.0 {
        return Ok(0.0);
    }
    Ok((l - 1.0).abs().powf(-4.0 / 3.0) * (4.0 / 3.0 * (lam - mu)).exp() * grad2.powf(2.0 / 3.0))
}

/// Integral of the level-set integrand over the cylinder of radius `rho`, with fixed `L`.
pub fn level_set_energy(zv: &ZVModel, rho: f64, l: f64) -> Result<f64> {
    check_rho(rho)?;
    check_level(l)?;
    let integral = integrate_rod(zv, rho, |p| {
        let (lam, mu) = zv_potentials(p, zv)?;
        Ok(level_set_mass_integrand(zv, p, l)? * (mu - 2.0 * lam).exp())
    })?;
    Ok(2.0 * PI * rho * integral)
}

/// [`level_set_energy`] with `L = e^{lambda(rho, 0)}`, the level through the cylinder's
/// equator.
pub fn level_set_energy_on_level(zv: &ZVModel, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if zv.m == 0.0 {
        return Ok(0.0);
    }
    let (lam, _) = zv_potentials(WeylPoint::new(rho, 0.0), zv)?;
    level_set_energy(zv, rho, lam.exp())
}

/// Capacity of the level set `e^lambda = L`: the conserved flux of `e^lambda`
/// (which is `m`) divided by `|L-1|`.
pub fn level_set_capacity(zv: &ZVModel, l: f64) -> Result<f64> {
    check_level(l)?;
    Ok(adm_flux(zv, 2.0 * zv.a)?.abs() / (l - 1.0).abs())
}

/// Log-log slope of `f` between two radii.
pub fn log_slope<F: FnMut(f64) -> Result<f64>>(mut f: F, rho1: f64, rho2: f64) -> Result<f64> {
    let (f1, f2) = (f(rho1)?, f(rho2)?);
    if !(f1 > 0.0 && f2 > 0.0) {
        return Err(Error::Numerical(format!(
            "log slope needs positive values, got {f1}, {f2}"
        )));
    }
    Ok((f2.ln() - f1.ln()) / (rho2.ln() - rho1.ln()))
}
