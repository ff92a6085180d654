//! Dimensionless thin lens: a point mass of either sign embedded in a uniform sheet of
//! matter (convergence `kappa`) with external shear `gamma` at orientation `theta`.
//!
//! Image-plane points are complex numbers `z = x1 + i x2`. The lens map is
//!
//! ```text
//! eta(z) = (1 - kappa) z + gamma e^{2 i theta} conj(z) - m / conj(z)
//! ```

mod images;

pub use images::{
    find_images, light_curve, magnification_isolated, solve_images_isolated, total_magnification_isolated, ImageFlags,
    ImageSet, ImageSolution, CAUSTIC_TIE_TOL, RESIDUAL_TOL,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Image- or source-plane position.
pub type ComplexPoint = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensModel {
    pub m: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// Shear orientation in `[0, pi)`.
    pub theta: f64,
}

impl LensModel {
    /// Validates the parameters and folds `theta` into `[0, pi)`.
    pub fn new(m: f64, kappa: f64, gamma: f64, theta: f64) -> Result<Self> {
        ensure_finite("m", m)?;
        ensure_finite("kappa", kappa)?;
        ensure_finite("gamma", gamma)?;
        ensure_finite("theta", theta)?;
        if kappa < 0.0 {
            return Err(Error::Domain(format!("kappa must be non-negative, got {kappa}")));
        }
        if gamma < 0.0 {
            return Err(Error::Domain(format!("gamma must be non-negative, got {gamma}")));
        }
        let mut theta = theta.rem_euclid(PI);
        if theta >= PI {
            theta = 0.0;
        }
        Ok(Self { m, kappa, gamma, theta })
    }

    /// A bare point mass.
    pub fn isolated(m: f64) -> Result<Self> {
        Self::new(m, 0.0, 0.0, 0.0)
    }

    /// Same lens with the shear axis along `x1`.
    pub fn aligned(&self) -> Self {
        Self { theta: 0.0, ..*self }
    }

    fn shear(&self) -> Complex64 {
        Complex64::from_polar(self.gamma, 2.0 * self.theta)
    }
}

/// Physical lens configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensGeometry {
    pub d_l: f64,
    pub d_s: f64,
    pub d_ls: f64,
    pub mass: f64,
    pub z_l: f64,
}

impl LensGeometry {
    fn check(&self) -> Result<()> {
        for (name, v) in [("d_L", self.d_l), ("d_S", self.d_s), ("d_LS", self.d_ls)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        ensure_finite("mass", self.mass)?;
        ensure_finite("z_L", self.z_l)?;
        Ok(())
    }

    /// `(1 + z_L) d_L d_S / d_LS`, converting dimensionless delays to physical ones.
    pub fn delay_scale(&self) -> Result<f64> {
        self.check()?;
        Ok((1.0 + self.z_l) * self.d_l * self.d_s / self.d_ls)
    }
}

/// Critical surface density and dimensionless mass `(sigma_c, m)`.
pub fn nondimensionalize(geometry: &LensGeometry) -> Result<(f64, f64)> {
    geometry.check()?;
    let sigma_c = geometry.d_s / (2.0 * PI * geometry.d_l * geometry.d_ls);
    let m = geometry.mass / (PI * geometry.d_l * geometry.d_l * sigma_c);
    Ok((sigma_c, m))
}

fn check_point(z: ComplexPoint, model: &LensModel) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite point {z}")));
    }
    if model.m != 0.0 && z.norm_sqr() == 0.0 {
        return Err(Error::SingularPoint("origin is singular for m != 0".into()));
    }
    Ok(())
}

/// Lens potential `psi(x)`.
pub fn surface_potential(x: ComplexPoint, model: &LensModel) -> Result<f64> {
    check_point(x, model)?;
    let point = if model.m == 0.0 { 0.0 } else { model.m * x.norm().ln() };
    let (c, s) = ((2.0 * model.theta).cos(), (2.0 * model.theta).sin());
    let shear = (x.re * x.re - x.im * x.im) * c + 2.0 * x.re * x.im * s;
    Ok(point + 0.5 * model.kappa * x.norm_sqr() - 0.5 * model.gamma * shear)
}

/// Gradient of `psi` packed as `d1 psi + i d2 psi`.
pub fn potential_gradient(x: ComplexPoint, model: &LensModel) -> Result<ComplexPoint> {
    check_point(x, model)?;
    let point = if model.m == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        model.m / x.conj()
    };
    Ok(point + model.kappa * x - model.shear() * x.conj())
}

/// Source position `eta(z)` of the image-plane point `z`.
pub fn lens_map(z: ComplexPoint, model: &LensModel) -> Result<ComplexPoint> {
    check_point(z, model)?;
    let zb = z.conj();
    let point = if model.m == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        model.m / zb
    };
    Ok((1.0 - model.kappa) * z + model.shear() * zb - point)
}

/// `d eta / d conj(z)`.
pub(crate) fn anti_derivative(z: ComplexPoint, model: &LensModel) -> Complex64 {
    let zb = z.conj();
    let point = if model.m == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        model.m / (zb * zb)
    };
    model.shear() + point
}

/// Jacobian determinant `(1 - kappa)^2 - |gamma e^{2 i theta} + m / conj(z)^2|^2`.
pub fn jacobian_det(z: ComplexPoint, model: &LensModel) -> Result<f64> {
    check_point(z, model)?;
    let s = 1.0 - model.kappa;
    Ok(s * s - anti_derivative(z, model).norm_sqr())
}

/// Dimensionless arrival time `tau = |x - y|^2 / 2 - psi(x)` and its physical value.
pub fn time_delay(x: ComplexPoint, y: ComplexPoint, model: &LensModel, geometry: &LensGeometry) -> Result<(f64, f64)> {
    if !(y.re.is_finite() && y.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite source {y}")));
    }
    let tau = 0.5 * (x - y).norm_sqr() - surface_potential(x, model)?;
    Ok((tau, tau * geometry.delay_scale()?))
}

/// Rotates `z` by `angle` about the origin.
pub fn rotate(z: ComplexPoint, angle: f64) -> ComplexPoint {
    z * Complex64::from_polar(1.0, angle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn potential_values() {
        let iso = LensModel::isolated(-1.0).unwrap();
        assert!(surface_potential(c(0.6, 0.8), &iso).unwrap().abs() < 1e-15);
        let sheet = LensModel::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((surface_potential(c(2.0, 0.0), &sheet).unwrap() - 2.0).abs() < 1e-15);
        let full = LensModel::new(-1.0, 0.2, 0.2, 0.0).unwrap();
        let want = -0.5 * 2f64.ln() + 0.1 * 2.0;
        assert!((surface_potential(c(1.0, 1.0), &full).unwrap() - want).abs() < 1e-14);
        assert!(matches!(
            surface_potential(c(0.0, 0.0), &iso),
            Err(Error::SingularPoint(_))
        ));
    }

    #[test]
    fn map_values() {
        let iso = LensModel::isolated(-1.0).unwrap();
        assert!((lens_map(c(2.0, 0.0), &iso).unwrap() - c(2.5, 0.0)).norm() < 1e-15);
        let sheet = LensModel::new(0.0, 0.25, 0.0, 0.0).unwrap();
        assert!((lens_map(c(1.3, -0.7), &sheet).unwrap() - c(1.3, -0.7) * 0.75).norm() < 1e-15);
        let shear = LensModel::new(0.0, 0.0, 0.5, 0.0).unwrap();
        assert!((lens_map(c(1.0, 1.0), &shear).unwrap() - c(1.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn map_is_identity_minus_gradient() {
        let model = LensModel::new(-0.7, 0.3, 0.4, 1.1).unwrap();
        let z = c(0.9, -1.7);
        let want = z - potential_gradient(z, &model).unwrap();
        assert!((lens_map(z, &model).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let model = LensModel::new(-1.2, 0.4, 0.3, 0.7).unwrap();
        let z = c(1.1, 0.6);
        let h = 1e-6;
        let d1 = (surface_potential(z + h, &model).unwrap() - surface_potential(z - h, &model).unwrap()) / (2.0 * h);
        let ih = c(0.0, h);
        let d2 = (surface_potential(z + ih, &model).unwrap() - surface_potential(z - ih, &model).unwrap()) / (2.0 * h);
        let g = potential_gradient(z, &model).unwrap();
        assert!((g - c(d1, d2)).norm() < 1e-8);
    }

    #[test]
    fn jacobian_values() {
        let iso = LensModel::isolated(-1.0).unwrap();
        assert!(jacobian_det(c(0.0, 1.0), &iso).unwrap().abs() < 1e-15);
        let z = c(2f64.sqrt(), 0.0);
        assert!((jacobian_det(z, &iso).unwrap() - 0.75).abs() < 1e-14);
        let flat = LensModel::isolated(0.0).unwrap();
        assert_eq!(jacobian_det(c(3.0, 4.0), &flat).unwrap(), 1.0);
    }

    #[test]
    fn nondimensional_mass() {
        let g = LensGeometry {
            d_l: 1.0,
            d_s: 2.0,
            d_ls: 1.0,
            mass: 1.0,
            z_l: 0.0,
        };
        let (sigma, m) = nondimensionalize(&g).unwrap();
        assert!((sigma - 1.0 / PI).abs() < 1e-15);
        assert!((m - 1.0).abs() < 1e-14);
        let zero = LensGeometry { mass: 0.0, ..g };
        assert_eq!(nondimensionalize(&zero).unwrap().1, 0.0);
        let bad = LensGeometry { d_ls: 0.0, ..g };
        assert!(nondimensionalize(&bad).is_err());
    }

    #[test]
    fn scaled_geometry_recomputes_consistently() {
        let g = LensGeometry {
            d_l: 2.0,
            d_s: 3.0,
            d_ls: 1.0,
            mass: -0.4,
            z_l: 0.5,
        };
        let (sigma, m) = nondimensionalize(&g).unwrap();
        // d_L doubled, d_S = d_L + d_LS
        let g2 = LensGeometry {
            d_l: 4.0,
            d_s: 5.0,
            ..g
        };
        let (sigma2, m2) = nondimensionalize(&g2).unwrap();
        assert!((sigma2 - 5.0 / (2.0 * PI * 4.0)).abs() < 1e-15);
        assert!((m2 - (-0.4) / (PI * 16.0 * sigma2)).abs() < 1e-15);
        assert!(m2 < 0.0 && m < 0.0 && sigma > sigma2);
    }

    #[test]
    fn time_delay_values() {
        let flat = LensModel::isolated(0.0).unwrap();
        let g = LensGeometry {
            d_l: 1.0,
            d_s: 2.0,
            d_ls: 1.0,
            mass: 0.0,
            z_l: 0.5,
        };
        let p = c(0.3, 0.2);
        assert_eq!(time_delay(p, p, &flat, &g).unwrap(), (0.0, 0.0));

        let iso = LensModel::isolated(-1.0).unwrap();
        let x = (3.0 + 5f64.sqrt()) / 2.0;
        let (tau, phys) = time_delay(c(x, 0.0), c(3.0, 0.0), &iso, &g).unwrap();
        let want = 0.5 * (3.0 - x) * (3.0 - x) + x.ln();
        assert!((tau - want).abs() < 1e-14);
        assert!((tau - 1.035_372_7).abs() < 1e-7);
        assert!((phys - tau * 1.5 * 2.0).abs() < 1e-14);
    }

    #[test]
    fn theta_is_folded() {
        let m = LensModel::new(-1.0, 0.0, 0.1, 3.0 * PI / 2.0).unwrap();
        assert!((m.theta - PI / 2.0).abs() < 1e-15);
        assert!(LensModel::new(-1.0, -0.1, 0.0, 0.0).is_err());
        assert!(LensModel::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }
}
