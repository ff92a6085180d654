//! Image finding and magnification.

use num_complex::Complex64;

use super::{anti_derivative, jacobian_det, lens_map, rotate, ComplexPoint, LensModel};
use crate::error::{Error, Result};
use crate::numerics::poly;

/// Largest accepted `|eta(z) - y|` for a returned image.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Sources this close (relative) to the isolated caustic circle produce a single
/// flagged image.
pub const CAUSTIC_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSolution {
    pub position: ComplexPoint,
    /// `1 / J(position)`; infinite on a critical curve.
    pub signed_magnification: f64,
    /// `|eta(position) - y|`.
    pub residual: f64,
    /// Sign of the Jacobian: `+1`, `-1`, or `0` for a critical image.
    pub parity: i8,
}

impl ImageSolution {
    fn at(z: ComplexPoint, y: ComplexPoint, model: &LensModel) -> Result<Self> {
        let j = jacobian_det(z, model)?;
        let residual = (lens_map(z, model)? - y).norm();
        let parity = if j > 0.0 {
            1
        } else if j < 0.0 {
            -1
        } else {
            0
        };
        let signed_magnification = if j == 0.0 { f64::INFINITY } else { 1.0 / j };
        Ok(Self {
            position: z,
            signed_magnification,
            residual,
            parity,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ImageFlags {
    /// Source lies strictly inside the isolated caustic; no images.
    pub inside_caustic: bool,
    /// Source lies on the isolated caustic; the single image is degenerate.
    pub on_caustic: bool,
    /// `kappa = 1`, so the `z`-linear part of the map vanishes.
    pub degenerate_linear_part: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageSet {
    /// Sorted by `|z|`, largest first.
    pub images: Vec<ImageSolution>,
    pub flags: ImageFlags,
}

impl ImageSet {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

fn check_source(y: ComplexPoint) -> Result<()> {
    if y.re.is_finite() && y.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite source {y}")))
    }
}

/// Closed-form images of an isolated negative mass.
pub fn solve_images_isolated(y: ComplexPoint, m: f64) -> Result<ImageSet> {
    check_source(y)?;
    if !(m < 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("isolated solver needs m < 0, got {m}")));
    }
    let model = LensModel::isolated(m)?;
    let r = y.norm();
    let edge = 2.0 * (-m).sqrt();
    let mut flags = ImageFlags::default();
    if (r - edge).abs() <= CAUSTIC_TIE_TOL * edge {
        flags.on_caustic = true;
        let z = y / r * (-m).sqrt();
        let mut image = ImageSolution::at(z, y, &model)?;
        image.parity = 0;
        image.signed_magnification = f64::INFINITY;
        return Ok(ImageSet {
            images: vec![image],
            flags,
        });
    }
    if r < edge {
        flags.inside_caustic = true;
        return Ok(ImageSet { images: vec![], flags });
    }
    let root = (r * r + 4.0 * m).sqrt();
    let unit = y / r;
    let outer = 0.5 * (r + root);
    // the smaller root via the product x+ x- = -m avoids cancellation
    let inner = -m / outer;
    let images = vec![
        ImageSolution::at(unit * outer, y, &model)?,
        ImageSolution::at(unit * inner, y, &model)?,
    ];
    Ok(ImageSet { images, flags })
}

/// Magnification `|x|^4 / (|x|^4 - m^2)` of an isolated-lens image at radius `x`.
pub fn magnification_isolated(x_norm: f64, m: f64) -> f64 {
    let x4 = x_norm.powi(4);
    x4 / (x4 - m * m)
}

/// Total (signed-sum) magnification `(y^2 + 2m) / (y sqrt(y^2 + 4m))`.
pub fn total_magnification_isolated(y_norm: f64, m: f64) -> Result<f64> {
    if !(y_norm.is_finite() && m.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if y_norm <= 0.0 {
        return Err(Error::Domain(format!("source distance must be positive, got {y_norm}")));
    }
    let disc = y_norm * y_norm + 4.0 * m;
    if disc <= 0.0 {
        return Err(Error::Domain(format!(
            "source at {y_norm} is not outside the caustic of radius {}",
            2.0 * (-m).sqrt()
        )));
    }
    Ok((y_norm * y_norm + 2.0 * m) / (y_norm * disc.sqrt()))
}

/// Total magnification along a straight source track with closest approach `d`.
/// Samples with no visible images are `None`.
pub fn light_curve(m: f64, d: f64, times: &[f64]) -> Vec<(f64, Option<f64>)> {
    times
        .iter()
        .map(|&t| {
            let u2 = d * d + t * t;
            let disc = u2 + 4.0 * m;
            let mu = if disc > 0.0 && u2 > 0.0 {
                let v = (u2 + 2.0 * m) / (u2.sqrt() * disc.sqrt());
                v.is_finite().then_some(v)
            } else {
                None
            };
            (t, mu)
        })
        .collect()
}

/// All images of source `y`.
///
/// Works in the frame where the shear lies along `x1`. For `kappa != 1` the conjugate
/// lens equation is used to eliminate `conj(z)`, leaving a polynomial of degree at most
/// four whose roots are polished by Newton iteration and screened against the original
/// equation. `kappa = 1` reduces to a quadratic in `conj(z)`, and `m = 0` to a linear
/// system.
pub fn find_images(y: ComplexPoint, model: &LensModel) -> Result<ImageSet> {
    check_source(y)?;
    let frame = model.aligned();
    let y0 = rotate(y, -model.theta);
    let s = 1.0 - model.kappa;
    let mut flags = ImageFlags::default();

    if model.m == 0.0 {
        let z = linear_image(y0, &frame)?;
        let mut image = ImageSolution::at(z, y0, &frame)?;
        image.position = rotate(z, model.theta);
        return Ok(ImageSet {
            images: vec![image],
            flags,
        });
    }
    if model.gamma == 0.0 && y0.norm_sqr() == 0.0 {
        // a source behind the lens images onto the ring s |z|^2 = m, if it exists
        if model.m / s > 0.0 {
            return Err(Error::Degenerate("source on the axis produces a ring image".into()));
        }
        flags.inside_caustic = s > 0.0;
        return Ok(ImageSet { images: vec![], flags });
    }
    let candidates = if s.abs() < 1e-12 {
        flags.degenerate_linear_part = true;
        kappa_one_candidates(y0, &frame)?
    } else {
        polynomial_candidates(y0, &frame)?
    };

    let mut found: Vec<ImageSolution> = Vec::new();
    for z in candidates {
        let Some(z) = polish(z, y0, &frame) else { continue };
        let image = ImageSolution::at(z, y0, &frame)?;
        if image.residual > RESIDUAL_TOL {
            continue;
        }
        let scale = 1.0 + z.norm();
        if let Some(prev) = found.iter_mut().find(|p| (p.position - z).norm() < 1e-8 * scale) {
            if image.residual < prev.residual {
                *prev = image;
            }
            continue;
        }
        found.push(image);
    }
    for image in &mut found {
        image.position = rotate(image.position, model.theta);
    }
    found.sort_by(|a, b| b.position.norm().total_cmp(&a.position.norm()));
    Ok(ImageSet { images: found, flags })
}

fn linear_image(y: ComplexPoint, model: &LensModel) -> Result<ComplexPoint> {
    let s = 1.0 - model.kappa;
    let (a1, a2) = (s + model.gamma, s - model.gamma);
    if a1 == 0.0 || a2 == 0.0 {
        return Err(Error::Degenerate(
            "lens map is singular everywhere; images are not isolated".into(),
        ));
    }
    Ok(Complex64::new(y.re / a1, y.im / a2))
}

fn kappa_one_candidates(y: ComplexPoint, model: &LensModel) -> Result<Vec<ComplexPoint>> {
    // gamma w^2 - y w - m = 0 with w = conj(z)
    let (g, m) = (model.gamma, model.m);
    if g == 0.0 {
        if y.norm_sqr() == 0.0 {
            return Ok(vec![]);
        }
        return Ok(vec![(-m / y).conj()]);
    }
    let disc = (y * y + 4.0 * g * m).sqrt();
    let q = if (y.conj() * disc).re >= 0.0 {
        y + disc
    } else {
        y - disc
    };
    let w1 = q / (2.0 * g);
    let w2 = if q.norm() == 0.0 { w1 } else { -2.0 * m / q };
    Ok(vec![w1.conj(), w2.conj()])
}

fn polynomial_candidates(y: ComplexPoint, model: &LensModel) -> Result<Vec<ComplexPoint>> {
    let s = Complex64::new(1.0 - model.kappa, 0.0);
    let g = Complex64::new(model.gamma, 0.0);
    let m = Complex64::new(model.m, 0.0);
    let yb = y.conj();
    // N(z) = m + yb z - g z^2, ascending coefficients
    let n = [m, yb, -g];
    let mut p = [Complex64::new(0.0, 0.0); 5];
    // s^2 z^2 (N - m)
    p[3] += s * s * yb;
    p[4] -= s * s * g;
    // g N^2
    for i in 0..3 {
        for j in 0..3 {
            p[i + j] += g * n[i] * n[j];
        }
    }
    // - y s z N
    for i in 0..3 {
        p[i + 1] -= y * s * n[i];
    }
    poly::roots(&p)
}

/// Newton iteration on the real 2x2 form of `eta(z) = y`.
fn polish(mut z: ComplexPoint, y: ComplexPoint, model: &LensModel) -> Option<ComplexPoint> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() < 1e-12 {
        return None;
    }
    let a = 1.0 - model.kappa;
    for _ in 0..50 {
        let f = lens_map(z, model).ok()? - y;
        if f.norm() <= 1e-15 * (1.0 + y.norm()) {
            break;
        }
        let b = anti_derivative(z, model);
        let (j11, j12, j21, j22) = (a + b.re, b.im, b.im, a - b.re);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (j22 * f.re - j12 * f.im) / det;
        let dy = (-j21 * f.re + j11 * f.im) / det;
        let next = z - Complex64::new(dx, dy);
        if !(next.re.is_finite() && next.im.is_finite()) || next.norm() < 1e-12 {
            return None;
        }
        let step = (next - z).norm();
        z = next;
        if step <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn isolated_two_images() {
        let set = solve_images_isolated(c(3.0, 0.0), -1.0).unwrap();
        assert_eq!(set.len(), 2);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((set.images[0].position - c(golden + 1.0, 0.0)).norm() < 1e-12);
        assert!((set.images[1].position - c(2.0 - golden, 0.0)).norm() < 1e-12);
        assert_eq!(set.images[0].parity, 1);
        assert_eq!(set.images[1].parity, -1);
        for im in &set.images {
            assert!(im.residual < 1e-12);
        }
    }

    #[test]
    fn isolated_inside_and_on_caustic() {
        let inside = solve_images_isolated(c(1.0, 0.0), -1.0).unwrap();
        assert!(inside.is_empty() && inside.flags.inside_caustic);
        let origin = solve_images_isolated(c(0.0, 0.0), -1.0).unwrap();
        assert!(origin.is_empty() && origin.flags.inside_caustic);
        let edge = solve_images_isolated(c(2.0, 0.0), -1.0).unwrap();
        assert_eq!(edge.len(), 1);
        assert!(edge.flags.on_caustic);
        assert!((edge.images[0].position - c(1.0, 0.0)).norm() < 1e-15);
        assert!(solve_images_isolated(c(3.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn polynomial_matches_closed_form() {
        let model = LensModel::isolated(-1.0).unwrap();
        let y = c(3.0, 0.0);
        let got = find_images(y, &model).unwrap();
        let want = solve_images_isolated(y, -1.0).unwrap();
        assert_eq!(got.len(), 2);
        for (a, b) in got.images.iter().zip(&want.images) {
            assert!((a.position - b.position).norm() < 1e-10);
        }
    }

    #[test]
    fn sheared_lens_far_source_has_two_images() {
        let model = LensModel::new(-1.0, 0.2, 0.2, 0.0).unwrap();
        for k in 0..12 {
            let y = Complex64::from_polar(50.0, k as f64 * 0.5);
            assert_eq!(find_images(y, &model).unwrap().len(), 2, "y = {y}");
        }
    }

    #[test]
    fn strong_shear_regime_has_four_images_inside() {
        for (model, y) in [
            (LensModel::new(-1.0, 0.0, 1.5, 0.0).unwrap(), c(-3.9, 0.0)),
            (LensModel::new(-1.0, 1.5, 0.45, 0.0).unwrap(), c(-0.6, 0.0)),
        ] {
            let set = find_images(y, &model).unwrap();
            assert_eq!(set.len(), 4);
            for im in &set.images {
                assert!(im.residual <= RESIDUAL_TOL);
                let j = jacobian_det(im.position, &model).unwrap();
                assert!((im.signed_magnification * j - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn kappa_one_branch() {
        let model = LensModel::new(-1.0, 1.0, 0.3, 0.4).unwrap();
        let y = c(0.7, -1.9);
        let set = find_images(y, &model).unwrap();
        assert!(set.flags.degenerate_linear_part);
        assert!(!set.is_empty());
        for im in &set.images {
            assert!((lens_map(im.position, &model).unwrap() - y).norm() < 1e-9);
        }
        let bare = LensModel::new(-1.0, 1.0, 0.0, 0.0).unwrap();
        let set = find_images(y, &bare).unwrap();
        assert_eq!(set.len(), 1);
        assert!((lens_map(set.images[0].position, &bare).unwrap() - y).norm() < 1e-12);
    }

    #[test]
    fn massless_lens_has_one_image() {
        let model = LensModel::new(0.0, 0.3, 0.2, 0.5).unwrap();
        let y = c(0.4, 0.9);
        let set = find_images(y, &model).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.images[0].residual < 1e-14);
        let flat = LensModel::isolated(0.0).unwrap();
        assert_eq!(find_images(y, &flat).unwrap().images[0].position, y);
    }

    #[test]
    fn total_magnification_values() {
        let v = total_magnification_isolated(3.0, -1.0).unwrap();
        assert!((v - 7.0 / (3.0 * 5f64.sqrt())).abs() < 1e-15);
        assert!((total_magnification_isolated(1e3, -1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!(total_magnification_isolated(2.0001, -1.0).unwrap() > 50.0);
        assert!(total_magnification_isolated(2.0, -1.0).is_err());
    }

    #[test]
    fn light_curve_values() {
        let lc = light_curve(-1.0, 3.0, &[-4.0, 0.0, 4.0]);
        assert!((lc[1].1.unwrap() - total_magnification_isolated(3.0, -1.0).unwrap()).abs() < 1e-15);
        assert_eq!(lc[0].1, lc[2].1);
        let occulted = light_curve(-1.0, 1.0, &[0.0, 1.0, 2.0]);
        assert_eq!(occulted[0].1, None);
        assert_eq!(occulted[1].1, None);
        assert!(occulted[2].1.is_some());
    }

    proptest! {
        #[test]
        fn images_invert_the_map(
            m in -3.0..-0.1f64, kappa in 0.0..1.8f64, gamma in 0.0..1.5f64, theta in 0.0..3.1f64,
            r in 0.0..6.0f64, phi in 0.0..6.2f64,
        ) {
            prop_assume!((1.0 - kappa).abs() > 1e-3);
            let model = LensModel::new(m, kappa, gamma, theta).unwrap();
            let y = Complex64::from_polar(r, phi);
            let set = find_images(y, &model).unwrap();
            for im in &set.images {
                prop_assert!((lens_map(im.position, &model).unwrap() - y).norm() <= 1e-9);
                let j = jacobian_det(im.position, &model).unwrap();
                prop_assert!((im.signed_magnification * j - 1.0).abs() <= 1e-9);
            }
        }

        #[test]
        fn appendix_identity(m in -4.0..-0.25f64, extra in 1e-3..8.0f64) {
            let y = 2.0 * (-m).sqrt() + extra;
            let set = solve_images_isolated(Complex64::new(y, 0.0), m).unwrap();
            let mu_p = magnification_isolated(set.images[0].position.norm(), m);
            let mu_m = magnification_isolated(set.images[1].position.norm(), m);
            let closed = total_magnification_isolated(y, m).unwrap();
            prop_assert!((mu_p - mu_m - closed).abs() <= 1e-10 * closed.abs().max(1.0));
        }

        #[test]
        fn light_curve_degeneracy(m in -4.0..-0.1f64, extra in 1e-3..5.0f64, t in -10.0..10.0f64) {
            let d = 2.0 * (-m).sqrt() + extra;
            let a = light_curve(m, d, &[t])[0].1.unwrap();
            let b = light_curve(-m, (d * d + 4.0 * m).sqrt(), &[t])[0].1.unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
