//! Curvature, masses and capacity of spherically symmetric profiles.

use std::f64::consts::PI;

use super::{AreaProfile, RadialProfile};
use crate::error::{Error, Result};
use crate::numerics::extrapolate::{limit_at_zero, Limit};
use crate::numerics::quadrature::{integrate_to_infinity, integrate_with_breakpoints, QuadOptions};

/// Innermost radius used for the ADM limit.
pub const ADM_R0: f64 = 1e3;

/// Outermost offset from the singular end used for the regular-mass limit.
pub const REGULAR_EPS: f64 = 1e-4;

/// Values below this are reported as a vanishing regular mass.
const ZERO_MASS_TOL: f64 = 1e-8;

/// `R = (16 pi A + A'^2 - 4 A A'') / (2 A^2)`.
pub fn scalar_curvature<P: AreaProfile + ?Sized>(profile: &P, r: f64) -> Result<f64> {
    let [a, a1, a2] = profile.jet(r)?;
    Ok((16.0 * PI * a + a1 * a1 - 4.0 * a * a2) / (2.0 * a * a))
}

/// Hawking mass of the coordinate sphere at `r`.
pub fn hawking_mass_sphere<P: AreaProfile + ?Sized>(profile: &P, r: f64) -> Result<f64> {
    let [a, a1, _] = profile.jet(r)?;
    Ok((a / (16.0 * PI)).sqrt() * (1.0 - a1 * a1 / (16.0 * PI * a)))
}

/// `-A'^2 / (64 pi^{3/2} sqrt(A))`, whose limit at the singular end is the regular mass.
pub fn regular_mass_integrand<P: AreaProfile + ?Sized>(profile: &P, r: f64) -> Result<f64> {
    let [a, a1, _] = profile.jet(r)?;
    Ok(-a1 * a1 / (64.0 * PI.powf(1.5) * a.sqrt()))
}

pub fn adm_mass<P: AreaProfile + ?Sized>(profile: &P) -> Result<f64> {
    adm_mass_from(profile, ADM_R0)
}

/// Extrapolated limit of Hawking masses at `r0, 2 r0, 4 r0, 8 r0`.
pub fn adm_mass_from<P: AreaProfile + ?Sized>(profile: &P, r0: f64) -> Result<f64> {
    if profile.domain().1.is_finite() {
        return Err(Error::Domain("ADM mass needs a profile extending to infinity".into()));
    }
    if !(r0 > profile.domain().0) {
        return Err(Error::Domain(format!("r0 = {r0} is not inside the profile")));
    }
    match limit_at_zero(|h| hawking_mass_sphere(profile, 1.0 / h), 1.0 / r0) {
        Ok(Limit::Finite { value, .. }) => Ok(value),
        Ok(Limit::Divergent { sign }) => Err(Error::NonConvergent {
            msg: format!(
                "Hawking masses diverge to {} at infinity; tail is not flat",
                if sign > 0.0 { "+inf" } else { "-inf" }
            ),
            samples: vec![],
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegularMass {
    Finite(f64),
    Zero,
    MinusInfinity,
}

impl RegularMass {
    pub fn value(&self) -> f64 {
        match self {
            RegularMass::Finite(v) => *v,
            RegularMass::Zero => 0.0,
            RegularMass::MinusInfinity => f64::NEG_INFINITY,
        }
    }
}

pub fn regular_mass<P: AreaProfile + ?Sized>(profile: &P) -> Result<RegularMass> {
    regular_mass_from(profile, REGULAR_EPS)
}

/// Limit of [`regular_mass_integrand`] at the singular end, sampled at offsets
/// `eps, eps/2, eps/4, eps/8`.
pub fn regular_mass_from<P: AreaProfile + ?Sized>(profile: &P, eps: f64) -> Result<RegularMass> {
    if !profile.singular_inner() {
        return Err(Error::Domain("profile has no singular inner end".into()));
    }
    let lo = profile.domain().0;
    match limit_at_zero(|h| regular_mass_integrand(profile, lo + h), eps)? {
        Limit::Finite { value, .. } if value.abs() <= ZERO_MASS_TOL => Ok(RegularMass::Zero),
        Limit::Finite { value, .. } => Ok(RegularMass::Finite(value)),
        Limit::Divergent { sign } if sign < 0.0 => Ok(RegularMass::MinusInfinity),
        Limit::Divergent { .. } => Err(Error::Numerical("regular-mass integrand grew positive".into())),
    }
}

fn check_flat_tail<P: AreaProfile + ?Sized>(profile: &P) -> Result<()> {
    if profile.domain().1.is_finite() {
        return Err(Error::Domain("capacity needs a profile extending to infinity".into()));
    }
    let ratio = |r: f64| -> Result<f64> { Ok(profile.area(r)? / (4.0 * PI * r * r)) };
    let (a, b) = (ratio(1e4)?, ratio(1e5)?);
    if !(a > 0.1 && a < 10.0 && (a / b - 1.0).abs() < 1e-2) {
        return Err(Error::Domain(
            "tail is not asymptotically flat; capacity integral diverges".into(),
        ));
    }
    Ok(())
}

/// `f(r) = 4 pi int_r^inf dr / A`.
pub fn capacity_function<P: AreaProfile + ?Sized>(profile: &P, r: f64) -> Result<f64> {
    check_flat_tail(profile)?;
    capacity_integral(profile, r)
}

fn capacity_integral<P: AreaProfile + ?Sized>(profile: &P, r: f64) -> Result<f64> {
    let (lo, _) = profile.domain();
    if !(r > lo) {
        return Err(Error::OutOfDomain {
            r,
            lo,
            hi: f64::INFINITY,
        });
    }
    let opts = QuadOptions::default();
    let inv = |x: f64| profile.area(x).map(|a| 1.0 / a).unwrap_or(f64::NAN);
    // dyadic breakpoints resolve the steep inner part when r is small
    let split = r.max(1.0);
    let mut points = vec![r];
    let mut x = r;
    while x * 2.0 < split {
        x *= 2.0;
        points.push(x);
    }
    if split > r {
        points.push(split);
    }
    let near = if points.len() > 1 {
        integrate_with_breakpoints(inv, &points, opts)?.value
    } else {
        0.0
    };
    let tail = integrate_to_infinity(inv, split, opts)?.value;
    Ok(4.0 * PI * (near + tail))
}

/// Capacity `1 / f(r0)` of the coordinate sphere at `r0`.
pub fn radial_capacity<P: AreaProfile + ?Sized>(profile: &P, r0: f64) -> Result<f64> {
    Ok(1.0 / capacity_function(profile, r0)?)
}

/// `lim_{r -> inner end} 1 / f(r)`; zero when `f` diverges.
pub fn capacity_of_center<P: AreaProfile + ?Sized>(profile: &P) -> Result<f64> {
    check_flat_tail(profile)?;
    let lo = profile.domain().0;
    let d = 1.0;
    let opts = QuadOptions::default();
    let inv = |x: f64| profile.area(x).map(|a| 1.0 / a).unwrap_or(f64::NAN);
    let mut total = capacity_integral(profile, lo + d)?;
    let mut prev: Option<f64> = None;
    let mut ratios: Vec<f64> = Vec::new();
    for k in 0..400 {
        let hi = lo + d / f64::powi(2.0, k);
        let low = lo + d / f64::powi(2.0, k + 1);
        if !(low > lo) {
            break;
        }
        let term = 4.0 * PI * integrate_with_breakpoints(inv, &[low, hi], opts)?.value;
        total += term;
        if !total.is_finite() || total > 1e300 {
            return Ok(0.0);
        }
        if let Some(p) = prev {
            ratios.push(term / p);
        }
        prev = Some(term);
        let n = ratios.len();
        if n >= 10 {
            let recent = &ratios[n - 4..];
            if recent.iter().all(|&q| q >= 0.999) {
                return Ok(0.0);
            }
            let q = ratios[n - 1];
            let stable = (ratios[n - 1] - ratios[n - 2]).abs() < 1e-3;
            if stable && q < 0.999 && term * q / (1.0 - q) < 1e-13 * total {
                return Ok(1.0 / (total + term * q / (1.0 - q)));
            }
        }
    }
    match (prev, ratios.last()) {
        (Some(term), Some(&q)) if q < 0.999 => Ok(1.0 / (total + term * q / (1.0 - q))),
        _ => Ok(0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    ZeroMass,
    FiniteMass,
    MinusInfinity,
}

impl From<RegularMass> for Classification {
    fn from(m: RegularMass) -> Self {
        match m {
            RegularMass::Finite(_) => Classification::FiniteMass,
            RegularMass::Zero => Classification::ZeroMass,
            RegularMass::MinusInfinity => Classification::MinusInfinity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassReport {
    /// `None` when the profile does not reach a flat end.
    pub adm: Option<f64>,
    pub regular_mass: RegularMass,
    pub capacity_center: f64,
    pub classification: Classification,
}

/// ADM mass, regular mass and center capacity of a singular profile.
pub fn mass_report<P: AreaProfile + ?Sized>(profile: &P) -> Result<MassReport> {
    let regular = regular_mass(profile)?;
    Ok(MassReport {
        adm: adm_mass(profile).ok(),
        regular_mass: regular,
        capacity_center: capacity_of_center(profile)?,
        classification: regular.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawReport {
    pub capacity_center: f64,
    pub regular_mass: RegularMass,
    pub classification: Classification,
}

/// Classifies the singularity of `A = k r^p` at `r = 0`.
///
/// The mass comes from the pure power law; the center capacity from the same law with
/// a flat outer end attached, since `A = k r^p` alone is not asymptotically flat.
pub fn classify_power_law(k: f64, p: f64) -> Result<PowerLawReport> {
    let pure = RadialProfile::power_law(k, p, false)?;
    let capped = RadialProfile::power_law(k, p, true)?;
    let regular = regular_mass(&pure)?;
    Ok(PowerLawReport {
        capacity_center: capacity_of_center(&capped)?,
        regular_mass: regular,
        classification: regular.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct RoundSphere;

    impl AreaProfile for RoundSphere {
        fn domain(&self) -> (f64, f64) {
            (0.0, PI)
        }
        fn jet_unchecked(&self, r: f64) -> Result<[f64; 3]> {
            let (s, c) = r.sin_cos();
            Ok([4.0 * PI * s * s, 8.0 * PI * s * c, 8.0 * PI * (c * c - s * s)])
        }
        fn singular_inner(&self) -> bool {
            false
        }
    }

    #[test]
    fn curvature_examples() {
        let flat = RadialProfile::flat();
        for r in [0.1, 1.0, 30.0] {
            assert!(scalar_curvature(&flat, r).unwrap().abs() < 1e-12);
        }
        for r in [0.2, 1.0, 2.9] {
            assert!((scalar_curvature(&RoundSphere, r).unwrap() - 6.0).abs() < 1e-10);
        }
        let neg = RadialProfile::schwarzschild(-1.0).unwrap();
        for r in [1e-3, 0.1, 1.0, 10.0, 500.0] {
            let rr = scalar_curvature(&neg, r).unwrap();
            assert!(rr.abs() < 1e-8, "R({r}) = {rr}");
        }
    }

    #[test]
    fn hawking_examples() {
        let flat = RadialProfile::flat();
        assert!(hawking_mass_sphere(&flat, 3.0).unwrap().abs() < 1e-14);
        for m in [-1.0, 2.0] {
            let p = RadialProfile::schwarzschild(m).unwrap();
            for r in [1e-3, 0.5, 2.0, 100.0] {
                assert!((hawking_mass_sphere(&p, r).unwrap() - m).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn power_law_hawking_tracks_integrand() {
        let (k, p) = (3.0f64, 1.1f64);
        let prof = RadialProfile::power_law(k, p, false).unwrap();
        let r: f64 = 1e-6;
        let want = -p * p * k.powf(1.5) * r.powf((3.0 * p - 4.0) / 2.0) / (64.0 * PI.powf(1.5));
        assert!((regular_mass_integrand(&prof, r).unwrap() / want - 1.0).abs() < 1e-12);
        let mh = hawking_mass_sphere(&prof, r).unwrap();
        assert!((mh / want - 1.0).abs() < 1e-3);
    }

    #[test]
    fn adm_examples() {
        assert!(adm_mass(&RadialProfile::flat()).unwrap().abs() < 1e-12);
        assert!((adm_mass(&RadialProfile::schwarzschild(-1.0).unwrap()).unwrap() + 1.0).abs() < 1e-6);
        assert!((adm_mass(&RadialProfile::schwarzschild(2.0).unwrap()).unwrap() - 2.0).abs() < 1e-6);
        assert!(adm_mass(&RadialProfile::power_law(1.0, 1.0, false).unwrap()).is_err());
    }

    #[test]
    fn regular_mass_examples() {
        let neg = RadialProfile::schwarzschild(-1.0).unwrap();
        let k = 16.0 * PI * 0.75f64.powf(4.0 / 3.0);
        let oracle = -k.powf(1.5) / (36.0 * PI.powf(1.5));
        assert!((oracle + 1.0).abs() < 1e-12);
        match regular_mass(&neg).unwrap() {
            RegularMass::Finite(v) => assert!((v - oracle).abs() < 1e-4, "{v}"),
            other => panic!("{other:?}"),
        }
        let k = 2.5f64;
        match regular_mass(&RadialProfile::power_law(k, 4.0 / 3.0, false).unwrap()).unwrap() {
            RegularMass::Finite(v) => assert!((v + k.powf(1.5) / (36.0 * PI.powf(1.5))).abs() < 1e-10),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            regular_mass(&RadialProfile::power_law(k, 2.0, false).unwrap()).unwrap(),
            RegularMass::Zero
        );
        assert!(regular_mass(&RadialProfile::flat()).is_err());
    }

    #[test]
    fn capacity_examples() {
        let flat = RadialProfile::flat();
        for r0 in [0.5, 1.0, 7.0] {
            assert!((radial_capacity(&flat, r0).unwrap() - r0).abs() < 1e-9 * r0);
        }
        assert_eq!(capacity_of_center(&flat).unwrap(), 0.0);
        assert_eq!(
            capacity_of_center(&RadialProfile::schwarzschild(-1.0).unwrap()).unwrap(),
            0.0
        );
        let half = RadialProfile::power_law(1.0, 0.5, true).unwrap();
        assert!(capacity_of_center(&half).unwrap() > 0.0);
        assert!(radial_capacity(&RadialProfile::power_law(1.0, 0.5, false).unwrap(), 1.0).is_err());
    }

    #[test]
    fn center_capacity_matches_direct_integral() {
        // A = r^{1/2} + 4 pi r^2: f(0) is a convergent integral
        let p = RadialProfile::power_law(1.0, 0.5, true).unwrap();
        let direct = capacity_function(&p, 1e-12).unwrap();
        let c = capacity_of_center(&p).unwrap();
        assert!((1.0 / c - direct).abs() < 1e-5 * direct, "{} vs {direct}", 1.0 / c);
    }

    #[test]
    fn power_law_table() {
        let k = 1.7;
        let r = classify_power_law(k, 0.5).unwrap();
        assert!(r.capacity_center > 0.0);
        assert_eq!(r.classification, Classification::MinusInfinity);
        let r = classify_power_law(k, 1.2).unwrap();
        assert_eq!(r.capacity_center, 0.0);
        assert_eq!(r.regular_mass, RegularMass::MinusInfinity);
        let r = classify_power_law(k, 4.0 / 3.0).unwrap();
        assert_eq!(r.classification, Classification::FiniteMass);
        let r = classify_power_law(k, 2.0).unwrap();
        assert_eq!((r.capacity_center, r.classification), (0.0, Classification::ZeroMass));
    }

    #[test]
    fn hawking_mass_nondecreasing_when_scalar_flat_or_positive() {
        for p in [
            RadialProfile::flat(),
            RadialProfile::schwarzschild(-1.0).unwrap(),
            RadialProfile::schwarzschild(1.5).unwrap(),
        ] {
            let mut prev = f64::NEG_INFINITY;
            for i in 1..200 {
                let r = 0.05 * i as f64;
                let m = hawking_mass_sphere(&p, r).unwrap();
                assert!(m >= prev - 1e-9);
                prev = m;
            }
        }
    }

    #[test]
    fn penrose_type_equality_on_negative_schwarzschild() {
        let p = RadialProfile::schwarzschild(-2.0).unwrap();
        let adm = adm_mass(&p).unwrap();
        let reg = regular_mass(&p).unwrap().value();
        assert!((adm - reg).abs() < 1e-4);
        let report = mass_report(&p).unwrap();
        assert_eq!(report.classification, Classification::FiniteMass);
        assert_eq!(report.capacity_center, 0.0);
    }
}
