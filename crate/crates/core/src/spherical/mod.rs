//! Spherically symmetric 3-metrics `ds^2 = dr^2 + (A(r) / 4 pi) dS^2`, with `r` the
//! arclength from the inner end.

mod conformal;
mod masses;
mod schwarzschild;
mod tabulated;

pub use conformal::{apply_harmonic_conformal, HarmonicRescaled};
pub use masses::{
    adm_mass, adm_mass_from, capacity_function, capacity_of_center, classify_power_law, hawking_mass_sphere,
    mass_report, radial_capacity, regular_mass, regular_mass_from, regular_mass_integrand, scalar_curvature,
    Classification, MassReport, PowerLawReport, RegularMass, ADM_R0, REGULAR_EPS,
};
pub use tabulated::parse_tabulated;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::spline::CubicSpline;
use schwarzschild::Schwarzschild;

/// Anything that can report the area of its coordinate spheres.
pub trait AreaProfile {
    /// Open interval of admissible radii; the upper end may be infinite.
    fn domain(&self) -> (f64, f64);

    /// `[A, A', A'']` at radius `r`. Callers have checked `r` against [`Self::domain`].
    fn jet_unchecked(&self, r: f64) -> Result<[f64; 3]>;

    /// Whether the inner end is a point singularity (`A -> 0` with non-regular
    /// geometry) rather than a regular center, horizon or cut-off.
    fn singular_inner(&self) -> bool;

    fn jet(&self, r: f64) -> Result<[f64; 3]> {
        let (lo, hi) = self.domain();
        if !(r > lo && r <= hi) || !r.is_finite() {
            return Err(Error::OutOfDomain { r, lo, hi });
        }
        self.jet_unchecked(r)
    }

    fn area(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Flat,
    Schwarzschild {
        m: f64,
    },
    /// `A = k r^p`, plus `4 pi r^2` when `flat_end` is set.
    PowerLaw {
        k: f64,
        p: f64,
        flat_end: bool,
    },
    /// `A = 4 pi r^2 (1 + 0.3 e^{-(r - 5)^2})`; has a region of negative scalar curvature.
    GaussianBump,
    Tabulated {
        samples: usize,
    },
    HarmonicRescaled {
        c: f64,
    },
}

#[derive(Debug, Clone)]
enum Repr {
    Flat,
    Schwarzschild(Schwarzschild),
    PowerLaw { k: f64, p: f64, flat_end: bool },
    Bump,
    Tabulated(CubicSpline),
    Rescaled(Box<HarmonicRescaled>),
}

/// A built-in area profile.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    kind: ProfileKind,
    domain: (f64, f64),
    repr: Repr,
}

impl RadialProfile {
    pub fn flat() -> Self {
        Self {
            kind: ProfileKind::Flat,
            domain: (0.0, f64::INFINITY),
            repr: Repr::Flat,
        }
    }

    /// Spatial Schwarzschild slice of mass `m`. For `m < 0` the inner end is the
    /// singularity; for `m > 0` it is the horizon. `m = 0` gives the flat profile.
    pub fn schwarzschild(m: f64) -> Result<Self> {
        if m == 0.0 {
            return Ok(Self::flat());
        }
        Ok(Self {
            kind: ProfileKind::Schwarzschild { m },
            domain: (0.0, f64::INFINITY),
            repr: Repr::Schwarzschild(Schwarzschild::new(m)?),
        })
    }

    pub fn power_law(k: f64, p: f64, flat_end: bool) -> Result<Self> {
        if !(k > 0.0 && k.is_finite() && p > 0.0 && p.is_finite()) {
            return Err(Error::Domain(format!(
                "power law needs k > 0 and p > 0, got k={k}, p={p}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::PowerLaw { k, p, flat_end },
            domain: (0.0, f64::INFINITY),
            repr: Repr::PowerLaw { k, p, flat_end },
        })
    }

    pub fn gaussian_bump() -> Self {
        Self {
            kind: ProfileKind::GaussianBump,
            domain: (0.0, f64::INFINITY),
            repr: Repr::Bump,
        }
    }

    /// Interpolated profile through `(r, A)` samples.
    pub fn tabulated(r: Vec<f64>, area: Vec<f64>) -> Result<Self> {
        if let Some(bad) = area.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::Domain(format!(
                "area samples must be finite and non-negative, got {bad}"
            )));
        }
        let samples = r.len();
        let spline = CubicSpline::new(r, area)?;
        Ok(Self {
            kind: ProfileKind::Tabulated { samples },
            domain: spline.domain(),
            repr: Repr::Tabulated(spline),
        })
    }

    pub(crate) fn rescaled(inner: HarmonicRescaled) -> Self {
        Self {
            kind: ProfileKind::HarmonicRescaled { c: inner.c() },
            domain: inner.domain(),
            repr: Repr::Rescaled(Box::new(inner)),
        }
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }
}

impl AreaProfile for RadialProfile {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn jet_unchecked(&self, r: f64) -> Result<[f64; 3]> {
        let four_pi = 4.0 * PI;
        Ok(match &self.repr {
            Repr::Flat => [four_pi * r * r, 2.0 * four_pi * r, 2.0 * four_pi],
            Repr::Schwarzschild(s) => s.jet(r),
            Repr::PowerLaw { k, p, flat_end } => {
                let a = k * r.powf(*p);
                let mut jet = [a, p * a / r, p * (p - 1.0) * a / (r * r)];
                if *flat_end {
                    jet[0] += four_pi * r * r;
                    jet[1] += 2.0 * four_pi * r;
                    jet[2] += 2.0 * four_pi;
                }
                jet
            }
            Repr::Bump => {
                let x = r - 5.0;
                let g = 0.3 * (-x * x).exp();
                let (g1, g2) = (-2.0 * x * g, (4.0 * x * x - 2.0) * g);
                let b = four_pi * r * r;
                let (b1, b2) = (2.0 * four_pi * r, 2.0 * four_pi);
                [
                    b * (1.0 + g),
                    b1 * (1.0 + g) + b * g1,
                    b2 * (1.0 + g) + 2.0 * b1 * g1 + b * g2,
                ]
            }
            Repr::Tabulated(s) => s.eval(r),
            Repr::Rescaled(h) => h.jet(r)?,
        })
    }

    fn singular_inner(&self) -> bool {
        match &self.repr {
            Repr::Flat | Repr::Bump => false,
            Repr::Schwarzschild(_) => matches!(self.kind, ProfileKind::Schwarzschild { m } if m < 0.0),
            Repr::PowerLaw { .. } => true,
            Repr::Tabulated(s) => s.eval(s.domain().0)[0] <= 0.0,
            Repr::Rescaled(h) => h.singular_inner(),
        }
    }
}
