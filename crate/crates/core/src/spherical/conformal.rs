//! Conformal rescaling `g -> phi^4 g` by the harmonic function `phi = 1 + C f(r)`.

use std::f64::consts::PI;

use super::masses::{adm_mass, capacity_function};
use super::{AreaProfile, RadialProfile};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, QuadOptions};

/// Knots per decade of the arclength table.
const KNOTS_PER_DECADE: usize = 8;
const FIRST_OFFSET: f64 = 1e-8;
const LAST_OFFSET: f64 = 1e8;

/// A profile multiplied by `phi^4`, re-parametrized by its own arclength.
#[derive(Debug, Clone)]
pub struct HarmonicRescaled {
    base: RadialProfile,
    c: f64,
    /// Base radius where the new arclength starts.
    start: f64,
    singular: bool,
    /// Base radii of the table, beginning at `start`.
    knots: Vec<f64>,
    /// `f` at each knot.
    f_knots: Vec<f64>,
    /// New arclength at each knot.
    s_knots: Vec<f64>,
}

fn quad() -> QuadOptions {
    // phi^2 is tiny next to a zero of phi, where relative accuracy is unreachable
    QuadOptions {
        abs_tol: 1e-16,
        ..QuadOptions::with_rel_tol(1e-12)
    }
}

impl HarmonicRescaled {
    fn build(base: RadialProfile, c: f64) -> Result<Self> {
        let lo = base.domain().0;
        // f may diverge at the inner end, so bracket the zero of phi from inside
        let f_near = |s: f64| capacity_function(&base, s);
        let (start, singular) = if c < 0.0 {
            let target = -1.0 / c;
            let mut inner = lo + 1.0;
            let mut found = false;
            for _ in 0..200 {
                if f_near(inner)? > target {
                    found = true;
                    break;
                }
                let next = lo + (inner - lo) * 0.5;
                if !(next > lo) {
                    break;
                }
                inner = next;
            }
            if found {
                let mut outer = inner.max(lo + 1.0);
                while f_near(outer)? > target {
                    outer *= 2.0;
                }
                let (mut a, mut b) = (inner, outer);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if f_near(mid)? > target {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                (0.5 * (a + b), true)
            } else {
                (lo, base.singular_inner())
            }
        } else {
            let f_inner = f_near(lo + 1e-12 * (1.0 + lo.abs()))?;
            if f_inner > 1e6 {
                return Err(Error::Domain(
                    "C > 0 on a profile with divergent capacity function turns the inner end into a second asymptotic end"
                        .into(),
                ));
            }
            (lo, base.singular_inner())
        };

        let mut knots = vec![start];
        let decades = (LAST_OFFSET / FIRST_OFFSET).log10();
        let n = (decades * KNOTS_PER_DECADE as f64).round() as usize;
        for j in 0..=n {
            let off = FIRST_OFFSET * 10f64.powf(j as f64 / KNOTS_PER_DECADE as f64);
            knots.push(start + off * (1.0 + start.abs()));
        }
        let mut f_knots = vec![0.0; knots.len()];
        let last = knots.len() - 1;
        f_knots[last] = capacity_function(&base, knots[last])?;
        for j in (0..last).rev() {
            let piece = integrate(
                |x| 1.0 / base.area(x).unwrap_or(f64::NAN),
                knots[j],
                knots[j + 1],
                quad(),
            )?
            .value;
            f_knots[j] = f_knots[j + 1] + 4.0 * PI * piece;
        }
        let mut out = Self {
            base,
            c,
            start,
            singular,
            knots,
            f_knots,
            s_knots: vec![],
        };
        let mut s_knots = vec![0.0; out.knots.len()];
        for j in 1..out.knots.len() {
            let piece = integrate(
                |x| out.phi(x).map(|p| p * p).unwrap_or(f64::NAN),
                out.knots[j - 1],
                out.knots[j],
                quad(),
            )?
            .value;
            s_knots[j] = s_knots[j - 1] + piece;
        }
        out.s_knots = s_knots;
        Ok(out)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub(crate) fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    pub(crate) fn singular_inner(&self) -> bool {
        self.singular
    }

    /// Base radius corresponding to new arclength 0.
    pub fn inner_base_radius(&self) -> f64 {
        self.start
    }

    fn f(&self, s: f64) -> Result<f64> {
        let j = self.knots.partition_point(|&k| k <= s);
        if j >= self.knots.len() {
            return capacity_function(&self.base, s);
        }
        let upper = self.knots[j];
        let piece = integrate(|x| 1.0 / self.base.area(x).unwrap_or(f64::NAN), s, upper, quad())?.value;
        Ok(self.f_knots[j] + 4.0 * PI * piece)
    }

    fn phi(&self, s: f64) -> Result<f64> {
        Ok(1.0 + self.c * self.f(s)?)
    }

    /// New arclength of base radius `s`.
    fn new_arclength(&self, s: f64) -> Result<f64> {
        let j = self.knots.partition_point(|&k| k <= s).saturating_sub(1);
        let piece = integrate(
            |x| self.phi(x).map(|p| p * p).unwrap_or(f64::NAN),
            self.knots[j],
            s,
            quad(),
        )?
        .value;
        Ok(self.s_knots[j] + piece)
    }

    /// Base radius at new arclength `t`.
    fn base_radius(&self, t: f64) -> Result<f64> {
        let j = self.s_knots.partition_point(|&k| k <= t);
        let (mut lo, mut hi) = if j == 0 {
            (self.start, self.knots[0])
        } else if j < self.knots.len() {
            (self.knots[j - 1], self.knots[j])
        } else {
            let mut hi = 2.0 * self.knots[j - 1];
            while self.new_arclength(hi)? < t {
                hi *= 2.0;
            }
            (self.knots[j - 1], hi)
        };
        let (t_lo, t_hi) = (self.new_arclength(lo)?, self.new_arclength(hi)?);
        let mut s = if t_hi > t_lo {
            lo + (hi - lo) * ((t - t_lo) / (t_hi - t_lo)).clamp(0.0, 1.0)
        } else {
            0.5 * (lo + hi)
        };
        for _ in 0..100 {
            if !(s > lo && s < hi) {
                s = 0.5 * (lo + hi);
            }
            let g = self.new_arclength(s)? - t;
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let speed = self.phi(s)?.powi(2);
            let next = if speed > 0.0 { s - g / speed } else { 0.5 * (lo + hi) };
            if (next - s).abs() <= 1e-15 * (1.0 + s.abs()) || g == 0.0 {
                return Ok(next);
            }
            s = next;
            if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
                break;
            }
        }
        Ok(s)
    }

    pub(crate) fn jet(&self, t: f64) -> Result<[f64; 3]> {
        let s = self.base_radius(t)?;
        let [a, a1, a2] = self.base.jet(s)?;
        let phi = self.phi(s)?;
        let phi1 = -4.0 * PI * self.c / a;
        let phi2 = 4.0 * PI * self.c * a1 / (a * a);
        let new = phi.powi(4) * a;
        let new1 = 4.0 * phi * phi1 * a + phi * phi * a1;
        let new2 =
            (4.0 * phi1 * phi1 * a + 4.0 * phi * phi2 * a + 6.0 * phi * phi1 * a1 + phi * phi * a2) / (phi * phi);
        Ok([new, new1, new2])
    }
}

/// Rescales `profile` by `phi^4` with `phi = 1 + C f`, where `f` is the radial
/// capacity function (`f ~ 1/r` at infinity). Returns the new profile and
/// `adm(new) - (adm(old) + 2C)`.
///
/// If `phi` vanishes somewhere, the outermost zero becomes the inner singular end of
/// the new profile.
pub fn apply_harmonic_conformal(profile: &RadialProfile, c: f64) -> Result<(RadialProfile, f64)> {
    if !c.is_finite() {
        return Err(Error::Domain(format!("C must be finite, got {c}")));
    }
    if c == 0.0 {
        return Ok((profile.clone(), 0.0));
    }
    let old = adm_mass(profile)?;
    let new = RadialProfile::rescaled(HarmonicRescaled::build(profile.clone(), c)?);
    let check = adm_mass(&new)? - (old + 2.0 * c);
    Ok((new, check))
}
