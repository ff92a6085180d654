//! Complex polynomial roots by simultaneous (Durand–Kerner) iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluates a polynomial given by coefficients in ascending order.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All roots of `sum coeffs[k] z^k`, with multiplicity.
///
/// Leading coefficients that are negligible against the largest one are dropped, and
/// exact zero roots (vanishing trailing coefficients) are returned explicitly.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Degenerate("polynomial has no usable coefficients".into()));
    }
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() <= 1e-14 * scale {
        c.pop();
    }
    let mut zeros = 0;
    while c.len() > 1 && c[0] == Complex64::new(0.0, 0.0) {
        c.remove(0);
        zeros += 1;
    }
    let n = c.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return Ok(out);
    }
    let lead = *c.last().unwrap();
    let monic: Vec<Complex64> = c.iter().map(|&x| x / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1) * bound).collect();

    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let num = horner(&monic, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = num / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numerical("root iteration diverged".into()));
    }
    out.extend(z);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quartic_with_known_roots() {
        let want = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(0.25, -0.1)];
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in want {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let got = roots(&coeffs).unwrap();
        assert_eq!(got.len(), 4);
        for r in want {
            assert!(got.iter().any(|g| (g - r).norm() < 1e-10), "missing {r}");
        }
    }

    #[test]
    fn trims_leading_and_trailing() {
        // 0*z^3 + z^2 - z = z (z - 1)
        let got = roots(&[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.iter().any(|g| g.norm() == 0.0));
        assert!(got.iter().any(|g| (g - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn all_zero_is_rejected() {
        assert!(roots(&[c(0.0, 0.0); 3]).is_err());
    }
}
