//! Image multiplicity over a rectangular grid of source positions.

use num_complex::Complex64;

use super::{caustic_curve, Caustic};
use crate::error::{Error, Result};
use crate::lens::{find_images, ComplexPoint, LensModel};

/// Caustic resolution used to measure each source's distance to the caustic.
const CAUSTIC_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SourceGrid {
    /// Square grid `[-half, half]^2` with `n` points per side.
    pub fn square(half: f64, n: usize) -> Self {
        Self {
            x_min: -half,
            x_max: half,
            y_min: -half,
            y_max: half,
            nx: n,
            ny: n,
        }
    }

    pub fn points(&self) -> Vec<ComplexPoint> {
        let lerp = |lo: f64, hi: f64, i: usize, n: usize| {
            if n == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.push(Complex64::new(
                    lerp(self.x_min, self.x_max, i, self.nx),
                    lerp(self.y_min, self.y_max, j, self.ny),
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyCell {
    pub source: ComplexPoint,
    pub count: usize,
    /// Closer than the margin to the caustic; the count may be off by two.
    pub unreliable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Survey {
    /// Row-major, `x` fastest.
    pub cells: Vec<SurveyCell>,
    pub margin: f64,
}

/// Counts images at every grid source.
pub fn image_count_survey(model: &LensModel, grid: &SourceGrid, margin: f64) -> Result<Survey> {
    if grid.nx == 0 || grid.ny == 0 {
        return Err(Error::Domain("survey grid is empty".into()));
    }
    if !(margin >= 0.0) {
        return Err(Error::Domain(format!("margin must be non-negative, got {margin}")));
    }
    let polylines = caustic_polylines(model)?;
    let mut cells = Vec::with_capacity(grid.nx * grid.ny);
    for y in grid.points() {
        let count = find_images(y, model)?.len();
        let unreliable = polylines.iter().any(|line| distance_to_polyline(y, line) < margin);
        cells.push(SurveyCell {
            source: y,
            count,
            unreliable,
        });
    }
    Ok(Survey { cells, margin })
}

fn caustic_polylines(model: &LensModel) -> Result<Vec<Vec<ComplexPoint>>> {
    if model.m == 0.0 {
        return Ok(vec![]);
    }
    match caustic_curve(model, CAUSTIC_SAMPLES)? {
        Caustic::Points(pts) => Ok(pts.into_iter().map(|(_, y)| vec![y]).collect()),
        Caustic::Curve(curve) => {
            let mut lines = Vec::new();
            let (mut plus, mut minus) = (Vec::new(), Vec::new());
            let step = std::f64::consts::TAU / CAUSTIC_SAMPLES as f64;
            let mut last_phi = None;
            for s in &curve.samples {
                // split the polyline wherever a gap interrupts the parameter grid
                if let Some(p) = last_phi {
                    if s.phi - p > 1.5 * step {
                        lines.push(std::mem::take(&mut plus));
                        lines.push(std::mem::take(&mut minus));
                    }
                }
                let (yp, ym) = s.caustic.expect("caustic_curve maps every sample");
                plus.push(yp);
                minus.push(ym);
                last_phi = Some(s.phi);
            }
            if curve.gaps.is_empty() {
                // closed curve: the branches swap roles after a full turn
                if let (Some(&p0), Some(&m0)) = (plus.first(), minus.first()) {
                    let end = *plus.last().unwrap();
                    if (end - p0).norm() <= (end - m0).norm() {
                        plus.push(p0);
                        minus.push(m0);
                    } else {
                        plus.push(m0);
                        minus.push(p0);
                    }
                }
            }
            lines.push(plus);
            lines.push(minus);
            Ok(lines.into_iter().filter(|l| !l.is_empty()).collect())
        }
    }
}

fn distance_to_polyline(p: ComplexPoint, line: &[ComplexPoint]) -> f64 {
    if line.len() == 1 {
        return (p - line[0]).norm();
    }
    line.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let ab = b - a;
            let len2 = ab.norm_sqr();
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0)
            };
            (p - (a + ab * t)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}
