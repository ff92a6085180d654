//! Numerical toolkit for negative point mass singularities.
//!
//! The crate is split along the physics:
//!
//! * [`lens`] – dimensionless thin-lens map for a point mass of either sign with
//!   continuous matter (convergence) and external shear: potentials, images,
//!   magnifications, light curves and time delays.
//! * [`caustics`] – critical curves, caustics, cusps and image-multiplicity surveys
//!   of the combined lens.
//! * [`spherical`] – spherically symmetric 3-metrics written in terms of the area
//!   function `A(r)`: scalar curvature, Hawking/ADM/regular masses, radial capacity,
//!   harmonic conformal rescaling.
//! * [`imcf`] – radial inverse mean curvature flow with Geroch monotonicity and the
//!   capacity/Hawking-mass energy bound.
//! * [`weyl`] – Zipoy–Voorhees rod potentials and the diagnostics built on them.
//!
//! [`numerics`] holds the quadrature, ODE, polynomial and extrapolation routines the
//! physics modules share.

// Guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caustics;
pub mod error;
pub mod imcf;
pub mod lens;
pub mod numerics;
pub mod spherical;
pub mod weyl;

pub use error::{Error, Result};
