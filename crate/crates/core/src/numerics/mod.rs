//! Shared numerical machinery.

pub mod extrapolate;
pub mod ode;
pub mod poly;
pub mod quadrature;
pub mod spline;
