//! Controllability analysis for bilinear control systems `ẋ = M(t)x` on
//! `ℝⁿ∖{0}` and for more general homogeneous families.

pub mod analysis;
pub mod cli;
pub mod foliation;
pub mod linalg;
pub mod matlie;
pub mod model;
pub mod ode;
pub mod reach;
pub mod sphere;
