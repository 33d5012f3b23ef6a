//! Radial measures, planar domains and polar quadrature over them.

mod domain;
mod measure;
mod polar;

pub use domain::Domain;
pub use measure::RadialMeasure;
pub use polar::{
    integrate, integrate_with, monomial_moment, Integral, MomentTable, PolarRule, QuadratureSpec,
    RadialNode, Ray, RuleHints, Weight,
};
