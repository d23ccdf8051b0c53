//! Numerical laboratory for two free-boundary counterexamples in three
//! dimensions: the twisted Szulkin domains and the oscillating graph domains.
//!
//! The crate is organised in three layers:
//!
//! * [`fields`] holds the closed-form scalar fields, the twist map and its
//!   Jacobian frame, the pull-back coefficient matrices, and the signed
//!   defining functions with certified gradient bounds. Radii are carried as
//!   [`LogScale`] values (`rho = -ln r`) so that scales such as
//!   `r = exp(-e^{4 pi})` never have to be materialised.
//! * [`surfgeo`] samples rescaled interfaces, computes excess and Hausdorff
//!   distances, and runs the blow-up, phase-transition, corkscrew and area
//!   experiments.
//! * [`potential`] solves the conjugated Dirichlet problems on the fixed
//!   template domains, measures interface gradient ratios, and estimates
//!   harmonic measure by walk-on-spheres.
//!
//! The guide under `book/` walks through each layer; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod error;
pub mod fields;
pub mod potential;
pub mod surfgeo;

pub use error::{Error, Result};
pub use fields::{
    AngleJet, CoefficientMatrix, DomainKind, FrameDecomposition, GraphAmplitude, LogScale,
    MapDirection, Side, SignedField, TwistLaw, TwistProfile,
};

/// Points in space. Coordinates are dimensionless; inside rescaled views a
/// point at radius `t` stands for physical radius `t * exp(-rho)`.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Points in the plane (graph domain parameter space).
pub type Vec2 = nalgebra::Vector2<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/log_scales.md")]
    mod log_scales {}
    #[doc = include_str!("../../../book/src/twist.md")]
    mod twist {}
    #[doc = include_str!("../../../book/src/graph.md")]
    mod graph {}
    #[doc = include_str!("../../../book/src/blowups.md")]
    mod blowups {}
    #[doc = include_str!("../../../book/src/phase.md")]
    mod phase {}
    #[doc = include_str!("../../../book/src/conjugation.md")]
    mod conjugation {}
    #[doc = include_str!("../../../book/src/harmonic_measure.md")]
    mod harmonic_measure {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
