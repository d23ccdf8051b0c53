//! Szulkin's cubic `s = x^3 - 3 x y^2 + z^3 - 3/2 (x^2 + y^2) z`.
//!
//! `s` is harmonic and homogeneous of degree three, and its zero set is a
//! topological plane: a cone over a single smooth closed curve on the sphere.

use crate::{Mat3, Vec3};

/// Value and gradient of `s` at `p`.
#[inline]
pub fn szulkin_jet(p: &Vec3) -> (f64, Vec3) {
    (szulkin(p), szulkin_gradient(p))
}

#[inline]
pub fn szulkin(p: &Vec3) -> f64 {
    let (x, y, z) = (p.x, p.y, p.z);
    x * x * x - 3.0 * x * y * y + z * z * z - 1.5 * (x * x + y * y) * z
}

#[inline]
pub fn szulkin_gradient(p: &Vec3) -> Vec3 {
    let (x, y, z) = (p.x, p.y, p.z);
    Vec3::new(
        3.0 * x * x - 3.0 * y * y - 3.0 * x * z,
        -6.0 * x * y - 3.0 * y * z,
        3.0 * z * z - 1.5 * (x * x + y * y),
    )
}

pub fn szulkin_hessian(p: &Vec3) -> Mat3 {
    let (x, y, z) = (p.x, p.y, p.z);
    Mat3::new(
        6.0 * x - 3.0 * z,
        -6.0 * y,
        -3.0 * x,
        -6.0 * y,
        -6.0 * x - 3.0 * z,
        -3.0 * y,
        -3.0 * x,
        -3.0 * y,
        6.0 * z,
    )
}

/// Envelope constant `c` with `|grad s(Y)| <= c |Y|^2`.
pub const GRADIENT_ENVELOPE: f64 = 6.0;

/// Constant `c` with `|D^2 s(Y)| <= c |Y|`: the Frobenius norm of the Hessian
/// is `sqrt(90 x^2 + 90 y^2 + 54 z^2)`.
pub const HESSIAN_ENVELOPE: f64 = 9.486832980505138;
