//! The twist maps `Phi_{+-theta}` and their Jacobian frames.
//!
//! `Phi_{+-theta}` rotates the horizontal plane through `p` by the angle
//! `+-theta(rho_c)`, where `rho_c` is the combined log-scale of `|p|`. The map
//! preserves `|p|`, fixes the `z`-axis and has `Phi_theta^{-1} = Phi_{-theta}`.

use super::profile::TwistProfile;
use super::scale::{combined, LogScale};
use crate::{Mat3, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    /// `Phi_theta`: template to physical.
    Forward,
    /// `Phi_{-theta}`: physical to template.
    Backward,
}

impl MapDirection {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            MapDirection::Forward => 1.0,
            MapDirection::Backward => -1.0,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            MapDirection::Forward => MapDirection::Backward,
            MapDirection::Backward => MapDirection::Forward,
        }
    }
}

/// `D Phi = R + E` with `R` the rotation by the local angle and `E` rank one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameDecomposition {
    pub jacobian: Mat3,
    pub rotation: Mat3,
    pub error: Mat3,
    /// `lambda_1 <= lambda_2 <= lambda_3`.
    pub singular_values: [f64; 3],
}

impl FrameDecomposition {
    pub(crate) fn new(rotation: Mat3, error: Mat3) -> Self {
        let jacobian = rotation + error;
        let mut sv: Vec<f64> = jacobian.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        Self {
            jacobian,
            rotation,
            error,
            singular_values: [sv[0], sv[1], sv[2]],
        }
    }

    pub fn error_max_entry(&self) -> f64 {
        self.error.amax()
    }

    /// `lambda_3 / lambda_1`.
    pub fn dilatation(&self) -> f64 {
        self.singular_values[2] / self.singular_values[0]
    }
}

#[inline]
fn rotate_xy(p: &Vec3, alpha: f64) -> Vec3 {
    let (s, c) = alpha.sin_cos();
    Vec3::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z)
}

/// Rotation of the horizontal plane by `alpha`.
pub fn rotation_z(alpha: f64) -> Mat3 {
    let (s, c) = alpha.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Local rotation angle applied by the map at `p`.
#[inline]
pub fn twist_angle(profile: &TwistProfile, direction: MapDirection, p: &Vec3, offset: Option<LogScale>) -> f64 {
    let r = p.norm();
    if r == 0.0 {
        return 0.0;
    }
    direction.sign() * profile.theta(combined(offset, r))
}

/// `Phi_{+-theta}(p)`; points on the axis (and the origin) are fixed.
pub fn twist_map(profile: &TwistProfile, direction: MapDirection, p: &Vec3, offset: Option<LogScale>) -> Vec3 {
    if p.x == 0.0 && p.y == 0.0 {
        return *p;
    }
    rotate_xy(p, twist_angle(profile, direction, p, offset))
}

/// Closed-form Jacobian of [`twist_map`] at `p != 0`, split as `R + E` with
/// `E = u (grad alpha)^T`, `u = dR/dalpha p`, `grad alpha = -+ theta_rho p / |p|^2`.
pub fn twist_frame(profile: &TwistProfile, direction: MapDirection, p: &Vec3, offset: Option<LogScale>) -> FrameDecomposition {
    let r2 = p.norm_squared();
    if r2 == 0.0 {
        return FrameDecomposition::new(Mat3::identity(), Mat3::zeros());
    }
    let rho = combined(offset, r2.sqrt());
    let sign = direction.sign();
    let alpha = sign * profile.theta(rho);
    let (s, c) = alpha.sin_cos();
    let u = Vec3::new(-p.x * s - p.y * c, p.x * c - p.y * s, 0.0);
    let grad = p * (-sign * profile.dtheta(rho) / r2);
    FrameDecomposition::new(rotation_z(alpha), u * grad.transpose())
}
