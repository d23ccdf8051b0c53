//! Pull-back coefficient matrices of the conjugated problems.
//!
//! With `G` the map from the physical domain to the fixed template, a harmonic
//! `u` pulls back to `u o G^{-1}`, which solves `div(B grad .) = 0` with
//! `B = DG DG^T / det DG` evaluated at the physical point. Both maps are
//! volume preserving, so `det B = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domain::DomainKind;
use super::graph::graph_jet;
use super::scale::LogScale;
use super::twist::{twist_frame, twist_map, FrameDecomposition, MapDirection};
use crate::{Mat3, Result, Vec2, Vec3};

/// A symmetric positive-definite coefficient matrix with its ellipticity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientMatrix {
    pub b: Mat3,
    /// Smallest `Lambda` with spectrum inside `[1/Lambda, Lambda]`.
    pub lambda: f64,
}

impl CoefficientMatrix {
    pub fn from_jacobian(dg: &Mat3) -> Self {
        let b = dg * dg.transpose() / dg.determinant();
        let b = (b + b.transpose()) * 0.5;
        let eig = b.symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        Self { b, lambda: hi.max(1.0 / lo) }
    }

    pub fn identity() -> Self {
        Self { b: Mat3::identity(), lambda: 1.0 }
    }

    pub fn distance_from_identity(&self) -> f64 {
        (self.b - Mat3::identity()).amax()
    }
}

/// Jacobian frame of the graph straightening `G(x, y, z) = (x, y, z - v)`.
pub fn graph_frame(kind_amp: super::profile::GraphAmplitude, q: &Vec2, offset: Option<LogScale>) -> Result<FrameDecomposition> {
    let (_, g) = graph_jet(kind_amp, q, offset)?;
    let mut e = Mat3::zeros();
    e[(2, 0)] = -g.x;
    e[(2, 1)] = -g.y;
    Ok(FrameDecomposition::new(Mat3::identity(), e))
}

/// `B` at template point `x` of the rescaled problem at `scale`.
pub fn pullback_coefficient(kind: &DomainKind, scale: LogScale, x: &Vec3) -> Result<CoefficientMatrix> {
    let offset = Some(scale);
    match kind {
        DomainKind::TwistedSzulkin(profile) => {
            if profile.is_none() || (x.x == 0.0 && x.y == 0.0) {
                return Ok(CoefficientMatrix::identity());
            }
            let phys = twist_map(profile, MapDirection::Forward, x, offset);
            let f = twist_frame(profile, MapDirection::Backward, &phys, offset);
            Ok(CoefficientMatrix::from_jacobian(&f.jacobian))
        }
        DomainKind::OscillatingGraph(amp) => {
            let (_, g) = graph_jet(*amp, &Vec2::new(x.x, x.y), offset)?;
            Ok(graph_coefficient(g))
        }
    }
}

/// The matrix part of [`pullback_coefficient`] without the eigenvalue solve.
pub fn pullback_matrix(kind: &DomainKind, scale: LogScale, x: &Vec3) -> Result<Mat3> {
    let offset = Some(scale);
    match kind {
        DomainKind::TwistedSzulkin(profile) => {
            if profile.is_none() || (x.x == 0.0 && x.y == 0.0) {
                return Ok(Mat3::identity());
            }
            let phys = twist_map(profile, MapDirection::Forward, x, offset);
            let j = twist_frame(profile, MapDirection::Backward, &phys, offset).jacobian;
            let b = j * j.transpose() / j.determinant();
            Ok((b + b.transpose()) * 0.5)
        }
        DomainKind::OscillatingGraph(amp) => {
            let (_, g) = graph_jet(*amp, &Vec2::new(x.x, x.y), offset)?;
            Ok(graph_coefficient(g).b)
        }
    }
}

/// Closed form `[[1, 0, -vx], [0, 1, -vy], [-vx, -vy, 1 + vx^2 + vy^2]]`.
pub fn graph_coefficient(g: Vec2) -> CoefficientMatrix {
    let b = Mat3::new(
        1.0,
        0.0,
        -g.x,
        0.0,
        1.0,
        -g.y,
        -g.x,
        -g.y,
        1.0 + g.norm_squared(),
    );
    // eigenvalues 1 and the pair with product 1 and sum 2 + |g|^2
    let s = 2.0 + g.norm_squared();
    let hi = 0.5 * (s + (s * s - 4.0).max(0.0).sqrt());
    CoefficientMatrix { b, lambda: hi }
}

/// Fitted Lipschitz constant of `B` on `B_K \ B_{1/K}`.
///
/// Returns `max |B(x) - B(y)|_max * n(rho) / (K |x - y|)` over random close
/// pairs, with `n = rho` for the twist and `n = rho / ln rho` for the graph.
pub fn fit_lipschitz(kind: &DomainKind, scale: LogScale, k: f64, pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = scale.rho();
    let norm = if kind.is_twist() { rho } else { rho / rho.ln() };
    let mut best: f64 = 0.0;
    let mut done = 0;
    while done < pairs {
        let x = Vec3::new(rng.gen_range(-k..k), rng.gen_range(-k..k), rng.gen_range(-k..k));
        let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 0.05;
        let y = x + d;
        let inside = |p: &Vec3| p.norm() <= k && p.norm() >= 1.0 / k;
        if !inside(&x) || !inside(&y) {
            continue;
        }
        let bx = pullback_coefficient(kind, scale, &x)?;
        let by = pullback_coefficient(kind, scale, &y)?;
        best = best.max((bx.b - by.b).amax() * norm / (k * d.norm()));
        done += 1;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{GraphAmplitude, TwistProfile};

    #[test]
    fn graph_closed_form_matches_product() {
        let g = Vec2::new(0.7, -1.3);
        let mut dg = Mat3::identity();
        dg[(2, 0)] = -g.x;
        dg[(2, 1)] = -g.y;
        let direct = CoefficientMatrix::from_jacobian(&dg);
        let closed = graph_coefficient(g);
        assert!((direct.b - closed.b).amax() < 1e-14);
        assert!((direct.lambda - closed.lambda).abs() < 1e-12);
    }

    #[test]
    fn identity_cases() {
        let s = LogScale::new(100.0).unwrap();
        let ax = Vec3::new(0.0, 0.0, 0.7);
        let b = pullback_coefficient(&DomainKind::TwistedSzulkin(TwistProfile::log_log()), s, &ax).unwrap();
        assert_eq!(b.b, Mat3::identity());
        let b = pullback_coefficient(&DomainKind::TwistedSzulkin(TwistProfile::none()), s, &Vec3::new(0.3, 0.2, 0.1)).unwrap();
        assert_eq!(b.b, Mat3::identity());
        let b = pullback_coefficient(&DomainKind::OscillatingGraph(GraphAmplitude::Flat), s, &Vec3::new(0.3, 0.2, 0.1)).unwrap();
        assert_eq!(b.b, Mat3::identity());
    }

    #[test]
    fn twist_coefficient_unimodular_and_close_to_identity() {
        let kind = DomainKind::TwistedSzulkin(TwistProfile::log_log());
        for &rho in &[10.0, 1e3, 1e6] {
            let s = LogScale::new(rho).unwrap();
            let b = pullback_coefficient(&kind, s, &Vec3::new(0.4, -0.9, 0.3)).unwrap();
            assert!((b.b.determinant() - 1.0).abs() < 1e-9);
            assert!((b.b - b.b.transpose()).amax() < 1e-12);
            assert!(b.distance_from_identity() <= 3.0 / rho);
        }
    }
}
