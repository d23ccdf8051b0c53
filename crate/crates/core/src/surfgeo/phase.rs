//! Best rotation of the untwisted cone against a twisted interface.

use std::f64::consts::TAU;

use super::cloud::{hausdorff_in_ball, sample_profile_shells};
use super::curve::BaseCurve;
use super::golden_min;
use super::shell::{AngleLaw, HdOptions, ShellSurface};
use crate::fields::{reduce_angle, LogScale, TwistProfile, PURE_RHO};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResult {
    pub rho: f64,
    /// Minimising rotation in `[0, 2 pi / 3)`.
    pub phi_star: f64,
    /// Exact Hausdorff distance to `R_{phi*} Sigma_s` in `B_R`.
    pub d_star: f64,
    /// Matched-shell bound at `phi*`.
    pub bound: f64,
}

/// Scan rotations on a `1e-3` grid with the matched-shell bound, refine by
/// golden section, and evaluate the exact distance at the minimiser.
pub fn best_rotation_distance(
    curve: &BaseCurve,
    profile: TwistProfile,
    scale: LogScale,
    r: f64,
    opts: &HdOptions,
) -> Result<PhaseResult> {
    if scale.at(r) < PURE_RHO {
        return Err(Error::Domain(format!("combined log-scale {} at t=R lies below ln 100", scale.at(r))));
    }
    let law = AngleLaw::twisted(profile, scale, 0.0)?;
    let surf = ShellSurface::new(curve, law);
    let coarse = HdOptions { per_decade: 12, ..*opts };
    let bound = |phi: f64| surf.matched_shell_bound(&ShellSurface::new(curve, AngleLaw::rotated(phi)), r, &coarse);
    let period = TAU / 3.0;
    let n = (period / 1e-3).ceil() as usize;
    let step = period / n as f64;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..n {
        let phi = i as f64 * step;
        let v = bound(phi);
        if v < best.1 {
            best = (phi, v);
        }
    }
    let (phi, _) = golden_min(&bound, best.0 - step, best.0 + step, 0, 40);
    let phi_star = reduce_angle(phi) % period;
    let reference = ShellSurface::new(curve, AngleLaw::rotated(phi_star));
    let d = surf.hausdorff(&reference, r, opts);
    Ok(PhaseResult {
        rho: scale.rho(),
        phi_star,
        d_star: d.value,
        bound: surf.matched_shell_bound(&reference, r, opts),
    })
}

/// Cloud distance between `R_{-rho} Sigma_rho` and `R_{-rho'} Sigma_{rho'}`;
/// for the linear law the two agree exactly.
pub fn self_similarity_distance(
    curve: &BaseCurve,
    profile: TwistProfile,
    a: LogScale,
    b: LogScale,
    r: f64,
    gap: f64,
) -> Result<(f64, f64)> {
    let t_min = gap;
    let ca = sample_profile_shells(curve, profile, a, -a.rho(), r, t_min, gap)?;
    let cb = sample_profile_shells(curve, profile, b, -b.rho(), r, t_min, gap)?;
    let hd = hausdorff_in_ball(&ca, &cb, r)?;
    Ok((hd, ca.gap.max(cb.gap)))
}
