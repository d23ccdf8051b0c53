//! Blow-up sequences, their convergence to rotated cones, and the angle
//! accumulation set.

use std::f64::consts::TAU;

use super::curve::BaseCurve;
use super::golden_max;
use super::shell::{radial_grid, AngleLaw, HdOptions, ShellSurface};
use crate::fields::{circular_distance, theta_jet, LogScale, TwistProfile, MAX_RHO, PURE_RHO};
use crate::{Error, Result};

/// Smallest predicted distance that double precision resolves reliably.
pub const RESOLUTION_FLOOR: f64 = 1e-13;

/// Log-scales `rho_k = exp(theta0 + 2 pi k)` at which `theta = log rho` returns to `theta0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupSequence {
    pub theta0: f64,
    pub ks: Vec<i64>,
    pub scales: Vec<LogScale>,
    /// `eps(rho) = rho^{-1/2}`.
    pub eps: Vec<f64>,
}

pub fn blowup_log_scales(theta0: f64, ks: &[i64]) -> Result<BlowupSequence> {
    if !(0.0..TAU).contains(&theta0) {
        return Err(Error::InvalidArgument(format!("theta0 must lie in [0, 2 pi), got {theta0}")));
    }
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let k_max = ((MAX_RHO.ln() - theta0) / TAU).floor() as i64;
    let mut scales = Vec::with_capacity(ks.len());
    let prof = TwistProfile::log_log();
    for &k in &ks {
        if k > k_max {
            return Err(Error::Resolution { k_max });
        }
        let s = LogScale::from_ln_rho(theta0 + TAU * k as f64)?;
        let jet = theta_jet(&prof, s)?;
        if circular_distance(jet.theta_mod, theta0) > 1e-9 {
            return Err(Error::Precision(format!("theta_mod {} misses theta0 {theta0} at k={k}", jet.theta_mod)));
        }
        scales.push(s);
    }
    let eps = scales.iter().map(|s| s.rho().powf(-0.5)).collect();
    Ok(BlowupSequence { theta0, ks, scales, eps })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlowupPoint {
    pub k: i64,
    pub rho: f64,
    /// Exact shell-route Hausdorff distance to `R_{theta0} Sigma_s` in `B_R`.
    pub distance: f64,
    /// Matched-shell upper bound.
    pub matched_bound: f64,
    /// `rho^{-1/2}`.
    pub envelope: f64,
}

/// `D_k = HD(Sigma_{rho_k} ∩ B_R, R_{theta0} Sigma_s ∩ B_R)` along a blow-up sequence.
pub fn blowup_convergence(
    curve: &BaseCurve,
    profile: TwistProfile,
    theta0: f64,
    ks: &[i64],
    r: f64,
    opts: &HdOptions,
) -> Result<Vec<BlowupPoint>> {
    let seq = blowup_log_scales(theta0, ks)?;
    let reference = ShellSurface::new(curve, AngleLaw::rotated(theta0));
    let mut out = Vec::new();
    for (i, s) in seq.scales.iter().enumerate() {
        if s.at(r) < PURE_RHO {
            return Err(Error::Domain(format!("R = {r} leaves the pure region at rho = {}", s.rho())));
        }
        let law = if profile.is_none() { AngleLaw::rotated(theta0) } else { AngleLaw::twisted(profile, *s, 0.0)? };
        let surf = ShellSurface::new(curve, law);
        let bound = surf.matched_shell_bound(&reference, r, opts);
        if !profile.is_none() && bound < RESOLUTION_FLOOR * r {
            let feasible = seq.ks[..i].last().copied().unwrap_or(0);
            return Err(Error::Resolution { k_max: feasible });
        }
        let d = surf.hausdorff(&reference, r, opts);
        out.push(BlowupPoint {
            k: seq.ks[i],
            rho: s.rho(),
            distance: d.value,
            matched_bound: bound,
            envelope: seq.eps[i],
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub rhs_sup: f64,
    pub ratio: f64,
    /// `sup_{eps <= t <= R} t |theta(rho - ln t) - theta(rho)|` alone.
    pub twist_sup: f64,
}

/// Compare `HD(Sigma_rho ∩ B_R, R_{theta(rho)} Sigma_s ∩ B_R)` with
/// `max(eps, sup_{eps <= t <= R} t |theta(rho - ln t) - theta(rho)|)`.
pub fn hd_lemma_check(
    curve: &BaseCurve,
    profile: TwistProfile,
    scale: LogScale,
    r: f64,
    eps: f64,
    opts: &HdOptions,
) -> Result<LemmaCheck> {
    if !(eps > 0.0 && eps < r) {
        return Err(Error::Degenerate(format!("need 0 < eps < R, got eps={eps}, R={r}")));
    }
    if scale.at(r) < PURE_RHO {
        return Err(Error::Domain(format!("combined log-scale {} at t=R lies below ln 100", scale.at(r))));
    }
    let law = AngleLaw::twisted(profile, scale, 0.0)?;
    let surf = ShellSurface::new(curve, law);
    let reference = ShellSurface::new(curve, AngleLaw::rotated(law.base()));
    let lhs = surf.hausdorff(&reference, r, opts).value;
    let f = |t: f64| t * law.relative(t).abs();
    let sub = HdOptions { t_floor: eps / r, ..*opts };
    let ts = radial_grid(r, &sub);
    let (k, mut sup) = ts
        .iter()
        .enumerate()
        .map(|(k, &t)| (k, f(t.max(eps))))
        .fold((0, 0.0), |a, x| if x.1 > a.1 { x } else { a });
    if k + 1 < ts.len() && k > 0 {
        sup = sup.max(golden_max(&f, ts[k + 1].max(eps), ts[k - 1], 0, 60).1);
    }
    let rhs_sup = eps.max(sup);
    Ok(LemmaCheck { lhs, rhs_sup, ratio: lhs / rhs_sup, twist_sup: sup })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    /// Fraction of grid targets within `tol` of some reduced angle.
    pub coverage: f64,
    pub targets: usize,
    /// Grid targets approached by at least two scales.
    pub accumulation: Vec<f64>,
    /// Length of the shortest arc containing the accumulation targets.
    pub diameter: f64,
    pub non_unique: bool,
}

/// Coverage of the circle by the reduced angles `theta(rho_i) mod 2 pi`.
pub fn accumulation_coverage(profile: &TwistProfile, scales: &[LogScale], tol: f64) -> Result<CoverageReport> {
    if !(tol > 1e-4 && tol < 0.1) {
        return Err(Error::InvalidArgument(format!("angular tolerance must lie in (1e-4, 0.1), got {tol}")));
    }
    let m = (TAU / tol).ceil() as usize;
    let step = TAU / m as f64;
    let mut hits = vec![0u32; m];
    for s in scales {
        let a = theta_jet(profile, *s)?.theta_mod;
        let lo = ((a - tol) / step).ceil() as i64;
        let hi = ((a + tol) / step).floor() as i64;
        for j in lo..=hi {
            let idx = j.rem_euclid(m as i64) as usize;
            if circular_distance(idx as f64 * step, a) <= tol {
                hits[idx] = hits[idx].saturating_add(1);
            }
        }
    }
    let covered = hits.iter().filter(|&&h| h > 0).count();
    let acc: Vec<usize> = (0..m).filter(|&j| hits[j] >= 2).collect();
    let diameter = match acc.len() {
        0 | 1 => 0.0,
        _ => {
            let mut largest_gap = 0usize;
            for w in 0..acc.len() {
                let next = if w + 1 < acc.len() { acc[w + 1] } else { acc[0] + m };
                largest_gap = largest_gap.max(next - acc[w]);
            }
            (m - largest_gap) as f64 * step
        }
    };
    Ok(CoverageReport {
        coverage: covered as f64 / m as f64,
        targets: m,
        accumulation: acc.iter().map(|&j| j as f64 * step).collect(),
        diameter,
        non_unique: diameter > std::f64::consts::FRAC_PI_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blowup_scales() {
        let s = blowup_log_scales(0.0, &[1, 2]).unwrap();
        assert!((s.scales[0].rho() - 535.491_655_524_764_7).abs() < 1e-9);
        assert!((s.scales[1].rho() - 286_751.313_136_653_3).abs() < 1e-6);
        assert!(matches!(blowup_log_scales(0.0, &[12]), Err(Error::Resolution { k_max: 11 })));
    }

    #[test]
    fn none_profile_accumulates_at_zero() {
        let scales: Vec<_> = (1..200).map(|i| LogScale::new(i as f64).unwrap()).collect();
        let r = accumulation_coverage(&TwistProfile::none(), &scales, 0.01).unwrap();
        assert!(!r.non_unique);
        assert!(r.accumulation.iter().all(|&a| circular_distance(a, 0.0) <= 0.01));
    }
}
