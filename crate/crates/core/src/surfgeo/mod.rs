//! Interface sampling, set distances, and the geometric experiments.
//!
//! Rescaled twisted interfaces are assembled shell by shell from the traced
//! base curve, so no physical radius is ever formed. Distances between such
//! surfaces are computed exactly through the cone distance identity
//! ([`shell`]); brute-force point clouds ([`cloud`]) remain available for
//! coarse validation and export.

mod area;
mod blowup;
mod cloud;
mod corkscrew;
mod curve;
mod phase;
mod shell;
mod slopes;

pub use area::{area_ratio_probe, AreaSample};
pub use blowup::{
    accumulation_coverage, blowup_convergence, blowup_log_scales, hd_lemma_check, BlowupPoint, BlowupSequence,
    CoverageReport, LemmaCheck, RESOLUTION_FLOOR,
};
pub use cloud::{
    excess, hausdorff_in_ball, sample_interface, sample_profile_shells, sample_rotated_cone, sample_shells, CloudIndex,
    PointCloud,
};
pub use corkscrew::{corkscrew_probe, CorkscrewResult};
pub use curve::{trace_base_curve, BaseCurve};
pub use phase::{best_rotation_distance, self_similarity_distance, PhaseResult};
pub use shell::{wrap_pi, wrap_third, AngleLaw, HdOptions, HdReport, ShellSurface};
pub use slopes::{graph_slope_targets, SlopeTarget};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Grid scan with `grid` interior points followed by golden-section search
/// around the best grid point. Returns `(argmin, min)`.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, grid: usize, iters: usize) -> (f64, f64) {
    let n = grid + 1;
    let mut best = (lo, f(lo));
    let mut k_best = 0;
    for k in 1..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
            k_best = k;
        }
    }
    let step = (hi - lo) / n as f64;
    let mut a = (lo + step * (k_best as f64 - 1.0)).max(lo);
    let mut b = (lo + step * (k_best as f64 + 1.0)).min(hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// As [`golden_min`] for a maximum. Returns `(argmax, max)`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, grid: usize, iters: usize) -> (f64, f64) {
    let (x, v) = golden_min(&|t| -f(t), lo, hi, grid, iters);
    (x, -v)
}
