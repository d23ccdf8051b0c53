//! Shell-structured surfaces `{t R_{a(t)} c : c in C, 0 <= t <= R}` and their
//! exact Hausdorff distances.
//!
//! Every surface handled here (rotated cones, twisted interfaces at any
//! log-scale) is a union of rotated copies of the base curve `C` scaled to
//! radius `t`. For `X = t R_alpha c` and the shell of radius `tau` with angle
//! `b(tau)`, `|X - tau R_{b(tau)} c'|^2 = (t - tau)^2 + 4 t tau sin^2(gamma/2)`
//! with `gamma` the angle between the directions, minimised over `c'` by the
//! angular distance `h(c, alpha - b(tau))` of the rotated vertex to `C`. Against
//! a rotated cone the minimum over `tau` is `t sin h` (or `t` beyond a right
//! angle); in general it is found by a bracketed search in `tau`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::curve::BaseCurve;
use super::{golden_max, golden_min};
use crate::fields::{reduce_angle, theta_jet, LogScale, TwistProfile};
use crate::Result;

/// Rotation angle of the shell at radius `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleLaw {
    /// A rotated cone.
    Fixed(f64),
    /// `theta(rho - ln t) + shift`, stored as a reduced base angle plus the
    /// increment relative to `t = 1`.
    Twisted { profile: TwistProfile, rho: f64, base: f64 },
}

impl AngleLaw {
    pub fn rotated(beta: f64) -> Self {
        AngleLaw::Fixed(reduce_angle(beta))
    }

    pub fn twisted(profile: TwistProfile, scale: LogScale, shift: f64) -> Result<Self> {
        let jet = theta_jet(&profile, scale)?;
        Ok(AngleLaw::Twisted {
            profile,
            rho: scale.rho(),
            base: reduce_angle(jet.theta_mod + shift),
        })
    }

    #[inline]
    pub fn base(&self) -> f64 {
        match self {
            AngleLaw::Fixed(b) => *b,
            AngleLaw::Twisted { base, .. } => *base,
        }
    }

    /// Angle at radius `t` minus the angle at radius one.
    #[inline]
    pub fn relative(&self, t: f64) -> f64 {
        match self {
            AngleLaw::Fixed(_) => 0.0,
            AngleLaw::Twisted { profile, rho, .. } => profile.theta_increment(*rho, -t.ln()),
        }
    }

    pub fn angle(&self, t: f64) -> f64 {
        self.base() + self.relative(t)
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, AngleLaw::Fixed(_))
    }
}

/// `x` reduced to `(-pi, pi]`.
#[inline]
pub fn wrap_pi(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// `x` reduced to `[-pi/3, pi/3]`, the fundamental range of the three-fold symmetry.
#[inline]
pub fn wrap_third(x: f64) -> f64 {
    let p = TAU / 3.0;
    let y = x.rem_euclid(p);
    if y > 0.5 * p {
        y - p
    } else {
        y
    }
}

#[derive(Clone, Copy)]
pub struct ShellSurface<'a> {
    pub curve: &'a BaseCurve,
    pub law: AngleLaw,
}

/// Sampling controls for the radial suprema.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HdOptions {
    pub per_decade: usize,
    /// Radii below `t_floor * R` are not sampled; they contribute at most `t_floor * R`.
    pub t_floor: f64,
    pub refine: usize,
}

impl Default for HdOptions {
    fn default() -> Self {
        Self { per_decade: 24, t_floor: 1e-14, refine: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HdReport {
    pub value: f64,
    pub forward: f64,
    pub backward: f64,
    /// Uncertainty from the unsampled core `B_{t_floor R}`.
    pub floor: f64,
}

pub(crate) fn radial_grid(r: f64, opts: &HdOptions) -> Vec<f64> {
    let decades = -opts.t_floor.log10();
    let n = (decades * opts.per_decade as f64).ceil() as usize;
    (0..=n).map(|i| r * 10f64.powf(-(i as f64) / opts.per_decade as f64)).collect()
}

impl<'a> ShellSurface<'a> {
    pub fn new(curve: &'a BaseCurve, law: AngleLaw) -> Self {
        Self { curve, law }
    }

    /// Relative rotation between a shell of `self` at `t` and one of `other` at `tau`.
    #[inline]
    fn delta(&self, other: &ShellSurface<'_>, t: f64, tau: f64) -> f64 {
        wrap_pi(self.law.base() - other.law.base()) + self.law.relative(t) - other.law.relative(tau)
    }

    /// Distance from vertex `i` of the shell at `t` to `other ∩ B_R`.
    fn vertex_distance(&self, other: &ShellSurface<'_>, t: f64, i: usize, r: f64, prune: f64) -> f64 {
        let h0 = self.curve.rotated_distance(i, self.delta(other, t, t));
        if other.law.is_fixed() {
            return if h0 >= 0.5 * PI { t } else { t * h0.sin() };
        }
        let mut upper = t;
        if t <= r {
            upper = upper.min(2.0 * t * (0.5 * h0).sin());
        }
        if upper <= prune {
            return upper;
        }
        let lo = (t - upper).max(0.0);
        let hi = (t + upper).min(r);
        if hi <= lo {
            return upper;
        }
        let d = |tau: f64| {
            let h = self.curve.rotated_distance(i, self.delta(other, t, tau));
            let s = (0.5 * h).sin();
            ((t - tau) * (t - tau) + 4.0 * t * tau * s * s).sqrt()
        };
        let (_, m) = golden_min(&d, lo, hi, 4, 16);
        upper.min(m)
    }

    fn shell_excess(&self, other: &ShellSurface<'_>, t: f64, r: f64, prune: f64) -> f64 {
        (0..self.curve.len())
            .into_par_iter()
            .map(|i| self.vertex_distance(other, t, i, r, prune))
            .reduce(|| 0.0, f64::max)
    }

    /// `excess(self ∩ B_R, other ∩ B_R)`.
    pub fn excess(&self, other: &ShellSurface<'_>, r: f64, opts: &HdOptions) -> f64 {
        let ts = radial_grid(r, opts);
        let mut best: f64 = 0.0;
        let mut arg = 0;
        for (k, &t) in ts.iter().enumerate() {
            if t <= best {
                break;
            }
            let v = self.shell_excess(other, t, r, best);
            if v > best {
                best = v;
                arg = k;
            }
        }
        if best == 0.0 || opts.refine == 0 {
            return best;
        }
        let lo = ts.get(arg + 1).copied().unwrap_or(ts[arg]);
        let hi = if arg == 0 { ts[0] } else { ts[arg - 1] };
        let f = |t: f64| self.shell_excess(other, t, r, best);
        let (_, m) = golden_max(&f, lo, hi, 0, opts.refine);
        best.max(m)
    }

    pub fn hausdorff(&self, other: &ShellSurface<'_>, r: f64, opts: &HdOptions) -> HdReport {
        let forward = self.excess(other, r, opts);
        let backward = other.excess(self, r, opts);
        HdReport {
            value: forward.max(backward),
            forward,
            backward,
            floor: opts.t_floor * r,
        }
    }

    /// Matched-shell upper bound `sup_t 2 t sin(|Delta(t)|/2) max varsigma`.
    pub fn matched_shell_bound(&self, other: &ShellSurface<'_>, r: f64, opts: &HdOptions) -> f64 {
        let ss = self.curve.max_cyl_radius();
        let f = |t: f64| 2.0 * t * (0.5 * wrap_third(self.delta(other, t, t)).abs()).sin() * ss;
        let ts = radial_grid(r, opts);
        let (k, best) = ts
            .iter()
            .enumerate()
            .map(|(k, &t)| (k, f(t)))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let lo = ts.get(k + 1).copied().unwrap_or(ts[k]);
        let hi = if k == 0 { ts[0] } else { ts[k - 1] };
        let (_, m) = golden_max(&f, lo, hi, 0, 60);
        best.max(m).max(opts.t_floor * r * 2.0 * ss)
    }
}
