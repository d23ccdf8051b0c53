//! Signed defining functions with certified local gradient bounds.
//!
//! The rescaled interface at log-scale `rho` is the zero set of
//! `f = s o Phi_{-theta}` (twist) or `f = z - v_rho(x, y)` (graph); the sign of
//! `f` tells the side. The gradient bounds make walk-on-spheres and corkscrew
//! steps safe: a ball of radius `|f(p)| / G` around `p` misses the interface
//! whenever `G` bounds `|grad f|` on that ball.

use super::domain::{DomainKind, Side};
use super::graph::{graph_envelope, graph_jet_at, graph_value};
use super::scale::{combined, LogScale};
use super::szulkin::{szulkin, szulkin_gradient, GRADIENT_ENVELOPE, HESSIAN_ENVELOPE};
use super::twist::{twist_frame, twist_map, MapDirection};
use crate::{Vec2, Vec3};

const SAFE_BISECTIONS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedField {
    pub kind: DomainKind,
    /// `None` evaluates the physical interface (radius `t` is radius `t`).
    pub offset: Option<LogScale>,
}

impl SignedField {
    pub fn new(kind: DomainKind, offset: Option<LogScale>) -> Self {
        Self { kind, offset }
    }

    pub fn physical(kind: DomainKind) -> Self {
        Self { kind, offset: None }
    }

    #[inline]
    pub fn value(&self, p: &Vec3) -> f64 {
        match &self.kind {
            DomainKind::TwistedSzulkin(prof) => {
                szulkin(&twist_map(prof, MapDirection::Backward, p, self.offset))
            }
            DomainKind::OscillatingGraph(amp) => p.z - graph_value(*amp, &Vec2::new(p.x, p.y), self.offset),
        }
    }

    pub fn side(&self, p: &Vec3) -> Option<Side> {
        Side::of(self.value(p))
    }

    /// Exact gradient; `None` where it does not exist (graph axis).
    pub fn gradient(&self, p: &Vec3) -> Option<Vec3> {
        match &self.kind {
            DomainKind::TwistedSzulkin(prof) => {
                let y = twist_map(prof, MapDirection::Backward, p, self.offset);
                let f = twist_frame(prof, MapDirection::Backward, p, self.offset);
                Some(f.jacobian.transpose() * szulkin_gradient(&y))
            }
            DomainKind::OscillatingGraph(amp) => {
                let q = Vec2::new(p.x, p.y);
                let r = q.norm();
                if r == 0.0 {
                    return match amp {
                        super::GraphAmplitude::Flat => Some(Vec3::z()),
                        _ => None,
                    };
                }
                let (_, g) = graph_jet_at(*amp, &q, combined(self.offset, r));
                Some(Vec3::new(-g.x, -g.y, 1.0))
            }
        }
    }

    /// Upper bound for `sup |grad f|` over `B(p, radius)`; may be infinite.
    pub fn gradient_bound(&self, p: &Vec3, radius: f64) -> f64 {
        match &self.kind {
            DomainKind::TwistedSzulkin(prof) => {
                let y = twist_map(prof, MapDirection::Backward, p, self.offset);
                let n = p.norm();
                twist_bound(n, szulkin_gradient(&y).norm(), self.twist_lipschitz(prof, n, radius), radius)
            }
            DomainKind::OscillatingGraph(amp) => {
                let n = p.x.hypot(p.y);
                let inner = n - radius;
                if inner <= 0.0 {
                    return if *amp == super::GraphAmplitude::Flat { 1.0 } else { f64::INFINITY };
                }
                let a = combined(self.offset, n + radius);
                let b = combined(self.offset, inner);
                let (sa, ss) = amp.sup(a, b);
                (1.0 + (sa + ss) * (sa + ss)).sqrt()
            }
        }
    }

    /// Radius of a ball around `p` certified to stay on one side.
    ///
    /// This is the largest `r <= cap` (to bisection accuracy) with
    /// `r gradient_bound(p, r) <= |f(p)|`, the cap being half the distance to
    /// the axis point where the bounds degenerate.
    pub fn safe_radius(&self, p: &Vec3) -> f64 {
        match &self.kind {
            DomainKind::TwistedSzulkin(prof) => self.twist_safe_radius(prof, p),
            DomainKind::OscillatingGraph(amp) => self.graph_safe_radius(*amp, p),
        }
    }

    /// `1 + sup |theta'|` over the shell met by `B(p, radius)`, a Lipschitz
    /// constant of the twist on that ball.
    fn twist_lipschitz(&self, prof: &super::TwistProfile, n: f64, radius: f64) -> f64 {
        let inner = n - radius;
        let a = combined(self.offset, n + radius);
        let b = if inner > 0.0 { combined(self.offset, inner) } else { f64::INFINITY };
        1.0 + prof.dtheta_sup(a, b)
    }

    fn twist_safe_radius(&self, prof: &super::TwistProfile, p: &Vec3) -> f64 {
        let n = p.norm();
        let y = twist_map(prof, MapDirection::Backward, p, self.offset);
        let f = szulkin(&y).abs();
        if f == 0.0 || n == 0.0 {
            return 0.0;
        }
        let gs = szulkin_gradient(&y).norm();
        let cap = 0.5 * n;
        let lip = self.twist_lipschitz(prof, n, cap);
        let fits = |r: f64| r * twist_bound(n, gs, lip, r) <= f;
        // both branches of the bound give a cubic in r that increases on r >= 0
        let local = |r: f64| r * lip * (gs + lip * r * HESSIAN_ENVELOPE * (n + lip * r)) - f;
        let local_d = |r: f64| lip * (gs + lip * r * HESSIAN_ENVELOPE * (2.0 * n + 3.0 * lip * r));
        let global = |r: f64| r * lip * GRADIENT_ENVELOPE * (n + r) * (n + r) - f;
        let global_d = |r: f64| lip * GRADIENT_ENVELOPE * (n + r) * (n + 3.0 * r);
        let mut best: f64 = 0.0;
        for (g, d, start) in [
            (&local as &dyn Fn(f64) -> f64, &local_d as &dyn Fn(f64) -> f64, f / (lip * gs.max(f64::MIN_POSITIVE))),
            (&global, &global_d, f / (lip * GRADIENT_ENVELOPE * n * n)),
        ] {
            // Newton from above the root stays above it on a convex increasing cubic
            let mut r = start.min(cap);
            if g(r) > 0.0 {
                for _ in 0..8 {
                    r -= g(r) / d(r);
                }
                r *= 1.0 - 1e-9;
            }
            if r > best && fits(r) {
                best = r;
            }
        }
        best
    }

    fn graph_safe_radius(&self, amp: super::GraphAmplitude, p: &Vec3) -> f64 {
        let f = self.value(p).abs();
        if f == 0.0 {
            return 0.0;
        }
        let cap = 0.5 * p.x.hypot(p.y);
        let mut best = 0.0;
        if cap > 0.0 {
            let g0 = self.gradient_bound(p, 0.0);
            let hi = cap.min(f / g0);
            let ok = |r: f64| {
                let g = self.gradient_bound(p, r);
                g.is_finite() && r * g <= f
            };
            if ok(hi) {
                best = hi;
            } else {
                let (mut lo, mut hi) = (0.0, hi);
                for _ in 0..SAFE_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if ok(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                best = lo;
            }
        }
        best.max(self.graph_clearance(amp, p))
    }

    /// Largest `r` (to bisection accuracy) with `|z| - r > sup_{|q| <= |q_p| + r} |v|`.
    fn graph_clearance(&self, amp: super::GraphAmplitude, p: &Vec3) -> f64 {
        let z = p.z.abs();
        let n = p.x.hypot(p.y);
        let ok = |r: f64| z - r > graph_envelope(amp, self.offset, n + r);
        if !ok(0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, z);
        for _ in 0..48 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// `lip * min(|grad s(Y)| + lip r c_H (|p| + lip r), 6 (|p| + r)^2)`: the
/// gradient of `s` along the image of the ball, bounded by its Taylor
/// expansion at the image `Y` of `p` or by the global envelope.
#[inline]
fn twist_bound(n: f64, gs: f64, lip: f64, r: f64) -> f64 {
    let local = gs + lip * r * HESSIAN_ENVELOPE * (n + lip * r);
    lip * local.min(GRADIENT_ENVELOPE * (n + r) * (n + r))
}
