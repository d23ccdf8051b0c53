//! Interface gradient ratios of paired conjugated solutions.

use crate::fields::{graph_frame, szulkin_gradient, twist_frame, DomainKind, MapDirection, Side};
use crate::{Error, Result, Vec2, Vec3};

use super::solve::GridSolution;

/// One interface sample with both one-sided normal slopes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioSample {
    pub point: Vec3,
    pub slope_plus: f64,
    pub slope_minus: f64,
    /// `|DPhi grad u+| / |DPhi grad u-|`.
    pub ratio: f64,
    /// `| |DPhi n| / |n| - 1 |` for the graph case, zero for the twist.
    pub cancellation: f64,
}

impl RatioSample {
    pub fn log_ratio(&self) -> f64 {
        self.ratio.ln()
    }
}

const CANCELLATION_TOL: f64 = 1e-12;

fn unit_normal(kind: &DomainKind, q: &Vec3) -> Vec3 {
    match kind {
        DomainKind::TwistedSzulkin(_) => szulkin_gradient(q).normalize(),
        DomainKind::OscillatingGraph(_) => Vec3::z(),
    }
}

/// Second-order one-sided slope `(4u(d) - u(2d)) / 2d` along `dir`.
fn one_sided_slope(sol: &GridSolution, q: &Vec3, dir: &Vec3, offsets: &[f64]) -> Option<f64> {
    let h = sol.grid.h;
    offsets.iter().find_map(|&m| {
        let d = m * h;
        let u1 = sol.interpolate(&(q + dir * d))?;
        let u2 = sol.interpolate(&(q + dir * (2.0 * d)))?;
        Some((4.0 * u1 - u2) / (2.0 * d))
    })
}

/// Gradient ratios at interface points `samples` of the template.
///
/// `plus` and `minus` must come from the same grid and scale. The slopes are
/// taken along the template normal, so both gradients are parallel and the
/// `DPhi` factor drops out of the ratio; it is still applied, and in the graph
/// case the identity `DPhi e3 = e3` is checked to `1e-12`.
pub fn interface_gradient_ratio(plus: &GridSolution, minus: &GridSolution, samples: &[Vec3]) -> Result<Vec<RatioSample>> {
    let (sp, sm) = (&plus.spec, &minus.spec);
    if sp.side != Side::Plus || sm.side != Side::Minus {
        return Err(Error::InvalidArgument("expected a plus and a minus solution".into()));
    }
    if sp.kind != sm.kind || sp.scale != sm.scale || plus.grid != minus.grid {
        return Err(Error::InvalidArgument("solutions do not share grid and scale".into()));
    }
    let kind = sp.kind;
    let h = plus.grid.h;
    let offsets: &[f64] = if kind.is_twist() { &[2.0, 3.0] } else { &[1.0] };
    let mut out = Vec::with_capacity(samples.len());
    for q in samples {
        let level = match kind {
            DomainKind::TwistedSzulkin(_) => crate::fields::szulkin(q) / szulkin_gradient(q).norm().max(f64::MIN_POSITIVE),
            DomainKind::OscillatingGraph(_) => q.z,
        };
        if !(level.abs() <= 1e-9 * h.max(1.0)) {
            return Err(Error::NotOnInterface(format!("{q:?} has level {level:e}")));
        }
        let n = unit_normal(&kind, q);
        let missing = || Error::NotOnInterface(format!("no active stencil next to {q:?}"));
        let a_plus = one_sided_slope(plus, q, &n, offsets).ok_or_else(missing)?;
        let a_minus = one_sided_slope(minus, q, &(-n), offsets).ok_or_else(missing)?;
        let (jac, cancellation) = match kind {
            DomainKind::TwistedSzulkin(profile) => {
                (twist_frame(&profile, MapDirection::Forward, q, Some(sp.scale)).jacobian, 0.0)
            }
            DomainKind::OscillatingGraph(amp) => {
                let g = graph_frame(amp, &Vec2::new(q.x, q.y), Some(sp.scale))?.jacobian;
                let j = g.try_inverse().ok_or_else(|| Error::Degenerate("singular graph frame".into()))?;
                let image = j * Vec3::z();
                let c = (image - Vec3::z()).amax().max((image.norm() - 1.0).abs());
                if c > CANCELLATION_TOL {
                    return Err(Error::Precision(format!("DPhi e3 deviates from e3 by {c:e}")));
                }
                (j, c)
            }
        };
        let gp = jac * (n * a_plus);
        let gm = jac * (n * a_minus);
        out.push(RatioSample {
            point: *q,
            slope_plus: a_plus,
            slope_minus: a_minus,
            ratio: gp.norm() / gm.norm(),
            cancellation,
        });
    }
    Ok(out)
}

/// `max |log ratio|` over the samples.
pub fn max_log_ratio(samples: &[RatioSample]) -> f64 {
    samples.iter().map(|s| s.log_ratio().abs()).fold(0.0, f64::max)
}

/// `max |log ratio - log reference|` over paired samples.
pub fn max_log_ratio_against(samples: &[RatioSample], reference: &[RatioSample]) -> f64 {
    samples
        .iter()
        .zip(reference)
        .map(|(s, r)| (s.log_ratio() - r.log_ratio()).abs())
        .fold(0.0, f64::max)
}

/// Interface points `t c` on the base cone for `t` in `radii`, using every
/// `stride`-th curve vertex.
pub fn cone_samples(curve: &[Vec3], radii: &[f64], stride: usize) -> Vec<Vec3> {
    let stride = stride.max(1);
    radii
        .iter()
        .flat_map(|&t| curve.iter().step_by(stride).map(move |c| c * t))
        .collect()
}

/// Plane points at radii `radii` and `count` equally spaced angles.
pub fn plane_samples(radii: &[f64], count: usize) -> Vec<Vec3> {
    radii
        .iter()
        .flat_map(|&t| {
            (0..count).map(move |j| {
                let a = std::f64::consts::TAU * (j as f64 + 0.5) / count as f64;
                Vec3::new(t * a.cos(), t * a.sin(), 0.0)
            })
        })
        .collect()
}
