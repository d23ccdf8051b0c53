//! Finite samples of rescaled interfaces and brute-force set distances.

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use rayon::prelude::*;

use super::curve::BaseCurve;
use super::shell::AngleLaw;
use crate::fields::{graph_jet_at, DomainKind, GraphAmplitude, LogScale, TwistProfile, PURE_RHO};
use crate::{Error, Result, Vec2, Vec3};

/// A point sample of `(Sigma - Q)/r ∩ B_R` with a certified sampling gap.
#[derive(Clone, Debug, Default)]
pub struct PointCloud {
    pub points: Vec<Vec3>,
    pub ball_radius: f64,
    pub log_scale: Option<LogScale>,
    /// Every surface point of the sampled region lies within `gap` of a sample.
    pub gap: f64,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>, ball_radius: f64, gap: f64) -> Self {
        Self { points, ball_radius, log_scale: None, gap }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points with `|p| <= r`, up to a relative rounding slack of `1e-12`.
    pub fn clip(&self, r: f64) -> PointCloud {
        let reach = r * (1.0 + 1e-12);
        PointCloud {
            points: self.points.iter().copied().filter(|p| p.norm() <= reach).collect(),
            ball_radius: r.min(self.ball_radius),
            log_scale: self.log_scale,
            gap: self.gap,
        }
    }

    pub fn scaled(&self, lambda: f64) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|p| p * lambda).collect(),
            ball_radius: self.ball_radius * lambda,
            log_scale: self.log_scale,
            gap: self.gap * lambda,
        }
    }

    pub fn rotated(&self, phi: f64) -> PointCloud {
        let (s, c) = phi.sin_cos();
        PointCloud {
            points: self.points.iter().map(|p| Vec3::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z)).collect(),
            ..self.clone()
        }
    }
}

const BRUTE_FORCE_MAX: usize = 256;

/// Nearest-point index over a cloud; small clouds are scanned directly.
pub enum CloudIndex<'a> {
    Scan(&'a [Vec3]),
    Tree(ImmutableKdTree<f64, 3>),
}

impl<'a> CloudIndex<'a> {
    pub fn new(points: &'a [Vec3]) -> Self {
        if points.len() <= BRUTE_FORCE_MAX {
            return CloudIndex::Scan(points);
        }
        let coords: Vec<[f64; 3]> = points.iter().map(|p| [p.x, p.y, p.z]).collect();
        CloudIndex::Tree(ImmutableKdTree::new_from_slice(&coords))
    }

    pub fn nearest_distance(&self, q: &Vec3) -> f64 {
        match self {
            CloudIndex::Scan(points) => points.iter().map(|p| (p - q).norm()).fold(f64::INFINITY, f64::min),
            CloudIndex::Tree(tree) => tree.nearest_one::<SquaredEuclidean>(&[q.x, q.y, q.z]).distance.sqrt(),
        }
    }
}

/// `sup_{s in S} inf_{t in T} |s - t|`; zero for empty `S`.
pub fn excess(s: &PointCloud, t: &PointCloud) -> Result<f64> {
    if s.is_empty() {
        return Ok(0.0);
    }
    if t.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let grid = CloudIndex::new(&t.points);
    Ok(s.points.par_iter().map(|p| grid.nearest_distance(p)).reduce(|| 0.0, f64::max))
}

/// Hausdorff distance of the two clouds clipped to `B_R`.
pub fn hausdorff_in_ball(s: &PointCloud, t: &PointCloud, r: f64) -> Result<f64> {
    let (a, b) = (s.clip(r), t.clip(r));
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyTarget);
    }
    Ok(excess(&a, &b)?.max(excess(&b, &a)?))
}

/// Sample `Sigma_rho ∩ (B_R \ B_{t_min})` plus the origin.
pub fn sample_interface(
    curve: &BaseCurve,
    kind: &DomainKind,
    scale: LogScale,
    r: f64,
    t_min: f64,
    target_gap: f64,
) -> Result<PointCloud> {
    if !(t_min > 0.0 && t_min < r) {
        return Err(Error::InvalidArgument(format!("need 0 < t_min < R, got t_min={t_min}, R={r}")));
    }
    match kind {
        DomainKind::TwistedSzulkin(profile) => {
            let law = if profile.is_none() { AngleLaw::rotated(0.0) } else { AngleLaw::twisted(*profile, scale, 0.0)? };
            if !profile.is_none() && scale.at(r) < PURE_RHO {
                return Err(Error::Domain(format!(
                    "combined log-scale {} at t=R lies below ln 100",
                    scale.at(r)
                )));
            }
            let mut cloud = sample_shells(curve, &law, r, t_min, target_gap);
            cloud.log_scale = Some(scale);
            Ok(cloud)
        }
        DomainKind::OscillatingGraph(amp) => {
            if *amp == GraphAmplitude::Oscillating && scale.at(r) < PURE_RHO {
                return Err(Error::Domain(format!(
                    "combined log-scale {} at |q|=R lies below ln 100",
                    scale.at(r)
                )));
            }
            sample_graph(*amp, scale, r, t_min, target_gap)
        }
    }
}

/// Shell assembly `{t R_{a(t)} c}` with shells at spacing at most `target_gap`.
pub fn sample_shells(curve: &BaseCurve, law: &AngleLaw, r: f64, t_min: f64, target_gap: f64) -> PointCloud {
    let n_shells = ((r - t_min) / target_gap).ceil().max(1.0) as usize;
    let dt = (r - t_min) / n_shells as f64;
    let ts: Vec<f64> = (0..=n_shells).map(|i| t_min + dt * i as f64).collect();
    let n = curve.len();
    let shells: Vec<(Vec<Vec3>, f64)> = ts
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let stride = ((target_gap / (t * curve.gap)).floor() as usize).clamp(1, n / 8);
            let alpha = law.angle(t);
            let (s, c) = alpha.sin_cos();
            let pts: Vec<Vec3> = (0..n)
                .step_by(stride)
                .map(|i| {
                    let p = curve.points[i] * t;
                    Vec3::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z)
                })
                .collect();
            // worst arc between kept vertices, including the wrap-around
            let last = (n - 1) / stride * stride;
            let span = stride.max(n - last) as f64 * curve.gap * t;
            let twist = if k + 1 < ts.len() { (law.angle(ts[k + 1]) - alpha).abs() * t } else { 0.0 };
            (pts, 0.5 * span + twist)
        })
        .collect();
    let mut gap: f64 = 0.0;
    let mut points = vec![Vec3::zeros()];
    for (pts, g) in shells {
        gap = gap.max(g);
        points.extend(pts);
    }
    PointCloud { points, ball_radius: r, log_scale: None, gap: gap + 0.5 * dt }
}

fn sample_graph(amp: GraphAmplitude, scale: LogScale, r: f64, t_min: f64, target_gap: f64) -> Result<PointCloud> {
    let (sa, ss) = amp.sup(scale.at(r), scale.at(t_min));
    let slope = sa + ss;
    let step = target_gap / (1.0 + slope * slope).sqrt();
    let n_r = ((r - t_min) / step).ceil().max(1.0) as usize;
    let dr = (r - t_min) / n_r as f64;
    let rings: Vec<Vec<Vec3>> = (0..=n_r)
        .into_par_iter()
        .map(|k| {
            let rad = t_min + dr * k as f64;
            let n_a = ((std::f64::consts::TAU * rad / step).ceil() as usize).max(8);
            let rho = scale.at(rad);
            (0..n_a)
                .filter_map(|j| {
                    let a = std::f64::consts::TAU * j as f64 / n_a as f64;
                    let q = Vec2::new(rad * a.cos(), rad * a.sin());
                    let (v, _) = graph_jet_at(amp, &q, rho);
                    let p = Vec3::new(q.x, q.y, v);
                    (p.norm() <= r).then_some(p)
                })
                .collect()
        })
        .collect();
    let mut points = vec![Vec3::zeros()];
    for ring in rings {
        points.extend(ring);
    }
    Ok(PointCloud {
        points,
        ball_radius: r,
        log_scale: Some(scale),
        gap: step * (1.0 + slope * slope).sqrt(),
    })
}

/// The untwisted cone `R_beta Sigma_s ∩ B_R` as a cloud.
pub fn sample_rotated_cone(curve: &BaseCurve, beta: f64, r: f64, t_min: f64, target_gap: f64) -> PointCloud {
    sample_shells(curve, &AngleLaw::rotated(beta), r, t_min, target_gap)
}

pub fn sample_profile_shells(
    curve: &BaseCurve,
    profile: TwistProfile,
    scale: LogScale,
    shift: f64,
    r: f64,
    t_min: f64,
    target_gap: f64,
) -> Result<PointCloud> {
    let law = AngleLaw::twisted(profile, scale, shift)?;
    let mut c = sample_shells(curve, &law, r, t_min, target_gap);
    c.log_scale = Some(scale);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::szulkin;
    use crate::surfgeo::trace_base_curve;

    fn cloud(pts: &[[f64; 3]]) -> PointCloud {
        PointCloud::new(pts.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(), 2.0, 0.1)
    }

    #[test]
    fn excess_basics() {
        let s = cloud(&[[1.0, 0.0, 0.0]]);
        let o = cloud(&[[0.0, 0.0, 0.0]]);
        assert_eq!(excess(&s, &o).unwrap(), 1.0);
        assert_eq!(excess(&s, &s).unwrap(), 0.0);
        assert_eq!(excess(&PointCloud::default(), &o).unwrap(), 0.0);
        assert!(matches!(excess(&s, &PointCloud::default()), Err(Error::EmptyTarget)));
    }

    #[test]
    fn untwisted_cloud_lies_on_szulkin_cone() {
        let c = trace_base_curve(0.01).unwrap();
        let kind = DomainKind::TwistedSzulkin(TwistProfile::none());
        let cl = sample_interface(&c, &kind, LogScale::new(50.0).unwrap(), 1.5, 0.05, 0.05).unwrap();
        for p in &cl.points {
            assert!(szulkin(p).abs() <= 1e-8);
            assert!(p.norm() <= 1.5 + 1e-12);
        }
    }

    #[test]
    fn shell_at_unit_radius_returns_to_base_curve() {
        let rho = (2.0 * std::f64::consts::PI).exp();
        let law = AngleLaw::twisted(TwistProfile::log_log(), LogScale::new(rho).unwrap(), 0.0).unwrap();
        let alpha = law.angle(1.0);
        assert!(super::super::shell::wrap_pi(alpha).abs() < 1e-6);
    }

    #[test]
    fn rejects_impure_scales() {
        let c = trace_base_curve(0.05).unwrap();
        let kind = DomainKind::TwistedSzulkin(TwistProfile::log_log());
        assert!(sample_interface(&c, &kind, LogScale::new(4.0).unwrap(), 1.0, 0.1, 0.1).is_err());
    }
}
