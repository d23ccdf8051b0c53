//! Surface measure of the rescaled interface in balls.

use std::f64::consts::TAU;

use rayon::prelude::*;

use super::curve::BaseCurve;
use super::shell::AngleLaw;
use crate::fields::{graph_jet_at, DomainKind, LogScale, PURE_RHO};
use crate::{Error, Result, Vec2, Vec3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaSample {
    pub r: f64,
    pub area: f64,
    /// `area / r^2`.
    pub ratio: f64,
}

type Tri = [Vec3; 3];

#[inline]
fn tri_area(t: &Tri) -> f64 {
    0.5 * (t[1] - t[0]).cross(&(t[2] - t[0])).norm()
}

/// Area of `t ∩ B(c, r)` by recursive subdivision of straddling triangles.
fn clipped_area(t: &Tri, c: &Vec3, r: f64, depth: u32) -> f64 {
    let inside = t.iter().filter(|p| (*p - c).norm() <= r).count();
    if inside == 3 {
        return tri_area(t);
    }
    let centroid = (t[0] + t[1] + t[2]) / 3.0;
    let reach = t.iter().map(|p| (p - centroid).norm()).fold(0.0, f64::max);
    let dc = (centroid - c).norm();
    if inside == 0 && dc - reach > r {
        return 0.0;
    }
    if depth == 0 {
        return if dc <= r { tri_area(t) } else { 0.0 };
    }
    let m01 = (t[0] + t[1]) * 0.5;
    let m12 = (t[1] + t[2]) * 0.5;
    let m20 = (t[2] + t[0]) * 0.5;
    [[t[0], m01, m20], [m01, t[1], m12], [m20, m12, t[2]], [m01, m12, m20]]
        .iter()
        .map(|s| clipped_area(s, c, r, depth - 1))
        .sum()
}

fn shell_radii(radii: &[f64], reach: f64, per_decade: usize) -> Vec<f64> {
    let lo = radii.iter().copied().fold(f64::INFINITY, f64::min) * 1e-3;
    let n = ((reach / lo).log10() * per_decade as f64).ceil() as usize;
    let mut ts: Vec<f64> = (0..=n).map(|i| lo * (reach / lo).powf(i as f64 / n as f64)).collect();
    ts.extend(radii.iter().copied().filter(|&r| r <= reach));
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
    ts
}

fn twist_mesh(curve: &BaseCurve, law: &AngleLaw, ts: &[f64], stride: usize) -> Vec<Tri> {
    let idx: Vec<usize> = (0..curve.len()).step_by(stride).collect();
    let shell = |t: f64| -> Vec<Vec3> {
        let (s, c) = law.angle(t).sin_cos();
        idx.iter()
            .map(|&i| {
                let p = curve.points[i] * t;
                Vec3::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z)
            })
            .collect()
    };
    let m = idx.len();
    let mut tris = Vec::with_capacity(2 * m * ts.len());
    let mut prev = shell(ts[0]);
    for j in 0..m {
        tris.push([Vec3::zeros(), prev[j], prev[(j + 1) % m]]);
    }
    for &t in &ts[1..] {
        let cur = shell(t);
        for j in 0..m {
            let k = (j + 1) % m;
            tris.push([prev[j], prev[k], cur[k]]);
            tris.push([prev[j], cur[k], cur[j]]);
        }
        prev = cur;
    }
    tris
}

fn graph_mesh(amp: crate::fields::GraphAmplitude, scale: LogScale, ts: &[f64], n_a: usize) -> Vec<Tri> {
    let ring = |t: f64| -> Vec<Vec3> {
        let rho = scale.at(t);
        (0..n_a)
            .map(|j| {
                let a = TAU * j as f64 / n_a as f64;
                let q = Vec2::new(t * a.cos(), t * a.sin());
                Vec3::new(q.x, q.y, graph_jet_at(amp, &q, rho).0)
            })
            .collect()
    };
    let mut tris = Vec::new();
    let mut prev = ring(ts[0]);
    for j in 0..n_a {
        tris.push([Vec3::zeros(), prev[j], prev[(j + 1) % n_a]]);
    }
    for &t in &ts[1..] {
        let cur = ring(t);
        for j in 0..n_a {
            let k = (j + 1) % n_a;
            tris.push([prev[j], prev[k], cur[k]]);
            tris.push([prev[j], cur[k], cur[j]]);
        }
        prev = cur;
    }
    tris
}

/// `area(Sigma_rho ∩ B(Q, r)) / r^2` for each requested radius.
///
/// `resolution` is the target mesh edge relative to the radius; 0.01 is a
/// reasonable default.
pub fn area_ratio_probe(
    curve: &BaseCurve,
    kind: &DomainKind,
    scale: LogScale,
    q: &Vec3,
    radii: &[f64],
    resolution: f64,
) -> Result<Vec<AreaSample>> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    let reach = radii.iter().copied().fold(0.0, f64::max) + q.norm();
    let per_decade = (2.3 / resolution).ceil() as usize;
    let ts = shell_radii(radii, reach, per_decade);
    let tris = match kind {
        DomainKind::TwistedSzulkin(profile) => {
            let law = if profile.is_none() {
                AngleLaw::rotated(0.0)
            } else {
                if scale.at(reach) < PURE_RHO {
                    return Err(Error::Domain(format!("combined log-scale {} below ln 100", scale.at(reach))));
                }
                AngleLaw::twisted(*profile, scale, 0.0)?
            };
            let stride = ((resolution / curve.gap).floor() as usize).max(1);
            twist_mesh(curve, &law, &ts, stride)
        }
        DomainKind::OscillatingGraph(amp) => {
            if *amp == crate::fields::GraphAmplitude::Oscillating && scale.at(reach) < PURE_RHO {
                return Err(Error::Domain(format!("combined log-scale {} below ln 100", scale.at(reach))));
            }
            let n_a = (TAU / resolution).ceil() as usize;
            let lin: Vec<f64> = {
                let n = (1.0 / resolution).ceil() as usize;
                let mut v: Vec<f64> = (1..=n).map(|i| reach * i as f64 / n as f64).collect();
                v.extend(radii.iter().copied());
                v.extend(ts.iter().copied().filter(|&t| t < reach / n as f64));
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            };
            graph_mesh(*amp, scale, &lin, n_a)
        }
    };
    if tris.iter().any(|t| t.iter().any(|p| !p.iter().all(|c| c.is_finite()))) {
        return Err(Error::Degenerate("non-finite mesh vertex".into()));
    }
    Ok(radii
        .iter()
        .map(|&r| {
            let area: f64 = tris.par_iter().map(|t| clipped_area(t, q, r, 8)).sum();
            AreaSample { r, area, ratio: area / (r * r) }
        })
        .collect())
}
