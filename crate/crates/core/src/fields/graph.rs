//! The oscillating graph `v(x, y) = x a(rho)` and its rescalings.
//!
//! At log-scale offset `rho` the rescaled graph is `v_rho(q) = x a(rho')` with
//! `rho' = rho - ln|q|`. On the pure region `a = A sin A`, `A = ln rho'`.

use super::profile::GraphAmplitude;
use super::scale::{combined, LogScale, PURE_RHO};
use super::twist::MapDirection;
use crate::{Error, Mat3, Result, Vec2, Vec3};

/// Value and gradient of the rescaled graph function at `q`.
pub fn graph_jet(amp: GraphAmplitude, q: &Vec2, offset: Option<LogScale>) -> Result<(f64, Vec2)> {
    let r2 = q.norm_squared();
    if r2 == 0.0 {
        if offset.is_some() && amp == GraphAmplitude::Oscillating {
            return Err(Error::Domain("graph slope is undefined on the axis".into()));
        }
        if offset.is_none() && amp == GraphAmplitude::Oscillating {
            return Err(Error::Domain("graph gradient is unbounded at the origin".into()));
        }
        return Ok((0.0, Vec2::zeros()));
    }
    let rho = combined(offset, r2.sqrt());
    if offset.is_some() && rho <= 1.0 && amp == GraphAmplitude::Oscillating {
        return Err(Error::Domain(format!("combined log-scale {rho} <= 1")));
    }
    Ok(graph_jet_at(amp, q, rho))
}

/// As [`graph_jet`] with the combined log-scale of `|q|` supplied.
#[inline]
pub fn graph_jet_at(amp: GraphAmplitude, q: &Vec2, rho: f64) -> (f64, Vec2) {
    let (a, da) = amp.jet(rho);
    let r2 = q.norm_squared();
    let v = q.x * a;
    if r2 == 0.0 {
        return (v, Vec2::new(a, 0.0));
    }
    let k = -q.x * da / r2;
    (v, Vec2::new(a + k * q.x, k * q.y))
}

/// Value only; defined on the axis as zero.
#[inline]
pub fn graph_value(amp: GraphAmplitude, q: &Vec2, offset: Option<LogScale>) -> f64 {
    if q.x == 0.0 {
        return 0.0;
    }
    q.x * amp.jet(combined(offset, q.norm())).0
}

/// The shear `(x, y, z) -> (x, y, z +- v_rho(x, y))`; forward maps the half
/// spaces `{+-z > 0}` onto the two sides of the graph.
pub fn graph_map(amp: GraphAmplitude, direction: MapDirection, p: &Vec3, offset: Option<LogScale>) -> Vec3 {
    let v = graph_value(amp, &Vec2::new(p.x, p.y), offset);
    Vec3::new(p.x, p.y, p.z + direction.sign() * v)
}

/// Jacobian of [`graph_map`]: the identity plus `+-grad v` in the last row.
pub fn graph_map_jacobian(amp: GraphAmplitude, direction: MapDirection, p: &Vec3, offset: Option<LogScale>) -> Result<Mat3> {
    let (_, g) = graph_jet(amp, &Vec2::new(p.x, p.y), offset)?;
    let mut m = Mat3::identity();
    m[(2, 0)] = direction.sign() * g.x;
    m[(2, 1)] = direction.sign() * g.y;
    Ok(m)
}

/// Upper bound for `sup_{|q| <= t} |v_rho(q)|`.
pub fn graph_envelope(amp: GraphAmplitude, offset: Option<LogScale>, t: f64) -> f64 {
    if amp == GraphAmplitude::Flat || t <= 0.0 {
        return 0.0;
    }
    let rt = combined(offset, t);
    // t ln(rho_t) is increasing in t once rho_t exceeds the blend threshold
    let pure = rt.max(PURE_RHO).ln();
    let blend = if rt < PURE_RHO { amp.sup(rt.max(0.0), PURE_RHO).0 } else { 0.0 };
    t * pure.max(blend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const OSC: GraphAmplitude = GraphAmplitude::Oscillating;

    #[test]
    fn axis_and_zeros() {
        for y in [-0.5, 0.3, 2.0] {
            let (v, _) = graph_jet(OSC, &Vec2::new(0.0, y), Some(LogScale::new(50.0).unwrap())).unwrap();
            assert_eq!(v, 0.0);
        }
        let rho = (2.0 * PI).exp();
        let (v, _) = graph_jet(OSC, &Vec2::new(1.0, 0.0), Some(LogScale::new(rho).unwrap())).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn peak_slopes_grow() {
        let mut last = 0.0;
        for k in 0..3 {
            let a = PI / 2.0 + 2.0 * PI * k as f64;
            let (v, _) = graph_jet(OSC, &Vec2::new(1.0, 0.0), Some(LogScale::new(a.exp()).unwrap())).unwrap();
            assert!((v - a).abs() < 1e-9 * a);
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn odd() {
        let s = Some(LogScale::new(30.0).unwrap());
        let q = Vec2::new(0.3, -0.7);
        let (v, _) = graph_jet(OSC, &q, s).unwrap();
        let (w, _) = graph_jet(OSC, &(-q), s).unwrap();
        assert_eq!(v, -w);
    }

    #[test]
    fn small_combined_scale_rejected() {
        let r = graph_jet(OSC, &Vec2::new(2.0, 0.0), Some(LogScale::new(1.5).unwrap()));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn envelope_dominates() {
        let s = Some(LogScale::new(20.0).unwrap());
        for &t in &[1e-6, 1e-3, 0.5, 3.0] {
            let w = graph_envelope(OSC, s, t);
            for i in 1..=200 {
                let tau = t * i as f64 / 200.0;
                for &ang in &[0.0, 1.0, 2.5] {
                    let q = Vec2::new(tau * f64::cos(ang), tau * f64::sin(ang));
                    assert!(graph_value(OSC, &q, s).abs() <= w * (1.0 + 1e-12));
                }
            }
        }
    }
}
