//! The base curve `Sigma_s ∩ S^2` traced by predictor-corrector continuation.

use kiddo::{ImmutableKdTree, SquaredEuclidean};

use crate::fields::{szulkin, szulkin_gradient};
use crate::{Error, Result, Vec3};

/// A closed polyline on the unit sphere with vertices on `{s = 0}`.
pub struct BaseCurve {
    pub points: Vec<Vec3>,
    /// Largest arc length between consecutive vertices (closing edge included).
    pub gap: f64,
    /// Cylindrical radius `sqrt(x^2 + y^2)` of each vertex.
    pub cyl_radius: Vec<f64>,
    tree: ImmutableKdTree<f64, 3>,
}

impl std::fmt::Debug for BaseCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BaseCurve")
            .field("len", &self.points.len())
            .field("gap", &self.gap)
            .finish()
    }
}

#[inline]
pub(crate) fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Newton projection onto `{s = 0}` along the sphere.
fn project(mut q: Vec3) -> Option<Vec3> {
    q.normalize_mut();
    for _ in 0..50 {
        let v = szulkin(&q);
        if v.abs() <= 1e-15 {
            return Some(q);
        }
        let g = szulkin_gradient(&q);
        let gt = g - q * g.dot(&q);
        let n2 = gt.norm_squared();
        if n2 < 1e-20 {
            return None;
        }
        q = (q - gt * (v / n2)).normalize();
    }
    (szulkin(&q).abs() <= 1e-13).then_some(q)
}

/// Trace the base curve from the seed `(0, 1, 0)` with arc spacing at most `target_gap`.
pub fn trace_base_curve(target_gap: f64) -> Result<BaseCurve> {
    if !(target_gap > 1e-6 && target_gap < 0.1) {
        return Err(Error::InvalidArgument(format!("target gap must lie in (1e-6, 0.1), got {target_gap}")));
    }
    let seed = Vec3::new(0.0, 1.0, 0.0);
    let h = 0.9 * target_gap;
    let max_steps = (40.0 / h) as usize;
    let mut points = vec![seed];
    let mut p = seed;
    loop {
        if points.len() > 8 && angle_between(&p, &seed) <= h {
            break;
        }
        let t = szulkin_gradient(&p).cross(&p).normalize();
        let q = project(p + t * h).ok_or_else(|| Error::Tracing(format!("corrector diverged after {} steps", points.len())))?;
        if angle_between(&q, &p) > target_gap {
            return Err(Error::Tracing("step overshoot".into()));
        }
        points.push(q);
        p = q;
        if points.len() > max_steps {
            return Err(Error::Tracing(format!("curve failed to close after {max_steps} steps")));
        }
    }
    Ok(BaseCurve::from_points(points))
}

impl BaseCurve {
    pub(crate) fn from_points(points: Vec<Vec3>) -> Self {
        let n = points.len();
        let gap = (0..n)
            .map(|i| angle_between(&points[i], &points[(i + 1) % n]))
            .fold(0.0, f64::max);
        let cyl_radius = points.iter().map(|p| p.x.hypot(p.y)).collect();
        let coords: Vec<[f64; 3]> = points.iter().map(|p| [p.x, p.y, p.z]).collect();
        let tree = ImmutableKdTree::new_from_slice(&coords);
        Self { points, gap, cyl_radius, tree }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        let n = self.points.len();
        (0..n).map(|i| angle_between(&self.points[i], &self.points[(i + 1) % n])).sum()
    }

    pub fn max_cyl_radius(&self) -> f64 {
        self.cyl_radius.iter().copied().fold(0.0, f64::max)
    }

    /// Angular distance from a unit vector to the polyline (vertices joined by
    /// great-circle arcs).
    pub fn angular_distance(&self, u: &Vec3) -> f64 {
        let n = self.points.len();
        let i = self.tree.nearest_one::<SquaredEuclidean>(&[u.x, u.y, u.z]).item as usize;
        let a = &self.points[i];
        arc_distance(u, a, &self.points[(i + n - 1) % n]).min(arc_distance(u, a, &self.points[(i + 1) % n]))
    }

    /// `angular_distance(R_phi c)` for vertex `i`.
    #[inline]
    pub fn rotated_distance(&self, i: usize, phi: f64) -> f64 {
        let c = &self.points[i];
        let (s, co) = phi.sin_cos();
        self.angular_distance(&Vec3::new(co * c.x - s * c.y, s * c.x + co * c.y, c.z))
    }
}

/// Angular distance from `u` to the great-circle arc from `a` to `b`.
fn arc_distance(u: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let n = a.cross(b);
    let nn = n.norm();
    if nn == 0.0 {
        return angle_between(u, a);
    }
    let n = n / nn;
    let up = u - n * u.dot(&n);
    // inside the wedge spanned by a and b
    if a.cross(&up).dot(&n) >= 0.0 && up.cross(b).dot(&n) >= 0.0 {
        u.dot(&n).abs().asin()
    } else {
        angle_between(u, a).min(angle_between(u, b))
    }
}
