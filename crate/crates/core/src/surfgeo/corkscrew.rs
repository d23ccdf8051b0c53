//! Quantitative corkscrew probe.

use rayon::prelude::*;

use crate::fields::{Side, SignedField};
use crate::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorkscrewResult {
    /// `s / clearance` of the best point on each side; infinite if none found.
    pub m_plus: f64,
    pub m_minus: f64,
    pub x_plus: Option<Vec3>,
    pub x_minus: Option<Vec3>,
}

impl CorkscrewResult {
    /// The worse of the two sides.
    pub fn m(&self) -> f64 {
        self.m_plus.max(self.m_minus)
    }
}

fn clearance(field: &SignedField, q: &Vec3, s: f64, x: &Vec3, side: Side) -> f64 {
    let d = (x - q).norm();
    if d >= s || field.side(x) != Some(side) {
        return 0.0;
    }
    field.safe_radius(x).min(s - d)
}

fn refine(field: &SignedField, q: &Vec3, s: f64, side: Side, start: Vec3) -> (Vec3, f64) {
    let mut x = start;
    let mut best = clearance(field, q, s, &x, side);
    let mut step = s / 16.0;
    while step > s / 2048.0 {
        let mut moved = false;
        for i in 0..3 {
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[i] += sign * step;
                let c = clearance(field, q, s, &y, side);
                if c > best {
                    best = c;
                    x = y;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (x, best)
}

/// Search `B(Q, s)` for the point of largest certified clearance on each side.
pub fn corkscrew_probe(field: &SignedField, q: &Vec3, s: f64) -> CorkscrewResult {
    let n = 8i32;
    let h = s / n as f64;
    let cands: Vec<Vec3> = (-n..=n)
        .flat_map(|i| (-n..=n).flat_map(move |j| (-n..=n).map(move |k| (i, j, k))))
        .map(|(i, j, k)| q + Vec3::new(i as f64, j as f64, k as f64) * h)
        .filter(|x| (x - q).norm() < s)
        .collect();
    let side_best = |side: Side| -> (f64, Option<Vec3>) {
        let scored: Vec<(f64, Vec3)> = cands
            .par_iter()
            .map(|x| (clearance(field, q, s, x, side), *x))
            .filter(|(c, _)| *c > 0.0)
            .collect();
        let Some(&(_, x0)) = scored.iter().max_by(|a, b| a.0.total_cmp(&b.0)) else {
            return (f64::INFINITY, None);
        };
        let (x, c) = refine(field, q, s, side, x0);
        (s / c, Some(x))
    };
    let (m_plus, x_plus) = side_best(Side::Plus);
    let (m_minus, x_minus) = side_best(Side::Minus);
    CorkscrewResult { m_plus, m_minus, x_plus, x_minus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{DomainKind, GraphAmplitude};

    #[test]
    fn half_space_corkscrew_is_two() {
        let f = SignedField::physical(DomainKind::OscillatingGraph(GraphAmplitude::Flat));
        let r = corkscrew_probe(&f, &Vec3::zeros(), 1.0);
        assert!((r.m_plus - 2.0).abs() < 0.02, "{}", r.m_plus);
        assert!((r.m_minus - 2.0).abs() < 0.02);
    }
}
