//! Uniform grids over the fixed template domains.

use crate::fields::{szulkin, Side};
use crate::{Error, Result, Vec3};

/// Node-centred uniform grid, symmetric about the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub dims: [usize; 3],
    pub origin: Vec3,
    pub h: f64,
}

impl Grid {
    #[inline]
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.dims[0];
        let j = (idx / self.dims[0]) % self.dims[1];
        let k = idx / (self.dims[0] * self.dims[1]);
        [i, j, k]
    }

    /// Position of the point with fractional grid coordinates `c`.
    #[inline]
    pub fn at(&self, c: [f64; 3]) -> Vec3 {
        Vec3::new(
            self.origin.x + c[0] * self.h,
            self.origin.y + c[1] * self.h,
            self.origin.z + c[2] * self.h,
        )
    }

    #[inline]
    pub fn pos(&self, c: [usize; 3]) -> Vec3 {
        self.at([c[0] as f64, c[1] as f64, c[2] as f64])
    }

    /// Index of the node mirrored through the origin.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        let [i, j, k] = self.coords(idx);
        self.index(self.dims[0] - 1 - i, self.dims[1] - 1 - j, self.dims[2] - 1 - k)
    }
}

/// Which boundary a cut face meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cut {
    Interface,
    Outer,
}

/// Fixed template domain `Omega_template ∩ box` for one side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Template {
    /// `{+- s > 0} ∩ B_K`, optionally minus `B_{r_in}`.
    SzulkinBall { side: Side, k: f64, r_in: Option<f64> },
    /// `{+- z > 0} ∩ [-K, K]^3`.
    HalfSpaceBox { side: Side, k: f64 },
}

impl Template {
    pub fn side(&self) -> Side {
        match self {
            Template::SzulkinBall { side, .. } | Template::HalfSpaceBox { side, .. } => *side,
        }
    }

    pub fn extent(&self) -> f64 {
        match self {
            Template::SzulkinBall { k, .. } | Template::HalfSpaceBox { k, .. } => *k,
        }
    }

    /// Grid for spacing `h`; `h` must divide `K`.
    pub fn grid(&self, h: f64) -> Result<Grid> {
        let k = self.extent();
        let m = k / h;
        if !(h > 0.0) || (m - m.round()).abs() > 1e-9 || m.round() < 2.0 {
            return Err(Error::InvalidArgument(format!("grid spacing {h} must divide K = {k}")));
        }
        let m = m.round() as usize;
        Ok(match self {
            Template::SzulkinBall { .. } => Grid { dims: [2 * m + 1; 3], origin: Vec3::new(-k, -k, -k), h },
            // offset horizontally so that the axis carries no node
            Template::HalfSpaceBox { .. } => Grid {
                dims: [2 * m, 2 * m, 2 * m + 1],
                origin: Vec3::new(-k + 0.5 * h, -k + 0.5 * h, -k),
                h,
            },
        })
    }

    /// Signed level whose positive set is this side of the interface.
    #[inline]
    pub fn level(&self, x: &Vec3) -> f64 {
        match self {
            Template::SzulkinBall { side, .. } => side.sign() * szulkin(x),
            Template::HalfSpaceBox { side, .. } => side.sign() * x.z,
        }
    }

    /// Strictly inside the bounded region (ball, annulus or box).
    #[inline]
    pub fn in_region(&self, x: &Vec3) -> bool {
        match self {
            Template::SzulkinBall { k, r_in, .. } => {
                let n2 = x.norm_squared();
                n2 < k * k && r_in.map_or(true, |r| n2 > r * r)
            }
            Template::HalfSpaceBox { k, .. } => x.x.abs() < *k && x.y.abs() < *k && x.z.abs() < *k,
        }
    }

    #[inline]
    pub fn is_active(&self, x: &Vec3) -> bool {
        self.in_region(x) && self.level(x) > 0.0
    }

    /// Fraction `lambda in (0, 1]` of the step `x -> x + d` at which the segment
    /// first leaves the domain, with the kind of boundary met.
    pub fn exit(&self, x: &Vec3, d: &Vec3) -> (f64, Cut) {
        let mut best = (1.0, Cut::Interface);
        let y = x + d;
        if self.level(&y) <= 0.0 {
            // bisection on the level along the segment
            let (mut a, mut b) = (0.0, 1.0);
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if self.level(&(x + d * m)) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            best = (0.5 * (a + b), Cut::Interface);
        }
        if !self.in_region(&y) {
            let lam = match self {
                Template::SzulkinBall { k, r_in, .. } => {
                    let mut l = sphere_exit(x, d, *k, true);
                    if let Some(r) = r_in {
                        l = l.min(sphere_exit(x, d, *r, false));
                    }
                    l
                }
                Template::HalfSpaceBox { k, .. } => {
                    let mut l: f64 = 1.0;
                    for a in 0..3 {
                        if d[a] != 0.0 {
                            let bound = if d[a] > 0.0 { *k } else { -*k };
                            let t = (bound - x[a]) / d[a];
                            if t > 0.0 {
                                l = l.min(t);
                            }
                        }
                    }
                    l
                }
            };
            if lam < best.0 || (lam == best.0 && best.1 == Cut::Interface && self.level(&y) > 0.0) {
                best = (lam, Cut::Outer);
            }
        }
        best
    }
}

/// Smallest `lambda in (0, 1]` with `|x + lambda d| = r`, leaving the ball
/// (`outward`) or entering it.
fn sphere_exit(x: &Vec3, d: &Vec3, r: f64, outward: bool) -> f64 {
    let a = d.norm_squared();
    let b = 2.0 * x.dot(d);
    let c = x.norm_squared() - r * r;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return 1.0;
    }
    let sq = disc.sqrt();
    let lam = if outward { (-b + sq) / (2.0 * a) } else { (-b - sq) / (2.0 * a) };
    if lam > 0.0 && lam <= 1.0 {
        lam
    } else {
        1.0
    }
}
