//! Rotation laws `theta(rho)` and the graph amplitude `a(rho)`.
//!
//! Both are written as functions of the log-scale `rho = -ln r`. On the pure
//! region `rho >= ln 100` they follow their closed-form law exactly; on
//! `[0, ln 100]` a C^1 cubic Hermite blend joins the law to zero with zero
//! slope at `rho = 0`; for `rho <= 0` (that is `r >= 1`) they vanish.

use std::f64::consts::TAU;

use super::scale::{LogScale, MAX_RHO, MAX_THETA, PURE_RHO};
use crate::{Error, Result};

/// Cubic `c2 rho^2 + c3 rho^3` on `[0, PURE_RHO]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteBlend {
    c2: f64,
    c3: f64,
}

impl HermiteBlend {
    /// Blend matching value 0 and slope 0 at `rho = 0`, value `y1` and slope
    /// `m1` at `rho = PURE_RHO`.
    pub fn to(y1: f64, m1: f64) -> Self {
        let l = PURE_RHO;
        Self {
            c2: 3.0 * y1 / (l * l) - m1 / l,
            c3: -2.0 * y1 / (l * l * l) + m1 / (l * l),
        }
    }

    #[inline]
    pub fn value(&self, rho: f64) -> f64 {
        rho * rho * (self.c2 + self.c3 * rho)
    }

    #[inline]
    pub fn slope(&self, rho: f64) -> f64 {
        rho * (2.0 * self.c2 + 3.0 * self.c3 * rho)
    }

    #[inline]
    pub fn curvature(&self, rho: f64) -> f64 {
        2.0 * self.c2 + 6.0 * self.c3 * rho
    }

    /// Sup of `|value|` over `[a, b]` inside the blend interval.
    fn value_sup(&self, a: f64, b: f64) -> f64 {
        let mut m = self.value(a).abs().max(self.value(b).abs());
        // critical points: rho = 0 and rho = -2 c2 / (3 c3)
        if self.c3 != 0.0 {
            let c = -2.0 * self.c2 / (3.0 * self.c3);
            if c > a && c < b {
                m = m.max(self.value(c).abs());
            }
        }
        m
    }

    /// Sup of `|slope|` over `[a, b]` inside the blend interval.
    fn slope_sup(&self, a: f64, b: f64) -> f64 {
        let mut m = self.slope(a).abs().max(self.slope(b).abs());
        if self.c3 != 0.0 {
            let c = -self.c2 / (3.0 * self.c3);
            if c > a && c < b {
                m = m.max(self.slope(c).abs());
            }
        }
        m
    }

    /// True when the blend is non-decreasing on `[0, PURE_RHO]`.
    pub fn is_monotone(&self) -> bool {
        self.slope(0.0) >= 0.0
            && self.slope(PURE_RHO) >= 0.0
            && (self.c3 == 0.0 || {
                let c = -self.c2 / (3.0 * self.c3);
                !(c > 0.0 && c < PURE_RHO) || self.slope(c) >= 0.0
            })
    }
}

/// The rotation law of a twisted Szulkin domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwistLaw {
    /// `theta = ln rho`, i.e. `theta(r) = log(-log r)`.
    LogLog,
    /// `theta = rho^p`.
    PowerLaw(f64),
    /// No twist.
    None,
}

impl TwistLaw {
    fn pure(self, rho: f64) -> f64 {
        match self {
            TwistLaw::LogLog => rho.ln(),
            TwistLaw::PowerLaw(p) => rho.powf(p),
            TwistLaw::None => 0.0,
        }
    }

    fn pure_slope(self, rho: f64) -> f64 {
        match self {
            TwistLaw::LogLog => 1.0 / rho,
            TwistLaw::PowerLaw(p) => p * rho.powf(p - 1.0),
            TwistLaw::None => 0.0,
        }
    }

    fn pure_curvature(self, rho: f64) -> f64 {
        match self {
            TwistLaw::LogLog => -1.0 / (rho * rho),
            TwistLaw::PowerLaw(p) => p * (p - 1.0) * rho.powf(p - 2.0),
            TwistLaw::None => 0.0,
        }
    }
}

impl std::fmt::Display for TwistLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TwistLaw::LogLog => write!(f, "loglog"),
            TwistLaw::PowerLaw(p) => write!(f, "power:{p}"),
            TwistLaw::None => write!(f, "none"),
        }
    }
}

impl std::str::FromStr for TwistLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "loglog" | "log-log" => Ok(TwistLaw::LogLog),
            "none" | "off" => Ok(TwistLaw::None),
            _ => {
                let p = s
                    .strip_prefix("power:")
                    .or_else(|| s.strip_prefix("p="))
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown twist law '{s}'")))?;
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad exponent '{p}'")))?;
                TwistProfile::power(p).map(|t| t.law())
            }
        }
    }
}

/// A rotation law together with its interpolation to zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistProfile {
    law: TwistLaw,
    blend: HermiteBlend,
}

/// Text recorded in manifests to identify the interpolation.
pub const INTERPOLATION_SPEC: &str =
    "cubic Hermite in rho on [0, ln 100]: value 0 and slope 0 at rho=0, matching value and slope of the law at rho=ln 100; zero for rho<=0";

/// Manifest text for the graph amplitude blend.
pub const GRAPH_INTERPOLATION_SPEC: &str =
    "cubic Hermite in rho on [0, ln 100] for the amplitude a = A sin A, A = ln rho: value 0 and slope 0 at rho=0, matching at rho=ln 100; zero for rho<=0";

impl TwistProfile {
    pub fn new(law: TwistLaw) -> Self {
        let blend = match law {
            TwistLaw::None => HermiteBlend { c2: 0.0, c3: 0.0 },
            _ => HermiteBlend::to(law.pure(PURE_RHO), law.pure_slope(PURE_RHO)),
        };
        Self { law, blend }
    }

    pub fn log_log() -> Self {
        Self::new(TwistLaw::LogLog)
    }

    pub fn none() -> Self {
        Self::new(TwistLaw::None)
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("power-law exponent must be positive, got {p}")));
        }
        Ok(Self::new(TwistLaw::PowerLaw(p)))
    }

    pub fn law(&self) -> TwistLaw {
        self.law
    }

    pub fn blend(&self) -> &HermiteBlend {
        &self.blend
    }

    pub fn is_none(&self) -> bool {
        self.law == TwistLaw::None
    }

    /// `theta` at combined log-scale `rho`; zero for `rho <= 0`.
    #[inline]
    pub fn theta(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            0.0
        } else if rho >= PURE_RHO {
            self.law.pure(rho)
        } else {
            self.blend.value(rho)
        }
    }

    /// `d theta / d rho`, which equals `r |theta'(r)|`.
    #[inline]
    pub fn dtheta(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            0.0
        } else if rho >= PURE_RHO {
            self.law.pure_slope(rho)
        } else {
            self.blend.slope(rho)
        }
    }

    #[inline]
    pub fn d2theta(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            0.0
        } else if rho >= PURE_RHO {
            self.law.pure_curvature(rho)
        } else {
            self.blend.curvature(rho)
        }
    }

    /// `theta(rho + d) - theta(rho)`, without cancellation on the pure region.
    pub fn theta_increment(&self, rho: f64, d: f64) -> f64 {
        let r2 = rho + d;
        if rho >= PURE_RHO && r2 >= PURE_RHO {
            let l = (d / rho).ln_1p();
            match self.law {
                TwistLaw::LogLog => l,
                TwistLaw::PowerLaw(p) => rho.powf(p) * (p * l).exp_m1(),
                TwistLaw::None => 0.0,
            }
        } else {
            self.theta(r2) - self.theta(rho)
        }
    }

    /// Upper bound for `|d theta / d rho|` over `[a, b]` (`b` may be infinite).
    pub fn dtheta_sup(&self, a: f64, b: f64) -> f64 {
        let mut m: f64 = 0.0;
        let (lo, hi) = (a.max(0.0), b.min(PURE_RHO));
        if lo < hi {
            m = m.max(self.blend.slope_sup(lo, hi));
        }
        let lo = a.max(PURE_RHO);
        if lo <= b {
            m = m.max(match self.law {
                TwistLaw::LogLog => 1.0 / lo,
                TwistLaw::PowerLaw(p) if p <= 1.0 => self.law.pure_slope(lo),
                TwistLaw::PowerLaw(_) => {
                    if b.is_finite() {
                        self.law.pure_slope(b)
                    } else {
                        f64::INFINITY
                    }
                }
                TwistLaw::None => 0.0,
            });
        }
        m
    }
}

/// Angle data at one scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleJet {
    /// Unreduced angle in radians.
    pub theta: f64,
    /// `theta` reduced to `[0, 2 pi)`.
    pub theta_mod: f64,
    /// The scale-invariant speed `r |theta'(r)| = d theta / d rho`.
    pub r_dtheta: f64,
}

/// Angle, reduced angle and rotation speed of `profile` at `scale`.
pub fn theta_jet(profile: &TwistProfile, scale: LogScale) -> Result<AngleJet> {
    let rho = scale.rho();
    if rho > MAX_RHO {
        return Err(Error::Precision(format!(
            "rho = {rho:e} exceeds e^70; angle reduction would lose precision"
        )));
    }
    let theta = profile.theta(rho);
    if theta > MAX_THETA {
        return Err(Error::Precision(format!(
            "theta = {theta:e} too large to reduce modulo 2 pi"
        )));
    }
    Ok(AngleJet {
        theta,
        theta_mod: reduce_angle(theta),
        r_dtheta: profile.dtheta(rho),
    })
}

/// `theta mod 2 pi` in `[0, 2 pi)`.
#[inline]
pub fn reduce_angle(theta: f64) -> f64 {
    let m = theta.rem_euclid(TAU);
    if m >= TAU {
        0.0
    } else {
        m
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
#[inline]
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Amplitude law of the oscillating graph `v(x, y) = x a(rho)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphAmplitude {
    /// `a = A sin A` with `A = ln rho` on the pure region.
    Oscillating,
    /// `a = 0`: the flat half-space interface.
    Flat,
}

impl std::fmt::Display for GraphAmplitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphAmplitude::Oscillating => write!(f, "oscillating"),
            GraphAmplitude::Flat => write!(f, "flat"),
        }
    }
}

impl std::str::FromStr for GraphAmplitude {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oscillating" | "loglog" | "on" => Ok(GraphAmplitude::Oscillating),
            "flat" | "none" | "off" => Ok(GraphAmplitude::Flat),
            other => Err(Error::InvalidArgument(format!("unknown graph amplitude '{other}'"))),
        }
    }
}

fn osc(rho: f64) -> (f64, f64) {
    let a = rho.ln();
    let (s, c) = a.sin_cos();
    (a * s, (s + a * c) / rho)
}

fn osc_blend() -> HermiteBlend {
    let (y, m) = osc(PURE_RHO);
    HermiteBlend::to(y, m)
}

impl GraphAmplitude {
    /// `(a, da/drho)` at combined log-scale `rho`.
    #[inline]
    pub fn jet(self, rho: f64) -> (f64, f64) {
        match self {
            GraphAmplitude::Flat => (0.0, 0.0),
            GraphAmplitude::Oscillating => {
                if rho <= 0.0 {
                    (0.0, 0.0)
                } else if rho >= PURE_RHO {
                    osc(rho)
                } else {
                    let b = osc_blend();
                    (b.value(rho), b.slope(rho))
                }
            }
        }
    }

    /// Upper bounds `(sup |a|, sup |a'|)` over `[a, b]`; infinite if `b` is.
    pub fn sup(self, a: f64, b: f64) -> (f64, f64) {
        if self == GraphAmplitude::Flat {
            return (0.0, 0.0);
        }
        let (mut va, mut vs): (f64, f64) = (0.0, 0.0);
        let (lo, hi) = (a.max(0.0), b.min(PURE_RHO));
        if lo < hi {
            let bl = osc_blend();
            va = va.max(bl.value_sup(lo, hi));
            vs = vs.max(bl.slope_sup(lo, hi));
        }
        let lo = a.max(PURE_RHO);
        if lo <= b {
            // |A sin A| <= A and |sin A + A cos A| / rho <= (1 + A) / rho
            let amax = b.ln();
            va = va.max(amax);
            vs = vs.max((1.0 + amax) / lo);
        }
        (va, vs)
    }
}
