use crate::{Error, Result};

/// `ln 100`: log-scales at or above this value lie in the pure-law region.
pub const PURE_RHO: f64 = 4.605_170_185_988_092;

/// Largest log-scale (`e^70`) for which angles are reduced modulo `2 pi`.
pub const MAX_RHO: f64 = 2.515_438_670_919_167e30;

/// Largest unreduced angle accepted by [`theta_jet`](crate::fields::theta_jet).
///
/// Above `2^32` a double carries less than `1e-6` absolute precision, so the
/// reduced angle would be meaningless.
pub const MAX_THETA: f64 = 4_294_967_296.0;

/// A radius `r` stored as `rho = -ln r`.
///
/// Scales like `r = exp(-e^{2 pi k})` underflow for `k >= 2`; their log-scale
/// is an ordinary double.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogScale(f64);

impl LogScale {
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho > 0.0 {
            Ok(Self(rho))
        } else {
            Err(Error::Domain(format!("log-scale must be positive and finite, got {rho}")))
        }
    }

    /// Log-scale of a radius in `(0, 1)`.
    pub fn from_radius(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("radius must lie in (0, 1), got {r}")));
        }
        Self::new(-r.ln())
    }

    /// Log-scale `rho = exp(ln_rho)`; used for blow-up sequences
    /// `rho_k = exp(theta0 + 2 pi k)` without ever forming `r`.
    pub fn from_ln_rho(ln_rho: f64) -> Result<Self> {
        Self::new(ln_rho.exp())
    }

    #[inline]
    pub fn rho(self) -> f64 {
        self.0
    }

    /// The physical radius; underflows to zero beyond `rho ~ 745`.
    pub fn to_radius(self) -> f64 {
        (-self.0).exp()
    }

    /// Combined log-scale of the rescaled radius `t`: `rho - ln t`.
    #[inline]
    pub fn at(self, t: f64) -> f64 {
        self.0 - t.ln()
    }

    pub fn is_pure(self) -> bool {
        self.0 >= PURE_RHO
    }
}

impl std::fmt::Display for LogScale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rho={}", self.0)
    }
}

/// Combined log-scale of a point at rescaled radius `t`, with or without an offset.
#[inline]
pub(crate) fn combined(offset: Option<LogScale>, t: f64) -> f64 {
    match offset {
        Some(s) => s.at(t),
        None => -t.ln(),
    }
}
