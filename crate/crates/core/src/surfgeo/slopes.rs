//! Log-scales at which the rescaled oscillating graph has a prescribed slope.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::fields::{LogScale, PURE_RHO};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeTarget {
    pub k: i64,
    /// Root `A` of `A sin A = m` on branch `k`, if any.
    pub a: Option<f64>,
    /// Combined log-scale `rho' = e^A`; `None` for skipped branches.
    pub scale: Option<LogScale>,
    /// False when `rho'` falls in the interpolation region.
    pub pure: bool,
}

/// Solve `A sin A = m` on the rising part of branch `k`.
///
/// For `m > 0` the branch is `[2 pi k, 2 pi k + pi/2]`, for `m < 0` it is
/// `[(2k+1) pi, (2k+1) pi + pi/2]`; `m = 0` gives `A = pi k` directly.
pub fn graph_slope_targets(m: f64, ks: &[i64]) -> Result<Vec<SlopeTarget>> {
    if !m.is_finite() {
        return Err(Error::InvalidArgument("slope must be finite".into()));
    }
    let mut out = Vec::new();
    for &k in ks {
        if k < 0 {
            return Err(Error::InvalidArgument(format!("branch index must be nonnegative, got {k}")));
        }
        let a = if m == 0.0 {
            (k > 0).then_some(PI * k as f64)
        } else {
            let lo = if m > 0.0 { 2.0 * PI * k as f64 } else { (2 * k + 1) as f64 * PI };
            let hi = lo + FRAC_PI_2;
            let g = |a: f64| a * a.sin() - m;
            if g(lo).signum() == g(hi).signum() {
                None
            } else {
                let (mut x0, mut x1) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (x0 + x1);
                    if g(mid).signum() == g(x0).signum() {
                        x0 = mid;
                    } else {
                        x1 = mid;
                    }
                }
                Some(0.5 * (x0 + x1))
            }
        };
        let scale = match a {
            Some(a) => Some(LogScale::from_ln_rho(a)?),
            None => None,
        };
        out.push(SlopeTarget {
            k,
            a,
            scale,
            pure: scale.is_some_and(|s| s.rho() >= PURE_RHO),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{graph_jet, GraphAmplitude};
    use crate::Vec2;

    #[test]
    fn zero_slope_roots() {
        let t = graph_slope_targets(0.0, &[1, 2, 3]).unwrap();
        for (i, x) in t.iter().enumerate() {
            assert_eq!(x.a.unwrap(), PI * (i + 1) as f64);
        }
    }

    #[test]
    fn unit_slope_consistency() {
        let t = graph_slope_targets(1.0, &[0, 1, 2, 3]).unwrap();
        assert!(t.iter().all(|x| x.a.is_some()));
        assert!(!t[0].pure);
        for x in &t[1..] {
            let (v, _) = graph_jet(GraphAmplitude::Oscillating, &Vec2::new(1.0, 0.0), x.scale).unwrap();
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn steep_slope_skips_low_branches() {
        let t = graph_slope_targets(5.0, &[0, 1]).unwrap();
        assert!(t[0].a.is_none());
        assert!(t[1].a.is_some());
    }
}
