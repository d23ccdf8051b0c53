//! Dyadic profiles of `log h` from paired harmonic-measure histograms.

use crate::{Error, Result};

use super::wos::MeasureHistogram;

#[derive(Clone, Debug, PartialEq)]
pub struct LogHRow {
    /// Patch row; the annulus is `[r / 2, r)`.
    pub level: usize,
    pub r: f64,
    /// `max_P |log(count-(P) / count+(P))|` over the sectors of the row;
    /// `None` when some sector is empty on either side.
    pub statistic: Option<f64>,
    /// One standard error of the log ratio at the maximizing sector.
    pub band: f64,
    /// `|log(omega-(B_r) / omega+(B_r))|`.
    pub ball_statistic: Option<f64>,
    pub ball_band: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogHEstimate {
    pub rows: Vec<LogHRow>,
}

impl LogHEstimate {
    pub fn conclusive(&self) -> impl Iterator<Item = (&LogHRow, f64)> {
        self.rows.iter().filter_map(|r| r.statistic.map(|s| (r, s)))
    }
}

fn compatible(plus: &MeasureHistogram, minus: &MeasureHistogram) -> Result<()> {
    if plus.partition != minus.partition || plus.kind != minus.kind {
        return Err(Error::InvalidArgument("histograms do not share a patch partition".into()));
    }
    if (plus.pole + minus.pole).amax() > 1e-15 * plus.pole.norm() {
        return Err(Error::InvalidArgument("poles must be an antipodal pair".into()));
    }
    Ok(())
}

fn log_ratio(pm: f64, sm: f64, pp: f64, sp: f64) -> Option<(f64, f64)> {
    (pm > 0.0 && pp > 0.0).then(|| ((pm / pp).ln(), ((sm / pm).powi(2) + (sp / pp).powi(2)).sqrt()))
}

/// Sector and ball statistics at the patch rows `levels`.
pub fn log_h_profile(plus: &MeasureHistogram, minus: &MeasureHistogram, levels: &[usize]) -> Result<LogHEstimate> {
    compatible(plus, minus)?;
    let part = plus.partition;
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        if level == 0 || level > part.levels {
            return Err(Error::InvalidArgument(format!("level {level} outside 1..={}", part.levels)));
        }
        let mut stat: Option<f64> = Some(0.0);
        let mut band = 0.0;
        for k in 0..part.sectors {
            let b = level * part.sectors + k;
            match log_ratio(minus.probability(b), minus.standard_error(b), plus.probability(b), plus.standard_error(b)) {
                Some((l, e)) => {
                    if let Some(s) = stat {
                        if l.abs() >= s {
                            stat = Some(l.abs());
                            band = e;
                        }
                    }
                }
                None => stat = None,
            }
        }
        let (pm, sm) = minus.ball_measure(level - 1);
        let (pp, sp) = plus.ball_measure(level - 1);
        let ball = log_ratio(pm, sm, pp, sp);
        rows.push(LogHRow {
            level,
            r: part.row_outer(level),
            statistic: stat,
            band: if stat.is_some() { band } else { f64::NAN },
            ball_statistic: ball.map(|b| b.0.abs()),
            ball_band: ball.map_or(f64::NAN, |b| b.1),
        });
    }
    Ok(LogHEstimate { rows })
}

/// Comparison of `count+(P)` with `count-(-P)` over all patches with hits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryCheck {
    pub patches: usize,
    pub within_three_sigma: usize,
    pub max_z: f64,
}

impl SymmetryCheck {
    pub fn fraction(&self) -> f64 {
        if self.patches == 0 {
            1.0
        } else {
            self.within_three_sigma as f64 / self.patches as f64
        }
    }
}

pub fn symmetric_patch_check(plus: &MeasureHistogram, minus: &MeasureHistogram) -> Result<SymmetryCheck> {
    compatible(plus, minus)?;
    let part = plus.partition;
    let mut out = SymmetryCheck { patches: 0, within_three_sigma: 0, max_z: 0.0 };
    for b in 0..part.len() {
        let m = part.antipodal_bin(b);
        if plus.hits[b] == 0 && minus.hits[m] == 0 {
            continue;
        }
        let se = (plus.standard_error(b).powi(2) + minus.standard_error(m).powi(2)).sqrt();
        let z = (plus.probability(b) - minus.probability(m)).abs() / se.max(f64::MIN_POSITIVE);
        out.patches += 1;
        if z <= 3.0 {
            out.within_three_sigma += 1;
        }
        out.max_z = out.max_z.max(z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{DomainKind, GraphAmplitude, Side};
    use crate::potential::{wos_sample, PatchPartition, WosOptions};

    #[test]
    fn plane_profile_is_flat() {
        let kind = DomainKind::OscillatingGraph(GraphAmplitude::Flat);
        let part = PatchPartition::new(1.0, 3, 4).unwrap();
        let o = WosOptions::default();
        let p = wos_sample(kind, Side::Plus.default_pole(), part, 20_000, 1, &o).unwrap();
        let m = wos_sample(kind, Side::Minus.default_pole(), part, 20_000, 2, &o).unwrap();
        let est = log_h_profile(&p, &m, &[1, 2]).unwrap();
        for row in &est.rows {
            assert!(row.ball_statistic.unwrap() <= 3.0 * row.ball_band);
        }
        assert!(symmetric_patch_check(&p, &m).unwrap().fraction() >= 0.75);
        assert!(log_h_profile(&p, &p, &[1]).is_err());
    }
}
