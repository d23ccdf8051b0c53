//! Walk-on-spheres estimates of harmonic measure in the physical domains.
//!
//! Each walk jumps to a uniform point on the largest sphere certified by
//! [`SignedField::safe_radius`] and stops once that radius falls inside the
//! epsilon shell. Walks entering the dyadic balls `B(0, r_max 2^-j)` are split
//! into `split_factor` copies of reduced weight, so that deep scales receive
//! hits. Weights are integers in units of `split_factor^split_levels` per walk
//! and every walk draws from its own ChaCha stream, which makes histograms
//! independent of thread count and scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::UnitSphere;
use rayon::prelude::*;

use crate::fields::{DomainKind, SignedField};
use crate::{Error, Result, Vec3};

/// Dyadic annular sectors of the interface around the origin.
///
/// Row 0 collects `r >= r_max`, row `j` in `1..=levels` the annulus
/// `[r_max 2^-j, r_max 2^(1-j))` and row `levels + 1` the ball `r < r_max 2^-levels`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchPartition {
    pub r_max: f64,
    pub levels: usize,
    pub sectors: usize,
}

impl PatchPartition {
    pub fn new(r_max: f64, levels: usize, sectors: usize) -> Result<Self> {
        if !(r_max > 0.0) || levels == 0 || levels > 60 || sectors == 0 || sectors % 2 != 0 {
            return Err(Error::InvalidArgument("patches need r_max > 0, 1..=60 levels and an even sector count".into()));
        }
        Ok(Self { r_max, levels, sectors })
    }

    pub fn rows(&self) -> usize {
        self.levels + 2
    }

    pub fn len(&self) -> usize {
        self.rows() * self.sectors
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Outer radius of row `j` (`INFINITY` for row 0).
    pub fn row_outer(&self, row: usize) -> f64 {
        if row == 0 {
            f64::INFINITY
        } else {
            self.r_max * 0.5f64.powi(row as i32 - 1)
        }
    }

    pub fn row_of(&self, r: f64) -> usize {
        if r >= self.r_max {
            return 0;
        }
        let j = ((self.r_max / r).log2().floor() as i64).saturating_add(1);
        let mut j = j.clamp(1, self.levels as i64 + 1) as usize;
        // guard the floor against rounding at exact powers of two
        while j > 1 && r >= self.row_outer(j) {
            j -= 1;
        }
        while j <= self.levels && r < self.row_outer(j + 1) {
            j += 1;
        }
        j
    }

    pub fn sector_of(&self, p: &Vec3) -> usize {
        let a = p.y.atan2(p.x).rem_euclid(std::f64::consts::TAU);
        ((a / std::f64::consts::TAU * self.sectors as f64) as usize).min(self.sectors - 1)
    }

    pub fn bin_of(&self, p: &Vec3) -> usize {
        self.row_of(p.norm()) * self.sectors + self.sector_of(p)
    }

    /// The bin of `-P`.
    pub fn antipodal_bin(&self, bin: usize) -> usize {
        let (row, sec) = (bin / self.sectors, bin % self.sectors);
        row * self.sectors + (sec + self.sectors / 2) % self.sectors
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WosOptions {
    /// Shell width relative to `min(|X|, |pole|)`.
    pub epsilon: f64,
    pub step_cap: usize,
    pub split_factor: u64,
    /// Number of dyadic balls that trigger splitting (at most `levels`).
    pub split_levels: usize,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for WosOptions {
    fn default() -> Self {
        Self { epsilon: 1e-4, step_cap: 100_000, split_factor: 4, split_levels: 0, threads: None }
    }
}

/// Number of interleaved batches kept for the empirical error.
pub const BATCHES: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureHistogram {
    pub kind: DomainKind,
    pub partition: PatchPartition,
    pub pole: Vec3,
    pub walks: u64,
    pub master_seed: u64,
    pub epsilon: f64,
    pub split_factor: u64,
    pub split_levels: usize,
    /// Weight of one walk in hit units.
    pub unit: u64,
    pub hits: Vec<u64>,
    /// `BATCHES x bins`, walk `i` contributing to batch `i % BATCHES`.
    pub batch_hits: Vec<u64>,
    pub escaped: u64,
    pub steps: u64,
}

const ESCAPE_WARNING: f64 = 0.01;

impl MeasureHistogram {
    fn total(&self) -> f64 {
        self.walks as f64 * self.unit as f64
    }

    pub fn probability(&self, bin: usize) -> f64 {
        self.hits[bin] as f64 / self.total()
    }

    /// `sqrt(p (1 - p) / N)`.
    pub fn binomial_error(&self, bin: usize) -> f64 {
        let p = self.probability(bin);
        (p * (1.0 - p) / self.walks as f64).sqrt()
    }

    /// Standard error of the mean over the interleaved batches.
    pub fn batch_error(&self, bin: usize) -> f64 {
        let n = self.partition.len();
        let per = self.total() / BATCHES as f64;
        let xs: Vec<f64> = (0..BATCHES).map(|b| self.batch_hits[b * n + bin] as f64 / per).collect();
        let mean = xs.iter().sum::<f64>() / BATCHES as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
        (var / BATCHES as f64).sqrt()
    }

    /// The binomial error without splitting, the batch error with it.
    pub fn standard_error(&self, bin: usize) -> f64 {
        if self.split_levels == 0 {
            self.binomial_error(bin)
        } else {
            self.batch_error(bin)
        }
    }

    pub fn escape_fraction(&self) -> f64 {
        self.escaped as f64 / self.total()
    }

    pub fn escape_warning(&self) -> bool {
        self.escape_fraction() > ESCAPE_WARNING
    }

    fn sum_bins(&self, data: &[u64], rows: std::ops::RangeInclusive<usize>) -> u64 {
        let s = self.partition.sectors;
        rows.flat_map(|r| (0..s).map(move |k| r * s + k)).map(|b| data[b]).sum()
    }

    /// `omega(B(0, r_max 2^-j))` with its standard error.
    pub fn ball_measure(&self, j: usize) -> (f64, f64) {
        let rows = (j + 1)..=(self.partition.levels + 1);
        let p = self.sum_bins(&self.hits, rows.clone()) as f64 / self.total();
        if self.split_levels == 0 {
            return (p, (p * (1.0 - p) / self.walks as f64).sqrt());
        }
        let n = self.partition.len();
        let per = self.total() / BATCHES as f64;
        let xs: Vec<f64> = (0..BATCHES)
            .map(|b| self.sum_bins(&self.batch_hits[b * n..(b + 1) * n], rows.clone()) as f64 / per)
            .collect();
        let mean = xs.iter().sum::<f64>() / BATCHES as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
        (p, (var / BATCHES as f64).sqrt())
    }
}

struct Tally {
    hits: Vec<u64>,
    batch: Vec<u64>,
    escaped: u64,
    steps: u64,
}

impl Tally {
    fn new(bins: usize) -> Self {
        Self { hits: vec![0; bins], batch: vec![0; bins * BATCHES], escaped: 0, steps: 0 }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.hits.iter_mut().zip(&other.hits).for_each(|(a, b)| *a += b);
        self.batch.iter_mut().zip(&other.batch).for_each(|(a, b)| *a += b);
        self.escaped += other.escaped;
        self.steps += other.steps;
        self
    }
}

fn unit_weight(factor: u64, levels: usize) -> Result<u64> {
    let mut u: u64 = 1;
    for _ in 0..levels {
        u = u.checked_mul(factor).ok_or_else(|| Error::InvalidArgument("split weights overflow".into()))?;
    }
    Ok(u)
}

/// Harmonic measure of the patches seen from `pole`, by `walks` walks.
pub fn wos_sample(
    kind: DomainKind,
    pole: Vec3,
    partition: PatchPartition,
    walks: u64,
    master_seed: u64,
    opts: &WosOptions,
) -> Result<MeasureHistogram> {
    let field = SignedField::physical(kind);
    if field.side(&pole).is_none() || field.safe_radius(&pole) <= 0.0 {
        return Err(Error::Domain("pole must lie strictly inside one side".into()));
    }
    if !(opts.epsilon >= 1e-5) || opts.epsilon >= 1.0 {
        return Err(Error::InvalidArgument("epsilon shell must lie in [1e-5, 1) relative to the pole".into()));
    }
    if walks == 0 || opts.split_levels > partition.levels || (opts.split_levels > 0 && opts.split_factor < 2) {
        return Err(Error::InvalidArgument("invalid walk count or splitting".into()));
    }
    let unit = unit_weight(opts.split_factor, opts.split_levels)?;
    walks
        .checked_mul(unit)
        .ok_or_else(|| Error::InvalidArgument("walk count times split weight overflows".into()))?;
    let bins = partition.len();
    const CHUNK: u64 = 1024;
    let chunks = walks.div_ceil(CHUNK);
    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut t = Tally::new(bins);
                for i in (c * CHUNK)..((c + 1) * CHUNK).min(walks) {
                    walk(&field, &pole, &partition, master_seed, i, unit, opts, &mut t);
                }
                t
            })
            .reduce(|| Tally::new(bins), Tally::merge)
    };
    let tally = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run),
        None => run(),
    };
    Ok(MeasureHistogram {
        kind,
        partition,
        pole,
        walks,
        master_seed,
        epsilon: opts.epsilon,
        split_factor: opts.split_factor,
        split_levels: opts.split_levels,
        unit,
        hits: tally.hits,
        batch_hits: tally.batch,
        escaped: tally.escaped,
        steps: tally.steps,
    })
}

#[allow(clippy::too_many_arguments)]
fn walk(
    field: &SignedField,
    pole: &Vec3,
    partition: &PatchPartition,
    seed: u64,
    index: u64,
    unit: u64,
    opts: &WosOptions,
    t: &mut Tally,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let batch = (index % BATCHES as u64) as usize * partition.len();
    let pole_norm = pole.norm();
    let side = field.side(pole);
    // (position, splits so far, weight, steps)
    let mut stack = vec![(*pole, 0usize, unit, 0usize)];
    while let Some((mut x, mut depth, weight, mut steps)) = stack.pop() {
        loop {
            if steps >= opts.step_cap {
                t.escaped += weight;
                break;
            }
            let n = x.norm();
            let r = field.safe_radius(&x);
            if r <= opts.epsilon * n.min(pole_norm) || field.side(&x) != side {
                let y = project(field, &x);
                let bin = partition.bin_of(&y);
                t.hits[bin] += weight;
                t.batch[batch + bin] += weight;
                break;
            }
            let d: [f64; 3] = rng.sample(UnitSphere);
            x += Vec3::new(d[0], d[1], d[2]) * r;
            steps += 1;
            t.steps += 1;
            if depth < opts.split_levels && x.norm() < partition.row_outer(depth + 2) {
                depth += 1;
                let w = weight / opts.split_factor;
                for _ in 0..opts.split_factor {
                    stack.push((x, depth, w, steps));
                }
                break;
            }
        }
    }
}

/// One Newton step onto the zero set.
fn project(field: &SignedField, x: &Vec3) -> Vec3 {
    match field.gradient(x) {
        Some(g) if g.norm_squared() > 0.0 => x - g * (field.value(x) / g.norm_squared()),
        _ => *x,
    }
}

/// `omega(disc of radius r)` for the half-space `{z > 0}` seen from `(0, 0, h)`.
pub fn half_space_disc_measure(h: f64, r: f64) -> f64 {
    1.0 - h / (h * h + r * r).sqrt()
}
