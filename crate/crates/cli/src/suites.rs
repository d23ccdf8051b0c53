//! Invariant suites run by `check-fields` and `verify`.

use std::f64::consts::TAU;

use fblab_core::fields::*;
use fblab_core::potential::*;
use fblab_core::surfgeo::*;
use fblab_core::{Mat3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliResult;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub suite: &'static str,
    pub name: &'static str,
    pub value: f64,
    /// `<=` bound, or `>=` bound when `lower` is set.
    pub tolerance: f64,
    pub lower: bool,
    pub pass: bool,
}

fn at_most(suite: &'static str, name: &'static str, value: f64, tolerance: f64) -> CheckRow {
    CheckRow { suite, name, value, tolerance, lower: false, pass: value <= tolerance }
}

fn at_least(suite: &'static str, name: &'static str, value: f64, tolerance: f64) -> CheckRow {
    CheckRow { suite, name, value, tolerance, lower: true, pass: value >= tolerance }
}

pub struct FieldSettings {
    pub points: usize,
    pub radius: f64,
    pub step: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl Default for FieldSettings {
    fn default() -> Self {
        Self { points: 10_000, radius: 2.0, step: 1e-3, rho_min: 10.0, rho_max: 1e6 }
    }
}

fn in_ball(rng: &mut ChaCha8Rng, r: f64) -> Vec3 {
    loop {
        let q = Vec3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r));
        if q.norm() < r {
            return q;
        }
    }
}

fn fd_jacobian<F: Fn(&Vec3) -> Vec3>(f: F, p: &Vec3, h: f64) -> Mat3 {
    let mut m = Mat3::zeros();
    for k in 0..3 {
        let mut e = Vec3::zeros();
        e[k] = h;
        m.set_column(k, &((f(&(p + e)) - f(&(p - e))) / (2.0 * h)));
    }
    m
}

/// One row per `rho`: `(rho, max E_ij rho / 2, max lambda3/lambda1 - 1)` for the log-log twist.
pub fn frame_table(rhos: &[f64], directions: usize, seed: u64) -> CliResult<Vec<[f64; 3]>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prof = TwistProfile::log_log();
    let dirs: Vec<Vec3> = (0..directions)
        .map(|_| {
            let u = in_ball(&mut rng, 1.0);
            if u.norm() > 1e-6 { u.normalize() } else { Vec3::z() }
        })
        .collect();
    let mut out = Vec::new();
    for &rho in rhos {
        let s = Some(LogScale::new(rho)?);
        let (mut e, mut d): (f64, f64) = (0.0, 0.0);
        for u in &dirs {
            let f = twist_frame(&prof, MapDirection::Forward, u, s);
            e = e.max(f.error_max_entry() * rho / 2.0);
            d = d.max(f.dilatation() - 1.0);
        }
        out.push([rho, e, d]);
    }
    Ok(out)
}

pub fn fields_suite(set: &FieldSettings, seed: u64) -> CliResult<Vec<CheckRow>> {
    const S: &str = "fields";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = set.step;
    let mut lap: f64 = 0.0;
    for _ in 0..set.points {
        let p = in_ball(&mut rng, set.radius);
        let mut l = 0.0;
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            l += szulkin(&(p + e)) - 2.0 * szulkin(&p) + szulkin(&(p - e));
        }
        lap = lap.max((l / (h * h)).abs());
    }
    let poles = (szulkin(&Vec3::z()) - 1.0).abs() + (szulkin(&-Vec3::z()) + 1.0).abs();
    let mut grad = f64::INFINITY;
    for _ in 0..set.points {
        let u = in_ball(&mut rng, 1.0);
        if u.norm() > 1e-3 {
            grad = grad.min(szulkin_gradient(&u.normalize()).norm());
        }
    }
    let prof = TwistProfile::log_log();
    let amp = GraphAmplitude::Oscillating;
    let (mut inv, mut norm, mut det, mut jac, mut coef): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..set.points {
        let p = in_ball(&mut rng, set.radius);
        let scale = LogScale::new(rng.gen_range(set.rho_min..set.rho_max))?;
        let s = Some(scale);
        let f = twist_map(&prof, MapDirection::Forward, &p, s);
        inv = inv.max((twist_map(&prof, MapDirection::Backward, &f, s) - p).norm());
        norm = norm.max((f.norm() - p.norm()).abs());
        let g = graph_map(amp, MapDirection::Forward, &p, s);
        inv = inv.max((graph_map(amp, MapDirection::Backward, &g, s) - p).norm());
        for d in [MapDirection::Forward, MapDirection::Backward] {
            let tf = twist_frame(&prof, d, &p, s);
            det = det.max((tf.jacobian.determinant() - 1.0).abs());
            let gj = graph_map_jacobian(amp, d, &p, s)?;
            det = det.max((gj.determinant() - 1.0).abs());
            if i % 10 == 0 {
                let ft = fd_jacobian(|q| twist_map(&prof, d, q, s), &p, 1e-5);
                jac = jac.max((ft - tf.jacobian).norm() / tf.jacobian.norm());
                let fg = fd_jacobian(|q| graph_map(amp, d, q, s), &p, 1e-5);
                jac = jac.max((fg - gj).norm() / gj.norm());
            }
        }
        if i % 10 == 0 {
            let b = pullback_coefficient(&DomainKind::TwistedSzulkin(prof), scale, &p)?.b;
            coef = coef.max((b - b.transpose()).amax()).max((b.determinant() - 1.0).abs());
        }
    }
    let n = 41;
    let rhos: Vec<f64> = (0..n)
        .map(|i| (10f64.ln() + (60.0 - 10f64.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let e_bound = frame_table(&rhos, 100, seed ^ 0x5eed)?.iter().map(|r| r[1]).fold(0.0, f64::max);
    Ok(vec![
        at_most(S, "laplacian", lap, 1e-6),
        at_most(S, "poles", poles, 0.0),
        at_least(S, "min-gradient-on-sphere", grad, 0.3),
        at_most(S, "round-trip", inv, 1e-12),
        at_most(S, "norm-preservation", norm, 1e-12),
        at_most(S, "determinant", det, 1e-9),
        at_most(S, "jacobian-vs-differences", jac, 1e-6),
        at_most(S, "coefficient-symmetric-unimodular", coef, 1e-9),
        at_most(S, "error-bound", e_bound, 1.0 + 1e-9),
    ])
}

pub fn geometry_suite() -> CliResult<Vec<CheckRow>> {
    const S: &str = "geometry";
    let curve = trace_base_curve(1e-3)?;
    let on_set = curve.points.iter().map(|p| szulkin(p).abs()).fold(0.0, f64::max);
    let on_sphere = curve.points.iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max);
    let sym = (0..curve.len()).step_by(25).map(|i| curve.rotated_distance(i, TAU / 3.0)).fold(0.0, f64::max);
    let gap = 0.02;
    let none = DomainKind::TwistedSzulkin(TwistProfile::none());
    let scale = LogScale::new(100.0)?;
    let a = sample_interface(&curve, &none, scale, 1.0, 0.05, gap)?;
    let b = sample_rotated_cone(&curve, 0.0, 1.0, 0.05, gap);
    let cloud_hd = hausdorff_in_ball(&a, &b, 1.0)?;
    let opts = HdOptions::default();
    let blow = blowup_convergence(&curve, TwistProfile::none(), 0.0, &[1, 2], 2.0, &opts)?
        .iter()
        .map(|p| p.distance)
        .fold(0.0, f64::max);
    let half = curve.length() / 2.0;
    let area = area_ratio_probe(&curve, &none, scale, &Vec3::zeros(), &[0.1, 1.0], 0.01)?
        .iter()
        .map(|s| (s.ratio / half - 1.0).abs())
        .fold(0.0, f64::max);
    let one = TwistProfile::power(1.0)?;
    let (ss, ss_gap) = self_similarity_distance(&curve, one, LogScale::new(10.0)?, LogScale::new(1e4)?, 2.0, gap)?;
    let scales: Vec<LogScale> = (1..=100_000).map(|i| LogScale::new(i as f64 * 2f64.ln())).collect::<Result<_, _>>()?;
    let cov = accumulation_coverage(&TwistProfile::log_log(), &scales, 0.01)?;
    Ok(vec![
        at_most(S, "curve-on-nodal-set", on_set, 1e-10),
        at_most(S, "curve-on-sphere", on_sphere, 1e-12),
        at_most(S, "curve-gap", curve.gap, 1e-3),
        at_most(S, "three-fold-symmetry", sym, 1e-5),
        at_most(S, "untwisted-cloud-distance", cloud_hd, 2.0 * gap),
        at_most(S, "untwisted-blowup-distance", blow, 2.0 * curve.gap),
        at_most(S, "cone-area-ratio", area, 1e-3),
        at_most(S, "linear-law-self-similarity", ss / ss_gap, 2.0),
        at_least(S, "accumulation-diameter", cov.diameter, std::f64::consts::FRAC_PI_2),
    ])
}

pub fn potential_suite(seed: u64, threads: Option<usize>) -> CliResult<Vec<CheckRow>> {
    const S: &str = "potential";
    let flat = DomainKind::OscillatingGraph(GraphAmplitude::Flat);
    let mut spec = SolveSpec::new(flat, Side::Plus, LogScale::new(10.0)?, 1.0, 1.0 / 8.0);
    spec.tolerance = 1e-14;
    let slab = solve_conjugated(&spec)?.max_deviation(|x| x.z, |_| true);
    let cone = DomainKind::TwistedSzulkin(TwistProfile::none());
    let mut spec = SolveSpec::new(cone, Side::Plus, LogScale::new(10.0)?, 1.0, 1.0 / 32.0);
    spec.inner_radius = Some(0.25);
    spec.tolerance = 1e-10;
    let annulus = solve_conjugated(&spec)?.max_deviation(szulkin, |_| true);
    let part = PatchPartition::new(1.0, 4, 8)?;
    let opts = WosOptions { threads, ..WosOptions::default() };
    let hist = wos_sample(flat, Side::Plus.default_pole(), part, 100_000, seed, &opts)?;
    let (p, se) = hist.ball_measure(0);
    let z = (p - half_space_disc_measure(1.0, 1.0)).abs() / se;
    Ok(vec![
        at_most(S, "slab-exactness", slab, 1e-10),
        at_most(S, "annulus-error-h32", annulus, 1e-3),
        at_most(S, "half-space-disc-z-score", z, 3.0),
        at_most(S, "walk-escapes", hist.escape_fraction(), 0.01),
    ])
}
