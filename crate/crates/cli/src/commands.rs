//! The experiments behind each subcommand.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use fblab_core::fields::*;
use fblab_core::potential::*;
use fblab_core::surfgeo::*;
use fblab_core::{Vec2, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::output::{num, read_ply, RunDir};
use crate::params::{p, ParamDef, Params};
use crate::suites::{self, CheckRow, FieldSettings};
use crate::svg;

pub struct Ctx<'a> {
    pub params: &'a Params,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Default)]
pub struct Outcome {
    /// Human-readable lines printed on success.
    pub summary: Vec<String>,
    pub tolerance_tags: BTreeMap<String, String>,
    /// Failed hard invariants; nonzero makes the run exit with an error.
    pub failed: usize,
    pub checked: usize,
}

type Runner = fn(&Ctx, &mut RunDir) -> CliResult<Outcome>;

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamDef],
    pub run: Runner,
}

const CURVE_GAP: ParamDef = p("curve-gap", "0.001", "arc spacing of the traced base curve");

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "check-fields",
        about: "Residuals of the closed-form fields, maps and frames",
        params: &[
            p("points", "10000", "random points per check"),
            p("radius", "2", "radius of the sampling ball"),
            p("step", "0.001", "second-difference step"),
            p("rho-min", "10", "smallest log-scale for map checks"),
            p("rho-max", "1e6", "largest log-scale for map checks"),
            p("rho-decades", "1:5", "decades of the frame table"),
            p("per-decade", "2", "frame table rows per decade"),
        ],
        run: check_fields,
    },
    Experiment {
        name: "trace-curve",
        about: "Trace the base curve {s = 0} on the unit sphere",
        params: &[p("gap", "0.001", "largest arc between vertices")],
        run: trace_curve,
    },
    Experiment {
        name: "sample",
        about: "Sample a rescaled interface as a point cloud",
        params: &[
            p("domain", "twist", "twist or graph"),
            p("profile", "none", "twist law: loglog, none or power:<p>"),
            p("amplitude", "flat", "graph amplitude: oscillating or flat"),
            p("rho", "100", "log-scale of the blow-up"),
            p("R", "1", "ball radius"),
            p("t-min", "0.01", "inner radius left unsampled"),
            p("gap", "0.01", "target point spacing"),
            CURVE_GAP,
        ],
        run: sample,
    },
    Experiment {
        name: "blowup",
        about: "Hausdorff distance of blow-ups to a rotated cone along rho_k = exp(theta0 + 2 pi k)",
        params: &[
            p("theta0", "0", "target angle in [0, 2 pi)"),
            p("kmin", "1", "first index"),
            p("kmax", "3", "last index"),
            p("R", "2", "ball radius"),
            p("ply", "true", "export interface clouds"),
            p("cloud-gap", "0.01", "spacing of exported clouds"),
            p("t-min", "0.01", "inner radius of exported clouds"),
            CURVE_GAP,
        ],
        run: blowup,
    },
    Experiment {
        name: "hd-bound",
        about: "Distance to the rotated cone against the twist increment bound",
        params: &[
            p("profile", "loglog", "twist law"),
            p("k", "1,2,3", "scales rho = exp(2 pi k)"),
            p("R", "2,10", "ball radii"),
            p("eps", "auto", "inner cutoff; auto uses rho^(-1/2)"),
            CURVE_GAP,
        ],
        run: hd_bound,
    },
    Experiment {
        name: "angles",
        about: "Reduced angles theta(r_i) mod 2 pi and their accumulation set",
        params: &[
            p("profile", "loglog", "twist law"),
            p("count", "1000000", "number of scales r_i = base^-i"),
            p("base", "2", "ratio of consecutive radii"),
            p("tol", "0.01", "angular tolerance"),
            p("list", "1000", "scales listed individually"),
        ],
        run: angles,
    },
    Experiment {
        name: "phase",
        about: "Best-rotation distance of power-law twists across scales",
        params: &[
            p("p", "1.0", "power-law exponent"),
            p("rho-decades", "1:4", "decades of rho"),
            p("per-decade", "1", "scales per decade"),
            p("R", "2", "ball radius"),
            CURVE_GAP,
        ],
        run: phase,
    },
    Experiment {
        name: "corkscrew",
        about: "Corkscrew constant of power-law twists across scales",
        params: &[
            p("p", "2.0", "power-law exponent"),
            p("rho-decades", "1:4", "decades of rho"),
            p("per-decade", "1", "scales per decade"),
            p("s", "0.5", "probe radius"),
        ],
        run: corkscrew,
    },
    Experiment {
        name: "area",
        about: "Interface area in balls divided by r^2",
        params: &[
            p("domain", "twist", "twist or graph"),
            p("profile", "loglog", "twist law"),
            p("amplitude", "oscillating", "graph amplitude"),
            p("rho", "100", "log-scale"),
            p("radii-decades", "-3:0", "decades of the ball radius"),
            p("per-decade", "1", "radii per decade"),
            p("center", "0,0,0", "ball centre"),
            p("resolution", "0.01", "mesh edge relative to the radius"),
            CURVE_GAP,
        ],
        run: area,
    },
    Experiment {
        name: "slopes",
        about: "Scales with a prescribed graph slope, and graph blow-up panels",
        params: &[
            p("m", "1", "target slope"),
            p("k", "1,2,3", "branch indices"),
            p("amplitude", "oscillating", "graph amplitude"),
            p("panels", "1,1e-6,1e-12", "radii r of the blow-up panels"),
        ],
        run: slopes,
    },
    Experiment {
        name: "solve",
        about: "Conjugated Dirichlet problem on a fixed template domain",
        params: &[
            p("domain", "twist", "twist or graph"),
            p("profile", "loglog", "twist law"),
            p("amplitude", "oscillating", "graph amplitude"),
            p("side", "plus", "plus or minus"),
            p("rho", "100", "log-scale"),
            p("K", "2", "ball radius or box half-width"),
            p("h", "0.0625", "grid spacing"),
            p("tol", "1e-8", "relative residual"),
            p("max-iter", "100000", "iteration cap"),
            p("r-in", "none", "inner radius removed from the ball"),
        ],
        run: solve,
    },
    Experiment {
        name: "wos",
        about: "Harmonic measure histogram by walk-on-spheres",
        params: &[
            p("domain", "graph", "twist or graph"),
            p("profile", "loglog", "twist law"),
            p("amplitude", "flat", "graph amplitude"),
            p("side", "plus", "pole (0, 0, +-1)"),
            p("walks", "100000", "number of walks"),
            p("r-max", "1", "outer patch radius"),
            p("levels", "10", "dyadic patch rows"),
            p("sectors", "8", "angular sectors (even)"),
            p("epsilon", "1e-4", "relative shell width"),
            p("step-cap", "100000", "steps per walk"),
            p("split-levels", "0", "dyadic balls that trigger splitting"),
            p("split-factor", "4", "copies per split"),
        ],
        run: wos,
    },
    Experiment {
        name: "logh",
        about: "Dyadic log h profile from paired harmonic measures",
        params: &[
            p("domain", "twist", "twist or graph"),
            p("profile", "loglog", "twist law"),
            p("amplitude", "oscillating", "graph amplitude"),
            p("walks", "100000", "walks per side"),
            p("rows", "4..10", "patch rows reported"),
            p("r-max", "1", "outer patch radius"),
            p("levels", "10", "dyadic patch rows"),
            p("sectors", "8", "angular sectors (even)"),
            p("epsilon", "1e-4", "relative shell width"),
            p("step-cap", "100000", "steps per walk"),
            p("split-levels", "0", "dyadic balls that trigger splitting"),
            p("split-factor", "4", "copies per split"),
        ],
        run: logh,
    },
    Experiment {
        name: "report",
        about: "Figures from the PLY clouds of an earlier run",
        params: &[p("input", "", "directory holding .ply artifacts")],
        run: report,
    },
    Experiment {
        name: "verify",
        about: "Invariant suites with pass/fail per check",
        params: &[p("suite", "all", "fields, geometry, potential or all")],
        run: verify,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

fn row(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| num(*v)).collect()
}

fn curve(params: &Params) -> CliResult<BaseCurve> {
    Ok(trace_base_curve(params.positive("curve-gap")?)?)
}

fn log_scale(params: &Params, key: &str) -> CliResult<LogScale> {
    LogScale::new(params.f64(key)?).map_err(|e| CliError::param(key, e.to_string()))
}

fn check_rows(rows: &[CheckRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.to_string(),
                num(c.value),
                if c.lower { ">=" } else { "<=" }.to_string(),
                num(c.tolerance),
                c.pass.to_string(),
            ]
        })
        .collect()
}

const CHECK_HEADER: &[&str] = &["suite", "check", "value", "relation", "tolerance", "pass"];

fn check_summary(rows: &[CheckRow]) -> Vec<String> {
    rows.iter()
        .map(|c| {
            format!(
                "{:<5} {:<10} {:<34} {:.3e} {} {:.3e}",
                if c.pass { "ok" } else { "FAIL" },
                c.suite,
                c.name,
                c.value,
                if c.lower { ">=" } else { "<=" },
                c.tolerance
            )
        })
        .collect()
}

fn check_fields(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let set = FieldSettings {
        points: pr.usize("points")?,
        radius: pr.positive("radius")?,
        step: pr.positive("step")?,
        rho_min: pr.positive("rho-min")?,
        rho_max: pr.positive("rho-max")?,
    };
    if set.points == 0 || set.rho_min >= set.rho_max {
        return Err(CliError::param("points", "need points > 0 and rho-min < rho-max"));
    }
    let checks = suites::fields_suite(&set, ctx.seed)?;
    out.csv("invariants.csv", CHECK_HEADER, &check_rows(&checks))?;
    let rhos = pr.decades("rho-decades", pr.usize("per-decade")?)?;
    let table = suites::frame_table(&rhos, 200, ctx.seed)?;
    let rows: Vec<Vec<String>> = table.iter().map(|r| row(&[r[0], r[1], r[2], r[2] * r[0]])).collect();
    out.csv("frame.csv", &["rho", "max_error_entry_times_rho_over_2", "dilatation_minus_1", "dilatation_times_rho"], &rows)?;
    let mut summary = check_summary(&checks);
    for r in &table {
        summary.push(format!("rho {:>10.3e}  E rho/2 {:.4}  (l3/l1 - 1) rho {:.4}", r[0], r[1], r[2] * r[0]));
    }
    Ok(Outcome { summary, ..Default::default() })
}

fn trace_curve(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let c = trace_base_curve(ctx.params.positive("gap")?)?;
    let rows: Vec<Vec<String>> = c
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| vec![i.to_string(), num(p.x), num(p.y), num(p.z), num(c.cyl_radius[i]), num(szulkin(p))])
        .collect();
    out.csv("curve.csv", &["index", "x", "y", "z", "cyl_radius", "s"], &rows)?;
    out.ply("curve.ply", &c.points)?;
    out.svg("curve.svg", &svg::cone_figure(&c.points, "nodal cone {s = 0}, scaled copies t = 1/4 .. 1"))?;
    let residual = c.points.iter().map(|p| szulkin(p).abs()).fold(0.0, f64::max);
    Ok(Outcome {
        summary: vec![
            format!("{} vertices, length {:.9}, gap {:.3e}", c.len(), c.length(), c.gap),
            format!("max |s| on vertices {residual:.1e}, max cylindrical radius {:.6}", c.max_cyl_radius()),
        ],
        ..Default::default()
    })
}

fn sample(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let kind = pr.domain()?;
    let scale = log_scale(pr, "rho")?;
    let (r, t_min, gap) = (pr.positive("R")?, pr.positive("t-min")?, pr.positive("gap")?);
    let c = curve(pr)?;
    let cloud = sample_interface(&c, &kind, scale, r, t_min, gap)?;
    out.ply("cloud.ply", &cloud.points)?;
    let title = format!("{kind} at rho = {}", scale.rho());
    out.svg("projection.svg", &svg::z_projection(&cloud.points, &title))?;
    let zmax = cloud.points.iter().map(|p| p.z.abs()).fold(0.0, f64::max);
    out.csv(
        "cloud.csv",
        &["domain", "rho", "R", "t_min", "gap", "points", "max_abs_z"],
        &[vec![kind.to_string(), num(scale.rho()), num(r), num(t_min), num(cloud.gap), cloud.len().to_string(), num(zmax)]],
    )?;
    Ok(Outcome {
        summary: vec![format!("{} points of {kind} in B_{r} (gap {:.3e}), max |z| {zmax:.3e}", cloud.len(), cloud.gap)],
        ..Default::default()
    })
}

fn blowup(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let theta0 = pr.f64("theta0")?;
    let (kmin, kmax) = (pr.usize("kmin")? as i64, pr.usize("kmax")? as i64);
    if kmin > kmax {
        return Err(CliError::param("kmin", "must not exceed kmax"));
    }
    let r = pr.positive("R")?;
    let ks: Vec<i64> = (kmin..=kmax).collect();
    let c = curve(pr)?;
    let prof = TwistProfile::log_log();
    let pts = blowup_convergence(&c, prof, theta0, &ks, r, &HdOptions::default())?;
    let rows: Vec<Vec<String>> = pts
        .iter()
        .map(|b| vec![b.k.to_string(), num(b.rho), num(b.distance), num(b.matched_bound), num(b.envelope)])
        .collect();
    out.csv("blowup.csv", &["k", "rho_k", "d_k", "matched_bound", "rho_k_pow_minus_half"], &rows)?;
    if pr.bool("ply")? {
        let (t_min, gap) = (pr.positive("t-min")?, pr.positive("cloud-gap")?);
        out.ply("reference.ply", &sample_rotated_cone(&c, theta0, r, t_min, gap).points)?;
        for b in &pts {
            let cloud = sample_profile_shells(&c, prof, LogScale::new(b.rho)?, 0.0, r, t_min, gap)?;
            out.ply(&format!("interface-k{}.ply", b.k), &cloud.points)?;
        }
    }
    let mut summary: Vec<String> = pts
        .iter()
        .map(|b| format!("k {}  rho {:.6e}  D {:.4e}  matched bound {:.4e}", b.k, b.rho, b.distance, b.matched_bound))
        .collect();
    for w in pts.windows(2) {
        summary.push(format!("D_{}/D_{} = {:.4e}", w[1].k, w[0].k, w[1].distance / w[0].distance));
    }
    Ok(Outcome { summary, ..Default::default() })
}

fn hd_bound(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let prof = pr.profile()?;
    let c = curve(pr)?;
    let eps_fixed = pr.optional_f64("eps")?;
    let opts = HdOptions::default();
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for k in pr.i64_list("k")? {
        let scale = LogScale::from_ln_rho(TAU * k as f64).map_err(|e| CliError::param("k", e.to_string()))?;
        let eps = eps_fixed.unwrap_or_else(|| scale.rho().powf(-0.5));
        for r in pr.f64_list("R")? {
            let l = hd_lemma_check(&c, prof, scale, r, eps, &opts)?;
            rows.push(vec![k.to_string(), num(scale.rho()), num(r), num(eps), num(l.lhs), num(l.rhs_sup), num(l.ratio), num(l.twist_sup)]);
            ratios.push((k, r, l.ratio));
        }
    }
    out.csv("hd_bound.csv", &["k", "rho", "R", "eps", "lhs", "rhs_sup", "ratio", "twist_sup"], &rows)?;
    let fitted = ratios.iter().map(|x| x.2).fold(0.0, f64::max);
    let mut summary: Vec<String> = ratios.iter().map(|(k, r, q)| format!("k {k}  R {r}  ratio {q:.4e}")).collect();
    summary.push(format!("fitted C = {fitted:.4}"));
    Ok(Outcome { summary, ..Default::default() })
}

fn angles(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let prof = pr.profile()?;
    let (count, base, tol, list) = (pr.usize("count")?, pr.f64("base")?, pr.positive("tol")?, pr.usize("list")?);
    if count == 0 || !(base > 1.0) {
        return Err(CliError::param("base", "need count >= 1 and base > 1"));
    }
    let step = base.ln();
    let scales: Vec<LogScale> = (1..=count).map(|i| LogScale::new(i as f64 * step)).collect::<Result<_, _>>()?;
    let rep = accumulation_coverage(&prof, &scales, tol)?;
    let rows: Vec<Vec<String>> = scales
        .iter()
        .take(list)
        .enumerate()
        .map(|(i, s)| theta_jet(&prof, *s).map(|j| vec![(i + 1).to_string(), num(s.rho()), num(j.theta), num(j.theta_mod)]))
        .collect::<Result<_, _>>()?;
    out.csv("angles.csv", &["i", "rho", "theta", "theta_mod"], &rows)?;
    let acc: Vec<Vec<String>> = rep.accumulation.iter().map(|a| row(&[*a])).collect();
    out.csv("accumulation.csv", &["angle"], &acc)?;
    out.csv(
        "coverage.csv",
        &["scales", "tol", "targets", "coverage", "diameter", "non_unique"],
        &[vec![count.to_string(), num(tol), rep.targets.to_string(), num(rep.coverage), num(rep.diameter), rep.non_unique.to_string()]],
    )?;
    Ok(Outcome {
        summary: vec![format!(
            "coverage {:.4} of {} targets; accumulation set of {} targets, diameter {:.4}; non-unique: {}",
            rep.coverage,
            rep.targets,
            rep.accumulation.len(),
            rep.diameter,
            rep.non_unique
        )],
        ..Default::default()
    })
}

fn phase(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let prof = TwistProfile::power(pr.positive("p")?)?;
    let rhos = pr.decades("rho-decades", pr.usize("per-decade")?)?;
    let r = pr.positive("R")?;
    let c = curve(pr)?;
    let opts = HdOptions::default();
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for rho in rhos {
        let res = best_rotation_distance(&c, prof, LogScale::new(rho)?, r, &opts)?;
        rows.push(row(&[res.rho, res.phi_star, res.d_star, res.bound]));
        summary.push(format!("rho {:.3e}  phi* {:.6}  d* {:.4e}", res.rho, res.phi_star, res.d_star));
    }
    out.csv("phase.csv", &["rho", "phi_star", "d_star", "matched_bound"], &rows)?;
    Ok(Outcome { summary, ..Default::default() })
}

fn corkscrew(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let prof = TwistProfile::power(pr.positive("p")?)?;
    let s = pr.positive("s")?;
    let kind = DomainKind::TwistedSzulkin(prof);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for rho in pr.decades("rho-decades", pr.usize("per-decade")?)? {
        let scale = LogScale::new(rho)?;
        let field = SignedField::new(kind, Some(scale));
        let q = twist_map(&prof, MapDirection::Forward, &Vec3::new(0.0, 1.0, 0.0), Some(scale));
        let res = corkscrew_probe(&field, &q, s);
        rows.push(row(&[rho, res.m_plus, res.m_minus, res.m()]));
        summary.push(format!("rho {rho:.3e}  M {:.4e}", res.m()));
    }
    out.csv("corkscrew.csv", &["rho", "m_plus", "m_minus", "m"], &rows)?;
    Ok(Outcome { summary, ..Default::default() })
}

fn area(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let kind = pr.domain()?;
    let radii = pr.decades("radii-decades", pr.usize("per-decade")?)?;
    let c = curve(pr)?;
    let res = area_ratio_probe(&c, &kind, log_scale(pr, "rho")?, &pr.vec3("center")?, &radii, pr.positive("resolution")?)?;
    let rows: Vec<Vec<String>> = res.iter().map(|a| row(&[a.r, a.area, a.ratio])).collect();
    out.csv("area.csv", &["r", "area", "ratio"], &rows)?;
    let (lo, hi) = res.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), a| (lo.min(a.ratio), hi.max(a.ratio)));
    Ok(Outcome {
        summary: vec![format!("area / r^2 in [{lo:.6}, {hi:.6}] over {} radii", res.len())],
        ..Default::default()
    })
}

fn slopes(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let amp = pr.amplitude()?;
    let targets = graph_slope_targets(pr.f64("m")?, &pr.i64_list("k")?)?;
    let one = Vec2::new(1.0, 0.0);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for t in &targets {
        let slope = match t.scale {
            Some(s) => Some(graph_jet(amp, &one, Some(s))?.1.x),
            None => None,
        };
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        rows.push(vec![t.k.to_string(), opt(t.a), opt(t.scale.map(|s| s.rho())), t.pure.to_string(), opt(slope)]);
        summary.push(format!("k {}  rho' {}  slope at (1,0) {}", t.k, opt(t.scale.map(|s| s.rho())), opt(slope)));
    }
    out.csv("slopes.csv", &["k", "a", "rho", "pure", "slope_at_1_0"], &rows)?;
    let mut panels = Vec::new();
    let mut prows = Vec::new();
    let mut zmax: f64 = 0.0;
    for r in pr.f64_list("panels")? {
        let offset = if r == 1.0 {
            None
        } else {
            Some(LogScale::from_radius(r).map_err(|e| CliError::param("panels", e.to_string()))?)
        };
        let rho = offset.map_or(0.0, |s| s.rho());
        let mut curves = Vec::new();
        for y in [0.0, 0.5] {
            let c: Vec<(f64, f64)> = (0..=400)
                .map(|i| {
                    let x = -1.0 + i as f64 / 200.0;
                    (x, graph_value(amp, &Vec2::new(x, y), offset))
                })
                .collect();
            zmax = c.iter().map(|(_, z)| z.abs()).fold(zmax, f64::max);
            curves.push(c);
        }
        let slope = graph_jet_at(amp, &one, rho).1.x;
        prows.push(row(&[r, rho, amp.jet(rho).0, slope]));
        panels.push(svg::Panel { title: format!("r = {r:e}: slope {slope:.3} at (1,0)"), curves });
    }
    out.csv("panels.csv", &["r", "rho", "amplitude", "slope_at_1_0"], &prows)?;
    out.svg("panels.svg", &svg::panels(&panels, zmax.max(0.1) * 1.1))?;
    Ok(Outcome { summary, ..Default::default() })
}

fn solve(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let mut spec = SolveSpec::new(pr.domain()?, pr.side()?, log_scale(pr, "rho")?, pr.positive("K")?, pr.positive("h")?);
    spec.tolerance = pr.positive("tol")?;
    spec.max_iterations = pr.usize("max-iter")?;
    spec.inner_radius = pr.optional_f64("r-in")?;
    let sol = solve_conjugated(&spec)?;
    out.grid("solution.grid", &sol)?;
    out.csv(
        "solve.csv",
        &["unknowns", "iterations", "relative_residual", "cut_faces", "min_cut_fraction", "min_value"],
        &[vec![
            sol.unknowns.to_string(),
            sol.report.iterations.to_string(),
            num(sol.report.relative_residual),
            sol.cut_faces.to_string(),
            num(sol.min_cut_fraction),
            num(sol.min_value),
        ]],
    )?;
    Ok(Outcome {
        summary: vec![format!(
            "{} unknowns, {} iterations, residual {:.2e}, {} cut faces",
            sol.unknowns, sol.report.iterations, sol.report.relative_residual, sol.cut_faces
        )],
        tolerance_tags: BTreeMap::from([("solution.grid".to_string(), format!("relative residual {}", spec.tolerance))]),
        ..Default::default()
    })
}

fn walk_setup(pr: &Params, threads: Option<usize>) -> CliResult<(DomainKind, PatchPartition, WosOptions)> {
    let part = PatchPartition::new(pr.positive("r-max")?, pr.usize("levels")?, pr.usize("sectors")?)?;
    let opts = WosOptions {
        epsilon: pr.positive("epsilon")?,
        step_cap: pr.usize("step-cap")?,
        split_factor: pr.usize("split-factor")? as u64,
        split_levels: pr.usize("split-levels")?,
        threads,
    };
    Ok((pr.domain()?, part, opts))
}

fn walks(pr: &Params) -> CliResult<u64> {
    let n = pr.usize("walks")?;
    if n == 0 {
        return Err(CliError::param("walks", "must be positive"));
    }
    Ok(n as u64)
}

fn histogram_rows(h: &MeasureHistogram) -> Vec<Vec<String>> {
    let part = h.partition;
    (0..part.len())
        .map(|bin| {
            let (row_i, sector) = (bin / part.sectors, bin % part.sectors);
            let inner = match row_i {
                0 => part.r_max,
                j if j > part.levels => 0.0,
                j => part.row_outer(j) / 2.0,
            };
            let outer = part.row_outer(row_i);
            vec![
                bin.to_string(),
                row_i.to_string(),
                sector.to_string(),
                num(inner),
                num(outer),
                h.hits[bin].to_string(),
                num(h.probability(bin)),
                num(h.standard_error(bin)),
            ]
        })
        .collect()
}

fn wos(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let (kind, part, opts) = walk_setup(pr, ctx.threads)?;
    let side = pr.side()?;
    let h = wos_sample(kind, side.default_pole(), part, walks(pr)?, ctx.seed, &opts)?;
    out.csv(
        "histogram.csv",
        &["bin", "row", "sector", "r_inner", "r_outer", "hits", "probability", "std_error"],
        &histogram_rows(&h),
    )?;
    let balls: Vec<Vec<String>> = (0..=part.levels)
        .map(|j| {
            let (m, se) = h.ball_measure(j);
            vec![j.to_string(), num(part.r_max / 2f64.powi(j as i32)), num(m), num(se)]
        })
        .collect();
    out.csv("balls.csv", &["j", "r", "measure", "std_error"], &balls)?;
    let mut summary = vec![format!(
        "{} walks from {:?}: escape fraction {:.2e}, {} steps",
        h.walks,
        [h.pole.x, h.pole.y, h.pole.z],
        h.escape_fraction(),
        h.steps
    )];
    let (m0, se0) = h.ball_measure(0);
    summary.push(format!("omega(B_{}) = {m0:.6} +- {se0:.2e}", part.r_max));
    if h.escape_warning() {
        summary.push("warning: more than 1% of walks hit the step cap".into());
    }
    Ok(Outcome { summary, ..Default::default() })
}

fn logh(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let pr = ctx.params;
    let (kind, part, opts) = walk_setup(pr, ctx.threads)?;
    let n = walks(pr)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let (s_plus, s_minus): (u64, u64) = (rng.gen(), rng.gen());
    let plus = wos_sample(kind, Side::Plus.default_pole(), part, n, s_plus, &opts)?;
    let minus = wos_sample(kind, Side::Minus.default_pole(), part, n, s_minus, &opts)?;
    let levels: Vec<usize> = pr
        .i64_list("rows")?
        .into_iter()
        .map(|l| usize::try_from(l).map_err(|_| CliError::param("rows", "rows must be nonnegative")))
        .collect::<CliResult<_>>()?;
    let est = log_h_profile(&plus, &minus, &levels)?;
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = est
        .rows
        .iter()
        .map(|r| vec![r.level.to_string(), num(r.r), opt(r.statistic), num(r.band), opt(r.ball_statistic), num(r.ball_band)])
        .collect();
    out.csv("logh.csv", &["level", "r", "sector_statistic", "band", "ball_statistic", "ball_band"], &rows)?;
    let sym = symmetric_patch_check(&plus, &minus)?;
    out.csv(
        "symmetry.csv",
        &["patches", "within_three_sigma", "fraction", "max_z"],
        &[vec![sym.patches.to_string(), sym.within_three_sigma.to_string(), num(sym.fraction()), num(sym.max_z)]],
    )?;
    out.csv("histogram-plus.csv", &["bin", "row", "sector", "r_inner", "r_outer", "hits", "probability", "std_error"], &histogram_rows(&plus))?;
    out.csv("histogram-minus.csv", &["bin", "row", "sector", "r_inner", "r_outer", "hits", "probability", "std_error"], &histogram_rows(&minus))?;
    let mut summary: Vec<String> = est
        .rows
        .iter()
        .map(|r| match r.statistic {
            Some(s) => format!("2^-{}: {s:.4} +- {:.4}", r.level, r.band),
            None => format!("2^-{}: inconclusive (empty sector)", r.level),
        })
        .collect();
    summary.push(format!("{}/{} patches symmetric within 3 sigma", sym.within_three_sigma, sym.patches));
    Ok(Outcome { summary, ..Default::default() })
}

fn report(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let input = ctx.params.str("input");
    if input.is_empty() {
        return Err(CliError::param("input", "an input directory is required"));
    }
    let dir = Path::new(input);
    if !dir.is_dir() {
        return Err(CliError::MissingArtifact(format!("{input} is not a directory")));
    }
    let mut plys: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ply"))
        .collect();
    plys.sort();
    if plys.is_empty() {
        return Err(CliError::MissingArtifact(format!("no .ply files in {input}")));
    }
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for path in &plys {
        let (points, source) = read_ply(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("cloud").to_string();
        out.svg(&format!("{stem}.svg"), &svg::z_projection(&points, &stem))?;
        let reach = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        rows.push(vec![stem.clone(), source.clone().unwrap_or_default(), points.len().to_string(), num(reach)]);
        summary.push(format!("{stem}: {} points, max |p| {reach:.4}", points.len()));
    }
    out.csv("figures.csv", &["artifact", "source_manifest", "points", "max_norm"], &rows)?;
    Ok(Outcome { summary, ..Default::default() })
}

fn verify(ctx: &Ctx, out: &mut RunDir) -> CliResult<Outcome> {
    let suite = ctx.params.str("suite");
    let mut rows = Vec::new();
    let all = suite == "all";
    if !(all || ["fields", "geometry", "potential"].contains(&suite)) {
        return Err(CliError::param("suite", format!("expected fields, geometry, potential or all, got '{suite}'")));
    }
    if all || suite == "fields" {
        rows.extend(suites::fields_suite(&FieldSettings::default(), ctx.seed)?);
    }
    if all || suite == "geometry" {
        rows.extend(suites::geometry_suite()?);
    }
    if all || suite == "potential" {
        rows.extend(suites::potential_suite(ctx.seed, ctx.threads)?);
    }
    out.csv("verify.csv", CHECK_HEADER, &check_rows(&rows))?;
    let failed = rows.iter().filter(|c| !c.pass).count();
    let mut summary = check_summary(&rows);
    summary.push(format!("{} of {} checks passed", rows.len() - failed, rows.len()));
    Ok(Outcome { summary, failed, checked: rows.len(), ..Default::default() })
}
