use std::f64::consts::TAU;

use fblab_core::fields::*;
use fblab_core::potential::*;
use fblab_core::Vec3;
use nalgebra::DMatrix;

type DMat = DMatrix<f64>;
use proptest::prelude::*;

fn spd(n: usize, entries: &[f64]) -> DMat {
    let m = DMat::from_fn(n, n, |i, j| entries[(i * n + j) % entries.len()]);
    &m * m.transpose() + DMat::identity(n, n) * n as f64 * 0.1
}

fn sparse(a: &DMat) -> CsrMatrix {
    let rows = (0..a.nrows())
        .map(|i| (0..a.ncols()).filter(|&j| a[(i, j)] != 0.0).map(|j| (j as u32, a[(i, j)])).collect())
        .collect();
    CsrMatrix::from_rows(rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pcg_matches_dense_cholesky(n in 2usize..24, entries in prop::collection::vec(-1.0f64..1.0, 7..40), rhs in prop::collection::vec(-1.0f64..1.0, 24)) {
        let a = spd(n, &entries);
        let b = DMat::from_fn(n, 1, |i, _| rhs[i]);
        let exact = a.clone().cholesky().unwrap().solve(&b);
        let mut x = vec![0.0; n];
        pcg(&sparse(&a), &rhs[..n], &mut x, 1e-13, 10_000).unwrap();
        let scale = exact.amax().max(1.0);
        for i in 0..n {
            prop_assert!((x[i] - exact[(i, 0)]).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn patch_bins_are_consistent(x in -3.0f64..3.0, y in -3.0f64..3.0, levels in 1usize..12, half in 1usize..8) {
        prop_assume!(x.hypot(y) > 1e-9);
        let part = PatchPartition::new(1.0, levels, 2 * half).unwrap();
        let p = Vec3::new(x, y, 0.0);
        let bin = part.bin_of(&p);
        prop_assert!(bin < part.len());
        prop_assert_eq!(part.antipodal_bin(bin), part.bin_of(&-p));
        let row = bin / part.sectors;
        let r = p.norm();
        prop_assert!(r < part.row_outer(row));
        if row <= part.levels {
            prop_assert!(r >= part.row_outer(row + 1));
        }
    }
}

#[test]
fn pcg_solves_the_discrete_laplacian() {
    let n = 30;
    let h2 = 1.0 / ((n + 1) * (n + 1)) as f64;
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![(i as u32, 2.0 / h2)];
            if i > 0 {
                r.push((i as u32 - 1, -1.0 / h2));
            }
            if i + 1 < n {
                r.push((i as u32 + 1, -1.0 / h2));
            }
            r
        })
        .collect();
    let a = CsrMatrix::from_rows(rows);
    let b = vec![2.0; n];
    let mut x = vec![0.0; n];
    let rep = pcg(&a, &b, &mut x, 1e-14, 1000).unwrap();
    assert!(rep.relative_residual <= 1e-14);
    for (i, v) in x.iter().enumerate() {
        let t = (i + 1) as f64 / (n + 1) as f64;
        assert!((v - t * (1.0 - t)).abs() <= 1e-10);
    }
}

#[test]
fn harmonic_cubic_is_recovered_at_second_order() {
    let kind = DomainKind::TwistedSzulkin(TwistProfile::none());
    let mut errors = Vec::new();
    for h in [0.125, 0.0625, 0.03125] {
        let mut spec = SolveSpec::new(kind, Side::Plus, LogScale::new(10.0).unwrap(), 1.0, h);
        spec.tolerance = 1e-13;
        let sol = solve_conjugated(&spec).unwrap();
        errors.push(sol.max_deviation(szulkin, |_| true));
    }
    assert!(errors[2] <= 1e-3, "{errors:?}");
    assert!(errors.windows(2).all(|w| w[0] / w[1] >= 2.0), "{errors:?}");
}

#[test]
fn untwisted_ratios_are_one() {
    let kind = DomainKind::TwistedSzulkin(TwistProfile::none());
    let mut spec = SolveSpec::new(kind, Side::Plus, LogScale::new(10.0).unwrap(), 2.0, 0.0625);
    spec.tolerance = 1e-12;
    let plus = solve_conjugated(&spec).unwrap();
    let minus = plus.antipodal();
    let curve = fblab_core::surfgeo::trace_base_curve(0.01).unwrap();
    let samples = cone_samples(&curve.points, &[1.0], 40);
    let ratios = interface_gradient_ratio(&plus, &minus, &samples).unwrap();
    assert!(!ratios.is_empty());
    // both slopes approximate |grad s|, which is even
    for s in &ratios {
        let exact = szulkin_gradient(&s.point).norm();
        assert!((s.slope_plus / exact - 1.0).abs() <= 0.1, "{s:?} vs {exact}");
        assert!(s.log_ratio().abs() <= 0.1, "{s:?}");
    }
    println!("max |log ratio| {:.3e}", max_log_ratio(&ratios));
}

#[test]
fn twisted_deviation_shrinks_with_scale() {
    let mut devs = Vec::new();
    for l in [6.0, 8.0] {
        let scale = LogScale::from_ln_rho(l).unwrap();
        let mut spec = SolveSpec::new(DomainKind::TwistedSzulkin(TwistProfile::log_log()), Side::Plus, scale, 1.0, 0.125);
        spec.tolerance = 1e-10;
        let twisted = solve_conjugated(&spec).unwrap();
        spec.identity_coefficient = true;
        let reference = solve_conjugated(&spec).unwrap();
        devs.push((scale.rho(), twisted.max_difference(&reference, |_| true).unwrap()));
    }
    // the pulled-back operator differs from the Laplacian by O(1/rho)
    let (r0, d0) = devs[0];
    let (r1, d1) = devs[1];
    assert!(d1 < d0, "{devs:?}");
    let ratio = (d0 * r0) / (d1 * r1);
    assert!((0.5..=2.0).contains(&ratio), "{devs:?}");
}

fn poisson_patch(pole: &Vec3, part: &PatchPartition, row: usize, sector: usize) -> f64 {
    // midpoint rule in (log r, angle) against the half-space Poisson kernel
    let r_hi = part.row_outer(row).min(1e4);
    let r_lo = if row == part.rows() - 1 { 1e-8 } else { part.row_outer(row + 1) };
    let (a_lo, a_hi) = (TAU * sector as f64 / part.sectors as f64, TAU * (sector + 1) as f64 / part.sectors as f64);
    let (nr, na) = (400, 60);
    let (l0, l1) = (r_lo.ln(), r_hi.ln());
    let mut sum = 0.0;
    for i in 0..nr {
        let r = (l0 + (l1 - l0) * (i as f64 + 0.5) / nr as f64).exp();
        for j in 0..na {
            let a = a_lo + (a_hi - a_lo) * (j as f64 + 0.5) / na as f64;
            let x = Vec3::new(r * a.cos(), r * a.sin(), 0.0);
            let d = (x - pole).norm();
            sum += pole.z / (TAU * d * d * d) * r * r;
        }
    }
    sum * (l1 - l0) / nr as f64 * (a_hi - a_lo) / na as f64
}

#[test]
fn walks_reproduce_the_poisson_kernel() {
    let kind = DomainKind::OscillatingGraph(GraphAmplitude::Flat);
    let pole = Vec3::new(0.3, -0.2, 0.8);
    let part = PatchPartition::new(1.0, 3, 8).unwrap();
    let hist = wos_sample(kind, pole, part, 40_000, 3, &WosOptions::default()).unwrap();
    let mut within = 0;
    for bin in 0..part.len() {
        let exact = poisson_patch(&pole, &part, bin / part.sectors, bin % part.sectors);
        let z = (hist.probability(bin) - exact).abs() / hist.standard_error(bin).max(1e-4);
        if z <= 3.0 {
            within += 1;
        }
    }
    assert!(within as f64 >= 0.95 * part.len() as f64, "{within}/{}", part.len());
}

#[test]
fn splitting_is_unbiased() {
    let kind = DomainKind::OscillatingGraph(GraphAmplitude::Flat);
    let part = PatchPartition::new(1.0, 4, 4).unwrap();
    let opts = WosOptions { split_levels: 4, split_factor: 4, ..WosOptions::default() };
    let hist = wos_sample(kind, Vec3::new(0.0, 0.0, 1.0), part, 8_000, 5, &opts).unwrap();
    for j in 0..=4 {
        let (p, se) = hist.ball_measure(j);
        let exact = half_space_disc_measure(1.0, 0.5f64.powi(j as i32));
        assert!((p - exact).abs() <= 4.0 * se.max(1e-4), "j={j}: {p} vs {exact} ({se})");
    }
}

#[test]
fn histograms_do_not_depend_on_threads() {
    let kind = DomainKind::TwistedSzulkin(TwistProfile::log_log());
    let part = PatchPartition::new(0.5, 3, 4).unwrap();
    let pole = Side::Plus.default_pole();
    let run = |threads| {
        let o = WosOptions { threads: Some(threads), split_levels: 1, ..WosOptions::default() };
        wos_sample(kind, pole, part, 400, 9, &o).unwrap()
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.hits, b.hits);
    assert_eq!(a.batch_hits, b.batch_hits);
    assert_eq!(a.steps, b.steps);
}
