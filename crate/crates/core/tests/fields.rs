use std::collections::BTreeMap;

use fblab_core::fields::*;
use fblab_core::{Mat3, Vec2, Vec3};
use proptest::prelude::*;

fn point(r: f64) -> impl Strategy<Value = Vec3> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn scale() -> impl Strategy<Value = LogScale> {
    (3.0f64..60.0).prop_map(|l| LogScale::new(l.exp()).unwrap())
}

fn profile() -> impl Strategy<Value = TwistProfile> {
    prop_oneof![
        Just(TwistProfile::log_log()),
        Just(TwistProfile::none()),
        (0.2f64..0.95).prop_map(|p| TwistProfile::power(p).unwrap()),
    ]
}

proptest! {
    #[test]
    fn twist_is_an_isometry_on_spheres(p in point(3.0), prof in profile(), s in scale()) {
        let fwd = twist_map(&prof, MapDirection::Forward, &p, Some(s));
        let back = twist_map(&prof, MapDirection::Backward, &fwd, Some(s));
        prop_assert!((back - p).norm() <= 1e-12 * (1.0 + p.norm()));
        prop_assert!((fwd.norm() - p.norm()).abs() <= 1e-12 * (1.0 + p.norm()));
        prop_assert_eq!(fwd.z, p.z);
    }

    #[test]
    fn twist_is_volume_preserving(p in point(3.0), prof in profile(), s in scale()) {
        prop_assume!(p.norm() > 1e-3);
        for d in [MapDirection::Forward, MapDirection::Backward] {
            let f = twist_frame(&prof, d, &p, Some(s));
            let e = f.error.norm();
            prop_assert!((f.jacobian.determinant() - 1.0).abs() <= 1e-12 * (1.0 + e) * (1.0 + e));
        }
    }

    #[test]
    fn szulkin_is_odd_and_cubic(p in point(2.0), t in 0.1f64..4.0) {
        prop_assert!((szulkin(&-p) + szulkin(&p)).abs() <= 1e-12);
        prop_assert!((szulkin(&(p * t)) - t * t * t * szulkin(&p)).abs() <= 1e-12 * (1.0 + t.powi(3)) * 10.0);
    }

    #[test]
    fn graph_is_odd(x in -2.0f64..2.0, y in -2.0f64..2.0, s in scale()) {
        prop_assume!(x.hypot(y) > 1e-6);
        let q = Vec2::new(x, y);
        let v = graph_value(GraphAmplitude::Oscillating, &q, Some(s));
        let w = graph_value(GraphAmplitude::Oscillating, &-q, Some(s));
        prop_assert_eq!(v, -w);
    }

    #[test]
    fn graph_shear_inverts(p in point(2.0), s in scale()) {
        prop_assume!(p.x.hypot(p.y) > 1e-6);
        let a = GraphAmplitude::Oscillating;
        let f = graph_map(a, MapDirection::Forward, &p, Some(s));
        let b = graph_map(a, MapDirection::Backward, &f, Some(s));
        prop_assert!((b - p).norm() <= 1e-12 * (1.0 + p.norm()));
        let j = graph_map_jacobian(a, MapDirection::Forward, &p, Some(s)).unwrap();
        prop_assert!((j.determinant() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(j * Vec3::z(), Vec3::z());
    }

    #[test]
    fn coefficient_is_symmetric_unimodular(p in point(3.0), s in scale()) {
        prop_assume!(p.norm() > 1e-2);
        for kind in [DomainKind::TwistedSzulkin(TwistProfile::log_log()), DomainKind::OscillatingGraph(GraphAmplitude::Oscillating)] {
            prop_assume!(s.at(p.norm()) > PURE_RHO);
            prop_assume!(p.x.hypot(p.y) > 1e-6);
            let c = pullback_coefficient(&kind, s, &p).unwrap();
            prop_assert!((c.b - c.b.transpose()).amax() <= 1e-12 * c.b.amax());
            prop_assert!((c.b.determinant() - 1.0).abs() <= 1e-8);
            prop_assert!(c.lambda >= 1.0);
        }
    }

    #[test]
    fn log_scale_round_trips(l in -30.0f64..-0.01) {
        let r = l.exp();
        let s = LogScale::from_radius(r).unwrap();
        prop_assert!((s.to_radius() - r).abs() <= 1e-14 * r);
        prop_assert!((s.at(2.0) - (s.rho() - 2f64.ln())).abs() <= 1e-12 * (1.0 + s.rho().abs()));
    }

    #[test]
    fn hermite_blend_is_monotone(y in 0.1f64..5.0, m in 0.0f64..1.0) {
        let b = HermiteBlend::to(y, m);
        prop_assume!(b.is_monotone());
        let mut prev = b.value(0.0);
        for i in 1..=200 {
            let v = b.value(PURE_RHO * i as f64 / 200.0);
            prop_assert!(v >= prev - 1e-15);
            prev = v;
        }
    }
}

/// Polynomials over `Q(sqrt 3)` with exponents of `(x, y, z)`; coefficients
/// are `(a, b)` meaning `a + b sqrt 3` with integer-valued `a, b` after
/// scaling by a power of two.
type Poly = BTreeMap<[u32; 3], (f64, f64)>;

fn mul_q3(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 + 3.0 * a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in p {
        for (eb, cb) in q {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let c = mul_q3(*ca, *cb);
            let slot = out.entry(e).or_insert((0.0, 0.0));
            slot.0 += c.0;
            slot.1 += c.1;
        }
    }
    out.retain(|_, c| c.0 != 0.0 || c.1 != 0.0);
    out
}

fn poly_add(p: &mut Poly, q: &Poly, scale: f64) {
    for (e, c) in q {
        let slot = p.entry(*e).or_insert((0.0, 0.0));
        slot.0 += scale * c.0;
        slot.1 += scale * c.1;
    }
    p.retain(|_, c| c.0 != 0.0 || c.1 != 0.0);
}

fn monomial(e: [u32; 3], c: (f64, f64)) -> Poly {
    Poly::from([(e, c)])
}

#[test]
fn szulkin_has_threefold_symmetry_symbolically() {
    // x -> -x/2 - (sqrt3/2) y, y -> (sqrt3/2) x - y/2, z -> z
    let mut xr = monomial([1, 0, 0], (-0.5, 0.0));
    poly_add(&mut xr, &monomial([0, 1, 0], (0.0, -0.5)), 1.0);
    let mut yr = monomial([1, 0, 0], (0.0, 0.5));
    poly_add(&mut yr, &monomial([0, 1, 0], (-0.5, 0.0)), 1.0);
    let zr = monomial([0, 0, 1], (1.0, 0.0));
    let x3 = poly_mul(&poly_mul(&xr, &xr), &xr);
    let xy2 = poly_mul(&poly_mul(&xr, &yr), &yr);
    let z3 = poly_mul(&poly_mul(&zr, &zr), &zr);
    let r2z = {
        let mut a = poly_mul(&xr, &xr);
        poly_add(&mut a, &poly_mul(&yr, &yr), 1.0);
        poly_mul(&a, &zr)
    };
    let mut rotated = x3;
    poly_add(&mut rotated, &xy2, -3.0);
    poly_add(&mut rotated, &z3, 1.0);
    poly_add(&mut rotated, &r2z, -1.5);
    let mut s = monomial([3, 0, 0], (1.0, 0.0));
    poly_add(&mut s, &monomial([1, 2, 0], (-3.0, 0.0)), 1.0);
    poly_add(&mut s, &monomial([0, 0, 3], (1.0, 0.0)), 1.0);
    poly_add(&mut s, &monomial([2, 0, 1], (-1.5, 0.0)), 1.0);
    poly_add(&mut s, &monomial([0, 2, 1], (-1.5, 0.0)), 1.0);
    assert_eq!(rotated, s);
}

#[test]
fn szulkin_is_harmonic_symbolically() {
    // Laplacian of each monomial term, collected exactly
    let terms: [([u32; 3], f64); 5] = [([3, 0, 0], 1.0), ([1, 2, 0], -3.0), ([0, 0, 3], 1.0), ([2, 0, 1], -1.5), ([0, 2, 1], -1.5)];
    let mut lap: BTreeMap<[u32; 3], f64> = BTreeMap::new();
    for (e, c) in terms {
        for i in 0..3 {
            if e[i] >= 2 {
                let mut f = e;
                f[i] -= 2;
                *lap.entry(f).or_insert(0.0) += c * (e[i] * (e[i] - 1)) as f64;
            }
        }
    }
    assert!(lap.values().all(|&v| v == 0.0), "{lap:?}");
}

#[test]
fn frame_matches_finite_differences() {
    let prof = TwistProfile::log_log();
    let s = Some(LogScale::new(50.0).unwrap());
    let h = 1e-6;
    for p in [Vec3::new(0.3, -0.7, 0.2), Vec3::new(-1.2, 0.4, 0.9), Vec3::new(0.01, 0.02, -0.03)] {
        for d in [MapDirection::Forward, MapDirection::Backward] {
            let j = twist_frame(&prof, d, &p, s).jacobian;
            let mut fd = Mat3::zeros();
            for k in 0..3 {
                let mut e = Vec3::zeros();
                e[k] = h;
                let col = (twist_map(&prof, d, &(p + e), s) - twist_map(&prof, d, &(p - e), s)) / (2.0 * h);
                fd.set_column(k, &col);
            }
            assert!((j - fd).amax() < 1e-6, "{}", (j - fd).amax());
        }
    }
}

#[test]
fn error_matrix_decays_like_inverse_log() {
    // E = u (grad alpha)^T with |u| = |p| = 1 and |grad alpha| = 1 / rho
    let prof = TwistProfile::log_log();
    for l in [3.0, 10.0, 40.0] {
        let rho = f64::exp(l);
        let f = twist_frame(&prof, MapDirection::Forward, &Vec3::new(0.6, 0.8, 0.0), Some(LogScale::new(rho).unwrap()));
        assert!(f.error_max_entry() * rho <= 1.0 + 1e-9);
        assert!(f.error_max_entry() * rho >= 0.25);
        assert!((f.error.norm() * rho - 1.0).abs() <= 1e-9);
    }
}
