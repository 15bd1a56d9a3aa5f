use std::f64::consts::PI;

use num_complex::Complex64;
use pihier_core::kdvlab::*;

fn sech2() -> InitialDataSpec {
    build_initial_data(2, &DataParams::default()).unwrap()
}

fn non_generic() -> InitialDataSpec {
    build_initial_data(4, &DataParams::default()).unwrap()
}

/// `f^{(j)}(z0)` from the Cauchy integral over a circle of radius `r`, trapezoidal rule.
fn cauchy_derivatives(f: impl Fn(Complex64) -> Complex64, z0: f64, r: f64, max: usize) -> Vec<f64> {
    let n = 128;
    let samples: Vec<(Complex64, Complex64)> = (0..n)
        .map(|i| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / n as f64);
            (e, f(z0 + r * e))
        })
        .collect();
    let mut fact = 1.0;
    (0..=max)
        .map(|j| {
            if j > 0 {
                fact *= j as f64;
            }
            let sum: Complex64 = samples.iter().map(|(e, v)| v / e.powu(j as u32)).sum();
            (sum / n as f64).re * fact / r.powi(j as i32)
        })
        .collect()
}

/// `f_L` continued off the real axis, written independently of the library.
fn f_l_complex(spec: &InitialDataSpec, u: Complex64) -> Complex64 {
    let w = (u + 1.0).sqrt();
    let atanh = 0.5 * ((1.0 + w) / (1.0 - w)).ln();
    match &spec.mode {
        DataMode::Direct { width } => spec.x_m - width * atanh,
        DataMode::FromFl {
            beta,
            p_coeffs,
            p_center,
        } => {
            let p: Complex64 = p_coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * (u - p_center).powu(j as u32))
                .sum();
            spec.x_m - beta * atanh - w * p
        }
    }
}

#[test]
fn sech2_catastrophe_matches_closed_form() {
    let data = sech2();
    let cp = critical_point(&data, 2).unwrap();
    let root3 = 3f64.sqrt();
    assert!((cp.t_c - root3 / 8.0).abs() < 1e-8);
    assert!((cp.u_c + 2.0 / 3.0).abs() < 1e-8);
    assert!((cp.x_c - (-root3 / 2.0 + (-1.0 / root3).atanh())).abs() < 1e-8);
    for r in cp.residuals(&data) {
        assert!(r.abs() < 1e-9);
    }
    // k from f_L''' by contour integration
    let d = cauchy_derivatives(|u| f_l_complex(&data, u), -2.0 / 3.0, 0.1, 3);
    let k = (-2.0 / 15.0 * d[3]).powf(2.0 / 7.0);
    assert!((cp.k - k).abs() < 1e-9, "{} vs {k}", cp.k);
}

#[test]
fn taylor_derivatives_match_contour_integrals() {
    for data in [sech2(), non_generic()] {
        for u in [-0.9, -2.0 / 3.0, -0.3] {
            let r = 0.5 * (u + 1.0f64).min(-u);
            let oracle = cauchy_derivatives(|z| f_l_complex(&data, z), u, r, 5);
            let ours = data.f_l_derivatives(u, 5);
            for (j, (a, b)) in ours.iter().zip(&oracle).enumerate() {
                assert!(
                    (a - b).abs() < 1e-8 * (1.0 + b.abs()),
                    "u={u} j={j}: {a} vs {b}"
                );
            }
            assert!((data.f_l(u) - ours[0]).abs() < 1e-13);
            assert!((data.f_l_prime(u) - ours[1]).abs() < 1e-11);
        }
    }
}

#[test]
fn non_generic_data_certificate() {
    let data = non_generic();
    let u_c = -2.0 / 3.0;
    let exact = data.f_l_derivatives(u_c, 5);
    for (j, d) in exact.iter().enumerate().take(5).skip(2) {
        assert!(d.abs() < 1e-10, "j={j}: {d}");
    }
    assert!((exact[5] + 400.0).abs() < 1e-9);
    let numeric = cauchy_derivatives(|z| f_l_complex(&data, z), u_c, 0.1, 5);
    assert!(numeric[3].abs() < 1e-8 && numeric[4].abs() < 1e-8);
    assert!(numeric[5] < -300.0);
    let cp = critical_point(&data, 4).unwrap();
    assert!((cp.u_c - u_c).abs() < 1e-10);
    assert!(cp.k > 0.0);
    assert_eq!(cp.fl_derivs.len(), 4);
    for r in cp.residuals(&data) {
        assert!(r.abs() < 1e-9);
    }
}

#[test]
fn breaking_time_agrees_with_the_catastrophe_system() {
    for (data, m) in [(sech2(), 2), (non_generic(), 4)] {
        let cp = critical_point(&data, m).unwrap();
        let from_system = -data.f_l_prime(cp.u_c) / 6.0;
        assert!((data.breaking_time().unwrap() - from_system).abs() < 1e-8);
        assert!((cp.t_c - from_system).abs() < 1e-8);
    }
}

#[test]
fn profile_shape() {
    for data in [sech2(), non_generic()] {
        assert!((data.u0(data.x_m) + 1.0).abs() < 1e-14);
        let h = 1e-3;
        let second = (data.u0(h) - 2.0 * data.u0(0.0) + data.u0(-h)) / (h * h);
        assert!(second > 0.1, "{second}");
        // symmetric about x_M, negative on the support, vanishing past the taper
        for x in [0.3, 1.7, 4.0] {
            assert_eq!(data.u0(x), data.u0(-x));
            assert!(data.u0(x) < 0.0);
        }
        assert_eq!(data.u0(12.5), 0.0);
        assert_eq!(data.u0(-14.0), 0.0);
    }
    let data = sech2();
    let h = 1e-4;
    let second = (data.u0(h) - 2.0 * data.u0(0.0) + data.u0(-h)) / (h * h);
    assert!((second - 2.0).abs() < 1e-6);
}

#[test]
fn decreasing_branch_inverts_f_l() {
    for data in [sech2(), non_generic()] {
        for i in 1..200 {
            let u = -1.0 + i as f64 / 200.0;
            let x = data.f_l(u);
            assert!((data.u0(x) - u).abs() < 1e-10, "u = {u}");
        }
    }
}

#[test]
fn construction_errors() {
    assert_eq!(
        build_initial_data(3, &DataParams::default()),
        Err(KdvError::InvalidOrder(3))
    );
    let positive = DataParams {
        top_derivative: 5.0,
        ..DataParams::default()
    };
    assert!(matches!(
        build_initial_data(4, &positive),
        Err(KdvError::InvalidParameter(_))
    ));
    // an inflection this close to u = 0 forces P(-1) < -beta: f_L turns upward near u = -1
    let shallow = DataParams {
        u_c: -0.3,
        top_derivative: -10.0,
        ..DataParams::default()
    };
    assert!(matches!(
        build_initial_data(4, &shallow),
        Err(KdvError::MonotonicityLost { .. })
    ));
    let off = DataParams {
        u_c: 0.2,
        ..DataParams::default()
    };
    assert!(matches!(
        build_initial_data(6, &off),
        Err(KdvError::InvalidParameter(_))
    ));
    // generic data has f_L''' != 0 at its catastrophe
    assert!(matches!(
        critical_point(&sech2(), 4),
        Err(KdvError::DerivativeChainBroken { .. })
    ));
}

#[test]
fn hopf_at_time_zero_and_along_characteristics() {
    let data = sech2();
    let t_c = data.breaking_time().unwrap();
    for x in [-3.0, -0.4, 0.0, 1.2] {
        assert_eq!(hopf_solve_below(&data, x, 0.0, t_c).unwrap(), data.u0(x));
    }
    for t in [0.05, 0.15, 0.2] {
        for xi in [-2.5, -1.0, -0.66, 0.0, 0.8, 2.0] {
            let u = data.u0(xi);
            let got = hopf_solve_below(&data, 6.0 * t * u + xi, t, t_c).unwrap();
            assert!((got - u).abs() < 1e-10, "t={t} xi={xi}");
        }
    }
    assert!(matches!(
        hopf_solve(&data, 0.0, 0.3),
        Err(KdvError::MultivaluedRegion { .. })
    ));
}

#[test]
fn hopf_matches_a_dense_characteristic_fan() {
    let data = sech2();
    let t = 0.1;
    let fan: Vec<(f64, f64)> = (0..=200_000)
        .map(|i| {
            let xi = -3.0 + 6.0 * i as f64 / 200_000.0;
            let u = -1.0 / xi.cosh().powi(2);
            (6.0 * t * u + xi, u)
        })
        .collect();
    let i = fan.iter().position(|p| p.0 > 0.0).unwrap();
    let (a, b) = (fan[i - 1], fan[i]);
    let oracle = a.1 + (b.1 - a.1) * (0.0 - a.0) / (b.0 - a.0);
    assert!((hopf_solve(&data, 0.0, t).unwrap() - oracle).abs() < 1e-8);
}

#[test]
fn zero_data_stays_zero() {
    let cfg = KdvConfig::new(1e-2, 10.0, 256);
    let f = kdv_evolve_values(&vec![0.0; 256], &cfg, &[0.3]).unwrap();
    assert!(f[0].values.iter().all(|&v| v == 0.0));
}

#[test]
fn mass_is_conserved() {
    let data = sech2();
    let cfg = KdvConfig::new(2e-2, 15.0, 8192);
    let m0: f64 = cfg.grid().iter().map(|&x| data.u0(x)).sum::<f64>() * cfg.dx();
    let f = kdv_evolve(&data, &cfg, 0.2).unwrap();
    assert!((f.mass() - m0).abs() / m0.abs() < 1e-8);
    assert!(f.steps > 0 && f.t == 0.2);
}

#[test]
fn pre_breakup_deviation_scales_like_eps_squared() {
    let data = sech2();
    let t_c = data.breaking_time().unwrap();
    let t = t_c / 2.0;
    let sup = |eps: f64| {
        let f = kdv_evolve(&data, &KdvConfig::new(eps, 15.0, 8192), t).unwrap();
        f.grid()
            .iter()
            .zip(&f.values)
            .filter(|(x, _)| x.abs() < 8.0)
            .map(|(&x, &u)| (u - hopf_solve_below(&data, x, t, t_c).unwrap()).abs())
            .fold(0.0f64, f64::max)
    };
    let (a, b) = (sup(1e-2), sup(5e-3));
    assert!(a < 1e-3);
    assert!((3.2..=4.8).contains(&(a / b)), "{}", a / b);
}

#[test]
fn under_resolved_runs_are_flagged() {
    let data = sech2();
    let err = kdv_evolve(&data, &KdvConfig::new(1e-2, 15.0, 512), 0.25).unwrap_err();
    assert!(matches!(err, KdvError::ResolutionInsufficient { .. }));
    assert!(matches!(
        kdv_evolve(&data, &KdvConfig::new(1e-2, 15.0, 1000), 0.1),
        Err(KdvError::InvalidParameter(_))
    ));
}

#[test]
fn field_interpolant_reproduces_nodes() {
    let data = sech2();
    let f = kdv_evolve(&data, &KdvConfig::new(5e-2, 15.0, 1024), 0.05).unwrap();
    let grid = f.grid();
    for j in [0, 100, 511, 700] {
        assert!((f.eval(grid[j]) - f.values[j]).abs() < 1e-12);
    }
    let t0 = kdv_evolve(&data, &KdvConfig::new(5e-2, 15.0, 1024), 0.0).unwrap();
    for x in [-0.013, 0.5, 2.71] {
        assert!((t0.eval(x) - data.u0(x)).abs() < 1e-10);
    }
}

#[test]
fn scaling_map_properties() {
    for (data, m) in [(sech2(), 2u32), (non_generic(), 4)] {
        let cp = critical_point(&data, m).unwrap();
        assert_eq!(scaling_map(&cp, cp.x_c, cp.t_c, 1e-2), (0.0, 0.0));
        let (x, t) = physical_point(&cp, 1.3, -0.7, 1e-2);
        let (s, t1) = scaling_map(&cp, x, t, 1e-2);
        assert!((s - 1.3).abs() < 1e-9 && (t1 + 0.7).abs() < 1e-9);
        // a fixed physical offset: halving eps scales s by 2^{(2m+2)/(2m+3)}
        let d = 2.0 * m as f64 + 3.0;
        let (s1, t1a) = scaling_map(&cp, cp.x_c + 0.01, cp.t_c - 0.01, 2e-2);
        let (s2, t1b) = scaling_map(&cp, cp.x_c + 0.01, cp.t_c - 0.01, 1e-2);
        assert!((s2 / s1 - 2f64.powf((2.0 * m as f64 + 2.0) / d)).abs() < 1e-12);
        assert!((t1b / t1a - 2f64.powf(2.0 * m as f64 / d)).abs() < 1e-12);
    }
    let cp = critical_point(&sech2(), 2).unwrap();
    let (s1, _) = scaling_map(&cp, cp.x_c + 0.01, cp.t_c, 1.0);
    let (s2, _) = scaling_map(&cp, cp.x_c + 0.01, cp.t_c, 0.1);
    assert!((s2 / s1 - 10f64.powf(6.0 / 7.0)).abs() < 1e-9);
}

#[test]
fn scaled_hopf_expansion_is_the_algebraic_hierarchy_equation() {
    // near the catastrophe F = 0 reads X = 6 (u-u_c)(t-t_c) + f^{(m+1)}/(m+1)! (u-u_c)^{m+1};
    // under the double scaling this must become s = A q^{m+1} + 4 t1 q with
    // A = 4 (2m+1)!! / (m+1)!
    for (data, m) in [(sech2(), 2u32), (non_generic(), 4)] {
        let cp = critical_point(&data, m).unwrap();
        let top = *cp.fl_derivs.last().unwrap();
        let fact: f64 = (1..=m + 1).map(f64::from).product();
        let dfact: f64 = (1..=2 * m + 1).step_by(2).map(f64::from).product();
        let a = 4.0 * dfact / fact;
        for (q, t1, eps) in [(0.7, 0.4, 1e-2), (-1.3, -0.8, 3e-3), (2.0, 0.0, 5e-2)] {
            let u = predicted_u(&cp, q, eps);
            let (_, t) = physical_point(&cp, 0.0, t1, eps);
            let x = cp.x_c
                + 6.0 * cp.u_c * (t - cp.t_c)
                + 6.0 * (u - cp.u_c) * (t - cp.t_c)
                + top / fact * (u - cp.u_c).powi(m as i32 + 1);
            let (s, t1_back) = scaling_map(&cp, x, t, eps);
            assert!((t1_back - t1).abs() < 1e-10);
            let expected = a * q.powi(m as i32 + 1) + 4.0 * t1 * q;
            assert!(
                (s - expected).abs() < 1e-9 * (1.0 + expected.abs()),
                "{s} vs {expected}"
            );
        }
    }
}

#[test]
fn comparison_rejects_bad_windows() {
    let data = sech2();
    let mut opts = CompareOptions::for_order(2);
    opts.window.s = [-30.0, 30.0];
    assert!(matches!(
        compare_double_scaling(&data, 2, &[2e-2, 1e-2], &opts),
        Err(KdvError::WindowOutsideSolutionDomain(_))
    ));
    let mut opts = CompareOptions::for_order(2);
    opts.window.t1 = [-1.0, 20.0];
    assert!(matches!(
        compare_double_scaling(&data, 2, &[0.5, 0.4], &opts),
        Err(KdvError::WindowOutsideSolutionDomain(_))
    ));
    assert!(matches!(
        compare_double_scaling(&data, 2, &[1e-2], &CompareOptions::for_order(2)),
        Err(KdvError::InvalidParameter(_))
    ));
}

#[test]
fn rate_fit() {
    let eps = [4e-2, 2e-2, 1e-2];
    let err: Vec<f64> = eps.iter().map(|e: &f64| 3.0 * e.powf(0.6)).collect();
    assert!((fit_rate(&eps, &err) - 0.6).abs() < 1e-12);
}
