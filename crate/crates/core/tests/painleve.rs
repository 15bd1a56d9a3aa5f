use pihier_core::gfun::asymptotic_constant;
use pihier_core::painleve::*;
use rayon::prelude::*;

fn m2(s: f64, n: usize) -> BvpConfig {
    BvpConfig::new(2, s, n)
}

fn m4(t: &[f64]) -> BvpConfig {
    BvpConfig::new(4, 60.0, 1201).with_times(t)
}

#[test]
fn m2_converges_with_small_residual() {
    let sol = solve_pole_free(&m2(40.0, 2000)).unwrap();
    assert!(sol.converged);
    assert!(sol.residual_sup < 1e-8, "{}", sol.residual_sup);
    assert!(sol.q_values.iter().all(|q| q.is_finite()));
    assert_eq!(sol.s_grid.len(), 2000);
    assert_eq!(sol.s_grid[0], -40.0);
    assert_eq!(*sol.s_grid.last().unwrap(), 40.0);
}

#[test]
fn m2_value_at_origin_is_resolution_and_domain_stable() {
    let coarse = solve_pole_free(&m2(40.0, 2000)).unwrap();
    let mut fine_cfg = m2(40.0, 3999);
    // the rounding floor of the residual grows like h^-4
    fine_cfg.newton_tol = 1e-8;
    let fine = solve_pole_free(&fine_cfg).unwrap();
    let wide = solve_pole_free(&m2(60.0, 2999)).unwrap();
    let q0 = sample(&coarse, 0.0).unwrap();
    assert!((q0 - sample(&fine, 0.0).unwrap()).abs() < 1e-6);
    assert!((q0 - sample(&wide, 0.0).unwrap()).abs() < 1e-6);
    let mut worst = 0.0f64;
    for i in 0..=80 {
        let s = -20.0 + 0.5 * i as f64;
        worst = worst.max((sample(&coarse, s).unwrap() - sample(&wide, s).unwrap()).abs());
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn continuation_routes_agree() {
    let mut a = m2(40.0, 2000);
    a.continuation.as_mut().unwrap().strategy = Strategy::Domain;
    let mut b = a.clone();
    b.continuation.as_mut().unwrap().strategy = Strategy::TimeAnchor;
    let sa = solve_pole_free(&a).unwrap();
    let sb = solve_pole_free(&b).unwrap();
    assert_eq!(sa.path, SolvePath::Domain);
    assert_eq!(sb.path, SolvePath::TimeAnchor);
    let diff = sa
        .q_values
        .iter()
        .zip(&sb.q_values)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
    assert!(diff < 1e-8, "{diff}");
}

#[test]
fn anchor_choice_does_not_change_the_m4_solution() {
    let solve = |t1: f64| {
        let mut c = m4(&[0.0; 3]);
        let cont = c.continuation.as_mut().unwrap();
        cont.strategy = Strategy::TimeAnchor;
        cont.anchor_t1 = t1;
        solve_pole_free(&c).unwrap()
    };
    let a = solve(3.0);
    let b = solve(30.0);
    assert!((sample(&a, 0.0).unwrap() - sample(&b, 0.0).unwrap()).abs() < 1e-7);
}

#[test]
fn m4_converges() {
    let sol = solve_pole_free(&m4(&[0.0; 3])).unwrap();
    assert!(sol.residual_sup < 1e-6);
    assert!(sol.q_values.iter().all(|q| q.is_finite()));
}

#[test]
fn odd_order_rejected() {
    assert_eq!(
        solve_pole_free(&BvpConfig::new(1, 20.0, 400)).unwrap_err(),
        PainleveError::OddOrderRequested(1)
    );
    assert_eq!(
        solve_pole_free(&BvpConfig::new(3, 20.0, 400)).unwrap_err(),
        PainleveError::OddOrderRequested(3)
    );
}

#[test]
fn invalid_configurations() {
    let too_few = BvpConfig::new(4, 20.0, 31);
    assert!(matches!(
        solve_pole_free(&too_few),
        Err(PainleveError::ConfigInvalid(_))
    ));
    let wrong_times = BvpConfig::new(4, 20.0, 400).with_times(&[0.1]);
    assert!(matches!(
        solve_pole_free(&wrong_times),
        Err(PainleveError::ConfigInvalid(_))
    ));
    let mut bad_tol = BvpConfig::new(2, 20.0, 400);
    bad_tol.newton_tol = 0.0;
    assert!(matches!(
        assemble_system(&bad_tol),
        Err(PainleveError::ConfigInvalid(_))
    ));
}

#[test]
fn fitted_constants_match_the_g_function() {
    let s2 = solve_pole_free(&m2(40.0, 2000)).unwrap();
    let s4 = solve_pole_free(&m4(&[0.0; 3])).unwrap();
    for (sol, m) in [(s2, 2), (s4, 4)] {
        let fit = verify_asymptotics(&sol).unwrap();
        let c = asymptotic_constant(m, 1);
        assert_eq!(fit.c_asym, c);
        assert!((fit.c_fit / c - 1.0).abs() < 0.01);
        assert!((fit.c_fit_negative / -c - 1.0).abs() < 0.01);
    }
}

#[test]
fn zero_time_correction_respects_the_upper_bound() {
    // |q - c s^{1/(m+1)}| = O(s^{-m/(m+1)}): the measured decay is at least this fast
    for (sol, m) in [
        (solve_pole_free(&m2(40.0, 2000)).unwrap(), 2.0),
        (solve_pole_free(&m4(&[0.0; 3])).unwrap(), 4.0),
    ] {
        let fit = verify_asymptotics(&sol).unwrap();
        assert!(fit.exponent < -m / (m + 1.0));
        assert!(fit.exponent_negative < -m / (m + 1.0));
        assert!(fit.bound_constant < 0.05);
    }
}

#[test]
fn nonzero_time_correction_exponent() {
    for t1 in [1.0, -1.0] {
        let sol = solve_pole_free(&m2(40.0, 2000).with_times(&[t1])).unwrap();
        let fit = verify_asymptotics(&sol).unwrap();
        assert!((-0.48..=-0.18).contains(&fit.exponent), "{}", fit.exponent);
        assert!((-0.48..=-0.18).contains(&fit.exponent_negative));
    }
}

#[test]
fn fit_window_needs_twenty_nodes() {
    let sol = solve_pole_free(&m2(4.0, 64)).unwrap();
    assert!(matches!(
        verify_asymptotics(&sol),
        Err(PainleveError::WindowTooSmall { required: 20, .. })
    ));
}

#[test]
fn pole_free_witness_over_time_grids() {
    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let m2_ok = grid.par_iter().all(|&t1| {
        solve_pole_free(&BvpConfig::new(2, 30.0, 1000).with_times(&[t1]))
            .map(|s| s.q_values.iter().all(|q| q.is_finite()) && s.residual_sup < 1e-9)
            .unwrap_or(false)
    });
    assert!(m2_ok);
    let mut points = Vec::new();
    for a in grid {
        for b in grid {
            for c in grid {
                points.push([a, b, c]);
            }
        }
    }
    let failures: Vec<_> = points
        .par_iter()
        .filter(|t| {
            !solve_pole_free(&BvpConfig::new(4, 30.0, 601).with_times(&t[..]))
                .map(|s| s.q_values.iter().all(|q| q.is_finite()))
                .unwrap_or(false)
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn sampling() {
    let sol = solve_pole_free(&m2(40.0, 2000)).unwrap();
    for i in [0, 17, 1000, 1999] {
        assert_eq!(sample(&sol, sol.s_grid[i]).unwrap(), sol.q_values[i]);
    }
    assert!(matches!(
        sample(&sol, 41.0),
        Err(PainleveError::OutOfDomain { .. })
    ));
    assert!(matches!(
        sample(&sol, -40.5),
        Err(PainleveError::OutOfDomain { .. })
    ));
    let mut fine_cfg = m2(40.0, 3000);
    fine_cfg.newton_tol = 1e-8;
    let fine = solve_pole_free(&fine_cfg).unwrap();
    assert!((sample(&sol, 0.5).unwrap() - sample(&fine, 0.5).unwrap()).abs() < 1e-6);
}

#[test]
fn sampling_reproduces_smooth_functions() {
    let sol = solve_pole_free(&m2(10.0, 401)).unwrap();
    let mut fake = sol.clone();
    fake.q_values = sol.s_grid.iter().map(|s| (0.7 * s).sin()).collect();
    for s in [-9.97, -3.3, 0.01, 5.55, 9.99] {
        assert!((sample(&fake, s).unwrap() - (0.7 * s).sin()).abs() < 1e-10);
    }
}

#[test]
fn residual_of_the_asymptote_decays_toward_the_ends() {
    let mut cfg = m2(40.0, 2000);
    cfg.continuation = None;
    let sys = assemble_system(&cfg).unwrap();
    let c = asymptotic_constant(2, 1);
    let q: Vec<f64> = sys
        .s_grid
        .iter()
        .map(|s| c * s.signum() * s.abs().cbrt())
        .collect();
    let r = sys.residual(&q);
    let at = |s: f64| {
        let i = sys.s_grid.iter().position(|&x| x >= s).unwrap();
        r[i].abs()
    };
    assert!(at(5.0) > at(10.0) && at(10.0) > at(20.0) && at(20.0) > at(35.0));
    // at least as fast as |s|^{-2/3}
    let slope = (at(35.0) / at(10.0)).ln() / 3.5f64.ln();
    assert!(slope < -2.0 / 3.0, "{slope}");
}

#[test]
fn jacobian_band_is_set_by_the_stencil() {
    for (m, p) in [(2u32, 4usize), (2, 6), (4, 8)] {
        let mut cfg = BvpConfig::new(m, 20.0, 400);
        cfg.stencil_order = p;
        let sys = assemble_system(&cfg).unwrap();
        assert!(sys.operator().width <= 2 * m as usize + p);
        let q = vec![0.3; 400];
        let jac = sys.jacobian(&q);
        for i in 0..400 {
            for j in 0..400 {
                if (i as i64 - j as i64).unsigned_abs() as usize > sys.operator().width {
                    assert_eq!(jac.get(i, j), 0.0);
                }
            }
        }
    }
}

#[test]
fn time_flow_m2() {
    let r = verify_time_flow(&m2(40.0, 2000), 1, 1e-3).unwrap();
    assert!(r.residual < 1e-4, "{}", r.residual);
    assert!(r.derivative_scale > 0.1);
    let off = verify_time_flow(&m2(40.0, 2000).with_times(&[0.5]), 1, 1e-3).unwrap();
    assert!(off.residual < 1e-4);
}

#[test]
fn time_flow_difference_is_second_order_in_delta() {
    let a = verify_time_flow(&m2(40.0, 2000), 1, 0.04).unwrap();
    let b = verify_time_flow(&m2(40.0, 2000), 1, 0.02).unwrap();
    let ratio = a.residual / b.residual;
    assert!((3.0..5.0).contains(&ratio), "{ratio}");
}

#[test]
fn time_flow_m4() {
    let mut cfg = m4(&[0.0; 3]);
    cfg.stencil_order = 12;
    cfg.newton_tol = 2e-6;
    for k in 1..=3 {
        let r = verify_time_flow(&cfg, k, 1e-3).unwrap();
        assert!(r.residual < 1e-3, "k={k}: {}", r.residual);
    }
    assert!(matches!(
        verify_time_flow(&cfg, 4, 1e-3),
        Err(PainleveError::ConfigInvalid(_))
    ));
}
