//! The acceptance criteria A1-A10 as runnable checks with pinned tolerances.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::diffpoly::{
    apply_lenard_operator, generate_equation, lenard_sequence, verify_lax_identities, DiffPoly,
    DiffPolyError, EquationOptions,
};
use crate::gfun::sturm::count_real_roots;
use crate::gfun::{make_gfunction, pi2_crosscheck, pi2_identity_exact, verify_positivity};
use crate::kdvlab::{
    build_initial_data, compare_double_scaling, critical_point, CompareOptions, DataParams,
};
use crate::painleve::{
    sample, solve_pole_free, verify_asymptotics, verify_time_flow, BvpConfig, SolvePath,
};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: DiffPolyError,
    },
}

/// Reads one hierarchy fixture, naming the file in any error.
pub fn load_fixture(path: &Path) -> Result<DiffPoly, FixtureError> {
    let text = std::fs::read_to_string(path).map_err(|source| FixtureError::Io {
        path: path.to_owned(),
        source,
    })?;
    DiffPoly::from_json(&text).map_err(|source| FixtureError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// One measured quantity against its requirement.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub requirement: String,
    pub passed: bool,
}

impl Check {
    fn below(name: &str, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value: format!("{value:.3e}"),
            requirement: format!("< {bound:e}"),
            passed: value < bound,
        }
    }

    fn within(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value: format!("{value:.4}"),
            requirement: format!("{target:.4} +- {tol}"),
            passed: (value - target).abs() <= tol,
        }
    }

    fn holds(name: &str, ok: bool, value: impl fmt::Display) -> Self {
        Check {
            name: name.into(),
            value: value.to_string(),
            requirement: "holds".into(),
            passed: ok,
        }
    }

    fn runtime(seconds: f64, limit: f64) -> Self {
        Check {
            name: "runtime_s".into(),
            value: format!("{seconds:.1}"),
            requirement: format!("< {limit}"),
            passed: seconds < limit,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} ({:.1} s):",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        )?;
        for c in &self.checks {
            write!(
                f,
                " {}={} [{}]{}",
                c.name,
                c.value,
                c.requirement,
                if c.passed { "" } else { " !" }
            )?;
        }
        Ok(())
    }
}

fn timed(
    id: &'static str,
    title: &'static str,
    limit: Option<f64>,
    body: impl FnOnce() -> Vec<Check>,
) -> CriterionReport {
    let start = Instant::now();
    let mut checks = body();
    let seconds = start.elapsed().as_secs_f64();
    if let Some(limit) = limit {
        checks.push(Check::runtime(seconds, limit));
    }
    CriterionReport {
        id,
        title,
        checks,
        seconds,
    }
}

fn failed(name: &str, err: impl fmt::Display) -> Check {
    Check {
        name: name.into(),
        value: format!("error: {err}"),
        requirement: "completes".into(),
        passed: false,
    }
}

pub fn a1(fixtures: &Path) -> CriterionReport {
    timed("A1", "hierarchy fixtures", Some(1.0), || {
        (0..=4u32)
            .map(|m| {
                let name = format!("m{m}");
                let path = fixtures.join(format!("hierarchy_m{m}.json"));
                let fixture = match load_fixture(&path) {
                    Ok(p) => p,
                    Err(e) => return failed(&name, e),
                };
                match generate_equation(m, EquationOptions::with_times().allow_odd()) {
                    Ok(eq) => Check::holds(&name, eq.paper_normalized == fixture, "exact equality"),
                    Err(e) => failed(&name, e),
                }
            })
            .collect()
    })
}

pub fn a2() -> CriterionReport {
    timed("A2", "recursion and Lax identities", Some(30.0), || {
        let mut checks = Vec::new();
        match lenard_sequence(8) {
            Ok(seq) => {
                let bad = (0..=7)
                    .filter(|&k| seq[k + 1].total_derivative() != apply_lenard_operator(&seq[k]))
                    .count();
                checks.push(Check::holds(
                    "recursion_k<=7",
                    bad == 0,
                    format!("{bad} mismatches"),
                ));
            }
            Err(e) => checks.push(failed("recursion_k<=7", e)),
        }
        for m in [2, 4, 6] {
            let name = format!("lax_m{m}");
            checks.push(match verify_lax_identities(m) {
                Ok(r) => Check::holds(
                    &name,
                    r.all_passed(),
                    format!(
                        "{}/{} identities",
                        r.checks.iter().filter(|c| c.passed).count(),
                        r.checks.len()
                    ),
                ),
                Err(e) => failed(&name, e),
            });
        }
        checks
    })
}

pub fn a3() -> CriterionReport {
    timed("A3", "P_I^2 rescaling cross-check", None, || {
        vec![
            Check::below("float_gap", pi2_crosscheck(), 1e-12),
            Check::holds("exact_identity", pi2_identity_exact(), "60/8 * base(2) = 6"),
        ]
    })
}

pub fn a4() -> CriterionReport {
    timed("A4", "positivity of the g-function", Some(10.0), || {
        let mut checks = Vec::new();
        for m in (2..=12).step_by(2) {
            let name = format!("sturm_m{m}");
            checks.push(match make_gfunction(m, 1) {
                Ok(g) => {
                    let roots = count_real_roots(&g.derivative_factor());
                    Check::holds(&name, roots == 0, format!("{roots} real roots"))
                }
                Err(e) => failed(&name, e),
            });
            for sign in [1, -1] {
                let name = format!("g>0_m{m}_{}", if sign > 0 { "+" } else { "-" });
                checks.push(match make_gfunction(m, sign) {
                    Ok(g) => {
                        let rep = verify_positivity(&g);
                        Check::holds(&name, rep.passed, format!("min g {:.3e}", rep.min_g))
                    }
                    Err(e) => failed(&name, e),
                });
            }
        }
        checks
    })
}

pub fn a5() -> CriterionReport {
    timed("A5", "m=2 pole-free solution", Some(60.0), || {
        let mut checks = Vec::new();
        let base = match solve_pole_free(&BvpConfig::new(2, 40.0, 2000)) {
            Ok(s) => s,
            Err(e) => return vec![failed("solve", e)],
        };
        checks.push(Check::holds(
            "from_leading_order_guess",
            base.converged && base.path == SolvePath::Domain,
            format!("{:?}, {} Newton steps", base.path, base.newton_iters),
        ));
        checks.push(Check::below("residual_sup", base.residual_sup, 1e-8));
        let q0 = sample(&base, 0.0).unwrap_or(f64::NAN);
        let mut doubled = BvpConfig::new(2, 40.0, 4000);
        doubled.newton_tol = 1e-8;
        let wide = BvpConfig::new(2, 60.0, 2999);
        for (name, cfg) in [("q0_N_doubling", doubled), ("q0_S60", wide)] {
            checks.push(match solve_pole_free(&cfg).and_then(|s| sample(&s, 0.0)) {
                Ok(v) => Check::below(name, (v - q0).abs(), 1e-6),
                Err(e) => failed(name, e),
            });
        }
        match verify_asymptotics(&base) {
            Ok(fit) => {
                checks.push(Check::within("exponent_s>0", fit.exponent, -2.0 / 3.0, 0.1));
                checks.push(Check::within(
                    "exponent_s<0",
                    fit.exponent_negative,
                    -2.0 / 3.0,
                    0.1,
                ));
            }
            Err(e) => checks.push(failed("exponent", e)),
        }
        checks
    })
}

pub fn a6() -> CriterionReport {
    timed("A6", "m=4 pole-free solution", Some(300.0), || {
        let sol = match solve_pole_free(&BvpConfig::new(4, 60.0, 1201).with_times(&[0.0; 3])) {
            Ok(s) => s,
            Err(e) => return vec![failed("solve", e)],
        };
        let mut checks = vec![
            Check::holds("converged", sol.converged, format!("{:?}", sol.path)),
            Check::below("residual_sup", sol.residual_sup, 1e-6),
        ];
        match verify_asymptotics(&sol) {
            Ok(fit) => {
                checks.push(Check::within("exponent_s>0", fit.exponent, -0.8, 0.15));
                checks.push(Check::within(
                    "exponent_s<0",
                    fit.exponent_negative,
                    -0.8,
                    0.15,
                ));
            }
            Err(e) => checks.push(failed("exponent", e)),
        }
        checks
    })
}

pub fn a7() -> CriterionReport {
    timed("A7", "KdV flows in the times", Some(300.0), || {
        let mut checks = vec![
            match verify_time_flow(&BvpConfig::new(2, 40.0, 2000), 1, 1e-3) {
                Ok(r) => Check::below("m2_k1", r.residual, 1e-4),
                Err(e) => failed("m2_k1", e),
            },
        ];
        let mut cfg = BvpConfig::new(4, 60.0, 1201).with_times(&[0.0; 3]);
        cfg.stencil_order = 12;
        cfg.newton_tol = 2e-6;
        for k in 1..=3 {
            let name = format!("m4_k{k}");
            checks.push(match verify_time_flow(&cfg, k, 1e-3) {
                Ok(r) => Check::below(&name, r.residual, 1e-3),
                Err(e) => failed(&name, e),
            });
        }
        checks
    })
}

pub fn a8() -> CriterionReport {
    timed("A8", "catastrophe of -sech^2", None, || {
        let cp = match build_initial_data(2, &DataParams::default())
            .and_then(|d| critical_point(&d, 2))
        {
            Ok(cp) => cp,
            Err(e) => return vec![failed("critical_point", e)],
        };
        let r3 = 3f64.sqrt();
        vec![
            Check::below("t_c", (cp.t_c - r3 / 8.0).abs(), 1e-8),
            Check::below("u_c", (cp.u_c + 2.0 / 3.0).abs(), 1e-8),
            Check::below(
                "x_c",
                (cp.x_c - (-r3 / 2.0 + (-1.0 / r3).atanh())).abs(),
                1e-8,
            ),
        ]
    })
}

fn double_scaling(
    m: u32,
    limit: f64,
    id: &'static str,
    title: &'static str,
    leading: bool,
) -> CriterionReport {
    timed(id, title, Some(limit), || {
        let report = build_initial_data(m, &DataParams::default()).and_then(|d| {
            compare_double_scaling(&d, m, &[2e-2, 1e-2], &CompareOptions::for_order(m))
        });
        let r = match report {
            Ok(r) => r,
            Err(e) => return vec![failed("compare", e)],
        };
        let mut checks = vec![Check::within("rate", r.rate, r.rate_expected, 0.2)];
        for (eps, lead) in r.eps.iter().zip(&r.err_leading) {
            let ratio = lead / r.sup_q;
            let mut c = Check::within(&format!("leading_ratio_eps{eps}"), ratio, 1.0, 0.25);
            if !leading {
                // reported for information only
                c.requirement = "reported".into();
                c.passed = true;
            }
            checks.push(c);
        }
        checks
    })
}

pub fn a9() -> CriterionReport {
    double_scaling(2, 600.0, "A9", "double scaling at m=2", true)
}

pub fn a10() -> CriterionReport {
    double_scaling(4, 1800.0, "A10", "double scaling at m=4", false)
}

/// A1-A8, or all ten with `long`.
pub fn run_all(fixtures: &Path, long: bool) -> Vec<CriterionReport> {
    let mut out = vec![a1(fixtures), a2(), a3(), a4(), a5(), a6(), a7(), a8()];
    if long {
        out.push(a9());
        out.push(a10());
    }
    out
}
