//! The double-scaling map near the critical point and the comparison of KdV against
//! the Painlevé I hierarchy prediction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::{critical_point, CriticalPoint, InitialDataSpec};
use super::evolve::{kdv_evolve_values, KdvConfig};
use super::KdvError;
use crate::painleve::{sample, solve_pole_free, BvpConfig};

fn exponents(m: u32) -> (f64, f64, f64) {
    let d = 2.0 * m as f64 + 3.0;
    ((2.0 * m as f64 + 2.0) / d, 2.0 * m as f64 / d, 2.0 / d)
}

/// `(s, t1)` arguments of `q` for the physical point `(x, t)`.
pub fn scaling_map(cp: &CriticalPoint, x: f64, t: f64, eps: f64) -> (f64, f64) {
    let (a, b, _) = exponents(cp.m);
    let tau0 = (x - cp.x_c - 6.0 * cp.u_c * (t - cp.t_c)) / cp.k.sqrt();
    let tau1 = -3.0 * (t - cp.t_c) / cp.k.powf(1.5);
    (eps.powf(-a) * tau0, eps.powf(-b) * tau1)
}

/// Inverse of [`scaling_map`].
pub fn physical_point(cp: &CriticalPoint, s: f64, t1: f64, eps: f64) -> (f64, f64) {
    let (a, b, _) = exponents(cp.m);
    let t = cp.t_c - cp.k.powf(1.5) * eps.powf(b) * t1 / 3.0;
    let x = cp.x_c + 6.0 * cp.u_c * (t - cp.t_c) + cp.k.sqrt() * eps.powf(a) * s;
    (x, t)
}

/// `u_c - (2/k) eps^{2/(2m+3)} q`.
pub fn predicted_u(cp: &CriticalPoint, q: f64, eps: f64) -> f64 {
    cp.u_c - 2.0 / cp.k * eps.powf(exponents(cp.m).2) * q
}

/// Rectangle in the `(s, t1)` arguments of `q` with its sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub s: [f64; 2],
    pub t1: [f64; 2],
    pub s_points: usize,
    pub t1_points: usize,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            s: [-2.0, 2.0],
            t1: [-1.0, 1.0],
            s_points: 41,
            t1_points: 5,
        }
    }
}

fn linspace(r: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (r[0] + r[1])];
    }
    (0..n)
        .map(|i| r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub window: Window,
    pub kdv_half_width: f64,
    pub kdv_points: usize,
    pub courant: f64,
    pub tail_tol: f64,
    /// Half-width and node count of the boundary-value solves for `q`.
    pub bvp_half_width: f64,
    pub bvp_points: usize,
}

impl CompareOptions {
    pub fn for_order(m: u32) -> Self {
        let (bvp_half_width, bvp_points) = if m <= 2 { (40.0, 2000) } else { (60.0, 1201) };
        CompareOptions {
            window: Window::default(),
            kdv_half_width: 15.0,
            kdv_points: 32768,
            courant: 0.1,
            tail_tol: 1e-10,
            bvp_half_width,
            bvp_points,
        }
    }
}

/// Sup-norm errors against the prediction and the fitted convergence rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub m: u32,
    pub eps: Vec<f64>,
    pub err: Vec<f64>,
    /// `sup|u - u_c| / ((2/k) eps^{2/(2m+3)})`, to be compared with `sup_q`.
    pub err_leading: Vec<f64>,
    pub sup_q: f64,
    pub rate: f64,
    pub rate_expected: f64,
    pub window: Window,
    pub cp: CriticalPoint,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_rate(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Runs KdV for each `eps` through the window and compares with the hierarchy solution.
pub fn compare_double_scaling(
    data: &InitialDataSpec,
    m: u32,
    eps_list: &[f64],
    opts: &CompareOptions,
) -> Result<CompareReport, KdvError> {
    if eps_list.len() < 2 || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(KdvError::InvalidParameter(
            "need at least two positive eps".into(),
        ));
    }
    let cp = critical_point(data, m)?;
    let w = &opts.window;
    let s_vals = linspace(w.s, w.s_points);
    let t1_vals = linspace(w.t1, w.t1_points);
    let s_max = s_vals.iter().fold(0.0f64, |a, s| a.max(s.abs()));
    if s_max >= 0.5 * opts.bvp_half_width {
        return Err(KdvError::WindowOutsideSolutionDomain(format!(
            "|s| up to {s_max} against a solution on [-{0}, {0}]",
            opts.bvp_half_width
        )));
    }
    let x_limit = data.taper.start * opts.kdv_half_width;
    for &eps in eps_list {
        for &t1 in &t1_vals {
            for s in [w.s[0], w.s[1]] {
                let (x, t) = physical_point(&cp, s, t1, eps);
                if t < 0.0 || x.abs() > x_limit {
                    return Err(KdvError::WindowOutsideSolutionDomain(format!(
                        "eps = {eps} maps the window corner (s, t1) = ({s}, {t1}) to (x, t) = ({x}, {t})"
                    )));
                }
            }
        }
    }
    // q(s; t1, 0, ..., 0) on the window, one solve per t1
    let q_table: Vec<Vec<f64>> = t1_vals
        .par_iter()
        .map(|&t1| {
            let mut times = vec![0.0; m as usize - 1];
            times[0] = t1;
            let cfg = BvpConfig::new(m, opts.bvp_half_width, opts.bvp_points).with_times(&times);
            let sol = solve_pole_free(&cfg)?;
            s_vals
                .iter()
                .map(|&s| sample(&sol, s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let sup_q = q_table.iter().flatten().fold(0.0f64, |a, q| a.max(q.abs()));

    let per_eps: Vec<(f64, f64)> = eps_list
        .par_iter()
        .map(|&eps| -> Result<(f64, f64), KdvError> {
            // the snapshot times ascend as t1 descends
            let mut order: Vec<usize> = (0..t1_vals.len()).collect();
            order.sort_by(|&a, &b| t1_vals[b].total_cmp(&t1_vals[a]));
            let times: Vec<f64> = order
                .iter()
                .map(|&i| physical_point(&cp, 0.0, t1_vals[i], eps).1)
                .collect();
            let mut kcfg = KdvConfig::new(eps, opts.kdv_half_width, opts.kdv_points);
            kcfg.courant = opts.courant;
            kcfg.tail_tol = opts.tail_tol;
            let u0: Vec<f64> = kcfg.grid().iter().map(|&x| data.u0(x)).collect();
            let fields = kdv_evolve_values(&u0, &kcfg, &times)?;
            let (mut err, mut lead) = (0.0f64, 0.0f64);
            for (field, &i) in fields.iter().zip(&order) {
                for (j, &s) in s_vals.iter().enumerate() {
                    let (x, _) = physical_point(&cp, s, t1_vals[i], eps);
                    let u = field.eval(x);
                    err = err.max((u - predicted_u(&cp, q_table[i][j], eps)).abs());
                    lead = lead.max((u - cp.u_c).abs());
                }
            }
            Ok((err, lead / (2.0 / cp.k * eps.powf(exponents(m).2))))
        })
        .collect::<Result<_, _>>()?;
    let err: Vec<f64> = per_eps.iter().map(|p| p.0).collect();
    Ok(CompareReport {
        m,
        eps: eps_list.to_vec(),
        rate: fit_rate(eps_list, &err),
        rate_expected: 4.0 / (2.0 * m as f64 + 3.0),
        err,
        err_leading: per_eps.iter().map(|p| p.1).collect(),
        sup_q,
        window: w.clone(),
        cp,
    })
}
