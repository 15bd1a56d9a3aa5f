//! Real pole-free solutions of the Painlevé I hierarchy as truncated boundary-value
//! problems: finite differences on a uniform grid, banded Newton, and continuation.

mod banded;
mod compiled;
mod stencil;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffpoly::{generate_equation, lenard_sequence, DiffPolyError, EquationOptions, Var};
use crate::gfun::asymptotic_constant;

pub use banded::{BandLu, BandMatrix, SingularPivot};
pub use compiled::CompiledPoly;
pub use stencil::{fornberg_weights, FdOperator};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PainleveError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("odd order m = {0}: real pole-free solutions do not exist")]
    OddOrderRequested(u32),
    #[error("Newton diverged after {iters} iterations (residual {residual:e}, iterate norm {iterate_norm:e})")]
    NewtonDiverged {
        residual: f64,
        iterate_norm: f64,
        iters: usize,
    },
    #[error("singular Jacobian at column {column}")]
    JacobianSingular { column: usize },
    #[error("fit window holds {nodes} nodes, at least {required} needed")]
    WindowTooSmall { nodes: usize, required: usize },
    #[error("s = {s} lies outside [-{half_width}, {half_width}]")]
    OutOfDomain { s: f64, half_width: f64 },
    #[error(transparent)]
    Symbolic(#[from] DiffPolyError),
}

/// Parameters of the backtracking line search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Damping {
    /// Sufficient-decrease constant.
    pub armijo: f64,
    /// Smallest step length tried before giving up.
    pub min_step: f64,
}

impl Default for Damping {
    fn default() -> Self {
        Damping {
            armijo: 1e-4,
            min_step: 1.0 / 1024.0,
        }
    }
}

/// Source of the Dirichlet-type data imposed at `s = ±S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryModel {
    /// `c_asym(sgn s) |s|^{1/(m+1)}` and its derivatives.
    LeadingOrder,
    /// The real root of the equation with every `s`-derivative of `q` dropped, which
    /// reduces to the leading-order term when all times vanish and absorbs the times
    /// otherwise.
    Algebraic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Continuation {
    /// Half-width of the first domain.
    pub s_start: f64,
    /// Geometric growth factor between domains.
    pub s_ratio: f64,
    /// Initial homotopy increment in the times, measured in max-norm.
    pub t_step: f64,
    /// `t_1` of the dispersionless anchor used by [`Strategy::TimeAnchor`].
    pub anchor_t1: f64,
    pub strategy: Strategy,
}

impl Default for Continuation {
    fn default() -> Self {
        Continuation {
            s_start: 10.0,
            s_ratio: 1.5,
            t_step: 0.25,
            anchor_t1: 10.0,
            strategy: Strategy::Auto,
        }
    }
}

/// How the first converged iterate is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Leading-order guess at zero times, widening the domain geometrically, then a
    /// straight line from zero to the requested times.
    Domain,
    /// Start at `t = (anchor_t1, 0, ..., 0)`, where the solution is slowly varying and
    /// the derivative-free root is an accurate guess, then follow a straight line in
    /// the times.
    TimeAnchor,
    /// `Domain`, and `TimeAnchor` if that fails.
    Auto,
}

/// The route that produced a [`GridSolution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvePath {
    Direct,
    Domain,
    TimeAnchor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BvpConfig {
    pub m: u32,
    /// `t_1, ..., t_{m-1}`.
    pub t: Vec<f64>,
    pub half_width: f64,
    pub n_points: usize,
    pub stencil_order: usize,
    pub newton_tol: f64,
    pub max_iters: usize,
    pub damping: Damping,
    pub boundary: BoundaryModel,
    pub continuation: Option<Continuation>,
}

impl BvpConfig {
    /// Defaults tuned to the rounding floor of the residual, which grows like `h^{-2m}`:
    /// sixth-order stencils and tolerance `1e-9` for `m = 2`, eighth-order and `1e-6` above.
    pub fn new(m: u32, half_width: f64, n_points: usize) -> Self {
        let low = m <= 2;
        BvpConfig {
            m,
            t: vec![0.0; (m as usize).saturating_sub(1)],
            half_width,
            n_points,
            stencil_order: if low { 6 } else { 8 },
            newton_tol: if low { 1e-9 } else { 1e-6 },
            max_iters: 60,
            damping: Damping::default(),
            boundary: BoundaryModel::Algebraic,
            continuation: Some(Continuation::default()),
        }
    }

    pub fn with_times(mut self, t: &[f64]) -> Self {
        self.t = t.to_vec();
        self
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.n_points as f64 - 1.0)
    }

    pub fn validate(&self) -> Result<(), PainleveError> {
        let bad = |msg: String| Err(PainleveError::ConfigInvalid(msg));
        if self.m % 2 == 1 {
            return Err(PainleveError::OddOrderRequested(self.m));
        }
        if self.m == 0 {
            return bad("m must be at least 2".into());
        }
        if self.t.len() != self.m as usize - 1 {
            return bad(format!(
                "expected {} times, got {}",
                self.m - 1,
                self.t.len()
            ));
        }
        if self.t.iter().any(|x| !x.is_finite()) {
            return bad("times must be finite".into());
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return bad(format!("S must be positive, got {}", self.half_width));
        }
        if self.n_points < 8 * self.m as usize {
            return bad(format!("N = {} below 8m = {}", self.n_points, 8 * self.m));
        }
        if self.stencil_order < 4 || self.stencil_order % 2 == 1 {
            return bad(format!(
                "stencil order must be even and >= 4, got {}",
                self.stencil_order
            ));
        }
        let width = 2 * self.m as usize - 1 + self.stencil_order;
        if self.n_points < width + 2 * self.m as usize {
            return bad(format!(
                "N = {} too small for a {width}-point stencil",
                self.n_points
            ));
        }
        if !(self.newton_tol > 0.0) {
            return bad("newton_tol must be positive".into());
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        if !(self.damping.min_step > 0.0 && self.damping.min_step <= 1.0) {
            return bad("damping.min_step must lie in (0, 1]".into());
        }
        if let Some(c) = &self.continuation {
            if !(c.s_start > 0.0 && c.s_ratio > 1.0 && c.t_step > 0.0 && c.anchor_t1 > 0.0) {
                return bad(
                    "continuation needs s_start > 0, s_ratio > 1, t_step > 0, anchor_t1 > 0".into(),
                );
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub m: u32,
    pub t: Vec<f64>,
    pub half_width: f64,
    pub stencil_order: usize,
    pub s_grid: Vec<f64>,
    pub q_values: Vec<f64>,
    pub residual_sup: f64,
    pub newton_iters: usize,
    pub converged: bool,
    pub path: SolvePath,
}

impl GridSolution {
    pub fn h(&self) -> f64 {
        self.s_grid[1] - self.s_grid[0]
    }
}

fn uniform_grid(half_width: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (n as f64 - 1.0);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                half_width
            } else {
                -half_width + i as f64 * h
            }
        })
        .collect()
}

/// `c_asym(sgn s)|s|^{1/(m+1)}` for `|s| >= 1`, joined by the odd cubic matching value
/// and slope at `s = ±1`.
pub fn leading_order_guess(m: u32, _t: &[f64], s_grid: &[f64]) -> Vec<f64> {
    let c = asymptotic_constant(m, 1);
    let a = 1.0 / (m as f64 + 1.0);
    let b3 = (c * a - c) / 2.0;
    let b1 = c - b3;
    s_grid
        .iter()
        .map(|&s| {
            if s.abs() >= 1.0 {
                c * s.signum() * s.abs().powf(a)
            } else {
                b1 * s + b3 * s * s * s
            }
        })
        .collect()
}

/// Values and derivatives `0..=order` of the boundary data at `s`.
fn boundary_jet(model: BoundaryModel, m: u32, algebraic: &[f64], s: f64, order: usize) -> Vec<f64> {
    let a = 1.0 / (m as f64 + 1.0);
    let sign = s.signum();
    let c = asymptotic_constant(m, sign as i32);
    let leading = |j: usize| -> f64 {
        let falling: f64 = (0..j).map(|i| a - i as f64).product();
        c * falling * sign.powi(j as i32) * s.abs().powf(a - j as f64)
    };
    match model {
        BoundaryModel::LeadingOrder => (0..=order).map(leading).collect(),
        BoundaryModel::Algebraic => {
            let guess = leading(0);
            algebraic_root_jet(algebraic, s, guess, order)
                .unwrap_or_else(|| (0..=order).map(leading).collect())
        }
    }
}

fn poly_derivative_at(coeffs: &[f64], r: f64, k: usize) -> f64 {
    // k-th derivative divided by k!
    coeffs
        .iter()
        .enumerate()
        .skip(k)
        .map(|(e, &ae)| {
            let binom: f64 = (0..k).map(|i| (e - i) as f64 / (i + 1) as f64).product();
            ae * binom * r.powi((e - k) as i32)
        })
        .sum()
}

/// Solves `s + phi(r) = 0` by Newton from `guess` and returns `r, r', ..., r^(order)` as
/// functions of `s` by series reversion.
fn algebraic_root_jet(phi: &[f64], s: f64, guess: f64, order: usize) -> Option<Vec<f64>> {
    let mut r = guess;
    for _ in 0..100 {
        let f = s + poly_derivative_at(phi, r, 0);
        let df = poly_derivative_at(phi, r, 1);
        if df == 0.0 {
            return None;
        }
        let step = f / df;
        r -= step;
        if step.abs() <= 1e-15 * r.abs().max(1.0) {
            break;
        }
    }
    if !(s + poly_derivative_at(phi, r, 0))
        .abs()
        .lt(&(1e-10 * s.abs().max(1.0)))
    {
        return None;
    }
    // s(r + h) - s = sum_k d_k h^k
    let d: Vec<f64> = (0..=order)
        .map(|k| -poly_derivative_at(phi, r, k))
        .collect();
    let mut b = vec![0.0; order + 1];
    if order >= 1 {
        b[1] = 1.0 / d[1];
    }
    for n in 2..=order {
        // coefficient of delta^n in sum_{k>=2} d_k h^k with h truncated before b_n
        let mut power = b.clone();
        power[n] = 0.0;
        let base = power.clone();
        let mut acc = 0.0;
        for dk in d.iter().take(n + 1).skip(2) {
            power = truncated_mul(&power, &base, n);
            acc += dk * power[n];
        }
        b[n] = -acc / d[1];
    }
    let mut out = vec![r];
    let mut fact = 1.0;
    for (j, bj) in b.iter().enumerate().skip(1) {
        fact *= j as f64;
        out.push(fact * bj);
    }
    Some(out)
}

/// Root of `s + phi(r) = 0` by bracketed Newton, for the monotone case where it is unique.
fn algebraic_root(phi: &[f64], s: f64, guess: f64) -> Option<f64> {
    let f = |r: f64| s + poly_derivative_at(phi, r, 0);
    let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
    let mut grow = 1.0;
    while f(lo).signum() == f(hi).signum() {
        grow *= 2.0;
        lo -= grow;
        hi += grow;
        if grow > 1e12 {
            return None;
        }
    }
    let flo = f(lo).signum();
    let mut r = guess.clamp(lo, hi);
    for _ in 0..200 {
        let fr = f(r);
        if fr == 0.0 {
            break;
        }
        if fr.signum() == flo {
            lo = r;
        } else {
            hi = r;
        }
        let df = poly_derivative_at(phi, r, 1);
        let mut next = r - fr / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= 1e-16 * r.abs().max(1e-300) || hi - lo <= 1e-16 * r.abs() {
            r = next;
            break;
        }
        r = next;
    }
    Some(r)
}

fn truncated_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Residual and Jacobian of the discretised problem for one configuration.
#[derive(Clone, Debug)]
pub struct BvpSystem {
    pub m: u32,
    pub s_grid: Vec<f64>,
    op: FdOperator,
    equation: CompiledPoly,
    partials: Vec<CompiledPoly>,
    left: Vec<f64>,
    right: Vec<f64>,
}

pub fn assemble_system(cfg: &BvpConfig) -> Result<BvpSystem, PainleveError> {
    cfg.validate()?;
    let m = cfg.m;
    let eq = generate_equation(m, EquationOptions::with_times())?;
    let equation = CompiledPoly::new(&eq.canonical, &cfg.t);
    let partials = (0..=2 * m)
        .map(|j| CompiledPoly::new(&eq.canonical.partial(Var::Q(j)), &cfg.t))
        .collect();
    let n = cfg.n_points;
    let s_grid = uniform_grid(cfg.half_width, n);
    let op = FdOperator::new(n, cfg.h(), 2 * m as usize, cfg.stencil_order);
    let phi = equation.derivative_free_part();
    let left = boundary_jet(cfg.boundary, m, &phi, -cfg.half_width, m as usize - 1);
    let right = boundary_jet(cfg.boundary, m, &phi, cfg.half_width, m as usize - 1);
    Ok(BvpSystem {
        m,
        s_grid,
        op,
        equation,
        partials,
        left,
        right,
    })
}

impl BvpSystem {
    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    pub fn operator(&self) -> &FdOperator {
        &self.op
    }

    /// Boundary data at `s = -S` and `s = S`, derivatives `0..m`.
    pub fn boundary_data(&self) -> (&[f64], &[f64]) {
        (&self.left, &self.right)
    }

    pub fn boundary_value(&self, s: f64, order: usize) -> f64 {
        if s < 0.0 {
            self.left[order]
        } else {
            self.right[order]
        }
    }

    pub fn residual(&self, q: &[f64]) -> Vec<f64> {
        let n = self.len();
        let m = self.m as usize;
        let mut out = vec![0.0; n];
        for (j, slot) in out.iter_mut().take(m).enumerate() {
            *slot = self.op.jet(q, 0)[j] - self.left[j];
        }
        for j in 0..m {
            out[n - m + j] = self.op.jet(q, n - 1)[j] - self.right[j];
        }
        for i in m..n - m {
            let jet = self.op.jet(q, i);
            out[i] = self.equation.eval(self.s_grid[i], &jet);
        }
        out
    }

    pub fn jacobian(&self, q: &[f64]) -> BandMatrix {
        let n = self.len();
        let m = self.m as usize;
        let w = self.op.width;
        let mut jac = BandMatrix::zeros(n, w, w);
        let (lo, wl) = self.op.weights(0);
        for j in 0..m {
            for (k, v) in wl[j].iter().enumerate() {
                jac.add(j, lo + k, *v);
            }
        }
        let (lo, wr) = self.op.weights(n - 1);
        for j in 0..m {
            for (k, v) in wr[j].iter().enumerate() {
                jac.add(n - m + j, lo + k, *v);
            }
        }
        let mut row = vec![0.0; w];
        for i in m..n - m {
            let jet = self.op.jet(q, i);
            let (lo, wi) = self.op.weights(i);
            row.iter_mut().for_each(|x| *x = 0.0);
            for (d, p) in self.partials.iter().enumerate() {
                let dp = p.eval(self.s_grid[i], &jet);
                if dp != 0.0 {
                    for (r, wk) in row.iter_mut().zip(&wi[d]) {
                        *r += dp * wk;
                    }
                }
            }
            for (k, v) in row.iter().enumerate() {
                jac.add(i, lo + k, *v);
            }
        }
        jac
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn newton(
    sys: &BvpSystem,
    cfg: &BvpConfig,
    guess: Vec<f64>,
) -> Result<GridSolution, PainleveError> {
    let mut q = guess;
    let mut f = sys.residual(&q);
    let mut iters = 0;
    let diverged = |f: &[f64], q: &[f64], iters| PainleveError::NewtonDiverged {
        residual: sup(f),
        iterate_norm: sup(q),
        iters,
    };
    while sup(&f) >= cfg.newton_tol {
        if iters == cfg.max_iters {
            return Err(diverged(&f, &q, iters));
        }
        iters += 1;
        let lu = sys
            .jacobian(&q)
            .factor()
            .map_err(|p| PainleveError::JacobianSingular { column: p.column })?;
        let delta = lu.solve(&f);
        let f0 = norm2(&f);
        let mut alpha = 1.0;
        loop {
            let trial: Vec<f64> = q.iter().zip(&delta).map(|(a, d)| a - alpha * d).collect();
            let ft = sys.residual(&trial);
            let finite = trial.iter().all(|x| x.is_finite()) && ft.iter().all(|x| x.is_finite());
            if finite && norm2(&ft) <= (1.0 - cfg.damping.armijo * alpha) * f0 {
                q = trial;
                f = ft;
                break;
            }
            alpha /= 2.0;
            if alpha < cfg.damping.min_step {
                return Err(diverged(&f, &q, iters));
            }
        }
    }
    Ok(GridSolution {
        m: cfg.m,
        t: cfg.t.clone(),
        half_width: cfg.half_width,
        stencil_order: cfg.stencil_order,
        s_grid: sys.s_grid.clone(),
        q_values: q,
        residual_sup: sup(&f),
        newton_iters: iters,
        converged: true,
        path: SolvePath::Direct,
    })
}

/// Damped Newton from a caller-supplied initial iterate on `cfg`'s grid.
pub fn solve_from_guess(cfg: &BvpConfig, guess: &[f64]) -> Result<GridSolution, PainleveError> {
    let sys = assemble_system(cfg)?;
    if guess.len() != sys.len() {
        return Err(PainleveError::ConfigInvalid(format!(
            "guess has {} values for {} nodes",
            guess.len(),
            sys.len()
        )));
    }
    newton(&sys, cfg, guess.to_vec())
}

/// Extends a coarser or narrower solution to `cfg`'s grid, filling the new region with
/// the boundary data of `sys`.
fn transfer(prev: &GridSolution, sys: &BvpSystem) -> Vec<f64> {
    sys.s_grid
        .iter()
        .map(|&s| {
            if s.abs() <= prev.half_width {
                sample(prev, s).unwrap_or(0.0)
            } else {
                sys.boundary_value(s, 0)
            }
        })
        .collect()
}

/// Newton from the leading-order guess, widening the domain geometrically when
/// continuation is enabled.
fn solve_at_times(cfg: &BvpConfig) -> Result<GridSolution, PainleveError> {
    let stages = match &cfg.continuation {
        None => Vec::new(),
        Some(cont) => {
            let mut widths = Vec::new();
            let mut w = cont.s_start.min(cfg.half_width);
            while w < cfg.half_width {
                widths.push(w);
                w *= cont.s_ratio;
            }
            widths
        }
    };
    let h = cfg.h();
    let min_nodes = 8 * cfg.m as usize + 2 * cfg.m as usize + cfg.stencil_order;
    let mut current: Option<GridSolution> = None;
    let run = |stage: &BvpConfig, current: &Option<GridSolution>| {
        let sys = assemble_system(stage)?;
        let guess = match current {
            Some(prev) => transfer(prev, &sys),
            None => leading_order_guess(stage.m, &stage.t, &sys.s_grid),
        };
        newton(&sys, stage, guess)
    };
    for w in stages {
        let half = ((w / h).round() as usize).max(min_nodes / 2);
        let n = 2 * half + 1;
        if n >= cfg.n_points {
            break;
        }
        let mut stage = cfg.clone();
        stage.n_points = n;
        stage.half_width = half as f64 * h;
        current = Some(run(&stage, &current)?);
    }
    run(cfg, &current)
}

/// Follows the straight line from `from.t` to `cfg.t`, re-solving with the previous
/// solution as initial iterate and adapting the step.
fn follow_times(
    cfg: &BvpConfig,
    from: GridSolution,
    t_step: f64,
) -> Result<GridSolution, PainleveError> {
    let start_t = from.t.clone();
    let dist = start_t
        .iter()
        .zip(&cfg.t)
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    if dist == 0.0 {
        return Ok(from);
    }
    let mut current = from;
    let mut lambda = 0.0;
    let mut step = (t_step / dist).min(1.0);
    let min_step = step / 1024.0;
    let mut direct = cfg.clone();
    direct.continuation = None;
    while lambda < 1.0 {
        let next = (lambda + step).min(1.0);
        let mut stage = direct.clone();
        stage.t = start_t
            .iter()
            .zip(&cfg.t)
            .map(|(a, b)| a + next * (b - a))
            .collect();
        let sys = assemble_system(&stage)?;
        match newton(&sys, &stage, current.q_values.clone()) {
            Ok(sol) => {
                current = sol;
                lambda = next;
                step *= 1.5;
            }
            Err(e @ PainleveError::NewtonDiverged { .. })
            | Err(e @ PainleveError::JacobianSingular { .. }) => {
                step /= 2.0;
                if step < min_step {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(current)
}

fn solve_by_domain(cfg: &BvpConfig, cont: &Continuation) -> Result<GridSolution, PainleveError> {
    let mut anchor = cfg.clone();
    anchor.t.iter_mut().for_each(|x| *x = 0.0);
    let base = solve_at_times(&anchor)?;
    let mut sol = follow_times(cfg, base, cont.t_step)?;
    sol.path = SolvePath::Domain;
    Ok(sol)
}

fn solve_by_anchor(cfg: &BvpConfig, cont: &Continuation) -> Result<GridSolution, PainleveError> {
    let mut anchor = cfg.clone();
    anchor.continuation = None;
    anchor.t.iter_mut().for_each(|x| *x = 0.0);
    anchor.t[0] = cont.anchor_t1;
    let sys = assemble_system(&anchor)?;
    let phi = sys.equation.derivative_free_part();
    let c = asymptotic_constant(cfg.m, 1);
    let a = 1.0 / (cfg.m as f64 + 1.0);
    let guess = sys
        .s_grid
        .iter()
        .map(|&s| algebraic_root(&phi, s, c * s.signum() * s.abs().powf(a)))
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| {
            PainleveError::ConfigInvalid("no real derivative-free root at the anchor".into())
        })?;
    let base = newton(&sys, &anchor, guess)?;
    let mut sol = follow_times(cfg, base, cont.t_step)?;
    sol.path = SolvePath::TimeAnchor;
    Ok(sol)
}

/// Pole-free solution by damped Newton and continuation; see [`Strategy`].
pub fn solve_pole_free(cfg: &BvpConfig) -> Result<GridSolution, PainleveError> {
    cfg.validate()?;
    let Some(cont) = cfg.continuation.clone() else {
        return solve_at_times(cfg);
    };
    match cont.strategy {
        Strategy::Domain => solve_by_domain(cfg, &cont),
        Strategy::TimeAnchor => solve_by_anchor(cfg, &cont),
        Strategy::Auto => match solve_by_domain(cfg, &cont) {
            Err(PainleveError::NewtonDiverged { .. })
            | Err(PainleveError::JacobianSingular { .. }) => solve_by_anchor(cfg, &cont),
            other => other,
        },
    }
}

/// Barycentric interpolation through the eight nodes nearest to `s`.
pub fn sample(sol: &GridSolution, s: f64) -> Result<f64, PainleveError> {
    let n = sol.s_grid.len();
    let half = sol.half_width;
    if !(s.abs() <= half * (1.0 + 1e-12)) {
        return Err(PainleveError::OutOfDomain {
            s,
            half_width: half,
        });
    }
    let h = sol.h();
    let x = (s - sol.s_grid[0]) / h;
    let nearest = (x.round().max(0.0) as usize).min(n - 1);
    if (x - nearest as f64).abs() < 1e-9 {
        return Ok(sol.q_values[nearest]);
    }
    const P: usize = 8;
    let lo = (x.floor() as isize - (P as isize / 2 - 1)).clamp(0, (n - P) as isize) as usize;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut binom = 1.0;
    for j in 0..P {
        if j > 0 {
            binom *= (P - j) as f64 / j as f64;
        }
        let w = if j % 2 == 0 { binom } else { -binom };
        let c = w / (x - (lo + j) as f64);
        num += c * sol.q_values[lo + j];
        den += c;
    }
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    /// Log-log slope of `|q - c_asym s^{1/(m+1)}|` on the positive window.
    pub exponent: f64,
    /// Least-squares `c` in `q ~ c s^{1/(m+1)}` on the positive window.
    pub c_fit: f64,
    pub c_asym: f64,
    /// Same quantities on the mirrored window at negative `s`.
    pub exponent_negative: f64,
    pub c_fit_negative: f64,
    pub c_asym_negative: f64,
    pub window: (f64, f64),
    pub nodes: usize,
    /// `max |q - c_asym |s|^{1/(m+1)}| * s^{m/(m+1)}` over the positive window: the
    /// constant in an upper bound of the form `O(|s|^{-m/(m+1)})`.
    pub bound_constant: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Log-log fit of the correction to the leading-order behaviour on `[S/2, 0.9 S]`.
pub fn verify_asymptotics(sol: &GridSolution) -> Result<AsymptoticFit, PainleveError> {
    const REQUIRED: usize = 20;
    let (a, b) = (0.5 * sol.half_width, 0.9 * sol.half_width);
    let a_exp = 1.0 / (sol.m as f64 + 1.0);
    let side = |sign: f64| {
        let c = asymptotic_constant(sol.m, sign as i32);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut num = 0.0;
        let mut den = 0.0;
        let mut bound = 0.0f64;
        for (&s, &q) in sol.s_grid.iter().zip(&sol.q_values) {
            let r = s * sign;
            if r < a || r > b {
                continue;
            }
            let lead = r.powf(a_exp);
            let diff = (q - c * lead).abs();
            num += q * lead;
            den += lead * lead;
            bound = bound.max(diff * r.powf(sol.m as f64 * a_exp));
            if diff > 0.0 {
                xs.push(r.ln());
                ys.push(diff.ln());
            }
        }
        (xs, ys, num / den, c, bound)
    };
    let (xp, yp, cp, cap, bound) = side(1.0);
    let (xn, yn, cn, can, _) = side(-1.0);
    let nodes = xp.len().min(xn.len());
    if nodes < REQUIRED {
        return Err(PainleveError::WindowTooSmall {
            nodes,
            required: REQUIRED,
        });
    }
    Ok(AsymptoticFit {
        exponent: slope(&xp, &yp),
        c_fit: cp,
        c_asym: cap,
        exponent_negative: slope(&xn, &yn),
        c_fit_negative: cn,
        c_asym_negative: can,
        window: (a, b),
        nodes,
        bound_constant: bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeFlowCheck {
    pub k: u32,
    pub delta: f64,
    /// Sup over `|s| <= S/2` of `|dq/dt_k + D L_k/(2k+1)|`.
    pub residual: f64,
    /// Sup of `|dq/dt_k|` on the same window, for scale.
    pub derivative_scale: f64,
}

/// Central difference in `t_k` of the computed solutions against the flow `-D L_k/(2k+1)`
/// evaluated on the solution at `cfg.t`.
pub fn verify_time_flow(
    cfg: &BvpConfig,
    k: u32,
    delta: f64,
) -> Result<TimeFlowCheck, PainleveError> {
    cfg.validate()?;
    if k == 0 || k >= cfg.m {
        return Err(PainleveError::ConfigInvalid(format!(
            "flow index k = {k} outside 1..={}",
            cfg.m - 1
        )));
    }
    if !(delta > 0.0) {
        return Err(PainleveError::ConfigInvalid(
            "delta must be positive".into(),
        ));
    }
    let base = solve_pole_free(cfg)?;
    let shifted = |sign: f64| {
        let mut c = cfg.clone();
        c.t[k as usize - 1] += sign * delta;
        solve_from_guess(&c, &base.q_values)
    };
    let plus = shifted(1.0)?;
    let minus = shifted(-1.0)?;
    let flux = lenard_sequence(k as usize)?[k as usize].total_derivative();
    let flux = CompiledPoly::new(&flux, &cfg.t);
    let op = FdOperator::new(
        base.s_grid.len(),
        base.h(),
        2 * cfg.m as usize,
        cfg.stencil_order,
    );
    let scale = 1.0 / (2.0 * k as f64 + 1.0);
    let mut residual = 0.0f64;
    let mut derivative_scale = 0.0f64;
    for (i, &s) in base.s_grid.iter().enumerate() {
        if s.abs() > 0.5 * cfg.half_width {
            continue;
        }
        let dq = (plus.q_values[i] - minus.q_values[i]) / (2.0 * delta);
        let jet = op.jet(&base.q_values, i);
        residual = residual.max((dq + scale * flux.eval(s, &jet)).abs());
        derivative_scale = derivative_scale.max(dq.abs());
    }
    Ok(TimeFlowCheck {
        k,
        delta,
        residual,
        derivative_scale,
    })
}
