//! Initial data described through `f_L`, the inverse of the decreasing branch of `u0`,
//! plus the Hopf solution and the location of its gradient catastrophe.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::series::Series;
use super::KdvError;

/// How `u0` is described.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DataMode {
    /// `u0(x) = -sech^2((x - x_M)/width)`.
    Direct { width: f64 },
    /// `f_L(u) = x_M - beta artanh(sqrt(u+1)) - sqrt(u+1) P(u)` with
    /// `P(u) = sum_j p_coeffs[j] (u - p_center)^j`.
    FromFl {
        beta: f64,
        p_coeffs: Vec<f64>,
        p_center: f64,
    },
}

/// Smooth cut-off applied to `u0`: one for `|x| <= start*L`, zero for `|x| >= end*L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Taper {
    pub start: f64,
    pub end: f64,
}

impl Default for Taper {
    fn default() -> Self {
        Taper {
            start: 0.7,
            end: 0.8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialDataSpec {
    pub mode: DataMode,
    pub x_m: f64,
    pub half_width: f64,
    pub taper: Taper,
}

/// Knobs of [`build_initial_data`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataParams {
    pub x_m: f64,
    pub half_width: f64,
    /// Point at which the derivatives of `f_L` are made to vanish (m >= 4).
    pub u_c: f64,
    /// Prescribed `f_L^{(m+1)}(u_c)`; must be negative.
    pub top_derivative: f64,
    pub beta: f64,
}

impl Default for DataParams {
    fn default() -> Self {
        DataParams {
            x_m: 0.0,
            half_width: 15.0,
            u_c: -2.0 / 3.0,
            top_derivative: -400.0,
            beta: 1.0,
        }
    }
}

/// Samples of `w = sqrt(u+1)` used for monotonicity and slope scans.
const SCAN: usize = 4000;

impl InitialDataSpec {
    pub fn sech_squared(x_m: f64, half_width: f64) -> Self {
        InitialDataSpec {
            mode: DataMode::Direct { width: 1.0 },
            x_m,
            half_width,
            taper: Taper::default(),
        }
    }

    fn beta(&self) -> f64 {
        match &self.mode {
            DataMode::Direct { width } => *width,
            DataMode::FromFl { beta, .. } => *beta,
        }
    }

    fn p_and_slope(&self, u: f64) -> (f64, f64) {
        match &self.mode {
            DataMode::Direct { .. } => (0.0, 0.0),
            DataMode::FromFl {
                p_coeffs, p_center, ..
            } => {
                let d = u - p_center;
                p_coeffs
                    .iter()
                    .rev()
                    .fold((0.0, 0.0), |(p, dp), c| (p * d + c, dp * d + p))
            }
        }
    }

    /// `f_L` and `df_L/dw` as functions of `w = sqrt(u+1)` in `[0, 1)`.
    pub fn f_l_of_w(&self, w: f64) -> (f64, f64) {
        let u = -(1.0 - w) * (1.0 + w);
        let (p, dp) = self.p_and_slope(u);
        let beta = self.beta();
        let atanh = 0.5 * (w.ln_1p() - (-w).ln_1p());
        let f = self.x_m - beta * atanh - w * p;
        let df = -beta / (-u) - p - 2.0 * w * w * dp;
        (f, df)
    }

    pub fn f_l(&self, u: f64) -> f64 {
        self.f_l_of_w((u + 1.0).sqrt()).0
    }

    pub fn f_l_prime(&self, u: f64) -> f64 {
        let w = (u + 1.0).sqrt();
        self.f_l_of_w(w).1 / (2.0 * w)
    }

    /// `f_L^{(j)}(u)` for `j = 0..=order`, from Taylor arithmetic.
    pub fn f_l_derivatives(&self, u: f64, order: usize) -> Vec<f64> {
        self.f_l_series(u, order).derivatives()
    }

    fn f_l_series(&self, u: f64, order: usize) -> Series {
        let arc = atanh_sqrt_series(u, order).scale(self.beta());
        let mut out = &Series::constant(self.x_m, order) - &arc;
        if let DataMode::FromFl {
            p_coeffs, p_center, ..
        } = &self.mode
        {
            let w = Series::variable(u + 1.0, order).sqrt();
            let d = Series::variable(u - p_center, order);
            let mut p = Series::constant(0.0, order);
            for c in p_coeffs.iter().rev() {
                p = &(&p * &d) + &Series::constant(*c, order);
            }
            out = &out - &(&w * &p);
        }
        out
    }

    fn taper_factor(&self, x: f64) -> (f64, f64) {
        let a = self.taper.start * self.half_width;
        let b = self.taper.end * self.half_width;
        let r = (x.abs() - a) / (b - a);
        if r <= 0.0 {
            return (1.0, 0.0);
        }
        if r >= 1.0 {
            return (0.0, 0.0);
        }
        // C-infinity step 1 -> 0 on r in (0, 1)
        let e0 = (-1.0 / (1.0 - r)).exp();
        let e1 = (-1.0 / r).exp();
        let val = e0 / (e0 + e1);
        let de0 = -e0 / ((1.0 - r) * (1.0 - r));
        let de1 = e1 / (r * r);
        let dval = (de0 * (e0 + e1) - e0 * (de0 + de1)) / ((e0 + e1) * (e0 + e1));
        (val, dval * x.signum() / (b - a))
    }

    /// `w = sqrt(u0(x) + 1)` on the decreasing branch, for `x <= x_M`.
    fn invert(&self, x: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0 - f64::EPSILON);
        if self.f_l_of_w(hi).0 >= x {
            return hi;
        }
        let mut w = 0.5;
        for _ in 0..200 {
            let (f, df) = self.f_l_of_w(w);
            let g = f - x;
            if g > 0.0 {
                lo = w;
            } else {
                hi = w;
            }
            let mut next = w - g / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - w).abs() <= 2.0 * f64::EPSILON * w || hi - lo < 1e-17 {
                return next;
            }
            w = next;
        }
        w
    }

    /// Untapered `u0` and its derivative.
    fn u0_raw(&self, x: f64) -> (f64, f64) {
        let mirrored = x > self.x_m;
        let y = if mirrored { 2.0 * self.x_m - x } else { x };
        let (u, du) = match &self.mode {
            DataMode::Direct { width } => {
                let z = (y - self.x_m) / width;
                let sech2 = 1.0 / z.cosh().powi(2);
                (-sech2, 2.0 * sech2 * z.tanh() / width)
            }
            DataMode::FromFl { .. } => {
                let w = self.invert(y);
                let u = -(1.0 - w) * (1.0 + w);
                let df = self.f_l_of_w(w).1;
                // du/dx = 2w / (df/dw)
                (u, if w == 0.0 { 0.0 } else { 2.0 * w / df })
            }
        };
        if mirrored {
            (u, -du)
        } else {
            (u, du)
        }
    }

    pub fn u0(&self, x: f64) -> f64 {
        self.u0_with_slope(x).0
    }

    /// Tapered `u0(x)` and `u0'(x)`.
    pub fn u0_with_slope(&self, x: f64) -> (f64, f64) {
        let (tau, dtau) = self.taper_factor(x);
        if tau == 0.0 {
            return (0.0, 0.0);
        }
        let (u, du) = self.u0_raw(x);
        (tau * u, tau * du + dtau * u)
    }

    /// `min over (-1, 0) of -f_L'`, i.e. `6 t_c`, with the scan location in `w`.
    fn slope_minimum(&self) -> Result<(f64, f64), KdvError> {
        let slope = |w: f64| -self.f_l_of_w(w).1 / (2.0 * w);
        let ws: Vec<f64> = (1..SCAN).map(|i| i as f64 / SCAN as f64).collect();
        let vals: Vec<f64> = ws.iter().map(|&w| slope(w)).collect();
        let mut minima: Vec<usize> = (1..vals.len() - 1)
            .filter(|&i| vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1])
            .collect();
        minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let &best = minima.first().ok_or(KdvError::MaximizerNotUnique {
            u_a: f64::NAN,
            u_b: f64::NAN,
        })?;
        // a flat minimum shows up as a run of equal samples; only distant rivals count
        if let Some(&rival) = minima
            .iter()
            .skip(1)
            .find(|&&i| i.abs_diff(best) > 2 && vals[i] <= vals[best] * (1.0 + 1e-6))
        {
            return Err(KdvError::MaximizerNotUnique {
                u_a: ws[best] * ws[best] - 1.0,
                u_b: ws[rival] * ws[rival] - 1.0,
            });
        }
        // golden section on the bracketing cells
        let (mut a, mut b) = (ws[best - 1], ws[best + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
        let (mut fc, mut fd) = (slope(c), slope(d));
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = slope(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = slope(d);
            }
        }
        let w = 0.5 * (a + b);
        Ok((slope(w).min(fc).min(fd), w))
    }

    /// The first time at which characteristics cross.
    pub fn breaking_time(&self) -> Result<f64, KdvError> {
        Ok(self.slope_minimum()?.0 / 6.0)
    }

    pub fn validate(&self) -> Result<(), KdvError> {
        if !(self.beta() > 0.0) {
            return Err(KdvError::InvalidParameter(format!(
                "beta/width must be positive, got {}",
                self.beta()
            )));
        }
        if !(self.half_width > 0.0) || !(self.taper.start < self.taper.end && self.taper.end <= 1.0)
        {
            return Err(KdvError::InvalidParameter("bad domain or taper".into()));
        }
        for i in 0..SCAN {
            let w = i as f64 / SCAN as f64;
            if !(self.f_l_of_w(w).1 < 0.0) {
                return Err(KdvError::MonotonicityLost { u: w * w - 1.0 });
            }
        }
        Ok(())
    }
}

/// Taylor series of `artanh(sqrt(1 + u0 + d))` in `d`.
fn atanh_sqrt_series(u0: f64, order: usize) -> Series {
    let w = Series::variable(u0 + 1.0, order).sqrt();
    // d/du artanh(w) = w' / (1 - w^2) = w' / (-u)
    let minus_u = Series::variable(u0, order).scale(-1.0);
    let w0 = w.0[0];
    let c0 = 0.5 * (w0.ln_1p() - (-w0).ln_1p());
    w.derivative().div(&minus_u).integrate(c0)
}

fn double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(f64::from).product()
}

/// Builds the initial data of vanishing order `m`: `-sech^2` for `m = 2`, otherwise the
/// `f_L` whose derivatives of orders `2..=m` vanish at `u_c`.
pub fn build_initial_data(m: u32, params: &DataParams) -> Result<InitialDataSpec, KdvError> {
    if m < 2 || m % 2 == 1 {
        return Err(KdvError::InvalidOrder(m));
    }
    if m == 2 {
        let spec = InitialDataSpec::sech_squared(params.x_m, params.half_width);
        spec.validate()?;
        return Ok(spec);
    }
    if !(params.u_c > -1.0 && params.u_c < 0.0) {
        return Err(KdvError::InvalidParameter(format!(
            "u_c = {} must lie in (-1, 0)",
            params.u_c
        )));
    }
    if !(params.top_derivative < 0.0) {
        return Err(KdvError::InvalidParameter(
            "the top derivative must be negative for k > 0".into(),
        ));
    }
    let m = m as usize;
    let order = m + 1;
    let base = InitialDataSpec {
        mode: DataMode::FromFl {
            beta: params.beta,
            p_coeffs: vec![],
            p_center: params.u_c,
        },
        x_m: params.x_m,
        half_width: params.half_width,
        taper: Taper::default(),
    };
    let fixed = base.f_l_derivatives(params.u_c, order);
    // column i: derivatives of -sqrt(u+1) (u-u_c)^i
    let w = Series::variable(params.u_c + 1.0, order).sqrt();
    let d = Series::variable(0.0, order);
    let mut a = DMatrix::zeros(m, m);
    let mut power = Series::constant(1.0, order);
    for i in 0..m {
        let col = (-&(&w * &power)).derivatives();
        for j in 2..=order {
            a[(j - 2, i)] = col[j];
        }
        power = &power * &d;
    }
    let rhs = DVector::from_iterator(
        m,
        (2..=order).map(|j| if j == order { params.top_derivative } else { 0.0 } - fixed[j]),
    );
    let lu = a.clone().lu();
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if lu.determinant().abs() <= scale.powi(m as i32) * 1e-12 {
        return Err(KdvError::ConstraintSingular);
    }
    let coeffs = lu.solve(&rhs).ok_or(KdvError::ConstraintSingular)?;
    let spec = InitialDataSpec {
        mode: DataMode::FromFl {
            beta: params.beta,
            p_coeffs: coeffs.iter().copied().collect(),
            p_center: params.u_c,
        },
        ..base
    };
    spec.validate()?;
    Ok(spec)
}

/// Solves `x = 6 t u0(xi) + xi` and returns `u0(xi)`.
pub fn hopf_solve(data: &InitialDataSpec, x: f64, t: f64) -> Result<f64, KdvError> {
    let t_c = data.breaking_time()?;
    hopf_solve_below(data, x, t, t_c)
}

/// [`hopf_solve`] with the breaking time supplied by the caller.
pub fn hopf_solve_below(data: &InitialDataSpec, x: f64, t: f64, t_c: f64) -> Result<f64, KdvError> {
    if t >= t_c {
        return Err(KdvError::MultivaluedRegion { t, t_c });
    }
    if t == 0.0 {
        return Ok(data.u0(x));
    }
    let g = |xi: f64| {
        let (u, du) = data.u0_with_slope(xi);
        (xi + 6.0 * t * u - x, 1.0 + 6.0 * t * du, u)
    };
    // u0 takes values in [-1, 0]
    let (mut lo, mut hi) = if t > 0.0 {
        (x, x + 6.0 * t)
    } else {
        (x + 6.0 * t, x)
    };
    let (glo, ghi) = (g(lo).0, g(hi).0);
    if glo == 0.0 {
        return Ok(g(lo).2);
    }
    if ghi == 0.0 {
        return Ok(g(hi).2);
    }
    if glo > 0.0 || ghi < 0.0 {
        return Err(KdvError::NoBracket { x });
    }
    let mut xi = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (r, dr, u) = g(xi);
        if r == 0.0 {
            return Ok(u);
        }
        if r < 0.0 {
            lo = xi;
        } else {
            hi = xi;
        }
        let mut next = xi - r / dr;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - xi).abs() <= 1e-15 * (1.0 + xi.abs()) {
            return Ok(g(next).2);
        }
        xi = next;
    }
    Ok(g(xi).2)
}

/// The point `(x_c, t_c, u_c)` where the Hopf solution first develops an infinite slope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x_c: f64,
    pub t_c: f64,
    pub u_c: f64,
    pub m: u32,
    pub k: f64,
    /// `f_L^{(j)}(u_c)` for `j = 2..=m+1`.
    pub fl_derivs: Vec<f64>,
}

impl CriticalPoint {
    /// `F`, `F'`, `F''` of `F(u) = -x + 6ut + f_L(u)` at the critical point.
    pub fn residuals(&self, data: &InitialDataSpec) -> [f64; 3] {
        let d = data.f_l_derivatives(self.u_c, 2);
        [
            -self.x_c + 6.0 * self.u_c * self.t_c + d[0],
            6.0 * self.t_c + d[1],
            d[2],
        ]
    }
}

/// Locates the gradient catastrophe and checks that `f_L` vanishes to order `m` there.
pub fn critical_point(data: &InitialDataSpec, m: u32) -> Result<CriticalPoint, KdvError> {
    if m < 2 || m % 2 == 1 {
        return Err(KdvError::InvalidOrder(m));
    }
    let (six_tc, w_scan) = data.slope_minimum()?;
    let t_c = six_tc / 6.0;
    let top = m as usize + 1;
    // f_L^{(m)} has a simple zero at u_c
    let mut u = w_scan * w_scan - 1.0;
    for _ in 0..100 {
        let d = data.f_l_derivatives(u, top);
        let step = d[top - 1] / d[top];
        let next = (u - step).clamp(0.5 * (u - 1.0), 0.5 * u);
        if (next - u).abs() < 1e-15 {
            u = next;
            break;
        }
        u = next;
    }
    let d = data.f_l_derivatives(u, top);
    let scale = d[top].abs().max(1.0);
    for (j, &v) in d.iter().enumerate().take(top).skip(2) {
        if v.abs() > 1e-7 * scale {
            return Err(KdvError::DerivativeChainBroken {
                order: j as u32,
                value: v,
            });
        }
    }
    let kbase = -2f64.powi(m as i32 - 1) / double_factorial(2 * m + 1) * d[top];
    if !(kbase > 0.0) || d[top].abs() < 1e-10 {
        return Err(KdvError::DerivativeChainBroken {
            order: top as u32,
            value: d[top],
        });
    }
    let k = kbase.powf(2.0 / (2.0 * m as f64 + 3.0));
    Ok(CriticalPoint {
        x_c: 6.0 * u * t_c + d[0],
        t_c,
        u_c: u,
        m,
        k,
        fl_derivs: d[2..].to_vec(),
    })
}
