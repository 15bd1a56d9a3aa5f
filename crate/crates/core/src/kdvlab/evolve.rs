//! Fourier pseudospectral integration of `u_t + 6 u u_x + eps^2 u_xxx = 0` on a
//! periodic interval, with the dispersive term propagated exactly.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::data::InitialDataSpec;
use super::KdvError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KdvConfig {
    pub eps: f64,
    /// The grid covers `[-L, L)`.
    pub half_width: f64,
    /// Number of nodes, a power of two.
    pub n: usize,
    /// `dt = courant * dx / max|u0|` unless `dt` is given.
    pub courant: f64,
    pub dt: Option<f64>,
    /// Largest admissible share of spectral energy in the top octave of the retained band.
    pub tail_tol: f64,
    pub monitor_every: usize,
}

impl KdvConfig {
    pub fn new(eps: f64, half_width: f64, n: usize) -> Self {
        KdvConfig {
            eps,
            half_width,
            n,
            courant: 0.1,
            dt: None,
            tail_tol: 1e-10,
            monitor_every: 50,
        }
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| -self.half_width + j as f64 * self.dx())
            .collect()
    }

    fn validate(&self) -> Result<(), KdvError> {
        if !self.n.is_power_of_two() || self.n < 16 {
            return Err(KdvError::InvalidParameter(format!(
                "N = {} must be a power of two >= 16",
                self.n
            )));
        }
        if !(self.eps > 0.0) || !(self.half_width > 0.0) || !(self.courant > 0.0) {
            return Err(KdvError::InvalidParameter(
                "eps, L and the Courant number must be positive".into(),
            ));
        }
        if self.dt.is_some_and(|dt| !(dt > 0.0)) {
            return Err(KdvError::InvalidParameter("dt must be positive".into()));
        }
        Ok(())
    }
}

/// A snapshot of the solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KdvField {
    pub half_width: f64,
    pub n: usize,
    pub eps: f64,
    pub t: f64,
    pub values: Vec<f64>,
    pub steps: usize,
    pub dt: f64,
    /// Top-octave energy share at this time.
    pub tail: f64,
    #[serde(skip)]
    spectrum: Vec<Complex64>,
}

impl KdvField {
    pub fn grid(&self) -> Vec<f64> {
        let dx = 2.0 * self.half_width / self.n as f64;
        (0..self.n)
            .map(|j| -self.half_width + j as f64 * dx)
            .collect()
    }

    /// `int u dx` by the trapezoidal rule, exact for the trigonometric interpolant.
    pub fn mass(&self) -> f64 {
        2.0 * self.half_width / self.n as f64 * self.values.iter().sum::<f64>()
    }

    /// Value of the trigonometric interpolant at any `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.n;
        let theta = PI * (x + self.half_width) / self.half_width;
        let mut acc = self.spectrum[0].re;
        let step = Complex64::from_polar(1.0, theta);
        let mut phase = step;
        for j in 1..n / 2 {
            acc += 2.0 * (self.spectrum[j] * phase).re;
            phase *= step;
        }
        // the Nyquist mode is split evenly between +-N/2
        acc += self.spectrum[n / 2].re * (0.5 * n as f64 * theta).cos();
        acc / n as f64
    }
}

struct Stepper {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Wavenumbers with the Nyquist entry zeroed.
    k: Vec<f64>,
    dealias: Vec<bool>,
    eps: f64,
    buf: Vec<Complex64>,
}

impl Stepper {
    fn new(cfg: &KdvConfig) -> Self {
        let n = cfg.n;
        let mut planner = FftPlanner::new();
        let k = (0..n)
            .map(|j| {
                let jj = if j < n / 2 {
                    j as f64
                } else if j == n / 2 {
                    0.0
                } else {
                    j as f64 - n as f64
                };
                PI / cfg.half_width * jj
            })
            .collect();
        let dealias = (0..n).map(|j| j.min(n - j) <= n / 3).collect();
        Stepper {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            k,
            dealias,
            eps: cfg.eps,
            buf: vec![Complex64::default(); n],
        }
    }

    fn physical(&mut self, spec: &[Complex64]) -> Vec<f64> {
        self.buf.copy_from_slice(spec);
        self.inv.process(&mut self.buf);
        let scale = 1.0 / self.n as f64;
        self.buf.iter().map(|c| c.re * scale).collect()
    }

    fn spectral(&mut self, u: &[f64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut out);
        out
    }

    /// Spectrum of `-3 (u^2)_x`, dealiased.
    fn nonlinear(&mut self, spec: &[Complex64]) -> Vec<Complex64> {
        let u = self.physical(spec);
        let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
        let mut out = self.spectral(&sq);
        for (j, c) in out.iter_mut().enumerate() {
            *c = if self.dealias[j] {
                Complex64::new(0.0, -3.0 * self.k[j]) * *c
            } else {
                Complex64::default()
            };
        }
        out
    }

    /// `exp(i eps^2 k^3 tau)`.
    fn propagator(&self, tau: f64) -> Vec<Complex64> {
        let e2 = self.eps * self.eps;
        self.k
            .iter()
            .map(|k| Complex64::from_polar(1.0, e2 * k * k * k * tau))
            .collect()
    }

    /// One integrating-factor Runge-Kutta 4 step.
    fn step(&mut self, v: &mut [Complex64], dt: f64, half: &[Complex64]) {
        let n = self.n;
        let a: Vec<Complex64> = self.nonlinear(v).into_iter().map(|c| c * dt).collect();
        let arg: Vec<Complex64> = (0..n).map(|j| half[j] * (v[j] + 0.5 * a[j])).collect();
        let b: Vec<Complex64> = self.nonlinear(&arg).into_iter().map(|c| c * dt).collect();
        let arg: Vec<Complex64> = (0..n).map(|j| half[j] * v[j] + 0.5 * b[j]).collect();
        let c: Vec<Complex64> = self.nonlinear(&arg).into_iter().map(|c| c * dt).collect();
        let arg: Vec<Complex64> = (0..n)
            .map(|j| half[j] * half[j] * v[j] + half[j] * c[j])
            .collect();
        let d: Vec<Complex64> = self.nonlinear(&arg).into_iter().map(|c| c * dt).collect();
        for j in 0..n {
            let e = half[j];
            let e2 = e * e;
            v[j] = e2 * v[j] + (e2 * a[j] + 2.0 * e * (b[j] + c[j]) + d[j]) / 6.0;
        }
    }

    fn tail(&self, v: &[Complex64]) -> f64 {
        let n = self.n;
        let (mut top, mut total) = (0.0, 0.0);
        for (j, c) in v.iter().enumerate() {
            let jj = j.min(n - j);
            let e = c.norm_sqr();
            total += e;
            if jj > n / 6 && jj <= n / 3 {
                top += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            top / total
        }
    }
}

/// Evolves samples `u0` on the config grid and returns snapshots at ascending `times`.
pub fn kdv_evolve_values(
    u0: &[f64],
    cfg: &KdvConfig,
    times: &[f64],
) -> Result<Vec<KdvField>, KdvError> {
    cfg.validate()?;
    if u0.len() != cfg.n {
        return Err(KdvError::InvalidParameter(format!(
            "{} samples for N = {}",
            u0.len(),
            cfg.n
        )));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(KdvError::InvalidParameter(
            "output times must be ascending and >= 0".into(),
        ));
    }
    let mut st = Stepper::new(cfg);
    let umax = u0.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let dt_max = cfg.dt.unwrap_or(cfg.courant * cfg.dx() / umax.max(1e-12));
    let mut v = st.spectral(u0);
    let (mut t, mut steps) = (0.0, 0usize);
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        let count = (span / dt_max).ceil() as usize;
        if count > 0 {
            let dt = span / count as f64;
            let half = st.propagator(0.5 * dt);
            for i in 0..count {
                st.step(&mut v, dt, &half);
                steps += 1;
                if (i + 1) % cfg.monitor_every == 0 || i + 1 == count {
                    let now = t + (i + 1) as f64 * dt;
                    if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                        return Err(KdvError::Blowup { t: now });
                    }
                    let tail = st.tail(&v);
                    if tail > cfg.tail_tol {
                        return Err(KdvError::ResolutionInsufficient { tail, t: now });
                    }
                }
            }
        }
        t = target;
        out.push(KdvField {
            half_width: cfg.half_width,
            n: cfg.n,
            eps: cfg.eps,
            t,
            values: st.physical(&v),
            steps,
            dt: if count > 0 { span / count as f64 } else { 0.0 },
            tail: st.tail(&v),
            spectrum: v.clone(),
        });
    }
    Ok(out)
}

/// Evolves the initial data to `t_end`.
pub fn kdv_evolve(
    data: &InitialDataSpec,
    cfg: &KdvConfig,
    t_end: f64,
) -> Result<KdvField, KdvError> {
    let u0: Vec<f64> = cfg.grid().iter().map(|&x| data.u0(x)).collect();
    Ok(kdv_evolve_values(&u0, cfg, &[t_end])?.remove(0))
}
