//! Closed-form g-function data for the large-|s| analysis of the even members of the
//! hierarchy: the branch point `z0`, the polynomial `p`, the asymptotic constant `c`,
//! and certificates of the positivity properties the construction relies on.

pub mod sturm;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::diffpoly::{int, rational_to_f64};
use sturm::{count_real_roots, RatPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GfunError {
    #[error("odd order m = {0}: only even members have real pole-free solutions")]
    OddOrderRequested(u32),
    #[error("m must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("sign of s must be +1 or -1, got {0}")]
    InvalidSign(i32),
    #[error("zeta = {zeta} lies outside the real branch (needs {bound})")]
    BranchViolation { zeta: f64, bound: String },
}

/// `n!!` for odd `n >= -1`, with `(-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, k| acc * k)
}

/// `c_j = (2j+1)!! / (2^j j!)`, the Taylor coefficients of `(1 - x)^{-3/2}`.
pub fn c_coefficient(j: u32) -> BigRational {
    BigRational::new(
        double_factorial(2 * j as i64 + 1),
        BigInt::from(2).pow(j) * factorial(j),
    )
}

/// `b_j = (2j-1)!! / (2^j j!)`.
pub fn b_coefficient(j: u32) -> BigRational {
    BigRational::new(
        double_factorial(2 * j as i64 - 1),
        BigInt::from(2).pow(j) * factorial(j),
    )
}

/// `2^{m-1} (m+1)! / (2m+1)!!`, exactly.
pub fn radical_base(m: u32) -> BigRational {
    BigRational::new(
        BigInt::from(2).pow(m - 1) * factorial(m + 1),
        double_factorial(2 * m as i64 + 1),
    )
}

/// The constant `c` of `q(s) ~ c |s|^{1/(m+1)}`, `c = sgn(s)/2 * radical_base(m)^{1/(m+1)}`.
pub fn asymptotic_constant(m: u32, sign_s: i32) -> f64 {
    sign_s as f64 * 0.5 * rational_to_f64(&radical_base(m)).powf(1.0 / (m as f64 + 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GFunctionSpec {
    pub m: u32,
    pub sign_s: i32,
    pub z0: f64,
    #[serde(serialize_with = "serialize_rationals")]
    pub c_coeffs: Vec<BigRational>,
    #[serde(serialize_with = "serialize_rationals")]
    pub b_coeffs: Vec<BigRational>,
    pub c_asym: f64,
}

fn serialize_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    strs.serialize(s)
}

pub fn make_gfunction(m: u32, sign_s: i32) -> Result<GFunctionSpec, GfunError> {
    if m % 2 == 1 {
        return Err(GfunError::OddOrderRequested(m));
    }
    if m < 2 {
        return Err(GfunError::OrderTooSmall(m));
    }
    if sign_s != 1 && sign_s != -1 {
        return Err(GfunError::InvalidSign(sign_s));
    }
    let root = rational_to_f64(&radical_base(m)).powf(1.0 / (m as f64 + 1.0));
    let z0 = -(sign_s as f64) * root;
    Ok(GFunctionSpec {
        m,
        sign_s,
        z0,
        c_coeffs: (0..=m).map(c_coefficient).collect(),
        b_coeffs: (1..=m).map(b_coefficient).collect(),
        c_asym: -z0 / 2.0,
    })
}

impl GFunctionSpec {
    /// `p(z) = 4/(2m+3) z0^m sum_j c_j z^{m-j}`.
    pub fn p(&self, z: f64) -> f64 {
        let poly = self
            .c_coeffs
            .iter()
            .fold(0.0, |acc, c| acc * z + rational_to_f64(c));
        4.0 / (2.0 * self.m as f64 + 3.0) * self.z0.powi(self.m as i32) * poly
    }

    /// `z^m + sum_j b_j z^{m-j}`, the polynomial factor of `g'` up to `2 z0^m`.
    pub fn derivative_factor(&self) -> RatPoly {
        let mut coeffs: Vec<BigRational> = self.b_coeffs.iter().rev().cloned().collect();
        coeffs.push(BigRational::one());
        RatPoly::new(coeffs)
    }
}

/// `g(zeta) = (zeta - z0)^{3/2} p(zeta / z0)` on the real ray `zeta >= z0`.
pub fn g_eval(spec: &GFunctionSpec, zeta: f64) -> Result<f64, GfunError> {
    if !(zeta >= spec.z0) {
        return Err(GfunError::BranchViolation {
            zeta,
            bound: format!("zeta >= z0 = {}", spec.z0),
        });
    }
    Ok((zeta - spec.z0).powf(1.5) * spec.p(zeta / spec.z0))
}

/// `theta_hat(zeta) = 4/(2m+3) zeta^{(2m+3)/2} + sgn(s) zeta^{1/2}` for `zeta >= 0`.
pub fn theta_hat_eval(spec: &GFunctionSpec, zeta: f64) -> Result<f64, GfunError> {
    theta_hat_with_times(spec, zeta, &[], 1.0)
}

/// `theta_hat` including the time terms `4/(2j+1) t_j |s|^{(j-m-1)/(m+1)} zeta^{(2j+1)/2}`.
pub fn theta_hat_with_times(
    spec: &GFunctionSpec,
    zeta: f64,
    t: &[f64],
    abs_s: f64,
) -> Result<f64, GfunError> {
    if !(zeta >= 0.0) {
        return Err(GfunError::BranchViolation {
            zeta,
            bound: "zeta >= 0".into(),
        });
    }
    let m = spec.m as f64;
    let mut v =
        4.0 / (2.0 * m + 3.0) * zeta.powf((2.0 * m + 3.0) / 2.0) + spec.sign_s as f64 * zeta.sqrt();
    for (idx, &tj) in t.iter().enumerate() {
        let j = idx as f64 + 1.0;
        v += 4.0 / (2.0 * j + 1.0)
            * tj
            * abs_s.powf((j - m - 1.0) / (m + 1.0))
            * zeta.powf((2.0 * j + 1.0) / 2.0);
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub m: u32,
    pub sign_s: i32,
    /// Distinct real roots of `z^m + sum b_j z^{m-j}` (Sturm count).
    pub real_roots: usize,
    pub c_increasing: bool,
    pub b_decreasing: bool,
    pub samples: usize,
    /// Smallest sampled `g(zeta)`.
    pub min_g: f64,
    /// Smallest sampled `p(zeta/z0)`, i.e. `g / (zeta - z0)^{3/2}`.
    pub min_p: f64,
    pub passed: bool,
}

/// Certifies `g > 0` on `zeta > z0`: the exact Sturm count of the derivative factor,
/// the monotonicity of `c_j` and `b_j`, and sampling on a geometric grid up to `z0 + 1e4`.
pub fn verify_positivity(spec: &GFunctionSpec) -> PositivityReport {
    let real_roots = count_real_roots(&spec.derivative_factor());
    let c_increasing = spec.c_coeffs.windows(2).all(|w| w[0] < w[1]);
    let b_decreasing = spec.b_coeffs.windows(2).all(|w| w[0] > w[1]);

    let samples = 4001;
    let (lo, hi) = (-8.0_f64, 4.0_f64);
    let mut min_g = f64::INFINITY;
    let mut min_p = f64::INFINITY;
    for i in 0..samples {
        let e = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let zeta = spec.z0 + 10f64.powf(e);
        let g = g_eval(spec, zeta).expect("sampled on the real branch");
        min_g = min_g.min(g);
        min_p = min_p.min(spec.p(zeta / spec.z0));
    }
    let passed = real_roots == 0 && c_increasing && b_decreasing && min_g > 0.0 && min_p > 0.0;
    PositivityReport {
        m: spec.m,
        sign_s: spec.sign_s,
        real_roots,
        c_increasing,
        b_decreasing,
        samples,
        min_g,
        min_p,
        passed,
    }
}

/// Distance between the m = 2 asymptote mapped through `U = -60^{2/7} q`,
/// `X = 60^{-1/7} s` and the known `(6|X|)^{1/3}` behaviour.
pub fn pi2_crosscheck() -> f64 {
    let c = make_gfunction(2, 1).expect("m = 2 is valid").c_asym;
    (60f64.powf(2.0 / 7.0) * c * 60f64.powf(1.0 / 21.0) - 6f64.powf(1.0 / 3.0)).abs()
}

/// Exact form of the same identity: `(60^{1/3} c)^3 = 60 * (1/8) * radical_base(2) = 6`.
pub fn pi2_identity_exact() -> bool {
    int(60) * BigRational::new(1.into(), 8.into()) * radical_base(2) == int(6)
}

/// `(m, sign)` pairs evaluated in parallel; used by sweeps in the CLI.
pub fn sweep(ms: &[u32]) -> Vec<Result<(GFunctionSpec, PositivityReport), GfunError>> {
    use rayon::prelude::*;
    ms.par_iter()
        .flat_map_iter(|&m| [1, -1].into_iter().map(move |s| (m, s)))
        .map(|(m, s)| {
            make_gfunction(m, s).map(|g| {
                let r = verify_positivity(&g);
                (g, r)
            })
        })
        .collect()
}
