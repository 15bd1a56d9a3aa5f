//! Dense univariate polynomials over the rationals and Sturm real-root counting.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Remainder of Euclidean division by a non-zero divisor.
    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / &lead;
            for (i, c) in d.0.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    /// Sign of the polynomial as x -> +inf (`positive = true`) or -inf.
    fn sign_at_infinity(&self, positive: bool) -> i32 {
        let Some(d) = self.degree() else { return 0 };
        let s = if self.0[d].is_positive() { 1 } else { -1 };
        if positive || d % 2 == 0 {
            s
        } else {
            -s
        }
    }
}

/// `p, p', -rem(p, p'), ...` down to a constant.
pub fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone()];
    if p.is_zero() {
        return seq;
    }
    let mut next = p.derivative();
    while !next.is_zero() {
        let r = seq.last().unwrap().rem(&next);
        seq.push(next);
        next = RatPoly::new(r.0.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let nz: Vec<i32> = signs.filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` (non-zero), by Sturm's theorem on (-inf, inf).
pub fn count_real_roots(p: &RatPoly) -> usize {
    let seq = sturm_sequence(p);
    let at = |pos: bool| sign_changes(seq.iter().map(|q| q.sign_at_infinity(pos)));
    at(false) - at(true)
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_in(p: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    let seq = sturm_sequence(p);
    let at = |x: &BigRational| {
        sign_changes(seq.iter().map(|q| {
            let v = q.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }))
    };
    at(a) - at(b)
}
