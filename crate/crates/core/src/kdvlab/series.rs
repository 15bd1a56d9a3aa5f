//! Truncated Taylor series in one variable, enough to differentiate `f_L` exactly to
//! a fixed order.

use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients `c_i` of `sum c_i d^i`, truncated after `len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series(pub Vec<f64>);

impl Series {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Series(v)
    }

    /// The identity map expanded about `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut s = Series::constant(x0, order);
        if order > 0 {
            s.0[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn scale(&self, a: f64) -> Self {
        Series(self.0.iter().map(|c| a * c).collect())
    }

    pub fn div(&self, o: &Series) -> Self {
        let n = self.0.len().min(o.0.len());
        let mut q = vec![0.0; n];
        for i in 0..n {
            let acc: f64 = (0..i).map(|j| q[j] * o.0[i - j]).sum();
            q[i] = (self.0[i] - acc) / o.0[0];
        }
        Series(q)
    }

    /// Principal square root; needs a positive constant term.
    pub fn sqrt(&self) -> Self {
        let n = self.0.len();
        let mut r = vec![0.0; n];
        r[0] = self.0[0].sqrt();
        for i in 1..n {
            let acc: f64 = (1..i).map(|j| r[j] * r[i - j]).sum();
            r[i] = (self.0[i] - acc) / (2.0 * r[0]);
        }
        Series(r)
    }

    /// Drops the top coefficient.
    pub fn derivative(&self) -> Self {
        if self.0.len() == 1 {
            return Series(vec![0.0]);
        }
        Series(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative with constant term `c0`; one order longer than `self`.
    pub fn integrate(&self, c0: f64) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(c0);
        v.extend(self.0.iter().enumerate().map(|(i, c)| c / (i as f64 + 1.0)));
        Series(v)
    }

    /// `f^{(i)}(x0) = i! c_i`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.0
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i > 0 {
                    fact *= i as f64;
                }
                fact * c
            })
            .collect()
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        let n = self.0.len().min(o.0.len());
        Series((0..n).map(|i| self.0[i] + o.0[i]).collect())
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        let n = self.0.len().min(o.0.len());
        Series((0..n).map(|i| self.0[i] - o.0[i]).collect())
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.0.len().min(o.0.len());
        Series(
            (0..n)
                .map(|i| (0..=i).map(|j| self.0[j] * o.0[i - j]).sum())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_and_division_invert_multiplication() {
        let a = Series(vec![2.0, -0.5, 0.25, 1.0, -3.0]);
        let r = a.sqrt();
        let back = &r * &r;
        for (x, y) in back.0.iter().zip(&a.0) {
            assert!((x - y).abs() < 1e-14);
        }
        let b = Series(vec![1.5, 2.0, 0.0, -1.0, 0.5]);
        let q = a.div(&b);
        for (x, y) in (&q * &b).0.iter().zip(&a.0) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn exp_via_integration() {
        // e^{x} about 0: repeatedly integrate
        let mut e = Series(vec![1.0]);
        for _ in 0..8 {
            e = e.integrate(1.0);
        }
        let d = e.derivatives();
        assert!(d.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }
}
