//! Floating-point evaluation of differential polynomials at fixed times.

use crate::diffpoly::{rational_to_f64, DiffPoly, Var};

/// A differential polynomial with its times already substituted, ready to be
/// evaluated at `(s, [q, q', q'', ...])`.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<Term>,
}

#[derive(Clone, Debug)]
struct Term {
    coeff: f64,
    s_exp: i32,
    q: Vec<(usize, i32)>,
}

impl CompiledPoly {
    pub fn new(p: &DiffPoly, t: &[f64]) -> Self {
        let mut terms = Vec::new();
        for (mono, c) in p.terms() {
            let mut coeff = rational_to_f64(c);
            let mut s_exp = 0;
            let mut q = Vec::new();
            for &(v, e) in mono.factors() {
                match v {
                    Var::Q(j) => q.push((j as usize, e as i32)),
                    Var::S => s_exp = e as i32,
                    Var::T(j) => {
                        coeff *= t.get(j as usize - 1).copied().unwrap_or(0.0).powi(e as i32)
                    }
                }
            }
            if coeff != 0.0 {
                terms.push(Term { coeff, s_exp, q });
            }
        }
        CompiledPoly { terms }
    }

    pub fn eval(&self, s: f64, jet: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.q.iter().fold(t.coeff * s.powi(t.s_exp), |acc, &(j, e)| {
                    acc * jet[j].powi(e)
                })
            })
            .sum()
    }

    /// Coefficients `a_e` of the polynomial in `q` obtained by setting `s` and every
    /// derivative of `q` to zero.
    pub fn derivative_free_part(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for t in &self.terms {
            if t.s_exp != 0 || t.q.iter().any(|&(j, _)| j > 0) {
                continue;
            }
            let e = t.q.first().map_or(0, |&(_, e)| e as usize);
            if out.len() <= e {
                out.resize(e + 1, 0.0);
            }
            out[e] += t.coeff;
        }
        out
    }
}
