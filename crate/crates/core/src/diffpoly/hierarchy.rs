//! Lenard–Magri recursion, the Painlevé I hierarchy and the KdV flows.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::{int, rat, DiffPoly, Monomial, Var};
use super::DiffPolyError;

/// `(1/4) D^3 p - 2 q D p - q_s p`, with `D` the total s-derivative.
pub fn apply_lenard_operator(p: &DiffPoly) -> DiffPoly {
    let d1 = p.total_derivative();
    let d3 = d1.total_derivative().total_derivative();
    let quarter = DiffPoly::constant(rat(1, 4));
    let two_q = &DiffPoly::from_int(2) * &DiffPoly::q(0);
    &(&(&quarter * &d3) - &(&two_q * &d1)) - &(&DiffPoly::q(1) * p)
}

/// All q-monomials of the given weight (each `q^(j)` weighs `j + 2`).
pub(crate) fn q_monomials_of_weight(weight: u32) -> Vec<Monomial> {
    fn rec(rest: u32, max_order: u32, acc: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
        if rest == 0 {
            out.push(Monomial::from_factors(acc.iter().copied()));
            return;
        }
        for j in (0..=max_order.min(rest.saturating_sub(2))).rev() {
            if j + 2 > rest {
                continue;
            }
            acc.push((Var::Q(j), 1));
            rec(rest - (j + 2), j, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if weight == 0 {
        return vec![Monomial::one()];
    }
    rec(weight, weight, &mut Vec::new(), &mut out);
    out
}

fn split_q_part(m: &Monomial) -> (Monomial, Monomial) {
    let (q, rest): (Vec<_>, Vec<_>) = m
        .factors()
        .iter()
        .copied()
        .partition(|(v, _)| matches!(v, Var::Q(_)));
    (Monomial::from_factors(q), Monomial::from_factors(rest))
}

/// Finds `P` with `D P = p` and no term free of both `s` and `q`.
///
/// Candidates are, for each term `N * M` of `p` (`M` its q-part of weight `w`, `N` the
/// `s, t` part), every `N * M'` with `M'` of q-weight `w - 1`, plus `s * N * M`.
/// The coefficients follow from an exact linear solve.
pub fn integrate_total_derivative(p: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
    if p.is_zero() {
        return Ok(DiffPoly::zero());
    }
    let mut candidates: Vec<Monomial> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |m: Monomial, cands: &mut Vec<Monomial>| {
        let (q, rest) = split_q_part(&m);
        let pure_time = q.is_one() && rest.exponent(Var::S) == 0;
        if !pure_time && seen.insert(m.clone()) {
            cands.push(m);
        }
    };
    for (m, _) in p.terms() {
        let (q, rest) = split_q_part(m);
        let w = q.weight();
        if w >= 1 {
            for mq in q_monomials_of_weight(w - 1) {
                push(rest.mul(&mq), &mut candidates);
            }
        }
        push(m.mul(&Monomial::var(Var::S)), &mut candidates);
    }

    let images: Vec<DiffPoly> = candidates
        .iter()
        .map(|c| DiffPoly::term(BigRational::one(), c.clone()).total_derivative())
        .collect();

    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for img in images.iter().chain(std::iter::once(p)) {
        for (m, _) in img.terms() {
            let next = row_index.len();
            row_index.entry(m.clone()).or_insert(next);
        }
    }
    let nrows = row_index.len();
    let ncols = candidates.len();
    let mut a = vec![vec![BigRational::zero(); ncols + 1]; nrows];
    for (col, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            a[row_index[m]][col] = c.clone();
        }
    }
    for (m, c) in p.terms() {
        a[row_index[m]][ncols] = c.clone();
    }

    let solution = solve_exact(a, ncols).ok_or(DiffPolyError::NotATotalDerivative)?;
    let mut out = DiffPoly::zero();
    for (m, c) in candidates.into_iter().zip(solution) {
        out.add_term(m, c);
    }
    debug_assert_eq!(&out.total_derivative(), p);
    Ok(out)
}

/// Gauss–Jordan elimination on an augmented matrix. Returns `None` for an
/// inconsistent system; free unknowns are set to zero.
pub(crate) fn solve_exact(mut a: Vec<Vec<BigRational>>, ncols: usize) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for v in a[row].iter_mut().skip(col) {
            *v *= &inv;
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for c in col..=ncols {
                if !pivot_row[c].is_zero() {
                    other[c] -= &f * &pivot_row[c];
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][ncols].clone();
    }
    Some(x)
}

/// `[L_0, ..., L_{k_max}]` with `L_0 = -4q`.
pub fn lenard_sequence(k_max: usize) -> Result<Vec<DiffPoly>, DiffPolyError> {
    let mut seq = vec![&DiffPoly::from_int(-4) * &DiffPoly::q(0)];
    for k in 0..k_max {
        let next = integrate_total_derivative(&apply_lenard_operator(&seq[k]))?;
        seq.push(next);
    }
    Ok(seq)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EquationOptions {
    /// Include the `t_j L_{j-1}` terms.
    pub with_times: bool,
    /// Permit odd `m`, where no real pole-free solutions exist.
    pub allow_odd: bool,
}

impl EquationOptions {
    pub fn with_times() -> Self {
        EquationOptions {
            with_times: true,
            allow_odd: false,
        }
    }

    pub fn allow_odd(mut self) -> Self {
        self.allow_odd = true;
        self
    }
}

/// The m-th member `s + L_m + sum_{j=1}^{m-1} t_j L_{j-1} = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HierarchyEquation {
    pub m: u32,
    #[serde(serialize_with = "super::json::serialize_poly")]
    pub canonical: DiffPoly,
    /// `canonical * 4^(m-1)` (factor 1 for `m = 0`), the normalisation of the
    /// classical displays where `q^(2m)` appears with coefficient `-1`.
    #[serde(serialize_with = "super::json::serialize_poly")]
    pub paper_normalized: DiffPoly,
    #[serde(serialize_with = "super::json::serialize_polys")]
    pub lenard_terms: Vec<DiffPoly>,
}

pub fn normalization_factor(m: u32) -> BigRational {
    if m == 0 {
        BigRational::one()
    } else {
        int(4).pow(m as i32 - 1)
    }
}

pub fn generate_equation(
    m: u32,
    opts: EquationOptions,
) -> Result<HierarchyEquation, DiffPolyError> {
    if m % 2 == 1 && !opts.allow_odd {
        return Err(DiffPolyError::OddOrderRequested(m));
    }
    let lenard_terms = lenard_sequence(m as usize)?;
    let mut canonical = &DiffPoly::s() + &lenard_terms[m as usize];
    if opts.with_times {
        for j in 1..m {
            canonical = &canonical + &(&DiffPoly::t(j) * &lenard_terms[j as usize - 1]);
        }
    }
    let paper_normalized = canonical.scale(&normalization_factor(m));
    Ok(HierarchyEquation {
        m,
        canonical,
        paper_normalized,
        lenard_terms,
    })
}

/// `q_{t_k} = rhs` with `rhs = -(1/(2k+1)) D L_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowEquation {
    pub k: u32,
    #[serde(serialize_with = "super::json::serialize_poly")]
    pub rhs: DiffPoly,
}

pub fn generate_kdv_flow(k: u32) -> Result<FlowEquation, DiffPolyError> {
    if k == 0 {
        return Err(DiffPolyError::InvalidOrder(
            "KdV flows are indexed from k = 1".into(),
        ));
    }
    let l = lenard_sequence(k as usize)?;
    let rhs = l[k as usize]
        .total_derivative()
        .scale(&-rat(1, 2 * k as i64 + 1));
    Ok(FlowEquation { k, rhs })
}
