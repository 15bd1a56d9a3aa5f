//! Differential polynomials in `s`, the times `t_j` and the jet `q, q_s, q_ss, ...`
//! with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::DiffPolyError;

/// A generator of the differential polynomial ring.
///
/// `Q(j)` is the j-th s-derivative of `q`; `T(j)` is the time `t_j` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Q(u32),
    S,
    T(u32),
}

impl Var {
    /// Position in the canonical variable order: `q^(D) > ... > q > s > t_1 > t_2 > ...`.
    fn rank(self) -> (u8, i64) {
        match self {
            Var::Q(j) => (0, -(j as i64)),
            Var::S => (1, 0),
            Var::T(j) => (2, j as i64),
        }
    }

    /// Weight under the grading `weight(q^(j)) = j + 2`, `s` and `t_j` weightless.
    pub fn weight(self) -> u32 {
        match self {
            Var::Q(j) => j + 2,
            Var::S | Var::T(_) => 0,
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::Q(0) => "q".to_string(),
            Var::Q(j) => format!("q{j}"),
            Var::S => "s".to_string(),
            Var::T(j) => format!("t{j}"),
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "q" => Some(Var::Q(0)),
            "s" => Some(Var::S),
            _ => {
                let (head, idx) = name.split_at(1);
                let idx: u32 = idx.parse().ok()?;
                match head {
                    "q" if idx > 0 => Some(Var::Q(idx)),
                    "t" if idx > 0 => Some(Var::T(idx)),
                    _ => None,
                }
            }
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

/// A power product of generators. Factors are kept sorted by [`Var`] order with
/// strictly positive exponents, so structural equality is monomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs, merging repeats
    /// and dropping zero exponents.
    pub fn from_factors<I: IntoIterator<Item = (Var, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_default() += e;
        }
        Monomial {
            factors: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|&(v, e)| v.weight() * e).sum()
    }

    /// Highest derivative order of `q` present, if any.
    pub fn max_derivative_order(&self) -> Option<u32> {
        self.factors
            .iter()
            .filter_map(|&(v, _)| match v {
                Var::Q(j) => Some(j),
                _ => None,
            })
            .max()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Divides out one power of `v`, returning the old exponent. `None` if `v` is absent.
    pub fn lower(&self, v: Var) -> Option<(u32, Monomial)> {
        let pos = self.factors.iter().position(|(w, _)| *w == v)?;
        let e = self.factors[pos].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some((e, Monomial { factors }))
    }

    /// Lexicographic comparison in the canonical variable order.
    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

/// Graded lexicographic order: total degree first, then lex on `q^(D) > ... > q > s > t_j`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

/// Sparse differential polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        DiffPoly::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        DiffPoly::constant(int(c))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: Var) -> Self {
        DiffPoly::term(BigRational::one(), Monomial::var(v))
    }

    /// `q^(j)`, the j-th s-derivative of q.
    pub fn q(j: u32) -> Self {
        DiffPoly::var(Var::Q(j))
    }

    pub fn s() -> Self {
        DiffPoly::var(Var::S)
    }

    /// The time `t_j`, `j >= 1`.
    pub fn t(j: u32) -> Self {
        assert!(j >= 1, "times are indexed from 1");
        DiffPoly::var(Var::T(j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn max_derivative_order(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(Monomial::max_derivative_order)
            .max()
    }

    pub fn max_time_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .filter_map(|&(v, _)| match v {
                Var::T(j) => Some(j),
                _ => None,
            })
            .max()
    }

    /// Variables that occur, in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// `Some(w)` when every term has q-weight `w` (the zero polynomial is homogeneous of any weight).
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(Monomial::weight);
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self, weight: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == weight)
    }

    /// Total s-derivative: `d/ds p = dp/ds + sum_j q^(j+1) dp/dq^(j)`.
    pub fn total_derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for &(v, _) in m.factors() {
                let (e, rest) = m.lower(v).expect("factor present");
                let c = c * int(e as i64);
                match v {
                    Var::S => out.add_term(rest, c),
                    Var::Q(j) => out.add_term(rest.mul(&Monomial::var(Var::Q(j + 1))), c),
                    Var::T(_) => {}
                }
            }
        }
        out
    }

    /// Formal partial derivative with respect to one generator.
    pub fn partial(&self, v: Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(v) {
                out.add_term(rest, c * int(e as i64));
            }
        }
        out
    }

    /// Replaces a generator by a polynomial.
    pub fn substitute(&self, v: Var, value: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = Monomial::from_factors(m.factors().iter().copied().filter(|&(w, _)| w != v));
            let mut term = DiffPoly::term(c.clone(), rest);
            for _ in 0..e {
                term = &term * value;
            }
            out = &out + &term;
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, point: &Point<BigRational>) -> Result<BigRational, DiffPolyError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.factors() {
                let x = point.get(v)?;
                term *= num_traits::pow(x.clone(), e as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact substitution followed by a single conversion to `f64`.
    pub fn evaluate(&self, point: &Point<BigRational>) -> Result<f64, DiffPolyError> {
        self.evaluate_exact(point).map(|r| rational_to_f64(&r))
    }

    /// Floating evaluation at a floating point jet.
    pub fn evaluate_f64(&self, point: &Point<f64>) -> Result<f64, DiffPolyError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for &(v, e) in m.factors() {
                term *= point.get(v)?.powi(e as i32);
            }
            acc += term;
        }
        Ok(acc)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator beyond f64 range: scale both down together
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// An assignment of values to `s`, the times and the q-jet.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    pub s: Option<T>,
    pub t: Vec<T>,
    pub jet: Vec<T>,
}

impl<T> Point<T> {
    pub fn new(s: Option<T>, t: Vec<T>, jet: Vec<T>) -> Self {
        Point { s, t, jet }
    }

    fn get(&self, v: Var) -> Result<&T, DiffPolyError> {
        let found = match v {
            Var::S => self.s.as_ref(),
            Var::T(j) => self.t.get(j as usize - 1),
            Var::Q(j) => self.jet.get(j as usize),
        };
        found.ok_or(DiffPolyError::MissingAssignment(v.name()))
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({abs})*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}
