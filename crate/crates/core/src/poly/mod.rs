//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic, so equality, hashing of printed forms and iteration order
//! are all canonical. Zero coefficients are never stored.

mod format;
mod parse;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::error::PolyError;
use crate::rational::Rational;

pub use parse::parse;

/// Total degree of a polynomial. The zero polynomial has degree
/// [`Degree::NegInfinity`], which compares below every finite degree and
/// absorbs addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    /// `self <= bound`; the zero marker satisfies every bound.
    pub fn at_most(self, bound: u32) -> bool {
        self <= Degree::Finite(bound)
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense exponent vector `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// `x_var^exp`, with `var` zero-based.
    pub fn var_pow(nvars: usize, var: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// graded lex: total degree first, then x1 > x2 > ... lexicographically
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// The variable `x_{var+1}` (zero-based index).
    pub fn var(nvars: usize, var: usize) -> Self {
        Self::var_pow(nvars, var, 1)
    }

    pub fn var_pow(nvars: usize, var: usize, exp: u32) -> Self {
        Self::monomial(Monomial::var_pow(nvars, var, exp), Rational::one())
    }

    /// Builds a polynomial from arbitrary `(monomial, coefficient)` pairs,
    /// merging duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc = Accumulator::new(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::VariableCountMismatch {
                    left: nvars,
                    right: m.nvars(),
                });
            }
            acc.add_term(m, c);
        }
        Ok(acc.finish())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |m| Degree::Finite(m.total_degree()))
    }

    /// Degree in a single variable (zero-based), `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Leading term under graded lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_same(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same(other)?;
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut out, m.clone(), c.clone());
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms: out,
        })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same(other)?;
        let mut acc = Accumulator::new(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(acc.finish())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn square(&self) -> Polynomial {
        self * self
    }

    /// Replaces `x_var` by `c * x_var` (one-based `var`).
    pub fn substitute_scale(&self, var: usize, c: &Rational) -> Result<Polynomial, PolyError> {
        let idx = self.index(var)?;
        if c.is_zero() {
            return Err(PolyError::ZeroScale);
        }
        let mut powers: Vec<Rational> = vec![Rational::one()];
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| {
                let e = m.0[idx] as usize;
                while powers.len() <= e {
                    let next = powers.last().unwrap() * c;
                    powers.push(next);
                }
                (m.clone(), v * &powers[e])
            })
            .collect();
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    /// Sets every listed variable (one-based) to zero and drops it, keeping
    /// the surviving variables in their original order.
    pub fn restrict_to_zero(&self, vars: &[usize]) -> Result<Polynomial, PolyError> {
        let mut dropped = vec![false; self.nvars];
        for &v in vars {
            dropped[self.index(v)?] = true;
        }
        let keep: Vec<usize> = (0..self.nvars).filter(|&i| !dropped[i]).collect();
        let mut acc = Accumulator::new(keep.len());
        for (m, c) in &self.terms {
            if (0..self.nvars).any(|i| dropped[i] && m.0[i] > 0) {
                continue;
            }
            acc.add_term(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        Ok(acc.finish())
    }

    /// Re-embeds into `nvars` variables, mapping variable `i` to
    /// `positions[i]` (zero-based).
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Result<Polynomial, PolyError> {
        if positions.len() != self.nvars {
            return Err(PolyError::VariableCountMismatch {
                left: self.nvars,
                right: positions.len(),
            });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= nvars) {
            return Err(PolyError::VariableOutOfRange {
                index: bad + 1,
                nvars,
            });
        }
        let mut acc = Accumulator::new(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &p) in positions.iter().enumerate() {
                e[p] += m.0[i];
            }
            acc.add_term(Monomial(e), c.clone());
        }
        Ok(acc.finish())
    }

    /// Substitutes `images[i]` for `x_{i+1}`. All images must share one
    /// variable count, which becomes the variable count of the result.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let target_nvars = images.first().map_or(0, |p| p.nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target_nvars) {
            return Err(PolyError::VariableCountMismatch {
                left: target_nvars,
                right: bad.nvars,
            });
        }
        let mut cache: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::one(target_nvars)])
            .collect();
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                if e > 0 {
                    term = &term * &cache[i][e];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Formal partial derivative in `x_var` (one-based).
    pub fn derivative(&self, var: usize) -> Result<Polynomial, PolyError> {
        let idx = self.index(var)?;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[idx];
            (e > 0).then(|| {
                let mut n = m.clone();
                n.0[idx] -= 1;
                (n, c * Rational::from_integer(e.into()))
            })
        });
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|_| vec![Rational::one()]).collect();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                v *= &powers[i][e];
            }
            total += v;
        }
        Ok(total)
    }

    /// Floating-point evaluation. Not certified: use [`Polynomial::eval`]
    /// wherever a result feeds a certificate.
    pub fn eval_float(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let coeff = c.to_f64().unwrap_or(f64::NAN);
                m.0.iter()
                    .zip(point)
                    .fold(coeff, |acc, (&e, &x)| acc * powi(x, e))
            })
            .sum())
    }

    fn index(&self, var: usize) -> Result<usize, PolyError> {
        if var == 0 || var > self.nvars {
            Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            })
        } else {
            Ok(var - 1)
        }
    }
}

fn powi(x: f64, e: u32) -> f64 {
    let mut out = 1.0;
    for _ in 0..e {
        out *= x;
    }
    out
}

fn add_into(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    use alloc::collections::btree_map::Entry;
    match map.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Collects terms before canonicalising them into a [`Polynomial`].
#[derive(Debug, Clone)]
pub struct Accumulator {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Accumulator {
    pub fn new(nvars: usize) -> Self {
        Accumulator {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        add_into(&mut self.terms, m, c);
    }

    /// Adds `weight * p`.
    pub fn add_scaled(&mut self, p: &Polynomial, weight: &Rational) {
        debug_assert_eq!(p.nvars, self.nvars);
        for (m, c) in &p.terms {
            add_into(&mut self.terms, m.clone(), c * weight);
        }
    }

    pub fn add_poly(&mut self, p: &Polynomial) {
        debug_assert_eq!(p.nvars, self.nvars);
        for (m, c) in &p.terms {
            add_into(&mut self.terms, m.clone(), c.clone());
        }
    }

    pub fn finish(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms,
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            /// Panics when the variable counts differ; use the `checked_`
            /// method for a recoverable error.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomial variable counts differ")
            }
        }

        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}
