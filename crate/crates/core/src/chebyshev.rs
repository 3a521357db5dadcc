//! Exact Chebyshev polynomials of the first kind and the Markov-type
//! inequalities built on them.

use alloc::format;
use alloc::vec::Vec;

use num_traits::float::Float;
use num_traits::{One, Signed, Zero};

use crate::enclosure;
use crate::error::ChebyshevError;
use crate::poly::Polynomial;
use crate::rational::Rational;

/// Number of sample points used by the sup-norm diagnostics.
pub const SUP_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebyshevPolynomial {
    degree: u32,
    poly: Polynomial,
}

impl ChebyshevPolynomial {
    /// `T_d` via `T_{k+1} = 2x T_k - T_{k-1}`.
    pub fn new(d: u32) -> Self {
        let x = Polynomial::var(1, 0);
        let two_x = x.scale(&Rational::from_integer(2.into()));
        let mut prev = Polynomial::one(1);
        let mut cur = x;
        if d == 0 {
            return ChebyshevPolynomial {
                degree: 0,
                poly: prev,
            };
        }
        for _ in 1..d {
            let next = &(&two_x * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        ChebyshevPolynomial { degree: d, poly: cur }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial {
        self.poly
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.poly.eval(core::slice::from_ref(x)).expect("univariate")
    }

    pub fn eval_float(&self, x: f64) -> f64 {
        self.poly.eval_float(&[x]).expect("univariate")
    }

    /// Exact `k`-th formal derivative.
    pub fn derivative(&self, k: u32) -> Polynomial {
        (0..k).fold(self.poly.clone(), |p, _| p.derivative(1).expect("univariate"))
    }
}

pub fn chebyshev(d: u32) -> ChebyshevPolynomial {
    ChebyshevPolynomial::new(d)
}

/// Exact evaluation of `T_d(x)` by the three-term recurrence, without
/// building the polynomial.
pub fn cheb_value(d: u32, x: &Rational) -> Rational {
    if d == 0 {
        return Rational::one();
    }
    let two_x = x * Rational::from_integer(2.into());
    let mut prev = Rational::one();
    let mut cur = x.clone();
    for _ in 1..d {
        let next = &two_x * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeBoundReport {
    pub d: u32,
    pub k: u32,
    pub x: Rational,
    /// `|T_d^{(k)}(x)|`
    pub derivative: Rational,
    /// `d^{2k} |T_d(x)|`
    pub bound: Rational,
    pub holds: bool,
    pub equality: bool,
}

/// Checks `|T_d^{(k)}(x)| <= d^{2k} |T_d(x)|` exactly for `x >= 1`.
pub fn cheb_derivative_bound_check(
    d: u32,
    k: u32,
    x: &Rational,
) -> Result<DerivativeBoundReport, ChebyshevError> {
    if d < 1 {
        return Err(ChebyshevError::Precondition(format!(
            "degree must be >= 1, got {d}"
        )));
    }
    if *x < Rational::one() {
        return Err(ChebyshevError::Precondition(format!("x must be >= 1, got {x}")));
    }
    let t = chebyshev(d);
    let derivative = t
        .derivative(k)
        .eval(core::slice::from_ref(x))
        .expect("univariate")
        .abs();
    let factor = Rational::from_integer(num_bigint::BigInt::from(d).pow(2 * k));
    let bound = factor * t.eval(x).abs();
    Ok(DerivativeBoundReport {
        d,
        k,
        x: x.clone(),
        holds: derivative <= bound,
        equality: derivative == bound,
        derivative,
        bound,
    })
}

/// Sampled (non-certified) comparison of `sup |p'|` against `d^2 sup |p|`
/// on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSupReport {
    pub degree_bound: u32,
    pub samples: usize,
    pub sup_abs: f64,
    pub sup_abs_derivative: f64,
    /// `sup |p'| / sup |p|`, or 0 when `p` vanishes on the samples.
    pub ratio: f64,
    pub bound_factor: f64,
    pub holds: bool,
    pub certified: bool,
}

/// Chebyshev–Lobatto nodes `cos(j pi / (N-1))`, which include both endpoints.
pub fn lobatto_nodes(count: usize) -> Vec<f64> {
    let pi = core::f64::consts::PI;
    let last = (count - 1) as f64;
    (0..count)
        .map(|j| match j {
            0 => 1.0,
            j if j == count - 1 => -1.0,
            j => Float::cos(j as f64 * pi / last),
        })
        .collect()
}

pub fn markov_sup_check(p: &Polynomial, d: u32) -> Result<MarkovSupReport, ChebyshevError> {
    if p.nvars() != 1 {
        return Err(ChebyshevError::Precondition(format!(
            "expected a univariate polynomial, got {} variables",
            p.nvars()
        )));
    }
    if !p.total_degree().at_most(d) {
        return Err(ChebyshevError::Precondition(format!(
            "deg p = {} exceeds the bound {d}",
            p.total_degree()
        )));
    }
    let dp = p.derivative(1).expect("univariate");
    let mut sup_abs: f64 = 0.0;
    let mut sup_der: f64 = 0.0;
    for x in lobatto_nodes(SUP_SAMPLES) {
        sup_abs = sup_abs.max(p.eval_float(&[x]).expect("univariate").abs());
        sup_der = sup_der.max(dp.eval_float(&[x]).expect("univariate").abs());
    }
    let factor = (d as f64) * (d as f64);
    let holds = sup_der <= factor * sup_abs * (1.0 + 1e-9) + 1e-12;
    Ok(MarkovSupReport {
        degree_bound: d,
        samples: SUP_SAMPLES,
        sup_abs,
        sup_abs_derivative: sup_der,
        ratio: if sup_abs > 0.0 { sup_der / sup_abs } else { 0.0 },
        bound_factor: factor,
        holds,
        certified: false,
    })
}

/// `T_d(1/(1 - delta))` exactly, for `0 < delta < 1`.
pub fn cheb_scaled_value(d: u32, delta: &Rational) -> Result<Rational, ChebyshevError> {
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(ChebyshevError::Precondition(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    let x = (Rational::one() - delta).recip();
    Ok(cheb_value(d, &x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledBoundReport {
    pub d: u32,
    pub delta: Rational,
    pub value: Rational,
    /// Certified lower bound on `e^5` that `value` is compared against.
    pub e5_lower: Rational,
    pub holds: bool,
}

/// Checks `T_d(1/(1-delta)) <= e^5` for `d >= 2`, `delta <= 1/d^2`.
/// The comparison uses a rational lower bound on `e^5`, so a pass is sound.
pub fn cheb_scaled_bound_check(d: u32, delta: &Rational) -> Result<ScaledBoundReport, ChebyshevError> {
    if d < 2 {
        return Err(ChebyshevError::Precondition(format!(
            "degree must be >= 2, got {d}"
        )));
    }
    let limit = Rational::new(1.into(), (d as u64 * d as u64).into());
    if *delta > limit {
        return Err(ChebyshevError::Precondition(format!(
            "delta must be <= 1/d^2 = {limit}"
        )));
    }
    let value = cheb_scaled_value(d, delta)?;
    let e5_lower = enclosure::e5().lo;
    Ok(ScaledBoundReport {
        d,
        delta: delta.clone(),
        holds: value <= e5_lower,
        value,
        e5_lower,
    })
}

/// `true` when every monomial of `p` has degree congruent to `d` mod 2.
pub fn has_parity(p: &Polynomial, d: u32) -> bool {
    p.terms().all(|(m, _)| m.total_degree() % 2 == d % 2)
}

pub fn leading_coefficient(p: &Polynomial) -> Rational {
    p.leading_term().map_or_else(Rational::zero, |(_, c)| c.clone())
}
