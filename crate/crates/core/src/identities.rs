//! Explicit certificates for the one-variable degree-shift identities and
//! the inclusions cube ⊂ L^{2q}-ball ⊂ scaled cube used by the lifting
//! pipeline.
//!
//! Every constructor returns a [`CertifiedIdentity`]: the certificate plus
//! the polynomial it represents.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certificates::{GeneratorSet, QModCertificate, SosExpression};
use crate::error::IdentityError;
use crate::poly::Polynomial;
use crate::rational::{int, pow, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedIdentity {
    pub certificate: QModCertificate,
    pub target: Polynomial,
}

/// `n`, `q` and a scale `eta` given through `eta^2`, with `eta^(2q) >= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftParams {
    n: usize,
    q: u32,
    eta_sq: Rational,
    eta2q: Rational,
}

impl ShiftParams {
    pub fn new(n: usize, q: u32, eta_sq: Rational) -> Result<Self, IdentityError> {
        if n == 0 {
            return Err(IdentityError::Parameters("n must be at least 1".into()));
        }
        if q == 0 {
            return Err(IdentityError::Parameters("q must be at least 1".into()));
        }
        if !eta_sq.is_positive() {
            return Err(IdentityError::Parameters(format!(
                "eta^2 = {eta_sq} must be positive"
            )));
        }
        let eta2q = pow(&eta_sq, q);
        if eta2q < int(n as i64) {
            return Err(IdentityError::Parameters(format!(
                "eta^(2q) = {eta2q} is below n = {n} (eta^2 = {eta_sq}, q = {q})"
            )));
        }
        Ok(ShiftParams { n, q, eta_sq, eta2q })
    }

    pub fn from_eta(n: usize, q: u32, eta: &Rational) -> Result<Self, IdentityError> {
        if !eta.is_positive() {
            return Err(IdentityError::Parameters(format!("eta = {eta} must be positive")));
        }
        Self::new(n, q, eta * eta)
    }

    /// Uses [`choose_eta`].
    pub fn auto(n: usize, q: u32) -> Result<Self, IdentityError> {
        if n == 0 || q == 0 {
            return Err(IdentityError::Parameters("n and q must be at least 1".into()));
        }
        Self::from_eta(n, q, &choose_eta(n, q))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn eta_sq(&self) -> &Rational {
        &self.eta_sq
    }

    pub fn eta2q(&self) -> &Rational {
        &self.eta2q
    }

    /// `l = 2q - 2`, the degree shift of each box generator.
    pub fn shift(&self) -> u32 {
        2 * self.q - 2
    }
}

/// `eta^2 f_q(x_var / eta)` as a weighted SOS in `nvars` variables
/// (`var` zero-based); `f_q` itself is the case `eta^2 = 1`.
fn scaled_fq(nvars: usize, var: usize, q: u32, eta_sq: &Rational) -> SosExpression {
    let g = &Polynomial::constant(nvars, eta_sq.clone()) - &Polynomial::var_pow(nvars, var, 2);
    let mut s = SosExpression::zero(nvars);
    for i in 1..q {
        let w = ratio((q - i) as i64, q as i64) / pow(eta_sq, i);
        s.push(w, &Polynomial::var_pow(nvars, var, i - 1) * &g)
            .expect("nonnegative weight");
    }
    s
}

/// `f_q = sum_{i=1}^{q-1} (q-i)/q * x^(2(i-1)) (1-x^2)^2`, which expands to
/// `((q-1) - q x^2 + x^(2q)) / q`.
pub fn build_fq(q: u32) -> Result<SosExpression, IdentityError> {
    if q == 0 {
        return Err(IdentityError::Parameters("q must be at least 1".into()));
    }
    Ok(scaled_fq(1, 0, q, &Rational::one()))
}

/// `1 - x^2 = f_q + (1 - x^(2q)) / q`, a certificate of degree `2q` over the
/// single generator `1 - x^(2q)`.
pub fn cert_univariate_shift(q: u32) -> Result<CertifiedIdentity, IdentityError> {
    let sigma0 = build_fq(q)?;
    let sigma1 = SosExpression::constant(1, ratio(1, q as i64))?;
    let gens = GeneratorSet::lnorm_ball(1, q)?;
    Ok(CertifiedIdentity {
        certificate: QModCertificate::new(gens, alloc::vec![sigma0, sigma1], 2 * q)?,
        target: one_minus_x_sq(),
    })
}

fn one_minus_x_sq() -> Polynomial {
    &Polynomial::one(1) - &Polynomial::var_pow(1, 0, 2)
}

fn two_pow(i: u32) -> Rational {
    Rational::from_integer(BigInt::one() << i)
}

/// `1 - x^2 = sum_{i=1}^{m-1} 2^-i (1 - x^(2^i))^2 + 2^-(m-1) (1 - x^(2^m))`,
/// degree `2^m`.
pub fn cert_pow2_recurrence(m: u32) -> Result<CertifiedIdentity, IdentityError> {
    if m == 0 || m > 31 {
        return Err(IdentityError::Parameters(format!("m = {m} must lie in 1..=31")));
    }
    let mut sigma0 = SosExpression::zero(1);
    for i in 1..m {
        let root = &Polynomial::one(1) - &Polynomial::var_pow(1, 0, 1 << i);
        sigma0.push(two_pow(i).recip(), root)?;
    }
    let sigma1 = SosExpression::constant(1, two_pow(m - 1).recip())?;
    let gens = GeneratorSet::lnorm_ball(1, 1 << (m - 1))?;
    Ok(CertifiedIdentity {
        certificate: QModCertificate::new(gens, alloc::vec![sigma0, sigma1], 1 << m)?,
        target: one_minus_x_sq(),
    })
}

/// `eta^2 - x_i^2` in the quadratic module of `n - sum_j x_j^(2q)` at degree
/// `2q` (`i` one-based). With `c = eta^2 / (q eta^(2q))`:
///
/// `eta^2 - x_i^2 = eta^2 f_q(x_i/eta) + c sum_{j != i} x_j^(2q)
///                  + c (eta^(2q) - n) + c (n - sum_j x_j^(2q))`.
pub fn cert_box_in_lnorm(params: &ShiftParams, i: usize) -> Result<CertifiedIdentity, IdentityError> {
    let n = params.n;
    if i == 0 || i > n {
        return Err(IdentityError::Parameters(format!(
            "variable index {i} outside 1..={n}"
        )));
    }
    let q = params.q;
    let c = &params.eta_sq / (int(q as i64) * &params.eta2q);
    let mut sigma0 = scaled_fq(n, i - 1, q, &params.eta_sq);
    for j in (0..n).filter(|&j| j != i - 1) {
        sigma0.push(c.clone(), Polynomial::var_pow(n, j, q))?;
    }
    let slack = &params.eta2q - int(n as i64);
    if !slack.is_zero() {
        sigma0.push(&c * &slack, Polynomial::one(n))?;
    }
    let sigma1 = SosExpression::constant(n, c)?;
    let gens = GeneratorSet::lnorm_ball(n, q)?;
    let target = &Polynomial::constant(n, params.eta_sq.clone()) - &Polynomial::var_pow(n, i - 1, 2);
    Ok(CertifiedIdentity {
        certificate: QModCertificate::new(gens, alloc::vec![sigma0, sigma1], 2 * q)?,
        target,
    })
}

/// `n - sum_i x_i^(2q) = sum_i (1 - x_i^2)(1 + x_i^2 + ... + x_i^(2q-2))` over
/// the unit cube, degree `2q`.
pub fn cert_lnorm_in_cube(n: usize, q: u32) -> Result<CertifiedIdentity, IdentityError> {
    if n == 0 || q == 0 {
        return Err(IdentityError::Parameters("n and q must be at least 1".into()));
    }
    let mut sigma = Vec::with_capacity(n + 1);
    sigma.push(SosExpression::zero(n));
    for i in 0..n {
        let mut s = SosExpression::zero(n);
        for k in 0..q {
            s.push(Rational::one(), Polynomial::var_pow(n, i, k))?;
        }
        sigma.push(s);
    }
    let target = GeneratorSet::lnorm_ball(n, q)?.generators()[0].clone();
    Ok(CertifiedIdentity {
        certificate: QModCertificate::new(GeneratorSet::cube(n), sigma, 2 * q)?,
        target,
    })
}

/// Simplest rational `eta` (smallest denominator, then numerator) with
/// `eta^(2q) >= n` and `eta <= n^(1/(2q)) + 2^-20`.
pub fn choose_eta(n: usize, q: u32) -> Rational {
    assert!(n >= 1 && q >= 1, "choose_eta needs n, q >= 1");
    let n_r = int(n as i64);
    let tol = Rational::new(BigInt::one(), BigInt::one() << 20u32);
    let e = 2 * q;
    let too_small = |x: &Rational| pow(x, e) < n_r;
    let too_large = |x: &Rational| {
        let y = x - &tol;
        y.is_positive() && pow(&y, e) > n_r
    };

    // Stern-Brocot descent with runs of equal moves taken in one batch.
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), BigInt::zero());
    loop {
        let m = Rational::new(&a + &c, &b + &d);
        if too_small(&m) {
            let k = longest_run(|k| too_small(&Rational::new(&a + &c * k, &b + &d * k)));
            a += &c * &k;
            b += &d * &k;
        } else if too_large(&m) {
            let k = longest_run(|k| too_large(&Rational::new(&c + &a * k, &d + &b * k)));
            c += &a * &k;
            d += &b * &k;
        } else {
            return m;
        }
    }
}

/// Largest `k >= 1` with `pred(k)`, given `pred(1)` and `pred` monotone.
fn longest_run(pred: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while pred(&hi) {
        lo = hi.clone();
        hi <<= 1u32;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) >> 1u32;
        if pred(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
