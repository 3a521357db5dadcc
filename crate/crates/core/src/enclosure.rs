//! Certified rational enclosures of the transcendental quantities the
//! degree formulas need (pi, e^5, natural logarithms, square roots).
//!
//! Every enclosure is a closed interval `[lo, hi]` with rational endpoints
//! that provably contains the true value. No floating point is involved.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{exact_sqrt, round_dyadic, Rational};

/// Working precision (in bits) for computed enclosures.
const BITS: u32 = 80;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn exact(v: Rational) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Product of two enclosures of nonnegative quantities.
    pub fn mul_nonneg(&self, other: &Enclosure) -> Enclosure {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Enclosure::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    /// Scales by a nonnegative exact factor.
    pub fn scale_nonneg(&self, c: &Rational) -> Enclosure {
        debug_assert!(!c.is_negative());
        Enclosure::new(&self.lo * c, &self.hi * c)
    }

    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn midpoint_f64(&self) -> f64 {
        crate::rational::to_f64(&((&self.lo + &self.hi) / Rational::from_integer(2.into())))
    }
}

fn dec(num: i64, scale_pow10: u32) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(10u32).pow(scale_pow10))
}

/// `pi` within `10^-15`.
pub fn pi() -> Enclosure {
    Enclosure::new(dec(3_141_592_653_589_793, 15), dec(3_141_592_653_589_794, 15))
}

/// Rational upper bound on `e^5` within `10^-13`.
pub fn e5_upper() -> Rational {
    dec(1_484_131_591_025_767, 13)
}

/// `e^5` within `10^-13`.
pub fn e5() -> Enclosure {
    Enclosure::new(dec(1_484_131_591_025_766, 13), e5_upper())
}

/// `sqrt(q)` for `q >= 0`; exact when `q` is a rational square, otherwise
/// of width at most `2^-64 / den(q)`.
pub fn sqrt(q: &Rational) -> Enclosure {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    if let Some(r) = exact_sqrt(q) {
        return Enclosure::exact(r);
    }
    let k = 64u32;
    let ab = q.numer() * q.denom();
    let s = (ab << (2 * k)).sqrt();
    let den = q.denom() << k;
    Enclosure::new(
        Rational::new(s.clone(), den.clone()),
        Rational::new(s + 1u32, den),
    )
}

/// Enclosure of `atanh(y) = sum y^(2j+1)/(2j+1)` for `0 <= y <= 1/3`.
fn atanh_small(y: &Rational) -> Enclosure {
    debug_assert!(!y.is_negative() && *y <= Rational::new(1.into(), 3.into()));
    if y.is_zero() {
        return Enclosure::exact(Rational::zero());
    }
    let y2 = y * y;
    let eps = Rational::new(BigInt::one(), BigInt::one() << (BITS + 8));
    let mut power = y.clone();
    let mut sum = Rational::zero();
    let mut j: u32 = 0;
    loop {
        sum += &power / Rational::from_integer((2 * j + 1).into());
        power *= &y2;
        j += 1;
        // remaining tail <= y^(2j+1) / ((2j+1)(1 - y^2))
        let tail = &power / (Rational::from_integer((2 * j + 1).into()) * (Rational::one() - &y2));
        if tail < eps {
            return Enclosure::new(
                round_dyadic(&sum, BITS, false),
                round_dyadic(&(sum + tail), BITS, true),
            );
        }
    }
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2() -> Enclosure {
    atanh_small(&Rational::new(1.into(), 3.into())).scale_nonneg(&Rational::from_integer(2.into()))
}

/// Natural logarithm of a rational `x >= 1`. `ln 1` is exactly zero.
pub fn ln(x: &Rational) -> Enclosure {
    assert!(*x >= Rational::one(), "ln enclosure needs x >= 1");
    if x.is_one() {
        return Enclosure::exact(Rational::zero());
    }
    // x = 2^k * m with 1 <= m < 2
    let mut k: u64 = x.numer().bits().saturating_sub(x.denom().bits());
    let mut m = x / Rational::from_integer(BigInt::one() << k);
    while m >= Rational::from_integer(2.into()) {
        m /= Rational::from_integer(2.into());
        k += 1;
    }
    while m < Rational::one() {
        m *= Rational::from_integer(2.into());
        k -= 1;
    }
    let y = (&m - Rational::one()) / (&m + Rational::one());
    let tail = atanh_small(&y).scale_nonneg(&Rational::from_integer(2.into()));
    ln2().scale_nonneg(&Rational::from_integer(k.into())).add(&tail)
}

pub fn ln_u64(n: u64) -> Enclosure {
    ln(&Rational::from_integer(n.into()))
}
