use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::CertificateError;
use crate::poly::{Accumulator, Degree, Polynomial};
use crate::rational::Rational;

/// One summand `weight * poly^2` of a weighted sum of squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSquare {
    pub weight: Rational,
    pub poly: Polynomial,
}

/// A manifestly nonnegative polynomial `sum_j w_j p_j^2` with `w_j >= 0`.
///
/// Only the square roots and weights are stored; [`SosExpression::expand`]
/// produces the polynomial itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosExpression {
    nvars: usize,
    terms: Vec<WeightedSquare>,
}

impl SosExpression {
    pub fn zero(nvars: usize) -> Self {
        SosExpression {
            nvars,
            terms: Vec::new(),
        }
    }

    /// `c * 1^2` for a nonnegative constant `c`.
    pub fn constant(nvars: usize, c: Rational) -> Result<Self, CertificateError> {
        let mut s = Self::zero(nvars);
        s.push(c, Polynomial::one(nvars))?;
        Ok(s)
    }

    pub fn square(p: Polynomial) -> Self {
        SosExpression {
            nvars: p.nvars(),
            terms: alloc::vec![WeightedSquare {
                weight: Rational::from_integer(1.into()),
                poly: p,
            }],
        }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, CertificateError>
    where
        I: IntoIterator<Item = (Rational, Polynomial)>,
    {
        let mut s = Self::zero(nvars);
        for (w, p) in terms {
            s.push(w, p)?;
        }
        Ok(s)
    }

    /// Appends `weight * poly^2`; rejects negative weights and foreign
    /// variable counts.
    pub fn push(&mut self, weight: Rational, poly: Polynomial) -> Result<(), CertificateError> {
        if weight.is_negative() {
            return Err(CertificateError::NegativeWeight(weight.to_string()));
        }
        if poly.nvars() != self.nvars {
            return Err(crate::error::PolyError::VariableCountMismatch {
                left: self.nvars,
                right: poly.nvars(),
            }
            .into());
        }
        self.terms.push(WeightedSquare { weight, poly });
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[WeightedSquare] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn live(&self) -> impl Iterator<Item = &WeightedSquare> + '_ {
        self.terms
            .iter()
            .filter(|t| !t.weight.is_zero() && !t.poly.is_zero())
    }

    /// `sum_j w_j p_j^2`; the empty expression expands to zero.
    pub fn expand(&self) -> Polynomial {
        let mut acc = Accumulator::new(self.nvars);
        for t in self.live() {
            acc.add_scaled(&t.poly.square(), &t.weight);
        }
        acc.finish()
    }

    /// Degree of the expansion, `2 max deg p_j` over live summands. Leading
    /// forms of squares with positive weights cannot cancel, so this is exact.
    pub fn degree(&self) -> Degree {
        self.live()
            .map(|t| t.poly.total_degree())
            .max()
            .map_or(Degree::NegInfinity, |d| d + d)
    }

    /// `(sum w_a p_a^2)(sum v_b q_b^2) = sum w_a v_b (p_a q_b)^2`.
    pub fn mul(&self, other: &SosExpression) -> SosExpression {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in self.live() {
            for b in other.live() {
                terms.push(WeightedSquare {
                    weight: &a.weight * &b.weight,
                    poly: &a.poly * &b.poly,
                });
            }
        }
        SosExpression {
            nvars: self.nvars,
            terms,
        }
    }

    /// Multiplies by `p^2`, absorbing `p` into every square root.
    pub fn mul_square(&self, p: &Polynomial) -> SosExpression {
        SosExpression {
            nvars: self.nvars,
            terms: self
                .live()
                .map(|t| WeightedSquare {
                    weight: t.weight.clone(),
                    poly: &t.poly * p,
                })
                .collect(),
        }
    }

    /// Multiplies by a nonnegative scalar.
    pub fn scale(&self, c: &Rational) -> Result<SosExpression, CertificateError> {
        if c.is_negative() {
            return Err(CertificateError::NegativeWeight(c.to_string()));
        }
        Ok(SosExpression {
            nvars: self.nvars,
            terms: self
                .live()
                .map(|t| WeightedSquare {
                    weight: &t.weight * c,
                    poly: t.poly.clone(),
                })
                .collect(),
        })
    }

    pub fn extend(&mut self, other: &SosExpression) {
        debug_assert_eq!(self.nvars, other.nvars);
        self.terms.extend(other.terms.iter().cloned());
    }

    /// Canonical form: each square root rescaled to leading coefficient 1
    /// (weight absorbs `lc^2`), proportional squares merged, zero summands
    /// dropped. The expansion is unchanged.
    pub fn merged(&self) -> SosExpression {
        let mut by_root: BTreeMap<Polynomial, Rational> = BTreeMap::new();
        for t in self.live() {
            let lc = t.poly.leading_term().map(|(_, c)| c.clone()).expect("live");
            let root = t.poly.scale(&lc.recip());
            let w = &t.weight * &lc * &lc;
            *by_root.entry(root).or_insert_with(Rational::zero) += w;
        }
        SosExpression {
            nvars: self.nvars,
            terms: by_root
                .into_iter()
                .map(|(poly, weight)| WeightedSquare { weight, poly })
                .collect(),
        }
    }

    pub fn restrict_to_zero(&self, vars: &[usize]) -> Result<SosExpression, CertificateError> {
        let nvars = self.nvars - vars.len();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(WeightedSquare {
                    weight: t.weight.clone(),
                    poly: t.poly.restrict_to_zero(vars)?,
                })
            })
            .collect::<Result<Vec<_>, CertificateError>>()?;
        Ok(SosExpression { nvars, terms })
    }
}
