//! Quadratic-module and preordering certificates and their exact verifier.
//!
//! A [`QModCertificate`] claims `f = sigma_0 + sum_i sigma_i g_i` with
//! `deg(sigma_i g_i) <= r`; a [`PreorderCertificate`] claims
//! `f = sum_I sigma_I g_I` with `deg(sigma_I g_I) <= r`. Verification
//! expands everything over the rationals and compares coefficients.

mod generators;
mod sos;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use generators::{GeneratorLabel, GeneratorSet, Subset};
pub use sos::{SosExpression, WeightedSquare};

use crate::error::{CertificateError, PolyError};
use crate::poly::{Accumulator, Degree, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QModCertificate {
    gens: GeneratorSet,
    sigma: Vec<SosExpression>,
    r: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreorderCertificate {
    gens: GeneratorSet,
    sigma: BTreeMap<Subset, SosExpression>,
    r: u32,
}

/// Degree accounting for one `sigma_i g_i` (or `sigma_I g_I`) term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermReport {
    /// `"0"` / `"1"`, ... for quadratic modules, subset keys such as `""`
    /// or `"1,2"` for preorderings.
    pub index: String,
    pub sigma_degree: Degree,
    pub generator_degree: Degree,
    pub degree: Degree,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    pub identity_holds: bool,
    pub degrees_ok: bool,
    pub claimed_r: u32,
    /// `target - expansion`; zero exactly when the identity holds.
    pub residual: Polynomial,
    pub terms: Vec<TermReport>,
    pub max_degree: Degree,
}

fn check_nvars(s: &SosExpression, n: usize) -> Result<(), CertificateError> {
    if s.nvars() != n {
        return Err(PolyError::VariableCountMismatch {
            left: n,
            right: s.nvars(),
        }
        .into());
    }
    Ok(())
}

impl QModCertificate {
    /// `sigma` must hold `m + 1` entries, `sigma[0]` pairing with `g_0 = 1`.
    pub fn new(gens: GeneratorSet, sigma: Vec<SosExpression>, r: u32) -> Result<Self, CertificateError> {
        if sigma.len() != gens.len() + 1 {
            return Err(CertificateError::MultiplierCount {
                expected: gens.len() + 1,
                got: sigma.len(),
            });
        }
        for s in &sigma {
            check_nvars(s, gens.nvars())?;
        }
        Ok(QModCertificate { gens, sigma, r })
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn sigma(&self) -> &[SosExpression] {
        &self.sigma
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn nvars(&self) -> usize {
        self.gens.nvars()
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    pub fn into_parts(self) -> (GeneratorSet, Vec<SosExpression>, u32) {
        (self.gens, self.sigma, self.r)
    }

    /// `sigma_0 + sum_i sigma_i g_i`.
    pub fn expand(&self) -> Polynomial {
        let parts = crate::par_map(&self.indexed(), |(i, s)| {
            &s.expand() * &self.gens.generator(*i).expect("index in range")
        });
        sum(self.nvars(), &parts)
    }

    /// Smallest `r` the degree constraints allow.
    pub fn exact_degree(&self) -> Degree {
        self.indexed()
            .iter()
            .map(|(i, s)| s.degree() + self.gens.generator(*i).expect("index in range").total_degree())
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    fn indexed(&self) -> Vec<(usize, &SosExpression)> {
        self.sigma.iter().enumerate().collect()
    }

    /// The same identity viewed as a preordering certificate over
    /// singleton subsets.
    pub fn to_preorder(&self) -> PreorderCertificate {
        let sigma = self
            .sigma
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let key = if i == 0 {
                    Subset::empty()
                } else {
                    Subset::singleton(i)
                };
                (key, s.clone())
            })
            .collect();
        PreorderCertificate {
            gens: self.gens.clone(),
            sigma,
            r: self.r,
        }
    }
}

impl PreorderCertificate {
    pub fn new(
        gens: GeneratorSet,
        sigma: BTreeMap<Subset, SosExpression>,
        r: u32,
    ) -> Result<Self, CertificateError> {
        for (subset, s) in &sigma {
            check_nvars(s, gens.nvars())?;
            if let Some(&i) = subset.indices().iter().find(|&&i| i == 0 || i > gens.len()) {
                return Err(CertificateError::SubsetIndex {
                    index: i,
                    m: gens.len(),
                });
            }
        }
        Ok(PreorderCertificate { gens, sigma, r })
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn sigma(&self) -> &BTreeMap<Subset, SosExpression> {
        &self.sigma
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn nvars(&self) -> usize {
        self.gens.nvars()
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    pub fn into_parts(self) -> (GeneratorSet, BTreeMap<Subset, SosExpression>, u32) {
        (self.gens, self.sigma, self.r)
    }

    pub fn expand(&self) -> Polynomial {
        let items: Vec<_> = self.sigma.iter().collect();
        let parts = crate::par_map(&items, |(subset, s)| {
            &s.expand() * &self.gens.product(subset).expect("validated subset")
        });
        sum(self.nvars(), &parts)
    }

    pub fn exact_degree(&self) -> Degree {
        self.sigma
            .iter()
            .map(|(subset, s)| {
                s.degree()
                    + self
                        .gens
                        .product(subset)
                        .expect("validated subset")
                        .total_degree()
            })
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// Converts back to a quadratic-module certificate when only the empty
    /// subset and singletons carry multipliers.
    pub fn to_qmod(&self) -> Option<QModCertificate> {
        let mut sigma = alloc::vec![SosExpression::zero(self.nvars()); self.gens.len() + 1];
        for (subset, s) in &self.sigma {
            match subset.indices() {
                [] => sigma[0].extend(s),
                [i] => sigma[*i].extend(s),
                _ if s.expand().is_zero() => {}
                _ => return None,
            }
        }
        Some(QModCertificate {
            gens: self.gens.clone(),
            sigma,
            r: self.r,
        })
    }
}

fn sum(nvars: usize, parts: &[Polynomial]) -> Polynomial {
    let mut acc = Accumulator::new(nvars);
    for p in parts {
        acc.add_poly(p);
    }
    acc.finish()
}

fn report(target: &Polynomial, r: u32, terms: Vec<(String, Degree, Degree, Polynomial)>) -> VerifyReport {
    let nvars = target.nvars();
    let mut acc = Accumulator::new(nvars);
    acc.add_poly(target);
    let mut out = Vec::with_capacity(terms.len());
    let mut max_degree = Degree::NegInfinity;
    for (index, sigma_degree, generator_degree, product) in terms {
        acc.add_scaled(&product, &-crate::rational::int(1));
        let degree = sigma_degree + generator_degree;
        max_degree = max_degree.max(degree);
        out.push(TermReport {
            index,
            sigma_degree,
            generator_degree,
            degree,
            within_bound: degree.at_most(r),
        });
    }
    let residual = acc.finish();
    let identity_holds = residual.is_zero();
    let degrees_ok = out.iter().all(|t| t.within_bound);
    VerifyReport {
        pass: identity_holds && degrees_ok,
        identity_holds,
        degrees_ok,
        claimed_r: r,
        residual,
        terms: out,
        max_degree,
    }
}

/// Checks `target = sigma_0 + sum_i sigma_i g_i` exactly and every
/// `deg(sigma_i) + deg(g_i) <= r`.
pub fn verify_qmod(cert: &QModCertificate, target: &Polynomial) -> Result<VerifyReport, CertificateError> {
    if target.nvars() != cert.nvars() {
        return Err(PolyError::VariableCountMismatch {
            left: cert.nvars(),
            right: target.nvars(),
        }
        .into());
    }
    let terms = crate::par_map(&cert.indexed(), |(i, s)| {
        let g = cert.gens.generator(*i).expect("index in range");
        (i.to_string(), s.degree(), g.total_degree(), &s.expand() * &g)
    });
    Ok(report(target, cert.r, terms))
}

/// Checks `target = sum_I sigma_I g_I` exactly and every
/// `deg(sigma_I) + deg(g_I) <= r`.
pub fn verify_preorder(
    cert: &PreorderCertificate,
    target: &Polynomial,
) -> Result<VerifyReport, CertificateError> {
    if target.nvars() != cert.nvars() {
        return Err(PolyError::VariableCountMismatch {
            left: cert.nvars(),
            right: target.nvars(),
        }
        .into());
    }
    let items: Vec<_> = cert.sigma.iter().collect();
    let terms = crate::par_map(&items, |(subset, s)| {
        let g = cert.gens.product(subset).expect("validated subset");
        (subset.key(), s.degree(), g.total_degree(), &s.expand() * &g)
    });
    Ok(report(target, cert.r, terms))
}

/// Sets `x_{keep+1} = ... = x_n = 0` in a unit-cube certificate. Dropped
/// generators restrict to `1`, so their multipliers fold into `sigma_0`.
pub fn restrict_certificate(
    cert: &QModCertificate,
    keep: usize,
) -> Result<QModCertificate, CertificateError> {
    if *cert.gens.label() != GeneratorLabel::Cube {
        return Err(CertificateError::WrongLabel {
            expected: "cube",
            found: cert.gens.label().name(),
        });
    }
    let n = cert.nvars();
    if keep == 0 || keep > n {
        return Err(CertificateError::Keep { keep, n });
    }
    if keep == n {
        return Ok(cert.clone());
    }
    let dropped: Vec<usize> = (keep + 1..=n).collect();
    let mut sigma = Vec::with_capacity(keep + 1);
    let mut sigma0 = cert.sigma[0].restrict_to_zero(&dropped)?;
    for s in &cert.sigma[keep + 1..] {
        sigma0.extend(&s.restrict_to_zero(&dropped)?);
    }
    sigma.push(sigma0);
    for s in &cert.sigma[1..=keep] {
        sigma.push(s.restrict_to_zero(&dropped)?);
    }
    QModCertificate::new(GeneratorSet::cube(keep), sigma, cert.r)
}

/// `target` with the dropped variables set to zero, matching
/// [`restrict_certificate`].
pub fn restrict_target(target: &Polynomial, keep: usize) -> Result<Polynomial, PolyError> {
    let dropped: Vec<usize> = (keep + 1..=target.nvars()).collect();
    target.restrict_to_zero(&dropped)
}
