//! Degree-shift engine: rewrites certificates over one generator tuple into
//! certificates over another, given certificates for each old generator in
//! terms of the new ones.
//!
//! [`lift_preorder_to_cube`] chains the steps
//! scaled cube (preordering) → L^{2q}-ball → unit cube (quadratic module),
//! landing at degree `k + n(2q - 2)`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::certificates::{
    verify_preorder, verify_qmod, GeneratorLabel, GeneratorSet, PreorderCertificate, QModCertificate,
    SosExpression, Subset,
};
use crate::error::LiftError;
use crate::identities::{cert_box_in_lnorm, cert_lnorm_in_cube, ShiftParams};
use crate::poly::{Accumulator, Degree, Polynomial};

/// `sigma_0 + sum_i sigma_i g_i` without a claimed truncation degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QModElement {
    pub gens: GeneratorSet,
    pub sigma: Vec<SosExpression>,
}

impl QModElement {
    pub fn new(gens: GeneratorSet, sigma: Vec<SosExpression>) -> Result<Self, LiftError> {
        let cert = QModCertificate::new(gens, sigma, 0)?;
        let (gens, sigma, _) = cert.into_parts();
        Ok(QModElement { gens, sigma })
    }

    /// `1 = 1^2 + 0 * g_1 + ...`.
    pub fn one(gens: GeneratorSet) -> Self {
        let n = gens.nvars();
        let mut sigma = alloc::vec![SosExpression::zero(n); gens.len() + 1];
        sigma[0] = SosExpression::square(Polynomial::one(n));
        QModElement { gens, sigma }
    }

    pub fn from_certificate(cert: &QModCertificate) -> Self {
        QModElement {
            gens: cert.gens().clone(),
            sigma: cert.sigma().to_vec(),
        }
    }

    pub fn expand(&self) -> Polynomial {
        let mut acc = Accumulator::new(self.gens.nvars());
        for (i, s) in self.sigma.iter().enumerate() {
            acc.add_poly(&(&s.expand() * &self.gens.generator(i).expect("index in range")));
        }
        acc.finish()
    }

    /// `max_i deg(sigma_i) + deg(g_i)`.
    pub fn degree(&self) -> Degree {
        self.sigma
            .iter()
            .enumerate()
            .map(|(i, s)| s.degree() + self.gens.generator(i).expect("index in range").total_degree())
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn summands(&self) -> usize {
        self.sigma.iter().map(SosExpression::len).sum()
    }

    /// Merges proportional squares in every multiplier.
    pub fn merged(&self) -> Self {
        QModElement {
            gens: self.gens.clone(),
            sigma: self.sigma.iter().map(SosExpression::merged).collect(),
        }
    }

    pub fn into_certificate(self, r: u32) -> QModCertificate {
        QModCertificate::new(self.gens, self.sigma, r).expect("element shape is valid")
    }
}

fn require_singleton(gens: &GeneratorSet) -> Result<&Polynomial, LiftError> {
    match gens.generators() {
        [g] => Ok(g),
        other => Err(LiftError::GeneratorMismatch(format!(
            "expected a single generator, found {}",
            other.len()
        ))),
    }
}

/// `(a_0 + a_1 g)(b_0 + b_1 g) = (a_0 b_0 + a_1 b_1 g^2) + (a_0 b_1 + a_1 b_0) g`,
/// with `g^2` absorbed into the square roots.
pub fn qmod_multiply(a: &QModElement, b: &QModElement) -> Result<QModElement, LiftError> {
    let g = require_singleton(&a.gens)?;
    if a.gens != b.gens {
        return Err(LiftError::GeneratorMismatch(
            "factors use different generators".into(),
        ));
    }
    let mut s0 = a.sigma[0].mul(&b.sigma[0]);
    s0.extend(&a.sigma[1].mul(&b.sigma[1]).mul_square(g));
    let mut s1 = a.sigma[0].mul(&b.sigma[1]);
    s1.extend(&a.sigma[1].mul(&b.sigma[0]));
    Ok(QModElement {
        gens: a.gens.clone(),
        sigma: alloc::vec![s0, s1],
    })
}

fn check_input(cert: &QModCertificate, target: &Polynomial, what: &str) -> Result<(), LiftError> {
    let rep = verify_qmod(cert, target)?;
    if !rep.pass {
        return Err(LiftError::InputCertificate(format!(
            "{what} does not verify (residual {}, max degree {} vs r = {})",
            rep.residual, rep.max_degree, rep.claimed_r
        )));
    }
    Ok(())
}

/// Substitutes `h_k = sum_j sigma_{k,j} g_j` into `sum_k sigma_k h_k`.
/// `certs[k-1]` represents `h_k`; all must share one generator set `g`.
pub fn shift_qmod(element: &QModElement, certs: &[QModCertificate]) -> Result<QModElement, LiftError> {
    let s = element.gens.len();
    if certs.len() != s || s == 0 {
        return Err(LiftError::GeneratorMismatch(format!(
            "{} certificate(s) for {} generator(s)",
            certs.len(),
            s
        )));
    }
    let g = certs[0].gens().clone();
    if g.nvars() != element.gens.nvars() {
        return Err(LiftError::GeneratorMismatch("variable counts differ".into()));
    }
    for (k, c) in certs.iter().enumerate() {
        if *c.gens() != g {
            return Err(LiftError::GeneratorMismatch(
                "certificates use different generators".into(),
            ));
        }
        let h = element.gens.generator(k + 1)?;
        check_input(c, &h, &format!("certificate for h_{}", k + 1))?;
    }
    let n = g.nvars();
    let mut sigma = alloc::vec![SosExpression::zero(n); g.len() + 1];
    sigma[0].extend(&element.sigma[0]);
    for (k, c) in certs.iter().enumerate() {
        let bar = &element.sigma[k + 1];
        for (j, sj) in c.sigma().iter().enumerate() {
            sigma[j].extend(&bar.mul(sj));
        }
    }
    Ok(QModElement { gens: g, sigma }.merged())
}

/// Rewrites a preordering certificate over `h_1..h_s` as an element of the
/// quadratic module of a single generator `g_1`, multiplying out
/// `prod_{i in I} (sigma_{0,i} + sigma_{1,i} g_1)` for every subset.
pub fn shift_preorder_single(
    cert: &PreorderCertificate,
    hcerts: &[QModCertificate],
) -> Result<QModElement, LiftError> {
    let s = cert.gens().len();
    if hcerts.len() != s || s == 0 {
        return Err(LiftError::GeneratorMismatch(format!(
            "{} certificate(s) for {} generator(s)",
            hcerts.len(),
            s
        )));
    }
    let g = hcerts[0].gens().clone();
    require_singleton(&g)?;
    for (k, c) in hcerts.iter().enumerate() {
        if *c.gens() != g {
            return Err(LiftError::GeneratorMismatch(
                "certificates use different generators".into(),
            ));
        }
        check_input(
            c,
            &cert.gens().generator(k + 1)?,
            &format!("certificate for h_{}", k + 1),
        )?;
    }
    let factors: Vec<QModElement> = hcerts.iter().map(QModElement::from_certificate).collect();
    let items: Vec<(&Subset, &SosExpression)> = cert.sigma().iter().collect();
    let parts = crate::par_map(&items, |(subset, sigma_i)| {
        let mut prod = QModElement::one(g.clone());
        for &i in subset.indices() {
            prod = qmod_multiply(&prod, &factors[i - 1])
                .expect("same singleton generator")
                .merged();
        }
        alloc::vec![sigma_i.mul(&prod.sigma[0]), sigma_i.mul(&prod.sigma[1])]
    });
    let n = g.nvars();
    let mut sigma = alloc::vec![SosExpression::zero(n); 2];
    for part in &parts {
        sigma[0].extend(&part[0]);
        sigma[1].extend(&part[1]);
    }
    Ok(QModElement { gens: g, sigma }.merged())
}

/// One row of the lifting ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: &'static str,
    pub generators: &'static str,
    pub degree: Degree,
    pub bound: u32,
    pub summands: usize,
    pub expansion_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftOutcome {
    pub certificate: QModCertificate,
    pub k: u32,
    pub n: usize,
    pub q: u32,
    /// `k + n(2q - 2)`.
    pub claimed_degree: u32,
    pub stages: Vec<StageRecord>,
}

fn stage_err(stage: &'static str, detail: impl ToString) -> LiftError {
    LiftError::Stage {
        stage,
        detail: detail.to_string(),
    }
}

/// Lifts `target in T(eta^2 - x_1^2, ..., eta^2 - x_n^2)_k` to
/// `target in Q(1 - x_1^2, ..., 1 - x_n^2)_{k + n(2q-2)}`.
pub fn lift_preorder_to_cube(
    cert: &PreorderCertificate,
    target: &Polynomial,
    params: &ShiftParams,
) -> Result<LiftOutcome, LiftError> {
    let n = params.n();
    let q = params.q();
    let expected = GeneratorLabel::ScaledCube {
        eta_sq: params.eta_sq().clone(),
    };
    if cert.nvars() != n || !cert.gens().matches(&expected) {
        return Err(LiftError::GeneratorMismatch(format!(
            "certificate generators ({} in {} variable(s)) are not the scaled cube with eta^2 = {}, n = {}",
            cert.gens().label().name(),
            cert.nvars(),
            params.eta_sq(),
            n
        )));
    }
    let rep = verify_preorder(cert, target)?;
    if !rep.pass {
        return Err(LiftError::InputCertificate(format!(
            "residual {}, max degree {} vs r = {}",
            rep.residual, rep.max_degree, rep.claimed_r
        )));
    }
    let k = cert.r();
    let claimed = k + n as u32 * params.shift();
    let mut stages = Vec::new();
    stages.push(StageRecord {
        stage: "input",
        generators: "scaled-cube",
        degree: cert.exact_degree(),
        bound: k,
        summands: cert.sigma().values().map(SosExpression::len).sum(),
        expansion_matches: true,
    });

    let boxes = (1..=n)
        .map(|i| cert_box_in_lnorm(params, i).map(|c| c.certificate))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| stage_err("box-in-lnorm", e))?;
    let ball = shift_preorder_single(cert, &boxes).map_err(|e| stage_err("preorder-to-lnorm", e))?;
    let ball_ok = ball.expand() == *target;
    stages.push(StageRecord {
        stage: "preorder-to-lnorm",
        generators: "lnorm-ball",
        degree: ball.degree(),
        bound: claimed,
        summands: ball.summands(),
        expansion_matches: ball_ok,
    });
    if !ball_ok || !ball.degree().at_most(claimed) {
        return Err(stage_err(
            "preorder-to-lnorm",
            "expansion or degree contract violated",
        ));
    }

    let cube_cert = cert_lnorm_in_cube(n, q)
        .map_err(|e| stage_err("lnorm-in-cube", e))?
        .certificate;
    let cube = shift_qmod(&ball, &[cube_cert]).map_err(|e| stage_err("lnorm-to-cube", e))?;
    let cube_ok = cube.expand() == *target;
    stages.push(StageRecord {
        stage: "lnorm-to-cube",
        generators: "cube",
        degree: cube.degree(),
        bound: claimed,
        summands: cube.summands(),
        expansion_matches: cube_ok,
    });
    if !cube_ok || !cube.degree().at_most(claimed) {
        return Err(stage_err(
            "lnorm-to-cube",
            "expansion or degree contract violated",
        ));
    }

    let certificate = cube.into_certificate(claimed);
    let rep = verify_qmod(&certificate, target)?;
    if !rep.pass {
        return Err(stage_err("final-verify", format!("residual {}", rep.residual)));
    }
    Ok(LiftOutcome {
        certificate,
        k,
        n,
        q,
        claimed_degree: claimed,
        stages,
    })
}
