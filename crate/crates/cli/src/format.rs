//! Certificate JSON.
//!
//! ```json
//! { "n": 2,
//!   "generators": { "label": "cube" },
//!   "kind": "qmod", "r": 4,
//!   "sigma": { "0": [ { "w": "1/1", "p": "x1*x2" } ], "1": [ { "w": "1/1", "p": "1" } ] } }
//! ```
//!
//! Rationals are always written as `"num/den"`; bare integers are accepted
//! on input. Quadratic-module multipliers are keyed by generator index
//! (`"0"` pairs with `g_0 = 1`); preordering multipliers by comma-joined
//! subsets, with `"0"` or `""` for the empty subset.

use std::collections::BTreeMap;

use cube_psatz::certificates::{GeneratorLabel, GeneratorSet, PreorderCertificate, QModCertificate};
use cube_psatz::rational::{exact_sqrt, parse_rational, to_fraction_string};
use cube_psatz::{parse, Polynomial, Rational, SosExpression, Subset};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("bad polynomial {text:?}: {source}")]
    Polynomial {
        text: String,
        source: cube_psatz::PolyError,
    },
    #[error("bad multiplier key {0:?}")]
    Key(String),
    #[error("duplicate multiplier key {0:?}")]
    DuplicateKey(String),
    #[error("{0}")]
    Generators(String),
    #[error(transparent)]
    Certificate(#[from] cube_psatz::CertificateError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Qmod,
    Preorder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorsJson {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub w: String,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: usize,
    pub generators: GeneratorsJson,
    pub kind: Kind,
    pub r: u32,
    pub sigma: BTreeMap<String, Vec<TermJson>>,
}

/// Either kind of certificate, as read from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    QMod(QModCertificate),
    Preorder(PreorderCertificate),
}

impl Certificate {
    pub fn gens(&self) -> &GeneratorSet {
        match self {
            Certificate::QMod(c) => c.gens(),
            Certificate::Preorder(c) => c.gens(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.gens().nvars()
    }

    pub fn r(&self) -> u32 {
        match self {
            Certificate::QMod(c) => c.r(),
            Certificate::Preorder(c) => c.r(),
        }
    }

    pub fn expand(&self) -> Polynomial {
        match self {
            Certificate::QMod(c) => c.expand(),
            Certificate::Preorder(c) => c.expand(),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Certificate::QMod(_) => Kind::Qmod,
            Certificate::Preorder(_) => Kind::Preorder,
        }
    }
}

fn rational(text: &str) -> Result<Rational, FormatError> {
    parse_rational(text).ok_or_else(|| FormatError::Rational(text.to_string()))
}

fn polynomial(text: &str, n: usize) -> Result<Polynomial, FormatError> {
    parse(text, n).map_err(|source| FormatError::Polynomial {
        text: text.to_string(),
        source,
    })
}

fn generators_to_json(gens: &GeneratorSet) -> GeneratorsJson {
    let mut out = GeneratorsJson {
        label: gens.label().name().to_string(),
        q: None,
        eta: None,
        eta_sq: None,
        polys: None,
    };
    match gens.label() {
        GeneratorLabel::Cube => {}
        GeneratorLabel::LnormBall { q } => out.q = Some(*q),
        GeneratorLabel::ScaledCube { eta_sq } => match exact_sqrt(eta_sq) {
            Some(eta) => out.eta = Some(to_fraction_string(&eta)),
            None => out.eta_sq = Some(to_fraction_string(eta_sq)),
        },
        GeneratorLabel::Custom => {
            out.polys = Some(gens.generators().iter().map(ToString::to_string).collect());
        }
    }
    out
}

fn generators_from_json(n: usize, g: &GeneratorsJson) -> Result<GeneratorSet, FormatError> {
    let polys = g
        .polys
        .as_ref()
        .map(|ps| ps.iter().map(|p| polynomial(p, n)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let label = match g.label.as_str() {
        "cube" => GeneratorLabel::Cube,
        "lnorm-ball" => GeneratorLabel::LnormBall {
            q: g.q
                .ok_or_else(|| FormatError::Generators("lnorm-ball needs \"q\"".into()))?,
        },
        "scaled-cube" => {
            let eta_sq = match (&g.eta, &g.eta_sq) {
                (Some(eta), None) => {
                    let eta = rational(eta)?;
                    &eta * &eta
                }
                (None, Some(sq)) => rational(sq)?,
                (Some(eta), Some(sq)) => {
                    let e = rational(eta)?;
                    let s = rational(sq)?;
                    if &e * &e != s {
                        return Err(FormatError::Generators("\"eta\" and \"eta_sq\" disagree".into()));
                    }
                    s
                }
                (None, None) => {
                    return Err(FormatError::Generators(
                        "scaled-cube needs \"eta\" or \"eta_sq\"".into(),
                    ))
                }
            };
            GeneratorLabel::ScaledCube { eta_sq }
        }
        "custom" => GeneratorLabel::Custom,
        other => {
            return Err(FormatError::Generators(format!(
                "unknown generator label {other:?}"
            )))
        }
    };
    Ok(GeneratorSet::with_label(n, label, polys)?)
}

fn sos_to_json(s: &SosExpression) -> Vec<TermJson> {
    s.terms()
        .iter()
        .map(|t| TermJson {
            w: to_fraction_string(&t.weight),
            p: t.poly.to_string(),
        })
        .collect()
}

fn sos_from_json(n: usize, terms: &[TermJson]) -> Result<SosExpression, FormatError> {
    let mut s = SosExpression::zero(n);
    for t in terms {
        s.push(rational(&t.w)?, polynomial(&t.p, n)?)?;
    }
    Ok(s)
}

pub fn to_json(cert: &Certificate) -> CertificateJson {
    let (sigma, kind) = match cert {
        Certificate::QMod(c) => (
            c.sigma()
                .iter()
                .enumerate()
                .map(|(i, s)| (i.to_string(), sos_to_json(s)))
                .collect(),
            Kind::Qmod,
        ),
        Certificate::Preorder(c) => (
            c.sigma()
                .iter()
                .map(|(subset, s)| {
                    let key = if subset.is_empty() {
                        "0".to_string()
                    } else {
                        subset.key()
                    };
                    (key, sos_to_json(s))
                })
                .collect(),
            Kind::Preorder,
        ),
    };
    CertificateJson {
        n: cert.nvars(),
        generators: generators_to_json(cert.gens()),
        kind,
        r: cert.r(),
        sigma,
    }
}

pub fn from_json(doc: &CertificateJson) -> Result<Certificate, FormatError> {
    let n = doc.n;
    let gens = generators_from_json(n, &doc.generators)?;
    match doc.kind {
        Kind::Qmod => {
            let mut sigma = vec![SosExpression::zero(n); gens.len() + 1];
            let mut seen = vec![false; gens.len() + 1];
            for (key, terms) in &doc.sigma {
                let i: usize = key
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&i| i <= gens.len())
                    .ok_or_else(|| FormatError::Key(key.clone()))?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(FormatError::DuplicateKey(key.clone()));
                }
                sigma[i] = sos_from_json(n, terms)?;
            }
            Ok(Certificate::QMod(QModCertificate::new(gens, sigma, doc.r)?))
        }
        Kind::Preorder => {
            let mut sigma = BTreeMap::new();
            for (key, terms) in &doc.sigma {
                let subset = Subset::parse(key).ok_or_else(|| FormatError::Key(key.clone()))?;
                if sigma.insert(subset, sos_from_json(n, terms)?).is_some() {
                    return Err(FormatError::DuplicateKey(key.clone()));
                }
            }
            Ok(Certificate::Preorder(PreorderCertificate::new(
                gens, sigma, doc.r,
            )?))
        }
    }
}

pub fn to_string(cert: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(cert)).expect("certificate JSON serializes");
    s.push('\n');
    s
}

pub fn from_str(text: &str) -> Result<Certificate, FormatError> {
    let doc: CertificateJson = serde_json::from_str(text)?;
    from_json(&doc)
}
