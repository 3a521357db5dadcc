use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::error::CertificateError;
use crate::poly::{Accumulator, Monomial, Polynomial};
use crate::rational::{int, Rational};

/// Which family a generator tuple belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorLabel {
    /// `1 - x_i^2`, `i = 1..n`.
    Cube,
    /// The single generator `n - sum_i x_i^(2q)`.
    LnormBall {
        q: u32,
    },
    /// `eta^2 - x_i^2`, `i = 1..n`. Only `eta^2` is stored, so irrational
    /// `eta` with rational square (such as `sqrt 2`) is allowed.
    ScaledCube {
        eta_sq: Rational,
    },
    Custom,
}

impl GeneratorLabel {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorLabel::Cube => "cube",
            GeneratorLabel::LnormBall { .. } => "lnorm-ball",
            GeneratorLabel::ScaledCube { .. } => "scaled-cube",
            GeneratorLabel::Custom => "custom",
        }
    }
}

/// A labelled tuple `g_1, ..., g_m` of polynomials in `n` variables.
/// `g_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    nvars: usize,
    label: GeneratorLabel,
    gens: Vec<Polynomial>,
}

fn one_minus_sq(nvars: usize, c: &Rational, i: usize) -> Polynomial {
    let mut acc = Accumulator::new(nvars);
    acc.add_term(Monomial::one(nvars), c.clone());
    acc.add_term(Monomial::var_pow(nvars, i, 2), -Rational::one());
    acc.finish()
}

impl GeneratorSet {
    pub fn cube(n: usize) -> Self {
        GeneratorSet {
            nvars: n,
            label: GeneratorLabel::Cube,
            gens: (0..n).map(|i| one_minus_sq(n, &Rational::one(), i)).collect(),
        }
    }

    pub fn scaled_cube(n: usize, eta_sq: Rational) -> Result<Self, CertificateError> {
        if !eta_sq.is_positive() {
            return Err(CertificateError::Parameters(alloc::format!(
                "eta^2 must be positive, got {eta_sq}"
            )));
        }
        Ok(GeneratorSet {
            nvars: n,
            gens: (0..n).map(|i| one_minus_sq(n, &eta_sq, i)).collect(),
            label: GeneratorLabel::ScaledCube { eta_sq },
        })
    }

    pub fn lnorm_ball(n: usize, q: u32) -> Result<Self, CertificateError> {
        if q == 0 {
            return Err(CertificateError::Parameters("q must be at least 1".into()));
        }
        let mut acc = Accumulator::new(n);
        acc.add_term(Monomial::one(n), int(n as i64));
        for i in 0..n {
            acc.add_term(Monomial::var_pow(n, i, 2 * q), -Rational::one());
        }
        Ok(GeneratorSet {
            nvars: n,
            label: GeneratorLabel::LnormBall { q },
            gens: alloc::vec![acc.finish()],
        })
    }

    /// Arbitrary generators. If they happen to match a known family the
    /// label is still `custom`; [`GeneratorSet::matches`] detects that.
    pub fn custom(n: usize, gens: Vec<Polynomial>) -> Result<Self, CertificateError> {
        if let Some(g) = gens.iter().find(|g| g.nvars() != n) {
            return Err(crate::error::PolyError::VariableCountMismatch {
                left: n,
                right: g.nvars(),
            }
            .into());
        }
        Ok(GeneratorSet {
            nvars: n,
            label: GeneratorLabel::Custom,
            gens,
        })
    }

    /// Rebuilds the canonical generator set for `label` and checks it
    /// against `gens` when given.
    pub fn with_label(
        n: usize,
        label: GeneratorLabel,
        gens: Option<Vec<Polynomial>>,
    ) -> Result<Self, CertificateError> {
        let set = match &label {
            GeneratorLabel::Cube => Self::cube(n),
            GeneratorLabel::LnormBall { q } => Self::lnorm_ball(n, *q)?,
            GeneratorLabel::ScaledCube { eta_sq } => Self::scaled_cube(n, eta_sq.clone())?,
            GeneratorLabel::Custom => {
                return Self::custom(
                    n,
                    gens.ok_or_else(|| {
                        CertificateError::Parameters("custom generators need explicit polynomials".into())
                    })?,
                )
            }
        };
        if let Some(g) = gens {
            if g != set.gens {
                return Err(CertificateError::Parameters(alloc::format!(
                    "generator polynomials do not match label {}",
                    label.name()
                )));
            }
        }
        Ok(set)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn label(&self) -> &GeneratorLabel {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// `g_i` with `g_0 = 1`.
    pub fn generator(&self, i: usize) -> Result<Polynomial, CertificateError> {
        match i {
            0 => Ok(Polynomial::one(self.nvars)),
            _ => self
                .gens
                .get(i - 1)
                .cloned()
                .ok_or(CertificateError::SubsetIndex {
                    index: i,
                    m: self.gens.len(),
                }),
        }
    }

    /// `g_I = prod_{i in I} g_i`, with `g_{} = 1`.
    pub fn product(&self, subset: &Subset) -> Result<Polynomial, CertificateError> {
        let mut out = Polynomial::one(self.nvars);
        for &i in subset.indices() {
            if i == 0 || i > self.gens.len() {
                return Err(CertificateError::SubsetIndex {
                    index: i,
                    m: self.gens.len(),
                });
            }
            out = &out * &self.gens[i - 1];
        }
        Ok(out)
    }

    /// Whether the generators are exactly those of `label`.
    pub fn matches(&self, label: &GeneratorLabel) -> bool {
        match Self::with_label(self.nvars, label.clone(), None) {
            Ok(set) => set.gens == self.gens,
            Err(_) => false,
        }
    }
}

/// A subset `I` of `{1, ..., m}`, kept sorted. The empty subset indexes
/// `g_{} = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        Subset(alloc::vec![i])
    }

    /// Sorts and deduplicates.
    pub fn new<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let set: BTreeSet<usize> = items.into_iter().collect();
        Subset(set.into_iter().collect())
    }

    /// All subsets of `{1..m}` in lexicographic order.
    pub fn all(m: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (0u64..(1u64 << m))
            .map(|mask| Subset((1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect()))
            .collect();
        out.sort();
        out
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Parses `"1,2"`; `""` and `"0"` denote the empty subset.
    pub fn parse(text: &str) -> Option<Subset> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Some(Subset::empty());
        }
        let mut items = Vec::new();
        for part in text.split(',') {
            let i: usize = part.trim().parse().ok()?;
            if i == 0 {
                return None;
            }
            items.push(i);
        }
        let s = Subset::new(items.iter().copied());
        (s.len() == items.len()).then_some(s)
    }

    pub fn key(&self) -> String {
        use alloc::string::ToString;
        self.0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}
