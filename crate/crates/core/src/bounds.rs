//! Effective degree bounds for positivity certificates on the cube, and
//! lower-bound diagnostics for the family `(1 - x^2)(1 - y^2) + eps`.
//!
//! Every integer returned here is certified: transcendental quantities enter
//! only through rational enclosures and are rounded in the conservative
//! direction.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::float::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::certificates::{verify_qmod, GeneratorLabel, QModCertificate};
use crate::chebyshev::cheb_value;
use crate::enclosure::{self, Enclosure};
use crate::error::BoundsError;
use crate::poly::{parse, Polynomial};
use crate::rational::{ceil, ceil_sqrt, exact_sqrt, int, ratio, Rational};

/// Inputs shared by the degree formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInputs {
    pub n: usize,
    pub d: u32,
    pub fmin: Rational,
    pub fmax: Rational,
    /// Chebyshev growth constant; defaults to the rational upper bound on
    /// `e^5`.
    pub c_frak: Rational,
    /// Schmudgen constant `C(n, d)`; there is no default formula.
    pub c_nd: Option<Rational>,
    /// Permits `C(n, d) = 1` as a placeholder when `c_nd` is absent.
    pub illustrative: bool,
}

impl BoundInputs {
    pub fn new(n: usize, d: u32, fmin: Rational, fmax: Rational) -> Self {
        BoundInputs {
            n,
            d,
            fmin,
            fmax,
            c_frak: enclosure::e5_upper(),
            c_nd: None,
            illustrative: false,
        }
    }

    pub fn with_c_frak(mut self, c: Rational) -> Self {
        self.c_frak = c;
        self
    }

    pub fn with_c_nd(mut self, c: Rational) -> Self {
        self.c_nd = Some(c);
        self
    }

    pub fn illustrative(mut self, on: bool) -> Self {
        self.illustrative = on;
        self
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        let bad = |m: String| Err(BoundsError::Inputs(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        if !self.fmin.is_positive() {
            return bad(format!("fmin = {} must be positive", self.fmin));
        }
        if self.fmax < self.fmin {
            return bad(format!("fmax = {} is below fmin = {}", self.fmax, self.fmin));
        }
        if self.c_frak < Rational::one() {
            return bad(format!(
                "the Chebyshev constant {} must be at least 1",
                self.c_frak
            ));
        }
        if let Some(c) = &self.c_nd {
            if !c.is_positive() {
                return bad(format!("C(n,d) = {c} must be positive"));
            }
        }
        Ok(())
    }

    /// Caveats that do not invalidate the inputs.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.c_frak < enclosure::e5_upper() {
            w.push(format!(
                "Chebyshev constant {} is below the proven e^5 bound; the degree guarantee is only established for e^5",
                self.c_frak
            ));
        }
        if self.c_nd.is_none() && self.illustrative {
            w.push("C(n,d) = 1 is an illustrative placeholder, not a proven constant".into());
        }
        w
    }

    pub fn ratio(&self) -> Rational {
        &self.fmax / &self.fmin
    }

    fn d_sq(&self) -> Rational {
        int(self.d as i64 * self.d as i64)
    }

    /// `C(n, d)`, or 1 in illustrative mode.
    pub fn schmudgen_constant(&self) -> Result<Rational, BoundsError> {
        match (&self.c_nd, self.illustrative) {
            (Some(c), _) => Ok(c.clone()),
            (None, true) => Ok(Rational::one()),
            (None, false) => Err(BoundsError::MissingSchmudgenConstant),
        }
    }
}

fn to_u64(v: &BigInt, what: &str) -> Result<u64, BoundsError> {
    v.to_u64()
        .ok_or_else(|| BoundsError::Inputs(format!("{what} = {v} does not fit in 64 bits")))
}

/// `eps = fmin / (2 c d^2 fmax)`, exactly.
pub fn epsilon_bound(inputs: &BoundInputs) -> Result<Rational, BoundsError> {
    inputs.validate()?;
    Ok(&inputs.fmin / (int(2) * &inputs.c_frak * inputs.d_sq() * &inputs.fmax))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QReport {
    pub q: u64,
    pub epsilon: Rational,
    pub ln_n: Enclosure,
    /// Enclosure of `4 c d^2 ln(n) fmax/fmin`, which `2q` must reach.
    pub threshold: Enclosure,
}

/// Smallest `q >= 1` with `2q >= 4 c d^2 ln(n) fmax/fmin`, using an upper
/// bound on `ln n`.
pub fn choose_q(inputs: &BoundInputs) -> Result<QReport, BoundsError> {
    let epsilon = epsilon_bound(inputs)?;
    let ln_n = enclosure::ln_u64(inputs.n as u64);
    let factor = int(4) * &inputs.c_frak * inputs.d_sq() * inputs.ratio();
    let threshold = ln_n.scale_nonneg(&factor);
    let q = ceil(&(&threshold.hi / int(2))).max(BigInt::one());
    Ok(QReport {
        q: to_u64(&q, "q")?,
        epsilon,
        ln_n,
        threshold,
    })
}

/// `pi d sqrt(2n)`.
fn pi_branch(inputs: &BoundInputs) -> Enclosure {
    enclosure::sqrt(&int(2 * inputs.n as i64))
        .mul_nonneg(&enclosure::pi())
        .scale_nonneg(&int(inputs.d as i64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchmudgenReport {
    pub r: u64,
    /// Smallest integer `>= sqrt(C(n,d) fmax/fmin)`.
    pub sqrt_branch: u64,
    /// Smallest integer `>= pi d sqrt(2n)`.
    pub pi_branch: u64,
    pub c_nd: Rational,
    pub pi: Enclosure,
    pub warnings: Vec<String>,
}

/// Smallest `r >= max(sqrt(C(n,d) fmax/fmin), pi d sqrt(2n))`. Both
/// branches are compared through squares, so only the upper bound on `pi`
/// enters.
pub fn schmudgen_degree(inputs: &BoundInputs) -> Result<SchmudgenReport, BoundsError> {
    inputs.validate()?;
    let c_nd = inputs.schmudgen_constant()?;
    let sqrt_branch = ceil_sqrt(&(&c_nd * inputs.ratio()));
    let pi = enclosure::pi();
    let pi_sq_hi = &pi.hi * &pi.hi;
    let pi_branch = ceil_sqrt(&(pi_sq_hi * int(2 * inputs.n as i64) * inputs.d_sq()));
    let r = sqrt_branch.clone().max(pi_branch.clone());
    Ok(SchmudgenReport {
        r: to_u64(&r, "r")?,
        sqrt_branch: to_u64(&sqrt_branch, "r")?,
        pi_branch: to_u64(&pi_branch, "r")?,
        c_nd,
        pi,
        warnings: inputs.warnings(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PutinarReport {
    pub r: u64,
    /// `r n`: the certificate lies in `Q(cube)_{rn}`.
    pub certificate_degree: u64,
    /// `4 c d^2 ln(n) fmax/fmin`.
    pub log_addend: Enclosure,
    /// `pi d sqrt(2n)`.
    pub pi_term: Enclosure,
    /// `sqrt(2 c C(n,d) fmax/fmin)`.
    pub sqrt_term: Enclosure,
    pub max_addend: Enclosure,
    pub total: Enclosure,
    pub c_nd: Rational,
    pub ln_n: Enclosure,
    pub pi: Enclosure,
    pub warnings: Vec<String>,
}

/// Smallest integer dominating
/// `4 c d^2 ln(n) fmax/fmin + max(pi d sqrt(2n), sqrt(2 c fmax/fmin C(n,d)))`.
pub fn putinar_degree(inputs: &BoundInputs) -> Result<PutinarReport, BoundsError> {
    inputs.validate()?;
    let c_nd = inputs.schmudgen_constant()?;
    let ln_n = enclosure::ln_u64(inputs.n as u64);
    let log_addend = ln_n.scale_nonneg(&(int(4) * &inputs.c_frak * inputs.d_sq() * inputs.ratio()));
    let pi_term = pi_branch(inputs);
    let sqrt_term = enclosure::sqrt(&(int(2) * &inputs.c_frak * inputs.ratio() * &c_nd));
    let max_addend = pi_term.max(&sqrt_term);
    let total = log_addend.add(&max_addend);
    let r = ceil(&total.hi);
    let r = to_u64(&r, "r")?;
    Ok(PutinarReport {
        r,
        certificate_degree: r
            .checked_mul(inputs.n as u64)
            .ok_or_else(|| BoundsError::Inputs("r n overflows".into()))?,
        log_addend,
        pi_term,
        sqrt_term,
        max_addend,
        total,
        c_nd,
        ln_n,
        pi: enclosure::pi(),
        warnings: inputs.warnings(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionReport {
    pub epsilon: Rational,
    pub sqrt_epsilon: Enclosure,
    /// Largest `r0` such that the inequality fails for every `r <= r0`.
    pub excluded_degree: u64,
    /// First `r` at which failure could not be certified.
    pub first_unexcluded: u64,
}

/// Interval of `r^2/2 + r^4 T_r(1/(1-s))^2` for `s` in `[s.lo, s.hi]`;
/// `None` for the upper end when `s.hi >= 1`.
fn negativfinal_rhs(r: u64, s: &Rational) -> Option<Rational> {
    if *s >= Rational::one() {
        return None;
    }
    let r_q = Rational::from_integer(r.into());
    let r2 = &r_q * &r_q;
    let t = cheb_value(r as u32, &(Rational::one() - s).recip());
    Some(&r2 / int(2) + &r2 * &r2 * &t * &t)
}

/// Scans `r = 1, 2, ...` for the first `r` with
/// `1/(3 sqrt eps) <= r^2/2 + r^4 T_r(1/(1 - sqrt eps))^2`. A failure is only
/// counted when it is certain on the enclosure of `sqrt eps`.
pub fn lower_bound_excluded_degree(epsilon: &Rational) -> Result<ExclusionReport, BoundsError> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        return Err(BoundsError::Precondition(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let s = enclosure::sqrt(epsilon);
    let lhs_lo = (int(3) * &s.hi).recip();
    let mut r: u64 = 1;
    loop {
        let fails = match negativfinal_rhs(r, &s.hi) {
            Some(rhs_hi) => rhs_hi < lhs_lo,
            None => false,
        };
        if !fails {
            return Ok(ExclusionReport {
                epsilon: epsilon.clone(),
                sqrt_epsilon: s,
                excluded_degree: r - 1,
                first_unexcluded: r,
            });
        }
        r += 1;
    }
}

/// The evaluated side of a fact: exact, or a non-certified sample maximum.
#[derive(Debug, Clone, PartialEq)]
pub enum FactValue {
    Exact(Rational),
    Sampled(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactCheck {
    pub fact: u8,
    pub statement: &'static str,
    pub lhs: FactValue,
    pub rhs: Rational,
    pub holds: bool,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub epsilon: Rational,
    pub delta: Rational,
    pub delta_note: Option<String>,
    pub r: u32,
    /// Degree excluded by the final inequality; absent when `eps >= 1`.
    pub excluded_degree: Option<u64>,
    pub facts: Vec<FactCheck>,
}

impl LowerBoundReport {
    pub fn all_hold(&self) -> bool {
        self.facts.iter().all(|f| f.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticOptions {
    /// Defaults to `sqrt eps` (perfect squares) or `1/2` when `eps >= 1`.
    pub delta: Option<Rational>,
    /// Points per axis for the fact 2 sampling grid (default 129).
    pub grid: Option<usize>,
    /// Intervals of the exact fact 3 grid on `[-delta, delta]` (default 64).
    pub derivative_grid: Option<u32>,
    /// Extra points in `[-1, 1]^2`, rescaled to the fact 2 box.
    pub extra_points: Vec<[f64; 2]>,
}

/// `(1 - x1^2)(1 - x2^2) + eps`.
pub fn lower_bound_target(epsilon: &Rational) -> Polynomial {
    let base = parse("(1-x1^2)*(1-x2^2)", 2).expect("fixed polynomial");
    &base + &Polynomial::constant(2, epsilon.clone())
}

fn choose_delta(
    epsilon: &Rational,
    given: Option<&Rational>,
) -> Result<(Rational, Option<String>), BoundsError> {
    let one = Rational::one();
    if let Some(d) = given {
        if !d.is_positive() || *d >= one {
            return Err(BoundsError::Precondition(format!(
                "delta must lie in (0,1), got {d}"
            )));
        }
        if *epsilon < one && d < epsilon {
            return Err(BoundsError::Precondition(format!(
                "delta = {d} must be at least epsilon = {epsilon}"
            )));
        }
        let note = (*epsilon >= one)
            .then(|| "epsilon >= 1: delta >= epsilon cannot hold, delta only kept in (0,1)".into());
        return Ok((d.clone(), note));
    }
    if *epsilon >= one {
        return Ok((
            ratio(1, 2),
            Some("epsilon >= 1: delta >= epsilon cannot hold, using delta = 1/2".into()),
        ));
    }
    match exact_sqrt(epsilon) {
        Some(s) => Ok((s, None)),
        None => Err(BoundsError::Precondition(format!(
            "epsilon = {epsilon} is not a rational square; supply delta"
        ))),
    }
}

/// Evaluates the four local facts behind the lower bound on a concrete
/// certificate for `(1 - x1^2)(1 - x2^2) + eps` over the square.
pub fn fact_diagnostics(
    cert: &QModCertificate,
    epsilon: &Rational,
    options: &DiagnosticOptions,
) -> Result<LowerBoundReport, BoundsError> {
    if cert.nvars() != 2 || *cert.gens().label() != GeneratorLabel::Cube {
        return Err(BoundsError::Certificate(
            "expected a certificate over the 2-dimensional cube".into(),
        ));
    }
    if !epsilon.is_positive() {
        return Err(BoundsError::Precondition(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let target = lower_bound_target(epsilon);
    let rep = verify_qmod(cert, &target).map_err(|e| BoundsError::Certificate(format!("{e}")))?;
    if !rep.pass {
        return Err(BoundsError::Certificate(format!(
            "residual {}, max degree {} vs r = {}",
            rep.residual, rep.max_degree, rep.claimed_r
        )));
    }
    let (delta, delta_note) = choose_delta(epsilon, options.delta.as_ref())?;
    let r = cert.r();
    let r_q = int(r as i64);
    let r2 = &r_q * &r_q;
    let r4 = &r2 * &r2;
    let sigma1 = cert.sigma()[1].expand();
    let t = cheb_value(r, &(Rational::one() - &delta).recip());

    let mut facts = Vec::with_capacity(4);

    let at_one = sigma1.eval(&[int(1), int(1)])?;
    let rhs1 = epsilon * &r2 / int(2);
    facts.push(FactCheck {
        fact: 1,
        statement: "sigma1(1,1) <= eps r^2 / 2",
        holds: at_one <= rhs1,
        lhs: FactValue::Exact(at_one),
        rhs: rhs1,
        certified: true,
    });

    let rhs2 = int(2) * &t;
    let half_width = Float::sqrt(1.0 / (1.0 - crate::rational::to_f64(&delta)));
    let grid = options.grid.unwrap_or(129).max(2);
    let mut sampled = f64::NEG_INFINITY;
    let mut sample = |x: f64, y: f64| {
        let v = sigma1
            .eval_float(&[x * half_width, y * half_width])
            .expect("two coordinates");
        sampled = sampled.max(v);
    };
    for i in 0..grid {
        for j in 0..grid {
            let x = -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
            let y = -1.0 + 2.0 * j as f64 / (grid - 1) as f64;
            sample(x, y);
        }
    }
    for p in &options.extra_points {
        sample(p[0].clamp(-1.0, 1.0), p[1].clamp(-1.0, 1.0));
    }
    let rhs2_f = crate::rational::to_f64(&rhs2);
    facts.push(FactCheck {
        fact: 2,
        statement: "max sigma1 on x^2, y^2 <= 1/(1-delta) is <= 2 T_r(1/(1-delta))",
        holds: sampled <= rhs2_f * (1.0 + 1e-12),
        lhs: FactValue::Sampled(sampled),
        rhs: rhs2,
        certified: false,
    });

    let one = Polynomial::one(1);
    let t_var = Polynomial::var(1, 0);
    let g = sigma1.compose(&[&one + &t_var, &one - &t_var])?;
    let g1 = g.derivative(1)?;
    let g2 = g1.derivative(1)?;
    let steps = options.derivative_grid.unwrap_or(64).max(1);
    let mut worst = Rational::zero();
    for j in 0..=steps {
        let u = -&delta + &delta * int(2 * j as i64) / int(steps as i64);
        let v = g2.eval(&[u])?.abs() / int(2);
        if v > worst {
            worst = v;
        }
    }
    let rhs3 = &r4 * &t * &t;
    facts.push(FactCheck {
        fact: 3,
        statement: "|g''(u)|/2 <= r^4 T_r(1/(1-delta))^2 for u on a grid of [-delta, delta]",
        holds: worst <= rhs3,
        lhs: FactValue::Exact(worst),
        rhs: rhs3.clone(),
        certified: true,
    });

    let d0 = g1.eval(&[Rational::zero()])?;
    let rhs4 = epsilon * &r2 / (int(2) * &delta) + &delta * &rhs3;
    facts.push(FactCheck {
        fact: 4,
        statement: "g'(0) <= eps r^2 / (2 delta) + delta r^4 T_r(1/(1-delta))^2",
        holds: d0 <= rhs4,
        lhs: FactValue::Exact(d0),
        rhs: rhs4,
        certified: true,
    });

    let excluded_degree = if *epsilon < Rational::one() {
        Some(lower_bound_excluded_degree(epsilon)?.excluded_degree)
    } else {
        None
    };
    Ok(LowerBoundReport {
        epsilon: epsilon.clone(),
        delta,
        delta_note,
        r,
        excluded_degree,
        facts,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaEstimate {
    pub fmin: f64,
    pub fmax: f64,
    pub samples: usize,
    /// Always false: grid sampling can miss the true extrema.
    pub certified: bool,
}

/// Samples `f` on a uniform grid of `[-1, 1]^n` with `per_axis` points per
/// coordinate (at least 2), plus any extra points.
pub fn estimate_extrema(
    f: &Polynomial,
    per_axis: usize,
    extra: &[Vec<f64>],
) -> Result<ExtremaEstimate, BoundsError> {
    let n = f.nvars();
    let per_axis = per_axis.max(2);
    let total = per_axis
        .checked_pow(n as u32)
        .ok_or_else(|| BoundsError::Inputs("sampling grid too large".into()))?;
    let mut fmin = f64::INFINITY;
    let mut fmax = f64::NEG_INFINITY;
    let mut point = alloc::vec![0.0; n];
    for mut idx in 0..total {
        for c in point.iter_mut() {
            *c = -1.0 + 2.0 * (idx % per_axis) as f64 / (per_axis - 1) as f64;
            idx /= per_axis;
        }
        let v = f.eval_float(&point)?;
        fmin = fmin.min(v);
        fmax = fmax.max(v);
    }
    for p in extra {
        let v = f.eval_float(p)?;
        fmin = fmin.min(v);
        fmax = fmax.max(v);
    }
    Ok(ExtremaEstimate {
        fmin,
        fmax,
        samples: total + extra.len(),
        certified: false,
    })
}
