//! Subcommand implementations. Each returns the result payload of the run
//! report; the caller turns it into a [`RunReport`](crate::report::RunReport).

use std::path::Path;

use cube_psatz::bounds::{
    choose_q, epsilon_bound, estimate_extrema, fact_diagnostics, lower_bound_excluded_degree, putinar_degree,
    schmudgen_degree, BoundInputs, DiagnosticOptions, FactValue,
};
use cube_psatz::certificates::{verify_preorder, verify_qmod, GeneratorLabel, GeneratorSet, QModCertificate};
use cube_psatz::enclosure;
use cube_psatz::identities::{
    build_fq, cert_box_in_lnorm, cert_lnorm_in_cube, cert_pow2_recurrence, cert_univariate_shift,
    CertifiedIdentity, ShiftParams,
};
use cube_psatz::lifting::lift_preorder_to_cube;
use cube_psatz::{parse, BoundsError, IdentityError, LiftError, Polynomial, Rational, VerifyReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    BoundsCommand, ConstructArgs, DiagnoseArgs, FormulaArgs, Identity, LiftArgs, LowerArgs, VerifyArgs,
};
use crate::format::{self, Certificate};
use crate::report::{self, approx, enclosure as enc, rational, CliError, Completed, Context};

fn parse_target(text: &str, nvars: usize) -> Result<Polynomial, CliError> {
    parse(text, nvars).map_err(|e| CliError::Input(format!("target polynomial: {e}")))
}

fn verify_any(cert: &Certificate, target: &Polynomial) -> Result<VerifyReport, CliError> {
    match cert {
        Certificate::QMod(c) => verify_qmod(c, target),
        Certificate::Preorder(c) => verify_preorder(c, target),
    }
    .map_err(CliError::input)
}

pub fn verify(ctx: &mut Context, args: &VerifyArgs) -> Result<Completed, CliError> {
    let cert = ctx.read_certificate(&args.cert)?;
    let target = parse_target(&args.target, cert.nvars())?;
    let rep = verify_any(&cert, &target)?;
    let result = json!({
        "certificate": args.cert.display().to_string(),
        "kind": cert.kind(),
        "generators": cert.gens().label().name(),
        "target": target.to_string(),
        "verification": report::verify_report(&rep),
    });
    Ok(Completed::judged(rep.pass, result, || {
        format!(
            "FAIL: residual {} (expansion - target = {}), max degree {} vs r = {}",
            rep.residual, -&rep.residual, rep.max_degree, rep.claimed_r
        )
    }))
}

/// Writes the certificate, reads it back and verifies it again.
fn emit_certificate(
    ctx: &mut Context,
    cert: &Certificate,
    target: &Polynomial,
    output: Option<&Path>,
) -> Result<Value, CliError> {
    let text = format::to_string(cert);
    match output {
        Some(path) => {
            ctx.write_artifact(path, &text)?;
            let back = std::fs::read_to_string(path).map_err(CliError::internal)?;
            let reread =
                format::from_str(&back).map_err(|e| CliError::internal(format!("read-back: {e}")))?;
            if reread != *cert || !verify_any(&reread, target)?.pass {
                return Err(CliError::internal(format!(
                    "{} fails re-verification on read-back",
                    path.display()
                )));
            }
            Ok(json!({ "certificate_path": path.display().to_string() }))
        }
        None => {
            let doc = serde_json::to_value(format::to_json(cert)).map_err(CliError::internal)?;
            Ok(json!({ "certificate": doc }))
        }
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn identity_error(e: IdentityError) -> CliError {
    match e {
        IdentityError::Parameters(_) => CliError::input(e),
        IdentityError::Certificate(_) => CliError::internal(e),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, identity: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("{identity} needs {flag}")))
}

fn shift_params(
    n: usize,
    q: u32,
    eta: Option<&Rational>,
    eta_sq: Option<&Rational>,
) -> Result<ShiftParams, CliError> {
    match (eta, eta_sq) {
        (Some(e), _) => ShiftParams::from_eta(n, q, e),
        (None, Some(s)) => ShiftParams::new(n, q, s.clone()),
        (None, None) => ShiftParams::auto(n, q),
    }
    .map_err(identity_error)
}

pub fn construct(ctx: &mut Context, args: &ConstructArgs) -> Result<Completed, CliError> {
    let name = match args.identity {
        Identity::Fq => "fq",
        Identity::UnivariateShift => "univariate-shift",
        Identity::Pow2 => "pow2",
        Identity::BoxInLnorm => "box-in-lnorm",
        Identity::LnormInCube => "lnorm-in-cube",
    };
    let mut params = json!({});
    let built: CertifiedIdentity = match args.identity {
        Identity::Fq => {
            let q = need(args.q, "--q", name)?;
            params = json!({ "q": q });
            let sigma = build_fq(q).map_err(identity_error)?;
            let target = sigma.expand();
            let gens = GeneratorSet::custom(1, Vec::new()).map_err(CliError::internal)?;
            let certificate = QModCertificate::new(gens, vec![sigma], 2 * q).map_err(CliError::internal)?;
            CertifiedIdentity { certificate, target }
        }
        Identity::UnivariateShift => {
            let q = need(args.q, "--q", name)?;
            params = json!({ "q": q });
            cert_univariate_shift(q).map_err(identity_error)?
        }
        Identity::Pow2 => {
            let m = need(args.m, "--m", name)?;
            params = json!({ "m": m });
            cert_pow2_recurrence(m).map_err(identity_error)?
        }
        Identity::BoxInLnorm => {
            let n = need(args.n, "--n", name)?;
            let q = need(args.q, "--q", name)?;
            let p = shift_params(n, q, args.eta.as_ref(), args.eta_sq.as_ref())?;
            params = json!({ "n": n, "q": q, "i": args.i, "eta_sq": rational(p.eta_sq()) });
            cert_box_in_lnorm(&p, args.i).map_err(identity_error)?
        }
        Identity::LnormInCube => {
            let n = need(args.n, "--n", name)?;
            let q = need(args.q, "--q", name)?;
            params = json!({ "n": n, "q": q });
            cert_lnorm_in_cube(n, q).map_err(identity_error)?
        }
    };
    let rep = verify_qmod(&built.certificate, &built.target).map_err(CliError::internal)?;
    if !rep.pass {
        return Err(CliError::internal(format!(
            "{name} certificate fails its self-check: residual {}",
            rep.residual
        )));
    }
    let cert = Certificate::QMod(built.certificate);
    let written = emit_certificate(ctx, &cert, &built.target, args.output.as_deref())?;
    let result = json!({
        "identity": name,
        "params": params,
        "target": built.target.to_string(),
        "r": cert.r(),
        "verification": report::verify_report(&rep),
    });
    Ok(Completed::pass(merge(result, written)))
}

pub fn lift(ctx: &mut Context, args: &LiftArgs) -> Result<Completed, CliError> {
    let cert = ctx.read_certificate(&args.cert)?;
    let n = cert.nvars();
    let preorder = match &cert {
        Certificate::Preorder(c) => c.clone(),
        Certificate::QMod(c) => c.to_preorder(),
    };
    let own_eta_sq = match cert.gens().label() {
        GeneratorLabel::ScaledCube { eta_sq } => Some(eta_sq.clone()),
        _ => None,
    };
    let eta_sq = match (&args.eta, &args.eta_sq) {
        (Some(e), _) => Some(e * e),
        (None, Some(s)) => Some(s.clone()),
        (None, None) => own_eta_sq,
    }
    .ok_or_else(|| {
        CliError::Input(format!(
            "certificate generators are {:?}, not a scaled cube, and no --eta was given",
            cert.gens().label().name()
        ))
    })?;
    let params = ShiftParams::new(n, args.q, eta_sq).map_err(identity_error)?;
    let target = match &args.target {
        Some(t) => parse_target(t, n)?,
        None => cert.expand(),
    };
    let out = match lift_preorder_to_cube(&preorder, &target, &params) {
        Ok(out) => out,
        Err(e @ LiftError::GeneratorMismatch(_)) => return Err(CliError::input(e)),
        Err(e @ LiftError::InputCertificate(_)) => {
            let rep = verify_any(&cert, &target)?;
            let result = json!({ "input_verification": report::verify_report(&rep) });
            return Ok(Completed::judged(false, result, || format!("FAIL: {e}")));
        }
        Err(e) => return Err(CliError::internal(e)),
    };
    let rep = verify_qmod(&out.certificate, &target).map_err(CliError::internal)?;
    if !rep.pass {
        return Err(CliError::internal(format!(
            "lifted certificate fails verification: residual {}",
            rep.residual
        )));
    }
    let ledger = json!({
        "k": out.k,
        "n": out.n,
        "q": out.q,
        "eta_sq": rational(params.eta_sq()),
        "shift_per_variable": params.shift(),
        "claimed_degree": out.claimed_degree,
        "final_degree": report::degree(rep.max_degree),
        "stages": out.stages.iter().map(|s| json!({
            "stage": s.stage,
            "generators": s.generators,
            "degree": report::degree(s.degree),
            "bound": s.bound,
            "summands": s.summands,
            "expansion_matches": s.expansion_matches,
        })).collect::<Vec<_>>(),
    });
    let lifted = Certificate::QMod(out.certificate);
    let written = emit_certificate(ctx, &lifted, &target, args.output.as_deref())?;
    let result = json!({
        "input": args.cert.display().to_string(),
        "target": target.to_string(),
        "ledger": ledger,
        "verification": report::verify_report(&rep),
    });
    Ok(Completed::pass(merge(result, written)))
}

fn bounds_error(e: BoundsError) -> CliError {
    match e {
        BoundsError::Certificate(_) => CliError::internal(e),
        e => CliError::input(e),
    }
}

/// Resolves the formula inputs, sampling `--f` when fmin/fmax are absent.
fn formula_inputs(ctx: &Context, args: &FormulaArgs) -> Result<(BoundInputs, Value), CliError> {
    let (fmin, fmax, d, source) = match (&args.fmin, &args.fmax, &args.f) {
        (Some(lo), Some(hi), None) => {
            let d = args
                .d
                .ok_or_else(|| CliError::Input("--d is required with --fmin/--fmax".into()))?;
            (
                lo.clone(),
                hi.clone(),
                d,
                json!({ "kind": "given", "certified": true }),
            )
        }
        (None, None, Some(text)) => {
            let f = parse(text, args.n).map_err(|e| CliError::Input(format!("--f: {e}")))?;
            let d = match args.d {
                Some(d) => d,
                None => f
                    .total_degree()
                    .finite()
                    .ok_or_else(|| CliError::Input("--f is the zero polynomial".into()))?,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let extra: Vec<Vec<f64>> = (0..args.samples)
                .map(|_| (0..args.n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
                .collect();
            let est = estimate_extrema(&f, args.grid, &extra).map_err(bounds_error)?;
            let to_q = |v: f64, what: &str| {
                Rational::from_float(v)
                    .ok_or_else(|| CliError::Input(format!("sampled {what} {v} is not finite")))
            };
            let source = json!({
                "kind": "sampled",
                "certified": est.certified,
                "f": f.to_string(),
                "samples": est.samples,
                "grid_per_axis": args.grid,
                "random_points": args.samples,
                "seed": ctx.seed,
            });
            (to_q(est.fmin, "fmin")?, to_q(est.fmax, "fmax")?, d, source)
        }
        _ => return Err(CliError::Input("give either --fmin and --fmax, or --f".into())),
    };
    let mut inputs = BoundInputs::new(args.n, d, fmin, fmax).illustrative(args.illustrative);
    if let Some(c) = &args.c_frak {
        inputs = inputs.with_c_frak(c.clone());
    }
    if let Some(c) = &args.c_nd {
        inputs = inputs.with_c_nd(c.clone());
    }
    inputs.validate().map_err(bounds_error)?;
    let echo = json!({
        "n": inputs.n,
        "d": inputs.d,
        "fmin": rational(&inputs.fmin),
        "fmax": rational(&inputs.fmax),
        "fmin_fmax_source": source,
        "c_frak": rational(&inputs.c_frak),
        "c_nd": inputs.c_nd.as_ref().map(rational),
        "illustrative": inputs.illustrative,
    });
    Ok((inputs, echo))
}

fn c_frak_enclosures(inputs: &BoundInputs) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    if inputs.c_frak == enclosure::e5_upper() {
        m.insert("e5".into(), enc(&enclosure::e5()));
    }
    m
}

pub fn bounds(ctx: &mut Context, which: &BoundsCommand) -> Result<Completed, CliError> {
    let args = match which {
        BoundsCommand::Lower(a) => return bounds_lower(a),
        BoundsCommand::Epsilon(a)
        | BoundsCommand::Q(a)
        | BoundsCommand::Schmudgen(a)
        | BoundsCommand::Putinar(a) => a,
    };
    let (inputs, echo) = formula_inputs(ctx, args)?;
    let mut used = c_frak_enclosures(&inputs);
    let (operation, result, breakdown, warnings) = match which {
        BoundsCommand::Epsilon(_) => {
            let eps = epsilon_bound(&inputs).map_err(bounds_error)?;
            (
                "epsilon",
                json!({ "epsilon": rational(&eps), "approx": approx(&eps) }),
                Value::Null,
                inputs.warnings(),
            )
        }
        BoundsCommand::Q(_) => {
            let rep = choose_q(&inputs).map_err(bounds_error)?;
            used.insert("ln_n".into(), enc(&rep.ln_n));
            (
                "q",
                json!({ "q": rep.q, "epsilon": rational(&rep.epsilon) }),
                json!({ "threshold_2q": enc(&rep.threshold) }),
                inputs.warnings(),
            )
        }
        BoundsCommand::Schmudgen(_) => {
            let rep = schmudgen_degree(&inputs).map_err(bounds_error)?;
            used.insert("pi".into(), enc(&rep.pi));
            (
                "schmudgen",
                json!({ "r": rep.r, "c_nd": rational(&rep.c_nd) }),
                json!({ "sqrt_branch": rep.sqrt_branch, "pi_branch": rep.pi_branch }),
                rep.warnings,
            )
        }
        BoundsCommand::Putinar(_) => {
            let rep = putinar_degree(&inputs).map_err(bounds_error)?;
            used.insert("ln_n".into(), enc(&rep.ln_n));
            used.insert("pi".into(), enc(&rep.pi));
            (
                "putinar",
                json!({ "r": rep.r, "certificate_degree": rep.certificate_degree, "c_nd": rational(&rep.c_nd) }),
                json!({
                    "log_addend": enc(&rep.log_addend),
                    "pi_term": enc(&rep.pi_term),
                    "sqrt_term": enc(&rep.sqrt_term),
                    "max_addend": enc(&rep.max_addend),
                    "total": enc(&rep.total),
                }),
                rep.warnings,
            )
        }
        BoundsCommand::Lower(_) => unreachable!("handled above"),
    };
    Ok(Completed::pass(json!({
        "operation": operation,
        "inputs": echo,
        "certified_enclosures_used": used,
        "result": result,
        "addend_breakdown": breakdown,
        "warnings": warnings,
    })))
}

fn bounds_lower(args: &LowerArgs) -> Result<Completed, CliError> {
    let rep = lower_bound_excluded_degree(&args.epsilon).map_err(bounds_error)?;
    Ok(Completed::pass(json!({
        "operation": "lower",
        "inputs": { "epsilon": rational(&args.epsilon) },
        "certified_enclosures_used": { "sqrt_epsilon": enc(&rep.sqrt_epsilon) },
        "result": { "excluded_degree": rep.excluded_degree, "first_unexcluded": rep.first_unexcluded },
        "addend_breakdown": Value::Null,
        "warnings": Vec::<String>::new(),
    })))
}

pub fn diagnose(ctx: &mut Context, args: &DiagnoseArgs) -> Result<Completed, CliError> {
    let cert = ctx.read_certificate(&args.cert)?;
    let qmod = match cert {
        Certificate::QMod(c) => c,
        Certificate::Preorder(c) => c
            .to_qmod()
            .ok_or_else(|| CliError::Input("diagnose needs a quadratic-module certificate".into()))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let extra_points = (0..args.samples)
        .map(|_| [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)])
        .collect();
    let options = DiagnosticOptions {
        delta: args.delta.clone(),
        grid: args.grid,
        derivative_grid: args.derivative_grid,
        extra_points,
    };
    let rep = match fact_diagnostics(&qmod, &args.epsilon, &options) {
        Ok(rep) => rep,
        Err(BoundsError::Certificate(msg)) => {
            return Ok(Completed::judged(
                false,
                json!({ "certificate_error": msg }),
                || format!("FAIL: certificate does not verify: {msg}"),
            ))
        }
        Err(e) => return Err(bounds_error(e)),
    };
    let facts: Vec<Value> = rep
        .facts
        .iter()
        .map(|f| {
            let lhs = match &f.lhs {
                FactValue::Exact(v) => json!({ "exact": rational(v), "approx": approx(v) }),
                FactValue::Sampled(v) => json!({ "sampled": v }),
            };
            json!({
                "fact": f.fact,
                "statement": f.statement,
                "lhs": lhs,
                "rhs": rational(&f.rhs),
                "holds": f.holds,
                "certified": f.certified,
            })
        })
        .collect();
    let all = rep.all_hold();
    let result = json!({
        "epsilon": rational(&rep.epsilon),
        "delta": rational(&rep.delta),
        "delta_note": rep.delta_note,
        "r": rep.r,
        "excluded_degree": rep.excluded_degree,
        "seed": ctx.seed,
        "facts": facts,
    });
    Ok(Completed::judged(all, result, || {
        let failed: Vec<String> = rep
            .facts
            .iter()
            .filter(|f| !f.holds)
            .map(|f| f.fact.to_string())
            .collect();
        format!("FAIL: facts {} do not hold", failed.join(", "))
    }))
}

/// Parses `CUBE_PSATZ_THREADS`; `None` leaves the default pool.
pub fn thread_count(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(CliError::Input(format!(
                "CUBE_PSATZ_THREADS must be a positive integer, got {v:?}"
            ))),
        },
    }
}
