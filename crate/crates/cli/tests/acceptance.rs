//! Acceptance suite. Every criterion prints one `PASS`/`FAIL` line and then
//! asserts, so `cargo test --test acceptance -- --nocapture` gives the
//! full scorecard.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use cube_psatz::bounds::{
    choose_q, epsilon_bound, fact_diagnostics, lower_bound_excluded_degree, putinar_degree, schmudgen_degree,
    BoundInputs, DiagnosticOptions, FactValue,
};
use cube_psatz::certificates::{restrict_certificate, restrict_target, verify_preorder, verify_qmod};
use cube_psatz::chebyshev::{cheb_derivative_bound_check, cheb_scaled_bound_check, cheb_value};
use cube_psatz::enclosure::e5_upper;
use cube_psatz::identities::{
    build_fq, cert_box_in_lnorm, cert_lnorm_in_cube, cert_pow2_recurrence, cert_univariate_shift, choose_eta,
    ShiftParams,
};
use cube_psatz::lifting::lift_preorder_to_cube;
use cube_psatz::rational::{int, parse_rational, pow, ratio, to_f64};
use cube_psatz::{
    parse, GeneratorSet, Monomial, Polynomial, PreorderCertificate, QModCertificate, Rational, SosExpression,
    Subset,
};
use cube_psatz_cli::format::{self, Certificate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute/relative tolerance for the float Chebyshev comparison.
const CHEB_FLOAT_TOL: f64 = 1e-9;
/// Positive constant that `r0(eps) * eps^(1/8)` must stay above.
const TREND_FLOOR: f64 = 0.25;

fn report(id: &str, title: &str, pass: bool, detail: &str, elapsed: Duration, limit_s: u64) -> bool {
    let in_time = elapsed <= Duration::from_secs(limit_s);
    let ok = pass && in_time;
    println!(
        "{} [{id}] {title}: {detail} ({:.2}s / {limit_s}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

/// `((q-1) - q x^2 + x^(2q)) / q`, assembled term by term.
fn fq_closed_form(q: u32) -> Polynomial {
    let qq = int(q as i64);
    Polynomial::from_terms(
        1,
        [
            (Monomial::new(vec![0]), (&qq - int(1)) / &qq),
            (Monomial::new(vec![2]), int(-1)),
            (Monomial::new(vec![2 * q]), qq.recip()),
        ],
    )
    .unwrap()
}

fn one_minus_x_sq() -> Polynomial {
    Polynomial::from_terms(
        1,
        [
            (Monomial::new(vec![0]), int(1)),
            (Monomial::new(vec![2]), int(-1)),
        ],
    )
    .unwrap()
}

#[test]
fn identity_suite() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for q in 1..=50u32 {
        let fq = build_fq(q).unwrap();
        if fq.expand() != fq_closed_form(q) {
            bad.push(format!("f_{q} expansion"));
        }
        let id = cert_univariate_shift(q).unwrap();
        let rep = verify_qmod(&id.certificate, &one_minus_x_sq()).unwrap();
        if !rep.pass || id.certificate.r() != 2 * q {
            bad.push(format!("shift q={q}"));
        }
    }
    let ok = report(
        "1",
        "f_q expansion and univariate shift, q = 1..50",
        bad.is_empty(),
        &format!("{} mismatches {bad:?}", bad.len()),
        t.elapsed(),
        10,
    );
    assert!(ok);
}

#[test]
fn power_of_two_suite() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in 1..=10u32 {
        let id = cert_pow2_recurrence(m).unwrap();
        let rep = verify_qmod(&id.certificate, &one_minus_x_sq()).unwrap();
        if !rep.pass || id.certificate.r() != 1 << m {
            bad.push(format!("m={m} verify"));
        }
        let shift = cert_univariate_shift(1 << (m - 1)).unwrap();
        if id.certificate.expand() != shift.certificate.expand() {
            bad.push(format!("m={m} expansion"));
        }
    }
    let ok = report(
        "2",
        "power-of-two recurrence, m = 1..10",
        bad.is_empty(),
        &format!("{bad:?}"),
        t.elapsed(),
        10,
    );
    assert!(ok);
}

#[test]
fn box_in_lnorm_suite() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 1..=5usize {
        for q in 1..=6u32 {
            let eta = choose_eta(n, q);
            let eta_sq = &eta * &eta;
            if pow(&eta_sq, q) < int(n as i64) {
                bad.push(format!("eta too small n={n} q={q}"));
                continue;
            }
            let params = ShiftParams::from_eta(n, q, &eta).unwrap();
            for i in 1..=n {
                let mut target: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
                target.insert(vec![0; n], eta_sq.clone());
                let mut e = vec![0; n];
                e[i - 1] = 2;
                target.insert(e, int(-1));
                let target =
                    Polynomial::from_terms(n, target.into_iter().map(|(e, c)| (Monomial::new(e), c)))
                        .unwrap();
                let id = cert_box_in_lnorm(&params, i).unwrap();
                let rep = verify_qmod(&id.certificate, &target).unwrap();
                checked += 1;
                if !rep.pass || id.certificate.r() != 2 * q {
                    bad.push(format!("n={n} q={q} i={i}"));
                }
            }
        }
    }
    let ok = report(
        "3",
        "box in L^2q ball, n <= 5, q <= 6",
        bad.is_empty(),
        &format!("{checked} certificates, failures {bad:?}"),
        t.elapsed(),
        60,
    );
    assert!(ok);
}

/// `(n, q, eta^2, k, multipliers)` with multipliers as `(subset, [(w, root)])`.
type Case = (
    usize,
    u32,
    &'static str,
    u32,
    &'static [(&'static str, &'static [(&'static str, &'static str)])],
);

const LIFT_BATTERY: &[Case] = &[
    (1, 1, "1", 2, &[("1", &[("1", "1")])]),
    (1, 2, "1", 4, &[("", &[("1", "x1")]), ("1", &[("2", "1")])]),
    (
        1,
        3,
        "2",
        6,
        &[("1", &[("1", "x1^2")]), ("", &[("1/2", "x1^3 - x1")])],
    ),
    (1, 4, "3/2", 8, &[("1", &[("1", "x1^3")]), ("", &[("3", "1")])]),
    (
        1,
        2,
        "4",
        8,
        &[("", &[("1", "x1^4 - 1")]), ("1", &[("1", "x1^3 - x1")])],
    ),
    (2, 1, "2", 4, &[("1,2", &[("1", "1")])]),
    (
        2,
        1,
        "9/4",
        4,
        &[
            ("1", &[("1", "x2")]),
            ("2", &[("1", "x1 + 1")]),
            ("", &[("1", "x1*x2")]),
        ],
    ),
    (2, 2, "9/4", 2, &[("1", &[("1", "1")]), ("2", &[("1", "1")])]),
    (
        2,
        2,
        "3/2",
        4,
        &[("1,2", &[("1/3", "1")]), ("", &[("1", "x1^2 - x2")])],
    ),
    (
        2,
        2,
        "2",
        6,
        &[
            ("1", &[("1", "x1*x2")]),
            ("1,2", &[("1", "x1")]),
            ("", &[("2", "1")]),
        ],
    ),
    (2, 3, "13/10", 4, &[("1,2", &[("1", "1")])]),
    (2, 3, "3/2", 6, &[("2", &[("1", "x1^2 + x2"), ("1/2", "x1")])]),
    (
        2,
        4,
        "6/5",
        4,
        &[("1", &[("1", "x2")]), ("", &[("1", "x1 - x2")])],
    ),
    (
        2,
        4,
        "2",
        8,
        &[("1,2", &[("1", "x1*x2")]), ("1", &[("1", "x1^2")])],
    ),
    (3, 1, "3", 6, &[("1,2,3", &[("1", "1")])]),
    (
        3,
        1,
        "4",
        4,
        &[
            ("1", &[("1", "x2")]),
            ("2,3", &[("2", "1")]),
            ("", &[("1", "x1 + x2 + x3")]),
        ],
    ),
    (3, 2, "7/4", 4, &[("1,2", &[("1", "1")]), ("3", &[("1", "x1")])]),
    (
        3,
        2,
        "2",
        8,
        &[("1,2,3", &[("1", "x3")]), ("", &[("1", "x1*x2*x3")])],
    ),
    (
        3,
        3,
        "3/2",
        2,
        &[("1", &[("1", "1")]), ("2", &[("1", "1")]), ("3", &[("1", "1")])],
    ),
    (3, 3, "2", 6, &[("1,3", &[("1", "x2")])]),
    (3, 4, "4/3", 2, &[("2", &[("5", "1")]), ("", &[("1", "x3")])]),
    (3, 4, "3/2", 6, &[("1,2,3", &[("1", "1")])]),
];

fn battery_certificate(case: &Case) -> PreorderCertificate {
    let (n, _, eta_sq, k, multipliers) = *case;
    let gens = GeneratorSet::scaled_cube(n, q(eta_sq)).unwrap();
    let mut sigma = BTreeMap::new();
    for (subset, terms) in multipliers {
        let mut s = SosExpression::zero(n);
        for (w, root) in terms.iter() {
            s.push(q(w), parse(root, n).unwrap()).unwrap();
        }
        sigma.insert(Subset::parse(subset).unwrap(), s);
    }
    PreorderCertificate::new(gens, sigma, k).unwrap()
}

#[test]
fn lifting_suite() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (idx, case) in LIFT_BATTERY.iter().enumerate() {
        let (n, qq, eta_sq, k, _) = *case;
        let cert = battery_certificate(case);
        let target = cert.expand();
        assert!(
            verify_preorder(&cert, &target).unwrap().pass,
            "battery entry {idx} is not a valid input"
        );
        let params = ShiftParams::new(n, qq, q(eta_sq)).unwrap();
        let bound = k + n as u32 * (2 * qq - 2);
        match lift_preorder_to_cube(&cert, &target, &params) {
            Ok(out) => {
                let rep = verify_qmod(&out.certificate, &target).unwrap();
                let cube = *out.certificate.gens() == GeneratorSet::cube(n);
                if !(rep.pass && cube && out.claimed_degree == bound && rep.max_degree.at_most(bound)) {
                    bad.push(format!("#{idx}: degree {} vs {bound}", rep.max_degree));
                }
            }
            Err(e) => bad.push(format!("#{idx}: {e}")),
        }
    }
    let ok = report(
        "4",
        "lifting to the unit cube within k + n(2q-2)",
        bad.is_empty() && LIFT_BATTERY.len() >= 20,
        &format!("{} certificates, failures {bad:?}", LIFT_BATTERY.len()),
        t.elapsed(),
        120,
    );
    assert!(ok);
}

fn epsilon_one_certificate() -> QModCertificate {
    let sq = |s: &str| SosExpression::square(parse(s, 2).unwrap());
    QModCertificate::new(GeneratorSet::cube(2), vec![sq("x1*x2"), sq("1"), sq("1")], 4).unwrap()
}

#[test]
fn worked_lower_bound_certificate() {
    let t = Instant::now();
    let cert = epsilon_one_certificate();
    let target = parse("(1-x1^2)*(1-x2^2)+1", 2).unwrap();
    let verified = verify_qmod(&cert, &target).unwrap().pass;
    let rep = fact_diagnostics(&cert, &int(1), &DiagnosticOptions::default()).unwrap();
    let fact1 = rep.facts.iter().find(|f| f.fact == 1).unwrap();
    let fact1_exact = fact1.lhs == FactValue::Exact(int(1)) && fact1.rhs == int(8);
    let summary: Vec<String> = rep
        .facts
        .iter()
        .map(|f| format!("fact {}: {}", f.fact, f.holds))
        .collect();
    let ok = report(
        "5",
        "eps = 1 certificate and facts 1-4",
        verified && rep.facts.len() == 4 && rep.all_hold() && fact1_exact,
        &format!("verified {verified}, {}", summary.join(", ")),
        t.elapsed(),
        1,
    );
    assert!(ok);
}

fn random_root(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Polynomial {
    let terms: Vec<(Monomial, Rational)> = (0..3)
        .map(|_| {
            let mut e = vec![0u32; n];
            let mut budget = rng.gen_range(0..=max_deg);
            while budget > 0 {
                e[rng.gen_range(0..n)] += 1;
                budget -= 1;
            }
            (
                Monomial::new(e),
                ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
            )
        })
        .collect();
    Polynomial::from_terms(n, terms).unwrap()
}

fn random_cube3_certificate(rng: &mut ChaCha8Rng) -> QModCertificate {
    let mut sigma = Vec::new();
    for i in 0..=3 {
        let max_deg = if i == 0 { 2 } else { 1 };
        let mut s = SosExpression::zero(3);
        for _ in 0..rng.gen_range(1..=2) {
            s.push(
                ratio(rng.gen_range(1..=5), rng.gen_range(1..=4)),
                random_root(rng, 3, max_deg),
            )
            .unwrap();
        }
        sigma.push(s);
    }
    QModCertificate::new(GeneratorSet::cube(3), sigma, 4).unwrap()
}

#[test]
fn restriction_property() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    for idx in 0..10 {
        let cert = random_cube3_certificate(&mut rng);
        let target = cert.expand();
        assert!(verify_qmod(&cert, &target).unwrap().pass);
        let small = restrict_certificate(&cert, 2).unwrap();
        let small_target = restrict_target(&target, 2).unwrap();
        if !verify_qmod(&small, &small_target).unwrap().pass || small.nvars() != 2 {
            bad.push(idx);
        }
    }
    let ok = report(
        "6",
        "restriction of cube-3 certificates to 2 variables",
        bad.is_empty(),
        &format!("failures {bad:?}"),
        t.elapsed(),
        10,
    );
    assert!(ok);
}

/// `cos(d acos x)` inside `[-1, 1]`, `cosh(d acosh |x|)` (with parity) outside.
fn cheb_closed_form(d: u32, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        (d as f64 * x.acos()).cos()
    } else {
        let v = (d as f64 * x.abs().acosh()).cosh();
        if x < 0.0 && d % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// `T_d^(k)(1) = prod_{j<k} (d^2 - j^2) / (2j + 1)`.
fn derivative_at_one(d: u32, k: u32) -> Rational {
    (0..k).fold(int(1), |acc, j| {
        let j = j as i64;
        acc * ratio(d as i64 * d as i64 - j * j, 2 * j + 1)
    })
}

#[test]
fn chebyshev_markov_suite() {
    let t = Instant::now();
    let mut bad = Vec::new();

    let mut worst = 0.0f64;
    for d in 0..=30u32 {
        for step in -96..=96i64 {
            let x = ratio(step, 64);
            let exact = to_f64(&cheb_value(d, &x));
            let closed = cheb_closed_form(d, step as f64 / 64.0);
            let err = (exact - closed).abs() / closed.abs().max(1.0);
            worst = worst.max(err);
        }
    }
    if worst > CHEB_FLOAT_TOL {
        bad.push(format!("closed form error {worst:e}"));
    }

    let xs = ["1", "9/8", "3/2", "2"];
    for d in 1..=12u32 {
        for k in 1..=4u32 {
            for x in xs {
                let rep = cheb_derivative_bound_check(d, k, &q(x)).unwrap();
                if !rep.holds {
                    bad.push(format!("markov d={d} k={k} x={x}"));
                }
                if x == "1" && rep.derivative != derivative_at_one(d, k) {
                    bad.push(format!("T_{d}^({k})(1) mismatch"));
                }
            }
        }
    }

    for d in 2..=100u32 {
        let delta = ratio(1, d as i64 * d as i64);
        if !cheb_scaled_bound_check(d, &delta).unwrap().holds {
            bad.push(format!("e^5 bound d={d}"));
        }
    }

    for d in 1..=20u32 {
        let rep = cheb_derivative_bound_check(d, 1, &int(1)).unwrap();
        if rep.derivative != int(d as i64 * d as i64) || !rep.equality {
            bad.push(format!("T_{d}'(1) != d^2"));
        }
    }
    let ok = report(
        "7",
        "Chebyshev recurrence, Markov, e^5 growth, T_d'(1) = d^2",
        bad.is_empty(),
        &format!("max float error {worst:.2e}, failures {bad:?}"),
        t.elapsed(),
        30,
    );
    assert!(ok);
}

struct Fixture {
    n: usize,
    d: u32,
    fmin: &'static str,
    fmax: &'static str,
    /// `None` selects the default e^5 upper bound.
    c: Option<&'static str>,
    c_nd: &'static str,
    epsilon: &'static str,
    q: u64,
    schmudgen: u64,
    putinar: u64,
}

/// Frozen from an independent high-precision evaluation.
const FIXTURES: &[Fixture] = &[
    Fixture {
        n: 1,
        d: 3,
        fmin: "1",
        fmax: "1",
        c: Some("1"),
        c_nd: "1",
        epsilon: "1/18",
        q: 1,
        schmudgen: 14,
        putinar: 14,
    },
    Fixture {
        n: 2,
        d: 1,
        fmin: "1",
        fmax: "1",
        c: Some("1"),
        c_nd: "1",
        epsilon: "1/2",
        q: 2,
        schmudgen: 7,
        putinar: 10,
    },
    Fixture {
        n: 2,
        d: 2,
        fmin: "1",
        fmax: "2",
        c: None,
        c_nd: "1",
        epsilon: "625000000000/1484131591025767",
        q: 1646,
        schmudgen: 13,
        putinar: 3317,
    },
    Fixture {
        n: 2,
        d: 4,
        fmin: "1",
        fmax: "2",
        c: None,
        c_nd: "1",
        epsilon: "156250000000/1484131591025767",
        q: 6584,
        schmudgen: 26,
        putinar: 13193,
    },
    Fixture {
        n: 3,
        d: 2,
        fmin: "1/2",
        fmax: "3",
        c: Some("1"),
        c_nd: "5",
        epsilon: "1/48",
        q: 53,
        schmudgen: 16,
        putinar: 121,
    },
    Fixture {
        n: 5,
        d: 3,
        fmin: "1",
        fmax: "10",
        c: None,
        c_nd: "7/3",
        epsilon: "500000000000/13357184319231903",
        q: 42996,
        schmudgen: 30,
        putinar: 86074,
    },
    Fixture {
        n: 1,
        d: 1,
        fmin: "1",
        fmax: "100",
        c: Some("1"),
        c_nd: "1",
        epsilon: "1/200",
        q: 1,
        schmudgen: 10,
        putinar: 15,
    },
    Fixture {
        n: 4,
        d: 6,
        fmin: "2",
        fmax: "9",
        c: Some("3"),
        c_nd: "40",
        epsilon: "1/972",
        q: 1348,
        schmudgen: 54,
        putinar: 2749,
    },
    Fixture {
        n: 10,
        d: 2,
        fmin: "1/3",
        fmax: "1",
        c: None,
        c_nd: "1",
        epsilon: "1250000000000/4452394773077301",
        q: 8202,
        schmudgen: 29,
        putinar: 16434,
    },
    Fixture {
        n: 7,
        d: 5,
        fmin: "3/4",
        fmax: "21/4",
        c: Some("2"),
        c_nd: "1000",
        epsilon: "1/700",
        q: 1363,
        schmudgen: 84,
        putinar: 2892,
    },
];

fn fixture_inputs(f: &Fixture) -> BoundInputs {
    BoundInputs::new(f.n, f.d, q(f.fmin), q(f.fmax))
        .with_c_frak(f.c.map(q).unwrap_or_else(e5_upper))
        .with_c_nd(q(f.c_nd))
}

#[test]
fn bound_formulas() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (idx, f) in FIXTURES.iter().enumerate() {
        let inputs = fixture_inputs(f);
        let ratio_q = inputs.ratio();
        let c = inputs.c_frak.clone();
        let d_sq = int(f.d as i64 * f.d as i64);

        let eps = epsilon_bound(&inputs).unwrap();
        if eps != q(f.epsilon) {
            bad.push(format!("#{idx} epsilon {eps}"));
        }

        let qr = choose_q(&inputs).unwrap();
        let need = int(4) * &c * &d_sq * &ratio_q * &qr.ln_n.hi;
        let q2 = int(2 * qr.q as i64);
        let minimal = qr.q == 1 || int(2 * (qr.q as i64 - 1)) < need;
        let ln_ok = to_f64(&qr.ln_n.lo) <= (f.n as f64).ln() + 1e-12
            && (f.n as f64).ln() <= to_f64(&qr.ln_n.hi) + 1e-12;
        if qr.q != f.q || q2 < need || !minimal || !ln_ok {
            bad.push(format!("#{idx} q {}", qr.q));
        }

        let sr = schmudgen_degree(&inputs).unwrap();
        let r = int(sr.r as i64);
        let pi_hi = &sr.pi.hi;
        let branch1 = |r: &Rational| r * r >= &q(f.c_nd) * &ratio_q;
        let branch2 = |r: &Rational| r * r >= pi_hi * pi_hi * int(2 * f.n as i64) * &d_sq;
        let below = int(sr.r as i64 - 1);
        if sr.r != f.schmudgen || !branch1(&r) || !branch2(&r) || (branch1(&below) && branch2(&below)) {
            bad.push(format!("#{idx} schmudgen {}", sr.r));
        }

        let pr = putinar_degree(&inputs).unwrap();
        let rp = int(pr.r as i64);
        if pr.r != f.putinar
            || rp < pr.total.hi
            || int(pr.r as i64 - 1) >= pr.total.hi
            || pr.certificate_degree != pr.r * f.n as u64
        {
            bad.push(format!("#{idx} putinar {}", pr.r));
        }
    }
    let ok = report(
        "8",
        "epsilon, q, Schmudgen and Putinar degrees on pinned inputs",
        bad.is_empty(),
        &format!("{} fixtures, failures {bad:?}", FIXTURES.len()),
        t.elapsed(),
        5,
    );
    assert!(ok);
}

fn exclusion_scan() -> Vec<(u32, u64, f64)> {
    (1..=12u32)
        .map(|k| {
            let eps = pow(&ratio(1, 4), k);
            let r0 = lower_bound_excluded_degree(&eps).unwrap().excluded_degree;
            (k, r0, r0 as f64 * 4f64.powi(-(k as i32)).powf(0.125))
        })
        .collect()
}

#[test]
fn lower_bound_scan_is_monotone() {
    let t = Instant::now();
    let scan = exclusion_scan();
    let monotone = scan.windows(2).all(|w| w[1].1 >= w[0].1);
    let r0: Vec<u64> = scan.iter().map(|s| s.1).collect();
    let ok = report(
        "9a",
        "excluded degree nonincreasing in eps = 4^-k, k = 1..12",
        monotone,
        &format!("r0 = {r0:?}"),
        t.elapsed(),
        30,
    );
    assert!(ok);
}

#[test]
fn lower_bound_scan_trend_floor() {
    let t = Instant::now();
    let scan = exclusion_scan();
    let min = scan.iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
    let products: Vec<String> = scan.iter().map(|s| format!("{:.2}", s.2)).collect();
    let ok = report(
        "9b",
        "r0(eps) * eps^(1/8) >= 1/4 on eps = 4^-k, k = 1..12",
        min >= TREND_FLOOR,
        &format!("min {min:.3}, products {products:?}"),
        t.elapsed(),
        30,
    );
    assert!(ok);
}

fn suite_artifacts() -> Vec<Certificate> {
    let mut out = Vec::new();
    for q in 1..=50 {
        out.push(Certificate::QMod(cert_univariate_shift(q).unwrap().certificate));
    }
    for m in 1..=10 {
        out.push(Certificate::QMod(cert_pow2_recurrence(m).unwrap().certificate));
    }
    for n in 1..=5 {
        for q in 1..=6 {
            let params = ShiftParams::auto(n, q).unwrap();
            for i in 1..=n {
                out.push(Certificate::QMod(
                    cert_box_in_lnorm(&params, i).unwrap().certificate,
                ));
            }
            out.push(Certificate::QMod(cert_lnorm_in_cube(n, q).unwrap().certificate));
        }
    }
    for case in LIFT_BATTERY {
        let cert = battery_certificate(case);
        let params = ShiftParams::new(case.0, case.1, q(case.2)).unwrap();
        let lifted = lift_preorder_to_cube(&cert, &cert.expand(), &params).unwrap();
        out.push(Certificate::Preorder(cert));
        out.push(Certificate::QMod(lifted.certificate));
    }
    out.push(Certificate::QMod(epsilon_one_certificate()));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let cert = random_cube3_certificate(&mut rng);
        out.push(Certificate::QMod(restrict_certificate(&cert, 2).unwrap()));
        out.push(Certificate::QMod(cert));
    }
    out
}

fn polynomials_of(cert: &Certificate) -> Vec<Polynomial> {
    let mut polys: Vec<Polynomial> = cert.gens().generators().to_vec();
    polys.push(cert.expand());
    let sigmas: Vec<&SosExpression> = match cert {
        Certificate::QMod(c) => c.sigma().iter().collect(),
        Certificate::Preorder(c) => c.sigma().values().collect(),
    };
    for s in sigmas {
        polys.extend(s.terms().iter().map(|t| t.poly.clone()));
    }
    polys
}

#[test]
fn round_trips() {
    let t0 = Instant::now();
    let artifacts = suite_artifacts();
    let built = t0.elapsed();
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut polys = 0usize;
    for (idx, cert) in artifacts.iter().enumerate() {
        let text = format::to_string(cert);
        match format::from_str(&text) {
            Ok(back) if back == *cert && format::to_string(&back) == text => {}
            _ => bad.push(format!("json #{idx}")),
        }
        for p in polynomials_of(cert) {
            polys += 1;
            if parse(&p.to_string(), p.nvars()).ok().as_ref() != Some(&p) {
                bad.push(format!("text #{idx}: {p}"));
            }
        }
    }
    let ok = report(
        "10",
        "certificate JSON and polynomial text round-trips",
        bad.is_empty(),
        &format!(
            "{} certificates, {polys} polynomials (artifacts rebuilt in {:.2}s), failures {bad:?}",
            artifacts.len(),
            built.as_secs_f64()
        ),
        t.elapsed(),
        10,
    );
    assert!(ok);
}
