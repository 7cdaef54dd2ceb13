//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hsconvex::classes::SInterval;
use hsconvex::{
    beta, builtin_f, builtin_h, chain_check, check_membership, evaluate_theorem,
    find_valid_s_range, integral_mean, mean, p_log_mean, proposition_check, random_subintervals,
    sweep, to_json, ClassKind, ClassSpec, Envelope, FName, HName, InequalityReport, Interval,
    MeanKind, PropositionId, RealFunction, Result, SearchConfig, SweepSpec, TheoremId,
    TheoremInput,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COEFF_TOL: f64 = 1e-9;
const BETA_TOL: f64 = 1e-8;
const COLLAPSE_TOL: f64 = 1e-10;
const EQUALITY_TOL: f64 = 1e-9;
const MIN_CONVEX_DEFECT: f64 = 0.058;
const WITNESS_RADIUS: f64 = 1e-2;
/// Upper end of the valid s-range for ln on [2, 4], h(t) = t, from an
/// exhaustive 201^3 grid scan bisected in s.
const FROZEN_S_BOUNDARY: f64 = 0.92023;
const S_BOUNDARY_TOL: f64 = 2e-3;
const MIN_SOUND_TUPLES: usize = 500;
const CHAIN_PAIRS: usize = 1000;
const LN_IDENTRIC_PAIRS: usize = 100;
const LN_IDENTRIC_TOL: f64 = 1e-8;
const MONOTONE_PAIRS: usize = 100;
const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).expect("valid interval")
}

fn identity() -> RealFunction {
    builtin_h(HName::Identity)
}

fn term(r: &InequalityReport, label: &str) -> f64 {
    r.value(label)
        .unwrap_or_else(|| panic!("{} report lacks {label}", r.theorem))
}

fn coefficient_reproduction() -> Result<Outcome> {
    let unit = iv(0.0, 1.0);
    let sq = builtin_f(FName::Square, unit)?;
    let mut worst: f64 = 0.0;
    let upper = evaluate_theorem(
        TheoremId::HsUpper,
        &TheoremInput::new(sq.clone(), unit).h(identity()).s(1.0),
    )?;
    for label in ["int_hs_t", "int_hs_1mt"] {
        worst = worst.max((term(&upper, label) - 0.5).abs());
    }
    let product = evaluate_theorem(
        TheoremId::HsProduct,
        &TheoremInput::new(sq.clone(), unit)
            .g(sq.clone())
            .h(identity())
            .s(1.0),
    )?;
    for (label, want) in [
        ("int_h2s_t", 1.0 / 3.0),
        ("int_h2s_1mt", 1.0 / 3.0),
        ("int_cross", 1.0 / 6.0),
    ] {
        worst = worst.max((term(&product, label) - want).abs());
    }
    let mut worst_beta: f64 = 0.0;
    for k in 1..=10 {
        let s = k as f64 / 10.0;
        let r = evaluate_theorem(
            TheoremId::HsProduct,
            &TheoremInput::new(sq.clone(), unit)
                .g(sq.clone())
                .h(identity())
                .s(s),
        )?;
        worst_beta = worst_beta.max((term(&r, "int_cross") - beta(s + 1.0, s + 1.0)?).abs());
    }
    outcome(
        worst <= COEFF_TOL && worst_beta <= BETA_TOL,
        format!("max coefficient error {worst:.1e}, max beta error {worst_beta:.1e}"),
    )
}

fn specialization_collapse() -> Result<Outcome> {
    let unit = iv(0.0, 1.0);
    let fs = [FName::Square, FName::Power(1.5), FName::Exp];
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut check = |x: f64, y: f64| {
        worst = worst.max((x - y).abs());
        compared += 1;
    };
    for name in fs {
        let f = builtin_f(name, unit)?;
        let base = || TheoremInput::new(f.clone(), unit);
        let hh = evaluate_theorem(TheoremId::HhClassic, &base())?;
        let bullen = evaluate_theorem(TheoremId::Bullen, &base())?;
        for s in [0.25, 0.5, 1.0] {
            let sandwich = evaluate_theorem(TheoremId::HsSandwich, &base().h(identity()).s(s))?;
            let classic = evaluate_theorem(TheoremId::SConvexHadamard, &base().s(s))?;
            for label in ["left", "middle", "right"] {
                check(term(&sandwich, label), term(&classic, label));
            }
            if s == 1.0 {
                let upper = evaluate_theorem(TheoremId::HsUpper, &base().h(identity()).s(s))?;
                check(term(&upper, "middle"), term(&hh, "middle"));
                check(term(&upper, "right"), term(&hh, "right"));
                // the Bullen form carries both sides doubled
                let hb = evaluate_theorem(TheoremId::HsBullen, &base().h(identity()).s(s))?;
                check(2.0 * term(&hb, "middle"), term(&bullen, "middle"));
                check(2.0 * term(&hb, "right"), term(&bullen, "right"));
            }
        }
    }
    outcome(
        worst <= COLLAPSE_TOL,
        format!("{compared} term pairs, max difference {worst:.1e}"),
    )
}

fn equality_witnesses() -> Result<Outcome> {
    let unit = iv(0.0, 1.0);
    let x = builtin_f(FName::Identity, unit)?;
    let product = evaluate_theorem(
        TheoremId::HsProduct,
        &TheoremInput::new(x.clone(), unit).g(x).h(identity()).s(1.0),
    )?;
    let (lhs, rhs) = (term(&product, "middle"), term(&product, "right"));
    let root = builtin_f(FName::Power(0.5), unit)?;
    let sc = evaluate_theorem(
        TheoremId::SConvexHadamard,
        &TheoremInput::new(root, unit).s(0.5),
    )?;
    let (mid, right) = (term(&sc, "middle"), term(&sc, "right"));
    let third = 1.0 / 3.0;
    let two_thirds = 2.0 / 3.0;
    let pass = (lhs - third).abs() <= EQUALITY_TOL
        && (rhs - third).abs() <= EQUALITY_TOL
        && (mid - two_thirds).abs() <= EQUALITY_TOL
        && (right - two_thirds).abs() <= EQUALITY_TOL
        && product.holds
        && sc.holds;
    outcome(
        pass,
        format!("product {lhs:.12} vs {rhs:.12}; s-convex right {mid:.12} vs {right:.12}"),
    )
}

fn example_reproduction() -> Result<Outcome> {
    let domain = iv(2.0, 4.0);
    let ln = builtin_f(FName::Ln, domain)?;
    let verdict = check_membership(&ClassSpec::convex(), &ln, domain, &SearchConfig::default())?;
    let Some(w) = verdict.witness else {
        return outcome(false, "ln reported convex on [2, 4]");
    };
    let dist = (w.x - 2.0)
        .abs()
        .max((w.y - 4.0).abs())
        .max((w.t - 0.5).abs());
    let range = find_valid_s_range(
        ClassKind::HsSecond,
        Some(&identity()),
        &ln,
        domain,
        &SearchConfig::default(),
    )?;
    let covers = |s: f64, r: &SInterval| r.lo <= s && s <= r.hi;
    let excludes_one = !range.intervals.iter().any(|r| covers(1.0, r));
    let has_low_s = range.intervals.iter().any(|r| r.lo < 1.0);
    let boundary = range
        .intervals
        .iter()
        .map(|r| r.hi)
        .fold(f64::NAN, f64::max);
    let boundary_ok = (boundary - FROZEN_S_BOUNDARY).abs() <= S_BOUNDARY_TOL;
    let pass = w.defect >= MIN_CONVEX_DEFECT
        && dist <= WITNESS_RADIUS
        && excludes_one
        && has_low_s
        && boundary_ok;
    outcome(
        pass,
        format!(
            "witness ({:.4}, {:.4}, {:.4}) defect {:.4}, {:.3} from (2, 4, 0.5) [limit {WITNESS_RADIUS}]; \
             s-range {:?}, upper end {boundary:.4} vs frozen {FROZEN_S_BOUNDARY}",
            w.x,
            w.y,
            w.t,
            w.defect,
            dist,
            range.intervals.iter().map(|r| (r.lo, r.hi)).collect::<Vec<_>>()
        ),
    )
}

fn random_catalog_f(rng: &mut ChaCha8Rng, domain: Interval) -> Result<RealFunction> {
    let name = match rng.random_range(0..3) {
        0 => FName::Square,
        1 => FName::Power(rng.random_range(1.0..3.0)),
        _ => FName::Exp,
    };
    builtin_f(name, domain)
}

fn hypothesis_soundness() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let outer = iv(0.0, 4.0);
    let mut established = 0;
    let mut attempted = 0;
    let mut counterexamples = Vec::new();
    while established < MIN_SOUND_TUPLES && attempted < 4 * MIN_SOUND_TUPLES {
        let theorem = TheoremId::ALL[attempted % TheoremId::ALL.len()];
        attempted += 1;
        let domain = random_subintervals(outer, 1, rng.random())[0];
        let f = random_catalog_f(&mut rng, domain)?;
        let h = if rng.random_bool(0.5) {
            identity()
        } else {
            builtin_h(HName::One)
        };
        let s = [0.25, 0.5, 0.75, 1.0][rng.random_range(0..4)];
        let mut input = TheoremInput::new(f, domain).check_hypothesis(SearchConfig::default());
        if theorem.uses_g() {
            input.g = Some(random_catalog_f(&mut rng, domain)?);
        }
        if theorem.uses_h() {
            input.h = Some(h);
        }
        if theorem.uses_s() {
            input.s = Some(s);
        }
        let report = evaluate_theorem(theorem, &input)?;
        if report.hypothesis.as_ref().is_some_and(|h| h.established) {
            established += 1;
            if !report.holds {
                counterexamples.push(format!(
                    "{theorem} f={} on [{}, {}]",
                    report.f,
                    domain.a(),
                    domain.b()
                ));
            }
        }
    }
    outcome(
        established >= MIN_SOUND_TUPLES && counterexamples.is_empty(),
        format!(
            "{established} tuples with established hypothesis out of {attempted}, {} counterexamples {:?}",
            counterexamples.len(),
            counterexamples.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn means_suite() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut chain_failures = 0;
    for _ in 0..CHAIN_PAIRS {
        let (a, b) = (rng.random_range(0.1..100.0), rng.random_range(0.1..100.0));
        if !chain_check(a, b)?.holds {
            chain_failures += 1;
        }
    }
    let mut worst_ln: f64 = 0.0;
    let mut pairs = 0;
    while pairs < LN_IDENTRIC_PAIRS {
        let (a, b): (f64, f64) = (rng.random_range(2.0..50.0), rng.random_range(2.0..50.0));
        if a == b {
            continue;
        }
        pairs += 1;
        let domain = iv(a.min(b), a.max(b));
        let q = integral_mean(&builtin_f(FName::Ln, domain)?, domain, 1e-12)?;
        worst_ln = worst_ln.max((mean(MeanKind::Identric, a, b)?.ln() - q.value).abs());
    }
    let mut monotone_failures = 0;
    for _ in 0..MONOTONE_PAIRS {
        let (a, b) = (rng.random_range(0.1..100.0), rng.random_range(0.1..100.0));
        let values: Vec<f64> = (-5..=5)
            .map(|p| p_log_mean(a, b, p as f64))
            .collect::<Result<_>>()?;
        if values.windows(2).any(|w| w[1] < w[0] * (1.0 - 1e-14)) {
            monotone_failures += 1;
        }
    }
    outcome(
        chain_failures == 0 && worst_ln <= LN_IDENTRIC_TOL && monotone_failures == 0,
        format!(
            "chain failures {chain_failures}/{CHAIN_PAIRS}, max |ln I - mean ln| {worst_ln:.1e}, \
             monotonicity failures {monotone_failures}/{MONOTONE_PAIRS}"
        ),
    )
}

fn proposition_audit() -> Result<Outcome> {
    let id = PropositionId::new(1)?;
    let r = proposition_check(id, 3.0, 5.0, 1.0, &SearchConfig::default())?;
    let pass = !r.holds_as_printed && r.hypothesis_established == Some(false);
    outcome(
        pass,
        format!(
            "ln I(3, 5) = {:.6} vs printed bound {:.6}: {}; hypothesis {}",
            r.middle,
            r.right_printed,
            if r.holds_as_printed { "holds" } else { "fails" },
            match r.hypothesis_established {
                Some(true) => "established",
                Some(false) => "not established",
                None => "not checked",
            }
        ),
    )
}

fn full_sweep_json() -> Result<String> {
    let mut spec = SweepSpec::new("square");
    spec.g = Some("exp".to_owned());
    spec.h = Some("identity".to_owned());
    spec.s_values = vec![0.25, 0.5, 0.75, 1.0];
    spec.intervals = random_subintervals(iv(0.0, 4.0), 8, SEED);
    spec.check_hypothesis = true;
    spec.search = SearchConfig::with_grid(21);
    let reports = sweep(&spec)?;
    Ok(to_json(&Envelope::new(&spec, SEED, reports)).expect("serializable"))
}

fn determinism() -> Result<Outcome> {
    let first = full_sweep_json()?;
    let second = full_sweep_json()?;
    outcome(
        first == second,
        format!(
            "{} bytes per run, identical: {}",
            first.len(),
            first == second
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "coefficient reproduction",
            Duration::from_secs(1),
            coefficient_reproduction,
        ),
        (
            "specialization collapse",
            Duration::from_secs(5),
            specialization_collapse,
        ),
        (
            "equality witnesses",
            Duration::from_secs(1),
            equality_witnesses,
        ),
        (
            "example reproduction",
            Duration::from_secs(30),
            example_reproduction,
        ),
        (
            "hypothesis-conditional soundness",
            Duration::from_secs(120),
            hypothesis_soundness,
        ),
        ("means suite", Duration::from_secs(10), means_suite),
        (
            "proposition audit",
            Duration::from_secs(5),
            proposition_audit,
        ),
        ("determinism", Duration::MAX, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed < limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget = if limit == Duration::MAX {
            String::new()
        } else {
            format!(" / {:.0} s", limit.as_secs_f64())
        };
        println!(
            "[{}] {}. {name} ({:.2} s{budget}): {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
