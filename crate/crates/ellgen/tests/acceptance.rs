//! Acceptance criteria, one printed PASS/FAIL line each.
//!
//! The lines go straight to stderr so they appear without `--nocapture`.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use ellgen::format::{parse_diagram, serialize};
use ellgen_core::genus::{
    averaged_genus_numeric, averaged_genus_qexp, conifold_genus_residues, conifold_residue_report, default_law_samples,
    default_t_samples, first_mismatch, genus_numeric, genus_qexp, independence_scan, reference_genus_numeric,
    reference_genus_qexp, DEFAULT_SEED,
};
use ellgen_core::jacobi::{check_laws, fourier_nonnegative};
use ellgen_core::series::{QSeries, Ring};
use ellgen_core::theta::{self, theta1, theta1_qexp, theta1_sum, ComplexParams};
use ellgen_core::toric::{balanced_pairing, builtin, euler_characteristic, validate, BUILTIN_NAMES};
use ellgen_core::{RatFunc, SparseLaurent, ToricDiagram};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const THETA_AGREEMENT: f64 = 1e-12;
const GENUS_TOL: f64 = 1e-9;
const DEPENDENCE_FLOOR: f64 = 1e-3;
const RESIDUE_TOL: f64 = 1e-8;
const Z0_TOL: f64 = 1e-12;
const THROUGH_Q8: usize = 9;
const THROUGH_Q16: usize = 17;
const SCAN_SAMPLES: usize = 6;
const LAW_SAMPLES: usize = 3;
const RING_CASES: u32 = 1000;
const CRIT1_BUDGET: Duration = Duration::from_secs(1);
const CRIT2_BUDGET: Duration = Duration::from_secs(10);
const SUITE_BUDGET: Duration = Duration::from_secs(60);

const EVAL_TOL: f64 = theta::DEFAULT_TOL;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scan_point() -> (Complex64, Complex64) {
    (c(0.0, 2.0), c(0.3, 0.0))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn diagram(name: &str) -> Result<ToricDiagram, String> {
    builtin(name).map_err(|e| e.to_string())
}

fn chi(d: &ToricDiagram) -> Result<i64, String> {
    euler_characteristic(d).map_err(|e| e.to_string())
}

/// `theta1 / i` from the sum form: index `n` contributes `(-1)^n Yh^{2n-1}`
/// at `q^{1/8 + n(n-1)/2}`.
fn sum_form(trunc: usize) -> Vec<SparseLaurent> {
    let mut coeffs = vec![SparseLaurent::zero(); trunc];
    for n in -30i64..=30 {
        let k = (n * (n - 1) / 2) as usize;
        if k < trunc {
            let term = SparseLaurent::yh((2 * n - 1) as i32).scale(&if n % 2 == 0 { 1 } else { -1 }.into());
            coeffs[k] = &coeffs[k] + &term;
        }
    }
    coeffs
}

fn exact_equal(a: &QSeries<RatFunc>, b: &QSeries<RatFunc>, what: &str) -> Result<(), String> {
    match first_mismatch(a, b) {
        None => Ok(()),
        Some(k) => Err(format!("{what}: first mismatch at q^{k}")),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ims = [0.5, 1.0, 2.0];
    let mut worst = 0.0f64;
    for k in 0..25 {
        let im = ims[k % 3];
        let tau = c(-0.5 + 0.041 * k as f64, im);
        let z = c(-0.45 + 0.037 * k as f64, (k % 5) as f64 * 0.1 * im - 0.2 * im);
        let p = theta1(tau, z, EVAL_TOL).map_err(|e| e.to_string())?;
        let s = theta1_sum(tau, z, EVAL_TOL).map_err(|e| e.to_string())?;
        worst = worst.max((p - s).norm());
    }
    ensure(worst < THETA_AGREEMENT, || format!("grid deviation {worst:.3e}"))?;
    let exact = theta1_qexp(THROUGH_Q16).without_i();
    let oracle = sum_form(THROUGH_Q16);
    let offset = exact.offset();
    let eighth = *offset.numer() == 1 && *offset.denom() == 8;
    ensure(eighth && exact.coeffs() == &oracle[..], || {
        "product and sum expansions differ".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < CRIT1_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("max grid deviation {worst:.2e}, q^16 exact, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let d = diagram("resolved_conifold")?;
    let (tau, z) = scan_point();
    let samples = default_t_samples(&d, tau, SCAN_SAMPLES, DEFAULT_SEED);
    let rep = independence_scan(&d, tau, z, &samples, EVAL_TOL).map_err(|e| e.to_string())?;
    ensure(rep.evaluated().count() == SCAN_SAMPLES, || "a sample was skipped".into())?;
    ensure(rep.max_deviation < GENUS_TOL, || format!("spread {:.3e}", rep.max_deviation))?;
    let reference = reference_genus_numeric(2, tau, z, EVAL_TOL).map_err(|e| e.to_string())?;
    let worst = rep.evaluated().map(|v| (v - reference).norm()).fold(0.0, f64::max);
    ensure(worst < GENUS_TOL, || format!("reference deviation {worst:.3e}"))?;
    let g = genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?;
    exact_equal(&g.series, &reference_genus_qexp(2, THROUGH_Q8), "exact")?;
    let elapsed = start.elapsed();
    ensure(elapsed < CRIT2_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("spread {:.2e}, reference {worst:.2e}, exact through q^8, {elapsed:.2?}", rep.max_deviation))
}

fn criterion_3() -> Outcome {
    let d = diagram("resolved_conifold")?;
    let g = genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?;
    exact_equal(&g.series, &reference_genus_qexp(2, THROUGH_Q8), "library")?;
    let out = Command::new(env!("CARGO_BIN_EXE_ellgen"))
        .args(["check-identity", "--trunc", "8"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let passes = text.lines().filter(|l| l.starts_with("PASS ")).count();
    ensure(out.status.code() == Some(0) && passes == THROUGH_Q8, || {
        format!("cli exit {:?}, {passes} passing coefficients", out.status.code())
    })?;
    Ok("library and check-identity agree through q^8".into())
}

fn numeric_against_reference(d: &ToricDiagram, averaged: bool) -> Result<f64, String> {
    let (tau, z) = scan_point();
    let reference = reference_genus_numeric(chi(d)?, tau, z, EVAL_TOL).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (t1, t2) in default_t_samples(d, tau, SCAN_SAMPLES, DEFAULT_SEED) {
        let p = ComplexParams { tau, z, t1, t2 };
        let v = if averaged {
            averaged_genus_numeric(d, &p, EVAL_TOL)
        } else {
            genus_numeric(d, &p, EVAL_TOL)
        }
        .map_err(|e| e.to_string())?
        .value;
        worst = worst.max((v - reference).norm());
    }
    ensure(worst < GENUS_TOL, || format!("numeric deviation {worst:.3e}"))?;
    Ok(worst)
}

fn criterion_4() -> Outcome {
    let d = diagram("local_p1xp1")?;
    ensure(chi(&d)? == 4, || "chi != 4".into())?;
    let worst = numeric_against_reference(&d, false)?;
    let g = genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?;
    exact_equal(&g.series, &reference_genus_qexp(4, THROUGH_Q8), "exact")?;
    Ok(format!("numeric {worst:.2e} at {SCAN_SAMPLES} samples, exact through q^8"))
}

fn criterion_5() -> Outcome {
    let d = diagram("local_p2")?;
    ensure(chi(&d)? == 3, || "chi != 3".into())?;
    let worst = numeric_against_reference(&d, true)?;
    let g = averaged_genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?;
    exact_equal(&g.series, &reference_genus_qexp(3, THROUGH_Q8), "exact")?;
    let (tau, z) = scan_point();
    let samples = default_t_samples(&d, tau, SCAN_SAMPLES, DEFAULT_SEED);
    let rep = independence_scan(&d, tau, z, &samples, EVAL_TOL).map_err(|e| e.to_string())?;
    ensure(rep.max_deviation > DEPENDENCE_FLOOR, || {
        format!("unaveraged spread only {:.3e}", rep.max_deviation)
    })?;
    Ok(format!(
        "averaged numeric {worst:.2e}, exact through q^8, unaveraged spread {:.2e}",
        rep.max_deviation
    ))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for name in BUILTIN_NAMES {
        let d = diagram(name)?;
        let samples = default_law_samples(&d, LAW_SAMPLES, DEFAULT_SEED);
        let reports = check_laws(|p| Ok(genus_numeric(&d, p, EVAL_TOL)?.value), 3, &samples);
        ensure(reports.len() == 8 * LAW_SAMPLES, || format!("{name}: {} reports", reports.len()))?;
        for r in &reports {
            let dev = r.deviation().ok_or_else(|| format!("{name} {}: flagged", r.law))?;
            ensure(dev < GENUS_TOL, || format!("{name} {}: {dev:.3e}", r.law))?;
            worst = worst.max(dev);
        }
        let plain = genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?;
        let avg = averaged_genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?;
        ensure(fourier_nonnegative(&plain.series) && fourier_nonnegative(&avg.series), || {
            format!("{name}: negative q-power")
        })?;
    }
    Ok(format!("8 laws x {LAW_SAMPLES} samples x 3 diagrams, worst {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let tau = c(0.0, 2.0);
    let z = c(0.3, 0.0);
    let t2 = c(-0.4, 0.23);
    let ids = conifold_residue_report(tau, z, t2, -1..=1, RESIDUE_TOL).map_err(|e| e.to_string())?;
    ensure(ids.len() == 24, || format!("{} identity checks", ids.len()))?;
    let genus = conifold_genus_residues(tau, z, t2, -1..=1, -1..=1, RESIDUE_TOL).map_err(|e| e.to_string())?;
    ensure(genus.len() == 18, || format!("{} genus residues", genus.len()))?;
    let mut worst = 0.0f64;
    for r in ids.iter().chain(&genus) {
        ensure(r.passes(RESIDUE_TOL), || format!("{} m={} n={}: {:.3e}", r.label, r.m, r.n, r.deviation))?;
        worst = worst.max(r.deviation);
    }
    Ok(format!("24 identities and 18 genus residues, worst {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    for (name, expect_chi, expect_balanced) in
        [("resolved_conifold", 2, true), ("local_p2", 3, false), ("local_p1xp1", 4, true)]
    {
        let d = diagram(name)?;
        ensure(chi(&d)? == expect_chi, || format!("{name}: chi"))?;
        let paired = balanced_pairing(&d).map_err(|e| e.to_string())?.is_some();
        ensure(paired == expect_balanced, || format!("{name}: pairing {paired}"))?;
        let tau = c(0.1, 1.3);
        for (t1, t2) in default_t_samples(&d, tau, 4, DEFAULT_SEED) {
            let p = ComplexParams { tau, z: c(0.0, 0.0), t1, t2 };
            let v = genus_numeric(&d, &p, EVAL_TOL).map_err(|e| e.to_string())?.value;
            ensure((v - expect_chi as f64).norm() < Z0_TOL, || format!("{name}: z=0 gives {v}"))?;
        }
    }
    Ok("chi 2/3/4, pairings as expected, z=0 returns chi".into())
}

fn laurent() -> impl Strategy<Value = SparseLaurent> {
    prop::collection::vec(((-3i32..=3, -2i32..=2, -2i32..=2), -4i64..=4), 0..4).prop_map(|terms| {
        terms.into_iter().fold(SparseLaurent::zero(), |acc, ((y, u, v), k)| {
            &acc + &(&(&SparseLaurent::yh(y) * &SparseLaurent::uv(u, v)) * &SparseLaurent::constant(k))
        })
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent().prop_filter("nonzero", |p| !p.is_zero())).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn ring_laws<R: Ring>(a: &R, b: &R, c: &R) -> bool {
    a.plus(b) == b.plus(a)
        && a.times(b) == b.times(a)
        && a.plus(b).plus(c) == a.plus(&b.plus(c))
        && a.times(b).times(c) == a.times(&b.times(c))
        && a.times(&b.plus(c)) == a.times(b).plus(&a.times(c))
        && a.times(&R::one()) == *a
        && a.minus(a).is_zero()
}

fn criterion_9(suite_start: Instant) -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: RING_CASES, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&(laurent(), laurent(), laurent()), |(a, b, c)| {
            prop_assert!(ring_laws(&a, &b, &c));
            Ok(())
        })
        .map_err(|e| format!("Laurent ring laws: {e}"))?;
    runner
        .run(&(ratfunc(), ratfunc(), ratfunc()), |(a, b, c)| {
            prop_assert!(ring_laws(&a, &b, &c));
            Ok(())
        })
        .map_err(|e| format!("RatFunc ring laws: {e}"))?;

    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let p = ComplexParams { tau: c(0.1, 1.2), z: c(0.2, 0.1), t1: c(0.13, 0.07), t2: c(-0.31, 0.2) };
    for name in BUILTIN_NAMES {
        let d = diagram(name)?;
        let text = serialize(&d);
        ensure(parse_diagram(&text).map_err(|e| e.to_string())? == d, || format!("{name}: round trip"))?;
        let base = genus_numeric(&d, &p, EVAL_TOL).map_err(|e| e.to_string())?.value;
        let exact = genus_qexp(&d, THROUGH_Q8).map_err(|e| e.to_string())?.series;
        ensure(exact.coeffs().iter().all(|c| c.has_odd_yh_parity()), || format!("{name}: Yh parity"))?;
        for (k, perm) in perms.iter().enumerate() {
            let mut moved = d.clone();
            for i in 0..d.trivalent().len() {
                moved = moved.with_permuted_slots(i, perms[(k + i) % 6]);
            }
            let moved = moved.relabeled(|s| format!("{s}_{k}")).map_err(|e| e.to_string())?;
            ensure(validate(&moved).is_empty(), || format!("{name}: permuted diagram invalid"))?;
            let v = genus_numeric(&moved, &p, EVAL_TOL).map_err(|e| e.to_string())?.value;
            ensure((v - base).norm() < 1e-12, || format!("{name}: perm {perm:?} changed value"))?;
        }
    }
    let elapsed = suite_start.elapsed();
    ensure(elapsed < SUITE_BUDGET, || format!("acceptance run took {elapsed:?}"))?;
    Ok(format!("{RING_CASES} ring-law cases per carrier, round trip, invariance, parity; acceptance run {elapsed:.2?}"))
}

#[test]
fn acceptance() {
    let suite_start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("1 theta backend agreement", Box::new(criterion_1)),
        ("2 conifold theorem", Box::new(criterion_2)),
        ("3 theta identity", Box::new(criterion_3)),
        ("4 balanced theorem", Box::new(criterion_4)),
        ("5 averaged theorem", Box::new(criterion_5)),
        ("6 weak Jacobi laws", Box::new(criterion_6)),
        ("7 residue ledger", Box::new(criterion_7)),
        ("8 structural", Box::new(criterion_8)),
        ("9 property suites", Box::new(move || criterion_9(suite_start))),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (label, run) in &criteria {
        let line = match run() {
            Ok(detail) => format!("PASS criterion {label}: {detail}"),
            Err(why) => {
                failed.push(*label);
                format!("FAIL criterion {label}: {why}")
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
