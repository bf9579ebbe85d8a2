//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (run with `--nocapture` to see them) and then asserts.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use twsolve_core::algebraic::{strictly_within, BinetData, LazyReal, PrecisionPolicy, RealEnclosure};
use twsolve_core::linear_forms::{family_bound, resolve_n_bound};
use twsolve_core::pipeline::{run_all, PipelineReport, RunConfig};
use twsolve_core::reduction::{partial_quotients, Method};
use twsolve_core::search::{decompose, verify_no_solutions_between, EquationFamily, Form, Kind};
use twsolve_core::sequences::{
    check_binet_error, check_growth_bounds, term, terms_up_to, SequenceId, NARAYANA, PADOVAN, PERRIN,
};

fn verdict(criterion: u32, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {detail}");
}

fn reports() -> &'static (Vec<PipelineReport>, Duration) {
    static CELL: OnceLock<(Vec<PipelineReport>, Duration)> = OnceLock::new();
    CELL.get_or_init(|| {
        let t = Instant::now();
        let r = run_all(&RunConfig::new(2, 10)).expect("pipeline runs");
        (r, t.elapsed())
    })
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_string().parse().unwrap()
}

#[test]
fn criterion_1_sequence_prefixes() {
    let t = Instant::now();
    let listings: [(SequenceId, &[i64]); 3] = [
        (
            SequenceId::Padovan,
            &[1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12, 16, 21, 28, 37, 49, 65, 86, 114, 151, 200],
        ),
        (
            SequenceId::Perrin,
            &[3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17, 22, 29, 39, 51, 68, 90, 119, 158, 209, 277],
        ),
        // The published Narayana listing stops at N_19; N_20 = N_19 + N_17 = 872 + 406.
        (
            SequenceId::Narayana,
            &[1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189, 277, 406, 595, 872, 1278],
        ),
    ];
    let mut ok = true;
    for (seq, expect) in listings {
        let got = terms_up_to(seq.spec(), 20);
        let expect: Vec<BigInt> = expect.iter().map(|&x| BigInt::from(x)).collect();
        ok &= got == expect;
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    verdict(1, ok, &format!("21-term prefixes of P, E, N exact in {elapsed:?}"));
    assert!(ok);
}

#[test]
fn criterion_2_solution_tables() {
    let (reports, elapsed) = reports();
    let mut mismatches = Vec::new();
    let mut total = 0;
    for r in reports {
        let check = r.check_paper();
        total += r.solutions().len();
        if !check.matches() || !check.covered {
            mismatches.push(format!("{}: missing {:?} extra {:?}", check.family, check.missing, check.extra));
        }
    }
    let ok = reports.len() == 12 && mismatches.is_empty() && *elapsed < Duration::from_secs(60);
    verdict(
        2,
        ok,
        &format!(
            "12 lists reproduced exactly ({total} triples; the tables list 53, not 41) in {elapsed:?} {}",
            mismatches.join("; ")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_3_enclosure_constants() {
    let pad = BinetData::compute(&PADOVAN, 192).unwrap();
    let per = BinetData::compute(&PERRIN, 192).unwrap();
    let nar = BinetData::compute(&NARAYANA, 192).unwrap();
    let checks = [
        ("alpha", &pad.root, "1.32", "1.33"),
        ("|beta|", &pad.conj_modulus, "0.86", "0.87"),
        ("p", &pad.coeff, "0.72", "0.73"),
        ("|q|", &pad.coeff_conj_modulus, "0.24", "0.25"),
        ("phi", &nar.root, "1.46", "1.47"),
        ("|lambda|", &nar.conj_modulus, "0.82", "0.83"),
        ("C_phi", &nar.coeff, "0.41", "0.42"),
        ("|C_lambda|", &nar.coeff_conj_modulus, "0.27", "0.28"),
    ];
    let mut failed: Vec<&str> = checks
        .iter()
        .filter(|(_, x, lo, hi)| !strictly_within(x, lo, hi))
        .map(|(name, ..)| *name)
        .collect();
    // |beta| = alpha^{-1/2}: |beta|^2 * alpha = 1 must be enclosed.
    let prod = &pad.conj_modulus.square() * &pad.root;
    if !prod.contains(&BigRational::from_integer(1.into())) {
        failed.push("|beta|^2 alpha = 1");
    }
    if per.root != pad.root {
        failed.push("Perrin root");
    }
    let ok = failed.is_empty();
    verdict(3, ok, &format!("eight constants certified inside their intervals {failed:?}"));
    assert!(ok);
}

#[test]
fn criterion_4_matveev_bounds() {
    let (reports, _) = reports();
    let mut lines = Vec::new();
    let mut ok = true;
    for (seq, paper) in [
        (SequenceId::Padovan, 1.82e16),
        (SequenceId::Perrin, 1.34e16),
        (SequenceId::Narayana, 1.85e16),
    ] {
        for form in [Form::Thabit, Form::Williams] {
            for kind in [Kind::First, Kind::Second] {
                let f = EquationFamily::new(seq, form, kind);
                let max = (2..=10).map(|b| family_bound(f, b).unwrap()).max().unwrap();
                let rel = to_f64(&max) / paper - 1.0;
                ok &= rel.abs() <= 0.05;
                let report = reports.iter().find(|r| r.equation_family == f).unwrap();
                ok &= report.per_b.iter().all(|rec| rec.matveev_bound <= max && rec.family_bound <= max);
                if form == Form::Thabit && kind == Kind::First {
                    lines.push(format!("{seq} {max} ({:+.2}%)", rel * 100.0));
                }
            }
        }
    }
    verdict(4, ok, &format!("maxima within 5%: {}", lines.join(", ")));
    assert!(ok);
}

#[test]
fn criterion_5_reduction() {
    let (reports, _) = reports();
    let mut ok = true;
    let mut notes = Vec::new();
    for r in reports {
        let f = r.equation_family;
        let (paper_bound, paper_index, cutoff) = match f.sequence {
            SequenceId::Padovan => (212, 44, 300),
            SequenceId::Perrin => (219, 43, 350),
            SequenceId::Narayana => (169, 44, 400),
        };
        // The published index is one convergent used for every base; ours is
        // chosen per base, so the comparable figure is the largest of them.
        let mut bd_max_index = 0;
        for rec in &r.per_b {
            let Some(red) = &rec.reduction else {
                ok = false;
                notes.push(format!("{f} b={} failed: {:?}", rec.b, rec.reduction_error));
                continue;
            };
            ok &= red.new_bound < cutoff;
            match red.method {
                Method::BakerDavenport => {
                    bd_max_index = bd_max_index.max(red.convergent_index);
                    ok &= red.new_bound <= paper_bound + 10;
                }
                Method::Legendre => {
                    let legendre_case = f.sequence == SequenceId::Perrin && f.form() == Form::Williams && rec.b == 2;
                    ok &= legendre_case;
                    ok &= red.new_bound <= 159 + 10;
                    ok &= red.a_max == Some(BigInt::from(80));
                    ok &= red.convergent_index.abs_diff(43) <= 2;
                    notes.push(format!(
                        "{f} b=2 legendre a(M)={} N={} bound {}",
                        red.a_max.as_ref().unwrap(),
                        red.convergent_index,
                        red.new_bound
                    ));
                }
            }
        }
        ok &= bd_max_index.abs_diff(paper_index) <= 2;
        let worst = r.per_b.iter().filter_map(|x| x.reduction.as_ref()).map(|x| x.new_bound).max().unwrap_or(0);
        notes.push(format!("{f} max bound {worst} max index {bd_max_index}"));
    }
    verdict(5, ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_6_continued_fraction() {
    let tau = LazyReal::new("log 2 / log alpha", |p| {
        let alpha = twsolve_core::algebraic::dominant_root(&PADOVAN.char_poly(), p)?;
        RealEnclosure::from_integer(2, p).ln()?.checked_div(&alpha.ln()?)
    });
    let cf = partial_quotients(tau, 26, PrecisionPolicy::default()).unwrap();
    let expect: Vec<BigInt> = [2, 2, 6, 1, 1, 1, 2, 1, 13, 3, 1, 1, 1, 1, 1, 8, 1, 3, 2, 2, 7, 1, 2, 5, 1, 2]
        .iter()
        .map(|&x| BigInt::from(x))
        .collect();
    let ok = cf.quotients()[..26] == expect[..];
    verdict(6, ok, &format!("first 26 quotients {:?}", &cf.quotients()[..26]));
    assert!(ok);
}

#[test]
fn criterion_7_property_suites() {
    let policy = PrecisionPolicy::default();
    let mut parts = Vec::new();
    let mut ok = true;

    for spec in [&PADOVAN, &PERRIN, &NARAYANA] {
        let root = BinetData::compute(spec, 192).unwrap().root;
        let growth = check_growth_bounds(spec, 1000, &root, &policy).unwrap();
        let bad: Vec<u64> = growth.failures().iter().map(|c| c.n).collect();
        ok &= bad.is_empty();
        parts.push(format!("growth {}: {}", spec.id, if bad.is_empty() { "ok".into() } else { format!("fails at n={bad:?}") }));

        // As published: T_n - coeff * root^n, with no index shift.
        let literal = BinetData::compute_with_shift(spec, 192, 0).unwrap();
        let binet = check_binet_error(spec, 1000, &literal, &policy).unwrap();
        let bad = binet.failures();
        ok &= bad.is_empty();
        let summary = match bad.as_slice() {
            [] => "ok".to_string(),
            [first, ..] => format!("fails for {} values of n from n={first}", bad.len()),
        };
        parts.push(format!("binet {}: {summary}", spec.id));
        if spec.binet_index_shift != 0 {
            let shifted = BinetData::compute(spec, 192).unwrap();
            let fixed = check_binet_error(spec, 1000, &shifted, &policy).unwrap();
            let holds = fixed.all_passed();
            parts.push(format!(
                "binet {} with root^(n+{}): {}",
                spec.id,
                spec.binet_index_shift,
                if holds { "ok" } else { "fails" }
            ));
        }
    }

    // Determinant identity on every computed convergent of each reduction tau.
    let mut det_ok = true;
    for b in 2..=10u64 {
        for seq in SequenceId::ALL {
            let s = twsolve_core::linear_forms::reduction_setup(EquationFamily::new(seq, Form::Thabit, Kind::First), b, 192)
                .unwrap();
            let cf = partial_quotients(s.tau, 60, policy).unwrap();
            let (p, q) = (cf.numerators(), cf.denominators());
            for k in 1..p.len() {
                let det = &p[k] * &q[k - 1] - &p[k - 1] * &q[k];
                det_ok &= det == BigInt::from(if k % 2 == 1 { 1 } else { -1 });
            }
        }
    }
    ok &= det_ok;
    parts.push(format!("determinant identity: {}", if det_ok { "ok" } else { "fails" }));

    // decompose against brute force on n <= 400, b <= 10, all families.
    let mut oracle_ok = true;
    for f in EquationFamily::all() {
        let terms = terms_up_to(f.sequence.spec(), 400);
        for b in 2..=10u64 {
            for (n, value) in terms.iter().enumerate() {
                let mut brute = None;
                let mut l = 1u32;
                loop {
                    let v = f.value(b, l);
                    if &v == value {
                        brute = Some(l);
                    }
                    if &v >= value {
                        break;
                    }
                    l += 1;
                }
                if decompose(value, b, f.base_sign, f.tail_sign) != brute {
                    oracle_ok = false;
                    eprintln!("decompose mismatch {f} n={n} b={b}");
                }
            }
        }
    }
    ok &= oracle_ok;
    parts.push(format!("decompose oracle: {}", if oracle_ok { "ok" } else { "fails" }));

    // resolve_n_bound on 100 random S in [16, 1e20].
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let resolve = runner.run(&(16f64..1e20), |s| {
        let s_enc = RealEnclosure::exact(BigRational::from_float(s).unwrap(), 192);
        let x = RealEnclosure::from_integer(resolve_n_bound(&s_enc).unwrap(), 192);
        let ratio = x.checked_div(&x.ln().unwrap()).unwrap();
        prop_assert!(ratio.lo() >= s_enc.hi());
        Ok(())
    });
    ok &= resolve.is_ok();
    parts.push(format!("resolve_n_bound: {}", if resolve.is_ok() { "ok" } else { "fails" }));

    verdict(7, ok, &parts.join("; "));
    assert!(ok, "see decisions ledger: the published growth and Binet statements are false as written");
}

#[test]
fn criterion_8_gap_soundness() {
    let (reports, _) = reports();
    let mut ok = true;
    let mut checked = 0u64;
    for r in reports {
        for rec in &r.per_b {
            let Some(red) = &rec.reduction else {
                ok = false;
                continue;
            };
            let cutoff = match r.equation_family.sequence {
                SequenceId::Padovan => 300,
                SequenceId::Perrin => 350,
                SequenceId::Narayana => 400,
            };
            let cert = verify_no_solutions_between(r.equation_family, rec.b, rec.b, red.new_bound, cutoff).unwrap();
            ok &= cert.is_empty() && rec.gap_verified;
            checked += cert.pairs_checked;
            for s in &cert.counterexamples {
                assert_eq!(s.value, term(r.equation_family.sequence.spec(), s.n));
            }
        }
    }
    verdict(8, ok, &format!("no solutions between reduced bound and cutoff ({checked} (n, b) pairs)"));
    assert!(ok);
}
