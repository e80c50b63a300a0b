//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p ternjump-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ternjump::count::{bound_report, closed_j, forbidden_cell_sizes};
use ternjump::families::{
    germain_triples, scan, six_m_family, verify_small_j_profile, write_rows_csv, FamilyParams,
    ScanConfig,
};
use ternjump::modular::{is_prime, mod_inverse, mul_mod, validate_triple, Triple, LABELS};
use ternjump::poly::{coefficients, jump_scan, scan_jumps, verify_indices, CoefficientStats};
use ternjump::repr::{proposition_residuals_with, CrtBasis};
use ternjump::zones::{classify, lemma_r_status, ZoneProfile};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const AGREEMENT_TRIPLES: [(i64, i64, i64); 6] = [
    (3, 5, 7),
    (3, 5, 11),
    (3, 7, 11),
    (5, 7, 11),
    (3, 11, 23),
    (7, 11, 13),
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn triple(p: i64, q: i64, r: i64) -> Triple {
    validate_triple(p, q, r, false).expect("valid triple")
}

/// All triples of distinct odd primes up to 31.
fn small_prime_triples() -> Vec<Triple> {
    let primes: Vec<i64> = (3..=31).filter(|&v| is_prime(v as u64)).collect();
    let mut out = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for (j, &q) in primes.iter().enumerate().skip(i + 1) {
            for &r in &primes[j + 1..] {
                out.push(validate_triple(p, q, r, true).expect("distinct primes"));
            }
        }
    }
    out
}

fn oracle_stats(t: &Triple) -> Result<CoefficientStats, String> {
    let ct = coefficients(t).map_err(|e| format!("{t}: {e}"))?;
    Ok(scan_jumps(&ct))
}

fn formula_equals_oracle() -> Outcome {
    let triples = small_prime_triples();
    for t in &triples {
        let j = closed_j(&ZoneProfile::new(t).map_err(|e| e.to_string())?).j;
        let ups = oracle_stats(t)?.jump_ups.len() as i64;
        ensure(j == ups, || format!("{t}: closed form {j}, oracle {ups}"))?;
    }
    let t = triple(3, 5, 7);
    let c = closed_j(&ZoneProfile::new(&t).unwrap());
    ensure(c.j == 13 && c.as_printed_j() == 3, || {
        format!(
            "(3, 5, 7): corrected {} and printed {} main terms",
            c.j,
            c.as_printed_j()
        )
    })?;
    let max_n = triples.iter().map(Triple::n).max().unwrap_or(0);
    Ok(format!(
        "{} triples (max n {max_n}); printed main term gives 3 at (3, 5, 7), oracle 13",
        triples.len()
    ))
}

fn three_way_agreement() -> Outcome {
    let mut total = 0;
    for (p, q, r) in AGREEMENT_TRIPLES {
        let t = triple(p, q, r);
        let ct = coefficients(&t).map_err(|e| e.to_string())?;
        let zp = ZoneProfile::new(&t).map_err(|e| e.to_string())?;
        let report = verify_indices(&ct, &zp, 0..t.n()).map_err(|e| e.to_string())?;
        ensure(report.all_agree() && report.checked as i64 == t.n(), || {
            format!("{t}: {:?}", report.first_mismatch)
        })?;
        total += report.checked;
    }
    Ok(format!(
        "{total} indices over {} triples, zero mismatches",
        AGREEMENT_TRIPLES.len()
    ))
}

fn flatness() -> Outcome {
    let mut triples = small_prime_triples();
    for (p, q, r) in AGREEMENT_TRIPLES {
        let t = triple(p, q, r);
        if !triples.iter().any(|s| s.moduli() == t.moduli()) {
            triples.push(t);
        }
    }
    for t in &triples {
        let ct = coefficients(t).map_err(|e| e.to_string())?;
        jump_scan(&ct).map_err(|e| format!("{t}: {e}"))?;
    }
    Ok(format!("{} triples", triples.len()))
}

fn cube_root_bounds() -> Outcome {
    let mut tightest: Option<(f64, Triple)> = None;
    for t in small_prime_triples() {
        let stats = oracle_stats(&t)?;
        let j = stats.jump_ups.len() as i64;
        let b = bound_report(&t, j, stats.theta);
        ensure(b.j_cubed_gt_n && b.theta_cubed_gt_n, || {
            format!("{t}: J={j}, theta={}, n={}", stats.theta, t.n())
        })?;
        let ratio = (j as f64).powi(3) / t.n() as f64;
        if tightest.is_none_or(|(r, _)| ratio < r) {
            tightest = Some((ratio, t));
        }
    }
    let (ratio, t) = tightest.unwrap();
    Ok(format!("smallest J^3/n is {ratio:.2} at {t}"))
}

fn known_instance() -> Outcome {
    let t = triple(3, 5, 7);
    let ct = coefficients(&t).map_err(|e| e.to_string())?;
    let stats = jump_scan(&ct).map_err(|e| e.to_string())?;
    ensure(ct.a(7) == -2, || format!("a(7) = {}", ct.a(7)))?;
    ensure(stats.height == 2, || format!("height {}", stats.height))?;
    ensure(stats.theta == 33, || format!("theta {}", stats.theta))?;
    ensure(stats.jump_ups.len() == 13, || {
        format!("J {}", stats.jump_ups.len())
    })?;
    for k in [0, 8, 10, 12] {
        ensure(stats.jump_ups.contains(&k), || {
            format!("{k} is not a jump up")
        })?;
    }
    Ok("a(7)=-2, height 2, theta 33, J 13".into())
}

fn structural_propositions() -> Outcome {
    let mut total = 0;
    for (p, q, r) in AGREEMENT_TRIPLES {
        let t = triple(p, q, r);
        let basis = CrtBasis::new(&t);
        for k in 0..t.n() {
            let checks = proposition_residuals_with(&basis, k).map_err(|e| e.to_string())?;
            ensure(checks.all_pass(), || format!("{t} k={k}: {checks:?}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} indices"))
}

fn zone_identities() -> Outcome {
    let triples = small_prime_triples();
    for t in &triples {
        let zp = ZoneProfile::new(t).map_err(|e| e.to_string())?;
        for x in LABELS {
            let m = t.modulus(x);
            let (a, b) = (zp.alpha(x), zp.beta(x));
            let s = zp.sizes(x);
            ensure(s.iter().sum::<i64>() == m, || {
                format!("{t} label {x}: not a partition")
            })?;
            ensure(s[1] == a && s[3] == a, || {
                format!("{t} label {x}: #A_1, #A_3 != alpha")
            })?;
            ensure(s[2] == b - a, || {
                format!("{t} label {x}: #A_2 != beta - alpha")
            })?;
            ensure(s[0] + s[4] == m - a - b, || {
                format!("{t} label {x}: #A_0 + #A_4")
            })?;
            let modular =
                mod_inverse(mul_mod(a, t.cofactor(x), m), m).map_err(|e| e.to_string())?;
            ensure(modular == b, || {
                format!("{t} label {x}: beta {b} vs {modular}")
            })?;
            for res in 0..m {
                let j = zp.zone_of(x, res) as usize;
                let (lo, hi) = zp.zone_bounds(x, j);
                ensure(lo <= res && res < hi, || {
                    format!("{t}: residue {res} misplaced")
                })?;
            }
        }
        ensure(forbidden_cell_sizes(&zp) == [0, 0], || {
            format!("{t}: forbidden cell nonempty")
        })?;
        let basis = CrtBasis::new(t);
        for k in 0..t.n() {
            classify(&zp, &basis.decompose(k)).map_err(|e| format!("{t} k={k}: {e}"))?;
        }
        let lemma = lemma_r_status(t).map_err(|e| format!("{t}: {e}"))?;
        ensure(matches!(lemma.count, 1 | 2), || {
            format!("{t}: lemma count {}", lemma.count)
        })?;
        for x in LABELS {
            for y in LABELS.into_iter().filter(|&y| y != x) {
                let (px, py) = (t.modulus(x), t.modulus(y));
                let lhs = py * t.inverse(y, x) + px * t.inverse(x, y);
                ensure(lhs == px * py + 1, || {
                    format!("{t}: pair identity for ({px}, {py})")
                })?;
            }
        }
    }
    Ok(format!("{} triples", triples.len()))
}

fn germain_profile() -> Outcome {
    let inst = germain_triples(11, "0.6".parse().unwrap())
        .into_iter()
        .find(|i| i.triple.moduli() == [3, 11, 23])
        .ok_or("(3, 11, 23) not generated")?;
    ensure(
        matches!(inst.params, FamilyParams::Germain { t: 4, .. }),
        || "t != 4".into(),
    )?;
    let report = verify_small_j_profile(&inst, i64::MAX).map_err(|e| e.to_string())?;
    for c in &report.checks {
        ensure(c.holds(), || {
            format!("{}: expected {}, got {}", c.name, c.expected, c.actual)
        })?;
    }
    ensure(report.j == 51 && report.j_oracle == Some(51), || {
        format!("J {} oracle {:?}", report.j, report.j_oracle)
    })?;
    ensure(report.j_below_10q, || "J >= 110".into())?;
    Ok(format!(
        "{} profile equalities, R=6 S=0 T=6, J=51 < 110",
        report.checks.len()
    ))
}

fn six_m() -> Outcome {
    let list = six_m_family(3, 20).map_err(|e| e.to_string())?;
    ensure(list.len() == 18, || format!("{} instances", list.len()))?;
    let mut worst = 0.0f64;
    for inst in &list {
        let t = &inst.triple;
        let j = closed_j(&ZoneProfile::new(t).map_err(|e| e.to_string())?).j;
        ensure((j as i128).pow(3) < 3375 * t.n() as i128, || {
            format!("{t}: J={j}")
        })?;
        let ups = oracle_stats(t)?.jump_ups.len() as i64;
        ensure(ups == j, || format!("{t}: closed form {j}, oracle {ups}"))?;
        worst = worst.max(j as f64 / (t.n() as f64).cbrt());
    }
    Ok(format!("m=3..20, largest J/n^(1/3) is {worst:.2}"))
}

fn scan_determinism() -> Outcome {
    let render = |jobs: usize| -> Result<Vec<u8>, String> {
        let mut cfg = ScanConfig::new(13);
        cfg.jobs = jobs;
        let rows = scan(&cfg).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        write_rows_csv(&rows, &mut out).map_err(|e| e.to_string())?;
        Ok(out)
    };
    let (one, eight) = (render(1)?, render(8)?);
    ensure(one == eight, || "outputs differ".into())?;
    Ok(format!("{} bytes, identical", one.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("closed form equals oracle", formula_equals_oracle),
        ("three-way per-index agreement", three_way_agreement),
        ("flatness", flatness),
        ("cube-root bounds", cube_root_bounds),
        ("known instance n=105", known_instance),
        ("structural propositions", structural_propositions),
        ("zone identities", zone_identities),
        ("Germain profile (3, 11, 23)", germain_profile),
        ("six-m family", six_m),
        ("scan determinism", scan_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
