//! Small-J constructions and the exhaustive scan harness.
//!
//! Two families keep `J` close to the `n^{1/3}` floor: Germain triples
//! `(p, q, 2q+1)` with `q = tp - 1` and `p` a large prime factor of `q + 1`,
//! and the coprime triples `(m, 6m-1, 12m-1)`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::count::{bound_report, closed_j, forbidden_cell_sizes, JumpComponents};
use crate::error::{Error, Result};
use crate::modular::{is_prime, validate_triple, Triple};
use crate::poly::{coefficients_with_limit, scan_jumps, verify_indices};
use crate::zones::{lemma_r_status, ZoneProfile};

/// A rational exponent strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Epsilon(Ratio<u64>);

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Epsilon> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::InvalidArgument(format!(
                "epsilon {num}/{den} is not in (0, 1)"
            )));
        }
        Ok(Epsilon(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `a/b` or a decimal such as `0.4`.
    fn from_str(s: &str) -> Result<Epsilon> {
        let bad = || Error::InvalidArgument(format!("cannot parse epsilon {s:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse().map_err(|_| bad())?;
            let den = b.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(num, den);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Epsilon::new(num, den)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `p > q^{1-eps}`, decided as `p^den > q^(den-num)`.
pub fn exceeds_power(p: u64, q: u64, eps: Epsilon) -> bool {
    let den = eps.denom() as u32;
    let num = eps.numer() as u32;
    BigUint::from(p).pow(den) > BigUint::from(q).pow(den - num)
}

/// `J < 10 n^{1/(3-eps)}`, decided as `J^(3b-a) < 10^(3b-a) n^b` for `eps = a/b`.
pub fn below_theorem_bound(j: i64, n: i64, eps: Epsilon) -> bool {
    if j <= 0 {
        return true;
    }
    let (a, b) = (eps.numer() as u32, eps.denom() as u32);
    let e = 3 * b - a;
    BigUint::from(j as u64).pow(e) < BigUint::from(10u32).pow(e) * BigUint::from(n as u64).pow(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyParams {
    Germain {
        p: i64,
        q: i64,
        r: i64,
        t: i64,
        epsilon: Epsilon,
        /// The small-J argument assumes `t >= 3`.
        t_warning: bool,
    },
    SixM {
        m: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictedBound {
    /// `J < 10q`.
    TenQ(i64),
    /// `J < 15 n^{1/3}`.
    FifteenCubeRoot,
}

impl PredictedBound {
    pub fn holds(&self, j: i64, n: i64) -> bool {
        match *self {
            PredictedBound::TenQ(q) => j < 10 * q,
            PredictedBound::FifteenCubeRoot => (j.max(0) as u128).pow(3) < 3375 * n as u128,
        }
    }
}

impl fmt::Display for PredictedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictedBound::TenQ(q) => write!(f, "J<{}", 10 * q),
            PredictedBound::FifteenCubeRoot => write!(f, "J^3<3375n"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub triple: Triple,
    pub params: FamilyParams,
    pub predicted_bound: PredictedBound,
}

fn odd_prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while v.is_multiple_of(2) {
        v /= 2;
    }
    let mut d = 3;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 2;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Every `(p, q, 2q+1)` with `q <= q_max` a Germain prime and `p` an odd prime
/// factor of `q + 1` exceeding `q^{1-eps}`, ordered by `q` then `p`.
pub fn germain_triples(q_max: i64, eps: Epsilon) -> Vec<FamilyInstance> {
    let mut out = Vec::new();
    for q in 3..=q_max.max(2) {
        let r = 2 * q + 1;
        if !is_prime(q as u64) || !is_prime(r as u64) {
            continue;
        }
        for p in odd_prime_factors(q as u64 + 1) {
            if !exceeds_power(p, q as u64, eps) {
                continue;
            }
            let p = p as i64;
            let t = (q + 1) / p;
            let Ok(triple) = validate_triple(p, q, r, true) else {
                continue;
            };
            out.push(FamilyInstance {
                triple,
                params: FamilyParams::Germain {
                    p,
                    q,
                    r,
                    t,
                    epsilon: eps,
                    t_warning: t < 3,
                },
                predicted_bound: PredictedBound::TenQ(q),
            });
        }
    }
    out
}

/// `(m, 6m-1, 12m-1)` for `m` in `m_from..=m_to`.
pub fn six_m_family(m_from: i64, m_to: i64) -> Result<Vec<FamilyInstance>> {
    if m_from < 3 || m_from > m_to {
        return Err(Error::InvalidArgument(format!(
            "need 3 <= m_from <= m_to, got {m_from}..{m_to}"
        )));
    }
    (m_from..=m_to)
        .map(|m| {
            Ok(FamilyInstance {
                triple: validate_triple(m, 6 * m - 1, 12 * m - 1, false)?,
                params: FamilyParams::SixM { m },
                predicted_bound: PredictedBound::FifteenCubeRoot,
            })
        })
        .collect()
}

/// One named comparison against the closed-form Germain profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileCheck {
    pub name: &'static str,
    pub expected: i64,
    pub actual: i64,
}

impl ProfileCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallJReport {
    pub checks: Vec<ProfileCheck>,
    pub j: i64,
    pub j_oracle: Option<i64>,
    pub j_below_10q: bool,
    pub j_below_theorem_bound: bool,
}

impl SmallJReport {
    pub fn profile_holds(&self) -> bool {
        self.checks.iter().all(ProfileCheck::holds)
    }

    pub fn all_pass(&self) -> bool {
        self.profile_holds()
            && self.j_below_10q
            && self.j_below_theorem_bound
            && self.j_oracle.is_none_or(|o| o == self.j)
    }
}

/// Compares a Germain instance against the profile its small-J argument uses.
/// The oracle runs when `n <= max_n`.
pub fn verify_small_j_profile(inst: &FamilyInstance, max_n: i64) -> Result<SmallJReport> {
    let FamilyParams::Germain {
        p,
        q,
        r,
        t,
        epsilon,
        ..
    } = inst.params
    else {
        return Err(Error::InvalidArgument("not a Germain instance".into()));
    };
    let tr = &inst.triple;
    if tr.moduli() != [p, q, r] || q != t * p - 1 || r != 2 * t * p - 1 {
        return Err(Error::InvalidArgument(format!(
            "{tr} is not of the form (p, tp-1, 2tp-1)"
        )));
    }
    let zp = ZoneProfile::new(tr)?;
    let c = closed_j(&zp);
    let (lp, lq, lr) = (0, 1, 2);
    let check = |name, expected, actual| ProfileCheck {
        name,
        expected,
        actual,
    };
    let checks = vec![
        check("q^-1(p)", p - 1, zp.inverse(lq, lp)),
        check("r^-1(p)", p - 1, zp.inverse(lr, lp)),
        check("r^-1(q)", 1, zp.inverse(lr, lq)),
        check("p^-1(q)", t, zp.inverse(lp, lq)),
        check("p^-1(r)", 2 * t, zp.inverse(lp, lr)),
        check("q^-1(r)", 2 * t * p - 3, zp.inverse(lq, lr)),
        check("alpha_p", 1, zp.alpha(lp)),
        check("alpha_q", 1, zp.alpha(lq)),
        check("alpha_r", 2, zp.alpha(lr)),
        check("beta_p", 1, zp.beta(lp)),
        check("beta_q", t, zp.beta(lq)),
        check("beta_r", 2 * t * p - 2 * t - 1, zp.beta(lr)),
        check("#A^p_4", 0, zp.size(lp, 4)),
        check("#A^q_0", 0, zp.size(lq, 0)),
        check("#A^r_4", 0, zp.size(lr, 4)),
        check("delta_rp", 1, zp.delta(lr, lp)),
        check("delta_pq", 1, zp.delta(lp, lq)),
        check("R", (p - 2) * (2 * t - 2), c.r),
        check("S", 0, c.s),
        check("T", (t - 1) * 2 * (p - 2), c.t),
        check(
            "main",
            (2 * t * p - 5) + 2 * (t * p - 3) + 2 * (p - 2),
            c.main,
        ),
    ];
    let j_oracle = if tr.n() <= max_n {
        Some(
            scan_jumps(&coefficients_with_limit(tr, max_n)?)
                .jump_ups
                .len() as i64,
        )
    } else {
        None
    };
    Ok(SmallJReport {
        checks,
        j: c.j,
        j_oracle,
        j_below_10q: c.j < 10 * q,
        j_below_theorem_bound: below_theorem_bound(c.j, tr.n(), epsilon),
    })
}

/// One output line of `family`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub family: &'static str,
    pub m: Option<i64>,
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub n: i64,
    pub t: Option<i64>,
    pub epsilon: Option<Epsilon>,
    pub t_warning: bool,
    #[serde(rename = "J_formula")]
    pub j_formula: i64,
    #[serde(rename = "J_oracle")]
    pub j_oracle: Option<i64>,
    pub bound: String,
    pub bound_pass: bool,
    pub profile_pass: Option<bool>,
    pub theorem_bound_pass: Option<bool>,
    pub status: String,
}

impl FamilyRow {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Closed form, oracle (when `n <= max_n`) and the family's bound for one
/// instance.
pub fn evaluate_family(inst: &FamilyInstance, max_n: i64) -> Result<FamilyRow> {
    let tr = &inst.triple;
    let j_formula = closed_j(&ZoneProfile::new(tr)?).j;
    let mut row = FamilyRow {
        family: "",
        m: None,
        p: tr.p(),
        q: tr.q(),
        r: tr.r(),
        n: tr.n(),
        t: None,
        epsilon: None,
        t_warning: false,
        j_formula,
        j_oracle: None,
        bound: inst.predicted_bound.to_string(),
        bound_pass: inst.predicted_bound.holds(j_formula, tr.n()),
        profile_pass: None,
        theorem_bound_pass: None,
        status: String::new(),
    };
    match inst.params {
        FamilyParams::SixM { m } => {
            row.family = "six-m";
            row.m = Some(m);
            if tr.n() <= max_n {
                row.j_oracle = Some(
                    scan_jumps(&coefficients_with_limit(tr, max_n)?)
                        .jump_ups
                        .len() as i64,
                );
            }
        }
        FamilyParams::Germain {
            t,
            epsilon,
            t_warning,
            ..
        } => {
            row.family = "germain";
            row.t = Some(t);
            row.epsilon = Some(epsilon);
            row.t_warning = t_warning;
            let report = verify_small_j_profile(inst, max_n)?;
            row.j_oracle = report.j_oracle;
            row.profile_pass = Some(report.profile_holds());
            row.theorem_bound_pass = Some(report.j_below_theorem_bound);
        }
    }
    let mut failures = Vec::new();
    if row.j_oracle.is_some_and(|o| o != j_formula) {
        failures.push("J mismatch");
    }
    if !row.bound_pass {
        failures.push("bound");
    }
    // the profile and the theorem bound are only promised when t >= 3
    if !row.t_warning {
        if row.profile_pass == Some(false) {
            failures.push("profile");
        }
        if row.theorem_bound_pass == Some(false) {
            failures.push("theorem bound");
        }
    }
    row.status = if failures.is_empty() {
        "pass".to_string()
    } else {
        format!("FAIL: {}", failures.join(", "))
    };
    Ok(row)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub p_max: i64,
    pub require_primes: bool,
    /// Left out of serialized output so reports do not depend on it.
    #[serde(skip)]
    pub jobs: usize,
    /// Check this many random indices per triple instead of all of them.
    pub sample_k: Option<usize>,
    pub seed: u64,
    pub max_n: i64,
}

impl ScanConfig {
    pub fn new(p_max: i64) -> ScanConfig {
        ScanConfig {
            p_max,
            require_primes: false,
            jobs: 1,
            sample_k: None,
            seed: 0,
            max_n: crate::poly::max_n_from_env(),
        }
    }
}

/// Valid triples with entries in `[3, p_max]`, strictly increasing, in
/// lexicographic order.
pub fn scan_triples(p_max: i64, require_primes: bool) -> Vec<Triple> {
    let mut out = Vec::new();
    for p in 3..=p_max {
        for q in p + 1..=p_max {
            for r in q + 1..=p_max {
                if let Ok(t) = validate_triple(p, q, r, require_primes) {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub n: i64,
    #[serde(rename = "J_formula")]
    pub j_formula: Option<i64>,
    #[serde(rename = "J_oracle")]
    pub j_oracle: Option<i64>,
    #[serde(rename = "R")]
    pub r_term: Option<i64>,
    #[serde(rename = "S")]
    pub s_term: Option<i64>,
    #[serde(rename = "T")]
    pub t_term: Option<i64>,
    pub main: Option<i64>,
    pub theta: Option<i64>,
    pub height: Option<i64>,
    #[serde(rename = "cbrtJ_pass")]
    pub cbrt_j_pass: Option<bool>,
    #[serde(rename = "cbrtTheta_pass")]
    pub cbrt_theta_pass: Option<bool>,
    pub table_agree: Option<bool>,
    pub lemma_r_count: Option<u8>,
    pub status: String,
}

impl ScanRow {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    /// `J^3 / n` from the closed form.
    pub fn j_ratio(&self) -> Option<Ratio<u128>> {
        self.j_formula
            .map(|j| Ratio::new((j.max(0) as u128).pow(3), self.n as u128))
    }
}

fn seed_for(seed: u64, t: &Triple) -> u64 {
    let [p, q, r] = t.moduli().map(|v| v as u64);
    seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ q.wrapping_mul(0xc2b2_ae3d_27d4_eb4f)
        ^ r.wrapping_mul(0x1656_67b1_9e37_79f9)
}

/// Runs every check on one triple. Failures land in `status`.
pub fn scan_triple(t: &Triple, cfg: &ScanConfig) -> ScanRow {
    let mut row = ScanRow {
        p: t.p(),
        q: t.q(),
        r: t.r(),
        n: t.n(),
        j_formula: None,
        j_oracle: None,
        r_term: None,
        s_term: None,
        t_term: None,
        main: None,
        theta: None,
        height: None,
        cbrt_j_pass: None,
        cbrt_theta_pass: None,
        table_agree: None,
        lemma_r_count: None,
        status: String::new(),
    };
    let mut failures: Vec<String> = Vec::new();
    match fill_scan_row(t, cfg, &mut row, &mut failures) {
        Ok(()) if failures.is_empty() => row.status = "pass".into(),
        Ok(()) => row.status = format!("FAIL: {}", failures.join("; ")),
        Err(e) => {
            failures.push(e.to_string());
            row.status = format!("FAIL: {}", failures.join("; "));
        }
    }
    row
}

fn fill_scan_row(
    t: &Triple,
    cfg: &ScanConfig,
    row: &mut ScanRow,
    failures: &mut Vec<String>,
) -> Result<()> {
    let lemma = lemma_r_status(t);
    row.lemma_r_count = Some(match lemma {
        Ok(s) => s.count,
        Err(Error::LemmaViolation { count }) => count,
        Err(e) => return Err(e),
    });
    if let Err(e) = lemma {
        failures.push(e.to_string());
    }

    let zp = ZoneProfile::new(t)?;
    let c: JumpComponents = closed_j(&zp);
    row.j_formula = Some(c.j);
    row.r_term = Some(c.r);
    row.s_term = Some(c.s);
    row.t_term = Some(c.t);
    row.main = Some(c.main);
    if forbidden_cell_sizes(&zp) != [0, 0] {
        failures.push("cell (000) or (444) is nonempty".into());
    }

    let ct = coefficients_with_limit(t, cfg.max_n)?;
    let stats = scan_jumps(&ct);
    let ups = stats.jump_ups.len() as i64;
    row.j_oracle = Some(ups);
    row.theta = Some(stats.theta);
    row.height = Some(stats.height);
    if ups != c.j {
        failures.push(format!("closed form {} != oracle {ups}", c.j));
    }
    if ups != stats.jump_downs.len() as i64 {
        failures.push("jump ups and downs differ".into());
    }
    if !stats.is_flat() {
        failures.push(format!("jump of size {}", stats.max_abs_jump));
    }
    if !(ct.is_palindromic() && ct.endpoints_are_one()) {
        failures.push("coefficients not palindromic".into());
    }

    let bounds = bound_report(t, c.j, stats.theta);
    row.cbrt_j_pass = Some(bounds.j_cubed_gt_n);
    row.cbrt_theta_pass = Some(bounds.theta_cubed_gt_n);
    if bounds.violation() {
        failures.push("cube-root bound violated".into());
    }

    let report = match cfg.sample_k {
        Some(s) if (s as i64) < t.n() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed_for(cfg.seed, t));
            let ks: Vec<i64> = (0..s).map(|_| rng.gen_range(0..t.n())).collect();
            verify_indices(&ct, &zp, ks)?
        }
        _ => verify_indices(&ct, &zp, 0..t.n())?,
    };
    row.table_agree = Some(report.all_agree());
    if let Some(m) = report.first_mismatch {
        failures.push(format!("table disagrees at k={}: {}", m.k, m.detail));
    }
    Ok(())
}

/// Scans every triple, in parallel over `cfg.jobs` workers, returning rows in
/// triple order.
pub fn scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let triples = scan_triples(cfg.p_max, cfg.require_primes);
    if let Some(t) = triples.iter().find(|t| t.n() > cfg.max_n) {
        return Err(Error::TooLarge {
            n: t.n(),
            limit: cfg.max_n,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| triples.par_iter().map(|t| scan_triple(t, cfg)).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub rows: usize,
    pub passed: usize,
    /// Triple with the smallest `J^3 / n`.
    pub min_j_ratio: Option<([i64; 3], Ratio<u128>)>,
}

impl ScanSummary {
    pub fn of(rows: &[ScanRow]) -> ScanSummary {
        let min_j_ratio = rows
            .iter()
            .filter_map(|r| r.j_ratio().map(|ratio| ([r.p, r.q, r.r], ratio)))
            .min_by(|a, b| a.1.cmp(&b.1));
        ScanSummary {
            rows: rows.len(),
            passed: rows.iter().filter(|r| r.passed()).count(),
            min_j_ratio,
        }
    }

    pub fn failed(&self) -> usize {
        self.rows - self.passed
    }
}

pub fn write_rows_csv<W: Write, T: Serialize>(rows: &[T], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
