//! Brute-force coefficient oracle.
//!
//! Coefficients come from the product formula
//!
//! ```text
//! (1 - x^pqr)(1 - x^p)(1 - x^q)(1 - x^r) / ((1 - x^qr)(1 - x^rp)(1 - x^pq)(1 - x))
//! ```
//!
//! expanded as a 16-term numerator and divided exactly, one factor at a time,
//! with the prefix recurrence `s[i] += s[i - d]`. Table construction never
//! looks at zones or closed forms; [`verify_indices`] is the only place the
//! two sides meet.

use std::io::Write;

use crate::error::{Error, Result};
use crate::modular::Triple;
use crate::repr::{jump_from_octuple, CrtBasis, Octuple};
use crate::zones::{classify, table_octuple, table_v, ZoneProfile};

/// Default bound on `n` for building coefficient tables.
pub const DEFAULT_MAX_N: i64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "TERNJUMP_MAX_N";

pub fn max_n_from_env() -> i64 {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

/// Dense coefficients `a(0..=phi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    triple: Triple,
    coeffs: Vec<i32>,
}

/// `(exponent, sign)` of the numerator terms.
fn numerator_terms(t: &Triple) -> Vec<(i64, i64)> {
    let parts = [t.n(), t.p(), t.q(), t.r()];
    (0u32..16)
        .map(|mask| {
            let exp = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| parts[i])
                .sum();
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            (exp, sign)
        })
        .collect()
}

fn denominators(t: &Triple) -> [i64; 4] {
    let [p, q, r] = t.moduli();
    [q * r, r * p, p * q, 1]
}

pub fn coefficients(t: &Triple) -> Result<CoefficientTable> {
    coefficients_with_limit(t, max_n_from_env())
}

pub fn coefficients_with_limit(t: &Triple, max_n: i64) -> Result<CoefficientTable> {
    if t.n() > max_n {
        return Err(Error::TooLarge {
            n: t.n(),
            limit: max_n,
        });
    }
    let phi = t.phi() as usize;
    let top = (t.n() + t.p() + t.q() + t.r()) as usize;
    let mut series = vec![0i64; top + 1];
    for (exp, sign) in numerator_terms(t) {
        series[exp as usize] += sign;
    }
    for d in denominators(t) {
        let d = d as usize;
        for i in d..=top {
            series[i] += series[i - d];
        }
    }
    if let Some(degree) = (phi + 1..=top).find(|&i| series[i] != 0) {
        return Err(Error::InexactDivision { divisor: 1, degree });
    }
    series.truncate(phi + 1);
    let coeffs = series
        .into_iter()
        .map(|c| {
            i32::try_from(c).map_err(|_| {
                Error::InternalInconsistency(format!("coefficient {c} overflows 32 bits"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientTable { triple: *t, coeffs })
}

impl CoefficientTable {
    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// `a(k)`, zero outside `[0, phi]`.
    pub fn a(&self, k: i64) -> i64 {
        usize::try_from(k)
            .ok()
            .and_then(|i| self.coeffs.get(i))
            .map_or(0, |&c| c as i64)
    }

    /// `V(k) = a(k) - a(k-1)`.
    pub fn jump(&self, k: i64) -> i64 {
        self.a(k) - self.a(k - 1)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn endpoints_are_one(&self) -> bool {
        self.coeffs.first() == Some(&1) && self.coeffs.last() == Some(&1)
    }

    /// Multiplies back by every denominator factor and compares with the
    /// sparse numerator, over the full degree range.
    pub fn reproduces_numerator(&self) -> bool {
        let t = &self.triple;
        let top = (t.n() + t.p() + t.q() + t.r()) as usize;
        let mut prod: Vec<i64> = self.coeffs.iter().map(|&c| c as i64).collect();
        prod.resize(top + 1, 0);
        for d in denominators(t) {
            let d = d as usize;
            for i in (d..=top).rev() {
                prod[i] -= prod[i - d];
            }
        }
        let mut numerator = vec![0i64; top + 1];
        for (exp, sign) in numerator_terms(t) {
            numerator[exp as usize] += sign;
        }
        prod == numerator
    }
}

/// Statistics of one coefficient table over `k` in `[0, pqr)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientStats {
    /// Number of nonzero coefficients.
    pub theta: i64,
    /// Largest `|a(k)|`.
    pub height: i64,
    pub jump_ups: Vec<i64>,
    pub jump_downs: Vec<i64>,
    /// Largest `|a(k) - a(k-1)|` seen.
    pub max_abs_jump: i64,
}

impl CoefficientStats {
    pub fn is_flat(&self) -> bool {
        self.max_abs_jump <= 1
    }
}

/// Scans every index without rejecting large jumps.
pub fn scan_jumps(ct: &CoefficientTable) -> CoefficientStats {
    let mut stats = CoefficientStats {
        theta: ct.coeffs.iter().filter(|&&c| c != 0).count() as i64,
        height: ct
            .coeffs
            .iter()
            .map(|&c| (c as i64).abs())
            .max()
            .unwrap_or(0),
        jump_ups: Vec::new(),
        jump_downs: Vec::new(),
        max_abs_jump: 0,
    };
    for k in 0..ct.triple.n() {
        let v = ct.jump(k);
        stats.max_abs_jump = stats.max_abs_jump.max(v.abs());
        if v > 0 {
            stats.jump_ups.push(k);
        } else if v < 0 {
            stats.jump_downs.push(k);
        }
    }
    stats
}

/// Like [`scan_jumps`], but a jump of size two or more is an error.
pub fn jump_scan(ct: &CoefficientTable) -> Result<CoefficientStats> {
    let stats = scan_jumps(ct);
    if !stats.is_flat() {
        let k = (0..ct.triple.n())
            .find(|&k| ct.jump(k).abs() > 1)
            .unwrap_or(0);
        return Err(Error::FlatnessViolation {
            k,
            jump: ct.jump(k),
        });
    }
    Ok(stats)
}

/// First index where the three jump computations or the octuple prediction
/// disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub k: i64,
    pub oracle_v: i64,
    pub table_v: Option<i64>,
    pub octuple_v: Option<i64>,
    pub actual_octuple: Option<Octuple>,
    pub predicted_octuple: Option<Octuple>,
    /// The index landed in `(000)` or `(444)`.
    pub empty_cell: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AgreementReport {
    pub checked: u64,
    pub agreed: u64,
    /// Indices that landed in one of the two cells that must be empty.
    pub empty_cell_hits: u64,
    pub first_mismatch: Option<Mismatch>,
}

impl AgreementReport {
    pub fn all_agree(&self) -> bool {
        self.checked == self.agreed
    }
}

fn check_index(
    ct: &CoefficientTable,
    zp: &ZoneProfile,
    basis: &CrtBasis,
    k: i64,
) -> Result<Option<Mismatch>> {
    let oracle_v = ct.jump(k);
    let mut mismatch = Mismatch {
        k,
        oracle_v,
        table_v: None,
        octuple_v: None,
        actual_octuple: None,
        predicted_octuple: None,
        empty_cell: false,
        detail: String::new(),
    };
    let oct = basis.octuple(k)?;
    mismatch.actual_octuple = Some(oct);
    match jump_from_octuple(&oct) {
        Ok(v) => mismatch.octuple_v = Some(v),
        Err(e) => {
            mismatch.detail = e.to_string();
            return Ok(Some(mismatch));
        }
    }
    let cls = match classify(zp, &basis.decompose(k)) {
        Ok(cls) => cls,
        Err(e) => {
            mismatch.empty_cell = matches!(e, Error::EmptyCell(_));
            mismatch.detail = e.to_string();
            return Ok(Some(mismatch));
        }
    };
    let tv = table_v(zp, &cls);
    let predicted = table_octuple(zp, &cls);
    mismatch.table_v = Some(tv);
    mismatch.predicted_octuple = Some(predicted);
    let agree = mismatch.octuple_v == Some(oracle_v) && tv == oracle_v;
    let shapes = predicted.is_shift_equivalent(&oct);
    if agree && shapes {
        return Ok(None);
    }
    mismatch.detail = format!(
        "row {} perm {:?}: {}",
        cls.pattern(),
        cls.perm,
        if agree {
            "octuple shape differs"
        } else {
            "jump values differ"
        }
    );
    Ok(Some(mismatch))
}

/// Checks the oracle against the table criterion and the octuple count at
/// each of `indices` (all must lie in `[0, pqr)`).
pub fn verify_indices(
    ct: &CoefficientTable,
    zp: &ZoneProfile,
    indices: impl IntoIterator<Item = i64>,
) -> Result<AgreementReport> {
    if ct.triple().moduli() != zp.triple().moduli() {
        return Err(Error::InvalidArgument(
            "table and profile describe different triples".into(),
        ));
    }
    let basis = CrtBasis::new(ct.triple());
    let mut report = AgreementReport::default();
    for k in indices {
        report.checked += 1;
        match check_index(ct, zp, &basis, k)? {
            None => report.agreed += 1,
            Some(m) => {
                if m.empty_cell {
                    report.empty_cell_hits += 1;
                }
                report.first_mismatch.get_or_insert(m);
            }
        }
    }
    Ok(report)
}

/// Exhaustive agreement over `[0, pqr)`.
pub fn verify_against_table(t: &Triple) -> Result<AgreementReport> {
    let ct = coefficients(t)?;
    let zp = ZoneProfile::new(t)?;
    verify_indices(&ct, &zp, 0..t.n())
}

/// CSV with columns `k,a(k)`.
pub fn write_coefficients_csv<W: Write>(ct: &CoefficientTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "a(k)"])?;
    for (k, c) in ct.coeffs.iter().enumerate() {
        w.write_record([k.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// CSV with columns `k,V` over the jumping indices, ascending.
pub fn write_jumps_csv<W: Write>(ct: &CoefficientTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "V"])?;
    for k in 0..ct.triple.n() {
        let v = ct.jump(k);
        if v != 0 {
            w.write_record([k.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
