//! Per-triple analysis record shared by the CLI's `analyze` output.

use serde::{Deserialize, Serialize};

use crate::count::{bound_report, closed_j, forbidden_cell_sizes, JumpComponents};
use crate::error::{Error, Result};
use crate::modular::Triple;
use crate::poly::{coefficients_with_limit, scan_jumps, verify_indices};
use crate::zones::{lemma_r_status, ZoneProfile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleInfo {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub n: i64,
    pub phi: i64,
    pub strict_primes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleInfo {
    #[serde(rename = "J_up")]
    pub j_up: i64,
    #[serde(rename = "J_down")]
    pub j_down: i64,
    pub theta: i64,
    pub height: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsInfo {
    pub cube_root_floor: i64,
    /// `J^3 > n`.
    #[serde(rename = "J_cubed_vs_n")]
    pub j_cubed_vs_n: bool,
    /// `J^3 / n` as `num/den`.
    #[serde(rename = "J_ratio")]
    pub j_ratio: String,
    /// `theta^3 > n`; absent without the oracle.
    pub theta_cubed_vs_n: Option<bool>,
    pub theta_ratio: Option<String>,
}

/// Every field is present; `None` means the check was not run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub formula_matches_oracle: Option<bool>,
    pub flat: Option<bool>,
    pub palindromic: Option<bool>,
    pub table_agree: Option<bool>,
    pub lemma_r_count: u8,
    pub empty_cells_absent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub triple: TripleInfo,
    pub components: JumpComponents,
    pub oracle: Option<OracleInfo>,
    pub bounds: BoundsInfo,
    pub checks: Checks,
    /// First disagreement found by per-index verification.
    pub first_mismatch: Option<String>,
}

impl AnalysisReport {
    /// True when every check that ran succeeded.
    pub fn passed(&self) -> bool {
        let c = &self.checks;
        [
            c.formula_matches_oracle,
            c.flat,
            c.palindromic,
            c.table_agree,
        ]
        .iter()
        .all(|v| v.unwrap_or(true))
            && matches!(c.lemma_r_count, 1 | 2)
            && c.empty_cells_absent
            && self.bounds.j_cubed_vs_n
            && self.bounds.theta_cubed_vs_n.unwrap_or(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub oracle: bool,
    /// Per-index three-way agreement over `[0, pqr)`; implies `oracle`.
    pub verify: bool,
    pub max_n: i64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            oracle: true,
            verify: false,
            max_n: crate::poly::max_n_from_env(),
        }
    }
}

pub fn analyze(t: &Triple, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let zp = ZoneProfile::new(t)?;
    let components = closed_j(&zp);
    let lemma_r_count = match lemma_r_status(t) {
        Ok(s) => s.count,
        Err(Error::LemmaViolation { count }) => count,
        Err(e) => return Err(e),
    };
    let mut checks = Checks {
        formula_matches_oracle: None,
        flat: None,
        palindromic: None,
        table_agree: None,
        lemma_r_count,
        empty_cells_absent: forbidden_cell_sizes(&zp) == [0, 0],
    };
    let mut oracle = None;
    let mut first_mismatch = None;
    let mut theta = None;
    if opts.oracle || opts.verify {
        let ct = coefficients_with_limit(t, opts.max_n)?;
        let stats = scan_jumps(&ct);
        let info = OracleInfo {
            j_up: stats.jump_ups.len() as i64,
            j_down: stats.jump_downs.len() as i64,
            theta: stats.theta,
            height: stats.height,
        };
        checks.formula_matches_oracle = Some(info.j_up == components.j && info.j_down == info.j_up);
        checks.flat = Some(stats.is_flat());
        checks.palindromic = Some(ct.is_palindromic() && ct.endpoints_are_one());
        theta = Some(info.theta);
        oracle = Some(info);
        if opts.verify {
            let report = verify_indices(&ct, &zp, 0..t.n())?;
            checks.table_agree = Some(report.all_agree());
            first_mismatch = report
                .first_mismatch
                .map(|m| format!("k={}: {}", m.k, m.detail));
        }
    }
    let b = bound_report(t, components.j, theta.unwrap_or(0));
    let bounds = BoundsInfo {
        cube_root_floor: b.cube_root_floor,
        j_cubed_vs_n: b.j_cubed_gt_n,
        j_ratio: b.j_ratio.to_string(),
        theta_cubed_vs_n: theta.map(|_| b.theta_cubed_gt_n),
        theta_ratio: theta.map(|_| b.theta_ratio.to_string()),
    };
    Ok(AnalysisReport {
        triple: TripleInfo {
            p: t.p(),
            q: t.q(),
            r: t.r(),
            n: t.n(),
            phi: t.phi(),
            strict_primes: t.strict_primes(),
        },
        components,
        oracle,
        bounds,
        checks,
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::validate_triple;

    #[test]
    fn analyze_357() {
        let t = validate_triple(3, 5, 7, true).unwrap();
        let opts = AnalyzeOptions {
            verify: true,
            ..Default::default()
        };
        let report = analyze(&t, opts).unwrap();
        assert!(report.passed());
        assert_eq!(report.components.j, 13);
        let o = report.oracle.as_ref().unwrap();
        assert_eq!((o.j_up, o.j_down, o.theta, o.height), (13, 13, 33, 2));
        assert_eq!(report.checks.table_agree, Some(true));
        assert_eq!(report.bounds.j_ratio, "2197/105");
        assert_eq!(report.triple.phi, 48);
    }

    #[test]
    fn closed_form_only() {
        let t = validate_triple(3, 11, 23, true).unwrap();
        let opts = AnalyzeOptions {
            oracle: false,
            verify: false,
            max_n: 0,
        };
        let report = analyze(&t, opts).unwrap();
        let c = &report.components;
        assert_eq!((c.r, c.s, c.t, c.main, c.j), (6, 0, 6, 39, 51));
        assert!(report.oracle.is_none() && report.checks.flat.is_none());
        assert!(report.passed());
    }

    #[test]
    fn oracle_limit_is_enforced() {
        let t = validate_triple(3, 11, 23, true).unwrap();
        let opts = AnalyzeOptions {
            oracle: true,
            verify: false,
            max_n: 100,
        };
        assert!(matches!(analyze(&t, opts), Err(Error::TooLarge { .. })));
    }
}
