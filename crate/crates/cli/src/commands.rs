use std::fmt;
use std::io::{self, Write};
use std::process::ExitCode;

use serde::Serialize;
use ternjump::families::{
    evaluate_family, germain_triples, scan, six_m_family, Epsilon, FamilyRow, ScanConfig,
    ScanSummary,
};
use ternjump::modular::{validate_triple, Triple};
use ternjump::poly::{coefficients, max_n_from_env, write_coefficients_csv, write_jumps_csv};
use ternjump::report::{analyze, AnalysisReport, AnalyzeOptions};
use ternjump::repr::{jump_from_octuple, CrtBasis, Octuple};
use ternjump::zones::{classify, table, table_octuple, table_v, ZoneProfile};
use ternjump::Error;

use crate::output::{aligned, csv_bytes, optional, sink, yes_no};
use crate::{Command, FamilyCommand, Format, TripleArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::Inconsistent { .. }
                | Error::InternalInconsistency(_)
                | Error::EmptyCell(_)
                | Error::LemmaViolation { .. }
                | Error::InexactDivision { .. }
                | Error::FlatnessViolation { .. },
            ) => 1,
            CliError::Core(_) | CliError::Usage(_) | CliError::Output(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Output(msg) => write!(f, "cannot write output: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn triple(args: TripleArgs) -> Result<Triple, CliError> {
    Ok(validate_triple(args.p, args.q, args.r, args.primes_only)?)
}

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Analyze {
            triple: t,
            verify,
            json,
            no_oracle,
        } => cmd_analyze(triple(t)?, verify, json, no_oracle),
        Command::Classify { triple: t, k, json } => cmd_classify(triple(t)?, k, json),
        Command::Coeffs {
            triple: t,
            jumps,
            out,
        } => {
            let ct = coefficients(&triple(t)?)?;
            let mut w = sink(&out)?;
            if jumps {
                write_jumps_csv(&ct, &mut w)?;
            } else {
                write_coefficients_csv(&ct, &mut w)?;
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { corrected, out } => {
            let mut w = sink(&out)?;
            table::write_csv(&mut w, corrected)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            pmax,
            primes_only,
            jobs,
            sample_k,
            seed,
            format,
            out,
        } => {
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            let cfg = ScanConfig {
                p_max: pmax,
                require_primes: primes_only,
                jobs,
                sample_k,
                seed,
                max_n: max_n_from_env(),
            };
            cmd_scan(cfg, format, out)
        }
        Command::Family {
            family,
            format,
            out,
        } => cmd_family(family, format, out),
    }
}

fn cmd_analyze(t: Triple, verify: bool, json: bool, no_oracle: bool) -> CliResult {
    let opts = AnalyzeOptions {
        oracle: !no_oracle,
        verify,
        max_n: max_n_from_env(),
    };
    let report = analyze(&t, opts)?;
    let mut w = sink(&None)?;
    if json {
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
    } else {
        write_analysis_text(&mut w, &report)?;
    }
    w.flush()?;
    Ok(verdict(report.passed()))
}

fn write_analysis_text(w: &mut dyn Write, r: &AnalysisReport) -> io::Result<()> {
    let t = &r.triple;
    let c = &r.components;
    let kind = if t.strict_primes {
        "primes"
    } else {
        "pairwise coprime"
    };
    writeln!(
        w,
        "triple       ({}, {}, {})  n={}  phi={}  {kind}",
        t.p, t.q, t.r, t.n, t.phi
    )?;
    writeln!(
        w,
        "closed form  R={}  S={}  T={}  main={}  J={}",
        c.r, c.s, c.t, c.main, c.j
    )?;
    writeln!(
        w,
        "printed main term {} would give J={}",
        c.as_printed_main,
        c.as_printed_j()
    )?;
    match &r.oracle {
        Some(o) => writeln!(
            w,
            "oracle       J_up={}  J_down={}  theta={}  height={}",
            o.j_up, o.j_down, o.theta, o.height
        )?,
        None => writeln!(w, "oracle       not run")?,
    }
    let b = &r.bounds;
    write!(
        w,
        "bounds       J^3/n={} (>1: {})",
        b.j_ratio,
        yes_no(b.j_cubed_vs_n)
    )?;
    match (&b.theta_ratio, b.theta_cubed_vs_n) {
        (Some(ratio), Some(ok)) => writeln!(w, "  theta^3/n={ratio} (>1: {})", yes_no(ok))?,
        _ => writeln!(w)?,
    }
    let k = &r.checks;
    writeln!(
        w,
        "checks       formula = oracle: {}",
        optional(k.formula_matches_oracle)
    )?;
    writeln!(w, "             flat: {}", optional(k.flat))?;
    writeln!(w, "             palindromic: {}", optional(k.palindromic))?;
    writeln!(
        w,
        "             table agreement: {}",
        optional(k.table_agree)
    )?;
    writeln!(
        w,
        "             inverse-sum inequalities holding: {}",
        k.lemma_r_count
    )?;
    writeln!(
        w,
        "             cells (000), (444) empty: {}",
        yes_no(k.empty_cells_absent)
    )?;
    if let Some(m) = &r.first_mismatch {
        writeln!(w, "first mismatch: {m}")?;
    }
    writeln!(
        w,
        "result       {}",
        if r.passed() { "pass" } else { "FAIL" }
    )
}

#[derive(Serialize)]
struct ClassifyReport {
    triple: Triple,
    k: i64,
    f: i64,
    residues: [i64; 3],
    cell: [u8; 3],
    row: &'static str,
    perm: [usize; 3],
    predicted_octuple: [i64; 8],
    actual_octuple: [i64; 8],
    octuples_match: bool,
    v_oracle: i64,
    v_table: i64,
    v_octuple: i64,
}

fn cmd_classify(t: Triple, k: i64, json: bool) -> CliResult {
    let basis = CrtBasis::new(&t);
    let actual = basis.octuple(k)?;
    let rep = basis.decompose(k);
    let zp = ZoneProfile::new(&t)?;
    let cls = classify(&zp, &rep)?;
    let predicted: Octuple = table_octuple(&zp, &cls);
    let ct = coefficients(&t)?;
    let report = ClassifyReport {
        triple: t,
        k,
        f: rep.f,
        residues: rep.residues,
        cell: cls.cell,
        row: cls.pattern(),
        perm: cls.perm,
        predicted_octuple: predicted.0,
        actual_octuple: actual.0,
        octuples_match: predicted.is_shift_equivalent(&actual),
        v_oracle: ct.jump(k),
        v_table: table_v(&zp, &cls),
        v_octuple: jump_from_octuple(&actual)?,
    };
    let ok = report.octuples_match
        && report.v_oracle == report.v_table
        && report.v_table == report.v_octuple;
    let mut w = sink(&None)?;
    if json {
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
    } else {
        let r = &report;
        let fmt8 = |o: &[i64; 8]| format!("{o:?}");
        writeln!(w, "triple     {}  k={}", r.triple, r.k)?;
        writeln!(
            w,
            "F, a, b, c {}, {}, {}, {}",
            r.f, r.residues[0], r.residues[1], r.residues[2]
        )?;
        writeln!(w, "cell       ({},{},{})", r.cell[0], r.cell[1], r.cell[2])?;
        writeln!(w, "row        {}  perm {:?}", r.row, r.perm)?;
        writeln!(w, "predicted  {}", fmt8(&r.predicted_octuple))?;
        writeln!(
            w,
            "actual     {}  (match up to shift: {})",
            fmt8(&r.actual_octuple),
            yes_no(r.octuples_match)
        )?;
        writeln!(
            w,
            "V          oracle {}  table {}  octuple {}",
            r.v_oracle, r.v_table, r.v_octuple
        )?;
    }
    w.flush()?;
    Ok(verdict(ok))
}

#[derive(Serialize)]
struct JsonScan<'a> {
    config: &'a ScanConfig,
    rows: &'a [ternjump::ScanRow],
}

fn cmd_scan(cfg: ScanConfig, format: Format, out: Option<std::path::PathBuf>) -> CliResult {
    let rows = scan(&cfg)?;
    let mut w = sink(&out)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut w,
                &JsonScan {
                    config: &cfg,
                    rows: &rows,
                },
            )?;
            writeln!(w)?;
        }
        Format::Csv => w.write_all(&csv_bytes(&rows)?)?,
        Format::Text => w.write_all(aligned(&csv_bytes(&rows)?)?.as_bytes())?,
    }
    w.flush()?;
    let summary = ScanSummary::of(&rows);
    let mut line = format!(
        "scan: {} triples, {} passed, {} failed",
        summary.rows,
        summary.passed,
        summary.failed()
    );
    if let Some((t, ratio)) = summary.min_j_ratio {
        line += &format!("; min J^3/n = {ratio} at ({}, {}, {})", t[0], t[1], t[2]);
    }
    match cfg.sample_k {
        Some(s) => line += &format!("; {s} sampled indices per triple, seed {}", cfg.seed),
        None => line += "; all indices checked",
    }
    eprintln!("{line}");
    Ok(verdict(summary.failed() == 0))
}

#[derive(Serialize)]
struct JsonFamily<'a> {
    family: &'static str,
    rows: &'a [FamilyRow],
}

fn cmd_family(family: FamilyCommand, format: Format, out: Option<std::path::PathBuf>) -> CliResult {
    let (name, instances) = match family {
        FamilyCommand::SixM { m_from, m_to } => ("six-m", six_m_family(m_from, m_to)?),
        FamilyCommand::Germain { qmax, eps } => {
            let eps: Epsilon = eps.parse()?;
            ("germain", germain_triples(qmax, eps))
        }
    };
    let max_n = max_n_from_env();
    let rows = instances
        .iter()
        .map(|inst| evaluate_family(inst, max_n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = sink(&out)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut w,
                &JsonFamily {
                    family: name,
                    rows: &rows,
                },
            )?;
            writeln!(w)?;
        }
        Format::Csv => w.write_all(&csv_bytes(&rows)?)?,
        Format::Text => w.write_all(aligned(&csv_bytes(&rows)?)?.as_bytes())?,
    }
    w.flush()?;
    let passed = rows.iter().filter(|r| r.passed()).count();
    let warned = rows.iter().filter(|r| r.t_warning).count();
    let mut line = format!(
        "family {name}: {} instances, {passed} passed, {} failed",
        rows.len(),
        rows.len() - passed
    );
    if warned > 0 {
        line += &format!("; {warned} with t < 3");
    }
    eprintln!("{line}");
    Ok(verdict(passed == rows.len()))
}
