//! The jump table as data.
//!
//! Each row is the nondecreasing zone pattern `j1 j2 j3`, the octuple up to
//! shift, and the jump `V(k)`. Entries are integer expressions in the six
//! order flags, written `d_xy` with `x, y` in `{p, q, r}`; the grammar is a
//! signed sum of products, e.g. `d_pq*d_pr-d_qp*d_rp` or `1+d_qp`.
//!
//! The templates are stored exactly as printed. Three printed octuples do not
//! match the F-values they describe (their `V` is unaffected); the verified
//! replacements live in `corrected_octuple`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::modular::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub pattern: &'static str,
    pub octuple: &'static str,
    pub v: &'static str,
    pub corrected_octuple: Option<&'static str>,
}

impl TableRow {
    /// The octuple template used for prediction.
    pub fn effective_octuple(&self) -> &'static str {
        self.corrected_octuple.unwrap_or(self.octuple)
    }
}

const fn row(pattern: &'static str, octuple: &'static str, v: &'static str) -> TableRow {
    TableRow {
        pattern,
        octuple,
        v,
        corrected_octuple: None,
    }
}

const fn fixed(
    pattern: &'static str,
    octuple: &'static str,
    v: &'static str,
    corrected: &'static str,
) -> TableRow {
    TableRow {
        pattern,
        octuple,
        v,
        corrected_octuple: Some(corrected),
    }
}

pub const ROWS: [TableRow; 33] = [
    // printed entry is the 100 arrangement: F_{k-q-r} and F_{k-p-q} swapped
    fixed("001", "0,1,1,1,1,2,2,2", "1", "0,1,1,1,2,2,1,2"),
    row("002", "0,d_pq,d_qp,1,1+d_qp,1+d_pq,1,2", "0"),
    row("003", "0,0,0,1,1,1,1,2", "-1"),
    row("004", "0,0,0,1,1,1,0,1", "0"),
    row("011", "0,1,1,1,2,1,1,1", "1"),
    row("012", "0,d_pq,d_qp,1,1+d_qp,d_pq,1,1", "d_qp"),
    row("013", "0,0,0,1,1,0,1,1", "0"),
    row("014", "0,0,0,1,1,0,0,0", "0"),
    row("022", "0,d_pq+d_pr-1,d_qp,d_rp,d_qp+d_rp,d_pq,d_pr,1", "0"),
    // F_{k-r} and F_{k-q-r} carry d_rp (compare rows 123 and 124)
    fixed(
        "023",
        "1,d_pr,1,1+d_pr,1+d_pr,1,1+d_pr,2",
        "-d_rp",
        "1,d_pr,1,1+d_rp,1+d_rp,1,1+d_pr,2",
    ),
    fixed(
        "024",
        "1,d_pr,1,1+d_pr,1+d_pr,1,d_pr,1",
        "0",
        "1,d_pr,1,1+d_rp,1+d_rp,1,d_pr,1",
    ),
    row("033", "1,0,1,1,1,1,1,2", "-1"),
    row("034", "1,0,1,1,1,1,0,1", "0"),
    row("044", "1,0,1,1,1,0,0,0", "0"),
    row("111", "0,1,1,1,1,1,1,0", "0"),
    row("112", "0,d_pq,d_qp,1,d_qp,d_pq,1,0", "0"),
    row("113", "0,0,0,1,0,0,1,0", "0"),
    row("114", "1,1,1,2,1,1,1,0", "-1"),
    row(
        "122",
        "1,d_pq+d_pr,1+d_qp,1+d_rp,d_qp+d_rp,1+d_pq,1+d_pr,1",
        "d_pq*d_pr-d_qp*d_rp",
    ),
    row("123", "1,d_pr,1,1+d_rp,d_rp,1,1+d_pr,1", "d_pr-d_rp"),
    row("124", "1,d_pr,1,1+d_rp,d_rp,1,d_pr,0", "-d_rp"),
    row("133", "1,0,1,1,0,1,1,1", "0"),
    row("134", "1,0,1,1,0,1,0,0", "0"),
    row("144", "2,1,2,2,1,1,1,0", "-1"),
    row(
        "222",
        "1,d_pq+d_pr,d_qr+d_qp,d_rp+d_rq,d_qp+d_rp,d_rq+d_pq,d_pr+d_qr,1",
        "0",
    ),
    row(
        "223",
        "1,d_pr,d_qr,d_rp+d_rq,d_rp,d_rq,d_pr+d_qr,1",
        "d_pr*d_qr-d_rp*d_rq",
    ),
    row("224", "1,d_pr,d_qr,d_rp+d_rq,d_rp,d_rq,d_pr+d_qr-1,0", "0"),
    row("233", "1,0,d_qr,d_rq,0,d_rq,d_qr,1", "0"),
    row("234", "2,1,1+d_qr,1+d_rq,1,1+d_rq,d_qr,1", "d_rq"),
    row("244", "2,1,1+d_qr,1+d_rq,1,d_rq,d_qr,0", "0"),
    row("333", "1,0,0,0,0,0,0,1", "0"),
    row("334", "2,1,1,1,1,1,0,1", "1"),
    row("344", "2,1,1,1,1,0,0,0", "1"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
struct Term {
    coef: i64,
    /// Each factor `(x, y)` is the flag `d_xy` in table labels.
    factors: Vec<(Label, Label)>,
}

/// A signed sum of products of order flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    terms: Vec<Term>,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let bad = || Error::InvalidArgument(format!("malformed table expression {src:?}"));
        let src: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut rest = src.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ if terms.is_empty() => (1, rest),
                _ => return Err(bad()),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let mut term = Term {
                coef: sign,
                factors: Vec::new(),
            };
            for factor in body[..end].split('*') {
                if let Some(flag) = factor.strip_prefix("d_") {
                    let b = flag.as_bytes();
                    let (x, y) = match b {
                        [x, y] => (label(*x).ok_or_else(bad)?, label(*y).ok_or_else(bad)?),
                        _ => return Err(bad()),
                    };
                    if x == y {
                        return Err(bad());
                    }
                    term.factors.push((x, y));
                } else {
                    term.coef *= factor.parse::<i64>().map_err(|_| bad())?;
                }
            }
            terms.push(term);
            rest = &body[end..];
        }
        Ok(Expr { terms })
    }

    /// Evaluates with `delta(x, y)` supplying the flag `d_xy`.
    pub fn eval(&self, delta: impl Fn(Label, Label) -> i64) -> i64 {
        self.terms
            .iter()
            .map(|t| t.coef * t.factors.iter().map(|&(x, y)| delta(x, y)).product::<i64>())
            .sum()
    }
}

fn label(c: u8) -> Option<Label> {
    match c {
        b'p' => Some(0),
        b'q' => Some(1),
        b'r' => Some(2),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct ParsedRow {
    pub source: &'static TableRow,
    pub pattern: [u8; 3],
    pub octuple: [Expr; 8],
    pub printed_octuple: [Expr; 8],
    pub v: Expr,
}

fn parse_octuple(src: &str) -> Result<[Expr; 8]> {
    let parts = src
        .split(',')
        .map(Expr::parse)
        .collect::<Result<Vec<_>>>()?;
    parts
        .try_into()
        .map_err(|_| Error::InvalidArgument(format!("octuple template {src:?} needs 8 entries")))
}

fn parse_row(source: &'static TableRow) -> Result<ParsedRow> {
    let digits: Vec<u8> = source
        .pattern
        .bytes()
        .map(|b| b.wrapping_sub(b'0'))
        .collect();
    let pattern: [u8; 3] = digits
        .try_into()
        .ok()
        .filter(|d: &[u8; 3]| d.iter().all(|&j| j <= 4) && d[0] <= d[1] && d[1] <= d[2])
        .ok_or_else(|| Error::InvalidArgument(format!("bad row pattern {}", source.pattern)))?;
    Ok(ParsedRow {
        source,
        pattern,
        octuple: parse_octuple(source.effective_octuple())?,
        printed_octuple: parse_octuple(source.octuple)?,
        v: Expr::parse(source.v)?,
    })
}

/// All rows, parsed once.
pub fn parsed_rows() -> &'static [ParsedRow] {
    static PARSED: OnceLock<Vec<ParsedRow>> = OnceLock::new();
    PARSED.get_or_init(|| {
        ROWS.iter()
            .map(|r| parse_row(r).expect("built-in table rows are well formed"))
            .collect()
    })
}

/// Index into [`ROWS`] of a nondecreasing pattern.
pub fn row_index(pattern: [u8; 3]) -> Option<usize> {
    parsed_rows().iter().position(|r| r.pattern == pattern)
}

/// CSV dump: `row,octuple,V`, one line per row.
pub fn write_csv<W: std::io::Write>(out: W, corrected: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "octuple", "V"])?;
    for r in &ROWS {
        let oct = if corrected {
            r.effective_octuple()
        } else {
            r.octuple
        };
        w.write_record([r.pattern, &format!("({oct})"), r.v])?;
    }
    w.flush()?;
    Ok(())
}
