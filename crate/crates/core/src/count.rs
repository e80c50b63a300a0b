//! Closed-form count of jumping-up coefficients and the cube-root bounds.
//!
//! `J = R + S + T + main` with
//!
//! ```text
//! R    = sum_cyc alpha_x (#A^y_0 #A^z_0 + #A^y_4 #A^z_4)
//! S    = sum_cyc delta_x alpha_x (beta_y - alpha_y)(beta_z - alpha_z)
//! T    = sum_perm delta_yz (beta_x - alpha_x)(alpha_y #A^z_0 + alpha_z #A^y_4)
//! main = sum_cyc alpha_x alpha_y (z - 2 alpha_z)
//! ```
//!
//! `sum_cyc` runs over `(p,q,r), (r,p,q), (q,r,p)` and `sum_perm` over all six
//! orderings. The often-quoted main term `alpha_x alpha_y (z - alpha_z -
//! beta_z)` undercounts; it is kept as `as_printed_main` for comparison only.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::modular::{Label, Triple};
use crate::zones::{classify_cell, table_v, ZoneProfile};

/// `(x, y, z)` substituted for `(p, q, r)` by the cyclic sum.
pub const CYCLIC: [[Label; 3]; 3] = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];

/// All six substitutions.
pub const PERMUTATIONS: [[Label; 3]; 6] = [
    [0, 1, 2],
    [2, 0, 1],
    [1, 2, 0],
    [2, 1, 0],
    [0, 2, 1],
    [1, 0, 2],
];

/// Jumping indices that fall in cells of one table row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJumps {
    pub ups: i64,
    pub downs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpComponents {
    #[serde(rename = "R")]
    pub r: i64,
    #[serde(rename = "S")]
    pub s: i64,
    #[serde(rename = "T")]
    pub t: i64,
    pub main: i64,
    pub as_printed_main: i64,
    #[serde(rename = "J")]
    pub j: i64,
    /// Per table row, counted cell by cell from the table's `V` column.
    pub rows: BTreeMap<String, RowJumps>,
}

impl JumpComponents {
    /// `R + S + T + as_printed_main`.
    pub fn as_printed_j(&self) -> i64 {
        self.r + self.s + self.t + self.as_printed_main
    }

    /// Jump-ups summed over the per-row breakdown.
    pub fn row_ups(&self) -> i64 {
        self.rows.values().map(|r| r.ups).sum()
    }
}

pub fn closed_j(zp: &ZoneProfile) -> JumpComponents {
    let t = zp.triple();
    let a = |x: Label| zp.alpha(x);
    let b = |x: Label| zp.beta(x);
    let size = |x: Label, j: usize| zp.size(x, j);
    let m = |x: Label| t.modulus(x);

    let r = CYCLIC
        .iter()
        .map(|&[x, y, z]| a(x) * (size(y, 0) * size(z, 0) + size(y, 4) * size(z, 4)))
        .sum();
    let s = CYCLIC
        .iter()
        .map(|&[x, y, z]| zp.delta_aggregate(x) * a(x) * (b(y) - a(y)) * (b(z) - a(z)))
        .sum();
    let t_term = PERMUTATIONS
        .iter()
        .map(|&[x, y, z]| zp.delta(y, z) * (b(x) - a(x)) * (a(y) * size(z, 0) + a(z) * size(y, 4)))
        .sum();
    let main = CYCLIC
        .iter()
        .map(|&[x, y, z]| a(x) * a(y) * (m(z) - 2 * a(z)))
        .sum();
    let as_printed_main = CYCLIC
        .iter()
        .map(|&[x, y, z]| a(x) * a(y) * (m(z) - a(z) - b(z)))
        .sum();

    JumpComponents {
        r,
        s,
        t: t_term,
        main,
        as_printed_main,
        j: r + s + t_term + main,
        rows: row_breakdown(zp),
    }
}

/// Counts jumps cell by cell: every one of the 125 cells is classified, its
/// `V` read from the table, and its size added to the row's tally.
pub fn row_breakdown(zp: &ZoneProfile) -> BTreeMap<String, RowJumps> {
    let mut rows = BTreeMap::new();
    for cell in all_cells() {
        let size = zp.cell_size(cell);
        let Ok(cls) = classify_cell(cell) else {
            debug_assert_eq!(size, 0);
            continue;
        };
        let entry: &mut RowJumps = rows.entry(cls.pattern().to_string()).or_default();
        match table_v(zp, &cls) {
            1 => entry.ups += size,
            -1 => entry.downs += size,
            _ => {}
        }
    }
    rows.retain(|_, r| r.ups != 0 || r.downs != 0);
    rows
}

fn all_cells() -> impl Iterator<Item = [u8; 3]> {
    (0..125u8).map(|i| [i / 25, (i / 5) % 5, i % 5])
}

/// Sizes of both cells that must be empty, `(000)` and `(444)`.
pub fn forbidden_cell_sizes(zp: &ZoneProfile) -> [i64; 2] {
    [zp.cell_size([0, 0, 0]), zp.cell_size([4, 4, 4])]
}

/// Jump count as the nine cell-count sums that enumerate the up-jumping rows
/// of the table (the δ-weighted rows contribute only where the flags select
/// `V = 1`).
pub fn cell_count_j(zp: &ZoneProfile) -> i64 {
    let size = |x: Label, j: usize| zp.size(x, j);
    let d = |x: Label, y: Label| zp.delta(x, y);
    let cell = |[x, y, z]: [Label; 3], [i, j, k]: [usize; 3]| size(x, i) * size(y, j) * size(z, k);

    let cyclic = |pattern: [usize; 3], weight: &dyn Fn([Label; 3]) -> i64| -> i64 {
        CYCLIC
            .iter()
            .map(|&xyz| weight(xyz) * cell(xyz, pattern))
            .sum()
    };
    let full = |pattern: [usize; 3], weight: &dyn Fn([Label; 3]) -> i64| -> i64 {
        PERMUTATIONS
            .iter()
            .map(|&xyz| weight(xyz) * cell(xyz, pattern))
            .sum()
    };
    let one = |_: [Label; 3]| 1;

    cyclic([0, 0, 1], &one)
        + cyclic([0, 1, 1], &one)
        + cyclic([3, 3, 4], &one)
        + cyclic([3, 4, 4], &one)
        + full([1, 2, 3], &|[x, _, z]| d(x, z))
        + full([0, 1, 2], &|[x, y, _]| d(y, x))
        + full([2, 3, 4], &|[_, y, z]| d(z, y))
        + cyclic([1, 2, 2], &|[x, y, z]| d(x, y) * d(x, z))
        + cyclic([2, 2, 3], &|[x, y, z]| d(x, z) * d(y, z))
}

/// The two main-term pieces: `sum_cyc (x - alpha_x - beta_x) alpha_y alpha_z`
/// and `sum_cyc alpha_x alpha_y (beta_z - alpha_z)`.
pub fn main_term_parts(zp: &ZoneProfile) -> (i64, i64) {
    let t = zp.triple();
    let a = |x: Label| zp.alpha(x);
    let b = |x: Label| zp.beta(x);
    let first = CYCLIC
        .iter()
        .map(|&[x, y, z]| (t.modulus(x) - a(x) - b(x)) * a(y) * a(z))
        .sum();
    let second = CYCLIC
        .iter()
        .map(|&[x, y, z]| a(x) * a(y) * (b(z) - a(z)))
        .sum();
    (first, second)
}

/// Exact checks of `J^3 > n` and `theta^3 > n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: i64,
    /// `floor(n^{1/3})`.
    pub cube_root_floor: i64,
    pub j: i64,
    pub theta: i64,
    pub j_cubed_gt_n: bool,
    pub theta_cubed_gt_n: bool,
    /// `J^3 / n`.
    pub j_ratio: Ratio<u128>,
    /// `theta^3 / n`.
    pub theta_ratio: Ratio<u128>,
}

impl BoundReport {
    pub fn violation(&self) -> bool {
        !(self.j_cubed_gt_n && self.theta_cubed_gt_n)
    }
}

pub fn bound_report(t: &Triple, j: i64, theta: i64) -> BoundReport {
    let n = t.n() as u128;
    let cube = |v: i64| (v.max(0) as u128).pow(3);
    BoundReport {
        n: t.n(),
        cube_root_floor: crate::modular::icbrt(n) as i64,
        j,
        theta,
        j_cubed_gt_n: cube(j) > n,
        theta_cubed_gt_n: cube(theta) > n,
        j_ratio: Ratio::new(cube(j), n),
        theta_ratio: Ratio::new(cube(theta), n),
    }
}
