//! Five-zone partition of each residue range, the alpha/beta/delta
//! parameters, and the jump table that turns a zone cell into `V(k)`.
//!
//! For a label `x` with others `y`, `z`, let `u = y^{-1}(x)` and
//! `v = z^{-1}(x)`. The zones of `[0, x)` are cut at `u + v - x`,
//! `min(u, v)`, `max(u, v)` and `u + v`:
//!
//! ```text
//! A_0 = [0, u+v-x)  A_1 = [u+v-x, min)  A_2 = [min, max)
//! A_3 = [max, u+v)  A_4 = [u+v, x)
//! ```
//!
//! each intersected with `[0, x)`. A cell `(j_p, j_q, j_r)` is evaluated by
//! relabeling the moduli so the zone indices become nondecreasing and reading
//! the matching table row with its flags relabeled the same way.

pub mod table;

use crate::error::{Error, Result};
use crate::modular::{mod_inverse, mul_mod, others, third, Label, Triple, LABELS};
use crate::repr::{Octuple, Representation};

use table::{parsed_rows, row_index, ParsedRow};

/// Zone structure of one triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneProfile {
    triple: Triple,
    /// `inverses[of][modulo]`, zero on the diagonal.
    inverses: [[i64; 3]; 3],
    /// Cut points `[0, u+v-x, min, max, u+v, x]` per label, before clamping.
    cuts: [[i64; 6]; 3],
    sizes: [[i64; 5]; 3],
    alpha: [i64; 3],
    beta: [i64; 3],
    /// `delta[x][y] = 1` iff `x^{-1}(z) < y^{-1}(z)`, `z` the third label.
    delta: [[i64; 3]; 3],
}

impl ZoneProfile {
    pub fn new(triple: &Triple) -> Result<ZoneProfile> {
        let mut inverses = [[0i64; 3]; 3];
        for x in LABELS {
            for y in LABELS {
                if x != y {
                    inverses[x][y] = triple.inverse(x, y);
                }
            }
        }

        let mut cuts = [[0i64; 6]; 3];
        let mut sizes = [[0i64; 5]; 3];
        let mut alpha = [0i64; 3];
        let mut beta = [0i64; 3];
        for x in LABELS {
            let (y, z) = others(x);
            let m = triple.modulus(x);
            let (u, v) = (inverses[y][x], inverses[z][x]);
            cuts[x] = [0, u + v - m, u.min(v), u.max(v), u + v, m];
            let clamp = |c: i64| c.clamp(0, m);
            for j in 0..5 {
                sizes[x][j] = (clamp(cuts[x][j + 1]) - clamp(cuts[x][j])).max(0);
            }
            alpha[x] = u.min(v).min(m - u).min(m - v);
            beta[x] = alpha[x] + sizes[x][2];
        }

        let mut delta = [[0i64; 3]; 3];
        for x in LABELS {
            for y in LABELS {
                if x != y {
                    let z = third(x, y);
                    delta[x][y] = i64::from(inverses[x][z] < inverses[y][z]);
                }
            }
        }

        let zp = ZoneProfile {
            triple: *triple,
            inverses,
            cuts,
            sizes,
            alpha,
            beta,
            delta,
        };
        zp.check_invariants()?;
        Ok(zp)
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InternalInconsistency(msg));
        for x in LABELS {
            let m = self.triple.modulus(x);
            let s = &self.sizes[x];
            let (a, b) = (self.alpha[x], self.beta[x]);
            if s.iter().sum::<i64>() != m {
                return fail(format!("zones of label {x} do not partition [0, {m})"));
            }
            if s[1] != a || s[3] != a {
                return fail(format!("#A_1 = {}, #A_3 = {}, alpha = {a}", s[1], s[3]));
            }
            if s[0] + s[4] != m - a - b {
                return fail(format!("#A_0 + #A_4 != {m} - alpha - beta"));
            }
            if s[0] > 0 && s[4] > 0 {
                return fail(format!("A_0 and A_4 both nonempty for label {x}"));
            }
            let modular = mod_inverse(mul_mod(a, self.triple.cofactor(x), m), m)
                .map_err(|e| Error::InternalInconsistency(format!("beta modular form: {e}")))?;
            if modular != b {
                return fail(format!("beta by cardinality {b} != modular form {modular}"));
            }
        }
        for x in LABELS {
            for y in LABELS {
                if x < y {
                    let z = third(x, y);
                    let sum = self.delta[x][y] + self.delta[y][x];
                    let tie = self.inverses[x][z] == self.inverses[y][z];
                    if sum != i64::from(!tie) || (tie && self.sizes[z][2] != 0) {
                        return fail(format!("order flags for ({x}, {y}) inconsistent"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    /// `of^{-1}(modulo)`.
    pub fn inverse(&self, of: Label, modulo: Label) -> i64 {
        self.inverses[of][modulo]
    }

    pub fn alpha(&self, x: Label) -> i64 {
        self.alpha[x]
    }

    pub fn beta(&self, x: Label) -> i64 {
        self.beta[x]
    }

    /// `#A^x_j`.
    pub fn size(&self, x: Label, j: usize) -> i64 {
        self.sizes[x][j]
    }

    pub fn sizes(&self, x: Label) -> [i64; 5] {
        self.sizes[x]
    }

    /// Half-open bounds of `A^x_j` after intersecting with `[0, x)`.
    pub fn zone_bounds(&self, x: Label, j: usize) -> (i64, i64) {
        let m = self.triple.modulus(x);
        let lo = self.cuts[x][j].clamp(0, m);
        (lo, self.cuts[x][j + 1].clamp(0, m).max(lo))
    }

    /// `delta_xy`.
    pub fn delta(&self, x: Label, y: Label) -> i64 {
        self.delta[x][y]
    }

    /// `delta_x = delta_xy*delta_xz + delta_yx*delta_zx`.
    pub fn delta_aggregate(&self, x: Label) -> i64 {
        let (y, z) = others(x);
        self.delta[x][y] * self.delta[x][z] + self.delta[y][x] * self.delta[z][x]
    }

    /// Zone index of a residue modulo label `x`.
    pub fn zone_of(&self, x: Label, residue: i64) -> u8 {
        let c = &self.cuts[x];
        (0..5)
            .find(|&j| c[j] <= residue && residue < c[j + 1])
            .expect("residue lies in [0, x)") as u8
    }

    /// Number of residue triples in a cell.
    pub fn cell_size(&self, cell: [u8; 3]) -> i64 {
        LABELS
            .iter()
            .map(|&x| self.sizes[x][cell[x] as usize])
            .product()
    }
}

pub fn zone_profile(t: &Triple) -> Result<ZoneProfile> {
    ZoneProfile::new(t)
}

/// Zone cell of one index together with its table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpClass {
    /// Zone of `a_k`, `b_k`, `c_k`.
    pub cell: [u8; 3],
    /// Index into [`table::ROWS`].
    pub row: usize,
    /// `perm[i]` is the actual label playing table label `i`.
    pub perm: [Label; 3],
}

impl JumpClass {
    pub fn pattern(&self) -> &'static str {
        table::ROWS[self.row].pattern
    }

    fn parsed(&self) -> &'static ParsedRow {
        &parsed_rows()[self.row]
    }
}

/// Labels sorted by zone, ties by label.
pub fn sorting_permutation(cell: [u8; 3]) -> [Label; 3] {
    let mut perm = LABELS;
    perm.sort_by_key(|&x| (cell[x], x));
    perm
}

/// Every permutation that sorts the cell, for checking tie invariance.
pub fn all_sorting_permutations(cell: [u8; 3]) -> Vec<[Label; 3]> {
    const PERMS: [[Label; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS
        .into_iter()
        .filter(|p| cell[p[0]] <= cell[p[1]] && cell[p[1]] <= cell[p[2]])
        .collect()
}

/// Class of a cell under an explicit sorting permutation.
pub fn class_with_perm(cell: [u8; 3], perm: [Label; 3]) -> Result<JumpClass> {
    let pattern = perm.map(|x| cell[x]);
    if pattern[0] > pattern[1] || pattern[1] > pattern[2] {
        return Err(Error::InvalidArgument(format!(
            "{perm:?} does not sort {cell:?}"
        )));
    }
    let row = row_index(pattern).ok_or(Error::EmptyCell(cell))?;
    Ok(JumpClass { cell, row, perm })
}

pub fn classify_cell(cell: [u8; 3]) -> Result<JumpClass> {
    class_with_perm(cell, sorting_permutation(cell))
}

pub fn classify(zp: &ZoneProfile, rep: &Representation) -> Result<JumpClass> {
    let cell = LABELS.map(|x| zp.zone_of(x, rep.residue(x)));
    classify_cell(cell)
}

/// `V(k)` read from the table at the class's row and permutation.
pub fn table_v(zp: &ZoneProfile, cls: &JumpClass) -> i64 {
    cls.parsed()
        .v
        .eval(|a, b| zp.delta(cls.perm[a], cls.perm[b]))
}

fn instantiate(zp: &ZoneProfile, cls: &JumpClass, template: &[table::Expr; 8]) -> Octuple {
    let flag = |a: Label, b: Label| zp.delta(cls.perm[a], cls.perm[b]);
    let mut out = [0i64; 8];
    out[Octuple::K] = template[Octuple::K].eval(flag);
    out[Octuple::ALL] = template[Octuple::ALL].eval(flag);
    for i in LABELS {
        let actual = cls.perm[i];
        out[Octuple::single(actual)] = template[Octuple::single(i)].eval(flag);
        out[Octuple::pair_without(actual)] = template[Octuple::pair_without(i)].eval(flag);
    }
    Octuple(out)
}

/// Predicted octuple (up to shift) in the actual positional order.
pub fn table_octuple(zp: &ZoneProfile, cls: &JumpClass) -> Octuple {
    instantiate(zp, cls, &cls.parsed().octuple)
}

/// Same as [`table_octuple`] but from the template exactly as printed.
pub fn table_octuple_as_printed(zp: &ZoneProfile, cls: &JumpClass) -> Octuple {
    instantiate(zp, cls, &cls.parsed().printed_octuple)
}

/// Which of `y^{-1}(x) + z^{-1}(x) > x` hold, over the three labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaStatus {
    pub holds: [bool; 3],
    pub count: u8,
    /// The only true inequality when one holds, the only false one when two do.
    pub distinguished: Label,
}

pub fn lemma_r_status(t: &Triple) -> Result<LemmaStatus> {
    let holds = LABELS.map(|x| {
        let (y, z) = others(x);
        t.inverse(y, x) + t.inverse(z, x) > t.modulus(x)
    });
    let count = holds.iter().filter(|&&h| h).count() as u8;
    let distinguished = match count {
        1 => holds.iter().position(|&h| h),
        2 => holds.iter().position(|&h| !h),
        _ => None,
    }
    .ok_or(Error::LemmaViolation { count })?;
    Ok(LemmaStatus {
        holds,
        count,
        distinguished,
    })
}
