//! The CRT coordinate system: every index `k` has a unique
//! `(F_k, a_k, b_k, c_k)` with `k + F_k*pqr = a_k*qr + b_k*rp + c_k*pq`,
//! together with the eight F-values around `k` that decide the jump.

use crate::error::{Error, Result};
use crate::modular::{mul_mod, others, Label, Triple, LABELS};

/// `(F_k, a_k, b_k, c_k)` for one index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Representation {
    pub k: i64,
    pub f: i64,
    /// Residues by label: `[a_k, b_k, c_k]`.
    pub residues: [i64; 3],
}

impl Representation {
    pub fn a(&self) -> i64 {
        self.residues[0]
    }

    pub fn b(&self) -> i64 {
        self.residues[1]
    }

    pub fn c(&self) -> i64 {
        self.residues[2]
    }

    pub fn residue(&self, x: Label) -> i64 {
        self.residues[x]
    }
}

/// Precomputed inverses `(qr)^{-1}(p)`, `(rp)^{-1}(q)`, `(pq)^{-1}(r)` so that
/// decompositions cost a handful of multiplications.
#[derive(Debug, Clone, Copy)]
pub struct CrtBasis {
    triple: Triple,
    cofactor_inverses: [i64; 3],
}

impl CrtBasis {
    pub fn new(triple: &Triple) -> Self {
        let cofactor_inverses = LABELS.map(|x| {
            let (y, z) = others(x);
            // (yz)^{-1} = y^{-1} z^{-1} modulo x
            mul_mod(
                triple.inverse(y, x),
                triple.inverse(z, x),
                triple.modulus(x),
            )
        });
        CrtBasis {
            triple: *triple,
            cofactor_inverses,
        }
    }

    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    pub fn decompose(&self, k: i64) -> Representation {
        let t = &self.triple;
        let residues = LABELS.map(|x| mul_mod(k, self.cofactor_inverses[x], t.modulus(x)));
        let weighted: i128 = LABELS
            .iter()
            .map(|&x| residues[x] as i128 * t.cofactor(x) as i128)
            .sum();
        let numerator = weighted - k as i128;
        let n = t.n() as i128;
        debug_assert_eq!(numerator % n, 0);
        Representation {
            k,
            f: (numerator / n) as i64,
            residues,
        }
    }

    pub fn f(&self, k: i64) -> i64 {
        self.decompose(k).f
    }

    /// F-values at `k` minus each subset-sum of the moduli.
    pub fn octuple(&self, k: i64) -> Result<Octuple> {
        let n = self.triple.n();
        if !(0..n).contains(&k) {
            return Err(Error::OutOfRange { k, n });
        }
        let shifts = Octuple::shifts(&self.triple);
        Ok(Octuple(shifts.map(|s| self.f(k - s))))
    }
}

pub fn decompose(t: &Triple, k: i64) -> Representation {
    CrtBasis::new(t).decompose(k)
}

pub fn octuple(t: &Triple, k: i64) -> Result<Octuple> {
    CrtBasis::new(t).octuple(k)
}

/// `(F_k, F_{k-p}, F_{k-q}, F_{k-r}, F_{k-q-r}, F_{k-r-p}, F_{k-p-q}, F_{k-p-q-r})`.
///
/// Positions 1..=3 hold the single shifts by label, positions 4..=6 the pair
/// shifts indexed by the label they leave out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Octuple(pub [i64; 8]);

impl Octuple {
    pub const K: usize = 0;
    pub const ALL: usize = 7;

    /// Position of `F_{k-x}`.
    pub const fn single(x: Label) -> usize {
        1 + x
    }

    /// Position of `F_{k-y-z}` where `{y, z}` is the complement of `x`.
    pub const fn pair_without(x: Label) -> usize {
        4 + x
    }

    /// Subset-sum shift of every position.
    pub fn shifts(t: &Triple) -> [i64; 8] {
        let [p, q, r] = t.moduli();
        [0, p, q, r, q + r, r + p, p + q, p + q + r]
    }

    /// Entries at even-parity positions `(F_k, F_{k-q-r}, F_{k-r-p}, F_{k-p-q})`.
    fn even(&self) -> [i64; 4] {
        let o = &self.0;
        [o[0], o[4], o[5], o[6]]
    }

    /// Entries at odd-parity positions `(F_{k-p}, F_{k-q}, F_{k-r}, F_{k-p-q-r})`.
    fn odd(&self) -> [i64; 4] {
        let o = &self.0;
        [o[1], o[2], o[3], o[7]]
    }

    /// Equal up to adding one integer to every entry.
    pub fn is_shift_equivalent(&self, other: &Octuple) -> bool {
        let u = self.0[0] - other.0[0];
        self.0.iter().zip(&other.0).all(|(a, b)| a - b == u)
    }

    /// Representative with first entry 0.
    pub fn normalized(&self) -> Octuple {
        let base = self.0[0];
        Octuple(self.0.map(|v| v - base))
    }

    pub fn alternating_sum(&self) -> i64 {
        self.even().iter().sum::<i64>() - self.odd().iter().sum::<i64>()
    }
}

fn count(values: &[i64; 4], target: i64) -> i64 {
    values.iter().filter(|&&v| v == target).count() as i64
}

/// `V(k)` from the octuple by counting zeros, twos and ones in the two
/// parity groups. All three counts must agree.
pub fn jump_from_octuple(o: &Octuple) -> Result<i64> {
    if let Some(&bad) = o.0.iter().find(|v| !(0..=2).contains(*v)) {
        return Err(Error::InvalidArgument(format!(
            "octuple entry {bad} not in {{0,1,2}}"
        )));
    }
    let (even, odd) = (o.even(), o.odd());
    let n0 = count(&even, 0) - count(&odd, 0);
    let n2 = count(&even, 2) - count(&odd, 2);
    let n1 = count(&odd, 1) - count(&even, 1);
    if n1 % 2 != 0 || n0 != n2 || n0 != n1 / 2 {
        return Err(Error::Inconsistent {
            n0,
            n2,
            n1_half: n1 / 2,
        });
    }
    Ok(n0)
}

/// Outcome of the structural checks at one index, per label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropositionChecks {
    /// All eight F-values lie in `{0, 1, 2}`.
    pub range: bool,
    /// `F_k - F_{k-x}` follows the threshold rule, indexed by the shift label `x`.
    pub shift_rule: [bool; 3],
    /// The four-term difference over the shifts other than `x` follows the
    /// zone rule on the residue of `x`.
    pub four_term: [bool; 3],
    /// Alternating eight-term sum vanishes.
    pub eight_term: bool,
    /// The three counting expressions for the jump agree.
    pub jump_consistent: bool,
}

impl PropositionChecks {
    pub fn all_pass(&self) -> bool {
        self.range
            && self.shift_rule.iter().all(|&b| b)
            && self.four_term.iter().all(|&b| b)
            && self.eight_term
            && self.jump_consistent
    }
}

/// Expected `F_k - F_{k-x}`: the residues of the other two labels `y`, `z`
/// are compared with `z^{-1}(y)` and `y^{-1}(z)`.
fn expected_shift_difference(t: &Triple, rep: &Representation, x: Label) -> i64 {
    let (y, z) = others(x);
    let below_y = rep.residue(y) < t.inverse(z, y);
    let below_z = rep.residue(z) < t.inverse(y, z);
    match (below_y, below_z) {
        (true, true) => -1,
        (false, false) => 1,
        _ => 0,
    }
}

/// Expected `F_k - F_{k-y} - F_{k-z} + F_{k-y-z}`: -1 on the second zone of
/// `x`, +1 on the fourth, 0 elsewhere. Interval bounds are taken straight from
/// the two inverses modulo `x`.
fn expected_four_term(t: &Triple, rep: &Representation, x: Label) -> i64 {
    let (y, z) = others(x);
    let (u, v) = (t.inverse(y, x), t.inverse(z, x));
    let m = t.modulus(x);
    let res = rep.residue(x);
    if (u + v - m..u.min(v)).contains(&res) {
        -1
    } else if (u.max(v)..u + v).contains(&res) {
        1
    } else {
        0
    }
}

/// Evaluates the structural identities of the F-values at `k`, for every
/// labeling. Failures are reported, never raised.
pub fn proposition_residuals(t: &Triple, k: i64) -> Result<PropositionChecks> {
    let basis = CrtBasis::new(t);
    proposition_residuals_with(&basis, k)
}

pub fn proposition_residuals_with(basis: &CrtBasis, k: i64) -> Result<PropositionChecks> {
    let t = basis.triple();
    let oct = basis.octuple(k)?;
    let rep = basis.decompose(k);
    let o = &oct.0;

    let range = o.iter().all(|v| (0..=2).contains(v));
    let shift_rule = LABELS
        .map(|x| o[Octuple::K] - o[Octuple::single(x)] == expected_shift_difference(t, &rep, x));
    let four_term = LABELS.map(|x| {
        let (y, z) = others(x);
        let diff = o[Octuple::K] - o[Octuple::single(y)] - o[Octuple::single(z)]
            + o[Octuple::pair_without(x)];
        diff == expected_four_term(t, &rep, x)
    });
    let eight_term = oct.alternating_sum() == 0;
    let jump_consistent = range && jump_from_octuple(&oct).is_ok();

    Ok(PropositionChecks {
        range,
        shift_rule,
        four_term,
        eight_term,
        jump_consistent,
    })
}
