//! Integer utilities shared by the rest of the crate: extended gcd, modular
//! inverses, deterministic primality, and validation of the moduli triple.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported `n = p*q*r`. Keeps every product of three values and
/// every coefficient index comfortably inside `i64`.
pub const MAX_N: i64 = 1 << 40;

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)` and `g > 0`.
///
/// Panics if both inputs are zero.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    assert!(a != 0 || b != 0, "ext_gcd(0, 0) is undefined");
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Inverse of `a` modulo `m`, as an integer in `[1, m-1]`.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("modulus {m} < 2")));
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    if g != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok(x.rem_euclid(m))
}

/// `a * b mod m` without overflow, result in `[0, m)`.
pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    // First twelve primes form a deterministic witness set below 3.3e24.
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod_u64(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Floor of the cube root of `n`.
pub fn icbrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).cbrt() as u128;
    while x.checked_pow(3).is_none_or(|c| c > n) {
        x -= 1;
    }
    while (x + 1).checked_pow(3).is_some_and(|c| c <= n) {
        x += 1;
    }
    x
}

/// Label of one of the three moduli: 0 is `p`, 1 is `q`, 2 is `r`.
pub type Label = usize;

pub const LABELS: [Label; 3] = [0, 1, 2];

/// The two labels other than `x`, in increasing order.
pub const fn others(x: Label) -> (Label, Label) {
    match x {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// The label distinct from both `x` and `y` (`x != y`).
pub const fn third(x: Label, y: Label) -> Label {
    3 - x - y
}

/// Three pairwise coprime moduli, each greater than 2.
///
/// The labeling the caller supplied is kept: label 0 is `p`, 1 is `q`, 2 is
/// `r`. Every formula in the crate is symmetric, so the labeling only changes
/// which residue is called `a`, `b` or `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    moduli: [i64; 3],
    n: i64,
    phi: i64,
    strict_primes: bool,
}

impl Triple {
    pub fn p(&self) -> i64 {
        self.moduli[0]
    }

    pub fn q(&self) -> i64 {
        self.moduli[1]
    }

    pub fn r(&self) -> i64 {
        self.moduli[2]
    }

    pub fn moduli(&self) -> [i64; 3] {
        self.moduli
    }

    pub fn modulus(&self, x: Label) -> i64 {
        self.moduli[x]
    }

    /// `n = p*q*r`.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Degree of the polynomial, `(p-1)(q-1)(r-1)`.
    pub fn phi(&self) -> i64 {
        self.phi
    }

    pub fn strict_primes(&self) -> bool {
        self.strict_primes
    }

    /// Moduli in ascending order.
    pub fn sorted(&self) -> [i64; 3] {
        let mut s = self.moduli;
        s.sort_unstable();
        s
    }

    /// The same triple relabeled in ascending order.
    pub fn canonical(&self) -> Triple {
        Triple {
            moduli: self.sorted(),
            ..*self
        }
    }

    /// The triple relabeled so that new label `i` is old label `perm[i]`.
    pub fn permuted(&self, perm: [Label; 3]) -> Triple {
        Triple {
            moduli: [
                self.moduli[perm[0]],
                self.moduli[perm[1]],
                self.moduli[perm[2]],
            ],
            ..*self
        }
    }

    /// Inverse of modulus `of` modulo modulus `modulo`, in `[1, modulo-1]`.
    pub fn inverse(&self, of: Label, modulo: Label) -> i64 {
        mod_inverse(self.moduli[of], self.moduli[modulo])
            .expect("moduli of a validated triple are pairwise coprime")
    }

    /// Product of the two moduli other than `x`.
    pub fn cofactor(&self, x: Label) -> i64 {
        let (y, z) = others(x);
        self.moduli[y] * self.moduli[z]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.moduli[0], self.moduli[1], self.moduli[2]
        )
    }
}

/// Serialized as `[p, q, r]`.
impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.moduli.serialize(s)
    }
}

/// Validates `(p, q, r)` and builds a [`Triple`] keeping the given labeling.
pub fn validate_triple(p: i64, q: i64, r: i64, require_primes: bool) -> Result<Triple> {
    let moduli = [p, q, r];
    if let Some(&bad) = moduli.iter().find(|&&x| x <= 2) {
        return Err(Error::InvalidTriple(format!("{bad} is not greater than 2")));
    }
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let (a, b) = (moduli[x], moduli[y]);
        if a == b {
            return Err(Error::InvalidTriple(format!("{a} appears twice")));
        }
        let g = gcd(a, b);
        if g != 1 {
            return Err(Error::InvalidTriple(format!(
                "not pairwise coprime: gcd({a}, {b}) = {g}"
            )));
        }
    }
    let n = p
        .checked_mul(q)
        .and_then(|pq| pq.checked_mul(r))
        .filter(|&n| n <= MAX_N)
        .ok_or_else(|| Error::InvalidTriple(format!("n = {p}*{q}*{r} exceeds 2^40")))?;
    let phi = (p - 1) * (q - 1) * (r - 1);
    let strict_primes = moduli.iter().all(|&x| is_prime(x as u64));
    if require_primes {
        if let Some(&bad) = moduli.iter().find(|&&x| !is_prime(x as u64)) {
            return Err(Error::PrimalityRequired(bad));
        }
    }
    Ok(Triple {
        moduli,
        n,
        phi,
        strict_primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ext_gcd_examples() {
        let (g, x, y) = ext_gcd(35, 3);
        assert_eq!(g, 1);
        assert_eq!(35 * x + 3 * y, 1);
        let (g, x, y) = ext_gcd(6, 4);
        assert_eq!(g, 2);
        assert_eq!(6 * x + 4 * y, 2);
        assert_eq!(ext_gcd(1, 17), (1, 1, 0));
        let (g, x, y) = ext_gcd(-12, 18);
        assert_eq!(g, 6);
        assert_eq!(-12 * x + 18 * y, 6);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 11).unwrap(), 1);
        assert_eq!(mod_inverse(5, 3).unwrap(), 2);
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(-4, 7).unwrap(), 5);
        assert_eq!(mod_inverse(6, 9), Err(Error::NotCoprime { a: 6, m: 9 }));
        assert!(mod_inverse(3, 1).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(!is_prime(35));
        assert!(!is_prime(0) && !is_prime(1));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(is_prime(18_446_744_073_709_551_557));
        let trial = |n: u64| {
            n >= 2
                && (2..)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn cube_root() {
        assert_eq!(icbrt(0), 0);
        assert_eq!(icbrt(7), 1);
        assert_eq!(icbrt(8), 2);
        assert_eq!(icbrt(105), 4);
        assert_eq!(icbrt(u64::MAX as u128), 2_642_245);
    }

    #[test]
    fn triple_validation() {
        let t = validate_triple(3, 5, 7, true).unwrap();
        assert_eq!((t.n(), t.phi(), t.strict_primes()), (105, 48, true));

        let t = validate_triple(3, 17, 35, false).unwrap();
        assert!(!t.strict_primes());
        assert_eq!(
            validate_triple(3, 17, 35, true),
            Err(Error::PrimalityRequired(35))
        );

        assert!(matches!(
            validate_triple(3, 5, 9, false),
            Err(Error::InvalidTriple(_))
        ));
        assert!(matches!(
            validate_triple(2, 5, 7, false),
            Err(Error::InvalidTriple(_))
        ));
        assert!(matches!(
            validate_triple(5, 5, 7, false),
            Err(Error::InvalidTriple(_))
        ));
        assert!(matches!(
            validate_triple(1 << 20, (1 << 20) + 1, (1 << 20) + 3, false),
            Err(Error::InvalidTriple(_))
        ));
    }

    #[test]
    fn labeling_is_kept() {
        let t = validate_triple(7, 3, 5, true).unwrap();
        assert_eq!(t.moduli(), [7, 3, 5]);
        assert_eq!(t.sorted(), [3, 5, 7]);
        assert_eq!(t.canonical().moduli(), [3, 5, 7]);
        assert_eq!(t.permuted([1, 2, 0]).moduli(), [3, 5, 7]);
        assert_eq!(t.inverse(1, 0), 5); // 3^{-1} mod 7
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (2i64..5000, 2i64..5000).prop_filter("coprime", |&(a, b)| a != b && gcd(a, b) == 1)
    }

    proptest! {
        #[test]
        fn bezout(a in -100_000i64..100_000, b in -100_000i64..100_000) {
            prop_assume!(a != 0 || b != 0);
            let (g, x, y) = ext_gcd(a, b);
            prop_assert!(g > 0);
            prop_assert_eq!(a * x + b * y, g);
            prop_assert_eq!(a % g, 0);
            prop_assert_eq!(b % g, 0);
        }

        #[test]
        fn inverse_identity((p, q) in coprime_pair()) {
            let qi = mod_inverse(q, p).unwrap();
            let pi = mod_inverse(p, q).unwrap();
            prop_assert_eq!(q * qi + p * pi, p * q + 1);
        }

        #[test]
        fn inverse_is_involution((a, m) in coprime_pair()) {
            let inv = mod_inverse(a, m).unwrap();
            prop_assert!((1..m).contains(&inv));
            prop_assert_eq!(mul_mod(a, inv, m), 1);
            prop_assert_eq!(mod_inverse(inv, m).unwrap(), a.rem_euclid(m));
        }
    }
}
