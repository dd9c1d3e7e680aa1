//! Ages, S-values, and the block, partition, junior-type and fourfold
//! enumerations built on them.

mod blocks;
mod charpoly;
mod fourfold;
mod junior_types;
mod multiset;

pub use blocks::{enumerate_blocks, enumerate_partitions, sigma, BlockRow, Partition};
pub use charpoly::{
    admissible_charpolys, field_factors, AdmissiblePoly, CharpolyConstraints, CharpolyError, FieldFactor,
};
pub use fourfold::{
    canonical_generator, certify_real_charpoly, classify_fourfold_elements, enumerate_fourfold_spectra, isogeny_tag,
    FourfoldElementClass, IsogenyTag,
};
pub use junior_types::{classify_junior_types, JuniorType};
pub use multiset::ExpMultiset;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cycarith::{euler_phi, rat_frac, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum JuniorError {
    #[error("order must be positive")]
    ZeroOrder,
    #[error("exponent {0} out of range for order {1}")]
    ExponentOutOfRange(u64, u64),
    #[error("malformed S-value input: {0}")]
    BadSValueInput(String),
}

/// Spectrum of a finite-order matrix: eigenvalues `exp(2 i pi a_k / d)`.
///
/// Exponents are sorted ascending and `gcd(a_1, ..., a_n, d) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankedEigenvector {
    d: u64,
    exps: Vec<u64>,
}

impl RankedEigenvector {
    /// Sorts the exponents and divides out any common factor with `d`.
    pub fn new(d: u64, exps: &[u64]) -> Result<Self, JuniorError> {
        if d == 0 {
            return Err(JuniorError::ZeroOrder);
        }
        if let Some(a) = exps.iter().find(|a| **a >= d) {
            return Err(JuniorError::ExponentOutOfRange(*a, d));
        }
        let g = exps.iter().fold(d, |g, a| g.gcd(a));
        let mut e: Vec<u64> = exps.iter().map(|a| a / g).collect();
        e.sort_unstable();
        Ok(RankedEigenvector { d: d / g, exps: e })
    }

    /// Exponents reduced mod `d` first.
    pub fn from_residues(d: u64, exps: &[i64]) -> Result<Self, JuniorError> {
        if d == 0 {
            return Err(JuniorError::ZeroOrder);
        }
        let r: Vec<u64> = exps.iter().map(|a| a.rem_euclid(d as i64) as u64).collect();
        Self::new(d, &r)
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    /// `a -> (d - a) mod d`.
    pub fn inverse(&self) -> RankedEigenvector {
        self.power(self.d as i64 - 1)
    }

    /// Spectrum of the `k`-th power, renormalized.
    pub fn power(&self, k: i64) -> RankedEigenvector {
        let d = self.d as i64;
        let r: Vec<i64> = self.exps.iter().map(|a| (*a as i64 * k).rem_euclid(d)).collect();
        RankedEigenvector::from_residues(self.d, &r).expect("valid order")
    }

    /// Number of eigenvalues equal to 1.
    pub fn fixed_multiplicity(&self) -> usize {
        self.exps.iter().filter(|a| **a == 0).count()
    }

    pub fn nonzero_count(&self) -> usize {
        self.exps.len() - self.fixed_multiplicity()
    }

    /// Nonzero exponents, ascending.
    pub fn tail(&self) -> Vec<u64> {
        self.exps.iter().copied().filter(|a| *a != 0).collect()
    }

    /// Exponent sum divisible by `d`.
    pub fn has_det_one(&self) -> bool {
        self.exps.iter().sum::<u64>() % self.d == 0
    }

    /// The multiset of eigenvalues together with their conjugates is stable
    /// under `Gal(Q(zeta_d)/Q)`, i.e. `P * conj(P)` has rational coefficients.
    pub fn has_rational_real_charpoly(&self) -> bool {
        let d = self.d;
        let mut m: Vec<u64> = self.exps.iter().flat_map(|a| [*a, (d - a) % d]).collect();
        m.sort_unstable();
        crate::cycarith::units_mod(d).into_iter().all(|k| {
            let mut km: Vec<u64> = m.iter().map(|a| a * k % d).collect();
            km.sort_unstable();
            km == m
        })
    }
}

impl std::fmt::Display for RankedEigenvector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|a| a.to_string()).collect();
        write!(f, "({})/{}", parts.join(","), self.d)
    }
}

/// `(a_1 + ... + a_n) / d`.
pub fn age(v: &RankedEigenvector) -> Rational {
    rat_frac(v.exps.iter().sum::<u64>() as i64, v.d as i64)
}

/// Age exactly 1. The geometric fixed-point condition is left to callers.
pub fn is_junior(v: &RankedEigenvector) -> bool {
    age(v) == rat_frac(1, 1)
}

/// For every `l` in `[1, d-1]`, at least `c + 1` exponents `a` with `d` not dividing `l a`.
///
/// Equivalently every nontrivial power has eigenvalue-1 multiplicity at most `n - c - 1`.
pub fn check_free_in_codim(v: &RankedEigenvector, c: usize) -> bool {
    (1..v.d).all(|l| v.exps.iter().filter(|a| (l * **a) % v.d != 0).count() > c)
}

/// `u >= 3` with `phi(u)^2 / u <= 8` when `u` is odd and `phi(u)^2 / u <= 4` when `u` is even.
///
/// Each prime-power factor `p^k` of a solution obeys `(p-1)^2 p^(k-2) <= 8`,
/// which bounds `u` by `2^5 3^2 5 7`.
pub fn solve_phi_inequality() -> Vec<u64> {
    let mut admissible_pp: Vec<Vec<u64>> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut powers = vec![1];
        let mut k = 1u32;
        loop {
            // (p-1)^2 p^(k-2) <= 8, i.e. (p-1)^2 p^k <= 8 p^2
            if (p - 1).pow(2) * p.pow(k) > 8 * p * p {
                break;
            }
            powers.push(p.pow(k));
            k += 1;
        }
        admissible_pp.push(powers);
    }
    let mut cands = vec![1u64];
    for powers in &admissible_pp {
        cands = cands.iter().flat_map(|c| powers.iter().map(move |q| c * q)).collect();
    }
    let mut out: Vec<u64> = cands
        .into_iter()
        .filter(|u| *u >= 3)
        .filter(|u| {
            let f = euler_phi(*u).pow(2);
            if u % 2 == 0 {
                f <= 4 * u
            } else {
                f <= 8 * u
            }
        })
        .collect();
    out.sort_unstable();
    out
}

/// `S_{A,d}(u) = sum_{a in A} a / (u (a gcd d))`.
pub fn s_value(a: &ExpMultiset, d: u64, u: u64) -> Result<Rational, JuniorError> {
    if u < 2 || d < 3 || d % u != 0 {
        return Err(JuniorError::BadSValueInput(format!("need u >= 2, d >= 3, u | d; got u = {u}, d = {d}")));
    }
    if a.order() != d {
        return Err(JuniorError::BadSValueInput(format!("multiset is over {}, not {d}", a.order())));
    }
    let mut s = rat_frac(0, 1);
    for (x, m) in a.iter() {
        let g = x.gcd(&d);
        if x == 0 || d / g != u {
            return Err(JuniorError::BadSValueInput(format!("exponent {x} does not have order {u} mod {d}")));
        }
        s += rat_frac((m as u64 * x) as i64, (u * g) as i64);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(d: u64, e: &[u64]) -> RankedEigenvector {
        RankedEigenvector::new(d, e).unwrap()
    }

    #[test]
    fn ages() {
        assert_eq!(age(&v(3, &[0, 0, 0, 1, 1, 1])), rat_frac(1, 1));
        assert_eq!(age(&v(1, &[0, 0, 0])), rat_frac(0, 1));
        assert_eq!(age(&v(7, &[0, 0, 1, 2, 4])), rat_frac(1, 1));
        assert!(is_junior(&v(7, &[0, 1, 2, 4])));
        assert!(!is_junior(&v(16, &[1, 7, 11, 13])));
    }

    #[test]
    fn gcd_normalization() {
        let w = v(12, &[4, 8, 0]);
        assert_eq!(w.order(), 3);
        assert_eq!(w.exponents(), &[0, 1, 2]);
    }

    #[test]
    fn phi_inequality() {
        let s = solve_phi_inequality();
        let mut expect: Vec<u64> = (3..=10).collect();
        expect.extend([12, 14, 15, 16, 18, 20, 21, 24, 30, 36, 42]);
        assert_eq!(s, expect);
        assert!(!s.contains(&11));
        // direct scan as an oracle
        let scan: Vec<u64> = (3..=1000)
            .filter(|u| {
                let f = euler_phi(*u).pow(2);
                (u % 2 == 1 && f <= 8 * u) || (u % 2 == 0 && f <= 4 * u)
            })
            .collect();
        assert_eq!(s, scan);
        // the looser disjunction would also admit these
        for u in [28u64, 32, 40, 48, 60] {
            assert!(euler_phi(u).pow(2) <= 8 * u && !s.contains(&u));
        }
    }

    #[test]
    fn s_values() {
        let a = ExpMultiset::from_exponents(6, &[3]);
        assert_eq!(s_value(&a, 6, 2).unwrap(), rat_frac(1, 2));
        let b = ExpMultiset::from_exponents(14, &[2, 4, 8]);
        assert_eq!(s_value(&b, 14, 7).unwrap(), rat_frac(1, 1));
        assert_eq!(s_value(&ExpMultiset::new(6), 6, 6).unwrap(), rat_frac(0, 1));
        assert!(s_value(&b, 14, 2).is_err());
        assert!(s_value(&a, 2, 2).is_err());
    }

    #[test]
    fn freeness() {
        assert!(check_free_in_codim(&v(3, &[1, 1, 1]), 2));
        assert!(check_free_in_codim(&v(6, &[0, 1, 1, 1, 3]), 2));
        assert!(!check_free_in_codim(&v(4, &[0, 0, 1, 2]), 2));
        assert!(check_free_in_codim(&v(4, &[0, 0, 1, 2]), 0));
        assert!(!check_free_in_codim(&v(3, &[0, 1, 1, 1]), 3));
    }

    #[test]
    fn rational_real_charpoly() {
        assert!(v(7, &[0, 1, 2, 4]).has_rational_real_charpoly());
        assert!(!v(5, &[0, 0, 1, 4]).has_rational_real_charpoly());
        assert!(v(5, &[1, 2, 3, 4]).has_rational_real_charpoly());
    }
}
