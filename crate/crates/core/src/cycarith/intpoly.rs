use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::euler_phi;

/// Dense integer polynomial, lowest degree first. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|c| BigInt::from(*c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        IntPoly::new(c)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut out = IntPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let neg = IntPoly::new(other.coeffs.iter().map(|c| -c).collect());
        self.add(&neg)
    }

    /// Division by a monic divisor: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient by a monic divisor, if it divides.
    pub fn exact_div_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

fn phi_cache() -> &'static Mutex<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `d`-th cyclotomic polynomial.
pub fn cyclotomic_poly(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic_poly needs d >= 1");
    if let Some(p) = phi_cache().lock().unwrap().get(&d) {
        return p.clone();
    }
    let mut p = IntPoly::x_pow_minus_one(d as usize);
    for e in super::divisors(d) {
        if e < d {
            p = p.exact_div_monic(&cyclotomic_poly(e)).expect("cyclotomic divisor");
        }
    }
    phi_cache().lock().unwrap().insert(d, p.clone());
    p
}

/// Every `d` with `phi(d) <= bound`, ascending. Uses `phi(d) >= sqrt(d/2)`.
pub(crate) fn orders_with_phi_at_most(bound: u64) -> Vec<u64> {
    let limit = 2 * bound * bound + 2;
    (1..=limit).filter(|d| euler_phi(*d) <= bound).collect()
}

/// Writes a monic polynomial as a product of cyclotomic polynomials.
///
/// Returns `(d, multiplicity)` pairs sorted by `d`, or `None` when some
/// irreducible factor is not cyclotomic.
pub fn factor_into_cyclotomics(p: &IntPoly) -> Option<Vec<(u64, u32)>> {
    if !p.is_monic() {
        return None;
    }
    let deg = p.degree().unwrap() as u64;
    let mut cands = orders_with_phi_at_most(deg);
    cands.sort_by_key(|d| std::cmp::Reverse((euler_phi(*d), *d)));
    let mut rest = p.clone();
    let mut found: Vec<(u64, u32)> = Vec::new();
    let two = BigInt::from(2);
    for d in cands {
        let rd = rest.degree().unwrap() as u64;
        if rd == 0 {
            break;
        }
        if euler_phi(d) > rd {
            continue;
        }
        let phi = cyclotomic_poly(d);
        // Phi_d | rest forces Phi_d(2) | rest(2); Phi_d(2) > 0 for d >= 2
        if d >= 2 && !(rest.eval(&two) % phi.eval(&two)).is_zero() {
            continue;
        }
        let mut mult = 0;
        while let Some(q) = rest.exact_div_monic(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((d, mult));
        }
    }
    if rest.degree() != Some(0) {
        return None;
    }
    found.sort();
    Some(found)
}

/// Expands `prod Phi_d^m`.
pub fn expand_cyclotomic_product(factors: &[(u64, u32)]) -> IntPoly {
    factors.iter().fold(IntPoly::one(), |acc, (d, m)| acc.mul(&cyclotomic_poly(*d).pow(*m)))
}

/// `Phi_d(1)`: `p` when `d` is a power of the prime `p`, 0 for `d = 1`, else 1.
pub fn cyclotomic_at_one(d: u64) -> BigInt {
    cyclotomic_poly(d).eval(&BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_phi(d: u64) -> IntPoly {
        // X^d - 1 divided by every Phi_e, e | d, e < d, computed afresh.
        let mut p = IntPoly::x_pow_minus_one(d as usize);
        for e in 1..d {
            if d % e == 0 {
                let (q, r) = p.div_rem_monic(&brute_phi(e));
                assert!(r.is_zero());
                p = q;
            }
        }
        p
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), brute_phi(12));
        assert_eq!(cyclotomic_poly(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=64u64 {
            let prod =
                super::super::divisors(n).into_iter().fold(IntPoly::one(), |acc, d| acc.mul(&cyclotomic_poly(d)));
            assert_eq!(prod, IntPoly::x_pow_minus_one(n as usize), "n = {n}");
            assert_eq!(cyclotomic_poly(n).degree().unwrap() as u64, euler_phi(n));
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_into_cyclotomics(&IntPoly::from_i64(&[1, -1, 1])), Some(vec![(6, 1)]));
        let sq = IntPoly::from_i64(&[1, 1, 1]).pow(2);
        assert_eq!(factor_into_cyclotomics(&sq), Some(vec![(3, 2)]));
        assert_eq!(factor_into_cyclotomics(&IntPoly::from_i64(&[1, 0, 0, 0, 1])), Some(vec![(8, 1)]));
        assert_eq!(factor_into_cyclotomics(&IntPoly::from_i64(&[2, 0, 0, 0, 1])), None);
        assert_eq!(factor_into_cyclotomics(&IntPoly::one()), Some(vec![]));
    }

    #[test]
    fn phi_at_one() {
        assert_eq!(cyclotomic_at_one(3), BigInt::from(3));
        assert_eq!(cyclotomic_at_one(4), BigInt::from(2));
        assert_eq!(cyclotomic_at_one(8), BigInt::from(2));
        assert_eq!(cyclotomic_at_one(6), BigInt::from(1));
        assert_eq!(cyclotomic_at_one(1), BigInt::from(0));
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -1, 1]).to_string(), "X^2 - X + 1");
        assert_eq!(IntPoly::from_i64(&[-1, 0, 2]).to_string(), "2X^2 - 1");
    }
}
