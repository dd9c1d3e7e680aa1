//! Exact arithmetic over the rationals, cyclotomic fields and `Z[X]`.

mod cycnum;
mod cycpoly;
mod hnf;
mod intpoly;
mod rational;

pub use cycnum::{CycNum, RootOfUnity};
pub use cycpoly::{factor_phi7_over_qu7, CycPoly, QuadField};
pub use hnf::{hermite_normal_form, is_hnf, mat_mul, triangular_det, HnfError, IntMatrix};
pub use intpoly::{cyclotomic_at_one, cyclotomic_poly, expand_cyclotomic_product, factor_into_cyclotomics, IntPoly};
pub use rational::{parse_rational, rat, rat_frac, render_rational, Rational};

use num_integer::Integer;

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi needs n >= 1");
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct prime factors, ascending.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut m = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Units of `Z/nZ`, ascending.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|k| gcd(*k, n) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(16), 8);
        for n in 1..200u64 {
            let brute = (1..=n).filter(|k| gcd(*k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute);
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(prime_factors(168), vec![2, 3, 7]);
    }
}
