use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycarith::{rat_frac, render_rational, Rational};

/// Finite multiset of exponents in `[0, d-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExpMultiset {
    d: u64,
    entries: BTreeMap<u64, u32>,
}

impl ExpMultiset {
    pub fn new(d: u64) -> Self {
        assert!(d >= 1, "multiset order must be positive");
        ExpMultiset { d, entries: BTreeMap::new() }
    }

    /// Exponents are reduced mod `d`.
    pub fn from_exponents(d: u64, exps: &[u64]) -> Self {
        let mut m = Self::new(d);
        for a in exps {
            m.insert(*a % d, 1);
        }
        m
    }

    pub fn insert(&mut self, a: u64, mult: u32) {
        assert!(a < self.d, "exponent out of range");
        if mult > 0 {
            *self.entries.entry(a).or_default() += mult;
        }
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    /// `(exponent, multiplicity)` pairs, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.entries.iter().map(|(a, m)| (*a, *m))
    }

    pub fn multiplicity(&self, a: u64) -> u32 {
        self.entries.get(&a).copied().unwrap_or(0)
    }

    /// `|A|`, the sum of multiplicities.
    pub fn cardinality(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exponents with repetition, ascending.
    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().flat_map(|(a, m)| std::iter::repeat_n(a, m as usize)).collect()
    }

    pub fn union(&self, other: &ExpMultiset) -> ExpMultiset {
        assert_eq!(self.d, other.d, "union needs a common order");
        let mut out = self.clone();
        for (a, m) in other.iter() {
            out.insert(a, m);
        }
        out
    }

    /// `d - A`, with `0` kept at `0`.
    pub fn complement(&self) -> ExpMultiset {
        let mut out = Self::new(self.d);
        for (a, m) in self.iter() {
            out.insert((self.d - a) % self.d, m);
        }
        out
    }

    /// `A^{*alpha}`: every multiplicity scaled by `alpha`.
    pub fn star(&self, alpha: u32) -> ExpMultiset {
        ExpMultiset {
            d: self.d,
            entries: self.entries.iter().map(|(a, m)| (*a, m * alpha)).filter(|(_, m)| *m > 0).collect(),
        }
    }

    /// The same fractions `a/d` written over a multiple `m` of `d`.
    pub fn rescale(&self, m: u64) -> ExpMultiset {
        assert!(m % self.d == 0, "rescale target must be a multiple of the order");
        let f = m / self.d;
        ExpMultiset { d: m, entries: self.entries.iter().map(|(a, k)| (a * f, *k)).collect() }
    }

    /// `{{a in [1, d-1] : d / gcd(a, d) = u}}`.
    pub fn of_order(d: u64, u: u64) -> ExpMultiset {
        let exps: Vec<u64> = (1..d).filter(|a| d / num_integer::gcd(*a, d) == u).collect();
        Self::from_exponents(d, &exps)
    }

    /// The fractions `a/d` with repetition.
    pub fn fractions(&self) -> Vec<Rational> {
        self.to_vec().into_iter().map(|a| rat_frac(a as i64, self.d as i64)).collect()
    }
}

impl fmt::Display for ExpMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fractions().iter().map(render_rational).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operations() {
        let a = ExpMultiset::from_exponents(8, &[1, 3]);
        let u = a.union(&a.complement());
        assert_eq!(u, ExpMultiset::of_order(8, 8));
        assert_eq!(a.star(2).cardinality(), 4);
        assert_eq!(a.rescale(16).to_vec(), vec![2, 6]);
        assert_eq!(a.to_string(), "{1/8,3/8}");
        assert_eq!(ExpMultiset::from_exponents(6, &[0]).complement().to_vec(), vec![0]);
    }
}
