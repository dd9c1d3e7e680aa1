use num_integer::Integer;
use num_traits::{One, Zero};

use super::{check_free_in_codim, solve_phi_inequality, ExpMultiset, RankedEigenvector};
use crate::cycarith::{rat_frac, Rational};

/// One `(u, alpha, A/d, S)` row. `multiset` holds the numerators over `u`.
///
/// For `u >= 3` the block satisfies `A + (d - A) = {{a : ord(a) = u}}^{*alpha}`.
/// For `u = 2`, `alpha` is the size of `A`, so the identity holds with `2 alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockRow {
    pub u: u64,
    pub alpha: u32,
    pub multiset: ExpMultiset,
    pub s_value: Rational,
}

impl BlockRow {
    /// Exponents of the block written over a multiple `d` of `u`.
    pub fn exponents_over(&self, d: u64) -> Vec<u64> {
        self.multiset.rescale(d).to_vec()
    }

    /// The exponent in `A + (d - A) = {{...}}^{*e}`.
    pub fn identity_exponent(&self) -> u32 {
        if self.u == 2 {
            2 * self.alpha
        } else {
            self.alpha
        }
    }
}

/// `sum of l in [1, u/2]` coprime to `u`.
pub fn sigma(u: u64) -> u64 {
    (1..=u / 2).filter(|l| l.gcd(&u) == 1).sum()
}

fn sort_key(r: &BlockRow) -> (u64, u32, Rational, Vec<u64>) {
    (r.u, r.alpha, r.s_value.clone(), r.multiset.to_vec())
}

/// Every block with `S <= 1`, ordered by `u`, then `alpha`, then `S`.
pub fn enumerate_blocks() -> Vec<BlockRow> {
    let mut rows = Vec::new();
    let mut us = vec![2u64];
    us.extend(solve_phi_inequality());
    for u in us {
        if u == 2 {
            for alpha in 1..=2u32 {
                let mut m = ExpMultiset::new(2);
                m.insert(1, alpha);
                rows.push(BlockRow { u, alpha, multiset: m, s_value: rat_frac(alpha as i64, 2) });
            }
            continue;
        }
        let small: Vec<u64> = (1..u).filter(|l| 2 * l < u && l.gcd(&u) == 1).collect();
        let sig = sigma(u);
        let mut alpha = 1u32;
        while rat_frac(alpha as i64 * sig as i64, u as i64) <= Rational::one() {
            // m_l + m_{u-l} = alpha for each pair
            let mut counts = vec![0u32; small.len()];
            loop {
                let mut m = ExpMultiset::new(u);
                let mut total = 0u64;
                for (l, c) in small.iter().zip(&counts) {
                    m.insert(*l, *c);
                    m.insert(u - l, alpha - c);
                    total += *c as u64 * l + (alpha - c) as u64 * (u - l);
                }
                let s = rat_frac(total as i64, u as i64);
                if s <= Rational::one() {
                    rows.push(BlockRow { u, alpha, multiset: m, s_value: s });
                }
                let mut i = 0;
                while i < counts.len() && counts[i] == alpha {
                    counts[i] = 0;
                    i += 1;
                }
                if i == counts.len() {
                    break;
                }
                counts[i] += 1;
            }
            alpha += 1;
        }
    }
    rows.sort_by_key(sort_key);
    rows
}

/// Blocks with strictly increasing `u` and S-values summing to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    pub rows: Vec<BlockRow>,
    pub free_codim2: bool,
}

impl Partition {
    /// `lcm` of the `u`s.
    pub fn order(&self) -> u64 {
        self.rows.iter().fold(1, |m, r| m.lcm(&r.u))
    }

    /// The nonzero exponents realized at `d = lcm(u)`.
    pub fn tail(&self) -> RankedEigenvector {
        let d = self.order();
        let exps: Vec<u64> = self.rows.iter().flat_map(|r| r.exponents_over(d)).collect();
        RankedEigenvector::new(d, &exps).expect("exponents lie in range")
    }

    pub fn us(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.u).collect()
    }

    pub fn alphas(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.alpha).collect()
    }
}

/// Freeness in codimension 2 of the realized element; needs `d >= 3`.
fn partition_is_free(rows: &[BlockRow]) -> bool {
    let p = Partition { rows: rows.to_vec(), free_codim2: false };
    let t = p.tail();
    t.order() >= 3 && check_free_in_codim(&t, 2)
}

/// All partitions of 1 into block S-values, with the freeness flag.
pub fn enumerate_partitions() -> Vec<Partition> {
    let blocks = enumerate_blocks();
    let mut out = Vec::new();
    let mut stack: Vec<BlockRow> = Vec::new();
    fn go(blocks: &[BlockRow], start: usize, acc: &Rational, stack: &mut Vec<BlockRow>, out: &mut Vec<Partition>) {
        if acc.is_one() {
            out.push(Partition { rows: stack.clone(), free_codim2: partition_is_free(stack) });
            return;
        }
        for i in start..blocks.len() {
            let b = &blocks[i];
            if stack.last().is_some_and(|l| l.u >= b.u) {
                continue;
            }
            let next = acc + &b.s_value;
            if next > Rational::one() {
                continue;
            }
            stack.push(b.clone());
            go(blocks, i + 1, &next, stack, out);
            stack.pop();
        }
    }
    go(&blocks, 0, &Rational::zero(), &mut stack, &mut out);
    out.sort_by_key(|p| (p.us(), p.alphas(), p.rows.iter().map(|r| r.multiset.to_vec()).collect::<Vec<_>>()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_counts() {
        let rows = enumerate_blocks();
        assert_eq!(rows.len(), 45);
        let u16: Vec<_> = rows.iter().filter(|r| r.u == 16).collect();
        assert_eq!(u16.len(), 1);
        assert_eq!(u16[0].multiset.to_string(), "{1/16,3/16,5/16,7/16}");
        assert_eq!(u16[0].s_value, rat_frac(1, 1));
        let u6: Vec<_> = rows.iter().filter(|r| r.u == 6).collect();
        assert_eq!(u6.iter().map(|r| r.alpha).max(), Some(6));
        assert_eq!(u6[0].multiset.to_string(), "{1/6}");
        assert_eq!(u6[1].multiset.to_string(), "{5/6}");
        let u4a1: Vec<String> =
            rows.iter().filter(|r| r.u == 4 && r.alpha == 1).map(|r| r.multiset.to_string()).collect();
        assert_eq!(u4a1, vec!["{1/4}", "{3/4}"]);
    }

    #[test]
    fn block_identity() {
        for r in enumerate_blocks() {
            let d = r.u;
            let a = r.multiset.clone();
            let lhs = a.union(&a.complement());
            let rhs = ExpMultiset::of_order(d, r.u).star(r.identity_exponent());
            assert_eq!(lhs, rhs, "u = {} alpha = {}", r.u, r.alpha);
            if d >= 3 {
                assert_eq!(super::super::s_value(&a, d, r.u).unwrap(), r.s_value);
            }
            let d6 = d * 6;
            assert_eq!(super::super::s_value(&a.rescale(d6), d6, r.u).unwrap(), r.s_value);
        }
    }

    #[test]
    fn partition_counts() {
        let parts = enumerate_partitions();
        assert_eq!(parts.len(), 35);
        assert_eq!(parts.iter().filter(|p| p.free_codim2).count(), 12);
        for p in &parts {
            let s: Rational = p.rows.iter().map(|r| r.s_value.clone()).sum();
            assert!(s.is_one());
        }
    }
}
