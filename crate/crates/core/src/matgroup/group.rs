use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::MatgroupError;

/// A conjugacy class, members ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: u64,
    pub order_histogram: BTreeMap<u64, u64>,
    pub abelian: bool,
    pub center_order: u64,
    pub derived_order: u64,
    pub involutions: u64,
}

/// A finite group given by its multiplication table; element 0 is the identity.
///
/// Subgroups are ascending index lists into the parent.
#[derive(Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u64>,
    classes: OnceLock<(Vec<ConjClass>, Vec<usize>)>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            n: self.n,
            table: self.table.clone(),
            inv: self.inv.clone(),
            orders: self.orders.clone(),
            classes: OnceLock::new(),
        }
    }
}

impl FiniteGroup {
    /// Validates that `table` is a Latin square with identity 0.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self, MatgroupError> {
        if n == 0 || table.len() != n * n {
            return Err(MatgroupError::Shape(format!("table of length {} for order {n}", table.len())));
        }
        for i in 0..n {
            if table[i] as usize != i || table[i * n] as usize != i {
                return Err(MatgroupError::Shape("element 0 is not the identity".into()));
            }
        }
        let mut seen = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                let x = table[i * n + j] as usize;
                if x >= n || seen[x] == 2 * i + 1 {
                    return Err(MatgroupError::Shape(format!("row {i} is not a permutation")));
                }
                seen[x] = 2 * i + 1;
            }
        }
        for j in 0..n {
            for i in 0..n {
                let x = table[i * n + j] as usize;
                if seen[x] == 2 * j + 2 {
                    return Err(MatgroupError::Shape(format!("column {j} is not a permutation")));
                }
                seen[x] = 2 * j + 2;
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            let j = (0..n).find(|j| table[i * n + j] == 0).expect("row is a permutation");
            inv[i] = j as u32;
        }
        let mut orders = vec![1u64; n];
        for (i, o) in orders.iter_mut().enumerate() {
            let mut x = i;
            while x != 0 {
                x = table[x * n + i] as usize;
                *o += 1;
            }
        }
        Ok(FiniteGroup { n, table, inv, orders, classes: OnceLock::new() })
    }

    /// Breadth-first closure of `gens` under right multiplication.
    ///
    /// Elements are numbered in discovery order, applying generators in the
    /// order given. `key` must be injective on the group.
    pub fn closure<T, K, M, F>(
        gens: &[T],
        identity: T,
        mul: M,
        key: F,
        cap: usize,
    ) -> Result<(Vec<T>, FiniteGroup), MatgroupError>
    where
        K: Eq + Hash,
        M: Fn(&T, &T) -> T,
        F: Fn(&T) -> K,
    {
        let mut elems = vec![identity];
        let mut index: HashMap<K, u32> = HashMap::new();
        index.insert(key(&elems[0]), 0);
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        let mut i = 0;
        while i < elems.len() {
            for (gi, g) in gens.iter().enumerate() {
                let y = mul(&elems[i], g);
                let k = key(&y);
                let idx = match index.get(&k) {
                    Some(&idx) => idx,
                    None => {
                        if elems.len() >= cap {
                            return Err(MatgroupError::CapExceeded(cap));
                        }
                        let idx = elems.len() as u32;
                        index.insert(k, idx);
                        elems.push(y);
                        parent.push((i as u32, gi as u32));
                        idx
                    }
                };
                right[gi].push(idx);
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            table[x * n] = x as u32;
            for k in 1..n {
                let (p, gi) = parent[k];
                let xp = table[x * n + p as usize];
                table[x * n + k] = right[gi as usize][xp as usize];
            }
        }
        Ok((elems, FiniteGroup::from_table(n, table)?))
    }

    /// Closure of permutations in one-line notation; `(a b)(i) = a(b(i))`.
    pub fn from_permutations(gens: &[Vec<usize>], cap: usize) -> Result<(Vec<Vec<usize>>, FiniteGroup), MatgroupError> {
        let deg = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut s = g.clone();
            s.sort_unstable();
            if g.len() != deg || s.iter().enumerate().any(|(i, x)| i != *x) {
                return Err(MatgroupError::Shape(format!("{g:?} is not a permutation of 0..{deg}")));
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        FiniteGroup::closure(gens, id, |a, b| b.iter().map(|i| a[*i]).collect(), |p| p.clone(), cap)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let e = k.rem_euclid(o);
        (0..e).fold(0, |x, _| self.mul(x, a))
    }

    pub fn conjugate(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(by, x), self.inv(by))
    }

    pub fn elem_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn element_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |m, o| m.lcm(o))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|o| *o as usize == self.n)
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|i| inside[*i]).collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &x in set {
            if x >= self.n {
                return false;
            }
            inside[x] = true;
        }
        inside[0] && set.iter().all(|&a| set.iter().all(|&b| inside[self.mul(a, b)]))
    }

    fn class_data(&self) -> &(Vec<ConjClass>, Vec<usize>) {
        self.classes.get_or_init(|| {
            let mut of = vec![usize::MAX; self.n];
            let mut classes = Vec::new();
            for x in 0..self.n {
                if of[x] != usize::MAX {
                    continue;
                }
                let mut members: Vec<usize> = (0..self.n).map(|g| self.conjugate(x, g)).collect();
                members.sort_unstable();
                members.dedup();
                for &m in &members {
                    of[m] = classes.len();
                }
                classes.push(ConjClass { representative: x, members });
            }
            let mut perm: Vec<usize> = (0..classes.len()).collect();
            perm.sort_by_key(|&c| {
                (self.orders[classes[c].representative], classes[c].size(), classes[c].representative)
            });
            let mut rank = vec![0; classes.len()];
            for (r, &c) in perm.iter().enumerate() {
                rank[c] = r;
            }
            let sorted: Vec<ConjClass> = perm.iter().map(|&c| classes[c].clone()).collect();
            let of: Vec<usize> = of.iter().map(|c| rank[*c]).collect();
            (sorted, of)
        })
    }

    /// Classes ordered by element order, then size, then smallest member.
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.class_data().0
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_data().1[x]
    }

    pub fn centralizer(&self, set: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|&g| set.iter().all(|&s| self.mul(g, s) == self.mul(s, g))).collect()
    }

    pub fn center(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.n).collect();
        self.centralizer(&all)
    }

    pub fn normalizer(&self, h: &[usize]) -> Result<Vec<usize>, MatgroupError> {
        if !self.is_subgroup(h) {
            return Err(MatgroupError::NotSubgroup);
        }
        let mut inside = vec![false; self.n];
        for &x in h {
            inside[x] = true;
        }
        Ok((0..self.n).filter(|&g| h.iter().all(|&x| inside[self.conjugate(x, g)])).collect())
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comm = vec![false; self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                comm[c] = true;
            }
        }
        let gens: Vec<usize> = (0..self.n).filter(|i| comm[*i]).collect();
        self.generated(&gens)
    }

    /// A Sylow `p`-subgroup, grown one normalizing `p`-element at a time.
    ///
    /// A proper `p`-subgroup `H` of a Sylow subgroup `P` has `N_P(H) > H`, so the
    /// extension never stalls before reaching the full `p`-part.
    pub fn sylow_subgroup(&self, p: u64) -> Vec<usize> {
        let mut target = 1usize;
        let mut m = self.n;
        while p > 1 && m % p as usize == 0 {
            m /= p as usize;
            target *= p as usize;
        }
        let is_p_elem = |x: usize| {
            let mut o = self.orders[x];
            while o % p == 0 {
                o /= p;
            }
            o == 1
        };
        let mut h = vec![0usize];
        while h.len() < target {
            let mut inside = vec![false; self.n];
            for &x in &h {
                inside[x] = true;
            }
            let x = (0..self.n)
                .find(|&x| !inside[x] && is_p_elem(x) && h.iter().all(|&y| inside[self.conjugate(y, x)]))
                .expect("a proper p-subgroup has a normalizing p-element outside it");
            let mut gens = h.clone();
            gens.push(x);
            h = self.generated(&gens);
        }
        h
    }

    /// Whether the elements satisfying `pred` generate the group.
    pub fn is_generated_by(&self, pred: impl Fn(usize) -> bool) -> bool {
        let gens: Vec<usize> = (0..self.n).filter(|&x| pred(x)).collect();
        self.generated(&gens).len() == self.n
    }

    /// Greedy generating set: repeatedly add the element giving the largest subgroup,
    /// ties broken by smaller index.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut current = vec![0usize];
        while current.len() < self.n {
            let mut inside = vec![false; self.n];
            for &x in &current {
                inside[x] = true;
            }
            let mut best: Option<(usize, Vec<usize>)> = None;
            for x in (1..self.n).filter(|x| !inside[*x]) {
                let mut g = gens.clone();
                g.push(x);
                let s = self.generated(&g);
                if best.as_ref().is_none_or(|(_, b)| s.len() > b.len()) {
                    let full = s.len() == self.n;
                    best = Some((x, s));
                    if full {
                        break;
                    }
                }
            }
            let (x, s) = best.expect("a missing element exists");
            gens.push(x);
            current = s;
        }
        gens
    }

    /// The subgroup on `set` as a group in its own right, with `set[i] -> i`.
    pub fn subgroup(&self, set: &[usize]) -> Result<FiniteGroup, MatgroupError> {
        if !self.is_subgroup(set) {
            return Err(MatgroupError::NotSubgroup);
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos: HashMap<usize, u32> = sorted.iter().enumerate().map(|(i, x)| (*x, i as u32)).collect();
        let m = sorted.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in sorted.iter().enumerate() {
            for (j, &b) in sorted.iter().enumerate() {
                table[i * m + j] = pos[&self.mul(a, b)];
            }
        }
        FiniteGroup::from_table(m, table)
    }

    pub fn order_histogram(&self) -> BTreeMap<u64, u64> {
        let mut h = BTreeMap::new();
        for o in &self.orders {
            *h.entry(*o).or_insert(0) += 1;
        }
        h
    }

    pub fn has_element_of_order(&self, k: u64) -> bool {
        self.orders.contains(&k)
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        GroupFingerprint {
            order: self.n as u64,
            order_histogram: self.order_histogram(),
            abelian: self.is_abelian(),
            center_order: self.center().len() as u64,
            derived_order: self.derived_subgroup().len() as u64,
            involutions: self.orders.iter().filter(|o| **o == 2).count() as u64,
        }
    }

    /// Full associativity check, cubic in the order.
    pub fn is_associative(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let ab = self.mul(a, b);
                (0..self.n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroup {
        let g: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(&[g], 1000).unwrap().1
    }

    fn sl32() -> FiniteGroup {
        // collineations of the Fano plane with lines {i, i+1, i+3} mod 7
        let a: Vec<usize> = (0..7).map(|i| (i + 1) % 7).collect();
        let b: Vec<usize> = (0..7).map(|i| (2 * i) % 7).collect();
        let c: Vec<usize> = vec![0, 1, 4, 3, 2, 6, 5];
        FiniteGroup::from_permutations(&[a, b, c], 1000).unwrap().1
    }

    #[test]
    fn cyclic_six() {
        let g = cyclic(6);
        assert!(g.is_associative());
        let f = g.fingerprint();
        assert_eq!(f.order_histogram, BTreeMap::from([(1, 1), (2, 1), (3, 2), (6, 2)]));
        assert!(f.abelian);
        assert_eq!(g.conjugacy_classes().len(), 6);
        assert_eq!(g.sylow_subgroup(3).len(), 3);
        assert_eq!(g.sylow_subgroup(5), vec![0]);
        assert_eq!(g.generating_set().len(), 1);
    }

    #[test]
    fn fano_group() {
        let g = sl32();
        assert_eq!(g.order(), 168);
        assert_eq!(g.derived_subgroup().len(), 168);
        assert_eq!(g.center(), vec![0]);
        let s2 = g.sylow_subgroup(2);
        assert_eq!(s2.len(), 8);
        let s2g = g.subgroup(&s2).unwrap();
        assert!(!s2g.is_cyclic());
        assert!(s2g.fingerprint().involutions >= 2);
        let s7 = g.sylow_subgroup(7);
        let n = g.normalizer(&s7).unwrap();
        let c = g.centralizer(&s7);
        assert_eq!(n.len() / c.len(), 3);
        assert!(g.is_generated_by(|x| g.elem_order(x) == 7));
        let sizes: usize = g.conjugacy_classes().iter().map(|c| c.size()).sum();
        assert_eq!(sizes, 168);
    }

    #[test]
    fn frobenius_21_not_generated_by_sevens() {
        let a: Vec<usize> = (0..7).map(|i| (i + 1) % 7).collect();
        let b: Vec<usize> = (0..7).map(|i| (2 * i) % 7).collect();
        let (_, g) = FiniteGroup::from_permutations(&[a, b], 100).unwrap();
        assert_eq!(g.order(), 21);
        assert!(!g.is_generated_by(|x| g.elem_order(x) == 7));
        assert!(g.is_generated_by(|x| g.elem_order(x) == 3));
        assert!(g.is_generated_by(|_| true));
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 1]).is_err());
        assert!(FiniteGroup::from_table(2, vec![1, 0, 0, 1]).is_err());
        let r = FiniteGroup::from_permutations(&[(0..50).map(|i| (i + 1) % 50).collect()], 10);
        assert_eq!(r.unwrap_err(), MatgroupError::CapExceeded(10));
    }
}
