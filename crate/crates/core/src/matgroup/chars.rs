use num_traits::Zero;
use serde::Serialize;

use super::{FiniteGroup, MatgroupError};
use crate::cycarith::{is_prime, prime_factors, rat, CycNum, Rational};

/// Irreducible characters, one row per character, one column per conjugacy class
/// in the order of [`FiniteGroup::conjugacy_classes`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub class_sizes: Vec<u64>,
    pub class_orders: Vec<u64>,
    pub representatives: Vec<usize>,
    pub degrees: Vec<u64>,
    pub characters: Vec<Vec<CycNum>>,
    pub exponent: u64,
}

impl CharacterTable {
    pub fn group_order(&self) -> u64 {
        self.class_sizes.iter().sum()
    }

    /// `sum_classes h chi conj(psi)`, i.e. `|G|` times the normalized inner product.
    pub fn raw_inner(&self, chi: &[CycNum], psi: &[CycNum]) -> CycNum {
        self.class_sizes
            .iter()
            .zip(chi.iter().zip(psi))
            .fold(CycNum::from_int(0), |s, (h, (a, b))| s.add_ref(&a.mul_ref(&b.conj()).scale(&rat(*h as i64))))
    }

    /// Row and column orthogonality, the degree column and `sum d^2 = |G|`, all exact.
    pub fn verify(&self) -> bool {
        let g = self.group_order();
        let r = self.class_sizes.len();
        if self.characters.len() != r {
            return false;
        }
        if self.degrees.iter().map(|d| d * d).sum::<u64>() != g {
            return false;
        }
        for (i, chi) in self.characters.iter().enumerate() {
            if chi[0] != CycNum::from_int(self.degrees[i] as i64) || g % self.degrees[i] != 0 {
                return false;
            }
            for (j, psi) in self.characters.iter().enumerate() {
                let want = if i == j { g as i64 } else { 0 };
                if self.raw_inner(chi, psi) != CycNum::from_int(want) {
                    return false;
                }
            }
        }
        for a in 0..r {
            for b in 0..r {
                let s = self
                    .characters
                    .iter()
                    .fold(CycNum::from_int(0), |s, chi| s.add_ref(&chi[a].mul_ref(&chi[b].conj())));
                let want = if a == b { (g / self.class_sizes[a]) as i64 } else { 0 };
                if s != CycNum::from_int(want) {
                    return false;
                }
            }
        }
        true
    }

    /// Multiplicities of each irreducible in a class function, if they are all
    /// non-negative integers.
    pub fn decompose(&self, chi: &[CycNum]) -> Option<Vec<u64>> {
        let g = rat(self.group_order() as i64);
        self.characters
            .iter()
            .map(|psi| {
                let q = self.raw_inner(chi, psi).to_rational()? / &g;
                (q.is_integer() && !q.numer().sign().eq(&num_bigint::Sign::Minus))
                    .then(|| q.to_integer().try_into().ok())
                    .flatten()
            })
            .collect()
    }
}

/// `<chi, chi>` normalized by `|G|`, which must be a positive integer.
pub fn splitting_coefficient(table: &CharacterTable, chi: &[CycNum]) -> Result<u64, MatgroupError> {
    let q: Rational =
        table.raw_inner(chi, chi).to_rational().ok_or(MatgroupError::NotACharacter)? / rat(table.group_order() as i64);
    if !q.is_integer() || q.is_zero() {
        return Err(MatgroupError::NotACharacter);
    }
    q.to_integer().try_into().map_err(|_| MatgroupError::NotACharacter)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Null space of a `rows x cols` matrix over `F_p`, as column vectors.
fn kernel_mod(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, k);
        let s = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][f]) % p;
            }
            v
        })
        .collect()
}

/// Smallest prime `p = 1 mod e` with `p > 2 sqrt(|G|)` and `p` coprime to `|G|`.
fn dixon_prime(order: u64, e: u64) -> u64 {
    let mut p = e + 1;
    loop {
        if is_prime(p) && p * p > 4 * order && order % p != 0 {
            return p;
        }
        p += e;
    }
}

fn primitive_root(p: u64) -> u64 {
    let qs = prime_factors(p - 1);
    (2..p).find(|g| qs.iter().all(|q| pow_mod(*g, (p - 1) / q, p) != 1)).expect("F_p^* is cyclic")
}

/// Dixon's method: common eigenvectors of the class-multiplication matrices modulo
/// a prime, lifted to exact values through eigenvalue multiplicities.
pub fn character_table(g: &FiniteGroup, cap: usize) -> Result<CharacterTable, MatgroupError> {
    let order = g.order() as u64;
    if g.order() > cap {
        return Err(MatgroupError::CapExceeded(cap));
    }
    let classes = g.conjugacy_classes();
    let r = classes.len();
    let e = g.exponent();
    let p = dixon_prime(order, e);
    let sizes: Vec<u64> = classes.iter().map(|c| c.size() as u64).collect();
    let inv_class: Vec<usize> = classes.iter().map(|c| g.class_of(g.inv(c.representative))).collect();

    // coef[j][i][k] = #{x in C_i : x^{-1} z_k in C_j}
    let mut coef = vec![vec![vec![0u64; r]; r]; r];
    for (k, ck) in classes.iter().enumerate() {
        let z = ck.representative;
        for (i, ci) in classes.iter().enumerate() {
            for &x in &ci.members {
                let y = g.mul(g.inv(x), z);
                coef[g.class_of(y)][i][k] += 1;
            }
        }
    }

    // subspaces as column-basis lists; split by each class matrix in turn
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|k| u64::from(i == k)).collect()).collect()];
    for m in coef.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            // A b for each basis column b
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| (0..r).map(|i| (0..r).fold(0, |s, k| (s + m[i][k] % p * b[k]) % p)).collect())
                .collect();
            let mut found = 0;
            for t in 0..p {
                let ker = kernel_mod(
                    (0..r)
                        .map(|i| basis.iter().zip(&images).map(|(b, ab)| (ab[i] + (p - t) * b[i]) % p).collect())
                        .collect(),
                    basis.len(),
                    p,
                );
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|y| (0..r).map(|i| basis.iter().zip(y).fold(0, |s, (b, c)| (s + b[i] * c) % p)).collect())
                    .collect();
                next.push(sub);
                if found == basis.len() {
                    break;
                }
            }
            if found != basis.len() {
                return Err(MatgroupError::Shape("class algebra did not split modulo p".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(MatgroupError::Shape("class algebra did not split modulo p".into()));
    }

    let z = pow_mod(primitive_root(p), (p - 1) / e, p);
    let order_mod = order % p;
    let mut chars: Vec<(u64, Vec<CycNum>)> = Vec::with_capacity(r);
    for s in &spaces {
        let v = &s[0];
        let scale = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|x| x * scale % p).collect();
        let sum = (0..r).fold(0, |acc, i| (acc + w[i] * w[inv_class[i]] % p * inv_mod(sizes[i] % p, p)) % p);
        let d2 = order_mod * inv_mod(sum, p) % p;
        let d = (1..)
            .take_while(|d| d * d <= order)
            .find(|d| d * d % p == d2)
            .ok_or(MatgroupError::Shape("degree not recovered modulo p".into()))?;
        let modvals: Vec<u64> = (0..r).map(|i| w[i] * d % p * inv_mod(sizes[i] % p, p) % p).collect();
        let mut values = Vec::with_capacity(r);
        for c in classes {
            let x = c.representative;
            let o = g.elem_order(x);
            let zo = pow_mod(z, e / o, p);
            let mut counts = vec![Rational::zero(); o as usize];
            for (k, slot) in counts.iter_mut().enumerate() {
                let mut acc = 0u64;
                for l in 0..o {
                    let val = modvals[g.class_of(g.pow(x, l as i64))];
                    let root = pow_mod(zo, (o - (k as u64 * l) % o) % o, p);
                    acc = (acc + val * root) % p;
                }
                let m = acc * inv_mod(o % p, p) % p;
                if m > d {
                    return Err(MatgroupError::Shape("eigenvalue multiplicity out of range".into()));
                }
                *slot = rat(m as i64);
            }
            values.push(CycNum::from_exponent_counts(o, &counts).embed(e));
        }
        chars.push((d, values));
    }
    // trivial character first, then by degree and values
    chars.sort_by_cached_key(|(d, vals)| {
        let nontrivial = vals.iter().any(|x| !x.is_one());
        (
            *d,
            nontrivial,
            vals.iter().map(|x| x.coefficients().iter().map(|q| -q.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        )
    });
    let table = CharacterTable {
        class_sizes: sizes,
        class_orders: classes.iter().map(|c| g.elem_order(c.representative)).collect(),
        representatives: classes.iter().map(|c| c.representative).collect(),
        degrees: chars.iter().map(|c| c.0).collect(),
        characters: chars.into_iter().map(|c| c.1).collect(),
        exponent: e,
    };
    Ok(table)
}
