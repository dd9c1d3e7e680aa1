use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MatgroupError;
use crate::cycarith::{factor_into_cyclotomics, lcm, rat_frac, units_mod, CycNum, CycPoly};
use crate::juniorenum::RankedEigenvector;

/// Largest order tried when powering a matrix to the identity.
const ORDER_CAP: u64 = 1 << 16;

/// Square matrix over `Q(zeta_N)`, every entry stored at the same conductor `N`.
#[derive(Clone, Debug)]
pub struct MatrixOverCyc {
    n: usize,
    conductor: u64,
    entries: Vec<CycNum>,
}

impl MatrixOverCyc {
    /// Row-major entries; they are embedded into the lcm of their conductors.
    pub fn new(n: usize, entries: Vec<CycNum>) -> Result<Self, MatgroupError> {
        if n == 0 || entries.len() != n * n {
            return Err(MatgroupError::Shape(format!("{} entries for dimension {n}", entries.len())));
        }
        let conductor = entries.iter().fold(1, |m, c| lcm(m, c.conductor()));
        Ok(MatrixOverCyc { n, conductor, entries: entries.iter().map(|c| c.embed(conductor)).collect() })
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self, MatgroupError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatgroupError::Shape("rows of unequal length".into()));
        }
        MatrixOverCyc::new(n, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        MatrixOverCyc::diagonal(&vec![CycNum::from_int(1); n])
    }

    pub fn diagonal(d: &[CycNum]) -> Self {
        let n = d.len();
        let mut e = vec![CycNum::from_int(0); n * n];
        for (i, x) in d.iter().enumerate() {
            e[i * n + i] = x.clone();
        }
        MatrixOverCyc::new(n, e).expect("square by construction")
    }

    /// `e_i -> e_{images[i]}` for a one-line permutation on `0..n`.
    pub fn from_permutation(images: &[usize]) -> Result<Self, MatgroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(MatgroupError::Shape(format!("{images:?} is not a permutation")));
            }
        }
        let mut e = vec![CycNum::from_int(0); n * n];
        for (i, &j) in images.iter().enumerate() {
            e[j * n + i] = CycNum::from_int(1);
        }
        MatrixOverCyc::new(n, e)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.n + j]
    }

    pub fn embed(&self, m: u64) -> MatrixOverCyc {
        let c = lcm(m, self.conductor);
        MatrixOverCyc { n: self.n, conductor: c, entries: self.entries.iter().map(|x| x.embed(c)).collect() }
    }

    pub fn mul(&self, other: &MatrixOverCyc) -> Result<MatrixOverCyc, MatgroupError> {
        if self.n != other.n {
            return Err(MatgroupError::Shape(format!("dimensions {} and {}", self.n, other.n)));
        }
        let c = lcm(self.conductor, other.conductor);
        let (a, b) = (self.embed(c), other.embed(c));
        let n = self.n;
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut s = CycNum::zero(c);
                for k in 0..n {
                    let x = &a.entries[i * n + k];
                    let y = &b.entries[k * n + j];
                    if !x.is_zero() && !y.is_zero() {
                        s = s.add_ref(&x.mul_ref(y));
                    }
                }
                e.push(s);
            }
        }
        Ok(MatrixOverCyc { n, conductor: c, entries: e })
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> MatrixOverCyc {
        MatrixOverCyc { n: self.n, conductor: self.conductor, entries: self.entries.iter().map(|x| x.conj()).collect() }
    }

    pub fn block_diag(&self, other: &MatrixOverCyc) -> MatrixOverCyc {
        let n = self.n + other.n;
        let mut e = vec![CycNum::from_int(0); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                e[i * n + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                e[(self.n + i) * n + self.n + j] = other.entry(i, j).clone();
            }
        }
        MatrixOverCyc::new(n, e).expect("square by construction")
    }

    pub fn trace(&self) -> CycNum {
        (0..self.n).fold(CycNum::zero(self.conductor), |s, i| s.add_ref(self.entry(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n)
            .all(|i| (0..self.n).all(|j| if i == j { self.entry(i, j).is_one() } else { self.entry(i, j).is_zero() }))
    }

    /// Characteristic polynomial `det(X - M)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> CycPoly {
        let n = self.n;
        let c = self.conductor;
        let mut coeffs = vec![CycNum::zero(c); n + 1];
        coeffs[n] = CycNum::one(c);
        let mut m = MatrixOverCyc { n, conductor: c, entries: vec![CycNum::zero(c); n * n] };
        for k in 1..=n {
            for i in 0..n {
                let d = &mut m.entries[i * n + i];
                *d = d.add_ref(&coeffs[n - k + 1]);
            }
            m = self.mul(&m).expect("same dimension");
            coeffs[n - k] = m.trace().scale(&rat_frac(-1, k as i64));
        }
        CycPoly::new(coeffs)
    }

    pub fn det(&self) -> CycNum {
        let p = self.charpoly();
        let c0 = p.coeffs().first().cloned().unwrap_or_else(|| CycNum::from_int(0));
        if self.n % 2 == 1 {
            -c0
        } else {
            c0
        }
    }

    /// Multiplicative order, searching up to `cap`.
    pub fn order(&self, cap: u64) -> Result<u64, MatgroupError> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.is_identity() {
                return Ok(k);
            }
            p = p.mul(self)?;
        }
        Err(MatgroupError::InfiniteOrder(cap))
    }

    /// Eigenvalues as a ranked vector.
    ///
    /// `P conj(P)` is factored into cyclotomics; each primitive root of each factor
    /// is then tested against `P` by exact division. When the spectrum is not
    /// Galois-stable, `P conj(P)` is not rational and the order is found by powering.
    pub fn ranked_eigenvalues(&self) -> Result<RankedEigenvector, MatgroupError> {
        let p = self.charpoly();
        let Some(real) = p.mul(&p.conj()).to_int_poly() else {
            return self.eigenvalues_by_order(&p);
        };
        let factors = factor_into_cyclotomics(&real).ok_or(MatgroupError::NotCyclotomic)?;
        let d = factors.iter().fold(1, |m, (u, _)| lcm(m, *u));
        let mut exps = Vec::with_capacity(self.n);
        for (u, _) in &factors {
            for a in units_mod(*u) {
                let k = p.root_multiplicity(&CycNum::zeta(*u, a as i64));
                exps.extend(std::iter::repeat_n(a * (d / u), k));
            }
        }
        if exps.len() != self.n {
            return Err(MatgroupError::NotCyclotomic);
        }
        let v = RankedEigenvector::new(d, &exps).map_err(|_| MatgroupError::NotCyclotomic)?;
        // a finite-order matrix is diagonalizable, so M^d = 1
        if !self.pow(v.order()).is_identity() {
            return Err(MatgroupError::NotCyclotomic);
        }
        Ok(v)
    }

    fn eigenvalues_by_order(&self, p: &CycPoly) -> Result<RankedEigenvector, MatgroupError> {
        let d = self.order(ORDER_CAP)?;
        let exps: Vec<u64> =
            (0..d).flat_map(|a| std::iter::repeat_n(a, p.root_multiplicity(&CycNum::zeta(d, a as i64)))).collect();
        if exps.len() != self.n {
            return Err(MatgroupError::NotCyclotomic);
        }
        RankedEigenvector::new(d, &exps).map_err(|_| MatgroupError::NotCyclotomic)
    }

    pub fn pow(&self, mut e: u64) -> MatrixOverCyc {
        let mut base = self.clone();
        let mut acc = MatrixOverCyc::identity(self.n).embed(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            e >>= 1;
        }
        acc
    }

    /// Coefficient vectors at conductor `m`, used as an exact hash key.
    pub(crate) fn key_at(&self, m: u64) -> Vec<crate::cycarith::Rational> {
        self.entries.iter().flat_map(|x| x.embed(m).coefficients().to_vec()).collect()
    }
}

impl PartialEq for MatrixOverCyc {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a == b)
    }
}

impl Eq for MatrixOverCyc {}

impl Hash for MatrixOverCyc {
    /// Hashes only conductor-independent data: the shape, the zero pattern and rational entries.
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        for x in &self.entries {
            match x.to_rational() {
                Some(q) => q.hash(state),
                None => 2u8.hash(state),
            }
        }
    }
}

impl fmt::Display for MatrixOverCyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    dim: usize,
    conductor: u64,
    entries: Vec<Vec<CycNum>>,
}

impl Serialize for MatrixOverCyc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.n).map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec()).collect();
        MatrixWire { dim: self.n, conductor: self.conductor, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixOverCyc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = MatrixWire::deserialize(d)?;
        if w.entries.len() != w.dim {
            return Err(D::Error::custom(format!("dim {} but {} rows", w.dim, w.entries.len())));
        }
        let m = MatrixOverCyc::from_rows(w.entries).map_err(D::Error::custom)?;
        Ok(m.embed(w.conductor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CycNum {
        CycNum::zeta(n, k)
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = MatrixOverCyc::diagonal(&[z(6, 1), z(6, 1), z(6, 1), CycNum::from_int(-1)]);
        let expect = CycPoly::from_roots(&[z(6, 1), z(6, 1), z(6, 1), CycNum::from_int(-1)]);
        assert_eq!(m.charpoly(), expect);
        assert!(m.det().is_one());
        let v = m.ranked_eigenvalues().unwrap();
        assert_eq!(v.to_string(), "(1,1,1,3)/6");
        assert_eq!(v.order(), 6);
    }

    #[test]
    fn permutation_matrix_orders() {
        let p = MatrixOverCyc::from_permutation(&[1, 2, 0, 4, 3]).unwrap();
        assert_eq!(p.order(100).unwrap(), 6);
        assert!(MatrixOverCyc::from_permutation(&[0, 0]).is_err());
        let two = MatrixOverCyc::diagonal(&[CycNum::from_int(2)]);
        assert_eq!(two.order(50), Err(MatgroupError::InfiniteOrder(50)));
    }

    #[test]
    fn serde_round_trip() {
        let m = MatrixOverCyc::from_rows(vec![vec![CycNum::from_int(0), z(3, 1)], vec![z(4, 1), CycNum::from_int(1)]])
            .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: MatrixOverCyc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.conductor(), 12);
    }
}
