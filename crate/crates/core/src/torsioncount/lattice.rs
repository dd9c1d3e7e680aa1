use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{int_det, TorsionError};
use crate::cycarith::{CycNum, IntMatrix};
use crate::matgroup::MatrixOverCyc;

/// A full-rank lattice in `C^m`, given by `2m` basis vectors with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeModel {
    m: usize,
    basis: Vec<Vec<CycNum>>,
}

/// Solves `a x = b` over a cyclotomic field; `None` when `a` is singular.
pub(crate) fn solve(mut a: Vec<Vec<CycNum>>, mut b: Vec<Vec<CycNum>>) -> Option<Vec<Vec<CycNum>>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        b.swap(p, c);
        let inv = a[c][c].inv()?;
        for x in a[c].iter_mut().chain(b[c].iter_mut()) {
            *x = x.mul_ref(&inv);
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let (ra, rb) = (a[c].clone(), b[c].clone());
            for (x, y) in a[i].iter_mut().zip(&ra).chain(b[i].iter_mut().zip(&rb)) {
                *x = x.sub_ref(&f.mul_ref(y));
            }
        }
    }
    Some(b)
}

/// Determinant over a cyclotomic field.
pub(crate) fn cyc_det(mut a: Vec<Vec<CycNum>>) -> CycNum {
    let n = a.len();
    let mut det = CycNum::from_int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return CycNum::from_int(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let inv = a[c][c].inv().expect("nonzero pivot");
        det = det.mul_ref(&a[c][c]);
        for i in c + 1..n {
            let f = a[i][c].mul_ref(&inv);
            if f.is_zero() {
                continue;
            }
            let row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&row) {
                *x = x.sub_ref(&f.mul_ref(y));
            }
        }
    }
    det
}

impl LatticeModel {
    /// Checks that the `2m` vectors are linearly independent over `R`.
    pub fn from_basis(m: usize, basis: Vec<Vec<CycNum>>) -> Result<Self, TorsionError> {
        if m == 0 || basis.len() != 2 * m || basis.iter().any(|v| v.len() != m) {
            return Err(TorsionError::BadInput(format!("need {} vectors of length {m}", 2 * m)));
        }
        let model = LatticeModel { m, basis };
        if cyc_det(model.real_frame()).is_zero() {
            return Err(TorsionError::BadInput("basis vectors are linearly dependent over R".into()));
        }
        Ok(model)
    }

    /// `E_z^m` with basis `e_1, z e_1, e_2, z e_2, ...`.
    pub fn power_of_curve(z: &CycNum, m: usize) -> Result<Self, TorsionError> {
        let mut basis = Vec::with_capacity(2 * m);
        for i in 0..m {
            for c in [CycNum::from_int(1), z.clone()] {
                let mut v = vec![CycNum::from_int(0); m];
                v[i] = c;
                basis.push(v);
            }
        }
        LatticeModel::from_basis(m, basis)
    }

    pub fn rank(&self) -> usize {
        2 * self.m
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    /// Columns `(b_k, conj(b_k))`, a `2m x 2m` matrix.
    fn real_frame(&self) -> Vec<Vec<CycNum>> {
        (0..2 * self.m)
            .map(|r| self.basis.iter().map(|b| if r < self.m { b[r].clone() } else { b[r - self.m].conj() }).collect())
            .collect()
    }

    /// Integer matrix `R` with `g b_k = sum_l R[l][k] b_l`.
    pub fn integer_matrix(&self, g: &MatrixOverCyc) -> Result<IntMatrix, TorsionError> {
        if g.dim() != self.m {
            return Err(TorsionError::BadInput(format!("{}x{} action on C^{}", g.dim(), g.dim(), self.m)));
        }
        let n = 2 * self.m;
        let images: Vec<Vec<CycNum>> = self
            .basis
            .iter()
            .map(|b| {
                (0..self.m)
                    .map(|i| (0..self.m).fold(CycNum::from_int(0), |s, j| s.add_ref(&g.entry(i, j).mul_ref(&b[j]))))
                    .collect()
            })
            .collect();
        let rhs: Vec<Vec<CycNum>> = (0..n)
            .map(|r| images.iter().map(|y| if r < self.m { y[r].clone() } else { y[r - self.m].conj() }).collect())
            .collect();
        let x = solve(self.real_frame(), rhs).expect("basis is independent");
        x.iter()
            .enumerate()
            .map(|(l, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, c)| {
                        c.to_integer().ok_or_else(|| {
                            TorsionError::NotPreserved(format!("coefficient {c} of b_{l} in the image of b_{k}"))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// `|det(1 - R)|`.
    pub fn fixed_point_count(&self, g: &MatrixOverCyc) -> Result<BigInt, TorsionError> {
        let r = self.integer_matrix(g)?;
        let n = r.len();
        let a: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() - &r[i][j] } else { -r[i][j].clone() }).collect())
            .collect();
        let d = int_det(&a);
        if d.is_zero() {
            return Err(TorsionError::EigenvalueOne);
        }
        Ok(d)
    }

    pub fn torsion_action(&self, g: &MatrixOverCyc, modulus: u64) -> Result<TorsionAction, TorsionError> {
        TorsionAction::new(&self.integer_matrix(g)?, modulus)
    }
}

/// An integer lattice action reduced modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionAction {
    pub modulus: u64,
    pub matrix: Vec<Vec<u64>>,
}

impl TorsionAction {
    pub fn new(r: &IntMatrix, modulus: u64) -> Result<Self, TorsionError> {
        if modulus < 2 {
            return Err(TorsionError::BadInput("modulus must be at least 2".into()));
        }
        let l = BigInt::from(modulus);
        let matrix = r
            .iter()
            .map(|row| row.iter().map(|x| x.mod_floor(&l).to_u64().expect("reduced below modulus")).collect())
            .collect();
        Ok(TorsionAction { modulus, matrix })
    }
}

/// Invariant factors of an integer matrix (zeros for the rank defect).
fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block as pivot
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                for j in t..cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
        if let Some((i, _)) = bad {
            for j in t..cols {
                let s = a[i][j].clone();
                a[t][j] += s;
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out.resize(rows.min(cols), BigInt::zero());
    out
}

/// Number of points of `(Z/l)^n` fixed by the action: `prod gcd(d_i, l)` over the
/// invariant factors `d_i` of `R - 1`.
pub fn torsion_fixed_points(a: &TorsionAction) -> BigInt {
    let n = a.matrix.len();
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(a.matrix[i][j]) - BigInt::from(u64::from(i == j))).collect())
        .collect();
    let l = BigInt::from(a.modulus);
    smith_diagonal(m).iter().fold(BigInt::one(), |acc, d| acc * d.gcd(&l))
}

/// Scans every vector of `(Z/l)^n`; for small cases only.
pub fn torsion_fixed_points_brute_force(a: &TorsionAction) -> Option<u64> {
    let n = a.matrix.len();
    let l = a.modulus;
    let total = l.checked_pow(n as u32).filter(|t| *t <= 1 << 24)?;
    let mut count = 0;
    let mut v = vec![0u64; n];
    for mut code in 0..total {
        for x in v.iter_mut() {
            *x = code % l;
            code /= l;
        }
        let fixed = (0..n).all(|i| (0..n).map(|j| a.matrix[i][j] * v[j]).sum::<u64>() % l == v[i]);
        count += u64::from(fixed);
    }
    Some(count)
}
