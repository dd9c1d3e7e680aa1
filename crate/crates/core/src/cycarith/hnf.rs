use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HnfError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("transform check failed")]
    Unverified,
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// Row-style Hermite normal form of a nonsingular square matrix.
///
/// Returns `(h, u)` with `u * m = h`, `u` unimodular, `h` upper triangular with
/// positive pivots and entries above each pivot in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix), HnfError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(HnfError::NotSquare);
    }
    let mut h = m.clone();
    let mut u = identity(n);
    for col in 0..n {
        // Euclid on rows col..n to clear the column below the pivot.
        loop {
            let piv = (col..n).filter(|r| !h[*r][col].is_zero()).min_by(|a, b| h[*a][col].abs().cmp(&h[*b][col].abs()));
            let Some(piv) = piv else {
                return Err(HnfError::Singular);
            };
            h.swap(col, piv);
            u.swap(col, piv);
            let mut done = true;
            for r in col + 1..n {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = h[r][col].div_floor(&h[col][col]);
                for j in 0..n {
                    let t = &q * &h[col][j];
                    h[r][j] -= t;
                    let t = &q * &u[col][j];
                    u[r][j] -= t;
                }
                if !h[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[col][col].is_negative() {
            for j in 0..n {
                h[col][j] = -&h[col][j];
                u[col][j] = -&u[col][j];
            }
        }
        for r in 0..col {
            let q = h[r][col].div_floor(&h[col][col]);
            if q.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &q * &h[col][j];
                h[r][j] -= t;
                let t = &q * &u[col][j];
                u[r][j] -= t;
            }
        }
    }
    if mat_mul(&u, m) != h || !is_hnf(&h) {
        return Err(HnfError::Unverified);
    }
    Ok((h, u))
}

/// Upper triangular, positive pivots, entries above pivots reduced.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let n = h.len();
    for i in 0..n {
        if h[i].len() != n || !h[i][i].is_positive() {
            return false;
        }
        for j in 0..i {
            if !h[i][j].is_zero() {
                return false;
            }
        }
        for r in 0..i {
            if h[r][i].is_negative() || h[r][i] >= h[i][i] {
                return false;
            }
        }
    }
    true
}

/// Absolute determinant of an upper triangular matrix.
pub fn triangular_det(h: &IntMatrix) -> BigInt {
    (0..h.len()).fold(BigInt::one(), |acc, i| acc * &h[i][i]).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect()
    }

    #[test]
    fn small_example() {
        let (h, u) = hermite_normal_form(&m(&[&[2, 0], &[1, 1]])).unwrap();
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
        assert_eq!(mat_mul(&u, &m(&[&[2, 0], &[1, 1]])), h);
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(hermite_normal_form(&m(&[&[1, 2], &[2, 4]])), Err(HnfError::Singular));
    }

    fn det_i64(a: &[[i64; 3]; 3]) -> i64 {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    proptest! {
        #[test]
        fn hnf_invariants(a in prop::array::uniform3(prop::array::uniform3(-9i64..10))) {
            let d = det_i64(&a);
            prop_assume!(d != 0);
            let mm: IntMatrix = a.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect();
            let (h, u) = hermite_normal_form(&mm).unwrap();
            prop_assert!(is_hnf(&h));
            prop_assert_eq!(mat_mul(&u, &mm), h.clone());
            prop_assert_eq!(triangular_det(&h), BigInt::from(d.abs()));
        }
    }
}
