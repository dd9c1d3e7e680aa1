use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::lattice::cyc_det;
use super::{Report, TorsionError};
use crate::cycarith::{euler_phi, hermite_normal_form, units_mod, CycNum, CycPoly};

fn period(k: u64, exps: &[i64]) -> CycNum {
    exps.iter().fold(CycNum::zero(k), |s, a| s.add_ref(&CycNum::zeta(k, *a)))
}

fn int(k: i64) -> CycNum {
    CycNum::from_int(k)
}

/// `zeta_16^2 + zeta_16^14`.
fn sqrt2() -> CycNum {
    period(16, &[2, 14])
}

fn near(x: &CycNum, re: f64, im: f64) -> bool {
    let (a, b) = x.eval_complex();
    (a - re).abs() < 1e-9 && (b - im).abs() < 1e-9
}

/// The Gauss-period identities for `u_7, u_8, u_15, u_16, v_16, u_20, u_24` and the
/// product `u_16 v_16 = -2 sqrt 2`.
///
/// Each identity is an exact polynomial relation; a floating-point check against
/// the closed form fixes the sign of the imaginary part.
pub fn verify_cm_identities() -> Vec<Report> {
    let s2 = sqrt2();
    let r2 = 2f64.sqrt();
    let u16 = period(16, &[1, 3, 5, 7]);
    let v16 = period(16, &[3, 5, 9, 15]);
    let rows: Vec<(&str, &str, CycNum, CycNum, (f64, f64))> = vec![
        ("u7", "u7 = z7 + z7^2 + z7^4 = (-1 + i sqrt 7)/2", period(7, &[1, 2, 4]), int(0), (-0.5, 7f64.sqrt() / 2.0)),
        ("u8", "u8 = z8 + z8^3 = i sqrt 2", period(8, &[1, 3]), int(-2), (0.0, r2)),
        (
            "u15",
            "u15 = z15 + z15^2 + z15^4 + z15^8 = (1 + i sqrt 15)/2",
            period(15, &[1, 2, 4, 8]),
            int(0),
            (0.5, 15f64.sqrt() / 2.0),
        ),
        (
            "u16",
            "u16 = z16 + z16^3 + z16^5 + z16^7 = i sqrt(4 + 2 sqrt 2)",
            u16.clone(),
            -(int(4).add_ref(&s2).add_ref(&s2)),
            (0.0, (4.0 + 2.0 * r2).sqrt()),
        ),
        (
            "v16",
            "v16 = z16^3 + z16^5 + z16^9 + z16^15 = i sqrt(4 - 2 sqrt 2)",
            v16.clone(),
            -(int(4).sub_ref(&s2).sub_ref(&s2)),
            (0.0, (4.0 - 2.0 * r2).sqrt()),
        ),
        ("u20", "u20 = z20 + z20^3 + z20^7 + z20^9 = i sqrt 5", period(20, &[1, 3, 7, 9]), int(-5), (0.0, 5f64.sqrt())),
        (
            "u24",
            "u24 = z24 + z24^5 + z24^7 + z24^11 = i sqrt 6",
            period(24, &[1, 5, 7, 11]),
            int(-6),
            (0.0, 6f64.sqrt()),
        ),
    ];
    let mut out = Vec::new();
    for (id, claim, x, square, (re, im)) in rows {
        let (lhs, rhs, exact) = match id {
            // minimal polynomials X^2 + X + 2 and X^2 - X + 4
            "u7" => {
                let v = x.mul_ref(&x).add_ref(&x).add_ref(&int(2));
                (format!("u7^2 + u7 + 2 = {v}"), "0".to_string(), v.is_zero())
            }
            "u15" => {
                let v = x.mul_ref(&x).sub_ref(&x).add_ref(&int(4));
                (format!("u15^2 - u15 + 4 = {v}"), "0".to_string(), v.is_zero())
            }
            _ => {
                let sq = x.mul_ref(&x);
                (format!("{id}^2 = {sq}"), square.to_string(), sq == square)
            }
        };
        let ok = exact && near(&x, re, im);
        out.push(Report::new(&format!("cm_{id}"), claim, ok, lhs, rhs));
    }
    let prod = u16.mul_ref(&v16);
    let want = -(s2.add_ref(&s2));
    let ok = prod == want && near(&prod, -2.0 * r2, 0.0);
    out.push(Report::new("cm_u16v16", "u16 v16 = -2 sqrt 2", ok, format!("u16 v16 = {prod}"), want.to_string()));
    out
}

/// One lattice row: `k`, the half-set `S` of exponents, and the target quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRow {
    pub k: u64,
    pub s: Vec<u64>,
    pub target: &'static str,
}

pub fn table6_rows() -> Vec<LatticeRow> {
    let row = |k, s: &[u64], target| LatticeRow { k, s: s.to_vec(), target };
    vec![
        row(3, &[1], "E_j"),
        row(4, &[1], "E_i"),
        row(6, &[1], "E_j"),
        row(7, &[1, 2, 4], "E_u7^3"),
        row(8, &[1, 3], "E_u8^2"),
        row(12, &[1, 5], "E_i^2"),
        row(15, &[1, 2, 4, 8], "E_u15^4"),
        row(16, &[1, 3, 5, 7], "S_u16,v16^2"),
        row(20, &[1, 3, 7, 9], "E_u20^4"),
        row(24, &[1, 5, 7, 11], "E_u24^4"),
    ]
}

/// Generator `z` of the CM subfield with `S_k` fixing it (or, for `k = 16`, sending it to `u_16` or `v_16`).
fn cm_generator(k: u64) -> Option<(CycNum, &'static str)> {
    Some(match k {
        3 | 6 => (CycNum::zeta(k, (k / 3) as i64), "j"),
        4 | 12 => (CycNum::zeta(k, (k / 4) as i64), "i"),
        7 => (period(7, &[1, 2, 4]), "u7"),
        8 => (period(8, &[1, 3]), "u8"),
        15 => (period(15, &[1, 2, 4, 8]), "u15"),
        16 => (period(16, &[1, 3, 5, 7]), "u16"),
        20 => (period(20, &[1, 3, 7, 9]), "u20"),
        24 => (period(24, &[1, 5, 7, 11]), "u24"),
        _ => return None,
    })
}

fn choose(n: usize, t: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return vec![vec![]];
    }
    if n < t {
        return vec![];
    }
    let mut out: Vec<Vec<usize>> = choose(n - 1, t - 1)
        .into_iter()
        .map(|mut c| {
            c.push(n - 1);
            c
        })
        .collect();
    out.extend(choose(n - 1, t));
    out.sort();
    out
}

/// Certifies `C^m / f(Z[zeta_k]) = (target)`, where `f(x) = (sigma_s(x))_{s in S}`.
///
/// With `z` the CM generator and `r` its degree, the certificate is:
/// `S` and `-S` partition the units mod `k`; every `sigma_s(z)` is one of the `r/2`
/// target embeddings, each hit equally often; monomials `zeta^l_1, ..., zeta^l_t`
/// with `{z^a zeta^l_i}` a Z-basis of `Z[zeta_k]` (HNF of the coordinate matrix is the
/// identity); and for each embedding the block `(sigma_s(zeta^l_i))` is invertible.
/// Then `f` is `Z[z]`-linear and a block-diagonal change of coordinates carries the
/// image onto the target lattice.
pub fn verify_lattice_row(k: u64, s: &[u64]) -> Result<Report, TorsionError> {
    certify(k, s, false)
}

/// The same certificate with `Z[z]` replaced by the ring of integers of `Q(z)`,
/// taken as the invariants of `Z[zeta_k]` under the stabilizer of `z`.
pub fn verify_lattice_row_maximal(k: u64, s: &[u64]) -> Result<Report, TorsionError> {
    certify(k, s, true)
}

/// `[O : Z[z]]` for `O` the ring of integers of `Q(z)`, from the two discriminants.
pub fn generator_index(k: u64) -> Result<BigInt, TorsionError> {
    let (z, _) = cm_generator(k).ok_or(TorsionError::UnsupportedK(k))?;
    let z = z.embed(k);
    let (_, reps) = conjugates(&z, k);
    let powers: Vec<CycNum> = (0..reps.len()).map(|a| z.pow(a as i64)).collect();
    let ratio = discriminant(&powers, &reps) / discriminant(&fixed_basis(&z, k), &reps);
    let index = ratio.sqrt();
    assert_eq!(&index * &index, ratio, "discriminant ratio is a square");
    Ok(index)
}

/// Distinct Galois conjugates of `z` and one unit mod `k` realizing each.
fn conjugates(z: &CycNum, k: u64) -> (Vec<CycNum>, Vec<u64>) {
    let mut out: (Vec<CycNum>, Vec<u64>) = (Vec::new(), Vec::new());
    for a in units_mod(k) {
        let c = z.galois(a as i64);
        if !out.0.contains(&c) {
            out.0.push(c);
            out.1.push(a);
        }
    }
    out
}

fn discriminant(basis: &[CycNum], reps: &[u64]) -> BigInt {
    let m: Vec<Vec<CycNum>> = reps.iter().map(|a| basis.iter().map(|b| b.galois(*a as i64)).collect()).collect();
    let d = cyc_det(m);
    d.mul_ref(&d).to_integer().expect("a discriminant is a rational integer").abs()
}

fn coordinates(v: &CycNum, k: u64) -> Vec<BigInt> {
    let v = v.embed(k);
    v.coefficients().iter().map(|q| q.to_integer()).collect()
}

/// Echelon Z-basis of the row span of an integer matrix.
fn row_basis(mut a: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut top = 0;
    for c in 0..cols {
        loop {
            let Some(p) =
                (top..a.len()).filter(|&i| !num_traits::Zero::is_zero(&a[i][c])).min_by_key(|&i| a[i][c].abs())
            else {
                break;
            };
            a.swap(top, p);
            let mut done = true;
            for i in top + 1..a.len() {
                let q = num_integer::Integer::div_floor(&a[i][c], &a[top][c]);
                let pivot = a[top].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                done &= num_traits::Zero::is_zero(&a[i][c]);
            }
            if done {
                top += 1;
                break;
            }
        }
    }
    a.truncate(top);
    a
}

/// Z-span of the orbit sums of `zeta_k^e` under the stabilizer of `z`. This lies in
/// the ring of integers `O` of `Q(z)`; a passing certificate built on it forces equality.
fn fixed_basis(z: &CycNum, k: u64) -> Vec<CycNum> {
    let stab: Vec<u64> = units_mod(k).into_iter().filter(|a| z.galois(*a as i64) == *z).collect();
    let sums: Vec<Vec<BigInt>> = (0..k)
        .map(|e| {
            let mut exps: Vec<u64> = stab.iter().map(|a| a * e % k).collect();
            exps.sort_unstable();
            exps.dedup();
            let orbit = exps.iter().fold(CycNum::zero(k), |acc, x| acc.add_ref(&CycNum::zeta(k, *x as i64)));
            coordinates(&orbit, k)
        })
        .collect();
    row_basis(sums)
        .into_iter()
        .map(|row| {
            row.iter().enumerate().fold(CycNum::zero(k), |acc, (i, c)| {
                acc.add_ref(&CycNum::zeta(k, i as i64).scale(&crate::cycarith::Rational::from_integer(c.clone())))
            })
        })
        .collect()
}

fn certify(k: u64, s: &[u64], maximal: bool) -> Result<Report, TorsionError> {
    let row = table6_rows().into_iter().find(|r| r.k == k).ok_or(TorsionError::UnsupportedK(k))?;
    let (z, zname) = cm_generator(k).ok_or(TorsionError::UnsupportedK(k))?;
    let (check_id, ring, target) = if maximal {
        (format!("lattice_k{k}_maximal"), format!("O(Q({zname}))"), format!("(C^(r/2) / O(Q({zname})))^t"))
    } else {
        (format!("lattice_k{k}"), format!("Z[{zname}]"), row.target.to_string())
    };
    let claim = format!("C^(phi({k})/2) / f(S) is {target} for S = {s:?}");
    let fail = |why: String| Ok(Report::new(&check_id, &claim, false, why, &target));

    let units = units_mod(k);
    let mut both: Vec<u64> = s.iter().map(|a| a % k).chain(s.iter().map(|a| (k - a % k) % k)).collect();
    both.sort_unstable();
    if both != units {
        return fail(format!("S and -S do not partition the units mod {k}"));
    }

    let z = z.embed(k);
    let (conj, _) = conjugates(&z, k);
    let r = conj.len();
    if CycPoly::from_roots(&conj).to_int_poly().is_none() {
        return fail(format!("{zname} is not an algebraic integer"));
    }
    let embeddings: Vec<CycNum> = s.iter().map(|a| z.galois(*a as i64)).collect();
    let mut targets: Vec<CycNum> = Vec::new();
    for e in &embeddings {
        if !targets.contains(e) {
            targets.push(e.clone());
        }
    }
    let phi = euler_phi(k) as usize;
    let t = phi / r;
    if targets.len() != r / 2 || targets.iter().any(|e| embeddings.iter().filter(|x| *x == e).count() != t) {
        return fail(format!("S does not restrict to a CM type of Q({zname})"));
    }

    let ring_basis: Vec<CycNum> = if maximal { fixed_basis(&z, k) } else { (0..r).map(|a| z.pow(a as i64)).collect() };
    if ring_basis.len() != r {
        return fail(format!("{ring} has rank {} instead of {r}", ring_basis.len()));
    }
    for ls in choose(phi, t) {
        let m: Vec<Vec<BigInt>> = ring_basis
            .iter()
            .flat_map(|b| ls.iter().map(move |l| coordinates(&b.mul_ref(&CycNum::zeta(k, *l as i64)), k)))
            .collect();
        let Ok((h, _)) = hermite_normal_form(&m) else { continue };
        let identity = h.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { num_traits::Zero::is_zero(x) })
        });
        if !identity {
            continue;
        }
        let invertible = targets.iter().all(|e| {
            let block: Vec<Vec<CycNum>> = s
                .iter()
                .filter(|a| z.galois(**a as i64) == *e)
                .map(|a| ls.iter().map(|l| CycNum::zeta(k, (*a as i64) * (*l as i64))).collect())
                .collect();
            !cyc_det(block).is_zero()
        });
        if !invertible {
            continue;
        }
        let basis: Vec<String> = ls.iter().map(|l| format!("z{k}^{l}")).collect();
        let lhs = format!("Z[z{k}] = sum {ring} {{{}}}", basis.join(", "));
        return Ok(Report::new(&check_id, &claim, true, lhs, &target));
    }
    if !maximal {
        let index = generator_index(k)?;
        if !index.is_one() {
            return fail(format!("Z[z{k}] is an O(Q({zname}))-module but {ring} has index {index} in O(Q({zname}))"));
        }
    }
    fail(format!("no monomial {ring}-basis of Z[z{k}] found"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_hold() {
        let reports = verify_cm_identities();
        assert_eq!(reports.len(), 8);
        for r in reports {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn wrong_sign_is_caught() {
        // conj(u7) satisfies the same polynomial but has negative imaginary part
        let x = period(7, &[3, 5, 6]);
        assert!(x.mul_ref(&x).add_ref(&x).add_ref(&int(2)).is_zero());
        assert!(!near(&x, -0.5, 7f64.sqrt() / 2.0));
    }

    #[test]
    fn rows_certify() {
        for row in table6_rows() {
            let r = verify_lattice_row(row.k, &row.s).unwrap();
            assert_eq!(r.passed(), row.k != 16, "{r:?}");
        }
        assert_eq!(verify_lattice_row(5, &[1, 2]), Err(TorsionError::UnsupportedK(5)));
        // S and -S partition the units, but S is not stable under the fixing group of u7
        assert!(!verify_lattice_row(7, &[1, 2, 3]).unwrap().passed());
        assert!(!verify_lattice_row(8, &[1, 5]).unwrap().passed());
    }

    #[test]
    fn generator_indices() {
        // x^4 + 8x^2 + 8 has discriminant 2^17; Q(u16) has discriminant 2^11
        assert_eq!(generator_index(16).unwrap(), BigInt::from(8));
        for k in [3, 4, 6, 7, 8, 12, 15, 20, 24] {
            assert_eq!(generator_index(k).unwrap(), BigInt::one(), "k = {k}");
        }
        for row in table6_rows() {
            assert!(verify_lattice_row_maximal(row.k, &row.s).unwrap().passed(), "k = {}", row.k);
        }
    }
}
