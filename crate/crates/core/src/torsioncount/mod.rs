//! Fixed-point and torsion-point counts for automorphisms of abelian-variety
//! models, and exact checks of the CM lattice identities.

mod cm;
mod lattice;

pub use cm::{
    generator_index, table6_rows, verify_cm_identities, verify_lattice_row, verify_lattice_row_maximal, LatticeRow,
};
pub use lattice::{torsion_fixed_points, torsion_fixed_points_brute_force, LatticeModel, TorsionAction};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cycarith::{cyclotomic_at_one, factor_into_cyclotomics, rat, Rational};
use crate::matgroup::{MatgroupError, MatrixOverCyc};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("1 is an eigenvalue, so the fixed locus is not finite")]
    EigenvalueOne,
    #[error(transparent)]
    Matgroup(#[from] MatgroupError),
    #[error("the action does not preserve the lattice: {0}")]
    NotPreserved(String),
    #[error("no lattice row for k = {0}")]
    UnsupportedK(u64),
    #[error("the real representation is not defined over Q")]
    NotRational,
    #[error("invalid input: {0}")]
    BadInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One machine-checkable claim with both sides rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check_id: String,
    pub claim_ref: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

impl Report {
    pub fn new(check_id: &str, claim_ref: &str, ok: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Report {
            check_id: check_id.to_string(),
            claim_ref: claim_ref.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Compares two values and renders them.
    pub fn compare<T: PartialEq + ToString>(check_id: &str, claim_ref: &str, lhs: T, rhs: T) -> Self {
        let ok = lhs == rhs;
        Report::new(check_id, claim_ref, ok, lhs, rhs)
    }
}

/// `|prod (1 - lambda)|^2` over the eigenvalues of `m`, i.e. `|det(1 - R)|` for the
/// real representation `R` of `m`. `R` must be rational (`P conj(P)` in `Z[X]`).
pub fn fixed_point_count(m: &MatrixOverCyc) -> Result<BigInt, TorsionError> {
    let v = m.ranked_eigenvalues()?;
    if v.fixed_multiplicity() > 0 {
        return Err(TorsionError::EigenvalueOne);
    }
    let p1 = m.charpoly().eval(&crate::cycarith::CycNum::from_int(1));
    let n = p1.mul_ref(&p1.conj()).to_integer().ok_or(TorsionError::NotRational)?;
    debug_assert_eq!(Ok(n.clone()), fixed_point_count_by_factors(m));
    Ok(n)
}

/// `prod Phi_u(1)^alpha` over the cyclotomic factorization of `P conj(P)`.
pub fn fixed_point_count_by_factors(m: &MatrixOverCyc) -> Result<BigInt, TorsionError> {
    let p = m.charpoly();
    let real = p.mul(&p.conj()).to_int_poly().ok_or(TorsionError::NotRational)?;
    let factors = factor_into_cyclotomics(&real).ok_or(MatgroupError::NotCyclotomic)?;
    if factors.iter().any(|(u, _)| *u == 1) {
        return Err(TorsionError::EigenvalueOne);
    }
    Ok(factors.iter().fold(BigInt::one(), |acc, (u, a)| acc * cyclotomic_at_one(*u).pow(*a)))
}

/// `total * stabilizer / fixed`, exactly.
pub fn double_counting(
    total_points: u64,
    stabilizer_count: u64,
    fixed_per_element: u64,
) -> Result<Rational, TorsionError> {
    if total_points == 0 || stabilizer_count == 0 || fixed_per_element == 0 {
        return Err(TorsionError::BadInput("double counting needs positive arguments".into()));
    }
    Ok(rat(total_points as i64) * rat(stabilizer_count as i64) / rat(fixed_per_element as i64))
}

/// The fixed-point, torsion-point and double-counting values used by the sixfold arguments.
pub fn counting_ledger() -> Vec<Report> {
    use crate::cycarith::CycNum;
    let mut out = Vec::new();
    let w = CycNum::zeta(6, 1);
    let g = MatrixOverCyc::diagonal(&[w.clone(), w.clone(), w, CycNum::from_int(-1)]);
    let count = |m: &MatrixOverCyc| fixed_point_count(m).map(|n| n.to_string()).unwrap_or_else(|e| e.to_string());
    out.push(Report::compare("fixed_points_g", "fixed points of diag(w,w,w,-1)", count(&g), "4".into()));
    let g3 = g.pow(3);
    out.push(Report::compare("fixed_points_g3", "fixed points of its cube, -identity", count(&g3), "256".into()));
    let minus = MatrixOverCyc::diagonal(&vec![CycNum::from_int(-1); 4]);
    out.push(Report::compare(
        "fixed_points_minus_id",
        "fixed points of -identity on a fourfold",
        count(&minus),
        "256".into(),
    ));

    let dc = |a, b, c| double_counting(a, b, c).map(|q| crate::cycarith::render_rational(&q)).unwrap_or_default();
    let juniors = dc(4095, 4, 63);
    out.push(Report::compare(
        "junior_count_pstab",
        "(2^12-1)*4/(2^6-1) junior elements",
        juniors.clone(),
        "260".into(),
    ));
    out.push(Report::compare("junior_count_gw", "2^12*4/2^6 junior elements", dc(4096, 4, 64), "256".into()));
    let per = dc(260, 1, 4);
    out.push(Report::compare("junior_count_cor", "260/4 junior elements", per.clone(), "65".into()));
    let odd = per.parse::<u64>().is_ok_and(|n| n % 2 == 1);
    out.push(Report::new("parity_65", "65 is odd", odd, per, "odd"));
    let div4 = juniors.parse::<u64>().is_ok_and(|n| n % 4 == 0);
    out.push(Report::new("divisibility_260", "260 = 0 mod 4", div4, juniors, "0 mod 4"));

    let j = CycNum::zeta(3, 1);
    let model = LatticeModel::power_of_curve(&j, 6).expect("E_j^6 model");
    let junior = MatrixOverCyc::diagonal(&[
        CycNum::from_int(1),
        CycNum::from_int(1),
        CycNum::from_int(1),
        j.clone(),
        j.clone(),
        j,
    ]);
    let torsion = |m: &MatrixOverCyc| {
        model.torsion_action(m, 2).map(|a| torsion_fixed_points(&a).to_string()).unwrap_or_else(|e| e.to_string())
    };
    out.push(Report::compare(
        "two_torsion_junior",
        "2-torsion points fixed by diag(1,1,1,j,j,j)",
        torsion(&junior),
        "64".into(),
    ));
    let minus6 = MatrixOverCyc::diagonal(&vec![CycNum::from_int(-1); 6]);
    out.push(Report::compare(
        "two_torsion_minus_id",
        "2-torsion points fixed by -identity",
        torsion(&minus6),
        "4096".into(),
    ));
    out
}

/// `|det|` of a square integer matrix by exact elimination.
pub(crate) fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> =
        m.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !num_traits::Zero::is_zero(&a[i][c])) else {
            return BigInt::from(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            let f = &a[i][c] / &piv;
            if num_traits::Zero::is_zero(&f) {
                continue;
            }
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det.to_integer().abs()
}
