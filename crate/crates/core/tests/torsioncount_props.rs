use crepant::cycarith::{units_mod, CycNum};
use crepant::matgroup::MatrixOverCyc;
use crepant::torsioncount::{
    fixed_point_count, fixed_point_count_by_factors, torsion_fixed_points, torsion_fixed_points_brute_force,
    LatticeModel, TorsionAction, TorsionError,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Diagonal matrices whose spectrum with its complex conjugate is Galois-stable:
/// unions of full sets of primitive `u`-th roots, or half of such a set closed under a CM type.
fn arb_diagonal() -> impl Strategy<Value = MatrixOverCyc> {
    let block = prop_oneof![
        prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 10, 12])
            .prop_map(|u| units_mod(u).into_iter().map(|a| (u, a)).collect::<Vec<_>>()),
        Just(vec![(3, 1)]),
        Just(vec![(4, 1)]),
        Just(vec![(6, 1)]),
        Just(vec![(7, 1), (7, 2), (7, 4)]),
        Just(vec![(8, 1), (8, 3)]),
    ];
    prop::collection::vec(block, 1..=2).prop_map(|blocks| {
        let diag: Vec<CycNum> = blocks.concat().iter().map(|(u, a)| CycNum::zeta(*u, *a as i64)).collect();
        MatrixOverCyc::diagonal(&diag)
    })
}

/// Diagonal matrices in powers of `z`, for `z` in `{j, i}`.
fn arb_cm_diagonal() -> impl Strategy<Value = (u64, Vec<i64>)> {
    prop_oneof![Just(3u64), Just(4u64), Just(6u64)]
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0..n as i64, 1..=3)))
}

fn cm_generator(n: u64) -> CycNum {
    // Z[zeta_6] = Z[zeta_3]
    if n == 6 {
        CycNum::zeta(3, 1)
    } else {
        CycNum::zeta(n, 1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_paths_agree(m in arb_diagonal()) {
        prop_assert_eq!(fixed_point_count(&m), fixed_point_count_by_factors(&m));
        prop_assert!(fixed_point_count(&m).unwrap() > BigInt::from(0));
    }

    #[test]
    fn multiplicative_over_blocks(a in arb_diagonal(), b in arb_diagonal()) {
        let ab = fixed_point_count(&a.block_diag(&b)).unwrap();
        prop_assert_eq!(ab, fixed_point_count(&a).unwrap() * fixed_point_count(&b).unwrap());
    }

    #[test]
    fn lattice_determinant_matches((n, exps) in arb_cm_diagonal()) {
        let model = LatticeModel::power_of_curve(&cm_generator(n), exps.len()).unwrap();
        let diag: Vec<CycNum> = exps.iter().map(|a| CycNum::zeta(n, *a)).collect();
        let m = MatrixOverCyc::diagonal(&diag);
        let lattice = model.fixed_point_count(&m);
        let spectral = fixed_point_count(&m);
        match (lattice, spectral) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(e), Err(f)) => {
                prop_assert_eq!(&e, &TorsionError::EigenvalueOne);
                prop_assert_eq!(f, TorsionError::EigenvalueOne);
            }
            (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
        }
    }

    #[test]
    fn smith_count_matches_brute_force(
        modulus in 2u64..=4,
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 4),
    ) {
        let r: Vec<Vec<BigInt>> = rows.iter().map(|row| row.iter().map(|x| BigInt::from(*x)).collect()).collect();
        let a = TorsionAction::new(&r, modulus).unwrap();
        let brute = torsion_fixed_points_brute_force(&a).unwrap();
        prop_assert_eq!(torsion_fixed_points(&a), BigInt::from(brute));
    }

    #[test]
    fn two_torsion_on_ej_powers(exps in prop::collection::vec(0i64..3, 1..=6)) {
        let j = CycNum::zeta(3, 1);
        let model = LatticeModel::power_of_curve(&j, exps.len()).unwrap();
        let diag: Vec<CycNum> = exps.iter().map(|a| CycNum::zeta(3, *a)).collect();
        let a = model.torsion_action(&MatrixOverCyc::diagonal(&diag), 2).unwrap();
        let brute = torsion_fixed_points_brute_force(&a).unwrap();
        prop_assert_eq!(torsion_fixed_points(&a), BigInt::from(brute));
        // each eigenvalue-1 coordinate fixes all 4 points of E_j[2], the others fix only 0
        let ones = exps.iter().filter(|a| **a == 0).count() as u32;
        prop_assert_eq!(brute, 4u64.pow(ones));
    }
}

#[test]
fn sixfold_model_counts() {
    let j = CycNum::zeta(3, 1);
    let model = LatticeModel::power_of_curve(&j, 6).unwrap();
    assert_eq!(model.rank(), 12);
    let junior = MatrixOverCyc::diagonal(&[
        CycNum::from_int(1),
        CycNum::from_int(1),
        CycNum::from_int(1),
        j.clone(),
        j.clone(),
        j,
    ]);
    let a = model.torsion_action(&junior, 2).unwrap();
    assert_eq!(torsion_fixed_points(&a), BigInt::from(64));
    assert_eq!(torsion_fixed_points_brute_force(&a), Some(64));
    assert!(matches!(model.fixed_point_count(&junior), Err(TorsionError::EigenvalueOne)));
}
