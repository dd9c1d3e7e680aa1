use crepant::cycarith::{
    cyclotomic_poly, euler_phi, expand_cyclotomic_product, factor_into_cyclotomics, hermite_normal_form, rat, CycNum,
    IntPoly,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn cyc(n: u64, coeffs: &[i64]) -> CycNum {
    coeffs.iter().enumerate().fold(CycNum::zero(n), |acc, (k, c)| acc + CycNum::zeta(n, k as i64).scale(&rat(*c)))
}

fn arb_cyc() -> impl Strategy<Value = CycNum> {
    (1u64..=24).prop_flat_map(|n| prop::collection::vec(-3i64..=3, n as usize).prop_map(move |c| cyc(n, &c)))
}

/// Conductors dividing 120, so products of three stay at conductor <= 120.
fn arb_cyc_120() -> impl Strategy<Value = CycNum> {
    prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24])
        .prop_flat_map(|n| prop::collection::vec(-3i64..=3, n as usize).prop_map(move |c| cyc(n, &c)))
}

fn arb_factors() -> impl Strategy<Value = Vec<(u64, u32)>> {
    let ds: Vec<u64> = (1..=60).filter(|d| euler_phi(*d) <= 16).collect();
    prop::collection::vec((prop::sample::select(ds), 1u32..=3), 0..5).prop_filter_map("degree <= 48", |v| {
        let mut acc: std::collections::BTreeMap<u64, u32> = Default::default();
        for (d, m) in v {
            *acc.entry(d).or_default() += m;
        }
        let deg: u64 = acc.iter().map(|(d, m)| euler_phi(*d) * *m as u64).sum();
        (deg <= 48).then(|| acc.into_iter().collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_cyc_120(), b in arb_cyc_120(), c in arb_cyc_120()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn conjugation_is_an_involutive_morphism(a in arb_cyc(), b in arb_cyc()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn float_evaluation_tracks_exact_product(a in arb_cyc(), b in arb_cyc()) {
        let (ar, ai) = a.eval_complex();
        let (br, bi) = b.eval_complex();
        let (pr, pi) = (&a * &b).eval_complex();
        prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-8);
        prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-8);
    }

    #[test]
    fn nonzero_elements_invert(a in arb_cyc()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one() || (&a * &inv) == CycNum::from_int(1));
    }

    #[test]
    fn minimal_conductor_preserves_value(a in arb_cyc()) {
        let m = a.minimal();
        prop_assert_eq!(&m, &a);
        prop_assert_eq!(a.conductor() % m.conductor(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factor_inverts_expansion(f in arb_factors()) {
        let p = expand_cyclotomic_product(&f);
        prop_assert_eq!(factor_into_cyclotomics(&p), Some(f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn perturbed_products_are_rejected_or_exact(f in arb_factors(), k in 0usize..8, delta in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let p = expand_cyclotomic_product(&f);
        let deg = p.degree().unwrap();
        prop_assume!(deg >= 1 && k < deg);
        let mut c = p.coeffs().to_vec();
        c[k] += BigInt::from(delta);
        let q = IntPoly::new(c);
        if let Some(g) = factor_into_cyclotomics(&q) {
            prop_assert_eq!(expand_cyclotomic_product(&g), q);
        }
    }

    #[test]
    fn hnf_of_stacked_bases_is_canonical(a in prop::array::uniform2(prop::array::uniform2(-20i64..20)), s in -4i64..5, t in -4i64..5, swap: bool) {
        let det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        prop_assume!(det_a != 0);
        // [[1, s], [0, 1]] * [[1, 0], [t, 1]], optionally with rows swapped
        let mut u = [[1 + s * t, s], [t, 1]];
        if swap {
            u.swap(0, 1);
        }
        let to_m = |x: [[i64; 2]; 2]| -> Vec<Vec<BigInt>> { x.iter().map(|r| r.iter().map(|v| BigInt::from(*v)).collect()).collect() };
        let ua = crepant::cycarith::mat_mul(&to_m(u), &to_m(a));
        let (h1, _) = hermite_normal_form(&to_m(a)).unwrap();
        let (h2, _) = hermite_normal_form(&ua).unwrap();
        prop_assert_eq!(h1, h2);
    }
}

#[test]
fn phi11_free_impostors_rejected() {
    let phi11 = cyclotomic_poly(11);
    for k in 0..10 {
        for delta in [-1i64, 1, 2] {
            let mut c = phi11.coeffs().to_vec();
            c[k] += BigInt::from(delta);
            let q = IntPoly::new(c);
            if let Some(f) = factor_into_cyclotomics(&q) {
                assert!(!f.iter().any(|(d, _)| *d == 11));
                assert_eq!(expand_cyclotomic_product(&f), q);
            }
        }
    }
    // X^10 + X^5 + 2 and X^10 - 2 are not cyclotomic products
    assert_eq!(factor_into_cyclotomics(&IntPoly::from_i64(&[2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1])), None);
    assert_eq!(factor_into_cyclotomics(&IntPoly::from_i64(&[-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1])), None);
    // Phi_11 itself, for contrast
    assert_eq!(factor_into_cyclotomics(&phi11), Some(vec![(11, 1)]));
}

#[test]
fn hnf_identity_is_fixed() {
    let id: Vec<Vec<BigInt>> = (0..3).map(|i| (0..3).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let (h, u) = hermite_normal_form(&id).unwrap();
    assert_eq!(h, id);
    assert_eq!(u, id);
}
