use std::collections::BTreeSet;

use crepant::cycarith::{factor_into_cyclotomics, CycNum, CycPoly};
use crepant::juniorenum::{
    age, canonical_generator, check_free_in_codim, classify_fourfold_elements, classify_junior_types,
    enumerate_fourfold_spectra, RankedEigenvector,
};
use num_integer::Integer;
use proptest::prelude::*;

fn partitions(total: u64, max_part: u64, max_len: usize, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if total == 0 {
        out.push(acc.clone());
        return;
    }
    if max_len == 0 {
        return;
    }
    for p in (1..=max_part.min(total)).rev() {
        acc.push(p);
        partitions(total - p, p, max_len - 1, acc, out);
        acc.pop();
    }
}

fn free_by_powers(d: u64, tail: &[u64], n: usize) -> bool {
    (1..d).all(|l| {
        let fixed = (n - tail.len()) + tail.iter().filter(|a| (l * **a) % d == 0).count();
        fixed <= n - 3
    })
}

fn real_charpoly_is_cyclotomic(d: u64, tail: &[u64], n: usize) -> bool {
    let mut roots: Vec<CycNum> = tail.iter().map(|a| CycNum::zeta(d, *a as i64)).collect();
    roots.extend((0..n - tail.len()).map(|_| CycNum::from_int(1)));
    let p = CycPoly::from_roots(&roots);
    p.mul(&p.conj()).to_int_poly().and_then(|q| factor_into_cyclotomics(&q)).is_some()
}

#[test]
fn junior_types_match_brute_force() {
    let n = 6;
    let mut brute: BTreeSet<(u64, Vec<u64>)> = BTreeSet::new();
    for d in 2..=30u64 {
        let mut parts = Vec::new();
        partitions(d, d - 1, n, &mut Vec::new(), &mut parts);
        for mut tail in parts {
            tail.sort_unstable();
            if tail.iter().fold(d, |g, a| g.gcd(a)) != 1 {
                continue;
            }
            if free_by_powers(d, &tail, n) && real_charpoly_is_cyclotomic(d, &tail, n) {
                brute.insert((d, tail));
            }
        }
    }
    let lib: BTreeSet<(u64, Vec<u64>)> =
        classify_junior_types(n).iter().map(|t| (t.tail.order(), t.tail.exponents().to_vec())).collect();
    assert_eq!(lib.len(), 12);
    assert_eq!(brute, lib);
}

#[test]
fn fourfold_classes_closed_under_generators() {
    for (key, members) in enumerate_fourfold_spectra() {
        for v in &members {
            assert_eq!(canonical_generator(v), key);
            for k in crepant::cycarith::units_mod(v.order()) {
                let w = v.power(k as i64);
                assert!(members.contains(&w), "{w} missing from class of {key}");
            }
        }
    }
    for row in classify_fourfold_elements() {
        assert_eq!(canonical_generator(&row.eigenvector), row.group_key);
        assert!(row.eigenvector.has_det_one());
    }
}

fn arb_vector() -> impl Strategy<Value = RankedEigenvector> {
    (1u64..=30)
        .prop_flat_map(|d| prop::collection::vec(0..d, 1..=8).prop_map(move |e| RankedEigenvector::new(d, &e).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn age_of_inverse_complements(v in arb_vector()) {
        let total = age(&v) + age(&v.inverse());
        prop_assert_eq!(total, crepant::cycarith::rat(v.nonzero_count() as i64));
    }

    #[test]
    fn freeness_is_monotone(v in arb_vector(), c in 0usize..8) {
        if check_free_in_codim(&v, c) {
            for c2 in 0..c {
                prop_assert!(check_free_in_codim(&v, c2));
            }
        }
    }

    #[test]
    fn normalization_is_idempotent(v in arb_vector()) {
        let w = RankedEigenvector::new(v.order(), v.exponents()).unwrap();
        prop_assert_eq!(&w, &v);
        prop_assert_eq!(v.exponents().iter().fold(v.order(), |g, a| g.gcd(a)), 1);
    }
}
