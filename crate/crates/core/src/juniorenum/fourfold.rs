use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::{check_free_in_codim, is_junior, RankedEigenvector};
use crate::cycarith::{euler_phi, factor_into_cyclotomics, units_mod, CycNum, CycPoly};

/// Restriction on the fourfold forced by an element, as in the third column of the fourfold table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IsogenyTag {
    #[serde(rename = "arbitrary")]
    Arbitrary,
    #[serde(rename = "ExE_j^3")]
    EEj3,
    #[serde(rename = "E_j^4")]
    Ej4,
    #[serde(rename = "E_i^4")]
    Ei4,
    #[serde(rename = "ExE_u7^3")]
    EEu7Cube,
    #[serde(rename = "E_u8^4")]
    Eu8,
    #[serde(rename = "E_u15^4")]
    Eu15,
    #[serde(rename = "S_u16,v16^2")]
    S16,
    #[serde(rename = "E_u20^4")]
    Eu20,
    #[serde(rename = "E_u24^4")]
    Eu24,
}

impl IsogenyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            IsogenyTag::Arbitrary => "arbitrary",
            IsogenyTag::EEj3 => "ExE_j^3",
            IsogenyTag::Ej4 => "E_j^4",
            IsogenyTag::Ei4 => "E_i^4",
            IsogenyTag::EEu7Cube => "ExE_u7^3",
            IsogenyTag::Eu8 => "E_u8^4",
            IsogenyTag::Eu15 => "E_u15^4",
            IsogenyTag::S16 => "S_u16,v16^2",
            IsogenyTag::Eu20 => "E_u20^4",
            IsogenyTag::Eu24 => "E_u24^4",
        }
    }

    pub fn parse(s: &str) -> Option<IsogenyTag> {
        ALL_TAGS.iter().copied().find(|t| t.as_str() == s)
    }
}

const ALL_TAGS: [IsogenyTag; 10] = [
    IsogenyTag::Arbitrary,
    IsogenyTag::EEj3,
    IsogenyTag::Ej4,
    IsogenyTag::Ei4,
    IsogenyTag::EEu7Cube,
    IsogenyTag::Eu8,
    IsogenyTag::Eu15,
    IsogenyTag::S16,
    IsogenyTag::Eu20,
    IsogenyTag::Eu24,
];

impl fmt::Display for IsogenyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CmField {
    J,
    I,
    U7,
    U8,
    U15,
    U20,
    U24,
}

fn gauss_sum(n: u64, ks: &[i64]) -> CycNum {
    ks.iter().fold(CycNum::zero(n), |acc, k| acc + CycNum::zeta(n, *k))
}

fn cm_candidates() -> Vec<(CmField, CycNum)> {
    vec![
        (CmField::J, CycNum::zeta(3, 1)),
        (CmField::I, CycNum::zeta(4, 1)),
        (CmField::U7, gauss_sum(7, &[1, 2, 4])),
        (CmField::U8, gauss_sum(8, &[1, 3])),
        (CmField::U15, gauss_sum(15, &[1, 2, 4, 8])),
        (CmField::U20, gauss_sum(20, &[1, 3, 7, 9])),
        (CmField::U24, gauss_sum(24, &[1, 5, 7, 11])),
    ]
}

/// Exponents of `v` of exact order `u`, as residues mod `u`.
fn part_of_order(v: &RankedEigenvector, u: u64) -> Vec<u64> {
    let d = v.order();
    let mut out: Vec<u64> = v.exponents().iter().filter(|a| d / a.gcd(&d) == u).map(|a| a / (d / u)).collect();
    out.sort_unstable();
    out
}

fn scaled(part: &[u64], k: u64, u: u64) -> Vec<u64> {
    let mut s: Vec<u64> = part.iter().map(|a| a * k % u).collect();
    s.sort_unstable();
    s
}

/// The imaginary quadratic field cut out by a non-self-conjugate part, or
/// `None` when its fixed field is larger.
fn part_field(part: &[u64], u: u64) -> Option<Result<CmField, ()>> {
    let stab: Vec<u64> = units_mod(u).into_iter().filter(|k| scaled(part, *k, u) == part).collect();
    let degree = euler_phi(u) / stab.len() as u64;
    if degree != 2 {
        return None;
    }
    let hits: Vec<CmField> = cm_candidates()
        .into_iter()
        .filter(|(_, x)| u % x.conductor() == 0)
        .filter(|(_, x)| {
            let xe = x.embed(u);
            stab.iter().all(|k| xe.galois(*k as i64) == xe)
        })
        .map(|(f, _)| f)
        .collect();
    Some(if hits.len() == 1 { Ok(hits[0]) } else { Err(()) })
}

/// Isogeny restriction read off the eigenvalue orders of a dimension-4 spectrum.
///
/// Parts whose eigenvalue multiset is closed under conjugation impose nothing.
/// The remaining parts must all cut out the same imaginary quadratic field `K`
/// and give `E_K^4` or `E x E_K^3` by their total size. A degree-4 fixed field
/// of an order-16 part gives the simple surface case.
pub fn isogeny_tag(v: &RankedEigenvector) -> Option<IsogenyTag> {
    if v.dim() != 4 {
        return None;
    }
    let d = v.order();
    let mut field: Option<CmField> = None;
    let mut rigid = 0usize;
    for u in crate::cycarith::divisors(d) {
        let part = part_of_order(v, u);
        if part.is_empty() || scaled(&part, u - 1, u) == part {
            continue;
        }
        rigid += part.len();
        match part_field(&part, u) {
            Some(Ok(f)) => {
                if field.is_some_and(|g| g != f) {
                    return None;
                }
                field = Some(f);
            }
            Some(Err(())) => return None,
            None => {
                let stab = units_mod(u).into_iter().filter(|k| scaled(&part, *k, u) == part).count();
                return (u == 16 && part.len() == 4 && stab == 2).then_some(IsogenyTag::S16);
            }
        }
    }
    let Some(f) = field else {
        return Some(IsogenyTag::Arbitrary);
    };
    match (f, rigid) {
        (CmField::J, 3) => Some(IsogenyTag::EEj3),
        (CmField::J, 4) => Some(IsogenyTag::Ej4),
        (CmField::I, 4) => Some(IsogenyTag::Ei4),
        (CmField::U7, 3) => Some(IsogenyTag::EEu7Cube),
        (CmField::U8, 4) => Some(IsogenyTag::Eu8),
        (CmField::U15, 4) => Some(IsogenyTag::Eu15),
        (CmField::U20, 4) => Some(IsogenyTag::Eu20),
        (CmField::U24, 4) => Some(IsogenyTag::Eu24),
        _ => None,
    }
}

/// One row of the fourfold table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourfoldElementClass {
    pub order: u64,
    pub eigenvector: RankedEigenvector,
    pub junior: bool,
    pub isogeny_tag: IsogenyTag,
    /// Lexicographically least generator spectrum of the cyclic group.
    pub group_key: RankedEigenvector,
}

/// Lexicographically least spectrum among the generators of `<g>`.
pub fn canonical_generator(v: &RankedEigenvector) -> RankedEigenvector {
    units_mod(v.order()).into_iter().map(|k| v.power(k as i64)).min().expect("at least one unit")
}

/// Exact check that `P * conj(P)` is a product of cyclotomic polynomials.
pub fn certify_real_charpoly(v: &RankedEigenvector) -> bool {
    let d = v.order();
    let roots: Vec<CycNum> = v.exponents().iter().map(|a| CycNum::zeta(d, *a as i64)).collect();
    let p = CycPoly::from_roots(&roots);
    p.mul(&p.conj()).to_int_poly().and_then(|q| factor_into_cyclotomics(&q)).is_some()
}

/// Orders `u` with `phi(u) <= 8`.
fn small_orders() -> Vec<u64> {
    (1..=60u64).filter(|u| euler_phi(*u) <= 8).collect()
}

/// All spectra of dimension 4 with determinant one, rational real
/// characteristic polynomial, and freeness in codimension 2, grouped by
/// cyclic group.
///
/// Every eigenvalue of such an element has order `u` with `phi(u) <= 8`, so the
/// search runs over those roots of unity written over a common denominator.
pub fn enumerate_fourfold_spectra() -> BTreeMap<RankedEigenvector, BTreeSet<RankedEigenvector>> {
    let us = small_orders();
    let n = us.iter().fold(1u64, |m, u| m.lcm(u));
    let mut roots: Vec<u64> =
        us.iter().flat_map(|u| (0..*u).filter(move |a| a.gcd(u) == 1).map(move |a| a * (n / u))).collect();
    roots.sort_unstable();
    let index: HashMap<u64, usize> = roots.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut seen: BTreeSet<RankedEigenvector> = BTreeSet::new();
    for i in 0..roots.len() {
        for j in i..roots.len() {
            for k in j..roots.len() {
                let s = (roots[i] + roots[j] + roots[k]) % n;
                let fourth = (n - s) % n;
                let Some(&l) = index.get(&fourth) else { continue };
                if l < k {
                    continue;
                }
                let v = RankedEigenvector::new(n, &[roots[i], roots[j], roots[k], roots[l]]).expect("in range");
                if check_free_in_codim(&v, 2) && v.has_rational_real_charpoly() {
                    seen.insert(v);
                }
            }
        }
    }
    let mut groups: BTreeMap<RankedEigenvector, BTreeSet<RankedEigenvector>> = BTreeMap::new();
    for v in seen {
        groups.entry(canonical_generator(&v)).or_default().insert(v);
    }
    groups
}

/// The rows of the fourfold table.
///
/// Each cyclic group is shown by every generator spectrum containing the
/// eigenvalue `zeta_d` itself, falling back to the canonical generator.
pub fn classify_fourfold_elements() -> Vec<FourfoldElementClass> {
    let mut out = Vec::new();
    for (key, members) in enumerate_fourfold_spectra() {
        assert!(certify_real_charpoly(&key), "orbit test and exact factoring disagree on {key}");
        let mut shown: Vec<RankedEigenvector> =
            members.iter().filter(|v| v.exponents().contains(&1)).cloned().collect();
        if shown.is_empty() {
            shown.push(key.clone());
        }
        for v in shown {
            let tag = isogeny_tag(&v).expect("every fourfold spectrum has a tag");
            out.push(FourfoldElementClass {
                order: v.order(),
                junior: is_junior(&v),
                isogeny_tag: tag,
                group_key: key.clone(),
                eigenvector: v,
            });
        }
    }
    out.sort_by(|a, b| (a.isogeny_tag, a.order, &a.eigenvector).cmp(&(b.isogeny_tag, b.order, &b.eigenvector)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(d: u64, e: &[u64]) -> RankedEigenvector {
        RankedEigenvector::new(d, e).unwrap()
    }

    #[test]
    fn tags_of_known_rows() {
        assert_eq!(isogeny_tag(&v(7, &[0, 1, 2, 4])), Some(IsogenyTag::EEu7Cube));
        assert_eq!(isogeny_tag(&v(14, &[1, 7, 9, 11])), Some(IsogenyTag::EEu7Cube));
        assert_eq!(isogeny_tag(&v(9, &[1, 4, 6, 7])), Some(IsogenyTag::Ej4));
        assert_eq!(isogeny_tag(&v(20, &[1, 9, 13, 17])), Some(IsogenyTag::Ei4));
        assert_eq!(isogeny_tag(&v(20, &[1, 3, 7, 9])), Some(IsogenyTag::Eu20));
        assert_eq!(isogeny_tag(&v(16, &[1, 7, 11, 13])), Some(IsogenyTag::S16));
        assert_eq!(isogeny_tag(&v(5, &[1, 2, 3, 4])), Some(IsogenyTag::Arbitrary));
        assert_eq!(isogeny_tag(&v(24, &[1, 11, 17, 19])), Some(IsogenyTag::Eu8));
    }

    #[test]
    fn table_rows() {
        let rows = classify_fourfold_elements();
        let orders: BTreeSet<u64> = rows.iter().map(|r| r.order).collect();
        assert_eq!(
            orders.into_iter().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 16, 18, 20, 24, 30]
        );
        assert!(!rows.iter().any(|r| [32, 40, 60].contains(&r.order)));
        assert_eq!(rows.len(), 26);
        let groups: BTreeSet<_> = rows.iter().map(|r| r.group_key.clone()).collect();
        assert_eq!(groups.len(), 25);
        for r in &rows {
            assert!(certify_real_charpoly(&r.eigenvector));
        }
    }
}
