use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use super::CatalogError;
use crate::cycarith::{rat_frac, CycNum};
use crate::juniorenum::{enumerate_fourfold_spectra, is_junior, RankedEigenvector};
use crate::matgroup::{CharacterTable, FiniteGroup};

/// Outcome of the search for an appropriate representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepReport {
    pub dim: usize,
    /// Characters of the given degree, i.e. multiplicity vectors over the irreducibles.
    pub characters: usize,
    pub faithful: usize,
    /// Faithful characters all of whose element spectra are admissible.
    pub admissible: usize,
    /// Admissible characters whose junior elements generate the group.
    pub appropriate: Vec<Vec<u64>>,
    /// Why the first faithful character fails, if it does.
    pub first_obstruction: Option<String>,
}

fn fourfold_spectra() -> &'static BTreeSet<RankedEigenvector> {
    static SET: OnceLock<BTreeSet<RankedEigenvector>> = OnceLock::new();
    SET.get_or_init(|| enumerate_fourfold_spectra().into_values().flatten().collect())
}

/// Eigenvalue multiplicities of `chi` on each class representative:
/// `m_k = (1/o) sum_l chi(x^l) zeta_o^(-k l)`.
fn multiplicities(g: &FiniteGroup, t: &CharacterTable, chi: &[CycNum]) -> Vec<Vec<u64>> {
    t.representatives
        .iter()
        .zip(&t.class_orders)
        .map(|(&x, &o)| {
            let vals: Vec<&CycNum> = (0..o).map(|l| &chi[g.class_of(g.pow(x, l as i64))]).collect();
            (0..o)
                .map(|k| {
                    let s = vals.iter().enumerate().fold(CycNum::from_int(0), |s, (l, v)| {
                        let e = (o - (k * l as u64) % o) % o;
                        s.add_ref(&v.mul_ref(&CycNum::zeta(o, e as i64)))
                    });
                    let m = s.scale(&rat_frac(1, o as i64)).to_integer().expect("multiplicities are integers");
                    u64::try_from(m).expect("multiplicities are nonnegative")
                })
                .collect()
        })
        .collect()
}

fn compositions(degrees: &[u64], dim: u64, from: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if dim == 0 {
        out.push(cur.clone());
        return;
    }
    for i in from..degrees.len() {
        if degrees[i] <= dim {
            cur[i] += 1;
            compositions(degrees, dim - degrees[i], i, cur, out);
            cur[i] -= 1;
        }
    }
}

/// Faithful `dim`-dimensional characters whose every element has a spectrum from the
/// fourfold list, and whose junior elements generate the group.
///
/// Only `dim = 4` is supported, the dimension the spectrum list is enumerated for.
pub fn appropriate_representations(g: &FiniteGroup, t: &CharacterTable, dim: usize) -> Result<RepReport, CatalogError> {
    if dim != 4 {
        return Err(CatalogError::InvalidSpec(format!(
            "appropriate representations are defined for dimension 4, not {dim}"
        )));
    }
    let allowed = fourfold_spectra();
    let r = t.degrees.len();
    let mults: Vec<Option<Vec<Vec<u64>>>> =
        (0..r).map(|i| (t.degrees[i] <= dim as u64).then(|| multiplicities(g, t, &t.characters[i]))).collect();
    let mut combos = Vec::new();
    compositions(&t.degrees, dim as u64, 0, &mut vec![0; r], &mut combos);
    let mut report = RepReport {
        dim,
        characters: combos.len(),
        faithful: 0,
        admissible: 0,
        appropriate: Vec::new(),
        first_obstruction: None,
    };
    for n in combos {
        let mut spectra = Vec::with_capacity(t.representatives.len());
        for (c, &o) in t.class_orders.iter().enumerate() {
            let mut exps = Vec::with_capacity(dim);
            for k in 0..o as usize {
                let m: u64 =
                    (0..r).filter(|&i| n[i] > 0).map(|i| n[i] * mults[i].as_ref().expect("small degree")[c][k]).sum();
                exps.extend(std::iter::repeat(k as u64).take(m as usize));
            }
            spectra.push(RankedEigenvector::new(o, &exps).expect("exponents below the order"));
        }
        // the kernel is the set of classes acting trivially
        let faithful = spectra.iter().enumerate().all(|(c, v)| t.class_orders[c] == 1 || v.order() > 1);
        if !faithful {
            continue;
        }
        report.faithful += 1;
        let bad = spectra.iter().enumerate().find(|(c, v)| t.class_orders[*c] > 1 && !allowed.contains(*v));
        if let Some((c, v)) = bad {
            report.first_obstruction.get_or_insert_with(|| {
                format!(
                    "character {n:?}: an element of order {} has spectrum {v}, not in the fourfold list",
                    t.class_orders[c]
                )
            });
            continue;
        }
        report.admissible += 1;
        let junior: Vec<bool> = spectra.iter().map(is_junior).collect();
        if g.is_generated_by(|x| junior[g.class_of(x)]) {
            report.appropriate.push(n);
        } else {
            report
                .first_obstruction
                .get_or_insert_with(|| format!("character {n:?}: the junior elements generate a proper subgroup"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, quaternion};
    use crate::matgroup::character_table;

    #[test]
    fn cyclic_groups_of_fourfold_juniors() {
        // Z7 acting by (0,1,2,4)/7 is appropriate; Z5 only acts by (1,2,3,4)/5, which has age 2
        let z7 = cyclic(7).group(100).unwrap();
        let r7 = appropriate_representations(&z7, &character_table(&z7, 100).unwrap(), 4).unwrap();
        assert!(!r7.appropriate.is_empty());
        let z5 = cyclic(5).group(100).unwrap();
        let r5 = appropriate_representations(&z5, &character_table(&z5, 100).unwrap(), 4).unwrap();
        assert!(r5.admissible > 0);
        assert!(r5.appropriate.is_empty());
    }

    #[test]
    fn q8_multiplicities_match_the_two_dimensional_rep() {
        let g = quaternion(8).unwrap().group(100).unwrap();
        let t = character_table(&g, 100).unwrap();
        let i = t.degrees.iter().position(|d| *d == 2).unwrap();
        let m = multiplicities(&g, &t, &t.characters[i]);
        for (c, o) in t.class_orders.iter().enumerate() {
            // elements of order 4 act with eigenvalues i and -i, the involution as -1
            let want: Vec<u64> = match o {
                1 => vec![2],
                2 => vec![0, 2],
                _ => vec![0, 1, 0, 1],
            };
            assert_eq!(m[c], want);
        }
        assert!(appropriate_representations(&g, &t, 3).is_err());
    }
}
