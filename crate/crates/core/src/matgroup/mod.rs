//! Finite groups: matrix groups over cyclotomic fields, their multiplication
//! tables, conjugacy classes, Sylow subgroups, character tables and
//! automorphism searches.

mod aut;
mod chars;
mod group;
mod matrix;

pub use aut::{automorphism_count, automorphism_order, for_each_automorphism, has_automorphism_of_order};
pub use chars::{character_table, splitting_coefficient, CharacterTable};
pub use group::{ConjClass, FiniteGroup, GroupFingerprint};
pub use matrix::MatrixOverCyc;

use std::sync::OnceLock;

use crate::cycarith::lcm;
use crate::juniorenum::RankedEigenvector;

/// Default element cap for closures.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;
/// Default order cap for character tables and automorphism searches.
pub const DEFAULT_ANALYSIS_CAP: usize = 2048;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum MatgroupError {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("group exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("no finite order up to {0}")]
    InfiniteOrder(u64),
    #[error("characteristic polynomial is not a product of cyclotomic factors")]
    NotCyclotomic,
    #[error("the given set is not a subgroup")]
    NotSubgroup,
    #[error("class function is not a character")]
    NotACharacter,
}

/// A finite group of matrices together with its multiplication table.
#[derive(Debug)]
pub struct FiniteMatrixGroup {
    generators: Vec<MatrixOverCyc>,
    elements: Vec<MatrixOverCyc>,
    group: FiniteGroup,
    spectra: OnceLock<Vec<RankedEigenvector>>,
}

/// Breadth-first product closure; element `i` of the result is the `i`-th discovered.
pub fn close_group(gens: &[MatrixOverCyc], cap: usize) -> Result<FiniteMatrixGroup, MatgroupError> {
    let dim = gens.first().map(|g| g.dim()).ok_or_else(|| MatgroupError::Shape("no generators".into()))?;
    if gens.iter().any(|g| g.dim() != dim) {
        return Err(MatgroupError::Shape("generators of different dimensions".into()));
    }
    let c = gens.iter().fold(1, |m, g| lcm(m, g.conductor()));
    let embedded: Vec<MatrixOverCyc> = gens.iter().map(|g| g.embed(c)).collect();
    let (elements, group) = FiniteGroup::closure(
        &embedded,
        MatrixOverCyc::identity(dim).embed(c),
        |a, b| a.mul(b).expect("same dimension"),
        |m| m.key_at(c),
        cap,
    )?;
    Ok(FiniteMatrixGroup { generators: embedded, elements, group, spectra: OnceLock::new() })
}

impl FiniteMatrixGroup {
    pub fn generators(&self) -> &[MatrixOverCyc] {
        &self.generators
    }

    pub fn elements(&self) -> &[MatrixOverCyc] {
        &self.elements
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn index_of(&self, m: &MatrixOverCyc) -> Option<usize> {
        self.elements.iter().position(|x| x == m)
    }

    /// Ranked eigenvalue vectors of all elements, by index.
    pub fn spectra(&self) -> &[RankedEigenvector] {
        self.spectra.get_or_init(|| {
            self.elements.iter().map(|m| m.ranked_eigenvalues().expect("elements have finite order")).collect()
        })
    }

    /// Every non-identity element has eigenvalue-1 multiplicity at most `n - c - 1`.
    pub fn acts_freely_in_codim(&self, c: usize) -> bool {
        let n = self.dim();
        self.spectra().iter().skip(1).all(|v| v.fixed_multiplicity() + c < n)
    }

    /// The subgroup on an index set, with elements in ascending index order.
    pub fn subgroup(&self, set: &[usize]) -> Result<FiniteMatrixGroup, MatgroupError> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let group = self.group.subgroup(&sorted)?;
        let elements: Vec<MatrixOverCyc> = sorted.iter().map(|i| self.elements[*i].clone()).collect();
        let gens: Vec<MatrixOverCyc> = group.generating_set().iter().map(|i| elements[*i].clone()).collect();
        let generators = if gens.is_empty() { vec![elements[0].clone()] } else { gens };
        Ok(FiniteMatrixGroup { generators, elements, group, spectra: OnceLock::new() })
    }

    pub fn sylow_subgroup(&self, p: u64) -> FiniteMatrixGroup {
        self.subgroup(&self.group.sylow_subgroup(p)).expect("Sylow subgroup is a subgroup")
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        self.group.fingerprint()
    }
}

/// Multiplicative order of a finite-order matrix: the lcm of its eigenvalue orders.
pub fn element_order(m: &MatrixOverCyc) -> Result<u64, MatgroupError> {
    Ok(m.ranked_eigenvalues()?.order())
}

pub fn ranked_eigenvalues(m: &MatrixOverCyc) -> Result<RankedEigenvector, MatgroupError> {
    m.ranked_eigenvalues()
}
