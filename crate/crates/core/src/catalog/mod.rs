//! Group catalogs, built-in constructions, predicate searches and table emission.

mod build;
mod reps;
mod search;
mod tables;

pub use build::{cyclic, direct, quaternion, semidirect, sl23, sl32, Word};
pub use reps::{appropriate_representations, RepReport};
pub use search::{
    bundled_spec, bundled_spec_names, run_search, EntryError, EntryResult, Evidence, Predicate, SearchReport,
    SearchSpec, SylowShape,
};
pub use tables::{diff_paper, emit_table, DiffReport, DiffRow, DiffStatus, TableFormat, TableKind};

use serde::{Deserialize, Serialize};

use crate::matgroup::{close_group, FiniteGroup, MatgroupError, MatrixOverCyc};

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("entry {name}: {source}")]
    Closure { name: String, source: MatgroupError },
    #[error("entry {name}: expected order {expected}, closure has {actual}")]
    OrderMismatch { name: String, expected: u64, actual: u64 },
    #[error("duplicate entry name {0}")]
    Duplicate(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("unknown {what} {name}")]
    Unknown { what: &'static str, name: String },
}

/// Generators as one-line permutations of `0..n` or as matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Perm(Vec<Vec<usize>>),
    Matrix(Vec<MatrixOverCyc>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub generators: GeneratorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

impl CatalogEntry {
    pub fn from_perms(name: &str, perms: Vec<Vec<usize>>) -> Self {
        CatalogEntry { name: name.into(), generators: GeneratorSpec::Perm(perms), expected_order: None, tags: vec![] }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn tagged(mut self, tag: &str) -> Self {
        self.tags.push(tag.into());
        self
    }

    /// The closure as an abstract group, with the generator images as element indices.
    pub fn group_with_generators(&self, cap: usize) -> Result<(FiniteGroup, Vec<usize>), CatalogError> {
        let err = |source| CatalogError::Closure { name: self.name.clone(), source };
        let (g, gens) = match &self.generators {
            GeneratorSpec::Perm(ps) => {
                if ps.is_empty() {
                    return Err(err(MatgroupError::Shape("no generators".into())));
                }
                let (elems, g) = FiniteGroup::from_permutations(ps, cap).map_err(err)?;
                let idx = ps.iter().map(|p| elems.iter().position(|e| e == p).expect("generator in closure")).collect();
                (g, idx)
            }
            GeneratorSpec::Matrix(ms) => {
                let mg = close_group(ms, cap).map_err(err)?;
                let idx = ms.iter().map(|m| mg.index_of(m).expect("generator in closure")).collect();
                (mg.group().clone(), idx)
            }
        };
        if let Some(expected) = self.expected_order {
            if expected != g.order() as u64 {
                return Err(CatalogError::OrderMismatch {
                    name: self.name.clone(),
                    expected,
                    actual: g.order() as u64,
                });
            }
        }
        Ok((g, gens))
    }

    pub fn group(&self, cap: usize) -> Result<FiniteGroup, CatalogError> {
        self.group_with_generators(cap).map(|(g, _)| g)
    }
}

/// Parses a catalog document without closing the groups. Blank input is an empty catalog.
pub fn parse_catalog(text: &str, path: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: CatalogFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        CatalogError::Parse {
            path: path.into(),
            line: inner.line(),
            column: inner.column(),
            message: format!("{}: {}", e.path(), inner),
        }
    })?;
    let mut seen = std::collections::BTreeSet::new();
    for e in &file.entries {
        if !seen.insert(e.name.as_str()) {
            return Err(CatalogError::Duplicate(e.name.clone()));
        }
    }
    Ok(file.entries)
}

/// Reads and validates a catalog: every entry must close within `cap` and match its order hint.
pub fn load_catalog(path: impl AsRef<std::path::Path>, cap: usize) -> Result<Vec<CatalogEntry>, CatalogError> {
    let p = path.as_ref();
    let text =
        std::fs::read_to_string(p).map_err(|source| CatalogError::Io { path: p.display().to_string(), source })?;
    let entries = parse_catalog(&text, &p.display().to_string())?;
    for e in &entries {
        e.group(cap)?;
    }
    Ok(entries)
}

pub fn catalog_to_json(entries: &[CatalogEntry]) -> String {
    let file = CatalogFile { entries: entries.to_vec() };
    serde_json::to_string_pretty(&file).expect("catalog serializes") + "\n"
}

/// Bundled copy of [`builtin_catalog`], kept in sync by a test.
pub const BUILTIN_CATALOG_JSON: &str = include_str!("../../data/builtin_catalog.json");

/// Named groups used by the sixfold and fourfold arguments, built by the constructors.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let cap = crate::matgroup::DEFAULT_CLOSURE_CAP;
    let build = || -> Result<Vec<CatalogEntry>, CatalogError> {
        let z3 = cyclic(3);
        let z5 = cyclic(5);
        let z7 = cyclic(7);
        let z8 = cyclic(8);
        let q8 = quaternion(8)?;
        let q16 = quaternion(16)?;
        // Z3 = <a>, Z8 = <b>, b a b^-1 = a^-1
        let z3sdz8 = semidirect(&z3, &z8, &[vec![vec![0, 0]]], cap)?;
        // Z7 = <a>, Z3 = <b>, b a b^-1 = a^2
        let z7sdz3 = semidirect(&z7, &z3, &[vec![vec![0, 0]]], cap)?;
        // Q8 = <i, j>; Z7 acts trivially, the order-3 generator sends i -> j -> ij
        let q8sd =
            semidirect(&q8, &z7sdz3, &[vec![vec![0], vec![1]], vec![vec![1], vec![0, 1]]], cap)?.named("Q8sd_Z7sdZ3");
        // Q8 = <i, j>: i inverts Z5, j centralizes it
        let z5sdq8 = semidirect(&z5, &q8, &[vec![vec![0, 0, 0, 0]], vec![vec![0]]], cap)?.tagged("smallgroup-ref:40,4");
        // Q16 = <a, b>: a inverts Z5, the kernel is <a^2, b> = Q8
        let z5sdq16 =
            semidirect(&z5, &q16, &[vec![vec![0, 0, 0, 0]], vec![vec![0]]], cap)?.tagged("smallgroup-ref:80,18");
        // Q16 = <a, b>: b inverts Z3, the kernel is <a> = Z8
        let z3sdq16 = semidirect(&z3, &q16, &[vec![vec![0]], vec![vec![0, 0]]], cap)?.tagged("smallgroup-ref:48,8");
        Ok(vec![
            z3.clone(),
            z7.clone(),
            q8.clone(),
            q16.clone(),
            sl23(),
            sl32(),
            direct(&z3, &z3, cap)?,
            direct(&z7, &z7, cap)?,
            z3sdz8,
            z7sdz3,
            direct(&z3, &q8sd, cap)?.named("Z3xQ8sd_Z7sdZ3"),
            q8sd,
            direct(&z5, &q8, cap)?.tagged("smallgroup-ref:40,11"),
            z5sdq8,
            z5sdq16,
            z3sdq16,
            direct(&z3, &q16, cap)?.tagged("smallgroup-ref:48,27"),
        ])
    };
    let mut out = build().expect("builtin constructions are valid");
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

pub fn builtin_entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    builtin_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::Unknown { what: "builtin group", name: name.into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_malformed_documents() {
        assert!(parse_catalog("  \n", "x").unwrap().is_empty());
        let err = parse_catalog(
            "{\"entries\": [{\"name\": \"A\", \"generators\": {\"kind\": \"perm\", \"data\": [[0, \"x\"]]}}]}",
            "x",
        )
        .unwrap_err();
        match err {
            CatalogError::Parse { message, line, .. } => {
                assert!(message.contains("entries[0].generators"), "{message}");
                assert_eq!(line, 1);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn order_hint_mismatch_names_the_entry() {
        let mut e = builtin_entry("SL23").unwrap();
        e.name = "Bad".into();
        e.expected_order = Some(48);
        let err = e.group(1000).unwrap_err();
        assert!(matches!(&err, CatalogError::OrderMismatch { name, expected: 48, actual: 24 } if name == "Bad"));
        assert!(err.to_string().contains("Bad"));
    }

    #[test]
    fn bundled_catalog_matches_constructors() {
        let parsed = parse_catalog(BUILTIN_CATALOG_JSON, "builtin").unwrap();
        assert_eq!(parsed, builtin_catalog());
        assert_eq!(catalog_to_json(&parsed), BUILTIN_CATALOG_JSON);
    }

    #[test]
    fn matrix_entries_close() {
        use crate::cycarith::CycNum;
        let j = MatrixOverCyc::diagonal(&[CycNum::zeta(3, 1), CycNum::zeta(3, 2)]);
        let e = CatalogEntry {
            name: "Z3mat".into(),
            generators: GeneratorSpec::Matrix(vec![j]),
            expected_order: Some(3),
            tags: vec![],
        };
        let text = catalog_to_json(std::slice::from_ref(&e));
        let back = parse_catalog(&text, "m").unwrap();
        assert_eq!(back[0].group(10).unwrap().order(), 3);
    }
}
