use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cycarith::{rat_frac, render_rational};
use crate::juniorenum::{classify_fourfold_elements, classify_junior_types, enumerate_blocks, enumerate_partitions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Table1,
    Table2,
    Table3,
    Table4,
    /// Nontrivial eigenvalues of each junior type, as listed by the isogeny correspondence.
    Types,
}

impl TableKind {
    pub const ALL: [TableKind; 5] =
        [TableKind::Table1, TableKind::Table2, TableKind::Table3, TableKind::Table4, TableKind::Types];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Table1 => "table1",
            TableKind::Table2 => "table2",
            TableKind::Table3 => "table3",
            TableKind::Table4 => "table4",
            TableKind::Types => "types",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            TableKind::Table1 => &["d", "tail"],
            TableKind::Table2 => &["u", "alpha", "multiset", "s_value"],
            TableKind::Table3 => &["u", "alpha", "multiset", "free_codim2"],
            TableKind::Table4 => &["order", "eigenvector", "junior", "isogeny_tag"],
            TableKind::Types => &["d", "eigenvalues"],
        }
    }

    fn transcription(self) -> &'static str {
        match self {
            TableKind::Table1 => include_str!("../../data/table1.tsv"),
            TableKind::Table2 => include_str!("../../data/table2.tsv"),
            TableKind::Table3 => include_str!("../../data/table3.tsv"),
            TableKind::Table4 => include_str!("../../data/table4.tsv"),
            TableKind::Types => include_str!("../../data/types.tsv"),
        }
    }

    /// Rows as rendered strings, in enumeration order.
    pub fn rows(self) -> Vec<Vec<String>> {
        let join = |v: Vec<String>| v.join(",");
        match self {
            TableKind::Table1 => {
                classify_junior_types(6).iter().map(|t| vec![t.tail.order().to_string(), t.tail.to_string()]).collect()
            }
            TableKind::Table2 => enumerate_blocks()
                .iter()
                .map(|b| {
                    vec![b.u.to_string(), b.alpha.to_string(), b.multiset.to_string(), render_rational(&b.s_value)]
                })
                .collect(),
            TableKind::Table3 => enumerate_partitions()
                .iter()
                .map(|p| {
                    vec![
                        join(p.us().iter().map(u64::to_string).collect()),
                        join(p.alphas().iter().map(u32::to_string).collect()),
                        join(p.rows.iter().map(|r| r.multiset.to_string()).collect()),
                        p.free_codim2.to_string(),
                    ]
                })
                .collect(),
            TableKind::Table4 => classify_fourfold_elements()
                .iter()
                .map(|c| {
                    vec![
                        c.order.to_string(),
                        c.eigenvector.to_string(),
                        c.junior.to_string(),
                        c.isogeny_tag.as_str().to_string(),
                    ]
                })
                .collect(),
            // exponent a over d stands for exp(2 pi i a/d)
            TableKind::Types => classify_junior_types(6)
                .iter()
                .map(|t| {
                    let d = t.tail.order();
                    let e: Vec<String> =
                        t.tail.exponents().iter().map(|&a| render_rational(&rat_frac(a as i64, d as i64))).collect();
                    vec![d.to_string(), join(e)]
                })
                .collect(),
        }
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        TableKind::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown table {s:?}"))
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Tsv,
    Json,
}

#[derive(Serialize)]
struct TableDoc<'a> {
    table: &'a str,
    columns: &'a [&'a str],
    rows: &'a [Vec<String>],
}

/// The table as TSV with a header line, or as `{table, columns, rows}` JSON.
pub fn emit_table(which: TableKind, format: TableFormat) -> String {
    let rows = which.rows();
    match format {
        TableFormat::Tsv => {
            let mut out = which.columns().join("\t");
            out.push('\n');
            for r in &rows {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
            out
        }
        TableFormat::Json => {
            let doc = TableDoc { table: which.name(), columns: which.columns(), rows: &rows };
            serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffStatus {
    Match,
    /// The printed row differs from the computed one by an annotated typo.
    KnownTypo,
    /// Computed and annotated in the transcription, but absent from the printed table.
    OmittedInPrint,
    /// Printed but not computed, or computed but not transcribed.
    Unexpected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffRow {
    pub status: DiffStatus,
    pub row: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub table: TableKind,
    pub printed: usize,
    pub matched: usize,
    pub known_typos: usize,
    pub omitted_in_print: usize,
    pub unexpected: usize,
    pub rows: Vec<DiffRow>,
}

impl DiffReport {
    pub fn summary(&self) -> String {
        let mut s = format!("{}/{} match", self.matched, self.printed);
        if self.known_typos > 0 {
            s += &format!(", {} known typo", self.known_typos);
        }
        if self.omitted_in_print > 0 {
            s += &format!(", {} omitted in print", self.omitted_in_print);
        }
        if self.unexpected > 0 {
            s += &format!(", {} unexpected", self.unexpected);
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.unexpected == 0
    }
}

/// Compares the computed table against the vendored transcription of the printed one.
///
/// Transcription rows hold the printed values plus a note: empty, `typo: column=value`
/// giving the corrected cell, or `omitted in print`.
pub fn diff_paper(which: TableKind) -> DiffReport {
    let computed = which.rows();
    let cols = which.columns();
    let mut used = vec![false; computed.len()];
    let mut take = |row: &[String]| -> bool {
        match (0..computed.len()).find(|&i| !used[i] && computed[i] == row) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        }
    };
    let mut report = DiffReport {
        table: which,
        printed: 0,
        matched: 0,
        known_typos: 0,
        omitted_in_print: 0,
        unexpected: 0,
        rows: Vec::new(),
    };
    for line in which.transcription().lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let mut cells: Vec<String> = line.split('\t').map(str::to_string).collect();
        cells.resize(cols.len() + 1, String::new());
        let note = cells.pop().unwrap_or_default();
        let (status, note) = if note.is_empty() {
            report.printed += 1;
            if take(&cells) {
                report.matched += 1;
                (DiffStatus::Match, note)
            } else {
                (DiffStatus::Unexpected, "printed row not computed".to_string())
            }
        } else if let Some(fix) = note.strip_prefix("typo: ") {
            report.printed += 1;
            let corrected = fix.split_once('=').and_then(|(c, v)| {
                let i = cols.iter().position(|x| *x == c)?;
                let mut r = cells.clone();
                r[i] = v.to_string();
                Some(r)
            });
            match corrected {
                Some(r) if take(&r) => (DiffStatus::KnownTypo, note),
                _ => (DiffStatus::Unexpected, format!("{note}; corrected row not computed")),
            }
        } else if note == "omitted in print" {
            if take(&cells) {
                (DiffStatus::OmittedInPrint, note)
            } else {
                (DiffStatus::Unexpected, "annotated row not computed".to_string())
            }
        } else {
            (DiffStatus::Unexpected, format!("unreadable note {note:?}"))
        };
        match status {
            DiffStatus::KnownTypo => report.known_typos += 1,
            DiffStatus::OmittedInPrint => report.omitted_in_print += 1,
            DiffStatus::Unexpected => report.unexpected += 1,
            DiffStatus::Match => {}
        }
        report.rows.push(DiffRow { status, row: cells, note });
    }
    for (i, row) in computed.into_iter().enumerate() {
        if !used[i] {
            report.unexpected += 1;
            report.rows.push(DiffRow {
                status: DiffStatus::Unexpected,
                row,
                note: "computed row not transcribed".into(),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcription_headers_match_columns() {
        for t in TableKind::ALL {
            let header = t.transcription().lines().next().unwrap();
            let mut want: Vec<&str> = t.columns().to_vec();
            want.push("note");
            assert_eq!(header.split('\t').collect::<Vec<_>>(), want, "{t}");
        }
    }

    #[test]
    fn emission_is_stable() {
        for t in [TableKind::Table1, TableKind::Table2] {
            assert_eq!(emit_table(t, TableFormat::Tsv), emit_table(t, TableFormat::Tsv));
            let v: serde_json::Value = serde_json::from_str(&emit_table(t, TableFormat::Json)).unwrap();
            assert_eq!(v["table"], t.name());
        }
    }
}
