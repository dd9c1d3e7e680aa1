//! `crepant`: tables, catalog searches, group inspection and the exact verification ledger.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use crepant::catalog::{
    builtin_catalog, bundled_spec, bundled_spec_names, catalog_to_json, diff_paper, emit_table, load_catalog,
    run_search, CatalogEntry, CatalogError, DiffStatus, SearchReport, SearchSpec, TableFormat, TableKind,
};
use crepant::matgroup::{character_table, DEFAULT_ANALYSIS_CAP, DEFAULT_CLOSURE_CAP};
use crepant::torsioncount::{counting_ledger, table6_rows, verify_cm_identities, verify_lattice_row_maximal, Report};

#[derive(Parser)]
#[command(name = "crepant", version, about = "Junior-element tables, group catalog searches and exact checks")]
struct Cli {
    /// Element cap for group closures.
    #[arg(long, global = true, env = "CREPANT_CAP", default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,

    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a classification table: table1 to table4, or types.
    Tables {
        #[arg(value_parser = parse_table)]
        which: TableKind,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        /// Compare against the vendored transcription of the printed table.
        #[arg(long)]
        diff_paper: bool,
    },
    /// Run a search spec (a JSON file or a bundled spec name) over a catalog.
    Search {
        spec: String,
        /// Catalog JSON file; the builtin catalog by default.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Check the CM identities, the counting ledger and the lattice rows.
    Verify,
    /// Inspect one catalog group.
    Group(GroupArgs),
    /// Print the builtin catalog as JSON.
    Catalog,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["info", "chars", "sylow"])))]
struct GroupArgs {
    name: String,
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Order, element-order histogram, center and derived subgroup.
    #[arg(long)]
    info: bool,
    /// Irreducible character degrees and values.
    #[arg(long)]
    chars: bool,
    /// Order and isomorphism shape of a Sylow p-subgroup.
    #[arg(long, value_name = "P")]
    sylow: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

fn parse_table(s: &str) -> Result<TableKind, String> {
    s.parse()
}

/// Exit status: 1 for divergences, 2 for usage and input errors.
enum Failure {
    Divergence,
    Usage(String),
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(s: &str) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_all(s.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("cannot write to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => {
        emit(&format!("{}\n", format_args!($($t)*)))
    };
}

fn print_json<T: serde::Serialize>(v: &T) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

fn catalog(path: Option<&Path>, cap: usize) -> Result<Vec<CatalogEntry>, Failure> {
    match path {
        Some(p) => Ok(load_catalog(p, cap)?),
        None => Ok(builtin_catalog()),
    }
}

fn tables(cli: &Cli, which: TableKind, format: Format, diff: bool) -> Result<(), Failure> {
    if !diff {
        let f = if cli.json || matches!(format, Format::Json) { TableFormat::Json } else { TableFormat::Tsv };
        emit(&emit_table(which, f));
        return Ok(());
    }
    let report = diff_paper(which);
    if cli.json {
        print_json(&report);
    } else {
        out!("{which}: {}", report.summary());
        for r in report.rows.iter().filter(|r| r.status != DiffStatus::Match) {
            out!("  {:?}\t{}\t{}", r.status, r.row.join("\t"), r.note);
        }
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Divergence)
    }
}

fn load_spec(arg: &str) -> Result<SearchSpec, Failure> {
    let p = Path::new(arg);
    if p.exists() {
        let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
        return Ok(SearchSpec::from_json(&text)?);
    }
    bundled_spec(arg).ok_or_else(|| {
        Failure::Usage(format!("{arg} is neither a file nor a bundled spec ({})", bundled_spec_names().join(", ")))
    })
}

fn print_search(r: &SearchReport) {
    out!("spec {}: {} match, {} rejected, {} errors", r.spec, r.matches.len(), r.rejected.len(), r.errors.len());
    for m in &r.matches {
        out!("match\t{}\t(order {})", m.name, m.order);
        for e in &m.evidence {
            out!("  pass\t{}\t{}", e.predicate, e.witness);
        }
        for f in &m.flags {
            out!("  flag {}\t{}\t{}", if f.passed { "raised" } else { "clear" }, f.predicate, f.witness);
        }
    }
    for m in &r.rejected {
        let last = m.evidence.last().expect("a rejection has evidence");
        out!("reject\t{}\t(order {})\t{}\t{}", m.name, m.order, last.predicate, last.witness);
    }
    for e in &r.errors {
        out!("error\t{}\t{}", e.name, e.error);
    }
}

fn search(cli: &Cli, spec: &str, path: Option<&Path>) -> Result<(), Failure> {
    let spec = load_spec(spec)?;
    let cat = catalog(path, cli.cap)?;
    let report = run_search(&cat, &spec, cli.cap, DEFAULT_ANALYSIS_CAP)?;
    if cli.json {
        print_json(&report);
    } else {
        print_search(&report);
    }
    Ok(())
}

fn verify(cli: &Cli) -> Result<(), Failure> {
    let mut reports: Vec<Report> = verify_cm_identities();
    reports.extend(counting_ledger());
    for row in table6_rows() {
        match verify_lattice_row_maximal(row.k, &row.s) {
            Ok(r) => reports.push(r),
            Err(e) => reports.push(Report::new(&format!("lattice_row_{}", row.k), row.target, false, e, "certified")),
        }
    }
    let ok = reports.iter().all(Report::passed);
    if cli.json {
        print_json(&reports);
    } else {
        for r in &reports {
            let status = if r.passed() { "pass" } else { "FAIL" };
            out!("{status}\t{}\t{}\t{} = {}", r.check_id, r.claim_ref, r.lhs, r.rhs);
        }
        let failed = reports.iter().filter(|r| !r.passed()).count();
        out!("{} checks, {failed} failed", reports.len());
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Divergence)
    }
}

fn group(cli: &Cli, a: &GroupArgs) -> Result<(), Failure> {
    let cat = catalog(a.catalog.as_deref(), cli.cap)?;
    let entry = cat
        .iter()
        .find(|e| e.name == a.name)
        .ok_or_else(|| Failure::Usage(format!("no group named {} in the catalog", a.name)))?;
    let g = entry.group(cli.cap)?;
    if a.info {
        let f = g.fingerprint();
        if cli.json {
            print_json(&f);
        } else {
            out!("name\t{}", entry.name);
            out!("order\t{}", f.order);
            let h: Vec<String> = f.order_histogram.iter().map(|(o, n)| format!("{o}:{n}")).collect();
            out!("element orders\t{}", h.join(" "));
            out!("abelian\t{}", f.abelian);
            out!("center\t{}", f.center_order);
            out!("derived subgroup\t{}", f.derived_order);
            out!("involutions\t{}", f.involutions);
            if !entry.tags.is_empty() {
                out!("tags\t{}", entry.tags.join(" "));
            }
        }
    } else if a.chars {
        let t = character_table(&g, DEFAULT_ANALYSIS_CAP.max(cli.cap.min(g.order())))
            .map_err(|e| Failure::Usage(format!("{}: {e}", entry.name)))?;
        if cli.json {
            print_json(&t);
        } else {
            let d: Vec<String> = t.degrees.iter().map(u64::to_string).collect();
            out!("degrees\t{}", d.join(","));
            let o: Vec<String> = t.class_orders.iter().map(u64::to_string).collect();
            let s: Vec<String> = t.class_sizes.iter().map(u64::to_string).collect();
            out!("class orders\t{}", o.join("\t"));
            out!("class sizes\t{}", s.join("\t"));
            for (i, chi) in t.characters.iter().enumerate() {
                let v: Vec<String> = chi.iter().map(ToString::to_string).collect();
                out!("chi_{i}\t{}", v.join("\t"));
            }
        }
    } else if let Some(p) = a.sylow {
        if !crepant::cycarith::is_prime(p) {
            return Err(Failure::Usage(format!("{p} is not prime")));
        }
        let s = g.subgroup(&g.sylow_subgroup(p)).map_err(|e| Failure::Usage(e.to_string()))?;
        let f = s.fingerprint();
        if cli.json {
            print_json(&f);
        } else {
            let h: Vec<String> = f.order_histogram.iter().map(|(o, n)| format!("{o}:{n}")).collect();
            out!(
                "{p}-Sylow of order {}\tcyclic {}\tabelian {}\telement orders {}",
                f.order,
                s.is_cyclic(),
                f.abelian,
                h.join(" ")
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tables { which, format, diff_paper } => tables(&cli, *which, *format, *diff_paper),
        Command::Search { spec, catalog } => search(&cli, spec, catalog.as_deref()),
        Command::Verify => verify(&cli),
        Command::Group(a) => group(&cli, a),
        Command::Catalog => {
            emit(&catalog_to_json(&builtin_catalog()));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Divergence) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
