use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{appropriate_representations, CatalogEntry, CatalogError};
use crate::cycarith::{gcd, is_prime, lcm, CycNum};
use crate::matgroup::{
    automorphism_order, character_table, for_each_automorphism, CharacterTable, FiniteGroup, MatgroupError,
};

/// Isomorphism shapes a Sylow subgroup can be tested against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SylowShape {
    Trivial,
    Cyclic,
    Noncyclic,
    Abelian,
    /// Generalized quaternion of any order.
    Quaternion,
    /// Generalized quaternion of the given order, written `Q8`, `Q16`.
    QuaternionOfOrder(u64),
    /// Abelian with the given invariants, written `Z3xZ9`.
    AbelianInvariants(Vec<u64>),
}

impl fmt::Display for SylowShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SylowShape::Trivial => f.write_str("trivial"),
            SylowShape::Cyclic => f.write_str("cyclic"),
            SylowShape::Noncyclic => f.write_str("noncyclic"),
            SylowShape::Abelian => f.write_str("abelian"),
            SylowShape::Quaternion => f.write_str("quaternion"),
            SylowShape::QuaternionOfOrder(n) => write!(f, "Q{n}"),
            SylowShape::AbelianInvariants(v) => {
                let parts: Vec<String> = v.iter().map(|n| format!("Z{n}")).collect();
                f.write_str(&parts.join("x"))
            }
        }
    }
}

impl FromStr for SylowShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("unknown Sylow shape {s:?}");
        Ok(match s {
            "trivial" => SylowShape::Trivial,
            "cyclic" => SylowShape::Cyclic,
            "noncyclic" => SylowShape::Noncyclic,
            "abelian" => SylowShape::Abelian,
            "quaternion" => SylowShape::Quaternion,
            _ if s.starts_with('Q') => {
                let n: u64 = s[1..].parse().map_err(|_| bad())?;
                if n < 8 || !n.is_power_of_two() {
                    return Err(bad());
                }
                SylowShape::QuaternionOfOrder(n)
            }
            _ if s.starts_with('Z') => {
                let mut v = s
                    .split('x')
                    .map(|p| p.strip_prefix('Z').and_then(|n| n.parse::<u64>().ok()).filter(|n| *n > 1).ok_or_else(bad))
                    .collect::<Result<Vec<u64>, String>>()?;
                v.sort_unstable();
                SylowShape::AbelianInvariants(v)
            }
            _ => return Err(bad()),
        })
    }
}

impl TryFrom<String> for SylowShape {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<SylowShape> for String {
    fn from(s: SylowShape) -> String {
        s.to_string()
    }
}

/// The closed predicate vocabulary of a search spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    OrderDivides(u64),
    OrderEquals(u64),
    ElementOrderAbsent(u64),
    ElementOrderPresent(u64),
    AtMostOneOrder2,
    ExactlyOneOrder2,
    /// Exactly one of the listed element orders occurs.
    ExactlyOneOrderAmong(Vec<u64>),
    Sylow {
        p: u64,
        any_of: Vec<SylowShape>,
    },
    /// The elements whose order lies in the set generate the group.
    GeneratedByOrder(Vec<u64>),
    /// `Aut(G)` contains an element of this order.
    HasAutOfOrder(u64),
    MaxCharDegree(u64),
    /// No irreducible character takes any of the values `zeta_n^k`, given as `[n, k]`.
    ForbiddenCharValues(Vec<[u64; 2]>),
    /// Exactly two irreducibles of this degree send the unique involution to `-1`, and they are
    /// Galois conjugate.
    ConjugatePair {
        degree: u64,
    },
    /// A faithful character of this degree with fourfold spectra whose junior elements generate.
    AppropriateRepresentation(usize),
    AnyOf(Vec<Predicate>),
}

impl Predicate {
    fn validate(&self) -> Result<(), String> {
        let pos = |n: u64, what: &str| if n == 0 { Err(format!("{what} must be positive")) } else { Ok(()) };
        match self {
            Predicate::OrderDivides(n) | Predicate::OrderEquals(n) => pos(*n, "order"),
            Predicate::ElementOrderAbsent(k) | Predicate::ElementOrderPresent(k) => pos(*k, "element order"),
            Predicate::HasAutOfOrder(k) => pos(*k, "automorphism order"),
            Predicate::MaxCharDegree(d) | Predicate::ConjugatePair { degree: d } => pos(*d, "degree"),
            Predicate::AppropriateRepresentation(d) => pos(*d as u64, "dimension"),
            Predicate::ExactlyOneOrderAmong(v) | Predicate::GeneratedByOrder(v) => {
                if v.is_empty() {
                    return Err("empty order set".into());
                }
                v.iter().try_for_each(|k| pos(*k, "element order"))
            }
            Predicate::Sylow { p, any_of } => {
                if !is_prime(*p) {
                    return Err(format!("{p} is not prime"));
                }
                if any_of.is_empty() {
                    return Err("empty shape list".into());
                }
                Ok(())
            }
            Predicate::ForbiddenCharValues(v) => v.iter().try_for_each(|[n, _]| pos(*n, "root order")),
            Predicate::AnyOf(v) => {
                if v.is_empty() {
                    return Err("empty any_of".into());
                }
                v.iter().try_for_each(Predicate::validate)
            }
            Predicate::AtMostOneOrder2 | Predicate::ExactlyOneOrder2 => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        serde_json::to_string(self).expect("predicates serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Conjunction, evaluated in order; the first failure rejects the entry.
    pub predicates: Vec<Predicate>,
    /// Evaluated on matches only and reported without filtering.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Predicate>,
}

impl SearchSpec {
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: SearchSpec = serde_path_to_error::deserialize(de).map_err(|e| CatalogError::Parse {
            path: "search spec".into(),
            line: e.inner().line(),
            column: e.inner().column(),
            message: format!("{}: {}", e.path(), e.inner()),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.predicates.is_empty() {
            return Err(CatalogError::InvalidSpec(format!("{}: at least one predicate is required", self.name)));
        }
        self.predicates
            .iter()
            .chain(&self.flags)
            .try_for_each(Predicate::validate)
            .map_err(|m| CatalogError::InvalidSpec(format!("{}: {m}", self.name)))
    }

    /// The spec with only its first `n` predicates.
    pub fn truncated(&self, n: usize) -> SearchSpec {
        SearchSpec { predicates: self.predicates[..n.min(self.predicates.len())].to_vec(), ..self.clone() }
    }
}

const BUNDLED: [(&str, &str); 4] = [
    ("search1_aut7", include_str!("../../data/specs/search1_aut7.json")),
    ("search5_order168", include_str!("../../data/specs/search5_order168.json")),
    ("five_candidates", include_str!("../../data/specs/five_candidates.json")),
    ("pstab6", include_str!("../../data/specs/pstab6.json")),
];

pub fn bundled_spec_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_spec(name: &str) -> Option<SearchSpec> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| SearchSpec::from_json(t).expect("bundled specs are valid"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub predicate: String,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub order: u64,
    pub evidence: Vec<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected_by: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Evidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryError {
    pub name: String,
    pub error: String,
}

/// Matches, rejections and per-entry errors, each sorted by entry name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub spec: String,
    pub matches: Vec<EntryResult>,
    pub rejected: Vec<EntryResult>,
    pub errors: Vec<EntryError>,
}

impl SearchReport {
    pub fn match_names(&self) -> Vec<&str> {
        self.matches.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn rejected_by(&self, name: &str) -> Option<&str> {
        self.rejected.iter().find(|r| r.name == name).and_then(|r| r.rejected_by.as_deref())
    }
}

struct Ctx<'a> {
    g: &'a FiniteGroup,
    analysis_cap: usize,
    table: OnceLock<Result<CharacterTable, MatgroupError>>,
}

impl Ctx<'_> {
    fn table(&self) -> Result<&CharacterTable, MatgroupError> {
        self.table.get_or_init(|| character_table(self.g, self.analysis_cap)).as_ref().map_err(Clone::clone)
    }
}

fn is_quaternion(s: &FiniteGroup) -> bool {
    let n = s.order();
    n >= 8 && n.is_power_of_two() && !s.is_cyclic() && s.fingerprint().involutions == 1
}

/// Invariants of an abelian `p`-group: `log_p |G[p^k]| - log_p |G[p^(k-1)]|` counts the
/// cyclic factors of order at least `p^k`.
fn abelian_p_invariants(s: &FiniteGroup, p: u64) -> Vec<u64> {
    let orders = s.element_orders();
    let log = |k: u32| -> u32 {
        let mut c = orders.iter().filter(|o| p.pow(k) % **o == 0).count() as u64;
        let mut e = 0;
        while c > 1 {
            c /= p;
            e += 1;
        }
        e
    };
    let mut at_least = Vec::new();
    let mut k = 1;
    loop {
        let w = log(k) - log(k - 1);
        if w == 0 {
            break;
        }
        at_least.push(w);
        k += 1;
    }
    let mut out = Vec::new();
    for (i, w) in at_least.iter().enumerate() {
        let next = at_least.get(i + 1).copied().unwrap_or(0);
        out.extend(std::iter::repeat(p.pow(i as u32 + 1)).take((w - next) as usize));
    }
    out.sort_unstable();
    out
}

fn describe_p_group(s: &FiniteGroup, p: u64) -> String {
    let n = s.order();
    if n == 1 {
        "trivial".into()
    } else if s.is_cyclic() {
        format!("Z{n}")
    } else if is_quaternion(s) {
        format!("Q{n}")
    } else if s.is_abelian() {
        SylowShape::AbelianInvariants(abelian_p_invariants(s, p)).to_string()
    } else {
        format!("nonabelian of order {n}")
    }
}

fn shape_matches(shape: &SylowShape, s: &FiniteGroup, p: u64) -> bool {
    match shape {
        SylowShape::Trivial => s.order() == 1,
        SylowShape::Cyclic => s.is_cyclic(),
        SylowShape::Noncyclic => !s.is_cyclic(),
        SylowShape::Abelian => s.is_abelian(),
        SylowShape::Quaternion => is_quaternion(s),
        SylowShape::QuaternionOfOrder(n) => is_quaternion(s) && s.order() as u64 == *n,
        SylowShape::AbelianInvariants(v) => {
            s.is_abelian() && s.order() as u64 == v.iter().product::<u64>() && abelian_p_invariants(s, p) == *v
        }
    }
}

fn orders_text(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn evaluate(p: &Predicate, ctx: &Ctx) -> Result<(bool, String), MatgroupError> {
    let g = ctx.g;
    let n = g.order() as u64;
    let count = |k: u64| g.element_orders().iter().filter(|o| **o == k).count();
    Ok(match p {
        Predicate::OrderDivides(m) => (m % n == 0, format!("|G| = {n}")),
        Predicate::OrderEquals(m) => (n == *m, format!("|G| = {n}")),
        Predicate::ElementOrderAbsent(k) | Predicate::ElementOrderPresent(k) => {
            let c = count(*k);
            let want_present = matches!(p, Predicate::ElementOrderPresent(_));
            ((c > 0) == want_present, format!("{c} elements of order {k}"))
        }
        Predicate::AtMostOneOrder2 => (count(2) <= 1, format!("{} involutions", count(2))),
        Predicate::ExactlyOneOrder2 => (count(2) == 1, format!("{} involutions", count(2))),
        Predicate::ExactlyOneOrderAmong(v) => {
            let present: Vec<u64> = v.iter().copied().filter(|k| count(*k) > 0).collect();
            (present.len() == 1, format!("orders present: {}", orders_text(&present)))
        }
        Predicate::Sylow { p, any_of } => {
            let s = g.subgroup(&g.sylow_subgroup(*p))?;
            let ok = any_of.iter().any(|sh| shape_matches(sh, &s, *p));
            (ok, format!("{p}-Sylow of order {}: {}", s.order(), describe_p_group(&s, *p)))
        }
        Predicate::GeneratedByOrder(v) => {
            let wanted: BTreeSet<u64> = v.iter().copied().collect();
            let pool: Vec<usize> = (0..g.order()).filter(|x| wanted.contains(&g.elem_order(*x))).collect();
            let mut gens: Vec<usize> = Vec::new();
            let mut cur = vec![0usize];
            for &x in &pool {
                if cur.len() == g.order() {
                    break;
                }
                if cur.binary_search(&x).is_err() {
                    gens.push(x);
                    cur = g.generated(&gens);
                }
            }
            let full = cur.len() == g.order();
            let gen_orders: Vec<u64> = gens.iter().map(|x| g.elem_order(*x)).collect();
            let w = if full {
                format!("generated by elements {gens:?} of orders {}", orders_text(&gen_orders))
            } else {
                format!(
                    "{} elements of order in {} generate a subgroup of order {}",
                    pool.len(),
                    orders_text(v),
                    cur.len()
                )
            };
            (full, w)
        }
        Predicate::HasAutOfOrder(k) => {
            let mut total = 0u64;
            let mut found = None;
            for_each_automorphism(g, ctx.analysis_cap, |phi| {
                total += 1;
                let o = automorphism_order(phi);
                if o % k == 0 {
                    found = Some(o);
                    return true;
                }
                false
            })?;
            match found {
                Some(o) => (true, format!("automorphism of order {o}, a multiple of {k}")),
                None => (false, format!("none of the {total} automorphisms has order divisible by {k}")),
            }
        }
        Predicate::MaxCharDegree(d) => {
            let t = ctx.table()?;
            let max = t.degrees.iter().copied().max().unwrap_or(1);
            (max <= *d, format!("degrees {:?}", t.degrees))
        }
        Predicate::ForbiddenCharValues(v) => {
            let t = ctx.table()?;
            let hit = v.iter().find_map(|[m, k]| {
                let z = CycNum::zeta(*m, *k as i64);
                t.characters.iter().position(|chi| chi.contains(&z)).map(|i| (m, k, i))
            });
            match hit {
                Some((m, k, i)) => (false, format!("character {i} takes the value zeta_{m}^{k}")),
                None => (true, format!("{} characters avoid the listed values", t.characters.len())),
            }
        }
        Predicate::ConjugatePair { degree } => {
            let t = ctx.table()?;
            let Some(c) = t.class_orders.iter().position(|o| *o == 2).filter(|_| count(2) == 1) else {
                return Ok((false, format!("{} involutions", count(2))));
            };
            let minus = CycNum::from_int(-(*degree as i64));
            let pair: Vec<usize> =
                (0..t.degrees.len()).filter(|&i| t.degrees[i] == *degree && t.characters[i][c] == minus).collect();
            let conductor = t.characters.iter().flatten().fold(1, |m, x| lcm(m, x.conductor()));
            let conjugate = pair.len() == 2
                && (1..conductor.max(2) as i64)
                    .filter(|k| gcd(*k as u64, conductor) == 1)
                    .any(|k| t.characters[pair[0]].iter().zip(&t.characters[pair[1]]).all(|(a, b)| a.galois(k) == *b));
            (conjugate, format!("characters {pair:?} of degree {degree} send the involution to -1"))
        }
        Predicate::AppropriateRepresentation(dim) => {
            let t = ctx.table()?;
            let r = appropriate_representations(g, t, *dim).map_err(|e| MatgroupError::Shape(e.to_string()))?;
            let w = format!(
                "{} characters of degree {dim}, {} faithful, {} with fourfold spectra, {} generated by juniors{}",
                r.characters,
                r.faithful,
                r.admissible,
                r.appropriate.len(),
                r.first_obstruction.map(|o| format!("; {o}")).unwrap_or_default()
            );
            (!r.appropriate.is_empty(), w)
        }
        Predicate::AnyOf(ps) => {
            let mut ws = Vec::new();
            for q in ps {
                let (ok, w) = evaluate(q, ctx)?;
                if ok {
                    return Ok((true, w));
                }
                ws.push(w);
            }
            (false, ws.join("; "))
        }
    })
}

enum Outcome {
    Match(EntryResult),
    Rejected(EntryResult),
    Error(EntryError),
}

fn run_entry(e: &CatalogEntry, spec: &SearchSpec, closure_cap: usize, analysis_cap: usize) -> Outcome {
    let fail = |err: String| Outcome::Error(EntryError { name: e.name.clone(), error: err });
    let g = match e.group(closure_cap) {
        Ok(g) => g,
        Err(err) => return fail(err.to_string()),
    };
    let ctx = Ctx { g: &g, analysis_cap, table: OnceLock::new() };
    let mut res = EntryResult {
        name: e.name.clone(),
        order: g.order() as u64,
        evidence: Vec::new(),
        rejected_by: None,
        flags: Vec::new(),
    };
    for p in &spec.predicates {
        match evaluate(p, &ctx) {
            Ok((passed, witness)) => {
                res.evidence.push(Evidence { predicate: p.label(), passed, witness });
                if !passed {
                    res.rejected_by = Some(p.label());
                    return Outcome::Rejected(res);
                }
            }
            Err(err) => return fail(format!("{}: {err}", p.label())),
        }
    }
    for p in &spec.flags {
        match evaluate(p, &ctx) {
            Ok((passed, witness)) => res.flags.push(Evidence { predicate: p.label(), passed, witness }),
            Err(err) => return fail(format!("{}: {err}", p.label())),
        }
    }
    Outcome::Match(res)
}

/// Evaluates the spec on every entry in parallel. Predicates short-circuit in order;
/// cap overruns are reported per entry.
pub fn run_search(
    catalog: &[CatalogEntry],
    spec: &SearchSpec,
    closure_cap: usize,
    analysis_cap: usize,
) -> Result<SearchReport, CatalogError> {
    spec.validate()?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(catalog.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(e) = catalog.get(i) else { break };
                        out.push(run_entry(e, spec, closure_cap, analysis_cap));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
    });
    let key = |o: &Outcome| match o {
        Outcome::Match(r) | Outcome::Rejected(r) => r.name.clone(),
        Outcome::Error(e) => e.name.clone(),
    };
    outcomes.sort_by_key(key);
    let mut report = SearchReport { spec: spec.name.clone(), matches: vec![], rejected: vec![], errors: vec![] };
    for o in outcomes {
        match o {
            Outcome::Match(r) => report.matches.push(r),
            Outcome::Rejected(r) => report.rejected.push(r),
            Outcome::Error(e) => report.errors.push(e),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, direct, quaternion};

    #[test]
    fn shapes_round_trip() {
        for s in ["trivial", "cyclic", "noncyclic", "abelian", "quaternion", "Q8", "Q16", "Z3xZ9", "Z7xZ7"] {
            assert_eq!(s.parse::<SylowShape>().unwrap().to_string(), s);
        }
        assert_eq!("Z9xZ3".parse::<SylowShape>().unwrap().to_string(), "Z3xZ9");
        for s in ["Q12", "Z1", "X", "Zx"] {
            assert!(s.parse::<SylowShape>().is_err(), "{s}");
        }
    }

    #[test]
    fn abelian_invariants_of_products() {
        let z3 = cyclic(3);
        let z9 = cyclic(9);
        let g = direct(&z3, &z9, 1000).unwrap().group(1000).unwrap();
        assert_eq!(abelian_p_invariants(&g, 3), vec![3, 9]);
        let g = direct(&z3, &z3, 1000).unwrap();
        let g = direct(&g, &z3, 1000).unwrap().group(1000).unwrap();
        assert_eq!(abelian_p_invariants(&g, 3), vec![3, 3, 3]);
        let q = quaternion(16).unwrap().group(100).unwrap();
        assert_eq!(describe_p_group(&q, 2), "Q16");
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let spec = |p: Vec<Predicate>| SearchSpec {
            name: "t".into(),
            description: String::new(),
            predicates: p,
            flags: vec![],
        };
        assert!(spec(vec![]).validate().is_err());
        assert!(spec(vec![Predicate::OrderDivides(0)]).validate().is_err());
        assert!(spec(vec![Predicate::Sylow { p: 4, any_of: vec![SylowShape::Cyclic] }]).validate().is_err());
        assert!(spec(vec![Predicate::AnyOf(vec![])]).validate().is_err());
        assert!(SearchSpec::from_json(r#"{"name":"x","predicates":[{"order_divides":-1}]}"#).is_err());
        let ok = SearchSpec::from_json(
            r#"{"name":"x","predicates":["at_most_one_order2",{"sylow":{"p":2,"any_of":["Q8"]}}]}"#,
        );
        assert_eq!(ok.unwrap().predicates.len(), 2);
    }

    #[test]
    fn bundled_specs_parse() {
        for n in bundled_spec_names() {
            let s = bundled_spec(n).unwrap();
            assert_eq!(s.name, n);
        }
    }
}
