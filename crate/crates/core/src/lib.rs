//! Exact enumeration of junior automorphisms, finite matrix groups over
//! cyclotomic fields, torsion counting on abelian-variety models, and
//! predicate searches over small group catalogs.

pub mod catalog;
pub mod cycarith;
pub mod juniorenum;
pub mod matgroup;
pub mod torsioncount;
