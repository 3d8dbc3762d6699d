//! Rewriting systems for quadratic algebras: normalized bases, critical
//! monomials, confluence and PBW certificates.

mod certificate;
mod rewriting;
mod search;

pub use certificate::{CertificateExport, CriticalGraph, GraphExport, PbwCertificate};
pub use rewriting::{
    normalize_basis, normal_words, ConfluenceResult, Counterexample, RewritingGraph,
    RewritingSystem, DEFAULT_MAX_VERTICES,
};
pub use search::{one_relator_lemma_order, pbw_search, pbw_search_with, SearchOptions};
