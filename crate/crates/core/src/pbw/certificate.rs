use serde::{Deserialize, Serialize};

use crate::quad::QuadraticAlgebra;
use crate::tensor::{DeglexOrder, MultiIndex};

use super::rewriting::{normalize_basis, RewritingGraph, RewritingSystem};

/// Rewriting graph of one critical monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalGraph {
    pub monomial: MultiIndex,
    pub graph: RewritingGraph,
}

/// Evidence that an algebra is PBW: the order, its normalized basis, and a
/// single-terminal rewriting graph for every critical monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwCertificate {
    system: RewritingSystem,
    graphs: Vec<CriticalGraph>,
}

impl PbwCertificate {
    pub(crate) fn new(system: RewritingSystem, graphs: Vec<CriticalGraph>) -> Self {
        PbwCertificate { system, graphs }
    }

    pub fn order(&self) -> &DeglexOrder {
        self.system.order()
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.system
    }

    pub fn graphs(&self) -> &[CriticalGraph] {
        &self.graphs
    }

    pub fn critical_monomials(&self) -> Vec<MultiIndex> {
        self.graphs.iter().map(|g| g.monomial.clone()).collect()
    }

    /// Re-derive the rules from `a` and recheck every graph.
    pub fn verify(&self, a: &QuadraticAlgebra) -> bool {
        let Ok(fresh) = normalize_basis(a.relators(), self.order()) else {
            return false;
        };
        if fresh != self.system {
            return false;
        }
        let crit = fresh.critical_monomials();
        crit.len() == self.graphs.len()
            && crit
                .iter()
                .zip(&self.graphs)
                .all(|(m, g)| *m == g.monomial && g.graph.terminal.len() == 1)
    }

    /// Text-rendered form for export.
    pub fn export(&self, labels: &[String]) -> CertificateExport {
        let order = self.order().ascending();
        CertificateExport {
            order: order.iter().map(|&g| labels[g].clone()).collect(),
            rules: self
                .system
                .rules()
                .iter()
                .map(|(lead, tail)| RuleExport {
                    lead: lead.render(labels),
                    tail: tail.render(labels),
                })
                .collect(),
            critical: self
                .graphs
                .iter()
                .map(|g| GraphExport {
                    monomial: g.monomial.render(labels),
                    vertices: g.graph.vertices.iter().map(|v| v.render(labels)).collect(),
                    edges: g.graph.edges.clone(),
                    terminal: g.graph.terminal_polys()[0].render(labels),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleExport {
    pub lead: String,
    pub tail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub monomial: String,
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub terminal: String,
}

/// Serializable certificate: generators in ascending order, rules, and
/// one graph per critical monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateExport {
    pub order: Vec<String>,
    pub rules: Vec<RuleExport>,
    pub critical: Vec<GraphExport>,
}

impl CertificateExport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("order: {}\n", self.order.join(" < ")));
        out.push_str("rules:\n");
        for r in &self.rules {
            out.push_str(&format!("  {} -> {}\n", r.lead, r.tail));
        }
        out.push_str(&format!("critical monomials: {}\n", self.critical.len()));
        for g in &self.critical {
            out.push_str(&format!(
                "  {}: {} vertices, {} edges, terminal {}\n",
                g.monomial,
                g.vertices.len(),
                g.edges.len(),
                g.terminal
            ));
        }
        out
    }
}
