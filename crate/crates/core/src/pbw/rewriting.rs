use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{rref_in_place, Subspace};
use crate::tensor::{DeglexOrder, MultiIndex, NcPoly};

use super::certificate::{CriticalGraph, PbwCertificate};

/// Cap on vertices explored in one rewriting graph.
pub const DEFAULT_MAX_VERTICES: usize = 100_000;

/// Degree-2 rewriting rules `lead -> tail` from a normalized relator basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritingSystem {
    field: Fp,
    order: DeglexOrder,
    /// rules with leads in descending order
    rules: Vec<(MultiIndex, NcPoly)>,
    index: HashMap<MultiIndex, usize>,
}

/// Gaussian elimination over the `d^2` monomial coordinates sorted
/// descending under `order`; each row becomes `lead -> -(rest)`.
pub fn normalize_basis(omega: &Subspace, order: &DeglexOrder) -> Result<RewritingSystem> {
    let d = order.num_generators();
    if omega.ambient_dim() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "relators live in dimension {}, order has {} generators",
            omega.ambient_dim(),
            d
        )));
    }
    let f = omega.field();
    let mut monos: Vec<MultiIndex> = (0..d * d).map(|k| MultiIndex::pair(k / d, k % d)).collect();
    monos.sort_by(|a, b| order.compare(b, a));
    let coord: Vec<usize> = monos.iter().map(|m| m.get(0) * d + m.get(1)).collect();
    let rows = omega.dim();
    let cols = d * d;
    let mut data = Vec::with_capacity(rows * cols);
    for r in omega.basis().row_iter() {
        data.extend(coord.iter().map(|&k| r[k]));
    }
    let pivots = rref_in_place(f, rows, cols, &mut data);
    let mut rules = Vec::with_capacity(pivots.len());
    for (i, &pc) in pivots.iter().enumerate() {
        let row = &data[i * cols..(i + 1) * cols];
        let tail = NcPoly::from_terms(
            f,
            d,
            row.iter()
                .enumerate()
                .skip(pc + 1)
                .filter(|(_, &c)| c != 0)
                .map(|(c, &v)| (monos[c].clone(), f.neg(v))),
        );
        rules.push((monos[pc].clone(), tail));
    }
    Ok(RewritingSystem::from_rules(f, order.clone(), rules))
}

impl RewritingSystem {
    pub(crate) fn from_rules(field: Fp, order: DeglexOrder, rules: Vec<(MultiIndex, NcPoly)>) -> Self {
        let index = rules
            .iter()
            .enumerate()
            .map(|(i, (m, _))| (m.clone(), i))
            .collect();
        RewritingSystem {
            field,
            order,
            rules,
            index,
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn order(&self) -> &DeglexOrder {
        &self.order
    }

    pub fn num_generators(&self) -> usize {
        self.order.num_generators()
    }

    /// Rules as `(lead, tail)`, leads descending.
    pub fn rules(&self) -> &[(MultiIndex, NcPoly)] {
        &self.rules
    }

    pub fn is_lead(&self, a: usize, b: usize) -> bool {
        self.index.contains_key(&MultiIndex::pair(a, b))
    }

    pub fn tail(&self, lead: &MultiIndex) -> Option<&NcPoly> {
        self.index.get(lead).map(|&i| &self.rules[i].1)
    }

    /// Words `x_a x_b x_c` with `x_a x_b` and `x_b x_c` both leads, ascending.
    pub fn critical_monomials(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for (ab, _) in &self.rules {
            for (bc, _) in &self.rules {
                if ab.get(1) == bc.get(0) {
                    out.push(MultiIndex::new(&[ab.get(0), ab.get(1), bc.get(1)]));
                }
            }
        }
        out.sort_by(|a, b| self.order.compare(a, b));
        out
    }

    /// Lead occurrences in a monomial, as start positions, leftmost first.
    fn occurrences(&self, m: &MultiIndex) -> Vec<usize> {
        (0..m.degree().saturating_sub(1))
            .filter(|&k| self.is_lead(m.get(k), m.get(k + 1)))
            .collect()
    }

    fn apply(&self, f: &NcPoly, m: &MultiIndex, c: u32, pos: usize) -> NcPoly {
        let lead = m.slice(pos, pos + 2);
        let tail = self.tail(&lead).expect("position holds a lead");
        let mut out = f.clone();
        out.add_term(m.clone(), self.field.neg(c));
        for (t, tc) in tail.terms() {
            out.add_term(m.splice(pos, 2, t), self.field.mul(c, tc));
        }
        out
    }

    /// Every single-rule application: monomials from the largest down, and
    /// for each monomial its occurrences from the left.
    pub fn successors(&self, f: &NcPoly) -> Vec<NcPoly> {
        let mut terms: Vec<(&MultiIndex, u32)> = f.terms().collect();
        terms.sort_by(|a, b| self.order.compare(b.0, a.0));
        let mut out = Vec::new();
        for (m, c) in terms {
            for pos in self.occurrences(m) {
                out.push(self.apply(f, m, c, pos));
            }
        }
        out
    }

    /// Deterministic reduction: rewrite the largest reducible monomial at its
    /// leftmost occurrence until no lead remains.
    pub fn normal_form(&self, f: &NcPoly, max_steps: usize) -> Result<NcPoly> {
        let mut cur = f.clone();
        for _ in 0..=max_steps {
            let mut best: Option<(&MultiIndex, u32, usize)> = None;
            for (m, c) in cur.terms() {
                if let Some(&pos) = self.occurrences(m).first() {
                    let better = match best {
                        None => true,
                        Some((bm, _, _)) => self.order.compare(m, bm) == Ordering::Greater,
                    };
                    if better {
                        best = Some((m, c, pos));
                    }
                }
            }
            match best {
                None => return Ok(cur),
                Some((m, c, pos)) => {
                    let m = m.clone();
                    cur = self.apply(&cur, &m, c, pos);
                }
            }
        }
        Err(Error::StepBudgetExceeded(max_steps))
    }

    /// Breadth-first exploration of all rewriting choices from `f`.
    pub fn rewriting_graph(&self, f: &NcPoly, max_vertices: usize) -> Result<RewritingGraph> {
        let mut vertices = vec![f.clone()];
        let mut seen: HashMap<NcPoly, usize> = HashMap::new();
        seen.insert(f.clone(), 0);
        let mut edges = Vec::new();
        let mut terminal = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let next = self.successors(&vertices[v]);
            if next.is_empty() {
                terminal.push(v);
            }
            for g in next {
                let w = match seen.get(&g) {
                    Some(&w) => w,
                    None => {
                        if vertices.len() >= max_vertices {
                            return Err(Error::StepBudgetExceeded(max_vertices));
                        }
                        let w = vertices.len();
                        seen.insert(g.clone(), w);
                        vertices.push(g);
                        queue.push_back(w);
                        w
                    }
                };
                if !edges.contains(&(v, w)) {
                    edges.push((v, w));
                }
            }
        }
        terminal.sort_unstable();
        Ok(RewritingGraph {
            vertices,
            edges,
            terminal,
        })
    }

    /// Normal form by the deterministic strategy, plus the full graph.
    pub fn rewrite(&self, f: &NcPoly, max_steps: usize) -> Result<(NcPoly, RewritingGraph)> {
        let nf = self.normal_form(f, max_steps)?;
        let graph = self.rewriting_graph(f, max_steps.max(1))?;
        Ok((nf, graph))
    }

    /// Explore every critical monomial. Stops at the first monomial with more
    /// than one terminal vertex.
    pub fn is_confluent(&self) -> ConfluenceResult {
        self.check_confluence(DEFAULT_MAX_VERTICES)
    }

    pub fn check_confluence(&self, max_vertices: usize) -> ConfluenceResult {
        let d = self.num_generators();
        let mut graphs = Vec::new();
        for m in self.critical_monomials() {
            let start = NcPoly::monomial(self.field, d, m.clone(), 1);
            let graph = match self.rewriting_graph(&start, max_vertices) {
                Ok(g) => g,
                Err(_) => {
                    return ConfluenceResult::NotConfluent(Counterexample {
                        monomial: m,
                        normal_forms: Vec::new(),
                        exhausted: true,
                    })
                }
            };
            if graph.terminal.len() != 1 {
                return ConfluenceResult::NotConfluent(Counterexample {
                    monomial: m,
                    normal_forms: graph.terminal_polys().into_iter().cloned().collect(),
                    exhausted: false,
                });
            }
            graphs.push(CriticalGraph { monomial: m, graph });
        }
        ConfluenceResult::Confluent(PbwCertificate::new(self.clone(), graphs))
    }
}

/// Rewriting graph: vertices are the polynomials reached, edges single rule
/// applications, terminal vertices admit no further rewriting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritingGraph {
    pub vertices: Vec<NcPoly>,
    pub edges: Vec<(usize, usize)>,
    pub terminal: Vec<usize>,
}

impl RewritingGraph {
    pub fn terminal_polys(&self) -> Vec<&NcPoly> {
        self.terminal.iter().map(|&v| &self.vertices[v]).collect()
    }
}

/// A critical monomial whose rewriting does not close up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub monomial: MultiIndex,
    pub normal_forms: Vec<NcPoly>,
    /// exploration hit the vertex cap instead of finding two normal forms
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
pub enum ConfluenceResult {
    Confluent(PbwCertificate),
    NotConfluent(Counterexample),
}

impl ConfluenceResult {
    pub fn is_confluent(&self) -> bool {
        matches!(self, ConfluenceResult::Confluent(_))
    }

    pub fn certificate(self) -> Option<PbwCertificate> {
        match self {
            ConfluenceResult::Confluent(c) => Some(c),
            ConfluenceResult::NotConfluent(_) => None,
        }
    }
}

/// Number of words of length `n` avoiding every lead as a factor.
pub fn normal_words(r: &RewritingSystem, n: usize) -> usize {
    let d = r.num_generators();
    if n == 0 {
        return 1;
    }
    // count by last letter
    let mut counts = vec![1usize; d];
    for _ in 1..n {
        let mut next = vec![0usize; d];
        for (a, &ca) in counts.iter().enumerate() {
            for (b, nb) in next.iter_mut().enumerate() {
                if !r.is_lead(a, b) {
                    *nb += ca;
                }
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{graded_dim, QuadraticAlgebra};

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn labels(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("X{}", i)).collect()
    }

    fn poly(s: &str, p: u64, d: usize) -> NcPoly {
        NcPoly::parse(s, f(p), &labels(d)).unwrap()
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v)
    }

    fn system(p: u64, d: usize, rels: &[&str]) -> RewritingSystem {
        let polys: Vec<NcPoly> = rels.iter().map(|r| poly(r, p, d)).collect();
        let a = QuadraticAlgebra::from_polys(f(p), labels(d), &polys).unwrap();
        normalize_basis(a.relators(), &DeglexOrder::identity(d)).unwrap()
    }

    #[test]
    fn spanning_both_products() {
        let r = system(3, 2, &["X1*X2 + X2*X1", "X1*X2 - X2*X1"]);
        let leads: Vec<&MultiIndex> = r.rules().iter().map(|(m, _)| m).collect();
        assert_eq!(leads, vec![&mi(&[1, 0]), &mi(&[0, 1])]);
        assert!(r.rules().iter().all(|(_, t)| t.is_zero()));
    }

    #[test]
    fn empty_relators_give_no_rules() {
        let r = system(2, 3, &[]);
        assert!(r.rules().is_empty());
        assert!(r.critical_monomials().is_empty());
    }

    #[test]
    fn exterior_rules_over_f2() {
        let a = QuadraticAlgebra::exterior(f(2), 2);
        let r = normalize_basis(a.relators(), &DeglexOrder::identity(2)).unwrap();
        let got: Vec<(MultiIndex, String)> = r
            .rules()
            .iter()
            .map(|(m, t)| (m.clone(), t.render(&labels(2))))
            .collect();
        assert_eq!(
            got,
            vec![
                (mi(&[1, 1]), "0".to_string()),
                (mi(&[1, 0]), "X1*X2".to_string()),
                (mi(&[0, 0]), "0".to_string()),
            ]
        );
        assert_eq!(
            r.critical_monomials(),
            vec![mi(&[0, 0, 0]), mi(&[1, 0, 0]), mi(&[1, 1, 0]), mi(&[1, 1, 1])]
        );
    }

    #[test]
    fn one_relator_has_no_critical_monomials() {
        let r = system(3, 2, &["X1*X2 - X2*X1"]);
        assert_eq!(r.rules().len(), 1);
        assert!(r.critical_monomials().is_empty());
    }

    #[test]
    fn rewrite_examples() {
        let r = system(3, 2, &["X1*X2 - X2*X1"]);
        let fx = poly("X1*X1*X2", 3, 2);
        let (nf, g) = r.rewrite(&fx, 100).unwrap();
        assert_eq!(nf, fx);
        assert_eq!(g.vertices.len(), 1);
        let (nf, _) = r.rewrite(&poly("X2*X1", 3, 2), 100).unwrap();
        assert_eq!(nf, poly("X1*X2", 3, 2));

        for p in [2, 3] {
            let e = QuadraticAlgebra::exterior(f(p), 2);
            let r = normalize_basis(e.relators(), &DeglexOrder::identity(2)).unwrap();
            let (nf, g) = r.rewrite(&poly("X2*X2*X1", p, 2), 100).unwrap();
            assert!(nf.is_zero());
            assert_eq!(g.terminal.len(), 1);
            assert!(g.terminal_polys()[0].is_zero());
            // both first steps are explored
            assert_eq!(r.successors(&poly("X2*X2*X1", p, 2)).len(), 2);
        }
    }

    #[test]
    fn classics_are_confluent() {
        for p in [2, 3, 5] {
            for d in 1..=4 {
                for a in [QuadraticAlgebra::exterior(f(p), d), QuadraticAlgebra::symmetric(f(p), d)] {
                    let r = normalize_basis(a.relators(), &DeglexOrder::identity(d)).unwrap();
                    assert!(r.is_confluent().is_confluent(), "{:?}", a);
                }
            }
        }
    }

    #[test]
    fn overlap_failure_is_reported() {
        // X2X2 -> X1X1 and X2X1 -> 0 over F_3:
        // (X2X2)X1 -> X1X1X1 while X2(X2X1) -> 0
        let r = system(3, 2, &["X2*X2 - X1*X1", "X2*X1"]);
        match r.is_confluent() {
            ConfluenceResult::NotConfluent(c) => {
                assert_eq!(c.monomial, mi(&[1, 1, 0]));
                assert_eq!(c.normal_forms.len(), 2);
            }
            ConfluenceResult::Confluent(_) => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn normal_word_count_matches_dimension_for_confluent_systems() {
        let e = QuadraticAlgebra::exterior(f(3), 3);
        let r = normalize_basis(e.relators(), &DeglexOrder::identity(3)).unwrap();
        for n in 0..=4 {
            assert_eq!(normal_words(&r, n), graded_dim(&e, n).unwrap());
        }
    }
}
