use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::pbw::{
    normalize_basis, pbw_search_with, CertificateExport, ConfluenceResult, SearchOptions,
};
use crate::quad::{cobar_ext_dims_within, hilbert_prefix, AlgebraFile, QuadraticAlgebra, TElement};
use crate::tensor::{DeglexOrder, MultiIndex};

use super::build::{
    build_cohomology_with_hint, build_group_side_with_hint, validate_demushkin, BuiltAlgebra,
};
use super::recipe::{DemushkinCase, EtRecipe};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// cohomology of an elementary type group is PBW
    A,
    /// its quadratic dual is the graded group algebra
    B,
    /// Demushkin groups: both sides dual and PBW
    C,
    /// Pythagorean fields: cohomology is PBW
    D,
}

impl Theorem {
    pub fn parse(s: &str) -> Option<Theorem> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Some(Theorem::A),
            "B" => Some(Theorem::B),
            "C" => Some(Theorem::C),
            "D" => Some(Theorem::D),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::A => "A",
            Theorem::B => "B",
            Theorem::C => "C",
            Theorem::D => "D",
        }
    }

    fn needs_group_side(self) -> bool {
        matches!(self, Theorem::B | Theorem::C)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// degree bound for Hilbert series and the cobar range `i + j`
    pub degree: usize,
    pub max_generators: usize,
    pub max_depth: usize,
    pub search_budget: usize,
    pub seed: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            degree: 5,
            max_generators: 8,
            max_depth: 4,
            search_budget: 5040,
            seed: None,
        }
    }
}

/// Result of the subspace comparison `dual(H) == group side`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityCheck {
    pub equal: bool,
    /// canonical (reduced echelon) relator basis of the dual of H
    pub dual_relators: Vec<Vec<u32>>,
    /// canonical relator basis of the group side
    pub group_relators: Vec<Vec<u32>>,
    /// a basis vector of one side missing from the other
    pub mismatch: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonConfluence {
    pub order: Vec<String>,
    pub monomial: String,
    pub normal_forms: Vec<String>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbwCheck {
    pub certified: bool,
    pub certificate: Option<CertificateExport>,
    pub counterexample: Option<NonConfluence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertCheck {
    pub cohomology: Vec<usize>,
    pub dual: Vec<usize>,
    pub reciprocal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobarCheck {
    pub total: usize,
    /// `(i, j, dim)` for every computed nonzero entry off the diagonal
    pub off_diagonal: Vec<(usize, usize, usize)>,
    pub diagonal: Vec<usize>,
    pub expected_diagonal: Vec<usize>,
    pub passed: bool,
}

/// Critical monomials of one twisted extension step sorted into the base
/// ones and the nine families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub node: String,
    pub order: Vec<String>,
    pub base_critical: usize,
    /// counts for families 1..=9
    pub family_counts: Vec<usize>,
    pub unclassified: Vec<String>,
    pub missing: Vec<String>,
    pub confluent: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub recipe: String,
    pub theorem: Theorem,
    pub p: u32,
    pub degree: usize,
    pub verdict: Verdict,
    pub cohomology: AlgebraFile,
    pub group_side: Option<AlgebraFile>,
    pub duality: Option<DualityCheck>,
    pub cohomology_pbw: PbwCheck,
    pub group_pbw: Option<PbwCheck>,
    pub hilbert: HilbertCheck,
    pub cobar: CobarCheck,
    pub twisted_steps: Vec<FamilyReport>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self, with_certificates: bool) -> String {
        let mut s = String::new();
        let v = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{} theorem {} for {} over F_{}", v, self.theorem.name(), self.recipe, self.p);
        let _ = writeln!(s, "generators: {}", self.cohomology.generators.join(" "));
        if let Some(d) = &self.duality {
            let _ = writeln!(
                s,
                "duality: {} ({} relators on the group side)",
                if d.equal { "dual(H) equals the group side" } else { "MISMATCH" },
                d.group_relators.len()
            );
        }
        let pbw_line = |s: &mut String, name: &str, c: &PbwCheck| {
            match (&c.certificate, &c.counterexample) {
                (Some(cert), _) => {
                    let _ = writeln!(
                        s,
                        "{} PBW: order {}, {} critical monomials, all confluent",
                        name,
                        cert.order.join(" < "),
                        cert.critical.len()
                    );
                    if with_certificates {
                        for line in cert.to_text().lines() {
                            let _ = writeln!(s, "  {}", line);
                        }
                    }
                }
                (None, Some(ce)) => {
                    let _ = writeln!(
                        s,
                        "{} PBW: not certified; {} has normal forms [{}] under {}",
                        name,
                        ce.monomial,
                        ce.normal_forms.join(", "),
                        ce.order.join(" < ")
                    );
                }
                (None, None) => {
                    let _ = writeln!(s, "{} PBW: no confluent order found", name);
                }
            }
        };
        pbw_line(&mut s, "cohomology", &self.cohomology_pbw);
        if let Some(g) = &self.group_pbw {
            pbw_line(&mut s, "group side", g);
        }
        let _ = writeln!(
            s,
            "hilbert: H {:?}, dual {:?}, reciprocal {}",
            self.hilbert.cohomology,
            self.hilbert.dual,
            if self.hilbert.reciprocal { "ok" } else { "FAILS" }
        );
        let _ = writeln!(
            s,
            "cobar (i+j <= {}): diagonal {:?}, {} nonzero off-diagonal entries",
            self.cobar.total,
            self.cobar.diagonal,
            self.cobar.off_diagonal.len()
        );
        for t in &self.twisted_steps {
            let _ = writeln!(
                s,
                "twisted step {}: {} base + families {:?}, {}",
                t.node,
                t.base_critical,
                t.family_counts,
                if t.passed { "ok" } else { "FAILS" }
            );
        }
        for f in &self.failures {
            let _ = writeln!(s, "failure: {}", f);
        }
        let _ = writeln!(s, "elapsed: {} ms", self.elapsed.as_millis());
        s
    }
}

fn inadmissible(msg: String) -> Error {
    Error::InadmissibleRecipe(msg)
}

/// Is the recipe inside the regime of the theorem (and the size caps)?
pub fn check_regime(r: &EtRecipe, theorem: Theorem, p: u32, opts: &VerifyOptions) -> Result<()> {
    crate::field::Fp::new(p as u64)?;
    if r.num_generators() > opts.max_generators {
        return Err(inadmissible(format!(
            "{} generators exceed the cap {}",
            r.num_generators(),
            opts.max_generators
        )));
    }
    if r.depth() > opts.max_depth {
        return Err(inadmissible(format!(
            "depth {} exceeds the cap {}",
            r.depth(),
            opts.max_depth
        )));
    }
    fn et_nodes(r: &EtRecipe, p: u32) -> Result<()> {
        match r {
            EtRecipe::Free(0) => Err(inadmissible("free group needs d >= 1".into())),
            EtRecipe::Free(_) => Ok(()),
            EtRecipe::Demushkin { d, case, param } => {
                validate_demushkin(*d, *case, *param, p)?;
                if *case != DemushkinCase::I {
                    return Err(inadmissible(format!(
                        "demushkin case {} has a character outside 1 + pZ_p",
                        case.name()
                    )));
                }
                Ok(())
            }
            EtRecipe::FreeProd(a, b) => et_nodes(a, p).and(et_nodes(b, p)),
            EtRecipe::Semidirect { m, base } => {
                if *m == 0 {
                    return Err(inadmissible("semidirect needs m >= 1".into()));
                }
                et_nodes(base, p)
            }
            other => Err(inadmissible(format!("{} is not an elementary type node", other))),
        }
    }
    fn pfr_nodes(r: &EtRecipe) -> Result<()> {
        match r {
            EtRecipe::Euclid => Ok(()),
            EtRecipe::PfrFreeProd(a, b) => pfr_nodes(a).and(pfr_nodes(b)),
            EtRecipe::PfrSemidirect { m, base } => {
                if *m == 0 {
                    return Err(inadmissible("pfr-semidirect needs m >= 1".into()));
                }
                pfr_nodes(base)
            }
            other => Err(inadmissible(format!("{} is not a pythagorean node", other))),
        }
    }
    match theorem {
        Theorem::A | Theorem::B => et_nodes(r, p),
        Theorem::C => match r {
            EtRecipe::Demushkin { d, case, param } => validate_demushkin(*d, *case, *param, p),
            EtRecipe::Euclid if p == 2 => Ok(()),
            _ => Err(inadmissible(
                "theorem C takes a single demushkin node or euclid (p = 2)".into(),
            )),
        },
        Theorem::D => {
            if p != 2 {
                return Err(inadmissible("theorem D is about p = 2".into()));
            }
            pfr_nodes(r)
        }
    }
}

fn non_confluence(
    a: &QuadraticAlgebra,
    asc: &[usize],
) -> Result<std::result::Result<CertificateExport, NonConfluence>> {
    let order = DeglexOrder::from_ascending(asc)?;
    let system = normalize_basis(a.relators(), &order)?;
    let labels = a.labels();
    Ok(match system.is_confluent() {
        ConfluenceResult::Confluent(cert) => Ok(cert.export(labels)),
        ConfluenceResult::NotConfluent(ce) => Err(NonConfluence {
            order: asc.iter().map(|&g| labels[g].clone()).collect(),
            monomial: ce.monomial.render(labels),
            normal_forms: ce.normal_forms.iter().map(|f| f.render(labels)).collect(),
            exhausted: ce.exhausted,
        }),
    })
}

/// Try the structural order first, then search (unless `strict`).
fn pbw_check(
    built: &BuiltAlgebra,
    opts: &VerifyOptions,
    strict: bool,
    fixed_first: Option<usize>,
) -> Result<PbwCheck> {
    let a = &built.algebra;
    let first = non_confluence(a, &built.order_hint)?;
    let counterexample = match first {
        Ok(cert) => {
            return Ok(PbwCheck {
                certified: true,
                certificate: Some(cert),
                counterexample: None,
            })
        }
        Err(ce) => ce,
    };
    if !strict {
        let found = pbw_search_with(
            a,
            &SearchOptions {
                budget: opts.search_budget,
                fixed_first,
                hints: vec![built.order_hint.clone()],
                seed: opts.seed,
            },
        );
        if let Some(cert) = found {
            return Ok(PbwCheck {
                certified: true,
                certificate: Some(cert.export(a.labels())),
                counterexample: None,
            });
        }
    }
    Ok(PbwCheck {
        certified: false,
        certificate: None,
        counterexample: Some(counterexample),
    })
}

fn duality_check(h: &QuadraticAlgebra, g: &QuadraticAlgebra) -> DualityCheck {
    let dual = h.quadratic_dual();
    let a = dual.relators();
    let b = g.relators();
    let equal = a == b;
    let mismatch = if equal {
        None
    } else {
        let missing = |x: &Subspace, y: &Subspace| {
            x.basis().row_iter().find(|r| !y.contains(r)).map(|r| r.to_vec())
        };
        missing(a, b).or_else(|| missing(b, a))
    };
    DualityCheck {
        equal,
        dual_relators: a.basis().to_rows(),
        group_relators: b.basis().to_rows(),
        mismatch,
    }
}

/// Sort the critical monomials of `base[J;t]`, `|J| = m`, under the order
/// `base_order` followed by the new generators ascending.
pub fn classify_twisted_critical(
    base: &QuadraticAlgebra,
    base_order: &[usize],
    m: usize,
) -> Result<FamilyReport> {
    let t = base.distinguished_t().ok_or(Error::NoDistinguishedElement)?;
    let t = match t {
        TElement::Generator(g) => Some(g),
        TElement::Zero => None,
    };
    let da = base.num_generators();
    let ext = base.twisted_extension(m)?;
    let asc: Vec<usize> = base_order.iter().copied().chain(da..da + m).collect();
    let ext_sys = normalize_basis(ext.relators(), &DeglexOrder::from_ascending(&asc)?)?;
    let base_sys = normalize_basis(base.relators(), &DeglexOrder::from_ascending(base_order)?)?;
    let base_crit: BTreeSet<MultiIndex> = base_sys.critical_monomials().into_iter().collect();

    let mut expected: BTreeMap<MultiIndex, usize> = BTreeMap::new();
    let mut put = |w: [usize; 3], fam: usize| -> Result<()> {
        if let Some(old) = expected.insert(MultiIndex::new(&w), fam) {
            if old != fam {
                return Err(Error::InternalInconsistency(format!(
                    "{:?} in families {} and {}",
                    w, old, fam
                )));
            }
        }
        Ok(())
    };
    let x = |j: usize| da + j;
    let others: Vec<usize> = (0..da).filter(|&k| Some(k) != t).collect();
    for j in 0..m {
        put([x(j), x(j), x(j)], 1)?;
        for i in 0..j {
            put([x(j), x(j), x(i)], 2)?;
            put([x(j), x(i), x(i)], 3)?;
            for h in 0..i {
                put([x(j), x(i), x(h)], 4)?;
            }
        }
        if let Some(t) = t {
            put([x(j), x(j), t], 5)?;
            for i in 0..j {
                put([x(j), x(i), t], 6)?;
            }
        }
        for &k in &others {
            put([x(j), x(j), k], 7)?;
            for i in 0..j {
                put([x(j), x(i), k], 8)?;
            }
        }
        for (lead, _) in base_sys.rules() {
            put([x(j), lead.get(0), lead.get(1)], 9)?;
        }
    }

    let labels = ext.labels();
    let actual: BTreeSet<MultiIndex> = ext_sys.critical_monomials().into_iter().collect();
    let mut counts = vec![0usize; 9];
    let mut unclassified = Vec::new();
    let mut n_base = 0;
    for w in &actual {
        if base_crit.contains(w) {
            n_base += 1;
        } else if let Some(&fam) = expected.get(w) {
            counts[fam - 1] += 1;
        } else {
            unclassified.push(w.render(labels));
        }
    }
    let missing: Vec<String> = base_crit
        .iter()
        .chain(expected.keys())
        .filter(|w| !actual.contains(*w))
        .map(|w| w.render(labels))
        .collect();
    let confluent = ext_sys.is_confluent().is_confluent();
    Ok(FamilyReport {
        node: String::new(),
        order: asc.iter().map(|&g| labels[g].clone()).collect(),
        base_critical: n_base,
        family_counts: counts,
        passed: confluent && unclassified.is_empty() && missing.is_empty(),
        unclassified,
        missing,
        confluent,
    })
}

fn semidirect_nodes<'a>(r: &'a EtRecipe, out: &mut Vec<&'a EtRecipe>) {
    match r {
        EtRecipe::FreeProd(a, b) | EtRecipe::PfrFreeProd(a, b) => {
            semidirect_nodes(a, out);
            semidirect_nodes(b, out);
        }
        EtRecipe::Semidirect { base, .. } | EtRecipe::PfrSemidirect { base, .. } => {
            out.push(r);
            semidirect_nodes(base, out);
        }
        _ => {}
    }
}

fn twisted_step(node: &EtRecipe, p: u32) -> Result<FamilyReport> {
    let (m, base, zero) = match node {
        EtRecipe::Semidirect { m, base } => (*m, base, true),
        EtRecipe::PfrSemidirect { m, base } => (*m, base, false),
        _ => unreachable!("only semidirect nodes"),
    };
    let b = build_cohomology_with_hint(base, p)?;
    let algebra = if zero {
        b.algebra.with_t(Some(TElement::Zero))?
    } else {
        b.algebra
    };
    let mut rep = classify_twisted_critical(&algebra, &b.order_hint, m)?;
    rep.node = node.to_string();
    Ok(rep)
}

/// Run the checks of the theorem on a recipe. Inputs outside the regime are
/// errors; failed mathematical checks give a FAIL report.
pub fn verify_theorem(
    r: &EtRecipe,
    theorem: Theorem,
    p: u32,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    check_regime(r, theorem, p, opts)?;
    let mut failures = Vec::new();
    let h = build_cohomology_with_hint(r, p)?;

    let group = if theorem.needs_group_side() {
        Some(build_group_side_with_hint(r, p)?)
    } else {
        None
    };
    let duality = group.as_ref().map(|g| duality_check(&h.algebra, &g.algebra));
    if let Some(d) = &duality {
        if !d.equal {
            failures.push("quadratic dual of the cohomology differs from the group side".into());
        }
    }

    // theorem D insists on the t-first order through every extension step
    let (strict, fixed_first) = match (theorem, h.algebra.distinguished_t()) {
        (Theorem::D, Some(TElement::Generator(t))) => {
            (matches!(r, EtRecipe::PfrSemidirect { .. }), Some(t))
        }
        _ => (false, None),
    };
    let cohomology_pbw = pbw_check(&h, opts, strict, fixed_first)?;
    if !cohomology_pbw.certified {
        failures.push("no PBW certificate for the cohomology side".into());
    }
    let group_pbw = match &group {
        Some(g) => {
            let c = pbw_check(g, opts, false, None)?;
            if !c.certified {
                failures.push("no PBW certificate for the group side".into());
            }
            Some(c)
        }
        None => None,
    };

    let n = opts.degree;
    let dual = match &group {
        Some(g) => g.algebra.clone(),
        None => h.algebra.quadratic_dual(),
    };
    let hh = hilbert_prefix(&h.algebra, n)?;
    let hd = hilbert_prefix(&dual, n)?;
    let reciprocal = crate::quad::reciprocal_prefixes(&hh, &hd);
    if !reciprocal {
        failures.push("h_H(z) h_dual(-z) != 1".into());
    }

    let table = cobar_ext_dims_within(&h.algebra, n)?;
    let off_diagonal: Vec<(usize, usize, usize)> = table
        .off_diagonal_nonzero()
        .into_iter()
        .map(|((i, j), v)| (i, j, v))
        .collect();
    let diagonal = table.diagonal();
    let expected_diagonal: Vec<usize> = hd.iter().take(diagonal.len()).copied().collect();
    let cobar_ok = off_diagonal.is_empty() && diagonal == expected_diagonal;
    if !cobar_ok {
        failures.push("Ext is not concentrated on the diagonal with the dual's dimensions".into());
    }

    let mut twisted_steps = Vec::new();
    if theorem != Theorem::C {
        let mut nodes = Vec::new();
        semidirect_nodes(r, &mut nodes);
        for node in nodes {
            let rep = twisted_step(node, p)?;
            if !rep.passed {
                failures.push(format!("twisted extension step {} fails the family check", rep.node));
            }
            twisted_steps.push(rep);
        }
    }

    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        recipe: r.to_string(),
        theorem,
        p,
        degree: n,
        verdict: if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        cohomology: AlgebraFile::from_algebra(&h.algebra),
        group_side: group.as_ref().map(|g| AlgebraFile::from_algebra(&g.algebra)),
        duality,
        cohomology_pbw,
        group_pbw,
        hilbert: HilbertCheck {
            cohomology: hh,
            dual: hd,
            reciprocal,
        },
        cobar: CobarCheck {
            total: n,
            off_diagonal,
            diagonal,
            expected_diagonal,
            passed: cobar_ok,
        },
        twisted_steps,
        failures,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadraticAlgebra;

    fn run(r: &str, th: Theorem, p: u32) -> VerificationReport {
        verify_theorem(&EtRecipe::parse(r).unwrap(), th, p, &VerifyOptions::default()).unwrap()
    }

    #[test]
    fn demushkin_theorem_c() {
        let rep = run("(demushkin 4 i q=3)", Theorem::C, 3);
        assert!(rep.passed(), "{}", rep.to_text(false));
        assert_eq!(rep.hilbert.dual, vec![1, 4, 15, 56, 209, 780]);
        let rep = run("(demushkin 3 ii f=2)", Theorem::C, 2);
        assert!(rep.passed(), "{}", rep.to_text(false));
        let rep = run("euclid", Theorem::C, 2);
        assert!(rep.passed(), "{}", rep.to_text(false));
    }

    #[test]
    fn free_product_theorem_b() {
        let rep = run("(freeprod (free 1) (demushkin 2 i q=3))", Theorem::B, 3);
        assert!(rep.passed(), "{}", rep.to_text(false));
        let rep = run("(semidirect 2 (freeprod (free 1) (demushkin 2 i q=9)))", Theorem::B, 3);
        assert!(rep.passed(), "{}", rep.to_text(false));
        assert_eq!(rep.twisted_steps.len(), 1);
    }

    #[test]
    fn pythagorean_theorem_d() {
        let rep = run("(pfr-semidirect 2 euclid)", Theorem::D, 2);
        assert!(rep.passed(), "{}", rep.to_text(false));
        let step = &rep.twisted_steps[0];
        // x1^3, x2^3 | x2x2x1 | x2x1x1 | - | x1x1t, x2x2t | x2x1t | - | - | -
        assert_eq!(step.family_counts, vec![2, 1, 1, 0, 2, 1, 0, 0, 0]);
        let rep = run("(pfr-semidirect 1 (pfr-freeprod euclid euclid))", Theorem::D, 2);
        assert!(rep.passed(), "{}", rep.to_text(false));
    }

    #[test]
    fn regime_violations_are_errors() {
        let o = VerifyOptions::default();
        let r = EtRecipe::parse("(demushkin 3 ii f=2)").unwrap();
        assert!(matches!(verify_theorem(&r, Theorem::A, 2, &o), Err(Error::InadmissibleRecipe(_))));
        let r = EtRecipe::parse("(free 9)").unwrap();
        assert!(verify_theorem(&r, Theorem::A, 2, &o).is_err());
        let r = EtRecipe::parse("euclid").unwrap();
        assert!(verify_theorem(&r, Theorem::D, 3, &o).is_err());
        let r = EtRecipe::parse("(freeprod (free 1) (free 1))").unwrap();
        assert!(verify_theorem(&r, Theorem::C, 3, &o).is_err());
    }

    #[test]
    fn exterior_base_extension_families() {
        let field = crate::field::Fp::new(3).unwrap();
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        let base = QuadraticAlgebra::exterior(field, 2)
            .with_labels(labels)
            .unwrap()
            .with_t(Some(TElement::Zero))
            .unwrap();
        let rep = classify_twisted_critical(&base, &[0, 1], 2).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.family_counts[8], 2 * base.relators().dim());
    }

    #[test]
    fn json_round_trip_and_stability() {
        let a = run("(demushkin 2 i q=3)", Theorem::C, 3);
        let b = run("(demushkin 2 i q=3)", Theorem::C, 3);
        assert_eq!(a.to_json(), b.to_json());
        let back = VerificationReport::from_json(&a.to_json()).unwrap();
        assert_eq!(back.to_json(), a.to_json());
        assert!(a.to_json().contains("\"schema_version\": 1"));
    }
}
