use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fp, FpScalar};
use crate::quad::{GradedQuotient, QuadraticAlgebra, DEFAULT_BUDGET};
use crate::tensor::{MultiIndex, NcPoly};

use super::magnus::{initial_form, magnus_expand, InitialForm};
use super::word::GroupWord;

/// `<x_1..x_d | r_1..r_m>` as a pro-p presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    field: Fp,
    labels: Vec<String>,
    relators: Vec<GroupWord>,
}

/// On-disk form: relators are strings in the word grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub p: u32,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl GroupPresentation {
    pub fn new(field: Fp, labels: Vec<String>, relators: Vec<GroupWord>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("a presentation needs at least one generator".into()));
        }
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= labels.len() {
                    return Err(Error::InvalidInput(format!(
                        "relator uses generator {} of {}",
                        g + 1,
                        labels.len()
                    )));
                }
            }
        }
        Ok(GroupPresentation {
            field,
            labels,
            relators,
        })
    }

    /// Default labels `x1..xd`.
    pub fn with_default_labels(field: Fp, d: usize, relators: Vec<GroupWord>) -> Result<Self> {
        Self::new(field, (1..=d).map(|i| format!("x{}", i)).collect(), relators)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    /// Labels of the dual variables `X_i`, written with a `*` suffix.
    pub fn dual_labels(&self) -> Vec<String> {
        self.labels.iter().map(|l| format!("{}*", l)).collect()
    }

    /// Every relator must lie in the Frattini subgroup: zero degree-1 part.
    pub fn check_frattini(&self) -> Result<()> {
        for r in &self.relators {
            let s = magnus_expand(r, self.field, self.num_generators(), 1)?;
            if s.poly().max_degree() == Some(1) {
                return Err(Error::NotInFrattini);
            }
        }
        Ok(())
    }

    pub fn initial_forms(&self, n: usize) -> Result<Vec<InitialForm>> {
        self.relators
            .iter()
            .map(|r| initial_form(r, self.field, self.num_generators(), n))
            .collect()
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            p: self.field.p(),
            generators: self.labels.clone(),
            relators: self.relators.iter().map(|r| r.render(&self.labels)).collect(),
        }
    }

    pub fn from_file(file: &PresentationFile) -> Result<Self> {
        let field = Fp::new(file.p as u64)?;
        let relators = file
            .relators
            .iter()
            .map(|r| GroupWord::parse(r, &file.generators))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, file.generators.clone(), relators)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

/// All initial forms have degree 2 (vacuous without relators).
pub fn is_quadratic_presentation(g: &GroupPresentation, n: usize) -> Result<bool> {
    Ok(g.initial_forms(n)?.iter().all(|f| f.degree == 2))
}

/// `F_p<X>/(initial forms)`.
#[derive(Clone, Debug)]
pub struct GradedCandidate {
    pub field: Fp,
    pub labels: Vec<String>,
    pub forms: Vec<InitialForm>,
    /// Present when every initial form is quadratic.
    pub algebra: Option<QuadraticAlgebra>,
}

impl GradedCandidate {
    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn hilbert_prefix(&self, n_max: usize) -> Result<Vec<usize>> {
        let polys: Vec<NcPoly> = self.forms.iter().map(|f| f.poly.clone()).collect();
        GradedQuotient::new(self.field, self.num_generators(), &polys, DEFAULT_BUDGET)?
            .prefix(n_max)
    }

    /// Rank of the span of the quadratic initial forms.
    pub fn quadratic_rank(&self) -> usize {
        let d = self.num_generators();
        let rows: Vec<Vec<u32>> = self
            .forms
            .iter()
            .filter(|f| f.degree == 2)
            .map(|f| {
                let mut v = vec![0u32; d * d];
                for (m, c) in f.poly.terms() {
                    v[m.get(0) * d + m.get(1)] = c;
                }
                v
            })
            .collect();
        crate::linalg::Subspace::span(self.field, d * d, &rows).dim()
    }
}

pub fn graded_algebra_candidate(g: &GroupPresentation, n: usize) -> Result<GradedCandidate> {
    let forms = g.initial_forms(n)?;
    let labels = g.dual_labels();
    let algebra = if forms.iter().all(|f| f.degree == 2) {
        let polys: Vec<NcPoly> = forms.iter().map(|f| f.poly.clone()).collect();
        Some(QuadraticAlgebra::from_polys(g.field(), labels.clone(), &polys)?)
    } else {
        None
    };
    Ok(GradedCandidate {
        field: g.field(),
        labels,
        forms,
        algebra,
    })
}

/// Exponents of `r = prod x_i^{2 a_i} prod [x_i,x_j]^{b_ij} r'` with
/// `r'` in the third Zassenhaus term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S3Decomposition {
    /// `a_i`, only for p = 2
    pub a: Option<Vec<u32>>,
    /// `b[i][j]` for `i < j`; zero elsewhere
    pub b: Vec<Vec<u32>>,
}

pub fn relator_mod_s3(w: &GroupWord, field: Fp, d: usize) -> Result<S3Decomposition> {
    let s = magnus_expand(w, field, d, 2)?;
    let poly = s.poly();
    if !poly.homogeneous_part(1).is_zero() {
        return Err(Error::NotInFrattini);
    }
    let a = (field.p() == 2).then(|| {
        (0..d)
            .map(|i| poly.coeff(&MultiIndex::pair(i, i)))
            .collect()
    });
    let mut b = vec![vec![0u32; d]; d];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate().skip(i + 1) {
            *cell = poly.coeff(&MultiIndex::pair(i, j));
        }
    }
    Ok(S3Decomposition { a, b })
}

/// Value of the relator on `chi_k (x) chi_l`: `-b_kl` for `k < l`, `b_lk`
/// for `k > l`, and `-(p choose 2) a_k` on the diagonal.
pub fn pairing_value(w: &GroupWord, k: usize, l: usize, field: Fp, d: usize) -> Result<FpScalar> {
    if k >= d || l >= d {
        return Err(Error::InvalidInput(format!("index ({}, {}) out of range", k, l)));
    }
    let s3 = relator_mod_s3(w, field, d)?;
    let v = if k < l {
        field.neg(s3.b[k][l])
    } else if k > l {
        s3.b[l][k]
    } else {
        match &s3.a {
            // p = 2: -(2 choose 2) a_k = a_k
            Some(a) => field.neg(a[k]),
            None => 0,
        }
    };
    Ok(FpScalar {
        value: v,
        p: field.p(),
    })
}

/// Coefficients of `1/(1 - d z + sum z^{s_i})` through degree `n`.
pub fn expected_strongly_free_prefix(d: usize, degrees: &[usize], n: usize) -> Vec<i64> {
    let mut a = vec![0i64; n + 1];
    a[0] = 1;
    for k in 1..=n {
        let mut v = d as i64 * a[k - 1];
        for &s in degrees {
            if s <= k {
                v -= a[k - s];
            }
        }
        a[k] = v;
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StronglyFreeReport {
    pub prefix: Vec<usize>,
    pub expected: Vec<i64>,
    pub passed: bool,
}

pub fn strongly_free_report(
    forms: &[InitialForm],
    field: Fp,
    d: usize,
    n: usize,
) -> Result<StronglyFreeReport> {
    let polys: Vec<NcPoly> = forms.iter().map(|f| f.poly.clone()).collect();
    let degrees: Vec<usize> = forms.iter().map(|f| f.degree).collect();
    let prefix = GradedQuotient::new(field, d, &polys, DEFAULT_BUDGET)?.prefix(n)?;
    let expected = expected_strongly_free_prefix(d, &degrees, n);
    let passed = forms.is_empty()
        || prefix
            .iter()
            .zip(&expected)
            .all(|(&a, &b)| a as i64 == b);
    Ok(StronglyFreeReport {
        prefix,
        expected,
        passed,
    })
}

/// Hilbert prefix of the quotient matches `1/(1 - d z + sum z^{s_i})`
/// through degree `n`; the empty sequence passes.
pub fn strongly_free_check(forms: &[InitialForm], d: usize, n: usize) -> Result<bool> {
    let Some(first) = forms.first() else {
        return Ok(true);
    };
    Ok(strongly_free_report(forms, first.poly.field(), d, n)?.passed)
}
