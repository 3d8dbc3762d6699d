use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::Subspace;
use crate::tensor::{MultiIndex, NcPoly};

/// The distinguished element `t` of a cohomology-type algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TElement {
    /// `t = 0`; the only admissible choice for odd p.
    Zero,
    /// `t` is the given generator (p = 2 only).
    Generator(usize),
}

/// The four binary constructions on quadratic algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineMode {
    DirectSum,
    FreeProduct,
    SymTensor,
    SkewTensor,
}

impl CombineMode {
    pub const ALL: [CombineMode; 4] = [
        CombineMode::DirectSum,
        CombineMode::FreeProduct,
        CombineMode::SymTensor,
        CombineMode::SkewTensor,
    ];

    /// The construction exchanged with this one by quadratic duality.
    pub fn dual(self) -> CombineMode {
        match self {
            CombineMode::DirectSum => CombineMode::FreeProduct,
            CombineMode::FreeProduct => CombineMode::DirectSum,
            CombineMode::SymTensor => CombineMode::SkewTensor,
            CombineMode::SkewTensor => CombineMode::SymTensor,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CombineMode::DirectSum => "direct_sum",
            CombineMode::FreeProduct => "free_product",
            CombineMode::SymTensor => "sym_tensor",
            CombineMode::SkewTensor => "skew_tensor",
        }
    }

    pub fn parse(s: &str) -> Option<CombineMode> {
        CombineMode::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// A quadratic algebra `T(V)/(Omega)` with `Omega` inside the `d^2`
/// monomial coordinates, ordered row-major (`x_i x_j` sits at `i*d + j`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticAlgebra {
    field: Fp,
    labels: Vec<String>,
    relators: Subspace,
    t: Option<TElement>,
}

fn default_labels(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{}", i)).collect()
}

impl QuadraticAlgebra {
    pub fn new(field: Fp, labels: Vec<String>, relators: Subspace) -> Result<Self> {
        let d = labels.len();
        if relators.field() != field {
            return Err(Error::FieldMismatch(field.p(), relators.field().p()));
        }
        if relators.ambient_dim() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "relator space lives in dimension {}, expected {}",
                relators.ambient_dim(),
                d * d
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || !seen.insert(l.as_str()) {
                return Err(Error::InvalidInput(format!("bad or duplicate label '{}'", l)));
            }
        }
        Ok(QuadraticAlgebra {
            field,
            labels,
            relators,
            t: None,
        })
    }

    /// Build from degree-2 homogeneous polynomials.
    pub fn from_polys(field: Fp, labels: Vec<String>, polys: &[NcPoly]) -> Result<Self> {
        let d = labels.len();
        let mut rows = Vec::with_capacity(polys.len());
        for f in polys {
            if f.num_generators() != d {
                return Err(Error::DimensionMismatch(format!(
                    "relator in {} generators, algebra has {}",
                    f.num_generators(),
                    d
                )));
            }
            if f.field() != field {
                return Err(Error::FieldMismatch(field.p(), f.field().p()));
            }
            if !f.is_zero() && f.homogeneous_degree() != Some(2) {
                return Err(Error::InvalidInput(format!(
                    "relator {:?} is not homogeneous quadratic",
                    f
                )));
            }
            rows.push(poly_to_coords(f, d));
        }
        Self::new(field, labels, Subspace::span(field, d * d, &rows))
    }

    fn from_rows(field: Fp, d: usize, rows: &[Vec<u32>]) -> Self {
        Self::new(field, default_labels(d), Subspace::span(field, d * d, rows))
            .expect("well-formed")
    }

    /// Free algebra, no relations.
    pub fn tensor(field: Fp, d: usize) -> Self {
        Self::from_rows(field, d, &[])
    }

    /// All products vanish.
    pub fn trivial(field: Fp, d: usize) -> Self {
        QuadraticAlgebra::new(field, default_labels(d), Subspace::full(field, d * d))
            .expect("well-formed")
    }

    /// Polynomial algebra: `x_i x_j - x_j x_i`.
    pub fn symmetric(field: Fp, d: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let mut v = vec![0; d * d];
                v[i * d + j] = 1;
                v[j * d + i] = field.neg(1);
                rows.push(v);
            }
        }
        Self::from_rows(field, d, &rows)
    }

    /// Exterior algebra: `x_i x_i` and `x_i x_j + x_j x_i`.
    pub fn exterior(field: Fp, d: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..d {
            let mut v = vec![0; d * d];
            v[i * d + i] = 1;
            rows.push(v);
            for j in i + 1..d {
                let mut v = vec![0; d * d];
                v[i * d + j] = 1;
                v[j * d + i] = 1;
                rows.push(v);
            }
        }
        Self::from_rows(field, d, &rows)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relators(&self) -> &Subspace {
        &self.relators
    }

    pub fn distinguished_t(&self) -> Option<TElement> {
        self.t
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} generators",
                labels.len(),
                self.labels.len()
            )));
        }
        let t = self.t;
        self = Self::new(self.field, labels, self.relators)?;
        self.t = t;
        Ok(self)
    }

    /// Attach a distinguished element. A generator may only be `t` for p = 2.
    pub fn with_t(mut self, t: Option<TElement>) -> Result<Self> {
        if let Some(TElement::Generator(g)) = t {
            if g >= self.num_generators() {
                return Err(Error::InvalidDistinguished(format!(
                    "generator index {} out of range",
                    g
                )));
            }
            if self.p() != 2 {
                return Err(Error::InvalidDistinguished(
                    "for odd p, 2t = 0 forces t = 0; use the zero slot".into(),
                ));
            }
        }
        self.t = t;
        Ok(self)
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// Coordinate of the monomial `x_i x_j`.
    pub fn coord(&self, i: usize, j: usize) -> usize {
        i * self.num_generators() + j
    }

    /// The canonical relator basis as polynomials.
    pub fn relator_polys(&self) -> Vec<NcPoly> {
        let d = self.num_generators();
        self.relators
            .basis()
            .row_iter()
            .map(|r| coords_to_poly(self.field, d, r))
            .collect()
    }

    /// Same field, generator count and relator subspace; labels and `t` ignored.
    pub fn same_presentation(&self, other: &QuadraticAlgebra) -> bool {
        self.field == other.field
            && self.num_generators() == other.num_generators()
            && self.relators == other.relators
    }

    /// `A!`: generators get a `*` suffix toggled, relators become the annihilator.
    pub fn quadratic_dual(&self) -> QuadraticAlgebra {
        let labels = self
            .labels
            .iter()
            .map(|l| match l.strip_suffix('*') {
                Some(base) if !base.is_empty() => base.to_string(),
                _ => format!("{}*", l),
            })
            .collect();
        QuadraticAlgebra::new(self.field, labels, self.relators.annihilator())
            .expect("dual labels stay distinct")
    }

    pub fn combine(&self, other: &QuadraticAlgebra, mode: CombineMode) -> Result<QuadraticAlgebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.p(), other.p()));
        }
        let f = self.field;
        let da = self.num_generators();
        let db = other.num_generators();
        let d = da + db;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for r in self.relators.basis().row_iter() {
            let mut v = vec![0; d * d];
            for i in 0..da {
                for j in 0..da {
                    v[i * d + j] = r[i * da + j];
                }
            }
            rows.push(v);
        }
        for r in other.relators.basis().row_iter() {
            let mut v = vec![0; d * d];
            for i in 0..db {
                for j in 0..db {
                    v[(da + i) * d + da + j] = r[i * db + j];
                }
            }
            rows.push(v);
        }
        for a in 0..da {
            for b in da..d {
                match mode {
                    CombineMode::FreeProduct => {}
                    CombineMode::DirectSum => {
                        let mut v = vec![0; d * d];
                        v[a * d + b] = 1;
                        rows.push(v);
                        let mut v = vec![0; d * d];
                        v[b * d + a] = 1;
                        rows.push(v);
                    }
                    CombineMode::SymTensor | CombineMode::SkewTensor => {
                        let mut v = vec![0; d * d];
                        v[a * d + b] = 1;
                        v[b * d + a] = if mode == CombineMode::SymTensor {
                            f.neg(1)
                        } else {
                            1
                        };
                        rows.push(v);
                    }
                }
            }
        }
        let labels = merge_labels(&self.labels, &other.labels);
        QuadraticAlgebra::new(f, labels, Subspace::span(f, d * d, &rows))
    }

    /// `A[J;t]` with `|J| = m`: new generators appended after the old ones,
    /// relators `x_i x_j + x_j x_i`, `x_j t + t x_j`, `x_j a_k + a_k x_j`,
    /// `x_j^2 - t x_j`.
    pub fn twisted_extension(&self, m: usize) -> Result<QuadraticAlgebra> {
        let t = self.t.ok_or(Error::NoDistinguishedElement)?;
        if m == 0 {
            return Ok(self.clone());
        }
        let f = self.field;
        let da = self.num_generators();
        let d = da + m;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for r in self.relators.basis().row_iter() {
            let mut v = vec![0; d * d];
            for i in 0..da {
                for j in 0..da {
                    v[i * d + j] = r[i * da + j];
                }
            }
            rows.push(v);
        }
        for j in da..d {
            for i in da..j {
                let mut v = vec![0; d * d];
                v[i * d + j] = 1;
                v[j * d + i] = 1;
                rows.push(v);
            }
            // t and the a_k together are all old generators
            for k in 0..da {
                let mut v = vec![0; d * d];
                v[j * d + k] = 1;
                v[k * d + j] = f.add(v[k * d + j], 1);
                rows.push(v);
            }
            let mut v = vec![0; d * d];
            v[j * d + j] = 1;
            if let TElement::Generator(g) = t {
                v[g * d + j] = f.neg(1);
            }
            rows.push(v);
        }
        let new_labels: Vec<String> = (1..=m).map(|j| format!("x{}", j)).collect();
        let labels = append_labels(&self.labels, &new_labels);
        let out = QuadraticAlgebra::new(f, labels, Subspace::span(f, d * d, &rows))?;
        out.with_t(Some(t))
    }

    /// Reorder generators: new generator `k` is old generator `perm[k]`.
    pub fn permute_generators(&self, perm: &[usize]) -> Result<QuadraticAlgebra> {
        let d = self.num_generators();
        let mut inverse = vec![usize::MAX; d];
        if perm.len() != d {
            return Err(Error::InvalidOrder(format!("{:?} has wrong length", perm)));
        }
        for (k, &g) in perm.iter().enumerate() {
            if g >= d || inverse[g] != usize::MAX {
                return Err(Error::InvalidOrder(format!("{:?} is not a permutation", perm)));
            }
            inverse[g] = k;
        }
        let rows: Vec<Vec<u32>> = self
            .relators
            .basis()
            .row_iter()
            .map(|r| {
                let mut v = vec![0; d * d];
                for i in 0..d {
                    for j in 0..d {
                        v[inverse[i] * d + inverse[j]] = r[i * d + j];
                    }
                }
                v
            })
            .collect();
        let labels = perm.iter().map(|&g| self.labels[g].clone()).collect();
        let t = self.t.map(|t| match t {
            TElement::Generator(g) => TElement::Generator(inverse[g]),
            TElement::Zero => TElement::Zero,
        });
        QuadraticAlgebra::new(self.field, labels, Subspace::span(self.field, d * d, &rows))?
            .with_t(t)
    }

    /// Apply the linear substitution `x_k -> sum_j m[k][j] y_j` to every relator.
    pub fn change_basis(&self, m: &[Vec<u32>]) -> Result<QuadraticAlgebra> {
        let d = self.num_generators();
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("change of basis must be d x d".into()));
        }
        let check = crate::linalg::FpMatrix::from_rows(self.field, d, m)?;
        if check.rank() != d {
            return Err(Error::InvalidInput("change of basis is singular".into()));
        }
        let f = self.field;
        let rows: Vec<Vec<u32>> = self
            .relators
            .basis()
            .row_iter()
            .map(|r| {
                let mut v = vec![0u32; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let c = r[i * d + j];
                        if c == 0 {
                            continue;
                        }
                        for a in 0..d {
                            let ca = f.mul(c, m[i][a] % f.p());
                            if ca == 0 {
                                continue;
                            }
                            for b in 0..d {
                                let cb = f.mul(ca, m[j][b] % f.p());
                                v[a * d + b] = f.add(v[a * d + b], cb);
                            }
                        }
                    }
                }
                v
            })
            .collect();
        Ok(QuadraticAlgebra {
            field: f,
            labels: self.labels.clone(),
            relators: Subspace::span(f, d * d, &rows),
            t: self.t,
        })
    }

    /// `u v + v u` lies in Omega for all generators, plus `u u` when p is odd.
    pub fn is_graded_commutative_deg2(&self) -> bool {
        let d = self.num_generators();
        let f = self.field;
        for u in 0..d {
            if f.p() != 2 {
                let mut v = vec![0; d * d];
                v[u * d + u] = 1;
                if !self.relators.contains(&v) {
                    return false;
                }
            }
            for w in u + 1..d {
                let mut v = vec![0; d * d];
                v[u * d + w] = 1;
                v[w * d + u] = 1;
                if !self.relators.contains(&v) {
                    return false;
                }
            }
        }
        true
    }
}

fn merge_labels(a: &[String], b: &[String]) -> Vec<String> {
    let sa: HashSet<&String> = a.iter().collect();
    let sb: HashSet<&String> = b.iter().collect();
    let mut out: Vec<String> = a
        .iter()
        .map(|l| if sb.contains(l) { format!("{}.L", l) } else { l.clone() })
        .collect();
    out.extend(
        b.iter()
            .map(|l| if sa.contains(l) { format!("{}.R", l) } else { l.clone() }),
    );
    out
}

fn append_labels(old: &[String], new: &[String]) -> Vec<String> {
    let taken: HashSet<&String> = old.iter().collect();
    let mut out = old.to_vec();
    for l in new {
        let mut cand = l.clone();
        while taken.contains(&cand) || out.contains(&cand) {
            cand.push('\'');
        }
        out.push(cand);
    }
    out
}

pub(crate) fn poly_to_coords(f: &NcPoly, d: usize) -> Vec<u32> {
    let mut v = vec![0u32; d * d];
    for (m, c) in f.terms() {
        v[m.get(0) * d + m.get(1)] = c;
    }
    v
}

pub(crate) fn coords_to_poly(field: Fp, d: usize, v: &[u32]) -> NcPoly {
    NcPoly::from_terms(
        field,
        d,
        v.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (MultiIndex::pair(k / d, k % d), c)),
    )
}

impl fmt::Debug for QuadraticAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}; {:?} | ", self.field, self.labels)?;
        let polys: Vec<String> = self
            .relator_polys()
            .iter()
            .map(|r| r.render(&self.labels))
            .collect();
        write!(f, "{}", polys.join(", "))?;
        if let Some(t) = self.t {
            write!(f, "; t = {:?}", t)?;
        }
        write!(f, ")")
    }
}
