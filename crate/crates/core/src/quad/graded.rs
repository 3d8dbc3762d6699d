use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::rref_in_place;
use crate::tensor::{MultiIndex, NcPoly};

use super::algebra::QuadraticAlgebra;

/// Default cap on the number of monomial columns materialized for one degree.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Graded components of `F_p<X>/(relations)` for homogeneous relations,
/// built one degree at a time.
///
/// Degree `n` is computed inside `A_{n-1} (x) V`, whose columns are the
/// products `w x_l` of standard words of degree `n-1` with a letter, kept in
/// descending deglex order. Standard words of each degree are the non-pivot
/// columns, i.e. the normal words for the identity ranking.
pub struct GradedQuotient {
    field: Fp,
    d: usize,
    by_degree: HashMap<usize, Vec<NcPoly>>,
    levels: Vec<Level>,
    budget: usize,
}

struct Level {
    /// standard words, descending
    words: Vec<MultiIndex>,
    /// image of column `b*d + (d-1-l)` (word `b` of the previous level times
    /// letter `l`) in the basis `words`
    images: Vec<Vec<(u32, u32)>>,
}

impl GradedQuotient {
    pub fn new(field: Fp, d: usize, relations: &[NcPoly], budget: usize) -> Result<Self> {
        let mut by_degree: HashMap<usize, Vec<NcPoly>> = HashMap::new();
        for r in relations {
            if r.is_zero() {
                continue;
            }
            if r.field() != field {
                return Err(Error::FieldMismatch(field.p(), r.field().p()));
            }
            if r.num_generators() != d {
                return Err(Error::DimensionMismatch(format!(
                    "relation in {} generators, expected {}",
                    r.num_generators(),
                    d
                )));
            }
            let deg = r.homogeneous_degree().ok_or_else(|| {
                Error::InvalidInput(format!("relation {:?} is not homogeneous", r))
            })?;
            if deg == 0 {
                return Err(Error::InvalidInput("relation of degree 0".into()));
            }
            by_degree.entry(deg).or_default().push(r.clone());
        }
        Ok(GradedQuotient {
            field,
            d,
            by_degree,
            levels: vec![Level {
                words: vec![MultiIndex::empty()],
                images: Vec::new(),
            }],
            budget,
        })
    }

    pub fn for_algebra(a: &QuadraticAlgebra, budget: usize) -> Result<Self> {
        Self::new(a.field(), a.num_generators(), &a.relator_polys(), budget)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn num_generators(&self) -> usize {
        self.d
    }

    /// Make sure degrees `0..=n` are available.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.levels.len() <= n {
            self.build_next()?;
        }
        Ok(())
    }

    pub fn dim(&mut self, n: usize) -> Result<usize> {
        self.extend_to(n)?;
        Ok(self.levels[n].words.len())
    }

    /// Standard words of degree `n`, descending.
    pub fn words(&mut self, n: usize) -> Result<&[MultiIndex]> {
        self.extend_to(n)?;
        Ok(&self.levels[n].words)
    }

    /// Dimensions of degrees `0..=n_max`.
    pub fn prefix(&mut self, n_max: usize) -> Result<Vec<usize>> {
        (0..=n_max).map(|n| self.dim(n)).collect()
    }

    /// Coordinates of a monomial in the standard basis of its degree.
    pub fn reduce(&mut self, w: &MultiIndex) -> Result<Vec<(usize, u32)>> {
        self.extend_to(w.degree())?;
        Ok(self.reduce_built(w))
    }

    fn reduce_built(&self, w: &MultiIndex) -> Vec<(usize, u32)> {
        let f = self.field;
        let d = self.d;
        let mut v: Vec<(usize, u32)> = vec![(0, 1)];
        for (k, letter) in w.letters().enumerate() {
            let level = &self.levels[k + 1];
            let mut acc = vec![0u32; level.words.len()];
            for &(b, c) in &v {
                let col = b * d + (d - 1 - letter);
                for &(s, e) in &level.images[col] {
                    acc[s as usize] = f.add(acc[s as usize], f.mul(c, e));
                }
            }
            v = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .collect();
            if v.is_empty() {
                break;
            }
        }
        v
    }

    fn build_next(&mut self) -> Result<()> {
        let n = self.levels.len();
        let d = self.d;
        let f = self.field;
        let prev_dim = self.levels[n - 1].words.len();
        let cols = prev_dim * d;
        if cols > self.budget {
            return Err(Error::BudgetExceeded {
                needed: cols,
                budget: self.budget,
            });
        }
        // rows: u * r for standard u of degree n - deg r
        let mut data: Vec<u32> = Vec::new();
        let mut nrows = 0;
        let mut degrees: Vec<usize> = self.by_degree.keys().copied().filter(|&s| s <= n).collect();
        degrees.sort_unstable();
        for s in degrees {
            let rels = &self.by_degree[&s];
            for u in &self.levels[n - s].words {
                for r in rels {
                    let mut row = vec![0u32; cols];
                    for (m, c) in r.terms() {
                        let w = u.concat(m);
                        let last = w.get(n - 1);
                        let head = w.slice(0, n - 1);
                        for (b, e) in self.reduce_built(&head) {
                            let col = b * d + (d - 1 - last);
                            row[col] = f.add(row[col], f.mul(c, e));
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        data.extend_from_slice(&row);
                        nrows += 1;
                    }
                }
            }
        }
        let pivots = rref_in_place(f, nrows, cols, &mut data);
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut std_index = vec![u32::MAX; cols];
        let mut words = Vec::new();
        let prev_words = &self.levels[n - 1].words;
        for c in 0..cols {
            if !is_pivot[c] {
                std_index[c] = words.len() as u32;
                let mut w = prev_words[c / d].clone();
                w.push(d - 1 - c % d);
                words.push(w);
            }
        }
        let mut images: Vec<Vec<(u32, u32)>> = vec![Vec::new(); cols];
        for c in 0..cols {
            if !is_pivot[c] {
                images[c] = vec![(std_index[c], 1)];
            }
        }
        for (i, &pc) in pivots.iter().enumerate() {
            let row = &data[i * cols..(i + 1) * cols];
            images[pc] = row
                .iter()
                .enumerate()
                .skip(pc + 1)
                .filter(|(j, &x)| x != 0 && !is_pivot[*j])
                .map(|(j, &x)| (std_index[j], f.neg(x)))
                .collect();
        }
        self.levels.push(Level { words, images });
        Ok(())
    }
}

/// `dim A_n`.
pub fn graded_dim(a: &QuadraticAlgebra, n: usize) -> Result<usize> {
    GradedQuotient::for_algebra(a, DEFAULT_BUDGET)?.dim(n)
}

/// `[dim A_0, ..., dim A_{n_max}]`.
pub fn hilbert_prefix(a: &QuadraticAlgebra, n_max: usize) -> Result<Vec<usize>> {
    hilbert_prefix_with_budget(a, n_max, DEFAULT_BUDGET)
}

pub fn hilbert_prefix_with_budget(
    a: &QuadraticAlgebra,
    n_max: usize,
    budget: usize,
) -> Result<Vec<usize>> {
    GradedQuotient::for_algebra(a, budget)?.prefix(n_max)
}

/// `h_a(z) h_b(-z) = 1` through degree `n_max`, in exact integer arithmetic.
pub fn series_reciprocal_check(
    a: &QuadraticAlgebra,
    b: &QuadraticAlgebra,
    n_max: usize,
) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.p(), b.p()));
    }
    let ha = hilbert_prefix(a, n_max)?;
    let hb = hilbert_prefix(b, n_max)?;
    Ok(reciprocal_prefixes(&ha, &hb))
}

pub(crate) fn reciprocal_prefixes(ha: &[usize], hb: &[usize]) -> bool {
    let n_max = ha.len().min(hb.len());
    (0..n_max).all(|n| {
        let s: i128 = (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                sign * hb[k] as i128 * ha[n - k] as i128
            })
            .sum();
        s == (n == 0) as i128
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FpMatrix;
    use crate::quad::algebra::poly_to_coords;
    use rand::{Rng, SeedableRng};

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn labels(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("x{}", i)).collect()
    }

    fn one_relator(p: u64, d: usize, text: &str) -> QuadraticAlgebra {
        let r = NcPoly::parse(text, f(p), &labels(d)).unwrap();
        QuadraticAlgebra::from_polys(f(p), labels(d), &[r]).unwrap()
    }

    // Full-space oracle: rank of all V^i (x) Omega (x) V^j inside d^n coordinates.
    fn direct_dim(a: &QuadraticAlgebra, n: usize) -> usize {
        let d = a.num_generators();
        if n < 2 {
            return d.pow(n as u32);
        }
        let total = d.pow(n as u32);
        let mut rows = Vec::new();
        for i in 0..=n - 2 {
            let j = n - 2 - i;
            for r in a.relators().basis().row_iter() {
                for left in 0..d.pow(i as u32) {
                    for right in 0..d.pow(j as u32) {
                        let mut v = vec![0u32; total];
                        for (k, &c) in r.iter().enumerate() {
                            if c != 0 {
                                let idx = (left * d * d + k) * d.pow(j as u32) + right;
                                v[idx] = c;
                            }
                        }
                        rows.push(v);
                    }
                }
            }
        }
        if rows.is_empty() {
            return total;
        }
        total - FpMatrix::from_rows(a.field(), total, &rows).unwrap().rank()
    }

    #[test]
    fn small_examples() {
        assert_eq!(graded_dim(&QuadraticAlgebra::exterior(f(3), 3), 2).unwrap(), 3);
        assert_eq!(graded_dim(&QuadraticAlgebra::tensor(f(2), 2), 3).unwrap(), 8);
        let dem = one_relator(3, 4, "x1*x2 - x2*x1 + x3*x4 - x4*x3");
        assert_eq!(graded_dim(&dem, 3).unwrap(), 56);
        assert_eq!(hilbert_prefix(&dem, 4).unwrap(), vec![1, 4, 15, 56, 209]);
        assert_eq!(
            hilbert_prefix(&QuadraticAlgebra::symmetric(f(5), 2), 4).unwrap(),
            vec![1, 2, 3, 4, 5]
        );
        assert_eq!(
            hilbert_prefix(&QuadraticAlgebra::trivial(f(2), 3), 3).unwrap(),
            vec![1, 3, 0, 0]
        );
    }

    #[test]
    fn reciprocity_examples() {
        let dem = one_relator(5, 4, "x1*x2 - x2*x1 + x3*x4 - x4*x3");
        assert!(series_reciprocal_check(&dem, &dem.quadratic_dual(), 5).unwrap());
        for d in 1..=4 {
            for p in [2, 3] {
                let s = QuadraticAlgebra::symmetric(f(p), d);
                let e = QuadraticAlgebra::exterior(f(p), d);
                assert!(series_reciprocal_check(&s, &e, 5).unwrap());
            }
        }
        let t = QuadraticAlgebra::tensor(f(3), 2);
        let s = QuadraticAlgebra::symmetric(f(3), 2);
        assert!(!series_reciprocal_check(&t, &s, 2).unwrap());
        // the first failure is exactly at n = 2
        assert!(series_reciprocal_check(&t, &s, 1).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let t = QuadraticAlgebra::tensor(f(2), 4);
        let mut g = GradedQuotient::for_algebra(&t, 100).unwrap();
        assert_eq!(g.dim(3).unwrap(), 64);
        assert!(matches!(g.dim(4), Err(Error::BudgetExceeded { needed: 256, .. })));
    }

    #[test]
    fn incremental_matches_full_space_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let d = rng.gen_range(1..=3);
            let k = rng.gen_range(0..=d * d);
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|_| {
                    // sparse-ish random relators
                    (0..d * d)
                        .map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..p as u32) } else { 0 })
                        .collect()
                })
                .collect();
            let polys: Vec<NcPoly> = rows
                .iter()
                .map(|r| super::super::algebra::coords_to_poly(f(p), d, r))
                .collect();
            let a = QuadraticAlgebra::from_polys(f(p), labels(d), &polys).unwrap();
            let prefix = hilbert_prefix(&a, 4).unwrap();
            for (n, &dim) in prefix.iter().enumerate() {
                assert_eq!(dim, direct_dim(&a, n), "{:?} degree {}", a, n);
            }
        }
    }

    #[test]
    fn reduction_respects_relations() {
        let a = QuadraticAlgebra::symmetric(f(3), 3);
        let mut g = GradedQuotient::for_algebra(&a, DEFAULT_BUDGET).unwrap();
        // x3 x1 x2 = x1 x2 x3 in the polynomial ring
        let u = g.reduce(&MultiIndex::new(&[2, 0, 1])).unwrap();
        let v = g.reduce(&MultiIndex::new(&[0, 1, 2])).unwrap();
        assert_eq!(u, v);
        assert_eq!(u.len(), 1);
        let _ = poly_to_coords;
    }

    #[test]
    fn mixed_degree_relations() {
        // x1^3 in one variable
        let r = NcPoly::monomial(f(3), 1, MultiIndex::new(&[0, 0, 0]), 1);
        let mut g = GradedQuotient::new(f(3), 1, &[r], DEFAULT_BUDGET).unwrap();
        assert_eq!(g.prefix(5).unwrap(), vec![1, 1, 1, 0, 0, 0]);
    }
}
