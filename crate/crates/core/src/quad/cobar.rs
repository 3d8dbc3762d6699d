use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rref_in_place;
use crate::tensor::MultiIndex;

use super::algebra::QuadraticAlgebra;
use super::graded::{GradedQuotient, DEFAULT_BUDGET};

/// Dimensions of `Ext^{i,j}_A(k,k)` for the computed bidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTable {
    pub i_max: usize,
    pub j_max: usize,
    #[serde(with = "entry_list")]
    pub entries: BTreeMap<(usize, usize), usize>,
}

mod entry_list {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        i: usize,
        j: usize,
        dim: usize,
    }

    pub fn serialize<S: serde::Serializer>(
        m: &BTreeMap<(usize, usize), usize>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> = m.iter().map(|(&(i, j), &dim)| Entry { i, j, dim }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<(usize, usize), usize>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.i, e.j), e.dim)).collect())
    }
}

impl BigradedTable {
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.entries.get(&(i, j)).copied()
    }

    /// Computed entries with `i != j` and a nonzero dimension.
    pub fn off_diagonal_nonzero(&self) -> Vec<((usize, usize), usize)> {
        self.entries
            .iter()
            .filter(|(&(i, j), &v)| i != j && v != 0)
            .map(|(&k, &v)| (k, v))
            .collect()
    }

    pub fn diagonal(&self) -> Vec<usize> {
        (0..=self.i_max.min(self.j_max))
            .map_while(|i| self.get(i, i))
            .collect()
    }
}

/// Ext dimensions for all `i <= i_max`, `j <= j_max`.
pub fn cobar_ext_dims(a: &QuadraticAlgebra, i_max: usize, j_max: usize) -> Result<BigradedTable> {
    let pairs: Vec<(usize, usize)> = (0..=i_max)
        .flat_map(|i| (0..=j_max).map(move |j| (i, j)))
        .collect();
    compute(a, i_max, j_max, &pairs, DEFAULT_BUDGET)
}

/// Ext dimensions for all bidegrees with `i + j <= total`.
pub fn cobar_ext_dims_within(a: &QuadraticAlgebra, total: usize) -> Result<BigradedTable> {
    let pairs: Vec<(usize, usize)> = (0..=total)
        .flat_map(|i| (0..=total - i).map(move |j| (i, j)))
        .collect();
    compute(a, total, total, &pairs, DEFAULT_BUDGET)
}

fn compute(
    a: &QuadraticAlgebra,
    i_max: usize,
    j_max: usize,
    pairs: &[(usize, usize)],
    budget: usize,
) -> Result<BigradedTable> {
    let mut cx = Complex {
        algebra: GradedQuotient::for_algebra(a, budget)?,
        products: HashMap::new(),
        ranks: HashMap::new(),
        budget,
    };
    let mut entries = BTreeMap::new();
    for &(i, j) in pairs {
        let v = if i == 0 {
            (j == 0) as usize
        } else if j < i {
            0
        } else {
            let dim = cx.cochain_dim(i, j)?;
            let out = cx.rank(i, j)?;
            let inc = if i >= 2 { cx.rank(i - 1, j)? } else { 0 };
            dim - out - inc
        };
        entries.insert((i, j), v);
    }
    Ok(BigradedTable {
        i_max,
        j_max,
        entries,
    })
}

fn compositions(j: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < parts {
            return;
        }
        for k in 1..=rest - (parts - 1) {
            cur.push(k);
            rec(rest - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(j, i, &mut Vec::new(), &mut out);
    out
}

struct Complex {
    algebra: GradedQuotient,
    products: HashMap<(usize, usize, usize, usize), Vec<(usize, u32)>>,
    ranks: HashMap<(usize, usize), usize>,
    budget: usize,
}

/// Basis of the bar term `B_{i,j}`: tensors of standard words whose degrees
/// form a composition of `j` into `i` parts.
struct BarBasis {
    blocks: HashMap<Vec<usize>, (usize, Vec<usize>)>,
    order: Vec<Vec<usize>>,
    dim: usize,
}

impl Complex {
    fn bar_basis(&mut self, i: usize, j: usize) -> Result<BarBasis> {
        let mut blocks = HashMap::new();
        let mut order = Vec::new();
        let mut offset = 0usize;
        for comp in compositions(j, i) {
            let mut sizes = Vec::with_capacity(comp.len());
            let mut size = 1usize;
            for &k in &comp {
                let s = self.algebra.dim(k)?;
                sizes.push(s);
                size = size.saturating_mul(s);
            }
            blocks.insert(comp.clone(), (offset, sizes));
            order.push(comp);
            offset = offset.saturating_add(size);
        }
        Ok(BarBasis {
            blocks,
            order,
            dim: offset,
        })
    }

    fn cochain_dim(&mut self, i: usize, j: usize) -> Result<usize> {
        Ok(self.bar_basis(i, j)?.dim)
    }

    fn product(&mut self, da: usize, a: usize, db: usize, b: usize) -> Result<Vec<(usize, u32)>> {
        if let Some(v) = self.products.get(&(da, a, db, b)) {
            return Ok(v.clone());
        }
        let wa: MultiIndex = self.algebra.words(da)?[a].clone();
        let wb: MultiIndex = self.algebra.words(db)?[b].clone();
        let v = self.algebra.reduce(&wa.concat(&wb))?;
        self.products.insert((da, a, db, b), v.clone());
        Ok(v)
    }

    /// Rank of the cobar differential `Cob^{i,j} -> Cob^{i+1,j}`, computed as
    /// the rank of its transpose, the bar differential `B_{i+1,j} -> B_{i,j}`.
    fn rank(&mut self, i: usize, j: usize) -> Result<usize> {
        if let Some(&r) = self.ranks.get(&(i, j)) {
            return Ok(r);
        }
        let source = self.bar_basis(i + 1, j)?;
        let target = self.bar_basis(i, j)?;
        if source.dim == 0 || target.dim == 0 {
            self.ranks.insert((i, j), 0);
            return Ok(0);
        }
        let cells = source.dim.saturating_mul(target.dim);
        if source.dim > self.budget || target.dim > self.budget || cells > 64 * self.budget * 100 {
            return Err(Error::BudgetExceeded {
                needed: source.dim.max(target.dim),
                budget: self.budget,
            });
        }
        let f = self.algebra.field();
        let cols = target.dim;
        let mut data = vec![0u32; source.dim * cols];
        let mut row = 0usize;
        for comp in &source.order {
            let (_, sizes) = source.blocks[comp].clone();
            let count: usize = sizes.iter().product();
            let mut idx = vec![0usize; comp.len()];
            for _ in 0..count {
                for k in 0..comp.len() - 1 {
                    // sign (-1)^(k+1) for merging positions k, k+1
                    let sign = if k % 2 == 0 { f.neg(1) } else { 1 };
                    let prod = self.product(comp[k], idx[k], comp[k + 1], idx[k + 1])?;
                    if prod.is_empty() {
                        continue;
                    }
                    let mut new_comp = comp.clone();
                    new_comp[k] = comp[k] + comp[k + 1];
                    new_comp.remove(k + 1);
                    let (off, tsizes) = &target.blocks[&new_comp];
                    for (w, c) in prod {
                        let mut pos = 0usize;
                        for (s, &sz) in tsizes.iter().enumerate() {
                            let v = if s < k {
                                idx[s]
                            } else if s == k {
                                w
                            } else {
                                idx[s + 1]
                            };
                            pos = pos * sz + v;
                        }
                        let cell = &mut data[row * cols + off + pos];
                        *cell = f.add(*cell, f.mul(sign, c));
                    }
                }
                row += 1;
                // advance the mixed-radix counter, last factor fastest
                for s in (0..comp.len()).rev() {
                    idx[s] += 1;
                    if idx[s] < sizes[s] {
                        break;
                    }
                    idx[s] = 0;
                }
            }
        }
        let r = rref_in_place(f, source.dim, cols, &mut data).len();
        self.ranks.insert((i, j), r);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::quad::graded_dim;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn compositions_enumerated() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn trivial_algebra_has_diagonal_powers() {
        let t = cobar_ext_dims(&QuadraticAlgebra::trivial(f(2), 2), 3, 3).unwrap();
        for i in 0..=3 {
            for j in 0..=3 {
                let expect = if i == j { 1 << i } else { 0 };
                assert_eq!(t.get(i, j), Some(expect), "({}, {})", i, j);
            }
        }
    }

    #[test]
    fn exterior_is_koszul() {
        for p in [2, 3] {
            let t = cobar_ext_dims_within(&QuadraticAlgebra::exterior(f(p), 2), 6).unwrap();
            for i in 0..=3 {
                assert_eq!(t.get(i, i), Some(i + 1));
            }
            assert!(t.off_diagonal_nonzero().is_empty(), "{:?}", t);
        }
    }

    #[test]
    fn shape_of_the_table() {
        let a = QuadraticAlgebra::symmetric(f(3), 3);
        let t = cobar_ext_dims(&a, 3, 3).unwrap();
        assert_eq!(t.get(0, 0), Some(1));
        assert_eq!(t.get(1, 1), Some(3));
        assert_eq!(t.get(2, 1), Some(0));
        assert_eq!(t.get(3, 2), Some(0));
        let dual = a.quadratic_dual();
        for i in 0..=3 {
            assert_eq!(t.get(i, i), Some(graded_dim(&dual, i).unwrap()));
        }
    }

    // The cobar Euler characteristic inverts the Hilbert series:
    // sum_k h[n-k] * sum_i (-1)^i Ext^{i,k} = [n = 0], for every algebra.
    #[test]
    fn euler_characteristic_inverts_hilbert_series() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut off_diagonal_seen = false;
        for _ in 0..25 {
            let p = [2u64, 3][rng.gen_range(0..2)];
            let d = 2;
            let k = rng.gen_range(1..=3);
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|_| (0..d * d).map(|_| rng.gen_range(0..p as u32)).collect())
                .collect();
            let labels = vec!["x".to_string(), "y".to_string()];
            let a = QuadraticAlgebra::new(f(p), labels, crate::linalg::Subspace::span(f(p), 4, &rows))
                .unwrap();
            let jm = 5;
            let t = cobar_ext_dims(&a, jm, jm).unwrap();
            let h = crate::quad::hilbert_prefix(&a, jm).unwrap();
            let chi: Vec<i64> = (0..=jm)
                .map(|j| {
                    (0..=j)
                        .map(|i| if i % 2 == 0 { 1 } else { -1 } * t.get(i, j).unwrap() as i64)
                        .sum()
                })
                .collect();
            for n in 0..=jm {
                let s: i64 = (0..=n).map(|k| h[n - k] as i64 * chi[k]).sum();
                assert_eq!(s, (n == 0) as i64, "{:?}", a);
            }
            off_diagonal_seen |= !t.off_diagonal_nonzero().is_empty();
        }
        assert!(off_diagonal_seen, "corpus should contain a non-Koszul algebra");
    }
}
