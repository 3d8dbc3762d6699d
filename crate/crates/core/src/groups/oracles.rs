use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::Subspace;

use super::finite::FiniteGroupTable;

/// Dimensions of `I^n / I^(n+1)` for `n = 0..=N` and the dimension
/// subgroups `G_(1)..G_(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JenningsResult {
    pub dims: Vec<usize>,
    pub subgroups: Vec<Vec<usize>>,
}

impl JenningsResult {
    /// `dims` with trailing zeros removed.
    pub fn gr_dims(&self) -> Vec<usize> {
        let mut d = self.dims.clone();
        while d.last() == Some(&0) {
            d.pop();
        }
        d
    }
}

fn check_p_group(g: &FiniteGroupTable, p: u32) -> Result<Fp> {
    let field = Fp::new(p as u64)?;
    let mut n = g.order();
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
    }
    if n != 1 {
        return Err(Error::NotAPGroup {
            order: g.order(),
            p,
        });
    }
    Ok(field)
}

/// Powers of the augmentation ideal of `F_p[G]`, computed directly.
pub fn jennings_oracle(g: &FiniteGroupTable, p: u32, n: usize) -> Result<JenningsResult> {
    let field = check_p_group(g, p)?;
    let order = g.order();
    let e = g.identity();
    // I^1 is spanned by g - e
    let basis_vec = |x: usize| {
        let mut v = vec![0u32; order];
        v[x] = 1;
        v[e] = field.sub(v[e], 1);
        v
    };
    let gens: Vec<Vec<u32>> = (0..order).filter(|&x| x != e).map(basis_vec).collect();
    let mut powers = vec![Subspace::full(field, order), Subspace::span(field, order, &gens)];
    while powers.len() < n + 2 {
        let prev = powers.last().unwrap();
        if prev.dim() == 0 {
            powers.push(prev.clone());
            continue;
        }
        let mut rows = Vec::with_capacity(prev.dim() * (order - 1));
        for a in prev.basis().row_iter() {
            for x in (0..order).filter(|&x| x != e) {
                // a * (x - e)
                let mut v = vec![0u32; order];
                for (h, &c) in a.iter().enumerate() {
                    if c != 0 {
                        let hx = g.mul(h, x);
                        v[hx] = field.add(v[hx], c);
                        v[h] = field.sub(v[h], c);
                    }
                }
                rows.push(v);
            }
        }
        powers.push(Subspace::span(field, order, &rows));
    }
    let dims = (0..=n).map(|k| powers[k].dim() - powers[k + 1].dim()).collect();
    let subgroups = (1..=n)
        .map(|k| {
            (0..order)
                .filter(|&x| x == e || powers[k].contains(&basis_vec(x)))
                .collect()
        })
        .collect();
    Ok(JenningsResult { dims, subgroups })
}

fn power_subgroup(g: &FiniteGroupTable, h: &[usize], e: u64) -> Vec<usize> {
    g.generated(h.iter().map(|&x| g.pow(x, e)))
}

fn commutator_subgroup(g: &FiniteGroupTable, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    for &x in a {
        for &y in b {
            gens.push(g.commutator(x, y));
        }
    }
    g.generated(gens)
}

/// `G_(n) = prod_{i p^h >= n} gamma_i^(p^h)` for `n = 1..=N`.
pub fn lazard_oracle(g: &FiniteGroupTable, p: u32, n: usize) -> Result<Vec<Vec<usize>>> {
    check_p_group(g, p)?;
    let all: Vec<usize> = (0..g.order()).collect();
    let mut gamma = vec![all.clone()];
    while gamma.len() < n {
        let next = commutator_subgroup(g, gamma.last().unwrap(), &all);
        gamma.push(next);
    }
    let p = p as u64;
    Ok((1..=n)
        .map(|k| {
            let mut gens = Vec::new();
            for (i, gi) in gamma.iter().enumerate().take(k) {
                let i = i as u64 + 1;
                let mut q = 1u64;
                while i * q < k as u64 {
                    q *= p;
                }
                gens.extend(power_subgroup(g, gi, q));
            }
            g.generated(gens)
        })
        .collect())
}

/// `G_(1) = G`, `G_(n) = G_(ceil(n/p))^p prod_{i+j=n} [G_(i), G_(j)]`.
pub fn zassenhaus_recursion(g: &FiniteGroupTable, p: u32, n: usize) -> Result<Vec<Vec<usize>>> {
    check_p_group(g, p)?;
    let p = p as usize;
    let mut chain: Vec<Vec<usize>> = vec![(0..g.order()).collect()];
    for k in 2..=n {
        let mut gens = power_subgroup(g, &chain[k.div_ceil(p) - 1], p as u64);
        for i in 1..k {
            gens.extend(commutator_subgroup(g, &chain[i - 1], &chain[k - i - 1]));
        }
        chain.push(g.generated(gens));
    }
    chain.truncate(n);
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclic_examples() {
        let z2 = jennings_oracle(&FiniteGroupTable::cyclic(2), 2, 2).unwrap();
        assert_eq!(z2.dims, vec![1, 1, 0]);
        assert_eq!(z2.subgroups[1], vec![0]);
        let z4 = jennings_oracle(&FiniteGroupTable::cyclic(4), 2, 4).unwrap();
        assert_eq!(z4.dims, vec![1, 1, 1, 1, 0]);
        assert_eq!(z4.subgroups[1], vec![0, 2]);
        assert_eq!(z4.subgroups[2], vec![0]);
        assert_eq!(z4.gr_dims(), vec![1, 1, 1, 1]);
        let v4 = jennings_oracle(&FiniteGroupTable::elementary_abelian(2, 2), 2, 3).unwrap();
        assert_eq!(v4.dims, vec![1, 2, 1, 0]);
    }

    #[test]
    fn lazard_on_cyclic() {
        let z4 = FiniteGroupTable::cyclic(4);
        let chain = lazard_oracle(&z4, 2, 3).unwrap();
        assert_eq!(chain[1], vec![0, 2]);
        assert_eq!(chain[2], vec![0]);
        // abelian: G_(n) = G^(p^ceil(log_p n))
        let z27 = FiniteGroupTable::cyclic(27);
        let chain = lazard_oracle(&z27, 3, 10).unwrap();
        let sizes: Vec<usize> = chain.iter().map(|h| h.len()).collect();
        assert_eq!(sizes, vec![27, 9, 9, 3, 3, 3, 3, 3, 3, 1]);
    }

    #[test]
    fn oracles_agree_on_catalog() {
        for p in [2u32, 3] {
            for (name, g) in FiniteGroupTable::small_catalog(p as usize) {
                let n = g.order();
                let j = jennings_oracle(&g, p, n).unwrap();
                let l = lazard_oracle(&g, p, n).unwrap();
                let z = zassenhaus_recursion(&g, p, n).unwrap();
                assert_eq!(j.subgroups, l, "{}", name);
                assert_eq!(l, z, "{}", name);
                assert_eq!(j.dims.iter().sum::<usize>(), g.order(), "{}", name);
            }
        }
    }

    #[test]
    fn jennings_dims_of_nonabelian_groups() {
        // D8: generated by two involutions, gr has Hilbert series (1+t)^2(1+t^2)
        let d8 = jennings_oracle(&FiniteGroupTable::dihedral(8).unwrap(), 2, 5).unwrap();
        assert_eq!(d8.gr_dims(), vec![1, 2, 2, 2, 1]);
        let h = jennings_oracle(&FiniteGroupTable::heisenberg(3), 3, 8).unwrap();
        // (1+t+t^2)^2 (1+t^2+t^4)
        assert_eq!(h.gr_dims(), vec![1, 2, 4, 4, 5, 4, 4, 2, 1]);
    }

    #[test]
    fn rejects_non_p_groups() {
        let z6 = FiniteGroupTable::cyclic(6);
        assert_eq!(
            jennings_oracle(&z6, 2, 3).unwrap_err(),
            Error::NotAPGroup { order: 6, p: 2 }
        );
        assert!(lazard_oracle(&z6, 3, 3).is_err());
    }
}
