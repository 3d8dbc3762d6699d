use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::quad::QuadraticAlgebra;
use crate::tensor::DeglexOrder;

use super::certificate::PbwCertificate;
use super::rewriting::normalize_basis;

/// Knobs for [`pbw_search_with`].
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of generator orders tried.
    pub budget: usize,
    /// Generator that must be smallest in every order tried.
    pub fixed_first: Option<usize>,
    /// Orders (ascending generator lists) tried before anything else.
    pub hints: Vec<Vec<usize>>,
    /// Seed for sampling when the permutations exceed the budget; defaults
    /// to a hash of the algebra.
    pub seed: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 5040,
            fixed_first: None,
            hints: Vec::new(),
            seed: None,
        }
    }
}

/// Order from the one-relator lemma: for a single relator containing
/// `x_i x_j` (i != j) but not `x_i^2`, put `x_i` last and `x_j` second last.
pub fn one_relator_lemma_order(a: &QuadraticAlgebra) -> Option<Vec<usize>> {
    if a.relators().dim() != 1 {
        return None;
    }
    let d = a.num_generators();
    let r = a.relators().basis().row(0);
    for i in 0..d {
        if r[i * d + i] != 0 {
            continue;
        }
        for j in 0..d {
            if j != i && r[i * d + j] != 0 {
                let mut asc: Vec<usize> = (0..d).filter(|&g| g != i && g != j).collect();
                asc.push(j);
                asc.push(i);
                return Some(asc);
            }
        }
    }
    None
}

fn algebra_seed(a: &QuadraticAlgebra) -> u64 {
    let mut h = Sha256::new();
    h.update(a.p().to_le_bytes());
    h.update((a.num_generators() as u64).to_le_bytes());
    for r in a.relators().basis().row_iter() {
        for &c in r {
            h.update(c.to_le_bytes());
        }
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn factorial_capped(n: usize, cap: usize) -> usize {
    let mut acc = 1usize;
    for k in 2..=n {
        acc = acc.saturating_mul(k);
        if acc > cap {
            return usize::MAX;
        }
    }
    acc
}

/// Try deglex orders over generator permutations and return the first
/// confluent one. `None` does not prove the algebra is not PBW.
pub fn pbw_search(a: &QuadraticAlgebra, budget: usize) -> Option<PbwCertificate> {
    let mut hints = Vec::new();
    if let Some(o) = one_relator_lemma_order(a) {
        hints.push(o);
    }
    if let Some(o) = one_relator_lemma_order(&a.quadratic_dual()) {
        hints.push(o.into_iter().rev().collect());
    }
    pbw_search_with(
        a,
        &SearchOptions {
            budget,
            hints,
            ..SearchOptions::default()
        },
    )
}

pub fn pbw_search_with(a: &QuadraticAlgebra, opts: &SearchOptions) -> Option<PbwCertificate> {
    let d = a.num_generators();
    let rest: Vec<usize> = (0..d).filter(|&g| Some(g) != opts.fixed_first).collect();
    let assemble = |tail: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = opts.fixed_first.into_iter().collect();
        v.extend_from_slice(tail);
        v
    };
    let mut tried: Vec<Vec<usize>> = Vec::new();
    let attempt = |asc: Vec<usize>, tried: &mut Vec<Vec<usize>>| -> Option<PbwCertificate> {
        if tried.contains(&asc) || tried.len() >= opts.budget.max(1) {
            return None;
        }
        if let Some(t) = opts.fixed_first {
            if asc.first() != Some(&t) {
                return None;
            }
        }
        tried.push(asc.clone());
        let order = DeglexOrder::from_ascending(&asc).ok()?;
        let system = normalize_basis(a.relators(), &order).ok()?;
        system.is_confluent().certificate()
    };

    let mut candidates: Vec<Vec<usize>> = opts.hints.clone();
    candidates.push(assemble(&rest));
    let mut rev = rest.clone();
    rev.reverse();
    candidates.push(assemble(&rev));
    for c in candidates {
        if let Some(cert) = attempt(c, &mut tried) {
            return Some(cert);
        }
    }

    if factorial_capped(rest.len(), opts.budget) <= opts.budget {
        let mut perm = rest.clone();
        loop {
            if let Some(cert) = attempt(assemble(&perm), &mut tried) {
                return Some(cert);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    } else {
        let seed = opts.seed.unwrap_or_else(|| algebra_seed(a));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm = rest.clone();
        while tried.len() < opts.budget {
            perm.shuffle(&mut rng);
            if let Some(cert) = attempt(assemble(&perm), &mut tried) {
                return Some(cert);
            }
        }
    }
    None
}
