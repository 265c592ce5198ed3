//! Closed-form subgroup counts for finite abelian groups.
//!
//! A finite abelian `p`-group of type `λ` (a partition) has
//!
//! ```text
//! ∏_{i ≥ 1} p^{μ'_{i+1} (λ'_i − μ'_i)} · [λ'_i − μ'_{i+1} choose μ'_i − μ'_{i+1}]_p
//! ```
//!
//! subgroups of type `μ ⊆ λ`, where `'` denotes the conjugate partition and
//! `[n choose k]_p` the Gaussian binomial. Counts are multiplicative over the
//! primary components.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use crate::arith;

/// Gaussian binomial coefficient `[n choose k]_q`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.clone().pow(n - i) - 1u32;
        den *= q.clone().pow(i + 1) - 1u32;
    }
    num / den
}

fn conjugate(parts: &[u32]) -> Vec<u32> {
    let top = parts.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|i| parts.iter().filter(|&&x| x >= i).count() as u32)
        .collect()
}

fn sub_partitions(lambda: &[u32], prefix: &mut Vec<u32>, out: &mut impl FnMut(&[u32])) {
    let j = prefix.len();
    if j == lambda.len() {
        out(prefix);
        return;
    }
    let bound = prefix.last().copied().unwrap_or(u32::MAX).min(lambda[j]);
    for part in 0..=bound {
        prefix.push(part);
        sub_partitions(lambda, prefix, out);
        prefix.pop();
    }
}

/// Number of subgroups of type `mu` in the abelian `p`-group of type `lambda`.
pub fn count_of_type(p: u64, lambda: &[u32], mu: &[u32]) -> BigUint {
    let lc = conjugate(lambda);
    let mc = conjugate(mu);
    let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
    let pb = BigUint::from(p);
    let mut total = BigUint::one();
    for (i, &l) in lc.iter().enumerate() {
        let (m, m_next) = (at(&mc, i), at(&mc, i + 1));
        if m > l {
            return BigUint::zero();
        }
        total *= pb.clone().pow(m_next * (l - m));
        total *= gaussian_binomial(l - m_next, m - m_next, p);
    }
    total
}

/// Number of subgroups of the abelian `p`-group `⊕ Z(p^{λ_i})`.
pub fn count_p_group(p: u64, lambda: &[u32]) -> BigUint {
    let mut lambda: Vec<u32> = lambda.iter().copied().filter(|&x| x > 0).collect();
    lambda.sort_unstable_by(|a, b| b.cmp(a));
    let mut total = BigUint::zero();
    sub_partitions(&lambda, &mut Vec::new(), &mut |mu| {
        total += count_of_type(p, &lambda, mu);
    });
    total
}

/// Split cyclic orders into their primary types: prime ↦ exponents.
pub fn primary_types(orders: &[u64]) -> BTreeMap<u64, Vec<u32>> {
    let mut types: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in orders.iter().filter(|&&n| n > 1) {
        for (p, k) in arith::factorize(n) {
            types.entry(p).or_default().push(k);
        }
    }
    types
}

/// Number of subgroups of `⊕ Z(n_i)`.
pub fn count_subgroups(orders: &[u64]) -> BigUint {
    primary_types(orders)
        .into_iter()
        .map(|(p, lambda)| count_p_group(p, &lambda))
        .product()
}
