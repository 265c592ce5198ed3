//! Brute-force engine for finite abelian groups `Z(n_1) ⊕ … ⊕ Z(n_r)`.
//!
//! Elements are encoded as mixed-radix indices (first coordinate least
//! significant) and subgroups as bitsets over those indices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::intmat::{smith, IntMatrix};

pub const DEFAULT_CAP: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("group of order {size} exceeds the cap of {cap} elements")]
    CapExceeded { size: u128, cap: u64 },
    #[error("cyclic factor orders must be at least 2, got {0}")]
    InvalidOrder(u64),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    orders: Vec<u64>,
    coords: Vec<Vec<u64>>,
}

/// A subgroup stored as the set of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSubgroup {
    len: usize,
    words: Vec<u64>,
}

/// A character `G → Q/Z`, given by the image `a_i / n_i` of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinCharacter {
    pub images: Vec<Ratio<u64>>,
}

impl FiniteGroup {
    /// `Z(n_1) ⊕ … ⊕ Z(n_r)`; an empty list is the trivial group.
    pub fn new(orders: &[u64], cap: u64) -> Result<FiniteGroup, FiniteError> {
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(FiniteError::InvalidOrder(bad));
        }
        let size = orders
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128));
        match size {
            Some(size) if size <= cap as u128 => {}
            other => {
                return Err(FiniteError::CapExceeded {
                    size: other.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        let size: u64 = orders.iter().product();
        let coords = (0..size)
            .map(|mut x| {
                orders
                    .iter()
                    .map(|&n| {
                        let c = x % n;
                        x /= n;
                        c
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteGroup {
            orders: orders.to_vec(),
            coords,
        })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        let mut idx = 0u64;
        for (c, n) in coords.iter().zip(&self.orders).rev() {
            idx = idx * n + c % n;
        }
        idx as usize
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let sum: Vec<u64> = self.coords[a]
            .iter()
            .zip(&self.coords[b])
            .zip(&self.orders)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        self.index_of(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let neg: Vec<u64> = self.coords[a]
            .iter()
            .zip(&self.orders)
            .map(|(x, n)| (n - x) % n)
            .collect();
        self.index_of(&neg)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.coords[a]
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &n)| acc.lcm(&(n / x.gcd(&n))))
    }

    pub fn trivial_subgroup(&self) -> FinSubgroup {
        FinSubgroup::from_indices(self.size(), [0])
    }

    pub fn whole(&self) -> FinSubgroup {
        FinSubgroup::from_indices(self.size(), 0..self.size())
    }

    /// `S + ⟨x⟩`.
    pub fn join_element(&self, s: &FinSubgroup, x: usize) -> FinSubgroup {
        if s.contains(x) {
            return s.clone();
        }
        let base: Vec<usize> = s.indices().collect();
        let mut out = s.clone();
        let mut shift = x;
        while !s.contains(shift) {
            for &b in &base {
                out.insert(self.add(b, shift));
            }
            shift = self.add(shift, x);
        }
        out
    }

    pub fn join(&self, a: &FinSubgroup, b: &FinSubgroup) -> FinSubgroup {
        self.generators(b)
            .into_iter()
            .fold(a.clone(), |acc, g| self.join_element(&acc, g))
    }

    /// The subgroup generated by the given element indices.
    pub fn generated_by(&self, gens: &[usize]) -> FinSubgroup {
        gens.iter().fold(self.trivial_subgroup(), |acc, &g| {
            self.join_element(&acc, g)
        })
    }

    /// Validate an element set as a subgroup.
    pub fn subgroup_from_elements(
        &self,
        elements: &[Vec<u64>],
    ) -> Result<FinSubgroup, FiniteError> {
        if let Some(bad) = elements.iter().find(|e| e.len() != self.orders.len()) {
            return Err(FiniteError::InvalidSubgroup(format!(
                "element {bad:?} has the wrong length"
            )));
        }
        let s = FinSubgroup::from_indices(self.size(), elements.iter().map(|e| self.index_of(e)));
        self.check_subgroup(&s)?;
        Ok(s)
    }

    pub fn check_subgroup(&self, s: &FinSubgroup) -> Result<(), FiniteError> {
        if s.len != self.size() {
            return Err(FiniteError::InvalidSubgroup(
                "subgroup belongs to a different group".into(),
            ));
        }
        if !s.contains(0) {
            return Err(FiniteError::InvalidSubgroup("missing the identity".into()));
        }
        let elems: Vec<usize> = s.indices().collect();
        for &a in &elems {
            for &b in &elems {
                if !s.contains(self.add(a, b)) {
                    return Err(FiniteError::InvalidSubgroup(
                        "not closed under addition".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// A generating set of `s`, chosen greedily in index order.
    pub fn generators(&self, s: &FinSubgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.trivial_subgroup();
        for x in s.indices() {
            if !span.contains(x) {
                gens.push(x);
                span = self.join_element(&span, x);
            }
        }
        gens
    }

    /// Distinct cyclic subgroups, each with a generator.
    pub fn cyclic_subgroups(&self) -> Vec<(usize, FinSubgroup)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in 0..self.size() {
            let c = self.generated_by(&[x]);
            if seen.insert(c.clone()) {
                out.push((x, c));
            }
        }
        out
    }

    /// The full subgroup lattice, ordered by size then element set.
    pub fn all_subgroups(&self) -> Vec<FinSubgroup> {
        let cyclic = self.cyclic_subgroups();
        let bottom = self.trivial_subgroup();
        let mut seen: HashSet<FinSubgroup> = HashSet::from([bottom.clone()]);
        let mut queue = VecDeque::from([bottom]);
        while let Some(s) = queue.pop_front() {
            for (x, _) in &cyclic {
                if s.contains(*x) {
                    continue;
                }
                let t = self.join_element(&s, *x);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut all: Vec<FinSubgroup> = seen.into_iter().collect();
        all.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        all
    }

    /// Every character, ordered lexicographically by numerators.
    pub fn all_characters(&self) -> Vec<FinCharacter> {
        (0..self.size())
            .map(|x| FinCharacter {
                images: self.coords[x]
                    .iter()
                    .zip(&self.orders)
                    .map(|(&a, &n)| Ratio::new(a, n))
                    .collect(),
            })
            .collect()
    }

    fn character_kernel(&self, numerators: &[u64]) -> FinSubgroup {
        let l = self.orders.iter().fold(1u64, |acc, n| acc.lcm(n));
        let weights: Vec<u64> = numerators
            .iter()
            .zip(&self.orders)
            .map(|(a, n)| a * (l / n))
            .collect();
        FinSubgroup::from_indices(
            self.size(),
            (0..self.size()).filter(|&x| {
                self.coords[x]
                    .iter()
                    .zip(&weights)
                    .fold(0u64, |acc, (c, w)| (acc + c * w) % l)
                    == 0
            }),
        )
    }

    /// `ker χ`.
    pub fn kernel(&self, chi: &FinCharacter) -> FinSubgroup {
        let numerators: Vec<u64> = chi
            .images
            .iter()
            .zip(&self.orders)
            .map(|(r, n)| r.numer() * (n / r.denom()))
            .collect();
        self.character_kernel(&numerators)
    }

    /// For every subgroup that occurs as a kernel, the number of characters
    /// with exactly that kernel.
    pub fn kernel_fibers(&self) -> HashMap<FinSubgroup, u64> {
        let mut fibers = HashMap::new();
        for x in 0..self.size() {
            *fibers
                .entry(self.character_kernel(&self.coords[x]))
                .or_insert(0) += 1;
        }
        fibers
    }

    /// Number of characters `χ` with `ker χ = N`.
    pub fn kernel_fiber_count(&self, n: &FinSubgroup) -> Result<u64, FiniteError> {
        self.check_subgroup(n)?;
        Ok(self
            .all_characters()
            .iter()
            .filter(|chi| self.kernel(chi) == *n)
            .count() as u64)
    }

    /// Invariant factors (all `> 1`) of `G / N`.
    pub fn quotient_orders(&self, n: &FinSubgroup) -> Vec<u64> {
        let r = self.orders.len();
        let mut rows: Vec<Vec<BigInt>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| BigInt::from(if i == j { self.orders[i] } else { 0 }))
                    .collect()
            })
            .collect();
        for g in self.generators(n) {
            rows.push(self.coords[g].iter().map(|&c| BigInt::from(c)).collect());
        }
        smith(&IntMatrix::new(r, rows))
            .invariant_factors
            .into_iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .filter(|&d| d > 1)
            .collect()
    }

    /// `G / N` in invariant-factor form.
    pub fn quotient_structure(&self, n: &FinSubgroup) -> Result<FiniteGroup, FiniteError> {
        self.check_subgroup(n)?;
        FiniteGroup::new(&self.quotient_orders(n), u64::MAX)
    }

    /// Subgroups with cyclic quotient.
    pub fn cyclic_quotient_subgroups(&self) -> Vec<FinSubgroup> {
        self.all_subgroups()
            .into_iter()
            .filter(|n| self.quotient_orders(n).len() <= 1)
            .collect()
    }

    pub fn intersection(&self, a: &FinSubgroup, b: &FinSubgroup) -> FinSubgroup {
        FinSubgroup {
            len: a.len,
            words: a.words.iter().zip(&b.words).map(|(x, y)| x & y).collect(),
        }
    }

    pub fn elements(&self, s: &FinSubgroup) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = s.indices().map(|x| self.coords[x].clone()).collect();
        out.sort();
        out
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z({n})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FinSubgroup {
    fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> FinSubgroup {
        let mut s = FinSubgroup {
            len,
            words: vec![0; len.div_ceil(64)],
        };
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &FinSubgroup) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }

    /// `[G : N]`.
    pub fn index(&self) -> usize {
        self.len / self.count()
    }
}
