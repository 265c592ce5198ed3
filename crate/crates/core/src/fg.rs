//! Finitely generated abelian groups `Z^n ⊕ Z(t_1) ⊕ … ⊕ Z(t_k)`.
//!
//! `G` is presented as `Z^N / R` with `N = n + k` and `R` spanned by the rows
//! `t_i e_{n+i}`. A subgroup `H ≤ G` is stored as its full preimage
//! `L ⊇ R` in `Z^N`, in Hermite normal form; two subgroups are equal iff
//! their lattices are.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::finite::{FinSubgroup, FiniteError, FiniteGroup, DEFAULT_CAP};
use crate::group::{Atom, StructuredGroup};
use crate::intmat::{hnf, smith, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FgError {
    #[error("expected vectors of length {expected}, got {got}")]
    WrongWidth { expected: usize, got: usize },
    #[error("enumeration would visit {needed} candidate lattices, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("the subgroup is the whole group; no proper enclosing subgroup exists")]
    NoProperEnclosure,
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error(transparent)]
    Finite(#[from] FiniteError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgGroup {
    pub free_rank: usize,
    pub torsion_orders: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgSubgroup {
    lattice: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexValue {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Finite(n) => write!(f, "{n}"),
            IndexValue::Infinite => f.write_str("infinite"),
        }
    }
}

/// `G / H` as `Z^free ⊕ ⊕ Z(d_i)` together with the coordinate change.
struct QuotientCoords {
    /// Diagonal of the Smith form of `L`, one entry per row of `L`.
    diag: Vec<BigInt>,
    v_inv: IntMatrix,
}

fn contains_vector(lattice: &IntMatrix, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in lattice.rows() {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let (q, r) = v[c].div_mod_floor(&row[c]);
        if !r.is_zero() {
            return false;
        }
        if !q.is_zero() {
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
    }
    v.iter().all(Zero::is_zero)
}

impl FgGroup {
    pub fn new(free_rank: usize, torsion_orders: &[u64]) -> Result<FgGroup, FgError> {
        if let Some(&bad) = torsion_orders.iter().find(|&&t| t < 2) {
            return Err(FiniteError::InvalidOrder(bad).into());
        }
        let size = torsion_orders
            .iter()
            .try_fold(1u128, |acc, &t| acc.checked_mul(t as u128));
        match size {
            Some(s) if s <= DEFAULT_CAP as u128 => {}
            other => {
                return Err(FiniteError::CapExceeded {
                    size: other.unwrap_or(u128::MAX),
                    cap: DEFAULT_CAP,
                }
                .into())
            }
        }
        Ok(FgGroup {
            free_rank,
            torsion_orders: torsion_orders.to_vec(),
        })
    }

    pub fn free(n: usize) -> FgGroup {
        FgGroup {
            free_rank: n,
            torsion_orders: Vec::new(),
        }
    }

    /// The finitely generated group with the same atoms, if `g` is one.
    pub fn from_structured(g: &StructuredGroup) -> Option<FgGroup> {
        let mut free_rank = 0;
        let mut torsion = Vec::new();
        for (atom, mult) in g.summands() {
            let copies = mult.as_u64()? as usize;
            match atom {
                Atom::Z => free_rank += copies,
                Atom::Cyc { .. } => {
                    torsion.extend(std::iter::repeat_n(atom.order()?.to_u64()?, copies))
                }
                _ => return None,
            }
        }
        FgGroup::new(free_rank, &torsion).ok()
    }

    /// Number of coordinates `N` of the ambient lattice.
    pub fn width(&self) -> usize {
        self.free_rank + self.torsion_orders.len()
    }

    fn relations(&self) -> IntMatrix {
        let n = self.width();
        let rows = self
            .torsion_orders
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut r = vec![BigInt::zero(); n];
                r[self.free_rank + i] = BigInt::from(t);
                r
            })
            .collect();
        IntMatrix::new(n, rows)
    }

    fn lattice_of(&self, m: &IntMatrix) -> FgSubgroup {
        FgSubgroup {
            lattice: hnf(&m.stack(&self.relations())),
        }
    }

    /// The subgroup generated by the rows of `gens`.
    pub fn subgroup(&self, gens: &IntMatrix) -> Result<FgSubgroup, FgError> {
        if gens.ncols() != self.width() {
            return Err(FgError::WrongWidth {
                expected: self.width(),
                got: gens.ncols(),
            });
        }
        Ok(self.lattice_of(gens))
    }

    pub fn subgroup_i64(&self, gens: &[Vec<i64>]) -> Result<FgSubgroup, FgError> {
        if let Some(bad) = gens.iter().find(|r| r.len() != self.width()) {
            return Err(FgError::WrongWidth {
                expected: self.width(),
                got: bad.len(),
            });
        }
        self.subgroup(&IntMatrix::from_i64(self.width(), gens))
    }

    pub fn whole(&self) -> FgSubgroup {
        self.lattice_of(&IntMatrix::identity(self.width()))
    }

    pub fn zero(&self) -> FgSubgroup {
        self.lattice_of(&IntMatrix::zeros(0, self.width()))
    }

    /// `mG`.
    pub fn multiple(&self, m: u64) -> FgSubgroup {
        let n = self.width();
        let diag = vec![BigInt::from(m); n];
        self.lattice_of(&IntMatrix::diagonal(&diag))
    }

    pub fn sum(&self, a: &FgSubgroup, b: &FgSubgroup) -> FgSubgroup {
        FgSubgroup {
            lattice: hnf(&a.lattice.stack(&b.lattice)),
        }
    }

    /// Whether `x ∈ H` for a coordinate vector `x` of `G`.
    pub fn contains_element(&self, h: &FgSubgroup, x: &[BigInt]) -> bool {
        x.len() == self.width() && contains_vector(&h.lattice, x)
    }

    /// `K ⊆ H`.
    pub fn is_subgroup_of(&self, k: &FgSubgroup, h: &FgSubgroup) -> bool {
        k.lattice
            .rows()
            .iter()
            .all(|r| contains_vector(&h.lattice, r))
    }

    fn quotient_coords(&self, h: &FgSubgroup) -> QuotientCoords {
        let s = smith(&h.lattice);
        let diag = (0..h.lattice.nrows())
            .map(|i| s.diagonal.get(i, i).clone())
            .collect();
        QuotientCoords {
            diag,
            v_inv: s.v_inv,
        }
    }

    /// `G / H` as `(free rank, invariant factors > 1)`.
    pub fn quotient(&self, h: &FgSubgroup) -> (usize, Vec<BigInt>) {
        let q = self.quotient_coords(h);
        let torsion = q.diag.into_iter().filter(|d| !d.is_one()).collect();
        (self.width() - h.lattice.nrows(), torsion)
    }

    /// `[G : H]`.
    pub fn index(&self, h: &FgSubgroup) -> IndexValue {
        let (free, torsion) = self.quotient(h);
        if free > 0 {
            IndexValue::Infinite
        } else {
            IndexValue::Finite(torsion.iter().product())
        }
    }

    /// `⋂_m (H + mG)`, evaluated in Smith coordinates of `G/H`.
    ///
    /// On a cyclic factor `Z(d)` the images of `m(G/H)` for `m = 1!, 2!, …`
    /// decrease to `0` once `d | m`; on a free factor `Z` no non-zero
    /// coordinate survives every `mZ`. The closure is the preimage of the
    /// stabilised intersection.
    pub fn nu_closure(&self, h: &FgSubgroup) -> FgSubgroup {
        let q = self.quotient_coords(h);
        let mut m = BigInt::one();
        let mut j = 1u32;
        let mut current: Vec<BigInt> = q.diag.iter().map(|d| m.gcd(d)).collect();
        loop {
            j += 1;
            m *= j;
            let next: Vec<BigInt> = q.diag.iter().map(|d| m.gcd(d)).collect();
            let stable = next == current && q.diag.iter().all(|d| m.is_multiple_of(d));
            current = next;
            if stable {
                break;
            }
        }
        let n = self.width();
        let mut gens = h.lattice.clone();
        for (i, c) in current.iter().enumerate() {
            let mut y = vec![BigInt::zero(); n];
            y[i] = c.clone();
            gens.push_row(crate::intmat::vec_mat(&y, &q.v_inv));
        }
        FgSubgroup {
            lattice: hnf(&gens),
        }
    }

    /// A finite-index `N` with `H ⊆ N ⊊ G`, namely `H + pG` for the least
    /// prime `p` with `H + pG ≠ G`.
    pub fn enclosing_finite_index(&self, h: &FgSubgroup) -> Result<FgSubgroup, FgError> {
        let (free, torsion) = self.quotient(h);
        if free == 0 && torsion.is_empty() {
            return Err(FgError::NoProperEnclosure);
        }
        let p = if free > 0 {
            2
        } else {
            (2u64..)
                .filter(|&p| arith::is_prime(p))
                .find(|&p| torsion.iter().any(|d| d.is_multiple_of(&BigInt::from(p))))
                .unwrap()
        };
        Ok(self.sum(h, &self.multiple(p)))
    }

    /// Number of candidate lattices scanned by [`FgGroup::enumerate_finite_index`].
    pub fn enumeration_cost(&self, m: u64) -> u128 {
        fn go(divs: &[u64], rest: u64, col: u32, cols: u32) -> u128 {
            if col == cols {
                return (rest == 1) as u128;
            }
            divs.iter()
                .filter(|&&a| rest.is_multiple_of(a))
                .map(|&a| {
                    (a as u128).saturating_pow(col).saturating_mul(go(
                        divs,
                        rest / a,
                        col + 1,
                        cols,
                    ))
                })
                .fold(0u128, |acc, x| acc.saturating_add(x))
        }
        go(&arith::divisors(m), m, 0, self.width() as u32)
    }

    /// All subgroups of index exactly `m`, in lattice order.
    ///
    /// Full-rank row-HNF lattices of determinant `m` in `Z^N` are generated
    /// directly (pivots `a_j` with `∏ a_j = m`, entries above pivot `j` in
    /// `[0, a_j)`); those containing the relation lattice are kept.
    pub fn enumerate_finite_index(&self, m: u64, budget: u128) -> Result<Vec<FgSubgroup>, FgError> {
        if m == 0 {
            return Err(FgError::ZeroIndex);
        }
        let needed = self.enumeration_cost(m);
        if needed > budget {
            return Err(FgError::BudgetExceeded { needed, budget });
        }
        let n = self.width();
        let relations = self.relations();
        let divisors = arith::divisors(m);
        let mut out = Vec::new();
        let mut pivots = Vec::with_capacity(n);
        self.pivot_profiles(&divisors, m, &mut pivots, &mut |pivots| {
            let mut rows = vec![vec![BigInt::zero(); n]; n];
            for (i, a) in pivots.iter().enumerate() {
                rows[i][i] = BigInt::from(*a);
            }
            let slots: Vec<(usize, usize)> =
                (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
            fill(&slots, 0, pivots, &mut rows, &mut |rows| {
                let lattice = IntMatrix::new(n, rows.to_vec());
                if relations
                    .rows()
                    .iter()
                    .all(|r| contains_vector(&lattice, r))
                {
                    out.push(FgSubgroup { lattice });
                }
            });
        });
        out.sort();
        Ok(out)
    }

    fn pivot_profiles(
        &self,
        divisors: &[u64],
        rest: u64,
        prefix: &mut Vec<u64>,
        f: &mut impl FnMut(&[u64]),
    ) {
        if prefix.len() == self.width() {
            if rest == 1 {
                f(prefix);
            }
            return;
        }
        for &a in divisors.iter().filter(|&&a| rest.is_multiple_of(a)) {
            prefix.push(a);
            self.pivot_profiles(divisors, rest / a, prefix, f);
            prefix.pop();
        }
    }

    pub fn torsion_group(&self) -> FiniteGroup {
        FiniteGroup::new(&self.torsion_orders, DEFAULT_CAP).expect("torsion part within cap")
    }

    /// The subgroup `N ≤ t(G)` as an `FgSubgroup` of `G`.
    pub fn from_torsion_subgroup(&self, t: &FiniteGroup, n: &FinSubgroup) -> FgSubgroup {
        let rows = t
            .generators(n)
            .into_iter()
            .map(|g| {
                let mut r = vec![BigInt::zero(); self.free_rank];
                r.extend(t.coords(g).iter().map(|&c| BigInt::from(c)));
                r
            })
            .collect();
        self.lattice_of(&IntMatrix::new(self.width(), rows))
    }

    /// `H ∩ t(G)` as a subgroup of the torsion group.
    pub fn torsion_part(&self, h: &FgSubgroup) -> FinSubgroup {
        let t = self.torsion_group();
        let gens: Vec<usize> = h
            .pivot_rows(self.free_rank, true)
            .map(|r| {
                let c: Vec<u64> = r[self.free_rank..]
                    .iter()
                    .zip(&self.torsion_orders)
                    .map(|(x, &o)| x.mod_floor(&BigInt::from(o)).to_u64().unwrap())
                    .collect();
                t.index_of(&c)
            })
            .collect();
        t.generated_by(&gens)
    }

    /// Image of `H` in `Z^n`, in Hermite normal form.
    pub fn free_part(&self, h: &FgSubgroup) -> IntMatrix {
        let rows = h
            .pivot_rows(self.free_rank, false)
            .map(|r| r[..self.free_rank].to_vec())
            .collect();
        IntMatrix::new(self.free_rank, rows)
    }

    /// For each row of [`FgGroup::free_part`], the torsion coordinates of its
    /// chosen lift, reduced modulo the cyclic orders.
    pub fn mixing_part(&self, h: &FgSubgroup) -> Vec<Vec<u64>> {
        h.pivot_rows(self.free_rank, false)
            .map(|r| {
                r[self.free_rank..]
                    .iter()
                    .zip(&self.torsion_orders)
                    .map(|(x, &o)| x.mod_floor(&BigInt::from(o)).to_u64().unwrap())
                    .collect()
            })
            .collect()
    }
}

fn fill(
    slots: &[(usize, usize)],
    at: usize,
    pivots: &[u64],
    rows: &mut Vec<Vec<BigInt>>,
    f: &mut impl FnMut(&[Vec<BigInt>]),
) {
    if at == slots.len() {
        f(rows);
        return;
    }
    let (i, j) = slots[at];
    for x in 0..pivots[j] {
        rows[i][j] = BigInt::from(x);
        fill(slots, at + 1, pivots, rows, f);
    }
    rows[i][j] = BigInt::zero();
}

impl FgSubgroup {
    /// Hermite basis of the preimage lattice.
    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    /// Rows whose pivot lies in the free block (`torsion = false`) or in the
    /// torsion block (`torsion = true`).
    fn pivot_rows(&self, free_rank: usize, torsion: bool) -> impl Iterator<Item = &Vec<BigInt>> {
        self.lattice.rows().iter().filter(move |r| {
            let pivot = r.iter().position(|x| !x.is_zero()).unwrap_or(0);
            (pivot >= free_rank) == torsion
        })
    }

    /// Generators with torsion coordinates reduced and relation rows dropped.
    pub fn generators(&self, g: &FgGroup) -> Vec<Vec<BigInt>> {
        self.lattice
            .rows()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                for (x, &o) in r[g.free_rank..].iter_mut().zip(&g.torsion_orders) {
                    *x = x.mod_floor(&BigInt::from(o));
                }
                r
            })
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect()
    }

    pub fn render(&self, g: &FgGroup) -> String {
        let gens = self.generators(g);
        if gens.is_empty() {
            return "0".into();
        }
        IntMatrix::new(g.width(), gens).to_string()
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.torsion_orders.iter().map(|t| format!("Z({t})")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
