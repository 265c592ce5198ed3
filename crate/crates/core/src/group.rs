//! Symbolic abelian groups: formal direct sums of a closed family of atoms
//! with cardinal multiplicities.
//!
//! Every invariant is computed atomwise and combined with cardinal
//! arithmetic. Within this class the first Ulm subgroup coincides with the
//! divisible part, so `G / G¹` is obtained by dropping the divisible atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive};

use crate::arith;
use crate::cardinal::{sup, Cardinal};

/// Building blocks of a [`StructuredGroup`].
///
/// The derived order is the canonical rendering order:
/// `Z < Z(p^k) < Z(p^∞) < Q < J_p < T_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Infinite cyclic group.
    Z,
    /// Cyclic group of prime-power order `p^k`, `k ≥ 1`.
    Cyc { p: u64, k: u32 },
    /// Prüfer group `Z(p^∞)`.
    Prufer(u64),
    /// The rationals.
    Q,
    /// The `p`-adic integers `J_p`.
    PAdic(u64),
    /// `T_p`: the torsion subgroup of `∏_n Z(p^n)`.
    TorProd(u64),
}

/// Per-atom row of the invariant table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomRow {
    pub atom: Atom,
    pub size: Cardinal,
    pub rank0: Cardinal,
    /// The unique prime with non-zero `p`-rank, if any.
    pub rank_p: Option<(u64, Cardinal)>,
    /// Whether the atom equals its own first Ulm subgroup.
    pub ulm_is_whole: bool,
    pub divisible: bool,
}

impl AtomRow {
    /// `a / q·a` for a prime `q`.
    pub fn quotient_by_prime(&self, q: u64) -> StructuredGroup {
        self.atom.quotient_prime_power(q, 1)
    }
}

/// The invariant table row of a single atom.
pub fn atom_table(atom: Atom) -> AtomRow {
    AtomRow {
        atom,
        size: atom.size(),
        rank0: atom.rank0(),
        rank_p: atom.prime().and_then(|p| {
            let r = atom.rank_p(p);
            (!r.is_zero()).then_some((p, r))
        }),
        ulm_is_whole: atom.is_divisible(),
        divisible: atom.is_divisible(),
    }
}

impl Atom {
    pub fn prime(self) -> Option<u64> {
        match self {
            Atom::Z | Atom::Q => None,
            Atom::Cyc { p, .. } | Atom::Prufer(p) | Atom::PAdic(p) | Atom::TorProd(p) => Some(p),
        }
    }

    /// Order of a finite atom.
    pub fn order(self) -> Option<BigUint> {
        match self {
            Atom::Cyc { p, k } => Some(BigUint::from(p).pow(k)),
            _ => None,
        }
    }

    pub fn size(self) -> Cardinal {
        match self {
            Atom::Cyc { .. } => Cardinal::Finite(self.order().unwrap()),
            Atom::Z | Atom::Prufer(_) | Atom::Q => Cardinal::omega(),
            Atom::PAdic(_) | Atom::TorProd(_) => Cardinal::continuum(),
        }
    }

    pub fn rank0(self) -> Cardinal {
        match self {
            Atom::Z | Atom::Q => Cardinal::one(),
            Atom::PAdic(_) => Cardinal::continuum(),
            _ => Cardinal::zero(),
        }
    }

    /// `dim_{F_p} a[p]`.
    pub fn rank_p(self, p: u64) -> Cardinal {
        match self {
            Atom::Cyc { p: q, .. } | Atom::Prufer(q) if q == p => Cardinal::one(),
            Atom::TorProd(q) if q == p => Cardinal::continuum(),
            _ => Cardinal::zero(),
        }
    }

    pub fn is_divisible(self) -> bool {
        matches!(self, Atom::Q | Atom::Prufer(_))
    }

    pub fn is_torsion(self) -> bool {
        matches!(self, Atom::Cyc { .. } | Atom::Prufer(_) | Atom::TorProd(_))
    }

    /// Whether `a = p·a`.
    pub fn is_p_divisible(self, p: u64) -> bool {
        match self {
            Atom::Z => false,
            Atom::Q | Atom::Prufer(_) => true,
            Atom::Cyc { p: q, .. } | Atom::PAdic(q) | Atom::TorProd(q) => q != p,
        }
    }

    /// Whether the atom is its own `p`-Ulm subgroup `⋂_n p^n a`; otherwise
    /// that subgroup is 0.
    pub fn is_own_p_ulm(self, p: u64) -> bool {
        self.is_p_divisible(p)
    }

    /// `a / p^j a` for a prime `p` and `j ≥ 1`.
    pub fn quotient_prime_power(self, p: u64, j: u32) -> StructuredGroup {
        let mut out = StructuredGroup::zero();
        match self {
            Atom::Z => out.add_summand(Atom::Cyc { p, k: j }, Cardinal::one()),
            Atom::Cyc { p: q, k } if q == p => {
                out.add_summand(Atom::Cyc { p, k: k.min(j) }, Cardinal::one())
            }
            Atom::PAdic(q) if q == p => out.add_summand(Atom::Cyc { p, k: j }, Cardinal::one()),
            Atom::TorProd(q) if q == p => {
                // T_p = B + p^j T_p for the basic subgroup B = ⊕_n Z(p^n), so
                // T_p / p^j T_p ≅ B / p^j B.
                for i in 1..j {
                    out.add_summand(Atom::Cyc { p, k: i }, Cardinal::one());
                }
                out.add_summand(Atom::Cyc { p, k: j }, Cardinal::omega());
            }
            _ => {}
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Z => f.write_str("Z"),
            Atom::Cyc { .. } => write!(f, "Z({})", self.order().unwrap()),
            Atom::Prufer(p) => write!(f, "Z({p}^inf)"),
            Atom::Q => f.write_str("Q"),
            Atom::PAdic(p) => write!(f, "J({p})"),
            Atom::TorProd(p) => write!(f, "T({p})"),
        }
    }
}

/// A formal direct sum `⊕ atom^(multiplicity)`; the zero group is the empty sum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructuredGroup {
    summands: BTreeMap<Atom, Cardinal>,
}

/// Sizes of `G/pG` across all primes. Only finitely many values occur: one
/// per prime appearing in an atom, and a common shape for every other prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProfile {
    pub per_prime: BTreeMap<u64, Cardinal>,
    /// A prime not occurring in any atom, and `|G/qG|` there.
    pub generic_prime: u64,
    pub generic: Cardinal,
}

impl QuotientProfile {
    pub fn values(&self) -> impl Iterator<Item = (u64, &Cardinal)> {
        self.per_prime
            .iter()
            .map(|(p, c)| (*p, c))
            .chain(std::iter::once((self.generic_prime, &self.generic)))
    }

    pub fn all_finite(&self) -> bool {
        self.values().all(|(_, c)| c.is_finite())
    }

    /// `ω · sup_p |G/pG|`.
    pub fn omega_sup(&self) -> Cardinal {
        sup(std::iter::once(Cardinal::omega()).chain(self.values().map(|(_, c)| c.clone())))
    }

    /// `ω · sup_p 2^{|G/pG|}`; finite terms are absorbed by the `ω` factor and
    /// never materialised.
    pub fn omega_sup_exp(&self) -> Cardinal {
        sup(std::iter::once(Cardinal::omega()).chain(
            self.values()
                .filter(|(_, c)| c.is_infinite())
                .map(|(_, c)| c.exp2()),
        ))
    }
}

/// All invariants consumed by the classification and topology modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsRecord {
    group: StructuredGroup,
    pub size: Cardinal,
    pub rank0: Cardinal,
    /// Non-zero `p`-ranks.
    pub rank_p: BTreeMap<u64, Cardinal>,
    pub ulm: StructuredGroup,
    /// `G¹_p` for every prime occurring in `G`; for any other prime `q`,
    /// `G¹_q` is `G` with its `Z` summands removed.
    pub ulm_p: BTreeMap<u64, StructuredGroup>,
    pub divisible_part: StructuredGroup,
    pub torsion_part: StructuredGroup,
    pub exponent: Option<BigUint>,
}

impl InvariantsRecord {
    /// `G / mG`.
    pub fn quotient_mod(&self, m: u64) -> StructuredGroup {
        self.group.quotient_mod(m)
    }

    pub fn group(&self) -> &StructuredGroup {
        &self.group
    }
}

impl StructuredGroup {
    pub fn zero() -> StructuredGroup {
        StructuredGroup::default()
    }

    pub fn from_summands<I: IntoIterator<Item = (Atom, Cardinal)>>(items: I) -> StructuredGroup {
        let mut g = StructuredGroup::zero();
        for (atom, mult) in items {
            g.add_summand(atom, mult);
        }
        g
    }

    pub fn atom(atom: Atom) -> StructuredGroup {
        StructuredGroup::from_summands([(atom, Cardinal::one())])
    }

    /// Add `atom^(mult)`; a zero multiplicity is ignored.
    pub fn add_summand(&mut self, atom: Atom, mult: Cardinal) {
        if mult.is_zero() {
            return;
        }
        let merged = match self.summands.remove(&atom) {
            Some(existing) => existing.add(&mult),
            None => mult,
        };
        self.summands.insert(atom, merged);
    }

    pub fn summands(&self) -> impl Iterator<Item = (&Atom, &Cardinal)> {
        self.summands.iter()
    }

    pub fn multiplicity(&self, atom: &Atom) -> Cardinal {
        self.summands
            .get(atom)
            .cloned()
            .unwrap_or_else(Cardinal::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn direct_sum(&self, other: &StructuredGroup) -> StructuredGroup {
        let mut out = self.clone();
        for (atom, mult) in other.summands() {
            out.add_summand(*atom, mult.clone());
        }
        out
    }

    /// `G^(κ)`.
    pub fn power(&self, mult: &Cardinal) -> StructuredGroup {
        StructuredGroup::from_summands(self.summands().map(|(a, m)| (*a, m.mul(mult))))
    }

    fn filter(&self, keep: impl Fn(Atom) -> bool) -> StructuredGroup {
        StructuredGroup {
            summands: self
                .summands
                .iter()
                .filter(|(a, _)| keep(**a))
                .map(|(a, m)| (*a, m.clone()))
                .collect(),
        }
    }

    /// Primes occurring in some atom.
    pub fn primes(&self) -> BTreeSet<u64> {
        self.summands.keys().filter_map(|a| a.prime()).collect()
    }

    /// `|G|`.
    pub fn size(&self) -> Cardinal {
        self.summands
            .iter()
            .map(|(atom, mult)| match (atom.order(), mult.as_finite()) {
                (Some(order), Some(n)) => {
                    let n = n.to_u32().expect("finite multiplicity fits in u32");
                    Cardinal::Finite(order.pow(n))
                }
                (None, Some(_)) => atom.size(),
                _ => mult.mul(&atom.size()),
            })
            .fold(Cardinal::one(), |acc, c| acc.mul(&c))
    }

    pub fn is_finite(&self) -> bool {
        self.summands
            .iter()
            .all(|(a, m)| matches!(a, Atom::Cyc { .. }) && m.is_finite())
    }

    pub fn rank0(&self) -> Cardinal {
        self.summands
            .iter()
            .fold(Cardinal::zero(), |acc, (a, m)| acc.add(&m.mul(&a.rank0())))
    }

    pub fn rank_p(&self, p: u64) -> Cardinal {
        self.summands.iter().fold(Cardinal::zero(), |acc, (a, m)| {
            acc.add(&m.mul(&a.rank_p(p)))
        })
    }

    /// `G / p^j G`.
    pub fn quotient_prime_power(&self, p: u64, j: u32) -> StructuredGroup {
        self.summands
            .iter()
            .map(|(a, m)| a.quotient_prime_power(p, j).power(m))
            .fold(StructuredGroup::zero(), |acc, q| acc.direct_sum(&q))
    }

    /// `G / mG`, assembled from the prime-power quotients of `m`.
    pub fn quotient_mod(&self, m: u64) -> StructuredGroup {
        assert!(m >= 1, "quotient by 0");
        arith::factorize(m)
            .into_iter()
            .map(|(p, j)| self.quotient_prime_power(p, j))
            .fold(StructuredGroup::zero(), |acc, q| acc.direct_sum(&q))
    }

    pub fn quotient_profile(&self) -> QuotientProfile {
        let primes: Vec<u64> = self.primes().into_iter().collect();
        let generic_prime = arith::smallest_prime_not_in(&primes);
        QuotientProfile {
            per_prime: primes
                .iter()
                .map(|&p| (p, self.quotient_prime_power(p, 1).size()))
                .collect(),
            generic_prime,
            generic: self.quotient_prime_power(generic_prime, 1).size(),
        }
    }

    /// First Ulm subgroup `G¹ = ⋂_m mG`.
    pub fn ulm(&self) -> StructuredGroup {
        self.filter(Atom::is_divisible)
    }

    /// `G¹_p = ⋂_n p^n G`.
    pub fn ulm_p(&self, p: u64) -> StructuredGroup {
        self.filter(|a| a.is_own_p_ulm(p))
    }

    pub fn divisible_part(&self) -> StructuredGroup {
        self.filter(Atom::is_divisible)
    }

    pub fn torsion_part(&self) -> StructuredGroup {
        self.filter(Atom::is_torsion)
    }

    /// `G / G¹`.
    pub fn hausdorff_reflection(&self) -> StructuredGroup {
        self.filter(|a| !a.is_divisible())
    }

    /// `G / G¹_p`.
    pub fn p_reflection(&self, p: u64) -> StructuredGroup {
        self.filter(|a| !a.is_own_p_ulm(p))
    }

    /// Least `n` with `nG = 0`, if `G` is bounded.
    pub fn exponent(&self) -> Option<BigUint> {
        self.summands
            .keys()
            .try_fold(BigUint::one(), |acc, a| match a {
                Atom::Cyc { .. } => Some(acc.lcm(&a.order().unwrap())),
                _ => None,
            })
    }

    /// For finite groups: the prime-power cyclic orders, one per summand copy.
    pub fn finite_orders(&self) -> Option<Vec<u64>> {
        if !self.is_finite() {
            return None;
        }
        let mut orders = Vec::new();
        for (a, m) in &self.summands {
            let order = a.order()?.to_u64()?;
            let copies = m.as_u64()?;
            orders.extend(std::iter::repeat_n(order, copies as usize));
        }
        Some(orders)
    }

    pub fn invariants(&self) -> InvariantsRecord {
        let rank_p = self
            .primes()
            .into_iter()
            .map(|p| (p, self.rank_p(p)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        InvariantsRecord {
            group: self.clone(),
            size: self.size(),
            rank0: self.rank0(),
            rank_p,
            ulm: self.ulm(),
            ulm_p: self
                .primes()
                .into_iter()
                .map(|p| (p, self.ulm_p(p)))
                .collect(),
            divisible_part: self.divisible_part(),
            torsion_part: self.torsion_part(),
            exponent: self.exponent(),
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StructuredGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        for (i, (atom, mult)) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{atom}")?;
            match mult {
                m if *m == Cardinal::one() => {}
                Cardinal::Finite(n) => write!(f, "^{n}")?,
                m => write!(f, "^({m})")?,
            }
        }
        Ok(())
    }
}

/// Shorthand for `G ⊕ H`.
pub fn direct_sum(g: &StructuredGroup, h: &StructuredGroup) -> StructuredGroup {
    g.direct_sum(h)
}
