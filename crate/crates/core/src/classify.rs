//! Membership tests for group classes, equalizers of functorial topologies,
//! and Hausdorff classes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith;
use crate::cardinal::{cmp, Cardinal, CardinalMode, Ordering};
use crate::fg::{FgGroup, FgSubgroup};
use crate::group::{Atom, StructuredGroup};
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopologyName {
    Gamma,
    Nu,
    Bohr,
    GammaP(u64),
    NuP(u64),
    BohrP(u64),
    Discrete,
    Indiscrete,
    ProCountable,
    AlephBounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupClass {
    Divisible,
    Bounded,
    /// Bounded `p`-groups.
    BoundedP(u64),
    Finite,
    /// Finite `p`-groups.
    FiniteP(u64),
    Countable,
    /// Torsion groups without non-zero `p`-torsion.
    TorsionNoP(u64),
    ResiduallyFinite,
    ResiduallyPFinite(u64),
    Narrow,
    NarrowP(u64),
    AlmostDivisible,
    StronglyNonDivisible,
    PDivisible(u64),
    Zero,
    FiniteRankFree,
    /// Groups admitting no surjection onto `Z(p^∞)`.
    NoPruferQuotient(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unknown topology `{0}`")]
    UnknownTopology(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the Hausdorff class of {0} is not supported")]
    UnsupportedHausdorff(TopologyName),
    #[error("{0} is not a discrete class usable as a topology base")]
    NotDiscreteClass(GroupClass),
}

fn parse_prime(
    name: &str,
    text: &str,
    err: fn(String) -> ClassifyError,
) -> Result<u64, ClassifyError> {
    let p: u64 = text.parse().map_err(|_| err(name.to_string()))?;
    if !arith::is_prime(p) {
        return Err(ClassifyError::NotPrime(p));
    }
    Ok(p)
}

impl TopologyName {
    pub fn prime(self) -> Option<u64> {
        match self {
            TopologyName::GammaP(p) | TopologyName::NuP(p) | TopologyName::BohrP(p) => Some(p),
            _ => None,
        }
    }

    pub const GLOBAL: [TopologyName; 7] = [
        TopologyName::Gamma,
        TopologyName::Nu,
        TopologyName::Bohr,
        TopologyName::Discrete,
        TopologyName::Indiscrete,
        TopologyName::ProCountable,
        TopologyName::AlephBounded,
    ];

    pub fn local(p: u64) -> [TopologyName; 3] {
        [
            TopologyName::GammaP(p),
            TopologyName::NuP(p),
            TopologyName::BohrP(p),
        ]
    }
}

impl fmt::Display for TopologyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyName::Gamma => f.write_str("gamma"),
            TopologyName::Nu => f.write_str("nu"),
            TopologyName::Bohr => f.write_str("bohr"),
            TopologyName::GammaP(p) => write!(f, "gamma_p:{p}"),
            TopologyName::NuP(p) => write!(f, "nu_p:{p}"),
            TopologyName::BohrP(p) => write!(f, "bohr_p:{p}"),
            TopologyName::Discrete => f.write_str("discrete"),
            TopologyName::Indiscrete => f.write_str("indiscrete"),
            TopologyName::ProCountable => f.write_str("rho"),
            TopologyName::AlephBounded => f.write_str("gbound"),
        }
    }
}

impl FromStr for TopologyName {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = ClassifyError::UnknownTopology;
        if let Some((head, p)) = s.split_once(':') {
            let p = parse_prime(s, p, unknown)?;
            return match head {
                "gamma_p" => Ok(TopologyName::GammaP(p)),
                "nu_p" => Ok(TopologyName::NuP(p)),
                "bohr_p" => Ok(TopologyName::BohrP(p)),
                _ => Err(unknown(s.to_string())),
            };
        }
        match s {
            "gamma" => Ok(TopologyName::Gamma),
            "nu" => Ok(TopologyName::Nu),
            "bohr" => Ok(TopologyName::Bohr),
            "discrete" => Ok(TopologyName::Discrete),
            "indiscrete" => Ok(TopologyName::Indiscrete),
            "rho" => Ok(TopologyName::ProCountable),
            "gbound" => Ok(TopologyName::AlephBounded),
            _ => Err(unknown(s.to_string())),
        }
    }
}

impl GroupClass {
    pub fn all(p: u64) -> Vec<GroupClass> {
        use GroupClass::*;
        vec![
            Divisible,
            Bounded,
            BoundedP(p),
            Finite,
            FiniteP(p),
            Countable,
            TorsionNoP(p),
            ResiduallyFinite,
            ResiduallyPFinite(p),
            Narrow,
            NarrowP(p),
            AlmostDivisible,
            StronglyNonDivisible,
            PDivisible(p),
            Zero,
            FiniteRankFree,
            NoPruferQuotient(p),
        ]
    }

    fn name_and_prime(self) -> (&'static str, Option<u64>) {
        use GroupClass::*;
        match self {
            Divisible => ("divisible", None),
            Bounded => ("bounded", None),
            BoundedP(p) => ("bounded_p", Some(p)),
            Finite => ("finite", None),
            FiniteP(p) => ("finite_p", Some(p)),
            Countable => ("countable", None),
            TorsionNoP(p) => ("torsion_no_p", Some(p)),
            ResiduallyFinite => ("residually_finite", None),
            ResiduallyPFinite(p) => ("residually_p_finite", Some(p)),
            Narrow => ("narrow", None),
            NarrowP(p) => ("narrow_p", Some(p)),
            AlmostDivisible => ("almost_divisible", None),
            StronglyNonDivisible => ("strongly_non_divisible", None),
            PDivisible(p) => ("p_divisible", Some(p)),
            Zero => ("zero", None),
            FiniteRankFree => ("finite_rank_free", None),
            NoPruferQuotient(p) => ("no_prufer_quotient", Some(p)),
        }
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name_and_prime() {
            (name, None) => f.write_str(name),
            (name, Some(p)) => write!(f, "{name}:{p}"),
        }
    }
}

impl FromStr for GroupClass {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = ClassifyError::UnknownClass;
        let (head, p) = match s.split_once(':') {
            Some((head, p)) => (head, Some(parse_prime(s, p, unknown)?)),
            None => (s, None),
        };
        GroupClass::all(p.unwrap_or(2))
            .into_iter()
            .find(|c| {
                let (name, q) = c.name_and_prime();
                name == head && q.is_some() == p.is_some()
            })
            .ok_or_else(|| unknown(s.to_string()))
    }
}

fn only_atoms(g: &StructuredGroup, allowed: impl Fn(&Atom) -> bool) -> bool {
    g.summands().all(|(a, _)| allowed(a))
}

/// Decide `G ∈ c`.
pub fn is_in_class(g: &StructuredGroup, c: GroupClass) -> Verdict {
    use GroupClass::*;
    let v = match c {
        Divisible => only_atoms(g, |a| a.is_divisible()),
        Bounded => g.exponent().is_some(),
        BoundedP(p) => {
            g.exponent().is_some()
                && only_atoms(g, |a| matches!(a, Atom::Cyc { p: q, .. } if *q == p))
        }
        Finite => g.is_finite(),
        FiniteP(p) => {
            g.is_finite() && only_atoms(g, |a| matches!(a, Atom::Cyc { p: q, .. } if *q == p))
        }
        Countable => {
            return match cmp(&g.size(), &Cardinal::omega(), CardinalMode::Zfc) {
                Ordering::Lt | Ordering::Eq => Verdict::True,
                Ordering::Gt => Verdict::False,
                Ordering::Unknown => Verdict::Unknown,
            }
        }
        TorsionNoP(p) => only_atoms(g, |a| a.is_torsion()) && g.rank_p(p).is_zero(),
        ResiduallyFinite => g.ulm().is_zero(),
        ResiduallyPFinite(p) => g.ulm_p(p).is_zero(),
        Narrow => g.quotient_profile().all_finite(),
        NarrowP(p) => g.quotient_prime_power(p, 1).size().is_finite(),
        AlmostDivisible => g.hausdorff_reflection().is_finite(),
        StronglyNonDivisible => {
            g.multiplicity(&Atom::Z).is_finite()
                && only_atoms(g, |a| matches!(a, Atom::Z | Atom::Cyc { .. }))
        }
        PDivisible(p) => g.quotient_prime_power(p, 1).is_zero(),
        Zero => g.is_zero(),
        FiniteRankFree => g.multiplicity(&Atom::Z).is_finite() && only_atoms(g, |a| *a == Atom::Z),
        NoPruferQuotient(p) => {
            g.multiplicity(&Atom::Z).is_finite()
                && only_atoms(g, |a| match a {
                    Atom::Z => true,
                    Atom::Cyc { .. } => true,
                    Atom::Prufer(q) | Atom::TorProd(q) => *q != p,
                    Atom::Q | Atom::PAdic(_) => false,
                })
        }
    };
    Verdict::from(v)
}

/// How membership in `E(T, S)` is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqualizerRule {
    /// `T = S`: every group.
    Reflexive,
    /// Conjunction of class memberships.
    Classes(Vec<GroupClass>),
    /// Not settled; the string explains why.
    Open(String),
}

/// The class test backing `E(T, S)`.
pub fn equalizer_rule(t: TopologyName, s: TopologyName) -> EqualizerRule {
    use GroupClass::*;
    use TopologyName::*;
    if t == s {
        return EqualizerRule::Reflexive;
    }
    if let (Some(p), Some(q)) = (t.prime(), s.prime()) {
        if p != q {
            return EqualizerRule::Open(format!(
                "{t} and {s} are localised at different primes; no characterisation is known"
            ));
        }
    }
    let (a, b) = if t <= s { (t, s) } else { (s, t) };
    let classes = match (a, b) {
        (Gamma, Nu) => vec![Narrow],
        // ν = P forces γ = inf(ν, P) = P, so G is bounded, and then ν is
        // discrete, so P is discrete and G is finite.
        (Nu, Bohr) => vec![Finite],
        (Gamma, Bohr) => vec![Bounded],
        (Nu, Discrete) => vec![Bounded],
        (Gamma, Discrete) | (Bohr, Discrete) => vec![Finite],
        (Gamma, Indiscrete) | (Nu, Indiscrete) => vec![Divisible],
        (Discrete, Indiscrete) => vec![Zero],
        (Indiscrete, ProCountable) | (Indiscrete, AlephBounded) => vec![Zero],
        (Discrete, ProCountable) | (Discrete, AlephBounded) => vec![Countable],
        (NuP(p), Discrete) => vec![BoundedP(p)],
        (GammaP(p), Discrete) | (BohrP(p), Discrete) => vec![FiniteP(p)],
        (Bohr, GammaP(p)) => vec![BoundedP(p)],
        (GammaP(p), NuP(_)) => vec![NarrowP(p)],
        // Both topologies are initial for the maps onto finite quotients
        // unless some character onto Z(p^∞) exists.
        (GammaP(p), BohrP(_)) => vec![NoPruferQuotient(p)],
        (NuP(p), BohrP(_)) => vec![NarrowP(p), NoPruferQuotient(p)],
        (GammaP(p), Indiscrete) | (NuP(p), Indiscrete) => vec![PDivisible(p)],
        (BohrP(p), Indiscrete) => vec![TorsionNoP(p)],
        (ProCountable, AlephBounded) => {
            return EqualizerRule::Open(
                "the relation between the pro-countable and the maximal aleph0-bounded topology is an open problem"
                    .into(),
            )
        }
        _ => return EqualizerRule::Open(format!("no characterisation of E({a}, {b}) is known")),
    };
    EqualizerRule::Classes(classes)
}

/// Decide `G ∈ E(T, S)`.
pub fn equalizer_member(t: TopologyName, s: TopologyName, g: &StructuredGroup) -> Verdict {
    match equalizer_rule(t, s) {
        EqualizerRule::Reflexive => Verdict::True,
        EqualizerRule::Classes(cs) => cs
            .into_iter()
            .fold(Verdict::True, |acc, c| acc.and(is_in_class(g, c))),
        EqualizerRule::Open(_) => Verdict::Unknown,
    }
}

/// Decide whether `(G, T_G)` is Hausdorff.
pub fn hausdorff_class_member(
    t: TopologyName,
    g: &StructuredGroup,
) -> Result<Verdict, ClassifyError> {
    match t {
        TopologyName::Bohr | TopologyName::ProCountable | TopologyName::AlephBounded => {
            Ok(Verdict::True)
        }
        TopologyName::Gamma | TopologyName::Nu => Ok(is_in_class(g, GroupClass::ResiduallyFinite)),
        TopologyName::GammaP(p) | TopologyName::NuP(p) => {
            Ok(is_in_class(g, GroupClass::ResiduallyPFinite(p)))
        }
        other => Err(ClassifyError::UnsupportedHausdorff(other)),
    }
}

fn is_power_of(d: &BigInt, p: u64) -> bool {
    let p = BigInt::from(p);
    let mut d = d.clone();
    while (&d % &p).is_zero() {
        d /= &p;
    }
    d.is_one()
}

/// Whether `N` belongs to the base `{N ≤ G : G/N ∈ c}` of the linear
/// topology induced by a discrete class `c`.
pub fn class_topology_base_member(
    c: GroupClass,
    g: &FgGroup,
    n: &FgSubgroup,
) -> Result<bool, ClassifyError> {
    let (free, torsion) = g.quotient(n);
    match c {
        GroupClass::Finite | GroupClass::Bounded => Ok(free == 0),
        GroupClass::FiniteP(p) | GroupClass::BoundedP(p) => {
            Ok(free == 0 && torsion.iter().all(|d| is_power_of(d, p)))
        }
        GroupClass::Countable => Ok(true),
        GroupClass::FiniteRankFree => Ok(torsion.is_empty()),
        other => Err(ClassifyError::NotDiscreteClass(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_group;

    fn g(text: &str) -> StructuredGroup {
        parse_group(text).unwrap()
    }

    #[test]
    fn class_examples() {
        assert_eq!(
            is_in_class(&g("Z^3 + Z(25)^(c)"), GroupClass::StronglyNonDivisible),
            Verdict::True
        );
        assert_eq!(
            is_in_class(
                &g("Z(2) + Z(4) + Z(8) + Z(2^inf)"),
                GroupClass::StronglyNonDivisible
            ),
            Verdict::False
        );
        assert_eq!(
            is_in_class(&g("Q"), GroupClass::ResiduallyFinite),
            Verdict::False
        );
        assert_eq!(
            is_in_class(&g("Z(3^inf)"), GroupClass::Narrow),
            Verdict::True
        );
        assert_eq!(
            is_in_class(&g("Z(3)^(aleph0)"), GroupClass::Narrow),
            Verdict::False
        );
        assert_eq!(
            is_in_class(&g("T(2)"), GroupClass::Countable),
            Verdict::False
        );
        assert_eq!(
            is_in_class(&g("Z^(aleph0) + Q"), GroupClass::Countable),
            Verdict::True
        );
        assert_eq!(
            is_in_class(&g("Z(3) + Z(5^inf)"), GroupClass::TorsionNoP(2)),
            Verdict::True
        );
        assert_eq!(
            is_in_class(&g("J(3)"), GroupClass::PDivisible(2)),
            Verdict::True
        );
        assert_eq!(
            is_in_class(&g("Z(8)^(c)"), GroupClass::BoundedP(2)),
            Verdict::True
        );
        assert_eq!(
            is_in_class(&g("Z(8) + Z(3)"), GroupClass::FiniteP(2)),
            Verdict::False
        );
    }

    #[test]
    fn equalizer_examples() {
        use TopologyName::*;
        assert_eq!(
            equalizer_member(Gamma, Bohr, &g("Z(2)^(aleph0)")),
            Verdict::True
        );
        assert_eq!(equalizer_member(Gamma, Nu, &g("Z")), Verdict::True);
        assert_eq!(
            equalizer_member(AlephBounded, ProCountable, &g("Z")),
            Verdict::Unknown
        );
        assert_eq!(
            equalizer_member(GammaP(2), NuP(3), &g("Z")),
            Verdict::Unknown
        );
        assert_eq!(equalizer_member(Bohr, Bohr, &g("Q")), Verdict::True);
        assert_eq!(equalizer_member(Bohr, Gamma, &g("Z")), Verdict::False);
    }

    #[test]
    fn hausdorff_examples() {
        use TopologyName::*;
        assert_eq!(hausdorff_class_member(Bohr, &g("Q")), Ok(Verdict::True));
        assert_eq!(
            hausdorff_class_member(Gamma, &g("Z(3^inf)")),
            Ok(Verdict::False)
        );
        assert_eq!(
            hausdorff_class_member(NuP(2), &g("Z(3)")),
            Ok(Verdict::False)
        );
        assert!(hausdorff_class_member(Discrete, &g("Z")).is_err());
    }

    #[test]
    fn base_membership_examples() {
        let z2 = FgGroup::free(2);
        let n = z2.subgroup_i64(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(
            class_topology_base_member(GroupClass::Finite, &z2, &n),
            Ok(true)
        );
        assert_eq!(
            class_topology_base_member(GroupClass::FiniteRankFree, &z2, &n),
            Ok(false)
        );
        let z = FgGroup::free(1);
        assert_eq!(
            class_topology_base_member(GroupClass::FiniteP(2), &z, &z.multiple(6)),
            Ok(false)
        );
        assert_eq!(
            class_topology_base_member(GroupClass::FiniteP(2), &z, &z.multiple(8)),
            Ok(true)
        );
        assert!(class_topology_base_member(GroupClass::Narrow, &z, &z.multiple(8)).is_err());
    }

    #[test]
    fn names_round_trip() {
        for t in TopologyName::GLOBAL
            .into_iter()
            .chain(TopologyName::local(5))
        {
            assert_eq!(t.to_string().parse::<TopologyName>(), Ok(t));
        }
        for c in GroupClass::all(7) {
            assert_eq!(c.to_string().parse::<GroupClass>(), Ok(c));
        }
        assert!("gamma_p:4".parse::<TopologyName>().is_err());
        assert!("bounded".parse::<GroupClass>().is_ok());
        assert!("bounded:3".parse::<GroupClass>().is_err());
        assert!("narrow_p".parse::<GroupClass>().is_err());
    }
}
