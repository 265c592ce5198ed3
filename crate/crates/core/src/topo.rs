//! Weight, character and density of the profinite, natural and Bohr
//! topologies (and their `p`-local versions) on structured groups.
//!
//! Each linear topology here has `G¹` (or `G¹_p`) as the closure of zero, so
//! its invariants are those of the reflection `G/G¹` (or `G/G¹_p`). When that
//! reflection is finite the topology is discrete on it: `w = d = |R|` and
//! `χ = 1`. Otherwise the closed formulas below apply.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cardinal::{leq_log, sup, Cardinal, CardinalMode};
use crate::classify::TopologyName;
use crate::group::StructuredGroup;
use crate::subgroup_count;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CardinalInvariantKind {
    Weight,
    Character,
    Density,
}

impl CardinalInvariantKind {
    pub const ALL: [CardinalInvariantKind; 3] = [
        CardinalInvariantKind::Weight,
        CardinalInvariantKind::Character,
        CardinalInvariantKind::Density,
    ];
}

impl fmt::Display for CardinalInvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CardinalInvariantKind::Weight => "w",
            CardinalInvariantKind::Character => "chi",
            CardinalInvariantKind::Density => "d",
        })
    }
}

impl FromStr for CardinalInvariantKind {
    type Err = TopoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "w" | "weight" => Ok(CardinalInvariantKind::Weight),
            "chi" | "character" => Ok(CardinalInvariantKind::Character),
            "d" | "density" => Ok(CardinalInvariantKind::Density),
            _ => Err(TopoError::UnknownInvariant(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantResult {
    pub value: Cardinal,
    /// Which formula produced the value.
    pub basis: &'static str,
    pub mode: CardinalMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TopoError {
    #[error("invariant {kind} is not supported for topology {topology}")]
    Unsupported {
        topology: TopologyName,
        kind: CardinalInvariantKind,
    },
    #[error("unknown invariant `{0}` (expected w, chi or d)")]
    UnknownInvariant(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Exact subgroup count of a finite structured group.
fn finite_subgroup_count(g: &StructuredGroup) -> Cardinal {
    let orders = g.finite_orders().expect("finite group");
    Cardinal::Finite(subgroup_count::count_subgroups(&orders))
}

/// `|C(G)|`, the number of finite-index subgroups.
pub fn csize(g: &StructuredGroup) -> Cardinal {
    let reflection = g.hausdorff_reflection();
    if reflection.is_finite() {
        return finite_subgroup_count(&reflection);
    }
    g.quotient_profile().omega_sup_exp()
}

/// `|C_p(G)|`, the number of subgroups of finite `p`-power index.
pub fn csize_p(g: &StructuredGroup, p: u64) -> Cardinal {
    let reflection = g.p_reflection(p);
    if reflection.is_finite() {
        return finite_subgroup_count(&reflection);
    }
    let top = g.quotient_prime_power(p, 1).size();
    if top.is_finite() {
        Cardinal::omega()
    } else {
        top.exp2()
    }
}

fn result(
    value: Cardinal,
    basis: &'static str,
    mode: CardinalMode,
) -> Result<InvariantResult, TopoError> {
    Ok(InvariantResult {
        value: value.normalize(),
        basis,
        mode,
    })
}

fn finite_reflection(
    r: &StructuredGroup,
    k: CardinalInvariantKind,
    mode: CardinalMode,
) -> Result<InvariantResult, TopoError> {
    let value = match k {
        CardinalInvariantKind::Character => Cardinal::one(),
        _ => r.size(),
    };
    result(value, "finite-discrete-reflection", mode)
}

/// `w`, `χ` or `d` of `(G, T_G)`.
pub fn invariant(
    g: &StructuredGroup,
    t: TopologyName,
    k: CardinalInvariantKind,
    mode: CardinalMode,
) -> Result<InvariantResult, TopoError> {
    use CardinalInvariantKind::*;
    match t {
        TopologyName::Gamma | TopologyName::Nu => {
            let r = g.hausdorff_reflection();
            if r.is_finite() {
                return finite_reflection(&r, k, mode);
            }
            let profile = g.quotient_profile();
            match (t, k) {
                (TopologyName::Gamma, Weight | Character) => {
                    let basis = if g.exponent().is_some() {
                        "bounded-profinite-equals-bohr"
                    } else {
                        "profinite-weight"
                    };
                    result(profile.omega_sup_exp(), basis, mode)
                }
                (TopologyName::Nu, Character) => {
                    if r.exponent().is_some() {
                        result(Cardinal::one(), "bounded-reflection-discrete", mode)
                    } else {
                        result(Cardinal::omega(), "natural-countable-base", mode)
                    }
                }
                _ => result(profile.omega_sup(), "natural-density", mode),
            }
        }
        TopologyName::Bohr => {
            if g.is_finite() {
                return finite_reflection(g, k, mode);
            }
            match k {
                Weight | Character => result(g.size().exp2(), "bohr-weight", mode),
                Density => result(g.size(), "bohr-density", mode),
            }
        }
        TopologyName::GammaP(p) | TopologyName::NuP(p) => {
            let r = g.p_reflection(p);
            if r.is_finite() {
                return finite_reflection(&r, k, mode);
            }
            let top = g.quotient_prime_power(p, 1).size();
            match (t, k) {
                (TopologyName::GammaP(_), Weight | Character) => {
                    result(csize_p(g, p), "pro-p-weight", mode)
                }
                (TopologyName::NuP(_), Character) => {
                    if r.exponent().is_some() {
                        result(Cardinal::one(), "bounded-reflection-discrete", mode)
                    } else {
                        result(Cardinal::omega(), "p-adic-countable-base", mode)
                    }
                }
                _ => result(sup([Cardinal::omega(), top]), "p-adic-density", mode),
            }
        }
        _ => Err(TopoError::Unsupported {
            topology: t,
            kind: k,
        }),
    }
}

/// `log |G| ≤ w(G, ν_G)` for infinite residually finite `G`.
pub fn check_log_bound(g: &StructuredGroup, mode: CardinalMode) -> Result<Verdict, TopoError> {
    if g.is_finite() {
        return Err(TopoError::Precondition("the group must be infinite".into()));
    }
    if !g.ulm().is_zero() {
        return Err(TopoError::Precondition(
            "the group must be residually finite".into(),
        ));
    }
    let w = invariant(g, TopologyName::Nu, CardinalInvariantKind::Weight, mode)?.value;
    Ok(leq_log(&g.size(), &w, mode))
}
