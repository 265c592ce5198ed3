//! Symbolic abelian groups, cardinal invariants of functorial group
//! topologies, and concrete brute-force engines for finite and finitely
//! generated groups.

pub mod arith;
pub mod cardinal;
pub mod classify;
pub mod fg;
pub mod finite;
pub mod group;
pub mod intmat;
pub mod parse;
pub mod sample;
pub mod subgroup_count;
pub mod topo;
pub mod verdict;

pub use cardinal::{Cardinal, CardinalMode, Ordering};
pub use classify::{
    equalizer_member, hausdorff_class_member, is_in_class, ClassifyError, EqualizerRule,
    GroupClass, TopologyName,
};
pub use fg::{FgError, FgGroup, FgSubgroup, IndexValue};
pub use finite::{FinCharacter, FinSubgroup, FiniteError, FiniteGroup};
pub use group::{Atom, InvariantsRecord, StructuredGroup};
pub use intmat::IntMatrix;
pub use parse::{parse_group, GroupParseError};
pub use topo::{csize, csize_p, invariant, CardinalInvariantKind, InvariantResult, TopoError};
pub use verdict::Verdict;
