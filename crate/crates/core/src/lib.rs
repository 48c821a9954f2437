//! Finite group computations for d-maximal groups and maximal `(p, q)`-pairs.
//!
//! Groups are stored as multiplication tables over `0..n` with `0` the
//! identity. Subgroups are bit sets over the same indices.

pub mod actions;
pub mod arith;
pub mod catalog;
pub mod construct;
pub mod error;
pub mod group;
pub mod iso;
pub mod maximality;
pub mod oracle;
pub mod outcome;
pub mod presentation;
pub mod series;
pub mod subgroups;

pub use actions::{CharacterValue, GroupMap};
pub use error::{Error, Result};
pub use group::{ConcreteGroup, SubgroupSet};
pub use maximality::{check_pair, is_d_maximal, structural_report, MaximalityReport, PairCheckReport, StructuralReport};
pub use outcome::Outcome;
pub use presentation::{parse_presentation, PcPresentation};
pub use subgroups::{all_subgroups, min_generators, SubgroupLattice};
