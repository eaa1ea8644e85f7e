//! Finite hypersets represented as accessible pointed graphs.
//!
//! A set is presented by a graph whose root stands for the set and whose
//! edges `a -> b` say "b is an element of a". Which presentations denote the
//! same set depends on the anti-foundation semantics in force:
//!
//! * [`Semantics::Afa`]: maximal bisimulation (Aczel).
//! * [`Semantics::Safa`]: isomorphism of tree unfoldings (Scott).
//! * [`Semantics::Fafa`]: isomorphism of accessible sub-graphs (Finsler).
//! * Boffa semantics lives in [`boffa::Universe`], where equality is identity
//!   in an extensional store.
//!
//! The [`wf`] and [`group`] modules build the finite automorphism constructions
//! (permutations of Quine atoms lifted through powerset levels, and transitive
//! sets with a prescribed automorphism group).

pub mod apg;
pub mod boffa;
pub mod canon;
pub mod equivalence;
mod error;
pub mod gen;
pub mod group;
pub mod hsl;
pub mod search;
pub mod wf;

pub use apg::{Apg, FiniteTree, NodeId, Partition, RawGraph};
pub use canon::{CanonResult, Semantics};
pub use error::{Error, Result};

/// Size caps for the exponential parts of the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum node count for isomorphism and automorphism search.
    pub iso_nodes: usize,
    /// Maximum total element count of a levelled universe.
    pub wf_elements: usize,
    /// Maximum group order accepted by the prescribed-group construction.
    pub group_order: usize,
}

impl Limits {
    pub const DEFAULT_ISO_NODES: usize = 512;
    pub const DEFAULT_WF_ELEMENTS: usize = 1 << 16;
    pub const DEFAULT_GROUP_ORDER: usize = 8;

    pub fn check_iso(&self, nodes: usize) -> Result<()> {
        if nodes > self.iso_nodes {
            return Err(Error::SizeLimitExceeded {
                what: "isomorphism search node count",
                actual: nodes,
                limit: self.iso_nodes,
            });
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            iso_nodes: Self::DEFAULT_ISO_NODES,
            wf_elements: Self::DEFAULT_WF_ELEMENTS,
            group_order: Self::DEFAULT_GROUP_ORDER,
        }
    }
}
