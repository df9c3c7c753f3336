//! Finite T0-spaces as posets, their order complexes, nerves and face
//! posets, integer simplicial homology, the basis-like cover family of a
//! finite space with its projection order, and the pro-system built from it.
//!
//! The weak homotopy type of a finite space is read off the homology of its
//! order complex; homotopy type is decided through cores (beat-point
//! reduction) and poset isomorphism.

pub mod bitset;
pub mod census;
pub mod covers;
mod error;
pub mod homology;
pub mod homotopy;
pub mod io;
mod iso;
pub mod poset;
pub mod prosystem;
pub mod simplicial;
pub mod snf;

pub use bitset::ElementSet;
pub use covers::{Cover, CoverFilter, Projection};
pub use error::{Error, Result};
pub use homology::{HomologyDim, HomologyGroups};
pub use homotopy::{BeatDirection, Core, Fence};
pub use poset::{ContinuousMap, FiniteSpace, OpenSet};
pub use prosystem::{InverseSystem, SwVerdict, Verdict};
pub use simplicial::{Collapsibility, SimplicialComplex, SimplicialMap};

/// Size limits for the exponential searches.
///
/// Every enumeration in the crate checks one of these before it starts (or
/// while it runs) and reports [`Error::SizeGuardExceeded`] instead of
/// running away.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Guards {
    /// Largest poset handed to the isomorphism search.
    pub elements: usize,
    /// Largest space whose full open-set lattice may be enumerated.
    pub opens: usize,
    /// Largest number of faces an order complex, nerve or subdivision may have.
    pub faces: usize,
    /// Largest number of continuous maps enumerated by a homotopy search.
    pub maps: usize,
    /// Largest number of candidate families scanned by the unfiltered cover
    /// enumeration (two to the number of non-empty opens).
    pub covers: usize,
    /// Largest index set of a full pro-system.
    pub index: usize,
    /// Step budget of the backtracking collapse search.
    pub collapse_steps: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            elements: 24,
            opens: 16,
            faces: 200_000,
            maps: 200_000,
            covers: 1 << 20,
            index: 256,
            collapse_steps: 100_000,
        }
    }
}
