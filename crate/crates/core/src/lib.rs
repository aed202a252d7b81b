//! Schur rings over finite abelian groups.
//!
//! The crate covers the group arithmetic, S-ring validation and structure
//! constants, the standard constructions (cyclotomic, orbit, tensor, wreath,
//! S-wreath, algebraic fusion), combinatorial and algebraic isomorphisms of
//! Cayley schemes, schurity and separability verdicts, and exhaustive
//! enumeration of S-rings over small groups.

pub mod analysis;
pub mod constructors;
pub mod enumeration;
pub mod error;
pub mod group;
pub mod io;
pub mod iso;
pub mod perm;
pub mod sring;

pub use error::{Error, Result};
pub use group::{Elem, GroupAutomorphism, GroupSpec, Section, Subgroup};
pub use perm::{Perm, PermGroup};
pub use sring::{validate_sring, GroupRingVector, SCTensor, SRing};
