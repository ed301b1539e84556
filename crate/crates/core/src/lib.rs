//! Finite combinatorics of the quantum McKay correspondence for `U_q(sl2)`
//! at `q = exp(i pi / h)`: fusion rings, quantum subgroup graphs, the
//! bigraded algebra `O_q`, the mesh category of the cyclic translation
//! quiver and its comparison with 2-periodic derived categories of Dynkin
//! quivers.

pub mod dynkin;
pub mod error;
pub mod fusion;
pub mod linalg;
pub mod meshquiver;
pub mod oq;
pub mod quiverrep;
pub mod sheafcat;
pub mod subgroup;

pub use dynkin::{AdeType, DynkinGraph, HeightFunction, Orientation, Sign};
pub use error::{Error, Result};
pub use fusion::{FusionRing, ObjectClass};
pub use subgroup::{QuantumSubgroup, Violation};
