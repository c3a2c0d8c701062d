//! Machine-checkable witnesses that a finite group with a non-pure centre
//! sits inside a semidirect product `G = F ⋉ ∏_{s∈S} H_s` as a verbally
//! closed but not algebraically closed subgroup.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: finite groups as Cayley tables, subgroup lattices, purity
//!   and decomposition predicates.
//! * [`words`]: words over variables and coefficients, free reduction,
//!   Nielsen changes of variables.
//! * [`zpk`]: arithmetic in `Z_{p^k}`, polynomials without free term, the
//!   function family `F` and the 0/1 root search.
//! * [`construction`]: the group `G`, the diagonal embedding, the auxiliary
//!   group `H̃` with its coordinate homomorphism, the equation system.
//! * [`solvers`]: equation solving over finite groups, certificates and the
//!   verbal-closedness audit.
//! * [`catalog`] and [`cayley`]: named example groups and the table file
//!   format.

pub mod catalog;
pub mod cayley;
pub mod construction;
mod error;
pub mod group;
pub mod solvers;
pub mod words;
pub mod zpk;

pub use error::{Error, Result};
pub use group::{Elem, FiniteGroup, Group, Subgroup};
