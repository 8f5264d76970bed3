//! Finite-group toolkit for sum sets and partial sum sets.
//!
//! A subset `S` of a group `G` of order `v` is a `(v, k, λ, μ)` partial sum set
//! when every nonidentity element of `S` is a product `xy` with `x, y ∈ S` in
//! exactly `λ` ordered ways and every nonidentity element outside `S` in exactly
//! `μ` ways; it is a `(v, k, μ)` sum set when `λ = μ`.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: Cayley-table groups, subsets, quotients, subgroup lattices and
//!   finite fields, plus a small spec language (`dihedral:4`, `aff:5`, ...).
//! - [`ring`]: exact arithmetic in the integral group ring and the closed-form
//!   power identities satisfied by sum sets.
//! - [`regularity`]: representation-count profiles, classification and
//!   certificates.
//! - [`admissibility`]: parameter filters and coset-partition analyses.
//! - [`constructions`]: deterministic generators for the known infinite
//!   families, each returning a recomputed certificate.
//! - [`search`]: exhaustive enumeration and the empirical property suites.

pub mod admissibility;
pub mod constructions;
pub mod error;
pub mod group;
pub mod numbers;
pub mod regularity;
pub mod ring;
pub mod search;

pub use error::{Error, Result};
pub use group::{FieldTable, FiniteGroup, GroupId, Subset};
pub use regularity::{Certificate, Classification, PssParams, RegularityProfile};
pub use ring::GroupRingElement;
