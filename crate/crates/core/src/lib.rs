//! Exact computation with two-to-one mappings and fixed-point-free involutions
//! over binary fields `GF(2^n)`, `1 <= n <= 24`.
//!
//! The crate is organized around a small set of value types:
//!
//! * [`field::FieldCtx`] / [`field::Elem`] — a concrete `GF(2^n)` with its
//!   reduction polynomial, and bit-packed elements in the polynomial basis.
//! * [`polyalg::UniPoly`] / [`polyalg::LinearizedMap`] — univariate polynomial
//!   algebra (gcd, Sylvester resultants, the quadratic/cubic/quartic root
//!   criteria) and F2-linear algebra for maps of the form `sum c_j x^(2^j)`.
//! * [`mapping::MappingSpec`] / [`mapping::DomainSet`] — evaluable closed-form
//!   maps over enumerable domains, preimage profiles, the two-to-one verdict,
//!   and the involution a two-to-one map induces by pairing its fibers.
//! * [`agw::DiagramSpec`] — commutative-square certification of two-to-one
//!   maps (base mode and fiber mode) plus four concrete constructions.
//! * [`families`] — the catalog: eight families `(x^(2^k)+x+delta)^s + c*x`
//!   with validated side conditions and closed-form involutions, the
//!   mu-subgroup reduction, two resultant factorization identities, and the
//!   odd-extension maps and involutions.
//!
//! Everything is deterministic and exact; randomized checks use the seeded
//! generator in [`rng`].

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod agw;
pub mod error;
pub mod families;
pub mod field;
pub mod mapping;
pub mod polyalg;
pub mod rng;

pub use error::Error;
pub use field::{Elem, ExpInt, FieldCtx};
pub use mapping::{DomainSet, MappingSpec, PairingTable, PreimageProfile};
pub use polyalg::{LinearizedMap, UniPoly};
