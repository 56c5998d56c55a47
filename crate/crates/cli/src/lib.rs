//! Wire formats and report envelope for the `gf2to1` binary, exposed as a
//! library so integration tests and downstream tooling can assemble inputs.

pub mod report;
pub mod schema;
