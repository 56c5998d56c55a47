//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

use crate::field::Elem;

/// Everything that can go wrong across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Extension degree outside the supported range `1..=24`.
    DegreeOutOfRange { n: u32 },
    /// Supplied modulus is not an irreducible degree-`n` polynomial.
    ReducibleModulus { modulus: u32 },
    /// Inversion or division by the zero element.
    DivisionByZero,
    /// `trace_rel` called with `m` that does not divide `n`.
    NotADivisor { m: u32, n: u32 },
    /// `int_mod_inverse` called with `gcd(e, m) != 1`.
    NotInvertible { e: u64, m: u64 },
    /// Resultant of a constant polynomial is not defined here.
    DegreeTooLow,
    /// Cubic criterion requires a nonzero constant term.
    ZeroConstantTerm,
    /// The map is not two-to-one on the supplied domain.
    NotTwoToOne,
    /// Involution derivation requires an even-cardinality domain.
    OddDomain,
    /// Lagrange interpolation of a pairing table needs the full field.
    DomainNotFullField,
    /// A map expected to be a bijection is not (first witness pair).
    NotBijective { witness: Option<(Elem, Elem)> },
    /// Two two-to-one maps derive different involutions; carries the first
    /// point where the pairings disagree.
    InvolutionsDiffer { at: Elem, first: Elem, second: Elem },
    /// Enumeration-based counting is limited to very small fields.
    TooLarge { n: u32, max: u32 },
    /// A hypothesis of a certification or construction failed.
    ConditionFailed { condition: &'static str, witness: Option<Elem> },
    /// Family parameters violate the governing theorem's hypotheses.
    InvalidParams { violations: String },
    /// Rows 1 and 2 have no known closed-form involution.
    NoClosedForm { row: u8 },
    /// The family coefficient `c` must be nonzero for involution transfer.
    ZeroC,
    /// The mu-subgroup reduction needs `delta` outside the half-degree subfield.
    DeltaInSubfield,
    /// Moebius map evaluated at its pole.
    PoleAtTheta,
    /// Odd-extension catalog index outside `1..=5`.
    IndexOutOfRange { idx: u8 },
    /// A denominator that the theorems guarantee nonzero vanished anyway.
    ZeroDenominator { at: Elem },
    /// Element does not belong to the subgroup or subfield the operation needs.
    NotInDomain { elem: Elem },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeOutOfRange { n } => write!(f, "degree {n} outside supported range 1..=24"),
            Error::ReducibleModulus { modulus } => {
                write!(f, "modulus {modulus:#x} is not irreducible")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotADivisor { m, n } => write!(f, "{m} does not divide {n}"),
            Error::NotInvertible { e, m } => write!(f, "{e} is not invertible modulo {m}"),
            Error::DegreeTooLow => write!(f, "resultant requires both degrees >= 1"),
            Error::ZeroConstantTerm => write!(f, "cubic criterion requires b != 0"),
            Error::NotTwoToOne => write!(f, "map is not two-to-one on the domain"),
            Error::OddDomain => write!(f, "domain cardinality is odd"),
            Error::DomainNotFullField => write!(f, "operation requires the full field as domain"),
            Error::NotBijective { witness } => match witness {
                Some((a, b)) => write!(f, "map is not bijective ({a} and {b} collide)"),
                None => write!(f, "map is not bijective"),
            },
            Error::InvolutionsDiffer { at, first, second } => write!(
                f,
                "derived involutions differ at {at}: {first} vs {second}"
            ),
            Error::TooLarge { n, max } => write!(f, "n={n} exceeds enumeration limit {max}"),
            Error::ConditionFailed { condition, witness } => match witness {
                Some(w) => write!(f, "condition failed: {condition} (witness {w})"),
                None => write!(f, "condition failed: {condition}"),
            },
            Error::InvalidParams { violations } => write!(f, "invalid family params: {violations}"),
            Error::NoClosedForm { row } => {
                write!(f, "row {row} has no closed-form involution; use the pairing table")
            }
            Error::ZeroC => write!(f, "involution transfer requires c != 0"),
            Error::DeltaInSubfield => write!(f, "delta must lie outside the subfield"),
            Error::PoleAtTheta => write!(f, "moebius map evaluated at its pole"),
            Error::IndexOutOfRange { idx } => write!(f, "catalog index {idx} outside 1..=5"),
            Error::ZeroDenominator { at } => write!(f, "denominator vanished at {at}"),
            Error::NotInDomain { elem } => write!(f, "{elem} is not in the required domain"),
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
