//! Exact arithmetic in `GF(2^n)` for `1 <= n <= 24`.
//!
//! Elements are bit-packed coefficient vectors in the polynomial basis
//! `{1, x, ..., x^(n-1)}`: bit `i` holds the coefficient of `x^i`. Addition
//! is XOR; multiplication is a carry-less product reduced by the context's
//! irreducible modulus. For degrees up to [`TABLE_MAX_DEGREE`] the context
//! also carries discrete log/antilog tables, which make `pow` O(1) — full
//! field sweeps at n = 20 depend on this.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Exponent type for `pow`; all exponents in the catalog fit comfortably.
pub type ExpInt = u64;

/// Largest degree for which log/antilog tables are built (2 x 4 MiB at 20).
pub const TABLE_MAX_DEGREE: u32 = 20;

/// Supported degree bounds; full-field enumeration stays desk-scale.
pub const MAX_DEGREE: u32 = 24;

/// Lexicographically smallest irreducible polynomial of each degree,
/// encoded as an (n+1)-bit mask, index = degree. Entry 0 is a placeholder.
pub const MODULUS_TABLE: [u32; 25] = [
    0, 0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

/// One element of a `GF(2^n)`; only meaningful together with its context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Parse the canonical text form: lowercase hex with a `0x` prefix
    /// (uppercase digits accepted).
    pub fn parse_hex(s: &str) -> Option<Elem> {
        let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"))?;
        u32::from_str_radix(digits, 16).ok().map(Elem)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Degree of a polynomial mask over F2 (`-1` for the zero polynomial).
fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of carry-less division of `a` by `b` (`b != 0`).
fn poly_mod(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=n/2`.
pub fn is_irreducible(p: u32) -> bool {
    let n = poly_degree(p as u64);
    if n < 1 {
        return false;
    }
    for d in 1..=(n / 2) {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_mod(p as u64, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// A concrete `GF(2^n)`: degree, modulus, and derived lookup tables.
///
/// Immutable after construction; operations are pure functions of
/// `(ctx, inputs)`, so a context can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    n: u32,
    modulus: u32,
    order: u64,
    /// Discrete logs base `generator`; `log[0]` is unused. Empty when n is
    /// above [`TABLE_MAX_DEGREE`].
    log: Vec<u32>,
    /// `antilog[i] = generator^i`, length `order - 1`.
    antilog: Vec<u32>,
    generator: u32,
}

impl FieldCtx {
    /// Context with the table modulus for degree `n`, re-verified irreducible.
    pub fn new(n: u32) -> Result<FieldCtx> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange { n });
        }
        FieldCtx::with_modulus(n, MODULUS_TABLE[n as usize])
    }

    /// Context with an explicit modulus (must be irreducible of degree `n`).
    pub fn with_modulus(n: u32, modulus: u32) -> Result<FieldCtx> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange { n });
        }
        if poly_degree(modulus as u64) != n as i32 || !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { modulus });
        }
        let mut ctx = FieldCtx {
            n,
            modulus,
            order: 1u64 << n,
            log: Vec::new(),
            antilog: Vec::new(),
            generator: 0,
        };
        if n <= TABLE_MAX_DEGREE {
            ctx.build_tables();
        }
        Ok(ctx)
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// A fixed multiplicative generator (0 when tables are disabled).
    pub fn generator(&self) -> Elem {
        Elem(self.generator)
    }

    pub fn contains(&self, a: Elem) -> bool {
        (a.0 as u64) < self.order
    }

    /// All elements in ascending mask order.
    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|v| Elem(v as u32))
    }

    fn build_tables(&mut self) {
        let q = self.order as usize;
        let generator = self.find_generator();
        let mut antilog = Vec::with_capacity(q - 1);
        let mut log = vec![0u32; q];
        let mut acc = 1u32;
        for i in 0..(q - 1) {
            antilog.push(acc);
            log[acc as usize] = i as u32;
            acc = self.mul_slow(Elem(acc), Elem(generator)).0;
        }
        debug_assert_eq!(acc, 1);
        self.generator = generator;
        self.log = log;
        self.antilog = antilog;
    }

    fn find_generator(&self) -> u32 {
        let group = self.order - 1;
        let primes = distinct_prime_factors(group);
        'cand: for g in 2..self.order as u32 {
            for &p in &primes {
                if self.pow_slow(Elem(g), group / p) == Elem::ONE {
                    continue 'cand;
                }
            }
            return g;
        }
        // n = 1: the group is trivial and 1 generates it.
        1
    }

    /// Addition: XOR of coefficient masks (also subtraction).
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(a.0 ^ b.0)
    }

    /// Carry-less product reduced mod the modulus. Always available; used to
    /// build the tables and as the n > 20 fallback.
    pub fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let mut acc = 0u64;
        let mut a = a.0 as u64;
        let mut b = b.0 as u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        // acc has degree < 2n; reduce.
        let m = self.modulus as u64;
        let n = self.n as i32;
        while acc != 0 && poly_degree(acc) >= n {
            acc ^= m << (poly_degree(acc) - n);
        }
        Elem(acc as u32)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.log.is_empty() {
            return self.mul_slow(a, b);
        }
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        if a == Elem::ONE {
            return b;
        }
        if b == Elem::ONE {
            return a;
        }
        let g = self.order - 1;
        let idx = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % g;
        Elem(self.antilog[idx as usize])
    }

    fn pow_slow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let mut e = e % (self.order - 1);
        if e == 0 {
            return Elem::ONE;
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` with the conventions `a^0 = 1` (including `a = 0`) and
    /// `0^e = 0` for `e > 0`; for nonzero `a` the exponent acts mod `2^n - 1`.
    pub fn pow(&self, a: Elem, e: ExpInt) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if e == 1 || a.is_zero() {
            return a;
        }
        if self.log.is_empty() {
            return self.pow_slow(a, e);
        }
        let g = self.order - 1;
        let idx = (self.log[a.0 as usize] as u64 * (e % g)) % g;
        Elem(self.antilog[idx as usize])
    }

    /// Multiplicative inverse, computed as `a^(2^n - 2)`.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Absolute trace `sum a^(2^i)`, `i = 0..n-1`; lands in `{0, 1}`.
    pub fn trace_abs(&self, a: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..self.n {
            acc = self.add(acc, x);
            x = self.mul(x, x);
        }
        debug_assert!(acc.0 <= 1);
        acc
    }

    /// Relative trace onto `F_(2^m)`: `sum a^(2^(m*i))`, `i = 0..n/m-1`.
    pub fn trace_rel(&self, a: Elem, m: u32) -> Result<Elem> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotADivisor { m, n: self.n });
        }
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..(self.n / m) {
            acc = self.add(acc, x);
            x = self.pow(x, 1u64 << m);
        }
        Ok(acc)
    }

    /// Frobenius power `a^(2^j)`.
    pub fn frobenius(&self, a: Elem, j: u32) -> Elem {
        if a.is_zero() || j == 0 {
            return a;
        }
        // 2^j already reduced when j < n; fold larger shifts first
        let e = if j < self.n {
            1u64 << j
        } else {
            mod_pow_u64(2, j as u64, self.order - 1)
        };
        self.pow(a, e)
    }

    /// The unique square root in characteristic 2: `a^(2^(n-1))`.
    pub fn sqrt(&self, a: Elem) -> Elem {
        self.pow(a, 1u64 << (self.n - 1))
    }

    /// Does `a` lie in the subfield `F_(2^m)` (requires `m | n`)?
    pub fn in_subfield(&self, a: Elem, m: u32) -> Result<bool> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotADivisor { m, n: self.n });
        }
        Ok(self.pow(a, 1u64 << m) == a)
    }

    /// Absolute trace of `a` computed inside the subfield `F_(2^m)`:
    /// `sum a^(2^i)`, `i = 0..m-1`. Requires `a` to be a subfield member.
    pub fn trace_abs_within(&self, a: Elem, m: u32) -> Result<Elem> {
        if !self.in_subfield(a, m)? {
            return Err(Error::NotInDomain { elem: a });
        }
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..m {
            acc = self.add(acc, x);
            x = self.mul(x, x);
        }
        Ok(acc)
    }

    /// All members of the subfield `F_(2^m)`, ascending.
    pub fn subfield_elems(&self, m: u32) -> Result<Vec<Elem>> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotADivisor { m, n: self.n });
        }
        Ok(self.elems().filter(|&a| self.pow(a, 1u64 << m) == a).collect())
    }
}

/// `2^e mod m` without overflow.
fn mod_pow_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e != 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn distinct_prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Inverse of `e` modulo `m` via extended Euclid: the `t` with
/// `e*t = 1 (mod m)`, `0 < t < m`. For the degenerate modulus `m = 1`
/// every residue works and 0 is returned.
pub fn int_mod_inverse(e: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::NotInvertible { e, m });
    }
    if m == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (e as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { e, m });
    }
    let t = old_s.rem_euclid(m as i128) as u64;
    Ok(t)
}
