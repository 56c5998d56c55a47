//! Univariate polynomial algebra over a [`FieldCtx`] and F2-linear algebra
//! for linearized maps `sum c_j x^(2^j)`.
//!
//! Covers ring arithmetic, gcd, Sylvester resultants, the solvability
//! criteria for quadratics/cubics/quartics in characteristic 2, and kernel
//! computations used by the diagram certifiers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Dense univariate polynomial; `coeffs[i]` is the degree-`i` coefficient.
/// Normalized: the leading coefficient is nonzero unless the polynomial is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn x() -> UniPoly {
        UniPoly::from_coeffs(vec![Elem::ZERO, Elem::ONE])
    }

    /// `c * x^e`.
    pub fn monomial(c: Elem, e: usize) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Elem::ZERO; e + 1];
        coeffs[e] = c;
        UniPoly { coeffs }
    }

    /// Build from little-endian (degree-indexed) coefficients, normalizing.
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(Elem(self.coeff(i).0 ^ other.coeff(i).0));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
                }
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn divmod(&self, ctx: &FieldCtx, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ddeg = divisor.degree().unwrap();
        let lead_inv = ctx.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg && !rem.is_empty() {
            let top = *rem.last().unwrap();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - ddeg;
            let factor = ctx.mul(top, lead_inv);
            quot[shift] = factor;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = ctx.add(rem[shift + i], ctx.mul(factor, dc));
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Monic gcd; `gcd(p, 0) = monic(p)`.
    pub fn gcd(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(ctx, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn monic(&self, ctx: &FieldCtx) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(ctx, ctx.inv(self.leading()).expect("nonzero leading"))
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }

    /// `self(other(x))`.
    pub fn compose(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(ctx, other).add(&UniPoly::constant(c));
        }
        acc
    }

    /// Reduce modulo `x^q - x` (`q` = field order): as a function on the
    /// field nothing changes, and the degree drops below `q`.
    pub fn reduce_mod_field(&self, ctx: &FieldCtx) -> UniPoly {
        let q = ctx.order();
        let mut out = vec![Elem::ZERO; (q as usize).min(self.coeffs.len())];
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let folded = if (e as u64) < q {
                e as u64
            } else {
                1 + (e as u64 - 1) % (q - 1)
            };
            let idx = folded as usize;
            if idx >= out.len() {
                out.resize(idx + 1, Elem::ZERO);
            }
            out[idx] = ctx.add(out[idx], c);
        }
        UniPoly::from_coeffs(out)
    }

    /// `self^e` reduced mod `x^q - x` after every product.
    pub fn pow_mod_field(&self, ctx: &FieldCtx, e: u64) -> UniPoly {
        let mut base = self.reduce_mod_field(ctx);
        let mut acc = UniPoly::constant(Elem::ONE);
        let mut e = e;
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base).reduce_mod_field(ctx);
            }
            base = base.mul(ctx, &base).reduce_mod_field(ctx);
            e >>= 1;
        }
        acc
    }
}

/// Sylvester resultant of `f` and `g`, both of degree >= 1: the determinant
/// of the (deg f + deg g)-square Sylvester matrix, zero exactly when the two
/// polynomials share a factor of positive degree.
pub fn sylvester_resultant(ctx: &FieldCtx, f: &UniPoly, g: &UniPoly) -> Result<Elem> {
    let n = f.degree().filter(|&d| d >= 1).ok_or(Error::DegreeTooLow)?;
    let m = g.degree().filter(|&d| d >= 1).ok_or(Error::DegreeTooLow)?;
    let size = n + m;
    let mut mat = vec![vec![Elem::ZERO; size]; size];
    for row in 0..m {
        for (j, &a) in f.coeffs.iter().rev().enumerate() {
            mat[row][row + j] = a;
        }
    }
    for row in 0..n {
        for (j, &b) in g.coeffs.iter().rev().enumerate() {
            mat[m + row][row + j] = b;
        }
    }
    // Gaussian elimination; in characteristic 2 row swaps cost no sign.
    let mut det = Elem::ONE;
    for col in 0..size {
        let pivot = match (col..size).find(|&r| !mat[r][col].is_zero()) {
            Some(p) => p,
            None => return Ok(Elem::ZERO),
        };
        mat.swap(col, pivot);
        let pivot_row = mat[col].clone();
        let p = pivot_row[col];
        det = ctx.mul(det, p);
        let p_inv = ctx.inv(p)?;
        for row in mat.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = ctx.mul(row[col], p_inv);
            for (cell, &pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                *cell = ctx.add(*cell, ctx.mul(factor, pv));
            }
        }
    }
    Ok(det)
}

/// Roots of `x^2 + a*x + b`. For `a != 0` solvability is governed by
/// `Tr(b/a^2)`: trace 1 means no roots, trace 0 exactly two. For `a = 0`
/// the Frobenius gives the unique root `sqrt(b)`.
pub fn solve_quadratic(ctx: &FieldCtx, a: Elem, b: Elem) -> Vec<Elem> {
    if a.is_zero() {
        return vec![ctx.sqrt(b)];
    }
    let a2 = ctx.mul(a, a);
    let w = ctx.div(b, a2).expect("a != 0");
    if ctx.trace_abs(w) == Elem::ONE {
        return Vec::new();
    }
    // Solve the F2-linear system for the linearized part x^2 + a*x.
    let lin = LinearizedMap::new(ctx, vec![(Elem::ONE, 1), (a, 0)]);
    let roots = lin.solve(ctx, b);
    debug_assert_eq!(roots.len(), 2);
    for &r in &roots {
        let check = ctx.add(ctx.mul(r, r), ctx.add(ctx.mul(a, r), b));
        assert!(check.is_zero(), "quadratic root failed substitution");
    }
    roots
}

/// Unique-root criterion for `x^3 + a*x + b`, `b != 0`: a unique root exists
/// exactly when `Tr(a^3/b^2 + 1) != 0`; the root itself is found by scan.
pub fn cubic_unique_root(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<(bool, Option<Elem>)> {
    if b.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let a3 = ctx.mul(ctx.mul(a, a), a);
    let b2 = ctx.mul(b, b);
    let w = ctx.add(ctx.div(a3, b2)?, Elem::ONE);
    let unique = ctx.trace_abs(w) == Elem::ONE;
    if !unique {
        return Ok((false, None));
    }
    let mut root = None;
    for x in ctx.elems() {
        let v = ctx.add(ctx.add(ctx.mul(ctx.mul(x, x), x), ctx.mul(a, x)), b);
        if v.is_zero() {
            assert!(root.is_none(), "criterion promised a unique root");
            root = Some(x);
        }
    }
    assert!(root.is_some(), "criterion promised a root");
    Ok((true, root))
}

/// Two-to-one criterion for `x^4 + a3*x^3 + a2*x^2 + a1*x` over the full
/// field: one of the three listed coefficient cases must hold.
pub fn quartic_two_to_one(ctx: &FieldCtx, a3: Elem, a2: Elem, a1: Elem) -> bool {
    quartic_two_to_one_rel(ctx, ctx.degree(), a3, a2, a1).expect("full degree divides itself")
}

/// Same criterion evaluated inside the subfield `F_(2^m)` of `ctx`
/// (coefficients must be subfield members; the parity clause uses `m`).
pub fn quartic_two_to_one_rel(
    ctx: &FieldCtx,
    m: u32,
    a3: Elem,
    a2: Elem,
    a1: Elem,
) -> Result<bool> {
    for c in [a3, a2, a1] {
        if !ctx.in_subfield(c, m)? {
            return Err(Error::NotInDomain { elem: c });
        }
    }
    if a3.is_zero() && a1.is_zero() {
        return Ok(!a2.is_zero());
    }
    if a3.is_zero() && !a1.is_zero() {
        let a2c = ctx.mul(ctx.mul(a2, a2), a2);
        let a12 = ctx.mul(a1, a1);
        let w = ctx.add(ctx.div(a2c, a12)?, Elem::ONE);
        return Ok(ctx.trace_abs_within(w, m)? == Elem::ONE);
    }
    // a3 != 0 case needs odd subfield degree and a2^2 = a1*a3.
    Ok(m % 2 == 1 && ctx.mul(a2, a2) == ctx.mul(a1, a3))
}

/// An F2-linear map `x -> sum c_j x^(2^j)`, kept both as its term list and
/// as an n x n bit matrix in the polynomial basis. The two representations
/// are cross-checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedMap {
    terms: Vec<(Elem, u32)>,
    /// `rows[i]` is a bitmask over input coordinates contributing to output
    /// bit `i`.
    rows: Vec<u32>,
    n: u32,
}

impl LinearizedMap {
    /// Build from `(coefficient, frobenius power)` terms.
    pub fn new(ctx: &FieldCtx, terms: Vec<(Elem, u32)>) -> LinearizedMap {
        let n = ctx.degree();
        let mut rows = vec![0u32; n as usize];
        for j in 0..n {
            let img = eval_terms(ctx, &terms, Elem(1 << j));
            for i in 0..n {
                if (img.0 >> i) & 1 == 1 {
                    rows[i as usize] |= 1 << j;
                }
            }
        }
        let map = LinearizedMap { terms, rows, n };
        // Matrix and term list must agree: exhaustively for small fields,
        // on sampled points above.
        if n <= 12 {
            for a in ctx.elems() {
                debug_assert_eq!(map.apply_matrix(a), eval_terms(ctx, &map.terms, a));
            }
        } else {
            let mut st = 0x1234_5678_9abc_def0u64;
            for _ in 0..64 {
                st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = Elem((st % ctx.order()) as u32);
                debug_assert_eq!(map.apply_matrix(a), eval_terms(ctx, &map.terms, a));
            }
        }
        map
    }

    /// The map `x -> x^(2^k) + x`.
    pub fn frob_plus_id(ctx: &FieldCtx, k: u32) -> LinearizedMap {
        LinearizedMap::new(ctx, vec![(Elem::ONE, k), (Elem::ONE, 0)])
    }

    /// The relative trace onto `F_(2^m)` as a linearized map.
    pub fn rel_trace(ctx: &FieldCtx, m: u32) -> Result<LinearizedMap> {
        if m == 0 || !ctx.degree().is_multiple_of(m) {
            return Err(Error::NotADivisor { m, n: ctx.degree() });
        }
        let terms = (0..ctx.degree() / m).map(|i| (Elem::ONE, m * i)).collect();
        Ok(LinearizedMap::new(ctx, terms))
    }

    pub fn terms(&self) -> &[(Elem, u32)] {
        &self.terms
    }

    fn apply_matrix(&self, a: Elem) -> Elem {
        let mut out = 0u32;
        for (i, &row) in self.rows.iter().enumerate() {
            out |= ((row & a.0).count_ones() & 1) << i;
        }
        Elem(out)
    }

    pub fn eval(&self, ctx: &FieldCtx, a: Elem) -> Elem {
        eval_terms(ctx, &self.terms, a)
    }

    /// Basis of the kernel as field elements.
    pub fn kernel(&self) -> Vec<Elem> {
        kernel_basis(&self.rows, self.n).into_iter().map(Elem).collect()
    }

    pub fn kernel_dim(&self) -> u32 {
        kernel_basis(&self.rows, self.n).len() as u32
    }

    /// Dimension of `ker(self) /\ ker(other)`.
    pub fn kernel_intersection(&self, other: &LinearizedMap) -> u32 {
        let mut stacked = self.rows.clone();
        stacked.extend_from_slice(&other.rows);
        kernel_basis(&stacked, self.n).len() as u32
    }

    /// All solutions of `L(x) = b`: empty, or a coset of the kernel.
    pub fn solve(&self, ctx: &FieldCtx, b: Elem) -> Vec<Elem> {
        let particular = match solve_f2(&self.rows, self.n, b.0) {
            Some(x) => x,
            None => return Vec::new(),
        };
        let kernel = kernel_basis(&self.rows, self.n);
        let dim = kernel.len();
        let mut out = Vec::with_capacity(1 << dim);
        for mask in 0u32..(1 << dim) {
            let mut x = particular;
            for (bit, &k) in kernel.iter().enumerate() {
                if (mask >> bit) & 1 == 1 {
                    x ^= k;
                }
            }
            out.push(Elem(x));
        }
        out.sort_unstable();
        debug_assert!(out.iter().all(|&x| self.eval(ctx, x) == b));
        out
    }
}

fn eval_terms(ctx: &FieldCtx, terms: &[(Elem, u32)], a: Elem) -> Elem {
    let mut acc = Elem::ZERO;
    for &(c, j) in terms {
        acc = ctx.add(acc, ctx.mul(c, ctx.frobenius(a, j)));
    }
    acc
}

/// Kernel basis of an F2 matrix given as row bitmasks over `n` columns.
fn kernel_basis(rows: &[u32], n: u32) -> Vec<u32> {
    let mut mat: Vec<u32> = rows.iter().copied().filter(|&r| r != 0).collect();
    let mut pivot_col_of_row = Vec::new();
    let mut used_cols = 0u32;
    let mut r = 0;
    for col in 0..n {
        let pivot = (r..mat.len()).find(|&i| (mat[i] >> col) & 1 == 1);
        if let Some(p) = pivot {
            mat.swap(r, p);
            for i in 0..mat.len() {
                if i != r && (mat[i] >> col) & 1 == 1 {
                    mat[i] ^= mat[r];
                }
            }
            pivot_col_of_row.push(col);
            used_cols |= 1 << col;
            r += 1;
        }
    }
    let mut basis = Vec::new();
    for col in 0..n {
        if (used_cols >> col) & 1 == 1 {
            continue;
        }
        // free column: back-substitute
        let mut v = 1u32 << col;
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            if (mat[row] >> col) & 1 == 1 {
                v |= 1 << pc;
            }
        }
        basis.push(v);
    }
    basis
}

/// One solution of `M x = b` over F2, rows as bitmasks, `b` as a bitmask
/// over rows.
fn solve_f2(rows: &[u32], n: u32, b: u32) -> Option<u32> {
    let mut mat: Vec<(u32, u32)> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, (b >> i) & 1))
        .collect();
    let mut pivots: Vec<(usize, u32)> = Vec::new(); // (row, col)
    let mut r = 0;
    for col in 0..n {
        let pivot = (r..mat.len()).find(|&i| (mat[i].0 >> col) & 1 == 1);
        if let Some(p) = pivot {
            mat.swap(r, p);
            for i in 0..mat.len() {
                if i != r && (mat[i].0 >> col) & 1 == 1 {
                    mat[i].0 ^= mat[r].0;
                    mat[i].1 ^= mat[r].1;
                }
            }
            pivots.push((r, col));
            r += 1;
        }
    }
    // inconsistent rows?
    for &(row, rhs) in mat.iter() {
        if row == 0 && rhs == 1 {
            return None;
        }
    }
    let mut x = 0u32;
    for &(row, col) in &pivots {
        if mat[row].1 == 1 {
            x |= 1 << col;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rand_poly(ctx: &FieldCtx, rng: &mut SplitMix64, max_deg: usize) -> UniPoly {
        let deg = rng.below(max_deg as u64 + 1) as usize;
        UniPoly::from_coeffs((0..=deg).map(|_| rng.elem(ctx)).collect())
    }

    #[test]
    fn divmod_identity_property() {
        let ctx = FieldCtx::new(4).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..300 {
            let p = rand_poly(&ctx, &mut rng, 6);
            let q = rand_poly(&ctx, &mut rng, 4);
            if q.is_zero() {
                assert!(matches!(p.divmod(&ctx, &q), Err(Error::DivisionByZero)));
                continue;
            }
            let (quot, rem) = p.divmod(&ctx, &q).unwrap();
            assert_eq!(q.mul(&ctx, &quot).add(&rem), p);
            if !rem.is_zero() {
                assert!(rem.degree().unwrap() < q.degree().unwrap());
            }
        }
    }

    #[test]
    fn gcd_conventions_and_eval() {
        let ctx = FieldCtx::new(2).unwrap();
        // x^2 + x over F4 at omega: omega^2 + omega = 1
        let p = UniPoly::from_coeffs(vec![Elem::ZERO, Elem::ONE, Elem::ONE]);
        assert_eq!(p.eval(&ctx, Elem(0x2)), Elem(0x1));
        let scaled = p.scale(&ctx, Elem(0x2));
        assert_eq!(scaled.gcd(&ctx, &UniPoly::zero()), p.monic(&ctx));
    }

    #[test]
    fn compose_matches_pointwise() {
        let ctx = FieldCtx::new(3).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let p = rand_poly(&ctx, &mut rng, 4);
            let q = rand_poly(&ctx, &mut rng, 3);
            let comp = p.compose(&ctx, &q);
            for x in ctx.elems() {
                assert_eq!(comp.eval(&ctx, x), p.eval(&ctx, q.eval(&ctx, x)));
            }
        }
    }

    #[test]
    fn reduce_mod_field_preserves_function() {
        let ctx = FieldCtx::new(3).unwrap();
        let p = UniPoly::monomial(Elem(0x3), 20).add(&UniPoly::monomial(Elem::ONE, 9));
        let r = p.reduce_mod_field(&ctx);
        assert!(r.degree().unwrap() < 8);
        for x in ctx.elems() {
            assert_eq!(r.eval(&ctx, x), p.eval(&ctx, x));
        }
    }

    #[test]
    fn resultant_examples() {
        let ctx = FieldCtx::new(2).unwrap();
        let f = UniPoly::from_coeffs(vec![Elem::ONE, Elem::ONE]); // x + 1
        let g = UniPoly::from_coeffs(vec![Elem(0x2), Elem::ONE]); // x + omega
        let r = sylvester_resultant(&ctx, &f, &g).unwrap();
        assert_eq!(r, Elem(0x3)); // 1 + omega
        assert_eq!(sylvester_resultant(&ctx, &f, &f).unwrap(), Elem::ZERO);
        assert!(matches!(
            sylvester_resultant(&ctx, &f, &UniPoly::constant(Elem::ONE)),
            Err(Error::DegreeTooLow)
        ));
    }

    #[test]
    fn resultant_iff_common_factor() {
        // exhaustive degree <= 3 pairs over F4, plus random degree <= 4 over F8
        let ctx = FieldCtx::new(2).unwrap();
        let polys: Vec<UniPoly> = {
            let mut v = Vec::new();
            for mask in 0..(4u32 * 4 * 4 * 4) {
                let coeffs = vec![
                    Elem(mask & 3),
                    Elem((mask >> 2) & 3),
                    Elem((mask >> 4) & 3),
                    Elem((mask >> 6) & 3),
                ];
                let p = UniPoly::from_coeffs(coeffs);
                if p.degree().is_some_and(|d| d >= 1) {
                    v.push(p);
                }
            }
            v
        };
        for f in polys.iter().step_by(7) {
            for g in polys.iter().step_by(11) {
                let r = sylvester_resultant(&ctx, f, g).unwrap();
                let gcd = f.gcd(&ctx, g);
                assert_eq!(
                    r == Elem::ZERO,
                    gcd.degree().unwrap() >= 1,
                    "f={f:?} g={g:?}"
                );
            }
        }
        let ctx8 = FieldCtx::new(3).unwrap();
        let mut rng = SplitMix64::new(23);
        for _ in 0..400 {
            let f = rand_poly(&ctx8, &mut rng, 4);
            let g = rand_poly(&ctx8, &mut rng, 4);
            if f.degree().unwrap_or(0) < 1 || g.degree().unwrap_or(0) < 1 {
                continue;
            }
            let r = sylvester_resultant(&ctx8, &f, &g).unwrap();
            assert_eq!(r == Elem::ZERO, f.gcd(&ctx8, &g).degree().unwrap() >= 1);
        }
    }

    #[test]
    fn quadratic_matches_brute_force() {
        for n in [2u32, 3, 4] {
            let ctx = FieldCtx::new(n).unwrap();
            for a in ctx.elems() {
                for b in ctx.elems() {
                    let roots = solve_quadratic(&ctx, a, b);
                    let brute: Vec<Elem> = ctx
                        .elems()
                        .filter(|&x| {
                            ctx.add(ctx.mul(x, x), ctx.add(ctx.mul(a, x), b)).is_zero()
                        })
                        .collect();
                    let mut sorted = roots.clone();
                    sorted.sort_unstable();
                    assert_eq!(sorted, brute, "n={n} a={a} b={b}");
                    if !a.is_zero() {
                        assert!(roots.is_empty() || roots.len() == 2);
                    }
                }
            }
        }
        // spec example: x^2 + x + omega has no roots over F4
        let f4 = FieldCtx::new(2).unwrap();
        assert!(solve_quadratic(&f4, Elem::ONE, Elem(0x2)).is_empty());
        // factorization case b = 0
        let f16 = FieldCtx::new(4).unwrap();
        let mut r = solve_quadratic(&f16, Elem(0x7), Elem::ZERO);
        r.sort_unstable();
        assert_eq!(r, vec![Elem::ZERO, Elem(0x7)]);
    }

    #[test]
    fn cubic_matches_brute_force() {
        for n in [2u32, 3, 4, 5] {
            let ctx = FieldCtx::new(n).unwrap();
            for a in ctx.elems() {
                for b in ctx.elems().skip(1) {
                    let (unique, root) = cubic_unique_root(&ctx, a, b).unwrap();
                    let brute: Vec<Elem> = ctx
                        .elems()
                        .filter(|&x| {
                            ctx.add(
                                ctx.add(ctx.mul(ctx.mul(x, x), x), ctx.mul(a, x)),
                                b,
                            )
                            .is_zero()
                        })
                        .collect();
                    assert_eq!(unique, brute.len() == 1, "n={n} a={a} b={b}");
                    if unique {
                        assert_eq!(root.unwrap(), brute[0]);
                    }
                }
            }
        }
        let ctx = FieldCtx::new(2).unwrap();
        assert!(matches!(
            cubic_unique_root(&ctx, Elem::ONE, Elem::ZERO),
            Err(Error::ZeroConstantTerm)
        ));
    }

    #[test]
    fn quartic_criterion_cases() {
        let f16 = FieldCtx::new(4).unwrap();
        assert!(quartic_two_to_one(&f16, Elem::ZERO, Elem::ONE, Elem::ZERO));
        assert!(!quartic_two_to_one(&f16, Elem::ZERO, Elem::ZERO, Elem::ZERO));
        // subfield-relative version agrees with the plain one at m = n
        let f8 = FieldCtx::new(3).unwrap();
        for a3 in f8.elems() {
            for a2 in f8.elems() {
                for a1 in f8.elems() {
                    assert_eq!(
                        quartic_two_to_one(&f8, a3, a2, a1),
                        quartic_two_to_one_rel(&f8, 3, a3, a2, a1).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn linearized_kernel_examples() {
        let f16 = FieldCtx::new(4).unwrap();
        let l = LinearizedMap::frob_plus_id(&f16, 1); // x^2 + x
        assert_eq!(l.kernel(), vec![Elem::ONE]);
        assert_eq!(l.kernel_dim(), 1);

        // ker(x^2+x) cap ker(Tr to F2) = {0} for odd n
        let f8 = FieldCtx::new(3).unwrap();
        let l1 = LinearizedMap::frob_plus_id(&f8, 1);
        let tr = LinearizedMap::rel_trace(&f8, 1).unwrap();
        assert_eq!(l1.kernel_intersection(&tr), 0);
    }

    #[test]
    fn solve_linearized_counts() {
        for n in [3u32, 4, 6] {
            let ctx = FieldCtx::new(n).unwrap();
            let mut rng = SplitMix64::new(n as u64 * 31);
            let maps = [
                LinearizedMap::frob_plus_id(&ctx, 1),
                LinearizedMap::new(&ctx, vec![(Elem::ONE, 2), (Elem(0x3), 0)]),
                LinearizedMap::new(&ctx, vec![(Elem(0x2), 1)]),
            ];
            for l in &maps {
                let dim = l.kernel_dim();
                for _ in 0..40 {
                    let b = rng.elem(&ctx);
                    let sols = l.solve(&ctx, b);
                    assert!(sols.is_empty() || sols.len() == (1 << dim) as usize);
                    for &x in &sols {
                        assert_eq!(l.eval(&ctx, x), b);
                    }
                    // cross-check against exhaustive scan
                    let brute =
                        ctx.elems().filter(|&x| l.eval(&ctx, x) == b).count();
                    assert_eq!(sols.len(), brute);
                }
            }
        }
    }

    #[test]
    fn linearized_matrix_agrees_with_terms() {
        for n in [4u32, 9, 12] {
            let ctx = FieldCtx::new(n).unwrap();
            let l = LinearizedMap::new(&ctx, vec![(Elem(0x5 % (1 << n)), 2), (Elem::ONE, 0)]);
            for a in ctx.elems().take(1 << 12.min(n)) {
                assert_eq!(l.apply_matrix(a), l.eval(&ctx, a));
            }
        }
    }
}
