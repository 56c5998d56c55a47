//! Numeric verification of the two resultant factorization identities used
//! by the row-4 and row-8 proofs.
//!
//! Each check substitutes sampled field values for the parameters, computes
//! the Sylvester resultant of the two specialized polynomials in `Y`, and
//! compares against the factored right-hand side at the same point. Samples
//! where a leading `Y`-coefficient vanishes are skipped and counted (the
//! resultant of a specialization only matches the specialized resultant
//! when degrees are preserved).
//!
//! Two transcription notes, both settled by symbolic/numeric falsification:
//! the first identity's monomial prefactor is `yX` (not `xX`), and the
//! second identity's companion polynomial `Q` is the Frobenius image of `P`
//! cleared by `x^2 y^2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::families::niho_a_b;
use crate::field::{Elem, FieldCtx};
use crate::mapping::DomainSet;
use crate::polyalg::{sylvester_resultant, UniPoly};
use crate::rng::SplitMix64;

/// Which identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// Row-4 proof: `Res(P,Q,Y) = yX (x+y)^2 (xX+x+X) (Xy+xX+x+X)^2`
    /// over `F_(2^(2m))`, `m` even, `x, y` in the trace-slice set.
    Eq19,
    /// Row-8 proof: `Res(P,Q,Y) = y^2 X^2 (y+x)^2 (A(x,X) y^2 + B(x,X))`
    /// over `F_(2^(4m))`, `x, y` in `mu_(2^(2m)+1)^*`, `c` outside `F_(2^m)`.
    Eq25,
}

/// Outcome of a check run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub kind: &'static str,
    pub m: u32,
    pub total_checked: u64,
    pub mismatches: u64,
    pub skipped_degenerate: u64,
    pub first_mismatch: Option<String>,
}

impl IdentityReport {
    pub fn clean(&self) -> bool {
        self.mismatches == 0
    }
}

/// Run the check; `samples = 0` means exhaustive over the admissible tuples
/// (only sensible for the small eq25 instances), otherwise seeded sampling.
pub fn resultant_identity_check(
    kind: IdentityKind,
    m: u32,
    samples: u64,
    seed: u64,
) -> Result<IdentityReport> {
    match kind {
        IdentityKind::Eq19 => check_eq19(m, samples, seed),
        IdentityKind::Eq25 => check_eq25(m, samples, seed),
    }
}

fn check_eq19(m: u32, samples: u64, seed: u64) -> Result<IdentityReport> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::ConditionFailed { condition: "m even and >= 2", witness: None });
    }
    let n = 2 * m;
    let ctx = FieldCtx::new(n)?;
    let q = ctx.order();
    // S-bar = {x != 0 : Tr(x^(2 - 2^m)) = 1}
    let e = (q - 1 + 2 - (1u64 << m)) % (q - 1);
    let sbar: Vec<Elem> = ctx
        .elems()
        .skip(1)
        .filter(|&x| ctx.trace_abs(ctx.pow(x, e)) == Elem::ONE)
        .collect();
    if sbar.is_empty() {
        return Err(Error::ConditionFailed { condition: "sample set nonempty", witness: None });
    }
    let mut rng = SplitMix64::new(seed);
    let mut report = IdentityReport {
        kind: "eq19",
        m,
        total_checked: 0,
        mismatches: 0,
        skipped_degenerate: 0,
        first_mismatch: None,
    };
    for _ in 0..samples {
        let x = *rng.choose(&sbar);
        let y = *rng.choose(&sbar);
        check_eq19_point(&ctx, m, x, y, &mut report);
    }
    Ok(report)
}

fn check_eq19_point(ctx: &FieldCtx, m: u32, x: Elem, y: Elem, report: &mut IdentityReport) {
    let xx = ctx.pow(x, 1u64 << m); // X = x^(2^m)
    let mul = |a, b| ctx.mul(a, b);
    let add = |a, b| ctx.add(a, b);
    let y2 = mul(y, y);
    let x2 = mul(x, x);
    let xx2 = mul(xx, xx);
    // P = (y^2 X + X y + x^2 + x X + x^2 X) Y + y^2 X
    let a1 = [mul(y2, xx), mul(xx, y), x2, mul(x, xx), mul(x2, xx)]
        .into_iter()
        .fold(Elem::ZERO, add);
    let a0 = mul(y2, xx);
    // Q = (xy + x) Y^2 + (xy) Y + (X^2 x y + x X y + X^2 y)
    let b2 = add(mul(x, y), x);
    let b1 = mul(x, y);
    let b0 = [mul(mul(xx2, x), y), mul(mul(x, xx), y), mul(xx2, y)]
        .into_iter()
        .fold(Elem::ZERO, add);
    if a1.is_zero() || b2.is_zero() {
        report.skipped_degenerate += 1;
        return;
    }
    let p = UniPoly::from_coeffs(vec![a0, a1]);
    let q = UniPoly::from_coeffs(vec![b0, b1, b2]);
    let lhs = sylvester_resultant(ctx, &p, &q).expect("degrees checked");
    // yX (x+y)^2 (xX + x + X) (Xy + xX + x + X)^2
    let t3 = add(add(mul(x, xx), x), xx);
    let t4 = add(add(mul(xx, y), mul(x, xx)), add(x, xx));
    let rhs = mul(
        mul(mul(y, xx), mul(add(x, y), add(x, y))),
        mul(t3, mul(t4, t4)),
    );
    report.total_checked += 1;
    if lhs != rhs {
        report.mismatches += 1;
        report.first_mismatch.get_or_insert(format!("x={x} y={y}: {lhs} != {rhs}"));
    }
}

fn check_eq25(m: u32, samples: u64, seed: u64) -> Result<IdentityReport> {
    if m < 1 {
        return Err(Error::ConditionFailed { condition: "m >= 1", witness: None });
    }
    let n = 4 * m;
    let ctx = FieldCtx::new(n)?;
    let mu_star = DomainSet::Mu { d: (1u64 << (2 * m)) + 1, star: true }.enumerate(&ctx)?;
    let cs: Vec<Elem> = ctx
        .subfield_elems(2 * m)?
        .into_iter()
        .filter(|&c| !ctx.in_subfield(c, m).unwrap_or(true))
        .collect();
    let mut report = IdentityReport {
        kind: "eq25",
        m,
        total_checked: 0,
        mismatches: 0,
        skipped_degenerate: 0,
        first_mismatch: None,
    };
    if samples == 0 {
        for &c in &cs {
            for &x in &mu_star {
                for &y in &mu_star {
                    check_eq25_point(&ctx, m, x, y, c, &mut report);
                }
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..samples {
            let c = *rng.choose(&cs);
            let x = *rng.choose(&mu_star);
            let y = *rng.choose(&mu_star);
            check_eq25_point(&ctx, m, x, y, c, &mut report);
        }
    }
    Ok(report)
}

fn check_eq25_point(
    ctx: &FieldCtx,
    m: u32,
    x: Elem,
    y: Elem,
    c: Elem,
    report: &mut IdentityReport,
) {
    let mul = |a, b| ctx.mul(a, b);
    let add = |a, b| ctx.add(a, b);
    let xx = ctx.pow(x, 1u64 << m);
    let cbar = ctx.pow(c, 1u64 << m);
    let x2 = mul(x, x);
    let y2 = mul(y, y);
    let xx2 = mul(xx, xx);
    // P = (y x^2 X + X y) Y^2 + (y^2 x X^2 + y^2 c X + c x^2 X + y^2 x + X^2 x + x) Y
    //     + (y x^2 X + X y)
    let p_lead = add(mul(mul(y, x2), xx), mul(xx, y));
    let p_mid = [
        mul(mul(y2, x), xx2),
        mul(mul(y2, c), xx),
        mul(mul(c, x2), xx),
        mul(y2, x),
        mul(xx2, x),
        x,
    ]
    .into_iter()
    .fold(Elem::ZERO, add);
    // Q: the Frobenius image of P cleared by x^2 y^2
    let q2 = mul(y, add(add(mul(x2, xx), mul(cbar, x)), xx));
    let q1 = mul(x, add(add(mul(xx2, y2), xx2), add(y2, Elem::ONE)));
    let q0 = mul(y, add(add(mul(mul(cbar, x), xx2), mul(x2, xx)), xx));
    if p_lead.is_zero() || q2.is_zero() {
        report.skipped_degenerate += 1;
        return;
    }
    let p = UniPoly::from_coeffs(vec![p_lead, p_mid, p_lead]);
    let q = UniPoly::from_coeffs(vec![q0, q1, q2]);
    let lhs = sylvester_resultant(ctx, &p, &q).expect("degrees checked");
    let (a_val, b_val) = niho_a_b(ctx, x, xx, c, cbar);
    let rhs = mul(
        mul(mul(y2, xx2), mul(add(y, x), add(y, x))),
        add(mul(a_val, y2), b_val),
    );
    report.total_checked += 1;
    if lhs != rhs {
        report.mismatches += 1;
        report
            .first_mismatch
            .get_or_insert(format!("x={x} y={y} c={c}: {lhs} != {rhs}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq19_m2_clean() {
        let r = resultant_identity_check(IdentityKind::Eq19, 2, 100, 7).unwrap();
        assert_eq!(r.mismatches, 0, "{:?}", r.first_mismatch);
        assert!(r.total_checked > 0);
    }

    #[test]
    fn eq25_m1_exhaustive_clean() {
        let r = resultant_identity_check(IdentityKind::Eq25, 1, 0, 0).unwrap();
        assert_eq!(r.mismatches, 0, "{:?}", r.first_mismatch);
        // 2 admissible c values, 4 x, 4 y
        assert_eq!(r.total_checked + r.skipped_degenerate, 32);
    }

    #[test]
    fn eq25_m2_sampled_clean() {
        let r = resultant_identity_check(IdentityKind::Eq25, 2, 150, 11).unwrap();
        assert_eq!(r.mismatches, 0, "{:?}", r.first_mismatch);
    }

    #[test]
    fn eq19_requires_even_m() {
        assert!(resultant_identity_check(IdentityKind::Eq19, 3, 10, 1).is_err());
    }

    #[test]
    fn degenerate_point_counts_as_skip() {
        // y = 1 kills the leading Y^2 coefficient of the second polynomial:
        // the point must be skipped, not compared
        let ctx = FieldCtx::new(4).unwrap();
        let mut report = IdentityReport {
            kind: "eq19",
            m: 2,
            total_checked: 0,
            mismatches: 0,
            skipped_degenerate: 0,
            first_mismatch: None,
        };
        check_eq19_point(&ctx, 2, Elem(0x3), Elem(0x1), &mut report);
        assert_eq!(report.skipped_degenerate, 1);
        assert_eq!(report.total_checked, 0);
        assert_eq!(report.mismatches, 0);
    }
}
