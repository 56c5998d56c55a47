//! Reduction of maps on `S = {z + delta | z in F_(2^m)}` to maps on the
//! subgroup `mu_(2^m+1)^*`, and the Moebius bijection used by the Niho
//! family proofs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Elem, ExpInt, FieldCtx};
use crate::mapping::{is_two_to_one_fn, DomainSet};
use crate::polyalg::UniPoly;

/// Outcome of the reduction: both two-to-one verdicts (the lemma says they
/// are equal) and the enumeration check that `phi0(x) = x^(2^m - 1)` is an
/// injection from `S` onto `mu^*`.
#[derive(Debug, Clone)]
pub struct MuReduction {
    pub h_two_to_one: bool,
    pub phi_two_to_one: bool,
    pub phi0_bijective: bool,
    pub s_elems: Vec<Elem>,
    pub mu_star: Vec<Elem>,
}

impl MuReduction {
    pub fn verdicts_agree(&self) -> bool {
        self.h_two_to_one == self.phi_two_to_one
    }
}

/// `h(x) = x^r hbar(x^(2^m - 1))` on `S` versus
/// `phi(x) = x^r hbar(x)^(2^m - 1)` on `mu_(2^m+1)^*`; requires
/// `delta` outside `F_(2^m)` and a context of degree `2m`.
pub fn mu_reduction(
    ctx: &FieldCtx,
    hbar: &UniPoly,
    r: ExpInt,
    delta: Elem,
    m: u32,
) -> Result<MuReduction> {
    if ctx.degree() != 2 * m {
        return Err(Error::NotADivisor { m, n: ctx.degree() });
    }
    if ctx.in_subfield(delta, m)? {
        return Err(Error::DeltaInSubfield);
    }
    let qm = 1u64 << m;
    let s_elems: Vec<Elem> = ctx
        .subfield_elems(m)?
        .into_iter()
        .map(|z| ctx.add(z, delta))
        .collect();
    let mu_star = DomainSet::Mu { d: qm + 1, star: true }.enumerate(ctx)?;

    // phi0 injects S into mu^*
    let mut seen: Vec<Elem> = Vec::with_capacity(s_elems.len());
    let mut injective = true;
    for &x in &s_elems {
        let img = ctx.pow(x, qm - 1);
        if !mu_star.contains(&img) {
            injective = false;
            break;
        }
        if seen.contains(&img) {
            injective = false;
            break;
        }
        seen.push(img);
    }
    let phi0_bijective = injective && seen.len() == mu_star.len();

    let h = |x: Elem| ctx.mul(ctx.pow(x, r), hbar.eval(ctx, ctx.pow(x, qm - 1)));
    let phi = |x: Elem| ctx.mul(ctx.pow(x, r), ctx.pow(hbar.eval(ctx, x), qm - 1));

    Ok(MuReduction {
        h_two_to_one: is_two_to_one_fn(ctx, &s_elems, h),
        phi_two_to_one: is_two_to_one_fn(ctx, &mu_star, phi),
        phi0_bijective,
        s_elems,
        mu_star,
    })
}

/// `psi(z) = (1 + theta*z)/(theta + z)`, a bijection from
/// `mu_(2^m+1)^* \ {theta}` to `F_(2^m) \ {1}`.
pub fn moebius_pair(ctx: &FieldCtx, m: u32, theta: Elem, z: Elem) -> Result<Elem> {
    let qm = 1u64 << m;
    let in_mu_star = |a: Elem| !a.is_zero() && ctx.pow(a, qm + 1) == Elem::ONE && a != Elem::ONE;
    if !in_mu_star(theta) {
        return Err(Error::NotInDomain { elem: theta });
    }
    if !in_mu_star(z) {
        return Err(Error::NotInDomain { elem: z });
    }
    if z == theta {
        return Err(Error::PoleAtTheta);
    }
    let num = ctx.add(Elem::ONE, ctx.mul(theta, z));
    let den = ctx.add(theta, z);
    let out = ctx.div(num, den)?;
    debug_assert!(ctx.in_subfield(out, m).unwrap_or(false));
    Ok(out)
}
