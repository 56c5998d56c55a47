//! Evaluable mapping specifications over enumerable domains, preimage
//! profiles, the two-to-one verdict, and the involution a two-to-one map
//! induces by pairing the two points of each fiber.
//!
//! A two-to-one map `f` on an even-cardinality set `D` pairs every `a` with
//! the unique `b != a` satisfying `f(a) = f(b)`; the pairing is an involution
//! on `D` without fixed points. [`derive_involution`] materializes it,
//! [`interpolate_involution`] recovers its reduced polynomial on a full
//! field, and [`count_derivers`] counts how many two-to-one maps induce a
//! given pairing (`(2^n)! / (2^(n-1))!`).

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Elem, ExpInt, FieldCtx};
use crate::polyalg::UniPoly;

/// Inner map of one [`MappingSpec`] term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inner {
    /// The identity `x`.
    X,
    /// Affine-linearized `sum c_j x^(2^j) + delta`.
    Affine { terms: Vec<(Elem, u32)>, delta: Elem },
}

impl Inner {
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        match self {
            Inner::X => x,
            Inner::Affine { terms, delta } => {
                let mut acc = *delta;
                for &(c, j) in terms {
                    acc = ctx.add(acc, ctx.mul(c, ctx.frobenius(x, j)));
                }
                acc
            }
        }
    }
}

/// One term `c * inner(x)^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub c: Elem,
    pub inner: Inner,
    pub e: ExpInt,
}

/// A closed-form map: the sum of its terms. The constant-term convention
/// `0^0 = 1` makes `c * inner^0` evaluate to `c` everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSpec {
    pub terms: Vec<Term>,
}

impl MappingSpec {
    pub fn new(terms: Vec<Term>) -> MappingSpec {
        MappingSpec { terms }
    }

    pub fn identity() -> MappingSpec {
        MappingSpec::new(vec![Term { c: Elem::ONE, inner: Inner::X, e: 1 }])
    }

    pub fn constant(c: Elem) -> MappingSpec {
        MappingSpec::new(vec![Term { c, inner: Inner::X, e: 0 }])
    }

    /// `c * x^e`.
    pub fn monomial(c: Elem, e: ExpInt) -> MappingSpec {
        MappingSpec::new(vec![Term { c, inner: Inner::X, e }])
    }

    /// The catalog shape `(x^(2^k) + x + delta)^s + c*x`.
    pub fn family_shape(k: u32, delta: Elem, s: ExpInt, c: Elem) -> MappingSpec {
        MappingSpec::new(vec![
            Term {
                c: Elem::ONE,
                inner: Inner::Affine { terms: vec![(Elem::ONE, k), (Elem::ONE, 0)], delta },
                e: s,
            },
            Term { c, inner: Inner::X, e: 1 },
        ])
    }

    /// A linearized polynomial `sum c_j x^(2^j)` as a spec.
    pub fn linearized(terms: Vec<(Elem, u32)>) -> MappingSpec {
        MappingSpec::new(vec![Term {
            c: Elem::ONE,
            inner: Inner::Affine { terms, delta: Elem::ZERO },
            e: 1,
        }])
    }

    /// Monomial terms of a reduced univariate polynomial.
    pub fn from_unipoly(p: &UniPoly) -> MappingSpec {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, &c)| Term { c, inner: Inner::X, e: e as u64 })
            .collect();
        MappingSpec::new(terms)
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for t in &self.terms {
            let base = t.inner.eval(ctx, x);
            acc = ctx.add(acc, ctx.mul(t.c, ctx.pow(base, t.e)));
        }
        acc
    }
}

/// An enumerable subset of the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSet {
    /// All `2^n` elements.
    Full,
    /// `{x : Tr^n_m(x) = gamma}`.
    TraceSlice { m: u32, gamma: Elem },
    /// The order-`d` subgroup of the multiplicative group; `star` excludes 1.
    Mu { d: u64, star: bool },
    /// `{spec(x) : x in base}`, deduplicated.
    Image { spec: Box<MappingSpec>, base: Box<DomainSet> },
    /// Explicit members (deduplicated on enumeration).
    Explicit { elems: Vec<Elem> },
}

impl DomainSet {
    /// Members in ascending order, each exactly once.
    pub fn enumerate(&self, ctx: &FieldCtx) -> Result<Vec<Elem>> {
        match self {
            DomainSet::Full => Ok(ctx.elems().collect()),
            DomainSet::TraceSlice { m, gamma } => {
                if *m == 0 || !ctx.degree().is_multiple_of(*m) {
                    return Err(Error::NotADivisor { m: *m, n: ctx.degree() });
                }
                Ok(ctx
                    .elems()
                    .filter(|&a| ctx.trace_rel(a, *m).expect("checked divisor") == *gamma)
                    .collect())
            }
            DomainSet::Mu { d, star } => {
                let group = ctx.order() - 1;
                if *d == 0 || !group.is_multiple_of(*d) {
                    return Err(Error::NotADivisor { m: *d as u32, n: ctx.degree() });
                }
                let g = ctx.generator();
                if g.is_zero() {
                    // no tables at this degree; fall back to a full scan
                    let mut out: Vec<Elem> = ctx
                        .elems()
                        .skip(1)
                        .filter(|&a| ctx.pow(a, *d) == Elem::ONE)
                        .collect();
                    if *star {
                        out.retain(|&a| a != Elem::ONE);
                    }
                    return Ok(out);
                }
                let step = group / d;
                let mut out: Vec<Elem> = (0..*d).map(|j| ctx.pow(g, step * j)).collect();
                if *star {
                    out.retain(|&a| a != Elem::ONE);
                }
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
            DomainSet::Image { spec, base } => {
                let mut out: Vec<Elem> = base
                    .enumerate(ctx)?
                    .into_iter()
                    .map(|x| spec.eval(ctx, x))
                    .collect();
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
            DomainSet::Explicit { elems } => {
                let mut out = elems.clone();
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
        }
    }
}

/// Histogram of preimage counts: `histogram[k]` = number of image values
/// with exactly `k` preimages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageProfile {
    pub histogram: BTreeMap<u64, u64>,
    pub domain_size: u64,
    pub image_size: u64,
}

impl PreimageProfile {
    /// `sum count * multiplicity` must reproduce the domain size.
    pub fn mass(&self) -> u64 {
        self.histogram.iter().map(|(k, v)| k * v).sum()
    }
}

/// Profile of an arbitrary function over an enumerated domain.
pub fn preimage_profile_fn(
    ctx: &FieldCtx,
    domain: &[Elem],
    mut f: impl FnMut(Elem) -> Elem,
) -> PreimageProfile {
    // Bucket counts indexed by image mask; the field order bounds the index.
    let mut counts = vec![0u32; ctx.order() as usize];
    for &a in domain {
        counts[f(a).0 as usize] += 1;
    }
    let mut histogram = BTreeMap::new();
    let mut image_size = 0u64;
    for &c in counts.iter() {
        if c > 0 {
            *histogram.entry(c as u64).or_insert(0) += 1;
            image_size += 1;
        }
    }
    let profile = PreimageProfile { histogram, domain_size: domain.len() as u64, image_size };
    debug_assert_eq!(profile.mass(), domain.len() as u64);
    profile
}

pub fn preimage_profile(ctx: &FieldCtx, spec: &MappingSpec, dom: &DomainSet) -> Result<PreimageProfile> {
    let domain = dom.enumerate(ctx)?;
    Ok(preimage_profile_fn(ctx, &domain, |x| spec.eval(ctx, x)))
}

/// Distinct outputs of `spec` over `dom`, as an explicit domain.
pub fn image_set(ctx: &FieldCtx, spec: &MappingSpec, dom: &DomainSet) -> Result<DomainSet> {
    let img = DomainSet::Image { spec: Box::new(spec.clone()), base: Box::new(dom.clone()) };
    Ok(DomainSet::Explicit { elems: img.enumerate(ctx)? })
}

/// The two-to-one verdict on a profile: even domains must have all preimage
/// counts equal to 2; odd domains additionally allow exactly one value with
/// a single preimage.
pub fn profile_is_two_to_one(profile: &PreimageProfile) -> bool {
    if profile.domain_size.is_multiple_of(2) {
        profile.histogram.keys().all(|&k| k == 2)
    } else {
        profile.histogram.get(&2).copied().unwrap_or(0) == (profile.domain_size - 1) / 2
            && profile.histogram.get(&1).copied().unwrap_or(0) == 1
            && profile.histogram.len() <= 2
    }
}

pub fn is_two_to_one_fn(
    ctx: &FieldCtx,
    domain: &[Elem],
    f: impl FnMut(Elem) -> Elem,
) -> bool {
    profile_is_two_to_one(&preimage_profile_fn(ctx, domain, f))
}

pub fn is_two_to_one(ctx: &FieldCtx, spec: &MappingSpec, dom: &DomainSet) -> Result<bool> {
    Ok(profile_is_two_to_one(&preimage_profile(ctx, spec, dom)?))
}

/// The involution induced by a two-to-one map: sorted `(a, partner(a))`
/// entries, one per domain element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingTable {
    entries: Vec<(Elem, Elem)>,
}

impl PairingTable {
    /// Build from a complete partner assignment; checks the involution
    /// invariants (`I(I(a)) = a`, `I(a) != a`).
    pub fn new(mut entries: Vec<(Elem, Elem)>) -> Result<PairingTable> {
        entries.sort_unstable();
        let table = PairingTable { entries };
        for &(a, b) in &table.entries {
            if a == b {
                return Err(Error::NotTwoToOne);
            }
            if table.partner(b) != Some(a) {
                return Err(Error::NotTwoToOne);
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Elem> + '_ {
        self.entries.iter().map(|&(a, _)| a)
    }

    pub fn entries(&self) -> &[(Elem, Elem)] {
        &self.entries
    }

    pub fn partner(&self, a: Elem) -> Option<Elem> {
        self.entries
            .binary_search_by_key(&a, |&(x, _)| x)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Unordered pairs, each once, `(min, max)` ascending.
    pub fn unordered_pairs(&self) -> Vec<(Elem, Elem)> {
        self.entries.iter().filter(|&&(a, b)| a < b).copied().collect()
    }
}

/// Pair every domain element with the other point of its fiber.
pub fn derive_involution_fn(
    ctx: &FieldCtx,
    domain: &[Elem],
    mut f: impl FnMut(Elem) -> Elem,
) -> Result<PairingTable> {
    if !domain.len().is_multiple_of(2) {
        return Err(Error::OddDomain);
    }
    debug_assert!(domain.iter().all(|&a| ctx.contains(a)));
    let mut keyed: Vec<(Elem, Elem)> = domain.iter().map(|&a| (f(a), a)).collect();
    keyed.sort_unstable();
    let mut entries = Vec::with_capacity(domain.len());
    let mut i = 0;
    while i < keyed.len() {
        let j = keyed[i..].iter().take_while(|&&(v, _)| v == keyed[i].0).count();
        if j != 2 {
            return Err(Error::NotTwoToOne);
        }
        let (a, b) = (keyed[i].1, keyed[i + 1].1);
        entries.push((a, b));
        entries.push((b, a));
        i += 2;
    }
    PairingTable::new(entries)
}

pub fn derive_involution(
    ctx: &FieldCtx,
    spec: &MappingSpec,
    dom: &DomainSet,
) -> Result<PairingTable> {
    let domain = dom.enumerate(ctx)?;
    derive_involution_fn(ctx, &domain, |x| spec.eval(ctx, x))
}

/// Reduced polynomial (degree < 2^n) agreeing with the table at every field
/// element, by the indicator form of Lagrange interpolation:
/// `I(x) = sum_a I(a) (1 + (x+a)^(q-1))`.
pub fn interpolate_involution(ctx: &FieldCtx, table: &PairingTable) -> Result<UniPoly> {
    let q = ctx.order();
    if table.len() as u64 != q {
        return Err(Error::DomainNotFullField);
    }
    // (x+a)^(q-1) = sum_i a^(q-1-i) x^i, so
    // coeff[0] = sum_a I(a)(1 + a^(q-1)) and coeff[i>0] = sum_a I(a) a^(q-1-i).
    let mut coeffs = vec![Elem::ZERO; q as usize];
    for &(a, ia) in table.entries() {
        coeffs[0] = ctx.add(coeffs[0], ctx.mul(ia, ctx.add(Elem::ONE, ctx.pow(a, q - 1))));
        for i in 1..q {
            coeffs[i as usize] = ctx.add(coeffs[i as usize], ctx.mul(ia, ctx.pow(a, q - 1 - i)));
        }
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Conjugation transport: given the involution of `f` on `D` and a bijection
/// `p : S -> D`, the involution of `f o p` on `S` is `p^-1 o I o p`.
pub fn conjugate_involution(
    ctx: &FieldCtx,
    table: &PairingTable,
    p: &MappingSpec,
    s: &DomainSet,
) -> Result<PairingTable> {
    let s_elems = s.enumerate(ctx)?;
    let d_elems: Vec<Elem> = table.domain().collect();
    if s_elems.len() != d_elems.len() {
        return Err(Error::NotBijective { witness: None });
    }
    let mut p_inv: BTreeMap<Elem, Elem> = BTreeMap::new();
    for &a in &s_elems {
        let img = p.eval(ctx, a);
        if let Some(&prev) = p_inv.get(&img) {
            return Err(Error::NotBijective { witness: Some((prev, a)) });
        }
        p_inv.insert(img, a);
    }
    for &d in &d_elems {
        if !p_inv.contains_key(&d) {
            return Err(Error::NotBijective { witness: None });
        }
    }
    let mut entries = Vec::with_capacity(s_elems.len());
    for &a in &s_elems {
        let pa = p.eval(ctx, a);
        let ipa = table.partner(pa).ok_or(Error::NotInDomain { elem: pa })?;
        entries.push((a, p_inv[&ipa]));
    }
    PairingTable::new(entries)
}

/// If `f` and `fbar` (both two-to-one on `A`) induce the same involution,
/// return the outer bijection `p` with `fbar = p o f` as `(f(a), fbar(a))`
/// pairs; otherwise report the first point where the pairings differ.
pub fn outer_bijection_witness(
    ctx: &FieldCtx,
    f: &MappingSpec,
    fbar: &MappingSpec,
    a: &DomainSet,
) -> Result<Vec<(Elem, Elem)>> {
    let domain = a.enumerate(ctx)?;
    if domain.len() % 2 != 0 {
        return Err(Error::OddDomain);
    }
    let i_f = derive_involution_fn(ctx, &domain, |x| f.eval(ctx, x))?;
    let i_fbar = derive_involution_fn(ctx, &domain, |x| fbar.eval(ctx, x))?;
    for &x in &domain {
        let pf = i_f.partner(x).unwrap();
        let pb = i_fbar.partner(x).unwrap();
        if pf != pb {
            return Err(Error::InvolutionsDiffer { at: x, first: pf, second: pb });
        }
    }
    let mut pairs: BTreeMap<Elem, Elem> = BTreeMap::new();
    let mut seen_targets: BTreeMap<Elem, Elem> = BTreeMap::new();
    for &x in &domain {
        let from = f.eval(ctx, x);
        let to = fbar.eval(ctx, x);
        if let Some(&prev) = pairs.get(&from) {
            assert_eq!(prev, to, "pairing equality must make p well-defined");
        }
        if let Some(&src) = seen_targets.get(&to) {
            if src != from {
                return Err(Error::NotBijective { witness: Some((src, from)) });
            }
        }
        pairs.insert(from, to);
        seen_targets.insert(to, from);
    }
    Ok(pairs.into_iter().collect())
}

/// Enumeration ceiling for [`count_derivers`].
pub const COUNT_MAX_DEGREE: u32 = 3;

/// Count, by direct construction, the two-to-one maps on the full field whose
/// derived involution is `table`: assign distinct values to the `2^(n-1)`
/// pairs in every possible way and verify each candidate. Equals
/// `(2^n)! / (2^(n-1))!`.
pub fn count_derivers(ctx: &FieldCtx, table: &PairingTable) -> Result<u64> {
    if ctx.degree() > COUNT_MAX_DEGREE {
        return Err(Error::TooLarge { n: ctx.degree(), max: COUNT_MAX_DEGREE });
    }
    let q = ctx.order();
    if table.len() as u64 != q {
        return Err(Error::DomainNotFullField);
    }
    let pairs = table.unordered_pairs();
    let mut count = 0u64;
    let mut chosen: Vec<Elem> = Vec::with_capacity(pairs.len());
    fn rec(
        ctx: &FieldCtx,
        pairs: &[(Elem, Elem)],
        table: &PairingTable,
        chosen: &mut Vec<Elem>,
        count: &mut u64,
    ) {
        if chosen.len() == pairs.len() {
            // Candidate f: pair i maps to chosen[i]. Distinctness makes it
            // two-to-one by construction; confirm its involution is `table`.
            let mut values: BTreeMap<Elem, Elem> = BTreeMap::new();
            for (i, &(a, b)) in pairs.iter().enumerate() {
                values.insert(a, chosen[i]);
                values.insert(b, chosen[i]);
            }
            let domain: Vec<Elem> = ctx.elems().collect();
            let derived = derive_involution_fn(ctx, &domain, |x| values[&x])
                .expect("constructed map is two-to-one");
            if derived == *table {
                *count += 1;
            }
            return;
        }
        for v in ctx.elems() {
            if chosen.contains(&v) {
                continue;
            }
            chosen.push(v);
            rec(ctx, pairs, table, chosen, count);
            chosen.pop();
        }
    }
    rec(ctx, &pairs, table, &mut chosen, &mut count);
    Ok(count)
}

/// Brute-force oracle at n = 2: scan all `4^4 = 256` functions on F4, filter
/// the two-to-one ones whose derived involution is `table`.
pub fn count_derivers_oracle_n2(ctx: &FieldCtx, table: &PairingTable) -> Result<u64> {
    if ctx.degree() != 2 {
        return Err(Error::TooLarge { n: ctx.degree(), max: 2 });
    }
    let domain: Vec<Elem> = ctx.elems().collect();
    let mut count = 0u64;
    for code in 0u32..256 {
        let f = |x: Elem| Elem((code >> (2 * x.0)) & 3);
        if !is_two_to_one_fn(ctx, &domain, f) {
            continue;
        }
        if derive_involution_fn(ctx, &domain, f).ok().as_ref() == Some(table) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldCtx {
        FieldCtx::new(2).unwrap()
    }

    fn f16() -> FieldCtx {
        FieldCtx::new(4).unwrap()
    }

    fn frob_plus_id_spec() -> MappingSpec {
        MappingSpec::linearized(vec![(Elem::ONE, 1), (Elem::ONE, 0)])
    }

    #[test]
    fn eval_examples() {
        let ctx = f4();
        let id = MappingSpec::identity();
        for x in ctx.elems() {
            assert_eq!(id.eval(&ctx, x), x);
        }
        // x^2 + x at omega+1: omega^2+omega = 1
        let spec = frob_plus_id_spec();
        assert_eq!(spec.eval(&ctx, Elem(0x3)), Elem(0x1));
        // family shape image size over F16
        let ctx16 = f16();
        let fam = MappingSpec::family_shape(1, Elem(0x8), 5, Elem::ONE);
        let img = image_set(&ctx16, &fam, &DomainSet::Full).unwrap();
        assert_eq!(img.enumerate(&ctx16).unwrap().len(), 8);
    }

    #[test]
    fn constant_term_uniform_at_zero() {
        let ctx = f16();
        let spec = MappingSpec::constant(Elem(0x9));
        for x in ctx.elems() {
            assert_eq!(spec.eval(&ctx, x), Elem(0x9));
        }
    }

    #[test]
    fn profiles_and_verdicts() {
        let ctx = f4();
        let dom = DomainSet::Full;
        let sq = MappingSpec::monomial(Elem::ONE, 2);
        let p = preimage_profile(&ctx, &sq, &dom).unwrap();
        assert_eq!(p.histogram, BTreeMap::from([(1, 4)]));
        assert!(!is_two_to_one(&ctx, &sq, &dom).unwrap());

        let lin = frob_plus_id_spec();
        let p = preimage_profile(&ctx, &lin, &dom).unwrap();
        assert_eq!(p.histogram, BTreeMap::from([(2, 2)]));
        assert!(is_two_to_one(&ctx, &lin, &dom).unwrap());
    }

    #[test]
    fn mu_subgroup_profile() {
        // x + x^-1 on mu_5 in F16: 1 is self-paired, the other four pair up
        let ctx = f16();
        let dom = DomainSet::Mu { d: 5, star: false };
        let elems = dom.enumerate(&ctx).unwrap();
        assert_eq!(elems.len(), 5);
        for &z in &elems {
            assert_eq!(ctx.pow(z, 5), Elem::ONE);
        }
        // x + x^(d-1) restricted to mu_d equals x + x^-1
        let spec = MappingSpec::new(vec![
            Term { c: Elem::ONE, inner: Inner::X, e: 1 },
            Term { c: Elem::ONE, inner: Inner::X, e: ctx.order() - 2 },
        ]);
        let p = preimage_profile_fn(&ctx, &elems, |x| spec.eval(&ctx, x));
        assert_eq!(p.histogram, BTreeMap::from([(1, 1), (2, 2)]));
        assert!(profile_is_two_to_one(&p));
    }

    #[test]
    fn derive_involution_linearized() {
        let ctx = f16();
        let lin = frob_plus_id_spec();
        let table = derive_involution(&ctx, &lin, &DomainSet::Full).unwrap();
        // kernel of x^2+x is {0,1}: the involution is x -> x + 1
        for a in ctx.elems() {
            assert_eq!(table.partner(a), Some(ctx.add(a, Elem::ONE)));
        }
        // bijection rejected
        let sq = MappingSpec::monomial(Elem::ONE, 2);
        assert!(matches!(
            derive_involution(&ctx, &sq, &DomainSet::Full),
            Err(Error::NotTwoToOne)
        ));
    }

    #[test]
    fn derive_involution_apn_derivative() {
        // F8, F(x)=x^3 is APN; D_a F(x) = F(x) + F(x+a) pairs x with x + a.
        let ctx = FieldCtx::new(3).unwrap();
        let a = Elem(0x5);
        let cube = |x: Elem| ctx.pow(x, 3);
        let domain: Vec<Elem> = ctx.elems().collect();
        let table =
            derive_involution_fn(&ctx, &domain, |x| ctx.add(cube(x), cube(ctx.add(x, a))))
                .unwrap();
        for x in ctx.elems() {
            assert_eq!(table.partner(x), Some(ctx.add(x, a)));
        }
    }

    #[test]
    fn involution_invariants_and_pairing() {
        let ctx = f16();
        let fam = MappingSpec::family_shape(1, Elem(0x8), 5, Elem::ONE);
        let table = derive_involution(&ctx, &fam, &DomainSet::Full).unwrap();
        for a in ctx.elems() {
            let b = table.partner(a).unwrap();
            assert_ne!(a, b);
            assert_eq!(table.partner(b), Some(a));
            assert_eq!(fam.eval(&ctx, a), fam.eval(&ctx, b));
        }
    }

    #[test]
    fn interpolation_contract() {
        let ctx = f4();
        // affine involution x+1 interpolates to the polynomial x + 1
        let entries: Vec<(Elem, Elem)> =
            ctx.elems().map(|a| (a, ctx.add(a, Elem::ONE))).collect();
        let table = PairingTable::new(entries).unwrap();
        let poly = interpolate_involution(&ctx, &table).unwrap();
        assert_eq!(poly.coeffs(), &[Elem::ONE, Elem::ONE]);

        // generic table reproduces itself pointwise, degree < q
        let ctx = f16();
        let fam = MappingSpec::family_shape(1, Elem(0x8), 5, Elem::ONE);
        let table = derive_involution(&ctx, &fam, &DomainSet::Full).unwrap();
        let poly = interpolate_involution(&ctx, &table).unwrap();
        assert!(poly.degree().unwrap() < 16);
        for a in ctx.elems() {
            assert_eq!(poly.eval(&ctx, a), table.partner(a).unwrap());
        }
    }

    #[test]
    fn conjugation_transport() {
        let ctx = f16();
        let f = frob_plus_id_spec();
        let i_f = derive_involution(&ctx, &f, &DomainSet::Full).unwrap();

        // p = identity leaves the table unchanged
        let same =
            conjugate_involution(&ctx, &i_f, &MappingSpec::identity(), &DomainSet::Full).unwrap();
        assert_eq!(same, i_f);

        // p(x) = omega * x: involution of f o p equals the conjugate
        let omega = Elem(0x2);
        let p = MappingSpec::monomial(omega, 1);
        let conj = conjugate_involution(&ctx, &i_f, &p, &DomainSet::Full).unwrap();
        let domain: Vec<Elem> = ctx.elems().collect();
        let direct =
            derive_involution_fn(&ctx, &domain, |x| f.eval(&ctx, p.eval(&ctx, x))).unwrap();
        assert_eq!(conj, direct);

        // constant p is rejected
        let bad = MappingSpec::constant(Elem::ONE);
        assert!(matches!(
            conjugate_involution(&ctx, &i_f, &bad, &DomainSet::Full),
            Err(Error::NotBijective { .. })
        ));
    }

    #[test]
    fn outer_bijection_cases() {
        let ctx = f16();
        let f = frob_plus_id_spec();
        // fbar = f: p is the identity on Im(f)
        let p = outer_bijection_witness(&ctx, &f, &f, &DomainSet::Full).unwrap();
        for &(from, to) in &p {
            assert_eq!(from, to);
        }
        // fbar = squaring o f: p is squaring restricted to Im(f)
        let fbar = MappingSpec::linearized(vec![(Elem::ONE, 2), (Elem::ONE, 1)]);
        let domain: Vec<Elem> = ctx.elems().collect();
        for &x in &domain {
            let lhs = fbar.eval(&ctx, x);
            let fx = f.eval(&ctx, x);
            assert_eq!(lhs, ctx.mul(fx, fx));
        }
        let p = outer_bijection_witness(&ctx, &f, &fbar, &DomainSet::Full).unwrap();
        for &(from, to) in &p {
            assert_eq!(to, ctx.mul(from, from));
        }
        // a two-to-one map with a different pairing is refused with a witness
        let other = MappingSpec::family_shape(1, Elem(0x8), 5, Elem::ONE);
        assert!(matches!(
            outer_bijection_witness(&ctx, &f, &other, &DomainSet::Full),
            Err(Error::InvolutionsDiffer { .. })
        ));
    }

    #[test]
    fn counting_formula_small() {
        let ctx = f4();
        let table = PairingTable::new(
            ctx.elems().map(|a| (a, ctx.add(a, Elem::ONE))).collect(),
        )
        .unwrap();
        assert_eq!(count_derivers(&ctx, &table).unwrap(), 12);
        assert_eq!(count_derivers_oracle_n2(&ctx, &table).unwrap(), 12);
        // a different fixed-point-free involution gives the same count
        let table2 = PairingTable::new(
            ctx.elems().map(|a| (a, ctx.add(a, Elem(0x2)))).collect(),
        )
        .unwrap();
        assert_eq!(count_derivers(&ctx, &table2).unwrap(), 12);
        assert_eq!(count_derivers_oracle_n2(&ctx, &table2).unwrap(), 12);

        let ctx8 = FieldCtx::new(3).unwrap();
        let table8 = PairingTable::new(
            ctx8.elems().map(|a| (a, ctx8.add(a, Elem::ONE))).collect(),
        )
        .unwrap();
        assert_eq!(count_derivers(&ctx8, &table8).unwrap(), 1680);
        assert!(matches!(
            count_derivers(&f16(), &PairingTable::new(
                f16().elems().map(|a| (a, Elem(a.0 ^ 1))).collect()
            ).unwrap()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn odd_domain_and_full_field_guards() {
        let ctx = f16();
        // mu_5 has odd cardinality: involution derivation is refused
        let dom = DomainSet::Mu { d: 5, star: false };
        assert!(matches!(
            derive_involution(&ctx, &MappingSpec::identity(), &dom),
            Err(Error::OddDomain)
        ));
        // interpolation needs the full field
        let lin = frob_plus_id_spec();
        let slice = DomainSet::TraceSlice { m: 1, gamma: Elem::ZERO };
        let table = derive_involution(&ctx, &lin, &slice).unwrap();
        assert!(matches!(
            interpolate_involution(&ctx, &table),
            Err(Error::DomainNotFullField)
        ));
        // subgroup order must divide 2^n - 1
        assert!(DomainSet::Mu { d: 7, star: false }.enumerate(&ctx).is_err());
    }

    #[test]
    fn explicit_domain_dedupes() {
        let ctx = f4();
        let dom = DomainSet::Explicit { elems: vec![Elem(1), Elem(1), Elem(2), Elem(3), Elem(2)] };
        assert_eq!(dom.enumerate(&ctx).unwrap(), vec![Elem(1), Elem(2), Elem(3)]);
    }

    #[test]
    fn trace_slice_domain() {
        let ctx = f16();
        let dom = DomainSet::TraceSlice { m: 1, gamma: Elem::ONE };
        let elems = dom.enumerate(&ctx).unwrap();
        assert_eq!(elems.len(), 8);
        for &a in &elems {
            assert_eq!(ctx.trace_abs(a), Elem::ONE);
        }
    }
}
