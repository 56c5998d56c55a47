//! JSON wire formats and their conversions to core types.
//!
//! Elements are lowercase hex masks prefixed `0x`, little-endian in the
//! coefficient order (bit i = coefficient of x^i). Polynomials are arrays
//! of hex coefficient strings indexed by degree. Pairing tables are arrays
//! of hex pairs.

use serde::{Deserialize, Serialize};

use gf2to1_core::field::{Elem, FieldCtx};
use gf2to1_core::mapping::{DomainSet, Inner, MappingSpec, PairingTable, Term};
use gf2to1_core::UniPoly;

pub fn elem_to_hex(e: Elem) -> String {
    format!("{:#x}", e.0)
}

pub fn parse_elem(s: &str) -> Result<Elem, String> {
    Elem::parse_hex(s).ok_or_else(|| format!("bad element {s:?}: expected 0x-prefixed hex"))
}

/// `{"n": 4, "modulus": "0x13"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CtxJson {
    pub n: u32,
    pub modulus: String,
}

impl CtxJson {
    pub fn of(ctx: &FieldCtx) -> CtxJson {
        CtxJson { n: ctx.degree(), modulus: format!("{:#x}", ctx.modulus()) }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InnerJson {
    X,
    Affine {
        /// `[coefficient, frobenius-power]` pairs for `sum c_j x^(2^j)`.
        frob_terms: Vec<(String, u32)>,
        delta: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub inner: InnerJson,
    pub e: u64,
}

/// `{"terms":[{"c":"0x1","inner":{"kind":"affine",...},"e":5}, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MappingSpecJson {
    pub terms: Vec<TermJson>,
}

impl MappingSpecJson {
    pub fn to_core(&self) -> Result<MappingSpec, String> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let inner = match &t.inner {
                InnerJson::X => Inner::X,
                InnerJson::Affine { frob_terms, delta } => {
                    let mut parsed = Vec::with_capacity(frob_terms.len());
                    for (c, j) in frob_terms {
                        parsed.push((parse_elem(c)?, *j));
                    }
                    Inner::Affine { terms: parsed, delta: parse_elem(delta)? }
                }
            };
            terms.push(Term { c: parse_elem(&t.c)?, inner, e: t.e });
        }
        Ok(MappingSpec::new(terms))
    }

    pub fn of(spec: &MappingSpec) -> MappingSpecJson {
        MappingSpecJson {
            terms: spec
                .terms
                .iter()
                .map(|t| TermJson {
                    c: elem_to_hex(t.c),
                    inner: match &t.inner {
                        Inner::X => InnerJson::X,
                        Inner::Affine { terms, delta } => InnerJson::Affine {
                            frob_terms: terms
                                .iter()
                                .map(|&(c, j)| (elem_to_hex(c), j))
                                .collect(),
                            delta: elem_to_hex(*delta),
                        },
                    },
                    e: t.e,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainSetJson {
    Full,
    TraceSlice { m: u32, gamma: String },
    Mu { d: u64, star: bool },
    Image { spec: Box<MappingSpecJson>, base: Box<DomainSetJson> },
    Explicit { elems: Vec<String> },
}

impl DomainSetJson {
    pub fn of(dom: &DomainSet) -> DomainSetJson {
        match dom {
            DomainSet::Full => DomainSetJson::Full,
            DomainSet::TraceSlice { m, gamma } => {
                DomainSetJson::TraceSlice { m: *m, gamma: elem_to_hex(*gamma) }
            }
            DomainSet::Mu { d, star } => DomainSetJson::Mu { d: *d, star: *star },
            DomainSet::Image { spec, base } => DomainSetJson::Image {
                spec: Box::new(MappingSpecJson::of(spec)),
                base: Box::new(DomainSetJson::of(base)),
            },
            DomainSet::Explicit { elems } => DomainSetJson::Explicit {
                elems: elems.iter().map(|&e| elem_to_hex(e)).collect(),
            },
        }
    }

    pub fn to_core(&self) -> Result<DomainSet, String> {
        Ok(match self {
            DomainSetJson::Full => DomainSet::Full,
            DomainSetJson::TraceSlice { m, gamma } => {
                DomainSet::TraceSlice { m: *m, gamma: parse_elem(gamma)? }
            }
            DomainSetJson::Mu { d, star } => DomainSet::Mu { d: *d, star: *star },
            DomainSetJson::Image { spec, base } => DomainSet::Image {
                spec: Box::new(spec.to_core()?),
                base: Box::new(base.to_core()?),
            },
            DomainSetJson::Explicit { elems } => DomainSet::Explicit {
                elems: elems.iter().map(|s| parse_elem(s)).collect::<Result<_, _>>()?,
            },
        })
    }
}

/// Shorthand forms accepted anywhere a domain JSON is expected:
/// `full`, `trace:m=2,gamma=0x1`, `mu:d=5`, `mu*:d=5`, `list:0x1,0x2`.
pub fn parse_domain(s: &str) -> Result<DomainSet, String> {
    let s = s.trim();
    if s.starts_with('{') {
        let json: DomainSetJson =
            serde_json::from_str(s).map_err(|e| format!("bad domain JSON: {e}"))?;
        return json.to_core();
    }
    if s == "full" || s.starts_with("full:") {
        return Ok(DomainSet::Full);
    }
    if let Some(rest) = s.strip_prefix("trace:") {
        let mut m = None;
        let mut gamma = None;
        for part in rest.split(',') {
            if let Some(v) = part.strip_prefix("m=") {
                m = Some(v.parse::<u32>().map_err(|e| format!("bad m: {e}"))?);
            } else if let Some(v) = part.strip_prefix("gamma=") {
                gamma = Some(parse_elem(v)?);
            } else {
                return Err(format!("unknown trace-slice field {part:?}"));
            }
        }
        return Ok(DomainSet::TraceSlice {
            m: m.ok_or("trace slice needs m=")?,
            gamma: gamma.ok_or("trace slice needs gamma=")?,
        });
    }
    for (prefix, star) in [("mu*:", true), ("mu:", false)] {
        if let Some(rest) = s.strip_prefix(prefix) {
            let d = rest
                .strip_prefix("d=")
                .unwrap_or(rest)
                .parse::<u64>()
                .map_err(|e| format!("bad subgroup order: {e}"))?;
            return Ok(DomainSet::Mu { d, star });
        }
    }
    if let Some(rest) = s.strip_prefix("list:") {
        let elems = rest.split(',').map(parse_elem).collect::<Result<Vec<_>, _>>()?;
        return Ok(DomainSet::Explicit { elems });
    }
    Err(format!("unrecognized domain {s:?}"))
}

/// `{"row":3,"m":2,"delta":"0x8","c":"0x1"}` with optional `"i"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyParamsJson {
    pub row: u8,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
    pub delta: String,
    pub c: String,
}

impl FamilyParamsJson {
    pub fn to_core(&self) -> Result<gf2to1_core::families::FamilyParams, String> {
        Ok(gf2to1_core::families::FamilyParams {
            row: self.row,
            m: self.m,
            i: self.i,
            delta: parse_elem(&self.delta)?,
            c: parse_elem(&self.c)?,
        })
    }

    pub fn of(p: &gf2to1_core::families::FamilyParams) -> FamilyParamsJson {
        FamilyParamsJson {
            row: p.row,
            m: p.m,
            i: p.i,
            delta: elem_to_hex(p.delta),
            c: elem_to_hex(p.c),
        }
    }
}

/// Diagram bundle: four domains and four maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramJson {
    pub a: DomainSetJson,
    pub abar: DomainSetJson,
    pub s: DomainSetJson,
    pub sbar: DomainSetJson,
    pub f: MappingSpecJson,
    pub fbar: MappingSpecJson,
    pub lambda: MappingSpecJson,
    pub lambdabar: MappingSpecJson,
}

impl DiagramJson {
    pub fn of(d: &gf2to1_core::agw::DiagramSpec) -> DiagramJson {
        DiagramJson {
            a: DomainSetJson::of(&d.a),
            abar: DomainSetJson::of(&d.abar),
            s: DomainSetJson::of(&d.s),
            sbar: DomainSetJson::of(&d.sbar),
            f: MappingSpecJson::of(&d.f),
            fbar: MappingSpecJson::of(&d.fbar),
            lambda: MappingSpecJson::of(&d.lambda),
            lambdabar: MappingSpecJson::of(&d.lambdabar),
        }
    }

    pub fn to_core(&self) -> Result<gf2to1_core::agw::DiagramSpec, String> {
        Ok(gf2to1_core::agw::DiagramSpec {
            a: self.a.to_core()?,
            abar: self.abar.to_core()?,
            s: self.s.to_core()?,
            sbar: self.sbar.to_core()?,
            f: self.f.to_core()?,
            fbar: self.fbar.to_core()?,
            lambda: self.lambda.to_core()?,
            lambdabar: self.lambdabar.to_core()?,
        })
    }
}

pub fn pairs_to_json(table: &PairingTable) -> Vec<[String; 2]> {
    table
        .unordered_pairs()
        .iter()
        .map(|&(a, b)| [elem_to_hex(a), elem_to_hex(b)])
        .collect()
}

pub fn pairs_from_json(pairs: &[[String; 2]]) -> Result<PairingTable, String> {
    let mut entries = Vec::with_capacity(pairs.len() * 2);
    for [a, b] in pairs {
        let (a, b) = (parse_elem(a)?, parse_elem(b)?);
        entries.push((a, b));
        entries.push((b, a));
    }
    PairingTable::new(entries).map_err(|e| format!("bad pairing table: {e}"))
}

pub fn unipoly_to_json(p: &UniPoly) -> Vec<String> {
    p.coeffs().iter().map(|&c| elem_to_hex(c)).collect()
}

/// Read an argument that may be inline JSON or `@path` to a file.
pub fn read_arg_or_file(arg: &str) -> Result<String, String> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}
