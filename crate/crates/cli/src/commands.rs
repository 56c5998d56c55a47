//! Subcommand implementations. Each returns `Ok(true)` when every checked
//! verdict holds, `Ok(false)` when a mathematical verdict failed (exit 1),
//! and `Err` for usage or parse problems (exit 2).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use gf2to1_core::agw;
use gf2to1_core::families::{self, FamilyParams, IdentityKind, InvolutionForm, InvolutionSpec};
use gf2to1_core::field::{Elem, FieldCtx};
use gf2to1_core::mapping::{
    self, count_derivers, count_derivers_oracle_n2, interpolate_involution, DomainSet,
    PairingTable, PreimageProfile,
};
use gf2to1_core::Error;

use crate::report::{Phases, Report};
use crate::schema::{
    self, elem_to_hex, pairs_from_json, pairs_to_json, parse_domain, parse_elem, CtxJson,
    DiagramJson, FamilyParamsJson, MappingSpecJson,
};
use crate::{AgwMode, Cli, Command, InvolutionMode, WhichIdentity};

pub fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::FieldInfo => field_info(cli),
        Command::Check { family, map, domain } => {
            check(cli, family.as_deref(), map.as_deref(), domain.as_deref())
        }
        Command::Sweep { row, m, i, delta, c, allow_c_zero } => sweep(
            cli,
            *row,
            *m,
            *i,
            delta.as_deref(),
            c.as_deref(),
            *allow_c_zero,
        ),
        Command::Involution { family, map, domain, odd_index, m, mode, repair } => involution(
            cli,
            family.as_deref(),
            map.as_deref(),
            domain.as_deref(),
            *odd_index,
            *m,
            *mode,
            *repair,
        ),
        Command::Count { involution, oracle } => count(cli, involution.as_deref(), *oracle),
        Command::Resultant { which, m, samples } => resultant(cli, *which, *m, *samples),
        Command::Agw { diagram, mode } => agw_cmd(cli, diagram, *mode),
    }
}

fn command_echo() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn need_n(cli: &Cli) -> Result<u32, String> {
    cli.n.ok_or_else(|| "this command needs --n".to_string())
}

fn profile_json(profile: &PreimageProfile) -> Value {
    let hist: BTreeMap<String, u64> =
        profile.histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    json!({
        "histogram": hist,
        "domain_size": profile.domain_size,
        "image_size": profile.image_size,
    })
}

/// Full-field enumerations partition the domain across workers; the merged
/// histogram is independent of the partition.
fn profile_parallel(
    ctx: &FieldCtx,
    spec: &gf2to1_core::MappingSpec,
    dom: &DomainSet,
    jobs: usize,
) -> Result<PreimageProfile, String> {
    let domain = dom.enumerate(ctx).map_err(|e| e.to_string())?;
    if jobs <= 1 || domain.len() < 1 << 12 {
        return Ok(mapping::preimage_profile_fn(ctx, &domain, |x| spec.eval(ctx, x)));
    }
    let chunk_size = domain.len().div_ceil(jobs);
    let counts: Vec<u32> = std::thread::scope(|scope| {
        let handles: Vec<_> = domain
            .chunks(chunk_size)
            .map(|chunk| {
                scope.spawn(move || {
                    let mut local = vec![0u32; ctx.order() as usize];
                    for &x in chunk {
                        local[spec.eval(ctx, x).0 as usize] += 1;
                    }
                    local
                })
            })
            .collect();
        let mut total = vec![0u32; ctx.order() as usize];
        for h in handles {
            for (t, l) in total.iter_mut().zip(h.join().expect("worker")) {
                *t += l;
            }
        }
        total
    });
    let mut histogram = BTreeMap::new();
    let mut image_size = 0u64;
    for &c in &counts {
        if c > 0 {
            *histogram.entry(c as u64).or_insert(0u64) += 1;
            image_size += 1;
        }
    }
    Ok(PreimageProfile { histogram, domain_size: domain.len() as u64, image_size })
}

fn involution_digest(ctx: &FieldCtx, table: &PairingTable) -> Value {
    let pairs = table.unordered_pairs();
    let mut fixed_point_free = true;
    let mut is_involution = true;
    for &(a, b) in table.entries() {
        if a == b {
            fixed_point_free = false;
        }
        if table.partner(b) != Some(a) {
            is_involution = false;
        }
    }
    let mut out = json!({
        "pairs": pairs.len(),
        "fixed_point_free": fixed_point_free,
        "is_involution": is_involution,
    });
    if ctx.order() <= 512 {
        out["pairs_list"] = json!(pairs_to_json(table));
    }
    out
}

fn field_info(cli: &Cli) -> Result<bool, String> {
    let n = need_n(cli)?;
    let ctx = crate::make_ctx(n, cli.modulus.as_deref())?;
    let mut report = Report::new(command_echo());
    report.ctx = Some(CtxJson::of(&ctx));
    report.results = json!({
        "order": ctx.order(),
        "generator": if ctx.generator().is_zero() {
            Value::Null
        } else {
            Value::String(elem_to_hex(ctx.generator()))
        },
    });
    report.print();
    Ok(true)
}

fn family_from_arg(cli: &Cli, arg: &str) -> Result<(FieldCtx, FamilyParams), String> {
    let text = schema::read_arg_or_file(arg)?;
    let json: FamilyParamsJson =
        serde_json::from_str(&text).map_err(|e| format!("bad family JSON: {e}"))?;
    let p = json.to_core()?;
    let ctx = crate::make_ctx(p.field_degree(), cli.modulus.as_deref())?;
    Ok((ctx, p))
}

fn check(
    cli: &Cli,
    family: Option<&str>,
    map: Option<&str>,
    domain: Option<&str>,
) -> Result<bool, String> {
    let mut phases = Phases::new(cli.timings);
    phases.start("parse");
    let (ctx, spec, dom, inputs) = if let Some(fam) = family {
        let (ctx, p) = family_from_arg(cli, fam)?;
        let violations = families::validate_family(&ctx, &p, false);
        if !violations.is_empty() {
            return Err(format!("invalid family params: {}", violations.join("; ")));
        }
        let spec = families::construct_family(&ctx, &p).map_err(|e| e.to_string())?;
        let inputs = json!({ "family": FamilyParamsJson::of(&p) });
        (ctx, spec, DomainSet::Full, inputs)
    } else {
        let map = map.ok_or("check needs --family or --map with --domain")?;
        let domain = domain.ok_or("check needs --domain alongside --map")?;
        let n = need_n(cli)?;
        let ctx = crate::make_ctx(n, cli.modulus.as_deref())?;
        let text = schema::read_arg_or_file(map)?;
        let spec_json: MappingSpecJson =
            serde_json::from_str(&text).map_err(|e| format!("bad map JSON: {e}"))?;
        let spec = spec_json.to_core()?;
        let dom = parse_domain(domain)?;
        let inputs = json!({ "map": spec_json, "domain": domain });
        (ctx, spec, dom, inputs)
    };

    phases.start("profile");
    let profile = profile_parallel(&ctx, &spec, &dom, cli.jobs.max(1))?;
    let verdict = mapping::profile_is_two_to_one(&profile);

    phases.start("involution");
    let mut results = json!({
        "profile": profile_json(&profile),
        "two_to_one": verdict,
    });
    if verdict && profile.domain_size % 2 == 0 {
        let table = mapping::derive_involution(&ctx, &spec, &dom).map_err(|e| e.to_string())?;
        results["involution"] = involution_digest(&ctx, &table);
    }

    let mut report = Report::new(command_echo());
    report.ctx = Some(CtxJson::of(&ctx));
    report.inputs = inputs;
    report.results = results;
    report.timings_ms = phases.into_map();
    report.print();
    Ok(verdict)
}

struct SweepRecord {
    index: usize,
    params: FamilyParams,
    verdict: bool,
    profile: PreimageProfile,
    involution_ok: bool,
    ms: Option<u64>,
}

fn sweep(
    cli: &Cli,
    row: u8,
    m: u32,
    i: Option<u32>,
    delta: Option<&str>,
    c: Option<&str>,
    allow_c_zero: bool,
) -> Result<bool, String> {
    let probe = FamilyParams { row, m, i, delta: Elem::ZERO, c: Elem::ZERO };
    if !(1..=8).contains(&row) {
        return Err(format!("row {row} outside 1..=8"));
    }
    let ctx = crate::make_ctx(probe.field_degree(), cli.modulus.as_deref())?;
    let delta_filter = delta.map(parse_elem).transpose()?;
    let c_filter = c.map(parse_elem).transpose()?;

    let mut params = families::sweep_instances(&ctx, row, m, i, allow_c_zero)
        .map_err(|e| e.to_string())?;
    if let Some(d) = delta_filter {
        params.retain(|p| p.delta == d);
    }
    if let Some(cv) = c_filter {
        params.retain(|p| p.c == cv);
    }

    let records = run_sweep(&ctx, &params, cli.jobs.max(1), cli.timings);
    let failed = records.iter().filter(|r| !r.verdict || !r.involution_ok).count();

    if cli.csv {
        println!("no,row,k,m,s,delta,c,conditions,verdict,involution");
        for r in &records {
            println!(
                "{},{},{},{},{},{},{},ok,{},{}",
                r.index + 1,
                r.params.row,
                r.params.k(),
                r.params.m,
                r.params.s(),
                elem_to_hex(r.params.delta),
                elem_to_hex(r.params.c),
                r.verdict,
                r.involution_ok
            );
        }
    } else {
        for r in &records {
            let mut line = json!({
                "params": FamilyParamsJson::of(&r.params),
                "n": r.params.field_degree(),
                "k": r.params.k(),
                "s": r.params.s(),
                "verdict": r.verdict,
                "profile": profile_json(&r.profile),
                "involution_ok": r.involution_ok,
            });
            if let Some(ms) = r.ms {
                line["ms"] = json!(ms);
            }
            println!("{line}");
        }
    }
    // summary record closes the stream
    let note = if records.is_empty() {
        let violations = families::validate_family(&ctx, &probe, allow_c_zero);
        format!("no admissible instances ({})", violations.join("; "))
    } else {
        String::from("ok")
    };
    let summary = json!({
        "summary": {
            "row": row, "m": m, "i": i,
            "instances": records.len(),
            "passed": records.len() - failed,
            "failed": failed,
            "note": note,
        }
    });
    if cli.csv {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(failed == 0)
}

fn run_sweep(
    ctx: &FieldCtx,
    params: &[FamilyParams],
    jobs: usize,
    timings: bool,
) -> Vec<SweepRecord> {
    let domain: Vec<Elem> = ctx.elems().collect();
    let work = |chunk: &[(usize, FamilyParams)]| -> Vec<SweepRecord> {
        chunk
            .iter()
            .map(|&(index, p)| {
                let started = std::time::Instant::now();
                let f = families::construct_family(ctx, &p).expect("validated params");
                let profile = mapping::preimage_profile_fn(ctx, &domain, |x| f.eval(ctx, x));
                let verdict = mapping::profile_is_two_to_one(&profile);
                let involution_ok = if verdict && domain.len().is_multiple_of(2) {
                    mapping::derive_involution_fn(ctx, &domain, |x| f.eval(ctx, x)).is_ok()
                } else {
                    false
                };
                let ms = timings.then(|| started.elapsed().as_millis() as u64);
                SweepRecord { index, params: p, verdict, profile, involution_ok, ms }
            })
            .collect()
    };
    let indexed: Vec<(usize, FamilyParams)> = params.iter().copied().enumerate().collect();
    let mut records: Vec<SweepRecord> = if jobs <= 1 || indexed.len() < 2 {
        work(&indexed)
    } else {
        let chunk_size = indexed.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = indexed
                .chunks(chunk_size)
                .map(|chunk| scope.spawn(move || work(chunk)))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
        })
    };
    records.sort_by_key(|r| r.index);
    records
}

fn involution_form_json(ctx: &FieldCtx, inv: &InvolutionSpec) -> Value {
    match &inv.form {
        InvolutionForm::Map(spec) => json!({
            "form": "closed", "spec": MappingSpecJson::of(spec),
            "provenance": inv.provenance,
        }),
        InvolutionForm::OffsetPlusInverse { offset, denom } => json!({
            "form": "offset-plus-inverse",
            "offset": MappingSpecJson::of(offset),
            "denom": MappingSpecJson::of(denom),
            "provenance": inv.provenance,
        }),
        InvolutionForm::Table(table) => json!({
            "form": "table", "digest": involution_digest(ctx, table),
            "provenance": inv.provenance,
        }),
        InvolutionForm::Transfer { .. } => json!({
            "form": "transfer", "provenance": inv.provenance,
        }),
        InvolutionForm::NihoRational { .. } => json!({
            "form": "niho-rational", "provenance": inv.provenance,
        }),
        InvolutionForm::PiecewiseUnit { poly } => json!({
            "form": "piecewise-unit", "poly": MappingSpecJson::of(poly),
            "provenance": inv.provenance,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn involution(
    cli: &Cli,
    family: Option<&str>,
    map: Option<&str>,
    domain: Option<&str>,
    odd_index: Option<u8>,
    m: Option<u32>,
    mode: InvolutionMode,
    repair: bool,
) -> Result<bool, String> {
    let mut report = Report::new(command_echo());
    if let Some(fam) = family {
        let (ctx, p) = family_from_arg(cli, fam)?;
        let violations = families::validate_family(&ctx, &p, false);
        if !violations.is_empty() {
            return Err(format!("invalid family params: {}", violations.join("; ")));
        }
        let f = families::construct_family(&ctx, &p).map_err(|e| e.to_string())?;
        let domain: Vec<Elem> = ctx.elems().collect();
        let mut results = serde_json::Map::new();
        let mut all_ok = true;

        let table = families::family_involution_table(&ctx, &p).map_err(|e| e.to_string())?;
        if mode != InvolutionMode::Closed {
            results.insert("table".into(), involution_digest(&ctx, &table));
        }
        if mode != InvolutionMode::Table {
            match families::closed_form_involution(&ctx, &p) {
                Ok(inv) => {
                    let checks = families::verify_involution(&ctx, &inv, Some(&f), &domain);
                    all_ok &= checks.all_hold();
                    let mut closed = involution_form_json(&ctx, &inv);
                    closed["checks"] = json!({
                        "is_involution": checks.is_involution,
                        "fixed_point_free": checks.fixed_point_free,
                        "pairs_with_f": checks.pairs_with_f,
                        "eval_failures": checks.eval_failures,
                    });
                    if mode == InvolutionMode::Both {
                        let agree = domain.iter().all(|&x| {
                            inv.eval(&ctx, x).ok() == table.partner(x)
                        });
                        closed["matches_table"] = json!(agree);
                        all_ok &= agree;
                    }
                    results.insert("closed".into(), closed);
                }
                Err(Error::NoClosedForm { row }) => {
                    results.insert(
                        "closed".into(),
                        json!({
                            "form": null,
                            "note": format!("row {row} has no closed form; table emitted"),
                        }),
                    );
                    results.insert("table".into(), involution_digest(&ctx, &table));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        report.ctx = Some(CtxJson::of(&ctx));
        report.inputs = json!({ "family": FamilyParamsJson::of(&p), "mode": mode_name(mode) });
        report.results = Value::Object(results);
        report.print();
        return Ok(all_ok);
    }

    if let Some(idx) = odd_index {
        let m = m.ok_or("--odd-index needs --m")?;
        let ctx = crate::make_ctx(2 * m + 1, cli.modulus.as_deref())?;
        let f = families::odd_field_map(&ctx, idx, m).map_err(|e| e.to_string())?;
        let inv = families::odd_field_involution(&ctx, idx, m).map_err(|e| e.to_string())?;
        let domain: Vec<Elem> = ctx.elems().collect();
        // the printed item-2 map self-cancels; its pairing is excluded
        let paired = if idx == 2 { None } else { Some(&f) };
        let checks = families::verify_involution(&ctx, &inv, paired, &domain);
        let mut results = json!({
            "map": MappingSpecJson::of(&f),
            "involution": involution_form_json(&ctx, &inv),
            "checks": {
                "is_involution": checks.is_involution,
                "fixed_point_free": checks.fixed_point_free,
                "pairs_with_f": if idx == 2 { Value::String("excluded (printed map self-cancels)".into()) } else { json!(checks.pairs_with_f) },
                "eval_failures": checks.eval_failures,
            },
        });
        if repair {
            if idx != 2 {
                return Err("--repair only applies to catalog item 2".into());
            }
            let candidates = families::repair_item2(&[1, 2]).map_err(|e| e.to_string())?;
            results["repair_candidates"] = json!(candidates
                .iter()
                .map(|c| json!({
                    "f": format!("x^{{{}}} + x^{{{}}} + x^2 + x", c.exponent_a, c.exponent_b),
                    "verified_at_m": c.verified_at,
                    "note": "reconstruction consistent with the printed involution; not the printed map",
                }))
                .collect::<Vec<_>>());
        }
        report.ctx = Some(CtxJson::of(&ctx));
        report.inputs = json!({ "odd_index": idx, "m": m });
        report.results = results;
        report.print();
        return Ok(checks.all_hold());
    }

    // raw map + domain: table only
    let map = map.ok_or("involution needs --family, --map, or --odd-index")?;
    let domain_arg = domain.ok_or("involution needs --domain alongside --map")?;
    let n = need_n(cli)?;
    let ctx = crate::make_ctx(n, cli.modulus.as_deref())?;
    let text = schema::read_arg_or_file(map)?;
    let spec_json: MappingSpecJson =
        serde_json::from_str(&text).map_err(|e| format!("bad map JSON: {e}"))?;
    let spec = spec_json.to_core()?;
    let dom = parse_domain(domain_arg)?;
    let table = match mapping::derive_involution(&ctx, &spec, &dom) {
        Ok(t) => t,
        Err(e) => {
            report.ctx = Some(CtxJson::of(&ctx));
            report.inputs = json!({ "map": spec_json, "domain": domain_arg });
            report.results = json!({ "error": e.to_string() });
            report.print();
            return Ok(false);
        }
    };
    report.ctx = Some(CtxJson::of(&ctx));
    report.inputs = json!({ "map": spec_json, "domain": domain_arg });
    let mut results = json!({ "table": involution_digest(&ctx, &table) });
    // on a small full field, also emit the reduced interpolating polynomial
    if table.len() as u64 == ctx.order() && ctx.order() <= 256 {
        let poly = interpolate_involution(&ctx, &table).map_err(|e| e.to_string())?;
        results["interpolated_poly"] = json!(schema::unipoly_to_json(&poly));
    }
    report.results = results;
    report.print();
    Ok(true)
}

fn mode_name(mode: InvolutionMode) -> &'static str {
    match mode {
        InvolutionMode::Closed => "closed",
        InvolutionMode::Table => "table",
        InvolutionMode::Both => "both",
    }
}

fn count(cli: &Cli, involution: Option<&str>, oracle: bool) -> Result<bool, String> {
    let n = need_n(cli)?;
    let ctx = crate::make_ctx(n, cli.modulus.as_deref())?;
    let table = match involution {
        Some(arg) => {
            let text = schema::read_arg_or_file(arg)?;
            let pairs: Vec<[String; 2]> =
                serde_json::from_str(&text).map_err(|e| format!("bad pairing JSON: {e}"))?;
            pairs_from_json(&pairs)?
        }
        None => PairingTable::new(
            ctx.elems().map(|a| (a, ctx.add(a, Elem::ONE))).collect(),
        )
        .map_err(|e| e.to_string())?,
    };
    let constructed = count_derivers(&ctx, &table).map_err(|e| e.to_string())?;
    let formula = {
        // (2^n)! / (2^(n-1))!
        let q = ctx.order();
        (q / 2 + 1..=q).product::<u64>()
    };
    let mut ok = constructed == formula;
    let mut results = json!({
        "constructive_count": constructed,
        "formula_value": formula,
        "match": constructed == formula,
    });
    if oracle {
        if n != 2 {
            return Err("--oracle is the 256-function scan; it needs --n 2".into());
        }
        let scanned = count_derivers_oracle_n2(&ctx, &table).map_err(|e| e.to_string())?;
        results["oracle_count"] = json!(scanned);
        ok &= scanned == formula;
    }
    let mut report = Report::new(command_echo());
    report.ctx = Some(CtxJson::of(&ctx));
    report.inputs = json!({ "pairs": pairs_to_json(&table) });
    report.results = results;
    report.print();
    Ok(ok)
}

fn resultant(cli: &Cli, which: WhichIdentity, m: u32, samples: u64) -> Result<bool, String> {
    let kind = match which {
        WhichIdentity::Eq19 => IdentityKind::Eq19,
        WhichIdentity::Eq25 => IdentityKind::Eq25,
    };
    let r = families::resultant_identity_check(kind, m, samples, cli.seed)
        .map_err(|e| e.to_string())?;
    let mut report = Report::new(command_echo());
    report.seed = Some(cli.seed);
    report.inputs = json!({ "which": r.kind, "m": m, "samples": samples });
    report.results = json!({
        "total_checked": r.total_checked,
        "mismatches": r.mismatches,
        "skipped_degenerate": r.skipped_degenerate,
        "first_mismatch": r.first_mismatch,
    });
    report.print();
    Ok(r.mismatches == 0)
}

fn agw_cmd(cli: &Cli, diagram: &str, mode: AgwMode) -> Result<bool, String> {
    let n = need_n(cli)?;
    let ctx = crate::make_ctx(n, cli.modulus.as_deref())?;
    let text = schema::read_arg_or_file(diagram)?;
    let diagram_json: DiagramJson =
        serde_json::from_str(&text).map_err(|e| format!("bad diagram JSON: {e}"))?;
    let d = diagram_json.to_core()?;
    let outcome = match mode {
        AgwMode::Base => agw::certify_base_mode(&ctx, &d),
        AgwMode::Fiber => agw::certify_fiber_mode(&ctx, &d),
    };
    let mut report = Report::new(command_echo());
    report.ctx = Some(CtxJson::of(&ctx));
    report.inputs = json!({ "mode": match mode { AgwMode::Base => "base", AgwMode::Fiber => "fiber" } });
    match outcome {
        Ok(cert) => {
            report.results = json!({
                "certified": true,
                "conditions": cert.conditions,
                "direct_check_agrees": cert.direct_agrees,
            });
            report.print();
            Ok(cert.direct_agrees)
        }
        Err(Error::ConditionFailed { condition, witness }) => {
            report.results = json!({
                "certified": false,
                "refused_condition": condition,
                "witness": witness.map(elem_to_hex),
                "note": "refusal does not imply the map is not two-to-one",
            });
            report.print();
            Ok(false)
        }
        Err(e) => Err(e.to_string()),
    }
}
