use num_bigint::BigUint;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::{parse_trace_point, PipelineConfig};
use super::report::{
    CascadeDigest, Conventions, IndexValue, InvariantReport, LedgerEntry, ModulusInvariants, RouteReport, StageReport,
    TraceSeries, REPORT_SCHEMA,
};
use crate::braid::BraidWord;
use crate::burau::spectral_log;
use crate::dynamics::{
    continue_cascade, extract_braid_detailed, find_periodic_orbit, gamma_braid, nearest_pairing, pd_cable_check_paired,
};
use crate::invariants::{
    continued_fraction, padic_expand, route_index_sequence, trace_invariant, CascadeIndices, IndexSequence,
};
use crate::modular::relative_index_with_cap;
use crate::{Cascade, Error, Result};

/// Version of this library, embedded in reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Finds the initial orbit at `a_min` and follows its cascade.
pub fn build_cascade(cfg: &PipelineConfig) -> Result<Cascade> {
    cfg.validate()?;
    let path = cfg.path()?;
    let opts = cfg.cascade_options();
    let start = path.params_at(0.0);
    let seed = cfg
        .initial_seed
        .or_else(|| start.fixed_point())
        .ok_or_else(|| Error::Config(format!("no real fixed point at a = {}; give an initial seed", cfg.a_min)))?;
    let initial = find_periodic_orbit(&start, cfg.initial_period, seed, &opts.continuation.newton)?;
    Ok(continue_cascade(&path, &initial, 0.0, &opts))
}

/// SHA-256 of the record's JSON serialization, as lowercase hex.
pub fn cascade_digest(record: &Cascade) -> String {
    let json = serde_json::to_string(record).expect("cascade record serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// A stage braid with its index per configured modulus.
type StageIndices = (BraidWord, Vec<Option<BigUint>>);

struct StageOutcome {
    report: StageReport,
    braid: Option<BraidWord>,
    indices: Vec<Option<BigUint>>,
    errors: Vec<LedgerEntry>,
}

fn cable_check(record: &Cascade, n: usize, cfg: &PipelineConfig) -> Result<bool> {
    let d = &record.doublings[n - 1];
    let map = record.path.params_at(d.pickup_s);
    let proj = cfg.projection();
    let parent = extract_braid_detailed(std::slice::from_ref(&d.parent), &map, &proj)?;
    let child = extract_braid_detailed(std::slice::from_ref(&d.child), &map, &proj)?;
    let pairing = nearest_pairing(&d.parent, parent.theta, &d.child, child.theta);
    pd_cable_check_paired(&parent.braid, &child.braid, &pairing)
}

fn analyze_stage(record: &Cascade, n: usize, cfg: &PipelineConfig) -> StageOutcome {
    let sample = &record.stages[n - 1];
    let mut errors = Vec::new();
    let braid = match gamma_braid(record, n, &cfg.projection()) {
        Ok(b) => Some(b),
        Err(e) => {
            errors.push(LedgerEntry::new(format!("stage {n}: braid extraction"), &e));
            None
        }
    };
    let cable = match cable_check(record, n, cfg) {
        Ok(ok) => Some(ok),
        Err(e) => {
            errors.push(LedgerEntry::new(format!("stage {n}: cable check"), &e));
            None
        }
    };
    let mut indices = Vec::with_capacity(cfg.moduli.len());
    if let Some(b) = &braid {
        for &m in &cfg.moduli {
            match relative_index_with_cap(b, m, cfg.orbit_cap) {
                Ok(c) => indices.push(Some(c)),
                Err(e) => {
                    errors.push(LedgerEntry::new(format!("stage {n}: relative index mod {m}"), &e));
                    indices.push(None);
                }
            }
        }
    } else {
        indices.resize(cfg.moduli.len(), None);
    }
    let report = StageReport {
        stage: n,
        sample_a: sample.a,
        sample_b: sample.b,
        strands: braid.as_ref().map_or(sample.orbits.iter().map(|o| o.period).sum(), BraidWord::strands),
        braid: braid.as_ref().map(ToString::to_string).unwrap_or_default(),
        cable_check: cable,
        spectral_log: braid.as_ref().map(spectral_log),
        relative_index: cfg
            .moduli
            .iter()
            .zip(&indices)
            .map(|(&modulus, c)| IndexValue { modulus, value: c.as_ref().map(ToString::to_string) })
            .collect(),
    };
    StageOutcome { report, braid, indices, errors }
}

/// The leading run of available values, truncated at `depth`.
fn leading<T: Clone>(values: impl IntoIterator<Item = Option<T>>, depth: usize) -> Vec<T> {
    values.into_iter().take(depth).map_while(|v| v).collect()
}

fn modulus_invariants(modulus: u64, terms: Vec<BigUint>, cfg: &PipelineConfig) -> Result<ModulusInvariants> {
    let mut inv = ModulusInvariants {
        modulus,
        depth: cfg.depth,
        index_terms: terms.iter().map(ToString::to_string).collect(),
        convergents: Vec::new(),
        decimal: None,
        padic: Vec::new(),
    };
    if terms.is_empty() {
        return Ok(inv);
    }
    let seq = IndexSequence::new(terms)?;
    let conv = continued_fraction(&seq)?;
    inv.convergents = conv.fractions().iter().map(|(p, q)| [p.to_string(), q.to_string()]).collect();
    inv.decimal = Some(conv.decimal());
    inv.padic = cfg.primes.iter().map(|&p| padic_expand(&seq, p)).collect::<Result<_>>()?;
    Ok(inv)
}

/// Runs the whole computation for one cascade; `extra` cascades, when given, are merged
/// with it into route-level invariants ordered by the braid order.
pub fn run_pipeline(cfg: &PipelineConfig, extra: &[Cascade]) -> Result<InvariantReport> {
    cfg.validate()?;
    let record = build_cascade(cfg)?;
    Ok(assemble(cfg, &record, extra))
}

/// Builds the report for an already computed cascade.
pub fn assemble(cfg: &PipelineConfig, record: &Cascade, extra: &[Cascade]) -> InvariantReport {
    let mut errors = Vec::new();
    let mut notes = Vec::new();
    if let Some(why) = &record.termination {
        errors.push(LedgerEntry { stage: "cascade".into(), kind: "numerical".into(), message: why.clone() });
    } else if !record.doublings.is_empty() && record.window_end.is_none() {
        notes.push(
            "the doubling after the last recorded one was not found; the last stage is sampled just past its doubling"
                .into(),
        );
    }
    if cfg.max_doublings == 0 {
        notes.push("max_doublings is 0: no stages, so the invariant sections are empty".into());
    }

    let outcomes: Vec<StageOutcome> =
        (1..=record.stages.len()).into_par_iter().map(|n| analyze_stage(record, n, cfg)).collect();
    for o in &outcomes {
        errors.extend(o.errors.iter().cloned());
    }

    let mut invariants = Vec::new();
    for (i, &m) in cfg.moduli.iter().enumerate() {
        let terms = leading(outcomes.iter().map(|o| o.indices[i].clone()), cfg.depth);
        match modulus_invariants(m, terms, cfg) {
            Ok(inv) => invariants.push(inv),
            Err(e) => errors.push(LedgerEntry::new(format!("invariants mod {m}"), &e)),
        }
    }
    let available = outcomes.len().min(cfg.depth);
    if available < cfg.depth && cfg.max_doublings > 0 {
        notes.push(format!("series are truncated at depth {} but only {available} stages are available", cfg.depth));
    }

    let braids = leading(outcomes.iter().map(|o| o.braid.clone()), cfg.depth);
    let traces: Vec<Result<TraceSeries>> = cfg
        .trace_points
        .par_iter()
        .map(|t| {
            let z = parse_trace_point(t)?;
            let values = trace_invariant(&braids, z)?;
            Ok(TraceSeries { t: t.clone(), values: values.iter().map(|v| [v.re, v.im]).collect() })
        })
        .collect();
    let traces = cfg
        .trace_points
        .iter()
        .zip(traces)
        .filter_map(|(t, r)| r.map_err(|e| errors.push(LedgerEntry::new(format!("traces at {t}"), &e))).ok())
        .collect();

    let route = (!extra.is_empty()).then(|| route_report(cfg, record, &outcomes, extra, &mut errors));

    InvariantReport {
        schema: REPORT_SCHEMA.into(),
        tool_version: TOOL_VERSION.into(),
        config: cfg.clone(),
        cascade: CascadeDigest {
            sha256: cascade_digest(record),
            initial_period: record.initial.period,
            doublings: record.doublings.iter().map(|d| d.a).collect(),
            window_end: record.window_end.map(|s| record.path.params_at(s).a),
            termination: record.termination.clone(),
        },
        stages: outcomes.into_iter().map(|o| o.report).collect(),
        invariants,
        traces,
        route,
        conventions: Conventions::default(),
        notes,
        errors,
    }
}

fn route_report(
    cfg: &PipelineConfig,
    record: &Cascade,
    outcomes: &[StageOutcome],
    extra: &[Cascade],
    errors: &mut Vec<LedgerEntry>,
) -> RouteReport {
    let mut per_record: Vec<(String, Vec<StageIndices>)> = Vec::new();
    per_record.push((
        cascade_digest(record),
        outcomes.iter().take(cfg.depth).filter_map(|o| o.braid.clone().map(|b| (b, o.indices.clone()))).collect(),
    ));
    for (r, rec) in extra.iter().enumerate() {
        let entries = (1..=rec.stages.len().min(cfg.depth))
            .into_par_iter()
            .map(|n| analyze_stage(rec, n, cfg))
            .collect::<Vec<_>>();
        let mut kept = Vec::new();
        for o in entries {
            errors.extend(o.errors.into_iter().map(|mut e| {
                e.stage = format!("record {}: {}", r + 1, e.stage);
                e
            }));
            if let Some(b) = o.braid {
                kept.push((b, o.indices));
            }
        }
        per_record.push((cascade_digest(rec), kept));
    }
    let mut invariants = Vec::new();
    for (i, &m) in cfg.moduli.iter().enumerate() {
        let cascades: Vec<CascadeIndices> = per_record
            .iter()
            .map(|(id, entries)| CascadeIndices {
                id: id.clone(),
                entries: entries.iter().filter_map(|(b, c)| c[i].clone().map(|c| (b.clone(), c))).collect(),
            })
            .collect();
        let result = route_index_sequence(&cascades).and_then(|seq| {
            let terms = seq.terms().iter().take(cfg.depth).cloned().collect();
            modulus_invariants(m, terms, cfg)
        });
        match result {
            Ok(inv) => invariants.push(inv),
            Err(e) => errors.push(LedgerEntry::new(format!("route invariants mod {m}"), &e)),
        }
    }
    RouteReport { cascades: per_record.into_iter().map(|(id, _)| id).collect(), invariants }
}
