use braidroute::pipeline::{
    assemble, build_cascade, compare_reports, load_order_cache, load_report, run_pipeline, save_report, PipelineConfig,
    RunStatus, Verdict,
};
use braidroute::Error;
use num_bigint::BigInt;

fn small_config() -> PipelineConfig {
    PipelineConfig { max_doublings: 3, moduli: vec![2, 3], primes: vec![2, 3], ..PipelineConfig::default() }
}

#[test]
fn default_report() {
    let cfg = PipelineConfig::default();
    let r = run_pipeline(&cfg, &[]).unwrap();
    assert_eq!(r.status(), RunStatus::Complete, "{:?}", r.errors);
    let inv = &r.invariants[0];
    assert!(inv.index_terms.len() >= 2);
    assert_eq!(inv.convergents.len(), inv.index_terms.len());
    let num = |s: &String| s.parse::<BigInt>().unwrap();
    for n in 2..inv.convergents.len() {
        let c = num(&inv.index_terms[n]);
        assert_eq!(num(&inv.convergents[n][0]), &c * num(&inv.convergents[n - 1][0]) + num(&inv.convergents[n - 2][0]));
        assert_eq!(num(&inv.convergents[n][1]), &c * num(&inv.convergents[n - 1][1]) + num(&inv.convergents[n - 2][1]));
    }
    assert_eq!(r.traces.len(), 3);
    assert!(r.traces.iter().all(|t| t.values.len() == inv.index_terms.len()));
    assert!(r.stages.iter().all(|s| s.cable_check == Some(true)));
    assert_eq!(r.stages[0].braid, "-1 -2 -1");
    assert_eq!(run_pipeline(&cfg, &[]).unwrap().to_json(), r.to_json());
}

#[test]
fn truncation_respects_depth() {
    let cfg = PipelineConfig { depth: 2, ..small_config() };
    let r = run_pipeline(&cfg, &[]).unwrap();
    for inv in &r.invariants {
        assert_eq!(inv.depth, 2);
        assert!(inv.index_terms.len() <= 2);
        assert!(inv.padic.iter().all(|p| p.digits.len() == inv.index_terms.len()));
    }
    assert!(r.traces.iter().all(|t| t.values.len() == 2));
}

#[test]
fn zero_doublings() {
    let cfg = PipelineConfig { max_doublings: 0, ..PipelineConfig::default() };
    let r = run_pipeline(&cfg, &[]).unwrap();
    assert!(r.stages.is_empty());
    assert!(r.invariants.iter().all(|i| i.index_terms.is_empty() && i.convergents.is_empty()));
    assert!(!r.notes.is_empty());
    assert_eq!(r.status(), RunStatus::Complete);
}

#[test]
fn invalid_modulus_is_rejected_up_front() {
    let cfg = PipelineConfig { moduli: vec![1], ..PipelineConfig::default() };
    assert!(matches!(run_pipeline(&cfg, &[]), Err(Error::Config(_))));
}

#[test]
fn every_failed_stage_is_recorded_once() {
    let cfg = PipelineConfig { orbit_cap: 10, ..small_config() };
    let r = run_pipeline(&cfg, &[]).unwrap();
    assert_eq!(r.status(), RunStatus::ResourceLimited);
    let failed: Vec<_> = r
        .stages
        .iter()
        .flat_map(|s| s.relative_index.iter().filter(|v| v.value.is_none()).map(move |v| (s.stage, v.modulus)))
        .collect();
    assert!(!failed.is_empty());
    for (stage, m) in &failed {
        let name = format!("stage {stage}: relative index mod {m}");
        assert_eq!(r.errors.iter().filter(|e| e.stage == name).count(), 1, "{name}");
    }
    assert_eq!(r.errors.len(), failed.len());
}

#[test]
fn comparison_verdicts() {
    let cfg = small_config();
    let r = run_pipeline(&cfg, &[]).unwrap();
    assert_eq!(compare_reports(&r, &r).unwrap().verdict, Verdict::Indistinguishable);

    let mut mutated = r.clone();
    mutated.invariants[0].index_terms[1] = "7".into();
    let cmp = compare_reports(&r, &mutated).unwrap();
    assert_eq!(cmp.verdict, Verdict::Distinct);
    assert!(cmp.differences[0].detail.starts_with("term 2:"), "{:?}", cmp.differences);

    let mut shallow = r.clone();
    shallow.config.depth = 3;
    assert!(matches!(compare_reports(&r, &shallow), Err(Error::Incomparable(_))));
    let mut other_menu = r.clone();
    other_menu.config.primes = vec![2];
    assert!(matches!(compare_reports(&r, &other_menu), Err(Error::Incomparable(_))));
}

#[test]
fn report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let r = run_pipeline(&small_config(), &[]).unwrap();
    save_report(&r, &path).unwrap();
    assert_eq!(load_report(&path).unwrap(), r);
}

#[test]
fn route_section_does_not_depend_on_record_order() {
    let cfg = small_config();
    let r1 = build_cascade(&cfg).unwrap();
    let r2 = build_cascade(&PipelineConfig { b: 0.25, max_doublings: 2, ..cfg.clone() }).unwrap();
    let r3 = build_cascade(&PipelineConfig { b: 0.35, max_doublings: 2, ..cfg.clone() }).unwrap();
    let a = assemble(&cfg, &r1, &[r2.clone(), r3.clone()]);
    let b = assemble(&cfg, &r3, &[r1.clone(), r2.clone()]);
    let (ra, rb) = (a.route.unwrap(), b.route.unwrap());
    assert_eq!(ra.invariants, rb.invariants);
    assert_eq!(ra.invariants[0].index_terms.len(), 7);
    assert!(assemble(&cfg, &r1, &[]).route.is_none());
}

#[test]
fn missing_cache_file_is_a_cold_start() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(load_order_cache(&dir.path().join("none.bin")).unwrap(), 0);
}
