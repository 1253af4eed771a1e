use jclass_core::gallery::{list_cases, run_case};
use jclass_core::RunConfig;

#[test]
fn every_case_matches_its_expected_verdicts() {
    let cfg = RunConfig::default();
    let mut failed = Vec::new();
    for name in list_cases() {
        let report = run_case(name, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        if !report.pass {
            failed.push(serde_json::to_string_pretty(&report).unwrap());
        }
    }
    assert!(failed.is_empty(), "failing cases:\n{}", failed.join("\n"));
}

#[test]
fn reports_are_reproducible() {
    let cfg = RunConfig::default();
    let a = serde_json::to_string(&run_case("inverse-pair", &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_case("inverse-pair", &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}
