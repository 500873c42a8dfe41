use ouh_core::{run_suite, SuiteConfig};

fn small(gamma: f64) -> SuiteConfig {
    SuiteConfig {
        gamma,
        times: vec![0.5, 1.0],
        n_paths: 4000,
        euler_paths: 2000,
        dt: 4e-3,
        seed: 21,
        ..SuiteConfig::default()
    }
}

#[test]
fn json_report_schema() {
    let report = run_suite(&small(-0.5)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["gamma_sign"], "negative");
    assert_eq!(v["config"]["times"], serde_json::json!([0.5, 1.0]));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), report.checks.len());
    for c in checks {
        for field in ["name", "identity", "oracle", "threshold", "status"] {
            assert!(!c[field].is_null(), "{field} missing in {c}");
        }
        assert!(["pass", "fail", "skipped"].contains(&c["status"].as_str().unwrap()));
    }
    let s = &v["summary"];
    let total = s["passed"].as_u64().unwrap() + s["failed"].as_u64().unwrap() + s["skipped"].as_u64().unwrap();
    assert_eq!(total as usize, checks.len());
    assert!(v["environment"]["workers"].as_u64().unwrap() >= 1);
}

#[test]
fn reproducible_json_drops_environment_only() {
    let report = run_suite(&small(1.0)).unwrap();
    let full: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let mut stripped = full.clone();
    stripped.as_object_mut().unwrap().remove("environment");
    let repro: serde_json::Value = serde_json::from_str(&report.to_reproducible_json()).unwrap();
    assert_eq!(repro, stripped);
}

#[test]
fn csv_has_one_row_per_check() {
    let report = run_suite(&small(0.0)).unwrap();
    let csv = report.to_csv();
    let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next(), Some("check,value,oracle,gap,threshold,status"));
    assert_eq!(lines.count(), report.checks.len());
    assert!(csv.lines().nth(1).unwrap().contains("seed=21"));
}

#[test]
fn every_time_gets_the_per_time_checks() {
    let report = run_suite(&small(1.0)).unwrap();
    for t in ["0.5", "1"] {
        for prefix in ["martingale", "survival_exact", "normalization_q", "density_identity"] {
            let name = format!("{prefix}/t={t}");
            assert!(report.checks.iter().any(|c| c.name == name), "{name}");
        }
    }
}
