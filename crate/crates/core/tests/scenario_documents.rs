use netshare::error::Error;
use netshare::inventory::AreaKind;
use netshare::scenario::{load_scenario, SweepParameter};
use netshare::{run_scenario, sweep, Scenario};

fn doc(extra: &str) -> String {
    format!(
        r#"{{
  "name": "doc",
  "areas": ["rural"],
  "cost_tables": {{
    "rural": {{ "area": "rural", "currency": "units", "entries": {{
      "passive_site": {{ "capex": 40, "opex_annual": 2 }},
      "nodeb": {{ "capex": 60, "opex_annual": 8 }} }} }}
  }},
  "configurations": ["MOCN", {{ "name": "site", "shared": {{ "passive_site": true }} }}]{extra}
}}"#
    )
}

#[test]
fn inline_and_named_entries_mix() {
    let s: Scenario = load_scenario(&doc("")).unwrap();
    assert_eq!(s.horizon_years, 5);
    let r = run_scenario(&s).unwrap();
    let site = r.get(AreaKind::Rural, "site").unwrap();
    assert!((site.capex_saving_pct - 20.0).abs() < 1e-9);
    let mocn = r.get(AreaKind::Rural, "MOCN").unwrap();
    assert!((mocn.capex_saving_pct - 50.0).abs() < 1e-9);
}

#[test]
fn unknown_key_is_named() {
    let e = load_scenario::<f64>(&doc(r#", "horizon": 3"#)).unwrap_err();
    assert!(matches!(e, Error::MalformedScenario(_)));
    assert!(e.to_string().contains("horizon"), "{e}");
}

#[test]
fn unknown_preset_is_rejected() {
    let text = doc("").replace("\"MOCN\"", "\"MOCN+B\"");
    let e = load_scenario::<f64>(&text).unwrap_err();
    assert!(e.to_string().contains("MOCN+B"), "{e}");
}

#[test]
fn gwcn_without_ran_rejects_the_scenario() {
    let text = doc("").replace(r#""passive_site": true"#, r#""core_sgsn": true"#);
    match load_scenario::<f64>(&text).unwrap_err() {
        Error::InvalidScenario { report: Some(report), .. } => assert_eq!(report.configuration, "site"),
        other => panic!("{other}"),
    }
}

#[test]
fn policy_forbidding_pooling_rejects_mocn() {
    let e = load_scenario::<f64>(&doc(r#", "policy": { "spectrum_pooling_allowed": false }"#)).unwrap_err();
    assert!(e.to_string().contains("MOCN"), "{e}");
}

#[test]
fn missing_table_for_area() {
    let text = doc("").replace(r#""areas": ["rural"]"#, r#""areas": ["rural", "urban"]"#);
    let e = load_scenario::<f64>(&text).unwrap_err();
    assert!(e.to_string().contains("urban"), "{e}");
}

#[test]
fn horizon_sweep_from_document() {
    let s: Scenario = load_scenario(&doc(
        r#", "sweep": { "parameter": "horizon_years", "from": 1, "to": 10, "steps": 10 }"#,
    ))
    .unwrap();
    assert_eq!(s.sweep.unwrap().parameter, SweepParameter::HorizonYears);
    let pts = sweep(&s).unwrap();
    assert_eq!(pts.len(), 10);
    assert!(pts.windows(2).all(|w| w[0].value < w[1].value));
    // site sharing: total saving moves toward the OPEX saving as the horizon grows
    let site: Vec<f64> = pts
        .iter()
        .map(|p| p.result.get(AreaKind::Rural, "site").unwrap().total_saving_pct)
        .collect();
    assert!(site.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn bad_sweep_is_rejected() {
    let e = load_scenario::<f64>(&doc(r#", "sweep": { "parameter": "split_ratio", "from": 0.2, "to": 1.2, "steps": 3 }"#))
        .unwrap_err();
    assert!(matches!(e, Error::InvalidSweepParameter(_)));
}

#[test]
fn f32_scenario_runs() {
    let s: netshare::scenario::Scenario<f32> = load_scenario(&doc("")).unwrap();
    let r = run_scenario(&s).unwrap();
    assert!((r.cells[1].capex_saving_pct - 20.0).abs() < 1e-4);
}

#[test]
fn sharing_the_international_link_raises_every_total() {
    let mut s = netshare::fixtures::paper_use_case().unwrap();
    s.sweep = Some(netshare::scenario::SweepSpec {
        parameter: SweepParameter::IntlShared,
        from: 0.0,
        to: 1.0,
        steps: 2,
    });
    let pts = sweep(&s).unwrap();
    assert_eq!(pts.iter().map(|p| p.value).collect::<Vec<_>>(), vec![0.0, 1.0]);
    for (off, on) in pts[0].result.cells.iter().zip(&pts[1].result.cells) {
        assert!(on.total_saving_pct > off.total_saving_pct, "{} {}", off.area, off.configuration);
    }
}

#[test]
fn opex_weight_grows_with_horizon() {
    let mut s = netshare::fixtures::paper_use_case().unwrap();
    s.sweep = Some(netshare::scenario::SweepSpec {
        parameter: SweepParameter::HorizonYears,
        from: 1.0,
        to: 5.0,
        steps: 5,
    });
    let pts = sweep(&s).unwrap();
    let weight = |r: &netshare::SavingsReport| r.baseline.opex_cumulative_total / r.baseline.grand_total;
    for w in pts.windows(2) {
        for (a, b) in w[0].result.cells.iter().zip(&w[1].result.cells) {
            assert!(weight(b) > weight(a));
            // closed form: total = capex share * capex saving + opex share * opex saving
            let closed = (1.0 - weight(b)) * b.capex_saving_pct + weight(b) * b.opex_saving_pct;
            assert!((closed - b.total_saving_pct).abs() < 1e-9);
        }
    }
}
