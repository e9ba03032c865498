//! Acceptance suite: fourteen criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always print. Exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netshare::advisor::{compare_lte, recommend, Approach, Criterion, LteContext, Mark, Technology, Verdict};
use netshare::costmodel::{evaluate, SavingLedger};
use netshare::fixtures::{paper_use_case, reference_table};
use netshare::inventory::{
    check_repartition, default_constraints, market_default_table, AreaKind, ConstraintFamily, CostTable,
    ElementClass, Ledger, Market,
};
use netshare::scenario::calibrate::reverify;
use netshare::{run_scenario, Preset, ScenarioResult, SharingConfiguration};

// Tolerances and bands, pinned.
const URBAN_GWCN_B_TOTAL: f64 = 27.12;
const HEADLINE_TOL_PP: f64 = 2.0;
const RUNTIME_LIMIT: Duration = Duration::from_secs(1);

const URBAN_CAPEX_BAND: (f64, f64) = (23.0, 50.0);
const URBAN_CAPEX_MIN_SPAN_PP: f64 = 15.0;
const URBAN_OPEX_BAND: (f64, f64) = (14.0, 20.0);

const SUBURBAN_GWCN_B_TOTAL: f64 = 25.0;
const SUBURBAN_GWCN_VS_MOCN_BAND: (f64, f64) = (1.0, 2.9);
const SUBURBAN_SPECTRUM_BAND: (f64, f64) = (0.3, 2.0);
const SUBURBAN_OPEX_BAND: (f64, f64) = (13.0, 18.0);

const RURAL_CAPEX_BAND: (f64, f64) = (27.4, 50.6);
const RURAL_OPEX_BAND: (f64, f64) = (16.5, 21.9);
const RURAL_SPECTRUM_BAND: (f64, f64) = (0.2, 1.5);

const SITE_ANTENNA_CAPEX_BAND: (f64, f64) = (20.0, 30.0);
const WITH_RAN_CAPEX_BAND: (f64, f64) = (25.0, 45.0);

const ORACLE_TRIALS: usize = 1_000;
const ORACLE_REL_TOL: f64 = 1e-9;
const MONOTONE_TRIALS: usize = 10_000;
const CEILING_TRIALS: usize = 10_000;
const CEILING_TOL: f64 = 1e-9;
const SCALE_FACTORS: [f64; 3] = [1e-3, 1.0, 1e6];
const SCALE_TRIALS: usize = 1_000;
const SCALE_REL_TOL: f64 = 1e-9;

const SEED: u64 = 0x6e65_7473_6861_7265;

const LEDGERS: [SavingLedger; 3] = [SavingLedger::Capex, SavingLedger::Opex, SavingLedger::Total];

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn in_band(v: f64, (lo, hi): (f64, f64)) -> bool {
    v >= lo && v <= hi
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn use_case() -> ScenarioResult {
    run_scenario(&paper_use_case().expect("bundled scenario")).expect("grid runs")
}

fn cell(r: &ScenarioResult, area: AreaKind, p: Preset, l: SavingLedger) -> f64 {
    r.get(area, p.name()).expect("cell present").saving_pct(l)
}

fn delta(r: &ScenarioResult, area: AreaKind, a: Preset, b: Preset) -> f64 {
    cell(r, area, a, SavingLedger::Total) - cell(r, area, b, SavingLedger::Total)
}

fn range(r: &ScenarioResult, area: AreaKind, l: SavingLedger) -> (f64, f64) {
    Preset::USE_CASE
        .iter()
        .map(|&p| cell(r, area, p, l))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn c01_urban_headline() -> Outcome {
    let start = Instant::now();
    let r = use_case();
    let elapsed = start.elapsed();
    let v = cell(&r, AreaKind::Urban, Preset::GwcnBackhaul, SavingLedger::Total);
    let msg = format!("total {v:.2} vs {URBAN_GWCN_B_TOTAL} ± {HEADLINE_TOL_PP}, {elapsed:?}");
    if (v - URBAN_GWCN_B_TOTAL).abs() <= HEADLINE_TOL_PP && elapsed < RUNTIME_LIMIT {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c02_urban_ranges() -> Outcome {
    let r = use_case();
    let (clo, chi) = range(&r, AreaKind::Urban, SavingLedger::Capex);
    let (olo, ohi) = range(&r, AreaKind::Urban, SavingLedger::Opex);
    let msg = format!("capex [{clo:.2}, {chi:.2}] span {:.2}; opex [{olo:.2}, {ohi:.2}]", chi - clo);
    let ok = in_band(clo, URBAN_CAPEX_BAND)
        && in_band(chi, URBAN_CAPEX_BAND)
        && chi - clo >= URBAN_CAPEX_MIN_SPAN_PP
        && in_band(olo, URBAN_OPEX_BAND)
        && in_band(ohi, URBAN_OPEX_BAND);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c03_suburban() -> Outcome {
    let r = use_case();
    let a = AreaKind::Suburban;
    let total = cell(&r, a, Preset::GwcnBackhaul, SavingLedger::Total);
    let core = delta(&r, a, Preset::GwcnBackhaul, Preset::MocnBackhaul);
    let spectrum = delta(&r, a, Preset::GwcnBackhaul, Preset::GwcnMinusSpectrum);
    let (olo, ohi) = range(&r, a, SavingLedger::Opex);
    let msg = format!(
        "total {total:.2}; GWCN+B - MOCN+B {core:.2} pp; spectrum {spectrum:.2} pp; opex [{olo:.2}, {ohi:.2}]"
    );
    let ok = (total - SUBURBAN_GWCN_B_TOTAL).abs() <= HEADLINE_TOL_PP
        && in_band(core, SUBURBAN_GWCN_VS_MOCN_BAND)
        && in_band(spectrum, SUBURBAN_SPECTRUM_BAND)
        && in_band(olo, SUBURBAN_OPEX_BAND)
        && in_band(ohi, SUBURBAN_OPEX_BAND);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c04_rural() -> Outcome {
    let r = use_case();
    let a = AreaKind::Rural;
    let (clo, chi) = range(&r, a, SavingLedger::Capex);
    let (olo, ohi) = range(&r, a, SavingLedger::Opex);
    let spectrum = delta(&r, a, Preset::GwcnBackhaul, Preset::GwcnMinusSpectrum);
    let msg = format!("capex [{clo:.2}, {chi:.2}]; opex [{olo:.2}, {ohi:.2}]; spectrum {spectrum:.2} pp");
    let ok = in_band(clo, RURAL_CAPEX_BAND)
        && in_band(chi, RURAL_CAPEX_BAND)
        && in_band(olo, RURAL_OPEX_BAND)
        && in_band(ohi, RURAL_OPEX_BAND)
        && in_band(spectrum, RURAL_SPECTRUM_BAND);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c05_argmax() -> Outcome {
    let r = use_case();
    let mut winners = Vec::new();
    for a in AreaKind::ALL {
        let best = Preset::USE_CASE
            .iter()
            .copied()
            .max_by(|x, y| cell(&r, a, *x, SavingLedger::Total).total_cmp(&cell(&r, a, *y, SavingLedger::Total)))
            .unwrap();
        winners.push(format!("{a}: {}", best.name()));
    }
    let msg = winners.join(", ");
    if winners.iter().all(|w| w.ends_with(Preset::GwcnBackhaul.name())) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c06_coarse_bands() -> Outcome {
    let table = market_default_table(Market::Emerging, AreaKind::Urban);
    // Power and rent follow the site only when coupling is on; the coarse
    // bands are read with the passive site alone.
    let capex = |classes: &[ElementClass], coupling: bool| {
        let mut cfg = SharingConfiguration::custom("coarse", 2, classes.iter().copied());
        cfg.site_coupling = coupling;
        evaluate(&table, &cfg, 5, 0).unwrap().capex_saving_pct
    };
    use ElementClass::*;
    let site_antenna = capex(Preset::SiteAntenna.shared_classes(), false);
    let with_ran = capex(&[PassiveSite, Antenna, NodeB, Rnc], false);
    let coupled = capex(Preset::SiteAntenna.shared_classes(), true);
    let msg = format!(
        "SiteAntenna {site_antenna:.2}; + NodeB/RNC {with_ran:.2} (uncoupled; SiteAntenna with coupling {coupled:.2})"
    );
    if in_band(site_antenna, SITE_ANTENNA_CAPEX_BAND) && in_band(with_ran, WITH_RAN_CAPEX_BAND) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn random_table(rng: &mut ChaCha8Rng) -> CostTable<f64> {
    loop {
        let area = AreaKind::ALL[rng.gen_range(0..3)];
        let mut t = CostTable::new(area, "units");
        for c in ElementClass::ALL {
            let draw = |rng: &mut ChaCha8Rng| {
                if rng.gen_bool(0.2) {
                    0.0
                } else {
                    10f64.powf(rng.gen_range(0.0..7.0))
                }
            };
            let (capex, opex) = (draw(rng), draw(rng));
            t = t.with_entry(c, capex, opex);
        }
        if t.total(Ledger::Capex) > 0.0 && t.total(Ledger::Opex) > 0.0 {
            return t;
        }
    }
}

fn random_mask(rng: &mut ChaCha8Rng, p: f64) -> Vec<ElementClass> {
    ElementClass::ALL.into_iter().filter(|_| rng.gen_bool(p)).collect()
}

fn random_config(rng: &mut ChaCha8Rng, classes: &[ElementClass]) -> SharingConfiguration {
    let n = rng.gen_range(2..=5);
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    let mut split: Vec<f64> = w.iter().map(|x| x / s).collect();
    split[0] = 1.0 - split[1..].iter().sum::<f64>();
    let mut cfg = SharingConfiguration::custom("random", n, classes.iter().copied()).with_split(split);
    cfg.site_coupling = rng.gen_bool(0.5);
    cfg.intl_shared = rng.gen_bool(0.3);
    if rng.gen_bool(0.3) {
        cfg.spectrum_capex_factor = rng.gen_range(0.5..=1.0);
    }
    cfg
}

/// Every operator's bill, class by class and ledger by ledger.
fn enumerate(t: &CostTable<f64>, cfg: &SharingConfiguration, horizon: u32, me: usize) -> [f64; 3] {
    let h = horizon as f64;
    let (mut base_c, mut base_o, mut mine_c, mut mine_o) = (0.0, 0.0, 0.0, 0.0);
    for c in ElementClass::ALL {
        let e = t.entry(c);
        let (capex, opex) = (e.capex, e.opex_annual * h);
        base_c += capex;
        base_o += opex;
        let split_here = cfg.is_shared(c)
            || (c == ElementClass::InternationalConnectivity && cfg.intl_shared)
            || (matches!(c, ElementClass::SiteRent | ElementClass::Power)
                && cfg.site_coupling
                && cfg.is_shared(ElementClass::PassiveSite));
        let pooled = c == ElementClass::NodeB && cfg.is_shared(ElementClass::SpectrumLicense);
        for op in 0..cfg.operators {
            let ratio = if split_here { cfg.split[op] } else { 1.0 };
            let factor = if pooled { cfg.spectrum_capex_factor } else { 1.0 };
            if op == me {
                mine_c += capex * ratio * factor;
                mine_o += opex * ratio;
            }
        }
    }
    let pct = |mine: f64, base: f64| if base == 0.0 { 0.0 } else { 100.0 * (base - mine) / base };
    [pct(mine_c, base_c), pct(mine_o, base_o), pct(mine_c + mine_o, base_c + base_o)]
}

fn c07_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for trial in 0..ORACLE_TRIALS {
        let t = random_table(&mut rng);
        let classes = random_mask(&mut rng, 0.5);
        let cfg = random_config(&mut rng, &classes);
        let horizon = rng.gen_range(1..=20);
        let me = rng.gen_range(0..cfg.operators);
        let r = evaluate(&t, &cfg, horizon, me).map_err(|e| format!("trial {trial}: {e}"))?;
        let oracle = enumerate(&t, &cfg, horizon, me);
        for (l, o) in LEDGERS.iter().zip(oracle) {
            let v = r.saving_pct(*l);
            worst = worst.max((v - o).abs() / o.abs().max(1.0));
            if !rel_close(v, o, ORACLE_REL_TOL) {
                return Err(format!("trial {trial}, {l:?}: formula {v} vs enumeration {o}"));
            }
        }
    }
    Ok(format!("{ORACLE_TRIALS} tables, worst relative gap {worst:.1e}"))
}

fn c08_monotone() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for trial in 0..MONOTONE_TRIALS {
        let t = random_table(&mut rng);
        let small_set = random_mask(&mut rng, 0.35);
        let extra = random_mask(&mut rng, 0.35);
        let mut large_set = small_set.clone();
        large_set.extend(extra.into_iter().filter(|c| !small_set.contains(c)));
        let small = random_config(&mut rng, &small_set);
        let mut large = small.clone();
        for c in &large_set {
            large.set_shared(*c, true);
        }
        let me = rng.gen_range(0..small.operators);
        let a = evaluate(&t, &small, 5, me).map_err(|e| e.to_string())?;
        let b = evaluate(&t, &large, 5, me).map_err(|e| e.to_string())?;
        for l in LEDGERS {
            if a.saving_pct(l) > b.saving_pct(l) + 1e-9 {
                return Err(format!("trial {trial}, {l:?}: subset {} > superset {}", a.saving_pct(l), b.saving_pct(l)));
            }
        }
    }
    Ok(format!("{MONOTONE_TRIALS} nested pairs, no counterexample"))
}

fn c09_ceiling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut top = 0.0f64;
    for trial in 0..CEILING_TRIALS {
        let t = random_table(&mut rng);
        let p = rng.gen_range(0.0..=1.0);
        let classes = random_mask(&mut rng, p);
        let mut cfg = SharingConfiguration::custom("pair", 2, classes);
        cfg.site_coupling = rng.gen_bool(0.5);
        cfg.intl_shared = rng.gen_bool(0.5);
        let r = evaluate(&t, &cfg, rng.gen_range(1..=30), rng.gen_range(0..2)).map_err(|e| e.to_string())?;
        for l in LEDGERS {
            top = top.max(r.saving_pct(l));
            if r.saving_pct(l) > 50.0 + CEILING_TOL {
                return Err(format!("trial {trial}, {l:?}: {}", r.saving_pct(l)));
            }
        }
    }
    Ok(format!("{CEILING_TRIALS} inputs, max saving {top:.9}"))
}

fn c10_table3() -> Outcome {
    use ElementClass::*;
    let rows = [PassiveSite, NodeB, Rnc, Backhaul, SpectrumLicense, CoreSgsn];
    let matrix: [(&str, [bool; 6]); 6] = [
        ("MOCN", [true, true, true, false, true, false]),
        ("MOCN + Backhaul", [true, true, true, true, true, false]),
        ("MOCN - Spectrum", [true, true, true, true, false, false]),
        ("GWCN", [true, true, true, false, true, true]),
        ("GWCN + Backhaul", [true, true, true, true, true, true]),
        ("GWCN - Spectrum", [true, true, true, true, false, true]),
    ];
    let mut checked = 0;
    for (name, column) in matrix {
        let cfg = SharingConfiguration::from_preset_name(name).map_err(|e| e.to_string())?;
        for (class, want) in rows.iter().zip(column) {
            if cfg.is_shared(*class) != want {
                return Err(format!("{name} / {class}: expected {want}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} cells"))
}

fn c11_scale() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    for trial in 0..SCALE_TRIALS {
        let t = random_table(&mut rng);
        let classes = random_mask(&mut rng, 0.5);
        let cfg = random_config(&mut rng, &classes);
        let base = evaluate(&t, &cfg, 5, 0).map_err(|e| e.to_string())?;
        for k in SCALE_FACTORS {
            let r = evaluate(&t.scaled(k), &cfg, 5, 0).map_err(|e| e.to_string())?;
            for l in LEDGERS {
                if !rel_close(r.saving_pct(l), base.saving_pct(l), SCALE_REL_TOL) {
                    return Err(format!("trial {trial}, k = {k}, {l:?}"));
                }
            }
        }
    }
    Ok(format!("{SCALE_TRIALS} tables × k ∈ {SCALE_FACTORS:?}"))
}

fn c12_advisor() -> Outcome {
    use AreaKind::*;
    use Technology::*;
    use Verdict::*;
    let table = [
        (Rural, G2, StronglyRecommended),
        (Rural, G3, StronglyRecommended),
        (Suburban, G2, CaseByCase),
        (Suburban, G3, CaseByCase),
        (Urban, G2, NotRecommended),
        (Urban, G3, CaseByCase),
    ];
    for (a, t, v) in table {
        let got = recommend(a, t).verdict;
        if got != v {
            return Err(format!("({a}, {t}) -> {got}, expected {v}"));
        }
    }
    let expected = vec![
        (Criterion::InterworkingLegacy, Mark::Plus, Mark::Minus),
        (Criterion::CsFallbackVoice, Mark::Plus, Mark::Minus),
        (Criterion::ImsVoice, Mark::Equal, Mark::Equal),
        (Criterion::Roaming, Mark::Plus, Mark::Minus),
        (Criterion::Cost, Mark::Minus, Mark::Plus),
    ];
    let weights: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for flags in 0..16u8 {
        let bit = |i: u8| flags & (1 << i) != 0;
        let mut margin = f64::NEG_INFINITY;
        let mut seen_gwcn = false;
        for &w in &weights {
            let r = compare_lte(&LteContext::new(bit(0), bit(1), bit(2), bit(3), w).unwrap());
            if r.raw_matrix() != expected {
                return Err(format!("matrix differs for flags {flags:04b}, weight {w}"));
            }
            let m = r.gwcn_score - r.mocn_score;
            if m < margin - 1e-12 || (seen_gwcn && r.preferred != Approach::Gwcn) {
                return Err(format!("not monotone in cost weight at flags {flags:04b}, weight {w}"));
            }
            margin = m;
            seen_gwcn |= r.preferred == Approach::Gwcn;
        }
    }
    Ok("6 verdicts, 5 matrix rows, 16 contexts × 21 weights".into())
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("netshare").chain(args.iter().copied());
    match netshare_cli::dispatch(argv, &mut out, &mut err) {
        0 => Ok(out),
        code => Err(format!("exit {code}: {}", String::from_utf8_lossy(&err))),
    }
}

fn c13_determinism() -> Outcome {
    let csv = ["run", "paper_use_case.json", "--format", "csv", "--no-provenance"];
    let json = ["run", "paper_use_case.json", "--format", "json", "--no-provenance"];
    let (a, b) = (cli(&csv)?, cli(&csv)?);
    let (c, d) = (cli(&json)?, cli(&json)?);
    let rows = String::from_utf8_lossy(&a).lines().count() - 1;
    if a == b && c == d && rows == 18 {
        Ok(format!("csv {} bytes, {rows} rows; json {} bytes; identical", a.len(), c.len()))
    } else {
        Err(format!("csv equal {}, json equal {}, rows {rows}", a == b, c == d))
    }
}

fn c14_calibration() -> Outcome {
    let set = default_constraints(Market::Emerging, ConstraintFamily::UseCaseCapex)
        .extended(default_constraints(Market::Emerging, ConstraintFamily::UseCaseOpex));
    let mut worst = 0.0f64;
    let mut n = 0;
    for a in AreaKind::ALL {
        let t = reference_table(a).map_err(|e| e.to_string())?;
        let report = check_repartition(&t, &set).map_err(|e| e.to_string())?;
        if !report.overall {
            return Err(format!("{a}: repartition violated: {:?}", report.violated().count()));
        }
        for r in reverify(&t, &set).map_err(|e| format!("{a}: {e}"))? {
            worst = worst.max(r.residual.abs() / r.target.tolerance);
            n += 1;
        }
    }
    Ok(format!("3 tables, {n} residuals, worst |residual|/tolerance {worst:.2}"))
}

fn main() {
    let criteria: [Check; 14] = [
        ("urban GWCN+Backhaul total saving and runtime", c01_urban_headline),
        ("urban CAPEX and OPEX ranges", c02_urban_ranges),
        ("suburban total, deltas and OPEX range", c03_suburban),
        ("rural CAPEX/OPEX ranges and spectrum delta", c04_rural),
        ("GWCN+Backhaul is the best total in every area", c05_argmax),
        ("coarse CAPEX bands for site/antenna and RAN sharing", c06_coarse_bands),
        ("formula equals per-class enumeration", c07_oracle),
        ("shared-set inclusion orders savings", c08_monotone),
        ("50/50 pair never saves more than half", c09_ceiling),
        ("preset matrix, 36 cells", c10_table3),
        ("savings invariant under uniform scaling", c11_scale),
        ("advisor verdicts, LTE matrix, weight monotonicity", c12_advisor),
        ("byte-identical repeated runs", c13_determinism),
        ("committed reference tables re-verify", c14_calibration),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
