//! Report documents in table, CSV and JSON form.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use netshare::advisor::{ConstraintChecklist, LteComparisonReport, Recommendation};
use netshare::scenario::calibrate::TargetResidual;
use netshare::{ScenarioResult, SweepPoint};

use crate::CliError;

/// Version of every JSON document shape below.
pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "area,configuration,capex_saving_pct,opex_saving_pct,total_saving_pct,horizon_years";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<P> {
    pub schema: String,
    pub version: u32,
    pub payload: P,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub parameter: String,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    pub level: Option<String>,
    pub shared_classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSummary {
    pub area: String,
    pub file: String,
    pub residuals: Vec<TargetResidual>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Scenario(ScenarioResult),
    Sweep(SweepOutput),
    Presets(Vec<PresetInfo>),
    Recommendations(Vec<Recommendation>),
    Lte(LteComparisonReport),
    Checklist(ConstraintChecklist),
    Calibration(Vec<CalibrationSummary>),
}

impl Report {
    pub fn schema(&self) -> &'static str {
        match self {
            Report::Scenario(_) => "netshare/scenario-result",
            Report::Sweep(_) => "netshare/sweep",
            Report::Presets(_) => "netshare/presets",
            Report::Recommendations(_) => "netshare/recommendations",
            Report::Lte(_) => "netshare/lte-comparison",
            Report::Checklist(_) => "netshare/checklist",
            Report::Calibration(_) => "netshare/calibration",
        }
    }
}

pub fn emit_report(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(report),
        Format::Csv => csv_doc(report),
        Format::Table => Ok(table(report)),
    }
}

fn envelope<P: Serialize>(schema: &str, payload: &P) -> Result<String, CliError> {
    let doc = Document {
        schema: schema.to_string(),
        version: SCHEMA_VERSION,
        payload,
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Emit(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn json(report: &Report) -> Result<String, CliError> {
    let schema = report.schema();
    match report {
        Report::Scenario(r) => envelope(schema, r),
        Report::Sweep(s) => envelope(schema, s),
        Report::Presets(p) => envelope(schema, p),
        Report::Recommendations(r) => envelope(schema, r),
        Report::Lte(r) => envelope(schema, r),
        Report::Checklist(c) => envelope(schema, c),
        Report::Calibration(c) => envelope(schema, c),
    }
}

/// Parses a JSON document produced by [`emit_report`], checking schema and
/// version.
pub fn parse_document<P: for<'de> Deserialize<'de>>(text: &str, schema: &str) -> Result<P, CliError> {
    let doc: Document<P> = serde_json::from_str(text).map_err(|e| CliError::Emit(e.to_string()))?;
    if doc.schema != schema || doc.version != SCHEMA_VERSION {
        return Err(CliError::Emit(format!(
            "expected {schema} v{SCHEMA_VERSION}, found {} v{}",
            doc.schema, doc.version
        )));
    }
    Ok(doc.payload)
}

fn pct4(v: f64) -> String {
    format!("{v:.4}")
}

fn csv_doc(report: &Report) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Emit(e.to_string());
    match report {
        Report::Scenario(r) => {
            w.write_record(CSV_HEADER.split(',')).map_err(err)?;
            for c in &r.cells {
                w.write_record([
                    c.area.label().to_string(),
                    c.configuration.clone(),
                    pct4(c.capex_saving_pct),
                    pct4(c.opex_saving_pct),
                    pct4(c.total_saving_pct),
                    c.horizon_years.to_string(),
                ])
                .map_err(err)?;
            }
        }
        Report::Sweep(s) => {
            w.write_record(std::iter::once("parameter_value").chain(CSV_HEADER.split(',')))
                .map_err(err)?;
            let mut points: Vec<&SweepPoint> = s.points.iter().collect();
            points.sort_by(|a, b| a.value.total_cmp(&b.value));
            for p in points {
                for c in &p.result.cells {
                    w.write_record([
                        format!("{}", p.value),
                        c.area.label().to_string(),
                        c.configuration.clone(),
                        pct4(c.capex_saving_pct),
                        pct4(c.opex_saving_pct),
                        pct4(c.total_saving_pct),
                        c.horizon_years.to_string(),
                    ])
                    .map_err(err)?;
                }
            }
        }
        Report::Presets(ps) => {
            w.write_record(["name", "level", "shared_classes"]).map_err(err)?;
            for p in ps {
                w.write_record([
                    p.name.clone(),
                    p.level.clone().unwrap_or_default(),
                    p.shared_classes.join(";"),
                ])
                .map_err(err)?;
            }
        }
        Report::Recommendations(rs) => {
            w.write_record(["area", "technology", "verdict"]).map_err(err)?;
            for r in rs {
                w.write_record([r.area.label().to_string(), r.technology.to_string(), r.verdict.to_string()])
                    .map_err(err)?;
            }
        }
        Report::Lte(r) => {
            w.write_record(["criterion", "mocn", "gwcn", "weight"]).map_err(err)?;
            for c in &r.criteria {
                w.write_record([
                    serde_label(&c.criterion),
                    c.mocn.to_string(),
                    c.gwcn.to_string(),
                    format!("{}", c.weight),
                ])
                .map_err(err)?;
            }
        }
        Report::Checklist(c) => {
            w.write_record(["domain", "constraint", "answered"]).map_err(err)?;
            for i in &c.items {
                w.write_record([
                    serde_label(&i.domain),
                    i.constraint.clone(),
                    i.answered.map(|b| b.to_string()).unwrap_or_default(),
                ])
                .map_err(err)?;
            }
        }
        Report::Calibration(cs) => {
            w.write_record(["area", "target", "value", "achieved", "residual", "tolerance"])
                .map_err(err)?;
            for c in cs {
                for r in &c.residuals {
                    w.write_record([
                        c.area.clone(),
                        format!("{:?}", r.target.metric),
                        pct4(r.target.value),
                        pct4(r.achieved),
                        pct4(r.residual),
                        pct4(r.target.tolerance),
                    ])
                    .map_err(err)?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Emit(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Emit(e.to_string()))
}

fn serde_label<S: Serialize>(v: &S) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn table(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Scenario(r) => {
            let _ = writeln!(out, "scenario: {} (horizon {} years)", r.scenario, r.horizon_years);
            savings_table(&mut out, r);
        }
        Report::Sweep(s) => {
            for p in &s.points {
                let _ = writeln!(out, "{} = {}", s.parameter, p.value);
                savings_table(&mut out, &p.result);
                out.push('\n');
            }
        }
        Report::Presets(ps) => {
            let _ = writeln!(out, "{:<18} {:<11} shared classes", "preset", "level");
            for p in ps {
                let _ = writeln!(
                    out,
                    "{:<18} {:<11} {}",
                    p.name,
                    p.level.as_deref().unwrap_or("-"),
                    p.shared_classes.join(", ")
                );
            }
        }
        Report::Recommendations(rs) => {
            let _ = writeln!(out, "{:<9} {:<4} verdict", "area", "tech");
            for r in rs {
                let _ = writeln!(out, "{:<9} {:<4} {}", r.area.label(), r.technology.to_string(), r.verdict);
            }
            let mut notes: Vec<&String> = rs.iter().flat_map(|r| &r.notes).collect();
            notes.sort();
            notes.dedup();
            for n in notes {
                let _ = writeln!(out, "  * {n}");
            }
        }
        Report::Lte(r) => {
            let _ = writeln!(out, "{:<20} {:<5} {:<5} {:<6} remark", "criterion", "MOCN", "GWCN", "weight");
            for c in &r.criteria {
                let _ = writeln!(
                    out,
                    "{:<20} {:<5} {:<5} {:<6.2} {}",
                    serde_label(&c.criterion),
                    c.mocn.to_string(),
                    c.gwcn.to_string(),
                    c.weight,
                    c.remark
                );
            }
            let _ = writeln!(
                out,
                "score: MOCN {:.2}, GWCN {:.2}; preferred: {}",
                r.mocn_score, r.gwcn_score, r.preferred
            );
        }
        Report::Checklist(c) => {
            let _ = writeln!(out, "{} network checklist", serde_label(&c.network_state));
            for i in &c.items {
                let mark = match i.answered {
                    Some(true) => "[yes]",
                    Some(false) => "[no] ",
                    None => "[ ]  ",
                };
                let _ = writeln!(out, "{mark} {:<8} {}", serde_label(&i.domain), i.constraint);
            }
            let open = c.unanswered().count();
            let _ = writeln!(out, "{open} of {} items unanswered", c.items.len());
        }
        Report::Calibration(cs) => {
            for c in cs {
                let _ = writeln!(out, "{} -> {}", c.area, c.file);
                for r in &c.residuals {
                    let _ = writeln!(
                        out,
                        "  {:<70} target {:>6.2} achieved {:>6.2} residual {:>+6.2}",
                        format!("{:?}", r.target.metric),
                        r.target.value,
                        r.achieved,
                        r.residual
                    );
                }
            }
        }
    }
    out
}

fn savings_table(out: &mut String, r: &ScenarioResult) {
    let _ = writeln!(
        out,
        "{:<9} {:<16} {:>8} {:>8} {:>8}",
        "area", "configuration", "capex%", "opex%", "total%"
    );
    for c in &r.cells {
        let _ = writeln!(
            out,
            "{:<9} {:<16} {:>8.2} {:>8.2} {:>8.2}",
            c.area.label(),
            c.configuration,
            c.capex_saving_pct,
            c.opex_saving_pct,
            c.total_saving_pct
        );
    }
}

/// Writes `doc` to `out`, or to `stdout` when no path is given.
pub fn write_output(doc: &str, out: Option<&Path>, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, doc).map_err(|source| CliError::IoFailure {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(doc.as_bytes()).map_err(|source| CliError::IoFailure {
            path: "<stdout>".into(),
            source,
        }),
    }
}
