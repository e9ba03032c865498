//! `netshare` command line: scenario runs and sweeps, validation, presets,
//! advisor tables and offline calibration.

pub mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Parser, Subcommand};

use netshare::advisor::{self, ConstraintChecklist, LteContext, NetworkState, Technology};
use netshare::inventory::{default_constraints, AreaKind, ConstraintFamily, Market};
use netshare::scenario::calibrate::{calibrate_reference, CalibrationSpec};
use netshare::scenario::{load_scenario_file, load_scenario_from};
use netshare::sharing::validate_with_policy;
use netshare::{fixtures, run_scenario, sharing_level, sweep, Preset, Scenario, SharingConfiguration};

pub use emit::{emit_report, Format, Report};
use emit::{CalibrationSummary, PresetInfo, SweepOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Domain(netshare::Error),
    Strict(String),
    IoFailure { path: String, source: std::io::Error },
    Emit(String),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Strict(m) => write!(f, "strict mode: {m}"),
            CliError::IoFailure { path, source } => write!(f, "cannot write `{path}`: {source}"),
            CliError::Emit(m) => write!(f, "emission failed: {m}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<netshare::Error> for CliError {
    fn from(e: netshare::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "netshare", version, about = "Savings model for mobile network infrastructure sharing")]
pub struct Cli {
    /// More diagnostics on stderr (repeatable).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    /// Treat validation warnings as errors.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Write the document here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every (area, configuration) cell of a scenario.
    Run {
        /// Scenario file; a bare name falls back to the bundled fixtures.
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Omit the timestamp block from JSON output.
        #[arg(long)]
        no_provenance: bool,
    },
    /// Run the scenario's sweep section.
    Sweep {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        no_provenance: bool,
    },
    /// Load and validate a scenario without evaluating it.
    Validate { scenario: PathBuf },
    /// List the sharing presets.
    Presets {
        #[command(flatten)]
        output: Output,
    },
    /// Sharing verdict per area and technology (all cells when omitted).
    Recommend {
        #[arg(long)]
        area: Option<AreaKind>,
        #[arg(long, value_name = "2g|3g")]
        tech: Option<Technology>,
        #[command(flatten)]
        output: Output,
    },
    /// MOCN versus GWCN for LTE RAN sharing.
    CompareLte {
        /// Mobility toward 2G/3G networks is needed.
        #[arg(long)]
        inter_rat: bool,
        /// Voice through CS fallback is needed.
        #[arg(long)]
        cs_fallback: bool,
        /// Voice is carried over IMS.
        #[arg(long)]
        ims_voice: bool,
        /// Roaming partners must be supported.
        #[arg(long)]
        roaming: bool,
        /// Weight of the cost criterion, in [0, 1].
        #[arg(long, default_value_t = 0.0)]
        cost_weight: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Constraint checklist for an existing or new network.
    Checklist {
        #[arg(long, value_name = "existing|new")]
        state: NetworkState,
        /// JSON checklist with answered items to merge in.
        #[arg(long, value_name = "PATH")]
        answers: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Search reference cost tables that meet a target file.
    Calibrate {
        /// Target file; a bare name falls back to the bundled fixtures.
        #[arg(long, value_name = "PATH")]
        targets: PathBuf,
        /// Directory receiving reference_costs_<area>.json.
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status. Documents go to `stdout`, diagnostics to `stderr`.
pub fn dispatch<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let result = match &cli.command {
        Command::Run {
            scenario,
            output,
            no_provenance,
        } => {
            let s = open_scenario(scenario, cli, stderr)?;
            let mut r = run_scenario(&s)?;
            if *no_provenance {
                r = r.without_provenance();
            }
            finish(&Report::Scenario(r), output, stdout)
        }
        Command::Sweep {
            scenario,
            output,
            no_provenance,
        } => {
            let s = open_scenario(scenario, cli, stderr)?;
            let parameter = s
                .sweep
                .map(|p| p.parameter.label())
                .ok_or_else(|| netshare::Error::InvalidSweepParameter("scenario has no sweep section".into()))?;
            let mut points = sweep(&s)?;
            for p in &mut points {
                if *no_provenance {
                    p.result.provenance = None;
                }
            }
            finish(&Report::Sweep(SweepOutput { parameter, points }), output, stdout)
        }
        Command::Validate { scenario } => {
            let s = open_scenario(scenario, cli, stderr)?;
            let _ = writeln!(
                stdout,
                "valid: `{}` ({} areas, {} configurations)",
                s.name,
                s.areas.len(),
                s.configurations.len()
            );
            Ok(())
        }
        Command::Presets { output } => finish(&Report::Presets(presets()), output, stdout),
        Command::Recommend { area, tech, output } => {
            let areas = area.map_or(AreaKind::ALL.to_vec(), |a| vec![a]);
            let techs = tech.map_or(Technology::ALL.to_vec(), |t| vec![t]);
            let recs = areas
                .iter()
                .flat_map(|&a| techs.iter().map(move |&t| advisor::recommend(a, t)))
                .collect();
            finish(&Report::Recommendations(recs), output, stdout)
        }
        Command::CompareLte {
            inter_rat,
            cs_fallback,
            ims_voice,
            roaming,
            cost_weight,
            output,
        } => {
            let ctx = LteContext::new(*inter_rat, *cs_fallback, *ims_voice, *roaming, *cost_weight)
                .map_err(CliError::Usage)?;
            finish(&Report::Lte(advisor::compare_lte(&ctx)), output, stdout)
        }
        Command::Checklist { state, answers, output } => {
            let mut list = advisor::checklist(*state);
            if let Some(path) = answers {
                let given = read_answers(path)?;
                for text in list.apply_answers(&given) {
                    let _ = writeln!(stderr, "warning: answer matches no checklist item: {text}");
                }
            }
            finish(&Report::Checklist(list), output, stdout)
        }
        Command::Calibrate { targets, out, format } => calibrate(targets, out, *format, stdout),
    };
    if cli.verbose > 0 {
        let _ = writeln!(stderr, "done in {:.3} s", started.elapsed().as_secs_f64());
    }
    result
}

fn finish(report: &Report, output: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    let doc = emit_report(report, output.format)?;
    emit::write_output(&doc, output.out.as_deref(), stdout)
}

fn read_input(path: &Path) -> Result<(String, Option<PathBuf>), CliError> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok((text, path.parent().map(Path::to_path_buf))),
        Err(source) => {
            let bare = path.parent().is_none_or(|p| p.as_os_str().is_empty());
            let name = path.to_string_lossy();
            if bare {
                if let Ok(text) = fixtures::read_fixture(&name) {
                    return Ok((text, None));
                }
            }
            Err(netshare::Error::Io {
                path: path.display().to_string(),
                source,
            }
            .into())
        }
    }
}

fn open_scenario(path: &Path, cli: &Cli, stderr: &mut dyn Write) -> Result<Scenario, CliError> {
    let s: Scenario = if path.is_file() {
        load_scenario_file(path)?
    } else {
        let (text, base) = read_input(path)?;
        load_scenario_from(&text, base.as_deref())?
    };
    let mut warned = Vec::new();
    for cfg in &s.configurations {
        let policy = cfg.policy.or(s.policy).unwrap_or_default();
        let report = validate_with_policy(cfg, &policy, None);
        for w in &report.warnings {
            warned.push(format!("configuration `{}`: {:?}: {}", cfg.name, w.rule, w.message));
        }
    }
    if cli.strict && !warned.is_empty() {
        return Err(CliError::Strict(warned.join("; ")));
    }
    if cli.verbose > 0 {
        for w in &warned {
            let _ = writeln!(stderr, "warning: {w}");
        }
        let _ = writeln!(
            stderr,
            "loaded `{}` from {}: {} areas, {} configurations, horizon {} years",
            s.name,
            path.display(),
            s.areas.len(),
            s.configurations.len(),
            s.horizon_years
        );
    }
    Ok(s)
}

fn presets() -> Vec<PresetInfo> {
    let mut all: Vec<Preset> = Preset::ALL.to_vec();
    all.push(Preset::Moran);
    all.into_iter()
        .map(|p| {
            let cfg = SharingConfiguration::preset(p);
            PresetInfo {
                name: p.name().to_string(),
                level: sharing_level(&cfg).map(|l| l.level.to_string()),
                shared_classes: cfg.shared_set().iter().map(|c| c.label().to_string()).collect(),
            }
        })
        .collect()
}

fn read_answers(path: &Path) -> Result<ConstraintChecklist, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| netshare::Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    if let Ok(list) = emit::parse_document::<ConstraintChecklist>(&text, "netshare/checklist") {
        return Ok(list);
    }
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("answers file `{}`: {e}", path.display())))
}

fn calibrate(targets: &Path, out: &Path, format: Format, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (text, _) = read_input(targets)?;
    let spec: CalibrationSpec = serde_json::from_str(&text).map_err(|e| netshare::Error::Fixture {
        name: targets.display().to_string(),
        reason: e.to_string(),
    })?;
    let constraints = default_constraints(Market::Emerging, ConstraintFamily::UseCaseCapex)
        .extended(default_constraints(Market::Emerging, ConstraintFamily::UseCaseOpex));
    let tables = calibrate_reference(&constraints, &spec.targets, &spec.options)?;
    let mut summary = Vec::new();
    for (area, table) in tables {
        let file = out.join(format!("reference_costs_{area}.json"));
        let mut doc = table.to_json_pretty();
        doc.push('\n');
        std::fs::write(&file, doc).map_err(|source| CliError::IoFailure {
            path: file.display().to_string(),
            source,
        })?;
        summary.push(CalibrationSummary {
            area: area.to_string(),
            file: file.display().to_string(),
            residuals: table.calibration.map(|c| c.residuals).unwrap_or_default(),
        });
    }
    let doc = emit_report(&Report::Calibration(summary), format)?;
    emit::write_output(&doc, None, stdout)
}
