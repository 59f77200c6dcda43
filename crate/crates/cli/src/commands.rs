use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use fahp_core::engine::{self, EngineError, NodeId, NodeSource};
use fahp_core::export::{fixed4, ranking_csv, sensitivity_csv};
use fahp_core::model::{Aggregation, ModelError, RankingResult};
use fahp_core::sensitivity::SensitivityReport;
use fahp_core::session::{
    load_session, paper_dataset, SessionDocument, SessionError, SessionStore, Violation,
};
use fahp_core::WeightVector;

use crate::{Command, Format, Source};

pub const EXIT_OK: u8 = 0;
pub const EXIT_COMPUTATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Engine(EngineError),
    #[error("{0}")]
    Computation(String),
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::UnknownNode(_) | EngineError::Model(ModelError::UnknownCriterion(_)) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Engine(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Session(_) => EXIT_INVALID,
            CliError::Engine(_) | CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }
}

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            code: EXIT_OK,
        }
    }
}

pub fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Validate { source, format } => Ok(validate(&source, format)),
        Command::Weights {
            source,
            node,
            recompute,
            format,
        } => weights(&load(&source)?, &NodeId::parse(&node), recompute, format).map(Output::ok),
        Command::Rank {
            source,
            aggregation,
            alternatives,
            format,
        } => rank(
            &load(&source)?,
            aggregation,
            alternatives.as_deref(),
            format,
        )
        .map(Output::ok),
        Command::Sensitivity {
            source,
            criterion,
            grid,
            aggregation,
            format,
        } => sensitivity(&load(&source)?, &criterion, &grid.0, aggregation, format).map(Output::ok),
        Command::Serve {
            addr,
            store,
            ui_dir,
        } => {
            serve(addr, &store, ui_dir)?;
            Ok(Output::ok(String::new()))
        }
    }
}

fn load(source: &Source) -> Result<SessionDocument, CliError> {
    match (&source.file, source.demo_paper) {
        (_, true) => Ok(paper_dataset()),
        (Some(path), false) => Ok(load_session(path)?),
        (None, false) => Err(CliError::Usage(
            "a session file or --demo-paper is required".into(),
        )),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ValidationReport {
    valid: bool,
    violations: Vec<Violation>,
    notes: Vec<String>,
}

fn validate(source: &Source, format: Format) -> Output {
    let report = match load(source) {
        Ok(doc) => {
            let mut notes = doc.notes();
            for m in engine::incomplete_nodes(&doc) {
                let cells: Vec<String> = m.cells.iter().map(ToString::to_string).collect();
                notes.push(format!(
                    "node {}: missing judgments {}",
                    m.node,
                    cells.join(" ")
                ));
            }
            ValidationReport {
                valid: true,
                violations: Vec::new(),
                notes,
            }
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            return Output {
                stdout: String::new(),
                code: EXIT_USAGE,
            };
        }
        Err(CliError::Session(SessionError::Validation(violations))) => ValidationReport {
            valid: false,
            violations,
            notes: Vec::new(),
        },
        Err(e) => ValidationReport {
            valid: false,
            violations: vec![Violation::new("$", e.to_string())],
            notes: Vec::new(),
        },
    };
    let code = if report.valid { EXIT_OK } else { EXIT_INVALID };
    let stdout = match format {
        Format::Json => json_line(&report),
        Format::Text | Format::Csv => {
            let mut out = String::new();
            if report.valid {
                out.push_str("OK\n");
            }
            for v in &report.violations {
                let _ = writeln!(out, "{v}");
            }
            for note in &report.notes {
                let _ = writeln!(out, "note: {note}");
            }
            out
        }
    };
    Output { stdout, code }
}

fn weights(
    doc: &SessionDocument,
    node: &NodeId,
    recompute: bool,
    format: Format,
) -> Result<String, CliError> {
    let source = engine::node_source(doc, node)?;
    let weights = if recompute {
        if engine::node_judgments(doc, node).is_empty() {
            return Err(CliError::Computation(format!(
                "node {node} has no judgments to recompute its priorities from"
            )));
        }
        engine::recomputed_weights(doc, node)?
    } else {
        engine::node_weights(doc, node)?
    };
    let derived = recompute || source == NodeSource::Judgments;
    match format {
        Format::Json => Ok(json_line(&weights)),
        Format::Csv => Ok(weights_csv(&weights)),
        Format::Text => {
            let mut out = String::new();
            let origin = if derived {
                "extent analysis"
            } else {
                "precomputed"
            };
            let _ = writeln!(out, "node {node} ({origin})");
            let width = weights
                .labels
                .iter()
                .map(String::len)
                .chain([3])
                .max()
                .unwrap_or(0);
            for (label, w) in weights.iter() {
                let _ = writeln!(out, "{label:<width$}  {}", fixed4(w));
            }
            let total: f64 = weights.weights.iter().sum();
            let _ = writeln!(out, "{:<width$}  {}", "sum", fixed4(total));
            for d in &weights.diagnostics {
                let _ = writeln!(out, "warning: {}", d.message);
            }
            if derived {
                let cr = engine::node_consistency(doc, node)?;
                let verdict = if cr.acceptable {
                    "acceptable"
                } else {
                    "inconsistent"
                };
                let _ = writeln!(
                    out,
                    "consistency ratio {} ({verdict}, lambda_max {})",
                    fixed4(cr.consistency_ratio),
                    fixed4(cr.lambda_max)
                );
            }
            Ok(out)
        }
    }
}

fn weights_csv(weights: &WeightVector) -> String {
    let mut out = String::from("label,weight\n");
    for (label, w) in weights.iter() {
        let _ = writeln!(out, "{label},{}", fixed4(w));
    }
    out
}

fn rank(
    doc: &SessionDocument,
    aggregation: Option<Aggregation>,
    filter: Option<&[String]>,
    format: Format,
) -> Result<String, CliError> {
    let mut ranking = engine::ranking(doc, aggregation)?;
    if let Some(keep) = filter {
        ranking.entries.retain(|e| keep.contains(&e.alternative));
        if ranking.entries.is_empty() {
            return Err(CliError::Computation(format!(
                "no alternatives left after filtering by {}",
                keep.join(",")
            )));
        }
    }
    Ok(match format {
        Format::Json => json_line(&ranking),
        Format::Csv => ranking_csv(&ranking),
        Format::Text => ranking_text(doc, &ranking),
    })
}

fn ranking_text(doc: &SessionDocument, ranking: &RankingResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "aggregation: {}", ranking.aggregation);
    let width = ranking
        .entries
        .iter()
        .map(|e| e.alternative.len())
        .max()
        .unwrap_or(0);
    for e in &ranking.entries {
        let name = doc
            .hierarchy
            .alternative_name(&e.alternative)
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:>2}  {:<width$}  {}  {name}",
            e.rank,
            e.alternative,
            fixed4(e.score)
        );
    }
    out
}

fn sensitivity(
    doc: &SessionDocument,
    criterion: &str,
    grid: &[f64],
    aggregation: Option<Aggregation>,
    format: Format,
) -> Result<String, CliError> {
    let report = engine::sensitivity(doc, criterion, grid, aggregation)?;
    Ok(match format {
        Format::Json => json_line(&report),
        Format::Csv => sensitivity_csv(&report),
        Format::Text => sensitivity_text(&report),
    })
}

fn sensitivity_text(report: &SensitivityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "criterion {} (baseline weight {})",
        report.criterion,
        fixed4(report.baseline_weight)
    );
    for point in &report.points {
        let _ = writeln!(out, "\nweight {}", fixed4(point.weight));
        for e in &point.ranking.entries {
            let _ = writeln!(out, "{:>2}  {}  {}", e.rank, fixed4(e.score), e.alternative);
        }
    }
    if !report.reversals.is_empty() {
        out.push_str("\nrank reversals\n");
        for r in &report.reversals {
            let _ = writeln!(
                out,
                "{} overtakes {} at weight {} (between {} and {})",
                r.leader_after,
                r.leader_before,
                fixed4(r.threshold),
                fixed4(r.from_weight),
                fixed4(r.to_weight)
            );
        }
    }
    out
}

fn serve(
    addr: std::net::SocketAddr,
    store: &Path,
    ui_dir: Option<std::path::PathBuf>,
) -> Result<(), CliError> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let store = SessionStore::open(store).map_err(|e| CliError::Computation(e.to_string()))?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Computation(e.to_string()))?;
    runtime
        .block_on(fahp_service::serve(addr, Arc::new(store), ui_dir))
        .map_err(|e| CliError::Computation(format!("server failed: {e}")))
}
