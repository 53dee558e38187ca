//! Scenario runner over `funex-core`: TOML in, CSV out.

pub mod error;
pub mod report;
pub mod scenario;
mod sections;
mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use funex_core::bid::{validate_bistochastic, SUM_TOLERANCE};

pub use error::{CliError, Result};
pub use report::{RunReport, SectionReport, SectionStatus, Warning};
pub use scenario::Scenario;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FUNEX_OUT_DIR";

const FALLBACK_OUT_DIR: &str = "funex-out";

struct Bundled {
    name: &'static str,
    description: &'static str,
    text: &'static str,
}

const BUNDLED: &[Bundled] = &[
    Bundled {
        name: "bid_decomposition_demo",
        description: "four-function bid matrix: Birkhoff terms, budgets, classes and ROM",
        text: include_str!("../scenarios/bid_decomposition_demo.toml"),
    },
    Bundled {
        name: "externality_demo",
        description: "block pattern, uniform splits and minor/major/explicit externality candidates",
        text: include_str!("../scenarios/externality_demo.toml"),
    },
    Bundled {
        name: "fig7_canonical",
        description: "the four canonical market-dynamics curves for kappa = 1",
        text: include_str!("../scenarios/fig7_canonical.toml"),
    },
    Bundled {
        name: "market_fit",
        description: "supply and demand curves from mirrored capacities, with root regimes and fit check",
        text: include_str!("../scenarios/market_fit.toml"),
    },
    Bundled {
        name: "poverty_trap",
        description: "golden weighting exponent: starts below p* are trapped at zero, above it escape to one",
        text: include_str!("../scenarios/poverty_trap.toml"),
    },
    Bundled {
        name: "saturated_growth",
        description: "saturated frames: capital grows when r exceeds exp(-2)",
        text: include_str!("../scenarios/saturated_growth.toml"),
    },
    Bundled {
        name: "valuation_demo",
        description: "non-additive capacity over two departments: prospect value and org capacity",
        text: include_str!("../scenarios/valuation_demo.toml"),
    },
    Bundled {
        name: "weird_fixed_point",
        description: "inverse golden weighting exponent: every start converges to p* near 0.34",
        text: include_str!("../scenarios/weird_fixed_point.toml"),
    },
];

/// Bundled scenario names with one-line descriptions, sorted by name.
pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    BUNDLED.iter().map(|b| (b.name, b.description)).collect()
}

/// Text of a bundled scenario.
pub fn bundled_scenario(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|b| b.name == name).map(|b| b.text)
}

/// Reads `source` as a file path, or as a bundled name when no such file exists.
pub fn load_scenario(source: &str, overrides: &[String]) -> Result<Scenario> {
    let path = Path::new(source);
    let (text, fallback_name) = if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        (text, stem.unwrap_or_default())
    } else if let Some(text) = bundled_scenario(source) {
        (text.to_string(), source.to_string())
    } else {
        return Err(CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or bundled scenario"),
        ));
    };
    let mut scenario = Scenario::parse(&text, overrides)?;
    if scenario.name.is_empty() {
        scenario.name = fallback_name;
    }
    Ok(scenario)
}

/// Output directory: explicit argument, then the environment, then the
/// scenario, then `funex-out`.
pub fn resolve_out_dir(explicit: Option<&Path>, scenario: &Scenario) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUT_DIR))
}

/// Loads, validates and runs a scenario.
pub fn run(scenario: &str, out_dir: Option<&Path>, overrides: &[String]) -> Result<RunReport> {
    let s = load_scenario(scenario, overrides)?;
    let dir = resolve_out_dir(out_dir, &s);
    run_scenario(&s, &dir)
}

/// Runs every present section in name order and writes its CSV files to
/// `out_dir`, plus `run_summary.csv`. A failing section does not stop the
/// others; check [`RunReport::success`].
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<RunReport> {
    scenario.validate()?;
    let start = Instant::now();
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut sections = Vec::new();
    let mut warnings = Vec::new();
    let mut manifest = Vec::new();
    for name in scenario.sections() {
        let result = match name {
            "behavior" => scenario.behavior.as_ref().map(sections::behavior),
            "bid" => scenario.bid.as_ref().map(sections::bid),
            "dynamics" => scenario.dynamics.as_ref().map(sections::dynamics),
            "exchange" => scenario.exchange.as_ref().map(sections::exchange),
            "industrial" => scenario.industrial.as_ref().map(sections::industrial),
            "valuation" => scenario.valuation.as_ref().map(sections::valuation),
            _ => None,
        }
        .expect("listed sections are present");
        let (status, files) = match result {
            Ok(out) => {
                let mut files = Vec::new();
                for (file, bytes) in out.files {
                    let path = out_dir.join(&file);
                    fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
                    manifest.push(path);
                    files.push(file);
                }
                warnings.extend(
                    out.warnings
                        .into_iter()
                        .map(|message| Warning { section: name, message }),
                );
                (SectionStatus::Ok, files)
            }
            Err(e) => (SectionStatus::Failed(e.0), Vec::new()),
        };
        sections.push(SectionReport { name, status, files });
    }

    let summary_path = out_dir.join("run_summary.csv");
    let mut t = table::Table::new(&["kind", "section", "detail"]);
    for s in &sections {
        match &s.status {
            SectionStatus::Ok => t.row(["status", s.name, "ok"]),
            SectionStatus::Failed(msg) => t.row(["status", s.name, &format!("failed: {msg}")]),
        }
    }
    for w in &warnings {
        t.row(["warning", w.section, &w.message]);
    }
    for s in &sections {
        for f in &s.files {
            t.row(["file", s.name, f]);
        }
    }
    fs::write(&summary_path, t.finish()).map_err(|e| CliError::io(&summary_path, e))?;
    manifest.push(summary_path);
    manifest.sort();

    Ok(RunReport {
        scenario: scenario.name.clone(),
        out_dir: out_dir.to_path_buf(),
        sections,
        manifest,
        warnings,
        duration: start.elapsed(),
    })
}

/// Decomposes a bistochastic matrix given as header-less CSV rows.
pub fn decompose_csv(text: &str) -> Result<Vec<u8>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(k + 1, |p| p.line() as usize),
            column: 1,
            message: e.to_string(),
        })?;
        let row = record
            .iter()
            .enumerate()
            .map(|(col, f)| {
                f.parse::<f64>().map_err(|e| CliError::Parse {
                    line: k + 1,
                    column: col + 1,
                    message: format!("`{f}`: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let m = validate_bistochastic(&rows, SUM_TOLERANCE)
        .map_err(|e| CliError::validation("bistochastic matrix", e.to_string()))?;
    sections::decompose(&m).map_err(|e| CliError::validation("decomposition", e.0))
}
