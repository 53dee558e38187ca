//! Scenario files: one TOML document, one optional table per section.

use std::path::PathBuf;

use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub output_dir: Option<PathBuf>,
    pub exchange: Option<ExchangeSection>,
    pub valuation: Option<ValuationSection>,
    pub bid: Option<BidSection>,
    pub industrial: Option<IndustrialSection>,
    pub dynamics: Option<DynamicsSection>,
    pub behavior: Option<BehaviorSection>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub rho: f64,
    pub functions: f64,
    pub complexity: f64,
    #[serde(default)]
    pub capital: f64,
    #[serde(default = "one")]
    pub maturity: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangeSection {
    pub supply: FrameSection,
    pub demand: FrameSection,
    pub rho_star: f64,
    pub complexity: f64,
    #[serde(default = "one")]
    pub maturity: f64,
    /// Separate complexities for the two capital integrals.
    pub complexity_supply: Option<f64>,
    pub complexity_demand: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProspectTerm {
    pub outcome: f64,
    pub states: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueSection {
    pub rho: f64,
    pub c_gain: f64,
    pub c_loss: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationSection {
    pub states: usize,
    /// Full table indexed by event bitmask, `2^states` entries.
    pub capacity: Option<Vec<f64>>,
    /// Additive capacity from per-state probabilities.
    pub probabilities: Option<Vec<f64>>,
    #[serde(default)]
    pub prospect: Vec<ProspectTerm>,
    /// Department partition of the states.
    pub departments: Option<Vec<Vec<usize>>>,
    /// Per-function event partitions.
    pub functions: Option<Vec<Vec<Vec<usize>>>>,
    pub c_tech: Option<u64>,
    pub realized: Option<Vec<f64>>,
    pub capability: Option<f64>,
    pub value: Option<ValueSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidSection {
    pub matrix: Vec<Vec<f64>>,
    pub cost: Vec<f64>,
    pub information: Vec<f64>,
    pub best_knowledge: Option<f64>,
    pub professionalism: Option<f64>,
    /// Term indices kept by the client; their superposition is checked
    /// against the expectation matrix.
    pub select: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub row: usize,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksSection {
    pub base: Vec<usize>,
    pub orders: Vec<usize>,
    pub blocks: Vec<BlockEntry>,
    /// Function-level operators, split uniformly over the components.
    pub cost: Option<Vec<f64>>,
    pub information: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSection {
    pub beta: usize,
    pub e_split: Vec<f64>,
    pub i_split: Vec<f64>,
    /// Permutation mapping; alternative to `support`.
    pub selection: Option<Vec<usize>>,
    pub support: Option<Vec<Vec<u8>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObsolescenceSection {
    pub time: f64,
    pub index: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalitySection {
    #[serde(default)]
    pub time: f64,
    #[serde(default)]
    pub obsolescence: Vec<ObsolescenceSection>,
    pub candidates: Vec<CandidateSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndustrialSection {
    pub blocks: Option<BlocksSection>,
    pub externality: Option<ExternalitySection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalSection {
    pub kappa: f64,
    #[serde(default = "all_kinds")]
    pub kinds: Vec<String>,
}

fn all_kinds() -> Vec<String> {
    ["a", "b", "c", "d"].map(String::from).to_vec()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideSection {
    pub kappa: f64,
    pub complexity: f64,
    pub maturity: f64,
    pub amplitudes: Option<[f64; 2]>,
    /// Polar form `(amplitude, phase)`, complex regime only.
    pub amplitude: Option<f64>,
    pub phase: Option<f64>,
}

fn default_points() -> usize {
    101
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    pub canonical: Option<CanonicalSection>,
    pub supply: Option<SideSection>,
    pub demand: Option<SideSection>,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Upper end of the `m` grid; `5|κ|` when absent.
    pub m_max: Option<f64>,
    /// Outcome sums along `m`, which must stay constant.
    pub outcome_sums: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeKind {
    Weird,
    Poor,
    Custom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeSection {
    pub label: RegimeKind,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub m_over_c: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSection {
    pub p0: f64,
    pub outcome: f64,
}

fn default_max_iter() -> usize {
    10_000
}

fn default_tolerance() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorSection {
    pub regimes: Vec<RegimeSection>,
    #[serde(default)]
    pub starts: Vec<f64>,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub cycles: Vec<CycleSection>,
}

impl Scenario {
    /// Parses `text`, applying `key=value` overrides on top of the file.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let scenario: Scenario = if overrides.is_empty() {
            toml::from_str(text).map_err(|e| parse_error(text, &e))?
        } else {
            let mut table: Table = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
            for o in overrides {
                apply_override(&mut table, o)?;
            }
            Value::Table(table)
                .try_into()
                .map_err(|e: toml::de::Error| CliError::validation("field types", e.message().to_string()))?
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Present section names, sorted.
    pub fn sections(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.behavior.is_some() {
            out.push("behavior");
        }
        if self.bid.is_some() {
            out.push("bid");
        }
        if self.dynamics.is_some() {
            out.push("dynamics");
        }
        if self.exchange.is_some() {
            out.push("exchange");
        }
        if self.industrial.is_some() {
            out.push("industrial");
        }
        if self.valuation.is_some() {
            out.push("valuation");
        }
        out
    }

    /// Shape checks that need no numerics.
    pub fn validate(&self) -> Result<()> {
        if self.sections().is_empty() {
            return Err(CliError::validation("at least one section", "scenario has no sections"));
        }
        if let Some(v) = &self.valuation {
            if v.capacity.is_some() == v.probabilities.is_some() {
                return Err(CliError::validation(
                    "valuation capacity",
                    "give exactly one of capacity or probabilities",
                ));
            }
            if v.departments.is_some() != v.functions.is_some() {
                return Err(CliError::validation(
                    "valuation org structure",
                    "departments and functions go together",
                ));
            }
        }
        if let Some(b) = &self.bid {
            let n = b.matrix.len();
            if b.matrix.iter().any(|r| r.len() != n) {
                return Err(CliError::validation("bid dimensions", "matrix must be square"));
            }
            if b.cost.len() != n || b.information.len() != n {
                return Err(CliError::validation(
                    "bid dimensions",
                    format!(
                        "matrix order {n}, cost {}, information {}",
                        b.cost.len(),
                        b.information.len()
                    ),
                ));
            }
            if b.best_knowledge.is_some() != b.professionalism.is_some() {
                return Err(CliError::validation(
                    "bid ROM",
                    "best_knowledge and professionalism go together",
                ));
            }
        }
        if let Some(ind) = &self.industrial {
            if ind.blocks.is_none() && ind.externality.is_none() {
                return Err(CliError::validation(
                    "industrial content",
                    "needs blocks or externality",
                ));
            }
            if let Some(b) = &ind.blocks {
                if b.orders.len() != b.base.len() {
                    return Err(CliError::validation(
                        "industrial dimensions",
                        format!("{} block orders for {} functions", b.orders.len(), b.base.len()),
                    ));
                }
            }
            if let Some(x) = &ind.externality {
                for c in &x.candidates {
                    if c.selection.is_some() == c.support.is_some() {
                        return Err(CliError::validation(
                            "candidate selection",
                            format!("candidate {} needs exactly one of selection or support", c.beta),
                        ));
                    }
                }
            }
        }
        if let Some(d) = &self.dynamics {
            if d.canonical.is_none() && d.supply.is_none() && d.demand.is_none() {
                return Err(CliError::validation(
                    "dynamics content",
                    "needs canonical or supply/demand",
                ));
            }
            if d.supply.is_some() != d.demand.is_some() {
                return Err(CliError::validation("dynamics sides", "supply and demand go together"));
            }
            if d.points < 2 {
                return Err(CliError::validation("dynamics grid", "points must be at least 2"));
            }
        }
        if let Some(b) = &self.behavior {
            if b.regimes.is_empty() {
                return Err(CliError::validation("behavior regimes", "at least one regime"));
            }
        }
        Ok(())
    }
}

fn parse_error(text: &str, e: &toml::de::Error) -> CliError {
    let offset = e.span().map_or(0, |s| s.start);
    CliError::parse_at(text, offset, e.message().trim_end())
}

/// Parses the right-hand side as a TOML value, falling back to a bare string.
fn override_value(raw: &str) -> Value {
    toml::from_str::<Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

/// Applies one dotted `key=value` edit. Numeric segments index arrays.
pub fn apply_override(table: &mut Table, edit: &str) -> Result<()> {
    let (path, raw) = edit
        .split_once('=')
        .ok_or_else(|| CliError::validation("override syntax", format!("`{edit}` is not key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::validation(
            "override syntax",
            format!("empty key in `{path}`"),
        ));
    }
    let value = override_value(raw.trim());
    let (last, parents) = keys.split_last().expect("split yields one key");
    let mut cur = table
        .entry(keys[0].to_string())
        .or_insert_with(|| Value::Table(Table::new()));
    if parents.is_empty() {
        *cur = value;
        return Ok(());
    }
    for key in &parents[1..] {
        cur = step(cur, key, path)?;
    }
    match cur {
        Value::Table(t) => {
            t.insert(last.to_string(), value);
        }
        Value::Array(a) => {
            let slot = index(a, last, path)?;
            *slot = value;
        }
        _ => {
            return Err(CliError::validation(
                "override path",
                format!("`{path}` goes through a scalar"),
            ))
        }
    }
    Ok(())
}

fn step<'a>(cur: &'a mut Value, key: &str, path: &str) -> Result<&'a mut Value> {
    match cur {
        Value::Table(t) => Ok(t.entry(key.to_string()).or_insert_with(|| Value::Table(Table::new()))),
        Value::Array(a) => index(a, key, path),
        _ => Err(CliError::validation(
            "override path",
            format!("`{path}` goes through a scalar"),
        )),
    }
}

fn index<'a>(a: &'a mut [Value], key: &str, path: &str) -> Result<&'a mut Value> {
    let len = a.len();
    key.parse::<usize>()
        .ok()
        .and_then(|k| a.get_mut(k))
        .ok_or_else(|| CliError::validation("override path", format!("`{path}`: no element {key} of {len}")))
}
