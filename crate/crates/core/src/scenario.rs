//! Flat `key = value` scenario files, dispatch to the physics modules, and
//! byte-stable CSV/JSON artifacts.
//!
//! Every kind accepts `seed`, `output`, `tolerance` and any number of
//! `expect.<metric> = <number>` lines; an expectation becomes an extra
//! verdict comparing the named metric within `tolerance` (default 1e-9).

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::causal::{self, Event, EventSet};
use crate::entanglement::{self, ChshSettings, EraserConfig};
use crate::fixtures::commuting_slices;
use crate::lattice::{self, CommutatorTable, LatticeSpec};
use crate::topology::{self, oracle, sort_family, CommutationGraph, PointVariant, ReportOptions};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_EPS: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("scenario has no kind")]
    MissingKind,
    #[error("unknown scenario kind {0:?}")]
    UnknownKind(String),
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key {0:?}")]
    MissingKey(String),
    #[error("key {key:?}: cannot read {value:?} as {expected}")]
    InvalidValue { key: String, value: String, expected: &'static str },
    #[error("{0}")]
    Conflict(String),
    #[error("expectation on unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("{kind} scenario: {source}")]
    Module {
        kind: ScenarioKind,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    Bell,
    Chsh,
    Lhv,
    Epr,
    Eraser,
    Cone,
    Topology,
    Order,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::Bell,
        ScenarioKind::Chsh,
        ScenarioKind::Lhv,
        ScenarioKind::Epr,
        ScenarioKind::Eraser,
        ScenarioKind::Cone,
        ScenarioKind::Topology,
        ScenarioKind::Order,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Bell => "bell",
            ScenarioKind::Chsh => "chsh",
            ScenarioKind::Lhv => "lhv",
            ScenarioKind::Epr => "epr",
            ScenarioKind::Eraser => "eraser",
            ScenarioKind::Cone => "cone",
            ScenarioKind::Topology => "topology",
            ScenarioKind::Order => "order",
        }
    }

    fn keys(self) -> &'static [Key] {
        use Ty::*;
        match self {
            ScenarioKind::Bell => &[
                ("axis", Axis, true),
                ("particles", Int, false),
                ("trials", Int, false),
            ],
            ScenarioKind::Chsh => &[
                ("a0", Real, false),
                ("a1", Real, false),
                ("b0", Real, false),
                ("b1", Real, false),
                ("step", Real, false),
            ],
            ScenarioKind::Lhv => &[("step", Real, false), ("threshold", Real, false)],
            ScenarioKind::Epr => &[("axisA", Axis, true), ("axisB", Axis, true), ("trials", Int, false)],
            ScenarioKind::Eraser => &[
                ("marking", Bool, true),
                ("erasure", Bool, false),
                ("phases", Int, false),
            ],
            ScenarioKind::Cone => &[
                ("sites", Int, true),
                ("mass", Real, true),
                ("timeSteps", Int, true),
                ("eps", Real, false),
                ("timeStep", Real, false),
                ("speedTolerance", Real, false),
            ],
            ScenarioKind::Topology => &[
                ("graph", Text, false),
                ("fixture", Text, false),
                ("cliques", Int, false),
                ("size", Int, false),
                ("sites", Int, false),
                ("mass", Real, false),
                ("timeSteps", Int, false),
                ("eps", Real, false),
                ("variant", Text, false),
                ("pointComplements", Bool, false),
            ],
            ScenarioKind::Order => &[("fixture", Text, false)],
        }
    }

    /// Metric names a run of this kind may report.
    pub fn metrics(self) -> &'static [&'static str] {
        match self {
            ScenarioKind::Bell => &["agreementRate", "forcedUnanimity", "particles", "trials"],
            ScenarioKind::Chsh => &["chsh", "gridMax"],
            ScenarioKind::Lhv => &["lhvMax", "lhvMin", "strategies", "quantumMax"],
            ScenarioKind::Epr => &["agreementRate", "bornAgreement", "trials"],
            ScenarioKind::Eraser => &["visibility", "minDetection", "maxDetection"],
            ScenarioKind::Cone => &["fittedSpeed", "intercept", "broadening", "commutingSlices", "maxEqualTime"],
            ScenarioKind::Topology => &[
                "observables",
                "cliqueCount",
                "pointCount",
                "openSetCount",
                "maxHypersurface",
                "longestChain",
                "isT0",
                "isT1",
                "discrete",
                "sizeCapHit",
            ],
            ScenarioKind::Order => &["events", "freePairs", "totalOrientations", "admissible", "strengthenedPairs"],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ScenarioError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug)]
enum Ty {
    Int,
    Real,
    Bool,
    Axis,
    Text,
}

impl Ty {
    fn name(self) -> &'static str {
        match self {
            Ty::Int => "a non-negative integer",
            Ty::Real => "a finite real number",
            Ty::Bool => "true or false",
            Ty::Axis => "an axis (x, y, z or three comma-separated components)",
            Ty::Text => "text",
        }
    }

    fn check(self, raw: &str) -> bool {
        match self {
            Ty::Int => raw.parse::<u64>().is_ok(),
            Ty::Real => parse_real(raw).is_some(),
            Ty::Bool => parse_bool(raw).is_some(),
            Ty::Axis => parse_axis(raw).is_some(),
            Ty::Text => !raw.is_empty(),
        }
    }
}

/// Key name, value type, required.
type Key = (&'static str, Ty, bool);

fn parse_real(raw: &str) -> Option<f64> {
    raw.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_bool(raw: &str) -> Option<bool> {
    match raw {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

fn parse_axis(raw: &str) -> Option<[f64; 3]> {
    let (sign, name) = match raw.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, raw.strip_prefix('+').unwrap_or(raw)),
    };
    let named = match name {
        "x" => Some([1.0, 0.0, 0.0]),
        "y" => Some([0.0, 1.0, 0.0]),
        "z" => Some([0.0, 0.0, 1.0]),
        _ => None,
    };
    if let Some(a) = named {
        return Some(a.map(|c| sign * c));
    }
    let parts: Vec<f64> = raw.split(',').map(|p| parse_real(p.trim())).collect::<Option<_>>()?;
    <[f64; 3]>::try_from(parts).ok()
}

/// `t x1 [x2 ...] [@group]`
fn parse_event(id: &str, raw: &str) -> Option<Event> {
    let mut group = None;
    let mut numbers = Vec::new();
    for tok in raw.split_whitespace() {
        if let Some(g) = tok.strip_prefix('@') {
            if g.is_empty() || group.is_some() {
                return None;
            }
            group = Some(g.to_string());
        } else if group.is_none() {
            numbers.push(parse_real(tok)?);
        } else {
            return None;
        }
    }
    let (&t, x) = numbers.split_first()?;
    Some(Event {
        id: id.to_string(),
        t,
        x: x.to_vec(),
        group,
    })
}

/// A validated scenario. Values are kept as written and re-read with the
/// types already checked at parse time.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub tolerance: f64,
    pub expectations: BTreeMap<String, f64>,
    /// Directory that relative paths in the scenario are resolved against.
    pub base_dir: Option<PathBuf>,
    /// File stem used to name artifacts.
    pub name: String,
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ScenarioError::Syntax {
            line,
            message: format!("expected `key = value`, found {content:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ScenarioError::Syntax {
                line,
                message: "empty key".into(),
            });
        }
        if entries.iter().any(|(_, k, _)| k == key) {
            return Err(ScenarioError::DuplicateKey { line, key: key.into() });
        }
        entries.push((line, key.to_string(), value.to_string()));
    }

    let kind: ScenarioKind = entries
        .iter()
        .find(|(_, k, _)| k == "kind")
        .ok_or(ScenarioError::MissingKind)?
        .2
        .parse()?;

    let mut scenario = Scenario {
        kind,
        params: BTreeMap::new(),
        seed: None,
        output: None,
        tolerance: DEFAULT_TOLERANCE,
        expectations: BTreeMap::new(),
        base_dir: None,
        name: kind.as_str().to_string(),
    };
    let invalid = |key: &str, value: &str, ty: Ty| ScenarioError::InvalidValue {
        key: key.into(),
        value: value.into(),
        expected: ty.name(),
    };

    for (line, key, value) in entries {
        match key.as_str() {
            "kind" => {}
            "seed" => scenario.seed = Some(value.parse().map_err(|_| invalid(&key, &value, Ty::Int))?),
            "output" if !value.is_empty() => scenario.output = Some(PathBuf::from(&value)),
            "tolerance" => {
                scenario.tolerance = parse_real(&value)
                    .filter(|t| *t >= 0.0)
                    .ok_or_else(|| invalid(&key, &value, Ty::Real))?
            }
            k if k.starts_with("expect.") => {
                let metric = &k["expect.".len()..];
                if !kind.metrics().contains(&metric) {
                    return Err(ScenarioError::UnknownMetric(metric.to_string()));
                }
                let v = parse_real(&value).ok_or_else(|| invalid(&key, &value, Ty::Real))?;
                scenario.expectations.insert(metric.to_string(), v);
            }
            k if kind == ScenarioKind::Order && k.starts_with("event.") => {
                let id = &k["event.".len()..];
                if id.is_empty() || parse_event(id, &value).is_none() {
                    return Err(ScenarioError::InvalidValue {
                        key,
                        value,
                        expected: "an event `t x1 [x2 ...] [@group]`",
                    });
                }
                scenario.params.insert(k.to_string(), value);
            }
            k => {
                let spec = kind
                    .keys()
                    .iter()
                    .find(|s| s.0 == k)
                    .ok_or_else(|| ScenarioError::UnknownKey { line, key: key.clone() })?;
                if !spec.1.check(&value) {
                    return Err(invalid(&key, &value, spec.1));
                }
                scenario.params.insert(key, value);
            }
        }
    }

    for (name, _, _) in kind.keys().iter().filter(|s| s.2) {
        if !scenario.params.contains_key(*name) {
            return Err(ScenarioError::MissingKey(name.to_string()));
        }
    }
    validate_kind(&scenario)?;
    Ok(scenario)
}

/// Cross-key rules that a per-key schema cannot express.
fn validate_kind(s: &Scenario) -> Result<()> {
    let has = |k: &str| s.params.contains_key(k);
    match s.kind {
        ScenarioKind::Topology => {
            match (has("graph"), has("fixture")) {
                (true, true) => return Err(ScenarioError::Conflict("give either graph or fixture, not both".into())),
                (false, false) => return Err(ScenarioError::MissingKey("graph".into())),
                _ => {}
            }
            if let Some(f) = s.params.get("fixture") {
                if !["chain", "complete", "sharedVertex", "lattice"].contains(&f.as_str()) {
                    return Err(ScenarioError::InvalidValue {
                        key: "fixture".into(),
                        value: f.clone(),
                        expected: "one of chain, complete, sharedVertex, lattice",
                    });
                }
                if f == "lattice" {
                    for k in ["sites", "mass", "timeSteps"] {
                        if !has(k) {
                            return Err(ScenarioError::MissingKey(k.into()));
                        }
                    }
                }
            }
            if let Some(v) = s.params.get("variant") {
                parse_variant(v)?;
            }
        }
        ScenarioKind::Order => {
            let events = s.params.keys().filter(|k| k.starts_with("event.")).count();
            match (s.params.get("fixture"), events) {
                (Some(_), n) if n > 0 => {
                    return Err(ScenarioError::Conflict("give either fixture or event lines, not both".into()))
                }
                (Some(f), _) if f != "f3" => {
                    return Err(ScenarioError::InvalidValue {
                        key: "fixture".into(),
                        value: f.clone(),
                        expected: "f3",
                    })
                }
                (None, 0) => return Err(ScenarioError::MissingKey("fixture".into())),
                _ => {}
            }
        }
        _ => {}
    }
    Ok(())
}

fn parse_variant(v: &str) -> Result<PointVariant> {
    match v {
        "subfamilyIntersection" => Ok(PointVariant::SubfamilyIntersection),
        "perObservable" => Ok(PointVariant::PerObservable),
        _ => Err(ScenarioError::InvalidValue {
            key: "variant".into(),
            value: v.into(),
            expected: "subfamilyIntersection or perObservable",
        }),
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut s = parse_scenario(&text)?;
    s.base_dir = path.parent().map(Path::to_path_buf);
    if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
        s.name = stem.to_string();
    }
    Ok(s)
}

impl Scenario {
    fn int(&self, key: &str, default: u64) -> u64 {
        self.params.get(key).map_or(default, |v| v.parse().expect("validated"))
    }

    fn real(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).map_or(default, |v| parse_real(v).expect("validated"))
    }

    fn flag(&self, key: &str, default: bool) -> bool {
        self.params.get(key).map_or(default, |v| parse_bool(v).expect("validated"))
    }

    fn axis(&self, key: &str) -> [f64; 3] {
        parse_axis(&self.params[key]).expect("validated")
    }

    /// Replaces the lattice threshold for kinds that use one.
    pub fn override_eps(&mut self, eps: f64) {
        let lattice_topology =
            self.kind == ScenarioKind::Topology && self.params.get("fixture").map(String::as_str) == Some("lattice");
        if self.kind == ScenarioKind::Cone || lattice_topology {
            self.params.insert("eps".into(), format!("{eps:e}"));
        }
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    fn events(&self) -> Result<EventSet> {
        if self.params.contains_key("fixture") {
            return Ok(EventSet::three_particle_fixture());
        }
        let events = self
            .params
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("event.").map(|id| parse_event(id, v).expect("validated")))
            .collect();
        EventSet::new(events).map_err(|e| module(self.kind, e))
    }
}

fn module<E: std::error::Error + Send + Sync + 'static>(kind: ScenarioKind, e: E) -> ScenarioError {
    ScenarioError::Module {
        kind,
        source: Box::new(e),
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the scenario's own `output` directory.
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub scenario_kind: ScenarioKind,
    pub inputs_echo: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    /// Artifact file names, relative to the output directory.
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    /// 0 when every verdict passes, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        let verdicts: BTreeMap<&str, &str> = self
            .verdicts
            .iter()
            .map(|(k, &v)| (k.as_str(), if v { "pass" } else { "fail" }))
            .collect();
        json!({
            "scenarioKind": self.scenario_kind.as_str(),
            "inputsEcho": self.inputs_echo,
            "metrics": self.metrics,
            "verdicts": verdicts,
            "artifacts": self.artifacts,
        })
    }

    pub fn to_json_string(&self) -> String {
        json_text(&self.to_json())
    }
}

/// Exit status for a failed run.
pub const ERROR_EXIT: i32 = 1;

/// A CSV table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&'static str]) -> Self {
        CsvTable {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn emit_csv(table: &CsvTable, path: &Path) -> Result<PathBuf> {
    write_file(path, table.to_csv())
}

/// Pretty JSON; object keys come out sorted because `serde_json` maps are ordered.
pub fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn emit_json(value: &Value, path: &Path) -> Result<PathBuf> {
    write_file(path, json_text(value))
}

fn write_file(path: &Path, contents: String) -> Result<PathBuf> {
    let io = |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)?;
    Ok(path.to_path_buf())
}

/// Results of one kind-specific computation before expectations are applied.
struct Outcome {
    metrics: BTreeMap<String, f64>,
    verdicts: BTreeMap<String, bool>,
    tables: Vec<(&'static str, CsvTable)>,
    documents: Vec<(&'static str, Value)>,
    texts: Vec<(&'static str, String)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            metrics: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            tables: Vec::new(),
            documents: Vec::new(),
            texts: Vec::new(),
        }
    }

    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.to_string(), v);
    }

    fn verdict(&mut self, name: &str, pass: bool) {
        self.verdicts.insert(name.to_string(), pass);
    }
}

fn count(n: usize) -> f64 {
    n as f64
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<RunReport> {
    let mut s = scenario.clone();
    if let Some(seed) = options.seed {
        s.seed = Some(seed);
    }
    if let Some(eps) = options.eps {
        s.override_eps(eps);
    }
    let seed = s.seed.unwrap_or(0);
    log::info!("running {} scenario {:?} with seed {seed}", s.kind, s.name);

    let mut out = match s.kind {
        ScenarioKind::Bell => run_bell(&s, seed),
        ScenarioKind::Chsh => run_chsh(&s),
        ScenarioKind::Lhv => run_lhv(&s),
        ScenarioKind::Epr => run_epr(&s, seed),
        ScenarioKind::Eraser => run_eraser(&s),
        ScenarioKind::Cone => run_cone(&s),
        ScenarioKind::Topology => run_topology(&s),
        ScenarioKind::Order => run_order(&s),
    }?;

    for (metric, expected) in &s.expectations {
        let pass = out
            .metrics
            .get(metric)
            .is_some_and(|v| (v - expected).abs() <= s.tolerance);
        out.verdict(&format!("expect.{metric}"), pass);
    }

    let mut inputs_echo = s.params.clone();
    inputs_echo.insert("kind".into(), s.kind.as_str().into());
    inputs_echo.insert("seed".into(), seed.to_string());
    if !s.expectations.is_empty() {
        inputs_echo.insert("tolerance".into(), format!("{:e}", s.tolerance));
        for (m, v) in &s.expectations {
            inputs_echo.insert(format!("expect.{m}"), format!("{v:e}"));
        }
    }

    let mut report = RunReport {
        scenario_kind: s.kind,
        inputs_echo,
        metrics: out.metrics,
        verdicts: out.verdicts,
        artifacts: Vec::new(),
    };

    let out_dir = options.out_dir.clone().or_else(|| s.output.as_ref().map(|p| s.resolve(p)));
    if let Some(dir) = out_dir {
        let mut names = Vec::new();
        for (suffix, table) in &out.tables {
            let name = format!("{}.{suffix}.csv", s.name);
            emit_csv(table, &dir.join(&name))?;
            names.push(name);
        }
        for (suffix, doc) in &out.documents {
            let name = format!("{}.{suffix}.json", s.name);
            emit_json(doc, &dir.join(&name))?;
            names.push(name);
        }
        for (suffix, text) in &out.texts {
            let name = format!("{}.{suffix}.txt", s.name);
            write_file(&dir.join(&name), text.clone())?;
            names.push(name);
        }
        let report_name = format!("{}.report.json", s.name);
        names.push(report_name.clone());
        report.artifacts = names;
        emit_json(&report.to_json(), &dir.join(&report_name))?;
    }
    Ok(report)
}

fn run_bell(s: &Scenario, seed: u64) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let axis = s.axis("axis");
    let particles = s.int("particles", 2) as usize;
    let trials = s.int("trials", 10_000) as usize;
    let psi = if particles == 2 {
        entanglement::bell_phi_plus()
    } else {
        entanglement::ghz(particles).map_err(err)?
    };
    let rate = entanglement::unanimity_rate(&psi, axis, trials, seed).map_err(err)?;
    let forced = entanglement::forced_unanimity(&psi, axis).map_err(err)?;
    let mut out = Outcome::new();
    out.metric("agreementRate", rate);
    out.metric("forcedUnanimity", forced);
    out.metric("particles", count(particles));
    out.metric("trials", count(trials));
    out.verdict("perfectCorrelation", rate == 1.0 && (forced - 1.0).abs() <= 1e-12);
    Ok(out)
}

fn run_chsh(s: &Scenario) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let deg = |k: &str, d: f64| s.real(k, d).to_radians();
    let settings = ChshSettings::xz(deg("a0", 0.0), deg("a1", 90.0), deg("b0", 45.0), deg("b1", 315.0));
    let psi = entanglement::bell_phi_plus();
    let value = entanglement::chsh(&psi, &settings).map_err(err)?;
    let mut out = Outcome::new();
    out.metric("chsh", value);
    out.verdict("violatesLhv", value > 2.0 + 1e-9);
    out.verdict("withinTsirelson", value <= 2.0 * SQRT_2 + 1e-10);
    if s.params.contains_key("step") {
        let best = entanglement::maximize_chsh(&psi, s.real("step", 1.0)).map_err(err)?;
        out.metric("gridMax", best.value);
        out.verdict("gridWithinTsirelson", best.value <= 2.0 * SQRT_2 + 1e-10);
    }
    Ok(out)
}

fn run_lhv(s: &Scenario) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let summary = entanglement::lhv_chsh();
    let best = entanglement::maximize_chsh(&entanglement::bell_phi_plus(), s.real("step", 1.0)).map_err(err)?;
    let threshold = s.real("threshold", 2.82);
    let mut out = Outcome::new();
    out.metric("lhvMax", f64::from(summary.max));
    out.metric("lhvMin", f64::from(summary.min));
    out.metric("strategies", count(summary.strategies));
    out.metric("quantumMax", best.value);
    out.verdict("quantumGap", summary.max == 2 && best.value >= threshold);
    Ok(out)
}

fn run_epr(s: &Scenario, seed: u64) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let (a, b) = (s.axis("axisA"), s.axis("axisB"));
    let trials = s.int("trials", 10_000) as usize;
    let rate = entanglement::epr_agreement(a, b, trials, seed).map_err(err)?;
    // Φ⁺ agreement probability is (1 + a·Rb)/2, R flipping the y component
    let dot = a[0] * b[0] - a[1] * b[1] + a[2] * b[2];
    let born = (1.0 + dot) / 2.0;
    let sigma = (born * (1.0 - born) / trials as f64).sqrt();
    let mut out = Outcome::new();
    out.metric("agreementRate", rate);
    out.metric("bornAgreement", born);
    out.metric("trials", count(trials));
    out.verdict("matchesBorn", (rate - born).abs() <= 5.0 * sigma + 1e-12);
    Ok(out)
}

fn run_eraser(s: &Scenario) -> Result<Outcome> {
    let cfg = EraserConfig {
        marking: s.flag("marking", false),
        erasure: s.flag("erasure", false),
        phase_samples: s.int("phases", 64) as usize,
    };
    let curve = entanglement::eraser_curve(cfg).map_err(|e| module(s.kind, e))?;
    let expected = if cfg.marking && !cfg.erasure { 0.0 } else { 1.0 };
    let mut out = Outcome::new();
    out.metric("visibility", curve.visibility);
    out.metric("minDetection", curve.detection.iter().copied().fold(f64::INFINITY, f64::min));
    out.metric("maxDetection", curve.detection.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    out.verdict("expectedVisibility", (curve.visibility - expected).abs() <= 1e-12);
    let mut table = CsvTable::new(&["phi", "probability"]);
    for (phi, p) in curve.phases.iter().zip(&curve.detection) {
        table.push(vec![phi.to_string(), p.to_string()]);
    }
    out.tables.push(("eraser", table));
    Ok(out)
}

fn lattice_spec(s: &Scenario) -> Result<(LatticeSpec, f64)> {
    let spec = LatticeSpec::with_time_step(
        s.int("sites", 0) as usize,
        s.real("mass", 0.0),
        s.int("timeSteps", 0) as usize,
        s.real("timeStep", 1.0),
    )
    .map_err(|e| module(s.kind, e))?;
    Ok((spec, s.real("eps", DEFAULT_EPS)))
}

fn run_cone(s: &Scenario) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let (spec, eps) = lattice_spec(s)?;
    let profile = lattice::cone_profile(&spec, eps).map_err(err)?;
    let table = CommutatorTable::new(&spec);
    let max_equal_time = (0..spec.sites as i64)
        .map(|dx| table.get(dx, 0).abs())
        .fold(0.0, f64::max);
    let slices = commuting_slices(&spec, eps).len();

    let mut out = Outcome::new();
    out.metric("fittedSpeed", profile.fitted_speed);
    out.metric("intercept", profile.intercept);
    out.metric("broadening", profile.broadening());
    out.metric("commutingSlices", count(slices));
    out.metric("maxEqualTime", max_equal_time);
    out.verdict(
        "speedNearOne",
        (profile.fitted_speed - 1.0).abs() <= s.real("speedTolerance", 0.15),
    );
    out.verdict("equalTimeExact", max_equal_time <= 1e-12);
    out.verdict("manyHypersurfaces", slices >= 2);

    let mut cone = CsvTable::new(&["dt", "extent"]);
    for (dt, e) in &profile.per_time_extent {
        cone.push(vec![dt.to_string(), e.to_string()]);
    }
    let mut comm = CsvTable::new(&["dx", "dt", "D"]);
    for (dx, dt, d) in table.rows() {
        comm.push(vec![dx.to_string(), dt.to_string(), d.to_string()]);
    }
    out.tables.push(("cone", cone));
    out.tables.push(("commutator", comm));
    Ok(out)
}

fn topology_graph(s: &Scenario) -> Result<CommutationGraph> {
    let err = |e| module(s.kind, e);
    if let Some(path) = s.params.get("graph") {
        let path = s.resolve(Path::new(path));
        let text = std::fs::read_to_string(&path).map_err(|source| ScenarioError::Io { path, source })?;
        return CommutationGraph::from_edge_list(&text).map_err(err);
    }
    let cliques = s.int("cliques", 4) as usize;
    let size = s.int("size", 3) as usize;
    match s.params["fixture"].as_str() {
        "chain" => CommutationGraph::disjoint_cliques(cliques, size).map_err(err),
        "complete" => CommutationGraph::complete(size).map_err(err),
        "sharedVertex" => {
            CommutationGraph::with_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).map_err(err)
        }
        _ => {
            let (spec, eps) = lattice_spec(s)?;
            Ok(lattice::commutation_graph(&spec, eps).map_err(|e| module(s.kind, e))?.graph)
        }
    }
}

fn run_topology(s: &Scenario) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let g = topology_graph(s)?;
    let options = ReportOptions {
        variant: s.params.get("variant").map_or(Ok(PointVariant::default()), |v| parse_variant(v))?,
        include_point_complements: s.flag("pointComplements", false),
    };
    let report = topology::topology_report(&g, options).map_err(err)?;

    let mut out = Outcome::new();
    out.metric("observables", count(g.len()));
    out.metric("cliqueCount", count(report.cliques.len()));
    out.metric("pointCount", count(report.points.len()));
    if let Some(n) = report.open_set_count {
        out.metric("openSetCount", count(n));
    }
    out.metric("maxHypersurface", count(report.max_hypersurface));
    out.metric("longestChain", count(report.longest_chain));
    out.metric("isT0", indicator(report.flags.is_t0));
    out.metric("isT1", indicator(report.flags.is_t1));
    out.metric("discrete", indicator(report.flags.discrete));
    out.metric("sizeCapHit", indicator(report.flags.size_cap_hit));

    if g.len() <= oracle::MAX_ORACLE_VERTICES {
        let mut fast = topology::points_of_m(&g, PointVariant::SubfamilyIntersection)
            .map_err(err)?
            .points;
        let mut slow = oracle::brute_force_points(&g);
        sort_family(&mut fast);
        sort_family(&mut slow);
        out.verdict("oracleAgreement", fast == slow);
    }
    out.documents.push((
        "topology",
        serde_json::to_value(&report).expect("topology report serializes"),
    ));
    Ok(out)
}

fn run_order(s: &Scenario) -> Result<Outcome> {
    let err = |e| module(s.kind, e);
    let events = s.events()?;
    let summary = causal::enumerate_admissible_orientations(&events).map_err(err)?;

    let mut axioms = true;
    let mut extends = !summary.admissible_orders.is_empty();
    for q in &summary.admissible_orders {
        axioms &= q.is_partial_order() && q.contains(&summary.classical);
        extends &= causal::strict_extension_check(&summary.classical, q).map_err(err)?.holds;
    }
    let strengthened = summary.strengthened_pairs();

    let mut out = Outcome::new();
    out.metric("events", count(events.len()));
    out.metric("freePairs", count(summary.free_pairs.len()));
    out.metric("totalOrientations", count(summary.total));
    out.metric("admissible", count(summary.admissible));
    out.metric("strengthenedPairs", count(strengthened.len()));
    out.verdict("partialOrder", axioms);
    out.verdict("strictExtension", axioms && extends && !strengthened.is_empty());

    let doc = json!({
        "classical": summary.classical.to_json(),
        "admissible": summary.admissible_orders.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        "pairs": serde_json::to_value(&summary.pairs).expect("pairs serialize"),
        "strengthenedPairs": strengthened,
    });
    out.documents.push(("order", doc));

    let mut hasse = String::from("# classical\n");
    hasse.push_str(&summary.classical.hasse_text());
    for (i, q) in summary.admissible_orders.iter().enumerate() {
        hasse.push_str(&format!("# admissible {i}\n"));
        hasse.push_str(&q.hasse_text());
    }
    out.texts.push(("hasse", hasse));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_bell_scenario() {
        let s = parse_scenario("kind = bell\naxis = z").unwrap();
        assert_eq!(s.kind, ScenarioKind::Bell);
        assert_eq!(s.params["axis"], "z");
        let r = run_scenario(&s, &RunOptions::default()).unwrap();
        assert_eq!(r.metrics["agreementRate"], 1.0);
        assert!(r.verdicts["perfectCorrelation"]);
        assert_eq!(r.exit_code(), 0);
        assert!(r.artifacts.is_empty());
    }

    #[test]
    fn cone_scenario_echoes_its_schema() {
        let s = parse_scenario("kind = cone\nsites = 128\nmass = 0.1\ntimeSteps = 32\neps = 1e-3").unwrap();
        assert_eq!(s.kind, ScenarioKind::Cone);
        for (k, v) in [("sites", "128"), ("mass", "0.1"), ("timeSteps", "32"), ("eps", "1e-3")] {
            assert_eq!(s.params[k], v);
        }
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_scenario("kind = warp"), Err(ScenarioError::UnknownKind(k)) if k == "warp"));
        assert!(matches!(parse_scenario("axis = z"), Err(ScenarioError::MissingKind)));
        assert!(matches!(parse_scenario("kind = bell"), Err(ScenarioError::MissingKey(k)) if k == "axis"));
        assert!(matches!(
            parse_scenario("kind = bell\naxis = z\naxsi = x"),
            Err(ScenarioError::UnknownKey { line: 3, .. })
        ));
        assert!(matches!(
            parse_scenario("kind = bell\naxis = w"),
            Err(ScenarioError::InvalidValue { .. })
        ));
        assert!(matches!(
            parse_scenario("kind = bell\naxis = z\naxis = x"),
            Err(ScenarioError::DuplicateKey { .. })
        ));
        assert!(matches!(
            parse_scenario("kind = cone\nsites = 64\nmass = 1\ntimeSteps = many"),
            Err(ScenarioError::InvalidValue { .. })
        ));
        assert!(matches!(
            parse_scenario("kind = lhv\nexpect.nonsense = 1"),
            Err(ScenarioError::UnknownMetric(_))
        ));
        assert!(matches!(parse_scenario("kind = lhv\njunk"), Err(ScenarioError::Syntax { line: 2, .. })));
        assert!(matches!(
            parse_scenario("kind = topology\nfixture = chain\ngraph = g.txt"),
            Err(ScenarioError::Conflict(_))
        ));
        assert!(matches!(parse_scenario("kind = order"), Err(ScenarioError::MissingKey(_))));
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_scenario("# header\n\nkind = eraser  # trailing\nmarking = true\n").unwrap();
        assert!(s.flag("marking", false));
    }

    #[test]
    fn axes_parse() {
        assert_eq!(parse_axis("-x"), Some([-1.0, 0.0, 0.0]));
        assert_eq!(parse_axis("0.6, 0, 0.8"), Some([0.6, 0.0, 0.8]));
        assert_eq!(parse_axis("1,2"), None);
    }

    #[test]
    fn events_parse() {
        let e = parse_event("a", "1.5 0.25 -3 @g").unwrap();
        assert_eq!((e.t, e.x.clone(), e.group.as_deref()), (1.5, vec![0.25, -3.0], Some("g")));
        assert!(parse_event("a", "").is_none());
        assert!(parse_event("a", "1 @g 2").is_none());
    }

    #[test]
    fn lhv_and_order_scenarios() {
        let r = run_scenario(&parse_scenario("kind = lhv\nstep = 5").unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(r.metrics["lhvMax"], 2.0);
        assert!(r.metrics["quantumMax"] >= 2.82);
        assert!(r.passed());

        let r = run_scenario(&parse_scenario("kind = order\nfixture = f3").unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(r.metrics["admissible"], 3.0);
        assert!(r.verdicts["strictExtension"]);
    }

    #[test]
    fn expectations_become_verdicts() {
        let text = "kind = eraser\nmarking = true\nexpect.visibility = 1\n";
        let r = run_scenario(&parse_scenario(text).unwrap(), &RunOptions::default()).unwrap();
        assert!(!r.verdicts["expect.visibility"]);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn module_errors_carry_the_kind() {
        let s = parse_scenario("kind = cone\nsites = 4\nmass = 1\ntimeSteps = 16").unwrap();
        let e = run_scenario(&s, &RunOptions::default()).unwrap_err();
        assert!(e.to_string().starts_with("cone scenario:"), "{e}");
    }

    #[test]
    fn csv_layout() {
        let mut t = CsvTable::new(&["dt", "extent"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.to_csv(), "dt,extent\n1,2\n");
    }
}
