//! Command-line frontend: load a system, run one analysis, print a report.
//!
//! Every analysis verb produces a [`ReportDocument`]; `--json` prints it as
//! canonical JSON (sorted keys), otherwise a text rendering of the same
//! document is printed. Exit status: 0 on success (and torsion-freeness
//! for `test`), 2 when `test` finds torsion, 1 on error.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{self, AnalysisError, AnnihilatorSource, StepTimings};
use crate::diffop::{render_combination, OperatorError, OperatorMatrix};
use crate::dsl::{self, DslError};
use crate::exact_poly::{parse_rational, MonomialOrder, OrderKind, Rational};
use crate::gallery::{self, Expected, GalleryError, GalleryInfo, ExpectationRow};
use crate::janet::{self, CompletionOptions, JanetError, DEFAULT_DEGREE_CAP};

pub const REPORT_SCHEMA: &str = "report-v1";
pub const GALLERY_SCHEMA: &str = "gallery-v1";

#[derive(Debug, Parser)]
#[command(name = "parametrix", version, about = "Torsion-free test and parametrization of linear PDE systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Monomial order used for Gröbner bases and rendering.
    #[arg(long, global = true, default_value = "degrevlex")]
    pub order: OrderKind,
    /// Maximal order reached during involutive completion
    /// (default: $PARAMETRIX_DEGREE_CAP, else 10).
    #[arg(long, global = true)]
    pub degree_cap: Option<u32>,
    /// Parameter binding NAME=RATIONAL (repeatable).
    #[arg(long = "param", global = true, value_name = "NAME=RATIONAL")]
    pub params: Vec<String>,
    /// Dimension for gallery entries.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Seed for randomized coordinate changes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the five-step torsion-free test.
    Test { source: String },
    /// Formal adjoint of the operator.
    Adjoint { source: String },
    /// Generating compatibility conditions.
    Cc { source: String },
    /// Candidate parametrization (steps 1-4 of the test).
    Parametrize { source: String },
    /// Janet involutive completion.
    Involution {
        source: String,
        /// Also compute the first-order Spencer form.
        #[arg(long)]
        spencer: bool,
    },
    /// List the built-in systems and their expected results.
    Gallery {
        /// Keep expectation rows whose verdict or entry name matches.
        #[arg(long)]
        filter: Option<String>,
    },
}

/// An error with a stable diagnostic code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        CliError::new(e.code.as_str(), e.to_string())
    }
}

impl From<GalleryError> for CliError {
    fn from(e: GalleryError) -> Self {
        let code = match &e {
            GalleryError::UnknownName(_) => "E101",
            GalleryError::UnsupportedN { .. } => "E102",
            GalleryError::MissingParameter { .. } => "E103",
            GalleryError::FormulaReview { .. } => "E105",
            GalleryError::Operator(_) => "E900",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<JanetError> for CliError {
    fn from(e: JanetError) -> Self {
        let code = match &e {
            JanetError::DegreeCapExceeded { .. } => "E201",
            JanetError::RoundLimit(_) => "E202",
            JanetError::NotInvolutive => "E203",
            JanetError::Operator(_) => "E900",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::UnsupportedCorank { .. } => "E301",
            AnalysisError::AnnihilatorNotFound => "E302",
            _ => "E900",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        CliError::new("E900", e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Report document

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemInfo {
    pub name: String,
    pub n: usize,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedEquation {
    pub name: String,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedOperator {
    pub rows: usize,
    pub cols: usize,
    pub order: u32,
    pub unknowns: Vec<String>,
    pub equations: Vec<RenderedEquation>,
}

impl RenderedOperator {
    pub fn new(a: &OperatorMatrix, ord: &MonomialOrder) -> Self {
        RenderedOperator {
            rows: a.nrows(),
            cols: a.ncols(),
            order: a.max_order().0,
            unknowns: a.unknown_names().to_vec(),
            equations: (0..a.nrows())
                .map(|i| RenderedEquation {
                    name: a.equation_names()[i].clone(),
                    expr: a.render_equation(i, ord),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub torsion_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedParametrization {
    pub potentials: Vec<String>,
    pub order: u32,
    /// One line per input unknown: `unknown = expression in the potentials`.
    pub formulas: Vec<RenderedEquation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedCertificate {
    pub element: String,
    pub annihilator: String,
    pub annihilator_degree: u32,
    pub source: AnnihilatorSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionEquation {
    pub expr: String,
    pub order: u32,
    pub class: usize,
    pub multiplicative: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionSection {
    pub involutive: bool,
    pub order: u32,
    pub equations: Vec<InvolutionEquation>,
    /// Top-order equation counts for classes `n, n−1, …, 1`.
    pub class_profile: Vec<usize>,
    /// 1-based image of each derivation, when the change is a permutation.
    pub permutation: Option<Vec<usize>>,
    pub coordinate_change: Vec<Vec<String>>,
    pub full_torsion_check: bool,
    pub degree_cap: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTime {
    pub step: String,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub steps: Vec<StepTime>,
    pub total_ms: f64,
}

impl Timing {
    fn from_steps(steps: &[(&str, Duration)]) -> Self {
        let steps: Vec<StepTime> = steps
            .iter()
            .map(|(s, d)| StepTime {
                step: s.to_string(),
                ms: d.as_secs_f64() * 1e3,
            })
            .collect();
        let total_ms = steps.iter().map(|s| s.ms).sum();
        Timing { steps, total_ms }
    }
}

/// Machine-readable result of one analysis verb.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub command: String,
    pub source: String,
    pub system: SystemInfo,
    pub monomial_order: OrderKind,
    pub verdict: Option<Verdict>,
    pub operators: BTreeMap<String, RenderedOperator>,
    pub parametrization: Option<RenderedParametrization>,
    pub torsion: Vec<RenderedCertificate>,
    pub counts: BTreeMap<String, u64>,
    pub involution: Option<InvolutionSection>,
    pub expected: Option<Expected>,
    pub timing: Timing,
}

impl ReportDocument {
    fn new(command: &str, loaded: &LoadedSystem, ord: &MonomialOrder) -> Self {
        let mut operators = BTreeMap::new();
        operators.insert("input".to_string(), RenderedOperator::new(&loaded.operator, ord));
        let mut counts = BTreeMap::new();
        counts.insert("input_rows".into(), loaded.operator.nrows() as u64);
        counts.insert("input_unknowns".into(), loaded.operator.ncols() as u64);
        counts.insert("input_order".into(), loaded.operator.max_order().0 as u64);
        ReportDocument {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            source: loaded.source.clone(),
            system: loaded.info.clone(),
            monomial_order: ord.kind,
            verdict: None,
            operators,
            parametrization: None,
            torsion: Vec::new(),
            counts,
            involution: None,
            expected: loaded.expected.clone(),
            timing: Timing {
                steps: Vec::new(),
                total_ms: 0.0,
            },
        }
    }

    fn add_operator(&mut self, key: &str, a: &OperatorMatrix, ord: &MonomialOrder) {
        self.operators.insert(key.to_string(), RenderedOperator::new(a, ord));
        self.counts.insert(format!("{key}_rows"), a.nrows() as u64);
        self.counts.insert(format!("{key}_order"), a.max_order().0 as u64);
    }

    /// Canonical JSON: keys sorted, two-space indentation.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    /// Text rendering of the same content as [`to_json`](Self::to_json).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let params = if self.system.params.is_empty() {
            String::new()
        } else {
            let p: Vec<String> = self.system.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!(", {}", p.join(", "))
        };
        s.push_str(&format!("{} {} (n = {}{}) [{}]\n", self.command, self.system.name, self.system.n, params, self.source));
        s.push_str(&format!("monomial order: {}\n", self.monomial_order));
        if let Some(v) = &self.verdict {
            s.push_str(&format!("verdict: {}\n", if v.torsion_free { "torsion-free" } else { "torsion" }));
        }
        for key in OPERATOR_KEYS {
            if let Some(op) = self.operators.get(*key) {
                s.push_str(&format!("\n[{key}] {} x {}, order {}\n", op.rows, op.cols, op.order));
                for eq in &op.equations {
                    s.push_str(&format!("  {}: {} = 0\n", eq.name, eq.expr));
                }
            }
        }
        if let Some(p) = &self.parametrization {
            s.push_str(&format!(
                "\nparametrization: {} potential(s) [{}], order {}\n",
                p.potentials.len(),
                p.potentials.join(", "),
                p.order
            ));
            for f in &p.formulas {
                s.push_str(&format!("  {} = {}\n", f.name, f.expr));
            }
        }
        if !self.torsion.is_empty() {
            s.push_str(&format!("\ntorsion: {} certificate(s)\n", self.torsion.len()));
            for c in &self.torsion {
                s.push_str(&format!(
                    "  {}, annihilator {} (degree {}, {})\n",
                    c.element,
                    c.annihilator,
                    c.annihilator_degree,
                    match c.source {
                        AnnihilatorSource::MonomialSearch => "monomial-search",
                        AnnihilatorSource::IdealQuotient => "ideal-quotient",
                    }
                ));
            }
        }
        if let Some(inv) = &self.involution {
            s.push_str(&format!("\ninvolutive: {}\n", inv.involutive));
            s.push_str(&format!("classes: {}\n", format_classes(inv)));
            s.push_str(&format!(
                "class profile (n..1): {}\n",
                inv.class_profile.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            ));
            match &inv.permutation {
                Some(p) => {
                    let m: Vec<String> = p.iter().enumerate().map(|(i, j)| format!("d{} -> d{}", i + 1, j)).collect();
                    s.push_str(&format!("permutation: {}\n", m.join(", ")));
                }
                None => {
                    let rows: Vec<String> = inv.coordinate_change.iter().map(|r| format!("[{}]", r.join(" "))).collect();
                    s.push_str(&format!("coordinate change: {}\n", rows.join(" ")));
                }
            }
            s.push_str(&format!("full torsion check: {}\n", inv.full_torsion_check));
            for (i, e) in inv.equations.iter().enumerate() {
                let mult: Vec<String> = e.multiplicative.iter().map(|v| format!("d{v}")).collect();
                s.push_str(&format!(
                    "  {}: {} = 0   order {}, class {}, multiplicative [{}]\n",
                    i + 1,
                    e.expr,
                    e.order,
                    e.class,
                    mult.join(" ")
                ));
            }
        }
        s.push_str("\ncounts:\n");
        for (k, v) in &self.counts {
            s.push_str(&format!("  {k}: {v}\n"));
        }
        if let Some(e) = &self.expected {
            let v = serde_json::to_value(e).expect("expected serializes");
            let fields: Vec<String> = v
                .as_object()
                .into_iter()
                .flatten()
                .filter(|(_, x)| !x.is_null())
                .map(|(k, x)| format!("{k}={x}"))
                .collect();
            if !fields.is_empty() {
                s.push_str(&format!("expected: {}\n", fields.join(", ")));
            }
        }
        s.push_str("timing:\n");
        for st in &self.timing.steps {
            s.push_str(&format!("  {}: {:.3} ms\n", st.step, st.ms));
        }
        s.push_str(&format!("  total: {:.3} ms\n", self.timing.total_ms));
        s
    }
}

const OPERATOR_KEYS: &[&str] = &[
    "input",
    "adjoint_of_input",
    "cc_of_adjoint",
    "candidate_parametrization",
    "cc_of_candidate",
    "adjoint",
    "cc",
    "completed",
    "spencer_form",
];

/// Classes of the top-order equations grouped as in `(3; 2,2; 1)`.
fn format_classes(inv: &InvolutionSection) -> String {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for e in inv.equations.iter().filter(|e| e.order == inv.order) {
        match groups.last_mut() {
            Some(g) if g[0] == e.class => g.push(e.class),
            _ => groups.push(vec![e.class]),
        }
    }
    let parts: Vec<String> = groups
        .iter()
        .map(|g| g.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("({})", parts.join("; "))
}

// ---------------------------------------------------------------------------
// Loading

/// A system ready for analysis, with its provenance.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub source: String,
    pub info: SystemInfo,
    pub operator: OperatorMatrix,
    pub expected: Option<Expected>,
}

/// Parses repeated `NAME=RATIONAL` bindings.
pub fn parse_params(raw: &[String]) -> Result<BTreeMap<String, Rational>, CliError> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::new("E104", format!("--param expects NAME=RATIONAL, got `{item}`")))?;
        let value = parse_rational(v.trim())
            .map_err(|e| CliError::new("E104", format!("--param {}: {e}", k.trim())))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

/// Loads `gallery:NAME` or a `.lps` file.
pub fn load_system(source: &str, options: &Options) -> Result<LoadedSystem, CliError> {
    let params = parse_params(&options.params)?;
    let rendered: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    if let Some(name) = source.strip_prefix("gallery:") {
        let info = gallery::info(name).ok_or_else(|| GalleryError::UnknownName(name.to_string()))?;
        if let Some(p) = params.keys().find(|p| !info.params.contains(&p.as_str())) {
            return Err(CliError::new("E104", format!("gallery entry `{name}` has no parameter `{p}`")));
        }
        let entry = gallery::gallery_build(name, options.n, &params)?;
        return Ok(LoadedSystem {
            source: source.to_string(),
            info: SystemInfo {
                name: entry.name,
                n: entry.n,
                params: rendered,
            },
            operator: entry.operator,
            expected: entry.expected,
        });
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| CliError::new("E100", format!("cannot read `{source}`: {e}")))?;
    let src = dsl::parse_system(&text)?;
    if let Some(n) = options.n {
        if n != src.nvars {
            return Err(CliError::new(
                "E104",
                format!("--n {n} conflicts with `n = {}` in `{source}`", src.nvars),
            ));
        }
    }
    if let Some(p) = params.keys().find(|p| !src.params.contains_key(*p)) {
        return Err(CliError::new("E104", format!("`{source}` declares no parameter `{p}`")));
    }
    let operator = dsl::lower_to_operator(&src, &params)?;
    let mut all_params: BTreeMap<String, String> = src
        .params
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.clone(), v.to_string())))
        .collect();
    all_params.extend(rendered);
    Ok(LoadedSystem {
        source: source.to_string(),
        info: SystemInfo {
            name: src.name,
            n: src.nvars,
            params: all_params,
        },
        operator,
        expected: None,
    })
}

// ---------------------------------------------------------------------------
// Verbs

fn timed<T>(name: &'static str, steps: &mut Vec<(&'static str, Duration)>, f: impl FnOnce() -> T) -> T {
    let t0 = Instant::now();
    let out = f();
    steps.push((name, t0.elapsed()));
    out
}

pub fn cmd_test(loaded: &LoadedSystem, ord: &MonomialOrder) -> Result<ReportDocument, CliError> {
    let (report, timings): (_, StepTimings) = analysis::torsion_free_test_timed(&loaded.operator, ord)?;
    let mut doc = ReportDocument::new("test", loaded, ord);
    doc.add_operator("adjoint_of_input", &report.adjoint_of_input, ord);
    doc.add_operator("cc_of_adjoint", &report.cc_of_adjoint, ord);
    doc.add_operator("candidate_parametrization", &report.candidate_parametrization, ord);
    doc.add_operator("cc_of_candidate", &report.cc_of_candidate, ord);
    doc.verdict = Some(Verdict {
        torsion_free: report.torsion_free,
    });
    let p = report.parametrization();
    doc.parametrization = Some(render_parametrization(&p.operator, ord));
    doc.counts.insert("potentials".into(), p.potential_count() as u64);
    doc.counts.insert("torsion_certificates".into(), report.torsion.len() as u64);
    let names = loaded.operator.unknown_names();
    doc.torsion = report
        .torsion
        .iter()
        .map(|c| RenderedCertificate {
            element: render_combination(c.element.components(), names, ord),
            annihilator: c.annihilator.render(ord),
            annihilator_degree: c.annihilator.degree(),
            source: c.source,
        })
        .collect();
    doc.timing = Timing::from_steps(&timings.steps);
    Ok(doc)
}

fn render_parametrization(p: &OperatorMatrix, ord: &MonomialOrder) -> RenderedParametrization {
    RenderedParametrization {
        potentials: p.unknown_names().to_vec(),
        order: p.max_order().0,
        formulas: (0..p.nrows())
            .map(|i| RenderedEquation {
                name: p.equation_names()[i].clone(),
                expr: p.render_equation(i, ord),
            })
            .collect(),
    }
}

pub fn cmd_adjoint(loaded: &LoadedSystem, ord: &MonomialOrder) -> Result<ReportDocument, CliError> {
    let mut steps = Vec::new();
    let adj = timed("adjoint", &mut steps, || loaded.operator.adjoint());
    let mut doc = ReportDocument::new("adjoint", loaded, ord);
    doc.add_operator("adjoint", &adj, ord);
    doc.counts
        .insert("self_adjoint".into(), u64::from(adj.same_entries(&loaded.operator)));
    doc.timing = Timing::from_steps(&steps);
    Ok(doc)
}

pub fn cmd_cc(loaded: &LoadedSystem, ord: &MonomialOrder) -> Result<ReportDocument, CliError> {
    let mut steps = Vec::new();
    let cc = timed("cc", &mut steps, || analysis::compatibility_conditions(&loaded.operator, ord))?;
    let mut doc = ReportDocument::new("cc", loaded, ord);
    doc.add_operator("cc", &cc, ord);
    doc.timing = Timing::from_steps(&steps);
    Ok(doc)
}

pub fn cmd_parametrize(loaded: &LoadedSystem, ord: &MonomialOrder) -> Result<ReportDocument, CliError> {
    let mut steps = Vec::new();
    let p = timed("parametrization", &mut steps, || analysis::parametrize(&loaded.operator, ord))?;
    let mut doc = ReportDocument::new("parametrize", loaded, ord);
    doc.add_operator("candidate_parametrization", &p.operator, ord);
    doc.parametrization = Some(render_parametrization(&p.operator, ord));
    doc.counts.insert("potentials".into(), p.potential_count() as u64);
    let composite = loaded.operator.compose(&p.operator)?;
    doc.counts.insert("composition_zero".into(), u64::from(composite.is_zero()));
    doc.timing = Timing::from_steps(&steps);
    Ok(doc)
}

pub fn cmd_involution(
    loaded: &LoadedSystem,
    ord: &MonomialOrder,
    opts: &CompletionOptions,
    spencer: bool,
) -> Result<ReportDocument, CliError> {
    let mut steps = Vec::new();
    let sys = timed("completion", &mut steps, || janet::involutive_completion(&loaded.operator, opts))?;
    let mut doc = ReportDocument::new("involution", loaded, ord);
    let completed = sys.to_operator()?;
    doc.add_operator("completed", &completed, ord);
    if spencer {
        let sp = timed("spencer_form", &mut steps, || janet::spencer_form(&sys))?;
        doc.add_operator("spencer_form", &sp.operator, ord);
    }
    let names = &sys.unknown_names;
    doc.involution = Some(InvolutionSection {
        involutive: sys.involutive,
        order: sys.order(),
        equations: sys
            .equations
            .iter()
            .map(|e| InvolutionEquation {
                expr: render_combination(e.row.components(), names, ord),
                order: e.order,
                class: e.klass,
                multiplicative: e.multiplicative.clone(),
            })
            .collect(),
        class_profile: sys.class_profile(),
        permutation: sys.permutation.as_ref().map(|p| p.iter().map(|j| j + 1).collect()),
        coordinate_change: sys
            .coordinate_change
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect(),
        full_torsion_check: janet::full_torsion_check(&sys)?,
        degree_cap: opts.degree_cap,
        seed: opts.seed,
    });
    doc.timing = Timing::from_steps(&steps);
    Ok(doc)
}

// ---------------------------------------------------------------------------
// Gallery listing

#[derive(Debug, Clone, Serialize)]
pub struct GalleryListing {
    pub schema: &'static str,
    pub entries: Vec<GalleryInfo>,
    pub expectations: Vec<ExpectationRow>,
}

pub fn cmd_list_gallery(filter: Option<&str>) -> GalleryListing {
    let matches = |r: &ExpectationRow| match filter {
        None => true,
        Some(f) => r.verdict == Some(f) || r.name == f,
    };
    let expectations: Vec<ExpectationRow> = gallery::EXPECTATIONS.iter().filter(|r| matches(r)).cloned().collect();
    let entries = gallery::ENTRIES
        .iter()
        .filter(|e| filter.is_none() || expectations.iter().any(|r| r.name == e.name))
        .cloned()
        .collect();
    GalleryListing {
        schema: GALLERY_SCHEMA,
        entries,
        expectations,
    }
}

impl GalleryListing {
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("listing serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let n = if e.n_min == e.n_max {
                format!("n = {}", e.n_min)
            } else {
                format!("n = {}..{} (default {})", e.n_min, e.n_max, e.default_n)
            };
            let params = if e.params.is_empty() {
                String::new()
            } else {
                format!(", params: {}", e.params.join(", "))
            };
            s.push_str(&format!("{:<17} {n}{params}\n  {}\n", e.name, e.description));
        }
        if !self.entries.is_empty() {
            s.push('\n');
        }
        s.push_str("expected results:\n");
        for r in &self.expectations {
            s.push_str(&format!(
                "  {:<17} {:<16} {:<13} {}\n",
                r.name,
                r.condition,
                r.verdict.unwrap_or("-"),
                r.note
            ));
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Entry point

/// Outcome of a parsed command line: text to print and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

/// Runs a parsed command line without touching the process state.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let o = &cli.options;
    let ord = MonomialOrder::new(o.order);
    let emit = |doc: &ReportDocument| if o.json { doc.to_json() + "\n" } else { doc.to_text() };
    let (doc, status) = match &cli.command {
        Command::Gallery { filter } => {
            let listing = cmd_list_gallery(filter.as_deref());
            let stdout = if o.json { listing.to_json() + "\n" } else { listing.to_text() };
            return Ok(Outcome { stdout, status: 0 });
        }
        Command::Test { source } => {
            let doc = cmd_test(&load_system(source, o)?, &ord)?;
            let status = if doc.verdict.as_ref().is_some_and(|v| v.torsion_free) { 0 } else { 2 };
            (doc, status)
        }
        Command::Adjoint { source } => (cmd_adjoint(&load_system(source, o)?, &ord)?, 0),
        Command::Cc { source } => (cmd_cc(&load_system(source, o)?, &ord)?, 0),
        Command::Parametrize { source } => (cmd_parametrize(&load_system(source, o)?, &ord)?, 0),
        Command::Involution { source, spencer } => {
            let opts = CompletionOptions {
                degree_cap: o
                    .degree_cap
                    .or_else(janet::degree_cap_from_env)
                    .unwrap_or(DEFAULT_DEGREE_CAP),
                seed: o.seed,
            };
            (cmd_involution(&load_system(source, o)?, &ord, &opts, *spencer)?, 0)
        }
    };
    Ok(Outcome {
        stdout: emit(&doc),
        status,
    })
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.status)
        }
        Err(e) => {
            if cli.options.json {
                let v = serde_json::json!({
                    "schema": REPORT_SCHEMA,
                    "error": { "code": e.code, "message": e.message },
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("value serializes"));
            }
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
