//! Serializable reports and their JSON/CSV renderings. Rationals are
//! written as `num/den`, probabilities rounded to 12 significant digits.

use serde::Serialize;
use turanlab_core::covering::{CoveringType, Resolution};
use turanlab_core::extremal::{ExtremalResult, PiSequence, Witness};
use turanlab_core::probability::{JansonReport, PsiReport};
use turanlab_core::sim::{Concentration, ScanRow};
use turanlab_core::{Graph, Rational, SubgraphCopy};

use crate::exec::LowerTailCheck;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// `x` rounded to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap()
    } else {
        x
    }
}

fn rat(r: Rational) -> String {
    r.to_string()
}

fn copy_edges(c: &SubgraphCopy) -> Vec<[usize; 2]> {
    c.edges().iter().map(|&(u, v)| [u, v]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityOut {
    pub m2: String,
    pub two_balanced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringOut {
    pub universe_size: usize,
    pub copies: Vec<Vec<[usize; 2]>>,
    pub target: String,
    pub union: String,
    /// `num/den`, `inf`, or null for a single copy.
    pub density: Option<String>,
    pub minimal: bool,
    pub special: bool,
}

impl From<&CoveringType> for CoveringOut {
    fn from(ty: &CoveringType) -> Self {
        let c = &ty.representative;
        CoveringOut {
            universe_size: c.universe_size(),
            copies: c.copies().iter().map(copy_edges).collect(),
            target: c.target().to_graph6(),
            union: c.union_graph().to_graph6(),
            density: ty.density().map(|d| d.to_string()),
            minimal: ty.minimal,
            special: ty.special,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionEntryOut {
    #[serde(flatten)]
    pub covering: CoveringOut,
    pub threshold_exponent: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionOut {
    pub base_exponent: String,
    pub fe_index: usize,
    pub types: Vec<ResolutionEntryOut>,
}

impl From<&Resolution> for ResolutionOut {
    fn from(r: &Resolution) -> Self {
        ResolutionOut {
            base_exponent: rat(r.base_exponent),
            fe_index: r.fe_index,
            types: r
                .types
                .iter()
                .zip(&r.threshold_exponents)
                .map(|(ty, &e)| ResolutionEntryOut { covering: ty.into(), threshold_exponent: rat(e) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalOut {
    pub n: usize,
    pub value: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_graph6: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_copies: Option<Vec<Vec<[usize; 2]>>>,
    pub nodes: u64,
    pub millis: Option<u64>,
}

impl From<&ExtremalResult> for ExtremalOut {
    fn from(r: &ExtremalResult) -> Self {
        let (witness_graph6, witness_copies) = match &r.witness {
            Witness::Graph(g) => (Some(g.to_graph6()), None),
            Witness::Copies(cs) => (None, Some(cs.iter().map(copy_edges).collect())),
        };
        ExtremalOut {
            n: r.n,
            value: r.value,
            witness_graph6,
            witness_copies,
            nodes: r.nodes_explored,
            millis: r.elapsed.map(|d| d.as_millis() as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiEntryOut {
    pub index: usize,
    pub mu: String,
    pub pi_numerator: u64,
    pub pi_value_at_n: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiSequenceOut {
    pub n: usize,
    pub entries: Vec<PiEntryOut>,
    pub nodes: u64,
}

impl From<&PiSequence> for PiSequenceOut {
    fn from(s: &PiSequence) -> Self {
        PiSequenceOut {
            n: s.n,
            entries: s
                .entries
                .iter()
                .map(|e| PiEntryOut {
                    index: e.index,
                    mu: rat(e.mu),
                    pi_numerator: e.pi_numerator,
                    pi_value_at_n: rat(e.pi_value_at_n),
                })
                .collect(),
            nodes: s.nodes_explored,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiOut {
    pub n: usize,
    pub p: f64,
    pub value: f64,
    pub witness: String,
    pub witness_edges: usize,
}

impl PsiOut {
    pub fn new(n: usize, p: f64, r: &PsiReport) -> Self {
        PsiOut { n, p: sig12(p), value: r.value, witness: r.witness.to_graph6(), witness_edges: r.witness.edge_count() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JansonOut {
    pub mu: f64,
    pub delta: f64,
    pub t: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOut {
    pub trials: usize,
    pub frequency: f64,
    pub sigma: f64,
    /// `frequency <= bound + 3 sigma`.
    pub within: bool,
}

impl JansonOut {
    pub fn new(r: &JansonReport, check: Option<&LowerTailCheck>) -> Self {
        JansonOut {
            mu: r.mu,
            delta: r.delta,
            t: r.t,
            bound: r.bound,
            check: check.map(|c| CheckOut {
                trials: c.trials,
                frequency: c.frequency,
                sigma: c.sigma,
                within: c.frequency <= r.bound + 3.0 * c.sigma,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationOut {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub expectation: f64,
    pub ratio: Option<f64>,
}

impl ConcentrationOut {
    pub fn new(n: usize, p: f64, c: &Concentration) -> Self {
        ConcentrationOut {
            n,
            p: sig12(p),
            trials: c.trials,
            mean: c.mean,
            std: c.std,
            expectation: c.expectation,
            ratio: c.ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreOut {
    pub n: usize,
    pub input_edges: usize,
    pub core: String,
    pub core_edges: usize,
    pub t_copies: usize,
}

impl CoreOut {
    pub fn new(input: &Graph, core: &Graph, t_copies: usize) -> Self {
        CoreOut {
            n: input.vertex_count(),
            input_edges: input.edge_count(),
            core: core.to_graph6(),
            core_edges: core.edge_count(),
            t_copies,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRowOut {
    pub exponent: String,
    pub p: f64,
    pub trials: usize,
    pub mean_ex: f64,
    pub std_ex: f64,
    pub normalized_pi: f64,
    #[serde(rename = "mean_NT")]
    pub mean_nt: f64,
    pub threshold_markers: Vec<String>,
    pub bound_only: bool,
}

impl From<&ScanRow> for ScanRowOut {
    fn from(r: &ScanRow) -> Self {
        ScanRowOut {
            exponent: rat(r.exponent),
            p: sig12(r.p),
            trials: r.trials,
            mean_ex: r.mean_ex,
            std_ex: r.std_ex,
            normalized_pi: r.normalized_pi,
            mean_nt: r.mean_nt,
            threshold_markers: r.threshold_markers.iter().map(|&m| rat(m)).collect(),
            bound_only: r.bound_only,
        }
    }
}

pub const SCAN_HEADER: [&str; 8] =
    ["exponent", "p", "trials", "mean_ex", "std_ex", "normalized_pi", "mean_NT", "threshold_markers"];

/// A command's result, ready to render.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Density(DensityOut),
    Resolution(ResolutionOut),
    Coverings(Vec<CoveringOut>),
    Extremal(ExtremalOut),
    PiSequence(PiSequenceOut),
    Psi(PsiOut),
    Janson(JansonOut),
    Scan(Vec<ScanRowOut>),
    Concentration(ConcentrationOut),
    Core(CoreOut),
}

#[derive(Debug, thiserror::Error)]
#[error("csv output is only available for scan and pi-seq")]
pub struct NoCsv;

impl Report {
    /// The format used when none is requested.
    pub fn default_format(&self) -> Format {
        match self {
            Report::Scan(_) => Format::Csv,
            _ => Format::Json,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, NoCsv> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv().ok_or(NoCsv),
        }
    }

    /// Compact JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = match self {
            Report::Density(r) => serde_json::to_string(r),
            Report::Resolution(r) => serde_json::to_string(r),
            Report::Coverings(r) => serde_json::to_string(r),
            Report::Extremal(r) => serde_json::to_string(r),
            Report::PiSequence(r) => serde_json::to_string(r),
            Report::Psi(r) => serde_json::to_string(r),
            Report::Janson(r) => serde_json::to_string(r),
            Report::Scan(r) => serde_json::to_string(r),
            Report::Concentration(r) => serde_json::to_string(r),
            Report::Core(r) => serde_json::to_string(r),
        }
        .expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Option<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self {
            Report::Scan(rows) => {
                w.write_record(SCAN_HEADER).ok()?;
                for r in rows {
                    let mut markers = r.threshold_markers.join(";");
                    if r.bound_only {
                        markers.push_str(if markers.is_empty() { "bound-only" } else { ";bound-only" });
                    }
                    w.write_record([
                        r.exponent.clone(),
                        r.p.to_string(),
                        r.trials.to_string(),
                        r.mean_ex.to_string(),
                        r.std_ex.to_string(),
                        r.normalized_pi.to_string(),
                        r.mean_nt.to_string(),
                        markers,
                    ])
                    .ok()?;
                }
            }
            Report::PiSequence(s) => {
                w.write_record(["index", "mu", "pi_numerator", "pi_value_at_n"]).ok()?;
                for e in &s.entries {
                    w.write_record([e.index.to_string(), e.mu.clone(), e.pi_numerator.to_string(), e.pi_value_at_n.clone()])
                        .ok()?;
                }
            }
            _ => return None,
        }
        String::from_utf8(w.into_inner().ok()?).ok()
    }
}
