//! Config document parsing and flag/document merging.
//!
//! A run is described by one JSON document holding the model and optional
//! defaults for command options; command-line flags override document fields.
//! Invalid configs abort before any output file is created.

use std::path::Path;

use serde::{Deserialize, Serialize};
use turnover::{CompetitionModel, Error, StateVector, SuppressionKernel};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub k: usize,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub kernel: SuppressionKernel,
    /// Interpret `b`, `d` as continuous-time rates (waives `d_i ≤ 1`).
    #[serde(default)]
    pub continuous: bool,

    // Optional defaults for command options; flags take precedence.
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub transient: Option<usize>,
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
    #[serde(default)]
    pub n: Option<usize>,
}

impl ConfigDoc {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let doc: ConfigDoc = serde_json::from_str(&text)
            .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?;
        if doc.b.len() != doc.k || doc.d.len() != doc.k {
            return Err(format!(
                "config k = {} does not match vector lengths b: {}, d: {}",
                doc.k,
                doc.b.len(),
                doc.d.len()
            ));
        }
        Ok(doc)
    }

    pub fn model(&self) -> Result<CompetitionModel, Error> {
        if self.continuous {
            CompetitionModel::new_continuous(self.b.clone(), self.d.clone(), self.kernel.clone())
        } else {
            CompetitionModel::new(self.b.clone(), self.d.clone(), self.kernel.clone())
        }
    }

    /// Initial state: flag over document over error.
    pub fn initial_state(&self, flag: &Option<Vec<f64>>) -> Result<StateVector, String> {
        let raw = flag
            .clone()
            .or_else(|| self.x0.clone())
            .ok_or("no initial state: pass --x0 or set \"x0\" in the config")?;
        if raw.len() != self.k {
            return Err(format!(
                "x0 has {} components, model has {}",
                raw.len(),
                self.k
            ));
        }
        StateVector::new(raw).map_err(|e| e.to_string())
    }
}

/// The fully resolved inputs echoed under the `config` key of every JSON
/// artifact: the model plus the options the command actually used.
#[derive(Debug, Serialize)]
pub struct Resolved<'a, Opt: Serialize> {
    pub k: usize,
    pub b: &'a [f64],
    pub d: &'a [f64],
    pub kernel: &'a SuppressionKernel,
    pub continuous: bool,
    #[serde(flatten)]
    pub options: Opt,
}

impl<'a, Opt: Serialize> Resolved<'a, Opt> {
    pub fn new(doc: &'a ConfigDoc, options: Opt) -> Self {
        Self {
            k: doc.k,
            b: &doc.b,
            d: &doc.d,
            kernel: &doc.kernel,
            continuous: doc.continuous,
            options,
        }
    }
}
