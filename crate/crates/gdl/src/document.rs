//! Problem and result documents.
//!
//! Complex numbers are `[re, im]` pairs. Window data is nested as `data[k][j][t]` with `t` the
//! lexicographic index of the group element.

use gdl_core::gabor_engine::WindowFamily;
use gdl_core::group_core::{GroupSpec, Subgroup};
use gdl_core::phase_space::PhaseSpace;
use gdl_core::{Complex64, Signal};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub orders: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    /// Phase-space points `(x_1..x_k, ω_1..ω_k)`.
    pub generators: Vec<Vec<i64>>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowsDoc {
    pub d: usize,
    pub n: usize,
    pub data: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub group: GroupDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<WindowsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub task_params: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub task: String,
    pub outputs: Value,
    pub tool_version: String,
    pub seed: u64,
    pub wall_time_ms: f64,
}

pub fn parse_problem(text: &str) -> Result<ProblemDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("problem document: {e}")))
}

pub fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn from_pairs(v: &[[f64; 2]], what: &str) -> Result<Signal, CliError> {
    if v.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Invalid(format!("{what} contains a non-finite number")));
    }
    Ok(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

impl WindowsDoc {
    pub fn from_family(w: &WindowFamily) -> Self {
        let data = (0..w.d())
            .map(|k| (0..w.n()).map(|j| to_pairs(w.window(k, j))).collect())
            .collect();
        WindowsDoc { d: w.d(), n: w.n(), data }
    }

    pub fn to_family(&self, group: &GroupSpec) -> Result<WindowFamily, CliError> {
        let size = group.order();
        if self.d == 0 || self.n == 0 {
            return Err(CliError::Invalid("windows need d >= 1 and n >= 1".into()));
        }
        if self.data.len() != self.d || self.data.iter().any(|row| row.len() != self.n) {
            return Err(CliError::Invalid(format!("window data must be nested as [{}][{}][{size}]", self.d, self.n)));
        }
        let mut flat = Vec::with_capacity(self.d * self.n * size);
        for (k, row) in self.data.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                if w.len() != size {
                    return Err(CliError::Invalid(format!("window ({k},{j}) has {} samples, expected {size}", w.len())));
                }
                flat.extend(from_pairs(w, "window data")?);
            }
        }
        Ok(WindowFamily::new(group.clone(), self.d, self.n, flat)?)
    }
}

impl ProblemDocument {
    pub fn space(&self) -> Result<PhaseSpace, CliError> {
        Ok(PhaseSpace::new(GroupSpec::new(&self.group.orders)?))
    }

    pub fn lattice(&self, space: &PhaseSpace) -> Result<Subgroup, CliError> {
        let doc = self.lattice.as_ref().ok_or_else(|| CliError::Invalid("this command needs a lattice".into()))?;
        if !(doc.weight.is_finite() && doc.weight > 0.0) {
            return Err(CliError::Invalid(format!("lattice weight must be positive, got {}", doc.weight)));
        }
        let rank = space.group().rank();
        if let Some(bad) = doc.generators.iter().find(|g| g.len() != 2 * rank) {
            return Err(CliError::Invalid(format!("generator {bad:?} needs {} coordinates", 2 * rank)));
        }
        let gens: Vec<&[i64]> = doc.generators.iter().map(Vec::as_slice).collect();
        Ok(space.subgroup(&gens, doc.weight)?)
    }

    pub fn windows(&self, space: &PhaseSpace) -> Result<WindowFamily, CliError> {
        self.windows
            .as_ref()
            .ok_or_else(|| CliError::Invalid("this command needs windows".into()))?
            .to_family(space.group())
    }
}

pub fn subgroup_doc(space: &PhaseSpace, sub: &Subgroup) -> Value {
    let phase = space.phase();
    let elements: Vec<Vec<u64>> = sub.indices().iter().map(|&i| phase.coords_of(i).collect()).collect();
    serde_json::json!({
        "elements": elements,
        "size": sub.len(),
        "weight": sub.weight(),
    })
}
