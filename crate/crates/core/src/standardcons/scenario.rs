//! Scenario files: an ambient algebra with summands of `T`, or a small
//! hand-built category for the Heller check, plus expectations and budgets.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{angulation_oracle, ClusterTiltingData};
use crate::algcore::{build_algebra, parse_presentation, BasedAlgebra, Module, ModuleSpec};
use crate::angulation::heller::{dual_numbers, theta_candidates};
use crate::angulation::{AngleClassOracle, BasedCategory, Faults, FunctorCategory, VerifyBudget};
use crate::error::{Error, Result};
use crate::frobstab::Frobenius;

fn default_reps_cap() -> usize {
    64
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Expected {
    pub suspension_order: Option<usize>,
    pub cy_dimension: Option<usize>,
    pub valid_thetas: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StandardScenario {
    pub name: String,
    /// Presentation file, relative to the scenario file.
    pub algebra: String,
    /// Overrides the field of the presentation.
    #[serde(default)]
    pub field: Option<u32>,
    pub n: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub summands: Vec<ModuleSpec>,
    #[serde(default)]
    pub maximality_witnesses: Vec<ModuleSpec>,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default)]
    pub budget: VerifyBudget,
    #[serde(default = "default_reps_cap")]
    pub reps_cap: usize,
    #[serde(default)]
    pub faults: Faults,
}

/// `proj k[x]/x^2` with `Sigma(x) = twist * x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HellerScenario {
    pub name: String,
    pub field: u32,
    pub twist: i64,
    pub n: usize,
    pub max_rank: usize,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default)]
    pub budget: VerifyBudget,
    #[serde(default = "default_reps_cap")]
    pub reps_cap: usize,
    #[serde(default)]
    pub faults: Faults,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioFile {
    Standard(StandardScenario),
    Heller(HellerScenario),
}

pub enum Scenario {
    Standard {
        spec: StandardScenario,
        ctd: Arc<ClusterTiltingData>,
        witnesses: Vec<Module>,
    },
    Heller {
        spec: HellerScenario,
        cat: Arc<BasedCategory>,
    },
}

/// Reads a presentation, replacing its field when `field` is given.
pub fn load_algebra(path: &Path, field: Option<u32>) -> Result<Arc<BasedAlgebra>> {
    let text = std::fs::read_to_string(path)?;
    let text = match field {
        None => text,
        Some(p) => {
            let mut v: serde_json::Value = serde_json::from_str(&text)?;
            v["field"] = p.into();
            v.to_string()
        }
    };
    Ok(Arc::new(build_algebra(&parse_presentation(&text)?)?))
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    match file {
        ScenarioFile::Standard(spec) => {
            if spec.n < 3 {
                return Err(Error::Scenario("n must be at least 3".into()));
            }
            let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
            let alg = load_algebra(&base.join(&spec.algebra), spec.field)?;
            let frob = Arc::new(Frobenius::new(alg.clone())?);
            let summands = spec
                .summands
                .iter()
                .map(|s| Module::from_spec(alg.clone(), s))
                .collect::<Result<Vec<_>>>()?;
            let labels = if spec.labels.is_empty() {
                (0..summands.len()).map(|i| format!("T{i}")).collect()
            } else {
                spec.labels.clone()
            };
            let witnesses = spec
                .maximality_witnesses
                .iter()
                .map(|s| Module::from_spec(alg.clone(), s))
                .collect::<Result<Vec<_>>>()?;
            let ctd = ClusterTiltingData::new(frob, summands, labels, spec.n - 2)?;
            Ok(Scenario::Standard {
                spec,
                ctd: Arc::new(ctd),
                witnesses,
            })
        }
        ScenarioFile::Heller(spec) => {
            crate::exactla::PrimeField::new(spec.field)?;
            let cat = Arc::new(dual_numbers(spec.field, spec.twist));
            Ok(Scenario::Heller { spec, cat })
        }
    }
}

impl Scenario {
    pub fn name(&self) -> &str {
        match self {
            Scenario::Standard { spec, .. } => &spec.name,
            Scenario::Heller { spec, .. } => &spec.name,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Scenario::Standard { spec, .. } => spec.n,
            Scenario::Heller { spec, .. } => spec.n,
        }
    }

    pub fn expected(&self) -> &Expected {
        match self {
            Scenario::Standard { spec, .. } => &spec.expected,
            Scenario::Heller { spec, .. } => &spec.expected,
        }
    }

    pub fn budget(&self) -> &VerifyBudget {
        match self {
            Scenario::Standard { spec, .. } => &spec.budget,
            Scenario::Heller { spec, .. } => &spec.budget,
        }
    }

    pub fn faults(&self) -> &Faults {
        match self {
            Scenario::Standard { spec, .. } => &spec.faults,
            Scenario::Heller { spec, .. } => &spec.faults,
        }
    }

    pub fn reps_cap(&self) -> usize {
        match self {
            Scenario::Standard { spec, .. } => spec.reps_cap,
            Scenario::Heller { spec, .. } => spec.reps_cap,
        }
    }

    pub fn category(&self) -> Result<Arc<BasedCategory>> {
        match self {
            Scenario::Standard { ctd, .. } => ctd.category(),
            Scenario::Heller { cat, .. } => Ok(cat.clone()),
        }
    }

    /// The standard oracle, or for a Heller scenario the class of the
    /// first valid `Theta`.
    pub fn oracle(&self) -> Result<AngleClassOracle> {
        match self {
            Scenario::Standard { ctd, spec, .. } => Ok(angulation_oracle(ctd.clone(), spec.reps_cap)?.oracle),
            Scenario::Heller { spec, cat } => {
                let fc = Arc::new(FunctorCategory::new(cat.clone())?);
                let (reps, _) = fc.frob.nonprojective_closure(spec.reps_cap)?;
                let theta = theta_candidates(&fc, &reps, spec.n)
                    .into_iter()
                    .find(|t| t.validate(&fc).is_ok())
                    .ok_or_else(|| Error::InvalidTheta("no valid family for this suspension".into()))?;
                Ok(AngleClassOracle::theta_class(fc, theta))
            }
        }
    }
}
