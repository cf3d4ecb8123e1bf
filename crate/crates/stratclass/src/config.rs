//! File-backed scenario configuration. The schema is strict: unknown keys
//! are rejected and configs round-trip losslessly through serialization.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::cost::{CostFunction, LinearCostVector};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::population::{Group1D, GroupND, Scenario1D, ScenarioND, TrueRule1D, TrueRuleND};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistConfig {
    Uniform,
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl DistConfig {
    fn build(&self) -> Result<Distribution> {
        match self {
            DistConfig::Uniform => Ok(Distribution::Uniform01),
            DistConfig::PiecewiseLinear { knots } => Distribution::piecewise_linear(knots.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostConfig {
    Linear {
        slope: f64,
    },
    SqrtLinear {
        sqrt: f64,
        #[serde(default)]
        lin: f64,
    },
    PowerSum {
        terms: Vec<(f64, f64)>,
    },
    Tabulated {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    /// d-dimensional per-component linear costs.
    LinearVector {
        coeffs: Vec<f64>,
    },
}

impl CostConfig {
    fn build_1d(&self) -> Result<CostFunction> {
        match self {
            CostConfig::Linear { slope } => CostFunction::linear(*slope),
            CostConfig::SqrtLinear { sqrt, lin } => CostFunction::sqrt_linear(*sqrt, *lin),
            CostConfig::PowerSum { terms } => CostFunction::power_sum(terms.clone()),
            CostConfig::Tabulated { xs, ys } => CostFunction::tabulated(xs.clone(), ys.clone()),
            CostConfig::LinearVector { .. } => Err(Error::config(
                "linear_vector costs need a multi-dimensional group (weights + distributions)",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    /// 1-D feature distribution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistConfig>,
    /// Per-component marginals for d-D groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distributions: Option<Vec<DistConfig>>,
    pub cost: CostConfig,
    pub tau: f64,
    /// True-rule weights for d-D groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunOptions {
    /// Grid density of the 1-D equilibrium scan.
    pub grid: usize,
    /// Per-axis density of the joint subsidy optimization grid.
    pub joint_grid: usize,
    /// Monte Carlo samples per group for d-D evaluation.
    pub mc_samples: u64,
    pub seed: u64,
    /// Feature grid for per-candidate payoff deltas.
    pub delta_grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            grid: 2048,
            joint_grid: 512,
            mc_samples: 1_000_000,
            seed: 42,
            delta_grid: 10_001,
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub group_a: GroupConfig,
    pub group_b: GroupConfig,
    pub p_a: f64,
    pub c_fp: f64,
    pub c_fn: f64,
    pub lambda: f64,
    #[serde(default)]
    pub options: RunOptions,
}

/// A built scenario: one- or multi-dimensional.
#[derive(Debug, Clone)]
pub enum ScenarioKind {
    OneD(Scenario1D),
    MultiD(ScenarioND),
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Build and validate the scenario described by this config.
    pub fn build(&self) -> Result<ScenarioKind> {
        let a_nd = self.group_a.weights.is_some() || self.group_a.distributions.is_some();
        let b_nd = self.group_b.weights.is_some() || self.group_b.distributions.is_some();
        if a_nd != b_nd {
            return Err(Error::config(
                "groups must both be one-dimensional or both multi-dimensional",
            ));
        }
        if a_nd {
            let a = build_group_nd(&self.group_a)?;
            let b = build_group_nd(&self.group_b)?;
            let s = ScenarioND::new(a, b, self.p_a, self.c_fp, self.c_fn, self.lambda)
                .map_err(|e| Error::config(e.to_string()))?;
            Ok(ScenarioKind::MultiD(s))
        } else {
            let a = build_group_1d(&self.group_a)?;
            let b = build_group_1d(&self.group_b)?;
            let s = Scenario1D::new(a, b, self.p_a, self.c_fp, self.c_fn, self.lambda)
                .map_err(|e| Error::config(e.to_string()))?;
            Ok(ScenarioKind::OneD(s))
        }
    }

    /// Convenience for call sites that only handle the 1-D game.
    pub fn build_1d(&self) -> Result<Scenario1D> {
        match self.build()? {
            ScenarioKind::OneD(s) => Ok(s),
            ScenarioKind::MultiD(_) => Err(Error::config(
                "this command requires a one-dimensional scenario",
            )),
        }
    }
}

fn build_group_1d(g: &GroupConfig) -> Result<Group1D> {
    if g.weights.is_some() || g.distributions.is_some() {
        return Err(Error::config(
            "1-D group must not set weights/distributions",
        ));
    }
    let distribution = g
        .distribution
        .as_ref()
        .ok_or_else(|| Error::config("1-D group needs a distribution"))?
        .build()?;
    let cost = g
        .cost
        .build_1d()
        .map_err(|e| Error::config(e.to_string()))?;
    let rule = TrueRule1D::new(g.tau).map_err(|e| Error::config(e.to_string()))?;
    Ok(Group1D {
        distribution,
        cost,
        rule,
    })
}

fn build_group_nd(g: &GroupConfig) -> Result<GroupND> {
    if g.distribution.is_some() {
        return Err(Error::config(
            "multi-dimensional group must use `distributions`, not `distribution`",
        ));
    }
    let weights = g
        .weights
        .clone()
        .ok_or_else(|| Error::config("multi-dimensional group needs weights"))?;
    let dists = g.distributions.as_ref().ok_or_else(|| {
        Error::config("multi-dimensional group needs per-component distributions")
    })?;
    let marginals: Vec<Distribution> = dists
        .iter()
        .map(|d| d.build())
        .collect::<Result<Vec<_>>>()?;
    let coeffs = match &g.cost {
        CostConfig::LinearVector { coeffs } => coeffs.clone(),
        _ => {
            return Err(Error::config(
                "multi-dimensional group needs a linear_vector cost",
            ))
        }
    };
    let costs = LinearCostVector::new(coeffs).map_err(|e| Error::config(e.to_string()))?;
    let rule = TrueRuleND::new(weights, g.tau).map_err(|e| Error::config(e.to_string()))?;
    if marginals.len() != costs.dim() || rule.dim() != costs.dim() {
        return Err(Error::config("group component counts disagree"));
    }
    Ok(GroupND {
        marginals,
        costs,
        rule,
    })
}
