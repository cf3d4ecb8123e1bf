//! Groups, true labeling rules, and validated two-group scenarios.

use serde::{Deserialize, Serialize};

use crate::cost::{check_cost_condition, CostFunction, LinearCostVector};
use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Which of the two populations a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupId {
    A,
    B,
}

/// 1-D true labeling rule: label 1 iff `x >= tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueRule1D {
    pub tau: f64,
}

impl TrueRule1D {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && (0.0..=1.0).contains(&tau)) {
            return Err(Error::validation(format!("tau {tau} outside [0, 1]")));
        }
        Ok(Self { tau })
    }

    pub fn label(&self, x: f64) -> bool {
        x >= self.tau
    }
}

/// d-D true labeling rule: label 1 iff `w . x >= tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueRuleND {
    pub weights: Vec<f64>,
    pub tau: f64,
}

impl TrueRuleND {
    pub fn new(weights: Vec<f64>, tau: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::validation("true rule needs at least one weight"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::validation(
                "true rule weights must be finite and >= 0",
            ));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::validation("true rule needs a positive weight"));
        }
        if !tau.is_finite() {
            return Err(Error::validation("true rule threshold must be finite"));
        }
        Ok(Self { weights, tau })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum()
    }

    pub fn label(&self, x: &[f64]) -> bool {
        self.score(x) >= self.tau
    }
}

/// A 1-D population group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group1D {
    pub distribution: Distribution,
    pub cost: CostFunction,
    pub rule: TrueRule1D,
}

/// A d-D population group with independent per-component marginals and
/// linear costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupND {
    pub marginals: Vec<Distribution>,
    pub costs: LinearCostVector,
    pub rule: TrueRuleND,
}

impl GroupND {
    pub fn dim(&self) -> usize {
        self.costs.dim()
    }
}

/// Outcome of scenario validation; failures carry human-readable reasons.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub reasons: Vec<String>,
}

impl ValidationReport {
    fn ok() -> Self {
        Self {
            passed: true,
            reasons: Vec::new(),
        }
    }

    fn push(&mut self, reason: String) {
        self.passed = false;
        self.reasons.push(reason);
    }
}

fn check_shared(
    p_a: f64,
    p_b: f64,
    c_fp: f64,
    c_fn: f64,
    lambda: f64,
    report: &mut ValidationReport,
) {
    if (p_a + p_b - 1.0).abs() > 1e-12 || p_a < 0.0 || p_b < 0.0 {
        report.push(format!(
            "proportions p_a = {p_a}, p_b = {p_b} must be >= 0 and sum to 1"
        ));
    }
    if !(c_fp.is_finite() && c_fp >= 0.0) || !(c_fn.is_finite() && c_fn >= 0.0) {
        report.push(format!(
            "penalties c_fp = {c_fp}, c_fn = {c_fn} must be >= 0"
        ));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        report.push(format!("subsidy weight lambda = {lambda} must be >= 0"));
    }
}

/// A validated 1-D two-group scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario1D {
    group_a: Group1D,
    group_b: Group1D,
    p_a: f64,
    p_b: f64,
    c_fp: f64,
    c_fn: f64,
    lambda: f64,
}

impl Scenario1D {
    /// Construction is gated on [`validate_scenario_1d`]: every scenario that
    /// reaches the solvers satisfies the standing assumptions.
    pub fn new(
        group_a: Group1D,
        group_b: Group1D,
        p_a: f64,
        c_fp: f64,
        c_fn: f64,
        lambda: f64,
    ) -> Result<Self> {
        let p_b = 1.0 - p_a;
        let report = validate_scenario_1d(&group_a, &group_b, p_a, p_b, c_fp, c_fn, lambda);
        if !report.passed {
            return Err(Error::validation(report.reasons.join("; ")));
        }
        Ok(Self {
            group_a,
            group_b,
            p_a,
            p_b,
            c_fp,
            c_fn,
            lambda,
        })
    }

    pub fn group(&self, id: GroupId) -> &Group1D {
        match id {
            GroupId::A => &self.group_a,
            GroupId::B => &self.group_b,
        }
    }

    pub fn proportion(&self, id: GroupId) -> f64 {
        match id {
            GroupId::A => self.p_a,
            GroupId::B => self.p_b,
        }
    }

    pub fn c_fp(&self) -> f64 {
        self.c_fp
    }

    pub fn c_fn(&self) -> f64 {
        self.c_fn
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Check proportions, penalties, the cost condition and threshold containment.
pub fn validate_scenario_1d(
    group_a: &Group1D,
    group_b: &Group1D,
    p_a: f64,
    p_b: f64,
    c_fp: f64,
    c_fn: f64,
    lambda: f64,
) -> ValidationReport {
    let mut report = ValidationReport::ok();
    check_shared(p_a, p_b, c_fp, c_fn, lambda, &mut report);
    if group_b.rule.tau > group_a.rule.tau + 1e-12 {
        report.push(format!(
            "containment violated: tau_b = {} > tau_a = {}",
            group_b.rule.tau, group_a.rule.tau
        ));
    }
    let cc = check_cost_condition(&group_a.cost, &group_b.cost, 512);
    if !cc.passed {
        report.push(format!(
            "cost condition violated: worst margin {:.3e} over {} pairs",
            cc.worst_margin, cc.checked_pairs
        ));
    }
    report
}

/// A validated d-D two-group scenario over product marginals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioND {
    group_a: GroupND,
    group_b: GroupND,
    p_a: f64,
    p_b: f64,
    c_fp: f64,
    c_fn: f64,
    lambda: f64,
}

impl ScenarioND {
    pub fn new(
        group_a: GroupND,
        group_b: GroupND,
        p_a: f64,
        c_fp: f64,
        c_fn: f64,
        lambda: f64,
    ) -> Result<Self> {
        let p_b = 1.0 - p_a;
        let report = validate_scenario_nd(&group_a, &group_b, p_a, p_b, c_fp, c_fn, lambda);
        if !report.passed {
            return Err(Error::validation(report.reasons.join("; ")));
        }
        Ok(Self {
            group_a,
            group_b,
            p_a,
            p_b,
            c_fp,
            c_fn,
            lambda,
        })
    }

    pub fn group(&self, id: GroupId) -> &GroupND {
        match id {
            GroupId::A => &self.group_a,
            GroupId::B => &self.group_b,
        }
    }

    pub fn proportion(&self, id: GroupId) -> f64 {
        match id {
            GroupId::A => self.p_a,
            GroupId::B => self.p_b,
        }
    }

    pub fn c_fp(&self) -> f64 {
        self.c_fp
    }

    pub fn c_fn(&self) -> f64 {
        self.c_fn
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.group_a.dim()
    }
}

/// d-D validation: dimensions agree, per-component cost ordering holds, and
/// label containment `h_a(x) = 1 => h_b(x) = 1` is checked on a lattice.
pub fn validate_scenario_nd(
    group_a: &GroupND,
    group_b: &GroupND,
    p_a: f64,
    p_b: f64,
    c_fp: f64,
    c_fn: f64,
    lambda: f64,
) -> ValidationReport {
    let mut report = ValidationReport::ok();
    check_shared(p_a, p_b, c_fp, c_fn, lambda, &mut report);
    let d = group_a.costs.dim();
    if group_b.costs.dim() != d
        || group_a.rule.dim() != d
        || group_b.rule.dim() != d
        || group_a.marginals.len() != d
        || group_b.marginals.len() != d
    {
        report.push("group dimensions disagree".to_string());
        return report;
    }
    for i in 0..d {
        if group_a.costs.coeffs()[i] > group_b.costs.coeffs()[i] + 1e-12 {
            report.push(format!(
                "cost condition violated in component {i}: c_a = {} > c_b = {}",
                group_a.costs.coeffs()[i],
                group_b.costs.coeffs()[i]
            ));
        }
    }
    // Containment on a lattice: every grid point labeled 1 by A must be
    // labeled 1 by B.
    let per_axis = match d {
        1 => 257,
        2 => 33,
        3 => 11,
        _ => 5,
    };
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0f64; d];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            x[k] = i as f64 / (per_axis - 1) as f64;
        }
        if group_a.rule.label(&x) && !group_b.rule.label(&x) {
            report.push(format!("containment violated at grid point {x:?}"));
            break;
        }
        let mut k = 0;
        loop {
            if k == d {
                return report;
            }
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn uniform_group(cost: CostFunction, tau: f64) -> Group1D {
        Group1D {
            distribution: Distribution::uniform(),
            cost,
            rule: TrueRule1D::new(tau).unwrap(),
        }
    }

    fn example1_groups() -> (Group1D, Group1D) {
        (
            uniform_group(CostFunction::sqrt_linear(8.0, 1.0).unwrap(), 0.4),
            uniform_group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3),
        )
    }

    #[test]
    fn example1_scenario_validates() {
        let (a, b) = example1_groups();
        assert!(Scenario1D::new(a, b, 0.5, 1.0, 1.0, 0.75).is_ok());
    }

    #[test]
    fn containment_violation_fails() {
        let a = uniform_group(CostFunction::linear(3.0).unwrap(), 0.3);
        let b = uniform_group(CostFunction::linear(4.0).unwrap(), 0.5);
        let err = Scenario1D::new(a, b, 0.5, 1.0, 1.0, 0.75).unwrap_err();
        assert!(err.to_string().contains("containment"));
    }

    #[test]
    fn bad_proportions_fail() {
        let (a, b) = example1_groups();
        let report = validate_scenario_1d(&a, &b, 0.6, 0.6, 1.0, 1.0, 0.75);
        assert!(!report.passed);
        assert!(report.reasons.iter().any(|r| r.contains("proportions")));
    }

    #[test]
    fn reversed_costs_fail() {
        let a = uniform_group(CostFunction::linear(2.0).unwrap(), 0.4);
        let b = uniform_group(CostFunction::linear(1.0).unwrap(), 0.3);
        let err = Scenario1D::new(a, b, 0.5, 1.0, 1.0, 0.75).unwrap_err();
        assert!(err.to_string().contains("cost condition"));
    }

    #[test]
    fn nd_scenario_checks_dimensions_and_ordering() {
        let mk = |coeffs: Vec<f64>, weights: Vec<f64>, tau: f64| GroupND {
            marginals: vec![Distribution::uniform(); coeffs.len()],
            costs: LinearCostVector::new(coeffs).unwrap(),
            rule: TrueRuleND::new(weights, tau).unwrap(),
        };
        let a = mk(vec![1.0, 2.0], vec![1.0, 1.0], 0.8);
        let b = mk(vec![2.0, 3.0], vec![1.0, 1.0], 0.6);
        assert!(ScenarioND::new(a.clone(), b, 0.5, 1.0, 1.0, 0.0).is_ok());

        let b_bad = mk(vec![0.5, 3.0], vec![1.0, 1.0], 0.6);
        assert!(ScenarioND::new(a, b_bad, 0.5, 1.0, 1.0, 0.0).is_err());
    }
}
