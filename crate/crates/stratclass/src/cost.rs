//! Manipulation cost functions, subsidy plans and the inter-group cost
//! condition.
//!
//! A cost function is a strictly increasing, non-negative map on the feature
//! interval `[0, 1]`. Candidates moving from `x` to `y >= x` pay
//! `c(y) - c(x)`, possibly reduced by a subsidy. Strict monotonicity is
//! enforced at construction so inverses are single-valued.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect_increasing, linspace};

/// Slack accepted when checking that a value lies inside `[c(0), c(1)]`.
const RANGE_SLACK: f64 = 1e-9;

/// Parametric families of manipulation cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CostFamily {
    /// `c(x) = slope * x`
    Linear { slope: f64 },
    /// `c(x) = sqrt_coeff * sqrt(x) + lin_coeff * x`
    SqrtLinear { sqrt_coeff: f64, lin_coeff: f64 },
    /// `c(x) = sum_i coeff_i * x^exponent_i`
    PowerSum { terms: Vec<(f64, f64)> },
    /// Piecewise-linear interpolation through strictly increasing samples.
    TabulatedMonotone { xs: Vec<f64>, ys: Vec<f64> },
}

/// A validated manipulation cost function on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostFunction {
    family: CostFamily,
}

impl CostFunction {
    pub fn linear(slope: f64) -> Result<Self> {
        if !(slope.is_finite() && slope > 0.0) {
            return Err(Error::validation(format!(
                "linear cost needs slope > 0, got {slope}"
            )));
        }
        Ok(Self {
            family: CostFamily::Linear { slope },
        })
    }

    pub fn sqrt_linear(sqrt_coeff: f64, lin_coeff: f64) -> Result<Self> {
        if !(sqrt_coeff.is_finite()
            && lin_coeff.is_finite()
            && sqrt_coeff >= 0.0
            && lin_coeff >= 0.0)
        {
            return Err(Error::validation(
                "sqrt-linear cost needs non-negative finite coefficients",
            ));
        }
        if sqrt_coeff + lin_coeff <= 0.0 {
            return Err(Error::validation(
                "sqrt-linear cost must have a positive coefficient (flat cost rejected)",
            ));
        }
        Ok(Self {
            family: CostFamily::SqrtLinear {
                sqrt_coeff,
                lin_coeff,
            },
        })
    }

    pub fn power_sum(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::validation("power-sum cost needs at least one term"));
        }
        let mut positive = false;
        for &(coeff, exponent) in &terms {
            if !(coeff.is_finite() && exponent.is_finite()) || coeff < 0.0 || exponent <= 0.0 {
                return Err(Error::validation(format!(
                    "power-sum term ({coeff}, {exponent}) invalid: need coeff >= 0 and exponent > 0"
                )));
            }
            if coeff > 0.0 {
                positive = true;
            }
        }
        if !positive {
            return Err(Error::validation(
                "power-sum cost must have a strictly positive term (flat cost rejected)",
            ));
        }
        Ok(Self {
            family: CostFamily::PowerSum { terms },
        })
    }

    /// Tabulated samples `(xs[i], ys[i])` interpolated linearly. The grid must
    /// start at 0, end at 1, and be strictly increasing in both coordinates.
    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::validation(
                "tabulated cost needs matching xs/ys with at least two samples",
            ));
        }
        if (xs[0] - 0.0).abs() > 1e-12 || (xs[xs.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::validation("tabulated cost grid must span [0, 1]"));
        }
        // partial_cmp keeps NaN samples invalid as well.
        for w in xs.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::validation(
                    "tabulated cost xs must strictly increase",
                ));
            }
        }
        for w in ys.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::validation(
                    "tabulated cost ys must strictly increase (flat segments rejected)",
                ));
            }
        }
        if ys[0] < 0.0 || ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::validation(
                "tabulated cost values must be finite and >= 0",
            ));
        }
        Ok(Self {
            family: CostFamily::TabulatedMonotone { xs, ys },
        })
    }

    pub fn family(&self) -> &CostFamily {
        &self.family
    }

    /// Evaluate with a domain check; `x` must lie in `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && (-1e-12..=1.0 + 1e-12).contains(&x)) {
            return Err(Error::domain(format!("feature {x} outside [0, 1]")));
        }
        Ok(self.eval_clamped(x))
    }

    /// Evaluation with the argument clamped into `[0, 1]`. Used on hot paths
    /// where the caller already guarantees the domain up to roundoff.
    pub(crate) fn eval_clamped(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match &self.family {
            CostFamily::Linear { slope } => slope * x,
            CostFamily::SqrtLinear {
                sqrt_coeff,
                lin_coeff,
            } => sqrt_coeff * x.sqrt() + lin_coeff * x,
            CostFamily::PowerSum { terms } => {
                terms.iter().map(|&(c, p)| c * x.powf(p)).sum::<f64>()
            }
            CostFamily::TabulatedMonotone { xs, ys } => {
                let idx = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                    Ok(i) => return ys[i],
                    Err(i) => i,
                };
                let (x0, x1) = (xs[idx - 1], xs[idx]);
                let (y0, y1) = (ys[idx - 1], ys[idx]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Cost at the left edge of the domain.
    pub fn at_zero(&self) -> f64 {
        self.eval_clamped(0.0)
    }

    /// Cost at the right edge of the domain.
    pub fn at_one(&self) -> f64 {
        self.eval_clamped(1.0)
    }

    /// Invert by bisection: returns `x` with `|c(x) - v| <= 1e-9`.
    ///
    /// All families go through the same bisection so analytic and tabulated
    /// costs behave identically. `v` must lie in `[c(0), c(1)]`.
    pub fn invert(&self, v: f64) -> Result<f64> {
        bisect_increasing(|x| self.eval_clamped(x), 0.0, 1.0, v, RANGE_SLACK)
    }

    /// Like [`invert`](Self::invert) but saturating: values past the range
    /// clamp to the matching endpoint instead of erroring.
    pub(crate) fn invert_saturating(&self, v: f64) -> f64 {
        if v <= self.at_zero() {
            return 0.0;
        }
        if v >= self.at_one() {
            return 1.0;
        }
        self.invert(v).expect("value inside range")
    }
}

/// A learner subsidy applied to group-B manipulation costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SubsidyPlan {
    /// No cost relief.
    None,
    /// The learner pays a `1 - beta` share of each manipulation cost.
    Proportional { beta: f64 },
    /// The learner absorbs up to `alpha` of each manipulation cost.
    Flat { alpha: f64 },
}

impl SubsidyPlan {
    pub fn proportional(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0 && beta <= 1.0) {
            return Err(Error::validation(format!(
                "proportional subsidy needs beta in (0, 1], got {beta}"
            )));
        }
        Ok(SubsidyPlan::Proportional { beta })
    }

    pub fn flat(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::validation(format!(
                "flat subsidy needs alpha >= 0, got {alpha}"
            )));
        }
        Ok(SubsidyPlan::Flat { alpha })
    }

    /// Total manipulation cost a candidate is willing to incur for a
    /// classification worth 1: the candidate-borne share must stay <= 1.
    pub fn budget(&self) -> f64 {
        match *self {
            SubsidyPlan::None => 1.0,
            SubsidyPlan::Proportional { beta } => 1.0 / beta,
            SubsidyPlan::Flat { alpha } => 1.0 + alpha,
        }
    }

    /// Share of a raw manipulation cost borne by the candidate.
    pub fn candidate_borne(&self, raw_cost: f64) -> f64 {
        match *self {
            SubsidyPlan::None => raw_cost,
            SubsidyPlan::Proportional { beta } => beta * raw_cost,
            SubsidyPlan::Flat { alpha } => (raw_cost - alpha).max(0.0),
        }
    }

    /// Share of a raw manipulation cost paid out by the learner. Together
    /// with [`candidate_borne`](Self::candidate_borne) this always sums back
    /// to the raw cost.
    pub fn learner_share(&self, raw_cost: f64) -> f64 {
        raw_cost - self.candidate_borne(raw_cost)
    }

    /// True when the plan is behaviorally identical to no subsidy.
    pub fn is_none_like(&self) -> bool {
        match *self {
            SubsidyPlan::None => true,
            SubsidyPlan::Proportional { beta } => beta == 1.0,
            SubsidyPlan::Flat { alpha } => alpha == 0.0,
        }
    }
}

/// Per-component linear costs for d-dimensional features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearCostVector {
    coeffs: Vec<f64>,
}

impl LinearCostVector {
    /// All coefficients must be strictly positive: best responses divide by
    /// them when picking the cheapest direction.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::validation("linear cost vector must be non-empty"));
        }
        if coeffs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::validation(
                "linear cost vector coefficients must be strictly positive",
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// Candidate-borne cost of manipulating `x -> y` under `plan`.
pub fn manipulation_cost(c: &CostFunction, x: f64, y: f64, plan: &SubsidyPlan) -> Result<f64> {
    if y < x - 1e-12 {
        return Err(Error::domain(format!(
            "manipulation must be upward: y = {y} < x = {x}"
        )));
    }
    let raw = (c.eval(y)? - c.eval(x)?).max(0.0);
    Ok(plan.candidate_borne(raw))
}

/// A single violating pair recorded by [`check_cost_condition`].
#[derive(Debug, Clone, Serialize)]
pub struct CostConditionViolation {
    pub x: f64,
    pub y: f64,
    /// `(c_a(y) - c_a(x)) - (c_b(y) - c_b(x))`, positive when violated.
    pub margin: f64,
}

/// Report for the inter-group cost ordering check.
#[derive(Debug, Clone, Serialize)]
pub struct CostConditionReport {
    pub passed: bool,
    pub checked_pairs: usize,
    /// Worst observed `(c_a delta) - (c_b delta)`; <= 0 when the condition holds.
    pub worst_margin: f64,
    /// Up to 16 violating pairs, worst first.
    pub violations: Vec<CostConditionViolation>,
}

/// Verify `c_a(y) - c_a(x) <= c_b(y) - c_b(x)` on all grid pairs `y >= x`.
pub fn check_cost_condition(
    c_a: &CostFunction,
    c_b: &CostFunction,
    grid_resolution: usize,
) -> CostConditionReport {
    let n = grid_resolution.max(2);
    let grid = linspace(0.0, 1.0, n);
    let va: Vec<f64> = grid.iter().map(|&x| c_a.eval_clamped(x)).collect();
    let vb: Vec<f64> = grid.iter().map(|&x| c_b.eval_clamped(x)).collect();
    let tol = 1e-9 * (1.0 + c_b.at_one().abs());
    let mut worst = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i..n {
            pairs += 1;
            let margin = (va[j] - va[i]) - (vb[j] - vb[i]);
            if margin > worst {
                worst = margin;
            }
            if margin > tol {
                violations.push(CostConditionViolation {
                    x: grid[i],
                    y: grid[j],
                    margin,
                });
            }
        }
    }
    violations.sort_by(|a, b| b.margin.partial_cmp(&a.margin).unwrap());
    violations.truncate(16);
    CostConditionReport {
        passed: violations.is_empty(),
        checked_pairs: pairs,
        worst_margin: worst,
        violations,
    }
}
