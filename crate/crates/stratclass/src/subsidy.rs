//! Subsidy monetary costs, joint (threshold, subsidy) optimization, group
//! welfare and cross-regime comparison.

use serde::{Deserialize, Serialize};

use crate::cost::SubsidyPlan;
use crate::eq1d::{
    best_response_1d, ell, equilibrium_threshold_grid, learner_cost_1d, sigma_boundary,
    LearnerPenalty, Threshold1D,
};
use crate::error::Result;
use crate::numeric::{adaptive_simpson, bisect_increasing, golden_min, linspace};
use crate::population::{GroupId, Scenario1D};

/// Quadrature tolerance for all monetary and welfare integrals.
pub const QUAD_TOL: f64 = 1e-9;

/// Default joint grid density (per axis) for subsidy optimization.
pub const JOINT_GRID: usize = 512;

/// Monetary subsidy outlay, conditional on a group-B candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoneyResult {
    pub amount: f64,
    /// Set when the threshold sits at or below the group-B true threshold,
    /// where the plan is never exercised by a rational learner.
    pub dominated: bool,
}

impl MoneyResult {
    fn zero() -> Self {
        Self {
            amount: 0.0,
            dominated: false,
        }
    }
}

/// Dispatch on the plan kind. `None`-like plans cost nothing.
pub fn subsidy_money_for_plan(
    s: &Scenario1D,
    t: Threshold1D,
    plan: &SubsidyPlan,
) -> Result<MoneyResult> {
    match *plan {
        SubsidyPlan::None => Ok(MoneyResult::zero()),
        SubsidyPlan::Proportional { beta } => subsidy_money_proportional(s, t, beta),
        SubsidyPlan::Flat { alpha } => subsidy_money_flat(s, t, alpha),
    }
}

/// Learner outlay under a proportional plan:
/// `(1 - beta) * integral over manipulating B candidates of (c_B(sigma) - c_B(x))`.
pub fn subsidy_money_proportional(
    s: &Scenario1D,
    t: Threshold1D,
    beta: f64,
) -> Result<MoneyResult> {
    let plan = SubsidyPlan::proportional(beta)?;
    if beta == 1.0 || t.rejects_all() {
        return Ok(MoneyResult::zero());
    }
    let b = s.group(GroupId::B);
    let sigma = t.sigma.clamp(0.0, 1.0);
    if sigma <= b.rule.tau + 1e-15 {
        return Ok(MoneyResult {
            amount: 0.0,
            dominated: true,
        });
    }
    let lo = ell(b, sigma, &plan);
    let c_sigma = b.cost.eval_clamped(sigma);
    let integrand = |x: f64| (c_sigma - b.cost.eval_clamped(x)) * b.distribution.density(x);
    let total = adaptive_simpson(&integrand, lo, sigma, QUAD_TOL)?;
    Ok(MoneyResult {
        amount: (1.0 - beta) * total.max(0.0),
        dominated: false,
    })
}

/// Learner outlay under a flat plan: full reimbursement of costs below
/// `alpha` plus capped `alpha` payments for the rest.
pub fn subsidy_money_flat(s: &Scenario1D, t: Threshold1D, alpha: f64) -> Result<MoneyResult> {
    let plan = SubsidyPlan::flat(alpha)?;
    if alpha == 0.0 || t.rejects_all() {
        return Ok(MoneyResult::zero());
    }
    let b = s.group(GroupId::B);
    let sigma = t.sigma.clamp(0.0, 1.0);
    if sigma <= b.rule.tau + 1e-15 {
        return Ok(MoneyResult {
            amount: 0.0,
            dominated: true,
        });
    }
    let c_sigma = b.cost.eval_clamped(sigma);
    // Candidates with manipulation cost below alpha are fully reimbursed.
    let cheap_floor = if c_sigma - alpha <= b.cost.at_zero() {
        0.0
    } else {
        b.cost.invert_saturating(c_sigma - alpha)
    };
    let low_floor = ell(b, sigma, &plan);
    let integrand = |x: f64| (c_sigma - b.cost.eval_clamped(x)) * b.distribution.density(x);
    let full_payouts = adaptive_simpson(&integrand, cheap_floor, sigma, QUAD_TOL)?;
    let capped_payouts = alpha * b.distribution.mass_clamped(low_floor, cheap_floor);
    Ok(MoneyResult {
        amount: full_payouts.max(0.0) + capped_payouts,
        dominated: false,
    })
}

/// Subsidy families available to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsidyFamily {
    Proportional,
    Flat,
}

/// Result of the joint (threshold, subsidy parameter) optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsidyEquilibrium {
    pub threshold: Threshold1D,
    pub plan: SubsidyPlan,
    pub penalty: LearnerPenalty,
}

/// Joint argmin over a sigma-by-parameter grid with axis-wise golden-section
/// refinement. Ties break toward the smaller subsidy spend, then the smaller
/// threshold.
pub fn optimize_subsidy(s: &Scenario1D, family: SubsidyFamily) -> Result<SubsidyEquilibrium> {
    optimize_subsidy_grid(s, family, JOINT_GRID)
}

fn make_plan(family: SubsidyFamily, param: f64) -> SubsidyPlan {
    match family {
        SubsidyFamily::Proportional => SubsidyPlan::Proportional {
            beta: param.clamp(1e-3, 1.0),
        },
        SubsidyFamily::Flat => SubsidyPlan::Flat {
            alpha: param.max(0.0),
        },
    }
}

pub fn optimize_subsidy_grid(
    s: &Scenario1D,
    family: SubsidyFamily,
    grid: usize,
) -> Result<SubsidyEquilibrium> {
    let grid = grid.max(8);
    let b = s.group(GroupId::B);
    let sigma_hi = sigma_boundary(s.group(GroupId::A), &SubsidyPlan::None).sigma;
    let sigma_lo = b.rule.tau.min(sigma_hi);
    let sigmas = linspace(sigma_lo, sigma_hi, grid);
    let params = match family {
        SubsidyFamily::Proportional => linspace(0.002, 1.0, grid),
        SubsidyFamily::Flat => linspace(0.0, b.cost.at_one() - b.cost.at_zero(), grid),
    };

    let eval = |sigma: f64, param: f64| -> Result<(f64, f64)> {
        let plan = make_plan(family, param);
        let pen = learner_cost_1d(s, Threshold1D::new(sigma), &plan)?;
        Ok((pen.total, pen.subsidy_term))
    };

    // (total, spend, sigma, param) with lexicographic preference.
    let better = |cand: (f64, f64, f64, f64), best: (f64, f64, f64, f64)| -> bool {
        if cand.0 < best.0 - 1e-12 {
            return true;
        }
        if cand.0 > best.0 + 1e-12 {
            return false;
        }
        if cand.1 < best.1 - 1e-12 {
            return true;
        }
        if cand.1 > best.1 + 1e-12 {
            return false;
        }
        if cand.2 < best.2 - 1e-15 {
            return true;
        }
        false
    };

    let mut best = (f64::INFINITY, f64::INFINITY, sigmas[0], params[0]);
    let mut best_idx = (0usize, 0usize);
    for (j, &param) in params.iter().enumerate() {
        for (i, &sigma) in sigmas.iter().enumerate() {
            let (total, spend) = eval(sigma, param)?;
            let cand = (total, spend, sigma, param);
            if better(cand, best) {
                best = cand;
                best_idx = (i, j);
            }
        }
    }

    // Axis-wise refinement around the best cell.
    let sigma_step = if sigmas.len() > 1 {
        sigmas[1] - sigmas[0]
    } else {
        0.0
    };
    let param_step = if params.len() > 1 {
        params[1] - params[0]
    } else {
        0.0
    };
    let (mut sigma_star, mut param_star) = (best.2, best.3);
    let param_min = params[0];
    let param_max = params[params.len() - 1];
    for _ in 0..3 {
        if sigma_step > 0.0 {
            let lo = (sigmas[best_idx.0.saturating_sub(1)]).min(sigma_star);
            let hi = (sigmas[(best_idx.0 + 1).min(sigmas.len() - 1)]).max(sigma_star);
            let p = param_star;
            let (gx, gv) = golden_min(
                &|sig| eval(sig, p).map(|v| v.0).unwrap_or(f64::INFINITY),
                lo,
                hi,
                1e-7,
                200,
            );
            let spend = eval(gx, p)?.1;
            if better((gv, spend, gx, p), best) {
                best = (gv, spend, gx, p);
                sigma_star = gx;
            }
        }
        if param_step > 0.0 {
            let lo = (params[best_idx.1.saturating_sub(1)])
                .min(param_star)
                .max(param_min);
            let hi = (params[(best_idx.1 + 1).min(params.len() - 1)])
                .max(param_star)
                .min(param_max);
            let sg = sigma_star;
            let (gp, gv) = golden_min(
                &|par| eval(sg, par).map(|v| v.0).unwrap_or(f64::INFINITY),
                lo,
                hi,
                1e-7,
                200,
            );
            let spend = eval(sg, gp)?.1;
            if better((gv, spend, sg, gp), best) {
                best = (gv, spend, sg, gp);
                param_star = gp;
            }
        }
    }

    // The objective has a kink valley along the B-perfect ridge
    // `sigma = sigma_B(plan)`, which axis-wise refinement cannot track.
    // Scan the ridge explicitly and refine the best ridge cell.
    let ridge_sigma = |param: f64| -> f64 {
        sigma_boundary(b, &make_plan(family, param))
            .sigma
            .min(sigma_hi)
    };
    let ridge_eval = |param: f64| -> Result<(f64, f64)> { eval(ridge_sigma(param), param) };
    let mut ridge_best: Option<(f64, f64, f64, f64)> = None;
    let mut ridge_idx = 0usize;
    for (j, &param) in params.iter().enumerate() {
        let (total, spend) = ridge_eval(param)?;
        let cand = (total, spend, ridge_sigma(param), param);
        if ridge_best.is_none() || better(cand, ridge_best.unwrap()) {
            ridge_best = Some(cand);
            ridge_idx = j;
        }
    }
    if let Some(rb) = ridge_best {
        let lo = params[ridge_idx.saturating_sub(1)];
        let hi = params[(ridge_idx + 1).min(params.len() - 1)];
        let (gp, gv) = golden_min(
            &|par| ridge_eval(par).map(|v| v.0).unwrap_or(f64::INFINITY),
            lo,
            hi,
            1e-9,
            200,
        );
        let refined = (gv, ridge_eval(gp)?.1, ridge_sigma(gp), gp);
        let ridge_cand = if better(refined, rb) { refined } else { rb };
        if better(ridge_cand, best) {
            best = ridge_cand;
        }
    }

    // The no-subsidy corner is always available; evaluate it exactly so a
    // zero-spend plan wins ties per the spend-then-threshold rule.
    let neutral_param = match family {
        SubsidyFamily::Proportional => 1.0,
        SubsidyFamily::Flat => 0.0,
    };
    let (t_none, _) = equilibrium_threshold_grid(s, &SubsidyPlan::None, grid)?;
    let (none_total, none_spend) = eval(t_none.sigma, neutral_param)?;
    if better((none_total, none_spend, t_none.sigma, neutral_param), best) {
        best = (none_total, none_spend, t_none.sigma, neutral_param);
    }

    let plan = make_plan(family, best.3);
    let threshold = Threshold1D::new(best.2);
    let penalty = learner_cost_1d(s, threshold, &plan)?;
    Ok(SubsidyEquilibrium {
        threshold,
        plan,
        penalty,
    })
}

/// Candidate payoff at the given regime point; the plan only applies to
/// group B.
pub fn candidate_payoff(
    s: &Scenario1D,
    group: GroupId,
    x: f64,
    t: Threshold1D,
    plan: &SubsidyPlan,
) -> f64 {
    let eff = effective_plan(group, plan);
    best_response_1d(s.group(group), x, t, &eff).payoff
}

fn effective_plan(group: GroupId, plan: &SubsidyPlan) -> SubsidyPlan {
    match group {
        GroupId::A => SubsidyPlan::None,
        GroupId::B => *plan,
    }
}

/// Average utility of a group at a regime point: admitted-for-free mass plus
/// the integral of `1 - candidate-borne cost` over manipulating candidates.
pub fn group_welfare(
    s: &Scenario1D,
    t: Threshold1D,
    plan: &SubsidyPlan,
    group: GroupId,
) -> Result<f64> {
    if t.rejects_all() {
        return Ok(0.0);
    }
    let g = s.group(group);
    let eff = effective_plan(group, plan);
    let sigma = t.sigma.clamp(0.0, 1.0);
    let free = g.distribution.mass_clamped(sigma, 1.0);
    let floor = ell(g, sigma, &eff);
    if sigma - floor <= 1e-15 {
        return Ok(free);
    }
    let c_sigma = g.cost.eval_clamped(sigma);
    let payoff = |x: f64| {
        let borne = eff.candidate_borne(c_sigma - g.cost.eval_clamped(x));
        (1.0 - borne).max(0.0) * g.distribution.density(x)
    };
    // The flat plan has a kink where the raw cost crosses alpha.
    let mut cut = sigma;
    if let SubsidyPlan::Flat { alpha } = eff {
        if alpha > 0.0 && c_sigma - alpha > g.cost.at_zero() {
            cut = g
                .cost
                .invert_saturating(c_sigma - alpha)
                .clamp(floor, sigma);
        } else if alpha > 0.0 {
            cut = floor;
        }
    }
    let mut manip = 0.0;
    if cut > floor {
        manip += adaptive_simpson(&payoff, floor, cut, QUAD_TOL)?;
    }
    if sigma > cut {
        manip += adaptive_simpson(&payoff, cut, sigma, QUAD_TOL)?;
    }
    Ok(free + manip)
}

/// How the learner selects thresholds when comparing regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LearnerMode {
    /// Minimize the weighted penalty (the default game objective).
    PenaltyMin,
    /// Pick the threshold equalizing false-negative and false-positive
    /// counts, as in the worked equal-errors examples.
    EqualizeErrors,
}

/// The four regimes compared by the welfare analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    NoManipulation,
    Manipulation,
    ProportionalSubsidy,
    FlatSubsidy,
}

impl RegimeKind {
    pub fn label(&self) -> &'static str {
        match self {
            RegimeKind::NoManipulation => "no-manipulation",
            RegimeKind::Manipulation => "manipulation",
            RegimeKind::ProportionalSubsidy => "proportional-subsidy",
            RegimeKind::FlatSubsidy => "flat-subsidy",
        }
    }
}

/// Equilibrium outcome of one regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: RegimeKind,
    pub threshold: Threshold1D,
    pub plan: SubsidyPlan,
    pub penalty: LearnerPenalty,
    pub welfare_a: f64,
    pub welfare_b: f64,
    /// `1 - penalty.total`, the learner-utility convention of the welfare
    /// comparisons.
    pub learner_utility: f64,
}

/// Per-candidate payoff of a regime point; no-manipulation candidates cannot
/// move their features.
pub fn regime_payoff(s: &Scenario1D, report: &RegimeReport, group: GroupId, x: f64) -> f64 {
    match report.regime {
        RegimeKind::NoManipulation => {
            if !report.threshold.rejects_all() && x >= report.threshold.sigma {
                1.0
            } else {
                0.0
            }
        }
        _ => candidate_payoff(s, group, x, report.threshold, &report.plan),
    }
}

/// Equilibrium of the non-manipulation benchmark: the learner thresholds raw
/// features inside `[tau_B, tau_A]`; welfare is the admitted mass.
pub fn welfare_nonmanipulation(s: &Scenario1D, mode: LearnerMode) -> Result<RegimeReport> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    let (tau_a, tau_b) = (a.rule.tau, b.rule.tau);
    let penalty_at = |t: f64| {
        s.c_fn() * s.proportion(GroupId::B) * b.distribution.mass_clamped(tau_b, t)
            + s.c_fp() * s.proportion(GroupId::A) * a.distribution.mass_clamped(t, tau_a)
    };
    let tau_star = match mode {
        LearnerMode::PenaltyMin => {
            if tau_a - tau_b <= 1e-15 {
                tau_a
            } else {
                let points = linspace(tau_b, tau_a, 1025);
                let mut best = (points[0], penalty_at(points[0]));
                for &t in &points[1..] {
                    let v = penalty_at(t);
                    if v < best.1 - 1e-15 {
                        best = (t, v);
                    }
                }
                let lo = (best.0 - (points[1] - points[0])).max(tau_b);
                let hi = (best.0 + (points[1] - points[0])).min(tau_a);
                let (gx, gv) = golden_min(&penalty_at, lo, hi, 1e-9, 200);
                if gv < best.1 - 1e-12 {
                    gx
                } else {
                    best.0
                }
            }
        }
        LearnerMode::EqualizeErrors => {
            if tau_a - tau_b <= 1e-15 {
                tau_a
            } else {
                // fn count minus fp count is non-decreasing in the threshold.
                let balance = |t: f64| {
                    s.proportion(GroupId::B) * b.distribution.mass_clamped(tau_b, t)
                        - s.proportion(GroupId::A) * a.distribution.mass_clamped(t, tau_a)
                };
                bisect_increasing(balance, tau_b, tau_a, 0.0, 1e12)?
            }
        }
    };
    let mut pen = LearnerPenalty::zero();
    pen.fn_b = s.c_fn() * s.proportion(GroupId::B) * b.distribution.mass_clamped(tau_b, tau_star);
    pen.fp_a = s.c_fp() * s.proportion(GroupId::A) * a.distribution.mass_clamped(tau_star, tau_a);
    pen.total = pen.fn_b + pen.fp_a;
    let welfare_a = a.distribution.mass_clamped(tau_star, 1.0);
    let welfare_b = b.distribution.mass_clamped(tau_star, 1.0);
    Ok(RegimeReport {
        regime: RegimeKind::NoManipulation,
        threshold: Threshold1D::new(tau_star),
        plan: SubsidyPlan::None,
        penalty: pen,
        welfare_a,
        welfare_b,
        learner_utility: 1.0 - pen.total,
    })
}

/// Equal-error threshold of the manipulation game, found by bisection on the
/// count balance over the undominated interval.
pub fn equalize_errors_threshold(s: &Scenario1D, plan: &SubsidyPlan) -> Result<Threshold1D> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    let lo = sigma_boundary(b, plan).sigma;
    let hi = sigma_boundary(a, &SubsidyPlan::None).sigma;
    if hi - lo <= 1e-15 {
        return Ok(Threshold1D::new(hi));
    }
    let balance = |sigma: f64| {
        let lb = ell(b, sigma, plan);
        let la = ell(a, sigma, &SubsidyPlan::None);
        s.proportion(GroupId::B) * b.distribution.mass_clamped(b.rule.tau, lb)
            - s.proportion(GroupId::A) * a.distribution.mass_clamped(la, a.rule.tau)
    };
    let sigma = bisect_increasing(balance, lo, hi, 0.0, 1e12)?;
    Ok(Threshold1D::new(sigma))
}

/// Paper-style accuracy accounting: raw error masses (no penalty weights or
/// group proportions) plus `lambda` times the conditional subsidy outlay.
/// Used to reproduce the worked examples' printed learner totals, which
/// follow this convention rather than the weighted penalty.
pub fn error_mass_penalty(s: &Scenario1D, t: Threshold1D, plan: &SubsidyPlan) -> Result<f64> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    if t.rejects_all() {
        return Ok(b.distribution.mass_clamped(b.rule.tau, 1.0)
            + a.distribution.mass_clamped(a.rule.tau, 1.0));
    }
    let sigma = t.sigma.clamp(0.0, 1.0);
    let la = ell(a, sigma, &SubsidyPlan::None);
    let lb = ell(b, sigma, plan);
    let masses = b.distribution.mass_clamped(b.rule.tau, lb.max(b.rule.tau))
        + b.distribution.mass_clamped(lb.min(b.rule.tau), b.rule.tau)
        + a.distribution.mass_clamped(la.min(a.rule.tau), a.rule.tau)
        + a.distribution.mass_clamped(a.rule.tau, la.max(a.rule.tau));
    let money = subsidy_money_for_plan(s, Threshold1D::new(sigma), plan)?;
    Ok(masses + s.lambda() * money.amount)
}

/// Same accounting for the non-manipulation benchmark.
pub fn error_mass_penalty_nonmanip(s: &Scenario1D, tau_star: f64) -> f64 {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    b.distribution.mass_clamped(b.rule.tau, tau_star)
        + a.distribution.mass_clamped(tau_star, a.rule.tau)
}

/// Options for [`compare_regimes`].
#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub mode: LearnerMode,
    /// Fixed regime points overriding the computed equilibria.
    pub pinned_nonmanipulation: Option<f64>,
    pub pinned_manipulation: Option<f64>,
    pub pinned_proportional: Option<(f64, f64)>,
    pub pinned_flat: Option<(f64, f64)>,
    pub include_flat: bool,
    /// Feature grid used for the per-candidate payoff deltas.
    pub delta_grid: usize,
    /// Rows kept in the report's sampled payoff table.
    pub sample_rows: usize,
    pub eq_grid: usize,
    pub joint_grid: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            mode: LearnerMode::PenaltyMin,
            pinned_nonmanipulation: None,
            pinned_manipulation: None,
            pinned_proportional: None,
            pinned_flat: None,
            include_flat: true,
            delta_grid: 10_001,
            sample_rows: 201,
            eq_grid: crate::eq1d::EQUILIBRIUM_GRID,
            joint_grid: JOINT_GRID,
        }
    }
}

/// Payoff deltas of a regime against the manipulation baseline for one group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaStats {
    pub min: f64,
    pub max: f64,
    pub improved: usize,
    pub worsened: usize,
    pub unchanged: usize,
}

/// One row of the sampled payoff table: payoffs per regime, groups A and B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffRow {
    pub x: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Full regime comparison with dominance flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeComparison {
    pub reports: Vec<RegimeReport>,
    /// Stats of (subsidy payoff - manipulation payoff), groups A and B, for
    /// the proportional regime.
    pub prop_delta_a: DeltaStats,
    pub prop_delta_b: DeltaStats,
    /// Theorem-style paradox: under the proportional subsidy equilibrium no
    /// candidate in either group improves and some in both strictly decline.
    pub subsidy_paradox: bool,
    /// Flat-subsidy analog on averages: both groups' mean welfare declines.
    pub flat_average_decline: bool,
    /// All three parties prefer the non-manipulation benchmark to both the
    /// manipulation and proportional-subsidy equilibria.
    pub manipulation_regret: bool,
    pub payoff_table: Vec<PayoffRow>,
}

const PAYOFF_TOL: f64 = 1e-9;

fn delta_stats(deltas: impl Iterator<Item = f64>) -> DeltaStats {
    let mut stats = DeltaStats {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        improved: 0,
        worsened: 0,
        unchanged: 0,
    };
    for d in deltas {
        stats.min = stats.min.min(d);
        stats.max = stats.max.max(d);
        if d > PAYOFF_TOL {
            stats.improved += 1;
        } else if d < -PAYOFF_TOL {
            stats.worsened += 1;
        } else {
            stats.unchanged += 1;
        }
    }
    if stats.min > stats.max {
        stats.min = 0.0;
        stats.max = 0.0;
    }
    stats
}

/// Compute all four regime equilibria and the dominance summary.
pub fn compare_regimes(s: &Scenario1D, opts: &CompareOptions) -> Result<RegimeComparison> {
    let mut nonmanip = welfare_nonmanipulation(s, opts.mode)?;
    if let Some(tau) = opts.pinned_nonmanipulation {
        nonmanip = pin_nonmanip(s, tau)?;
    }

    let manip = match opts.pinned_manipulation {
        Some(sigma) => regime_report_at(s, RegimeKind::Manipulation, sigma, SubsidyPlan::None)?,
        None => {
            let t = match opts.mode {
                LearnerMode::PenaltyMin => {
                    equilibrium_threshold_grid(s, &SubsidyPlan::None, opts.eq_grid)?.0
                }
                LearnerMode::EqualizeErrors => equalize_errors_threshold(s, &SubsidyPlan::None)?,
            };
            regime_report_at(s, RegimeKind::Manipulation, t.sigma, SubsidyPlan::None)?
        }
    };

    let prop = match opts.pinned_proportional {
        Some((sigma, beta)) => regime_report_at(
            s,
            RegimeKind::ProportionalSubsidy,
            sigma,
            SubsidyPlan::proportional(beta)?,
        )?,
        None => {
            let eq = optimize_subsidy_grid(s, SubsidyFamily::Proportional, opts.joint_grid)?;
            regime_report_at(
                s,
                RegimeKind::ProportionalSubsidy,
                eq.threshold.sigma,
                eq.plan,
            )?
        }
    };

    let mut reports = vec![nonmanip, manip, prop];

    if opts.include_flat {
        let flat = match opts.pinned_flat {
            Some((sigma, alpha)) => {
                regime_report_at(s, RegimeKind::FlatSubsidy, sigma, SubsidyPlan::flat(alpha)?)?
            }
            None => {
                let eq = optimize_subsidy_grid(s, SubsidyFamily::Flat, opts.joint_grid)?;
                regime_report_at(s, RegimeKind::FlatSubsidy, eq.threshold.sigma, eq.plan)?
            }
        };
        reports.push(flat);
    }

    let xs = linspace(0.0, 1.0, opts.delta_grid.max(3));
    let manip_ref = reports[1].clone();
    let prop_ref = reports[2].clone();
    let deltas_a: Vec<f64> = xs
        .iter()
        .map(|&x| {
            regime_payoff(s, &prop_ref, GroupId::A, x) - regime_payoff(s, &manip_ref, GroupId::A, x)
        })
        .collect();
    let deltas_b: Vec<f64> = xs
        .iter()
        .map(|&x| {
            regime_payoff(s, &prop_ref, GroupId::B, x) - regime_payoff(s, &manip_ref, GroupId::B, x)
        })
        .collect();
    let prop_delta_a = delta_stats(deltas_a.iter().copied());
    let prop_delta_b = delta_stats(deltas_b.iter().copied());

    let subsidy_paradox = prop_delta_a.improved == 0
        && prop_delta_b.improved == 0
        && prop_delta_a.worsened > 0
        && prop_delta_b.worsened > 0;

    let flat_average_decline = if opts.include_flat {
        let flat = &reports[3];
        flat.welfare_a < manip_ref.welfare_a - 1e-12 && flat.welfare_b < manip_ref.welfare_b - 1e-12
    } else {
        false
    };

    let nm = &reports[0];
    let manipulation_regret = [&manip_ref, &prop_ref].iter().all(|r| {
        nm.welfare_a > r.welfare_a + 1e-12
            && nm.welfare_b > r.welfare_b + 1e-12
            && nm.penalty.total < r.penalty.total - 1e-12
    });

    let rows = opts.sample_rows.clamp(2, xs.len());
    let table_xs = linspace(0.0, 1.0, rows);
    let payoff_table = table_xs
        .iter()
        .map(|&x| PayoffRow {
            x,
            a: reports
                .iter()
                .map(|r| regime_payoff(s, r, GroupId::A, x))
                .collect(),
            b: reports
                .iter()
                .map(|r| regime_payoff(s, r, GroupId::B, x))
                .collect(),
        })
        .collect();

    Ok(RegimeComparison {
        reports,
        prop_delta_a,
        prop_delta_b,
        subsidy_paradox,
        flat_average_decline,
        manipulation_regret,
        payoff_table,
    })
}

fn pin_nonmanip(s: &Scenario1D, tau_star: f64) -> Result<RegimeReport> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    let mut pen = LearnerPenalty::zero();
    pen.fn_b =
        s.c_fn() * s.proportion(GroupId::B) * b.distribution.mass_clamped(b.rule.tau, tau_star);
    pen.fp_a =
        s.c_fp() * s.proportion(GroupId::A) * a.distribution.mass_clamped(tau_star, a.rule.tau);
    pen.total = pen.fn_b + pen.fp_a;
    Ok(RegimeReport {
        regime: RegimeKind::NoManipulation,
        threshold: Threshold1D::new(tau_star),
        plan: SubsidyPlan::None,
        penalty: pen,
        welfare_a: a.distribution.mass_clamped(tau_star, 1.0),
        welfare_b: b.distribution.mass_clamped(tau_star, 1.0),
        learner_utility: 1.0 - pen.total,
    })
}

/// Evaluate one regime at a fixed threshold and plan.
pub fn regime_report_at(
    s: &Scenario1D,
    regime: RegimeKind,
    sigma: f64,
    plan: SubsidyPlan,
) -> Result<RegimeReport> {
    let t = Threshold1D::new(sigma);
    let penalty = learner_cost_1d(s, t, &plan)?;
    let welfare_a = group_welfare(s, t, &plan, GroupId::A)?;
    let welfare_b = group_welfare(s, t, &plan, GroupId::B)?;
    Ok(RegimeReport {
        regime,
        threshold: t,
        plan,
        penalty,
        welfare_a,
        welfare_b,
        learner_utility: 1.0 - penalty.total,
    })
}

/// Quadrature of the payoff difference between two regime points for one
/// group; equals the welfare difference when the payoff table is consistent.
pub fn welfare_delta_by_quadrature(
    s: &Scenario1D,
    from: &RegimeReport,
    to: &RegimeReport,
    group: GroupId,
) -> Result<f64> {
    let g = s.group(group);
    let f = |x: f64| {
        (regime_payoff(s, to, group, x) - regime_payoff(s, from, group, x))
            * g.distribution.density(x)
    };
    // Split at every kink candidate: thresholds and correspondence floors.
    let mut cuts = vec![0.0, 1.0];
    for r in [from, to] {
        if !r.threshold.rejects_all() {
            let sigma = r.threshold.sigma.clamp(0.0, 1.0);
            cuts.push(sigma);
            let eff = effective_plan(group, &r.plan);
            cuts.push(ell(g, sigma, &eff));
            if let SubsidyPlan::Flat { alpha } = eff {
                let c_sigma = g.cost.eval_clamped(sigma);
                if c_sigma - alpha > g.cost.at_zero() {
                    cuts.push(g.cost.invert_saturating(c_sigma - alpha));
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] + 1e-14 {
            total += adaptive_simpson(&f, w[0], w[1], QUAD_TOL)?;
        }
    }
    Ok(total)
}
