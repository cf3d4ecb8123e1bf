//! One-dimensional game: boundary thresholds, correspondences, candidate
//! best responses, the learner's penalty curve and its argmin.
//!
//! Conventions: classification at the boundary is positive (`y >= sigma`),
//! error intervals are half-open `[lo, hi)`, and candidates indifferent
//! between moving and staying move. A threshold with `sigma > 1` means
//! reject-all.

use serde::{Deserialize, Serialize};

use crate::cost::SubsidyPlan;
use crate::error::Result;
use crate::numeric::{golden_min, linspace};
use crate::population::{Group1D, GroupId, Scenario1D};
use crate::subsidy;

/// Default grid density for the equilibrium scan.
pub const EQUILIBRIUM_GRID: usize = 2048;

/// Refinement tolerance in sigma for the golden-section stage.
pub const REFINE_TOL: f64 = 1e-7;

/// A threshold classifier on presented features: admit iff `y >= sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold1D {
    pub sigma: f64,
}

impl Threshold1D {
    pub fn new(sigma: f64) -> Self {
        Self { sigma }
    }

    /// True when no feature in `[0, 1]` can be admitted.
    pub fn rejects_all(&self) -> bool {
        self.sigma > 1.0
    }
}

/// Boundary threshold together with a saturation marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult {
    pub sigma: f64,
    /// Set when `c(tau) + budget` exceeds `c(1)` and the boundary clamps to 1.
    pub saturated: bool,
}

/// Largest presented feature reachable from the group's true threshold at a
/// candidate-borne cost of 1 (`sigma_A`, `sigma_B` and their subsidized
/// variants).
pub fn sigma_boundary(g: &Group1D, plan: &SubsidyPlan) -> BoundaryResult {
    let target = g.cost.eval_clamped(g.rule.tau) + plan.budget();
    if target > g.cost.at_one() {
        BoundaryResult {
            sigma: 1.0,
            saturated: true,
        }
    } else {
        BoundaryResult {
            sigma: g.cost.invert_saturating(target),
            saturated: false,
        }
    }
}

/// Minimum unmanipulated feature consistent with presenting `y`: the
/// correspondence `l(y) = max{0, c^-1(c(y) - budget)}`.
pub fn ell(g: &Group1D, y: f64, plan: &SubsidyPlan) -> f64 {
    let y = y.clamp(0.0, 1.0);
    let target = g.cost.eval_clamped(y) - plan.budget();
    if target <= g.cost.at_zero() {
        0.0
    } else {
        g.cost.invert_saturating(target)
    }
}

/// A candidate's optimal play against a published threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse1D {
    /// Presented feature.
    pub y: f64,
    /// Candidate-borne cost of the move.
    pub paid_cost: f64,
    /// `f(y) - paid_cost`; never negative for a rational candidate.
    pub payoff: f64,
}

/// Optimal candidate response: stay if already admitted or if reaching the
/// threshold costs more than the classification is worth, otherwise move
/// exactly to the threshold.
pub fn best_response_1d(g: &Group1D, x: f64, t: Threshold1D, plan: &SubsidyPlan) -> BestResponse1D {
    let x = x.clamp(0.0, 1.0);
    if t.rejects_all() {
        return BestResponse1D {
            y: x,
            paid_cost: 0.0,
            payoff: 0.0,
        };
    }
    let sigma = t.sigma.max(0.0);
    if x >= sigma {
        return BestResponse1D {
            y: x,
            paid_cost: 0.0,
            payoff: 1.0,
        };
    }
    let raw = g.cost.eval_clamped(sigma) - g.cost.eval_clamped(x);
    let borne = plan.candidate_borne(raw);
    if borne <= 1.0 + 1e-9 {
        BestResponse1D {
            y: sigma,
            paid_cost: borne,
            payoff: (1.0 - borne).max(0.0),
        }
    } else {
        BestResponse1D {
            y: x,
            paid_cost: 0.0,
            payoff: 0.0,
        }
    }
}

/// Learner penalty decomposition at a threshold.
///
/// Inside the undominated interval only `fn_b` and `fp_a` can be nonzero;
/// the `fp_b`/`fn_a` terms appear when a dominated threshold is evaluated
/// (kept so penalty curves can be plotted over the full axis).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerPenalty {
    /// `C_FN * p_B * mass_B([tau_B, l_B(sigma)))`
    pub fn_b: f64,
    /// `C_FP * p_A * mass_A([l_A(sigma), tau_A))`
    pub fp_a: f64,
    /// False positives on B; nonzero only below the subsidized B boundary.
    pub fp_b: f64,
    /// False negatives on A; nonzero only above `sigma_A`.
    pub fn_a: f64,
    /// Monetary subsidy outlay conditional on a group-B candidate.
    pub subsidy_money: f64,
    /// `lambda * p_B * subsidy_money`: the subsidy contribution to the total,
    /// weighted by the subsidized population share.
    pub subsidy_term: f64,
    pub total: f64,
    /// Threshold lies outside the undominated interval.
    pub dominated: bool,
}

impl LearnerPenalty {
    pub fn zero() -> Self {
        Self {
            fn_b: 0.0,
            fp_a: 0.0,
            fp_b: 0.0,
            fn_a: 0.0,
            subsidy_money: 0.0,
            subsidy_term: 0.0,
            total: 0.0,
            dominated: false,
        }
    }
}

/// Penalty decomposition of a threshold under a subsidy plan (the plan only
/// ever applies to group B).
pub fn learner_cost_1d(
    s: &Scenario1D,
    t: Threshold1D,
    plan: &SubsidyPlan,
) -> Result<LearnerPenalty> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    let (tau_a, tau_b) = (a.rule.tau, b.rule.tau);
    let (p_a, p_b) = (s.proportion(GroupId::A), s.proportion(GroupId::B));

    if t.rejects_all() {
        let fn_b = s.c_fn() * p_b * b.distribution.mass_clamped(tau_b, 1.0 + 1e-12);
        let fn_a = s.c_fn() * p_a * a.distribution.mass_clamped(tau_a, 1.0 + 1e-12);
        // Closed upper endpoint: every positively labeled candidate is denied.
        let mut pen = LearnerPenalty::zero();
        pen.fn_b = fn_b + s.c_fn() * p_b * point_mass_at_one(b, tau_b);
        pen.fn_a = fn_a + s.c_fn() * p_a * point_mass_at_one(a, tau_a);
        pen.total = pen.fn_b + pen.fn_a;
        pen.dominated = true;
        return Ok(pen);
    }

    let sigma = t.sigma.clamp(0.0, 1.0);
    let la = ell(a, sigma, &SubsidyPlan::None);
    let lb = ell(b, sigma, plan);

    let fn_b_mass = b.distribution.mass_clamped(tau_b, lb.max(tau_b));
    let fp_b_mass = b.distribution.mass_clamped(lb.min(tau_b), tau_b);
    let fp_a_mass = a.distribution.mass_clamped(la.min(tau_a), tau_a);
    let fn_a_mass = a.distribution.mass_clamped(tau_a, la.max(tau_a));

    let money = subsidy::subsidy_money_for_plan(s, Threshold1D::new(sigma), plan)?;
    let subsidy_term = s.lambda() * p_b * money.amount;

    let fn_b = s.c_fn() * p_b * fn_b_mass;
    let fp_b = s.c_fp() * p_b * fp_b_mass;
    let fp_a = s.c_fp() * p_a * fp_a_mass;
    let fn_a = s.c_fn() * p_a * fn_a_mass;

    let lo = sigma_boundary(b, plan)
        .sigma
        .min(sigma_boundary(a, &SubsidyPlan::None).sigma);
    let hi = sigma_boundary(a, &SubsidyPlan::None).sigma;
    let dominated = sigma < lo - 1e-9 || sigma > hi + 1e-9;

    Ok(LearnerPenalty {
        fn_b,
        fp_a,
        fp_b,
        fn_a,
        subsidy_money: money.amount,
        subsidy_term,
        total: fn_b + fp_b + fp_a + fn_a + subsidy_term,
        dominated,
    })
}

fn point_mass_at_one(_g: &Group1D, _tau: f64) -> f64 {
    // Continuous distributions put no mass on the single point {1}.
    0.0
}

/// The undominated threshold interval `[sigma_B(plan), sigma_A]`, collapsed
/// to `sigma_A` when the subsidized B boundary overshoots it.
pub fn undominated_interval(s: &Scenario1D, plan: &SubsidyPlan) -> (f64, f64, bool) {
    let b_bound = sigma_boundary(s.group(GroupId::B), plan);
    let a_bound = sigma_boundary(s.group(GroupId::A), &SubsidyPlan::None);
    let hi = a_bound.sigma;
    let lo = b_bound.sigma.min(hi);
    (lo, hi, b_bound.saturated || a_bound.saturated)
}

/// Equilibrium threshold under a fixed plan: dense grid scan over the
/// undominated interval plus golden-section refinement in the best cell.
/// Ties break toward the smallest sigma.
pub fn equilibrium_threshold(
    s: &Scenario1D,
    plan: &SubsidyPlan,
) -> Result<(Threshold1D, LearnerPenalty)> {
    equilibrium_threshold_grid(s, plan, EQUILIBRIUM_GRID)
}

pub fn equilibrium_threshold_grid(
    s: &Scenario1D,
    plan: &SubsidyPlan,
    grid: usize,
) -> Result<(Threshold1D, LearnerPenalty)> {
    let (lo, hi, _) = undominated_interval(s, plan);
    let cost_at = |sigma: f64| -> Result<f64> {
        Ok(learner_cost_1d(s, Threshold1D::new(sigma), plan)?.total)
    };
    if hi - lo <= 1e-12 {
        let t = Threshold1D::new(hi);
        let pen = learner_cost_1d(s, t, plan)?;
        return Ok((t, pen));
    }
    let points = linspace(lo, hi, grid.max(2));
    let mut best_idx = 0usize;
    let mut best_val = f64::INFINITY;
    for (i, &sigma) in points.iter().enumerate() {
        let v = cost_at(sigma)?;
        if v < best_val - 1e-15 {
            best_val = v;
            best_idx = i;
        }
    }
    let bracket_lo = points[best_idx.saturating_sub(1)];
    let bracket_hi = points[(best_idx + 1).min(points.len() - 1)];
    let (gx, gv) = golden_min(
        &|sigma| cost_at(sigma).unwrap_or(f64::INFINITY),
        bracket_lo,
        bracket_hi,
        REFINE_TOL,
        200,
    );
    // Smallest sigma wins among near-ties.
    let mut sigma_star = points[best_idx];
    let mut val_star = best_val;
    if gv < val_star - 1e-12 || (gv <= val_star + 1e-12 && gx < sigma_star) {
        sigma_star = gx;
        val_star = gv.min(val_star);
    }
    let _ = val_star;
    let t = Threshold1D::new(sigma_star);
    let pen = learner_cost_1d(s, t, plan)?;
    Ok((t, pen))
}

/// Closed-form equilibrium location predicted from cost curvature when the
/// proportional-costs conditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvaturePrediction {
    SigmaB,
    SigmaA,
    Indifferent,
    NotApplicable,
}

/// Applies the proportional-costs characterization: requires `c_A = q c_B`
/// with constant `q` in (0, 1), uniform features, symmetric penalties and
/// equal proportions. Strictly concave costs pin the equilibrium at
/// `sigma_B`, strictly convex at `sigma_A`, affine costs tie everywhere.
pub fn curvature_prediction(s: &Scenario1D) -> CurvaturePrediction {
    use crate::dist::Distribution;
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    if a.distribution != Distribution::Uniform01 || b.distribution != Distribution::Uniform01 {
        return CurvaturePrediction::NotApplicable;
    }
    if (s.c_fn() - s.c_fp()).abs() > 1e-12
        || (s.proportion(GroupId::A) - s.proportion(GroupId::B)).abs() > 1e-12
    {
        return CurvaturePrediction::NotApplicable;
    }
    // Proportionality: the ratio c_A / c_B must be constant on a grid.
    let mut ratios = Vec::new();
    for i in 1..=64 {
        let x = i as f64 / 64.0;
        let denom = b.cost.eval_clamped(x);
        if denom.abs() < 1e-12 {
            return CurvaturePrediction::NotApplicable;
        }
        ratios.push(a.cost.eval_clamped(x) / denom);
    }
    let q = ratios[ratios.len() / 2];
    if ratios.iter().any(|r| (r - q).abs() > 1e-9) {
        return CurvaturePrediction::NotApplicable;
    }
    if !(q > 1e-12 && q < 1.0 - 1e-9) {
        return CurvaturePrediction::NotApplicable;
    }
    // Curvature of c_B by centered second differences.
    let h = 1.0 / 128.0;
    let tol = 1e-8 * (1.0 + b.cost.at_one().abs());
    let mut sign_neg = true;
    let mut sign_pos = true;
    let mut all_zero = true;
    for i in 1..128 {
        let x = i as f64 * h;
        let d2 =
            b.cost.eval_clamped(x + h) - 2.0 * b.cost.eval_clamped(x) + b.cost.eval_clamped(x - h);
        if d2.abs() > tol {
            all_zero = false;
        }
        if d2 >= -tol {
            sign_neg = false;
        }
        if d2 <= tol {
            sign_pos = false;
        }
    }
    if all_zero {
        CurvaturePrediction::Indifferent
    } else if sign_neg {
        CurvaturePrediction::SigmaB
    } else if sign_pos {
        CurvaturePrediction::SigmaA
    } else {
        CurvaturePrediction::NotApplicable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostFunction;
    use crate::dist::Distribution;
    use crate::population::TrueRule1D;

    fn group(cost: CostFunction, tau: f64) -> Group1D {
        Group1D {
            distribution: Distribution::uniform(),
            cost,
            rule: TrueRule1D::new(tau).unwrap(),
        }
    }

    fn example1() -> Scenario1D {
        Scenario1D::new(
            group(CostFunction::sqrt_linear(8.0, 1.0).unwrap(), 0.4),
            group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3),
            0.5,
            1.0,
            1.0,
            0.75,
        )
        .unwrap()
    }

    fn example2() -> Scenario1D {
        Scenario1D::new(
            group(CostFunction::linear(3.0).unwrap(), 0.4),
            group(CostFunction::linear(4.0).unwrap(), 0.3),
            0.5,
            1.0 / 3.0,
            2.0 / 3.0,
            0.75,
        )
        .unwrap()
    }

    #[test]
    fn sigma_boundary_examples() {
        let b1 = group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3);
        let r = sigma_boundary(&b1, &SubsidyPlan::None);
        assert!((r.sigma - 0.398).abs() < 1e-3);
        assert!(!r.saturated);

        let a3 = group(CostFunction::linear(3.0).unwrap(), 0.4);
        assert!((sigma_boundary(&a3, &SubsidyPlan::None).sigma - 0.7333333).abs() < 1e-6);

        let b2 = group(CostFunction::linear(4.0).unwrap(), 0.3);
        let plan = SubsidyPlan::proportional(0.994).unwrap();
        assert!((sigma_boundary(&b2, &plan).sigma - 0.5515).abs() < 1e-3);
    }

    #[test]
    fn sigma_boundary_saturates() {
        let g = group(CostFunction::linear(1.0).unwrap(), 0.5);
        let r = sigma_boundary(&g, &SubsidyPlan::None);
        assert_eq!(r.sigma, 1.0);
        assert!(r.saturated);
    }

    #[test]
    fn ell_examples() {
        let b4 = group(CostFunction::linear(4.0).unwrap(), 0.3);
        assert!((ell(&b4, 0.64, &SubsidyPlan::None) - 0.39).abs() < 1e-9);

        let a3 = group(CostFunction::linear(3.0).unwrap(), 0.4);
        assert!((ell(&a3, 0.55, &SubsidyPlan::None) - 0.2166667).abs() < 1e-6);

        let unit = group(CostFunction::linear(1.0).unwrap(), 0.5);
        assert_eq!(ell(&unit, 0.5, &SubsidyPlan::None), 0.0);
    }

    #[test]
    fn boundary_correspondence_duality() {
        for (g, plan) in [
            (
                group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3),
                SubsidyPlan::None,
            ),
            (
                group(CostFunction::linear(4.0).unwrap(), 0.3),
                SubsidyPlan::proportional(0.7).unwrap(),
            ),
            (
                group(CostFunction::power_sum(vec![(3.0, 2.0)]).unwrap(), 0.25),
                SubsidyPlan::flat(0.4).unwrap(),
            ),
        ] {
            let bound = sigma_boundary(&g, &plan);
            if !bound.saturated {
                assert!((ell(&g, bound.sigma, &plan) - g.rule.tau).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn best_response_examples() {
        let g = group(CostFunction::linear(4.0).unwrap(), 0.3);
        let t = Threshold1D::new(0.55);
        let br = best_response_1d(&g, 0.35, t, &SubsidyPlan::None);
        assert!((br.y - 0.55).abs() < 1e-12);
        assert!((br.paid_cost - 0.8).abs() < 1e-12);
        assert!((br.payoff - 0.2).abs() < 1e-12);

        let at = best_response_1d(&g, 0.55, t, &SubsidyPlan::None);
        assert_eq!(at.payoff, 1.0);
        assert_eq!(at.y, 0.55);

        let stay = best_response_1d(&g, 0.2, t, &SubsidyPlan::None);
        assert_eq!(stay.y, 0.2);
        assert_eq!(stay.payoff, 0.0);
    }

    #[test]
    fn best_response_matches_grid_argmax() {
        // Brute-force oracle: scan presented features at a fine step (plus
        // the threshold itself) and compare payoffs.
        let g = group(CostFunction::sqrt_linear(6.0, 2.0).unwrap(), 0.3);
        let plan = SubsidyPlan::proportional(0.8).unwrap();
        for &x in &[0.05, 0.2, 0.41, 0.6, 0.9] {
            for &sigma in &[0.2, 0.45, 0.7, 0.95] {
                let t = Threshold1D::new(sigma);
                let analytic = best_response_1d(&g, x, t, &plan).payoff;
                let mut best = 0.0f64;
                let mut y = x;
                while y <= 1.0 {
                    let raw = g.cost.eval_clamped(y) - g.cost.eval_clamped(x);
                    let label = if y >= sigma { 1.0 } else { 0.0 };
                    best = best.max(label - plan.candidate_borne(raw));
                    y += 1e-4;
                }
                if sigma >= x {
                    let raw = g.cost.eval_clamped(sigma) - g.cost.eval_clamped(x);
                    best = best.max(1.0 - plan.candidate_borne(raw));
                }
                assert!(
                    (analytic - best.max(0.0)).abs() <= 2e-4,
                    "x={x} sigma={sigma}: analytic {analytic} vs grid {best}"
                );
            }
        }
    }

    #[test]
    fn learner_cost_example2_at_sigma_b() {
        let s = example2();
        let pen = learner_cost_1d(&s, Threshold1D::new(0.55), &SubsidyPlan::None).unwrap();
        assert!(pen.fn_b.abs() < 1e-9);
        assert!((pen.fp_a - 0.0305556).abs() < 1e-4);
        assert!((pen.total - 0.0305556).abs() < 1e-4);
        assert!(!pen.dominated);
    }

    #[test]
    fn learner_cost_example3_at_equal_error_threshold() {
        let s = example2();
        let pen = learner_cost_1d(&s, Threshold1D::new(0.64), &SubsidyPlan::None).unwrap();
        assert!((pen.fn_b - 0.03).abs() < 1e-6);
        assert!((pen.fp_a - 0.0155556).abs() < 1e-5);
    }

    #[test]
    fn learner_cost_zero_for_identical_groups() {
        let s = Scenario1D::new(
            group(CostFunction::linear(3.0).unwrap(), 0.35),
            group(CostFunction::linear(3.0).unwrap(), 0.35),
            0.5,
            1.0,
            1.0,
            0.0,
        )
        .unwrap();
        let (t, pen) = equilibrium_threshold(&s, &SubsidyPlan::None).unwrap();
        let bound = sigma_boundary(s.group(GroupId::B), &SubsidyPlan::None);
        assert!((t.sigma - bound.sigma).abs() < 1e-6);
        assert!(pen.total.abs() < 1e-9);
    }

    #[test]
    fn equilibrium_example1_sits_at_sigma_b() {
        let s = example1();
        let (t, pen) = equilibrium_threshold(&s, &SubsidyPlan::None).unwrap();
        assert!((t.sigma - 0.398).abs() < 1e-3);
        assert!(pen.fn_b.abs() < 1e-9);
        // At the lower end only false positives on A remain.
        assert!(pen.fp_a > 0.0);
    }

    #[test]
    fn equilibrium_convex_proportional_sits_at_sigma_a() {
        // Scales keep l_A positive across the undominated interval, where the
        // curvature characterization applies.
        let s = Scenario1D::new(
            group(CostFunction::power_sum(vec![(4.5, 2.0)]).unwrap(), 0.4),
            group(CostFunction::power_sum(vec![(6.0, 2.0)]).unwrap(), 0.3),
            0.5,
            1.0,
            1.0,
            0.0,
        )
        .unwrap();
        let (t, _) = equilibrium_threshold(&s, &SubsidyPlan::None).unwrap();
        let sigma_a = sigma_boundary(s.group(GroupId::A), &SubsidyPlan::None).sigma;
        assert!((t.sigma - sigma_a).abs() < 1e-6);
        assert_eq!(curvature_prediction(&s), CurvaturePrediction::SigmaA);
    }

    #[test]
    fn equilibrium_clamped_convex_pair_saturates_to_one() {
        // Budget 1 exceeds both cost ranges, so both boundaries clamp to 1.
        let s = Scenario1D::new(
            group(CostFunction::power_sum(vec![(0.5, 2.0)]).unwrap(), 0.4),
            group(CostFunction::power_sum(vec![(1.0, 2.0)]).unwrap(), 0.3),
            0.5,
            1.0,
            1.0,
            0.0,
        )
        .unwrap();
        let (lo, hi, saturated) = undominated_interval(&s, &SubsidyPlan::None);
        assert_eq!((lo, hi), (1.0, 1.0));
        assert!(saturated);
        let (t, _) = equilibrium_threshold(&s, &SubsidyPlan::None).unwrap();
        assert_eq!(t.sigma, 1.0);
    }

    #[test]
    fn equilibrium_affine_ties_break_to_sigma_b() {
        let s = Scenario1D::new(
            group(CostFunction::linear(3.0).unwrap(), 0.4),
            group(CostFunction::linear(4.0).unwrap(), 0.3),
            0.5,
            1.0,
            1.0,
            0.0,
        )
        .unwrap();
        let (t, _) = equilibrium_threshold(&s, &SubsidyPlan::None).unwrap();
        assert!((t.sigma - 0.55).abs() < 1e-9);
        assert_eq!(curvature_prediction(&s), CurvaturePrediction::Indifferent);
    }

    #[test]
    fn curvature_prediction_examples() {
        let concave = Scenario1D::new(
            group(CostFunction::sqrt_linear(8.0, 0.0).unwrap(), 0.4),
            group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3),
            0.5,
            1.0,
            1.0,
            0.75,
        )
        .unwrap();
        assert_eq!(curvature_prediction(&concave), CurvaturePrediction::SigmaB);

        let convex = Scenario1D::new(
            group(CostFunction::power_sum(vec![(0.5, 2.0)]).unwrap(), 0.4),
            group(CostFunction::power_sum(vec![(1.0, 2.0)]).unwrap(), 0.3),
            0.5,
            1.0,
            1.0,
            0.75,
        )
        .unwrap();
        assert_eq!(curvature_prediction(&convex), CurvaturePrediction::SigmaA);

        // Example 1's costs are not proportional.
        assert_eq!(
            curvature_prediction(&example1()),
            CurvaturePrediction::NotApplicable
        );

        let unequal_penalties = example2();
        assert_eq!(
            curvature_prediction(&unequal_penalties),
            CurvaturePrediction::NotApplicable
        );
    }

    #[test]
    fn interval_ends_have_single_error_type() {
        let s = example1();
        let (lo, hi, _) = undominated_interval(&s, &SubsidyPlan::None);
        let at_lo = learner_cost_1d(&s, Threshold1D::new(lo), &SubsidyPlan::None).unwrap();
        assert!(at_lo.fn_b.abs() < 1e-9);
        assert!(at_lo.fp_a > 0.0);
        let at_hi = learner_cost_1d(&s, Threshold1D::new(hi), &SubsidyPlan::None).unwrap();
        assert!(at_hi.fp_a.abs() < 1e-9);
        assert!(at_hi.fn_b > 0.0);
    }

    #[test]
    fn reject_all_threshold_penalizes_every_positive() {
        let s = example2();
        let pen = learner_cost_1d(&s, Threshold1D::new(1.5), &SubsidyPlan::None).unwrap();
        // All positives of both groups become false negatives.
        let expect = 2.0 / 3.0 * 0.5 * 0.7 + 2.0 / 3.0 * 0.5 * 0.6;
        assert!((pen.total - expect).abs() < 1e-9);
        assert!(pen.dominated);
    }
}
