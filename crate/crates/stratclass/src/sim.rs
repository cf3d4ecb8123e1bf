//! Monte Carlo candidate simulation for the 1-D game: an independent check
//! on the analytic penalty and welfare integrals.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost::SubsidyPlan;
use crate::eq1d::{best_response_1d, Threshold1D};
use crate::numeric::MeanVar;
use crate::population::{GroupId, Scenario1D};

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEstimate {
    pub value: f64,
    pub se: f64,
}

impl From<MeanVar> for SimEstimate {
    fn from(acc: MeanVar) -> Self {
        SimEstimate {
            value: acc.mean(),
            se: acc.se(),
        }
    }
}

/// Simulated penalty decomposition and welfares at a regime point.
#[derive(Debug, Clone, Serialize)]
pub struct SimulatedPenalty {
    pub fn_b: SimEstimate,
    pub fp_a: SimEstimate,
    pub fp_b: SimEstimate,
    pub fn_a: SimEstimate,
    /// Learner subsidy outlay conditional on a group-B candidate.
    pub subsidy_money: SimEstimate,
    /// Weighted total matching the analytic `LearnerPenalty::total`.
    pub total: SimEstimate,
    pub welfare_a: SimEstimate,
    pub welfare_b: SimEstimate,
    pub samples_per_group: u64,
}

/// Simulate `samples_per_group` best-responding candidates from each group.
///
/// Candidates draw features from their group distribution, best-respond to
/// the published threshold (group B under the plan, group A unsubsidized),
/// and the learner's errors, payouts and the candidates' payoffs are tallied.
pub fn simulate_penalty_1d(
    s: &Scenario1D,
    t: Threshold1D,
    plan: &SubsidyPlan,
    samples_per_group: u64,
    seed: u64,
) -> SimulatedPenalty {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples_per_group.max(1);

    let mut fn_b = MeanVar::default();
    let mut fp_b = MeanVar::default();
    let mut money = MeanVar::default();
    let mut welf_b = MeanVar::default();
    let mut fn_a = MeanVar::default();
    let mut fp_a = MeanVar::default();
    let mut welf_a = MeanVar::default();

    let (p_a, p_b) = (s.proportion(GroupId::A), s.proportion(GroupId::B));

    for group in [GroupId::B, GroupId::A] {
        let g = s.group(group);
        let eff = match group {
            GroupId::A => SubsidyPlan::None,
            GroupId::B => *plan,
        };
        for _ in 0..n {
            let x = g.distribution.sample(&mut rng);
            let br = best_response_1d(g, x, t, &eff);
            let admitted = !t.rejects_all() && br.y >= t.sigma.max(0.0);
            let positive = g.rule.label(x);
            let false_neg = positive && !admitted;
            let false_pos = !positive && admitted;
            match group {
                GroupId::B => {
                    fn_b.push(if false_neg { 1.0 } else { 0.0 });
                    fp_b.push(if false_pos { 1.0 } else { 0.0 });
                    welf_b.push(br.payoff);
                    let payout = if admitted && br.y > x + 1e-15 {
                        let raw = g.cost.eval_clamped(br.y) - g.cost.eval_clamped(x);
                        eff.learner_share(raw)
                    } else {
                        0.0
                    };
                    money.push(payout);
                }
                GroupId::A => {
                    fn_a.push(if false_neg { 1.0 } else { 0.0 });
                    fp_a.push(if false_pos { 1.0 } else { 0.0 });
                    welf_a.push(br.payoff);
                }
            }
        }
    }

    let scale = |acc: &MeanVar, w: f64| SimEstimate {
        value: w * acc.mean(),
        se: w * acc.se(),
    };
    let fn_b_e = scale(&fn_b, s.c_fn() * p_b);
    let fp_b_e = scale(&fp_b, s.c_fp() * p_b);
    let fn_a_e = scale(&fn_a, s.c_fn() * p_a);
    let fp_a_e = scale(&fp_a, s.c_fp() * p_a);
    let money_e = SimEstimate::from(money);
    let lambda_w = s.lambda() * p_b;
    let total = SimEstimate {
        value: fn_b_e.value + fp_b_e.value + fn_a_e.value + fp_a_e.value + lambda_w * money_e.value,
        se: (fn_b_e.se.powi(2)
            + fp_b_e.se.powi(2)
            + fn_a_e.se.powi(2)
            + fp_a_e.se.powi(2)
            + (lambda_w * money_e.se).powi(2))
        .sqrt(),
    };

    SimulatedPenalty {
        fn_b: fn_b_e,
        fp_a: fp_a_e,
        fp_b: fp_b_e,
        fn_a: fn_a_e,
        subsidy_money: money_e,
        total,
        welfare_a: SimEstimate::from(welf_a),
        welfare_b: SimEstimate::from(welf_b),
        samples_per_group: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostFunction;
    use crate::dist::Distribution;
    use crate::eq1d::learner_cost_1d;
    use crate::population::{Group1D, Scenario1D, TrueRule1D};
    use crate::subsidy::group_welfare;

    fn example2() -> Scenario1D {
        let mk = |slope: f64, tau: f64| Group1D {
            distribution: Distribution::uniform(),
            cost: CostFunction::linear(slope).unwrap(),
            rule: TrueRule1D::new(tau).unwrap(),
        };
        Scenario1D::new(mk(3.0, 0.4), mk(4.0, 0.3), 0.5, 1.0 / 3.0, 2.0 / 3.0, 0.75).unwrap()
    }

    #[test]
    fn simulation_agrees_with_analytic_penalty() {
        let s = example2();
        let t = Threshold1D::new(0.6);
        let plan = SubsidyPlan::proportional(0.9).unwrap();
        let sim = simulate_penalty_1d(&s, t, &plan, 200_000, 7);
        let pen = learner_cost_1d(&s, t, &plan).unwrap();
        let within =
            |est: SimEstimate, truth: f64| (est.value - truth).abs() <= 3.0 * est.se.max(1e-9);
        assert!(within(sim.fn_b, pen.fn_b), "{:?} vs {}", sim.fn_b, pen.fn_b);
        assert!(within(sim.fp_a, pen.fp_a));
        assert!(within(sim.subsidy_money, pen.subsidy_money));
        assert!(within(sim.total, pen.total));

        let wa = group_welfare(&s, t, &plan, crate::population::GroupId::A).unwrap();
        let wb = group_welfare(&s, t, &plan, crate::population::GroupId::B).unwrap();
        assert!(within(sim.welfare_a, wa));
        assert!(within(sim.welfare_b, wb));
    }

    #[test]
    fn simulation_is_seed_deterministic() {
        let s = example2();
        let t = Threshold1D::new(0.55);
        let a = simulate_penalty_1d(&s, t, &SubsidyPlan::None, 10_000, 42);
        let b = simulate_penalty_1d(&s, t, &SubsidyPlan::None, 10_000, 42);
        assert_eq!(a.total.value, b.total.value);
        assert_eq!(a.welfare_b.value, b.welfare_b.value);
    }
}
