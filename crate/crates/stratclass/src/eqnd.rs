//! d-dimensional game with linear costs: manipulation simplices, candidate
//! best responses, per-group perfect classifiers, effective levels and the
//! reduction to one dimension.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{LinearCostVector, SubsidyPlan};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::numeric::MeanVar;
use crate::population::{Group1D, GroupId, GroupND, Scenario1D, ScenarioND, TrueRule1D};
use crate::sim::SimEstimate;

/// A linear classifier on presented features: admit iff `g . y >= g0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub weights: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(weights: Vec<f64>, offset: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::validation("hyperplane needs at least one weight"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::validation(
                "hyperplane weights must be finite and >= 0",
            ));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::validation("hyperplane needs a positive weight"));
        }
        if !offset.is_finite() {
            return Err(Error::validation("hyperplane offset must be finite"));
        }
        Ok(Self { weights, offset })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum()
    }

    pub fn admits(&self, y: &[f64]) -> bool {
        self.score(y) >= self.offset
    }
}

/// Orientation of a manipulation simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplexDirection {
    /// Features reachable from the anchor within the budget.
    Forward,
    /// Origins that could have produced the anchor within the budget.
    Backward,
}

/// Budgeted manipulation simplex anchored at a feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    pub anchor: Vec<f64>,
    pub budget: f64,
    pub costs: LinearCostVector,
    pub direction: SimplexDirection,
}

impl Simplex {
    pub fn new(
        anchor: Vec<f64>,
        budget: f64,
        costs: LinearCostVector,
        direction: SimplexDirection,
    ) -> Result<Self> {
        if anchor.len() != costs.dim() {
            return Err(Error::validation("simplex anchor dimension mismatch"));
        }
        if anchor.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::validation("simplex anchor must lie in the unit box"));
        }
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::validation("simplex budget must be positive"));
        }
        Ok(Self {
            anchor,
            budget,
            costs,
            direction,
        })
    }

    /// Vertex along axis `i` before clamping to the unit box.
    pub fn vertex_unclamped(&self, i: usize) -> Vec<f64> {
        let mut v = self.anchor.clone();
        let step = self.budget / self.costs.coeffs()[i];
        match self.direction {
            SimplexDirection::Forward => v[i] += step,
            SimplexDirection::Backward => v[i] -= step,
        }
        v
    }

    /// Vertex along axis `i`, clamped into `[0, 1]^d`.
    pub fn vertex(&self, i: usize) -> Vec<f64> {
        let mut v = self.vertex_unclamped(i);
        v[i] = v[i].clamp(0.0, 1.0);
        v
    }
}

/// A candidate's optimal play against a hyperplane classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponseND {
    pub y: Vec<f64>,
    /// Raw manipulation cost `c(y) - c(x)`.
    pub paid_cost: f64,
    /// `f(y) - paid_cost / budget`: candidate utility when the budget stems
    /// from a unit-value classification (no subsidy or proportional relief).
    pub payoff: f64,
    /// Axes moved; always a subset of the best cost-ratio directions.
    pub moved_components: Vec<usize>,
}

fn best_ratio_set(h: &Hyperplane, costs: &LinearCostVector) -> (Vec<usize>, f64) {
    let mut max_ratio = 0.0f64;
    for (w, c) in h.weights.iter().zip(costs.coeffs()) {
        max_ratio = max_ratio.max(w / c);
    }
    let set = h
        .weights
        .iter()
        .zip(costs.coeffs())
        .enumerate()
        .filter(|(_, (w, c))| *w / *c >= max_ratio * (1.0 - 1e-12))
        .map(|(i, _)| i)
        .collect();
    (set, max_ratio)
}

/// Candidate best response: stay if already admitted or if the boundary is
/// unaffordable; otherwise move along the best cost-ratio directions exactly
/// onto the boundary. When the canonical direction saturates at the box edge
/// the residual spills onto the remaining best-ratio axes in index order; if
/// they also saturate the candidate stays.
pub fn best_response_nd(
    x: &[f64],
    costs: &LinearCostVector,
    h: &Hyperplane,
    budget: f64,
) -> BestResponseND {
    assert_eq!(x.len(), costs.dim());
    assert_eq!(x.len(), h.dim());
    let stay = |payoff: f64| BestResponseND {
        y: x.to_vec(),
        paid_cost: 0.0,
        payoff,
        moved_components: Vec::new(),
    };
    let score = h.score(x);
    if score >= h.offset {
        return stay(1.0);
    }
    let (k_set, max_ratio) = best_ratio_set(h, costs);
    if max_ratio <= 0.0 || budget <= 0.0 {
        return stay(0.0);
    }
    let mut needed = h.offset - score;
    if needed > budget * max_ratio * (1.0 + 1e-12) {
        return stay(0.0);
    }
    let mut y = x.to_vec();
    let mut remaining = budget;
    let mut paid = 0.0;
    let mut moved = Vec::new();
    for &k in &k_set {
        if needed <= 1e-15 {
            break;
        }
        let w = h.weights[k];
        let c = costs.coeffs()[k];
        if w <= 0.0 || y[k] >= 1.0 {
            continue;
        }
        let gain_budget = remaining * w / c;
        let gain_box = (1.0 - y[k]) * w;
        let gain = needed.min(gain_budget).min(gain_box);
        if gain <= 0.0 {
            continue;
        }
        let step = gain / w;
        y[k] += step;
        paid += c * step;
        remaining -= c * step;
        needed -= gain;
        moved.push(k);
    }
    if needed > 1e-9 {
        // Box clamping blocked the move; conservative fallback is to stay.
        return stay(0.0);
    }
    // Rounding in the coordinate updates can land a hair below the plane;
    // measure the true shortfall and nudge the move onto the boundary.
    let mut shortfall = h.offset - h.score(&y);
    if shortfall > 0.0 {
        for &k in &k_set {
            if h.weights[k] > 0.0 && y[k] < 1.0 + 1e-12 {
                for _ in 0..64 {
                    if shortfall <= 0.0 {
                        break;
                    }
                    let min_step = (y[k].abs().max(1.0)) * f64::EPSILON;
                    let step = (shortfall / h.weights[k]).max(min_step);
                    y[k] += step;
                    paid += costs.coeffs()[k] * step;
                    shortfall = h.offset - h.score(&y);
                }
                if !moved.contains(&k) {
                    moved.push(k);
                }
                break;
            }
        }
    }
    BestResponseND {
        y,
        paid_cost: paid,
        payoff: (1.0 - paid / budget).max(0.0),
        moved_components: moved,
    }
}

/// The strict hyperplane that admits exactly the true positives of a group
/// once they best-respond: direction `w`, offset `tau + budget * w_k / c_k`
/// for the best cost-ratio axis `k`.
pub fn perfect_classifier(g: &GroupND, budget: f64) -> Hyperplane {
    let w = &g.rule.weights;
    let mut k = 0usize;
    let mut best = f64::NEG_INFINITY;
    for (i, (wi, ci)) in w.iter().zip(g.costs.coeffs()).enumerate() {
        let r = wi / ci;
        if r > best + 1e-15 {
            best = r;
            k = i;
        }
    }
    Hyperplane {
        weights: w.clone(),
        offset: g.rule.tau + budget * w[k] / g.costs.coeffs()[k],
    }
}

/// Score level above which a candidate with the given costs can afford a
/// positive classification: `g0 - budget * max_i(g_i / c_i)`.
pub fn effective_level(h: &Hyperplane, costs: &LinearCostVector, budget: f64) -> f64 {
    let (_, max_ratio) = best_ratio_set(h, costs);
    h.offset - budget * max_ratio
}

/// Scalarization of the d-D game along a fixed hyperplane direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    /// Canonical best cost-ratio axis.
    pub k: usize,
    /// Equivalent 1-D linear cost slope `c_k / g_k` in raw score units.
    pub slope: f64,
}

/// Reduce best-response behavior against `h` to one dimension: candidates
/// score `g . x`, and optimal moves cost `slope` per unit of score gained.
pub fn reduce_to_1d(h: &Hyperplane, costs: &LinearCostVector) -> Reduction {
    let (k_set, _) = best_ratio_set(h, costs);
    let k = k_set[0];
    Reduction {
        k,
        slope: costs.coeffs()[k] / h.weights[k],
    }
}

/// Monte Carlo penalty decomposition of a hyperplane classifier.
#[derive(Debug, Clone, Serialize)]
pub struct NdPenalty {
    pub fn_b: SimEstimate,
    pub fp_a: SimEstimate,
    pub fp_b: SimEstimate,
    pub fn_a: SimEstimate,
    /// Learner subsidy outlay conditional on a group-B candidate.
    pub subsidy_money: SimEstimate,
    pub total: SimEstimate,
    /// Fraction of would-be movers blocked by the box clamp; reachability is
    /// counted by effective levels, so a nonzero value flags corner regions
    /// where the conservative fallback deviates.
    pub clamp_blocked_a: f64,
    pub clamp_blocked_b: f64,
    /// Classifier commits false negatives on A or false positives on B.
    pub dominated: bool,
    pub samples_per_group: u64,
}

/// Monte Carlo estimate of the learner penalty in d dimensions.
///
/// Reachability follows the effective-level characterization; group B plays
/// under the plan's budget, group A unsubsidized. Sampling is stratified per
/// group with a seedable generator.
pub fn learner_cost_nd(
    s: &ScenarioND,
    h: &Hyperplane,
    plan: &SubsidyPlan,
    mc_samples: u64,
    seed: u64,
) -> Result<NdPenalty> {
    if mc_samples == 0 {
        return Err(Error::domain("mc_samples must be positive"));
    }
    if h.dim() != s.dim() {
        return Err(Error::domain("hyperplane dimension mismatch"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = mc_samples;

    let mut fn_b = MeanVar::default();
    let mut fp_b = MeanVar::default();
    let mut money = MeanVar::default();
    let mut fn_a = MeanVar::default();
    let mut fp_a = MeanVar::default();
    let mut blocked = [0u64; 2];
    let mut movers = [0u64; 2];

    for (gi, group) in [GroupId::B, GroupId::A].into_iter().enumerate() {
        let g = s.group(group);
        let budget = match group {
            GroupId::A => 1.0,
            GroupId::B => plan.budget(),
        };
        let level = effective_level(h, &g.costs, budget);
        let red = reduce_to_1d(h, &g.costs);
        let mut x = vec![0.0f64; s.dim()];
        for _ in 0..n {
            for (xi, marginal) in x.iter_mut().zip(&g.marginals) {
                *xi = marginal.sample(&mut rng);
            }
            let score = h.score(&x);
            let positive = g.rule.label(&x);
            let reach = score >= level;
            let admitted = reach;
            let false_neg = positive && !admitted;
            let false_pos = !positive && admitted;
            let manipulates = reach && score < h.offset;
            if manipulates {
                movers[gi] += 1;
                let br = best_response_nd(&x, &g.costs, h, budget);
                if br.moved_components.is_empty() && !h.admits(&x) {
                    blocked[gi] += 1;
                }
            }
            match group {
                GroupId::B => {
                    fn_b.push(if false_neg { 1.0 } else { 0.0 });
                    fp_b.push(if false_pos { 1.0 } else { 0.0 });
                    let payout = if manipulates {
                        plan.learner_share(red.slope * (h.offset - score))
                    } else {
                        0.0
                    };
                    money.push(payout);
                }
                GroupId::A => {
                    fn_a.push(if false_neg { 1.0 } else { 0.0 });
                    fp_a.push(if false_pos { 1.0 } else { 0.0 });
                }
            }
        }
    }

    let (p_a, p_b) = (s.proportion(GroupId::A), s.proportion(GroupId::B));
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
    Ok(NdPenalty {
        fn_b: fn_b_e,
        fp_a: fp_a_e,
        fp_b: fp_b_e,
        fn_a: fn_a_e,
        subsidy_money: money_e,
        total,
        clamp_blocked_b: blocked[0] as f64 / movers[0].max(1) as f64,
        clamp_blocked_a: blocked[1] as f64 / movers[1].max(1) as f64,
        dominated: fn_a.mean() > 0.0 || fp_b.mean() > 0.0,
        samples_per_group: n,
    })
}

/// Outcome of the dominance-repair diagnostic: does admitting through the
/// group-A perfect classifier as well strictly improve the base classifier?
#[derive(Debug, Clone, Serialize)]
pub struct RepairDiagnostic {
    pub base_total: SimEstimate,
    pub repaired_total: SimEstimate,
    pub strictly_improves: bool,
}

/// Evaluate the union of `h` with the group-A perfect classifier. A dominated
/// classifier (one committing false negatives on A) is strictly improved by
/// the union; an undominated one is not.
pub fn dominance_repair(
    s: &ScenarioND,
    h: &Hyperplane,
    mc_samples: u64,
    seed: u64,
) -> Result<RepairDiagnostic> {
    if mc_samples == 0 {
        return Err(Error::domain("mc_samples must be positive"));
    }
    let repair = perfect_classifier(s.group(GroupId::A), 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = mc_samples;
    let mut base_parts = Vec::new();
    let mut rep_parts = Vec::new();
    for group in [GroupId::B, GroupId::A] {
        let g = s.group(group);
        let level_h = effective_level(h, &g.costs, 1.0);
        let level_r = effective_level(&repair, &g.costs, 1.0);
        let weight_fn = s.c_fn() * s.proportion(group);
        let weight_fp = s.c_fp() * s.proportion(group);
        let mut base_acc = MeanVar::default();
        let mut rep_acc = MeanVar::default();
        let mut x = vec![0.0f64; s.dim()];
        for _ in 0..n {
            for (xi, marginal) in x.iter_mut().zip(&g.marginals) {
                *xi = marginal.sample(&mut rng);
            }
            let positive = g.rule.label(&x);
            let reach_h = h.score(&x) >= level_h;
            let reach_union = reach_h || repair.score(&x) >= level_r;
            let err = |admitted: bool| {
                if positive && !admitted {
                    weight_fn
                } else if !positive && admitted {
                    weight_fp
                } else {
                    0.0
                }
            };
            base_acc.push(err(reach_h));
            rep_acc.push(err(reach_union));
        }
        base_parts.push(base_acc);
        rep_parts.push(rep_acc);
    }
    let combine = |parts: &[MeanVar]| SimEstimate {
        value: parts.iter().map(|p| p.mean()).sum(),
        se: parts.iter().map(|p| p.se().powi(2)).sum::<f64>().sqrt(),
    };
    let base_total = combine(&base_parts);
    let repaired_total = combine(&rep_parts);
    Ok(RepairDiagnostic {
        base_total,
        repaired_total,
        strictly_improves: repaired_total.value + 1e-12 < base_total.value,
    })
}

/// Equilibrium hyperplane found by sweeping offsets along a direction.
#[derive(Debug, Clone, Serialize)]
pub struct NdEquilibrium {
    pub hyperplane: Hyperplane,
    pub penalty: NdPenalty,
}

/// Sweep classifier offsets along the shared true-rule direction between the
/// two per-group perfect classifiers, scoring each by Monte Carlo, then
/// re-evaluate the best offset at full sample count.
pub fn equilibrium_offset_sweep(
    s: &ScenarioND,
    offsets: usize,
    coarse_samples: u64,
    final_samples: u64,
    seed: u64,
) -> Result<NdEquilibrium> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    if a.rule.weights != b.rule.weights {
        return Err(Error::domain(
            "offset sweep needs a shared true-rule direction",
        ));
    }
    let direction = a.rule.weights.clone();
    let lo = perfect_classifier(b, 1.0).offset;
    let hi = perfect_classifier(a, 1.0).offset;
    let grid = crate::numeric::linspace(lo, hi, offsets.max(2));
    let mut best = (f64::INFINITY, lo);
    for &g0 in &grid {
        let h = Hyperplane::new(direction.clone(), g0)?;
        let pen = learner_cost_nd(s, &h, &SubsidyPlan::None, coarse_samples, seed)?;
        if pen.total.value < best.0 - 1e-12 {
            best = (pen.total.value, g0);
        }
    }
    let hyperplane = Hyperplane::new(direction, best.1)?;
    let penalty = learner_cost_nd(s, &hyperplane, &SubsidyPlan::None, final_samples, seed)?;
    Ok(NdEquilibrium {
        hyperplane,
        penalty,
    })
}

/// Exact 1-D scalarization of a shared-direction scenario.
///
/// Supported for `d <= 2` with uniform marginals, where the score density is
/// piecewise linear and can be carried exactly; higher dimensions go through
/// [`learner_cost_nd`]. Scores are normalized by `G = g . 1` so the reduced
/// game lives on `[0, 1]`: thresholds map as `sigma' = g0 / G` and the
/// reduced linear cost slope is `G * c_k / g_k`.
pub fn reduce_scenario_to_1d(s: &ScenarioND, h_direction: &[f64]) -> Result<Scenario1D> {
    use crate::cost::CostFunction;
    let d = s.dim();
    if h_direction.len() != d {
        return Err(Error::domain("direction dimension mismatch"));
    }
    for group in [GroupId::A, GroupId::B] {
        let g = s.group(group);
        if g.rule.weights != h_direction {
            return Err(Error::domain(
                "exact reduction needs the hyperplane direction to match both true rules",
            ));
        }
        if g.marginals.iter().any(|m| *m != Distribution::Uniform01) {
            return Err(Error::domain("exact reduction needs uniform marginals"));
        }
    }
    if d > 2 {
        return Err(Error::domain(
            "exact reduction supported for d <= 2; use the Monte Carlo evaluator",
        ));
    }
    let total: f64 = h_direction.iter().sum();
    if total <= 0.0 {
        return Err(Error::domain("direction must have positive mass"));
    }
    let score_density = if d == 1 {
        Distribution::Uniform01
    } else {
        let (g1, g2) = (h_direction[0], h_direction[1]);
        if g1 <= 0.0 || g2 <= 0.0 {
            // One inactive axis degenerates to the 1-D case.
            Distribution::Uniform01
        } else {
            let m = g1.min(g2);
            let big = g1.max(g2);
            let peak = total / big;
            if (big - m).abs() < 1e-12 {
                Distribution::piecewise_linear(vec![(0.0, 0.0), (0.5, peak), (1.0, 0.0)])?
            } else {
                Distribution::piecewise_linear(vec![
                    (0.0, 0.0),
                    (m / total, peak),
                    (big / total, peak),
                    (1.0, 0.0),
                ])?
            }
        }
    };
    let build = |group: GroupId| -> Result<Group1D> {
        let g = s.group(group);
        let plane = Hyperplane::new(h_direction.to_vec(), 1.0)?;
        let red = reduce_to_1d(&plane, &g.costs);
        Ok(Group1D {
            distribution: score_density.clone(),
            cost: CostFunction::linear(red.slope * total)?,
            rule: TrueRule1D::new((g.rule.tau / total).clamp(0.0, 1.0))?,
        })
    };
    Scenario1D::new(
        build(GroupId::A)?,
        build(GroupId::B)?,
        s.proportion(GroupId::A),
        s.c_fp(),
        s.c_fn(),
        s.lambda(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::TrueRuleND;

    fn costs(v: &[f64]) -> LinearCostVector {
        LinearCostVector::new(v.to_vec()).unwrap()
    }

    fn plane(w: &[f64], g0: f64) -> Hyperplane {
        Hyperplane::new(w.to_vec(), g0).unwrap()
    }

    #[test]
    fn best_response_moves_along_cheapest_direction() {
        let br = best_response_nd(
            &[0.2, 0.3],
            &costs(&[1.0, 2.0]),
            &plane(&[1.0, 1.0], 1.0),
            1.0,
        );
        assert_eq!(br.y, vec![0.7, 0.3]);
        assert!((br.paid_cost - 0.5).abs() < 1e-12);
        assert!((br.payoff - 0.5).abs() < 1e-12);
        assert_eq!(br.moved_components, vec![0]);
    }

    #[test]
    fn best_response_stays_when_admitted() {
        let br = best_response_nd(
            &[0.8, 0.9],
            &costs(&[1.0, 1.0]),
            &plane(&[1.0, 1.0], 1.0),
            1.0,
        );
        assert_eq!(br.payoff, 1.0);
        assert_eq!(br.paid_cost, 0.0);
        assert!(br.moved_components.is_empty());
    }

    #[test]
    fn best_response_stays_when_unaffordable() {
        let br = best_response_nd(
            &[0.0, 0.0],
            &costs(&[1.0, 1.0]),
            &plane(&[1.0, 1.0], 2.0),
            1.0,
        );
        assert_eq!(br.y, vec![0.0, 0.0]);
        assert_eq!(br.payoff, 0.0);
    }

    #[test]
    fn best_response_spills_over_tied_directions() {
        // Both axes share the best ratio; the first saturates at the box.
        let br = best_response_nd(
            &[0.9, 0.1],
            &costs(&[1.0, 1.0]),
            &plane(&[1.0, 1.0], 1.3),
            1.0,
        );
        assert!((br.y[0] - 1.0).abs() < 1e-12);
        assert!((br.y[1] - 0.3).abs() < 1e-12);
        assert_eq!(br.moved_components, vec![0, 1]);
        assert!((br.paid_cost - 0.3).abs() < 1e-12);
    }

    #[test]
    fn best_response_conservative_fallback_stays() {
        // Only axis 0 has the best ratio and it saturates short of the plane.
        let br = best_response_nd(
            &[0.95, 0.0],
            &costs(&[1.0, 4.0]),
            &plane(&[1.0, 1.0], 1.1),
            1.0,
        );
        assert_eq!(br.y, vec![0.95, 0.0]);
        assert_eq!(br.payoff, 0.0);
    }

    #[test]
    fn perfect_classifier_construction() {
        let g = GroupND {
            marginals: vec![Distribution::Uniform01; 2],
            costs: costs(&[2.0, 4.0]),
            rule: TrueRuleND::new(vec![1.0, 1.0], 1.0).unwrap(),
        };
        let h = perfect_classifier(&g, 1.0);
        assert_eq!(h.weights, vec![1.0, 1.0]);
        assert!((h.offset - 1.5).abs() < 1e-12);

        // One effective dimension embeds the 1-D boundary threshold.
        let g1 = GroupND {
            marginals: vec![Distribution::Uniform01; 2],
            costs: costs(&[3.0, 3.0]),
            rule: TrueRuleND::new(vec![1.0, 0.0], 0.4).unwrap(),
        };
        let h1 = perfect_classifier(&g1, 1.0);
        assert!((h1.offset - (0.4 + 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn effective_level_examples() {
        assert!(
            (effective_level(&plane(&[1.0, 1.0], 1.5), &costs(&[2.0, 4.0]), 1.0) - 1.0).abs()
                < 1e-12
        );
        assert!(
            (effective_level(&plane(&[1.0, 1.0], 1.5), &costs(&[4.0, 4.0]), 1.0) - 1.25).abs()
                < 1e-12
        );
        assert!(
            (effective_level(&plane(&[1.0, 1.0], 1.5), &costs(&[4.0, 4.0]), 0.0) - 1.5).abs()
                < 1e-12
        );
    }

    #[test]
    fn reduce_to_1d_examples() {
        assert!(
            (reduce_to_1d(&plane(&[1.0, 1.0], 1.0), &costs(&[2.0, 4.0])).slope - 2.0).abs() < 1e-12
        );
        assert!((reduce_to_1d(&plane(&[1.0], 1.0), &costs(&[3.5])).slope - 3.5).abs() < 1e-12);
        let r = reduce_to_1d(&plane(&[2.0, 1.0], 1.0), &costs(&[4.0, 4.0]));
        assert_eq!(r.k, 0);
        assert!((r.slope - 2.0).abs() < 1e-12);
    }

    #[test]
    fn paid_cost_equals_slope_times_score_gain() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = plane(&[1.0, 1.0], 1.0);
        let cv = costs(&[2.0, 4.0]);
        let red = reduce_to_1d(&h, &cv);
        for _ in 0..1000 {
            let x = [rng.random::<f64>() * 0.5, rng.random::<f64>() * 0.5];
            let br = best_response_nd(&x, &cv, &h, 1.0);
            let gain = h.score(&br.y) - h.score(&x);
            assert!((br.paid_cost - red.slope * gain).abs() < 1e-10);
        }
    }

    #[test]
    fn simplex_vertices() {
        let s = Simplex::new(
            vec![0.5, 0.5],
            1.0,
            costs(&[2.0, 0.8]),
            SimplexDirection::Forward,
        )
        .unwrap();
        assert_eq!(s.vertex_unclamped(0), vec![1.0, 0.5]);
        assert_eq!(s.vertex_unclamped(1), vec![0.5, 1.75]);
        assert_eq!(s.vertex(1), vec![0.5, 1.0]);

        let b = Simplex::new(
            vec![0.5, 0.5],
            1.0,
            costs(&[2.0, 0.8]),
            SimplexDirection::Backward,
        )
        .unwrap();
        assert_eq!(b.vertex_unclamped(0), vec![0.0, 0.5]);
        assert_eq!(b.vertex(1), vec![0.5, 0.0]);
    }

    fn two_group_scenario() -> ScenarioND {
        let a = GroupND {
            marginals: vec![Distribution::Uniform01; 2],
            costs: costs(&[2.0, 4.0]),
            rule: TrueRuleND::new(vec![1.0, 1.0], 0.8).unwrap(),
        };
        let b = GroupND {
            marginals: vec![Distribution::Uniform01; 2],
            costs: costs(&[3.0, 6.0]),
            rule: TrueRuleND::new(vec![1.0, 1.0], 0.6).unwrap(),
        };
        ScenarioND::new(a, b, 0.5, 1.0, 1.0, 0.75).unwrap()
    }

    #[test]
    fn perfect_classifier_has_no_errors_on_own_group_in_mc() {
        let s = two_group_scenario();
        // Population consisting only of group A: p_a = 1.
        let solo = ScenarioND::new(
            s.group(GroupId::A).clone(),
            s.group(GroupId::A).clone(),
            1.0,
            1.0,
            1.0,
            0.0,
        )
        .unwrap();
        let h = perfect_classifier(solo.group(GroupId::A), 1.0);
        let pen = learner_cost_nd(&solo, &h, &SubsidyPlan::None, 20_000, 3).unwrap();
        assert!(pen.fn_a.value.abs() < 1e-12);
        assert!(pen.fp_a.value.abs() < 1e-12);
    }

    #[test]
    fn reject_all_hyperplane_is_dominated() {
        let s = two_group_scenario();
        let h = plane(&[1.0, 1.0], 50.0);
        let pen = learner_cost_nd(&s, &h, &SubsidyPlan::None, 20_000, 5).unwrap();
        assert!(pen.dominated);
        assert!(pen.fp_a.value.abs() < 1e-12 && pen.fp_b.value.abs() < 1e-12);
        assert!(pen.fn_a.value > 0.0 && pen.fn_b.value > 0.0);
    }

    #[test]
    fn clamp_blocked_movers_are_reported() {
        // Steep secondary costs leave a single best direction; movers near
        // its box edge cannot reach the plane and the fallback stays.
        let a = GroupND {
            marginals: vec![Distribution::Uniform01; 2],
            costs: costs(&[1.0, 4.0]),
            rule: TrueRuleND::new(vec![1.0, 1.0], 0.9).unwrap(),
        };
        let b = GroupND {
            marginals: vec![Distribution::Uniform01; 2],
            costs: costs(&[1.5, 6.0]),
            rule: TrueRuleND::new(vec![1.0, 1.0], 0.7).unwrap(),
        };
        let s = ScenarioND::new(a, b, 0.5, 1.0, 1.0, 0.0).unwrap();
        let h = plane(&[1.0, 1.0], 1.6);
        let pen = learner_cost_nd(&s, &h, &SubsidyPlan::None, 50_000, 21).unwrap();
        assert!(pen.clamp_blocked_a > 0.0);
        assert!(pen.clamp_blocked_b > 0.0);
        assert!(pen.clamp_blocked_a < 1.0);
    }

    #[test]
    fn repair_improves_a_classifier_with_false_negatives_on_a() {
        let s = two_group_scenario();
        // Too strict: commits false negatives on A.
        let strict = plane(&[1.0, 1.0], 2.6);
        let diag = dominance_repair(&s, &strict, 30_000, 9).unwrap();
        assert!(diag.strictly_improves);
        // The A-perfect classifier itself is not improved by the union.
        let h_a = perfect_classifier(s.group(GroupId::A), 1.0);
        let diag2 = dominance_repair(&s, &h_a, 30_000, 9).unwrap();
        assert!(!diag2.strictly_improves);
    }

    #[test]
    fn claim2_offset_ordering_under_shared_direction() {
        let s = two_group_scenario();
        let ha = perfect_classifier(s.group(GroupId::A), 1.0);
        let hb = perfect_classifier(s.group(GroupId::B), 1.0);
        // Shared direction plus the per-component cost ordering push the
        // A boundary at least as high whenever tau_a >= tau_b.
        assert!(ha.offset >= hb.offset);
    }
}
