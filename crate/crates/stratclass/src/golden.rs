//! Golden reproduction of the published worked examples: scenario builders,
//! a row-by-row comparison table and the pass/fail gate.

use serde::Serialize;

use crate::cost::{CostFunction, SubsidyPlan};
use crate::dist::Distribution;
use crate::eq1d::{
    curvature_prediction, ell, equilibrium_threshold, learner_cost_1d, sigma_boundary,
    CurvaturePrediction, Threshold1D,
};
use crate::error::Result;
use crate::population::{Group1D, GroupId, Scenario1D, TrueRule1D};
use crate::report::{fmt_f64, write_csv, ReportBundle};
use crate::subsidy::{
    compare_regimes, equalize_errors_threshold, error_mass_penalty, error_mass_penalty_nonmanip,
    optimize_subsidy, welfare_nonmanipulation, CompareOptions, LearnerMode, SubsidyFamily,
};

fn uniform_group(cost: CostFunction, tau: f64) -> Group1D {
    Group1D {
        distribution: Distribution::uniform(),
        cost,
        rule: TrueRule1D::new(tau).unwrap(),
    }
}

/// Concave-costs worked example: `c_A = 8 sqrt(x) + x`, `c_B = 12 sqrt(x)`,
/// thresholds 0.4 / 0.3, uniform features, symmetric unit penalties,
/// `lambda = 3/4`.
pub fn scenario_example1() -> Scenario1D {
    Scenario1D::new(
        uniform_group(CostFunction::sqrt_linear(8.0, 1.0).unwrap(), 0.4),
        uniform_group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3),
        0.5,
        1.0,
        1.0,
        0.75,
    )
    .expect("example 1 scenario is valid")
}

/// Linear-costs worked example: `c_A = 3x`, `c_B = 4x`, thresholds 0.4 / 0.3,
/// false negatives penalized twice as much as false positives,
/// `lambda = 3/4`. The equal-errors example reuses this scenario.
pub fn scenario_example2() -> Scenario1D {
    Scenario1D::new(
        uniform_group(CostFunction::linear(3.0).unwrap(), 0.4),
        uniform_group(CostFunction::linear(4.0).unwrap(), 0.3),
        0.5,
        1.0 / 3.0,
        2.0 / 3.0,
        0.75,
    )
    .expect("example 2 scenario is valid")
}

/// One comparison row of the golden table.
#[derive(Debug, Clone, Serialize)]
pub struct GoldenRow {
    pub name: String,
    pub paper: f64,
    pub computed: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Excluded from the exit gate; the note explains why.
    pub documented_discrepancy: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub rows: Vec<GoldenRow>,
    /// True when every non-documented row passed.
    pub all_required_passed: bool,
}

fn row(name: &str, paper: f64, computed: f64, tolerance: f64) -> GoldenRow {
    let delta = (computed - paper).abs();
    GoldenRow {
        name: name.to_string(),
        paper,
        computed,
        delta,
        tolerance,
        passed: delta <= tolerance,
        documented_discrepancy: false,
        note: String::new(),
    }
}

fn bool_row(name: &str, holds: bool, note: &str) -> GoldenRow {
    GoldenRow {
        name: name.to_string(),
        paper: 1.0,
        computed: if holds { 1.0 } else { 0.0 },
        delta: if holds { 0.0 } else { 1.0 },
        tolerance: 0.5,
        passed: holds,
        documented_discrepancy: false,
        note: note.to_string(),
    }
}

fn documented(mut r: GoldenRow, note: &str) -> GoldenRow {
    r.documented_discrepancy = true;
    r.note = note.to_string();
    r
}

/// Recompute every quantity the worked examples print and compare against
/// the published values. Tolerances: 1e-3 for three-decimal prints, 2e-3 for
/// values printed with `~`, 5e-3 for two-decimal prints.
pub fn reproduce_paper() -> Result<GoldenReport> {
    let mut rows = Vec::new();

    // ----- Example 1: concave costs -----
    let s1 = scenario_example1();
    let b = s1.group(GroupId::B);
    let a = s1.group(GroupId::A);
    let sigma_b = sigma_boundary(b, &SubsidyPlan::None).sigma;
    let sigma_a = sigma_boundary(a, &SubsidyPlan::None).sigma;
    rows.push(row("example1.sigma_b", 0.398, sigma_b, 1e-3));
    rows.push(row("example1.sigma_a", 0.546, sigma_a, 1e-3));

    let (t1, _) = equilibrium_threshold(&s1, &SubsidyPlan::None)?;
    rows.push(row(
        "example1.sigma_star_manipulation",
        0.398,
        t1.sigma,
        1e-3,
    ));
    rows.push(row(
        "example1.fp_interval_lower",
        0.272,
        ell(a, t1.sigma, &SubsidyPlan::None),
        1e-3,
    ));

    let eq1 = optimize_subsidy(&s1, SubsidyFamily::Proportional)?;
    let beta1 = match eq1.plan {
        SubsidyPlan::Proportional { beta } => beta,
        _ => f64::NAN,
    };
    rows.push(row(
        "example1.subsidy_sigma_star",
        0.546,
        eq1.threshold.sigma,
        1e-3,
    ));
    rows.push(row("example1.subsidy_beta_star", 0.558, beta1, 2e-3));
    rows.push(row(
        "example1.subsidy_fn_interval_upper",
        0.348,
        ell(b, eq1.threshold.sigma, &eq1.plan),
        1e-3,
    ));

    let cmp1 = compare_regimes(
        &s1,
        &CompareOptions {
            include_flat: false,
            ..Default::default()
        },
    )?;
    rows.push(bool_row(
        "example1.subsidy_paradox_flag",
        cmp1.subsidy_paradox,
        "no candidate improves under the subsidy equilibrium; some in both groups strictly decline",
    ));

    // ----- Example 2: linear costs -----
    let s2 = scenario_example2();
    let (t2, _) = equilibrium_threshold(&s2, &SubsidyPlan::None)?;
    rows.push(row(
        "example2.sigma_star_manipulation",
        0.550,
        t2.sigma,
        1e-3,
    ));
    rows.push(row(
        "example2.fp_interval_lower",
        0.217,
        ell(s2.group(GroupId::A), t2.sigma, &SubsidyPlan::None),
        1e-3,
    ));

    let eq2 = optimize_subsidy(&s2, SubsidyFamily::Proportional)?;
    let beta2 = match eq2.plan {
        SubsidyPlan::Proportional { beta } => beta,
        _ => f64::NAN,
    };
    let published_note = "published subsidy point (sigma = 0.5515, beta = 0.994) carries a \
                          strictly higher penalty than beta = 1 under the stated objective; \
                          the solver returns the true argmin";
    rows.push(documented(
        row(
            "example2.subsidy_sigma_star",
            0.5515,
            eq2.threshold.sigma,
            1e-3,
        ),
        published_note,
    ));
    rows.push(documented(
        row("example2.subsidy_beta_star", 0.994, beta2, 2e-3),
        published_note,
    ));
    rows.push(documented(
        row(
            "example2.subsidy_fp_interval_lower",
            0.2185,
            ell(
                s2.group(GroupId::A),
                eq2.threshold.sigma,
                &SubsidyPlan::None,
            ),
            1.5e-3,
        ),
        published_note,
    ));

    // ----- Example 3: equal-error learner on the linear scenario -----
    let sigma_a3 = sigma_boundary(s2.group(GroupId::A), &SubsidyPlan::None).sigma;
    rows.push(row("example3.sigma_a", 0.733, sigma_a3, 1e-3));

    let t3 = equalize_errors_threshold(&s2, &SubsidyPlan::None)?;
    let mut r3 = row("example3.sigma_one_equal_errors", 0.64, t3.sigma, 5e-3);
    r3.note = "paper prints two decimals; the exact equal-error threshold is 77/120".to_string();
    rows.push(r3);

    rows.push(row(
        "example3.ell_a_at_sigma_one",
        0.3067,
        ell(s2.group(GroupId::A), 0.64, &SubsidyPlan::None),
        1e-3,
    ));
    rows.push(row(
        "example3.ell_b_at_sigma_one",
        0.390,
        ell(s2.group(GroupId::B), 0.64, &SubsidyPlan::None),
        1e-3,
    ));

    let beta3 = 0.806;
    let plan3 = SubsidyPlan::proportional(beta3)?;
    rows.push(row(
        "example3.subsidy_fn_upper_at_beta_0.806",
        0.423,
        ell(s2.group(GroupId::B), sigma_a3, &plan3),
        1e-3,
    ));

    let nonmanip = welfare_nonmanipulation(&s2, LearnerMode::EqualizeErrors)?;
    rows.push(row(
        "example3.tau_star_nonmanip",
        0.350,
        nonmanip.threshold.sigma,
        1e-3,
    ));

    // Regime comparison at the published points.
    let cmp3 = compare_regimes(
        &s2,
        &CompareOptions {
            mode: LearnerMode::EqualizeErrors,
            pinned_manipulation: Some(0.64),
            pinned_proportional: Some((sigma_a3, beta3)),
            include_flat: false,
            ..Default::default()
        },
    )?;
    let (nm, manip, prop) = (&cmp3.reports[0], &cmp3.reports[1], &cmp3.reports[2]);
    rows.push(bool_row(
        "example3.welfare_ordering_group_a",
        nm.welfare_a > manip.welfare_a && manip.welfare_a > prop.welfare_a,
        "W_A: no-manipulation > manipulation > subsidy",
    ));
    rows.push(bool_row(
        "example3.welfare_ordering_group_b",
        nm.welfare_b > manip.welfare_b && manip.welfare_b > prop.welfare_b,
        "W_B: no-manipulation > manipulation > subsidy",
    ));

    // The printed learner totals follow unweighted error-mass accounting.
    let c_nm = error_mass_penalty_nonmanip(&s2, nonmanip.threshold.sigma);
    let c_manip = error_mass_penalty(&s2, Threshold1D::new(0.64), &SubsidyPlan::None)?;
    let c_prop = error_mass_penalty(&s2, Threshold1D::new(sigma_a3), &plan3)?;
    rows.push(bool_row(
        "example3.learner_utility_ordering",
        c_nm < c_prop && c_prop < c_manip,
        "1 - C: no-manipulation > subsidy > manipulation under error-mass accounting",
    ));
    rows.push(row("example3.mass_penalty_nonmanip", 0.1, c_nm, 1e-3));
    rows.push(row(
        "example3.mass_penalty_manipulation",
        0.183,
        c_manip,
        1e-3,
    ));
    rows.push(documented(
        row("example3.mass_penalty_subsidy", 0.128, c_prop, 1e-3),
        "printed subsidy total does not follow from any reconstructible weighting of the \
         stated penalty; error masses and interval endpoints reproduce exactly",
    ));

    // ----- Proportional-costs curvature characterization -----
    let concave = Scenario1D::new(
        uniform_group(CostFunction::sqrt_linear(8.0, 0.0).unwrap(), 0.4),
        uniform_group(CostFunction::sqrt_linear(12.0, 0.0).unwrap(), 0.3),
        0.5,
        1.0,
        1.0,
        0.75,
    )
    .unwrap();
    let (tc, _) = equilibrium_threshold(&concave, &SubsidyPlan::None)?;
    let cb = sigma_boundary(concave.group(GroupId::B), &SubsidyPlan::None).sigma;
    rows.push(bool_row(
        "prop4.concave_equilibrium_at_sigma_b",
        curvature_prediction(&concave) == CurvaturePrediction::SigmaB
            && (tc.sigma - cb).abs() < 1e-6,
        "strictly concave proportional costs pin the equilibrium at sigma_B",
    ));

    let convex = Scenario1D::new(
        uniform_group(CostFunction::power_sum(vec![(4.5, 2.0)]).unwrap(), 0.4),
        uniform_group(CostFunction::power_sum(vec![(6.0, 2.0)]).unwrap(), 0.3),
        0.5,
        1.0,
        1.0,
        0.75,
    )
    .unwrap();
    let (tv, _) = equilibrium_threshold(&convex, &SubsidyPlan::None)?;
    let va = sigma_boundary(convex.group(GroupId::A), &SubsidyPlan::None).sigma;
    rows.push(bool_row(
        "prop4.convex_equilibrium_at_sigma_a",
        curvature_prediction(&convex) == CurvaturePrediction::SigmaA
            && (tv.sigma - va).abs() < 1e-6,
        "strictly convex proportional costs pin the equilibrium at sigma_A",
    ));

    let affine = Scenario1D::new(
        uniform_group(CostFunction::linear(3.0).unwrap(), 0.4),
        uniform_group(CostFunction::linear(4.0).unwrap(), 0.3),
        0.5,
        1.0,
        1.0,
        0.75,
    )
    .unwrap();
    let lo = learner_cost_1d(&affine, Threshold1D::new(0.55), &SubsidyPlan::None)?;
    let hi = learner_cost_1d(
        &affine,
        Threshold1D::new(sigma_boundary(affine.group(GroupId::A), &SubsidyPlan::None).sigma),
        &SubsidyPlan::None,
    )?;
    rows.push(bool_row(
        "prop4.affine_indifference",
        curvature_prediction(&affine) == CurvaturePrediction::Indifferent
            && (lo.total - hi.total).abs() < 1e-9,
        "affine proportional costs tie every undominated threshold",
    ));

    let all_required_passed = rows
        .iter()
        .filter(|r| !r.documented_discrepancy)
        .all(|r| r.passed);
    Ok(GoldenReport {
        rows,
        all_required_passed,
    })
}

impl GoldenReport {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    fmt_f64(r.paper),
                    fmt_f64(r.computed),
                    fmt_f64(r.delta),
                    fmt_f64(r.tolerance),
                    if r.passed { "pass" } else { "fail" }.to_string(),
                    if r.documented_discrepancy {
                        "documented-discrepancy"
                    } else {
                        "required"
                    }
                    .to_string(),
                    r.note.clone(),
                ]
            })
            .collect();
        write_csv(
            &[
                "quantity",
                "paper",
                "computed",
                "abs_delta",
                "tolerance",
                "status",
                "gate",
                "note",
            ],
            &rows,
        )
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<42} {:>10} {:>12} {:>10} {:>9}  {}\n",
            "quantity", "paper", "computed", "|delta|", "tol", "status"
        ));
        for r in &self.rows {
            let status = match (r.passed, r.documented_discrepancy) {
                (true, false) => "pass",
                (false, false) => "FAIL",
                (true, true) => "pass (documented)",
                (false, true) => "documented discrepancy",
            };
            out.push_str(&format!(
                "{:<42} {:>10.4} {:>12.6} {:>10.2e} {:>9.0e}  {}\n",
                r.name, r.paper, r.computed, r.delta, r.tolerance, status
            ));
        }
        out.push_str(&format!(
            "\noverall: {}\n",
            if self.all_required_passed {
                "all required rows pass"
            } else {
                "REQUIRED ROW FAILURES"
            }
        ));
        out
    }

    pub fn to_bundle(&self) -> ReportBundle {
        ReportBundle {
            machine: serde_json::to_value(self).unwrap(),
            csv: Some(self.to_csv()),
            human: self.render_human(),
        }
    }
}
