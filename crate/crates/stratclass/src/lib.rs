//! Numerical library for the two-group strategic classification game: a
//! learner publishes a classifier over manipulable features, candidates from
//! two populations with unequal manipulation costs best-respond, and the
//! learner may subsidize the disadvantaged group's costs.
//!
//! The crate computes candidate best responses, undominated classifier
//! intervals, equilibrium thresholds and hyperplanes, optimal subsidy plans,
//! and per-group welfare across the no-manipulation, manipulation and
//! subsidized regimes. A CLI (`stratclass`) drives scenario files, golden
//! reproduction of the worked examples, parameter sweeps and a randomized
//! paradox search.

pub mod cli;
pub mod config;
pub mod cost;
pub mod dist;
pub mod eq1d;
pub mod eqnd;
pub mod error;
pub mod golden;
pub mod numeric;
pub mod population;
pub mod report;
pub mod search;
pub mod sim;
pub mod subsidy;

pub use cost::{
    check_cost_condition, manipulation_cost, CostFamily, CostFunction, LinearCostVector,
    SubsidyPlan,
};
pub use dist::Distribution;
pub use eq1d::{
    best_response_1d, curvature_prediction, ell, equilibrium_threshold, learner_cost_1d,
    sigma_boundary, BestResponse1D, CurvaturePrediction, LearnerPenalty, Threshold1D,
};
pub use eqnd::{
    best_response_nd, dominance_repair, effective_level, equilibrium_offset_sweep, learner_cost_nd,
    perfect_classifier, reduce_scenario_to_1d, reduce_to_1d, BestResponseND, Hyperplane,
    NdEquilibrium, Simplex, SimplexDirection,
};
pub use error::{Error, Result};
pub use population::{
    Group1D, GroupId, GroupND, Scenario1D, ScenarioND, TrueRule1D, TrueRuleND, ValidationReport,
};
pub use subsidy::{
    compare_regimes, group_welfare, optimize_subsidy, subsidy_money_flat,
    subsidy_money_proportional, welfare_nonmanipulation, CompareOptions, LearnerMode,
    RegimeComparison, RegimeKind, RegimeReport, SubsidyEquilibrium, SubsidyFamily,
};
