//! Randomized search for subsidy-paradox and manipulation-regret witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{CostConfig, DistConfig, GroupConfig, RunOptions, ScenarioConfig};
use crate::error::Result;
use crate::subsidy::{compare_regimes, CompareOptions};

/// Which subsidy families the search exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchFamily {
    Proportional,
    Flat,
    Both,
}

impl SearchFamily {
    fn wants_proportional(&self) -> bool {
        matches!(self, SearchFamily::Proportional | SearchFamily::Both)
    }

    fn wants_flat(&self) -> bool {
        matches!(self, SearchFamily::Flat | SearchFamily::Both)
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub trials: u64,
    pub seed: u64,
    pub family: SearchFamily,
}

/// A scenario exhibiting one of the searched-for effects, re-confirmed at
/// full grid resolution.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub trial: u64,
    /// `subsidy-paradox`, `flat-average-decline` or `manipulation-regret`.
    pub flags: Vec<String>,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub trials: u64,
    pub seed: u64,
    pub proportional_paradoxes: u64,
    pub flat_average_declines: u64,
    pub manipulation_regrets: u64,
    pub witnesses: Vec<Witness>,
}

/// The first trial always replays the concave worked example, a known
/// proportional-subsidy paradox witness.
fn example1_config() -> ScenarioConfig {
    ScenarioConfig {
        group_a: GroupConfig {
            distribution: Some(DistConfig::Uniform),
            distributions: None,
            cost: CostConfig::SqrtLinear {
                sqrt: 8.0,
                lin: 1.0,
            },
            tau: 0.4,
            weights: None,
        },
        group_b: GroupConfig {
            distribution: Some(DistConfig::Uniform),
            distributions: None,
            cost: CostConfig::SqrtLinear {
                sqrt: 12.0,
                lin: 0.0,
            },
            tau: 0.3,
            weights: None,
        },
        p_a: 0.5,
        c_fp: 1.0,
        c_fn: 1.0,
        lambda: 0.75,
        options: RunOptions::default(),
    }
}

fn random_config(rng: &mut ChaCha8Rng) -> ScenarioConfig {
    let tau_b: f64 = rng.random_range(0.1..0.5);
    let tau_a = (tau_b + rng.random_range(0.0..0.25f64)).min(0.72);
    let (cost_a, cost_b) = match rng.random_range(0..4u32) {
        0 => {
            let a = rng.random_range(1.2..5.0);
            let b = a * rng.random_range(1.05..2.0);
            (
                CostConfig::Linear { slope: a },
                CostConfig::Linear { slope: b },
            )
        }
        1 => {
            let sa = rng.random_range(3.0..9.0);
            let sb = sa * rng.random_range(1.05..1.8);
            let ta = rng.random_range(0.0..1.0);
            let tb = ta + rng.random_range(0.0..1.0);
            (
                CostConfig::SqrtLinear { sqrt: sa, lin: ta },
                CostConfig::SqrtLinear { sqrt: sb, lin: tb },
            )
        }
        2 => {
            // Proportional concave power pair.
            let p = rng.random_range(0.35..0.85);
            let sb = rng.random_range(2.5..8.0);
            let q = rng.random_range(0.4..0.95);
            (
                CostConfig::PowerSum {
                    terms: vec![(q * sb, p)],
                },
                CostConfig::PowerSum {
                    terms: vec![(sb, p)],
                },
            )
        }
        _ => {
            // Proportional convex power pair.
            let p = rng.random_range(1.3..2.8);
            let sb = rng.random_range(2.5..8.0);
            let q = rng.random_range(0.4..0.95);
            (
                CostConfig::PowerSum {
                    terms: vec![(q * sb, p)],
                },
                CostConfig::PowerSum {
                    terms: vec![(sb, p)],
                },
            )
        }
    };
    ScenarioConfig {
        group_a: GroupConfig {
            distribution: Some(DistConfig::Uniform),
            distributions: None,
            cost: cost_a,
            tau: tau_a,
            weights: None,
        },
        group_b: GroupConfig {
            distribution: Some(DistConfig::Uniform),
            distributions: None,
            cost: cost_b,
            tau: tau_b,
            weights: None,
        },
        p_a: rng.random_range(0.35..0.65),
        c_fp: rng.random_range(0.25..2.0),
        c_fn: rng.random_range(0.25..2.0),
        lambda: rng.random_range(0.05..1.25),
        options: RunOptions::default(),
    }
}

/// Run `trials` random scenarios (trial 0 is the known witness) through the
/// regime comparison and record every confirmed flag.
pub fn paradox_search(opts: &SearchOptions) -> Result<SearchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = SearchReport {
        trials: opts.trials,
        seed: opts.seed,
        proportional_paradoxes: 0,
        flat_average_declines: 0,
        manipulation_regrets: 0,
        witnesses: Vec::new(),
    };
    let scan = CompareOptions {
        eq_grid: 512,
        joint_grid: 128,
        delta_grid: 2001,
        sample_rows: 3,
        include_flat: opts.family.wants_flat(),
        ..Default::default()
    };
    for trial in 0..opts.trials {
        let config = if trial == 0 {
            example1_config()
        } else {
            random_config(&mut rng)
        };
        let scenario = match config.build_1d() {
            Ok(s) => s,
            // Random draws violating a standing assumption are skipped.
            Err(_) => continue,
        };
        let quick = compare_regimes(&scenario, &scan)?;
        let mut hit = quick.manipulation_regret;
        if opts.family.wants_proportional() && quick.subsidy_paradox {
            hit = true;
        }
        if opts.family.wants_flat() && quick.flat_average_decline {
            hit = true;
        }
        if !hit {
            continue;
        }
        // Confirm at full resolution before recording.
        let confirm_opts = CompareOptions {
            include_flat: opts.family.wants_flat(),
            ..Default::default()
        };
        let confirmed = compare_regimes(&scenario, &confirm_opts)?;
        let mut flags = Vec::new();
        if opts.family.wants_proportional() && confirmed.subsidy_paradox {
            flags.push("subsidy-paradox".to_string());
            report.proportional_paradoxes += 1;
        }
        if opts.family.wants_flat() && confirmed.flat_average_decline {
            flags.push("flat-average-decline".to_string());
            report.flat_average_declines += 1;
        }
        if confirmed.manipulation_regret {
            flags.push("manipulation-regret".to_string());
            report.manipulation_regrets += 1;
        }
        if !flags.is_empty() {
            report.witnesses.push(Witness {
                trial,
                flags,
                config,
            });
        }
    }
    Ok(report)
}
