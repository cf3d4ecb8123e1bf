//! Command-line front end: scenario ingestion, equilibrium runs, golden
//! reproduction, parameter sweeps and paradox search.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::cost::SubsidyPlan;
use crate::eq1d::{ell, equilibrium_threshold_grid, sigma_boundary, Threshold1D};
use crate::eqnd::{effective_level, equilibrium_offset_sweep, reduce_scenario_to_1d};
use crate::error::{Error, Result};
use crate::golden::reproduce_paper;
use crate::numeric::linspace;
use crate::population::{GroupId, Scenario1D, ScenarioND};
use crate::report::{fmt_f64, write_csv, Cell, ReportBundle};
use crate::search::{paradox_search, SearchFamily, SearchOptions};
use crate::subsidy::{
    group_welfare, optimize_subsidy_grid, regime_report_at, welfare_nonmanipulation, LearnerMode,
    RegimeKind, RegimeReport, SubsidyFamily,
};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "STRATCLASS_OUT_DIR";

/// Print to stdout, tolerating a closed pipe (e.g. `stratclass ... | head`).
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

#[derive(Debug, Parser)]
#[command(
    name = "stratclass",
    version,
    about = "Equilibria, subsidies and welfare for the two-group strategic classification game"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (env STRATCLASS_OUT_DIR overrides).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    None,
    Manip,
    Prop,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    Sigma,
    Beta,
    Alpha,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Prop,
    Flat,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LearnerArg {
    PenaltyMin,
    Equalize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one regime of a scenario and write its report.
    Equilibrium {
        config: PathBuf,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// Overrides the config seed (Monte Carlo paths only).
        #[arg(long)]
        seed: Option<u64>,
        /// Threshold selection rule for the no-manipulation benchmark.
        #[arg(long, value_enum, default_value_t = LearnerArg::PenaltyMin)]
        learner: LearnerArg,
    },
    /// Recompute the published worked-example values and gate on them.
    ReproducePaper,
    /// Sweep a parameter and emit one CSV row per grid point.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        param: ParamArg,
        /// lo:hi:steps
        #[arg(long)]
        range: String,
        /// Fixed threshold for beta/alpha sweeps (default: sigma_A).
        #[arg(long)]
        sigma: Option<f64>,
        /// Fixed proportional parameter for sigma sweeps.
        #[arg(long)]
        beta: Option<f64>,
        /// Fixed flat parameter for sigma sweeps.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sample random scenarios and archive subsidy-paradox witnesses.
    ParadoxSearch {
        #[arg(long, default_value_t = 24)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FamilyArg::Both)]
        family: FamilyArg,
    },
}

/// Parse arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Validation(_) | Error::Domain(_) => 2,
                Error::Numeric(_) => 3,
                Error::Io(_) => 1,
            }
        }
    }
}

fn out_dir(cli_out: &Option<PathBuf>, config_out: Option<&str>) -> PathBuf {
    if let Ok(env_dir) = std::env::var(OUT_DIR_ENV) {
        if !env_dir.is_empty() {
            return PathBuf::from(env_dir);
        }
    }
    if let Some(dir) = cli_out {
        return dir.clone();
    }
    if let Some(dir) = config_out {
        return PathBuf::from(dir);
    }
    PathBuf::from("stratclass-out")
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Equilibrium {
            config,
            regime,
            seed,
            learner,
        } => cmd_equilibrium(cli, config, *regime, *seed, *learner),
        Command::ReproducePaper => cmd_reproduce_paper(cli),
        Command::Sweep {
            config,
            param,
            range,
            sigma,
            beta,
            alpha,
            seed,
        } => cmd_sweep(cli, config, *param, range, *sigma, *beta, *alpha, *seed),
        Command::ParadoxSearch {
            trials,
            seed,
            family,
        } => cmd_paradox_search(cli, *trials, *seed, *family),
    }
}

fn regime_json(s: &Scenario1D, report: &RegimeReport) -> serde_json::Value {
    let b = s.group(GroupId::B);
    let a = s.group(GroupId::A);
    let (fn_lo, fn_hi, fp_lo, fp_hi) = if report.threshold.rejects_all() {
        (b.rule.tau, 1.0, 0.0, 0.0)
    } else if report.regime == RegimeKind::NoManipulation {
        let t = report.threshold.sigma;
        (b.rule.tau, t.max(b.rule.tau), t.min(a.rule.tau), a.rule.tau)
    } else {
        let lb = ell(b, report.threshold.sigma, &report.plan);
        let la = ell(a, report.threshold.sigma, &SubsidyPlan::None);
        (
            b.rule.tau,
            lb.max(b.rule.tau),
            la.min(a.rule.tau),
            a.rule.tau,
        )
    };
    json!({
        "regime": report.regime.label(),
        "threshold": report.threshold.sigma,
        "plan": report.plan,
        "penalty": {
            "fn_b": Cell::analytic(report.penalty.fn_b),
            "fp_a": Cell::analytic(report.penalty.fp_a),
            "fp_b": Cell::analytic(report.penalty.fp_b),
            "fn_a": Cell::analytic(report.penalty.fn_a),
            "subsidy_money": Cell::quadrature(report.penalty.subsidy_money),
            "subsidy_term": Cell::quadrature(report.penalty.subsidy_term),
            "total": Cell::quadrature(report.penalty.total),
            "dominated": report.penalty.dominated,
        },
        "welfare_a": Cell::quadrature(report.welfare_a),
        "welfare_b": Cell::quadrature(report.welfare_b),
        "learner_utility": Cell::quadrature(report.learner_utility),
        "fn_interval_b": { "lo": fn_lo, "hi": fn_hi },
        "fp_interval_a": { "lo": fp_lo, "hi": fp_hi },
    })
}

fn regime_human(report: &RegimeReport) -> String {
    format!(
        "regime: {}\nthreshold sigma = {:.6}\nplan = {:?}\npenalty total = {:.6} \
         (fn_b {:.6}, fp_a {:.6}, subsidy term {:.6})\nwelfare A = {:.6}\nwelfare B = {:.6}\n\
         learner utility = {:.6}\n",
        report.regime.label(),
        report.threshold.sigma,
        report.plan,
        report.penalty.total,
        report.penalty.fn_b,
        report.penalty.fp_a,
        report.penalty.subsidy_term,
        report.welfare_a,
        report.welfare_b,
        report.learner_utility
    )
}

fn cmd_equilibrium(
    cli: &Cli,
    config_path: &Path,
    regime: RegimeArg,
    seed: Option<u64>,
    learner: LearnerArg,
) -> Result<i32> {
    let cfg = ScenarioConfig::from_path(config_path)?;
    let dir = out_dir(&cli.out, cfg.options.out_dir.as_deref());
    let seed = seed.unwrap_or(cfg.options.seed);
    match cfg.build()? {
        ScenarioKind::OneD(s) => {
            let mode = match learner {
                LearnerArg::PenaltyMin => LearnerMode::PenaltyMin,
                LearnerArg::Equalize => LearnerMode::EqualizeErrors,
            };
            let report = match regime {
                RegimeArg::None => welfare_nonmanipulation(&s, mode)?,
                RegimeArg::Manip => {
                    let (t, _) =
                        equilibrium_threshold_grid(&s, &SubsidyPlan::None, cfg.options.grid)?;
                    regime_report_at(&s, RegimeKind::Manipulation, t.sigma, SubsidyPlan::None)?
                }
                RegimeArg::Prop => {
                    let eq = optimize_subsidy_grid(
                        &s,
                        SubsidyFamily::Proportional,
                        cfg.options.joint_grid,
                    )?;
                    regime_report_at(
                        &s,
                        RegimeKind::ProportionalSubsidy,
                        eq.threshold.sigma,
                        eq.plan,
                    )?
                }
                RegimeArg::Flat => {
                    let eq =
                        optimize_subsidy_grid(&s, SubsidyFamily::Flat, cfg.options.joint_grid)?;
                    regime_report_at(&s, RegimeKind::FlatSubsidy, eq.threshold.sigma, eq.plan)?
                }
            };
            let machine = json!({
                "config": cfg,
                "seed": seed,
                "result": regime_json(&s, &report),
            });
            let bundle = ReportBundle {
                machine,
                csv: None,
                human: regime_human(&report),
            };
            let paths = bundle.write(&dir, &format!("equilibrium-{}", regime_label(regime)))?;
            for p in paths {
                emit(&format!("wrote {}\n", p.display()));
            }
            Ok(0)
        }
        ScenarioKind::MultiD(s) => cmd_equilibrium_nd(&s, &cfg, regime, seed, &dir),
    }
}

fn regime_label(regime: RegimeArg) -> &'static str {
    match regime {
        RegimeArg::None => "none",
        RegimeArg::Manip => "manip",
        RegimeArg::Prop => "prop",
        RegimeArg::Flat => "flat",
    }
}

/// d-D equilibria: offsets are swept along the shared true-rule direction,
/// with Monte Carlo evaluation; subsidy regimes go through the exact 1-D
/// reduction when available.
fn cmd_equilibrium_nd(
    s: &ScenarioND,
    cfg: &ScenarioConfig,
    regime: RegimeArg,
    seed: u64,
    dir: &Path,
) -> Result<i32> {
    let a = s.group(GroupId::A);
    let b = s.group(GroupId::B);
    if a.rule.weights != b.rule.weights {
        return Err(Error::config(
            "multi-dimensional equilibria need a shared true-rule direction",
        ));
    }
    match regime {
        RegimeArg::Manip => {
            let coarse_n = (cfg.options.mc_samples / 20).clamp(20_000, 200_000);
            let eq = equilibrium_offset_sweep(s, 65, coarse_n, cfg.options.mc_samples, seed)?;
            let (h, pen) = (eq.hyperplane, eq.penalty);
            let machine = json!({
                "config": cfg,
                "seed": seed,
                "result": {
                    "regime": "manipulation",
                    "hyperplane": &h,
                    "level_a": effective_level(&h, &a.costs, 1.0),
                    "level_b": effective_level(&h, &b.costs, 1.0),
                    "penalty_total": Cell::monte_carlo(pen.total.value, pen.total.se),
                    "fn_b": Cell::monte_carlo(pen.fn_b.value, pen.fn_b.se),
                    "fp_a": Cell::monte_carlo(pen.fp_a.value, pen.fp_a.se),
                    "clamp_blocked_a": pen.clamp_blocked_a,
                    "clamp_blocked_b": pen.clamp_blocked_b,
                    "dominated": pen.dominated,
                },
            });
            let human = format!(
                "regime: manipulation (d = {})\noffset g0 = {:.6}\npenalty total = {:.6} (se {:.2e})\n",
                s.dim(),
                h.offset,
                pen.total.value,
                pen.total.se
            );
            let bundle = ReportBundle {
                machine,
                csv: None,
                human,
            };
            for p in bundle.write(dir, "equilibrium-manip")? {
                emit(&format!("wrote {}\n", p.display()));
            }
            Ok(0)
        }
        RegimeArg::Prop | RegimeArg::Flat => {
            let reduced = reduce_scenario_to_1d(s, &a.rule.weights)?;
            let family = if regime == RegimeArg::Prop {
                SubsidyFamily::Proportional
            } else {
                SubsidyFamily::Flat
            };
            let eq = optimize_subsidy_grid(&reduced, family, cfg.options.joint_grid)?;
            let total: f64 = a.rule.weights.iter().sum();
            let machine = json!({
                "config": cfg,
                "seed": seed,
                "result": {
                    "regime": if regime == RegimeArg::Prop { "proportional-subsidy" } else { "flat-subsidy" },
                    "reduced_sigma": eq.threshold.sigma,
                    "offset_g0": eq.threshold.sigma * total,
                    "plan": eq.plan,
                    "penalty_total": Cell::quadrature(eq.penalty.total),
                },
            });
            let human = format!(
                "regime: {} via 1-D reduction\noffset g0 = {:.6}\nplan = {:?}\npenalty = {:.6}\n",
                regime_label(regime),
                eq.threshold.sigma * total,
                eq.plan,
                eq.penalty.total
            );
            let bundle = ReportBundle {
                machine,
                csv: None,
                human,
            };
            for p in bundle.write(dir, &format!("equilibrium-{}", regime_label(regime)))? {
                emit(&format!("wrote {}\n", p.display()));
            }
            Ok(0)
        }
        RegimeArg::None => Err(Error::config(
            "the no-manipulation benchmark is defined for one-dimensional scenarios",
        )),
    }
}

fn cmd_reproduce_paper(cli: &Cli) -> Result<i32> {
    let report = reproduce_paper()?;
    let dir = out_dir(&cli.out, None);
    let bundle = report.to_bundle();
    emit(&bundle.human);
    for p in bundle.write(&dir, "reproduce-paper")? {
        emit(&format!("wrote {}\n", p.display()));
    }
    Ok(if report.all_required_passed { 0 } else { 1 })
}

fn parse_range(range: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!(
            "range must be lo:hi:steps, got `{range}`"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::domain(format!("bad range lower bound `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::domain(format!("bad range upper bound `{}`", parts[1])))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| Error::domain(format!("bad range step count `{}`", parts[2])))?;
    if steps == 0 {
        return Err(Error::domain("range needs at least one step"));
    }
    if hi < lo {
        return Err(Error::domain(format!("inverted range [{lo}, {hi}]")));
    }
    Ok(linspace(lo, hi, steps))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    cli: &Cli,
    config_path: &Path,
    param: ParamArg,
    range: &str,
    sigma: Option<f64>,
    beta: Option<f64>,
    alpha: Option<f64>,
    seed: Option<u64>,
) -> Result<i32> {
    let cfg = ScenarioConfig::from_path(config_path)?;
    let dir = out_dir(&cli.out, cfg.options.out_dir.as_deref());
    let seed = seed.unwrap_or(cfg.options.seed);
    let s = cfg.build_1d()?;
    let values = parse_range(range)?;
    if beta.is_some() && alpha.is_some() {
        return Err(Error::domain("choose at most one of --beta / --alpha"));
    }

    let headers = [
        "param",
        "value",
        "sigma",
        "plan_param",
        "fn_b",
        "fn_b_provenance",
        "fp_b",
        "fp_b_provenance",
        "fp_a",
        "fp_a_provenance",
        "fn_a",
        "fn_a_provenance",
        "subsidy_money",
        "subsidy_money_provenance",
        "total",
        "total_provenance",
        "welfare_a",
        "welfare_a_provenance",
        "welfare_b",
        "welfare_b_provenance",
    ];
    let param_name = match param {
        ParamArg::Sigma => "sigma",
        ParamArg::Beta => "beta",
        ParamArg::Alpha => "alpha",
        ParamArg::Lambda => "lambda",
    };
    let sigma_a = sigma_boundary(s.group(GroupId::A), &SubsidyPlan::None).sigma;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for &v in &values {
        let (sig, plan, scenario) = match param {
            ParamArg::Sigma => {
                let plan = if let Some(b) = beta {
                    SubsidyPlan::proportional(b)?
                } else if let Some(a) = alpha {
                    SubsidyPlan::flat(a)?
                } else {
                    SubsidyPlan::None
                };
                (v, plan, s.clone())
            }
            ParamArg::Beta => (
                sigma.unwrap_or(sigma_a),
                SubsidyPlan::proportional(v)?,
                s.clone(),
            ),
            ParamArg::Alpha => (sigma.unwrap_or(sigma_a), SubsidyPlan::flat(v)?, s.clone()),
            ParamArg::Lambda => {
                let rebuilt = Scenario1D::new(
                    s.group(GroupId::A).clone(),
                    s.group(GroupId::B).clone(),
                    s.proportion(GroupId::A),
                    s.c_fp(),
                    s.c_fn(),
                    v,
                )?;
                let eq = optimize_subsidy_grid(
                    &rebuilt,
                    SubsidyFamily::Proportional,
                    cfg.options.joint_grid,
                )?;
                (eq.threshold.sigma, eq.plan, rebuilt)
            }
        };
        let t = Threshold1D::new(sig);
        let pen = crate::eq1d::learner_cost_1d(&scenario, t, &plan)?;
        let wa = group_welfare(&scenario, t, &plan, GroupId::A)?;
        let wb = group_welfare(&scenario, t, &plan, GroupId::B)?;
        let plan_param = match plan {
            SubsidyPlan::None => 0.0,
            SubsidyPlan::Proportional { beta } => beta,
            SubsidyPlan::Flat { alpha } => alpha,
        };
        rows.push(vec![
            param_name.to_string(),
            fmt_f64(v),
            fmt_f64(sig),
            fmt_f64(plan_param),
            fmt_f64(pen.fn_b),
            "analytic".to_string(),
            fmt_f64(pen.fp_b),
            "analytic".to_string(),
            fmt_f64(pen.fp_a),
            "analytic".to_string(),
            fmt_f64(pen.fn_a),
            "analytic".to_string(),
            fmt_f64(pen.subsidy_money),
            "quadrature".to_string(),
            fmt_f64(pen.total),
            "quadrature".to_string(),
            fmt_f64(wa),
            "quadrature".to_string(),
            fmt_f64(wb),
            "quadrature".to_string(),
        ]);
    }
    let csv = write_csv(&headers, &rows);
    let machine = json!({
        "config": cfg,
        "seed": seed,
        "param": param_name,
        "points": values,
    });
    let human = format!(
        "sweep of {param_name} over {} points; see CSV for the table\n",
        values.len()
    );
    let bundle = ReportBundle {
        machine,
        csv: Some(csv),
        human,
    };
    for p in bundle.write(&dir, &format!("sweep-{param_name}"))? {
        emit(&format!("wrote {}\n", p.display()));
    }
    Ok(0)
}

fn cmd_paradox_search(cli: &Cli, trials: u64, seed: u64, family: FamilyArg) -> Result<i32> {
    let dir = out_dir(&cli.out, None);
    let family = match family {
        FamilyArg::Prop => SearchFamily::Proportional,
        FamilyArg::Flat => SearchFamily::Flat,
        FamilyArg::Both => SearchFamily::Both,
    };
    let report = paradox_search(&SearchOptions {
        trials,
        seed,
        family,
    })?;
    std::fs::create_dir_all(&dir)?;
    for w in &report.witnesses {
        let path = dir.join(format!("witness-{:04}.json", w.trial));
        std::fs::write(&path, w.config.to_json_pretty())?;
        emit(&format!("wrote {}\n", path.display()));
    }
    let human = format!(
        "trials: {}\nproportional paradoxes: {}\nflat average declines: {}\nmanipulation regrets: {}\nwitnesses archived: {}\n",
        report.trials,
        report.proportional_paradoxes,
        report.flat_average_declines,
        report.manipulation_regrets,
        report.witnesses.len()
    );
    emit(&human);
    let bundle = ReportBundle {
        machine: serde_json::to_value(&report).unwrap(),
        csv: None,
        human,
    };
    for p in bundle.write(&dir, "paradox-search")? {
        emit(&format!("wrote {}\n", p.display()));
    }
    Ok(0)
}
