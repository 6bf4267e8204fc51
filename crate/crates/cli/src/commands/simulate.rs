use std::fmt::Write as _;
use std::path::Path;

use taxi_rhc_core::demand::DemandModel;
use taxi_rhc_core::geo::generate_stations;
use taxi_rhc_core::matrix::Mat;
use taxi_rhc_core::rng::derive_seed;
use taxi_rhc_core::sim::{
    compare_metrics, demand_model_from_scenario, run_baseline, run_dispatch_sim,
    synthesize_scenario, MetricsComparison, ScenarioSpec, SimMetrics,
};

use crate::config::RunConfig;
use crate::formats::{self, MetricsMeta};
use crate::CliError;

/// Parameter swept over by `--sweep key=v1,v2,...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKey {
    Beta,
    Alpha,
    Horizon,
    T2,
}

impl SweepKey {
    fn parse(key: &str) -> Result<Self, CliError> {
        match key {
            "beta" => Ok(SweepKey::Beta),
            "alpha" => Ok(SweepKey::Alpha),
            "T" | "horizon" => Ok(SweepKey::Horizon),
            "t2" => Ok(SweepKey::T2),
            other => Err(CliError::Usage(format!(
                "sweep key must be beta, alpha, T, or t2; got `{other}`"
            ))),
        }
    }

    fn label(self) -> &'static str {
        match self {
            SweepKey::Beta => "beta",
            SweepKey::Alpha => "alpha",
            SweepKey::Horizon => "T",
            SweepKey::T2 => "t2",
        }
    }

    fn apply(self, cfg: &mut RunConfig, token: &str) -> Result<(), CliError> {
        let bad = |key: &str| CliError::Usage(format!("sweep value `{token}` invalid for {key}"));
        match self {
            SweepKey::Beta => {
                cfg.beta = vec![token.parse().map_err(|_| bad("beta"))?];
            }
            SweepKey::Alpha => {
                cfg.alpha = vec![token.parse().map_err(|_| bad("alpha"))?];
            }
            SweepKey::Horizon => {
                cfg.horizon = token.parse().map_err(|_| bad("T"))?;
                cfg.beta.truncate(1);
                cfg.alpha.truncate(1);
            }
            SweepKey::T2 => {
                cfg.t2_minutes = token.parse().map_err(|_| bad("t2"))?;
            }
        }
        Ok(())
    }
}

struct ArmResults {
    dispatch: SimMetrics,
    baseline: SimMetrics,
    comparison: MetricsComparison,
}

/// Run both simulation arms on the shared scenario and write all artifacts
/// into `out_dir`.
fn run_point(cfg: &RunConfig, out_dir: &Path) -> Result<ArmResults, CliError> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let slots1 = (1440 / cfg.t1_minutes) as usize;
    let n = grid.regions();

    // demand generator: either an estimated model file or the synthetic keys
    let (rates, destinations, engine_model): (Vec<Vec<f64>>, Vec<Mat>, Option<DemandModel>) =
        match &cfg.scenario_model {
            Some(path) => {
                let model = formats::read_model(path)?;
                if model.regions != n {
                    return Err(CliError::Data(format!(
                        "scenario model has {} regions but the grid has {n}",
                        model.regions
                    )));
                }
                if model.t1_minutes != cfg.t1_minutes || model.t2_minutes != cfg.t2_minutes {
                    return Err(CliError::Data(format!(
                        "scenario model clocks (t1={}m, t2={}m) differ from config (t1={}m, t2={}m)",
                        model.t1_minutes, model.t2_minutes, cfg.t1_minutes, cfg.t2_minutes
                    )));
                }
                let periods = (cfg.t1_minutes / cfg.t2_minutes) as usize;
                let destinations = (0..slots1)
                    .map(|h| model.mobility[h * periods].clone())
                    .collect();
                (model.means.clone(), destinations, Some(model))
            }
            None => {
                let rates = vec![cfg.scenario_rates(); slots1];
                let uniform = Mat::from_rows(&vec![vec![1.0 / n as f64; n]; n]);
                (rates, vec![uniform; slots1], None)
            }
        };

    let spec = ScenarioSpec {
        grid: grid.clone(),
        fleet_size: cfg.scenario_fleet,
        t1_minutes: cfg.t1_minutes,
        t2_minutes: cfg.t2_minutes,
        days: cfg.scenario_days,
        rates,
        destinations,
        trip_ticks: cfg.scenario_trip_ticks,
        miles_per_degree: cfg.miles_per_degree,
        seed: cfg.seed,
    };
    let scenario = synthesize_scenario(&spec).map_err(|e| CliError::Data(e.to_string()))?;
    let model =
        engine_model.unwrap_or_else(|| demand_model_from_scenario(&spec, cfg.interval_multiplier));
    let stations = generate_stations(&grid, cfg.scenario_fleet, derive_seed(cfg.seed, "stations", 0));
    let rhc_cfg = cfg.rhc();

    let (dispatch, orders) = run_dispatch_sim(&scenario, &model, &rhc_cfg, &stations)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let baseline = run_baseline(&scenario).map_err(|e| CliError::Data(e.to_string()))?;
    let comparison =
        compare_metrics(&dispatch, &baseline).map_err(|e| CliError::Data(e.to_string()))?;

    std::fs::create_dir_all(out_dir)?;
    formats::write_metrics(
        &out_dir.join("metrics_dispatch.csv"),
        &dispatch,
        &MetricsMeta {
            arm: "dispatch".to_string(),
            beta: Some(cfg.beta[0]),
            t2_minutes: cfg.t2_minutes,
            seed: cfg.seed,
        },
    )?;
    formats::write_metrics(
        &out_dir.join("metrics_baseline.csv"),
        &baseline,
        &MetricsMeta {
            arm: "baseline".to_string(),
            beta: None,
            t2_minutes: cfg.t2_minutes,
            seed: cfg.seed,
        },
    )?;
    formats::write_orders(&out_dir.join("orders.csv"), &orders)?;

    let mut comparison_csv = String::from("metric,dispatch,baseline,change_pct\n");
    let _ = writeln!(
        comparison_csv,
        "mean_mismatch_error,{},{},{}",
        dispatch.mean_mismatch_error, baseline.mean_mismatch_error, comparison.mismatch_change_pct
    );
    let _ = writeln!(
        comparison_csv,
        "total_idle_miles,{},{},{}",
        dispatch.total_idle_miles, baseline.total_idle_miles, comparison.idle_change_pct
    );
    std::fs::write(out_dir.join("comparison.csv"), comparison_csv)?;

    Ok(ArmResults {
        dispatch,
        baseline,
        comparison,
    })
}

fn print_point(label: &str, results: &ArmResults) {
    println!(
        "{label}: mismatch {:.4} vs {:.4} ({:+.1}%), idle {:.2} vs {:.2} miles ({:+.1}%), served {}/{}",
        results.dispatch.mean_mismatch_error,
        results.baseline.mean_mismatch_error,
        results.comparison.mismatch_change_pct,
        results.dispatch.total_idle_miles,
        results.baseline.total_idle_miles,
        results.comparison.idle_change_pct,
        results.dispatch.served_requests,
        results.dispatch.served_requests + results.dispatch.expired_requests,
    );
    if results.dispatch.fallback_steps > 0 {
        println!(
            "  note: {} dispatch steps fell back to stay-in-place orders",
            results.dispatch.fallback_steps
        );
    }
}

/// Run the simulation, optionally sweeping one parameter. Each sweep point
/// writes its artifacts into `out/sweep_<key>_<value>/`; a combined
/// `sweep_summary.csv` lands in the output root.
pub fn cmd_simulate(cfg: &RunConfig, sweep: Option<&str>) -> Result<(), CliError> {
    let Some(sweep) = sweep else {
        let results = run_point(cfg, &cfg.out_dir.clone())?;
        print_point("simulate", &results);
        println!("wrote metrics under {}", cfg.out_dir.display());
        return Ok(());
    };

    let (key_raw, values_raw) = sweep
        .split_once('=')
        .ok_or_else(|| CliError::Usage("--sweep expects key=v1,v2,...".to_string()))?;
    let key = SweepKey::parse(key_raw.trim())?;
    let tokens: Vec<&str> = values_raw
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(CliError::Usage("--sweep needs at least one value".to_string()));
    }

    let mut summary = String::from(
        "key,value,mismatch_dispatch,idle_dispatch,mismatch_baseline,idle_baseline,mismatch_change_pct,idle_change_pct\n",
    );
    for token in &tokens {
        let mut point_cfg = cfg.clone();
        key.apply(&mut point_cfg, token)?;
        let out_dir = cfg.out_dir.join(format!("sweep_{}_{token}", key.label()));
        point_cfg.out_dir = out_dir.clone();
        let results = run_point(&point_cfg, &out_dir)?;
        print_point(&format!("{}={token}", key.label()), &results);
        let _ = writeln!(
            summary,
            "{},{token},{},{},{},{},{},{}",
            key.label(),
            results.dispatch.mean_mismatch_error,
            results.dispatch.total_idle_miles,
            results.baseline.mean_mismatch_error,
            results.baseline.total_idle_miles,
            results.comparison.mismatch_change_pct,
            results.comparison.idle_change_pct,
        );
    }
    std::fs::create_dir_all(&cfg.out_dir)?;
    let summary_path = cfg.out_dir.join("sweep_summary.csv");
    std::fs::write(&summary_path, summary)?;
    println!("wrote {}", summary_path.display());
    Ok(())
}
