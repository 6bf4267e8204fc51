use std::path::Path;

use taxi_rhc_core::geo::{generate_stations, manhattan_deg};
use taxi_rhc_core::rhc::{rhc_step, RhcState};
use taxi_rhc_core::rng::derive_seed;

use crate::config::RunConfig;
use crate::formats::{self, PlanMeta, PlanRow};
use crate::CliError;

/// Solve one dispatch problem for a fleet snapshot against an estimated
/// model and write the plan file. Exits 3 (via `CliError::Infeasible`) when
/// the solver cannot produce an optimal plan.
pub fn cmd_dispatch(
    model_path: &Path,
    fleet_path: &Path,
    cfg: &RunConfig,
    slot: usize,
    period: usize,
) -> Result<(), CliError> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let model = formats::read_model(model_path)?;
    if model.regions != grid.regions() {
        return Err(CliError::Data(format!(
            "model has {} regions but the configured grid has {} ({}x{})",
            model.regions,
            grid.regions(),
            cfg.grid_rows,
            cfg.grid_cols
        )));
    }
    if model.t1_minutes != cfg.t1_minutes || model.t2_minutes != cfg.t2_minutes {
        return Err(CliError::Data(format!(
            "model clocks (t1={}m, t2={}m) differ from config (t1={}m, t2={}m)",
            model.t1_minutes, model.t2_minutes, cfg.t1_minutes, cfg.t2_minutes
        )));
    }
    let rhc_cfg = cfg.rhc();
    rhc_cfg
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if slot == 0 || slot > rhc_cfg.slots1() {
        return Err(CliError::Usage(format!(
            "--slot must be in 1..={}",
            rhc_cfg.slots1()
        )));
    }
    let periods = rhc_cfg.periods_per_slot();
    if period == 0 || period > periods {
        return Err(CliError::Usage(format!("--period must be in 1..={periods}")));
    }

    let text = std::fs::read_to_string(fleet_path)
        .map_err(|e| CliError::Data(format!("cannot read fleet {}: {e}", fleet_path.display())))?;
    let (fleet, table_size) = formats::parse_fleet_snapshot(&text)?;
    let stations = generate_stations(&grid, table_size, derive_seed(cfg.seed, "stations", 0));

    let h2 = (slot - 1) * periods + period;
    let mut state = RhcState::new(h2, &model, &rhc_cfg);
    state.fleet = fleet;
    let vacant = state.fleet.vacant.clone();
    let output = rhc_step(&mut state, &model, &rhc_cfg, &grid, &stations)
        .map_err(|e| CliError::Data(e.to_string()))?;
    if output.fallback {
        return Err(CliError::Infeasible(format!(
            "dispatch problem infeasible for slot {slot} period {period}; \
             consider raising dispatch.alpha"
        )));
    }
    let plan = output.plan.expect("non-fallback step carries a plan");

    let rows: Vec<PlanRow> = output
        .orders
        .iter()
        .zip(vacant.iter())
        .map(|(order, taxi)| PlanRow {
            taxi_id: order.taxi_id,
            from_region: order.from_region,
            to_region: order.to_region,
            target: order.target,
            distance_deg: manhattan_deg(taxi.position, order.target),
        })
        .collect();
    let mismatch: f64 = plan.objective.mismatch.iter().sum();
    let distance: f64 = plan.objective.distance.iter().sum();
    let meta = PlanMeta {
        mode: match cfg.mode {
            taxi_rhc_core::rhc::DispatchMode::Nominal => "nominal",
            taxi_rhc_core::rhc::DispatchMode::Robust => "robust",
        },
        mismatch,
        distance,
        total: plan.objective.total,
        lp_objective: plan.lp_objective,
        alpha_slack: plan.alpha_slack,
    };
    std::fs::create_dir_all(&cfg.out_dir)?;
    let plan_path = cfg.out_dir.join("plan.csv");
    std::fs::write(&plan_path, formats::render_plan(&rows, &meta))?;

    println!("status: optimal ({} simplex iterations)", plan.iterations);
    println!("objective: J = {}", plan.objective.total);
    for (k, (j_e, j_d)) in plan
        .objective
        .mismatch
        .iter()
        .zip(plan.objective.distance.iter())
        .enumerate()
    {
        println!("  step {}: J_E = {j_e}, J_D = {j_d} deg", k + 1);
    }
    println!("rounding cap slack: {} deg", plan.alpha_slack);
    println!("orders: {} taxis, wrote {}", rows.len(), plan_path.display());
    Ok(())
}
