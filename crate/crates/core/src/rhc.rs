//! The receding-horizon dispatch engine: one step per dispatch period
//! refreshes the fleet snapshot, adjusts predicted demand for the service
//! capability of currently occupied taxis, schedules per-horizon-step demand
//! (point or interval), solves the dispatch LP, and emits one order per
//! vacant taxi from the rounded first step.
//!
//! Two clocks drive the engine: coarse demand-model slots of `t1` minutes
//! (index `h1`) and dispatch periods of `t2` minutes (index `h2`), with
//! `H = t1 / t2` periods per slot. Only the first horizon step of each solve
//! is executed; the next period re-solves against fresh state.

use alloc::vec;
use alloc::vec::Vec;

use crate::demand::{dropoff_probability, DemandModel};
use crate::dispatch::{
    solve_dispatch, DemandSpec, DispatchError, DispatchInstance, DispatchPlan,
};
use crate::geo::{assign_region, GeoPoint, RegionGrid, StationTable};
use crate::lp::SolverOptions;
use crate::math;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RhcError {
    #[error("configuration invalid: {0}")]
    Config(&'static str),
    #[error("taxi id {id} has no station table row")]
    UnknownTaxi { id: usize },
    #[error("dispatch failed: {0}")]
    Dispatch(#[from] DispatchError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DispatchMode {
    Nominal,
    Robust,
}

/// Engine configuration. `beta` and `alpha` are per-horizon-step schedules;
/// `alpha` broadcasts to every taxi.
#[derive(Clone, Debug, PartialEq)]
pub struct RhcConfig {
    pub t1_minutes: u32,
    pub t2_minutes: u32,
    pub horizon: usize,
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub mode: DispatchMode,
    pub solver: SolverOptions,
}

impl RhcConfig {
    pub fn validate(&self) -> Result<(), RhcError> {
        if self.t1_minutes == 0 || self.t2_minutes == 0 {
            return Err(RhcError::Config("slot lengths must be positive"));
        }
        if 1440 % self.t1_minutes != 0 {
            return Err(RhcError::Config("t1 must divide 1440 minutes"));
        }
        if !self.t1_minutes.is_multiple_of(self.t2_minutes) {
            return Err(RhcError::Config("t2 must divide t1"));
        }
        if self.horizon == 0 {
            return Err(RhcError::Config("horizon must be at least 1"));
        }
        if self.beta.len() != self.horizon || self.alpha.len() != self.horizon {
            return Err(RhcError::Config("beta/alpha schedules must match the horizon"));
        }
        if self.beta.iter().any(|&b| !(b >= 0.0)) {
            return Err(RhcError::Config("beta must be nonnegative"));
        }
        if self.alpha.iter().any(|&a| !(a > 0.0)) {
            return Err(RhcError::Config("alpha must be positive"));
        }
        Ok(())
    }

    /// Dispatch periods per demand slot, `H = t1 / t2`.
    pub fn periods_per_slot(&self) -> usize {
        (self.t1_minutes / self.t2_minutes) as usize
    }

    pub fn slots1(&self) -> usize {
        (1440 / self.t1_minutes) as usize
    }

    pub fn slots2(&self) -> usize {
        (1440 / self.t2_minutes) as usize
    }

    /// Coarse slot containing the 1-based dispatch period `h2`.
    pub fn slot1_of(&self, h2: usize) -> usize {
        ((h2 - 1) * self.t2_minutes as usize) / self.t1_minutes as usize + 1
    }

    /// True when period `h2` starts a new demand slot.
    pub fn starts_slot(&self, h2: usize) -> bool {
        ((h2 - 1) * self.t2_minutes as usize).is_multiple_of(self.t1_minutes as usize)
    }
}

/// One vacant taxi available for dispatch. The id keys into the station
/// table and stays stable across steps regardless of occupancy changes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VacantTaxi {
    pub id: usize,
    pub position: GeoPoint,
}

/// Latest sensed fleet state, refreshed by the caller before each step.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FleetSnapshot {
    pub vacant: Vec<VacantTaxi>,
    pub occupied_positions: Vec<GeoPoint>,
}

/// Engine state across steps.
#[derive(Clone, Debug, PartialEq)]
pub struct RhcState {
    /// Current demand slot, 1-based.
    pub h1: usize,
    /// Current dispatch period within the day, 1-based.
    pub h2: usize,
    /// Residual demand of the current slot, reduced by occupied-taxi
    /// capability at slot starts and by emitted orders each step.
    pub working_demand: Vec<f64>,
    /// Occupied-taxi service capability fixed at the last slot start.
    pub occupied_capability: Vec<u64>,
    pub fleet: FleetSnapshot,
}

impl RhcState {
    /// Start a fresh state at period `start_h2`. The working demand begins
    /// at the slot's predicted vector; the first step of a slot deducts the
    /// occupied-taxi capability before solving.
    pub fn new(start_h2: usize, model: &DemandModel, cfg: &RhcConfig) -> Self {
        let h1 = cfg.slot1_of(start_h2);
        RhcState {
            h1,
            h2: start_h2,
            working_demand: model.means[h1 - 1].clone(),
            occupied_capability: vec![0; model.regions],
            fleet: FleetSnapshot::default(),
        }
    }
}

/// One dispatch order. Regions are 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispatchOrder {
    pub taxi_id: usize,
    pub from_region: usize,
    pub to_region: usize,
    pub target: GeoPoint,
}

/// Result of one engine step.
#[derive(Clone, Debug)]
pub struct RhcStepOutput {
    pub orders: Vec<DispatchOrder>,
    /// The solved plan, when the LP solve succeeded.
    pub plan: Option<DispatchPlan>,
    /// True when the solver could not produce a plan and the step fell back
    /// to stay-in-place orders.
    pub fallback: bool,
}

/// Service capability of occupied taxis per region: `ceil(pd_j * n_o)`.
pub fn occupied_service_capability(pd: &[f64], n_occupied: usize) -> Vec<u64> {
    pd.iter()
        .map(|&p| math::ceil(p * n_occupied as f64) as u64)
        .collect()
}

/// Deduct occupied-taxi capability from predicted requests, clamped at zero.
pub fn deduct_demand(r_hat: &[f64], r_o: &[u64]) -> Vec<f64> {
    r_hat
        .iter()
        .zip(r_o.iter())
        .map(|(&r, &o)| (r - o as f64).max(0.0))
        .collect()
}

/// Demand-slot index (1-based, wrapped modulo the day) covering horizon step
/// `k` issued from period `h2`.
fn future_slot(k: usize, h2: usize, cfg: &RhcConfig) -> usize {
    let minutes = (k + h2 - 1) * cfg.t2_minutes as usize;
    let slot = minutes.div_ceil(cfg.t1_minutes as usize);
    (slot - 1) % cfg.slots1() + 1
}

/// Demand vector for horizon step `k` (1-based): while the step's physical
/// time still falls inside the current slot it takes an H-th of the residual
/// demand, otherwise an H-th of the predicted vector of the future slot.
pub fn schedule_demand(
    k: usize,
    h1: usize,
    h2: usize,
    residual: &[f64],
    model: &DemandModel,
    cfg: &RhcConfig,
) -> Vec<f64> {
    let h = cfg.periods_per_slot() as f64;
    if (k + h2 - 1) * cfg.t2_minutes as usize <= h1 * cfg.t1_minutes as usize {
        residual.iter().map(|r| r / h).collect()
    } else {
        let slot = future_slot(k, h2, cfg);
        model.means[slot - 1].iter().map(|r| r / h).collect()
    }
}

/// Interval analogue of [`schedule_demand`]: the current slot deducts the
/// occupied-taxi capability from both interval bounds, future slots use the
/// model's bounds directly. Both clamp at zero, preserving order.
pub fn schedule_demand_interval(
    k: usize,
    h1: usize,
    h2: usize,
    r_o: &[u64],
    model: &DemandModel,
    cfg: &RhcConfig,
) -> (Vec<f64>, Vec<f64>) {
    let h = cfg.periods_per_slot() as f64;
    if (k + h2 - 1) * cfg.t2_minutes as usize <= h1 * cfg.t1_minutes as usize {
        let lo = model.lower[h1 - 1]
            .iter()
            .zip(r_o.iter())
            .map(|(&v, &o)| ((v - o as f64) / h).max(0.0))
            .collect();
        let hi = model.upper[h1 - 1]
            .iter()
            .zip(r_o.iter())
            .map(|(&v, &o)| ((v - o as f64) / h).max(0.0))
            .collect();
        (lo, hi)
    } else {
        let slot = future_slot(k, h2, cfg);
        let lo = model.lower[slot - 1].iter().map(|v| (v / h).max(0.0)).collect();
        let hi = model.upper[slot - 1].iter().map(|v| (v / h).max(0.0)).collect();
        (lo, hi)
    }
}

fn stay_in_place_orders(fleet: &FleetSnapshot, grid: &RegionGrid) -> Vec<DispatchOrder> {
    fleet
        .vacant
        .iter()
        .map(|taxi| {
            let region = assign_region(grid, taxi.position);
            DispatchOrder {
                taxi_id: taxi.id,
                from_region: region,
                to_region: region,
                target: taxi.position,
            }
        })
        .collect()
}

/// Execute one engine step against the current fleet snapshot: refresh the
/// slot-level demand at slot starts, build and solve the dispatch problem,
/// emit one order per vacant taxi, commit the orders against the residual
/// demand, and advance the period clock. A solver failure falls back to
/// stay-in-place orders; it never halts the loop.
pub fn rhc_step(
    state: &mut RhcState,
    model: &DemandModel,
    cfg: &RhcConfig,
    grid: &RegionGrid,
    stations: &StationTable,
) -> Result<RhcStepOutput, RhcError> {
    cfg.validate()?;
    let n = model.regions;
    state.h1 = cfg.slot1_of(state.h2);

    if cfg.starts_slot(state.h2) {
        let pd = dropoff_probability(&model.dropoffs[state.h1 - 1]);
        state.occupied_capability =
            occupied_service_capability(&pd, state.fleet.occupied_positions.len());
        state.working_demand =
            deduct_demand(&model.means[state.h1 - 1], &state.occupied_capability);
    }

    let n_vacant = state.fleet.vacant.len();
    let mut output = RhcStepOutput {
        orders: Vec::new(),
        plan: None,
        fallback: false,
    };

    if n_vacant > 0 {
        for taxi in &state.fleet.vacant {
            if taxi.id >= stations.taxis() {
                return Err(RhcError::UnknownTaxi { id: taxi.id });
            }
        }
        let demand = match cfg.mode {
            DispatchMode::Nominal => {
                let mut per_step = Vec::with_capacity(cfg.horizon);
                let mut totals = Vec::with_capacity(cfg.horizon);
                for k in 1..=cfg.horizon {
                    let r = schedule_demand(k, state.h1, state.h2, &state.working_demand, model, cfg);
                    totals.push(r.iter().sum());
                    per_step.push(r);
                }
                DemandSpec::Nominal { per_step, totals }
            }
            DispatchMode::Robust => {
                let mut lower = Vec::with_capacity(cfg.horizon);
                let mut upper = Vec::with_capacity(cfg.horizon);
                let mut totals = Vec::with_capacity(cfg.horizon);
                for k in 1..=cfg.horizon {
                    let (lo, hi) = schedule_demand_interval(
                        k,
                        state.h1,
                        state.h2,
                        &state.occupied_capability,
                        model,
                        cfg,
                    );
                    totals.push(
                        lo.iter().zip(hi.iter()).map(|(l, h)| 0.5 * (l + h)).sum::<f64>(),
                    );
                    lower.push(lo);
                    upper.push(hi);
                }
                DemandSpec::Interval { lower, upper, totals }
            }
        };
        // no-demand fixed point: with nothing predicted anywhere over the
        // horizon every assignment is mismatch-equivalent, so the cheapest
        // plan is to hold every taxi where it is
        let all_zero = match &demand {
            DemandSpec::Nominal { totals, .. } => totals.iter().all(|&t| t <= 1e-12),
            DemandSpec::Interval { totals, .. } => totals.iter().all(|&t| t <= 1e-12),
        };
        if all_zero {
            output.orders = stay_in_place_orders(&state.fleet, grid);
            state.h2 = state.h2 % cfg.slots2() + 1;
            state.h1 = cfg.slot1_of(state.h2);
            return Ok(output);
        }
        let mobility = (0..cfg.horizon.saturating_sub(1))
            .map(|idx| {
                let slot2 = (state.h2 + idx - 1) % cfg.slots2() + 1;
                model.mobility[slot2 - 1].clone()
            })
            .collect();
        let inst = DispatchInstance {
            taxis: n_vacant,
            regions: n,
            horizon: cfg.horizon,
            positions: state.fleet.vacant.iter().map(|t| t.position).collect(),
            stations: state
                .fleet
                .vacant
                .iter()
                .map(|t| stations.taxi(t.id).to_vec())
                .collect(),
            demand,
            mobility,
            alpha: cfg.alpha.iter().map(|&a| vec![a; n_vacant]).collect(),
            beta: cfg.beta.clone(),
        };
        match solve_dispatch(&inst, &cfg.solver) {
            Ok(plan) => {
                for (row, taxi) in state.fleet.vacant.iter().enumerate() {
                    let region0 = plan
                        .x1_rounded
                        .row(row)
                        .iter()
                        .position(|&v| v == 1.0)
                        .expect("rounded row has a one");
                    output.orders.push(DispatchOrder {
                        taxi_id: taxi.id,
                        from_region: assign_region(grid, taxi.position),
                        to_region: region0 + 1,
                        target: stations.station(taxi.id, region0 + 1),
                    });
                }
                output.plan = Some(plan);
            }
            Err(DispatchError::NotOptimal(_)) | Err(DispatchError::UnreachableTaxi { .. }) => {
                output.orders = stay_in_place_orders(&state.fleet, grid);
                output.fallback = true;
            }
            Err(other) => return Err(other.into()),
        }
        for order in &output.orders {
            let slot = &mut state.working_demand[order.to_region - 1];
            *slot = (*slot - 1.0).max(0.0);
        }
    }

    state.h2 = state.h2 % cfg.slots2() + 1;
    state.h1 = cfg.slot1_of(state.h2);
    Ok(output)
}

#[cfg(test)]
mod tests;
