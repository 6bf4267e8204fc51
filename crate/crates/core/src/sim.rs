//! Trace-driven and synthetic fleet simulation.
//!
//! The synthetic simulator advances in `t2`-minute ticks. Each tick it
//! releases finished trips, expires requests left over from the previous
//! demand slot, materializes new arrivals, (in dispatch mode) runs one
//! engine step and drives every ordered taxi to its target station, then
//! greedily binds vacant taxis to the nearest open request in their region.
//! Travel resolves instantaneously within the tick but mileage is accrued
//! exactly, split into idle (vacant) and trip (occupied) legs.
//!
//! The baseline arm runs the identical loop without dispatch orders; the
//! trace-replay baseline computes the same metrics directly from recorded
//! trajectories.

use alloc::vec;
use alloc::vec::Vec;

use crate::demand::DemandModel;
use crate::geo::{assign_region, deg_to_miles_with, manhattan_deg, GeoPoint, RegionGrid, StationTable};
use crate::matrix::Mat;
use crate::rhc::{rhc_step, DispatchOrder, FleetSnapshot, RhcConfig, RhcError, RhcState, VacantTaxi};
use crate::rng::{derive_seed, Rng64};
use crate::trace::{detect_events, trace_mileage, EventKind, MileageFilter, TaxiTrace};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("scenario invalid: {0}")]
    Invalid(&'static str),
    #[error("metrics have different slot counts ({0} vs {1})")]
    SlotMismatch(usize, usize),
    #[error("engine failed: {0}")]
    Rhc(#[from] RhcError),
}

/// Synthetic-demand generator settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub grid: RegionGrid,
    pub fleet_size: usize,
    pub t1_minutes: u32,
    pub t2_minutes: u32,
    pub days: u32,
    /// Poisson request rate per demand slot per region, `[slot][region - 1]`.
    pub rates: Vec<Vec<f64>>,
    /// Row-stochastic trip-destination matrix per demand slot.
    pub destinations: Vec<Mat>,
    /// Trip duration in ticks.
    pub trip_ticks: usize,
    pub miles_per_degree: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn slots1(&self) -> usize {
        (1440 / self.t1_minutes) as usize
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.t1_minutes == 0 || 1440 % self.t1_minutes != 0 {
            return Err(SimError::Invalid("t1 must divide 1440 minutes"));
        }
        if self.t2_minutes == 0 || !self.t1_minutes.is_multiple_of(self.t2_minutes) {
            return Err(SimError::Invalid("t2 must divide t1"));
        }
        if self.days == 0 {
            return Err(SimError::Invalid("at least one day"));
        }
        if self.trip_ticks == 0 {
            return Err(SimError::Invalid("trips last at least one tick"));
        }
        if !(self.miles_per_degree > 0.0) {
            return Err(SimError::Invalid("miles_per_degree must be positive"));
        }
        let n = self.grid.regions();
        if self.rates.len() != self.slots1() || self.rates.iter().any(|r| r.len() != n) {
            return Err(SimError::Invalid("rates shape mismatch"));
        }
        if self.rates.iter().flatten().any(|&r| !(r >= 0.0)) {
            return Err(SimError::Invalid("rates must be nonnegative"));
        }
        if self.destinations.len() != self.slots1() {
            return Err(SimError::Invalid("destination matrix count mismatch"));
        }
        for d in &self.destinations {
            if d.rows() != n || d.cols() != n {
                return Err(SimError::Invalid("destination matrix shape mismatch"));
            }
            for i in 0..n {
                let sum: f64 = d.row(i).iter().sum();
                if (sum - 1.0).abs() > 1e-9 || d.row(i).iter().any(|&v| v < 0.0) {
                    return Err(SimError::Invalid("destination row not stochastic"));
                }
            }
        }
        Ok(())
    }
}

/// One sampled customer request.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimRequest {
    pub id: usize,
    /// Tick (0-based from simulation start) at which the request opens.
    pub tick: usize,
    /// 1-based pickup region.
    pub region: usize,
    pub position: GeoPoint,
    /// 1-based destination region.
    pub dest_region: usize,
    pub dest_position: GeoPoint,
}

/// A fully materialized scenario: fleet start positions plus the request
/// stream, all pre-sampled so both simulation arms see identical demand.
#[derive(Clone, Debug, PartialEq)]
pub struct SimScenario {
    pub grid: RegionGrid,
    pub fleet_size: usize,
    pub t1_minutes: u32,
    pub t2_minutes: u32,
    pub ticks: usize,
    pub trip_ticks: usize,
    pub miles_per_degree: f64,
    pub initial_positions: Vec<GeoPoint>,
    pub requests: Vec<SimRequest>,
    pub seed: u64,
}

impl SimScenario {
    /// Ticks per demand slot, `H`.
    pub fn ticks_per_slot(&self) -> usize {
        (self.t1_minutes / self.t2_minutes) as usize
    }

    pub fn ticks_per_day(&self) -> usize {
        (1440 / self.t2_minutes) as usize
    }
}

fn uniform_in_cell(rng: &mut Rng64, grid: &RegionGrid, region: usize) -> GeoPoint {
    let (lat_lo, lat_hi, lon_lo, lon_hi) = grid.cell_bounds(region);
    GeoPoint::new(rng.uniform(lat_lo, lat_hi), rng.uniform(lon_lo, lon_hi))
}

/// Sample a scenario: per (day, slot, region) the request count is Poisson
/// at the configured rate, each request lands on a uniform tick of the slot
/// and a uniform position in its region, with the destination drawn from
/// the slot's destination matrix. Deterministic under the seed.
pub fn synthesize_scenario(spec: &ScenarioSpec) -> Result<SimScenario, SimError> {
    spec.validate()?;
    let mut rng = Rng64::new(derive_seed(spec.seed, "scenario", 0));
    let n = spec.grid.regions();
    let ticks_per_slot = (spec.t1_minutes / spec.t2_minutes) as usize;
    let initial_positions: Vec<GeoPoint> = (0..spec.fleet_size)
        .map(|_| {
            GeoPoint::new(
                rng.uniform(spec.grid.min_lat, spec.grid.max_lat),
                rng.uniform(spec.grid.min_lon, spec.grid.max_lon),
            )
        })
        .collect();
    let mut requests = Vec::new();
    for day in 0..spec.days as usize {
        for slot in 1..=spec.slots1() {
            let slot_base = (day * spec.slots1() + slot - 1) * ticks_per_slot;
            for region in 1..=n {
                let count = rng.poisson(spec.rates[slot - 1][region - 1]);
                for _ in 0..count {
                    let tick = slot_base + rng.index(ticks_per_slot);
                    let position = uniform_in_cell(&mut rng, &spec.grid, region);
                    let dest_region =
                        rng.categorical(spec.destinations[slot - 1].row(region - 1)) + 1;
                    let dest_position = uniform_in_cell(&mut rng, &spec.grid, dest_region);
                    requests.push(SimRequest {
                        id: requests.len(),
                        tick,
                        region,
                        position,
                        dest_region,
                        dest_position,
                    });
                }
            }
        }
    }
    requests.sort_by_key(|r| (r.tick, r.id));
    Ok(SimScenario {
        grid: spec.grid.clone(),
        fleet_size: spec.fleet_size,
        t1_minutes: spec.t1_minutes,
        t2_minutes: spec.t2_minutes,
        ticks: spec.days as usize * spec.slots1() * ticks_per_slot,
        trip_ticks: spec.trip_ticks,
        miles_per_degree: spec.miles_per_degree,
        initial_positions,
        requests,
        seed: spec.seed,
    })
}

/// Demand model implied by a scenario's generator: request means equal the
/// Poisson rates (variance equal to the mean), drop-off vectors follow the
/// destination matrices, and vacant-taxi mobility is stay-in-region.
pub fn demand_model_from_scenario(spec: &ScenarioSpec, interval_multiplier: f64) -> DemandModel {
    let n = spec.grid.regions();
    let slots1 = spec.slots1();
    let slots2 = (1440 / spec.t2_minutes) as usize;
    let means = spec.rates.clone();
    let variances = spec.rates.clone();
    let mut dropoffs = Vec::with_capacity(slots1);
    for h in 0..slots1 {
        let mut dp = vec![0.0; n];
        for from in 0..n {
            let rate = spec.rates[h][from];
            for (to, dp_to) in dp.iter_mut().enumerate() {
                *dp_to += rate * spec.destinations[h][(from, to)];
            }
        }
        dropoffs.push(dp);
    }
    let mut lower = Vec::with_capacity(slots1);
    let mut upper = Vec::with_capacity(slots1);
    for mean in &means {
        // Poisson counts: variance equals the mean
        let (lo, hi) = crate::demand::demand_interval(mean, mean, interval_multiplier);
        lower.push(lo);
        upper.push(hi);
    }
    DemandModel {
        t1_minutes: spec.t1_minutes,
        t2_minutes: spec.t2_minutes,
        bootstrap_samples: 0,
        seed: spec.seed,
        interval_multiplier,
        regions: n,
        means,
        variances,
        dropoffs,
        lower,
        upper,
        mobility: vec![Mat::identity(n); slots2],
    }
}

/// Per-tick metrics row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotMetric {
    /// One-norm distance between the vacant-supply share and the open-demand
    /// share, in `[0, 2]`.
    pub mismatch_error: f64,
    /// Idle miles accrued during the tick.
    pub idle_miles: f64,
}

/// Aggregated simulation metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct SimMetrics {
    pub t2_minutes: u32,
    pub per_slot: Vec<SlotMetric>,
    pub total_idle_miles: f64,
    pub total_trip_miles: f64,
    pub mean_mismatch_error: f64,
    /// Idle miles per hour of day (24 buckets, summed across days).
    pub idle_by_hour: Vec<f64>,
    /// Vacant taxi-ticks accumulated per region.
    pub region_vacant_ticks: Vec<f64>,
    /// Requests observed per region.
    pub region_requests: Vec<f64>,
    pub served_requests: usize,
    pub expired_requests: usize,
    /// Dispatch steps that fell back to stay-in-place orders because the
    /// solver could not produce a plan. Always zero for the baseline arm.
    pub fallback_steps: usize,
}

impl SimMetrics {
    /// Supply-demand ratio per region over the whole run (vacant taxi-ticks
    /// per request); `None` where no requests landed.
    pub fn region_ratios(&self) -> Vec<Option<f64>> {
        self.region_vacant_ticks
            .iter()
            .zip(self.region_requests.iter())
            .map(|(&v, &r)| if r > 0.0 { Some(v / r) } else { None })
            .collect()
    }
}

/// One emitted order with the tick it was issued on (1-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderRecord {
    pub step: usize,
    pub order: DispatchOrder,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct TaxiSim {
    position: GeoPoint,
    /// Vacant when `None`; otherwise the tick at which the trip ends and
    /// the destination it ends at.
    busy: Option<(usize, GeoPoint)>,
    idle_deg: f64,
    trip_deg: f64,
}

enum Arm<'a> {
    Baseline,
    Dispatch {
        model: &'a DemandModel,
        cfg: &'a RhcConfig,
        stations: &'a StationTable,
    },
}

/// Run the dispatch arm: the receding-horizon engine drives taxis to
/// stations each tick before greedy in-region matching.
pub fn run_dispatch_sim(
    scenario: &SimScenario,
    model: &DemandModel,
    cfg: &RhcConfig,
    stations: &StationTable,
) -> Result<(SimMetrics, Vec<OrderRecord>), SimError> {
    if model.t1_minutes != scenario.t1_minutes || model.t2_minutes != scenario.t2_minutes {
        return Err(SimError::Invalid("model clocks differ from scenario clocks"));
    }
    if cfg.t1_minutes != scenario.t1_minutes || cfg.t2_minutes != scenario.t2_minutes {
        return Err(SimError::Invalid("engine clocks differ from scenario clocks"));
    }
    if stations.taxis() < scenario.fleet_size {
        return Err(SimError::Invalid("station table smaller than the fleet"));
    }
    run_sim(
        scenario,
        Arm::Dispatch {
            model,
            cfg,
            stations,
        },
    )
}

/// Run the no-dispatch baseline: taxis never leave their region except by
/// carrying passengers; matching is the same greedy nearest-request rule.
pub fn run_baseline(scenario: &SimScenario) -> Result<SimMetrics, SimError> {
    run_sim(scenario, Arm::Baseline).map(|(metrics, _)| metrics)
}

fn run_sim(scenario: &SimScenario, arm: Arm<'_>) -> Result<(SimMetrics, Vec<OrderRecord>), SimError> {
    let grid = &scenario.grid;
    let n = grid.regions();
    let fleet = scenario.fleet_size;
    let ticks_per_slot = scenario.ticks_per_slot();
    let mut taxis: Vec<TaxiSim> = scenario
        .initial_positions
        .iter()
        .map(|&position| TaxiSim {
            position,
            busy: None,
            idle_deg: 0.0,
            trip_deg: 0.0,
        })
        .collect();
    let mut engine_state = match &arm {
        Arm::Baseline => None,
        Arm::Dispatch { model, cfg, .. } => {
            cfg.validate()?;
            Some(RhcState::new(1, model, cfg))
        }
    };

    let mut open: Vec<SimRequest> = Vec::new();
    let mut next_request = 0usize;
    let mut per_slot = Vec::with_capacity(scenario.ticks);
    let mut idle_by_hour = vec![0.0; 24];
    let mut region_vacant_ticks = vec![0.0; n];
    let mut region_requests = vec![0.0; n];
    let mut served = 0usize;
    let mut expired = 0usize;
    let mut fallback_steps = 0usize;
    let mut order_log = Vec::new();

    for tick in 0..scenario.ticks {
        // finished trips rejoin the vacant pool at their destination
        for taxi in taxis.iter_mut() {
            if let Some((until, dest)) = taxi.busy {
                if until <= tick {
                    taxi.position = dest;
                    taxi.busy = None;
                }
            }
        }
        // unserved requests expire when their demand slot ends
        if tick % ticks_per_slot == 0 {
            expired += open.len();
            open.clear();
        }
        // arrivals
        while next_request < scenario.requests.len()
            && scenario.requests[next_request].tick == tick
        {
            let req = scenario.requests[next_request];
            region_requests[req.region - 1] += 1.0;
            open.push(req);
            next_request += 1;
        }

        let idle_before: f64 = taxis.iter().map(|t| t.idle_deg).sum();

        // dispatch orders move vacant taxis to their target stations
        if let (Arm::Dispatch { model, cfg, stations }, Some(state)) = (&arm, engine_state.as_mut())
        {
            state.fleet = FleetSnapshot {
                vacant: taxis
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.busy.is_none())
                    .map(|(id, t)| VacantTaxi {
                        id,
                        position: t.position,
                    })
                    .collect(),
                occupied_positions: taxis
                    .iter()
                    .filter(|t| t.busy.is_some())
                    .map(|t| t.position)
                    .collect(),
            };
            let out = rhc_step(state, model, cfg, grid, stations)?;
            if out.fallback {
                fallback_steps += 1;
            }
            for order in out.orders {
                let taxi = &mut taxis[order.taxi_id];
                taxi.idle_deg += manhattan_deg(taxi.position, order.target);
                taxi.position = order.target;
                order_log.push(OrderRecord {
                    step: tick + 1,
                    order,
                });
            }
        }

        // post-order supply-demand mismatch
        let vacant_count = taxis.iter().filter(|t| t.busy.is_none()).count();
        let mut vacant_per_region = vec![0.0; n];
        for taxi in taxis.iter().filter(|t| t.busy.is_none()) {
            let region = assign_region(grid, taxi.position);
            vacant_per_region[region - 1] += 1.0;
            region_vacant_ticks[region - 1] += 1.0;
        }
        let open_total = open.len() as f64;
        let mismatch_error = if open_total == 0.0 {
            0.0
        } else {
            let mut open_per_region = vec![0.0; n];
            for req in &open {
                open_per_region[req.region - 1] += 1.0;
            }
            (0..n)
                .map(|j| {
                    let supply_share = if vacant_count > 0 {
                        vacant_per_region[j] / vacant_count as f64
                    } else {
                        0.0
                    };
                    (supply_share - open_per_region[j] / open_total).abs()
                })
                .sum()
        };

        // greedy matching: taxis in id order take the nearest open request
        // in their region, ties to the lowest request id
        for taxi in taxis.iter_mut() {
            if taxi.busy.is_some() {
                continue;
            }
            let region = assign_region(grid, taxi.position);
            let mut best: Option<(usize, f64, usize)> = None; // (pool slot, distance, id)
            for (slot, req) in open.iter().enumerate() {
                if req.region != region {
                    continue;
                }
                let d = manhattan_deg(taxi.position, req.position);
                let closer = best.is_none_or(|(_, bd, bid)| d < bd || (d == bd && req.id < bid));
                if closer {
                    best = Some((slot, d, req.id));
                }
            }
            if let Some((slot, approach, _)) = best {
                let req = open.remove(slot);
                taxi.idle_deg += approach;
                taxi.trip_deg += manhattan_deg(req.position, req.dest_position);
                taxi.busy = Some((tick + scenario.trip_ticks, req.dest_position));
                served += 1;
            }
        }

        let idle_after: f64 = taxis.iter().map(|t| t.idle_deg).sum();
        let idle_miles = deg_to_miles_with(idle_after - idle_before, scenario.miles_per_degree);
        let hour = (tick % scenario.ticks_per_day()) * scenario.t2_minutes as usize / 60;
        idle_by_hour[hour % 24] += idle_miles;
        per_slot.push(SlotMetric {
            mismatch_error,
            idle_miles,
        });

        debug_assert_eq!(taxis.len(), fleet);
    }
    expired += open.len();
    // every sampled request either got served or expired
    debug_assert_eq!(next_request, scenario.requests.len());
    debug_assert_eq!(served + expired, scenario.requests.len());

    let total_idle_deg: f64 = taxis.iter().map(|t| t.idle_deg).sum();
    let total_trip_deg: f64 = taxis.iter().map(|t| t.trip_deg).sum();
    let mean_mismatch_error = if per_slot.is_empty() {
        0.0
    } else {
        per_slot.iter().map(|m| m.mismatch_error).sum::<f64>() / per_slot.len() as f64
    };
    Ok((
        SimMetrics {
            t2_minutes: scenario.t2_minutes,
            per_slot,
            total_idle_miles: deg_to_miles_with(total_idle_deg, scenario.miles_per_degree),
            total_trip_miles: deg_to_miles_with(total_trip_deg, scenario.miles_per_degree),
            mean_mismatch_error,
            idle_by_hour,
            region_vacant_ticks,
            region_requests,
            served_requests: served,
            expired_requests: expired,
            fallback_steps,
        },
        order_log,
    ))
}

/// Baseline metrics computed directly from recorded trajectories: idle
/// mileage from vacant trace segments, and per-slot mismatch between the
/// vacant-fleet distribution and the pickup distribution.
pub fn replay_baseline(
    traces: &[TaxiTrace],
    grid: &RegionGrid,
    t2_minutes: u32,
    miles_per_degree: f64,
) -> Result<SimMetrics, SimError> {
    if t2_minutes == 0 || 1440 % t2_minutes != 0 {
        return Err(SimError::Invalid("t2 must divide 1440 minutes"));
    }
    let n = grid.regions();
    let span = t2_minutes as i64 * 60;
    let mut t_min = i64::MAX;
    let mut t_max = i64::MIN;
    for taxi in traces {
        if let (Some(first), Some(last)) = (taxi.records.first(), taxi.records.last()) {
            t_min = t_min.min(first.timestamp);
            t_max = t_max.max(last.timestamp);
        }
    }
    if t_min > t_max {
        return Err(SimError::Invalid("traces contain no records"));
    }
    let first_slot = t_min.div_euclid(span);
    let last_slot = t_max.div_euclid(span);
    let slots = (last_slot - first_slot + 1) as usize;

    let mut pickups_per_slot = vec![vec![0.0; n]; slots];
    let mut region_requests = vec![0.0; n];
    for taxi in traces {
        for event in detect_events(&taxi.records, grid) {
            if event.kind == EventKind::Pickup {
                let slot = (event.timestamp.div_euclid(span) - first_slot) as usize;
                pickups_per_slot[slot][event.region - 1] += 1.0;
                region_requests[event.region - 1] += 1.0;
            }
        }
    }

    let mut idle_per_slot = vec![0.0; slots];
    let mut idle_by_hour = vec![0.0; 24];
    for taxi in traces {
        for pair in taxi.records.windows(2) {
            let (prev, next) = (pair[0], pair[1]);
            if !prev.occupied {
                let miles =
                    deg_to_miles_with(manhattan_deg(prev.point, next.point), miles_per_degree);
                let slot = (prev.timestamp.div_euclid(span) - first_slot) as usize;
                idle_per_slot[slot] += miles;
                let hour = (prev.timestamp.rem_euclid(86_400) / 3600) as usize;
                idle_by_hour[hour % 24] += miles;
            }
        }
    }

    let mut per_slot = Vec::with_capacity(slots);
    let mut region_vacant_ticks = vec![0.0; n];
    for slot in 0..slots {
        let boundary = (first_slot + slot as i64) * span;
        let mut vacant_per_region = vec![0.0; n];
        let mut vacant_count = 0.0;
        for taxi in traces {
            // latest record at or before the slot boundary gives the state
            let state = taxi
                .records
                .iter()
                .take_while(|r| r.timestamp <= boundary)
                .last();
            if let Some(rec) = state {
                if !rec.occupied {
                    vacant_per_region[assign_region(grid, rec.point) - 1] += 1.0;
                    vacant_count += 1.0;
                }
            }
        }
        for (ticks, v) in region_vacant_ticks.iter_mut().zip(vacant_per_region.iter()) {
            *ticks += v;
        }
        let pickups = &pickups_per_slot[slot];
        let total_pickups: f64 = pickups.iter().sum();
        let mismatch_error = if total_pickups == 0.0 {
            0.0
        } else {
            (0..n)
                .map(|j| {
                    let supply = if vacant_count > 0.0 {
                        vacant_per_region[j] / vacant_count
                    } else {
                        0.0
                    };
                    (supply - pickups[j] / total_pickups).abs()
                })
                .sum()
        };
        per_slot.push(SlotMetric {
            mismatch_error,
            idle_miles: idle_per_slot[slot],
        });
    }

    let total_idle_miles: f64 = idle_per_slot.iter().sum();
    let total_trip_miles: f64 = traces
        .iter()
        .map(|t| {
            trace_mileage(&t.records, MileageFilter::OccupiedOnly) * miles_per_degree
                / crate::geo::MILES_PER_DEGREE
        })
        .sum();
    let mean_mismatch_error = if per_slot.is_empty() {
        0.0
    } else {
        per_slot.iter().map(|m| m.mismatch_error).sum::<f64>() / per_slot.len() as f64
    };
    let served: f64 = region_requests.iter().sum();
    Ok(SimMetrics {
        t2_minutes,
        per_slot,
        total_idle_miles,
        total_trip_miles,
        mean_mismatch_error,
        idle_by_hour,
        region_vacant_ticks,
        region_requests,
        served_requests: served as usize,
        expired_requests: 0,
        fallback_steps: 0,
    })
}

/// Percentage changes of a candidate run against a reference run; negative
/// values mean the candidate reduced the metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsComparison {
    pub idle_change_pct: f64,
    pub mismatch_change_pct: f64,
}

fn pct_change(candidate: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        if candidate == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (candidate - reference) / reference * 100.0
    }
}

/// Compare two metric sets with the same slot structure.
pub fn compare_metrics(
    candidate: &SimMetrics,
    reference: &SimMetrics,
) -> Result<MetricsComparison, SimError> {
    if candidate.per_slot.len() != reference.per_slot.len() {
        return Err(SimError::SlotMismatch(
            candidate.per_slot.len(),
            reference.per_slot.len(),
        ));
    }
    Ok(MetricsComparison {
        idle_change_pct: pct_change(candidate.total_idle_miles, reference.total_idle_miles),
        mismatch_change_pct: pct_change(
            candidate.mean_mismatch_error,
            reference.mean_mismatch_error,
        ),
    })
}
