use super::*;
use crate::dispatch::brute_force_dispatch;
use crate::geo::generate_stations;
use crate::matrix::Mat;
use alloc::vec;

/// Hand-built model: distinct means per slot so scheduling mistakes show up.
fn test_model(n: usize, t1: u32, t2: u32) -> DemandModel {
    let slots1 = (1440 / t1) as usize;
    let slots2 = (1440 / t2) as usize;
    let means: Vec<Vec<f64>> = (0..slots1)
        .map(|h| (0..n).map(|j| (h * n + j) as f64).collect())
        .collect();
    DemandModel {
        t1_minutes: t1,
        t2_minutes: t2,
        bootstrap_samples: 1,
        seed: 0,
        interval_multiplier: 1.0,
        regions: n,
        variances: vec![vec![0.0; n]; slots1],
        dropoffs: vec![vec![1.0; n]; slots1],
        lower: means.clone(),
        upper: means.clone(),
        means,
        mobility: vec![Mat::identity(n); slots2],
    }
}

fn test_cfg(t1: u32, t2: u32, horizon: usize, mode: DispatchMode) -> RhcConfig {
    RhcConfig {
        t1_minutes: t1,
        t2_minutes: t2,
        horizon,
        beta: vec![0.1; horizon],
        alpha: vec![10.0; horizon],
        mode,
        solver: SolverOptions::default(),
    }
}

fn grid_1xn(n: usize) -> RegionGrid {
    RegionGrid::new(0.0, 1.0, 0.0, n as f64, 1, n).unwrap()
}

#[test]
fn capability_uses_ceiling() {
    assert_eq!(occupied_service_capability(&[0.5, 0.5], 3), vec![2, 2]);
    assert_eq!(occupied_service_capability(&[0.4, 0.6], 0), vec![0, 0]);
    assert_eq!(occupied_service_capability(&[1.0, 0.0], 4), vec![4, 0]);
}

#[test]
fn deduction_clamps_at_zero() {
    assert_eq!(deduct_demand(&[5.0, 3.0], &[2, 2]), vec![3.0, 1.0]);
    assert_eq!(deduct_demand(&[1.0, 1.0], &[4, 0]), vec![0.0, 1.0]);
    assert_eq!(deduct_demand(&[2.5, 0.5], &[0, 0]), vec![2.5, 0.5]);
}

#[test]
fn schedule_two_case_rule() {
    let model = test_model(2, 60, 30);
    let cfg = test_cfg(60, 30, 3, DispatchMode::Nominal);
    let residual = vec![4.0, 8.0];
    // (k + h2 - 1) t2 <= h1 t1 keeps the residual branch
    assert_eq!(schedule_demand(1, 1, 1, &residual, &model, &cfg), vec![2.0, 4.0]);
    assert_eq!(schedule_demand(2, 1, 1, &residual, &model, &cfg), vec![2.0, 4.0]);
    // k = 3 crosses into slot 2: uses the model mean of slot 2 over H
    let expected: Vec<f64> = model.means[1].iter().map(|v| v / 2.0).collect();
    assert_eq!(schedule_demand(3, 1, 1, &residual, &model, &cfg), expected);
}

#[test]
fn schedule_wraps_at_day_boundary() {
    let model = test_model(2, 60, 60);
    let cfg = test_cfg(60, 60, 2, DispatchMode::Nominal);
    // last period of the day, k = 2 reaches into tomorrow's first slot
    let r = schedule_demand(2, 24, 24, &[0.0, 0.0], &model, &cfg);
    assert_eq!(r, model.means[0]);
}

#[test]
fn schedule_interval_consistency() {
    let model = test_model(3, 60, 30);
    let cfg = test_cfg(60, 30, 2, DispatchMode::Robust);
    // degenerate model intervals match the nominal rule at a slot start
    let r_o = vec![0, 0, 0];
    let residual = model.means[0].clone();
    for k in 1..=2 {
        let (lo, hi) = schedule_demand_interval(k, 1, 1, &r_o, &model, &cfg);
        let nominal = schedule_demand(k, 1, 1, &residual, &model, &cfg);
        assert_eq!(lo, nominal);
        assert_eq!(hi, nominal);
    }
}

#[test]
fn schedule_interval_clamps_capability() {
    let model = test_model(2, 60, 60);
    let cfg = test_cfg(60, 60, 1, DispatchMode::Robust);
    // slot-2 means are [2, 3]; capability larger than the lower bound clamps
    let (lo, hi) = schedule_demand_interval(1, 2, 2, &[5, 1], &model, &cfg);
    assert_eq!(lo, vec![0.0, 2.0]);
    assert_eq!(hi, vec![0.0, 2.0]);
}

#[test]
fn schedule_interval_h_equals_one_no_division() {
    let model = test_model(2, 60, 60);
    let cfg = test_cfg(60, 60, 1, DispatchMode::Robust);
    let (lo, hi) = schedule_demand_interval(1, 1, 1, &[0, 0], &model, &cfg);
    assert_eq!(lo, model.lower[0]);
    assert_eq!(hi, model.upper[0]);
}

#[test]
fn step_orders_own_region_when_demand_local() {
    let n = 2;
    let grid = grid_1xn(n);
    let mut model = test_model(n, 60, 60);
    for h in 0..model.slots1() {
        model.means[h] = vec![5.0, 0.0];
        model.lower[h] = vec![5.0, 0.0];
        model.upper[h] = vec![5.0, 0.0];
    }
    let cfg = test_cfg(60, 60, 1, DispatchMode::Nominal);
    let stations = generate_stations(&grid, 1, 7);
    let mut state = RhcState::new(1, &model, &cfg);
    state.fleet.vacant = vec![VacantTaxi {
        id: 0,
        position: GeoPoint::new(0.5, 0.5),
    }];
    let out = rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
    assert_eq!(out.orders.len(), 1);
    assert_eq!(out.orders[0].from_region, 1);
    assert_eq!(out.orders[0].to_region, 1);
    assert!(!out.fallback);
}

#[test]
fn step_with_empty_fleet_still_advances_clock() {
    let model = test_model(2, 60, 30);
    let cfg = test_cfg(60, 30, 1, DispatchMode::Nominal);
    let grid = grid_1xn(2);
    let stations = generate_stations(&grid, 1, 7);
    let mut state = RhcState::new(1, &model, &cfg);
    let out = rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
    assert!(out.orders.is_empty());
    assert_eq!(state.h2, 2);
}

#[test]
fn step_matches_brute_force_on_residual_demand() {
    let n = 2;
    let grid = grid_1xn(n);
    let mut model = test_model(n, 60, 60);
    for h in 0..model.slots1() {
        model.means[h] = vec![0.0, 2.0];
        model.lower[h] = vec![0.0, 2.0];
        model.upper[h] = vec![0.0, 2.0];
        model.dropoffs[h] = vec![1.0, 1.0];
    }
    let cfg = test_cfg(60, 60, 1, DispatchMode::Nominal);
    let stations = generate_stations(&grid, 2, 3);
    let mut state = RhcState::new(1, &model, &cfg);
    state.fleet.vacant = vec![
        VacantTaxi {
            id: 0,
            position: GeoPoint::new(0.5, 0.4),
        },
        VacantTaxi {
            id: 1,
            position: GeoPoint::new(0.5, 0.6),
        },
    ];
    let out = rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
    assert_eq!(out.orders.len(), 2);
    assert!(out.orders.iter().all(|o| o.to_region == 2));

    // the independent route: brute-force the equivalent one-step instance
    let inst = DispatchInstance {
        taxis: 2,
        regions: n,
        horizon: 1,
        positions: vec![GeoPoint::new(0.5, 0.4), GeoPoint::new(0.5, 0.6)],
        stations: vec![stations.taxi(0).to_vec(), stations.taxi(1).to_vec()],
        demand: DemandSpec::Nominal {
            per_step: vec![vec![0.0, 2.0]],
            totals: vec![2.0],
        },
        mobility: vec![],
        alpha: vec![vec![10.0; 2]],
        beta: vec![0.1],
    };
    let brute = brute_force_dispatch(&inst).unwrap().unwrap();
    let ordered: Vec<usize> = out.orders.iter().map(|o| o.to_region).collect();
    assert_eq!(ordered, brute.regions[0]);
}

#[test]
fn clock_wraps_after_a_day() {
    let model = test_model(2, 120, 30);
    let cfg = test_cfg(120, 30, 1, DispatchMode::Nominal);
    let grid = grid_1xn(2);
    let stations = generate_stations(&grid, 1, 7);
    let mut state = RhcState::new(1, &model, &cfg);
    let mut seen_slots = alloc::collections::BTreeSet::new();
    for _ in 0..cfg.slots2() {
        seen_slots.insert(state.h1);
        rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
    }
    assert_eq!(state.h2, 1);
    assert_eq!(state.h1, 1);
    assert_eq!(seen_slots.len(), cfg.slots1());
}

#[test]
fn robust_degenerate_equals_nominal_orders() {
    let n = 3;
    let grid = grid_1xn(n);
    let model = test_model(n, 60, 30);
    let stations = generate_stations(&grid, 4, 11);
    let fleet = FleetSnapshot {
        vacant: (0..4)
            .map(|id| VacantTaxi {
                id,
                position: GeoPoint::new(0.3 + 0.1 * id as f64, 0.5 + 0.6 * id as f64),
            })
            .collect(),
        occupied_positions: vec![],
    };
    let mut orders = Vec::new();
    for mode in [DispatchMode::Nominal, DispatchMode::Robust] {
        let cfg = test_cfg(60, 30, 2, mode);
        let mut state = RhcState::new(1, &model, &cfg);
        state.fleet = fleet.clone();
        let out = rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
        orders.push(out.orders);
    }
    assert_eq!(orders[0], orders[1]);
}

#[test]
fn working_demand_never_negative() {
    let n = 2;
    let grid = grid_1xn(n);
    let mut model = test_model(n, 120, 60);
    for h in 0..model.slots1() {
        model.means[h] = vec![0.4, 1.2];
    }
    let cfg = test_cfg(120, 60, 1, DispatchMode::Nominal);
    let stations = generate_stations(&grid, 3, 5);
    let mut state = RhcState::new(1, &model, &cfg);
    for step in 0..6 {
        state.fleet.vacant = (0..3)
            .map(|id| VacantTaxi {
                id,
                position: GeoPoint::new(0.5, 0.3 + 0.5 * id as f64),
            })
            .collect();
        let out = rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
        assert_eq!(out.orders.len(), 3, "step {step}");
        assert!(out
            .orders
            .iter()
            .all(|o| (1..=n).contains(&o.to_region) && (1..=n).contains(&o.from_region)));
        assert!(state.working_demand.iter().all(|&r| r >= 0.0));
    }
}

#[test]
fn infeasible_cap_falls_back_to_stay_in_place() {
    let n = 2;
    let grid = grid_1xn(n);
    let model = test_model(n, 60, 60);
    let stations = generate_stations(&grid, 1, 7);
    let mut cfg = test_cfg(60, 60, 1, DispatchMode::Nominal);
    cfg.alpha = vec![1e-6];
    let mut state = RhcState::new(1, &model, &cfg);
    let position = GeoPoint::new(0.9, 1.9);
    state.fleet.vacant = vec![VacantTaxi { id: 0, position }];
    let out = rhc_step(&mut state, &model, &cfg, &grid, &stations).unwrap();
    assert!(out.fallback);
    assert_eq!(out.orders.len(), 1);
    assert_eq!(out.orders[0].to_region, out.orders[0].from_region);
    assert_eq!(out.orders[0].target, position);
    assert_eq!(state.h2, 2);
}

#[test]
fn config_validation_catches_bad_clocks() {
    let mut cfg = test_cfg(60, 30, 1, DispatchMode::Nominal);
    cfg.t2_minutes = 45;
    assert!(matches!(cfg.validate(), Err(RhcError::Config(_))));
    let mut cfg = test_cfg(60, 30, 2, DispatchMode::Nominal);
    cfg.beta = vec![0.1];
    assert!(matches!(cfg.validate(), Err(RhcError::Config(_))));
    let cfg = test_cfg(60, 30, 2, DispatchMode::Nominal);
    assert!(cfg.validate().is_ok());
}
