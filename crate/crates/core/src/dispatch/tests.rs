use super::*;
use crate::geo::{generate_stations, RegionGrid};
use crate::rng::Rng64;
use alloc::vec;

fn point(lat: f64, lon: f64) -> GeoPoint {
    GeoPoint::new(lat, lon)
}

/// One-step instance over two regions with stations at fixed corners.
fn two_region_instance(position: GeoPoint, r: [f64; 2], beta: f64, alpha: f64) -> DispatchInstance {
    DispatchInstance {
        taxis: 1,
        regions: 2,
        horizon: 1,
        positions: vec![position],
        stations: vec![vec![point(0.0, 0.0), point(0.0, 1.0)]],
        demand: DemandSpec::Nominal {
            per_step: vec![r.to_vec()],
            totals: vec![r.iter().sum()],
        },
        mobility: vec![],
        alpha: vec![vec![alpha]],
        beta: vec![beta],
    }
}

/// Random valid instance with generous caps.
fn random_instance(rng: &mut Rng64, interval: bool) -> DispatchInstance {
    let n_taxis = 1 + rng.index(4);
    let regions = 1 + rng.index(3);
    let horizon = 1 + rng.index(2);
    let grid = RegionGrid::new(0.0, 1.0, 0.0, 1.0, 1, regions).unwrap();
    let stations = generate_stations(&grid, n_taxis, rng.next_u64());
    let positions: Vec<GeoPoint> = (0..n_taxis)
        .map(|_| point(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)))
        .collect();
    let mut mobility = Vec::new();
    for _ in 1..horizon {
        let rows: Vec<Vec<f64>> = (0..regions)
            .map(|_| {
                let raw: Vec<f64> = (0..regions).map(|_| rng.uniform(0.0, 1.0)).collect();
                let sum: f64 = raw.iter().sum();
                raw.iter().map(|v| v / sum).collect()
            })
            .collect();
        mobility.push(Mat::from_rows(&rows));
    }
    let demand = if interval {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut totals = Vec::new();
        for _ in 0..horizon {
            let lo: Vec<f64> = (0..regions).map(|_| rng.uniform(0.0, 3.0)).collect();
            let hi: Vec<f64> = lo.iter().map(|l| l + rng.uniform(0.0, 2.0)).collect();
            totals.push(lo.iter().zip(hi.iter()).map(|(l, h)| 0.5 * (l + h)).sum::<f64>().max(0.5));
            lower.push(lo);
            upper.push(hi);
        }
        DemandSpec::Interval { lower, upper, totals }
    } else {
        let mut per_step = Vec::new();
        let mut totals = Vec::new();
        for _ in 0..horizon {
            let r: Vec<f64> = (0..regions).map(|_| rng.uniform(0.0, 4.0)).collect();
            totals.push(r.iter().sum::<f64>().max(0.5));
            per_step.push(r);
        }
        DemandSpec::Nominal { per_step, totals }
    };
    DispatchInstance {
        taxis: n_taxis,
        regions,
        horizon,
        positions,
        stations: (0..n_taxis).map(|i| stations.taxi(i).to_vec()).collect(),
        demand,
        mobility,
        alpha: vec![vec![5.0; n_taxis]; horizon],
        beta: (0..horizon).map(|_| rng.uniform(0.0, 1.0)).collect(),
    }
}

#[test]
fn expected_position_identity_mobility() {
    let stations = [point(1.0, 2.0), point(3.0, 4.0)];
    let pos = expected_end_position(&[0.0, 1.0], &Mat::identity(2), &stations).unwrap();
    assert_eq!(pos, point(3.0, 4.0));
}

#[test]
fn expected_position_convex_combination() {
    let stations = [point(0.0, 0.0), point(1.0, 1.0)];
    let c = Mat::from_rows(&[vec![0.5, 0.5], vec![0.0, 1.0]]);
    let pos = expected_end_position(&[1.0, 0.0], &c, &stations).unwrap();
    assert_eq!(pos, point(0.5, 0.5));
}

#[test]
fn expected_position_uniform_row_is_centroid() {
    let stations = [point(0.0, 0.0), point(2.0, 0.0), point(1.0, 3.0)];
    let pos = expected_end_position(&[1.0 / 3.0; 3], &Mat::identity(3), &stations).unwrap();
    assert!((pos.lat - 1.0).abs() < 1e-12);
    assert!((pos.lon - 1.0).abs() < 1e-12);
}

#[test]
fn expected_position_dimension_error() {
    let stations = [point(0.0, 0.0)];
    assert!(expected_end_position(&[1.0, 0.0], &Mat::identity(2), &stations).is_err());
}

#[test]
fn nominal_all_demand_in_second_region() {
    // enumeration: J_E([1,0]) = 2, J_E([0,1]) = 0 with beta = 0
    let inst = two_region_instance(point(0.0, 0.0), [0.0, 1.0], 0.0, 5.0);
    let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
    assert!(plan.lp_objective.abs() < 1e-9);
    assert_eq!(plan.x1_rounded.row(0), &[0.0, 1.0]);
    let brute = brute_force_dispatch(&inst).unwrap().unwrap();
    assert_eq!(brute.regions[0], vec![2]);
    assert!(brute.objective.total.abs() < 1e-12);
}

#[test]
fn nominal_distance_term_dominates() {
    // taxi parked on its region-1 station; huge beta keeps it there
    let inst = two_region_instance(point(0.0, 0.0), [0.0, 1.0], 1e6, 5.0);
    let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
    assert_eq!(plan.x1_rounded.row(0), &[1.0, 0.0]);
    assert!(plan.distances[0][0] < 1e-9);
    // enumeration: staying costs J_E = 2, moving costs 1e6 * 1
    assert!((plan.lp_objective - 2.0).abs() < 1e-6);
}

#[test]
fn nominal_perfectly_matched_supply() {
    let inst = DispatchInstance {
        taxis: 2,
        regions: 2,
        horizon: 1,
        positions: vec![point(0.0, 0.0), point(0.0, 1.0)],
        stations: vec![
            vec![point(0.0, 0.0), point(0.0, 1.0)],
            vec![point(0.0, 0.0), point(0.0, 1.0)],
        ],
        demand: DemandSpec::Nominal {
            per_step: vec![vec![1.0, 1.0]],
            totals: vec![2.0],
        },
        mobility: vec![],
        alpha: vec![vec![5.0; 2]],
        beta: vec![1.0],
    };
    let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
    assert!(plan.lp_objective.abs() < 1e-9);
    assert_eq!(plan.x1_rounded.row(0), &[1.0, 0.0]);
    assert_eq!(plan.x1_rounded.row(1), &[0.0, 1.0]);
    assert!(plan.objective.total.abs() < 1e-9);
}

#[test]
fn unreachable_taxi_reported() {
    // stations far north of the taxi, cap below the box lower bound
    let inst = DispatchInstance {
        taxis: 1,
        regions: 2,
        horizon: 1,
        positions: vec![point(0.0, 0.0)],
        stations: vec![vec![point(2.0, 0.0), point(2.5, 0.5)]],
        demand: DemandSpec::Nominal {
            per_step: vec![vec![1.0, 0.0]],
            totals: vec![1.0],
        },
        mobility: vec![],
        alpha: vec![vec![0.5]],
        beta: vec![0.0],
    };
    match build_nominal_lp(&inst) {
        Err(DispatchError::UnreachableTaxi { taxi: 0, .. }) => {}
        other => panic!("expected UnreachableTaxi, got {other:?}"),
    }
}

#[test]
fn solver_detects_deep_infeasibility_past_box_screen() {
    // position inside the station bounding box but far from the segment
    // between the two stations, with a cap in between
    let inst = DispatchInstance {
        taxis: 1,
        regions: 2,
        horizon: 1,
        positions: vec![point(0.9, -0.9)],
        stations: vec![vec![point(0.0, -1.0), point(1.0, 1.0)]],
        demand: DemandSpec::Nominal {
            per_step: vec![vec![1.0, 0.0]],
            totals: vec![1.0],
        },
        mobility: vec![],
        alpha: vec![vec![0.5]],
        beta: vec![0.0],
    };
    // the screen passes (box distance is 0) but no convex combination of
    // the stations is within 0.5 in L1
    match solve_dispatch(&inst, &SolverOptions::default()) {
        Err(DispatchError::NotOptimal(LpStatus::Infeasible)) => {}
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn robust_degenerate_interval_matches_nominal() {
    let mut rng = Rng64::new(51);
    for _ in 0..20 {
        let nominal = random_instance(&mut rng, false);
        let (per_step, totals) = match &nominal.demand {
            DemandSpec::Nominal { per_step, totals } => (per_step.clone(), totals.clone()),
            _ => unreachable!(),
        };
        let mut robust = nominal.clone();
        robust.demand = DemandSpec::Interval {
            lower: per_step.clone(),
            upper: per_step,
            totals,
        };
        let a = solve_dispatch(&nominal, &SolverOptions::default()).unwrap();
        let b = solve_dispatch(&robust, &SolverOptions::default()).unwrap();
        assert!(
            (a.lp_objective - b.lp_objective).abs() < 1e-8,
            "nominal {} robust {}",
            a.lp_objective,
            b.lp_objective
        );
    }
}

#[test]
fn worst_case_term_examined_at_endpoints() {
    // max over r in [0,2] of |0.5 - r/1| = max(0.5, 1.5) = 1.5
    assert!((worst_case_mismatch_term(0.5, 0.0, 2.0, 1.0) - 1.5).abs() < 1e-15);
    // grid scan never exceeds the endpoint maximum
    let mut rng = Rng64::new(61);
    for _ in 0..500 {
        let lo = rng.uniform(0.0, 3.0);
        let hi = lo + rng.uniform(0.0, 3.0);
        let total = rng.uniform(0.5, 4.0);
        let share = rng.uniform(0.0, 1.0);
        let endpoint_max = worst_case_mismatch_term(share, lo, hi, total);
        for step in 0..=100 {
            let r = lo + (hi - lo) * step as f64 / 100.0;
            assert!((share - r / total).abs() <= endpoint_max + 1e-12);
        }
        let at_lo = (share - lo / total).abs();
        let at_hi = (share - hi / total).abs();
        assert_eq!(endpoint_max, at_lo.max(at_hi));
    }
}

#[test]
fn robust_lp_within_corner_oracle_bound() {
    let mut rng = Rng64::new(71);
    let mut checked = 0;
    for _ in 0..30 {
        let mut inst = random_instance(&mut rng, true);
        inst.horizon = 1;
        inst.mobility.clear();
        if let DemandSpec::Interval { lower, upper, totals } = &mut inst.demand {
            lower.truncate(1);
            upper.truncate(1);
            totals.truncate(1);
        }
        inst.alpha.truncate(1);
        inst.beta.truncate(1);
        let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
        if let Some(brute) = brute_force_dispatch(&inst).unwrap() {
            assert!(
                plan.lp_objective <= brute.objective.total + 1e-6,
                "relaxed {} > binary corner-max {}",
                plan.lp_objective,
                brute.objective.total
            );
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn rounding_rules() {
    let x = Mat::from_rows(&[vec![0.3, 0.7], vec![0.5, 0.5], vec![0.0, 1.0]]);
    let rounded = round_first_step(&x);
    assert_eq!(rounded.row(0), &[0.0, 1.0]);
    // tie breaks toward the lowest region index
    assert_eq!(rounded.row(1), &[1.0, 0.0]);
    // binary rows are unchanged
    assert_eq!(rounded.row(2), &[0.0, 1.0]);
    assert_eq!(round_first_step(&rounded), rounded);
}

#[test]
fn evaluate_matches_demand_proportions() {
    let inst = DispatchInstance {
        taxis: 2,
        regions: 2,
        horizon: 1,
        positions: vec![point(0.0, 0.0), point(0.0, 1.0)],
        stations: vec![
            vec![point(0.0, 0.0), point(0.0, 1.0)],
            vec![point(0.0, 0.0), point(0.0, 1.0)],
        ],
        demand: DemandSpec::Nominal {
            per_step: vec![vec![3.0, 3.0]],
            totals: vec![6.0],
        },
        mobility: vec![],
        alpha: vec![vec![5.0; 2]],
        beta: vec![0.0],
    };
    let x = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let obj = evaluate_objective(&inst, &[x]).unwrap();
    assert!(obj.mismatch[0].abs() < 1e-15);
}

#[test]
fn evaluate_direct_formula() {
    let inst = two_region_instance(point(0.0, 0.0), [1.0, 0.0], 0.0, 5.0);
    let x = Mat::from_rows(&[vec![0.0, 1.0]]);
    let obj = evaluate_objective(&inst, &[x]).unwrap();
    // per-region |0 - 1| + |1 - 0| = 2
    assert!((obj.mismatch[0] - 2.0).abs() < 1e-15);
}

#[test]
fn evaluate_consistent_with_lp_optimum() {
    let mut rng = Rng64::new(81);
    for _ in 0..25 {
        let inst = random_instance(&mut rng, false);
        let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
        let re_eval = evaluate_objective(&inst, &plan.x).unwrap();
        assert!(
            (re_eval.total - plan.lp_objective).abs() < 1e-7,
            "evaluate {} vs lp {}",
            re_eval.total,
            plan.lp_objective
        );
    }
}

#[test]
fn relaxation_never_exceeds_brute_force() {
    let mut rng = Rng64::new(91);
    let mut compared = 0;
    for _ in 0..50 {
        let inst = random_instance(&mut rng, false);
        let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
        let Some(brute) = brute_force_dispatch(&inst).unwrap() else {
            continue;
        };
        assert!(
            plan.lp_objective <= brute.objective.total + 1e-6,
            "lp {} > brute {}",
            plan.lp_objective,
            brute.objective.total
        );
        // rounded first step can never beat the relaxation
        let mut rounded_seq = plan.x.clone();
        rounded_seq[0] = plan.x1_rounded.clone();
        let rounded_obj = evaluate_objective(&inst, &rounded_seq).unwrap();
        assert!(rounded_obj.total >= plan.lp_objective - 1e-7);
        compared += 1;
    }
    assert!(compared >= 40);
}

#[test]
fn robust_dominates_nominal_member() {
    let mut rng = Rng64::new(101);
    for _ in 0..20 {
        let robust_inst = random_instance(&mut rng, true);
        let (lower, upper, totals) = match &robust_inst.demand {
            DemandSpec::Interval { lower, upper, totals } => {
                (lower.clone(), upper.clone(), totals.clone())
            }
            _ => unreachable!(),
        };
        // nominal demand at the interval midpoint, same denominator
        let mid: Vec<Vec<f64>> = lower
            .iter()
            .zip(upper.iter())
            .map(|(lo, hi)| lo.iter().zip(hi.iter()).map(|(l, h)| 0.5 * (l + h)).collect())
            .collect();
        let mut nominal_inst = robust_inst.clone();
        nominal_inst.demand = DemandSpec::Nominal {
            per_step: mid,
            totals,
        };
        let robust = solve_dispatch(&robust_inst, &SolverOptions::default()).unwrap();
        let nominal = solve_dispatch(&nominal_inst, &SolverOptions::default()).unwrap();
        assert!(
            robust.lp_objective >= nominal.lp_objective - 1e-8,
            "robust {} < nominal {}",
            robust.lp_objective,
            nominal.lp_objective
        );
    }
}

#[test]
fn beta_sweep_monotone_tradeoff() {
    let mut rng = Rng64::new(111);
    let inst = random_instance(&mut rng, false);
    let mut last_j_e = -1.0f64;
    let mut last_j_d = f64::INFINITY;
    for beta in [0.0, 0.5, 1.0, 2.0, 10.0] {
        let mut with_beta = inst.clone();
        with_beta.beta = vec![beta; inst.horizon];
        let plan = solve_dispatch(&with_beta, &SolverOptions::default()).unwrap();
        let j_e: f64 = plan.objective.mismatch.iter().sum();
        let j_d: f64 = plan.objective.distance.iter().sum();
        assert!(j_e >= last_j_e - 1e-7, "J_E dropped from {last_j_e} to {j_e}");
        assert!(j_d <= last_j_d + 1e-7, "J_D rose from {last_j_d} to {j_d}");
        last_j_e = j_e;
        last_j_d = j_d;
    }
}

#[test]
fn plans_satisfy_caps_and_row_sums() {
    let mut rng = Rng64::new(121);
    for _ in 0..25 {
        let inst = random_instance(&mut rng, false);
        let plan = solve_dispatch(&inst, &SolverOptions::default()).unwrap();
        for k in 0..inst.horizon {
            for i in 0..inst.taxis {
                let row_sum: f64 = plan.x[k].row(i).iter().sum();
                assert!((row_sum - 1.0).abs() < 1e-6);
                assert!(plan.distances[k][i] <= inst.alpha[k][i] + 1e-6);
            }
        }
        let ones: usize = plan
            .x1_rounded
            .data()
            .iter()
            .filter(|&&v| v == 1.0)
            .count();
        assert_eq!(ones, inst.taxis);
    }
}

#[test]
fn brute_force_refuses_large_instances() {
    let mut inst = two_region_instance(point(0.0, 0.0), [1.0, 1.0], 0.0, 5.0);
    inst.taxis = 10;
    inst.horizon = 2;
    inst.positions = vec![point(0.0, 0.0); 10];
    inst.stations = vec![vec![point(0.0, 0.0), point(0.0, 1.0)]; 10];
    inst.demand = DemandSpec::Nominal {
        per_step: vec![vec![1.0, 1.0]; 2],
        totals: vec![2.0; 2],
    };
    inst.mobility = vec![Mat::identity(2)];
    inst.alpha = vec![vec![5.0; 10]; 2];
    inst.beta = vec![0.0; 2];
    assert!(matches!(
        brute_force_dispatch(&inst),
        Err(DispatchError::TooLarge { .. })
    ));
}

#[test]
fn variable_map_is_dense_and_disjoint() {
    let map = VarMap {
        taxis: 3,
        regions: 2,
        horizon: 2,
    };
    let mut seen = vec![false; map.num_vars()];
    for k in 0..2 {
        for i in 0..3 {
            for j in 0..2 {
                let idx = map.x(k, i, j);
                assert!(!seen[idx]);
                seen[idx] = true;
            }
            let idx = map.d(k, i);
            assert!(!seen[idx]);
            seen[idx] = true;
        }
        for j in 0..2 {
            let idx = map.e(k, j);
            assert!(!seen[idx]);
            seen[idx] = true;
        }
    }
    assert!(seen.iter().all(|&v| v));
}
