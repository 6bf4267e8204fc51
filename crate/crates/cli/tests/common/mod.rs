//! Shared oracles for the acceptance suite. Everything here is independent
//! of the solver and builder code paths it checks: linear systems go through
//! a local Gaussian elimination, LP optima through basic-feasible-solution
//! enumeration, and dispatch optima through exhaustive assignment search.

use taxi_rhc_core::dispatch::{DemandSpec, DispatchInstance};
use taxi_rhc_core::geo::{generate_stations, GeoPoint, RegionGrid};
use taxi_rhc_core::lp::LinearProgram;
use taxi_rhc_core::matrix::Mat;
use taxi_rhc_core::rng::Rng64;

/// Solve a dense square system by Gaussian elimination with partial
/// pivoting. `None` when (numerically) singular.
#[allow(clippy::needless_range_loop)]
pub fn gaussian_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

fn feasible(lp: &LinearProgram, x: &[f64], tol: f64) -> bool {
    taxi_rhc_core::lp::check_solution(lp, x).passes(tol)
}

/// Independent LP oracle: enumerate every candidate basic point (equality
/// rows plus all v-subsets of {inequality rows, bound faces} made active),
/// keep the feasible ones, and return the best objective. Finite bounds
/// only.
pub fn enumerate_lp_optimum(lp: &LinearProgram, tol: f64) -> Option<f64> {
    let v = lp.num_vars();
    let m_eq = lp.b_eq().len();
    assert!(m_eq <= v, "overdetermined equality block");

    // optional active faces: inequality rows and both bound faces per var
    let mut optional: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..lp.b_ub().len() {
        optional.push((lp.a_ub().row(i).to_vec(), lp.b_ub()[i]));
    }
    for j in 0..v {
        let mut row = vec![0.0; v];
        row[j] = 1.0;
        optional.push((row.clone(), lp.lower()[j]));
        optional.push((row, lp.upper()[j]));
    }

    let need = v - m_eq;
    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..need).collect();
    if need > optional.len() {
        return None;
    }
    loop {
        let mut a = Vec::with_capacity(v);
        let mut b = Vec::with_capacity(v);
        for i in 0..m_eq {
            a.push(lp.a_eq().row(i).to_vec());
            b.push(lp.b_eq()[i]);
        }
        for &idx in &combo {
            a.push(optional[idx].0.clone());
            b.push(optional[idx].1);
        }
        if let Some(x) = gaussian_solve(a, b) {
            if feasible(lp, &x, tol) {
                let value = taxi_rhc_core::lp::objective_value(lp, &x);
                best = Some(best.map_or(value, |b: f64| b.min(value)));
            }
        }
        // next lexicographic combination
        if need == 0 {
            break;
        }
        let mut i = need;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if combo[i] + (need - i) < optional.len() {
                combo[i] += 1;
                for k in i + 1..need {
                    combo[k] = combo[k - 1] + 1;
                }
                break;
            }
        }
    }
    best
}

/// Random LP with finite box bounds and a constructed interior point, so
/// feasibility and boundedness hold by construction.
pub fn random_boxed_lp(rng: &mut Rng64, max_vars: usize) -> (LinearProgram, Vec<f64>) {
    let vars = 1 + rng.index(max_vars);
    let x0: Vec<f64> = (0..vars).map(|_| rng.uniform(-2.0, 2.0)).collect();
    let lower: Vec<f64> = x0.iter().map(|x| x - rng.uniform(0.3, 2.0)).collect();
    let upper: Vec<f64> = x0.iter().map(|x| x + rng.uniform(0.3, 2.0)).collect();
    let m_ub = rng.index(5);
    let mut ub_rows = Vec::new();
    let mut b_ub = Vec::new();
    for _ in 0..m_ub {
        let row: Vec<f64> = (0..vars).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let ax: f64 = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
        b_ub.push(ax + rng.uniform(0.05, 1.5));
        ub_rows.push(row);
    }
    let mut eq_rows = Vec::new();
    let mut b_eq = Vec::new();
    if vars >= 2 && rng.next_f64() < 0.4 {
        let row: Vec<f64> = (0..vars).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let ax: f64 = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
        b_eq.push(ax);
        eq_rows.push(row);
    }
    let c: Vec<f64> = (0..vars).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let lp = LinearProgram::new(
        c,
        if ub_rows.is_empty() {
            Mat::zeros(0, vars)
        } else {
            Mat::from_rows(&ub_rows)
        },
        b_ub,
        if eq_rows.is_empty() {
            Mat::zeros(0, vars)
        } else {
            Mat::from_rows(&eq_rows)
        },
        b_eq,
        lower,
        upper,
    )
    .expect("generator emits well-formed programs");
    (lp, x0)
}

/// Random dispatch instance within the small-oracle regime
/// (N <= 5, n <= 3, T <= 2).
pub fn random_small_instance(rng: &mut Rng64, interval: bool, strain_alpha: bool) -> DispatchInstance {
    let n_taxis = 1 + rng.index(5);
    let regions = 1 + rng.index(3);
    let horizon = 1 + rng.index(2);
    let grid = RegionGrid::new(0.0, 1.0, 0.0, 1.0, 1, regions).unwrap();
    let stations = generate_stations(&grid, n_taxis, rng.next_u64());
    let positions: Vec<GeoPoint> = (0..n_taxis)
        .map(|_| GeoPoint::new(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)))
        .collect();
    let mut mobility = Vec::new();
    for _ in 1..horizon {
        let rows: Vec<Vec<f64>> = (0..regions)
            .map(|_| {
                let raw: Vec<f64> = (0..regions).map(|_| rng.uniform(0.05, 1.0)).collect();
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
            let hi: Vec<f64> = lo.iter().map(|l| l + rng.uniform(0.0, 2.5)).collect();
            totals.push(
                lo.iter()
                    .zip(&hi)
                    .map(|(l, h)| 0.5 * (l + h))
                    .sum::<f64>()
                    .max(0.5),
            );
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
    let alpha = if strain_alpha {
        // tight enough to bind sometimes, loose enough to stay solvable
        let worst: f64 = (0..n_taxis)
            .map(|i| {
                (0..regions)
                    .map(|j| {
                        taxi_rhc_core::geo::manhattan_deg(positions[i], stations.station(i, j + 1))
                    })
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        vec![vec![(worst * rng.uniform(0.7, 1.2)).max(0.3); n_taxis]; horizon]
    } else {
        vec![vec![5.0; n_taxis]; horizon]
    };
    DispatchInstance {
        taxis: n_taxis,
        regions,
        horizon,
        positions,
        stations: (0..n_taxis).map(|i| stations.taxi(i).to_vec()).collect(),
        demand,
        mobility,
        alpha,
        beta: (0..horizon).map(|_| rng.uniform(0.0, 1.0)).collect(),
    }
}
