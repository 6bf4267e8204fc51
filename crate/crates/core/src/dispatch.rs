//! Dispatch optimization: build the nominal and robust fleet-rebalancing
//! LPs, recover a binary first-step decision by rounding, evaluate
//! objectives, and brute-force small instances as a test oracle.
//!
//! The decision variables are relaxed assignment matrices `X^k in [0,1]^{N x n}`
//! (row i = fractional dispatch of taxi i over regions for horizon step k),
//! per-taxi idle-distance epigraph variables `d^k_i`, and per-region mismatch
//! epigraph variables. The mismatch objective is the one-norm distance between
//! the fleet's fractional allocation `(1/N) 1'X^k` and the demand share
//! `r^k / R^k`; idle distance is the Manhattan distance from each taxi's
//! (predicted) position to its dispatched station, encoded exactly through
//! the four sign combinations of `|a| + |b| = max(+-a +- b)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::geo::{manhattan_deg, GeoPoint};
use crate::lp::{solve, LinearProgram, LpError, LpStatus, SolverOptions};
use crate::matrix::Mat;

/// Tolerance used when validating row-stochastic inputs.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DispatchError {
    #[error("instance invalid: {0}")]
    Invalid(&'static str),
    #[error("taxi {taxi}: distance cap {alpha} below reachable lower bound {lower_bound}")]
    UnreachableTaxi {
        taxi: usize,
        alpha: f64,
        lower_bound: f64,
    },
    #[error("solver returned {0:?}")]
    NotOptimal(LpStatus),
    #[error("lp construction failed: {0}")]
    Lp(#[from] LpError),
    #[error("instance too large for enumeration: {combinations:e} assignment sequences")]
    TooLarge { combinations: f64 },
}

/// Demand input of one optimization: either point forecasts or interval
/// uncertainty, with an explicit total for the denominator of the demand
/// share. A zero total means "no predicted demand"; the mismatch target
/// share is then the zero vector.
#[derive(Clone, Debug, PartialEq)]
pub enum DemandSpec {
    Nominal {
        /// Per horizon step: request vector, one entry per region.
        per_step: Vec<Vec<f64>>,
        /// Per horizon step: citywide total used as the share denominator.
        totals: Vec<f64>,
    },
    Interval {
        lower: Vec<Vec<f64>>,
        upper: Vec<Vec<f64>>,
        totals: Vec<f64>,
    },
}

impl DemandSpec {
    pub fn horizon(&self) -> usize {
        match self {
            DemandSpec::Nominal { per_step, .. } => per_step.len(),
            DemandSpec::Interval { lower, .. } => lower.len(),
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, DemandSpec::Interval { .. })
    }
}

/// All parameters of one receding-horizon optimization.
#[derive(Clone, Debug, PartialEq)]
pub struct DispatchInstance {
    /// Number of vacant taxis N.
    pub taxis: usize,
    /// Number of regions n.
    pub regions: usize,
    /// Horizon length T.
    pub horizon: usize,
    /// Current positions of the vacant taxis.
    pub positions: Vec<GeoPoint>,
    /// Station coordinates per taxi, indexed `[taxi][region - 1]`.
    pub stations: Vec<Vec<GeoPoint>>,
    pub demand: DemandSpec,
    /// Mobility matrices chaining consecutive steps; `mobility[k]` moves
    /// positions during horizon step `k + 1` (1-based), so it appears in the
    /// distance constraint of step `k + 2`. Length `horizon - 1`.
    pub mobility: Vec<Mat>,
    /// Idle-distance caps in degrees, indexed `[step][taxi]`.
    pub alpha: Vec<Vec<f64>>,
    /// Objective weights per step.
    pub beta: Vec<f64>,
}

impl DispatchInstance {
    pub fn validate(&self) -> Result<(), DispatchError> {
        let (n_taxis, n, t) = (self.taxis, self.regions, self.horizon);
        if n_taxis == 0 {
            return Err(DispatchError::Invalid("no vacant taxis"));
        }
        if n == 0 || t == 0 {
            return Err(DispatchError::Invalid("regions and horizon must be positive"));
        }
        if self.positions.len() != n_taxis {
            return Err(DispatchError::Invalid("positions length != taxi count"));
        }
        if self.stations.len() != n_taxis || self.stations.iter().any(|s| s.len() != n) {
            return Err(DispatchError::Invalid("station table shape mismatch"));
        }
        if self.demand.horizon() != t {
            return Err(DispatchError::Invalid("demand horizon mismatch"));
        }
        match &self.demand {
            DemandSpec::Nominal { per_step, totals } => {
                if totals.len() != t || per_step.iter().any(|r| r.len() != n) {
                    return Err(DispatchError::Invalid("demand vector shape mismatch"));
                }
                for (r, &total) in per_step.iter().zip(totals.iter()) {
                    if r.iter().any(|&v| v < 0.0 || !v.is_finite()) || !(total >= 0.0) {
                        return Err(DispatchError::Invalid("negative demand"));
                    }
                }
            }
            DemandSpec::Interval { lower, upper, totals } => {
                if totals.len() != t
                    || lower.iter().any(|r| r.len() != n)
                    || upper.iter().any(|r| r.len() != n)
                    || lower.len() != upper.len()
                {
                    return Err(DispatchError::Invalid("demand interval shape mismatch"));
                }
                for k in 0..t {
                    if !(totals[k] >= 0.0) {
                        return Err(DispatchError::Invalid("negative demand total"));
                    }
                    for j in 0..n {
                        let (lo, hi) = (lower[k][j], upper[k][j]);
                        if !(lo >= 0.0) || lo > hi + 1e-12 {
                            return Err(DispatchError::Invalid("inverted demand interval"));
                        }
                    }
                }
            }
        }
        if self.mobility.len() + 1 != t {
            return Err(DispatchError::Invalid("mobility matrix count != horizon - 1"));
        }
        for c in &self.mobility {
            if c.rows() != n || c.cols() != n {
                return Err(DispatchError::Invalid("mobility matrix shape mismatch"));
            }
            for i in 0..n {
                let sum: f64 = c.row(i).iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL || c.row(i).iter().any(|&v| v < 0.0) {
                    return Err(DispatchError::Invalid("mobility row not stochastic"));
                }
            }
        }
        if self.alpha.len() != t || self.alpha.iter().any(|a| a.len() != n_taxis) {
            return Err(DispatchError::Invalid("alpha shape mismatch"));
        }
        if self.alpha.iter().flatten().any(|&a| !(a > 0.0)) {
            return Err(DispatchError::Invalid("alpha must be positive"));
        }
        if self.beta.len() != t || self.beta.iter().any(|&b| !(b >= 0.0)) {
            return Err(DispatchError::Invalid("beta must be nonnegative"));
        }
        Ok(())
    }

    /// Demand share `r / R` (or interval endpoint shares) for step `k`.
    fn share(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        match &self.demand {
            DemandSpec::Nominal { per_step, totals } => {
                let q = safe_share(&per_step[k], totals[k]);
                (q.clone(), q)
            }
            DemandSpec::Interval { lower, upper, totals } => (
                safe_share(&lower[k], totals[k]),
                safe_share(&upper[k], totals[k]),
            ),
        }
    }
}

fn safe_share(r: &[f64], total: f64) -> Vec<f64> {
    if total > 1e-12 {
        r.iter().map(|v| v / total).collect()
    } else {
        vec![0.0; r.len()]
    }
}

/// Index map from (step, taxi, region) decision coordinates to LP columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarMap {
    pub taxis: usize,
    pub regions: usize,
    pub horizon: usize,
}

impl VarMap {
    pub fn x(&self, step: usize, taxi: usize, region: usize) -> usize {
        debug_assert!(step < self.horizon && taxi < self.taxis && region < self.regions);
        step * self.taxis * self.regions + taxi * self.regions + region
    }

    pub fn d(&self, step: usize, taxi: usize) -> usize {
        self.horizon * self.taxis * self.regions + step * self.taxis + taxi
    }

    pub fn e(&self, step: usize, region: usize) -> usize {
        self.horizon * self.taxis * (self.regions + 1) + step * self.regions + region
    }

    pub fn num_vars(&self) -> usize {
        self.horizon * (self.taxis * self.regions + self.taxis + self.regions)
    }
}

/// Expected position after one mobility step: `x_row * C * W_i`.
pub fn expected_end_position(
    x_row: &[f64],
    mobility: &Mat,
    stations: &[GeoPoint],
) -> Result<GeoPoint, DispatchError> {
    if x_row.len() != mobility.rows() || mobility.cols() != stations.len() {
        return Err(DispatchError::Invalid("expected_end_position dimension mismatch"));
    }
    let p = mobility.left_mul(x_row);
    let mut lat = 0.0;
    let mut lon = 0.0;
    for (prob, station) in p.iter().zip(stations.iter()) {
        lat += prob * station.lat;
        lon += prob * station.lon;
    }
    Ok(GeoPoint::new(lat, lon))
}

/// `C * W_i` rows: region-conditioned expected end positions of taxi `i`.
fn mobility_stations(mobility: &Mat, stations: &[GeoPoint]) -> Vec<GeoPoint> {
    (0..mobility.rows())
        .map(|j| {
            let row = mobility.row(j);
            let mut lat = 0.0;
            let mut lon = 0.0;
            for (p, s) in row.iter().zip(stations.iter()) {
                lat += p * s.lat;
                lon += p * s.lon;
            }
            GeoPoint::new(lat, lon)
        })
        .collect()
}

/// L1 distance from a point to the bounding box of the stations: a valid
/// lower bound on the distance to any convex combination of them.
fn station_box_distance(p: GeoPoint, stations: &[GeoPoint]) -> f64 {
    let mut lat_lo = f64::INFINITY;
    let mut lat_hi = f64::NEG_INFINITY;
    let mut lon_lo = f64::INFINITY;
    let mut lon_hi = f64::NEG_INFINITY;
    for s in stations {
        lat_lo = lat_lo.min(s.lat);
        lat_hi = lat_hi.max(s.lat);
        lon_lo = lon_lo.min(s.lon);
        lon_hi = lon_hi.max(s.lon);
    }
    let d_lat = (lat_lo - p.lat).max(p.lat - lat_hi).max(0.0);
    let d_lon = (lon_lo - p.lon).max(p.lon - lon_hi).max(0.0);
    d_lat + d_lon
}

/// Build the nominal dispatch LP. Returns the program plus the variable map.
pub fn build_nominal_lp(inst: &DispatchInstance) -> Result<(LinearProgram, VarMap), DispatchError> {
    if inst.demand.is_interval() {
        return Err(DispatchError::Invalid("nominal builder given interval demand"));
    }
    build_lp(inst)
}

/// Build the robust dispatch LP: per (step, region) the epigraph variable
/// dominates the mismatch against both interval endpoints, which is exactly
/// the worst case over the interval. With degenerate intervals the program
/// collapses to the nominal one (the endpoint rows coincide).
pub fn build_robust_lp(inst: &DispatchInstance) -> Result<(LinearProgram, VarMap), DispatchError> {
    if !inst.demand.is_interval() {
        return Err(DispatchError::Invalid("robust builder given point demand"));
    }
    build_lp(inst)
}

fn build_lp(inst: &DispatchInstance) -> Result<(LinearProgram, VarMap), DispatchError> {
    inst.validate()?;
    let (n_taxis, n, t) = (inst.taxis, inst.regions, inst.horizon);
    let map = VarMap {
        taxis: n_taxis,
        regions: n,
        horizon: t,
    };
    let v = map.num_vars();

    // quick infeasibility screen on the executed step
    for i in 0..n_taxis {
        let lower_bound = station_box_distance(inst.positions[i], &inst.stations[i]);
        if inst.alpha[0][i] + 1e-12 < lower_bound {
            return Err(DispatchError::UnreachableTaxi {
                taxi: i,
                alpha: inst.alpha[0][i],
                lower_bound,
            });
        }
    }

    let robust = inst.demand.is_interval();
    let mismatch_rows = t * n * if robust { 4 } else { 2 };
    let distance_rows = t * n_taxis * 4;
    let mut a_ub = Mat::zeros(mismatch_rows + distance_rows, v);
    let mut b_ub = vec![0.0; mismatch_rows + distance_rows];
    let mut row = 0;

    // mismatch epigraph: e_{k,j} >= +-((1/N) sum_i X_{k,i,j} - q_j)
    let inv_n = 1.0 / n_taxis as f64;
    for k in 0..t {
        let (q_lo, q_hi) = inst.share(k);
        let endpoints: &[&[f64]] = if robust {
            &[&q_lo, &q_hi]
        } else {
            &[&q_lo]
        };
        for q in endpoints {
            for j in 0..n {
                for sign in [1.0, -1.0] {
                    for i in 0..n_taxis {
                        a_ub[(row, map.x(k, i, j))] = sign * inv_n;
                    }
                    a_ub[(row, map.e(k, j))] = -1.0;
                    b_ub[row] = sign * q[j];
                    row += 1;
                }
            }
        }
    }

    // distance epigraph: four sign rows per (step, taxi)
    for i in 0..n_taxis {
        let w = &inst.stations[i];
        for k in 0..t {
            let prev: Option<Vec<GeoPoint>> = if k == 0 {
                None
            } else {
                Some(mobility_stations(&inst.mobility[k - 1], w))
            };
            for (s_lat, s_lon) in [(1.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (-1.0, 1.0)] {
                // sigma * (prev_pos - X^k W) <= d^k
                for j in 0..n {
                    a_ub[(row, map.x(k, i, j))] = -(s_lat * w[j].lat + s_lon * w[j].lon);
                }
                a_ub[(row, map.d(k, i))] = -1.0;
                match &prev {
                    None => {
                        b_ub[row] = -(s_lat * inst.positions[i].lat + s_lon * inst.positions[i].lon);
                    }
                    Some(m) => {
                        for j in 0..n {
                            a_ub[(row, map.x(k - 1, i, j))] = s_lat * m[j].lat + s_lon * m[j].lon;
                        }
                        b_ub[row] = 0.0;
                    }
                }
                row += 1;
            }
        }
    }
    debug_assert_eq!(row, mismatch_rows + distance_rows);

    // row-sum equalities: sum_j X_{k,i,j} = 1
    let mut a_eq = Mat::zeros(t * n_taxis, v);
    let b_eq = vec![1.0; t * n_taxis];
    for k in 0..t {
        for i in 0..n_taxis {
            let r = k * n_taxis + i;
            for j in 0..n {
                a_eq[(r, map.x(k, i, j))] = 1.0;
            }
        }
    }

    // bounds and objective
    let lower = vec![0.0; v];
    let mut upper = vec![f64::INFINITY; v];
    let mut c = vec![0.0; v];
    for k in 0..t {
        for i in 0..n_taxis {
            for j in 0..n {
                upper[map.x(k, i, j)] = 1.0;
            }
            upper[map.d(k, i)] = inst.alpha[k][i];
            c[map.d(k, i)] = inst.beta[k];
        }
        for j in 0..n {
            c[map.e(k, j)] = 1.0;
        }
    }

    let lp = LinearProgram::new(c, a_ub, b_ub, a_eq, b_eq, lower, upper)?;
    Ok((lp, map))
}

/// Round the relaxed first step to a binary assignment: per-row argmax,
/// ties to the lowest region index. Idempotent on binary rows.
pub fn round_first_step(x1: &Mat) -> Mat {
    let mut out = Mat::zeros(x1.rows(), x1.cols());
    for i in 0..x1.rows() {
        let row = x1.row(i);
        let mut best = 0;
        for (j, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = j;
            }
        }
        out[(i, best)] = 1.0;
    }
    out
}

/// Objective breakdown: per-step mismatch terms, per-step total idle
/// distance (unweighted), and the beta-weighted total.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveBreakdown {
    pub mismatch: Vec<f64>,
    pub distance: Vec<f64>,
    pub total: f64,
}

/// Worst-case mismatch of a supply share against a demand interval
/// `[lo, hi]` with share denominator `total`: the maximum of
/// `|share - r/total|` over `r in [lo, hi]` is attained at an endpoint.
pub fn worst_case_mismatch_term(share: f64, lo: f64, hi: f64, total: f64) -> f64 {
    let (a, b) = if total > 1e-12 {
        (lo / total, hi / total)
    } else {
        (0.0, 0.0)
    };
    (share - a).abs().max((share - b).abs())
}

/// Tight idle distances implied by an assignment sequence: exact Manhattan
/// values of the position differences, per `[step][taxi]`.
pub fn tight_distances(inst: &DispatchInstance, xs: &[Mat]) -> Result<Vec<Vec<f64>>, DispatchError> {
    if xs.len() != inst.horizon {
        return Err(DispatchError::Invalid("assignment sequence length != horizon"));
    }
    let mut out = Vec::with_capacity(inst.horizon);
    for k in 0..inst.horizon {
        let mut step = Vec::with_capacity(inst.taxis);
        for i in 0..inst.taxis {
            let w = &inst.stations[i];
            let target = expected_end_position(xs[k].row(i), &Mat::identity(inst.regions), w)?;
            let origin = if k == 0 {
                inst.positions[i]
            } else {
                expected_end_position(xs[k - 1].row(i), &inst.mobility[k - 1], w)?
            };
            step.push(manhattan_deg(origin, target));
        }
        out.push(step);
    }
    Ok(out)
}

/// Evaluate the dispatch objective of an assignment sequence with distances
/// set to their tight lower bounds. Interval demand evaluates the worst case
/// over the interval; point demand evaluates the nominal mismatch.
pub fn evaluate_objective(
    inst: &DispatchInstance,
    xs: &[Mat],
) -> Result<ObjectiveBreakdown, DispatchError> {
    if xs.len() != inst.horizon {
        return Err(DispatchError::Invalid("assignment sequence length != horizon"));
    }
    for x in xs {
        if x.rows() != inst.taxis || x.cols() != inst.regions {
            return Err(DispatchError::Invalid("assignment matrix shape mismatch"));
        }
    }
    let inv_n = 1.0 / inst.taxis as f64;
    let distances = tight_distances(inst, xs)?;
    let mut mismatch = Vec::with_capacity(inst.horizon);
    let mut distance = Vec::with_capacity(inst.horizon);
    let mut total = 0.0;
    for k in 0..inst.horizon {
        let (q_lo, q_hi) = inst.share(k);
        let mut j_e = 0.0;
        for j in 0..inst.regions {
            let share = (0..inst.taxis).map(|i| xs[k][(i, j)]).sum::<f64>() * inv_n;
            j_e += if inst.demand.is_interval() {
                (share - q_lo[j]).abs().max((share - q_hi[j]).abs())
            } else {
                (share - q_lo[j]).abs()
            };
        }
        let j_d: f64 = distances[k].iter().sum();
        total += j_e + inst.beta[k] * j_d;
        mismatch.push(j_e);
        distance.push(j_d);
    }
    Ok(ObjectiveBreakdown {
        mismatch,
        distance,
        total,
    })
}

/// A solved dispatch: relaxed assignment matrices, tight distances, the
/// rounded binary first step, and the objective breakdown.
#[derive(Clone, Debug, PartialEq)]
pub struct DispatchPlan {
    /// Relaxed assignments, one `N x n` matrix per horizon step.
    pub x: Vec<Mat>,
    /// Tight idle distances per `[step][taxi]`, in degrees.
    pub distances: Vec<Vec<f64>>,
    /// Binary first-step decision recovered by rounding.
    pub x1_rounded: Mat,
    pub objective: ObjectiveBreakdown,
    /// LP optimum as reported by the solver.
    pub lp_objective: f64,
    /// Worst first-step cap violation introduced by rounding
    /// (`max_i max(0, d1_i - alpha1_i)`).
    pub alpha_slack: f64,
    pub iterations: usize,
}

/// Build (nominal or robust, per the instance demand), solve, extract, and
/// round. Returns `NotOptimal` when the solver does not prove optimality.
pub fn solve_dispatch(
    inst: &DispatchInstance,
    opts: &SolverOptions,
) -> Result<DispatchPlan, DispatchError> {
    let (lp, map) = build_lp(inst)?;
    let sol = solve(&lp, opts);
    if sol.status != LpStatus::Optimal {
        return Err(DispatchError::NotOptimal(sol.status));
    }
    let mut xs = Vec::with_capacity(inst.horizon);
    for k in 0..inst.horizon {
        let mut x = Mat::zeros(inst.taxis, inst.regions);
        for i in 0..inst.taxis {
            for j in 0..inst.regions {
                x[(i, j)] = sol.x[map.x(k, i, j)];
            }
        }
        xs.push(x);
    }
    let distances = tight_distances(inst, &xs)?;
    let x1_rounded = round_first_step(&xs[0]);
    let mut alpha_slack = 0.0f64;
    for i in 0..inst.taxis {
        let region = x1_rounded
            .row(i)
            .iter()
            .position(|&v| v == 1.0)
            .expect("rounded row has a one");
        let d = manhattan_deg(inst.positions[i], inst.stations[i][region]);
        alpha_slack = alpha_slack.max(d - inst.alpha[0][i]);
    }
    let objective = evaluate_objective(inst, &xs)?;
    Ok(DispatchPlan {
        x: xs,
        distances,
        x1_rounded,
        objective,
        lp_objective: sol.objective,
        alpha_slack: alpha_slack.max(0.0),
        iterations: sol.iterations,
    })
}

/// Exhaustive optimum over binary assignment sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForcePlan {
    /// Chosen region (1-based) per `[step][taxi]`.
    pub regions: Vec<Vec<usize>>,
    pub objective: ObjectiveBreakdown,
}

/// Enumerate every binary assignment sequence satisfying the row-sum and
/// distance-cap constraints and return the objective minimizer, or `None`
/// when no binary assignment is feasible. Interval demand is scored by
/// enumerating all `2^n` demand corners per step, independently of the
/// epigraph reformulation used by the LP route.
pub fn brute_force_dispatch(
    inst: &DispatchInstance,
) -> Result<Option<BruteForcePlan>, DispatchError> {
    inst.validate()?;
    let (n_taxis, n, t) = (inst.taxis, inst.regions, inst.horizon);
    let digits = n_taxis * t;
    let mut combinations = 1.0f64;
    for _ in 0..digits {
        combinations *= n as f64;
        if combinations > 1e6 {
            break;
        }
    }
    if combinations > 1e6 || (inst.demand.is_interval() && n > 16) {
        return Err(DispatchError::TooLarge { combinations });
    }

    // corner demand shares per step (interval mode)
    let corner_shares: Vec<Vec<Vec<f64>>> = match &inst.demand {
        DemandSpec::Nominal { .. } => Vec::new(),
        DemandSpec::Interval { lower, upper, totals } => (0..t)
            .map(|k| {
                let lo = safe_share(&lower[k], totals[k]);
                let hi = safe_share(&upper[k], totals[k]);
                (0..1usize << n)
                    .map(|mask| {
                        (0..n)
                            .map(|j| if mask >> j & 1 == 1 { hi[j] } else { lo[j] })
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    };

    // precomputed distances: first step per (taxi, region); later steps per
    // (taxi, step, prev region, region)
    let d0: Vec<Vec<f64>> = (0..n_taxis)
        .map(|i| {
            (0..n)
                .map(|j| manhattan_deg(inst.positions[i], inst.stations[i][j]))
                .collect()
        })
        .collect();
    let chained: Vec<Vec<Vec<GeoPoint>>> = (0..n_taxis)
        .map(|i| {
            inst.mobility
                .iter()
                .map(|c| mobility_stations(c, &inst.stations[i]))
                .collect()
        })
        .collect();

    let inv_n = 1.0 / n_taxis as f64;
    let mut assignment = vec![0usize; digits];
    let mut best: Option<(f64, Vec<usize>)> = None;
    'outer: loop {
        // feasibility and objective of the current assignment
        let choice = |k: usize, i: usize| assignment[k * n_taxis + i];
        let mut feasible = true;
        let mut total = 0.0;
        for k in 0..t {
            let mut per_region = vec![0.0; n];
            let mut j_d = 0.0;
            for i in 0..n_taxis {
                let j = choice(k, i);
                per_region[j] += inv_n;
                let d = if k == 0 {
                    d0[i][j]
                } else {
                    manhattan_deg(chained[i][k - 1][choice(k - 1, i)], inst.stations[i][j])
                };
                if d > inst.alpha[k][i] + 1e-9 {
                    feasible = false;
                    break;
                }
                j_d += d;
            }
            if !feasible {
                break;
            }
            let j_e = match &inst.demand {
                DemandSpec::Nominal { per_step, totals } => {
                    let q = safe_share(&per_step[k], totals[k]);
                    per_region
                        .iter()
                        .zip(q.iter())
                        .map(|(s, q)| (s - q).abs())
                        .sum::<f64>()
                }
                DemandSpec::Interval { .. } => corner_shares[k]
                    .iter()
                    .map(|corner| {
                        per_region
                            .iter()
                            .zip(corner.iter())
                            .map(|(s, q)| (s - q).abs())
                            .sum::<f64>()
                    })
                    .fold(0.0f64, f64::max),
            };
            total += j_e + inst.beta[k] * j_d;
        }
        if feasible && best.as_ref().is_none_or(|(obj, _)| total < *obj) {
            best = Some((total, assignment.clone()));
        }

        // next assignment in base-n counting order
        for digit in assignment.iter_mut() {
            *digit += 1;
            if *digit < n {
                continue 'outer;
            }
            *digit = 0;
        }
        break;
    }

    Ok(best.map(|(_, assignment)| {
        let regions: Vec<Vec<usize>> = (0..t)
            .map(|k| (0..n_taxis).map(|i| assignment[k * n_taxis + i] + 1).collect())
            .collect();
        let xs: Vec<Mat> = (0..t)
            .map(|k| {
                let mut x = Mat::zeros(n_taxis, n);
                for i in 0..n_taxis {
                    x[(i, assignment[k * n_taxis + i])] = 1.0;
                }
                x
            })
            .collect();
        let objective = evaluate_objective(inst, &xs).expect("binary sequence evaluates");
        BruteForcePlan { regions, objective }
    }))
}

#[cfg(test)]
mod tests;
