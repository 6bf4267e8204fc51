//! Demand-model estimation: bootstrap means and variances of per-slot
//! request/dropoff counts, demand-interval bounds, drop-off probabilities,
//! and row-stochastic mobility matrices from trajectory counts.

use alloc::vec;
use alloc::vec::Vec;

use crate::geo::RegionGrid;
use crate::math;
use crate::matrix::Mat;
use crate::rng::{derive_seed, Rng64};
use crate::trace::{aggregate_counts, count_transitions_filtered, detect_events, TaxiTrace, TraceError};

/// Tolerance for the row-stochastic invariant of mobility matrices.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DemandError {
    #[error("no daily vectors to resample")]
    EmptyData,
    #[error("bootstrap sample count must be at least 1")]
    ZeroSamples,
    #[error("trace aggregation failed: {0}")]
    Trace(#[from] TraceError),
    #[error("model invariant violated: {0}")]
    Invalid(&'static str),
}

/// Which calendar days of a trace feed the estimation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DayFilter {
    All,
    Weekdays,
    Weekends,
}

impl DayFilter {
    pub fn keeps(self, day_index: i64) -> bool {
        // day 0 (1970-01-01) was a Thursday; 0 = Monday .. 6 = Sunday
        let dow = (day_index + 3).rem_euclid(7);
        match self {
            DayFilter::All => true,
            DayFilter::Weekdays => dow <= 4,
            DayFilter::Weekends => dow >= 5,
        }
    }
}

/// Estimated per-slot demand statistics plus mobility matrices.
///
/// Slots of length `t1_minutes` index the demand vectors (`1..=1440/t1`);
/// slots of length `t2_minutes` index the mobility matrices. All vectors
/// have one entry per region (position `region - 1`).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DemandModel {
    pub t1_minutes: u32,
    pub t2_minutes: u32,
    pub bootstrap_samples: u32,
    pub seed: u64,
    pub interval_multiplier: f64,
    pub regions: usize,
    /// Mean request vector per t1 slot.
    pub means: Vec<Vec<f64>>,
    /// Bootstrap sample variance per t1 slot.
    pub variances: Vec<Vec<f64>>,
    /// Mean dropoff vector per t1 slot.
    pub dropoffs: Vec<Vec<f64>>,
    /// Demand-interval lower bounds per t1 slot.
    pub lower: Vec<Vec<f64>>,
    /// Demand-interval upper bounds per t1 slot.
    pub upper: Vec<Vec<f64>>,
    /// Row-stochastic mobility matrix per t2 slot.
    pub mobility: Vec<Mat>,
}

impl DemandModel {
    pub fn slots1(&self) -> usize {
        (1440 / self.t1_minutes) as usize
    }

    pub fn slots2(&self) -> usize {
        (1440 / self.t2_minutes) as usize
    }

    /// Check the structural invariants: interval bounds bracket the mean,
    /// variances are nonnegative, and mobility rows sum to one.
    pub fn validate(&self) -> Result<(), DemandError> {
        let slots1 = self.slots1();
        if self.means.len() != slots1
            || self.variances.len() != slots1
            || self.dropoffs.len() != slots1
            || self.lower.len() != slots1
            || self.upper.len() != slots1
        {
            return Err(DemandError::Invalid("slot vector count != 1440/t1"));
        }
        if self.mobility.len() != self.slots2() {
            return Err(DemandError::Invalid("mobility matrix count != 1440/t2"));
        }
        for h in 0..slots1 {
            if self.means[h].len() != self.regions {
                return Err(DemandError::Invalid("vector length != region count"));
            }
            for j in 0..self.regions {
                if self.variances[h][j] < 0.0 {
                    return Err(DemandError::Invalid("negative variance"));
                }
                if self.lower[h][j] > self.means[h][j] + 1e-12
                    || self.means[h][j] > self.upper[h][j] + 1e-12
                {
                    return Err(DemandError::Invalid("interval does not contain mean"));
                }
                if self.lower[h][j] < 0.0 {
                    return Err(DemandError::Invalid("negative interval bound"));
                }
            }
        }
        for mat in &self.mobility {
            if mat.rows() != self.regions || mat.cols() != self.regions {
                return Err(DemandError::Invalid("mobility matrix shape"));
            }
            for i in 0..mat.rows() {
                let sum: f64 = mat.row(i).iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL || mat.row(i).iter().any(|&v| v < 0.0) {
                    return Err(DemandError::Invalid("mobility row not stochastic"));
                }
            }
        }
        Ok(())
    }
}

/// Bootstrap the mean of `daily` vectors: each of the `b` samples averages
/// `d = daily.len()` draws with replacement; the returned mean averages the
/// samples. Sample `i` draws from a stream seeded `seed + i`, so the result
/// is independent of evaluation order.
pub fn bootstrap_mean(
    daily: &[Vec<f64>],
    b: u32,
    seed: u64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), DemandError> {
    if daily.is_empty() {
        return Err(DemandError::EmptyData);
    }
    if b == 0 {
        return Err(DemandError::ZeroSamples);
    }
    let d = daily.len();
    let n = daily[0].len();
    let mut samples = Vec::with_capacity(b as usize);
    for sample_idx in 0..b as u64 {
        let mut rng = Rng64::new(seed.wrapping_add(sample_idx));
        let mut acc = vec![0.0; n];
        for _ in 0..d {
            let pick = &daily[rng.index(d)];
            for (a, v) in acc.iter_mut().zip(pick.iter()) {
                *a += v;
            }
        }
        for a in acc.iter_mut() {
            *a /= d as f64;
        }
        samples.push(acc);
    }
    let mut mean = vec![0.0; n];
    for sample in &samples {
        for (m, v) in mean.iter_mut().zip(sample.iter()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= b as f64;
    }
    Ok((mean, samples))
}

/// Per-coordinate biased sample variance `(1/B) * sum (x_b - mean)^2`
/// of the bootstrap samples.
pub fn bootstrap_variance(samples: &[Vec<f64>]) -> Vec<f64> {
    if samples.is_empty() {
        return Vec::new();
    }
    let b = samples.len() as f64;
    let n = samples[0].len();
    let mut mean = vec![0.0; n];
    for sample in samples {
        for (m, v) in mean.iter_mut().zip(sample.iter()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= b;
    }
    let mut variance = vec![0.0; n];
    for sample in samples {
        for ((var, v), m) in variance.iter_mut().zip(sample.iter()).zip(mean.iter()) {
            let diff = v - m;
            *var += diff * diff;
        }
    }
    for var in variance.iter_mut() {
        *var /= b;
    }
    variance
}

/// Interval bounds `mean +/- multiplier * sqrt(variance)`; the lower bound
/// clamps at zero.
pub fn demand_interval(mean: &[f64], variance: &[f64], multiplier: f64) -> (Vec<f64>, Vec<f64>) {
    let mut lower = Vec::with_capacity(mean.len());
    let mut upper = Vec::with_capacity(mean.len());
    for (m, v) in mean.iter().zip(variance.iter()) {
        let dev = multiplier * math::sqrt(v.max(0.0));
        lower.push((m - dev).max(0.0));
        upper.push(m + dev);
    }
    (lower, upper)
}

/// Row-normalize trajectory counts into a mobility matrix. A row with zero
/// trajectories becomes a self-loop (the taxi is assumed to stay in its
/// region for the slot).
pub fn estimate_mobility(counts: &Mat) -> Mat {
    let n = counts.rows();
    debug_assert_eq!(n, counts.cols());
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        let total: f64 = counts.row(i).iter().sum();
        if total > 0.0 {
            for j in 0..n {
                out[(i, j)] = counts[(i, j)] / total;
            }
        } else {
            out[(i, i)] = 1.0;
        }
    }
    out
}

/// Probability that a drop-off lands in each region; uniform when there are
/// no drop-offs at all.
pub fn dropoff_probability(dp: &[f64]) -> Vec<f64> {
    let total: f64 = dp.iter().sum();
    if total > 0.0 {
        dp.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / dp.len() as f64; dp.len()]
    }
}

/// Estimation settings for [`build_demand_model`].
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub t1_minutes: u32,
    pub t2_minutes: u32,
    pub bootstrap_samples: u32,
    pub seed: u64,
    pub interval_multiplier: f64,
    pub day_filter: DayFilter,
    /// Seconds added to UTC midnight when splitting the trace into days.
    pub day_offset: i64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            t1_minutes: 60,
            t2_minutes: 60,
            bootstrap_samples: 1000,
            seed: 0,
            interval_multiplier: 1.0,
            day_filter: DayFilter::All,
            day_offset: 0,
        }
    }
}

/// Build the full demand model from parsed traces. Pure function of the
/// inputs: identical traces, params, and seed give an identical model.
pub fn build_demand_model(
    traces: &[TaxiTrace],
    grid: &RegionGrid,
    params: &ModelParams,
) -> Result<DemandModel, DemandError> {
    let n = grid.regions();
    let mut events = Vec::new();
    for taxi in traces {
        events.extend(detect_events(&taxi.records, grid));
    }
    let counts = aggregate_counts(&events, params.t1_minutes, n, params.day_offset)?
        .filter_days(|day| params.day_filter.keeps(day));
    if counts.days.is_empty() {
        return Err(DemandError::EmptyData);
    }

    let slots1 = counts.slots();
    let mut means = Vec::with_capacity(slots1);
    let mut variances = Vec::with_capacity(slots1);
    let mut dropoffs = Vec::with_capacity(slots1);
    let mut lower = Vec::with_capacity(slots1);
    let mut upper = Vec::with_capacity(slots1);
    for slot in 1..=slots1 {
        let pickup_days = counts.daily_pickups(slot);
        let dropoff_days = counts.daily_dropoffs(slot);
        let (mean, samples) = bootstrap_mean(
            &pickup_days,
            params.bootstrap_samples,
            derive_seed(params.seed, "bootstrap-pickup", slot as u64),
        )?;
        let variance = bootstrap_variance(&samples);
        let (lo, hi) = demand_interval(&mean, &variance, params.interval_multiplier);
        let (dp_mean, _) = bootstrap_mean(
            &dropoff_days,
            params.bootstrap_samples,
            derive_seed(params.seed, "bootstrap-dropoff", slot as u64),
        )?;
        means.push(mean);
        variances.push(variance);
        dropoffs.push(dp_mean);
        lower.push(lo);
        upper.push(hi);
    }

    let mut transition_totals = vec![Mat::zeros(n, n); (1440 / params.t2_minutes) as usize];
    for taxi in traces {
        // the day filter applies to trips as well, keyed by pickup day
        let per_taxi = count_transitions_filtered(
            &taxi.records,
            grid,
            params.t2_minutes,
            params.day_offset,
            |day| params.day_filter.keeps(day),
        )?;
        for (total, mat) in transition_totals.iter_mut().zip(per_taxi.mats.iter()) {
            for i in 0..n {
                for j in 0..n {
                    total[(i, j)] += mat[(i, j)];
                }
            }
        }
    }
    let mobility = transition_totals.iter().map(estimate_mobility).collect();

    let model = DemandModel {
        t1_minutes: params.t1_minutes,
        t2_minutes: params.t2_minutes,
        bootstrap_samples: params.bootstrap_samples,
        seed: params.seed,
        interval_multiplier: params.interval_multiplier,
        regions: n,
        means,
        variances,
        dropoffs,
        lower,
        upper,
        mobility,
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::GeoPoint;
    use crate::trace::TraceRecord;

    #[test]
    fn bootstrap_of_constant_data_is_exact() {
        let v = vec![2.0, 5.0, 0.5];
        let daily: Vec<Vec<f64>> = (0..6).map(|_| v.clone()).collect();
        let (mean, samples) = bootstrap_mean(&daily, 50, 9).unwrap();
        assert_eq!(mean, v);
        for sample in &samples {
            assert_eq!(sample, &v);
        }
        let variance = bootstrap_variance(&samples);
        assert!(variance.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn bootstrap_single_day_returns_it() {
        let daily = vec![vec![1.0, 7.0]];
        let (mean, _) = bootstrap_mean(&daily, 25, 3).unwrap();
        assert_eq!(mean, vec![1.0, 7.0]);
    }

    #[test]
    fn bootstrap_paper_scale_runs() {
        // d = 18 weekdays, B = 1000
        let mut rng = Rng64::new(17);
        let daily: Vec<Vec<f64>> = (0..18)
            .map(|_| (0..16).map(|_| rng.uniform(0.0, 30.0)).collect())
            .collect();
        let (mean, samples) = bootstrap_mean(&daily, 1000, 7).unwrap();
        assert_eq!(samples.len(), 1000);
        assert_eq!(mean.len(), 16);
        // bootstrap mean should be near the plain average
        let plain: Vec<f64> = (0..16)
            .map(|j| daily.iter().map(|d| d[j]).sum::<f64>() / 18.0)
            .collect();
        for (m, p) in mean.iter().zip(plain.iter()) {
            assert!((m - p).abs() < 2.0, "bootstrap {m} too far from {p}");
        }
    }

    #[test]
    fn bootstrap_empty_is_error() {
        assert!(matches!(
            bootstrap_mean(&[], 10, 0),
            Err(DemandError::EmptyData)
        ));
    }

    #[test]
    fn bootstrap_deterministic_per_seed() {
        let daily = vec![vec![1.0], vec![4.0], vec![9.0]];
        let a = bootstrap_mean(&daily, 100, 5).unwrap();
        let b = bootstrap_mean(&daily, 100, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn variance_direct_formula() {
        let samples = vec![vec![0.0], vec![2.0]];
        assert_eq!(bootstrap_variance(&samples), vec![1.0]);
    }

    #[test]
    fn variance_invariant_under_reordering() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 5.0], vec![0.0, 1.0]];
        let mut b = a.clone();
        b.reverse();
        for (va, vb) in bootstrap_variance(&a).iter().zip(bootstrap_variance(&b).iter()) {
            assert!((va - vb).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_direct_and_clamped() {
        let (lo, hi) = demand_interval(&[4.0], &[1.0], 1.0);
        assert_eq!((lo[0], hi[0]), (3.0, 5.0));
        let (lo, hi) = demand_interval(&[0.5], &[1.0], 1.0);
        assert_eq!((lo[0], hi[0]), (0.0, 1.5));
        let (lo, hi) = demand_interval(&[2.0], &[0.0], 1.0);
        assert_eq!((lo[0], hi[0]), (2.0, 2.0));
    }

    #[test]
    fn interval_contains_mean_never_negative() {
        let mut rng = Rng64::new(2);
        for _ in 0..200 {
            let mean: Vec<f64> = (0..5).map(|_| rng.uniform(0.0, 10.0)).collect();
            let var: Vec<f64> = (0..5).map(|_| rng.uniform(0.0, 20.0)).collect();
            let (lo, hi) = demand_interval(&mean, &var, rng.uniform(0.1, 3.0));
            for j in 0..5 {
                assert!(lo[j] >= 0.0);
                assert!(lo[j] <= mean[j] && mean[j] <= hi[j]);
            }
        }
    }

    #[test]
    fn mobility_row_normalization() {
        let counts = Mat::from_rows(&[vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 6.0]]);
        let c = estimate_mobility(&counts);
        assert_eq!(c.row(0), &[0.0, 0.5, 0.5]);
        // zero row falls back to a self loop
        assert_eq!(c.row(1), &[0.0, 1.0, 0.0]);
        assert_eq!(c.row(2), &[0.25, 0.0, 0.75]);
    }

    #[test]
    fn mobility_rows_sum_to_one_for_arbitrary_counts() {
        let mut rng = Rng64::new(8);
        for _ in 0..100 {
            let n = 1 + rng.index(6);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if rng.next_f64() < 0.3 {
                                0.0
                            } else {
                                rng.uniform(0.0, 40.0)
                            }
                        })
                        .collect()
                })
                .collect();
            let c = estimate_mobility(&Mat::from_rows(&rows));
            for i in 0..n {
                let sum: f64 = c.row(i).iter().sum();
                assert!((sum - 1.0).abs() <= ROW_SUM_TOL);
                assert!(c.row(i).iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn mobility_reproduces_reference_row() {
        // published transition-probability row; the values sum to 1 exactly
        let probs = [
            0.0032, 0.0337, 0.5144, 0.0278, 0.0132, 0.0577, 0.1966, 0.0263, 0.0001, 0.0050,
            0.0340, 0.0136, 0.0018, 0.0082, 0.0248, 0.0396,
        ];
        let n = probs.len();
        let mut rows = vec![vec![0.0f64; n]; n];
        for (j, &p) in probs.iter().enumerate() {
            rows[0][j] = p * 10_000.0; // counts proportional to the probabilities
            if j > 0 {
                rows[j][j] = 1.0;
            }
        }
        let c = estimate_mobility(&Mat::from_rows(&rows));
        let sum: f64 = c.row(0).iter().sum();
        assert!((sum - 1.0).abs() <= ROW_SUM_TOL);
        let total: f64 = probs.iter().sum();
        for j in 0..n {
            assert!((c[(0, j)] - probs[j] / total).abs() < 1e-12);
        }
    }

    #[test]
    fn dropoff_probability_cases() {
        assert_eq!(dropoff_probability(&[2.0, 2.0]), vec![0.5, 0.5]);
        let uniform = dropoff_probability(&[0.0, 0.0, 0.0]);
        for v in &uniform {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(dropoff_probability(&[1.0, 0.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn day_filter_weekday_weekend() {
        // day 0 = Thursday, day 2 = Saturday, day 3 = Sunday, day 4 = Monday
        assert!(DayFilter::Weekdays.keeps(0));
        assert!(!DayFilter::Weekdays.keeps(2));
        assert!(DayFilter::Weekends.keeps(3));
        assert!(DayFilter::Weekdays.keeps(4));
        assert!(DayFilter::All.keeps(2));
    }

    fn synthetic_trace(seed: u64, days: usize) -> TaxiTrace {
        let mut rng = Rng64::new(seed);
        let mut records = Vec::new();
        for day in 0..days {
            let base = day as i64 * 86_400;
            let mut t = base;
            let mut occupied = false;
            while t < base + 86_000 {
                t += 300 + rng.index(600) as i64;
                occupied = !occupied && rng.next_f64() < 0.4 || occupied && rng.next_f64() >= 0.5;
                records.push(TraceRecord {
                    point: GeoPoint::new(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)),
                    occupied,
                    timestamp: t,
                });
            }
        }
        TaxiTrace {
            id: alloc::format!("taxi-{seed}"),
            records,
        }
    }

    #[test]
    fn build_model_is_deterministic_and_valid() {
        let grid = RegionGrid::new(0.0, 2.0, 0.0, 2.0, 2, 2).unwrap();
        let traces: Vec<TaxiTrace> = (0..4).map(|i| synthetic_trace(100 + i, 3)).collect();
        let params = ModelParams {
            t1_minutes: 120,
            t2_minutes: 60,
            bootstrap_samples: 40,
            seed: 11,
            ..ModelParams::default()
        };
        let a = build_demand_model(&traces, &grid, &params).unwrap();
        let b = build_demand_model(&traces, &grid, &params).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        assert_eq!(a.slots1(), 12);
        assert_eq!(a.mobility.len(), 24);
    }

    #[test]
    fn build_model_empty_traces_errors() {
        let grid = RegionGrid::new(0.0, 2.0, 0.0, 2.0, 2, 2).unwrap();
        let err = build_demand_model(&[], &grid, &ModelParams::default());
        assert!(matches!(err, Err(DemandError::EmptyData)));
    }
}
