//! Run configuration: a flat `key = value` text file plus flag overrides
//! (flags win). Unknown keys and malformed values are reported with their
//! key path.

use std::path::{Path, PathBuf};

use taxi_rhc_core::demand::DayFilter;
use taxi_rhc_core::geo::RegionGrid;
use taxi_rhc_core::lp::SolverOptions;
use taxi_rhc_core::rhc::{DispatchMode, RhcConfig};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub bounds_min_lat: f64,
    pub bounds_max_lat: f64,
    pub bounds_min_lon: f64,
    pub bounds_max_lon: f64,
    pub grid_rows: usize,
    pub grid_cols: usize,

    pub t1_minutes: u32,
    pub t2_minutes: u32,
    pub horizon: usize,

    /// Per-step weights; a single entry broadcasts over the horizon.
    pub beta: Vec<f64>,
    /// Per-step distance caps in degrees; a single entry broadcasts.
    pub alpha: Vec<f64>,
    pub mode: DispatchMode,
    pub interval_multiplier: f64,

    pub bootstrap_samples: u32,
    pub day_filter: DayFilter,
    pub day_offset: i64,

    pub feas_tol: f64,
    pub opt_tol: f64,
    pub max_iters: usize,

    pub scenario_days: u32,
    pub scenario_fleet: usize,
    pub scenario_rate_total: f64,
    /// 1-based hot regions; empty means uniform demand.
    pub scenario_hot_regions: Vec<usize>,
    pub scenario_hot_share: f64,
    pub scenario_trip_ticks: usize,
    /// Optional estimated-model file driving the scenario and the engine.
    pub scenario_model: Option<PathBuf>,

    pub miles_per_degree: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bounds_min_lat: 0.0,
            bounds_max_lat: 0.3,
            bounds_min_lon: 0.0,
            bounds_max_lon: 0.3,
            grid_rows: 3,
            grid_cols: 3,
            t1_minutes: 60,
            t2_minutes: 30,
            horizon: 2,
            beta: vec![2.0],
            alpha: vec![1.0],
            mode: DispatchMode::Nominal,
            interval_multiplier: 1.0,
            bootstrap_samples: 1000,
            day_filter: DayFilter::All,
            day_offset: 0,
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            max_iters: 50_000,
            scenario_days: 1,
            scenario_fleet: 30,
            scenario_rate_total: 24.0,
            scenario_hot_regions: Vec::new(),
            scenario_hot_share: 0.7,
            scenario_trip_ticks: 1,
            scenario_model: None,
            miles_per_degree: 70.0,
            seed: 42,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn bad_key(key: &str, detail: &str) -> CliError {
    CliError::Usage(format!("config key `{key}`: {detail}"))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| bad_key(key, &format!("cannot parse `{value}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse().map_err(|_| bad_key(key, &format!("cannot parse `{v}`"))))
        .collect()
}

pub fn parse_mode(value: &str) -> Result<DispatchMode, CliError> {
    match value {
        "nominal" => Ok(DispatchMode::Nominal),
        "robust" => Ok(DispatchMode::Robust),
        other => Err(CliError::Usage(format!(
            "mode must be `nominal` or `robust`, got `{other}`"
        ))),
    }
}

pub fn parse_day_filter(value: &str) -> Result<DayFilter, CliError> {
    match value {
        "all" => Ok(DayFilter::All),
        "weekday" | "weekdays" => Ok(DayFilter::Weekdays),
        "weekend" | "weekends" => Ok(DayFilter::Weekends),
        other => Err(CliError::Usage(format!(
            "days must be `all`, `weekday`, or `weekend`, got `{other}`"
        ))),
    }
}

impl RunConfig {
    /// Load defaults, then the optional config file, in line order.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            cfg.apply_text(&text)?;
        }
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected `key = value`, got `{raw}`",
                    idx + 1
                )));
            };
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Apply one key/value pair (also used for `--set`-style overrides).
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "bounds.min_lat" => self.bounds_min_lat = parse_num(key, value)?,
            "bounds.max_lat" => self.bounds_max_lat = parse_num(key, value)?,
            "bounds.min_lon" => self.bounds_min_lon = parse_num(key, value)?,
            "bounds.max_lon" => self.bounds_max_lon = parse_num(key, value)?,
            "grid.rows" => self.grid_rows = parse_num(key, value)?,
            "grid.cols" => self.grid_cols = parse_num(key, value)?,
            "clock.t1" => self.t1_minutes = parse_num(key, value)?,
            "clock.t2" => self.t2_minutes = parse_num(key, value)?,
            "clock.horizon" => self.horizon = parse_num(key, value)?,
            "dispatch.beta" => self.beta = parse_list(key, value)?,
            "dispatch.alpha" => self.alpha = parse_list(key, value)?,
            "dispatch.mode" => self.mode = parse_mode(value)?,
            "dispatch.interval_multiplier" => self.interval_multiplier = parse_num(key, value)?,
            "estimate.bootstrap" => self.bootstrap_samples = parse_num(key, value)?,
            "estimate.days" => self.day_filter = parse_day_filter(value)?,
            "estimate.day_offset" => self.day_offset = parse_num(key, value)?,
            "lp.feas_tol" => self.feas_tol = parse_num(key, value)?,
            "lp.opt_tol" => self.opt_tol = parse_num(key, value)?,
            "lp.max_iters" => self.max_iters = parse_num(key, value)?,
            "scenario.days" => self.scenario_days = parse_num(key, value)?,
            "scenario.fleet" => self.scenario_fleet = parse_num(key, value)?,
            "scenario.rate_total" => self.scenario_rate_total = parse_num(key, value)?,
            "scenario.hot_regions" => self.scenario_hot_regions = parse_list(key, value)?,
            "scenario.hot_share" => self.scenario_hot_share = parse_num(key, value)?,
            "scenario.trip_ticks" => self.scenario_trip_ticks = parse_num(key, value)?,
            "scenario.model" => {
                self.scenario_model = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                };
            }
            "sim.miles_per_degree" => self.miles_per_degree = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out_dir = PathBuf::from(value),
            other => return Err(CliError::Usage(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Structural validation; reports the offending key paths.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut problems = Vec::new();
        if !(self.bounds_min_lat < self.bounds_max_lat) {
            problems.push("bounds.min_lat must be below bounds.max_lat");
        }
        if !(self.bounds_min_lon < self.bounds_max_lon) {
            problems.push("bounds.min_lon must be below bounds.max_lon");
        }
        if self.grid_rows == 0 || self.grid_cols == 0 {
            problems.push("grid.rows and grid.cols must be positive");
        }
        if self.t1_minutes == 0 || 1440 % self.t1_minutes != 0 {
            problems.push("clock.t1 must divide 1440");
        }
        if self.t2_minutes == 0 || !self.t1_minutes.is_multiple_of(self.t2_minutes) {
            problems.push("clock.t2 must divide clock.t1");
        }
        if self.horizon == 0 {
            problems.push("clock.horizon must be at least 1");
        }
        if self.beta.is_empty() || (self.beta.len() != 1 && self.beta.len() != self.horizon) {
            problems.push("dispatch.beta needs one value or one per horizon step");
        }
        if self.alpha.is_empty() || (self.alpha.len() != 1 && self.alpha.len() != self.horizon) {
            problems.push("dispatch.alpha needs one value or one per horizon step");
        }
        if self.beta.iter().any(|&b| !(b >= 0.0)) {
            problems.push("dispatch.beta must be nonnegative");
        }
        if self.alpha.iter().any(|&a| !(a > 0.0)) {
            problems.push("dispatch.alpha must be positive");
        }
        if !(self.interval_multiplier >= 0.0) {
            problems.push("dispatch.interval_multiplier must be nonnegative");
        }
        if self.bootstrap_samples == 0 {
            problems.push("estimate.bootstrap must be at least 1");
        }
        if self.scenario_days == 0 {
            problems.push("scenario.days must be at least 1");
        }
        if self.scenario_trip_ticks == 0 {
            problems.push("scenario.trip_ticks must be at least 1");
        }
        if !(self.scenario_rate_total >= 0.0) {
            problems.push("scenario.rate_total must be nonnegative");
        }
        if !(0.0..=1.0).contains(&self.scenario_hot_share) {
            problems.push("scenario.hot_share must be in [0, 1]");
        }
        let n = self.grid_rows * self.grid_cols;
        if self.scenario_hot_regions.iter().any(|&r| r == 0 || r > n) {
            problems.push("scenario.hot_regions must be 1-based region indices");
        }
        if !(self.miles_per_degree > 0.0) {
            problems.push("sim.miles_per_degree must be positive");
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(problems.join("; ")))
        }
    }

    pub fn grid(&self) -> Result<RegionGrid, CliError> {
        RegionGrid::new(
            self.bounds_min_lat,
            self.bounds_max_lat,
            self.bounds_min_lon,
            self.bounds_max_lon,
            self.grid_rows,
            self.grid_cols,
        )
        .map_err(|e| CliError::Usage(format!("bounds/grid: {e}")))
    }

    fn broadcast(values: &[f64], horizon: usize) -> Vec<f64> {
        if values.len() == 1 {
            vec![values[0]; horizon]
        } else {
            values.to_vec()
        }
    }

    pub fn rhc(&self) -> RhcConfig {
        RhcConfig {
            t1_minutes: self.t1_minutes,
            t2_minutes: self.t2_minutes,
            horizon: self.horizon,
            beta: Self::broadcast(&self.beta, self.horizon),
            alpha: Self::broadcast(&self.alpha, self.horizon),
            mode: self.mode,
            solver: self.solver(),
        }
    }

    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            feas_tol: self.feas_tol,
            opt_tol: self.opt_tol,
            max_iters: self.max_iters,
            ..SolverOptions::default()
        }
    }

    /// Per-slot per-region request rates implied by the scenario keys:
    /// `hot_share` of the citywide total concentrates uniformly on the hot
    /// regions, the rest spreads over the others.
    pub fn scenario_rates(&self) -> Vec<f64> {
        let n = self.grid_rows * self.grid_cols;
        let total = self.scenario_rate_total;
        let hot = &self.scenario_hot_regions;
        if hot.is_empty() || hot.len() == n {
            return vec![total / n as f64; n];
        }
        let mut rates = vec![total * (1.0 - self.scenario_hot_share) / (n - hot.len()) as f64; n];
        for &region in hot {
            rates[region - 1] = total * self.scenario_hot_share / hot.len() as f64;
        }
        rates
    }
}
