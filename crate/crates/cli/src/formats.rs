//! File formats. All writers are deterministic (fixed field order, shortest
//! round-trip float formatting), so identical runs produce byte-identical
//! artifacts.
//!
//! * demand model — versioned JSON envelope (`taxi-rhc-model` v1)
//! * metrics — CSV `slot,mismatch_error,idle_miles` with a `# taxi-rhc-metrics v1`
//!   metadata header and a trailing `summary` row (mean mismatch, total idle)
//! * orders — CSV `step,taxi_id,from_region,to_region,target_lat,target_lon`
//! * plan — CSV `taxi_id,from_region,to_region,target_lat,target_lon,distance_deg`
//!   with the objective breakdown in the metadata header
//! * counts — CSV `slot,region,pickups,dropoffs` and `slot,from,to,count`
//! * fleet snapshot — text lines `taxi_id lat lon occupied(0|1)`

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use taxi_rhc_core::demand::DemandModel;
use taxi_rhc_core::geo::GeoPoint;
use taxi_rhc_core::rhc::{FleetSnapshot, VacantTaxi};
use taxi_rhc_core::sim::{OrderRecord, SimMetrics};
use taxi_rhc_core::trace::{SlotCounts, TransitionCounts};

use crate::CliError;

pub const MODEL_FORMAT: &str = "taxi-rhc-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelEnvelope {
    format: String,
    version: u32,
    model: DemandModel,
}

pub fn write_model(path: &Path, model: &DemandModel) -> Result<(), CliError> {
    let envelope = ModelEnvelope {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        model: model.clone(),
    };
    let mut text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| CliError::Data(format!("model serialization: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<DemandModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read model {}: {e}", path.display())))?;
    let envelope: ModelEnvelope = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("model file {}: {e}", path.display())))?;
    if envelope.format != MODEL_FORMAT {
        return Err(CliError::Data(format!(
            "model file {}: unexpected format `{}`",
            path.display(),
            envelope.format
        )));
    }
    if envelope.version != MODEL_VERSION {
        return Err(CliError::Data(format!(
            "model file {}: unsupported version {}",
            path.display(),
            envelope.version
        )));
    }
    envelope
        .model
        .validate()
        .map_err(|e| CliError::Data(format!("model file {}: {e}", path.display())))?;
    Ok(envelope.model)
}

/// Metadata carried in the first line of a metrics CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsMeta {
    pub arm: String,
    /// First-step objective weight; absent for the no-dispatch baseline.
    pub beta: Option<f64>,
    pub t2_minutes: u32,
    pub seed: u64,
}

pub fn render_metrics(metrics: &SimMetrics, meta: &MetricsMeta) -> String {
    let mut out = String::new();
    let _ = write!(out, "# taxi-rhc-metrics v1 arm={}", meta.arm);
    if let Some(beta) = meta.beta {
        let _ = write!(out, " beta={beta}");
    }
    let _ = writeln!(out, " t2={} seed={}", meta.t2_minutes, meta.seed);
    out.push_str("slot,mismatch_error,idle_miles\n");
    for (idx, slot) in metrics.per_slot.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", idx + 1, slot.mismatch_error, slot.idle_miles);
    }
    let _ = writeln!(
        out,
        "summary,{},{}",
        metrics.mean_mismatch_error, metrics.total_idle_miles
    );
    out
}

pub fn write_metrics(path: &Path, metrics: &SimMetrics, meta: &MetricsMeta) -> Result<(), CliError> {
    std::fs::write(path, render_metrics(metrics, meta))?;
    Ok(())
}

/// Parsed metrics file: metadata plus the summary row.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsSummary {
    pub meta: MetricsMeta,
    pub slots: usize,
    pub mean_mismatch_error: f64,
    pub total_idle_miles: f64,
}

pub fn read_metrics_summary(path: &Path) -> Result<MetricsSummary, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read metrics {}: {e}", path.display())))?;
    parse_metrics_summary(&text).map_err(|msg| {
        CliError::Data(format!("metrics file {}: {msg}", path.display()))
    })
}

fn parse_metrics_summary(text: &str) -> Result<MetricsSummary, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let rest = header
        .strip_prefix("# taxi-rhc-metrics v1 ")
        .ok_or("missing `# taxi-rhc-metrics v1` header")?;
    let mut fields = BTreeMap::new();
    for token in rest.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or("malformed header token")?;
        fields.insert(key.to_string(), value.to_string());
    }
    let meta = MetricsMeta {
        arm: fields.get("arm").cloned().ok_or("header missing arm")?,
        beta: fields
            .get("beta")
            .map(|v| v.parse().map_err(|_| "bad beta"))
            .transpose()?,
        t2_minutes: fields
            .get("t2")
            .ok_or("header missing t2")?
            .parse()
            .map_err(|_| "bad t2")?,
        seed: fields
            .get("seed")
            .ok_or("header missing seed")?
            .parse()
            .map_err(|_| "bad seed")?,
    };
    let columns = lines.next().ok_or("missing column header")?;
    if columns != "slot,mismatch_error,idle_miles" {
        return Err(format!("unexpected columns `{columns}`"));
    }
    let mut slots = 0usize;
    let mut summary = None;
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let first = parts.next().ok_or("short row")?;
        let a: f64 = parts.next().ok_or("short row")?.parse().map_err(|_| "bad number")?;
        let b: f64 = parts.next().ok_or("short row")?.parse().map_err(|_| "bad number")?;
        if first == "summary" {
            summary = Some((a, b));
        } else {
            first.parse::<usize>().map_err(|_| "bad slot index")?;
            slots += 1;
        }
    }
    let (mean_mismatch_error, total_idle_miles) = summary.ok_or("missing summary row")?;
    Ok(MetricsSummary {
        meta,
        slots,
        mean_mismatch_error,
        total_idle_miles,
    })
}

pub fn render_orders(orders: &[OrderRecord]) -> String {
    let mut out = String::from("step,taxi_id,from_region,to_region,target_lat,target_lon\n");
    for record in orders {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            record.step,
            record.order.taxi_id,
            record.order.from_region,
            record.order.to_region,
            record.order.target.lat,
            record.order.target.lon
        );
    }
    out
}

pub fn write_orders(path: &Path, orders: &[OrderRecord]) -> Result<(), CliError> {
    std::fs::write(path, render_orders(orders))?;
    Ok(())
}

/// One plan row: a taxi's origin, dispatched region, target station, and
/// estimated first-step idle distance in degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanRow {
    pub taxi_id: usize,
    pub from_region: usize,
    pub to_region: usize,
    pub target: GeoPoint,
    pub distance_deg: f64,
}

pub struct PlanMeta<'a> {
    pub mode: &'a str,
    pub mismatch: f64,
    pub distance: f64,
    pub total: f64,
    pub lp_objective: f64,
    pub alpha_slack: f64,
}

pub fn render_plan(rows: &[PlanRow], meta: &PlanMeta<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# taxi-rhc-plan v1 mode={} j_e={} j_d={} total={} lp={} alpha_slack={}",
        meta.mode, meta.mismatch, meta.distance, meta.total, meta.lp_objective, meta.alpha_slack
    );
    out.push_str("taxi_id,from_region,to_region,target_lat,target_lon,distance_deg\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.taxi_id, row.from_region, row.to_region, row.target.lat, row.target.lon, row.distance_deg
        );
    }
    out
}

pub fn write_pickup_counts(path: &Path, counts: &SlotCounts) -> Result<(), CliError> {
    let (pickups, dropoffs) = counts.totals();
    let mut out = String::from("slot,region,pickups,dropoffs\n");
    for slot in 0..counts.slots() {
        for region in 0..counts.regions {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                slot + 1,
                region + 1,
                pickups[(slot, region)],
                dropoffs[(slot, region)]
            );
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_transition_counts(path: &Path, counts: &TransitionCounts) -> Result<(), CliError> {
    let mut out = String::from("slot,from,to,count\n");
    for (slot, mat) in counts.mats.iter().enumerate() {
        for from in 0..mat.rows() {
            for to in 0..mat.cols() {
                let value = mat[(from, to)];
                if value != 0.0 {
                    let _ = writeln!(out, "{},{},{},{}", slot + 1, from + 1, to + 1, value);
                }
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parse a fleet snapshot file: `taxi_id lat lon occupied(0|1)` per line.
/// Taxi ids index the station table, so they must be dense enough to bound.
pub fn parse_fleet_snapshot(text: &str) -> Result<(FleetSnapshot, usize), CliError> {
    let mut snapshot = FleetSnapshot::default();
    let mut max_id = 0usize;
    let mut any = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(CliError::Data(format!(
                "fleet line {}: expected `taxi_id lat lon occupied`",
                idx + 1
            )));
        }
        let taxi_id: usize = fields[0].parse().map_err(|_| {
            CliError::Data(format!("fleet line {}: bad taxi id `{}`", idx + 1, fields[0]))
        })?;
        let lat: f64 = fields[1].parse().map_err(|_| {
            CliError::Data(format!("fleet line {}: bad latitude", idx + 1))
        })?;
        let lon: f64 = fields[2].parse().map_err(|_| {
            CliError::Data(format!("fleet line {}: bad longitude", idx + 1))
        })?;
        let position = GeoPoint::new(lat, lon);
        if !position.is_valid() {
            return Err(CliError::Data(format!(
                "fleet line {}: coordinates out of range",
                idx + 1
            )));
        }
        match fields[3] {
            "0" => snapshot.vacant.push(VacantTaxi { id: taxi_id, position }),
            "1" => snapshot.occupied_positions.push(position),
            other => {
                return Err(CliError::Data(format!(
                    "fleet line {}: occupancy must be 0 or 1, got `{other}`",
                    idx + 1
                )))
            }
        }
        max_id = max_id.max(taxi_id);
        any = true;
    }
    if !any {
        return Err(CliError::Data("fleet snapshot has no taxis".to_string()));
    }
    snapshot.vacant.sort_by_key(|t| t.id);
    Ok((snapshot, max_id + 1))
}

/// Total cost in the report tables: mismatch error plus `beta` times the
/// idle distance.
pub fn total_cost(mismatch_error: f64, idle_distance: f64, beta: f64) -> f64 {
    mismatch_error + beta * idle_distance
}
