//! GPS/occupancy trace ingestion: parsing, pickup/dropoff event extraction,
//! per-slot counting, trajectory transitions, and trace mileage.
//!
//! A trace file holds one taxi's records, one per line, with four
//! whitespace-separated fields: `lat lon occupied(0|1) unix_time`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::geo::{assign_region, deg_to_miles, manhattan_deg, GeoPoint, RegionGrid};
use crate::matrix::Mat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("slot length {0} does not divide 1440 minutes")]
    BadSlotLength(u32),
}

/// One GPS/occupancy sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub point: GeoPoint,
    pub occupied: bool,
    pub timestamp: i64,
}

/// All records of one taxi, sorted ascending by timestamp.
#[derive(Clone, Debug, PartialEq)]
pub struct TaxiTrace {
    pub id: String,
    pub records: Vec<TraceRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Pickup,
    Dropoff,
}

/// An occupancy transition, located at the record where the new state is
/// first observed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEvent {
    pub kind: EventKind,
    /// 1-based region of the event position.
    pub region: usize,
    pub timestamp: i64,
}

/// Parse one taxi's trace text. Records come back sorted ascending by
/// timestamp; among duplicate timestamps the last record in input order wins.
/// An empty input yields an empty vector.
pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, TraceError> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let lat = parse_field::<f64>(fields.next(), line, "latitude")?;
        let lon = parse_field::<f64>(fields.next(), line, "longitude")?;
        let occ_raw = fields
            .next()
            .ok_or_else(|| parse_err(line, "missing occupancy field"))?;
        let occupied = match occ_raw {
            "0" => false,
            "1" => true,
            other => {
                return Err(parse_err(
                    line,
                    &alloc::format!("occupancy must be 0 or 1, got {other}"),
                ))
            }
        };
        let timestamp = parse_field::<i64>(fields.next(), line, "timestamp")?;
        if fields.next().is_some() {
            return Err(parse_err(line, "expected exactly 4 fields"));
        }
        let point = GeoPoint::new(lat, lon);
        if !point.is_valid() {
            return Err(parse_err(line, "coordinates out of range"));
        }
        records.push(TraceRecord {
            point,
            occupied,
            timestamp,
        });
    }
    records.sort_by_key(|r| r.timestamp);
    // stable sort keeps input order within equal timestamps; keep the last
    records.dedup_by(|next, prev| {
        if next.timestamp == prev.timestamp {
            *prev = *next;
            true
        } else {
            false
        }
    });
    Ok(records)
}

fn parse_field<T: core::str::FromStr>(
    field: Option<&str>,
    line: usize,
    name: &str,
) -> Result<T, TraceError> {
    let raw = field.ok_or_else(|| parse_err(line, &alloc::format!("missing {name} field")))?;
    raw.parse()
        .map_err(|_| parse_err(line, &alloc::format!("bad {name}: {raw}")))
}

fn parse_err(line: usize, reason: &str) -> TraceError {
    TraceError::Parse {
        line,
        reason: reason.to_string(),
    }
}

/// Extract pickup (0 -> 1) and dropoff (1 -> 0) events from one taxi's
/// sorted records. The first record alone never produces an event.
pub fn detect_events(records: &[TraceRecord], grid: &RegionGrid) -> Vec<TraceEvent> {
    let mut events = Vec::new();
    for pair in records.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        let kind = match (prev.occupied, next.occupied) {
            (false, true) => EventKind::Pickup,
            (true, false) => EventKind::Dropoff,
            _ => continue,
        };
        events.push(TraceEvent {
            kind,
            region: assign_region(grid, next.point),
            timestamp: next.timestamp,
        });
    }
    events
}

/// Per-day pickup/dropoff counts for one slot length.
#[derive(Clone, Debug, PartialEq)]
pub struct DayCounts {
    /// slots x regions
    pub pickups: Mat,
    /// slots x regions
    pub dropoffs: Mat,
}

/// Pickup and dropoff counts indexed by day, slot, and region.
#[derive(Clone, Debug, PartialEq)]
pub struct SlotCounts {
    pub slot_minutes: u32,
    pub regions: usize,
    /// Keyed by day index (days since epoch, after the day-boundary offset).
    pub days: BTreeMap<i64, DayCounts>,
}

impl SlotCounts {
    pub fn slots(&self) -> usize {
        (1440 / self.slot_minutes) as usize
    }

    /// One pickup vector per day (sorted by day) for a 1-based slot.
    pub fn daily_pickups(&self, slot: usize) -> Vec<Vec<f64>> {
        self.days
            .values()
            .map(|d| d.pickups.row(slot - 1).to_vec())
            .collect()
    }

    /// One dropoff vector per day (sorted by day) for a 1-based slot.
    pub fn daily_dropoffs(&self, slot: usize) -> Vec<Vec<f64>> {
        self.days
            .values()
            .map(|d| d.dropoffs.row(slot - 1).to_vec())
            .collect()
    }

    /// Counts summed across days: `(pickups, dropoffs)`, slots x regions.
    pub fn totals(&self) -> (Mat, Mat) {
        let slots = self.slots();
        let mut pickups = Mat::zeros(slots, self.regions);
        let mut dropoffs = Mat::zeros(slots, self.regions);
        for day in self.days.values() {
            for h in 0..slots {
                for j in 0..self.regions {
                    pickups[(h, j)] += day.pickups[(h, j)];
                    dropoffs[(h, j)] += day.dropoffs[(h, j)];
                }
            }
        }
        (pickups, dropoffs)
    }

    /// Restrict to days matching `keep(day_index)`.
    pub fn filter_days(&self, keep: impl Fn(i64) -> bool) -> SlotCounts {
        SlotCounts {
            slot_minutes: self.slot_minutes,
            regions: self.regions,
            days: self
                .days
                .iter()
                .filter(|(day, _)| keep(**day))
                .map(|(day, counts)| (*day, counts.clone()))
                .collect(),
        }
    }
}

/// Trajectory counts per dispatch-period slot: entry `(i, j)` of slot `h` is
/// the number of completed trips picked up in region `i + 1` during slot `h`
/// that dropped off in region `j + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionCounts {
    pub slot_minutes: u32,
    /// One n x n matrix per slot, summed across days.
    pub mats: Vec<Mat>,
}

impl TransitionCounts {
    pub fn slots(&self) -> usize {
        self.mats.len()
    }
}

/// 1-based slot index of a day-second for the given slot length.
/// Second 0 falls in slot 1; a slot's upper boundary belongs to that slot.
fn slot_of_day_second(second: i64, slot_minutes: u32) -> usize {
    let span = 60 * slot_minutes as i64;
    if second <= 0 {
        return 1;
    }
    let slot = (second + span - 1) / span;
    slot as usize
}

fn split_day(timestamp: i64, day_offset: i64) -> (i64, i64) {
    let shifted = timestamp - day_offset;
    (shifted.div_euclid(86_400), shifted.rem_euclid(86_400))
}

/// Aggregate events into per-day, per-slot, per-region counts.
/// `day_offset` shifts the day boundary (seconds added to UTC midnight).
pub fn aggregate_counts(
    events: &[TraceEvent],
    slot_minutes: u32,
    regions: usize,
    day_offset: i64,
) -> Result<SlotCounts, TraceError> {
    if slot_minutes == 0 || 1440 % slot_minutes != 0 {
        return Err(TraceError::BadSlotLength(slot_minutes));
    }
    let slots = (1440 / slot_minutes) as usize;
    let mut days: BTreeMap<i64, DayCounts> = BTreeMap::new();
    for event in events {
        let (day, second) = split_day(event.timestamp, day_offset);
        let slot = slot_of_day_second(second, slot_minutes);
        let entry = days.entry(day).or_insert_with(|| DayCounts {
            pickups: Mat::zeros(slots, regions),
            dropoffs: Mat::zeros(slots, regions),
        });
        let cell = (slot - 1, event.region - 1);
        match event.kind {
            EventKind::Pickup => entry.pickups[cell] += 1.0,
            EventKind::Dropoff => entry.dropoffs[cell] += 1.0,
        }
    }
    Ok(SlotCounts {
        slot_minutes,
        regions,
        days,
    })
}

/// Count completed passenger trips (pickup to the next dropoff) per
/// dispatch-period slot, binned by the pickup's slot. Trips still open at
/// the end of the trace are discarded.
pub fn count_transitions(
    records: &[TraceRecord],
    grid: &RegionGrid,
    slot_minutes: u32,
    day_offset: i64,
) -> Result<TransitionCounts, TraceError> {
    count_transitions_filtered(records, grid, slot_minutes, day_offset, |_| true)
}

/// [`count_transitions`] restricted to trips whose pickup day passes
/// `keep_day`. Filtering happens per trip rather than per record so that
/// occupancy transitions never pair across removed gaps.
pub fn count_transitions_filtered(
    records: &[TraceRecord],
    grid: &RegionGrid,
    slot_minutes: u32,
    day_offset: i64,
    keep_day: impl Fn(i64) -> bool,
) -> Result<TransitionCounts, TraceError> {
    if slot_minutes == 0 || 1440 % slot_minutes != 0 {
        return Err(TraceError::BadSlotLength(slot_minutes));
    }
    let slots = (1440 / slot_minutes) as usize;
    let n = grid.regions();
    let mut mats = alloc::vec![Mat::zeros(n, n); slots];
    let mut open_pickup: Option<(usize, i64)> = None;
    for pair in records.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        match (prev.occupied, next.occupied) {
            (false, true) => {
                open_pickup = Some((assign_region(grid, next.point), next.timestamp));
            }
            (true, false) => {
                if let Some((from, picked_at)) = open_pickup.take() {
                    let to = assign_region(grid, next.point);
                    let (day, second) = split_day(picked_at, day_offset);
                    if !keep_day(day) {
                        continue;
                    }
                    let slot = slot_of_day_second(second, slot_minutes);
                    mats[slot - 1][(from - 1, to - 1)] += 1.0;
                }
            }
            _ => {}
        }
    }
    Ok(TransitionCounts { slot_minutes, mats })
}

/// Which trace segments contribute to mileage. A segment belongs to the
/// occupancy state of its starting record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MileageFilter {
    All,
    VacantOnly,
    OccupiedOnly,
}

/// Sum of per-segment Manhattan distances over consecutive records,
/// converted to miles.
pub fn trace_mileage(records: &[TraceRecord], filter: MileageFilter) -> f64 {
    let mut total_deg = 0.0;
    for pair in records.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        let include = match filter {
            MileageFilter::All => true,
            MileageFilter::VacantOnly => !prev.occupied,
            MileageFilter::OccupiedOnly => prev.occupied,
        };
        if include {
            total_deg += manhattan_deg(prev.point, next.point);
        }
    }
    deg_to_miles(total_deg)
}


#[cfg(test)]
mod filter_tests {
    use super::*;

    fn rec(lat: f64, lon: f64, occupied: bool, ts: i64) -> TraceRecord {
        TraceRecord {
            point: GeoPoint::new(lat, lon),
            occupied,
            timestamp: ts,
        }
    }

    #[test]
    fn transition_day_filter_keys_on_pickup_day() {
        let grid = RegionGrid::new(0.0, 2.0, 0.0, 2.0, 2, 2).unwrap();
        // one trip fully on day 0, one picked up on day 0 ending on day 1
        let records = vec![
            rec(0.5, 0.5, false, 1_000),
            rec(0.5, 0.6, true, 2_000),
            rec(1.5, 0.5, false, 3_000),
            rec(0.5, 0.5, false, 86_000),
            rec(0.5, 0.6, true, 86_300), // pickup still day 0
            rec(1.5, 1.5, false, 86_500), // dropoff on day 1
        ];
        let all = count_transitions(&records, &grid, 60, 0).unwrap();
        let total: f64 = all.mats.iter().flat_map(|m| m.data().iter()).sum();
        assert_eq!(total, 2.0);
        let day0_only =
            count_transitions_filtered(&records, &grid, 60, 0, |day| day == 0).unwrap();
        let total: f64 = day0_only.mats.iter().flat_map(|m| m.data().iter()).sum();
        assert_eq!(total, 2.0);
        let day1_only =
            count_transitions_filtered(&records, &grid, 60, 0, |day| day == 1).unwrap();
        let total: f64 = day1_only.mats.iter().flat_map(|m| m.data().iter()).sum();
        assert_eq!(total, 0.0);
    }
}
