//! Geographic primitives: the rectangular city grid, point-to-region
//! assignment, Manhattan distances in degrees, and per-taxi station tables.
//!
//! Region indexing convention: regions are numbered `1..=n`, row-major,
//! with region 1 in the `(min_lat, min_lon)` corner. Vectors and matrices
//! indexed by region use position `region - 1`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::rng::Rng64;

/// Ground-distance conversion: 0.1 degree of GPS difference is roughly
/// 7 miles, i.e. 70 miles per degree. City-specific overrides go through
/// [`deg_to_miles_with`].
pub const MILES_PER_DEGREE: f64 = 70.0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeoError {
    #[error("invalid grid bounds: {0}")]
    InvalidBounds(String),
    #[error("grid must have at least one row and one column")]
    EmptyGrid,
}

/// A geographic coordinate in degrees.
#[derive(Copy, Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Self {
        GeoPoint { lat, lon }
    }

    /// Finite and within the WGS-84 coordinate ranges.
    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }
}

/// Equal-area rectangular partition of the city bounding box into
/// `rows x cols` regions.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegionGrid {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
    pub rows: usize,
    pub cols: usize,
}

impl RegionGrid {
    pub fn new(
        min_lat: f64,
        max_lat: f64,
        min_lon: f64,
        max_lon: f64,
        rows: usize,
        cols: usize,
    ) -> Result<Self, GeoError> {
        if !(min_lat.is_finite() && max_lat.is_finite() && min_lon.is_finite() && max_lon.is_finite())
        {
            return Err(GeoError::InvalidBounds(String::from("bounds must be finite")));
        }
        if min_lat >= max_lat {
            return Err(GeoError::InvalidBounds(String::from("min_lat >= max_lat")));
        }
        if min_lon >= max_lon {
            return Err(GeoError::InvalidBounds(String::from("min_lon >= max_lon")));
        }
        if rows == 0 || cols == 0 {
            return Err(GeoError::EmptyGrid);
        }
        Ok(RegionGrid {
            min_lat,
            max_lat,
            min_lon,
            max_lon,
            rows,
            cols,
        })
    }

    /// Number of regions.
    pub fn regions(&self) -> usize {
        self.rows * self.cols
    }

    fn lat_step(&self) -> f64 {
        (self.max_lat - self.min_lat) / self.rows as f64
    }

    fn lon_step(&self) -> f64 {
        (self.max_lon - self.min_lon) / self.cols as f64
    }

    /// Cell bounds `(lat_lo, lat_hi, lon_lo, lon_hi)` of a 1-based region.
    pub fn cell_bounds(&self, region: usize) -> (f64, f64, f64, f64) {
        debug_assert!((1..=self.regions()).contains(&region));
        let idx = region - 1;
        let row = idx / self.cols;
        let col = idx % self.cols;
        (
            self.min_lat + row as f64 * self.lat_step(),
            self.min_lat + (row + 1) as f64 * self.lat_step(),
            self.min_lon + col as f64 * self.lon_step(),
            self.min_lon + (col + 1) as f64 * self.lon_step(),
        )
    }

    /// Midpoint of a 1-based region's cell.
    pub fn cell_center(&self, region: usize) -> GeoPoint {
        let (lat_lo, lat_hi, lon_lo, lon_hi) = self.cell_bounds(region);
        GeoPoint::new(0.5 * (lat_lo + lat_hi), 0.5 * (lon_lo + lon_hi))
    }

    fn axis_cell(&self, value: f64, min: f64, step: f64, count: usize) -> usize {
        if !(value > min) {
            return 0;
        }
        let idx = ((value - min) / step) as usize;
        // Closes the top/right-most boundary and clamps outliers.
        idx.min(count - 1)
    }
}

/// Map a point to its 1-based region index. Cells are half-open
/// `[low, high)` except the top row and right column, which are closed;
/// points outside the bounds clamp to the nearest cell, so the function is
/// total over finite inputs.
pub fn assign_region(grid: &RegionGrid, p: GeoPoint) -> usize {
    let row = grid.axis_cell(p.lat, grid.min_lat, grid.lat_step(), grid.rows);
    let col = grid.axis_cell(p.lon, grid.min_lon, grid.lon_step(), grid.cols);
    row * grid.cols + col + 1
}

/// Manhattan (one-norm) distance between two points, in degrees.
pub fn manhattan_deg(p: GeoPoint, q: GeoPoint) -> f64 {
    (p.lat - q.lat).abs() + (p.lon - q.lon).abs()
}

/// Degrees to ground miles at the default conversion factor.
pub fn deg_to_miles(deg: f64) -> f64 {
    deg * MILES_PER_DEGREE
}

/// Degrees to ground miles with a custom conversion factor.
pub fn deg_to_miles_with(deg: f64, miles_per_degree: f64) -> f64 {
    deg * miles_per_degree
}

/// Per-taxi dispatch destinations: row `j` of taxi `i`'s table is the
/// coordinate the taxi is sent to when ordered to region `j + 1`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StationTable {
    stations: Vec<Vec<GeoPoint>>,
}

impl StationTable {
    pub fn from_stations(stations: Vec<Vec<GeoPoint>>) -> Self {
        StationTable { stations }
    }

    pub fn taxis(&self) -> usize {
        self.stations.len()
    }

    pub fn regions(&self) -> usize {
        self.stations.first().map_or(0, Vec::len)
    }

    /// All stations of one taxi, indexed by `region - 1`.
    pub fn taxi(&self, taxi: usize) -> &[GeoPoint] {
        &self.stations[taxi]
    }

    /// Station of `taxi` for a 1-based region.
    pub fn station(&self, taxi: usize, region: usize) -> GeoPoint {
        self.stations[taxi][region - 1]
    }
}

/// Draw one station per (taxi, region), uniformly inside the region's cell.
/// The same seed always yields the same table.
pub fn generate_stations(grid: &RegionGrid, num_taxis: usize, seed: u64) -> StationTable {
    let mut rng = Rng64::new(seed);
    let n = grid.regions();
    let mut stations = Vec::with_capacity(num_taxis);
    for _ in 0..num_taxis {
        let mut per_region = Vec::with_capacity(n);
        for region in 1..=n {
            let (lat_lo, lat_hi, lon_lo, lon_hi) = grid.cell_bounds(region);
            let lat = rng.uniform(lat_lo, lat_hi);
            let lon = rng.uniform(lon_lo, lon_hi);
            per_region.push(GeoPoint::new(lat, lon));
        }
        stations.push(per_region);
    }
    StationTable::from_stations(stations)
}
