//! The packaged ERA5 monthly climatology: a local CSV on a 0.25-degree
//! grid, consulted only when Meteostat fails. Being a file, it works
//! precisely when the network does not.

use std::collections::HashMap;
use std::path::Path;

use hiermet_core::model::{ClimatologySource, MonthlyClimatology, MonthlyNormal};

use crate::error::PipelineError;

const GRID_STEP: f64 = 0.25;

/// In-memory grid: cell center -> per-month normals.
pub struct Era5Table {
    cells: HashMap<(i64, i64), Vec<MonthlyNormal>>,
}

fn cell_index(v: f64) -> i64 {
    (v / GRID_STEP).round() as i64
}

/// Loads the CSV (`lat,lon,month,t_min_c,t_max_c,precip_total_mm`).
pub fn load(path: &Path) -> Result<Era5Table, PipelineError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| {
        PipelineError::Other(format!("cannot read ERA5 file {}: {e}", path.display()))
    })?;
    let mut cells: HashMap<(i64, i64), Vec<MonthlyNormal>> = HashMap::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| PipelineError::Other(format!("ERA5 row {i}: {e}")))?;
        let field = |j: usize, name: &str| -> Result<f64, PipelineError> {
            row.get(j)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| PipelineError::Other(format!("ERA5 row {i}: bad {name}")))
        };
        let lat = field(0, "lat")?;
        let lon = field(1, "lon")?;
        let month = field(2, "month")? as u8;
        cells.entry((cell_index(lat), cell_index(lon))).or_default().push(MonthlyNormal {
            month,
            t_min_c: field(3, "t_min_c")?,
            t_max_c: field(4, "t_max_c")?,
            precip_total_mm: field(5, "precip_total_mm")?,
        });
    }
    Ok(Era5Table { cells })
}

/// Great-circle distance (haversine), kilometers.
fn great_circle_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = (lat2 - lat1).to_radians();
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * 6371.0 * a.sqrt().asin()
}

impl Era5Table {
    /// Nearest-neighbor extraction: among the four grid cell centers
    /// surrounding the query point, pick the closest (by great-circle
    /// distance) that has all 12 months.
    pub fn nearest(&self, lat: f64, lon: f64) -> Result<MonthlyClimatology, PipelineError> {
        let lat_lo = (lat / GRID_STEP).floor() * GRID_STEP;
        let lon_lo = (lon / GRID_STEP).floor() * GRID_STEP;
        let mut candidates: Vec<(f64, f64)> = vec![
            (lat_lo, lon_lo),
            (lat_lo, lon_lo + GRID_STEP),
            (lat_lo + GRID_STEP, lon_lo),
            (lat_lo + GRID_STEP, lon_lo + GRID_STEP),
        ];
        candidates.sort_by(|a, b| {
            great_circle_km(lat, lon, a.0, a.1)
                .total_cmp(&great_circle_km(lat, lon, b.0, b.1))
        });

        for (clat, clon) in candidates {
            if let Some(months) = self.cells.get(&(cell_index(clat), cell_index(clon))) {
                if (1..=12u8).all(|m| months.iter().any(|x| x.month == m)) {
                    let mut months = months.clone();
                    months.sort_by_key(|m| m.month);
                    months.dedup_by_key(|m| m.month);
                    return Ok(MonthlyClimatology {
                        months,
                        source: ClimatologySource::Era5Fallback,
                    });
                }
            }
        }
        Err(PipelineError::Other(format!(
            "no complete ERA5 cell around ({lat}, {lon})"
        )))
    }

    /// The cell center `nearest` would select, without requiring data.
    pub fn nearest_cell_center(lat: f64, lon: f64) -> (f64, f64) {
        let lat_lo = (lat / GRID_STEP).floor() * GRID_STEP;
        let lon_lo = (lon / GRID_STEP).floor() * GRID_STEP;
        let mut best = (lat_lo, lon_lo);
        let mut best_d = f64::INFINITY;
        for c in [
            (lat_lo, lon_lo),
            (lat_lo, lon_lo + GRID_STEP),
            (lat_lo + GRID_STEP, lon_lo),
            (lat_lo + GRID_STEP, lon_lo + GRID_STEP),
        ] {
            let d = great_circle_km(lat, lon, c.0, c.1);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_cell_by_great_circle_distance() {
        // hand-checked: (16.0472, 108.22) is 5.2 km from (16.0, 108.25)
        // and further from the other three surrounding centers
        let (lat, lon) = Era5Table::nearest_cell_center(16.0472, 108.22);
        assert_eq!((lat, lon), (16.0, 108.25));
    }

    #[test]
    fn haversine_sanity() {
        // one degree of latitude is about 111 km
        let d = great_circle_km(0.0, 0.0, 1.0, 0.0);
        assert!((d - 111.2).abs() < 1.0, "got {d}");
    }
}
