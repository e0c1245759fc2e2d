use std::io::Write;

use super::run::{ResultRow, SimulationResult};
use crate::error::{Error, Result};

/// Column order of the CSV grid.
pub const CSV_COLUMNS: [&str; 12] = [
    "set_id",
    "m",
    "n",
    "method",
    "alpha",
    "metric_name",
    "metric_value",
    "band_low",
    "band_high",
    "pair_count",
    "mc_replicates",
    "seed",
];

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::domain(format!("writing output: {e}"))
}

/// Writes rows as CSV with a header line.
pub fn write_csv<'a, W: Write>(rows: impl IntoIterator<Item = &'a ResultRow>, writer: W) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    csv.write_record(CSV_COLUMNS).map_err(io_error)?;
    for row in rows {
        csv.serialize(row).map_err(io_error)?;
    }
    csv.flush().map_err(io_error)
}

/// Reads rows written by [`write_csv`].
pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::domain(format!("reading CSV: {e}")))
}

/// Pretty-printed JSON summary of one or more set results.
pub fn write_json<W: Write>(results: &[SimulationResult], writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, results).map_err(io_error)
}
