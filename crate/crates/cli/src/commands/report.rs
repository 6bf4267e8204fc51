use std::path::PathBuf;

use crate::formats::{read_metrics_summary, total_cost};
use crate::CliError;

/// Objective weight assumed for metrics files that carry none (the
/// no-dispatch baseline column of the cost table).
pub const DEFAULT_REPORT_BETA: f64 = 10.0;

/// Aggregate metrics files into the cost table: per file the mean
/// supply-demand error, total idle distance, and the combined cost
/// `error + beta * idle`.
pub fn cmd_report(files: &[PathBuf]) -> Result<(), CliError> {
    if files.is_empty() {
        return Err(CliError::Usage("report needs at least one metrics file".to_string()));
    }
    let mut rows = Vec::with_capacity(files.len());
    for path in files {
        let summary = read_metrics_summary(path)?;
        let beta = summary.meta.beta.unwrap_or(DEFAULT_REPORT_BETA);
        let cost = total_cost(summary.mean_mismatch_error, summary.total_idle_miles, beta);
        rows.push((path, summary, beta, cost));
    }
    println!(
        "{:<40} {:>8} {:>6} {:>6} {:>12} {:>12} {:>12}",
        "file", "arm", "beta", "slots", "s/d error", "idle", "total cost"
    );
    for (path, summary, beta, cost) in &rows {
        println!(
            "{:<40} {:>8} {:>6} {:>6} {:>12.4} {:>12.4} {:>12.4}",
            path.display(),
            summary.meta.arm,
            beta,
            summary.slots,
            summary.mean_mismatch_error,
            summary.total_idle_miles,
            cost
        );
    }
    Ok(())
}
