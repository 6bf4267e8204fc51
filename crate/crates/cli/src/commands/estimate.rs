use std::path::Path;

use taxi_rhc_core::demand::{build_demand_model, ModelParams};
use taxi_rhc_core::trace::{
    aggregate_counts, count_transitions_filtered, detect_events, parse_trace, TaxiTrace,
    TransitionCounts,
};

use crate::config::RunConfig;
use crate::formats;
use crate::CliError;

/// Learn a demand model from a directory of per-taxi trace files (filename =
/// taxi id) and write the versioned model plus count CSVs to the output
/// directory.
pub fn cmd_estimate(traces_dir: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let grid = cfg.grid()?;

    let mut entries: Vec<_> = std::fs::read_dir(traces_dir)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", traces_dir.display())))?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|path| path.is_file())
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(CliError::Data(format!(
            "no trace files in {}",
            traces_dir.display()
        )));
    }

    let mut traces = Vec::with_capacity(entries.len());
    for path in &entries {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        let records = parse_trace(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        traces.push(TaxiTrace { id, records });
    }
    traces.sort_by(|a, b| a.id.cmp(&b.id));

    let params = ModelParams {
        t1_minutes: cfg.t1_minutes,
        t2_minutes: cfg.t2_minutes,
        bootstrap_samples: cfg.bootstrap_samples,
        seed: cfg.seed,
        interval_multiplier: cfg.interval_multiplier,
        day_filter: cfg.day_filter,
        day_offset: cfg.day_offset,
    };
    let model = build_demand_model(&traces, &grid, &params)
        .map_err(|e| CliError::Data(format!("estimation failed: {e}")))?;

    std::fs::create_dir_all(&cfg.out_dir)?;
    formats::write_model(&cfg.out_dir.join("model.json"), &model)?;

    // reference count CSVs alongside the model
    let mut events = Vec::new();
    for taxi in &traces {
        events.extend(detect_events(&taxi.records, &grid));
    }
    let counts = aggregate_counts(&events, cfg.t1_minutes, grid.regions(), cfg.day_offset)
        .map_err(|e| CliError::Data(e.to_string()))?
        .filter_days(|day| cfg.day_filter.keeps(day));
    formats::write_pickup_counts(&cfg.out_dir.join("counts.csv"), &counts)?;
    let mut transition_totals = TransitionCounts {
        slot_minutes: cfg.t2_minutes,
        mats: vec![
            taxi_rhc_core::Mat::zeros(grid.regions(), grid.regions());
            (1440 / cfg.t2_minutes) as usize
        ],
    };
    for taxi in &traces {
        let per_taxi = count_transitions_filtered(
            &taxi.records,
            &grid,
            cfg.t2_minutes,
            cfg.day_offset,
            |day| cfg.day_filter.keeps(day),
        )
        .map_err(|e| CliError::Data(e.to_string()))?;
        for (total, mat) in transition_totals.mats.iter_mut().zip(per_taxi.mats.iter()) {
            for i in 0..mat.rows() {
                for j in 0..mat.cols() {
                    total[(i, j)] += mat[(i, j)];
                }
            }
        }
    }
    formats::write_transition_counts(&cfg.out_dir.join("transitions.csv"), &transition_totals)?;

    println!(
        "estimated model from {} taxis over {} days (t1={}m, t2={}m, B={}, seed={})",
        traces.len(),
        counts.days.len(),
        cfg.t1_minutes,
        cfg.t2_minutes,
        cfg.bootstrap_samples,
        cfg.seed
    );
    println!("slot  requests  dropoffs  interval_width");
    for slot in 1..=model.slots1() {
        let requests: f64 = model.means[slot - 1].iter().sum();
        let dropoffs: f64 = model.dropoffs[slot - 1].iter().sum();
        let width: f64 = model.upper[slot - 1]
            .iter()
            .zip(model.lower[slot - 1].iter())
            .map(|(u, l)| u - l)
            .sum();
        println!("{slot:>4}  {requests:>8.2}  {dropoffs:>8.2}  {width:>14.2}");
    }
    println!("wrote {}", cfg.out_dir.join("model.json").display());
    Ok(())
}
