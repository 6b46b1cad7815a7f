//! Desk-scale experiments: propagation accuracy of the deterministic
//! samplers, WN multiplication accuracy, and Monte Carlo filtering
//! comparisons against the baselines, with CSV output.

mod filtering;
mod metrics;
mod multiplication;
mod propagation;

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

pub use filtering::{
    run_filtering_experiment, run_rng, simulate, summarize, FilterKind, FilterSummary, ProgressionStats,
    RunRecord, RunResult, ScenarioConfig, SystemKind, Trajectory, PROGRESSION_AUDIT_TOL,
};
pub use metrics::{
    angular_distance, angular_rmse, median, numeric_kld, numeric_kld_ln, numeric_l2, numeric_l2_n,
    numeric_moment, periodic_integral, periodic_integral_c, QUADRATURE_POINTS,
};
pub use multiplication::{
    multiplication_cell, run_multiplication_experiment, true_product_ln_pdf, MultiplicationRow, ProductMethod,
};
pub use propagation::{
    linspace, nonlinearity, propagation_cell, pushforward_kld, pushforward_moment,
    run_propagation_experiment, PropagationRow, PropagationSampler,
};

/// Write `rows` as CSV with one header row derived from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: impl IntoIterator<Item = T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Numerical(format!("CSV: {e}")))?;
    }
    w.flush().map_err(|e| Error::Numerical(format!("CSV: {e}")))?;
    Ok(())
}
