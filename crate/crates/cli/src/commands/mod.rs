//! The four subcommands: `estimate`, `dispatch`, `simulate`, `report`.

mod dispatch;
mod estimate;
mod report;
mod simulate;

pub use dispatch::cmd_dispatch;
pub use estimate::cmd_estimate;
pub use report::cmd_report;
pub use simulate::{cmd_simulate, SweepKey};
