//! Parameter sweeps over the `sympwave` core, log-log slope fits and
//! CSV/SVG output. The `sympwave` binary is a thin clap front end.

pub mod config;
pub mod emit;
mod error;
pub mod fit;
pub mod sweep;
pub mod table;

pub use config::Spec;
pub use emit::{emit, format_g17, parse_csv, to_csv, to_svg, Format};
pub use error::{HarnessError, Result};
pub use fit::{fit_points, fit_slope, FitResult};
pub use sweep::{run_sweep, run_sweep_with, worker_count};
pub use table::{SweepRecord, Table, Value};
