//! Search campaigns: interval coverage, the triangle step table, residual
//! scans of the witness bound, and the sliding scan.

pub mod checkpoint;
pub mod cover;
pub mod csv_out;
pub mod residual;
pub mod sliding_scan;
pub mod table;

pub use cover::{cover_scan, cover_scan_with, CoverConfig, CoverReport, Gap, RunOptions};
pub use residual::{log_spaced, residual_scan, small_d_bound, ResidualRow};
pub use sliding_scan::{sliding_scan, SlidingScan, SlidingSnapshot};
pub use table::{table_bound, triangle_table, triangle_table_with, StepRow, StepTable, TableCheck};
