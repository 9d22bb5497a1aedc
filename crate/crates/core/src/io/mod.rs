//! Text syntax, definition files, reports and the verification suites.

pub mod error;
pub mod expr;
pub mod report;
pub mod sample;
pub mod schema;
pub mod suites;
pub mod text;

pub use error::{IoError, IoResult};
pub use report::{CheckRecord, Report, Status, Witness};
pub use sample::{Bounds, Sampler};
pub use schema::{atlas_from_str, chart_from_str, load_atlas, load_chart};
pub use suites::{run_single, run_suite, SuiteConfig, SUITES};
pub use text::*;
