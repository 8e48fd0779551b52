//! Library side of the `nkh` binary, so the commands can be driven from tests.

pub mod commands;
pub mod grid;
pub mod report;

pub use commands::RunOptions;
pub use report::ReportDocument;
