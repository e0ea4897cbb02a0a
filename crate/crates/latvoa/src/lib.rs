//! Standard-library companion to `latvoa-core`: lattice files, seeded
//! sampling, report formats and the `latvoa` command-line tool.

pub mod cli;
pub mod io;
pub mod jobs;
pub mod report;
pub mod sampling;
