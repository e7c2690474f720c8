//! File formats, reports, the verification suite and the corpus scanner
//! behind the `deloop` command.

pub mod format;
pub mod report;
pub mod scan;
pub mod suite;
