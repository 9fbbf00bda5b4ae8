//! IO companion for the average-energy game solvers: the textual game file
//! format, report rendering for the command-line front end, and the
//! JSON-lines harness used to record solver-versus-oracle comparisons.

pub mod format;
pub mod harness;
pub mod parallel;
pub mod report;
