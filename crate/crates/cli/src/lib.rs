//! Problem files, reports and the verification driver behind the `toric-wall` binary.

pub mod catalog;
pub mod driver;
pub mod kernel;
pub mod problem;
pub mod report;

pub use driver::{run, Command, Outcome, Status};
pub use problem::{parse, ProblemFile};
pub use report::{Format, Report};
