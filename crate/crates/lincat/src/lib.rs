//! JSON workspaces, bundled fixtures, reports and command dispatch for the
//! `lincat` binary.

pub mod doc;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod run;
pub mod workspace;

pub use error::LincatError;
pub use report::{Outcome, Report, Status};
pub use run::{execute, run, Command};
pub use workspace::{parse_workspace, Workspace};
