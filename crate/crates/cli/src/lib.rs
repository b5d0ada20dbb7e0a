//! Front end for the `dilate` binary: file formats, scenario generators and
//! the JSON/CSV report envelope.

pub mod commands;
pub mod input;
pub mod report;
pub mod scenario;

pub use commands::{execute, Cli};
pub use report::{Envelope, ExitStatus};
