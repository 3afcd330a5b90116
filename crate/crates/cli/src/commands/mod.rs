pub mod gate;
pub mod resonance;
pub mod simulate;
pub mod sweep;
pub mod verify;

use crate::error::CliError;
use crate::output::Report;

/// A report to write, plus the error that sets the exit status after writing it.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, failure: None }
    }
}
