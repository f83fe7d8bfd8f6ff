//! Documented alignment schedules, shipped as data.

use serde::{Deserialize, Serialize};

use super::{PingPongSchedule, Start, Terminal};
use crate::error::{Error, Result};

const ALIGNMENT_DATA: &str = include_str!("../../data/alignment_schedules.json");

/// One documented alignment construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentRecord {
    pub label: String,
    pub kappa: u32,
    pub n: usize,
    pub p: usize,
    pub start: Start,
    pub branch_wells: Vec<u32>,
    pub bracket: (f64, f64),
    /// Reference energy, five decimals.
    pub expected: f64,
}

impl AlignmentRecord {
    pub fn schedule(&self) -> PingPongSchedule {
        PingPongSchedule {
            start: self.start,
            terminal: Terminal::AlignTo(self.p),
            branch_wells: self.branch_wells.clone(),
            center_well: None,
        }
    }
}

/// All shipped alignment schedules.
pub fn alignment_schedules() -> Result<Vec<AlignmentRecord>> {
    serde_json::from_str(ALIGNMENT_DATA)
        .map_err(|e| Error::InvalidInput(format!("alignment schedule data: {e}")))
}
