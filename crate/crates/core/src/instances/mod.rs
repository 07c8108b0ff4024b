//! Instance data model for one planning horizon.
//!
//! Canonical units: lengths and widths in cm, areas in cm², weights in kg,
//! times in minutes, money in currency units. Setup costs and times are
//! already folded into the production/cutting parameters.

mod classes;
mod generate;
mod io;
mod validate;

use serde::{Deserialize, Serialize};

pub use classes::{class_config, ClassConfig, StockCostLevel, CLASS_COUNT};
pub use generate::{generate_instance, generate_tiny_instance, REEL_WIDTH_CM};
pub use io::{from_str, load, save, to_string, FORMAT_NAME, FORMAT_VERSION};
pub use validate::{validate, Diagnostic};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("class id {0} is outside 1..=24")]
    ClassOutOfRange(u32),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed instance file: {0}")]
    Parse(String),
    #[error("unsupported instance file version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub grammages: usize,
    pub periods: usize,
    /// Sub-periods of the first period, where sheet cutting is planned.
    pub subperiods: usize,
    pub jumbo_machines: usize,
    pub rewinders: usize,
    pub cutters: usize,
    pub reel_types: usize,
    pub sheet_types: usize,
}

/// Jumbo lot-sizing data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase1Params {
    /// `[k][m1][t]`, per kg.
    pub production_cost: Vec<Vec<Vec<f64>>>,
    /// `[k][t]`, per kg and period.
    pub stock_cost: Vec<Vec<f64>>,
    /// `[m1]`, cm.
    pub jumbo_length: Vec<f64>,
    /// `[k][m1]`, kg.
    pub jumbo_weight: Vec<Vec<f64>>,
    /// `[k][m1][t]`, units.
    pub demand: Vec<Vec<Vec<f64>>>,
    /// `[k][m1]`, minutes per jumbo.
    pub production_time: Vec<Vec<f64>>,
    /// `[t]`, minutes.
    pub capacity: Vec<f64>,
}

/// Jumbo-to-reel cutting data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase2Params {
    /// `[k][t]`, per cm of jumbo length left as trim.
    pub waste_cost: Vec<Vec<f64>>,
    /// `[i2][t]`, per kg.
    pub stock_cost: Vec<Vec<f64>>,
    pub reel_length: Vec<f64>,
    pub reel_width: Vec<f64>,
    pub reel_weight: Vec<f64>,
    /// `[i2][t]`, portfolio demand in units.
    pub demand: Vec<Vec<f64>>,
    /// `[k][m1][m2]`, minutes per jumbo cut, independent of the pattern.
    pub cutting_time: Vec<Vec<Vec<f64>>>,
    /// `[t]`, minutes.
    pub capacity: Vec<f64>,
    /// Reel types of each grammage; a partition of `0..reel_types`.
    pub reels_by_grammage: Vec<Vec<usize>>,
}

/// Reel-to-sheet cutting data, planned over the sub-periods of period 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase3Params {
    /// `[k][tau]`, per cm² of trim.
    pub waste_cost: Vec<Vec<f64>>,
    /// `[i3][tau]`, per kg.
    pub stock_cost: Vec<Vec<f64>>,
    pub sheet_length: Vec<f64>,
    pub sheet_width: Vec<f64>,
    pub sheet_weight: Vec<f64>,
    /// `[i3][tau]`, units.
    pub demand: Vec<Vec<f64>>,
    /// `[i2][m3]`, minutes per reel cut.
    pub cutting_time: Vec<Vec<f64>>,
    /// `[tau]`, minutes.
    pub capacity: Vec<f64>,
    pub sheets_by_grammage: Vec<Vec<usize>>,
    /// Whether a strip may hold sheets shorter than its reference length.
    pub trimming_allowed: bool,
}

/// Physical constants the generator drew the weights from. Kept for
/// reproducibility only; the solver never reads them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// g/m², per grammage index.
    pub grammage: Vec<f64>,
    pub diameter_cm: f64,
    pub thickness_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub dims: Dimensions,
    pub phase1: Phase1Params,
    pub phase2: Phase2Params,
    pub phase3: Phase3Params,
    pub seed: u64,
    pub class_id: Option<u32>,
    pub material: Option<Material>,
}

impl Instance {
    pub fn grammage_of_reel(&self, reel: usize) -> usize {
        self.phase2
            .reels_by_grammage
            .iter()
            .position(|set| set.contains(&reel))
            .expect("reel belongs to a grammage")
    }

    pub fn grammage_of_sheet(&self, sheet: usize) -> usize {
        self.phase3
            .sheets_by_grammage
            .iter()
            .position(|set| set.contains(&sheet))
            .expect("sheet belongs to a grammage")
    }

    /// Copy with every demand set to zero.
    pub fn without_demand(&self) -> Instance {
        let mut out = self.clone();
        for v in out.phase1.demand.iter_mut().flatten().flatten() {
            *v = 0.0;
        }
        for v in out.phase2.demand.iter_mut().flatten() {
            *v = 0.0;
        }
        for v in out.phase3.demand.iter_mut().flatten() {
            *v = 0.0;
        }
        out
    }
}
