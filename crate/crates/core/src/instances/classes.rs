use serde::{Deserialize, Serialize};

use super::InstanceError;

pub const CLASS_COUNT: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StockCostLevel {
    Normal,
    High,
}

/// One row of the experiment class table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassConfig {
    /// Number of reel types, which equals the number of sheet types.
    pub n_items: usize,
    pub stock_cost: StockCostLevel,
    pub trimming: bool,
    pub jumbo_machines: usize,
    pub rewinders: usize,
    pub cutters: usize,
    pub work_shifts: u32,
}

use StockCostLevel::{High, Normal};

#[rustfmt::skip]
const CLASSES: [(usize, StockCostLevel, bool, usize, usize, usize, u32); 24] = [
    (5, Normal, true,  3, 3, 2, 1),
    (5, Normal, false, 3, 3, 2, 1),
    (5, Normal, true,  3, 3, 2, 2),
    (5, Normal, false, 3, 3, 2, 2),
    (5, Normal, true,  3, 3, 2, 3),
    (5, Normal, false, 3, 3, 2, 3),
    (5, High,   true,  3, 3, 2, 1),
    (5, High,   false, 3, 3, 2, 1),
    (5, High,   true,  3, 3, 2, 2),
    (5, High,   false, 3, 3, 2, 2),
    (5, High,   true,  3, 3, 2, 3),
    (5, High,   false, 3, 3, 2, 3),
    (9, Normal, true,  6, 6, 4, 1),
    (9, Normal, false, 6, 6, 4, 1),
    (9, Normal, true,  6, 6, 4, 2),
    (9, Normal, false, 6, 6, 4, 2),
    (9, Normal, true,  6, 6, 4, 3),
    (9, Normal, false, 6, 6, 4, 3),
    (9, High,   true,  6, 6, 4, 1),
    (9, High,   false, 6, 6, 4, 1),
    (9, High,   true,  6, 6, 4, 2),
    (9, High,   false, 6, 6, 4, 2),
    (9, High,   true,  6, 6, 4, 3),
    (9, High,   false, 6, 6, 4, 3),
];

pub fn class_config(class_id: u32) -> Result<ClassConfig, InstanceError> {
    if class_id == 0 || class_id > CLASS_COUNT {
        return Err(InstanceError::ClassOutOfRange(class_id));
    }
    let (n_items, stock_cost, trimming, jumbo_machines, rewinders, cutters, work_shifts) =
        CLASSES[class_id as usize - 1];
    Ok(ClassConfig {
        n_items,
        stock_cost,
        trimming,
        jumbo_machines,
        rewinders,
        cutters,
        work_shifts,
    })
}
