use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instances::Dimensions;

/// Which phases a master problem covers. Only contiguous ranges make sense:
/// a phase links to its neighbours through the balance rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scope {
    pub phase1: bool,
    pub phase2: bool,
    pub phase3: bool,
}

impl Scope {
    pub const PHASE1: Scope = Scope::new(true, false, false);
    pub const PHASE2: Scope = Scope::new(false, true, false);
    pub const PHASE3: Scope = Scope::new(false, false, true);
    pub const PHASES_12: Scope = Scope::new(true, true, false);
    pub const PHASES_23: Scope = Scope::new(false, true, true);
    pub const ALL: Scope = Scope::new(true, true, true);

    const fn new(phase1: bool, phase2: bool, phase3: bool) -> Scope {
        Scope {
            phase1,
            phase2,
            phase3,
        }
    }

    pub fn contains(&self, phase: u8) -> bool {
        match phase {
            1 => self.phase1,
            2 => self.phase2,
            3 => self.phase3,
            _ => false,
        }
    }

    pub fn is_contiguous(&self) -> bool {
        let any = self.phase1 || self.phase2 || self.phase3;
        any && !(self.phase1 && self.phase3 && !self.phase2)
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phases: Vec<&str> = [(self.phase1, "1"), (self.phase2, "2"), (self.phase3, "3")]
            .iter()
            .filter(|p| p.0)
            .map(|p| p.1)
            .collect();
        write!(f, "phases {}", phases.join("+"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RowId {
    JumboBalance { k: usize, m1: usize, t: usize },
    Capacity1 { t: usize },
    ReelDemand { i2: usize, t: usize },
    Capacity2 { t: usize },
    SheetDemand { i3: usize, tau: usize },
    Capacity3 { tau: usize },
}

impl RowId {
    pub fn phase(&self) -> u8 {
        match self {
            RowId::JumboBalance { .. } | RowId::Capacity1 { .. } => 1,
            RowId::ReelDemand { .. } | RowId::Capacity2 { .. } => 2,
            RowId::SheetDemand { .. } | RowId::Capacity3 { .. } => 3,
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            RowId::Capacity1 { .. } | RowId::Capacity2 { .. } | RowId::Capacity3 { .. }
        )
    }
}

impl fmt::Display for RowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RowId::JumboBalance { k, m1, t } => write!(f, "JumboBalance(k={k}, m1={m1}, t={t})"),
            RowId::Capacity1 { t } => write!(f, "Capacity1(t={t})"),
            RowId::ReelDemand { i2, t } => write!(f, "ReelDemand(i2={i2}, t={t})"),
            RowId::Capacity2 { t } => write!(f, "Capacity2(t={t})"),
            RowId::SheetDemand { i3, tau } => write!(f, "SheetDemand(i3={i3}, tau={tau})"),
            RowId::Capacity3 { tau } => write!(f, "Capacity3(tau={tau})"),
        }
    }
}

/// Flat row order of a master: the six families in declaration order, each
/// ordered by its index tuple, with families outside the scope left out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLayout {
    dims: Dimensions,
    scope: Scope,
    /// Start of each family; absent families have zero width.
    offsets: [usize; 7],
}

impl RowLayout {
    pub fn new(dims: Dimensions, scope: Scope) -> RowLayout {
        let widths = [
            if scope.phase1 { dims.grammages * dims.jumbo_machines * dims.periods } else { 0 },
            if scope.phase1 { dims.periods } else { 0 },
            if scope.phase2 { dims.reel_types * dims.periods } else { 0 },
            if scope.phase2 { dims.periods } else { 0 },
            if scope.phase3 { dims.sheet_types * dims.subperiods } else { 0 },
            if scope.phase3 { dims.subperiods } else { 0 },
        ];
        let mut offsets = [0; 7];
        for f in 0..6 {
            offsets[f + 1] = offsets[f] + widths[f];
        }
        RowLayout {
            dims,
            scope,
            offsets,
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.offsets[6]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat position of a row, or `None` when the row is outside the scope.
    pub fn index(&self, row: RowId) -> Option<usize> {
        let d = &self.dims;
        let (family, local) = match row {
            RowId::JumboBalance { k, m1, t } => (0, (k * d.jumbo_machines + m1) * d.periods + t),
            RowId::Capacity1 { t } => (1, t),
            RowId::ReelDemand { i2, t } => (2, i2 * d.periods + t),
            RowId::Capacity2 { t } => (3, t),
            RowId::SheetDemand { i3, tau } => (4, i3 * d.subperiods + tau),
            RowId::Capacity3 { tau } => (5, tau),
        };
        let start = self.offsets[family];
        (start + local < self.offsets[family + 1]).then_some(start + local)
    }

    pub fn row(&self, index: usize) -> RowId {
        assert!(index < self.len(), "row index out of range");
        let d = &self.dims;
        let family = (0..6).find(|&f| index < self.offsets[f + 1]).expect("in range");
        let local = index - self.offsets[family];
        match family {
            0 => RowId::JumboBalance {
                k: local / (d.jumbo_machines * d.periods),
                m1: local / d.periods % d.jumbo_machines,
                t: local % d.periods,
            },
            1 => RowId::Capacity1 { t: local },
            2 => RowId::ReelDemand {
                i2: local / d.periods,
                t: local % d.periods,
            },
            3 => RowId::Capacity2 { t: local },
            4 => RowId::SheetDemand {
                i3: local / d.subperiods,
                tau: local % d.subperiods,
            },
            _ => RowId::Capacity3 { tau: local },
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = RowId> + '_ {
        (0..self.len()).map(|i| self.row(i))
    }
}
