//! Evaluated cube-height / cube-width inequalities for one poset.

use serde::Serialize;

use crate::embedding::{cube_width, separation_lower_bound, HeightWidthResult};
use crate::error::Result;
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl LedgerEntry {
    pub fn at_most(name: &str, lhs: f64, rhs: f64) -> LedgerEntry {
        LedgerEntry {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    pub fn at_least(name: &str, lhs: f64, rhs: f64) -> LedgerEntry {
        LedgerEntry {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundLedger {
    pub size: usize,
    pub height: usize,
    pub width: usize,
    pub cube_height: usize,
    pub cube_width: usize,
    pub entries: Vec<LedgerEntry>,
    /// `w* <= |P|`, reported apart from the proven bounds.
    pub conjecture_41: LedgerEntry,
}

impl BoundLedger {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

pub fn width_bound_ledger(p: &Poset) -> Result<BoundLedger> {
    Ok(ledger_from_result(p, &cube_width(p)?))
}

/// Builds the ledger from an already computed height/width result.
pub fn ledger_from_result(p: &Poset, hw: &HeightWidthResult) -> BoundLedger {
    let k = p.size() as f64;
    let h = hw.cube_height as f64;
    let w = hw.cube_width as f64;
    let width = p.width();
    let separation = if hw.cube_width >= 2 {
        separation_lower_bound(hw.cube_width).expect("w* >= 2")
    } else {
        0.0
    };
    let entries = vec![
        LedgerEntry::at_most("h* <= |P| - 1", h, k - 1.0),
        LedgerEntry::at_most("w* <= h* * |P|", w, h * k),
        LedgerEntry::at_most("h* * |P| <= |P|^2", h * k, k * k),
        LedgerEntry::at_most("w* <= h* * w(P)", w, h * width as f64),
        LedgerEntry::at_most("w* <= |P|^2/4 + 2", w, k * k / 4.0 + 2.0),
        LedgerEntry::at_least("|P| >= 2 sqrt(w* - 2)", k, separation),
        LedgerEntry::at_most("height(P) <= h* + 1", p.height() as f64, h + 1.0),
    ];
    BoundLedger {
        size: p.size(),
        height: p.height(),
        width,
        cube_height: hw.cube_height,
        cube_width: hw.cube_width,
        entries,
        conjecture_41: LedgerEntry::at_most("w* <= |P|", w, k),
    }
}
