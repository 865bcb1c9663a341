//! Bandwidth accounting: one entry per repair/reconstruction event, counting
//! field symbols actually shipped. A repair moves d·β symbols per stripe,
//! a reconstruction k·α.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Repair,
    Reconstruct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub operation: Operation,
    /// Nodes that shipped data (helpers for repair, sources for reconstruct).
    pub nodes: Vec<u32>,
    pub symbols: u128,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BandwidthLedger {
    pub entries: Vec<LedgerEntry>,
}

impl BandwidthLedger {
    pub fn record(&mut self, operation: Operation, nodes: Vec<u32>, symbols: u128) {
        self.entries.push(LedgerEntry { operation, nodes, symbols });
    }

    pub fn total_symbols(&self) -> u128 {
        self.entries.iter().map(|e| e.symbols).sum()
    }

    pub fn total_for(&self, operation: Operation) -> u128 {
        self.entries
            .iter()
            .filter(|e| e.operation == operation)
            .map(|e| e.symbols)
            .sum()
    }

    pub fn count_for(&self, operation: Operation) -> usize {
        self.entries.iter().filter(|e| e.operation == operation).count()
    }
}
