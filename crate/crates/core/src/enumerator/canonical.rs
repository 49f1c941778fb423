//! Exact canonical labeling for small graphs.
//!
//! Vertices are placed at positions `0..n` in order of non-increasing
//! degree; among all placements consistent with that degree sequence, the
//! one with the lexicographically smallest upper-triangle bit string (graph6
//! column order) wins. Backtracking compares each new column against the
//! best prefix found so far.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::EnumError;
use crate::format::write_graph6;
use crate::graph::Graph;

pub const MAX_CANONICAL_N: usize = 10;

/// graph6 encoding of the canonical relabeling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

struct Search<'a> {
    rows: &'a [u16],
    /// degree required at each position
    slots: Vec<u32>,
    degree: Vec<u32>,
    total_bits: u32,
    best: Option<(u64, Vec<usize>)>,
    placed: Vec<usize>,
    used: u16,
}

impl Search<'_> {
    fn run(&mut self, code: u64, bits: u32) {
        let p = self.placed.len();
        if p == self.slots.len() {
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, self.placed.clone()));
            }
            return;
        }
        for v in 0..self.rows.len() {
            if self.used >> v & 1 == 1 || self.degree[v] != self.slots[p] {
                continue;
            }
            let mut next = code;
            for &u in &self.placed {
                next = (next << 1) | (self.rows[u] >> v & 1) as u64;
            }
            let next_bits = bits + p as u32;
            if let Some((best, _)) = &self.best {
                if next > best >> (self.total_bits - next_bits) {
                    continue;
                }
            }
            self.used |= 1 << v;
            self.placed.push(v);
            self.run(next, next_bits);
            self.placed.pop();
            self.used &= !(1 << v);
        }
    }
}

/// Canonical form of `g`, identical exactly for isomorphic graphs.
///
/// Fails above [`MAX_CANONICAL_N`] vertices.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, EnumError> {
    let n = g.n();
    if n > MAX_CANONICAL_N {
        return Err(EnumError::TooLargeForCanonicalization { n, limit: MAX_CANONICAL_N });
    }
    let rows: Vec<u16> = (0..n).map(|v| g.neighbors(v).fold(0u16, |acc, u| acc | 1 << u)).collect();
    let degree: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut slots = degree.clone();
    slots.sort_unstable_by(|a, b| b.cmp(a));
    let mut search = Search {
        rows: &rows,
        slots,
        degree,
        total_bits: (n * n.saturating_sub(1) / 2) as u32,
        best: None,
        placed: Vec::with_capacity(n),
        used: 0,
    };
    search.run(0, 0);
    let order = search.best.map(|(_, order)| order).unwrap_or_default();
    let relabeled = Graph::new(
        n,
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| g.has_edge(order[i], order[j])),
    )
    .expect("relabeling preserves validity");
    Ok(CanonicalForm(write_graph6(&relabeled)))
}
