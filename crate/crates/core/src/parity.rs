//! Parity projections of virtual knot diagrams.
//!
//! A parity declares each crossing even or odd by its index; projection
//! virtualizes (deletes from the Gauss code) every odd crossing.  Iterating
//! reaches a fixed point whose crossings are all even — for the mod-2
//! parity, a checkerboard-colorable diagram.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::gauss::{crossing_indices, Diagram};

/// Which parity to use: `ModN(n)` declares a crossing odd when its index is
/// nonzero mod `n`; `Total` declares it odd when its index is nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityKind {
    ModN(u32),
    Total,
}

impl ParityKind {
    fn is_odd(self, index: i64) -> bool {
        match self {
            ParityKind::ModN(n) => {
                assert!(n >= 2, "ModN parity requires n >= 2, got {n}");
                index.rem_euclid(i64::from(n)) != 0
            }
            ParityKind::Total => index != 0,
        }
    }
}

/// Deletes every odd crossing of `d` in one pass.  Diagrams whose crossings
/// are all even come back unchanged; otherwise survivors are relabeled to
/// consecutive integers.
///
/// # Panics
///
/// Panics if `parity` is `ModN(n)` with `n < 2`.
pub fn project(d: &Diagram, parity: ParityKind) -> Diagram {
    let table = crossing_indices(d);
    let odd: BTreeSet<u32> = d
        .crossings()
        .iter()
        .filter(|c| parity.is_odd(table.get(c.label).unwrap_or(0)))
        .map(|c| c.label)
        .collect();
    d.without_crossings(&odd)
}

/// Iterates `project` to its fixed point.  Returns the fixed diagram and
/// the number of productive passes (passes that deleted something); a
/// diagram that is already fixed reports 0 iterations.  Indices are
/// recomputed each round, so crossings that were even can become odd after
/// a deletion.  Terminates because each productive pass strictly decreases
/// the crossing count.
pub fn stable_project(d: &Diagram, parity: ParityKind) -> (Diagram, usize) {
    let mut current = d.clone();
    let mut iterations = 0usize;
    loop {
        let next = project(&current, parity);
        if next.crossing_count() == current.crossing_count() {
            return (current, iterations);
        }
        current = next;
        iterations += 1;
    }
}
