//! Signed Gauss codes of virtual knot diagrams: parsing, validation,
//! crossing indices, colorability, and the odd writhe.
//!
//! A diagram is a cyclic sequence of passages `O<label><sign>` /
//! `U<label><sign>` in which every label occurs exactly once as an
//! over-passage and exactly once as an under-passage, with one sign per
//! crossing.  Virtual crossings are not recorded: a Gauss code determines
//! the diagram up to detour moves.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaussError {
    #[error("malformed token at byte {at}: expected O or U, a decimal label, and a sign")]
    MalformedToken { at: usize },
    #[error("label {label} has more than one {kind} passage")]
    DuplicatePassage { label: u32, kind: PassageKind },
    #[error("label {label} is missing its {kind} passage")]
    MissingPassage { label: u32, kind: PassageKind },
    #[error("label {label} carries different signs on its two passages")]
    SignMismatch { label: u32 },
    #[error("basepoint {basepoint} is outside the passage sequence of length {len}")]
    BasepointOutOfRange { basepoint: usize, len: usize },
}

/// Whether a passage goes over or under the other strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PassageKind {
    #[serde(rename = "O")]
    Over,
    #[serde(rename = "U")]
    Under,
}

impl fmt::Display for PassageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PassageKind::Over => "O",
            PassageKind::Under => "U",
        })
    }
}

/// One visit of the knot strand to a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub label: u32,
    pub kind: PassageKind,
}

/// A crossing: its label and its sign (`+1` or `−1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub label: u32,
    pub sign: i8,
}

/// A virtual knot diagram given by its signed Gauss code.
///
/// `passages` is the cyclic order in which the strand visits the crossings;
/// `basepoint` is a position in that cyclic sequence (the cut point for
/// long-knot semantics, `0` = before the first passage).  The empty sequence
/// is the unknot diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    passages: Vec<Passage>,
    basepoint: usize,
}

impl Diagram {
    /// The zero-crossing unknot diagram.
    pub fn unknot() -> Self {
        Diagram {
            crossings: Vec::new(),
            passages: Vec::new(),
            basepoint: 0,
        }
    }

    /// Builds and validates a diagram from a passage sequence and per-label
    /// signs: every label must occur exactly once as `Over` and once as
    /// `Under`, and must have a sign.
    pub fn from_parts(passages: Vec<Passage>, signs: &BTreeMap<u32, i8>) -> Result<Self, GaussError> {
        let mut seen: BTreeMap<u32, (bool, bool)> = BTreeMap::new();
        for p in &passages {
            let slot = seen.entry(p.label).or_insert((false, false));
            let flag = match p.kind {
                PassageKind::Over => &mut slot.0,
                PassageKind::Under => &mut slot.1,
            };
            if *flag {
                return Err(GaussError::DuplicatePassage {
                    label: p.label,
                    kind: p.kind,
                });
            }
            *flag = true;
        }
        for (&label, &(over, under)) in &seen {
            if !over {
                return Err(GaussError::MissingPassage {
                    label,
                    kind: PassageKind::Over,
                });
            }
            if !under {
                return Err(GaussError::MissingPassage {
                    label,
                    kind: PassageKind::Under,
                });
            }
        }
        let mut crossings = Vec::with_capacity(seen.len());
        for &label in seen.keys() {
            let &sign = signs.get(&label).ok_or(GaussError::SignMismatch { label })?;
            debug_assert!(sign == 1 || sign == -1);
            crossings.push(Crossing { label, sign });
        }
        Ok(Diagram {
            crossings,
            passages,
            basepoint: 0,
        })
    }

    /// Moves the basepoint; `pos` indexes the gaps of the cyclic sequence,
    /// so `0..len` are valid (and `0` for the unknot).
    pub fn with_basepoint(mut self, pos: usize) -> Result<Self, GaussError> {
        let len = self.passages.len().max(1);
        if pos >= len {
            return Err(GaussError::BasepointOutOfRange {
                basepoint: pos,
                len: self.passages.len(),
            });
        }
        self.basepoint = pos;
        Ok(self)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Crossings in ascending label order.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// The sign of the crossing with this label.
    pub fn sign(&self, label: u32) -> Option<i8> {
        self.crossings
            .binary_search_by_key(&label, |c| c.label)
            .ok()
            .map(|i| self.crossings[i].sign)
    }

    /// The Gauss-code text of the diagram (parses back to an equal diagram
    /// when the basepoint is 0).
    pub fn to_code(&self) -> String {
        let mut out = String::new();
        for p in &self.passages {
            let sign = self.sign(p.label).expect("validated diagram");
            out.push_str(&format!("{}{}{}", p.kind, p.label, if sign > 0 { '+' } else { '-' }));
        }
        out
    }

    /// Deletes the given crossings from the Gauss code (virtualizes them).
    /// If anything was deleted, survivors are relabeled to consecutive
    /// integers from 1 in order of first appearance, and the basepoint is
    /// moved to the same gap of the surviving sequence.  If nothing was
    /// deleted, the diagram is returned unchanged.
    pub fn without_crossings(&self, labels: &std::collections::BTreeSet<u32>) -> Diagram {
        if !labels.iter().any(|l| self.sign(*l).is_some()) {
            return self.clone();
        }
        let mut relabel: BTreeMap<u32, u32> = BTreeMap::new();
        let mut passages = Vec::new();
        let mut basepoint = 0usize;
        for (pos, p) in self.passages.iter().enumerate() {
            if pos < self.basepoint && !labels.contains(&p.label) {
                basepoint += 1;
            }
            if labels.contains(&p.label) {
                continue;
            }
            let next = relabel.len() as u32 + 1;
            let new_label = *relabel.entry(p.label).or_insert(next);
            passages.push(Passage {
                label: new_label,
                kind: p.kind,
            });
        }
        let mut signs = BTreeMap::new();
        for (&old, &new) in &relabel {
            signs.insert(new, self.sign(old).expect("validated diagram"));
        }
        let mut d = Diagram::from_parts(passages, &signs).expect("deletion preserves validity");
        d.basepoint = basepoint;
        d
    }
}

/// Parses the tabulation format `O1+U2+O3−…`: token = `O`|`U`, decimal
/// label, sign (`+`/`-`, Unicode minus accepted).  Whitespace-insensitive.
pub fn parse_gauss(text: &str) -> Result<Diagram, GaussError> {
    let compact: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut passages = Vec::new();
    let mut signs: BTreeMap<u32, i8> = BTreeMap::new();
    let mut i = 0usize;
    while i < compact.len() {
        let (at, c) = compact[i];
        let kind = match c {
            'O' => PassageKind::Over,
            'U' => PassageKind::Under,
            _ => return Err(GaussError::MalformedToken { at }),
        };
        i += 1;
        let start = i;
        while i < compact.len() && compact[i].1.is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(GaussError::MalformedToken { at });
        }
        let digits: String = compact[start..i].iter().map(|&(_, c)| c).collect();
        let label: u32 = digits
            .parse()
            .map_err(|_| GaussError::MalformedToken { at })?;
        let sign = match compact.get(i).map(|&(_, c)| c) {
            Some('+') => 1i8,
            Some('-') | Some('\u{2212}') => -1i8,
            _ => return Err(GaussError::MalformedToken { at }),
        };
        i += 1;
        match signs.entry(label) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(sign);
            }
            std::collections::btree_map::Entry::Occupied(e) => {
                if *e.get() != sign {
                    return Err(GaussError::SignMismatch { label });
                }
            }
        }
        passages.push(Passage { label, kind });
    }
    Diagram::from_parts(passages, &signs)
}

/// The crossing index table: `label → ind(c)`.  A diagram is classical
/// (planar-realizable) only if all values are 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingIndexTable {
    pub indices: BTreeMap<u32, i64>,
}

impl CrossingIndexTable {
    pub fn get(&self, label: u32) -> Option<i64> {
        self.indices.get(&label).copied()
    }

    pub fn all_zero(&self) -> bool {
        self.indices.values().all(|&v| v == 0)
    }

    pub fn all_even(&self) -> bool {
        self.indices.values().all(|&v| v % 2 == 0)
    }
}

/// Computes `ind(c)` for every crossing: smooth the diagram at `c`
/// respecting orientation, let `D′` be the component containing the
/// outgoing over-arc, and count signed crossings between the components —
/// over-passage in `D′` counts `+sign`, over-passage in `D″` counts
/// `−sign`; crossings with both passages in one component contribute 0.
///
/// In Gauss-code terms, `D′` is the open arc from the over-passage of `c`
/// to its under-passage, and only crossings interleaved with `c` contribute.
pub fn crossing_indices(d: &Diagram) -> CrossingIndexTable {
    let len = d.passages().len();
    let mut over_pos: BTreeMap<u32, usize> = BTreeMap::new();
    let mut under_pos: BTreeMap<u32, usize> = BTreeMap::new();
    for (pos, p) in d.passages().iter().enumerate() {
        match p.kind {
            PassageKind::Over => over_pos.insert(p.label, pos),
            PassageKind::Under => under_pos.insert(p.label, pos),
        };
    }
    let mut indices = BTreeMap::new();
    for c in d.crossings() {
        let a = over_pos[&c.label];
        let b = under_pos[&c.label];
        let width = (b + len - a) % len;
        // Strictly inside the arc from the over- to the under-passage.
        let in_outgoing = |p: usize| -> bool {
            let off = (p + len - a) % len;
            0 < off && off < width
        };
        let mut ind = 0i64;
        for e in d.crossings() {
            if e.label == c.label {
                continue;
            }
            let o = in_outgoing(over_pos[&e.label]);
            let u = in_outgoing(under_pos[&e.label]);
            if o && !u {
                ind += i64::from(e.sign);
            } else if u && !o {
                ind -= i64::from(e.sign);
            }
        }
        indices.insert(c.label, ind);
    }
    CrossingIndexTable { indices }
}

/// Diagram-level colorability classes, ordered by strength: almost classical
/// (all indices zero) implies checkerboard colorable (all indices even).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Colorability {
    Neither,
    CheckerboardColorable,
    AlmostClassical,
}

/// Classifies the diagram by its crossing indices and reports the strongest
/// property that holds.
pub fn colorability(d: &Diagram) -> Colorability {
    let table = crossing_indices(d);
    if table.all_zero() {
        Colorability::AlmostClassical
    } else if table.all_even() {
        Colorability::CheckerboardColorable
    } else {
        Colorability::Neither
    }
}

/// Sum of the signs of the crossings of odd index.  Vanishes on every
/// checkerboard-colorable diagram.
pub fn odd_writhe(d: &Diagram) -> i64 {
    let table = crossing_indices(d);
    d.crossings()
        .iter()
        .filter(|c| table.get(c.label).unwrap_or(0) % 2 != 0)
        .map(|c| i64::from(c.sign))
        .sum()
}
