//! Spanning surfaces and their linking-form matrices.
//!
//! Two constructions produce mock Seifert matrices: explicit band
//! presentations (a disc with twisted, crossing bands) and the two
//! checkerboard surfaces of a colorable diagram.  For checkerboard
//! surfaces the matrix splits as `A = G + S`: a symmetric part from local
//! half-twisted-band contributions at the crossings and a skew part from
//! intersection numbers of the projected basis curves on the carrier
//! surface.  Both constructions also compute the normal Euler number of
//! the surface exactly.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::carrier::{build_carrier, CarrierSurface, FaceColor};
use crate::gauss::Diagram;
use crate::matalg::MockSeifertMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlformError {
    #[error("the alternating-pairs pattern needs an even number of bands, got {0}")]
    OddPairCount(usize),
    #[error("band {band} needs {expected} half-twists for this feet pattern")]
    TwistParity { band: usize, expected: &'static str },
    #[error("mixed feet order must list each of {bands} bands exactly twice")]
    MalformedFeet { bands: usize },
    #[error("crossing references band {band}, but there are only {bands} bands")]
    CrossingOutOfRange { band: usize, bands: usize },
    #[error("crossing sign must be +1 or -1, got {0}")]
    BadCrossingSign(i8),
    #[error("boundary has {0} circles; a knot presentation needs exactly one")]
    BoundaryNotCircle(usize),
    #[error("diagram is not checkerboard colorable")]
    NotColorable,
}

/// How the band feet sit on the disc boundary.
///
/// `AlternatingPairs` interleaves the feet of bands `2k` and `2k + 1`
/// (the orientable pattern: all twist counts must be even);
/// `Unlinked` puts each band's feet side by side (the non-orientable
/// pattern: all twist counts must be odd); `Mixed` gives the cyclic foot
/// order explicitly, each band id appearing exactly twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeetPattern {
    AlternatingPairs,
    Unlinked,
    Mixed(Vec<usize>),
}

/// One band passing over another (or over itself: a clasp), with the sign
/// of the crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandCrossing {
    pub over: usize,
    pub under: usize,
    pub sign: i8,
}

/// A disc with twisted bands whose boundary is a single circle.
///
/// Values are validated on construction and deserialization, so every
/// reachable `BandPresentation` satisfies the twist-parity rules of its
/// feet pattern and has connected boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBandPresentation", into = "RawBandPresentation")]
pub struct BandPresentation {
    feet: FeetPattern,
    twists: Vec<i64>,
    crossings: Vec<BandCrossing>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawBandPresentation {
    n_bands: usize,
    feet: FeetPattern,
    twists: Vec<i64>,
    crossings: Vec<BandCrossing>,
}

impl TryFrom<RawBandPresentation> for BandPresentation {
    type Error = GlformError;

    fn try_from(raw: RawBandPresentation) -> Result<Self, GlformError> {
        if raw.n_bands != raw.twists.len() {
            return Err(GlformError::MalformedFeet { bands: raw.n_bands });
        }
        BandPresentation::new(raw.feet, raw.twists, raw.crossings)
    }
}

impl From<BandPresentation> for RawBandPresentation {
    fn from(b: BandPresentation) -> Self {
        RawBandPresentation {
            n_bands: b.twists.len(),
            feet: b.feet,
            twists: b.twists,
            crossings: b.crossings,
        }
    }
}

impl BandPresentation {
    pub fn new(
        feet: FeetPattern,
        twists: Vec<i64>,
        crossings: Vec<BandCrossing>,
    ) -> Result<Self, GlformError> {
        let n = twists.len();
        match &feet {
            FeetPattern::AlternatingPairs => {
                if !n.is_multiple_of(2) {
                    return Err(GlformError::OddPairCount(n));
                }
                if let Some(band) = (0..n).find(|&i| twists[i] & 1 != 0) {
                    return Err(GlformError::TwistParity { band, expected: "even" });
                }
            }
            FeetPattern::Unlinked => {
                if let Some(band) = (0..n).find(|&i| twists[i] % 2 == 0) {
                    return Err(GlformError::TwistParity { band, expected: "odd" });
                }
            }
            FeetPattern::Mixed(order) => {
                let mut count = vec![0usize; n];
                let ok = order.len() == 2 * n
                    && order.iter().all(|&b| {
                        if b < n {
                            count[b] += 1;
                            true
                        } else {
                            false
                        }
                    })
                    && count.iter().all(|&c| c == 2);
                if !ok {
                    return Err(GlformError::MalformedFeet { bands: n });
                }
            }
        }
        for c in &crossings {
            for band in [c.over, c.under] {
                if band >= n {
                    return Err(GlformError::CrossingOutOfRange { band, bands: n });
                }
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(GlformError::BadCrossingSign(c.sign));
            }
        }
        let b = BandPresentation { feet, twists, crossings };
        let walk = b.boundary_walk();
        if walk.circles != 1 {
            return Err(GlformError::BoundaryNotCircle(walk.circles));
        }
        Ok(b)
    }

    pub fn n_bands(&self) -> usize {
        self.twists.len()
    }

    pub fn feet(&self) -> &FeetPattern {
        &self.feet
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn crossings(&self) -> &[BandCrossing] {
        &self.crossings
    }

    /// The cyclic order of band feet around the disc boundary.
    fn feet_order(&self) -> Vec<usize> {
        let n = self.twists.len();
        match &self.feet {
            // 0 1 0 1 2 3 2 3 …: bands 2k and 2k+1 interleave.
            FeetPattern::AlternatingPairs => (0..n / 2)
                .flat_map(|k| [2 * k, 2 * k + 1, 2 * k, 2 * k + 1])
                .collect(),
            // 0 0 1 1 2 2 …: each band's feet are adjacent.
            FeetPattern::Unlinked => (0..n).flat_map(|b| [b, b]).collect(),
            FeetPattern::Mixed(order) => order.clone(),
        }
    }

    /// Foot slots of each band in the cyclic order (first, second).
    fn foot_slots(&self) -> Vec<(usize, usize)> {
        let order = self.feet_order();
        let mut slots = vec![(usize::MAX, usize::MAX); self.twists.len()];
        for (slot, &b) in order.iter().enumerate() {
            if slots[b].0 == usize::MAX {
                slots[b].0 = slot;
            } else {
                slots[b].1 = slot;
            }
        }
        slots
    }

    /// Walks the boundary of the surface.
    ///
    /// Each foot slot `k` has a left and a right endpoint in the disc's
    /// circular order; every endpoint meets exactly one disc arc and one
    /// band edge, so the boundary is the set of cycles of a 2-regular
    /// graph.  A band with an even twist count joins left endpoints to
    /// right ones; an odd count joins like to like.  For each band the
    /// walk records whether its two edges are traversed in the same
    /// foot-to-foot direction (`parallel`), which is what makes its
    /// twists and clasps contribute to the normal Euler number.
    fn boundary_walk(&self) -> BoundaryWalk {
        let n = self.twists.len();
        let slots = self.foot_slots();
        let m = 2 * n;
        if n == 0 {
            return BoundaryWalk {
                circles: 1,
                parallel: Vec::new(),
                order: Vec::new(),
                forward: Vec::new(),
            };
        }

        // Endpoints 2k (left) and 2k+1 (right) of slot k.  Edge list:
        // disc arcs first (arc k joins right(k) to left(k+1)), then two
        // edges per band.
        let left = |slot: usize| 2 * slot;
        let right = |slot: usize| 2 * slot + 1;
        let mut edges: Vec<(usize, usize)> = (0..m)
            .map(|k| (right(k), left((k + 1) % m)))
            .collect();
        for (b, &(p, q)) in slots.iter().enumerate() {
            if self.twists[b] % 2 == 0 {
                edges.push((left(p), right(q)));
                edges.push((right(p), left(q)));
            } else {
                edges.push((left(p), left(q)));
                edges.push((right(p), right(q)));
            }
        }

        // Incident edges per endpoint (always exactly two).
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 2 * m];
        for (e, &(x, y)) in edges.iter().enumerate() {
            incident[x].push(e);
            incident[y].push(e);
        }
        debug_assert!(incident.iter().all(|v| v.len() == 2));

        let mut seen = vec![false; edges.len()];
        let mut forward = vec![false; edges.len()];
        let mut order = Vec::new();
        let mut circles = 0;
        for start in 0..edges.len() {
            if seen[start] {
                continue;
            }
            circles += 1;
            let mut e = start;
            let mut at = edges[e].0;
            loop {
                seen[e] = true;
                forward[e] = at == edges[e].0;
                if start == 0 {
                    order.push(e);
                }
                at = if at == edges[e].0 { edges[e].1 } else { edges[e].0 };
                let &next = incident[at].iter().find(|&&x| x != e).unwrap();
                e = next;
                if e == start {
                    break;
                }
            }
        }

        // Band b's edges are m + 2b and m + 2b + 1, both listed from the
        // first foot slot to the second; parallel means equal traversal
        // directions.
        let parallel = (0..n)
            .map(|b| forward[m + 2 * b] == forward[m + 2 * b + 1])
            .collect();
        BoundaryWalk { circles, parallel, order, forward }
    }
}

struct BoundaryWalk {
    circles: usize,
    /// Per band: both boundary edges run in the same foot-to-foot
    /// direction.  Only meaningful when `circles == 1`.
    parallel: Vec<bool>,
    /// Edge traversal sequence of the circle through edge 0 (empty for
    /// the bandless disc).
    order: Vec<usize>,
    /// Per edge: traversed from its first listed endpoint.
    forward: Vec<bool>,
}

/// Signed crossing count of two directed chords on a circle of `m`
/// points: +1 when the second chord's start lies inside the
/// counterclockwise interval from the first chord's start to its end and
/// the second chord's end lies outside.
fn chord_crossing(a: (usize, usize), b: (usize, usize), m: usize) -> i64 {
    let off = |x: usize, y: usize| (y + m - x) % m;
    let width = off(a.0, a.1);
    let start_in = off(a.0, b.0) > 0 && off(a.0, b.0) < width;
    let end_in = off(a.0, b.1) > 0 && off(a.0, b.1) < width;
    match (start_in, end_in) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

/// The mock Seifert matrix of a band presentation: diagonal = twist
/// counts, plus 2·sign per band-over-band crossing, plus ±1 per
/// interleaved pair of feet (the disc crossing of the core curves).
/// Euler metadata comes from [`euler_of_band_presentation`].
pub fn matrix_of_band_presentation(b: &BandPresentation) -> MockSeifertMatrix {
    let n = b.n_bands();
    let mut entries = vec![0i64; n * n];
    for (i, &t) in b.twists().iter().enumerate() {
        entries[i * n + i] = t;
    }
    for c in b.crossings() {
        if c.over != c.under {
            entries[c.over * n + c.under] += 2 * i64::from(c.sign);
        }
    }
    let slots = b.foot_slots();
    for i in 0..n {
        for j in i + 1..n {
            let eps = chord_crossing(slots[i], slots[j], 2 * n);
            entries[i * n + j] += eps;
            entries[j * n + i] -= eps;
        }
    }
    MockSeifertMatrix::from_flat(n, entries).with_euler(euler_of_band_presentation(b))
}

/// The normal Euler number of the band surface.
///
/// A band whose two boundary edges run parallel contributes −2 per
/// half-twist and −4·sign per clasp on it; an antiparallel band (and any
/// band-over-band crossing) contributes nothing, which is what makes the
/// Euler number vanish for orientable presentations.
pub fn euler_of_band_presentation(b: &BandPresentation) -> i64 {
    let walk = b.boundary_walk();
    debug_assert_eq!(walk.circles, 1);
    let mut e = 0;
    for (i, &t) in b.twists().iter().enumerate() {
        if walk.parallel[i] {
            e -= 2 * t;
        }
    }
    for c in b.crossings() {
        if c.over == c.under && walk.parallel[c.over] {
            e -= 4 * i64::from(c.sign);
        }
    }
    e
}

/// Signed Gauss code of the boundary knot of a band presentation.
///
/// Each half-twist of a band is one crossing between the band's two
/// boundary strands (a length-`|t|` braid: the strand entering on one
/// side goes over at the odd-numbered turns); each band-over-band
/// crossing or clasp is four strand crossings whose order along a
/// passage depends on the crossing sign.  Feet interleavings produce no
/// listed crossings — they are carried by the supporting surface, so the
/// exported code is the boundary knot up to stabilization.  The empty
/// presentation exports the empty code (an unknot).
pub fn boundary_gauss_code(b: &BandPresentation) -> String {
    use std::collections::HashMap;
    let n = b.n_bands();
    let walk = b.boundary_walk();
    debug_assert_eq!(walk.circles, 1);
    let m = 2 * n;
    // +1 when the boundary strand is traversed in the band's
    // foot-to-foot direction; crossing signs are products of these.
    let eps = |band: usize, side: usize| -> i64 {
        if walk.forward[m + 2 * band + side] {
            1
        } else {
            -1
        }
    };

    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Key {
        Twist { band: usize, h: usize },
        /// Strand `sx` of the over passage of input crossing `c` against
        /// strand `sy` of its under passage.
        Cross { c: usize, sx: usize, sy: usize },
    }
    struct Station {
        key: Key,
        over: bool,
        sign: i64,
    }

    // Station lists per boundary strand (2·band + side), ordered along
    // the band core: the twist region first, then the crossing regions
    // in input order (a clasp's over passage before its under passage).
    let mut strands: Vec<Vec<Station>> = (0..2 * n).map(|_| Vec::new()).collect();
    for band in 0..n {
        let t = b.twists()[band];
        let sigma = t.signum() * eps(band, 0) * eps(band, 1);
        for h in 1..=t.unsigned_abs() as usize {
            for side in 0..2usize {
                strands[2 * band + side].push(Station {
                    key: Key::Twist { band, h },
                    over: ((h & 1) == 1) == (side == 0),
                    sign: sigma,
                });
            }
        }
    }
    for (c_idx, c) in b.crossings().iter().enumerate() {
        let (i, j) = (c.over, c.under);
        // Opposite-passage strands in the order met along the core
        // direction of each passage.
        let under_order = if c.sign > 0 { [1, 0] } else { [0, 1] };
        let over_order = if c.sign > 0 { [0, 1] } else { [1, 0] };
        let sign = |sx: usize, sy: usize| i64::from(c.sign) * eps(i, sx) * eps(j, sy);
        for sx in 0..2usize {
            for &sy in &under_order {
                strands[2 * i + sx].push(Station {
                    key: Key::Cross { c: c_idx, sx, sy },
                    over: true,
                    sign: sign(sx, sy),
                });
            }
        }
        for sy in 0..2usize {
            for &sx in &over_order {
                strands[2 * j + sy].push(Station {
                    key: Key::Cross { c: c_idx, sx, sy },
                    over: false,
                    sign: sign(sx, sy),
                });
            }
        }
    }

    let mut labels: HashMap<Key, usize> = HashMap::new();
    let mut out = String::new();
    for &e in &walk.order {
        if e < m {
            continue;
        }
        let list = &strands[e - m];
        let stations: Vec<&Station> = if walk.forward[e] {
            list.iter().collect()
        } else {
            list.iter().rev().collect()
        };
        for st in stations {
            let next = labels.len() + 1;
            let label = *labels.entry(st.key).or_insert(next);
            out.push(if st.over { 'O' } else { 'U' });
            out.push_str(&label.to_string());
            out.push(if st.sign > 0 { '+' } else { '-' });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Checkerboard surfaces
// ---------------------------------------------------------------------------

/// Local contribution of a crossing's half-twisted band to the symmetric
/// part of the linking form, for the surface whose colored corner pair is
/// `k0 ∈ {0, 1}` (the smaller of the two opposite corner indices in the
/// counterclockwise rotation).
fn goeritz_sign(_sign: i8, k0: usize) -> i64 {
    if k0 == 0 {
        1
    } else {
        -1
    }
}

/// Local contribution of a crossing to the normal Euler number of the
/// checkerboard surface with colored corner pair `k0`.  Only crossings
/// whose two strands run parallel across the band contribute.
fn euler_local(sign: i8, k0: usize) -> i64 {
    match (sign > 0, k0) {
        (true, 0) => -2,
        (false, 1) => 2,
        _ => 0,
    }
}

/// A step of a closed curve on a checkerboard surface: it passes through
/// a crossing's band, entering and leaving at the two opposite corners of
/// the surface's color.
#[derive(Clone, Copy, Debug)]
struct BandStep {
    crossing: usize,
    enter: usize,
    exit: usize,
    coeff: i64,
}

struct TaitEdge {
    crossing: usize,
    /// Smaller corner index of the colored pair at this crossing.
    k0: usize,
    /// Tait vertices (colored faces) at corners `k0` and `k0 + 2`.
    u: usize,
    w: usize,
}

/// For each corner `(vertex, corner index)`: the face containing it and
/// the position in that face's boundary walk that turns through it.
fn corner_positions(s: &CarrierSurface) -> BTreeMap<(usize, usize), (usize, usize)> {
    let mut map = BTreeMap::new();
    for (f, walk) in s.faces().iter().enumerate() {
        for (i, side) in walk.iter().enumerate() {
            let h = 2 * side.arc + usize::from(!side.forward);
            let h_end = h ^ 1;
            let v = if side.forward {
                s.arc_head(side.arc)
            } else {
                s.arc_tail(side.arc)
            };
            let k = s
                .rotation(v)
                .iter()
                .position(|&x| x == h_end)
                .expect("half-edge is in its vertex rotation");
            debug_assert_eq!(s.corner_faces(v)[k], f);
            map.insert((v, k), (f, i));
        }
    }
    map
}

/// Builds the mock Seifert matrix of one checkerboard surface: Tait-graph
/// fundamental cycles give the homology basis; the symmetric part sums
/// band contributions, the skew part is the intersection pairing of the
/// projected curves on the carrier.
fn surface_matrix(
    s: &CarrierSurface,
    coloring: &[FaceColor],
    color: FaceColor,
) -> MockSeifertMatrix {
    surface_matrix_with_tables(s, coloring, color, goeritz_sign, euler_local)
}

/// Same construction with the two local tables passed in; the calibration
/// test sweeps every candidate table through this to check that the frozen
/// ones are the unique pair matching the classical pins.
fn surface_matrix_with_tables(
    s: &CarrierSurface,
    coloring: &[FaceColor],
    color: FaceColor,
    goeritz: impl Fn(i8, usize) -> i64,
    euler_term: impl Fn(i8, usize) -> i64,
) -> MockSeifertMatrix {
    let n = s.vertex_count();
    let mut tait_of_face: BTreeMap<usize, usize> = BTreeMap::new();
    for (f, &c) in coloring.iter().enumerate() {
        if c == color {
            let id = tait_of_face.len();
            tait_of_face.insert(f, id);
        }
    }
    let tn = tait_of_face.len();

    let mut euler = 0i64;
    let edges: Vec<TaitEdge> = (0..n)
        .map(|v| {
            let cf = s.corner_faces(v);
            let k0 = if coloring[cf[0]] == color { 0 } else { 1 };
            debug_assert_eq!(coloring[cf[k0]], color);
            debug_assert_eq!(coloring[cf[k0 + 2]], color);
            euler += euler_term(s.sign_of(v), k0);
            TaitEdge {
                crossing: v,
                k0,
                u: tait_of_face[&cf[k0]],
                w: tait_of_face[&cf[k0 + 2]],
            }
        })
        .collect();

    if n == 0 {
        return MockSeifertMatrix::empty().with_euler(0);
    }

    // Spanning tree of the Tait graph, edges taken in crossing order.
    // The surface has connected boundary, so its Tait graph is connected.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; tn];
    let mut depth = vec![0usize; tn];
    let mut reached = vec![false; tn];
    let mut in_tree = vec![false; n];
    reached[0] = true;
    let mut added = 1;
    while added < tn {
        let before = added;
        for (ei, e) in edges.iter().enumerate() {
            let (from, to) = if reached[e.u] && !reached[e.w] {
                (e.u, e.w)
            } else if reached[e.w] && !reached[e.u] {
                (e.w, e.u)
            } else {
                continue;
            };
            in_tree[ei] = true;
            reached[to] = true;
            parent[to] = Some((from, ei));
            depth[to] = depth[from] + 1;
            added += 1;
        }
        assert!(added > before, "Tait graph of a knot surface is connected");
    }

    // One fundamental cycle per non-tree edge: the chord followed by the
    // tree path back, kept as an ordered closed walk of band steps.
    let mut walks: Vec<Vec<BandStep>> = Vec::new();
    for (ei, e) in edges.iter().enumerate() {
        if in_tree[ei] {
            continue;
        }
        let step = |edge_idx: usize, forward: bool| {
            let ed: &TaitEdge = &edges[edge_idx];
            let (enter, exit) = if forward {
                (ed.k0, ed.k0 + 2)
            } else {
                (ed.k0 + 2, ed.k0)
            };
            BandStep {
                crossing: ed.crossing,
                enter,
                exit,
                coeff: if forward { 1 } else { -1 },
            }
        };
        let mut walk = vec![step(ei, true)];
        // Ascend from w and from u to their meeting point; the w side is
        // traversed as met, the u side reversed at the end.
        let (mut x, mut y) = (e.w, e.u);
        let mut from_u: Vec<BandStep> = Vec::new();
        while depth[x] > depth[y] {
            let (p, te) = parent[x].unwrap();
            walk.push(step(te, edges[te].u == x));
            x = p;
        }
        while depth[y] > depth[x] {
            let (p, te) = parent[y].unwrap();
            from_u.push(step(te, edges[te].w == y));
            y = p;
        }
        while x != y {
            let (px, tx) = parent[x].unwrap();
            walk.push(step(tx, edges[tx].u == x));
            x = px;
            let (py, ty) = parent[y].unwrap();
            from_u.push(step(ty, edges[ty].w == y));
            y = py;
        }
        walk.extend(from_u.into_iter().rev());
        walks.push(walk);
    }
    let rank = walks.len();
    debug_assert_eq!(rank, n + 1 - tn);

    // Edge vectors over crossings (for the symmetric part) and projected
    // arc chains on the carrier (for the skew part).  The projection
    // replaces each through-the-disc segment between consecutive band
    // steps by the face boundary path between the same two corners.
    let corners = corner_positions(s);
    let mut vectors = vec![vec![0i64; n]; rank];
    let mut chains = vec![vec![0i64; s.arc_count()]; rank];
    for (zi, walk) in walks.iter().enumerate() {
        for st in walk {
            vectors[zi][st.crossing] += st.coeff;
        }
        for (i, st) in walk.iter().enumerate() {
            let nx = &walk[(i + 1) % walk.len()];
            let (f, a) = corners[&(st.crossing, st.exit)];
            let (f2, b) = corners[&(nx.crossing, nx.enter)];
            debug_assert_eq!(f, f2, "consecutive steps share a face");
            let len = s.faces()[f].len();
            let mut pos = a;
            while pos != b {
                pos = (pos + 1) % len;
                let side = s.faces()[f][pos];
                chains[zi][side.arc] += if side.forward { 1 } else { -1 };
            }
        }
    }

    let mut entries = vec![0i64; rank * rank];
    for i in 0..rank {
        for j in 0..rank {
            let mut g = 0i64;
            for (v, e) in edges.iter().enumerate() {
                g += goeritz(s.sign_of(e.crossing), e.k0) * vectors[i][v] * vectors[j][v];
            }
            let skew = s.intersection_number(&chains[i], &chains[j]);
            entries[i * rank + j] = g + skew;
        }
    }
    MockSeifertMatrix::from_flat(rank, entries).with_euler(euler)
}

/// The mock Seifert matrices of the two checkerboard surfaces of a
/// colorable diagram, in a deterministic order: sorted by matrix size,
/// then by the normalized polynomial `det(tA − Aᵀ)`.
pub fn checkerboard_matrices(
    d: &Diagram,
) -> Result<(MockSeifertMatrix, MockSeifertMatrix), GlformError> {
    let s = build_carrier(d);
    let coloring = s.two_coloring().ok_or(GlformError::NotColorable)?;
    let mut pair = [
        surface_matrix(&s, &coloring, FaceColor::Black),
        surface_matrix(&s, &coloring, FaceColor::White),
    ];
    let key = |m: &MockSeifertMatrix| {
        let delta = crate::invariants::alexander(m);
        let coeffs = crate::poly::normalize(&delta)
            .map(|nf| nf.core.shifted_coeff_vec())
            .unwrap_or_default();
        (m.size(), coeffs)
    };
    if key(&pair[1]) < key(&pair[0]) {
        pair.swap(0, 1);
    }
    let [a, b] = pair;
    Ok((a, b))
}

/// The mock Seifert matrix of the preferred checkerboard surface: the one
/// shaded at the region to the left of the basepoint, i.e. the face whose
/// boundary walk traverses the first arc of the diagram forward.  For a
/// crossingless diagram both surfaces are discs and the matrices agree.
pub fn preferred_checkerboard(d: &Diagram) -> Result<MockSeifertMatrix, GlformError> {
    let s = build_carrier(d);
    let coloring = s.two_coloring().ok_or(GlformError::NotColorable)?;
    let color = s
        .faces()
        .iter()
        .position(|f| f.iter().any(|side| side.arc == 0 && side.forward))
        .map_or(FaceColor::Black, |face| coloring[face]);
    Ok(surface_matrix(&s, &coloring, color))
}

// ---------------------------------------------------------------------------
// S*-moves
// ---------------------------------------------------------------------------

/// Stabilization moves on mock Seifert matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SStarMove {
    /// Attach a tube: append two rows/columns forming an off-diagonal
    /// hyperbolic block; the Euler number is unchanged.
    Tube,
    /// Attach a half-twisted band of the given sign: append a diagonal
    /// entry ±1 and shift the Euler number by −2·sign.
    HalfBand(i8),
}

/// Applies one stabilization move.  The derived invariants (normalized
/// `det(tA − Aᵀ)` and the Euler-corrected signatures) are unchanged.
pub fn s_star_moves(a: &MockSeifertMatrix, mv: SStarMove) -> MockSeifertMatrix {
    match mv {
        SStarMove::Tube => {
            let n = a.size();
            let m = n + 2;
            let mut entries = vec![0i64; m * m];
            for i in 0..n {
                for j in 0..n {
                    entries[i * m + j] = a.entry(i, j);
                }
            }
            entries[n * m + (n + 1)] = 1;
            entries[(n + 1) * m + n] = 1;
            let mut out = MockSeifertMatrix::from_flat(m, entries);
            out.set_euler(a.euler());
            out
        }
        SStarMove::HalfBand(s) => {
            assert!(s == 1 || s == -1, "half-band sign must be +1 or -1");
            let block = MockSeifertMatrix::diagonal(&[i64::from(s)]);
            let mut out = a.block_sum(&block);
            out.set_euler(a.euler().map(|e| e - 2 * i64::from(s)));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::parse_gauss;

    fn unlinked(twists: &[i64]) -> BandPresentation {
        BandPresentation::new(FeetPattern::Unlinked, twists.to_vec(), Vec::new()).unwrap()
    }

    #[test]
    fn torus_knot_annulus() {
        let b = unlinked(&[3]);
        let a = matrix_of_band_presentation(&b);
        assert_eq!(a.rows(), vec![vec![3]]);
        assert_eq!(a.euler(), Some(-6));
        assert_eq!(euler_of_band_presentation(&unlinked(&[1])), -2);
        assert_eq!(euler_of_band_presentation(&unlinked(&[1, 1])), -4);
    }

    #[test]
    fn two_band_example() {
        let b = BandPresentation::new(
            FeetPattern::Unlinked,
            vec![-3, -1],
            vec![BandCrossing { over: 0, under: 1, sign: -1 }],
        )
        .unwrap();
        let a = matrix_of_band_presentation(&b);
        assert_eq!(a.rows(), vec![vec![-3, -2], vec![0, -1]]);
        assert_eq!(a.euler(), Some(8));
        assert_eq!(unlinked(&[1, 1]).twists(), &[1, 1]);
        let diag = matrix_of_band_presentation(&unlinked(&[1, 1]));
        assert_eq!(diag.rows(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn alternating_pairs_give_hyperbolic_feet() {
        let b = BandPresentation::new(FeetPattern::AlternatingPairs, vec![4, 4], Vec::new())
            .unwrap();
        let a = matrix_of_band_presentation(&b);
        assert_eq!(a.rows(), vec![vec![4, 1], vec![-1, 4]]);
        assert_eq!(a.euler(), Some(0));

        // Two interleaved pairs stay independent.
        let b = BandPresentation::new(
            FeetPattern::AlternatingPairs,
            vec![0, 2, -2, 0],
            Vec::new(),
        )
        .unwrap();
        let a = matrix_of_band_presentation(&b);
        assert_eq!(
            a.rows(),
            vec![
                vec![0, 1, 0, 0],
                vec![-1, 2, 0, 0],
                vec![0, 0, -2, 1],
                vec![0, 0, -1, 0],
            ]
        );
        assert_eq!(a.euler(), Some(0));
    }

    #[test]
    fn clasp_changes_euler_only() {
        let plain = unlinked(&[1]);
        let clasped = BandPresentation::new(
            FeetPattern::Unlinked,
            vec![1],
            vec![BandCrossing { over: 0, under: 0, sign: 1 }],
        )
        .unwrap();
        assert_eq!(
            matrix_of_band_presentation(&plain).rows(),
            matrix_of_band_presentation(&clasped).rows()
        );
        assert_eq!(euler_of_band_presentation(&plain), -2);
        assert_eq!(euler_of_band_presentation(&clasped), -6);
    }

    #[test]
    fn mixed_feet_allow_antiparallel_odd_bands() {
        // An interleaved odd band and flat band: the boundary is still one
        // circle, the odd band is traversed antiparallel, and the flat
        // band parallel, so the Euler number vanishes.
        let b = BandPresentation::new(
            FeetPattern::Mixed(vec![0, 1, 0, 1]),
            vec![1, 0],
            Vec::new(),
        )
        .unwrap();
        let walk = b.boundary_walk();
        assert_eq!(walk.circles, 1);
        assert_eq!(walk.parallel, vec![false, true]);
        assert_eq!(euler_of_band_presentation(&b), 0);
        let a = matrix_of_band_presentation(&b);
        assert_eq!(a.rows(), vec![vec![1, 1], vec![-1, 0]]);
        assert!(a.det().magnitude().bit(0), "determinant is odd");
    }

    #[test]
    fn validation_rejects_bad_presentations() {
        assert_eq!(
            BandPresentation::new(FeetPattern::Unlinked, vec![1, 2], Vec::new()),
            Err(GlformError::TwistParity { band: 1, expected: "odd" })
        );
        assert_eq!(
            BandPresentation::new(FeetPattern::AlternatingPairs, vec![2, 1], Vec::new()),
            Err(GlformError::TwistParity { band: 1, expected: "even" })
        );
        assert_eq!(
            BandPresentation::new(FeetPattern::AlternatingPairs, vec![2], Vec::new()),
            Err(GlformError::OddPairCount(1))
        );
        assert_eq!(
            BandPresentation::new(FeetPattern::Mixed(vec![0, 0, 1, 1]), vec![1, 2], Vec::new()),
            Err(GlformError::BoundaryNotCircle(2))
        );
        assert_eq!(
            BandPresentation::new(FeetPattern::Mixed(vec![0, 0, 0, 1]), vec![1, 1], Vec::new()),
            Err(GlformError::MalformedFeet { bands: 2 })
        );
        assert_eq!(
            BandPresentation::new(
                FeetPattern::Unlinked,
                vec![1],
                vec![BandCrossing { over: 0, under: 1, sign: 1 }],
            ),
            Err(GlformError::CrossingOutOfRange { band: 1, bands: 1 })
        );
        assert_eq!(
            BandPresentation::new(
                FeetPattern::Unlinked,
                vec![1],
                vec![BandCrossing { over: 0, under: 0, sign: 2 }],
            ),
            Err(GlformError::BadCrossingSign(2))
        );
    }

    #[test]
    fn json_round_trip_validates() {
        let b = BandPresentation::new(
            FeetPattern::Unlinked,
            vec![-3, -1],
            vec![BandCrossing { over: 0, under: 1, sign: -1 }],
        )
        .unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains("\"n_bands\":2"));
        let back: BandPresentation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);

        let bad = r#"{"n_bands":1,"feet":"unlinked","twists":[2],"crossings":[]}"#;
        assert!(serde_json::from_str::<BandPresentation>(bad).is_err());
    }

    #[test]
    fn empty_presentation_is_a_disc() {
        let b = BandPresentation::new(FeetPattern::Unlinked, Vec::new(), Vec::new()).unwrap();
        let a = matrix_of_band_presentation(&b);
        assert_eq!(a.size(), 0);
        assert_eq!(a.euler(), Some(0));
    }

    #[test]
    fn unknot_surfaces_are_discs() {
        let d = Diagram::unknot();
        let (a, b) = checkerboard_matrices(&d).unwrap();
        assert_eq!(a.size(), 0);
        assert_eq!(b.size(), 0);
        assert_eq!(a.euler(), Some(0));
        assert_eq!(b.euler(), Some(0));
    }

    #[test]
    fn non_colorable_diagram_is_rejected() {
        let vt = parse_gauss("O1+O2+U1+U2+").unwrap();
        assert_eq!(checkerboard_matrices(&vt), Err(GlformError::NotColorable));
    }

    /// Euler-corrected signature of a surface matrix as an integer.
    fn sigma_of(m: &MockSeifertMatrix) -> i64 {
        use num_traits::ToPrimitive;
        let s = crate::invariants::gl_invariants(m).sigma.expect("euler metadata present");
        assert!(s.is_integer());
        s.to_integer().to_i64().unwrap()
    }

    /// Decoded candidate local tables for the calibration sweep; slot
    /// index is `k0` for positive crossings and `2 + k0` for negative.
    fn eta_candidate(bits: u32) -> impl Fn(i8, usize) -> i64 + Copy {
        move |s, k0| {
            let idx = if s > 0 { k0 } else { 2 + k0 };
            if bits >> idx & 1 == 0 {
                1
            } else {
                -1
            }
        }
    }

    fn lambda_candidate(code: u32) -> impl Fn(i8, usize) -> i64 + Copy {
        move |s, k0| {
            let idx = if s > 0 { k0 as u32 } else { 2 + k0 as u32 };
            match (code / 3u32.pow(idx)) % 3 {
                0 => 0,
                1 => 2,
                _ => -2,
            }
        }
    }

    /// A candidate table pair must reproduce the classical signatures of
    /// both trefoils from both checkerboard surfaces, with odd
    /// determinants and the Euler-number congruences (0 for an orientable
    /// surface, 2·rank mod 4 otherwise).
    fn passes_pins(
        pins: &[(&Diagram, i64)],
        eta: impl Fn(i8, usize) -> i64 + Copy,
        lam: impl Fn(i8, usize) -> i64 + Copy,
    ) -> bool {
        use crate::carrier::FaceColor;
        for &(d, expected_sigma) in pins {
            let s = build_carrier(d);
            let coloring = match s.two_coloring() {
                Some(c) => c,
                None => return false,
            };
            for color in [FaceColor::Black, FaceColor::White] {
                let m = surface_matrix_with_tables(&s, &coloring, color, eta, lam);
                if !m.det().magnitude().bit(0) {
                    return false;
                }
                let n = m.size() as i64;
                let e = m.euler().unwrap();
                let orientable = (0..m.size()).all(|i| m.entry(i, i) % 2 == 0);
                if orientable {
                    if e != 0 {
                        return false;
                    }
                } else if (e - 2 * n).rem_euclid(4) != 0 {
                    return false;
                }
                if sigma_of(&m) != expected_sigma {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn local_tables_are_uniquely_calibrated() {
        let right = parse_gauss("O1+U2+O3+U1+O2+U3+").unwrap();
        let left = parse_gauss("O1-U2-O3-U1-O2-U3-").unwrap();
        let pins: Vec<(&Diagram, i64)> = vec![(&right, -2), (&left, 2)];
        let mut survivors = Vec::new();
        for bits in 0..16u32 {
            for code in 0..81u32 {
                if passes_pins(&pins, eta_candidate(bits), lambda_candidate(code)) {
                    survivors.push((bits, code));
                }
            }
        }
        assert_eq!(survivors.len(), 1, "survivors: {survivors:?}");
        let (bits, code) = survivors[0];
        let (eta, lam) = (eta_candidate(bits), lambda_candidate(code));
        for s in [1i8, -1] {
            for k0 in 0..2 {
                assert_eq!(eta(s, k0), goeritz_sign(s, k0));
                assert_eq!(lam(s, k0), euler_local(s, k0));
            }
        }
    }

    #[test]
    fn classical_trefoil_surfaces() {
        let right = parse_gauss("O1+U2+O3+U1+O2+U3+").unwrap();
        let (a, b) = checkerboard_matrices(&right).unwrap();
        for m in [&a, &b] {
            assert_eq!(m.rows(), m.transpose().rows(), "classical matrices are symmetric");
            assert!(m.det().magnitude().bit(0));
            assert_eq!(sigma_of(m), -2);
        }
        assert_eq!(a.det().magnitude().to_string(), "3");
        assert_eq!(b.det().magnitude().to_string(), "3");

        let left = parse_gauss("O1-U2-O3-U1-O2-U3-").unwrap();
        let (a, b) = checkerboard_matrices(&left).unwrap();
        for m in [&a, &b] {
            assert_eq!(sigma_of(m), 2);
        }
    }

    /// A three-crossing genus-1 diagram whose two checkerboard surfaces
    /// produce the classic inequivalent matrix pair: one side congruent
    /// to [[-3,-2],[0,-1]] and the other to
    /// [[1,0,-1],[0,1,-1],[1,1,1]], with distinct normalized
    /// polynomials.
    const THREE_CROSSING_GENUS_ONE: &str = "O1-U2-O3+U1-O2-U3+";

    #[test]
    fn genus_one_example_surfaces() {
        use num_traits::ToPrimitive;
        let d = parse_gauss(THREE_CROSSING_GENUS_ONE).unwrap();
        assert_eq!(build_carrier(&d).genus(), 1);
        let (a, b) = checkerboard_matrices(&d).unwrap();

        assert_eq!(a.rows(), vec![vec![-2, -1], vec![1, -1]]);
        assert_eq!(a.euler(), Some(4));
        let small = a.apply_congruence(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(small.rows(), vec![vec![-3, -2], vec![0, -1]]);

        assert_eq!(
            b.rows(),
            vec![vec![1, 0, -1], vec![0, 1, -1], vec![1, 1, 1]]
        );
        assert_eq!(b.euler(), Some(-2));

        let core = |m: &MockSeifertMatrix| {
            let nf = crate::poly::normalize(&crate::invariants::alexander(m)).unwrap();
            nf.core
                .shifted_coeff_vec()
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect::<Vec<i64>>()
        };
        assert_eq!(core(&a), vec![3, -2, 3]);
        assert_eq!(core(&b), vec![3, 2, 3]);
        assert_eq!(a.det().to_i64(), Some(3));
        assert_eq!(b.det().to_i64(), Some(3));
        assert_eq!(sigma_of(&a), 0);
        assert_eq!(sigma_of(&b), 2);
    }

    #[test]
    fn boundary_code_of_twisted_bands() {
        assert_eq!(boundary_gauss_code(&unlinked(&[3])), "O1+U2+O3+U1+O2+U3+");
        assert_eq!(boundary_gauss_code(&unlinked(&[-3])), "O1-U2-O3-U1-O2-U3-");
        assert_eq!(boundary_gauss_code(&unlinked(&[1])), "O1+U1+");
        assert_eq!(boundary_gauss_code(&unlinked(&[1, 1])), "O1+U2+O2+U1+");
        let empty =
            BandPresentation::new(FeetPattern::Unlinked, Vec::new(), Vec::new()).unwrap();
        assert_eq!(boundary_gauss_code(&empty), "");
    }

    #[test]
    fn boundary_code_round_trips_through_parsing() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x636f6465);
        for _ in 0..50 {
            let b = random_presentation(&mut rng);
            let code = boundary_gauss_code(&b);
            let expected: usize = b
                .twists()
                .iter()
                .map(|t| t.unsigned_abs() as usize)
                .sum::<usize>()
                + 4 * b.crossings().len();
            let d = parse_gauss(&code).unwrap();
            assert_eq!(d.crossing_count(), expected);
        }
    }

    #[test]
    fn classical_figure_eight_surfaces() {
        use num_traits::ToPrimitive;
        let d = parse_gauss("O1+U2-O3-U1+O4+U3-O2-U4+").unwrap();
        assert_eq!(build_carrier(&d).genus(), 0);
        let (a, b) = checkerboard_matrices(&d).unwrap();
        assert_eq!(a.rows(), vec![vec![-2, 1], vec![1, -3]]);
        assert_eq!(a.euler(), Some(4));
        assert_eq!(b.rows(), vec![vec![3, 1], vec![1, 2]]);
        assert_eq!(b.euler(), Some(-4));
        for m in [&a, &b] {
            assert_eq!(m.det().to_i64(), Some(5));
            assert_eq!(sigma_of(m), 0);
        }
    }

    fn random_presentation(rng: &mut rand_chacha::ChaCha8Rng) -> BandPresentation {
        use rand::Rng;
        loop {
            let kind = rng.gen_range(0..3);
            let n = match kind {
                1 => 2 * rng.gen_range(0..=2usize),
                _ => rng.gen_range(0..=4usize),
            };
            let feet = match kind {
                0 => FeetPattern::Unlinked,
                1 => FeetPattern::AlternatingPairs,
                _ => {
                    let mut order: Vec<usize> = (0..n).flat_map(|b| [b, b]).collect();
                    for i in (1..order.len()).rev() {
                        let j = rng.gen_range(0..=i);
                        order.swap(i, j);
                    }
                    FeetPattern::Mixed(order)
                }
            };
            let twists: Vec<i64> = (0..n)
                .map(|_| match kind {
                    0 => 2 * rng.gen_range(-2..=2) + 1,
                    1 => 2 * rng.gen_range(-2..=2),
                    _ => rng.gen_range(-4..=4),
                })
                .collect();
            let crossings: Vec<BandCrossing> = if n == 0 {
                Vec::new()
            } else {
                (0..rng.gen_range(0..=4))
                    .map(|_| BandCrossing {
                        over: rng.gen_range(0..n),
                        under: rng.gen_range(0..n),
                        sign: if rng.gen() { 1 } else { -1 },
                    })
                    .collect()
            };
            if let Ok(b) = BandPresentation::new(feet, twists, crossings) {
                return b;
            }
        }
    }

    #[test]
    fn random_presentations_satisfy_knot_constraints() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x676c666f726d);
        for _ in 0..200 {
            let b = random_presentation(&mut rng);
            let a = matrix_of_band_presentation(&b);
            assert!(a.det().magnitude().bit(0) || a.size() == 0);
            assert!(a.is_mod2_symmetric());
            let e = a.euler().unwrap();
            if b.twists().iter().all(|t| t % 2 == 0) {
                assert_eq!(e, 0, "orientable surfaces are untwisted: {b:?}");
            } else {
                let n = a.size() as i64;
                assert_eq!((e - 2 * n).rem_euclid(4), 0, "euler congruence: {b:?}");
            }
            let text = serde_json::to_string(&b).unwrap();
            assert_eq!(serde_json::from_str::<BandPresentation>(&text).unwrap(), b);
        }
    }

    #[test]
    fn s_star_moves_preserve_normalized_invariants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x73746172);
        for _ in 0..100 {
            let b = random_presentation(&mut rng);
            let a = matrix_of_band_presentation(&b);
            let mut m = a.clone();
            for _ in 0..rng.gen_range(1..=4usize) {
                let mv = match rng.gen_range(0..3) {
                    0 => SStarMove::Tube,
                    1 => SStarMove::HalfBand(1),
                    _ => SStarMove::HalfBand(-1),
                };
                m = s_star_moves(&m, mv);
            }
            let c0 = crate::poly::normalize(&crate::invariants::alexander(&a)).unwrap();
            let c1 = crate::poly::normalize(&crate::invariants::alexander(&m)).unwrap();
            assert_eq!(c0.core, c1.core);
            assert_eq!(sigma_of(&a), sigma_of(&m));
        }
    }

    #[test]
    fn s_star_move_shapes() {
        let base = MockSeifertMatrix::diagonal(&[3]).with_euler(-6);
        let tube = s_star_moves(&base, SStarMove::Tube);
        assert_eq!(
            tube.rows(),
            vec![vec![3, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]
        );
        assert_eq!(tube.euler(), Some(-6));
        let half = s_star_moves(&base, SStarMove::HalfBand(1));
        assert_eq!(half.rows(), vec![vec![3, 0], vec![0, 1]]);
        assert_eq!(half.euler(), Some(-8));
        let neg = s_star_moves(&MockSeifertMatrix::empty(), SStarMove::HalfBand(-1));
        assert_eq!(neg.rows(), vec![vec![-1]]);
    }
}
