//! The canonical closed carrier surface of a Gauss code.
//!
//! Each crossing becomes a disc with four band-ends in a cyclic order
//! determined by the crossing sign; arcs of the code become bands; the
//! boundary circles of the resulting ribbon surface are capped with discs.
//! Faces are the boundary walks of the ribbon structure, the genus comes
//! from the Euler characteristic, and 1-cycles (formal sums of directed
//! arcs) get exact algebraic intersection numbers computed locally at the
//! crossing discs — no explicit embedding is ever constructed.

use serde::Serialize;

use crate::gauss::{Diagram, PassageKind};

/// Half-edge id: arc `i` has tail half `2i` and head half `2i + 1`.
pub type HalfEdge = usize;

pub fn arc_of(h: HalfEdge) -> usize {
    h >> 1
}

fn is_tail(h: HalfEdge) -> bool {
    h & 1 == 0
}

/// One side of an arc as traversed by a face-boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedSide {
    pub arc: usize,
    pub forward: bool,
}

/// The four band-ends of a crossing disc, named by strand role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingPorts {
    pub over_in: HalfEdge,
    pub over_out: HalfEdge,
    pub under_in: HalfEdge,
    pub under_out: HalfEdge,
}

/// Checkerboard colors for faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceColor {
    Black,
    White,
}

impl FaceColor {
    pub fn other(self) -> FaceColor {
        match self {
            FaceColor::Black => FaceColor::White,
            FaceColor::White => FaceColor::Black,
        }
    }
}

/// The closed-up carrier surface: faces, genus, and the combinatorial data
/// needed to intersect cycles on it.
#[derive(Clone, Debug, Serialize)]
pub struct CarrierSurface {
    vertex_count: usize,
    arc_count: usize,
    /// Counterclockwise order of the four half-edges around each crossing.
    rotations: Vec<[HalfEdge; 4]>,
    ports: Vec<CrossingPorts>,
    labels: Vec<u32>,
    signs: Vec<i8>,
    arc_tail: Vec<usize>,
    arc_head: Vec<usize>,
    faces: Vec<Vec<DirectedSide>>,
    /// Face containing each half-edge's side.
    face_of: Vec<usize>,
    /// Rotation position (0..4) of each half-edge at its vertex.
    rot_pos: Vec<usize>,
    vertex_of: Vec<usize>,
    euler_characteristic: i64,
    genus: usize,
    /// Per arc: faces of its forward and backward sides.
    face_adjacency: Vec<(usize, usize)>,
}

/// Builds the carrier surface of a diagram.  The empty diagram gives the
/// sphere split by the plain circle into two faces with empty walks.
pub fn build_carrier(d: &Diagram) -> CarrierSurface {
    let n = d.crossing_count();
    let len = 2 * n;
    if n == 0 {
        return CarrierSurface {
            vertex_count: 0,
            arc_count: 0,
            rotations: Vec::new(),
            ports: Vec::new(),
            labels: Vec::new(),
            signs: Vec::new(),
            arc_tail: Vec::new(),
            arc_head: Vec::new(),
            faces: vec![Vec::new(), Vec::new()],
            face_of: Vec::new(),
            rot_pos: Vec::new(),
            vertex_of: Vec::new(),
            euler_characteristic: 2,
            genus: 0,
            face_adjacency: Vec::new(),
        };
    }

    // Vertices in crossing-label order; positions of the two passages.
    let mut labels = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    let mut vertex_of_label = std::collections::BTreeMap::new();
    for (v, c) in d.crossings().iter().enumerate() {
        labels.push(c.label);
        signs.push(c.sign);
        vertex_of_label.insert(c.label, v);
    }
    let mut over_at = vec![0usize; n];
    let mut under_at = vec![0usize; n];
    for (pos, p) in d.passages().iter().enumerate() {
        let v = vertex_of_label[&p.label];
        match p.kind {
            PassageKind::Over => over_at[v] = pos,
            PassageKind::Under => under_at[v] = pos,
        }
    }
    let vertex_of_passage: Vec<usize> = d
        .passages()
        .iter()
        .map(|p| vertex_of_label[&p.label])
        .collect();

    // Arc i runs from passage i to passage i+1; its halves sit at those
    // vertices.
    let arc_tail: Vec<usize> = (0..len).map(|i| vertex_of_passage[i]).collect();
    let arc_head: Vec<usize> = (0..len).map(|i| vertex_of_passage[(i + 1) % len]).collect();
    let mut vertex_of = vec![0usize; 2 * len];
    for i in 0..len {
        vertex_of[2 * i] = arc_tail[i];
        vertex_of[2 * i + 1] = arc_head[i];
    }

    // Ports: the over strand enters on the head half of the arc before its
    // over passage and leaves on the tail half of the arc after it.
    let prev = |pos: usize| (pos + len - 1) % len;
    let mut ports = Vec::with_capacity(n);
    let mut rotations = Vec::with_capacity(n);
    for v in 0..n {
        let p = CrossingPorts {
            over_in: 2 * prev(over_at[v]) + 1,
            over_out: 2 * over_at[v],
            under_in: 2 * prev(under_at[v]) + 1,
            under_out: 2 * under_at[v],
        };
        // With the over strand entering from the south, a positive crossing
        // has the under strand entering from the east, a negative one from
        // the west; counterclockwise from the south this gives the orders
        // below.
        let rot = if signs[v] > 0 {
            [p.over_in, p.under_in, p.over_out, p.under_out]
        } else {
            [p.over_in, p.under_out, p.over_out, p.under_in]
        };
        ports.push(p);
        rotations.push(rot);
    }
    let mut rot_pos = vec![0usize; 2 * len];
    let mut next_ccw = vec![0 as HalfEdge; 2 * len];
    for rot in &rotations {
        for (i, &h) in rot.iter().enumerate() {
            rot_pos[h] = i;
            next_ccw[h] = rot[(i + 1) % 4];
        }
    }

    // Faces: orbits of h -> next_ccw(opposite(h)); the tail half of an arc
    // is its forward side.
    let mut face_of = vec![usize::MAX; 2 * len];
    let mut faces = Vec::new();
    for start in 0..2 * len {
        if face_of[start] != usize::MAX {
            continue;
        }
        let idx = faces.len();
        let mut walk = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = idx;
            walk.push(DirectedSide {
                arc: arc_of(h),
                forward: is_tail(h),
            });
            h = next_ccw[h ^ 1];
            if h == start {
                break;
            }
        }
        faces.push(walk);
    }

    let euler_characteristic = n as i64 - 2 * n as i64 + faces.len() as i64;
    debug_assert!(euler_characteristic % 2 == 0 && euler_characteristic <= 2);
    let genus = ((2 - euler_characteristic) / 2) as usize;
    let face_adjacency = (0..len)
        .map(|i| (face_of[2 * i], face_of[2 * i + 1]))
        .collect();

    CarrierSurface {
        vertex_count: n,
        arc_count: len,
        rotations,
        ports,
        labels,
        signs,
        arc_tail,
        arc_head,
        faces,
        face_of,
        rot_pos,
        vertex_of,
        euler_characteristic,
        genus,
        face_adjacency,
    }
}

impl CarrierSurface {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Vec<DirectedSide>] {
        &self.faces
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler_characteristic
    }

    /// Per arc: the faces of its forward and backward sides.
    pub fn face_adjacency(&self) -> &[(usize, usize)] {
        &self.face_adjacency
    }

    pub fn label_of(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn vertex_of_label(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn sign_of(&self, v: usize) -> i8 {
        self.signs[v]
    }

    pub fn ports(&self, v: usize) -> CrossingPorts {
        self.ports[v]
    }

    pub fn rotation(&self, v: usize) -> [HalfEdge; 4] {
        self.rotations[v]
    }

    pub fn arc_tail(&self, arc: usize) -> usize {
        self.arc_tail[arc]
    }

    pub fn arc_head(&self, arc: usize) -> usize {
        self.arc_head[arc]
    }

    pub fn face_of_side(&self, arc: usize, forward: bool) -> usize {
        self.face_of[2 * arc + usize::from(!forward)]
    }

    /// Faces at the four corners of a crossing disc, counterclockwise; the
    /// corner between rotation positions `i` and `i+1` is the face whose
    /// boundary walk turns through it.
    pub fn corner_faces(&self, v: usize) -> [usize; 4] {
        let rot = self.rotations[v];
        [
            self.face_of[rot[1]],
            self.face_of[rot[2]],
            self.face_of[rot[3]],
            self.face_of[rot[0]],
        ]
    }

    /// Boundary chain of a face as a formal sum of directed arcs (a
    /// null-homologous cycle: it bounds the capping disc).
    pub fn face_chain(&self, face: usize) -> Vec<i64> {
        let mut chain = vec![0i64; self.arc_count];
        for side in &self.faces[face] {
            chain[side.arc] += if side.forward { 1 } else { -1 };
        }
        chain
    }

    /// Two-colors the faces so that the two sides of every arc get
    /// different colors, or reports that no such coloring exists.  The
    /// face numbered 0 is black.
    pub fn two_coloring(&self) -> Option<Vec<FaceColor>> {
        if self.vertex_count == 0 {
            return Some(vec![FaceColor::Black, FaceColor::White]);
        }
        let mut colors: Vec<Option<FaceColor>> = vec![None; self.faces.len()];
        colors[0] = Some(FaceColor::Black);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            let c = colors[f].unwrap();
            for &(a, b) in &self.face_adjacency {
                let other = if a == f {
                    b
                } else if b == f {
                    a
                } else {
                    continue;
                };
                match colors[other] {
                    None => {
                        colors[other] = Some(c.other());
                        queue.push_back(other);
                    }
                    Some(oc) => {
                        if oc == c {
                            return None;
                        }
                    }
                }
            }
        }
        colors.into_iter().collect()
    }

    /// Decomposes a cycle into strand passages at each vertex: pairs of
    /// (incoming, outgoing) rotation positions, with multiplicities
    /// expanded.  Any pairing of the germs represents the same homology
    /// class, so a fixed rotation-ordered matching is used.
    fn passages_of_cycle(&self, z: &[i64]) -> Vec<Vec<(usize, usize)>> {
        assert_eq!(z.len(), self.arc_count, "cycle has one coefficient per arc");
        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        let mut outs: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for (arc, &c) in z.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let tail_pos = self.rot_pos[2 * arc];
            let head_pos = self.rot_pos[2 * arc + 1];
            let mult = c.unsigned_abs() as usize;
            for _ in 0..mult {
                if c > 0 {
                    outs[self.arc_tail[arc]].push(tail_pos);
                    ins[self.arc_head[arc]].push(head_pos);
                } else {
                    ins[self.arc_tail[arc]].push(tail_pos);
                    outs[self.arc_head[arc]].push(head_pos);
                }
            }
        }
        let mut passages = Vec::with_capacity(self.vertex_count);
        for v in 0..self.vertex_count {
            assert_eq!(ins[v].len(), outs[v].len(), "chain is not a cycle");
            ins[v].sort_unstable();
            outs[v].sort_unstable();
            passages.push(ins[v].iter().copied().zip(outs[v].iter().copied()).collect());
        }
        passages
    }

    /// Exact algebraic intersection number of two cycles on the carrier,
    /// positive when the frame (first, second) agrees with the surface
    /// orientation.  The first cycle is pushed off to its left; crossings
    /// then happen only inside crossing discs, where two chords of the
    /// disc boundary cross exactly when their endpoints interleave.
    pub fn intersection_number(&self, z1: &[i64], z2: &[i64]) -> i64 {
        let p1 = self.passages_of_cycle(z1);
        let p2 = self.passages_of_cycle(z2);
        // Rotation position k sits at circle point 4k of 16; the pushed
        // copy enters just clockwise of its port and exits just
        // counterclockwise, so its chord runs from 4a−1 to 4b+1.
        let off = |x: usize, y: usize| (y + 16 - x) % 16;
        let mut total = 0i64;
        for v in 0..self.vertex_count {
            for &(a, b) in &p1[v] {
                let p = (4 * a + 15) % 16;
                let q = (4 * b + 1) % 16;
                let width = off(p, q);
                for &(c, d) in &p2[v] {
                    let r_in = off(p, 4 * c) < width;
                    let s_in = off(p, 4 * d) < width;
                    if r_in && !s_in {
                        total += 1;
                    } else if s_in && !r_in {
                        total -= 1;
                    }
                }
            }
        }
        total
    }

    /// Fundamental cycles of a deterministic spanning tree (arcs taken in
    /// index order): one cycle per non-tree arc, spanning the cycle space
    /// of the underlying 4-valent graph.
    pub fn fundamental_cycles(&self) -> Vec<Vec<i64>> {
        if self.vertex_count == 0 {
            return Vec::new();
        }
        let n = self.vertex_count;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (parent vertex, arc)
        let mut depth = vec![0usize; n];
        let mut in_tree = vec![false; self.arc_count];
        let mut reached = vec![false; n];
        reached[0] = true;
        // Kruskal-style sweep in arc order keeps the choice deterministic.
        let mut added = 1;
        while added < n {
            let before = added;
            for arc in 0..self.arc_count {
                let (t, h) = (self.arc_tail[arc], self.arc_head[arc]);
                let (from, to) = if reached[t] && !reached[h] {
                    (t, h)
                } else if reached[h] && !reached[t] {
                    (h, t)
                } else {
                    continue;
                };
                in_tree[arc] = true;
                reached[to] = true;
                parent[to] = Some((from, arc));
                depth[to] = depth[from] + 1;
                added += 1;
            }
            assert!(added > before, "diagram graph is connected");
        }

        // Adds the tree path from `a` up to `b`'s level and on to the root
        // meeting point, with +1 per arc traversed along its direction.
        let mut cycles = Vec::new();
        for arc in 0..self.arc_count {
            if in_tree[arc] {
                continue;
            }
            let mut chain = vec![0i64; self.arc_count];
            chain[arc] = 1;
            // Walk from head(arc) to tail(arc) through the tree.
            let (mut x, mut y) = (self.arc_head[arc], self.arc_tail[arc]);
            let mut dx = depth[x];
            let mut dy = depth[y];
            while dx > dy {
                let (p, e) = parent[x].unwrap();
                chain[e] += if self.arc_head[e] == p { 1 } else { -1 };
                x = p;
                dx -= 1;
            }
            while dy > dx {
                let (p, e) = parent[y].unwrap();
                chain[e] += if self.arc_head[e] == p { -1 } else { 1 };
                y = p;
                dy -= 1;
            }
            while x != y {
                let (px, ex) = parent[x].unwrap();
                chain[ex] += if self.arc_head[ex] == px { 1 } else { -1 };
                x = px;
                let (py, ey) = parent[y].unwrap();
                chain[ey] += if self.arc_head[ey] == py { -1 } else { 1 };
                y = py;
            }
            debug_assert!(self.is_cycle(&chain));
            cycles.push(chain);
        }
        cycles
    }

    fn is_cycle(&self, z: &[i64]) -> bool {
        let mut net = vec![0i64; self.vertex_count];
        for (arc, &c) in z.iter().enumerate() {
            net[self.arc_head[arc]] += c;
            net[self.arc_tail[arc]] -= c;
        }
        net.iter().all(|&x| x == 0)
    }
}

/// A cycle basis with its intersection pairing on the carrier.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionData {
    /// Fundamental cycles as formal sums of directed arcs.
    pub basis: Vec<Vec<i64>>,
    /// Skew-symmetric pairing matrix of the basis; its rank is twice the
    /// genus.
    pub pairing: Vec<Vec<i64>>,
}

/// Computes the intersection pairing of the fundamental cycle basis.
pub fn face_cycle_pairing(s: &CarrierSurface) -> IntersectionData {
    let basis = s.fundamental_cycles();
    let k = basis.len();
    let mut pairing = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            pairing[i][j] = s.intersection_number(&basis[i], &basis[j]);
        }
    }
    for i in 0..k {
        debug_assert_eq!(pairing[i][i], 0);
        for j in 0..i {
            debug_assert_eq!(pairing[i][j], -pairing[j][i]);
        }
    }
    IntersectionData { basis, pairing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{colorability, parse_gauss, Colorability, Passage};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    fn random_diagram(n: usize, rng: &mut StdRng) -> Diagram {
        let mut slots: Vec<(u32, PassageKind)> = Vec::with_capacity(2 * n);
        let mut signs = BTreeMap::new();
        for label in 1..=n as u32 {
            slots.push((label, PassageKind::Over));
            slots.push((label, PassageKind::Under));
            signs.insert(label, if rng.gen_bool(0.5) { 1 } else { -1 });
        }
        slots.shuffle(rng);
        let passages = slots
            .into_iter()
            .map(|(label, kind)| Passage { label, kind })
            .collect();
        Diagram::from_parts(passages, &signs).unwrap()
    }

    /// Fraction-free rank of an integer matrix.
    fn rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<i128>> = m
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && a[r][c] != 0 {
                    let (num, den) = (a[r][c], a[rank][c]);
                    for j in 0..cols {
                        a[r][j] = a[r][j] * den - a[rank][j] * num;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Independent local rule: chords drawn between points of the moment
    /// curve (strictly convex position preserves the circular order), with
    /// crossings decided by exact segment-intersection tests and signed by
    /// the direction determinant.
    fn intersection_by_segments(s: &CarrierSurface, z1: &[i64], z2: &[i64]) -> i64 {
        let point = |t: i64| (t, t * t);
        let orient = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| -> i64 {
            ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
        };
        let p1 = s.passages_of_cycle(z1);
        let p2 = s.passages_of_cycle(z2);
        let mut total = 0i64;
        for v in 0..s.vertex_count() {
            for &(a, b) in &p1[v] {
                let p = point(((4 * a as i64 + 15) % 16) as i64);
                let q = point(((4 * b as i64 + 1) % 16) as i64);
                for &(c, d) in &p2[v] {
                    let r = point(4 * c as i64);
                    let s_ = point(4 * d as i64);
                    let proper = orient(p, q, r) * orient(p, q, s_) < 0
                        && orient(r, s_, p) * orient(r, s_, q) < 0;
                    if proper {
                        let cross = (q.0 - p.0) * (s_.1 - r.1) - (q.1 - p.1) * (s_.0 - r.0);
                        total += cross.signum();
                    }
                }
            }
        }
        total
    }

    #[test]
    fn pinned_surfaces() {
        let unknot = build_carrier(&parse_gauss("").unwrap());
        assert_eq!(unknot.face_count(), 2);
        assert_eq!(unknot.genus(), 0);
        assert_eq!(unknot.euler_characteristic(), 2);
        assert!(unknot.two_coloring().is_some());

        let trefoil = build_carrier(&parse_gauss("O1+U2+O3+U1+O2+U3+").unwrap());
        assert_eq!(trefoil.face_count(), 5);
        assert_eq!(trefoil.genus(), 0);
        assert_eq!(trefoil.euler_characteristic(), 2);

        let vt = build_carrier(&parse_gauss("O1+O2+U1+U2+").unwrap());
        assert_eq!(vt.face_count(), 2);
        assert_eq!(vt.genus(), 1);
        assert_eq!(vt.euler_characteristic(), 0);
        assert!(vt.two_coloring().is_none());

        let kink = build_carrier(&parse_gauss("O1-U1-").unwrap());
        assert_eq!(kink.face_count(), 3);
        assert_eq!(kink.genus(), 0);
    }

    #[test]
    fn genus_zero_pairing_vanishes() {
        let trefoil = build_carrier(&parse_gauss("O1+U2+O3+U1+O2+U3+").unwrap());
        let data = face_cycle_pairing(&trefoil);
        assert_eq!(data.basis.len(), 4); // E − V + 1
        assert!(data.pairing.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn torus_pairing_is_unimodular_of_rank_two() {
        let vt = build_carrier(&parse_gauss("O1+O2+U1+U2+").unwrap());
        let data = face_cycle_pairing(&vt);
        // Tree = first arc; cycles close the remaining three arcs.
        assert_eq!(
            data.pairing,
            vec![vec![0, 1, 0], vec![-1, 0, -1], vec![0, 1, 0]]
        );
        assert_eq!(rank(&data.pairing), 2 * vt.genus());
    }

    #[test]
    fn face_walks_partition_arc_sides() {
        let mut rng = StdRng::seed_from_u64(31);
        for n in 0..=7 {
            for _ in 0..10 {
                let d = random_diagram(n, &mut rng);
                let s = build_carrier(&d);
                let mut fwd = vec![0usize; s.arc_count()];
                let mut bwd = vec![0usize; s.arc_count()];
                for walk in s.faces() {
                    for side in walk {
                        if side.forward {
                            fwd[side.arc] += 1;
                        } else {
                            bwd[side.arc] += 1;
                        }
                    }
                }
                assert!(fwd.iter().all(|&k| k == 1));
                assert!(bwd.iter().all(|&k| k == 1));
                assert_eq!(
                    s.euler_characteristic(),
                    s.vertex_count() as i64 - s.arc_count() as i64 + s.face_count() as i64
                );
                assert_eq!(2 - 2 * s.genus() as i64, s.euler_characteristic());
                // Every face chain is null-homologous: it pairs to zero.
                for f in 0..s.face_count() {
                    let chain = s.face_chain(f);
                    for z in s.fundamental_cycles() {
                        assert_eq!(s.intersection_number(&z, &chain), 0);
                        assert_eq!(s.intersection_number(&chain, &z), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn coloring_matches_index_parity() {
        let mut rng = StdRng::seed_from_u64(32);
        for n in 0..=7 {
            for _ in 0..15 {
                let d = random_diagram(n, &mut rng);
                let s = build_carrier(&d);
                let coloring = s.two_coloring();
                assert_eq!(
                    coloring.is_some(),
                    colorability(&d) >= Colorability::CheckerboardColorable,
                    "{}",
                    d.to_code()
                );
                if let Some(colors) = coloring {
                    for &(a, b) in s.face_adjacency() {
                        assert_ne!(colors[a], colors[b]);
                    }
                    // Corners alternate around every crossing.
                    for v in 0..s.vertex_count() {
                        let c = s.corner_faces(v).map(|f| colors[f]);
                        assert_eq!(c[0], c[2]);
                        assert_eq!(c[1], c[3]);
                        assert_ne!(c[0], c[1]);
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_is_skew_bilinear_of_rank_twice_genus() {
        let mut rng = StdRng::seed_from_u64(33);
        for n in 1..=7 {
            for _ in 0..10 {
                let d = random_diagram(n, &mut rng);
                let s = build_carrier(&d);
                let data = face_cycle_pairing(&s);
                assert_eq!(rank(&data.pairing), 2 * s.genus(), "{}", d.to_code());
                let combo = |rng: &mut StdRng| -> Vec<i64> {
                    let mut z = vec![0i64; s.arc_count()];
                    for b in &data.basis {
                        let c = rng.gen_range(-2i64..=2);
                        for (zi, bi) in z.iter_mut().zip(b) {
                            *zi += c * bi;
                        }
                    }
                    z
                };
                for _ in 0..4 {
                    let x = combo(&mut rng);
                    let y = combo(&mut rng);
                    let w = combo(&mut rng);
                    let ixy = s.intersection_number(&x, &y);
                    assert_eq!(ixy, -s.intersection_number(&y, &x));
                    assert_eq!(s.intersection_number(&x, &x), 0);
                    let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                    assert_eq!(
                        s.intersection_number(&sum, &w),
                        s.intersection_number(&x, &w) + s.intersection_number(&y, &w)
                    );
                    // Independent segment-geometry implementation agrees.
                    assert_eq!(ixy, intersection_by_segments(&s, &x, &y));
                }
            }
        }
    }

    #[test]
    fn carrier_is_natural_under_relabeling() {
        let d = parse_gauss("O1+O2+U1+U2+").unwrap();
        let relabeled = {
            let passages = d
                .passages()
                .iter()
                .map(|p| Passage {
                    label: p.label * 7 + 1,
                    kind: p.kind,
                })
                .collect();
            let signs: BTreeMap<u32, i8> = d
                .crossings()
                .iter()
                .map(|c| (c.label * 7 + 1, c.sign))
                .collect();
            Diagram::from_parts(passages, &signs).unwrap()
        };
        let s1 = build_carrier(&d);
        let s2 = build_carrier(&relabeled);
        assert_eq!(s1.faces(), s2.faces());
        assert_eq!(
            face_cycle_pairing(&s1).pairing,
            face_cycle_pairing(&s2).pairing
        );

        // Rotating the code (moving the starting passage) keeps the
        // surface: same face count, genus, and pairing rank.
        let rotated = {
            let mut passages = d.passages().to_vec();
            passages.rotate_left(1);
            let signs: BTreeMap<u32, i8> =
                d.crossings().iter().map(|c| (c.label, c.sign)).collect();
            Diagram::from_parts(passages, &signs).unwrap()
        };
        let s3 = build_carrier(&rotated);
        assert_eq!(s1.face_count(), s3.face_count());
        assert_eq!(s1.genus(), s3.genus());
        assert_eq!(
            rank(&face_cycle_pairing(&s1).pairing),
            rank(&face_cycle_pairing(&s3).pairing)
        );
    }
}
