//! Maps on locally orientable surfaces as combinatorial triples.
//!
//! A [`RibbonMap`] is a connected graph given by a fixed-point-free pairing of
//! half-edges, a cyclic counterclockwise rotation of half-edges around every
//! vertex, a set of twisted edges, and a root.
//!
//! # Sides, corners and the face walk
//!
//! Half-edge `h` has two sides. Side `0` is the side adjacent to the corner
//! `(pred h, h)`; side `1` is the side adjacent to the corner `(h, succ h)`, where
//! `succ`/`pred` step counterclockwise/clockwise in the rotation of the vertex of
//! `h`. Side bits are therefore relative to the orientation convention at the
//! vertex of `h`, and [`RibbonMap::flip_vertex`] relabels the root side whenever
//! it flips the root vertex so that the rooted map itself is unchanged.
//!
//! The face walk runs over states `(h, dir)`: the walker leaves its vertex along
//! half-edge `h`, with `dir = +1` when it walks with the local convention (the
//! corners it passes are *left* corners) and `dir = -1` otherwise. One step is
//!
//! ```text
//! leave h with dir          -> half-edge side (h, 0) if dir = +1, (h, 1) if dir = -1
//! arrive a = partner(h)     -> dir' = dir, negated if the edge is a twist
//!                           -> half-edge side (a, 1) if dir' = +1, (a, 0) if dir' = -1
//! corner entered at a       -> (a, succ a) if dir' = +1, (pred a, a) if dir' = -1
//! next leaving half-edge    -> succ a if dir' = +1, pred a if dir' = -1
//! ```
//!
//! A border lists for every traversed edge-side the leaving and the arriving
//! half-edge side, so a border with `k` corners has `2k` steps and all borders
//! together have exactly `4e` steps: every `(half-edge, side)` pair appears once.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Index of a half-edge, dense in `0..2e`.
pub type HalfEdge = usize;
/// Index of an edge, dense in `0..e`. Edge `i` is the `i`-th pair.
pub type EdgeId = usize;
/// Index of a vertex, dense in `0..v`.
pub type VertexId = usize;

/// Root of a map: a half-edge and one of its two sides (`0` or `1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    pub half_edge: HalfEdge,
    pub side: u8,
}

impl Root {
    pub fn new(half_edge: HalfEdge, side: u8) -> Self {
        Root { half_edge, side }
    }
}

/// Which side of the walker a corner lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub fn flipped(self) -> Hand {
        match self {
            Hand::Left => Hand::Right,
            Hand::Right => Hand::Left,
        }
    }
}

/// Type of a surface, stored exactly as `2h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfType {
    pub twice_h: u32,
    pub orientable: bool,
}

impl HalfType {
    pub fn new(twice_h: u32, orientable: bool) -> Result<Self, MapError> {
        if orientable && twice_h % 2 == 1 {
            return Err(MapError::OddOrientableType(twice_h));
        }
        Ok(HalfType { twice_h, orientable })
    }

    /// `true` when `h` is an integer.
    pub fn is_integral(&self) -> bool {
        self.twice_h % 2 == 0
    }

    /// `⌊h⌋`.
    pub fn floor_h(&self) -> u32 {
        self.twice_h / 2
    }
}

impl fmt::Display for HalfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.orientable { "S" } else { "N" };
        if self.twice_h % 2 == 0 {
            write!(f, "{kind}_{}", self.twice_h / 2)
        } else {
            write!(f, "{kind}_{}/2", self.twice_h)
        }
    }
}

/// First violated [`RibbonMap`] invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("map has no edges")]
    NoEdges,
    #[error("half-edge {0} out of range")]
    HalfEdgeOutOfRange(HalfEdge),
    #[error("pairing not an involution: half-edge {0} is paired more than once or with itself")]
    PairingNotInvolution(HalfEdge),
    #[error("vertex {0} has an empty rotation")]
    EmptyRotation(VertexId),
    #[error("half-edge {0} appears in more than one rotation slot")]
    RotationRepeats(HalfEdge),
    #[error("half-edge {0} appears in no rotation")]
    RotationMissing(HalfEdge),
    #[error("twist refers to unknown edge {0}")]
    TwistOutOfRange(EdgeId),
    #[error("twist edge {0} listed twice")]
    TwistRepeated(EdgeId),
    #[error("root half-edge {0} does not exist")]
    RootOutOfRange(HalfEdge),
    #[error("root side bit {0} is not 0 or 1")]
    RootSide(u8),
    #[error("graph not connected")]
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("invalid map: {0}")]
    Invalid(#[from] Violation),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("maps do not share the same half-edge structure")]
    StructuralMismatch,
    #[error("orientable surfaces have integral type, got 2h = {0}")]
    OddOrientableType(u32),
}

/// One step of a border: a half-edge and the side along which the walker passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BorderStep {
    pub half_edge: HalfEdge,
    pub side: u8,
}

/// Borders of all faces of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTrace {
    pub faces: Vec<Vec<BorderStep>>,
}

impl FaceTrace {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn step_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }
}

/// `(edges, rotation, twist flags, root)`, the arguments of
/// [`RibbonMap::with_twist_flags`].
pub type MapParts = (Vec<[HalfEdge; 2]>, Vec<Vec<HalfEdge>>, Vec<bool>, Root);

/// A rooted map given as (pairing, rotation system, twists, root).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonMap {
    edges: Vec<[HalfEdge; 2]>,
    rotation: Vec<Vec<HalfEdge>>,
    twists: Vec<bool>,
    root: Root,
    partner: Vec<HalfEdge>,
    edge_of: Vec<EdgeId>,
    vertex_of: Vec<VertexId>,
    slot: Vec<usize>,
}

impl RibbonMap {
    /// Builds a map and checks every invariant.
    pub fn new(
        edges: Vec<[HalfEdge; 2]>,
        rotation: Vec<Vec<HalfEdge>>,
        twists: impl IntoIterator<Item = EdgeId>,
        root: Root,
    ) -> Result<Self, Violation> {
        let mut edges = edges;
        for pair in &mut edges {
            if pair[0] > pair[1] {
                pair.swap(0, 1);
            }
        }
        let e = edges.len();
        if e == 0 {
            return Err(Violation::NoEdges);
        }
        let n = 2 * e;
        let mut partner = vec![usize::MAX; n];
        let mut edge_of = vec![usize::MAX; n];
        for (id, &[a, b]) in edges.iter().enumerate() {
            for h in [a, b] {
                if h >= n {
                    return Err(Violation::HalfEdgeOutOfRange(h));
                }
            }
            if a == b {
                return Err(Violation::PairingNotInvolution(a));
            }
            for (h, p) in [(a, b), (b, a)] {
                if partner[h] != usize::MAX {
                    return Err(Violation::PairingNotInvolution(h));
                }
                partner[h] = p;
                edge_of[h] = id;
            }
        }

        let mut vertex_of = vec![usize::MAX; n];
        let mut slot = vec![0; n];
        for (v, rot) in rotation.iter().enumerate() {
            if rot.is_empty() {
                return Err(Violation::EmptyRotation(v));
            }
            for (i, &h) in rot.iter().enumerate() {
                if h >= n {
                    return Err(Violation::HalfEdgeOutOfRange(h));
                }
                if vertex_of[h] != usize::MAX {
                    return Err(Violation::RotationRepeats(h));
                }
                vertex_of[h] = v;
                slot[h] = i;
            }
        }
        if let Some(h) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(Violation::RotationMissing(h));
        }

        let mut twist_flags = vec![false; e];
        for t in twists {
            if t >= e {
                return Err(Violation::TwistOutOfRange(t));
            }
            if twist_flags[t] {
                return Err(Violation::TwistRepeated(t));
            }
            twist_flags[t] = true;
        }

        if root.half_edge >= n {
            return Err(Violation::RootOutOfRange(root.half_edge));
        }
        if root.side > 1 {
            return Err(Violation::RootSide(root.side));
        }

        let map = RibbonMap {
            edges,
            rotation,
            twists: twist_flags,
            root,
            partner,
            edge_of,
            vertex_of,
            slot,
        };
        if !map.is_connected() {
            return Err(Violation::Disconnected);
        }
        Ok(map)
    }

    /// Same as [`RibbonMap::new`] but takes the twist flags per edge.
    pub fn with_twist_flags(
        edges: Vec<[HalfEdge; 2]>,
        rotation: Vec<Vec<HalfEdge>>,
        twist_flags: &[bool],
        root: Root,
    ) -> Result<Self, Violation> {
        let twists = twist_flags
            .iter()
            .enumerate()
            .filter_map(|(i, &t)| t.then_some(i));
        Self::new(edges, rotation, twists, root)
    }

    /// Validates raw parts without keeping the map.
    pub fn validate(
        edges: &[[HalfEdge; 2]],
        rotation: &[Vec<HalfEdge>],
        twists: &[EdgeId],
        root: Root,
    ) -> Result<(), Violation> {
        Self::new(
            edges.to_vec(),
            rotation.to_vec(),
            twists.iter().copied(),
            root,
        )
        .map(|_| ())
    }

    fn is_connected(&self) -> bool {
        let v = self.rotation.len();
        let mut seen = vec![false; v];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &h in &self.rotation[u] {
                let w = self.vertex_of[self.partner[h]];
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.partner.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edges(&self) -> &[[HalfEdge; 2]] {
        &self.edges
    }

    pub fn rotations(&self) -> &[Vec<HalfEdge>] {
        &self.rotation
    }

    pub fn rotation(&self, v: VertexId) -> &[HalfEdge] {
        &self.rotation[v]
    }

    pub fn root(&self) -> Root {
        self.root
    }

    pub fn root_vertex(&self) -> VertexId {
        self.vertex_of[self.root.half_edge]
    }

    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h]
    }

    pub fn edge_of(&self, h: HalfEdge) -> EdgeId {
        self.edge_of[h]
    }

    pub fn vertex_of(&self, h: HalfEdge) -> VertexId {
        self.vertex_of[h]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn is_twist(&self, e: EdgeId) -> bool {
        self.twists[e]
    }

    pub fn twist_flags(&self) -> &[bool] {
        &self.twists
    }

    /// Twisted edge ids in increasing order.
    pub fn twists(&self) -> Vec<EdgeId> {
        self.twists
            .iter()
            .enumerate()
            .filter_map(|(i, &t)| t.then_some(i))
            .collect()
    }

    pub fn twist_count(&self) -> usize {
        self.twists.iter().filter(|&&t| t).count()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let [a, b] = self.edges[e];
        self.vertex_of[a] == self.vertex_of[b]
    }

    /// Counterclockwise successor of `h` around its vertex.
    pub fn succ(&self, h: HalfEdge) -> HalfEdge {
        let rot = &self.rotation[self.vertex_of[h]];
        rot[(self.slot[h] + 1) % rot.len()]
    }

    /// Clockwise successor of `h` around its vertex.
    pub fn pred(&self, h: HalfEdge) -> HalfEdge {
        let rot = &self.rotation[self.vertex_of[h]];
        rot[(self.slot[h] + rot.len() - 1) % rot.len()]
    }

    /// Decomposes into `(edges, rotation, twist flags, root)`.
    pub fn into_parts(self) -> MapParts {
        (self.edges, self.rotation, self.twists, self.root)
    }

    /// Returns a copy with a different root.
    pub fn rerooted(&self, root: Root) -> Result<Self, Violation> {
        Self::with_twist_flags(
            self.edges.clone(),
            self.rotation.clone(),
            &self.twists,
            root,
        )
    }

    /// Next state of the face walk. See the module docs for the step rule.
    #[inline]
    pub(crate) fn walk_step(&self, h: HalfEdge, forward: bool) -> (HalfEdge, bool) {
        let a = self.partner[h];
        let dir = forward ^ self.twists[self.edge_of[h]];
        let next = if dir { self.succ(a) } else { self.pred(a) };
        (next, dir)
    }

    /// Computes the borders of all faces with the crosswalk rule at twists.
    pub fn trace_faces(&self) -> FaceTrace {
        let n = self.half_edge_count();
        // state index: 2h + (0 if forward else 1)
        let mut seen = vec![false; 2 * n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[2 * start] {
                continue;
            }
            let mut border = Vec::new();
            let (mut h, mut fwd) = (start, true);
            loop {
                seen[2 * h + usize::from(!fwd)] = true;
                let a = self.partner[h];
                let dir = fwd ^ self.twists[self.edge_of[h]];
                // the reverse walk passes through the same sides
                seen[2 * a + usize::from(dir)] = true;
                border.push(BorderStep {
                    half_edge: h,
                    side: u8::from(!fwd),
                });
                border.push(BorderStep {
                    half_edge: a,
                    side: u8::from(dir),
                });
                let (nh, nf) = self.walk_step(h, fwd);
                h = nh;
                fwd = nf;
                if h == start && fwd {
                    break;
                }
            }
            faces.push(border);
        }
        FaceTrace { faces }
    }

    /// Number of faces.
    pub fn face_count(&self) -> usize {
        self.trace_faces().face_count()
    }

    /// `2h = 2 + e - v - f` together with orientability.
    pub fn euler_type(&self) -> HalfType {
        let faces = self.face_count() as i64;
        let twice_h = 2 + self.edge_count() as i64 - self.vertex_count() as i64 - faces;
        debug_assert!(twice_h >= 0);
        HalfType {
            twice_h: twice_h as u32,
            orientable: self.is_orientable(),
        }
    }

    /// A set of vertex flips that empties the twist set, if one exists.
    pub fn orienting_flips(&self) -> Option<Vec<bool>> {
        let v = self.vertex_count();
        let mut flip: Vec<Option<bool>> = vec![None; v];
        flip[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            let fu = flip[u].unwrap();
            for &h in &self.rotation[u] {
                let e = self.edge_of[h];
                let w = self.vertex_of[self.partner[h]];
                if w == u {
                    // flips never change the status of a loop
                    if self.twists[e] {
                        return None;
                    }
                    continue;
                }
                let want = fu ^ self.twists[e];
                match flip[w] {
                    None => {
                        flip[w] = Some(want);
                        queue.push_back(w);
                    }
                    Some(fw) if fw != want => return None,
                    Some(_) => {}
                }
            }
        }
        Some(flip.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_orientable(&self) -> bool {
        self.orienting_flips().is_some()
    }

    /// Reverses the convention at `v`: its rotation is reversed and every
    /// non-loop edge at `v` changes twist status. When `v` is the root vertex
    /// the root side bit is relabelled so the rooted map is unchanged.
    pub fn flip_vertex(&self, v: VertexId) -> Result<RibbonMap, MapError> {
        if v >= self.vertex_count() {
            return Err(MapError::UnknownVertex(v));
        }
        let mut flags = vec![false; self.vertex_count()];
        flags[v] = true;
        Ok(self.flip_vertices(&flags))
    }

    /// Flips every vertex `u` with `flags[u]`.
    pub fn flip_vertices(&self, flags: &[bool]) -> RibbonMap {
        let mut out = self.clone();
        for (u, &f) in flags.iter().enumerate() {
            if !f {
                continue;
            }
            let rot = &mut out.rotation[u];
            rot.reverse();
            for (i, &h) in rot.iter().enumerate() {
                out.slot[h] = i;
            }
        }
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let (va, vb) = (self.vertex_of[a], self.vertex_of[b]);
            if va != vb && (flags[va] ^ flags[vb]) {
                out.twists[e] = !out.twists[e];
            }
        }
        if flags[self.root_vertex()] {
            out.root.side ^= 1;
        }
        out
    }

    /// Finds flips turning `self` into `other`, if any. Both maps must share
    /// their pairing, vertex partition and root half-edge.
    pub fn flip_equivalence(&self, other: &RibbonMap) -> Result<Option<Vec<bool>>, MapError> {
        if self.edges != other.edges
            || self.vertex_count() != other.vertex_count()
            || self.root.half_edge != other.root.half_edge
        {
            return Err(MapError::StructuralMismatch);
        }
        // other's vertex for each of our vertices
        let mut vmap = vec![usize::MAX; self.vertex_count()];
        for (v, rot) in self.rotation.iter().enumerate() {
            let w = other.vertex_of[rot[0]];
            if rot.iter().any(|&h| other.vertex_of[h] != w)
                || other.rotation[w].len() != rot.len()
            {
                return Err(MapError::StructuralMismatch);
            }
            vmap[v] = w;
        }

        // fixed bit per vertex from the rotations; None = free
        let mut fixed: Vec<Option<bool>> = Vec::with_capacity(self.vertex_count());
        for (v, rot) in self.rotation.iter().enumerate() {
            let theirs = &other.rotation[vmap[v]];
            let same = cyclic_eq(rot, theirs, false);
            let reversed = cyclic_eq(rot, theirs, true);
            fixed.push(match (same, reversed) {
                (true, true) => None,
                (true, false) => Some(false),
                (false, true) => Some(true),
                (false, false) => return Ok(None),
            });
        }

        // parity constraints: flip(u) ^ flip(w) = twist differs
        let nv = self.vertex_count();
        let mut adj: Vec<Vec<(VertexId, bool)>> = vec![Vec::new(); nv];
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let differs = self.twists[e] != other.twists[e];
            let (u, w) = (self.vertex_of[a], self.vertex_of[b]);
            if u == w {
                if differs {
                    return Ok(None);
                }
            } else {
                adj[u].push((w, differs));
                adj[w].push((u, differs));
            }
        }
        let root_v = self.root_vertex();
        let root_flip = self.root.side != other.root.side;
        match fixed[root_v] {
            Some(f) if f != root_flip => return Ok(None),
            _ => fixed[root_v] = Some(root_flip),
        }

        let mut assign: Vec<Option<bool>> = vec![None; nv];
        for start in 0..nv {
            if assign[start].is_some() {
                continue;
            }
            // collect the component with relative parities
            let mut comp = vec![(start, false)];
            let mut rel: Vec<Option<bool>> = vec![None; nv];
            rel[start] = Some(false);
            let mut i = 0;
            while i < comp.len() {
                let (u, pu) = comp[i];
                i += 1;
                for &(w, d) in &adj[u] {
                    let pw = pu ^ d;
                    match rel[w] {
                        None => {
                            rel[w] = Some(pw);
                            comp.push((w, pw));
                        }
                        Some(x) if x != pw => return Ok(None),
                        Some(_) => {}
                    }
                }
            }
            let mut base: Option<bool> = None;
            for &(u, pu) in &comp {
                if let Some(f) = fixed[u] {
                    let b = f ^ pu;
                    match base {
                        None => base = Some(b),
                        Some(x) if x != b => return Ok(None),
                        Some(_) => {}
                    }
                }
            }
            let base = base.unwrap_or(false);
            for &(u, pu) in &comp {
                assign[u] = Some(base ^ pu);
            }
        }
        Ok(Some(assign.into_iter().map(Option::unwrap).collect()))
    }

    pub fn flip_equivalent(&self, other: &RibbonMap) -> Result<bool, MapError> {
        Ok(self.flip_equivalence(other)?.is_some())
    }

    /// Compares two maps whose vertex ids may differ but whose half-edges,
    /// pairing and vertex partition agree.
    pub fn same_map_as(&self, other: &RibbonMap) -> bool {
        match other.renumber_vertices_like(self) {
            Some(o) => self.flip_equivalent(&o).unwrap_or(false),
            None => false,
        }
    }

    /// Renumbers the vertices of `self` to match the vertex ids of `like`.
    fn renumber_vertices_like(&self, like: &RibbonMap) -> Option<RibbonMap> {
        if self.vertex_count() != like.vertex_count()
            || self.half_edge_count() != like.half_edge_count()
        {
            return None;
        }
        let mut rotation = vec![Vec::new(); self.vertex_count()];
        for rot in &self.rotation {
            let target = like.vertex_of[rot[0]];
            if !rotation[target].is_empty() {
                return None;
            }
            rotation[target] = rot.clone();
        }
        RibbonMap::with_twist_flags(self.edges.clone(), rotation, &self.twists, self.root).ok()
    }

    /// Degree-1 vertices in increasing id order.
    pub fn leaves(&self) -> Vec<VertexId> {
        (0..self.vertex_count())
            .filter(|&v| self.degree(v) == 1)
            .collect()
    }

    /// All vertices have degree 1 or 3 and the root vertex is a leaf.
    pub fn is_precubic(&self) -> bool {
        self.degree(self.root_vertex()) == 1
            && self.rotation.iter().all(|r| r.len() == 1 || r.len() == 3)
    }

    /// Debug aid: the underlying graph in Graphviz format, twists dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph umap {\n");
        for v in 0..self.vertex_count() {
            let shape = if v == self.root_vertex() { "doublecircle" } else { "circle" };
            out.push_str(&format!("  v{v} [shape={shape}];\n"));
        }
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let style = if self.twists[e] { " [style=dashed]" } else { "" };
            out.push_str(&format!(
                "  v{} -- v{}{}; // e{e}\n",
                self.vertex_of[a], self.vertex_of[b], style
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn cyclic_eq(a: &[HalfEdge], b: &[HalfEdge], reversed: bool) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let Some(off) = b.iter().position(|&h| h == a[0]) else {
        return false;
    };
    (0..n).all(|i| {
        let j = if reversed { (off + n - i) % n } else { (off + i) % n };
        a[i] == b[j]
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn untwisted_loop() -> RibbonMap {
        RibbonMap::new(vec![[0, 1]], vec![vec![0, 1]], [], Root::new(0, 0)).unwrap()
    }

    pub fn twisted_loop() -> RibbonMap {
        RibbonMap::new(vec![[0, 1]], vec![vec![0, 1]], [0], Root::new(0, 0)).unwrap()
    }

    pub fn one_edge_tree() -> RibbonMap {
        RibbonMap::new(vec![[0, 1]], vec![vec![0], vec![1]], [], Root::new(0, 0)).unwrap()
    }

    /// One vertex with two interleaved untwisted loops `a b a b`.
    pub fn torus() -> RibbonMap {
        RibbonMap::new(
            vec![[0, 2], [1, 3]],
            vec![vec![0, 1, 2, 3]],
            [],
            Root::new(0, 0),
        )
        .unwrap()
    }

    /// Path with two edges rooted at a leaf.
    pub fn path2() -> RibbonMap {
        RibbonMap::new(
            vec![[0, 1], [2, 3]],
            vec![vec![0], vec![1, 2], vec![3]],
            [],
            Root::new(0, 0),
        )
        .unwrap()
    }

    /// Root leaf joined to a node carrying a twisted loop.
    pub fn projective_precubic() -> RibbonMap {
        RibbonMap::new(
            vec![[0, 1], [2, 3]],
            vec![vec![0], vec![1, 2, 3]],
            [1],
            Root::new(0, 0),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validate_accepts_rooted_loop() {
        assert!(RibbonMap::validate(&[[0, 1]], &[vec![0, 1]], &[], Root::new(0, 1)).is_ok());
    }

    #[test]
    fn validate_rejects_repeated_pairing() {
        let err = RibbonMap::validate(
            &[[0, 1], [1, 2]],
            &[vec![0, 1, 2, 3]],
            &[],
            Root::new(0, 0),
        )
        .unwrap_err();
        assert_eq!(err, Violation::PairingNotInvolution(1));
        assert!(err.to_string().contains("pairing not an involution"));
    }

    #[test]
    fn validate_rejects_disconnected() {
        let err = RibbonMap::validate(
            &[[0, 1], [2, 3]],
            &[vec![0, 1], vec![2, 3]],
            &[],
            Root::new(0, 0),
        )
        .unwrap_err();
        assert_eq!(err, Violation::Disconnected);
        assert_eq!(err.to_string(), "graph not connected");
    }

    #[test]
    fn validate_rejects_bad_root_and_twists() {
        let rot = [vec![0, 1]];
        assert_eq!(
            RibbonMap::validate(&[[0, 1]], &rot, &[], Root::new(2, 0)),
            Err(Violation::RootOutOfRange(2))
        );
        assert_eq!(
            RibbonMap::validate(&[[0, 1]], &rot, &[], Root::new(0, 2)),
            Err(Violation::RootSide(2))
        );
        assert_eq!(
            RibbonMap::validate(&[[0, 1]], &rot, &[1], Root::new(0, 0)),
            Err(Violation::TwistOutOfRange(1))
        );
        assert_eq!(
            RibbonMap::validate(&[[0, 1]], &[vec![0]], &[], Root::new(0, 0)),
            Err(Violation::RotationMissing(1))
        );
    }

    #[test]
    fn face_counts() {
        assert_eq!(untwisted_loop().face_count(), 2);
        assert_eq!(twisted_loop().face_count(), 1);
        assert_eq!(torus().face_count(), 1);
        assert_eq!(one_edge_tree().face_count(), 1);
    }

    #[test]
    fn trace_partitions_half_edge_sides() {
        for m in [untwisted_loop(), twisted_loop(), torus(), path2(), projective_precubic()] {
            let trace = m.trace_faces();
            assert_eq!(trace.step_count(), 4 * m.edge_count());
            let mut seen = std::collections::HashSet::new();
            for step in trace.faces.iter().flatten() {
                assert!(seen.insert(*step), "{step:?} visited twice");
            }
        }
    }

    #[test]
    fn euler_types() {
        assert_eq!(twisted_loop().euler_type(), HalfType { twice_h: 1, orientable: false });
        assert_eq!(one_edge_tree().euler_type(), HalfType { twice_h: 0, orientable: true });
        assert_eq!(torus().euler_type(), HalfType { twice_h: 2, orientable: true });
        assert_eq!(projective_precubic().euler_type().twice_h, 1);
    }

    #[test]
    fn orientability() {
        let twisted_tree =
            RibbonMap::new(vec![[0, 1]], vec![vec![0], vec![1]], [0], Root::new(0, 0)).unwrap();
        assert!(twisted_tree.is_orientable());
        assert!(!twisted_loop().is_orientable());
        assert!(torus().is_orientable());
    }

    #[test]
    fn flips() {
        let m = path2();
        let flipped = m.flip_vertex(2).unwrap();
        assert_eq!(flipped.rotation(2), m.rotation(2));
        assert_eq!(flipped.twists(), vec![1]);

        let twisted_tree =
            RibbonMap::new(vec![[0, 1]], vec![vec![0], vec![1]], [0], Root::new(0, 0)).unwrap();
        assert!(twisted_tree.flip_vertex(1).unwrap().twists().is_empty());

        let tl = twisted_loop();
        assert_eq!(tl.flip_vertex(0).unwrap().twists(), vec![0]);
        assert_eq!(m.flip_vertex(3), Err(MapError::UnknownVertex(3)));
    }

    #[test]
    fn flip_equivalence_examples() {
        let m = projective_precubic();
        for v in 0..m.vertex_count() {
            let f = m.flip_vertex(v).unwrap();
            let flips = m.flip_equivalence(&f).unwrap().expect("flip-equivalent");
            assert_eq!(m.flip_vertices(&flips), f);
        }
        assert!(!twisted_loop().flip_equivalent(&untwisted_loop()).unwrap());

        let twisted_tree =
            RibbonMap::new(vec![[0, 1]], vec![vec![0], vec![1]], [0], Root::new(0, 0)).unwrap();
        assert!(twisted_tree.flip_equivalent(&one_edge_tree()).unwrap());

        assert_eq!(
            one_edge_tree().flip_equivalent(&twisted_loop()),
            Err(MapError::StructuralMismatch)
        );
    }

    #[test]
    fn flipping_the_root_vertex_keeps_the_tour_start() {
        let m = torus();
        let f = m.flip_vertex(0).unwrap();
        assert_eq!(f.root().side, 1);
        assert_eq!(f.face_count(), 1);
    }
}
