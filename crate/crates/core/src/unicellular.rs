//! Everything read off the tour of a one-face map.
//!
//! A corner is named by its counterclockwise-first half-edge: corner `h` is the
//! angular sector `(h, succ h)`. A leaf has the single corner `(h, h)`.

use serde::Serialize;
use thiserror::Error;

use crate::map::{EdgeId, HalfEdge, HalfType, Hand, RibbonMap, Root, VertexId, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UnicellularError {
    #[error("map is not unicellular ({0} faces)")]
    NotUnicellular(usize),
    #[error("canonical convention undefined: vertex {0} has even degree")]
    EvenDegree(VertexId),
    #[error("map is not precubic")]
    NotPrecubic,
    #[error("map is not canonically oriented: vertex {0} has a majority of right corners")]
    NotCanonical(VertexId),
    #[error("map is a tree, its core is empty")]
    EmptyCore,
    #[error("invalid map: {0}")]
    Invalid(#[from] Violation),
}

/// One corner of the tour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TourCorner {
    pub vertex: VertexId,
    /// Half-edge before the corner in counterclockwise order.
    pub pred: HalfEdge,
    /// Half-edge after the corner in counterclockwise order.
    pub succ: HalfEdge,
    pub hand: Hand,
    /// Position in the tour, starting at 1 for the root corner.
    pub label: usize,
}

/// The edge traversal that follows a corner of the tour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TourStep {
    pub leave: HalfEdge,
    pub leave_side: u8,
    pub arrive: HalfEdge,
    pub arrive_side: u8,
    pub twisted: bool,
}

/// Corners of a unicellular map in tour order, with the traversal after each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    pub corners: Vec<TourCorner>,
    pub steps: Vec<TourStep>,
    /// Tour label of corner `h` (the corner `(h, succ h)`).
    label_of: Vec<usize>,
}

impl Tour {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    /// Label of the corner whose counterclockwise-first half-edge is `h`.
    pub fn label(&self, h: HalfEdge) -> usize {
        self.label_of[h]
    }

    /// Corner record for the corner `(h, succ h)`.
    pub fn corner(&self, h: HalfEdge) -> &TourCorner {
        &self.corners[self.label_of[h] - 1]
    }

    /// Position of the step that passes along the edge-side `(h, side)`.
    pub fn step_along(&self, h: HalfEdge, side: u8) -> Option<usize> {
        self.steps.iter().position(|s| {
            (s.leave == h && s.leave_side == side) || (s.arrive == h && s.arrive_side == side)
        })
    }
}

/// Computes the tour from the root corner.
pub fn tour(map: &RibbonMap) -> Result<Tour, UnicellularError> {
    let n = map.half_edge_count();
    let Root { half_edge, side } = map.root();
    let start = (half_edge, side == 0);
    let (mut h, mut fwd) = start;
    let mut corner = if fwd { map.pred(h) } else { h };
    let mut corners = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    let mut label_of = vec![0; n];
    loop {
        if corners.len() == n || label_of[corner] != 0 {
            return Err(UnicellularError::NotUnicellular(map.face_count()));
        }
        let label = corners.len() + 1;
        label_of[corner] = label;
        corners.push(TourCorner {
            vertex: map.vertex_of(corner),
            pred: corner,
            succ: map.succ(corner),
            hand: if fwd { Hand::Left } else { Hand::Right },
            label,
        });
        let a = map.partner(h);
        let twisted = map.is_twist(map.edge_of(h));
        let (next, dir) = map.walk_step(h, fwd);
        steps.push(TourStep {
            leave: h,
            leave_side: u8::from(!fwd),
            arrive: a,
            arrive_side: u8::from(dir),
            twisted,
        });
        corner = if dir { a } else { map.pred(a) };
        h = next;
        fwd = dir;
        if (h, fwd) == start {
            break;
        }
    }
    if corners.len() != n {
        return Err(UnicellularError::NotUnicellular(map.face_count()));
    }
    Ok(Tour {
        corners,
        steps,
        label_of,
    })
}

/// Per-vertex `(left, right)` corner counts.
fn hand_counts(map: &RibbonMap, tour: &Tour) -> Vec<(usize, usize)> {
    let mut counts = vec![(0, 0); map.vertex_count()];
    for c in &tour.corners {
        match c.hand {
            Hand::Left => counts[c.vertex].0 += 1,
            Hand::Right => counts[c.vertex].1 += 1,
        }
    }
    counts
}

/// The flip-equivalent map in which every vertex has strictly more left than
/// right corners. Requires a unicellular map whose vertices all have odd degree.
pub fn canonical_orientation(map: &RibbonMap) -> Result<RibbonMap, UnicellularError> {
    if let Some(v) = (0..map.vertex_count()).find(|&v| map.degree(v) % 2 == 0) {
        return Err(UnicellularError::EvenDegree(v));
    }
    let t = tour(map)?;
    let flags: Vec<bool> = hand_counts(map, &t)
        .into_iter()
        .map(|(l, r)| r > l)
        .collect();
    if flags.iter().any(|&f| f) {
        Ok(map.flip_vertices(&flags))
    } else {
        Ok(map.clone())
    }
}

/// `true` when every vertex has a strict majority of left corners.
pub fn is_canonical(map: &RibbonMap) -> Result<bool, UnicellularError> {
    let t = tour(map)?;
    Ok(hand_counts(map, &t).into_iter().all(|(l, r)| l > r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeWay {
    TwoWay,
    OneWay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwistDirection {
    LeftToRight,
    RightToLeft,
}

/// Flavor of an intertwined node: `A` when all three corners are left,
/// otherwise the position (`c1`, `c2`, `c3` for `B`, `C`, `D`) of the right one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    A,
    B,
    C,
    D,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::A, Flavor::B, Flavor::C, Flavor::D];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Flavor::A),
            "B" | "b" => Ok(Flavor::B),
            "C" | "c" => Ok(Flavor::C),
            "D" | "d" => Ok(Flavor::D),
            _ => Err(format!("unknown flavor `{s}`")),
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf,
    Plain,
    Intertwined(Flavor),
}

/// Corners of a degree-3 vertex as `(c1, c2, c3)`: counterclockwise, `c1`
/// first in the tour. Each corner is named by its first half-edge.
pub fn ordered_corners(map: &RibbonMap, tour: &Tour, v: VertexId) -> [HalfEdge; 3] {
    let rot = map.rotation(v);
    debug_assert_eq!(rot.len(), 3);
    let first = (0..3).min_by_key(|&i| tour.label(rot[i])).unwrap();
    [rot[first], rot[(first + 1) % 3], rot[(first + 2) % 3]]
}

/// Intertwined-node data of a canonically oriented precubic unicellular map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwinedReport {
    pub nodes: Vec<NodeKind>,
    pub tau: usize,
    pub t_lr: usize,
    pub t_rl: usize,
    pub dsc: usize,
    pub asc: usize,
    pub flavors: [usize; 4],
}

impl IntertwinedReport {
    pub fn intertwined(&self) -> Vec<VertexId> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(v, k)| matches!(k, NodeKind::Intertwined(_)).then_some(v))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tour: Tour,
    pub twice_h: u32,
    pub ways: Vec<EdgeWay>,
    pub twist_directions: Vec<Option<TwistDirection>>,
    pub report: IntertwinedReport,
}

fn check_precubic_canonical(map: &RibbonMap, tour: &Tour) -> Result<(), UnicellularError> {
    if !map.is_precubic() {
        return Err(UnicellularError::NotPrecubic);
    }
    if let Some((v, _)) = hand_counts(map, tour)
        .into_iter()
        .enumerate()
        .find(|(_, (l, r))| r > l)
    {
        return Err(UnicellularError::NotCanonical(v));
    }
    Ok(())
}

/// Edge ways, twist directions and intertwined nodes of a canonically
/// oriented precubic unicellular map.
pub fn classify(map: &RibbonMap) -> Result<Classification, UnicellularError> {
    let tour = tour(map)?;
    check_precubic_canonical(map, &tour)?;

    let e = map.edge_count();
    let mut first_leave: Vec<Option<HalfEdge>> = vec![None; e];
    let mut ways = vec![EdgeWay::OneWay; e];
    for s in &tour.steps {
        let id = map.edge_of(s.leave);
        match first_leave[id] {
            None => first_leave[id] = Some(s.leave),
            Some(h) if h != s.leave => ways[id] = EdgeWay::TwoWay,
            Some(_) => {}
        }
    }

    let mut twist_directions = vec![None; e];
    let (mut t_lr, mut t_rl) = (0, 0);
    for (id, &[a, b]) in map.edges().iter().enumerate() {
        if !map.is_twist(id) {
            continue;
        }
        let first = [a, map.pred(a), b, map.pred(b)]
            .into_iter()
            .min_by_key(|&c| tour.label(c))
            .unwrap();
        let dir = match tour.corner(first).hand {
            Hand::Left => {
                t_lr += 1;
                TwistDirection::LeftToRight
            }
            Hand::Right => {
                t_rl += 1;
                TwistDirection::RightToLeft
            }
        };
        twist_directions[id] = Some(dir);
    }

    // a corner is a descent when the next corner counterclockwise has a
    // smaller or equal label
    let mut dsc = 0;
    for c in &tour.corners {
        if tour.label(map.succ(c.pred)) <= c.label {
            dsc += 1;
        }
    }
    let asc = 2 * e - dsc;

    let mut nodes = Vec::with_capacity(map.vertex_count());
    let mut flavors = [0; 4];
    let mut tau = 0;
    for v in 0..map.vertex_count() {
        if map.degree(v) == 1 {
            nodes.push(NodeKind::Leaf);
            continue;
        }
        let [c1, c2, c3] = ordered_corners(map, &tour, v);
        if tour.label(c3) < tour.label(c2) {
            let hands = [c1, c2, c3].map(|c| tour.corner(c).hand);
            let flavor = match hands {
                [Hand::Right, _, _] => Flavor::B,
                [_, Hand::Right, _] => Flavor::C,
                [_, _, Hand::Right] => Flavor::D,
                _ => Flavor::A,
            };
            flavors[flavor.index()] += 1;
            tau += 1;
            nodes.push(NodeKind::Intertwined(flavor));
        } else {
            nodes.push(NodeKind::Plain);
        }
    }

    let twice_h = (e + 1 - map.vertex_count()) as u32;
    Ok(Classification {
        tour,
        twice_h,
        ways,
        twist_directions,
        report: IntertwinedReport {
            nodes,
            tau,
            t_lr,
            t_rl,
            dsc,
            asc,
            flavors,
        },
    })
}

/// Checks `tau = 2h + T_RL - T_LR`.
pub fn trisection_identity(map: &RibbonMap) -> Result<bool, UnicellularError> {
    let c = classify(map)?;
    let r = &c.report;
    Ok(r.tau as i64 == c.twice_h as i64 + r.t_rl as i64 - r.t_lr as i64)
}

/// Number of intertwined nodes.
pub fn intertwined_count(map: &RibbonMap) -> Result<usize, UnicellularError> {
    Ok(classify(map)?.report.tau)
}

/// Core, scheme and dominance of a unicellular map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreScheme {
    pub core: RibbonMap,
    pub scheme: RibbonMap,
    pub dominant: bool,
}

/// Deletes leaves recursively, then replaces each maximal path through
/// degree-2 vertices by a single edge. Half-edges keep their relative order;
/// the new maps are rooted at their smallest half-edge, side 0.
pub fn core_scheme(map: &RibbonMap) -> Result<CoreScheme, UnicellularError> {
    let faces = map.face_count();
    if faces != 1 {
        return Err(UnicellularError::NotUnicellular(faces));
    }
    let nh = map.half_edge_count();
    let mut alive = vec![true; nh];
    let mut degree: Vec<usize> = (0..map.vertex_count()).map(|v| map.degree(v)).collect();
    let mut stack: Vec<VertexId> = (0..map.vertex_count()).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let h = *map.rotation(v).iter().find(|&&h| alive[h]).unwrap();
        let p = map.partner(h);
        alive[h] = false;
        alive[p] = false;
        degree[v] = 0;
        let w = map.vertex_of(p);
        degree[w] -= 1;
        if degree[w] == 1 {
            stack.push(w);
        }
    }
    if !alive.iter().any(|&a| a) {
        return Err(UnicellularError::EmptyCore);
    }

    let core = restrict(map, &alive)?;

    // scheme: walk from every half-edge at a branch vertex through degree-2 vertices
    let branch: Vec<bool> = (0..core.vertex_count()).map(|v| core.degree(v) >= 3).collect();
    let scheme = if !branch.iter().any(|&b| b) {
        // a single cycle collapses to one loop
        let parity = core.twist_count() % 2 == 1;
        let twists: Vec<EdgeId> = if parity { vec![0] } else { vec![] };
        RibbonMap::new(vec![[0, 1]], vec![vec![0, 1]], twists, Root::new(0, 0))?
    } else {
        let mut new_edges: Vec<([HalfEdge; 2], bool)> = Vec::new();
        let mut used = vec![false; core.half_edge_count()];
        for v in 0..core.vertex_count() {
            if !branch[v] {
                continue;
            }
            for &h in core.rotation(v) {
                if used[h] {
                    continue;
                }
                let mut parity = false;
                let mut cur = h;
                let end = loop {
                    parity ^= core.is_twist(core.edge_of(cur));
                    let p = core.partner(cur);
                    let w = core.vertex_of(p);
                    if branch[w] {
                        break p;
                    }
                    let rot = core.rotation(w);
                    cur = if rot[0] == p { rot[1] } else { rot[0] };
                };
                used[h] = true;
                used[end] = true;
                new_edges.push(([h, end], parity));
            }
        }
        let mut keep = vec![false; core.half_edge_count()];
        for ([a, b], _) in &new_edges {
            keep[*a] = true;
            keep[*b] = true;
        }
        let mut index = vec![usize::MAX; core.half_edge_count()];
        let mut next = 0;
        for (h, &k) in keep.iter().enumerate() {
            if k {
                index[h] = next;
                next += 1;
            }
        }
        let edges: Vec<[HalfEdge; 2]> = new_edges
            .iter()
            .map(|([a, b], _)| [index[*a], index[*b]])
            .collect();
        let twists: Vec<bool> = new_edges.iter().map(|(_, t)| *t).collect();
        let rotation: Vec<Vec<HalfEdge>> = (0..core.vertex_count())
            .filter(|&v| branch[v])
            .map(|v| core.rotation(v).iter().map(|&h| index[h]).collect())
            .collect();
        RibbonMap::with_twist_flags(edges, rotation, &twists, Root::new(0, 0))?
    };
    let dominant = (0..scheme.vertex_count()).all(|v| scheme.degree(v) == 3);
    Ok(CoreScheme {
        core,
        scheme,
        dominant,
    })
}

/// Keeps the half-edges flagged in `alive`, relabelled densely.
fn restrict(
    map: &RibbonMap,
    alive: &[bool],
) -> Result<RibbonMap, UnicellularError> {
    let mut index = vec![usize::MAX; alive.len()];
    let mut next = 0;
    for (h, &a) in alive.iter().enumerate() {
        if a {
            index[h] = next;
            next += 1;
        }
    }
    let mut edges = Vec::new();
    let mut twists = Vec::new();
    for (id, &[a, b]) in map.edges().iter().enumerate() {
        if alive[a] {
            edges.push([index[a], index[b]]);
            twists.push(map.is_twist(id));
        }
    }
    let rotation: Vec<Vec<HalfEdge>> = map
        .rotations()
        .iter()
        .map(|rot| rot.iter().filter(|&&h| alive[h]).map(|&h| index[h]).collect::<Vec<_>>())
        .filter(|rot| !rot.is_empty())
        .collect();
    Ok(RibbonMap::with_twist_flags(
        edges,
        rotation,
        &twists,
        Root::new(0, 0),
    )?)
}

/// One NDJSON record per map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub edges: usize,
    pub twice_h: u32,
    pub orientable: bool,
    pub tau: usize,
    pub t_lr: usize,
    pub t_rl: usize,
    pub dsc: usize,
    pub asc: usize,
    pub flavors: FlavorCounts,
    pub dominant: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct FlavorCounts {
    pub A: usize,
    pub B: usize,
    pub C: usize,
    pub D: usize,
}

impl From<[usize; 4]> for FlavorCounts {
    fn from(f: [usize; 4]) -> Self {
        FlavorCounts {
            A: f[0],
            B: f[1],
            C: f[2],
            D: f[3],
        }
    }
}

impl MapReport {
    /// Builds the report of a precubic unicellular map (any convention).
    pub fn of(map: &RibbonMap) -> Result<MapReport, UnicellularError> {
        let canon = canonical_orientation(map)?;
        let c = classify(&canon)?;
        let ty: HalfType = map.euler_type();
        let dominant = match core_scheme(&canon) {
            Ok(cs) => cs.dominant,
            Err(UnicellularError::EmptyCore) => false,
            Err(e) => return Err(e),
        };
        Ok(MapReport {
            edges: map.edge_count(),
            twice_h: ty.twice_h,
            orientable: ty.orientable,
            tau: c.report.tau,
            t_lr: c.report.t_lr,
            t_rl: c.report.t_rl,
            dsc: c.report.dsc,
            asc: c.report.asc,
            flavors: c.report.flavors.into(),
            dominant,
        })
    }

    pub fn to_ndjson(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::fixtures::*;

    #[test]
    fn tour_of_plane_path() {
        let t = tour(&path2()).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.corners.iter().all(|c| c.hand == Hand::Left));
        assert_eq!(t.corners[0].label, 1);
        assert_eq!(t.corners[0].vertex, 0);
    }

    #[test]
    fn tour_of_twisted_loop() {
        // leave 0 forward, cross the twist, arrive at 1 walking backward:
        // the second corner is (pred 1, 1) = (0, 1), a right corner
        let t = tour(&twisted_loop()).unwrap();
        let hands: Vec<Hand> = t.corners.iter().map(|c| c.hand).collect();
        assert_eq!(hands, vec![Hand::Left, Hand::Right]);
        assert_eq!(t.corners[0].pred, 1);
        assert_eq!(t.corners[1].pred, 0);
    }

    #[test]
    fn tour_of_projective_precubic() {
        let t = tour(&projective_precubic()).unwrap();
        let seq: Vec<(usize, Hand)> = t.corners.iter().map(|c| (c.pred, c.hand)).collect();
        assert_eq!(
            seq,
            vec![(0, Hand::Left), (1, Hand::Left), (2, Hand::Right), (3, Hand::Left)]
        );
    }

    #[test]
    fn tour_rejects_multiple_faces() {
        assert_eq!(
            tour(&untwisted_loop()),
            Err(UnicellularError::NotUnicellular(2))
        );
    }

    #[test]
    fn canonical_orientation_examples() {
        let m = projective_precubic();
        assert_eq!(canonical_orientation(&m).unwrap(), m);
        let flipped = m.flip_vertex(1).unwrap();
        assert_eq!(canonical_orientation(&flipped).unwrap(), m);
        // both conventions at the node lead to the one with two left corners
        for f in [m.clone(), flipped] {
            let c = canonical_orientation(&f).unwrap();
            let t = tour(&c).unwrap();
            let left = t.corners.iter().filter(|x| x.vertex == 1 && x.hand == Hand::Left).count();
            assert!(left >= 2);
        }
        assert_eq!(
            canonical_orientation(&twisted_loop()),
            Err(UnicellularError::EvenDegree(0))
        );
    }

    #[test]
    fn classify_projective_precubic() {
        let c = classify(&projective_precubic()).unwrap();
        assert_eq!(c.report.tau, 0);
        assert_eq!(c.report.t_lr, 1);
        assert_eq!(c.report.t_rl, 0);
        assert_eq!(c.ways[0], EdgeWay::TwoWay);
        assert_eq!(c.ways[1], EdgeWay::OneWay);
        assert!(trisection_identity(&projective_precubic()).unwrap());
    }

    #[test]
    fn classify_requires_canonical_precubic() {
        let m = projective_precubic().flip_vertex(1).unwrap();
        assert_eq!(classify(&m), Err(UnicellularError::NotCanonical(1)));
        assert_eq!(classify(&torus()), Err(UnicellularError::NotPrecubic));
    }

    #[test]
    fn plane_binary_tree_has_no_intertwined_nodes() {
        // root leaf - node - two leaves
        let m = RibbonMap::new(
            vec![[0, 1], [2, 3], [4, 5]],
            vec![vec![0], vec![1, 2, 4], vec![3], vec![5]],
            [],
            Root::new(0, 0),
        )
        .unwrap();
        let c = classify(&m).unwrap();
        assert_eq!((c.report.tau, c.report.t_lr, c.report.t_rl), (0, 0, 0));
        assert_eq!(c.report.dsc + c.report.asc, 6);
        assert!(trisection_identity(&m).unwrap());
    }

    #[test]
    fn core_scheme_examples() {
        let cs = core_scheme(&twisted_loop()).unwrap();
        assert_eq!(cs.core, twisted_loop());
        assert_eq!(cs.scheme, twisted_loop());
        assert!(!cs.dominant);

        let cs = core_scheme(&projective_precubic()).unwrap();
        assert_eq!(cs.core.edge_count(), 1);
        assert_eq!(cs.scheme.twists(), vec![0]);

        assert_eq!(core_scheme(&path2()), Err(UnicellularError::EmptyCore));
        let torus_cs = core_scheme(&torus()).unwrap();
        assert_eq!(torus_cs.scheme.euler_type().twice_h, 2);
    }

    #[test]
    fn report_serializes() {
        let r = MapReport::of(&projective_precubic()).unwrap();
        let json = r.to_ndjson();
        assert!(json.contains("\"twice_h\":1"));
        assert!(json.contains("\"flavors\":{\"A\":0,\"B\":0,\"C\":0,\"D\":0}"));
    }
}
