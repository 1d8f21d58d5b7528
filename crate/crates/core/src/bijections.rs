//! Opening and gluing of intertwined nodes, the twist-permuting map `Φ` and
//! the averaging involution built from it, and leaf deletion/insertion on
//! projective maps.
//!
//! Half-edge ids survive every operation here except leaf deletion, which
//! compacts ids. Opening keeps the input convention; gluing and `Φ` return
//! canonically oriented maps.

use serde::Serialize;
use thiserror::Error;

use crate::map::{EdgeId, HalfEdge, RibbonMap, Root, VertexId, Violation};
use crate::unicellular::{
    self, canonical_orientation, classify, is_canonical, Flavor, NodeKind, UnicellularError,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("vertex {0} is not intertwined")]
    NotIntertwined(VertexId),
    #[error("vertex {0} is not a leaf")]
    NotLeaf(VertexId),
    #[error("vertex {0} is the root leaf")]
    RootLeaf(VertexId),
    #[error("marked leaves must be distinct")]
    RepeatedLeaf,
    #[error("marked leaves are not in tour order")]
    NotInTourOrder,
    #[error("map is orientable: it has no twists")]
    Orientable,
    #[error("map is not canonically oriented")]
    NotCanonical,
    #[error("expected a map of type 2h = {expected}, found {found}")]
    WrongType { expected: u32, found: u32 },
    #[error("edge-side marker ({edge}, {side}) does not exist")]
    InvalidMarker { edge: EdgeId, side: u8 },
    #[error("face walk of the cut graph does not return to a bud")]
    NoBud,
    #[error(transparent)]
    Unicellular(#[from] UnicellularError),
    #[error("result is not a valid map: {0}")]
    Invalid(#[from] Violation),
}

/// A precubic unicellular map with three distinct non-root leaves in tour order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedTriple {
    pub map: RibbonMap,
    pub leaves: [VertexId; 3],
}

impl MarkedTriple {
    /// Checks the leaves and their tour order.
    pub fn new(map: RibbonMap, leaves: [VertexId; 3]) -> Result<Self, BijectionError> {
        if !map.is_precubic() {
            return Err(UnicellularError::NotPrecubic.into());
        }
        for &v in &leaves {
            if v >= map.vertex_count() {
                return Err(BijectionError::UnknownVertex(v));
            }
            if map.degree(v) != 1 {
                return Err(BijectionError::NotLeaf(v));
            }
            if v == map.root_vertex() {
                return Err(BijectionError::RootLeaf(v));
            }
        }
        if leaves[0] == leaves[1] || leaves[1] == leaves[2] || leaves[0] == leaves[2] {
            return Err(BijectionError::RepeatedLeaf);
        }
        let tour = unicellular::tour(&map)?;
        let label = |v: VertexId| tour.label(map.rotation(v)[0]);
        if !(label(leaves[0]) < label(leaves[1]) && label(leaves[1]) < label(leaves[2])) {
            return Err(BijectionError::NotInTourOrder);
        }
        Ok(MarkedTriple { map, leaves })
    }

    /// Leaves sorted into tour order.
    pub fn sorted(map: RibbonMap, mut leaves: [VertexId; 3]) -> Result<Self, BijectionError> {
        let tour = unicellular::tour(&map)?;
        leaves.sort_by_key(|&v| map.rotation(v).first().map(|&h| tour.label(h)));
        MarkedTriple::new(map, leaves)
    }

    /// Half-edges of the three leaves.
    pub fn half_edges(&self) -> [HalfEdge; 3] {
        self.leaves.map(|v| self.map.rotation(v)[0])
    }

    /// Every marked triple of a precubic unicellular map.
    pub fn all(map: &RibbonMap) -> Result<Vec<MarkedTriple>, BijectionError> {
        let tour = unicellular::tour(map)?;
        let root = map.root_vertex();
        let mut leaves: Vec<VertexId> = map.leaves().into_iter().filter(|&v| v != root).collect();
        leaves.sort_by_key(|&v| tour.label(map.rotation(v)[0]));
        let mut out = Vec::new();
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                for k in j + 1..leaves.len() {
                    out.push(MarkedTriple {
                        map: map.clone(),
                        leaves: [leaves[i], leaves[j], leaves[k]],
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Result of opening a node: the marked map and the flavor of the node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opened {
    pub triple: MarkedTriple,
    pub flavor: Flavor,
}

/// Splits the intertwined node `v` of a canonically oriented precubic
/// unicellular map into three leaves. The leaf carrying the first half-edge of
/// `v`'s rotation keeps the id `v`; the other two get the next free ids.
pub fn open(map: &RibbonMap, v: VertexId) -> Result<Opened, BijectionError> {
    if v >= map.vertex_count() {
        return Err(BijectionError::UnknownVertex(v));
    }
    let c = classify(map)?;
    let NodeKind::Intertwined(flavor) = c.report.nodes[v] else {
        return Err(BijectionError::NotIntertwined(v));
    };
    let (edges, mut rotation, twists, root) = map.clone().into_parts();
    let rot = std::mem::take(&mut rotation[v]);
    let next = rotation.len();
    rotation[v] = vec![rot[0]];
    rotation.push(vec![rot[1]]);
    rotation.push(vec![rot[2]]);
    let opened = RibbonMap::with_twist_flags(edges, rotation, &twists, root)?;
    let triple = MarkedTriple::sorted(opened, [v, next, next + 1])?;
    Ok(Opened { triple, flavor })
}

/// Counterclockwise order of the three leaf half-edges at the glued vertex
/// (indices into the tour-ordered triple) and the leaf edges whose twist
/// status changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GlueRule {
    pub order: [usize; 3],
    pub toggle: [bool; 3],
}

impl GlueRule {
    pub fn of(flavor: Flavor) -> GlueRule {
        match flavor {
            Flavor::A => GlueRule {
                order: [0, 1, 2],
                toggle: [false; 3],
            },
            Flavor::B => GlueRule {
                order: [0, 2, 1],
                toggle: [true, true, false],
            },
            Flavor::C => GlueRule {
                order: [0, 2, 1],
                toggle: [false, true, true],
            },
            Flavor::D => GlueRule {
                order: [0, 2, 1],
                toggle: [true, false, true],
            },
        }
    }

    /// The same gluing seen with the new vertex flipped.
    pub fn flipped(self) -> GlueRule {
        let [x, y, z] = self.order;
        GlueRule {
            order: [x, z, y],
            toggle: self.toggle.map(|t| !t),
        }
    }

    /// All 16 candidates: two cyclic orders times eight twist subsets.
    pub fn candidates() -> Vec<GlueRule> {
        let mut out = Vec::new();
        for order in [[0, 1, 2], [0, 2, 1]] {
            for mask in 0..8u8 {
                out.push(GlueRule {
                    order,
                    toggle: [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0],
                });
            }
        }
        out
    }
}

/// Merges the three marked leaves into one vertex of the given flavor. The
/// new vertex takes the smallest of the three ids and the remaining ids are
/// compacted. The result is canonically oriented.
pub fn glue(triple: &MarkedTriple, flavor: Flavor) -> Result<RibbonMap, BijectionError> {
    glue_with(triple, GlueRule::of(flavor))
}

pub fn glue_with(triple: &MarkedTriple, rule: GlueRule) -> Result<RibbonMap, BijectionError> {
    let MarkedTriple { map, leaves } = MarkedTriple::new(triple.map.clone(), triple.leaves)?;
    let map = canonical_orientation(&map)?;
    let hs = leaves.map(|v| map.rotation(v)[0]);
    let merged = *leaves.iter().min().unwrap();
    let (edges, rotation, mut twists, root) = map.clone().into_parts();
    for (i, &h) in hs.iter().enumerate() {
        if rule.toggle[i] {
            let e = map.edge_of(h);
            twists[e] = !twists[e];
        }
    }
    let new_rotation: Vec<Vec<HalfEdge>> = rotation
        .into_iter()
        .enumerate()
        .filter_map(|(u, rot)| {
            if u == merged {
                Some(rule.order.iter().map(|&i| hs[i]).collect())
            } else if leaves.contains(&u) {
                None
            } else {
                Some(rot)
            }
        })
        .collect();
    let glued = RibbonMap::with_twist_flags(edges, new_rotation, &twists, root)?;
    Ok(canonical_orientation(&glued)?)
}

fn check_phi_input(map: &RibbonMap) -> Result<(), BijectionError> {
    if map.twist_count() == 0 {
        return Err(BijectionError::Orientable);
    }
    if !map.is_precubic() {
        return Err(UnicellularError::NotPrecubic.into());
    }
    if !is_canonical(map)? {
        return Err(BijectionError::NotCanonical);
    }
    Ok(())
}

/// Bud following each half-edge of a twist when the twists are cut and the
/// faces of the remaining graph are walked with every corner on the left.
/// `None` for half-edges of untwisted edges.
pub fn bud_successor(map: &RibbonMap) -> Result<Vec<Option<HalfEdge>>, BijectionError> {
    let n = map.half_edge_count();
    let is_bud = |h: HalfEdge| map.is_twist(map.edge_of(h));
    let mut next = vec![None; n];
    for b in (0..n).filter(|&b| is_bud(b)) {
        let mut x = map.succ(b);
        let mut steps = 0;
        while !is_bud(x) {
            x = map.succ(map.partner(x));
            steps += 1;
            if steps > n {
                return Err(BijectionError::NoBud);
            }
        }
        next[b] = Some(x);
    }
    Ok(next)
}

fn regraft(map: &RibbonMap, sigma: &[Option<HalfEdge>]) -> Result<RibbonMap, BijectionError> {
    let (mut edges, rotation, twists, root) = map.clone().into_parts();
    for (e, pair) in edges.iter_mut().enumerate() {
        if twists[e] {
            *pair = pair.map(|b| sigma[b].expect("buds have successors"));
        }
    }
    Ok(RibbonMap::with_twist_flags(edges, rotation, &twists, root)?)
}

/// Replaces every twist `{b, b'}` by `{σ(b), σ(b')}`. Edge ids are kept.
pub fn phi(map: &RibbonMap) -> Result<RibbonMap, BijectionError> {
    check_phi_input(map)?;
    regraft(map, &bud_successor(map)?)
}

/// Replaces every twist `{b, b'}` by `{σ⁻¹(b), σ⁻¹(b')}`; inverse of [`phi`].
pub fn phi_inverse(map: &RibbonMap) -> Result<RibbonMap, BijectionError> {
    check_phi_input(map)?;
    let sigma = bud_successor(map)?;
    let mut inverse = vec![None; sigma.len()];
    for (b, s) in sigma.iter().enumerate() {
        if let Some(s) = *s {
            inverse[s] = Some(b);
        }
    }
    regraft(map, &inverse)
}

/// `phi` when the map has more than `2h - 1` intertwined nodes, `phi_inverse`
/// when it has fewer, identity otherwise.
pub fn averaging_involution(map: &RibbonMap) -> Result<RibbonMap, BijectionError> {
    check_phi_input(map)?;
    let c = classify(map)?;
    let balance = c.twice_h as usize - 1;
    match c.report.tau.cmp(&balance) {
        std::cmp::Ordering::Greater => phi(map),
        std::cmp::Ordering::Less => phi_inverse(map),
        std::cmp::Ordering::Equal => Ok(map.clone()),
    }
}

/// Buds labelled `1..=2k` from the tour, with `σ`, the twist involution `α`
/// and `r = σ⁻¹(1)`, all on labels. Index `i - 1` holds the value at label `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudSystem {
    pub buds: Vec<HalfEdge>,
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
    pub r: usize,
}

impl BudSystem {
    /// Labels bud `i` (odd) by the half-edge left at the `i`-th twist
    /// crossing of the tour and bud `i + 1` by the half-edge reached.
    pub fn of(map: &RibbonMap) -> Result<BudSystem, BijectionError> {
        check_phi_input(map)?;
        let tour = unicellular::tour(map)?;
        let crossings: Vec<_> = tour.steps.iter().filter(|s| s.twisted).collect();
        let mut buds = Vec::with_capacity(crossings.len());
        for (j, s) in crossings.iter().enumerate() {
            if j % 2 == 0 {
                buds.push(s.leave);
                buds.push(s.arrive);
            }
        }
        let mut label = vec![0; map.half_edge_count()];
        for (i, &b) in buds.iter().enumerate() {
            if label[b] != 0 {
                return Err(BijectionError::NoBud);
            }
            label[b] = i + 1;
        }
        let succ = bud_successor(map)?;
        let sigma = buds.iter().map(|&b| label[succ[b].unwrap()]).collect::<Vec<_>>();
        let alpha = buds.iter().map(|&b| label[map.partner(b)]).collect();
        let r = sigma.iter().position(|&s| s == 1).unwrap() + 1;
        Ok(BudSystem {
            buds,
            sigma,
            alpha,
            r,
        })
    }

    /// `σ` sends every odd label to an even one.
    pub fn odd_to_even(&self) -> bool {
        (1..=self.sigma.len())
            .step_by(2)
            .all(|i| self.sigma[i - 1] % 2 == 0)
    }

    /// `α(i) = i + 1` for every odd label.
    pub fn alpha_pairs_consecutive(&self) -> bool {
        (1..=self.alpha.len())
            .step_by(2)
            .all(|i| self.alpha[i - 1] == i + 1)
    }
}

/// An edge-side: side `side` of the smaller half-edge of edge `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Marker {
    pub edge: EdgeId,
    pub side: u8,
}

impl Marker {
    /// Every edge-side, two per edge.
    pub fn all(map: &RibbonMap) -> Vec<Marker> {
        (0..map.edge_count())
            .flat_map(|edge| [0, 1].map(|side| Marker { edge, side }))
            .collect()
    }
}

fn check_projective(map: &RibbonMap) -> Result<(), BijectionError> {
    let ty = map.euler_type();
    if ty.twice_h != 1 {
        return Err(BijectionError::WrongType {
            expected: 1,
            found: ty.twice_h,
        });
    }
    if !map.is_precubic() {
        return Err(UnicellularError::NotPrecubic.into());
    }
    Ok(())
}

/// Removes a non-root leaf of a precubic projective map and merges the two
/// other edges at its neighbour. Returns the smaller map and the edge-side
/// where the leaf hung.
pub fn remy_delete(map: &RibbonMap, leaf: VertexId) -> Result<(RibbonMap, Marker), BijectionError> {
    check_projective(map)?;
    if leaf >= map.vertex_count() {
        return Err(BijectionError::UnknownVertex(leaf));
    }
    if map.degree(leaf) != 1 {
        return Err(BijectionError::NotLeaf(leaf));
    }
    if leaf == map.root_vertex() {
        return Err(BijectionError::RootLeaf(leaf));
    }
    let l = map.rotation(leaf)[0];
    let u_l = map.partner(l);
    let u = map.vertex_of(u_l);
    let others: Vec<HalfEdge> = map.rotation(u).iter().copied().filter(|&h| h != u_l).collect();
    let (u_a, u_b) = if map.edge_of(others[0]) < map.edge_of(others[1]) {
        (others[0], others[1])
    } else {
        (others[1], others[0])
    };
    let (e_a, e_b) = (map.edge_of(u_a), map.edge_of(u_b));
    let (a, b) = (map.partner(u_a), map.partner(u_b));
    // the marker refers to the smaller outer half-edge of the merged edge
    let inner = if a < b { u_a } else { u_b };
    let arrive_forward = !map.is_twist(map.edge_of(inner));
    let turn = if arrive_forward { map.succ(inner) } else { map.pred(inner) };
    let side = u8::from(turn != u_l);

    let removed_he = [u_a, u_b, u_l, l];
    let mut he_index = vec![usize::MAX; map.half_edge_count()];
    let mut next = 0;
    for (h, slot) in he_index.iter_mut().enumerate() {
        if !removed_he.contains(&h) {
            *slot = next;
            next += 1;
        }
    }
    let removed_edges = [e_b, map.edge_of(l)];
    let mut edges = Vec::new();
    let mut twists = Vec::new();
    let mut merged_id = 0;
    for (e, &[x, y]) in map.edges().iter().enumerate() {
        if removed_edges.contains(&e) {
            continue;
        }
        if e == e_a {
            merged_id = edges.len();
            edges.push([he_index[a], he_index[b]]);
            twists.push(map.is_twist(e_a) ^ map.is_twist(e_b));
        } else {
            edges.push([he_index[x], he_index[y]]);
            twists.push(map.is_twist(e));
        }
    }
    let rotation: Vec<Vec<HalfEdge>> = map
        .rotations()
        .iter()
        .enumerate()
        .filter(|&(v, _)| v != u && v != leaf)
        .map(|(_, rot)| rot.iter().map(|&h| he_index[h]).collect())
        .collect();
    let root = map.root();
    let root = Root::new(he_index[root.half_edge], root.side);
    let smaller = RibbonMap::with_twist_flags(edges, rotation, &twists, root)?;
    Ok((
        smaller,
        Marker {
            edge: merged_id,
            side,
        },
    ))
}

/// Subdivides the marked edge and hangs a new leaf on the marked side. The
/// new vertices get the two next ids, the new leaf being the last.
pub fn remy_insert(map: &RibbonMap, marker: Marker) -> Result<RibbonMap, BijectionError> {
    check_projective(map)?;
    let Marker { edge: t, side } = marker;
    if t >= map.edge_count() || side > 1 {
        return Err(BijectionError::InvalidMarker { edge: t, side });
    }
    let e = map.edge_count();
    let (mut edges, mut rotation, mut twists, root) = map.clone().into_parts();
    let [a, b] = edges[t];
    let (u_a, u_b, u_l, l) = (2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3);
    let twisted = twists[t];
    edges[t] = [a, u_a];
    twists[t] = false;
    edges.push([u_b, b]);
    twists.push(twisted);
    edges.push([u_l, l]);
    twists.push(false);
    rotation.push(if side == 0 {
        vec![u_a, u_l, u_b]
    } else {
        vec![u_a, u_b, u_l]
    });
    rotation.push(vec![l]);
    Ok(RibbonMap::with_twist_flags(edges, rotation, &twists, root)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::fixtures::projective_precubic;

    #[test]
    fn remy_round_trip_on_smallest_map() {
        let m = projective_precubic();
        for marker in Marker::all(&m) {
            let big = remy_insert(&m, marker).unwrap();
            assert_eq!(big.face_count(), 1);
            assert!(big.is_precubic());
            let leaf = big.vertex_count() - 1;
            assert_eq!(remy_delete(&big, leaf).unwrap(), (m.clone(), marker));
        }
    }

    #[test]
    fn remy_rejects_bad_input() {
        let m = projective_precubic();
        assert_eq!(
            remy_insert(&m, Marker { edge: 5, side: 0 }),
            Err(BijectionError::InvalidMarker { edge: 5, side: 0 })
        );
        assert_eq!(remy_delete(&m, 0), Err(BijectionError::RootLeaf(0)));
        assert_eq!(remy_delete(&m, 1), Err(BijectionError::NotLeaf(1)));
    }

    #[test]
    fn phi_on_smallest_projective_map() {
        let m = projective_precubic();
        // a single twisted loop: σ swaps its buds, so phi fixes the map
        assert_eq!(phi(&m).unwrap(), m);
        let buds = BudSystem::of(&m).unwrap();
        assert_eq!(buds.buds.len(), 2);
        assert!(buds.odd_to_even());
        assert!(buds.alpha_pairs_consecutive());
    }

    /// Each flavor has exactly one gluing convention, up to flipping the new
    /// vertex, that produces a node of that flavor and is undone by opening.
    #[test]
    fn glue_rules_are_forced() {
        use crate::enumeration::{precubic_maps, DEFAULT_CAP};
        use crate::map::HalfType;
        let mut sources = precubic_maps(HalfType::new(0, true).unwrap(), 2, DEFAULT_CAP).unwrap();
        for small in precubic_maps(HalfType::new(1, false).unwrap(), 3, DEFAULT_CAP).unwrap() {
            for marker in Marker::all(&small) {
                sources.push(remy_insert(&small, marker).unwrap());
            }
        }
        let triples: Vec<MarkedTriple> = sources
            .iter()
            .flat_map(|m| MarkedTriple::all(m).unwrap())
            .collect();
        for rule in GlueRule::candidates() {
            let mut achieved: Option<Flavor> = None;
            let mut uniform = true;
            for t in &triples {
                let flavor = glue_with(t, rule).ok().and_then(|g| {
                    let hs = t.half_edges();
                    let w = g.vertex_of(hs[0]);
                    let o = open(&g, w).ok()?;
                    (o.triple.half_edges() == hs && o.triple.map.same_map_as(&t.map))
                        .then_some(o.flavor)
                });
                match (flavor, achieved) {
                    (Some(f), None) if uniform => achieved = Some(f),
                    (Some(f), Some(g)) if f == g => {}
                    _ => uniform = false,
                }
            }
            let expected = Flavor::ALL
                .into_iter()
                .find(|&f| rule == GlueRule::of(f) || rule == GlueRule::of(f).flipped());
            assert_eq!(uniform.then_some(achieved).flatten(), expected, "{rule:?}");
        }
    }

    #[test]
    fn open_rejects_plain_nodes() {
        assert_eq!(
            open(&projective_precubic(), 1).unwrap_err(),
            BijectionError::NotIntertwined(1)
        );
    }
}
