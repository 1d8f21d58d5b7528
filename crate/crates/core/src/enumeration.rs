//! Exhaustive enumeration of rooted unicellular maps by polygon gluings.
//!
//! A map with `n` edges is a `2n`-gon whose sides are identified in pairs.
//! Side `s` runs from polygon corner `p_s` to `p_{s+1}`. A pair `{i, j}` is
//! glued either in opposite directions (`p_i ~ p_{j+1}`, `p_{i+1} ~ p_j`, the
//! orientable gluing) or in the same direction (`p_i ~ p_j`,
//! `p_{i+1} ~ p_{j+1}`). The root is the corner `p_0`, walking along side 0.
//!
//! Matchings are produced by always pairing the smallest unmatched side, and
//! the direction bits of a matching by a binary counter, so every code has a
//! fixed position in the iteration. Work is split on the partner of side 0.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::map::{HalfEdge, HalfType, RibbonMap, Root};
use crate::unicellular::{self, UnicellularError};

/// Largest edge count enumerated without an explicit override.
pub const DEFAULT_CAP: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("{n} edges exceeds the enumeration cap of {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("a census needs at least one edge")]
    Empty,
    #[error("invalid gluing code: {0}")]
    InvalidCode(String),
    #[error(transparent)]
    Unicellular(#[from] UnicellularError),
}

/// A perfect matching of polygon sides plus one direction bit per pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GluingCode {
    partner: Vec<usize>,
    /// Indexed by pair, pairs ordered by their smaller side.
    same_direction: Vec<bool>,
}

impl GluingCode {
    pub fn new(partner: Vec<usize>, same_direction: Vec<bool>) -> Result<Self, EnumerationError> {
        let sides = partner.len();
        if sides == 0 || sides % 2 == 1 {
            return Err(EnumerationError::InvalidCode(format!(
                "{sides} sides cannot be paired"
            )));
        }
        for (s, &p) in partner.iter().enumerate() {
            if p >= sides || p == s || partner[p] != s {
                return Err(EnumerationError::InvalidCode(format!(
                    "side {s} is not matched by an involution"
                )));
            }
        }
        if same_direction.len() != sides / 2 {
            return Err(EnumerationError::InvalidCode(format!(
                "expected {} direction bits, got {}",
                sides / 2,
                same_direction.len()
            )));
        }
        Ok(GluingCode {
            partner,
            same_direction,
        })
    }

    /// Builds a code from pairs of sides and per-pair direction bits, pairs
    /// listed in any order; `same_direction[k]` belongs to `pairs[k]`.
    pub fn from_pairs(pairs: &[(usize, usize)], same_direction: &[bool]) -> Result<Self, EnumerationError> {
        let sides = 2 * pairs.len();
        let mut partner = vec![usize::MAX; sides];
        let mut bit_of = vec![false; sides];
        for (&(i, j), &b) in pairs.iter().zip(same_direction) {
            if i >= sides || j >= sides || partner[i] != usize::MAX || partner[j] != usize::MAX {
                return Err(EnumerationError::InvalidCode(format!("bad pair ({i}, {j})")));
            }
            partner[i] = j;
            partner[j] = i;
            bit_of[i.min(j)] = b;
        }
        let bits = (0..sides).filter(|&s| partner[s] > s).map(|s| bit_of[s]).collect();
        GluingCode::new(partner, bits)
    }

    pub fn edge_count(&self) -> usize {
        self.same_direction.len()
    }

    pub fn partner(&self, side: usize) -> usize {
        self.partner[side]
    }

    pub fn same_direction(&self) -> &[bool] {
        &self.same_direction
    }

    pub fn is_orientable(&self) -> bool {
        !self.same_direction.iter().any(|&b| b)
    }

    /// Pairs `(i, j)` with `i < j`, ordered by `i`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&s| self.partner[s] > s)
            .map(|s| (s, self.partner[s]))
            .collect()
    }

    /// Vertex data read off the polygon without building the map.
    pub fn summary(&self) -> CodeSummary {
        let sides = self.partner.len();
        if sides <= SMALL {
            let mut parent = [0u16; SMALL];
            self.corner_classes(&mut parent[..sides])
        } else {
            let mut parent = vec![0u16; sides];
            self.corner_classes(&mut parent)
        }
    }

    /// Union-find over polygon corners; `parent` has one slot per side.
    fn corner_classes(&self, parent: &mut [u16]) -> CodeSummary {
        let sides = parent.len();
        for (c, p) in parent.iter_mut().enumerate() {
            *p = c as u16;
        }
        let mut k = 0;
        for i in 0..sides {
            let j = self.partner[i];
            if j < i {
                continue;
            }
            let (i1, j1) = ((i + 1) % sides, (j + 1) % sides);
            if self.same_direction[k] {
                union(parent, i, j);
                union(parent, i1, j1);
            } else {
                union(parent, i, j1);
                union(parent, i1, j);
            }
            k += 1;
        }
        let mut size = [0u16; SMALL];
        let mut big;
        let size: &mut [u16] = if sides <= SMALL {
            &mut size[..sides]
        } else {
            big = vec![0u16; sides];
            &mut big
        };
        for c in 0..sides {
            size[find(parent, c)] += 1;
        }
        let mut vertex_count = 0;
        let mut cubic = true;
        for &s in size.iter() {
            if s > 0 {
                vertex_count += 1;
                cubic &= s == 1 || s == 3;
            }
        }
        let root_at_leaf = size[find(parent, 0)] == 1;
        CodeSummary {
            half_type: HalfType {
                twice_h: (sides / 2 + 1 - vertex_count) as u32,
                orientable: self.is_orientable(),
            },
            vertex_count,
            precubic: cubic && root_at_leaf,
            root_at_leaf,
        }
    }

    /// The rooted map glued from the polygon. Half-edges `2k` and `2k + 1`
    /// form the `k`-th pair; vertices are numbered by their first polygon
    /// corner. The root is half-edge 0, side 0.
    pub fn decode(&self) -> RibbonMap {
        let sides = self.partner.len();
        let n = sides / 2;
        // node 2s is the end of side s at p_s, node 2s + 1 the end at p_{s+1}
        let mut node_he = vec![0; 2 * sides];
        let mut k = 0;
        let mut pair_of = vec![0; sides];
        for i in 0..sides {
            let j = self.partner[i];
            if j < i {
                continue;
            }
            pair_of[i] = k;
            pair_of[j] = k;
            node_he[2 * i] = 2 * k;
            node_he[2 * i + 1] = 2 * k + 1;
            if self.same_direction[k] {
                node_he[2 * j] = 2 * k;
                node_he[2 * j + 1] = 2 * k + 1;
            } else {
                node_he[2 * j] = 2 * k + 1;
                node_he[2 * j + 1] = 2 * k;
            }
            k += 1;
        }
        let mut he_nodes = vec![[usize::MAX; 2]; sides];
        for (x, &h) in node_he.iter().enumerate() {
            let slot = usize::from(he_nodes[h][0] != usize::MAX);
            he_nodes[h][slot] = x;
        }
        let half_edge_link = |x: usize| {
            let [a, b] = he_nodes[node_he[x]];
            if a == x {
                b
            } else {
                a
            }
        };
        let corner_link = |x: usize| {
            let s = x / 2;
            if x % 2 == 0 {
                2 * ((s + sides - 1) % sides) + 1
            } else {
                2 * ((s + 1) % sides)
            }
        };

        let mut bit = vec![u8::MAX; 2 * sides];
        let mut rotation: Vec<Vec<HalfEdge>> = Vec::new();
        for i in 0..sides {
            let start = 2 * i;
            if bit[start] != u8::MAX {
                continue;
            }
            let mut rot = Vec::new();
            let mut x = start;
            loop {
                let y = half_edge_link(x);
                bit[x] = 0;
                bit[y] = 1;
                rot.push(node_he[x]);
                x = corner_link(y);
                if x == start {
                    break;
                }
            }
            rotation.push(rot);
        }
        let edges: Vec<[HalfEdge; 2]> = (0..n).map(|k| [2 * k, 2 * k + 1]).collect();
        let mut twists = vec![false; n];
        for i in 0..sides {
            if self.partner[i] > i {
                twists[pair_of[i]] = bit[2 * i] == bit[2 * i + 1];
            }
        }
        RibbonMap::with_twist_flags(edges, rotation, &twists, Root::new(0, 0))
            .expect("polygon gluings decode to valid maps")
    }

    /// Reads the code off the tour of a unicellular map. Two maps have the
    /// same code exactly when they are the same rooted map.
    pub fn encode(map: &RibbonMap) -> Result<GluingCode, UnicellularError> {
        let tour = unicellular::tour(map)?;
        let sides = tour.steps.len();
        let mut first: Vec<Option<(usize, HalfEdge)>> = vec![None; map.edge_count()];
        let mut partner = vec![0; sides];
        let mut same = Vec::with_capacity(sides / 2);
        let mut bit_at = vec![false; sides];
        for (t, step) in tour.steps.iter().enumerate() {
            let e = map.edge_of(step.leave);
            match first[e] {
                None => first[e] = Some((t, step.leave)),
                Some((s, h)) => {
                    partner[s] = t;
                    partner[t] = s;
                    bit_at[s] = h == step.leave;
                }
            }
        }
        for s in 0..sides {
            if partner[s] > s {
                same.push(bit_at[s]);
            }
        }
        Ok(GluingCode {
            partner,
            same_direction: same,
        })
    }
}

impl std::fmt::Display for GluingCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .zip(&self.same_direction)
            .map(|(&(i, j), &b)| format!("{i}{}{j}", if b { "=" } else { "~" }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

const SMALL: usize = 64;

fn find(parent: &mut [u16], mut x: usize) -> usize {
    while parent[x] as usize != x {
        parent[x] = parent[parent[x] as usize];
        x = parent[x] as usize;
    }
    x
}

fn union(parent: &mut [u16], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb) as u16;
    }
}

/// What can be read off the corner classes of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeSummary {
    pub half_type: HalfType,
    pub vertex_count: usize,
    pub precubic: bool,
    pub root_at_leaf: bool,
}

/// Which decoded maps a census keeps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusFilter {
    pub precubic: bool,
    pub orientable: Option<bool>,
    /// Allowed values of `2h`; empty means any.
    pub twice_h: Vec<u32>,
    pub root_at_leaf: bool,
}

impl CensusFilter {
    pub fn any() -> Self {
        CensusFilter::default()
    }

    /// Precubic maps of exactly the given type.
    pub fn precubic_of(ty: HalfType) -> Self {
        CensusFilter {
            precubic: true,
            orientable: Some(ty.orientable),
            twice_h: vec![ty.twice_h],
            root_at_leaf: true,
        }
    }

    pub fn accepts(&self, s: &CodeSummary) -> bool {
        (!self.precubic || s.precubic)
            && (!self.root_at_leaf || s.root_at_leaf)
            && self.orientable.map_or(true, |o| o == s.half_type.orientable)
            && (self.twice_h.is_empty() || self.twice_h.contains(&s.half_type.twice_h))
    }
}

/// Receives every code that passes the filter. Per-worker accumulators are
/// merged in a fixed order, so `merge` only needs to be associative.
pub trait Accumulator: Send + Default {
    fn visit(&mut self, code: &GluingCode, summary: &CodeSummary);
    fn merge(&mut self, other: Self);
}

/// Calls `f` on every code with `n` edges, in iteration order.
pub fn for_each_code(n: usize, mut f: impl FnMut(&GluingCode)) {
    if n == 0 {
        return;
    }
    for first in 1..2 * n {
        for_each_in_branch(n, first, &mut f);
    }
}

/// Codes whose side 0 is matched with `first`.
fn for_each_in_branch(n: usize, first: usize, f: &mut impl FnMut(&GluingCode)) {
    let sides = 2 * n;
    let mut partner = vec![usize::MAX; sides];
    partner[0] = first;
    partner[first] = 0;
    let mut code = GluingCode {
        partner: Vec::new(),
        same_direction: vec![false; n],
    };
    match_rest(&mut partner, &mut |p: &[usize]| {
        code.partner.clear();
        code.partner.extend_from_slice(p);
        for mask in 0u64..(1u64 << n) {
            for (k, b) in code.same_direction.iter_mut().enumerate() {
                *b = mask >> k & 1 == 1;
            }
            f(&code);
        }
    });
}

fn match_rest(partner: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    let Some(i) = partner.iter().position(|&p| p == usize::MAX) else {
        emit(partner);
        return;
    };
    for j in i + 1..partner.len() {
        if partner[j] != usize::MAX {
            continue;
        }
        partner[i] = j;
        partner[j] = i;
        match_rest(partner, emit);
        partner[i] = usize::MAX;
        partner[j] = usize::MAX;
    }
}

/// Runs an accumulator over all codes with `n` edges passing `filter`,
/// splitting the work across the current rayon pool.
pub fn enumerate<A: Accumulator>(
    n: usize,
    filter: &CensusFilter,
    cap: usize,
) -> Result<A, EnumerationError> {
    if n == 0 {
        return Err(EnumerationError::Empty);
    }
    if n > cap {
        return Err(EnumerationError::OverCap { n, cap });
    }
    let parts: Vec<A> = (1..2 * n)
        .into_par_iter()
        .map(|first| {
            let mut acc = A::default();
            for_each_in_branch(n, first, &mut |code| {
                let s = code.summary();
                if filter.accepts(&s) {
                    acc.visit(code, &s);
                }
            });
            acc
        })
        .collect();
    let mut total = A::default();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

/// Decoded maps in iteration order.
#[derive(Clone, Debug, Default)]
pub struct MapList(pub Vec<RibbonMap>);

impl Accumulator for MapList {
    fn visit(&mut self, code: &GluingCode, _: &CodeSummary) {
        self.0.push(code.decode());
    }

    fn merge(&mut self, other: Self) {
        self.0.extend(other.0);
    }
}

/// All maps with `n` edges passing `filter`, in iteration order.
pub fn collect_maps(n: usize, filter: &CensusFilter, cap: usize) -> Result<Vec<RibbonMap>, EnumerationError> {
    Ok(enumerate::<MapList>(n, filter, cap)?.0)
}

/// Counts of one surface type, with distributions over its precubic maps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub count: u64,
    pub precubic: u64,
    /// Number of precubic maps by number of intertwined nodes.
    pub tau: BTreeMap<usize, u64>,
    pub flavors: [u64; 4],
    pub dominant: u64,
}

impl CountRow {
    pub fn tau_sum(&self) -> u64 {
        self.tau.iter().map(|(&t, &c)| t as u64 * c).sum()
    }

    fn merge(&mut self, other: &CountRow) {
        self.count += other.count;
        self.precubic += other.precubic;
        for (&t, &c) in &other.tau {
            *self.tau.entry(t).or_default() += c;
        }
        for (a, b) in self.flavors.iter_mut().zip(other.flavors) {
            *a += b;
        }
        self.dominant += other.dominant;
    }
}

/// Census results keyed by surface type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTable {
    pub rows: BTreeMap<HalfType, CountRow>,
}

impl CountTable {
    pub fn total(&self) -> u64 {
        self.rows.values().map(|r| r.count).sum()
    }

    pub fn orientable_total(&self) -> u64 {
        self.rows
            .iter()
            .filter(|(k, _)| k.orientable)
            .map(|(_, r)| r.count)
            .sum()
    }

    pub fn row(&self, ty: HalfType) -> CountRow {
        self.rows.get(&ty).cloned().unwrap_or_default()
    }

    /// `twice_h<TAB>orientable<TAB>count` lines, sorted by type.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, r) in &self.rows {
            out.push_str(&format!("{}\t{}\t{}\n", k.twice_h, k.orientable, r.count));
        }
        out
    }

    /// One JSON object per type, including the distributions.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for (k, r) in &self.rows {
            let value = serde_json::json!({
                "twice_h": k.twice_h,
                "orientable": k.orientable,
                "count": r.count,
                "precubic": r.precubic,
                "tau": r.tau,
                "tau_sum": r.tau_sum(),
                "flavors": {"A": r.flavors[0], "B": r.flavors[1], "C": r.flavors[2], "D": r.flavors[3]},
                "dominant": r.dominant,
            });
            out.push_str(&value.to_string());
            out.push('\n');
        }
        out
    }
}

impl Accumulator for CountTable {
    fn visit(&mut self, code: &GluingCode, s: &CodeSummary) {
        let row = self.rows.entry(s.half_type).or_default();
        row.count += 1;
        if !s.precubic {
            return;
        }
        row.precubic += 1;
        let map = code.decode();
        let report = unicellular::MapReport::of(&map).expect("precubic unicellular maps classify");
        *row.tau.entry(report.tau).or_default() += 1;
        let f = report.flavors;
        for (slot, c) in row.flavors.iter_mut().zip([f.A, f.B, f.C, f.D]) {
            *slot += c as u64;
        }
        row.dominant += u64::from(report.dominant);
    }

    fn merge(&mut self, other: Self) {
        for (k, r) in other.rows {
            self.rows.entry(k).or_default().merge(&r);
        }
    }
}

/// Per type: number of maps and number of dominant maps (cubic scheme).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DominanceTable {
    pub rows: BTreeMap<HalfType, (u64, u64)>,
}

impl Accumulator for DominanceTable {
    fn visit(&mut self, code: &GluingCode, s: &CodeSummary) {
        let dominant = match unicellular::core_scheme(&code.decode()) {
            Ok(cs) => cs.dominant,
            Err(_) => false,
        };
        let row = self.rows.entry(s.half_type).or_default();
        row.0 += 1;
        row.1 += u64::from(dominant);
    }

    fn merge(&mut self, other: Self) {
        for (k, (n, d)) in other.rows {
            let row = self.rows.entry(k).or_default();
            row.0 += n;
            row.1 += d;
        }
    }
}

/// Edge count of precubic maps of type `h` with size parameter `m`:
/// `2m + 1` for integer `h`, `2m` otherwise.
pub fn precubic_edges(ty: HalfType, m: usize) -> usize {
    2 * m + usize::from(ty.is_integral())
}

/// Census of precubic maps of one type and size, with distributions.
pub fn precubic_census(ty: HalfType, m: usize, cap: usize) -> Result<CountRow, EnumerationError> {
    let n = precubic_edges(ty, m);
    let table: CountTable = enumerate(n, &CensusFilter::precubic_of(ty), cap)?;
    Ok(table.row(ty))
}

/// Precubic maps of one type and size, in iteration order.
pub fn precubic_maps(ty: HalfType, m: usize, cap: usize) -> Result<Vec<RibbonMap>, EnumerationError> {
    collect_maps(precubic_edges(ty, m), &CensusFilter::precubic_of(ty), cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial(n: u64) -> u64 {
        (1..=n).rev().step_by(2).product()
    }

    #[test]
    fn one_edge_codes() {
        let tree = GluingCode::from_pairs(&[(0, 1)], &[false]).unwrap().decode();
        assert_eq!(tree.vertex_count(), 2);
        assert_eq!(tree.twist_count(), 0);
        let loop_ = GluingCode::from_pairs(&[(0, 1)], &[true]).unwrap().decode();
        assert_eq!(loop_.vertex_count(), 1);
        assert_eq!(loop_.euler_type(), HalfType::new(1, false).unwrap());
    }

    #[test]
    fn code_counts_and_order() {
        for n in 1..=4 {
            let mut codes = Vec::new();
            for_each_code(n, |c| codes.push(c.clone()));
            assert_eq!(codes.len() as u64, double_factorial(2 * n as u64 - 1) << n);
            let mut sorted = codes.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), codes.len());
        }
    }

    #[test]
    fn decode_is_unicellular_and_encode_inverts_it() {
        for n in 1..=4 {
            for_each_code(n, |code| {
                let map = code.decode();
                assert_eq!(map.face_count(), 1, "{code}");
                let s = code.summary();
                assert_eq!(map.euler_type(), s.half_type, "{code}");
                assert_eq!(map.vertex_count(), s.vertex_count);
                assert_eq!(map.is_precubic(), s.precubic);
                assert_eq!(&GluingCode::encode(&map).unwrap(), code);
            });
        }
    }

    #[test]
    fn encode_is_flip_invariant() {
        for_each_code(3, |code| {
            let map = code.decode();
            for v in 0..map.vertex_count() {
                let f = map.flip_vertex(v).unwrap();
                assert_eq!(&GluingCode::encode(&f).unwrap(), code);
            }
        });
    }

    #[test]
    fn small_totals() {
        let t: CountTable = enumerate(1, &CensusFilter::any(), DEFAULT_CAP).unwrap();
        assert_eq!(t.total(), 2);
        assert_eq!(t.row(HalfType::new(0, true).unwrap()).count, 1);
        assert_eq!(t.row(HalfType::new(1, false).unwrap()).count, 1);
        let t: CountTable = enumerate(2, &CensusFilter::any(), DEFAULT_CAP).unwrap();
        assert_eq!(t.orientable_total(), 3);
        assert_eq!(t.total(), 12);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate::<CountTable>(8, &CensusFilter::any(), DEFAULT_CAP),
            Err(EnumerationError::OverCap { n: 8, cap: 7 })
        );
    }

    #[test]
    fn tsv_layout() {
        let t: CountTable = enumerate(1, &CensusFilter::any(), DEFAULT_CAP).unwrap();
        assert_eq!(t.to_tsv(), "0\ttrue\t1\n1\tfalse\t1\n");
    }
}
