//! Transit node routing on top of a contraction hierarchy.
//!
//! The `k` most important CH nodes form the transit set. Every node stores
//! its forward and backward access nodes (the first transit nodes met by a
//! pruned CH half search) and a compressed copy of the non-transit part of
//! both searches. Queries whose search spaces cannot meet below the transit
//! level are answered from the transit-to-transit table; the rest fall back
//! to a plain CH query.
//!
//! Nodes are renumbered during preprocessing so that the transit nodes get
//! ids `[0, k)`. Methods of [`TnrIndex`] use these *internal* ids unless they
//! say otherwise; [`TnrIndex::to_internal`] and [`TnrIndex::to_external`]
//! translate from and to the ids of the input graph.

mod access;
mod query;
mod renumber;
mod voronoi;

use std::io::{Read, Write};

use rayon::prelude::*;

pub use access::{find_access_raw, post_search_stall, select_transit_nodes, AccessExplorer, RawAccess, TransitSet};
pub use query::{QueryCounters, QueryKind, QueryResult, TnrQuery};
pub use renumber::{levels, renumber, RenumberStrategy};
pub use voronoi::{compute_voronoi, VoronoiAssignment, NO_REGION};

use crate::ch::{build_hierarchy, ChIndex, ChParams};
use crate::many2many::build_distance_table;
use crate::{add_dist, binio, Direction, Error, Graph, NodeId, Permutation, Result, Weight, INFINITY};

const TNR_MAGIC: &[u8; 8] = b"CHTNRTN\0";
const TNR_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TnrParams {
    /// Number of transit nodes.
    pub k: usize,
    /// Stall-on-demand depth of the access-node searches; 0 disables it.
    pub stall_hops: u32,
    pub renumber: RenumberStrategy,
    pub ch: ChParams,
}

impl TnrParams {
    pub fn new(k: usize) -> TnrParams {
        TnrParams {
            k,
            stall_hops: 1,
            renumber: RenumberStrategy::default(),
            ch: ChParams::default(),
        }
    }
}

/// Id interval `[lo, hi]` of a raw search space; empty spaces have
/// `lo > hi` and overlap nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: NodeId,
    pub hi: NodeId,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: NodeId::MAX, hi: 0 };

    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }

    #[inline]
    pub fn overlaps(self, other: Interval) -> bool {
        !self.is_empty() && !other.is_empty() && self.lo <= other.hi && other.lo <= self.hi
    }

    fn of(ids: impl Iterator<Item = NodeId>) -> Interval {
        ids.fold(Interval::EMPTY, |acc, v| Interval {
            lo: acc.lo.min(v),
            hi: acc.hi.max(v),
        })
    }
}

/// Per-node preprocessing result in internal ids.
struct NodeData {
    up: Vec<(NodeId, Weight)>,
    down: Vec<(NodeId, Weight)>,
    space: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TnrIndex {
    k: usize,
    stall_hops: u32,
    strategy: RenumberStrategy,
    /// Input id to internal id.
    perm: Permutation,
    /// Internal id to input id.
    inv: Permutation,
    /// Row-major `k x k` table over internal transit ids.
    table: Vec<Weight>,
    /// For node `v`: forward entries in `access[ia[2v]..ia[2v+1]]`,
    /// backward entries in `access[ia[2v+1]..ia[2v+2]]`.
    access: Vec<(NodeId, Weight)>,
    access_index: Vec<u32>,
    /// Sorted Voronoi representatives of the merged search spaces of `v`
    /// in `reps[ri[v]..ri[v+1]]`.
    reps: Vec<NodeId>,
    rep_index: Vec<u32>,
    intervals: Vec<Interval>,
    ch: ChIndex,
}

/// Builds the hierarchy and the TNR index for `g`. `forced_order` fixes the
/// contraction order.
pub fn build_tnr(g: &Graph, params: &TnrParams, forced_order: Option<&[NodeId]>) -> Result<TnrIndex> {
    let ch = build_hierarchy(g, &params.ch, forced_order)?;
    build_tnr_from_ch(g, ch, params)
}

/// Builds the TNR index from an existing hierarchy of `g` (in input ids).
pub fn build_tnr_from_ch(g: &Graph, ch: ChIndex, params: &TnrParams) -> Result<TnrIndex> {
    let n = g.node_count();
    if ch.node_count() != n {
        return Err(Error::Parameter(format!(
            "hierarchy has {} nodes, graph has {n}",
            ch.node_count()
        )));
    }
    let k = params.k;
    let transit = select_transit_nodes(&ch, k)?;
    let vor = compute_voronoi(g, transit.nodes())?;
    let perm = renumber(&ch, &transit, params.renumber)?;
    let inv = perm.inverse();
    let ch = ch.permuted(&perm)?;
    log::info!("transit set of {k} nodes selected and renumbered");

    let ids: Vec<NodeId> = (0..k as NodeId).collect();
    let table = build_distance_table(&ch, &ids, &ids)?.as_slice().to_vec();
    log::info!("distance table of {k}x{k} entries built");

    let region = |v: NodeId| match vor.region_of(inv.apply(v)) {
        NO_REGION => NO_REGION,
        r => perm.apply(r),
    };
    let d_t = |a: NodeId, b: NodeId| table[a as usize * k + b as usize];
    let is_transit = |v: NodeId| (v as usize) < k;
    let data: Vec<NodeData> = (0..n as NodeId)
        .into_par_iter()
        .with_min_len(64)
        .map_init(
            || AccessExplorer::new(n),
            |ex, v| {
                let fwd = ex.explore(&ch, is_transit, v, Direction::Forward, params.stall_hops);
                let bwd = ex.explore(&ch, is_transit, v, Direction::Backward, params.stall_hops);
                let mut space = fwd.space;
                space.extend(bwd.space);
                NodeData {
                    up: post_search_stall(&fwd.candidates, Direction::Forward, d_t),
                    down: post_search_stall(&bwd.candidates, Direction::Backward, d_t),
                    space,
                }
            },
        )
        .collect();
    log::info!("access nodes and search spaces explored");

    let mut access = Vec::new();
    let mut access_index = Vec::with_capacity(2 * n + 1);
    let mut reps = Vec::new();
    let mut rep_index = Vec::with_capacity(n + 1);
    let mut intervals = Vec::with_capacity(n);
    for d in data {
        access_index.push(access.len() as u32);
        access.extend_from_slice(&d.up);
        access_index.push(access.len() as u32);
        access.extend_from_slice(&d.down);
        rep_index.push(reps.len() as u32);
        let start = reps.len();
        reps.extend(d.space.iter().map(|&u| region(u)));
        reps[start..].sort_unstable();
        let mut w = start;
        for i in start..reps.len() {
            if i == start || reps[i] != reps[w - 1] {
                reps[w] = reps[i];
                w += 1;
            }
        }
        reps.truncate(w);
        intervals.push(Interval::of(d.space.iter().copied()));
    }
    access_index.push(access.len() as u32);
    rep_index.push(reps.len() as u32);

    Ok(TnrIndex {
        k,
        stall_hops: params.stall_hops,
        strategy: params.renumber,
        perm,
        inv,
        table,
        access,
        access_index,
        reps,
        rep_index,
        intervals,
        ch,
    })
}

impl TnrIndex {
    pub fn node_count(&self) -> usize {
        self.perm.len()
    }

    pub fn transit_count(&self) -> usize {
        self.k
    }

    pub fn stall_hops(&self) -> u32 {
        self.stall_hops
    }

    pub fn strategy(&self) -> RenumberStrategy {
        self.strategy
    }

    /// Old-to-new id permutation applied during preprocessing.
    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    #[inline]
    pub fn to_internal(&self, v: NodeId) -> NodeId {
        self.perm.apply(v)
    }

    #[inline]
    pub fn to_external(&self, v: NodeId) -> NodeId {
        self.inv.apply(v)
    }

    #[inline]
    pub fn is_transit(&self, v: NodeId) -> bool {
        (v as usize) < self.k
    }

    /// Hierarchy in internal ids.
    pub fn ch(&self) -> &ChIndex {
        &self.ch
    }

    /// Table entry for internal transit ids `a, b < k`.
    #[inline]
    pub fn table(&self, a: NodeId, b: NodeId) -> Weight {
        self.table[a as usize * self.k + b as usize]
    }

    pub fn table_row(&self, a: NodeId) -> &[Weight] {
        &self.table[a as usize * self.k..(a as usize + 1) * self.k]
    }

    /// Forward access nodes of `v` with `dist(v, a)`, sorted by id.
    #[inline]
    pub fn access_up(&self, v: NodeId) -> &[(NodeId, Weight)] {
        let i = 2 * v as usize;
        &self.access[self.access_index[i] as usize..self.access_index[i + 1] as usize]
    }

    /// Backward access nodes of `v` with `dist(a, v)`, sorted by id.
    #[inline]
    pub fn access_down(&self, v: NodeId) -> &[(NodeId, Weight)] {
        let i = 2 * v as usize + 1;
        &self.access[self.access_index[i] as usize..self.access_index[i + 1] as usize]
    }

    /// Sorted Voronoi representatives of the merged search spaces of `v`.
    #[inline]
    pub fn reps(&self, v: NodeId) -> &[NodeId] {
        &self.reps[self.rep_index[v as usize] as usize..self.rep_index[v as usize + 1] as usize]
    }

    #[inline]
    pub fn interval(&self, v: NodeId) -> Interval {
        self.intervals[v as usize]
    }

    /// Whether the interval check alone proves the search spaces disjoint.
    #[inline]
    pub fn intervals_disjoint(&self, s: NodeId, t: NodeId) -> bool {
        !self.interval(s).overlaps(self.interval(t))
    }

    /// Locality filter: false only if no shortest `s`-`t` path can avoid
    /// the transit nodes.
    pub fn locality_filter(&self, s: NodeId, t: NodeId) -> bool {
        if self.intervals_disjoint(s, t) {
            return false;
        }
        sorted_intersect(self.reps(s), self.reps(t))
    }

    /// Best distance over paths through a forward access node of `s` and a
    /// backward access node of `t`; also returns the number of table
    /// entries read.
    pub fn table_query_counted(&self, s: NodeId, t: NodeId) -> (Weight, usize) {
        let down = self.access_down(t);
        let mut best = INFINITY;
        let mut lookups = 0;
        for &(a_s, d_s) in self.access_up(s) {
            let row = self.table_row(a_s);
            for &(a_t, d_t) in down {
                let total = add_dist(add_dist(d_s, row[a_t as usize]), d_t);
                best = best.min(total);
            }
            lookups += down.len();
        }
        (best, lookups)
    }

    pub fn table_query(&self, s: NodeId, t: NodeId) -> Weight {
        self.table_query_counted(s, t).0
    }

    /// Reruns the pruned half search of internal node `v`. Intended for
    /// tests and diagnostics; the index itself keeps only the compressed
    /// result.
    pub fn explore(&self, v: NodeId, dir: Direction) -> RawAccess {
        let k = self.k;
        AccessExplorer::new(self.node_count()).explore(&self.ch, |x| (x as usize) < k, v, dir, self.stall_hops)
    }

    /// Total number of stored access entries (both directions).
    pub fn access_entry_count(&self) -> usize {
        self.access.len()
    }

    pub fn rep_entry_count(&self) -> usize {
        self.reps.len()
    }

    pub fn memory(&self) -> MemoryUsage {
        let n = self.node_count();
        MemoryUsage {
            ch: self.ch.size_bytes(),
            table: 4 * self.table.len(),
            access: 8 * self.access.len() + 4 * self.access_index.len(),
            locality: 4 * self.reps.len() + 4 * self.rep_index.len() + 8 * self.intervals.len(),
            permutation: 8 * n,
        }
    }

    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        binio::write_header(w, TNR_MAGIC, TNR_VERSION)?;
        binio::write_u32(w, self.node_count() as u32)?;
        binio::write_u32(w, self.k as u32)?;
        binio::write_u32(w, self.stall_hops)?;
        binio::write_u32(w, self.strategy.id())?;
        binio::write_u32s(w, self.perm.as_slice())?;
        binio::write_u32s(w, &self.table)?;
        binio::write_u32s(w, &self.access_index)?;
        let (ids, dists): (Vec<NodeId>, Vec<Weight>) = self.access.iter().copied().unzip();
        binio::write_u32s(w, &ids)?;
        binio::write_u32s(w, &dists)?;
        binio::write_u32s(w, &self.rep_index)?;
        binio::write_u32s(w, &self.reps)?;
        let (lo, hi): (Vec<NodeId>, Vec<NodeId>) = self.intervals.iter().map(|i| (i.lo, i.hi)).unzip();
        binio::write_u32s(w, &lo)?;
        binio::write_u32s(w, &hi)?;
        self.ch.write_binary(w)
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<TnrIndex> {
        binio::read_header(r, TNR_MAGIC, TNR_VERSION)?;
        let n = binio::read_u32(r)? as u64;
        let k = binio::read_u32(r)? as u64;
        let stall_hops = binio::read_u32(r)?;
        let strategy = RenumberStrategy::from_id(binio::read_u32(r)?)?;
        if k > n {
            return Err(Error::Format(format!("transit count {k} exceeds {n} nodes")));
        }
        let perm =
            Permutation::new(binio::read_u32s(r, n)?).map_err(|e| Error::Format(format!("bad permutation: {e}")))?;
        let table = binio::read_u32s(r, k * k)?;
        let access_index = binio::read_u32s(r, 2 * n + 1)?;
        let m = *access_index.last().unwrap_or(&0) as u64;
        let ids = binio::read_u32s(r, m)?;
        let dists = binio::read_u32s(r, m)?;
        let rep_index = binio::read_u32s(r, n + 1)?;
        let reps = binio::read_u32s(r, *rep_index.last().unwrap_or(&0) as u64)?;
        let lo = binio::read_u32s(r, n)?;
        let hi = binio::read_u32s(r, n)?;
        let ch = ChIndex::read_binary(r)?;

        let monotone = |xs: &[u32]| xs.first() == Some(&0) && xs.windows(2).all(|p| p[0] <= p[1]);
        let ok = ch.node_count() as u64 == n
            && monotone(&access_index)
            && monotone(&rep_index)
            && ids.iter().all(|&a| (a as u64) < k)
            && reps.iter().all(|&x| x == NO_REGION || (x as u64) < k);
        if !ok {
            return Err(Error::Format("corrupt TNR index".into()));
        }
        Ok(TnrIndex {
            k: k as usize,
            stall_hops,
            strategy,
            inv: perm.inverse(),
            perm,
            table,
            access: ids.into_iter().zip(dists).collect(),
            access_index,
            reps,
            rep_index,
            intervals: lo.into_iter().zip(hi).map(|(lo, hi)| Interval { lo, hi }).collect(),
            ch,
        })
    }
}

/// Byte counts of the index components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MemoryUsage {
    pub ch: usize,
    pub table: usize,
    pub access: usize,
    pub locality: usize,
    pub permutation: usize,
}

impl MemoryUsage {
    pub fn total(&self) -> usize {
        self.ch + self.table + self.access + self.locality + self.permutation
    }
}

fn sorted_intersect(a: &[NodeId], b: &[NodeId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dijkstra::all_pairs;
    use crate::generators::{diamond, path4, random_road_like};

    fn p4_index() -> TnrIndex {
        build_tnr(&path4(), &TnrParams::new(2), Some(&[0, 1, 2, 3])).unwrap()
    }

    #[test]
    fn path_index_layout() {
        let idx = p4_index();
        // Input ids 3, 2, 1, 0 become 0, 1, 2, 3.
        assert_eq!(idx.permutation().as_slice(), &[3, 2, 1, 0]);
        assert_eq!(idx.table_row(0), &[0, 1]);
        assert_eq!(idx.table_row(1), &[1, 0]);
        let v0 = idx.to_internal(0);
        assert_eq!(idx.access_up(v0), &[(1, 2)]);
        assert_eq!(idx.access_down(v0), &[(1, 2)]);
        assert_eq!(idx.access_up(0), &[(0, 0)]);
        assert_eq!(idx.reps(v0), &[1]);
        assert_eq!(idx.interval(v0), Interval { lo: 2, hi: 3 });
        assert!(idx.interval(0).is_empty());
        assert_eq!(idx.access_index.len(), 2 * 4 + 1);
        assert_eq!(*idx.access_index.last().unwrap() as usize, idx.access.len());
        assert_eq!(idx.rep_index.len(), 4 + 1);
    }

    #[test]
    fn path_filter_and_table() {
        let idx = p4_index();
        let i = |v| idx.to_internal(v);
        assert!(idx.locality_filter(i(0), i(1)));
        assert!(!idx.locality_filter(i(0), i(3)));
        assert!(!idx.locality_filter(i(3), i(3)));
        assert_eq!(idx.table_query(i(0), i(3)), 3);
    }

    #[test]
    fn all_transit_gives_singletons() {
        let g = random_road_like(40, 1000, 2);
        let idx = build_tnr(&g, &TnrParams::new(40), None).unwrap();
        for v in 0..40 {
            assert_eq!(idx.access_up(v), &[(v, 0)]);
            assert_eq!(idx.access_down(v), &[(v, 0)]);
            assert!(idx.reps(v).is_empty());
            assert!(idx.interval(v).is_empty());
        }
    }

    #[test]
    fn diamond_table_answers_where_filter_is_false() {
        let g = diamond();
        let apsp = all_pairs(&g);
        let idx = build_tnr(&g, &TnrParams::new(2), None).unwrap();
        for s in 0..5 {
            for t in 0..5 {
                let (si, ti) = (idx.to_internal(s), idx.to_internal(t));
                if !idx.locality_filter(si, ti) {
                    assert_eq!(idx.table_query(si, ti), apsp[s as usize][t as usize]);
                }
            }
        }
    }

    #[test]
    fn binary_round_trip() {
        let g = random_road_like(60, 1000, 9);
        let idx = build_tnr(&g, &TnrParams::new(8), None).unwrap();
        let mut buf = Vec::new();
        idx.write_binary(&mut buf).unwrap();
        assert_eq!(TnrIndex::read_binary(&mut buf.as_slice()).unwrap(), idx);
        buf[0] ^= 1;
        assert!(TnrIndex::read_binary(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn parameter_errors() {
        assert!(build_tnr(&path4(), &TnrParams::new(0), None).is_err());
        assert!(build_tnr(&path4(), &TnrParams::new(5), None).is_err());
    }

    #[test]
    fn intervals() {
        let a = Interval { lo: 2, hi: 5 };
        assert!(a.overlaps(Interval { lo: 5, hi: 9 }));
        assert!(!a.overlaps(Interval { lo: 6, hi: 9 }));
        assert!(!a.overlaps(Interval::EMPTY));
        assert!(!Interval::EMPTY.overlaps(Interval { lo: 0, hi: NodeId::MAX }));
        assert!(sorted_intersect(&[1, 4, 9], &[2, 9]));
        assert!(!sorted_intersect(&[1, 4], &[2, 3, 5]));
    }
}
