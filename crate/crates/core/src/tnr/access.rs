//! Transit-node selection, pruned access-node exploration and
//! post-search-stalling.

use crate::ch::{ChIndex, UpwardSearch};
use crate::{add_dist, Direction, Error, NodeId, Result, Weight};

/// The `k` highest-ranked nodes of a hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitSet {
    /// Transit nodes by decreasing rank.
    nodes: Vec<NodeId>,
    member: Vec<bool>,
}

impl TransitSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.member[v as usize]
    }

    /// Transit nodes, most important first.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }
}

pub fn select_transit_nodes(ch: &ChIndex, k: usize) -> Result<TransitSet> {
    let n = ch.node_count();
    if k < 1 || k > n {
        return Err(Error::Parameter(format!("transit set size {k} not in [1, {n}]")));
    }
    let nodes: Vec<NodeId> = ch.order().into_iter().rev().take(k).collect();
    let mut member = vec![false; n];
    for &v in &nodes {
        member[v as usize] = true;
    }
    Ok(TransitSet { nodes, member })
}

/// Outcome of one pruned half search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawAccess {
    /// Settled transit nodes with their labels, in settle order.
    pub candidates: Vec<(NodeId, Weight)>,
    /// Settled non-transit nodes, in settle order.
    pub space: Vec<NodeId>,
}

/// Reusable scratch for [`find_access_raw`].
#[derive(Debug, Clone)]
pub struct AccessExplorer {
    search: UpwardSearch,
}

impl AccessExplorer {
    pub fn new(n: usize) -> AccessExplorer {
        AccessExplorer {
            search: UpwardSearch::new(n),
        }
    }

    /// Upward search from `v` (over the downward graph for
    /// [`Direction::Backward`]) that settles transit nodes without relaxing
    /// their arcs.
    pub fn explore<F>(&mut self, ch: &ChIndex, is_transit: F, v: NodeId, dir: Direction, stall_hops: u32) -> RawAccess
    where
        F: Fn(NodeId) -> bool,
    {
        let (relax, stall) = match dir {
            Direction::Forward => (ch.up(), ch.down()),
            Direction::Backward => (ch.down(), ch.up()),
        };
        let mut out = RawAccess::default();
        for (u, d) in self.search.run(v, relax, stall, stall_hops, &is_transit) {
            if is_transit(u) {
                out.candidates.push((u, d));
            } else {
                out.space.push(u);
            }
        }
        out
    }
}

pub fn find_access_raw(ch: &ChIndex, transit: &TransitSet, v: NodeId, dir: Direction, stall_hops: u32) -> RawAccess {
    AccessExplorer::new(ch.node_count()).explore(ch, |x| transit.contains(x), v, dir, stall_hops)
}

/// Drops every candidate `a` reachable at most as cheaply through another
/// kept candidate `b`: `d(v,b) + D(b,a) <= d(v,a)` going forward, and
/// `D(a,b) + d(b,v) <= d(a,v)` going backward.
///
/// Candidates are scanned by distance, then id, so of two equally good
/// candidates the lower id survives. `table(x, y)` must return the
/// transit-to-transit distance from `x` to `y`. The result is sorted by id.
pub fn post_search_stall<F>(candidates: &[(NodeId, Weight)], dir: Direction, table: F) -> Vec<(NodeId, Weight)>
where
    F: Fn(NodeId, NodeId) -> Weight,
{
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable_by_key(|&(a, d)| (d, a));
    let mut kept: Vec<(NodeId, Weight)> = Vec::with_capacity(sorted.len());
    for &(a, da) in &sorted {
        let dominated = kept.iter().any(|&(b, db)| {
            let via = match dir {
                Direction::Forward => table(b, a),
                Direction::Backward => table(a, b),
            };
            add_dist(db, via) <= da
        });
        if !dominated {
            kept.push((a, da));
        }
    }
    kept.sort_unstable();
    kept
}
