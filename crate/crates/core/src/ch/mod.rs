//! Contraction hierarchies: construction and exact point-to-point queries.
//!
//! Nodes are contracted one by one; the position at which a node is
//! contracted is its *rank*. The resulting index keeps two search graphs:
//!
//! * `up`: for every node `v`, the arcs `v -> x` with `rank(x) > rank(v)`;
//! * `down`: for every node `v`, the arcs `x -> v` with `rank(x) > rank(v)`,
//!   stored at `v` so a backward search from a target walks upward too.
//!
//! Every arc is either an input arc or a shortcut that records the middle
//! node it bypasses.

mod contraction;
mod query;
mod search;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{Read, Write};

use ordered_float::OrderedFloat;
use rayon::prelude::*;

pub use contraction::{ContractionState, Shortcut, WitnessSearch};
pub use query::ChQuery;
pub use search::UpwardSearch;

use crate::{binio, Error, Graph, NodeId, Permutation, Result, Weight};

/// Middle-node marker for arcs that are not shortcuts.
pub const NO_MIDDLE: NodeId = NodeId::MAX;

const CH_MAGIC: &[u8; 8] = b"CHTNRCH\0";
const CH_VERSION: u32 = 1;

/// Hop and settled-node caps for a bounded witness search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub hops: u32,
    pub settled: usize,
}

/// Contraction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChParams {
    /// Limits for the witness searches that simulate a contraction while
    /// computing priorities.
    pub witness_limits: SearchLimits,
    /// Limits for the witness searches of the actual contraction.
    pub contraction_limits: SearchLimits,
    pub edge_quotient_coeff: f64,
    pub original_quotient_coeff: f64,
    pub depth_coeff: f64,
}

impl Default for ChParams {
    fn default() -> Self {
        ChParams {
            witness_limits: SearchLimits { hops: 5, settled: 1000 },
            contraction_limits: SearchLimits { hops: 7, settled: 2000 },
            edge_quotient_coeff: 2.0,
            original_quotient_coeff: 4.0,
            depth_coeff: 1.0,
        }
    }
}

impl ChParams {
    pub fn validate(&self) -> Result<()> {
        for limits in [self.witness_limits, self.contraction_limits] {
            if limits.hops < 1 || limits.settled < 1 {
                return Err(Error::Parameter("search limits must be at least 1".into()));
            }
        }
        for c in [self.edge_quotient_coeff, self.original_quotient_coeff, self.depth_coeff] {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::Parameter(format!(
                    "priority coefficient {c} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }
}

/// One side of the hierarchy in flat adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchGraph {
    first_out: Vec<u32>,
    head: Vec<NodeId>,
    weight: Vec<Weight>,
    middle: Vec<NodeId>,
}

impl SearchGraph {
    fn from_lists(mut lists: Vec<Vec<(NodeId, Weight, NodeId)>>) -> SearchGraph {
        let mut first_out = Vec::with_capacity(lists.len() + 1);
        first_out.push(0u32);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut head = Vec::with_capacity(total);
        let mut weight = Vec::with_capacity(total);
        let mut middle = Vec::with_capacity(total);
        for list in &mut lists {
            list.sort_unstable();
            for &(h, w, m) in list.iter() {
                head.push(h);
                weight.push(w);
                middle.push(m);
            }
            first_out.push(head.len() as u32);
        }
        SearchGraph {
            first_out,
            head,
            weight,
            middle,
        }
    }

    #[inline]
    fn range(&self, v: NodeId) -> std::ops::Range<usize> {
        self.first_out[v as usize] as usize..self.first_out[v as usize + 1] as usize
    }

    /// Arcs stored at `v` as `(other endpoint, weight)`.
    #[inline]
    pub fn arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        let r = self.range(v);
        self.head[r.clone()].iter().copied().zip(self.weight[r].iter().copied())
    }

    /// Arcs stored at `v` as `(other endpoint, weight, middle node)`.
    pub fn arcs_with_middle(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight, NodeId)> + '_ {
        self.range(v).map(|i| (self.head[i], self.weight[i], self.middle[i]))
    }

    /// The arc stored at `v` towards `other`, as `(weight, middle)`.
    pub fn find(&self, v: NodeId, other: NodeId) -> Option<(Weight, NodeId)> {
        let r = self.range(v);
        self.head[r.clone()]
            .binary_search(&other)
            .ok()
            .map(|i| (self.weight[r.start + i], self.middle[r.start + i]))
    }

    pub fn arc_count(&self) -> usize {
        self.head.len()
    }

    pub fn shortcut_count(&self) -> usize {
        self.middle.iter().filter(|&&m| m != NO_MIDDLE).count()
    }

    fn size_bytes(&self) -> usize {
        4 * (self.first_out.len() + 3 * self.head.len())
    }

    fn permuted(&self, p: &Permutation) -> SearchGraph {
        let inv = p.inverse();
        let map_mid = |m: NodeId| if m == NO_MIDDLE { m } else { p.apply(m) };
        let lists = (0..p.len() as NodeId)
            .map(|new| {
                self.arcs_with_middle(inv.apply(new))
                    .map(|(h, w, m)| (p.apply(h), w, map_mid(m)))
                    .collect()
            })
            .collect();
        SearchGraph::from_lists(lists)
    }

    fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        binio::write_u64(w, self.head.len() as u64)?;
        binio::write_u32s(w, &self.first_out)?;
        binio::write_u32s(w, &self.head)?;
        binio::write_u32s(w, &self.weight)?;
        binio::write_u32s(w, &self.middle)
    }

    fn read<R: Read>(r: &mut R, n: usize) -> Result<SearchGraph> {
        let m = binio::read_u64(r)?;
        let first_out = binio::read_u32s(r, n as u64 + 1)?;
        let head = binio::read_u32s(r, m)?;
        let weight = binio::read_u32s(r, m)?;
        let middle = binio::read_u32s(r, m)?;
        let offsets_ok = first_out.first() == Some(&0)
            && first_out.last().map(|&x| x as u64) == Some(m)
            && first_out.windows(2).all(|p| p[0] <= p[1]);
        let ids_ok =
            head.iter().all(|&h| (h as usize) < n) && middle.iter().all(|&x| x == NO_MIDDLE || (x as usize) < n);
        if !(offsets_ok && ids_ok) {
            return Err(Error::Format("corrupt search graph".into()));
        }
        Ok(SearchGraph {
            first_out,
            head,
            weight,
            middle,
        })
    }
}

/// A finished contraction hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChIndex {
    rank: Vec<u32>,
    up: SearchGraph,
    down: SearchGraph,
}

impl ChIndex {
    pub fn node_count(&self) -> usize {
        self.rank.len()
    }

    #[inline]
    pub fn rank(&self, v: NodeId) -> u32 {
        self.rank[v as usize]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    /// Nodes in contraction order, least important first.
    pub fn order(&self) -> Vec<NodeId> {
        let mut order = vec![0; self.node_count()];
        for (v, &r) in self.rank.iter().enumerate() {
            order[r as usize] = v as NodeId;
        }
        order
    }

    pub fn up(&self) -> &SearchGraph {
        &self.up
    }

    pub fn down(&self) -> &SearchGraph {
        &self.down
    }

    pub fn size_bytes(&self) -> usize {
        4 * self.rank.len() + self.up.size_bytes() + self.down.size_bytes()
    }

    /// Relabels every node `v` as `p(v)`; ranks move with their nodes.
    pub fn permuted(&self, p: &Permutation) -> Result<ChIndex> {
        if p.len() != self.node_count() {
            return Err(Error::Permutation(format!(
                "length {} does not match {} nodes",
                p.len(),
                self.node_count()
            )));
        }
        let mut rank = vec![0; self.node_count()];
        for (old, &r) in self.rank.iter().enumerate() {
            rank[p.apply(old as NodeId) as usize] = r;
        }
        Ok(ChIndex {
            rank,
            up: self.up.permuted(p),
            down: self.down.permuted(p),
        })
    }

    /// Weight and middle node of the hierarchy arc `from -> to`.
    pub fn arc(&self, from: NodeId, to: NodeId) -> Option<(Weight, NodeId)> {
        if self.rank(to) > self.rank(from) {
            self.up.find(from, to)
        } else {
            self.down.find(to, from)
        }
    }

    /// Expands the hierarchy arc `from -> to` into the input-graph path it
    /// represents. Intended for tests and debugging.
    pub fn unpack_arc(&self, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
        self.arc(from, to)?;
        let mut path = vec![from];
        let mut stack = vec![(from, to)];
        while let Some((a, b)) = stack.pop() {
            let (_, mid) = self.arc(a, b)?;
            if mid == NO_MIDDLE {
                path.push(b);
            } else {
                stack.push((mid, b));
                stack.push((a, mid));
            }
        }
        Some(path)
    }

    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        binio::write_header(w, CH_MAGIC, CH_VERSION)?;
        binio::write_u32(w, self.node_count() as u32)?;
        binio::write_u32s(w, &self.rank)?;
        self.up.write(w)?;
        self.down.write(w)
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<ChIndex> {
        binio::read_header(r, CH_MAGIC, CH_VERSION)?;
        let n = binio::read_u32(r)? as usize;
        let rank = binio::read_u32s(r, n as u64)?;
        if Permutation::new(rank.clone()).is_err() {
            return Err(Error::Format("rank array is not a permutation".into()));
        }
        let up = SearchGraph::read(r, n)?;
        let down = SearchGraph::read(r, n)?;
        let ch = ChIndex { rank, up, down };
        let upward = (0..n as NodeId).all(|v| {
            ch.up.arcs(v).all(|(x, _)| ch.rank(x) > ch.rank(v)) && ch.down.arcs(v).all(|(x, _)| ch.rank(x) > ch.rank(v))
        });
        if !upward {
            return Err(Error::Format("search graph arc does not increase rank".into()));
        }
        Ok(ch)
    }
}

/// Contracts all nodes of `g` and returns the hierarchy.
///
/// With `forced_order` the nodes are contracted exactly in that order.
/// Otherwise the node of minimum priority is contracted next, where
/// priorities are re-evaluated lazily: the queue minimum is recomputed
/// before contraction and re-queued if it no longer beats the runner-up,
/// and neighbours of a contracted node are re-scored. Ties go to the
/// smaller node id.
pub fn build_hierarchy(g: &Graph, params: &ChParams, forced_order: Option<&[NodeId]>) -> Result<ChIndex> {
    params.validate()?;
    let n = g.node_count();
    let mut state = ContractionState::new(g);

    if let Some(order) = forced_order {
        if order.len() != n {
            return Err(Error::Permutation(format!(
                "forced order has {} entries for {n} nodes",
                order.len()
            )));
        }
        Permutation::from_order(order)?;
        for &v in order {
            state.contract(v, params.contraction_limits);
        }
        return Ok(state.into_index());
    }

    let mut prio: Vec<OrderedFloat<f64>> = (0..n as NodeId)
        .into_par_iter()
        .with_min_len(256)
        .map_init(
            || WitnessSearch::new(n),
            |ws, v| OrderedFloat(state.priority_with(v, params, ws)),
        )
        .collect();
    let mut heap: BinaryHeap<Reverse<(OrderedFloat<f64>, NodeId)>> = prio
        .iter()
        .enumerate()
        .map(|(v, &p)| Reverse((p, v as NodeId)))
        .collect();

    while let Some(Reverse((p, v))) = heap.pop() {
        if state.is_contracted(v) || p != prio[v as usize] {
            continue;
        }
        let fresh = OrderedFloat(state.priority(v, params));
        if fresh != p {
            prio[v as usize] = fresh;
            if heap.peek().is_some_and(|Reverse(top)| (fresh, v) > *top) {
                heap.push(Reverse((fresh, v)));
                continue;
            }
        }
        let neighbors = state.neighbors(v);
        state.contract(v, params.contraction_limits);
        for x in neighbors {
            let p = OrderedFloat(state.priority(x, params));
            prio[x as usize] = p;
            heap.push(Reverse((p, x)));
        }
    }
    Ok(state.into_index())
}
