//! Upward half search over one side of a contraction hierarchy.
//!
//! Used by point-to-point CH queries, by the many-to-many bucket phases and
//! by the pruned access-node exploration of TNR preprocessing.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::SearchGraph;
use crate::{add_dist, NodeId, Weight, INFINITY};

#[derive(Debug, Clone)]
pub struct UpwardSearch {
    dist: Vec<Weight>,
    settled: Vec<bool>,
    touched: Vec<NodeId>,
    heap: BinaryHeap<Reverse<(Weight, NodeId)>>,
    stall_stack: Vec<(NodeId, Weight, u32)>,
}

impl UpwardSearch {
    pub fn new(n: usize) -> UpwardSearch {
        UpwardSearch {
            dist: vec![INFINITY; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
            stall_stack: Vec::new(),
        }
    }

    /// Clears the previous search and seeds `source` at distance 0.
    pub fn init(&mut self, source: NodeId) {
        for &v in &self.touched {
            self.dist[v as usize] = INFINITY;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
        self.dist[source as usize] = 0;
        self.touched.push(source);
        self.heap.push(Reverse((0, source)));
    }

    /// Current label of `v`; every finite label is the length of a real path.
    #[inline]
    pub fn dist(&self, v: NodeId) -> Weight {
        self.dist[v as usize]
    }

    /// Smallest key still waiting in the queue.
    pub fn min_key(&mut self) -> Option<Weight> {
        while let Some(&Reverse((d, v))) = self.heap.peek() {
            if self.settled[v as usize] || d > self.dist[v as usize] {
                self.heap.pop();
            } else {
                return Some(d);
            }
        }
        None
    }

    /// Settles the next node and relaxes its arcs in `relax`, unless
    /// `prune` holds for it.
    ///
    /// With `stall_hops > 0`, a tentative label `cand` for node `x` is
    /// dropped when some labelled node reaches `x` more cheaply over at
    /// most `stall_hops` arcs of `stall` (the opposite search graph).
    pub fn settle_next<P>(
        &mut self,
        relax: &SearchGraph,
        stall: &SearchGraph,
        stall_hops: u32,
        prune: P,
    ) -> Option<(NodeId, Weight)>
    where
        P: Fn(NodeId) -> bool,
    {
        self.min_key()?;
        let Reverse((d, u)) = self.heap.pop()?;
        self.settled[u as usize] = true;
        if prune(u) {
            return Some((u, d));
        }
        for (x, c) in relax.arcs(u) {
            let cand = add_dist(d, c);
            if cand >= self.dist[x as usize] {
                continue;
            }
            if stall_hops > 0 && self.is_stalled(x, cand, stall, stall_hops) {
                continue;
            }
            if self.dist[x as usize] == INFINITY {
                self.touched.push(x);
            }
            self.dist[x as usize] = cand;
            self.heap.push(Reverse((cand, x)));
        }
        Some((u, d))
    }

    fn is_stalled(&mut self, x: NodeId, cand: Weight, stall: &SearchGraph, hops: u32) -> bool {
        self.stall_stack.clear();
        self.stall_stack.push((x, 0, 0));
        while let Some((y, acc, depth)) = self.stall_stack.pop() {
            for (w, c) in stall.arcs(y) {
                let via = add_dist(acc, c);
                if via >= cand {
                    continue;
                }
                if add_dist(self.dist[w as usize], via) < cand {
                    return true;
                }
                if depth + 1 < hops {
                    self.stall_stack.push((w, via, depth + 1));
                }
            }
        }
        false
    }

    /// Runs until the queue is empty and returns the settled nodes with
    /// their labels in settle order.
    pub fn run<P>(
        &mut self,
        source: NodeId,
        relax: &SearchGraph,
        stall: &SearchGraph,
        stall_hops: u32,
        prune: P,
    ) -> Vec<(NodeId, Weight)>
    where
        P: Fn(NodeId) -> bool,
    {
        self.init(source);
        let mut out = Vec::new();
        while let Some(item) = self.settle_next(relax, stall, stall_hops, &prune) {
            out.push(item);
        }
        out
    }
}
