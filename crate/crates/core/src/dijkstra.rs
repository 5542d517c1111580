//! Plain Dijkstra search, the reference oracle for every other structure.
//!
//! Ties in the queue are broken by the lower node id, so settle orders
//! (and therefore Dijkstra ranks) are deterministic.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::check_node;
use crate::{add_dist, Direction, Graph, NodeId, Result, Weight, INFINITY};

/// Distances from a single source plus the order in which nodes were
/// settled. `settle_order[i]` has Dijkstra rank `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DijkstraResult {
    pub dist: Vec<Weight>,
    pub settle_order: Vec<NodeId>,
}

/// Reusable Dijkstra scratch space for repeated queries on one graph size.
#[derive(Debug, Clone)]
pub struct Dijkstra {
    dist: Vec<Weight>,
    settled: Vec<bool>,
    touched: Vec<NodeId>,
    heap: BinaryHeap<Reverse<(Weight, NodeId)>>,
}

impl Dijkstra {
    pub fn new(n: usize) -> Dijkstra {
        Dijkstra {
            dist: vec![INFINITY; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = INFINITY;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Tentative (or final, once settled) distance of `v` from the last run.
    pub fn dist(&self, v: NodeId) -> Weight {
        self.dist[v as usize]
    }

    /// Runs from `source` and returns the settle order.
    ///
    /// Stops once every node in `targets` is settled or `rank_limit` nodes
    /// have been settled, whichever comes first.
    pub fn run(
        &mut self,
        g: &Graph,
        source: NodeId,
        dir: Direction,
        targets: Option<&[NodeId]>,
        rank_limit: Option<usize>,
    ) -> Result<Vec<NodeId>> {
        let n = g.node_count();
        check_node(source, n)?;
        if let Some(ts) = targets {
            for &t in ts {
                check_node(t, n)?;
            }
        }
        self.reset();
        let target_set: Option<HashSet<NodeId>> = targets.map(|ts| ts.iter().copied().collect());
        let mut remaining_targets = target_set.as_ref().map(HashSet::len);

        let mut order = Vec::new();
        self.dist[source as usize] = 0;
        self.touched.push(source);
        self.heap.push(Reverse((0, source)));
        while let Some(Reverse((d, u))) = self.heap.pop() {
            if self.settled[u as usize] || d > self.dist[u as usize] {
                continue;
            }
            self.settled[u as usize] = true;
            order.push(u);
            if rank_limit.is_some_and(|limit| order.len() >= limit) {
                break;
            }
            if let Some(rem) = remaining_targets.as_mut() {
                if target_set.as_ref().is_some_and(|ts| ts.contains(&u)) {
                    *rem -= 1;
                    if *rem == 0 {
                        break;
                    }
                }
            }
            match dir {
                Direction::Forward => self.relax(d, g.out_arcs(u)),
                Direction::Backward => self.relax(d, g.in_arcs(u)),
            }
        }
        Ok(order)
    }

    #[inline]
    fn relax(&mut self, d: Weight, arcs: impl Iterator<Item = (NodeId, Weight)>) {
        for (v, w) in arcs {
            let nd = add_dist(d, w);
            if nd < self.dist[v as usize] {
                if self.dist[v as usize] == INFINITY {
                    self.touched.push(v);
                }
                self.dist[v as usize] = nd;
                self.heap.push(Reverse((nd, v)));
            }
        }
    }

    /// Exact point-to-point distance, stopping as soon as `t` is settled.
    pub fn distance(&mut self, g: &Graph, s: NodeId, t: NodeId) -> Result<Weight> {
        self.run(g, s, Direction::Forward, Some(&[t]), None)?;
        Ok(self.dist(t))
    }
}

/// One-shot Dijkstra from `s` over outgoing arcs.
pub fn dijkstra(g: &Graph, s: NodeId, targets: Option<&[NodeId]>, rank_limit: Option<usize>) -> Result<DijkstraResult> {
    dijkstra_directed(g, s, Direction::Forward, targets, rank_limit)
}

/// One-shot Dijkstra in either direction; backward searches follow
/// incoming arcs and yield distances *to* `s`.
pub fn dijkstra_directed(
    g: &Graph,
    s: NodeId,
    dir: Direction,
    targets: Option<&[NodeId]>,
    rank_limit: Option<usize>,
) -> Result<DijkstraResult> {
    let mut search = Dijkstra::new(g.node_count());
    let settle_order = search.run(g, s, dir, targets, rank_limit)?;
    Ok(DijkstraResult {
        dist: search.dist,
        settle_order,
    })
}

/// All-pairs distance matrix by `n` forward searches; row `s`, column `t`.
pub fn all_pairs(g: &Graph) -> Vec<Vec<Weight>> {
    let mut search = Dijkstra::new(g.node_count());
    (0..g.node_count() as NodeId)
        .map(|s| {
            search
                .run(g, s, Direction::Forward, None, None)
                .expect("source in range");
            search.dist.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{diamond, path4};

    /// Shortest walk lengths by enumerating all simple paths.
    fn brute_force(g: &Graph, s: NodeId) -> Vec<Weight> {
        fn go(g: &Graph, v: NodeId, len: Weight, on: &mut Vec<bool>, best: &mut Vec<Weight>) {
            best[v as usize] = best[v as usize].min(len);
            for (w, c) in g.out_arcs(v) {
                if !on[w as usize] {
                    on[w as usize] = true;
                    go(g, w, len + c, on, best);
                    on[w as usize] = false;
                }
            }
        }
        let mut best = vec![INFINITY; g.node_count()];
        let mut on = vec![false; g.node_count()];
        on[s as usize] = true;
        go(g, s, 0, &mut on, &mut best);
        best
    }

    #[test]
    fn diamond_distances() {
        let g = diamond();
        let res = dijkstra(&g, 0, None, None).unwrap();
        assert_eq!(res.dist, brute_force(&g, 0));
        assert_eq!(res.dist, vec![0, 2, 4, 1, 5]);
        assert_eq!(dijkstra(&g, 1, None, None).unwrap().dist[3], 3);
        for s in 0..5 {
            assert_eq!(dijkstra(&g, s, None, None).unwrap().dist, brute_force(&g, s));
        }
    }

    #[test]
    fn self_distance_is_zero_and_unreachable_is_infinite() {
        let g = Graph::from_arcs(3, [(0, 1, 4)]).unwrap();
        let res = dijkstra(&g, 0, None, None).unwrap();
        assert_eq!(res.dist, vec![0, 4, INFINITY]);
        let res = dijkstra(&g, 2, None, None).unwrap();
        assert_eq!(res.dist[2], 0);
        assert_eq!(res.settle_order, vec![2]);
    }

    #[test]
    fn settle_order_and_early_stop() {
        let g = path4();
        let res = dijkstra(&g, 0, None, None).unwrap();
        assert_eq!(res.settle_order, vec![0, 1, 2, 3]);
        let res = dijkstra(&g, 0, None, Some(2)).unwrap();
        assert_eq!(res.settle_order, vec![0, 1]);
        let res = dijkstra(&g, 0, Some(&[2]), None).unwrap();
        assert_eq!(res.settle_order, vec![0, 1, 2]);
        assert_eq!(res.dist[2], 2);
    }

    #[test]
    fn ties_settle_lower_id_first() {
        let star = Graph::from_arcs(5, (1..5).map(|v| (0, v, 3))).unwrap();
        let res = dijkstra(&star, 0, None, None).unwrap();
        assert_eq!(res.settle_order, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn backward_search_uses_incoming_arcs() {
        let g = Graph::from_arcs(3, [(0, 1, 2), (1, 2, 3)]).unwrap();
        let res = dijkstra_directed(&g, 2, Direction::Backward, None, None).unwrap();
        assert_eq!(res.dist, vec![5, 3, 0]);
    }

    #[test]
    fn source_out_of_range() {
        let g = path4();
        assert!(dijkstra(&g, 4, None, None).is_err());
    }
}
