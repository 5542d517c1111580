//! Graph Voronoi regions of the transit nodes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::check_node;
use crate::{add_dist, Error, Graph, NodeId, Result, Weight, INFINITY};

/// Region id of nodes that cannot reach any transit node.
pub const NO_REGION: NodeId = NodeId::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiAssignment {
    /// Representative transit node per node, or [`NO_REGION`].
    pub rep: Vec<NodeId>,
    /// Distance from each node to its representative.
    pub dist: Vec<Weight>,
}

impl VoronoiAssignment {
    pub fn region_of(&self, v: NodeId) -> NodeId {
        self.rep[v as usize]
    }
}

/// Assigns every node `u` the transit node `r` minimising `dist(u, r)`,
/// with ties going to the lower id of `r`.
///
/// This is one multi-source Dijkstra over incoming arcs, seeded with every
/// transit node at distance 0 and ordered by `(distance, representative)`.
pub fn compute_voronoi(g: &Graph, transit: &[NodeId]) -> Result<VoronoiAssignment> {
    let n = g.node_count();
    if transit.is_empty() {
        return Err(Error::Parameter(
            "Voronoi regions need at least one transit node".into(),
        ));
    }
    let mut dist = vec![INFINITY; n];
    let mut rep = vec![NO_REGION; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &t in transit {
        check_node(t, n)?;
        if (0, t) < (dist[t as usize], rep[t as usize]) {
            dist[t as usize] = 0;
            rep[t as usize] = t;
            heap.push(Reverse((0, t, t)));
        }
    }
    while let Some(Reverse((d, r, u))) = heap.pop() {
        if settled[u as usize] || (d, r) != (dist[u as usize], rep[u as usize]) {
            continue;
        }
        settled[u as usize] = true;
        for (w, c) in g.in_arcs(u) {
            let label = (add_dist(d, c), r);
            if label.0 < INFINITY && label < (dist[w as usize], rep[w as usize]) {
                dist[w as usize] = label.0;
                rep[w as usize] = r;
                heap.push(Reverse((label.0, r, w)));
            }
        }
    }
    Ok(VoronoiAssignment { rep, dist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path4, star};

    #[test]
    fn path_regions() {
        let vor = compute_voronoi(&path4(), &[2, 3]).unwrap();
        assert_eq!(vor.rep, vec![2, 2, 2, 3]);
        assert_eq!(vor.dist, vec![2, 1, 0, 0]);
    }

    #[test]
    fn all_transit_is_identity() {
        let vor = compute_voronoi(&path4(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(vor.rep, vec![0, 1, 2, 3]);
    }

    #[test]
    fn unreachable_gets_dummy_region() {
        // Node 2 has no path to node 0.
        let g = Graph::from_arcs(3, [(1, 0, 1), (0, 2, 1)]).unwrap();
        let vor = compute_voronoi(&g, &[0]).unwrap();
        assert_eq!(vor.rep, vec![0, 0, NO_REGION]);
    }

    #[test]
    fn ties_go_to_lower_id() {
        // Center 0 is one hop from every leaf.
        let vor = compute_voronoi(&star(4), &[3, 1]).unwrap();
        assert_eq!(vor.rep[0], 1);
        assert_eq!(vor.rep[2], 1);
        assert_eq!(vor.rep[4], 1);
        assert_eq!(vor.rep[3], 3);
    }

    #[test]
    fn direction_follows_distance_to_representative() {
        // 1 -> 0 costs 1 but 0 -> 1 costs 10; 1 reaches 0 cheaply.
        let g = Graph::from_arcs(3, [(1, 0, 1), (0, 1, 10), (1, 2, 5), (2, 1, 5)]).unwrap();
        let vor = compute_voronoi(&g, &[0, 2]).unwrap();
        assert_eq!(vor.rep[1], 0);
        assert!(compute_voronoi(&g, &[]).is_err());
    }
}
