//! Node contraction: witness searches, shortcut insertion and the
//! priority terms used to order nodes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{ChIndex, ChParams, SearchGraph, SearchLimits, NO_MIDDLE};
use crate::{add_dist, Graph, NodeId, Weight, INFINITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DynArc {
    node: NodeId,
    weight: Weight,
    middle: NodeId,
    /// Number of input arcs this arc stands for.
    originals: u32,
}

/// A shortcut `from -> to` bypassing `middle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shortcut {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: Weight,
    pub middle: NodeId,
}

/// Bounded Dijkstra over the remaining (uncontracted) graph.
#[derive(Debug, Clone)]
pub struct WitnessSearch {
    dist: Vec<Weight>,
    hops: Vec<u32>,
    touched: Vec<NodeId>,
    heap: BinaryHeap<Reverse<(Weight, NodeId)>>,
}

impl WitnessSearch {
    pub fn new(n: usize) -> WitnessSearch {
        WitnessSearch {
            dist: vec![INFINITY; n],
            hops: vec![0; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn run(&mut self, out: &[Vec<DynArc>], source: NodeId, excluded: NodeId, max_bound: Weight, limits: SearchLimits) {
        for &v in &self.touched {
            self.dist[v as usize] = INFINITY;
        }
        self.touched.clear();
        self.heap.clear();
        self.dist[source as usize] = 0;
        self.hops[source as usize] = 0;
        self.touched.push(source);
        self.heap.push(Reverse((0, source)));
        let mut settled = 0usize;
        while let Some(Reverse((d, u))) = self.heap.pop() {
            if d > self.dist[u as usize] {
                continue;
            }
            if d > max_bound || settled >= limits.settled {
                break;
            }
            settled += 1;
            let hops = self.hops[u as usize];
            if hops >= limits.hops {
                continue;
            }
            for arc in &out[u as usize] {
                if arc.node == excluded {
                    continue;
                }
                let nd = add_dist(d, arc.weight);
                let slot = arc.node as usize;
                if nd < self.dist[slot] {
                    if self.dist[slot] == INFINITY {
                        self.touched.push(arc.node);
                    }
                    self.dist[slot] = nd;
                    self.hops[slot] = hops + 1;
                    self.heap.push(Reverse((nd, arc.node)));
                }
            }
        }
    }

    fn dist(&self, v: NodeId) -> Weight {
        self.dist[v as usize]
    }
}

/// The remaining graph during contraction together with the search-graph
/// arcs collected so far.
#[derive(Debug, Clone)]
pub struct ContractionState {
    out: Vec<Vec<DynArc>>,
    inc: Vec<Vec<DynArc>>,
    contracted: Vec<bool>,
    depth: Vec<u32>,
    order: Vec<NodeId>,
    up: Vec<Vec<(NodeId, Weight, NodeId)>>,
    down: Vec<Vec<(NodeId, Weight, NodeId)>>,
    witness: WitnessSearch,
}

impl ContractionState {
    pub fn new(g: &Graph) -> ContractionState {
        let n = g.node_count();
        let arc = |(node, weight)| DynArc {
            node,
            weight,
            middle: NO_MIDDLE,
            originals: 1,
        };
        ContractionState {
            out: (0..n as NodeId).map(|v| g.out_arcs(v).map(arc).collect()).collect(),
            inc: (0..n as NodeId).map(|v| g.in_arcs(v).map(arc).collect()).collect(),
            contracted: vec![false; n],
            depth: vec![0; n],
            order: Vec::with_capacity(n),
            up: vec![Vec::new(); n],
            down: vec![Vec::new(); n],
            witness: WitnessSearch::new(n),
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn is_contracted(&self, v: NodeId) -> bool {
        self.contracted[v as usize]
    }

    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v as usize]
    }

    /// Uncontracted neighbours of `v` in either direction, deduplicated.
    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut ns: Vec<NodeId> = self.out[v as usize]
            .iter()
            .chain(&self.inc[v as usize])
            .map(|a| a.node)
            .collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// Whether the remaining graph has a `u -> w` path of length at most
    /// `bound` avoiding `excluded`, as far as `limits` let the search see.
    pub fn witness_search(
        &mut self,
        u: NodeId,
        excluded: NodeId,
        w: NodeId,
        bound: Weight,
        limits: SearchLimits,
    ) -> bool {
        self.witness.run(&self.out, u, excluded, bound, limits);
        u != w && self.witness.dist(w) <= bound
    }

    /// Simulates contracting `v` and scores it; lower is contracted first.
    pub fn priority(&mut self, v: NodeId, params: &ChParams) -> f64 {
        let mut ws = std::mem::replace(&mut self.witness, WitnessSearch::new(0));
        let p = self.priority_with(v, params, &mut ws);
        self.witness = ws;
        p
    }

    /// Same as [`priority`](Self::priority) with caller-provided scratch,
    /// so several threads can score nodes of one state.
    pub fn priority_with(&self, v: NodeId, params: &ChParams, ws: &mut WitnessSearch) -> f64 {
        let ins = &self.inc[v as usize];
        let outs = &self.out[v as usize];
        let removed = (ins.len() + outs.len()) as f64;
        let removed_orig: u64 = ins.iter().chain(outs).map(|a| a.originals as u64).sum();
        let mut added = 0u64;
        let mut added_orig = 0u64;
        for a_in in ins {
            let max_bound = outs
                .iter()
                .filter(|a| a.node != a_in.node)
                .map(|a| add_dist(a_in.weight, a.weight))
                .max();
            let Some(max_bound) = max_bound else { continue };
            ws.run(&self.out, a_in.node, v, max_bound, params.witness_limits);
            for a_out in outs.iter().filter(|a| a.node != a_in.node) {
                if ws.dist(a_out.node) > add_dist(a_in.weight, a_out.weight) {
                    added += 1;
                    added_orig += (a_in.originals + a_out.originals) as u64;
                }
            }
        }
        let edge_quotient = if removed > 0.0 { added as f64 / removed } else { 0.0 };
        let original_quotient = if removed_orig > 0 {
            added_orig as f64 / removed_orig as f64
        } else {
            0.0
        };
        params.edge_quotient_coeff * edge_quotient
            + params.original_quotient_coeff * original_quotient
            + params.depth_coeff * self.depth[v as usize] as f64
    }

    /// Contracts `v` and returns the shortcuts inserted for it.
    pub fn contract(&mut self, v: NodeId, limits: SearchLimits) -> Vec<Shortcut> {
        assert!(!self.contracted[v as usize], "node {v} contracted twice");
        let ins = std::mem::take(&mut self.inc[v as usize]);
        let outs = std::mem::take(&mut self.out[v as usize]);

        self.up[v as usize] = outs.iter().map(|a| (a.node, a.weight, a.middle)).collect();
        self.down[v as usize] = ins.iter().map(|a| (a.node, a.weight, a.middle)).collect();
        for a in &ins {
            self.out[a.node as usize].retain(|b| b.node != v);
        }
        for a in &outs {
            self.inc[a.node as usize].retain(|b| b.node != v);
        }
        self.contracted[v as usize] = true;
        self.order.push(v);

        let mut shortcuts = Vec::new();
        for a_in in &ins {
            let u = a_in.node;
            let max_bound = outs
                .iter()
                .filter(|a| a.node != u)
                .map(|a| add_dist(a_in.weight, a.weight))
                .max();
            let Some(max_bound) = max_bound else { continue };
            self.witness.run(&self.out, u, v, max_bound, limits);
            for a_out in outs.iter().filter(|a| a.node != u) {
                let weight = add_dist(a_in.weight, a_out.weight);
                if self.witness.dist(a_out.node) > weight {
                    let arc = DynArc {
                        node: a_out.node,
                        weight,
                        middle: v,
                        originals: a_in.originals + a_out.originals,
                    };
                    if self.insert_arc(u, arc) {
                        shortcuts.push(Shortcut {
                            from: u,
                            to: a_out.node,
                            weight,
                            middle: v,
                        });
                    }
                }
            }
        }

        let d = self.depth[v as usize] + 1;
        for a in ins.iter().chain(&outs) {
            let slot = &mut self.depth[a.node as usize];
            *slot = (*slot).max(d);
        }
        shortcuts
    }

    /// Adds `from -> arc.node` unless an arc at least as light exists.
    fn insert_arc(&mut self, from: NodeId, arc: DynArc) -> bool {
        let to = arc.node;
        let back = DynArc { node: from, ..arc };
        if let Some(existing) = self.out[from as usize].iter_mut().find(|a| a.node == to) {
            if existing.weight <= arc.weight {
                return false;
            }
            *existing = arc;
            let mirror = self.inc[to as usize]
                .iter_mut()
                .find(|a| a.node == from)
                .expect("adjacency lists mirror each other");
            *mirror = back;
            return true;
        }
        self.out[from as usize].push(arc);
        self.inc[to as usize].push(back);
        true
    }

    /// Converts the fully contracted state into a search index.
    pub fn into_index(self) -> ChIndex {
        let n = self.node_count();
        assert_eq!(self.order.len(), n, "all nodes must be contracted");
        let mut rank = vec![0u32; n];
        for (pos, &v) in self.order.iter().enumerate() {
            rank[v as usize] = pos as u32;
        }
        ChIndex {
            rank,
            up: SearchGraph::from_lists(self.up),
            down: SearchGraph::from_lists(self.down),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path4, triangle};

    const WIDE: SearchLimits = SearchLimits { hops: 5, settled: 1000 };

    #[test]
    fn witness_found_via_direct_arc() {
        let mut st = ContractionState::new(&triangle());
        assert!(st.witness_search(0, 1, 2, 2, WIDE));
        assert!(!st.witness_search(0, 1, 2, 1, WIDE));
    }

    #[test]
    fn no_witness_on_path() {
        let mut st = ContractionState::new(&path4());
        assert!(!st.witness_search(0, 1, 2, 2, WIDE));
    }

    #[test]
    fn zero_hop_limit_never_finds_witness() {
        let mut st = ContractionState::new(&triangle());
        let limits = SearchLimits { hops: 0, settled: 1000 };
        assert!(!st.witness_search(0, 1, 2, 100, limits));
    }

    #[test]
    fn priority_terms_on_path() {
        let params = ChParams::default();
        let mut st = ContractionState::new(&path4());
        assert_eq!(st.priority(0, &params), 0.0);
        // Node 1: 2 of 4 incident arcs become shortcuts; the shortcuts
        // stand for 4 of the 4 input arcs removed with it.
        assert_eq!(st.priority(1, &params), 2.0 * 0.5 + 4.0 * 1.0);
    }

    #[test]
    fn isolated_node_scores_depth_only() {
        let g = Graph::from_arcs(3, [(0, 1, 1), (1, 0, 1)]).unwrap();
        let mut st = ContractionState::new(&g);
        assert_eq!(st.priority(2, &ChParams::default()), 0.0);
        st.contract(0, WIDE);
        assert_eq!(st.depth(1), 1);
        assert_eq!(st.priority(1, &ChParams::default()), 1.0);
    }

    #[test]
    fn contract_in_path_order_adds_nothing() {
        let mut st = ContractionState::new(&path4());
        let total: usize = [0, 1, 2, 3].iter().map(|&v| st.contract(v, WIDE).len()).sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn contract_middle_first_adds_shortcuts() {
        let mut st = ContractionState::new(&path4());
        let mut first = st.contract(1, WIDE);
        first.sort();
        assert_eq!(
            first,
            vec![
                Shortcut {
                    from: 0,
                    to: 2,
                    weight: 2,
                    middle: 1
                },
                Shortcut {
                    from: 2,
                    to: 0,
                    weight: 2,
                    middle: 1
                },
            ]
        );
        let mut second = st.contract(2, WIDE);
        second.sort();
        assert_eq!(
            second,
            vec![
                Shortcut {
                    from: 0,
                    to: 3,
                    weight: 3,
                    middle: 2
                },
                Shortcut {
                    from: 3,
                    to: 0,
                    weight: 3,
                    middle: 2
                },
            ]
        );
        assert!(st.contract(0, WIDE).is_empty());
        assert!(st.contract(3, WIDE).is_empty());
    }

    #[test]
    fn triangle_contraction_uses_witness() {
        let mut st = ContractionState::new(&triangle());
        assert!(st.contract(1, WIDE).is_empty());
    }

    #[test]
    fn heavier_parallel_arc_is_replaced() {
        // 0 -> 1 -> 2 costs 2, direct 0 -> 2 costs 5.
        let g = Graph::from_arcs(3, [(0, 1, 1), (1, 2, 1), (0, 2, 5)]).unwrap();
        let mut st = ContractionState::new(&g);
        let sc = st.contract(1, WIDE);
        assert_eq!(
            sc,
            vec![Shortcut {
                from: 0,
                to: 2,
                weight: 2,
                middle: 1
            }]
        );
        assert_eq!(
            st.out[0],
            vec![DynArc {
                node: 2,
                weight: 2,
                middle: 1,
                originals: 2
            }]
        );
        assert_eq!(
            st.inc[2],
            vec![DynArc {
                node: 0,
                weight: 2,
                middle: 1,
                originals: 2
            }]
        );
    }
}
