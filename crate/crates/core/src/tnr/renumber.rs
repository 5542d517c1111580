//! Node renumbering that moves the transit nodes to ids `[0, k)`.
//!
//! Transit nodes are always ordered level by level from the top of the
//! hierarchy, keeping input order inside a level. The remaining nodes use a
//! selectable [`RenumberStrategy`].

use std::fmt;
use std::str::FromStr;

use crate::ch::ChIndex;
use crate::tnr::TransitSet;
use crate::{Error, NodeId, Permutation, Result};

/// Ordering of the non-transit nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenumberStrategy {
    /// Post-order of upward DFS runs, ids handed out from `k` upwards.
    #[default]
    DfsIncreasing,
    /// Same traversal, ids handed out from `n - 1` downwards.
    DfsDecreasing,
    /// Top-down by level, input order inside a level.
    InputLevel,
}

impl RenumberStrategy {
    pub const ALL: [RenumberStrategy; 3] = [
        RenumberStrategy::DfsIncreasing,
        RenumberStrategy::DfsDecreasing,
        RenumberStrategy::InputLevel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RenumberStrategy::DfsIncreasing => "dfs-increasing",
            RenumberStrategy::DfsDecreasing => "dfs-decreasing",
            RenumberStrategy::InputLevel => "input-level",
        }
    }

    pub fn id(self) -> u32 {
        match self {
            RenumberStrategy::DfsIncreasing => 0,
            RenumberStrategy::DfsDecreasing => 1,
            RenumberStrategy::InputLevel => 2,
        }
    }

    pub fn from_id(id: u32) -> Result<RenumberStrategy> {
        RenumberStrategy::ALL
            .into_iter()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::UnknownStrategy(format!("strategy id {id}")))
    }
}

impl fmt::Display for RenumberStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RenumberStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<RenumberStrategy> {
        RenumberStrategy::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// Hierarchy level per node: 0 for nodes without lower neighbours, else one
/// more than the highest level among lower-ranked neighbours.
pub fn levels(ch: &ChIndex) -> Vec<u32> {
    let mut level = vec![0u32; ch.node_count()];
    for v in ch.order() {
        let next = level[v as usize] + 1;
        for (x, _) in ch.up().arcs(v).chain(ch.down().arcs(v)) {
            let slot = &mut level[x as usize];
            *slot = (*slot).max(next);
        }
    }
    level
}

fn level_order(level: &[u32], nodes: impl Iterator<Item = NodeId>) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = nodes.collect();
    nodes.sort_unstable_by_key(|&v| (std::cmp::Reverse(level[v as usize]), v));
    nodes
}

/// Non-transit nodes in DFS post-order. A DFS is started from every node in
/// input order and only walks arcs towards more important, not yet visited
/// non-transit nodes.
fn dfs_postorder(ch: &ChIndex, transit: &TransitSet) -> Vec<NodeId> {
    let n = ch.node_count();
    let neighbors = |v: NodeId| {
        let mut xs: Vec<NodeId> = ch
            .up()
            .arcs(v)
            .chain(ch.down().arcs(v))
            .map(|(x, _)| x)
            .filter(|&x| !transit.contains(x))
            .collect();
        xs.sort_unstable();
        xs.dedup();
        xs
    };
    let mut visited = vec![false; n];
    let mut post = Vec::with_capacity(n - transit.len());
    let mut stack: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();
    for root in 0..n as NodeId {
        if visited[root as usize] || transit.contains(root) {
            continue;
        }
        visited[root as usize] = true;
        stack.push((root, neighbors(root), 0));
        while let Some((v, succ, next)) = stack.last_mut() {
            if let Some(&x) = succ.get(*next) {
                *next += 1;
                if !visited[x as usize] {
                    visited[x as usize] = true;
                    stack.push((x, neighbors(x), 0));
                }
            } else {
                post.push(*v);
                stack.pop();
            }
        }
    }
    post
}

/// Permutation (old id to new id) that gives the transit nodes ids `[0, k)`
/// and orders the rest by `strategy`.
pub fn renumber(ch: &ChIndex, transit: &TransitSet, strategy: RenumberStrategy) -> Result<Permutation> {
    let n = ch.node_count();
    let k = transit.len();
    let level = levels(ch);
    let mut new_id = vec![0 as NodeId; n];
    for (i, &v) in level_order(&level, transit.nodes().iter().copied()).iter().enumerate() {
        new_id[v as usize] = i as NodeId;
    }
    let rest: Vec<NodeId> = match strategy {
        RenumberStrategy::DfsIncreasing => dfs_postorder(ch, transit),
        RenumberStrategy::DfsDecreasing => {
            let mut post = dfs_postorder(ch, transit);
            post.reverse();
            post
        }
        RenumberStrategy::InputLevel => level_order(&level, (0..n as NodeId).filter(|&v| !transit.contains(v))),
    };
    for (i, &v) in rest.iter().enumerate() {
        new_id[v as usize] = (k + i) as NodeId;
    }
    Permutation::new(new_id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ch::{build_hierarchy, ChParams};
    use crate::generators::{path4, random_road_like};
    use crate::tnr::select_transit_nodes;
    use crate::Graph;

    fn p4() -> ChIndex {
        build_hierarchy(&path4(), &ChParams::default(), Some(&[0, 1, 2, 3])).unwrap()
    }

    #[test]
    fn path_renumbering() {
        let ch = p4();
        let t = select_transit_nodes(&ch, 2).unwrap();
        let p = renumber(&ch, &t, RenumberStrategy::DfsIncreasing).unwrap();
        assert_eq!(p.as_slice(), &[3, 2, 1, 0]);
        let p = renumber(&ch, &t, RenumberStrategy::DfsDecreasing).unwrap();
        assert_eq!(p.as_slice(), &[2, 3, 1, 0]);
        let p = renumber(&ch, &t, RenumberStrategy::InputLevel).unwrap();
        assert_eq!(p.as_slice(), &[3, 2, 1, 0]);
    }

    #[test]
    fn all_transit_chain_is_reverse_rank() {
        let ch = p4();
        assert_eq!(levels(&ch), vec![0, 1, 2, 3]);
        let t = select_transit_nodes(&ch, 4).unwrap();
        for s in RenumberStrategy::ALL {
            assert_eq!(renumber(&ch, &t, s).unwrap().as_slice(), &[3, 2, 1, 0]);
        }
    }

    #[test]
    fn single_node_identity() {
        let g = Graph::from_arcs(1, []).unwrap();
        let ch = build_hierarchy(&g, &ChParams::default(), None).unwrap();
        let t = select_transit_nodes(&ch, 1).unwrap();
        assert_eq!(renumber(&ch, &t, RenumberStrategy::default()).unwrap().as_slice(), &[0]);
    }

    #[test]
    fn transit_first_and_bijective() {
        let g = random_road_like(150, 1000, 11);
        let ch = build_hierarchy(&g, &ChParams::default(), None).unwrap();
        let t = select_transit_nodes(&ch, 20).unwrap();
        for s in RenumberStrategy::ALL {
            let p = renumber(&ch, &t, s).unwrap();
            for v in 0..150 {
                assert_eq!(t.contains(v), (p.apply(v) as usize) < 20, "{s}");
            }
        }
    }

    #[test]
    fn dfs_numbers_successors_first() {
        let g = random_road_like(120, 1000, 5);
        let ch = build_hierarchy(&g, &ChParams::default(), None).unwrap();
        let t = select_transit_nodes(&ch, 10).unwrap();
        let post = dfs_postorder(&ch, &t);
        let mut pos = vec![usize::MAX; 120];
        for (i, &v) in post.iter().enumerate() {
            pos[v as usize] = i;
        }
        // The first node of every DFS tree (the lowest unvisited id) is
        // numbered after all its higher non-transit neighbours.
        let root = (0..120).find(|&v| !t.contains(v)).unwrap();
        for (x, _) in ch.up().arcs(root).chain(ch.down().arcs(root)) {
            if !t.contains(x) {
                assert!(pos[x as usize] < pos[root as usize]);
            }
        }
    }

    #[test]
    fn strategy_names() {
        for s in RenumberStrategy::ALL {
            assert_eq!(s.as_str().parse::<RenumberStrategy>().unwrap(), s);
            assert_eq!(RenumberStrategy::from_id(s.id()).unwrap(), s);
        }
        assert!(matches!(
            "bfs".parse::<RenumberStrategy>(),
            Err(Error::UnknownStrategy(_))
        ));
    }
}
