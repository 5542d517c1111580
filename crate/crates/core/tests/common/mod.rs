//! Brute-force oracles shared by the integration tests. They only use the
//! plain Dijkstra search and the input graph, never the structures under
//! test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use chtnr::dijkstra::dijkstra_directed;
use chtnr::generators::random_road_like;
use chtnr::{Direction, Graph, NodeId, Weight, INFINITY};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded strongly connected instances with `n` in `[lo, hi]` and weights
/// in `[1, 1000]`.
pub fn instances(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            random_road_like(n, 1000, rng.gen())
        })
        .collect()
}

fn arcs(g: &Graph, v: NodeId, dir: Direction) -> Vec<(NodeId, Weight)> {
    match dir {
        Direction::Forward => g.out_arcs(v).collect(),
        Direction::Backward => g.in_arcs(v).collect(),
    }
}

/// Per node `y` reached from `v` along shortest paths (in direction `dir`):
/// the first transit nodes over shortest `v`-`y` paths that contain one,
/// and whether some shortest path contains none.
struct FirstTransit {
    dist: Vec<Weight>,
    first: Vec<BTreeSet<NodeId>>,
    free: Vec<bool>,
    /// Same two facts, computed before `y` itself is considered.
    first_before: Vec<BTreeSet<NodeId>>,
    free_before: Vec<bool>,
}

fn first_transit(g: &Graph, v: NodeId, dir: Direction, transit: &[bool]) -> FirstTransit {
    let res = dijkstra_directed(g, v, dir, None, None).unwrap();
    let n = g.node_count();
    let dist = res.dist;
    let mut first = vec![BTreeSet::new(); n];
    let mut free = vec![false; n];
    let mut first_before = vec![BTreeSet::new(); n];
    let mut free_before = vec![false; n];
    // Settle order is non-decreasing in distance; with positive weights
    // every shortest-path predecessor comes earlier.
    for &y in &res.settle_order {
        let yi = y as usize;
        let (mut f, mut fr) = (BTreeSet::new(), y == v);
        if y != v {
            for (x, c) in arcs(g, y, dir.reversed()) {
                let xi = x as usize;
                if dist[xi] != INFINITY && dist[xi] + c == dist[yi] {
                    f.extend(first[xi].iter().copied());
                    fr |= free[xi];
                }
            }
        }
        first_before[yi] = f.clone();
        free_before[yi] = fr;
        if transit[yi] {
            if fr {
                f.insert(y);
            }
            fr = false;
        }
        first[yi] = f;
        free[yi] = fr;
    }
    FirstTransit {
        dist,
        first,
        free,
        first_before,
        free_before,
    }
}

/// Transit nodes that are the first transit node on some shortest path
/// leaving `v` (or, backward, the last one on some shortest path into
/// `v`), with their exact distances.
pub fn access_some(g: &Graph, v: NodeId, dir: Direction, transit: &[bool]) -> Vec<(NodeId, Weight)> {
    let ft = first_transit(g, v, dir, transit);
    let all: BTreeSet<NodeId> = ft.first.iter().flatten().copied().collect();
    all.into_iter().map(|a| (a, ft.dist[a as usize])).collect()
}

/// Transit nodes `a` such that no shortest `v`-`a` path contains another
/// transit node.
pub fn access_strict(g: &Graph, v: NodeId, dir: Direction, transit: &[bool]) -> Vec<(NodeId, Weight)> {
    let ft = first_transit(g, v, dir, transit);
    (0..g.node_count())
        .filter(|&a| transit[a] && ft.dist[a] != INFINITY && ft.free_before[a] && ft.first_before[a].is_empty())
        .map(|a| (a as NodeId, ft.dist[a]))
        .collect()
}

/// For target `t`: whether each source has a shortest path to `t` that
/// avoids every transit node (endpoints included).
pub fn transit_free_to(g: &Graph, t: NodeId, transit: &[bool]) -> Vec<bool> {
    let ft = first_transit(g, t, Direction::Backward, transit);
    ft.free
}

/// Dense all-pairs distances, `[s][t]`.
pub fn apsp(g: &Graph) -> Vec<Vec<Weight>> {
    chtnr::dijkstra::all_pairs(g)
}
