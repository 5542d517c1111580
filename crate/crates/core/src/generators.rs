//! Small fixture graphs and seeded random instances for tests and
//! benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::is_strongly_connected;
use crate::{Graph, NodeId, Weight};

fn bidirected(n: usize, edges: &[(NodeId, NodeId, Weight)]) -> Graph {
    let arcs = edges.iter().flat_map(|&(u, v, w)| [(u, v, w), (v, u, w)]);
    Graph::from_arcs(n, arcs).expect("fixture is valid")
}

/// Undirected path `0 - 1 - 2 - 3` with unit weights.
pub fn path4() -> Graph {
    bidirected(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)])
}

/// Five-node "diamond": `0-1 (2), 1-2 (2), 0-3 (1), 3-2 (4), 2-4 (1)`.
pub fn diamond() -> Graph {
    bidirected(5, &[(0, 1, 2), (1, 2, 2), (0, 3, 1), (3, 2, 4), (2, 4, 1)])
}

/// Triangle `0-1 (1), 1-2 (1), 0-2 (2)`.
pub fn triangle() -> Graph {
    bidirected(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 2)])
}

/// `width x height` 4-neighbour grid with unit weights in both directions.
/// Node `(x, y)` has id `y * width + x`.
pub fn grid(width: usize, height: usize) -> Graph {
    let id = |x: usize, y: usize| (y * width + x) as NodeId;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y), 1));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1), 1));
            }
        }
    }
    bidirected(width * height, &edges)
}

/// Star with center 0 and `leaves` unit-weight spokes in both directions.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves as NodeId).map(|v| (0, v, 1)).collect();
    bidirected(leaves + 1, &edges)
}

/// Strongly connected, road-like random graph.
///
/// Nodes are random points in the unit square joined to their three
/// nearest neighbours; components are then linked by their closest pair,
/// and roughly a tenth of the edges are made one-way where that keeps the
/// graph strongly connected. Every arc gets an independent weight drawn
/// uniformly from `[1, max_weight]`.
pub fn random_road_like(n: usize, max_weight: Weight, seed: u64) -> Graph {
    assert!(n >= 1 && max_weight >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let d2 = |a: usize, b: usize| {
        let (dx, dy) = (pts[a].0 - pts[b].0, pts[a].1 - pts[b].1);
        dx * dx + dy * dy
    };

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
        others.sort_by(|&x, &y| d2(a, x).total_cmp(&d2(a, y)));
        for &b in others.iter().take(3) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();

    // Link components through their closest node pair.
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        let mut y = x;
        while comp[y] != r {
            let next = comp[y];
            comp[y] = r;
            y = next;
        }
        r
    }
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra] = rb;
    }
    loop {
        let root = find(&mut comp, 0);
        let outside: Vec<usize> = (0..n).filter(|&v| find(&mut comp, v) != root).collect();
        if outside.is_empty() {
            break;
        }
        let inside: Vec<usize> = (0..n).filter(|&v| find(&mut comp, v) == root).collect();
        let mut best = (f64::INFINITY, 0, 0);
        for &a in &inside {
            for &b in &outside {
                if d2(a, b) < best.0 {
                    best = (d2(a, b), a, b);
                }
            }
        }
        edges.push((best.1.min(best.2), best.1.max(best.2)));
        let (ra, rb) = (find(&mut comp, best.1), find(&mut comp, best.2));
        comp[rb] = ra;
    }

    let mut arcs: Vec<(NodeId, NodeId)> = edges
        .iter()
        .flat_map(|&(a, b)| [(a as NodeId, b as NodeId), (b as NodeId, a as NodeId)])
        .collect();
    let weights: Vec<Weight> = (0..arcs.len()).map(|_| rng.gen_range(1..=max_weight)).collect();
    let mut weighted: Vec<(NodeId, NodeId, Weight)> =
        arcs.drain(..).zip(weights).map(|((u, v), w)| (u, v, w)).collect();

    let mut candidates: Vec<usize> = (0..weighted.len()).collect();
    candidates.shuffle(&mut rng);
    let one_way = weighted.len() / 20;
    let mut removed = 0;
    for idx in candidates {
        if removed >= one_way {
            break;
        }
        let mut trial = weighted.clone();
        trial.swap_remove(idx.min(trial.len() - 1));
        let g = Graph::from_arcs(n, trial.iter().copied()).expect("valid arcs");
        if is_strongly_connected(&g) {
            weighted = trial;
            removed += 1;
        }
    }
    Graph::from_arcs(n, weighted).expect("valid arcs")
}

/// Sparse random digraph with no connectivity guarantee: `m` arcs with
/// uniform endpoints and weights in `[1, max_weight]`.
pub fn random_digraph(n: usize, m: usize, max_weight: Weight, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<_> = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n as NodeId),
                rng.gen_range(0..n as NodeId),
                rng.gen_range(1..=max_weight),
            )
        })
        .collect();
    Graph::from_arcs(n, arcs).expect("valid arcs")
}
