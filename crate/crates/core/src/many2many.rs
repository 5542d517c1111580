//! Bucket-based many-to-many distance tables over a contraction hierarchy.
//!
//! Every target runs a backward upward search and leaves `(target, dist)`
//! entries in the buckets of the nodes it settles. Every source then runs
//! a forward upward search and combines its labels with the buckets it
//! meets. Half searches do not stall, so no meeting node is ever lost.

use rayon::prelude::*;

use crate::ch::{ChIndex, UpwardSearch};
use crate::error::check_node;
use crate::{add_dist, NodeId, Result, Weight, INFINITY};

/// Dense `|sources| x |targets|` matrix of exact distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    sources: Vec<NodeId>,
    targets: Vec<NodeId>,
    dist: Vec<Weight>,
}

impl DistanceTable {
    pub fn from_parts(sources: Vec<NodeId>, targets: Vec<NodeId>, dist: Vec<Weight>) -> DistanceTable {
        assert_eq!(dist.len(), sources.len() * targets.len());
        DistanceTable { sources, targets, dist }
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn targets(&self) -> &[NodeId] {
        &self.targets
    }

    /// Entry for row `i` and column `j` (positions, not node ids).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Weight {
        self.dist[i * self.targets.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Weight] {
        let w = self.targets.len();
        &self.dist[i * w..(i + 1) * w]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Weight] {
        &self.dist
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Weight]> {
        (0..self.sources.len()).map(move |i| self.row(i))
    }
}

/// Per-node bucket lists filled by the backward phase.
#[derive(Debug, Clone, Default)]
pub struct BucketStore {
    buckets: Vec<Vec<(u32, Weight)>>,
}

impl BucketStore {
    /// Runs the backward phase for `targets`; bucket entries refer to
    /// target positions.
    pub fn build(ch: &ChIndex, targets: &[NodeId]) -> BucketStore {
        let n = ch.node_count();
        let spaces: Vec<Vec<(NodeId, Weight)>> = targets
            .par_iter()
            .map_init(
                || UpwardSearch::new(n),
                |search, &t| search.run(t, ch.down(), ch.up(), 0, |_| false),
            )
            .collect();
        let mut buckets = vec![Vec::new(); n];
        for (j, space) in spaces.into_iter().enumerate() {
            for (u, d) in space {
                buckets[u as usize].push((j as u32, d));
            }
        }
        BucketStore { buckets }
    }

    pub fn bucket(&self, v: NodeId) -> &[(u32, Weight)] {
        &self.buckets[v as usize]
    }

    pub fn entry_count(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }
}

/// Exact distances between all `sources` and all `targets`.
pub fn build_distance_table(ch: &ChIndex, sources: &[NodeId], targets: &[NodeId]) -> Result<DistanceTable> {
    let n = ch.node_count();
    for &v in sources.iter().chain(targets) {
        check_node(v, n)?;
    }
    let buckets = BucketStore::build(ch, targets);
    let width = targets.len();
    let mut dist = vec![INFINITY; sources.len() * width];
    if width > 0 {
        dist.par_chunks_mut(width).zip(sources.par_iter()).for_each_init(
            || UpwardSearch::new(n),
            |search, (row, &s)| {
                for (u, d) in search.run(s, ch.up(), ch.down(), 0, |_| false) {
                    for &(j, db) in buckets.bucket(u) {
                        let cand = add_dist(d, db);
                        let slot = &mut row[j as usize];
                        if cand < *slot {
                            *slot = cand;
                        }
                    }
                }
            },
        );
    }
    Ok(DistanceTable {
        sources: sources.to_vec(),
        targets: targets.to_vec(),
        dist,
    })
}
