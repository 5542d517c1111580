//! Many-to-one queries towards a fixed target.
//!
//! For a target `t` we precompute `dist(a, t)` for every transit node `a`
//! and, with a backward search that gives up once every branch has passed
//! a transit node, the exact distance of every node whose shortest path to
//! `t` avoids the transit set. A source then needs one probe of the local
//! array and one array read per forward access node.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{Read, Write};

use crate::error::check_node;
use crate::tnr::TnrIndex;
use crate::{add_dist, binio, Error, Graph, NodeId, Result, Weight, INFINITY};

const TARGET_MAGIC: &[u8; 8] = b"CHTNRTO\0";
const TARGET_VERSION: u32 = 1;

/// `dist(a, t)` for every internal transit id `a`.
pub fn build_target_array(idx: &TnrIndex, t: NodeId) -> Result<Vec<Weight>> {
    check_node(t, idx.node_count())?;
    let ti = idx.to_internal(t);
    let down = idx.access_down(ti);
    Ok((0..idx.transit_count() as NodeId)
        .map(|a| {
            let row = idx.table_row(a);
            down.iter()
                .map(|&(a_t, d)| add_dist(row[a_t as usize], d))
                .min()
                .unwrap_or(INFINITY)
        })
        .collect())
}

/// Backward search from `t` over `g` (input ids) that records `dist(v, t)`
/// for every node `v` with a transit-free shortest path to `t`.
///
/// A label is covered if its path passes a transit node (including `t`
/// itself). On equal distance uncovered labels win, and the search stops
/// once no uncovered label is queued. Unset entries are [`INFINITY`].
pub fn covering_backward_search(idx: &TnrIndex, g: &Graph, t: NodeId) -> Result<Vec<Weight>> {
    let n = g.node_count();
    if n != idx.node_count() {
        return Err(Error::Parameter(format!(
            "graph has {n} nodes, index has {}",
            idx.node_count()
        )));
    }
    check_node(t, n)?;
    let transit = |v: NodeId| idx.is_transit(idx.to_internal(v));

    let mut label: Vec<(Weight, bool)> = vec![(INFINITY, true); n];
    let mut settled = vec![false; n];
    let mut local = vec![INFINITY; n];
    let mut heap = BinaryHeap::new();
    let mut uncovered_queued = 0usize;

    let start = (0, transit(t));
    label[t as usize] = start;
    if !start.1 {
        uncovered_queued += 1;
    }
    heap.push(Reverse((start.0, start.1, t)));
    while uncovered_queued > 0 {
        let Some(Reverse((d, covered, u))) = heap.pop() else {
            break;
        };
        if settled[u as usize] || (d, covered) != label[u as usize] {
            continue;
        }
        settled[u as usize] = true;
        if !covered {
            uncovered_queued -= 1;
            local[u as usize] = d;
        }
        for (w, c) in g.in_arcs(u) {
            if settled[w as usize] {
                continue;
            }
            let nd = add_dist(d, c);
            if nd == INFINITY {
                continue;
            }
            let new = (nd, covered || transit(w));
            let old = label[w as usize];
            if new < old {
                if old.0 != INFINITY && !old.1 {
                    uncovered_queued -= 1;
                }
                if !new.1 {
                    uncovered_queued += 1;
                }
                label[w as usize] = new;
                heap.push(Reverse((new.0, new.1, w)));
            }
        }
    }
    Ok(local)
}

/// Precomputed distances towards one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetOracle {
    target: NodeId,
    /// `dist(a, t)` by internal transit id.
    transit_dist: Vec<Weight>,
    /// `dist(v, t)` by input id where the path avoids transit nodes.
    local: Vec<Weight>,
}

impl TargetOracle {
    pub fn build(idx: &TnrIndex, g: &Graph, t: NodeId) -> Result<TargetOracle> {
        Ok(TargetOracle {
            target: t,
            transit_dist: build_target_array(idx, t)?,
            local: covering_backward_search(idx, g, t)?,
        })
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn transit_distances(&self) -> &[Weight] {
        &self.transit_dist
    }

    /// Local distance of input node `v`, [`INFINITY`] if unset.
    pub fn local_distance(&self, v: NodeId) -> Weight {
        self.local[v as usize]
    }

    pub fn local_count(&self) -> usize {
        self.local.iter().filter(|&&d| d != INFINITY).count()
    }

    /// `dist(s, t)` for input id `s`, plus the number of array reads
    /// (one local probe and one per forward access node of `s`).
    pub fn distance_counted(&self, idx: &TnrIndex, s: NodeId) -> Result<(Weight, usize)> {
        check_node(s, self.local.len())?;
        let mut best = self.local[s as usize];
        let up = idx.access_up(idx.to_internal(s));
        for &(a, d) in up {
            best = best.min(add_dist(d, self.transit_dist[a as usize]));
        }
        Ok((best, 1 + up.len()))
    }

    pub fn distance(&self, idx: &TnrIndex, s: NodeId) -> Result<Weight> {
        Ok(self.distance_counted(idx, s)?.0)
    }

    /// Writes the target, the transit array and the set local entries.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        binio::write_header(w, TARGET_MAGIC, TARGET_VERSION)?;
        binio::write_u32(w, self.target)?;
        binio::write_u32(w, self.local.len() as u32)?;
        binio::write_vec(w, &self.transit_dist)?;
        let (ids, dists): (Vec<NodeId>, Vec<Weight>) = self
            .local
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != INFINITY)
            .map(|(v, &d)| (v as NodeId, d))
            .unzip();
        binio::write_vec(w, &ids)?;
        binio::write_u32s(w, &dists)
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<TargetOracle> {
        binio::read_header(r, TARGET_MAGIC, TARGET_VERSION)?;
        let target = binio::read_u32(r)?;
        let n = binio::read_u32(r)? as usize;
        let transit_dist = binio::read_vec(r)?;
        let ids = binio::read_vec(r)?;
        let dists = binio::read_u32s(r, ids.len() as u64)?;
        if target as usize >= n || ids.iter().any(|&v| v as usize >= n) {
            return Err(Error::Format("target oracle node out of range".into()));
        }
        let mut local = vec![INFINITY; n];
        for (v, d) in ids.into_iter().zip(dists) {
            local[v as usize] = d;
        }
        Ok(TargetOracle {
            target,
            transit_dist,
            local,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path4;
    use crate::tnr::{build_tnr, TnrParams};

    fn p4() -> (Graph, TnrIndex) {
        let g = path4();
        let idx = build_tnr(&g, &TnrParams::new(2), Some(&[0, 1, 2, 3])).unwrap();
        (g, idx)
    }

    #[test]
    fn path_target_zero() {
        let (g, idx) = p4();
        let o = TargetOracle::build(&idx, &g, 0).unwrap();
        // Internal ids 0 and 1 are input nodes 3 and 2.
        assert_eq!(o.transit_distances(), &[3, 2]);
        assert_eq!(
            (0..4).map(|v| o.local_distance(v)).collect::<Vec<_>>(),
            vec![0, 1, INFINITY, INFINITY]
        );
        assert_eq!(o.distance_counted(&idx, 1).unwrap(), (1, 2));
        assert_eq!(o.distance(&idx, 3).unwrap(), 3);
        assert_eq!(o.distance(&idx, 0).unwrap(), 0);
    }

    #[test]
    fn transit_target_has_no_local_entries() {
        let (g, idx) = p4();
        let o = TargetOracle::build(&idx, &g, 3).unwrap();
        assert_eq!(o.transit_distances()[idx.to_internal(3) as usize], 0);
        assert_eq!(o.local_count(), 0);
        for s in 0..4 {
            assert_eq!(o.distance(&idx, s).unwrap(), 3 - s);
        }
    }

    #[test]
    fn unreachable_target() {
        let g = Graph::from_arcs(3, [(0, 1, 1), (1, 0, 1), (2, 0, 1)]).unwrap();
        let idx = build_tnr(&g, &TnrParams::new(1), None).unwrap();
        // Nothing leaves node 2's side towards it except itself.
        let o = TargetOracle::build(&idx, &g, 2).unwrap();
        if !idx.is_transit(idx.to_internal(2)) {
            assert!(o.transit_distances().iter().all(|&d| d == INFINITY));
        }
        assert_eq!(o.distance(&idx, 0).unwrap(), INFINITY);
        assert_eq!(o.distance(&idx, 2).unwrap(), 0);
    }

    #[test]
    fn binary_round_trip() {
        let (g, idx) = p4();
        let o = TargetOracle::build(&idx, &g, 1).unwrap();
        let mut buf = Vec::new();
        o.write_binary(&mut buf).unwrap();
        assert_eq!(TargetOracle::read_binary(&mut buf.as_slice()).unwrap(), o);
    }
}
