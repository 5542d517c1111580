//! Bidirectional point-to-point CH query.

use super::{ChIndex, UpwardSearch};
use crate::error::check_node;
use crate::{add_dist, NodeId, Result, Weight, INFINITY};

/// Query scratch bound to one hierarchy. Each thread needs its own.
#[derive(Debug, Clone)]
pub struct ChQuery<'a> {
    ch: &'a ChIndex,
    fwd: UpwardSearch,
    bwd: UpwardSearch,
    settled: usize,
}

impl<'a> ChQuery<'a> {
    pub fn new(ch: &'a ChIndex) -> ChQuery<'a> {
        let n = ch.node_count();
        ChQuery {
            ch,
            fwd: UpwardSearch::new(n),
            bwd: UpwardSearch::new(n),
            settled: 0,
        }
    }

    /// Nodes settled by both half searches during the last query.
    pub fn settled_count(&self) -> usize {
        self.settled
    }

    /// Exact distance from `s` to `t` plus the meeting node of the best
    /// up-down path found (`None` when `t` is unreachable).
    ///
    /// `stall_hops` is the depth of the stall-on-demand check; 0 turns it
    /// off. The distance does not depend on it.
    pub fn distance(&mut self, s: NodeId, t: NodeId, stall_hops: u32) -> Result<(Weight, Option<NodeId>)> {
        let n = self.ch.node_count();
        check_node(s, n)?;
        check_node(t, n)?;
        self.settled = 0;
        if s == t {
            return Ok((0, Some(s)));
        }
        let (up, down) = (self.ch.up(), self.ch.down());
        self.fwd.init(s);
        self.bwd.init(t);
        let mut best = INFINITY;
        let mut meet = None;
        let mut forward_turn = true;
        loop {
            let f_open = self.fwd.min_key().is_some_and(|k| k < best);
            let b_open = self.bwd.min_key().is_some_and(|k| k < best);
            if !f_open && !b_open {
                break;
            }
            let go_forward = if f_open && b_open { forward_turn } else { f_open };
            forward_turn = !forward_turn;
            let (this, other) = if go_forward {
                (&mut self.fwd, &self.bwd)
            } else {
                (&mut self.bwd, &self.fwd)
            };
            let (relax, stall) = if go_forward { (up, down) } else { (down, up) };
            let Some((u, d)) = this.settle_next(relax, stall, stall_hops, |_| false) else {
                continue;
            };
            self.settled += 1;
            let total = add_dist(d, other.dist(u));
            if total < best {
                best = total;
                meet = Some(u);
            }
        }
        Ok((best, meet))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ch::{build_hierarchy, ChParams};
    use crate::generators::{diamond, path4};
    use crate::Graph;

    #[test]
    fn path_meeting_node_is_top() {
        let ch = build_hierarchy(&path4(), &ChParams::default(), Some(&[0, 1, 2, 3])).unwrap();
        let mut q = ChQuery::new(&ch);
        assert_eq!(q.distance(0, 3, 1).unwrap(), (3, Some(3)));
        assert_eq!(q.distance(3, 0, 1).unwrap(), (3, Some(3)));
        assert_eq!(q.distance(2, 2, 1).unwrap(), (0, Some(2)));
    }

    #[test]
    fn diamond_sample_and_range_errors() {
        let ch = build_hierarchy(&diamond(), &ChParams::default(), None).unwrap();
        let mut q = ChQuery::new(&ch);
        assert_eq!(q.distance(0, 4, 1).unwrap().0, 5);
        assert_eq!(q.distance(1, 3, 0).unwrap().0, 3);
        assert!(q.distance(0, 5, 1).is_err());
        assert!(q.distance(9, 0, 1).is_err());
    }

    #[test]
    fn unreachable_target() {
        let g = Graph::from_arcs(3, [(0, 1, 4), (1, 0, 4)]).unwrap();
        let ch = build_hierarchy(&g, &ChParams::default(), None).unwrap();
        let mut q = ChQuery::new(&ch);
        assert_eq!(q.distance(0, 2, 1).unwrap(), (INFINITY, None));
        assert_eq!(q.distance(2, 1, 2).unwrap(), (INFINITY, None));
        assert_eq!(q.distance(1, 0, 2).unwrap().0, 4);
    }
}
