//! TNR point-to-point queries.

use crate::ch::ChQuery;
use crate::error::check_node;
use crate::tnr::TnrIndex;
use crate::{NodeId, Result, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryKind {
    /// Answered from access nodes and the transit table.
    Table,
    /// The locality filter fired and a CH query answered.
    Local,
}

/// Work done by one query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCounters {
    pub filter_evaluations: u32,
    /// Filter decided by the interval check alone.
    pub interval_short_circuits: u32,
    pub table_lookups: u32,
    /// Nodes settled by the CH fallback.
    pub ch_settled: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryResult {
    pub distance: Weight,
    pub kind: QueryKind,
    pub counters: QueryCounters,
}

/// Query scratch bound to one index. Each thread needs its own.
#[derive(Debug, Clone)]
pub struct TnrQuery<'a> {
    idx: &'a TnrIndex,
    ch: ChQuery<'a>,
    /// Stall depth of the CH fallback.
    pub fallback_stall_hops: u32,
}

impl<'a> TnrQuery<'a> {
    pub fn new(idx: &'a TnrIndex) -> TnrQuery<'a> {
        TnrQuery {
            idx,
            ch: ChQuery::new(idx.ch()),
            fallback_stall_hops: 1,
        }
    }

    pub fn index(&self) -> &'a TnrIndex {
        self.idx
    }

    /// Distance between input-graph ids `s` and `t`.
    pub fn query(&mut self, s: NodeId, t: NodeId) -> Result<QueryResult> {
        let n = self.idx.node_count();
        check_node(s, n)?;
        check_node(t, n)?;
        self.query_internal(self.idx.to_internal(s), self.idx.to_internal(t))
    }

    /// Distance between internal ids `s` and `t`.
    ///
    /// `s == t` is classified like any other pair but answered with 0
    /// without a search.
    pub fn query_internal(&mut self, s: NodeId, t: NodeId) -> Result<QueryResult> {
        let idx = self.idx;
        let n = idx.node_count();
        check_node(s, n)?;
        check_node(t, n)?;
        let mut counters = QueryCounters {
            filter_evaluations: 1,
            ..QueryCounters::default()
        };
        let local = if idx.intervals_disjoint(s, t) {
            counters.interval_short_circuits = 1;
            false
        } else {
            idx.locality_filter(s, t)
        };
        let kind = if local { QueryKind::Local } else { QueryKind::Table };
        let distance = if s == t {
            0
        } else if local {
            let (d, _) = self.ch.distance(s, t, self.fallback_stall_hops)?;
            counters.ch_settled = self.ch.settled_count() as u32;
            d
        } else {
            let (d, lookups) = idx.table_query_counted(s, t);
            counters.table_lookups = lookups as u32;
            d
        };
        Ok(QueryResult {
            distance,
            kind,
            counters,
        })
    }
}
