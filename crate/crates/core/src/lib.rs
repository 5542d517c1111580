//! Exact distance oracles for directed, non-negatively weighted graphs.
//!
//! The crate builds a contraction hierarchy ([`ch`]) and, on top of it, a
//! transit node routing index ([`tnr`]) whose locality filter is derived
//! purely from CH search spaces compressed with graph Voronoi regions. A
//! many-to-one specialization lives in [`target`]. Every structure can be
//! checked against the plain [`dijkstra`] oracle.

pub mod bench;
pub mod binio;
pub mod ch;
pub mod dijkstra;
pub mod error;
pub mod generators;
pub mod graph;
pub mod many2many;
pub mod target;
pub mod tnr;

pub use error::{Error, Result};
pub use graph::{Graph, Permutation};

/// Dense node identifier in `[0, n)`.
pub type NodeId = u32;

/// Arc weight and path length.
pub type Weight = u32;

/// Distance of unreachable nodes. Never produced by addition: all path
/// arithmetic goes through [`add_dist`].
pub const INFINITY: Weight = Weight::MAX;

/// Saturating path-length addition that keeps [`INFINITY`] absorbing.
#[inline]
pub fn add_dist(a: Weight, b: Weight) -> Weight {
    a.saturating_add(b)
}

/// Search direction relative to the arcs of the input graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}
