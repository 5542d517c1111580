//! Directed weighted graphs in flat forward and reverse adjacency form.

use std::io::{BufRead, Read, Write};

use crate::binio;
use crate::error::check_node;
use crate::{Error, NodeId, Result, Weight, INFINITY};

const GRAPH_MAGIC: &[u8; 8] = b"CHTNRGR\0";
const GRAPH_VERSION: u32 = 1;

/// Immutable directed graph with non-negative integer weights.
///
/// Arcs are stored twice: grouped by tail (forward) and grouped by head
/// (reverse). Within a group arcs are sorted by the opposite endpoint.
/// Self-loops are dropped and parallel arcs collapsed to their minimum
/// weight on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    first_out: Vec<u32>,
    head: Vec<NodeId>,
    weight: Vec<Weight>,
    first_in: Vec<u32>,
    tail: Vec<NodeId>,
    in_weight: Vec<Weight>,
}

impl Graph {
    /// Builds a graph from `(tail, head, weight)` triples.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Weight)>,
    {
        if n >= NodeId::MAX as usize {
            return Err(Error::Parameter(format!("{n} nodes exceed the id range")));
        }
        let mut list = Vec::new();
        for (u, v, w) in arcs {
            check_node(u, n)?;
            check_node(v, n)?;
            if w == INFINITY {
                return Err(Error::WeightOverflow);
            }
            if u != v {
                list.push((u, v, w));
            }
        }
        list.sort_unstable();
        list.dedup_by(|later, earlier| later.0 == earlier.0 && later.1 == earlier.1);

        // A shortest path is simple, so it uses at most one outgoing arc per
        // node. Bounding the sum of per-node maxima keeps every distance
        // strictly below the sentinel.
        let mut max_out = vec![0u64; n];
        for &(u, _, w) in &list {
            max_out[u as usize] = max_out[u as usize].max(w as u64);
        }
        if max_out.iter().sum::<u64>() >= INFINITY as u64 {
            return Err(Error::WeightOverflow);
        }

        let mut first_out = vec![0u32; n + 1];
        for &(u, _, _) in &list {
            first_out[u as usize + 1] += 1;
        }
        for i in 0..n {
            first_out[i + 1] += first_out[i];
        }
        let head = list.iter().map(|a| a.1).collect();
        let weight = list.iter().map(|a| a.2).collect();

        let mut rev: Vec<(NodeId, NodeId, Weight)> = list.iter().map(|&(u, v, w)| (v, u, w)).collect();
        rev.sort_unstable();
        let mut first_in = vec![0u32; n + 1];
        for &(v, _, _) in &rev {
            first_in[v as usize + 1] += 1;
        }
        for i in 0..n {
            first_in[i + 1] += first_in[i];
        }
        let tail = rev.iter().map(|a| a.1).collect();
        let in_weight = rev.iter().map(|a| a.2).collect();

        Ok(Graph {
            first_out,
            head,
            weight,
            first_in,
            tail,
            in_weight,
        })
    }

    pub fn node_count(&self) -> usize {
        self.first_out.len() - 1
    }

    pub fn arc_count(&self) -> usize {
        self.head.len()
    }

    /// Outgoing arcs of `v` as `(head, weight)`.
    pub fn out_arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        let range = self.first_out[v as usize] as usize..self.first_out[v as usize + 1] as usize;
        self.head[range.clone()]
            .iter()
            .copied()
            .zip(self.weight[range].iter().copied())
    }

    /// Incoming arcs of `v` as `(tail, weight)`.
    pub fn in_arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        let range = self.first_in[v as usize] as usize..self.first_in[v as usize + 1] as usize;
        self.tail[range.clone()]
            .iter()
            .copied()
            .zip(self.in_weight[range].iter().copied())
    }

    /// All arcs as `(tail, head, weight)`, sorted by tail then head.
    pub fn arcs_list(&self) -> Vec<(NodeId, NodeId, Weight)> {
        (0..self.node_count() as NodeId)
            .flat_map(|u| self.out_arcs(u).map(move |(v, w)| (u, v, w)))
            .collect()
    }

    /// Weight of arc `u -> v`, if present.
    pub fn arc_weight(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        let range = self.first_out[u as usize] as usize..self.first_out[u as usize + 1] as usize;
        let heads = &self.head[range.clone()];
        heads.binary_search(&v).ok().map(|i| self.weight[range.start + i])
    }

    pub fn reversed(&self) -> Graph {
        Graph {
            first_out: self.first_in.clone(),
            head: self.tail.clone(),
            weight: self.in_weight.clone(),
            first_in: self.first_out.clone(),
            tail: self.head.clone(),
            in_weight: self.weight.clone(),
        }
    }

    /// Heap bytes used by the adjacency arrays.
    pub fn size_bytes(&self) -> usize {
        4 * (self.first_out.len()
            + self.head.len()
            + self.weight.len()
            + self.first_in.len()
            + self.tail.len()
            + self.in_weight.len())
    }

    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        binio::write_header(w, GRAPH_MAGIC, GRAPH_VERSION)?;
        binio::write_u32(w, self.node_count() as u32)?;
        binio::write_u32(w, self.arc_count() as u32)?;
        binio::write_u32s(w, &self.first_out)?;
        binio::write_u32s(w, &self.head)?;
        binio::write_u32s(w, &self.weight)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<Graph> {
        binio::read_header(r, GRAPH_MAGIC, GRAPH_VERSION)?;
        let n = binio::read_u32(r)? as usize;
        let m = binio::read_u32(r)? as usize;
        let first_out = binio::read_u32s(r, n as u64 + 1)?;
        let head = binio::read_u32s(r, m as u64)?;
        let weight = binio::read_u32s(r, m as u64)?;
        if first_out.first() != Some(&0)
            || first_out.last().map(|&x| x as usize) != Some(m)
            || first_out.windows(2).any(|p| p[0] > p[1])
        {
            return Err(Error::Format("corrupt graph offsets".into()));
        }
        let arcs =
            (0..n).flat_map(|u| (first_out[u] as usize..first_out[u + 1] as usize).map(move |i| (u as NodeId, i)));
        let triples: Vec<_> = arcs.map(|(u, i)| (u, head[i], weight[i])).collect();
        Graph::from_arcs(n, triples)
    }

    /// Writes the graph in DIMACS `.gr` format with 1-based ids.
    pub fn write_dimacs<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "p sp {} {}", self.node_count(), self.arc_count())?;
        for (u, v, c) in self.arcs_list() {
            writeln!(w, "a {} {} {}", u + 1, v + 1, c)?;
        }
        Ok(())
    }
}

/// Parses a DIMACS shortest-path `.gr` stream.
///
/// The `p sp <n> <m>` line must precede every arc line and the number of
/// arc lines must equal `m`. Lines starting with `c` and blank lines are
/// ignored.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let rest: Vec<&str> = fields.collect();
        let parse_err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(parse_err("duplicate problem line"));
                }
                if rest.len() != 3 || rest[0] != "sp" {
                    return Err(parse_err("expected `p sp <n> <m>`"));
                }
                let n = rest[1].parse::<usize>().map_err(|_| parse_err("invalid node count"))?;
                let m = rest[2].parse::<usize>().map_err(|_| parse_err("invalid arc count"))?;
                header = Some((n, m));
                arcs.reserve(m);
            }
            "a" => {
                let Some((n, _)) = header else {
                    return Err(parse_err("arc line before problem line"));
                };
                if rest.len() != 3 {
                    return Err(parse_err("expected `a <u> <v> <w>`"));
                }
                let mut ends = [0 as NodeId; 2];
                for (slot, field) in ends.iter_mut().zip(&rest[..2]) {
                    let id = field.parse::<u64>().map_err(|_| parse_err("invalid node id"))?;
                    if id == 0 || id > n as u64 {
                        return Err(Error::NodeOutOfRange { node: id, n });
                    }
                    *slot = (id - 1) as NodeId;
                }
                let w = rest[2].parse::<i64>().map_err(|_| parse_err("invalid weight"))?;
                if w < 0 || w >= INFINITY as i64 {
                    return Err(Error::Weight {
                        line: lineno,
                        weight: w,
                    });
                }
                arcs.push((ends[0], ends[1], w as Weight));
            }
            other => return Err(parse_err(&format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    if arcs.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header announces {m} arcs, found {}", arcs.len()),
        });
    }
    Graph::from_arcs(n, arcs)
}

/// Bijective relabeling of node ids, stored as old id -> new id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    new_of_old: Vec<NodeId>,
}

impl Permutation {
    pub fn new(new_of_old: Vec<NodeId>) -> Result<Permutation> {
        let n = new_of_old.len();
        let mut seen = vec![false; n];
        for (old, &new) in new_of_old.iter().enumerate() {
            if new as usize >= n {
                return Err(Error::Permutation(format!(
                    "node {old} maps to {new}, outside [0, {n})"
                )));
            }
            if std::mem::replace(&mut seen[new as usize], true) {
                return Err(Error::Permutation(format!("id {new} assigned twice")));
            }
        }
        Ok(Permutation { new_of_old })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            new_of_old: (0..n as NodeId).collect(),
        }
    }

    /// Builds the permutation that sends `order[i]` to `i`.
    pub fn from_order(order: &[NodeId]) -> Result<Permutation> {
        let n = order.len();
        let mut new_of_old = vec![NodeId::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if old as usize >= n || new_of_old[old as usize] != NodeId::MAX {
                return Err(Error::Permutation(format!("order entry {old} invalid or repeated")));
            }
            new_of_old[old as usize] = new as NodeId;
        }
        Ok(Permutation { new_of_old })
    }

    pub fn len(&self) -> usize {
        self.new_of_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_of_old.is_empty()
    }

    #[inline]
    pub fn apply(&self, old: NodeId) -> NodeId {
        self.new_of_old[old as usize]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.new_of_old
    }

    pub fn inverse(&self) -> Permutation {
        let mut old_of_new = vec![0; self.len()];
        for (old, &new) in self.new_of_old.iter().enumerate() {
            old_of_new[new as usize] = old as NodeId;
        }
        Permutation { new_of_old: old_of_new }
    }
}

/// Relabels every node `v` of `g` as `p(v)`.
pub fn apply_permutation(g: &Graph, p: &Permutation) -> Result<Graph> {
    if p.len() != g.node_count() {
        return Err(Error::Permutation(format!(
            "length {} does not match {} nodes",
            p.len(),
            g.node_count()
        )));
    }
    let arcs = g.arcs_list().into_iter().map(|(u, v, w)| (p.apply(u), p.apply(v), w));
    Graph::from_arcs(g.node_count(), arcs)
}

/// Strongly connected component id per node. Ids are dense; the graph is
/// strongly connected iff every node receives the same id.
pub fn strong_components(g: &Graph) -> Vec<u32> {
    use petgraph::graph::{DiGraph, NodeIndex};

    let mut pg = DiGraph::<(), ()>::with_capacity(g.node_count(), g.arc_count());
    for _ in 0..g.node_count() {
        pg.add_node(());
    }
    for (u, v, _) in g.arcs_list() {
        pg.add_edge(NodeIndex::new(u as usize), NodeIndex::new(v as usize), ());
    }
    let mut comp = vec![0u32; g.node_count()];
    for (id, scc) in petgraph::algo::tarjan_scc(&pg).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = id as u32;
        }
    }
    comp
}

pub fn is_strongly_connected(g: &Graph) -> bool {
    let comp = strong_components(g);
    comp.windows(2).all(|p| p[0] == p[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4_text() -> &'static str {
        "c path\np sp 4 6\na 1 2 1\na 2 1 1\na 2 3 1\na 3 2 1\na 3 4 1\na 4 3 1\n"
    }

    #[test]
    fn parses_single_arc() {
        let g = parse_dimacs("p sp 2 1\na 1 2 7".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arcs_list(), vec![(0, 1, 7)]);
        assert_eq!(g.in_arcs(1).collect::<Vec<_>>(), vec![(0, 7)]);
    }

    #[test]
    fn parses_path_fixture() {
        let g = parse_dimacs(p4_text().as_bytes()).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(
            g.arcs_list(),
            vec![(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1), (2, 3, 1), (3, 2, 1)]
        );
    }

    #[test]
    fn rejects_arc_before_header() {
        let err = parse_dimacs("a 1 2 7\np sp 2 1".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_out_of_range_and_negative() {
        let err = parse_dimacs("p sp 2 1\na 1 3 7".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange { node: 3, n: 2 }));
        let err = parse_dimacs("p sp 2 1\na 0 1 7".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange { node: 0, .. }));
        let err = parse_dimacs("p sp 2 1\na 1 2 -4".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Weight { line: 2, weight: -4 }));
    }

    #[test]
    fn rejects_malformed_lines() {
        let err = parse_dimacs("p sp 2 1\na 1 x 4".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_dimacs("p sp 2 2\na 1 2 4".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_dimacs("p max 2 1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn collapses_parallel_arcs_and_drops_loops() {
        let g = Graph::from_arcs(3, [(0, 1, 5), (0, 1, 3), (1, 1, 2), (1, 2, 4)]).unwrap();
        assert_eq!(g.arcs_list(), vec![(0, 1, 3), (1, 2, 4)]);
        assert_eq!(g.arc_weight(0, 1), Some(3));
        assert_eq!(g.arc_weight(1, 0), None);
    }

    #[test]
    fn rejects_overflowing_weights() {
        let big = INFINITY / 2;
        assert!(matches!(
            Graph::from_arcs(3, [(0, 1, big), (1, 2, big), (2, 0, big)]),
            Err(Error::WeightOverflow)
        ));
    }

    #[test]
    fn reverse_adjacency_mirrors_forward() {
        let g = parse_dimacs(p4_text().as_bytes()).unwrap();
        let mut from_rev: Vec<_> = (0..4).flat_map(|v| g.in_arcs(v).map(move |(u, w)| (u, v, w))).collect();
        from_rev.sort_unstable();
        assert_eq!(from_rev, g.arcs_list());
    }

    #[test]
    fn binary_round_trip() {
        let g = parse_dimacs(p4_text().as_bytes()).unwrap();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        let back = Graph::read_binary(&mut buf.as_slice()).unwrap();
        assert_eq!(g, back);
        buf[0] = b'X';
        assert!(matches!(Graph::read_binary(&mut buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn dimacs_round_trip() {
        let g = parse_dimacs(p4_text().as_bytes()).unwrap();
        let mut buf = Vec::new();
        g.write_dimacs(&mut buf).unwrap();
        assert_eq!(parse_dimacs(buf.as_slice()).unwrap(), g);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let inv = p.inverse();
        for v in 0..3 {
            assert_eq!(inv.apply(p.apply(v)), v);
        }
        assert_eq!(Permutation::from_order(&[2, 0, 1]).unwrap().as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn identity_permutation_keeps_arcs() {
        let g = parse_dimacs(p4_text().as_bytes()).unwrap();
        let same = apply_permutation(&g, &Permutation::identity(4)).unwrap();
        assert_eq!(same, g);
        assert!(apply_permutation(&g, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn strong_connectivity() {
        let g = parse_dimacs(p4_text().as_bytes()).unwrap();
        assert!(is_strongly_connected(&g));
        let split = Graph::from_arcs(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
        let comp = strong_components(&split);
        let mut ids = comp.clone();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 4);
    }
}
