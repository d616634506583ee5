//! Bit-packed undirected simple graphs and basic pair statistics.
//!
//! Adjacency is stored as `n` rows of `n` bits (one `u64` word per 64
//! vertices) so that codegrees, triangle counts, and common-neighborhood
//! tests reduce to word-parallel AND + popcount. Graphs are immutable after
//! construction; anything that needs mutation builds a new graph or uses a
//! dedicated incremental structure.

use crate::{Error, Result};
use num_rational::Ratio;

/// Undirected simple graph on vertices `0..n`.
///
/// Invariants: the bit matrix is symmetric and the diagonal is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.m)
    }
}

/// Mutable construction buffer for [`Graph`]. Duplicate edges collapse.
#[derive(Clone)]
pub struct GraphBuilder {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        GraphBuilder {
            n,
            words,
            rows: vec![0u64; n * words],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Domain(format!(
                "edge endpoint out of range: ({u}, {v}) with n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Domain(format!("loop at vertex {u} rejected")));
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    pub fn finish(self) -> Graph {
        let m = self
            .rows
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2;
        Graph {
            n: self.n,
            words: self.words,
            rows: self.rows,
            m,
        }
    }
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    /// Builds a graph from an unordered edge list. Duplicate pairs collapse
    /// to a single edge; loops and out-of-range endpoints are rejected.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.finish())
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).finish()
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                b.add_edge(u, v).unwrap();
            }
        }
        b.finish()
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::Domain(format!("cycle needs n >= 3, got {n}")));
        }
        let mut b = GraphBuilder::new(n);
        for v in 0..n {
            b.add_edge(v, (v + 1) % n)?;
        }
        Ok(b.finish())
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for v in 1..n {
            b.add_edge(v - 1, v).unwrap();
        }
        b.finish()
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut builder = GraphBuilder::new(a + b);
        for u in 0..a {
            for v in a..(a + b) {
                builder.add_edge(u, v).unwrap();
            }
        }
        builder.finish()
    }

    /// The Petersen graph (outer 5-cycle, inner pentagram, spokes).
    pub fn petersen() -> Graph {
        let mut b = GraphBuilder::new(10);
        for v in 0..5 {
            b.add_edge(v, (v + 1) % 5).unwrap();
            b.add_edge(5 + v, 5 + (v + 2) % 5).unwrap();
            b.add_edge(v, 5 + v).unwrap();
        }
        b.finish()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn neighbors(&self, v: usize) -> BitIter<'_> {
        BitIter::new(self.row(v))
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Number of common neighbors of `u` and `v`, by bit-row intersection.
    pub fn codegree(&self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::Domain(format!(
                "codegree needs distinct vertices, got {u} twice"
            )));
        }
        Ok(self
            .row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// `e(X, Y) / (|X| |Y|)` for nonempty disjoint vertex sets, as an exact
    /// rational in `[0, 1]`.
    pub fn pair_density(&self, x: &[usize], y: &[usize]) -> Result<Ratio<u64>> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::Domain("pair_density: empty vertex set".into()));
        }
        let mx = self.mask_of(x)?;
        let my = self.mask_of(y)?;
        if mx.iter().zip(&my).any(|(a, b)| a & b != 0) {
            return Err(Error::Domain("pair_density: sets overlap".into()));
        }
        let e = self.edges_between_masks(&mx, &my);
        Ok(Ratio::new(e as u64, (x.len() * y.len()) as u64))
    }

    /// Bit mask (one `u64` per 64 vertices) of a vertex set.
    pub(crate) fn mask_of(&self, verts: &[usize]) -> Result<Vec<u64>> {
        let mut mask = vec![0u64; self.words];
        for &v in verts {
            if v >= self.n {
                return Err(Error::Domain(format!(
                    "vertex {v} out of range (n = {})",
                    self.n
                )));
            }
            mask[v / 64] |= 1 << (v % 64);
        }
        Ok(mask)
    }

    /// Edge count between two disjoint masks.
    pub(crate) fn edges_between_masks(&self, mx: &[u64], my: &[u64]) -> usize {
        let mut e = 0usize;
        for v in BitIter::new(mx) {
            e += self
                .row(v)
                .iter()
                .zip(my)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>();
        }
        e
    }

    /// Edge count inside a mask.
    pub(crate) fn edges_within_mask(&self, mask: &[u64]) -> usize {
        let mut twice = 0usize;
        for v in BitIter::new(mask) {
            twice += self
                .row(v)
                .iter()
                .zip(mask)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>();
        }
        twice / 2
    }

    /// Edge count between two vertex slices (must be disjoint; unchecked).
    pub fn edges_between(&self, x: &[usize], y: &[usize]) -> Result<usize> {
        let mx = self.mask_of(x)?;
        let my = self.mask_of(y)?;
        Ok(self.edges_between_masks(&mx, &my))
    }

    /// Edge count of the subgraph induced by `verts`.
    pub fn edges_within(&self, verts: &[usize]) -> Result<usize> {
        let mask = self.mask_of(verts)?;
        Ok(self.edges_within_mask(&mask))
    }

    // Crate-internal mutators for the incremental search structure in the
    // turan module. The public API stays immutable.
    pub(crate) fn set_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        self.m += 1;
    }

    pub(crate) fn clear_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && self.has_edge(u, v));
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
        self.m -= 1;
    }

    /// Plain-text edge list: first line `n m`, then one `u v` line per edge
    /// in lexicographic order, all LF-terminated.
    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_edge_list_text(text: &str) -> Result<Graph> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("edge list: missing header line".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("edge list: bad vertex count".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("edge list: bad edge count".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("edge list: bad line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("edge list: bad line {line:?}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "edge list: header promised {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edge_list(n, &edges)
    }
}

/// Iterator over set bit positions of a word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        let cur = if words.is_empty() { 0 } else { words[0] };
        BitIter { words, idx: 0, cur }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.cur == 0 {
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
        let bit = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some(self.idx * 64 + bit)
    }
}

/// A graph together with a bipartition `(U, V)`; every edge crosses.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left: Vec<usize>,
    right: Vec<usize>,
    graph: Graph,
}

impl BipartiteGraph {
    pub fn new(graph: Graph, mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self> {
        left.sort_unstable();
        right.sort_unstable();
        let ml = graph.mask_of(&left)?;
        let mr = graph.mask_of(&right)?;
        if left.len() + right.len() != graph.n()
            || ml.iter().zip(&mr).any(|(a, b)| a & b != 0)
            || left.windows(2).any(|w| w[0] == w[1])
            || right.windows(2).any(|w| w[0] == w[1])
        {
            return Err(Error::Domain(
                "bipartite parts must be disjoint and cover the vertex set".into(),
            ));
        }
        if graph.edges_within_mask(&ml) != 0 || graph.edges_within_mask(&mr) != 0 {
            return Err(Error::Domain(
                "bipartite graph has a non-crossing edge".into(),
            ));
        }
        Ok(BipartiteGraph { left, right, graph })
    }

    /// Convention used by the constructions and searches: `U = 0..m`,
    /// `V = m..m+n`.
    pub fn from_contiguous(graph: Graph, m: usize) -> Result<Self> {
        let left = (0..m).collect();
        let right = (m..graph.n()).collect();
        BipartiteGraph::new(graph, left, right)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// A graph with its vertex set partitioned into labeled parts `A_1..A_r`.
#[derive(Clone, Debug)]
pub struct PartLabeledGraph {
    graph: Graph,
    parts: Vec<Vec<usize>>,
}

impl PartLabeledGraph {
    pub fn new(graph: Graph, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; graph.n()];
        let mut covered = 0usize;
        for part in &parts {
            for &v in part {
                if v >= graph.n() || seen[v] {
                    return Err(Error::Domain(
                        "parts must be disjoint and within the vertex range".into(),
                    ));
                }
                seen[v] = true;
                covered += 1;
            }
        }
        if covered != graph.n() {
            return Err(Error::Domain("parts must cover the vertex set".into()));
        }
        Ok(PartLabeledGraph { graph, parts })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_triangle() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 2));
    }

    #[test]
    fn from_edge_list_empty_and_duplicates() {
        let g = Graph::from_edge_list(4, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn from_edge_list_rejects_loops_and_range() {
        assert!(Graph::from_edge_list(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edge_list(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = Graph::petersen();
        let sum: usize = g.vertices().map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.edge_count());
        assert_eq!(g.edge_count(), 15);
    }

    #[test]
    fn codegree_examples() {
        // the two degree-3 vertices of K_{2,3}
        let g = Graph::complete_bipartite(2, 3);
        assert_eq!(g.codegree(0, 1).unwrap(), 3);
        // adjacent pair of C_5 (girth 5)
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.codegree(0, 1).unwrap(), 0);
        // opposite pair of C_4
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(c4.codegree(0, 2).unwrap(), 2);
        assert!(c4.codegree(1, 1).is_err());
    }

    #[test]
    fn codegree_bounded_by_min_degree() {
        let g = Graph::petersen();
        for u in g.vertices() {
            for v in (u + 1)..g.n() {
                let cd = g.codegree(u, v).unwrap();
                assert!(cd <= g.degree(u).min(g.degree(v)));
            }
        }
    }

    #[test]
    fn pair_density_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.pair_density(&[0, 1], &[2, 3]).unwrap(), Ratio::new(1, 1));
        let e4 = Graph::empty(4);
        assert_eq!(e4.pair_density(&[0], &[1, 2]).unwrap(), Ratio::new(0, 1));
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(c4.pair_density(&[0, 2], &[1, 3]).unwrap(), Ratio::new(1, 1));
        assert!(c4.pair_density(&[], &[1]).is_err());
        assert!(c4.pair_density(&[0, 1], &[1, 2]).is_err());
    }

    #[test]
    fn pair_density_symmetric() {
        let g = Graph::petersen();
        let x = [0, 1, 2];
        let y = [5, 6, 7, 8];
        assert_eq!(
            g.pair_density(&x, &y).unwrap(),
            g.pair_density(&y, &x).unwrap()
        );
    }

    #[test]
    fn edge_list_text_roundtrip() {
        let g = Graph::petersen();
        let text = g.to_edge_list_text();
        assert!(text.starts_with("10 15\n"));
        let h = Graph::from_edge_list_text(&text).unwrap();
        assert!(g == h);
    }

    #[test]
    fn bipartite_validation() {
        let g = Graph::complete_bipartite(2, 3);
        assert!(BipartiteGraph::from_contiguous(g.clone(), 2).is_ok());
        // wrong split: within-part edge appears
        assert!(BipartiteGraph::from_contiguous(g, 1).is_err());
    }

    #[test]
    fn part_labeled_validation() {
        let g = Graph::complete(4);
        assert!(PartLabeledGraph::new(g.clone(), vec![vec![0, 1], vec![2, 3]]).is_ok());
        assert!(PartLabeledGraph::new(g.clone(), vec![vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(PartLabeledGraph::new(g, vec![vec![0, 1], vec![2]]).is_err());
    }
}
