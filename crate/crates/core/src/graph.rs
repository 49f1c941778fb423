//! Simple undirected graphs with cached degrees.
//!
//! A [`Graph`] is immutable once built. Adjacency is stored either as dense
//! bitset rows (one row of `u64` words per vertex) or, when `n * n` bits would
//! exceed the dense memory budget, as sorted neighbor arrays in CSR layout.
//! Every query answers identically on both backends.

use std::fmt;

use thiserror::Error;

/// Default upper bound on the size of a dense adjacency matrix, in bytes.
pub const DEFAULT_DENSE_BUDGET_BYTES: usize = 64 << 20;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex} rejected")]
    SelfLoopRejected { vertex: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex set built for {set} vertices used with graph on {graph}")]
    UniverseMismatch { set: usize, graph: usize },
}

/// Storage strategy for adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Bitset rows, `ceil(n/64)` words per vertex.
    Dense,
    /// Sorted neighbor lists.
    Sparse,
}

impl Backend {
    /// Picks `Dense` when the bit matrix fits within `budget_bytes`.
    pub fn for_size(n: usize, budget_bytes: usize) -> Backend {
        let bytes = n
            .checked_mul(words_for(n))
            .and_then(|w| w.checked_mul(8));
        match bytes {
            Some(b) if b <= budget_bytes => Backend::Dense,
            _ => Backend::Sparse,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Adjacency {
    Dense { words: usize, bits: Vec<u64> },
    Sparse { offsets: Vec<usize>, targets: Vec<u32> },
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Adjacency,
    degrees: Vec<usize>,
}

/// A set of vertices of a particular graph, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet { n, words: vec![0; words_for(n)] }
    }

    pub fn from_vertices<I>(n: usize, vertices: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = VertexSet::empty(n);
        for v in vertices {
            set.insert(v)?;
        }
        Ok(set)
    }

    /// Size of the universe `0..n` this set lives in.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) -> Result<bool, GraphError> {
        if v >= self.n {
            return Err(GraphError::InvalidVertex { vertex: v, n: self.n });
        }
        let mask = 1u64 << (v % WORD_BITS);
        let word = &mut self.words[v / WORD_BITS];
        let fresh = *word & mask == 0;
        *word |= mask;
        Ok(fresh)
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(&self.words)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates set bit positions of a word slice in increasing order.
#[derive(Clone)]
pub struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        let current = words.first().copied().unwrap_or(0);
        BitIter { words, index: 0, current }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Neighbors of a vertex in increasing index order.
#[derive(Clone)]
pub enum Neighbors<'a> {
    Dense(BitIter<'a>),
    Sparse(std::slice::Iter<'a, u32>),
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::Dense(it) => it.next(),
            Neighbors::Sparse(it) => it.next().map(|&v| v as usize),
        }
    }
}

/// Result of deleting a vertex set: the induced subgraph plus, for each new
/// vertex index, the index it had in the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub graph: Graph,
    pub original: Vec<usize>,
}

impl Graph {
    /// Builds a graph, choosing the backend from the default memory budget.
    ///
    /// Duplicate pairs (in either orientation) collapse to one edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::with_backend(n, edges, Backend::for_size(n, DEFAULT_DENSE_BUDGET_BYTES))
    }

    pub fn with_backend<I>(n: usize, edges: I, backend: Backend) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoopRejected { vertex: u });
            }
            pairs.push(if u < v { (u, v) } else { (v, u) });
        }
        Ok(match backend {
            Backend::Dense => Graph::dense_from_pairs(n, &pairs),
            Backend::Sparse => Graph::sparse_from_pairs(n, pairs),
        })
    }

    /// Empty graph on `n` vertices.
    pub fn edgeless(n: usize) -> Graph {
        Graph::new(n, std::iter::empty()).expect("no edges to validate")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph edges are in range")
    }

    fn dense_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Graph {
        let words = words_for(n);
        let mut bits = vec![0u64; n * words];
        for &(u, v) in pairs {
            bits[u * words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
            bits[v * words + u / WORD_BITS] |= 1 << (u % WORD_BITS);
        }
        Graph::from_dense_bits(n, words, bits)
    }

    fn from_dense_bits(n: usize, words: usize, bits: Vec<u64>) -> Graph {
        let degrees = if words == 0 {
            vec![0; n]
        } else {
            bits.chunks_exact(words)
                .map(|row| row.iter().map(|w| w.count_ones() as usize).sum())
                .collect()
        };
        Graph { n, adjacency: Adjacency::Dense { words, bits }, degrees }
    }

    fn sparse_from_pairs(n: usize, mut pairs: Vec<(usize, usize)>) -> Graph {
        pairs.sort_unstable();
        pairs.dedup();
        let mut degrees = vec![0usize; n];
        for &(u, v) in &pairs {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for &d in &degrees {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in &pairs {
            targets[fill[u]] = v as u32;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { n, adjacency: Adjacency::Sparse { offsets, targets }, degrees }
    }

    /// Builds a dense graph from `n` bitset rows of `ceil(n/64)` words each.
    /// Used by the exhaustive search, where rows are produced directly.
    pub(crate) fn from_rows_unchecked(n: usize, rows: &[u64]) -> Graph {
        debug_assert_eq!(rows.len(), n * words_for(n));
        Graph::from_dense_bits(n, words_for(n), rows.to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> Backend {
        match self.adjacency {
            Adjacency::Dense { .. } => Backend::Dense,
            Adjacency::Sparse { .. } => Backend::Sparse,
        }
    }

    /// Same graph stored with the given backend.
    pub fn to_backend(&self, backend: Backend) -> Graph {
        if self.backend() == backend {
            return self.clone();
        }
        Graph::with_backend(self.n, self.edges(), backend).expect("edges of a valid graph")
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    /// Largest vertex degree.
    pub fn max_degree(&self) -> Result<usize, GraphError> {
        self.degrees.iter().copied().max().ok_or(GraphError::EmptyGraph)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.adjacency {
            Adjacency::Dense { words, bits } => {
                bits[u * words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
            }
            Adjacency::Sparse { .. } => {
                let (a, b) = if self.degrees[u] <= self.degrees[v] { (u, v) } else { (v, u) };
                self.sparse_row(a).binary_search(&(b as u32)).is_ok()
            }
        }
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        match &self.adjacency {
            Adjacency::Dense { words, bits } => {
                Neighbors::Dense(BitIter::new(&bits[v * words..(v + 1) * words]))
            }
            Adjacency::Sparse { .. } => Neighbors::Sparse(self.sparse_row(v).iter()),
        }
    }

    /// Bitset row of `v`, if the graph is dense.
    #[inline]
    pub(crate) fn dense_row(&self, v: usize) -> Option<&[u64]> {
        match &self.adjacency {
            Adjacency::Dense { words, bits } => Some(&bits[v * words..(v + 1) * words]),
            Adjacency::Sparse { .. } => None,
        }
    }

    #[inline]
    fn sparse_row(&self, v: usize) -> &[u32] {
        match &self.adjacency {
            Adjacency::Sparse { offsets, targets } => &targets[offsets[v]..offsets[v + 1]],
            Adjacency::Dense { .. } => unreachable!("sparse_row on dense graph"),
        }
    }

    /// Number of common neighbors of `u` and `v`.
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        match &self.adjacency {
            Adjacency::Dense { words, bits } => {
                let a = &bits[u * words..(u + 1) * words];
                let b = &bits[v * words..(v + 1) * words];
                a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
            }
            Adjacency::Sparse { .. } => {
                merge_intersection_count(self.sparse_row(u), self.sparse_row(v))
            }
        }
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// `N[v]`: `v` together with its neighbors.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.n {
            return Err(GraphError::InvalidVertex { vertex: v, n: self.n });
        }
        let mut set = VertexSet::empty(self.n);
        match &self.adjacency {
            Adjacency::Dense { words, bits } => {
                set.words.copy_from_slice(&bits[v * words..(v + 1) * words]);
            }
            Adjacency::Sparse { .. } => {
                for &u in self.sparse_row(v) {
                    set.words[u as usize / WORD_BITS] |= 1 << (u as usize % WORD_BITS);
                }
            }
        }
        set.insert(v)?;
        Ok(set)
    }

    /// Induced subgraph on the vertices not in `removed`.
    ///
    /// Survivors are relabeled `0..n-|removed|` in increasing order of their
    /// original index. The backend is preserved.
    pub fn delete_vertices(&self, removed: &VertexSet) -> Result<Induced, GraphError> {
        if removed.universe() != self.n {
            return Err(GraphError::UniverseMismatch { set: removed.universe(), graph: self.n });
        }
        let mut new_index = vec![usize::MAX; self.n];
        let mut original = Vec::with_capacity(self.n - removed.len());
        for v in (0..self.n).filter(|&v| !removed.contains(v)) {
            new_index[v] = original.len();
            original.push(v);
        }
        let m = original.len();
        let graph = match &self.adjacency {
            Adjacency::Dense { .. } => {
                let words = words_for(m);
                let mut bits = vec![0u64; m * words];
                for (i, &old) in original.iter().enumerate() {
                    let row = &mut bits[i * words..(i + 1) * words];
                    for u in self.neighbors(old) {
                        let j = new_index[u];
                        if j != usize::MAX {
                            row[j / WORD_BITS] |= 1 << (j % WORD_BITS);
                        }
                    }
                }
                Graph::from_dense_bits(m, words, bits)
            }
            Adjacency::Sparse { .. } => {
                let mut offsets = Vec::with_capacity(m + 1);
                let mut targets = Vec::new();
                let mut degrees = Vec::with_capacity(m);
                offsets.push(0);
                for &old in &original {
                    let before = targets.len();
                    targets.extend(
                        self.sparse_row(old)
                            .iter()
                            .map(|&u| new_index[u as usize])
                            .filter(|&j| j != usize::MAX)
                            .map(|j| j as u32),
                    );
                    degrees.push(targets.len() - before);
                    offsets.push(targets.len());
                }
                Graph { n: m, adjacency: Adjacency::Sparse { offsets, targets }, degrees }
            }
        };
        Ok(Induced { graph, original })
    }

    /// Graph on the same vertices whose edges are exactly the non-edges of
    /// `self`.
    pub fn complement(&self) -> Graph {
        let n = self.n;
        match &self.adjacency {
            Adjacency::Dense { words, bits } => {
                let mut out = bits.iter().map(|w| !w).collect::<Vec<_>>();
                for v in 0..n {
                    let row = &mut out[v * words..(v + 1) * words];
                    row[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
                    if !n.is_multiple_of(WORD_BITS) {
                        row[words - 1] &= (1u64 << (n % WORD_BITS)) - 1;
                    }
                }
                Graph::from_dense_bits(n, *words, out)
            }
            Adjacency::Sparse { .. } => {
                let edges = (0..n).flat_map(|u| {
                    let row = self.sparse_row(u);
                    (u + 1..n).filter(move |&v| row.binary_search(&(v as u32)).is_err()).map(move |v| (u, v))
                });
                Graph::with_backend(n, edges, Backend::Sparse).expect("complement edges are valid")
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("backend", &self.backend())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Size of the intersection of two sorted slices.
#[inline]
pub(crate) fn merge_intersection_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
