//! r-uniform hypergraphs with canonical edge storage, the constructions the
//! rest of the crate is built from, and the HGR v1 text format.
//!
//! Canonical form: every edge is sorted ascending, the edge list is sorted
//! lexicographically, duplicates are collapsed. Two values compare equal iff
//! they are the same labeled hypergraph.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use itertools::Itertools;
use thiserror::Error;


#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("uniformity must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("need at least r = {r} vertices, got n = {n}")]
    TooFewVertices { n: usize, r: usize },
    #[error("edge {0:?} has arity {1}, expected {2}")]
    WrongArity(Vec<usize>, usize, usize),
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("operands have different uniformity: {0} vs {1}")]
    UniformityMismatch(usize, usize),
    #[error("operands have different vertex counts: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("need at least r = {r} parts, got {k}")]
    TooFewParts { k: usize, r: usize },
    #[error("part sizes must all be positive")]
    EmptyPart,
    #[error("expansion is defined for uniformity 3 and above, got {0}")]
    ExpansionUniformity(usize),
    #[error("expansion needs a graph with at least one edge")]
    ExpansionNeedsEdge,
    #[error("codegree needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("copy count must be at least 1")]
    ZeroCopies,
    #[error("edge selection is empty")]
    EmptyEdgeSelection,
    #[error("edge index {0} out of range ({1} edges)")]
    EdgeIndexOutOfRange(usize, usize),
    #[error("not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("hgr parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Positive part sizes for complete multipartite constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartSizes {
    sizes: Vec<usize>,
}

impl PartSizes {
    pub fn new(sizes: Vec<usize>) -> Result<Self, HypergraphError> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(HypergraphError::EmptyPart);
        }
        Ok(PartSizes { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Consecutive index blocks: part i covers
    /// [offset_i, offset_i + size_i).
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.sizes.len());
        let mut at = 0;
        for &s in &self.sizes {
            out.push(at..at + s);
            at += s;
        }
        out
    }
}

/// Canonical sizes for the balanced k-partition of n vertices:
/// part i (1-based) has floor((n + i - 1) / k) vertices, so sizes are
/// non-decreasing and differ by at most one.
pub fn turan_part_sizes(n: usize, k: usize) -> PartSizes {
    assert!(k >= 1 && n >= k, "need n >= k >= 1");
    PartSizes {
        sizes: (1..=k).map(|i| (n + i - 1) / k).collect(),
    }
}

/// An r-uniform hypergraph on vertices 0..n in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph from raw edge tuples, canonicalizing as it goes.
    /// Requires n >= r >= 2; every tuple must hold r distinct vertices below n.
    pub fn new(
        n: usize,
        r: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::UniformityTooSmall(r));
        }
        if n < r {
            return Err(HypergraphError::TooFewVertices { n, r });
        }
        let mut canon: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut e in edges {
            if e.len() != r {
                return Err(HypergraphError::WrongArity(e.clone(), e.len(), r));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex(e));
            }
            if let Some(&v) = e.last() {
                if v >= n {
                    return Err(HypergraphError::VertexOutOfRange { v, n });
                }
            }
            canon.insert(e);
        }
        Ok(Hypergraph {
            n,
            r,
            edges: canon.into_iter().collect(),
        })
    }

    /// The edgeless r-uniform hypergraph on n vertices. Unlike [`Hypergraph::new`]
    /// this allows n < r (including n = 0), which is what joins and apex
    /// constructions need for their degenerate operands.
    pub fn empty(n: usize, r: usize) -> Self {
        assert!(r >= 2, "uniformity must be at least 2");
        Hypergraph {
            n,
            r,
            edges: Vec::new(),
        }
    }

    fn from_canonical(n: usize, r: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|e| e.len() == r && e.windows(2).all(|w| w[0] < w[1])));
        Hypergraph { n, r, edges }
    }

    /// Complete r-graph on n vertices.
    pub fn complete(n: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::UniformityTooSmall(r));
        }
        if n < r {
            return Err(HypergraphError::TooFewVertices { n, r });
        }
        let edges = (0..n).combinations(r).collect();
        Ok(Hypergraph::from_canonical(n, r, edges))
    }

    /// Complete r-graph when n >= r, the edgeless graph on n vertices
    /// otherwise. Degenerate apexes like the (t-1)-vertex side of a join fall
    /// in the second branch.
    pub fn clique_or_empty(n: usize, r: usize) -> Self {
        if n >= r {
            Hypergraph::complete(n, r).expect("n >= r >= 2")
        } else {
            Hypergraph::empty(n, r)
        }
    }

    /// Complete multipartite r-graph: classes are consecutive index blocks,
    /// edges are exactly the r-sets meeting every class at most once.
    pub fn complete_multipartite(parts: &PartSizes, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::UniformityTooSmall(r));
        }
        let k = parts.k();
        if k < r {
            return Err(HypergraphError::TooFewParts { k, r });
        }
        let blocks = parts.blocks();
        let n = parts.total();
        let mut edges = Vec::new();
        for class_choice in (0..k).combinations(r) {
            let ranges: Vec<_> = class_choice.iter().map(|&i| blocks[i].clone()).collect();
            for e in ranges.into_iter().multi_cartesian_product() {
                edges.push(e);
            }
        }
        Hypergraph::new(n, r, edges)
    }

    /// Balanced complete k-partite r-graph on n vertices with the canonical
    /// part sizes from [`turan_part_sizes`].
    pub fn turan(n: usize, k: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::UniformityTooSmall(r));
        }
        if k < r {
            return Err(HypergraphError::TooFewParts { k, r });
        }
        if n < k {
            return Err(HypergraphError::TooFewVertices { n, r: k });
        }
        Hypergraph::complete_multipartite(&turan_part_sizes(n, k), r)
    }

    /// Join: disjoint copies of the operands plus every r-set meeting both
    /// sides. The second operand is relabeled upward by the first one's
    /// vertex count.
    pub fn join(h1: &Hypergraph, h2: &Hypergraph) -> Result<Self, HypergraphError> {
        if h1.r != h2.r {
            return Err(HypergraphError::UniformityMismatch(h1.r, h2.r));
        }
        let r = h1.r;
        let (n1, n2) = (h1.n, h2.n);
        let n = n1 + n2;
        let mut edges: Vec<Vec<usize>> = h1.edges.clone();
        edges.extend(
            h2.edges
                .iter()
                .map(|e| e.iter().map(|&v| v + n1).collect::<Vec<_>>()),
        );
        // crossing r-sets: s vertices from the left, r - s from the right
        let lo = if r > n2 { r - n2 } else { 1 };
        let hi = (r - 1).min(n1);
        for s in lo.max(1)..=hi {
            for left in (0..n1).combinations(s) {
                for right in (n1..n).combinations(r - s) {
                    let mut e = left.clone();
                    e.extend_from_slice(&right);
                    edges.push(e);
                }
            }
        }
        if n < r {
            // both operands were edgeless and too small to cross
            return Ok(Hypergraph::empty(n, r));
        }
        Hypergraph::new(n, r, edges)
    }

    /// Disjoint union, second operand relabeled upward by `h1.n_vertices()`.
    pub fn disjoint_union(h1: &Hypergraph, h2: &Hypergraph) -> Result<Self, HypergraphError> {
        if h1.r != h2.r {
            return Err(HypergraphError::UniformityMismatch(h1.r, h2.r));
        }
        let n = h1.n + h2.n;
        let mut edges = h1.edges.clone();
        edges.extend(
            h2.edges
                .iter()
                .map(|e| e.iter().map(|&v| v + h1.n).collect::<Vec<_>>()),
        );
        if n < h1.r {
            return Ok(Hypergraph::empty(n, h1.r));
        }
        Hypergraph::new(n, h1.r, edges)
    }

    /// t vertex-disjoint copies of `h`.
    pub fn t_copies(h: &Hypergraph, t: usize) -> Result<Self, HypergraphError> {
        if t == 0 {
            return Err(HypergraphError::ZeroCopies);
        }
        let mut acc = h.clone();
        for _ in 1..t {
            acc = Hypergraph::disjoint_union(&acc, h)?;
        }
        Ok(acc)
    }

    /// Union of edge sets on a shared vertex set.
    pub fn sum(h1: &Hypergraph, h2: &Hypergraph) -> Result<Self, HypergraphError> {
        if h1.r != h2.r {
            return Err(HypergraphError::UniformityMismatch(h1.r, h2.r));
        }
        if h1.n != h2.n {
            return Err(HypergraphError::VertexCountMismatch(h1.n, h2.n));
        }
        let edges = h1.edges.iter().chain(h2.edges.iter()).cloned();
        if h1.n < h1.r {
            return Ok(Hypergraph::empty(h1.n, h1.r));
        }
        Hypergraph::new(h1.n, h1.r, edges)
    }

    /// Expansion of a graph to uniformity r: keep the graph's vertices, give
    /// every graph edge r - 2 fresh vertices of its own. Fresh vertices are
    /// appended after the original ones, in the graph's canonical edge order,
    /// so the result has |V(F)| + (r-2) * e(F) vertices and e(F) edges.
    pub fn expansion(f: &SimpleGraph, r: usize) -> Result<Self, HypergraphError> {
        if r < 3 {
            return Err(HypergraphError::ExpansionUniformity(r));
        }
        if f.edges().is_empty() {
            return Err(HypergraphError::ExpansionNeedsEdge);
        }
        let nf = f.n_vertices();
        let extra = r - 2;
        let n = nf + extra * f.edges().len();
        let mut edges = Vec::with_capacity(f.edges().len());
        for (j, &(a, b)) in f.edges().iter().enumerate() {
            let mut e = vec![a, b];
            e.extend(nf + j * extra..nf + (j + 1) * extra);
            edges.push(e);
        }
        Hypergraph::new(n, r, edges)
    }

    /// The 2-shadow: every pair of vertices that appear together in an edge.
    pub fn shadow(&self) -> SimpleGraph {
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            for p in e.iter().combinations(2) {
                pairs.insert((*p[0], *p[1]));
            }
        }
        SimpleGraph::from_canonical(self.n, pairs.into_iter().collect())
    }

    /// Subhypergraph induced by a vertex set, relabeled densely. Returns the
    /// relabeled graph together with the sorted original labels, so
    /// `mapping[new] == old`.
    pub fn induced_vertices(
        &self,
        vertices: &[usize],
    ) -> Result<(Hypergraph, Vec<usize>), HypergraphError> {
        let mut mapping: Vec<usize> = vertices.to_vec();
        mapping.sort_unstable();
        mapping.dedup();
        if let Some(&v) = mapping.last() {
            if v >= self.n {
                return Err(HypergraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        let mut new_label = vec![usize::MAX; self.n];
        for (new, &old) in mapping.iter().enumerate() {
            new_label[old] = new;
        }
        let kept: Vec<Vec<usize>> = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| new_label[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| new_label[v]).collect())
            .collect();
        let n_new = mapping.len();
        let induced = if n_new < self.r {
            Hypergraph::empty(n_new, self.r)
        } else {
            Hypergraph::new(n_new, self.r, kept)?
        };
        Ok((induced, mapping))
    }

    /// Subhypergraph induced by a nonempty set of edge indices: its vertex
    /// set is the union of the chosen edges, relabeled densely.
    pub fn induced_edges(
        &self,
        edge_indices: &[usize],
    ) -> Result<(Hypergraph, Vec<usize>), HypergraphError> {
        if edge_indices.is_empty() {
            return Err(HypergraphError::EmptyEdgeSelection);
        }
        let mut support = BTreeSet::new();
        let mut chosen = Vec::new();
        for &i in edge_indices {
            let e = self
                .edges
                .get(i)
                .ok_or(HypergraphError::EdgeIndexOutOfRange(i, self.edges.len()))?;
            support.extend(e.iter().copied());
            chosen.push(e.clone());
        }
        let mapping: Vec<usize> = support.into_iter().collect();
        let mut new_label = vec![usize::MAX; self.n];
        for (new, &old) in mapping.iter().enumerate() {
            new_label[old] = new;
        }
        let edges = chosen
            .into_iter()
            .map(|e| e.into_iter().map(|v| new_label[v]).collect::<Vec<_>>());
        Ok((Hypergraph::new(mapping.len(), self.r, edges)?, mapping))
    }

    /// Copy with vertices renamed by a permutation: vertex v becomes perm[v].
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph, HypergraphError> {
        if perm.len() != self.n {
            return Err(HypergraphError::BadPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(HypergraphError::BadPermutation(self.n));
            }
            seen[p] = true;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>());
        if self.n < self.r {
            return Ok(Hypergraph::empty(self.n, self.r));
        }
        Hypergraph::new(self.n, self.r, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_edge(&self, e: &[usize]) -> bool {
        let mut key = e.to_vec();
        key.sort_unstable();
        self.edges.binary_search(&key).is_ok()
    }

    /// Number of edges containing u.
    pub fn degree(&self, u: usize) -> Result<usize, HypergraphError> {
        if u >= self.n {
            return Err(HypergraphError::VertexOutOfRange { v: u, n: self.n });
        }
        Ok(self.edges.iter().filter(|e| e.binary_search(&u).is_ok()).count())
    }

    /// Number of edges containing both u and v (u != v).
    pub fn codegree(&self, u: usize, v: usize) -> Result<usize, HypergraphError> {
        if u == v {
            return Err(HypergraphError::SameVertex(u));
        }
        for &w in &[u, v] {
            if w >= self.n {
                return Err(HypergraphError::VertexOutOfRange { v: w, n: self.n });
            }
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| e.binary_search(&u).is_ok() && e.binary_search(&v).is_ok())
            .count())
    }

    /// All vertex degrees at once.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    /// Codegree of every unordered pair, addressed as [u][v] for u < v.
    pub fn codegree_table(&self) -> Vec<Vec<usize>> {
        let mut t = vec![vec![0usize; self.n]; self.n];
        for e in &self.edges {
            for p in e.iter().combinations(2) {
                t[*p[0]][*p[1]] += 1;
            }
        }
        t
    }

    /// True when all n vertices lie in a single component of the incidence
    /// structure. Isolated vertices disconnect a graph with n >= 2.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let root = find(&mut parent, e[0]);
            for &v in &e[1..] {
                let rv = find(&mut parent, v);
                parent[rv] = root;
            }
        }
        let first = find(&mut parent, 0);
        (1..self.n).all(|v| find(&mut parent, v) == first)
    }

    /// Serializes to HGR v1: header `r n m`, then one line per edge with r
    /// ascending vertex indices, all space-separated with LF endings.
    pub fn to_hgr(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.r, self.n, self.edges.len()).unwrap();
        for e in &self.edges {
            let line = e.iter().map(|v| v.to_string()).join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses HGR v1. Edges need not be pre-sorted; the result is canonical,
    /// so `to_hgr` of the parse is byte-identical for canonical input.
    pub fn from_hgr(text: &str) -> Result<Self, HypergraphError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| HypergraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(HypergraphError::Parse {
                line: 1,
                msg: format!("header needs `r n m`, got {:?}", header),
            });
        }
        let parse_num = |s: &str, line: usize| -> Result<usize, HypergraphError> {
            s.parse().map_err(|_| HypergraphError::Parse {
                line,
                msg: format!("bad integer {:?}", s),
            })
        };
        let r = parse_num(fields[0], 1)?;
        let n = parse_num(fields[1], 1)?;
        let m = parse_num(fields[2], 1)?;
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let line_no = i + 2;
            let line = lines.next().ok_or_else(|| HypergraphError::Parse {
                line: line_no,
                msg: format!("expected {} edge lines, file ends after {}", m, i),
            })?;
            let verts: Result<Vec<usize>, _> = line
                .split_whitespace()
                .map(|s| parse_num(s, line_no))
                .collect();
            let verts = verts?;
            if verts.len() != r {
                return Err(HypergraphError::Parse {
                    line: line_no,
                    msg: format!("edge has {} vertices, expected {}", verts.len(), r),
                });
            }
            edges.push(verts);
        }
        for (extra, line) in lines.enumerate() {
            if !line.trim().is_empty() {
                return Err(HypergraphError::Parse {
                    line: m + 2 + extra,
                    msg: "trailing content after declared edges".into(),
                });
            }
        }
        if n < r {
            if !edges.is_empty() {
                return Err(HypergraphError::Parse {
                    line: 2,
                    msg: format!("edges declared but n = {} < r = {}", n, r),
                });
            }
            if r < 2 {
                return Err(HypergraphError::Parse {
                    line: 1,
                    msg: format!("uniformity {} below 2", r),
                });
            }
            return Ok(Hypergraph::empty(n, r));
        }
        Hypergraph::new(n, r, edges).map_err(|e| HypergraphError::Parse {
            line: 1,
            msg: e.to_string(),
        })
    }
}

/// Exact edge count of the balanced complete k-partite r-graph on n
/// vertices: sum over r-subsets S of the k classes of the product of the
/// canonical class sizes in S.
pub fn turan_edge_count(n: usize, k: usize, r: usize) -> usize {
    assert!(n >= k && k >= r && r >= 1);
    let sizes = turan_part_sizes(n, k);
    let mut total: u128 = 0;
    for choice in (0..k).combinations(r) {
        let mut prod: u128 = 1;
        for i in choice {
            prod *= sizes.sizes()[i] as u128;
        }
        total += prod;
    }
    total as usize
}

/// A finite simple graph, canonical like [`Hypergraph`] with r = 2: edges
/// stored as ascending pairs in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, HypergraphError> {
        let mut canon = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(HypergraphError::RepeatedVertex(vec![a, b]));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= n {
                return Err(HypergraphError::VertexOutOfRange { v, n });
            }
            canon.insert((u, v));
        }
        Ok(SimpleGraph {
            n,
            edges: canon.into_iter().collect(),
        })
    }

    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        SimpleGraph { n, edges }
    }

    /// Complete graph on k vertices.
    pub fn complete(k: usize) -> Self {
        let edges = (0..k)
            .flat_map(|u| ((u + 1)..k).map(move |v| (u, v)))
            .collect();
        SimpleGraph { n: k, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Adjacency as index lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn to_hgr(&self) -> String {
        let mut out = String::new();
        writeln!(out, "2 {} {}", self.n, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", u, v).unwrap();
        }
        out
    }
}
