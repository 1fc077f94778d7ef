//! Exact containment searches for expanded patterns.
//!
//! The expansion of a graph F to uniformity r keeps F's vertices as a core
//! and pads every F-edge with r - 2 private new vertices. H contains that
//! expansion when F embeds into the shadow of H in such a way that the edge
//! images extend to distinct host edges whose padding sets are pairwise
//! disjoint and avoid every core image. Searches are exhaustive backtracking
//! over desk-scale hosts (hard cap 40 vertices) and every hit is returned as
//! an [`Embedding`] certificate that can be re-verified from scratch.

use std::fmt;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, SimpleGraph};

const HOST_VERTEX_LIMIT: usize = 40;

#[derive(Debug, Error, PartialEq)]
pub enum PatternError {
    #[error("host is {host}-uniform but the search was asked for uniformity {asked}")]
    UniformityMismatch { host: usize, asked: usize },
    #[error("expansions need uniformity at least 3, got {0}")]
    UniformityTooSmall(usize),
    #[error("host has {n} vertices, searches are capped at {limit}")]
    HostTooLarge { n: usize, limit: usize },
    #[error("family core size {k} is below the uniformity {r}")]
    CoreTooSmall { k: usize, r: usize },
    #[error("pattern graph needs at least one edge")]
    PatternNeedsEdge,
    #[error("need at least one copy")]
    ZeroCopies,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("unknown pattern spec {0:?}")]
    UnknownSpec(String),
}

/// Which pattern a freeness question is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternSpec {
    /// No pattern: everything is free.
    Unrestricted,
    /// The expansion of `f` at the host's uniformity.
    Expansion { f: SimpleGraph },
    /// Some k vertices whose pairs are all covered by host edges.
    Family { k: usize },
    /// t vertex-disjoint copies of the expansion of `f`.
    DisjointExpansions { f: SimpleGraph, t: usize },
}

impl PatternSpec {
    /// Parses the CLI-facing forms: `none`, `expansion:Kk`, `family:k`,
    /// and `disjoint:t x Kk` (whitespace around the `x` optional).
    pub fn parse(text: &str) -> Result<Self, PatternError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "none" {
            return Ok(PatternSpec::Unrestricted);
        }
        if let Some(rest) = s.strip_prefix("expansion:K") {
            let k: usize = rest
                .parse()
                .map_err(|_| PatternError::UnknownSpec(text.to_string()))?;
            if k < 2 {
                return Err(PatternError::UnknownSpec(text.to_string()));
            }
            return Ok(PatternSpec::Expansion {
                f: SimpleGraph::complete(k),
            });
        }
        if let Some(rest) = s.strip_prefix("family:") {
            let k: usize = rest
                .parse()
                .map_err(|_| PatternError::UnknownSpec(text.to_string()))?;
            return Ok(PatternSpec::Family { k });
        }
        if let Some(rest) = s.strip_prefix("disjoint:") {
            let (t_part, k_part) = rest
                .split_once("xK")
                .ok_or_else(|| PatternError::UnknownSpec(text.to_string()))?;
            let t: usize = t_part
                .parse()
                .map_err(|_| PatternError::UnknownSpec(text.to_string()))?;
            let k: usize = k_part
                .parse()
                .map_err(|_| PatternError::UnknownSpec(text.to_string()))?;
            if t == 0 || k < 2 {
                return Err(PatternError::UnknownSpec(text.to_string()));
            }
            return Ok(PatternSpec::DisjointExpansions {
                f: SimpleGraph::complete(k),
                t,
            });
        }
        Err(PatternError::UnknownSpec(text.to_string()))
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::Unrestricted => write!(out, "none"),
            PatternSpec::Expansion { f } => write!(out, "expansion:K{}", f.n_vertices()),
            PatternSpec::Family { k } => write!(out, "family:{}", k),
            PatternSpec::DisjointExpansions { f, t } => {
                write!(out, "disjoint:{}xK{}", t, f.n_vertices())
            }
        }
    }
}

/// One pattern edge's slot in an embedding: which host edge realizes it and
/// which r - 2 vertices of that edge play the padding role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeAssignment {
    pub pattern_edge: (usize, usize),
    pub host_edge: usize,
    pub expansion_vertices: Vec<usize>,
}

/// Certificate that the host contains the expansion of a pattern graph.
/// `core_map[a]` is the host image of pattern vertex a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub core_map: Vec<usize>,
    pub assignments: Vec<EdgeAssignment>,
}

impl Embedding {
    /// Every host vertex the copy occupies, core and padding alike.
    pub fn vertex_mask(&self) -> u64 {
        let mut mask = 0u64;
        for &v in &self.core_map {
            mask |= 1 << v;
        }
        for a in &self.assignments {
            for &v in &a.expansion_vertices {
                mask |= 1 << v;
            }
        }
        mask
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mask = self.vertex_mask();
        (0..64).filter(|&v| mask >> v & 1 == 1).collect()
    }

    fn core_min(&self) -> usize {
        *self.core_map.iter().min().expect("core is nonempty")
    }
}

/// Re-checks an embedding against the host and pattern from first
/// principles; nothing from the search is trusted.
pub fn validate_embedding(
    h: &Hypergraph,
    f: &SimpleGraph,
    emb: &Embedding,
) -> Result<(), PatternError> {
    let fail = |msg: String| Err(PatternError::InvalidEmbedding(msg));
    let r = h.uniformity();
    if r < 3 {
        return Err(PatternError::UniformityTooSmall(r));
    }
    if emb.core_map.len() != f.n_vertices() {
        return fail(format!(
            "core maps {} vertices, pattern has {}",
            emb.core_map.len(),
            f.n_vertices()
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &v in &emb.core_map {
        if v >= h.n_vertices() {
            return fail(format!("core image {} out of range", v));
        }
        if !seen.insert(v) {
            return fail(format!("core image {} repeated", v));
        }
    }
    if emb.assignments.len() != f.n_edges() {
        return fail(format!(
            "{} assignments for {} pattern edges",
            emb.assignments.len(),
            f.n_edges()
        ));
    }
    let mut edges_covered: Vec<(usize, usize)> =
        emb.assignments.iter().map(|a| a.pattern_edge).collect();
    edges_covered.sort_unstable();
    if edges_covered != f.edges() {
        return fail("assignments do not cover the pattern edges exactly once".into());
    }
    let mut used_host_edges = std::collections::BTreeSet::new();
    let mut occupied: std::collections::BTreeSet<usize> = emb.core_map.iter().copied().collect();
    for a in &emb.assignments {
        let (pa, pb) = a.pattern_edge;
        let (ha, hb) = (emb.core_map[pa], emb.core_map[pb]);
        let edge = match h.edges().get(a.host_edge) {
            Some(e) => e,
            None => return fail(format!("host edge index {} out of range", a.host_edge)),
        };
        if !used_host_edges.insert(a.host_edge) {
            return fail(format!("host edge {} used twice", a.host_edge));
        }
        if a.expansion_vertices.len() != r - 2 {
            return fail(format!(
                "assignment for ({}, {}) has {} padding vertices, expected {}",
                pa,
                pb,
                a.expansion_vertices.len(),
                r - 2
            ));
        }
        let mut expected: Vec<usize> = a.expansion_vertices.clone();
        expected.push(ha);
        expected.push(hb);
        expected.sort_unstable();
        if &expected != edge {
            return fail(format!(
                "host edge {:?} is not the pair ({}, {}) plus its padding",
                edge, ha, hb
            ));
        }
        for &v in &a.expansion_vertices {
            if !occupied.insert(v) {
                return fail(format!(
                    "padding vertex {} collides with the core or another edge",
                    v
                ));
            }
        }
    }
    Ok(())
}

struct HostData {
    n: usize,
    shadow_adj: Vec<u64>,
    codegree: Vec<Vec<usize>>,
    edge_masks: Vec<u64>,
    // host edges through each pair, addressed [u][v] with u < v
    pair_edges: Vec<Vec<Vec<usize>>>,
}

impl HostData {
    fn build(h: &Hypergraph) -> Result<Self, PatternError> {
        let n = h.n_vertices();
        if n > HOST_VERTEX_LIMIT {
            return Err(PatternError::HostTooLarge {
                n,
                limit: HOST_VERTEX_LIMIT,
            });
        }
        let mut shadow_adj = vec![0u64; n];
        let mut codegree = vec![vec![0usize; n]; n];
        let mut pair_edges = vec![vec![Vec::new(); n]; n];
        let mut edge_masks = Vec::with_capacity(h.n_edges());
        for (idx, e) in h.edges().iter().enumerate() {
            let mut mask = 0u64;
            for &v in e {
                mask |= 1 << v;
            }
            edge_masks.push(mask);
            for i in 0..e.len() {
                for j in (i + 1)..e.len() {
                    let (u, v) = (e[i], e[j]);
                    shadow_adj[u] |= 1 << v;
                    shadow_adj[v] |= 1 << u;
                    codegree[u][v] += 1;
                    codegree[v][u] += 1;
                    pair_edges[u][v].push(idx);
                }
            }
        }
        Ok(HostData {
            n,
            shadow_adj,
            codegree,
            edge_masks,
            pair_edges,
        })
    }
}

/// Static most-constrained-first order over the pattern vertices: grow from
/// the highest-degree vertex, always picking the vertex with the most
/// already-ordered neighbors next.
fn core_order(f: &SimpleGraph) -> Vec<usize> {
    let nf = f.n_vertices();
    let deg = f.degrees();
    let adj = f.adjacency();
    let mut order = Vec::with_capacity(nf);
    let mut placed = vec![false; nf];
    for _ in 0..nf {
        let mut best: Option<(usize, usize, usize)> = None; // (placed_neighbors, degree, !index)
        for v in 0..nf {
            if placed[v] {
                continue;
            }
            let anchored = adj[v].iter().filter(|&&u| placed[u]).count();
            let key = (anchored, deg[v], nf - v);
            if best.map_or(true, |(a, d, i)| key > (a, d, i)) {
                best = Some(key);
            }
        }
        let (_, _, inv) = best.expect("vertex left to place");
        let v = nf - inv;
        placed[v] = true;
        order.push(v);
    }
    order
}

struct EmbeddingSearch<'a> {
    host: &'a HostData,
    f: &'a SimpleGraph,
    order: Vec<usize>,
    f_adj: Vec<Vec<usize>>,
}

impl<'a> EmbeddingSearch<'a> {
    fn new(host: &'a HostData, f: &'a SimpleGraph) -> Self {
        EmbeddingSearch {
            host,
            f,
            order: core_order(f),
            f_adj: f.adjacency(),
        }
    }

    /// Enumerates embeddings with every occupied vertex inside `allowed` and
    /// every core image strictly above `core_above`. Stops (returning true)
    /// as soon as the visitor does.
    fn run(
        &self,
        allowed: u64,
        core_above: Option<usize>,
        visit: &mut dyn FnMut(&Embedding) -> bool,
    ) -> bool {
        let mut phi = vec![usize::MAX; self.f.n_vertices()];
        self.place_core(0, allowed, core_above, &mut phi, 0u64, visit)
    }

    fn place_core(
        &self,
        pos: usize,
        allowed: u64,
        core_above: Option<usize>,
        phi: &mut Vec<usize>,
        core_mask: u64,
        visit: &mut dyn FnMut(&Embedding) -> bool,
    ) -> bool {
        if pos == self.order.len() {
            return self.assign_edges(phi, core_mask, allowed, visit);
        }
        let a = self.order[pos];
        let lo = core_above.map_or(0, |b| b + 1);
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        'hosts: for v in lo..self.host.n {
            if allowed >> v & 1 == 0 || core_mask >> v & 1 == 1 {
                continue;
            }
            let mut weight = 0usize;
            for &b in &self.f_adj[a] {
                let img = phi[b];
                if img == usize::MAX {
                    continue;
                }
                if self.host.shadow_adj[img] >> v & 1 == 0 {
                    continue 'hosts;
                }
                weight += self.host.codegree[img][v];
            }
            candidates.push((v, weight));
        }
        // pairs with richer covering edges first; index breaks ties
        candidates.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        for (v, _) in candidates {
            phi[a] = v;
            if self.place_core(pos + 1, allowed, core_above, phi, core_mask | 1 << v, visit) {
                return true;
            }
            phi[a] = usize::MAX;
        }
        false
    }

    fn assign_edges(
        &self,
        phi: &[usize],
        core_mask: u64,
        allowed: u64,
        visit: &mut dyn FnMut(&Embedding) -> bool,
    ) -> bool {
        // candidate host edges per pattern edge: contain the image pair,
        // meet the core in exactly that pair, pad only inside `allowed`
        let mut slots: Vec<((usize, usize), Vec<usize>)> = Vec::with_capacity(self.f.n_edges());
        for &(a, b) in self.f.edges() {
            let (mut u, mut v) = (phi[a], phi[b]);
            if u > v {
                std::mem::swap(&mut u, &mut v);
            }
            let pair_mask = (1u64 << u) | (1 << v);
            let mut cands = Vec::new();
            for &idx in &self.host.pair_edges[u][v] {
                let extra = self.host.edge_masks[idx] & !pair_mask;
                if extra & core_mask == 0 && extra & !allowed == 0 {
                    cands.push(idx);
                }
            }
            if cands.is_empty() {
                return false;
            }
            slots.push(((a, b), cands));
        }
        slots.sort_by_key(|(_, c)| c.len());
        let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(slots.len()); // (slot, edge)
        self.assign_rec(phi, core_mask, &slots, 0, 0u64, &mut chosen, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_rec(
        &self,
        phi: &[usize],
        core_mask: u64,
        slots: &[((usize, usize), Vec<usize>)],
        at: usize,
        used_pad: u64,
        chosen: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&Embedding) -> bool,
    ) -> bool {
        if at == slots.len() {
            let emb = self.build_embedding(phi, slots, chosen);
            return visit(&emb);
        }
        let ((a, b), ref cands) = slots[at];
        let (mut u, mut v) = (phi[a], phi[b]);
        if u > v {
            std::mem::swap(&mut u, &mut v);
        }
        let pair_mask = (1u64 << u) | (1 << v);
        for &idx in cands {
            let extra = self.host.edge_masks[idx] & !pair_mask;
            if extra & used_pad != 0 {
                continue;
            }
            chosen.push((at, idx));
            if self.assign_rec(phi, core_mask, slots, at + 1, used_pad | extra, chosen, visit) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn build_embedding(
        &self,
        phi: &[usize],
        slots: &[((usize, usize), Vec<usize>)],
        chosen: &[(usize, usize)],
    ) -> Embedding {
        let mut assignments = Vec::with_capacity(chosen.len());
        for &(slot, edge_idx) in chosen {
            let (a, b) = slots[slot].0;
            let (ha, hb) = (phi[a], phi[b]);
            let pad: Vec<usize> = (0..self.host.n)
                .filter(|&w| {
                    self.host.edge_masks[edge_idx] >> w & 1 == 1 && w != ha && w != hb
                })
                .collect();
            assignments.push(EdgeAssignment {
                pattern_edge: (a, b),
                host_edge: edge_idx,
                expansion_vertices: pad,
            });
        }
        assignments.sort_by_key(|a| a.pattern_edge);
        Embedding {
            core_map: phi.to_vec(),
            assignments,
        }
    }
}

fn check_expansion_args(
    h: &Hypergraph,
    f: &SimpleGraph,
    r: usize,
) -> Result<(), PatternError> {
    if r < 3 {
        return Err(PatternError::UniformityTooSmall(r));
    }
    if h.uniformity() != r {
        return Err(PatternError::UniformityMismatch {
            host: h.uniformity(),
            asked: r,
        });
    }
    if f.n_edges() == 0 {
        return Err(PatternError::PatternNeedsEdge);
    }
    Ok(())
}

fn expansion_vertex_count(f: &SimpleGraph, r: usize) -> usize {
    f.n_vertices() + (r - 2) * f.n_edges()
}

/// First embedding of the expansion of `f` into `h`, or None. Exact.
pub fn contains_expansion(
    h: &Hypergraph,
    f: &SimpleGraph,
    r: usize,
) -> Result<Option<Embedding>, PatternError> {
    check_expansion_args(h, f, r)?;
    if expansion_vertex_count(f, r) > h.n_vertices() {
        return Ok(None);
    }
    let host = HostData::build(h)?;
    let search = EmbeddingSearch::new(&host, f);
    let mut found = None;
    let full = if host.n == 64 { u64::MAX } else { (1u64 << host.n) - 1 };
    search.run(full, None, &mut |emb| {
        found = Some(emb.clone());
        true
    });
    Ok(found)
}

/// A k-set whose pairs are all covered by edges of `h` (equivalently a
/// k-clique in the shadow), smallest-vertex-first, or None. Exact.
pub fn contains_family_member(
    h: &Hypergraph,
    k: usize,
) -> Result<Option<Vec<usize>>, PatternError> {
    let r = h.uniformity();
    if k < r {
        return Err(PatternError::CoreTooSmall { k, r });
    }
    let host = HostData::build(h)?;
    if k > host.n {
        return Ok(None);
    }
    // peel vertices that cannot sit in a k-clique
    let mut alive = if host.n == 64 { u64::MAX } else { (1u64 << host.n) - 1 };
    loop {
        let mut removed = false;
        for v in 0..host.n {
            if alive >> v & 1 == 1
                && ((host.shadow_adj[v] & alive).count_ones() as usize) < k - 1
            {
                alive &= !(1 << v);
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    let mut clique = Vec::with_capacity(k);
    if clique_rec(&host.shadow_adj, alive, k, 0, &mut clique) {
        Ok(Some(clique))
    } else {
        Ok(None)
    }
}

fn clique_rec(adj: &[u64], cand: u64, k: usize, from: usize, clique: &mut Vec<usize>) -> bool {
    if clique.len() == k {
        return true;
    }
    let need = k - clique.len();
    if (cand.count_ones() as usize) < need {
        return false;
    }
    for v in from..adj.len() {
        if cand >> v & 1 == 0 {
            continue;
        }
        clique.push(v);
        if clique_rec(adj, cand & adj[v], k, v + 1, clique) {
            return true;
        }
        clique.pop();
    }
    false
}

/// t pairwise vertex-disjoint embeddings of the expansion of `f`, or None.
/// Exact; copies are reported in ascending order of their smallest core
/// image, which is the symmetry break that keeps the search from revisiting
/// permutations of the same family of copies.
pub fn contains_t_disjoint(
    h: &Hypergraph,
    f: &SimpleGraph,
    r: usize,
    t: usize,
) -> Result<Option<Vec<Embedding>>, PatternError> {
    check_expansion_args(h, f, r)?;
    if t == 0 {
        return Err(PatternError::ZeroCopies);
    }
    if t * expansion_vertex_count(f, r) > h.n_vertices() {
        return Ok(None);
    }
    let host = HostData::build(h)?;
    let search = EmbeddingSearch::new(&host, f);
    let full = if host.n == 64 { u64::MAX } else { (1u64 << host.n) - 1 };
    let mut acc: Vec<Embedding> = Vec::with_capacity(t);
    if place_copies(&search, t, full, None, &mut acc) {
        Ok(Some(acc))
    } else {
        Ok(None)
    }
}

fn place_copies(
    search: &EmbeddingSearch<'_>,
    remaining: usize,
    allowed: u64,
    min_core: Option<usize>,
    acc: &mut Vec<Embedding>,
) -> bool {
    if remaining == 0 {
        return true;
    }
    let mut done = false;
    search.run(allowed, min_core, &mut |emb| {
        let used = emb.vertex_mask();
        let next_min = emb.core_min();
        acc.push(emb.clone());
        if place_copies(search, remaining - 1, allowed & !used, Some(next_min), acc) {
            done = true;
            return true;
        }
        acc.pop();
        false
    });
    done
}

/// True when `h` avoids the pattern entirely.
pub fn is_free(h: &Hypergraph, spec: &PatternSpec) -> Result<bool, PatternError> {
    match spec {
        PatternSpec::Unrestricted => Ok(true),
        PatternSpec::Expansion { f } => {
            Ok(contains_expansion(h, f, h.uniformity())?.is_none())
        }
        PatternSpec::Family { k } => Ok(contains_family_member(h, *k)?.is_none()),
        PatternSpec::DisjointExpansions { f, t } => {
            Ok(contains_t_disjoint(h, f, h.uniformity(), *t)?.is_none())
        }
    }
}
