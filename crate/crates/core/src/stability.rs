//! Partition machinery for measuring how close a hypergraph sits to a
//! balanced complete multipartite one.
//!
//! The score of a partition adds up, over all edges, how many classes the
//! edge touches. Maximizing it favors partitions whose classes are
//! transversal to the edge set; against the best balanced partition we can
//! then count missing edges (partite but absent) and bad edges (present but
//! meeting a class twice), classify vertex pairs by codegree thresholds,
//! and carve each class into heavy, attached and typical vertices.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combin::{binomial, falling_factorial};
use crate::hypergraph::{turan_edge_count, turan_part_sizes, Hypergraph, SimpleGraph};

#[derive(Debug, Error, PartialEq)]
pub enum StabilityError {
    #[error("partition covers {partition} vertices, graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },
    #[error("class index {index} out of range for {k} classes")]
    ClassOutOfRange { index: usize, k: usize },
    #[error("need at least {need} classes, got {k}")]
    TooFewClasses { k: usize, need: usize },
    #[error("{k} classes cannot carry {r}-uniform partite edges")]
    ClassesBelowArity { k: usize, r: usize },
    #[error("need at least {k} vertices for {k} classes, got {n}")]
    TooFewVertices { n: usize, k: usize },
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("theta {theta} must exceed epsilon^((r-1)/r^2) = {bound}")]
    ThetaTooSmall { theta: f64, bound: f64 },
    #[error("pair analysis needs uniformity at least 3, got {0}")]
    UniformityTooSmall(usize),
    #[error("uniformity mismatch: host is {host}-uniform, config says {config}")]
    UniformityMismatch { host: usize, config: usize },
    #[error("class count and copy count must be positive")]
    BadCounts,
    #[error("matching and degree bounds must be positive")]
    NonpositiveBound,
    #[error("extremal oracle capped at {limit} vertices, asked for {n}")]
    OracleTooLarge { n: usize, limit: usize },
    #[error("need at least one set")]
    EmptyFamily,
}

/// Assignment of every vertex to one of k classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self, StabilityError> {
        if k == 0 {
            return Err(StabilityError::TooFewClasses { k, need: 1 });
        }
        if let Some(&bad) = assignment.iter().find(|&&c| c >= k) {
            return Err(StabilityError::ClassOutOfRange { index: bad, k });
        }
        Ok(Partition { assignment, k })
    }

    /// Consecutive blocks with the balanced class sizes, smaller blocks
    /// first. Matches the class layout of the balanced multipartite
    /// construction on the same parameters.
    pub fn balanced_blocks(n: usize, k: usize) -> Result<Self, StabilityError> {
        if k == 0 {
            return Err(StabilityError::TooFewClasses { k, need: 1 });
        }
        if n < k {
            return Err(StabilityError::TooFewVertices { n, k });
        }
        let sizes = turan_part_sizes(n, k).sizes().to_vec();
        let mut assignment = Vec::with_capacity(n);
        for (i, &s) in sizes.iter().enumerate() {
            assignment.extend(std::iter::repeat(i).take(s));
        }
        Ok(Partition { assignment, k })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Thresholds for the pair classification. All derived quantities are
/// recomputed from the five inputs and the vertex count on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub epsilon: f64,
    pub theta: f64,
    pub k: usize,
    pub r: usize,
    pub t: usize,
}

impl AnalysisConfig {
    pub fn new(
        epsilon: f64,
        theta: f64,
        k: usize,
        r: usize,
        t: usize,
    ) -> Result<Self, StabilityError> {
        if r < 3 {
            return Err(StabilityError::UniformityTooSmall(r));
        }
        if k == 0 || t == 0 {
            return Err(StabilityError::BadCounts);
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(StabilityError::BadEpsilon(epsilon));
        }
        let rr = (r * r) as f64;
        let bound = epsilon.powf((r as f64 - 1.0) / rr);
        if !(theta > bound) {
            return Err(StabilityError::ThetaTooSmall { theta, bound });
        }
        Ok(AnalysisConfig {
            epsilon,
            theta,
            k,
            r,
            t,
        })
    }

    /// Vertex count of t disjoint copies of the expanded (k+1)-clique.
    pub fn copies_vertex_count(&self) -> usize {
        let per_copy = (self.k + 1) + (self.r - 2) * binomial(self.k + 1, 2) as usize;
        self.t * per_copy
    }

    /// Codegree threshold separating sparse from dense and marking
    /// dominant pairs. Note the binomial is over r - 3 slots, so at r = 3
    /// the threshold is the bare vertex count of the forbidden copies.
    pub fn codegree_threshold(&self, n: usize) -> usize {
        self.copies_vertex_count() * binomial(n, self.r - 3) as usize
    }

    pub fn edge_slack(&self, n: usize) -> f64 {
        self.epsilon.powf(3.0 / (2.0 * (self.r * self.r) as f64))
            * (n as f64).powi(self.r as i32 - 1)
    }

    pub fn entry_ratio_floor(&self) -> f64 {
        falling_factorial(self.k, self.r) as f64 / (2.0 * (self.k as f64).powi(self.r as i32))
    }

    pub fn sparse_vertex_threshold(&self, n: usize) -> f64 {
        self.epsilon.powf(1.0 / (self.r * self.r) as f64) * n as f64
    }

    pub fn dominant_vertex_threshold(&self, n: usize) -> f64 {
        self.theta * n as f64
    }
}

/// Sum over the edges of the number of classes each edge meets.
pub fn partition_score(h: &Hypergraph, sigma: &Partition) -> Result<usize, StabilityError> {
    if sigma.n() != h.n_vertices() {
        return Err(StabilityError::SizeMismatch {
            partition: sigma.n(),
            graph: h.n_vertices(),
        });
    }
    let mut score = 0usize;
    let mut seen = vec![usize::MAX; sigma.k()];
    for (idx, e) in h.edges().iter().enumerate() {
        for &v in e {
            let c = sigma.class_of(v);
            if seen[c] != idx {
                seen[c] = idx;
                score += 1;
            }
        }
    }
    Ok(score)
}

const EXACT_PARTITION_LIMIT: usize = 12;

struct ScoreSearch {
    k: usize,
    incident: Vec<Vec<usize>>,
    counts: Vec<Vec<u16>>,
    touched: Vec<usize>,
    unassigned: Vec<usize>,
    potential: Vec<usize>,
    potential_sum: usize,
    cap: usize, // min(r, k), most classes one edge can meet
    assignment: Vec<usize>,
    best_score: usize,
    best_assignment: Option<Vec<usize>>,
}

impl ScoreSearch {
    fn new(h: &Hypergraph, k: usize) -> Self {
        let n = h.n_vertices();
        let m = h.n_edges();
        let r = h.uniformity();
        let mut incident = vec![Vec::new(); n];
        for (idx, e) in h.edges().iter().enumerate() {
            for &v in e {
                incident[v].push(idx);
            }
        }
        let cap = r.min(k);
        ScoreSearch {
            k,
            incident,
            counts: vec![vec![0u16; k]; m],
            touched: vec![0; m],
            unassigned: vec![r; m],
            potential: vec![cap.min(r); m],
            potential_sum: m * cap.min(r),
            cap,
            assignment: vec![usize::MAX; n],
            best_score: 0,
            best_assignment: None,
        }
    }

    fn assign(&mut self, v: usize, c: usize) -> usize {
        let mut gain = 0;
        for idx in 0..self.incident[v].len() {
            let e = self.incident[v][idx];
            if self.counts[e][c] == 0 {
                self.touched[e] += 1;
                gain += 1;
            }
            self.counts[e][c] += 1;
            self.unassigned[e] -= 1;
            let pot = self.unassigned[e].min(self.cap - self.touched[e].min(self.cap));
            self.potential_sum -= self.potential[e] - pot;
            self.potential[e] = pot;
        }
        self.assignment[v] = c;
        gain
    }

    fn unassign(&mut self, v: usize, c: usize) {
        for idx in 0..self.incident[v].len() {
            let e = self.incident[v][idx];
            self.counts[e][c] -= 1;
            if self.counts[e][c] == 0 {
                self.touched[e] -= 1;
            }
            self.unassigned[e] += 1;
            let pot = self.unassigned[e].min(self.cap - self.touched[e].min(self.cap));
            self.potential_sum += pot - self.potential[e];
            self.potential[e] = pot;
        }
        self.assignment[v] = usize::MAX;
    }

    // restricted-growth enumeration: vertex v may open at most one new class
    fn dfs(&mut self, v: usize, used: usize, score: usize) {
        if v == self.assignment.len() {
            if self.best_assignment.is_none() || score > self.best_score {
                self.best_score = score;
                self.best_assignment = Some(self.assignment.clone());
            }
            return;
        }
        if self.best_assignment.is_some() && score + self.potential_sum <= self.best_score {
            return;
        }
        let top = (used + 1).min(self.k);
        for c in 0..top {
            let gain = self.assign(v, c);
            let used_next = used.max(c + 1);
            self.dfs(v + 1, used_next, score + gain);
            self.unassign(v, c);
        }
    }
}

fn spread_into_empty_classes(assignment: &mut [usize], k: usize) {
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c] += 1;
    }
    for c in 0..k {
        while sizes[c] == 0 {
            // moving one vertex out of any multi-vertex class never
            // lowers the score
            let donor = match (0..assignment.len()).find(|&v| sizes[assignment[v]] > 1) {
                Some(v) => v,
                None => return,
            };
            sizes[assignment[donor]] -= 1;
            assignment[donor] = c;
            sizes[c] += 1;
        }
    }
}

/// Best-scoring partition into k classes. Exhaustive (exact) up to 12
/// vertices, hill climbing with random restarts beyond that; the flag in
/// the result says which one ran. The budget caps the number of candidate
/// moves the heuristic evaluates and is ignored by the exact path.
pub fn optimize_partition(
    h: &Hypergraph,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<(Partition, usize, bool), StabilityError> {
    if k < 2 {
        return Err(StabilityError::TooFewClasses { k, need: 2 });
    }
    let n = h.n_vertices();
    if n <= EXACT_PARTITION_LIMIT {
        let mut search = ScoreSearch::new(h, k);
        search.dfs(0, 0, 0);
        let mut assignment = search.best_assignment.unwrap_or_default();
        if n >= k {
            spread_into_empty_classes(&mut assignment, k);
        }
        let sigma = Partition::new(assignment, k)?;
        let score = partition_score(h, &sigma)?;
        return Ok((sigma, score, true));
    }
    let (sigma, score) = climb_partitions(h, k, budget, seed);
    Ok((sigma, score, false))
}

fn climb_partitions(h: &Hypergraph, k: usize, budget: usize, seed: u64) -> (Partition, usize) {
    let n = h.n_vertices();
    let m = h.n_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut incident = vec![Vec::new(); n];
    for (idx, e) in h.edges().iter().enumerate() {
        for &v in e {
            incident[v].push(idx);
        }
    }
    let mut best: Option<(Vec<usize>, usize)> = None;
    let mut moves_left = budget.max(1);
    while moves_left > 0 {
        let mut assignment: Vec<usize> =
            (0..n).map(|_| (rng.random::<u64>() % k as u64) as usize).collect();
        if n >= k {
            spread_into_empty_classes(&mut assignment, k);
        }
        let mut counts = vec![vec![0u32; k]; m];
        let mut sizes = vec![0usize; k];
        for (v, &c) in assignment.iter().enumerate() {
            sizes[c] += 1;
            for &e in &incident[v] {
                counts[e][c] += 1;
            }
        }
        let mut score: usize = counts
            .iter()
            .map(|row| row.iter().filter(|&&c| c > 0).count())
            .sum();
        let mut improved = true;
        while improved && moves_left > 0 {
            improved = false;
            'sweep: for v in 0..n {
                let from = assignment[v];
                if sizes[from] == 1 && n >= k {
                    continue;
                }
                for to in 0..k {
                    if to == from {
                        continue;
                    }
                    if moves_left == 0 {
                        break 'sweep;
                    }
                    moves_left -= 1;
                    let mut delta = 0i64;
                    for &e in &incident[v] {
                        if counts[e][from] == 1 {
                            delta -= 1;
                        }
                        if counts[e][to] == 0 {
                            delta += 1;
                        }
                    }
                    if delta > 0 {
                        for &e in &incident[v] {
                            counts[e][from] -= 1;
                            counts[e][to] += 1;
                        }
                        sizes[from] -= 1;
                        sizes[to] += 1;
                        assignment[v] = to;
                        score = (score as i64 + delta) as usize;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if best.as_ref().map_or(true, |(_, s)| score > *s) {
            best = Some((assignment, score));
        }
    }
    let (assignment, score) = best.expect("at least one restart ran");
    (
        Partition {
            assignment,
            k,
        },
        score,
    )
}

/// Counts of partite-but-absent and present-but-not-partite edges against
/// the complete multipartite graph on sigma's classes.
pub fn missing_bad_edges(
    h: &Hypergraph,
    sigma: &Partition,
) -> Result<(usize, usize), StabilityError> {
    let r = h.uniformity();
    if sigma.k() < r {
        return Err(StabilityError::ClassesBelowArity { k: sigma.k(), r });
    }
    if sigma.n() != h.n_vertices() {
        return Err(StabilityError::SizeMismatch {
            partition: sigma.n(),
            graph: h.n_vertices(),
        });
    }
    let bad = count_bad_edges(h, sigma.assignment());
    let target = partite_edge_total(&sigma.class_sizes(), r);
    let partite = h.n_edges() - bad;
    Ok((target - partite, bad))
}

fn count_bad_edges(h: &Hypergraph, assignment: &[usize]) -> usize {
    h.edges()
        .iter()
        .filter(|e| {
            let mut classes: Vec<usize> = e.iter().map(|&v| assignment[v]).collect();
            classes.sort_unstable();
            classes.windows(2).any(|w| w[0] == w[1])
        })
        .count()
}

fn partite_edge_total(sizes: &[usize], r: usize) -> usize {
    // sum over r-subsets of classes of the product of their sizes
    let mut total = 0u128;
    let k = sizes.len();
    fn rec(sizes: &[usize], from: usize, left: usize, product: u128, total: &mut u128) {
        if left == 0 {
            *total += product;
            return;
        }
        for i in from..=sizes.len().saturating_sub(left) {
            rec(sizes, i + 1, left - 1, product * sizes[i] as u128, total);
        }
    }
    if r <= k {
        rec(sizes, 0, r, 1, &mut total);
    }
    total as usize
}

/// Edit distance to the balanced complete multipartite graph, minimized
/// over vertex assignments with the balanced class sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct Closeness {
    pub distance: usize,
    pub sigma: Partition,
    pub epsilon_equiv: f64,
    pub exact: bool,
}

/// Minimum number of edge edits turning `h` into the balanced complete
/// k-partite r-graph on its vertex set. Exact for up to 12 vertices by
/// enumerating all balanced-size partitions; heuristic (flagged) above.
pub fn closeness_to_turan(
    h: &Hypergraph,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<Closeness, StabilityError> {
    let n = h.n_vertices();
    let r = h.uniformity();
    if k < r {
        return Err(StabilityError::ClassesBelowArity { k, r });
    }
    if n < k {
        return Err(StabilityError::TooFewVertices { n, k });
    }
    let target = turan_edge_count(n, k, r) as usize;
    // distance = missing + bad = target - e + 2 * bad, so only the bad
    // count varies with the assignment
    let base = target as i64 - h.n_edges() as i64;
    let total = binomial(n, r) as f64;
    if n <= EXACT_PARTITION_LIMIT {
        let mut sizes = turan_part_sizes(n, k).sizes().to_vec();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let mut search = BadEdgeSearch::new(h, &sizes);
        search.dfs(0, 0);
        let (assignment, bad) = search.best.expect("sized partitions exist when n >= k");
        let distance = (base + 2 * bad as i64) as usize;
        return Ok(Closeness {
            distance,
            sigma: Partition::new(assignment, k)?,
            epsilon_equiv: distance as f64 / total,
            exact: true,
        });
    }
    let (assignment, bad) = swap_search(h, k, budget, seed);
    let distance = (base + 2 * bad as i64) as usize;
    Ok(Closeness {
        distance,
        sigma: Partition::new(assignment, k)?,
        epsilon_equiv: distance as f64 / total,
        exact: false,
    })
}

struct BadEdgeSearch<'a> {
    edges: &'a [Vec<usize>],
    incident: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    fill: Vec<usize>,
    repeat: Vec<bool>,
    assignment: Vec<usize>,
    best: Option<(Vec<usize>, usize)>,
}

impl<'a> BadEdgeSearch<'a> {
    fn new(h: &'a Hypergraph, sizes: &[usize]) -> Self {
        let n = h.n_vertices();
        let mut incident = vec![Vec::new(); n];
        for (idx, e) in h.edges().iter().enumerate() {
            for &v in e {
                incident[v].push(idx);
            }
        }
        BadEdgeSearch {
            edges: h.edges(),
            incident,
            sizes: sizes.to_vec(),
            fill: vec![0; sizes.len()],
            repeat: vec![false; h.n_edges()],
            assignment: vec![usize::MAX; n],
            best: None,
        }
    }

    fn dfs(&mut self, v: usize, bad: usize) {
        if let Some((_, best_bad)) = self.best {
            if bad >= best_bad {
                return;
            }
        }
        if v == self.assignment.len() {
            self.best = Some((self.assignment.clone(), bad));
            return;
        }
        for c in 0..self.sizes.len() {
            if self.fill[c] == self.sizes[c] {
                continue;
            }
            // classes of equal size are interchangeable while empty
            if self.fill[c] == 0
                && c > 0
                && self.sizes[c - 1] == self.sizes[c]
                && self.fill[c - 1] == 0
            {
                continue;
            }
            let mut extra = 0;
            let mut flipped = Vec::new();
            for &e in &self.incident[v] {
                if !self.repeat[e]
                    && self.edges[e]
                        .iter()
                        .any(|&u| u != v && self.assignment[u] == c)
                {
                    self.repeat[e] = true;
                    flipped.push(e);
                    extra += 1;
                }
            }
            self.assignment[v] = c;
            self.fill[c] += 1;
            self.dfs(v + 1, bad + extra);
            self.fill[c] -= 1;
            self.assignment[v] = usize::MAX;
            for e in flipped {
                self.repeat[e] = false;
            }
        }
    }
}

fn swap_search(h: &Hypergraph, k: usize, budget: usize, seed: u64) -> (Vec<usize>, usize) {
    let n = h.n_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = turan_part_sizes(n, k).sizes().to_vec();
    let mut best: Option<(Vec<usize>, usize)> = None;
    let mut moves_left = budget.max(1);
    while moves_left > 0 {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.random::<u64>() % (i as u64 + 1)) as usize;
            order.swap(i, j);
        }
        let mut assignment = vec![0usize; n];
        let mut at = 0;
        for (c, &s) in sizes.iter().enumerate() {
            for _ in 0..s {
                assignment[order[at]] = c;
                at += 1;
            }
        }
        let mut bad = count_bad_edges(h, &assignment);
        let mut improved = true;
        while improved && moves_left > 0 {
            improved = false;
            'pairs: for u in 0..n {
                for v in (u + 1)..n {
                    if assignment[u] == assignment[v] {
                        continue;
                    }
                    if moves_left == 0 {
                        break 'pairs;
                    }
                    moves_left -= 1;
                    assignment.swap(u, v);
                    let candidate = count_bad_edges(h, &assignment);
                    if candidate < bad {
                        bad = candidate;
                        improved = true;
                    } else {
                        assignment.swap(u, v);
                    }
                }
            }
        }
        if best.as_ref().map_or(true, |(_, b)| bad < *b) {
            best = Some((assignment, bad));
        }
    }
    best.expect("at least one restart ran")
}

/// Pair classification against a partition: cross-class pairs split into
/// sparse and dense by codegree, same-class pairs marked dominant when
/// their codegree reaches the same threshold, plus the derived vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub codegree_threshold: usize,
    pub sparse_pairs: Vec<(usize, usize)>,
    pub dense_pairs: Vec<(usize, usize)>,
    pub dominant_pairs: Vec<(usize, usize)>,
    /// per-vertex number of sparse pairs it sits in
    pub sparse_counts: Vec<usize>,
    /// per-vertex number of dominant pairs it sits in
    pub dominant_counts: Vec<usize>,
    /// vertices in many sparse pairs
    pub sparse_heavy: Vec<usize>,
    /// vertices in many dominant pairs
    pub dominant_heavy: Vec<usize>,
    /// per class: vertices forming a dominant pair with a light same-class vertex
    pub dominant_attached: Vec<Vec<usize>>,
    /// per class: everything left after removing heavy and attached vertices
    pub typical: Vec<Vec<usize>>,
}

pub fn classify_pairs(
    h: &Hypergraph,
    sigma: &Partition,
    config: &AnalysisConfig,
) -> Result<PairClassification, StabilityError> {
    if sigma.n() != h.n_vertices() {
        return Err(StabilityError::SizeMismatch {
            partition: sigma.n(),
            graph: h.n_vertices(),
        });
    }
    if config.r != h.uniformity() {
        return Err(StabilityError::UniformityMismatch {
            host: h.uniformity(),
            config: config.r,
        });
    }
    let n = h.n_vertices();
    let codeg = h.codegree_table();
    let d = config.codegree_threshold(n);
    let mut sparse_pairs = Vec::new();
    let mut dense_pairs = Vec::new();
    let mut dominant_pairs = Vec::new();
    let mut sparse_counts = vec![0usize; n];
    let mut dominant_counts = vec![0usize; n];
    for u in 0..n {
        for v in (u + 1)..n {
            if sigma.class_of(u) != sigma.class_of(v) {
                if codeg[u][v] <= d {
                    sparse_pairs.push((u, v));
                    sparse_counts[u] += 1;
                    sparse_counts[v] += 1;
                } else {
                    dense_pairs.push((u, v));
                }
            } else if codeg[u][v] >= d {
                dominant_pairs.push((u, v));
                dominant_counts[u] += 1;
                dominant_counts[v] += 1;
            }
        }
    }
    let sparse_cut = config.sparse_vertex_threshold(n);
    let dominant_cut = config.dominant_vertex_threshold(n);
    let sparse_heavy: Vec<usize> =
        (0..n).filter(|&v| sparse_counts[v] as f64 >= sparse_cut).collect();
    let dominant_heavy: Vec<usize> =
        (0..n).filter(|&v| dominant_counts[v] as f64 >= dominant_cut).collect();
    let mut heavy = vec![false; n];
    for &v in sparse_heavy.iter().chain(dominant_heavy.iter()) {
        heavy[v] = true;
    }
    let mut dominant_mark = vec![false; n];
    for &(u, v) in &dominant_pairs {
        if !heavy[v] {
            dominant_mark[u] = true;
        }
        if !heavy[u] {
            dominant_mark[v] = true;
        }
    }
    let classes = sigma.classes();
    let mut dominant_attached = Vec::with_capacity(sigma.k());
    let mut typical = Vec::with_capacity(sigma.k());
    for class in &classes {
        let attached: Vec<usize> = class.iter().copied().filter(|&v| dominant_mark[v]).collect();
        let rest: Vec<usize> = class
            .iter()
            .copied()
            .filter(|&v| !dominant_mark[v] && !heavy[v])
            .collect();
        dominant_attached.push(attached);
        typical.push(rest);
    }
    Ok(PairClassification {
        codegree_threshold: d,
        sparse_pairs,
        dense_pairs,
        dominant_pairs,
        sparse_counts,
        dominant_counts,
        sparse_heavy,
        dominant_heavy,
        dominant_attached,
        typical,
    })
}

/// Exact maximum matching size. Memoized branching over the vertex set;
/// fine for the desk-scale graphs this crate handles (at most 64 vertices).
pub fn matching_number(g: &SimpleGraph) -> usize {
    let n = g.n_vertices();
    assert!(n <= 64, "matching search uses 64-bit vertex masks");
    let mut adj = vec![0u64; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    matching_rec(&adj, full, &mut memo)
}

fn matching_rec(adj: &[u64], mask: u64, memo: &mut HashMap<u64, usize>) -> usize {
    let mut v = None;
    for i in 0..adj.len() {
        if mask >> i & 1 == 1 && adj[i] & mask != 0 {
            v = Some(i);
            break;
        }
    }
    let v = match v {
        Some(v) => v,
        None => return 0,
    };
    if let Some(&hit) = memo.get(&mask) {
        return hit;
    }
    let without = matching_rec(adj, mask & !(1 << v), memo);
    let mut best = without;
    let mut nbrs = adj[v] & mask;
    while nbrs != 0 {
        let u = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        let got = 1 + matching_rec(adj, mask & !(1 << v) & !(1 << u), memo);
        if got > best {
            best = got;
        }
    }
    memo.insert(mask, best);
    best
}

pub fn max_degree(g: &SimpleGraph) -> usize {
    g.max_degree()
}

/// Closed-form maximum edge count of a graph with matching number at most
/// beta and maximum degree at most delta.
pub fn chvatal_hanson(beta: usize, delta: usize) -> Result<usize, StabilityError> {
    if beta == 0 || delta == 0 {
        return Err(StabilityError::NonpositiveBound);
    }
    let half_up = delta.div_ceil(2);
    Ok(delta * beta + (delta / 2) * (beta / half_up))
}

const F_ORACLE_LIMIT: usize = 9;

/// Exhaustive oracle for the bounded-matching bounded-degree edge maximum:
/// the best edge count over all graphs on at most n_max vertices with
/// matching number <= beta and max degree <= delta.
pub fn brute_force_f(beta: usize, delta: usize, n_max: usize) -> Result<usize, StabilityError> {
    if beta == 0 || delta == 0 {
        return Err(StabilityError::NonpositiveBound);
    }
    if n_max > F_ORACLE_LIMIT {
        return Err(StabilityError::OracleTooLarge {
            n: n_max,
            limit: F_ORACLE_LIMIT,
        });
    }
    // the endpoints of a maximum matching cover every edge, so some 2*beta
    // vertices do; fix that cover as the first vertices
    let cover = (2 * beta).min(n_max);
    let mut universe: Vec<(usize, usize)> = Vec::new();
    for u in 0..cover {
        for v in (u + 1)..cover {
            universe.push((u, v));
        }
    }
    // outside-cover vertices are interchangeable; group their edges in
    // blocks so non-increasing neighborhoods can be enforced blockwise
    let mut block_bounds = Vec::new();
    for w in cover..n_max {
        block_bounds.push(universe.len());
        for u in 0..cover {
            universe.push((u, w));
        }
    }
    block_bounds.push(universe.len());
    let mut state = FSearch {
        beta,
        delta,
        universe,
        block_bounds,
        cover,
        degrees: vec![0usize; n_max],
        chosen: Vec::new(),
        masks: vec![0u64; n_max],
        best: 0,
    };
    state.dfs(0, 0);
    Ok(state.best)
}

struct FSearch {
    beta: usize,
    delta: usize,
    universe: Vec<(usize, usize)>,
    block_bounds: Vec<usize>,
    cover: usize,
    degrees: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    masks: Vec<u64>,
    best: usize,
}

impl FSearch {
    fn dfs(&mut self, i: usize, current: usize) {
        if let Some(pos) = self.block_bounds.iter().position(|&b| b == i) {
            // entering the block of outside vertex cover+pos; the previous
            // outside vertex's neighborhood is final
            if pos >= 2 {
                let prev = self.cover + pos - 1;
                if self.masks[prev] > self.masks[prev - 1] {
                    return;
                }
            }
        }
        if current > self.best {
            self.best = current;
        }
        if i == self.universe.len() {
            return;
        }
        let slack: usize = self.degrees.iter().map(|&d| self.delta - d).sum();
        let headroom = (self.universe.len() - i).min(slack / 2);
        if current + headroom <= self.best {
            return;
        }
        let (u, v) = self.universe[i];
        if self.degrees[u] < self.delta && self.degrees[v] < self.delta {
            self.chosen.push((u, v));
            if self.matching_within_bound() {
                self.degrees[u] += 1;
                self.degrees[v] += 1;
                self.masks[u] |= 1 << v;
                self.masks[v] |= 1 << u;
                self.dfs(i + 1, current + 1);
                self.masks[u] &= !(1 << v);
                self.masks[v] &= !(1 << u);
                self.degrees[u] -= 1;
                self.degrees[v] -= 1;
            }
            self.chosen.pop();
        }
        self.dfs(i + 1, current);
    }

    fn matching_within_bound(&self) -> bool {
        let mut taken = 0u64;
        !exceeds_matching(&self.chosen, 0, 0, self.beta, &mut taken)
    }
}

fn exceeds_matching(
    edges: &[(usize, usize)],
    from: usize,
    size: usize,
    beta: usize,
    taken: &mut u64,
) -> bool {
    if size > beta {
        return true;
    }
    for i in from..edges.len() {
        let (u, v) = edges[i];
        let mask = (1u64 << u) | (1 << v);
        if *taken & mask != 0 {
            continue;
        }
        *taken |= mask;
        if exceeds_matching(edges, i + 1, size + 1, beta, taken) {
            *taken &= !mask;
            return true;
        }
        *taken &= !mask;
    }
    false
}

/// The inclusion-style lower bound on a family intersection next to the
/// true value: |A_1 n ... n A_p| >= sum |A_i| - (p-1)|union|.
pub fn intersection_lower_bound(
    sets: &[BTreeSet<usize>],
) -> Result<(i64, usize), StabilityError> {
    if sets.is_empty() {
        return Err(StabilityError::EmptyFamily);
    }
    let p = sets.len() as i64;
    let sum: i64 = sets.iter().map(|s| s.len() as i64).sum();
    let mut union = sets[0].clone();
    let mut inter = sets[0].clone();
    for s in &sets[1..] {
        union.extend(s.iter().copied());
        inter = inter.intersection(s).copied().collect();
    }
    let bound = sum - (p - 1) * union.len() as i64;
    Ok((bound, inter.len()))
}
