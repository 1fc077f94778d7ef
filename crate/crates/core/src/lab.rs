//! Desk-scale extremal searches: exhaustive maximum edge counts and
//! spectral maxima over pattern-free hypergraphs, apex-plus-multipartite
//! composition sweeps, and local edit probes around a candidate extremal
//! graph. Everything here runs on labeled vertex sets under hard caps on
//! the edge-space size.

use itertools::Itertools;
use thiserror::Error;

use crate::combin::{binomial, factorial, positive_compositions};
use crate::hypergraph::{turan_part_sizes, Hypergraph, HypergraphError, PartSizes};
use crate::patterns::{is_free, PatternError, PatternSpec};
use crate::spectral::{p_spectral_radius, SolverConfig, SpectralError};

const MAX_EDGES_SPACE_CAP: u64 = 24;
const MAX_LAMBDA_SPACE_CAP: u64 = 20;
const COMPOSITION_CAP: u64 = 10_000;
const PROBE_RADIUS_CAP: usize = 2;
const MIN_SWEEP_EXPONENT: f64 = 9.0 / 8.0;
/// Spectral differences below this are treated as ties.
pub const LAMBDA_TIE_TOLERANCE: f64 = 1e-7;
const WITNESS_CAP: usize = 10;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("edge space has {size} slots, the cap for this search is {limit}")]
    SpaceTooLarge { size: u64, limit: u64 },
    #[error("sweep covers {count} compositions, cap is {limit}")]
    TooManyCompositions { count: u64, limit: u64 },
    #[error("sweep needs p > 9/8, got {0}")]
    ExponentTooSmall(f64),
    #[error("probe radius capped at {limit}, got {radius}")]
    RadiusTooLarge { radius: usize, limit: usize },
    #[error("no composition of {n}-{t}+1 vertices into {k} positive parts")]
    EmptySweep { n: usize, k: usize, t: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MaxEdges,
    MaxLambda,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::MaxEdges => write!(out, "max-edges"),
            Objective::MaxLambda => write!(out, "max-lambda"),
        }
    }
}

/// Outcome of an exhaustive search. For the edge objective `best_value` is
/// an exact count; for the spectral objective it is the largest certified
/// lower bound and `exact` is false.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub objective: Objective,
    pub best_value: f64,
    pub witnesses: Vec<Hypergraph>,
    pub explored: u64,
    pub exact: bool,
}

fn edge_universe(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(r).collect()
}

struct MaxEdgesSearch<'a> {
    n: usize,
    r: usize,
    spec: &'a PatternSpec,
    universe: Vec<Vec<usize>>,
    current: Vec<Vec<usize>>,
    best: usize,
    witnesses: Vec<Hypergraph>,
    explored: u64,
    error: Option<PatternError>,
}

impl<'a> MaxEdgesSearch<'a> {
    fn dfs(&mut self, i: usize) {
        if self.error.is_some() {
            return;
        }
        self.explored += 1;
        if i == self.universe.len() {
            if self.current.len() > self.best {
                self.best = self.current.len();
                self.witnesses.clear();
            }
            if self.current.len() == self.best && self.witnesses.len() < WITNESS_CAP {
                let h = Hypergraph::new(self.n, self.r, self.current.clone())
                    .expect("current edge set is valid");
                self.witnesses.push(h);
            }
            return;
        }
        let ceiling = self.current.len() + (self.universe.len() - i);
        if ceiling < self.best
            || (ceiling == self.best && self.witnesses.len() >= WITNESS_CAP)
        {
            return;
        }
        // include the edge when that stays free; freeness is monotone, so
        // only additions need a check
        self.current.push(self.universe[i].clone());
        match self.candidate_free() {
            Ok(true) => self.dfs(i + 1),
            Ok(false) => {}
            Err(e) => self.error = Some(e),
        }
        self.current.pop();
        self.dfs(i + 1);
    }

    fn candidate_free(&self) -> Result<bool, PatternError> {
        let h = Hypergraph::new(self.n, self.r, self.current.clone())
            .expect("current edge set is valid");
        is_free(&h, self.spec)
    }
}

/// Exact maximum edge count over all pattern-free r-graphs on n labeled
/// vertices, found by depth-first edge inclusion.
pub fn exhaustive_max_edges(
    n: usize,
    r: usize,
    spec: &PatternSpec,
) -> Result<SearchResult, LabError> {
    let universe = edge_universe(n, r);
    let size = universe.len() as u64;
    if size > MAX_EDGES_SPACE_CAP {
        return Err(LabError::SpaceTooLarge {
            size,
            limit: MAX_EDGES_SPACE_CAP,
        });
    }
    let mut search = MaxEdgesSearch {
        n,
        r,
        spec,
        universe,
        current: Vec::new(),
        best: 0,
        witnesses: Vec::new(),
        explored: 0,
        error: None,
    };
    search.dfs(0);
    if let Some(e) = search.error {
        return Err(e.into());
    }
    // independent second pass over the reported witnesses
    for w in &search.witnesses {
        debug_assert_eq!(w.n_edges(), search.best);
        if !is_free(w, spec)? {
            unreachable!("witness failed the freeness re-check");
        }
    }
    Ok(SearchResult {
        objective: Objective::MaxEdges,
        best_value: search.best as f64,
        witnesses: search.witnesses,
        explored: search.explored,
        exact: true,
    })
}

/// Canonical labeled form under degree-preserving relabelings, used to
/// avoid scoring the same unlabeled graph repeatedly. Only attempted on
/// small vertex counts; `None` means skip deduplication.
fn degree_canonical_form(h: &Hypergraph) -> Option<Vec<Vec<usize>>> {
    let n = h.n_vertices();
    if n > 8 {
        return None;
    }
    let degrees = h.degrees();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        groups.entry(degrees[v]).or_default().push(v);
    }
    // vertices of equal degree share a block of target slots, assigned in
    // ascending degree order so isomorphic graphs agree on the blocks
    let group_list: Vec<Vec<usize>> = groups.into_values().collect();
    let mut slot_blocks: Vec<Vec<usize>> = Vec::with_capacity(group_list.len());
    let mut next_slot = 0;
    for g in &group_list {
        slot_blocks.push((next_slot..next_slot + g.len()).collect());
        next_slot += g.len();
    }
    let mut best: Option<Vec<Vec<usize>>> = None;
    let per_group: Vec<Vec<Vec<usize>>> = group_list
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect())
        .collect();
    for combo in per_group.iter().multi_cartesian_product() {
        let mut perm = vec![0usize; n];
        for (slots, image_group) in slot_blocks.iter().zip(combo.iter()) {
            for (&slot, &image) in slots.iter().zip(image_group.iter()) {
                perm[image] = slot;
            }
        }
        let relabeled = h.relabel(&perm).expect("permutation is valid");
        let edges = relabeled.edges().to_vec();
        if best.as_ref().map_or(true, |b| &edges < b) {
            best = Some(edges);
        }
    }
    best
}

fn lambda_ceiling(r: usize, m: usize, p: f64) -> f64 {
    let rf_m = factorial(r) as f64 * m as f64;
    if p.is_infinite() {
        rf_m
    } else {
        rf_m.powf(1.0 - 1.0 / p)
    }
}

struct MaxLambdaSearch<'a> {
    n: usize,
    r: usize,
    spec: &'a PatternSpec,
    config: SolverConfig,
    universe: Vec<Vec<usize>>,
    current: Vec<Vec<usize>>,
    scored: std::collections::BTreeSet<Vec<Vec<usize>>>,
    best: f64,
    witnesses: Vec<(f64, Hypergraph)>,
    explored: u64,
    error: Option<LabError>,
}

impl<'a> MaxLambdaSearch<'a> {
    fn dfs(&mut self, i: usize) {
        if self.error.is_some() {
            return;
        }
        self.explored += 1;
        if i == self.universe.len() {
            self.score_if_maximal();
            return;
        }
        let ceiling = lambda_ceiling(
            self.r,
            self.current.len() + (self.universe.len() - i),
            self.config.p,
        );
        if ceiling <= self.best - LAMBDA_TIE_TOLERANCE {
            return;
        }
        self.current.push(self.universe[i].clone());
        match self.candidate_free() {
            Ok(true) => self.dfs(i + 1),
            Ok(false) => {}
            Err(e) => self.error = Some(e.into()),
        }
        self.current.pop();
        self.dfs(i + 1);
    }

    fn candidate_free(&self) -> Result<bool, PatternError> {
        let h = Hypergraph::new(self.n, self.r, self.current.clone())
            .expect("current edge set is valid");
        is_free(&h, self.spec)
    }

    // only maximal free graphs are worth solving: adding an edge never
    // lowers the spectral radius
    fn score_if_maximal(&mut self) {
        let h = match Hypergraph::new(self.n, self.r, self.current.clone()) {
            Ok(h) => h,
            Err(e) => {
                self.error = Some(e.into());
                return;
            }
        };
        for extra in &self.universe {
            if h.is_edge(extra) {
                continue;
            }
            let mut edges = self.current.clone();
            edges.push(extra.clone());
            let candidate = Hypergraph::new(self.n, self.r, edges).expect("valid edges");
            match is_free(&candidate, self.spec) {
                Ok(true) => return,
                Ok(false) => {}
                Err(e) => {
                    self.error = Some(e.into());
                    return;
                }
            }
        }
        if let Some(canonical) = degree_canonical_form(&h) {
            if !self.scored.insert(canonical) {
                return;
            }
        }
        let estimate = match p_spectral_radius(&h, &self.config) {
            Ok(est) => est,
            Err(e) => {
                self.error = Some(e.into());
                return;
            }
        };
        let lambda = estimate.lambda;
        if lambda > self.best + LAMBDA_TIE_TOLERANCE {
            self.best = lambda;
            self.witnesses.retain(|(l, _)| *l >= lambda - LAMBDA_TIE_TOLERANCE);
        } else if self.best > lambda + LAMBDA_TIE_TOLERANCE {
            return;
        } else if lambda > self.best {
            self.best = lambda;
        }
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push((lambda, h));
        }
    }
}

/// Largest certified p-spectral radius over pattern-free r-graphs on n
/// labeled vertices. Enumerates maximal free graphs (deduplicated under
/// degree-preserving relabelings where feasible) and scores each with the
/// solver; values within 1e-7 of the maximum count as ties.
pub fn exhaustive_max_lambda(
    n: usize,
    r: usize,
    p: f64,
    spec: &PatternSpec,
    solver: &SolverConfig,
) -> Result<SearchResult, LabError> {
    let universe = edge_universe(n, r);
    let size = universe.len() as u64;
    if size > MAX_LAMBDA_SPACE_CAP {
        return Err(LabError::SpaceTooLarge {
            size,
            limit: MAX_LAMBDA_SPACE_CAP,
        });
    }
    let mut config = solver.clone();
    config.p = p;
    let mut search = MaxLambdaSearch {
        n,
        r,
        spec,
        config,
        universe,
        current: Vec::new(),
        scored: Default::default(),
        best: f64::NEG_INFINITY,
        witnesses: Vec::new(),
        explored: 0,
        error: None,
    };
    search.dfs(0);
    if let Some(e) = search.error {
        return Err(e);
    }
    let best = if search.witnesses.is_empty() {
        0.0
    } else {
        search.best
    };
    let mut witnesses = Vec::new();
    for (lambda, w) in search.witnesses {
        if lambda >= best - LAMBDA_TIE_TOLERANCE {
            if !is_free(&w, spec)? {
                unreachable!("witness failed the freeness re-check");
            }
            witnesses.push(w);
        }
    }
    Ok(SearchResult {
        objective: Objective::MaxLambda,
        best_value: best,
        witnesses,
        explored: search.explored,
        exact: false,
    })
}

/// One row of a composition sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub parts: Vec<usize>,
    pub lambda: f64,
    pub residual: f64,
    pub converged: bool,
    pub balanced: bool,
}

/// Spectral radii of an apex clique joined to every complete k-partite
/// graph with the given part compositions.
#[derive(Debug, Clone)]
pub struct CompositionSweep {
    pub rows: Vec<SweepRow>,
    pub balanced_parts: Vec<usize>,
    pub balanced_lambda: f64,
    pub max_unbalanced_lambda: Option<f64>,
    /// balanced lambda minus the best unbalanced one, when both exist
    pub margin: Option<f64>,
    pub balanced_is_max: bool,
}

/// Sweeps all compositions of n-t+1 into k positive parts, computing the
/// p-spectral radius of the (t-1)-clique joined to the k-partite graph on
/// those parts.
pub fn composition_sweep(
    n: usize,
    k: usize,
    r: usize,
    t: usize,
    p: f64,
    solver: &SolverConfig,
) -> Result<CompositionSweep, LabError> {
    if !(p > MIN_SWEEP_EXPONENT) {
        return Err(LabError::ExponentTooSmall(p));
    }
    if t == 0 || k == 0 || n + 1 < t + k {
        return Err(LabError::EmptySweep { n, k, t });
    }
    let rest = n + 1 - t;
    let count = binomial(rest - 1, k - 1) as u64;
    if count > COMPOSITION_CAP {
        return Err(LabError::TooManyCompositions {
            count,
            limit: COMPOSITION_CAP,
        });
    }
    let mut balanced_sizes = turan_part_sizes(rest, k).sizes().to_vec();
    balanced_sizes.sort_unstable();
    let apex = Hypergraph::clique_or_empty(t - 1, r);
    let mut config = solver.clone();
    config.p = p;
    let mut rows = Vec::new();
    for parts in positive_compositions(rest, k) {
        let sized = PartSizes::new(parts.clone())?;
        let partite = Hypergraph::complete_multipartite(&sized, r)?;
        let joined = Hypergraph::join(&apex, &partite)?;
        let estimate = p_spectral_radius(&joined, &config)?;
        let mut sorted = parts.clone();
        sorted.sort_unstable();
        rows.push(SweepRow {
            parts,
            lambda: estimate.lambda,
            residual: estimate.residual,
            converged: estimate.converged,
            balanced: sorted == balanced_sizes,
        });
    }
    let balanced_lambda = rows
        .iter()
        .filter(|row| row.balanced)
        .map(|row| row.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_unbalanced_lambda = rows
        .iter()
        .filter(|row| !row.balanced)
        .map(|row| row.lambda)
        .fold(None, |acc: Option<f64>, l| {
            Some(acc.map_or(l, |a| a.max(l)))
        });
    let margin = max_unbalanced_lambda.map(|u| balanced_lambda - u);
    let balanced_is_max = margin.map_or(true, |m| m > -LAMBDA_TIE_TOLERANCE);
    Ok(CompositionSweep {
        rows,
        balanced_parts: balanced_sizes,
        balanced_lambda,
        max_unbalanced_lambda,
        margin,
        balanced_is_max,
    })
}

/// An edit set that beat the base graph.
#[derive(Debug, Clone)]
pub struct ProbeImprover {
    pub added: Vec<Vec<usize>>,
    pub removed: Vec<Vec<usize>>,
    pub lambda: f64,
}

/// Local-maximality evidence around a base graph: every free graph within
/// the edit radius was either solved or discarded by monotonicity, and the
/// improvers list everything that beat the base value by more than 1e-7.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub base_lambda: f64,
    pub radius: usize,
    /// variants whose spectral radius was actually computed
    pub evaluated: u64,
    /// pure-deletion variants, skipped since removing edges never raises
    /// the spectral radius
    pub skipped_deletions: u64,
    /// variants discarded because the edit left the pattern present
    pub not_free: u64,
    pub improvers: Vec<ProbeImprover>,
}

/// Enumerates all edge-edit sets of size 1..=radius around `h0`, solving
/// every free variant that adds at least one edge.
pub fn perturbation_probe(
    h0: &Hypergraph,
    spec: &PatternSpec,
    p: f64,
    solver: &SolverConfig,
    radius: usize,
) -> Result<ProbeReport, LabError> {
    if radius > PROBE_RADIUS_CAP {
        return Err(LabError::RadiusTooLarge {
            radius,
            limit: PROBE_RADIUS_CAP,
        });
    }
    let mut config = solver.clone();
    config.p = p;
    let base = p_spectral_radius(h0, &config)?;
    let universe = edge_universe(h0.n_vertices(), h0.uniformity());
    let mut report = ProbeReport {
        base_lambda: base.lambda,
        radius,
        evaluated: 0,
        skipped_deletions: 0,
        not_free: 0,
        improvers: Vec::new(),
    };
    for size in 1..=radius {
        for toggle in universe.iter().combinations(size) {
            let mut added = Vec::new();
            let mut removed = Vec::new();
            for &e in &toggle {
                if h0.is_edge(e) {
                    removed.push(e.clone());
                } else {
                    added.push(e.clone());
                }
            }
            if added.is_empty() {
                report.skipped_deletions += 1;
                continue;
            }
            let mut edges: Vec<Vec<usize>> = h0
                .edges()
                .iter()
                .filter(|e| !removed.iter().any(|r| &r == e))
                .cloned()
                .collect();
            edges.extend(added.iter().cloned());
            let variant = Hypergraph::new(h0.n_vertices(), h0.uniformity(), edges)?;
            if !is_free(&variant, spec)? {
                report.not_free += 1;
                continue;
            }
            let estimate = p_spectral_radius(&variant, &config)?;
            report.evaluated += 1;
            if estimate.lambda > base.lambda + LAMBDA_TIE_TOLERANCE {
                report.improvers.push(ProbeImprover {
                    added,
                    removed,
                    lambda: estimate.lambda,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::poly_form;

    #[test]
    fn unrestricted_max_edges_is_the_full_space() {
        let res = exhaustive_max_edges(5, 3, &PatternSpec::Unrestricted).unwrap();
        assert_eq!(res.best_value, 10.0);
        assert!(res.exact);
        assert_eq!(res.witnesses.len(), 1);
        assert_eq!(res.witnesses[0].n_edges(), 10);
    }

    #[test]
    fn single_edge_space_with_unreachable_core() {
        let res = exhaustive_max_edges(3, 3, &PatternSpec::Family { k: 4 }).unwrap();
        assert_eq!(res.best_value, 1.0);
    }

    #[test]
    fn covered_core_on_four_vertices_allows_two_edges() {
        // any three triples on four vertices cover all six pairs, so the
        // exact maximum under family:4 freeness is two edges
        let res = exhaustive_max_edges(4, 3, &PatternSpec::Family { k: 4 }).unwrap();
        assert_eq!(res.best_value, 2.0);
        for w in &res.witnesses {
            assert!(is_free(w, &PatternSpec::Family { k: 4 }).unwrap());
            assert_eq!(w.n_edges(), 2);
        }
    }

    #[test]
    fn weaker_pattern_never_shrinks_the_maximum() {
        let small = exhaustive_max_edges(5, 3, &PatternSpec::Family { k: 4 }).unwrap();
        let large = exhaustive_max_edges(5, 3, &PatternSpec::Family { k: 5 }).unwrap();
        assert!(large.best_value >= small.best_value);
    }

    #[test]
    fn space_caps_are_enforced() {
        assert!(matches!(
            exhaustive_max_edges(7, 3, &PatternSpec::Unrestricted),
            Err(LabError::SpaceTooLarge { size: 35, limit: 24 })
        ));
        let cfg = SolverConfig::new(3.0);
        assert!(matches!(
            exhaustive_max_lambda(7, 3, 3.0, &PatternSpec::Unrestricted, &cfg),
            Err(LabError::SpaceTooLarge { size: 35, limit: 20 })
        ));
    }

    #[test]
    fn unrestricted_max_lambda_is_the_complete_graph() {
        let cfg = SolverConfig::new(2.0).with_restarts(4);
        let res = exhaustive_max_lambda(4, 3, 2.0, &PatternSpec::Unrestricted, &cfg).unwrap();
        assert!(!res.exact);
        // r! * C(n,r) * n^{-r/p} for the complete graph
        let expected = 24.0 * 4f64.powf(-1.5);
        assert!((res.best_value - expected).abs() < 1e-6);
        assert_eq!(res.witnesses.len(), 1);
        assert_eq!(res.witnesses[0].n_edges(), 4);
    }

    #[test]
    fn single_vertex_clique_closed_form() {
        let cfg = SolverConfig::new(2.5).with_restarts(2);
        let res = exhaustive_max_lambda(3, 3, 2.5, &PatternSpec::Unrestricted, &cfg).unwrap();
        let expected = 6.0 * 3f64.powf(-3.0 / 2.5);
        assert!((res.best_value - expected).abs() < 1e-8);
    }

    #[test]
    fn sweep_balanced_parts_win_small_case() {
        let cfg = SolverConfig::new(3.0).with_restarts(4);
        let sweep = composition_sweep(7, 3, 3, 1, 3.0, &cfg).unwrap();
        assert_eq!(sweep.rows.len(), 15);
        assert_eq!(sweep.balanced_parts, vec![2, 2, 3]);
        assert!(sweep.balanced_is_max);
        let margin = sweep.margin.unwrap();
        assert!(margin > 0.0, "margin {margin}");
        // permuting equal parts leaves lambda unchanged
        for a in &sweep.rows {
            for b in &sweep.rows {
                let mut pa = a.parts.clone();
                let mut pb = b.parts.clone();
                pa.sort_unstable();
                pb.sort_unstable();
                if pa == pb {
                    assert!((a.lambda - b.lambda).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn sweep_singleton_when_everything_is_forced() {
        let cfg = SolverConfig::new(3.0).with_restarts(2);
        let sweep = composition_sweep(4, 3, 3, 2, 3.0, &cfg).unwrap();
        assert_eq!(sweep.rows.len(), 1);
        assert_eq!(sweep.rows[0].parts, vec![1, 1, 1]);
        assert!(sweep.balanced_is_max);
        assert!(sweep.margin.is_none());
    }

    #[test]
    fn sweep_rejects_small_exponents() {
        let cfg = SolverConfig::new(1.0);
        assert!(matches!(
            composition_sweep(7, 3, 3, 1, 1.0, &cfg),
            Err(LabError::ExponentTooSmall(_))
        ));
    }

    #[test]
    fn probe_finds_the_missing_edge() {
        let t = Hypergraph::turan(6, 3, 3).unwrap();
        let smaller = Hypergraph::new(6, 3, t.edges()[1..].to_vec()).unwrap();
        let cfg = SolverConfig::new(3.0).with_restarts(4);
        let report =
            perturbation_probe(&smaller, &PatternSpec::Family { k: 4 }, 3.0, &cfg, 1).unwrap();
        assert!(!report.improvers.is_empty());
        let re_add = report
            .improvers
            .iter()
            .find(|imp| imp.added == vec![t.edges()[0].clone()] && imp.removed.is_empty());
        assert!(re_add.is_some(), "re-adding the deleted edge improves");
    }

    #[test]
    fn probe_on_complete_graph_sees_only_deletions() {
        let h = Hypergraph::complete(5, 3).unwrap();
        let cfg = SolverConfig::new(3.0).with_restarts(2);
        let report = perturbation_probe(&h, &PatternSpec::Unrestricted, 3.0, &cfg, 1).unwrap();
        assert!(report.improvers.is_empty());
        assert_eq!(report.skipped_deletions, 10);
        assert_eq!(report.evaluated, 0);
    }

    #[test]
    fn probe_sees_turan_as_locally_best_under_family_freeness() {
        // every addition to the balanced 3-partite graph covers a 4-core
        let t = Hypergraph::turan(10, 3, 3).unwrap();
        let cfg = SolverConfig::new(3.0).with_restarts(2);
        let report =
            perturbation_probe(&t, &PatternSpec::Family { k: 4 }, 3.0, &cfg, 1).unwrap();
        assert!(report.improvers.is_empty());
        assert_eq!(report.evaluated, 0);
        assert_eq!(
            report.not_free as usize,
            crate::combin::binomial(10, 3) as usize - t.n_edges()
        );
    }

    #[test]
    fn probe_radius_cap() {
        let h = Hypergraph::complete(4, 3).unwrap();
        let cfg = SolverConfig::new(3.0);
        assert!(matches!(
            perturbation_probe(&h, &PatternSpec::Unrestricted, 3.0, &cfg, 3),
            Err(LabError::RadiusTooLarge { radius: 3, limit: 2 })
        ));
    }

    #[test]
    fn max_lambda_respects_the_pattern() {
        let cfg = SolverConfig::new(3.0).with_restarts(4);
        let spec = PatternSpec::Family { k: 4 };
        let res = exhaustive_max_lambda(5, 3, 3.0, &spec, &cfg).unwrap();
        for w in &res.witnesses {
            assert!(is_free(w, &spec).unwrap());
        }
        let turan = Hypergraph::turan(5, 3, 3).unwrap();
        let turan_lambda = p_spectral_radius(&turan, &SolverConfig::new(3.0)).unwrap().lambda;
        assert!(res.best_value >= turan_lambda - 1e-9);
    }

    #[test]
    fn dedupe_key_is_stable_under_relabeling() {
        let t = Hypergraph::turan(6, 3, 3).unwrap();
        let perm = vec![3, 4, 5, 0, 1, 2];
        let relabeled = t.relabel(&perm).unwrap();
        assert_eq!(
            degree_canonical_form(&t).unwrap(),
            degree_canonical_form(&relabeled).unwrap()
        );
    }

    #[test]
    fn lambda_ceiling_uses_poly_growth() {
        let h = Hypergraph::complete(5, 3).unwrap();
        let cfg = SolverConfig::new(3.0);
        let lambda = p_spectral_radius(&h, &cfg).unwrap().lambda;
        assert!(lambda <= lambda_ceiling(3, h.n_edges(), 3.0) + 1e-9);
        let x = vec![1.0 / (5f64).powf(1.0 / 3.0); 5];
        assert!(poly_form(&h, &x) <= lambda + 1e-8);
    }
}
