//! Command handlers. Each one reads its inputs, records them in the run
//! manifest, and returns a flat report plus the process exit code.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use hyperspec_core::lab::{
    composition_sweep, exhaustive_max_edges, exhaustive_max_lambda, perturbation_probe,
};
use hyperspec_core::patterns::{
    contains_expansion, contains_family_member, contains_t_disjoint,
};
use hyperspec_core::spectral::{lagrangian, p_spectral_radius};
use hyperspec_core::stability::{
    classify_pairs, closeness_to_turan, missing_bad_edges, optimize_partition,
};
use hyperspec_core::{
    AnalysisConfig, Hypergraph, HypergraphError, LabError, PartSizes, PatternError,
    PatternSpec, Report, SimpleGraph, SolverConfig, SpectralError, SpectralEstimate,
    StabilityError,
};

use crate::manifest::RunManifest;
use crate::{
    CheckArgs, ConstructKind, LabCommand, SolverFlags, SpectralArgs, StabilityArgs,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_CAP: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    Graph(HypergraphError),
    Spectral(SpectralError),
    Pattern(PatternError),
    Stability(StabilityError),
    Lab(LabError),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Graph(e) => e.fmt(f),
            CliError::Spectral(e) => e.fmt(f),
            CliError::Pattern(e) => e.fmt(f),
            CliError::Stability(e) => e.fmt(f),
            CliError::Lab(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Pattern(PatternError::HostTooLarge { .. }) => EXIT_CAP,
            CliError::Stability(StabilityError::OracleTooLarge { .. }) => EXIT_CAP,
            CliError::Spectral(SpectralError::OracleTooLarge { .. }) => EXIT_CAP,
            CliError::Lab(e) => match e {
                LabError::SpaceTooLarge { .. }
                | LabError::TooManyCompositions { .. }
                | LabError::RadiusTooLarge { .. } => EXIT_CAP,
                LabError::Pattern(PatternError::HostTooLarge { .. }) => EXIT_CAP,
                _ => EXIT_INPUT,
            },
            _ => EXIT_INPUT,
        }
    }
}

impl From<HypergraphError> for CliError {
    fn from(e: HypergraphError) -> Self {
        CliError::Graph(e)
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Spectral(e)
    }
}

impl From<PatternError> for CliError {
    fn from(e: PatternError) -> Self {
        CliError::Pattern(e)
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        CliError::Stability(e)
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        CliError::Lab(e)
    }
}

fn read_graph(path: &Path, manifest: &mut RunManifest) -> Result<Hypergraph, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    manifest.record_input(&path.display().to_string(), text.as_bytes());
    Ok(Hypergraph::from_hgr(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn graph_summary(report: &mut Report, h: &Hypergraph) {
    report.push("graph.vertices", h.n_vertices());
    report.push("graph.uniformity", h.uniformity());
    report.push("graph.edges", h.n_edges());
}

pub fn cmd_construct(
    kind: &ConstructKind,
    out: &Path,
    mut manifest: RunManifest,
) -> Result<(Report, u8), CliError> {
    let mut report = Report::new();
    let (hgr_text, label) = match kind {
        ConstructKind::Complete { n, r } => {
            let h = Hypergraph::complete(*n, *r)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "complete")
        }
        ConstructKind::Multipartite { parts, r } => {
            let sizes = PartSizes::new(parts.clone())?;
            let h = Hypergraph::complete_multipartite(&sizes, *r)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "multipartite")
        }
        ConstructKind::Turan { n, k, r } => {
            let h = Hypergraph::turan(*n, *k, *r)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "turan")
        }
        ConstructKind::Join { a, b } => {
            let ha = read_graph(a, &mut manifest)?;
            let hb = read_graph(b, &mut manifest)?;
            let h = Hypergraph::join(&ha, &hb)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "join")
        }
        ConstructKind::Union { a, b } => {
            let ha = read_graph(a, &mut manifest)?;
            let hb = read_graph(b, &mut manifest)?;
            let h = Hypergraph::disjoint_union(&ha, &hb)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "union")
        }
        ConstructKind::Tcopies { a, t } => {
            let ha = read_graph(a, &mut manifest)?;
            let h = Hypergraph::t_copies(&ha, *t)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "tcopies")
        }
        ConstructKind::Expansion { clique, r } => {
            let f = SimpleGraph::complete(*clique);
            let h = Hypergraph::expansion(&f, *r)?;
            graph_summary(&mut report, &h);
            (h.to_hgr(), "expansion")
        }
        ConstructKind::Shadow { a } => {
            let ha = read_graph(a, &mut manifest)?;
            let s = ha.shadow();
            report.push("graph.vertices", s.n_vertices());
            report.push("graph.uniformity", 2);
            report.push("graph.edges", s.n_edges());
            (s.to_hgr(), "shadow")
        }
    };
    write_file(out, &hgr_text)?;
    let mut out_report = Report::new();
    manifest.render_into(&mut out_report);
    out_report.push("kind", label);
    out_report.extend(report);
    out_report.push("written", out.display().to_string());
    Ok((out_report, EXIT_OK))
}

fn solver_from_flags(p: f64, seed: u64, jobs: usize, flags: &SolverFlags) -> SolverConfig {
    let mut config = SolverConfig::new(p).with_seed(seed).with_jobs(jobs);
    if let Some(t) = flags.tolerance {
        config = config.with_tolerance(t);
    }
    if let Some(r) = flags.restarts {
        config = config.with_restarts(r);
    }
    if let Some(m) = flags.max_iterations {
        config = config.with_max_iterations(m);
    }
    if let Some(d) = flags.damping {
        config = config.with_damping(d);
    }
    config
}

fn spectral_report(report: &mut Report, est: &SpectralEstimate, config: &SolverConfig) {
    report.push_f64("lambda", est.lambda);
    report.push_f64("p", est.vector.p());
    report.push_f64("residual", est.residual);
    report.push("iterations", est.iterations);
    report.push("restarts_used", est.restarts_used);
    report.push("converged", est.converged);
    report.push_slice_f64("vector", est.vector.values());
    report.push("solver.seed", config.seed);
    report.push_f64("solver.tolerance", config.tolerance);
    report.push("solver.max_iterations", config.max_iterations);
    report.push_f64("solver.damping", config.damping);
}

pub fn cmd_spectral(
    args: &SpectralArgs,
    seed: u64,
    jobs: usize,
    mut manifest: RunManifest,
) -> Result<(Report, u8), CliError> {
    let h = read_graph(&args.input, &mut manifest)?;
    let (est, config);
    if args.lagrangian {
        config = solver_from_flags(1.0, seed, jobs, &args.solver);
        est = lagrangian(&h, &config)?;
    } else {
        let p = match args.p {
            Some(v) => v,
            None => {
                return Err(CliError::Usage(
                    "spectral needs --p <exponent|inf> or --lagrangian".into(),
                ))
            }
        };
        if p <= 1.0 {
            return Err(CliError::Spectral(SpectralError::ExponentTooSmall(p)));
        }
        config = solver_from_flags(p, seed, jobs, &args.solver);
        est = p_spectral_radius(&h, &config)?;
    }
    let mut report = Report::new();
    manifest.render_into(&mut report);
    graph_summary(&mut report, &h);
    spectral_report(&mut report, &est, &config);
    let code = if est.converged { EXIT_OK } else { EXIT_NOT_CONVERGED };
    Ok((report, code))
}

pub fn cmd_check(args: &CheckArgs, mut manifest: RunManifest) -> Result<(Report, u8), CliError> {
    let h = read_graph(&args.input, &mut manifest)?;
    let spec = PatternSpec::parse(&args.pattern)?;
    let mut report = Report::new();
    manifest.render_into(&mut report);
    graph_summary(&mut report, &h);
    report.push("pattern", &spec);
    let r = h.uniformity();
    match &spec {
        PatternSpec::Unrestricted => {
            report.push("free", true);
        }
        PatternSpec::Expansion { f } => match contains_expansion(&h, f, r)? {
            Some(emb) => {
                report.push("free", false);
                report.push_slice("witness.core", &emb.core_map);
                report.push_slice("witness.vertices", &emb.vertices());
            }
            None => report.push("free", true),
        },
        PatternSpec::Family { k } => match contains_family_member(&h, *k)? {
            Some(core) => {
                report.push("free", false);
                report.push_slice("witness.core", &core);
            }
            None => report.push("free", true),
        },
        PatternSpec::DisjointExpansions { f, t } => {
            match contains_t_disjoint(&h, f, r, *t)? {
                Some(copies) => {
                    report.push("free", false);
                    for (i, emb) in copies.iter().enumerate() {
                        report.push_slice(&format!("witness.copy.{i}.core"), &emb.core_map);
                        report.push_slice(
                            &format!("witness.copy.{i}.vertices"),
                            &emb.vertices(),
                        );
                    }
                }
                None => report.push("free", true),
            }
        }
    }
    Ok((report, EXIT_OK))
}

pub fn cmd_stability(
    args: &StabilityArgs,
    seed: u64,
    mut manifest: RunManifest,
) -> Result<(Report, u8), CliError> {
    let h = read_graph(&args.input, &mut manifest)?;
    let r = h.uniformity();
    let n = h.n_vertices();
    let close = closeness_to_turan(&h, args.k, args.budget, seed)?;
    let (epsilon, eps_source) = match args.epsilon {
        Some(e) => (e, "given"),
        None => (close.epsilon_equiv.max(1e-9), "derived-from-closeness"),
    };
    let config = AnalysisConfig::new(epsilon, args.theta, args.k, r, args.t)?;
    let (sigma, score, exact) = optimize_partition(&h, args.k, args.budget, seed)?;
    let (missing, bad) = missing_bad_edges(&h, &sigma)?;
    let classes = classify_pairs(&h, &sigma, &config)?;

    let mut report = Report::new();
    manifest.render_into(&mut report);
    graph_summary(&mut report, &h);
    report.push("k", args.k);
    report.push("copies", args.t);
    report.push_f64("epsilon", epsilon);
    report.push("epsilon.source", eps_source);
    report.push_f64("theta", args.theta);
    report.push("closeness.distance", close.distance);
    report.push_f64("closeness.epsilon_equiv", close.epsilon_equiv);
    report.push("closeness.exact", close.exact);
    report.push_slice("closeness.class_sizes", &close.sigma.class_sizes());
    report.push("partition.score", score);
    report.push("partition.exact", exact);
    report.push_slice("partition.class_sizes", &sigma.class_sizes());
    report.push("partition.missing", missing);
    report.push("partition.bad", bad);
    report.push("pairs.codegree_threshold", classes.codegree_threshold);
    report.push("pairs.sparse", classes.sparse_pairs.len());
    report.push("pairs.dense", classes.dense_pairs.len());
    report.push("pairs.dominant", classes.dominant_pairs.len());
    report.push("vertices.sparse_heavy", classes.sparse_heavy.len());
    report.push("vertices.dominant_heavy", classes.dominant_heavy.len());
    let attached: Vec<usize> = classes.dominant_attached.iter().map(|c| c.len()).collect();
    let typical: Vec<usize> = classes.typical.iter().map(|c| c.len()).collect();
    report.push_slice("vertices.dominant_attached", &attached);
    report.push_slice("vertices.typical", &typical);
    report.push("threshold.copies_vertices", config.copies_vertex_count());
    report.push("threshold.codegree", config.codegree_threshold(n));
    report.push_f64("threshold.edge_slack", config.edge_slack(n));
    report.push_f64("threshold.entry_ratio_floor", config.entry_ratio_floor());
    report.push_f64(
        "threshold.sparse_vertex",
        config.sparse_vertex_threshold(n),
    );
    report.push_f64(
        "threshold.dominant_vertex",
        config.dominant_vertex_threshold(n),
    );
    Ok((report, EXIT_OK))
}

pub fn cmd_lab(
    cmd: &LabCommand,
    seed: u64,
    jobs: usize,
    mut manifest: RunManifest,
) -> Result<(Report, u8), CliError> {
    let mut report = Report::new();
    match cmd {
        LabCommand::MaxEdges {
            n,
            r,
            pattern,
            witness_dir,
        } => {
            let spec = PatternSpec::parse(pattern)?;
            let result = exhaustive_max_edges(*n, *r, &spec)?;
            manifest.render_into(&mut report);
            report.push("objective", result.objective);
            report.push("n", n);
            report.push("r", r);
            report.push("pattern", &spec);
            report.push_f64("best_value", result.best_value);
            report.push("explored", result.explored);
            report.push("exact", result.exact);
            report.push("witness_count", result.witnesses.len());
            if let Some(dir) = witness_dir {
                write_witnesses(dir, &result.witnesses, &mut report)?;
            }
        }
        LabCommand::MaxLambda {
            n,
            r,
            p,
            pattern,
            solver,
            witness_dir,
        } => {
            let spec = PatternSpec::parse(pattern)?;
            let config = solver_from_flags(*p, seed, jobs, solver);
            let result = exhaustive_max_lambda(*n, *r, *p, &spec, &config)?;
            manifest.render_into(&mut report);
            report.push("objective", result.objective);
            report.push("n", n);
            report.push("r", r);
            report.push_f64("p", *p);
            report.push("pattern", &spec);
            report.push_f64("best_value", result.best_value);
            report.push("explored", result.explored);
            report.push("exact", result.exact);
            report.push("witness_count", result.witnesses.len());
            if let Some(dir) = witness_dir {
                write_witnesses(dir, &result.witnesses, &mut report)?;
            }
        }
        LabCommand::CompositionSweep { n, k, r, t, p, solver } => {
            let config = solver_from_flags(*p, seed, jobs, solver);
            let sweep = composition_sweep(*n, *k, *r, *t, *p, &config)?;
            manifest.render_into(&mut report);
            report.push("n", n);
            report.push("k", k);
            report.push("r", r);
            report.push("t", t);
            report.push_f64("p", *p);
            report.push("rows", sweep.rows.len());
            report.push_slice("balanced.parts", &sweep.balanced_parts);
            report.push_f64("balanced.lambda", sweep.balanced_lambda);
            match sweep.max_unbalanced_lambda {
                Some(v) => report.push_f64("unbalanced.max_lambda", v),
                None => report.push("unbalanced.max_lambda", "none"),
            }
            match sweep.margin {
                Some(v) => report.push_f64("margin", v),
                None => report.push("margin", "none"),
            }
            report.push("balanced_is_max", sweep.balanced_is_max);
            for row in &sweep.rows {
                let key: Vec<String> = row.parts.iter().map(|s| s.to_string()).collect();
                let key = key.join("+");
                report.push_f64(&format!("row.{key}.lambda"), row.lambda);
                report.push(&format!("row.{key}.converged"), row.converged);
            }
        }
        LabCommand::Probe {
            input,
            pattern,
            p,
            radius,
            solver,
        } => {
            let h = read_graph(input, &mut manifest)?;
            let spec = PatternSpec::parse(pattern)?;
            let config = solver_from_flags(*p, seed, jobs, solver);
            let probe = perturbation_probe(&h, &spec, *p, &config, *radius)?;
            manifest.render_into(&mut report);
            graph_summary(&mut report, &h);
            report.push("pattern", &spec);
            report.push_f64("p", *p);
            report.push("radius", probe.radius);
            report.push_f64("base_lambda", probe.base_lambda);
            report.push("evaluated", probe.evaluated);
            report.push("skipped_deletions", probe.skipped_deletions);
            report.push("not_free", probe.not_free);
            report.push("improver_count", probe.improvers.len());
            const LISTED: usize = 20;
            for (i, imp) in probe.improvers.iter().take(LISTED).enumerate() {
                report.push(
                    &format!("improver.{i}.added"),
                    render_edges(&imp.added),
                );
                report.push(
                    &format!("improver.{i}.removed"),
                    render_edges(&imp.removed),
                );
                report.push_f64(&format!("improver.{i}.lambda"), imp.lambda);
            }
            if probe.improvers.len() > LISTED {
                report.push("improvers_truncated_at", LISTED);
            }
        }
    }
    Ok((report, EXIT_OK))
}

fn render_edges(edges: &[Vec<usize>]) -> String {
    if edges.is_empty() {
        return "none".to_string();
    }
    edges
        .iter()
        .map(|e| {
            e.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_witnesses(
    dir: &Path,
    witnesses: &[Hypergraph],
    report: &mut Report,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    for (i, w) in witnesses.iter().enumerate() {
        let path = dir.join(format!("witness_{i:03}.hgr"));
        write_file(&path, &w.to_hgr())?;
        report.push(&format!("witness.{i}"), path.display().to_string());
    }
    Ok(())
}
