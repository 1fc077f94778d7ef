//! p-spectral radius of an r-uniform hypergraph.
//!
//! For weights x >= 0 with ||x||_p = 1 the objective is the edge polynomial
//!
//!   P_H(x) = r! * sum_{e in E} prod_{v in e} x_v,
//!
//! and lambda^(p)(H) is its maximum over the nonnegative part of the unit
//! p-sphere. A maximizer satisfies the stationarity equations
//!
//!   lambda * x_i^(p-1) = (r-1)! * sum_{e : i in e} prod_{v in e, v != i} x_v
//!
//! for every i with x_i > 0, and everything the solver returns is judged
//! against them: `residual` is the worst violation over non-isolated
//! vertices, so the caller can treat `lambda` as a certified lower bound with
//! a measured distance from stationarity.
//!
//! Endpoints: p = 1 is the simplex (Lagrangian) problem handled by
//! [`lagrangian`], and p = inf is handled analytically, where the all-ones
//! vector is feasible and optimal with value r! * e(H).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combin::factorial;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("norm exponent must be a real >= 1 or infinity, got {0}")]
    BadExponent(f64),
    #[error("solver exponent must be > 1 (use `lagrangian` for p = 1), got {0}")]
    ExponentTooSmall(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("need at least one restart")]
    NoRestarts,
    #[error("damping must lie in (0, 1], got {0}")]
    BadDamping(f64),
    #[error("max_iterations must be positive")]
    NoIterations,
    #[error("jobs must be positive")]
    NoJobs,
    #[error("weight entry {0} is negative or not finite")]
    BadEntry(f64),
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("oracle handles at most {limit} vertices, got {n}")]
    OracleTooLarge { n: usize, limit: usize },
    #[error("oracle grid resolution must be at least 2")]
    BadResolution,
    #[error("edge count limit wants p >= 32, got {0}")]
    ExponentTooSmallForLimit(f64),
}

/// Nonnegative weights tagged with the norm exponent they are measured in.
/// `p == f64::INFINITY` selects the max norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    p: f64,
}

impl WeightVector {
    pub fn new(values: Vec<f64>, p: f64) -> Result<Self, SpectralError> {
        if !(p >= 1.0) {
            return Err(SpectralError::BadExponent(p));
        }
        for &v in &values {
            if !(v >= 0.0) || (!v.is_finite()) {
                return Err(SpectralError::BadEntry(v));
            }
        }
        Ok(WeightVector { values, p })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn norm(&self) -> f64 {
        p_norm(&self.values, self.p)
    }

    /// Rescales to unit p-norm.
    pub fn normalized(mut self) -> Result<Self, SpectralError> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(SpectralError::ZeroVector);
        }
        for v in &mut self.values {
            *v /= nrm;
        }
        Ok(self)
    }

    /// Unit norm within 1e-12.
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }
}

fn p_norm(x: &[f64], p: f64) -> f64 {
    if p == f64::INFINITY {
        return x.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return x.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn normalize_p(x: &mut [f64], p: f64) -> bool {
    let nrm = p_norm(x, p);
    if nrm == 0.0 || !nrm.is_finite() {
        return false;
    }
    for v in x.iter_mut() {
        *v /= nrm;
    }
    true
}

/// Solver knobs. `p` is the norm exponent; the rest default to the values
/// used throughout the test suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub p: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    pub damping: f64,
    pub jobs: usize,
}

impl SolverConfig {
    pub fn new(p: f64) -> Self {
        SolverConfig {
            p,
            tolerance: 1e-10,
            max_iterations: 100_000,
            restarts: 16,
            seed: 0,
            damping: 1.0,
            jobs: 1,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_damping(mut self, damping: f64) -> Self {
        self.damping = damping;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    fn validate_common(&self) -> Result<(), SpectralError> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(SpectralError::BadTolerance(self.tolerance));
        }
        if self.restarts == 0 {
            return Err(SpectralError::NoRestarts);
        }
        if self.max_iterations == 0 {
            return Err(SpectralError::NoIterations);
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(SpectralError::BadDamping(self.damping));
        }
        if self.jobs == 0 {
            return Err(SpectralError::NoJobs);
        }
        Ok(())
    }
}

/// Solver output: the certified value, the witness weights, and how far the
/// witness sits from stationarity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    pub lambda: f64,
    pub vector: WeightVector,
    pub residual: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
}

/// The edge polynomial P_H(x) = r! * sum_e prod_{v in e} x_v.
///
/// Panics if `x.len() != h.n_vertices()`; weights are the caller's problem
/// and are not sign-checked here.
pub fn poly_form(h: &Hypergraph, x: &[f64]) -> f64 {
    assert_eq!(
        x.len(),
        h.n_vertices(),
        "weight vector length {} does not match vertex count {}",
        x.len(),
        h.n_vertices()
    );
    let rf = factorial(h.uniformity()) as f64;
    let mut sum = 0.0;
    for e in h.edges() {
        let mut prod = 1.0;
        for &v in e {
            prod *= x[v];
        }
        sum += prod;
    }
    rf * sum
}

/// (r-1)! times the sum over edges through `i` of the product of the other
/// r-1 weights. This is the right-hand side of the stationarity equation.
pub fn link_value(h: &Hypergraph, x: &[f64], i: usize) -> f64 {
    assert_eq!(x.len(), h.n_vertices(), "weight vector length mismatch");
    assert!(i < h.n_vertices(), "vertex {} out of range", i);
    let rf = factorial(h.uniformity() - 1) as f64;
    let mut sum = 0.0;
    for e in h.edges() {
        if e.binary_search(&i).is_err() {
            continue;
        }
        let mut prod = 1.0;
        for &v in e {
            if v != i {
                prod *= x[v];
            }
        }
        sum += prod;
    }
    rf * sum
}

/// All link values in one pass over the edges (prefix/suffix products per
/// edge, so each edge costs O(r)).
pub fn link_values(h: &Hypergraph, x: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), h.n_vertices(), "weight vector length mismatch");
    let r = h.uniformity();
    let rf = factorial(r - 1) as f64;
    let mut links = vec![0.0; h.n_vertices()];
    let mut prefix = vec![1.0; r + 1];
    let mut suffix = vec![1.0; r + 1];
    for e in h.edges() {
        for idx in 0..r {
            prefix[idx + 1] = prefix[idx] * x[e[idx]];
        }
        suffix[r] = 1.0;
        for idx in (0..r).rev() {
            suffix[idx] = suffix[idx + 1] * x[e[idx]];
        }
        for idx in 0..r {
            links[e[idx]] += prefix[idx] * suffix[idx + 1];
        }
    }
    for l in &mut links {
        *l *= rf;
    }
    links
}

fn residual_at(x: &[f64], links: &[f64], lambda: f64, p: f64, degrees: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        if degrees[i] == 0 {
            continue;
        }
        let lhs = lambda * x[i].powf(p - 1.0);
        worst = worst.max((lhs - links[i]).abs());
    }
    worst
}

struct RunOutcome {
    lambda: f64,
    x: Vec<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
}

/// One damped multiplicative fixed-point run from a given start.
///
/// The update is x_i <- link_i^(1/(p-1)) followed by p-normalization, mixed
/// with the previous iterate by the damping factor; step halving keeps the
/// objective non-decreasing. Convergence needs the residual and the lambda
/// drift below tolerance on two consecutive iterations.
fn fixed_point_run(
    h: &Hypergraph,
    p: f64,
    tolerance: f64,
    max_iterations: usize,
    damping: f64,
    degrees: &[usize],
    start: &[f64],
) -> RunOutcome {
    let n = h.n_vertices();
    let mut x = start.to_vec();
    if !normalize_p(&mut x, p) {
        return RunOutcome {
            lambda: 0.0,
            x: vec![0.0; n],
            residual: 0.0,
            iterations: 0,
            converged: false,
        };
    }
    let q = 1.0 / (p - 1.0);
    let mut prev_lambda = f64::NAN;
    let mut prev_ok = false;
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let mut beta_cap = damping;
    let mut best_residual = f64::INFINITY;
    let mut since_best = 0usize;
    for it in 0..=max_iterations {
        let links = link_values(h, &x);
        // P(x) = sum_i x_i * link_i, the Euler identity for the degree-r form
        lambda = x.iter().zip(&links).map(|(a, b)| a * b).sum();
        residual = residual_at(&x, &links, lambda, p, degrees);
        // a stalled residual means the iterate is bouncing across the optimum
        // (the linearized step is not a contraction there, e.g. sparse graphs
        // at p = 2); mixing in more of the previous iterate restores progress
        if residual < best_residual * 0.999 {
            best_residual = residual;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= 50 && beta_cap > 1.0 / 64.0 {
                beta_cap *= 0.5;
                since_best = 0;
            }
        }
        let drift_ok = prev_lambda.is_finite()
            && (lambda - prev_lambda).abs() <= tolerance * lambda.abs().max(1.0);
        let ok = residual <= tolerance && drift_ok;
        if ok && prev_ok {
            converged = true;
            iterations = it;
            break;
        }
        prev_ok = ok;
        prev_lambda = lambda;
        if it == max_iterations {
            iterations = it;
            break;
        }
        // multiplicative step
        let mut y: Vec<f64> = links.iter().map(|&l| l.powf(q)).collect();
        if !normalize_p(&mut y, p) {
            iterations = it;
            break;
        }
        let mut beta = beta_cap;
        let mut stepped = false;
        let floor = lambda - 1e-15 * lambda.abs().max(1.0);
        for _ in 0..60 {
            let mut cand: Vec<f64> = x
                .iter()
                .zip(&y)
                .map(|(&a, &b)| (1.0 - beta) * a + beta * b)
                .collect();
            if normalize_p(&mut cand, p) && poly_form(h, &cand) >= floor {
                x = cand;
                stepped = true;
                break;
            }
            beta *= 0.5;
        }
        if !stepped {
            // no admissible step left; the iterate is numerically stuck
            iterations = it;
            break;
        }
        iterations = it + 1;
    }
    RunOutcome {
        lambda,
        x,
        residual,
        iterations,
        converged,
    }
}

fn zero_estimate(n: usize, p: f64) -> SpectralEstimate {
    SpectralEstimate {
        lambda: 0.0,
        vector: WeightVector::new(vec![0.0; n], p).expect("zeros are valid weights"),
        residual: 0.0,
        iterations: 0,
        restarts_used: 0,
        converged: true,
    }
}

fn restart_start(n: usize, index: usize, seed: u64) -> Vec<f64> {
    if index == 0 {
        // deterministic uniform start; keeps symmetric optima and the
        // uniform-vector lower bound exact
        return vec![1.0; n];
    }
    let stream = seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    (0..n).map(|_| 0.5 + rng.random::<f64>()).collect()
}

fn better(a: &RunOutcome, b: &RunOutcome) -> bool {
    // higher lambda wins, residual breaks ties
    a.lambda > b.lambda || (a.lambda == b.lambda && a.residual < b.residual)
}

/// Certified lower bound on lambda^(p)(H) for p > 1, best over restarts.
///
/// Restart 0 starts uniform, the rest start from seeded random positives.
/// p = inf short-circuits to the exact endpoint r! * e(H) at the all-ones
/// vector. The returned lambda always equals `poly_form` of the returned
/// vector, and `residual` measures its distance from stationarity.
pub fn p_spectral_radius(
    h: &Hypergraph,
    config: &SolverConfig,
) -> Result<SpectralEstimate, SpectralError> {
    p_spectral_radius_with_starts(h, config, &[])
}

/// Same as [`p_spectral_radius`] but with caller-provided warm starts
/// appended after the configured restarts. Monotone steps mean the result is
/// never worse than the objective at any supplied start.
pub fn p_spectral_radius_with_starts(
    h: &Hypergraph,
    config: &SolverConfig,
    extra_starts: &[Vec<f64>],
) -> Result<SpectralEstimate, SpectralError> {
    if config.p.is_nan() || config.p < 1.0 {
        return Err(SpectralError::BadExponent(config.p));
    }
    if config.p == f64::INFINITY {
        config.validate_common()?;
        return Ok(infinity_estimate(h));
    }
    if config.p <= 1.0 {
        return Err(SpectralError::ExponentTooSmall(config.p));
    }
    config.validate_common()?;
    let n = h.n_vertices();
    if h.n_edges() == 0 {
        return Ok(zero_estimate(n, config.p));
    }
    let degrees = h.degrees();
    let total = config.restarts + extra_starts.len();
    let run_one = |idx: usize| -> RunOutcome {
        let start = if idx < config.restarts {
            restart_start(n, idx, config.seed)
        } else {
            extra_starts[idx - config.restarts].clone()
        };
        fixed_point_run(
            h,
            config.p,
            config.tolerance,
            config.max_iterations,
            config.damping,
            &degrees,
            &start,
        )
    };
    let outcomes: Vec<RunOutcome> = if config.jobs <= 1 || total <= 1 {
        (0..total).map(run_one).collect()
    } else {
        run_indexed_parallel(total, config.jobs, &run_one)
    };
    let mut best: Option<RunOutcome> = None;
    for o in outcomes {
        if best.as_ref().map_or(true, |b| better(&o, b)) {
            best = Some(o);
        }
    }
    let best = best.expect("at least one restart ran");
    // re-evaluate through the public polynomial so lambda is exactly P_H(x)
    let lambda = poly_form(h, &best.x);
    let links = link_values(h, &best.x);
    let residual = residual_at(&best.x, &links, lambda, config.p, &degrees);
    Ok(SpectralEstimate {
        lambda,
        vector: WeightVector::new(best.x, config.p)?,
        residual,
        iterations: best.iterations,
        restarts_used: total,
        converged: best.converged,
    })
}

fn run_indexed_parallel<F>(total: usize, jobs: usize, run_one: &F) -> Vec<RunOutcome>
where
    F: Fn(usize) -> RunOutcome + Sync,
{
    let mut slots: Vec<Option<RunOutcome>> = Vec::new();
    slots.resize_with(total, || None);
    let workers = jobs.min(total);
    std::thread::scope(|scope| {
        let mut pending: Vec<(usize, &mut Option<RunOutcome>)> =
            slots.iter_mut().enumerate().collect();
        let mut handles = Vec::new();
        let chunk = total.div_ceil(workers);
        while !pending.is_empty() {
            let take = chunk.min(pending.len());
            let batch: Vec<_> = pending.drain(..take).collect();
            handles.push(scope.spawn(move || {
                for (idx, slot) in batch {
                    *slot = Some(run_one(idx));
                }
            }));
        }
        for hnd in handles {
            hnd.join().expect("restart worker panicked");
        }
    });
    slots.into_iter().map(|s| s.expect("slot filled")).collect()
}

fn infinity_estimate(h: &Hypergraph) -> SpectralEstimate {
    // sup over the inf-ball is attained at the all-ones vector: every edge
    // product is 1, so the value is exactly r! * e(H)
    let n = h.n_vertices();
    if h.n_edges() == 0 {
        return zero_estimate(n, f64::INFINITY);
    }
    let lambda = (factorial(h.uniformity()) * h.n_edges()) as f64;
    SpectralEstimate {
        lambda,
        vector: WeightVector::new(vec![1.0; n], f64::INFINITY).expect("ones are valid"),
        residual: 0.0,
        iterations: 0,
        restarts_used: 0,
        converged: true,
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("no NaN weights"));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        } else {
            break;
        }
    }
    (0..n).map(|i| (x[i] - tau).max(0.0)).collect()
}

/// lambda^(1)(H): the maximum of the edge polynomial over the probability
/// simplex, by projected gradient ascent with restarts. The certificate is
/// the p = 1 stationarity condition: link values equal lambda on the
/// support and do not exceed it off the support.
///
/// `config.p` is ignored; everything else applies as in the p > 1 solver.
pub fn lagrangian(h: &Hypergraph, config: &SolverConfig) -> Result<SpectralEstimate, SpectralError> {
    config.validate_common()?;
    let n = h.n_vertices();
    if h.n_edges() == 0 {
        return Ok(zero_estimate(n, 1.0));
    }
    let degrees = h.degrees();
    let r = h.uniformity() as f64;
    let support_eps = 1e-12;
    let total = config.restarts;
    let solve_from = |idx: usize| -> RunOutcome {
        let mut x: Vec<f64> = if idx == 0 {
            vec![1.0 / n as f64; n]
        } else {
            let stream = config
                .seed
                .wrapping_add((idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            // exponential draws normalized to the simplex (Dirichlet(1))
            let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / s).collect()
        };
        let residual_l1 = |x: &[f64], links: &[f64], lambda: f64| -> f64 {
            let mut worst = 0.0f64;
            for i in 0..n {
                if degrees[i] == 0 {
                    continue;
                }
                if x[i] > support_eps {
                    worst = worst.max((lambda - links[i]).abs());
                } else {
                    worst = worst.max((links[i] - lambda).max(0.0));
                }
            }
            worst
        };
        let mut eta = 0.0;
        let mut prev_lambda = f64::NAN;
        let mut prev_ok = false;
        let mut lambda = 0.0;
        let mut residual = f64::INFINITY;
        let mut converged = false;
        let mut iterations = 0;
        for it in 0..=config.max_iterations {
            let links = link_values(h, &x);
            lambda = x.iter().zip(&links).map(|(a, b)| a * b).sum();
            residual = residual_l1(&x, &links, lambda);
            let drift_ok = prev_lambda.is_finite()
                && (lambda - prev_lambda).abs() <= config.tolerance * lambda.abs().max(1.0);
            let ok = residual <= config.tolerance && drift_ok;
            if ok && prev_ok {
                converged = true;
                iterations = it;
                break;
            }
            prev_ok = ok;
            prev_lambda = lambda;
            if it == config.max_iterations {
                iterations = it;
                break;
            }
            let grad: Vec<f64> = links.iter().map(|&l| r * l).collect();
            let gmax = grad.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            if eta == 0.0 {
                eta = 1.0 / gmax.max(1.0);
            }
            let floor = lambda - 1e-15 * lambda.abs().max(1.0);
            let mut stepped = false;
            let mut step = eta;
            for _ in 0..60 {
                let moved: Vec<f64> = x
                    .iter()
                    .zip(&grad)
                    .map(|(&a, &g)| a + step * g)
                    .collect();
                let cand = project_simplex(&moved);
                if poly_form(h, &cand) >= floor {
                    x = cand;
                    eta = step * 1.3;
                    stepped = true;
                    break;
                }
                step *= 0.5;
            }
            if !stepped {
                iterations = it;
                break;
            }
            iterations = it + 1;
        }
        RunOutcome {
            lambda,
            x,
            residual,
            iterations,
            converged,
        }
    };
    let outcomes: Vec<RunOutcome> = if config.jobs <= 1 || total <= 1 {
        (0..total).map(solve_from).collect()
    } else {
        run_indexed_parallel(total, config.jobs, &solve_from)
    };
    let mut best: Option<RunOutcome> = None;
    for o in outcomes {
        if best.as_ref().map_or(true, |b| better(&o, b)) {
            best = Some(o);
        }
    }
    let best = best.expect("at least one restart ran");
    let lambda = poly_form(h, &best.x);
    Ok(SpectralEstimate {
        lambda,
        vector: WeightVector::new(best.x, 1.0)?,
        residual: best.residual,
        iterations: best.iterations,
        restarts_used: total,
        converged: best.converged,
    })
}

/// Solver value at a large exponent together with the exact bracket
/// [r! * m * n^(-r/p), (r! * m)^(1 - 1/p)] that pins it against the edge
/// count. The lower end is evaluated as the edge polynomial at the uniform
/// feasible vector, which is the same quantity, so `lambda >= lower` is
/// guaranteed rather than subject to rounding luck.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCountLimit {
    pub estimate: SpectralEstimate,
    pub lower: f64,
    pub upper: f64,
}

pub fn edge_count_limit(h: &Hypergraph, p_large: f64) -> Result<EdgeCountLimit, SpectralError> {
    if !(p_large >= 32.0) || !p_large.is_finite() {
        return Err(SpectralError::ExponentTooSmallForLimit(p_large));
    }
    let config = SolverConfig::new(p_large);
    let n = h.n_vertices();
    let m = h.n_edges();
    let rf = factorial(h.uniformity()) as f64;
    // seed the solver with the uniform feasible vector so monotone ascent
    // makes lambda >= lower structural rather than a matter of restart luck
    let uniform = vec![(n.max(1) as f64).powf(-1.0 / p_large); n];
    let estimate = p_spectral_radius_with_starts(h, &config, &[uniform.clone()])?;
    let lower = if m == 0 { 0.0 } else { poly_form(h, &uniform) };
    let upper = if m == 0 {
        0.0
    } else {
        (rf * m as f64).powf(1.0 - 1.0 / p_large)
    };
    Ok(EdgeCountLimit {
        estimate,
        lower,
        upper,
    })
}

const ORACLE_VERTEX_LIMIT: usize = 6;

/// Independent grid oracle: scans every composition of `resolution` over the
/// vertices, scales each to the p-sphere (or the simplex at p = 1), and
/// polishes the best candidates by coordinate-wise multiplicative hill
/// climbing. No fixed-point machinery is involved, so this is a fair check
/// of the solver at desk scale (n <= 6).
pub fn brute_force_spectral(
    h: &Hypergraph,
    p: f64,
    resolution: usize,
) -> Result<f64, SpectralError> {
    let n = h.n_vertices();
    if n > ORACLE_VERTEX_LIMIT {
        return Err(SpectralError::OracleTooLarge {
            n,
            limit: ORACLE_VERTEX_LIMIT,
        });
    }
    if !(p >= 1.0) || p.is_infinite() {
        return Err(SpectralError::BadExponent(p));
    }
    if resolution < 2 {
        return Err(SpectralError::BadResolution);
    }
    if h.n_edges() == 0 || n == 0 {
        return Ok(0.0);
    }
    let mut top: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut w = vec![0usize; n];
    grid_scan(h, p, resolution, 0, resolution, &mut w, &mut top);
    let mut best = 0.0f64;
    for (_, x) in &top {
        best = best.max(polish(h, p, x.clone()));
    }
    Ok(best)
}

fn grid_scan(
    h: &Hypergraph,
    p: f64,
    resolution: usize,
    idx: usize,
    left: usize,
    w: &mut Vec<usize>,
    top: &mut Vec<(f64, Vec<f64>)>,
) {
    let n = w.len();
    if idx == n - 1 {
        w[idx] = left;
        if w.iter().all(|&v| v == 0) {
            return;
        }
        let mut x: Vec<f64> = w.iter().map(|&v| v as f64).collect();
        if !normalize_p(&mut x, p) {
            return;
        }
        let value = poly_form(h, &x);
        const KEEP: usize = 5;
        if top.len() < KEEP {
            top.push((value, x));
            top.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite values"));
        } else if value > top[KEEP - 1].0 {
            top[KEEP - 1] = (value, x);
            top.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite values"));
        }
        let _ = resolution;
        return;
    }
    for v in 0..=left {
        w[idx] = v;
        grid_scan(h, p, resolution, idx + 1, left - v, w, top);
    }
}

fn polish(h: &Hypergraph, p: f64, mut x: Vec<f64>) -> f64 {
    let n = x.len();
    let mut best = poly_form(h, &x);
    let mut delta = 0.25;
    let mut budget = 40_000usize;
    while delta > 1e-9 && budget > 0 {
        let mut improved = false;
        for i in 0..n {
            for &factor in &[1.0 + delta, 1.0 / (1.0 + delta)] {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                let mut cand = x.clone();
                cand[i] *= factor;
                if !normalize_p(&mut cand, p) {
                    continue;
                }
                let v = poly_form(h, &cand);
                if v > best {
                    best = v;
                    x = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::binomial;
    use crate::hypergraph::SimpleGraph;

    fn complete_lambda(n: usize, r: usize, p: f64) -> f64 {
        factorial(r) as f64 * binomial(n, r) as f64 * (n as f64).powf(-(r as f64) / p)
    }

    #[test]
    fn poly_and_link_on_small_complete() {
        let k3 = Hypergraph::complete(3, 3).unwrap();
        let u = (3.0f64).powf(-1.0 / 3.0);
        let x = vec![u; 3];
        assert!((poly_form(&k3, &x) - 2.0).abs() < 1e-12);
        let expect = 2.0 * (3.0f64).powf(-2.0 / 3.0);
        assert!((link_value(&k3, &x, 0) - expect).abs() < 1e-12);
        let bulk = link_values(&k3, &x);
        for i in 0..3 {
            assert!((bulk[i] - link_value(&k3, &x, i)).abs() < 1e-14);
        }
    }

    #[test]
    #[should_panic(expected = "length")]
    fn poly_form_rejects_wrong_length() {
        let k3 = Hypergraph::complete(3, 3).unwrap();
        poly_form(&k3, &[0.5, 0.5]);
    }

    // a single edge at p = 2 makes the undamped step a pure reflection around
    // the optimum, so this only converges if the stall rescue kicks in
    #[test]
    fn single_edge_at_p_two_converges() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let est = p_spectral_radius(&h, &SolverConfig::new(2.0)).unwrap();
        assert!(est.converged, "residual stuck at {}", est.residual);
        assert!(est.residual <= 1e-10);
        let expect = complete_lambda(3, 3, 2.0);
        assert!((est.lambda - expect).abs() <= 1e-9);
    }

    #[test]
    fn solver_matches_closed_form_on_complete_graphs() {
        for &(n, r, p) in &[(3usize, 3usize, 3.0f64), (4, 3, 2.0), (5, 3, 5.0), (5, 4, 2.5)] {
            let h = Hypergraph::complete(n, r).unwrap();
            let est = p_spectral_radius(&h, &SolverConfig::new(p)).unwrap();
            let expect = complete_lambda(n, r, p);
            assert!(
                (est.lambda - expect).abs() <= 1e-8,
                "K_{}^{} at p={}: got {} want {}",
                n,
                r,
                p,
                est.lambda,
                expect
            );
            assert!(est.converged);
            assert!(est.residual <= 1e-10);
            assert!(est.vector.is_normalized());
        }
    }

    #[test]
    fn solver_on_turan_is_at_least_uniform_value() {
        let t = Hypergraph::turan(6, 3, 3).unwrap();
        let est = p_spectral_radius(&t, &SolverConfig::new(3.0)).unwrap();
        assert!(est.lambda >= 8.0 - 1e-8, "got {}", est.lambda);
        assert!(est.residual <= 1e-10);
    }

    #[test]
    fn lambda_equals_poly_of_vector() {
        let h = Hypergraph::new(5, 3, vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        let est = p_spectral_radius(&h, &SolverConfig::new(2.5)).unwrap();
        let again = poly_form(&h, est.vector.values());
        assert!((est.lambda - again).abs() <= 1e-12);
    }

    #[test]
    fn edgeless_and_infinity_endpoints() {
        let empty = Hypergraph::new(5, 3, Vec::new()).unwrap();
        let est = p_spectral_radius(&empty, &SolverConfig::new(3.0)).unwrap();
        assert_eq!(est.lambda, 0.0);
        assert!(est.converged);

        let t = Hypergraph::turan(7, 3, 3).unwrap();
        let inf = p_spectral_radius(&t, &SolverConfig::new(f64::INFINITY)).unwrap();
        assert_eq!(inf.lambda, (6 * t.n_edges()) as f64);
        assert_eq!(inf.residual, 0.0);
        assert!(inf.converged);
    }

    #[test]
    fn solver_rejects_bad_configs() {
        let h = Hypergraph::complete(4, 3).unwrap();
        assert!(p_spectral_radius(&h, &SolverConfig::new(1.0)).is_err());
        assert!(p_spectral_radius(&h, &SolverConfig::new(0.5)).is_err());
        assert!(p_spectral_radius(&h, &SolverConfig::new(3.0).with_restarts(0)).is_err());
        assert!(p_spectral_radius(&h, &SolverConfig::new(3.0).with_tolerance(0.0)).is_err());
        assert!(p_spectral_radius(&h, &SolverConfig::new(3.0).with_damping(1.5)).is_err());
    }

    #[test]
    fn warm_start_never_loses_to_its_value() {
        let h = Hypergraph::turan(6, 3, 3).unwrap();
        let config = SolverConfig::new(3.0).with_restarts(1);
        let start = vec![0.9, 0.1, 0.8, 0.2, 0.7, 0.3];
        let mut normalized = start.clone();
        assert!(normalize_p(&mut normalized, 3.0));
        let at_start = poly_form(&h, &normalized);
        let est = p_spectral_radius_with_starts(&h, &config, &[start]).unwrap();
        assert!(est.lambda >= at_start - 1e-12);
    }

    #[test]
    fn jobs_do_not_change_the_answer() {
        let h = Hypergraph::turan(7, 3, 3).unwrap();
        let one = p_spectral_radius(&h, &SolverConfig::new(2.5).with_jobs(1)).unwrap();
        let four = p_spectral_radius(&h, &SolverConfig::new(2.5).with_jobs(4)).unwrap();
        assert_eq!(one.lambda.to_bits(), four.lambda.to_bits());
        assert_eq!(one.vector, four.vector);
    }

    #[test]
    fn lagrangian_on_small_cliques() {
        let k3 = Hypergraph::complete(3, 3).unwrap();
        let est = lagrangian(&k3, &SolverConfig::new(1.0)).unwrap();
        assert!((est.lambda - 2.0 / 9.0).abs() <= 1e-8, "got {}", est.lambda);
        assert!(est.converged);

        // Motzkin-Straus on graph cliques: 1 - 1/k
        for k in 2..=5 {
            let kk = Hypergraph::new(
                k,
                2,
                SimpleGraph::complete(k)
                    .edges()
                    .iter()
                    .map(|&(a, b)| vec![a, b])
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let est = lagrangian(&kk, &SolverConfig::new(1.0)).unwrap();
            let expect = 1.0 - 1.0 / k as f64;
            assert!(
                (est.lambda - expect).abs() <= 1e-8,
                "K_{}: got {} want {}",
                k,
                est.lambda,
                expect
            );
        }
    }

    #[test]
    fn lagrangian_positive_iff_edges() {
        let empty = Hypergraph::new(4, 3, Vec::new()).unwrap();
        assert_eq!(lagrangian(&empty, &SolverConfig::new(1.0)).unwrap().lambda, 0.0);
        let h = Hypergraph::new(4, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!(lagrangian(&h, &SolverConfig::new(1.0)).unwrap().lambda > 0.0);
    }

    #[test]
    fn edge_count_limit_brackets() {
        let t = Hypergraph::turan(7, 3, 3).unwrap();
        let lim = edge_count_limit(&t, 64.0).unwrap();
        assert!(lim.lower <= lim.estimate.lambda);
        assert!(lim.estimate.lambda <= lim.upper);
        let m = t.n_edges() as f64;
        assert!((lim.upper - (6.0 * m).powf(1.0 - 1.0 / 64.0)).abs() < 1e-12);
        assert!(edge_count_limit(&t, 8.0).is_err());
    }

    #[test]
    fn oracle_agrees_with_solver_on_tiny_graphs() {
        for &(n, r, p) in &[(4usize, 3usize, 2.0f64), (5, 3, 3.0), (5, 3, 1.5)] {
            let h = Hypergraph::complete(n, r).unwrap();
            let est = p_spectral_radius(&h, &SolverConfig::new(p)).unwrap();
            let grid = brute_force_spectral(&h, p, 16).unwrap();
            assert!(
                grid <= est.lambda + 1e-6,
                "oracle overshoots solver: {} vs {}",
                grid,
                est.lambda
            );
            assert!(
                est.lambda <= grid + 1e-6,
                "solver overshoots oracle: {} vs {}",
                est.lambda,
                grid
            );
        }
        let too_big = Hypergraph::complete(7, 3).unwrap();
        assert!(brute_force_spectral(&too_big, 2.0, 8).is_err());
    }

    #[test]
    fn weight_vector_contract() {
        assert!(WeightVector::new(vec![0.5, -0.1], 2.0).is_err());
        assert!(WeightVector::new(vec![0.5, f64::NAN], 2.0).is_err());
        assert!(WeightVector::new(vec![0.5], 0.5).is_err());
        let w = WeightVector::new(vec![3.0, 4.0], 2.0).unwrap();
        assert!((w.norm() - 5.0).abs() < 1e-12);
        let w = w.normalized().unwrap();
        assert!(w.is_normalized());
        let inf = WeightVector::new(vec![0.25, 1.0], f64::INFINITY).unwrap();
        assert!(inf.is_normalized());
        assert!(WeightVector::new(vec![0.0, 0.0], 2.0)
            .unwrap()
            .normalized()
            .is_err());
    }

    #[test]
    fn simplex_projection_properties() {
        let cases: Vec<Vec<f64>> = vec![
            vec![0.2, 0.3, 0.5],
            vec![2.0, -1.0, 0.5],
            vec![-1.0, -2.0, -3.0],
            vec![10.0, 0.0, 0.0, 0.0],
        ];
        for c in cases {
            let p = project_simplex(&c);
            let s: f64 = p.iter().sum();
            assert!((s - 1.0).abs() < 1e-9, "sum {}", s);
            assert!(p.iter().all(|&v| v >= 0.0));
        }
    }
}
