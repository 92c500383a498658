//! Coupling sweeps, edge-state detection, and the analytic phase-boundary
//! condition of the high-frequency limit.
//!
//! A sweep diagonalizes one Floquet–Fourier matrix per grid point. Points
//! are independent, so they run on a worker pool; results are merged in
//! grid order so repeated runs are bit-identical.

use crate::drive::{DriveKind, DriveSpec};
use crate::floquet::{self, FloquetError, FloquetSolution};
use crate::lattice::{edge_weight_from_site_probabilities, ChainGeometry, LatticeError};
use crate::specfun::{self, QuadratureSettings, SpecFunError};
use rayon::prelude::*;
use thiserror::Error;

/// Environment variable selecting the sweep worker count; unset or empty
/// means one worker per available CPU.
pub const WORKER_COUNT_ENV: &str = "FLOQUET_SSH_WORKERS";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("coupling grid is empty")]
    EmptyGrid,
    #[error("coupling grid must be ascending: grid[{index}] = {value} after {previous}")]
    GridNotAscending { index: usize, value: f64, previous: f64 },
    #[error("couplings must satisfy g >= 0 and be finite, got {0}")]
    BadCoupling(f64),
    #[error("the Gaussian drive has no analytic assembly; use the numeric method")]
    NoAnalyticPath,
    #[error("weight threshold must lie strictly between 0 and 1, got {0}")]
    BadWeightThreshold(f64),
    #[error("energy window must be positive, got {0}")]
    BadEnergyWindow(f64),
    #[error("boundary search limit must lie in (0, {max}], got {got}")]
    BoundarySearchLimit { got: f64, max: f64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("invalid worker count {0:?} in {WORKER_COUNT_ENV}")]
    BadWorkerCount(String),
    #[error("worker pool construction failed: {0}")]
    WorkerPool(String),
}

/// Which assembly route a sweep uses at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyMethod {
    /// Bessel-series blocks (monochromatic and commensurate beating).
    Analytic,
    /// Quadrature Fourier coefficients (any drive).
    Numeric,
}

/// Which per-state scalar the `population` column reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PopulationDefinition {
    /// Weight on the central (m = 0) replica.
    #[default]
    Central,
    /// Largest single-replica weight.
    Max,
}

/// Knobs that refine a sweep without changing its contract.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub population: PopulationDefinition,
    /// Cells counted from each end by the edge-weight column.
    pub n_edge_cells: usize,
    /// Quadrature window center for the numeric method (absolute time);
    /// only the Gaussian pulse is sensitive to it.
    pub window_center: f64,
    /// Report quasienergies folded into the first zone (default) or raw
    /// eigenvalues of the block matrix.
    pub fold: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            population: PopulationDefinition::Central,
            n_edge_cells: DEFAULT_EDGE_CELLS,
            window_center: 0.0,
            fold: true,
        }
    }
}

/// Detection defaults: tuned so the undriven topological reference chain
/// (N = 20, v/w = 0.3) flags exactly its two zero modes and no bulk state.
pub const DEFAULT_ENERGY_WINDOW: f64 = 0.05;
pub const DEFAULT_WEIGHT_THRESHOLD: f64 = 0.6;
pub const DEFAULT_EDGE_CELLS: usize = 2;

/// Edge-state detection thresholds, bundled so configurations can tighten
/// them. The energy window is in units of w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionSettings {
    pub energy_window: f64,
    pub weight_threshold: f64,
    pub n_edge_cells: usize,
}

impl Default for DetectionSettings {
    fn default() -> Self {
        DetectionSettings {
            energy_window: DEFAULT_ENERGY_WINDOW,
            weight_threshold: DEFAULT_WEIGHT_THRESHOLD,
            n_edge_cells: DEFAULT_EDGE_CELLS,
        }
    }
}

/// [`detect_edge_states`] with the thresholds taken from a settings bundle.
pub fn detect_edge_states_with(
    sol: &FloquetSolution,
    geom: &ChainGeometry,
    settings: &DetectionSettings,
) -> Result<Vec<usize>, SweepError> {
    detect_edge_states(
        sol,
        geom,
        settings.energy_window,
        settings.weight_threshold,
        settings.n_edge_cells,
    )
}

/// One output row: a single Floquet state at a single coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub g: f64,
    /// Folded quasienergy in [-W_base/2, W_base/2).
    pub quasienergy: f64,
    pub population: f64,
    pub edge_weight: f64,
    /// Index of the state in ascending unfolded-eigenvalue order.
    pub state_index: usize,
}

/// A grid point whose assembly or diagonalization failed; the sweep
/// records it and continues.
#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub g: f64,
    pub message: String,
}

/// Everything needed to reproduce a sweep, echoed into output files.
#[derive(Debug, Clone)]
pub struct SweepMetadata {
    pub geometry: ChainGeometry,
    pub drive: DriveSpec,
    pub m_max: usize,
    pub base_frequency: f64,
    pub method: AssemblyMethod,
    pub quadrature: QuadratureSettings,
    pub options: SweepOptions,
    pub code_version: &'static str,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    rows: Vec<SweepRow>,
    failures: Vec<SweepFailure>,
    metadata: SweepMetadata,
}

impl SweepResult {
    /// Rows sorted by (g, quasienergy); 2N(2M+1) rows per successful point.
    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn failures(&self) -> &[SweepFailure] {
        &self.failures
    }

    pub fn metadata(&self) -> &SweepMetadata {
        &self.metadata
    }
}

fn validate_grid(g_grid: &[f64]) -> Result<(), SweepError> {
    if g_grid.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    for (i, &g) in g_grid.iter().enumerate() {
        if !(g >= 0.0) || !g.is_finite() {
            return Err(SweepError::BadCoupling(g));
        }
        if i > 0 && g <= g_grid[i - 1] {
            return Err(SweepError::GridNotAscending {
                index: i,
                value: g,
                previous: g_grid[i - 1],
            });
        }
    }
    Ok(())
}

pub(crate) fn parse_worker_count(raw: Option<&str>) -> Result<Option<usize>, SweepError> {
    match raw {
        None => Ok(None),
        Some(text) if text.trim().is_empty() => Ok(None),
        Some(text) => match text.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(SweepError::BadWorkerCount(text.to_string())),
        },
    }
}

/// Run `task` over the indices 0..len on a worker pool sized by the
/// `FLOQUET_SSH_WORKERS` environment variable (default: all CPUs),
/// collecting results in index order.
fn run_indexed<T, F>(len: usize, task: F) -> Result<Vec<T>, SweepError>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let workers = parse_worker_count(std::env::var(WORKER_COUNT_ENV).ok().as_deref())?;
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SweepError::WorkerPool(e.to_string()))?;
            Ok(pool.install(|| (0..len).into_par_iter().map(task).collect()))
        }
        None => Ok((0..len).into_par_iter().map(task).collect()),
    }
}

/// Assemble the Floquet–Fourier matrix for one grid point.
fn assemble_point(
    geom: &ChainGeometry,
    drive: &DriveSpec,
    m_max: usize,
    method: AssemblyMethod,
    q: &QuadratureSettings,
    window_center: f64,
) -> Result<floquet::FloquetMatrix, FloquetError> {
    match method {
        AssemblyMethod::Analytic => match drive.kind() {
            DriveKind::Monochromatic => floquet::assemble_monochromatic(geom, drive, m_max),
            DriveKind::Beating { .. } => floquet::assemble_beating(geom, drive, m_max),
            DriveKind::Gaussian { .. } => unreachable!("rejected before dispatch"),
        },
        AssemblyMethod::Numeric => floquet::assemble_numeric_windowed(
            geom,
            drive,
            m_max,
            drive.base_frequency(),
            q,
            window_center,
        ),
    }
}

fn population_of(sol: &FloquetSolution, alpha: usize, def: PopulationDefinition) -> f64 {
    match def {
        PopulationDefinition::Central => sol.population_scalar(alpha),
        PopulationDefinition::Max => sol
            .populations()
            .row(alpha)
            .iter()
            .cloned()
            .fold(0.0, f64::max),
    }
}

fn rows_for_point(
    g: f64,
    geom: &ChainGeometry,
    drive_template: &DriveSpec,
    m_max: usize,
    method: AssemblyMethod,
    q: &QuadratureSettings,
    options: &SweepOptions,
) -> Result<Vec<SweepRow>, String> {
    let drive = drive_template.with_coupling(g).map_err(|e| e.to_string())?;
    let h = assemble_point(geom, &drive, m_max, method, q, options.window_center)
        .map_err(|e| e.to_string())?;
    let sol = floquet::diagonalize(&h).map_err(|e| e.to_string())?;
    let mut rows = Vec::with_capacity(sol.n_states());
    for alpha in 0..sol.n_states() {
        let edge_weight = edge_weight_from_site_probabilities(
            &sol.site_probabilities(alpha),
            geom,
            options.n_edge_cells,
        )
        .map_err(|e| e.to_string())?;
        let raw = sol.quasienergies()[alpha];
        rows.push(SweepRow {
            g,
            quasienergy: if options.fold {
                floquet::fold(raw, sol.base_frequency())
            } else {
                raw
            },
            population: population_of(&sol, alpha, options.population),
            edge_weight,
            state_index: alpha,
        });
    }
    rows.sort_by(|a, b| a.quasienergy.partial_cmp(&b.quasienergy).unwrap());
    Ok(rows)
}

/// Sweep the coupling over an ascending grid with explicit options.
pub fn sweep_g_with_options(
    geom: &ChainGeometry,
    drive_template: &DriveSpec,
    g_grid: &[f64],
    m_max: usize,
    method: AssemblyMethod,
    q: &QuadratureSettings,
    options: &SweepOptions,
) -> Result<SweepResult, SweepError> {
    validate_grid(g_grid)?;
    q.validate()?;
    // Fail fast on an edge window that cannot be evaluated, instead of
    // recording one failure per grid point.
    let limit = geom.n_dimers() / 2;
    if options.n_edge_cells == 0 || options.n_edge_cells > limit {
        return Err(SweepError::Lattice(LatticeError::BadEdgeCellCount {
            n_edge_cells: options.n_edge_cells,
            limit,
        }));
    }
    if method == AssemblyMethod::Analytic
        && matches!(drive_template.kind(), DriveKind::Gaussian { .. })
    {
        return Err(SweepError::NoAnalyticPath);
    }

    let point_results = run_indexed(g_grid.len(), |i| {
        rows_for_point(g_grid[i], geom, drive_template, m_max, method, q, options)
    })?;

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (i, outcome) in point_results.into_iter().enumerate() {
        match outcome {
            Ok(mut point_rows) => rows.append(&mut point_rows),
            Err(message) => failures.push(SweepFailure { g: g_grid[i], message }),
        }
    }
    Ok(SweepResult {
        rows,
        failures,
        metadata: SweepMetadata {
            geometry: *geom,
            drive: *drive_template,
            m_max,
            base_frequency: drive_template.base_frequency(),
            method,
            quadrature: *q,
            options: *options,
            code_version: env!("CARGO_PKG_VERSION"),
        },
    })
}

/// Sweep the coupling over an ascending grid with default options
/// (central-replica population, two edge cells, peak-centered window).
pub fn sweep_g(
    geom: &ChainGeometry,
    drive_template: &DriveSpec,
    g_grid: &[f64],
    m_max: usize,
    method: AssemblyMethod,
    q: &QuadratureSettings,
) -> Result<SweepResult, SweepError> {
    sweep_g_with_options(
        geom,
        drive_template,
        g_grid,
        m_max,
        method,
        q,
        &SweepOptions::default(),
    )
}

/// Indices of Floquet states that qualify as edge states: folded
/// quasienergy inside the energy window, edge weight above the threshold,
/// and population concentrated on the central replica. The last filter
/// removes the folded copies that every physical state leaves on the
/// other replicas, so an undriven topological chain reports exactly its
/// two zero modes.
pub fn detect_edge_states(
    sol: &FloquetSolution,
    geom: &ChainGeometry,
    energy_window: f64,
    weight_threshold: f64,
    n_edge_cells: usize,
) -> Result<Vec<usize>, SweepError> {
    if !(weight_threshold > 0.0 && weight_threshold < 1.0) {
        return Err(SweepError::BadWeightThreshold(weight_threshold));
    }
    if !(energy_window > 0.0) || !energy_window.is_finite() {
        return Err(SweepError::BadEnergyWindow(energy_window));
    }
    let folded = sol.folded_quasienergies();
    let mut found = Vec::new();
    for (alpha, quasienergy) in folded.iter().enumerate() {
        if quasienergy.abs() >= energy_window {
            continue;
        }
        if sol.dominant_replica(alpha) != 0 {
            continue;
        }
        let weight =
            edge_weight_from_site_probabilities(&sol.site_probabilities(alpha), geom, n_edge_cells)?;
        if weight > weight_threshold {
            found.push(alpha);
        }
    }
    Ok(found)
}

/// Outcome of the analytic boundary search.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseBoundary {
    /// |v J_0(r g)| = |w J_0((1-r) g)| holds identically (v = w, r = 1/2):
    /// every coupling sits on the boundary.
    DegenerateEverywhere,
    /// Ascending roots in (0, g_max].
    Roots(Vec<f64>),
}

/// Tolerance to which each boundary root is bisected.
pub const BOUNDARY_ROOT_TOLERANCE: f64 = 1e-10;

/// Couplings where the zeroth-harmonic (high-frequency) hoppings balance:
/// |v J_0(r g)| = |w J_0((1-r) g)|, the topological phase boundary of the
/// central-block approximation.
pub fn phase_boundary(v: f64, w: f64, r: f64, g_max: f64) -> Result<PhaseBoundary, SweepError> {
    // Constructing a geometry validates v, w, r with the usual invariants.
    let _ = ChainGeometry::new(2, v, w, r)?;
    if !(g_max > 0.0) || g_max > specfun::MAX_BESSEL_ARGUMENT {
        return Err(SweepError::BoundarySearchLimit {
            got: g_max,
            max: specfun::MAX_BESSEL_ARGUMENT,
        });
    }
    if (v - w).abs() <= 1e-14 * w && (r - 0.5).abs() <= 1e-14 {
        return Ok(PhaseBoundary::DegenerateEverywhere);
    }

    let f = |g: f64| -> f64 {
        let intra = specfun::bessel_j(0, r * g).expect("argument within domain");
        let inter = specfun::bessel_j(0, (1.0 - r) * g).expect("argument within domain");
        (v * intra).abs() - (w * inter).abs()
    };

    // Scan for sign changes, then bisect each bracket. |J_0'| <= 1 bounds
    // the slope, so a millistep cannot jump over a simple-root pair.
    let step = 1e-3;
    let n_steps = (g_max / step).ceil() as usize;
    let mut roots = Vec::new();
    let mut g_left = step.min(g_max);
    let mut f_left = f(g_left);
    for i in 1..=n_steps {
        let g_right = (step + i as f64 * step).min(g_max);
        if g_right <= g_left {
            break;
        }
        let f_right = f(g_right);
        if f_left == 0.0 {
            roots.push(g_left);
        } else if f_left * f_right < 0.0 {
            let (mut lo, mut hi) = (g_left, g_right);
            let mut f_lo = f_left;
            while hi - lo > BOUNDARY_ROOT_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                let f_mid = f(mid);
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if f_lo * f_mid < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = f_mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        g_left = g_right;
        f_left = f_right;
    }
    if f_left == 0.0 && roots.last().is_none_or(|&r0| g_left - r0 > step / 2.0) {
        roots.push(g_left);
    }
    Ok(PhaseBoundary::Roots(roots))
}
