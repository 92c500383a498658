//! Static SSH chain: geometry, Hamiltonian assembly, edge-localization
//! metrics, and the analytic bulk bands for (possibly renormalized)
//! hoppings.
//!
//! Basis ordering is cell-major, sublattice-minor: site index
//! `2*(l-1) + 0` for the A site and `2*(l-1) + 1` for the B site of cell
//! `l` (1-based cells). Inter-cell bonds connect B of cell `l` to A of
//! cell `l+1`. The inter-cell hopping `w` is the energy unit throughout.

use ndarray::{Array1, Array2};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("n_dimers must be >= 1, got {0}")]
    BadDimerCount(usize),
    #[error("intra-cell hopping v must satisfy v >= 0, got {0}")]
    NegativeIntraHopping(f64),
    #[error("inter-cell hopping w must satisfy w > 0, got {0}")]
    NonPositiveInterHopping(f64),
    #[error("dimer separation ratio r must satisfy 0 <= r < 1, got {0}")]
    SeparationOutOfRange(f64),
    #[error("state has squared norm {norm}, expected 1 within 1e-12")]
    UnnormalizedState { norm: f64 },
    #[error("state length {len} does not match 2 * n_dimers = {expected}")]
    DimensionMismatch { len: usize, expected: usize },
    #[error("n_edge_cells = {n_edge_cells} must be >= 1 and <= n_dimers / 2 = {limit}")]
    BadEdgeCellCount { n_edge_cells: usize, limit: usize },
}

/// Sublattice label inside a unit cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sublattice {
    A,
    B,
}

/// Open SSH chain of `n_dimers` unit cells with intra-cell hopping `v`,
/// inter-cell hopping `w` (the energy unit), and dimer separation ratio
/// `r = b/a` entering the drive phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainGeometry {
    n_dimers: usize,
    v: f64,
    w: f64,
    r: f64,
}

impl ChainGeometry {
    pub fn new(n_dimers: usize, v: f64, w: f64, r: f64) -> Result<Self, LatticeError> {
        if n_dimers < 1 {
            return Err(LatticeError::BadDimerCount(n_dimers));
        }
        if !(v >= 0.0) || !v.is_finite() {
            return Err(LatticeError::NegativeIntraHopping(v));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(LatticeError::NonPositiveInterHopping(w));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(LatticeError::SeparationOutOfRange(r));
        }
        Ok(ChainGeometry { n_dimers, v, w, r })
    }

    pub fn n_dimers(&self) -> usize {
        self.n_dimers
    }

    /// Number of sites, 2N.
    pub fn n_sites(&self) -> usize {
        2 * self.n_dimers
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Site index of (cell, sublattice); cells are 1-based.
    pub fn site_index(&self, cell: usize, sub: Sublattice) -> usize {
        debug_assert!((1..=self.n_dimers).contains(&cell));
        2 * (cell - 1)
            + match sub {
                Sublattice::A => 0,
                Sublattice::B => 1,
            }
    }
}

/// Normalized state on the chain, amplitudes indexed like the Hamiltonian.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: Array1<num_complex::Complex64>,
}

impl StateVector {
    /// Wraps amplitudes, enforcing normalization to 1 within 1e-12.
    pub fn new(amplitudes: Array1<num_complex::Complex64>) -> Result<Self, LatticeError> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(LatticeError::UnnormalizedState { norm });
        }
        Ok(StateVector { amplitudes })
    }

    pub fn amplitudes(&self) -> &Array1<num_complex::Complex64> {
        &self.amplitudes
    }

    /// Site-resolved probabilities |psi_i|^2.
    pub fn site_probabilities(&self) -> Array1<f64> {
        self.amplitudes.mapv(|a| a.norm_sqr())
    }
}

/// Static SSH Hamiltonian: v on intra-cell bonds, w on inter-cell bonds,
/// zero diagonal. Real symmetric, dimension 2N.
pub fn build_static_hamiltonian(geom: &ChainGeometry) -> Array2<f64> {
    let n = geom.n_dimers();
    let mut h = Array2::zeros((2 * n, 2 * n));
    for cell in 1..=n {
        let a = geom.site_index(cell, Sublattice::A);
        let b = geom.site_index(cell, Sublattice::B);
        h[[a, b]] = geom.v();
        h[[b, a]] = geom.v();
        if cell < n {
            let a_next = geom.site_index(cell + 1, Sublattice::A);
            h[[b, a_next]] = geom.w();
            h[[a_next, b]] = geom.w();
        }
    }
    h
}

/// Probability carried by the first and last `n_edge_cells` unit cells of a
/// normalized state: the localization diagnostic for edge states.
pub fn edge_weight(
    state: &StateVector,
    geom: &ChainGeometry,
    n_edge_cells: usize,
) -> Result<f64, LatticeError> {
    let probs = state.site_probabilities();
    edge_weight_from_site_probabilities(probs.as_slice().unwrap(), geom, n_edge_cells)
}

/// Same as [`edge_weight`], operating on site-resolved probabilities that
/// may come from a replica-summed Floquet eigenvector.
pub fn edge_weight_from_site_probabilities(
    probs: &[f64],
    geom: &ChainGeometry,
    n_edge_cells: usize,
) -> Result<f64, LatticeError> {
    if probs.len() != geom.n_sites() {
        return Err(LatticeError::DimensionMismatch {
            len: probs.len(),
            expected: geom.n_sites(),
        });
    }
    let limit = geom.n_dimers() / 2;
    if n_edge_cells == 0 || n_edge_cells > limit {
        return Err(LatticeError::BadEdgeCellCount { n_edge_cells, limit });
    }
    let mut total = 0.0;
    for cell in 1..=n_edge_cells {
        let left = cell;
        let right = geom.n_dimers() + 1 - cell;
        for sub in [Sublattice::A, Sublattice::B] {
            total += probs[geom.site_index(left, sub)];
            total += probs[geom.site_index(right, sub)];
        }
    }
    // The edge region of a short chain can cover every site, where the
    // probability sum may exceed 1 by rounding; keep the weight a weight.
    Ok(total.min(1.0))
}

/// Bulk band energies (-E, +E) with E = sqrt(v^2 + w^2 + 2 v w cos q) for
/// effective hoppings, q in [-pi, pi].
pub fn bulk_bands(v_eff: f64, w_eff: f64, q: f64) -> (f64, f64) {
    let e2 = v_eff * v_eff + w_eff * w_eff + 2.0 * v_eff * w_eff * q.cos();
    // Guard the tiny negative values that roundoff can produce at the gap
    // closing v_eff = w_eff, q = pi.
    let e = e2.max(0.0).sqrt();
    (-e, e)
}
