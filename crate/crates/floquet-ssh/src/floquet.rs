//! Floquet–Fourier block Hamiltonian: assembly (analytic Bessel paths for
//! the monochromatic and commensurate beating drives, quadrature path for
//! every drive), dense Hermitian diagonalization, replica populations,
//! quasienergy folding, and two independent one-period propagators used to
//! cross-validate the spectra.
//!
//! Replica layout: for cutoff M the matrix holds 2M+1 blocks of size 2N,
//! ordered m = -M..=M, so block index b = m + M and the central (m = 0)
//! block sits at b = M. Block (m, m') carries the hop Fourier coefficient
//! of harmonic n = m' - m, and the m = m' blocks are shifted by -m * Omega.
//!
//! Hop coefficient convention: chi_n[p] is the coefficient of e^{+i n W t}
//! in the expansion of the hopping phase factor p(t), so chi_n[p] =
//! (1/T) int p(t) e^{-i n W t} dt. The coefficient chi_n[p_w] multiplies
//! the forward inter-cell entry (row A_{l+1}, column B_l) and chi_n[p_v]
//! the intra-cell entry (row A_l, column B_l); the transposed entries carry
//! conj(chi_{-n}), which makes the assembled matrix Hermitian exactly.

use crate::drive::{potential_matrix, DriveKind, DriveSpec};
use crate::lattice::{build_static_hamiltonian, ChainGeometry, Sublattice};
use crate::linalg::{self, LinalgError};
use crate::specfun::{self, QuadratureSettings, SpecFunError};
use ndarray::{s, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance below which the largest imaginary part of an assembled matrix
/// is treated as roundoff, enabling the real-symmetric eigensolver.
const REAL_DETECT_TOLERANCE: f64 = 1e-12;

/// Commensurability tolerance for the analytic beating path: the tone
/// ratio (W + w_env)/(W - w_env) must be an integer to this accuracy.
const COMMENSURABILITY_TOLERANCE: f64 = 1e-9;

/// Extra orders kept in the double Bessel expansion of the beating drive
/// beyond the replica cutoff; Bessel decay past order ~ |argument| makes
/// the tail contribution negligible for the coupling range studied.
const BEATING_EXTRA_ORDERS: usize = 10;

/// Acceptable departure of the one-period propagator from unitarity.
const UNITARITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum FloquetError {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("base frequency must be positive, got {0}")]
    NonPositiveBaseFrequency(f64),
    #[error("matrix is not Hermitian: defect {defect:e} exceeds 1e-12")]
    NotHermitian { defect: f64 },
    #[error("expected a {expected} drive, got {got}")]
    WrongDriveKind { expected: &'static str, got: &'static str },
    #[error(
        "beating tones are incommensurate (tone ratio {ratio} is {deviation:e} from an integer); \
         use the quadrature assembly instead"
    )]
    IncommensurateBeating { ratio: f64, deviation: f64 },
    #[error("drive is not periodic ({reason}); use the transformed-frame window propagator")]
    NotPeriodic { reason: &'static str },
    #[error("propagation steps must be at least 2, got {0}")]
    TooFewSteps(usize),
    #[error(
        "propagator unitarity defect {defect:e} exceeds {UNITARITY_TOLERANCE:e} after {steps} \
         steps; increase the step count"
    )]
    UnitarityDefect { defect: f64, steps: usize },
}

fn drive_kind_name(kind: DriveKind) -> &'static str {
    match kind {
        DriveKind::Monochromatic => "monochromatic",
        DriveKind::Gaussian { .. } => "Gaussian",
        DriveKind::Beating { .. } => "beating",
    }
}

/// The assembled Floquet–Fourier Hamiltonian.
#[derive(Debug, Clone)]
pub struct FloquetMatrix {
    m_max: usize,
    base_frequency: f64,
    n_sites: usize,
    matrix: Array2<Complex64>,
}

impl FloquetMatrix {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn base_frequency(&self) -> f64 {
        self.base_frequency
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_blocks(&self) -> usize {
        2 * self.m_max + 1
    }

    pub fn dim(&self) -> usize {
        self.n_sites * self.n_blocks()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// View of block (m, m'), each index in -M..=M.
    pub fn block(&self, m: i32, m_prime: i32) -> ArrayView2<'_, Complex64> {
        let m_max = self.m_max as i32;
        assert!(
            m.abs() <= m_max && m_prime.abs() <= m_max,
            "replica indices ({m}, {m_prime}) outside +-{m_max}"
        );
        let b = (m + m_max) as usize * self.n_sites;
        let bp = (m_prime + m_max) as usize * self.n_sites;
        self.matrix
            .slice(s![b..b + self.n_sites, bp..bp + self.n_sites])
    }

    /// Largest |H - H^dagger| entry; zero by construction for assembled
    /// matrices, nonzero only for hand-built inputs.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Largest imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        self.matrix.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Build directly from a matrix; used by tests that perturb entries.
    pub fn from_parts(
        m_max: usize,
        base_frequency: f64,
        n_sites: usize,
        matrix: Array2<Complex64>,
    ) -> Self {
        assert_eq!(matrix.nrows(), n_sites * (2 * m_max + 1));
        assert_eq!(matrix.ncols(), matrix.nrows());
        FloquetMatrix { m_max, base_frequency, n_sites, matrix }
    }
}

/// Core assembly: place hop coefficients chi_v(n), chi_w(n) into every
/// block pair with n = m' - m and add the replica shift -m * Omega_base.
pub(crate) fn assemble_from_hop_coefficients(
    geom: &ChainGeometry,
    chi_v: &dyn Fn(i32) -> Complex64,
    chi_w: &dyn Fn(i32) -> Complex64,
    m_max: usize,
    base_frequency: f64,
) -> FloquetMatrix {
    let n_cells = geom.n_dimers();
    let n_sites = geom.n_sites();
    let n_blocks = 2 * m_max + 1;
    let dim = n_sites * n_blocks;
    let (v, w) = (geom.v(), geom.w());
    let mut h = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));

    for b in 0..n_blocks {
        let m = b as i32 - m_max as i32;
        for bp in 0..n_blocks {
            let n = bp as i32 - b as i32; // harmonic m' - m
            let cv = v * chi_v(n);
            let cv_t = v * chi_v(-n).conj();
            let cw = w * chi_w(n);
            let cw_t = w * chi_w(-n).conj();
            let (row0, col0) = (b * n_sites, bp * n_sites);
            for cell in 1..=n_cells {
                let ia = geom.site_index(cell, Sublattice::A);
                let ib = geom.site_index(cell, Sublattice::B);
                h[[row0 + ia, col0 + ib]] += cv;
                h[[row0 + ib, col0 + ia]] += cv_t;
                if cell < n_cells {
                    let ia_next = geom.site_index(cell + 1, Sublattice::A);
                    h[[row0 + ia_next, col0 + ib]] += cw;
                    h[[row0 + ib, col0 + ia_next]] += cw_t;
                }
            }
            if b == bp {
                let shift = Complex64::new(-(m as f64) * base_frequency, 0.0);
                for i in 0..n_sites {
                    h[[row0 + i, col0 + i]] += shift;
                }
            }
        }
    }
    FloquetMatrix { m_max, base_frequency, n_sites, matrix: h }
}

/// Signed-order, signed-argument Bessel value from a table of J_k(|x|),
/// k = 0..=k_max, using J_{-k}(x) = (-1)^k J_k(x) and
/// J_k(-x) = (-1)^k J_k(x). Orders beyond the table are treated as zero
/// (they are below the truncation threshold by construction).
fn bessel_signed(table: &[f64], order: i32, x_negative: bool) -> f64 {
    let k = order.unsigned_abs() as usize;
    if k >= table.len() {
        return 0.0;
    }
    let mut sign = 1.0;
    if order < 0 && k % 2 == 1 {
        sign = -sign;
    }
    if x_negative && k % 2 == 1 {
        sign = -sign;
    }
    sign * table[k]
}

/// Analytic assembly for the monochromatic drive. The phase integral is
/// s(t) = sin(W t), so the hop coefficients are single Bessel values:
/// chi_n[p_v] = J_n(-g') = (-1)^n J_n(g') and chi_n[p_w] = J_n(g'').
pub fn assemble_monochromatic(
    geom: &ChainGeometry,
    d: &DriveSpec,
    m_max: usize,
) -> Result<FloquetMatrix, FloquetError> {
    if !matches!(d.kind(), DriveKind::Monochromatic) {
        return Err(FloquetError::WrongDriveKind {
            expected: "monochromatic",
            got: drive_kind_name(d.kind()),
        });
    }
    let g_intra = geom.r() * d.g();
    let g_inter = (1.0 - geom.r()) * d.g();
    let n_max = 2 * m_max; // largest harmonic coupling two kept replicas
    let jv = specfun::bessel_j_array(n_max, g_intra)?;
    let jw = specfun::bessel_j_array(n_max, g_inter)?;
    let chi_v = move |n: i32| Complex64::new(bessel_signed(&jv, n, true), 0.0);
    let chi_w = move |n: i32| Complex64::new(bessel_signed(&jw, n, false), 0.0);
    Ok(assemble_from_hop_coefficients(
        geom,
        &chi_v,
        &chi_w,
        m_max,
        d.omega_drive(),
    ))
}

/// Quadrature assembly over the window [center - T/2, center + T/2] with
/// T = 2 pi / base_frequency. For periodic drives the window position is
/// immaterial; for the Gaussian pulse it selects which stretch of the
/// envelope the periodized coefficients represent (default: centered on
/// the pulse peak, see [`assemble_numeric`]).
pub fn assemble_numeric_windowed(
    geom: &ChainGeometry,
    d: &DriveSpec,
    m_max: usize,
    base_frequency: f64,
    q: &QuadratureSettings,
    window_center: f64,
) -> Result<FloquetMatrix, FloquetError> {
    if !(base_frequency > 0.0) || !base_frequency.is_finite() {
        return Err(FloquetError::NonPositiveBaseFrequency(base_frequency));
    }
    let base_period = 2.0 * std::f64::consts::PI / base_frequency;
    let t_start = window_center - base_period / 2.0;
    let n_max = 2 * m_max as i32;

    let g_intra = geom.r() * d.g();
    let g_inter = (1.0 - geom.r()) * d.g();
    let drive = *d;
    // Phase factors sampled on the shifted window; the projection below is
    // corrected back to absolute time by the shift theorem.
    let pv = |u: f64| -> Complex64 {
        let s = drive.phase_integral(u + t_start).expect("phase integral");
        Complex64::cis(-g_intra * s)
    };
    let pw = |u: f64| -> Complex64 {
        let s = drive.phase_integral(u + t_start).expect("phase integral");
        Complex64::cis(g_inter * s)
    };
    let av = specfun::fourier_coefficients(pv, base_period, -n_max..=n_max, q)?;
    let aw = specfun::fourier_coefficients(pw, base_period, -n_max..=n_max, q)?;

    // chi_n = a_{-n} e^{-i n W t_start}: a_n projects onto e^{-i n W u} on
    // the shifted window, chi_n is the e^{+i n W t} coefficient in
    // absolute time.
    let chi_v =
        move |n: i32| av.get(-n) * Complex64::cis(-(n as f64) * base_frequency * t_start);
    let chi_w =
        move |n: i32| aw.get(-n) * Complex64::cis(-(n as f64) * base_frequency * t_start);
    Ok(assemble_from_hop_coefficients(
        geom,
        &chi_v,
        &chi_w,
        m_max,
        base_frequency,
    ))
}

/// Quadrature assembly with the default window, centered at t = 0: for the
/// monochromatic and beating drives any full period is equivalent; for the
/// Gaussian pulse this centers the window on the envelope peak.
///
/// Use base_frequency = W for the monochromatic and Gaussian drives and
/// the lower tone W - w_env for the beating drive.
pub fn assemble_numeric(
    geom: &ChainGeometry,
    d: &DriveSpec,
    m_max: usize,
    base_frequency: f64,
    q: &QuadratureSettings,
) -> Result<FloquetMatrix, FloquetError> {
    assemble_numeric_windowed(geom, d, m_max, base_frequency, q, 0.0)
}

/// Analytic assembly for the commensurate beating drive. The phase
/// integral is a sum of two tones, so each phase factor expands into a
/// double Bessel series; harmonics of the lower tone W_- collect every
/// order pair (m1, m2) with m1 * (W_+/W_-) + m2 = n.
pub fn assemble_beating(
    geom: &ChainGeometry,
    d: &DriveSpec,
    m_max: usize,
) -> Result<FloquetMatrix, FloquetError> {
    let (omega_plus, omega_minus) = d.beating_tones().ok_or(FloquetError::WrongDriveKind {
        expected: "beating",
        got: drive_kind_name(d.kind()),
    })?;
    let ratio = omega_plus / omega_minus;
    let k = ratio.round();
    let deviation = (ratio - k).abs();
    if deviation > COMMENSURABILITY_TOLERANCE || k < 1.0 {
        return Err(FloquetError::IncommensurateBeating { ratio, deviation });
    }
    let k = k as i64;

    let omega = d.omega_drive();
    let g_intra = geom.r() * d.g();
    let g_inter = (1.0 - geom.r()) * d.g();
    // Tone amplitudes in the phase integral: s(t) = (W/2W_+) sin(W_+ t)
    //                                              + (W/2W_-) sin(W_- t).
    let amp_plus = omega / (2.0 * omega_plus);
    let amp_minus = omega / (2.0 * omega_minus);

    let m_inner = m_max + BEATING_EXTRA_ORDERS;
    // p_v = exp(-i g' s): tone arguments -g' W/(2 W_+-); p_w = exp(+i g'' s).
    let zv_plus = -g_intra * amp_plus;
    let zv_minus = -g_intra * amp_minus;
    let zw_plus = g_inter * amp_plus;
    let zw_minus = g_inter * amp_minus;
    let jv_plus = specfun::bessel_j_array(m_inner, zv_plus.abs())?;
    let jv_minus = specfun::bessel_j_array(m_inner, zv_minus.abs())?;
    let jw_plus = specfun::bessel_j_array(m_inner, zw_plus.abs())?;
    let jw_minus = specfun::bessel_j_array(m_inner, zw_minus.abs())?;

    let n_max = 2 * m_max as i32;
    let sum_orders = |n: i32, j_plus: &[f64], plus_neg: bool, j_minus: &[f64], minus_neg: bool| {
        let mut acc = 0.0;
        for m1 in -(m_inner as i64)..=(m_inner as i64) {
            let m2 = n as i64 - k * m1;
            if m2.unsigned_abs() as usize > m_inner {
                continue;
            }
            acc += bessel_signed(j_plus, m1 as i32, plus_neg)
                * bessel_signed(j_minus, m2 as i32, minus_neg);
        }
        acc
    };
    let mut chi_v_table = Vec::with_capacity(2 * n_max as usize + 1);
    let mut chi_w_table = Vec::with_capacity(2 * n_max as usize + 1);
    for n in -n_max..=n_max {
        chi_v_table.push(Complex64::new(
            sum_orders(n, &jv_plus, zv_plus < 0.0, &jv_minus, zv_minus < 0.0),
            0.0,
        ));
        chi_w_table.push(Complex64::new(
            sum_orders(n, &jw_plus, zw_plus < 0.0, &jw_minus, zw_minus < 0.0),
            0.0,
        ));
    }
    let chi_v = move |n: i32| chi_v_table[(n + n_max) as usize];
    let chi_w = move |n: i32| chi_w_table[(n + n_max) as usize];
    Ok(assemble_from_hop_coefficients(
        geom,
        &chi_v,
        &chi_w,
        m_max,
        omega_minus,
    ))
}

/// Central-block (zeroth harmonic) approximation: the static chain with
/// hoppings renormalized to v J_0(g') and w J_0(g''). Valid when the drive
/// frequency dominates both hoppings.
pub fn h00_approx(geom: &ChainGeometry, g: f64) -> Result<Array2<f64>, FloquetError> {
    let j0_intra = specfun::bessel_j(0, geom.r() * g)?;
    let j0_inter = specfun::bessel_j(0, (1.0 - geom.r()) * g)?;
    let mut h = build_static_hamiltonian(geom);
    for cell in 1..=geom.n_dimers() {
        let ia = geom.site_index(cell, Sublattice::A);
        let ib = geom.site_index(cell, Sublattice::B);
        h[[ia, ib]] *= j0_intra;
        h[[ib, ia]] *= j0_intra;
        if cell < geom.n_dimers() {
            let ia_next = geom.site_index(cell + 1, Sublattice::A);
            h[[ia_next, ib]] *= j0_inter;
            h[[ib, ia_next]] *= j0_inter;
        }
    }
    Ok(h)
}

/// Eigendecomposition of a Floquet–Fourier matrix with replica-resolved
/// populations.
#[derive(Debug, Clone)]
pub struct FloquetSolution {
    m_max: usize,
    base_frequency: f64,
    n_sites: usize,
    quasienergies: Vec<f64>,
    /// Row alpha holds eigenvector alpha over the full replica space.
    eigenvectors: Array2<Complex64>,
    /// populations[[alpha, b]] = squared norm of the replica-b component.
    populations: Array2<f64>,
}

impl FloquetSolution {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn base_frequency(&self) -> f64 {
        self.base_frequency
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_states(&self) -> usize {
        self.quasienergies.len()
    }

    /// Eigenvalues of the block matrix, ascending, unfolded.
    pub fn quasienergies(&self) -> &[f64] {
        &self.quasienergies
    }

    /// Eigenvalues folded into the first zone [-W/2, W/2).
    pub fn folded_quasienergies(&self) -> Vec<f64> {
        fold_all(&self.quasienergies, self.base_frequency)
    }

    pub fn eigenvector(&self, alpha: usize) -> ArrayView1<'_, Complex64> {
        self.eigenvectors.row(alpha)
    }

    /// Component of eigenvector alpha on replica m (length 2N).
    pub fn replica_component(&self, alpha: usize, m: i32) -> ArrayView1<'_, Complex64> {
        let m_max = self.m_max as i32;
        assert!(m.abs() <= m_max, "replica index {m} outside +-{m_max}");
        let b = (m + m_max) as usize * self.n_sites;
        self.eigenvectors.row(alpha).slice_move(s![b..b + self.n_sites])
    }

    /// populations[[alpha, m + M]] = p_{alpha, m}.
    pub fn populations(&self) -> &Array2<f64> {
        &self.populations
    }

    /// Weight of state alpha on the central (m = 0) replica: the scalar
    /// population reported by sweeps.
    pub fn population_scalar(&self, alpha: usize) -> f64 {
        self.populations[[alpha, self.m_max]]
    }

    /// Replica offset m carrying the largest population of state alpha;
    /// 0 means the central replica. Folded copies of one physical state
    /// differ precisely in this offset.
    pub fn dominant_replica(&self, alpha: usize) -> i32 {
        let row = self.populations.row(alpha);
        let mut best = 0usize;
        for (b, &p) in row.iter().enumerate() {
            if p > row[best] {
                best = b;
            }
        }
        best as i32 - self.m_max as i32
    }

    /// Period-averaged site probability distribution of state alpha
    /// (length 2N). Cross-replica interference averages out over one
    /// period, so this is the sum of per-replica site weights.
    pub fn site_probabilities(&self, alpha: usize) -> Vec<f64> {
        let mut probs = vec![0.0; self.n_sites];
        let row = self.eigenvectors.row(alpha);
        for b in 0..(2 * self.m_max + 1) {
            for site in 0..self.n_sites {
                probs[site] += row[b * self.n_sites + site].norm_sqr();
            }
        }
        probs
    }

    /// Largest |<u_a|u_b> - delta_ab| over all state pairs. Quadratic in
    /// the matrix dimension times the vector length; intended for tests on
    /// small systems.
    pub fn max_orthonormality_defect(&self) -> f64 {
        let n = self.n_states();
        let mut worst = 0.0_f64;
        for a in 0..n {
            let ua = self.eigenvectors.row(a);
            for b in a..n {
                let ub = self.eigenvectors.row(b);
                let mut overlap = Complex64::new(0.0, 0.0);
                for (x, y) in ua.iter().zip(ub.iter()) {
                    overlap += x.conj() * y;
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((overlap - target).norm());
            }
        }
        worst
    }
}

/// Dense Hermitian eigendecomposition of the Floquet–Fourier matrix.
/// Matrices whose imaginary parts are pure roundoff take the faster
/// real-symmetric path.
pub fn diagonalize(h: &FloquetMatrix) -> Result<FloquetSolution, FloquetError> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 {
        return Err(FloquetError::NotHermitian { defect });
    }
    let (quasienergies, eigenvectors) = if h.max_imag() < REAL_DETECT_TOLERANCE {
        let real = h.matrix().mapv(|z| z.re);
        let (vals, vecs) = linalg::eigh_real(&real)?;
        (vals, vecs.mapv(|x| Complex64::new(x, 0.0)))
    } else {
        linalg::eigh_complex(h.matrix())?
    };

    let n_states = quasienergies.len();
    let n_blocks = 2 * h.m_max() + 1;
    let mut populations = Array2::zeros((n_states, n_blocks));
    for alpha in 0..n_states {
        let row = eigenvectors.row(alpha);
        for b in 0..n_blocks {
            let mut p = 0.0;
            for site in 0..h.n_sites() {
                p += row[b * h.n_sites() + site].norm_sqr();
            }
            populations[[alpha, b]] = p;
        }
    }
    Ok(FloquetSolution {
        m_max: h.m_max(),
        base_frequency: h.base_frequency(),
        n_sites: h.n_sites(),
        quasienergies: quasienergies.to_vec(),
        eigenvectors,
        populations,
    })
}

/// Reduce a value into the first Floquet zone [-W/2, W/2), half-open.
pub fn fold(value: f64, omega_base: f64) -> f64 {
    (value + omega_base / 2.0).rem_euclid(omega_base) - omega_base / 2.0
}

/// Fold every value; the multiset cardinality is preserved.
pub fn fold_all(values: &[f64], omega_base: f64) -> Vec<f64> {
    values.iter().map(|&x| fold(x, omega_base)).collect()
}

/// Fixed-step 4th-order Runge–Kutta integration of i dU/dt = H(t) U from
/// t_start over `steps` steps of size `dt`, starting from the identity.
fn rk4_propagator<H>(dim: usize, t_start: f64, dt: f64, steps: usize, hamiltonian: H) -> Array2<Complex64>
where
    H: Fn(f64) -> Array2<Complex64>,
{
    let mut u = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
    for i in 0..dim {
        u[[i, i]] = Complex64::new(1.0, 0.0);
    }
    let minus_i = Complex64::new(0.0, -1.0);
    for step in 0..steps {
        let t = t_start + step as f64 * dt;
        let h0 = hamiltonian(t);
        let h_mid = hamiltonian(t + dt / 2.0);
        let h1 = hamiltonian(t + dt);
        let k1 = h0.dot(&u).mapv(|z| minus_i * z);
        let k2 = h_mid.dot(&(&u + &k1.mapv(|z| z * (dt / 2.0)))).mapv(|z| minus_i * z);
        let k3 = h_mid.dot(&(&u + &k2.mapv(|z| z * (dt / 2.0)))).mapv(|z| minus_i * z);
        let k4 = h1.dot(&(&u + &k3.mapv(|z| z * dt))).mapv(|z| minus_i * z);
        u = &u + &(k1 + k2.mapv(|z| 2.0 * z) + k3.mapv(|z| 2.0 * z) + k4).mapv(|z| z * (dt / 6.0));
    }
    u
}

fn unitarity_defect(u: &Array2<Complex64>) -> f64 {
    let n = u.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += u[[k, i]].conj() * u[[k, j]];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

/// Lab-frame one-period propagator: time-ordered integration of
/// i dU/dt = [H_S + V(t)] U over [0, base_period]. Only drives that are
/// genuinely periodic over the given period qualify (monochromatic, or
/// beating with commensurate tones); the Gaussian pulse is rejected.
pub fn propagate_one_period(
    geom: &ChainGeometry,
    d: &DriveSpec,
    base_period: f64,
    steps: usize,
) -> Result<Array2<Complex64>, FloquetError> {
    if let DriveKind::Gaussian { .. } = d.kind() {
        return Err(FloquetError::NotPeriodic {
            reason: "the Gaussian pulse envelope is not periodic",
        });
    }
    if steps < 2 {
        return Err(FloquetError::TooFewSteps(steps));
    }
    let h_static = build_static_hamiltonian(geom).mapv(|x| Complex64::new(x, 0.0));
    let dt = base_period / steps as f64;
    let u = rk4_propagator(geom.n_sites(), 0.0, dt, steps, |t| {
        let mut h = h_static.clone();
        let v = potential_matrix(geom, d, t);
        for i in 0..geom.n_sites() {
            h[[i, i]] += v[[i, i]];
        }
        h
    });
    let defect = unitarity_defect(&u);
    if defect > UNITARITY_TOLERANCE {
        return Err(FloquetError::UnitarityDefect { defect, steps });
    }
    Ok(u)
}

/// Transformed-frame propagator over the window
/// [center - T/2, center + T/2]: integrates the hopping-dressed chain
/// whose matrix elements are v p_v(t) and w p_w(t) on the forward bonds.
/// Defined for every drive kind; for the Gaussian pulse this is the
/// propagator of the periodized window Hamiltonian that the windowed
/// quadrature assembly represents, which makes it the cross-check oracle
/// for [`assemble_numeric_windowed`].
pub fn propagate_transformed(
    geom: &ChainGeometry,
    d: &DriveSpec,
    base_period: f64,
    window_center: f64,
    steps: usize,
) -> Result<Array2<Complex64>, FloquetError> {
    if steps < 2 {
        return Err(FloquetError::TooFewSteps(steps));
    }
    if !(base_period > 0.0) || !base_period.is_finite() {
        return Err(FloquetError::NonPositiveBaseFrequency(base_period));
    }
    let n_cells = geom.n_dimers();
    let n_sites = geom.n_sites();
    let (v, w) = (geom.v(), geom.w());
    let dt = base_period / steps as f64;
    let t_start = window_center - base_period / 2.0;
    let u = rk4_propagator(n_sites, t_start, dt, steps, |t| {
        let (pv, pw) = d.hopping_modulations(geom, t).expect("phase integral");
        let mut h = Array2::from_elem((n_sites, n_sites), Complex64::new(0.0, 0.0));
        for cell in 1..=n_cells {
            let ia = geom.site_index(cell, Sublattice::A);
            let ib = geom.site_index(cell, Sublattice::B);
            h[[ia, ib]] = v * pv;
            h[[ib, ia]] = v * pv.conj();
            if cell < n_cells {
                let ia_next = geom.site_index(cell + 1, Sublattice::A);
                h[[ia_next, ib]] = w * pw;
                h[[ib, ia_next]] = w * pw.conj();
            }
        }
        h
    });
    let defect = unitarity_defect(&u);
    if defect > UNITARITY_TOLERANCE {
        return Err(FloquetError::UnitarityDefect { defect, steps });
    }
    Ok(u)
}

/// Quasienergies from a one-period propagator: eigenphases
/// -arg(lambda)/T folded into the first zone, ascending.
pub fn quasienergies_from_propagator(
    u: &Array2<Complex64>,
    base_period: f64,
) -> Result<Vec<f64>, FloquetError> {
    if !(base_period > 0.0) || !base_period.is_finite() {
        return Err(FloquetError::NonPositiveBaseFrequency(base_period));
    }
    let eigenvalues = linalg::eigvals_complex(u)?;
    let omega_base = 2.0 * std::f64::consts::PI / base_period;
    let mut quasi: Vec<f64> = eigenvalues
        .iter()
        .map(|lambda| fold(-lambda.arg() / base_period, omega_base))
        .collect();
    quasi.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(quasi)
}
