//! Driving protocols: electric-field profiles, the dimensionless phase
//! integral s(t) that dresses the hoppings in the transformed frame, the
//! diagonal frame unitary P(t), and the lab-frame dipole potential V(t)
//! used by the propagator oracle.
//!
//! Units: hbar = 1 and the inter-cell hopping w is the energy unit, so
//! frequencies are in w and times in 1/w. The coupling g = e a E_0 / hbar
//! Omega is dimensionless; all drive energies enter through g * Omega.
//!
//! Conventions (fixed once, verified by the frame-equivalence test):
//! s(0) = 0 for periodic drives, s(-inf) = 0 for the Gaussian pulse, which
//! is centered at t = 0; fields start as cosines at t = 0.

use crate::lattice::{ChainGeometry, Sublattice};
use crate::specfun::{self, SpecFunError};
use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriveError {
    #[error("coupling g must satisfy g >= 0, got {0}")]
    NegativeCoupling(f64),
    #[error("drive frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("Gaussian width ratio c must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("envelope frequency must satisfy 0 < omega_env < omega_drive, got {omega_env} (drive {omega_drive})")]
    EnvelopeOutOfRange { omega_env: f64, omega_drive: f64 },
}

/// Drive protocol. The envelope parameters live with the kind: a Gaussian
/// pulse carries the width ratio c = Omega/Gamma, a beating drive carries
/// the envelope frequency omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveKind {
    Monochromatic,
    Gaussian { c: f64 },
    Beating { omega_env: f64 },
}

/// A drive protocol with coupling strength and carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    kind: DriveKind,
    g: f64,
    omega_drive: f64,
}

impl DriveSpec {
    pub fn monochromatic(g: f64, omega_drive: f64) -> Result<Self, DriveError> {
        Self::new(DriveKind::Monochromatic, g, omega_drive)
    }

    pub fn gaussian(g: f64, omega_drive: f64, c: f64) -> Result<Self, DriveError> {
        Self::new(DriveKind::Gaussian { c }, g, omega_drive)
    }

    pub fn beating(g: f64, omega_drive: f64, omega_env: f64) -> Result<Self, DriveError> {
        Self::new(DriveKind::Beating { omega_env }, g, omega_drive)
    }

    pub fn new(kind: DriveKind, g: f64, omega_drive: f64) -> Result<Self, DriveError> {
        if !(g >= 0.0) || !g.is_finite() {
            return Err(DriveError::NegativeCoupling(g));
        }
        if !(omega_drive > 0.0) || !omega_drive.is_finite() {
            return Err(DriveError::NonPositiveFrequency(omega_drive));
        }
        match kind {
            DriveKind::Monochromatic => {}
            DriveKind::Gaussian { c } => {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(DriveError::NonPositiveWidth(c));
                }
            }
            DriveKind::Beating { omega_env } => {
                if !(omega_env > 0.0 && omega_env < omega_drive) {
                    return Err(DriveError::EnvelopeOutOfRange { omega_env, omega_drive });
                }
            }
        }
        Ok(DriveSpec { kind, g, omega_drive })
    }

    pub fn kind(&self) -> DriveKind {
        self.kind
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega_drive(&self) -> f64 {
        self.omega_drive
    }

    /// Same drive with a different coupling; used by sweeps.
    pub fn with_coupling(&self, g: f64) -> Result<Self, DriveError> {
        Self::new(self.kind, g, self.omega_drive)
    }

    /// The two-tone frequencies Omega +- omega of a beating drive.
    pub fn beating_tones(&self) -> Option<(f64, f64)> {
        match self.kind {
            DriveKind::Beating { omega_env } => {
                Some((self.omega_drive + omega_env, self.omega_drive - omega_env))
            }
            _ => None,
        }
    }

    /// Frequency that sets the Floquet replica spacing: Omega for the
    /// monochromatic and Gaussian drives, the lower tone Omega_- = Omega -
    /// omega for the beating drive (the beat pattern repeats on that
    /// slower clock when the tones are commensurate).
    pub fn base_frequency(&self) -> f64 {
        match self.kind {
            DriveKind::Beating { omega_env } => self.omega_drive - omega_env,
            _ => self.omega_drive,
        }
    }

    pub fn base_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.base_frequency()
    }

    /// Field envelope profile E(t)/E_0.
    pub fn field_profile(&self, t: f64) -> f64 {
        let omega = self.omega_drive;
        match self.kind {
            DriveKind::Monochromatic => (omega * t).cos(),
            DriveKind::Gaussian { c } => {
                let gamma = omega / c;
                (-(gamma * t) * (gamma * t)).exp() * (omega * t).cos()
            }
            DriveKind::Beating { omega_env } => (omega * t).cos() * (omega_env * t).cos(),
        }
    }

    /// Dimensionless phase integral s(t) = Omega * int_0^t E(t')/E_0 dt',
    /// the quantity whose product with g', g'' phases the hoppings.
    pub fn phase_integral(&self, t: f64) -> Result<f64, SpecFunError> {
        let omega = self.omega_drive;
        Ok(match self.kind {
            DriveKind::Monochromatic => (omega * t).sin(),
            DriveKind::Gaussian { c } => specfun::gaussian_phase(omega * t, c)?,
            DriveKind::Beating { omega_env } => {
                let plus = omega + omega_env;
                let minus = omega - omega_env;
                omega / (2.0 * plus) * (plus * t).sin()
                    + omega / (2.0 * minus) * (minus * t).sin()
            }
        })
    }

    /// Intra- and inter-cell hopping phase factors in the transformed frame:
    /// p_v = exp(-i g' s(t)), p_w = exp(+i g'' s(t)), with g' = r g on the
    /// intra-cell bond (separation b = r a) and g'' = (1 - r) g on the
    /// inter-cell bond (separation a - b).
    pub fn hopping_modulations(
        &self,
        geom: &ChainGeometry,
        t: f64,
    ) -> Result<(Complex64, Complex64), SpecFunError> {
        let s = self.phase_integral(t)?;
        Ok(self.hopping_modulations_from_phase(geom, s))
    }

    /// The same phase factors for an externally supplied s value; lets the
    /// Fourier path and gauge tests drive the identical code.
    pub fn hopping_modulations_from_phase(
        &self,
        geom: &ChainGeometry,
        s: f64,
    ) -> (Complex64, Complex64) {
        let g_intra = geom.r() * self.g;
        let g_inter = (1.0 - geom.r()) * self.g;
        (Complex64::cis(-g_intra * s), Complex64::cis(g_inter * s))
    }
}

/// Lab-frame dipole potential V(t): diagonal, entry for site (l, sigma)
/// equal to g Omega E(t)/E_0 * [ (2l - N - 1)/2 + (r/2) * (-1 on A, +1 on B) ],
/// i.e. the A and B sites of cell l sit at positions -r/2 and +r/2 around
/// the cell center l - (N+1)/2. Only the propagator oracle consumes this.
pub fn potential_matrix(geom: &ChainGeometry, d: &DriveSpec, t: f64) -> Array2<f64> {
    let n = geom.n_dimers();
    let strength = d.g() * d.omega_drive() * d.field_profile(t);
    let mut v = Array2::zeros((2 * n, 2 * n));
    for cell in 1..=n {
        let center = cell as f64 - (n as f64 + 1.0) / 2.0;
        let ia = geom.site_index(cell, Sublattice::A);
        let ib = geom.site_index(cell, Sublattice::B);
        v[[ia, ia]] = strength * (center - geom.r() / 2.0);
        v[[ib, ib]] = strength * (center + geom.r() / 2.0);
    }
    v
}

/// Frame unitary P(t): diagonal with entries
/// exp(-i g s(t) x_{l,sigma}), x as in [`potential_matrix`]. Satisfies
/// i dP/dt = V(t) P, so conjugating by P removes V(t) and phases the
/// hoppings by [`DriveSpec::hopping_modulations`].
pub fn unitary_p(
    geom: &ChainGeometry,
    d: &DriveSpec,
    t: f64,
) -> Result<Array2<Complex64>, SpecFunError> {
    let s = d.phase_integral(t)?;
    let n = geom.n_dimers();
    let mut p = Array2::from_elem((2 * n, 2 * n), Complex64::new(0.0, 0.0));
    for cell in 1..=n {
        let center = cell as f64 - (n as f64 + 1.0) / 2.0;
        let ia = geom.site_index(cell, Sublattice::A);
        let ib = geom.site_index(cell, Sublattice::B);
        p[[ia, ia]] = Complex64::cis(-d.g() * s * (center - geom.r() / 2.0));
        p[[ib, ib]] = Complex64::cis(-d.g() * s * (center + geom.r() / 2.0));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ChainGeometry;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn geom(n: usize, r: f64) -> ChainGeometry {
        ChainGeometry::new(n, 0.3, 1.0, r).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert!(DriveSpec::monochromatic(-0.1, 10.0).is_err());
        assert!(DriveSpec::monochromatic(1.0, 0.0).is_err());
        assert!(DriveSpec::gaussian(1.0, 10.0, 0.0).is_err());
        assert!(DriveSpec::beating(1.0, 10.0, 10.0).is_err());
        assert!(DriveSpec::beating(1.0, 10.0, 0.0).is_err());
        assert!(DriveSpec::beating(1.0, 10.0, 5.0).is_ok());
    }

    #[test]
    fn field_profile_reference_points() {
        let mono = DriveSpec::monochromatic(1.0, 10.0).unwrap();
        assert_abs_diff_eq!(mono.field_profile(0.0), 1.0, epsilon = 1e-15);

        // Beating with a tiny envelope frequency is the frozen-envelope
        // monochromatic field.
        let beat = DriveSpec::beating(1.0, 10.0, 1e-13).unwrap();
        for &t in &[0.0, 0.17, 1.3, 6.0] {
            assert_abs_diff_eq!(beat.field_profile(t), (10.0 * t).cos(), epsilon = 1e-12);
        }

        // Gaussian at t = 1/Gamma.
        let c = 10.0;
        let omega = 10.0;
        let gauss = DriveSpec::gaussian(1.0, omega, c).unwrap();
        let gamma = omega / c;
        let t = 1.0 / gamma;
        assert_abs_diff_eq!(
            gauss.field_profile(t),
            (-1.0_f64).exp() * (omega / gamma).cos(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn phase_integral_reference_points() {
        let mono = DriveSpec::monochromatic(1.0, 10.0).unwrap();
        let t_quarter = PI / 2.0 / 10.0; // Omega t = pi/2
        assert_abs_diff_eq!(mono.phase_integral(t_quarter).unwrap(), 1.0, epsilon = 1e-15);

        let gauss = DriveSpec::gaussian(1.0, 10.0, 1e6).unwrap();
        assert_abs_diff_eq!(gauss.phase_integral(t_quarter).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn beating_phase_integral_collapses_to_monochromatic() {
        let omega = 10.0;
        let beat = DriveSpec::beating(1.0, omega, 1e-8 * omega).unwrap();
        let mono = DriveSpec::monochromatic(1.0, omega).unwrap();
        let period = 2.0 * PI / omega;
        let mut worst = 0.0_f64;
        for k in 0..=200 {
            let t = k as f64 / 200.0 * period;
            let d = (beat.phase_integral(t).unwrap() - mono.phase_integral(t).unwrap()).abs();
            worst = worst.max(d);
        }
        assert!(worst < 1e-6, "max deviation {worst:e}");
    }

    #[test]
    fn gaussian_phase_integral_collapses_to_monochromatic() {
        let omega = 10.0;
        let gauss = DriveSpec::gaussian(1.0, omega, 1e6).unwrap();
        let mono = DriveSpec::monochromatic(1.0, omega).unwrap();
        let period = 2.0 * PI / omega;
        let mut worst = 0.0_f64;
        for k in 0..=200 {
            let t = k as f64 / 200.0 * period;
            let d = (gauss.phase_integral(t).unwrap() - mono.phase_integral(t).unwrap()).abs();
            worst = worst.max(d);
        }
        assert!(worst < 1e-6, "max deviation {worst:e}");
    }

    #[test]
    fn hopping_modulation_reference_values() {
        let g = geom(4, 0.6);
        let d = DriveSpec::monochromatic(2.0, 10.0).unwrap();
        let t = PI / 2.0 / 10.0; // s(t) = 1
        let (pv, pw) = d.hopping_modulations(&g, t).unwrap();
        assert!((pv - Complex64::cis(-1.2)).norm() < 1e-14);
        assert!((pw - Complex64::cis(0.8)).norm() < 1e-14);

        // g = 0: no modulation.
        let d0 = DriveSpec::monochromatic(0.0, 10.0).unwrap();
        let (pv, pw) = d0.hopping_modulations(&g, 0.33).unwrap();
        assert_eq!(pv, Complex64::new(1.0, 0.0));
        assert_eq!(pw, Complex64::new(1.0, 0.0));

        // r = 0: only the inter-cell hop is modulated.
        let g0 = geom(4, 0.0);
        let d = DriveSpec::monochromatic(1.7, 10.0).unwrap();
        for &t in &[0.05, 0.21, 0.4] {
            let (pv, pw) = d.hopping_modulations(&g0, t).unwrap();
            assert_eq!(pv, Complex64::new(1.0, 0.0));
            assert_abs_diff_eq!(pw.norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn modulations_have_unit_modulus() {
        let g = geom(3, 0.4);
        let d = DriveSpec::beating(2.5, 10.0, 3.0).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.07;
            let (pv, pw) = d.hopping_modulations(&g, t).unwrap();
            assert_abs_diff_eq!(pv.norm(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(pw.norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn potential_matrix_reference_values() {
        // N=2, r=0, t=0, g=1, Omega=10: diagonal (-5, -5, +5, +5).
        let g = ChainGeometry::new(2, 0.3, 1.0, 0.0).unwrap();
        let d = DriveSpec::monochromatic(1.0, 10.0).unwrap();
        let v = potential_matrix(&g, &d, 0.0);
        let want = [-5.0, -5.0, 5.0, 5.0];
        for i in 0..4 {
            assert_abs_diff_eq!(v[[i, i]], want[i], epsilon = 1e-13);
        }

        // Field zero crossing: zero matrix.
        let t_zero = PI / 2.0 / 10.0;
        let vz = potential_matrix(&g, &d, t_zero);
        assert!(vz.iter().all(|x| x.abs() < 1e-12));

        // N=2, r=0.5: A and B sites of each cell split by -+ r/2 around the
        // cell center; entry(l, A) - entry(l, B) = -g*Omega*E(t)*r.
        let g5 = ChainGeometry::new(2, 0.3, 1.0, 0.5).unwrap();
        let v5 = potential_matrix(&g5, &d, 0.0);
        let want5 = [
            10.0 * (-0.5 - 0.25),
            10.0 * (-0.5 + 0.25),
            10.0 * (0.5 - 0.25),
            10.0 * (0.5 + 0.25),
        ];
        for i in 0..4 {
            assert_abs_diff_eq!(v5[[i, i]], want5[i], epsilon = 1e-13);
        }
        assert_abs_diff_eq!(v5[[0, 0]] - v5[[1, 1]], -10.0 * 0.5, epsilon = 1e-13);
    }

    #[test]
    fn potential_trace_vanishes() {
        // The cell-center contribution is reflection-antisymmetric and the
        // sublattice split cancels within each cell.
        for &(n, r) in &[(2usize, 0.0), (5, 0.5), (8, 0.9)] {
            let g = ChainGeometry::new(n, 0.3, 1.0, r).unwrap();
            let d = DriveSpec::monochromatic(1.3, 10.0).unwrap();
            let v = potential_matrix(&g, &d, 0.13);
            let trace: f64 = (0..2 * n).map(|i| v[[i, i]]).sum();
            assert_abs_diff_eq!(trace, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn unitary_p_is_identity_without_drive() {
        let g = geom(3, 0.5);
        let d = DriveSpec::monochromatic(0.0, 10.0).unwrap();
        let p = unitary_p(&g, &d, 0.77).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                assert!((p[[i, j]] - want).norm() < 1e-14);
            }
        }
        // Any drive at a time where s(t) = 0 is also the identity.
        let d2 = DriveSpec::monochromatic(2.0, 10.0).unwrap();
        let p2 = unitary_p(&g, &d2, 0.0).unwrap();
        for i in 0..6 {
            assert!((p2[[i, i]] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn unitary_p_entries_unimodular() {
        let g = geom(4, 0.6);
        let d = DriveSpec::beating(1.5, 10.0, 4.0).unwrap();
        let p = unitary_p(&g, &d, 0.41).unwrap();
        for i in 0..8 {
            assert_abs_diff_eq!(p[[i, i]].norm(), 1.0, epsilon = 1e-14);
        }
    }

    /// Central-difference check that i dP/dt = V(t) P for all drive kinds:
    /// the defining property of the frame transformation.
    #[test]
    fn frame_equivalence_all_drive_kinds() {
        let geometries = [geom(4, 0.0), geom(4, 0.6), geom(3, 0.5)];
        let drives = [
            DriveSpec::monochromatic(1.7, 10.0).unwrap(),
            DriveSpec::gaussian(1.7, 10.0, 10.0).unwrap(),
            DriveSpec::beating(1.7, 10.0, 5.0).unwrap(),
        ];
        let h = 1e-6;
        for g in &geometries {
            for d in &drives {
                let period = 2.0 * PI / d.omega_drive();
                let mut worst = 0.0_f64;
                for k in 0..=40 {
                    let t = k as f64 / 40.0 * period;
                    let p_plus = unitary_p(g, d, t + h).unwrap();
                    let p_minus = unitary_p(g, d, t - h).unwrap();
                    let v = potential_matrix(g, d, t);
                    let p = unitary_p(g, d, t).unwrap();
                    for i in 0..g.n_sites() {
                        let dpdt = (p_plus[[i, i]] - p_minus[[i, i]]) / (2.0 * h);
                        let lhs = Complex64::new(0.0, 1.0) * dpdt;
                        let rhs = v[[i, i]] * p[[i, i]];
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
                assert!(worst < 1e-6, "frame defect {worst:e} for {:?}", d.kind());
            }
        }
    }

    #[test]
    fn base_frequency_and_tones() {
        let beat = DriveSpec::beating(1.0, 10.0, 4.0).unwrap();
        assert_abs_diff_eq!(beat.base_frequency(), 6.0, epsilon = 1e-15);
        let (plus, minus) = beat.beating_tones().unwrap();
        assert_abs_diff_eq!(plus, 14.0, epsilon = 1e-15);
        assert_abs_diff_eq!(minus, 6.0, epsilon = 1e-15);
        let mono = DriveSpec::monochromatic(1.0, 10.0).unwrap();
        assert_abs_diff_eq!(mono.base_frequency(), 10.0, epsilon = 1e-15);
        assert!(mono.beating_tones().is_none());
    }
}
