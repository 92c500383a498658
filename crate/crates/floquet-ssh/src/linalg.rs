//! Dense eigensolvers on top of the system LAPACK (via OpenBLAS).
//!
//! The divide-and-conquer drivers (dsyevd/zheevd) are used instead of the
//! QR drivers: at the matrix sizes the Floquet problem produces (~1600)
//! they are several times faster. OpenBLAS threading is pinned to one
//! thread so that repeated runs are bit-identical; parallelism belongs to
//! the sweep layer, which runs independent matrices on the worker pool.
//!
//! Layout note: LAPACK is column-major while `ndarray` defaults to
//! row-major. For the symmetric/Hermitian drivers the input needs no
//! transposition (A^T = A, resp. A^T = conj(A), which has the same
//! spectrum and conjugated eigenvectors), and the returned eigenvector
//! matrices are presented with **row k = eigenvector k**, already fixed up
//! for these identities.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::os::raw::c_char;
use std::sync::Once;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {0} does not fit in the LAPACK integer type")]
    DimensionTooLarge(usize),
    #[error(
        "LAPACK {driver} failed to converge (info = {info}); max |entry| = {max_abs:.3e}"
    )]
    Convergence { driver: &'static str, info: i32, max_abs: f64 },
}

extern "C" {
    fn openblas_set_num_threads(num_threads: i32);
}

/// Deterministic single-threaded BLAS; the sweep layer owns parallelism.
fn pin_blas_threads() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| unsafe {
        openblas_set_num_threads(1);
    });
}

const JOB_VECTORS: c_char = b'V' as c_char;
const JOB_VALUES: c_char = b'N' as c_char;
const UPLO_LOWER: c_char = b'L' as c_char;

fn checked_dim(rows: usize, cols: usize) -> Result<i32, LinalgError> {
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    i32::try_from(rows).map_err(|_| LinalgError::DimensionTooLarge(rows))
}

fn max_abs_real(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
}

fn max_abs_complex(a: &Array2<Complex64>) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.norm()))
}

/// Eigendecomposition of a real symmetric matrix (dsyevd).
///
/// Returns ascending eigenvalues and eigenvectors with row k = eigenvector
/// belonging to the k-th eigenvalue.
pub fn eigh_real(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>), LinalgError> {
    pin_blas_threads();
    let n = checked_dim(a.nrows(), a.ncols())?;
    let max_abs = max_abs_real(a);
    let mut m = a.to_owned();
    let mut vals = vec![0.0_f64; n as usize];
    let mut info = 0_i32;
    unsafe {
        // Workspace query.
        let mut work_len = [0.0_f64];
        let mut iwork_len = [0_i32];
        let query = -1_i32;
        lapack_sys::dsyevd_(
            &JOB_VECTORS,
            &UPLO_LOWER,
            &n,
            m.as_mut_ptr(),
            &n,
            vals.as_mut_ptr(),
            work_len.as_mut_ptr(),
            &query,
            iwork_len.as_mut_ptr(),
            &query,
            &mut info,
        );
        if info == 0 {
            let lwork = work_len[0] as i32;
            let liwork = iwork_len[0];
            let mut work = vec![0.0_f64; lwork as usize];
            let mut iwork = vec![0_i32; liwork as usize];
            lapack_sys::dsyevd_(
                &JOB_VECTORS,
                &UPLO_LOWER,
                &n,
                m.as_mut_ptr(),
                &n,
                vals.as_mut_ptr(),
                work.as_mut_ptr(),
                &lwork,
                iwork.as_mut_ptr(),
                &liwork,
                &mut info,
            );
        }
    }
    if info != 0 {
        return Err(LinalgError::Convergence { driver: "dsyevd", info, max_abs });
    }
    // Column-major output read back row-major: row k is eigenvector k.
    Ok((Array1::from(vals), m))
}

/// Eigendecomposition of a Hermitian matrix (zheevd).
///
/// Returns ascending eigenvalues and eigenvectors with row k = eigenvector
/// k (the conjugation induced by the layout transposition is undone here).
pub fn eigh_complex(
    a: &Array2<Complex64>,
) -> Result<(Array1<f64>, Array2<Complex64>), LinalgError> {
    pin_blas_threads();
    let n = checked_dim(a.nrows(), a.ncols())?;
    let max_abs = max_abs_complex(a);
    let mut m = a.to_owned();
    let mut vals = vec![0.0_f64; n as usize];
    let mut info = 0_i32;
    unsafe {
        let mut work_len = [Complex64::new(0.0, 0.0)];
        let mut rwork_len = [0.0_f64];
        let mut iwork_len = [0_i32];
        let query = -1_i32;
        lapack_sys::zheevd_(
            &JOB_VECTORS,
            &UPLO_LOWER,
            &n,
            m.as_mut_ptr().cast(),
            &n,
            vals.as_mut_ptr(),
            work_len.as_mut_ptr().cast(),
            &query,
            rwork_len.as_mut_ptr(),
            &query,
            iwork_len.as_mut_ptr(),
            &query,
            &mut info,
        );
        if info == 0 {
            let lwork = work_len[0].re as i32;
            let lrwork = rwork_len[0] as i32;
            let liwork = iwork_len[0];
            let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
            let mut rwork = vec![0.0_f64; lrwork as usize];
            let mut iwork = vec![0_i32; liwork as usize];
            lapack_sys::zheevd_(
                &JOB_VECTORS,
                &UPLO_LOWER,
                &n,
                m.as_mut_ptr().cast(),
                &n,
                vals.as_mut_ptr(),
                work.as_mut_ptr().cast(),
                &lwork,
                rwork.as_mut_ptr(),
                &lrwork,
                iwork.as_mut_ptr().cast(),
                &liwork,
                &mut info,
            );
        }
    }
    if info != 0 {
        return Err(LinalgError::Convergence { driver: "zheevd", info, max_abs });
    }
    // The buffer LAPACK saw was conj(A); its eigenvectors are the
    // conjugates of A's. Undo, leaving row k = eigenvector k.
    let vecs = m.mapv(|z| z.conj());
    Ok((Array1::from(vals), vecs))
}

/// Eigenvalues of a general complex matrix (zgeev, values only).
///
/// Used for eigenphases of one-period propagators; the layout
/// transposition does not affect eigenvalues.
pub fn eigvals_complex(a: &Array2<Complex64>) -> Result<Array1<Complex64>, LinalgError> {
    pin_blas_threads();
    let n = checked_dim(a.nrows(), a.ncols())?;
    let max_abs = max_abs_complex(a);
    let mut m = a.to_owned();
    let mut vals = vec![Complex64::new(0.0, 0.0); n as usize];
    let mut rwork = vec![0.0_f64; 2 * n as usize];
    let mut info = 0_i32;
    unsafe {
        let mut work_len = [Complex64::new(0.0, 0.0)];
        let query = -1_i32;
        let ldv = 1_i32;
        lapack_sys::zgeev_(
            &JOB_VALUES,
            &JOB_VALUES,
            &n,
            m.as_mut_ptr().cast(),
            &n,
            vals.as_mut_ptr().cast(),
            std::ptr::null_mut(),
            &ldv,
            std::ptr::null_mut(),
            &ldv,
            work_len.as_mut_ptr().cast(),
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
        if info == 0 {
            let lwork = work_len[0].re as i32;
            let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
            lapack_sys::zgeev_(
                &JOB_VALUES,
                &JOB_VALUES,
                &n,
                m.as_mut_ptr().cast(),
                &n,
                vals.as_mut_ptr().cast(),
                std::ptr::null_mut(),
                &ldv,
                std::ptr::null_mut(),
                &ldv,
                work.as_mut_ptr().cast(),
                &lwork,
                rwork.as_mut_ptr(),
                &mut info,
            );
        }
    }
    if info != 0 {
        return Err(LinalgError::Convergence { driver: "zgeev", info, max_abs });
    }
    Ok(Array1::from(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn real_symmetric_two_by_two() {
        let a = array![[1.0, 2.0], [2.0, 1.0]];
        let (vals, vecs) = eigh_real(&a).unwrap();
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 3.0, epsilon = 1e-14);
        // Residual ||A v - lambda v|| for each row-eigenvector.
        for k in 0..2 {
            let v = vecs.row(k);
            let av = a.dot(&v);
            for i in 0..2 {
                assert_abs_diff_eq!(av[i], vals[k] * v[i], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn hermitian_with_complex_offdiagonal() {
        let a = array![
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]
        ];
        let (vals, vecs) = eigh_complex(&a).unwrap();
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-14);
        for k in 0..2 {
            let v = vecs.row(k);
            let av = a.dot(&v);
            for i in 0..2 {
                assert!((av[i] - Complex64::new(vals[k], 0.0) * v[i]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn complex_path_agrees_with_real_path() {
        let a = array![
            [0.0, 0.3, 0.0, 0.0],
            [0.3, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.3],
            [0.0, 0.0, 0.3, 0.0]
        ];
        let ac = a.mapv(|x| Complex64::new(x, 0.0));
        let (vr, _) = eigh_real(&a).unwrap();
        let (vc, _) = eigh_complex(&ac).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(vr[k], vc[k], epsilon = 1e-13);
        }
    }

    #[test]
    fn eigenvalues_ascending_and_orthonormal_vectors() {
        // A moderately sized deterministic symmetric matrix.
        let n = 60;
        let mut a = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let x = ((i * 31 + j * 17) % 23) as f64 / 23.0;
                a[[i, j]] = x;
                a[[j, i]] = x;
            }
        }
        let (vals, vecs) = eigh_real(&a).unwrap();
        for k in 1..n {
            assert!(vals[k] >= vals[k - 1]);
        }
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = vecs.row(i).dot(&vecs.row(j));
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn unitary_eigenvalues_on_unit_circle() {
        // Rotation by angle t has eigenvalues e^{+-i t}.
        let t = 0.7_f64;
        let a = array![
            [Complex64::new(t.cos(), 0.0), Complex64::new(-t.sin(), 0.0)],
            [Complex64::new(t.sin(), 0.0), Complex64::new(t.cos(), 0.0)]
        ];
        let vals = eigvals_complex(&a).unwrap();
        let mut phases: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
        phases.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(phases[0], -t, epsilon = 1e-14);
        assert_abs_diff_eq!(phases[1], t, epsilon = 1e-14);
        for z in vals.iter() {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_non_square() {
        let a = Array2::<f64>::zeros((2, 3));
        assert!(matches!(eigh_real(&a), Err(LinalgError::NotSquare { .. })));
    }
}
