//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation that annihilates
//! it. Sweeps continue until the off-diagonal Frobenius norm falls below
//! `JACOBI_OFF_TOL` relative to the Frobenius norm of the input.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::{JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL, TOL_HERM};

/// Eigen-decomposition `A = V diag(values) V†` with ascending `values`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::diag_real(&self.values);
        &(&self.vectors * &d) * &self.vectors.dagger()
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermiticity_defect();
    if defect >= TOL_HERM {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.rows();
    let mut m = a.as_slice().to_vec();
    // Symmetrize so the solver sees an exactly Hermitian input.
    for i in 0..n {
        m[i * n + i] = Complex64::new(m[i * n + i].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[i * n + j] + m[j * n + i].conj()) * 0.5;
            m[i * n + j] = avg;
            m[j * n + i] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n).into_vec();

    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let threshold = JACOBI_OFF_TOL * scale;
    // Pivots below this are numerically zero relative to the matrix.
    let skip = f64::EPSILON * 1e-3 * scale;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m, n) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let mag = apq.norm();
                if mag <= skip {
                    continue;
                }
                rotate(&mut m, &mut v, n, p, q, apq, mag);
            }
        }
    }
    if off_diagonal_norm(&m, n) > threshold.max(1e-300) * 10.0 {
        return Err(Error::NoConvergence(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps for n = {n}"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.total_cmp(&m[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, k)] = v[row * n + src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Applies `A ← J† A J`, `V ← V J` with `J` zeroing entry `(p, q)`.
fn rotate(
    m: &mut [Complex64],
    v: &mut [Complex64],
    n: usize,
    p: usize,
    q: usize,
    apq: Complex64,
    mag: f64,
) {
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // phase e^{-iα} with a_pq = |a_pq| e^{iα}
    let ph = apq.conj() / mag;
    let cs = Complex64::new(c, 0.0);
    let ss = Complex64::new(s, 0.0);

    // Columns: (AJ)_kp = c A_kp − s e^{−iα} A_kq ; (AJ)_kq = s A_kp + c e^{−iα} A_kq
    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = cs * akp - ss * ph * akq;
        m[k * n + q] = ss * akp + cs * ph * akq;
    }
    // Rows: (J†B)_pk = c B_pk − s e^{iα} B_qk ; (J†B)_qk = s B_pk + c e^{iα} B_qk
    let phc = ph.conj();
    for k in 0..n {
        let bpk = m[p * n + k];
        let bqk = m[q * n + k];
        m[p * n + k] = cs * bpk - ss * phc * bqk;
        m[q * n + k] = ss * bpk + cs * phc * bqk;
    }
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    m[p * n + p] = Complex64::new(m[p * n + p].re, 0.0);
    m[q * n + q] = Complex64::new(m[q * n + q].re, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = cs * vkp - ss * ph * vkq;
        v[k * n + q] = ss * vkp + cs * ph * vkq;
    }
}

/// Ascending real spectrum of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|e| e.values)
}
