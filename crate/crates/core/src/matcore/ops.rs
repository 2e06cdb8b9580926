use num_complex::Complex64;

use super::eigen::hermitian_eigenvalues;
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::TOL_HERM;

/// Ordered factor dimensions of a composite register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterShape(Vec<usize>);

impl RegisterShape {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!(
                "register factors must be positive, got {factor_dims:?}"
            )));
        }
        Ok(Self(factor_dims))
    }

    /// `count` copies of a `dim`-level system.
    pub fn uniform(dim: usize, count: usize) -> Result<Self> {
        Self::new(vec![dim; count])
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().product()
    }

    /// Splits a flat index into per-factor digits, most significant first.
    fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % d;
            index /= d;
        }
    }
}

/// Kronecker product with `(A ⊗ B)[i·p + k, j·q + l] = A[i, j] · B[k, l]`
/// for `B` of shape `p × q`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let cols = ac * bc;
    let data = out.as_mut_slice();
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                let row = (i * br + k) * cols + j * bc;
                for (l, bkl) in b.row(k).iter().enumerate() {
                    data[row + l] = aij * bkl;
                }
            }
        }
    }
    out
}

/// `a ⊗ a ⊗ … ⊗ a` with `n ≥ 1` factors.
pub fn kron_power(a: &ComplexMatrix, n: usize) -> ComplexMatrix {
    assert!(n >= 1, "kron_power needs at least one factor");
    let mut out = a.clone();
    for _ in 1..n {
        out = kron(&out, a);
    }
    out
}

/// Reduced matrix on the factors listed in `keep`, in their original order.
pub fn partial_trace(
    a: &ComplexMatrix,
    shape: &RegisterShape,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let dim = shape.total_dim();
    if !a.is_square() || a.rows() != dim {
        return Err(Error::ShapeMismatch(format!(
            "register shape {:?} (dim {dim}) does not match {}x{} matrix",
            shape.factors(),
            a.rows(),
            a.cols()
        )));
    }
    let n_factors = shape.factors().len();
    if keep.is_empty() || keep.iter().any(|&k| k >= n_factors) {
        return Err(Error::ShapeMismatch(format!(
            "keep set {keep:?} invalid for {n_factors} factors"
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| shape.factors()[k]).collect();
    let out_dim: usize = kept_dims.iter().product();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let mut row_digits = vec![0usize; n_factors];
    let mut col_digits = vec![0usize; n_factors];
    let is_kept: Vec<bool> = (0..n_factors).map(|f| kept.contains(&f)).collect();

    let reduced_index = |digits: &[usize]| {
        kept.iter()
            .zip(&kept_dims)
            .fold(0usize, |acc, (&f, &d)| acc * d + digits[f])
    };

    for r in 0..dim {
        shape.digits(r, &mut row_digits);
        for c in 0..dim {
            let z = a[(r, c)];
            if z == Complex64::new(0.0, 0.0) {
                continue;
            }
            shape.digits(c, &mut col_digits);
            let traced_match = (0..n_factors).all(|f| is_kept[f] || row_digits[f] == col_digits[f]);
            if traced_match {
                out[(reduced_index(&row_digits), reduced_index(&col_digits))] += z;
            }
        }
    }
    Ok(out)
}

/// Sum of singular values.
///
/// Hermitian input uses `Σ|λ|`; otherwise singular values come from the
/// eigenvalues of `A†A`, with round-off negatives clamped to zero.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "trace norm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.dim() == 2 && a.is_hermitian(TOL_HERM) {
        // closed form for 2×2 Hermitian: λ± = m ± √(d² + |b|²)
        let mean = 0.5 * (a[(0, 0)].re + a[(1, 1)].re);
        let half_diff = 0.5 * (a[(0, 0)].re - a[(1, 1)].re);
        let b = 0.5 * (a[(0, 1)] + a[(1, 0)].conj());
        let r = (half_diff * half_diff + b.norm_sqr()).sqrt();
        return Ok((mean + r).abs() + (mean - r).abs());
    }
    if a.is_hermitian(TOL_HERM) {
        return Ok(hermitian_eigenvalues(a)?.iter().map(|l| l.abs()).sum());
    }
    let gram = &a.dagger() * a;
    let vals = hermitian_eigenvalues(&gram)?;
    Ok(vals
        .iter()
        .map(|&l| if l < 0.0 { 0.0 } else { l.sqrt() })
        .sum())
}
