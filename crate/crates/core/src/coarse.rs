//! Coarse-graining maps from n qubits to one qubit, realized as Stinespring
//! dilations.
//!
//! The dilation register is ordered `(data, r, d)`: the `2ⁿ`-dimensional
//! data block of n copies, then two fresh qubit ancillas prepared in `|0⟩`.
//! After the unitary acts, the data block and `r` are traced out and the
//! final qubit `d` is kept:
//!
//! ```text
//! λ(X) = Tr_{data,r}[ U (X ⊗ |0⟩⟨0|_r ⊗ |0⟩⟨0|_d) U† ]
//! ```
//!
//! X-form unitaries have support only on the main and secondary diagonals.
//! They decompose into 2×2 rotations on coordinate pairs `(i, dim−1−i)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::tolerance::TOL_UNITARY;

/// Largest number of copies a coarse-graining map accepts.
pub const MAX_COPIES: usize = 4;

/// The 16×16 permutation used for two copies: rows 1 and 16 fixed, every
/// other row `i` sends to column `17 − i` (1-based).
pub fn paper_u16() -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(16, 16);
    u[(0, 0)] = Complex64::new(1.0, 0.0);
    u[(15, 15)] = Complex64::new(1.0, 0.0);
    for i in 1..15 {
        u[(i, 15 - i)] = Complex64::new(1.0, 0.0);
    }
    u
}

/// Block rotation angles of a real X-form unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XFormParams {
    pub dim: usize,
    /// One angle per block `(i, dim−1−i)`, `i < dim/2`.
    pub angles: Vec<f64>,
}

impl XFormParams {
    pub fn new(dim: usize, angles: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "X-form dimension must be even and positive, got {dim}"
            )));
        }
        if angles.len() != dim / 2 {
            return Err(Error::InvalidParameter(format!(
                "X-form of dimension {dim} needs {} angles, got {}",
                dim / 2,
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(
                "X-form angles must be finite".into(),
            ));
        }
        Ok(Self { dim, angles })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim / 2])
    }

    /// The permutation pattern of [`paper_u16`] generalized to any dimension:
    /// block 0 fixed, every other block swapped.
    pub fn paper_pattern(dim: usize) -> Result<Self> {
        let mut angles = vec![FRAC_PI_2; dim / 2];
        if let Some(first) = angles.first_mut() {
            *first = 0.0;
        }
        Self::new(dim, angles)
    }

    /// Copies supported by this dimension (`dim = 2^(n+2)`).
    pub fn copies(&self) -> Option<usize> {
        copies_for_dim(self.dim)
    }
}

fn copies_for_dim(dim: usize) -> Option<usize> {
    (1..=MAX_COPIES).find(|&n| 1usize << (n + 2) == dim)
}

/// Real X-form unitary: block `i` is `[cos γ, sin γ; −sin γ, cos γ]` on
/// coordinates `(i, dim−1−i)`.
pub fn xform_from_angles(p: &XFormParams) -> ComplexMatrix {
    let n = p.dim;
    let mut u = ComplexMatrix::zeros(n, n);
    for (i, &gamma) in p.angles.iter().enumerate() {
        let j = n - 1 - i;
        let (s, c) = gamma.sin_cos();
        u[(i, i)] = Complex64::new(c, 0.0);
        u[(i, j)] = Complex64::new(s, 0.0);
        u[(j, i)] = Complex64::new(-s, 0.0);
        u[(j, j)] = Complex64::new(c, 0.0);
    }
    u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitaryCheck {
    pub passed: bool,
    /// Largest entry of `|U†U − I|`.
    pub max_deviation: f64,
}

pub fn validate_unitary(u: &ComplexMatrix, tol: f64) -> UnitaryCheck {
    if !u.is_square() {
        return UnitaryCheck {
            passed: false,
            max_deviation: f64::INFINITY,
        };
    }
    let max_deviation = (&u.dagger() * u).max_abs_diff(&ComplexMatrix::identity(u.rows()));
    UnitaryCheck {
        passed: max_deviation <= tol,
        max_deviation,
    }
}

/// Channel `2ⁿ → 2` induced by the dilation `u` on register `(data, r, d)`.
///
/// Kraus operators are `K_{jk} = (⟨j|_data ⊗ ⟨k|_r ⊗ I_d) U (I ⊗ |0⟩_r ⊗ |0⟩_d)`.
pub fn build_coarse_channel(u: &ComplexMatrix, copies: usize) -> Result<QuantumChannel> {
    if copies == 0 || copies > MAX_COPIES {
        return Err(Error::InvalidParameter(format!(
            "copies must be in 1..={MAX_COPIES}, got {copies}"
        )));
    }
    let data_dim = 1usize << copies;
    let full = data_dim * 4;
    if !u.is_square() || u.rows() != full {
        return Err(Error::DimensionMismatch(format!(
            "{copies} copies need a {full}x{full} dilation, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let mut ops = Vec::with_capacity(data_dim * 2);
    for j in 0..data_dim {
        for k in 0..2 {
            let mut kraus = ComplexMatrix::zeros(2, data_dim);
            for out in 0..2 {
                for x in 0..data_dim {
                    kraus[(out, x)] = u[(j * 4 + k * 2 + out, x * 4)];
                }
            }
            ops.push(kraus);
        }
    }
    QuantumChannel::from_kraus(ops)
}

/// A validated coarse-graining map `λ: 2ⁿ → 2`.
#[derive(Debug, Clone)]
pub struct CoarseGrainingMap {
    copies: usize,
    unitary: ComplexMatrix,
    channel: QuantumChannel,
    label: String,
}

impl CoarseGrainingMap {
    pub fn new(unitary: ComplexMatrix, copies: usize, label: impl Into<String>) -> Result<Self> {
        let check = validate_unitary(&unitary, TOL_UNITARY);
        if !check.passed {
            return Err(Error::InvalidParameter(format!(
                "dilation is not unitary (max |U†U − I| = {:.3e})",
                check.max_deviation
            )));
        }
        let channel = build_coarse_channel(&unitary, copies)?;
        Ok(Self {
            copies,
            unitary,
            channel,
            label: label.into(),
        })
    }

    /// Two-copy map from the fixed 16×16 permutation.
    pub fn paper16() -> Self {
        Self::new(paper_u16(), 2, "paper16").expect("paper_u16 is a permutation")
    }

    /// X-form dilation from block angles; the copy count follows from `dim`.
    pub fn from_xform(params: &XFormParams, label: impl Into<String>) -> Result<Self> {
        let copies = params.copies().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "X-form dimension {} is not 2^(n+2) for n in 1..={MAX_COPIES}",
                params.dim
            ))
        })?;
        Self::new(xform_from_angles(params), copies, label)
    }

    /// [`XFormParams::paper_pattern`] for `copies` copies.
    pub fn paper_pattern(copies: usize) -> Result<Self> {
        let params = XFormParams::paper_pattern(1usize << (copies + 2))?;
        Self::from_xform(&params, format!("pattern{copies}"))
    }

    /// Single-copy dilation that swaps the data qubit into `d`, so λ = id.
    pub fn identity_decoder() -> Self {
        let mut u = ComplexMatrix::zeros(8, 8);
        for idx in 0..8usize {
            let (x, r, d) = (idx >> 2, (idx >> 1) & 1, idx & 1);
            u[((d << 2) | (r << 1) | x, idx)] = Complex64::new(1.0, 0.0);
        }
        Self::new(u, 1, "identity").expect("swap is a permutation")
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn channel(&self) -> &QuantumChannel {
        &self.channel
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{is_cptp, Superoperator};
    use crate::matcore::pauli::bloch_state;
    use crate::matcore::{kron, kron_power};

    #[test]
    fn paper_u16_rows() {
        let u = paper_u16();
        let e = |k: usize| {
            (0..16)
                .map(|j| if j == k { 1.0 } else { 0.0 })
                .collect::<Vec<_>>()
        };
        let row = |i: usize| u.row(i).iter().map(|z| z.re).collect::<Vec<_>>();
        assert_eq!(row(0), e(0));
        assert_eq!(row(15), e(15));
        assert_eq!(u[(0, 0)].re, 1.0);
        assert_eq!(u[(15, 15)].re, 1.0);
        assert_eq!(u[(12, 12)].re, 0.0);
        assert_eq!(u[(3, 12)].re, 1.0);
        assert!(u
            .as_slice()
            .iter()
            .all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0)));
    }

    #[test]
    fn unitary_validation() {
        let check = validate_unitary(&ComplexMatrix::identity(16), 1e-10);
        assert!(check.passed && check.max_deviation == 0.0);
        assert!(validate_unitary(&paper_u16(), 1e-10).passed);
        let mut broken = paper_u16();
        broken[(0, 0)] = Complex64::new(0.5, 0.0);
        assert!(!validate_unitary(&broken, 1e-10).passed);
        assert!(!validate_unitary(&ComplexMatrix::zeros(2, 3), 1e-10).passed);
    }

    #[test]
    fn xform_endpoints() {
        let p = XFormParams::zeros(8).unwrap();
        assert_eq!(xform_from_angles(&p), ComplexMatrix::identity(8));
        let p = XFormParams::new(4, vec![FRAC_PI_2; 2]).unwrap();
        let u = xform_from_angles(&p);
        assert!(validate_unitary(&u, 1e-12).passed);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { 1.0 } else { 0.0 };
                assert!((u[(i, j)].norm() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn xform_param_validation() {
        assert!(XFormParams::new(5, vec![0.0; 2]).is_err());
        assert!(XFormParams::new(8, vec![0.0; 3]).is_err());
        assert!(XFormParams::new(8, vec![0.0, 0.0, f64::NAN, 0.0]).is_err());
        assert_eq!(XFormParams::zeros(32).unwrap().copies(), Some(3));
        assert_eq!(XFormParams::zeros(12).unwrap().copies(), None);
    }

    #[test]
    fn identity_dilation_outputs_ground_state() {
        let ch = build_coarse_channel(&ComplexMatrix::identity(16), 2).unwrap();
        let rho = kron(&bloch_state(0.3, 0.2, -0.5), &bloch_state(-0.1, 0.7, 0.0));
        let out = ch.apply(&rho).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn wrong_dilation_size_rejected() {
        assert!(matches!(
            build_coarse_channel(&ComplexMatrix::identity(8), 2),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(build_coarse_channel(&ComplexMatrix::identity(128), 5).is_err());
    }

    #[test]
    fn paper16_on_ground_pair() {
        let lambda = CoarseGrainingMap::paper16();
        let out = lambda
            .channel()
            .apply(&kron_power(&ComplexMatrix::diag_real(&[1.0, 0.0]), 2))
            .unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
        assert!(is_cptp(lambda.channel(), 1e-10).is_cptp);
    }

    #[test]
    fn identity_decoder_is_identity() {
        let lambda = CoarseGrainingMap::identity_decoder();
        assert!(
            lambda
                .channel()
                .superoperator()
                .max_abs_diff(&ComplexMatrix::identity(4))
                < 1e-15
        );
    }

    #[test]
    fn pattern_for_two_copies_matches_paper16() {
        let a = CoarseGrainingMap::paper_pattern(2).unwrap();
        let b = CoarseGrainingMap::paper16();
        let d = a
            .channel()
            .superoperator()
            .max_abs_diff(b.channel().superoperator());
        assert!(d < 1e-12, "{d}");
    }
}
