use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{kron, ComplexMatrix};
use crate::tolerance::{MAX_CHOI_DIM, TOL_KRAUS_TP};

/// Anything acting linearly on matrices through a superoperator.
///
/// The superoperator uses column-stacking: `vec(Λ(X)) = S · vec(X)` with
/// `vec(X)[j·d + i] = X[i, j]`, so `X ↦ A X B†` has superoperator
/// `conj(B) ⊗ A`.
pub trait Superoperator {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn superoperator(&self) -> &ComplexMatrix;

    fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_input(self.dim_in(), rho)?;
        let out = self.superoperator().matvec(&rho.vec_columns())?;
        ComplexMatrix::unvec_columns(&out, self.dim_out(), self.dim_out())
    }

    /// Image of the matrix unit `|i⟩⟨j|`.
    fn image_of_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        let (din, dout) = (self.dim_in(), self.dim_out());
        let s = self.superoperator();
        let mut out = ComplexMatrix::zeros(dout, dout);
        for b in 0..dout {
            for a in 0..dout {
                out[(a, b)] = s[(b * dout + a, j * din + i)];
            }
        }
        out
    }
}

fn check_input(dim_in: usize, rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() || rho.rows() != dim_in {
        return Err(Error::DimensionMismatch(format!(
            "map expects {dim_in}x{dim_in} input, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// Linear map on matrices with no positivity requirement.
///
/// Intermediate maps between dynamical snapshots live here; they are
/// generically not completely positive.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    dim_in: usize,
    dim_out: usize,
    superop: ComplexMatrix,
}

impl LinearMap {
    pub fn from_superoperator(
        dim_in: usize,
        dim_out: usize,
        superop: ComplexMatrix,
    ) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::DimensionMismatch(
                "map dimensions must be positive".into(),
            ));
        }
        if superop.rows() != dim_out * dim_out || superop.cols() != dim_in * dim_in {
            return Err(Error::DimensionMismatch(format!(
                "superoperator for {dim_in}->{dim_out} must be {}x{}, got {}x{}",
                dim_out * dim_out,
                dim_in * dim_in,
                superop.rows(),
                superop.cols()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            superop,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            superop: ComplexMatrix::identity(dim * dim),
        }
    }

    /// Copies any superoperator into a plain map.
    pub fn from_map(map: &dyn Superoperator) -> Self {
        Self {
            dim_in: map.dim_in(),
            dim_out: map.dim_out(),
            superop: map.superoperator().clone(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &dyn Superoperator) -> Result<LinearMap> {
        compose(self, inner)
    }

    pub fn tensor_power(&self, n: usize) -> Result<LinearMap> {
        tensor_power(self, n)
    }
}

impl Superoperator for LinearMap {
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn superoperator(&self) -> &ComplexMatrix {
        &self.superop
    }
}

/// Validated trace-preserving map built from Kraus operators.
///
/// The superoperator is always present; the Kraus list is retained when the
/// channel was constructed from one.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    map: LinearMap,
    kraus: Option<Vec<ComplexMatrix>>,
}

impl QuantumChannel {
    /// Channel `ρ ↦ Σ K ρ K†`; rejects lists that are not trace preserving.
    pub fn from_kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if let Some(bad) = ops
            .iter()
            .find(|k| k.rows() != dim_out || k.cols() != dim_in)
        {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must all be {dim_out}x{dim_in}, found {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        let deviation = kraus_tp_deviation(&ops);
        if deviation > TOL_KRAUS_TP {
            return Err(Error::NotTracePreserving(deviation));
        }
        let mut superop = ComplexMatrix::zeros(dim_out * dim_out, dim_in * dim_in);
        for k in &ops {
            superop = &superop + &kron(&k.conj(), k);
        }
        Ok(Self {
            map: LinearMap {
                dim_in,
                dim_out,
                superop,
            },
            kraus: Some(ops),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus(vec![ComplexMatrix::identity(dim)]).expect("identity is trace preserving")
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(vec![u.clone()])
    }

    pub fn kraus(&self) -> Option<&[ComplexMatrix]> {
        self.kraus.as_deref()
    }

    pub fn as_map(&self) -> &LinearMap {
        &self.map
    }

    pub fn into_map(self) -> LinearMap {
        self.map
    }

    /// `self ∘ inner`; Kraus lists multiply pairwise.
    pub fn compose(&self, inner: &QuantumChannel) -> Result<QuantumChannel> {
        let map = compose(self, inner)?;
        let kraus = match (&self.kraus, &inner.kraus) {
            (Some(outer_ops), Some(inner_ops)) => Some(
                outer_ops
                    .iter()
                    .flat_map(|f| inner_ops.iter().map(move |g| f * g))
                    .collect(),
            ),
            _ => None,
        };
        Ok(Self { map, kraus })
    }

    pub fn tensor_power(&self, n: usize) -> Result<QuantumChannel> {
        let map = tensor_power(self, n)?;
        let kraus = self.kraus.as_ref().map(|ops| {
            let mut acc = ops.clone();
            for _ in 1..n {
                acc = acc
                    .iter()
                    .flat_map(|a| ops.iter().map(move |b| kron(a, b)))
                    .collect();
            }
            acc
        });
        Ok(Self { map, kraus })
    }
}

impl Superoperator for QuantumChannel {
    fn dim_in(&self) -> usize {
        self.map.dim_in
    }

    fn dim_out(&self) -> usize {
        self.map.dim_out
    }

    fn superoperator(&self) -> &ComplexMatrix {
        &self.map.superop
    }
}

/// Max entry of `|Σ K†K − I|`.
pub fn kraus_tp_deviation(ops: &[ComplexMatrix]) -> f64 {
    let dim_in = ops[0].cols();
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for k in ops {
        sum = &sum + &(&k.dagger() * k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(dim_in))
}

/// `outer ∘ inner` as a plain map.
pub fn compose(outer: &dyn Superoperator, inner: &dyn Superoperator) -> Result<LinearMap> {
    if inner.dim_out() != outer.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose map with input {} after map with output {}",
            outer.dim_in(),
            inner.dim_out()
        )));
    }
    Ok(LinearMap {
        dim_in: inner.dim_in(),
        dim_out: outer.dim_out(),
        superop: outer.superoperator().matmul(inner.superoperator())?,
    })
}

/// Superoperator of `a ⊗ b` acting on the composite with `a`'s factor first.
pub fn tensor(a: &dyn Superoperator, b: &dyn Superoperator) -> LinearMap {
    let (ai, ao) = (a.dim_in(), a.dim_out());
    let (bi, bo) = (b.dim_in(), b.dim_out());
    let (din, dout) = (ai * bi, ao * bo);
    let sa = a.superoperator();
    let sb = b.superoperator();
    let mut out = ComplexMatrix::zeros(dout * dout, din * din);
    let zero = Complex64::new(0.0, 0.0);

    let nz_b: Vec<(usize, usize, Complex64)> = (0..sb.rows())
        .flat_map(|r| (0..sb.cols()).map(move |c| (r, c)))
        .filter_map(|(r, c)| {
            let z = sb[(r, c)];
            (z != zero).then_some((r, c, z))
        })
        .collect();

    for ra in 0..sa.rows() {
        let (a1, b1) = (ra % ao, ra / ao);
        for ca in 0..sa.cols() {
            let za = sa[(ra, ca)];
            if za == zero {
                continue;
            }
            let (i1, j1) = (ca % ai, ca / ai);
            for &(rb, cb, zb) in &nz_b {
                let (a2, b2) = (rb % bo, rb / bo);
                let (i2, j2) = (cb % bi, cb / bi);
                let row = (b1 * bo + b2) * dout + (a1 * bo + a2);
                let col = (j1 * bi + j2) * din + (i1 * bi + i2);
                out[(row, col)] = za * zb;
            }
        }
    }
    LinearMap {
        dim_in: din,
        dim_out: dout,
        superop: out,
    }
}

/// n-fold tensor product of a map with itself.
pub fn tensor_power(map: &dyn Superoperator, n: usize) -> Result<LinearMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("tensor power needs n >= 1".into()));
    }
    let choi_dim = (map.dim_in() * map.dim_out())
        .checked_pow(n as u32)
        .unwrap_or(usize::MAX);
    if choi_dim > MAX_CHOI_DIM {
        return Err(Error::ResourceLimit(format!(
            "tensor power {n} would have Choi dimension {choi_dim} > {MAX_CHOI_DIM}"
        )));
    }
    let base = LinearMap::from_map(map);
    let mut acc = base.clone();
    for _ in 1..n {
        acc = tensor(&acc, &base);
    }
    Ok(acc)
}
