//! Traceless Hermitian operator basis and generalized Bloch vectors.
//!
//! A d-dimensional state is expanded as `ρ = (1/d)(𝟙 + Σ_α r_α λ_α)` over the
//! d²−1 generalized Gell-Mann matrices `λ_α`, rescaled so that
//! `Tr λ_α λ_β = d δ_αβ`. The real coordinate vector `r` is the generalized
//! Bloch vector; its squared norm is at most d−1, with equality exactly for
//! pure states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// Imaginary residue tolerated when reading off a (mathematically real)
/// Bloch coordinate; anything larger is reported as an error.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// The d²−1 traceless Hermitian basis operators for one dimension.
///
/// Ordering is fixed so coordinates are reproducible across runs and
/// implementations: symmetric off-diagonal pairs in lexicographic (j, k)
/// order, then the antisymmetric pairs in the same order, then the d−1
/// diagonal operators. For d = 2 this is exactly (σx, σy, σz).
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim: usize,
    lambdas: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[ComplexMatrix] {
        &self.lambdas
    }

    /// Bloch coordinates `Tr(λ_α m)` of any d×d operator with real expansion
    /// coefficients (Hermitian operators in particular).
    pub fn coords_of(&self, m: &ComplexMatrix) -> Result<Vec<f64>> {
        let d = m.require_square()?;
        if d != self.dim {
            return Err(Error::ShapeMismatch {
                expected_rows: self.dim,
                expected_cols: self.dim,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let mut coords = Vec::with_capacity(self.lambdas.len());
        for lam in &self.lambdas {
            // Tr(λ m) = Σ_jk λ_jk m_kj
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                for k in 0..d {
                    acc += lam[(j, k)] * m[(k, j)];
                }
            }
            if acc.im.abs() > IMAG_RESIDUE_TOL {
                return Err(Error::ImaginaryResidue { residue: acc.im });
            }
            coords.push(acc.re);
        }
        Ok(coords)
    }
}

/// Generalized Bloch vector: d²−1 real coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    dim: usize,
    coords: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim });
        }
        if coords.len() != dim * dim - 1 {
            return Err(Error::BufferLength {
                rows: dim * dim - 1,
                cols: 1,
                found: coords.len(),
            });
        }
        if !coords.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum()
    }
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite
/// (all within the construction tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self {
            dim: matrix.rows(),
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The completely random state `𝟙/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::new_unchecked(ComplexMatrix::identity(d).scale(1.0 / d as f64))
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(d: usize, k: usize) -> Self {
        assert!(k < d, "basis index out of range");
        let mut m = ComplexMatrix::zeros(d, d);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self::new_unchecked(m)
    }

    /// Pure state `|ψ⟩⟨ψ|` from an (unnormalized) state vector.
    pub fn from_ket(amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall {
                dim: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-300 || !norm_sq.is_finite() {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / norm_sq.sqrt();
        let ket: Vec<Complex64> = amplitudes.iter().map(|z| z * inv).collect();
        Ok(Self::new_unchecked(ComplexMatrix::outer(&ket, &ket)))
    }
}

/// Builds the generalized Gell-Mann basis for dimension `d`, rescaled to
/// `Tr λ_α λ_β = d δ_αβ`.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let scale = (d as f64 / 2.0).sqrt();
    let mut lambdas = Vec::with_capacity(d * d - 1);

    // symmetric pairs: E_jk + E_kj
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(scale, 0.0);
            m[(k, j)] = Complex64::new(scale, 0.0);
            lambdas.push(m);
        }
    }
    // antisymmetric pairs: -i E_jk + i E_kj
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(0.0, -scale);
            m[(k, j)] = Complex64::new(0.0, scale);
            lambdas.push(m);
        }
    }
    // diagonal: sqrt(d / (l(l+1))) (Σ_{j<l} E_jj − l E_ll)
    for l in 1..d {
        let f = (d as f64 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = Complex64::new(f, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * f, 0.0);
        lambdas.push(m);
    }

    Ok(OperatorBasis { dim: d, lambdas })
}

/// Bloch coordinates of a density operator: `r_α = Tr(λ_α ρ)`.
pub fn encode(rho: &DensityOperator, basis: &OperatorBasis) -> Result<BlochVector> {
    let coords = basis.coords_of(rho.matrix())?;
    BlochVector::new(basis.dim(), coords)
}

/// Reconstructs `(1/d)(𝟙 + Σ_α r_α λ_α)` from Bloch coordinates.
///
/// The result is Hermitian with unit trace by construction, but not
/// necessarily positive semidefinite: for d > 2 not every vector inside the
/// Bloch ball corresponds to a state. Run [`validate_state`] to check.
pub fn decode(v: &BlochVector, basis: &OperatorBasis) -> Result<ComplexMatrix> {
    if v.dim() != basis.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: basis.dim(),
            expected_cols: basis.dim(),
            rows: v.dim(),
            cols: v.dim(),
        });
    }
    let d = basis.dim();
    let mut m = ComplexMatrix::identity(d);
    for (coord, lam) in v.coords().iter().zip(basis.lambdas()) {
        m.add_scaled(lam, *coord);
    }
    Ok(m.scale(1.0 / d as f64))
}

/// Purity `Tr ρ² = ‖ρ‖²`, in `[1/d, 1]`.
pub fn purity(rho: &DensityOperator) -> f64 {
    linalg::hs_norm_sq(rho.matrix()).expect("density operator matrix is square")
}

/// Checks that `m` is a density operator: Hermitian, unit trace, and with
/// spectrum bounded below by `-tol`. Each failed condition has its own error.
pub fn validate_state(m: &ComplexMatrix, tol: f64) -> Result<DensityOperator> {
    m.require_square()?;
    let dev = m.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::TraceNotOne { trace: tr.re });
    }
    let eig = linalg::eigh(m, tol)?;
    let min = eig.eigenvalues[0];
    if min < -tol {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    Ok(DensityOperator::new_unchecked(m.hermitized()))
}
