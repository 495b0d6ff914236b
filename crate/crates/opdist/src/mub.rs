//! Complete sets of mutually unbiased measurements.
//!
//! For prime dimension d, [`standard_mub`] builds the full set of d+1 bases:
//! the computational basis plus the d quadratic-phase bases with amplitudes
//! `exp[(2πi/d)(αk² + jk)]/√d`. The quadratic-phase family degenerates at
//! d = 2 (its phases are all ±1 and two of the bases coincide), so the qubit
//! set is the Pauli eigenbasis triple instead.
//!
//! [`verify_mub`] checks everything that makes such a set complete and
//! mutually unbiased, both at the projector level and in Bloch-space form.

use num_complex::Complex64;

use crate::bloch::{gell_mann_basis, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Default tolerance for [`verify_mub`]: every verified quantity is an O(1)
/// combination of unit-modulus phases, so double precision keeps deviations
/// far below this.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;

/// Tolerance on the projector-level invariants enforced at construction.
const BASIS_TOL: f64 = 1e-10;

/// One nondegenerate orthogonal measurement: d rank-1 projectors that are
/// mutually orthogonal and resolve the identity.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    dim: usize,
    projectors: Vec<ComplexMatrix>,
    label: String,
}

impl MeasurementBasis {
    /// Validates the projector set: pairwise `Tr(P_i P_j) = δ_ij` and
    /// `Σ_i P_i = 𝟙`, each within 1e−10, plus Hermiticity of every projector.
    pub fn new(label: impl Into<String>, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let d = projectors
            .first()
            .ok_or(Error::DimensionTooSmall { dim: 0 })?
            .require_square()?;
        if projectors.len() != d {
            return Err(Error::BufferLength {
                rows: d,
                cols: 1,
                found: projectors.len(),
            });
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, p) in projectors.iter().enumerate() {
            if p.require_square()? != d {
                return Err(Error::ShapeMismatch {
                    expected_rows: d,
                    expected_cols: d,
                    rows: p.rows(),
                    cols: p.cols(),
                });
            }
            let dev = p.hermiticity_deviation();
            if dev > BASIS_TOL {
                return Err(Error::NotHermitian { deviation: dev });
            }
            sum.add_scaled(p, 1.0);
            for (j, q) in projectors.iter().enumerate() {
                let ip = crate::linalg::hs_inner(p, q)?;
                let expect = if i == j { 1.0 } else { 0.0 };
                let dev = (ip - Complex64::new(expect, 0.0)).norm();
                if dev > BASIS_TOL {
                    return Err(Error::InvalidMeasurementBasis { deviation: dev });
                }
            }
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > BASIS_TOL {
            return Err(Error::InvalidMeasurementBasis { deviation: dev });
        }
        Ok(Self {
            dim: d,
            projectors,
            label: label.into(),
        })
    }

    /// Builds the basis from d orthonormal state vectors.
    pub fn from_states(label: impl Into<String>, states: &[Vec<Complex64>]) -> Result<Self> {
        let projectors = states.iter().map(|s| ComplexMatrix::outer(s, s)).collect();
        Self::new(label, projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }
}

/// A set of d+1 measurement bases intended to be mutually unbiased.
///
/// Construction only checks shape (d+1 bases of matching dimension); the
/// unbiasedness and completeness conditions are the business of
/// [`verify_mub`], so that deliberately broken sets can be represented and
/// reported on.
#[derive(Clone, Debug)]
pub struct MubSet {
    dim: usize,
    bases: Vec<MeasurementBasis>,
}

impl MubSet {
    pub fn new(bases: Vec<MeasurementBasis>) -> Result<Self> {
        let d = bases.first().map_or(0, MeasurementBasis::dim);
        if d < 2 {
            return Err(Error::DimensionTooSmall { dim: d });
        }
        if bases.len() != d + 1 {
            return Err(Error::BufferLength {
                rows: d + 1,
                cols: 1,
                found: bases.len(),
            });
        }
        if let Some(b) = bases.iter().find(|b| b.dim() != d) {
            return Err(Error::ShapeMismatch {
                expected_rows: d,
                expected_cols: d,
                rows: b.dim(),
                cols: b.dim(),
            });
        }
        Ok(Self { dim: d, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[MeasurementBasis] {
        &self.bases
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Builds the complete set of d+1 mutually unbiased bases for prime d.
///
/// For d = 2 this is the σz, σx, σy eigenbasis triple; for odd primes, the
/// computational basis followed by the d quadratic-phase bases (index α),
/// each with vectors `|φ^α_j⟩ = (1/√d) Σ_k exp[(2πi/d)(αk² + jk)] |k⟩` for
/// α, j, k running over 1..=d (component k stored at index k−1).
pub fn standard_mub(d: usize) -> Result<MubSet> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension { dim: d });
    }

    if d == 2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let x = vec![
            vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        ];
        let y = vec![
            vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)],
            vec![Complex64::new(h, 0.0), Complex64::new(0.0, -h)],
        ];
        return MubSet::new(vec![
            MeasurementBasis::from_states("z", &z)?,
            MeasurementBasis::from_states("x", &x)?,
            MeasurementBasis::from_states("y", &y)?,
        ]);
    }

    let mut bases = Vec::with_capacity(d + 1);
    let comp: Vec<Vec<Complex64>> = (0..d)
        .map(|j| {
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            v[j] = Complex64::new(1.0, 0.0);
            v
        })
        .collect();
    bases.push(MeasurementBasis::from_states("computational", &comp)?);

    let inv_sqrt_d = 1.0 / (d as f64).sqrt();
    for alpha in 1..=d as u64 {
        let states: Vec<Vec<Complex64>> = (1..=d as u64)
            .map(|j| {
                (1..=d as u64)
                    .map(|k| {
                        // reduce the exponent mod d before trig for exactness
                        let e = (alpha * k * k + j * k) % d as u64;
                        let angle = 2.0 * std::f64::consts::PI * e as f64 / d as f64;
                        Complex64::from_polar(inv_sqrt_d, angle)
                    })
                    .collect()
            })
            .collect();
        bases.push(MeasurementBasis::from_states(
            format!("quadratic-{alpha}"),
            &states,
        )?);
    }
    MubSet::new(bases)
}

/// Conjugates every projector of every basis by the unitary `u`.
///
/// All unbiasedness and completeness conditions are preserved, which makes
/// rotated sets the natural probe for invariance of the total distance to the
/// choice of complete set.
pub fn rotate_mub(m: &MubSet, u: &ComplexMatrix) -> Result<MubSet> {
    let d = u.require_square()?;
    if d != m.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: m.dim(),
            expected_cols: m.dim(),
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let dev = u.adjoint().mul(u).max_abs_diff(&ComplexMatrix::identity(d));
    if dev > 1e-9 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let u_dag = u.adjoint();
    let bases = m
        .bases()
        .iter()
        .map(|b| {
            let projectors = b
                .projectors()
                .iter()
                .map(|p| u.mul(p).mul(&u_dag).hermitized())
                .collect();
            MeasurementBasis::new(b.label(), projectors)
        })
        .collect::<Result<Vec<_>>>()?;
    MubSet::new(bases)
}

/// Verification report for a [`MubSet`]: the maximum deviation seen in each
/// of the five defining conditions, and the pass verdict at the given
/// tolerance.
#[derive(Clone, Debug)]
pub struct MubVerification {
    pub dim: usize,
    /// Intra-basis Bloch geometry: `a_i·a_j = d δ_ij − 1` and `Σ_i a_i = 0`.
    pub intra_basis_dev: f64,
    /// Pairwise unbiasedness: `Tr(B_j A_i) = 1/d` for distinct bases.
    pub overlap_dev: f64,
    /// Pairwise Bloch-subspace orthogonality: `a_i·b_j = 0`.
    pub cross_bloch_dev: f64,
    /// Per-basis `(1/d) Σ_i a_i a_iᵀ` is a rank-(d−1) projector.
    pub subspace_projector_dev: f64,
    /// Full set resolves the identity on the (d²−1)-dimensional Bloch space.
    pub resolution_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

impl MubVerification {
    pub fn max_deviation(&self) -> f64 {
        self.checks().iter().map(|&(_, v)| v).fold(0.0, f64::max)
    }

    /// Named deviations, in a fixed report order.
    pub fn checks(&self) -> [(&'static str, f64); 5] {
        [
            ("intra_basis_bloch_geometry", self.intra_basis_dev),
            ("pairwise_overlap", self.overlap_dev),
            ("cross_basis_bloch_orthogonality", self.cross_bloch_dev),
            ("subspace_projector", self.subspace_projector_dev),
            ("bloch_identity_resolution", self.resolution_dev),
        ]
    }
}

/// Bloch-space projector `(1/d) Σ_i a_i a_iᵀ` of one basis, returned as a
/// flat row-major (d²−1)×(d²−1) real matrix.
///
/// For a basis belonging to a valid complete set this is the orthogonal
/// projector onto the (d−1)-dimensional subspace spanned by the basis'
/// Bloch vectors; the d+1 such projectors are mutually orthogonal and sum to
/// the identity.
pub fn subspace_projector(basis: &MeasurementBasis, ob: &OperatorBasis) -> Result<Vec<f64>> {
    let n = ob.len();
    let d = basis.dim() as f64;
    let mut proj = vec![0.0; n * n];
    for p in basis.projectors() {
        let a = ob.coords_of(p)?;
        for r in 0..n {
            for c in 0..n {
                proj[r * n + c] += a[r] * a[c] / d;
            }
        }
    }
    Ok(proj)
}

fn real_mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// Runs all five completeness/unbiasedness checks and reports the maximum
/// deviation of each; the set passes iff every deviation is at most `tol`.
pub fn verify_mub(m: &MubSet, tol: f64) -> Result<MubVerification> {
    let d = m.dim();
    let df = d as f64;
    let ob = gell_mann_basis(d)?;
    let n = ob.len();

    let coords: Vec<Vec<Vec<f64>>> = m
        .bases()
        .iter()
        .map(|b| {
            b.projectors()
                .iter()
                .map(|p| ob.coords_of(p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    // (a) intra-basis Bloch geometry: a_i·a_j = dδ_ij − 1 and Σ_i a_i = 0
    let mut intra_dev: f64 = 0.0;
    for basis_coords in &coords {
        let mut sum = vec![0.0; n];
        for (i, a) in basis_coords.iter().enumerate() {
            for (s, x) in sum.iter_mut().zip(a) {
                *s += x;
            }
            for (j, b) in basis_coords.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let expect = if i == j { df - 1.0 } else { -1.0 };
                intra_dev = intra_dev.max((dot - expect).abs());
            }
        }
        intra_dev = sum.iter().fold(intra_dev, |acc, s| acc.max(s.abs()));
    }

    // (b) pairwise overlaps Tr(B_j A_i) = 1/d, (c) Bloch orthogonality a_i·b_j = 0
    let mut overlap_dev: f64 = 0.0;
    let mut cross_dev: f64 = 0.0;
    for (alpha, a_basis) in m.bases().iter().enumerate() {
        for (beta, b_basis) in m.bases().iter().enumerate() {
            if alpha == beta {
                continue;
            }
            for (i, p) in a_basis.projectors().iter().enumerate() {
                for (j, q) in b_basis.projectors().iter().enumerate() {
                    let ov = crate::linalg::hs_inner(p, q)?;
                    overlap_dev = overlap_dev.max((ov - Complex64::new(1.0 / df, 0.0)).norm());
                    let dot: f64 = coords[alpha][i]
                        .iter()
                        .zip(&coords[beta][j])
                        .map(|(x, y)| x * y)
                        .sum();
                    cross_dev = cross_dev.max(dot.abs());
                }
            }
        }
    }

    // (d) per-basis subspace projector: idempotent with trace d−1
    // (e) the d+1 projectors resolve the Bloch-space identity
    let mut proj_dev: f64 = 0.0;
    let mut resolution = vec![0.0; n * n];
    for basis in m.bases() {
        let p = subspace_projector(basis, &ob)?;
        let p2 = real_mat_mul(&p, &p, n);
        for (x, y) in p2.iter().zip(&p) {
            proj_dev = proj_dev.max((x - y).abs());
        }
        let tr: f64 = (0..n).map(|i| p[i * n + i]).sum();
        proj_dev = proj_dev.max((tr - (df - 1.0)).abs());
        for (r, x) in resolution.iter_mut().zip(&p) {
            *r += x;
        }
    }
    let mut resolution_dev: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let expect = if r == c { 1.0 } else { 0.0 };
            resolution_dev = resolution_dev.max((resolution[r * n + c] - expect).abs());
        }
    }

    let report = MubVerification {
        dim: d,
        intra_basis_dev: intra_dev,
        overlap_dev,
        cross_bloch_dev: cross_dev,
        subspace_projector_dev: proj_dev,
        resolution_dev,
        tol,
        pass: false,
    };
    let pass = report.max_deviation() <= tol;
    Ok(MubVerification { pass, ..report })
}
