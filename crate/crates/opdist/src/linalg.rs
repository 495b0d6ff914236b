//! Dense complex-matrix kernel: arithmetic, adjoint, trace, Hilbert-Schmidt
//! inner product, Hermitian eigendecomposition, and PSD matrix square root.
//!
//! Everything here is sized for small dense operators (dimension a few tens at
//! most), where a cyclic Jacobi eigensolver is unconditionally robust and
//! there is no point reaching for LAPACK.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for Hermiticity and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Sweep cap for the Jacobi eigensolver. Quadratic convergence means real
/// inputs finish in well under ten sweeps; hitting the cap is an error.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
///
/// Constructors reject non-finite entries, so downstream arithmetic never has
/// to re-check for NaN/Inf.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BufferLength {
                rows,
                cols,
                found: data.len(),
            });
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::BufferLength {
                    rows: nrows,
                    cols: ncols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Outer product `u v†`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product; panics on inner-dimension mismatch (callers that take
    /// user-supplied shapes check first and return a shape error).
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self += factor * other`, in place.
    pub fn add_scaled(&mut self, other: &Self, factor: f64) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-abs deviation from `self = self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(a + a†)/2`; removes roundoff asymmetry from a nominally Hermitian
    /// matrix.
    pub fn hermitized(&self) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigendecomposition of a Hermitian matrix: `a = V diag(w) V†` with real
/// eigenvalues `w` sorted ascending and orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Hilbert-Schmidt inner product `Tr(a† b)`.
///
/// Conjugate-symmetric: swapping the arguments conjugates the result.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    let da = a.require_square()?;
    let db = b.require_square()?;
    if da != db {
        return Err(Error::ShapeMismatch {
            expected_rows: da,
            expected_cols: da,
            rows: db,
            cols: db,
        });
    }
    // Tr(a† b) = Σ_ij conj(a_ij) b_ij
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Squared Hilbert-Schmidt norm `Tr(a† a)`; real and nonnegative.
pub fn hs_norm_sq(a: &ComplexMatrix) -> Result<f64> {
    a.require_square()?;
    Ok(a.entries().iter().map(|z| z.norm_sqr()).sum())
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// `tol` bounds the accepted Hermiticity deviation of the input. Fails with a
/// convergence error if the off-diagonal mass has not collapsed after
/// [`MAX_JACOBI_SWEEPS`] sweeps.
pub fn eigh(a: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let d = a.require_square()?;
    let dev = a.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }

    let mut m = a.hermitized();
    let mut v = ComplexMatrix::identity(d);

    let target = f64::EPSILON * m.frobenius_norm() * d as f64;
    let mut sweeps = 0;
    while off_diagonal_norm(&m) > target {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    // Sort eigenvalues ascending, carrying eigenvector columns along.
    let raw: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(d, d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..d {
            eigenvectors[(row, new_col)] = v[(row, old_col)];
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let d = m.rows();
    let mut s = 0.0;
    for p in 0..d {
        for q in 0..d {
            if p != q {
                s += m[(p, q)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation annihilating `m[(p, q)]`.
///
/// The plane rotation is `U = diag(1, e^{-iφ}) · R(θ)` restricted to the
/// `(p, q)` plane, where `φ` is the phase of `m[(p, q)]` and `θ` the classic
/// symmetric-Jacobi angle for the phase-stripped 2x2 block.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs_apq = apq.norm();
    if abs_apq == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let w_conj = (apq / abs_apq).conj(); // e^{-iφ}

    let tau = (aqq - app) / (2.0 * abs_apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = m.rows();
    for k in 0..d {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        let new_kp = akp * c - (w_conj * akq) * s;
        let new_kq = akp * s + (w_conj * akq) * c;
        m[(k, p)] = new_kp;
        m[(k, q)] = new_kq;
        m[(p, k)] = new_kp.conj();
        m[(q, k)] = new_kq.conj();
    }
    m[(p, p)] = Complex64::new(app - t * abs_apq, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * abs_apq, 0.0);
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);

    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - (w_conj * vkq) * s;
        v[(k, q)] = vkp * s + (w_conj * vkq) * c;
    }
}

/// Hermitian PSD square root: returns `s` with `s·s = a`.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero before the square root;
/// anything below `-tol` is a positivity violation.
pub fn psd_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = eigh(a, tol)?;
    let d = a.rows();
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -tol {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
    }
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let v = &eig.eigenvectors;
    let mut s = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &r) in roots.iter().enumerate() {
                acc += v[(i, k)] * r * v[(j, k)].conj();
            }
            s[(i, j)] = acc;
        }
    }
    Ok(s.hermitized())
}
