//! Small dense complex linear algebra.
//!
//! Everything in this crate lives in spaces of dimension at most a dozen, so
//! the routines here favour accuracy and simplicity over asymptotic speed:
//! a cyclic Jacobi eigensolver for Hermitian matrices, an SVD built on top of
//! it, and the handful of matrix utilities the measures need.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum entrywise deviation from hermiticity accepted by the eigensolver.
pub const TOL_HERMITIAN: f64 = 1e-12;
/// Eigenvalues above `-TOL_PSD` are treated as zero by [`sqrt_psd`].
pub const TOL_PSD: f64 = 1e-12;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: format!("rows of length {ncols}"),
                found: format!("row of length {}", bad.len()),
            });
        }
        Self::new(nrows, ncols, rows.concat())
    }

    /// Real-valued convenience constructor; mostly useful in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let diag: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&diag)
    }

    /// Outer product `u v^H`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let ncols = columns.len();
        let nrows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != nrows) {
            return Err(Error::DimensionMismatch {
                expected: format!("columns of length {nrows}"),
                found: "ragged columns".into(),
            });
        }
        Ok(Self::from_fn(nrows, ncols, |i, j| columns[j][i]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(C64::conj).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `A - A^H`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
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
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
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
            for z in self.row(i) {
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: entry `(i*rB + k, j*cB + l)` is `A(i,j) * B(k,l)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * rb, a.cols * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Rebuilds `V diag(f(λ)) V^H`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let v = self.vector(k);
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized before iterating, so entries within
/// [`TOL_HERMITIAN`] of hermiticity are accepted.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = a.hermiticity_defect();
    if defect > TOL_HERMITIAN {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let n = a.rows;
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_OFF_TOL * m.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation annihilating `m[(p, q)]`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = m[(p, q)];
    let abs = g.norm();
    if abs < f64::MIN_POSITIVE {
        return;
    }
    let n = m.rows;
    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
    let phase = (g / abs).conj();
    let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = akp * c - akq * phase * s;
        m[(k, q)] = akp * s + akq * phase * c;
    }
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = apk * c - aqk * phase.conj() * s;
        m[(q, k)] = apk * s + aqk * phase.conj() * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * phase * s;
        v[(k, q)] = vkp * s + vkq * phase * c;
    }
}

/// Singular value decomposition `M = U Σ V^H`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending, nonnegative; length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// `rows x rows` unitary.
    pub u: ComplexMatrix,
    /// `cols x cols` unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (r, c) = (self.u.rows, self.v.rows);
        let sigma = ComplexMatrix::from_fn(r, c, |i, j| match self.singular_values.get(i) {
            Some(&s) if i == j => C64::new(s, 0.0),
            _ => ZERO,
        });
        &(&self.u * &sigma) * &self.v.adjoint()
    }
}

/// SVD through the Hermitian eigendecomposition of `M^H M`.
///
/// Singular values are recomputed as `|M v_k|` rather than as square roots
/// of the eigenvalues, which keeps small values accurate.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = (m.rows, m.cols);
    let gram = &m.adjoint() * m;
    let eig = hermitian_eig(&gram)?;

    let mut triplets: Vec<(f64, Vec<C64>, Vec<C64>)> = (0..cols)
        .rev()
        .map(|k| {
            let vk = eig.vector(k);
            let w = m.mul_vec(&vk);
            let sigma = norm(&w);
            (sigma, w, vk)
        })
        .collect();
    triplets.sort_by(|a, b| b.0.total_cmp(&a.0));

    let scale = triplets.first().map_or(0.0, |t| t.0);
    let cutoff = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut left: Vec<Vec<C64>> = Vec::with_capacity(rows);
    let mut singular_values = Vec::with_capacity(rows.min(cols));
    let mut spanning = true;
    for (sigma, w, _) in triplets.iter().take(rows.min(cols)) {
        singular_values.push(*sigma);
        // Past the numerical rank the left vectors come from basis completion.
        if spanning && *sigma > cutoff {
            match orthogonalize_against(w, &left) {
                Some(u) => left.push(u),
                None => spanning = false,
            }
        } else {
            spanning = false;
        }
    }
    complete_basis(&mut left, rows);
    let right: Vec<Vec<C64>> = triplets.into_iter().map(|t| t.2).collect();

    Ok(Svd {
        singular_values,
        u: ComplexMatrix::from_columns(&left)?,
        v: ComplexMatrix::from_columns(&right)?,
    })
}

/// Transpose on the first tensor factor: `((i,μ),(j,ν)) <- ((j,μ),(i,ν))`.
pub fn partial_transpose(rho: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !rho.is_square() || rho.rows != da * db {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0} matrix for dims ({da}, {db})", da * db),
            found: format!("{}x{}", rho.rows, rho.cols),
        });
    }
    Ok(ComplexMatrix::from_fn(rho.rows, rho.cols, |r, c| {
        let (i, mu) = (r / db, r % db);
        let (j, nu) = (c / db, c % db);
        rho[(j * db + mu, i * db + nu)]
    }))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.values.iter().map(|l| l.abs()).sum())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_with_tol(a, TOL_PSD)
}

/// As [`sqrt_psd`], clamping eigenvalues in `[-tol, 0)` to zero.
pub fn sqrt_psd_with_tol(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Removes the components of `w` along the orthonormal `basis` (two passes of
/// modified Gram-Schmidt) and normalizes. `None` if nothing is left.
fn orthogonalize_against(w: &[C64], basis: &[Vec<C64>]) -> Option<Vec<C64>> {
    let start = norm(w);
    if start == 0.0 {
        return None;
    }
    let mut u = w.to_vec();
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, &u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
    }
    let n = norm(&u);
    if n <= 1e-8 * start {
        return None;
    }
    u.iter_mut().for_each(|x| *x /= n);
    Some(u)
}

/// Extends an orthonormal set to a full basis of `C^dim` with standard vectors.
fn complete_basis(basis: &mut Vec<Vec<C64>>, dim: usize) {
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = vec![ZERO; dim];
        e[k] = ONE;
        if let Some(u) = orthogonalize_against(&e, basis) {
            basis.push(u);
        }
    }
}

/// Orthonormalizes the columns of `m` in place order (modified Gram-Schmidt,
/// reorthogonalized). Columns must be linearly independent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m.cols);
    for j in 0..m.cols {
        let col = m.column(j);
        let u = orthogonalize_against(&col, &basis).ok_or(Error::NotIsometry {
            deviation: f64::INFINITY,
        })?;
        basis.push(u);
    }
    ComplexMatrix::from_columns(&basis)
}
