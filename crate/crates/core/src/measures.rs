//! Entanglement measures.
//!
//! The qutrit concurrence of a pure state is `|<ψ|ψ̃>|` with
//! `|ψ̃> = (O⊗O)|ψ*>`, where `O` is the flip operator of the local dimension
//! (see [`crate::operators`]). The mixed-state value is computed from the
//! spectrum of `ρ ρ̃`, which is obtained through the Hermitian matrix
//! `√ρ ρ̃ √ρ` so no non-Hermitian eigensolver is needed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_transpose, sqrt_psd_with_tol, trace_norm, ComplexMatrix, C64,
};
use crate::operators::FlipOperator;
use crate::states::{
    schmidt_decompose, DensityMatrix, Dims, PureState, SchmidtCoeffs, TOL_NEGATIVE_EIGENVALUE,
    TOL_NORM,
};

/// Eigenvalues of `√ρ ρ̃ √ρ` below this fraction of the largest one are
/// indistinguishable from rounding and are reported as exact zeros.
const SPECTRUM_NOISE_FLOOR: f64 = 1e-13;

/// The `λ_i`: square roots of the eigenvalues of `ρ ρ̃`, descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub lambdas: Vec<f64>,
}

impl SpectrumReport {
    /// `max{0, 2λ₁ - Σλ_i}`.
    pub fn concurrence(&self) -> f64 {
        let total: f64 = self.lambdas.iter().sum();
        let first = self.lambdas.first().copied().unwrap_or(0.0);
        (2.0 * first - total).max(0.0)
    }
}

fn flip_pair(dims: Dims) -> Result<ComplexMatrix> {
    if dims.a() != dims.b() {
        return Err(Error::DimensionMismatch {
            expected: "equal local dimensions".into(),
            found: dims.to_string(),
        });
    }
    Ok(FlipOperator::for_dimension(dims.a())?.pair())
}

/// `(O⊗O)|ψ*>`, not renormalized.
pub fn psi_tilde(psi: &PureState) -> Result<Vec<C64>> {
    let pair = flip_pair(psi.dims())?;
    let conj: Vec<C64> = psi.amplitudes().iter().map(C64::conj).collect();
    Ok(pair.mul_vec(&conj))
}

/// `|<ψ|ψ̃>|`; in `[0, 2]` for qutrits and `[0, 1]` for qubits.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    let tilde = psi_tilde(psi)?;
    Ok(crate::linalg::inner(psi.amplitudes(), &tilde).norm())
}

/// The six-term expansion of the qutrit concurrence in the amplitudes
/// `α_{ij}` of a 3x3 coefficient matrix.
pub fn concurrence_pure_expanded(alpha: &ComplexMatrix) -> Result<f64> {
    if alpha.nrows() != 3 || alpha.ncols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: "3x3 coefficient matrix".into(),
            found: format!("{}x{}", alpha.nrows(), alpha.ncols()),
        });
    }
    check_norm(alpha)?;
    let a = |i: usize, j: usize| alpha[(i, j)];
    let sq = |z: C64| z * z;
    let value = sq(a(0, 0) + a(1, 1) + a(2, 2))
        + sq(a(0, 1) + a(1, 2) + a(2, 0))
        + sq(a(0, 2) + a(2, 1) + a(1, 0))
        - sq(a(0, 0) + a(1, 2) + a(2, 1))
        - sq(a(0, 1) + a(1, 0) + a(2, 2))
        - sq(a(0, 2) + a(1, 1) + a(2, 0));
    Ok(value.norm())
}

fn check_norm(alpha: &ComplexMatrix) -> Result<()> {
    let norm_sq: f64 = alpha.data().iter().map(C64::norm_sqr).sum();
    if (norm_sq - 1.0).abs() > TOL_NORM {
        return Err(Error::InvalidNormalization { norm_sq });
    }
    Ok(())
}

/// `|(β₀+β₁+β₂)² - 1|`.
pub fn concurrence_schmidt(beta: &SchmidtCoeffs) -> f64 {
    let s: f64 = beta.beta().iter().sum();
    (s * s - 1.0).abs()
}

/// `2|α₀₀α₁₁ - α₀₁α₁₀|` for a 2x2 coefficient matrix.
pub fn concurrence_qubit_pure(alpha: &ComplexMatrix) -> Result<f64> {
    if alpha.nrows() != 2 || alpha.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2 coefficient matrix".into(),
            found: format!("{}x{}", alpha.nrows(), alpha.ncols()),
        });
    }
    check_norm(alpha)?;
    Ok(2.0 * (alpha[(0, 0)] * alpha[(1, 1)] - alpha[(0, 1)] * alpha[(1, 0)]).norm())
}

/// `2β₀β₁`.
pub fn concurrence_qubit_schmidt(b0: f64, b1: f64) -> Result<f64> {
    if let Some(&value) = [b0, b1].iter().find(|b| b.is_nan() || **b < 0.0) {
        return Err(Error::NegativeCoefficient { value });
    }
    let norm_sq = b0 * b0 + b1 * b1;
    if (norm_sq - 1.0).abs() > TOL_NORM {
        return Err(Error::InvalidNormalization { norm_sq });
    }
    Ok(2.0 * b0 * b1)
}

/// `ρ̃ = (O⊗O) ρ* (O⊗O)`.
pub fn rho_tilde(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let pair = flip_pair(rho.dims())?;
    Ok(&(&pair * &rho.matrix().conj()) * &pair)
}

pub fn lambda_spectrum(rho: &DensityMatrix) -> Result<SpectrumReport> {
    let root = sqrt_psd_with_tol(rho.matrix(), TOL_NEGATIVE_EIGENVALUE)?;
    let tilde = rho_tilde(rho)?;
    let sandwich = &(&root * &tilde) * &root;
    let eig = hermitian_eig(&sandwich)?;
    let largest = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = SPECTRUM_NOISE_FLOOR * largest.max(1.0);

    let mut lambdas = Vec::with_capacity(eig.values.len());
    for &mu in eig.values.iter().rev() {
        if mu < -TOL_NEGATIVE_EIGENVALUE {
            return Err(Error::NotPsd { min_eigenvalue: mu });
        }
        lambdas.push(if mu <= floor { 0.0 } else { mu.sqrt() });
    }
    Ok(SpectrumReport { lambdas })
}

/// `max{0, 2λ₁ - Σλ_i}`. For 3x3 states (including embedded qubit states)
/// the flip is `O₃⊗O₃`; native 2x2 states use `σ_y⊗σ_y`, i.e. Wootters'
/// concurrence.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    Ok(lambda_spectrum(rho)?.concurrence())
}

/// `(‖ρ^{T_A}‖₁ - 1) / 2`, clamped at zero.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), rho.dims().pair())?;
    Ok(((trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}

/// Twice the negativity.
pub fn robustness(rho: &DensityMatrix) -> Result<f64> {
    Ok(2.0 * negativity(rho)?)
}

/// `√(3((β₀β₁)² + (β₁β₂)² + (β₂β₀)²))`, defined for Schmidt coefficients only.
pub fn cereceda_concurrence(beta: &SchmidtCoeffs) -> f64 {
    let [b0, b1, b2] = beta.beta();
    (3.0 * ((b0 * b1).powi(2) + (b1 * b2).powi(2) + (b2 * b0).powi(2))).sqrt()
}

/// Cereceda concurrence of an arbitrary two-qutrit pure state, through its
/// Schmidt coefficients.
pub fn cereceda_concurrence_of(psi: &PureState) -> Result<f64> {
    Ok(cereceda_concurrence(&schmidt_decompose(psi)?.coeffs))
}

/// Closed forms for the qutrit Werner family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerClosedForms {
    /// `max{0, 8x/3 - 2/3}`.
    pub c3: f64,
    /// `(|1-3x| + |1+3x|)/4 - 1/2`, as commonly quoted. This is not the
    /// negativity of the family on `(1/4, 1/3]`; see [`werner_negativity`].
    pub negativity: f64,
    /// `½ ||6x-1| - 1|`, as commonly quoted. Equals `2·negativity` only for
    /// `x = 0` and `x ≥ 1/3`; on `(0, 1/3)` it is positive while the
    /// negativity vanishes.
    pub robustness: f64,
}

pub fn werner_closed_forms(x: f64) -> Result<WernerClosedForms> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
        });
    }
    Ok(WernerClosedForms {
        c3: (8.0 * x / 3.0 - 2.0 / 3.0).max(0.0),
        negativity: ((1.0 - 3.0 * x).abs() + (1.0 + 3.0 * x).abs()) / 4.0 - 0.5,
        robustness: 0.5 * ((6.0 * x - 1.0).abs() - 1.0).abs(),
    })
}

/// Negativity of the qutrit Werner state, `max{0, (4x-1)/3}`.
///
/// `ρ_w^{T_A} = (x/3)·SWAP + ((1-x)/9)·I`, whose only negative eigenvalue is
/// `(1-4x)/9` on the three-dimensional antisymmetric subspace.
pub fn werner_negativity(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
        });
    }
    Ok(((4.0 * x - 1.0) / 3.0).max(0.0))
}

/// `max{0, c}` for the embedded two-qubit Werner family, with
/// `c = ¼√(a + b) - ¼√(a - b) - ½(1 - x)`, `a = 1 + 12x - 5x²`,
/// `b = 4x√(1 + 12x - 9x²)`.
pub fn embedded_werner_closed_form(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
        });
    }
    let a = 1.0 + 12.0 * x - 5.0 * x * x;
    let b = 4.0 * x * (1.0 + 12.0 * x - 9.0 * x * x).sqrt();
    let c = 0.25 * (a + b).sqrt() - 0.25 * (a - b).max(0.0).sqrt() - 0.5 * (1.0 - x);
    Ok(c.max(0.0))
}
