//! Two-party pure and mixed states, the Werner families, Schmidt
//! decomposition and seeded random states.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron_vec, norm, orthonormalize_columns, svd, ComplexMatrix, C64, ONE, ZERO,
};

/// Normalization tolerance for pure states and Schmidt vectors.
pub const TOL_NORM: f64 = 1e-12;
/// Hermiticity and trace tolerance for density matrices.
pub const TOL_DENSITY: f64 = 1e-12;
/// Most negative eigenvalue a density matrix may have.
pub const TOL_NEGATIVE_EIGENVALUE: f64 = 1e-10;

/// Local dimensions `(d_A, d_B)`, each 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Dims {
    a: usize,
    b: usize,
}

impl Dims {
    pub const QUTRITS: Dims = Dims { a: 3, b: 3 };
    pub const QUBITS: Dims = Dims { a: 2, b: 2 };

    pub fn new(a: usize, b: usize) -> Result<Self> {
        for d in [a, b] {
            if !(2..=3).contains(&d) {
                return Err(Error::UnsupportedDimension(d));
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(self) -> usize {
        self.a
    }

    pub fn b(self) -> usize {
        self.b
    }

    pub fn total(self) -> usize {
        self.a * self.b
    }

    pub fn pair(self) -> (usize, usize) {
        (self.a, self.b)
    }
}

impl TryFrom<[usize; 2]> for Dims {
    type Error = Error;

    fn try_from([a, b]: [usize; 2]) -> Result<Self> {
        Dims::new(a, b)
    }
}

impl From<Dims> for [usize; 2] {
    fn from(d: Dims) -> Self {
        [d.a, d.b]
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.a, self.b)
    }
}

/// A normalized two-party ket with amplitudes `α_{ij}` stored row-major
/// (`i` indexes the first party).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Dims, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} amplitudes for {dims}", dims.total()),
                found: format!("{} amplitudes", amplitudes.len()),
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(C64::norm_sqr).sum();
        if (norm_sq - 1.0).abs() > TOL_NORM {
            return Err(Error::InvalidNormalization { norm_sq });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(dims: Dims, mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidNormalization { norm_sq: n * n });
        }
        amplitudes.iter_mut().for_each(|z| *z /= n);
        Self::new(dims, amplitudes)
    }

    /// Product basis ket `|i, j>`.
    pub fn basis(dims: Dims, i: usize, j: usize) -> Result<Self> {
        if i >= dims.a || j >= dims.b {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                min: 0,
                max: dims.a.min(dims.b) - 1,
            });
        }
        let mut amps = vec![ZERO; dims.total()];
        amps[i * dims.b + j] = ONE;
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amplitudes[i * self.dims.b + j]
    }

    /// The `d_A x d_B` matrix of amplitudes `α_{ij}`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dims.a, self.dims.b, self.amplitudes.clone())
            .expect("amplitudes are finite and sized")
    }

    pub fn from_coefficient_matrix(alpha: &ComplexMatrix) -> Result<Self> {
        let dims = Dims::new(alpha.nrows(), alpha.ncols())?;
        Self::new(dims, alpha.data().to_vec())
    }

    /// `|ψ><ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims,
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// Zero-pads a two-qubit state into the two-qutrit space.
    pub fn embed_in_qutrits(&self) -> Result<Self> {
        if self.dims != Dims::QUBITS {
            return Err(Error::DimensionMismatch {
                expected: "2x2 state".into(),
                found: format!("{} state", self.dims),
            });
        }
        let mut amps = vec![ZERO; 9];
        for i in 0..2 {
            for j in 0..2 {
                amps[i * 3 + j] = self.amplitude(i, j);
            }
        }
        Self::new(Dims::QUTRITS, amps)
    }
}

/// Schmidt coefficients `(β₀, β₁, β₂)`: nonnegative with unit sum of squares.
/// Order is not constrained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtCoeffs {
    beta: [f64; 3],
}

impl SchmidtCoeffs {
    pub fn new(beta: [f64; 3]) -> Result<Self> {
        if let Some(&value) = beta.iter().find(|b| !b.is_finite() || **b < 0.0) {
            return Err(Error::NegativeCoefficient { value });
        }
        let norm_sq: f64 = beta.iter().map(|b| b * b).sum();
        if (norm_sq - 1.0).abs() > TOL_NORM {
            return Err(Error::InvalidNormalization { norm_sq });
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    /// Coefficients sorted in descending order.
    pub fn descending(&self) -> [f64; 3] {
        let mut b = self.beta;
        b.sort_by(|x, y| y.total_cmp(x));
        b
    }

    /// The two-parameter family `(√(x/2), √(x/2), √(1-x))`.
    pub fn fig1_family(x: f64) -> Result<Self> {
        check_unit_interval("x", x)?;
        let h = (x / 2.0).sqrt();
        Self::new([h, h, (1.0 - x).sqrt()])
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Dims, matrix: ComplexMatrix) -> Result<Self> {
        let n = dims.total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} matrix for {dims}"),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > TOL_DENSITY {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TOL_DENSITY {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values[0];
        if min < -TOL_NEGATIVE_EIGENVALUE {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self { dims, matrix })
    }

    /// `Σ p_i |ψ_i><ψ_i|`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(f64, &PureState)]) -> Result<Self> {
        let dims = terms
            .first()
            .map(|(_, s)| s.dims)
            .ok_or(Error::Parse("empty mixture".into()))?;
        let n = dims.total();
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, s) in terms {
            if s.dims != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.to_string(),
                    found: s.dims.to_string(),
                });
            }
            if p.is_nan() || *p < 0.0 {
                return Err(Error::ParameterOutOfRange {
                    name: "weight",
                    value: *p,
                });
            }
            m = &m + &ComplexMatrix::outer(&s.amplitudes, &s.amplitudes).scale_real(*p);
        }
        Self::new(dims, m)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value: x })
    }
}

fn basis_index(dims: Dims, i: usize, j: usize) -> usize {
    i * dims.b + j
}

/// `Σ β_i |i, i>`.
pub fn schmidt_state(beta: &SchmidtCoeffs) -> PureState {
    let mut amps = vec![ZERO; 9];
    for (i, &b) in beta.beta.iter().enumerate() {
        amps[basis_index(Dims::QUTRITS, i, i)] = C64::new(b, 0.0);
    }
    PureState::new(Dims::QUTRITS, amps).expect("Schmidt vector is normalized")
}

/// `Σ_i |i,i> / √3`.
pub fn maximally_entangled_qutrits() -> PureState {
    let b = 1.0 / 3f64.sqrt();
    schmidt_state(&SchmidtCoeffs { beta: [b, b, b] })
}

/// Qutrit Werner state `(x/3) Σ_{ij} |ii><jj| + ((1-x)/9) I`.
pub fn werner(x: f64) -> Result<DensityMatrix> {
    check_unit_interval("x", x)?;
    let d = Dims::QUTRITS;
    let m = ComplexMatrix::from_fn(9, 9, |r, c| {
        let mut v = 0.0;
        if r % 4 == 0 && c % 4 == 0 {
            // r, c in {|00>, |11>, |22>} = indices {0, 4, 8}
            v += x / 3.0;
        }
        if r == c {
            v += (1.0 - x) / 9.0;
        }
        C64::new(v, 0.0)
    });
    DensityMatrix::new(d, m)
}

/// Werner state of the embedded qubit pair: `x |Φ+><Φ+| + ((1-x)/4) Π`,
/// where `Π` projects onto span{|ij> : i, j ∈ {0, 1}} inside the qutrit space.
pub fn embedded_qubit_werner(x: f64) -> Result<DensityMatrix> {
    check_unit_interval("x", x)?;
    let block = [0usize, 1, 3, 4];
    let bell = [0usize, 4];
    let m = ComplexMatrix::from_fn(9, 9, |r, c| {
        let mut v = 0.0;
        if bell.contains(&r) && bell.contains(&c) {
            v += x / 2.0;
        }
        if r == c && block.contains(&r) {
            v += (1.0 - x) / 4.0;
        }
        C64::new(v, 0.0)
    });
    DensityMatrix::new(Dims::QUTRITS, m)
}

/// Native 4x4 two-qubit Werner state `x |Φ+><Φ+| + ((1-x)/4) I`.
pub fn qubit_werner(x: f64) -> Result<DensityMatrix> {
    check_unit_interval("x", x)?;
    let m = ComplexMatrix::from_fn(4, 4, |r, c| {
        let mut v = 0.0;
        if (r == 0 || r == 3) && (c == 0 || c == 3) {
            v += x / 2.0;
        }
        if r == c {
            v += (1.0 - x) / 4.0;
        }
        C64::new(v, 0.0)
    });
    DensityMatrix::new(Dims::QUBITS, m)
}

/// Schmidt decomposition `|ψ> = Σ_k β_k |a_k> ⊗ |b_k>`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending coefficients; zero-padded to three entries for qubits.
    pub coeffs: SchmidtCoeffs,
    /// Columns are the local kets `|a_k>` of the first party.
    pub left: ComplexMatrix,
    /// Columns are the local kets `|b_k>` of the second party.
    pub right: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> Vec<C64> {
        let (da, db) = (self.left.nrows(), self.right.nrows());
        let mut out = vec![ZERO; da * db];
        for (k, &b) in self.coeffs.beta.iter().enumerate().take(da.min(db)) {
            let term = kron_vec(&self.left.column(k), &self.right.column(k));
            for (o, t) in out.iter_mut().zip(term) {
                *o += t * b;
            }
        }
        out
    }
}

pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtDecomposition> {
    let s = svd(&psi.coefficient_matrix())?;
    let mut beta = [0.0; 3];
    for (b, sv) in beta.iter_mut().zip(&s.singular_values) {
        *b = *sv;
    }
    // Absorb rounding so the coefficients satisfy the unit-norm invariant.
    let n = beta.iter().map(|b| b * b).sum::<f64>().sqrt();
    beta.iter_mut().for_each(|b| *b /= n);
    Ok(SchmidtDecomposition {
        coeffs: SchmidtCoeffs::new(beta)?,
        left: s.u,
        right: s.v.conj(),
    })
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn draw_pure(rng: &mut impl Rng, dims: Dims) -> PureState {
    let amps: Vec<C64> = (0..dims.total()).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(dims, amps).expect("Gaussian vector is nonzero")
}

/// Pure state with normalized complex-Gaussian amplitudes.
pub fn random_pure(seed: u64, dims: Dims) -> PureState {
    draw_pure(&mut rng_for(seed), dims)
}

/// Mixture of `rank` random pure projectors with flat-Dirichlet weights.
///
/// The pure states are drawn first from the same stream `random_pure` uses,
/// so `random_density(s, d, 1)` is the projector onto `random_pure(s, d)`.
pub fn random_density(seed: u64, dims: Dims, rank: usize) -> Result<DensityMatrix> {
    if rank == 0 || rank > dims.total() {
        return Err(Error::ParameterOutOfRange {
            name: "rank",
            value: rank as f64,
        });
    }
    let mut rng = rng_for(seed);
    let states: Vec<PureState> = (0..rank).map(|_| draw_pure(&mut rng, dims)).collect();
    let raw: Vec<f64> = (0..rank).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let terms: Vec<(f64, &PureState)> = raw.iter().map(|w| w / total).zip(&states).collect();
    DensityMatrix::mixture(&terms)
}

/// Haar-random `n x n` unitary (Gram-Schmidt on a complex Gaussian matrix).
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
        if let Ok(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Seeded variant of [`random_unitary`].
pub fn random_unitary_seeded(seed: u64, n: usize) -> ComplexMatrix {
    random_unitary(&mut rng_for(seed), n)
}
