//! Ensemble decompositions and a numerical convex-roof minimizer.
//!
//! Every decomposition of `ρ` into `m ≥ rank(ρ)` members is obtained from an
//! `m x r` isometry `V` acting on the subnormalized eigenvectors
//! `ê_j = √μ_j |e_j>`: member `i` is `ψ̂_i = Σ_j V_ij ê_j` with weight
//! `<ψ̂_i|ψ̂_i>`. Because `<ψ|ψ̃>` is a bilinear form in `ψ*`, the average
//! concurrence of the ensemble reduces to `Σ_i |(V̄ τ V̄ᵀ)_ii|` for the fixed
//! symmetric matrix `τ_jk = <ê_j|(O⊗O)|ê_k*>`, which is what the optimizer
//! evaluates.

use std::f64::consts::PI;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, orthonormalize_columns, ComplexMatrix, C64, ONE, ZERO};
use crate::measures::{concurrence_mixed, concurrence_pure};
use crate::operators::FlipOperator;
use crate::states::{random_unitary, DensityMatrix, PureState};

/// Eigenvalues of `ρ` above this count towards its rank.
pub const RANK_TOL: f64 = 1e-12;
/// Members lighter than this are dropped from an ensemble.
pub const MIN_WEIGHT: f64 = 1e-14;
/// Orthonormality tolerance for [`Isometry`].
pub const TOL_ISOMETRY: f64 = 1e-10;
/// A minimum below the closed form by more than this is reported as a finding.
pub const CONJECTURE_TOL: f64 = 1e-8;

/// An `m x r` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    v: ComplexMatrix,
}

impl Isometry {
    pub fn new(v: ComplexMatrix) -> Result<Self> {
        let gram = &v.adjoint() * &v;
        let deviation = gram.max_abs_diff(&ComplexMatrix::identity(v.ncols()));
        if v.nrows() < v.ncols() || deviation > TOL_ISOMETRY {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self { v })
    }

    /// First `r` columns of the `m x m` identity.
    pub fn identity(m: usize, r: usize) -> Result<Self> {
        Self::new(ComplexMatrix::from_fn(m, r, |i, j| {
            if i == j {
                ONE
            } else {
                ZERO
            }
        }))
    }

    /// First `r` columns of a Haar-random `m x m` unitary.
    pub fn random(rng: &mut ChaCha8Rng, m: usize, r: usize) -> Result<Self> {
        let u = random_unitary(rng, m);
        Self::new(ComplexMatrix::from_fn(m, r, |i, j| u[(i, j)]))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn members(&self) -> usize {
        self.v.nrows()
    }

    pub fn rank(&self) -> usize {
        self.v.ncols()
    }
}

/// Weighted pure states `{(p_i, ψ_i)}`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|(p, _)| p).sum()
    }

    /// `Σ p_i |ψ_i><ψ_i|`, unvalidated.
    pub fn density_matrix(&self) -> ComplexMatrix {
        let n = self
            .members
            .first()
            .map_or(0, |(_, s)| s.amplitudes().len());
        self.members
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, (p, s)| {
                &acc + &ComplexMatrix::outer(s.amplitudes(), s.amplitudes()).scale_real(*p)
            })
    }
}

/// The subnormalized eigenvectors `ê_j = √μ_j |e_j>` of `ρ` for eigenvalues
/// above [`RANK_TOL`], largest first.
fn weighted_eigenvectors(rho: &DensityMatrix) -> Result<Vec<Vec<C64>>> {
    let eig = hermitian_eig(rho.matrix())?;
    Ok(eig
        .values
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &mu)| mu > RANK_TOL)
        .map(|(k, &mu)| {
            let s = mu.sqrt();
            eig.vector(k).into_iter().map(|z| z * s).collect()
        })
        .collect())
}

pub fn rank(rho: &DensityMatrix) -> Result<usize> {
    Ok(weighted_eigenvectors(rho)?.len())
}

pub fn ensemble_from_isometry(rho: &DensityMatrix, v: &Isometry) -> Result<Ensemble> {
    let frame = weighted_eigenvectors(rho)?;
    if v.rank() != frame.len() {
        return Err(Error::RankMismatch {
            rank: frame.len(),
            found: v.rank(),
        });
    }
    let n = rho.dims().total();
    let mut members = Vec::with_capacity(v.members());
    for i in 0..v.members() {
        let mut psi = vec![ZERO; n];
        for (j, e) in frame.iter().enumerate() {
            let coeff = v.matrix()[(i, j)];
            for (a, b) in psi.iter_mut().zip(e) {
                *a += coeff * b;
            }
        }
        let p: f64 = psi.iter().map(C64::norm_sqr).sum();
        if p < MIN_WEIGHT {
            continue;
        }
        members.push((p, PureState::normalized(rho.dims(), psi)?));
    }
    Ok(Ensemble { members })
}

/// `Σ_i p_i C(ψ_i)`.
pub fn average_concurrence(ensemble: &Ensemble) -> Result<f64> {
    ensemble
        .members
        .iter()
        .map(|(p, s)| Ok(p * concurrence_pure(s)?))
        .sum()
}

/// `τ_jk = <ê_j|(O⊗O)|ê_k*>`; complex symmetric, `r x r`.
pub fn tau_matrix(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let dims = rho.dims();
    if dims.a() != dims.b() {
        return Err(Error::DimensionMismatch {
            expected: "equal local dimensions".into(),
            found: dims.to_string(),
        });
    }
    let pair = FlipOperator::for_dimension(dims.a())?.pair();
    let frame = weighted_eigenvectors(rho)?;
    let flipped: Vec<Vec<C64>> = frame
        .iter()
        .map(|e| pair.mul_vec(&e.iter().map(C64::conj).collect::<Vec<_>>()))
        .collect();
    let r = frame.len();
    Ok(ComplexMatrix::from_fn(r, r, |j, k| {
        crate::linalg::inner(&frame[j], &flipped[k])
    }))
}

/// `Σ_i |(V̄ τ V̄ᵀ)_ii|`: the average concurrence of the ensemble built from
/// `v`, without forming the ensemble.
pub fn fast_average_concurrence(tau: &ComplexMatrix, v: &Isometry) -> f64 {
    let t = tau.conj();
    let vm = v.matrix();
    (0..vm.nrows())
        .map(|i| quadratic(&t, vm.row(i), vm.row(i)).norm())
        .sum()
}

/// `uᵀ t w`.
fn quadratic(t: &ComplexMatrix, u: &[C64], w: &[C64]) -> C64 {
    let tw = t.mul_vec(w);
    u.iter().zip(&tw).map(|(a, b)| a * b).sum()
}

/// Settings for [`minimize_decomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinimizeOptions {
    /// Ensemble size; `None` means `rank(ρ)`.
    pub members: Option<usize>,
    pub restarts: usize,
    /// Maximum number of full coordinate sweeps per restart.
    pub budget: usize,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            members: None,
            restarts: 32,
            budget: 200,
            seed: 0,
        }
    }
}

/// Run report shared with the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeReport {
    /// SHA-256 over the local dimensions and the matrix entries.
    pub input_digest: String,
    pub m: usize,
    pub rank: usize,
    pub restarts: usize,
    pub budget: usize,
    pub seed: u64,
    pub min_value: f64,
    /// `max{0, 2λ₁ - Σλ_i}` for the same state.
    pub closed_form: f64,
    /// `min_value - closed_form`.
    pub gap: f64,
    /// Set when `gap < -CONJECTURE_TOL`.
    pub finding: bool,
    /// Best value after each restart, in restart order.
    pub best_by_restart: Vec<f64>,
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub min_value: f64,
    pub ensemble: Ensemble,
    pub isometry: Isometry,
    pub report: MinimizeReport,
}

pub fn state_digest(rho: &DensityMatrix) -> String {
    let mut hasher = Sha256::new();
    for d in <[usize; 2]>::from(rho.dims()) {
        hasher.update((d as u64).to_le_bytes());
    }
    for z in rho.matrix().data() {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Minimizes the average concurrence over decompositions of `ρ` with a fixed
/// number of members. The result is an upper bound on the convex roof for
/// that ensemble size.
pub fn minimize_decomposition(
    rho: &DensityMatrix,
    options: &MinimizeOptions,
) -> Result<MinimizeOutcome> {
    let start = Instant::now();
    let tau = tau_matrix(rho)?;
    let r = tau.nrows();
    let m = options.members.unwrap_or(r);
    if m < r {
        return Err(Error::ParameterOutOfRange {
            name: "members",
            value: m as f64,
        });
    }
    if options.restarts == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "restarts",
            value: 0.0,
        });
    }

    let runs: Vec<(f64, Vec<Vec<C64>>)> = (0..options.restarts)
        .into_par_iter()
        .map(|k| {
            let start = if k == 0 {
                Isometry::identity(m, r)?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(options.seed, k));
                Isometry::random(&mut rng, m, r)?
            };
            Ok(RotationSearch::new(&tau, &start).run(options.budget))
        })
        .collect::<Result<_>>()?;

    let mut best_by_restart = Vec::with_capacity(runs.len());
    let mut best = 0;
    for (k, (value, _)) in runs.iter().enumerate() {
        if *value < runs[best].0 {
            best = k;
        }
        best_by_restart.push(runs[best].0);
    }

    let rows = &runs[best].1;
    let isometry = Isometry::new(ComplexMatrix::from_fn(m, r, |i, j| rows[i][j]))?;
    let ensemble = ensemble_from_isometry(rho, &isometry)?;
    let min_value = average_concurrence(&ensemble)?;
    let closed_form = concurrence_mixed(rho)?;
    let gap = min_value - closed_form;

    let report = MinimizeReport {
        input_digest: state_digest(rho),
        m,
        rank: r,
        restarts: options.restarts,
        budget: options.budget,
        seed: options.seed,
        min_value,
        closed_form,
        gap,
        finding: gap < -CONJECTURE_TOL,
        best_by_restart,
        wall_time: start.elapsed().as_secs_f64(),
    };
    Ok(MinimizeOutcome {
        min_value,
        ensemble,
        isometry,
        report,
    })
}

const SWEEP_TOL: f64 = 1e-9;
const GRID_THETA: usize = 12;
const GRID_PHI: usize = 12;
const GOLDEN_STEPS: usize = 32;
const REFINE_ROUNDS: usize = 2;

/// Coordinate descent over two-row rotations
/// `[[c, s·e^{iφ}], [-s·e^{-iφ}, c]]` applied to the rows of `V`.
///
/// A rotation of rows `i`, `k` only changes members `i` and `k`, and their
/// new diagonal entries follow from three numbers: `a = v_iᵀ t v_i`,
/// `b = v_kᵀ t v_k` and `c = v_iᵀ t v_k`.
struct RotationSearch {
    t: ComplexMatrix,
    rows: Vec<Vec<C64>>,
}

#[derive(Clone, Copy)]
struct PairForms {
    a: C64,
    b: C64,
    c: C64,
}

impl PairForms {
    fn value(&self, theta: f64, phi: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let new_a = self.a * (c * c) + self.c * e * (2.0 * c * s) + self.b * e * e * (s * s);
        let ec = e.conj();
        let new_b = self.a * ec * ec * (s * s) - self.c * ec * (2.0 * c * s) + self.b * (c * c);
        new_a.norm() + new_b.norm()
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

impl RotationSearch {
    fn new(tau: &ComplexMatrix, start: &Isometry) -> Self {
        let v = start.matrix();
        Self {
            t: tau.conj(),
            rows: (0..v.nrows()).map(|i| v.row(i).to_vec()).collect(),
        }
    }

    fn diagonal(&self, i: usize) -> C64 {
        quadratic(&self.t, &self.rows[i], &self.rows[i])
    }

    fn objective(&self) -> f64 {
        (0..self.rows.len()).map(|i| self.diagonal(i).norm()).sum()
    }

    /// Best rotation angles for rows `i`, `k`: coarse grid, then alternating
    /// golden-section refinement in `θ` and `φ`.
    fn best_rotation(forms: &PairForms) -> (f64, f64, f64) {
        let mut best = (0.0, 0.0, forms.value(0.0, 0.0));
        for a in 0..GRID_THETA {
            let theta = (a as f64 - GRID_THETA as f64 / 2.0) * PI / GRID_THETA as f64;
            for b in 0..GRID_PHI {
                let phi = b as f64 * 2.0 * PI / GRID_PHI as f64;
                let v = forms.value(theta, phi);
                if v < best.2 {
                    best = (theta, phi, v);
                }
            }
        }
        let (dt, dp) = (PI / GRID_THETA as f64, 2.0 * PI / GRID_PHI as f64);
        for _ in 0..REFINE_ROUNDS {
            let phi = best.1;
            let (theta, v) = golden_section(|t| forms.value(t, phi), best.0 - dt, best.0 + dt);
            if v < best.2 {
                best = (theta, phi, v);
            }
            let theta = best.0;
            let (phi, v) = golden_section(|p| forms.value(theta, p), best.1 - dp, best.1 + dp);
            if v < best.2 {
                best = (theta, phi, v);
            }
        }
        best
    }

    fn rotate(&mut self, i: usize, k: usize, theta: f64, phi: f64) {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let (ri, rk) = (self.rows[i].clone(), self.rows[k].clone());
        for j in 0..ri.len() {
            self.rows[i][j] = ri[j] * c + rk[j] * e * s;
            self.rows[k][j] = -ri[j] * e.conj() * s + rk[j] * c;
        }
    }

    fn reorthonormalize(&mut self) {
        let m = self.rows.len();
        let r = self.rows.first().map_or(0, Vec::len);
        let v = ComplexMatrix::from_fn(m, r, |i, j| self.rows[i][j]);
        if let Ok(q) = orthonormalize_columns(&v) {
            self.rows = (0..m).map(|i| q.row(i).to_vec()).collect();
        }
    }

    fn sweep(&mut self) {
        let m = self.rows.len();
        for i in 0..m {
            for k in i + 1..m {
                let forms = PairForms {
                    a: self.diagonal(i),
                    b: self.diagonal(k),
                    c: quadratic(&self.t, &self.rows[i], &self.rows[k]),
                };
                let current = forms.a.norm() + forms.b.norm();
                let (theta, phi, value) = Self::best_rotation(&forms);
                if value < current {
                    self.rotate(i, k, theta, phi);
                }
            }
        }
        self.reorthonormalize();
    }

    fn run(mut self, budget: usize) -> (f64, Vec<Vec<C64>>) {
        let mut value = self.objective();
        for _ in 0..budget {
            self.sweep();
            let next = self.objective();
            let improvement = value - next;
            value = next.min(value);
            if improvement < SWEEP_TOL {
                break;
            }
        }
        (self.objective(), self.rows)
    }
}
