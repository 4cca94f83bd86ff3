//! Self-check suites run by `qutrit verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{kron, ComplexMatrix, C64, I, ONE, TOL_HERMITIAN, ZERO};
use crate::measures::{
    concurrence_mixed, concurrence_pure, concurrence_pure_expanded, lambda_spectrum, negativity,
    werner_closed_forms,
};
use crate::operators::{
    build_o2, cyclic_x, equally_spaced_candidate, o3_from_cyclic, o3_from_split_levels, o3_literal,
    sigma_y,
};
use crate::states::{
    embedded_qubit_werner, qubit_werner, random_density, random_pure, random_unitary,
    schmidt_state, werner, Dims, PureState, SchmidtCoeffs,
};
use crate::sweep::{grid, zero_boundary, ZERO_TOL};

const LU_SEED: u64 = 0x5eed_0001;
const LU_SAMPLES: usize = 1000;
const PHASE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Operators,
    Reduction,
    Werner,
    LuExperiment,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Operators => "operators",
            Suite::Reduction => "reduction",
            Suite::Werner => "werner",
            Suite::LuExperiment => "lu-experiment",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `max_err <= tol`.
    fn within(name: &'static str, max_err: f64, tol: f64) -> Self {
        Self::new(
            name,
            max_err <= tol,
            format!("max error {max_err:.3e}, tolerance {tol:.0e}"),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub samples: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Spread {
    fn of(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            0.5 * (values[n / 2 - 1] + values[n / 2])
        };
        Self {
            samples: n,
            min: values[0],
            median,
            max: values[n - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LuReport {
    pub beta: [f64; 3],
    /// C₃ over random local unitaries `U_A ⊗ U_B`.
    pub local_unitaries: Spread,
    /// C₃ over the phase orbit `β₀|00> + β₁|11> + β₂e^{iθ}|22>`.
    pub phase_orbit: Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub lu: Option<LuReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

pub fn run(suite: Suite) -> Result<Vec<SuiteReport>> {
    let one = |suite, checks| SuiteReport {
        suite,
        checks,
        lu: None,
    };
    Ok(match suite {
        Suite::Operators => vec![one("operators", operator_checks())],
        Suite::Reduction => vec![one("reduction", reduction_checks()?)],
        Suite::Werner => vec![one("werner", werner_checks()?)],
        Suite::LuExperiment => vec![SuiteReport {
            suite: "lu-experiment",
            checks: Vec::new(),
            lu: Some(lu_experiment()?),
        }],
        Suite::All => [
            Suite::Operators,
            Suite::Reduction,
            Suite::Werner,
            Suite::LuExperiment,
        ]
        .into_iter()
        .map(run)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect(),
    })
}

fn basis(n: usize, k: usize) -> Vec<C64> {
    (0..n).map(|i| if i == k { ONE } else { ZERO }).collect()
}

pub fn operator_checks() -> Vec<Check> {
    let o3 = o3_literal();
    let x = cyclic_x();
    let mut checks = vec![
        Check::new(
            "split-level construction equals literal matrix",
            o3_from_split_levels() == o3,
            "entrywise, exact",
        ),
        Check::new(
            "i(X - X^H) equals literal matrix",
            o3_from_cyclic() == o3,
            "entrywise, exact",
        ),
        Check::new(
            "O3 Hermitian with zero diagonal",
            o3.adjoint() == o3 && (0..3).all(|i| o3[(i, i)] == ZERO),
            "exact",
        ),
    ];

    let action = (0..3).all(|j| {
        let mut expected = vec![ZERO; 3];
        expected[(j + 1) % 3] += I;
        expected[(j + 2) % 3] -= I;
        o3.mul_vec(&basis(3, j)) == expected
    });
    checks.push(Check::new(
        "O3|j> = i|j+1> - i|j-1>",
        action,
        "all basis kets, exact",
    ));

    let square = &(&ComplexMatrix::identity(3).scale_real(2.0) - &x) - &x.adjoint();
    checks.push(Check::new(
        "O3^2 = 2I - X - X^H",
        o3.matmul(&o3) == square,
        "exact",
    ));

    let o2 = build_o2();
    checks.push(Check::new(
        "O2 is sigma_y and squares to I",
        o2.matrix() == &sigma_y() && o2.matrix().matmul(o2.matrix()) == ComplexMatrix::identity(2),
        "exact",
    ));

    let candidate = equally_spaced_candidate();
    checks.push(Check::new(
        "equally spaced phases give a non-Hermitian operator",
        !candidate.is_hermitian(TOL_HERMITIAN),
        format!("Hermiticity defect {:.3}", candidate.hermiticity_defect()),
    ));
    checks
}

fn max_over(values: impl ParallelIterator<Item = Result<f64>>) -> Result<f64> {
    values.try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

pub fn reduction_checks() -> Result<Vec<Check>> {
    let embedded = max_over((0..1000u64).into_par_iter().map(|seed| {
        let qubits = random_pure(seed, Dims::QUBITS);
        let a = qubits.coefficient_matrix();
        let oracle = 2.0 * (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
        Ok((concurrence_pure(&qubits.embed_in_qutrits()?)? - oracle).abs())
    }))?;

    let xs = grid(0.0, 1.0, 0.01)?;
    let wootters =
        max_over(xs.par_iter().map(|&x| {
            Ok((concurrence_mixed(&embedded_qubit_werner(x)?)?
                - concurrence_mixed(&qubit_werner(x)?)?)
            .abs())
        }))?;

    let expansion = max_over((0..1000u64).into_par_iter().map(|seed| {
        let psi = random_pure(seed, Dims::QUTRITS);
        Ok((concurrence_pure(&psi)? - concurrence_pure_expanded(&psi.coefficient_matrix())?).abs())
    }))?;

    let rank_one = max_over((0..200u64).into_par_iter().map(|seed| {
        let rho = random_density(seed, Dims::QUTRITS, 1)?;
        let psi = random_pure(seed, Dims::QUTRITS);
        Ok((concurrence_mixed(&rho)? - concurrence_pure(&psi)?).abs())
    }))?;

    Ok(vec![
        Check::within(
            "embedded qubit pure states match 2|a00 a11 - a01 a10|",
            embedded,
            1e-12,
        ),
        Check::within(
            "embedded Werner matches native two-qubit concurrence",
            wootters,
            1e-10,
        ),
        Check::within(
            "expanded pure-state formula matches overlap form",
            expansion,
            1e-12,
        ),
        Check::within(
            "rank-1 mixed concurrence matches pure concurrence",
            rank_one,
            1e-10,
        ),
    ])
}

fn werner_lambdas(x: f64) -> [f64; 9] {
    let (a, b) = ((1.0 + 5.0 * x) / 3.0, (1.0 - x) / 3.0);
    [a, b, b, b, 0.0, 0.0, 0.0, 0.0, 0.0]
}

pub fn werner_checks() -> Result<Vec<Check>> {
    let xs = grid(0.0, 1.0, 0.01)?;
    let rows: Vec<[f64; 6]> = xs
        .par_iter()
        .map(|&x| {
            let rho = werner(x)?;
            let report = lambda_spectrum(&rho)?;
            let expected = werner_lambdas(x);
            let spectrum = report
                .lambdas
                .iter()
                .zip(expected)
                .map(|(l, e)| (l - e).abs())
                .fold(0.0, f64::max);
            let closed = werner_closed_forms(x)?;
            let c3 = concurrence_mixed(&rho)?;
            let n = negativity(&rho)?;
            Ok([
                spectrum,
                (c3 - closed.c3).abs(),
                (n - closed.negativity).abs(),
                c3,
                n,
                (2.0 * n - closed.robustness).abs(),
            ])
        })
        .collect::<Result<_>>()?;
    let worst = |k: usize| rows.iter().map(|r| r[k]).fold(0.0, f64::max);

    let c3_boundary = zero_boundary(|x| concurrence_mixed(&werner(x)?), 0.0, 1.0, 1e-9)?;
    let n_boundary = zero_boundary(|x| negativity(&werner(x)?), 0.0, 1.0, 1e-9)?;
    let gap_points = rows
        .iter()
        .filter(|r| r[3] > ZERO_TOL && r[4] <= ZERO_TOL)
        .count();
    let at_one = negativity(&werner(1.0)?)?;

    Ok(vec![
        Check::within("Werner lambda spectrum on the 0.01 grid", worst(0), 1e-10),
        Check::within(
            "Werner concurrence equals max{0, 8x/3 - 2/3}",
            worst(1),
            1e-10,
        ),
        Check::new(
            "Werner concurrence vanishes exactly for x <= 1/4",
            (c3_boundary - 0.25).abs() <= 1e-6,
            format!("boundary at x = {c3_boundary:.7}"),
        ),
        Check::within(
            "Werner negativity equals (|1-3x| + |1+3x|)/4 - 1/2",
            worst(2),
            1e-10,
        ),
        Check::within("Werner robustness equals ½||6x-1| - 1|", worst(5), 1e-10),
        Check::new(
            "Werner negativity vanishes exactly for x <= 1/3",
            (n_boundary - 1.0 / 3.0).abs() <= 1e-6,
            format!("boundary at x = {n_boundary:.7}"),
        ),
        Check::new(
            "some Werner states have concurrence but no negativity",
            gap_points > 0,
            format!("{gap_points} grid points with c3 > 0 and negativity = 0"),
        ),
        Check::within("negativity reaches 1 at x = 1", (at_one - 1.0).abs(), 1e-10),
    ])
}

fn local_unitary_orbit(psi: &PureState, rng: &mut ChaCha8Rng) -> Result<f64> {
    let u = kron(&random_unitary(rng, 3), &random_unitary(rng, 3));
    concurrence_pure(&PureState::normalized(
        psi.dims(),
        u.mul_vec(psi.amplitudes()),
    )?)
}

/// C₃ of a fixed state under random local unitaries and under a relative
/// phase on one Schmidt term. Reports the spread only.
pub fn lu_experiment() -> Result<LuReport> {
    let beta = [0.7, 0.5, (1.0f64 - 0.74).sqrt()];
    let psi = schmidt_state(&SchmidtCoeffs::new(beta)?);

    let mut rng = ChaCha8Rng::seed_from_u64(LU_SEED);
    let lu = (0..LU_SAMPLES)
        .map(|_| local_unitary_orbit(&psi, &mut rng))
        .collect::<Result<Vec<_>>>()?;

    let phases = (0..PHASE_SAMPLES)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / PHASE_SAMPLES as f64;
            let mut amps = psi.amplitudes().to_vec();
            amps[8] *= C64::from_polar(1.0, theta);
            concurrence_pure(&PureState::new(psi.dims(), amps)?)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LuReport {
        beta,
        local_unitaries: Spread::of(lu),
        phase_orbit: Spread::of(phases),
    })
}
