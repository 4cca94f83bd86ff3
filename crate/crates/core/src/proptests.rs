//! Property-based invariants of the linear algebra, state and decomposition layers.

use crate::decomp::{
    average_concurrence, ensemble_from_isometry, fast_average_concurrence, rank, tau_matrix,
    Isometry,
};
use crate::linalg::{
    hermitian_eig, kron, partial_transpose, sqrt_psd, svd, trace_norm, ComplexMatrix, C64,
};
use crate::measures::concurrence_mixed;
use crate::states::{
    embedded_qubit_werner, random_density, random_pure, schmidt_decompose, schmidt_state, werner,
    Dims, SchmidtCoeffs,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(|a| (&a + &a.adjoint()).scale_real(0.5))
}

fn dims() -> impl Strategy<Value = Dims> {
    prop_oneof![Just(Dims::QUBITS), Just(Dims::QUTRITS)]
}

fn det3(m: &ComplexMatrix) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2, 2), b in matrix(3, 2), c in matrix(2, 3)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 3), b in matrix(3, 2), c in matrix(3, 2), d in matrix(2, 3)) {
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn eigenvalues_give_trace_and_determinant(h in hermitian(3)) {
        let e = hermitian_eig(&h).unwrap();
        let trace: f64 = e.values.iter().sum();
        let det: f64 = e.values.iter().product();
        prop_assert!((trace - h.trace().re).abs() <= 1e-10);
        prop_assert!((C64::new(det, 0.0) - det3(&h)).norm() <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.reconstruct_with(|l| l).max_abs_diff(&h) <= 1e-12);
    }

    #[test]
    fn svd_reconstructs(m in matrix(3, 3)) {
        let s = svd(&m).unwrap();
        prop_assert!(s.reconstruct().max_abs_diff(&m) <= 1e-12);
        prop_assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.singular_values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), d in dims()) {
        let rho = random_density(seed, d, d.total()).unwrap();
        let pt = partial_transpose(rho.matrix(), d.pair()).unwrap();
        prop_assert_eq!(partial_transpose(&pt, d.pair()).unwrap(), rho.matrix().clone());
        prop_assert!(trace_norm(&pt).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), r in 1usize..=9) {
        let rho = random_density(seed, Dims::QUTRITS, r).unwrap();
        let root = sqrt_psd(rho.matrix()).unwrap();
        prop_assert!(root.matmul(&root).max_abs_diff(rho.matrix()) <= 1e-12);
        prop_assert!(root.is_hermitian(1e-12));
    }

    #[test]
    fn random_densities_are_positive(seed in any::<u64>(), r in 1usize..=9) {
        let rho = random_density(seed, Dims::QUTRITS, r).unwrap();
        let e = hermitian_eig(rho.matrix()).unwrap();
        prop_assert!(e.values[0] >= -1e-12);
        prop_assert_eq!(rank(&rho).unwrap(), r);
    }

    #[test]
    fn schmidt_coefficients_are_recovered(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64) {
        prop_assume!(a + b + c > 1e-3);
        let n = (a * a + b * b + c * c).sqrt();
        let beta = SchmidtCoeffs::new([a / n, b / n, c / n]).unwrap();
        let found = schmidt_decompose(&schmidt_state(&beta)).unwrap().coeffs.descending();
        for (x, y) in found.iter().zip(beta.descending()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn schmidt_decomposition_reconstructs(seed in any::<u64>()) {
        let psi = random_pure(seed, Dims::QUTRITS);
        let s = schmidt_decompose(&psi).unwrap();
        let err = s.reconstruct().iter().zip(psi.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn werner_eigenvalues(x in 0.0..=1.0f64) {
        let e = hermitian_eig(werner(x).unwrap().matrix()).unwrap();
        let low = (1.0 - x) / 9.0;
        prop_assert!(e.values[..8].iter().all(|v| (v - low).abs() <= 1e-12));
        prop_assert!((e.values[8] - (1.0 + 8.0 * x) / 9.0).abs() <= 1e-12);
    }

    #[test]
    fn embedded_werner_lives_on_four_levels(x in 0.0..1.0f64) {
        let e = hermitian_eig(embedded_qubit_werner(x).unwrap().matrix()).unwrap();
        prop_assert_eq!(e.values.iter().filter(|&&v| v > 1e-12).count(), 4);
    }

    #[test]
    fn isometric_ensembles_reproduce_the_state(seed in any::<u64>(), r in 1usize..=9, extra in 0usize..4) {
        let rho = random_density(seed, Dims::QUTRITS, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Isometry::random(&mut rng, r + extra, r).unwrap();
        let ensemble = ensemble_from_isometry(&rho, &v).unwrap();
        prop_assert!(ensemble.density_matrix().max_abs_diff(rho.matrix()) <= 1e-12);
        prop_assert!((ensemble.total_weight() - 1.0).abs() <= 1e-12);

        let direct = average_concurrence(&ensemble).unwrap();
        let fast = fast_average_concurrence(&tau_matrix(&rho).unwrap(), &v);
        prop_assert!((direct - fast).abs() <= 1e-10);
        // Any ensemble average bounds the closed form from above.
        prop_assert!(direct >= concurrence_mixed(&rho).unwrap() - 1e-8);
    }
}
