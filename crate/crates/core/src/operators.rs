//! Flip operators for two- and three-level systems.
//!
//! The qutrit operator is assembled from split-level operators weighted by
//! diagonal phase matrices. All entries are Gaussian integers with parts in
//! {-1, 0, 1}, so every identity below is checked with exact equality.

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64, I, ONE, ZERO};

/// A Hermitian, zero-diagonal flip operator on a single qubit or qutrit.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipOperator {
    dimension: usize,
    matrix: ComplexMatrix,
}

impl FlipOperator {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `O ⊗ O`, the two-party flip used for `ψ̃` and `ρ̃`.
    pub fn pair(&self) -> ComplexMatrix {
        kron(&self.matrix, &self.matrix)
    }

    /// Flip operator for local dimension 2 or 3.
    pub fn for_dimension(d: usize) -> Result<Self> {
        match d {
            2 => Ok(build_o2()),
            3 => Ok(build_o3()),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

/// `i^k`, computed exactly.
fn quarter_turn(k: i32) -> C64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Raising operator `J+` of a two-level system, `|0> -> |1>`.
pub fn ladder_raise() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { ONE } else { ZERO })
}

/// Lowering operator `J-`, `|1> -> |0>`.
pub fn ladder_lower() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { ONE } else { ZERO })
}

/// Split-level operator `S_{3,j}` (1-based `j`): sends `|j-1>` to the sum of
/// the two other basis kets and annihilates the rest.
pub fn split_level(n: usize, j: usize) -> Result<ComplexMatrix> {
    if n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(1..=3).contains(&j) {
        return Err(Error::IndexOutOfRange {
            index: j,
            min: 1,
            max: 3,
        });
    }
    let col = j - 1;
    Ok(ComplexMatrix::from_fn(3, 3, |r, c| {
        if c == col && r != col {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Diagonal phase matrix `H_{3,i}` (1-based `i`). Each is a cyclic
/// permutation of the diagonal `(-1, i, -i)`.
pub fn phase_matrix(i: usize) -> Result<ComplexMatrix> {
    let diag = match i {
        1 => [-ONE, I, -I],
        2 => [-I, -ONE, I],
        3 => [I, -I, -ONE],
        _ => {
            return Err(Error::IndexOutOfRange {
                index: i,
                min: 1,
                max: 3,
            })
        }
    };
    Ok(ComplexMatrix::from_diag(&diag))
}

/// Cyclic shift `X|j> = |j+1 mod 3>`.
pub fn cyclic_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |r, c| if r == (c + 1) % 3 { ONE } else { ZERO })
}

/// The qutrit flip operator written out entry by entry.
pub fn o3_literal() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![ZERO, -I, I], vec![I, ZERO, -I], vec![-I, I, ZERO]])
        .expect("literal matrix is well formed")
}

/// `i (X - X^†)`.
pub fn o3_from_cyclic() -> ComplexMatrix {
    let x = cyclic_x();
    (&x - &x.adjoint()).scale(I)
}

/// `Σ_i H_{3,i} S_{3,i}`.
pub fn o3_from_split_levels() -> ComplexMatrix {
    (1..=3)
        .map(|k| {
            let h = phase_matrix(k).expect("index in range");
            let s = split_level(3, k).expect("index in range");
            &h * &s
        })
        .fold(ComplexMatrix::zeros(3, 3), |acc, term| &acc + &term)
}

/// The qutrit flip operator.
///
/// # Panics
/// If the three constructions (split-level contraction, literal matrix,
/// `i(X - X^†)`) disagree in any entry. They are exact integer identities, so
/// a mismatch is a programming error.
pub fn build_o3() -> FlipOperator {
    let matrix = o3_from_split_levels();
    assert_eq!(
        matrix,
        o3_literal(),
        "split-level construction != literal O3"
    );
    assert_eq!(
        matrix,
        o3_from_cyclic(),
        "split-level construction != i(X - X^H)"
    );
    FlipOperator {
        dimension: 3,
        matrix,
    }
}

/// The qubit flip operator `e^{iπ/2} J+ + e^{3iπ/2} J-`, i.e. `[[0,-i],[i,0]]`.
///
/// This is `+σ_y` with the ladder matrices as printed; the overall sign has
/// no effect on any measure built from it.
pub fn build_o2() -> FlipOperator {
    let matrix = &ladder_raise().scale(quarter_turn(1)) + &ladder_lower().scale(quarter_turn(3));
    FlipOperator {
        dimension: 2,
        matrix,
    }
}

pub fn sigma_y() -> ComplexMatrix {
    build_o2().matrix
}

/// The rejected candidate with phases `e^{iπ/3}, e^{iπ}, e^{5iπ/3}` equally
/// spaced around the circle. It is not Hermitian, which is why the phase
/// matrices are used instead; it plays no role in any measure.
pub fn equally_spaced_candidate() -> ComplexMatrix {
    let third = std::f64::consts::PI / 3.0;
    (1..=3)
        .map(|k| {
            let phase = C64::from_polar(1.0, (2 * k - 1) as f64 * third);
            split_level(3, k).expect("index in range").scale(phase)
        })
        .fold(ComplexMatrix::zeros(3, 3), |acc, term| &acc + &term)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(j: usize) -> Vec<C64> {
        let mut v = vec![ZERO; 3];
        v[j] = ONE;
        v
    }

    #[test]
    fn split_level_matches_printed_matrices() {
        let s1 = split_level(3, 1).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])
                .unwrap();
        assert_eq!(s1, expected);
        assert_eq!(s1.mul_vec(&ket(0)), vec![ZERO, ONE, ONE]);
        assert_eq!(split_level(3, 2).unwrap().mul_vec(&ket(0)), vec![ZERO; 3]);
        let s3 = split_level(3, 3).unwrap();
        assert_eq!(s3.mul_vec(&ket(2)), vec![ONE, ONE, ZERO]);
    }

    #[test]
    fn split_level_errors() {
        assert_eq!(split_level(2, 1), Err(Error::UnsupportedDimension(2)));
        assert_eq!(split_level(4, 1), Err(Error::UnsupportedDimension(4)));
        assert!(matches!(
            split_level(3, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            split_level(3, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn phase_matrices() {
        assert_eq!(
            phase_matrix(1).unwrap(),
            ComplexMatrix::from_diag(&[-ONE, I, -I])
        );
        assert_eq!(
            phase_matrix(2).unwrap(),
            ComplexMatrix::from_diag(&[-I, -ONE, I])
        );
        assert_eq!(
            phase_matrix(3).unwrap(),
            ComplexMatrix::from_diag(&[I, -I, -ONE])
        );
        for k in 1..=3 {
            let h = phase_matrix(k).unwrap();
            assert_eq!(&h * &h.adjoint(), ComplexMatrix::identity(3));
            for r in 0..3 {
                for c in 0..3 {
                    if r != c {
                        assert_eq!(h[(r, c)], ZERO);
                    }
                }
            }
        }
        assert!(matches!(
            phase_matrix(0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            phase_matrix(4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn three_constructions_agree_exactly() {
        let o3 = build_o3();
        assert_eq!(o3.dimension(), 3);
        assert_eq!(o3.matrix(), &o3_literal());
        assert_eq!(o3.matrix(), &o3_from_cyclic());
        assert_eq!(o3.matrix(), &o3.matrix().adjoint());
        for j in 0..3 {
            assert_eq!(o3.matrix()[(j, j)], ZERO);
        }
    }

    #[test]
    fn o3_action_on_basis() {
        let o3 = build_o3();
        for j in 0..3 {
            let mut want = vec![ZERO; 3];
            want[(j + 1) % 3] += I;
            want[(j + 2) % 3] -= I;
            let got = o3.matrix().mul_vec(&ket(j));
            assert_eq!(got, want);
            assert_eq!(crate::linalg::inner(&ket(j), &got), ZERO);
        }
    }

    #[test]
    fn o3_square_is_not_identity() {
        let o = build_o3().matrix().clone();
        let x = cyclic_x();
        let expected = &(&ComplexMatrix::identity(3).scale_real(2.0) - &x) - &x.adjoint();
        assert_eq!(&o * &o, expected);
        assert_ne!(&o * &o, ComplexMatrix::identity(3));
    }

    #[test]
    fn o2_is_sigma_y_and_squares_to_identity() {
        let o2 = build_o2();
        assert_eq!(o2.dimension(), 2);
        let expected = ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).unwrap();
        assert_eq!(o2.matrix(), &expected);
        assert_eq!(o2.matrix().mul_vec(&[ONE, ZERO]), vec![ZERO, I]);
        assert_eq!(o2.matrix() * o2.matrix(), ComplexMatrix::identity(2));
    }

    #[test]
    fn cyclic_shift() {
        let x = cyclic_x();
        assert_eq!(x.mul_vec(&ket(2)), ket(0));
        assert_eq!(&(&x * &x) * &x, ComplexMatrix::identity(3));
    }

    #[test]
    fn equally_spaced_phases_are_not_hermitian() {
        let m = equally_spaced_candidate();
        assert!(m.hermiticity_defect() > 0.5);
    }

    #[test]
    fn for_dimension() {
        assert_eq!(FlipOperator::for_dimension(3).unwrap(), build_o3());
        assert_eq!(FlipOperator::for_dimension(2).unwrap(), build_o2());
        assert_eq!(
            FlipOperator::for_dimension(4),
            Err(Error::UnsupportedDimension(4))
        );
    }
}
