//! Single-atom operators in the `(|−⟩, |+⟩)` ordering.
//!
//! Index 0 is the ground state `|−⟩`, index 1 the excited state `|+⟩`, so
//! `sigma_z` is the atomic inversion `|+⟩⟨+| − |−⟩⟨−|` = diag(−1, +1).
//! `sigma_plus` raises: `σ₊ = |+⟩⟨−|`.

use num_complex::Complex64 as C64;

use super::ComplexMatrix;

const O: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn identity() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[-ONE, ONE])
}

pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_row_major(vec![O, O, ONE, O]).expect("2x2")
}

pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_row_major(vec![O, ONE, O, O]).expect("2x2")
}

/// Textbook `σ_y = [[0, −i], [i, 0]]`. Only `σ_y ⊗ σ_y` is used, which is
/// insensitive to the basis ordering.
pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_row_major(vec![O, -I, I, O]).expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_operators_are_adjoint() {
        assert_eq!(sigma_plus().adjoint(), sigma_minus());
    }

    #[test]
    fn commutator_of_ladder_is_inversion() {
        let c = sigma_plus().commutator(&sigma_minus()).unwrap();
        assert_eq!(c, sigma_z());
    }
}
