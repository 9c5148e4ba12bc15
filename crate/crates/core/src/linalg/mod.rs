//! Fixed-dimension complex linear algebra for the four-atom Hilbert space.

pub mod basis;
mod eigen;
mod matrix;
pub mod pauli;
mod state;

pub use basis::{PairLabel, DIM, N_SITES};
pub use eigen::{
    check_hermitian, expm_hermitian_generator, hermitian_eigen, hermitian_eigenvalues,
    HermitianEigen,
};
pub use matrix::{kron, ComplexMatrix};
pub use num_complex::Complex64 as C64;
pub use state::{apply, inner, StateVector};

use crate::error::{invalid, Result};

/// Entrywise tolerance for exact algebraic identities.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for composed numerical pipelines (eigendecomposition, propagation).
pub const PIPELINE_TOL: f64 = 1e-10;

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with the 2×2 `op` acting on atom `site` (1-based).
pub fn embed_site_op(op: &ComplexMatrix, site: usize) -> Result<ComplexMatrix> {
    if op.dim() != 2 {
        return invalid(format!(
            "single-site operator must be 2x2, got {0}x{0}",
            op.dim()
        ));
    }
    if !(1..=N_SITES).contains(&site) {
        return invalid(format!("site {site} outside 1..={N_SITES}"));
    }
    let id = pauli::identity();
    let mut out = ComplexMatrix::identity(1);
    for s in 1..=N_SITES {
        out = kron(&out, if s == site { op } else { &id });
    }
    Ok(out)
}

/// `σ_z` summed over all four atoms (twice the excitation number minus 4).
pub fn total_sigma_z() -> ComplexMatrix {
    let z = pauli::sigma_z();
    (1..=N_SITES).fold(ComplexMatrix::zeros(DIM), |acc, s| {
        &acc + &embed_site_op(&z, s).expect("valid site")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_embeds_to_identity() {
        assert_eq!(
            embed_site_op(&pauli::identity(), 3).unwrap(),
            ComplexMatrix::identity(16)
        );
    }

    #[test]
    fn inversion_on_excited_atom() {
        let z1 = embed_site_op(&pauli::sigma_z(), 1).unwrap();
        let psi = StateVector::from_label("+---").unwrap();
        assert_eq!(apply(&z1, &psi).unwrap(), psi);
        let ground = StateVector::from_label("----").unwrap();
        assert_eq!(
            apply(&z1, &ground).unwrap(),
            ground.scale(C64::new(-1.0, 0.0))
        );
    }

    #[test]
    fn raising_second_atom() {
        let up2 = embed_site_op(&pauli::sigma_plus(), 2).unwrap();
        let out = apply(&up2, &StateVector::basis(0).unwrap()).unwrap();
        assert_eq!(out, StateVector::basis(4).unwrap());
    }

    #[test]
    fn bad_site_or_shape_is_rejected() {
        assert!(embed_site_op(&pauli::sigma_z(), 0).is_err());
        assert!(embed_site_op(&pauli::sigma_z(), 5).is_err());
        assert!(embed_site_op(&ComplexMatrix::identity(4), 1).is_err());
    }

    #[test]
    fn total_inversion_counts_excitations() {
        let z = total_sigma_z();
        for i in 0..DIM {
            let expected = 2.0 * basis::excitation_count(i) as f64 - 4.0;
            assert_eq!(z.get(i, i), C64::new(expected, 0.0));
        }
    }
}
