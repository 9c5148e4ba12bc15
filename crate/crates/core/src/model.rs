//! Four-atom Hamiltonian and the geometric dipole-dipole coupling.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{embed_site_op, pauli, ComplexMatrix, PairLabel, DIM};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Geometry of one interacting pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricParams {
    /// Free-space spontaneous emission rate, 1/s.
    pub gamma0: f64,
    /// Atomic transition angular frequency, rad/s.
    pub omega: f64,
    /// Interatomic distance, m.
    pub r: f64,
    /// Angle between the interatomic axis and the transition dipole, rad.
    pub alpha: f64,
}

/// Dipole-dipole coupling `η = ¾·Γ₀·c³/(ω³·R³)·(1 − cos²α)` in rad/s.
///
/// The cubed frequency in the denominator is read as the atomic transition
/// angular frequency `omega`, the only frequency of the model.
pub fn coupling_strength(g: &GeometricParams) -> Result<f64> {
    if !(g.r > 0.0) || !g.r.is_finite() {
        return invalid(format!(
            "interatomic distance must be positive, got {}",
            g.r
        ));
    }
    if !(g.gamma0 > 0.0) || !g.gamma0.is_finite() {
        return invalid(format!("gamma0 must be positive, got {}", g.gamma0));
    }
    if !(g.omega > 0.0) || !g.omega.is_finite() {
        return invalid(format!("omega must be positive, got {}", g.omega));
    }
    if !(0.0..=std::f64::consts::PI).contains(&g.alpha) {
        return invalid(format!("alpha must lie in [0, pi], got {}", g.alpha));
    }
    let cube = |x: f64| x * x * x;
    let angular = 1.0 - g.alpha.cos().powi(2);
    Ok(0.75 * g.gamma0 * cube(SPEED_OF_LIGHT) / (cube(g.omega) * cube(g.r)) * angular)
}

/// Physical parameters of the Hamiltonian. The coupling mismatch is
/// `delta_eta() = eta34 − eta12`; the symmetric model has `eta34 == eta12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub omega: f64,
    pub eta12: f64,
    pub eta34: f64,
}

impl ModelParams {
    /// Couplings may be zero (free atoms) but not negative.
    pub fn new(omega: f64, eta12: f64, eta34: f64) -> Result<Self> {
        for (name, v) in [("omega", omega), ("eta12", eta12), ("eta34", eta34)] {
            if !v.is_finite() {
                return invalid(format!("{name} must be finite, got {v}"));
            }
        }
        if eta12 < 0.0 || eta34 < 0.0 {
            return invalid(format!(
                "couplings must be non-negative, got eta12={eta12}, eta34={eta34}"
            ));
        }
        Ok(Self {
            omega,
            eta12,
            eta34,
        })
    }

    pub fn symmetric(omega: f64, eta: f64) -> Result<Self> {
        Self::new(omega, eta, eta)
    }

    /// `eta34 = eta + delta_eta`.
    pub fn perturbed(omega: f64, eta: f64, delta_eta: f64) -> Result<Self> {
        Self::new(omega, eta, eta + delta_eta)
    }

    pub fn delta_eta(&self) -> f64 {
        self.eta34 - self.eta12
    }

    pub fn is_symmetric(&self) -> bool {
        self.eta12 == self.eta34
    }

    pub fn coupling(&self, pair: PairLabel) -> Result<f64> {
        match pair {
            PairLabel::P12 => Ok(self.eta12),
            PairLabel::P34 => Ok(self.eta34),
            other => invalid(format!("no coupling acts within pair {other}")),
        }
    }
}

/// `σ₊⁽ⁱ⁾σ₋⁽ʲ⁾` embedded in the four-atom space.
pub fn hop(raise: usize, lower: usize) -> Result<ComplexMatrix> {
    let up = embed_site_op(&pauli::sigma_plus(), raise)?;
    let down = embed_site_op(&pauli::sigma_minus(), lower)?;
    up.checked_mul(&down)
}

/// `(ω/2)(σ_z⁽ⁱ⁾ + σ_z⁽ʲ⁾) + η_ij(σ₊⁽ⁱ⁾σ₋⁽ʲ⁾ + σ₋⁽ⁱ⁾σ₊⁽ʲ⁾)` for pair (1,2) or (3,4).
pub fn pair_hamiltonian(p: &ModelParams, pair: PairLabel) -> Result<ComplexMatrix> {
    let eta = p.coupling(pair)?;
    let (i, j) = (pair.first(), pair.second());
    let z = pauli::sigma_z();
    let free = &embed_site_op(&z, i)? + &embed_site_op(&z, j)?;
    let exchange = &hop(i, j)? + &hop(j, i)?;
    Ok(&free.scale_real(p.omega / 2.0) + &exchange.scale_real(eta))
}

/// Full Hamiltonian `H = H₁₂ + H₃₄` (ħ = 1), a 16×16 Hermitian matrix.
pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let h12 = pair_hamiltonian(p, PairLabel::P12).expect("pair (1,2) is coupled");
    let h34 = pair_hamiltonian(p, PairLabel::P34).expect("pair (3,4) is coupled");
    let h = &h12 + &h34;
    debug_assert_eq!(h.dim(), DIM);
    h
}
