//! Pairwise entanglement along the evolution and robustness of the transfer
//! against a coupling mismatch.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::evolution::{perturbed_state, InitialState, Propagator, TargetState};
use crate::linalg::{
    basis, hermitian_eigen, hermitian_eigenvalues, kron, pauli, ComplexMatrix, PairLabel,
    StateVector, C64, EXACT_TOL,
};
use crate::model::ModelParams;

/// Eigenvalues of a reduced state at or below this are treated as zero when
/// forming its ensemble decomposition. Eigenvalues down to `−1e-12` are
/// accepted as rounding noise.
const RANK_CUTOFF: f64 = 1e-14;

/// Reduced state of two atoms, in the ordering `2·b_first + b_second`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates a 4×4 Hermitian, unit-trace, positive semidefinite matrix
    /// (all within `1e-12`).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: matrix.dim(),
            });
        }
        let herm = matrix.hermiticity_residual();
        if !(herm <= EXACT_TOL) {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if !((tr - C64::new(1.0, 0.0)).norm() <= EXACT_TOL) {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} differs from 1"
            )));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `|v⟩⟨v|` for a normalized two-atom vector.
    pub fn pure(v: [C64; 4]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(&v, &v)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Amplitudes of `state` arranged as a 4×4 matrix: row = configuration of
/// `pair` (`2·b_first + b_second`), column = configuration of the other two
/// atoms (`2·b_lower + b_higher`). Its Gram matrix `W·W†` is the reduced
/// state of the pair.
pub fn pair_amplitude_matrix(state: &StateVector, pair: PairLabel) -> ComplexMatrix {
    let [c1, c2] = pair.complement();
    let mut w = ComplexMatrix::zeros(4);
    for (index, &amp) in state.amplitudes().iter().enumerate() {
        let bit = |site| basis::is_excited(index, site) as usize;
        let row = 2 * bit(pair.first()) + bit(pair.second());
        let col = 2 * bit(c1) + bit(c2);
        w.set(row, col, amp);
    }
    w
}

/// `Tr_rest |ψ⟩⟨ψ|` for the given ordered pair.
pub fn partial_trace_to_pair(state: &StateVector, pair: PairLabel) -> Result<DensityMatrix> {
    let w = pair_amplitude_matrix(state, pair);
    DensityMatrix::new(&w * &w.adjoint())
}

fn spin_flip() -> ComplexMatrix {
    kron(&pauli::sigma_y(), &pauli::sigma_y())
}

/// Concurrence from any `W` with `ρ = W·W†` (columns are subnormalized
/// ensemble members). The Wootters values `μᵢ` (square roots of the
/// eigenvalues of `ρ·(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`) are the singular values of the
/// symmetric matrix `τ = Wᵀ(σ_y⊗σ_y)W`. They are read off as the positive
/// eigenvalues of the Hermitian dilation `[[0, τ], [τ†, 0]]`, which keeps
/// small `μᵢ` accurate to rounding.
fn concurrence_from_ensemble(w: &[Vec<C64>]) -> f64 {
    let k = w.len();
    if k == 0 {
        return 0.0;
    }
    let y = spin_flip();
    let flipped: Vec<Vec<C64>> = w.iter().map(|v| y.mul_vec(v).expect("4-vectors")).collect();
    let mut dilation = ComplexMatrix::zeros(2 * k);
    for i in 0..k {
        for j in 0..k {
            let tau: C64 = w[i].iter().zip(&flipped[j]).map(|(a, b)| a * b).sum();
            dilation.set(i, k + j, tau);
            dilation.set(k + j, i, tau.conj());
        }
    }
    let mut mu = hermitian_eigenvalues(&dilation).expect("dilation is Hermitian by construction");
    mu.reverse();
    mu.truncate(k);
    mu.resize(4, 0.0);
    let c = mu[0] - mu[1] - mu[2] - mu[3];
    c.clamp(0.0, 1.0)
}

/// Wootters concurrence `max(0, μ₁ − μ₂ − μ₃ − μ₄)` in `[0, 1]`.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let eig = hermitian_eigen(rho.matrix()).expect("density matrices are Hermitian");
    let ensemble: Vec<Vec<C64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_CUTOFF)
        .map(|(k, &l)| {
            eig.vectors
                .column(k)
                .into_iter()
                .map(|z| z * l.sqrt())
                .collect()
        })
        .collect();
    concurrence_from_ensemble(&ensemble)
}

/// Concurrence of a pair computed straight from the global amplitudes,
/// using the complement configurations as the ensemble. Agrees with
/// `concurrence(partial_trace_to_pair(..))` and avoids the eigendecomposition
/// of the reduced state.
pub fn pair_concurrence(state: &StateVector, pair: PairLabel) -> f64 {
    let w = pair_amplitude_matrix(state, pair);
    let ensemble: Vec<Vec<C64>> = (0..4).map(|c| w.column(c)).collect();
    concurrence_from_ensemble(&ensemble)
}

/// All six pairwise concurrences at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceRow {
    pub t: f64,
    pub c23: f64,
    pub c14: f64,
    pub c12: f64,
    pub c34: f64,
    pub c13: f64,
    pub c24: f64,
}

impl ConcurrenceRow {
    pub fn at(t: f64, state: &StateVector) -> Result<Self> {
        let c = |pair| partial_trace_to_pair(state, pair).map(|rho| concurrence(&rho));
        Ok(Self {
            t,
            c23: c(PairLabel::P23)?,
            c14: c(PairLabel::P14)?,
            c12: c(PairLabel::P12)?,
            c34: c(PairLabel::P34)?,
            c13: c(PairLabel::P13)?,
            c24: c(PairLabel::P24)?,
        })
    }

    /// Concurrences of every pair other than (2,3) and (1,4).
    pub fn spectator_pairs(&self) -> [f64; 4] {
        [self.c12, self.c34, self.c13, self.c24]
    }
}

/// Pairwise concurrences along the numerically propagated state.
pub fn concurrence_dynamics(
    init: &InitialState,
    p: &ModelParams,
    t_grid: &[f64],
) -> Result<Vec<ConcurrenceRow>> {
    if t_grid.is_empty() {
        return invalid("time grid is empty");
    }
    let prop = Propagator::new(p)?;
    let psi0 = init.state();
    t_grid
        .iter()
        .map(|&t| ConcurrenceRow::at(t, &prop.evolve(&psi0, t)))
        .collect()
}

/// `|⟨ψ_T|ψ̃(t₀)⟩| = cos²θ + sin²θ·cos((π/2)·δη/η)` at `t₀ = π/(2η)`.
pub fn robustness_fidelity(theta: f64, ratio: f64) -> f64 {
    theta.cos().powi(2) + theta.sin().powi(2) * (0.5 * PI * ratio).cos()
}

/// The same fidelity measured on the propagated closed-form state:
/// `|⟨ψ_T|perturbed_state(t₀)⟩|` with `eta34 = η(1 + ratio)`.
pub fn measured_robustness_fidelity(
    init: &InitialState,
    omega: f64,
    eta: f64,
    ratio: f64,
) -> Result<f64> {
    if !(eta > 0.0) {
        return invalid(format!("eta must be positive, got {eta}"));
    }
    if !(ratio > -1.0) {
        return invalid(format!("delta eta / eta must exceed -1, got {ratio}"));
    }
    let p = ModelParams::perturbed(omega, eta, ratio * eta)?;
    let t0 = PI / (2.0 * eta);
    let psi = perturbed_state(init, &p, t0);
    Ok(TargetState::matched(init).state().fidelity(&psi))
}

/// Quadratic lower bound `1 − ½(δη/η)²` quoted for the transfer fidelity.
pub fn quoted_quadratic_bound(ratio: f64) -> f64 {
    1.0 - 0.5 * ratio * ratio
}

/// Leading-order deficit of the exact fidelity, `(π²/8)(δη/η)² sin²θ`.
pub fn exact_quadratic_deficit(theta: f64, ratio: f64) -> f64 {
    PI * PI / 8.0 * ratio * ratio * theta.sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobustnessPoint {
    pub ratio: f64,
    pub theta: f64,
    pub fidelity: f64,
    /// `1 − ½ ratio²`.
    pub quoted_bound: f64,
    /// Whether `fidelity ≥ quoted_bound`.
    pub quoted_bound_holds: bool,
    /// `(π²/8) ratio² sin²θ`.
    pub quadratic_deficit: f64,
}

pub fn robustness_sweep(theta: f64, ratios: &[f64]) -> Vec<RobustnessPoint> {
    ratios
        .iter()
        .map(|&ratio| {
            let fidelity = robustness_fidelity(theta, ratio);
            let quoted_bound = quoted_quadratic_bound(ratio);
            RobustnessPoint {
                ratio,
                theta,
                fidelity,
                quoted_bound,
                quoted_bound_holds: fidelity >= quoted_bound,
                quadratic_deficit: exact_quadratic_deficit(theta, ratio),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{analytic_state, time_grid};
    use crate::linalg::PIPELINE_TOL;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn two_atom(c: f64, s: C64) -> [C64; 4] {
        // c|+-> + s|-+> in the ordering 2·b_first + b_second.
        [C64::new(0.0, 0.0), s, C64::new(c, 0.0), C64::new(0.0, 0.0)]
    }

    #[test]
    fn product_state_reduces_to_pure_ground_pair() {
        let rho = partial_trace_to_pair(&StateVector::from_label("+---").unwrap(), PairLabel::P23)
            .unwrap();
        let mut expected = ComplexMatrix::zeros(4);
        expected.set(0, 0, C64::new(1.0, 0.0));
        assert_eq!(rho.matrix(), &expected);
    }

    #[test]
    fn initial_bell_state_lives_on_atoms_two_and_three() {
        let phi = 0.8;
        let psi = InitialState::new(FRAC_PI_4, phi).state();
        let rho23 = partial_trace_to_pair(&psi, PairLabel::P23).unwrap();
        let v = two_atom(FRAC_1_SQRT_2, C64::from_polar(FRAC_1_SQRT_2, phi));
        let expected = ComplexMatrix::outer(&v, &v).unwrap();
        assert!(rho23.matrix().max_abs_diff(&expected) <= EXACT_TOL);
        assert!((rho23.purity() - 1.0).abs() <= EXACT_TOL);

        let rho14 = partial_trace_to_pair(&psi, PairLabel::P14).unwrap();
        assert!((rho14.matrix().get(0, 0) - C64::new(1.0, 0.0)).norm() <= EXACT_TOL);
        assert!((rho14.purity() - 1.0).abs() <= EXACT_TOL);
    }

    #[test]
    fn invalid_density_matrices_are_rejected() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(4)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        m.set(0, 1, C64::new(0.1, 0.0));
        assert!(DensityMatrix::new(m).is_err());
        let neg = ComplexMatrix::from_diagonal(&[
            C64::new(1.2, 0.0),
            C64::new(-0.2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn bell_and_product_concurrence() {
        let bell =
            DensityMatrix::pure(two_atom(FRAC_1_SQRT_2, C64::new(FRAC_1_SQRT_2, 0.0))).unwrap();
        assert!((concurrence(&bell) - 1.0).abs() <= EXACT_TOL);
        let h = 0.5;
        let product = DensityMatrix::pure([
            C64::new(h, 0.0),
            C64::new(0.0, h),
            C64::new(-h, 0.0),
            C64::new(0.0, -h),
        ])
        .unwrap();
        assert!(concurrence(&product) <= EXACT_TOL);
        let maximally_mixed =
            DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert_eq!(concurrence(&maximally_mixed), 0.0);
    }

    #[test]
    fn concurrence_at_pi_over_six() {
        // Oracle: eigenvalues of ρ·ρ̃ by brute force. For a pure state the
        // only nonzero one is |⟨ψ|ψ̃⟩|², and ⟨ψ|σyσy|ψ*⟩ = −2 cosθ sinθ e^{iφ}
        // for cosθ|+-> + e^{iφ}sinθ|-+>, so C = sin(π/3) = √3/2.
        let th = PI / 6.0;
        let rho = DensityMatrix::pure(two_atom(th.cos(), C64::from_polar(th.sin(), 0.4))).unwrap();
        let expected = 0.866_025_403_784_438_6;
        assert!((concurrence(&rho) - expected).abs() <= EXACT_TOL);
    }

    #[test]
    fn direct_and_reduced_routes_agree() {
        let init = InitialState::new(0.45, 1.3);
        let p = ModelParams::perturbed(1.0, 1.0, 0.2).unwrap();
        let prop = Propagator::new(&p).unwrap();
        for t in time_grid(6.0, 25).unwrap() {
            let psi = prop.evolve(&init.state(), t);
            for pair in [
                PairLabel::P23,
                PairLabel::P14,
                PairLabel::P12,
                PairLabel::P24,
            ] {
                let a = concurrence(&partial_trace_to_pair(&psi, pair).unwrap());
                let b = pair_concurrence(&psi, pair);
                assert!((a - b).abs() <= PIPELINE_TOL, "t={t} {pair}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn concurrence_dynamics_transfers_entanglement() {
        let theta = 0.5;
        let init = InitialState::new(theta, 0.2);
        let p = ModelParams::symmetric(1.0e9, 1.0e6).unwrap();
        let t0 = FRAC_PI_2 / p.eta12;
        let rows = concurrence_dynamics(&init, &p, &[0.0, t0]).unwrap();
        let c0 = (2.0 * theta).sin().abs();
        assert!((rows[0].c23 - c0).abs() <= PIPELINE_TOL);
        assert!(rows[0].c14 <= PIPELINE_TOL);
        assert!((rows[1].c14 - c0).abs() <= PIPELINE_TOL);
        assert!(rows[1].c23 <= PIPELINE_TOL);
        assert!(concurrence_dynamics(&init, &p, &[]).is_err());
    }

    #[test]
    fn product_initial_state_only_entangles_first_pair() {
        // |-+--> evolves into cos(ηt)|-+--> - i sin(ηt)|+--->: atoms 1 and 2
        // become entangled with C12 = |sin 2ηt|, nothing else does.
        let init = InitialState::new(0.0, 0.0);
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        for row in concurrence_dynamics(&init, &p, &time_grid(7.0, 30).unwrap()).unwrap() {
            let rest = [row.c23, row.c14, row.c34, row.c13, row.c24];
            assert!(rest.iter().all(|&c| c <= EXACT_TOL), "{row:?}");
            assert!(
                (row.c12 - (2.0 * row.t).sin().abs()).abs() <= PIPELINE_TOL,
                "{row:?}"
            );
        }
    }

    #[test]
    fn fidelity_limits() {
        assert_eq!(robustness_fidelity(0.7, 0.0), 1.0);
        assert_eq!(robustness_fidelity(0.0, 0.33), 1.0);
        let f = robustness_fidelity(FRAC_PI_2, 0.1);
        assert!((f - 0.987_688_340_595_137_7).abs() < 1e-15);
        let init = InitialState::new(FRAC_PI_2, 0.0);
        let m = measured_robustness_fidelity(&init, 1.0e9, 1.0e6, 0.1).unwrap();
        assert!((m - f).abs() <= EXACT_TOL);
        assert!(measured_robustness_fidelity(&init, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn sweep_points() {
        let single = robustness_sweep(0.3, &[0.0]);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].fidelity, 1.0);
        assert!(single[0].quoted_bound_holds);

        let ratios: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
        let sweep = robustness_sweep(FRAC_PI_2, &ratios);
        assert!(sweep.windows(2).all(|w| w[1].fidelity < w[0].fidelity));

        let p = robustness_sweep(FRAC_PI_2, &[0.01])[0];
        assert!((p.fidelity - (0.005 * PI).cos()).abs() < 1e-16);
        let deficit = 1.0 - p.fidelity;
        assert!((deficit / p.quadratic_deficit - 1.0).abs() < 1e-4);
        // The exact deficit exceeds ½·ratio² once sin²θ > 4/π².
        assert!(!p.quoted_bound_holds);
    }

    #[test]
    fn unperturbed_transfer_has_unit_fidelity() {
        let init = InitialState::new(1.0, 0.4);
        let p = ModelParams::symmetric(2.0, 0.5).unwrap();
        let psi = analytic_state(&init, &p, PI / (2.0 * 0.5)).unwrap();
        assert!((TargetState::matched(&init).state().fidelity(&psi) - 1.0).abs() <= EXACT_TOL);
    }
}
