//! Time evolution of the four-atom state.
//!
//! Three independent routes produce `|ψ(t)⟩`: the closed form for equal
//! couplings ([`analytic_state`]), the closed form for mismatched couplings
//! ([`perturbed_state`]), and a generic eigendecomposition propagator
//! ([`numerical_state`]) that never touches either closed form.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eigen, HermitianEigen, StateVector, C64, DIM};
use crate::model::{build_hamiltonian, ModelParams};

const ZERO: C64 = C64::new(0.0, 0.0);

fn basis_amplitudes(terms: [(usize, C64); 4]) -> StateVector {
    let mut amps = vec![ZERO; DIM];
    for (i, c) in terms {
        amps[i] += c;
    }
    StateVector::from_unchecked(amps)
}

// Single-excitation basis indices (atom 1 most significant).
const EXC1: usize = 8; // |+−−−⟩
const EXC2: usize = 4; // |−+−−⟩
const EXC3: usize = 2; // |−−+−⟩
const EXC4: usize = 1; // |−−−+⟩

/// `cosθ|−+−−⟩ + e^{iφ} sinθ|−−+−⟩`: atoms 2 and 3 share the excitation.
///
/// For `θ = kπ/2` the state is a product state and there is no entanglement
/// to transfer; the dynamics is still well defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialState {
    pub theta: f64,
    pub phi: f64,
}

impl InitialState {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn state(&self) -> StateVector {
        let (s, c) = self.theta.sin_cos();
        basis_amplitudes([
            (EXC2, C64::new(c, 0.0)),
            (EXC3, C64::from_polar(s, self.phi)),
            (EXC1, ZERO),
            (EXC4, ZERO),
        ])
    }
}

/// `cosλ|+−−−⟩ + e^{iζ} sinλ|−−−+⟩`: the excitation shared by atoms 1 and 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetState {
    pub lambda: f64,
    pub zeta: f64,
}

impl TargetState {
    pub fn new(lambda: f64, zeta: f64) -> Self {
        Self { lambda, zeta }
    }

    /// `λ = θ`, `ζ = φ`: the target the initial state is transferred to.
    pub fn matched(init: &InitialState) -> Self {
        Self {
            lambda: init.theta,
            zeta: init.phi,
        }
    }

    pub fn state(&self) -> StateVector {
        let (s, c) = self.lambda.sin_cos();
        basis_amplitudes([
            (EXC1, C64::new(c, 0.0)),
            (EXC4, C64::from_polar(s, self.zeta)),
            (EXC2, ZERO),
            (EXC3, ZERO),
        ])
    }
}

/// Closed-form `|ψ(t)⟩` for equal couplings `η = eta12 = eta34`:
///
/// `e^{iωt}{cosθ[−i sin(ηt)|+−−−⟩ + cos(ηt)|−+−−⟩]
///        + e^{iφ} sinθ[−i sin(ηt)|−−−+⟩ + cos(ηt)|−−+−⟩]}`.
pub fn analytic_state(init: &InitialState, p: &ModelParams, t: f64) -> Result<StateVector> {
    if !p.is_symmetric() {
        return invalid(format!(
            "analytic_state needs equal couplings (eta12={}, eta34={}); use perturbed_state",
            p.eta12, p.eta34
        ));
    }
    Ok(perturbed_state(init, p, t))
}

/// Closed-form `|ψ̃(t)⟩` with `eta12` driving the `cosθ` branch and `eta34`
/// the `sinθ` branch.
pub fn perturbed_state(init: &InitialState, p: &ModelParams, t: f64) -> StateVector {
    let global = C64::from_polar(1.0, p.omega * t);
    let (st, ct) = init.theta.sin_cos();
    let (s12, c12) = (p.eta12 * t).sin_cos();
    let (s34, c34) = (p.eta34 * t).sin_cos();
    let a = global * ct;
    let b = global * C64::from_polar(st, init.phi);
    let minus_i = C64::new(0.0, -1.0);
    basis_amplitudes([
        (EXC1, a * minus_i * s12),
        (EXC2, a * c12),
        (EXC4, b * minus_i * s34),
        (EXC3, b * c34),
    ])
}

/// `exp(−iHt)` applied through the eigendecomposition of `H`, reusable
/// across many times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: HermitianEigen,
}

impl Propagator {
    pub fn new(p: &ModelParams) -> Result<Self> {
        Ok(Self {
            eigen: hermitian_eigen(&build_hamiltonian(p))?,
        })
    }

    pub fn evolve(&self, psi0: &StateVector, t: f64) -> StateVector {
        let v = &self.eigen.vectors;
        let amps = psi0.amplitudes();
        let coeffs: Vec<C64> = (0..DIM)
            .map(|k| {
                let proj: C64 = (0..DIM).map(|r| v.get(r, k).conj() * amps[r]).sum();
                proj * C64::from_polar(1.0, -self.eigen.values[k] * t)
            })
            .collect();
        let out = (0..DIM)
            .map(|r| (0..DIM).map(|k| v.get(r, k) * coeffs[k]).sum())
            .collect();
        StateVector::from_unchecked(out)
    }

    pub fn energies(&self) -> &[f64] {
        &self.eigen.values
    }
}

/// `exp(−iHt)|ψ(0)⟩` through a generic Hermitian eigensolver.
pub fn numerical_state(init: &InitialState, p: &ModelParams, t: f64) -> Result<StateVector> {
    Ok(Propagator::new(p)?.evolve(&init.state(), t))
}

/// `A = |⟨ψ_S|ψ⟩|²`.
pub fn overlap_with_target(state: &StateVector, target: &TargetState) -> f64 {
    target.state().inner(state).norm_sqr()
}

/// Closed form of `A(t)` for the equal-coupling evolution:
/// `sin²(ηt)[cos²θcos²λ + sin²θsin²λ + ½ sin2θ sin2λ cos(φ−ζ)]`.
pub fn overlap_formula(init: &InitialState, target: &TargetState, eta: f64, t: f64) -> f64 {
    let (th, la) = (init.theta, target.lambda);
    let bracket = th.cos().powi(2) * la.cos().powi(2)
        + th.sin().powi(2) * la.sin().powi(2)
        + 0.5 * (2.0 * th).sin() * (2.0 * la).sin() * (init.phi - target.zeta).cos();
    (eta * t).sin().powi(2) * bracket
}

/// Upper bound `(|cosθ cosλ| + |sinθ sinλ|)²` on `A(t)`.
pub fn overlap_upper_bound(theta: f64, lambda: f64) -> f64 {
    ((theta.cos() * lambda.cos()).abs() + (theta.sin() * lambda.sin()).abs()).powi(2)
}

/// Instants of complete transfer and of return to the initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferSchedule {
    /// First transfer time `π/(2η)`.
    pub t0: f64,
    /// Oscillation period `π/η`.
    pub period: f64,
    /// `t_n = (π/2η)(2n + 1)`.
    pub transfer_times: Vec<f64>,
    /// `t_m = (π/η)(m + 1)`.
    pub return_times: Vec<f64>,
}

pub fn transfer_schedule(p: &ModelParams, n_max: usize) -> Result<TransferSchedule> {
    if !p.is_symmetric() {
        return invalid(format!(
            "transfer times are defined only for equal couplings (delta eta = {})",
            p.delta_eta()
        ));
    }
    let eta = p.eta12;
    if !(eta > 0.0) {
        return invalid(format!("eta must be positive, got {eta}"));
    }
    let period = PI / eta;
    Ok(TransferSchedule {
        t0: PI / (2.0 * eta),
        period,
        transfer_times: (0..n_max)
            .map(|n| PI / (2.0 * eta) * (2 * n + 1) as f64)
            .collect(),
        return_times: (0..n_max).map(|m| period * (m + 1) as f64).collect(),
    })
}

/// `steps` uniform points on `[0, t_max]`, both ends included.
pub fn time_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return invalid(format!("a time grid needs at least 2 steps, got {steps}"));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return invalid(format!(
            "t_max must be finite and non-negative, got {t_max}"
        ));
    }
    let dt = t_max / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k == steps - 1 { t_max } else { k as f64 * dt })
        .collect())
}

/// Default grid: 200 points covering two periods, `[0, 2π/η]`.
pub fn default_grid(eta: f64) -> Result<Vec<f64>> {
    if !(eta > 0.0) {
        return invalid(format!("eta must be positive, got {eta}"));
    }
    time_grid(2.0 * PI / eta, 200)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{EXACT_TOL, PIPELINE_TOL};
    use std::f64::consts::FRAC_PI_4;

    fn params() -> ModelParams {
        ModelParams::symmetric(1.0e9, 1.0e6).unwrap()
    }

    #[test]
    fn initial_and_target_states_are_normalized() {
        let init = InitialState::new(0.3, 1.2);
        assert!((init.state().norm() - 1.0).abs() <= EXACT_TOL);
        assert!((TargetState::new(-2.0, 0.4).state().norm() - 1.0).abs() <= EXACT_TOL);
        assert_eq!(
            init.state().amplitude("-+--").unwrap(),
            C64::new(0.3f64.cos(), 0.0)
        );
    }

    #[test]
    fn analytic_state_at_zero_is_initial_state() {
        let init = InitialState::new(0.7, -0.3);
        let psi = analytic_state(&init, &params(), 0.0).unwrap();
        assert!(psi.distance(&init.state()) <= EXACT_TOL);
    }

    #[test]
    fn analytic_state_rejects_mismatch() {
        let p = ModelParams::perturbed(1.0, 1.0, 0.1).unwrap();
        assert!(analytic_state(&InitialState::new(0.1, 0.0), &p, 1.0).is_err());
    }

    #[test]
    fn first_transfer_time_yields_target_with_phase() {
        let init = InitialState::new(0.4, 0.9);
        let p = params();
        let t0 = PI / (2.0 * p.eta12);
        let psi = analytic_state(&init, &p, t0).unwrap();
        let phase = C64::new(0.0, -1.0) * C64::from_polar(1.0, p.omega * t0);
        let expected = TargetState::matched(&init).state().scale(phase);
        assert!(psi.distance(&expected) <= EXACT_TOL * 10.0);
    }

    #[test]
    fn half_period_returns_initial_state_with_phase() {
        let init = InitialState::new(1.1, 2.0);
        let p = params();
        let t = PI / p.eta12;
        let psi = analytic_state(&init, &p, t).unwrap();
        let phase = -C64::from_polar(1.0, p.omega * t);
        assert!(psi.distance(&init.state().scale(phase)) <= EXACT_TOL * 10.0);
    }

    #[test]
    fn unperturbed_limit_of_perturbed_state() {
        let init = InitialState::new(0.2, 0.5);
        let p = ModelParams::symmetric(3.0, 0.8).unwrap();
        for &t in &[0.0, 0.3, 1.7, 9.0] {
            let a = analytic_state(&init, &p, t).unwrap();
            assert!(a.distance(&perturbed_state(&init, &p, t)) <= EXACT_TOL);
        }
    }

    #[test]
    fn theta_zero_ignores_mismatch() {
        let init = InitialState::new(0.0, 0.3);
        let p = ModelParams::perturbed(2.0, 1.0, 0.37).unwrap();
        let psi = perturbed_state(&init, &p, PI / 2.0);
        let a = overlap_with_target(&psi, &TargetState::matched(&init));
        assert!((a - 1.0).abs() <= EXACT_TOL);
    }

    #[test]
    fn numerical_state_at_zero_and_free_evolution() {
        let init = InitialState::new(FRAC_PI_4, 0.3);
        let psi = numerical_state(&init, &params(), 0.0).unwrap();
        assert!(psi.distance(&init.state()) <= EXACT_TOL);

        let free = ModelParams::symmetric(1.0e9, 0.0).unwrap();
        let psi = numerical_state(&init, &free, 3.3e-6).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(init.state().amplitudes()) {
            assert!((a.norm() - b.norm()).abs() <= EXACT_TOL);
        }
    }

    #[test]
    fn numerical_matches_analytic_at_physical_scale() {
        let init = InitialState::new(0.9, -1.4);
        let p = params();
        let prop = Propagator::new(&p).unwrap();
        for t in default_grid(p.eta12).unwrap() {
            let a = analytic_state(&init, &p, t).unwrap();
            let n = prop.evolve(&init.state(), t);
            assert!(
                a.distance(&n) <= PIPELINE_TOL,
                "t = {t}: {}",
                a.distance(&n)
            );
        }
    }

    #[test]
    fn overlap_cases() {
        let init = InitialState::new(0.6, 0.25);
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        let target = TargetState::matched(&init);
        let t0 = PI / 2.0;
        let a = overlap_with_target(&analytic_state(&init, &p, t0).unwrap(), &target);
        assert!((a - 1.0).abs() <= EXACT_TOL);
        let a0 = overlap_with_target(&init.state(), &TargetState::new(0.3, 0.1));
        assert_eq!(a0, 0.0);
        let orthogonal = TargetState::new(init.theta + PI / 2.0, init.phi);
        for t in time_grid(2.0 * PI, 50).unwrap() {
            let psi = analytic_state(&init, &p, t).unwrap();
            assert!(overlap_with_target(&psi, &orthogonal) <= EXACT_TOL);
        }
    }

    #[test]
    fn overlap_matches_closed_form() {
        let init = InitialState::new(0.35, 1.0);
        let target = TargetState::new(-0.8, 2.2);
        let p = ModelParams::symmetric(1.5, 0.9).unwrap();
        for t in time_grid(7.0, 40).unwrap() {
            let psi = analytic_state(&init, &p, t).unwrap();
            let direct = overlap_with_target(&psi, &target);
            assert!((direct - overlap_formula(&init, &target, p.eta12, t)).abs() <= EXACT_TOL);
        }
    }

    #[test]
    fn schedule_for_megahertz_coupling() {
        let s = transfer_schedule(&params(), 4).unwrap();
        assert!((s.t0 - 1.5707963267948966e-6).abs() < 1e-21);
        assert_eq!(s.period, PI / 1.0e6);
        assert!((s.transfer_times[1] - s.transfer_times[0] - s.period).abs() < 1e-20);
        assert_eq!(s.return_times[0], s.period);
        assert_eq!(s.transfer_times.len(), 4);
    }

    #[test]
    fn schedule_rejects_bad_couplings() {
        assert!(transfer_schedule(&ModelParams::perturbed(1.0, 1.0, 0.1).unwrap(), 3).is_err());
        assert!(transfer_schedule(&ModelParams::symmetric(1.0, 0.0).unwrap(), 3).is_err());
    }

    #[test]
    fn grid_edges() {
        assert!(time_grid(1.0, 1).is_err());
        assert!(time_grid(-1.0, 5).is_err());
        assert_eq!(time_grid(0.0, 2).unwrap(), vec![0.0, 0.0]);
        let g = time_grid(2.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
