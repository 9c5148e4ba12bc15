use num_complex::Complex64 as C64;

use super::basis::{self, DIM};
use super::{ComplexMatrix, EXACT_TOL};
use crate::error::{invalid, Error, Result};

/// Normalized pure state of the four atoms over the 16-element product
/// basis (see [`basis::index_of`] for the ordering).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Validates length 16 and unit norm within `1e-12`.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                found: amplitudes.len(),
            });
        }
        let state = Self { amplitudes };
        let norm = state.norm();
        if !((norm - 1.0).abs() <= EXACT_TOL) {
            return invalid(format!("state norm {norm} differs from 1"));
        }
        Ok(state)
    }

    /// Skips the norm check; for the outputs of norm-preserving operations.
    pub(crate) fn from_unchecked(amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), DIM);
        Self { amplitudes }
    }

    pub fn basis(index: usize) -> Result<Self> {
        if index >= DIM {
            return invalid(format!("basis index {index} out of range"));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); DIM];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Product basis state from a ket label such as `"+---"`.
    pub fn from_label(label: &str) -> Result<Self> {
        Self::basis(basis::index_of_label(label)?)
    }

    /// Normalized superposition `Σ cᵢ|labelᵢ⟩`.
    pub fn superposition(terms: &[(C64, &str)]) -> Result<Self> {
        let mut amplitudes = vec![C64::new(0.0, 0.0); DIM];
        for &(c, label) in terms {
            amplitudes[basis::index_of_label(label)?] += c;
        }
        Self::new(amplitudes)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &str) -> Result<C64> {
        Ok(self.amplitudes[basis::index_of_label(label)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Phase-insensitive overlap `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// Euclidean distance `‖self − other‖`, sensitive to global phase.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|&a| a * factor).collect(),
        }
    }

    /// Largest amplitude magnitude outside the single-excitation sector.
    pub fn leakage_outside_single_excitation(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| basis::excitation_count(*i) != 1)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max)
    }
}

/// `m·v`. The result is not renormalized.
pub fn apply(m: &ComplexMatrix, v: &StateVector) -> Result<StateVector> {
    if m.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            found: m.dim(),
        });
    }
    Ok(StateVector::from_unchecked(m.mul_vec(&v.amplitudes)?))
}

/// `⟨u|v⟩`.
pub fn inner(u: &StateVector, v: &StateVector) -> C64 {
    u.inner(v)
}
