use std::fmt;

use crate::error::{invalid, Result};

/// Number of atoms in the model.
pub const N_SITES: usize = 4;
/// Dimension of the four-atom Hilbert space.
pub const DIM: usize = 1 << N_SITES;

/// Linear index of a product basis state. Atom 1 is the most significant
/// bit, bit 1 is the excited state: `index = 8·b₁ + 4·b₂ + 2·b₃ + b₄`.
pub fn index_of(bits: [bool; N_SITES]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Parses a ket label such as `"-+--"` (ASCII `-` or `−` for ground,
/// `+` for excited).
pub fn index_of_label(label: &str) -> Result<usize> {
    let mut bits = [false; N_SITES];
    let mut n = 0;
    for ch in label.chars() {
        if n == N_SITES {
            return invalid(format!("ket label {label:?} has more than {N_SITES} atoms"));
        }
        bits[n] = match ch {
            '+' => true,
            '-' | '−' => false,
            _ => return invalid(format!("unexpected character {ch:?} in ket label")),
        };
        n += 1;
    }
    if n != N_SITES {
        return invalid(format!("ket label {label:?} must name {N_SITES} atoms"));
    }
    Ok(index_of(bits))
}

/// Whether atom `site` (1-based) is excited in basis state `index`.
#[inline]
pub fn is_excited(index: usize, site: usize) -> bool {
    (index >> (N_SITES - site)) & 1 == 1
}

pub fn label_of(index: usize) -> String {
    (1..=N_SITES)
        .map(|s| if is_excited(index, s) { '+' } else { '-' })
        .collect()
}

pub fn excitation_count(index: usize) -> u32 {
    (index & (DIM - 1)).count_ones()
}

/// Ordered pair of distinct atoms, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairLabel {
    first: usize,
    second: usize,
}

impl PairLabel {
    pub const P12: PairLabel = PairLabel {
        first: 1,
        second: 2,
    };
    pub const P34: PairLabel = PairLabel {
        first: 3,
        second: 4,
    };
    pub const P23: PairLabel = PairLabel {
        first: 2,
        second: 3,
    };
    pub const P14: PairLabel = PairLabel {
        first: 1,
        second: 4,
    };
    pub const P13: PairLabel = PairLabel {
        first: 1,
        second: 3,
    };
    pub const P24: PairLabel = PairLabel {
        first: 2,
        second: 4,
    };

    pub fn new(first: usize, second: usize) -> Result<Self> {
        let valid = |s| (1..=N_SITES).contains(&s);
        if !valid(first) || !valid(second) {
            return invalid(format!(
                "pair ({first},{second}) names an atom outside 1..={N_SITES}"
            ));
        }
        if first == second {
            return invalid(format!(
                "pair ({first},{second}) must name two distinct atoms"
            ));
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn second(&self) -> usize {
        self.second
    }

    /// The two atoms not in this pair, in increasing order.
    pub fn complement(&self) -> [usize; 2] {
        let mut rest = (1..=N_SITES).filter(|&s| s != self.first && s != self.second);
        [rest.next().unwrap(), rest.next().unwrap()]
    }
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}
