use serde::Serialize;

use super::{DiracError, Symmetry};

const ORBITAL_LETTERS: &[u8] = b"spdfghiklmnoqrtuv";

/// Quantum numbers attached to a spin-orbit number `κ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub kappa: i32,
    /// Orbital angular momentum of the upper component.
    pub l: u32,
    /// Pseudo-orbital angular momentum (lower component).
    pub l_tilde: u32,
    /// `2j`, so that `j` stays exact.
    pub two_j: u32,
    /// Radial number of the polynomial solution, once assigned.
    pub n: Option<usize>,
    /// Spectroscopic radial number, once assigned.
    pub n_spect: Option<usize>,
    pub label: String,
}

pub fn quantum_number_map(kappa: i32) -> Result<QuantumNumbers, DiracError> {
    if kappa == 0 {
        return Err(DiracError::ZeroKappa);
    }
    let (l, l_tilde) = if kappa < 0 {
        ((-kappa - 1) as u32, (-kappa) as u32)
    } else {
        (kappa as u32, (kappa - 1) as u32)
    };
    let two_j = 2 * kappa.unsigned_abs() - 1;
    Ok(QuantumNumbers {
        kappa,
        l,
        l_tilde,
        two_j,
        n: None,
        n_spect: None,
        label: orbital_label(l, two_j),
    })
}

fn orbital_label(l: u32, two_j: u32) -> String {
    let letter = ORBITAL_LETTERS
        .get(l as usize)
        .map(|&c| (c as char).to_string())
        .unwrap_or_else(|| format!("[l={l}]"));
    format!("{letter}{two_j}/2")
}

impl QuantumNumbers {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Assigns the radial number. Pseudospin states with `κ > 0` carry the
    /// spectroscopic label `n − 1`; everything else uses `n` directly.
    pub fn with_radial(mut self, n: usize, symmetry: Symmetry) -> Self {
        let n_spect = match symmetry {
            Symmetry::Pspin if self.kappa > 0 => n.checked_sub(1),
            _ => Some(n),
        };
        self.n = Some(n);
        self.n_spect = n_spect;
        self.label = match n_spect {
            Some(ns) => format!("{ns}{}", orbital_label(self.l, self.two_j)),
            None => format!("?{}", orbital_label(self.l, self.two_j)),
        };
        self
    }
}
