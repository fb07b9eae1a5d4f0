//! Dirac bound states in the inversely quadratic Yukawa potential
//! `−V₀ e^{−2αr}/r²` with a Coulomb-like tensor term `U(r) = −H/r`.
//!
//! Under pseudospin symmetry (`V + S = C_ps`) the lower component obeys a
//! Schrödinger-like equation with the potential entering through `Δ = V − S`;
//! under spin symmetry (`V − S = C_s`) the upper component does, through `Σ`.
//! Both are reduced to the parametric Nikiforov-Uvarov form after replacing
//! `1/r²` by `4α² e^{−2αr}/(1 − e^{−2αr})²`.

mod energy;
mod quantum;
mod splitting;
mod wavefunction;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nu_engine::{NuCoefficients, NuError};

pub use energy::{
    energy_residual_raw, energy_residual_rearranged, solve_energies, strict_domain, EnergySolution,
    SolveMode, SolveOptions, DOMAIN_MARGIN,
};
pub use quantum::{quantum_number_map, QuantumNumbers};
pub use splitting::{doublet_partner, doublet_splitting_report, SplittingRow};
pub use wavefunction::{
    back_substitution, default_grid, lower_component_pspin, lower_from_upper, radial_wavefunction,
    upper_component_spin, upper_from_lower, BackSubstitution, ComponentSamples, RadialWavefunction,
    THRESHOLD_GUARD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Spin,
    Pspin,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Spin => "spin",
            Symmetry::Pspin => "pspin",
        })
    }
}

impl FromStr for Symmetry {
    type Err = DiracError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spin" => Ok(Symmetry::Spin),
            "pspin" | "pseudospin" => Ok(Symmetry::Pspin),
            other => Err(DiracError::UnknownSymmetry(other.to_string())),
        }
    }
}

/// Which square root of the energy equation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Radicand {
    /// `(Λ − 1/2)² − γV₀` (or the spin analog with `η`).
    Centrifugal,
    /// `β²` (or `β̃²`).
    BetaSquared,
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Radicand::Centrifugal => "centrifugal",
            Radicand::BetaSquared => "beta squared",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiracError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("unknown symmetry {0:?}, expected spin or pspin")]
    UnknownSymmetry(String),
    #[error("kappa must be nonzero")]
    ZeroKappa,
    #[error("{which} radicand is negative ({value})")]
    NegativeRadicand { which: Radicand, value: f64 },
    #[error("P = {0} is not positive")]
    DegenerateP(f64),
    #[error(
        "window [{lo}, {hi}] does not intersect the bound-state domain ({domain_lo}, {domain_hi})"
    )]
    EmptyWindow {
        lo: f64,
        hi: f64,
        domain_lo: f64,
        domain_hi: f64,
    },
    #[error("no root for n = {n}, kappa = {kappa}")]
    NoRoot { n: usize, kappa: i32 },
    #[error("wavefunction exponents are not real at E = {energy}")]
    ExponentNotReal { energy: f64 },
    #[error("energy sits on the threshold: denominator {denominator}")]
    EnergyAtThreshold { denominator: f64 },
    #[error("r must be positive, got {0}")]
    NonpositiveR(f64),
    #[error("denominator vanishes ({0})")]
    DegenerateDenominator(f64),
    #[error(transparent)]
    Nu(#[from] NuError),
}

/// Physical inputs, in units with `ħ = c = 1` and lengths in fm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// fm⁻¹
    pub mass: f64,
    /// Dimensionless strength of `e^{−2αr}/r²`.
    pub depth: f64,
    /// α, fm⁻¹
    pub screening: f64,
    /// H of the tensor term.
    pub tensor: f64,
    /// `C_s`, fm⁻¹
    pub spin_constant: f64,
    /// `C_ps`, fm⁻¹
    pub pspin_constant: f64,
    /// Stored only; the tensor term is applied at all radii.
    pub coulomb_radius: Option<f64>,
    pub charges: Option<(f64, f64)>,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mass: 5.0,
            depth: 1.0,
            screening: 0.05,
            tensor: 0.0,
            spin_constant: 6.0,
            pspin_constant: -5.5,
            coulomb_radius: None,
            charges: None,
        }
    }
}

impl PhysicalParams {
    pub fn with_tensor(self, tensor: f64) -> Self {
        Self { tensor, ..self }
    }

    pub fn with_screening(self, screening: f64) -> Self {
        Self { screening, ..self }
    }

    pub fn validate(&self) -> Result<(), DiracError> {
        let check = |name, value: f64, ok: bool, reason| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(DiracError::InvalidParameter {
                    name,
                    value,
                    reason,
                })
            }
        };
        check("mass", self.mass, self.mass > 0.0, "must be positive")?;
        check(
            "depth",
            self.depth,
            self.depth >= 0.0,
            "must be nonnegative",
        )?;
        check(
            "screening",
            self.screening,
            self.screening > 0.0,
            "must be positive",
        )?;
        check(
            "tensor",
            self.tensor,
            self.tensor >= 0.0,
            "must be nonnegative",
        )?;
        check("spin_constant", self.spin_constant, true, "must be finite")?;
        check(
            "pspin_constant",
            self.pspin_constant,
            true,
            "must be finite",
        )?;
        if let Some(rc) = self.coulomb_radius {
            check("coulomb_radius", rc, rc > 0.0, "must be positive")?;
        }
        Ok(())
    }

    /// `γ`, `β²` and the effective centrifugal index at energy `energy`.
    pub fn terms(&self, symmetry: Symmetry, kappa: i32, energy: f64) -> SymmetryTerms {
        let (m, e) = (self.mass, energy);
        let (gamma, beta_sq) = match symmetry {
            Symmetry::Pspin => {
                let c = self.pspin_constant;
                (e - m - c, (m + e) * (m - e + c))
            }
            Symmetry::Spin => {
                let c = self.spin_constant;
                (m + e - c, (m - e) * (m + e - c))
            }
        };
        SymmetryTerms {
            gamma,
            beta_sq,
            centrifugal: effective_centrifugal(kappa, self.tensor, symmetry),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryTerms {
    pub gamma: f64,
    pub beta_sq: f64,
    /// `Λ = κ + H` (pspin) or `η = κ + H + 1` (spin).
    pub centrifugal: f64,
}

impl SymmetryTerms {
    /// `(Λ − 1/2)² − γV₀`.
    pub fn centrifugal_radicand(&self, depth: f64) -> f64 {
        let half = self.centrifugal - 0.5;
        half * half - self.gamma * depth
    }
}

/// `Λ = κ + H` for pspin, `η = κ + H + 1` for spin. The tensor term turns
/// `κ(κ ∓ 1)` into `Λ(Λ − 1)`.
pub fn effective_centrifugal(kappa: i32, tensor: f64, symmetry: Symmetry) -> f64 {
    match symmetry {
        Symmetry::Pspin => kappa as f64 + tensor,
        Symmetry::Spin => kappa as f64 + tensor + 1.0,
    }
}

fn map_to_nu(p: &PhysicalParams, t: &SymmetryTerms) -> NuCoefficients {
    let eps = t.beta_sq / (4.0 * p.screening * p.screening);
    let c = t.centrifugal;
    NuCoefficients {
        a1: 1.0,
        a2: 1.0,
        a3: 1.0,
        xi1: eps - t.gamma * p.depth,
        xi2: -c * (c - 1.0) + 2.0 * eps,
        xi3: eps,
    }
}

pub fn pspin_nu_coefficients(p: &PhysicalParams, kappa: i32, energy: f64) -> NuCoefficients {
    map_to_nu(p, &p.terms(Symmetry::Pspin, kappa, energy))
}

pub fn spin_nu_coefficients(p: &PhysicalParams, kappa: i32, energy: f64) -> NuCoefficients {
    map_to_nu(p, &p.terms(Symmetry::Spin, kappa, energy))
}

pub fn nu_coefficients(
    p: &PhysicalParams,
    symmetry: Symmetry,
    kappa: i32,
    energy: f64,
) -> NuCoefficients {
    map_to_nu(p, &p.terms(symmetry, kappa, energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentrifugalApproximation {
    pub approx: f64,
    pub exact: f64,
    pub rel_error: f64,
}

/// Compares `4α² e^{−2αr}/(1 − e^{−2αr})²` with `1/r²`.
pub fn greene_aldrich(r: f64, screening: f64) -> Result<CentrifugalApproximation, DiracError> {
    if !(r > 0.0) {
        return Err(DiracError::NonpositiveR(r));
    }
    let approx = greene_aldrich_value(r, screening);
    let exact = 1.0 / (r * r);
    Ok(CentrifugalApproximation {
        approx,
        exact,
        rel_error: (approx - exact).abs() / exact,
    })
}

pub(crate) fn greene_aldrich_value(r: f64, screening: f64) -> f64 {
    let s = (-2.0 * screening * r).exp();
    let one_minus = -(-2.0 * screening * r).exp_m1();
    4.0 * screening * screening * s / (one_minus * one_minus)
}
