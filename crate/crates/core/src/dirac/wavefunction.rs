use serde::Serialize;

use super::{nu_coefficients, DiracError, PhysicalParams, Symmetry};
use crate::grid::RadialGrid;
use crate::nu_engine::{self, Branch};
use crate::oracle::count_nodes;

/// `|M ∓ E ± C|` below this is treated as the threshold energy.
pub const THRESHOLD_GUARD: f64 = 1e-12;

/// A normalized radial component and its `r`-derivative on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSamples {
    pub values: Vec<f64>,
    pub derivative: Vec<f64>,
    /// Factor applied to the bare closed form to reach unit L² norm.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialWavefunction {
    pub symmetry: Symmetry,
    pub energy: f64,
    pub n: usize,
    pub kappa: i32,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// F
    pub upper: Vec<f64>,
    /// G
    pub lower: Vec<f64>,
    pub norm: f64,
    pub node_count: usize,
}

impl RadialWavefunction {
    /// The component fixed by the closed form: G for pspin, F for spin.
    pub fn dominant(&self) -> &[f64] {
        match self.symmetry {
            Symmetry::Pspin => &self.lower,
            Symmetry::Spin => &self.upper,
        }
    }

    /// `(|ψ(r_first)|, |ψ(r_last)|) / max|ψ|` for the dominant component.
    pub fn boundary_ratios(&self) -> (f64, f64) {
        let d = self.dominant();
        let max = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (d[0].abs() / max, d[d.len() - 1].abs() / max)
    }
}

/// Grid used for wavefunction output: `r ∈ [10⁻¹²/α, 14/α]`.
pub fn default_grid(screening: f64) -> RadialGrid {
    RadialGrid::softplus(1e-12 / screening, 14.0 / screening, 5e-4 / screening, 5e-3)
}

fn closed_form_component(
    p: &PhysicalParams,
    symmetry: Symmetry,
    energy: f64,
    n: usize,
    kappa: i32,
    grid: &RadialGrid,
) -> Result<ComponentSamples, DiracError> {
    p.validate()?;
    if kappa == 0 {
        return Err(DiracError::ZeroKappa);
    }
    let t = p.terms(symmetry, kappa, energy);
    if t.beta_sq < 0.0 || t.centrifugal_radicand(p.depth) < 0.0 {
        return Err(DiracError::ExponentNotReal { energy });
    }
    let c = nu_coefficients(p, symmetry, kappa, energy);
    let d = nu_engine::select_k(&nu_engine::derive_parameters(&c), &c, Branch::First)?;
    let two_alpha = 2.0 * p.screening;
    let mut values = Vec::with_capacity(grid.len());
    let mut derivative = Vec::with_capacity(grid.len());
    for &r in &grid.r {
        let s = (-two_alpha * r).exp();
        let (psi, dpsi_ds) = nu_engine::evaluate_with_derivative(&d, &c, n, s)?;
        values.push(psi);
        derivative.push(-two_alpha * s * dpsi_ds);
    }
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    let norm = 1.0 / grid.integrate(&sq).sqrt();
    if !norm.is_finite() {
        return Err(DiracError::ExponentNotReal { energy });
    }
    values.iter_mut().for_each(|v| *v *= norm);
    derivative.iter_mut().for_each(|v| *v *= norm);
    Ok(ComponentSamples {
        values,
        derivative,
        norm,
    })
}

/// Lower component `G` of a pseudospin state,
/// `s^{β̃/2α} (1−s)^{1/2+√((Λ−1/2)²−γ̃V₀)} P_n^{(β̃/α, 2√(…))}(1−2s)` normalized on the grid.
pub fn lower_component_pspin(
    p: &PhysicalParams,
    energy: f64,
    n: usize,
    kappa: i32,
    grid: &RadialGrid,
) -> Result<ComponentSamples, DiracError> {
    closed_form_component(p, Symmetry::Pspin, energy, n, kappa, grid)
}

/// Upper component `F` of a spin-symmetric state.
pub fn upper_component_spin(
    p: &PhysicalParams,
    energy: f64,
    n: usize,
    kappa: i32,
    grid: &RadialGrid,
) -> Result<ComponentSamples, DiracError> {
    closed_form_component(p, Symmetry::Spin, energy, n, kappa, grid)
}

/// `F = (G′ − (κ + H)G/r) / (M − E + C_ps)`.
pub fn upper_from_lower(
    p: &PhysicalParams,
    energy: f64,
    kappa: i32,
    lower: &ComponentSamples,
    grid: &RadialGrid,
) -> Result<Vec<f64>, DiracError> {
    let denominator = p.mass - energy + p.pspin_constant;
    if denominator.abs() < THRESHOLD_GUARD {
        return Err(DiracError::EnergyAtThreshold { denominator });
    }
    let k = kappa as f64 + p.tensor;
    Ok(grid
        .r
        .iter()
        .zip(lower.values.iter().zip(&lower.derivative))
        .map(|(r, (g, dg))| (dg - k * g / r) / denominator)
        .collect())
}

/// `G = (F′ + (κ + H)F/r) / (M + E − C_s)`.
pub fn lower_from_upper(
    p: &PhysicalParams,
    energy: f64,
    kappa: i32,
    upper: &ComponentSamples,
    grid: &RadialGrid,
) -> Result<Vec<f64>, DiracError> {
    let denominator = p.mass + energy - p.spin_constant;
    if denominator.abs() < THRESHOLD_GUARD {
        return Err(DiracError::EnergyAtThreshold { denominator });
    }
    let k = kappa as f64 + p.tensor;
    Ok(grid
        .r
        .iter()
        .zip(upper.values.iter().zip(&upper.derivative))
        .map(|(r, (f, df))| (df + k * f / r) / denominator)
        .collect())
}

/// Both components on `grid` for the given energy. Any energy with real
/// exponents is accepted; only roots of the energy equation are bound states.
pub fn radial_wavefunction(
    p: &PhysicalParams,
    symmetry: Symmetry,
    energy: f64,
    n: usize,
    kappa: i32,
    grid: &RadialGrid,
) -> Result<RadialWavefunction, DiracError> {
    let dominant = closed_form_component(p, symmetry, energy, n, kappa, grid)?;
    let (upper, lower) = match symmetry {
        Symmetry::Pspin => {
            let f = upper_from_lower(p, energy, kappa, &dominant, grid)?;
            (f, dominant.values)
        }
        Symmetry::Spin => {
            let g = lower_from_upper(p, energy, kappa, &dominant, grid)?;
            (dominant.values, g)
        }
    };
    let node_count = count_nodes(match symmetry {
        Symmetry::Pspin => &lower,
        Symmetry::Spin => &upper,
    });
    Ok(RadialWavefunction {
        symmetry,
        energy,
        n,
        kappa,
        s: grid
            .r
            .iter()
            .map(|r| (-2.0 * p.screening * r).exp())
            .collect(),
        r: grid.r.clone(),
        upper,
        lower,
        norm: dominant.norm,
        node_count,
    })
}

/// Largest pointwise residual of the first-order pair, relative to the
/// largest right-hand side on the interior grid. Derivatives are taken by
/// finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackSubstitution {
    /// The equation used to build the small component.
    pub defining: f64,
    /// The other equation. It holds only as well as the centrifugal
    /// approximation does.
    pub coupled: f64,
}

pub fn back_substitution(
    p: &PhysicalParams,
    wf: &RadialWavefunction,
    grid: &RadialGrid,
) -> BackSubstitution {
    let df = grid.derivative(&wf.upper);
    let dg = grid.derivative(&wf.lower);
    let k = wf.kappa as f64 + p.tensor;
    let e = wf.energy;
    let iqy = |r: f64| -p.depth * (-2.0 * p.screening * r).exp() / (r * r);
    // (d/dr + k/r) F = (M + E − Δ) G
    let first = |i: usize, delta: f64| {
        let r = grid.r[i];
        let rhs = (p.mass + e - delta) * wf.lower[i];
        (df[i] + k * wf.upper[i] / r - rhs, rhs)
    };
    // (d/dr − k/r) G = (M − E + Σ) F
    let second = |i: usize, sigma: f64| {
        let r = grid.r[i];
        let rhs = (p.mass - e + sigma) * wf.upper[i];
        (dg[i] - k * wf.lower[i] / r - rhs, rhs)
    };
    let interior = 2..grid.len() - 2;
    let relative = |f: &dyn Fn(usize) -> (f64, f64)| {
        let (mut res, mut scale) = (0.0f64, 0.0f64);
        for i in interior.clone() {
            let (d, rhs) = f(i);
            res = res.max(d.abs());
            scale = scale.max(rhs.abs());
        }
        res / scale
    };
    match wf.symmetry {
        Symmetry::Pspin => BackSubstitution {
            defining: relative(&|i| second(i, p.pspin_constant)),
            coupled: relative(&|i| first(i, iqy(grid.r[i]))),
        },
        Symmetry::Spin => BackSubstitution {
            defining: relative(&|i| first(i, p.spin_constant)),
            coupled: relative(&|i| second(i, iqy(grid.r[i]))),
        },
    }
}
