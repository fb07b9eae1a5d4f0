//! Parametric Nikiforov-Uvarov solver core.
//!
//! Every equation of the form
//!
//! ```text
//! ψ'' + (a1 − a2 s)/(s(1 − a3 s)) ψ' + (−ξ1 s² + ξ2 s − ξ3)/(s(1 − a3 s))² ψ = 0
//! ```
//!
//! is described by six numbers ([`NuCoefficients`]). From them the engine
//! derives the auxiliary constants `a4..a13`, the quantization condition and
//! the polynomial solution `ψ(s) = φ(s) y_n(s)`. Nothing here knows about the
//! physical potential; the `dirac` module supplies the mapping.
//!
//! Two details differ from the commonly printed tables of this method:
//! the second-branch quantization condition carries `(2n + 1) a5` (the term
//! that falls out of `λ = λ_n` for that branch), and the second Jacobi
//! parameter is `a11/a3 − a10 − 1`, which reduces to `(a11 − a10 − 1)/a3`
//! only at `a3 = 1`. Both are checked below by substituting the solution back
//! into the differential equation.

use serde::Serialize;
use thiserror::Error;

use crate::special_fn::{self, SpecialFnError};

/// Radicands in `[-RADICAND_TOLERANCE, 0)` are treated as zero.
pub const RADICAND_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("coefficient {name} is not finite")]
    NonFinite { name: &'static str },
    #[error("a3 must be zero or positive, got {0}")]
    NegativeA3(f64),
    #[error("a8·a9 = {product} < 0: the radicand of π(s) is not a perfect square over the reals")]
    NegativeDiscriminant { product: f64 },
    #[error("radicand {name} = {value} is negative")]
    NegativeRadicand { name: &'static str, value: f64 },
    #[error("s = {s} lies outside the domain of the solution")]
    DomainError { s: f64 },
    #[error(transparent)]
    Special(#[from] SpecialFnError),
}

/// The six inputs of the parametric method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl NuCoefficients {
    pub fn new(a1: f64, a2: f64, a3: f64, xi1: f64, xi2: f64, xi3: f64) -> Result<Self, NuError> {
        let c = Self {
            a1,
            a2,
            a3,
            xi1,
            xi2,
            xi3,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), NuError> {
        let fields = [
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("xi1", self.xi1),
            ("xi2", self.xi2),
            ("xi3", self.xi3),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(NuError::NonFinite { name });
        }
        if self.a3 < 0.0 {
            return Err(NuError::NegativeA3(self.a3));
        }
        Ok(())
    }
}

/// Which root of the perfect-square condition on `k` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `k = −(a7 + 2 a3 a8) − 2√(a8 a9)`
    #[default]
    First,
    /// `k = −(a7 + 2 a3 a8) + 2√(a8 a9)`
    Second,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::First => 1.0,
            Branch::Second => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuDerived {
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
    pub a8: f64,
    pub a9: f64,
    /// Set by [`select_k`].
    pub k: Option<f64>,
    pub branch: Branch,
}

/// Parameters of the polynomial solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParameters {
    pub a10: f64,
    pub a11: f64,
    pub a12: f64,
    pub a13: f64,
}

impl WaveParameters {
    /// `(α, β)` of the Jacobi factor `P_n^{(α,β)}(1 − 2 a3 s)`; only meaningful for `a3 > 0`.
    pub fn jacobi_parameters(&self, a3: f64) -> (f64, f64) {
        (self.a10 - 1.0, self.a11 / a3 - self.a10 - 1.0)
    }
}

pub fn derive_parameters(c: &NuCoefficients) -> NuDerived {
    let a4 = 0.5 * (1.0 - c.a1);
    let a5 = 0.5 * (c.a2 - 2.0 * c.a3);
    let a6 = a5 * a5 + c.xi1;
    let a7 = 2.0 * a4 * a5 - c.xi2;
    let a8 = a4 * a4 + c.xi3;
    let a9 = c.a3 * a7 + c.a3 * c.a3 * a8 + a6;
    NuDerived {
        a4,
        a5,
        a6,
        a7,
        a8,
        a9,
        k: None,
        branch: Branch::First,
    }
}

pub fn select_k(d: &NuDerived, c: &NuCoefficients, branch: Branch) -> Result<NuDerived, NuError> {
    let product = d.a8 * d.a9;
    let product = if (-RADICAND_TOLERANCE..0.0).contains(&product) {
        0.0
    } else {
        product
    };
    if product < 0.0 {
        return Err(NuError::NegativeDiscriminant { product });
    }
    let k = -(d.a7 + 2.0 * c.a3 * d.a8) - branch.sign() * 2.0 * product.sqrt();
    Ok(NuDerived {
        k: Some(k),
        branch,
        ..*d
    })
}

fn clamped_sqrt(name: &'static str, value: f64) -> Result<f64, NuError> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else if value >= -RADICAND_TOLERANCE {
        Ok(0.0)
    } else {
        Err(NuError::NegativeRadicand { name, value })
    }
}

fn roots(d: &NuDerived) -> Result<(f64, f64), NuError> {
    Ok((clamped_sqrt("a8", d.a8)?, clamped_sqrt("a9", d.a9)?))
}

/// Left-hand side of the quantization condition for the branch stored in `d`.
/// A bound state of degree `n` exists exactly where this vanishes.
pub fn energy_residual(d: &NuDerived, c: &NuCoefficients, n: usize) -> Result<f64, NuError> {
    let (r8, r9) = roots(d)?;
    let sign = d.branch.sign();
    let n = n as f64;
    Ok(c.a2 * n - (2.0 * n + 1.0) * d.a5
        + (2.0 * n + 1.0) * (r9 + sign * c.a3 * r8)
        + n * (n - 1.0) * c.a3
        + d.a7
        + 2.0 * c.a3 * d.a8
        + sign * 2.0 * r8 * r9)
}

pub fn wavefunction_parameters(
    d: &NuDerived,
    c: &NuCoefficients,
) -> Result<WaveParameters, NuError> {
    let (r8, r9) = roots(d)?;
    let sign = d.branch.sign();
    Ok(WaveParameters {
        a10: c.a1 + 2.0 * d.a4 + sign * 2.0 * r8,
        a11: c.a2 - 2.0 * d.a5 + 2.0 * (r9 + sign * c.a3 * r8),
        a12: d.a4 + sign * r8,
        a13: d.a5 - (r9 + sign * c.a3 * r8),
    })
}

/// Slope of `τ(s)`; a physically admissible solution has a negative slope.
pub fn tau_slope(d: &NuDerived, c: &NuCoefficients) -> Result<f64, NuError> {
    let (r8, r9) = roots(d)?;
    Ok(-2.0 * c.a3 - 2.0 * (r9 + d.branch.sign() * c.a3 * r8))
}

fn check_domain(c: &NuCoefficients, s: f64) -> Result<(), NuError> {
    let inside = s > 0.0 && (c.a3 == 0.0 || s < 1.0 / c.a3);
    if inside {
        Ok(())
    } else {
        Err(NuError::DomainError { s })
    }
}

/// Unnormalized `ψ(s) = φ(s) y_n(s)`; the Laguerre form is used when `a3 = 0`.
pub fn evaluate_nu_wavefunction(
    d: &NuDerived,
    c: &NuCoefficients,
    n: usize,
    s: f64,
) -> Result<f64, NuError> {
    Ok(evaluate_with_derivative(d, c, n, s)?.0)
}

/// `ψ(s)` together with `dψ/ds`.
pub fn evaluate_with_derivative(
    d: &NuDerived,
    c: &NuCoefficients,
    n: usize,
    s: f64,
) -> Result<(f64, f64), NuError> {
    check_domain(c, s)?;
    let w = wavefunction_parameters(d, c)?;
    if c.a3 == 0.0 {
        let alpha = w.a10 - 1.0;
        let x = w.a11 * s;
        let envelope = s.powf(w.a12) * (w.a13 * s).exp();
        let poly = special_fn::laguerre(n, alpha, x)?;
        let dpoly = if n == 0 {
            0.0
        } else {
            -special_fn::laguerre(n - 1, alpha + 1.0, x)?
        };
        let value = envelope * poly;
        let deriv = envelope * ((w.a12 / s + w.a13) * poly + w.a11 * dpoly);
        Ok((value, deriv))
    } else {
        let (alpha, beta) = w.jacobi_parameters(c.a3);
        let q = -w.a12 - w.a13 / c.a3;
        let tail = 1.0 - c.a3 * s;
        let x = 1.0 - 2.0 * c.a3 * s;
        let envelope = s.powf(w.a12) * tail.powf(q);
        let poly = special_fn::jacobi(n, alpha, beta, x)?;
        let dpoly = special_fn::jacobi_derivative(n, alpha, beta, x)?;
        let value = envelope * poly;
        let deriv = envelope * ((w.a12 / s - q * c.a3 / tail) * poly - 2.0 * c.a3 * dpoly);
        Ok((value, deriv))
    }
}
