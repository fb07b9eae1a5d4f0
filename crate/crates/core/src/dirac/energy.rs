use serde::Serialize;

use super::{nu_coefficients, DiracError, PhysicalParams, Radicand, Symmetry, SymmetryTerms};
use crate::nu_engine::{self, Branch};
use crate::roots;

/// Distance kept from each threshold of the bound-state domain by default.
pub const DOMAIN_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// Real principal roots inside `β² > 0` only.
    #[default]
    Strict,
    /// Every root of the squared equation, flagged with `sign_ok`.
    Relaxed,
}

impl std::str::FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strict" => Ok(SolveMode::Strict),
            "relaxed" => Ok(SolveMode::Relaxed),
            other => Err(format!(
                "unknown mode {other:?}, expected strict or relaxed"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Defaults to the bound-state domain shrunk by [`DOMAIN_MARGIN`].
    pub window: Option<(f64, f64)>,
    /// Defaults to a two-thousandth of the window.
    pub scan_step: Option<f64>,
    pub tol: f64,
    pub mode: SolveMode,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            window: None,
            scan_step: None,
            tol: 1e-12,
            mode: SolveMode::Strict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySolution {
    pub energy: f64,
    pub symmetry: Symmetry,
    pub n: usize,
    pub kappa: i32,
    pub tensor: f64,
    /// Rearranged (squared) residual at `energy`.
    pub residual: f64,
    /// Residual of the unsquared equation, when its radicands are real.
    pub raw_residual: Option<f64>,
    pub beta_sq: f64,
    pub lambda_or_eta: f64,
    pub sign_ok: bool,
    pub strict_valid: bool,
    /// Slope of τ(s) for the first k-branch; negative for an admissible solution.
    pub tau_slope: Option<f64>,
    pub node_count: Option<usize>,
}

/// Open interval of energies with `β² > 0`: `(−M, M + C_ps)` for pspin and
/// `(C_s − M, M)` for spin. May be empty.
pub fn strict_domain(p: &PhysicalParams, symmetry: Symmetry) -> (f64, f64) {
    match symmetry {
        Symmetry::Pspin => (-p.mass, p.mass + p.pspin_constant),
        Symmetry::Spin => (p.spin_constant - p.mass, p.mass),
    }
}

fn centrifugal_root(p: &PhysicalParams, t: &SymmetryTerms) -> Result<f64, DiracError> {
    let q = t.centrifugal_radicand(p.depth);
    if q < 0.0 {
        return Err(DiracError::NegativeRadicand {
            which: Radicand::Centrifugal,
            value: q,
        });
    }
    Ok(q.sqrt())
}

/// `(n + 1/2 + √((Λ−1/2)² − γV₀) + √(β²/4α²))² − (β²/4α² − γV₀)`.
pub fn energy_residual_raw(
    p: &PhysicalParams,
    symmetry: Symmetry,
    n: usize,
    kappa: i32,
    energy: f64,
) -> Result<f64, DiracError> {
    let t = p.terms(symmetry, kappa, energy);
    let root_q = centrifugal_root(p, &t)?;
    if t.beta_sq < 0.0 {
        return Err(DiracError::NegativeRadicand {
            which: Radicand::BetaSquared,
            value: t.beta_sq,
        });
    }
    let eps = t.beta_sq / (4.0 * p.screening * p.screening);
    let lhs = n as f64 + 0.5 + root_q + eps.sqrt();
    Ok(lhs * lhs - (eps - t.gamma * p.depth))
}

/// Squared form of the energy equation. With `P = n + 1/2 + √((Λ−1/2)² − γV₀)`
/// it reads `β² = 4α² ((γV₀ + P²)/(2P))²`; the unsquared equation also needs
/// `γV₀ + P² ≤ 0`, reported as the second value.
pub fn energy_residual_rearranged(
    p: &PhysicalParams,
    symmetry: Symmetry,
    n: usize,
    kappa: i32,
    energy: f64,
) -> Result<(f64, bool), DiracError> {
    let t = p.terms(symmetry, kappa, energy);
    let big_p = n as f64 + 0.5 + centrifugal_root(p, &t)?;
    if !(big_p > 0.0) {
        return Err(DiracError::DegenerateP(big_p));
    }
    let numerator = t.gamma * p.depth + big_p * big_p;
    let half = numerator / (2.0 * big_p);
    let residual = t.beta_sq - 4.0 * p.screening * p.screening * half * half;
    Ok((residual, numerator <= 0.0))
}

fn resolve_window(
    p: &PhysicalParams,
    symmetry: Symmetry,
    opts: &SolveOptions,
) -> Result<(f64, f64), DiracError> {
    let (domain_lo, domain_hi) = strict_domain(p, symmetry);
    let inner = (domain_lo + DOMAIN_MARGIN, domain_hi - DOMAIN_MARGIN);
    let (lo, hi) = match (opts.window, opts.mode) {
        (None, _) => inner,
        (Some((a, b)), SolveMode::Strict) => (a.max(inner.0), b.min(inner.1)),
        (Some(w), SolveMode::Relaxed) => w,
    };
    if lo < hi {
        Ok((lo, hi))
    } else {
        let (a, b) = opts.window.unwrap_or(inner);
        Err(DiracError::EmptyWindow {
            lo: a,
            hi: b,
            domain_lo,
            domain_hi,
        })
    }
}

/// All roots of the energy equation for `(n, κ)` inside the window, in
/// ascending order. An empty list means no bound state was found.
pub fn solve_energies(
    p: &PhysicalParams,
    symmetry: Symmetry,
    n: usize,
    kappa: i32,
    opts: &SolveOptions,
) -> Result<Vec<EnergySolution>, DiracError> {
    p.validate()?;
    if kappa == 0 {
        return Err(DiracError::ZeroKappa);
    }
    let (lo, hi) = resolve_window(p, symmetry, opts)?;
    let step = opts.scan_step.unwrap_or((hi - lo) / 2000.0);
    let residual = |e: f64| {
        energy_residual_rearranged(p, symmetry, n, kappa, e)
            .map(|(r, _)| r)
            .ok()
    };
    let brackets = roots::scan_brackets(residual, lo, hi, step);

    let mut solutions = Vec::new();
    for (a, b) in brackets {
        let f = |e: f64| residual(e).unwrap_or(f64::NAN);
        let Ok(energy) = roots::bisect(f, a, b, opts.tol) else {
            continue;
        };
        if symmetry == Symmetry::Pspin && energy >= 0.0 {
            continue;
        }
        let sol = describe(p, symmetry, n, kappa, energy)?;
        if opts.mode == SolveMode::Strict && !sol.strict_valid {
            continue;
        }
        if solutions
            .last()
            .is_some_and(|prev: &EnergySolution| (prev.energy - energy).abs() <= opts.tol)
        {
            continue;
        }
        solutions.push(sol);
    }
    Ok(solutions)
}

fn describe(
    p: &PhysicalParams,
    symmetry: Symmetry,
    n: usize,
    kappa: i32,
    energy: f64,
) -> Result<EnergySolution, DiracError> {
    let t = p.terms(symmetry, kappa, energy);
    let (residual, sign_ok) = energy_residual_rearranged(p, symmetry, n, kappa, energy)?;
    let raw_residual = energy_residual_raw(p, symmetry, n, kappa, energy).ok();
    let c = nu_coefficients(p, symmetry, kappa, energy);
    let d = nu_engine::derive_parameters(&c);
    let tau_slope = nu_engine::select_k(&d, &c, Branch::First)
        .and_then(|d| nu_engine::tau_slope(&d, &c))
        .ok();
    Ok(EnergySolution {
        energy,
        symmetry,
        n,
        kappa,
        tensor: p.tensor,
        residual,
        raw_residual,
        beta_sq: t.beta_sq,
        lambda_or_eta: t.centrifugal,
        sign_ok,
        strict_valid: t.beta_sq > 0.0 && sign_ok,
        tau_slope,
        node_count: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn caption() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn raw_residual_is_the_engine_quantization_condition() {
        for (sym, h, kappa) in [
            (Symmetry::Pspin, 0.0, -1),
            (Symmetry::Pspin, 5.0, 3),
            (Symmetry::Spin, 0.0, -3),
            (Symmetry::Spin, 5.0, 2),
        ] {
            let p = caption().with_tensor(h).with_screening(0.1);
            let (lo, hi) = strict_domain(&p, sym);
            for i in 1..50 {
                let e = lo + (hi - lo) * i as f64 / 50.0;
                let Ok(raw) = energy_residual_raw(&p, sym, 1, kappa, e) else {
                    continue;
                };
                let c = nu_coefficients(&p, sym, kappa, e);
                let d = nu_engine::select_k(&nu_engine::derive_parameters(&c), &c, Branch::First)
                    .unwrap();
                let engine = nu_engine::energy_residual(&d, &c, 1).unwrap();
                assert!(
                    (raw - engine).abs() <= 1e-9 * raw.abs().max(1.0),
                    "{raw} vs {engine}"
                );
            }
        }
    }

    #[test]
    fn squared_form_factors_the_raw_residual() {
        // rearranged = 4α²(√ε − T)(√ε + T) and raw = 2P(√ε + T)
        let p = caption().with_tensor(5.0);
        let (lo, hi) = strict_domain(&p, Symmetry::Pspin);
        for i in 1..100 {
            let e = lo + (hi - lo) * i as f64 / 100.0;
            let t = p.terms(Symmetry::Pspin, -2, e);
            let raw = energy_residual_raw(&p, Symmetry::Pspin, 2, -2, e).unwrap();
            let (sq, _) = energy_residual_rearranged(&p, Symmetry::Pspin, 2, -2, e).unwrap();
            let a = p.screening;
            let eps = t.beta_sq / (4.0 * a * a);
            let big_p = 2.5 + t.centrifugal_radicand(p.depth).sqrt();
            let tt = (t.gamma * p.depth + big_p * big_p) / (2.0 * big_p);
            let predicted = 4.0 * a * a * (eps.sqrt() - tt) * raw / (2.0 * big_p);
            assert!((sq - predicted).abs() <= 1e-10 * sq.abs().max(1e-3));
        }
    }

    #[test]
    fn principal_branch_has_no_roots_for_caption_parameters() {
        for sym in [Symmetry::Pspin, Symmetry::Spin] {
            for h in [0.0, 5.0] {
                for a in [0.05, 0.1] {
                    let p = caption().with_tensor(h).with_screening(a);
                    for kappa in [-4, -1, 1, 2, 5] {
                        for n in 0..3 {
                            let roots = solve_energies(&p, sym, n, kappa, &SolveOptions::default())
                                .unwrap();
                            assert!(roots.is_empty());
                            let (lo, hi) = strict_domain(&p, sym);
                            for i in 1..200 {
                                let e = lo + (hi - lo) * i as f64 / 200.0;
                                if let Ok((_, ok)) =
                                    energy_residual_rearranged(&p, sym, n, kappa, e)
                                {
                                    assert!(!ok);
                                }
                                if let Ok(raw) = energy_residual_raw(&p, sym, n, kappa, e) {
                                    assert!(raw > 0.0);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn radicand_errors_name_the_failing_root() {
        let p = caption();
        match energy_residual_raw(&p, Symmetry::Pspin, 1, -1, -0.3) {
            Err(DiracError::NegativeRadicand { which, value }) => {
                assert_eq!(which, Radicand::BetaSquared);
                assert!(value < 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        // spin, η = 0: (η − 1/2)² − γV₀ < 0 once γ > 1/4
        match energy_residual_raw(&p, Symmetry::Spin, 0, -1, 3.0) {
            Err(DiracError::NegativeRadicand { which, .. }) => {
                assert_eq!(which, Radicand::Centrifugal)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tabulated_energy_lies_outside_domain() {
        let p = caption();
        let t = p.terms(Symmetry::Pspin, -1, -0.491129);
        assert!((t.beta_sq + 0.0400).abs() < 5e-5, "{}", t.beta_sq);
        let t = p.terms(Symmetry::Spin, -2, 0.994385);
        assert!((t.beta_sq + 0.0225).abs() < 5e-5, "{}", t.beta_sq);
        assert!(matches!(
            energy_residual_raw(&p, Symmetry::Pspin, 1, -1, -0.491129),
            Err(DiracError::NegativeRadicand {
                which: Radicand::BetaSquared,
                ..
            })
        ));
    }

    #[test]
    fn window_outside_domain_is_rejected() {
        let p = caption();
        let opts = SolveOptions {
            window: Some((-0.4, -0.1)),
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve_energies(&p, Symmetry::Pspin, 1, -1, &opts),
            Err(DiracError::EmptyWindow { .. })
        ));
        let empty = PhysicalParams {
            pspin_constant: -20.0,
            ..caption()
        };
        assert!(matches!(
            solve_energies(&empty, Symmetry::Pspin, 1, -1, &SolveOptions::default()),
            Err(DiracError::EmptyWindow { .. })
        ));
        assert!(matches!(
            solve_energies(&p, Symmetry::Pspin, 1, 0, &SolveOptions::default()),
            Err(DiracError::ZeroKappa)
        ));
    }

    #[test]
    fn relaxed_roots_are_flagged_and_degenerate() {
        let p = caption();
        let opts = SolveOptions {
            mode: SolveMode::Relaxed,
            ..SolveOptions::default()
        };
        let a = solve_energies(&p, Symmetry::Pspin, 1, -1, &opts).unwrap();
        let b = solve_energies(&p, Symmetry::Pspin, 1, 2, &opts).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!(!x.sign_ok && !x.strict_valid);
            assert!(x.beta_sq > 0.0);
            assert!((x.energy - y.energy).abs() < 1e-9);
            assert!(x.energy < 0.0);
        }
        assert!(a.windows(2).all(|w| w[0].energy < w[1].energy));
    }

    proptest! {
        #[test]
        fn partner_residuals_coincide(e in -4.999f64..-0.501, n in 0usize..4, kappa in 1i32..8, h in prop::sample::select(vec![0.0, 0.5, 5.0])) {
            let p = caption().with_tensor(h);
            let partner = (1.0 - 2.0 * h) as i32 - kappa;
            prop_assume!(partner != 0);
            let a = energy_residual_raw(&p, Symmetry::Pspin, n, kappa, e).unwrap();
            let b = energy_residual_raw(&p, Symmetry::Pspin, n, partner, e).unwrap();
            prop_assert_eq!(a, b);
            let a = energy_residual_rearranged(&p, Symmetry::Pspin, n, kappa, e).unwrap();
            let b = energy_residual_rearranged(&p, Symmetry::Pspin, n, partner, e).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn spin_partner_residuals_coincide(e in 1.001f64..4.999, n in 0usize..4, kappa in 1i32..8, h in prop::sample::select(vec![0.0, 0.5, 5.0])) {
            let p = caption().with_tensor(h);
            let partner = (-1.0 - 2.0 * h) as i32 - kappa;
            prop_assume!(partner != 0);
            let a = energy_residual_rearranged(&p, Symmetry::Spin, n, kappa, e);
            let b = energy_residual_rearranged(&p, Symmetry::Spin, n, partner, e);
            prop_assert_eq!(a, b);
        }
    }
}
