//! Small-screening limits of the pseudospin problem: the Mie-type
//! potential `A/r² − B/r + C` and its Coulomb-like special case.

use serde::Serialize;

use crate::dirac::{
    solve_energies, strict_domain, DiracError, PhysicalParams, Radicand, SolveOptions, Symmetry,
};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MieParams {
    /// Weight of `1/r²`.
    pub a: f64,
    /// Weight of `−1/r`.
    pub b: f64,
    /// Constant offset.
    pub c: f64,
}

impl MieParams {
    pub fn coulomb(b: f64) -> Self {
        Self { a: 0.0, b, c: 0.0 }
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.a / (r * r) - self.b / r + self.c
    }
}

/// Second-order expansion of `−V₀ e^{−2αr}/r²` at small `αr`.
/// Expects `v0 ≥ 0` and `screening > 0`.
pub fn iqy_to_mie(v0: f64, screening: f64) -> MieParams {
    MieParams {
        a: -v0,
        b: -2.0 * screening * v0,
        c: -2.0 * screening * screening * v0,
    }
}

/// `√((E−M−C_ps)C + (M+E)(M−E+C_ps)) − (E−M−C_ps)B / (1 + 2n + 2√((κ−1/2)² + (E−M−C_ps)A))`
pub fn mie_energy_residual(
    mass: f64,
    pspin_constant: f64,
    mie: &MieParams,
    n: usize,
    kappa: i32,
    energy: f64,
) -> Result<f64, DiracError> {
    let shifted = energy - mass - pspin_constant;
    let outer = shifted * mie.c + (mass + energy) * (mass - energy + pspin_constant);
    if outer < 0.0 {
        return Err(DiracError::NegativeRadicand {
            which: Radicand::BetaSquared,
            value: outer,
        });
    }
    let k = kappa as f64 - 0.5;
    let inner = k * k + shifted * mie.a;
    if inner < 0.0 {
        return Err(DiracError::NegativeRadicand {
            which: Radicand::Centrifugal,
            value: inner,
        });
    }
    let denominator = 1.0 + 2.0 * n as f64 + 2.0 * inner.sqrt();
    Ok(outer.sqrt() - shifted * mie.b / denominator)
}

/// `E = −M(4(n+κ)² − B²)/(4(n+κ)² + B²)`
pub fn coulomb_energy(mass: f64, b: f64, n: usize, kappa: i32) -> Result<f64, DiracError> {
    let nk = n as f64 + kappa as f64;
    let q = 4.0 * nk * nk;
    let denominator = q + b * b;
    if nk == 0.0 || denominator == 0.0 {
        return Err(DiracError::DegenerateDenominator(denominator));
    }
    Ok(-mass * (q - b * b) / denominator)
}

/// Interval where the outer radicand of [`mie_energy_residual`] is
/// non-negative. It is quadratic in `E` with leading coefficient `−1`.
pub fn mie_domain(mass: f64, pspin_constant: f64, mie: &MieParams) -> Option<(f64, f64)> {
    let b = pspin_constant + mie.c;
    let c = mass * (mass + pspin_constant) - mie.c * (mass + pspin_constant);
    let disc = b * b + 4.0 * c;
    if disc < 0.0 {
        return None;
    }
    let half = 0.5 * disc.sqrt();
    Some((0.5 * b - half, 0.5 * b + half))
}

/// Roots of [`mie_energy_residual`] in `window`, ascending. The window is
/// clipped to [`mie_domain`] with its endpoints excluded, where the residual
/// can vanish without a bound state.
pub fn mie_roots(
    mass: f64,
    pspin_constant: f64,
    mie: &MieParams,
    n: usize,
    kappa: i32,
    window: (f64, f64),
    tol: f64,
) -> Vec<f64> {
    let Some((dlo, dhi)) = mie_domain(mass, pspin_constant, mie) else {
        return Vec::new();
    };
    let margin = 1e-12 * (dhi - dlo).max(1.0);
    let (lo, hi) = (window.0.max(dlo + margin), window.1.min(dhi - margin));
    if !(lo < hi) {
        return Vec::new();
    }
    let f = |e: f64| mie_energy_residual(mass, pspin_constant, mie, n, kappa, e).ok();
    let step = (hi - lo) / 4000.0;
    let mut found: Vec<f64> = Vec::new();
    for (a, b) in roots::scan_brackets(f, lo, hi, step) {
        if let Ok(e) = roots::bisect(|e| f(e).unwrap_or(f64::NAN), a, b, tol) {
            if found.last().is_none_or(|&prev| e - prev > tol) {
                found.push(e);
            }
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceRow {
    pub screening: f64,
    /// Lowest strict pseudospin root of the full problem.
    pub iqy: Option<f64>,
    /// Lowest root of the Mie-type residual with [`iqy_to_mie`] parameters.
    pub mie: Option<f64>,
    pub gap: Option<f64>,
}

/// Pseudospin roots of the full problem next to those of its Mie-type limit
/// for each screening, without tensor coupling.
pub fn limit_coherence(
    p: &PhysicalParams,
    n: usize,
    kappa: i32,
    screenings: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<CoherenceRow>, DiracError> {
    let mut rows = Vec::with_capacity(screenings.len());
    for &alpha in screenings {
        let q = p.with_screening(alpha).with_tensor(0.0);
        let iqy = solve_energies(&q, Symmetry::Pspin, n, kappa, opts)?
            .first()
            .map(|s| s.energy);
        let (_, hi) = strict_domain(&q, Symmetry::Pspin);
        let mie = mie_roots(
            q.mass,
            q.pspin_constant,
            &iqy_to_mie(q.depth, alpha),
            n,
            kappa,
            (f64::NEG_INFINITY, hi),
            opts.tol,
        )
        .first()
        .copied();
        rows.push(CoherenceRow {
            screening: alpha,
            iqy,
            mie,
            gap: iqy.zip(mie).map(|(a, b)| (a - b).abs()),
        });
    }
    Ok(rows)
}

/// Whether every gap is present and strictly decreasing.
pub fn gaps_strictly_decrease(rows: &[CoherenceRow]) -> Option<bool> {
    let gaps: Option<Vec<f64>> = rows.iter().map(|r| r.gap).collect();
    gaps.map(|g| g.windows(2).all(|w| w[1] < w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-13;

    #[test]
    fn substitution() {
        let m = iqy_to_mie(1.0, 0.05);
        assert_eq!(m.a, -1.0);
        assert!((m.b + 0.1).abs() < 1e-15);
        assert!((m.c + 0.005).abs() < 1e-15);
        let m = iqy_to_mie(2.0, 1e-12);
        assert_eq!(m.a, -2.0);
        assert!(m.b.abs() < 1e-11 && m.c.abs() < 1e-22);
    }

    #[test]
    fn expansion_matches_potential_at_small_screening() {
        let (v0, alpha) = (1.3, 0.01);
        let mie = iqy_to_mie(v0, alpha);
        for r in [0.1, 0.5, 1.0, 2.0] {
            let exact = -v0 * (-2.0 * alpha * r).exp() / (r * r);
            let third = v0 * (2.0 * alpha).powi(3) * r / 6.0;
            assert!((mie.potential(r) - exact).abs() < 1.01 * third);
            assert!(mie.a / (r * r) < 0.0 && -mie.b / r > 0.0 && mie.c < 0.0);
        }
    }

    #[test]
    fn coulomb_closed_form() {
        assert!((coulomb_energy(1.0, 1.0, 0, 1).unwrap() + 0.6).abs() < 1e-15);
        for (n, kappa) in [(0, 1), (3, 2), (1, -4)] {
            assert_eq!(coulomb_energy(5.0, 0.0, n, kappa).unwrap(), -5.0);
        }
        assert!(matches!(
            coulomb_energy(1.0, 0.0, 1, -1),
            Err(DiracError::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn coulomb_levels_approach_minus_mass_from_above() {
        let levels: Vec<f64> = (1..=100)
            .map(|n| coulomb_energy(5.0, 1.0, n, 2).unwrap())
            .collect();
        assert!(levels.iter().all(|&e| e > -5.0));
        assert!(levels.windows(2).all(|w| w[1] < w[0]));
        assert!(levels[99] + 5.0 < 1e-3);
    }

    #[test]
    fn mie_residual_reproduces_coulomb_levels() {
        let mass = 5.0;
        for b in [0.5, 1.0] {
            for n in 0..3 {
                for kappa in 1..4 {
                    let mie = MieParams::coulomb(-b);
                    let roots = mie_roots(mass, 0.0, &mie, n, kappa, (-mass, mass), TOL);
                    let expected = coulomb_energy(mass, b, n, kappa).unwrap();
                    assert_eq!(roots.len(), 1, "n = {n}, κ = {kappa}: {roots:?}");
                    assert!(
                        (roots[0] - expected).abs() < 1e-9,
                        "{} vs {expected}",
                        roots[0]
                    );
                }
            }
        }
    }

    #[test]
    fn free_particle_has_only_threshold_zeros() {
        let mie = MieParams::coulomb(0.0);
        for e in [-4.9, -1.0, 0.0, 3.0] {
            let r = mie_energy_residual(5.0, 0.0, &mie, 1, 2, e).unwrap();
            assert!((r - ((5.0 + e) * (5.0 - e)).sqrt()).abs() < 1e-15);
            assert!(r > 0.0);
        }
        assert_eq!(mie_energy_residual(5.0, 0.0, &mie, 0, 1, 5.0).unwrap(), 0.0);
        assert!(mie_roots(5.0, 0.0, &mie, 0, 1, (-4.999, 4.999), TOL).is_empty());
        assert_eq!(mie_domain(5.0, 0.0, &mie), Some((-5.0, 5.0)));
        let (lo, hi) = mie_domain(5.0, -5.5, &iqy_to_mie(1.0, 0.05)).unwrap();
        let mie = iqy_to_mie(1.0, 0.05);
        for e in [lo + 1e-12, hi - 1e-12] {
            assert!(mie_energy_residual(5.0, -5.5, &mie, 0, 1, e).is_ok(), "{e}");
        }
        for e in [lo - 1e-9, hi + 1e-9] {
            assert!(
                mie_energy_residual(5.0, -5.5, &mie, 0, 1, e).is_err(),
                "{e}"
            );
        }
    }

    #[test]
    fn negative_radicands_are_errors() {
        let mie = MieParams::coulomb(-1.0);
        assert!(matches!(
            mie_energy_residual(5.0, 0.0, &mie, 0, 1, 6.0),
            Err(DiracError::NegativeRadicand {
                which: Radicand::BetaSquared,
                ..
            })
        ));
        let strong = MieParams {
            a: 10.0,
            b: 0.0,
            c: 0.0,
        };
        assert!(matches!(
            mie_energy_residual(5.0, 0.0, &strong, 0, 1, 0.0),
            Err(DiracError::NegativeRadicand {
                which: Radicand::Centrifugal,
                ..
            })
        ));
    }

    #[test]
    fn converged_mie_root_with_all_terms() {
        let mie = iqy_to_mie(1.0, 0.05);
        let roots = mie_roots(5.0, -5.5, &mie, 1, 2, (-6.0, -0.5), TOL);
        assert!(!roots.is_empty());
        for e in roots {
            let r = mie_energy_residual(5.0, -5.5, &mie, 1, 2, e).unwrap();
            assert!(r.abs() <= 1e-10, "{r}");
        }
    }

    #[test]
    fn coherence_report_has_no_full_problem_roots() {
        let rows = limit_coherence(
            &PhysicalParams::default(),
            1,
            2,
            &[0.02, 0.01, 0.005],
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert_eq!(row.iqy, None);
            assert!(row.mie.is_some());
            assert_eq!(row.gap, None);
        }
        assert_eq!(gaps_strictly_decrease(&rows), None);
        let made_up = [0.3, 0.2, 0.1].map(|g| CoherenceRow {
            screening: 0.0,
            iqy: None,
            mie: None,
            gap: Some(g),
        });
        assert_eq!(gaps_strictly_decrease(&made_up), Some(true));
    }
}
