use serde::Serialize;

use super::{solve_energies, DiracError, PhysicalParams, SolveOptions, Symmetry};

/// Doublet partner without tensor coupling: `1 − κ` (pspin) or `−1 − κ` (spin).
pub fn doublet_partner(kappa: i32, symmetry: Symmetry) -> i32 {
    match symmetry {
        Symmetry::Pspin => 1 - kappa,
        Symmetry::Spin => -1 - kappa,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplittingRow {
    pub n: usize,
    pub kappa: i32,
    pub partner: i32,
    pub tensor: f64,
    /// Lowest root for `κ`.
    pub energy: Option<f64>,
    /// Lowest root for the partner.
    pub partner_energy: Option<f64>,
    /// `E(κ) − E(κ′)`.
    pub split: Option<f64>,
    /// Whether the members moved in opposite directions from their
    /// zero-tensor values. `None` when a root is missing or `H = 0`.
    pub opposite_shift: Option<bool>,
}

/// Lowest root of each doublet member for every tensor strength.
pub fn doublet_splitting_report(
    p: &PhysicalParams,
    symmetry: Symmetry,
    pairs: &[(usize, i32)],
    tensors: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<SplittingRow>, DiracError> {
    let lowest = |h: f64, n: usize, kappa: i32| -> Result<Option<f64>, DiracError> {
        let roots = solve_energies(&p.with_tensor(h), symmetry, n, kappa, opts)?;
        Ok(roots.first().map(|s| s.energy))
    };
    let mut rows = Vec::new();
    for &(n, kappa) in pairs {
        let partner = doublet_partner(kappa, symmetry);
        let base = (lowest(0.0, n, kappa)?, lowest(0.0, n, partner)?);
        for &h in tensors {
            let energy = lowest(h, n, kappa)?;
            let partner_energy = lowest(h, n, partner)?;
            let split = energy.zip(partner_energy).map(|(a, b)| a - b);
            let opposite_shift = match (h != 0.0, energy, partner_energy, base) {
                (true, Some(e), Some(ep), (Some(e0), Some(ep0))) => {
                    Some((e - e0).signum() == -(ep - ep0).signum() && e != e0)
                }
                _ => None,
            };
            rows.push(SplittingRow {
                n,
                kappa,
                partner,
                tensor: h,
                energy,
                partner_energy,
                split,
                opposite_shift,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{energy_residual_raw, SolveMode};

    #[test]
    fn partners() {
        assert_eq!(doublet_partner(-1, Symmetry::Pspin), 2);
        assert_eq!(doublet_partner(-2, Symmetry::Spin), 1);
    }

    #[test]
    fn zero_tensor_pairs_do_not_split() {
        let p = PhysicalParams::default();
        let opts = SolveOptions {
            mode: SolveMode::Relaxed,
            ..SolveOptions::default()
        };
        let rows =
            doublet_splitting_report(&p, Symmetry::Pspin, &[(1, -1), (2, -3)], &[0.0, 5.0], &opts)
                .unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows.iter().filter(|r| r.tensor == 0.0) {
            assert!(row.split.unwrap().abs() < 1e-9);
            assert_eq!(row.opposite_shift, None);
        }
        for row in rows.iter().filter(|r| r.tensor == 5.0) {
            assert!(row.split.unwrap().abs() > 1e-11);
        }
        let strict = doublet_splitting_report(
            &p,
            Symmetry::Pspin,
            &[(1, -1)],
            &[0.0],
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(strict[0].split, None);
    }

    #[test]
    fn tensor_shifts_partner_to_reflected_kappa() {
        let p = PhysicalParams::default().with_tensor(5.0);
        for e in [-4.2, -2.0, -0.6] {
            let a = energy_residual_raw(&p, Symmetry::Pspin, 1, -1, e).unwrap();
            let b = energy_residual_raw(&p, Symmetry::Pspin, 1, 1 - 10 + 1, e).unwrap();
            assert_eq!(a, b);
            let c = energy_residual_raw(&p, Symmetry::Pspin, 1, 2, e).unwrap();
            assert_ne!(a, c);
        }
    }
}
