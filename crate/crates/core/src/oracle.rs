//! Shooting-method eigenvalue solver for `u''(r) = W(r, E) u(r)`.
//!
//! Integration is fixed-step RK4 in the stretched coordinate of
//! [`RadialGrid`], seeded with `u ~ r^ν` at the origin and `u ~ e^{−βr}`
//! at the outer edge. The two solutions are matched through a normalized
//! Wronskian, which is continuous in `E` and vanishes exactly at
//! eigenvalues.

use serde::Serialize;
use thiserror::Error;

use crate::dirac::{greene_aldrich_value, PhysicalParams, Symmetry};
use crate::grid::RadialGrid;
use crate::roots;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("asymptotic seed undefined at E = {energy}")]
    SeedUndefined { energy: f64 },
    #[error("no eigenvalue in [{lo}, {hi}]")]
    NoRootInWindow { lo: f64, hi: f64 },
    #[error("no eigenvalue with {target} nodes; found node counts {found:?}")]
    NodeMismatch { target: usize, found: Vec<usize> },
    #[error("invalid energy window [{lo}, {hi}]")]
    InvalidWindow { lo: f64, hi: f64 },
}

/// A radial problem `u'' = W u`.
pub trait RadialEquation: Sync {
    fn coefficient(&self, r: f64, energy: f64) -> f64;
    /// `ν` of the regular solution `u ~ r^ν` at the origin.
    fn origin_exponent(&self, energy: f64) -> Option<f64>;
    /// `β` of the decaying solution `u ~ e^{−βr}`; `None` unless positive.
    fn decay_rate(&self, energy: f64) -> Option<f64>;
    /// Natural length scale, used for default grids.
    fn length_scale(&self) -> f64;
    /// Radial factors `f_k(r)` of a split `W(r, E) = Σ_k w_k(E) f_k(r)`,
    /// when one exists. Shooting then tabulates them once per grid.
    fn radial_factors(&self, _r: f64) -> Option<[f64; 3]> {
        None
    }
    /// Energy weights `w_k(E)` matching [`RadialEquation::radial_factors`].
    fn energy_weights(&self, _energy: f64) -> [f64; 3] {
        [0.0; 3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Centrifugal {
    Exact,
    Approximated,
}

/// The decoupled second-order equation for the dominant Dirac component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracRadialEquation {
    pub params: PhysicalParams,
    pub symmetry: Symmetry,
    pub kappa: i32,
    pub centrifugal: Centrifugal,
}

impl DiracRadialEquation {
    pub fn new(
        params: PhysicalParams,
        symmetry: Symmetry,
        kappa: i32,
        centrifugal: Centrifugal,
    ) -> Self {
        Self {
            params,
            symmetry,
            kappa,
            centrifugal,
        }
    }
}

impl RadialEquation for DiracRadialEquation {
    fn coefficient(&self, r: f64, energy: f64) -> f64 {
        let p = &self.params;
        let t = p.terms(self.symmetry, self.kappa, energy);
        let c = t.centrifugal;
        let s = (-2.0 * p.screening * r).exp();
        let inv_r2 = match self.centrifugal {
            Centrifugal::Exact => 1.0 / (r * r),
            Centrifugal::Approximated => greene_aldrich_value(r, p.screening),
        };
        (c * (c - 1.0) - t.gamma * p.depth * s) * inv_r2 + t.beta_sq
    }

    fn origin_exponent(&self, energy: f64) -> Option<f64> {
        let q = self
            .params
            .terms(self.symmetry, self.kappa, energy)
            .centrifugal_radicand(self.params.depth);
        (q >= 0.0).then(|| 0.5 + q.sqrt())
    }

    fn decay_rate(&self, energy: f64) -> Option<f64> {
        let b2 = self.params.terms(self.symmetry, self.kappa, energy).beta_sq;
        (b2 > 0.0).then(|| b2.sqrt())
    }

    fn length_scale(&self) -> f64 {
        1.0 / self.params.screening
    }

    fn radial_factors(&self, r: f64) -> Option<[f64; 3]> {
        let p = &self.params;
        let k = match self.centrifugal {
            Centrifugal::Exact => 1.0 / (r * r),
            Centrifugal::Approximated => greene_aldrich_value(r, p.screening),
        };
        Some([k, (-2.0 * p.screening * r).exp() * k, 1.0])
    }

    fn energy_weights(&self, energy: f64) -> [f64; 3] {
        let t = self.params.terms(self.symmetry, self.kappa, energy);
        let c = t.centrifugal;
        [c * (c - 1.0), -t.gamma * self.params.depth, t.beta_sq]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Multiples of the length scale `L`.
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
    /// Step of the stretched coordinate.
    pub stretch_step: f64,
    /// Absolute match radius; defaults to the minimum of `W` at mid-window.
    pub match_radius: Option<f64>,
    pub scan_points: usize,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            r_min: 1e-8,
            r_max: 14.0,
            step: 1e-3,
            stretch_step: 0.01,
            match_radius: None,
            scan_points: 400,
        }
    }
}

impl ShootingOptions {
    pub fn grid(&self, length_scale: f64) -> RadialGrid {
        RadialGrid::softplus(
            self.r_min * length_scale,
            self.r_max * length_scale,
            self.step * length_scale,
            self.stretch_step,
        )
    }
}

/// Samples of one integration leg. The value at grid index `start + i` is
/// `u[i]·exp(log_scale[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start: usize,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub log_scale: Vec<f64>,
}

impl Trajectory {
    fn end(&self) -> usize {
        self.start + self.u.len() - 1
    }
}

struct Midpoints {
    r: Vec<f64>,
    jacobian: Vec<f64>,
}

fn midpoints(grid: &RadialGrid) -> Midpoints {
    let (r, jacobian) = (0..grid.len() - 1)
        .map(|i| grid.map(grid.x(i) + 0.5 * grid.h))
        .unzip();
    Midpoints { r, jacobian }
}

fn rk4_step(y: [f64; 2], h: f64, start: (f64, f64), mid: (f64, f64), end: (f64, f64)) -> [f64; 2] {
    let f = |y: [f64; 2], (j, w): (f64, f64)| [j * y[1], j * w * y[0]];
    let k1 = f(y, start);
    let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]], mid);
    let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]], mid);
    let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]], end);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn rescale(y: &mut [f64; 2], r: f64, log_scale: &mut f64) {
    let size = y[0].abs().max(y[1].abs() * r);
    if size > 1e100 || (size < 1e-100 && size > 0.0) {
        y[0] /= size;
        y[1] /= size;
        *log_scale += size.ln();
    }
}

/// Energy-independent radial factors at grid nodes and midpoints.
struct FactorTable {
    nodes: Vec<[f64; 3]>,
    mids: Vec<[f64; 3]>,
}

fn factor_table<E: RadialEquation + ?Sized>(
    eq: &E,
    grid: &RadialGrid,
    mids: &Midpoints,
) -> Option<FactorTable> {
    let nodes: Option<Vec<[f64; 3]>> = grid.r.iter().map(|&r| eq.radial_factors(r)).collect();
    let halves: Option<Vec<[f64; 3]>> = mids.r.iter().map(|&r| eq.radial_factors(r)).collect();
    Some(FactorTable {
        nodes: nodes?,
        mids: halves?,
    })
}

fn integrate<E: RadialEquation + ?Sized>(
    eq: &E,
    energy: f64,
    grid: &RadialGrid,
    mids: &Midpoints,
    table: Option<&FactorTable>,
    outward: bool,
    stop: usize,
) -> Result<Trajectory, OracleError> {
    let n = grid.len();
    let weights = eq.energy_weights(energy);
    let dot = |f: &[f64; 3]| weights[0] * f[0] + weights[1] * f[1] + weights[2] * f[2];
    let w_node = |i: usize| match table {
        Some(t) => dot(&t.nodes[i]),
        None => eq.coefficient(grid.r[i], energy),
    };
    let w_mid = |i: usize| match table {
        Some(t) => dot(&t.mids[i]),
        None => eq.coefficient(mids.r[i], energy),
    };
    let (first, mut y) = if outward {
        let nu = eq
            .origin_exponent(energy)
            .ok_or(OracleError::SeedUndefined { energy })?;
        let r0 = grid.r[0];
        // next term of the indicial expansion: u ≈ r^ν (1 + b r / 2ν)
        let b = (r0 * r0 * w_node(0) - nu * (nu - 1.0)) / r0;
        (0, [1.0, nu / r0 + b / (2.0 * nu)])
    } else {
        let beta = eq
            .decay_rate(energy)
            .ok_or(OracleError::SeedUndefined { energy })?;
        (n - 1, [1.0, -beta])
    };
    let len = if outward { stop + 1 } else { n - stop };
    let mut u = Vec::with_capacity(len);
    let mut du = Vec::with_capacity(len);
    let mut logs = Vec::with_capacity(len);
    let mut log_scale = 0.0;
    u.push(y[0]);
    du.push(y[1]);
    logs.push(log_scale);
    let mut i = first;
    let mut w_here = w_node(i);
    while i != stop {
        let (next, mid, h) = if outward {
            (i + 1, i, grid.h)
        } else {
            (i - 1, i - 1, -grid.h)
        };
        let w_next = w_node(next);
        let w_half = w_mid(mid);
        y = rk4_step(
            y,
            h,
            (grid.jacobian[i], w_here),
            (mids.jacobian[mid], w_half),
            (grid.jacobian[next], w_next),
        );
        rescale(&mut y, grid.r[next], &mut log_scale);
        u.push(y[0]);
        du.push(y[1]);
        logs.push(log_scale);
        w_here = w_next;
        i = next;
    }
    if !outward {
        u.reverse();
        du.reverse();
        logs.reverse();
    }
    Ok(Trajectory {
        start: if outward { 0 } else { stop },
        u,
        du,
        log_scale: logs,
    })
}

/// Regular solution from `grid.r[0]` up to index `stop`.
pub fn integrate_outward<E: RadialEquation + ?Sized>(
    eq: &E,
    energy: f64,
    grid: &RadialGrid,
    stop: usize,
) -> Result<Trajectory, OracleError> {
    integrate(eq, energy, grid, &midpoints(grid), None, true, stop)
}

/// Decaying solution from the last grid node down to index `stop`.
pub fn integrate_inward<E: RadialEquation + ?Sized>(
    eq: &E,
    energy: f64,
    grid: &RadialGrid,
    stop: usize,
) -> Result<Trajectory, OracleError> {
    integrate(eq, energy, grid, &midpoints(grid), None, false, stop)
}

/// Sign changes in `samples`, skipping entries below `1e−12` of the largest magnitude.
pub fn count_nodes(samples: &[f64]) -> usize {
    let max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * max;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in samples {
        if v.abs() <= floor || !v.is_finite() {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub energy: f64,
    pub nodes: usize,
    /// Normalized Wronskian at `energy`.
    pub mismatch: f64,
    pub match_radius: f64,
}

/// A shooting setup with a fixed grid and match point.
pub struct Shooter<'a, E: RadialEquation + ?Sized> {
    eq: &'a E,
    grid: RadialGrid,
    mids: Midpoints,
    table: Option<FactorTable>,
    matching: usize,
}

impl<'a, E: RadialEquation + ?Sized> Shooter<'a, E> {
    /// `reference_energy` fixes the match point when none is given.
    pub fn new(eq: &'a E, opts: &ShootingOptions, reference_energy: f64) -> Self {
        let scale = eq.length_scale();
        let grid = opts.grid(scale);
        let mids = midpoints(&grid);
        let last = grid.len() - 1;
        let matching = match opts.match_radius {
            Some(rm) => grid.r.partition_point(|&r| r < rm),
            None => {
                let lo = 0.02 * scale;
                let hi = 0.5 * grid.r[last];
                (0..=last)
                    .filter(|&i| grid.r[i] >= lo && grid.r[i] <= hi)
                    .min_by(|&a, &b| {
                        eq.coefficient(grid.r[a], reference_energy)
                            .total_cmp(&eq.coefficient(grid.r[b], reference_energy))
                    })
                    .unwrap_or(last / 2)
            }
        };
        let matching = matching.clamp(2, last - 2);
        let table = factor_table(eq, &grid, &mids);
        Self {
            eq,
            grid,
            mids,
            table,
            matching,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn match_radius(&self) -> f64 {
        self.grid.r[self.matching]
    }

    fn legs(&self, energy: f64) -> Result<(Trajectory, Trajectory), OracleError> {
        let table = self.table.as_ref();
        let out = integrate(
            self.eq,
            energy,
            &self.grid,
            &self.mids,
            table,
            true,
            self.matching,
        )?;
        let inw = integrate(
            self.eq,
            energy,
            &self.grid,
            &self.mids,
            table,
            false,
            self.matching,
        )?;
        Ok((out, inw))
    }

    /// Normalized Wronskian of the two legs at the match point, in `[−1, 1]`.
    pub fn mismatch(&self, energy: f64) -> Result<f64, OracleError> {
        let (out, inw) = self.legs(energy)?;
        let rm = self.match_radius();
        let (uo, po) = (out.u[out.u.len() - 1], out.du[out.du.len() - 1]);
        let (ui, pi) = (inw.u[0], inw.du[0]);
        let norm = uo.hypot(rm * po) * ui.hypot(rm * pi);
        Ok(rm * (uo * pi - ui * po) / norm)
    }

    /// Solution glued at the match point, scaled to 1 there.
    pub fn solution(&self, energy: f64) -> Result<Vec<f64>, OracleError> {
        let (out, inw) = self.legs(energy)?;
        debug_assert_eq!(out.end(), inw.start);
        let tail = |t: &Trajectory, i: usize| (t.u[i], t.log_scale[i]);
        let (um, lm) = tail(&out, out.u.len() - 1);
        let (vm, km) = tail(&inw, 0);
        let glue = |(v, l): (f64, f64), (vm, lm): (f64, f64)| {
            if v == 0.0 {
                return 0.0;
            }
            let log_rel = (v.abs().ln() + l) - (vm.abs().ln() + lm);
            v.signum() * vm.signum() * log_rel.min(700.0).exp()
        };
        let mut samples: Vec<f64> = (0..out.u.len())
            .map(|i| glue(tail(&out, i), (um, lm)))
            .collect();
        samples.extend((1..inw.u.len()).map(|i| glue(tail(&inw, i), (vm, km))));
        Ok(samples)
    }

    pub fn nodes(&self, energy: f64) -> Result<usize, OracleError> {
        Ok(count_nodes(&self.solution(energy)?))
    }

    /// Every eigenvalue in the window, found by scanning the mismatch and
    /// refining sign changes by bisection to `tol`.
    pub fn eigenvalues(
        &self,
        window: (f64, f64),
        scan_points: usize,
        tol: f64,
    ) -> Result<Vec<Eigenvalue>, OracleError> {
        let (lo, hi) = window;
        if !(lo < hi) {
            return Err(OracleError::InvalidWindow { lo, hi });
        }
        let step = (hi - lo) / scan_points.max(2) as f64;
        let mut defined = false;
        let brackets = roots::scan_brackets(
            |e| {
                let m = self.mismatch(e).ok();
                defined |= m.is_some();
                m
            },
            lo,
            hi,
            step,
        );
        if !defined {
            return Err(OracleError::SeedUndefined {
                energy: 0.5 * (lo + hi),
            });
        }
        let mut found = Vec::new();
        for (a, b) in brackets {
            let f = |e: f64| self.mismatch(e).unwrap_or(f64::NAN);
            let Ok(energy) = roots::bisect(f, a, b, tol) else {
                continue;
            };
            found.push(Eigenvalue {
                energy,
                nodes: self.nodes(energy)?,
                mismatch: self.mismatch(energy)?,
                match_radius: self.match_radius(),
            });
        }
        Ok(found)
    }
}

/// Eigenvalue with `node_target` interior nodes inside `window`.
pub fn shoot_eigenvalue<E: RadialEquation + ?Sized>(
    eq: &E,
    window: (f64, f64),
    node_target: usize,
    tol: f64,
    opts: &ShootingOptions,
) -> Result<Eigenvalue, OracleError> {
    let shooter = Shooter::new(eq, opts, 0.5 * (window.0 + window.1));
    let all = shooter.eigenvalues(window, opts.scan_points, tol)?;
    if all.is_empty() {
        return Err(OracleError::NoRootInWindow {
            lo: window.0,
            hi: window.1,
        });
    }
    let found: Vec<usize> = all.iter().map(|e| e.nodes).collect();
    all.into_iter()
        .find(|e| e.nodes == node_target)
        .ok_or(OracleError::NodeMismatch {
            target: node_target,
            found,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_equation(kappa: i32) -> DiracRadialEquation {
        let p = PhysicalParams {
            depth: 0.0,
            ..PhysicalParams::default()
        };
        DiracRadialEquation::new(p, Symmetry::Pspin, kappa, Centrifugal::Exact)
    }

    #[test]
    fn split_coefficient_matches_direct() {
        let p = PhysicalParams::default().with_tensor(2.0);
        for sym in [Symmetry::Pspin, Symmetry::Spin] {
            for centrifugal in [Centrifugal::Exact, Centrifugal::Approximated] {
                let eq = DiracRadialEquation::new(p, sym, -3, centrifugal);
                for &r in &[1e-3, 0.7, 4.0, 25.0] {
                    for &e in &[-4.0, -1.0, 2.0] {
                        let f = eq.radial_factors(r).unwrap();
                        let w = eq.energy_weights(e);
                        let split = w[0] * f[0] + w[1] * f[1] + w[2] * f[2];
                        let direct = eq.coefficient(r, e);
                        assert!((split - direct).abs() <= 1e-12 * direct.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[1.0, 2.0, 0.5]), 0);
        let sin: Vec<f64> = (0..300)
            .map(|i| (3.0 * std::f64::consts::PI * i as f64 / 299.0).sin())
            .collect();
        assert_eq!(count_nodes(&sin), 2);
        assert_eq!(count_nodes(&[1.0, 1e-14, -1e-14, 1.0]), 0);
        assert_eq!(count_nodes(&[1.0, 0.0, -1.0, 0.0, 2.0]), 2);
    }

    #[test]
    fn free_outward_solution_is_sinh() {
        // Λ = 1 removes the centrifugal term, leaving u'' = β² u.
        let eq = free_equation(1);
        let e = -2.0;
        let beta = eq.decay_rate(e).unwrap();
        let grid = RadialGrid::softplus(1e-8, 2.0, 1e-3, 1e-3);
        let at_one = grid.r.iter().position(|&r| r >= 1.0).unwrap();
        let t = integrate_outward(&eq, e, &grid, at_one).unwrap();
        let r = grid.r[at_one];
        let value = t.u[at_one] * t.log_scale[at_one].exp();
        let expected = (beta * r).sinh() / (beta * grid.r[0]).sinh();
        assert!(
            (value / expected - 1.0).abs() < 1e-8,
            "{}",
            value / expected - 1.0
        );
    }

    #[test]
    fn seed_follows_origin_power_law() {
        // Λ = −1: Λ(Λ − 1) = 2 so ν = 2
        let eq = free_equation(-1);
        let h = std::f64::consts::LN_2 / 70.0;
        let grid = RadialGrid::softplus(1e-9, 1e-7, h * 1e-3, h);
        let t = integrate_outward(&eq, -2.0, &grid, 80).unwrap();
        let ratio_r = grid.r[70] / grid.r[0];
        assert!((ratio_r - 2.0).abs() < 1e-2);
        let ratio = t.u[70] * t.log_scale[70].exp() / t.u[0];
        assert!((ratio - ratio_r.powf(2.0)).abs() < 1e-6, "{ratio}");
    }

    #[test]
    fn no_well_means_no_eigenvalue() {
        for c in [Centrifugal::Exact, Centrifugal::Approximated] {
            let eq = DiracRadialEquation {
                centrifugal: c,
                ..free_equation(-2)
            };
            let r = shoot_eigenvalue(&eq, (-4.99, -0.51), 0, 1e-10, &ShootingOptions::default());
            assert!(
                matches!(r, Err(OracleError::NoRootInWindow { .. })),
                "{r:?}"
            );
        }
    }

    #[test]
    fn undefined_seeds_are_reported() {
        let eq = free_equation(-2);
        let r = shoot_eigenvalue(&eq, (-0.4, -0.1), 0, 1e-10, &ShootingOptions::default());
        assert!(matches!(r, Err(OracleError::SeedUndefined { .. })));
        let r =
            Shooter::new(&eq, &ShootingOptions::default(), -1.0).eigenvalues((1.0, 0.0), 10, 1e-9);
        assert!(matches!(r, Err(OracleError::InvalidWindow { .. })));
    }
}
