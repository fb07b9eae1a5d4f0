//! The published pseudospin and spin tables, embedded verbatim, and the
//! report that checks them against the model.

use serde::Serialize;

use iqy_dirac::dirac::{
    quantum_number_map, solve_energies, strict_domain, DiracError, PhysicalParams, SolveMode,
    SolveOptions, Symmetry,
};
use iqy_dirac::roots::golden_section_min;

use crate::format::g9;

/// One printed row: a doublet at both tensor strengths. `n` is the radial
/// number of the polynomial solution for both members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub kappa_aligned: i32,
    pub label_aligned: &'static str,
    pub aligned_h5: &'static str,
    pub aligned_h0: &'static str,
    pub kappa_partner: i32,
    pub label_partner: &'static str,
    pub partner_h5: &'static str,
    pub partner_h0: &'static str,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    n: usize,
    kappa_aligned: i32,
    label_aligned: &'static str,
    aligned_h5: &'static str,
    aligned_h0: &'static str,
    kappa_partner: i32,
    label_partner: &'static str,
    partner_h5: &'static str,
    partner_h0: &'static str,
) -> TableRow {
    TableRow {
        n,
        kappa_aligned,
        label_aligned,
        aligned_h5,
        aligned_h0,
        kappa_partner,
        label_partner,
        partner_h5,
        partner_h0,
    }
}

/// Pseudospin, `M = 5`, `V₀ = 1`, `C_ps = −5.5`.
pub const PSPIN_TABLE: [TableRow; 8] = [
    row(
        1,
        -1,
        "1s1/2",
        "-0.495018",
        "-0.491129",
        2,
        "0d3/2",
        "-0.487533",
        "-0.491129",
    ),
    row(
        1,
        -2,
        "1p3/2",
        "-0.491129",
        "-0.487533",
        3,
        "0f5/2",
        "-0.484054",
        "-0.487533",
    ),
    row(
        1,
        -3,
        "1d5/2",
        "-0.487533",
        "-0.484054",
        4,
        "0g7/2",
        "-0.480635",
        "-0.484054",
    ),
    row(
        1,
        -4,
        "1f7/2",
        "-0.484054",
        "-0.480635",
        5,
        "0h9/2",
        "-0.477254",
        "-0.480635",
    ),
    row(
        2,
        -1,
        "2s1/2",
        "-0.491152",
        "-0.487539",
        2,
        "1d3/2",
        "-0.484057",
        "-0.487539",
    ),
    row(
        2,
        -2,
        "2p3/2",
        "-0.487539",
        "-0.484057",
        3,
        "1d3/2",
        "-0.480637",
        "-0.484057",
    ),
    row(
        2,
        -3,
        "2d5/2",
        "-0.484057",
        "-0.480637",
        4,
        "1g7/2",
        "-0.477255",
        "-0.480637",
    ),
    row(
        2,
        -4,
        "2f7/2",
        "-0.480637",
        "-0.477255",
        5,
        "1h9/2",
        "-0.473898",
        "-0.477255",
    ),
];

/// Spin, `M = 5`, `V₀ = 1`, `C_s = 6`.
pub const SPIN_TABLE: [TableRow; 8] = [
    row(
        0, -2, "0p3/2", "1.000000", "0.994385", 1, "0p1/2", "0.990029", "0.994385",
    ),
    row(
        0, -3, "0d5/2", "0.994385", "0.990029", 2, "0d3/2", "0.985992", "0.990029",
    ),
    row(
        0, -4, "0f7/2", "0.990029", "0.985992", 3, "0f5/2", "0.982086", "0.985992",
    ),
    row(
        0, -5, "0g9/2", "0.985992", "0.982086", 4, "0g7/2", "0.978249", "0.982086",
    ),
    row(
        1, -2, "1p3/2", "0.994367", "0.990023", 1, "1p1/2", "0.985988", "0.990023",
    ),
    row(
        1, -3, "1d5/2", "0.990023", "0.985988", 2, "1d3/2", "0.982084", "0.985988",
    ),
    row(
        1, -4, "1f7/2", "0.985988", "0.982084", 3, "1f5/2", "0.978247", "0.982084",
    ),
    row(
        1, -5, "1g9/2", "0.982084", "0.978247", 4, "1g7/2", "0.974455", "0.978247",
    ),
];

pub const TABLE_TENSOR: f64 = 5.0;

pub fn table(symmetry: Symmetry) -> &'static [TableRow; 8] {
    match symmetry {
        Symmetry::Pspin => &PSPIN_TABLE,
        Symmetry::Spin => &SPIN_TABLE,
    }
}

/// Printed energy with its state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub symmetry: Symmetry,
    pub n: usize,
    pub kappa: i32,
    pub tensor: f64,
    pub printed: &'static str,
    pub label: &'static str,
}

impl TableEntry {
    pub fn energy(&self) -> f64 {
        self.printed.parse().expect("embedded energies parse")
    }
}

/// All 64 printed energies, table by table and row by row.
pub fn entries() -> Vec<TableEntry> {
    let mut out = Vec::with_capacity(64);
    for symmetry in [Symmetry::Pspin, Symmetry::Spin] {
        for r in table(symmetry) {
            let cells = [
                (r.kappa_aligned, TABLE_TENSOR, r.aligned_h5, r.label_aligned),
                (r.kappa_aligned, 0.0, r.aligned_h0, r.label_aligned),
                (r.kappa_partner, TABLE_TENSOR, r.partner_h5, r.label_partner),
                (r.kappa_partner, 0.0, r.partner_h0, r.label_partner),
            ];
            for (kappa, tensor, printed, label) in cells {
                out.push(TableEntry {
                    symmetry,
                    n: r.n,
                    kappa,
                    tensor,
                    printed,
                    label,
                });
            }
        }
    }
    out
}

/// Caption parameters of both tables. The screening is not printed.
pub fn caption_params() -> PhysicalParams {
    PhysicalParams::default()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaDiagnostic {
    #[serde(flatten)]
    pub entry: TableEntry,
    pub beta_sq: f64,
    pub in_domain: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxedFit {
    pub screening: f64,
    pub energy: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreeningFit {
    pub n: usize,
    pub kappa: i32,
    pub target: f64,
    /// `β̃²` at the target; it does not depend on the screening.
    pub beta_sq_at_target: f64,
    pub domain: (f64, f64),
    pub screening_range: (f64, f64),
    pub samples: usize,
    pub strict_roots: usize,
    pub best_strict: Option<RelaxedFit>,
    /// Closest root of the squared equation, which is not a bound state.
    pub best_relaxed: Option<RelaxedFit>,
}

impl ScreeningFit {
    pub fn feasible(&self) -> bool {
        self.best_strict.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternCheck {
    pub name: String,
    pub passed: usize,
    pub total: usize,
}

impl PatternCheck {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelMismatch {
    pub symmetry: Symmetry,
    pub n: usize,
    pub kappa: i32,
    pub printed: &'static str,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TablesReport {
    pub diagnostics: Vec<BetaDiagnostic>,
    pub fit: ScreeningFit,
    pub patterns: Vec<PatternCheck>,
    pub labels: Vec<LabelMismatch>,
}

impl TablesReport {
    pub fn patterns_ok(&self) -> bool {
        self.patterns.iter().all(PatternCheck::ok)
    }
}

pub fn beta_diagnostics(p: &PhysicalParams) -> Vec<BetaDiagnostic> {
    entries()
        .into_iter()
        .map(|entry| {
            let q = p.with_tensor(entry.tensor);
            let e = entry.energy();
            let beta_sq = q.terms(entry.symmetry, entry.kappa, e).beta_sq;
            let (lo, hi) = strict_domain(&q, entry.symmetry);
            BetaDiagnostic {
                in_domain: lo < e && e < hi,
                entry,
                beta_sq,
            }
        })
        .collect()
}

/// Fits the screening to the pseudospin `n = 1, κ = −1, H = 0` entry by
/// scanning `α` on a logarithmic grid and refining the best sample.
pub fn fit_screening(p: &PhysicalParams, range: (f64, f64), samples: usize) -> ScreeningFit {
    let (n, kappa) = (1, -1);
    let target: f64 = PSPIN_TABLE[0].aligned_h0.parse().expect("anchor parses");
    let q = p.with_tensor(0.0);
    let closest = |alpha: f64, mode: SolveMode| -> Option<f64> {
        let opts = SolveOptions {
            mode,
            ..SolveOptions::default()
        };
        solve_energies(&q.with_screening(alpha), Symmetry::Pspin, n, kappa, &opts)
            .ok()?
            .into_iter()
            .map(|s| s.energy)
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
    };
    let log_lo = range.0.ln();
    let step = (range.1.ln() - log_lo) / (samples.max(2) - 1) as f64;
    let grid: Vec<f64> = (0..samples.max(2))
        .map(|i| (log_lo + i as f64 * step).exp())
        .collect();
    let best = |mode: SolveMode| -> (usize, Option<RelaxedFit>) {
        let found: Vec<(f64, f64)> = grid
            .iter()
            .filter_map(|&a| closest(a, mode).map(|e| (a, e)))
            .collect();
        let Some(&(a0, e0)) = found
            .iter()
            .min_by(|x, y| (x.1 - target).abs().total_cmp(&(y.1 - target).abs()))
        else {
            return (0, None);
        };
        let objective = |la: f64| closest(la.exp(), mode).map_or(f64::MAX, |e| (e - target).abs());
        let bounds = (
            (a0.ln() - step).max(log_lo),
            (a0.ln() + step).min(log_lo + step * (grid.len() - 1) as f64),
        );
        let (la, gap) = golden_section_min(objective, bounds.0, bounds.1, 1e-10);
        let fit = if gap < (e0 - target).abs() {
            let energy = closest(la.exp(), mode).expect("objective finite");
            RelaxedFit {
                screening: la.exp(),
                energy,
                gap,
            }
        } else {
            RelaxedFit {
                screening: a0,
                energy: e0,
                gap: (e0 - target).abs(),
            }
        };
        (found.len(), Some(fit))
    };
    let (strict_roots, best_strict) = best(SolveMode::Strict);
    let (_, best_relaxed) = best(SolveMode::Relaxed);
    ScreeningFit {
        n,
        kappa,
        target,
        beta_sq_at_target: q.terms(Symmetry::Pspin, kappa, target).beta_sq,
        domain: strict_domain(&q, Symmetry::Pspin),
        screening_range: range,
        samples: grid.len(),
        strict_roots,
        best_strict,
        best_relaxed,
    }
}

pub fn pattern_checks() -> Vec<PatternCheck> {
    let mut checks = Vec::new();
    for symmetry in [Symmetry::Pspin, Symmetry::Spin] {
        let rows = table(symmetry);
        let count = |f: &dyn Fn(&TableRow) -> bool| rows.iter().filter(|r| f(r)).count();
        let e = |s: &str| s.parse::<f64>().expect("embedded energies parse");
        let mut push = |name: String, passed: usize| {
            checks.push(PatternCheck {
                name,
                passed,
                total: rows.len(),
            })
        };
        push(
            format!("{symmetry} H=0 partners equal"),
            count(&|r| r.aligned_h0 == r.partner_h0),
        );
        push(
            format!("{symmetry} H=5 partners split"),
            count(&|r| e(r.aligned_h5) != e(r.partner_h5)),
        );
        let (name, lower) = match symmetry {
            Symmetry::Pspin => ("kappa<0 member lower", true),
            Symmetry::Spin => ("kappa<0 member higher", false),
        };
        push(
            format!("{symmetry} H=5 {name}"),
            count(&|r| (e(r.aligned_h5) < e(r.partner_h5)) == lower),
        );
        push(
            format!("{symmetry} H=5 members shift oppositely"),
            count(&|r| {
                let a = e(r.aligned_h5) - e(r.aligned_h0);
                let b = e(r.partner_h5) - e(r.partner_h0);
                a * b < 0.0
            }),
        );
    }
    checks
}

pub fn label_mismatches() -> Result<Vec<LabelMismatch>, DiracError> {
    let mut out = Vec::new();
    for entry in entries().into_iter().filter(|e| e.tensor == 0.0) {
        let expected = quantum_number_map(entry.kappa)?
            .with_radial(entry.n, entry.symmetry)
            .label;
        if expected != entry.label {
            out.push(LabelMismatch {
                symmetry: entry.symmetry,
                n: entry.n,
                kappa: entry.kappa,
                printed: entry.label,
                expected,
            });
        }
    }
    Ok(out)
}

pub fn tables_report(p: &PhysicalParams) -> Result<TablesReport, DiracError> {
    Ok(TablesReport {
        diagnostics: beta_diagnostics(p),
        fit: fit_screening(p, (1e-3, 2.0), 61),
        patterns: pattern_checks(),
        labels: label_mismatches()?,
    })
}

pub fn render_text(report: &TablesReport, p: &PhysicalParams) -> String {
    let mut s = String::new();
    let line = |s: &mut String, text: String| {
        s.push_str(&text);
        s.push('\n');
    };
    line(&mut s, "# table reproduction report".into());
    line(
        &mut s,
        format!(
            "# M={} V0={} Cps={} Cs={}",
            g9(p.mass),
            g9(p.depth),
            g9(p.pspin_constant),
            g9(p.spin_constant)
        ),
    );
    line(&mut s, String::new());
    line(&mut s, "[beta_squared]".into());
    line(
        &mut s,
        "symmetry,n,kappa,H,E_table,beta_sq,in_domain".into(),
    );
    for d in &report.diagnostics {
        let e = &d.entry;
        line(
            &mut s,
            format!(
                "{},{},{},{},{},{},{}",
                e.symmetry,
                e.n,
                e.kappa,
                g9(e.tensor),
                e.printed,
                g9(d.beta_sq),
                d.in_domain
            ),
        );
    }
    let inside = report.diagnostics.iter().filter(|d| d.in_domain).count();
    line(
        &mut s,
        format!("entries_in_domain={inside}/{}", report.diagnostics.len()),
    );
    line(&mut s, String::new());

    let f = &report.fit;
    line(&mut s, "[screening_fit]".into());
    line(
        &mut s,
        format!(
            "anchor=pspin n={} kappa={} H=0 target={}",
            f.n,
            f.kappa,
            g9(f.target)
        ),
    );
    line(
        &mut s,
        format!("beta_sq_at_target={}", g9(f.beta_sq_at_target)),
    );
    line(
        &mut s,
        format!("bound_state_domain=({},{})", g9(f.domain.0), g9(f.domain.1)),
    );
    line(
        &mut s,
        format!(
            "screening_scan=[{},{}] samples={} strict_roots={}",
            g9(f.screening_range.0),
            g9(f.screening_range.1),
            f.samples,
            f.strict_roots
        ),
    );
    let fit_line = |name: &str, fit: &Option<RelaxedFit>| match fit {
        Some(r) => format!(
            "{name}: screening={} E={} gap={}",
            g9(r.screening),
            g9(r.energy),
            g9(r.gap)
        ),
        None => format!("{name}: none"),
    };
    line(&mut s, fit_line("best_strict", &f.best_strict));
    line(&mut s, fit_line("best_relaxed", &f.best_relaxed));
    line(
        &mut s,
        format!(
            "fit={}",
            if f.feasible() {
                "feasible"
            } else {
                "infeasible: the target has beta_sq < 0 for every screening"
            }
        ),
    );
    line(&mut s, String::new());

    line(&mut s, "[patterns]".into());
    for c in &report.patterns {
        line(
            &mut s,
            format!(
                "{}: {}/{} {}",
                c.name,
                c.passed,
                c.total,
                if c.ok() { "ok" } else { "FAILED" }
            ),
        );
    }
    line(&mut s, String::new());
    line(&mut s, "[labels]".into());
    if report.labels.is_empty() {
        line(&mut s, "all printed labels match".into());
    }
    for m in &report.labels {
        line(
            &mut s,
            format!(
                "{} n={} kappa={}: printed {} expected {}",
                m.symmetry, m.n, m.kappa, m.printed, m.expected
            ),
        );
    }
    s
}
