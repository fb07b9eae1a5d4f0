//! The four subcommands. Each returns the full text of its output so that
//! the caller decides where it goes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use iqy_dirac::dirac::{
    back_substitution, default_grid, quantum_number_map, radial_wavefunction, solve_energies,
    strict_domain, DiracError, SolveMode, SolveOptions, Symmetry, DOMAIN_MARGIN,
};
use iqy_dirac::oracle::{
    Centrifugal, DiracRadialEquation, Eigenvalue, OracleError, Shooter, ShootingOptions,
};

use crate::config::{ConfigError, OutputFormat, RunConfig};
use crate::format::{g9, g9_opt, rounded};
use crate::tables::{render_text, tables_report};

pub const CSV_HEADER: &str = "symmetry,n_nu,n_spect,kappa,label,H,E,residual,beta_sq,strict_valid";
pub const CROSSCHECK_HEADER: &str =
    "symmetry,n,kappa,H,E_nu,E_oracle,abs_diff,nodes_nu,nodes_oracle,E_exact,exact_gap,status";
/// Largest accepted `|ΔE|` between the closed form and the oracle, fm⁻¹.
pub const CROSSCHECK_TOL: f64 = 1e-6;
pub const THREADS_ENV: &str = "SPECTRA_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("no bound state for n = {n}, kappa = {kappa}")]
    NoRoot { n: usize, kappa: i32 },
    #[error("cross-check failed for {failures} state(s)")]
    CrosscheckFailed { failures: usize, report: String },
    #[error("cannot write {path}: {reason}")]
    Io { path: PathBuf, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoRoot { .. } => 1,
            CliError::Config(_) => 2,
            CliError::CrosscheckFailed { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<DiracError> for CliError {
    fn from(e: DiracError) -> Self {
        CliError::Config(ConfigError::Physics(e))
    }
}

/// Writes to `out`, or standard output when `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            reason: e.to_string(),
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // A reader that closed early (`| head`) is not an error.
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(|e| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    reason: e.to_string(),
                }),
            }
        }
    }
}

/// Thread pool capped by `SPECTRA_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, ConfigError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|e| ConfigError::Invalid {
                key: THREADS_ENV.into(),
                value: v.clone(),
                reason: e.to_string(),
            })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError::Invalid {
            key: THREADS_ENV.into(),
            value: threads.to_string(),
            reason: e.to_string(),
        })
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions {
        window: cfg.window,
        scan_step: None,
        tol: cfg.tol,
        mode: cfg.mode,
    }
}

/// `(n, κ, H)` in sweep order.
fn states(cfg: &RunConfig) -> Vec<(usize, i32, f64)> {
    let mut kappas = cfg.kappas.clone();
    kappas.sort_unstable();
    kappas.dedup();
    let mut tensors = cfg.tensors.clone();
    tensors.sort_by(f64::total_cmp);
    tensors.dedup();
    let mut out = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        for &kappa in &kappas {
            for &h in &tensors {
                out.push((n, kappa, h));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub symmetry: Symmetry,
    pub n_nu: usize,
    pub n_spect: Option<usize>,
    pub kappa: i32,
    pub label: String,
    pub tensor: f64,
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    pub beta_sq: Option<f64>,
    pub strict_valid: bool,
}

/// One row per `(n, κ, H)` holding the lowest root in the window, or an
/// empty energy when there is none.
pub fn spectrum_rows(cfg: &RunConfig) -> Result<Vec<SpectrumRow>, CliError> {
    let opts = solve_options(cfg);
    let pool = thread_pool()?;
    let rows: Result<Vec<SpectrumRow>, DiracError> = pool.install(|| {
        states(cfg)
            .par_iter()
            .map(|&(n, kappa, h)| {
                let p = cfg.params_with(h);
                let qn = quantum_number_map(kappa)?.with_radial(n, cfg.symmetry);
                let best = solve_energies(&p, cfg.symmetry, n, kappa, &opts)?
                    .into_iter()
                    .next();
                Ok(SpectrumRow {
                    symmetry: cfg.symmetry,
                    n_nu: n,
                    n_spect: qn.n_spect,
                    kappa,
                    label: qn.label,
                    tensor: h,
                    energy: best.as_ref().map(|s| s.energy),
                    residual: best.as_ref().map(|s| s.residual),
                    beta_sq: best.as_ref().map(|s| s.beta_sq),
                    strict_valid: best.as_ref().is_some_and(|s| s.strict_valid),
                })
            })
            .collect()
    });
    Ok(rows?)
}

pub fn render_spectrum(rows: &[SpectrumRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.symmetry,
                    r.n_nu,
                    r.n_spect.map(|v| v.to_string()).unwrap_or_default(),
                    r.kappa,
                    r.label,
                    g9(r.tensor),
                    g9_opt(r.energy),
                    g9_opt(r.residual),
                    g9_opt(r.beta_sq),
                    r.strict_valid
                ));
            }
            s
        }
        OutputFormat::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "symmetry": r.symmetry,
                        "n_nu": r.n_nu,
                        "n_spect": r.n_spect,
                        "kappa": r.kappa,
                        "label": r.label,
                        "H": rounded(r.tensor),
                        "E": r.energy.map(rounded),
                        "residual": r.residual.map(rounded),
                        "beta_sq": r.beta_sq.map(rounded),
                        "strict_valid": r.strict_valid,
                    })
                })
                .collect();
            pretty(&Value::Array(values))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(render_spectrum(&spectrum_rows(cfg)?, cfg.format))
}

pub fn cmd_reproduce_tables(cfg: &RunConfig) -> Result<String, CliError> {
    let report = tables_report(&cfg.params)?;
    Ok(match cfg.format {
        OutputFormat::Csv => render_text(&report, &cfg.params),
        OutputFormat::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Agree,
    BothNone,
    Fail(&'static str),
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckStatus::Agree => f.write_str("agree"),
            CheckStatus::BothNone => f.write_str("both_none"),
            CheckStatus::Fail(why) => write!(f, "fail:{why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckRow {
    pub symmetry: Symmetry,
    pub n: usize,
    pub kappa: i32,
    pub tensor: f64,
    pub energy_nu: Option<f64>,
    pub energy_oracle: Option<f64>,
    pub abs_diff: Option<f64>,
    pub nodes_nu: Option<usize>,
    pub nodes_oracle: Option<usize>,
    /// Oracle eigenvalue with the exact centrifugal term.
    pub energy_exact: Option<f64>,
    pub exact_gap: Option<f64>,
    pub status: CheckStatus,
}

fn oracle_spectrum(
    cfg: &RunConfig,
    kappa: i32,
    tensor: f64,
    centrifugal: Centrifugal,
    window: (f64, f64),
) -> Vec<Eigenvalue> {
    let eq = DiracRadialEquation::new(cfg.params_with(tensor), cfg.symmetry, kappa, centrifugal);
    let opts = ShootingOptions::default();
    let shooter = Shooter::new(&eq, &opts, 0.5 * (window.0 + window.1));
    match shooter.eigenvalues(window, opts.scan_points, cfg.tol) {
        Ok(found) => found,
        Err(OracleError::SeedUndefined { .. }) => Vec::new(),
        Err(e) => unreachable!("window checked before shooting: {e}"),
    }
}

/// Closed-form roots against shooting eigenvalues of the same approximated
/// equation. `accept_spurious` keeps roots of the squared energy equation
/// that are not bound states, which must make the check fail.
pub fn crosscheck_rows(
    cfg: &RunConfig,
    accept_spurious: bool,
) -> Result<Vec<CrosscheckRow>, CliError> {
    let mut opts = solve_options(cfg);
    if accept_spurious {
        opts.mode = SolveMode::Relaxed;
    }
    let (dlo, dhi) = strict_domain(&cfg.params, cfg.symmetry);
    let inner = (dlo + DOMAIN_MARGIN, dhi - DOMAIN_MARGIN);
    let window = match cfg.window {
        Some((a, b)) => (a.max(inner.0), b.min(inner.1)),
        None => inner,
    };
    if !(window.0 < window.1) {
        let (lo, hi) = cfg.window.unwrap_or(inner);
        return Err(DiracError::EmptyWindow {
            lo,
            hi,
            domain_lo: dlo,
            domain_hi: dhi,
        }
        .into());
    }
    let all = states(cfg);
    let mut groups: Vec<(i32, f64)> = all.iter().map(|&(_, k, h)| (k, h)).collect();
    groups.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    groups.dedup();

    let pool = thread_pool()?;
    let spectra: Vec<(Vec<Eigenvalue>, Vec<Eigenvalue>)> = pool.install(|| {
        groups
            .par_iter()
            .map(|&(kappa, h)| {
                (
                    oracle_spectrum(cfg, kappa, h, Centrifugal::Approximated, window),
                    oracle_spectrum(cfg, kappa, h, Centrifugal::Exact, window),
                )
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(all.len());
    for (n, kappa, h) in all {
        let g = groups
            .iter()
            .position(|&(k, t)| k == kappa && t == h)
            .expect("every state has a group");
        let (approx, exact) = &spectra[g];
        let p = cfg.params_with(h);
        let nu = solve_energies(&p, cfg.symmetry, n, kappa, &opts)?
            .into_iter()
            .next()
            .map(|s| s.energy);
        let nodes_nu = nu.and_then(|e| {
            radial_wavefunction(&p, cfg.symmetry, e, n, kappa, &default_grid(p.screening))
                .ok()
                .map(|wf| wf.node_count)
        });
        let oracle = approx.iter().find(|ev| ev.nodes == n);
        let exact = exact.iter().find(|ev| ev.nodes == n).map(|ev| ev.energy);
        let energy_oracle = oracle.map(|ev| ev.energy);
        let abs_diff = nu.zip(energy_oracle).map(|(a, b)| (a - b).abs());
        let status = match (nu, oracle) {
            (None, None) => CheckStatus::BothNone,
            (Some(_), None) => CheckStatus::Fail("no_oracle_eigenvalue"),
            (None, Some(_)) => CheckStatus::Fail("no_closed_form_root"),
            (Some(_), Some(_)) if abs_diff.is_some_and(|d| d > CROSSCHECK_TOL) => {
                CheckStatus::Fail("energy")
            }
            (Some(_), Some(_)) if nodes_nu != Some(n) => CheckStatus::Fail("nodes"),
            _ => CheckStatus::Agree,
        };
        rows.push(CrosscheckRow {
            symmetry: cfg.symmetry,
            n,
            kappa,
            tensor: h,
            energy_nu: nu,
            energy_oracle,
            abs_diff,
            nodes_nu,
            nodes_oracle: oracle.map(|ev| ev.nodes),
            energy_exact: exact,
            exact_gap: exact.zip(energy_oracle).map(|(a, b)| (a - b).abs()),
            status,
        });
    }
    Ok(rows)
}

pub fn render_crosscheck(rows: &[CrosscheckRow], format: OutputFormat) -> String {
    let opt_usize = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    match format {
        OutputFormat::Csv => {
            let mut s = String::from(CROSSCHECK_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.symmetry,
                    r.n,
                    r.kappa,
                    g9(r.tensor),
                    g9_opt(r.energy_nu),
                    g9_opt(r.energy_oracle),
                    g9_opt(r.abs_diff),
                    opt_usize(r.nodes_nu),
                    opt_usize(r.nodes_oracle),
                    g9_opt(r.energy_exact),
                    g9_opt(r.exact_gap),
                    r.status
                ));
            }
            s
        }
        OutputFormat::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "symmetry": r.symmetry,
                        "n": r.n,
                        "kappa": r.kappa,
                        "H": rounded(r.tensor),
                        "E_nu": r.energy_nu.map(rounded),
                        "E_oracle": r.energy_oracle.map(rounded),
                        "abs_diff": r.abs_diff.map(rounded),
                        "nodes_nu": r.nodes_nu,
                        "nodes_oracle": r.nodes_oracle,
                        "E_exact": r.energy_exact.map(rounded),
                        "exact_gap": r.exact_gap.map(rounded),
                        "status": r.status.to_string(),
                    })
                })
                .collect();
            pretty(&Value::Array(values))
        }
    }
}

/// The report, or [`CliError::CrosscheckFailed`] carrying it.
pub fn cmd_crosscheck(cfg: &RunConfig, accept_spurious: bool) -> Result<String, CliError> {
    let rows = crosscheck_rows(cfg, accept_spurious)?;
    let report = render_crosscheck(&rows, cfg.format);
    let failures = rows
        .iter()
        .filter(|r| matches!(r.status, CheckStatus::Fail(_)))
        .count();
    if failures > 0 {
        Err(CliError::CrosscheckFailed { failures, report })
    } else {
        Ok(report)
    }
}

/// Largest number of sample rows written by the wavefunction command.
pub const MAX_SAMPLES: usize = 2000;

/// Samples of both components. Without `energy` the lowest root for
/// `(n, κ)` is used; with it the closed form is evaluated there as given.
pub fn cmd_wavefunction(
    cfg: &RunConfig,
    n: usize,
    kappa: i32,
    energy: Option<f64>,
) -> Result<String, CliError> {
    let tensor = match cfg.tensors[..] {
        [h] => h,
        _ => {
            return Err(ConfigError::Invalid {
                key: "tensor-h".into(),
                value: format!("{:?}", cfg.tensors),
                reason: "the wavefunction command takes a single value".into(),
            }
            .into())
        }
    };
    let p = cfg.params_with(tensor);
    let (energy, source) = match energy {
        Some(e) => (e, "given"),
        None => {
            let root = solve_energies(&p, cfg.symmetry, n, kappa, &solve_options(cfg))?
                .into_iter()
                .next()
                .ok_or(CliError::NoRoot { n, kappa })?;
            (root.energy, "root")
        }
    };
    let grid = default_grid(p.screening);
    let wf = radial_wavefunction(&p, cfg.symmetry, energy, n, kappa, &grid)?;
    let bs = back_substitution(&p, &wf, &grid);
    let (first, last) = wf.boundary_ratios();
    let stride = grid.len().div_ceil(MAX_SAMPLES).max(1);
    let mut picks: Vec<usize> = (0..grid.len()).step_by(stride).collect();
    if picks.last() != Some(&(grid.len() - 1)) {
        picks.push(grid.len() - 1);
    }
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut s = format!(
                "# symmetry={} n={} kappa={} H={} E={} energy_source={}\n",
                cfg.symmetry,
                n,
                kappa,
                g9(tensor),
                g9(energy),
                source
            );
            s.push_str(&format!(
                "# nodes={} boundary_first={} boundary_last={} backsub_defining={} backsub_coupled={}\n",
                wf.node_count,
                g9(first),
                g9(last),
                g9(bs.defining),
                g9(bs.coupled)
            ));
            s.push_str("r,s,F,G\n");
            for &i in &picks {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    g9(wf.r[i]),
                    g9(wf.s[i]),
                    g9(wf.upper[i]),
                    g9(wf.lower[i])
                ));
            }
            s
        }
        OutputFormat::Json => {
            let samples: Vec<Value> = picks
                .iter()
                .map(|&i| {
                    json!({
                        "r": rounded(wf.r[i]),
                        "s": rounded(wf.s[i]),
                        "F": rounded(wf.upper[i]),
                        "G": rounded(wf.lower[i]),
                    })
                })
                .collect();
            pretty(&json!({
                "symmetry": cfg.symmetry,
                "n": n,
                "kappa": kappa,
                "H": rounded(tensor),
                "E": rounded(energy),
                "energy_source": source,
                "nodes": wf.node_count,
                "boundary_first": rounded(first),
                "boundary_last": rounded(last),
                "backsub_defining": rounded(bs.defining),
                "backsub_coupled": rounded(bs.coupled),
                "samples": samples,
            }))
        }
    })
}
