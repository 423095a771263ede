//! Command-line front end for the `pearcey` library: argument parsing,
//! validation, dispatch and deterministic CSV/JSON emission.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pearcey::acceptance::{only_known_failures, run_all, KNOWN_FAILURES};
use pearcey::asymptotics::{clt_distance_with, counting_stats, f_gamma1, f_large_gap, fit_gamma1_constant, h_large_s, mgf_prefactor};
use pearcey::chf::chf_report;
use pearcey::fredholm::{
    fredholm_logdet, log_mgf_with, logdet_converged, logdet_history, moments_mgf_with, moments_trace_with,
    Discretisation, MAX_ORDER, MAX_S,
};
use pearcey::hamiltonian::{identity_report, solve_trajectory, SweepOptions, Trajectory};
use pearcey::kernel::{kernel, kernel_integral, kernel_rh, DIAGONAL_BAND};
use pearcey::{Error, ModelParams};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status after a numerical error (error JSON on stderr).
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit status after a usage error.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "PEARCEY_THREADS";

/// Numerics for the thinned Pearcey process.
#[derive(Debug, Parser)]
#[command(name = "pearcey", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Output options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Kernel representation(s) to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Rational,
    Integral,
    Rh,
    All,
}

/// Model parameters γ and ρ.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// Thinning parameter γ in [0, 1].
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Pearcey parameter ρ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
}

/// A uniform grid of `s_steps` points on [s_min, s_max].
#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Left end of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub s_min: f64,
    /// Right end of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub s_max: f64,
    /// Number of grid points (1 gives s_min only).
    #[arg(long)]
    pub s_steps: usize,
}

impl GridArgs {
    fn points(&self) -> Vec<f64> {
        if self.s_steps == 1 {
            return vec![self.s_min];
        }
        (0..self.s_steps).map(|i| self.s_min + (self.s_max - self.s_min) * i as f64 / (self.s_steps - 1) as f64).collect()
    }
}

/// Quadrature controls.
#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadArgs {
    /// Fixed Nyström order; when absent the order is doubled until `--tol`.
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// Convergence tolerance for order doubling.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F(s; γ, ρ) = ln det(I − γK) on (−s, s).
    Det {
        #[command(flatten)]
        model: ModelArgs,
        /// Interval half-length.
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// F over an s-grid next to its large-s asymptotics.
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kernel values on the square grid x, y ∈ {s-grid}.
    Kernel {
        /// Pearcey parameter ρ.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rho: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Representation(s) to evaluate.
        #[arg(long, value_enum, default_value_t = Oracle::Rational)]
        oracle: Oracle,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Trajectory of the Hamiltonian system with identity residuals.
    Hamiltonian {
        #[command(flatten)]
        model: ModelArgs,
        /// Large-s anchor where the asymptotic data are imposed.
        #[arg(long, default_value_t = 10.0)]
        s: f64,
        /// Convergence threshold of the sweep iteration.
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean and variance of the counting statistic against μ and σ².
    Moments {
        /// Pearcey parameter ρ.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rho: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Also report ln E e^{−2πνN} against its asymptotic form at this ν.
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        /// Nyström order.
        #[arg(long, default_value_t = 100)]
        quad_order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distance of the normalised counting statistic's MGF from e^{t²/2}.
    Clt {
        /// Pearcey parameter ρ.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rho: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Largest |t| of the 5-point t-grid.
        #[arg(long, default_value_t = 0.5)]
        t_max: f64,
        /// Nyström order.
        #[arg(long, default_value_t = 100)]
        quad_order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Jump, determinant, normalisation and origin-expansion checks of the
    /// confluent hypergeometric parametrix at β = i·beta_im.
    ChfVerify {
        /// Imaginary part of β, |β| ≤ 0.5.
        #[arg(long, default_value_t = 0.11, allow_negative_numbers = true)]
        beta_im: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the twelve acceptance criteria.
    Selftest {
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "NaN".into(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => {
                if t.contains([',', '"', '\n']) {
                    format!("\"{}\"", t.replace('"', "\"\""))
                } else {
                    t.clone()
                }
            }
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(t) => json!(t),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

/// The emitted artefact of one run.
#[derive(Debug, Clone)]
pub struct Report {
    /// Subcommand name.
    pub command: &'static str,
    /// Echo of the validated configuration.
    pub config: Value,
    /// Tolerances in force.
    pub tolerances: Value,
    /// Column names.
    pub columns: Vec<String>,
    /// Rows, one cell per column.
    pub rows: Vec<Vec<Cell>>,
    /// Quadrature orders, convergence estimates and summary checks.
    pub diagnostics: Value,
}

impl Report {
    fn new(command: &'static str, config: Value, tolerances: Value, columns: &[&str]) -> Self {
        Self {
            command,
            config,
            tolerances,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            diagnostics: json!({}),
        }
    }

    /// Render as CSV: a `#` metadata block, a header row, then the rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# pearcey-cli {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# config: {}", self.config);
        let _ = writeln!(out, "# tolerances: {}", self.tolerances);
        let _ = writeln!(out, "# diagnostics: {}", self.diagnostics);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Render as JSON with keys `config`, `results`, `diagnostics`.
    pub fn to_json(&self) -> String {
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut config = self.config.clone();
        if let Value::Object(m) = &mut config {
            m.insert("command".into(), json!(self.command));
            m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            m.insert("tolerances".into(), self.tolerances.clone());
        }
        let doc = json!({ "config": config, "results": results, "diagnostics": self.diagnostics });
        let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
        s.push('\n');
        s
    }
}

/// A failure of a run, mapped onto an exit status.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration (exit 2).
    Usage(String),
    /// Numerical failure (exit 1).
    Numerical(Error),
    /// Output could not be written (exit 1).
    Io(String),
    /// The self-test found an unexpected failure (exit 1).
    SelftestFailed(Vec<usize>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e)
    }
}

impl CliError {
    /// Exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        }
    }

    /// Machine-readable description for standard error.
    pub fn to_json(&self) -> String {
        let v = match self {
            CliError::Usage(m) => json!({ "error": { "kind": "usage", "message": m } }),
            CliError::Numerical(e) => json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
            CliError::Io(m) => json!({ "error": { "kind": "io", "message": m } }),
            CliError::SelftestFailed(ids) => {
                json!({ "error": { "kind": "selftest", "message": "unexpected acceptance failures", "criteria": ids } })
            }
        };
        v.to_string()
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_model(m: &ModelArgs) -> CliResult<ModelParams> {
    if !m.rho.is_finite() || m.rho.abs() > 10.0 {
        return Err(usage(format!("--rho {} must be finite with |rho| <= 10", m.rho)));
    }
    ModelParams::new(m.gamma, m.rho).map_err(|e| usage(e.to_string()))
}

fn check_s(s: f64, what: &str) -> CliResult<()> {
    if !(s > 0.0 && s <= MAX_S) {
        return Err(usage(format!("{what} = {s} must lie in (0, {MAX_S}]")));
    }
    Ok(())
}

fn check_grid(g: &GridArgs, lo: f64, hi: f64, positive: bool) -> CliResult<Vec<f64>> {
    if g.s_steps == 0 || g.s_steps > 10_000 {
        return Err(usage(format!("--s-steps {} must be in 1..=10000", g.s_steps)));
    }
    if !(g.s_min.is_finite() && g.s_max.is_finite() && g.s_min <= g.s_max) {
        return Err(usage("--s-min must not exceed --s-max"));
    }
    if g.s_min < lo || g.s_max > hi || (positive && g.s_min <= 0.0) {
        return Err(usage(format!("grid [{}, {}] must lie in {}{lo}, {hi}]", g.s_min, g.s_max, if positive { "(" } else { "[" })));
    }
    Ok(g.points())
}

fn check_quad(q: &QuadArgs) -> CliResult<()> {
    if let Some(n) = q.quad_order {
        if n == 0 || n > MAX_ORDER {
            return Err(usage(format!("--quad-order {n} must be in 1..={MAX_ORDER}")));
        }
    }
    if !(q.tol >= 1e-12 && q.tol < 1.0) {
        return Err(usage(format!("--tol {} must be in [1e-12, 1)", q.tol)));
    }
    Ok(())
}

fn check_order(n: usize) -> CliResult<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(usage(format!("--quad-order {n} must be in 1..={MAX_ORDER}")));
    }
    Ok(())
}

/// F with either a fixed order or order doubling; returns (F, order, error estimate).
fn determinant(s: f64, p: ModelParams, q: &QuadArgs) -> pearcey::Result<(f64, usize, f64)> {
    match q.quad_order {
        Some(n) => {
            let a = fredholm_logdet(s, p, n)?;
            let half = fredholm_logdet(s, p, (n / 2).max(1))?;
            Ok((a.f, n, (a.f - half.f).abs()))
        }
        None => {
            let r = logdet_converged(s, p, q.tol)?;
            Ok((r.f, r.order, r.err_est))
        }
    }
}

fn run_det(model: &ModelArgs, s: f64, quad: &QuadArgs) -> CliResult<Report> {
    let p = check_model(model)?;
    check_s(s, "--s")?;
    check_quad(quad)?;
    let config = json!({ "gamma": p.gamma, "rho": p.rho, "s": s, "quad_order": quad.quad_order });
    let mut r = Report::new("det", config, json!({ "tol": quad.tol }), &["s", "gamma", "rho", "F", "order", "err_est"]);
    let (f, order, err) = if quad.quad_order.is_none() && p.gamma != 0.0 {
        let hist = logdet_history(s, p, quad.tol)?;
        let last = *hist.last().expect("history is never empty");
        r.diagnostics = json!({ "orders": hist.iter().map(|h| h.order).collect::<Vec<_>>(),
                                "values": hist.iter().map(|h| h.f).collect::<Vec<_>>() });
        (last.f, last.order, last.err_est)
    } else {
        let v = determinant(s, p, quad)?;
        r.diagnostics = json!({ "orders": [v.1] });
        v
    };
    r.rows.push(vec![s.into(), p.gamma.into(), p.rho.into(), f.into(), Cell::Int(order as i64), err.into()]);
    Ok(r)
}

fn run_scan(model: &ModelArgs, grid: &GridArgs, quad: &QuadArgs) -> CliResult<Report> {
    let p = check_model(model)?;
    let ss = check_grid(grid, 0.0, MAX_S, true)?;
    check_quad(quad)?;
    let config = json!({ "gamma": p.gamma, "rho": p.rho, "s_min": grid.s_min, "s_max": grid.s_max, "s_steps": grid.s_steps, "quad_order": quad.quad_order });
    let tol = json!({ "tol": quad.tol });
    let values: Vec<(f64, usize, f64)> = ss.par_iter().map(|&s| determinant(s, p, quad)).collect::<pearcey::Result<_>>()?;
    if p.gamma == 1.0 {
        let mut r = Report::new("scan", config, tol, &["s", "F_num", "F_asy", "F_asy_without_C", "err", "order", "err_est"]);
        let fs: Vec<f64> = values.iter().map(|v| v.0).collect();
        let fit = if ss.len() >= 3 { Some(fit_gamma1_constant(&ss, &fs, p.rho)?) } else { None };
        let c = fit.as_ref().map(|f| f.c).unwrap_or(0.0);
        for (&s, v) in ss.iter().zip(&values) {
            let asy = f_gamma1(s, p.rho, c);
            r.rows.push(vec![s.into(), v.0.into(), asy.into(), f_gamma1(s, p.rho, 0.0).into(), (v.0 - asy).abs().into(), Cell::Int(v.1 as i64), v.2.into()]);
        }
        r.diagnostics = json!({ "fitted_constant": fit });
        return Ok(r);
    }
    let mut r = Report::new(
        "scan",
        config,
        tol,
        &["s", "F_num", "F_asy", "leading", "subleading", "log_term", "constant", "err", "err_without_constant", "order", "err_est"],
    );
    for (&s, v) in ss.iter().zip(&values) {
        let a = f_large_gap(s, p.gamma, p.rho)?;
        r.rows.push(vec![
            s.into(),
            v.0.into(),
            a.total.into(),
            a.leading.into(),
            a.subleading.into(),
            a.log_term.into(),
            a.constant.into(),
            (v.0 - a.total).abs().into(),
            (v.0 - (a.total - a.constant)).abs().into(),
            Cell::Int(v.1 as i64),
            v.2.into(),
        ]);
    }
    r.diagnostics = json!({ "max_err_est": values.iter().map(|v| v.2).fold(0.0, f64::max) });
    Ok(r)
}

fn run_kernel(rho: f64, grid: &GridArgs, oracle: Oracle) -> CliResult<Report> {
    check_model(&ModelArgs { gamma: 0.0, rho })?;
    let xs = check_grid(grid, -20.0, 20.0, false)?;
    let config = json!({ "rho": rho, "s_min": grid.s_min, "s_max": grid.s_max, "s_steps": grid.s_steps, "oracle": oracle });
    let tol = json!({ "diagonal_band": DIAGONAL_BAND });
    let mut cols = vec!["x", "y"];
    let (want_rat, want_int, want_rh) = match oracle {
        Oracle::Rational => (true, false, false),
        Oracle::Integral => (false, true, false),
        Oracle::Rh => (false, false, true),
        Oracle::All => (true, true, true),
    };
    if want_rat {
        cols.push("K_rational");
    }
    if want_int {
        cols.push("K_integral");
    }
    if want_rh {
        cols.push("K_rh");
    }
    if oracle == Oracle::All {
        cols.push("max_pairwise_diff");
    }
    let mut pts = Vec::new();
    for &x in &xs {
        for &y in &xs {
            // The RH form divides by x − y.
            if want_rh && (x - y).abs() < DIAGONAL_BAND {
                continue;
            }
            pts.push((x, y));
        }
    }
    let rows: Vec<Vec<Cell>> = pts
        .par_iter()
        .map(|&(x, y)| {
            let mut row = vec![Cell::Num(x), Cell::Num(y)];
            let mut vals = Vec::new();
            if want_rat {
                vals.push(kernel(x, y, rho)?);
            }
            if want_int {
                vals.push(kernel_integral(x, y, rho)?);
            }
            if want_rh {
                vals.push(kernel_rh(x, y, rho)?);
            }
            row.extend(vals.iter().map(|&v| Cell::Num(v)));
            if oracle == Oracle::All {
                let d = (vals[0] - vals[1]).abs().max((vals[0] - vals[2]).abs()).max((vals[1] - vals[2]).abs());
                row.push(Cell::Num(d));
            }
            Ok(row)
        })
        .collect::<pearcey::Result<_>>()?;
    let mut r = Report::new("kernel", config, tol, &cols);
    let max_diff = if oracle == Oracle::All {
        rows.iter().filter_map(|row| if let Some(Cell::Num(d)) = row.last() { Some(*d) } else { None }).fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    r.rows = rows;
    r.diagnostics = json!({ "points": r.rows.len(), "diagonal_points_skipped": want_rh, "max_pairwise_diff": if max_diff.is_nan() { Value::Null } else { json!(max_diff) } });
    Ok(r)
}

fn run_hamiltonian(model: &ModelArgs, s0: f64, tol: f64) -> CliResult<Report> {
    let p = check_model(model)?;
    if !(4.0..=12.0).contains(&s0) {
        return Err(usage(format!("--s {s0} (large-s anchor) must lie in [4, 12]")));
    }
    if !(tol >= 1e-13 && tol < 1.0) {
        return Err(usage(format!("--tol {tol} must be in [1e-13, 1)")));
    }
    if p.gamma == 1.0 {
        return Err(usage("--gamma 1 has no large-s boundary data for the Hamiltonian system"));
    }
    let opts = SweepOptions { s0, tol, ..SweepOptions::default() };
    let (traj, report) = solve_trajectory(p, opts)?;
    let ids = identity_report(&traj, p.rho)?;
    let mut cols: Vec<String> = Trajectory::csv_columns();
    cols.extend(["action_residual", "const2_residual", "pq2_residual", "zero_curvature_residual", "H_asy"].map(String::from));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let config = json!({ "gamma": p.gamma, "rho": p.rho, "s0": s0, "a": opts.a, "h": opts.h });
    let mut r = Report::new("hamiltonian", config, json!({ "sweep_tol": tol, "max_iter": opts.max_iter }), &col_refs);
    for (row, id) in traj.csv_rows(p.rho).into_iter().zip(&ids.rows) {
        let mut cells: Vec<Cell> = row.into_iter().map(Cell::Num).collect();
        let h_asy = if id.s >= 4.0 { h_large_s(id.s, p.gamma, p.rho).unwrap_or(f64::NAN) } else { f64::NAN };
        cells.extend([id.action, id.const2, id.pq2, id.zero_curvature, h_asy].map(Cell::Num));
        r.rows.push(cells);
    }
    r.diagnostics = json!({
        "sweep": report,
        "max_constraint": ids.max_constraint,
        "max_im_h": traj.max_im_h(),
        "max_dh_forms_diff": ids.max_dh_forms_diff,
        "max_action": ids.max_action,
        "max_const2": ids.max_const2,
        "max_pq2": ids.max_pq2,
        "max_zero_curvature": ids.max_zero_curvature,
        "ic_source": traj.ic_source,
    });
    Ok(r)
}

fn run_moments(rho: f64, grid: &GridArgs, nu: Option<f64>, n: usize) -> CliResult<Report> {
    check_model(&ModelArgs { gamma: 0.0, rho })?;
    let ss = check_grid(grid, 0.0, MAX_S, true)?;
    check_order(n)?;
    if let Some(v) = nu {
        if !(v.is_finite() && v.abs() <= 1.0) {
            return Err(usage(format!("--nu {v} must satisfy |nu| <= 1")));
        }
    }
    let config = json!({ "rho": rho, "s_min": grid.s_min, "s_max": grid.s_max, "s_steps": grid.s_steps, "nu": nu, "quad_order": n });
    let tol = json!({ "mgf_steps": [1e-3, 5e-4] });
    let mut cols = vec!["s", "mean_trace", "var_trace", "mean_mgf", "var_mgf", "mu", "sigma2", "mean_minus_mu", "var_minus_sigma2"];
    if nu.is_some() {
        cols.extend(["log_mgf", "log_mgf_asy"]);
    }
    let rows: Vec<Vec<Cell>> = ss
        .par_iter()
        .map(|&s| {
            let disc = Discretisation::new(s, rho, n)?;
            let tr = moments_trace_with(&disc);
            let mg = moments_mgf_with(&disc)?;
            let st = counting_stats(s, rho);
            let mut row: Vec<Cell> =
                [s, tr.mean, tr.variance, mg.mean, mg.variance, st.mu, st.sigma2, tr.mean - st.mu, tr.variance - st.sigma2].map(Cell::Num).into();
            if let Some(v) = nu {
                row.push(Cell::Num(log_mgf_with(&disc, v)?));
                row.push(Cell::Num(mgf_prefactor(v, s, rho)?.ln()));
            }
            Ok(row)
        })
        .collect::<pearcey::Result<_>>()?;
    let mut r = Report::new("moments", config, tol, &cols);
    r.rows = rows;
    r.diagnostics = json!({ "variance_constant": counting_stats(1.0, rho).var_const });
    Ok(r)
}

fn run_clt(rho: f64, grid: &GridArgs, t_max: f64, n: usize) -> CliResult<Report> {
    check_model(&ModelArgs { gamma: 0.0, rho })?;
    let ss = check_grid(grid, 4.0, MAX_S, true)?;
    check_order(n)?;
    if !(t_max > 0.0 && t_max <= 2.0) {
        return Err(usage(format!("--t-max {t_max} must be in (0, 2]")));
    }
    let t_grid: Vec<f64> = (0..5).map(|i| -t_max + t_max * i as f64 / 2.0).collect();
    let config = json!({ "rho": rho, "s_min": grid.s_min, "s_max": grid.s_max, "s_steps": grid.s_steps, "t_max": t_max, "quad_order": n });
    let rows: Vec<Vec<Cell>> = ss
        .par_iter()
        .map(|&s| {
            let disc = Discretisation::new(s, rho, n)?;
            let st = counting_stats(s, rho);
            Ok(vec![Cell::Num(s), Cell::Num(clt_distance_with(&disc, s, rho, &t_grid)?), Cell::Num(st.mu), Cell::Num(st.sigma2)])
        })
        .collect::<pearcey::Result<_>>()?;
    let mut r = Report::new("clt", config, json!({ "t_grid": t_grid }), &["s", "distance", "mu", "sigma2"]);
    r.rows = rows;
    r.diagnostics = json!({ "t_grid": t_grid });
    Ok(r)
}

fn run_chf(beta_im: f64) -> CliResult<Report> {
    if !(beta_im.is_finite() && beta_im.abs() <= 0.5) {
        return Err(usage(format!("--beta-im {beta_im} must satisfy |beta| <= 0.5")));
    }
    let rep = chf_report(beta_im)?;
    let mut r = Report::new("chf-verify", json!({ "beta_im": beta_im }), json!({ "jump": 1e-9, "upsilon0": 1e-12, "upsilon1_21": 1e-10 }), &["ray", "r", "residual"]);
    r.rows = rep.rays.iter().map(|x| vec![Cell::Int(x.ray as i64), Cell::Num(x.r), Cell::Num(x.residual)]).collect();
    r.diagnostics = json!({
        "max_ray_residual": rep.max_ray_residual,
        "det_constancy": rep.det_constancy,
        "infinity_normalisation": rep.infinity_normalisation,
        "gamma_beta_identity": rep.gamma_beta_identity,
        "expansion": rep.expansion,
    });
    Ok(r)
}

fn run_selftest() -> CliResult<(Report, Vec<usize>)> {
    let outcomes = run_all();
    let mut r = Report::new("selftest", json!({}), json!({ "criteria": "per criterion, see detail" }), &["criterion", "name", "passed", "known_failure", "detail"]);
    for o in &outcomes {
        let known = KNOWN_FAILURES.iter().any(|(id, _)| *id == o.id);
        // Timings vary run to run; they are left out so output is reproducible.
        r.rows.push(vec![Cell::Int(o.id as i64), Cell::Text(o.name.into()), Cell::Bool(o.passed), Cell::Bool(known && !o.passed), Cell::Text(o.detail.clone())]);
    }
    let unexpected: Vec<usize> = if only_known_failures(&outcomes) {
        Vec::new()
    } else {
        outcomes.iter().filter(|o| !o.passed && !KNOWN_FAILURES.iter().any(|(id, _)| *id == o.id)).map(|o| o.id).collect()
    };
    r.diagnostics = json!({
        "passed": outcomes.iter().filter(|o| o.passed).count(),
        "total": outcomes.len(),
        "known_failures": KNOWN_FAILURES.iter().map(|(id, why)| json!({ "criterion": id, "reason": why })).collect::<Vec<_>>(),
    });
    Ok((r, unexpected))
}

fn output_of(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Det { output, .. }
        | Command::Scan { output, .. }
        | Command::Kernel { output, .. }
        | Command::Hamiltonian { output, .. }
        | Command::Moments { output, .. }
        | Command::Clt { output, .. }
        | Command::ChfVerify { output, .. }
        | Command::Selftest { output } => output,
    }
}

fn emit(report: &Report, output: &OutputArgs) -> CliResult<()> {
    let text = match output.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            // A closed reader (e.g. `| head`) is not a failure of the computation.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other.map_err(|e| CliError::Io(e.to_string())),
        },
    }
}

/// Execute a parsed command, writing its report.
pub fn dispatch(cli: &Cli) -> CliResult<()> {
    let (report, unexpected) = match &cli.command {
        Command::Det { model, s, quad, .. } => (run_det(model, *s, quad)?, Vec::new()),
        Command::Scan { model, grid, quad, .. } => (run_scan(model, grid, quad)?, Vec::new()),
        Command::Kernel { rho, grid, oracle, .. } => (run_kernel(*rho, grid, *oracle)?, Vec::new()),
        Command::Hamiltonian { model, s, tol, .. } => (run_hamiltonian(model, *s, *tol)?, Vec::new()),
        Command::Moments { rho, grid, nu, quad_order, .. } => (run_moments(*rho, grid, *nu, *quad_order)?, Vec::new()),
        Command::Clt { rho, grid, t_max, quad_order, .. } => (run_clt(*rho, grid, *t_max, *quad_order)?, Vec::new()),
        Command::ChfVerify { beta_im, .. } => (run_chf(*beta_im)?, Vec::new()),
        Command::Selftest { .. } => run_selftest()?,
    };
    emit(&report, output_of(&cli.command))?;
    if unexpected.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelftestFailed(unexpected))
    }
}

/// Size the global thread pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("{THREADS_ENV}={v} is not a positive integer")))?;
        if n == 0 {
            return Err(usage(format!("{THREADS_ENV} must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(e.to_string()))?;
    }
    Ok(())
}

/// Parse `args`, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match configure_threads().and_then(|_| dispatch(&cli)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_errors_map_to_exit_one_with_kind() {
        let e = CliError::from(Error::StepFailure { s: 5.2 });
        assert_eq!(e.exit_code(), EXIT_NUMERICAL);
        let v: Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "step_failure");
        assert!(v["error"]["message"].as_str().unwrap().contains("5.2"));
    }

    #[test]
    fn usage_errors_map_to_exit_two() {
        assert_eq!(usage("bad").exit_code(), EXIT_USAGE);
        assert!(Cli::try_parse_from(["pearcey", "det"]).unwrap_err().use_stderr());
    }

    #[test]
    fn grid_includes_both_ends() {
        let g = GridArgs { s_min: 4.0, s_max: 10.0, s_steps: 4 };
        assert_eq!(g.points(), vec![4.0, 6.0, 8.0, 10.0]);
        assert_eq!(GridArgs { s_min: 3.0, s_max: 9.0, s_steps: 1 }.points(), vec![3.0]);
    }

    #[test]
    fn non_finite_cells_are_null_in_json_and_nan_in_csv() {
        assert_eq!(Cell::Num(f64::NAN).json(), Value::Null);
        assert_eq!(Cell::Num(f64::NAN).csv(), "NaN");
        assert_eq!(Cell::Num(0.1).csv(), "1.0000000000000001e-1");
        assert_eq!(Cell::Text("a,b".into()).csv(), "\"a,b\"");
    }
}
