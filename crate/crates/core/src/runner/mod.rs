//! Subcommand dispatch and report writing.

pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::audit::{self, AuditEntry, AuditReport};
use crate::bounds;
use crate::error::{Error, Result};
use crate::inequalities::{self, FailurePoint, MagneticSweepEntry, RatioReport};
use crate::lattice::{self, LatticeGrid};
use crate::modes;
use crate::potential::{self, Potential2D, StripGeometry};
pub use config::{OutputFormat, RunConfig};
use report::{float, float_list, int_list, Header};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bound,
    Count,
    Audit { strict: bool },
    Sweep { strict: bool },
    Ineq,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Count => "count",
            Command::Audit { .. } => "audit",
            Command::Sweep { .. } => "sweep",
            Command::Ineq => "ineq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    ConfigError = 1,
    NumericalFailure = 2,
    Unsatisfied = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn for_error(e: &Error) -> Self {
        if e.is_numerical() {
            ExitStatus::NumericalFailure
        } else {
            ExitStatus::ConfigError
        }
    }
}

/// One file (or stdout when `path` is `None`) produced by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: ExitStatus,
    pub outputs: Vec<Output>,
}

impl RunOutcome {
    pub fn write(&self) -> Result<()> {
        use std::io::Write;
        for out in &self.outputs {
            match &out.path {
                Some(p) => std::fs::write(p, &out.bytes)?,
                None => std::io::stdout().write_all(&out.bytes)?,
            }
        }
        Ok(())
    }
}

struct Context<'a> {
    cfg: &'a RunConfig,
    format: OutputFormat,
    path: Option<PathBuf>,
    header: Header,
    geometry: StripGeometry,
    potential: Potential2D,
}

impl Context<'_> {
    fn emit<T: Serialize>(&self, columns: &[&str], rows: &[Vec<String>], body: &T) -> Result<Output> {
        let bytes = match self.format {
            OutputFormat::Csv => report::csv_document(&self.header, columns, rows)?,
            OutputFormat::Json => report::json_document(&self.header, body)?,
        };
        Ok(Output {
            path: self.path.clone(),
            bytes,
        })
    }

    fn norm(&self) -> Result<f64> {
        potential::norm_x_of_potential(&self.potential, self.geometry, &self.cfg.solver.quadrature)
    }
}

/// `<dir>/<stem><suffix>.csv` next to `path`.
pub fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    path.with_file_name(format!("{stem}{suffix}.csv"))
}

/// Runs a subcommand and renders its reports without writing them.
/// `out` and `format` override the config's output section.
pub fn run(command: Command, cfg: &RunConfig, out: Option<PathBuf>, format: Option<OutputFormat>) -> Result<RunOutcome> {
    cfg.validate()?;
    let ctx = Context {
        cfg,
        format: format.unwrap_or(cfg.output.format),
        path: out.or_else(|| cfg.output.path.clone()),
        header: Header::new(command.name(), cfg.digest(), cfg.seed, cfg.resolved_json()),
        geometry: cfg.geometry()?,
        potential: cfg.potential()?,
    };
    match command {
        Command::Bound => run_bound(&ctx),
        Command::Count => run_count(&ctx),
        Command::Audit { strict } => run_audit(&ctx, cfg.psi_values(), strict),
        Command::Sweep { strict } => {
            if cfg.flux.psi_list.is_none() {
                return Err(Error::Config("sweep needs flux.psi_list".into()));
            }
            run_audit(&ctx, cfg.psi_values(), strict)
        }
        Command::Ineq => run_ineq(&ctx),
    }
}

#[derive(Serialize)]
struct BoundRow {
    psi: f64,
    phi: f64,
    norm_x: f64,
    bound: f64,
    retained_modes: Vec<i64>,
    omitted: usize,
    per_mode_terms: std::collections::BTreeMap<i64, f64>,
}

fn run_bound(ctx: &Context) -> Result<RunOutcome> {
    let norm = ctx.norm()?;
    let rows = ctx
        .cfg
        .psi_values()
        .into_iter()
        .map(|psi| {
            let flux = modes::reduced_flux(psi);
            let b = bounds::strip_clr_bound(&flux, norm)?;
            Ok(BoundRow {
                psi,
                phi: flux.phi,
                norm_x: norm,
                bound: b.value,
                retained_modes: b.retained,
                omitted: b.omitted_below_one,
                per_mode_terms: b.per_mode_terms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                float(r.psi),
                float(r.phi),
                float(r.norm_x),
                float(r.bound),
                int_list(&r.retained_modes),
                r.omitted.to_string(),
            ]
        })
        .collect();
    let out = ctx.emit(&["psi", "phi", "norm_x", "bound", "retained_modes", "omitted"], &table, &rows)?;
    Ok(RunOutcome {
        status: ExitStatus::Success,
        outputs: vec![out],
    })
}

#[derive(Serialize)]
struct CountRow {
    psi: f64,
    phi: f64,
    mode_k: String,
    count: usize,
    borderline: Vec<f64>,
    method: &'static str,
    ladder: Vec<usize>,
}

fn run_count(ctx: &Context) -> Result<RunOutcome> {
    let cfg = ctx.cfg;
    let opts = cfg.audit_options();
    let norm = ctx.norm()?;
    let w = audit::sampled_sup(&ctx.potential, &ctx.geometry, &opts, &cfg.solver)?;
    let grid = LatticeGrid::new(cfg.grid.x1_points, cfg.grid.x2_points, cfg.grid.x1_extent).with_cap(cfg.solver.factorization_cap);
    if grid.unknowns() > cfg.solver.factorization_cap {
        return Err(Error::GridCap {
            requested: grid.unknowns(),
            cap: cfg.solver.factorization_cap,
        });
    }
    let mut rows = Vec::new();
    for psi in cfg.psi_values() {
        let flux = modes::reduced_flux(psi);
        // integer flux has no bound window, but the fibers can still be counted
        let retained = if flux.is_integer_flux {
            0
        } else {
            modes::mode_window(&flux, norm)?.len()
        };
        let counts = audit::extended_mode_counts(&flux, &w, retained, &cfg.solver, &opts)?;
        for m in &counts {
            rows.push(CountRow {
                psi,
                phi: flux.phi,
                mode_k: m.k.to_string(),
                count: m.count,
                borderline: m.borderline.clone(),
                method: "prufer",
                ladder: m.prufer.ladder.clone(),
            });
            rows.push(CountRow {
                psi,
                phi: flux.phi,
                mode_k: m.k.to_string(),
                count: m.count,
                borderline: Vec::new(),
                method: "lattice_fiber",
                ladder: m.lattice.ladder.clone(),
            });
        }
        rows.push(CountRow {
            psi,
            phi: flux.phi,
            mode_k: "total".into(),
            count: counts.iter().map(|m| m.count).sum(),
            borderline: counts.iter().flat_map(|m| m.borderline.iter().copied()).collect(),
            method: "mode_sum",
            ladder: Vec::new(),
        });
        let op = lattice::assemble_peierls_2d(&flux, &ctx.potential, &ctx.geometry, &grid)?;
        let inertia = lattice::count_negative_inertia(&op, &cfg.solver)?;
        rows.push(CountRow {
            psi,
            phi: flux.phi,
            mode_k: "all".into(),
            count: inertia.negative,
            borderline: Vec::new(),
            method: "lattice_2d",
            ladder: vec![op.dim()],
        });
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                float(r.psi),
                float(r.phi),
                r.mode_k.clone(),
                r.count.to_string(),
                float_list(&r.borderline),
                r.method.to_string(),
            ]
        })
        .collect();
    let out = ctx.emit(&["psi", "phi", "mode_k", "count", "borderline", "method"], &table, &rows)?;
    Ok(RunOutcome {
        status: ExitStatus::Success,
        outputs: vec![out],
    })
}

fn audit_table(rows: &[AuditEntry]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|e| match e {
            AuditEntry::Ok(r) => vec![
                float(r.psi),
                float(r.phi),
                float(r.norm_x),
                float(r.bound_value),
                r.total_count.to_string(),
                r.satisfied_main.to_string(),
                r.notes.clone(),
            ],
            AuditEntry::Error(r) => vec![
                float(r.psi),
                float(r.phi),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("error[{}]: {}", r.kind, r.message),
            ],
        })
        .collect()
}

fn run_audit(ctx: &Context, psi_values: Vec<f64>, strict: bool) -> Result<RunOutcome> {
    let cfg = ctx.cfg;
    let rows = audit::flux_sweep(&psi_values, &ctx.potential, &ctx.geometry, &cfg.solver, &cfg.audit_options());
    let report = AuditReport::new(rows, cfg.digest(), cfg.seed);
    let out = ctx.emit(
        &["psi", "phi", "norm_x", "bound", "total_count", "satisfied", "notes"],
        &audit_table(&report.rows),
        &report,
    )?;
    let status = if strict && !report.all_satisfied() {
        ExitStatus::Unsatisfied
    } else {
        ExitStatus::Success
    };
    Ok(RunOutcome {
        status,
        outputs: vec![out],
    })
}

#[derive(Serialize)]
struct IneqRow {
    check: &'static str,
    seed: u64,
    p: Option<f64>,
    m: Option<i64>,
    alpha: Option<f64>,
    #[serde(flatten)]
    report: RatioReport,
}

#[derive(Serialize)]
struct IneqBody<'a> {
    ratios: &'a [IneqRow],
    failure_curve: &'a [FailurePoint],
}

fn run_ineq(ctx: &Context) -> Result<RunOutcome> {
    let cfg = ctx.cfg;
    let ineq = cfg.inequalities();
    let quad = &cfg.solver.quadrature;
    let mut rows = Vec::new();
    for &p in &ineq.hardy_p {
        let reports = inequalities::hardy_1d_sweep(cfg.seed, ineq.hardy_functions, p, quad)?;
        rows.extend(reports.into_iter().enumerate().map(|(i, report)| IneqRow {
            check: "hardy_1d",
            seed: cfg.seed.wrapping_add(i as u64),
            p: Some(p),
            m: None,
            alpha: None,
            report,
        }));
    }
    let magnetic = inequalities::magnetic_hardy_sweep(cfg.seed, ineq.magnetic_functions, &ineq.magnetic_m, &ineq.magnetic_alpha, quad)?;
    rows.extend(magnetic.into_iter().map(|e: MagneticSweepEntry| IneqRow {
        check: "magnetic_hardy",
        seed: e.seed,
        p: None,
        m: Some(e.m),
        alpha: Some(e.alpha),
        report: e.report,
    }));
    let curve = inequalities::hardy_2d_failure_curve(&ineq.cutoffs, quad)?;

    let opt_f = |x: Option<f64>| x.map(float).unwrap_or_default();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.check.to_string(),
                r.seed.to_string(),
                opt_f(r.p),
                r.m.map(|m| m.to_string()).unwrap_or_default(),
                opt_f(r.alpha),
                float(r.report.lhs),
                float(r.report.rhs),
                float(r.report.ratio),
                float(r.report.admissible_constant),
                r.report.satisfied.to_string(),
            ]
        })
        .collect();
    let columns = [
        "check",
        "seed",
        "p",
        "m",
        "alpha",
        "lhs",
        "rhs",
        "ratio",
        "admissible_constant",
        "satisfied",
    ];
    let mut outputs = vec![ctx.emit(
        &columns,
        &table,
        &IneqBody {
            ratios: &rows,
            failure_curve: &curve,
        },
    )?];
    if ctx.format == OutputFormat::Csv {
        let weighted: Vec<Vec<String>> = curve.iter().map(|c| vec![float(c.cutoff), float(c.ratio)]).collect();
        let unweighted: Vec<Vec<String>> = curve.iter().map(|c| vec![float(c.cutoff), float(c.ratio_unweighted)]).collect();
        let path_for = |suffix: &str| ctx.path.as_deref().map(|p| sibling_path(p, suffix));
        outputs.push(Output {
            path: path_for("_curve"),
            bytes: report::csv_document(&ctx.header, &["cutoff", "ratio"], &weighted)?,
        });
        outputs.push(Output {
            path: path_for("_curve_unweighted"),
            bytes: report::csv_document(&ctx.header, &["cutoff", "ratio"], &unweighted)?,
        });
    }
    Ok(RunOutcome {
        status: ExitStatus::Success,
        outputs,
    })
}
