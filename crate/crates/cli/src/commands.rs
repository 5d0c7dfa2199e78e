//! The `run`, `converge` and `timing` drivers.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sgn_core::benchmarks::{exact_soliton, l1_error, observed_order};
use sgn_core::{run, Boundary, ClassicalSolver, ExplicitSolver, Order, Params, RunOptions, RunReport, SiSolver};

use crate::config::{cfls_for, default_cfl, RunConfig, SolverKind};
use crate::output::{fmt_sig, resolve, write_gauges, write_profile, write_steps, Field, Table};
use crate::scenario::{build, Setup};

/// Runs one solver on a prepared scenario.
pub fn simulate(kind: SolverKind, setup: &Setup, params: &Params, opts: &RunOptions) -> sgn_core::Result<RunReport> {
    let grid = setup.grid.clone();
    let bathy = setup.bathy.clone();
    match kind {
        SolverKind::SiHsgn => run(&SiSolver::new(grid, params.clone(), bathy)?, &setup.init, opts).map(|r| r.1),
        SolverKind::ExplicitHsgn => run(&ExplicitSolver::new(grid, params.clone(), bathy)?, &setup.init, opts).map(|r| r.1),
        SolverKind::ClassicalSgn => run(&ClassicalSolver::new(grid, params.clone(), bathy)?, &setup.init.to_sw(), opts).map(|r| r.1),
    }
}

/// Scheme parameters for one sweep entry.
pub fn params_for(cfg: &RunConfig, order: u32, lambda: f64, cfl: f64, t_final: f64) -> Result<Params> {
    let mut p = Params::default()
        .with_order(Order::from_int(order)?)
        .with_lambda(lambda)
        .with_cfl(cfl)
        .with_t_final(t_final)
        .with_boundary(cfg.boundary.map_or(Boundary::Transmissive, Boundary::from))
        .with_dissipation(cfg.dissipation())
        .with_pressure(cfg.pressure());
    if let Some(g) = cfg.g {
        p.g = g;
    }
    if let Some(m) = cfg.mcfl_limit {
        p.mcfl_limit = m;
    }
    if let Some(l) = cfg.limiter {
        p.limiter = l;
    }
    p.validate()?;
    Ok(p)
}

fn tag(cfg: &RunConfig, kind: SolverKind, order: u32, n: usize, lambda: f64, cfl: f64) -> String {
    format!("{}_{}_o{order}_N{n}_lam{}_cfl{}", cfg.scenario, kind.name(), fmt_sig(lambda), fmt_sig(cfl))
}

/// `run <config>`: one profile per sweep entry, gauges and step traces when
/// requested, and a timing table.
pub fn run_config(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = resolve(&cfg.output_dir);
    let mut written = Vec::new();
    let mut timing: Vec<Vec<Field>> = Vec::new();
    let mut any_steps = false;
    for n in cfg.n_cells.values() {
        let setup = build(cfg, n)?;
        let opts = RunOptions { gauges: setup.gauges.clone(), ..Default::default() };
        for kind in cfg.solver.values() {
            for order in cfg.order.values() {
                for lambda in cfg.lambda.values() {
                    for cfl in cfls_for(cfg, kind) {
                        let p = params_for(cfg, order, lambda, cfl, setup.t_final)?;
                        let name = tag(cfg, kind, order, n, lambda, cfl);
                        let rep = simulate(kind, &setup, &p, &opts).with_context(|| format!("scenario `{}`, run {name}", cfg.scenario))?;
                        written.push(write_profile(&dir.join(format!("profile_{name}.csv")), &rep.profile)?);
                        if !rep.gauges.is_empty() {
                            written.push(write_gauges(&dir.join(format!("gauges_{name}.csv")), &rep.gauges)?);
                        }
                        if cfg.write_steps {
                            written.push(write_steps(&dir.join(format!("steps_{name}.csv")), &rep.steps)?);
                        }
                        any_steps |= rep.step_count > 0;
                        timing.push(vec![
                            cfg.scenario.as_str().into(),
                            kind.name().into(),
                            (order as usize).into(),
                            lambda.into(),
                            n.into(),
                            cfl.into(),
                            rep.step_count.into(),
                            rep.wall_time.into(),
                            rep.mass_drift().into(),
                            rep.kappa_min().into(),
                        ]);
                    }
                }
            }
        }
        if cfg.reference {
            let fine = build(cfg, 3 * n)?;
            let p = params_for(cfg, 2, 0.0, default_cfl(SolverKind::ClassicalSgn), fine.t_final)?;
            let rep = simulate(SolverKind::ClassicalSgn, &fine, &p, &RunOptions::default())
                .with_context(|| format!("scenario `{}`, reference on {} cells", cfg.scenario, 3 * n))?;
            written.push(write_profile(&dir.join(format!("reference_{}_N{}.csv", cfg.scenario, 3 * n)), &rep.profile)?);
        }
    }
    if any_steps {
        let mut t = Table::create(
            &dir.join(format!("timing_{}.csv", cfg.scenario)),
            &["scenario", "solver", "order", "lambda", "n_cells", "cfl", "steps", "wall_time", "mass_drift", "kappa_min"],
        )?;
        for row in &timing {
            t.row(row)?;
        }
        written.push(t.finish()?);
    }
    Ok(written)
}

/// One row of a soliton convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub error_h: f64,
    pub error_u: f64,
    /// Orders against the previous (coarser) grid.
    pub order_h: Option<f64>,
    pub order_u: Option<f64>,
    pub kappa_min: Option<f64>,
    pub wall_time: f64,
}

/// L1 errors of `h` and `u` against the exact solitary wave at the final time.
pub fn soliton_errors(setup: &Setup, rep: &RunReport) -> Result<(f64, f64)> {
    let Some(spec) = setup.soliton else { bail!("field `scenario`: no exact solution for this scenario") };
    let (he, ue): (Vec<f64>, Vec<f64>) = rep.profile.x.iter().map(|&x| exact_soliton(&spec, x, setup.t_final)).unzip();
    Ok((l1_error(&rep.profile.h, &he)?, l1_error(&rep.profile.u, &ue)?))
}

/// Errors on each grid of `grids` (in the given order) and observed orders.
pub fn soliton_convergence(
    cfg: &RunConfig,
    kind: SolverKind,
    order: u32,
    lambda: f64,
    cfl: f64,
    grids: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in grids {
        let setup = build(cfg, n)?;
        let p = params_for(cfg, order, lambda, cfl, setup.t_final)?;
        let rep = simulate(kind, &setup, &p, &RunOptions::default())
            .with_context(|| format!("scenario `{}`, {} order {order} on {n} cells", cfg.scenario, kind.name()))?;
        let (eh, eu) = soliton_errors(&setup, &rep)?;
        let prev = rows.last();
        rows.push(ConvergenceRow {
            n_cells: n,
            error_h: eh,
            error_u: eu,
            order_h: prev.map(|r| observed_order(r.error_h, eh)),
            order_u: prev.map(|r| observed_order(r.error_u, eu)),
            kappa_min: rep.kappa_min(),
            wall_time: rep.wall_time,
        });
    }
    Ok(rows)
}

/// `converge <config>`: soliton error table over `n_cells` for every solver,
/// order, lambda and CFL in the config.
pub fn converge_config(cfg: &RunConfig) -> Result<PathBuf> {
    if cfg.scenario != "soliton" {
        bail!("field `scenario`: convergence needs an exact solution; only `soliton` has one");
    }
    let mut grids = cfg.n_cells.values();
    grids.sort_unstable();
    let path = resolve(&cfg.output_dir).join("convergence.csv");
    let mut t =
        Table::create(&path, &["solver", "order", "lambda", "cfl", "N", "error_h", "error_u", "observed_order_h", "observed_order_u"])?;
    for kind in cfg.solver.values() {
        for order in cfg.order.values() {
            for lambda in cfg.lambda.values() {
                for cfl in cfls_for(cfg, kind) {
                    for r in soliton_convergence(cfg, kind, order, lambda, cfl, &grids)? {
                        t.row(&[
                            kind.name().into(),
                            (order as usize).into(),
                            lambda.into(),
                            cfl.into(),
                            r.n_cells.into(),
                            r.error_h.into(),
                            r.error_u.into(),
                            r.order_h.into(),
                            r.order_u.into(),
                        ])?;
                    }
                }
            }
        }
    }
    t.finish()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Median wall time of `repeats` identical runs.
pub fn timed(kind: SolverKind, setup: &Setup, p: &Params, repeats: usize) -> Result<f64> {
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let rep = simulate(kind, setup, p, &RunOptions::default()).with_context(|| format!("timing run of {}", kind.name()))?;
        times.push(rep.wall_time);
    }
    Ok(median(times))
}

/// `timing <config>`: wall times of the three solvers per lambda on the first
/// grid of the config, run one after another.
pub fn timing_config(cfg: &RunConfig) -> Result<PathBuf> {
    let n = cfg.n_cells.values()[0];
    let order = cfg.order.values()[0];
    let repeats = cfg.repeats.unwrap_or(1);
    let setup = build(cfg, n)?;
    let path = resolve(&cfg.output_dir).join(format!("timing_comparison_{}.csv", cfg.scenario));
    let mut t = Table::create(&path, &["lambda", "t_SI", "t_EX", "t_SGN", "speedup"])?;
    for lambda in cfg.lambda.values() {
        let run_one = |kind: SolverKind, c: f64| -> Result<f64> {
            let p = params_for(cfg, order, lambda, c, setup.t_final)?;
            timed(kind, &setup, &p, repeats)
        };
        let first = |kind| cfls_for(cfg, kind)[0];
        let t_si = run_one(SolverKind::SiHsgn, first(SolverKind::SiHsgn))?;
        let t_ex = run_one(SolverKind::ExplicitHsgn, first(SolverKind::ExplicitHsgn))?;
        let t_sgn = run_one(SolverKind::ClassicalSgn, first(SolverKind::ClassicalSgn))?;
        t.row(&[lambda.into(), t_si.into(), t_ex.into(), t_sgn.into(), (t_ex / t_si).into()])?;
    }
    t.finish()
}

/// Loads a config and names the file in errors.
pub fn load(path: &Path) -> Result<RunConfig> {
    RunConfig::load(path)
}
