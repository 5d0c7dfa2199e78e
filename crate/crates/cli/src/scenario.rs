//! Named test cases: domain, initial state, bottom and default final time.

use anyhow::{anyhow, Result};
use sgn_core::benchmarks::{
    hump_bathymetry, init_dingemans, init_favre, init_favre_leftward, init_gaussian_bell, init_gaussian_hump, init_lake_at_rest,
    init_shelf, init_soliton, FavreSpec, SolitonSpec,
};
use sgn_core::params::GRAVITY;
use sgn_core::{Bottom, Grid, State};

use crate::config::RunConfig;

/// A scenario instantiated on one grid.
#[derive(Debug, Clone)]
pub struct Setup {
    pub grid: Grid,
    pub init: State,
    pub bathy: Option<Bottom>,
    pub t_final: f64,
    pub gauges: Vec<f64>,
    /// Exact solitary wave, when the scenario has one.
    pub soliton: Option<SolitonSpec<f64>>,
    pub favre: Option<FavreSpec<f64>>,
}

fn domain(cfg: &RunConfig, lo: f64, hi: f64) -> (f64, f64) {
    (cfg.x_min.unwrap_or(lo), cfg.x_max.unwrap_or(hi))
}

/// Final time: `t_final`, else `t_dimless sqrt(h0 / g)` for bores, else the default.
fn final_time(cfg: &RunConfig, default: f64, bore: Option<&FavreSpec<f64>>, g: f64) -> f64 {
    match (cfg.t_final, cfg.t_dimless, bore) {
        (Some(t), _, _) => t,
        (None, Some(td), Some(spec)) => spec.physical_time(td, g),
        _ => default,
    }
}

/// Builds `cfg.scenario` on a grid of `n_cells` cells.
pub fn build(cfg: &RunConfig, n_cells: usize) -> Result<Setup> {
    let g = cfg.g.unwrap_or(GRAVITY);
    let grid_on = |lo: f64, hi: f64| -> Result<Grid> {
        let (a, b) = domain(cfg, lo, hi);
        Ok(Grid::new(a, b, n_cells, 2)?)
    };
    let plain = |grid: Grid, init: State, t: f64| Setup {
        grid,
        init,
        bathy: None,
        t_final: t,
        gauges: cfg.gauges.clone(),
        soliton: None,
        favre: None,
    };
    let setup = match cfg.scenario.as_str() {
        "soliton" => {
            let grid = grid_on(-50.0, 50.0)?;
            let spec = SolitonSpec::new(cfg.h0.unwrap_or(1.0), cfg.amplitude.unwrap_or(1.0), cfg.x0.unwrap_or(0.0), g)?;
            let init = init_soliton(&spec, &grid);
            Setup { soliton: Some(spec), ..plain(grid, init, final_time(cfg, 1.0, None, g)) }
        }
        "gaussian" => {
            let grid = grid_on(-200.0, 200.0)?;
            let init = init_gaussian_bell(&grid);
            plain(grid, init, final_time(cfg, 35.0, None, g))
        }
        "hump" => {
            let grid = grid_on(-150.0, 150.0)?;
            let (init, bathy) = init_gaussian_hump(&grid)?;
            Setup { bathy: Some(bathy), ..plain(grid, init, final_time(cfg, 35.0, None, g)) }
        }
        "lake-at-rest" => {
            let grid = grid_on(-150.0, 150.0)?;
            let bathy = hump_bathymetry(&grid);
            let init = init_lake_at_rest(&grid, &bathy, cfg.zeta0.unwrap_or(1.0))?;
            Setup { bathy: Some(bathy), ..plain(grid, init, final_time(cfg, 1.0, None, g)) }
        }
        "favre" => {
            let grid = grid_on(-50.0, 50.0)?;
            let spec = FavreSpec::new(cfg.h0.unwrap_or(0.2), cfg.epsilon.unwrap_or(1.1), cfg.x0.unwrap_or(0.0), g)?;
            let init = init_favre(&spec, &grid);
            let t = final_time(cfg, spec.physical_time(50.0, g), Some(&spec), g);
            Setup { favre: Some(spec), ..plain(grid, init, t) }
        }
        "treske" => {
            let grid = grid_on(0.0, 73.58)?;
            let spec = FavreSpec::new(cfg.h0.unwrap_or(0.2), cfg.epsilon.unwrap_or(1.1), cfg.x0.unwrap_or(68.58), g)?;
            let init = init_favre_leftward(&spec, &grid);
            let t = final_time(cfg, spec.physical_time(256.0, g), Some(&spec), g);
            Setup { favre: Some(spec), ..plain(grid, init, t) }
        }
        "shelf" => {
            let grid = grid_on(0.0, 280.0)?;
            let (init, bathy) = init_shelf(&grid, g)?;
            Setup { bathy: Some(bathy), ..plain(grid, init, final_time(cfg, 40.0, None, g)) }
        }
        "dingemans" => {
            let grid = grid_on(-140.0, 100.0)?;
            let bar: Option<Vec<(f64, f64)>> = cfg.bar.as_ref().map(|b| b.iter().map(|p| (p[0], p[1])).collect());
            let (init, bathy, gauges) = init_dingemans(&grid, g, bar.as_deref())?;
            let gauges = if cfg.gauges.is_empty() { gauges } else { cfg.gauges.clone() };
            Setup { bathy: Some(bathy), gauges, ..plain(grid, init, final_time(cfg, 70.0, None, g)) }
        }
        other => return Err(anyhow!("field `scenario`: unknown scenario `{other}`")),
    };
    Ok(setup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SCENARIOS;

    #[test]
    fn every_scenario_builds() {
        for name in SCENARIOS {
            let cfg = RunConfig::parse(&format!("scenario = \"{name}\"\nn_cells = 200\n")).unwrap();
            let s = build(&cfg, 200).unwrap();
            assert_eq!(s.grid.n_cells, 200);
            assert!(s.t_final > 0.0, "{name}");
        }
    }

    #[test]
    fn bore_time_is_dimensionless() {
        let cfg = RunConfig::parse("scenario = \"favre\"\nn_cells = 100\nt_dimless = 60\n").unwrap();
        let s = build(&cfg, 100).unwrap();
        assert!((s.t_final - 60.0 * (0.2f64 / 9.81).sqrt()).abs() < 1e-12);
        let cfg = RunConfig::parse("scenario = \"treske\"\nn_cells = 100\n").unwrap();
        let s = build(&cfg, 100).unwrap();
        assert!((s.t_final - 256.0 * (0.2f64 / 9.81).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dingemans_uses_flume_gauges_by_default() {
        let cfg = RunConfig::parse("scenario = \"dingemans\"\nn_cells = 480\n").unwrap();
        assert_eq!(build(&cfg, 480).unwrap().gauges, vec![3.04, 9.44, 20.04, 26.04]);
    }
}
