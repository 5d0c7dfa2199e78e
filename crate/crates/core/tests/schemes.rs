use sgn_core::benchmarks::{exact_soliton, init_gaussian_bell, init_soliton, l1_error, SolitonSpec};
use sgn_core::grid::make_grid;
use sgn_core::{run, ClassicalSolver, ExplicitSolver, Grid1D, Order, RunOptions, SchemeParams, SiSolver, SolverError};

fn soliton_errors(n: usize, order: Order) -> (f64, f64) {
    let grid = make_grid(-50.0, 50.0, n, 2).unwrap();
    let spec = SolitonSpec::new(1.0, 1.0, 0.0, 9.81).unwrap();
    let p = SchemeParams::default().with_lambda(1000.0).with_cfl(2.5).with_order(order).with_t_final(1.0);
    let solver = SiSolver::new(grid.clone(), p, None).unwrap();
    let (_, rep) = run(&solver, &init_soliton(&spec, &grid), &RunOptions::default()).unwrap();
    let (he, ue): (Vec<f64>, Vec<f64>) = rep.profile.x.iter().map(|&x| exact_soliton(&spec, x, 1.0)).unzip();
    (l1_error(&rep.profile.h, &he).unwrap(), l1_error(&rep.profile.u, &ue).unwrap())
}

#[test]
fn semi_implicit_soliton_error_decreases() {
    let (h1, u1) = soliton_errors(1000, Order::First);
    let (h2, u2) = soliton_errors(2000, Order::First);
    assert!(h2 < 0.7 * h1 && u2 < 0.7 * u1, "{h1} {h2} {u1} {u2}");
}

#[test]
fn single_precision_tracks_double() {
    let spec64 = SolitonSpec::new(1.0, 0.5, 0.0, 9.81).unwrap();
    let spec32 = SolitonSpec::<f32>::new(1.0, 0.5, 0.0, 9.81).unwrap();
    let g64 = make_grid(-20.0, 20.0, 200, 2).unwrap();
    let g32: Grid1D<f32> = make_grid(-20.0, 20.0, 200, 2).unwrap();
    let p64 = SchemeParams::default().with_lambda(500.0).with_cfl(2.0).with_t_final(0.5);
    let p32 = SchemeParams::<f32>::default().with_lambda(500.0).with_cfl(2.0).with_t_final(0.5);
    let (_, r64) = run(&SiSolver::new(g64.clone(), p64, None).unwrap(), &init_soliton(&spec64, &g64), &RunOptions::default()).unwrap();
    let (_, r32) = run(&SiSolver::new(g32.clone(), p32, None).unwrap(), &init_soliton(&spec32, &g32), &RunOptions::default()).unwrap();
    let diff = r64.profile.h.iter().zip(&r32.profile.h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-4, "{diff}");
}

#[test]
fn run_lands_on_final_time_and_records_gauges() {
    let grid = make_grid(-100.0, 100.0, 400, 2).unwrap();
    let init = init_gaussian_bell(&grid);
    let p = SchemeParams::default().with_lambda(100.0).with_t_final(0.73);
    let opts = RunOptions { gauges: vec![0.0, 10.0], ..Default::default() };
    let ex = ExplicitSolver::new(grid.clone(), p.clone(), None).unwrap();
    let (_, rep) = run(&ex, &init, &opts).unwrap();
    assert_eq!(rep.steps.last().unwrap().t, 0.73);
    assert!(rep.steps.iter().all(|s| s.cfl <= 0.4 + 1e-12));
    assert_eq!(rep.gauges.len(), 2);
    for g in &rep.gauges {
        assert_eq!(g.times.len(), rep.step_count + 1);
        assert!(g.times.windows(2).all(|w| w[0] < w[1]));
    }
    assert!(rep.gauges[0].surface_elevation[0] > 1.99);
    let sgn = ClassicalSolver::new(grid.clone(), p.clone().with_cfl(0.9), None).unwrap();
    let (_, rep) = run(&sgn, &init.to_sw(), &opts).unwrap();
    assert_eq!(rep.steps.last().unwrap().t, 0.73);
    assert!(rep.kappa_min().is_none());
    let si = SiSolver::new(grid, p.with_cfl(2.0), None).unwrap();
    let (_, rep) = run(&si, &init, &opts).unwrap();
    assert!(rep.kappa_min().unwrap() > 0.0);
    assert!(rep.steps.iter().all(|s| s.mcfl <= 0.5 + 1e-12));
}

#[test]
fn explicit_scheme_beyond_its_limit_diverges() {
    let grid = make_grid(-200.0, 200.0, 500, 2).unwrap();
    let init = init_gaussian_bell(&grid);
    let p = SchemeParams::default().with_lambda(1000.0).with_cfl(1.2).with_t_final(5.0);
    let opts = RunOptions { blowup_depth: Some(10.0), ..Default::default() };
    let err = run(&ExplicitSolver::new(grid, p, None).unwrap(), &init, &opts).unwrap_err();
    assert!(matches!(err, SolverError::Diverged { .. } | SolverError::DryBed { .. } | SolverError::NonFinite { .. }), "{err}");
}
