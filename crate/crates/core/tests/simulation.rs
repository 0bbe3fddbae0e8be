use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use riskpref::agent::Choice;
use riskpref::calibration::calibrate;
use riskpref::simulation::{
    empirical_cdf, infer_eta, run_ensemble, simulate_run, CalibrationOverride, CalibrationSource,
    ExperimentConfig, Panel,
};
use riskpref::{Agent, TransformParam};

fn tp(v: f64) -> TransformParam {
    TransformParam::new(v).unwrap()
}

fn grid() -> Vec<TransformParam> {
    [0.0, 0.25, 0.5, 0.75, 1.0].map(tp).to_vec()
}

fn small() -> ExperimentConfig {
    ExperimentConfig {
        runs: 30,
        horizon: 12,
        snapshots: vec![1, 12],
        master_seed: 77,
        quad_nodes: 32,
        ..Default::default()
    }
}

#[test]
fn empirical_cdf_examples() {
    let s = [1.0, 2.0, 3.0];
    assert_eq!(empirical_cdf(&s, 0.0).unwrap(), 0.0);
    assert_eq!(empirical_cdf(&s, 3.0).unwrap(), 1.0);
    assert_eq!(empirical_cdf(&s, 7.0).unwrap(), 1.0);
    assert!((empirical_cdf(&s, 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!(empirical_cdf(&[], 1.0).is_err());
}

#[test]
fn same_seed_gives_identical_results() {
    let a = run_ensemble(&small()).unwrap();
    let b = run_ensemble(&small()).unwrap();
    assert_eq!(a, b);
    let other = run_ensemble(&ExperimentConfig {
        master_seed: 78,
        ..small()
    })
    .unwrap();
    assert_ne!(a, other);
}

#[test]
fn cells_cover_every_agent_and_snapshot() {
    let res = run_ensemble(&small()).unwrap();
    assert_eq!(res.dynamics.len(), 5);
    for d in &res.dynamics {
        assert_eq!(d.cells.len(), 10);
        for cell in &d.cells {
            assert_eq!(cell.sorted.len(), 30);
            assert!(cell.sorted.windows(2).all(|w| w[0] <= w[1]));
            let mut resorted = cell.by_run.clone();
            resorted.sort_by(f64::total_cmp);
            assert_eq!(resorted, cell.sorted);
        }
    }
}

#[test]
fn multiplicative_cell_carries_three_quarter_calibration() {
    let res = run_ensemble(&small()).unwrap();
    let d1 = res.dynamics(1.0).unwrap();
    let d075 = res.dynamics(0.75).unwrap();
    assert_eq!(d1.calibration.source, CalibrationSource::Reused { from_gamma: 0.75 });
    assert_eq!((d1.calibration.mu, d1.calibration.c), (d075.calibration.mu, d075.calibration.c));
    assert_eq!(d1.env.gamma(), tp(1.0));
}

#[test]
fn everyone_starts_from_zero_and_step_one_matches_first_payoff() {
    let cfg = small();
    let res = run_ensemble(&cfg).unwrap();
    let d = res.dynamics(0.5).unwrap();
    let agents: Vec<Agent> = cfg.eta_list.iter().map(|&e| Agent::with_eta(e).unwrap()).collect();
    let panel = Panel::exact(d.env, agents);
    for run in [0, 13, 29] {
        let log = simulate_run(&panel, cfg.horizon, 0.0, cfg.master_seed, run, true).unwrap();
        for (i, traj) in log.trajectories.iter().enumerate() {
            assert_eq!(traj.wealth()[0], 0.0);
            let cell = res.cell(0.5, cfg.eta_list[i].value(), 1).unwrap();
            assert_eq!(traj.wealth()[1], cell.by_run[run as usize]);
        }
    }
}

#[test]
fn payoffs_follow_the_documented_streams() {
    // stream (run << 16) of the master seed yields (u, z) for every step
    let env = calibrate(tp(0.5), tp(0.0), tp(1.0), 2.0).unwrap().env(tp(0.5), 2.0).unwrap();
    let agents: Vec<Agent> = grid().into_iter().map(|e| Agent::with_eta(e).unwrap()).collect();
    let panel = Panel::exact(env, agents);
    let (seed, run) = (5, 3);
    let log = simulate_run(&panel, 40, 0.0, seed, run, true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run << 16);
    for t in 0..40 {
        let u: f64 = rng.random();
        let z: f64 = rng.sample(StandardNormal);
        let lambda = env.safe_payoff_from_uniform(u);
        let risky = env.risky_payoff_from_normal(z);
        for agent_log in &log.decisions {
            let rec = agent_log[t];
            assert_eq!(rec.t, t);
            assert_eq!(rec.lambda, lambda);
            let expected = match rec.choice {
                Choice::Safe => lambda,
                Choice::Risky => risky,
            };
            assert_eq!(rec.payoff_applied, expected);
        }
    }
}

#[test]
fn override_replaces_calibration() {
    let cfg = ExperimentConfig {
        gamma_list: vec![tp(0.5), tp(1.0)],
        calibration_override: Some(CalibrationOverride { mu: -0.1, c: 0.1 }),
        ..small()
    };
    let res = run_ensemble(&cfg).unwrap();
    for d in &res.dynamics {
        assert_eq!(d.calibration.source, CalibrationSource::Override);
        assert_eq!((d.env.mu(), d.env.c()), (-0.1, 0.1));
    }
}

#[test]
fn inference_recovers_generating_agent() {
    let env = calibrate(tp(0.5), tp(0.0), tp(1.0), 2.0).unwrap().env(tp(0.5), 2.0).unwrap();
    let agents: Vec<Agent> = grid().into_iter().map(|e| Agent::with_eta(e).unwrap()).collect();
    let panel = Panel::exact(env, agents);
    let log = simulate_run(&panel, 300, 0.0, 1, 0, true).unwrap();
    let fit = infer_eta(&log.decisions[2], &env, &grid()).unwrap();
    assert_eq!(fit.eta_hat, tp(0.5));
    assert_eq!(fit.mismatches, 0);
    assert!(!fit.ambiguous);
}

#[test]
fn wealth_blowup_is_reported() {
    // payoffs of order sigma^2 = 1.6e5 overflow multiplicative wealth at once
    let cfg = ExperimentConfig {
        gamma_list: vec![tp(1.0)],
        eta_list: vec![tp(1.0)],
        sigma: 400.0,
        calibration_override: Some(CalibrationOverride { mu: 0.0, c: 1.0 }),
        runs: 4,
        horizon: 50,
        snapshots: vec![50],
        ..Default::default()
    };
    let err = run_ensemble(&cfg).unwrap_err().to_string();
    assert!(err.contains("gamma = 1") && err.contains("run"), "{err}");
}
