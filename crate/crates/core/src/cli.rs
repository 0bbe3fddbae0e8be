//! The `riskpref` command line.
//!
//! ```text
//! riskpref calibrate --gamma 0.5 --sigma 2 --eta-low 0 --eta-high 1
//! riskpref curves    --gamma 0.5 --etas 0,1 --wealth-max 100 --out-dir out
//! riskpref simulate  --config experiment.toml --runs 10000 --threads 4
//! riskpref infer     --log out/decisions.csv --gamma 0.5
//! ```
//!
//! Outputs go to `--out-dir`, else `$RISKPREF_OUT_DIR`, else `./out`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::agent::{Agent, AgentSpec, DEFAULT_QUAD_NODES};
use crate::calibration::{calibrate_with, CalibrationOptions};
use crate::convergence::lambda_t_curve;
use crate::dynamics::GambleEnv;
use crate::error::{Error, Result};
use crate::io::{
    cdf_file_name, default_out_dir, load_config, read_decision_log, write_cdf_csv,
    write_curves_csv, write_decision_log, CurvesSpec, RunManifest, OUT_DIR_ENV,
};
use crate::simulation::{
    infer_eta_with, run_ensemble_with_threads, simulate_run,
    ExperimentConfig, Panel,
};
use crate::transform::TransformParam;

#[derive(Debug, Parser)]
#[command(name = "riskpref", version, about = "Repeated gambles under Yeo-Johnson dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the informative gamble (mu, c) of one dynamics.
    Calibrate(CalibrateArgs),
    /// Write indifference thresholds over a wealth grid.
    Curves(CurvesArgs),
    /// Run the ensemble experiment and write wealth snapshots.
    Simulate(SimulateArgs),
    /// Fit eta to a decision log.
    Infer(InferArgs),
}

fn parse_unit(s: &str) -> std::result::Result<TransformParam, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s}: {e}"))?;
    TransformParam::unit(v).map_err(|e| e.to_string())
}

fn parse_sigma(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s}: {e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("sigma = {v} must be positive"))
    }
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, value_parser = parse_unit)]
    pub gamma: TransformParam,
    #[arg(long, default_value = "2", value_parser = parse_sigma)]
    pub sigma: f64,
    #[arg(long, default_value = "0", value_parser = parse_unit)]
    pub eta_low: TransformParam,
    #[arg(long, default_value = "1", value_parser = parse_unit)]
    pub eta_high: TransformParam,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_NODES)]
    pub quad_nodes: usize,
}

/// Gamble parameters: calibrated unless both `--mu` and `--c` are given.
#[derive(Debug, Args)]
pub struct EnvArgs {
    #[arg(long, value_parser = parse_unit)]
    pub gamma: TransformParam,
    #[arg(long, default_value = "2", value_parser = parse_sigma)]
    pub sigma: f64,
    #[arg(long, requires = "c", allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, requires = "mu")]
    pub c: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_QUAD_NODES)]
    pub quad_nodes: usize,
}

impl EnvArgs {
    fn resolve(&self, etas: &[TransformParam]) -> Result<GambleEnv> {
        if let (Some(mu), Some(c)) = (self.mu, self.c) {
            return GambleEnv::new(self.gamma, mu, self.sigma, c);
        }
        let lo = etas.iter().copied().fold(etas[0], |a, b| if b < a { b } else { a });
        let hi = etas.iter().copied().fold(etas[0], |a, b| if b > a { b } else { a });
        let opts = CalibrationOptions {
            quad_nodes: self.quad_nodes,
            ..Default::default()
        };
        let r = calibrate_with(self.gamma, lo, hi, self.sigma, &opts)?;
        if !r.converged {
            return Err(Error::Calibration(format!(
                "no convergence after {} iterations",
                r.iterations
            )));
        }
        r.env(self.gamma, self.sigma)
    }
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long, value_delimiter = ',', default_value = "0,1", value_parser = parse_unit)]
    pub etas: Vec<TransformParam>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub wealth_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub wealth_max: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, default_value = "curves.csv")]
    pub file: String,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML experiment configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', value_parser = parse_unit)]
    pub gammas: Option<Vec<TransformParam>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_unit)]
    pub etas: Option<Vec<TransformParam>>,
    #[arg(long, value_parser = parse_sigma)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub runs: Option<u64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub initial_wealth: Option<f64>,
    /// Give every agent its own risky draws instead of sharing them.
    #[arg(long)]
    pub private_risky_draws: bool,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
    /// Worker threads; does not change any output.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write the decision log of every agent in this run.
    #[arg(long)]
    pub log_run: Option<u64>,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

impl SimulateArgs {
    pub fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = &self.gammas {
            cfg.gamma_list = v.clone();
        }
        if let Some(v) = &self.etas {
            cfg.eta_list = v.clone();
        }
        if let Some(v) = self.sigma {
            cfg.sigma = v;
        }
        if let Some(v) = self.runs {
            cfg.runs = v;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = &self.snapshots {
            cfg.snapshots = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.initial_wealth {
            cfg.initial_wealth = v;
        }
        if self.private_risky_draws {
            cfg.share_risky_draws = false;
        }
        if let Some(v) = self.quad_nodes {
            cfg.quad_nodes = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct InferArgs {
    /// Decision log with columns t, wealth_before, lambda, choice.
    #[arg(long)]
    pub log: PathBuf,
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1", value_parser = parse_unit)]
    pub etas: Vec<TransformParam>,
}

/// Runs one parsed invocation, writing its report to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Calibrate(a) => calibrate_cmd(&a, out),
        Command::Curves(a) => curves_cmd(&a, out),
        Command::Simulate(a) => simulate_cmd(&a, out),
        Command::Infer(a) => infer_cmd(&a, out),
    }
}

fn report(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text)
        .map_err(|e| Error::io(PathBuf::from("<stdout>"), e))
}

fn calibrate_cmd(a: &CalibrateArgs, out: &mut dyn Write) -> Result<()> {
    let opts = CalibrationOptions {
        max_iterations: a.max_iterations,
        tolerance: a.tolerance,
        quad_nodes: a.quad_nodes,
        ..Default::default()
    };
    let r = calibrate_with(a.gamma, a.eta_low, a.eta_high, a.sigma, &opts)?;
    report(
        out,
        format_args!(
            "mu = {}\nc = {}\niterations = {}\nconverged = {}\nlambda_p = {}\nlambda_q = {}\n",
            r.mu, r.c, r.iterations, r.converged, r.lambda_p, r.lambda_q
        ),
    )?;
    if !r.converged {
        return Err(Error::Calibration(format!(
            "no convergence after {} iterations (last c = {})",
            r.iterations, r.c
        )));
    }
    Ok(())
}

fn curves_cmd(a: &CurvesArgs, out: &mut dyn Write) -> Result<()> {
    if a.etas.is_empty() {
        return Err(Error::Empty("etas"));
    }
    if a.points < 2 || !(a.wealth_min < a.wealth_max) {
        return Err(Error::Config(
            "need at least 2 points and wealth_min < wealth_max".into(),
        ));
    }
    let env = a.env.resolve(&a.etas)?;
    let step = (a.wealth_max - a.wealth_min) / (a.points - 1) as f64;
    let grid: Vec<f64> = (0..a.points)
        .map(|i| {
            if i + 1 == a.points {
                a.wealth_max
            } else {
                a.wealth_min + step * i as f64
            }
        })
        .collect();
    let curves = a
        .etas
        .iter()
        .map(|&eta| {
            let agent = Agent::new(AgentSpec::new(eta, a.env.quad_nodes)?)?;
            lambda_t_curve(&grid, &agent, &env)
        })
        .collect::<Result<Vec<_>>>()?;

    let dir = default_out_dir(a.out_dir.as_deref());
    let csv_path = dir.join(&a.file);
    write_curves_csv(&csv_path, &curves)?;
    let mut manifest = RunManifest::new("curves");
    manifest.curves = Some(CurvesSpec {
        gamma: env.gamma().value(),
        sigma: env.sigma(),
        mu: env.mu(),
        c: env.c(),
        etas: a.etas.iter().map(|e| e.value()).collect(),
        wealth_min: a.wealth_min,
        wealth_max: a.wealth_max,
        points: a.points,
        quad_nodes: a.env.quad_nodes,
    });
    manifest.outputs.push(a.file.clone());
    let manifest_path = dir.join(manifest_name(&a.file));
    manifest.write(&manifest_path)?;
    report(
        out,
        format_args!(
            "mu = {}\nc = {}\nwrote {}\nwrote {}\n",
            env.mu(),
            env.c(),
            csv_path.display(),
            manifest_path.display()
        ),
    )
}

fn manifest_name(file: &str) -> String {
    let stem = Path::new(file)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "curves".into());
    format!("{stem}.manifest.toml")
}

/// File name of the decision log of one agent in one run.
pub fn decision_log_name(gamma: f64, eta: f64, run: u64) -> String {
    format!("decisions_gamma{gamma:.4}_eta{eta:.4}_run{run}.csv")
}

fn simulate_cmd(a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = a.config()?;
    if let Some(run) = a.log_run {
        if run >= cfg.runs {
            return Err(Error::Config(format!(
                "log run {run} does not exist (runs = {})",
                cfg.runs
            )));
        }
    }
    let result = run_ensemble_with_threads(&cfg, a.threads)?;
    let dir = default_out_dir(a.out_dir.as_deref());
    let mut manifest = RunManifest::new("simulate");
    manifest.master_seed = Some(cfg.master_seed);
    manifest.config = Some(cfg.clone());

    for d in &result.dynamics {
        manifest.calibrations.push(d.calibration);
        let mut times: Vec<usize> = d.cells.iter().map(|c| c.t).collect();
        times.dedup();
        for t in times {
            let name = cdf_file_name(d.gamma.value(), t);
            write_cdf_csv(&dir.join(&name), d, t)?;
            manifest.outputs.push(name);
        }
        if let Some(run) = a.log_run {
            let agents = cfg
                .eta_list
                .iter()
                .map(|&e| Agent::new(AgentSpec::new(e, cfg.quad_nodes)?))
                .collect::<Result<Vec<_>>>()?;
            let panel = Panel::exact(d.env, agents);
            let log = simulate_run(
                &panel,
                cfg.horizon,
                cfg.initial_wealth,
                cfg.master_seed,
                run,
                cfg.share_risky_draws,
            )?;
            for (eta, records) in cfg.eta_list.iter().zip(&log.decisions) {
                let name = decision_log_name(d.gamma.value(), eta.value(), run);
                write_decision_log(&dir.join(&name), records)?;
                manifest.outputs.push(name);
            }
        }
    }
    let manifest_path = dir.join("manifest.toml");
    manifest.write(&manifest_path)?;
    for c in &manifest.calibrations {
        report(
            out,
            format_args!("gamma = {}: mu = {}, c = {}\n", c.gamma, c.mu, c.c),
        )?;
    }
    report(
        out,
        format_args!(
            "wrote {} files and {}\n",
            manifest.outputs.len(),
            manifest_path.display()
        ),
    )
}

fn infer_cmd(a: &InferArgs, out: &mut dyn Write) -> Result<()> {
    if a.etas.is_empty() {
        return Err(Error::Empty("etas"));
    }
    let log = read_decision_log(&a.log)?;
    let env = a.env.resolve(&a.etas)?;
    let inf = infer_eta_with(&log, &env, &a.etas, a.env.quad_nodes)?;
    report(
        out,
        format_args!(
            "eta_hat = {}\nmismatches = {}\nambiguous = {}\n",
            inf.eta_hat, inf.mismatches, inf.ambiguous
        ),
    )?;
    for (eta, n) in &inf.mismatch_counts {
        report(out, format_args!("eta = {eta}: {n} mismatches\n"))?;
    }
    Ok(())
}
