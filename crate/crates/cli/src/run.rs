//! Executes a resolved configuration and writes its artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use divspline::cases::{
    run_cavity, run_convergence_study, run_pressure_robustness, run_reynolds_robustness, run_taylor_green,
    TaylorGreenCase,
};
use divspline::output::{write_vtk, CsvTable};
use divspline::solver::{NewtonConfig, TimeConfig};
use thiserror::Error;
use toml::{Table, Value};

use crate::config::{CaseConfig, Command};

/// `<crate version>+g<git describe>` when built from a checkout.
pub const VERSION: &str = env!("DIVSPLINE_VERSION");

pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("stage `{stage}` failed: {source}")]
    Solve {
        stage: String,
        #[source]
        source: divspline::Error,
    },
    #[error("stage `output` failed: cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
    #[error("stage `threads` failed: {0}")]
    Threads(String),
}

impl RunError {
    pub fn stage(&self) -> &str {
        match self {
            RunError::Solve { stage, .. } => stage,
            RunError::Output { .. } => "output",
            RunError::Threads(_) => "threads",
        }
    }
}

fn at(stage: impl Into<String>) -> impl FnOnce(divspline::Error) -> RunError {
    let stage = stage.into();
    move |source| RunError::Solve { stage, source }
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    /// Artifacts in the order they were written, manifest last.
    pub files: Vec<PathBuf>,
    pub results: Table,
    pub wall_time: f64,
}

/// Collects artifacts under the output directory.
struct Artifacts {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self, RunError> {
        fs::create_dir_all(dir).map_err(|e| RunError::Output {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn output_error(path: PathBuf) -> impl FnOnce(divspline::Error) -> RunError {
        move |e| RunError::Output {
            path,
            message: e.to_string(),
        }
    }

    fn csv(&mut self, name: &str, table: &CsvTable) -> Result<(), RunError> {
        let path = self.dir.join(name);
        table.write(&path).map_err(Self::output_error(path.clone()))?;
        self.files.push(path);
        Ok(())
    }

    fn vtk(
        &mut self,
        name: &str,
        pair: &divspline::DivConformingPair,
        state: &divspline::StateVector,
    ) -> Result<(), RunError> {
        let path = self.dir.join(name);
        write_vtk(&path, pair, state).map_err(Self::output_error(path.clone()))?;
        self.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| RunError::Output {
            path: path.clone(),
            message: e.to_string(),
        })?;
        self.files.push(path);
        Ok(())
    }
}

/// Reynolds number as it appears in file names: `1000`, `0.5`.
fn re_label(re: f64) -> String {
    format!("{re}").replace('.', "p")
}

fn float_array(values: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(values.into_iter().map(Value::Float).collect())
}

/// Runs `cfg` on a dedicated thread pool and writes CSVs, field dumps and the manifest.
pub fn run(cfg: &CaseConfig) -> Result<RunSummary, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| RunError::Threads(e.to_string()))?;
    let start = Instant::now();
    let mut out = Artifacts::new(&cfg.out)?;
    let results = pool.install(|| execute(cfg, &mut out))?;
    let wall_time = start.elapsed().as_secs_f64();

    let mut manifest = Table::new();
    manifest.insert("config".into(), Value::Table(cfg.to_table()));
    let mut run = Table::new();
    run.insert("version".into(), Value::String(VERSION.into()));
    run.insert("wall_time_s".into(), Value::Float(wall_time));
    manifest.insert("run".into(), Value::Table(run));
    let p = cfg.stab_params();
    let mut derived = Table::new();
    derived.insert("alpha_prime".into(), Value::Integer(cfg.k_prime as i64 - 1));
    derived.insert("gamma".into(), Value::Float(p.gamma));
    derived.insert("c_nit".into(), Value::Float(p.c_nit));
    derived.insert("nu".into(), float_array(cfg.re.iter().map(|r| 1.0 / r)));
    manifest.insert("derived".into(), Value::Table(derived));
    manifest.insert("results".into(), Value::Table(results.clone()));
    let text = toml::to_string(&manifest).map_err(|e| RunError::Output {
        path: cfg.out.join(MANIFEST_FILE),
        message: e.to_string(),
    })?;
    out.text(MANIFEST_FILE, &text)?;

    Ok(RunSummary {
        out_dir: out.dir,
        files: out.files,
        results,
        wall_time,
    })
}

fn execute(cfg: &CaseConfig, out: &mut Artifacts) -> Result<Table, RunError> {
    let stab = cfg.stabilization();
    let newton = NewtonConfig::default();
    let mut results = Table::new();
    match cfg.command {
        Command::Convergence => {
            let re = cfg.re[0];
            let study = run_convergence_study(cfg.k_prime, &stab, &cfg.mesh, re, &newton).map_err(at("convergence"))?;
            let mut csv = CsvTable::new(&["h", "L2", "L2order", "H1", "H1order"]);
            for r in &study.rows {
                csv.push(vec![Some(r.h), Some(r.l2), r.l2_order, Some(r.h1), r.h1_order]);
            }
            out.csv("convergence.csv", &csv)?;
            let finest = *cfg.mesh.last().expect("validated mesh list");
            out.vtk(&format!("convergence_n{finest}.vtk"), &study.last_pair, &study.last_state)?;
            results.insert("l2".into(), float_array(study.rows.iter().map(|r| r.l2)));
            results.insert("h1".into(), float_array(study.rows.iter().map(|r| r.h1)));
            results.insert("div_max".into(), float_array(study.rows.iter().map(|r| r.div_max)));
        }
        Command::Robustness => {
            let n = cfg.mesh[0];
            let rows = run_reynolds_robustness(cfg.k_prime, n, &cfg.re, &stab, &newton).map_err(at("robustness"))?;
            let mut csv = CsvTable::new(&["Re", "L2", "H1", "iterations"]);
            for r in &rows {
                csv.push_values(&[r.reynolds, r.l2, r.h1, r.iterations as f64]);
            }
            out.csv("robustness.csv", &csv)?;
            let max = rows.iter().map(|r| r.l2).fold(0.0, f64::max);
            let min = rows.iter().map(|r| r.l2).fold(f64::INFINITY, f64::min);
            results.insert("l2".into(), float_array(rows.iter().map(|r| r.l2)));
            results.insert("l2_max_over_min".into(), Value::Float(max / min));
        }
        Command::PressureRobustness => {
            let n = cfg.mesh[0];
            let r = run_pressure_robustness(cfg.k_prime, n, cfg.re[0], &stab, &newton)
                .map_err(at("pressure-robustness"))?;
            let mut csv = CsvTable::new(&["L2_base", "L2_perturbed", "absDiff"]);
            csv.push_values(&[r.base.l2, r.perturbed.l2, r.l2_abs_diff()]);
            out.csv("pressure_robustness.csv", &csv)?;
            results.insert("l2_abs_diff".into(), Value::Float(r.l2_abs_diff()));
            results.insert("h1_abs_diff".into(), Value::Float(r.h1_abs_diff()));
            results.insert("coefficient_rel_diff".into(), Value::Float(r.coefficient_rel_diff()));
        }
        Command::Cavity => {
            let n = cfg.mesh[0];
            let mut runs = Vec::new();
            for &re in &cfg.re {
                let label = re_label(re);
                let res = run_cavity(cfg.k_prime, n, re, &stab, &newton).map_err(at(format!("cavity Re={re}")))?;
                let c = &res.centerlines;
                let mut csv = CsvTable::new(&["y", "u1", "x", "u2"]);
                for (v, h) in c.vertical.iter().zip(&c.horizontal) {
                    csv.push_values(&[v.0, v.1, h.0, h.1]);
                }
                out.csv(&format!("centerlines_re{label}.csv"), &csv)?;
                out.vtk(&format!("cavity_re{label}.vtk"), &res.problem.pair, &res.outcome.state)?;
                let mut t = Table::new();
                t.insert("reynolds".into(), Value::Float(re));
                t.insert("iterations".into(), Value::Integer(res.outcome.iterations as i64));
                t.insert("residual".into(), Value::Float(res.outcome.residual));
                t.insert("skeleton_energy".into(), Value::Float(res.skeleton_energy));
                t.insert("strain_norm".into(), Value::Float(res.strain_norm));
                t.insert("div_max".into(), Value::Float(res.div_max));
                runs.push(Value::Table(t));
            }
            results.insert("cavity".into(), Value::Array(runs));
        }
        Command::TaylorGreen2d => {
            let n = cfg.mesh[0];
            let re = cfg.re[0];
            let time = TimeConfig::new(cfg.dt, cfg.t_end, cfg.rho_inf);
            let res = run_taylor_green(cfg.k_prime, n, re, &stab, &time).map_err(at("taylor-green-2d"))?;
            let mut csv = CsvTable::new(&["t", "Ek", "eps", "eps_r", "eps_m", "divMax"]);
            for d in &res.diagnostics {
                csv.push_values(&[d.time, d.kinetic_energy, d.eps_total, d.eps_resolved, d.eps_model, d.div_max]);
            }
            out.csv("diagnostics.csv", &csv)?;
            let last = res.history.last().expect("at least the initial state");
            out.vtk("taylor_green_final.vtk", &res.problem.pair, last)?;
            let d = &res.diagnostics;
            let peak = d.iter().map(|r| r.eps_total).fold(0.0, f64::max);
            let imbalance = d
                .iter()
                .map(|r| (r.eps_total - r.eps_resolved - r.eps_model).abs())
                .fold(0.0, f64::max);
            let case = TaylorGreenCase { reynolds: re };
            results.insert("steps".into(), Value::Integer(res.history.len() as i64 - 1));
            results.insert("ek_initial".into(), Value::Float(d[0].kinetic_energy));
            results.insert("ek_final".into(), Value::Float(d[d.len() - 1].kinetic_energy));
            results.insert("ek_final_exact".into(), Value::Float(case.exact_energy(last.time)));
            results.insert("balance_error_over_peak".into(), Value::Float(imbalance / peak));
        }
    }
    Ok(results)
}
