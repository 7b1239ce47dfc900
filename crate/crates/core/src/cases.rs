//! Benchmark problems, error norms and energy diagnostics.

use std::f64::consts::{E, PI};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{
    assemble_velocity_mass, assemble_viscous_parts, element_rule, SkeletonQuadrature, StabParams, VectorField, WallBc,
};
use crate::linalg::{norm, SparseMatrix};
use crate::mesh::{gauss_rule, CartesianMesh};
use crate::solver::{
    newton_steady, project_solenoidal, solve_with_continuation, FlowProblem, GeneralizedAlpha, NewtonConfig,
    NewtonOutcome, TimeConfig,
};
use crate::space::{DivConformingPair, StateVector};

/// User-facing stabilization knobs; `gamma` overrides the value derived from `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stabilization {
    pub delta: f64,
    pub gamma: Option<f64>,
    pub c_nit: Option<f64>,
}

impl Default for Stabilization {
    fn default() -> Self {
        Self {
            delta: 1.0,
            gamma: None,
            c_nit: None,
        }
    }
}

impl Stabilization {
    pub fn unstabilized() -> Self {
        Self {
            gamma: Some(0.0),
            ..Self::default()
        }
    }

    pub fn params(&self, k_prime: usize, nu: f64) -> StabParams {
        let mut p = StabParams::new(k_prime, nu).with_delta(self.delta);
        if let Some(g) = self.gamma {
            p = p.with_gamma(g);
        }
        if let Some(c) = self.c_nit {
            p = p.with_c_nit(c);
        }
        p
    }
}

// x^2 (x - 1)^2 and its derivatives
fn bump(x: f64, n: usize) -> f64 {
    match n {
        0 => x * x * (x - 1.0) * (x - 1.0),
        1 => 4.0 * x * x * x - 6.0 * x * x + 2.0 * x,
        2 => 12.0 * x * x - 12.0 * x + 2.0,
        3 => 24.0 * x - 12.0,
        4 => 24.0,
        _ => 0.0,
    }
}

// e^x x^2 (x - 1)^2 and its derivatives by the Leibniz rule
fn exp_bump(x: f64, n: usize) -> f64 {
    const BINOM: [[f64; 4]; 4] = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
    x.exp() * (0..=n).map(|k| BINOM[n][k] * bump(x, k)).sum::<f64>()
}

/// Smooth steady solution on the unit square with zero boundary velocity.
///
/// The velocity is the curl of `psi = g(x) Q(y)` with `g = e^x x^2 (x-1)^2` and
/// `Q = y^2 (y-1)^2`. The pressure uses `e^x` and `x_2` where the published
/// closed form has typesetting slips.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub reynolds: f64,
}

impl ManufacturedCase {
    pub fn new(reynolds: f64) -> Self {
        Self { reynolds }
    }

    pub fn nu(&self) -> f64 {
        1.0 / self.reynolds
    }

    pub fn velocity(x: [f64; 2]) -> [f64; 2] {
        [exp_bump(x[0], 0) * bump(x[1], 1), -exp_bump(x[0], 1) * bump(x[1], 0)]
    }

    /// `g[i][j] = d u_i / d x_j`
    pub fn velocity_gradient(x: [f64; 2]) -> [[f64; 2]; 2] {
        let (a, b) = (x[0], x[1]);
        [
            [exp_bump(a, 1) * bump(b, 1), exp_bump(a, 0) * bump(b, 2)],
            [-exp_bump(a, 2) * bump(b, 0), -exp_bump(a, 1) * bump(b, 1)],
        ]
    }

    pub fn velocity_laplacian(x: [f64; 2]) -> [f64; 2] {
        let (a, b) = (x[0], x[1]);
        [
            exp_bump(a, 2) * bump(b, 1) + exp_bump(a, 0) * bump(b, 3),
            -exp_bump(a, 3) * bump(b, 0) - exp_bump(a, 1) * bump(b, 2),
        ]
    }

    fn pressure_poly(x: f64, s: f64) -> (f64, f64, f64) {
        let e = 456.0
            + x * x * (228.0 - 5.0 * s)
            + 2.0 * x * (-228.0 + s)
            + 2.0 * x.powi(3) * (-36.0 + s)
            + x.powi(4) * (12.0 + s);
        let e_x = 2.0 * x * (228.0 - 5.0 * s)
            + 2.0 * (-228.0 + s)
            + 6.0 * x * x * (-36.0 + s)
            + 4.0 * x.powi(3) * (12.0 + s);
        let e_s = -5.0 * x * x + 2.0 * x + 2.0 * x.powi(3) + x.powi(4);
        (e, e_x, e_s)
    }

    pub fn pressure(x: [f64; 2]) -> f64 {
        let s = x[1] * x[1] - x[1];
        let (e, _, _) = Self::pressure_poly(x[0], s);
        -424.0 + 156.0 * E + s * (-456.0 + x[0].exp() * e)
    }

    pub fn pressure_gradient(x: [f64; 2]) -> [f64; 2] {
        let s = x[1] * x[1] - x[1];
        let ds = 2.0 * x[1] - 1.0;
        let ex = x[0].exp();
        let (e, e_x, e_s) = Self::pressure_poly(x[0], s);
        [s * ex * (e + e_x), ds * (-456.0 + ex * e) + s * ex * e_s * ds]
    }

    /// `f = (u . grad) u + grad p - nu lap u`
    pub fn forcing(x: [f64; 2], nu: f64) -> [f64; 2] {
        let u = Self::velocity(x);
        let g = Self::velocity_gradient(x);
        let gp = Self::pressure_gradient(x);
        let lap = Self::velocity_laplacian(x);
        let mut f = [0.0; 2];
        for i in 0..2 {
            f[i] = u[0] * g[i][0] + u[1] * g[i][1] + gp[i] - nu * lap[i];
        }
        f
    }

    pub fn forcing_field(&self) -> VectorField {
        let nu = self.nu();
        Arc::new(move |x| Self::forcing(x, nu))
    }

    /// Forcing augmented by `grad sin(pi x y)`, which only changes the pressure.
    pub fn perturbed_forcing_field(&self) -> VectorField {
        let nu = self.nu();
        Arc::new(move |x| {
            let f = Self::forcing(x, nu);
            let c = PI * (PI * x[0] * x[1]).cos();
            [f[0] + c * x[1], f[1] + c * x[0]]
        })
    }

    pub fn problem(&self, n: usize, k_prime: usize, stab: &Stabilization) -> Result<FlowProblem> {
        let pair = DivConformingPair::uniform(n, k_prime, (0.0, 1.0))?;
        let params = stab.params(k_prime, self.nu());
        Ok(FlowProblem::new(pair, params, WallBc::no_slip(), Some(self.forcing_field())))
    }
}

/// Velocity error in the L2 norm and the H1 seminorm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub h1: f64,
}

/// Errors against an exact velocity, integrated with `k' + 3` Gauss points
/// per direction.
pub fn error_norms<V, G>(pair: &DivConformingPair, u: &[f64], exact: V, exact_grad: G) -> ErrorNorms
where
    V: Fn([f64; 2]) -> [f64; 2] + Sync,
    G: Fn([f64; 2]) -> [[f64; 2]; 2] + Sync,
{
    let rule = gauss_rule(pair.k_prime + 3).expect("supported rule");
    let (l2, h1) = (0..pair.mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let (mut l2, mut h1) = (0.0, 0.0);
            for (x, w) in pair.mesh.element_quadrature(e, &rule) {
                let (v, g) = pair.velocity_basis(e, x).field(u);
                let ve = exact(x);
                let ge = exact_grad(x);
                for i in 0..2 {
                    l2 += w * (v[i] - ve[i]).powi(2);
                    for j in 0..2 {
                        h1 += w * (g[i][j] - ge[i][j]).powi(2);
                    }
                }
            }
            (l2, h1)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    ErrorNorms {
        l2: l2.sqrt(),
        h1: h1.sqrt(),
    }
}

pub fn manufactured_errors(pair: &DivConformingPair, u: &[f64]) -> ErrorNorms {
    error_norms(pair, u, ManufacturedCase::velocity, ManufacturedCase::velocity_gradient)
}

/// Largest `|div u|` over the element quadrature points.
pub fn max_divergence(pair: &DivConformingPair, u: &[f64]) -> f64 {
    let rule = element_rule(pair);
    (0..pair.mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            pair.mesh
                .element_quadrature(e, &rule)
                .into_iter()
                .map(|(x, _)| {
                    let (_, g) = pair.velocity_basis(e, x).field(u);
                    (g[0][0] + g[1][1]).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// One row of the energy diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub kinetic_energy: f64,
    /// `-dE_k/dt` by finite differences of the series.
    pub eps_total: f64,
    pub eps_resolved: f64,
    pub eps_model: f64,
    pub div_max: f64,
}

/// Evaluates `E_k`, `eps_r`, `eps_m` for single states.
pub struct EnergyMeter {
    params: StabParams,
    skeleton: SkeletonQuadrature,
    mass: SparseMatrix,
    strain: SparseMatrix,
    volume: f64,
}

impl EnergyMeter {
    pub fn new(pair: &DivConformingPair, params: StabParams) -> Self {
        let strain = assemble_viscous_parts(pair, &params, false).volume;
        Self {
            params,
            skeleton: SkeletonQuadrature::new(pair),
            mass: assemble_velocity_mass(pair),
            strain,
            volume: pair.mesh.area(),
        }
    }

    /// `|u|^2 / (2V)`
    pub fn kinetic_energy(&self, u: &[f64]) -> f64 {
        self.mass.bilinear(u, u) / (2.0 * self.volume)
    }

    /// `(2 nu / V) |grad_s u|^2`
    pub fn resolved_dissipation(&self, u: &[f64]) -> f64 {
        self.strain.bilinear(u, u) / self.volume
    }

    /// `(1 / V) J(u, u)` with `eta` from `u`.
    pub fn model_dissipation(&self, u: &[f64]) -> f64 {
        self.skeleton.energy(u, u, &self.params) / self.volume
    }

    /// `|grad_s u|_{L2}`
    pub fn strain_norm(&self, u: &[f64]) -> f64 {
        (self.strain.bilinear(u, u) / (2.0 * self.params.nu)).sqrt()
    }
}

/// Diagnostics along a history of states with uniform time step. The total
/// dissipation uses centered differences inside and second-order one-sided
/// differences at the ends.
pub fn energy_and_dissipation(
    pair: &DivConformingPair,
    history: &[StateVector],
    params: &StabParams,
) -> Result<Vec<DiagnosticsRecord>> {
    if history.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "dissipation needs at least 3 states, got {}",
            history.len()
        )));
    }
    let dt = history[1].time - history[0].time;
    if !(dt > 0.0) || history.windows(2).any(|w| ((w[1].time - w[0].time) - dt).abs() > 1e-9 * dt.max(1.0)) {
        return Err(Error::InsufficientData("state history must have a uniform positive time step".into()));
    }
    let meter = EnergyMeter::new(pair, *params);
    let rows: Vec<(f64, f64, f64, f64)> = history
        .iter()
        .map(|s| {
            (
                meter.kinetic_energy(&s.u),
                meter.resolved_dissipation(&s.u),
                meter.model_dissipation(&s.u),
                max_divergence(pair, &s.u),
            )
        })
        .collect();
    let ek: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let eps = dissipation_from_energy(&ek, dt)?;
    Ok(history
        .iter()
        .zip(rows)
        .zip(eps)
        .map(|((s, (e, er, em, d)), et)| DiagnosticsRecord {
            time: s.time,
            kinetic_energy: e,
            eps_total: et,
            eps_resolved: er,
            eps_model: em,
            div_max: d,
        })
        .collect())
}

/// `-dE/dt` from a uniformly sampled series.
pub fn dissipation_from_energy(ek: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = ek.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("dissipation needs at least 3 samples, got {n}")));
    }
    let mut eps = vec![0.0; n];
    eps[0] = -(-3.0 * ek[0] + 4.0 * ek[1] - ek[2]) / (2.0 * dt);
    for i in 1..n - 1 {
        eps[i] = -(ek[i + 1] - ek[i - 1]) / (2.0 * dt);
    }
    eps[n - 1] = -(3.0 * ek[n - 1] - 4.0 * ek[n - 2] + ek[n - 3]) / (2.0 * dt);
    Ok(eps)
}

/// Convergence table row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub l2: f64,
    pub l2_order: Option<f64>,
    pub h1: f64,
    pub h1_order: Option<f64>,
    pub iterations: usize,
    pub div_max: f64,
}

/// `log2(e_coarse / e_fine)` for meshes halved in size.
pub fn observed_order(coarse: f64, fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (coarse / fine).ln() / (h_coarse / h_fine).ln()
}

/// Convergence table plus the solution on the last mesh.
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub last_pair: DivConformingPair,
    pub last_state: StateVector,
}

/// Steady manufactured solves on `n x n` meshes.
pub fn run_convergence_study(
    k_prime: usize,
    stab: &Stabilization,
    meshes: &[usize],
    reynolds: f64,
    cfg: &NewtonConfig,
) -> Result<ConvergenceStudy> {
    if meshes.is_empty() {
        return Err(Error::Parameter("convergence study needs at least one mesh".into()));
    }
    let case = ManufacturedCase::new(reynolds);
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(meshes.len());
    let mut last = None;
    for &n in meshes {
        let (problem, out) = solve_with_continuation(
            |re| {
                ManufacturedCase::new(re)
                    .problem(n, k_prime, stab)
                    .expect("validated discretization")
            },
            case.reynolds,
            cfg,
        )
        .map_err(|e| Error::Usage(format!("convergence study failed on the {n}x{n} mesh: {e}")))?;
        let err = manufactured_errors(&problem.pair, &out.state.u);
        let h = problem.pair.mesh.h();
        let (l2_order, h1_order) = match rows.last() {
            Some(prev) => (
                Some(observed_order(prev.l2, err.l2, prev.h, h)),
                Some(observed_order(prev.h1, err.h1, prev.h, h)),
            ),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            n,
            h,
            l2: err.l2,
            l2_order,
            h1: err.h1,
            h1_order,
            iterations: out.iterations,
            div_max: max_divergence(&problem.pair, &out.state.u),
        });
        last = Some((problem.pair, out.state));
    }
    let (last_pair, last_state) = last.expect("at least one mesh");
    Ok(ConvergenceStudy {
        rows,
        last_pair,
        last_state,
    })
}

/// Reynolds sweep row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustnessRow {
    pub reynolds: f64,
    pub l2: f64,
    pub h1: f64,
    pub iterations: usize,
}

/// Manufactured solves on one mesh over increasing Reynolds numbers, each
/// warm-started from the previous one.
pub fn run_reynolds_robustness(
    k_prime: usize,
    n: usize,
    reynolds: &[f64],
    stab: &Stabilization,
    cfg: &NewtonConfig,
) -> Result<Vec<RobustnessRow>> {
    let mut rows = Vec::with_capacity(reynolds.len());
    let mut state: Option<StateVector> = None;
    for &re in reynolds {
        let problem = ManufacturedCase::new(re).problem(n, k_prime, stab)?;
        let out = match &state {
            Some(s) => newton_steady(&problem, s, cfg),
            None => newton_steady(&problem, &StateVector::zeros(&problem.pair), cfg),
        };
        // fall back on the ladder if the warm start is too far away
        let out = match out {
            Ok(o) => o,
            Err(Error::Continuation { .. }) => {
                solve_with_continuation(
                    |r| ManufacturedCase::new(r).problem(n, k_prime, stab).expect("validated discretization"),
                    re,
                    cfg,
                )?
                .1
            }
            Err(e) => return Err(e),
        };
        let err = manufactured_errors(&problem.pair, &out.state.u);
        rows.push(RobustnessRow {
            reynolds: re,
            l2: err.l2,
            h1: err.h1,
            iterations: out.iterations,
        });
        state = Some(out.state);
    }
    Ok(rows)
}

/// Base and gradient-perturbed forcing on the same discretization.
#[derive(Clone, Debug)]
pub struct PressureRobustness {
    pub base: ErrorNorms,
    pub perturbed: ErrorNorms,
    pub base_u: Vec<f64>,
    pub perturbed_u: Vec<f64>,
}

impl PressureRobustness {
    pub fn l2_abs_diff(&self) -> f64 {
        (self.base.l2 - self.perturbed.l2).abs()
    }

    pub fn h1_abs_diff(&self) -> f64 {
        (self.base.h1 - self.perturbed.h1).abs()
    }

    /// `|u_base - u_perturbed| / |u_base|` over the coefficient vectors.
    pub fn coefficient_rel_diff(&self) -> f64 {
        let d: Vec<f64> = self.base_u.iter().zip(&self.perturbed_u).map(|(a, b)| a - b).collect();
        norm(&d) / norm(&self.base_u)
    }
}

pub fn run_pressure_robustness(
    k_prime: usize,
    n: usize,
    reynolds: f64,
    stab: &Stabilization,
    cfg: &NewtonConfig,
) -> Result<PressureRobustness> {
    let case = ManufacturedCase::new(reynolds);
    let base = case.problem(n, k_prime, stab)?;
    let pair = base.pair.clone();
    let params = base.params;
    let perturbed = FlowProblem::new(pair, params, WallBc::no_slip(), Some(case.perturbed_forcing_field()));
    let zero = StateVector::zeros(&base.pair);
    let a = newton_steady(&base, &zero, cfg)?;
    let b = newton_steady(&perturbed, &zero, cfg)?;
    Ok(PressureRobustness {
        base: manufactured_errors(&base.pair, &a.state.u),
        perturbed: manufactured_errors(&perturbed.pair, &b.state.u),
        base_u: a.state.u,
        perturbed_u: b.state.u,
    })
}

/// Lid-driven cavity on the unit square: `u_D = (1, 0)` on the top edge,
/// no-slip elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityCase {
    pub reynolds: f64,
}

impl CavityCase {
    pub fn lid_data() -> VectorField {
        Arc::new(|x| if x[1] >= 1.0 - 1e-12 { [1.0, 0.0] } else { [0.0, 0.0] })
    }

    pub fn problem(&self, n: usize, k_prime: usize, stab: &Stabilization) -> Result<FlowProblem> {
        let pair = DivConformingPair::uniform(n, k_prime, (0.0, 1.0))?;
        let params = stab.params(k_prime, 1.0 / self.reynolds);
        Ok(FlowProblem::new(pair, params, WallBc::Nitsche(Self::lid_data()), None))
    }
}

/// Velocity samples along the two centerlines.
#[derive(Clone, Debug, PartialEq)]
pub struct Centerlines {
    /// `(y, u_1(0.5, y))`
    pub vertical: Vec<(f64, f64)>,
    /// `(x, u_2(x, 0.5))`
    pub horizontal: Vec<(f64, f64)>,
}

pub fn sample_centerlines(pair: &DivConformingPair, u: &[f64], npts: usize) -> Result<Centerlines> {
    let ((x0, x1), (y0, y1)) = pair.mesh.extent();
    let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let mut vertical = Vec::with_capacity(npts);
    let mut horizontal = Vec::with_capacity(npts);
    for i in 0..npts {
        let t = i as f64 / (npts - 1) as f64;
        let y = y0 + t * (y1 - y0);
        let x = x0 + t * (x1 - x0);
        vertical.push((y, pair.eval_velocity(u, [xm, y], 0)?.value[0]));
        horizontal.push((x, pair.eval_velocity(u, [x, ym], 0)?.value[1]));
    }
    Ok(Centerlines { vertical, horizontal })
}

/// Converged cavity flow and its summary quantities.
pub struct CavityResult {
    pub problem: FlowProblem,
    pub outcome: NewtonOutcome,
    pub centerlines: Centerlines,
    pub skeleton_energy: f64,
    pub strain_norm: f64,
    pub div_max: f64,
}

pub const CENTERLINE_POINTS: usize = 257;

pub fn run_cavity(
    k_prime: usize,
    n: usize,
    reynolds: f64,
    stab: &Stabilization,
    cfg: &NewtonConfig,
) -> Result<CavityResult> {
    let (problem, outcome) = solve_with_continuation(
        |re| CavityCase { reynolds: re }.problem(n, k_prime, stab).expect("validated discretization"),
        reynolds,
        cfg,
    )?;
    let u = &outcome.state.u;
    let meter = EnergyMeter::new(&problem.pair, problem.params);
    Ok(CavityResult {
        centerlines: sample_centerlines(&problem.pair, u, CENTERLINE_POINTS)?,
        skeleton_energy: problem.skeleton_energy(u, u),
        strain_norm: meter.strain_norm(u),
        div_max: max_divergence(&problem.pair, u),
        problem,
        outcome,
    })
}

/// Two-dimensional Taylor-Green vortex on `[0, 2 pi]^2` with free-slip walls,
/// which the exact decaying solution satisfies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorGreenCase {
    pub reynolds: f64,
}

impl TaylorGreenCase {
    pub fn initial_velocity(x: [f64; 2]) -> [f64; 2] {
        [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin()]
    }

    /// Exact kinetic energy per unit volume, `E_k(0) exp(-4 nu t)`.
    pub fn exact_energy(&self, t: f64) -> f64 {
        0.25 * (-4.0 * t / self.reynolds).exp()
    }

    pub fn problem(&self, n: usize, k_prime: usize, stab: &Stabilization) -> Result<FlowProblem> {
        let mesh = CartesianMesh::uniform(n, n, (0.0, 2.0 * PI), (0.0, 2.0 * PI))?;
        let pair = DivConformingPair::new(&mesh, k_prime)?;
        let params = stab.params(k_prime, 1.0 / self.reynolds);
        Ok(FlowProblem::new(pair, params, WallBc::FreeSlip, None))
    }
}

/// Time history of an unsteady run.
pub struct TaylorGreenResult {
    pub problem: FlowProblem,
    pub history: Vec<StateVector>,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

pub fn run_taylor_green(
    k_prime: usize,
    n: usize,
    reynolds: f64,
    stab: &Stabilization,
    time: &TimeConfig,
) -> Result<TaylorGreenResult> {
    let case = TaylorGreenCase { reynolds };
    let problem = case.problem(n, k_prime, stab)?;
    let u0 = project_solenoidal(&problem.pair, &(Arc::new(TaylorGreenCase::initial_velocity) as VectorField))?;
    let integrator = GeneralizedAlpha::new(&problem, time.clone())?;
    let mut state = integrator.initialize(u0, 0.0)?;
    let mut history = vec![state.to_state()];
    for _ in 0..time.num_steps() {
        state = integrator.step(&state)?;
        history.push(state.to_state());
    }
    let diagnostics = energy_and_dissipation(&problem.pair, &history, &problem.params)?;
    Ok(TaylorGreenResult {
        problem,
        history,
        diagnostics,
    })
}
