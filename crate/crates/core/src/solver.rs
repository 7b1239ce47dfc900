//! Saddle-point solves, steady Newton iteration with Reynolds continuation,
//! and generalized-alpha time stepping.
//!
//! All solves use a direct sparse LU of the bordered system
//!
//! ```text
//! [ K  -B^T  0 ] [u]   [r_u]
//! [ B   0    m ] [p] = [r_p]
//! [ 0   m^T  0 ] [l]   [ 0 ]
//! ```
//!
//! where `m` is the pressure-mean row. The multiplier `l` absorbs the one
//! dimensional incompatibility of `r_p` and pins the pressure mean to zero.
//! Normal-trace velocity DOFs are homogeneous and eliminated.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::forms::{
    assemble_body_force, assemble_divergence, assemble_load, assemble_velocity_mass, assemble_viscous_nitsche,
    pressure_mean_row, AssembledSystem, ConvectionQuadrature, SkeletonQuadrature, StabParams, VectorField, WallBc,
};
use crate::linalg::{axpy, norm, Coo, LuCache, SparseLu, SparseMatrix};
use crate::space::{DivConformingPair, StateVector};

/// Result of a bordered saddle-point solve.
#[derive(Clone, Debug)]
pub struct SaddleSolution {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub multiplier: f64,
    /// `|rhs - A x| / |rhs|` of the bordered system after refinement.
    pub relative_residual: f64,
}

struct Bordered {
    matrix: SparseMatrix,
    nu: usize,
    np: usize,
}

fn bordered_matrix(system: &AssembledSystem, fixed: &[bool]) -> Bordered {
    let nu = system.k_uu.nrows();
    let np = system.b.nrows();
    let mut coo = Coo::new(nu + np + 1, nu + np + 1);
    for (r, c, v) in system.k_uu.iter() {
        if !fixed[r] && !fixed[c] {
            coo.push(r, c, v);
        }
    }
    for (q, c, v) in system.b.iter() {
        if !fixed[c] {
            coo.push(nu + q, c, v);
            coo.push(c, nu + q, -v);
        }
    }
    for (q, &m) in system.mean_constraint.iter().enumerate() {
        coo.push(nu + q, nu + np, m);
        coo.push(nu + np, nu + q, m);
    }
    for (i, &f) in fixed.iter().enumerate() {
        if f {
            coo.push(i, i, 1.0);
        }
    }
    Bordered {
        matrix: coo.build(),
        nu,
        np,
    }
}

fn fixed_mask(n: usize, fixed: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &d in fixed {
        mask[d] = true;
    }
    mask
}

/// A factored bordered system, reusable for several right-hand sides.
pub struct SaddleFactor {
    bordered: Bordered,
    mask: Vec<bool>,
    lu: SparseLu,
}

impl SaddleFactor {
    /// Factors the bordered matrix of `system` with the DOFs in `fixed` eliminated.
    pub fn new(system: &AssembledSystem, fixed: &[usize], cache: Option<&LuCache>) -> Result<Self> {
        let mask = fixed_mask(system.k_uu.nrows(), fixed);
        let bordered = bordered_matrix(system, &mask);
        let lu = match cache {
            Some(c) => c.factor(&bordered.matrix)?,
            None => SparseLu::new(&bordered.matrix)?,
        };
        Ok(Self { bordered, mask, lu })
    }

    /// Solves with right-hand sides `rhs_u`, `rhs_p` (fixed rows are zeroed).
    pub fn solve(&self, rhs_u: &[f64], rhs_p: &[f64]) -> Result<SaddleSolution> {
        let matrix = &self.bordered.matrix;
        let mut rhs = Vec::with_capacity(matrix.nrows());
        rhs.extend(rhs_u.iter().zip(&self.mask).map(|(&r, &f)| if f { 0.0 } else { r }));
        rhs.extend_from_slice(rhs_p);
        rhs.push(0.0);

        let mut x = self.lu.solve(&rhs)?;
        let rhs_norm = norm(&rhs);
        let residual = |x: &[f64]| {
            let ax = matrix.mul_vec(x);
            rhs.iter().zip(ax).map(|(b, a)| b - a).collect::<Vec<_>>()
        };
        let mut r = residual(&x);
        for _ in 0..3 {
            if norm(&r) <= 1e-14 * rhs_norm {
                break;
            }
            let dx = self.lu.solve(&r)?;
            axpy(&mut x, 1.0, &dx);
            r = residual(&x);
        }
        let relative_residual = if rhs_norm > 0.0 { norm(&r) / rhs_norm } else { norm(&r) };
        if !(relative_residual < 1e-6) {
            return Err(Error::Singular(format!(
                "saddle system of size {} solved with relative residual {relative_residual:.3e}",
                matrix.nrows()
            )));
        }
        let (nu, np) = (self.bordered.nu, self.bordered.np);
        Ok(SaddleSolution {
            u: x[..nu].to_vec(),
            p: x[nu..nu + np].to_vec(),
            multiplier: x[nu + np],
            relative_residual,
        })
    }
}

/// Solves the bordered system with the DOFs in `fixed` set to zero.
pub fn solve_saddle(system: &AssembledSystem, fixed: &[usize]) -> Result<SaddleSolution> {
    solve_saddle_with(system, fixed, None)
}

/// As [`solve_saddle`], reusing the symbolic factorization held in `cache`
/// when the bordered matrix keeps its sparsity pattern.
pub fn solve_saddle_with(system: &AssembledSystem, fixed: &[usize], cache: Option<&LuCache>) -> Result<SaddleSolution> {
    SaddleFactor::new(system, fixed, cache)?.solve(&system.rhs_u, &system.rhs_p)
}

/// Settings of the nonlinear iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Backtracking factor of the line search.
    pub damping: f64,
    /// Reynolds ladder used to reach high Reynolds numbers.
    pub continuation: Vec<f64>,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_iter: 50,
            damping: 0.5,
            continuation: vec![100.0, 400.0, 1000.0, 2500.0, 5000.0, 7500.0, 10000.0],
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Parameter("Newton tolerances must be positive".into()));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::Parameter(format!("damping {} must lie in (0, 1)", self.damping)));
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// A discrete flow problem: spaces, parameters, boundary treatment and the
/// operators that do not depend on the state.
pub struct FlowProblem {
    pub pair: DivConformingPair,
    pub params: StabParams,
    pub bc: WallBc,
    pub forcing: Option<VectorField>,
    /// `false` drops the convective term (Stokes).
    pub convection: bool,
    pub viscous: SparseMatrix,
    pub divergence: SparseMatrix,
    pub load: Vec<f64>,
    pub mean_row: Vec<f64>,
    convection_quad: ConvectionQuadrature,
    skeleton_quad: SkeletonQuadrature,
    lu_cache: LuCache,
}

/// State-dependent operators at one velocity: `J` (with `eta` from that
/// velocity) and, unless the problem is Stokes, the convection blocks.
pub struct StateOperators {
    pub skeleton: SparseMatrix,
    pub convection: Option<crate::forms::ConvectionOperator>,
}

impl FlowProblem {
    pub fn new(pair: DivConformingPair, params: StabParams, bc: WallBc, forcing: Option<VectorField>) -> Self {
        let (viscous, _) = assemble_viscous_nitsche(&pair, &params, &bc);
        let load = assemble_load(&pair, forcing.as_ref(), &params, &bc);
        let divergence = assemble_divergence(&pair);
        let mean_row = pressure_mean_row(&pair);
        let convection_quad = ConvectionQuadrature::new(&pair);
        let skeleton_quad = SkeletonQuadrature::new(&pair);
        Self {
            pair,
            params,
            bc,
            forcing,
            convection: true,
            viscous,
            divergence,
            load,
            mean_row,
            convection_quad,
            skeleton_quad,
            lu_cache: LuCache::default(),
        }
    }

    pub fn stokes(mut self) -> Self {
        self.convection = false;
        self
    }

    pub fn reynolds(&self) -> f64 {
        1.0 / self.params.nu
    }

    pub fn fixed_dofs(&self) -> &[usize] {
        &self.pair.normal_boundary_dofs
    }

    /// `J` and the convection operators at `u`.
    pub fn operators(&self, u: &[f64]) -> StateOperators {
        StateOperators {
            skeleton: self.skeleton_quad.assemble(u, &self.params),
            convection: self.convection.then(|| self.convection_quad.assemble(u)),
        }
    }

    /// `J(u, u)` with `eta` from `w`.
    pub fn skeleton_energy(&self, u: &[f64], w: &[f64]) -> f64 {
        self.skeleton_quad.energy(u, w, &self.params)
    }

    /// Residual at `(u, p)` using operators already assembled at `u`.
    pub fn residual_with(&self, ops: &StateOperators, u: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut ru = self.viscous.mul_vec(u);
        axpy(&mut ru, 1.0, &ops.skeleton.mul_vec(u));
        if let Some(c) = &ops.convection {
            axpy(&mut ru, 1.0, &c.advective.mul_vec(u));
        }
        axpy(&mut ru, -1.0, &self.divergence.tr_mul_vec(p));
        axpy(&mut ru, -1.0, &self.load);
        (ru, self.divergence.mul_vec(u))
    }

    /// Newton linearization from operators assembled at the linearization point.
    pub fn jacobian_with(&self, ops: &StateOperators) -> SparseMatrix {
        match &ops.convection {
            Some(c) => SparseMatrix::combine(&[
                (&self.viscous, 1.0),
                (&ops.skeleton, 1.0),
                (&c.advective, 1.0),
                (&c.newton, 1.0),
            ]),
            None => SparseMatrix::combine(&[(&self.viscous, 1.0), (&ops.skeleton, 1.0)]),
        }
    }

    /// Nonlinear residual with the skeleton parameter evaluated from `eta_state`:
    /// `(A_h + J + C(u)) u - B^T p - L` and `B u`.
    pub fn residual_frozen(&self, u: &[f64], p: &[f64], eta_state: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut ru = self.viscous.mul_vec(u);
        axpy(&mut ru, 1.0, &self.skeleton_quad.apply(u, eta_state, &self.params));
        if self.convection {
            axpy(&mut ru, 1.0, &self.convection_quad.apply(u));
        }
        axpy(&mut ru, -1.0, &self.divergence.tr_mul_vec(p));
        axpy(&mut ru, -1.0, &self.load);
        (ru, self.divergence.mul_vec(u))
    }

    pub fn residual(&self, u: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.residual_frozen(u, p, u)
    }

    /// Newton linearization at `u` with the skeleton parameter frozen.
    pub fn jacobian(&self, u: &[f64]) -> SparseMatrix {
        self.jacobian_with(&self.operators(u))
    }

    /// Linear system for the Newton correction at `(u, p)`.
    pub fn assemble(&self, u: &[f64], p: &[f64]) -> AssembledSystem {
        let ops = self.operators(u);
        let (ru, rp) = self.residual_with(&ops, u, p);
        self.system(self.jacobian_with(&ops), &ru, &rp)
    }

    /// Saddle solve sharing the problem's factorization cache.
    pub fn solve(&self, system: &AssembledSystem) -> Result<SaddleSolution> {
        solve_saddle_with(system, self.fixed_dofs(), Some(&self.lu_cache))
    }

    /// Euclidean norm of the residual over the unconstrained rows.
    pub fn residual_norm(&self, ru: &[f64], rp: &[f64]) -> f64 {
        let mask = fixed_mask(ru.len(), self.fixed_dofs());
        let su: f64 = ru.iter().zip(&mask).filter(|(_, &f)| !f).map(|(v, _)| v * v).sum();
        let sp: f64 = rp.iter().map(|v| v * v).sum();
        (su + sp).sqrt()
    }

    fn system(&self, k_uu: SparseMatrix, ru: &[f64], rp: &[f64]) -> AssembledSystem {
        AssembledSystem {
            k_uu,
            b: self.divergence.clone(),
            rhs_u: ru.iter().map(|v| -v).collect(),
            rhs_p: rp.iter().map(|v| -v).collect(),
            mean_constraint: self.mean_row.clone(),
        }
    }
}

/// Line-search candidate: residual norm, `u`, `p` and the residual blocks.
type Trial = (f64, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// Outcome of a converged nonlinear solve.
#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub state: StateVector,
    pub iterations: usize,
    pub residual: f64,
    /// Residual norm after each iteration, starting with the initial one.
    pub history: Vec<f64>,
}

/// Steady Newton iteration with backtracking line search from `initial`.
pub fn newton_steady(problem: &FlowProblem, initial: &StateVector, cfg: &NewtonConfig) -> Result<NewtonOutcome> {
    cfg.validate()?;
    let mut u = initial.u.clone();
    let mut p = initial.p.clone();
    for &d in problem.fixed_dofs() {
        u[d] = 0.0;
    }
    let (mut ru, mut rp) = problem.residual(&u, &p);
    let mut r = problem.residual_norm(&ru, &rp);
    let r0 = r;
    let mut history = vec![r];
    let mut it = 0;
    while !(r < cfg.abs_tol || r < cfg.rel_tol * r0) {
        if it == cfg.max_iter || !r.is_finite() {
            return Err(Error::Continuation {
                reynolds: problem.reynolds(),
                iterations: it,
                residual: r,
            });
        }
        it += 1;
        let system = problem.system(problem.jacobian(&u), &ru, &rp);
        let step = problem.solve(&system)?;

        let mut alpha = 1.0;
        let mut best: Option<Trial> = None;
        while alpha > 1e-4 {
            let mut ut = u.clone();
            axpy(&mut ut, alpha, &step.u);
            let mut pt = p.clone();
            axpy(&mut pt, alpha, &step.p);
            let (rut, rpt) = problem.residual(&ut, &pt);
            let rt = problem.residual_norm(&rut, &rpt);
            let improved = best.as_ref().is_none_or(|b| rt < b.0);
            if improved && rt.is_finite() {
                best = Some((rt, ut, pt, rut, rpt));
            }
            if rt <= (1.0 - 1e-4 * alpha) * r {
                break;
            }
            alpha *= cfg.damping;
        }
        match best {
            Some((rt, ut, pt, rut, rpt)) if rt < r => {
                u = ut;
                p = pt;
                ru = rut;
                rp = rpt;
                r = rt;
            }
            _ => {
                return Err(Error::Continuation {
                    reynolds: problem.reynolds(),
                    iterations: it,
                    residual: r,
                })
            }
        }
        history.push(r);
    }
    Ok(NewtonOutcome {
        state: StateVector { u, p, time: 0.0 },
        iterations: it,
        residual: r,
        history,
    })
}

/// Reynolds numbers visited on the way to `target`: the ladder entries below
/// it followed by the target itself.
pub fn continuation_path(ladder: &[f64], target: f64) -> Vec<f64> {
    let mut path: Vec<f64> = ladder.iter().copied().filter(|&re| re < target).collect();
    path.push(target);
    path
}

/// Steady solve at `target` Reynolds number, warm-starting along the
/// continuation ladder. `build` creates the problem for a given Reynolds number.
pub fn solve_with_continuation<F>(build: F, target: f64, cfg: &NewtonConfig) -> Result<(FlowProblem, NewtonOutcome)>
where
    F: Fn(f64) -> FlowProblem,
{
    let mut last: Option<(FlowProblem, NewtonOutcome)> = None;
    for re in continuation_path(&cfg.continuation, target) {
        let problem = build(re);
        let initial = match &last {
            Some((_, out)) => out.state.clone(),
            None => StateVector::zeros(&problem.pair),
        };
        let out = newton_steady(&problem, &initial, cfg).map_err(|e| match e {
            Error::Continuation { iterations, residual, .. } => Error::Continuation {
                reynolds: re,
                iterations,
                residual,
            },
            other => other,
        })?;
        last = Some((problem, out));
    }
    Ok(last.expect("path is never empty"))
}

/// Time-integration settings.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
    pub rho_inf: f64,
    pub newton: NewtonConfig,
}

impl TimeConfig {
    pub fn new(dt: f64, t_end: f64, rho_inf: f64) -> Self {
        Self {
            dt,
            t_end,
            rho_inf,
            newton: NewtonConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Parameter(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::Parameter(format!("t_end = {} must be nonnegative", self.t_end)));
        }
        if !(0.0..=1.0).contains(&self.rho_inf) {
            return Err(Error::Parameter(format!("rho_inf = {} must lie in [0, 1]", self.rho_inf)));
        }
        self.newton.validate()
    }

    pub fn alpha_m(&self) -> f64 {
        0.5 * (3.0 - self.rho_inf) / (1.0 + self.rho_inf)
    }

    pub fn alpha_f(&self) -> f64 {
        1.0 / (1.0 + self.rho_inf)
    }

    pub fn gamma(&self) -> f64 {
        0.5 + self.alpha_m() - self.alpha_f()
    }

    /// Number of steps covering `[0, t_end]`.
    pub fn num_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// State of the time integrator: velocity, its rate, and the stage pressure.
#[derive(Clone, Debug)]
pub struct TimeState {
    pub u: Vec<f64>,
    pub u_dot: Vec<f64>,
    pub p: Vec<f64>,
    pub time: f64,
}

impl TimeState {
    pub fn to_state(&self) -> StateVector {
        StateVector {
            u: self.u.clone(),
            p: self.p.clone(),
            time: self.time,
        }
    }
}

/// Generalized-alpha integrator for `M du/dt + N(u) - B^T p = L`, `B u = 0`.
///
/// The stage equations are solved with a Newton iteration whose factored
/// Jacobian is kept across iterations and steps; it is rebuilt at the current
/// iterate whenever a correction fails to reduce the residual by `REFRESH_RATIO`.
pub struct GeneralizedAlpha<'a> {
    pub problem: &'a FlowProblem,
    pub mass: SparseMatrix,
    pub cfg: TimeConfig,
    factor: Mutex<Option<SaddleFactor>>,
}

const REFRESH_RATIO: f64 = 0.1;

impl<'a> GeneralizedAlpha<'a> {
    pub fn new(problem: &'a FlowProblem, cfg: TimeConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            problem,
            mass: assemble_velocity_mass(&problem.pair),
            cfg,
            factor: Mutex::new(None),
        })
    }

    /// Starts from `u0` with a consistent rate `M u_dot = L - N(u0) + B^T p0`.
    pub fn initialize(&self, u0: Vec<f64>, time: f64) -> Result<TimeState> {
        let pr = self.problem;
        let zero_p = vec![0.0; pr.pair.num_pressure()];
        let (ru, _) = pr.residual(&u0, &zero_p);
        let system = AssembledSystem {
            k_uu: self.mass.clone(),
            b: pr.divergence.clone(),
            rhs_u: ru.iter().map(|v| -v).collect(),
            rhs_p: vec![0.0; pr.pair.num_pressure()],
            mean_constraint: pr.mean_row.clone(),
        };
        let sol = pr.solve(&system)?;
        Ok(TimeState {
            u: u0,
            u_dot: sol.u,
            p: sol.p,
            time,
        })
    }

    /// Advances one step of size `dt`.
    pub fn step(&self, state: &TimeState) -> Result<TimeState> {
        let pr = self.problem;
        let dt = self.cfg.dt;
        let (am, af, g) = (self.cfg.alpha_m(), self.cfg.alpha_f(), self.cfg.gamma());
        let newton = &self.cfg.newton;
        let time = state.time + dt;

        let mut u1 = state.u.clone();
        axpy(&mut u1, dt, &state.u_dot);
        let mut p = state.p.clone();

        let stage = |u1: &[f64]| {
            let mut ud1 = vec![0.0; u1.len()];
            for i in 0..u1.len() {
                ud1[i] = (u1[i] - state.u[i] - dt * (1.0 - g) * state.u_dot[i]) / (g * dt);
            }
            let ud_am: Vec<f64> = (0..u1.len()).map(|i| state.u_dot[i] + am * (ud1[i] - state.u_dot[i])).collect();
            let u_af: Vec<f64> = (0..u1.len()).map(|i| state.u[i] + af * (u1[i] - state.u[i])).collect();
            (ud1, ud_am, u_af)
        };
        let residual = |u1: &[f64], p: &[f64]| {
            let (ud1, ud_am, u_af) = stage(u1);
            let (mut ru, _) = pr.residual(&u_af, p);
            axpy(&mut ru, 1.0, &self.mass.mul_vec(&ud_am));
            let rp = pr.divergence.mul_vec(u1);
            (ru, rp, ud1, u_af)
        };

        let (mut ru, mut rp, mut ud1, mut u_af) = residual(&u1, &p);
        let mut r = pr.residual_norm(&ru, &rp);
        let r0 = r;
        let mut it = 0;
        let mut factor = self.factor.lock().expect("factor lock");
        let mut fresh = false;
        while !(r < newton.abs_tol || r < newton.rel_tol * r0) {
            if it == newton.max_iter || !r.is_finite() {
                *factor = None;
                return Err(Error::TimeStep { time, residual: r });
            }
            it += 1;
            if factor.is_none() {
                let k = SparseMatrix::combine(&[(&self.mass, am / (g * dt)), (&pr.jacobian(&u_af), af)]);
                *factor = Some(SaddleFactor::new(&pr.system(k, &ru, &rp), pr.fixed_dofs(), Some(&pr.lu_cache))?);
                fresh = true;
            }
            let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
            let step = factor.as_ref().expect("factor present").solve(&neg(&ru), &neg(&rp))?;
            let mut u_try = u1.clone();
            axpy(&mut u_try, 1.0, &step.u);
            let mut p_try = p.clone();
            axpy(&mut p_try, 1.0, &step.p);
            let (ru_t, rp_t, ud_t, uaf_t) = residual(&u_try, &p_try);
            let r_t = pr.residual_norm(&ru_t, &rp_t);
            if !fresh && !(r_t < REFRESH_RATIO * r) {
                *factor = None;
                if !(r_t < r) {
                    continue;
                }
            }
            fresh = false;
            (u1, p, ru, rp, ud1, u_af, r) = (u_try, p_try, ru_t, rp_t, ud_t, uaf_t, r_t);
        }
        Ok(TimeState {
            u: u1,
            u_dot: ud1,
            p,
            time,
        })
    }
}

/// One generalized-alpha step without keeping an integrator around.
pub fn generalized_alpha_step(state: &TimeState, cfg: &TimeConfig, problem: &FlowProblem) -> Result<TimeState> {
    GeneralizedAlpha::new(problem, cfg.clone())?.step(state)
}

/// Component-wise L2 projection of `f` onto the velocity space.
pub fn interpolate_field(pair: &DivConformingPair, f: &VectorField) -> Result<StateVector> {
    let mass = assemble_velocity_mass(pair);
    let rhs = assemble_body_force(pair, f);
    let u = SparseLu::new(&mass)?.solve(&rhs)?;
    Ok(StateVector {
        u,
        p: vec![0.0; pair.num_pressure()],
        time: 0.0,
    })
}

/// L2 projection of `f` onto the discretely divergence-free velocities with
/// zero normal trace.
pub fn project_solenoidal(pair: &DivConformingPair, f: &VectorField) -> Result<Vec<f64>> {
    let system = AssembledSystem {
        k_uu: assemble_velocity_mass(pair),
        b: assemble_divergence(pair),
        rhs_u: assemble_body_force(pair, f),
        rhs_p: vec![0.0; pair.num_pressure()],
        mean_constraint: pressure_mean_row(pair),
    };
    Ok(solve_saddle(&system, &pair.normal_boundary_dofs)?.u)
}

/// Convenience: a zero body force.
pub fn no_forcing() -> VectorField {
    Arc::new(|_| [0.0, 0.0])
}
