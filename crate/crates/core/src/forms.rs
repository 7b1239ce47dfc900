//! Assembly of the variational forms of the stabilized problem.
//!
//! Matrix entries are stored with the test function as the row and the trial
//! function as the column. Velocity indices follow [`DivConformingPair`].
//!
//! * `A_h`: `(2 nu grad_s u, grad_s v)` plus the symmetric Nitsche terms on the
//!   boundary for the tangential Dirichlet data.
//! * `B`: `(div u, q)`.
//! * `C(w; u, v) = -(w (x) u, grad v) = -((w . grad) v, u)`.
//! * `J(u, v) = sum_e (eta [[d^{a'+1}_n u]], [[d^{a'+1}_n v]])_e` over interior facets.

use std::sync::Arc;

use faer::sparse::Triplet;
use rayon::prelude::*;

use crate::linalg::{Coo, SparseMatrix};
use crate::mesh::{facet_quadrature, gauss_rule, Facet, QuadratureRule};
use crate::space::{DirectionalBasis, DivConformingPair, VelocityBasis};

/// Number of Gauss points per direction for the body-force integral.
pub const LOAD_QUADRATURE_POINTS: usize = 10;

pub type VectorField = Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;

/// Stabilization and material parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabParams {
    pub gamma: f64,
    pub delta: f64,
    pub c_nit: f64,
    pub nu: f64,
    pub alpha_prime: usize,
}

impl StabParams {
    /// Defaults for velocity degree `k_prime`: `delta = 1`,
    /// `gamma = delta * 10^-(alpha' + 2)`, `C_Nit = 5 (k' + 1)`.
    pub fn new(k_prime: usize, nu: f64) -> Self {
        let alpha_prime = k_prime.saturating_sub(1);
        Self {
            gamma: Self::gamma_from_delta(1.0, alpha_prime),
            delta: 1.0,
            c_nit: 5.0 * (k_prime as f64 + 1.0),
            nu,
            alpha_prime,
        }
    }

    pub fn gamma_from_delta(delta: f64, alpha_prime: usize) -> f64 {
        delta * 10f64.powi(-(alpha_prime as i32 + 2))
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self.gamma = Self::gamma_from_delta(delta, self.alpha_prime);
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_c_nit(mut self, c_nit: f64) -> Self {
        self.c_nit = c_nit;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }
}

/// Skeleton penalty parameter
/// `eta = gamma * min(Re_h, 1) * h^(2 alpha' + 2) * |u . n|` with `Re_h = |u| h / nu`.
pub fn compute_eta(u_dot_n: f64, u_mag: f64, h: f64, params: &StabParams) -> f64 {
    let re_h = u_mag * h / params.nu;
    params.gamma * re_h.min(1.0) * h.powi(2 * params.alpha_prime as i32 + 2) * u_dot_n.abs()
}

/// Treatment of the tangential velocity on the boundary.
#[derive(Clone)]
pub enum WallBc {
    /// Nitsche enforcement of `u = u_D` (tangential part; the normal trace is strong).
    Nitsche(VectorField),
    /// Zero tangential traction, no boundary terms.
    FreeSlip,
}

impl WallBc {
    pub fn no_slip() -> Self {
        WallBc::Nitsche(Arc::new(|_| [0.0, 0.0]))
    }
}

impl std::fmt::Debug for WallBc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WallBc::Nitsche(_) => f.write_str("Nitsche"),
            WallBc::FreeSlip => f.write_str("FreeSlip"),
        }
    }
}

pub(crate) fn element_rule(pair: &DivConformingPair) -> QuadratureRule {
    gauss_rule(pair.k_prime + 2).expect("k' + 2 <= 10")
}

/// The convective integrand is cubic in the spline degree, so it needs more
/// points than the bilinear forms for the skew identity to hold discretely.
pub(crate) fn convection_rule(pair: &DivConformingPair) -> QuadratureRule {
    let n = (3 * pair.k_prime + 3).div_ceil(2).max(pair.k_prime + 2);
    gauss_rule(n).expect("supported rule")
}

/// Runs `local` on every element in parallel and gathers the triplets in
/// element order, so the result does not depend on the thread count.
fn assemble_elements<F>(pair: &DivConformingPair, nrows: usize, ncols: usize, local: F) -> SparseMatrix
where
    F: Fn(usize, &mut Vec<Triplet<usize, usize, f64>>) + Sync,
{
    let parts: Vec<Vec<Triplet<usize, usize, f64>>> = (0..pair.mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let mut t = Vec::new();
            local(e, &mut t);
            t
        })
        .collect();
    let mut coo = Coo::new(nrows, ncols);
    coo.entries = parts.into_iter().flatten().collect();
    coo.build()
}

fn assemble_facets<F>(pair: &DivConformingPair, facets: &[Facet], local: F) -> SparseMatrix
where
    F: Fn(&Facet, &mut Vec<Triplet<usize, usize, f64>>) + Sync,
{
    let n = pair.num_velocity();
    let parts: Vec<Vec<Triplet<usize, usize, f64>>> = facets
        .par_iter()
        .map(|f| {
            let mut t = Vec::new();
            local(f, &mut t);
            t
        })
        .collect();
    let mut coo = Coo::new(n, n);
    coo.entries = parts.into_iter().flatten().collect();
    coo.build()
}

fn push_local(out: &mut Vec<Triplet<usize, usize, f64>>, dofs: &[usize], local: &[f64]) {
    let n = dofs.len();
    for a in 0..n {
        for b in 0..n {
            out.push(Triplet::new(dofs[a], dofs[b], local[a * n + b]));
        }
    }
}

/// The three pieces of the viscous/Nitsche operator, kept apart so that the
/// coercivity norm can be formed from them.
pub struct ViscousParts {
    /// `(2 nu grad_s u, grad_s v)`
    pub volume: SparseMatrix,
    /// `-(2 nu n . grad_s u, v) - (2 nu n . grad_s v, u)` on the boundary
    pub consistency: SparseMatrix,
    /// `(2 nu C_Nit / h u, v)` on the boundary
    pub penalty: SparseMatrix,
}

impl ViscousParts {
    pub fn total(&self) -> SparseMatrix {
        SparseMatrix::combine(&[(&self.volume, 1.0), (&self.consistency, 1.0), (&self.penalty, 1.0)])
    }
}

/// `grad_s a : grad_s b` for single-component basis functions.
#[inline]
fn sym_grad_product(ia: usize, ga: [f64; 2], ib: usize, gb: [f64; 2]) -> f64 {
    let full = if ia == ib { ga[0] * gb[0] + ga[1] * gb[1] } else { 0.0 };
    0.5 * (full + ga[ib] * gb[ia])
}

/// `(n . grad_s u) . v` with `u` of component `iu`, gradient `gu`, and `v`
/// of component `iv`, value `vv`.
#[inline]
fn traction_dot(n: [f64; 2], iu: usize, gu: [f64; 2], iv: usize, vv: f64) -> f64 {
    let ng = n[0] * gu[0] + n[1] * gu[1];
    let delta = if iu == iv { ng } else { 0.0 };
    vv * 0.5 * (n[iu] * gu[iv] + delta)
}

pub fn assemble_viscous_parts(pair: &DivConformingPair, params: &StabParams, with_nitsche: bool) -> ViscousParts {
    let n = pair.num_velocity();
    let nu2 = 2.0 * params.nu;
    let rule = element_rule(pair);
    let volume = assemble_elements(pair, n, n, |e, out| {
        let dofs = pair.element_velocity_dofs(e);
        let nl = dofs.len();
        let mut local = vec![0.0; nl * nl];
        for (x, w) in pair.mesh.element_quadrature(e, &rule) {
            let vb = pair.velocity_basis(e, x);
            for a in 0..nl {
                for b in 0..nl {
                    local[a * nl + b] += w * nu2 * sym_grad_product(vb.comp[a], vb.grad[a], vb.comp[b], vb.grad[b]);
                }
            }
        }
        push_local(out, &dofs, &local);
    });

    if !with_nitsche {
        return ViscousParts {
            volume,
            consistency: SparseMatrix::zeros(n, n),
            penalty: SparseMatrix::zeros(n, n),
        };
    }

    let h = pair.mesh.h();
    let consistency = assemble_facets(pair, pair.mesh.boundary_facets(), |f, out| {
        let dofs = pair.element_velocity_dofs(f.plus);
        let nl = dofs.len();
        let mut local = vec![0.0; nl * nl];
        for (x, w) in facet_quadrature(f, &rule) {
            let vb = pair.velocity_basis(f.plus, x);
            for a in 0..nl {
                for b in 0..nl {
                    let t_ba = traction_dot(f.normal, vb.comp[b], vb.grad[b], vb.comp[a], vb.val[a]);
                    let t_ab = traction_dot(f.normal, vb.comp[a], vb.grad[a], vb.comp[b], vb.val[b]);
                    local[a * nl + b] -= w * nu2 * (t_ba + t_ab);
                }
            }
        }
        push_local(out, &dofs, &local);
    });
    let penalty = assemble_facets(pair, pair.mesh.boundary_facets(), |f, out| {
        let dofs = pair.element_velocity_dofs(f.plus);
        let nl = dofs.len();
        let mut local = vec![0.0; nl * nl];
        for (x, w) in facet_quadrature(f, &rule) {
            let vb = pair.velocity_basis(f.plus, x);
            for a in 0..nl {
                for b in 0..nl {
                    if vb.comp[a] == vb.comp[b] {
                        local[a * nl + b] += w * nu2 * params.c_nit / h * vb.val[a] * vb.val[b];
                    }
                }
            }
        }
        push_local(out, &dofs, &local);
    });
    ViscousParts {
        volume,
        consistency,
        penalty,
    }
}

/// Boundary-data part of `L_h`:
/// `-(2 nu n . grad_s v, u_D) + (2 nu C_Nit / h u_D, v)`.
pub fn assemble_boundary_load(pair: &DivConformingPair, params: &StabParams, bc: &WallBc) -> Vec<f64> {
    let mut rhs = vec![0.0; pair.num_velocity()];
    let WallBc::Nitsche(data) = bc else {
        return rhs;
    };
    let rule = element_rule(pair);
    let nu2 = 2.0 * params.nu;
    let h = pair.mesh.h();
    for f in pair.mesh.boundary_facets() {
        for (x, w) in facet_quadrature(f, &rule) {
            let ud = data(x);
            if ud == [0.0, 0.0] {
                continue;
            }
            let vb = pair.velocity_basis(f.plus, x);
            for a in 0..vb.len() {
                let ia = vb.comp[a];
                let ga = vb.grad[a];
                let ng = f.normal[0] * ga[0] + f.normal[1] * ga[1];
                let traction = 0.5 * (f.normal[ia] * (ga[0] * ud[0] + ga[1] * ud[1]) + ud[ia] * ng);
                rhs[vb.dofs[a]] += w * nu2 * (-traction + params.c_nit / h * ud[ia] * vb.val[a]);
            }
        }
    }
    rhs
}

/// `A_h` without the skeleton term, and the matching boundary-data load.
pub fn assemble_viscous_nitsche(pair: &DivConformingPair, params: &StabParams, bc: &WallBc) -> (SparseMatrix, Vec<f64>) {
    let with_nitsche = matches!(bc, WallBc::Nitsche(_));
    let parts = assemble_viscous_parts(pair, params, with_nitsche);
    (parts.total(), assemble_boundary_load(pair, params, bc))
}

/// `B[q, u] = (div u, q)`.
pub fn assemble_divergence(pair: &DivConformingPair) -> SparseMatrix {
    let rule = element_rule(pair);
    assemble_elements(pair, pair.num_pressure(), pair.num_velocity(), |e, out| {
        let el = pair.mesh.element(e);
        let vdofs = pair.element_velocity_dofs(e);
        let qdofs = pair.q.element_dofs(el.ex, el.ey);
        let (nv, nq) = (vdofs.len(), qdofs.len());
        let mut local = vec![0.0; nq * nv];
        for (x, w) in pair.mesh.element_quadrature(e, &rule) {
            let vb = pair.velocity_basis(e, x);
            let (_, qv) = pair.pressure_basis(e, x);
            for a in 0..nq {
                for b in 0..nv {
                    local[a * nv + b] += w * qv[a] * vb.grad[b][vb.comp[b]];
                }
            }
        }
        for a in 0..nq {
            for b in 0..nv {
                let v = local[a * nv + b];
                if v != 0.0 {
                    out.push(Triplet::new(qdofs[a], vdofs[b], v));
                }
            }
        }
    })
}

/// Convection operators at the advecting state `w`.
pub struct ConvectionOperator {
    /// `C(w; u, v)` as a matrix acting on `u`.
    pub advective: SparseMatrix,
    /// `C(u; w, v)` as a matrix acting on `u` (the extra Newton block).
    pub newton: SparseMatrix,
}

/// Velocity basis at the convection quadrature points of every element,
/// evaluated once and reused for every advecting state.
pub struct ConvectionQuadrature {
    n: usize,
    /// Global DOFs of each element with its quadrature points.
    elements: Vec<(Vec<usize>, Vec<QuadPoint>)>,
}

type QuadPoint = (f64, VelocityBasis);
type Triplets = Vec<Triplet<usize, usize, f64>>;

impl ConvectionQuadrature {
    pub fn new(pair: &DivConformingPair) -> Self {
        let rule = convection_rule(pair);
        let elements = (0..pair.mesh.num_elements())
            .into_par_iter()
            .map(|e| {
                let pts = pair
                    .mesh
                    .element_quadrature(e, &rule)
                    .into_iter()
                    .map(|(x, w)| (w, pair.velocity_basis(e, x)))
                    .collect();
                (pair.element_velocity_dofs(e), pts)
            })
            .collect();
        Self {
            n: pair.num_velocity(),
            elements,
        }
    }

    pub fn assemble(&self, w: &[f64]) -> ConvectionOperator {
        let both: Vec<(Triplets, Triplets)> = self
            .elements
            .par_iter()
            .map(|(dofs, pts)| {
                let nl = dofs.len();
                let mut adv = vec![0.0; nl * nl];
                let mut newt = vec![0.0; nl * nl];
                for (wq, vb) in pts {
                    let (wv, _) = vb.field(w);
                    for a in 0..nl {
                        let (ia, ga) = (vb.comp[a], vb.grad[a]);
                        let w_dot_ga = wv[0] * ga[0] + wv[1] * ga[1];
                        for b in 0..nl {
                            let ib = vb.comp[b];
                            if ia == ib {
                                adv[a * nl + b] -= wq * vb.val[b] * w_dot_ga;
                            }
                            newt[a * nl + b] -= wq * wv[ia] * vb.val[b] * ga[ib];
                        }
                    }
                }
                let (mut ta, mut tn) = (Vec::new(), Vec::new());
                push_local(&mut ta, dofs, &adv);
                push_local(&mut tn, dofs, &newt);
                (ta, tn)
            })
            .collect();
        let mut ca = Coo::new(self.n, self.n);
        let mut cn = Coo::new(self.n, self.n);
        for (a, b) in both {
            ca.entries.extend(a);
            cn.entries.extend(b);
        }
        ConvectionOperator {
            advective: ca.build(),
            newton: cn.build(),
        }
    }
}

impl ConvectionQuadrature {
    /// `C(w; w, .)` as a vector, without forming the matrix.
    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        let parts: Vec<(&[usize], Vec<f64>)> = self
            .elements
            .par_iter()
            .map(|(dofs, pts)| {
                let mut local = vec![0.0; dofs.len()];
                for (wq, vb) in pts {
                    let (wv, _) = vb.field(w);
                    for (a, r) in local.iter_mut().enumerate() {
                        let ga = vb.grad[a];
                        *r -= wq * wv[vb.comp[a]] * (wv[0] * ga[0] + wv[1] * ga[1]);
                    }
                }
                (dofs.as_slice(), local)
            })
            .collect();
        scatter(self.n, parts)
    }
}

fn scatter(n: usize, parts: Vec<(&[usize], Vec<f64>)>) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (dofs, vals) in parts {
        for (&d, v) in dofs.iter().zip(vals) {
            out[d] += v;
        }
    }
    out
}

pub fn assemble_convection(pair: &DivConformingPair, w: &[f64]) -> ConvectionOperator {
    ConvectionQuadrature::new(pair).assemble(w)
}

struct FacetPoint {
    weight: f64,
    plus: VelocityBasis,
    minus: VelocityBasis,
    jump: DirectionalBasis,
}

/// Basis data at the quadrature points of every interior facet: velocity on
/// both sides (for `eta`) and the merged normal-derivative jump basis.
pub struct SkeletonQuadrature {
    n: usize,
    h: f64,
    normals: Vec<[f64; 2]>,
    facets: Vec<Vec<FacetPoint>>,
}

impl SkeletonQuadrature {
    pub fn new(pair: &DivConformingPair) -> Self {
        let rule = element_rule(pair);
        let order = pair.alpha_prime + 1;
        let interior = pair.mesh.interior_facets();
        let facets = interior
            .par_iter()
            .map(|f| {
                let minus = f.minus.expect("interior facet");
                facet_quadrature(f, &rule)
                    .into_iter()
                    .map(|(x, weight)| FacetPoint {
                        weight,
                        plus: pair.velocity_basis(f.plus, x),
                        minus: pair.velocity_basis(minus, x),
                        jump: pair.jump_basis(f, x, order).expect("interior facet"),
                    })
                    .collect()
            })
            .collect();
        Self {
            n: pair.num_velocity(),
            h: pair.mesh.h(),
            normals: interior.iter().map(|f| f.normal).collect(),
            facets,
        }
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    fn eta(&self, facet: usize, q: &FacetPoint, w: &[f64], params: &StabParams) -> f64 {
        let n = self.normals[facet];
        let (wp, _) = q.plus.field(w);
        let (wm, _) = q.minus.field(w);
        let mag = 0.5 * (wp[0].hypot(wp[1]) + wm[0].hypot(wm[1]));
        let wn = 0.5 * ((wp[0] + wm[0]) * n[0] + (wp[1] + wm[1]) * n[1]);
        compute_eta(wn, mag, self.h, params)
    }

    /// `J` with `eta` evaluated from `w`.
    pub fn assemble(&self, w: &[f64], params: &StabParams) -> SparseMatrix {
        if params.gamma == 0.0 {
            return SparseMatrix::zeros(self.n, self.n);
        }
        let parts: Vec<Vec<Triplet<usize, usize, f64>>> = self
            .facets
            .par_iter()
            .enumerate()
            .map(|(i, pts)| {
                let mut out = Vec::new();
                for q in pts {
                    let scale = q.weight * self.eta(i, q, w, params);
                    let jb = &q.jump;
                    for a in 0..jb.dofs.len() {
                        for b in 0..jb.dofs.len() {
                            if jb.comp[a] == jb.comp[b] {
                                out.push(Triplet::new(jb.dofs[a], jb.dofs[b], scale * jb.val[a] * jb.val[b]));
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let mut coo = Coo::new(self.n, self.n);
        coo.entries = parts.into_iter().flatten().collect();
        coo.build()
    }

    /// `J(u, .)` as a vector with `eta` from `w`, without forming the matrix.
    pub fn apply(&self, u: &[f64], w: &[f64], params: &StabParams) -> Vec<f64> {
        if params.gamma == 0.0 {
            return vec![0.0; self.n];
        }
        let parts: Vec<Vec<(usize, f64)>> = self
            .facets
            .par_iter()
            .enumerate()
            .map(|(i, pts)| {
                let mut out = Vec::new();
                for q in pts {
                    let scale = q.weight * self.eta(i, q, w, params);
                    let jb = &q.jump;
                    let mut j = [0.0; 2];
                    for l in 0..jb.dofs.len() {
                        j[jb.comp[l]] += u[jb.dofs[l]] * jb.val[l];
                    }
                    for l in 0..jb.dofs.len() {
                        out.push((jb.dofs[l], scale * j[jb.comp[l]] * jb.val[l]));
                    }
                }
                out
            })
            .collect();
        let mut out = vec![0.0; self.n];
        for (d, v) in parts.into_iter().flatten() {
            out[d] += v;
        }
        out
    }

    /// Contribution of interior facet `facet` to `J(u, u)`, `eta` from `w`.
    pub fn facet_energy(&self, facet: usize, u: &[f64], w: &[f64], params: &StabParams) -> f64 {
        if params.gamma == 0.0 {
            return 0.0;
        }
        self.facets[facet]
            .iter()
            .map(|q| {
                let mut j = [0.0; 2];
                for l in 0..q.jump.dofs.len() {
                    j[q.jump.comp[l]] += u[q.jump.dofs[l]] * q.jump.val[l];
                }
                q.weight * self.eta(facet, q, w, params) * (j[0] * j[0] + j[1] * j[1])
            })
            .sum()
    }

    pub fn energy(&self, u: &[f64], w: &[f64], params: &StabParams) -> f64 {
        (0..self.facets.len())
            .into_par_iter()
            .map(|i| self.facet_energy(i, u, w, params))
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    }
}

/// Skeleton operator `J` with `eta` evaluated from `w` and then held fixed.
pub fn assemble_skeleton(pair: &DivConformingPair, w: &[f64], params: &StabParams) -> SparseMatrix {
    if params.gamma == 0.0 {
        let n = pair.num_velocity();
        return SparseMatrix::zeros(n, n);
    }
    SkeletonQuadrature::new(pair).assemble(w, params)
}

/// `(eta [[d^{a'+1}_n u]], [[d^{a'+1}_n u]])_e` on one interior facet, with
/// `eta` from `w`.
pub fn facet_skeleton_energy(pair: &DivConformingPair, u: &[f64], w: &[f64], params: &StabParams, facet: &Facet) -> f64 {
    let rule = element_rule(pair);
    let order = pair.alpha_prime + 1;
    let minus = facet.minus.expect("interior facet");
    let mut total = 0.0;
    for (x, wq) in facet_quadrature(facet, &rule) {
        let (wp, _) = pair.velocity_basis(facet.plus, x).field(w);
        let (wm, _) = pair.velocity_basis(minus, x).field(w);
        let mag = 0.5 * (wp[0].hypot(wp[1]) + wm[0].hypot(wm[1]));
        let wn = 0.5 * ((wp[0] + wm[0]) * facet.normal[0] + (wp[1] + wm[1]) * facet.normal[1]);
        let eta = compute_eta(wn, mag, pair.mesh.h(), params);
        let jump = crate::space::facet_normal_derivative_jump(pair, u, facet, x, order).expect("interior facet");
        total += wq * eta * (jump[0] * jump[0] + jump[1] * jump[1]);
    }
    total
}

/// `J(u, u)` with `eta` from `w`, summed over all interior facets.
pub fn skeleton_energy(pair: &DivConformingPair, u: &[f64], w: &[f64], params: &StabParams) -> f64 {
    if params.gamma == 0.0 {
        return 0.0;
    }
    SkeletonQuadrature::new(pair).energy(u, w, params)
}

/// Linearized velocity/pressure system ready for [`crate::solver::solve_saddle`].
#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub k_uu: SparseMatrix,
    pub b: SparseMatrix,
    pub rhs_u: Vec<f64>,
    pub rhs_p: Vec<f64>,
    pub mean_constraint: Vec<f64>,
}

/// Body-force part of `L_h`: `(f, v)`.
pub fn assemble_body_force(pair: &DivConformingPair, f: &VectorField) -> Vec<f64> {
    let rule = gauss_rule(LOAD_QUADRATURE_POINTS).expect("supported rule");
    let parts: Vec<Vec<(usize, f64)>> = (0..pair.mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let mut out = Vec::new();
            for (x, w) in pair.mesh.element_quadrature(e, &rule) {
                let fx = f(x);
                let vb = pair.velocity_basis(e, x);
                for a in 0..vb.len() {
                    out.push((vb.dofs[a], w * fx[vb.comp[a]] * vb.val[a]));
                }
            }
            out
        })
        .collect();
    let mut rhs = vec![0.0; pair.num_velocity()];
    for (d, v) in parts.into_iter().flatten() {
        rhs[d] += v;
    }
    rhs
}

/// Full `L_h`: body force plus Nitsche boundary data.
pub fn assemble_load(pair: &DivConformingPair, f: Option<&VectorField>, params: &StabParams, bc: &WallBc) -> Vec<f64> {
    let mut rhs = assemble_boundary_load(pair, params, bc);
    if let Some(f) = f {
        crate::linalg::axpy(&mut rhs, 1.0, &assemble_body_force(pair, f));
    }
    rhs
}

/// Velocity mass matrix `(u, v)`.
pub fn assemble_velocity_mass(pair: &DivConformingPair) -> SparseMatrix {
    let n = pair.num_velocity();
    let rule = element_rule(pair);
    assemble_elements(pair, n, n, |e, out| {
        let dofs = pair.element_velocity_dofs(e);
        let nl = dofs.len();
        let mut local = vec![0.0; nl * nl];
        for (x, w) in pair.mesh.element_quadrature(e, &rule) {
            let vb = pair.velocity_basis(e, x);
            for a in 0..nl {
                for b in 0..nl {
                    if vb.comp[a] == vb.comp[b] {
                        local[a * nl + b] += w * vb.val[a] * vb.val[b];
                    }
                }
            }
        }
        push_local(out, &dofs, &local);
    })
}

/// Pressure mass matrix `(p, q)`.
pub fn assemble_pressure_mass(pair: &DivConformingPair) -> SparseMatrix {
    let n = pair.num_pressure();
    let rule = element_rule(pair);
    assemble_elements(pair, n, n, |e, out| {
        let el = pair.mesh.element(e);
        let dofs = pair.q.element_dofs(el.ex, el.ey);
        let nl = dofs.len();
        let mut local = vec![0.0; nl * nl];
        for (x, w) in pair.mesh.element_quadrature(e, &rule) {
            let (_, qv) = pair.pressure_basis(e, x);
            for a in 0..nl {
                for b in 0..nl {
                    local[a * nl + b] += w * qv[a] * qv[b];
                }
            }
        }
        push_local(out, &dofs, &local);
    })
}

/// `m_i = (1, q_i)`, the row of the zero-mean pressure constraint.
pub fn pressure_mean_row(pair: &DivConformingPair) -> Vec<f64> {
    let rule = element_rule(pair);
    let mut m = vec![0.0; pair.num_pressure()];
    for e in 0..pair.mesh.num_elements() {
        for (x, w) in pair.mesh.element_quadrature(e, &rule) {
            let (dofs, vals) = pair.pressure_basis(e, x);
            for (d, v) in dofs.into_iter().zip(vals) {
                m[d] += w * v;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eta_examples() {
        let p = StabParams::new(1, 1e-3).with_gamma(1e-2);
        assert_eq!(p.alpha_prime, 0);
        assert_eq!(compute_eta(0.0, 1.0, 1.0 / 16.0, &p), 0.0);
        // Re_h = 62.5 is clamped to one
        assert_abs_diff_eq!(compute_eta(1.0, 1.0, 1.0 / 16.0, &p), 3.90625e-5, epsilon = 1e-18);
        let p = p.with_nu(0.25);
        assert_abs_diff_eq!(compute_eta(1.0, 1.0, 1.0 / 16.0, &p), 9.765625e-6, epsilon = 1e-18);
        assert_abs_diff_eq!(compute_eta(-1.0, 1.0, 1.0 / 16.0, &p), 9.765625e-6, epsilon = 1e-18);
    }

    #[test]
    fn default_parameters() {
        let p = StabParams::new(1, 0.1);
        assert_abs_diff_eq!(p.gamma, 1e-2, epsilon = 1e-18);
        assert_abs_diff_eq!(p.c_nit, 10.0);
        let p = StabParams::new(3, 0.1);
        assert_abs_diff_eq!(p.gamma, 1e-4, epsilon = 1e-20);
        assert_abs_diff_eq!(p.with_delta(2.0).gamma, 2e-4, epsilon = 1e-20);
        assert_abs_diff_eq!(p.c_nit, 20.0);
    }

    #[test]
    fn sym_grad_product_matches_definition() {
        let ga = [0.3, -1.2];
        let gb = [2.0, 0.7];
        for ia in 0..2 {
            for ib in 0..2 {
                let mut da = [[0.0; 2]; 2];
                let mut db = [[0.0; 2]; 2];
                da[ia] = ga;
                db[ib] = gb;
                let mut s = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        let sa = 0.5 * (da[i][j] + da[j][i]);
                        let sb = 0.5 * (db[i][j] + db[j][i]);
                        s += sa * sb;
                    }
                }
                assert_abs_diff_eq!(sym_grad_product(ia, ga, ib, gb), s, epsilon = 1e-15);
            }
        }
    }
}
