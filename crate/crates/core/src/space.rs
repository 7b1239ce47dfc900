//! Divergence-conforming velocity/pressure spline pairs in 2D.
//!
//! For a velocity degree `k' = k - 1` the spaces on a Cartesian mesh are
//!
//! ```text
//! Vx = S(k, k-1), Vy = S(k-1, k), Q = S(k-1, k-1)
//! ```
//!
//! with maximal smoothness in every direction, so `d/dx Vx` and `d/dy Vy`
//! both land in `Q` and the divergence maps the velocity space onto the
//! pressure space. Knots are placed directly on the physical box, so no
//! Piola transform is needed.
//!
//! Velocity DOFs are numbered `[Vx | Vy]`; within each scalar space index
//! `ix + nx * iy` is used.

use crate::bspline::{BasisEval, KnotVector};
use crate::error::{Error, Result};
use crate::mesh::{Axis, CartesianMesh, Facet};

/// Scalar tensor-product spline space.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub kx: KnotVector,
    pub ky: KnotVector,
}

/// Univariate evaluations of a tensor space on one element.
#[derive(Clone, Debug)]
pub struct TensorEval {
    pub bx: BasisEval,
    pub by: BasisEval,
    nx: usize,
}

impl TensorEval {
    pub fn len(&self) -> usize {
        (self.bx.degree + 1) * (self.by.degree + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Global DOF of local function `l`.
    #[inline]
    pub fn dof(&self, l: usize) -> usize {
        let px = self.bx.degree + 1;
        let (lx, ly) = (l % px, l / px);
        (self.bx.first_index() + lx) + self.nx * (self.by.first_index() + ly)
    }

    /// `d^a/dx^a d^b/dy^b` of local function `l`.
    #[inline]
    pub fn deriv(&self, l: usize, a: usize, b: usize) -> f64 {
        let px = self.bx.degree + 1;
        let (lx, ly) = (l % px, l / px);
        self.bx.values[a][lx] * self.by.values[b][ly]
    }
}

impl TensorSpace {
    pub fn dims(&self) -> (usize, usize) {
        (self.kx.num_basis(), self.ky.num_basis())
    }

    pub fn num_dofs(&self) -> usize {
        let (a, b) = self.dims();
        a * b
    }

    pub fn dof(&self, ix: usize, iy: usize) -> usize {
        ix + self.kx.num_basis() * iy
    }

    pub fn local_len(&self) -> usize {
        (self.kx.degree() + 1) * (self.ky.degree() + 1)
    }

    /// Evaluates the functions living on element `(ex, ey)` at `x`, with
    /// derivatives up to `dx` in x and `dy` in y.
    pub fn eval_on_element(&self, ex: usize, ey: usize, x: [f64; 2], dx: usize, dy: usize) -> TensorEval {
        TensorEval {
            bx: self.kx.eval_on_element(ex, x[0], dx),
            by: self.ky.eval_on_element(ey, x[1], dy),
            nx: self.kx.num_basis(),
        }
    }

    /// Global DOFs supported on element `(ex, ey)`, in local order.
    pub fn element_dofs(&self, ex: usize, ey: usize) -> Vec<usize> {
        let fx = self.kx.element_span(ex) - self.kx.degree();
        let fy = self.ky.element_span(ey) - self.ky.degree();
        let mut out = Vec::with_capacity(self.local_len());
        for ly in 0..=self.ky.degree() {
            for lx in 0..=self.kx.degree() {
                out.push(self.dof(fx + lx, fy + ly));
            }
        }
        out
    }
}

/// Velocity/pressure coefficient vectors at one time level.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub time: f64,
}

impl StateVector {
    pub fn zeros(pair: &DivConformingPair) -> Self {
        Self {
            u: vec![0.0; pair.num_velocity()],
            p: vec![0.0; pair.num_pressure()],
            time: 0.0,
        }
    }
}

/// Velocity basis functions of one element evaluated at one point.
#[derive(Clone, Debug, Default)]
pub struct VelocityBasis {
    pub dofs: Vec<usize>,
    pub comp: Vec<usize>,
    pub val: Vec<f64>,
    /// `[d/dx, d/dy]` of the nonzero component.
    pub grad: Vec<[f64; 2]>,
}

impl VelocityBasis {
    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    /// Value and gradient (`g[i][j] = d u_i / d x_j`) of the field with coefficients `u`.
    pub fn field(&self, u: &[f64]) -> ([f64; 2], [[f64; 2]; 2]) {
        let mut v = [0.0; 2];
        let mut g = [[0.0; 2]; 2];
        for l in 0..self.dofs.len() {
            let c = u[self.dofs[l]];
            let i = self.comp[l];
            v[i] += c * self.val[l];
            g[i][0] += c * self.grad[l][0];
            g[i][1] += c * self.grad[l][1];
        }
        (v, g)
    }
}

/// Pure derivatives `d^m/dx_axis^m` of the velocity basis at one point.
#[derive(Clone, Debug, Default)]
pub struct DirectionalBasis {
    pub dofs: Vec<usize>,
    pub comp: Vec<usize>,
    pub val: Vec<f64>,
}

/// Point evaluation of a discrete velocity field.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocitySample {
    pub value: [f64; 2],
    /// `grad[i][j] = d u_i / d x_j`
    pub grad: [[f64; 2]; 2],
    /// `along_x[d] = d^d u / dx^d`, `d = 0..=order`
    pub along_x: Vec<[f64; 2]>,
    pub along_y: Vec<[f64; 2]>,
}

/// A divergence-conforming velocity/pressure pair on a Cartesian mesh.
#[derive(Clone, Debug)]
pub struct DivConformingPair {
    pub mesh: CartesianMesh,
    pub vx: TensorSpace,
    pub vy: TensorSpace,
    pub q: TensorSpace,
    pub k_prime: usize,
    pub alpha_prime: usize,
    pub normal_boundary_dofs: Vec<usize>,
}

impl DivConformingPair {
    /// Builds the pair of velocity degree `k_prime` with maximal smoothness
    /// (`alpha' = k' - 1`) on the given mesh.
    pub fn new(mesh: &CartesianMesh, k_prime: usize) -> Result<Self> {
        if k_prime < 1 {
            return Err(Error::Parameter(
                "k' must be at least 1 so that the pressure space is continuous (alpha' >= 0)".into(),
            ));
        }
        let hi_x = KnotVector::from_breaks(k_prime + 1, mesh.breaks_x())?;
        let lo_x = KnotVector::from_breaks(k_prime, mesh.breaks_x())?;
        let hi_y = KnotVector::from_breaks(k_prime + 1, mesh.breaks_y())?;
        let lo_y = KnotVector::from_breaks(k_prime, mesh.breaks_y())?;
        let mut pair = Self {
            mesh: mesh.clone(),
            vx: TensorSpace {
                kx: hi_x.clone(),
                ky: lo_y.clone(),
            },
            vy: TensorSpace {
                kx: lo_x.clone(),
                ky: hi_y,
            },
            q: TensorSpace { kx: lo_x, ky: lo_y },
            k_prime,
            alpha_prime: k_prime - 1,
            normal_boundary_dofs: Vec::new(),
        };
        pair.normal_boundary_dofs = classify_boundary_dofs(&pair);
        Ok(pair)
    }

    /// Uniform `n` by `n` pair on a square box.
    pub fn uniform(n: usize, k_prime: usize, interval: (f64, f64)) -> Result<Self> {
        let mesh = CartesianMesh::uniform(n, n, interval, interval)?;
        Self::new(&mesh, k_prime)
    }

    pub fn num_vx(&self) -> usize {
        self.vx.num_dofs()
    }

    pub fn num_velocity(&self) -> usize {
        self.vx.num_dofs() + self.vy.num_dofs()
    }

    pub fn num_pressure(&self) -> usize {
        self.q.num_dofs()
    }

    /// Global velocity DOFs supported on an element: Vx locals, then Vy locals.
    pub fn element_velocity_dofs(&self, elem: usize) -> Vec<usize> {
        let el = self.mesh.element(elem);
        let off = self.num_vx();
        let mut dofs = self.vx.element_dofs(el.ex, el.ey);
        dofs.extend(self.vy.element_dofs(el.ex, el.ey).into_iter().map(|d| d + off));
        dofs
    }

    /// Velocity basis with first derivatives on element `elem` at `x`.
    pub fn velocity_basis(&self, elem: usize, x: [f64; 2]) -> VelocityBasis {
        let el = self.mesh.element(elem);
        let ex = self.vx.eval_on_element(el.ex, el.ey, x, 1, 1);
        let ey = self.vy.eval_on_element(el.ex, el.ey, x, 1, 1);
        let n = ex.len() + ey.len();
        let mut out = VelocityBasis {
            dofs: Vec::with_capacity(n),
            comp: Vec::with_capacity(n),
            val: Vec::with_capacity(n),
            grad: Vec::with_capacity(n),
        };
        let off = self.num_vx();
        for (c, te, shift) in [(0, &ex, 0), (1, &ey, off)] {
            for l in 0..te.len() {
                out.dofs.push(te.dof(l) + shift);
                out.comp.push(c);
                out.val.push(te.deriv(l, 0, 0));
                out.grad.push([te.deriv(l, 1, 0), te.deriv(l, 0, 1)]);
            }
        }
        out
    }

    /// Pressure basis values on element `elem` at `x`.
    pub fn pressure_basis(&self, elem: usize, x: [f64; 2]) -> (Vec<usize>, Vec<f64>) {
        let el = self.mesh.element(elem);
        let te = self.q.eval_on_element(el.ex, el.ey, x, 0, 0);
        let dofs = (0..te.len()).map(|l| te.dof(l)).collect();
        let vals = (0..te.len()).map(|l| te.deriv(l, 0, 0)).collect();
        (dofs, vals)
    }

    /// `order`-th derivative along `axis` of the velocity basis on `elem`,
    /// using the polynomial pieces of that element (one-sided at facets).
    pub fn directional_basis(&self, elem: usize, x: [f64; 2], axis: Axis, order: usize) -> DirectionalBasis {
        let el = self.mesh.element(elem);
        let (a, b) = match axis {
            Axis::X => (order, 0),
            Axis::Y => (0, order),
        };
        let ex = self.vx.eval_on_element(el.ex, el.ey, x, a, b);
        let ey = self.vy.eval_on_element(el.ex, el.ey, x, a, b);
        let off = self.num_vx();
        let mut out = DirectionalBasis::default();
        for (c, te, shift) in [(0, &ex, 0), (1, &ey, off)] {
            for l in 0..te.len() {
                out.dofs.push(te.dof(l) + shift);
                out.comp.push(c);
                out.val.push(te.deriv(l, a, b));
            }
        }
        out
    }

    /// Velocity value, gradient, and pure x/y derivatives up to `order` at `x`.
    pub fn eval_velocity(&self, u: &[f64], x: [f64; 2], order: usize) -> Result<VelocitySample> {
        let elem = self.mesh.locate(x)?;
        let el = self.mesh.element(elem);
        let nd = order.max(1);
        let ex = self.vx.eval_on_element(el.ex, el.ey, x, nd, nd);
        let ey = self.vy.eval_on_element(el.ex, el.ey, x, nd, nd);
        let off = self.num_vx();
        let mut s = VelocitySample {
            value: [0.0; 2],
            grad: [[0.0; 2]; 2],
            along_x: vec![[0.0; 2]; order + 1],
            along_y: vec![[0.0; 2]; order + 1],
        };
        for (c, te, shift) in [(0usize, &ex, 0usize), (1, &ey, off)] {
            for l in 0..te.len() {
                let coef = u[te.dof(l) + shift];
                s.value[c] += coef * te.deriv(l, 0, 0);
                s.grad[c][0] += coef * te.deriv(l, 1, 0);
                s.grad[c][1] += coef * te.deriv(l, 0, 1);
                for d in 0..=order {
                    s.along_x[d][c] += coef * te.deriv(l, d, 0);
                    s.along_y[d][c] += coef * te.deriv(l, 0, d);
                }
            }
        }
        Ok(s)
    }

    /// Pressure value at `x`.
    pub fn eval_pressure(&self, p: &[f64], x: [f64; 2]) -> Result<f64> {
        let elem = self.mesh.locate(x)?;
        let (dofs, vals) = self.pressure_basis(elem, x);
        Ok(dofs.iter().zip(&vals).map(|(&d, &v)| p[d] * v).sum())
    }

    /// Pointwise divergence at `x`.
    pub fn eval_divergence(&self, u: &[f64], x: [f64; 2]) -> Result<f64> {
        let s = self.eval_velocity(u, x, 1)?;
        Ok(s.grad[0][0] + s.grad[1][1])
    }

    /// Jump basis `[[d^m_n v]] = d^m_n v+ - d^m_n v-` on an interior facet at
    /// `x`, with DOFs shared by both sides merged.
    pub fn jump_basis(&self, facet: &Facet, x: [f64; 2], order: usize) -> Result<DirectionalBasis> {
        let minus = facet.minus.ok_or_else(|| {
            Error::Usage("normal-derivative jumps are only defined on interior facets".into())
        })?;
        let axis = facet.normal_axis;
        let sign = facet.normal[axis.index()].powi(order as i32);
        let plus = self.directional_basis(facet.plus, x, axis, order);
        let minus = self.directional_basis(minus, x, axis, order);
        let mut out = DirectionalBasis::default();
        let mut push = |dof: usize, comp: usize, v: f64| {
            if let Some(pos) = out.dofs.iter().position(|&d| d == dof) {
                out.val[pos] += v;
            } else {
                out.dofs.push(dof);
                out.comp.push(comp);
                out.val.push(v);
            }
        };
        for l in 0..plus.dofs.len() {
            push(plus.dofs[l], plus.comp[l], sign * plus.val[l]);
        }
        for l in 0..minus.dofs.len() {
            push(minus.dofs[l], minus.comp[l], -sign * minus.val[l]);
        }
        Ok(out)
    }

    /// Stream-function velocity `(d psi/dy, -d psi/dx)` for `psi` in the
    /// spline space `S(k'+1, k'+1)`; always exactly divergence free.
    pub fn curl_of_potential(&self, psi: &[f64]) -> Vec<f64> {
        let kx = &self.vx.kx;
        let ky = &self.vy.ky;
        let (nx, ny) = (kx.num_basis(), ky.num_basis());
        assert_eq!(psi.len(), nx * ny);
        let mut u = vec![0.0; self.num_velocity()];
        // u1 = d psi / dy lives in S(k'+1, k')
        for ix in 0..nx {
            let col: Vec<f64> = (0..ny).map(|iy| psi[ix + nx * iy]).collect();
            let d = ky.derivative_coefficients(&col);
            for (iy, v) in d.into_iter().enumerate() {
                u[self.vx.dof(ix, iy)] = v;
            }
        }
        // u2 = -d psi / dx lives in S(k', k'+1)
        let off = self.num_vx();
        for iy in 0..ny {
            let row: Vec<f64> = (0..nx).map(|ix| psi[ix + nx * iy]).collect();
            let d = kx.derivative_coefficients(&row);
            for (ix, v) in d.into_iter().enumerate() {
                u[off + self.vy.dof(ix, iy)] = -v;
            }
        }
        u
    }

    /// Dimensions of the stream-function space used by [`Self::curl_of_potential`].
    pub fn potential_dims(&self) -> (usize, usize) {
        (self.vx.kx.num_basis(), self.vy.ky.num_basis())
    }
}

/// Vx DOFs on the left/right edges and Vy DOFs on the bottom/top edges; these
/// carry the normal trace of the velocity.
pub fn classify_boundary_dofs(pair: &DivConformingPair) -> Vec<usize> {
    let mut out = Vec::new();
    let (nx, ny) = pair.vx.dims();
    for iy in 0..ny {
        out.push(pair.vx.dof(0, iy));
        out.push(pair.vx.dof(nx - 1, iy));
    }
    let off = pair.num_vx();
    let (nx, ny) = pair.vy.dims();
    for ix in 0..nx {
        out.push(off + pair.vy.dof(ix, 0));
        out.push(off + pair.vy.dof(ix, ny - 1));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `[[d^order_n u]]` at a point of an interior facet.
pub fn facet_normal_derivative_jump(
    pair: &DivConformingPair,
    u: &[f64],
    facet: &Facet,
    x: [f64; 2],
    order: usize,
) -> Result<[f64; 2]> {
    let jb = pair.jump_basis(facet, x, order)?;
    let mut j = [0.0; 2];
    for l in 0..jb.dofs.len() {
        j[jb.comp[l]] += u[jb.dofs[l]] * jb.val[l];
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::gauss_rule;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn pair_dimensions() {
        let pair = DivConformingPair::uniform(2, 1, (0.0, 1.0)).unwrap();
        assert_eq!(pair.vx.dims(), (4, 3));
        assert_eq!(pair.vy.dims(), (3, 4));
        assert_eq!(pair.q.dims(), (3, 3));
        assert_eq!(pair.num_velocity(), 24);
        assert_eq!(pair.num_pressure(), 9);

        // one element: Q is the bilinear polynomials
        let pair = DivConformingPair::uniform(1, 1, (0.0, 1.0)).unwrap();
        assert_eq!(pair.num_pressure(), 4);

        let pair = DivConformingPair::uniform(16, 2, (0.0, 1.0)).unwrap();
        assert_eq!(pair.vx.dims(), (19, 18));
        assert_eq!(pair.alpha_prime, 1);
    }

    #[test]
    fn degrees_and_regularity() {
        let pair = DivConformingPair::uniform(4, 3, (0.0, 1.0)).unwrap();
        assert_eq!((pair.vx.kx.degree(), pair.vx.ky.degree()), (4, 3));
        assert_eq!((pair.vy.kx.degree(), pair.vy.ky.degree()), (3, 4));
        assert_eq!((pair.q.kx.degree(), pair.q.ky.degree()), (3, 3));
        assert_eq!(pair.vx.kx.regularity()[1], 3);
        assert_eq!(pair.vx.ky.regularity()[1], 2);
        assert_eq!(pair.q.kx.regularity()[2], 2);
    }

    #[test]
    fn zero_degree_rejected() {
        let mesh = CartesianMesh::uniform(2, 2, (0.0, 1.0), (0.0, 1.0)).unwrap();
        assert!(matches!(DivConformingPair::new(&mesh, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn boundary_dof_counts() {
        let pair = DivConformingPair::uniform(2, 1, (0.0, 1.0)).unwrap();
        let nvx = pair.num_vx();
        let vx_count = pair.normal_boundary_dofs.iter().filter(|&&d| d < nvx).count();
        assert_eq!(vx_count, 6);
        assert_eq!(pair.normal_boundary_dofs.len(), 12);

        // one element, k' = 1: Vx is 3x2 and Vy is 2x3, two edge columns each
        let pair = DivConformingPair::uniform(1, 1, (0.0, 1.0)).unwrap();
        assert_eq!(pair.normal_boundary_dofs.len(), 8);
    }

    #[test]
    fn constrained_boundary_dofs_give_zero_normal_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kp in 1..=3 {
            let pair = DivConformingPair::uniform(3, kp, (0.0, 2.0)).unwrap();
            let mut u = random_vec(pair.num_velocity(), &mut rng);
            for &d in &pair.normal_boundary_dofs {
                u[d] = 0.0;
            }
            for _ in 0..50 {
                let t = rng.gen_range(0.0..2.0);
                let side = rng.gen_range(0..4);
                let (x, n) = match side {
                    0 => ([0.0, t], 0),
                    1 => ([2.0, t], 0),
                    2 => ([t, 0.0], 1),
                    _ => ([t, 2.0], 1),
                };
                let s = pair.eval_velocity(&u, x, 0).unwrap();
                assert!(s.value[n].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_and_constant_states() {
        let pair = DivConformingPair::uniform(3, 2, (0.0, 1.0)).unwrap();
        let zero = vec![0.0; pair.num_velocity()];
        let s = pair.eval_velocity(&zero, [0.3, 0.7], 2).unwrap();
        assert_eq!(s.value, [0.0, 0.0]);
        assert!(s.along_x.iter().chain(&s.along_y).all(|v| *v == [0.0, 0.0]));

        // all Vx coefficients equal one reproduce u = (1, 0)
        let mut u = vec![0.0; pair.num_velocity()];
        u[..pair.num_vx()].iter_mut().for_each(|c| *c = 1.0);
        let s = pair.eval_velocity(&u, [0.41, 0.93], 1).unwrap();
        assert_abs_diff_eq!(s.value[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.value[1], 0.0, epsilon = 1e-14);
        for row in s.grad {
            for g in row {
                assert_abs_diff_eq!(g, 0.0, epsilon = 1e-12);
            }
        }
        assert!(pair.eval_velocity(&u, [1.2, 0.5], 0).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pair = DivConformingPair::uniform(4, 2, (0.0, 1.0)).unwrap();
        let u = random_vec(pair.num_velocity(), &mut rng);
        let h = 1e-6;
        for _ in 0..20 {
            let x = [rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95)];
            let s = pair.eval_velocity(&u, x, 1).unwrap();
            for j in 0..2 {
                let mut xp = x;
                let mut xm = x;
                xp[j] += h;
                xm[j] -= h;
                let vp = pair.eval_velocity(&u, xp, 0).unwrap().value;
                let vm = pair.eval_velocity(&u, xm, 0).unwrap().value;
                for i in 0..2 {
                    let fd = (vp[i] - vm[i]) / (2.0 * h);
                    let scale = s.grad[i][j].abs().max(1.0);
                    assert!((fd - s.grad[i][j]).abs() / scale < 1e-6);
                }
            }
        }
    }

    #[test]
    fn divergence_free_potential_and_normal_continuity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kp in 1..=3 {
            let pair = DivConformingPair::uniform(4, kp, (0.0, 1.0)).unwrap();
            let (a, b) = pair.potential_dims();
            let psi = random_vec(a * b, &mut rng);
            let u = pair.curl_of_potential(&psi);
            for _ in 0..30 {
                let x = [rng.gen(), rng.gen()];
                assert!(pair.eval_divergence(&u, x).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn normal_component_continuous_to_order_alpha_plus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rule = gauss_rule(3).unwrap();
        for kp in 1..=3 {
            let pair = DivConformingPair::uniform(4, kp, (0.0, 1.0)).unwrap();
            for _ in 0..5 {
                let u = random_vec(pair.num_velocity(), &mut rng);
                for f in pair.mesh.interior_facets() {
                    let ni = f.normal_axis.index();
                    for (x, _) in crate::mesh::facet_quadrature(f, &rule) {
                        // zeroth order: the normal trace itself
                        let j0 = facet_normal_derivative_jump(&pair, &u, f, x, 0).unwrap();
                        assert!(j0[ni].abs() < 1e-11);
                        let j = facet_normal_derivative_jump(&pair, &u, f, x, pair.alpha_prime + 1).unwrap();
                        assert!(j[ni].abs() < 1e-11 * (1.0 + j[1 - ni].abs()), "kp {kp}: {j:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn jump_of_polynomial_vanishes() {
        // u = (y^k', x^k') lies in the space and is a global polynomial
        let kp = 2;
        let pair = DivConformingPair::uniform(4, kp, (0.0, 1.0)).unwrap();
        let f = |x: [f64; 2]| [x[1] * x[1] + x[0], x[0] * x[0] - x[1]];
        let u = l2_project_test(&pair, &f);
        let rule = gauss_rule(3).unwrap();
        for facet in pair.mesh.interior_facets() {
            for (x, _) in crate::mesh::facet_quadrature(facet, &rule) {
                let j = facet_normal_derivative_jump(&pair, &u, facet, x, kp).unwrap();
                assert!(j[0].abs() < 1e-9 && j[1].abs() < 1e-9, "{j:?}");
            }
        }
    }

    #[test]
    fn single_dof_jump_matches_univariate_derivatives() {
        let kp = 1;
        let pair = DivConformingPair::uniform(4, kp, (0.0, 1.0)).unwrap();
        // vertical facet at x = 0.5 between element columns 1 and 2, row 1
        let facet = *pair
            .mesh
            .interior_facets()
            .iter()
            .find(|f| f.normal_axis == Axis::X && f.coordinate == 0.5 && f.span.0 == 0.25)
            .unwrap();
        // a Vy (tangential) function straddling the facet
        let (ix, iy) = (2, 2);
        let dof = pair.num_vx() + pair.vy.dof(ix, iy);
        let mut u = vec![0.0; pair.num_velocity()];
        u[dof] = 1.0;
        let x = [0.5, 0.3];
        let j = facet_normal_derivative_jump(&pair, &u, &facet, x, 1).unwrap();
        // oracle: one-sided univariate derivatives times the y factor
        let kx = &pair.vy.kx;
        let left = kx.eval_on_element(1, 0.5, 1);
        let right = kx.eval_on_element(2, 0.5, 1);
        let dl = if ix >= left.first_index() && ix <= left.span {
            left.values[1][ix - left.first_index()]
        } else {
            0.0
        };
        let dr = if ix >= right.first_index() && ix <= right.span {
            right.values[1][ix - right.first_index()]
        } else {
            0.0
        };
        let ey = pair.vy.ky.eval_nonzero_basis(0.3, 0).unwrap();
        let fy = ey.values[0][iy - ey.first_index()];
        assert!(j[1].abs() > 1e-3);
        assert_abs_diff_eq!(j[1], (dl - dr) * fy, epsilon = 1e-12);
        assert_abs_diff_eq!(j[0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn jump_on_boundary_facet_is_usage_error() {
        let pair = DivConformingPair::uniform(2, 1, (0.0, 1.0)).unwrap();
        let u = vec![0.0; pair.num_velocity()];
        let f = pair.mesh.boundary_facets()[0];
        let r = facet_normal_derivative_jump(&pair, &u, &f, f.point(0.2), 1);
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    /// Dense component-wise L2 projection used only to build test states.
    fn l2_project_test(pair: &DivConformingPair, f: &dyn Fn([f64; 2]) -> [f64; 2]) -> Vec<f64> {
        let n = pair.num_velocity();
        let mut m = vec![vec![0.0; n]; n];
        let mut b = vec![0.0; n];
        let rule = gauss_rule(pair.k_prime + 3).unwrap();
        for e in 0..pair.mesh.num_elements() {
            for (x, w) in pair.mesh.element_quadrature(e, &rule) {
                let vb = pair.velocity_basis(e, x);
                let fx = f(x);
                for a in 0..vb.len() {
                    b[vb.dofs[a]] += w * fx[vb.comp[a]] * vb.val[a];
                    for c in 0..vb.len() {
                        if vb.comp[a] == vb.comp[c] {
                            m[vb.dofs[a]][vb.dofs[c]] += w * vb.val[a] * vb.val[c];
                        }
                    }
                }
            }
        }
        // Gaussian elimination (SPD, no pivoting needed)
        for k in 0..n {
            for i in k + 1..n {
                let r = m[i][k] / m[k][k];
                if r != 0.0 {
                    for j in k..n {
                        m[i][j] -= r * m[k][j];
                    }
                    b[i] -= r * b[k];
                }
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
            x[k] = (b[k] - s) / m[k][k];
        }
        x
    }
}
