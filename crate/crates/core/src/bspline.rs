//! Univariate B-spline knot vectors and basis evaluation.
//!
//! Basis functions and their derivatives are evaluated with the Cox-de Boor
//! triangular scheme (the derivative recursion of Piegl & Tiller, A2.3). Only
//! the `degree + 1` functions that are nonzero on a knot span are returned.

use crate::error::{Error, Result};

/// Knots closer than this (relative to the knot range) are treated as equal.
const KNOT_TOL: f64 = 1e-12;

/// Open, nondecreasing knot vector with its degree.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector {
    degree: usize,
    knots: Vec<f64>,
    unique: Vec<f64>,
    multiplicities: Vec<usize>,
    /// Knot index `i` with `knots[i] == unique[e] < knots[i + 1]` for each element `e`.
    element_spans: Vec<usize>,
}

/// Values and derivatives of the nonzero basis functions at one point.
///
/// `values[d][j]` is the `d`-th derivative of basis function `span - degree + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisEval {
    pub span: usize,
    pub degree: usize,
    pub values: Vec<Vec<f64>>,
}

impl BasisEval {
    /// Global index of the first nonzero basis function.
    pub fn first_index(&self) -> usize {
        self.span - self.degree
    }

    pub fn max_deriv(&self) -> usize {
        self.values.len() - 1
    }

    /// `d`-th derivative of the `j`-th local function.
    #[inline]
    pub fn get(&self, d: usize, j: usize) -> f64 {
        self.values[d][j]
    }
}

impl KnotVector {
    /// Builds a knot vector and validates that it is open: the first and last
    /// knots are repeated exactly `degree + 1` times.
    pub fn new(degree: usize, knots: Vec<f64>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Parameter("B-spline degree must be at least 1".into()));
        }
        if knots.len() < 2 * (degree + 1) {
            return Err(Error::Parameter(format!(
                "{} knots are too few for degree {degree}",
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::Parameter("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Parameter("knots must be nondecreasing".into()));
        }
        let lo = knots[0];
        let hi = knots[knots.len() - 1];
        if !(hi > lo) {
            return Err(Error::Parameter("knot range must have positive length".into()));
        }
        let tol = KNOT_TOL * (hi - lo);

        let mut unique = Vec::new();
        let mut multiplicities = Vec::new();
        let mut element_spans = Vec::new();
        for (i, &k) in knots.iter().enumerate() {
            match unique.last() {
                Some(&last) if k - last <= tol => *multiplicities.last_mut().unwrap() += 1,
                _ => {
                    if !unique.is_empty() {
                        element_spans.push(i - 1);
                    }
                    unique.push(k);
                    multiplicities.push(1);
                }
            }
        }
        let n = multiplicities.len();
        if multiplicities[0] != degree + 1 || multiplicities[n - 1] != degree + 1 {
            return Err(Error::Parameter(format!(
                "knot vector is not open: end multiplicities ({}, {}) must equal degree + 1 = {}",
                multiplicities[0],
                multiplicities[n - 1],
                degree + 1
            )));
        }
        if let Some(m) = multiplicities[1..n - 1].iter().find(|&&m| m > degree) {
            return Err(Error::Parameter(format!(
                "interior knot multiplicity {m} exceeds degree {degree}"
            )));
        }
        Ok(Self {
            degree,
            knots,
            unique,
            multiplicities,
            element_spans,
        })
    }

    /// Open knot vector on `[a, b]` with `num_elements` equal spans and
    /// interior multiplicity one (maximal smoothness).
    pub fn open_uniform(degree: usize, num_elements: usize, interval: (f64, f64)) -> Result<Self> {
        let (a, b) = interval;
        if num_elements == 0 {
            return Err(Error::Parameter("number of elements must be at least 1".into()));
        }
        if !(a < b) {
            return Err(Error::Parameter(format!("empty interval [{a}, {b}]")));
        }
        if degree == 0 {
            return Err(Error::Parameter("B-spline degree must be at least 1".into()));
        }
        let mut knots = vec![a; degree + 1];
        for i in 1..num_elements {
            knots.push(a + (b - a) * i as f64 / num_elements as f64);
        }
        knots.extend(std::iter::repeat_n(b, degree + 1));
        Self::new(degree, knots)
    }

    /// Open knot vector of maximal smoothness on arbitrary element breakpoints.
    pub fn from_breaks(degree: usize, breaks: &[f64]) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::Parameter("at least two breakpoints are required".into()));
        }
        let mut knots = vec![breaks[0]; degree + 1];
        knots.extend_from_slice(&breaks[1..breaks.len() - 1]);
        knots.extend(std::iter::repeat_n(breaks[breaks.len() - 1], degree + 1));
        Self::new(degree, knots)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn unique_knots(&self) -> &[f64] {
        &self.unique
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Regularity `degree - multiplicity` at every unique knot; `-1` at the ends.
    pub fn regularity(&self) -> Vec<i64> {
        self.multiplicities
            .iter()
            .map(|&m| self.degree as i64 - m as i64)
            .collect()
    }

    /// Dimension of the spline space.
    pub fn num_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn num_elements(&self) -> usize {
        self.unique.len() - 1
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.unique[0], self.unique[self.unique.len() - 1])
    }

    /// Knot span index of element `e`.
    pub fn element_span(&self, e: usize) -> usize {
        self.element_spans[e]
    }

    /// Element containing `x`, with half-open elements `[z_e, z_{e+1})` and the
    /// last element closed at the right end.
    pub fn find_element(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.interval();
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain { value: x, lo, hi });
        }
        let ne = self.num_elements();
        // upper_bound on the unique knots
        let idx = self.unique.partition_point(|&z| z <= x);
        Ok(idx.saturating_sub(1).min(ne - 1))
    }

    pub fn find_span(&self, x: f64) -> Result<usize> {
        Ok(self.element_spans[self.find_element(x)?])
    }

    /// Nonzero basis functions and derivatives up to `max_deriv` at `x`.
    pub fn eval_nonzero_basis(&self, x: f64, max_deriv: usize) -> Result<BasisEval> {
        let e = self.find_element(x)?;
        Ok(self.eval_on_element(e, x, max_deriv))
    }

    /// Evaluates the polynomial pieces belonging to element `e` at `x`.
    ///
    /// `x` may lie on (or slightly outside) the element boundary, which gives
    /// one-sided limits at knots.
    pub fn eval_on_element(&self, e: usize, x: f64, max_deriv: usize) -> BasisEval {
        let span = self.element_spans[e];
        BasisEval {
            span,
            degree: self.degree,
            values: ders_basis_funs(&self.knots, self.degree, span, x, max_deriv),
        }
    }

    /// Coefficients of the derivative of `sum_i c_i N_i` in the basis of the
    /// knot vector with the first and last knot removed (one degree lower).
    pub fn derivative_coefficients(&self, coeffs: &[f64]) -> Vec<f64> {
        let p = self.degree as f64;
        let n = self.num_basis();
        assert_eq!(coeffs.len(), n);
        (0..n - 1)
            .map(|i| {
                let dk = self.knots[i + self.degree + 1] - self.knots[i + 1];
                p * (coeffs[i + 1] - coeffs[i]) / dk
            })
            .collect()
    }

    /// The knot vector of degree `degree - 1` with the end knots dropped once.
    pub fn lowered(&self) -> Result<Self> {
        Self::new(self.degree - 1, self.knots[1..self.knots.len() - 1].to_vec())
    }
}

/// Cox-de Boor evaluation of all nonzero basis derivatives on `span`.
fn ders_basis_funs(knots: &[f64], p: usize, span: usize, x: f64, n: usize) -> Vec<Vec<f64>> {
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            // lower triangle holds knot differences
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![0.0; p + 1]; n + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let nd = n.min(p);
    let mut a = vec![vec![0.0; p + 1]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=nd {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if rk >= 0 {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk];
            }
            let j1: usize = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2: usize = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = p as f64;
    for k in 1..=nd {
        for v in ders[k].iter_mut() {
            *v *= factor;
        }
        factor *= (p - k) as f64;
    }
    ders
}
