//! Cartesian element mesh, facet skeleton, and Gauss-Legendre quadrature.

use crate::bspline::KnotVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

/// Axis-aligned box element.
#[derive(Clone, Copy, Debug)]
pub struct Element {
    pub ex: usize,
    pub ey: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Element {
    pub fn area(&self) -> f64 {
        (self.x.1 - self.x.0) * (self.y.1 - self.y.0)
    }

    pub fn diameter(&self) -> f64 {
        (self.x.1 - self.x.0).hypot(self.y.1 - self.y.0)
    }
}

/// A mesh facet. The normal points out of `plus`; on interior facets it
/// points into `minus`, so `n = n+ = -n-`.
#[derive(Clone, Copy, Debug)]
pub struct Facet {
    /// Direction of the facet normal (`X` for vertical facets).
    pub normal_axis: Axis,
    /// Fixed coordinate along the normal axis.
    pub coordinate: f64,
    /// Extent along the tangential axis.
    pub span: (f64, f64),
    pub plus: usize,
    pub minus: Option<usize>,
    pub normal: [f64; 2],
}

impl Facet {
    pub fn length(&self) -> f64 {
        self.span.1 - self.span.0
    }

    pub fn is_interior(&self) -> bool {
        self.minus.is_some()
    }

    /// Physical point at tangential coordinate `t`.
    pub fn point(&self, t: f64) -> [f64; 2] {
        match self.normal_axis {
            Axis::X => [self.coordinate, t],
            Axis::Y => [t, self.coordinate],
        }
    }
}

/// Gauss-Legendre rule on the reference interval `[0, 1]`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let len = b - a;
        self.points
            .iter()
            .zip(&self.weights)
            .map(move |(&p, &w)| (a + len * p, w * len))
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]` for `1 <= npts <= 10`.
pub fn gauss_rule(npts: usize) -> Result<QuadratureRule> {
    if !(1..=10).contains(&npts) {
        return Err(Error::Parameter(format!(
            "Gauss rule with {npts} points is not supported (1..=10)"
        )));
    }
    let n = npts;
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let legendre = |z: f64| {
        // (P_n(z), P_n'(z))
        let (mut p0, mut p1) = (1.0, z);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        if n == 1 {
            (z, 1.0)
        } else {
            (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
        }
    };
    for i in 0..n {
        // Newton iteration from the Tricomi initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, dp) = legendre(z);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(z).1;
        points[n - 1 - i] = 0.5 * (1.0 + z);
        weights[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    Ok(QuadratureRule { points, weights })
}

/// Quadrature points and weights on a facet segment.
pub fn facet_quadrature(facet: &Facet, rule: &QuadratureRule) -> Vec<([f64; 2], f64)> {
    rule.mapped(facet.span.0, facet.span.1)
        .map(|(t, w)| (facet.point(t), w))
        .collect()
}

/// Tensor-product mesh of the unique knots of two knot vectors.
#[derive(Clone, Debug)]
pub struct CartesianMesh {
    breaks_x: Vec<f64>,
    breaks_y: Vec<f64>,
    h: f64,
    interior: Vec<Facet>,
    boundary: Vec<Facet>,
}

impl CartesianMesh {
    pub fn new(kv_x: &KnotVector, kv_y: &KnotVector) -> Self {
        Self::from_breaks(kv_x.unique_knots().to_vec(), kv_y.unique_knots().to_vec())
    }

    /// Uniform `nx` by `ny` mesh of a box.
    pub fn uniform(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if nx == 0 || ny == 0 || !(x.0 < x.1) || !(y.0 < y.1) {
            return Err(Error::Parameter(format!(
                "invalid uniform mesh {nx}x{ny} on [{}, {}]x[{}, {}]",
                x.0, x.1, y.0, y.1
            )));
        }
        let bx = (0..=nx).map(|i| x.0 + (x.1 - x.0) * i as f64 / nx as f64).collect();
        let by = (0..=ny).map(|i| y.0 + (y.1 - y.0) * i as f64 / ny as f64).collect();
        Ok(Self::from_breaks(bx, by))
    }

    fn from_breaks(breaks_x: Vec<f64>, breaks_y: Vec<f64>) -> Self {
        let nx = breaks_x.len() - 1;
        let ny = breaks_y.len() - 1;
        let widest = |b: &[f64]| b.windows(2).fold(0.0f64, |m, w| m.max(w[1] - w[0]));
        let h = widest(&breaks_x).max(widest(&breaks_y));
        let id = |ex: usize, ey: usize| ex + nx * ey;

        let mut interior = Vec::with_capacity((nx - 1) * ny + nx * (ny - 1));
        for ey in 0..ny {
            for i in 1..nx {
                interior.push(Facet {
                    normal_axis: Axis::X,
                    coordinate: breaks_x[i],
                    span: (breaks_y[ey], breaks_y[ey + 1]),
                    plus: id(i - 1, ey),
                    minus: Some(id(i, ey)),
                    normal: [1.0, 0.0],
                });
            }
        }
        for j in 1..ny {
            for ex in 0..nx {
                interior.push(Facet {
                    normal_axis: Axis::Y,
                    coordinate: breaks_y[j],
                    span: (breaks_x[ex], breaks_x[ex + 1]),
                    plus: id(ex, j - 1),
                    minus: Some(id(ex, j)),
                    normal: [0.0, 1.0],
                });
            }
        }

        let mut boundary = Vec::with_capacity(2 * (nx + ny));
        for ey in 0..ny {
            let span = (breaks_y[ey], breaks_y[ey + 1]);
            boundary.push(Facet {
                normal_axis: Axis::X,
                coordinate: breaks_x[0],
                span,
                plus: id(0, ey),
                minus: None,
                normal: [-1.0, 0.0],
            });
            boundary.push(Facet {
                normal_axis: Axis::X,
                coordinate: breaks_x[nx],
                span,
                plus: id(nx - 1, ey),
                minus: None,
                normal: [1.0, 0.0],
            });
        }
        for ex in 0..nx {
            let span = (breaks_x[ex], breaks_x[ex + 1]);
            boundary.push(Facet {
                normal_axis: Axis::Y,
                coordinate: breaks_y[0],
                span,
                plus: id(ex, 0),
                minus: None,
                normal: [0.0, -1.0],
            });
            boundary.push(Facet {
                normal_axis: Axis::Y,
                coordinate: breaks_y[ny],
                span,
                plus: id(ex, ny - 1),
                minus: None,
                normal: [0.0, 1.0],
            });
        }

        Self {
            breaks_x,
            breaks_y,
            h,
            interior,
            boundary,
        }
    }

    pub fn nx(&self) -> usize {
        self.breaks_x.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.breaks_y.len() - 1
    }

    pub fn num_elements(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn breaks_x(&self) -> &[f64] {
        &self.breaks_x
    }

    pub fn breaks_y(&self) -> &[f64] {
        &self.breaks_y
    }

    /// Global mesh size: the longest element edge (`1/N` on a uniform unit-square mesh).
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn extent(&self) -> ((f64, f64), (f64, f64)) {
        (
            (self.breaks_x[0], self.breaks_x[self.nx()]),
            (self.breaks_y[0], self.breaks_y[self.ny()]),
        )
    }

    pub fn area(&self) -> f64 {
        let ((a, b), (c, d)) = self.extent();
        (b - a) * (d - c)
    }

    pub fn element(&self, id: usize) -> Element {
        let ex = id % self.nx();
        let ey = id / self.nx();
        Element {
            ex,
            ey,
            x: (self.breaks_x[ex], self.breaks_x[ex + 1]),
            y: (self.breaks_y[ey], self.breaks_y[ey + 1]),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.num_elements()).map(|e| self.element(e))
    }

    pub fn interior_facets(&self) -> &[Facet] {
        &self.interior
    }

    pub fn boundary_facets(&self) -> &[Facet] {
        &self.boundary
    }

    /// Element containing `x` (half-open convention, closed at the far edges).
    pub fn locate(&self, x: [f64; 2]) -> Result<usize> {
        let find = |breaks: &[f64], v: f64| -> Result<usize> {
            let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
            if !(v >= lo && v <= hi) {
                return Err(Error::Domain { value: v, lo, hi });
            }
            Ok(breaks.partition_point(|&z| z <= v).saturating_sub(1).min(breaks.len() - 2))
        };
        let ex = find(&self.breaks_x, x[0])?;
        let ey = find(&self.breaks_y, x[1])?;
        Ok(ex + self.nx() * ey)
    }

    /// Tensor-product quadrature on an element.
    pub fn element_quadrature(&self, id: usize, rule: &QuadratureRule) -> Vec<([f64; 2], f64)> {
        let el = self.element(id);
        let mut out = Vec::with_capacity(rule.len() * rule.len());
        for (y, wy) in rule.mapped(el.y.0, el.y.1) {
            for (x, wx) in rule.mapped(el.x.0, el.x.1) {
                out.push(([x, y], wx * wy));
            }
        }
        out
    }
}
