//! Sparse matrix plumbing over `faer`.

use faer::linalg::solvers::Solve;
use std::sync::Mutex;

use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::error::{Error, Result};

/// Coordinate-format accumulator; duplicate entries are summed on build.
#[derive(Clone, Debug, Default)]
pub struct Coo {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<Triplet<usize, usize, f64>>,
}

impl Coo {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push(Triplet::new(row, col, val));
    }

    /// Appends `scale * other`, shifted by `(row_off, col_off)`.
    pub fn append(&mut self, other: &SparseMatrix, scale: f64, row_off: usize, col_off: usize) {
        for (r, c, v) in other.iter() {
            self.push(r + row_off, c + col_off, scale * v);
        }
    }

    pub fn build(&self) -> SparseMatrix {
        SparseMatrix(
            SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &self.entries)
                .expect("triplet indices are in bounds"),
        )
    }
}

/// Compressed sparse column matrix.
#[derive(Clone, Debug)]
pub struct SparseMatrix(pub SparseColMat<usize, f64>);

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Coo::new(nrows, ncols).build()
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn nnz(&self) -> usize {
        self.0.val().len()
    }

    /// Iterates stored entries `(row, col, value)` column by column.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let sym = self.0.symbolic();
        let col_ptr = sym.col_ptr();
        let row_idx = sym.row_idx();
        let val = self.0.val();
        (0..self.ncols()).flat_map(move |c| (col_ptr[c]..col_ptr[c + 1]).map(move |k| (row_idx[k], c, val[k])))
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols());
        let mut y = vec![0.0; self.nrows()];
        for (r, c, v) in self.iter() {
            y[r] += v * x[c];
        }
        y
    }

    /// `A^T x`
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows());
        let mut y = vec![0.0; self.ncols()];
        for (r, c, v) in self.iter() {
            y[c] += v * x[r];
        }
        y
    }

    /// `u^T A v`
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        self.iter().map(|(r, c, a)| u[r] * a * v[c]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.val().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A - A^T|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        let t = self.transpose();
        let mut c = Coo::new(self.nrows(), self.ncols());
        c.append(self, 1.0, 0, 0);
        c.append(&t, -1.0, 0, 0);
        c.build().max_abs()
    }

    pub fn transpose(&self) -> Self {
        let mut c = Coo::new(self.ncols(), self.nrows());
        for (r, col, v) in self.iter() {
            c.push(col, r, v);
        }
        c.build()
    }

    /// Sum of several matrices with scales.
    pub fn combine(parts: &[(&SparseMatrix, f64)]) -> Self {
        let (nr, nc) = (parts[0].0.nrows(), parts[0].0.ncols());
        let mut c = Coo::new(nr, nc);
        for (m, s) in parts {
            assert_eq!((m.nrows(), m.ncols()), (nr, nc));
            c.append(m, *s, 0, 0);
        }
        c.build()
    }

    /// Positions of stored entries, used to compare sparsity patterns.
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        self.iter().map(|(r, c, _)| (r, c)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols()]; self.nrows()];
        for (r, c, v) in self.iter() {
            d[r][c] += v;
        }
        d
    }
}

/// Sparse LU factorization that can be reused for several right-hand sides.
pub struct SparseLu {
    lu: Lu<usize, f64>,
    n: usize,
}

impl SparseLu {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Singular(format!(
                "matrix is not square ({} x {})",
                a.nrows(),
                a.ncols()
            )));
        }
        let lu = a
            .0
            .sp_lu()
            .map_err(|e| Error::Singular(format!("sparse LU of a {}x{} matrix failed: {e:?}", a.nrows(), a.ncols())))?;
        Ok(Self { lu, n: a.nrows() })
    }

    fn with_symbolic(a: &SparseMatrix, symbolic: SymbolicLu<usize>) -> Result<Self> {
        let lu = Lu::try_new_with_symbolic(symbolic, a.0.as_ref())
            .map_err(|e| Error::Singular(format!("sparse LU of a {}x{} matrix failed: {e:?}", a.nrows(), a.ncols())))?;
        Ok(Self { lu, n: a.nrows() })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(b.len(), self.n);
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.lu.solve(&rhs);
        let out: Vec<f64> = (0..self.n).map(|i| x[(i, 0)]).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular("solution contains non-finite entries".into()));
        }
        Ok(out)
    }
}

/// Reuses the symbolic LU analysis while the sparsity pattern stays the same.
#[derive(Default)]
pub struct LuCache {
    entry: Mutex<Option<CachedPattern>>,
}

/// Column pointers, row indices and the symbolic factorization of that pattern.
type CachedPattern = (Vec<usize>, Vec<usize>, SymbolicLu<usize>);

impl LuCache {
    pub fn factor(&self, a: &SparseMatrix) -> Result<SparseLu> {
        if a.nrows() != a.ncols() {
            return SparseLu::new(a);
        }
        let sym = a.0.symbolic();
        let mut entry = self.entry.lock().expect("LU cache lock");
        if let Some((cp, ri, s)) = entry.as_ref() {
            if cp.as_slice() == sym.col_ptr() && ri.as_slice() == sym.row_idx() {
                return SparseLu::with_symbolic(a, s.clone());
            }
        }
        let s = SymbolicLu::try_new(sym)
            .map_err(|e| Error::Singular(format!("symbolic LU of a {}x{} matrix failed: {e:?}", a.nrows(), a.ncols())))?;
        *entry = Some((sym.col_ptr().to_vec(), sym.row_idx().to_vec(), s.clone()));
        SparseLu::with_symbolic(a, s)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += s * x`
pub fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}
