//! Compressed-row sparse matrices and a Jacobi-preconditioned conjugate
//! gradient solver.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows at or above this count use a parallel matrix–vector product. Each row
/// is still summed sequentially, so results do not depend on scheduling.
const PARALLEL_ROWS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n x n` matrix from `(row, col, value)` triplets. Duplicates
    /// are summed in the order they were supplied.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = triplets.iter().find(|&&(i, j, _)| i >= n || j >= n) {
            return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { n, row_ptr, col_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Exact symmetry of both pattern and values.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Nonpositive off-diagonal entries and a positive diagonal.
    pub fn has_m_matrix_sign_pattern(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| if i == j { v > 0.0 } else { v <= 0.0 }))
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        let row_dot = |i: usize| -> f64 {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            s
        };
        if self.n >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row_dot(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row_dot(i);
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Principal submatrix on `keep` (in that order).
    pub fn submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut position = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let mut row_ptr = Vec::with_capacity(keep.len() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for &old in keep {
            let mut row: Vec<(usize, f64)> = self
                .row(old)
                .filter(|&(j, _)| position[j] != usize::MAX)
                .map(|(j, v)| (position[j], v))
                .collect();
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix { n: keep.len(), row_ptr, col_idx, values }
    }
}

/// A symmetric positive definite system `A x = b`.
#[derive(Debug, Clone)]
pub struct SpdSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

impl SpdSystem {
    /// Checks dimensions, exact symmetry and a positive diagonal.
    pub fn new(matrix: CsrMatrix, rhs: Vec<f64>) -> Result<Self> {
        if rhs.len() != matrix.dim() {
            return Err(Error::InvalidArgument(format!(
                "rhs has length {} but the matrix is {}x{}",
                rhs.len(),
                matrix.dim(),
                matrix.dim()
            )));
        }
        if !matrix.is_symmetric() {
            return Err(Error::InvalidArgument("matrix is not symmetric".into()));
        }
        if matrix.diagonal().iter().any(|&d| !(d > 0.0)) {
            return Err(Error::InvalidArgument("matrix has a nonpositive diagonal entry".into()));
        }
        Ok(Self { matrix, rhs })
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Iteration cap: `20 sqrt(n)`.
pub fn iteration_cap(n: usize) -> usize {
    ((20.0 * (n as f64).sqrt()).ceil() as usize).max(1)
}

/// Jacobi-preconditioned conjugate gradients from the zero vector, stopping at
/// `||b - A x|| <= tol ||b||`.
pub fn solve_spd_system(system: &SpdSystem, tol: f64) -> Result<CgSolution> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::InvalidArgument(format!("CG tolerance must lie in (0, 1e-4], got {tol}")));
    }
    let n = system.dim();
    let a = &system.matrix;
    let b = &system.rhs;
    let mut x = vec![0.0; n];
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok(CgSolution { x, iterations: 0, relative_residual: 0.0 });
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let cap = iteration_cap(n);
    let mut residual = 1.0;
    for iteration in 1..=cap {
        a.mul_vec_into(&p, &mut ap);
        let p_ap = dot(&p, &ap);
        if !(p_ap > 0.0) {
            return Err(Error::NotConverged { iterations: iteration, residual });
        }
        let alpha = rz / p_ap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        residual = dot(&r, &r).sqrt() / b_norm;
        if residual <= tol {
            return Ok(CgSolution { x, iterations: iteration, relative_residual: residual });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged { iterations: cap, residual })
}

/// Symmetric Gauss–Seidel sweeps for a system with the M-matrix sign pattern
/// and a nonnegative right-hand side, started from `max(x, 0)`.
///
/// Every update is a nonnegative combination, so there is no cancellation and
/// each component converges in the relative sense, including components many
/// orders of magnitude below the largest. Stops once no component changes by
/// more than `rel_tol` relative to itself; returns the number of sweeps.
pub fn gauss_seidel_polish(a: &CsrMatrix, b: &[f64], x: &mut [f64], rel_tol: f64, max_sweeps: usize) -> usize {
    let diag = a.diagonal();
    for xi in x.iter_mut() {
        *xi = xi.max(0.0);
    }
    let update = |i: usize, x: &mut [f64]| -> bool {
        let mut s = b[i];
        for (j, v) in a.row(i) {
            if j != i {
                s -= v * x[j];
            }
        }
        let new = s / diag[i];
        let settled = (new - x[i]).abs() <= rel_tol * new.abs();
        x[i] = new;
        settled
    };
    for sweep in 1..=max_sweeps {
        let mut settled = true;
        for i in 0..a.dim() {
            settled &= update(i, x);
        }
        for i in (0..a.dim()).rev() {
            settled &= update(i, x);
        }
        if settled {
            return sweep;
        }
    }
    max_sweeps
}
