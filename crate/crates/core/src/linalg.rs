//! Small dense-matrix layer used by all solvers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real symmetric matrix with mirrored insertion, so symmetry holds
/// exactly by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { m: DMatrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    /// Set entry `(i, j)` and its mirror.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.m[(i, j)] = v;
        self.m[(j, i)] = v;
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Determinant of `M - shift * I` via LU factorization.
    pub fn shifted_det(&self, shift: f64) -> f64 {
        let mut a = self.m.clone();
        for i in 0..a.nrows() {
            a[(i, i)] -= shift;
        }
        a.lu().determinant()
    }
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`, with its
    /// largest-magnitude component (first such index on ties) made positive.
    pub vectors: DMatrix<f64>,
}

/// Full symmetric eigendecomposition, sorted and sign-fixed.
pub fn eigen_sym(m: &SymMatrix) -> EigenSystem {
    let dim = m.dim();
    let se = nalgebra::SymmetricEigen::new(m.m.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let mut values = Vec::with_capacity(dim);
    let mut vectors = DMatrix::zeros(dim, dim);
    for (k, &src) in order.iter().enumerate() {
        values.push(se.eigenvalues[src]);
        let mut col = se.eigenvectors.column(src).clone_owned();
        let mut pivot = 0;
        for i in 1..dim {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(k, &col);
    }
    EigenSystem { values, vectors }
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_sym(m: &SymMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(m.m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Smallest/largest singular values of a square matrix plus the right
/// singular vector for the smallest one.
pub fn singular_extremes(m: &DMatrix<f64>) -> Result<(f64, f64, DVector<f64>)> {
    let svd = m.clone().svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::NumericalFailure("SVD did not return right singular vectors".into()))?;
    let sv = &svd.singular_values;
    let mut lo = 0;
    let mut hi = 0;
    for i in 1..sv.len() {
        if sv[i] < sv[lo] {
            lo = i;
        }
        if sv[i] > sv[hi] {
            hi = i;
        }
    }
    Ok((sv[lo], sv[hi], vt.row(lo).transpose()))
}
