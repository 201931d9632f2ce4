//! Dense Hermitian spectral helpers on top of nalgebra.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::Operator;

/// Eigenvalues in ascending order with matching eigenvector columns. Only the Hermitian part
/// `(M + M*)/2` is decomposed.
pub fn hermitian_eigen(m: &Operator) -> (Vec<f64>, Operator) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Operator::zeros(0, 0));
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Operator::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_spectrum(m: &Operator) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// `V f(Λ) V*` for a Hermitian matrix `V Λ V*`.
pub fn hermitian_function(values: &[f64], vectors: &Operator, f: impl Fn(f64) -> f64) -> Operator {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (c, &v) in values.iter().enumerate() {
        let s = Complex64::new(f(v), 0.0);
        for r in 0..n {
            scaled[(r, c)] *= s;
        }
    }
    scaled * vectors.adjoint()
}

/// Spectral norm.
pub fn op_norm(m: &Operator) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().fold(0.0, |a: f64, &b| a.max(b))
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn rank(m: &Operator, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().fold(0.0, |a: f64, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Orthogonal projector onto the column space, dropping singular values below `rel_tol`
/// times the largest one.
pub fn column_projector(m: &Operator, rel_tol: f64) -> Operator {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return Operator::zeros(rows, rows);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let max = svd.singular_values.iter().fold(0.0, |a: f64, &b| a.max(b));
    let mut p = Operator::zeros(rows, rows);
    if max == 0.0 {
        return p;
    }
    for (c, &s) in svd.singular_values.iter().enumerate() {
        if s > rel_tol * max {
            let col = u.column(c);
            p += col * col.adjoint();
        }
    }
    p
}
