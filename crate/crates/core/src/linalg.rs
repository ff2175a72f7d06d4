use nalgebra::{Cholesky, DMatrix, Dyn, SymmetricEigen};

/// Relative pivot threshold below which a symmetric matrix is treated as singular.
pub(crate) const PIVOT_RTOL: f64 = 1e-11;

/// Cholesky factor of a symmetric positive definite matrix, rejecting pivots
/// that are negligible relative to their own diagonal entry.
pub(crate) fn cholesky_checked(m: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if m.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l_dirty();
    for j in 0..m.nrows() {
        let pivot = l[(j, j)] * l[(j, j)];
        let diag = m[(j, j)];
        if diag <= 0.0 || pivot <= PIVOT_RTOL * diag {
            return None;
        }
    }
    Some(chol)
}

/// Indices of coordinates that load on the numerical null space of a PSD matrix.
pub(crate) fn null_space_support(m: &DMatrix<f64>) -> Vec<usize> {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let cutoff = PIVOT_RTOL * scale.max(f64::MIN_POSITIVE);
    let mut support = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= cutoff {
            for j in 0..n {
                if eig.eigenvectors[(j, k)].abs() >= 0.1 && !support.contains(&j) {
                    support.push(j);
                }
            }
        }
    }
    support.sort_unstable();
    if support.is_empty() {
        support = (0..n).collect();
    }
    support
}
