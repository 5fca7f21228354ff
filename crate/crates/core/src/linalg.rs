//! Extremal eigenvalues of symmetric operators given only by their action.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

const MAX_STEPS: usize = 400;

/// Largest eigenvalue of a symmetric positive semidefinite operator by
/// Lanczos iteration with full reorthogonalisation.
pub fn lanczos_max_eigenvalue(dim: usize, apply: impl Fn(&DVector<f64>) -> DVector<f64>) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    let mut q = start_vector(dim);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut previous = f64::NAN;
    let steps = dim.min(MAX_STEPS);
    for k in 0..steps {
        let mut w = apply(&q);
        let alpha = q.dot(&w);
        w.axpy(-alpha, &q, 1.0);
        if let Some(prev) = basis.last() {
            w.axpy(-betas[k - 1], prev, 1.0);
        }
        basis.push(q.clone());
        // Two passes of Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        alphas.push(alpha);
        let beta = w.norm();
        let (theta, last) = ritz_top(&alphas, &betas);
        let settled = (theta - previous).abs() <= 1e-15 * theta.abs().max(1.0);
        let residual = beta * last.abs();
        if beta <= 1e-14 * theta.abs().max(1.0) || (settled && residual <= 1e-13 * theta.abs().max(1.0)) {
            return theta.max(0.0);
        }
        previous = theta;
        betas.push(beta);
        q = w / beta;
    }
    ritz_top(&alphas, &betas[..alphas.len() - 1]).0.max(0.0)
}

/// Top eigenvalue of the Lanczos tridiagonal and the last component of its
/// eigenvector.
fn ritz_top(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    (theta, eig.eigenvectors[(k - 1, idx)])
}

/// Deterministic start vector with no special alignment.
fn start_vector(dim: usize) -> DVector<f64> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let v = DVector::from_fn(dim, |_, _| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
    });
    let n = v.norm();
    v / n
}

/// Spectral norm of an operator M given M and M^T actions.
pub fn operator_norm(
    dim: usize,
    apply: impl Fn(&DVector<f64>) -> DVector<f64>,
    apply_t: impl Fn(&DVector<f64>) -> DVector<f64>,
) -> f64 {
    lanczos_max_eigenvalue(dim, |v| apply_t(&apply(v))).sqrt()
}

/// Largest singular value of a dense matrix.
pub fn dense_spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}
