//! Nonnegative least squares `min ‖A w − b‖₂, w ≥ 0` by projected gradient
//! with the fixed step `1/L`, `L = λ_max(AᵀA)`, followed by an exact
//! least-squares solve on the positive support when that stays feasible.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub weights: Vec<f64>,
    /// `‖A w − b‖₂` at the returned weights.
    pub residual: f64,
    pub iterations: usize,
}

/// `columns[k]` is the k-th column of `A`. Stops early once the residual
/// drops below `target_residual`. `warm_start` may be shorter than the
/// column count; missing entries start at zero.
pub fn projected_gradient(
    columns: &[Vec<f64>],
    target: &[f64],
    max_iter: usize,
    target_residual: f64,
    warm_start: Option<&[f64]>,
) -> NnlsSolution {
    let k = columns.len();
    let d = target.len();
    let b = DVector::from_column_slice(target);
    if k == 0 {
        return NnlsSolution { weights: Vec::new(), residual: b.norm(), iterations: 0 };
    }
    let a = DMatrix::from_fn(d, k, |i, j| columns[j][i]);
    let lipschitz = if k <= d {
        top_eigenvalue(a.transpose() * &a)
    } else {
        top_eigenvalue(&a * a.transpose())
    };
    let mut w = DVector::zeros(k);
    if let Some(ws) = warm_start {
        for (slot, &v) in w.iter_mut().zip(ws) {
            *slot = v.max(0.0);
        }
    }
    if lipschitz <= 0.0 {
        return NnlsSolution { weights: w.iter().copied().collect(), residual: b.norm(), iterations: 0 };
    }
    let step = 1.0 / lipschitz;
    let mut r = &a * &w - &b;
    let mut iterations = 0;
    while iterations < max_iter && r.norm() >= target_residual {
        let grad = a.transpose() * &r;
        for (wi, gi) in w.iter_mut().zip(grad.iter()) {
            *wi = (*wi - step * gi).max(0.0);
        }
        r = &a * &w - &b;
        iterations += 1;
    }
    if let Some((polished, res)) = polish_on_support(&a, &b, &w) {
        if res < r.norm() {
            w = polished;
            r = &a * &w - &b;
        }
    }
    NnlsSolution { weights: w.iter().copied().collect(), residual: r.norm(), iterations }
}

/// Unconstrained least squares on the `k` heaviest columns, for every `k`
/// up to the row count; the best fit that stays nonnegative wins.
fn polish_on_support(a: &DMatrix<f64>, b: &DVector<f64>, w: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let mut order: Vec<usize> = (0..w.len()).filter(|&k| w[k] > 0.0).collect();
    order.sort_by(|&i, &j| w[j].total_cmp(&w[i]));
    order.truncate(a.nrows());
    let mut best: Option<(DVector<f64>, f64)> = None;
    for k in 1..=order.len() {
        let support = &order[..k];
        let Ok(x) = a.select_columns(support).svd(true, true).solve(b, 1e-12) else {
            continue;
        };
        if x.iter().any(|&v| v < 0.0) {
            continue;
        }
        let mut out = DVector::zeros(w.len());
        for (&col, &v) in support.iter().zip(x.iter()) {
            out[col] = v;
        }
        let res = (a * &out - b).norm();
        if best.as_ref().is_none_or(|(_, r)| res < *r) {
            best = Some((out, res));
        }
    }
    best
}

fn top_eigenvalue(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_nonnegative_combination() {
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 1.0]];
        let sol = projected_gradient(&cols, &[2.0, 1.0, 1.0], 5000, 1e-12, None);
        assert!(sol.residual < 1e-10, "{sol:?}");
        assert!((sol.weights[0] - 1.0).abs() < 1e-9 && sol.weights[1].abs() < 1e-9);
    }

    #[test]
    fn clamps_negative_solution() {
        // Unconstrained solution would be w = -1.
        let sol = projected_gradient(&[vec![1.0, 0.0]], &[-1.0, 0.0], 100, 0.0, None);
        assert_eq!(sol.weights, vec![0.0]);
        assert!((sol.residual - 1.0).abs() < 1e-15);
    }
}
