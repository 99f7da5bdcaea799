//! Local maximization over product states by alternating exact updates:
//! with every factor but one fixed, `z† A z` and `z† A z / z† B z` become
//! (generalized) Rayleigh quotients in the free factor.

use crate::linalg::{self, c64, hermitian_part, ComplexMatrix, ComplexVector};
use crate::tensor::{ProductState, SystemShape};

/// Sweeps stop once no factor moves by more than this (up to phase).
const FACTOR_STEP_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 500;

/// Relative cut-off for the null space of the denominator form.
const DENOMINATOR_RANK_TOL: f64 = 1e-12;

/// The `n × n` matrix `A_j` with `x_j† A_j x_j = z† A z` for the other
/// factors held fixed.
pub(crate) fn local_form(a: &ComplexMatrix, shape: SystemShape, factors: &[ComplexVector], slot: usize) -> ComplexMatrix {
    let n = shape.n();
    let dim = shape.dim();
    let columns: Vec<ComplexVector> = (0..n)
        .map(|k| {
            let mut acc: Option<ComplexVector> = None;
            for (j, f) in factors.iter().enumerate() {
                let v = if j == slot {
                    let mut e = ComplexVector::zeros(n);
                    e[k] = c64(1.0, 0.0);
                    e
                } else {
                    f.clone()
                };
                acc = Some(match acc {
                    None => v,
                    Some(prev) => prev.kronecker(&v),
                });
            }
            acc.unwrap_or_else(|| ComplexVector::zeros(dim))
        })
        .collect();
    let images: Vec<ComplexVector> = columns.iter().map(|w| a * w).collect();
    let out = ComplexMatrix::from_fn(n, n, |r, s| columns[r].dotc(&images[s]));
    hermitian_part(&out)
}

fn top_eigenvector(a: &ComplexMatrix) -> ComplexVector {
    let (_, vectors) = linalg::hermitian_eigen(a);
    vectors.column(a.nrows() - 1).into_owned()
}

/// Top generalized eigenvector of `(A, B)` restricted to `range(B)`.
fn top_generalized_eigenvector(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<ComplexVector> {
    let (values, vectors) = linalg::hermitian_eigen(b);
    let top = values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return None;
    }
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > DENOMINATOR_RANK_TOL * top).collect();
    let n = a.nrows();
    // W = U_r diag(b^{-1/2})
    let mut w = ComplexMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        let scale = 1.0 / values[src].sqrt();
        w.set_column(dst, &(vectors.column(src) * c64(scale, 0.0)));
    }
    let reduced = hermitian_part(&(w.adjoint() * a * &w));
    let y = top_eigenvector(&reduced);
    let x = &w * y;
    let norm = x.norm();
    (norm > 0.0).then(|| x.unscale(norm))
}

/// `min_θ ‖a − e^{iθ} b‖`.
fn phase_distance(a: &ComplexVector, b: &ComplexVector) -> f64 {
    let overlap = b.dotc(a);
    let norm = overlap.norm();
    if norm == 0.0 {
        return (a - b).norm();
    }
    (a - b * (overlap / norm)).norm()
}

/// Alternating maximization of `z† A z` over unit product states.
pub(crate) fn maximize_form(a: &ComplexMatrix, start: &ProductState) -> (ProductState, f64) {
    let shape = start.shape();
    let mut factors = start.factors().to_vec();
    for _ in 0..MAX_SWEEPS {
        let mut moved = 0.0_f64;
        for slot in 0..shape.m() {
            let local = local_form(a, shape, &factors, slot);
            let next = top_eigenvector(&local);
            moved = moved.max(phase_distance(&factors[slot], &next));
            factors[slot] = next;
        }
        if moved < FACTOR_STEP_TOL {
            break;
        }
    }
    let state = ProductState::from_factors_unchecked(factors);
    let value = linalg::quadratic_form(a, &state.vector()).re;
    (state, value)
}

/// Alternating maximization of `z† A z / z† B z` (with `B ⪰ 0`) over unit
/// product states where the denominator is positive.
pub(crate) fn maximize_ratio(a: &ComplexMatrix, b: &ComplexMatrix, start: &ProductState) -> Option<(ProductState, f64)> {
    let shape = start.shape();
    let mut factors = start.factors().to_vec();
    for _ in 0..MAX_SWEEPS {
        let mut moved = 0.0_f64;
        for slot in 0..shape.m() {
            let la = local_form(a, shape, &factors, slot);
            let lb = local_form(b, shape, &factors, slot);
            let Some(next) = top_generalized_eigenvector(&la, &lb) else {
                continue;
            };
            moved = moved.max(phase_distance(&factors[slot], &next));
            factors[slot] = next;
        }
        if moved < FACTOR_STEP_TOL {
            break;
        }
    }
    let state = ProductState::from_factors_unchecked(factors);
    let z = state.vector();
    let den = linalg::quadratic_form(b, &z).re;
    if den <= 0.0 {
        return None;
    }
    let value = linalg::quadratic_form(a, &z).re / den;
    Some((state, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_product_state, rng_from_seed};

    #[test]
    fn local_form_reproduces_quadratic_form() {
        let shape = SystemShape::new(2, 3).unwrap();
        let mut rng = rng_from_seed(3);
        let a = crate::sampling::random_hermitian(8, &mut rng);
        let s = haar_product_state(shape, &mut rng);
        let full = linalg::quadratic_form(&a, &s.vector()).re;
        for slot in 0..3 {
            let local = local_form(&a, shape, s.factors(), slot);
            let x = &s.factors()[slot];
            assert!((linalg::quadratic_form(&local, x).re - full).abs() < 1e-12);
        }
    }

    #[test]
    fn product_maximum_of_bell_projector_is_half() {
        let shape = SystemShape::new(2, 2).unwrap();
        let mut bell = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(i, j)] = c64(0.5, 0.0);
        }
        let start = haar_product_state(shape, &mut rng_from_seed(11));
        let (_, value) = maximize_form(&bell, &start);
        assert!((value - 0.5).abs() < 1e-12, "{value}");
    }
}
