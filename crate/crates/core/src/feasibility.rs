//! Alternating-projection feasibility for
//! `{σ ⪰ 0, Tr σ = 1, Tr(H_i σ) ≥ 0}` on a (possibly reduced) space.
//!
//! Dykstra's scheme alternates between the spectraplex `S` and the
//! polyhedral cone `C = {X : Tr(H_i X) ≥ 0 ∀i}`. When the sets intersect the
//! spectraplex iterate eventually satisfies every half-space within
//! tolerance. When they do not, the gap `x − y` tends to the minimal
//! displacement vector, which lies in the polar cone of `C`; its
//! multipliers `λ ≥ 0` give `λ_max(Σ λ_i H_i) < 0`, a verified sure loss.

use crate::linalg::{self, c64, frobenius_inner, frobenius_norm, ComplexMatrix};

/// Reduced gambles with zero Frobenius norm below this are always satisfied.
const ZERO_GAMBLE: f64 = 1e-14;

/// Sweeps of the coordinate-descent solver for the cone projection.
const CONE_SWEEPS: usize = 500;

/// Dual variables of the cone projection converge to this KKT residual.
const CONE_KKT_TOL: f64 = 1e-15;

/// How often (in iterations) to attempt a sure-loss certificate.
const CERTIFICATE_EVERY: usize = 5;

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    /// A unit-trace PSD point meeting every constraint within `tol`.
    Feasible { point: ComplexMatrix, residual: f64 },
    /// Simplex-normalized multipliers over the input gambles and the
    /// largest eigenvalue of the weighted sum (negative).
    Infeasible { multipliers: Vec<f64>, max_eigenvalue: f64, residual: f64 },
    Undecided { residual: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub outcome: Outcome,
    pub iterations: usize,
    pub history: Vec<f64>,
}

/// Problem over `d × d` Hermitian matrices.
pub(crate) struct Problem {
    dim: usize,
    /// Normalized constraint matrices of the non-trivial gambles.
    normalized: Vec<ComplexMatrix>,
    /// Frobenius norms used to normalize, per kept gamble.
    scales: Vec<f64>,
    /// Index into the caller's gamble list for each kept gamble.
    origin: Vec<usize>,
    total: usize,
    /// Gram matrix of the normalized constraints.
    gram: Vec<Vec<f64>>,
}

impl Problem {
    pub fn new(dim: usize, gambles: &[ComplexMatrix]) -> Self {
        let mut normalized = Vec::new();
        let mut scales = Vec::new();
        let mut origin = Vec::new();
        for (i, g) in gambles.iter().enumerate() {
            let h = linalg::hermitian_part(g);
            let s = frobenius_norm(&h);
            if s > ZERO_GAMBLE {
                normalized.push(h * c64(1.0 / s, 0.0));
                scales.push(s);
                origin.push(i);
            }
        }
        let k = normalized.len();
        let mut gram = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in i..k {
                let v = frobenius_inner(&normalized[i], &normalized[j]);
                gram[i][j] = v;
                gram[j][i] = v;
            }
        }
        Self { dim, normalized, scales, origin, total: gambles.len(), gram }
    }

    /// Largest violation `max_i max(0, −Tr(G_i X))` in the caller's units.
    pub fn violation(&self, x: &ComplexMatrix) -> f64 {
        self.normalized
            .iter()
            .zip(&self.scales)
            .map(|(h, s)| (-s * linalg::trace_product(h, x)).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Projection onto the cone, warm-started from `mu`; returns the
    /// projected point and leaves the multipliers in `mu`.
    fn project_cone(&self, w: &ComplexMatrix, mu: &mut [f64]) -> ComplexMatrix {
        let k = self.normalized.len();
        let b: Vec<f64> = self.normalized.iter().map(|h| frobenius_inner(h, w)).collect();
        for _ in 0..CONE_SWEEPS {
            let mut worst = 0.0_f64;
            for i in 0..k {
                let grad: f64 = b[i] + (0..k).map(|j| self.gram[i][j] * mu[j]).sum::<f64>();
                let next = (mu[i] - grad / self.gram[i][i]).max(0.0);
                worst = worst.max((next - mu[i]).abs());
                mu[i] = next;
            }
            if worst < CONE_KKT_TOL {
                break;
            }
        }
        let mut out = w.clone();
        for (h, &m) in self.normalized.iter().zip(mu.iter()) {
            if m > 0.0 {
                out += h * c64(m, 0.0);
            }
        }
        out
    }

    /// Checks whether `λ ≥ 0` (any scale) certifies `λ_max(Σ λ_i H_i) < −tol`.
    fn certificate(&self, lambda: &[f64], tol: f64) -> Option<(Vec<f64>, f64)> {
        let total: f64 = lambda.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return None;
        }
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for (h, &l) in self.normalized.iter().zip(lambda) {
            if l > 0.0 {
                sum += h * c64(l / total, 0.0);
            }
        }
        let top = linalg::max_eigenvalue(&sum);
        if top < -tol {
            Some((self.original_multipliers(lambda), top))
        } else {
            None
        }
    }

    /// Maps multipliers of the normalized constraints back to the caller's
    /// gambles, normalized to sum to one.
    fn original_multipliers(&self, lambda: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.total];
        for ((&l, &s), &i) in lambda.iter().zip(&self.scales).zip(&self.origin) {
            out[i] = l / s;
        }
        let sum: f64 = out.iter().sum();
        if sum > 0.0 {
            out.iter_mut().for_each(|v| *v /= sum);
        }
        out
    }

    pub fn solve(&self, tol: f64, iter_cap: usize) -> Solution {
        let d = self.dim;
        let mut x = linalg::identity(d) * c64(1.0 / d as f64, 0.0);
        let mut history = Vec::new();

        let residual = self.violation(&x);
        history.push(residual);
        if residual < tol {
            return Solution { outcome: Outcome::Feasible { point: x, residual }, iterations: 0, history };
        }
        // A single constraint that is negative definite already decides it.
        for i in 0..self.normalized.len() {
            let mut lambda = vec![0.0; self.normalized.len()];
            lambda[i] = 1.0;
            if let Some((multipliers, max_eigenvalue)) = self.certificate(&lambda, tol) {
                return Solution {
                    outcome: Outcome::Infeasible { multipliers, max_eigenvalue, residual },
                    iterations: 0,
                    history,
                };
            }
        }

        let k = self.normalized.len();
        let mut p = ComplexMatrix::zeros(d, d);
        let mut q = ComplexMatrix::zeros(d, d);
        let mut mu = vec![0.0; k];
        let mut cert_mu = vec![0.0; k];
        let mut residual = residual;
        for it in 1..=iter_cap {
            let y = self.project_cone(&(&x + &p), &mut mu);
            p = &x + &p - &y;
            let x_next = linalg::project_to_density(&(&y + &q));
            q = &y + &q - &x_next;
            x = x_next;

            residual = self.violation(&x);
            history.push(residual);
            if residual < tol {
                return Solution { outcome: Outcome::Feasible { point: x, residual }, iterations: it, history };
            }
            if it % CERTIFICATE_EVERY == 0 {
                let gap = &x - &y;
                if frobenius_norm(&gap) > tol {
                    self.project_cone(&gap, &mut cert_mu);
                    if let Some((multipliers, max_eigenvalue)) = self.certificate(&cert_mu, tol) {
                        return Solution {
                            outcome: Outcome::Infeasible { multipliers, max_eigenvalue, residual },
                            iterations: it,
                            history,
                        };
                    }
                }
            }
        }
        Solution { outcome: Outcome::Undecided { residual }, iterations: iter_cap, history }
    }
}
