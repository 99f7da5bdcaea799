//! Seeded random ensembles: Haar unit vectors, Haar product states and
//! Gaussian Hermitian matrices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c64, hermitian_part, ComplexMatrix, ComplexVector};
use crate::tensor::{ProductState, SystemShape};

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Normalized vector of independent standard complex Gaussians.
pub fn haar_vector(n: usize, rng: &mut Rng) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(n, |_, _| c64(gaussian(rng), gaussian(rng)));
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

/// One Haar-random unit vector per particle.
pub fn haar_product_state(shape: SystemShape, rng: &mut Rng) -> ProductState {
    let factors = (0..shape.m()).map(|_| haar_vector(shape.n(), rng)).collect();
    ProductState::from_factors_unchecked(factors)
}

/// A draw from the Gaussian unitary ensemble (unnormalized).
pub fn random_hermitian(dim: usize, rng: &mut Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| c64(gaussian(rng), gaussian(rng)));
    hermitian_part(&a)
}

/// `Σ σ_k σ_k†` for a few Gaussian columns: a random PSD matrix of the
/// given rank.
pub fn random_psd(dim: usize, rank: usize, rng: &mut Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, rank.max(1), |_, _| c64(gaussian(rng), gaussian(rng)));
    &a * a.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let a = haar_vector(3, &mut rng_from_seed(7));
        let b = haar_vector(3, &mut rng_from_seed(7));
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_states_are_valid() {
        let shape = SystemShape::new(3, 2).unwrap();
        let s = haar_product_state(shape, &mut rng_from_seed(1));
        assert!(ProductState::new(s.factors().to_vec()).is_ok());
    }
}
