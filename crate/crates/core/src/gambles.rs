//! Quadratic-form gambles `g(z, z) = z† G z` on product states, their
//! two-sided permutations and the exchange projection `Π⋆† G Π⋆`.

use crate::error::{Error, Result};
use crate::linalg::{self, c64, hermitian_deviation, hermitian_part, ComplexMatrix};
use crate::tensor::{sandwich_by_maps, symmetrizer, Permutation, ProductState, StarFlag, SystemShape};

/// Deviations from Hermiticity below this are symmetrized away on
/// construction; anything larger is rejected.
pub const HERMITIAN_REPAIR_TOL: f64 = 1e-8;

/// Largest imaginary residue discarded by [`Gamble::evaluate`].
pub const EVAL_IMAG_TOL: f64 = 1e-10;

/// A gamble, stored by its Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamble {
    shape: SystemShape,
    matrix: ComplexMatrix,
}

impl Gamble {
    pub fn new(shape: SystemShape, matrix: ComplexMatrix) -> Result<Self> {
        shape.check_matrix(&matrix, "gamble matrix")?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_REPAIR_TOL || !deviation.is_finite() {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = if deviation > 0.0 { hermitian_part(&matrix) } else { matrix };
        Ok(Self { shape, matrix })
    }

    /// The constant gamble `c`.
    pub fn constant(shape: SystemShape, c: f64) -> Self {
        Self { shape, matrix: linalg::identity(shape.dim()) * c64(c, 0.0) }
    }

    pub(crate) fn from_hermitian_unchecked(shape: SystemShape, matrix: ComplexMatrix) -> Self {
        Self { shape, matrix }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `(⊗ x_j)† G (⊗ x_j)`.
    pub fn evaluate(&self, state: &ProductState) -> Result<f64> {
        if state.shape() != self.shape {
            return Err(Error::DimensionMismatch(format!(
                "state has shape ({}), gamble has shape ({})",
                state.shape(),
                self.shape
            )));
        }
        let value = linalg::quadratic_form(&self.matrix, &state.vector());
        if value.im.abs() > EVAL_IMAG_TOL {
            return Err(Error::NotHermitian { deviation: value.im.abs() });
        }
        Ok(value.re)
    }

    /// `δ⋆ · π_l g π_r`, i.e. `δ⋆ · ½(P_l† G P_r + P_r† G P_l)`; with
    /// `star = None` the sign weight is omitted.
    pub fn permuted(&self, pl: &Permutation, pr: &Permutation, star: Option<StarFlag>) -> Result<Gamble> {
        let map_l = pl.basis_map(self.shape)?;
        let map_r = pr.basis_map(self.shape)?;
        let lr = sandwich_by_maps(&self.matrix, &map_l, &map_r);
        let rl = sandwich_by_maps(&self.matrix, &map_r, &map_l);
        let delta = star.map_or(1.0, |s| s.delta(pl.sign(), pr.sign()));
        Ok(Self { shape: self.shape, matrix: (lr + rl) * c64(0.5 * delta, 0.0) })
    }

    /// `ex⋆(g) = z† Π⋆† G Π⋆ z`.
    pub fn exchange_projection(&self, star: StarFlag) -> Result<Gamble> {
        let proj = symmetrizer(self.shape, star)?;
        Ok(self.projected_by(&proj))
    }

    pub(crate) fn projected_by(&self, proj: &ComplexMatrix) -> Gamble {
        let m = proj.adjoint() * &self.matrix * proj;
        Self { shape: self.shape, matrix: hermitian_part(&m) }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Gamble, b: f64) -> Result<Gamble> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch("gambles have different shapes".into()));
        }
        Ok(Self { shape: self.shape, matrix: &self.matrix * c64(a, 0.0) + &other.matrix * c64(b, 0.0) })
    }

    pub fn scaled(&self, a: f64) -> Gamble {
        Self { shape: self.shape, matrix: &self.matrix * c64(a, 0.0) }
    }
}

/// Free-function form of [`Gamble::evaluate`].
pub fn evaluate(g: &Gamble, s: &ProductState) -> Result<f64> {
    g.evaluate(s)
}

/// Free-function form of [`Gamble::permuted`].
pub fn permuted_gamble(g: &Gamble, pl: &Permutation, pr: &Permutation, star: Option<StarFlag>) -> Result<Gamble> {
    g.permuted(pl, pr, star)
}

/// Free-function form of [`Gamble::exchange_projection`].
pub fn exchange_projection(g: &Gamble, star: StarFlag) -> Result<Gamble> {
    g.exchange_projection(star)
}

/// `g − δ⋆ π_l g π_r`, a generator of the exchangeability assessment.
pub fn exchangeability_generator(g: &Gamble, pl: &Permutation, pr: &Permutation, star: StarFlag) -> Result<Gamble> {
    let p = g.permuted(pl, pr, Some(star))?;
    g.combine(1.0, &p, -1.0)
}
