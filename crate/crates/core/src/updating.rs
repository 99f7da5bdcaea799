//! Conditioning on projective measurements of the leading particles.
//!
//! A measurement acts on the first `m̌` factors; the operator on the full
//! space is `K_i = Π_i ⊗ I`. States update as `K_i† ρ K_i / Tr(·)` and
//! gambles are conditioned through `G ↦ K_i† G K_i`. To measure a different
//! subset, conjugate by a permutation operator first.

use crate::coherence::{
    credal_feasible, in_natural_extension, solve_credal, AssessmentSet, DensityMatrix, FeasibilityResult,
    FeasibilityStatus, SolverOptions, Verdict,
};
use crate::error::{Error, Result};
use crate::gambles::Gamble;
use crate::linalg::{self, c64, hermitian_part, max_abs_diff, ComplexMatrix};
use crate::tensor::SystemShape;

/// Tolerance for projector idempotence, Hermiticity and completeness.
pub const MEASUREMENT_TOL: f64 = 1e-10;

/// Outcome probabilities at or below this make conditioning undefined.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// A complete family of orthogonal projectors on the leading `measured`
/// particles.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    shape: SystemShape,
    measured: usize,
    projectors: Vec<ComplexMatrix>,
}

impl Measurement {
    pub fn new(shape: SystemShape, measured: usize, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        if measured == 0 || measured > shape.m() {
            return Err(Error::InvalidMeasurement(format!(
                "measured particle count {measured} must lie in 1..={}",
                shape.m()
            )));
        }
        if projectors.is_empty() {
            return Err(Error::InvalidMeasurement("no projectors given".into()));
        }
        let local = shape.n().pow(measured as u32);
        let mut total = ComplexMatrix::zeros(local, local);
        for (i, p) in projectors.iter().enumerate() {
            if p.nrows() != local || p.ncols() != local {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} is {}x{}, expected {local}x{local}",
                    p.nrows(),
                    p.ncols()
                )));
            }
            if !linalg::is_hermitian(p, MEASUREMENT_TOL) {
                return Err(Error::InvalidMeasurement(format!("projector {i} is not Hermitian")));
            }
            if !linalg::is_idempotent(p, MEASUREMENT_TOL) {
                return Err(Error::InvalidMeasurement(format!("projector {i} is not idempotent")));
            }
            total += p;
        }
        if max_abs_diff(&total, &linalg::identity(local)) > MEASUREMENT_TOL {
            return Err(Error::InvalidMeasurement("projectors do not sum to the identity".into()));
        }
        Ok(Self { shape, measured, projectors })
    }

    /// `{Π, I − Π}` for a single projector.
    pub fn binary(shape: SystemShape, measured: usize, projector: ComplexMatrix) -> Result<Self> {
        let complement = linalg::identity(projector.nrows()) - &projector;
        Self::new(shape, measured, vec![projector, complement])
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn measured(&self) -> usize {
        self.measured
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    /// `Π_i ⊗ I` on the full space.
    pub fn lifted(&self, outcome: usize) -> Result<ComplexMatrix> {
        let p = self.projectors.get(outcome).ok_or_else(|| {
            Error::InvalidMeasurement(format!("outcome {outcome} out of range (0..{})", self.projectors.len()))
        })?;
        let rest = self.shape.n().pow((self.shape.m() - self.measured) as u32);
        Ok(linalg::tensor_product(p, &linalg::identity(rest)))
    }

    fn check_shape(&self, shape: SystemShape) -> Result<()> {
        if shape != self.shape {
            return Err(Error::DimensionMismatch(format!(
                "measurement on ({}) applied to ({shape})",
                self.shape
            )));
        }
        Ok(())
    }
}

/// `Tr(K_i† ρ K_i)`.
pub fn outcome_probability(rho: &DensityMatrix, meas: &Measurement, outcome: usize) -> Result<f64> {
    meas.check_shape(rho.shape())?;
    let k = meas.lifted(outcome)?;
    Ok(linalg::trace_re(&(k.adjoint() * rho.matrix() * &k)))
}

/// Normalized post-measurement state `K_i† ρ K_i / Tr(K_i† ρ K_i)`.
pub fn condition_density(rho: &DensityMatrix, meas: &Measurement, outcome: usize) -> Result<DensityMatrix> {
    meas.check_shape(rho.shape())?;
    let k = meas.lifted(outcome)?;
    let projected = k.adjoint() * rho.matrix() * &k;
    let probability = linalg::trace_re(&projected);
    if probability <= ZERO_PROBABILITY {
        return Err(Error::IncompatibleOutcome { outcome, probability });
    }
    let normalized = hermitian_part(&projected) * c64(1.0 / probability, 0.0);
    DensityMatrix::new(rho.shape(), normalized)
}

/// An assessment conditioned on one measurement outcome.
///
/// Kept lazily as the original assessment plus the lift `K_i`; membership of
/// `g` is answered by testing `K_i† G K_i` against the original set.
#[derive(Debug, Clone)]
pub struct ConditionedAssessment {
    base: AssessmentSet,
    lift: ComplexMatrix,
    outcome: usize,
}

impl ConditionedAssessment {
    pub fn base(&self) -> &AssessmentSet {
        &self.base
    }

    pub fn outcome(&self) -> usize {
        self.outcome
    }

    /// `K_i† G K_i`.
    pub fn transform(&self, g: &Gamble) -> Result<Gamble> {
        if g.shape() != self.base.shape() {
            return Err(Error::DimensionMismatch("gamble and conditioned assessment differ in shape".into()));
        }
        Gamble::new(g.shape(), hermitian_part(&(self.lift.adjoint() * g.matrix() * &self.lift)))
    }

    /// Whether `g` belongs to the conditional set of desirable gambles.
    pub fn in_natural_extension(&self, g: &Gamble, opts: SolverOptions) -> Result<Verdict> {
        in_natural_extension(&self.transform(g)?, &self.base, opts)
    }

    /// A witness of the conditioned credal set: a state of the original set
    /// that gives the outcome probability at least `10·tol`, updated.
    pub fn credal_feasible(&self, opts: SolverOptions) -> Result<FeasibilityResult> {
        let mut res = feasible_with_outcome(&self.base, &self.lift, opts)?;
        if let Some(w) = res.witness.take() {
            let k = &self.lift;
            let projected = k.adjoint() * w.matrix() * k;
            let p = linalg::trace_re(&projected);
            res.witness =
                Some(DensityMatrix::new(w.shape(), hermitian_part(&projected) * c64(1.0 / p, 0.0))?);
        }
        Ok(res)
    }
}

/// Feasibility of the credal set intersected with `Tr(K ρ) ≥ 10·tol`.
fn feasible_with_outcome(a: &AssessmentSet, lift: &ComplexMatrix, opts: SolverOptions) -> Result<FeasibilityResult> {
    let dim = a.shape().dim();
    let probe = lift.adjoint() * lift - linalg::identity(dim) * c64(10.0 * opts.tol, 0.0);
    let mut gambles: Vec<ComplexMatrix> = a.gambles().iter().map(|g| g.matrix().clone()).collect();
    gambles.push(hermitian_part(&probe));
    solve_credal(a.shape(), a.star(), &gambles, opts)
}

/// Conditions an assessment on outcome `outcome` of `meas`.
///
/// Fails with `IncompatibleOutcome` when every state of the credal set
/// gives the outcome (numerically) zero probability.
pub fn condition_assessments(
    a: &AssessmentSet,
    meas: &Measurement,
    outcome: usize,
    opts: SolverOptions,
) -> Result<ConditionedAssessment> {
    meas.check_shape(a.shape())?;
    let lift = meas.lifted(outcome)?;
    let base = credal_feasible(a, opts)?;
    if base.status == FeasibilityStatus::Feasible {
        let res = feasible_with_outcome(a, &lift, opts)?;
        if res.status == FeasibilityStatus::Infeasible {
            return Err(Error::IncompatibleOutcome { outcome, probability: 0.0 });
        }
    }
    Ok(ConditionedAssessment { base: a.clone(), lift, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_row_major;
    use crate::tensor::StarFlag;

    fn shape22() -> SystemShape {
        SystemShape::new(2, 2).unwrap()
    }

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| c64(x, 0.0))))
    }

    fn rho_ferm() -> DensityMatrix {
        let e: Vec<_> = [0., 0., 0., 0., 0., 0.5, -0.5, 0., 0., -0.5, 0.5, 0., 0., 0., 0., 0.]
            .iter()
            .map(|&x| c64(x, 0.0))
            .collect();
        DensityMatrix::new(shape22(), from_row_major(4, 4, &e).unwrap()).unwrap()
    }

    #[test]
    fn measurement_validation() {
        assert!(Measurement::new(shape22(), 1, vec![diag(&[1.0, 0.0])]).is_err());
        assert!(Measurement::new(shape22(), 3, vec![linalg::identity(8)]).is_err());
        assert!(Measurement::new(shape22(), 1, vec![diag(&[1.0, 0.5]), diag(&[0.0, 0.5])]).is_err());
        assert!(Measurement::binary(shape22(), 1, diag(&[1.0, 0.0])).is_ok());
    }

    #[test]
    fn identity_projection_keeps_state() {
        let meas = Measurement::new(shape22(), 2, vec![linalg::identity(4)]).unwrap();
        let out = condition_density(&rho_ferm(), &meas, 0).unwrap();
        assert!(max_abs_diff(out.matrix(), rho_ferm().matrix()) < 1e-15);
    }

    #[test]
    fn orthogonal_outcome_is_incompatible() {
        let rho = DensityMatrix::new(shape22(), diag(&[0.0, 0.0, 1.0, 0.0])).unwrap();
        let meas = Measurement::binary(shape22(), 1, diag(&[1.0, 0.0])).unwrap();
        assert!(matches!(condition_density(&rho, &meas, 0), Err(Error::IncompatibleOutcome { .. })));
    }

    #[test]
    fn out_of_range_outcome() {
        let meas = Measurement::binary(shape22(), 1, diag(&[1.0, 0.0])).unwrap();
        assert!(condition_density(&rho_ferm(), &meas, 2).is_err());
    }

    #[test]
    fn incompatible_assessment_detected() {
        // Fermion pair, first particle projected on |0>, second on |0>:
        // the doubly-occupied outcome has probability zero for every state.
        let shape = shape22();
        let a = AssessmentSet::empty(shape, Some(StarFlag::Anti));
        let meas = Measurement::binary(shape, 2, diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(
            condition_assessments(&a, &meas, 0, SolverOptions::default()),
            Err(Error::IncompatibleOutcome { .. })
        ));
        assert!(condition_assessments(&a, &meas, 1, SolverOptions::default()).is_ok());
    }
}
