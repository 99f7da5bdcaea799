//! A-coherence, natural extension and ⋆-exchangeability, decided on the
//! dual side through the credal set of density matrices
//! `M = {ρ ⪰ 0, Tr ρ = 1, Tr(G_i ρ) ≥ 0, ρ = Π⋆ ρ Π⋆}`.
//!
//! Exchangeability is imposed by working in an orthonormal basis `V` of
//! `range(Π⋆)`: `ρ = V σ V†` with `σ` a density matrix on the reduced space.

use crate::error::{Error, Result};
use crate::feasibility::{Outcome, Problem};
use crate::gambles::{Gamble, HERMITIAN_REPAIR_TOL};
use crate::linalg::{
    self, c64, conj_sandwich, frobenius_norm, hermitian_deviation, hermitian_part, max_abs_diff, ComplexMatrix,
};
use crate::tensor::{all_permutations, conjugate_state_by_maps, symmetrizer, StarFlag, SystemShape};

/// Smallest admissible eigenvalue of a density matrix.
pub const DENSITY_PSD_TOL: f64 = 1e-9;
/// Admissible deviation of the trace from one.
pub const DENSITY_TRACE_TOL: f64 = 1e-9;

/// Ratio between the two exchangeability residuals beyond which a
/// disagreement is reported as an error rather than a boundary case.
const CHARACTERIZATION_SLACK: f64 = 100.0;

/// A PSD, unit-trace Hermitian matrix on the composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    shape: SystemShape,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(shape: SystemShape, matrix: ComplexMatrix) -> Result<Self> {
        shape.check_matrix(&matrix, "density matrix")?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_REPAIR_TOL || !deviation.is_finite() {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = if deviation > 0.0 { hermitian_part(&matrix) } else { matrix };
        let trace = linalg::trace_re(&matrix);
        if (trace - 1.0).abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace is {trace}, expected 1")));
        }
        let min_eig = linalg::min_eigenvalue(&matrix);
        if min_eig < -DENSITY_PSD_TOL {
            return Err(Error::InvalidDensity(format!("smallest eigenvalue {min_eig:.3e} is negative")));
        }
        Ok(Self { shape, matrix })
    }

    /// `I / N`.
    pub fn maximally_mixed(shape: SystemShape) -> Self {
        let d = shape.dim();
        Self { shape, matrix: linalg::identity(d) * c64(1.0 / d as f64, 0.0) }
    }

    /// `z z† / (z† z)`.
    pub fn pure(shape: SystemShape, z: &linalg::ComplexVector) -> Result<Self> {
        let norm2 = z.norm_squared();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidDensity("pure state from a zero vector".into()));
        }
        Self::new(shape, linalg::outer(z) * c64(1.0 / norm2, 0.0))
    }

    pub(crate) fn from_unchecked(shape: SystemShape, matrix: ComplexMatrix) -> Self {
        Self { shape, matrix }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(G ρ)`, the prevision of a gamble.
    pub fn expectation(&self, g: &Gamble) -> Result<f64> {
        if g.shape() != self.shape {
            return Err(Error::DimensionMismatch("gamble and density have different shapes".into()));
        }
        Ok(linalg::trace_product(g.matrix(), &self.matrix))
    }
}

/// A finite assessment `𝓖`, optionally with a ⋆-exchangeability assessment.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentSet {
    shape: SystemShape,
    gambles: Vec<Gamble>,
    star: Option<StarFlag>,
}

impl AssessmentSet {
    pub fn new(shape: SystemShape, gambles: Vec<Gamble>, star: Option<StarFlag>) -> Result<Self> {
        if let Some(g) = gambles.iter().find(|g| g.shape() != shape) {
            return Err(Error::DimensionMismatch(format!(
                "gamble of shape ({}) in an assessment of shape ({shape})",
                g.shape()
            )));
        }
        Ok(Self { shape, gambles, star })
    }

    pub fn empty(shape: SystemShape, star: Option<StarFlag>) -> Self {
        Self { shape, gambles: Vec::new(), star }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn gambles(&self) -> &[Gamble] {
        &self.gambles
    }

    pub fn star(&self) -> Option<StarFlag> {
        self.star
    }

    /// A copy with one more assessed gamble.
    pub fn with_gamble(&self, g: Gamble) -> Result<Self> {
        let mut gambles = self.gambles.clone();
        gambles.push(g);
        Self::new(self.shape, gambles, self.star)
    }
}

/// Solver settings shared by every feasibility-based query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub iter_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, iter_cap: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
    Undecided,
}

impl std::fmt::Display for FeasibilityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FeasibilityStatus::Feasible => "feasible",
            FeasibilityStatus::Infeasible => "infeasible",
            FeasibilityStatus::Undecided => "undecided",
        })
    }
}

/// A sure-loss certificate: weights `μ ≥ 0` (summing to one) on the assessed
/// gambles with `Σ μ_i G_i` negative definite on the admissible states.
#[derive(Debug, Clone, PartialEq)]
pub struct SureLoss {
    pub multipliers: Vec<f64>,
    /// Largest eigenvalue of the normalized combination (negative).
    pub max_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    pub witness: Option<DensityMatrix>,
    /// Constraint violation of the last iterate.
    pub residual: f64,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub sure_loss: Option<SureLoss>,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }
}

/// Gamble matrices expressed on the admissible subspace.
struct Reduction {
    /// Orthonormal basis of `range(Π⋆)`; `None` means the full space.
    basis: Option<ComplexMatrix>,
    dim: usize,
}

impl Reduction {
    fn new(shape: SystemShape, star: Option<StarFlag>) -> Result<Self> {
        match star {
            None => Ok(Self { basis: None, dim: shape.dim() }),
            Some(s) => {
                let basis = linalg::projector_range_basis(&symmetrizer(shape, s)?);
                let dim = basis.ncols();
                Ok(Self { basis: Some(basis), dim })
            }
        }
    }

    fn reduce(&self, g: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => g.clone(),
            Some(v) => hermitian_part(&conj_sandwich(v, g)),
        }
    }

    fn lift(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => sigma.clone(),
            Some(v) => hermitian_part(&(v * sigma * v.adjoint())),
        }
    }
}

pub(crate) fn solve_credal(
    shape: SystemShape,
    star: Option<StarFlag>,
    gambles: &[ComplexMatrix],
    opts: SolverOptions,
) -> Result<FeasibilityResult> {
    let reduction = Reduction::new(shape, star)?;
    if reduction.dim == 0 {
        // No admissible state at all (e.g. more fermions than levels):
        // the empty credal set incurs sure loss on the zero-dimensional space.
        return Ok(FeasibilityResult {
            status: FeasibilityStatus::Infeasible,
            witness: None,
            residual: f64::INFINITY,
            iterations: 0,
            residual_history: Vec::new(),
            sure_loss: Some(SureLoss { multipliers: vec![0.0; gambles.len()], max_eigenvalue: f64::NEG_INFINITY }),
        });
    }
    let reduced: Vec<ComplexMatrix> = gambles.iter().map(|g| reduction.reduce(g)).collect();
    let sol = Problem::new(reduction.dim, &reduced).solve(opts.tol, opts.iter_cap);
    let (status, witness, residual, sure_loss) = match sol.outcome {
        Outcome::Feasible { point, residual } => {
            let rho = reduction.lift(&point);
            (FeasibilityStatus::Feasible, Some(DensityMatrix::from_unchecked(shape, rho)), residual, None)
        }
        Outcome::Infeasible { multipliers, max_eigenvalue, residual } => {
            (FeasibilityStatus::Infeasible, None, residual, Some(SureLoss { multipliers, max_eigenvalue }))
        }
        Outcome::Undecided { residual } => (FeasibilityStatus::Undecided, None, residual, None),
    };
    Ok(FeasibilityResult {
        status,
        witness,
        residual,
        iterations: sol.iterations,
        residual_history: sol.history,
        sure_loss,
    })
}

/// Decides whether the credal set of `a` is nonempty, i.e. whether the
/// assessment is A-coherent (avoids sure loss).
pub fn credal_feasible(a: &AssessmentSet, opts: SolverOptions) -> Result<FeasibilityResult> {
    let gambles: Vec<ComplexMatrix> = a.gambles.iter().map(|g| g.matrix().clone()).collect();
    solve_credal(a.shape, a.star, &gambles, opts)
}

/// Three-valued answer to a membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Whether `g` belongs to the deductive closure `posi(Σ≥ ∪ 𝓖 ∪ 𝓥⋆)`.
///
/// Decided on the dual: `g` is desirable iff `Tr(G ρ) ≥ −tol·‖G‖` for every
/// `ρ` in the credal set. The query `∃ρ ∈ M : Tr(Ĝ ρ) ≤ −2·tol` is posed as
/// one more feasibility problem with `Ĝ = G / ‖G‖_F`.
pub fn in_natural_extension(g: &Gamble, a: &AssessmentSet, opts: SolverOptions) -> Result<Verdict> {
    if g.shape() != a.shape {
        return Err(Error::DimensionMismatch("gamble and assessment have different shapes".into()));
    }
    let base = credal_feasible(a, opts)?;
    match base.status {
        // Sure loss: the closure is the whole space.
        FeasibilityStatus::Infeasible => return Ok(Verdict::Yes),
        FeasibilityStatus::Undecided => return Ok(Verdict::Undecided),
        FeasibilityStatus::Feasible => {}
    }
    let norm = frobenius_norm(g.matrix());
    if norm == 0.0 {
        return Ok(Verdict::Yes);
    }
    let dim = a.shape.dim();
    let probe = g.matrix() * c64(-1.0 / norm, 0.0) - linalg::identity(dim) * c64(2.0 * opts.tol, 0.0);
    let mut gambles: Vec<ComplexMatrix> = a.gambles.iter().map(|x| x.matrix().clone()).collect();
    gambles.push(probe);
    let res = solve_credal(a.shape, a.star, &gambles, opts)?;
    Ok(match res.status {
        FeasibilityStatus::Infeasible => Verdict::Yes,
        FeasibilityStatus::Feasible => Verdict::No,
        FeasibilityStatus::Undecided => Verdict::Undecided,
    })
}

/// Residuals of the two dual exchangeability characterizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeabilityResiduals {
    /// `max |ρ − Π⋆ ρ Π⋆†|`.
    pub projector: f64,
    /// Worst `max |ρ − (δ⋆/2)(P_r ρ P_l† + P_l ρ P_r†)|` over all pairs.
    pub pairwise: f64,
}

pub fn exchangeability_residuals(rho: &DensityMatrix, star: StarFlag) -> Result<ExchangeabilityResiduals> {
    let shape = rho.shape;
    let proj = symmetrizer(shape, star)?;
    let projected = &proj * &rho.matrix * proj.adjoint();
    let projector = max_abs_diff(&rho.matrix, &projected);

    let perms = all_permutations(shape.m())?;
    let maps: Vec<(Vec<usize>, i8)> =
        perms.iter().map(|(p, s)| p.basis_map(shape).map(|m| (m, *s))).collect::<Result<_>>()?;
    let mut pairwise = 0.0_f64;
    for (i, (map_l, sign_l)) in maps.iter().enumerate() {
        for (map_r, sign_r) in &maps[i..] {
            let delta = star.delta(*sign_l, *sign_r);
            let a = conjugate_state_by_maps(&rho.matrix, map_r, map_l);
            let b = conjugate_state_by_maps(&rho.matrix, map_l, map_r);
            let avg = (a + b) * c64(0.5 * delta, 0.0);
            pairwise = pairwise.max(max_abs_diff(&rho.matrix, &avg));
        }
    }
    Ok(ExchangeabilityResiduals { projector, pairwise })
}

/// Whether `ρ = Π⋆ ρ Π⋆†`, cross-checked against the pairwise
/// characterization over every `(π_l, π_r)`.
pub fn is_exchangeable_density(rho: &DensityMatrix, star: StarFlag, tol: f64) -> Result<bool> {
    let r = exchangeability_residuals(rho, star)?;
    let by_projector = r.projector < tol;
    let by_pairs = r.pairwise < tol;
    if by_projector != by_pairs && r.projector.max(r.pairwise) > CHARACTERIZATION_SLACK * tol {
        return Err(Error::CharacterizationMismatch { projector: r.projector, pairwise: r.pairwise });
    }
    Ok(by_projector)
}
