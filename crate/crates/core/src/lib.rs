//! Desirable gambles for systems of indistinguishable particles.
//!
//! Gambles are Hermitian quadratic forms `z† G z` on product states
//! `z = x_1 ⊗ … ⊗ x_m`. Coherence, exchangeability and entanglement are
//! decided through the dual credal set of density matrices.

pub mod coherence;
pub mod entanglement;
pub mod error;
mod feasibility;
pub mod gambles;
pub mod linalg;
pub mod nnls;
mod product_opt;
pub mod sampling;
pub mod tensor;
pub mod updating;

pub use coherence::{
    credal_feasible, exchangeability_residuals, in_natural_extension, is_exchangeable_density, AssessmentSet,
    DensityMatrix, ExchangeabilityResiduals, FeasibilityResult, FeasibilityStatus, SolverOptions, SureLoss, Verdict,
};
pub use entanglement::{
    dutch_book_witness_search, is_physical_observable, partial_transpose, ppt_min_eigenvalue,
    projected_mixture_decomposition, sampled_product_max, separability_ppt, Atom, Decomposition,
    DecompositionOutcome, Separability, Witness, WitnessConfig, WitnessOutcome,
};
pub use error::{Error, Result};
pub use gambles::{evaluate, exchange_projection, exchangeability_generator, permuted_gamble, Gamble};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use num_complex::Complex64;
pub use tensor::{
    all_permutations, permutation_operator, permutation_sign, permute_vector, symmetrizer, Permutation,
    Permutations, ProductState, StarFlag, SystemShape,
};
pub use updating::{
    condition_assessments, condition_density, outcome_probability, ConditionedAssessment, Measurement,
};
