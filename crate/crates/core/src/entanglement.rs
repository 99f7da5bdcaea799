//! Entanglement of identical-particle states as a Dutch book.
//!
//! A state is not entangled when it is a mixture of projected pure product
//! densities `Π⋆ z z† Π⋆ / Tr(·)`; it is entangled when some physical gamble
//! that is negative on every product state still has nonnegative prevision.
//! Both directions are searched for by sampling with explicit budgets, so
//! every answer here is three-valued.

use crate::coherence::{exchangeability_residuals, DensityMatrix};
use crate::error::{Error, Result};
use crate::gambles::Gamble;
use crate::linalg::{
    self, c64, frobenius_norm, hermitian_part, max_abs_diff, trace_product, ComplexMatrix, ComplexVector,
};
use crate::nnls;
use crate::product_opt::{maximize_form, maximize_ratio};
use crate::sampling::{haar_product_state, random_hermitian, rng_from_seed, Rng};
use crate::tensor::{symmetrizer, ProductState, StarFlag, SystemShape};

/// Decompositions with a reconstruction error below this are reported.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// Smallest eigenvalue of the partial transpose still counted as PSD.
pub const PPT_TOL: f64 = 1e-9;

/// Exchangeability tolerance for decomposition inputs.
const EXCHANGEABLE_TOL: f64 = 1e-9;

/// Projected product states with smaller norm carry no atom.
const MIN_PROJECTED_NORM2: f64 = 1e-12;

const NNLS_MAX_ITER: usize = 5_000;
const REFINE_ROUNDS: usize = 20;
const REFINE_STARTS: usize = 3;
/// Refinement stops once a round shrinks the residual by less than this factor.
const REFINE_STALL: f64 = 0.999;
const MAX_BASIS_CANDIDATES: usize = 256;
const MERGE_TOL: f64 = 1e-12;

/// The matrix `Π⋆`, or the identity when no exchangeability is assumed.
fn projector(shape: SystemShape, star: Option<StarFlag>) -> Result<ComplexMatrix> {
    match star {
        Some(s) => symmetrizer(shape, s),
        None => Ok(linalg::identity(shape.dim())),
    }
}

/// `G = Π⋆† G Π⋆` up to `tol` in the max-entry norm. Constants fail this
/// test whenever `Π⋆ ≠ I`: only `c·Π⋆` is an observable of the projected system.
pub fn is_physical_observable(g: &Gamble, star: StarFlag, tol: f64) -> Result<bool> {
    let p = symmetrizer(g.shape(), star)?;
    let projected = p.adjoint() * g.matrix() * &p;
    Ok(max_abs_diff(g.matrix(), &projected) < tol)
}

/// Transposes the indices of particle `subsystem` (0-based).
pub fn partial_transpose(a: &ComplexMatrix, shape: SystemShape, subsystem: usize) -> Result<ComplexMatrix> {
    shape.check_matrix(a, "matrix")?;
    if subsystem >= shape.m() {
        return Err(Error::InvalidShape(format!(
            "subsystem {subsystem} out of range for {} particles",
            shape.m()
        )));
    }
    let dim = shape.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut di = shape.digits(i);
        for j in 0..dim {
            let mut dj = shape.digits(j);
            std::mem::swap(&mut di[subsystem], &mut dj[subsystem]);
            out[(shape.index_of(&di), shape.index_of(&dj))] = a[(i, j)];
            std::mem::swap(&mut di[subsystem], &mut dj[subsystem]);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    Separable,
    Entangled,
}

impl std::fmt::Display for Separability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Separability::Separable => "separable",
            Separability::Entangled => "entangled",
        })
    }
}

/// Smallest eigenvalue of the partial transpose on the second particle.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let shape = rho.shape();
    if shape.n() != 2 || shape.m() != 2 {
        return Err(Error::UnsupportedShape { n: shape.n(), m: shape.m() });
    }
    Ok(linalg::min_eigenvalue(&partial_transpose(rho.matrix(), shape, 1)?))
}

/// Peres–Horodecki test, exact for two qubits viewed as distinguishable.
pub fn separability_ppt(rho: &DensityMatrix) -> Result<Separability> {
    Ok(if ppt_min_eigenvalue(rho)? >= -PPT_TOL { Separability::Separable } else { Separability::Entangled })
}

/// One weighted product state of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub state: ProductState,
}

/// `ρ ≈ Σ w_k Π⋆ z_k z_k† Π⋆ / Tr(Π⋆ z_k z_k† Π⋆)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    shape: SystemShape,
    atoms: Vec<Atom>,
    star: Option<StarFlag>,
    residual: f64,
}

/// Normalized projected density of one product state, or `None` when the
/// projection annihilates it.
fn atom_density(proj: &ComplexMatrix, z: &ComplexVector) -> Option<ComplexMatrix> {
    let v = proj * z;
    let norm2 = v.norm_squared();
    (norm2 > MIN_PROJECTED_NORM2).then(|| linalg::outer(&v) * c64(1.0 / norm2, 0.0))
}

impl Decomposition {
    /// Builds a decomposition from explicit atoms and measures it against
    /// `target`. Weights are renormalized to sum to one.
    pub fn from_atoms(target: &DensityMatrix, star: Option<StarFlag>, atoms: Vec<Atom>) -> Result<Self> {
        let shape = target.shape();
        if atoms.is_empty() {
            return Err(Error::InvalidDensity("decomposition needs at least one atom".into()));
        }
        if let Some(a) = atoms.iter().find(|a| a.state.shape() != shape) {
            return Err(Error::DimensionMismatch(format!(
                "atom of shape ({}) for a target of shape ({shape})",
                a.state.shape()
            )));
        }
        if atoms.iter().any(|a| !a.weight.is_finite() || a.weight < 0.0) {
            return Err(Error::InvalidDensity("atom weights must be finite and nonnegative".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if total <= 0.0 {
            return Err(Error::InvalidDensity("atom weights sum to zero".into()));
        }
        let atoms = atoms.into_iter().map(|a| Atom { weight: a.weight / total, state: a.state }).collect();
        let mut d = Self { shape, atoms, star, residual: 0.0 };
        d.residual = frobenius_norm(&(d.reconstruct()? - target.matrix()));
        Ok(d)
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn star(&self) -> Option<StarFlag> {
        self.star
    }

    /// Frobenius distance between the reconstruction and the target.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let proj = projector(self.shape, self.star)?;
        let dim = self.shape.dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for a in &self.atoms {
            if let Some(d) = atom_density(&proj, &a.state.vector()) {
                out += d * c64(a.weight, 0.0);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecompositionOutcome {
    Found(Decomposition),
    /// Best fit found; its residual is above [`DECOMPOSITION_TOL`].
    Inconclusive { residual: f64 },
}

/// Real coordinates of a Hermitian matrix preserving the Frobenius inner
/// product.
fn hermitian_coordinates(a: &ComplexMatrix) -> Vec<f64> {
    let d = a.nrows();
    let mut out = Vec::with_capacity(d * d);
    let s = std::f64::consts::SQRT_2;
    for i in 0..d {
        out.push(a[(i, i)].re);
        for j in i + 1..d {
            out.push(s * a[(i, j)].re);
            out.push(s * a[(i, j)].im);
        }
    }
    out
}

struct Pool {
    states: Vec<ProductState>,
    densities: Vec<ComplexMatrix>,
    columns: Vec<Vec<f64>>,
}

impl Pool {
    fn push(&mut self, proj: &ComplexMatrix, s: ProductState) {
        if let Some(d) = atom_density(proj, &s.vector()) {
            self.columns.push(hermitian_coordinates(&d));
            self.densities.push(d);
            self.states.push(s);
        }
    }

    fn mixture(&self, weights: &[f64]) -> ComplexMatrix {
        let dim = self.densities[0].nrows();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (d, &w) in self.densities.iter().zip(weights) {
            if w > 0.0 {
                out += d * c64(w, 0.0);
            }
        }
        out
    }

    /// Pool members ranked by `⟨R, A(z)⟩`, best first.
    fn ranked(&self, r: &ComplexMatrix) -> Vec<usize> {
        let scores: Vec<f64> = self.densities.iter().map(|d| trace_product(r, d)).collect();
        let mut idx: Vec<usize> = (0..scores.len()).collect();
        idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
        idx
    }
}

fn basis_states(shape: SystemShape) -> Vec<ProductState> {
    (0..shape.dim().min(MAX_BASIS_CANDIDATES))
        .map(|k| {
            let factors = shape
                .digits(k)
                .into_iter()
                .map(|d| {
                    let mut e = ComplexVector::zeros(shape.n());
                    e[d] = c64(1.0, 0.0);
                    e
                })
                .collect();
            ProductState::from_factors_unchecked(factors)
        })
        .collect()
}

/// Adds the local maximizers of `⟨R, A(z)⟩` started from the best pool atoms.
fn add_ascent_atoms(pool: &mut Pool, proj: &ComplexMatrix, r: &ComplexMatrix) -> f64 {
    let target = hermitian_part(&(proj.adjoint() * r * proj));
    let starts: Vec<ProductState> =
        pool.ranked(r).into_iter().take(REFINE_STARTS).map(|i| pool.states[i].clone()).collect();
    let mut best = f64::NEG_INFINITY;
    for s in starts {
        if let Some((z, value)) = maximize_ratio(&target, proj, &s) {
            best = best.max(value);
            pool.push(proj, z);
        }
    }
    best
}

/// Fits `ρ` by a nonnegative mixture of projected product densities drawn
/// from the computational basis and `samples` Haar-random product states,
/// then refines the pool by conditional-gradient steps.
///
/// `Inconclusive` never certifies entanglement.
pub fn projected_mixture_decomposition(
    rho: &DensityMatrix,
    star: Option<StarFlag>,
    samples: usize,
    seed: u64,
) -> Result<DecompositionOutcome> {
    let shape = rho.shape();
    if let Some(s) = star {
        let r = exchangeability_residuals(rho, s)?;
        if r.projector >= EXCHANGEABLE_TOL {
            return Err(Error::NotExchangeable { residual: r.projector });
        }
    }
    let proj = projector(shape, star)?;
    let mut rng = rng_from_seed(seed);
    let mut pool = Pool { states: Vec::new(), densities: Vec::new(), columns: Vec::new() };
    for s in basis_states(shape) {
        pool.push(&proj, s);
    }
    for _ in 0..samples {
        let s = haar_product_state(shape, &mut rng);
        pool.push(&proj, s);
    }
    if pool.states.is_empty() {
        return Ok(DecompositionOutcome::Inconclusive { residual: frobenius_norm(rho.matrix()) });
    }
    add_ascent_atoms(&mut pool, &proj, rho.matrix());

    let target = hermitian_coordinates(rho.matrix());
    let mut fit = nnls::projected_gradient(&pool.columns, &target, NNLS_MAX_ITER, DECOMPOSITION_TOL / 10.0, None);
    for _ in 0..REFINE_ROUNDS {
        if fit.residual < DECOMPOSITION_TOL / 10.0 {
            break;
        }
        let r = rho.matrix() - pool.mixture(&fit.weights);
        add_ascent_atoms(&mut pool, &proj, &r);
        let next = nnls::projected_gradient(
            &pool.columns,
            &target,
            NNLS_MAX_ITER,
            DECOMPOSITION_TOL / 10.0,
            Some(&fit.weights),
        );
        let stalled = next.residual > REFINE_STALL * fit.residual;
        fit = next;
        if stalled {
            break;
        }
    }

    let mut atoms: Vec<(f64, usize)> = Vec::new();
    for (k, &w) in fit.weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        match atoms.iter_mut().find(|(_, j)| max_abs_diff(&pool.densities[*j], &pool.densities[k]) < MERGE_TOL) {
            Some(slot) => slot.0 += w,
            None => atoms.push((w, k)),
        }
    }
    if atoms.is_empty() {
        return Ok(DecompositionOutcome::Inconclusive { residual: fit.residual });
    }
    let atoms = atoms.into_iter().map(|(w, k)| Atom { weight: w, state: pool.states[k].clone() }).collect();
    let d = Decomposition::from_atoms(rho, star, atoms)?;
    Ok(if d.residual < DECOMPOSITION_TOL {
        DecompositionOutcome::Found(d)
    } else {
        DecompositionOutcome::Inconclusive { residual: d.residual }
    })
}

/// Budget of the witness search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessConfig {
    /// Product states sampled to estimate maxima.
    pub samples: usize,
    /// Required strict negativity of the witness on product states.
    pub margin: f64,
    /// Random candidates tried after the state-aligned one.
    pub candidates: usize,
    /// Subgradient steps per random candidate.
    pub refine_steps: usize,
    /// Position of the shift inside the admissible window, in `(0, 1)`.
    pub shift_fraction: f64,
    pub seed: u64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self { samples: 20_000, margin: 1e-3, candidates: 16, refine_steps: 40, shift_fraction: 0.2, seed: 0 }
    }
}

/// A physical gamble negative on all sampled product states with
/// nonnegative prevision under the target state.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub gamble: Gamble,
    /// Largest `z† G z` found over sampled and locally polished product states.
    pub estimated_max: f64,
    /// `Tr(G ρ)`.
    pub trace_value: f64,
    pub samples: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessOutcome {
    Found(Witness),
    /// Not a separability proof.
    NoneFound,
}

/// Sampled product states stacked as columns, before and after projection.
struct Samples {
    states: Vec<ProductState>,
    projected: ComplexMatrix,
    /// `‖Π z‖²` per sample.
    weights: Vec<f64>,
}

impl Samples {
    fn draw(shape: SystemShape, proj: &ComplexMatrix, count: usize, rng: &mut Rng) -> Self {
        let states: Vec<ProductState> = (0..count).map(|_| haar_product_state(shape, rng)).collect();
        let mut raw = ComplexMatrix::zeros(shape.dim(), count);
        for (k, s) in states.iter().enumerate() {
            raw.set_column(k, &s.vector());
        }
        let projected = proj * raw;
        let weights = projected.column_iter().map(|c| c.norm_squared()).collect();
        Self { states, projected, weights }
    }

    /// `(Π z)† H (Π z)` for every sample, optionally over the first `limit`.
    fn forms(&self, h: &ComplexMatrix, limit: usize) -> Vec<f64> {
        let cols = self.projected.columns(0, limit.min(self.projected.ncols()));
        let hz = h * cols;
        cols.column_iter().zip(hz.column_iter()).map(|(z, w)| z.dotc(&w).re).collect()
    }
}

/// Largest sampled `h / p`, with its index.
fn best_ratio(forms: &[f64], weights: &[f64]) -> Option<(f64, usize)> {
    forms
        .iter()
        .zip(weights)
        .enumerate()
        .filter(|(_, (_, &p))| p > MIN_PROJECTED_NORM2)
        .map(|(k, (&h, &p))| (h / p, k))
        .max_by(|a, b| a.0.total_cmp(&b.0))
}

fn top_indices(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx.truncate(count);
    idx
}

const POLISH_STARTS: usize = 5;

/// `sup_z z† Π H Π z / z† Π z` over sampled states, polished locally.
fn ratio_supremum(h: &ComplexMatrix, proj: &ComplexMatrix, samples: &Samples) -> f64 {
    let forms = samples.forms(h, usize::MAX);
    let ratios: Vec<f64> = forms
        .iter()
        .zip(&samples.weights)
        .map(|(&f, &p)| if p > MIN_PROJECTED_NORM2 { f / p } else { f64::NEG_INFINITY })
        .collect();
    let mut best = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let full = proj.adjoint() * h * proj;
    for k in top_indices(&ratios, POLISH_STARTS) {
        if let Some((_, v)) = maximize_ratio(&full, proj, &samples.states[k]) {
            best = best.max(v);
        }
    }
    best
}

/// Largest `z† G z` over the samples and local ascents from the best ones.
fn product_supremum(g: &ComplexMatrix, samples: &Samples) -> f64 {
    let mut raw = ComplexMatrix::zeros(g.nrows(), samples.states.len());
    for (k, s) in samples.states.iter().enumerate() {
        raw.set_column(k, &s.vector());
    }
    let hz = g * &raw;
    let values: Vec<f64> = raw.column_iter().zip(hz.column_iter()).map(|(z, w)| z.dotc(&w).re).collect();
    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for k in top_indices(&values, POLISH_STARTS) {
        best = best.max(maximize_form(g, &samples.states[k]).1);
    }
    best
}

/// Largest sampled `z† G z` over `samples` fresh Haar product states.
pub fn sampled_product_max(g: &Gamble, samples: usize, seed: u64) -> f64 {
    let shape = g.shape();
    let mut rng = rng_from_seed(seed);
    (0..samples)
        .map(|_| linalg::quadratic_form(g.matrix(), &haar_product_state(shape, &mut rng).vector()).re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `Π H Π / ‖Π H Π‖_F`, or `None` for a vanishing projection.
fn normalized_physical(h: &ComplexMatrix, proj: &ComplexMatrix) -> Option<ComplexMatrix> {
    let p = hermitian_part(&(proj * h * proj));
    let norm = frobenius_norm(&p);
    (norm > 1e-12).then(|| p * c64(1.0 / norm, 0.0))
}

/// Moves `H` along `ρ/π_ρ − Π z* z*† Π / p*`, the subgradient of
/// `Tr(Hρ)/π_ρ − sup_z ratio`, over a subsample.
fn refine(
    mut h: ComplexMatrix,
    rho_dir: &ComplexMatrix,
    proj: &ComplexMatrix,
    samples: &Samples,
    steps: usize,
) -> ComplexMatrix {
    const SUBSAMPLE: usize = 2_000;
    for step in 0..steps {
        let forms = samples.forms(&h, SUBSAMPLE);
        let Some((_, k)) = best_ratio(&forms, &samples.weights) else {
            break;
        };
        let z = samples.projected.column(k);
        let top = linalg::outer(&z.into_owned()) * c64(1.0 / samples.weights[k], 0.0);
        let eta = 0.5 / ((step + 1) as f64).sqrt();
        let moved = &h + (rho_dir - top) * c64(eta, 0.0);
        match normalized_physical(&moved, proj) {
            Some(next) => h = next,
            None => break,
        }
    }
    h
}

/// Searches `G = Π H Π − c Π` (or `H − c I`) for a gamble negative on every
/// product state with `Tr(G ρ) ≥ 0`.
pub fn dutch_book_witness_search(
    rho: &DensityMatrix,
    star: Option<StarFlag>,
    config: &WitnessConfig,
) -> Result<WitnessOutcome> {
    let shape = rho.shape();
    let proj = projector(shape, star)?;
    let mut rng = rng_from_seed(config.seed);
    let samples = Samples::draw(shape, &proj, config.samples.max(1), &mut rng);
    let pi_rho = trace_product(&proj, rho.matrix());
    let rho_dir = if pi_rho > MIN_PROJECTED_NORM2 {
        hermitian_part(&(&proj * rho.matrix() * &proj)) * c64(1.0 / pi_rho, 0.0)
    } else {
        ComplexMatrix::zeros(shape.dim(), shape.dim())
    };

    let mut candidates: Vec<ComplexMatrix> = Vec::new();
    if let Some(h) = normalized_physical(rho.matrix(), &proj) {
        candidates.push(h);
    }
    for _ in 0..config.candidates {
        let Some(h) = normalized_physical(&random_hermitian(shape.dim(), &mut rng), &proj) else {
            continue;
        };
        candidates.push(refine(h, &rho_dir, &proj, &samples, config.refine_steps));
    }

    for h in candidates {
        let r_star = ratio_supremum(&h, &proj, &samples);
        if !r_star.is_finite() {
            continue;
        }
        let t = trace_product(&h, rho.matrix());
        let c = if pi_rho > MIN_PROJECTED_NORM2 {
            let gap = t / pi_rho - r_star;
            if gap <= config.margin {
                continue;
            }
            r_star + config.shift_fraction * gap
        } else {
            // ρ has no weight on range(Π): any shift keeps Tr(Gρ) = Tr(Hρ).
            if t < 0.0 {
                continue;
            }
            r_star + 1.0
        };
        let g = hermitian_part(&(&h - &proj * c64(c, 0.0)));
        let trace_value = trace_product(&g, rho.matrix());
        if trace_value < 0.0 {
            continue;
        }
        let estimated_max = product_supremum(&g, &samples);
        if estimated_max < -config.margin {
            return Ok(WitnessOutcome::Found(Witness {
                gamble: Gamble::from_hermitian_unchecked(shape, g),
                estimated_max,
                trace_value,
                samples: config.samples,
                margin: config.margin,
            }));
        }
    }
    Ok(WitnessOutcome::NoneFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_row_major;

    fn shape22() -> SystemShape {
        SystemShape::new(2, 2).unwrap()
    }

    fn m4(v: [f64; 16]) -> ComplexMatrix {
        let e: Vec<_> = v.iter().map(|&x| c64(x, 0.0)).collect();
        from_row_major(4, 4, &e).unwrap()
    }

    fn rho_bos() -> DensityMatrix {
        DensityMatrix::new(shape22(), m4([0.5, 0., 0., 0.5, 0., 0., 0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0.5])).unwrap()
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let a = random_hermitian(8, &mut rng_from_seed(4));
        let shape = SystemShape::new(2, 3).unwrap();
        for k in 0..3 {
            let twice = partial_transpose(&partial_transpose(&a, shape, k).unwrap(), shape, k).unwrap();
            assert_eq!(twice, a);
        }
    }

    #[test]
    fn ppt_of_bell_state() {
        assert!((ppt_min_eigenvalue(&rho_bos()).unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(separability_ppt(&rho_bos()).unwrap(), Separability::Entangled);
        let other = DensityMatrix::maximally_mixed(SystemShape::new(3, 2).unwrap());
        assert!(matches!(separability_ppt(&other), Err(Error::UnsupportedShape { n: 3, m: 2 })));
    }

    #[test]
    fn maximally_mixed_decomposes_without_star() {
        let rho = DensityMatrix::maximally_mixed(shape22());
        match projected_mixture_decomposition(&rho, None, 20, 1).unwrap() {
            DecompositionOutcome::Found(d) => assert!(d.residual() < DECOMPOSITION_TOL),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bell_state_is_not_a_product_mixture() {
        let out = projected_mixture_decomposition(&rho_bos(), None, 50, 2).unwrap();
        assert!(matches!(out, DecompositionOutcome::Inconclusive { .. }), "{out:?}");
    }

    #[test]
    fn decomposition_rejects_non_exchangeable_target() {
        assert!(matches!(
            projected_mixture_decomposition(&rho_bos(), Some(StarFlag::Anti), 10, 0),
            Err(Error::NotExchangeable { .. })
        ));
    }
}
