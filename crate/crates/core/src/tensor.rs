//! Composite systems of identical particles: shapes, permutations of the
//! particle labels, permutation operators on the tensor product space and
//! the (anti)symmetrizing projectors.
//!
//! Basis convention: the leftmost factor is the most significant digit, so
//! `e_{i_1} ⊗ … ⊗ e_{i_m}` sits at index `Σ_j i_j · n^(m-1-j)` (0-based).

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, ComplexVector};

/// Largest composite dimension `n^m` accepted anywhere in the crate.
pub const MAX_DIMENSION: usize = 4096;

/// Largest particle count for which `m!` permutations are enumerated.
pub const MAX_ENUMERATED_PARTICLES: usize = 8;

/// `n`-level particles, `m` of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemShape {
    n: usize,
    m: usize,
}

impl SystemShape {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidShape(format!("n = {n}, m = {m} must both be positive")));
        }
        let dim = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if dim > MAX_DIMENSION as u128 {
            return Err(Error::InvalidShape(format!(
                "composite dimension {n}^{m} exceeds the cap of {MAX_DIMENSION}"
            )));
        }
        Ok(Self { n, m })
    }

    /// Per-particle dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Particle count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Composite dimension `n^m`.
    pub fn dim(&self) -> usize {
        self.n.pow(self.m as u32)
    }

    /// Base-`n` digits of a composite basis index, most significant first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for slot in out.iter_mut().rev() {
            *slot = index % self.n;
            index /= self.n;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.n + d)
    }

    pub(crate) fn check_matrix(&self, a: &ComplexMatrix, what: &str) -> Result<()> {
        let d = self.dim();
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{what} is {}x{}, expected {d}x{d} for n = {}, m = {}",
                a.nrows(),
                a.ncols(),
                self.n,
                self.m
            )));
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(what.into()));
        }
        Ok(())
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, m={}", self.n, self.m)
    }
}

/// Particle statistics imposed by an exchangeability assessment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarFlag {
    /// Bosons: completely symmetric.
    Sym,
    /// Fermions: completely antisymmetric.
    Anti,
}

impl StarFlag {
    /// Sign weight `δ⋆` attached to the pair `(π_l, π_r)`.
    pub fn delta(self, sign_l: i8, sign_r: i8) -> f64 {
        match self {
            StarFlag::Sym => 1.0,
            StarFlag::Anti => f64::from(sign_l * sign_r),
        }
    }

    /// Weight of a single permutation in the projector sum.
    fn weight(self, sign: i8) -> f64 {
        match self {
            StarFlag::Sym => 1.0,
            StarFlag::Anti => f64::from(sign),
        }
    }
}

impl fmt::Display for StarFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarFlag::Sym => "sym",
            StarFlag::Anti => "anti",
        })
    }
}

/// A bijection on particle labels, stored 0-based: `mapping[j] = π(j)`.
///
/// The associated operator sends `x_1 ⊗ … ⊗ x_m` to
/// `x_{π(1)} ⊗ … ⊗ x_{π(m)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let m = mapping.len();
        if m == 0 {
            return Err(Error::InvalidPermutation("empty mapping".into()));
        }
        let mut seen = vec![false; m];
        for &k in &mapping {
            if k >= m || seen[k] {
                return Err(Error::InvalidPermutation(format!("{mapping:?} is not a bijection on 0..{m}")));
            }
            seen[k] = true;
        }
        Ok(Self { mapping })
    }

    /// Builds from the 1-based image list used in most texts.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("1-based images must be positive".into()));
        }
        Self::new(images.iter().map(|&k| k - 1).collect())
    }

    pub fn identity(m: usize) -> Self {
        Self { mapping: (0..m).collect() }
    }

    pub fn transposition(m: usize, a: usize, b: usize) -> Result<Self> {
        if a >= m || b >= m {
            return Err(Error::InvalidPermutation(format!("transposition ({a} {b}) out of range for m = {m}")));
        }
        let mut mapping: Vec<usize> = (0..m).collect();
        mapping.swap(a, b);
        Ok(Self { mapping })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &k)| i == k)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &k) in self.mapping.iter().enumerate() {
            inv[k] = i;
        }
        Self { mapping: inv }
    }

    /// The permutation whose operator is `P_self · P_other`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidPermutation(format!(
                "cannot compose permutations of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self { mapping: self.mapping.iter().map(|&j| other.mapping[j]).collect() })
    }

    /// Parity from the cycle decomposition: `(-1)^(m - #cycles)`.
    pub fn sign(&self) -> i8 {
        let m = self.len();
        let mut visited = vec![false; m];
        let mut cycles = 0;
        for start in 0..m {
            if visited[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !visited[k] {
                visited[k] = true;
                k = self.mapping[k];
            }
        }
        if (m - cycles).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Reorders a list of per-particle items: `out[j] = items[π(j)]`.
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.mapping.iter().map(|&k| items[k].clone()).collect()
    }

    /// Where each composite basis index is sent: `P_π e_k = e_{map[k]}`.
    pub fn basis_map(&self, shape: SystemShape) -> Result<Vec<usize>> {
        self.check_length(shape)?;
        let dim = shape.dim();
        let mut map = vec![0; dim];
        for (k, slot) in map.iter_mut().enumerate() {
            let digits = shape.digits(k);
            let out = self.permute(&digits);
            *slot = shape.index_of(&out);
        }
        Ok(map)
    }

    fn check_length(&self, shape: SystemShape) -> Result<()> {
        if self.len() != shape.m() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} used with m = {}",
                self.len(),
                shape.m()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based: Vec<String> = self.mapping.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "[{}]", one_based.join(" "))
    }
}

/// Heap's algorithm. Yields every permutation of `0..m` once, together with
/// its sign; consecutive items differ by one transposition.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Vec<usize>,
    counters: Vec<usize>,
    depth: usize,
    sign: i8,
    started: bool,
}

impl Permutations {
    pub fn new(m: usize) -> Self {
        Self { current: (0..m).collect(), counters: vec![0; m], depth: 1, sign: 1, started: false }
    }
}

impl Iterator for Permutations {
    type Item = (Permutation, i8);

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            if self.current.is_empty() {
                return None;
            }
            return Some((Permutation { mapping: self.current.clone() }, self.sign));
        }
        let m = self.current.len();
        while self.depth < m {
            let i = self.depth;
            if self.counters[i] < i {
                if i.is_multiple_of(2) {
                    self.current.swap(0, i);
                } else {
                    self.current.swap(self.counters[i], i);
                }
                self.sign = -self.sign;
                self.counters[i] += 1;
                self.depth = 1;
                return Some((Permutation { mapping: self.current.clone() }, self.sign));
            }
            self.counters[i] = 0;
            self.depth += 1;
        }
        None
    }
}

/// Every permutation of `m` labels with its sign, capped at
/// [`MAX_ENUMERATED_PARTICLES`].
pub fn all_permutations(m: usize) -> Result<Vec<(Permutation, i8)>> {
    if m > MAX_ENUMERATED_PARTICLES {
        return Err(Error::TooManyParticles { m, cap: MAX_ENUMERATED_PARTICLES });
    }
    Ok(Permutations::new(m).collect())
}

/// Sign of a permutation (`+1` even, `-1` odd).
pub fn permutation_sign(p: &Permutation) -> i8 {
    p.sign()
}

/// The unitary `P_π` on the composite space.
pub fn permutation_operator(p: &Permutation, shape: SystemShape) -> Result<ComplexMatrix> {
    let map = p.basis_map(shape)?;
    let dim = shape.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (k, &row) in map.iter().enumerate() {
        out[(row, k)] = c64(1.0, 0.0);
    }
    Ok(out)
}

/// `P_π z` without forming the matrix.
pub fn permute_vector(p: &Permutation, shape: SystemShape, z: &ComplexVector) -> Result<ComplexVector> {
    if z.len() != shape.dim() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for dimension {}", z.len(), shape.dim())));
    }
    let map = p.basis_map(shape)?;
    let mut out = ComplexVector::zeros(z.len());
    for (k, &row) in map.iter().enumerate() {
        out[row] = z[k];
    }
    Ok(out)
}

/// `P_l† A P_r` via index maps: entry `(i, j)` is `A[map_l[i], map_r[j]]`.
pub(crate) fn sandwich_by_maps(a: &ComplexMatrix, map_l: &[usize], map_r: &[usize]) -> ComplexMatrix {
    let dim = a.nrows();
    ComplexMatrix::from_fn(dim, dim, |i, j| a[(map_l[i], map_r[j])])
}

/// `P_r A P_l†` via index maps, the dual-side action on states.
pub(crate) fn conjugate_state_by_maps(a: &ComplexMatrix, map_r: &[usize], map_l: &[usize]) -> ComplexMatrix {
    let dim = a.nrows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(map_r[i], map_l[j])] = a[(i, j)];
        }
    }
    out
}

/// `Π_Sym = (1/m!) Σ_π P_π` or `Π_Anti = (1/m!) Σ_π sign(π) P_π`.
pub fn symmetrizer(shape: SystemShape, star: StarFlag) -> Result<ComplexMatrix> {
    let perms = all_permutations(shape.m())?;
    let dim = shape.dim();
    let scale = 1.0 / perms.len() as f64;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (p, sign) in &perms {
        let w = star.weight(*sign) * scale;
        for (k, row) in p.basis_map(shape)?.into_iter().enumerate() {
            out[(row, k)] += c64(w, 0.0);
        }
    }
    Ok(out)
}

/// A point of the possibility space: one unit vector per particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<ComplexVector>,
}

impl ProductState {
    /// Unit-norm tolerance applied to each factor.
    pub const NORM_TOL: f64 = 1e-9;

    pub fn new(factors: Vec<ComplexVector>) -> Result<Self> {
        let n = factors
            .first()
            .map(|f| f.len())
            .ok_or_else(|| Error::InvalidShape("product state needs at least one factor".into()))?;
        for (index, f) in factors.iter().enumerate() {
            if f.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "factor {index} has length {}, expected {n}",
                    f.len()
                )));
            }
            let norm = f.norm();
            if (norm - 1.0).abs() > Self::NORM_TOL {
                return Err(Error::NotUnitNorm { index, norm });
            }
        }
        SystemShape::new(n, factors.len())?;
        Ok(Self { factors })
    }

    /// Normalizes each factor first; zero factors are rejected.
    pub fn normalized(factors: Vec<ComplexVector>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for (index, f) in factors.into_iter().enumerate() {
            let norm = f.norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::NotUnitNorm { index, norm });
            }
            out.push(f.unscale(norm));
        }
        Self::new(out)
    }

    /// Convenience constructor from per-factor `[re, im]` slices.
    pub fn from_parts(factors: &[&[Complex64]]) -> Result<Self> {
        Self::new(factors.iter().map(|f| ComplexVector::from_column_slice(f)).collect())
    }

    pub fn shape(&self) -> SystemShape {
        SystemShape { n: self.factors[0].len(), m: self.factors.len() }
    }

    pub fn factors(&self) -> &[ComplexVector] {
        &self.factors
    }

    /// `x_1 ⊗ … ⊗ x_m`.
    pub fn vector(&self) -> ComplexVector {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = acc.kronecker(f);
        }
        acc
    }

    /// Reorders the factors as `P_π` does.
    pub fn permuted(&self, p: &Permutation) -> Result<Self> {
        p.check_length(self.shape())?;
        Ok(Self { factors: p.permute(&self.factors) })
    }

    pub(crate) fn from_factors_unchecked(factors: Vec<ComplexVector>) -> Self {
        Self { factors }
    }
}
