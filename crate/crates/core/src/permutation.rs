//! Permutation operators on `n`-fold tensor powers and the symmetry
//! projectors built from them.
//!
//! Composition convention: `sigma.compose(&tau)` is `σ∘τ`, i.e. `τ` acts
//! first, `(σ∘τ)(k) = σ(τ(k))`. The operator `P_σ` moves the factor in
//! slot `k` to slot `σ(k)`, so `P_σ P_τ = P_{σ∘τ}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    check_dim, tensor_op, RandomSpec, Operator, StateVector, C64, MAX_ONE_PARTICLE_DIM, TOL,
};

/// Largest dense operator the permutation module will materialize.
pub const MAX_DENSE_DIM: usize = 4096;

/// Largest particle number for explicit sums over `S_n`.
pub const MAX_SUM_PARTICLES: usize = 6;

/// Boson (`λ = +1`) or fermion (`λ = -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Boson,
    Fermion,
}

impl SymmetryClass {
    pub fn from_lambda(lambda: i64) -> Result<Self> {
        match lambda {
            1 => Ok(Self::Boson),
            -1 => Ok(Self::Fermion),
            other => Err(Error::InvalidLambda(other)),
        }
    }

    pub fn lambda(self) -> i8 {
        match self {
            Self::Boson => 1,
            Self::Fermion => -1,
        }
    }

    pub fn lambda_f64(self) -> f64 {
        f64::from(self.lambda())
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bose" | "boson" | "+1" | "1" => Ok(Self::Boson),
            "fermi" | "fermion" | "-1" => Ok(Self::Fermion),
            other => Err(Error::Parse(format!("unknown statistics '{other}'"))),
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Boson => "bose",
            Self::Fermion => "fermi",
        })
    }
}

/// Bijection of `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        if n == 0 {
            return Err(Error::InvalidPermutation(mapping));
        }
        for &k in &mapping {
            if k >= n || seen[k] {
                return Err(Error::InvalidPermutation(mapping));
            }
            seen[k] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::InvalidPermutation(vec![i, j]));
        }
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.swap(i, j);
        Ok(Self { mapping })
    }

    /// `k -> k + 1 mod n`.
    pub fn cycle(n: usize) -> Self {
        Self {
            mapping: (0..n).map(|k| (k + 1) % n).collect(),
        }
    }

    /// Every permutation of `n` points, in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n)
            .permutations(n)
            .map(|mapping| Permutation { mapping })
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, k: usize) -> usize {
        self.mapping[k]
    }

    /// `self ∘ other` (`other` first).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: other.n(),
            });
        }
        Ok(Permutation {
            mapping: other.mapping.iter().map(|&k| self.mapping[k]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut mapping = vec![0; self.n()];
        for (k, &s) in self.mapping.iter().enumerate() {
            mapping[s] = k;
        }
        Permutation { mapping }
    }

    pub fn inversions(&self) -> usize {
        self.mapping
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| a > b)
            .count()
    }

    /// `(-1)^inversions`.
    pub fn sign(&self) -> i8 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

fn check_power(d: usize, n: usize, cap: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::ZeroDimension(d));
    }
    if d > MAX_ONE_PARTICLE_DIM {
        return Err(Error::DimensionCap {
            dim: d,
            cap: MAX_ONE_PARTICLE_DIM,
        });
    }
    let total = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .filter(|&t| t <= cap)
        .ok_or(Error::DimensionCap {
            dim: d.saturating_pow(n.min(64) as u32),
            cap,
        })?;
    check_dim(total)?;
    Ok(total)
}

/// Flat index of `P_σ e_{i_0} ⊗ … ⊗ e_{i_{n-1}}` given the input flat index.
fn permuted_index(d: usize, sigma: &Permutation, input: usize, digits: &mut [usize]) -> usize {
    let n = sigma.n();
    let mut rest = input;
    for slot in (0..n).rev() {
        digits[slot] = rest % d;
        rest /= d;
    }
    let mut out = vec![0usize; n];
    for (k, &i) in digits.iter().enumerate() {
        out[sigma.apply(k)] = i;
    }
    out.iter().fold(0, |acc, &i| acc * d + i)
}

/// `P_σ` on `(C^d)^{⊗n}`.
pub fn perm_operator(d: usize, sigma: &Permutation) -> Result<Operator> {
    let total = check_power(d, sigma.n(), MAX_DENSE_DIM)?;
    let mut m = DMatrix::zeros(total, total);
    let mut digits = vec![0; sigma.n()];
    for input in 0..total {
        let out = permuted_index(d, sigma, input, &mut digits);
        m[(out, input)] = C64::new(1.0, 0.0);
    }
    Operator::new(m)
}

/// The two-particle swap `Π(Ψ⊗Φ) = Φ⊗Ψ` on `C^d ⊗ C^d`.
pub fn permutator(d: usize) -> Result<Operator> {
    let swap = Permutation::transposition(2, 0, 1)?;
    // a permutation matrix of an involution is real symmetric
    Ok(perm_operator(d, &swap)?.assume_hermitian())
}

/// `½(1 + λΠ)`.
pub fn identical_projector(d: usize, cls: SymmetryClass) -> Result<Operator> {
    let pi = permutator(d)?;
    let one = Operator::identity(pi.dim())?;
    let signed = pi.scale(cls.lambda_f64());
    Ok(one.add(&signed)?.scale(0.5).assume_projector())
}

pub fn symmetrizer(d: usize) -> Result<Operator> {
    identical_projector(d, SymmetryClass::Boson)
}

pub fn antisymmetrizer(d: usize) -> Result<Operator> {
    identical_projector(d, SymmetryClass::Fermion)
}

fn n_projector(d: usize, n: usize, cls: SymmetryClass) -> Result<Operator> {
    if n == 0 || n > MAX_SUM_PARTICLES {
        return Err(Error::Budget(format!(
            "n = {n} particles; explicit S_n sums support 1..={MAX_SUM_PARTICLES}"
        )));
    }
    let total = check_power(d, n, MAX_DENSE_DIM)?;
    let norm: f64 = (1..=n).map(|k| k as f64).product();
    let mut m = DMatrix::<C64>::zeros(total, total);
    let mut digits = vec![0; n];
    for sigma in Permutation::all(n) {
        let weight = match cls {
            SymmetryClass::Boson => 1.0,
            SymmetryClass::Fermion => f64::from(sigma.sign()),
        } / norm;
        for input in 0..total {
            let out = permuted_index(d, &sigma, input, &mut digits);
            m[(out, input)] += C64::new(weight, 0.0);
        }
    }
    Ok(Operator::new(m)?.assume_projector())
}

/// `(1/n!) Σ_σ P_σ`.
pub fn n_symmetrizer(d: usize, n: usize) -> Result<Operator> {
    n_projector(d, n, SymmetryClass::Boson)
}

/// `(1/n!) Σ_σ sgn(σ) P_σ`.
pub fn n_antisymmetrizer(d: usize, n: usize) -> Result<Operator> {
    n_projector(d, n, SymmetryClass::Fermion)
}

/// Rank of a flagged projector, read off its trace.
pub fn subspace_dimension(p: &Operator) -> Result<usize> {
    if !p.is_projector() {
        return Err(Error::NotProjector(p.idempotence_residual()));
    }
    let t = p.trace().re;
    let r = t.round();
    if (t - r).abs() > 1e-8 || r < 0.0 {
        return Err(Error::NonIntegerTrace(t));
    }
    Ok(r as usize)
}

/// Residuals of the permutator and projector identities for one dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub dim: usize,
    pub trials: usize,
    /// Max-entry residuals keyed `pi_squared`, `hermiticity`, `conjugation`,
    /// `projector_sum`, `projector_product`, `idempotence_S`, `idempotence_A`.
    pub residuals: BTreeMap<String, f64>,
    /// Eigenvalues of Π in ascending order.
    pub spectrum: Vec<f64>,
    /// Largest distance of an eigenvalue from the nearer of ±1.
    pub spectrum_deviation: f64,
    /// Largest `‖Πx − λx‖` over the computed eigenpairs.
    pub eigen_residual: f64,
    pub plus_multiplicity: usize,
    pub minus_multiplicity: usize,
    pub pass: bool,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

pub const SPECTRUM_TOL: f64 = 1e-10;

pub fn verify_axioms(d: usize, trials: usize, spec: RandomSpec) -> Result<AxiomReport> {
    let pi = permutator(d)?;
    let dd = pi.dim();
    let one = Operator::identity(dd)?;
    let s = symmetrizer(d)?;
    let a = antisymmetrizer(d)?;

    let mut residuals = BTreeMap::new();
    residuals.insert("pi_squared".to_string(), pi.mul(&pi)?.max_deviation(&one)?);
    residuals.insert("hermiticity".to_string(), pi.hermiticity_residual());

    let pi_dag = pi.adjoint();
    let mut conjugation: f64 = 0.0;
    for t in 0..trials {
        let mut sampler = spec.with_stream(spec.stream.wrapping_add(t as u64)).sampler();
        let ao = sampler.hermitian(d)?;
        // B need not be hermitian for the identity to hold
        let bo = Operator::new(
            sampler.hermitian(d)?.matrix()
                + sampler.hermitian(d)?.matrix() * C64::new(0.0, 1.0),
        )?;
        let lhs = pi_dag.mul(&tensor_op(&ao, &bo)?)?.mul(&pi)?;
        let rhs = tensor_op(&bo, &ao)?;
        conjugation = conjugation.max(lhs.max_deviation(&rhs)?);
    }
    residuals.insert("conjugation".to_string(), conjugation);
    residuals.insert("projector_sum".to_string(), s.add(&a)?.max_deviation(&one)?);
    residuals.insert("projector_product".to_string(), s.mul(&a)?.max_abs_entry());
    residuals.insert("idempotence_S".to_string(), s.idempotence_residual());
    residuals.insert("idempotence_A".to_string(), a.idempotence_residual());

    let eig = SymmetricEigen::new(pi.matrix().clone());
    let mut spectrum: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut eigen_residual: f64 = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let x = eig.eigenvectors.column(k);
        let r = pi.matrix() * x - x * C64::new(lambda, 0.0);
        eigen_residual = eigen_residual.max(r.norm());
    }
    spectrum.sort_by(f64::total_cmp);
    let spectrum_deviation = spectrum
        .iter()
        .map(|&l| (l - 1.0).abs().min((l + 1.0).abs()))
        .fold(0.0, f64::max);
    let plus_multiplicity = spectrum.iter().filter(|&&l| l > 0.0).count();
    let minus_multiplicity = spectrum.len() - plus_multiplicity;

    let pass = residuals.values().all(|&r| r <= TOL)
        && spectrum_deviation <= SPECTRUM_TOL
        && eigen_residual <= SPECTRUM_TOL;

    Ok(AxiomReport {
        dim: d,
        trials,
        residuals,
        spectrum,
        spectrum_deviation,
        eigen_residual,
        plus_multiplicity,
        minus_multiplicity,
        pass,
    })
}

/// `λ` such that `Π v = λ v`, if `v` is a Π-eigenvector within `tol`.
pub fn permutation_eigenvalue(v: &StateVector, tol: f64) -> Result<Option<SymmetryClass>> {
    let d = (v.dim() as f64).sqrt().round() as usize;
    if d * d != v.dim() {
        return Err(Error::InvalidParameter(format!(
            "dimension {} is not a square",
            v.dim()
        )));
    }
    let pv = permutator(d)?.apply(v)?;
    for cls in [SymmetryClass::Boson, SymmetryClass::Fermion] {
        if pv.max_deviation(&v.scale(C64::new(cls.lambda_f64(), 0.0)))? <= tol {
            return Ok(Some(cls));
        }
    }
    Ok(None)
}
