//! Dense complex linear algebra on finite-dimensional Hilbert spaces.
//!
//! Tensor products use the row-major flat index convention everywhere in
//! the crate: component `(i, j)` of `u ⊗ v` with `dim v = b` lives at
//! `i * b + j`. For `n` factors, slot 0 is the most significant digit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance for operator identities.
pub const TOL: f64 = 1e-12;

/// Largest one-particle dimension accepted by multi-particle constructions.
pub const MAX_ONE_PARTICLE_DIM: usize = 12;

/// Largest total (tensor) dimension of any state or operator.
pub const MAX_TOTAL_DIM: usize = 20736;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension(dim));
    }
    if dim > MAX_TOTAL_DIM {
        return Err(Error::DimensionCap {
            dim,
            cap: MAX_TOTAL_DIM,
        });
    }
    Ok(())
}

fn check_same(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Complex amplitude vector. Not necessarily normalized; see [`normalize`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        Ok(Self {
            amps: DVector::from_vec(amplitudes),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Unit basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= TOL
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            amps: &self.amps * factor,
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: C64, other: &StateVector) -> Result<Self> {
        check_same(self.dim(), other.dim())?;
        Ok(Self {
            amps: &self.amps + &other.amps * factor,
        })
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        check_same(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Square complex matrix with hermiticity / projector flags.
///
/// Flags are only ever set after a numerical check against [`TOL`] (or by a
/// construction that guarantees the property exactly), so a set flag always
/// implies the property.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: DMatrix<C64>,
    hermitian: bool,
    projector: bool,
}

impl Operator {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        check_dim(m.nrows())?;
        Ok(Self {
            m,
            hermitian: false,
            projector: false,
        })
    }

    /// Builds an operator and flags it hermitian, failing if it is not.
    pub fn hermitian(m: DMatrix<C64>) -> Result<Self> {
        Self::new(m)?.into_hermitian()
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            m: DMatrix::identity(dim, dim),
            hermitian: true,
            projector: true,
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            m: DMatrix::zeros(dim, dim),
            hermitian: true,
            projector: true,
        })
    }

    /// Real diagonal operator; always hermitian.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        check_dim(values.len())?;
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&d))?.into_hermitian()
    }

    /// Row-major real entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        check_same(dim * dim, entries.len())?;
        Self::new(DMatrix::from_row_iterator(
            dim,
            dim,
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_projector(&self) -> bool {
        self.projector
    }

    pub fn hermiticity_residual(&self) -> f64 {
        max_abs(&(&self.m - self.m.adjoint()))
    }

    pub fn idempotence_residual(&self) -> f64 {
        max_abs(&(&self.m * &self.m - &self.m))
    }

    pub fn into_hermitian(mut self) -> Result<Self> {
        let r = self.hermiticity_residual();
        if r > TOL {
            return Err(Error::NotHermitian(r));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn into_projector(self) -> Result<Self> {
        let mut op = self.into_hermitian()?;
        let r = op.idempotence_residual();
        if r > TOL {
            return Err(Error::NotProjector(r));
        }
        op.projector = true;
        Ok(op)
    }

    /// Sets both flags without a numerical check. Only for constructions
    /// that are projectors by exact algebra; callers test the property.
    pub(crate) fn assume_projector(mut self) -> Self {
        self.hermitian = true;
        self.projector = true;
        self
    }

    pub(crate) fn assume_hermitian(mut self) -> Self {
        self.hermitian = true;
        self
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        if !self.hermitian {
            return Err(Error::NotHermitian(self.hermiticity_residual()));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            m: self.m.adjoint(),
            hermitian: self.hermitian,
            projector: self.projector,
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_same(self.dim(), v.dim())?;
        Ok(StateVector {
            amps: &self.m * &v.amps,
        })
    }

    /// Matrix product; flags are dropped.
    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        check_same(self.dim(), other.dim())?;
        Operator::new(&self.m * &other.m)
    }

    /// Sum; hermitian flag kept when both operands carry it.
    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_same(self.dim(), other.dim())?;
        let out = Operator::new(&self.m + &other.m)?;
        Ok(if self.hermitian && other.hermitian {
            out.assume_hermitian()
        } else {
            out
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        check_same(self.dim(), other.dim())?;
        let out = Operator::new(&self.m - &other.m)?;
        Ok(if self.hermitian && other.hermitian {
            out.assume_hermitian()
        } else {
            out
        })
    }

    /// Real scaling keeps hermiticity.
    pub fn scale(&self, factor: f64) -> Operator {
        Operator {
            m: &self.m * C64::new(factor, 0.0),
            hermitian: self.hermitian,
            projector: false,
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.m)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Operator) -> Result<f64> {
        check_same(self.dim(), other.dim())?;
        Ok(max_abs(&(&self.m - &other.m)))
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `⟨u, v⟩`, conjugate-linear in `u`.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<C64> {
    check_same(u.dim(), v.dim())?;
    Ok(u.amps.dotc(&v.amps))
}

pub fn normalize(v: &StateVector) -> Result<StateVector> {
    let n = v.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(v.scale(C64::new(1.0 / n, 0.0)))
}

pub fn tensor_state(u: &StateVector, v: &StateVector) -> Result<StateVector> {
    let b = v.dim();
    check_dim(u.dim() * b)?;
    let amps = DVector::from_fn(u.dim() * b, |k, _| u.amps[k / b] * v.amps[k % b]);
    Ok(StateVector { amps })
}

/// Kronecker product matching [`tensor_state`]: `(A⊗B)(u⊗v) = Au ⊗ Bv`.
pub fn tensor_op(a: &Operator, b: &Operator) -> Result<Operator> {
    check_dim(a.dim() * b.dim())?;
    let out = Operator::new(a.m.kronecker(&b.m))?;
    Ok(if a.hermitian && b.hermitian {
        out.assume_hermitian()
    } else {
        out
    })
}

/// Rank-1 projector `Ψ⟨Ψ, ·⟩`.
pub fn projector_from_state(psi: &StateVector) -> Result<Operator> {
    psi.require_normalized()?;
    let m = &psi.amps * psi.amps.adjoint();
    Operator::new(m)?.into_projector()
}

/// `AB - BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same(a.dim(), b.dim())?;
    Operator::new(&a.m * &b.m - &b.m * &a.m)
}

/// Real part of `⟨Ψ, AΨ⟩` for hermitian `A`.
pub fn expectation(a: &Operator, psi: &StateVector) -> Result<f64> {
    a.require_hermitian()?;
    let av = a.apply(psi)?;
    let z = inner(psi, &av)?;
    if z.im.abs() > 1e-10 {
        return Err(Error::ComplexExpectation(z.im));
    }
    Ok(z.re)
}

/// Seed and stream index for deterministic random generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(*self)
    }
}

/// Sequential random draws from one `(seed, stream)` pair.
///
/// ChaCha8 keyed by `seed_from_u64(seed)` on stream `stream`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(spec: RandomSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(spec.stream);
        Self { rng }
    }

    /// Standard complex normal: real and imaginary parts each N(0, 1/2).
    fn complex_normal(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(0..upper)
    }

    pub fn state(&mut self, dim: usize) -> Result<StateVector> {
        check_dim(dim)?;
        let amps = DVector::from_fn(dim, |_, _| self.complex_normal());
        normalize(&StateVector { amps })
    }

    /// `(G + G†)/2` for a complex Gaussian `G`; exactly hermitian.
    pub fn hermitian(&mut self, dim: usize) -> Result<Operator> {
        check_dim(dim)?;
        let g = DMatrix::from_fn(dim, dim, |_, _| self.complex_normal());
        let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
        Operator::new(h)?.into_hermitian()
    }

    /// Random hermitian rescaled so that its largest entry modulus is 1.
    pub fn unit_scale_hermitian(&mut self, dim: usize) -> Result<Operator> {
        let h = self.hermitian(dim)?;
        let s = h.max_abs_entry();
        Ok(if s > 0.0 { h.scale(1.0 / s) } else { h })
    }

    /// Random pair of unit vectors with `⟨Ψ, Φ⟩ = 0` (Gram–Schmidt).
    pub fn orthogonal_pair(&mut self, dim: usize) -> Result<(StateVector, StateVector)> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "orthogonal pair needs dim >= 2".into(),
            ));
        }
        let psi = self.state(dim)?;
        loop {
            let raw = self.state(dim)?;
            let c = inner(&psi, &raw)?;
            let perp = raw.add_scaled(-c, &psi)?;
            if perp.norm() < 1e-6 {
                continue;
            }
            let mut phi = normalize(&perp)?;
            // second pass removes the residual component left by rounding
            let c2 = inner(&psi, &phi)?;
            phi = normalize(&phi.add_scaled(-c2, &psi)?)?;
            return Ok((psi, phi));
        }
    }
}

pub fn random_state(dim: usize, spec: RandomSpec) -> Result<StateVector> {
    spec.sampler().state(dim)
}

pub fn random_hermitian(dim: usize, spec: RandomSpec) -> Result<Operator> {
    spec.sampler().hermitian(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn plus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn inner_basis_cases() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        assert_eq!(inner(&e0, &e0).unwrap(), c(1.0));
        assert_eq!(inner(&e0, &e1).unwrap(), c(0.0));
        let z = inner(&plus(), &e0).unwrap();
        assert!((z.re - 0.7071067811865476).abs() < 1e-15);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_slot() {
        let u = StateVector::new(vec![C64::new(0.0, 1.0), c(0.0)]).unwrap();
        let v = StateVector::basis(2, 0).unwrap();
        assert_eq!(inner(&u, &v).unwrap(), C64::new(0.0, -1.0));
    }

    #[test]
    fn inner_dimension_mismatch() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(3, 0).unwrap();
        assert!(matches!(
            inner(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_state_index_convention() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        assert_eq!(tensor_state(&e0, &e1).unwrap(), StateVector::basis(4, 1).unwrap());
        assert_eq!(tensor_state(&e1, &e0).unwrap(), StateVector::basis(4, 2).unwrap());
        let t = tensor_state(&plus(), &e0).unwrap();
        let want = StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!(t.max_deviation(&want).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_op_identity_and_diagonal() {
        let i2 = Operator::identity(2).unwrap();
        let i3 = Operator::identity(3).unwrap();
        let k = tensor_op(&i2, &i3).unwrap();
        assert_eq!(k.max_deviation(&Operator::identity(6).unwrap()).unwrap(), 0.0);

        let a = Operator::diagonal(&[2.0, 3.0]).unwrap();
        let b = Operator::diagonal(&[5.0, 7.0]).unwrap();
        let k = tensor_op(&a, &b).unwrap();
        let want = Operator::diagonal(&[10.0, 14.0, 15.0, 21.0]).unwrap();
        assert_eq!(k.max_deviation(&want).unwrap(), 0.0);
        assert!(k.is_hermitian());
    }

    #[test]
    fn projector_from_state_cases() {
        let p = projector_from_state(&StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(p.max_deviation(&Operator::diagonal(&[1.0, 0.0]).unwrap()).unwrap(), 0.0);
        assert!(p.is_projector() && p.is_hermitian());

        let p = projector_from_state(&plus()).unwrap();
        for z in p.matrix().iter() {
            assert!((z - c(0.5)).norm() < 1e-15);
        }
        assert!((p.trace() - c(1.0)).norm() < TOL);
    }

    #[test]
    fn projector_rejects_unnormalized() {
        let v = StateVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(projector_from_state(&v), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn commutator_cases() {
        let a = Operator::diagonal(&[2.0, -1.0]).unwrap();
        let id = Operator::identity(2).unwrap();
        assert_eq!(commutator(&a, &id).unwrap().max_abs_entry(), 0.0);
        let p0 = Operator::diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(commutator(&a, &p0).unwrap().max_abs_entry(), 0.0);

        // [σx, diag(1,0)]: σx·P0 = [[0,0],[1,0]], P0·σx = [[0,1],[0,0]]
        let sx = Operator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let k = commutator(&sx, &p0).unwrap();
        let want = Operator::from_real_rows(2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        assert_eq!(k.max_deviation(&want).unwrap(), 0.0);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = Operator::identity(2).unwrap();
        let b = Operator::identity(3).unwrap();
        assert!(commutator(&a, &b).is_err());
    }

    #[test]
    fn expectation_cases() {
        let psi = random_state(5, RandomSpec::new(3, 0)).unwrap();
        let e = expectation(&Operator::identity(5).unwrap(), &psi).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        let e = expectation(
            &Operator::diagonal(&[0.0, 1.0]).unwrap(),
            &StateVector::basis(2, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn expectation_requires_hermitian_flag() {
        let sy_like = Operator::from_real_rows(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        let e0 = StateVector::basis(2, 0).unwrap();
        assert!(matches!(expectation(&sy_like, &e0), Err(Error::NotHermitian(_))));
        assert!(Operator::hermitian(sy_like.into_matrix()).is_err());
    }

    #[test]
    fn random_state_is_deterministic() {
        let a = random_state(4, RandomSpec::new(7, 0)).unwrap();
        let b = random_state(4, RandomSpec::new(7, 0)).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let c = random_state(4, RandomSpec::new(7, 1)).unwrap();
        assert_ne!(a, c);
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_is_flagged_and_exact() {
        let h = random_hermitian(6, RandomSpec::new(11, 2)).unwrap();
        assert!(h.is_hermitian());
        assert_eq!(h.hermiticity_residual(), 0.0);
    }

    #[test]
    fn orthogonal_pair_overlap_is_tiny() {
        let mut s = RandomSpec::new(5, 0).sampler();
        for d in 2..=8 {
            let (p, q) = s.orthogonal_pair(d).unwrap();
            assert!(inner(&p, &q).unwrap().norm() < 1e-15);
            assert!(p.is_normalized() && q.is_normalized());
        }
    }

    #[test]
    fn dimension_caps() {
        assert!(matches!(StateVector::new(vec![]), Err(Error::ZeroDimension(_))));
        let big = StateVector::basis(200, 0).unwrap();
        let also_big = StateVector::basis(200, 0).unwrap();
        assert!(matches!(
            tensor_state(&big, &also_big),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn normalize_zero_vector_fails() {
        let z = StateVector::from_real(&[0.0, 0.0]).unwrap();
        assert_eq!(normalize(&z), Err(Error::ZeroVector));
    }
}
