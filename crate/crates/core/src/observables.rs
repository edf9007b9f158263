//! Differentiating states, state-sensitive observables and the
//! identical-vs-different equivalence check for two particles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    commutator, expectation, inner, normalize, projector_from_state, tensor_op, tensor_state,
    Operator, RandomSpec, StateVector, C64, TOL,
};
use crate::permutation::{identical_projector, permutator, SymmetryClass};

/// Default overlap below which two states count as FAPP differentiating.
pub const DEFAULT_FAPP_THRESHOLD: f64 = 1e-6;

/// Overlap magnitude below which two states count as exactly differentiating.
pub const EXACT_OVERLAP: f64 = 1e-12;

/// Relative tolerance of the exact equivalence check.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Exact,
    #[serde(rename = "FAPP")]
    Fapp,
    NotDifferentiating,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentiationVerdict {
    pub overlap_magnitude: f64,
    pub verdict: Verdict,
    pub threshold: f64,
}

impl DifferentiationVerdict {
    pub fn from_overlap(overlap_magnitude: f64, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "threshold must be positive, got {threshold}"
            )));
        }
        let verdict = if overlap_magnitude <= EXACT_OVERLAP {
            Verdict::Exact
        } else if overlap_magnitude <= threshold {
            Verdict::Fapp
        } else {
            Verdict::NotDifferentiating
        };
        Ok(Self {
            overlap_magnitude,
            verdict,
            threshold,
        })
    }
}

pub fn classify(
    psi: &StateVector,
    phi: &StateVector,
    threshold: f64,
) -> Result<DifferentiationVerdict> {
    let overlap = inner(psi, phi)?;
    psi.require_normalized()?;
    phi.require_normalized()?;
    DifferentiationVerdict::from_overlap(overlap.norm(), threshold)
}

/// `A_Ψ = P_Ψ A P_Ψ` together with the data it was built from.
#[derive(Clone, Debug)]
pub struct StateSensitiveObservable {
    pub base: Operator,
    pub anchor: StateVector,
    pub realized: Operator,
    /// Whether `[A, P_Ψ] = 0` within [`TOL`]. Recorded, never enforced.
    pub commutes: bool,
}

pub fn state_sensitive(a: &Operator, psi: &StateVector) -> Result<StateSensitiveObservable> {
    a.require_hermitian()?;
    let p = projector_from_state(psi)?;
    let realized = p.mul(a)?.mul(&p)?.into_hermitian()?;
    let commutes = commutator(a, &p)?.max_abs_entry() <= TOL;
    Ok(StateSensitiveObservable {
        base: a.clone(),
        anchor: psi.clone(),
        realized,
        commutes,
    })
}

/// `A_Ψ⊗B_Φ + B_Φ⊗A_Ψ`.
pub fn differentiating_observable(
    a: &Operator,
    psi: &StateVector,
    b: &Operator,
    phi: &StateVector,
) -> Result<Operator> {
    let a_psi = state_sensitive(a, psi)?.realized;
    let b_phi = state_sensitive(b, phi)?.realized;
    tensor_op(&a_psi, &b_phi)?.add(&tensor_op(&b_phi, &a_psi)?)
}

/// `A⊗1 + 1⊗A`.
pub fn one_particle_observable(a: &Operator) -> Result<Operator> {
    a.require_hermitian()?;
    let one = Operator::identity(a.dim())?;
    tensor_op(a, &one)?.add(&tensor_op(&one, a)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    Identical(SymmetryClass),
    Different,
}

/// Two-particle state on `C^d ⊗ C^d` with the one-particle states it was
/// built from.
#[derive(Clone, Debug)]
pub struct TwoParticleState {
    pub kind: PairKind,
    pub vector: StateVector,
    pub constituents: (StateVector, StateVector),
}

/// `I(Ψ⊗Φ)` renormalized to unit norm. Coincides with `√2 I(Ψ⊗Φ)` for
/// orthogonal constituents.
pub fn xi_id(psi: &StateVector, phi: &StateVector, cls: SymmetryClass) -> Result<TwoParticleState> {
    psi.require_normalized()?;
    phi.require_normalized()?;
    let product = tensor_state(psi, phi)?;
    let projected = identical_projector(psi.dim(), cls)?.apply(&product)?;
    if projected.norm() <= TOL {
        return Err(Error::PauliExcluded);
    }
    Ok(TwoParticleState {
        kind: PairKind::Identical(cls),
        vector: normalize(&projected)?,
        constituents: (psi.clone(), phi.clone()),
    })
}

/// `Ψ⊗Φ`.
pub fn xi_dif(psi: &StateVector, phi: &StateVector) -> Result<TwoParticleState> {
    psi.require_normalized()?;
    phi.require_normalized()?;
    Ok(TwoParticleState {
        kind: PairKind::Different,
        vector: tensor_state(psi, phi)?,
        constituents: (psi.clone(), phi.clone()),
    })
}

pub fn map_dif_to_id(s: &TwoParticleState, cls: SymmetryClass) -> Result<TwoParticleState> {
    if s.kind != PairKind::Different {
        return Err(Error::WrongKind("Different"));
    }
    xi_id(&s.constituents.0, &s.constituents.1, cls)
}

/// `√2 (P_Ψ⊗P_Φ)` applied to an identical-particle state.
pub fn map_id_to_dif(
    s: &TwoParticleState,
    psi: &StateVector,
    phi: &StateVector,
) -> Result<TwoParticleState> {
    if !matches!(s.kind, PairKind::Identical(_)) {
        return Err(Error::WrongKind("Identical"));
    }
    let overlap = inner(psi, phi)?.norm();
    if overlap > EXACT_OVERLAP {
        return Err(Error::NotOrthogonal(overlap));
    }
    let p = tensor_op(&projector_from_state(psi)?, &projector_from_state(phi)?)?;
    let v = p
        .apply(&s.vector)?
        .scale(C64::new(std::f64::consts::SQRT_2, 0.0));
    Ok(TwoParticleState {
        kind: PairKind::Different,
        vector: v,
        constituents: (psi.clone(), phi.clone()),
    })
}

/// Deviation of `v` from `w` after removing the best global phase.
pub fn phase_aligned_deviation(v: &StateVector, w: &StateVector) -> Result<f64> {
    let z = inner(v, w)?;
    let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
    v.scale(phase).max_deviation(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
    pub overlap: f64,
    pub lambda: i8,
    /// Allowed deviation: `1e-10 (1 + |rhs|)`, plus `|⟨Ψ,Φ⟩|² ‖A‖_F ‖B‖_F`
    /// when the constituents are not exactly orthogonal.
    pub bound: f64,
    pub pass: bool,
}

/// Compares `⟨Ξ_ID, (A_Ψ⊗B_Φ + B_Φ⊗A_Ψ) Ξ_ID⟩` with `⟨Ξ_DIF, (A⊗B) Ξ_DIF⟩`.
///
/// For non-orthogonal inputs the exact difference is
/// `|⟨Ψ,AΨ⟩⟨Φ,BΦ⟩| |⟨Ψ,Φ⟩|²`, which the FAPP part of `bound` dominates.
pub fn equivalence_check(
    psi: &StateVector,
    phi: &StateVector,
    a: &Operator,
    b: &Operator,
    cls: SymmetryClass,
) -> Result<EquivalenceReport> {
    a.require_hermitian()?;
    b.require_hermitian()?;
    let id = xi_id(psi, phi, cls)?;
    let dif = xi_dif(psi, phi)?;
    let lhs = expectation(&differentiating_observable(a, psi, b, phi)?, &id.vector)?;
    let rhs = expectation(&tensor_op(a, b)?, &dif.vector)?;
    let overlap = inner(psi, phi)?.norm();
    let deviation = (lhs - rhs).abs();
    let mut bound = EQUIVALENCE_TOL * (1.0 + rhs.abs());
    if overlap > EXACT_OVERLAP {
        bound += overlap * overlap * a.frobenius_norm() * b.frobenius_norm();
    }
    Ok(EquivalenceReport {
        lhs,
        rhs,
        deviation,
        overlap,
        lambda: cls.lambda(),
        bound,
        pass: deviation <= bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FappSweep {
    pub dim: usize,
    pub trials: usize,
    pub lambda: i8,
    /// Mixing coefficients `s` in ascending order.
    pub overlaps: Vec<f64>,
    /// Actual `|⟨Ψ, Φ_s⟩| = s / √(1 + s²)`.
    pub overlap_magnitudes: Vec<f64>,
    /// Largest `|lhs − rhs|` over the trials, per `s`.
    pub max_deviation: Vec<f64>,
    /// Least-squares slope of `ln(max_deviation)` against `ln(s)`.
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::DegenerateFit("need at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Sweeps the overlap-controlled family `Φ_s = (Φ⊥ + sΨ)/‖·‖` and fits the
/// log-log scaling of the equivalence deviation.
///
/// Each trial draws `Ψ`, `Φ⊥`, `A`, `B` from stream `spec.stream + trial`
/// and reuses them for every `s`. Observables are rescaled so their largest
/// entry modulus is 1.
pub fn fapp_sweep(
    dim: usize,
    overlaps: &[f64],
    trials: usize,
    spec: RandomSpec,
    cls: SymmetryClass,
) -> Result<FappSweep> {
    let mut s_values: Vec<f64> = overlaps.to_vec();
    for &s in &s_values {
        if !(s > 0.0 && s <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "overlap parameter {s} outside (0, 0.5]"
            )));
        }
    }
    s_values.sort_by(f64::total_cmp);
    s_values.dedup();
    if s_values.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 distinct overlap values, got {}",
            s_values.len()
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }

    let mut max_dev = vec![0.0f64; s_values.len()];
    for t in 0..trials {
        let mut sampler = spec.with_stream(spec.stream.wrapping_add(t as u64)).sampler();
        let (psi, perp) = sampler.orthogonal_pair(dim)?;
        let a = sampler.unit_scale_hermitian(dim)?;
        let b = sampler.unit_scale_hermitian(dim)?;
        for (k, &s) in s_values.iter().enumerate() {
            let phi = normalize(&perp.add_scaled(C64::new(s, 0.0), &psi)?)?;
            let r = equivalence_check(&psi, &phi, &a, &b, cls)?;
            max_dev[k] = max_dev[k].max(r.deviation);
        }
    }
    if max_dev.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::DegenerateFit("zero deviation; log undefined".into()));
    }
    let lx: Vec<f64> = s_values.iter().map(|s| s.ln()).collect();
    let ly: Vec<f64> = max_dev.iter().map(|d| d.ln()).collect();
    let (slope, intercept) = fit_line(&lx, &ly)?;
    Ok(FappSweep {
        dim,
        trials,
        lambda: cls.lambda(),
        overlap_magnitudes: s_values.iter().map(|s| s / (1.0 + s * s).sqrt()).collect(),
        overlaps: s_values,
        max_deviation: max_dev,
        slope,
        intercept,
    })
}

/// Aggregate of [`equivalence_check`] over random orthogonal pairs and random
/// hermitian `A`, `B`, run for both symmetry classes on identical draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceBatch {
    pub dim: usize,
    pub trials: usize,
    pub lambda: i8,
    pub max_deviation: f64,
    /// Largest `|lhs − rhs| / (1 + |rhs|)`.
    pub max_relative_deviation: f64,
    pub max_overlap: f64,
    /// Largest `|lhs(λ) − lhs(−λ)|`.
    pub max_lambda_gap: f64,
    pub failures: usize,
    pub first: EquivalenceReport,
    pub worst_trial: usize,
    pub worst: EquivalenceReport,
}

/// Trial `t` draws `(Ψ, Φ, A, B)` from stream `spec.stream + t`.
pub fn equivalence_batch(
    dim: usize,
    trials: usize,
    spec: RandomSpec,
    cls: SymmetryClass,
) -> Result<EquivalenceBatch> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let other = match cls {
        SymmetryClass::Boson => SymmetryClass::Fermion,
        SymmetryClass::Fermion => SymmetryClass::Boson,
    };
    let mut batch: Option<EquivalenceBatch> = None;
    for t in 0..trials {
        let mut sampler = spec.with_stream(spec.stream.wrapping_add(t as u64)).sampler();
        let (psi, phi) = sampler.orthogonal_pair(dim)?;
        let a = sampler.hermitian(dim)?;
        let b = sampler.hermitian(dim)?;
        let r = equivalence_check(&psi, &phi, &a, &b, cls)?;
        let mirror = equivalence_check(&psi, &phi, &a, &b, other)?;
        let rel = r.deviation / (1.0 + r.rhs.abs());
        let gap = (r.lhs - mirror.lhs).abs();
        let acc = batch.get_or_insert_with(|| EquivalenceBatch {
            dim,
            trials,
            lambda: cls.lambda(),
            max_deviation: 0.0,
            max_relative_deviation: 0.0,
            max_overlap: 0.0,
            max_lambda_gap: 0.0,
            failures: 0,
            first: r,
            worst_trial: 0,
            worst: r,
        });
        if rel > acc.max_relative_deviation {
            acc.worst_trial = t;
            acc.worst = r;
        }
        acc.max_deviation = acc.max_deviation.max(r.deviation);
        acc.max_relative_deviation = acc.max_relative_deviation.max(rel);
        acc.max_overlap = acc.max_overlap.max(r.overlap);
        acc.max_lambda_gap = acc.max_lambda_gap.max(gap);
        acc.failures += usize::from(!(r.pass && mirror.pass));
    }
    Ok(batch.expect("trials > 0"))
}

/// `ε_k = ⟨Ψ_k, H_k Ψ_k⟩` with `H_k = P_Ψk H P_Ψk`.
pub fn energy_of_state(h: &Operator, psi_k: &StateVector) -> Result<f64> {
    let hk = state_sensitive(h, psi_k)?.realized;
    expectation(&hk, psi_k)
}

/// Checks `Π v = λ v` for an identical-particle state.
pub fn symmetry_residual(s: &TwoParticleState) -> Result<f64> {
    let lambda = match s.kind {
        PairKind::Identical(cls) => cls.lambda_f64(),
        PairKind::Different => return Err(Error::WrongKind("Identical")),
    };
    let d = s.constituents.0.dim();
    permutator(d)?
        .apply(&s.vector)?
        .max_deviation(&s.vector.scale(C64::new(lambda, 0.0)))
}
