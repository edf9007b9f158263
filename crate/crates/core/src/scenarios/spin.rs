use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hilbert::{inner, tensor_state, StateVector, C64};
use crate::observables::{DifferentiationVerdict, PairKind, TwoParticleState, DEFAULT_FAPP_THRESHOLD};
use crate::permutation::SymmetryClass;

/// `φ₊ = e₀`.
pub fn spin_up() -> StateVector {
    StateVector::basis(2, 0).expect("dim 2")
}

/// `φ₋ = e₁`.
pub fn spin_down() -> StateVector {
    StateVector::basis(2, 1).expect("dim 2")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinOverlapReport {
    /// `|⟨Ψ⊗s₁, Φ⊗s₂⟩|`.
    pub overlap: f64,
    /// `|⟨Ψ, Φ⟩|`.
    pub position_overlap: f64,
    /// `|⟨s₁, s₂⟩|`.
    pub spin_overlap: f64,
    pub verdict: DifferentiationVerdict,
}

/// Overlap of `Ψ⊗s₁` with `Φ⊗s₂`, where the spin factors are 2-dimensional.
pub fn spin_overlap(
    psi: &StateVector,
    s1: &StateVector,
    phi: &StateVector,
    s2: &StateVector,
) -> Result<SpinOverlapReport> {
    let z = inner(&tensor_state(psi, s1)?, &tensor_state(phi, s2)?)?;
    let overlap = z.norm();
    Ok(SpinOverlapReport {
        overlap,
        position_overlap: inner(psi, phi)?.norm(),
        spin_overlap: inner(s1, s2)?.norm(),
        verdict: DifferentiationVerdict::from_overlap(overlap, DEFAULT_FAPP_THRESHOLD)?,
    })
}

/// `⟨Ψ⊗φ₊, Φ⊗φ₋⟩`: zero for any position factors.
pub fn spin_differentiating(psi: &StateVector, phi: &StateVector) -> Result<SpinOverlapReport> {
    spin_overlap(psi, &spin_up(), phi, &spin_down())
}

/// `(φ₊⊗φ₋ − φ₋⊗φ₊)/√2`.
pub fn singlet() -> TwoParticleState {
    let up = spin_up();
    let down = spin_down();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let vector = tensor_state(&up, &down)
        .and_then(|ud| ud.add_scaled(C64::new(-1.0, 0.0), &tensor_state(&down, &up)?))
        .expect("dim 4")
        .scale(C64::new(h, 0.0));
    TwoParticleState {
        kind: PairKind::Identical(SymmetryClass::Fermion),
        vector,
        constituents: (up, down),
    }
}
