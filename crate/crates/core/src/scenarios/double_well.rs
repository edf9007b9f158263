//! Symmetric double square well on a hard-wall grid.
//!
//! Units with `ħ²/2m = 1`, so `H = −d²/dx² + V(x)`. The grid spans
//! `[−L, L]` with `grid_points` points including both walls, where the
//! wave function vanishes. `V = barrier_height` for `|x| < barrier_half_width`
//! and zero elsewhere, so the two wells are the flat regions between the
//! barrier and the walls.
//!
//! Because `V` is even, the Hamiltonian splits into even and odd sectors on
//! the half grid, each solved separately; the even/odd eigenvectors are
//! therefore exactly parity-pure regardless of how small the splitting is.

use serde::{Deserialize, Serialize};

use super::tridiagonal::SymTridiagonal;
use crate::error::{Error, Result};
use crate::hilbert::StateVector;

pub const MIN_GRID_POINTS: usize = 201;

/// Required eigenpair residual `‖Hφ − Eφ‖₂` for unit `φ`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub grid_points: usize,
    pub domain_half_width: f64,
    pub barrier_height: f64,
    pub barrier_half_width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WellPreset {
    None,
    Medium,
    High,
}

impl WellPreset {
    pub const ALL: [WellPreset; 3] = [WellPreset::None, WellPreset::Medium, WellPreset::High];

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Medium => "medium",
            Self::High => "high",
        }
    }

    pub fn config_json(self) -> &'static str {
        match self {
            Self::None => include_str!("../../presets/none.json"),
            Self::Medium => include_str!("../../presets/medium.json"),
            Self::High => include_str!("../../presets/high.json"),
        }
    }

    pub fn spec(self) -> WellSpec {
        WellSpec::from_json(self.config_json()).expect("shipped preset is valid")
    }
}

impl std::str::FromStr for WellPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "medium" => Ok(Self::Medium),
            "high" => Ok(Self::High),
            other => Err(Error::Parse(format!("unknown preset '{other}'"))),
        }
    }
}

impl WellSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: WellSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.grid_points < MIN_GRID_POINTS || self.grid_points % 2 == 0 {
            return bad(format!(
                "grid_points must be odd and >= {MIN_GRID_POINTS}, got {}",
                self.grid_points
            ));
        }
        if !(self.domain_half_width > 0.0) || !self.domain_half_width.is_finite() {
            return bad("domain_half_width must be positive".into());
        }
        if !(self.barrier_height >= 0.0) || !self.barrier_height.is_finite() {
            return bad("barrier_height must be non-negative".into());
        }
        if !(self.barrier_half_width >= 0.0) || self.barrier_half_width >= self.domain_half_width
        {
            return bad("barrier must lie strictly inside the domain".into());
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.domain_half_width / (self.grid_points - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        let c = (self.grid_points - 1) / 2;
        (0..self.grid_points)
            .map(|i| (i as f64 - c as f64) * h)
            .collect()
    }

    pub fn potential(&self) -> Vec<f64> {
        self.grid()
            .iter()
            .map(|x| {
                if x.abs() < self.barrier_half_width {
                    self.barrier_height
                } else {
                    0.0
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellReport {
    pub e_even: f64,
    pub e_odd: f64,
    pub splitting: f64,
    /// Third level overall (next above the tunneling doublet).
    pub e_next: f64,
    pub left_mass: f64,
    pub right_mass: f64,
    pub lr_overlap: f64,
    pub even_odd_overlap: f64,
    pub residual_even: f64,
    pub residual_odd: f64,
}

/// Localized combinations `L, R = (φ_even ± φ_odd)/√2`.
#[derive(Clone, Debug)]
pub struct LocalizedStates {
    pub left: StateVector,
    pub right: StateVector,
    /// Weight of `L` on the left half (centre point split evenly).
    pub left_mass: f64,
    /// Weight of `R` on the right half.
    pub right_mass: f64,
    /// `|⟨L, R⟩|`.
    pub overlap: f64,
}

#[derive(Clone, Debug)]
pub struct DoubleWell {
    pub spec: WellSpec,
    pub x: Vec<f64>,
    pub potential: Vec<f64>,
    /// Unit-norm grid vectors (`Σ φ_i² = 1`), walls included.
    pub phi_even: Vec<f64>,
    pub phi_odd: Vec<f64>,
    pub localized: LocalizedStates,
    pub report: WellReport,
}

fn full_hamiltonian(spec: &WellSpec) -> Result<SymTridiagonal> {
    // interior points only; walls are Dirichlet
    let h2 = spec.spacing().powi(2);
    let v = spec.potential();
    let n = spec.grid_points - 2;
    SymTridiagonal::new(
        (1..=n).map(|i| 2.0 / h2 + v[i]).collect(),
        vec![-1.0 / h2; n - 1],
    )
}

/// Even sector on `{c, c+1, …, N−2}` with `φ_{c−1} = φ_{c+1}`, symmetrized
/// by scaling the centre component by `1/√2`.
fn even_sector(spec: &WellSpec) -> Result<SymTridiagonal> {
    let h2 = spec.spacing().powi(2);
    let v = spec.potential();
    let c = (spec.grid_points - 1) / 2;
    let n = spec.grid_points - 1 - c;
    let diag = (0..n).map(|k| 2.0 / h2 + v[c + k]).collect();
    let mut off = vec![-1.0 / h2; n - 1];
    off[0] = -std::f64::consts::SQRT_2 / h2;
    SymTridiagonal::new(diag, off)
}

/// Odd sector on `{c+1, …, N−2}` with `φ_c = 0`.
fn odd_sector(spec: &WellSpec) -> Result<SymTridiagonal> {
    let h2 = spec.spacing().powi(2);
    let v = spec.potential();
    let c = (spec.grid_points - 1) / 2;
    let n = spec.grid_points - 2 - c;
    SymTridiagonal::new(
        (0..n).map(|k| 2.0 / h2 + v[c + 1 + k]).collect(),
        vec![-1.0 / h2; n - 1],
    )
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // pairwise from both ends so parity-opposite vectors cancel exactly
    let n = a.len();
    let mut s = 0.0;
    for k in 0..n / 2 {
        s += a[k] * b[k] + a[n - 1 - k] * b[n - 1 - k];
    }
    if n % 2 == 1 {
        s += a[n / 2] * b[n / 2];
    }
    s
}

fn half_masses(v: &[f64]) -> (f64, f64) {
    let c = v.len() / 2;
    let left: f64 = v[..c].iter().map(|x| x * x).sum::<f64>() + 0.5 * v[c] * v[c];
    let right: f64 = v[c + 1..].iter().map(|x| x * x).sum::<f64>() + 0.5 * v[c] * v[c];
    (left, right)
}

pub fn solve_double_well(spec: &WellSpec) -> Result<DoubleWell> {
    spec.validate()?;
    let n = spec.grid_points;
    let c = (n - 1) / 2;
    let even = even_sector(spec)?;
    let odd = odd_sector(spec)?;

    let e_even = even.eigenvalue(0)?;
    let e_odd = odd.eigenvalue(0)?;
    let e_next = even.eigenvalue(1)?.min(odd.eigenvalue(1)?);
    if e_odd < e_even {
        return Err(Error::Eigensolver(format!(
            "odd level {e_odd} below even level {e_even}"
        )));
    }

    let ye = even.eigenvector(e_even)?;
    let yo = odd.eigenvector(e_odd)?;

    let mut phi_even = vec![0.0; n];
    phi_even[c] = std::f64::consts::SQRT_2 * ye[0];
    for k in 1..ye.len() {
        phi_even[c + k] = ye[k];
        phi_even[c - k] = ye[k];
    }
    let mut phi_odd = vec![0.0; n];
    for (k, &y) in yo.iter().enumerate() {
        phi_odd[c + 1 + k] = y;
        phi_odd[c - 1 - k] = -y;
    }
    normalize(&mut phi_even);
    normalize(&mut phi_odd);
    if phi_even.iter().sum::<f64>() < 0.0 {
        phi_even.iter_mut().for_each(|x| *x = -*x);
    }
    // orient φ_odd so that φ_even + φ_odd piles up on the left
    let left_cross: f64 = phi_even[..c]
        .iter()
        .zip(&phi_odd[..c])
        .map(|(a, b)| a * b)
        .sum();
    if left_cross < 0.0 {
        phi_odd.iter_mut().for_each(|x| *x = -*x);
    }

    let h_full = full_hamiltonian(spec)?;
    let residual_even = h_full.residual(e_even, &phi_even[1..n - 1]);
    let residual_odd = h_full.residual(e_odd, &phi_odd[1..n - 1]);
    for r in [residual_even, residual_odd] {
        if !(r <= EIGEN_RESIDUAL_TOL) {
            return Err(Error::Eigensolver(format!("eigenpair residual {r:e}")));
        }
    }

    let localized = localized_states(&phi_even, &phi_odd)?;
    let report = WellReport {
        e_even,
        e_odd,
        splitting: e_odd - e_even,
        e_next,
        left_mass: localized.left_mass,
        right_mass: localized.right_mass,
        lr_overlap: localized.overlap,
        even_odd_overlap: dot(&phi_even, &phi_odd).abs(),
        residual_even,
        residual_odd,
    };
    Ok(DoubleWell {
        spec: *spec,
        x: spec.grid(),
        potential: spec.potential(),
        phi_even,
        phi_odd,
        localized,
        report,
    })
}

/// Builds `L, R = (φ_even ± φ_odd)/√2` and their half-domain weights.
pub fn localized_states(phi_even: &[f64], phi_odd: &[f64]) -> Result<LocalizedStates> {
    if phi_even.len() != phi_odd.len() || phi_even.len() % 2 == 0 {
        return Err(Error::InvalidParameter(
            "eigenvectors must share an odd-length grid".into(),
        ));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let left: Vec<f64> = phi_even.iter().zip(phi_odd).map(|(e, o)| s * (e + o)).collect();
    let right: Vec<f64> = phi_even.iter().zip(phi_odd).map(|(e, o)| s * (e - o)).collect();
    let overlap = dot(&left, &right).abs();
    let (left_mass, _) = half_masses(&left);
    let (_, right_mass) = half_masses(&right);
    Ok(LocalizedStates {
        left: StateVector::from_real(&left)?,
        right: StateVector::from_real(&right)?,
        left_mass,
        right_mass,
        overlap,
    })
}

/// `E₂ − E₁` for a hard-wall box of width `2L` (`ħ²/2m = 1`).
pub fn box_first_gap(domain_half_width: f64) -> f64 {
    let k = std::f64::consts::PI / (2.0 * domain_half_width);
    3.0 * k * k
}
