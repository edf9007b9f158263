//! Browser bindings: double-well densities, the Gaussian overlap curve and
//! the FAPP overlap sweep. Each binding returns a JSON string; the plain
//! `*_json` functions carry the logic so they can be tested natively.

use idpart::hilbert::RandomSpec;
use idpart::observables::{fapp_sweep, DifferentiationVerdict, DEFAULT_FAPP_THRESHOLD};
use idpart::permutation::SymmetryClass;
use idpart::scenarios::{gaussian_overlap, solve_double_well, GaussianSpec, WellSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const PLOT_POINTS: usize = 401;

#[derive(Serialize)]
struct WellPlot {
    x: Vec<f64>,
    potential: Vec<f64>,
    even: Vec<f64>,
    odd: Vec<f64>,
    left_density: Vec<f64>,
    right_density: Vec<f64>,
    e_even: f64,
    e_odd: f64,
    splitting: f64,
    left_mass: f64,
    lr_overlap: f64,
}

/// Every `k`-th grid point, keeping both ends, at most `PLOT_POINTS` samples.
fn thin(v: &[f64]) -> Vec<f64> {
    let step = v.len().saturating_sub(1).div_ceil(PLOT_POINTS - 1).max(1);
    v.iter().step_by(step).copied().collect()
}

pub fn double_well_json(barrier_height: f64, barrier_half_width: f64) -> Result<String, String> {
    let spec = WellSpec {
        grid_points: 2001,
        domain_half_width: 2.0,
        barrier_height,
        barrier_half_width,
    };
    let w = solve_double_well(&spec).map_err(|e| e.to_string())?;
    let density = |s: &idpart::StateVector| -> Vec<f64> {
        s.amplitudes().iter().map(|z| z.norm_sqr()).collect()
    };
    let plot = WellPlot {
        x: thin(&w.x),
        potential: thin(&w.potential),
        even: thin(&w.phi_even),
        odd: thin(&w.phi_odd),
        left_density: thin(&density(&w.localized.left)),
        right_density: thin(&density(&w.localized.right)),
        e_even: w.report.e_even,
        e_odd: w.report.e_odd,
        splitting: w.report.splitting,
        left_mass: w.report.left_mass,
        lr_overlap: w.report.lr_overlap,
    };
    serde_json::to_string(&plot).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct OverlapCurve {
    separation: Vec<f64>,
    overlap: Vec<f64>,
    /// Smallest sampled separation whose overlap is at or below the threshold.
    fapp_separation: Option<f64>,
    threshold: f64,
}

pub fn gaussian_curve_json(width: f64, max_separation: f64, samples: usize) -> Result<String, String> {
    if samples < 2 || !(max_separation > 0.0) {
        return Err("need at least 2 samples and a positive range".into());
    }
    let mut curve = OverlapCurve {
        separation: Vec::with_capacity(samples),
        overlap: Vec::with_capacity(samples),
        fapp_separation: None,
        threshold: DEFAULT_FAPP_THRESHOLD,
    };
    for k in 0..samples {
        let d = max_separation * k as f64 / (samples - 1) as f64;
        let spec = GaussianSpec::new(d, width).map_err(|e| e.to_string())?;
        let o = gaussian_overlap(&spec).map_err(|e| e.to_string())?;
        let v = DifferentiationVerdict::from_overlap(o, DEFAULT_FAPP_THRESHOLD)
            .map_err(|e| e.to_string())?;
        if curve.fapp_separation.is_none() && v.overlap_magnitude <= v.threshold {
            curve.fapp_separation = Some(d);
        }
        curve.separation.push(d);
        curve.overlap.push(o);
    }
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

pub fn fapp_json(dim: usize, trials: usize, seed: u64, fermi: bool) -> Result<String, String> {
    let cls = if fermi { SymmetryClass::Fermion } else { SymmetryClass::Boson };
    let s = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
    let sweep = fapp_sweep(dim, &s, trials, RandomSpec::new(seed, 0), cls).map_err(|e| e.to_string())?;
    serde_json::to_string(&sweep).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn double_well(barrier_height: f64, barrier_half_width: f64) -> Result<String, JsError> {
    double_well_json(barrier_height, barrier_half_width).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gaussian_curve(width: f64, max_separation: f64, samples: usize) -> Result<String, JsError> {
    gaussian_curve_json(width, max_separation, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fapp(dim: usize, trials: usize, seed: u64, fermi: bool) -> Result<String, JsError> {
    fapp_json(dim, trials, seed, fermi).map_err(|e| JsError::new(&e))
}
