use std::path::Path;

use idpart::counting::{
    binomial, entropy_from_counts, extensivity_experiment, gibbs_check, hydrogen_pair_count,
    CountReport, ExactEnergy, LevelSpec,
};
use idpart::hilbert::RandomSpec;
use idpart::observables::{equivalence_batch, fapp_sweep, DifferentiationVerdict, EQUIVALENCE_TOL};
use idpart::permutation::{verify_axioms, SymmetryClass, SPECTRUM_TOL};
use idpart::scenarios::{
    box_first_gap, gaussian_overlap, overlap_quadrature, solve_double_well, GaussianSpec,
    WellPreset, WellSpec, EIGEN_RESIDUAL_TOL,
};
use idpart::hilbert::TOL;
use idpart::Error;
use serde_json::{json, Value};

use crate::report::{count, Check, Envelope};

/// `Err` carries a usage/input message (exit 2).
pub type Outcome = Result<Envelope, String>;

type Body = idpart::Result<(Value, Vec<Check>)>;

fn is_runtime(e: &Error) -> bool {
    matches!(e, Error::Overflow | Error::Eigensolver(_) | Error::DegenerateFit(_))
}

fn finish(command: &'static str, params: Value, body: Body) -> Outcome {
    match body {
        Ok((results, checks)) => Ok(Envelope::new(command, params, results, checks)),
        Err(e) if is_runtime(&e) => Ok(Envelope::new(
            command,
            params,
            json!({ "error": e.to_string() }),
            vec![Check::holds("completed", false)],
        )),
        Err(e) => Err(e.to_string()),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn axioms(dim: usize, trials: usize, seed: u64) -> Outcome {
    let params = json!({ "dim": dim, "trials": trials, "seed": seed });
    let body = (|| {
        let r = verify_axioms(dim, trials, RandomSpec::new(seed, 0))?;
        let plus = binomial(dim as u64 + 1, 2)?;
        let minus = binomial(dim as u64, 2)?;
        let mut checks: Vec<Check> = r
            .residuals
            .iter()
            .map(|(k, &v)| Check::at_most(k, v, TOL))
            .collect();
        checks.push(Check::at_most("spectrum_deviation", r.spectrum_deviation, SPECTRUM_TOL));
        checks.push(Check::at_most("eigen_residual", r.eigen_residual, SPECTRUM_TOL));
        checks.push(Check::equals("plus_multiplicity", r.plus_multiplicity as u64, plus));
        checks.push(Check::equals("minus_multiplicity", r.minus_multiplicity as u64, minus));
        Ok((to_value(&r), checks))
    })();
    finish("axioms", params, body)
}

pub fn equivalence(dim: usize, trials: usize, seed: u64, cls: SymmetryClass) -> Outcome {
    let params = json!({ "dim": dim, "trials": trials, "seed": seed, "stats": cls.to_string() });
    let body = (|| {
        let b = equivalence_batch(dim, trials, RandomSpec::new(seed, 0), cls)?;
        let checks = vec![
            Check::at_most("relative_deviation", b.max_relative_deviation, EQUIVALENCE_TOL),
            Check::at_most("lambda_independence", b.max_lambda_gap, EQUIVALENCE_TOL),
            Check::at_most("constituent_overlap", b.max_overlap, TOL),
            Check::equals("failed_trials", b.failures as u64, 0),
        ];
        Ok((to_value(&b), checks))
    })();
    finish("equivalence", params, body)
}

pub fn fapp(dim: usize, overlaps: &[f64], trials: usize, seed: u64, cls: SymmetryClass) -> Outcome {
    if let Some(bad) = overlaps.iter().find(|s| !(**s > 0.0 && **s <= 0.5)) {
        return Err(format!("overlap {bad} outside (0, 0.5]"));
    }
    let mut distinct = overlaps.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(format!(
            "need at least 3 distinct overlap values, got {}",
            distinct.len()
        ));
    }
    let params = json!({
        "dim": dim, "overlaps": overlaps, "trials": trials, "seed": seed,
        "stats": cls.to_string(),
    });
    let body = (|| {
        let sweep = fapp_sweep(dim, overlaps, trials, RandomSpec::new(seed, 0), cls)?;
        let checks = vec![Check::within("slope", sweep.slope, 1.9, 2.1)];
        Ok((to_value(&sweep), checks))
    })();
    finish("fapp", params, body)
}

fn read_levels(path: &Path) -> Result<LevelSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    LevelSpec::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_energy(text: &str) -> Result<ExactEnergy, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

fn count_results(r: &CountReport) -> Value {
    json!({
        "N": r.n,
        "E": r.energy,
        "energy_scale": i64::try_from(r.energy_scale).map_or_else(|_| json!(r.energy_scale.to_string()), |v| json!(v)),
        "W_dist": count(r.w_dist),
        "W_bose": count(r.w_bose),
        "W_fermi": count(r.w_fermi),
        "per_occupation": r.per_occupation.iter().map(|t| json!({
            "occupation": t.occupation,
            "multinomial": count(t.multinomial),
        })).collect::<Vec<_>>(),
    })
}

fn count_consistency(r: &CountReport) -> Vec<Check> {
    let sum: u128 = r.per_occupation.iter().map(|t| u128::from(t.multinomial)).sum();
    vec![
        Check::holds("multinomials_sum_to_W_dist", sum == u128::from(r.w_dist)),
        Check::holds(
            "W_dist >= W_bose >= W_fermi",
            r.w_dist >= r.w_bose && r.w_bose >= r.w_fermi,
        ),
    ]
}

fn level_params(path: &Path, levels: &LevelSpec, particles: usize, energy: &ExactEnergy) -> Value {
    json!({
        "levels": path.display().to_string(),
        "energies": levels.energies,
        "labels": levels.labels,
        "particles": particles,
        "energy": energy,
    })
}

pub fn count_levels(path: &Path, particles: usize, energy: &str) -> Outcome {
    let levels = read_levels(path)?;
    let energy = parse_energy(energy)?;
    let params = level_params(path, &levels, particles, &energy);
    let body = (|| {
        let g = gibbs_check(&levels, particles, energy)?;
        let mut results = count_results(&g.report);
        results["gibbs"] = json!({
            "holds": g.holds,
            "n_factorial": count(g.n_factorial),
            "witness": g.witness,
        });
        Ok((results, count_consistency(&g.report)))
    })();
    finish("count", params, body)
}

pub fn hydrogen(equal_internal: bool) -> Outcome {
    let params = json!({ "demo": "hydrogen", "equal_internal": equal_internal });
    let body = (|| {
        let h = hydrogen_pair_count(equal_internal)?;
        let r = &h.report;
        let mut results = count_results(r);
        results["labels"] = json!(h.labels);
        results["W_ident"] = count(h.w_ident());
        let gap = if r.w_dist % h.w_ident() == 0 {
            ((r.w_dist / h.w_ident()) as f64).ln()
        } else {
            (r.w_dist as f64).ln() - (h.w_ident() as f64).ln()
        };
        results["entropy_gap"] = json!(gap);
        let (dist, ident) = if equal_internal { (2, 1) } else { (4, 2) };
        let mut checks = vec![
            Check::equals("W_dist", r.w_dist, dist),
            Check::equals("W_ident", h.w_ident(), ident),
            Check::at_most("entropy_gap_minus_ln2", (gap - std::f64::consts::LN_2).abs(), 0.0),
        ];
        checks.extend(count_consistency(r));
        Ok((results, checks))
    })();
    finish("count", params, body)
}

pub fn gaussian(sep: f64, width: f64, threshold: f64) -> Outcome {
    let spec = GaussianSpec::new(sep, width).map_err(|e| e.to_string())?;
    let params = json!({ "sep": sep, "width": width, "threshold": threshold });
    let body = (|| {
        let closed = gaussian_overlap(&spec)?;
        let quad = overlap_quadrature(&spec, 20_000)?;
        let verdict = DifferentiationVerdict::from_overlap(closed, threshold)?;
        let results = json!({
            "separation": sep,
            "width": width,
            "overlap": closed,
            "overlap_quadrature": quad,
            "verdict": verdict,
        });
        Ok((results, vec![Check::at_most("quadrature_agreement", (closed - quad).abs(), 1e-8)]))
    })();
    finish("gaussian", params, body)
}

fn double_well(spec: WellSpec, preset: Option<WellPreset>, params: Value) -> Outcome {
    spec.validate().map_err(|e| e.to_string())?;
    let body = (|| {
        let w = solve_double_well(&spec)?;
        let r = w.report;
        let mut checks = vec![
            Check::at_most("residual_even", r.residual_even, EIGEN_RESIDUAL_TOL),
            Check::at_most("residual_odd", r.residual_odd, EIGEN_RESIDUAL_TOL),
            Check::at_most("lr_overlap", r.lr_overlap, TOL),
            Check::at_most("even_odd_overlap", r.even_odd_overlap, TOL),
            // eigenvalue errors are bounded by the residuals
            Check::at_least(
                "doublet_resolved",
                r.splitting,
                r.residual_even + r.residual_odd,
            ),
        ];
        let mut results = json!({ "report": r });
        if spec.barrier_height == 0.0 {
            let analytic = box_first_gap(spec.domain_half_width);
            results["box_gap_analytic"] = json!(analytic);
            checks.push(Check::at_most(
                "box_gap_relative_error",
                (r.splitting - analytic).abs() / analytic,
                0.02,
            ));
        }
        if preset == Some(WellPreset::High) {
            checks.push(Check::at_least("left_mass", r.left_mass, 0.99));
            checks.push(Check::at_most(
                "splitting_over_next_gap",
                r.splitting / (r.e_next - r.e_even),
                1e-3,
            ));
        }
        Ok((results, checks))
    })();
    finish("doublewell", params, body)
}

pub fn double_well_preset(name: &str) -> Outcome {
    let preset: WellPreset = name.parse().map_err(|e: Error| e.to_string())?;
    let spec = preset.spec();
    double_well(spec, Some(preset), json!({ "preset": name, "spec": spec }))
}

pub fn double_well_config(path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let spec = WellSpec::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    double_well(
        spec,
        None,
        json!({ "config": path.display().to_string(), "spec": spec }),
    )
}

fn gap_check(name: &str, gap: Option<f64>, want: f64) -> Option<Check> {
    gap.map(|g| Check::at_most(name, (g - want).abs(), 1e-12))
}

pub fn entropy(path: &Path, particles: usize, energy: &str, extensivity: bool) -> Outcome {
    let levels = read_levels(path)?;
    let energy = parse_energy(energy)?;
    let mut params = level_params(path, &levels, particles, &energy);
    params["extensivity"] = json!(extensivity);
    let body = (|| {
        let g = gibbs_check(&levels, particles, energy)?;
        let r = &g.report;
        let s = entropy_from_counts(particles, r.w_dist, r.w_bose, r.w_fermi)?;
        let mut results = json!({
            "W_dist": count(r.w_dist),
            "W_bose": count(r.w_bose),
            "W_fermi": count(r.w_fermi),
            "gibbs_holds": g.holds,
            "entropy": s,
        });
        let mut checks = count_consistency(r);
        if g.holds {
            if let (Some(c), Some(i)) = (s.corrected, s.ln_w_ident) {
                checks.push(Check::at_most("corrected_minus_ln_W_ident", (c - i).abs(), 1e-12));
            }
        }
        if extensivity {
            let x = extensivity_experiment(&levels, particles, energy)?;
            checks.extend(gap_check("ident_gap", x.ident_gap, 0.0));
            checks.extend(gap_check("dist_gap_corrected", x.dist_gap_corrected, 0.0));
            checks.extend(gap_check(
                "dist_gap_uncorrected_minus_partition",
                x.dist_gap_uncorrected,
                x.partition_term,
            ));
            results["extensivity"] = to_value(&x);
        }
        Ok((results, checks))
    })();
    finish("entropy", params, body)
}
