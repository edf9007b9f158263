//! End-to-end acceptance run. One line per criterion, non-zero exit if any
//! criterion fails. Oracles here are written independently of the library.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use idpart::counting::{enumerate_scaled, gibbs_check, hydrogen_pair_count, ExactEnergy, LevelSpec};
use idpart::hilbert::{inner, tensor_state, RandomSpec, C64};
use idpart::observables::{equivalence_batch, fapp_sweep};
use idpart::permutation::{
    antisymmetrizer, n_antisymmetrizer, n_symmetrizer, permutator, symmetrizer, verify_axioms,
    SymmetryClass,
};
use idpart::scenarios::{
    gaussian_amplitude, gaussian_overlap, singlet, solve_double_well, spin_down, spin_up,
    GaussianSpec, WellPreset,
};
use idpart::Operator;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn pascal(n: u64, k: u64) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k as usize).copied().unwrap_or(0)
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn c1_permutator_axioms() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_spec = 0.0f64;
    for d in 2..=6 {
        let r = verify_axioms(d, 50, RandomSpec::new(1, 0)).map_err(err)?;
        ensure(r.max_residual() <= 1e-12, || format!("d={d}: residual {:e}", r.max_residual()))?;
        ensure(r.spectrum_deviation <= 1e-10, || {
            format!("d={d}: spectrum deviation {:e}", r.spectrum_deviation)
        })?;
        ensure(r.plus_multiplicity + r.minus_multiplicity == d * d, || {
            format!("d={d}: spectrum not in {{±1}}")
        })?;
        worst = worst.max(r.max_residual());
        worst_spec = worst_spec.max(r.spectrum_deviation);
    }
    Ok(format!("max residual {worst:.1e}, spectrum dev {worst_spec:.1e}"))
}

fn c2_projectors() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=6u64 {
        let s = symmetrizer(d as usize).map_err(err)?;
        let a = antisymmetrizer(d as usize).map_err(err)?;
        let one = Operator::identity((d * d) as usize).map_err(err)?;
        let res = [
            s.add(&a).map_err(err)?.max_deviation(&one).map_err(err)?,
            s.mul(&a).map_err(err)?.max_abs_entry(),
            s.idempotence_residual(),
            a.idempotence_residual(),
        ];
        let m = res.iter().copied().fold(0.0, f64::max);
        ensure(m <= 1e-12, || format!("d={d}: residual {m:e}"))?;
        worst = worst.max(m);
        ensure(s.trace().re.round() as u64 == pascal(d + 1, 2), || format!("tr S, d={d}"))?;
        ensure(a.trace().re.round() as u64 == pascal(d, 2), || format!("tr A, d={d}"))?;
    }
    for d in 1..=4u64 {
        for n in 1..=4u64 {
            let s = n_symmetrizer(d as usize, n as usize).map_err(err)?;
            let a = n_antisymmetrizer(d as usize, n as usize).map_err(err)?;
            ensure(s.trace().re.round() as u64 == pascal(d + n - 1, n), || {
                format!("n-particle tr S, d={d} n={n}")
            })?;
            ensure(a.trace().re.round() as u64 == pascal(d, n), || {
                format!("n-particle tr A, d={d} n={n}")
            })?;
        }
    }
    Ok(format!("max residual {worst:.1e}, traces exact"))
}

fn c3_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut gap = 0.0f64;
    for dim in [2, 4, 8] {
        for cls in [SymmetryClass::Boson, SymmetryClass::Fermion] {
            let b = equivalence_batch(dim, 1000, RandomSpec::new(2024, 0), cls).map_err(err)?;
            ensure(b.failures == 0, || format!("dim {dim} {cls}: {} failures", b.failures))?;
            ensure(b.max_relative_deviation <= 1e-10, || {
                format!("dim {dim} {cls}: rel dev {:e}", b.max_relative_deviation)
            })?;
            ensure(b.max_lambda_gap <= 1e-10, || {
                format!("dim {dim}: boson/fermion gap {:e}", b.max_lambda_gap)
            })?;
            worst = worst.max(b.max_relative_deviation);
            gap = gap.max(b.max_lambda_gap);
        }
    }
    Ok(format!("max rel dev {worst:.1e}, boson/fermion gap {gap:.1e}"))
}

fn c4_fapp() -> Outcome {
    let s = [1e-1, 1e-2, 1e-3, 1e-4];
    let sweep = fapp_sweep(4, &s, 200, RandomSpec::new(3, 0), SymmetryClass::Boson).map_err(err)?;
    ensure((1.9..=2.1).contains(&sweep.slope), || format!("slope {}", sweep.slope))?;
    Ok(format!("slope {:.4}", sweep.slope))
}

fn c5_hydrogen() -> Outcome {
    let h = hydrogen_pair_count(false).map_err(err)?;
    ensure(h.report.w_dist == 4, || format!("W_dist {}", h.report.w_dist))?;
    ensure(h.w_ident() == 2, || format!("W_ident {}", h.w_ident()))?;
    let gap = ((h.report.w_dist / h.w_ident()) as f64).ln();
    ensure(h.report.w_dist % h.w_ident() == 0 && gap == std::f64::consts::LN_2, || {
        format!("gap {gap}")
    })?;
    Ok("W_dist=4, W_ident=2, gap=ln 2".into())
}

fn c6_gibbs() -> Outcome {
    let sets: [&[i64]; 4] = [&[1, 2, 4, 8, 16, 32], &[1, 2, 4], &[1, 3, 9, 27], &[1, 2, 3, 5, 8]];
    let mut instances = 0;
    for set in sets {
        let levels = LevelSpec::from_integers(set).map_err(err)?;
        let top = set.iter().max().unwrap();
        for n in 1..=6u64 {
            for e in 0..=(top * n as i64) {
                let g = gibbs_check(&levels, n as usize, ExactEnergy::integer(e)).map_err(err)?;
                let r = &g.report;
                let distinct = r.w_dist > 0
                    && r.per_occupation.iter().all(|t| t.occupation.counts.iter().all(|&c| c <= 1));
                if !distinct {
                    continue;
                }
                ensure(r.w_dist == factorial(n) * r.w_bose && r.w_bose == r.w_fermi && g.holds, || {
                    format!("{set:?} N={n} E={e}: {}/{}/{}", r.w_dist, r.w_bose, r.w_fermi)
                })?;
                instances += 1;
            }
        }
    }
    let counter = gibbs_check(&LevelSpec::from_integers(&[1, 2, 3]).map_err(err)?, 3, ExactEnergy::integer(6))
        .map_err(err)?;
    ensure(!counter.holds && counter.witness.is_some(), || "counterexample not flagged".into())?;
    ensure(counter.report.w_dist != 6 * counter.report.w_bose, || "counterexample is N!-related".into())?;
    Ok(format!("{instances} multiplicity-free instances exact; counterexample flagged"))
}

/// Orbits of `S_n` on labelled assignments, swept explicitly.
fn orbits(energies: &[i64], n: usize, e: i64) -> u64 {
    let m = energies.len();
    let mut all = Vec::new();
    let mut a = vec![0usize; n];
    loop {
        if a.iter().map(|&i| energies[i]).sum::<i64>() == e {
            all.push(a.clone());
        }
        let mut k = 0;
        while k < n && a[k] + 1 == m {
            a[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        a[k] += 1;
    }
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut count = 0;
    for x in &all {
        if seen.contains(x) {
            continue;
        }
        count += 1;
        for p in &perms {
            seen.insert(p.iter().map(|&k| x[k]).collect::<Vec<_>>());
        }
    }
    count
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn c7_orbits() -> Outcome {
    let sets: [&[i64]; 5] = [&[0, 1], &[1, 2, 3], &[1, 1, 2], &[0, 1, 1, 2], &[1, 2, 4, 8]];
    let mut cases = 0;
    for set in sets {
        for n in 1..=4 {
            for e in 0..=(set.iter().max().unwrap() * n as i64) {
                let r = enumerate_scaled(set, n, e, &|_| true).map_err(err)?;
                let o = orbits(set, n, e);
                ensure(r.w_bose == o, || format!("{set:?} N={n} E={e}: {} vs {o}", r.w_bose))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases exact"))
}

fn simpson_overlap(sep: f64, width: f64) -> f64 {
    let (a, b) = (-15.0 * width, sep + 15.0 * width);
    let n = 30_000;
    let h = (b - a) / n as f64;
    let f = |x: f64| gaussian_amplitude(x, 0.0, width) * gaussian_amplitude(x, sep, width);
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    s * h / 3.0
}

fn c8_gaussian() -> Outcome {
    let width = 1.3;
    let mut worst = 0.0f64;
    for r in [0.0, 1.0, 2.0, 4.0, 8.0] {
        let closed = gaussian_overlap(&GaussianSpec::new(r * width, width).map_err(err)?).map_err(err)?;
        let d = (closed - simpson_overlap(r * width, width)).abs();
        ensure(d <= 1e-8, || format!("D/σ={r}: {d:e}"))?;
        worst = worst.max(d);
    }
    let v = gaussian_overlap(&GaussianSpec::new(4.0, 1.0).map_err(err)?).map_err(err)?;
    ensure((v - (-2.0f64).exp()).abs() <= 1e-8, || format!("D=4σ: {v}"))?;
    Ok(format!("max |closed - quadrature| {worst:.1e}"))
}

fn c9_double_well() -> Outcome {
    let mut splittings = Vec::new();
    for p in WellPreset::ALL {
        let spec = p.spec();
        let w = solve_double_well(&spec).map_err(err)?;
        let r = w.report;
        ensure(r.lr_overlap <= 1e-12, || format!("{}: <L,R> {:e}", p.name(), r.lr_overlap))?;
        match p {
            WellPreset::None => {
                ensure(spec.grid_points >= 2001 && spec.barrier_height == 0.0, || "none preset shape".into())?;
                let k = std::f64::consts::PI / (2.0 * spec.domain_half_width);
                let analytic = 3.0 * k * k;
                let rel = (r.splitting - analytic).abs() / analytic;
                ensure(rel <= 0.02, || format!("box gap rel err {rel:e}"))?;
            }
            WellPreset::High => {
                ensure(r.left_mass >= 0.99, || format!("left_mass {}", r.left_mass))?;
            }
            WellPreset::Medium => {}
        }
        splittings.push(r.splitting);
    }
    ensure(splittings.windows(2).all(|w| w[1] < w[0]), || format!("splittings {splittings:?}"))?;
    Ok(format!(
        "splittings {:.3e} > {:.3e} > {:.3e}",
        splittings[0], splittings[1], splittings[2]
    ))
}

fn c10_spin() -> Outcome {
    let mut worst = 0.0f64;
    for t in 0..100u64 {
        let mut s = RandomSpec::new(10, t).sampler();
        let dim = 2 + (t as usize % 5);
        let (psi, phi) = (s.state(dim).map_err(err)?, s.state(dim).map_err(err)?);
        let ov = inner(&psi, &phi).map_err(err)?.norm();
        ensure(ov > 1e-3, || format!("trial {t}: pair unexpectedly orthogonal"))?;
        let z = inner(
            &tensor_state(&psi, &spin_up()).map_err(err)?,
            &tensor_state(&phi, &spin_down()).map_err(err)?,
        )
        .map_err(err)?
        .norm();
        ensure(z <= 1e-15, || format!("trial {t}: {z:e}"))?;
        worst = worst.max(z);
    }
    let sg = singlet();
    let pi = permutator(2).map_err(err)?;
    let d = pi
        .apply(&sg.vector)
        .map_err(err)?
        .max_deviation(&sg.vector.scale(C64::new(-1.0, 0.0)))
        .map_err(err)?;
    ensure(d <= 1e-12, || format!("singlet: {d:e}"))?;
    Ok(format!("max spin overlap {worst:.1e}, singlet dev {d:.1e}"))
}

const BIN: &str = env!("CARGO_BIN_EXE_idpart");
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
const SCHEMA: &str = include_str!("../schemas/report.schema.json");

fn run(args: &[&str]) -> Result<(i32, Option<Value>), String> {
    let out = Command::new(BIN).args(args).output().map_err(err)?;
    let code = out.status.code().ok_or("killed by signal")?;
    let text = String::from_utf8(out.stdout).map_err(err)?;
    let json = if text.trim().is_empty() {
        None
    } else {
        Some(serde_json::from_str(&text).map_err(|e| format!("{args:?}: bad JSON: {e}"))?)
    };
    Ok((code, json))
}

fn c11_cli() -> Outcome {
    let schema: Value = serde_json::from_str(SCHEMA).map_err(err)?;
    let validator = jsonschema::validator_for(&schema).map_err(err)?;
    let three = format!("{DATA}/three.json");
    let distinct = format!("{DATA}/distinct.json");
    let passing: Vec<Vec<&str>> = vec![
        vec!["axioms", "--dim", "3", "--trials", "50", "--seed", "7"],
        vec!["equivalence", "--dim", "4", "--trials", "200", "--seed", "1", "--stats", "fermi"],
        vec!["fapp", "--dim", "4", "--overlaps", "1e-1,1e-2,1e-3,1e-4", "--trials", "200", "--seed", "3"],
        vec!["count", "--demo", "hydrogen"],
        vec!["count", "--levels", &three, "--particles", "3", "--energy", "6"],
        vec!["gaussian", "--sep", "4", "--width", "1"],
        vec!["doublewell", "--preset", "high"],
        vec!["doublewell", "--preset", "none"],
        vec!["entropy", "--levels", &distinct, "--particles", "3", "--energy", "7", "--extensivity"],
    ];
    let failing: Vec<Vec<&str>> = vec![vec![
        "fapp", "--dim", "4", "--overlaps", "0.5,0.45,0.4", "--trials", "20", "--seed", "3",
    ]];
    let usage: Vec<Vec<&str>> = vec![
        vec!["axioms", "--dim", "1"],
        vec!["fapp", "--dim", "4", "--overlaps", "1e-1,1e-2"],
        vec!["count", "--levels", &three, "--particles", "9", "--energy", "6"],
        vec!["count", "--levels", "/nonexistent.json", "--particles", "2", "--energy", "1"],
        vec!["gaussian", "--sep", "1", "--width", "0"],
        vec!["nosuchcommand"],
    ];
    let mut reports = 0;
    for (args, want) in passing
        .iter()
        .map(|a| (a, 0))
        .chain(failing.iter().map(|a| (a, 1)))
    {
        let (code, first) = run(args)?;
        let (_, second) = run(args)?;
        ensure(code == want, || format!("{args:?}: exit {code}, want {want}"))?;
        let (first, second) = (first.ok_or("no report")?, second.ok_or("no report")?);
        ensure(first["results"] == second["results"], || format!("{args:?}: results differ"))?;
        let errors: Vec<String> = validator.iter_errors(&first).map(|e| e.to_string()).collect();
        ensure(errors.is_empty(), || format!("{args:?}: schema: {}", errors.join("; ")))?;
        ensure(first["pass"] == Value::Bool(want == 0), || format!("{args:?}: pass flag"))?;
        reports += 1;
    }
    for args in &usage {
        let (code, out) = run(args)?;
        ensure(code == 2 && out.is_none(), || format!("{args:?}: exit {code}"))?;
    }
    Ok(format!("{reports} reports deterministic and schema-valid, {} usage errors exit 2", usage.len()))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "permutator axioms", limit: Some(Duration::from_secs(5)), run: c1_permutator_axioms },
        Criterion { id: 2, name: "projector suite", limit: Some(Duration::from_secs(10)), run: c2_projectors },
        Criterion { id: 3, name: "equivalence theorem", limit: Some(Duration::from_secs(30)), run: c3_equivalence },
        Criterion { id: 4, name: "FAPP overlap scaling", limit: None, run: c4_fapp },
        Criterion { id: 5, name: "hydrogen-pair counting", limit: Some(Duration::from_secs(1)), run: c5_hydrogen },
        Criterion { id: 6, name: "Gibbs N! factor", limit: None, run: c6_gibbs },
        Criterion { id: 7, name: "orbit consistency", limit: None, run: c7_orbits },
        Criterion { id: 8, name: "Gaussian overlap", limit: None, run: c8_gaussian },
        Criterion { id: 9, name: "double well", limit: None, run: c9_double_well },
        Criterion { id: 10, name: "spin differentiation", limit: None, run: c10_spin },
        Criterion { id: 11, name: "CLI determinism and contract", limit: None, run: c11_cli },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("runtime {elapsed:.2?} exceeds {limit:?}"));
            }
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.as_str())
            }
        };
        println!("[{tag}] {:>2} {:<30} {:>9.3?}  {detail}", c.id, c.name, elapsed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
