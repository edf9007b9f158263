//! Exact microstate counting for `N` particles on discrete levels at fixed
//! total energy: distinguishable, bosonic and fermionic.
//!
//! Everything is enumerated over occupation vectors in exact `u64`
//! arithmetic; overflow is an error, never a wrap.

mod levels;

pub use levels::{ExactEnergy, LevelSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PARTICLES: usize = 8;
pub const MAX_LEVELS: usize = 12;

/// Occupation numbers `(n_1, …, n_M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationVector {
    pub counts: Vec<u32>,
}

impl OccupationVector {
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_fermionic(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// `N! / Π n_i!`, computed as a product of binomials.
    pub fn multinomial(&self) -> Result<u64> {
        let mut acc: u64 = 1;
        let mut running: u64 = 0;
        for &c in &self.counts {
            running += u64::from(c);
            acc = acc
                .checked_mul(binomial(running, u64::from(c))?)
                .ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(Error::Overflow)?
            / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow)
}

pub fn factorial(n: u64) -> Result<u64> {
    (1..=n).try_fold(1u64, |acc, k| acc.checked_mul(k).ok_or(Error::Overflow))
}

/// `ln n!` from the exact factorial.
pub fn ln_factorial(n: u64) -> Result<f64> {
    Ok((factorial(n)? as f64).ln())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupationTerm {
    pub occupation: OccupationVector,
    pub multinomial: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// Total energy in units of `1 / energy_scale`.
    #[serde(rename = "E")]
    pub energy: i64,
    pub energy_scale: i128,
    #[serde(rename = "W_dist")]
    pub w_dist: u64,
    #[serde(rename = "W_bose")]
    pub w_bose: u64,
    #[serde(rename = "W_fermi")]
    pub w_fermi: u64,
    pub per_occupation: Vec<OccupationTerm>,
}

fn check_scale(n: usize, m: usize) -> Result<()> {
    if n == 0 || n > MAX_PARTICLES {
        return Err(Error::Budget(format!(
            "particle number {n} outside 1..={MAX_PARTICLES}"
        )));
    }
    if m == 0 || m > MAX_LEVELS {
        return Err(Error::Budget(format!(
            "level count {m} outside 1..={MAX_LEVELS}"
        )));
    }
    Ok(())
}

/// Depth-first walk over all occupation vectors with `Σ n_i = n` and
/// `Σ n_i ε_i = energy`.
fn walk(
    energies: &[i64],
    idx: usize,
    remaining: u32,
    remaining_energy: i128,
    counts: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if idx + 1 == energies.len() {
        if i128::from(remaining) * i128::from(energies[idx]) == remaining_energy {
            counts.push(remaining);
            let r = visit(counts);
            counts.pop();
            return r;
        }
        return Ok(());
    }
    for c in 0..=remaining {
        counts.push(c);
        let e = i128::from(c) * i128::from(energies[idx]);
        walk(
            energies,
            idx + 1,
            remaining - c,
            remaining_energy - e,
            counts,
            visit,
        )?;
        counts.pop();
    }
    Ok(())
}

/// Counts over integer level energies, keeping only occupations accepted by
/// `admissible`.
pub fn enumerate_scaled(
    energies: &[i64],
    n: usize,
    energy: i64,
    admissible: &dyn Fn(&[u32]) -> bool,
) -> Result<CountReport> {
    check_scale(n, energies.len())?;
    let mut per_occupation = Vec::new();
    let mut w_dist: u64 = 0;
    let mut w_bose: u64 = 0;
    let mut w_fermi: u64 = 0;
    let mut counts = Vec::with_capacity(energies.len());
    walk(
        energies,
        0,
        n as u32,
        i128::from(energy),
        &mut counts,
        &mut |occ| {
            if !admissible(occ) {
                return Ok(());
            }
            let occupation = OccupationVector {
                counts: occ.to_vec(),
            };
            let multinomial = occupation.multinomial()?;
            w_dist = w_dist.checked_add(multinomial).ok_or(Error::Overflow)?;
            w_bose += 1;
            if occupation.is_fermionic() {
                w_fermi += 1;
            }
            per_occupation.push(OccupationTerm {
                occupation,
                multinomial,
            });
            Ok(())
        },
    )?;
    Ok(CountReport {
        n,
        energy,
        energy_scale: 1,
        w_dist,
        w_bose,
        w_fermi,
        per_occupation,
    })
}

pub fn enumerate(levels: &LevelSpec, n: usize, energy: ExactEnergy) -> Result<CountReport> {
    check_scale(n, levels.len())?;
    let (scaled, target, scale) = levels.to_scaled(energy)?;
    let mut report = enumerate_scaled(&scaled, n, target, &|_| true)?;
    report.energy_scale = scale;
    Ok(report)
}

/// Two atoms, each described by a location (`ψ` or `φ`) and an internal
/// level (`n` or `m`). Only configurations with one atom per location are
/// admissible; the total energy fixes the internal pair `{n, m}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HydrogenPair {
    pub labels: Vec<String>,
    pub report: CountReport,
}

impl HydrogenPair {
    /// Identical-particle (bosonic) count.
    pub fn w_ident(&self) -> u64 {
        self.report.w_bose
    }
}

pub fn hydrogen_pair_count(n_equal_m: bool) -> Result<HydrogenPair> {
    // (location, internal energy); internal energies ε_n = 1, ε_m = 2
    let states: Vec<(usize, i64, &str)> = if n_equal_m {
        vec![(0, 1, "(psi,n)"), (1, 1, "(phi,n)")]
    } else {
        vec![
            (0, 1, "(psi,n)"),
            (0, 2, "(psi,m)"),
            (1, 1, "(phi,n)"),
            (1, 2, "(phi,m)"),
        ]
    };
    let energies: Vec<i64> = states.iter().map(|s| s.1).collect();
    let location: Vec<usize> = states.iter().map(|s| s.0).collect();
    let total = if n_equal_m { 2 } else { 3 };
    let one_per_location = |occ: &[u32]| {
        let mut per = [0u32; 2];
        for (k, &c) in occ.iter().enumerate() {
            per[location[k]] += c;
        }
        per == [1, 1]
    };
    let report = enumerate_scaled(&energies, 2, total, &one_per_location)?;
    Ok(HydrogenPair {
        labels: states.iter().map(|s| s.2.to_string()).collect(),
        report,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GibbsCheck {
    pub holds: bool,
    pub n_factorial: u64,
    /// First admissible occupation with a multiply occupied level.
    pub witness: Option<OccupationVector>,
    pub report: CountReport,
}

/// Whether `W_dist = N! W_bose` with every admissible occupation
/// multiplicity-free.
pub fn gibbs_check(levels: &LevelSpec, n: usize, energy: ExactEnergy) -> Result<GibbsCheck> {
    let report = enumerate(levels, n, energy)?;
    let n_factorial = factorial(n as u64)?;
    let witness = report
        .per_occupation
        .iter()
        .find(|t| !t.occupation.is_fermionic())
        .map(|t| t.occupation.clone());
    let related = n_factorial
        .checked_mul(report.w_bose)
        .is_some_and(|v| v == report.w_dist);
    Ok(GibbsCheck {
        holds: witness.is_none() && related,
        n_factorial,
        witness,
        report,
    })
}

fn ln_count(w: u64) -> Option<f64> {
    (w > 0).then(|| (w as f64).ln())
}

/// `ln(num / den)`, taking the exact quotient when it divides.
fn ln_ratio(num: u64, den: u64) -> Option<f64> {
    if num == 0 || den == 0 {
        return None;
    }
    if num % den == 0 {
        Some(((num / den) as f64).ln())
    } else {
        Some((num as f64).ln() - (den as f64).ln())
    }
}

/// Boltzmann entropies `ln W` with `k_B = 1`. Absent values mean `W = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "ln_W_dist")]
    pub ln_w_dist: Option<f64>,
    /// Bosonic identical-particle count.
    #[serde(rename = "ln_W_ident")]
    pub ln_w_ident: Option<f64>,
    #[serde(rename = "ln_W_fermi")]
    pub ln_w_fermi: Option<f64>,
    /// `ln N!`.
    pub gibbs_correction: f64,
    /// `ln W_dist − ln N!`.
    pub corrected: Option<f64>,
}

pub fn entropy_from_counts(n: usize, w_dist: u64, w_bose: u64, w_fermi: u64) -> Result<EntropyReport> {
    let nf = factorial(n as u64)?;
    Ok(EntropyReport {
        n,
        ln_w_dist: ln_count(w_dist),
        ln_w_ident: ln_count(w_bose),
        ln_w_fermi: ln_count(w_fermi),
        gibbs_correction: (nf as f64).ln(),
        corrected: ln_ratio(w_dist, nf),
    })
}

pub fn entropy_report(levels: &LevelSpec, n: usize, energy: ExactEnergy) -> Result<EntropyReport> {
    let r = enumerate(levels, n, energy)?;
    entropy_from_counts(n, r.w_dist, r.w_bose, r.w_fermi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(rename = "W_dist")]
    pub w_dist: u64,
    #[serde(rename = "W_bose")]
    pub w_bose: u64,
    #[serde(rename = "W_fermi")]
    pub w_fermi: u64,
}

impl From<&CountReport> for Counts {
    fn from(r: &CountReport) -> Self {
        Self {
            w_dist: r.w_dist,
            w_bose: r.w_bose,
            w_fermi: r.w_fermi,
        }
    }
}

/// Two copies of a system on disjoint level sets, `N` particles and
/// energy `E` confined to each copy, compared with the single copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensivityReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub single: Counts,
    /// Combined `2N`-particle system with per-copy confinement.
    pub combined: Counts,
    /// Combined system at total energy `2E` with particles free to move
    /// between copies.
    pub combined_unconfined: Counts,
    /// `ln W_bose(combined) − 2 ln W_bose(single)`.
    pub ident_gap: Option<f64>,
    pub fermi_gap: Option<f64>,
    /// `ln W_dist(combined) − 2 ln W_dist(single)`.
    pub dist_gap_uncorrected: Option<f64>,
    /// Same with `ln (2N)!` and `2 ln N!` removed.
    pub dist_gap_corrected: Option<f64>,
    /// `ln C(2N, N)`: ways to split labelled particles between the copies.
    pub partition_term: f64,
}

pub fn extensivity_experiment(
    levels: &LevelSpec,
    n: usize,
    energy: ExactEnergy,
) -> Result<ExtensivityReport> {
    let m = levels.len();
    check_scale(n, m)?;
    check_scale(2 * n, 2 * m)?;
    let (scaled, target, _) = levels.to_scaled(energy)?;
    let single = enumerate_scaled(&scaled, n, target, &|_| true)?;

    let doubled: Vec<i64> = scaled.iter().chain(scaled.iter()).copied().collect();
    let total = target.checked_mul(2).ok_or(Error::Overflow)?;
    let per_copy = |occ: &[u32], copy: usize| -> (u32, i128) {
        let part = &occ[copy * m..(copy + 1) * m];
        let count = part.iter().sum();
        let e = part
            .iter()
            .zip(&scaled)
            .map(|(&c, &e)| i128::from(c) * i128::from(e))
            .sum();
        (count, e)
    };
    let confined = |occ: &[u32]| {
        (0..2).all(|c| per_copy(occ, c) == (n as u32, i128::from(target)))
    };
    let combined = enumerate_scaled(&doubled, 2 * n, total, &confined)?;
    let unconfined = enumerate_scaled(&doubled, 2 * n, total, &|_| true)?;

    let gap = |c: u64, s: u64| -> Option<f64> {
        // c = s² in the confined model, so compare exactly when possible
        let s2 = s.checked_mul(s)?;
        ln_ratio(c, s2)
    };
    let nf = factorial(n as u64)?;
    let n2f = factorial(2 * n as u64)?;
    let dist_gap_corrected = match (ln_ratio(combined.w_dist, n2f), ln_ratio(single.w_dist, nf)) {
        (Some(a), Some(b)) => Some(a - 2.0 * b),
        _ => None,
    };
    Ok(ExtensivityReport {
        n,
        single: (&single).into(),
        combined: (&combined).into(),
        combined_unconfined: (&unconfined).into(),
        ident_gap: gap(combined.w_bose, single.w_bose),
        fermi_gap: gap(combined.w_fermi, single.w_fermi),
        dist_gap_uncorrected: gap(combined.w_dist, single.w_dist),
        dist_gap_corrected,
        partition_term: (binomial(2 * n as u64, n as u64)? as f64).ln(),
    })
}
