// Copyright 2026 The weft developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Robust phase estimation on top of the fabric.
//!
//! Round `m` measures the time signal `Z_m = ⟨ψ|U^{2^m}|ψ⟩` of the Trotter
//! step unitary `U = e^{iδH̃(δ)}`. The phase-doubling update keeps a running
//! estimate `θ` of the per-step phase: among the candidates
//! `(arg Z_m + 2πj)/2^m` it picks the one closest to the previous estimate,
//! which is unique because candidates are `2π/2^m` apart. A noiseless
//! eigenphase signal is recovered to within `π/(δ·2^{M+1})` after round `M`.
//!
//! The estimated per-step energy `θ/δ` of the effective Hamiltonian is
//! compared against a reference energy to give the Trotter error, and a
//! log-log least-squares fit of error against step size yields the power
//! law `ε(δ) = C·δ^a`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fabric::{Fabric, FabricOptions};
use crate::formulas::evolution_stream;
use crate::hamiltonian::HamiltonianSplit;
use crate::rng::CounterRng;
use crate::state::StateSpec;

/// Default |Z| gate below which a round's phase is considered meaningless.
pub const DEFAULT_NOISE_FLOOR: f64 = 0.05;

/// One RPE data point.
#[derive(Clone, Debug)]
pub struct SignalRecord {
    pub round: u32,
    pub delta: f64,
    pub z: Complex64,
    /// qDRIFT samples per stage used for this round.
    pub samples_per_stage: u64,
    /// Independent circuit runs averaged into `z`.
    pub repeats: u32,
    pub rotations: u64,
    pub exchanges: u64,
    pub wall_ms: f64,
}

/// Everything needed to evaluate signals for one `(split, ψ0, δ)` cell.
#[derive(Clone, Debug)]
pub struct SignalConfig<'a> {
    pub split: &'a HamiltonianSplit,
    pub initial: &'a StateSpec,
    pub delta: f64,
    /// qDRIFT samples per stage (`r`); ignored when the split has no
    /// randomized part.
    pub samples_per_stage: u64,
    /// Independent circuit runs to average (fresh samples each).
    pub repeats: u32,
    pub seed: u64,
    /// Fabric partition exponent (2^m workers).
    pub workers_exponent: u32,
    pub parallel: bool,
}

/// Compute `Z_round` by running the evolution stream on a fresh fabric once
/// per repeat and averaging the overlaps.
/// Rounds beyond this would ask for more than 2^40 Trotter steps.
pub const MAX_ROUND: u32 = 40;

pub fn signal(cfg: &SignalConfig<'_>, round: u32) -> Result<SignalRecord> {
    if cfg.repeats < 1 {
        return Err(Error::NonPositive("repeats", 0.0));
    }
    if round > MAX_ROUND {
        return Err(Error::RoundRange(round, MAX_ROUND));
    }
    let start = Instant::now();
    let steps = 1u64 << round;
    let n = cfg.split.n_qubits();
    let mut z_sum = Complex64::new(0.0, 0.0);
    let mut rotations = 0;
    let mut exchanges = 0;
    let base = CounterRng::new(cfg.seed);
    for repeat in 0..cfg.repeats {
        let rng = base.derive(repeat as u64);
        let stream = evolution_stream(cfg.split, cfg.delta, steps, cfg.samples_per_stage, &rng)?;
        let mut fabric = Fabric::with_options(
            n,
            cfg.workers_exponent,
            cfg.initial,
            FabricOptions {
                parallel: cfg.parallel,
                ..FabricOptions::default()
            },
        )?;
        fabric.apply_grouped(&stream.into_groups(cfg.workers_exponent as usize))?;
        let norm2 = fabric.global_norm2();
        if (norm2 - 1.0).abs() > 1e-9 {
            return Err(Error::NumericalGuard(format!(
                "norm² drifted to {norm2} after {} rotations",
                fabric.counters().rotations
            )));
        }
        z_sum += fabric.global_inner_product(cfg.initial)?;
        rotations += fabric.counters().rotations;
        exchanges += fabric.counters().exchanges;
    }
    let mut z = z_sum / cfg.repeats as f64;
    // The identity offset is not part of the rotation stream; fold its
    // exact phase back in so Z tracks e^{iδH·2^m} including the offset.
    let offset_phase = cfg.split.energy_offset() * cfg.delta * steps as f64;
    z *= Complex64::new(offset_phase.cos(), offset_phase.sin());
    if z.norm() > 1.0 + 1e-9 {
        return Err(Error::NumericalGuard(format!("|Z| = {} exceeds 1", z.norm())));
    }
    Ok(SignalRecord {
        round,
        delta: cfg.delta,
        z,
        samples_per_stage: cfg.samples_per_stage,
        repeats: cfg.repeats,
        rotations,
        exchanges,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Result of the phase-doubling reconstruction.
#[derive(Clone, Copy, Debug)]
pub struct EnergyEstimate {
    /// Estimated energy of the effective Hamiltonian, in `(−π/δ, π/δ]`.
    pub energy: f64,
    /// Rounds actually consumed (`M+1` when nothing was rejected).
    pub rounds_used: u32,
    /// True when a round fell below the noise floor and later rounds were
    /// discarded.
    pub truncated: bool,
}

/// Iterative RPE phase reconstruction from rounds `0..=M` with the default
/// noise floor.
pub fn rpe_estimate(records: &[SignalRecord], delta: f64) -> Result<EnergyEstimate> {
    rpe_estimate_with_floor(records, delta, DEFAULT_NOISE_FLOOR)
}

pub fn rpe_estimate_with_floor(
    records: &[SignalRecord],
    delta: f64,
    noise_floor: f64,
) -> Result<EnergyEstimate> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    if delta <= 0.0 {
        return Err(Error::NonPositive("delta", delta));
    }
    for (expect, rec) in records.iter().enumerate() {
        if rec.round != expect as u32 {
            return Err(Error::DimensionMismatch(format!(
                "rounds must be contiguous from 0; found round {} at position {expect}",
                rec.round
            )));
        }
    }
    let mut theta = 0.0;
    let mut used = 0u32;
    let mut truncated = false;
    for rec in records {
        if rec.z.norm() < noise_floor {
            truncated = true;
            break;
        }
        let phase = rec.z.arg();
        if rec.round == 0 {
            theta = phase;
        } else {
            let scale = (1u64 << rec.round) as f64;
            // Pick the unwinding that lands closest to the running estimate.
            let wraps = ((theta * scale - phase) / (2.0 * PI)).round();
            theta = (phase + 2.0 * PI * wraps) / scale;
        }
        used += 1;
    }
    if used == 0 {
        return Err(Error::SignalBelowFloor {
            round: 0,
            amplitude: records[0].z.norm(),
            floor: noise_floor,
        });
    }
    Ok(EnergyEstimate {
        energy: theta / delta,
        rounds_used: used,
        truncated,
    })
}

/// Half-width of the RPE confidence bracket after round `M`:
/// `π / (δ · 2^{M+1})`.
pub fn resolution(delta: f64, max_round: u32) -> f64 {
    PI / (delta * 2f64.powi(max_round as i32 + 1))
}

/// ε = |Ẽ − E_ref|.
pub fn trotter_error(estimate: f64, reference: f64) -> f64 {
    (estimate - reference).abs()
}

/// True when the last two estimates agree to `tol` relative.
pub fn convergence_check(estimates: &[f64], tol: f64) -> bool {
    match estimates {
        [.., prev, last] => {
            let scale = last.abs().max(f64::MIN_POSITIVE);
            (last - prev).abs() <= tol * scale
        }
        _ => false,
    }
}

/// Power-law fit `ε = C·δ^a`.
#[derive(Clone, Debug)]
pub struct TrotterFit {
    /// Prefactor C of the fitted law.
    pub prefactor: f64,
    /// Fitted exponent a.
    pub exponent: f64,
    /// RMS residual of the fit in log space.
    pub residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Least-squares line in `(log δ, log ε)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<TrotterFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    for &(x, y) in points {
        if x <= 0.0 {
            return Err(Error::NonPositive("delta", x));
        }
        if y <= 0.0 {
            return Err(Error::NonPositive("error", y));
        }
    }
    for (i, &(x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|&(x2, _)| x2 == x) {
            return Err(Error::DimensionMismatch(format!(
                "duplicate step size {x} in fit input"
            )));
        }
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|&(x, _)| x.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let mean_x = lx.iter().sum::<f64>() / n;
    let mean_y = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = (lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(TrotterFit {
        prefactor: intercept.exp(),
        exponent: slope,
        residual,
        points: points.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Hamiltonian, SplitCriterion};

    fn synthetic(phase_per_step: f64, rounds: u32, delta: f64) -> Vec<SignalRecord> {
        (0..=rounds)
            .map(|m| {
                let t = phase_per_step * (1u64 << m) as f64;
                SignalRecord {
                    round: m,
                    delta,
                    z: Complex64::new(t.cos(), t.sin()),
                    samples_per_stage: 0,
                    repeats: 1,
                    rotations: 0,
                    exchanges: 0,
                    wall_ms: 0.0,
                }
            })
            .collect()
    }

    #[test]
    fn noiseless_signal_is_recovered() {
        let recs = synthetic(0.3, 10, 1.0);
        let est = rpe_estimate(&recs, 1.0).unwrap();
        assert!((est.energy - 0.3).abs() < resolution(1.0, 10));
        assert_eq!(est.rounds_used, 11);
        assert!(!est.truncated);
    }

    #[test]
    fn zero_phase_is_exact() {
        let recs = synthetic(0.0, 6, 0.5);
        let est = rpe_estimate(&recs, 0.5).unwrap();
        assert_eq!(est.energy, 0.0);
    }

    #[test]
    fn wrapping_near_the_aliasing_boundary() {
        let phi = PI - 0.01;
        let recs = synthetic(phi, 12, 1.0);
        let est = rpe_estimate(&recs, 1.0).unwrap();
        assert!((est.energy - phi).abs() < resolution(1.0, 12));
        // Just past the boundary the estimate wraps into (−π, π].
        let recs = synthetic(PI + 0.01, 12, 1.0);
        let est = rpe_estimate(&recs, 1.0).unwrap();
        assert!((est.energy - (-PI + 0.01)).abs() < resolution(1.0, 12));
    }

    #[test]
    fn noise_floor_truncates_or_rejects() {
        let mut recs = synthetic(0.2, 8, 1.0);
        recs[5].z *= 0.01;
        let est = rpe_estimate(&recs, 1.0).unwrap();
        assert!(est.truncated);
        assert_eq!(est.rounds_used, 5);
        assert!((est.energy - 0.2).abs() < resolution(1.0, 4));

        recs[0].z *= 1e-4;
        assert!(matches!(
            rpe_estimate(&recs, 1.0),
            Err(Error::SignalBelowFloor { .. })
        ));
    }

    #[test]
    fn estimate_input_validation() {
        assert!(matches!(rpe_estimate(&[], 1.0), Err(Error::EmptyInput)));
        let mut recs = synthetic(0.1, 3, 1.0);
        recs.remove(1);
        assert!(rpe_estimate(&recs, 1.0).is_err());
    }

    #[test]
    fn convergence_check_definition() {
        assert!(convergence_check(&[1.0, 0.6, 0.52, 0.515], 0.05));
        assert!(!convergence_check(&[1.0, 0.6, 0.52], 0.05));
        assert!(!convergence_check(&[1.0], 0.05));
        assert!(convergence_check(&[0.0, 0.0], 0.05));
    }

    #[test]
    fn exact_power_law_is_fit_exactly() {
        let pts: Vec<(f64, f64)> = [0.1, 0.2, 0.4, 0.8]
            .iter()
            .map(|&d| (d, 3.0 * d * d))
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.prefactor - 3.0).abs() < 1e-10);
        assert!((fit.exponent - 2.0).abs() < 1e-10);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn constant_points_fit_zero_exponent() {
        let pts = [(0.1, 0.7), (0.2, 0.7), (0.4, 0.7)];
        let fit = fit_power_law(&pts).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
        assert!((fit.prefactor - 0.7).abs() < 1e-12);
    }

    #[test]
    fn fit_input_validation() {
        assert!(matches!(
            fit_power_law(&[(0.1, 1.0), (0.2, 2.0)]),
            Err(Error::TooFewPoints(2))
        ));
        assert!(fit_power_law(&[(0.1, 1.0), (0.2, 2.0), (-0.1, 1.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.2, 0.0), (0.3, 1.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.1, 2.0), (0.3, 1.0)]).is_err());
    }

    #[test]
    fn eigenstate_signal_is_a_pure_phase() {
        // H = h Z on one qubit, ψ0 = |1⟩: Z|1⟩ = −|1⟩, so
        // Z_m = e^{−iδh·2^m} exactly.
        let h = Hamiltonian::parse("0.4 Z").unwrap();
        let split = h
            .split_deterministic(SplitCriterion::DeterministicCount(1))
            .unwrap();
        let psi = StateSpec::basis(1, 1);
        let delta = 0.3;
        for m in 0..4u32 {
            let cfg = SignalConfig {
                split: &split,
                initial: &psi,
                delta,
                samples_per_stage: 0,
                repeats: 1,
                seed: 1,
                workers_exponent: 0,
                parallel: false,
            };
            let rec = signal(&cfg, m).unwrap();
            let want = -0.4 * delta * (1u64 << m) as f64;
            assert!((rec.z.norm() - 1.0).abs() < 1e-12);
            assert!((rec.z.arg() - want).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn signal_rejects_oversized_rounds() {
        let h = Hamiltonian::parse("0.4 Z").unwrap();
        let split = h
            .split_deterministic(SplitCriterion::DeterministicCount(1))
            .unwrap();
        let psi = StateSpec::basis(1, 0);
        let cfg = SignalConfig {
            split: &split,
            initial: &psi,
            delta: 0.1,
            samples_per_stage: 0,
            repeats: 1,
            seed: 0,
            workers_exponent: 0,
            parallel: false,
        };
        assert!(matches!(
            signal(&cfg, MAX_ROUND + 1),
            Err(Error::RoundRange(..))
        ));
    }

    #[test]
    fn zero_delta_signal_is_one() {
        let h = Hamiltonian::parse("0.4 Z\n0.2 X").unwrap();
        let split = h
            .split_deterministic(SplitCriterion::DeterministicCount(2))
            .unwrap();
        let psi = StateSpec::basis(1, 0);
        let cfg = SignalConfig {
            split: &split,
            initial: &psi,
            delta: 0.0,
            samples_per_stage: 0,
            repeats: 2,
            seed: 3,
            workers_exponent: 0,
            parallel: false,
        };
        let rec = signal(&cfg, 2).unwrap();
        assert!((rec.z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn commuting_terms_make_trotter_exact() {
        // {0.3 ZI, 0.2 IZ} on |11⟩ at m = 2: both Z's see bit 1, so the
        // eigenvalue is −0.3 − 0.2 = −0.5 and Z = e^{−iδ·0.5·4}.
        let h = Hamiltonian::parse("0.3 ZI\n0.2 IZ").unwrap();
        let split = h
            .split_deterministic(SplitCriterion::DeterministicCount(2))
            .unwrap();
        let psi = StateSpec::basis(2, 3);
        let delta = 0.25;
        let cfg = SignalConfig {
            split: &split,
            initial: &psi,
            delta,
            samples_per_stage: 0,
            repeats: 1,
            seed: 0,
            workers_exponent: 1,
            parallel: false,
        };
        let rec = signal(&cfg, 2).unwrap();
        let want = -delta * 0.5 * 4.0;
        assert!((rec.z.arg() - want).abs() < 1e-12);
        assert!((rec.z.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sample_reduction_does_not_bias_the_phase() {
        // Paired ensemble: per seed, arg Z with full vs reduced sampling;
        // the mean wrapped difference must sit within 3σ of zero.
        let h = Hamiltonian::parse(
            "0.8 XXII\n0.7 ZZII\n0.1 XYIZ\n0.08 YXZI\n0.06 IZXY\n0.05 ZIYX",
        )
        .unwrap();
        let split = h
            .split_deterministic(SplitCriterion::DeterministicCount(2))
            .unwrap()
            .with_lexicographic_deterministic();
        let psi = StateSpec::basis(4, 0);
        let make = |r: u64, seed: u64| SignalConfig {
            split: &split,
            initial: &psi,
            delta: 0.3,
            samples_per_stage: r,
            repeats: 1,
            seed,
            workers_exponent: 0,
            parallel: false,
        };
        let mut diffs = Vec::new();
        for seed in 0..120u64 {
            let full = signal(&make(9, seed), 3).unwrap();
            let reduced = signal(&make(3, 1_000_000 + seed), 3).unwrap();
            let mut d = full.z.arg() - reduced.z.arg();
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            diffs.push(d);
        }
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(mean.abs() <= 3.0 * se, "mean = {mean:.2e}, 3σ = {:.2e}", 3.0 * se);
    }

    #[test]
    fn conjugation_symmetry_in_delta() {
        // Deterministic streams: Z(−δ) = conj(Z(δ)).
        let h = Hamiltonian::parse("0.5 XY\n-0.3 ZZ\n0.2 YI").unwrap();
        let split = h
            .split_deterministic(SplitCriterion::DeterministicCount(3))
            .unwrap();
        let psi = StateSpec::parse("0 0.6 0\n3 0 -0.8", 2).unwrap();
        let make = |delta: f64| SignalConfig {
            split: &split,
            initial: &psi,
            delta,
            samples_per_stage: 0,
            repeats: 1,
            seed: 0,
            workers_exponent: 1,
            parallel: false,
        };
        for m in 0..3u32 {
            let plus = signal(&make(0.4), m).unwrap();
            let minus = signal(&make(-0.4), m).unwrap();
            assert!((plus.z - minus.z.conj()).norm() < 1e-12);
        }
    }
}
