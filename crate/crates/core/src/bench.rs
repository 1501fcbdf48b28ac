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

//! Internal timing harness for grouped workloads.
//!
//! The measured task is a run of `L` rotations that share one non-diagonal
//! upper-qubit suffix, executed either as a single group (one exchange for
//! the whole run) or rotation-by-rotation (one exchange each). States are
//! initialized with random amplitudes — the values are irrelevant for
//! timing — and each measurement is repeated and averaged.

use std::time::Instant;

use num_complex::Complex64;

use crate::error::Result;
use crate::fabric::{Fabric, FabricOptions, RotationGroup};
use crate::pauli::PauliString;
use crate::rng::CounterRng;
use crate::state::{AmplitudeBlock, StateSpec};

/// One timing row.
#[derive(Clone, Copy, Debug)]
pub struct GroupTiming {
    pub n: u32,
    pub m: u32,
    pub group_len: usize,
    pub grouped: bool,
    pub ms_per_rotation: f64,
    /// Exchange counter delta for a single application of the workload.
    pub exchanges: u64,
}

fn random_word(rng: &CounterRng, tag: u64, len: usize) -> PauliString {
    let word: String = (0..len)
        .map(|k| ['I', 'X', 'Y', 'Z'][(rng.u64_at(tag, k as u64, 0) % 4) as usize])
        .collect();
    PauliString::encode(&word).expect("generated word is valid")
}

/// Force a non-diagonal string by patching position 0 to X when needed.
fn non_diagonal(p: PauliString) -> PauliString {
    if p.is_diagonal() {
        let flipped = format!("X{}", &p.word()[1..]);
        PauliString::encode(&flipped).expect("patched word is valid")
    } else {
        p
    }
}

/// Fabric with random normalized amplitudes.
pub fn random_fabric(n: u32, m: u32, seed: u64, parallel: bool) -> Result<Fabric> {
    let mut fabric = Fabric::with_options(
        n,
        m,
        &StateSpec::basis(n, 0),
        FabricOptions {
            parallel,
            ..FabricOptions::default()
        },
    )?;
    let rng = CounterRng::new(seed);
    let local = fabric.local_qubits();
    let mut norm2 = 0.0;
    for (k, block) in fabric.partitions_mut().iter_mut().enumerate() {
        for (i, a) in block.amplitudes_mut().iter_mut().enumerate() {
            let idx = (k as u64) << local | i as u64;
            *a = Complex64::new(rng.f64_at(0, idx, 0) - 0.5, rng.f64_at(1, idx, 0) - 0.5);
            norm2 += a.norm_sqr();
        }
    }
    let scale = 1.0 / norm2.sqrt();
    for block in fabric.partitions_mut() {
        for a in block.amplitudes_mut() {
            *a *= scale;
        }
    }
    Ok(fabric)
}

/// The benchmark workload: `count` rotations sharing one non-diagonal
/// suffix of length `m` (random lower strings and angles).
pub fn shared_suffix_rotations(
    n: u32,
    m: u32,
    count: usize,
    seed: u64,
) -> Vec<(PauliString, f64)> {
    let rng = CounterRng::new(seed);
    let suffix = if m == 0 {
        PauliString::from_masks(0, 0, 0).expect("empty suffix")
    } else {
        // Non-diagonal so the exchange path is exercised.
        non_diagonal(random_word(&rng, 1, m as usize))
    };
    (0..count)
        .map(|l| {
            let lower = random_word(&rng, 1000 + l as u64, (n - m) as usize);
            let full = PauliString::concat(&lower, &suffix).expect("widths fit");
            let phi = rng.f64_at(2, l as u64, 0) * 2.0 - 1.0;
            (full, phi)
        })
        .collect()
}

/// Time the shared-suffix workload, grouped or ungrouped, averaged over
/// `repeats` applications to an evolving random state.
pub fn time_grouped_workload(
    n: u32,
    m: u32,
    group_len: usize,
    grouped: bool,
    repeats: u32,
    seed: u64,
    parallel: bool,
) -> Result<GroupTiming> {
    let rotations = shared_suffix_rotations(n, m, group_len, seed);
    let groups: Vec<RotationGroup> = if grouped {
        crate::hamiltonian::group_stream(&rotations, m as usize)
    } else {
        rotations
            .iter()
            .map(|(p, phi)| RotationGroup::single(p, *phi, m as usize))
            .collect()
    };
    let mut fabric = random_fabric(n, m, seed ^ 0xbe9c, parallel)?;
    // Warm-up pass, also yields the exchange count of one application.
    fabric.apply_grouped(&groups)?;
    let exchanges = fabric.counters().exchanges;
    let start = Instant::now();
    for _ in 0..repeats {
        fabric.apply_grouped(&groups)?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(GroupTiming {
        n,
        m,
        group_len,
        grouped,
        ms_per_rotation: elapsed * 1e3 / (repeats as f64 * group_len as f64),
        exchanges,
    })
}

/// Throughput of the plain single-worker rotation kernel.
#[derive(Clone, Copy, Debug)]
pub struct ThroughputPoint {
    pub n: u32,
    pub rotations_per_sec: f64,
}

/// Measure rotations/second of the local kernel for each qubit count,
/// using random non-diagonal strings on a random state. The rotation count
/// shrinks as the state grows to keep the total traffic roughly constant.
pub fn single_worker_throughput(qubit_counts: &[u32], seed: u64) -> Result<Vec<ThroughputPoint>> {
    let rng = CounterRng::new(seed);
    let mut out = Vec::with_capacity(qubit_counts.len());
    for &n in qubit_counts {
        let mut block = {
            let mut amps: Vec<Complex64> = (0..1u64 << n)
                .map(|i| Complex64::new(rng.f64_at(0, i, 0) - 0.5, rng.f64_at(1, i, 0) - 0.5))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            amps.iter_mut().for_each(|a| *a /= norm);
            AmplitudeBlock::from_amplitudes(amps)?
        };
        let count = 1usize << (26u32.saturating_sub(n)).max(2);
        let rotations: Vec<(PauliString, f64)> = (0..count)
            .map(|l| {
                let p = non_diagonal(random_word(&rng, 3000 + l as u64, n as usize));
                (p, rng.f64_at(4, l as u64, 0))
            })
            .collect();
        let start = Instant::now();
        for (p, phi) in &rotations {
            block.apply_rotation(p, *phi);
        }
        let elapsed = start.elapsed().as_secs_f64();
        out.push(ThroughputPoint {
            n,
            rotations_per_sec: count as f64 / elapsed,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workload_shares_one_nondiagonal_suffix() {
        let rotations = shared_suffix_rotations(8, 2, 25, 7);
        assert_eq!(rotations.len(), 25);
        let suffixes: Vec<PauliString> =
            rotations.iter().map(|(p, _)| p.split_suffix(2).1).collect();
        assert!(suffixes.iter().all(|s| s == &suffixes[0]));
        assert!(!suffixes[0].is_diagonal());
    }

    #[test]
    fn grouped_and_ungrouped_counters() {
        let t = time_grouped_workload(8, 2, 10, true, 1, 3, false).unwrap();
        assert_eq!(t.exchanges, 1);
        let t = time_grouped_workload(8, 2, 10, false, 1, 3, false).unwrap();
        assert_eq!(t.exchanges, 10);
    }

    #[test]
    fn random_fabric_is_normalized() {
        let f = random_fabric(6, 1, 5, false).unwrap();
        assert!((f.global_norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn throughput_points_are_positive() {
        let pts = single_worker_throughput(&[8, 9], 1).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.rotations_per_sec > 0.0));
    }
}
