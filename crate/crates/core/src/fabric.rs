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

//! The partitioned state and the grouped-rotation executor.
//!
//! A [`Fabric`] spreads the `2^n` amplitudes of an `n`-qubit state over
//! `W = 2^m` workers. Worker `k` owns partition `A_k`, holding amplitudes
//! `a_{i + k·2^{n-m}}` for `i in 0..2^{n-m}`, plus a mirror buffer `B_k` of
//! the same size, so the fabric allocates `2·2^n` complex numbers in total.
//!
//! A rotation `e^{iφ P̃⊗Q̃}` whose suffix `Q̃` lives on the upper `m` qubits
//! permutes whole partitions: `Q̃|k⟩ = ω_k|k′⟩` with `k′ = k ⊕ q1`, so its
//! non-local part is a pairwise exchange of partitions. A run of rotations
//! sharing one suffix is executed as a [`RotationGroup`] in three steps:
//!
//! 1. load `|ψ′⟩ = (I ⊗ Q̃)|ψ⟩` into the buffers — worker `k` receives its
//!    partner's partition scaled by `conj(ω_k)`; this is the only step that
//!    moves data between workers, and it happens once per group no matter
//!    how many rotations the group carries;
//! 2. butterfly: `A_k ← (A_k+B_k)/√2`, `B_k ← (A_k−B_k)/√2`;
//! 3. run the member rotations with angle sign `+1` on `A_k` and `−1` on
//!    `B_k`, entirely worker-local, then recombine `A_k ← (A_k+B_k)/√2`.
//!
//! Diagonal suffixes (`q1 = 0`) pair every worker with itself; the buffer
//! fill then happens locally with the ±1 phases applied in place and no
//! exchange is counted. An all-identity suffix short-circuits the whole
//! apparatus to a plain local rotation sequence.
//!
//! Workers are realized in-process. In the default sequential mode one
//! thread plays all workers in partition order; with
//! [`FabricOptions::parallel`] the per-worker steps run on a thread pool.
//! Steps are separated by barriers and every write target is owned by
//! exactly one worker, so scheduling cannot change results: both modes
//! produce bit-identical states.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, Phase4};
use crate::state::{butterfly, AmplitudeBlock, StateSpec};

/// Default cap on the total qubit count; raise via [`FabricOptions`].
pub const DEFAULT_MAX_QUBITS: u32 = 30;

/// Cap on `gather`: a gathered state of 2^26 amplitudes is 1 GiB.
const GATHER_MAX_QUBITS: u32 = 26;

/// Event counters for the benchmarking interfaces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Pairwise partition exchanges performed (one per non-diagonal-suffix
    /// group, regardless of group length).
    pub exchanges: u64,
    /// Individual Pauli rotations applied.
    pub rotations: u64,
    /// Groups executed.
    pub groups: u64,
}

/// A run of rotations sharing one upper-qubit suffix.
///
/// `members` is in operator-product order: the product represented is
/// `Π_l e^{iφ_l P̃_l ⊗ Q̃}` with element 0 leftmost, i.e. applied last.
#[derive(Clone, Debug)]
pub struct RotationGroup {
    suffix: PauliString,
    members: Vec<(PauliString, f64)>,
}

impl RotationGroup {
    pub fn new(suffix: PauliString, members: Vec<(PauliString, f64)>) -> Self {
        RotationGroup { suffix, members }
    }

    /// Group with a single member, splitting `full` at suffix length `m`.
    pub fn single(full: &PauliString, phi: f64, m: usize) -> Self {
        let (lower, upper) = full.split_suffix(m);
        RotationGroup {
            suffix: upper,
            members: vec![(lower, phi)],
        }
    }

    pub fn suffix(&self) -> &PauliString {
        &self.suffix
    }

    pub fn members(&self) -> &[(PauliString, f64)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Partner assignment and phases for one suffix: worker `k` pairs with
/// `k ⊕ q1(Q̃)` and owes the phase `ω_k` from `Q̃|k⟩ = ω_k|k′⟩`.
#[derive(Clone, Debug)]
pub struct ExchangePlan {
    partner_mask: u64,
    phases: Vec<Phase4>,
}

impl ExchangePlan {
    pub fn new(suffix: &PauliString) -> Self {
        let workers = 1u64 << suffix.n_qubits();
        let phases = (0..workers).map(|k| suffix.apply_to_basis(k).1).collect();
        ExchangePlan {
            partner_mask: suffix.p1(),
            phases,
        }
    }

    pub fn partner(&self, k: usize) -> usize {
        k ^ self.partner_mask as usize
    }

    pub fn phase(&self, k: usize) -> Phase4 {
        self.phases[k]
    }

    pub fn is_local(&self) -> bool {
        self.partner_mask == 0
    }
}

/// Construction options for [`Fabric`].
#[derive(Clone, Copy, Debug)]
pub struct FabricOptions {
    /// Run per-worker steps on the rayon pool instead of one thread.
    pub parallel: bool,
    /// Accept an unnormalized initial state and rescale it.
    pub renormalize: bool,
    /// Guard against accidentally allocating beyond desk scale.
    pub max_qubits: u32,
}

impl Default for FabricOptions {
    fn default() -> Self {
        FabricOptions {
            parallel: false,
            renormalize: false,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

/// The partitioned `n`-qubit state: `2^m` workers, each holding a partition
/// and a mirror buffer of `2^{n-m}` amplitudes.
#[derive(Clone, Debug)]
pub struct Fabric {
    n: u32,
    m: u32,
    parallel: bool,
    partitions: Vec<AmplitudeBlock>,
    buffers: Vec<AmplitudeBlock>,
    counters: Counters,
    group_wall: Duration,
}

impl Fabric {
    /// Create a fabric of `2^m` workers holding `initial`.
    pub fn new(n: u32, m: u32, initial: &StateSpec) -> Result<Self> {
        Self::with_options(n, m, initial, FabricOptions::default())
    }

    pub fn with_options(n: u32, m: u32, initial: &StateSpec, opts: FabricOptions) -> Result<Self> {
        if n < 1 || n > opts.max_qubits {
            return Err(Error::QubitRange(n, "1..=max_qubits (default 30)"));
        }
        if m >= n {
            return Err(Error::PartitionExponent { m, n });
        }
        if initial.n_qubits() != n {
            return Err(Error::DimensionMismatch(format!(
                "initial state on {} qubits, fabric on {n}",
                initial.n_qubits()
            )));
        }
        let norm2 = initial.norm2();
        let scale = if (norm2 - 1.0).abs() <= 1e-8 {
            1.0
        } else if opts.renormalize {
            if norm2 <= 0.0 {
                return Err(Error::Unnormalized(norm2));
            }
            1.0 / norm2.sqrt()
        } else {
            return Err(Error::Unnormalized(norm2));
        };

        let workers = 1usize << m;
        let local = n - m;
        let mut partitions: Vec<AmplitudeBlock> =
            (0..workers).map(|_| AmplitudeBlock::zero(local)).collect();
        let buffers = partitions.clone();
        for (index, amp) in initial.entries() {
            let k = (index >> local) as usize;
            let i = (index & ((1u64 << local) - 1)) as usize;
            partitions[k].amplitudes_mut()[i] = amp * scale;
        }
        Ok(Fabric {
            n,
            m,
            parallel: opts.parallel,
            partitions,
            buffers,
            counters: Counters::default(),
            group_wall: Duration::ZERO,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n
    }

    /// Partition exponent: the fabric has `2^m` workers.
    pub fn partition_exponent(&self) -> u32 {
        self.m
    }

    pub fn workers(&self) -> usize {
        1 << self.m
    }

    pub fn local_qubits(&self) -> u32 {
        self.n - self.m
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// Total wall time spent inside `apply_group`.
    pub fn group_wall(&self) -> Duration {
        self.group_wall
    }

    pub fn reset_counters(&mut self) {
        self.counters = Counters::default();
        self.group_wall = Duration::ZERO;
    }

    /// Execute one suffix group: the fabric state becomes
    /// `Π_l e^{iφ_l P̃_l ⊗ Q̃}` applied to the previous state.
    pub fn apply_group(&mut self, group: &RotationGroup) -> Result<()> {
        self.apply_group_impl(group, false)
    }

    /// Apply a whole product-ordered group list (element 0 leftmost, so the
    /// last group acts on the state first).
    pub fn apply_grouped(&mut self, groups: &[RotationGroup]) -> Result<()> {
        for g in groups.iter().rev() {
            self.apply_group(g)?;
        }
        Ok(())
    }

    /// Single full-width rotation, split at this fabric's partition size.
    pub fn apply_rotation(&mut self, full: &PauliString, phi: f64) -> Result<()> {
        let group = RotationGroup::single(full, phi, self.m as usize);
        self.apply_group(&group)
    }

    fn check_group(&self, group: &RotationGroup) -> Result<()> {
        if group.suffix.n_qubits() != self.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "group suffix on {} qubits, fabric partition exponent {}",
                group.suffix.n_qubits(),
                self.m
            )));
        }
        let local = self.local_qubits() as usize;
        for (p, _) in &group.members {
            if p.n_qubits() != local {
                return Err(Error::DimensionMismatch(format!(
                    "group member on {} qubits, fabric has {local} local qubits",
                    p.n_qubits()
                )));
            }
        }
        Ok(())
    }

    /// `force_exchange` routes diagonal suffixes through the partner-read
    /// path; results are bit-identical to the local fast path (the partner
    /// is the worker itself and conj(±1) = ±1), which the tests assert.
    fn apply_group_impl(&mut self, group: &RotationGroup, force_exchange: bool) -> Result<()> {
        self.check_group(group)?;
        let start = Instant::now();

        if group.suffix.is_identity() {
            // (I ± Q̃)/2 degenerates to (I, 0): a plain local sequence.
            self.for_each_worker(|_, a, _| a.apply_rotation_sequence(&group.members, 1.0));
        } else {
            let plan = ExchangePlan::new(&group.suffix);
            if plan.is_local() && !force_exchange {
                // Diagonal suffix: ω_k = ±1, applied in place of a transfer.
                self.for_each_worker(|k, a, b| {
                    let w = plan.phase(k);
                    for (y, x) in b.amplitudes_mut().iter_mut().zip(a.amplitudes()) {
                        *y = w.times(*x);
                    }
                });
                debug_assert!(plan.phases.iter().all(|w| w.is_real()));
            } else {
                // Rendezvous exchange: B_k = conj(ω_k) · A_{k'}.
                let partitions = &self.partitions;
                let fill = |k: usize, b: &mut AmplitudeBlock| {
                    let src = &partitions[plan.partner(k)];
                    let w = plan.phase(k).conj();
                    for (y, x) in b.amplitudes_mut().iter_mut().zip(src.amplitudes()) {
                        *y = w.times(*x);
                    }
                };
                if self.parallel {
                    self.buffers
                        .par_iter_mut()
                        .enumerate()
                        .for_each(|(k, b)| fill(k, b));
                } else {
                    for (k, b) in self.buffers.iter_mut().enumerate() {
                        fill(k, b);
                    }
                }
                self.counters.exchanges += u64::from(!plan.is_local());
            }
            self.for_each_worker(|_, a, b| {
                butterfly(a, b);
                a.apply_rotation_sequence(&group.members, 1.0);
                b.apply_rotation_sequence(&group.members, -1.0);
                // Recombination reuses the butterfly kernel; the discarded
                // buffer content is overwritten by the next group.
                butterfly(a, b);
            });
        }

        self.counters.rotations += group.members.len() as u64;
        self.counters.groups += 1;
        self.group_wall += start.elapsed();
        Ok(())
    }

    fn for_each_worker<F>(&mut self, f: F)
    where
        F: Fn(usize, &mut AmplitudeBlock, &mut AmplitudeBlock) + Sync,
    {
        if self.parallel {
            self.partitions
                .par_iter_mut()
                .zip(self.buffers.par_iter_mut())
                .enumerate()
                .for_each(|(k, (a, b))| f(k, a, b));
        } else {
            for (k, (a, b)) in self
                .partitions
                .iter_mut()
                .zip(self.buffers.iter_mut())
                .enumerate()
            {
                f(k, a, b);
            }
        }
    }

    /// Concatenate the partitions into the full amplitude array.
    pub fn gather(&self) -> Result<Vec<Complex64>> {
        if self.n > GATHER_MAX_QUBITS {
            return Err(Error::QubitRange(self.n, "gather supports n <= 26"));
        }
        let mut out = Vec::with_capacity(1 << self.n);
        for a in &self.partitions {
            out.extend_from_slice(a.amplitudes());
        }
        Ok(out)
    }

    /// ⟨reference|state⟩, summed entry-by-entry over the sparse reference.
    pub fn global_inner_product(&self, reference: &StateSpec) -> Result<Complex64> {
        if reference.n_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "reference on {} qubits, fabric on {}",
                reference.n_qubits(),
                self.n
            )));
        }
        let local = self.local_qubits();
        let mut sum = Complex64::new(0.0, 0.0);
        for (index, amp) in reference.entries() {
            let k = (index >> local) as usize;
            let i = (index & ((1u64 << local) - 1)) as usize;
            sum += amp.conj() * self.partitions[k].amplitudes()[i];
        }
        Ok(sum)
    }

    /// Global squared norm, accumulated in partition order.
    pub fn global_norm2(&self) -> f64 {
        self.partitions.iter().map(AmplitudeBlock::norm2).sum()
    }

    pub(crate) fn partitions_mut(&mut self) -> &mut [AmplitudeBlock] {
        &mut self.partitions
    }
}
