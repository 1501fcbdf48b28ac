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

//! A full state-vector simulator for circuits of Pauli rotations `exp(iφ P̃)`.
//!
//! The state of an `n`-qubit register is stored as `2^n` complex amplitudes,
//! partitioned among `2^m` workers that mirror a distributed message-passing
//! deployment: each worker owns one contiguous partition plus an equally
//! sized exchange buffer. A rotation whose Pauli string acts non-trivially on
//! the upper `m` qubits is executed with a single pairwise exchange of
//! partitions, and runs of rotations sharing the same upper-qubit suffix are
//! executed as one group so that the exchange cost is paid once per group
//! rather than once per rotation.
//!
//! On top of the simulator sit the Hamiltonian-simulation tools it was built
//! for: deterministic first/second-order Trotter product formulas, qDRIFT
//! sampling of a randomized Hamiltonian remainder, robust-phase-estimation
//! signal generation, and power-law fits of the observed Trotter error
//! together with an analytic upper bound on its prefactor.
//!
//! Module map:
//!
//! - [`pauli`] — two-mask Pauli strings and their basis-state action.
//! - [`state`] — single-partition amplitude arrays and rotation kernels.
//! - [`fabric`] — the partitioned state, exchange plans, grouped execution.
//! - [`hamiltonian`] — term lists, splits, suffix grouping, error bounds.
//! - [`formulas`] — Trotter / qDRIFT / partially randomized stream builders.
//! - [`rpe`] — robust phase estimation and Trotter-error fitting.
//! - [`oracle`] — dense brute-force reference used by the test suites.
//! - [`mod@bench`] — grouped-workload timing harness.
//! - [`rng`] — counter-based deterministic random numbers.

pub mod bench;
pub mod error;
pub mod fabric;
pub mod formulas;
pub mod hamiltonian;
pub mod oracle;
pub mod pauli;
pub mod rng;
pub mod rpe;
pub mod state;

pub use error::{Error, Result};
