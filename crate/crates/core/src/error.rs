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

//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli letter '{0}' (expected one of I, X, Y, Z)")]
    InvalidPauliLetter(char),

    #[error("Pauli word length {0} out of range 1..=64")]
    WordLength(usize),

    #[error("mask bits set beyond qubit count {n}: p1={p1:#x} p2={p2:#x}")]
    MaskOverflow { n: usize, p1: u64, p2: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input contains no terms")]
    EmptyInput,

    #[error("qubit count {0} outside supported range {1}")]
    QubitRange(u32, &'static str),

    #[error("worker count must be a power of two, got {0}")]
    WorkerCount(u64),

    #[error("round {0} exceeds the supported maximum {1}")]
    RoundRange(u32, u32),

    #[error("partition exponent {m} must satisfy 0 <= m < n = {n}")]
    PartitionExponent { m: u32, n: u32 },

    #[error("initial state norm² = {0}, not within 1e-8 of 1 (pass renormalize to accept)")]
    Unnormalized(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("fraction {0} outside [0, 1]")]
    FractionRange(f64),

    #[error("{0} must be positive, got {1}")]
    NonPositive(&'static str, f64),

    #[error("randomized block is non-empty but the per-stage sample count is 0")]
    NoSamples,

    #[error("power-law fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("signal amplitude |Z_{round}| = {amplitude} below the noise floor {floor}")]
    SignalBelowFloor {
        round: u32,
        amplitude: f64,
        floor: f64,
    },

    #[error("ground-state overlap {0} of the selected eigenvector is below 0.5 (ambiguous)")]
    AmbiguousOverlap(f64),

    #[error("effective-energy oracle requires a fully deterministic split (lambda_R = {0})")]
    RandomizedOracle(f64),

    #[error("numerical guard tripped: {0}")]
    NumericalGuard(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
