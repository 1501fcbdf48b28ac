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

//! Product-formula circuit builders.
//!
//! A [`RotationStream`] is an ordered list of full-width Pauli rotations in
//! operator-product order: element 0 is the leftmost factor of the product
//! and therefore acts on the state last. Builders are pure functions of
//! their inputs plus a [`CounterRng`]; random draws are indexed by
//! `(step, stage, sample)`, so a stream replays bit-identically from its
//! seed and never depends on how many workers later execute it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fabric::RotationGroup;
use crate::hamiltonian::{group_stream, Hamiltonian, HamiltonianSplit, Term};
use crate::pauli::PauliString;
use crate::rng::CounterRng;

/// Replay metadata carried alongside a stream.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StreamMeta {
    /// Trotter step size δ.
    pub delta: f64,
    /// Number of Trotter steps in the stream.
    pub steps: u64,
    /// Product-formula order of the deterministic part (1 or 2).
    pub order: u8,
    /// qDRIFT samples per randomized stage.
    pub samples_per_stage: u64,
    /// Seed of the counter RNG that drew the samples, if any.
    pub seed: Option<u64>,
}

/// An ordered list of `(P̃, φ)` rotations, element 0 applied last.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationStream {
    rotations: Vec<(PauliString, f64)>,
    pub meta: StreamMeta,
}

impl RotationStream {
    pub fn new(rotations: Vec<(PauliString, f64)>) -> Self {
        RotationStream {
            rotations,
            meta: StreamMeta::default(),
        }
    }

    pub fn rotations(&self) -> &[(PauliString, f64)] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Split every rotation at suffix length `m` and merge consecutive
    /// equal-suffix runs into groups.
    pub fn into_groups(&self, m: usize) -> Vec<RotationGroup> {
        group_stream(&self.rotations, m)
    }

    /// Text form: one `<phi> <pauli word>` per line, in stream order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, phi) in &self.rotations {
            out.push_str(&format!("{phi:.17e} {p}\n"));
        }
        out
    }

    /// Parse the text form; the qubit count is inferred from the first word
    /// and enforced on the rest.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rotations: Vec<(PauliString, f64)> = Vec::new();
        let mut n: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (phi_tok, word_tok) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected `<phi> <pauli word>`, got `{line}`"),
                    })
                }
            };
            let phi: f64 = phi_tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad angle `{phi_tok}`"),
            })?;
            if !phi.is_finite() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("non-finite angle `{phi_tok}`"),
                });
            }
            let p = PauliString::encode(word_tok).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            match n {
                None => n = Some(p.n_qubits()),
                Some(expect) if expect != p.n_qubits() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("word length {} differs from first line's {expect}", p.n_qubits()),
                    })
                }
                _ => {}
            }
            rotations.push((p, phi));
        }
        Ok(RotationStream::new(rotations))
    }
}

fn sweep(
    terms: &[Term],
    angle_scale: f64,
) -> impl DoubleEndedIterator<Item = (PauliString, f64)> + '_ {
    terms
        .iter()
        .map(move |t| (t.string, angle_scale * t.coefficient))
}

/// First-order step: one rotation `(P̃_l, δ·h_l)` per term, in the
/// Hamiltonian's execution order.
pub fn trotter1_step(h: &Hamiltonian, delta: f64) -> RotationStream {
    let mut s = RotationStream::new(sweep(h.terms(), delta).collect());
    s.meta = StreamMeta {
        delta,
        steps: 1,
        order: 1,
        samples_per_stage: 0,
        seed: None,
    };
    s
}

/// Second-order step: forward sweep at δ/2 followed by the reversed sweep
/// at δ/2 (a palindrome of length 2L).
pub fn trotter2_step(h: &Hamiltonian, delta: f64) -> RotationStream {
    let mut rotations: Vec<(PauliString, f64)> = sweep(h.terms(), delta / 2.0).collect();
    rotations.extend(sweep(h.terms(), delta / 2.0).rev());
    let mut s = RotationStream::new(rotations);
    s.meta = StreamMeta {
        delta,
        steps: 1,
        order: 2,
        samples_per_stage: 0,
        seed: None,
    };
    s
}

/// One qDRIFT stage over the randomized terms: `r` samples, term `l` drawn
/// with probability |h_l|/λ_R, each applied as `(P̃_l, sign(h_l)·λ_R·t/r)`.
///
/// Draws are indexed by `(step, stage, sample)` on `rng`. An empty stage is
/// returned when `r = 0`; sampling from an empty (or zero-weight) term list
/// with `r > 0` is an error.
pub fn qdrift_stage(
    randomized: &[Term],
    t_stage: f64,
    r: u64,
    rng: &CounterRng,
    step: u64,
    stage: u64,
) -> Result<RotationStream> {
    let mut out = Vec::with_capacity(r as usize);
    sample_stage_into(&mut out, randomized, t_stage, r, rng, step, stage)?;
    let mut s = RotationStream::new(out);
    s.meta.samples_per_stage = r;
    Ok(s)
}

fn sample_stage_into(
    out: &mut Vec<(PauliString, f64)>,
    randomized: &[Term],
    t_stage: f64,
    r: u64,
    rng: &CounterRng,
    step: u64,
    stage: u64,
) -> Result<()> {
    if r == 0 {
        return Ok(());
    }
    let weights: Vec<f64> = randomized.iter().map(|t| t.coefficient.abs()).collect();
    let lambda_r: f64 = weights.iter().sum();
    if randomized.is_empty() || lambda_r <= 0.0 {
        return Err(Error::NoSamples);
    }
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    for sample in 0..r {
        let u = rng.f64_at(step, stage, sample) * lambda_r;
        let idx = cumulative.partition_point(|&c| c <= u).min(randomized.len() - 1);
        let term = &randomized[idx];
        let angle = term.coefficient.signum() * lambda_r * t_stage / r as f64;
        out.push((term.string, angle));
    }
    Ok(())
}

/// One second-order partially randomized step:
///
/// ```text
/// D(δ/2 forward) · R_stage · R_stage · D(δ/2 reversed)
/// ```
///
/// where each `R_stage` is an independent qDRIFT stage over half the step
/// (`t = δ/2`, fresh samples each), so exactly `2r` samples are consumed
/// per step and the randomized terms are never reordered. With an empty
/// randomized block this is exactly the deterministic second-order step;
/// a non-empty randomized block with `r = 0` is rejected.
pub fn partially_randomized_step(
    split: &HamiltonianSplit,
    delta: f64,
    r: u64,
    rng: &CounterRng,
    step: u64,
) -> Result<RotationStream> {
    let randomized_active = split.lambda_r() > 0.0;
    if randomized_active && r == 0 {
        return Err(Error::NoSamples);
    }
    let det = split.deterministic();
    let mut rotations: Vec<(PauliString, f64)> =
        Vec::with_capacity(2 * det.len() + 2 * r as usize);
    rotations.extend(sweep(det, delta / 2.0));
    if randomized_active {
        sample_stage_into(&mut rotations, split.randomized(), delta / 2.0, r, rng, step, 0)?;
        sample_stage_into(&mut rotations, split.randomized(), delta / 2.0, r, rng, step, 1)?;
    }
    rotations.extend(sweep(det, delta / 2.0).rev());
    let mut s = RotationStream::new(rotations);
    s.meta = StreamMeta {
        delta,
        steps: 1,
        order: 2,
        samples_per_stage: if randomized_active { r } else { 0 },
        seed: None,
    };
    Ok(s)
}

/// Concatenation of `steps` independent partially randomized steps; the
/// step at list position `s` uses draw coordinates `(s, stage, sample)`.
pub fn evolution_stream(
    split: &HamiltonianSplit,
    delta: f64,
    steps: u64,
    r: u64,
    rng: &CounterRng,
) -> Result<RotationStream> {
    let mut rotations = Vec::new();
    for step in 0..steps {
        let s = partially_randomized_step(split, delta, r, rng, step)?;
        rotations.extend_from_slice(s.rotations());
    }
    let mut s = RotationStream::new(rotations);
    s.meta = StreamMeta {
        delta,
        steps,
        order: 2,
        samples_per_stage: if split.lambda_r() > 0.0 { r } else { 0 },
        seed: None,
    };
    Ok(s)
}

/// Samples per qDRIFT stage for RPE round `M`:
/// `r = ceil(f · κ · λ_R² · δ² · 2^M)` with `κ = δ/(0.2π)` unless
/// overridden. The reduction factor `f ∈ (0, 1]` trades signal amplitude
/// for fewer samples.
pub fn sample_count(
    lambda_r: f64,
    delta: f64,
    round: u32,
    kappa_override: Option<f64>,
    reduction: f64,
) -> Result<u64> {
    if delta <= 0.0 {
        return Err(Error::NonPositive("delta", delta));
    }
    if !(reduction > 0.0 && reduction <= 1.0) {
        return Err(Error::FractionRange(reduction));
    }
    if lambda_r == 0.0 {
        return Ok(0);
    }
    if round > crate::rpe::MAX_ROUND {
        return Err(Error::RoundRange(round, crate::rpe::MAX_ROUND));
    }
    let kappa = kappa_override.unwrap_or(delta / (0.2 * PI));
    let raw = reduction * kappa * lambda_r * lambda_r * delta * delta * 2f64.powi(round as i32);
    Ok(raw.ceil() as u64)
}
