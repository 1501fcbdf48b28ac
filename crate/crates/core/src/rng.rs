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

//! Counter-based deterministic random numbers.
//!
//! Randomized streams have to be replayable bit-for-bit from their seed and
//! independent of how many workers execute them, so instead of a stateful
//! generator we hash explicit coordinates: `u64_at(a, b, c)` is a pure
//! function of `(seed, a, b, c)`. Stream builders index draws by
//! `(step, stage, sample)`; per-worker execution never touches the
//! generator, so results cannot depend on the worker count.
//!
//! The mixer is the splitmix64 finalizer applied to each coordinate in turn,
//! which is plenty for sampling Hamiltonian terms and initializing benchmark
//! states (no cryptographic claims).

/// Stateless counter-indexed generator.
#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    seed: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed: mix(seed) }
    }

    /// Derive an independent generator, e.g. one per repeat of a circuit.
    pub fn derive(&self, tag: u64) -> Self {
        CounterRng {
            seed: mix(self.seed ^ tag.wrapping_mul(GOLDEN)),
        }
    }

    /// Uniform `u64` at coordinates `(a, b, c)`.
    #[inline]
    pub fn u64_at(&self, a: u64, b: u64, c: u64) -> u64 {
        let mut z = self.seed;
        z = mix(z ^ a.wrapping_mul(GOLDEN).wrapping_add(1));
        z = mix(z ^ b.wrapping_mul(GOLDEN).wrapping_add(2));
        z = mix(z ^ c.wrapping_mul(GOLDEN).wrapping_add(3));
        z
    }

    /// Uniform `f64` in `[0, 1)` at coordinates `(a, b, c)`.
    #[inline]
    pub fn f64_at(&self, a: u64, b: u64, c: u64) -> f64 {
        // 53 mantissa bits of the hash.
        (self.u64_at(a, b, c) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
