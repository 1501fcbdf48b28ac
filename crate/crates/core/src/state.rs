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

//! Single-partition amplitude arrays and the in-place rotation kernels.
//!
//! An [`AmplitudeBlock`] holds `2^q` double-precision complex amplitudes.
//! [`apply_rotation`](AmplitudeBlock::apply_rotation) implements
//! `e^{iφP̃} = cos φ · I + i sin φ · P̃` by walking the array once in
//! ascending index order: the non-diagonal mask pairs index `i` with
//! `i ⊕ p1` and each pair is updated in place when its lower member is
//! visited, so the traversal stays cache-linear and memory-bandwidth bound.
//! Diagonal strings (`p1 = 0`) take a per-element phase fast path.
//!
//! Blocks are exclusively owned by one worker at a time; all parallelism in
//! this crate happens across blocks, never inside one.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Contiguous array of `2^q` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeBlock {
    q: u32,
    amps: Vec<Complex64>,
}

impl AmplitudeBlock {
    /// All-zero block on `q` local qubits.
    pub fn zero(q: u32) -> Self {
        AmplitudeBlock {
            q,
            amps: vec![Complex64::new(0.0, 0.0); 1usize << q],
        }
    }

    /// Block holding the basis state `index`.
    pub fn basis(q: u32, index: u64) -> Self {
        let mut b = Self::zero(q);
        b.amps[index as usize] = Complex64::new(1.0, 0.0);
        b
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude array length {len} is not a power of two"
            )));
        }
        Ok(AmplitudeBlock {
            q: len.trailing_zeros(),
            amps,
        })
    }

    pub fn local_qubits(&self) -> u32 {
        self.q
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// In-place Pauli rotation `e^{iφP̃}` on the whole block.
    ///
    /// # Panics
    /// Panics when `p` is not on exactly `q` qubits.
    pub fn apply_rotation(&mut self, p: &PauliString, phi: f64) {
        assert_eq!(
            p.n_qubits(),
            self.q as usize,
            "apply_rotation: string on {} qubits applied to a {}-qubit block",
            p.n_qubits(),
            self.q
        );
        let (s, c) = phi.sin_cos();
        let p1 = p.p1();
        let p2 = p.p2();
        if p1 == 0 {
            // Diagonal string: per-element factor e^{±iφ} chosen by the
            // parity of p2 ∧ i.
            let plus = Complex64::new(c, s);
            let minus = Complex64::new(c, -s);
            for (i, a) in self.amps.iter_mut().enumerate() {
                let neg = (i as u64 & p2).count_ones() & 1 == 1;
                *a *= if neg { minus } else { plus };
            }
            return;
        }
        // ω_i = i^popcount(p1∧p2) · (−1)^parity(p2∧i); the first factor is
        // shared by the whole kernel call.
        let base = (p1 & p2).count_ones();
        let phase = |i: u64| crate::pauli::Phase4::new(base + 2 * ((p2 & i).count_ones() & 1));
        for i in 0..self.amps.len() as u64 {
            let j = i ^ p1;
            if j <= i {
                continue;
            }
            let (wi, wj) = (phase(i), phase(j));
            let ai = self.amps[i as usize];
            let aj = self.amps[j as usize];
            // a'_i = cos φ · a_i + i sin φ · ω_j · a_j, symmetrically for j.
            let tj = wj.times(aj);
            let ti = wi.times(ai);
            self.amps[i as usize] = Complex64::new(c * ai.re - s * tj.im, c * ai.im + s * tj.re);
            self.amps[j as usize] = Complex64::new(c * aj.re - s * ti.im, c * aj.im + s * ti.re);
        }
    }

    /// Apply the operator product `Π_l e^{i·sign·φ_l P̃_l}` for `l = 1..L`.
    ///
    /// The product convention is `A_1 · A_2 · … · A_L`, so the last element
    /// of `seq` acts on the state first.
    pub fn apply_rotation_sequence(&mut self, seq: &[(PauliString, f64)], sign: f64) {
        debug_assert!(sign == 1.0 || sign == -1.0);
        for (p, phi) in seq.iter().rev() {
            self.apply_rotation(p, sign * phi);
        }
    }

    /// Sum of |a_i|².
    pub fn norm2(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// In-place Hadamard butterfly: `(A, B) ← ((A+B)/√2, (A−B)/√2)`.
///
/// # Panics
/// Panics on length mismatch.
pub fn butterfly(a: &mut AmplitudeBlock, b: &mut AmplitudeBlock) {
    assert_eq!(a.len(), b.len(), "butterfly: length mismatch");
    for (x, y) in a.amps.iter_mut().zip(b.amps.iter_mut()) {
        let sum = (*x + *y) * FRAC_1_SQRT_2;
        let diff = (*x - *y) * FRAC_1_SQRT_2;
        *x = sum;
        *y = diff;
    }
}

/// ⟨A|B⟩ = Σ conj(a_i)·b_i.
///
/// # Panics
/// Panics on length mismatch.
pub fn inner_product(a: &AmplitudeBlock, b: &AmplitudeBlock) -> Complex64 {
    assert_eq!(a.len(), b.len(), "inner_product: length mismatch");
    a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Sparse description of an initial or reference state: a list of
/// `(basis index, amplitude)` entries, unspecified entries zero.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    n: u32,
    entries: Vec<(u64, Complex64)>,
}

impl StateSpec {
    /// The basis state |index⟩.
    pub fn basis(n: u32, index: u64) -> Self {
        assert!((1..=64).contains(&n) && (n == 64 || index < (1u64 << n)));
        StateSpec {
            n,
            entries: vec![(index, Complex64::new(1.0, 0.0))],
        }
    }

    /// Build from a dense amplitude vector (exact zeros are dropped).
    pub fn from_dense(n: u32, amps: &[Complex64]) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::DimensionMismatch(format!(
                "dense state of length {} does not match n = {n}",
                amps.len()
            )));
        }
        let entries = amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(i, a)| (i as u64, *a))
            .collect();
        Ok(StateSpec { n, entries })
    }

    /// Parse the text form: one `<index> <re> <im>` entry per line.
    ///
    /// The index is either a decimal integer or, when the token consists of
    /// exactly `n` characters from {0, 1}, a ket label whose leftmost
    /// character is qubit position 0 (mirroring the Pauli word convention).
    /// `#` starts a comment; blank lines are skipped. Duplicate indices are
    /// rejected.
    pub fn parse(text: &str, n: u32) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::QubitRange(n, "1..=64"));
        }
        let mut entries: Vec<(u64, Complex64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (idx_tok, re_tok, im_tok) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(a), Some(b), Some(c), None) => (a, b, c),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected `<index> <re> <im>`, got `{line}`"),
                    })
                }
            };
            let index = parse_index(idx_tok, n).map_err(|msg| Error::Parse {
                line: lineno + 1,
                msg,
            })?;
            let re: f64 = re_tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad real part `{re_tok}`"),
            })?;
            let im: f64 = im_tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad imaginary part `{im_tok}`"),
            })?;
            if entries.iter().any(|(i, _)| *i == index) {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("duplicate index {index}"),
                });
            }
            entries.push((index, Complex64::new(re, im)));
        }
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(StateSpec { n, entries })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[(u64, Complex64)] {
        &self.entries
    }

    pub fn norm2(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n2 = self.norm2();
        if n2 <= 0.0 {
            return Err(Error::Unnormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        for (_, a) in &mut self.entries {
            *a *= s;
        }
        Ok(self)
    }

    /// Dense amplitude vector (oracle-side comparisons; callers keep n small).
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1usize << self.n];
        for (i, a) in &self.entries {
            v[*i as usize] = *a;
        }
        v
    }
}

fn parse_index(tok: &str, n: u32) -> std::result::Result<u64, String> {
    let is_ket = tok.len() == n as usize && tok.chars().all(|c| c == '0' || c == '1');
    let index = if is_ket {
        tok.chars()
            .enumerate()
            .filter(|(_, c)| *c == '1')
            .fold(0u64, |acc, (k, _)| acc | (1u64 << k))
    } else {
        tok.parse::<u64>().map_err(|_| format!("bad index `{tok}`"))?
    };
    if n < 64 && index >= (1u64 << n) {
        return Err(format!("index {index} out of range for n = {n}"));
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn approx(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn zero_angle_is_identity() {
        let mut b = AmplitudeBlock::basis(3, 5);
        let before = b.clone();
        b.apply_rotation(&PauliString::encode("XYZ").unwrap(), 0.0);
        assert_eq!(b, before);
    }

    #[test]
    fn x_half_pi_on_zero_state() {
        // e^{i(π/2)X} = iX, so |0⟩ → i|1⟩.
        let mut b = AmplitudeBlock::basis(1, 0);
        b.apply_rotation(
            &PauliString::encode("X").unwrap(),
            std::f64::consts::FRAC_PI_2,
        );
        assert!(approx(b.amplitudes()[0], c(0.0, 0.0), 1e-15));
        assert!(approx(b.amplitudes()[1], c(0.0, 1.0), 1e-15));
    }

    #[test]
    fn z_quarter_pi_on_one_state() {
        // Z|1⟩ = -|1⟩, so the factor is cos(π/4) - i sin(π/4).
        let mut b = AmplitudeBlock::basis(1, 1);
        b.apply_rotation(
            &PauliString::encode("Z").unwrap(),
            std::f64::consts::FRAC_PI_4,
        );
        let expect = c(
            std::f64::consts::FRAC_PI_4.cos(),
            -std::f64::consts::FRAC_PI_4.sin(),
        );
        assert!(approx(b.amplitudes()[1], expect, 1e-15));
    }

    #[test]
    fn identity_string_gives_global_phase() {
        let mut b = AmplitudeBlock::from_amplitudes(vec![
            c(0.5, 0.0),
            c(0.0, -0.5),
            c(0.5, 0.5),
            c(0.0, 0.0),
        ])
        .unwrap();
        let before = b.clone();
        let phi = 0.7;
        b.apply_rotation(&PauliString::encode("II").unwrap(), phi);
        let g = c(phi.cos(), phi.sin());
        for (x, y) in b.amplitudes().iter().zip(before.amplitudes()) {
            assert!(approx(*x, g * y, 1e-15));
        }
    }

    #[test]
    fn sequence_sign_and_order() {
        // Empty sequence is the identity.
        let mut b = AmplitudeBlock::basis(1, 0);
        b.apply_rotation_sequence(&[], 1.0);
        assert_eq!(b, AmplitudeBlock::basis(1, 0));
        // e^{-i(π/2)X}|0⟩ = -i|1⟩.
        let seq = vec![(
            PauliString::encode("X").unwrap(),
            std::f64::consts::FRAC_PI_2,
        )];
        b.apply_rotation_sequence(&seq, -1.0);
        assert!(approx(b.amplitudes()[1], c(0.0, -1.0), 1e-15));
    }

    #[test]
    fn butterfly_basics() {
        // A = B collapses onto (√2 A, 0).
        let mut a = AmplitudeBlock::from_amplitudes(vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let mut b = a.clone();
        let orig = a.clone();
        butterfly(&mut a, &mut b);
        for ((x, y), o) in a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .zip(orig.amplitudes())
        {
            assert!(approx(*x, o * std::f64::consts::SQRT_2, 1e-15));
            assert!(approx(*y, c(0.0, 0.0), 1e-15));
        }
        // Forced 2-element example.
        let mut a = AmplitudeBlock::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mut b = AmplitudeBlock::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        butterfly(&mut a, &mut b);
        let h = FRAC_1_SQRT_2;
        assert!(approx(a.amplitudes()[0], c(h, 0.0), 1e-15));
        assert!(approx(a.amplitudes()[1], c(h, 0.0), 1e-15));
        assert!(approx(b.amplitudes()[0], c(h, 0.0), 1e-15));
        assert!(approx(b.amplitudes()[1], c(-h, 0.0), 1e-15));
    }

    #[test]
    fn inner_product_basics() {
        let zero = AmplitudeBlock::basis(1, 0);
        let one = AmplitudeBlock::basis(1, 1);
        assert!(approx(inner_product(&zero, &one), c(0.0, 0.0), 1e-16));
        assert!(approx(inner_product(&zero, &zero), c(1.0, 0.0), 1e-16));
    }

    #[test]
    fn pair_partition_visits_every_index_once() {
        // Mirror the kernel's pairing rule and count visits.
        let p = PauliString::encode("XIYX").unwrap();
        let p1 = p.p1();
        let mut visits = [0u32; 16];
        for i in 0..16u64 {
            let j = i ^ p1;
            if j > i {
                visits[i as usize] += 1;
                visits[j as usize] += 1;
            }
        }
        assert!(visits.iter().all(|&v| v == 1));
    }

    #[test]
    fn state_spec_text_round_trip() {
        let spec = StateSpec::parse("# comment\n0 0.6 0\n110 0 0.8\n", 3).unwrap();
        assert_eq!(spec.entries().len(), 2);
        // "110" is a ket label: qubits 0 and 1 set → index 3.
        assert_eq!(spec.entries()[1].0, 3);
        assert!((spec.norm2() - 1.0).abs() < 1e-12);

        assert!(StateSpec::parse("9 1 0", 3).is_err());
        assert!(StateSpec::parse("0 1 0\n0 0 1", 3).is_err());
        assert!(StateSpec::parse("", 3).is_err());
    }

    fn random_block(q: u32, seed: u64) -> AmplitudeBlock {
        let rng = crate::rng::CounterRng::new(seed);
        let mut amps: Vec<Complex64> = (0..1u64 << q)
            .map(|i| Complex64::new(rng.f64_at(0, i, 0) - 0.5, rng.f64_at(1, i, 0) - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        AmplitudeBlock::from_amplitudes(amps).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn butterfly_twice_is_identity(seed in 0u64..1000) {
            let mut a = random_block(5, seed);
            let mut b = random_block(5, seed ^ 0x5eed);
            let (a0, b0) = (a.clone(), b.clone());
            butterfly(&mut a, &mut b);
            butterfly(&mut a, &mut b);
            for (x, y) in a.amplitudes().iter().zip(a0.amplitudes()) {
                prop_assert!(approx(*x, *y, 1e-14));
            }
            for (x, y) in b.amplitudes().iter().zip(b0.amplitudes()) {
                prop_assert!(approx(*x, *y, 1e-14));
            }
        }

        #[test]
        fn inner_product_conjugate_symmetry(seed in 0u64..1000) {
            let a = random_block(4, seed);
            let b = random_block(4, seed.wrapping_add(17));
            let ab = inner_product(&a, &b);
            let ba = inner_product(&b, &a);
            prop_assert!(approx(ab, ba.conj(), 1e-14));
        }

        #[test]
        fn rotations_preserve_norm(seed in 0u64..200) {
            let mut b = random_block(6, seed);
            let rng = crate::rng::CounterRng::new(seed ^ 0xabcd);
            for t in 0..50u64 {
                let word: String = (0..6)
                    .map(|k| ['I', 'X', 'Y', 'Z'][(rng.u64_at(2, t, k) % 4) as usize])
                    .collect();
                let phi = (rng.f64_at(3, t, 0) - 0.5) * 6.0;
                b.apply_rotation(&PauliString::encode(&word).unwrap(), phi);
            }
            prop_assert!((b.norm2() - 1.0).abs() < 1e-12);
        }
    }
}
