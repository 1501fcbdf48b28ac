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

//! Bitmask Pauli strings and their constant-time action on basis states.
//!
//! An `n`-qubit Pauli string `P₁ ⊗ P₂ ⊗ … ⊗ Pₙ` (each factor one of I, X,
//! Y, Z) is packed into two 64-bit masks: bit `k` of `p1` is set when the
//! factor at position `k` is non-diagonal (X or Y), bit `k` of `p2` when it
//! is Y or Z. In text form the leftmost letter of the word is position 0,
//! so `"XIY"` has `p1 = 0b101` and `p2 = 0b100`.
//!
//! With this packing, the action on a computational basis state |i⟩ (qubit
//! at position `k` stored in bit `k` of `i`) costs a handful of logical
//! instructions:
//!
//! ```text
//! P̃ |i⟩ = ω |i ⊕ p1⟩,   ω = i^popcount(p1 ∧ p2) · (−1)^parity(p2 ∧ i)
//! ```
//!
//! The first factor counts the Y's in the string; the second counts the
//! positions where Y or Z meets a set bit of `i`. Every string is Hermitian
//! and self-inverse, so `ω` is always a fourth root of unity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Lexicographic rank with I < X < Y < Z.
    fn rank(self) -> u8 {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauliLetter(other)),
        }
    }

    fn bits(self) -> (u64, u64) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        }
    }
}

/// A fourth root of unity `i^e`, `e ∈ {0, 1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase4(u8);

impl Phase4 {
    pub const ONE: Phase4 = Phase4(0);
    pub const I: Phase4 = Phase4(1);
    pub const NEG_ONE: Phase4 = Phase4(2);
    pub const NEG_I: Phase4 = Phase4(3);

    pub fn new(exponent: u32) -> Self {
        Phase4((exponent % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Self {
        Phase4((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_c64(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Multiply `z` by this phase without a full complex multiplication.
    #[inline]
    pub fn times(self, z: Complex64) -> Complex64 {
        match self.0 {
            0 => z,
            1 => Complex64::new(-z.im, z.re),
            2 => Complex64::new(-z.re, -z.im),
            _ => Complex64::new(z.im, -z.re),
        }
    }
}

impl std::ops::Mul for Phase4 {
    type Output = Phase4;
    fn mul(self, rhs: Phase4) -> Phase4 {
        Phase4((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Pauli string on up to 64 qubits, packed as two bit masks.
///
/// Strings are plain values: cheap to copy, compared by content, ordered
/// lexicographically by word with I < X < Y < Z and position 0 most
/// significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    p1: u64,
    p2: u64,
}

#[inline]
fn parity(x: u64) -> u32 {
    x.count_ones() & 1
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    /// Parse a letter word such as `"XIZY"`; leftmost letter is position 0.
    pub fn encode(word: &str) -> Result<Self> {
        let len = word.chars().count();
        if len == 0 || len > 64 {
            return Err(Error::WordLength(len));
        }
        let mut p1 = 0u64;
        let mut p2 = 0u64;
        for (k, c) in word.chars().enumerate() {
            let (b1, b2) = Pauli::from_letter(c)?.bits();
            p1 |= b1 << k;
            p2 |= b2 << k;
        }
        Ok(PauliString {
            n: len as u8,
            p1,
            p2,
        })
    }

    /// Build directly from masks, validating that no bit exceeds `n`.
    /// `n = 0` is permitted and denotes the empty (identity) string that
    /// [`split_suffix`](Self::split_suffix) produces for `m = 0`.
    pub fn from_masks(n: usize, p1: u64, p2: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::WordLength(n));
        }
        if p1 & !low_mask(n) != 0 || p2 & !low_mask(n) != 0 {
            return Err(Error::MaskOverflow { n, p1, p2 });
        }
        Ok(PauliString { n: n as u8, p1, p2 })
    }

    /// The all-identity string on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_masks(n, 0, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn p1(&self) -> u64 {
        self.p1
    }

    pub fn p2(&self) -> u64 {
        self.p2
    }

    pub fn is_identity(&self) -> bool {
        self.p1 == 0 && self.p2 == 0
    }

    /// True when every factor is I or Z, so the string is diagonal in the
    /// computational basis and `apply_to_basis` never moves an index.
    pub fn is_diagonal(&self) -> bool {
        self.p1 == 0
    }

    /// The factor at position `k` (0-based, bit `k` of the masks).
    pub fn factor(&self, k: usize) -> Pauli {
        debug_assert!(k < self.n as usize);
        match ((self.p1 >> k) & 1, (self.p2 >> k) & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n as usize).map(|k| self.factor(k))
    }

    /// The letter word, leftmost letter = position 0.
    pub fn word(&self) -> String {
        self.factors().map(Pauli::letter).collect()
    }

    /// Action on the computational basis state `i`: returns `(j, ω)` with
    /// `P̃|i⟩ = ω|j⟩`, `j = i ⊕ p1`.
    #[inline]
    pub fn apply_to_basis(&self, i: u64) -> (u64, Phase4) {
        debug_assert!(i <= low_mask(self.n as usize) || self.n == 64);
        let j = i ^ self.p1;
        let e = (self.p1 & self.p2).count_ones() + 2 * parity(self.p2 & i);
        (j, Phase4::new(e))
    }

    /// Symplectic commutation test: true iff the strings commute.
    ///
    /// # Panics
    /// Panics when the strings have different qubit counts.
    pub fn commutes(&self, other: &PauliString) -> bool {
        assert_eq!(
            self.n, other.n,
            "commutes: mismatched qubit counts {} vs {}",
            self.n, other.n
        );
        parity(self.p1 & other.p2) == parity(self.p2 & other.p1)
    }

    /// Split off the upper-`m`-qubit suffix: returns `(lower, upper)` where
    /// `lower` keeps positions `0..n-m` and `upper` holds positions
    /// `n-m..n` shifted down to `0..m`. `concat(lower, upper)` restores the
    /// original string.
    ///
    /// # Panics
    /// Panics unless `m < n`.
    pub fn split_suffix(&self, m: usize) -> (PauliString, PauliString) {
        let n = self.n as usize;
        assert!(m < n, "split_suffix: m = {m} out of range 0..{n}");
        let lo = low_mask(n - m);
        let lower = PauliString {
            n: (n - m) as u8,
            p1: self.p1 & lo,
            p2: self.p2 & lo,
        };
        let upper = PauliString {
            n: m as u8,
            p1: self.p1 >> (n - m),
            p2: self.p2 >> (n - m),
        };
        (lower, upper)
    }

    /// Inverse of [`split_suffix`](Self::split_suffix).
    pub fn concat(lower: &PauliString, upper: &PauliString) -> Result<PauliString> {
        let n = lower.n as usize + upper.n as usize;
        if n == 0 || n > 64 {
            return Err(Error::WordLength(n));
        }
        Ok(PauliString {
            n: n as u8,
            p1: lower.p1 | (upper.p1 << lower.n),
            p2: lower.p2 | (upper.p2 << lower.n),
        })
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PauliString::encode(s)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString(\"{}\")", self.word())
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    /// Word order with I < X < Y < Z, position 0 most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.p1 ^ other.p1) | (self.p2 ^ other.p2);
        if diff == 0 {
            return self.n.cmp(&other.n);
        }
        let k = diff.trailing_zeros() as usize;
        if k >= self.n.min(other.n) as usize {
            // One word is a strict prefix of the other up to the first
            // difference; shorter sorts first.
            return self.n.cmp(&other.n);
        }
        self.factor(k).rank().cmp(&other.factor(k).rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_mask_example() {
        let p = PauliString::encode("XIY").unwrap();
        assert_eq!(p.p1(), 5);
        assert_eq!(p.p2(), 4);
    }

    #[test]
    fn identity_and_zz_masks() {
        let id = PauliString::encode("III").unwrap();
        assert_eq!((id.p1(), id.p2()), (0, 0));
        let zz = PauliString::encode("ZZ").unwrap();
        assert_eq!((zz.p1(), zz.p2()), (0, 3));
    }

    #[test]
    fn encode_rejects_bad_input() {
        assert!(matches!(
            PauliString::encode("XQ"),
            Err(Error::InvalidPauliLetter('Q'))
        ));
        assert!(matches!(PauliString::encode(""), Err(Error::WordLength(0))));
        let long = "I".repeat(65);
        assert!(matches!(
            PauliString::encode(&long),
            Err(Error::WordLength(65))
        ));
    }

    #[test]
    fn from_masks_rejects_overflow() {
        assert!(PauliString::from_masks(2, 0b100, 0).is_err());
        assert!(PauliString::from_masks(64, u64::MAX, u64::MAX).is_ok());
    }

    #[test]
    fn basis_action_matches_hand_results() {
        // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
        let y = PauliString::encode("Y").unwrap();
        assert_eq!(y.apply_to_basis(0), (1, Phase4::I));
        assert_eq!(y.apply_to_basis(1), (0, Phase4::NEG_I));
        // Z|1⟩ = -|1⟩
        let z = PauliString::encode("Z").unwrap();
        assert_eq!(z.apply_to_basis(1), (1, Phase4::NEG_ONE));
        // II|3⟩ = |3⟩
        let ii = PauliString::encode("II").unwrap();
        assert_eq!(ii.apply_to_basis(3), (3, Phase4::ONE));
    }

    #[test]
    fn commutation_examples() {
        let x = PauliString::encode("X").unwrap();
        let z = PauliString::encode("Z").unwrap();
        assert!(x.commutes(&x));
        assert!(!x.commutes(&z));
        let xx = PauliString::encode("XX").unwrap();
        let zz = PauliString::encode("ZZ").unwrap();
        assert!(xx.commutes(&zz));
    }

    #[test]
    #[should_panic(expected = "mismatched qubit counts")]
    fn commutes_panics_on_length_mismatch() {
        let a = PauliString::encode("X").unwrap();
        let b = PauliString::encode("XI").unwrap();
        let _ = a.commutes(&b);
    }

    #[test]
    fn suffix_split_examples() {
        let p = PauliString::encode("XIY").unwrap();
        let (lo, up) = p.split_suffix(1);
        assert_eq!(lo.word(), "XI");
        assert_eq!(up.word(), "Y");
        let (lo0, up0) = p.split_suffix(0);
        assert_eq!(lo0.word(), "XIY");
        assert_eq!(up0.n_qubits(), 0);
        assert!(up0.is_identity());
        let zzzz = PauliString::encode("ZZZZ").unwrap();
        let (lo2, up2) = zzzz.split_suffix(2);
        assert_eq!(lo2.word(), "ZZ");
        assert_eq!(up2.word(), "ZZ");
        assert_eq!(PauliString::concat(&lo2, &up2).unwrap(), zzzz);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn split_suffix_rejects_m_equal_n() {
        let p = PauliString::encode("XY").unwrap();
        let _ = p.split_suffix(2);
    }

    #[test]
    fn lexicographic_order() {
        let mut v = [PauliString::encode("ZI").unwrap(),
            PauliString::encode("XY").unwrap(),
            PauliString::encode("XI").unwrap()];
        v.sort();
        let words: Vec<String> = v.iter().map(|p| p.word()).collect();
        assert_eq!(words, ["XI", "XY", "ZI"]);
    }

    #[test]
    fn phase_arithmetic() {
        assert_eq!(Phase4::I * Phase4::I, Phase4::NEG_ONE);
        assert_eq!(Phase4::I.conj(), Phase4::NEG_I);
        assert_eq!(Phase4::ONE.conj(), Phase4::ONE);
        let z = Complex64::new(2.0, -3.0);
        for p in [Phase4::ONE, Phase4::I, Phase4::NEG_ONE, Phase4::NEG_I] {
            assert_eq!(p.times(z), p.to_c64() * z);
        }
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = String> {
        proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], 1..=max_len)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn round_trip(word in word_strategy(64)) {
            let p = PauliString::encode(&word).unwrap();
            prop_assert_eq!(p.word(), word);
        }

        #[test]
        fn involution_with_unit_phase(word in word_strategy(16), i in 0u64..65536) {
            let p = PauliString::encode(&word).unwrap();
            let i = i & ((1 << p.n_qubits()) - 1);
            let (j, w1) = p.apply_to_basis(i);
            let (back, w2) = p.apply_to_basis(j);
            prop_assert_eq!(back, i);
            prop_assert_eq!(w1 * w2, Phase4::ONE);
        }

        #[test]
        fn split_concat_round_trip(word in word_strategy(32), m_frac in 0.0f64..1.0) {
            let p = PauliString::encode(&word).unwrap();
            let m = ((p.n_qubits() as f64) * m_frac) as usize;
            let m = m.min(p.n_qubits() - 1);
            let (lo, up) = p.split_suffix(m);
            prop_assert_eq!(PauliString::concat(&lo, &up).unwrap(), p);
        }
    }
}
