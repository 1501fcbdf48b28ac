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

#![no_main]

use libfuzzer_sys::fuzz_target;
use weft::hamiltonian::{Hamiltonian, SplitCriterion};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = Hamiltonian::parse(text) {
        // Parsed Hamiltonians satisfy the construction invariants.
        assert!(h.lambda() >= 0.0);
        assert!(h.lambda().is_finite());
        for (i, a) in h.terms().iter().enumerate() {
            assert!(!a.string.is_identity());
            assert_eq!(a.string.n_qubits(), h.n_qubits() as usize);
            for b in &h.terms()[..i] {
                assert_ne!(a.string, b.string, "duplicate survived merging");
            }
        }
        // Splitting never loses weight.
        let split = h
            .split_deterministic(SplitCriterion::RandomizedFraction(0.5))
            .unwrap();
        assert!(split.lambda_r() <= split.lambda() + 1e-12);
        assert_eq!(split.l_det() + split.randomized().len(), h.len());
    }
});
