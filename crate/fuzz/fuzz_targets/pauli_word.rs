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
use weft::pauli::PauliString;

fuzz_target!(|data: &[u8]| {
    let Ok(word) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = PauliString::encode(word) {
        // Accepted words must round-trip and respect the mask invariants.
        assert_eq!(p.word(), word);
        assert_eq!(PauliString::encode(&p.word()).unwrap(), p);
        let n = p.n_qubits();
        assert!(n >= 1 && n <= 64);
        if n < 64 {
            assert_eq!(p.p1() >> n, 0);
            assert_eq!(p.p2() >> n, 0);
        }
        // Self-inverse action on a couple of basis states.
        for i in [0u64, (1u64 << (n.min(63))) - 1] {
            let i = i & if n == 64 { u64::MAX } else { (1 << n) - 1 };
            let (j, w1) = p.apply_to_basis(i);
            let (back, w2) = p.apply_to_basis(j);
            assert_eq!(back, i);
            assert_eq!((w1 * w2).exponent(), 0);
        }
    }
});
