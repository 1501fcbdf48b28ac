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
use weft::state::StateSpec;

fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    // First byte chooses a small qubit count; the rest is the file text.
    let n = 1 + u32::from(data[0] % 16);
    let Ok(text) = std::str::from_utf8(&data[1..]) else {
        return;
    };
    if let Ok(spec) = StateSpec::parse(text, n) {
        assert_eq!(spec.n_qubits(), n);
        assert!(!spec.entries().is_empty());
        let limit = 1u64 << n;
        let mut seen = std::collections::HashSet::new();
        for (index, _) in spec.entries() {
            assert!(*index < limit);
            assert!(seen.insert(*index), "duplicate index survived parsing");
        }
        // Dense expansion agrees with the entry list.
        let dense = spec.to_dense();
        for (index, amp) in spec.entries() {
            assert_eq!(dense[*index as usize], *amp);
        }
    }
});
