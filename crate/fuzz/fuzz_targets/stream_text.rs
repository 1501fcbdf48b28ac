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
use weft::formulas::RotationStream;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(stream) = RotationStream::parse(text) {
        // Accepted streams re-serialize and re-parse to the same rotations,
        // and grouping never reorders or drops members.
        let replay = RotationStream::parse(&stream.to_text()).unwrap();
        assert_eq!(replay.rotations(), stream.rotations());
        if let Some((first, _)) = stream.rotations().first() {
            let n = first.n_qubits();
            for m in 0..n.min(4) {
                let groups = stream.into_groups(m);
                let total: usize = groups.iter().map(|g| g.len()).sum();
                assert_eq!(total, stream.len());
            }
        }
    }
});
