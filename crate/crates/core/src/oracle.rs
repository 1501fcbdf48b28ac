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

//! Dense brute-force reference implementations.
//!
//! Everything here is built from 2×2 Pauli matrices, Kronecker products and
//! dense linear algebra — deliberately none of the bitmask shortcuts the
//! simulator uses — so it can serve as an independent ground truth for the
//! equivalence suites. Dimension caps are hard errors: the oracle must never
//! silently dominate a run.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::formulas::{partially_randomized_step, RotationStream};
use crate::hamiltonian::{Hamiltonian, HamiltonianSplit};
use crate::pauli::{Pauli, PauliString};
use crate::rng::CounterRng;

pub type DenseOperator = DMatrix<Complex64>;

const MAX_DENSE_QUBITS: usize = 12;
const MAX_EIGEN_QUBITS: usize = 10;
const MAX_EFFECTIVE_QUBITS: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2×2 matrix of a single factor.
fn factor_matrix(p: Pauli) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let entries = match p {
        Pauli::I => [one, z, z, one],
        Pauli::X => [z, one, one, z],
        Pauli::Y => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        Pauli::Z => [one, z, z, -one],
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product of the factors, with position `k` at index bit `k`.
pub fn dense_pauli(p: &PauliString) -> Result<DenseOperator> {
    let n = p.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::QubitRange(n as u32, "dense operators support n <= 12"));
    }
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for k in 0..n {
        // kronecker puts the left operand on the high index bits, so
        // feeding factors in ascending k keeps factor k at bit k.
        m = factor_matrix(p.factor(k)).kronecker(&m);
    }
    Ok(m)
}

/// `cos φ · I + i sin φ · P̃` as a dense matrix.
pub fn dense_rotation(p: &PauliString, phi: f64) -> Result<DenseOperator> {
    let dim = 1usize << p.n_qubits();
    let mut m = dense_pauli(p)? * c(0.0, phi.sin());
    for d in 0..dim {
        m[(d, d)] += c(phi.cos(), 0.0);
    }
    Ok(m)
}

/// Apply `P̃` to a dense vector factor-by-factor (strided 2×2 multiplies).
pub fn apply_pauli_to_vector(p: &PauliString, v: &mut [Complex64]) {
    let n = p.n_qubits();
    debug_assert_eq!(v.len(), 1usize << n);
    for k in 0..n {
        let f = p.factor(k);
        if f == Pauli::I {
            continue;
        }
        let m = factor_matrix(f);
        let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let stride = 1usize << k;
        let mut base = 0;
        while base < v.len() {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let (a, b) = (v[i0], v[i1]);
                v[i0] = m00 * a + m01 * b;
                v[i1] = m10 * a + m11 * b;
            }
            base += 2 * stride;
        }
    }
}

/// Apply `e^{iφP̃}` to a dense vector: `v ← cos φ · v + i sin φ · P̃ v`.
pub fn apply_rotation_to_vector(p: &PauliString, phi: f64, v: &mut [Complex64]) {
    let mut pv = v.to_vec();
    apply_pauli_to_vector(p, &mut pv);
    let (s, co) = phi.sin_cos();
    let i_sin = c(0.0, s);
    for (x, y) in v.iter_mut().zip(pv.iter()) {
        *x = co * *x + i_sin * *y;
    }
}

/// Apply a product-ordered rotation list to a dense vector (element 0 acts
/// last, matching the stream convention).
pub fn apply_stream_to_vector(rotations: &[(PauliString, f64)], v: &mut [Complex64]) {
    for (p, phi) in rotations.iter().rev() {
        apply_rotation_to_vector(p, *phi, v);
    }
}

/// Dense unitary of a product-ordered rotation list, built column by column.
pub fn product_unitary(rotations: &[(PauliString, f64)], n: usize) -> Result<DenseOperator> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::QubitRange(n as u32, "dense operators support n <= 12"));
    }
    let dim = 1usize << n;
    let mut u = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    let mut col = vec![c(0.0, 0.0); dim];
    for j in 0..dim {
        col.iter_mut().for_each(|x| *x = c(0.0, 0.0));
        col[j] = c(1.0, 0.0);
        apply_stream_to_vector(rotations, &mut col);
        for i in 0..dim {
            u[(i, j)] = col[i];
        }
    }
    Ok(u)
}

/// Dense matrix of `H` including the identity offset on the diagonal.
pub fn dense_hamiltonian(h: &Hamiltonian) -> Result<DenseOperator> {
    let n = h.n_qubits() as usize;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::QubitRange(n as u32, "dense operators support n <= 12"));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for term in h.terms() {
        m += dense_pauli(&term.string)? * c(term.coefficient, 0.0);
    }
    for d in 0..dim {
        m[(d, d)] += c(h.energy_offset(), 0.0);
    }
    let hermiticity = (&m - m.adjoint()).camax();
    if hermiticity > 1e-12 {
        return Err(Error::NumericalGuard(format!(
            "assembled Hamiltonian is not Hermitian (defect {hermiticity})"
        )));
    }
    Ok(m)
}

/// Exact `e^{iHt}|ψ⟩` via eigendecomposition. Includes the energy offset.
pub fn exact_evolution(h: &Hamiltonian, t: f64, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = h.n_qubits() as usize;
    if n > MAX_EIGEN_QUBITS {
        return Err(Error::QubitRange(n as u32, "exact evolution supports n <= 10"));
    }
    let dim = 1usize << n;
    if psi.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state length {} vs dim {dim}",
            psi.len()
        )));
    }
    let m = dense_hamiltonian(h)?;
    let eig = m.symmetric_eigen();
    let psi_v = DVector::from_column_slice(psi);
    let mut out = DVector::from_element(dim, c(0.0, 0.0));
    for k in 0..dim {
        let v = eig.eigenvectors.column(k).clone_owned();
        let amp: Complex64 = v.dotc(&psi_v);
        let e = eig.eigenvalues[k];
        let phase = c((e * t).cos(), (e * t).sin());
        out += v * (phase * amp);
    }
    Ok(out.iter().copied().collect())
}

/// Ground state of a dense Hamiltonian.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: Vec<Complex64>,
    /// Set when the spectral gap is below 1e-10.
    pub degenerate: bool,
}

pub fn ground_state(h: &Hamiltonian) -> Result<GroundState> {
    let n = h.n_qubits() as usize;
    if n > MAX_EIGEN_QUBITS {
        return Err(Error::QubitRange(n as u32, "ground_state supports n <= 10"));
    }
    let m = dense_hamiltonian(h)?;
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let lowest = order[0];
    let gap = if order.len() > 1 {
        eig.eigenvalues[order[1]] - eig.eigenvalues[lowest]
    } else {
        f64::INFINITY
    };
    Ok(GroundState {
        energy: eig.eigenvalues[lowest],
        state: eig.eigenvectors.column(lowest).iter().copied().collect(),
        degenerate: gap < 1e-10,
    })
}

/// Ground-state energy of the effective Hamiltonian realized by one
/// deterministic product-formula step.
#[derive(Clone, Copy, Debug)]
pub struct EffectiveEnergy {
    /// Eigenphase / δ of the step unitary, shifted by the energy offset.
    pub energy: f64,
    /// |⟨v|ψ0⟩|² of the selected eigenvector against the true ground state.
    pub overlap: f64,
}

/// Build the dense step unitary `U(δ)` for a fully deterministic split,
/// eigendecompose it, and read the eigenphase of the eigenvector with the
/// largest overlap with the ground state of `H`.
///
/// Only deterministic streams have a fixed unitary, so a split with
/// `λ_R > 0` is rejected; an overlap below 0.5 is flagged as ambiguous.
pub fn effective_ground_energy(
    split: &HamiltonianSplit,
    delta: f64,
    order: u8,
) -> Result<EffectiveEnergy> {
    let n = split.n_qubits() as usize;
    if n > MAX_EFFECTIVE_QUBITS {
        return Err(Error::QubitRange(n as u32, "effective energy supports n <= 8"));
    }
    if split.lambda_r() > 0.0 {
        return Err(Error::RandomizedOracle(split.lambda_r()));
    }
    if delta <= 0.0 {
        return Err(Error::NonPositive("delta", delta));
    }
    let stream: RotationStream = match order {
        2 => partially_randomized_step(split, delta, 0, &CounterRng::new(0), 0)?,
        1 => RotationStream::new(
            split
                .deterministic()
                .iter()
                .map(|t| (t.string, delta * t.coefficient))
                .collect(),
        ),
        other => {
            return Err(Error::DimensionMismatch(format!(
                "unsupported product-formula order {other}"
            )))
        }
    };
    let u = product_unitary(stream.rotations(), n)?;

    let h = Hamiltonian::from_terms(
        split.n_qubits(),
        split
            .deterministic()
            .iter()
            .chain(split.randomized())
            .map(|t| (t.coefficient, t.string)),
    )?;
    let psi0 = DVector::from_column_slice(&ground_state(&h)?.state);

    // A unitary is normal, so its eigenvectors are those of the Hermitian
    // combination cos(δH̃) + γ·sin(δH̃); γ breaks cos-degeneracies between
    // distinct phases. Validate the picked vector and retry with another γ
    // if an accidental collision mixed eigenspaces.
    let herm_plus = (&u + u.adjoint()) * c(0.5, 0.0);
    let herm_minus = (&u - u.adjoint()) * c(0.0, -0.5);
    for gamma in [0.618_033_988_75, 0.234_987_5, 1.739_205_3] {
        let combo = &herm_plus + &herm_minus * c(gamma, 0.0);
        let eig = combo.symmetric_eigen();
        let mut best = (0usize, -1.0);
        for k in 0..eig.eigenvalues.len() {
            let ov = eig.eigenvectors.column(k).dotc(&psi0).norm_sqr();
            if ov > best.1 {
                best = (k, ov);
            }
        }
        let v = eig.eigenvectors.column(best.0).clone_owned();
        let uv = &u * &v;
        let z: Complex64 = v.dotc(&uv);
        let residual = (uv - v * z).camax();
        if residual > 1e-8 {
            continue;
        }
        let overlap = best.1;
        if overlap < 0.5 {
            return Err(Error::AmbiguousOverlap(overlap));
        }
        return Ok(EffectiveEnergy {
            energy: z.arg() / delta + split.energy_offset(),
            overlap,
        });
    }
    Err(Error::NumericalGuard(
        "unitary eigendecomposition failed for all mixing parameters".into(),
    ))
}
