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

//! Hamiltonian term lists and the operations the product formulas need:
//! parsing, lexicographic execution ordering, deterministic/randomized
//! splitting with a cost model, suffix grouping of rotation streams, and
//! analytic upper bounds on the Trotter-error prefactor.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fabric::RotationGroup;
use crate::pauli::PauliString;

/// One Hamiltonian term `h · P̃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub string: PauliString,
}

/// `H = Σ_l h_l P̃_l` plus the extracted identity offset.
///
/// Invariants kept by construction: no duplicate strings (duplicates merge
/// by coefficient sum), no identity term in `terms` (its coefficient moves
/// to `energy_offset`).
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_qubits: u32,
    terms: Vec<Term>,
    energy_offset: f64,
}

impl Hamiltonian {
    /// Build from raw `(coefficient, string)` pairs, merging duplicates and
    /// extracting the identity.
    pub fn from_terms(n_qubits: u32, raw: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 64 {
            return Err(Error::QubitRange(n_qubits, "1..=64"));
        }
        let mut order: Vec<PauliString> = Vec::new();
        let mut merged: HashMap<PauliString, f64> = HashMap::new();
        let mut offset = 0.0;
        let mut any = false;
        for (h, p) in raw {
            any = true;
            if p.n_qubits() != n_qubits as usize {
                return Err(Error::DimensionMismatch(format!(
                    "term {p} on {} qubits in a {n_qubits}-qubit Hamiltonian",
                    p.n_qubits()
                )));
            }
            if p.is_identity() {
                offset += h;
                continue;
            }
            match merged.entry(p) {
                std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += h,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(h);
                    order.push(p);
                }
            }
        }
        if !any {
            return Err(Error::EmptyInput);
        }
        let terms = order
            .into_iter()
            .map(|p| Term {
                coefficient: merged[&p],
                string: p,
            })
            .collect();
        Ok(Hamiltonian {
            n_qubits,
            terms,
            energy_offset: offset,
        })
    }

    /// Parse the text form: one `<coefficient> <pauli word>` per line,
    /// `#` comments, blank lines skipped. The qubit count is inferred from
    /// the first term and enforced on the rest.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: Vec<(f64, PauliString)> = Vec::new();
        let mut n: Option<u32> = None;
        for (lineno, line_raw) in text.lines().enumerate() {
            let line = line_raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (coeff_tok, word_tok) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected `<coefficient> <pauli word>`, got `{line}`"),
                    })
                }
            };
            let h: f64 = coeff_tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad coefficient `{coeff_tok}`"),
            })?;
            if !h.is_finite() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("non-finite coefficient `{coeff_tok}`"),
                });
            }
            let p = PauliString::encode(word_tok).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            match n {
                None => n = Some(p.n_qubits() as u32),
                Some(expect) if expect as usize != p.n_qubits() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!(
                            "word length {} differs from first term's {expect}",
                            p.n_qubits()
                        ),
                    })
                }
                _ => {}
            }
            raw.push((h, p));
        }
        let n = n.ok_or(Error::EmptyInput)?;
        Self::from_terms(n, raw)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn energy_offset(&self) -> f64 {
        self.energy_offset
    }

    /// λ = Σ |h_l| over the non-identity terms.
    pub fn lambda(&self) -> f64 {
        // +0.0 keeps an empty sum from printing as -0.
        self.terms.iter().map(|t| t.coefficient.abs()).sum::<f64>() + 0.0
    }

    /// Reorder terms lexicographically by Pauli word (I < X < Y < Z,
    /// position 0 most significant). Idempotent; merging already removed
    /// equal words.
    pub fn sort_for_execution(mut self) -> Self {
        self.terms.sort_by_key(|a| a.string);
        self
    }

    /// Split off the `L_det` largest-|h| terms for deterministic execution.
    pub fn split_deterministic(&self, criterion: SplitCriterion) -> Result<HamiltonianSplit> {
        let mut ranked = self.terms.clone();
        // Magnitude-descending, ties broken lexicographically by word.
        ranked.sort_by(|a, b| {
            b.coefficient
                .abs()
                .partial_cmp(&a.coefficient.abs())
                .unwrap()
                .then_with(|| a.string.cmp(&b.string))
        });
        let lambda = self.lambda();
        let l_det = match criterion {
            SplitCriterion::DeterministicCount(c) => {
                if c > ranked.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "L_det = {c} exceeds term count {}",
                        ranked.len()
                    )));
                }
                c
            }
            SplitCriterion::RandomizedFraction(f) => {
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::FractionRange(f));
                }
                // Smallest count whose remainder satisfies λ_R/λ <= f.
                let mut l_det = 0;
                let mut tail: f64 = lambda;
                while l_det < ranked.len() && tail > f * lambda + 1e-15 * lambda {
                    tail -= ranked[l_det].coefficient.abs();
                    l_det += 1;
                }
                l_det
            }
        };
        let randomized = ranked.split_off(l_det);
        Ok(HamiltonianSplit {
            n_qubits: self.n_qubits,
            energy_offset: self.energy_offset,
            deterministic: ranked,
            randomized,
            lambda,
        })
    }
}

/// How to choose the deterministic prefix of a split.
#[derive(Clone, Copy, Debug)]
pub enum SplitCriterion {
    /// Keep exactly this many terms deterministic.
    DeterministicCount(usize),
    /// Smallest deterministic prefix with λ_R/λ at or below this target.
    RandomizedFraction(f64),
}

/// A Hamiltonian partitioned into a deterministic head and randomized tail.
#[derive(Clone, Debug)]
pub struct HamiltonianSplit {
    n_qubits: u32,
    energy_offset: f64,
    deterministic: Vec<Term>,
    randomized: Vec<Term>,
    lambda: f64,
}

impl HamiltonianSplit {
    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn energy_offset(&self) -> f64 {
        self.energy_offset
    }

    /// Deterministic terms, magnitude-descending unless re-sorted.
    pub fn deterministic(&self) -> &[Term] {
        &self.deterministic
    }

    pub fn randomized(&self) -> &[Term] {
        &self.randomized
    }

    pub fn l_det(&self) -> usize {
        self.deterministic.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// λ_R = Σ |h| over the randomized tail.
    pub fn lambda_r(&self) -> f64 {
        self.randomized.iter().map(|t| t.coefficient.abs()).sum::<f64>() + 0.0
    }

    /// Reorder the deterministic part lexicographically; the grouped
    /// executor benefits from long equal-suffix runs, and the randomized
    /// part must stay in sampling order, so it is left untouched.
    pub fn with_lexicographic_deterministic(mut self) -> Self {
        self.deterministic.sort_by_key(|a| a.string);
        self
    }
}

/// `C_tot = a·L_D/(ε·δ) + b·λ_R²/ε²`.
pub fn cost_model(l_d: usize, lambda_r: f64, epsilon: f64, delta: f64, a: f64, b: f64) -> Result<f64> {
    if epsilon <= 0.0 {
        return Err(Error::NonPositive("epsilon", epsilon));
    }
    if delta <= 0.0 {
        return Err(Error::NonPositive("delta", delta));
    }
    Ok(a * l_d as f64 / (epsilon * delta) + b * lambda_r * lambda_r / (epsilon * epsilon))
}

/// Scan all deterministic-prefix sizes and return the `(L_det, cost)` pair
/// minimizing [`cost_model`] at the largest step size the error target
/// allows, `δ = sqrt(ε / prefactor_proxy)`.
///
/// The proxy for the Trotter-error prefactor must come from the caller;
/// there is no built-in heuristic.
pub fn minimize_cost(
    hamiltonian: &Hamiltonian,
    epsilon: f64,
    prefactor_proxy: f64,
    a: f64,
    b: f64,
) -> Result<(usize, f64)> {
    if prefactor_proxy <= 0.0 {
        return Err(Error::NonPositive("prefactor_proxy", prefactor_proxy));
    }
    let delta = (epsilon / prefactor_proxy).sqrt();
    let mut ranked: Vec<f64> = hamiltonian
        .terms()
        .iter()
        .map(|t| t.coefficient.abs())
        .collect();
    ranked.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let lambda = hamiltonian.lambda();
    let mut best = (0usize, f64::INFINITY);
    let mut head = 0.0;
    for l_det in 0..=ranked.len() {
        if l_det > 0 {
            head += ranked[l_det - 1];
        }
        let cost = cost_model(l_det, lambda - head, epsilon, delta, a, b)?;
        if cost < best.1 {
            best = (l_det, cost);
        }
    }
    Ok(best)
}

/// Group a product-ordered stream of full-width rotations into maximal
/// consecutive runs sharing the upper-`m`-qubit suffix. Grouping never
/// reorders, so the represented operator product is unchanged; the
/// concatenation of all group members in group order reproduces the input.
pub fn group_stream(rotations: &[(PauliString, f64)], m: usize) -> Vec<RotationGroup> {
    let mut groups: Vec<RotationGroup> = Vec::new();
    let mut current: Option<(PauliString, Vec<(PauliString, f64)>)> = None;
    for (p, phi) in rotations {
        let (lower, upper) = p.split_suffix(m);
        match &mut current {
            Some((suffix, members)) if *suffix == upper => members.push((lower, *phi)),
            _ => {
                if let Some((suffix, members)) = current.take() {
                    groups.push(RotationGroup::new(suffix, members));
                }
                current = Some((upper, vec![(lower, *phi)]));
            }
        }
    }
    if let Some((suffix, members)) = current {
        groups.push(RotationGroup::new(suffix, members));
    }
    groups
}

/// Upper bound on the Trotter-error prefactor for a general decomposition
/// `H = Σ_α H_α`:
///
/// ```text
/// 4 · Σ_α ‖H_α‖ ( Σ_{β : [H_α, H_β] ≠ 0} ‖H_β‖ )²
/// ```
///
/// Each part is a set of terms; singleton norms are |h| and multi-term
/// norms use the triangle-inequality bound Σ|h|. Two parts are treated as
/// non-commuting unless every cross pair of strings commutes, which keeps
/// the expression an upper bound.
pub fn prefactor_bound_general(parts: &[Vec<Term>]) -> Result<f64> {
    if parts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let norms: Vec<f64> = parts
        .iter()
        .map(|p| p.iter().map(|t| t.coefficient.abs()).sum())
        .collect();
    let commute = |a: &[Term], b: &[Term]| {
        a.iter()
            .all(|x| b.iter().all(|y| x.string.commutes(&y.string)))
    };
    let mut total = 0.0;
    for (alpha, part) in parts.iter().enumerate() {
        let mut inner = 0.0;
        for (beta, other) in parts.iter().enumerate() {
            if beta != alpha && !commute(part, other) {
                inner += norms[beta];
            }
        }
        total += norms[alpha] * inner * inner;
    }
    Ok(4.0 * total)
}

/// The general bound specialized to a deterministic/randomized split, under
/// the worst-case assumption that every deterministic term fails to commute
/// with the randomized block:
///
/// ```text
/// 4 · Σ_{l ≤ L_det} |h_l| ( Σ_{k ≤ L_det, [P̃_l, P̃_k] ≠ 0} |h_k| )²
///   + λ_R (λ − λ_R)² + (λ − λ_R) λ_R²
/// ```
pub fn prefactor_bound_split(split: &HamiltonianSplit) -> f64 {
    let det = split.deterministic();
    let mut total = 0.0;
    for a in det {
        let mut inner = 0.0;
        for b in det {
            if !a.string.commutes(&b.string) {
                inner += b.coefficient.abs();
            }
        }
        total += a.coefficient.abs() * inner * inner;
    }
    let lambda = split.lambda();
    let lambda_r = split.lambda_r();
    let lambda_d = lambda - lambda_r;
    4.0 * total + lambda_r * lambda_d * lambda_d + lambda_d * lambda_r * lambda_r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ham(text: &str) -> Hamiltonian {
        Hamiltonian::parse(text).unwrap()
    }

    #[test]
    fn parse_basics() {
        let h = ham("0.5 XX\n-0.3 ZI");
        assert_eq!(h.len(), 2);
        assert!((h.lambda() - 0.8).abs() < 1e-15);
        assert_eq!(h.energy_offset(), 0.0);

        let pure_offset = ham("1.0 II");
        assert_eq!(pure_offset.len(), 0);
        assert_eq!(pure_offset.energy_offset(), 1.0);

        let merged = ham("0.2 XY\n0.3 XY");
        assert_eq!(merged.len(), 1);
        assert!((merged.terms()[0].coefficient - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Hamiltonian::parse(""), Err(Error::EmptyInput)));
        assert!(matches!(
            Hamiltonian::parse("# only comments\n"),
            Err(Error::EmptyInput)
        ));
        assert!(Hamiltonian::parse("0.5 XX\n0.5 XYZ").is_err());
        assert!(Hamiltonian::parse("abc XX").is_err());
        assert!(Hamiltonian::parse("0.5").is_err());
        assert!(Hamiltonian::parse("inf XX").is_err());
    }

    #[test]
    fn lambda_accounts_for_identity_extraction() {
        let with_id = ham("0.5 XX\n0.25 II\n-0.3 ZI");
        assert!((with_id.lambda() - 0.8).abs() < 1e-15);
        assert!((with_id.energy_offset() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn lexicographic_sort_is_idempotent() {
        let h = ham("1 ZI\n1 XY\n1 XI").sort_for_execution();
        let words: Vec<String> = h.terms().iter().map(|t| t.string.word()).collect();
        assert_eq!(words, ["XI", "XY", "ZI"]);
        let twice = h.clone().sort_for_execution();
        assert_eq!(h, twice);
    }

    #[test]
    fn split_extremes_and_fraction() {
        let h = ham("0.5 XX\n0.3 ZI\n0.2 YY");
        let all = h
            .split_deterministic(SplitCriterion::DeterministicCount(3))
            .unwrap();
        assert_eq!(all.lambda_r(), 0.0);
        let none = h
            .split_deterministic(SplitCriterion::DeterministicCount(0))
            .unwrap();
        assert_eq!(none.l_det(), 0);
        assert!((none.lambda_r() - none.lambda()).abs() < 1e-15);

        // Fraction 0.4: L_det = 1 leaves λ_R/λ = 0.5, so take one more.
        let frac = h
            .split_deterministic(SplitCriterion::RandomizedFraction(0.4))
            .unwrap();
        assert_eq!(frac.l_det(), 2);
        assert!((frac.lambda_r() - 0.2).abs() < 1e-15);

        assert!(h
            .split_deterministic(SplitCriterion::RandomizedFraction(1.5))
            .is_err());
    }

    #[test]
    fn split_lambda_r_monotone_in_l_det() {
        let h = ham("0.4 XI\n-0.9 YZ\n0.1 ZZ\n0.3 IX\n0.2 XX");
        let mut prev = f64::INFINITY;
        for l in 0..=h.len() {
            let s = h
                .split_deterministic(SplitCriterion::DeterministicCount(l))
                .unwrap();
            assert!(s.lambda_r() <= prev + 1e-15);
            assert!(s.lambda_r() <= s.lambda() + 1e-15);
            // Every deterministic |h| dominates every randomized |h|.
            if let (Some(dmin), Some(rmax)) = (
                s.deterministic()
                    .iter()
                    .map(|t| t.coefficient.abs())
                    .reduce(f64::min),
                s.randomized()
                    .iter()
                    .map(|t| t.coefficient.abs())
                    .reduce(f64::max),
            ) {
                assert!(dmin >= rmax);
            }
            prev = s.lambda_r();
        }
    }

    #[test]
    fn cost_model_cases() {
        assert_eq!(cost_model(10, 0.0, 0.5, 2.0, 3.0, 7.0).unwrap(), 3.0 * 10.0 / 1.0);
        assert!((cost_model(0, 0.5, 0.1, 1.0, 3.0, 1.0).unwrap() - 25.0).abs() < 1e-12);
        let v = cost_model(10, 0.5, 0.001, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 260_000.0).abs() < 1e-6);
        assert!(cost_model(1, 0.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(cost_model(1, 0.0, 0.1, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn minimizer_trades_terms_for_sampling() {
        let h = ham("1.0 XX\n0.9 ZZ\n0.001 XY\n0.001 YX\n0.001 YZ");
        // Cheap sampling: push the small tail into the randomized part.
        let (l_det, _) = minimize_cost(&h, 0.001, 1.0, 1.0, 1e-6).unwrap();
        assert!(l_det <= 2, "l_det = {l_det}");
        // Expensive sampling: keep everything deterministic.
        let (l_det, _) = minimize_cost(&h, 0.001, 1.0, 1e-6, 1e6).unwrap();
        assert_eq!(l_det, h.len());
    }

    #[test]
    fn grouping_examples() {
        let p = |w: &str| PauliString::encode(w).unwrap();
        // All-identical suffix: one group.
        let stream = vec![(p("XIZ"), 0.1), (p("YIZ"), 0.2), (p("IIZ"), 0.3)];
        let gs = group_stream(&stream, 1);
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].len(), 3);
        // Alternating suffixes: no sharing.
        let stream = vec![(p("XZ"), 0.1), (p("XX"), 0.2), (p("XZ"), 0.3), (p("XX"), 0.4)];
        assert_eq!(group_stream(&stream, 1).len(), 4);
        // Sorted 3-qubit stream splits by last factor: I, X, Z, I.
        let stream = vec![(p("XII"), 0.1), (p("XIX"), 0.2), (p("XIZ"), 0.3), (p("ZII"), 0.4)];
        let gs = group_stream(&stream, 1);
        assert_eq!(gs.len(), 4);
        // Concatenating members in group order reproduces the stream.
        let rebuilt: Vec<(PauliString, f64)> = gs
            .iter()
            .flat_map(|g| {
                g.members()
                    .iter()
                    .map(|(lower, phi)| (PauliString::concat(lower, g.suffix()).unwrap(), *phi))
            })
            .collect();
        assert_eq!(rebuilt, stream);
        // m = 0: everything shares the empty suffix.
        assert_eq!(group_stream(&stream, 0).len(), 1);
    }

    #[test]
    fn general_bound_examples() {
        let t = |h: f64, w: &str| Term {
            coefficient: h,
            string: PauliString::encode(w).unwrap(),
        };
        // Single part: nothing to fail to commute with.
        assert_eq!(prefactor_bound_general(&[vec![t(0.7, "X")]]).unwrap(), 0.0);
        // {h1 X, h2 Z}: 4(|h1||h2|² + |h2||h1|²).
        let v = prefactor_bound_general(&[vec![t(0.5, "X")], vec![t(0.3, "Z")]]).unwrap();
        assert!((v - 4.0 * (0.5 * 0.09 + 0.3 * 0.25)).abs() < 1e-15);
        // Commuting parts: zero.
        let v = prefactor_bound_general(&[vec![t(0.5, "X")], vec![t(0.3, "X")]]).unwrap();
        assert_eq!(v, 0.0);
        assert!(prefactor_bound_general(&[]).is_err());
    }

    #[test]
    fn split_bound_examples() {
        // {0.5 X deterministic | 0.3 Z randomized}:
        // 4·0.5·0² + 0.3·0.25 + 0.5·0.09 = 0.12.
        let h = ham("0.5 X\n0.3 Z");
        let s = h
            .split_deterministic(SplitCriterion::DeterministicCount(1))
            .unwrap();
        assert!((prefactor_bound_split(&s) - 0.12).abs() < 1e-15);

        // Everything randomized: λ_R = λ makes both tail terms vanish.
        let s0 = h
            .split_deterministic(SplitCriterion::DeterministicCount(0))
            .unwrap();
        assert!(prefactor_bound_split(&s0).abs() < 1e-15);

        // Everything deterministic equals the general bound on singletons.
        let h2 = ham("0.4 XY\n-0.2 ZZ\n0.1 YI");
        let s2 = h2
            .split_deterministic(SplitCriterion::DeterministicCount(3))
            .unwrap();
        let parts: Vec<Vec<Term>> = h2.terms().iter().map(|t| vec![*t]).collect();
        let general = prefactor_bound_general(&parts).unwrap();
        assert!((prefactor_bound_split(&s2) - general).abs() < 1e-12);
    }
}
