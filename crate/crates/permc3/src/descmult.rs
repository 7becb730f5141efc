//! Descending multiplications: commutative bilinear products on F₂ⁿ with
//! eᵢ² = 0 and eᵢeⱼ supported strictly above j. The associative ones are in
//! bijection with staircase-form C₃ permutation gates, which makes the table
//! a fast membership and classification oracle.

use std::fmt;

use thiserror::Error;

use crate::f2core::F2Vec;
use crate::permgate::{is_staircase, staircase_conditions, PermGate, Toffoli, ToffoliCircuit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DescMultError {
    #[error("circuit is not in staircase form")]
    NotStaircase,
    #[error("e{i}e{j} has support at {k} ≤ {j}, violating the descending property")]
    NotDescending { i: usize, j: usize, k: usize },
    #[error("multiplication is not associative: {0}")]
    NotAssociative(AssocWitness),
    #[error("permutation is not a staircase C3 gate: {0}")]
    NotStaircaseC3(String),
    #[error("n = {0} too large for a truth table")]
    TooLarge(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A failed instance of eᵢ(eⱼe_k) = (eᵢeⱼ)e_k. Indices name the failing
/// instance as written and need not be sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub lhs: F2Vec,
    pub rhs: F2Vec,
}

impl fmt::Display for AssocWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let AssocWitness { i, j, k, lhs, rhs } = self;
        write!(f, "e{i}(e{j}e{k}) = {lhs} but (e{i}e{j})e{k} = {rhs}")
    }
}

/// Table of basis products eᵢeⱼ for i < j, extended bilinearly.
///
/// The descending property (support of eᵢeⱼ strictly above j) is enforced at
/// construction; associativity is a separate query because non-associative
/// tables are meaningful — they witness staircase circuits outside C₃.
#[derive(Clone, PartialEq, Eq)]
pub struct DescMult {
    n: usize,
    table: Vec<F2Vec>,
}

fn pair_idx(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - i * (i - 1) / 2 + (j - i - 1)
}

impl DescMult {
    /// The zero multiplication: every basis product vanishes.
    pub fn zero(n: usize) -> Self {
        let pairs = n * (n - 1) / 2;
        DescMult { n, table: vec![F2Vec::zero(n); pairs] }
    }

    /// Build from a function giving eᵢeⱼ for i < j; checks descending.
    pub fn from_fn(
        n: usize,
        f: impl Fn(usize, usize) -> F2Vec,
    ) -> Result<Self, DescMultError> {
        let mut m = Self::zero(n);
        for i in 1..n {
            for j in (i + 1)..n + 1 {
                m.set_basis_product(i, j, f(i, j))?;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn set_basis_product(&mut self, i: usize, j: usize, v: F2Vec) -> Result<(), DescMultError> {
        if let Some(k) = v.support().into_iter().find(|&k| k <= j) {
            return Err(DescMultError::NotDescending { i, j, k });
        }
        self.table[pair_idx(self.n, i, j)] = v;
        Ok(())
    }

    /// eᵢeⱼ; arguments in either order, eᵢeᵢ = 0 implicit.
    pub fn basis_product(&self, i: usize, j: usize) -> F2Vec {
        if i == j {
            return F2Vec::zero(self.n);
        }
        self.table[pair_idx(self.n, i.min(j), i.max(j))]
    }

    /// Bilinear extension to arbitrary vectors.
    pub fn product(&self, v: &F2Vec, w: &F2Vec) -> F2Vec {
        let mut acc = F2Vec::zero(self.n);
        for i in v.support() {
            for j in w.support() {
                acc.add_assign(&self.basis_product(i, j));
            }
        }
        acc
    }

    /// Π_{i∈S} eᵢ, folded in ascending index order. Requires |S| ≥ 1: the
    /// structure has no unit, so an empty product is undefined. For
    /// associative tables the fold order is immaterial.
    pub fn product_of_set(&self, indices: &[usize]) -> F2Vec {
        assert!(!indices.is_empty(), "product of an empty factor set is undefined");
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        let mut acc = F2Vec::basis(self.n, sorted[0]);
        for &i in &sorted[1..] {
            acc = self.product(&acc, &F2Vec::basis(self.n, i));
        }
        acc
    }

    /// Associativity over basis triples; bilinearity extends the check to
    /// arbitrary vectors. `Ok` is equivalent to the staircase circuit of
    /// this table lying in C₃.
    ///
    /// Commutativity is structural, so for a distinct triple i < j < k the
    /// instances collapse to one condition: the three pair-then-third
    /// products (eⱼe_k)eᵢ, (eᵢe_k)eⱼ, (eᵢeⱼ)e_k must all agree. Repeated
    /// indices reduce to eᵢ² = 0, leaving (eᵢeⱼ)eᵢ = (eᵢeⱼ)eⱼ = 0.
    pub fn is_associative(&self) -> Result<(), AssocWitness> {
        let n = self.n;
        for i in 1..=n {
            let e_i = F2Vec::basis(n, i);
            for j in (i + 1)..=n {
                let e_j = F2Vec::basis(n, j);
                let ij = self.basis_product(i, j);
                if !ij.is_zero() {
                    // e_i(e_i e_j) vs (e_i e_i)e_j = 0, and the mirror.
                    let lhs = self.product(&e_i, &ij);
                    if !lhs.is_zero() {
                        return Err(AssocWitness { i, j: i, k: j, lhs, rhs: F2Vec::zero(n) });
                    }
                    let rhs = self.product(&ij, &e_j);
                    if !rhs.is_zero() {
                        return Err(AssocWitness { i, j, k: j, lhs: F2Vec::zero(n), rhs });
                    }
                }
                for k in (j + 1)..=n {
                    let e_k = F2Vec::basis(n, k);
                    let jk_i = self.product(&self.basis_product(j, k), &e_i);
                    let ij_k = self.product(&ij, &e_k);
                    if jk_i != ij_k {
                        return Err(AssocWitness { i, j, k, lhs: jk_i, rhs: ij_k });
                    }
                    let ik_j = self.product(&self.basis_product(i, k), &e_j);
                    if ik_j != ij_k {
                        // Failing instance e_j(e_i e_k) ≠ (e_j e_i)e_k.
                        return Err(AssocWitness { i: j, j: i, k, lhs: ik_j, rhs: ij_k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Every triple product of basis vectors vanishes. Decides semi-
    /// Cliffordness of the corresponding staircase C₃ permutation, so the
    /// table must be associative.
    pub fn all_triples_zero(&self) -> Result<bool, DescMultError> {
        self.is_associative().map_err(DescMultError::NotAssociative)?;
        Ok(self.all_triples_zero_unchecked())
    }

    /// The triple scan alone, for callers that have already checked
    /// associativity (the survey's hot loop).
    pub(crate) fn all_triples_zero_unchecked(&self) -> bool {
        let n = self.n;
        for i in 1..=n {
            for j in (i + 1)..=n {
                let ij = self.basis_product(i, j);
                if ij.is_zero() {
                    continue;
                }
                for k in (j + 1)..=n {
                    if !self.product(&ij, &F2Vec::basis(n, k)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Largest |S| with Π_{i∈S} eᵢ ≠ 0; at least 1 since basis vectors are
    /// nonzero. Depth-first over nonzero partial products — extensions of a
    /// zero product stay zero by associativity, so pruning is sound.
    pub fn max_nonzero_product_size(&self) -> Result<usize, DescMultError> {
        self.is_associative().map_err(DescMultError::NotAssociative)?;
        let n = self.n;
        let mut best = 1;
        let mut stack: Vec<(usize, F2Vec, usize)> = (1..=n)
            .map(|i| (i, F2Vec::basis(n, i), 1))
            .collect();
        while let Some((last, prod, size)) = stack.pop() {
            best = best.max(size);
            for j in (last + 1)..=n {
                let next = self.product(&prod, &F2Vec::basis(n, j));
                if !next.is_zero() {
                    stack.push((j, next, size + 1));
                }
            }
        }
        Ok(best)
    }

    /// The staircase C₃ permutation of the bijection: the image of Σ_{i∈S} eᵢ
    /// is the sum of Π_{i∈T} eᵢ over all nonempty T ⊆ S. Requires an
    /// associative table.
    pub fn to_perm(&self) -> Result<PermGate, DescMultError> {
        self.is_associative().map_err(DescMultError::NotAssociative)?;
        let n = self.n;
        if n > 20 {
            return Err(DescMultError::TooLarge(n));
        }
        // pi(v + e_i) = pi(v) + e_i·pi(v) + e_i with i below the support of
        // v; these are the conjugate maps, which commute, so building each
        // subset from its lowest element is sound.
        let size = 1usize << n;
        let mut by_bits: Vec<F2Vec> = vec![F2Vec::zero(n); size];
        for b in 1..size {
            let i = b.trailing_zeros() as usize + 1;
            let prev = by_bits[b & (b - 1)];
            let e_i = F2Vec::basis(n, i);
            by_bits[b] = prev.add(&self.product(&e_i, &prev)).add(&e_i);
        }
        let mut table = vec![0u64; size];
        for (b, out) in by_bits.iter().enumerate() {
            let v = F2Vec::from_bits(n, b as u64);
            table[v.to_state_index() as usize] = out.to_state_index();
        }
        PermGate::from_table(n, table)
            .map_err(|e| DescMultError::NotStaircaseC3(format!("image is not a bijection: {e}")))
    }

    /// Pretty, parseable text form: one `e i j = k1 k2 ...` line per pair.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in 1..self.n {
            for j in (i + 1)..=self.n {
                let support = self.basis_product(i, j).support();
                let rhs: Vec<String> = support.iter().map(usize::to_string).collect();
                out.push_str(&format!("e {i} {j} ={}{}\n",
                    if rhs.is_empty() { "" } else { " " },
                    rhs.join(" ")));
            }
        }
        out
    }
}

impl fmt::Debug for DescMult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DescMult(n={})\n{}", self.n, self.render())
    }
}

/// Read off the table of a staircase circuit: component k of eᵢeⱼ is set iff
/// TOF(i,j,k) appears. Descending holds by the staircase shape.
pub fn from_staircase(circuit: &ToffoliCircuit, n: usize) -> Result<DescMult, DescMultError> {
    if !is_staircase(circuit) || circuit.max_index() > n {
        return Err(DescMultError::NotStaircase);
    }
    let mut m = DescMult::zero(n);
    for g in &circuit.gates {
        let (i, j) = g.controls();
        let idx = pair_idx(n, i, j);
        let mut v = m.table[idx];
        v.set(g.target(), true);
        m.table[idx] = v;
    }
    Ok(m)
}

/// Eq. of the bijection in the permutation-to-table direction:
/// eᵢeⱼ = π(eᵢ+eⱼ) + eᵢ + eⱼ. The input must be a staircase C₃ permutation;
/// the staircase conditions, the descending property of the table, and its
/// associativity are all verified.
pub fn perm_to_mult(perm: &PermGate) -> Result<DescMult, DescMultError> {
    if !staircase_conditions(perm) {
        return Err(DescMultError::NotStaircaseC3(
            "staircase conditions fail (must fix 0, fix every basis vector, and preserve the first two ones)".into(),
        ));
    }
    let n = perm.n();
    let mut m = DescMult::zero(n);
    for i in 1..n {
        for j in (i + 1)..=n {
            let e_ij = F2Vec::from_indices(n, &[i, j]);
            let v = perm.apply_vec(&e_ij).add(&e_ij);
            m.set_basis_product(i, j, v)
                .map_err(|e| DescMultError::NotStaircaseC3(e.to_string()))?;
        }
    }
    m.is_associative()
        .map_err(|w| DescMultError::NotStaircaseC3(format!("not associative: {w}")))?;
    Ok(m)
}

/// The staircase circuit of an associative table, without the permutation
/// detour: one TOF(i,j,k) per set component k of eᵢeⱼ, canonical order.
pub fn mult_to_staircase(m: &DescMult) -> Result<ToffoliCircuit, DescMultError> {
    m.is_associative().map_err(DescMultError::NotAssociative)?;
    let mut gates = Vec::new();
    for i in 1..m.n() {
        for j in (i + 1)..=m.n() {
            for k in m.basis_product(i, j).support() {
                gates.push(Toffoli::new(i, j, k));
            }
        }
    }
    gates.sort_by_key(|g| (g.target(), g.controls()));
    Ok(ToffoliCircuit::new(gates))
}

/// Parse the `e i j = k1 k2 ...` format. Missing pairs default to zero;
/// n is the largest index mentioned unless `n_hint` overrides it upward.
pub fn parse_mult_table(text: &str, n_hint: Option<usize>) -> Result<DescMult, DescMultError> {
    struct Entry {
        line: usize,
        i: usize,
        j: usize,
        support: Vec<usize>,
    }
    let mut entries: Vec<Entry> = Vec::new();
    let mut max_index = n_hint.unwrap_or(0);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| DescMultError::Parse { line: lineno + 1, reason };
        let rest = line
            .strip_prefix("e ")
            .or_else(|| line.strip_prefix("e\t"))
            .ok_or_else(|| err("expected `e i j = k1 k2 ...`".into()))?;
        let (lhs, rhs) = rest
            .split_once('=')
            .ok_or_else(|| err("missing `=`".into()))?;
        let parse_list = |s: &str| -> Result<Vec<usize>, DescMultError> {
            s.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| err(format!("bad index: {e}"))))
                .collect()
        };
        let pair = parse_list(lhs)?;
        let support = parse_list(rhs)?;
        if pair.len() != 2 || pair[0] >= pair[1] || pair[0] == 0 {
            return Err(err("left side must be `e i j` with 1 ≤ i < j".into()));
        }
        if support.contains(&0) {
            return Err(err("indices are 1-based".into()));
        }
        for &v in pair.iter().chain(&support) {
            max_index = max_index.max(v);
        }
        entries.push(Entry { line: lineno + 1, i: pair[0], j: pair[1], support });
    }
    if max_index < 2 {
        return Err(DescMultError::Parse { line: 0, reason: "empty table".into() });
    }
    let n = max_index;
    let mut m = DescMult::zero(n);
    for e in entries {
        m.set_basis_product(e.i, e.j, F2Vec::from_indices(n, &e.support))
            .map_err(|src| DescMultError::Parse { line: e.line, reason: src.to_string() })?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgate::circuit_to_perm;

    fn tof(a: usize, b: usize, c: usize) -> Toffoli {
        Toffoli::new(a, b, c)
    }

    /// e1e2 = e3 on n qubits.
    fn single_tof_mult(n: usize) -> DescMult {
        from_staircase(&ToffoliCircuit::new(vec![tof(1, 2, 3)]), n).unwrap()
    }

    /// The non-associative table of TOF(1,2,3) then TOF(3,4,5).
    fn pi_prime_mult() -> DescMult {
        from_staircase(&ToffoliCircuit::new(vec![tof(1, 2, 3), tof(3, 4, 5)]), 5).unwrap()
    }

    #[test]
    fn from_staircase_basics() {
        let m = from_staircase(&ToffoliCircuit::empty(), 3).unwrap();
        assert_eq!(m, DescMult::zero(3));

        let m = single_tof_mult(3);
        assert_eq!(m.basis_product(1, 2), F2Vec::basis(3, 3));
        assert!(m.basis_product(1, 3).is_zero());
        assert!(m.basis_product(2, 3).is_zero());
        assert!(m.is_associative().is_ok());
    }

    #[test]
    fn from_staircase_rejects_non_staircase() {
        let c = ToffoliCircuit::new(vec![tof(1, 2, 4), tof(1, 2, 3)]);
        assert_eq!(from_staircase(&c, 4).unwrap_err(), DescMultError::NotStaircase);
    }

    #[test]
    fn descending_enforced() {
        let err = DescMult::from_fn(3, |i, j| {
            if (i, j) == (1, 3) {
                F2Vec::basis(3, 2)
            } else {
                F2Vec::zero(3)
            }
        })
        .unwrap_err();
        assert_eq!(err, DescMultError::NotDescending { i: 1, j: 3, k: 2 });
    }

    #[test]
    fn pi_prime_association_witness() {
        let m = pi_prime_mult();
        let w = m.is_associative().unwrap_err();
        assert_eq!((w.i, w.j, w.k), (1, 2, 4));
        assert!(w.lhs.is_zero());
        assert_eq!(w.rhs, F2Vec::basis(5, 5));
    }

    #[test]
    fn product_rules() {
        let m = pi_prime_mult();
        let e1 = F2Vec::basis(5, 1);
        assert!(m.product(&e1, &e1).is_zero(), "v^2 = 0");
        // Left fold ascending: (e1 e2) e4 = e3 e4 = e5, legal to evaluate on
        // a non-associative table.
        assert_eq!(m.product_of_set(&[1, 2, 4]), F2Vec::basis(5, 5));
    }

    #[test]
    fn mult_to_perm_zero_is_identity() {
        let m = DescMult::zero(4);
        assert!(m.to_perm().unwrap().is_identity());
    }

    #[test]
    fn mult_to_perm_single_tof() {
        // Independent oracle: the image of every subset S under Eq-style
        // subset sums, evaluated directly over all 8 inputs.
        let m = single_tof_mult(3);
        let p = m.to_perm().unwrap();
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3)]);
        assert_eq!(p, circuit_to_perm(&c, 3).unwrap());
    }

    #[test]
    fn mult_to_perm_requires_associativity() {
        let m = pi_prime_mult();
        assert!(matches!(m.to_perm(), Err(DescMultError::NotAssociative(_))));
    }

    #[test]
    fn perm_to_mult_inverse_of_mult_to_perm() {
        let m = single_tof_mult(3);
        let p = m.to_perm().unwrap();
        assert_eq!(perm_to_mult(&p).unwrap(), m);

        let id = PermGate::identity(3);
        assert_eq!(perm_to_mult(&id).unwrap(), DescMult::zero(3));
    }

    #[test]
    fn perm_to_mult_rejects_translations() {
        let p = PermGate::from_fn(3, |v| {
            let mut w = v;
            w.flip(1);
            w
        });
        assert!(matches!(perm_to_mult(&p), Err(DescMultError::NotStaircaseC3(_))));
    }

    #[test]
    fn triples_and_max_product_size() {
        let zero = DescMult::zero(4);
        assert!(zero.all_triples_zero().unwrap());
        assert_eq!(zero.max_nonzero_product_size().unwrap(), 1);

        let m = single_tof_mult(3);
        assert!(m.all_triples_zero().unwrap());
        assert_eq!(m.max_nonzero_product_size().unwrap(), 2);

        assert!(matches!(
            pi_prime_mult().all_triples_zero(),
            Err(DescMultError::NotAssociative(_))
        ));
    }

    #[test]
    fn text_format_roundtrip() {
        let m = pi_prime_mult();
        let text = m.render();
        assert!(text.contains("e 1 2 = 3"));
        assert!(text.contains("e 1 3 =\n") || text.ends_with("e 4 5 =\n"));
        let parsed = parse_mult_table(&text, None).unwrap();
        assert_eq!(parsed, m);

        // Sparse form with a hint for trailing zero pairs.
        let sparse = parse_mult_table("e 1 2 = 3", Some(4)).unwrap();
        assert_eq!(sparse, single_tof_mult(4));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_mult_table("e 2 1 = 3", None).is_err());
        assert!(parse_mult_table("f 1 2 = 3", None).is_err());
        assert!(parse_mult_table("e 1 2 3", None).is_err());
        // Ascending pair but non-descending product.
        assert!(parse_mult_table("e 1 3 = 2", None).is_err());
    }

    /// All staircase circuits at the given n, as gate lists.
    fn all_staircase_circuits(n: usize) -> Vec<ToffoliCircuit> {
        let mut triples = Vec::new();
        for k in 3..=n {
            for i in 1..k {
                for j in (i + 1)..k {
                    triples.push(tof(i, j, k));
                }
            }
        }
        triples.sort_by_key(|g| (g.target(), g.controls()));
        (0..1u32 << triples.len())
            .map(|mask| {
                ToffoliCircuit::new(
                    triples
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| (mask >> *b) & 1 == 1)
                        .map(|(_, t)| *t)
                        .collect(),
                )
            })
            .collect()
    }

    #[test]
    fn bijection_roundtrip_exhaustive_small() {
        // Both round trips, exhaustively over every associative table at
        // n <= 4. With gates T1=(1,2,3), T2=(1,2,4), T3=(1,3,4), T4=(2,3,4),
        // expanding all triples by hand shows associativity is exactly
        // ¬(T1∧T3) ∧ ¬(T1∧T4): 10 of the 16 subsets.
        for n in 3..=4usize {
            let mut associative = 0;
            for c in all_staircase_circuits(n) {
                let m = from_staircase(&c, n).unwrap();
                if m.is_associative().is_err() {
                    continue;
                }
                associative += 1;
                let p = m.to_perm().unwrap();
                assert_eq!(perm_to_mult(&p).unwrap(), m);
                let back = m.to_perm().unwrap();
                assert_eq!(back, p);
                // The table's own circuit reproduces the permutation.
                assert_eq!(circuit_to_perm(&c, n).unwrap(), p);
            }
            match n {
                3 => assert_eq!(associative, 2),
                4 => assert_eq!(associative, 10),
                _ => {}
            }
        }
    }

    #[test]
    fn eq_laws_exhaustive_n4() {
        // The product law pi(v+w) = pi(v)+pi(w)+pi(v)pi(w), the inverse
        // formula with v_ij, and pi(v_ij) = e_i e_j.
        for c in all_staircase_circuits(4) {
            let m = from_staircase(&c, 4).unwrap();
            if m.is_associative().is_err() {
                continue;
            }
            let p = m.to_perm().unwrap();
            let n = 4;
            for vb in 0..16u64 {
                for wb in 0..16u64 {
                    let v = F2Vec::from_bits(n, vb);
                    let w = F2Vec::from_bits(n, wb);
                    let lhs = p.apply_vec(&v.add(&w));
                    let pv = p.apply_vec(&v);
                    let pw = p.apply_vec(&w);
                    let rhs = pv.add(&pw).add(&m.product(&pv, &pw));
                    assert_eq!(lhs, rhs, "product law at v={v}, w={w}");
                }
            }
            let inv = p.inverse();
            let v_ij = |i: usize, j: usize| {
                let e = F2Vec::from_indices(n, &[i, j]);
                inv.apply_vec(&e).add(&e)
            };
            for i in 1..=n {
                for j in (i + 1)..=n {
                    assert_eq!(p.apply_vec(&v_ij(i, j)), m.basis_product(i, j));
                }
            }
            // Inverse formula over every subset S.
            for sb in 0..16u64 {
                let s = F2Vec::from_bits(n, sb);
                let idx = s.support();
                let mut arg = s;
                for (a, &i) in idx.iter().enumerate() {
                    for &j in &idx[a + 1..] {
                        arg.add_assign(&v_ij(i, j));
                    }
                }
                assert_eq!(p.apply_vec(&arg), s, "inverse formula at S={s}");
            }
        }
    }

    #[test]
    fn inverse_coords_degree_at_most_two() {
        use crate::anf::perm_coords;
        for c in all_staircase_circuits(4) {
            let m = from_staircase(&c, 4).unwrap();
            if m.is_associative().is_err() {
                continue;
            }
            let p = m.to_perm().unwrap();
            let rep = perm_coords(&p.inverse());
            assert!(rep.max_degree().unwrap_or(0) <= 2);
        }
    }
}
