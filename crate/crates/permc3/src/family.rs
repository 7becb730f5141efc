//! The U_k family: staircase C₃ permutation gates on 2^k − 1 qubits built
//! from the disjoint-subset-union multiplication. Each U_k is in C₃ while
//! its inverse falls outside C_k, which makes the family the sharp witness
//! for the degree lower bound.
//!
//! Qubits are labeled by nonempty subsets of [k] through binary expansion:
//! qubit i carries the subset whose element j corresponds to bit j−1 of i,
//! so singleton {j} sits on qubit 2^(j−1) and disjoint unions are integer
//! sums. Everything here is combinatorial in k; truth tables only appear in
//! the k ≤ 4 cross-checks.

use serde::Serialize;

use crate::anf::AnfPoly;
use crate::descmult::{from_staircase, perm_to_mult, DescMult};
use crate::f2core::F2Vec;
use crate::hierarchy::refute_level;
use crate::permgate::{circuit_to_perm, is_staircase, Toffoli, ToffoliCircuit};

/// The bijection between qubit indices [1..2^k−1] and nonempty subsets of [k].
#[derive(Clone, Copy, Debug)]
pub struct SubsetLabeling {
    k: usize,
}

impl SubsetLabeling {
    pub fn new(k: usize) -> Self {
        assert!((2..=6).contains(&k), "k out of the supported range");
        SubsetLabeling { k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of qubits, 2^k − 1.
    pub fn n(&self) -> usize {
        (1 << self.k) - 1
    }

    /// Qubit index of a nonempty subset mask over [k].
    pub fn qubit(&self, subset_mask: u64) -> usize {
        assert!(subset_mask != 0 && subset_mask < (1 << self.k), "bad subset");
        subset_mask as usize
    }

    /// Subset mask of a qubit index.
    pub fn subset(&self, qubit: usize) -> u64 {
        assert!((1..=self.n()).contains(&qubit), "bad qubit");
        qubit as u64
    }
}

/// The staircase circuit of U_k: one TOF(i, j, i+j) for every pair i < j of
/// qubit labels with disjoint binary supports, targets nondecreasing.
pub fn uk_circuit(k: usize) -> ToffoliCircuit {
    let labeling = SubsetLabeling::new(k);
    let n = labeling.n();
    let mut gates = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if i & j == 0 {
                gates.push(Toffoli::new(i, j, i + j));
            }
        }
    }
    gates.sort_by_key(|g| (g.target(), g.controls()));
    ToffoliCircuit::new(gates)
}

/// Gate count of `uk_circuit`: unordered pairs of disjoint nonempty subsets
/// of [k], which is (3^k − 2^(k+1) + 1) / 2.
pub fn uk_gate_count(k: usize) -> usize {
    (3usize.pow(k as u32) - (1 << (k + 1)) + 1) / 2
}

/// The descending multiplication of U_k: e_S e_T = e_{S⊔T} for disjoint
/// S, T and zero otherwise.
pub fn uk_mult(k: usize) -> DescMult {
    let labeling = SubsetLabeling::new(k);
    let n = labeling.n();
    DescMult::from_fn(n, |i, j| {
        if i & j == 0 {
            F2Vec::basis(n, i + j)
        } else {
            F2Vec::zero(n)
        }
    })
    .expect("disjoint-union table is descending (i + j > j)")
}

/// All partitions of the nonempty set `mask` into nonempty blocks.
fn set_partitions(mask: u64) -> Vec<Vec<u64>> {
    assert!(mask != 0);
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    if rest == 0 {
        return vec![vec![low]];
    }
    let mut out = Vec::new();
    // The lowest element joins each possible block; iterate submasks of rest.
    let mut sub = rest;
    loop {
        let block = low | sub;
        let remainder = rest ^ sub;
        if remainder == 0 {
            out.push(vec![block]);
        } else {
            for mut tail in set_partitions(remainder) {
                tail.insert(0, block);
                out.push(tail);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// The coordinate polynomial π_S of U_k: the sum over all partitions
/// {T₁,…,T_m} of S of the monomial a_{T₁}···a_{T_m}. Purely combinatorial,
/// valid for any k the labeling supports.
pub fn uk_coordinate(k: usize, subset_mask: u64) -> AnfPoly {
    let labeling = SubsetLabeling::new(k);
    let n = labeling.n();
    let mut monomials: Vec<Vec<usize>> = Vec::new();
    for partition in set_partitions(subset_mask) {
        monomials.push(partition.iter().map(|&b| labeling.qubit(b)).collect());
    }
    let refs: Vec<&[usize]> = monomials.iter().map(Vec::as_slice).collect();
    AnfPoly::from_monomials(n, &refs)
}

/// The inverse coordinate π′_S = a_S + Σ a_{T₁} a_{T₂} over unordered pairs
/// with T₁ ⊔ T₂ = S.
pub fn uk_inverse_coordinate(k: usize, subset_mask: u64) -> AnfPoly {
    let labeling = SubsetLabeling::new(k);
    let n = labeling.n();
    let mut monomials: Vec<Vec<usize>> = vec![vec![labeling.qubit(subset_mask)]];
    let mut sub = (subset_mask - 1) & subset_mask;
    while sub != 0 {
        let other = subset_mask ^ sub;
        if sub > other {
            monomials.push(vec![labeling.qubit(sub), labeling.qubit(other)]);
        }
        sub = (sub - 1) & subset_mask;
    }
    let refs: Vec<&[usize]> = monomials.iter().map(Vec::as_slice).collect();
    AnfPoly::from_monomials(n, &refs)
}

/// Machine-checkable certificate of the U_k properties.
#[derive(Clone, Debug, Serialize)]
pub struct UkCertificate {
    pub k: usize,
    pub n: usize,
    pub gate_count: usize,
    /// Associativity of the disjoint-union table, hence U_k ∈ C₃.
    pub in_c3: bool,
    /// Degree of the top coordinate of U_k = degree certificate that
    /// U_k⁻¹ ∉ C_d at this d.
    pub inverse_refuted_at: usize,
    /// Whether the truth-table route was run and agreed (k ≤ 4).
    pub truth_table_cross_checked: bool,
}

impl UkCertificate {
    pub fn holds_at(&self, k: usize) -> bool {
        self.in_c3 && self.inverse_refuted_at == k
    }
}

/// Certify U_k ∈ C₃ and U_k⁻¹ ∉ C_k for 3 ≤ k ≤ 5.
///
/// The C₃ half is the associativity of the table; the refutation half is the
/// degree-k monomial a_{{1}}···a_{{k}} in the top coordinate of U_k. For
/// k ≤ 4 the whole thing is cross-checked on truth tables: the circuit, the
/// table-induced permutation, the analytic coordinates, and the inverse
/// degree must all agree. k = 5 (n = 31) is analytic only.
pub fn verify_uk(k: usize) -> UkCertificate {
    assert!((3..=5).contains(&k), "verify_uk supports 3 <= k <= 5");
    let labeling = SubsetLabeling::new(k);
    let n = labeling.n();
    let circuit = uk_circuit(k);
    let mult = uk_mult(k);

    let in_c3 = mult.is_associative().is_ok() && is_staircase(&circuit);
    let full: u64 = (1 << k) - 1;
    let top = uk_coordinate(k, full);
    let inverse_refuted_at = top.degree().expect("top coordinate is nonzero");

    let mut cross_checked = false;
    if k <= 4 {
        let perm = circuit_to_perm(&circuit, n).expect("indices in range");
        let via_table = mult.to_perm().expect("associative");
        assert_eq!(perm, via_table, "circuit and table disagree");
        assert_eq!(perm_to_mult(&perm).expect("staircase C3"), mult);
        assert_eq!(
            from_staircase(&circuit, n).expect("staircase"),
            mult,
            "gate set and table disagree"
        );
        // Analytic coordinates against interpolation.
        let rep = crate::anf::perm_coords(&perm);
        let inv_rep = crate::anf::perm_coords(&perm.inverse());
        for s in 1..=full {
            let q = labeling.qubit(s);
            assert_eq!(rep.coord(q), &uk_coordinate(k, s), "coordinate {q}");
            assert_eq!(
                inv_rep.coord(q),
                &uk_inverse_coordinate(k, s),
                "inverse coordinate {q}"
            );
        }
        // Inverse-degree refutation on the truth table.
        assert_eq!(refute_level(&perm.inverse()), Some(inverse_refuted_at));
        cross_checked = true;
    }

    UkCertificate {
        k,
        n,
        gate_count: circuit.len(),
        in_c3,
        inverse_refuted_at,
        truth_table_cross_checked: cross_checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::is_c3_perm;

    #[test]
    fn u3_circuit_is_the_paper_gate_set() {
        let c = uk_circuit(3);
        assert!(is_staircase(&c));
        assert_eq!(c.len(), 6);
        let expected: Vec<Toffoli> = [
            (1, 2, 3),
            (1, 4, 5),
            (2, 4, 6),
            (1, 6, 7),
            (2, 5, 7),
            (3, 4, 7),
        ]
        .iter()
        .map(|&(a, b, t)| Toffoli::new(a, b, t))
        .collect();
        let mut got = c.gates.clone();
        let mut want = expected;
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn gate_counts() {
        assert_eq!(uk_circuit(3).len(), 6);
        assert_eq!(uk_gate_count(3), 6);
        assert_eq!(uk_circuit(4).len(), 25);
        assert_eq!(uk_gate_count(4), 25);
        assert_eq!(uk_circuit(5).len(), uk_gate_count(5));
    }

    #[test]
    fn u3_mult_examples() {
        let m = uk_mult(3);
        assert_eq!(m.basis_product(1, 2), F2Vec::basis(7, 3));
        assert_eq!(m.basis_product(3, 4), F2Vec::basis(7, 7));
        assert!(m.basis_product(3, 5).is_zero(), "{{1,2}} and {{1,3}} intersect");
    }

    #[test]
    fn uk_mult_associative_up_to_5() {
        for k in 2..=5 {
            assert!(uk_mult(k).is_associative().is_ok(), "k = {k}");
        }
    }

    #[test]
    fn u3_seventh_coordinate_matches_figure() {
        // Singleton {3} sits on qubit 4.
        assert_eq!(uk_coordinate(3, 0b100).to_string(), "a4");
        let top = uk_coordinate(3, 0b111);
        assert_eq!(top.to_string(), "a7 + a1*a6 + a2*a5 + a3*a4 + a1*a2*a4");
        assert_eq!(top.degree(), Some(3));
    }

    #[test]
    fn top_coordinate_has_bell_many_monomials() {
        // Partitions of [k]: Bell numbers 5, 15, 52.
        for (k, bell) in [(3usize, 5usize), (4, 15), (5, 52)] {
            let full = (1u64 << k) - 1;
            assert_eq!(uk_coordinate(k, full).monomial_count(), bell, "k = {k}");
        }
    }

    #[test]
    fn inverse_coordinate_shape() {
        // pi'_S = a_S + sum over unordered splittings.
        let p = uk_inverse_coordinate(3, 0b111);
        assert_eq!(p.to_string(), "a7 + a1*a6 + a2*a5 + a3*a4");
        assert_eq!(uk_inverse_coordinate(3, 0b1).to_string(), "a1");
    }

    #[test]
    fn u3_truth_table_agrees_with_table_route() {
        let c = uk_circuit(3);
        let perm = circuit_to_perm(&c, 7).unwrap();
        assert_eq!(perm, uk_mult(3).to_perm().unwrap());
        assert!(crate::permgate::staircase_conditions(&perm));
    }

    #[test]
    fn certificate_k3() {
        let cert = verify_uk(3);
        assert!(cert.in_c3);
        assert_eq!(cert.inverse_refuted_at, 3);
        assert!(cert.truth_table_cross_checked);
        assert!(cert.holds_at(3));
    }

    #[test]
    fn u3_in_c3_but_inverse_not() {
        let perm = circuit_to_perm(&uk_circuit(3), 7).unwrap();
        assert!(is_c3_perm(&perm).is_ok());
        assert!(is_c3_perm(&perm.inverse()).is_err());
    }

    #[test]
    fn sharpness_of_product_size() {
        for k in 3..=5 {
            assert_eq!(uk_mult(k).max_nonzero_product_size().unwrap(), k, "k = {k}");
        }
    }

    #[test]
    fn product_of_set_matches_monomial_positions_k3() {
        // The nonzero products are exactly the monomial position vectors of
        // the coordinates (checked over every nonempty qubit subset).
        let m = uk_mult(3);
        let labeling = SubsetLabeling::new(3);
        let n = labeling.n();
        let perm = m.to_perm().unwrap();
        let rep = crate::anf::perm_coords(&perm);
        for set_bits in 1u64..(1 << n) {
            let qubits = F2Vec::from_bits(n, set_bits).support();
            let prod = m.product_of_set(&qubits);
            let mut positions = F2Vec::zero(n);
            for out in 1..=n {
                if rep.coord(out).contains_monomial(&qubits) {
                    positions.set(out, true);
                }
            }
            assert_eq!(prod, positions, "subset {qubits:?}");
        }
    }
}
