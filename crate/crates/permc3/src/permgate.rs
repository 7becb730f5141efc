//! Permutation gates as truth tables, Toffoli circuits and the staircase
//! form, affine (Clifford) permutation detection, and the shared circuit
//! text format.
//!
//! Circuits are stored in application order: the first gate in the list is
//! applied first. Product notation in the literature is right-to-left, so a
//! product written `TOF_{3,4,5} TOF_{1,2,3}` is the list
//! `[TOF(1,2,3), TOF(3,4,5)]` here. The parser and printer both use
//! application order.

use std::fmt;

use thiserror::Error;

use crate::anf::{perm_coords, AnfPoly};
use crate::f2core::{F2Mat, F2Vec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("qubit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("table of length {0} is not a power of two")]
    BadTableLength(usize),
    #[error("table is not a bijection: value {0} appears twice")]
    NotBijective(u64),
    #[error("coordinate {coord} of the inverse contains the non-staircase term {term}")]
    NotStaircase { coord: usize, term: String },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("gate {0} is not a permutation gate")]
    NotPermutationGate(String),
    #[error("gate {0} is not a Toffoli gate")]
    NotToffoli(String),
}

/// A permutation of the 2ⁿ basis states, stored as a truth table.
///
/// `table[idx]` is the state index the gate sends `|idx⟩` to, under the
/// shared convention that qubit 1 is the most significant index bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermGate {
    n: usize,
    table: Vec<u64>,
}

impl PermGate {
    pub fn identity(n: usize) -> Self {
        PermGate { n, table: (0..1u64 << n).collect() }
    }

    /// Validates that the table is a bijection on [0, 2ⁿ).
    pub fn from_table(n: usize, table: Vec<u64>) -> Result<Self, PermError> {
        if table.len() != 1usize << n {
            return Err(PermError::BadTableLength(table.len()));
        }
        let mut seen = vec![false; table.len()];
        for &v in &table {
            if v >= table.len() as u64 {
                return Err(PermError::NotBijective(v));
            }
            if seen[v as usize] {
                return Err(PermError::NotBijective(v));
            }
            seen[v as usize] = true;
        }
        Ok(PermGate { n, table })
    }

    /// Build from a bijective map on vectors. Panics if `f` is not injective.
    pub fn from_fn(n: usize, f: impl Fn(F2Vec) -> F2Vec) -> Self {
        let table: Vec<u64> = (0..1u64 << n)
            .map(|idx| f(F2Vec::from_state_index(n, idx)).to_state_index())
            .collect();
        Self::from_table(n, table).expect("map must be a bijection")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn apply(&self, idx: u64) -> u64 {
        self.table[idx as usize]
    }

    pub fn apply_vec(&self, v: &F2Vec) -> F2Vec {
        F2Vec::from_state_index(self.n, self.apply(v.to_state_index()))
    }

    /// Composition: apply `other` first, then `self`.
    pub fn compose(&self, other: &PermGate) -> PermGate {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        PermGate {
            n: self.n,
            table: other.table.iter().map(|&v| self.table[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> PermGate {
        let mut table = vec![0u64; self.table.len()];
        for (idx, &v) in self.table.iter().enumerate() {
            table[v as usize] = idx as u64;
        }
        PermGate { n: self.n, table }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i as u64 == v)
    }

    /// Extend with `m` untouched qubits below (π ⊗ I).
    pub fn tensor_identity(&self, m: usize) -> PermGate {
        let n = self.n + m;
        let low = 1u64 << m;
        let mut table = Vec::with_capacity(1 << n);
        for hi in 0..self.table.len() as u64 {
            for lo in 0..low {
                table.push((self.table[hi as usize] << m) | lo);
            }
        }
        PermGate { n, table }
    }
}

impl fmt::Debug for PermGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGate(n={}, {:?})", self.n, self.table)
    }
}

/// A Toffoli gate TOF(i, j, k): controls i < j, target k ∉ {i, j}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Toffoli {
    c1: usize,
    c2: usize,
    target: usize,
}

impl Toffoli {
    /// Controls are normalized to c1 < c2.
    pub fn new(a: usize, b: usize, target: usize) -> Self {
        assert!(a != b, "controls must differ");
        assert!(target != a && target != b, "target must differ from controls");
        Toffoli { c1: a.min(b), c2: a.max(b), target }
    }

    pub fn controls(&self) -> (usize, usize) {
        (self.c1, self.c2)
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Both controls below the target (the i < j < k shape of staircase gates).
    pub fn controls_below_target(&self) -> bool {
        self.c2 < self.target
    }

    pub fn max_index(&self) -> usize {
        self.c2.max(self.target)
    }
}

impl fmt::Debug for Toffoli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TOF({},{},{})", self.c1, self.c2, self.target)
    }
}

/// An ordered list of Toffoli gates, first-applied first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ToffoliCircuit {
    pub gates: Vec<Toffoli>,
}

impl ToffoliCircuit {
    pub fn new(gates: Vec<Toffoli>) -> Self {
        ToffoliCircuit { gates }
    }

    pub fn empty() -> Self {
        ToffoliCircuit { gates: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.gates.iter().map(Toffoli::max_index).max().unwrap_or(0)
    }

    /// Same gates sorted into the canonical staircase order: nondecreasing
    /// target, then lexicographic controls. Same-target Toffolis commute,
    /// so this does not change the permutation of a staircase circuit.
    pub fn canonical_order(&self) -> ToffoliCircuit {
        let mut gates = self.gates.clone();
        gates.sort_by_key(|g| (g.target, g.c1, g.c2));
        ToffoliCircuit { gates }
    }

    pub fn to_gates(&self) -> Vec<Gate> {
        self.gates
            .iter()
            .map(|g| Gate::Tof { c1: g.c1, c2: g.c2, target: g.target })
            .collect()
    }
}

impl fmt::Debug for ToffoliCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.gates).finish()
    }
}

/// The permutation |v⟩ ↦ |Mv + w⟩ with M invertible; exactly the Clifford
/// permutations.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineMap {
    mat: F2Mat,
    shift: F2Vec,
}

impl AffineMap {
    pub fn new(mat: F2Mat, shift: F2Vec) -> Self {
        assert_eq!(mat.n(), shift.n(), "dimension mismatch");
        assert!(mat.is_invertible(), "affine map requires invertible matrix");
        AffineMap { mat, shift }
    }

    pub fn identity(n: usize) -> Self {
        AffineMap { mat: F2Mat::identity(n), shift: F2Vec::zero(n) }
    }

    /// Pure translation v ↦ v + w.
    pub fn translation(w: F2Vec) -> Self {
        AffineMap { mat: F2Mat::identity(w.n()), shift: w }
    }

    /// Pure linear map v ↦ Mv.
    pub fn linear(mat: F2Mat) -> Self {
        let n = mat.n();
        AffineMap::new(mat, F2Vec::zero(n))
    }

    pub fn n(&self) -> usize {
        self.shift.n()
    }

    pub fn mat(&self) -> &F2Mat {
        &self.mat
    }

    pub fn shift(&self) -> &F2Vec {
        &self.shift
    }

    pub fn apply(&self, v: &F2Vec) -> F2Vec {
        self.mat.mat_vec(v).add(&self.shift)
    }

    /// Apply `other` first, then `self`: v ↦ M₁(M₂v + w₂) + w₁.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            mat: self.mat.mat_mul(&other.mat),
            shift: self.mat.mat_vec(&other.shift).add(&self.shift),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.mat.invert().expect("invertible by invariant");
        let shift = inv.mat_vec(&self.shift);
        AffineMap { mat: inv, shift }
    }

    pub fn to_perm(&self) -> PermGate {
        PermGate::from_fn(self.n(), |v| self.apply(&v))
    }

    pub fn is_identity(&self) -> bool {
        self.mat == F2Mat::identity(self.n()) && self.shift.is_zero()
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap(w={}, M={:?})", self.shift, self.mat)
    }
}

/// Apply the circuit to a permutation table, first gate first.
pub fn circuit_to_perm(circuit: &ToffoliCircuit, n: usize) -> Result<PermGate, PermError> {
    for g in &circuit.gates {
        let max = g.max_index();
        if max > n {
            return Err(PermError::IndexOutOfRange { index: max, n });
        }
    }
    let mut table: Vec<u64> = (0..1u64 << n).collect();
    for g in &circuit.gates {
        let c1 = 1u64 << (n - g.c1);
        let c2 = 1u64 << (n - g.c2);
        let t = 1u64 << (n - g.target);
        for entry in &mut table {
            if *entry & c1 != 0 && *entry & c2 != 0 {
                *entry ^= t;
            }
        }
    }
    Ok(PermGate { n, table })
}

/// Staircase form: pairwise distinct gates, each with both controls below
/// its target, targets nondecreasing in application order.
pub fn is_staircase(circuit: &ToffoliCircuit) -> bool {
    let gates = &circuit.gates;
    if !gates.iter().all(Toffoli::controls_below_target) {
        return false;
    }
    if !gates.windows(2).all(|w| w[0].target() <= w[1].target()) {
        return false;
    }
    // Distinctness: quadratic is fine at desk scale.
    for (i, g) in gates.iter().enumerate() {
        if gates[i + 1..].contains(g) {
            return false;
        }
    }
    true
}

/// Read the staircase circuit of a permutation from the coordinates of its
/// inverse: succeeds iff coordinate k is a_k plus a sum of a_i a_j terms
/// with i < j < k, emitting TOF(i,j,k) per term in canonical order.
pub fn to_staircase(perm: &PermGate) -> Result<ToffoliCircuit, PermError> {
    let n = perm.n();
    let inv_rep = perm_coords(&perm.inverse());
    let mut gates = Vec::new();
    for k in 1..=n {
        let coord = inv_rep.coord(k);
        let linear = AnfPoly::var(n, k);
        let quad = coord.add(&linear);
        // Remaining terms must all be a_i a_j with i < j < k.
        for mask in quad.monomial_masks() {
            if mask.count_ones() != 2 {
                return Err(PermError::NotStaircase {
                    coord: k,
                    term: term_string(mask),
                });
            }
            let i = mask.trailing_zeros() as usize + 1;
            let j = 63 - mask.leading_zeros() as usize + 1;
            if j >= k {
                return Err(PermError::NotStaircase {
                    coord: k,
                    term: term_string(mask),
                });
            }
            gates.push(Toffoli::new(i, j, k));
        }
        if !coord.contains_monomial(&[k]) {
            // The linear part a_k is missing entirely.
            return Err(PermError::NotStaircase { coord: k, term: format!("a{k}") });
        }
    }
    // Already sorted by target; order controls lexicographically within a target.
    gates.sort_by_key(|g| (g.target, g.c1, g.c2));
    Ok(ToffoliCircuit::new(gates))
}

fn term_string(mask: u64) -> String {
    let mut vars = Vec::new();
    let mut bits = mask;
    while bits != 0 {
        vars.push(format!("a{}", bits.trailing_zeros() + 1));
        bits &= bits - 1;
    }
    if vars.is_empty() {
        "1".to_string()
    } else {
        vars.join("*")
    }
}

/// Detect a Clifford permutation: Some(M, w) iff every coordinate has degree
/// ≤ 1, in which case π(v) = Mv + w for all v.
pub fn as_affine(perm: &PermGate) -> Option<AffineMap> {
    let n = perm.n();
    let w = perm.apply_vec(&F2Vec::zero(n));
    let cols: Vec<F2Vec> = (1..=n)
        .map(|i| perm.apply_vec(&F2Vec::basis(n, i)).add(&w))
        .collect();
    let mat = F2Mat::from_cols(&cols);
    // Candidate built from 0 and the basis vectors; affinity must be checked
    // on every input.
    for idx in 0..perm.size() as u64 {
        let v = F2Vec::from_state_index(n, idx);
        if perm.apply_vec(&v) != mat.mat_vec(&v).add(&w) {
            return None;
        }
    }
    Some(AffineMap::new(mat, w))
}

/// The three staircase conditions on a permutation known to be in C₃:
/// fixes 0, fixes every basis vector, and preserves the positions of the
/// first two ones of every weight-≥2 input.
///
/// Equivalent to staircase form only under the C₃ hypothesis; outside C₃
/// the conditions are necessary but not claimed sufficient.
pub fn staircase_conditions(perm: &PermGate) -> bool {
    let n = perm.n();
    if !perm.apply_vec(&F2Vec::zero(n)).is_zero() {
        return false;
    }
    for i in 1..=n {
        let e = F2Vec::basis(n, i);
        if perm.apply_vec(&e) != e {
            return false;
        }
    }
    for idx in 0..perm.size() as u64 {
        let v = F2Vec::from_state_index(n, idx);
        if v.weight() < 2 {
            continue;
        }
        let w = perm.apply_vec(&v);
        let first_two = |x: &F2Vec| {
            let s = x.support();
            (s[0], s[1])
        };
        if w.weight() < 2 || first_two(&v) != first_two(&w) {
            return false;
        }
    }
    true
}

/// A gate in the shared circuit text format. TOF/CNOT/X are permutation
/// gates; the rest exist for the dense simulator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gate {
    X(usize),
    Z(usize),
    H(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Tof { c1: usize, c2: usize, target: usize },
    Ccz(usize, usize, usize),
    Cswap { control: usize, a: usize, b: usize },
}

impl Gate {
    pub fn max_index(&self) -> usize {
        match *self {
            Gate::X(k) | Gate::Z(k) | Gate::H(k) => k,
            Gate::Cnot { control, target } => control.max(target),
            Gate::Cz(a, b) => a.max(b),
            Gate::Tof { c1, c2, target } => c1.max(c2).max(target),
            Gate::Ccz(a, b, c) => a.max(b).max(c),
            Gate::Cswap { control, a, b } => control.max(a).max(b),
        }
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Cnot { .. } | Gate::Tof { .. })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::X(k) => write!(f, "X {k}"),
            Gate::Z(k) => write!(f, "Z {k}"),
            Gate::H(k) => write!(f, "H {k}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Tof { c1, c2, target } => write!(f, "TOF {c1} {c2} {target}"),
            Gate::Ccz(a, b, c) => write!(f, "CCZ {a} {b} {c}"),
            Gate::Cswap { control, a, b } => write!(f, "CSWAP {control} {a} {b}"),
        }
    }
}

/// Parse the circuit text format: one gate per line in application order,
/// 1-based qubit indices, `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<Vec<Gate>, PermError> {
    let mut gates = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let op = parts.next().unwrap().to_ascii_uppercase();
        let args: Result<Vec<usize>, _> = parts.map(str::parse::<usize>).collect();
        let err = |reason: String| PermError::Parse { line: lineno + 1, reason };
        let args = args.map_err(|e| err(format!("bad index: {e}")))?;
        if args.iter().any(|&a| a == 0) {
            return Err(err("qubit indices are 1-based".into()));
        }
        let arity = |want: usize| -> Result<(), PermError> {
            if args.len() == want {
                Ok(())
            } else {
                Err(err(format!("{op} expects {want} indices, got {}", args.len())))
            }
        };
        let distinct = |vals: &[usize]| -> Result<(), PermError> {
            for (i, a) in vals.iter().enumerate() {
                if vals[i + 1..].contains(a) {
                    return Err(err(format!("{op} indices must be distinct")));
                }
            }
            Ok(())
        };
        let gate = match op.as_str() {
            "X" => {
                arity(1)?;
                Gate::X(args[0])
            }
            "Z" => {
                arity(1)?;
                Gate::Z(args[0])
            }
            "H" => {
                arity(1)?;
                Gate::H(args[0])
            }
            "CNOT" => {
                arity(2)?;
                distinct(&args)?;
                Gate::Cnot { control: args[0], target: args[1] }
            }
            "CZ" => {
                arity(2)?;
                distinct(&args)?;
                Gate::Cz(args[0], args[1])
            }
            "TOF" => {
                arity(3)?;
                distinct(&args)?;
                Gate::Tof { c1: args[0].min(args[1]), c2: args[0].max(args[1]), target: args[2] }
            }
            "CCZ" => {
                arity(3)?;
                distinct(&args)?;
                Gate::Ccz(args[0], args[1], args[2])
            }
            "CSWAP" => {
                arity(3)?;
                distinct(&args)?;
                Gate::Cswap { control: args[0], a: args[1], b: args[2] }
            }
            other => return Err(err(format!("unknown gate {other}"))),
        };
        gates.push(gate);
    }
    Ok(gates)
}

/// Render gates in the text format, one per line in application order.
pub fn render_circuit(gates: &[Gate]) -> String {
    let mut out = String::new();
    for g in gates {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

/// Interpret a parsed gate list as a permutation gate (X/CNOT/TOF only).
pub fn gates_to_perm(gates: &[Gate], n: usize) -> Result<PermGate, PermError> {
    let mut table: Vec<u64> = (0..1u64 << n).collect();
    for g in gates {
        if !g.is_permutation() {
            return Err(PermError::NotPermutationGate(g.to_string()));
        }
        let max = g.max_index();
        if max > n {
            return Err(PermError::IndexOutOfRange { index: max, n });
        }
        match *g {
            Gate::X(k) => {
                let t = 1u64 << (n - k);
                for entry in &mut table {
                    *entry ^= t;
                }
            }
            Gate::Cnot { control, target } => {
                let c = 1u64 << (n - control);
                let t = 1u64 << (n - target);
                for entry in &mut table {
                    if *entry & c != 0 {
                        *entry ^= t;
                    }
                }
            }
            Gate::Tof { c1, c2, target } => {
                let c1 = 1u64 << (n - c1);
                let c2 = 1u64 << (n - c2);
                let t = 1u64 << (n - target);
                for entry in &mut table {
                    if *entry & c1 != 0 && *entry & c2 != 0 {
                        *entry ^= t;
                    }
                }
            }
            _ => unreachable!("non-permutation gates rejected above"),
        }
    }
    Ok(PermGate { n, table })
}

/// Interpret a parsed gate list as a Toffoli circuit (TOF only).
pub fn gates_to_toffoli(gates: &[Gate]) -> Result<ToffoliCircuit, PermError> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates {
        match *g {
            Gate::Tof { c1, c2, target } => out.push(Toffoli::new(c1, c2, target)),
            other => return Err(PermError::NotToffoli(other.to_string())),
        }
    }
    Ok(ToffoliCircuit::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tof(a: usize, b: usize, c: usize) -> Toffoli {
        Toffoli::new(a, b, c)
    }

    #[test]
    fn toffoli_action_on_basis() {
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3)]);
        let p = circuit_to_perm(&c, 3).unwrap();
        // Swaps |110> (index 6) and |111> (index 7), fixes the rest.
        for idx in 0..6 {
            assert_eq!(p.apply(idx), idx);
        }
        assert_eq!(p.apply(6), 7);
        assert_eq!(p.apply(7), 6);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let p = circuit_to_perm(&ToffoliCircuit::empty(), 4).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn staircase_predicate() {
        // Fig-3.1 shape: targets 3, 4, 4 — staircase.
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3), tof(1, 3, 4), tof(1, 2, 4)]);
        assert!(is_staircase(&c));

        // TOF(1,2,3) then TOF(3,4,5): staircase (but not in C3).
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3), tof(3, 4, 5)]);
        assert!(is_staircase(&c));

        // Decreasing targets.
        let c = ToffoliCircuit::new(vec![tof(1, 2, 4), tof(1, 2, 3)]);
        assert!(!is_staircase(&c));

        // Control above target.
        let c = ToffoliCircuit::new(vec![tof(1, 4, 3)]);
        assert!(!is_staircase(&c));

        // Repeated gate.
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3), tof(1, 2, 3)]);
        assert!(!is_staircase(&c));
    }

    #[test]
    fn to_staircase_identity_and_single() {
        assert_eq!(to_staircase(&PermGate::identity(3)).unwrap(), ToffoliCircuit::empty());

        let c = ToffoliCircuit::new(vec![tof(1, 2, 3)]);
        let p = circuit_to_perm(&c, 3).unwrap();
        assert_eq!(to_staircase(&p).unwrap(), c);
    }

    #[test]
    fn to_staircase_rejects_bad_term_position() {
        // The involution (a1, a2 + a1 a3, a3): term a1*a3 in coordinate 2
        // violates j < k.
        let p = PermGate::from_fn(3, |v| {
            let mut w = v;
            if v.get(1) && v.get(3) {
                w.flip(2);
            }
            w
        });
        match to_staircase(&p) {
            Err(PermError::NotStaircase { coord: 2, term }) => assert_eq!(term, "a1*a3"),
            other => panic!("expected NotStaircase in coordinate 2, got {other:?}"),
        }
    }

    #[test]
    fn staircase_gate_set_recovery_small() {
        // Lemma: perm -> to_staircase recovers exactly the gate set, for
        // every subset of valid triples on n <= 5.
        for n in 3..=5usize {
            let triples = valid_triples(n);
            let count = 1u32 << triples.len();
            for mask in 0..count {
                let gates: Vec<Toffoli> = triples
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| (mask >> *b) & 1 == 1)
                    .map(|(_, t)| *t)
                    .collect();
                let c = ToffoliCircuit::new(gates);
                let p = circuit_to_perm(&c, n).unwrap();
                let rec = to_staircase(&p).unwrap();
                assert_eq!(rec, c.canonical_order());
                assert!(is_staircase(&rec));
                assert_eq!(circuit_to_perm(&rec, n).unwrap(), p);
            }
        }
    }

    fn valid_triples(n: usize) -> Vec<Toffoli> {
        let mut out = Vec::new();
        for k in 3..=n {
            for i in 1..k {
                for j in (i + 1)..k {
                    out.push(Toffoli::new(i, j, k));
                }
            }
        }
        out.sort_by_key(|g| (g.target, g.c1, g.c2));
        out
    }

    #[test]
    fn as_affine_detects_cliffords() {
        // X1 -> (I, e1).
        let x1 = gates_to_perm(&[Gate::X(1)], 2).unwrap();
        let a = as_affine(&x1).unwrap();
        assert_eq!(a.mat(), &F2Mat::identity(2));
        assert_eq!(a.shift(), &F2Vec::basis(2, 1));

        // CNOT_{1,2}: second row e1+e2, w = 0.
        let cnot = gates_to_perm(&[Gate::Cnot { control: 1, target: 2 }], 2).unwrap();
        let a = as_affine(&cnot).unwrap();
        assert!(a.shift().is_zero());
        assert_eq!(a.mat().row(2), &F2Vec::from_indices(2, &[1, 2]));
        assert_eq!(a.to_perm(), cnot);

        // Toffoli has a degree-2 coordinate.
        let t = circuit_to_perm(&ToffoliCircuit::new(vec![tof(1, 2, 3)]), 3).unwrap();
        assert!(as_affine(&t).is_none());
    }

    #[test]
    fn staircase_conditions_examples() {
        assert!(staircase_conditions(&PermGate::identity(3)));
        let x1 = gates_to_perm(&[Gate::X(1)], 3).unwrap();
        assert!(!staircase_conditions(&x1), "moves 0");
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3), tof(1, 3, 4), tof(1, 2, 4)]);
        let p = circuit_to_perm(&c, 4).unwrap();
        assert!(staircase_conditions(&p));
    }

    #[test]
    fn parse_and_render() {
        let text = "# comment\nTOF 1 2 3\nCNOT 2 1 # inline\nX 3\n";
        let gates = parse_circuit(text).unwrap();
        assert_eq!(
            gates,
            vec![
                Gate::Tof { c1: 1, c2: 2, target: 3 },
                Gate::Cnot { control: 2, target: 1 },
                Gate::X(3),
            ]
        );
        assert_eq!(render_circuit(&gates), "TOF 1 2 3\nCNOT 2 1\nX 3\n");
    }

    #[test]
    fn parse_rejects_malformed() {
        match parse_circuit("TOF 1 1 3") {
            Err(PermError::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_circuit("FOO 1").is_err());
        assert!(parse_circuit("TOF 0 1 2").is_err());
        assert!(parse_circuit("TOF 1 2").is_err());
        assert!(parse_circuit("H 1 2").is_err());
    }

    #[test]
    fn gates_to_perm_rejects_non_permutation() {
        let gates = parse_circuit("H 1").unwrap();
        assert!(matches!(gates_to_perm(&gates, 1), Err(PermError::NotPermutationGate(_))));
    }

    #[test]
    fn tensor_identity_pads_low_qubits() {
        let c = ToffoliCircuit::new(vec![tof(1, 2, 3)]);
        let p = circuit_to_perm(&c, 3).unwrap();
        let padded = p.tensor_identity(1);
        let direct = circuit_to_perm(&c, 4).unwrap();
        assert_eq!(padded, direct);
    }

    #[test]
    fn affine_compose_and_inverse() {
        let x1 = AffineMap::translation(F2Vec::basis(3, 1));
        let mut m = F2Mat::identity(3);
        m.set(2, 1, true); // CNOT 1->2 as a linear map
        let l = AffineMap::linear(m);
        let comp = l.compose(&x1);
        assert_eq!(comp.to_perm(), l.to_perm().compose(&x1.to_perm()));
        assert!(comp.compose(&comp.inverse()).is_identity());
    }
}
