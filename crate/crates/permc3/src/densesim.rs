//! Dense-unitary oracle for small qubit counts. Matrices built from
//! {H, X, Z, CNOT, CZ, TOF, CCZ, CSWAP} have every entry a Gaussian-integer
//! multiple of (1/√2)^m, so they are stored exactly as integer pairs with a
//! shared scale exponent and all equality checks are exact — no tolerance
//! anywhere.
//!
//! Membership checks climb the hierarchy by definition: a Clifford conjugates
//! the 2n Pauli generators to Paulis, a C₃ gate conjugates them to Cliffords
//! (both sound and complete because the level below is a group), and the C₄
//! check quantifies over all 4ⁿ phase-free Paulis because C₃ is not a group.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;
use thiserror::Error;

use crate::permgate::{Gate, PermGate};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DenseError {
    #[error("n = {n} exceeds the cap {max} for this operation")]
    TooLarge { n: usize, max: usize },
    #[error("qubit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
}

/// One matrix entry before scaling: g + h·√2 with Gaussian integers g, h.
/// Circuit-built matrices keep h = 0; the √2 component exists so that
/// diagonal gates with eighth-root phases (the T gate) are representable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Entry {
    g: Complex<i64>,
    h: Complex<i64>,
}

const ZERO: Entry = Entry { g: Complex::new(0, 0), h: Complex::new(0, 0) };
const ONE: Entry = Entry { g: Complex::new(1, 0), h: Complex::new(0, 0) };

impl Entry {
    pub const fn gaussian(re: i64, im: i64) -> Self {
        Entry { g: Complex::new(re, im), h: Complex::new(0, 0) }
    }

    fn is_zero(&self) -> bool {
        self.g == Complex::new(0, 0) && self.h == Complex::new(0, 0)
    }

    fn conj(&self) -> Entry {
        Entry { g: self.g.conj(), h: self.h.conj() }
    }

    /// Gaussian part when the √2 component vanishes.
    fn as_gaussian(&self) -> Option<Complex<i64>> {
        (self.h == Complex::new(0, 0)).then_some(self.g)
    }
}

impl Add for Entry {
    type Output = Entry;
    fn add(self, rhs: Entry) -> Entry {
        Entry { g: self.g + rhs.g, h: self.h + rhs.h }
    }
}

impl AddAssign for Entry {
    fn add_assign(&mut self, rhs: Entry) {
        self.g += rhs.g;
        self.h += rhs.h;
    }
}

impl Sub for Entry {
    type Output = Entry;
    fn sub(self, rhs: Entry) -> Entry {
        Entry { g: self.g - rhs.g, h: self.h - rhs.h }
    }
}

impl Neg for Entry {
    type Output = Entry;
    fn neg(self) -> Entry {
        Entry { g: -self.g, h: -self.h }
    }
}

impl Mul for Entry {
    type Output = Entry;
    fn mul(self, rhs: Entry) -> Entry {
        // (g1 + h1√2)(g2 + h2√2) = (g1g2 + 2h1h2) + (g1h2 + h1g2)√2
        Entry {
            g: self.g * rhs.g + (self.h * rhs.h) * Complex::new(2, 0),
            h: self.g * rhs.h + self.h * rhs.g,
        }
    }
}

/// A 2ⁿ×2ⁿ unitary with entries `entries[r·2ⁿ+c] / √2^scale`, kept in the
/// canonical form where scale = 0 or some entry has an odd Gaussian part
/// (dividing by √2 maps g + h√2 to h + (g/2)√2).
#[derive(Clone, PartialEq, Eq)]
pub struct DenseUnitary {
    n: usize,
    scale: u32,
    entries: Vec<Entry>,
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 8, "dense matrices are capped at 8 qubits");
        let dim = 1usize << n;
        let mut entries = vec![ZERO; dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = ONE;
        }
        DenseUnitary { n, scale: 0, entries }
    }

    pub fn from_perm(perm: &PermGate) -> Self {
        let n = perm.n();
        assert!(n <= 8, "dense matrices are capped at 8 qubits");
        let dim = perm.size();
        let mut entries = vec![ZERO; dim * dim];
        for c in 0..dim {
            entries[(perm.apply(c as u64) as usize) * dim + c] = ONE;
        }
        DenseUnitary { n, scale: 0, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> Entry {
        self.entries[r * self.dim() + c]
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    fn normalize(&mut self) {
        while self.scale >= 1
            && self.entries.iter().all(|e| e.g.re % 2 == 0 && e.g.im % 2 == 0)
        {
            for e in &mut self.entries {
                *e = Entry { g: e.h, h: e.g / 2 };
            }
            self.scale -= 1;
        }
    }

    /// Canonical byte serialization, the memoization key.
    pub fn fingerprint(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.entries.len() * 32);
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&self.scale.to_le_bytes());
        for e in &self.entries {
            out.extend_from_slice(&e.g.re.to_le_bytes());
            out.extend_from_slice(&e.g.im.to_le_bytes());
            out.extend_from_slice(&e.h.re.to_le_bytes());
            out.extend_from_slice(&e.h.im.to_le_bytes());
        }
        out
    }

    /// Sparse view when the matrix has exactly one nonzero per column (a
    /// permutation-with-phases matrix): `(row, value)` per column.
    fn as_generalized_perm(&self) -> Option<Vec<(usize, Entry)>> {
        let dim = self.dim();
        let mut cols = vec![None; dim];
        for r in 0..dim {
            for c in 0..dim {
                let e = self.entries[r * dim + c];
                if !e.is_zero() {
                    if cols[c].is_some() {
                        return None;
                    }
                    cols[c] = Some((r, e));
                }
            }
        }
        cols.into_iter().collect()
    }

    /// Matrix product self·other, exploiting one-nonzero-per-column
    /// structure on either side when present.
    pub fn mul(&self, other: &DenseUnitary) -> DenseUnitary {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let dim = self.dim();
        let mut entries = vec![ZERO; dim * dim];
        if let Some(cols) = other.as_generalized_perm() {
            // (A·B)[r][c] = A[r][row_B(c)]·val_B(c)
            for c in 0..dim {
                let (s, v) = cols[c];
                for r in 0..dim {
                    entries[r * dim + c] = self.entries[r * dim + s] * v;
                }
            }
        } else if let Some(cols) = self.as_generalized_perm() {
            // A has one nonzero per column, so also one per row: invert.
            let mut row_src = vec![(0usize, ZERO); dim];
            for (c, &(r, v)) in cols.iter().enumerate() {
                row_src[r] = (c, v);
            }
            for r in 0..dim {
                let (s, v) = row_src[r];
                for c in 0..dim {
                    entries[r * dim + c] = v * other.entries[s * dim + c];
                }
            }
        } else {
            for r in 0..dim {
                for s in 0..dim {
                    let a = self.entries[r * dim + s];
                    if a == ZERO {
                        continue;
                    }
                    for c in 0..dim {
                        entries[r * dim + c] += a * other.entries[s * dim + c];
                    }
                }
            }
        }
        let mut out = DenseUnitary { n: self.n, scale: self.scale + other.scale, entries };
        out.normalize();
        out
    }

    /// Conjugate transpose; the inverse, since everything here is unitary.
    pub fn dagger(&self) -> DenseUnitary {
        let dim = self.dim();
        let mut entries = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[c * dim + r] = self.entries[r * dim + c].conj();
            }
        }
        DenseUnitary { n: self.n, scale: self.scale, entries }
    }

    /// U·U† = I, exactly.
    pub fn is_unitary(&self) -> bool {
        let prod = self.mul(&self.dagger());
        prod == DenseUnitary::identity(self.n)
    }

    fn index_bit(&self, qubit: usize) -> usize {
        1 << (self.n - qubit)
    }

    /// Left-multiply by one gate (row transformation).
    fn apply_gate(&mut self, gate: &Gate) -> Result<(), DenseError> {
        let n = self.n;
        let max = gate.max_index();
        if max > n {
            return Err(DenseError::IndexOutOfRange { index: max, n });
        }
        let dim = self.dim();
        match *gate {
            Gate::X(k) => {
                let bit = self.index_bit(k);
                for r in 0..dim {
                    if r & bit == 0 {
                        for c in 0..dim {
                            self.entries.swap(r * dim + c, (r | bit) * dim + c);
                        }
                    }
                }
            }
            Gate::Z(k) => {
                let bit = self.index_bit(k);
                self.negate_rows(|r| r & bit != 0);
            }
            Gate::H(k) => {
                let bit = self.index_bit(k);
                for r in 0..dim {
                    if r & bit == 0 {
                        for c in 0..dim {
                            let lo = self.entries[r * dim + c];
                            let hi = self.entries[(r | bit) * dim + c];
                            self.entries[r * dim + c] = lo + hi;
                            self.entries[(r | bit) * dim + c] = lo - hi;
                        }
                    }
                }
                self.scale += 1;
            }
            Gate::Cnot { control, target } => {
                let cb = self.index_bit(control);
                let tb = self.index_bit(target);
                self.swap_rows(|r| (r & cb != 0) && (r & tb == 0), tb);
            }
            Gate::Cz(a, b) => {
                let ab = self.index_bit(a);
                let bb = self.index_bit(b);
                self.negate_rows(|r| r & ab != 0 && r & bb != 0);
            }
            Gate::Tof { c1, c2, target } => {
                let c1b = self.index_bit(c1);
                let c2b = self.index_bit(c2);
                let tb = self.index_bit(target);
                self.swap_rows(|r| r & c1b != 0 && r & c2b != 0 && r & tb == 0, tb);
            }
            Gate::Ccz(a, b, c) => {
                let ab = self.index_bit(a);
                let bb = self.index_bit(b);
                let cb = self.index_bit(c);
                self.negate_rows(|r| r & ab != 0 && r & bb != 0 && r & cb != 0);
            }
            Gate::Cswap { control, a, b } => {
                let cb = self.index_bit(control);
                let ab = self.index_bit(a);
                let bb = self.index_bit(b);
                let dim = self.dim();
                for r in 0..dim {
                    if r & cb != 0 && r & ab != 0 && r & bb == 0 {
                        let partner = (r ^ ab) | bb;
                        for c in 0..dim {
                            self.entries.swap(r * dim + c, partner * dim + c);
                        }
                    }
                }
            }
        }
        self.normalize();
        Ok(())
    }

    fn swap_rows(&mut self, pred: impl Fn(usize) -> bool, flip: usize) {
        let dim = self.dim();
        for r in 0..dim {
            if pred(r) {
                let partner = r ^ flip;
                for c in 0..dim {
                    self.entries.swap(r * dim + c, partner * dim + c);
                }
            }
        }
    }

    fn negate_rows(&mut self, pred: impl Fn(usize) -> bool) {
        let dim = self.dim();
        for r in 0..dim {
            if pred(r) {
                for c in 0..dim {
                    self.entries[r * dim + c] = -self.entries[r * dim + c];
                }
            }
        }
    }
}

impl std::fmt::Debug for DenseUnitary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseUnitary(n={}, scale={}):", self.n, self.scale)?;
        let dim = self.dim();
        for r in 0..dim {
            let row: Vec<String> = (0..dim)
                .map(|c| {
                    let e = self.entries[r * dim + c];
                    format!("{}{:+}i", e.re, e.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Build the unitary of a circuit in application order (first gate applied
/// first); n ≤ 8.
pub fn build(gates: &[Gate], n: usize) -> Result<DenseUnitary, DenseError> {
    if n > 8 {
        return Err(DenseError::TooLarge { n, max: 8 });
    }
    let mut u = DenseUnitary::identity(n);
    for g in gates {
        u.apply_gate(g)?;
    }
    Ok(u)
}

/// The Pauli X^u Z^v (no phase) as a dense matrix: |c⟩ ↦ (−1)^(v·c) |c⊕u⟩.
pub fn pauli_matrix(n: usize, u: u64, v: u64) -> DenseUnitary {
    let dim = 1usize << n;
    let mut entries = vec![ZERO; dim * dim];
    for c in 0..dim as u64 {
        let sign = if (v & c).count_ones() % 2 == 1 { -ONE } else { ONE };
        entries[((c ^ u) as usize) * dim + c as usize] = sign;
    }
    DenseUnitary { n, scale: 0, entries }
}

/// Pauli test: one entry per column, all in {±1, ±i} up to a global unit
/// phase, the column-to-row map a translation, and the phase pattern linear.
pub fn is_pauli(u: &DenseUnitary) -> bool {
    if u.scale != 0 {
        return false;
    }
    let Some(cols) = u.as_generalized_perm() else {
        return false;
    };
    let unit = |e: C| e * e.conj() == ONE;
    if !cols.iter().all(|&(_, v)| unit(v)) {
        return false;
    }
    let shift = cols[0].0;
    if (0..u.dim()).any(|c| cols[c].0 != c ^ shift) {
        return false;
    }
    // Phase ratios must be ±1 with a multiplicative (linear) pattern.
    let base = cols[0].1;
    let ratio = |c: usize| cols[c].1 * base.conj();
    if (0..u.dim()).any(|c| {
        let r = ratio(c);
        r != ONE && r != -ONE
    }) {
        return false;
    }
    (0..u.dim()).all(|c| {
        let mut expect = ONE;
        for b in 0..u.n {
            if c & (1 << b) != 0 {
                expect *= ratio(1 << b);
            }
        }
        ratio(c) == expect
    })
}

/// Clifford test via the 2n Pauli generators; n ≤ 8.
pub fn is_clifford(u: &DenseUnitary) -> Result<bool, DenseError> {
    if u.n > 8 {
        return Err(DenseError::TooLarge { n: u.n, max: 8 });
    }
    let dag = u.dagger();
    for q in 0..u.n {
        let bit = 1u64 << q;
        for (pu, pv) in [(bit, 0), (0, bit)] {
            let conj = u.mul(&pauli_matrix(u.n, pu, pv)).mul(&dag);
            if !is_pauli(&conj) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// C₃ test via generator conjugates being Clifford; n ≤ 7.
pub fn is_c3_dense(u: &DenseUnitary) -> Result<bool, DenseError> {
    is_c3_dense_memo(u, &mut HashMap::new())
}

fn is_c3_dense_memo(
    u: &DenseUnitary,
    clifford_memo: &mut HashMap<Vec<u8>, bool>,
) -> Result<bool, DenseError> {
    if u.n > 7 {
        return Err(DenseError::TooLarge { n: u.n, max: 7 });
    }
    let dag = u.dagger();
    for q in 0..u.n {
        let bit = 1u64 << q;
        for (pu, pv) in [(bit, 0), (0, bit)] {
            let conj = u.mul(&pauli_matrix(u.n, pu, pv)).mul(&dag);
            let key = conj.fingerprint();
            let ok = match clifford_memo.get(&key) {
                Some(&v) => v,
                None => {
                    let v = is_clifford(&conj)?;
                    clifford_memo.insert(key, v);
                    v
                }
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// C₄ test: U P U† ∈ C₃ for all 4ⁿ phase-free Paulis P (generators are not
/// enough one level up); inner results memoized by matrix fingerprint. n ≤ 4.
pub fn is_c4_dense(u: &DenseUnitary) -> Result<bool, DenseError> {
    if u.n > 4 {
        return Err(DenseError::TooLarge { n: u.n, max: 4 });
    }
    let dag = u.dagger();
    let mut c3_memo: HashMap<Vec<u8>, bool> = HashMap::new();
    let mut clifford_memo: HashMap<Vec<u8>, bool> = HashMap::new();
    for pu in 0..1u64 << u.n {
        for pv in 0..1u64 << u.n {
            let conj = u.mul(&pauli_matrix(u.n, pu, pv)).mul(&dag);
            let key = conj.fingerprint();
            let ok = match c3_memo.get(&key) {
                Some(&v) => v,
                None => {
                    let v = is_c3_dense_memo(&conj, &mut clifford_memo)?;
                    c3_memo.insert(key, v);
                    v
                }
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The seven-qubit gate of the semi-Clifford counterexample:
/// CSWAP₇,₁,₆ CSWAP₇,₂,₅ CSWAP₇,₄,₃ · CCZ₁,₂,₃ CCZ₁,₄,₅ CCZ₂,₄,₆ CCZ₃,₅,₆.
pub fn gottesman_mochon_g() -> DenseUnitary {
    let gates = crate::permgate::parse_circuit(
        "CCZ 3 5 6\nCCZ 2 4 6\nCCZ 1 4 5\nCCZ 1 2 3\nCSWAP 7 4 3\nCSWAP 7 2 5\nCSWAP 7 1 6\n",
    )
    .expect("fixed circuit");
    build(&gates, 7).expect("7 qubits")
}

/// The Clifford change of frame F = H₃H₅H₆ · CNOT₆,₁ CNOT₅,₂ CNOT₃,₄ · H₇.
pub fn gottesman_mochon_f() -> DenseUnitary {
    let gates = crate::permgate::parse_circuit(
        "H 7\nCNOT 3 4\nCNOT 5 2\nCNOT 6 1\nH 3\nH 5\nH 6\n",
    )
    .expect("fixed circuit");
    build(&gates, 7).expect("7 qubits")
}

/// The three clauses of the Gottesman–Mochon verification.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GmCertificate {
    /// G ∈ C₃ by the dense generator check.
    pub g_in_c3: bool,
    /// G⁻¹X₇G fails the Clifford check, so G⁻¹ ∉ C₃ and G cannot be
    /// semi-Clifford.
    pub g_inv_x7_g_not_clifford: bool,
    /// F·G·F⁻¹ equals the dense matrix of the 7-qubit staircase gate U₃,
    /// entry for entry.
    pub fgf_inv_equals_u3: bool,
}

impl GmCertificate {
    pub fn all_pass(&self) -> bool {
        self.g_in_c3 && self.g_inv_x7_g_not_clifford && self.fgf_inv_equals_u3
    }
}

/// Run all three clauses with exact arithmetic.
pub fn verify_gottesman_mochon() -> GmCertificate {
    let g = gottesman_mochon_g();
    let f = gottesman_mochon_f();

    let g_in_c3 = is_c3_dense(&g).expect("n = 7");

    let x7 = pauli_matrix(7, 1, 0);
    let conj = g.dagger().mul(&x7).mul(&g);
    let g_inv_x7_g_not_clifford = !is_clifford(&conj).expect("n = 7");

    let u3 = crate::permgate::circuit_to_perm(&crate::family::uk_circuit(3), 7)
        .expect("U3 circuit");
    let fgf = f.mul(&g).mul(&f.dagger());
    let fgf_inv_equals_u3 = fgf == DenseUnitary::from_perm(&u3);

    GmCertificate { g_in_c3, g_inv_x7_g_not_clifford, fgf_inv_equals_u3 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgate::parse_circuit;

    fn built(text: &str, n: usize) -> DenseUnitary {
        build(&parse_circuit(text).unwrap(), n).unwrap()
    }

    #[test]
    fn hadamard_matrix() {
        let h = built("H 1", 1);
        assert_eq!(h.scale(), 1);
        assert_eq!(h.entry(0, 0), ONE);
        assert_eq!(h.entry(0, 1), ONE);
        assert_eq!(h.entry(1, 0), ONE);
        assert_eq!(h.entry(1, 1), -ONE);
        assert!(h.is_unitary());
        // H^2 = I exactly after normalization.
        assert_eq!(h.mul(&h), DenseUnitary::identity(1));
    }

    #[test]
    fn toffoli_is_block_identity_plus_x() {
        let t = built("TOF 1 2 3", 3);
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(t.entry(r, c), if r == c { ONE } else { ZERO });
            }
        }
        assert_eq!(t.entry(6, 7), ONE);
        assert_eq!(t.entry(7, 6), ONE);
        assert_eq!(t.entry(6, 6), ZERO);
    }

    #[test]
    fn unitarity_of_all_gates() {
        for (text, n) in [
            ("X 2", 2),
            ("Z 1", 2),
            ("H 2", 2),
            ("CNOT 2 1", 2),
            ("CZ 1 2", 2),
            ("TOF 1 2 3", 3),
            ("CCZ 1 2 3", 3),
            ("CSWAP 1 2 3", 3),
        ] {
            let u = built(text, n);
            assert!(u.is_unitary(), "{text}");
        }
    }

    #[test]
    fn pauli_detection() {
        assert!(is_pauli(&pauli_matrix(2, 0b01, 0b10)));
        assert!(is_pauli(&built("X 1", 2)));
        assert!(is_pauli(&built("Z 2", 2)));
        assert!(!is_pauli(&built("CNOT 1 2", 2)));
        assert!(!is_pauli(&built("H 1", 1)));
        assert!(!is_pauli(&built("CZ 1 2", 2)));
    }

    #[test]
    fn clifford_detection() {
        assert!(is_clifford(&built("H 1", 1)).unwrap());
        assert!(is_clifford(&built("CNOT 1 2", 2)).unwrap());
        assert!(is_clifford(&built("CZ 1 2", 2)).unwrap());
        assert!(!is_clifford(&built("TOF 1 2 3", 3)).unwrap());
        assert!(!is_clifford(&built("CCZ 1 2 3", 3)).unwrap());
    }

    #[test]
    fn c3_detection() {
        assert!(is_c3_dense(&built("TOF 1 2 3", 3)).unwrap());
        assert!(is_c3_dense(&built("CCZ 1 2 3", 3)).unwrap());
        assert!(is_c3_dense(&built("H 1", 1)).unwrap());
        // T-like diagonal is not expressible here, but CSWAP is C3.
        assert!(is_c3_dense(&built("CSWAP 1 2 3", 3)).unwrap());
    }

    #[test]
    fn tof_pair_outside_c3_and_c4() {
        // TOF(1,2,3)·TOF(1,3,2) on 4 qubits (padded): outside both checked
        // levels.
        let u = built("TOF 1 3 2\nTOF 1 2 3", 4);
        assert!(!is_c3_dense(&u).unwrap());
        assert!(!is_c4_dense(&u).unwrap());
    }

    #[test]
    fn c3x_in_c4_not_c3() {
        // C^3X as TOF-conjugation is not available; build from permutation.
        let c3x = crate::hierarchy::ControlledNot::new(&[1, 2, 3], 4).to_perm(4);
        let u = DenseUnitary::from_perm(&c3x);
        assert!(!is_c3_dense(&u).unwrap());
        assert!(is_c4_dense(&u).unwrap());
    }

    #[test]
    fn scale_normalization_keeps_equality_exact() {
        let hh = built("H 1\nH 1", 1);
        assert_eq!(hh, DenseUnitary::identity(1));
        assert_eq!(hh.fingerprint(), DenseUnitary::identity(1).fingerprint());
    }
}
