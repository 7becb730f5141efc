//! Algebraic normal form: multilinear Boolean polynomials over F₂ and the
//! polynomial representation of permutation gates (one coordinate polynomial
//! per output bit).
//!
//! Monomials are subsets of the variables {a₁,…,aₙ}, stored as bitmasks with
//! variable i at bit i−1; the empty subset is the constant 1. Truth tables
//! follow the shared state-index convention: input (a₁,…,aₙ) sits at index
//! Σ aᵢ·2^(n−i), i.e. qubit 1 is the most significant bit.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::f2core::F2Vec;
use crate::permgate::PermGate;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnfError {
    #[error("truth table length {0} is not a power of two (or is below 2)")]
    BadLength(usize),
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A multilinear polynomial over F₂ in n variables, as a set of monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnfPoly {
    n: usize,
    monomials: BTreeSet<u64>,
}

impl AnfPoly {
    pub fn zero(n: usize) -> Self {
        AnfPoly { n, monomials: BTreeSet::new() }
    }

    /// The constant polynomial 1 (the empty monomial).
    pub fn one(n: usize) -> Self {
        AnfPoly { n, monomials: BTreeSet::from([0]) }
    }

    /// The single variable aᵢ.
    pub fn var(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "variable {i} out of range 1..={n}");
        AnfPoly { n, monomials: BTreeSet::from([1u64 << (i - 1)]) }
    }

    /// Build from variable-index sets, e.g. `[[3].as_slice(), &[1, 2]]` for
    /// a₃ + a₁a₂. Duplicate monomials cancel in pairs.
    pub fn from_monomials(n: usize, monomials: &[&[usize]]) -> Self {
        let mut p = Self::zero(n);
        for vars in monomials {
            let mut mask = 0u64;
            for &i in *vars {
                assert!((1..=n).contains(&i), "variable {i} out of range 1..={n}");
                mask |= 1u64 << (i - 1);
            }
            p.toggle(mask);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    /// Monomials as variable bitmasks (variable i at bit i−1).
    pub fn monomial_masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.monomials.iter().copied()
    }

    pub fn contains_monomial(&self, vars: &[usize]) -> bool {
        let mut mask = 0u64;
        for &i in vars {
            mask |= 1u64 << (i - 1);
        }
        self.monomials.contains(&mask)
    }

    fn toggle(&mut self, mask: u64) {
        if !self.monomials.remove(&mask) {
            self.monomials.insert(mask);
        }
    }

    /// Degree of the polynomial, `None` for the zero polynomial (the −∞
    /// sentinel: never reported as 0, so degree tests cannot be confounded
    /// by an identically-zero coordinate).
    pub fn degree(&self) -> Option<usize> {
        self.monomials.iter().map(|m| m.count_ones() as usize).max()
    }

    /// Evaluate at a point; panics on dimension mismatch.
    pub fn eval(&self, a: &F2Vec) -> bool {
        assert_eq!(a.n(), self.n, "dimension mismatch");
        let bits = a.bits();
        self.monomials.iter().filter(|&&m| bits & m == m).count() % 2 == 1
    }

    pub fn add(&self, other: &AnfPoly) -> AnfPoly {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for &m in &other.monomials {
            out.toggle(m);
        }
        out
    }

    /// Product with multilinear reduction (x² = x is automatic on masks).
    pub fn mul(&self, other: &AnfPoly) -> AnfPoly {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = AnfPoly::zero(self.n);
        for &a in &self.monomials {
            for &b in &other.monomials {
                out.toggle(a | b);
            }
        }
        out
    }

    /// Substitute polynomial `reps[i-1]` for variable i and expand.
    pub fn substitute(&self, reps: &[AnfPoly]) -> AnfPoly {
        assert_eq!(reps.len(), self.n, "need one replacement per variable");
        let m = reps.first().map_or(self.n, AnfPoly::n);
        let mut out = AnfPoly::zero(m);
        for &mono in &self.monomials {
            let mut term = AnfPoly::one(m);
            let mut bits = mono;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                term = term.mul(&reps[i]);
                bits &= bits - 1;
            }
            out = out.add(&term);
        }
        out
    }

    /// Truth table of the polynomial over all 2ⁿ inputs, in state-index order.
    pub fn to_truth_table(&self) -> Vec<bool> {
        let n = self.n;
        let mut table = vec![false; 1usize << n];
        for &mono in &self.monomials {
            let idx_mask = reverse_mask(n, mono);
            // The zeta transform of a single monomial: all supersets.
            for (idx, entry) in table.iter_mut().enumerate() {
                if idx as u64 & idx_mask == idx_mask {
                    *entry ^= true;
                }
            }
        }
        table
    }

    fn sorted_terms(&self) -> Vec<Vec<usize>> {
        let mut terms: Vec<Vec<usize>> = self
            .monomials
            .iter()
            .map(|&m| {
                let mut vars = Vec::new();
                let mut bits = m;
                while bits != 0 {
                    vars.push(bits.trailing_zeros() as usize + 1);
                    bits &= bits - 1;
                }
                vars
            })
            .collect();
        terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        terms
    }
}

impl fmt::Display for AnfPoly {
    /// Canonical rendering: terms by degree, then lexicographic on sorted
    /// variable indices; `a3 + a1*a2`, constant `1`, zero polynomial `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .sorted_terms()
            .iter()
            .map(|vars| {
                if vars.is_empty() {
                    "1".to_string()
                } else {
                    vars.iter().map(|i| format!("a{i}")).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl fmt::Debug for AnfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfPoly({self})")
    }
}

/// Map an n-bit state-index mask to a variable mask (bit n−i ↔ variable i).
fn reverse_mask(n: usize, mask: u64) -> u64 {
    let mut out = 0u64;
    for p in 0..n {
        if (mask >> p) & 1 == 1 {
            out |= 1u64 << (n - 1 - p);
        }
    }
    out
}

/// Interpolate a Boolean function from its truth table via the in-place
/// Möbius transform over the subset lattice. Inverse of
/// [`AnfPoly::to_truth_table`].
pub fn tt_to_anf(table: &[bool]) -> Result<AnfPoly, AnfError> {
    let len = table.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(AnfError::BadLength(len));
    }
    let n = len.trailing_zeros() as usize;
    let mut f: Vec<bool> = table.to_vec();
    for b in 0..n {
        let bit = 1usize << b;
        for idx in 0..len {
            if idx & bit != 0 {
                f[idx] ^= f[idx ^ bit];
            }
        }
    }
    let mut poly = AnfPoly::zero(n);
    for (idx, &coeff) in f.iter().enumerate() {
        if coeff {
            poly.monomials.insert(reverse_mask(n, idx as u64));
        }
    }
    Ok(poly)
}

/// The n coordinate polynomials of a permutation of F₂ⁿ.
#[derive(Clone, PartialEq, Eq)]
pub struct PermPolyRep {
    n: usize,
    coords: Vec<AnfPoly>,
}

impl PermPolyRep {
    pub fn new(coords: Vec<AnfPoly>) -> Self {
        let n = coords.len();
        assert!(coords.iter().all(|c| c.n() == n), "coordinate arity mismatch");
        PermPolyRep { n, coords }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The i-th coordinate (1-based): output bit i as a polynomial of the inputs.
    pub fn coord(&self, i: usize) -> &AnfPoly {
        &self.coords[i - 1]
    }

    pub fn coords(&self) -> &[AnfPoly] {
        &self.coords
    }

    /// Largest coordinate degree; `None` if every coordinate is zero
    /// (impossible for a permutation, but kept honest).
    pub fn max_degree(&self) -> Option<usize> {
        self.coords.iter().filter_map(AnfPoly::degree).max()
    }

    pub fn eval(&self, a: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zero(self.n);
        for i in 1..=self.n {
            out.set(i, self.coords[i - 1].eval(a));
        }
        out
    }
}

impl fmt::Debug for PermPolyRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "PermPolyRep[{}]", rendered.join(", "))
    }
}

/// The polynomial representation of a permutation gate: coordinate i is the
/// interpolation of output bit i over all 2ⁿ inputs.
pub fn perm_coords(perm: &PermGate) -> PermPolyRep {
    let n = perm.n();
    let size = 1usize << n;
    let coords = (1..=n)
        .map(|i| {
            let out_bit = 1u64 << (n - i);
            let table: Vec<bool> = (0..size).map(|idx| perm.apply(idx as u64) & out_bit != 0).collect();
            tt_to_anf(&table).expect("2^n-entry table")
        })
        .collect();
    PermPolyRep::new(coords)
}

/// Inverse permutation on truth tables (π∘π⁻¹ = identity).
pub fn invert_perm(perm: &PermGate) -> PermGate {
    perm.inverse()
}
