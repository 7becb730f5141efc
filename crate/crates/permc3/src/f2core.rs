//! Bit-packed vectors and matrices over F₂, plus the two structural
//! algorithms behind staircase reduction: simultaneous strict lower
//! triangularization of commuting square-zero matrices, and the twisted
//! Gaussian elimination that normalizes translation parts to basis vectors.
//!
//! Component and row/column indices are 1-based throughout the public API;
//! packing into machine words is an internal detail. Dimensions are capped
//! at 64 (one word per row), which covers every desk-scale target here.

use std::fmt;

use thiserror::Error;

/// Largest supported dimension (one `u64` word per row).
pub const MAX_DIM: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension {0} out of range 1..=64")]
    BadDimension(usize),
    #[error("component index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix {matrix} violates precondition: {axiom}")]
    PreconditionViolated { matrix: usize, axiom: SltAxiom },
    #[error("matrix {0} is not strictly lower triangular")]
    NotStrictlyLowerTriangular(usize),
}

/// Which axiom of the simultaneous-triangularization precondition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SltAxiom {
    /// `A² ≠ 0` for the offending matrix.
    SquareNonzero,
    /// The offending matrix does not commute with the named one.
    NotCommuting(usize),
}

impl fmt::Display for SltAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SltAxiom::SquareNonzero => write!(f, "square is nonzero"),
            SltAxiom::NotCommuting(j) => write!(f, "does not commute with matrix {j}"),
        }
    }
}

/// A vector in F₂ⁿ, 1 ≤ n ≤ 64. Component `i` (1-based) is bit `i-1` of `bits`.
///
/// Components beyond `n` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    n: usize,
    bits: u64,
}

impl F2Vec {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        F2Vec { n, bits: 0 }
    }

    /// Standard basis vector e_i.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.set(i, true);
        v
    }

    /// Build from raw bits (component i = bit i-1). Bits beyond `n` are masked off.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        F2Vec { n, bits: bits & Self::mask(n) }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut v = Self::zero(n);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    fn mask(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!((1..=self.n).contains(&i), "component {i} out of range 1..={}", self.n);
        (self.bits >> (i - 1)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!((1..=self.n).contains(&i), "component {i} out of range 1..={}", self.n);
        if value {
            self.bits |= 1u64 << (i - 1);
        } else {
            self.bits &= !(1u64 << (i - 1));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!((1..=self.n).contains(&i), "component {i} out of range 1..={}", self.n);
        self.bits ^= 1u64 << (i - 1);
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Vector addition in F₂ (XOR).
    pub fn add(&self, other: &F2Vec) -> F2Vec {
        assert_eq!(self.n, other.n, "dimension mismatch");
        F2Vec { n: self.n, bits: self.bits ^ other.bits }
    }

    pub fn add_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.bits ^= other.bits;
    }

    /// Dot product over F₂.
    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.n, other.n, "dimension mismatch");
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// 1-based indices of the nonzero components, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        let mut b = self.bits;
        while b != 0 {
            out.push(b.trailing_zeros() as usize + 1);
            b &= b - 1;
        }
        out
    }

    /// Index of the first nonzero component, or `None` for the zero vector
    /// (the α(0) = ∞ convention).
    pub fn first_nonzero_index(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize + 1)
        }
    }

    /// α as a totally ordered integer: first nonzero index, with n+1 standing
    /// in for ∞. Handy for the strict inequalities of the elimination proofs.
    pub fn alpha(&self) -> usize {
        self.first_nonzero_index().unwrap_or(self.n + 1)
    }

    /// State index under the shared convention: qubit 1 is the most
    /// significant bit, so (a₁,…,aₙ) ↦ Σ aᵢ·2^(n−i).
    pub fn to_state_index(&self) -> u64 {
        let mut idx = 0u64;
        for i in 1..=self.n {
            if self.get(i) {
                idx |= 1u64 << (self.n - i);
            }
        }
        idx
    }

    pub fn from_state_index(n: usize, idx: u64) -> Self {
        let mut v = Self::zero(n);
        for i in 1..=n {
            if (idx >> (n - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vec({self})")
    }
}

impl fmt::Display for F2Vec {
    /// Components in index order: e₂ in F₂⁴ prints as `0100`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A square matrix over F₂, stored as one `F2Vec` per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Mat {
    n: usize,
    rows: Vec<F2Vec>,
}

impl F2Mat {
    pub fn zero(n: usize) -> Self {
        F2Mat { n, rows: vec![F2Vec::zero(n); n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 1..=n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<F2Vec>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.n() == n), "rows must have length n");
        F2Mat { n, rows }
    }

    /// Matrix whose i-th column is `cols[i-1]`.
    pub fn from_cols(cols: &[F2Vec]) -> Self {
        let n = cols.len();
        let mut m = Self::zero(n);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.n(), n, "columns must have length n");
            for i in 1..=n {
                if c.get(i) {
                    m.set(i, j + 1, true);
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i - 1].set(j, value);
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.rows[i - 1]
    }

    pub fn col(&self, j: usize) -> F2Vec {
        let mut c = F2Vec::zero(self.n);
        for i in 1..=self.n {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vec::is_zero)
    }

    /// Entry (i,j) = 0 whenever i ≤ j.
    pub fn is_strictly_lower_triangular(&self) -> bool {
        (1..=self.n).all(|i| {
            // Bits at positions >= i-1 of row i must be clear.
            self.rows[i - 1].bits() >> (i - 1) == 0
        })
    }

    pub fn add(&self, other: &F2Mat) -> F2Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        F2Mat {
            n: self.n,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.add(b)).collect(),
        }
    }

    /// Matrix product over F₂.
    pub fn mat_mul(&self, other: &F2Mat) -> F2Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc = F2Vec::zero(self.n);
            let mut bits = self.rows[i].bits();
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                acc.add_assign(&other.rows[k]);
                bits &= bits - 1;
            }
            rows.push(acc);
        }
        F2Mat { n: self.n, rows }
    }

    /// Matrix–vector product over F₂.
    pub fn mat_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(self.n, v.n(), "dimension mismatch");
        let mut out = F2Vec::zero(self.n);
        for i in 1..=self.n {
            if self.rows[i - 1].dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> F2Mat {
        let mut t = Self::zero(self.n);
        for i in 1..=self.n {
            for j in self.rows[i - 1].support() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<u64> = self.rows.iter().map(F2Vec::bits).collect();
        let mut rank = 0;
        for j in 0..self.n {
            let Some(p) = (rank..self.n).find(|&r| (rows[r] >> j) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && (*row >> j) & 1 == 1 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Gauss–Jordan inverse; `None` when the rank is below n.
    pub fn invert(&self) -> Option<F2Mat> {
        let n = self.n;
        let mut a: Vec<u64> = self.rows.iter().map(F2Vec::bits).collect();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for j in 0..n {
            let p = (j..n).find(|&r| (a[r] >> j) & 1 == 1)?;
            a.swap(j, p);
            inv.swap(j, p);
            for r in 0..n {
                if r != j && (a[r] >> j) & 1 == 1 {
                    a[r] ^= a[j];
                    inv[r] ^= inv[j];
                }
            }
        }
        Some(F2Mat {
            n,
            rows: inv.into_iter().map(|bits| F2Vec::from_bits(n, bits)).collect(),
        })
    }
}

impl fmt::Debug for F2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Mat {}x{} [", self.n, self.n)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Row-echelon basis used for span-membership queries.
#[derive(Clone, Default)]
pub(crate) struct Echelon {
    rows: Vec<u64>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Reduce `bits` against the basis; the remainder is zero iff the vector
    /// lies in the span.
    pub(crate) fn reduce(&self, mut bits: u64) -> u64 {
        for &r in &self.rows {
            let pivot = 63 - r.leading_zeros();
            if (bits >> pivot) & 1 == 1 {
                bits ^= r;
            }
        }
        bits
    }

    /// Insert if independent; returns true when the vector enlarged the span.
    pub(crate) fn insert(&mut self, bits: u64) -> bool {
        let rem = self.reduce(bits);
        if rem == 0 {
            return false;
        }
        self.rows.push(rem);
        self.rows.sort_unstable_by_key(|r| std::cmp::Reverse(*r));
        true
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn contains(&self, bits: u64) -> bool {
        self.reduce(bits) == 0
    }
}

/// Basis masks of {x : parity(row & x) = 0 for every row}, x over `width` bits.
pub(crate) fn nullspace(rows: &[u64], width: usize) -> Vec<u64> {
    let mut mat: Vec<u64> = rows.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut used = vec![false; mat.len()];
    for col in 0..width {
        let Some(r) = (0..mat.len()).find(|&r| !used[r] && (mat[r] >> col) & 1 == 1) else {
            continue;
        };
        used[r] = true;
        pivot_of_col[col] = Some(r);
        let pivot = mat[r];
        for (s, row) in mat.iter_mut().enumerate() {
            if s != r && (*row >> col) & 1 == 1 {
                *row ^= pivot;
            }
        }
    }
    // Free columns parametrize the kernel.
    let mut basis = Vec::new();
    for col in 0..width {
        if pivot_of_col[col].is_some() {
            continue;
        }
        let mut x = 1u64 << col;
        for (pc, slot) in pivot_of_col.iter().enumerate() {
            if let Some(r) = slot {
                if (mat[*r] >> col) & 1 == 1 {
                    x |= 1u64 << pc;
                }
            }
        }
        basis.push(x);
    }
    basis
}

/// For independent rows w₁..w_r, vectors c₁..c_r with wₛ·cₜ = δₛₜ.
/// Returns `None` if the rows are dependent.
///
/// Gauss–Jordan with a tracked row-operation matrix E: in the reduced form
/// R = E·W, column pₛ (the pivot of row s) is the unit vector eₛ, so
/// cₜ = Σₛ E[s][t] e_{pₛ} solves W·cₜ = unitₜ.
pub(crate) fn dual_columns(rows: &[F2Vec]) -> Option<Vec<F2Vec>> {
    let r = rows.len();
    if r == 0 {
        return Some(Vec::new());
    }
    let n = rows[0].n();
    let mut w: Vec<u64> = rows.iter().map(F2Vec::bits).collect();
    let mut e: Vec<u64> = (0..r).map(|i| 1u64 << i).collect();
    let mut pivots: Vec<usize> = Vec::with_capacity(r);
    for s in 0..r {
        let p = (0..n).find(|&c| (w[s] >> c) & 1 == 1 && !pivots.contains(&c))?;
        pivots.push(p);
        for t in 0..r {
            if t != s && (w[t] >> p) & 1 == 1 {
                w[t] ^= w[s];
                e[t] ^= e[s];
            }
        }
    }
    let mut cols = Vec::with_capacity(r);
    for t in 0..r {
        let mut c = F2Vec::zero(n);
        for s in 0..r {
            if (e[s] >> t) & 1 == 1 {
                c.flip(pivots[s] + 1);
            }
        }
        cols.push(c);
    }
    for (s, ws) in rows.iter().enumerate() {
        for (t, ct) in cols.iter().enumerate() {
            debug_assert_eq!(ws.dot(ct), s == t);
        }
    }
    Some(cols)
}

fn check_slt_preconditions(mats: &[F2Mat]) -> Result<(), F2Error> {
    for (idx, a) in mats.iter().enumerate() {
        if !a.mat_mul(a).is_zero() {
            return Err(F2Error::PreconditionViolated {
                matrix: idx + 1,
                axiom: SltAxiom::SquareNonzero,
            });
        }
        for (jdx, b) in mats.iter().enumerate().skip(idx + 1) {
            if a.mat_mul(b) != b.mat_mul(a) {
                return Err(F2Error::PreconditionViolated {
                    matrix: idx + 1,
                    axiom: SltAxiom::NotCommuting(jdx + 1),
                });
            }
        }
    }
    Ok(())
}

/// Find an invertible M such that M·Aᵢ·M⁻¹ is strictly lower triangular for
/// every matrix in `mats`.
///
/// Requires every Aᵢ² = 0 and every pair to commute (checked). The algorithm
/// builds a basis u₁,…,uₙ from the back: uₙ is a vector in the common kernel,
/// found by starting from the first standard basis vector and repeatedly
/// multiplying by any map that does not yet kill it (each step strictly grows
/// the set of maps that do); earlier uⱼ repeat the search in the quotient by
/// the later ones. Deterministic: always the lowest admissible index.
pub fn simultaneous_slt_basis(n: usize, mats: &[F2Mat]) -> Result<F2Mat, F2Error> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(F2Error::BadDimension(n));
    }
    for m in mats {
        if m.n() != n {
            return Err(F2Error::DimensionMismatch(m.n(), n));
        }
    }
    check_slt_preconditions(mats)?;

    // Suffix basis u_{j+1..n}, most recent first; quotient = span of these.
    let mut fixed = Echelon::new();
    let mut basis_rev: Vec<F2Vec> = Vec::with_capacity(n);
    for _ in 0..n {
        // Representative of a nonzero quotient class. Seeds are scanned from
        // e_n downward so that inputs already in triangular position come
        // back with M = I (empty list included).
        let start = (1..=n)
            .rev()
            .map(|i| F2Vec::basis(n, i))
            .find(|e| !fixed.contains(e.bits()))
            .expect("quotient space is nonzero");
        let mut w = start;
        // Improvement step: as long as some A_j w is nonzero in the quotient,
        // replace w by it. The count of maps killing w strictly grows.
        loop {
            let next = mats.iter().map(|a| a.mat_vec(&w)).find(|img| !fixed.contains(img.bits()));
            match next {
                Some(img) => w = img,
                None => break,
            }
        }
        basis_rev.push(w);
        fixed.insert(w.bits());
    }

    // basis_rev holds u_n, u_{n-1}, …, u_1; columns of U are u_1..u_n.
    let cols: Vec<F2Vec> = basis_rev.into_iter().rev().collect();
    let u = F2Mat::from_cols(&cols);
    let m = u.invert().expect("change of basis is invertible");
    debug_assert!(mats
        .iter()
        .all(|a| m.mat_mul(a).mat_mul(&u).is_strictly_lower_triangular()));
    Ok(m)
}

/// One step of twisted Gaussian elimination. Indices are 1-based pair slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElimStep {
    /// Swap pairs i and j.
    Swap(usize, usize),
    /// Update pair i to (Aᵢ+Aⱼ+AᵢAⱼ, bᵢ+bⱼ+Aᵢbⱼ), reading the old Aᵢ.
    Compose(usize, usize),
}

/// Replayable record of elimination steps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EliminationLog {
    pub steps: Vec<ElimStep>,
}

impl EliminationLog {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replay on full (matrix, vector) state; reproduces the output of
    /// `twisted_gauss` when applied to its input.
    pub fn replay_pairs(&self, pairs: &mut [(F2Mat, F2Vec)]) {
        for step in &self.steps {
            match *step {
                ElimStep::Swap(i, j) => pairs.swap(i - 1, j - 1),
                ElimStep::Compose(i, j) => {
                    let (a_j, b_j) = pairs[j - 1].clone();
                    let (a_i, b_i) = &mut pairs[i - 1];
                    let new_b = b_i.add(&b_j).add(&a_i.mat_vec(&b_j));
                    let new_a = a_i.add(&a_j).add(&a_i.mat_mul(&a_j));
                    *b_i = new_b;
                    *a_i = new_a;
                }
            }
        }
    }

    /// Replay on generator labels: Compose(i,j) multiplies generator i by
    /// generator j, which adds the labels of X-type Paulis.
    pub fn replay_generators(&self, gens: &mut [F2Vec]) {
        for step in &self.steps {
            match *step {
                ElimStep::Swap(i, j) => gens.swap(i - 1, j - 1),
                ElimStep::Compose(i, j) => {
                    let g_j = gens[j - 1];
                    gens[i - 1].add_assign(&g_j);
                }
            }
        }
    }
}

/// Outcome of `twisted_gauss`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistedGauss {
    /// A reachable state has bᵢ = eᵢ for all i; the log replays to it.
    Normalized { log: EliminationLog },
    /// A state with bᵢ = 0 was reached first (1-based slot).
    ZeroWitness { index: usize },
}

/// Two-phase elimination over pairs (Aᵢ, bᵢ) with strictly lower triangular
/// Aᵢ: first greedily compose equal-α pairs until all α(bᵢ) are distinct
/// (the α-sum strictly increases, so this ends within n² steps), swap into
/// α(bᵢ) = i, then row-reduce each bᵢ down to eᵢ.
///
/// Tie-breaking is deterministic: the lowest-index pair with a matching α is
/// composed into the lower of the two slots.
pub fn twisted_gauss(pairs: &[(F2Mat, F2Vec)]) -> Result<TwistedGauss, F2Error> {
    let n = pairs.len();
    assert!(n > 0, "empty pair list");
    for (idx, (a, b)) in pairs.iter().enumerate() {
        if a.n() != n || b.n() != n {
            return Err(F2Error::DimensionMismatch(a.n().max(b.n()), n));
        }
        if !a.is_strictly_lower_triangular() {
            return Err(F2Error::NotStrictlyLowerTriangular(idx + 1));
        }
    }

    let mut state: Vec<(F2Mat, F2Vec)> = pairs.to_vec();
    let mut log = EliminationLog::default();

    let zero_slot = |state: &[(F2Mat, F2Vec)]| state.iter().position(|(_, b)| b.is_zero());
    if let Some(i) = zero_slot(&state) {
        return Ok(TwistedGauss::ZeroWitness { index: i + 1 });
    }

    let compose = |state: &mut Vec<(F2Mat, F2Vec)>, log: &mut EliminationLog, i: usize, j: usize| {
        let (a_j, b_j) = state[j].clone();
        let (a_i, b_i) = &mut state[i];
        let new_b = b_i.add(&b_j).add(&a_i.mat_vec(&b_j));
        let new_a = a_i.add(&a_j).add(&a_i.mat_mul(&a_j));
        *b_i = new_b;
        *a_i = new_a;
        debug_assert!(state[i].0.is_strictly_lower_triangular());
        log.steps.push(ElimStep::Compose(i + 1, j + 1));
    };

    // Phase 1: make the α(b_i) pairwise distinct.
    loop {
        let alphas: Vec<usize> = state.iter().map(|(_, b)| b.alpha()).collect();
        let mut pair = None;
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                if alphas[i] == alphas[j] {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = pair else { break };
        compose(&mut state, &mut log, i, j);
        if state[i].1.is_zero() {
            return Ok(TwistedGauss::ZeroWitness { index: i + 1 });
        }
    }

    // All α distinct and finite, hence exactly {1,…,n}: swap into place.
    for i in 0..n {
        let target = state[i..].iter().position(|(_, b)| b.alpha() == i + 1).unwrap() + i;
        if target != i {
            state.swap(i, target);
            log.steps.push(ElimStep::Swap(i + 1, target + 1));
        }
    }

    // Phase 2: row reduction of each b_i to e_i.
    for i in 0..n {
        loop {
            let e_i = F2Vec::basis(n, i + 1);
            let rem = state[i].1.add(&e_i);
            let Some(k) = rem.first_nonzero_index() else { break };
            debug_assert!(k > i + 1, "phase 1 established α(b_i) = i");
            compose(&mut state, &mut log, i, k - 1);
            if state[i].1.is_zero() {
                return Ok(TwistedGauss::ZeroWitness { index: i + 1 });
            }
        }
    }

    debug_assert!((1..=n).all(|i| state[i - 1].1 == F2Vec::basis(n, i)));
    Ok(TwistedGauss::Normalized { log })
}
