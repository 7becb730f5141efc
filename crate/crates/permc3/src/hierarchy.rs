//! Membership and classification machinery: symbolic Pauli algebra, the C₃
//! test for permutation gates, level refutation from inverse-coordinate
//! degrees, the reduction of a C₃ permutation to staircase form between two
//! affine maps, semi-Clifford decisions (a fast table route inside C₃ and a
//! symplectic route outside it), and mismatch-free circuits of
//! multi-controlled NOT gates.

use std::fmt;

use thiserror::Error;

use crate::anf::{perm_coords, tt_to_anf, AnfPoly, PermPolyRep};
use crate::descmult::from_staircase;
use crate::f2core::{
    dual_columns, nullspace, simultaneous_slt_basis, twisted_gauss, Echelon, F2Mat, F2Vec,
    TwistedGauss,
};
use crate::permgate::{as_affine, to_staircase, AffineMap, PermGate, ToffoliCircuit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("n = {n} exceeds the cap {max} for this route")]
    TooLarge { n: usize, max: usize },
    #[error("permutation is not in C3: conjugate of {0} leaves C2")]
    NotInC3(C3Witness),
    #[error("permutation is not semi-Clifford")]
    NotSemiClifford,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("gates {0} and {1} mismatch: a target of one is a control of the other")]
    HasMismatch(usize, usize),
    #[error("bad Pauli string: {0}")]
    BadPauliString(String),
    #[error("internal contradiction: {0}")]
    Internal(String),
}

/// Generator whose conjugate witnesses non-membership in C₃.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C3Witness {
    /// πXᵢπ⁻¹ is not an affine permutation.
    X { qubit: usize },
    /// πZᵢπ⁻¹ is a diagonal of degree > 2 (the degree is recorded).
    Z { qubit: usize, degree: usize },
}

impl fmt::Display for C3Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C3Witness::X { qubit } => write!(f, "X{qubit}"),
            C3Witness::Z { qubit, .. } => write!(f, "Z{qubit}"),
        }
    }
}

/// A Pauli operator i^s·X^u·Z^v with the phase exponent s tracked mod 4.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    phase: u8,
    x: F2Vec,
    z: F2Vec,
}

impl Pauli {
    pub fn new(phase: u8, x: F2Vec, z: F2Vec) -> Self {
        assert_eq!(x.n(), z.n(), "dimension mismatch");
        Pauli { phase: phase % 4, x, z }
    }

    pub fn identity(n: usize) -> Self {
        Pauli::new(0, F2Vec::zero(n), F2Vec::zero(n))
    }

    pub fn x(n: usize, i: usize) -> Self {
        Pauli::new(0, F2Vec::basis(n, i), F2Vec::zero(n))
    }

    pub fn z(n: usize, i: usize) -> Self {
        Pauli::new(0, F2Vec::zero(n), F2Vec::basis(n, i))
    }

    /// Y = iXZ.
    pub fn y(n: usize, i: usize) -> Self {
        Pauli::new(1, F2Vec::basis(n, i), F2Vec::basis(n, i))
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    /// Phase exponent s of i^s.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn x_part(&self) -> &F2Vec {
        &self.x
    }

    pub fn z_part(&self) -> &F2Vec {
        &self.z
    }

    /// The symplectic label (u, v), phase dropped.
    pub fn label(&self) -> (F2Vec, F2Vec) {
        (self.x, self.z)
    }

    /// (X^u Z^v)(X^u' Z^v') = (−1)^(v·u') X^(u+u') Z^(v+v').
    pub fn mul(&self, other: &Pauli) -> Pauli {
        let sign = u8::from(self.z.dot(&other.x)) * 2;
        Pauli::new(
            (self.phase + other.phase + sign) % 4,
            self.x.add(&other.x),
            self.z.add(&other.z),
        )
    }

    pub fn commutes_with(&self, other: &Pauli) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Parse strings over {I,X,Y,Z} with optional prefix in {+, -, i, +i, -i}
    /// (Unicode minus accepted), e.g. `-iXZI`.
    pub fn parse(s: &str) -> Result<Pauli, HierarchyError> {
        let bad = || HierarchyError::BadPauliString(s.to_string());
        let normalized = s.trim().replace('\u{2212}', "-");
        let mut rest = normalized.as_str();
        let mut phase = 0u8;
        for (prefix, ph) in [("+i", 1u8), ("-i", 3), ("+", 0), ("-", 2), ("i", 1)] {
            if let Some(tail) = rest.strip_prefix(prefix) {
                // A bare "i" prefix must not eat the Pauli letters; "I..."
                // uses an uppercase letter so the lowercase test suffices.
                phase = ph;
                rest = tail;
                break;
            }
        }
        if rest.is_empty() {
            return Err(bad());
        }
        let n = rest.chars().count();
        if n > 64 {
            return Err(bad());
        }
        let mut x = F2Vec::zero(n);
        let mut z = F2Vec::zero(n);
        for (idx, ch) in rest.chars().enumerate() {
            let i = idx + 1;
            match ch {
                'I' => {}
                'X' => x.set(i, true),
                'Z' => z.set(i, true),
                'Y' => {
                    x.set(i, true);
                    z.set(i, true);
                    phase = (phase + 1) % 4;
                }
                _ => return Err(bad()),
            }
        }
        Ok(Pauli::new(phase, x, z))
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Pull one factor of i back out per Y (X^1 Z^1 = -i Y).
        let mut phase = self.phase;
        let mut letters = String::with_capacity(self.n());
        for i in 1..=self.n() {
            letters.push(match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => {
                    phase = (phase + 3) % 4;
                    'Y'
                }
            });
        }
        let prefix = ["", "i", "-", "-i"][phase as usize];
        write!(f, "{prefix}{letters}")
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

/// πPπ⁻¹ factored as (permutation) · (±1 diagonal) · iˢ: the permutation
/// part sends |b⟩ ↦ |π(π⁻¹(b)+u)⟩ and the diagonal exponent is
/// f(b) = v·π⁻¹(b), for P = iˢX^uZ^v.
#[derive(Clone, Debug)]
pub struct PermTimesDiag {
    pub perm: PermGate,
    pub diag_exponent: AnfPoly,
    pub phase_i_exp: u8,
}

impl PermTimesDiag {
    /// A Pauli iff the permutation part is a translation X^w and the
    /// diagonal exponent is affine.
    pub fn as_pauli(&self) -> Option<Pauli> {
        let n = self.perm.n();
        let w = self.perm.apply_vec(&F2Vec::zero(n));
        let shift = w.to_state_index();
        for idx in 0..self.perm.size() as u64 {
            if self.perm.apply(idx) != idx ^ shift {
                return None;
            }
        }
        if self.diag_exponent.degree().unwrap_or(0) > 1 {
            return None;
        }
        let mut constant = false;
        let mut zpart = F2Vec::zero(n);
        for mask in self.diag_exponent.monomial_masks() {
            if mask == 0 {
                constant = true;
            } else {
                zpart.set(mask.trailing_zeros() as usize + 1, true);
            }
        }
        let phase = (self.phase_i_exp + if constant { 2 } else { 0 }) % 4;
        Some(Pauli::new(phase, w, zpart))
    }
}

/// Conjugate a Pauli by a permutation gate, returning the exact
/// permutation-times-diagonal factorization.
pub fn conjugate_pauli_by_perm(perm: &PermGate, p: &Pauli) -> PermTimesDiag {
    assert_eq!(perm.n(), p.n(), "qubit count mismatch");
    let n = perm.n();
    let size = perm.size() as u64;
    let u = p.x_part().to_state_index();

    let mut table = vec![0u64; size as usize];
    for a in 0..size {
        table[perm.apply(a) as usize] = perm.apply(a ^ u);
    }
    let sigma = PermGate::from_table(n, table).expect("conjugate of a bijection");

    let inv = perm.inverse();
    let diag_table: Vec<bool> = (0..size)
        .map(|b| {
            let pre = F2Vec::from_state_index(n, inv.apply(b));
            p.z_part().dot(&pre)
        })
        .collect();
    let diag_exponent = tt_to_anf(&diag_table).expect("2^n-entry table");

    PermTimesDiag { perm: sigma, diag_exponent, phase_i_exp: p.phase_exp() }
}

/// Conjugate of Xᵢ by π, which is itself a permutation gate.
fn conjugate_x(perm: &PermGate, i: usize) -> PermGate {
    let n = perm.n();
    let u = F2Vec::basis(n, i).to_state_index();
    let mut table = vec![0u64; perm.size()];
    for a in 0..perm.size() as u64 {
        table[perm.apply(a) as usize] = perm.apply(a ^ u);
    }
    PermGate::from_table(n, table).expect("conjugate of a bijection")
}

/// C₃ membership for permutation gates: every πXᵢπ⁻¹ must be affine and
/// every coordinate of π⁻¹ must have degree ≤ 2 (the Zᵢ side). Sound and
/// complete: C₂ is a group and {Xᵢ, Zᵢ} generate the Pauli group.
pub fn is_c3_perm(perm: &PermGate) -> Result<(), C3Witness> {
    let n = perm.n();
    for i in 1..=n {
        if as_affine(&conjugate_x(perm, i)).is_none() {
            return Err(C3Witness::X { qubit: i });
        }
    }
    let inv_rep = perm_coords(&perm.inverse());
    for i in 1..=n {
        let d = inv_rep.coord(i).degree().unwrap_or(0);
        if d > 2 {
            return Err(C3Witness::Z { qubit: i, degree: d });
        }
    }
    Ok(())
}

/// Degree-based level refutation: returns d = max coordinate degree of π⁻¹
/// when d ≥ 2, certifying π ∉ C_d; `None` when π is an affine (Clifford)
/// permutation and nothing is refuted.
pub fn refute_level(perm: &PermGate) -> Option<usize> {
    refute_level_from_inverse_rep(&perm_coords(&perm.inverse()))
}

/// Same refutation from precomputed coordinates of π⁻¹ (for gates too wide
/// to tabulate).
pub fn refute_level_from_inverse_rep(inverse_rep: &PermPolyRep) -> Option<usize> {
    let d = inverse_rep.max_degree().unwrap_or(0);
    (d >= 2).then_some(d)
}

/// π = φ₁ ∘ μ ∘ φ₂ with affine φ's and a staircase μ ∈ C₃.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub phi1: AffineMap,
    pub mu: ToffoliCircuit,
    pub phi2: AffineMap,
}

impl ReductionResult {
    /// The recomposed permutation φ₁ ∘ μ ∘ φ₂.
    pub fn recompose(&self, n: usize) -> PermGate {
        let mu = crate::permgate::circuit_to_perm(&self.mu, n).expect("mu indices in range");
        self.phi1.to_perm().compose(&mu).compose(&self.phi2.to_perm())
    }
}

/// Reduce a C₃ permutation to staircase form between two affine maps,
/// following the constructive proof: fix 0 with X's, conjugate the Xᵢ to
/// extract (Aᵢ, bᵢ), simultaneously triangularize, run twisted Gaussian
/// elimination to reach bᵢ = eᵢ, absorb the generator change into a linear
/// map on the right, and read the staircase circuit off the inverse
/// coordinates.
pub fn reduce_to_staircase(perm: &PermGate) -> Result<ReductionResult, HierarchyError> {
    is_c3_perm(perm).map_err(HierarchyError::NotInC3)?;
    let n = perm.n();
    let internal = |what: &str| HierarchyError::Internal(what.to_string());

    // Step 1: fix 0.
    let t = perm.apply_vec(&F2Vec::zero(n));
    let tau0 = AffineMap::translation(t).to_perm().compose(perm);

    // Step 2: conjugates of the X generators as (A_j, b_j).
    let mut mats = Vec::with_capacity(n);
    let mut shifts = Vec::with_capacity(n);
    for j in 1..=n {
        let aff = as_affine(&conjugate_x(&tau0, j))
            .ok_or_else(|| internal("X conjugate stopped being affine after translation"))?;
        let a_j = aff.mat().add(&F2Mat::identity(n));
        mats.push(a_j);
        shifts.push(*aff.shift());
    }

    // Step 3: simultaneous strict lower triangularization.
    let m = simultaneous_slt_basis(n, &mats).map_err(|e| internal(&format!("slt basis: {e}")))?;
    let m_inv = m.invert().expect("change of basis");
    let tau1 = AffineMap::linear(m.clone()).to_perm().compose(&tau0);
    let pairs: Vec<(F2Mat, F2Vec)> = mats
        .iter()
        .zip(&shifts)
        .map(|(a, b)| (m.mat_mul(a).mat_mul(&m_inv), m.mat_vec(b)))
        .collect();

    // Step 4: twisted Gaussian elimination; a zero b would contradict
    // tau1 fixing 0.
    let log = match twisted_gauss(&pairs).map_err(|e| internal(&format!("twisted gauss: {e}")))? {
        TwistedGauss::Normalized { log } => log,
        TwistedGauss::ZeroWitness { index } => {
            return Err(internal(&format!(
                "twisted elimination reached b_{index} = 0 although the gate fixes 0"
            )))
        }
    };

    // Step 5: the eliminated generators are X^{v_i}; absorb via nu: e_i -> v_i.
    let mut gens: Vec<F2Vec> = (1..=n).map(|i| F2Vec::basis(n, i)).collect();
    log.replay_generators(&mut gens);
    let n_mat = F2Mat::from_cols(&gens);
    let n_inv = n_mat.invert().ok_or_else(|| internal("eliminated generators are dependent"))?;
    let tau2 = tau1.compose(&AffineMap::linear(n_mat).to_perm());

    // Step 6: read the staircase form.
    let mu = to_staircase(&tau2).map_err(|e| internal(&format!("not staircase: {e}")))?;

    let result = ReductionResult {
        phi1: AffineMap::new(m_inv, t),
        mu,
        phi2: AffineMap::linear(n_inv),
    };
    if &result.recompose(n) != perm {
        return Err(internal("recomposition mismatch"));
    }
    Ok(result)
}

/// The subspace Ū of translation labels u (πX^uπ⁻¹ = X^w for some w) and
/// the subspace V̄ of diagonal labels v (πZ^vπ⁻¹ = ±Z^w), as echelon bases.
/// Together they give the full group of Pauli labels preserved by π, since
/// the permutation-diagonal factorization is unique.
fn pauli_preserving_labels(perm: &PermGate) -> (Vec<F2Vec>, Vec<F2Vec>) {
    let n = perm.n();
    let size = perm.size() as u64;

    let mut u_basis: Vec<F2Vec> = Vec::new();
    let mut u_ech = Echelon::new();
    for ubits in 1..1u64 << n {
        let u = F2Vec::from_bits(n, ubits);
        if u_ech.contains(ubits) {
            continue;
        }
        let shift = u.to_state_index();
        let c = perm.apply(shift) ^ perm.apply(0);
        if (0..size).all(|a| perm.apply(a ^ shift) == perm.apply(a) ^ c) {
            u_ech.insert(ubits);
            u_basis.push(u);
        }
    }

    // v ∈ V̄ iff the degree-≥2 parts of the inverse coordinates cancel:
    // the kernel of a linear map into monomial space.
    let inv_rep = perm_coords(&perm.inverse());
    let blocks = (1usize << n).div_ceil(64);
    let rows: Vec<Vec<u64>> = (1..=n)
        .map(|i| {
            let mut row = vec![0u64; blocks];
            for mask in inv_rep.coord(i).monomial_masks() {
                if mask.count_ones() >= 2 {
                    row[(mask as usize) / 64] ^= 1u64 << (mask % 64);
                }
            }
            row
        })
        .collect();
    let v_basis: Vec<F2Vec> = kernel_of_rows(&rows, n)
        .into_iter()
        .map(|mask| F2Vec::from_bits(n, mask))
        .collect();
    (u_basis, v_basis)
}

/// Basis masks of {c ⊆ rows : XOR of the selected rows is zero}.
fn kernel_of_rows(rows: &[Vec<u64>], count: usize) -> Vec<u64> {
    let mut work: Vec<(Vec<u64>, u64)> =
        rows.iter().enumerate().map(|(i, r)| (r.clone(), 1u64 << i)).collect();
    let mut kernel = Vec::new();
    let mut reduced: Vec<(Vec<u64>, u64)> = Vec::new();
    for (mut row, mut combo) in work.drain(..) {
        loop {
            let Some(pivot) = leading_bit(&row) else {
                kernel.push(combo);
                break;
            };
            match reduced.iter().find(|(r, _)| leading_bit(r) == Some(pivot)) {
                Some((r, c)) => {
                    xor_into(&mut row, r);
                    combo ^= c;
                }
                None => {
                    reduced.push((row, combo));
                    break;
                }
            }
        }
    }
    debug_assert!(kernel.len() + reduced.len() == count);
    kernel
}

fn leading_bit(blocks: &[u64]) -> Option<usize> {
    blocks
        .iter()
        .enumerate()
        .rev()
        .find(|(_, b)| **b != 0)
        .map(|(i, b)| i * 64 + 63 - b.leading_zeros() as usize)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Symplectic-route semi-Clifford decision: the label group Ḡ = Ū × V̄ of
/// Paulis preserved by conjugation contains an n-dimensional isotropic
/// subspace iff dim R + (dim Ḡ − dim R)/2 ≥ n, with R the radical of the
/// symplectic form restricted to Ḡ.
pub fn is_semi_clifford_general(perm: &PermGate) -> Result<bool, HierarchyError> {
    let n = perm.n();
    if n > 10 {
        return Err(HierarchyError::TooLarge { n, max: 10 });
    }
    let (u_basis, v_basis) = pauli_preserving_labels(perm);
    // Labels (u, 0) and (0, v); symplectic form ω((u,v),(u',v')) = u·v' + v·u'.
    let labels: Vec<(F2Vec, F2Vec)> = u_basis
        .iter()
        .map(|u| (*u, F2Vec::zero(n)))
        .chain(v_basis.iter().map(|v| (F2Vec::zero(n), *v)))
        .collect();
    let dim_g = labels.len();
    let gram: Vec<u64> = labels
        .iter()
        .map(|(u, v)| {
            let mut row = 0u64;
            for (t, (u2, v2)) in labels.iter().enumerate() {
                if u.dot(v2) ^ v.dot(u2) {
                    row |= 1u64 << t;
                }
            }
            row
        })
        .collect();
    let dim_radical = nullspace(&gram, dim_g).len();
    Ok(dim_radical + (dim_g - dim_radical) / 2 >= n)
}

/// Semi-Clifford decision for a permutation gate. Inside C₃ this reduces to
/// staircase form and asks whether every triple product of the table
/// vanishes; outside C₃ it falls back to the symplectic route (n ≤ 10).
pub fn is_semi_clifford_perm(perm: &PermGate) -> Result<bool, HierarchyError> {
    if is_c3_perm(perm).is_ok() {
        let reduction = reduce_to_staircase(perm)?;
        let table = from_staircase(&reduction.mu, perm.n())
            .map_err(|e| HierarchyError::Internal(format!("reduced circuit: {e}")))?;
        return table
            .all_triples_zero()
            .map_err(|e| HierarchyError::Internal(format!("reduced table: {e}")));
    }
    is_semi_clifford_general(perm)
}

/// A multi-controlled NOT gate C^kX: flip `target` when all `controls` are 1.
/// No controls means a plain X.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ControlledNot {
    controls: Vec<usize>,
    target: usize,
}

impl ControlledNot {
    pub fn new(controls: &[usize], target: usize) -> Self {
        let mut controls = controls.to_vec();
        controls.sort_unstable();
        controls.dedup();
        assert!(!controls.contains(&target), "target cannot be a control");
        ControlledNot { controls, target }
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn max_index(&self) -> usize {
        self.controls.iter().copied().max().unwrap_or(0).max(self.target)
    }

    pub fn mismatches(&self, other: &ControlledNot) -> bool {
        other.controls.contains(&self.target) || self.controls.contains(&other.target)
    }

    pub fn apply(&self, v: &F2Vec) -> F2Vec {
        let mut w = *v;
        if self.controls.iter().all(|&c| v.get(c)) {
            w.flip(self.target);
        }
        w
    }

    pub fn to_perm(&self, n: usize) -> PermGate {
        PermGate::from_fn(n, |v| self.apply(&v))
    }
}

impl fmt::Debug for ControlledNot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}X{:?}->{}", self.controls.len(), self.controls, self.target)
    }
}

/// A product of pairwise distinct multi-controlled NOT gates in which no
/// qubit is a target of one gate and a control of another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MismatchFreeCircuit {
    n: usize,
    gates: Vec<ControlledNot>,
}

impl MismatchFreeCircuit {
    /// Checks pairwise distinctness and mismatch-freeness.
    pub fn new(n: usize, gates: Vec<ControlledNot>) -> Result<Self, HierarchyError> {
        for (i, g) in gates.iter().enumerate() {
            if g.max_index() > n {
                return Err(HierarchyError::PreconditionViolated(format!(
                    "gate {} exceeds qubit count {n}",
                    i + 1
                )));
            }
            for (j, h) in gates.iter().enumerate().skip(i + 1) {
                if g == h {
                    return Err(HierarchyError::PreconditionViolated(format!(
                        "gates {} and {} are equal",
                        i + 1,
                        j + 1
                    )));
                }
                if g.mismatches(h) {
                    return Err(HierarchyError::HasMismatch(i + 1, j + 1));
                }
            }
        }
        Ok(MismatchFreeCircuit { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[ControlledNot] {
        &self.gates
    }

    pub fn max_controls(&self) -> usize {
        self.gates.iter().map(|g| g.controls.len()).max().unwrap_or(0)
    }

    pub fn to_perm(&self) -> PermGate {
        let mut p = PermGate::identity(self.n);
        for g in &self.gates {
            p = g.to_perm(self.n).compose(&p);
        }
        p
    }
}

/// Hierarchy level of a mismatch-free circuit: (max controls) + 1. The
/// permutation is semi-Clifford and sits in that level.
pub fn mismatch_free_level(circuit: &MismatchFreeCircuit) -> usize {
    circuit.max_controls() + 1
}

/// Evaluate both sides of the commuting ⇔ mismatch-free equivalence for two
/// multi-controlled NOT gates, independently: commutation on truth tables,
/// the mismatch test on index sets. Returned as (commute, mismatch_free).
pub fn commute_iff_mismatch_free(g1: &ControlledNot, g2: &ControlledNot, n: usize) -> (bool, bool) {
    assert!(g1.max_index() <= n && g2.max_index() <= n, "qubit count too small");
    let p1 = g1.to_perm(n);
    let p2 = g2.to_perm(n);
    let commute = p1.compose(&p2) == p2.compose(&p1);
    (commute, !g1.mismatches(g2))
}

fn labels_echelon(gens: &[Pauli]) -> Echelon {
    let mut ech = Echelon::new();
    for g in gens {
        let (u, v) = g.label();
        let n = g.n();
        ech.insert(u.bits() | (v.bits() << n));
        // n <= 32 keeps both halves inside one word for this use.
    }
    ech
}

/// Extend a maximal abelian Pauli subgroup A to one containing the abelian
/// set B, inside ⟨A, B⟩: for each generator b of B, the generators of A
/// anticommuting with b are replaced by their sequential pairwise products.
/// Group containments are at the label level (phases are irrelevant to
/// abelianness and membership up to phase).
pub fn extend_to_max_abelian(
    a_gens: &[Pauli],
    b_gens: &[Pauli],
) -> Result<Vec<Pauli>, HierarchyError> {
    let bad = |msg: &str| HierarchyError::PreconditionViolated(msg.to_string());
    let Some(first) = a_gens.first() else {
        return Err(bad("A must have n generators"));
    };
    let n = first.n();
    if n > 32 {
        return Err(HierarchyError::TooLarge { n, max: 32 });
    }
    if a_gens.len() != n {
        return Err(bad("A must have n generators"));
    }
    for (i, g) in a_gens.iter().enumerate() {
        for h in &a_gens[i + 1..] {
            if !g.commutes_with(h) {
                return Err(bad("A is not abelian"));
            }
        }
    }
    if labels_echelon(a_gens).dim() != n {
        return Err(bad("A generators are not independent"));
    }
    for (i, g) in b_gens.iter().enumerate() {
        if g.n() != n {
            return Err(bad("mixed qubit counts"));
        }
        for h in &b_gens[i + 1..] {
            if !g.commutes_with(h) {
                return Err(bad("B is not abelian"));
            }
        }
    }

    let mut gens = a_gens.to_vec();
    for b in b_gens {
        let anti: Vec<usize> =
            (0..gens.len()).filter(|&i| !gens[i].commutes_with(b)).collect();
        if anti.is_empty() {
            // b commutes with a maximal abelian group, so it is already in
            // the span up to phase.
            debug_assert!({
                let mut ech = labels_echelon(&gens);
                let (u, v) = b.label();
                !ech.insert(u.bits() | (v.bits() << n))
            });
            continue;
        }
        let mut next: Vec<Pauli> = Vec::with_capacity(n);
        next.push(*b);
        for w in anti.windows(2) {
            next.push(gens[w[0]].mul(&gens[w[1]]));
        }
        for (i, g) in gens.iter().enumerate() {
            if !anti.contains(&i) {
                next.push(*g);
            }
        }
        gens = next;
    }

    debug_assert_eq!(gens.len(), n);
    debug_assert!(labels_echelon(&gens).dim() == n);
    debug_assert!((0..gens.len())
        .all(|i| (i + 1..gens.len()).all(|j| gens[i].commutes_with(&gens[j]))));
    Ok(gens)
}

/// Constructive semi-Clifford decomposition π = φ₁ ∘ μ ∘ φ₂ with affine φ's
/// and a mismatch-free circuit μ. The basis changes align the translation
/// labels Ū with X₁..X_m and a dual set of diagonal labels with Z_{m+1}..Zₙ,
/// a sign-fixing X layer makes the Z conjugates exactly Z^w, and the gates
/// of μ are read off the monomials of the normalized coordinates.
pub fn semi_clifford_decompose(
    perm: &PermGate,
) -> Result<(AffineMap, MismatchFreeCircuit, AffineMap), HierarchyError> {
    if !is_semi_clifford_perm(perm)? {
        return Err(HierarchyError::NotSemiClifford);
    }
    let n = perm.n();
    let internal = |what: String| HierarchyError::Internal(what);

    let mut cur = perm.clone();
    let mut phi_left = AffineMap::identity(n);
    let mut phi_right = AffineMap::identity(n);

    // Labels of the Paulis preserved by conjugation.
    let (u_basis, v_basis) = pauli_preserving_labels(&cur);
    let m = u_basis.len();

    // W: an (n−m)-dimensional piece of V̄ orthogonal to Ū.
    let w_all = orthogonal_within(&v_basis, &u_basis);
    if w_all.len() < n - m {
        return Err(internal(format!(
            "isotropic label space too small: {} + {} < {n}",
            m,
            w_all.len()
        )));
    }
    let w_vecs: Vec<F2Vec> = w_all.into_iter().take(n - m).collect();

    // nu1 aligns u_i with e_i (columns) and w_j with the dual basis rows:
    // columns c_j for j > m satisfy w_s · c_j = δ_sj, which exist because
    // the w's are independent, and stay independent of the u's because the
    // u's span the orthogonal complement of span(W).
    let w_dual = dual_columns(&w_vecs).ok_or_else(|| internal("dependent W basis".into()))?;
    let mut cols = u_basis.clone();
    cols.extend(w_dual);
    let n1 = F2Mat::from_cols(&cols);
    if !n1.is_invertible() {
        return Err(internal("label alignment matrix is singular".into()));
    }
    let nu1 = AffineMap::linear(n1);
    cur = cur.compose(&nu1.to_perm());
    phi_right = nu1.inverse().compose(&phi_right);

    // Now X_i conjugates (i ≤ m) are translations X^{c_i}: align them back
    // to X_i with nu2.
    let mut xcols: Vec<F2Vec> = Vec::with_capacity(n);
    let mut ech = Echelon::new();
    for i in 1..=m {
        let sigma = conjugate_x(&cur, i);
        let c_state = sigma.apply(0);
        if (0..sigma.size() as u64).any(|b| sigma.apply(b) != b ^ c_state) {
            return Err(internal(format!("X{i} conjugate is not a translation")));
        }
        let c = F2Vec::from_state_index(n, c_state);
        if !ech.insert(c.bits()) {
            return Err(internal("translation images are dependent".into()));
        }
        xcols.push(c);
    }
    for i in 1..=n {
        if xcols.len() == n {
            break;
        }
        let e = F2Vec::basis(n, i);
        if ech.insert(e.bits()) {
            xcols.push(e);
        }
    }
    let nu2 = AffineMap::linear(F2Mat::from_cols(&xcols));
    cur = nu2.inverse().to_perm().compose(&cur);
    phi_left = phi_left.compose(&nu2);

    // Z_j conjugates for j > m are ±Z^{w_j}: strip the signs with an X
    // layer on the right, then align w_j with e_j via the transpose trick.
    let inv_rep = perm_coords(&cur.inverse());
    let mut chi_shift = F2Vec::zero(n);
    let mut wcols: Vec<F2Vec> = (1..=m).map(|i| F2Vec::basis(n, i)).collect();
    for j in (m + 1)..=n {
        let f = inv_rep.coord(j);
        if f.degree().unwrap_or(0) > 1 {
            return Err(internal(format!("Z{j} conjugate is not Pauli after alignment")));
        }
        let mut w_j = F2Vec::zero(n);
        let mut sign = false;
        for mask in f.monomial_masks() {
            if mask == 0 {
                sign = true;
            } else {
                w_j.set(mask.trailing_zeros() as usize + 1, true);
            }
        }
        for i in 1..=m {
            if w_j.get(i) {
                return Err(internal(format!("Z{j} conjugate touches the control block")));
            }
        }
        if sign {
            chi_shift.set(j, true);
        }
        wcols.push(w_j);
    }
    if !chi_shift.is_zero() {
        let chi = AffineMap::translation(chi_shift);
        cur = cur.compose(&chi.to_perm());
        phi_right = chi.compose(&phi_right);
    }
    let m_mat = F2Mat::from_cols(&wcols);
    if !m_mat.is_invertible() {
        return Err(internal("Z-label matrix is singular".into()));
    }
    let varpi = AffineMap::linear(m_mat.transpose());
    cur = varpi.to_perm().compose(&cur);
    phi_left = phi_left.compose(&varpi.inverse());

    // cur now commutes with X_1..X_m and Z_{m+1}..Z_n: its coordinates are
    // a_i + p_i(a_{m+1},…,a_n) for i ≤ m and a_j for j > m. Each monomial of
    // p_i is one gate.
    let rep = perm_coords(&cur);
    let low_mask: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };
    let mut gates = Vec::new();
    for i in 1..=n {
        let coord = rep.coord(i);
        let residual = coord.add(&AnfPoly::var(n, i));
        if i > m {
            if !residual.is_zero() {
                return Err(internal(format!("coordinate {i} failed to normalize to a_{i}")));
            }
            continue;
        }
        for mask in residual.monomial_masks() {
            if mask & low_mask != 0 {
                return Err(internal(format!("coordinate {i} keeps a control-block variable")));
            }
            let controls: Vec<usize> = F2Vec::from_bits(n, mask).support();
            gates.push(ControlledNot::new(&controls, i));
        }
    }
    gates.sort_by_key(|g| (g.target, g.controls.clone()));
    let mu = MismatchFreeCircuit::new(n, gates)?;

    let recomposed = phi_left.to_perm().compose(&mu.to_perm()).compose(&phi_right.to_perm());
    if &recomposed != perm {
        return Err(internal("decomposition does not recompose".into()));
    }
    Ok((phi_left, mu, phi_right))
}

/// Basis of {w ∈ span(v_basis) : w ⊥ every u in u_basis} (dot product).
fn orthogonal_within(v_basis: &[F2Vec], u_basis: &[F2Vec]) -> Vec<F2Vec> {
    if v_basis.is_empty() {
        return Vec::new();
    }
    let n = v_basis[0].n();
    // Conditions on coefficient vectors c: Σ_t c_t (v_t · u_s) = 0.
    let rows: Vec<u64> = u_basis
        .iter()
        .map(|u| {
            let mut row = 0u64;
            for (t, v) in v_basis.iter().enumerate() {
                if v.dot(u) {
                    row |= 1u64 << t;
                }
            }
            row
        })
        .collect();
    nullspace(&rows, v_basis.len())
        .into_iter()
        .map(|combo| {
            let mut w = F2Vec::zero(n);
            for (t, v) in v_basis.iter().enumerate() {
                if (combo >> t) & 1 == 1 {
                    w.add_assign(v);
                }
            }
            w
        })
        .collect()
}
