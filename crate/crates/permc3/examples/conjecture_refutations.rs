//! Two natural conjectures about C3 permutation gates fail, and U_3 is the
//! counterexample to both: C3 permutations are not all products of
//! commuting Toffolis up to Clifford frames, and C_k is not closed under
//! inverses for permutations. A two-Toffoli product also already escapes
//! the checkable low levels of the hierarchy.
//!
//! Run with: cargo run --release --example conjecture_refutations

use permc3::densesim::{build, is_c3_dense, is_c4_dense};
use permc3::family::uk_circuit;
use permc3::hierarchy::{is_c3_perm, is_semi_clifford_perm};
use permc3::permgate::{circuit_to_perm, parse_circuit};

fn main() {
    let u3 = circuit_to_perm(&uk_circuit(3), 7).expect("U3");

    // Inverse-closure fails: U_3 is in C3, its inverse is not.
    let forward = is_c3_perm(&u3);
    let backward = is_c3_perm(&u3.inverse());
    println!("U_3 in C3:      {:?}", forward.is_ok());
    println!("U_3^-1 in C3:   {:?} (witness {})", backward.is_ok(), backward.unwrap_err());
    assert!(forward.is_ok() && u3.inverse() != u3);

    // Commuting-Toffoli form fails: a mismatch-free product is always
    // semi-Clifford, but U_3 is not.
    let sc = is_semi_clifford_perm(&u3).expect("n = 7 fast path");
    println!("U_3 semi-Clifford: {sc}");
    assert!(!sc);
    println!("so U_3 is not a commuting-Toffoli product up to Clifford frames");

    // TOF(1,2,3)·TOF(1,3,2) already fails the C3 and C4 dense checks
    // (padded to 4 qubits for the C4 oracle).
    let gates = parse_circuit("TOF 1 3 2\nTOF 1 2 3").expect("two Toffolis");
    let u = build(&gates, 4).expect("4 qubits");
    let c3 = is_c3_dense(&u).unwrap();
    let c4 = is_c4_dense(&u).unwrap();
    println!("\nTOF(1,2,3)TOF(1,3,2): in C3: {c3}, in C4: {c4}");
    assert!(!c3 && !c4);
    println!("(higher levels are out of desk reach; these two suffice for the refutation)");
}
