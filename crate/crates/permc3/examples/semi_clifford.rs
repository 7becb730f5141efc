//! Semi-Clifford permutation gates are exactly the mismatch-free products of
//! multi-controlled NOT gates, up to affine frames. This example classifies
//! a few gates, decomposes a conjugated C^3X into its mismatch-free core,
//! and reads off the hierarchy level from the control count.
//!
//! Run with: cargo run --release --example semi_clifford

use permc3::hierarchy::{
    commute_iff_mismatch_free, is_semi_clifford_perm, mismatch_free_level,
    semi_clifford_decompose, ControlledNot,
};
use permc3::permgate::{gates_to_perm, parse_circuit};

fn main() {
    // Two Toffolis that share a qubit as control and target do not commute,
    // and commuting is exactly mismatch-freeness.
    let tof123 = ControlledNot::new(&[1, 2], 3);
    let tof132 = ControlledNot::new(&[1, 3], 2);
    let tof124 = ControlledNot::new(&[1, 2], 4);
    for (a, b) in [(&tof123, &tof132), (&tof123, &tof124)] {
        let (commute, free) = commute_iff_mismatch_free(a, b, 4);
        println!("{a:?} vs {b:?}: commute = {commute}, mismatch-free = {free}");
        assert_eq!(commute, free);
    }

    // C^3X is not in C3, but it is semi-Clifford and lives in C4.
    let c3x = ControlledNot::new(&[1, 2, 3], 4);
    let perm = c3x.to_perm(4);
    println!("\nC^3X semi-Clifford: {}", is_semi_clifford_perm(&perm).unwrap());

    // Scramble it behind Cliffords, then recover a mismatch-free core.
    let cnot = gates_to_perm(&parse_circuit("CNOT 2 3\nX 1").unwrap(), 4).unwrap();
    let scrambled = cnot.compose(&perm).compose(&cnot.inverse());
    let (phi1, mu, phi2) = semi_clifford_decompose(&scrambled).expect("semi-Clifford");
    println!("scrambled C^3X decomposes into {} mismatch-free gate(s):", mu.gates().len());
    for g in mu.gates() {
        println!("  {g:?}");
    }
    println!("hierarchy level from max controls: C{}", mismatch_free_level(&mu));
    let recomposed = phi1.to_perm().compose(&mu.to_perm()).compose(&phi2.to_perm());
    println!("recomposition exact: {}", recomposed == scrambled);
    assert_eq!(recomposed, scrambled);

    // U_3 is the permutation that fails this: in C3 yet not semi-Clifford.
    let u3 = permc3::permgate::circuit_to_perm(&permc3::family::uk_circuit(3), 7).unwrap();
    println!("\nU_3 semi-Clifford: {}", is_semi_clifford_perm(&u3).unwrap());
    assert!(semi_clifford_decompose(&u3).is_err());
    println!("so no mismatch-free decomposition of U_3 exists");
}
