//! Staircase circuits and bilinear products on F2^n determine each other:
//! component k of e_i e_j is set exactly when TOF(i,j,k) appears, and the
//! circuit is in C3 exactly when the product is associative. The bijection
//! then rebuilds the permutation from the table alone.
//!
//! Run with: cargo run --release --example descending_multiplications

use permc3::descmult::{from_staircase, mult_to_staircase, parse_mult_table, perm_to_mult};
use permc3::permgate::{circuit_to_perm, render_circuit, Toffoli, ToffoliCircuit};

fn main() {
    // A staircase circuit that is NOT in C3.
    let pi_prime = ToffoliCircuit::new(vec![Toffoli::new(1, 2, 3), Toffoli::new(3, 4, 5)]);
    println!("pi' = TOF(3,4,5) TOF(1,2,3):");
    let table = from_staircase(&pi_prime, 5).expect("staircase");
    print!("{}", table.render());
    match table.is_associative() {
        Ok(()) => println!("associative"),
        Err(w) => println!("not associative, so pi' is not in C3: {w}"),
    }

    // An associative table, written by hand, turned back into a circuit and
    // a permutation.
    println!("\na hand-written associative table:");
    let text = "e 1 2 = 3 4\n";
    print!("{text}");
    let m = parse_mult_table(text, Some(4)).expect("parses");
    assert!(m.is_associative().is_ok());
    let circuit = mult_to_staircase(&m).expect("associative");
    println!("its staircase circuit:");
    print!("{}", render_circuit(&circuit.to_gates()));

    let perm = m.to_perm().expect("associative");
    println!("matches the circuit's permutation: {}", circuit_to_perm(&circuit, 4).unwrap() == perm);

    // Round trip through the bijection.
    let back = perm_to_mult(&perm).expect("staircase C3");
    println!("perm -> table -> perm round trip exact: {}", back.to_perm().unwrap() == perm);

    // The product law behind the bijection: pi(v+w) = pi(v) + pi(w) + pi(v)pi(w).
    use permc3::f2core::F2Vec;
    let mut law_holds = true;
    for vb in 0..16u64 {
        for wb in 0..16u64 {
            let v = F2Vec::from_bits(4, vb);
            let w = F2Vec::from_bits(4, wb);
            let lhs = perm.apply_vec(&v.add(&w));
            let pv = perm.apply_vec(&v);
            let pw = perm.apply_vec(&w);
            law_holds &= lhs == pv.add(&pw).add(&m.product(&pv, &pw));
        }
    }
    println!("product law holds on all 256 input pairs: {law_holds}");
}
