//! The U_k family: for each k >= 3, a staircase C3 gate on 2^k - 1 qubits
//! whose inverse is not even in C_k. The table is the disjoint-subset-union
//! product; the top coordinate collects one monomial per set partition of
//! [k], so its degree is k and the inverse is refuted by the degree bound.
//!
//! Run with: cargo run --release --example uk_family

use permc3::family::{uk_circuit, uk_coordinate, uk_gate_count, uk_inverse_coordinate, verify_uk};
use permc3::permgate::render_circuit;

fn main() {
    for k in 3..=5 {
        let cert = verify_uk(k);
        println!(
            "U_{k}: n = {}, {} Toffoli gates, in C3: {}, inverse refuted at level {}{}",
            cert.n,
            cert.gate_count,
            cert.in_c3,
            cert.inverse_refuted_at,
            if cert.truth_table_cross_checked { " (truth table cross-checked)" } else { " (analytic route)" },
        );
        assert!(cert.holds_at(k));
        assert_eq!(cert.gate_count, uk_gate_count(k));
    }

    println!("\nU_3 in full:");
    print!("{}", render_circuit(&uk_circuit(3).to_gates()));

    let full3 = 0b111;
    println!("\ntop coordinate of U_3:      {}", uk_coordinate(3, full3));
    println!("top coordinate of U_3^-1:   {}", uk_inverse_coordinate(3, full3));

    // The degree-k monomial that refutes the inverse at level k: the
    // singleton qubits 1, 2, 4, ..., 2^(k-1) multiplied together.
    let full5 = 0b11111;
    let top5 = uk_coordinate(5, full5);
    println!(
        "\nU_5 top coordinate: {} monomials of degree up to {} on 31 qubits",
        top5.monomial_count(),
        top5.degree().unwrap(),
    );
    assert!(top5.contains_monomial(&[1, 2, 4, 8, 16]));
    println!("contains a1*a2*a4*a8*a16: yes, so U_5^-1 is not in C_5");
}
