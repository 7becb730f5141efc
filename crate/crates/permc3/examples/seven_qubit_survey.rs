//! Seven qubits is the smallest home for a non-semi-Clifford C3 permutation.
//! The survey classifies every staircase circuit on up to six qubits (the
//! only candidates, once affine frames are stripped) and finds all of the
//! C3 members semi-Clifford; at seven qubits U_3 is the witness.
//!
//! Run with: cargo run --release --example seven_qubit_survey

use permc3::descmult::from_staircase;
use permc3::permgate::render_circuit;
use permc3::search::{find_witness, survey, survey_sample, SurveyOptions};

fn main() {
    println!(" n | staircase circuits | in C3  | semi-Clifford | non-semi-Clifford");
    println!("---+--------------------+--------+---------------+------------------");
    for n in 3..=6 {
        let r = survey(n, &SurveyOptions::default()).expect("survey");
        println!(
            " {n} | {:>18} | {:>6} | {:>13} | {:>17}",
            r.total, r.in_c3, r.semi_clifford_c3, r.non_sc_c3
        );
        assert_eq!(r.non_sc_c3, 0, "every C3 permutation below 7 qubits is semi-Clifford");
    }

    println!("\nn = 7 (2^35 circuits): a seeded sample instead of enumeration");
    let s = survey_sample(7, 100_000, 7).expect("sample");
    println!(
        "  sampled {} circuits: {} in C3, {} semi-Clifford, {} neither",
        s.sampled, s.in_c3, s.semi_clifford_c3, s.non_sc_c3
    );

    println!("\nthe deterministic witness on 7 qubits:");
    let w = find_witness();
    print!("{}", render_circuit(&w.to_gates()));
    let table = from_staircase(&w, 7).unwrap();
    println!(
        "associative: {}, all triple products zero: {}",
        table.is_associative().is_ok(),
        table.all_triples_zero().unwrap()
    );
    println!("e1 e2 e4 = {} (nonzero: the triple product survives)", table.product_of_set(&[1, 2, 4]));
}
