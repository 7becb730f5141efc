//! Polynomial representations of permutation circuits: every output bit of
//! a reversible circuit is a multilinear polynomial over F2 in the input
//! bits, and the staircase Toffoli form can be read straight off the
//! coordinates of the inverse.
//!
//! Run with: cargo run --release --example polynomial_forms

use permc3::anf::perm_coords;
use permc3::permgate::{gates_to_perm, parse_circuit, render_circuit, to_staircase};

fn show(name: &str, text: &str, n: usize) {
    let gates = parse_circuit(text).expect("valid circuit");
    let perm = gates_to_perm(&gates, n).expect("permutation gates");
    println!("{name} on {n} qubits:");
    for line in text.lines() {
        println!("    {line}");
    }
    let rep = perm_coords(&perm);
    for i in 1..=n {
        println!("  output {i} = {}", rep.coord(i));
    }
    match to_staircase(&perm) {
        Ok(c) => {
            let rendered = render_circuit(&c.to_gates());
            let flat = rendered.trim().replace('\n', "; ");
            println!("  staircase form: {}", if flat.is_empty() { "(identity)" } else { &flat });
        }
        Err(e) => println!("  not a staircase permutation: {e}"),
    }
    println!();
}

fn main() {
    show("CNOT", "CNOT 1 2", 2);
    show("Toffoli", "TOF 1 2 3", 3);

    // The staircase-but-not-mismatch-free example: qubit 3 is a control of
    // one gate and the target of another.
    show("staircase pair", "TOF 1 2 3\nTOF 1 3 4\nTOF 1 2 4", 4);

    // X and CNOT scrambling changes the coordinates but to_staircase only
    // succeeds when the permutation itself is a staircase gate.
    show("scrambled Toffoli", "X 3\nTOF 1 2 3\nX 3", 3);
}
