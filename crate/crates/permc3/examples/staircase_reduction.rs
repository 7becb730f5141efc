//! Every permutation gate in C3 is an affine map, then a staircase Toffoli
//! circuit, then another affine map. This example scrambles the 7-qubit
//! staircase gate U_3 behind random Clifford permutations and recovers a
//! staircase form with an exact truth-table recomposition.
//!
//! Run with: cargo run --release --example staircase_reduction

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use permc3::descmult::from_staircase;
use permc3::f2core::{F2Mat, F2Vec};
use permc3::family::uk_circuit;
use permc3::hierarchy::{is_c3_perm, reduce_to_staircase};
use permc3::permgate::{circuit_to_perm, render_circuit, AffineMap};

fn random_affine(n: usize, rng: &mut StdRng) -> AffineMap {
    let mat = loop {
        let rows: Vec<F2Vec> = (0..n)
            .map(|_| F2Vec::from_bits(n, rng.random::<u64>()))
            .collect();
        let m = F2Mat::from_rows(rows);
        if m.is_invertible() {
            break m;
        }
    };
    AffineMap::new(mat, F2Vec::from_bits(n, rng.random::<u64>()))
}

fn main() {
    let n = 7;
    let mut rng = StdRng::seed_from_u64(20240607);

    let mu = uk_circuit(3);
    println!("hidden staircase circuit (U_3):");
    print!("{}", render_circuit(&mu.to_gates()));

    let core = circuit_to_perm(&mu, n).expect("in range");
    let phi1 = random_affine(n, &mut rng);
    let phi2 = random_affine(n, &mut rng);
    let scrambled = phi1.to_perm().compose(&core).compose(&phi2.to_perm());
    println!("\nscrambled behind random affine maps; C3 membership survives:");
    println!("  is_c3_perm = {:?}", is_c3_perm(&scrambled).is_ok());

    let red = reduce_to_staircase(&scrambled).expect("Clifford frames keep the gate in C3");
    println!("recovered staircase form:");
    print!("{}", render_circuit(&red.mu.to_gates()));

    let exact = red.recompose(n) == scrambled;
    let table = from_staircase(&red.mu, n).expect("staircase");
    println!("\nrecomposition exact: {exact}");
    println!("recovered circuit in C3 (table associative): {}", table.is_associative().is_ok());
    println!(
        "recovered circuit semi-Clifford: {}",
        table.all_triples_zero().expect("associative")
    );

    // The recovered gates need not match the hidden ones one for one (the
    // affine frames absorb relabelings), but both encode the same gate, and
    // the non-semi-Clifford character is frame-independent.
    assert!(exact);
}
