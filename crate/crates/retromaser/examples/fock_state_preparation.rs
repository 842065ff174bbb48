//! A little prior information turns two ground detections into a photon
//! number measurement and a Fock-state preparation in one stroke.
//!
//! Suppose the cavity is known to hold at most three photons before the
//! atoms pass (equivalently, at most five afterwards). Two atoms detected in
//! the ground state then leave exactly one consistent initial photon
//! number: the cavity held one photon for certain — and since both atoms
//! deposited a photon each, the cavity now holds a three-photon state.
//!
//! Run with: cargo run --example fock_state_preparation

use std::f64::consts::PI;

use retromaser::{retrodict_state, DetectionSequence, MaserParams, PriorSpec};

fn main() {
    let params = MaserParams::new(PI, 25).expect("valid parameters");
    let sequence = DetectionSequence::parse("gg").unwrap();
    let prior = PriorSpec::Cap(3);

    let state = retrodict_state(&sequence, &prior, &params).expect("support remains");
    println!("two ground detections, at most three photons beforehand:");
    println!("{:>4}  {:>22}", "n", "posterior probability");
    for n in 0..=6 {
        println!("{n:>4}  {:>22.16}", state.distribution()[n]);
    }

    let certain = state.distribution()[1];
    println!();
    println!("p(initial n = 1) = {certain:.16}");
    assert!((certain - 1.0).abs() < 1e-12);

    let report = state.support_report();
    println!(
        "prepared state: initial {} photon(s) + {} deposited = {} photons in the cavity now",
        report.min_n,
        sequence.ground_count(),
        report.implied_final_min
    );
}
