//! Excited detections pick out the trapping photon numbers.
//!
//! At θ = π the Rabi rotation for n+1 = k² photons is a whole number of
//! half-cycles, so an excited atom must leave excited: the measurement
//! weight at n = k²−1 stays exactly 1 while every other photon number is
//! suppressed, more strongly with every additional atom.
//!
//! Run with: cargo run --example trapping_states

use std::f64::consts::PI;

use retromaser::{DetectionSequence, MaserParams, PomElement};

fn main() {
    let params = MaserParams::new(PI, 25).expect("valid parameters");
    let one = PomElement::for_sequence(&DetectionSequence::parse("e").unwrap(), &params);
    let five = PomElement::for_sequence(&DetectionSequence::parse("eeeee").unwrap(), &params);

    println!("relative weight that the cavity held n photons (theta = pi)");
    println!("{:>4}  {:>12}  {:>12}", "n", "one atom", "five atoms");
    for n in 0..=25 {
        let marker = if is_one_less_than_square(n) { "  <- trapping" } else { "" };
        println!(
            "{n:>4}  {:>12.6}  {:>12.6}{marker}",
            one.coefficient(n),
            five.coefficient(n),
        );
    }

    println!();
    println!("trapping numbers in range: 0, 3, 8, 15, 24 (one less than a square)");
    for n in [0usize, 3, 8, 15, 24] {
        assert!((one.coefficient(n) - 1.0).abs() < 1e-12);
        assert!((five.coefficient(n) - 1.0).abs() < 1e-12);
    }
    println!("every trapping weight equals 1 after one and after five detections");
}

fn is_one_less_than_square(n: usize) -> bool {
    let root = ((n + 1) as f64).sqrt().round() as usize;
    root * root == n + 1
}
