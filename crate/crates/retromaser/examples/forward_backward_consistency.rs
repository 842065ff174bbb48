//! The consistency triangle behind the whole crate.
//!
//! Three independent computations must agree:
//!
//! 1. The coefficient products built per detection (the measurement
//!    elements) equal the forward-evolved click likelihoods per initial
//!    Fock state.
//! 2. Bayes' theorem applied to those likelihoods equals the retrodicted
//!    state for any prior.
//! 3. The closed-form transit unitary equals the dense matrix exponential
//!    of the resonant interaction Hamiltonian.
//!
//! On top of that, the 2^s elements for s detections must sum to the
//! identity: some record always happens.
//!
//! Run with: cargo run --example forward_backward_consistency

use std::f64::consts::PI;

use retromaser::{
    bayes_posterior, completeness_deviation, matrix_exponential_check, retrodict_state,
    sequence_likelihood, DetectionSequence, MaserParams, PomElement, PriorSpec,
};

fn main() {
    let params = MaserParams::new(PI, 30).expect("valid parameters");

    // 1. forward likelihoods vs coefficient products
    let mut worst = 0.0f64;
    for s in 0..=6 {
        for sequence in DetectionSequence::all_of_length(s) {
            let likelihood = sequence_likelihood(&sequence, &params);
            let element = PomElement::for_sequence(&sequence, &params);
            for n in 0..=30 {
                worst = worst.max((likelihood.get(n) - element.coefficient(n)).abs());
            }
        }
    }
    println!("forward likelihood vs coefficients (all sequences, s <= 6): max dev {worst:.2e}");

    // 2. Bayes posterior vs retrodicted state
    let sequence = DetectionSequence::parse("eggeg").unwrap();
    let prior = PriorSpec::Cap(20);
    let forward = bayes_posterior(&sequence, &prior, &params).unwrap();
    let backward = retrodict_state(&sequence, &prior, &params).unwrap();
    let worst = (0..=30)
        .map(|n| (forward[n] - backward.distribution()[n]).abs())
        .fold(0.0, f64::max);
    println!("Bayes posterior vs retrodiction for \"{sequence}\" under {prior:?}: max dev {worst:.2e}");

    // 3. closed-form unitary vs dense exponential
    for cap in [5usize, 20, 60] {
        let deviation = matrix_exponential_check(&params, cap);
        println!("transit unitary vs dense exponential (photon cap {cap:>2}): max dev {deviation:.2e}");
    }

    // completeness of the measurement
    for s in [1usize, 5, 10] {
        let deviation = completeness_deviation(s, &params).unwrap();
        println!("completeness over all 2^{s} records: max |sum - 1| = {deviation:.2e}");
    }
}
