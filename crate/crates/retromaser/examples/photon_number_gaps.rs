//! Ground detections forbid photon numbers and punch gaps into the
//! distribution.
//!
//! Every atom that exits in the ground state left one photon behind, and it
//! cannot have done so from a trapping state. Each extra ground detection
//! shifts the forbidden numbers down by one, so runs of ground detections
//! carve out whole ranges: three of them already forbid 0-3 and 6-8, six
//! of them require at least nine photons initially (fifteen afterwards).
//!
//! Run with: cargo run --example photon_number_gaps

use std::f64::consts::PI;

use retromaser::{retrodict_state, DetectionSequence, MaserParams, PriorSpec};

fn main() {
    let params = MaserParams::new(PI, 25).expect("valid parameters");

    for spec in ["g", "ggg", "gggggg"] {
        let sequence = DetectionSequence::parse(spec).unwrap();
        let state = retrodict_state(&sequence, &PriorSpec::Uniform, &params)
            .expect("uniform prior leaves support");
        let report = state.support_report();

        println!("sequence {spec:8} ({} ground detections)", sequence.ground_count());
        println!("  least initial photon number: {}", report.min_n);
        println!("  least final photon number:   {}", report.implied_final_min);
        if report.gaps.is_empty() {
            println!("  gaps: none");
        } else {
            let gaps: Vec<String> = report
                .gaps
                .iter()
                .map(|(a, b)| if a == b { format!("{a}") } else { format!("{a}-{b}") })
                .collect();
            println!("  gaps: {}", gaps.join(", "));
        }

        let supported: Vec<usize> = (0..=25)
            .filter(|&n| state.distribution()[n] > 1e-12 * state.distribution().max())
            .collect();
        println!("  supported photon numbers: {supported:?}");
        println!();
    }
}
