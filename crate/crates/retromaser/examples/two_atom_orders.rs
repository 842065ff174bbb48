//! The four two-atom detection records and why their order matters.
//!
//! A ground detection raises the photon number for every *later* atom, so
//! "excited then ground" and "ground then excited" impose different Rabi
//! factors even though they contain the same outcomes. The closed forms:
//!
//!   ee: cos⁴(θ√(n+1))
//!   gg: sin²(θ√(n+1)) sin²(θ√(n+2))
//!   eg: cos²(θ√(n+1)) sin²(θ√(n+1))
//!   ge: sin²(θ√(n+1)) cos²(θ√(n+2))
//!
//! Run with: cargo run --example two_atom_orders

use retromaser::{MaserParams, PomElement, TwoAtomRow};

fn main() {
    let params = MaserParams::new(1.0, 12).expect("valid parameters");

    println!("relative weights at theta = 1.0");
    println!(
        "{:>4}  {:>10}  {:>10}  {:>10}  {:>10}",
        "n", "ee", "gg", "eg", "ge"
    );
    for n in 0..=12 {
        let row: Vec<f64> = TwoAtomRow::ALL
            .iter()
            .map(|r| r.coefficient(n, &params))
            .collect();
        println!(
            "{n:>4}  {:>10.6}  {:>10.6}  {:>10.6}  {:>10.6}",
            row[0], row[1], row[2], row[3]
        );
    }

    println!();
    let eg = TwoAtomRow::ExcitedGround.coefficient(0, &params);
    let ge = TwoAtomRow::GroundExcited.coefficient(0, &params);
    println!("at n = 0: eg = {eg:.6} vs ge = {ge:.6} (the order of detection matters)");

    // the closed forms are exactly what the sequence builder produces
    let mut worst = 0.0f64;
    for row in TwoAtomRow::ALL {
        let built = PomElement::for_sequence(&row.sequence(), &params);
        for n in 0..=12 {
            worst = worst.max((built.coefficient(n) - row.coefficient(n, &params)).abs());
        }
    }
    println!("largest builder-vs-closed-form deviation: {worst:.2e}");
}
