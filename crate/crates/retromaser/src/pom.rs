//! Diagonal cavity-field POM elements for atomic detection sequences.
//!
//! Every element here is diagonal in the photon-number basis, so an element
//! is stored as its coefficient vector rather than a matrix. One transit
//! multiplies each coefficient by a cos² or sin² Rabi factor; a ground
//! detection additionally raises the argument shift of every later factor by
//! one, accounting for the photon the atom left behind.

use crate::error::{Error, Result};
use crate::types::{
    outcome_factor, AtomOutcome, DetectionSequence, FockWeights, MaserParams,
};

/// Excess over [0, 1] attributable to rounding. Anything larger can only be
/// an implementation bug and aborts.
const COEFF_SLACK: f64 = 1e-12;

/// Largest sequence length accepted by [`completeness_deviation`]; the
/// enumeration grows as 2^s.
pub const COMPLETENESS_MAX_LEN: usize = 16;

/// One POM element: the coefficient at photon number `n` is the relative
/// probability of observing the recorded detection sequence when the cavity
/// held `n` photons before the first atom entered.
#[derive(Debug, Clone)]
pub struct PomElement {
    coefficients: FockWeights,
    sequence: DetectionSequence,
    params: MaserParams,
}

impl PomElement {
    /// Build the element for a detection sequence.
    ///
    /// Starting from unit coefficients and shift 1, each detection in
    /// chronological order multiplies every coefficient by
    /// cos²(θ√(n+shift)) for an excited outcome or sin²(θ√(n+shift)) for a
    /// ground outcome; a ground outcome then raises the shift by one. The
    /// coefficients are exact for each photon number in `0..=n_max`; the
    /// truncation only limits how many are reported.
    pub fn for_sequence(sequence: &DetectionSequence, params: &MaserParams) -> Self {
        let mut coeffs = vec![1.0; params.n_max() + 1];
        let mut shift = 1usize;
        for outcome in sequence.iter() {
            for (n, c) in coeffs.iter_mut().enumerate() {
                *c = clamp_unit(*c * outcome_factor(outcome, n, shift, params), n);
            }
            if outcome == AtomOutcome::Ground {
                shift += 1;
            }
        }
        Self {
            coefficients: FockWeights::new(coeffs).expect("trig products are finite in [0,1]"),
            sequence: sequence.clone(),
            params: *params,
        }
    }

    pub fn coefficients(&self) -> &FockWeights {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        self.coefficients.get(n)
    }

    pub fn sequence(&self) -> &DetectionSequence {
        &self.sequence
    }

    pub fn params(&self) -> &MaserParams {
        &self.params
    }
}

fn clamp_unit(c: f64, n: usize) -> f64 {
    assert!(
        (-COEFF_SLACK..=1.0 + COEFF_SLACK).contains(&c),
        "POM coefficient {c} out of range at photon number {n}"
    );
    c.clamp(0.0, 1.0)
}

/// Enumerate all 2^s sequences of length `s`, sum their POM coefficients per
/// photon number, and return the largest |sum − 1|: the elements of a valid
/// measurement must sum to the identity.
///
/// Sequences are summed in a fixed enumeration order so the result is
/// reproducible bit for bit.
pub fn completeness_deviation(s: usize, params: &MaserParams) -> Result<f64> {
    if s > COMPLETENESS_MAX_LEN {
        return Err(Error::EnumerationTooLarge {
            length: s,
            max: COMPLETENESS_MAX_LEN,
        });
    }
    let mut sums = vec![0.0; params.n_max() + 1];
    for seq in DetectionSequence::all_of_length(s) {
        let elem = PomElement::for_sequence(&seq, params);
        for (acc, c) in sums.iter_mut().zip(elem.coefficients.iter()) {
            *acc += c;
        }
    }
    Ok(sums
        .iter()
        .map(|total| (total - 1.0).abs())
        .fold(0.0, f64::max))
}

/// The four two-atom detection orders and their closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoAtomRow {
    ExcitedExcited,
    GroundGround,
    ExcitedGround,
    GroundExcited,
}

impl TwoAtomRow {
    pub const ALL: [TwoAtomRow; 4] = [
        TwoAtomRow::ExcitedExcited,
        TwoAtomRow::GroundGround,
        TwoAtomRow::ExcitedGround,
        TwoAtomRow::GroundExcited,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TwoAtomRow::ExcitedExcited => "ee",
            TwoAtomRow::GroundGround => "gg",
            TwoAtomRow::ExcitedGround => "eg",
            TwoAtomRow::GroundExcited => "ge",
        }
    }

    pub fn sequence(self) -> DetectionSequence {
        DetectionSequence::parse(self.label()).expect("labels are valid sequences")
    }

    /// Closed-form relative probability that the cavity held `n` photons
    /// before the pair of detections:
    ///
    /// - ee: cos⁴(θ√(n+1))
    /// - gg: sin²(θ√(n+1)) · sin²(θ√(n+2))
    /// - eg: cos²(θ√(n+1)) · sin²(θ√(n+1))
    /// - ge: sin²(θ√(n+1)) · cos²(θ√(n+2))
    pub fn coefficient(self, n: usize, params: &MaserParams) -> f64 {
        use crate::types::{excited_factor, ground_factor};
        match self {
            TwoAtomRow::ExcitedExcited => {
                let c2 = excited_factor(n, 1, params);
                c2 * c2
            }
            TwoAtomRow::GroundGround => ground_factor(n, 1, params) * ground_factor(n, 2, params),
            TwoAtomRow::ExcitedGround => excited_factor(n, 1, params) * ground_factor(n, 1, params),
            TwoAtomRow::GroundExcited => ground_factor(n, 1, params) * excited_factor(n, 2, params),
        }
    }
}
