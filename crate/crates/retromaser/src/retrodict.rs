//! Retrodictive field states: what a detection record says about the cavity
//! photon number before the atoms went through.
//!
//! The backward update for one atom is the transit read in reverse: an
//! excited detection scales each weight by cos²(θ√(n+1)); a ground detection
//! pulls the weight down from one photon higher and scales it by
//! sin²(θ√(n+1)). Iterating over the record from the last atom to the first
//! turns weights on the final field into weights on the initial field.

use std::fmt;

use crate::error::{Error, Result};
use crate::pom::PomElement;
use crate::types::{
    excited_factor, ground_factor, AtomOutcome, DetectionSequence, FockWeights, MaserParams,
};

/// Entries below this fraction of the largest weight count as unsupported.
/// Trapping-state zeros computed in floating point land around 1e-31 rather
/// than exactly zero, so support detection needs a relative cutoff.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Prior knowledge about the photon number before the first atom entered.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    /// No information within the truncated basis.
    Uniform,
    /// Known to hold at most `max_n` photons.
    Cap(usize),
    /// Explicit relative weights (shorter vectors are padded with zeros).
    Explicit(FockWeights),
}

impl PriorSpec {
    /// Relative prior weights over `0..=n_max`.
    pub fn weights(&self, n_max: usize) -> Result<FockWeights> {
        match self {
            PriorSpec::Uniform => Ok(FockWeights::ones(n_max + 1)),
            PriorSpec::Cap(max_n) => {
                if *max_n > n_max {
                    return Err(Error::CapExceedsTruncation {
                        cap: *max_n,
                        n_max,
                    });
                }
                let w = (0..=n_max)
                    .map(|n| if n <= *max_n { 1.0 } else { 0.0 })
                    .collect();
                FockWeights::new(w)
            }
            PriorSpec::Explicit(weights) => {
                if weights.len() > n_max + 1 {
                    return Err(Error::WeightCountMismatch {
                        expected: n_max + 1,
                        actual: weights.len(),
                        n_max,
                    });
                }
                let w = (0..=n_max).map(|n| weights.get(n)).collect();
                FockWeights::new(w)
            }
        }
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorSpec::Uniform => write!(f, "uniform"),
            PriorSpec::Cap(max_n) => write!(f, "cap:{max_n}"),
            PriorSpec::Explicit(w) => write!(f, "explicit[{} weights]", w.len()),
        }
    }
}

/// Weights assigned to the field after the last atom was detected.
#[derive(Debug, Clone, PartialEq)]
pub enum FinalField {
    /// Completely unmeasured final field: unit weight at every photon
    /// number with no upper cutoff. Retrodicting from this reproduces the
    /// POM coefficients exactly.
    Unmeasured,
    /// Explicit relative weights; photon numbers beyond the stored range
    /// carry zero weight, so ground detections shrink the support from the
    /// top.
    Weights(FockWeights),
}

/// One backward step of the photon-number weights through a single detected
/// atom.
///
/// The input describes the field just after the atom was detected, the
/// output the field just before it entered; both run over `0..=n_max`. The
/// output is relative weight, not normalized. An all-zero output is legal
/// and means no history is consistent with the outcome; callers decide how
/// to surface that (exact zeros only arise from zero inputs — trapping-state
/// zeros are rounding-level small instead).
pub fn backward_update(
    dist_at_tm: &FockWeights,
    outcome: AtomOutcome,
    params: &MaserParams,
) -> Result<FockWeights> {
    let n_max = params.n_max();
    if dist_at_tm.len() != n_max + 1 {
        return Err(Error::WeightCountMismatch {
            expected: n_max + 1,
            actual: dist_at_tm.len(),
            n_max,
        });
    }
    let out = (0..=n_max)
        .map(|n| match outcome {
            AtomOutcome::Excited => dist_at_tm.get(n) * excited_factor(n, 1, params),
            // one photon of the final field came from this atom
            AtomOutcome::Ground => dist_at_tm.get(n + 1) * ground_factor(n, 1, params),
        })
        .collect();
    FockWeights::new(out)
}

/// Backward-evolve a final-field description through a whole detection
/// sequence, returning relative weights on the initial photon number over
/// `0..=n_max`.
///
/// Updates run in reverse chronological order: the last-detected atom is
/// undone first. The result equals the POM coefficient at `n` times the
/// final weight at `n + ground_count`. For [`FinalField::Unmeasured`] the
/// working range is widened by one photon per ground detection so the
/// reported weights carry no truncation error.
pub fn retrodict_with_final(
    final_field: &FinalField,
    sequence: &DetectionSequence,
    params: &MaserParams,
) -> Result<FockWeights> {
    let n_max = params.n_max();
    let headroom = n_max + sequence.ground_count();
    let wide = params.with_n_max(headroom);
    let mut dist = match final_field {
        FinalField::Unmeasured => FockWeights::ones(headroom + 1),
        FinalField::Weights(weights) => {
            if weights.len() > n_max + 1 {
                return Err(Error::WeightCountMismatch {
                    expected: n_max + 1,
                    actual: weights.len(),
                    n_max,
                });
            }
            FockWeights::new((0..=headroom).map(|n| weights.get(n)).collect())?
        }
    };
    for outcome in sequence.iter().rev() {
        dist = backward_update(&dist, outcome, &wide)?;
    }
    Ok(dist.truncated(n_max + 1))
}

/// Normalized retrodictive photon-number distribution at the moment before
/// the first atom entered the cavity.
#[derive(Debug, Clone)]
pub struct RetrodictiveState {
    distribution: FockWeights,
    sequence: DetectionSequence,
    prior: PriorSpec,
}

/// Support summary of a retrodictive state: the least photon number
/// consistent with the record, the interior runs of forbidden numbers, and
/// the least photon number the cavity can hold afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport {
    pub min_n: usize,
    /// Inclusive `(start, end)` runs of unsupported photon numbers above
    /// `min_n`.
    pub gaps: Vec<(usize, usize)>,
    /// `min_n` plus one photon per ground detection.
    pub implied_final_min: usize,
}

/// Bayes-consistent retrodiction: the posterior over the initial photon
/// number given the detection record, an unmeasured final field, and the
/// prior.
///
/// The distribution is proportional to `prior(n) ·
/// pom_coefficient(n)` and is normalized exactly once, here. A posterior
/// with zero total weight (the prior excludes every consistent photon
/// number) is an error naming the sequence and the prior.
pub fn retrodict_state(
    sequence: &DetectionSequence,
    prior: &PriorSpec,
    params: &MaserParams,
) -> Result<RetrodictiveState> {
    let prior_weights = prior.weights(params.n_max())?;
    let pom = PomElement::for_sequence(sequence, params);
    let posterior = FockWeights::new(
        (0..=params.n_max())
            .map(|n| prior_weights.get(n) * pom.coefficient(n))
            .collect(),
    )?;
    if posterior.total() <= 0.0 {
        return Err(Error::EmptySupport {
            sequence: sequence.to_string(),
            prior: prior.to_string(),
        });
    }
    Ok(RetrodictiveState {
        distribution: posterior.normalized()?,
        sequence: sequence.clone(),
        prior: prior.clone(),
    })
}

impl RetrodictiveState {
    pub fn distribution(&self) -> &FockWeights {
        &self.distribution
    }

    pub fn sequence(&self) -> &DetectionSequence {
        &self.sequence
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    /// Supported photon numbers and the gaps between them, using the
    /// [`SUPPORT_EPS`] relative cutoff.
    pub fn support_report(&self) -> SupportReport {
        let cutoff = SUPPORT_EPS * self.distribution.max();
        let supported: Vec<bool> = self.distribution.iter().map(|p| p > cutoff).collect();
        let min_n = supported
            .iter()
            .position(|s| *s)
            .expect("a normalized distribution has support");

        let mut gaps = Vec::new();
        let mut run_start: Option<usize> = None;
        for (n, sup) in supported.iter().enumerate().skip(min_n) {
            if *sup {
                if let Some(start) = run_start.take() {
                    gaps.push((start, n - 1));
                }
            } else if run_start.is_none() {
                run_start = Some(n);
            }
        }
        if let Some(start) = run_start {
            gaps.push((start, supported.len() - 1));
        }

        SupportReport {
            min_n,
            gaps,
            implied_final_min: min_n + self.sequence.ground_count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // 50-digit evaluation of cos²(π√2).
    const COS2_PI_SQRT2: f64 = 0.070_891_907_165_591_16;

    fn params(theta: f64, n_max: usize) -> MaserParams {
        MaserParams::new(theta, n_max).unwrap()
    }

    fn seq(s: &str) -> DetectionSequence {
        DetectionSequence::parse(s).unwrap()
    }

    #[test]
    fn backward_update_excited_from_uniform() {
        let p = params(PI, 10);
        let out = backward_update(&FockWeights::ones(11), AtomOutcome::Excited, &p).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-12);
        assert!((out[1] - COS2_PI_SQRT2).abs() < 1e-12);
    }

    #[test]
    fn backward_update_ground_from_uniform_has_trapping_zeros() {
        let p = params(PI, 10);
        let out = backward_update(&FockWeights::ones(11), AtomOutcome::Ground, &p).unwrap();
        for n in [0, 3, 8] {
            assert!(out[n] < 1e-12, "n={n}");
        }
        assert!(out[1] > 0.5);
        // the top entry pulls from beyond the truncation, which is empty
        assert_eq!(out[10], 0.0);
    }

    #[test]
    fn backward_update_from_trapped_point_mass_is_negligible() {
        // one photon for certain, atom out in the ground state: forbidden
        let p = params(PI, 10);
        let dist = FockWeights::point_mass(1, 11);
        let out = backward_update(&dist, AtomOutcome::Ground, &p).unwrap();
        assert!(out.total() < 1e-30);
    }

    #[test]
    fn backward_update_checks_length() {
        let p = params(PI, 10);
        assert!(matches!(
            backward_update(&FockWeights::ones(5), AtomOutcome::Excited, &p),
            Err(Error::WeightCountMismatch { .. })
        ));
    }

    #[test]
    fn unmeasured_retrodiction_matches_pom_coefficients() {
        let p = params(2.2, 30);
        let s = seq("gegge");
        let weights = retrodict_with_final(&FinalField::Unmeasured, &s, &p).unwrap();
        let pom = PomElement::for_sequence(&s, &p);
        for n in 0..=30 {
            assert!((weights[n] - pom.coefficient(n)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn excited_then_ground_gives_the_product_form() {
        let p = params(PI, 20);
        let weights = retrodict_with_final(&FinalField::Unmeasured, &seq("eg"), &p).unwrap();
        for n in 0..=20 {
            let expected =
                crate::types::excited_factor(n, 1, &p) * crate::types::ground_factor(n, 1, &p);
            assert!((weights[n] - expected).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn empty_sequence_retrodicts_the_final_field() {
        let p = params(PI, 8);
        let weights = retrodict_with_final(&FinalField::Unmeasured, &seq(""), &p).unwrap();
        assert!(weights.iter().all(|w| w == 1.0));
    }

    #[test]
    fn six_ground_detections_need_nine_photons() {
        let p = params(PI, 25);
        let weights =
            retrodict_with_final(&FinalField::Unmeasured, &seq("gggggg"), &p).unwrap();
        for n in 0..=8 {
            assert!(weights[n] < 1e-12, "n={n}");
        }
        assert!(weights[9] > 1e-3);
    }

    #[test]
    fn truncated_final_field_shrinks_support_from_the_top() {
        let p = params(0.9, 10);
        let s = seq("gg");
        let weights =
            retrodict_with_final(&FinalField::Weights(FockWeights::ones(11)), &s, &p).unwrap();
        // initial n=10 needs final n=12, which the truncated field excludes
        assert_eq!(weights[10], 0.0);
        assert_eq!(weights[9], 0.0);
        assert!(weights[8] > 0.0);

        // more ground detections than the truncation admits: nothing is left
        let all_ground: DetectionSequence =
            std::iter::repeat_n(AtomOutcome::Ground, 11).collect();
        let empty = retrodict_with_final(
            &FinalField::Weights(FockWeights::ones(11)),
            &all_ground,
            &p,
        )
        .unwrap();
        assert_eq!(empty.total(), 0.0);
    }

    #[test]
    fn capped_prior_pins_one_photon() {
        let p = params(PI, 25);
        let state = retrodict_state(&seq("gg"), &PriorSpec::Cap(3), &p).unwrap();
        assert!((state.distribution()[1] - 1.0).abs() < 1e-12);
        for n in [0, 2, 3] {
            assert!(state.distribution()[n] < 1e-12);
        }
        for n in 4..=25 {
            assert_eq!(state.distribution()[n], 0.0, "prior excludes n={n}");
        }
    }

    #[test]
    fn empty_sequence_returns_the_prior() {
        let p = params(PI, 9);
        let state = retrodict_state(&seq(""), &PriorSpec::Uniform, &p).unwrap();
        for n in 0..=9 {
            assert!((state.distribution()[n] - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_prior_is_an_empty_posterior() {
        let p = params(PI, 10);
        let prior = PriorSpec::Explicit(FockWeights::zeros(11));
        match retrodict_state(&seq("e"), &prior, &p) {
            Err(Error::EmptySupport { sequence, prior }) => {
                assert_eq!(sequence, "e");
                assert!(prior.contains("explicit"));
            }
            other => panic!("expected empty support, got {other:?}"),
        }
    }

    #[test]
    fn prior_validation() {
        assert!(matches!(
            PriorSpec::Cap(30).weights(25),
            Err(Error::CapExceedsTruncation { cap: 30, n_max: 25 })
        ));
        assert!(matches!(
            PriorSpec::Explicit(FockWeights::ones(30)).weights(25),
            Err(Error::WeightCountMismatch { .. })
        ));
        // shorter explicit priors are padded with zeros
        let w = PriorSpec::Explicit(FockWeights::ones(3)).weights(5).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn support_report_finds_gaps() {
        let p = params(PI, 25);
        let state = retrodict_state(&seq("ggg"), &PriorSpec::Uniform, &p).unwrap();
        let report = state.support_report();
        assert_eq!(report.min_n, 4);
        assert_eq!(report.implied_final_min, 7);
        assert!(report.gaps.contains(&(6, 8)));

        let state = retrodict_state(&seq("gggggg"), &PriorSpec::Uniform, &p).unwrap();
        let report = state.support_report();
        assert_eq!(report.min_n, 9);
        assert_eq!(report.implied_final_min, 15);

        let state = retrodict_state(&seq("e"), &PriorSpec::Uniform, &p).unwrap();
        let report = state.support_report();
        assert_eq!(report.min_n, 0);
        assert!(report.gaps.is_empty());
    }
}
