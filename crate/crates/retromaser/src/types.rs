//! Shared domain types: interaction parameters, atomic detection records,
//! photon-number weight vectors, and the Rabi-angle factors every other
//! module is built from.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parameters of a single atom transit through the cavity.
///
/// The dynamics depend on the coupling constant and transit time only through
/// the dimensionless product `theta = lambda * tau` (in radians), so that
/// product is stored directly. `n_max` is the photon-number truncation used
/// for reporting; coefficients are exact per photon number regardless of it.
/// The detuning between atom and cavity mode is carried as a field but must
/// be zero: every closed form here assumes exact resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserParams {
    theta: f64,
    n_max: usize,
    detuning: f64,
}

impl MaserParams {
    /// Resonant parameters with coupling-time product `theta` and photon
    /// truncation `n_max`.
    pub fn new(theta: f64, n_max: usize) -> Result<Self> {
        Self::with_detuning(theta, n_max, 0.0)
    }

    /// Like [`MaserParams::new`] but with an explicit detuning, which is
    /// rejected unless it is exactly zero.
    pub fn with_detuning(theta: f64, n_max: usize, detuning: f64) -> Result<Self> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::InvalidTheta(theta));
        }
        if n_max < 1 {
            return Err(Error::InvalidTruncation(n_max));
        }
        if detuning != 0.0 {
            return Err(Error::NonzeroDetuning(detuning));
        }
        Ok(Self {
            theta,
            n_max,
            detuning,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// Same physics with a different truncation. Used internally when a
    /// computation needs headroom above the reporting range.
    pub(crate) fn with_n_max(self, n_max: usize) -> Self {
        Self { n_max, ..self }
    }
}

/// Measured state of one atom after its transit. Atoms always enter excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomOutcome {
    Excited,
    Ground,
}

impl AtomOutcome {
    pub fn as_char(self) -> char {
        match self {
            AtomOutcome::Excited => 'e',
            AtomOutcome::Ground => 'g',
        }
    }
}

impl fmt::Display for AtomOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Chronologically ordered record of atomic detections; the first entry is
/// the first atom through the cavity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DetectionSequence(Vec<AtomOutcome>);

impl DetectionSequence {
    pub fn new(outcomes: Vec<AtomOutcome>) -> Self {
        Self(outcomes)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Parse a string over the alphabet `{e, g}` (case-insensitive); the
    /// empty string is the empty sequence.
    pub fn parse(input: &str) -> Result<Self> {
        input
            .chars()
            .enumerate()
            .map(|(position, c)| match c.to_ascii_lowercase() {
                'e' => Ok(AtomOutcome::Excited),
                'g' => Ok(AtomOutcome::Ground),
                _ => Err(Error::ParseSequence {
                    input: input.to_string(),
                    position,
                }),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of ground detections; each one means the cavity held one more
    /// photon after that atom than before it.
    pub fn ground_count(&self) -> usize {
        self.0
            .iter()
            .filter(|o| **o == AtomOutcome::Ground)
            .count()
    }

    pub fn outcomes(&self) -> &[AtomOutcome] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = AtomOutcome> + '_ {
        self.0.iter().copied()
    }

    /// All 2^len sequences of the given length in a fixed order (bit `i` of
    /// the enumeration index selects the outcome of atom `i`, 0 = excited).
    pub fn all_of_length(len: usize) -> impl Iterator<Item = DetectionSequence> {
        assert!(len < usize::BITS as usize, "enumeration length too large");
        (0..(1usize << len)).map(move |mask| {
            (0..len)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        AtomOutcome::Ground
                    } else {
                        AtomOutcome::Excited
                    }
                })
                .collect()
        })
    }
}

impl FromIterator<AtomOutcome> for DetectionSequence {
    fn from_iter<T: IntoIterator<Item = AtomOutcome>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl FromStr for DetectionSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for DetectionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Non-negative relative weights over photon numbers `0..len`.
///
/// Weights stay unnormalized until [`FockWeights::normalized`] is called;
/// intermediate results are proportionalities and only the final answer is
/// scaled. An all-zero vector is representable (it encodes an impossible
/// history) but cannot be normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FockWeights(Vec<f64>);

impl FockWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidWeight { index, value });
            }
        }
        Ok(Self(weights))
    }

    /// Unit weight at every photon number `0..len`.
    pub fn ones(len: usize) -> Self {
        Self(vec![1.0; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// All weight on a single photon number.
    pub fn point_mass(n: usize, len: usize) -> Self {
        assert!(n < len, "point mass at {n} outside 0..{len}");
        let mut w = vec![0.0; len];
        w[n] = 1.0;
        Self(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Weight at photon number `n`; photon numbers beyond the stored range
    /// carry zero weight.
    pub fn get(&self, n: usize) -> f64 {
        self.0.get(n).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Scale so the entries sum to one. Fails on a zero total rather than
    /// producing NaNs: an impossible history should surface as an error.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(Self(self.0.iter().map(|w| w / total).collect()))
    }

    /// First `len` entries.
    pub(crate) fn truncated(&self, len: usize) -> Self {
        Self(self.0.iter().copied().take(len).collect())
    }
}

impl std::ops::Index<usize> for FockWeights {
    type Output = f64;

    fn index(&self, n: usize) -> &f64 {
        &self.0[n]
    }
}

/// Rabi rotation angle θ√(n+shift): the phase a single excitation exchanged
/// with an (n+shift−1)-photon field accumulates over one transit.
pub fn rabi_angle(n: usize, shift: usize, params: &MaserParams) -> f64 {
    debug_assert!(shift >= 1, "rabi_angle requires shift >= 1");
    params.theta() * ((n + shift) as f64).sqrt()
}

/// cos²(θ√(n+shift)): the weight factor an excited detection applies at
/// photon number `n` when `shift-1` ground detections follow it.
pub fn excited_factor(n: usize, shift: usize, params: &MaserParams) -> f64 {
    let c = rabi_angle(n, shift, params).cos();
    c * c
}

/// sin²(θ√(n+shift)): the ground-detection counterpart of
/// [`excited_factor`]; the two sum to one.
pub fn ground_factor(n: usize, shift: usize, params: &MaserParams) -> f64 {
    let s = rabi_angle(n, shift, params).sin();
    s * s
}

/// Factor applied at photon number `n` for one detection with the given
/// shift state.
pub fn outcome_factor(outcome: AtomOutcome, n: usize, shift: usize, params: &MaserParams) -> f64 {
    match outcome {
        AtomOutcome::Excited => excited_factor(n, shift, params),
        AtomOutcome::Ground => ground_factor(n, shift, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // 50-digit evaluations of the frozen reference values:
    //   cos²(π√2) and sin²(π√2).
    const COS2_PI_SQRT2: f64 = 0.070_891_907_165_591_16;
    const SIN2_PI_SQRT2: f64 = 0.929_108_092_834_408_9;

    fn pi_params(n_max: usize) -> MaserParams {
        MaserParams::new(PI, n_max).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            MaserParams::new(f64::NAN, 10),
            Err(Error::InvalidTheta(_))
        ));
        assert!(matches!(
            MaserParams::new(-0.5, 10),
            Err(Error::InvalidTheta(_))
        ));
        assert!(matches!(
            MaserParams::new(1.0, 0),
            Err(Error::InvalidTruncation(0))
        ));
        assert!(matches!(
            MaserParams::with_detuning(1.0, 10, 0.3),
            Err(Error::NonzeroDetuning(_))
        ));
        let p = MaserParams::new(0.0, 1).unwrap();
        assert_eq!(p.theta(), 0.0);
        assert_eq!(p.detuning(), 0.0);
    }

    #[test]
    fn rabi_angle_values() {
        let p = pi_params(10);
        assert_eq!(rabi_angle(0, 1, &p), PI);
        assert_eq!(rabi_angle(3, 1, &p), 2.0 * PI);
        assert!((rabi_angle(1, 1, &p) - 4.442882938158366).abs() < 1e-12);
    }

    #[test]
    fn excited_factor_values() {
        let p = pi_params(10);
        assert!((excited_factor(0, 1, &p) - 1.0).abs() < 1e-12);
        assert!((excited_factor(3, 1, &p) - 1.0).abs() < 1e-12);
        assert!((excited_factor(1, 1, &p) - COS2_PI_SQRT2).abs() < 1e-12);
    }

    #[test]
    fn ground_factor_values() {
        let p = pi_params(10);
        assert!(ground_factor(0, 1, &p) < 1e-12);
        assert!(ground_factor(8, 1, &p) < 1e-12);
        assert!((ground_factor(1, 1, &p) - SIN2_PI_SQRT2).abs() < 1e-12);
    }

    #[test]
    fn factors_sum_to_one() {
        for theta in [0.0, 0.7, 1.0, PI, 2.5, 9.9] {
            let p = MaserParams::new(theta, 10).unwrap();
            for n in 0..50 {
                for m in 1..5 {
                    let sum = excited_factor(n, m, &p) + ground_factor(n, m, &p);
                    assert!((sum - 1.0).abs() < 1e-15, "theta={theta} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn sequence_parse_and_display() {
        let seq = DetectionSequence::parse("geG").unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.ground_count(), 2);
        assert_eq!(seq.to_string(), "geg");
        assert_eq!(DetectionSequence::parse("").unwrap(), DetectionSequence::empty());
        match DetectionSequence::parse("egx") {
            Err(Error::ParseSequence { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn sequence_enumeration_is_complete_and_ordered() {
        let all: Vec<_> = DetectionSequence::all_of_length(3).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0].to_string(), "eee");
        assert_eq!(all[1].to_string(), "gee");
        assert_eq!(all[7].to_string(), "ggg");
        let unique: std::collections::HashSet<String> =
            all.iter().map(|s| s.to_string()).collect();
        assert_eq!(unique.len(), 8);
    }

    #[test]
    fn weights_validation_and_normalization() {
        assert!(matches!(
            FockWeights::new(vec![1.0, -0.1]),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
        assert!(matches!(
            FockWeights::new(vec![f64::INFINITY]),
            Err(Error::InvalidWeight { index: 0, .. })
        ));

        let w = FockWeights::new(vec![1.0, 3.0, 0.0]).unwrap();
        let n = w.normalized().unwrap();
        assert!((n.total() - 1.0).abs() < 1e-15);
        assert!((n[0] - 0.25).abs() < 1e-15);
        assert_eq!(n[2], 0.0);

        // normalizing twice changes nothing
        let nn = n.normalized().unwrap();
        for (a, b) in n.iter().zip(nn.iter()) {
            assert!((a - b).abs() < 1e-15);
        }

        assert!(matches!(
            FockWeights::zeros(4).normalized(),
            Err(Error::ZeroTotalWeight)
        ));
    }

    #[test]
    fn weights_get_beyond_range_is_zero() {
        let w = FockWeights::ones(3);
        assert_eq!(w.get(2), 1.0);
        assert_eq!(w.get(3), 0.0);
        assert_eq!(w.get(100), 0.0);
    }
}
