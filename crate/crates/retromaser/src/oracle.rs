//! Independent forward engine: closed-form resonant Jaynes-Cummings
//! evolution of the joint atom-field state, sequential click probabilities,
//! the Bayes posterior they imply, and a dense matrix-exponential
//! cross-check of the closed form.
//!
//! Nothing here touches the coefficient products used by the POM builder and
//! the retrodiction module; agreement between the two routes is what the
//! test suite leans on.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::retrodict::PriorSpec;
use crate::types::{AtomOutcome, DetectionSequence, FockWeights, MaserParams};

/// Joint atom-field amplitudes over the ordered basis
/// |e,0⟩..|e,M⟩, |g,0⟩..|g,M⟩ with photon cap M.
///
/// States are allowed to be sub-normalized: conditioning on an atomic
/// outcome keeps the surviving amplitudes unscaled, so the squared norm is
/// the probability of the record so far.
#[derive(Debug, Clone)]
pub struct JointState {
    photon_cap: usize,
    amps: Vec<Complex64>,
}

impl JointState {
    /// State with explicit amplitudes over the ordered basis
    /// |e,0⟩..|e,M⟩, |g,0⟩..|g,M⟩; the vector length fixes M.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(
            !amps.is_empty() && amps.len().is_multiple_of(2),
            "joint amplitudes come in |e,n> and |g,n> halves"
        );
        Self {
            photon_cap: amps.len() / 2 - 1,
            amps,
        }
    }

    /// Fresh excited atom joined to a field with the given amplitudes
    /// (zero-padded up to the cap).
    pub fn excited_atom_with_field(field: &[Complex64], photon_cap: usize) -> Self {
        assert!(
            field.len() <= photon_cap + 1,
            "field amplitudes exceed the photon cap"
        );
        let mut amps = vec![Complex64::ZERO; 2 * (photon_cap + 1)];
        amps[..field.len()].copy_from_slice(field);
        Self { photon_cap, amps }
    }

    /// Excited atom and exactly `n` photons.
    pub fn excited_with_fock(n: usize, photon_cap: usize) -> Self {
        assert!(n <= photon_cap, "Fock index {n} above the photon cap");
        let mut field = vec![Complex64::ZERO; photon_cap + 1];
        field[n] = Complex64::ONE;
        Self::excited_atom_with_field(&field, photon_cap)
    }

    pub fn photon_cap(&self) -> usize {
        self.photon_cap
    }

    pub fn amplitude_excited(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amplitude_ground(&self, n: usize) -> Complex64 {
        self.amps[self.photon_cap + 1 + n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Field amplitudes left after projecting the atom onto `outcome`,
    /// without renormalization.
    pub fn project_atom(&self, outcome: AtomOutcome) -> Vec<Complex64> {
        let half = self.photon_cap + 1;
        match outcome {
            AtomOutcome::Excited => self.amps[..half].to_vec(),
            AtomOutcome::Ground => self.amps[half..].to_vec(),
        }
    }
}

/// Apply the closed-form resonant transit unitary for one atom.
///
/// Each pair (|e,n⟩, |g,n+1⟩) rotates by φ = θ√(n+1):
///
/// ```text
/// |e,n⟩   →  cos φ |e,n⟩ + sin φ |g,n+1⟩
/// |g,n+1⟩ → −sin φ |e,n⟩ + cos φ |g,n+1⟩
/// ```
///
/// |g,0⟩ has no partner and is left fixed, as is |e,M⟩ at the truncation
/// edge (its partner lies outside the basis).
pub fn evolve_one_atom(state: &JointState, params: &MaserParams) -> JointState {
    let cap = state.photon_cap;
    let mut out = state.amps.clone();
    let half = cap + 1;
    for n in 0..cap {
        let phi = crate::types::rabi_angle(n, 1, params);
        let (sin, cos) = phi.sin_cos();
        let e_n = state.amps[n];
        let g_n1 = state.amps[half + n + 1];
        out[n] = cos * e_n - sin * g_n1;
        out[half + n + 1] = sin * e_n + cos * g_n1;
    }
    JointState {
        photon_cap: cap,
        amps: out,
    }
}

/// P(detection sequence | initial photon number n) for n = 0..=n_max.
#[derive(Debug, Clone)]
pub struct SequenceLikelihood {
    per_initial_n: Vec<f64>,
}

impl SequenceLikelihood {
    pub fn get(&self, n: usize) -> f64 {
        self.per_initial_n[n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.per_initial_n
    }

    pub fn len(&self) -> usize {
        self.per_initial_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_initial_n.is_empty()
    }
}

/// Probability of observing the detection record from each initial Fock
/// state, computed by forward evolution.
///
/// Atoms cross one at a time: for each atom a fresh excited atom is joined
/// to the remaining field amplitudes, the joint state evolves through one
/// transit, and the recorded outcome projects the atom out again. The photon
/// cap is `n_max + sequence length`, which is exact — each atom can leave at
/// most one photon behind.
pub fn sequence_likelihood(
    sequence: &DetectionSequence,
    params: &MaserParams,
) -> SequenceLikelihood {
    let cap = params.n_max() + sequence.len();
    let per_initial_n = (0..=params.n_max())
        .map(|n0| {
            let mut field = vec![Complex64::ZERO; cap + 1];
            field[n0] = Complex64::ONE;
            for outcome in sequence.iter() {
                let joint = JointState::excited_atom_with_field(&field, cap);
                let evolved = evolve_one_atom(&joint, params);
                field = evolved.project_atom(outcome);
            }
            field.iter().map(|a| a.norm_sqr()).sum()
        })
        .collect();
    SequenceLikelihood { per_initial_n }
}

/// Bayes posterior over the initial photon number: prior times forward
/// likelihood, normalized. This is the independent check of
/// [`crate::retrodict::retrodict_state`] — it never touches the coefficient
/// products.
pub fn bayes_posterior(
    sequence: &DetectionSequence,
    prior: &PriorSpec,
    params: &MaserParams,
) -> Result<FockWeights> {
    let prior_weights = prior.weights(params.n_max())?;
    let likelihood = sequence_likelihood(sequence, params);
    let posterior = FockWeights::new(
        (0..=params.n_max())
            .map(|n| prior_weights.get(n) * likelihood.get(n))
            .collect(),
    )?;
    if posterior.total() <= 0.0 {
        return Err(Error::EmptySupport {
            sequence: sequence.to_string(),
            prior: prior.to_string(),
        });
    }
    posterior.normalized()
}

/// Dimensionless interaction-picture Hamiltonian H·τ/ħ at zero detuning on
/// the joint basis |e,0..M⟩, |g,0..M⟩:
/// ⟨g,n+1|Hτ/ħ|e,n⟩ = iθ√(n+1) and its conjugate transpose.
fn hamiltonian_matrix(photon_cap: usize, params: &MaserParams) -> Array2<Complex64> {
    let half = photon_cap + 1;
    let dim = 2 * half;
    let mut h = Array2::from_elem((dim, dim), Complex64::ZERO);
    for n in 0..photon_cap {
        let coupling = crate::types::rabi_angle(n, 1, params);
        h[(half + n + 1, n)] = Complex64::new(0.0, coupling);
        h[(n, half + n + 1)] = Complex64::new(0.0, -coupling);
    }
    h
}

/// Transit unitary assembled column by column from [`evolve_one_atom`].
fn closed_form_unitary(photon_cap: usize, params: &MaserParams) -> Array2<Complex64> {
    let dim = 2 * (photon_cap + 1);
    let mut u = Array2::from_elem((dim, dim), Complex64::ZERO);
    for col in 0..dim {
        let mut amps = vec![Complex64::ZERO; dim];
        amps[col] = Complex64::ONE;
        let state = JointState::from_amplitudes(amps);
        let evolved = evolve_one_atom(&state, params);
        for (row, amp) in evolved.amps.iter().enumerate() {
            u[(row, col)] = *amp;
        }
    }
    u
}

/// Largest absolute entry difference between the closed-form transit unitary
/// and exp(−iHτ/ħ) computed by dense scaling-and-squaring, on the joint
/// basis with photon cap `photon_cap`.
pub fn matrix_exponential_check(params: &MaserParams, photon_cap: usize) -> f64 {
    let h = hamiltonian_matrix(photon_cap, params);
    let generator = h.mapv(|z| Complex64::new(0.0, -1.0) * z);
    let numeric = expm(&generator);
    let closed = closed_form_unitary(photon_cap, params);
    numeric
        .iter()
        .zip(closed.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Dense matrix exponential: scaling and squaring with a Padé(13) approximant.
// ---------------------------------------------------------------------------

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm threshold above which the argument is scaled down by powers of
/// two before the Padé(13) evaluation.
const PADE13_THETA: f64 = 5.371920351148152;

fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let norm = one_norm(a);
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(squarings as i32));

    let dim = a.nrows();
    let eye = Array2::<Complex64>::eye(dim);
    let a2 = scaled.dot(&scaled);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u = scaled.dot(&(a6.dot(&u_inner) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &eye * b(1)));
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = a6.dot(&v_inner) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &eye * b(0);

    // r = (V − U)⁻¹ (V + U)
    let mut result = solve(&(&v - &u), &(&v + &u));
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut best = 0.0_f64;
    for col in a.columns() {
        let sum: f64 = col.iter().map(|z| z.norm()).sum();
        best = best.max(sum);
    }
    best
}

/// Solve A·X = B by Gaussian elimination with partial pivoting.
fn solve(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let dim = a.nrows();
    assert_eq!(a.ncols(), dim);
    assert_eq!(b.nrows(), dim);
    let mut lhs = a.clone();
    let mut rhs = b.clone();

    for pivot in 0..dim {
        let (best_row, best_mag) = (pivot..dim)
            .map(|r| (r, lhs[(r, pivot)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty pivot range");
        assert!(best_mag > 0.0, "singular matrix in Padé solve");
        if best_row != pivot {
            for c in 0..dim {
                lhs.swap((pivot, c), (best_row, c));
            }
            for c in 0..rhs.ncols() {
                rhs.swap((pivot, c), (best_row, c));
            }
        }
        let diag = lhs[(pivot, pivot)];
        for r in pivot + 1..dim {
            let factor = lhs[(r, pivot)] / diag;
            if factor == Complex64::ZERO {
                continue;
            }
            for c in pivot..dim {
                let v = lhs[(pivot, c)];
                lhs[(r, c)] -= factor * v;
            }
            for c in 0..rhs.ncols() {
                let v = rhs[(pivot, c)];
                rhs[(r, c)] -= factor * v;
            }
        }
    }

    // back substitution
    let mut x = rhs;
    for pivot in (0..dim).rev() {
        let diag = lhs[(pivot, pivot)];
        for c in 0..x.ncols() {
            let mut acc = x[(pivot, c)];
            for k in pivot + 1..dim {
                acc -= lhs[(pivot, k)] * x[(k, c)];
            }
            x[(pivot, c)] = acc / diag;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // 50-digit evaluations of cos²(π√2) and sin²(π√2)·sin²(π√3).
    const COS2_PI_SQRT2: f64 = 0.070_891_907_165_591_16;
    const GG_AT_1: f64 = 0.516_834_580_301_353_4;

    fn params(theta: f64, n_max: usize) -> MaserParams {
        MaserParams::new(theta, n_max).unwrap()
    }

    fn seq(s: &str) -> DetectionSequence {
        DetectionSequence::parse(s).unwrap()
    }

    #[test]
    fn trapped_excited_atom_stays_excited_up_to_sign() {
        let p = params(PI, 10);
        let state = JointState::excited_with_fock(0, 10);
        let evolved = evolve_one_atom(&state, &p);
        // a full Rabi cycle: amplitude −1 on |e,0⟩, nothing leaks to |g,1⟩
        assert!((evolved.amplitude_excited(0).re + 1.0).abs() < 1e-15);
        assert!(evolved.amplitude_ground(1).norm() < 1e-15);
        assert!((evolved.norm_sqr() - 1.0).abs() < 1e-15);

        let state = JointState::excited_with_fock(3, 10);
        let evolved = evolve_one_atom(&state, &p);
        assert!((evolved.amplitude_excited(3).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_photon_exit_probability() {
        let p = params(PI, 10);
        let evolved = evolve_one_atom(&JointState::excited_with_fock(1, 10), &p);
        let p_excited = evolved.amplitude_excited(1).norm_sqr();
        assert!((p_excited - COS2_PI_SQRT2).abs() < 1e-12);
    }

    #[test]
    fn likelihood_examples() {
        let p = params(PI, 10);
        let lik = sequence_likelihood(&seq("e"), &p);
        assert!((lik.get(0) - 1.0).abs() < 1e-12);

        let lik = sequence_likelihood(&seq("g"), &p);
        assert!(lik.get(0) < 1e-12);

        let lik = sequence_likelihood(&seq("gg"), &p);
        assert!((lik.get(1) - GG_AT_1).abs() < 1e-12);
    }

    #[test]
    fn likelihood_matches_pom_coefficients() {
        use crate::pom::PomElement;
        let p = params(2.2, 20);
        for s in ["", "e", "g", "eg", "ge", "geg", "eegg"] {
            let sequence = seq(s);
            let lik = sequence_likelihood(&sequence, &p);
            let pom = PomElement::for_sequence(&sequence, &p);
            for n in 0..=20 {
                assert!(
                    (lik.get(n) - pom.coefficient(n)).abs() < 1e-12,
                    "seq={s} n={n}"
                );
            }
        }
    }

    #[test]
    fn posterior_examples() {
        let p = params(PI, 25);
        let post = bayes_posterior(&seq("gg"), &PriorSpec::Cap(3), &p).unwrap();
        assert!((post[1] - 1.0).abs() < 1e-12);

        // empty sequence leaves the prior untouched
        let post = bayes_posterior(&seq(""), &PriorSpec::Cap(3), &p).unwrap();
        for n in 0..=3 {
            assert!((post[n] - 0.25).abs() < 1e-15);
        }
        assert_eq!(post[4], 0.0);

        assert!(matches!(
            bayes_posterior(&seq("e"), &PriorSpec::Explicit(FockWeights::zeros(26)), &p),
            Err(Error::EmptySupport { .. })
        ));
    }

    #[test]
    fn matrix_exponential_agrees_with_closed_form() {
        assert!(matrix_exponential_check(&params(PI, 10), 20) <= 1e-9);
        assert!(matrix_exponential_check(&params(0.0, 10), 5) <= 1e-14);
        assert!(matrix_exponential_check(&params(1.0, 10), 5) <= 1e-10);
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = Array2::<Complex64>::from_elem((4, 4), Complex64::ZERO);
        let e = expm(&z);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((e[(i, j)].re - expected).abs() < 1e-15);
                assert!(e[(i, j)].im.abs() < 1e-15);
            }
        }
    }
}
