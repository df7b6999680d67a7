//! Teleportation of an unknown qubit through a two-qubit channel shared by
//! Alice (`A`) and Danny (`D`).
//!
//! The sender's qubit is `Q`. Alice measures `QA` in the Bell basis; Danny
//! then runs the ancilla filter (probabilistic protocol) and applies a Pauli
//! correction. Qubit order everywhere is `Q, A, D` followed by the ancilla.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::random;
use crate::states::{NoisyPairParams, PROB_TOL};
use crate::swap::{project_mixed, project_pure, swap_noisy_pairs, BellLabel, OutcomeLabel, PROB_FLOOR};
use crate::tensor::{kron, real, ComplexMatrix, QubitRegister, StateVector, NORM_TOL, ONE, ZERO};

/// `α|0⟩ + β|1⟩`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnknownQubit {
    alpha: Complex64,
    beta: Complex64,
}

impl UnknownQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n.sqrt()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn zero() -> Self {
        Self { alpha: ONE, beta: ZERO }
    }

    pub fn plus() -> Self {
        let h = real(std::f64::consts::FRAC_1_SQRT_2);
        Self { alpha: h, beta: h }
    }

    /// Haar-random qubit.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let v = random::state_vector(rng, 2);
        Self { alpha: v.amps()[0], beta: v.amps()[1] }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn state(&self) -> StateVector {
        StateVector::new(vec![self.alpha, self.beta])
    }

    /// The orthogonal qubit `-β*|0⟩ + α*|1⟩`.
    pub fn orthogonal(&self) -> Self {
        Self { alpha: -self.beta.conj(), beta: self.alpha.conj() }
    }
}

/// `a|0 x⟩ ± b|1 x̄⟩` on `AD`, with `x = 0` for a `Φ` kind and `x = 1` for a
/// `Ψ` kind; the sign follows the kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureChannel {
    kind: BellLabel,
    a: f64,
    b: f64,
}

impl PureChannel {
    pub fn new(kind: BellLabel, a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidParameter(format!("channel amplitudes ({a}, {b}) must be non-negative")));
        }
        if (a * a + b * b - 1.0).abs() > PROB_TOL {
            return Err(Error::NotNormalized((a * a + b * b).sqrt()));
        }
        Ok(Self { kind, a, b })
    }

    pub fn maximal(kind: BellLabel) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { kind, a: h, b: h }
    }

    pub fn kind(&self) -> BellLabel {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_maximal(&self) -> bool {
        (self.a - self.b).abs() <= PROB_TOL
    }

    fn offset(&self) -> usize {
        usize::from(!self.kind.is_phi())
    }

    pub fn state(&self) -> StateVector {
        let sign = match self.kind {
            BellLabel::PhiPlus | BellLabel::PsiPlus => 1.0,
            BellLabel::PhiMinus | BellLabel::PsiMinus => -1.0,
        };
        let x = self.offset();
        let mut amps = [0.0; 4];
        amps[x] = self.a;
        amps[2 + (1 - x)] = sign * self.b;
        StateVector::from_real(&amps)
    }

    /// Two-qubit filter on Danny's qubit and the ancilla. It shrinks the
    /// larger of Danny's two channel components to the size of the smaller
    /// one on ancilla outcome `|0⟩`.
    pub fn filter(&self) -> ComplexMatrix {
        let (big, small) = (self.a.max(self.b), self.a.min(self.b));
        let r = if big > 0.0 { small / big } else { 1.0 };
        let x = self.offset();
        // Danny basis state paired with the larger amplitude
        let t = if self.a >= self.b { x } else { 1 - x };
        filter_unitary(t, r)
    }
}

/// `|t0⟩ → r|t0⟩ + s|t̄1⟩`, `|t1⟩ → s|t0⟩ - r|t̄1⟩`, `|t̄0⟩ → |t̄0⟩`,
/// `|t̄1⟩ → -|t1⟩` with `s = √(1 - r²)`, indices `2·danny + ancilla`.
pub fn filter_unitary(t: usize, r: f64) -> ComplexMatrix {
    let s = (1.0 - r * r).max(0.0).sqrt();
    let tb = 1 - t;
    let idx = |d: usize, x: usize| 2 * d + x;
    let mut u = ComplexMatrix::zeros(4, 4);
    u[(idx(t, 0), idx(t, 0))] = real(r);
    u[(idx(tb, 1), idx(t, 0))] = real(s);
    u[(idx(t, 0), idx(t, 1))] = real(s);
    u[(idx(tb, 1), idx(t, 1))] = real(-r);
    u[(idx(tb, 0), idx(tb, 0))] = ONE;
    u[(idx(t, 1), idx(tb, 1))] = -ONE;
    u
}

/// Pauli correction `u = (s_channel · s_outcome)†` applied by Danny.
pub fn correction(channel: BellLabel, outcome: BellLabel) -> ComplexMatrix {
    (&channel.frame() * &outcome.frame()).dagger()
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelState {
    Pure(PureChannel),
    /// A mixed channel together with the noiseless channel it approximates,
    /// which fixes the filter and the correction table.
    Density {
        matrix: ComplexMatrix,
        frame: PureChannel,
    },
}

impl ChannelState {
    /// `a|00⟩ + b|11⟩`
    pub fn pure(a: f64, b: f64) -> Result<Self> {
        Ok(Self::Pure(PureChannel::new(BellLabel::PhiPlus, a, b)?))
    }

    pub fn density(matrix: ComplexMatrix, frame: PureChannel) -> Result<Self> {
        if matrix.rows() != 4 {
            return Err(Error::Dimension { expected: 4, found: matrix.rows() });
        }
        matrix.check_density()?;
        Ok(Self::Density { matrix, frame })
    }

    /// The maximally mixed channel `I/4`.
    pub fn maximally_mixed() -> Self {
        Self::Density {
            matrix: ComplexMatrix::identity(4).scale_real(0.25),
            frame: PureChannel::maximal(BellLabel::PhiPlus),
        }
    }

    /// The `AD` state left by swapping two identical noisy pairs with Bell
    /// outcome `label`, framed by the noiseless swap outcome.
    pub fn from_noisy_swap(params: &NoisyPairParams, label: BellLabel) -> Result<Self> {
        let outcomes = swap_noisy_pairs(params, params)?;
        let outcome = outcomes
            .into_iter()
            .find(|o| o.label == OutcomeLabel::Bell(label))
            .and_then(|o| o.state)
            .ok_or(Error::ZeroProbability)?;
        let (p0, p1) = (params.p0(), params.p1());
        let frame = if label.is_phi() {
            let n = (p0 * p0 + p1 * p1).sqrt();
            PureChannel::new(label, p0 / n, p1 / n)?
        } else {
            PureChannel::maximal(label)
        };
        Self::density(outcome.to_matrix(), frame)
    }

    /// The pure channel itself, or the frame of a mixed one.
    pub fn frame(&self) -> PureChannel {
        match self {
            Self::Pure(p) => *p,
            Self::Density { frame, .. } => *frame,
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            Self::Pure(p) => p.state().density(),
            Self::Density { matrix, .. } => matrix.clone(),
        }
    }
}

/// One branch of a teleportation run.
#[derive(Clone, Debug, PartialEq)]
pub struct TeleportResult {
    pub outcome: BellLabel,
    /// Probability of Alice's Bell outcome.
    pub outcome_probability: f64,
    /// `true` on ancilla outcome `|0⟩` (always for the standard protocol).
    pub success: bool,
    /// Probability of this ancilla outcome given Alice's outcome.
    pub success_probability: f64,
    /// Danny's corrected qubit, absent on zero-probability branches.
    pub output_state: Option<ComplexMatrix>,
    pub fidelity: Option<f64>,
}

impl TeleportResult {
    /// Joint probability of Alice's outcome and this ancilla outcome.
    pub fn probability(&self) -> f64 {
        self.outcome_probability * self.success_probability
    }
}

/// `Σ` joint probability over successful branches.
pub fn total_success_probability(results: &[TeleportResult]) -> f64 {
    results.iter().filter(|r| r.success).map(TeleportResult::probability).sum()
}

pub fn total_probability(results: &[TeleportResult]) -> f64 {
    results.iter().map(TeleportResult::probability).sum()
}

/// `⟨χ|ρ|χ⟩`
pub fn fidelity(chi: &UnknownQubit, rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != 2 {
        return Err(Error::Dimension { expected: 2, found: rho.rows() });
    }
    rho.check_density()?;
    let v = chi.state();
    let rv = rho.apply(&v)?;
    Ok(v.inner(&rv).re.clamp(0.0, 1.0))
}

fn fidelity_unchecked(chi: &UnknownQubit, rho: &ComplexMatrix) -> f64 {
    let v = chi.state();
    let rv = rho.apply(&v).expect("qubit dimensions agree");
    v.inner(&rv).re.clamp(0.0, 1.0)
}

fn pure_result(
    chi: &UnknownQubit,
    outcome: BellLabel,
    outcome_probability: f64,
    success: bool,
    success_probability: f64,
    state: Option<StateVector>,
    u: &ComplexMatrix,
) -> TeleportResult {
    let output_state = state.map(|s| u.apply(&s).expect("qubit dimensions agree").density());
    let fidelity = output_state.as_ref().map(|rho| fidelity_unchecked(chi, rho));
    TeleportResult { outcome, outcome_probability, success, success_probability, output_state, fidelity }
}

fn alice_outcomes(chi: &UnknownQubit, channel: &PureChannel) -> Result<Vec<(BellLabel, f64, Option<StateVector>)>> {
    let reg = QubitRegister::from_chars("QAD")?;
    let full = chi.state().kron(&channel.state());
    BellLabel::ALL
        .into_iter()
        .map(|label| {
            let (p, danny) = project_pure(&full, &reg, &["Q", "A"], &label.state())?;
            Ok((label, p, danny))
        })
        .collect()
}

/// Standard teleportation through a maximally entangled pure channel: four
/// outcomes, each corrected back to `|χ⟩`.
pub fn teleport_standard(chi: &UnknownQubit, channel: &ChannelState) -> Result<Vec<TeleportResult>> {
    let ChannelState::Pure(ch) = channel else {
        return Err(Error::InvalidParameter("standard teleportation needs a pure channel".into()));
    };
    if !ch.is_maximal() {
        return Err(Error::NonMaximalChannel { a: ch.a, b: ch.b });
    }
    Ok(alice_outcomes(chi, ch)?
        .into_iter()
        .map(|(label, p, danny)| {
            let u = correction(ch.kind, label);
            pure_result(chi, label, p, true, 1.0, danny, &u)
        })
        .collect())
}

/// Probabilistic teleportation through `a|0x⟩ ± b|1x̄⟩`. Returns eight
/// branches: for each Bell outcome, ancilla `|0⟩` (success) then `|1⟩`.
pub fn teleport_probabilistic(chi: &UnknownQubit, channel: &ChannelState) -> Result<Vec<TeleportResult>> {
    let ChannelState::Pure(ch) = channel else {
        return Err(Error::InvalidParameter("probabilistic teleportation needs a pure channel".into()));
    };
    let filter = ch.filter();
    let reg = QubitRegister::from_chars("DX")?;
    let mut out = Vec::with_capacity(8);
    for (label, p, danny) in alice_outcomes(chi, ch)? {
        let u = correction(ch.kind, label);
        let Some(danny) = danny else {
            for success in [true, false] {
                out.push(pure_result(chi, label, p, success, 0.0, None, &u));
            }
            continue;
        };
        let filtered = filter.apply(&danny.kron(&StateVector::basis(2, 0)))?;
        for (success, ancilla) in [(true, 0), (false, 1)] {
            let (q, state) = project_pure(&filtered, &reg, &["X"], &StateVector::basis(2, ancilla))?;
            out.push(pure_result(chi, label, p, success, q, state, &u));
        }
    }
    Ok(out)
}

/// Teleportation through a mixed channel given Alice's outcome: Bell
/// projection, ancilla filter built from the channel's frame, ancilla
/// measurement and Pauli correction. Returns the success branch then the
/// failure branch.
pub fn teleport_noisy(
    chi: &UnknownQubit,
    channel: &ChannelState,
    alice_outcome: BellLabel,
) -> Result<Vec<TeleportResult>> {
    let frame = channel.frame();
    let rho_ad = channel.matrix();
    let reg = QubitRegister::from_chars("QAD")?;
    let full = kron(&chi.state().density(), &rho_ad);
    let (p, danny) = project_mixed(&full, &reg, &["Q", "A"], &alice_outcome.state())?;
    let danny = danny.ok_or(Error::ZeroProbability)?;
    let ancilla0 = StateVector::basis(2, 0).density();
    let filtered = frame.filter().conjugate(&kron(&danny, &ancilla0));
    let u = correction(frame.kind, alice_outcome);
    let reg = QubitRegister::from_chars("DX")?;
    [(true, 0), (false, 1)]
        .into_iter()
        .map(|(success, ancilla)| {
            let (q, state) = project_mixed(&filtered, &reg, &["X"], &StateVector::basis(2, ancilla))?;
            let output_state = state.map(|s| u.conjugate(&s));
            let fidelity = output_state.as_ref().map(|rho| fidelity_unchecked(chi, rho));
            Ok(TeleportResult {
                outcome: alice_outcome,
                outcome_probability: p,
                success,
                success_probability: q,
                output_state,
                fidelity,
            })
        })
        .collect()
}

/// [`teleport_noisy`] over all four Bell outcomes; zero-probability outcomes
/// are skipped.
pub fn teleport_noisy_all(chi: &UnknownQubit, channel: &ChannelState) -> Result<Vec<TeleportResult>> {
    let mut out = Vec::with_capacity(8);
    for label in BellLabel::ALL {
        match teleport_noisy(chi, channel, label) {
            Ok(r) => out.extend(r),
            Err(Error::ZeroProbability) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Success-weighted fidelity `Σ P F / Σ P` over successful branches, or
/// `None` when the protocol never succeeds.
pub fn average_success_fidelity(results: &[TeleportResult]) -> Option<f64> {
    let mut weight = 0.0;
    let mut total = 0.0;
    for r in results.iter().filter(|r| r.success) {
        if let Some(f) = r.fidelity {
            weight += r.probability();
            total += r.probability() * f;
        }
    }
    (weight > PROB_FLOOR).then(|| total / weight)
}
