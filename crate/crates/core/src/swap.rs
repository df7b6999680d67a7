//! Entanglement swapping.
//!
//! Two Schmidt pairs `AB`, `CD` are swapped by measuring `BC` in a
//! generalized Bell basis, leaving `AD` entangled. Three pairs `AB`, `CD`,
//! `EF` are swapped by a GHZ measurement on `BDF`, leaving `ACE`. Noisy pairs
//! (white-noise mixtures) are swapped with a standard Bell measurement.
//!
//! Every analytic route has a numeric twin that builds the full register,
//! projects the measured qubits and traces them out. The twins share no code
//! with the closed forms.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::measures::{
    concurrence_schmidt, concurrence_two_qubit_pure, negativity_schmidt, tripartite_measure_geometric, Measure,
    Tripartite,
};
use crate::states::{NoisyPairParams, SchmidtPair, XState, PROB_TOL};
use crate::tensor::{kron, pauli, real, ComplexMatrix, IndexSplit, QubitRegister, StateVector, ZERO};

/// Outcomes at or below this probability carry no state.
pub const PROB_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn name(self) -> &'static str {
        match self {
            Self::PhiPlus => "Phi+",
            Self::PhiMinus => "Phi-",
            Self::PsiPlus => "Psi+",
            Self::PsiMinus => "Psi-",
        }
    }

    /// `(|00⟩ ± |11⟩)/√2` or `(|01⟩ ± |10⟩)/√2`.
    pub fn state(self) -> StateVector {
        let h = FRAC_1_SQRT_2;
        StateVector::from_real(&match self {
            Self::PhiPlus => [h, 0.0, 0.0, h],
            Self::PhiMinus => [h, 0.0, 0.0, -h],
            Self::PsiPlus => [0.0, h, h, 0.0],
            Self::PsiMinus => [0.0, h, -h, 0.0],
        })
    }

    /// Pauli frame `s` with `|B⟩ = (I ⊗ s)|Φ+⟩`: `I`, `Z`, `X`, `XZ`.
    pub fn frame(self) -> ComplexMatrix {
        match self {
            Self::PhiPlus => pauli(0),
            Self::PhiMinus => pauli(3),
            Self::PsiPlus => pauli(1),
            Self::PsiMinus => &pauli(1) * &pauli(3),
        }
    }

    pub fn is_phi(self) -> bool {
        matches!(self, Self::PhiPlus | Self::PhiMinus)
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeLabel {
    Bell(BellLabel),
    /// GHZ basis index 0..8.
    Ghz(u8),
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bell(b) => b.fmt(f),
            Self::Ghz(g) => write!(f, "G{g}"),
        }
    }
}

/// One measurement branch. `state` is `None` when the branch has zero
/// probability.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapOutcome<S> {
    pub label: OutcomeLabel,
    pub probability: f64,
    pub state: Option<S>,
}

impl<S> SwapOutcome<S> {
    fn new(label: OutcomeLabel, probability: f64, state: impl FnOnce() -> S) -> Self {
        let state = (probability > PROB_FLOOR).then(state);
        Self { label, probability, state }
    }
}

/// Probability-weighted value over the branches that occurred.
pub fn weighted_average<S>(outcomes: &[SwapOutcome<S>], mut value: impl FnMut(&S) -> Result<f64>) -> Result<f64> {
    let mut total = 0.0;
    for o in outcomes {
        if let Some(s) = &o.state {
            total += o.probability * value(s)?;
        }
    }
    Ok(total)
}

pub fn total_probability<S>(outcomes: &[SwapOutcome<S>]) -> f64 {
    outcomes.iter().map(|o| o.probability).sum()
}

/// Real generalized Bell basis on `BC`:
/// `a0|00⟩ + b0|11⟩`, `b0|00⟩ - a0|11⟩`, `a1|01⟩ + b1|10⟩`, `b1|01⟩ - a1|10⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    a0: f64,
    b0: f64,
    a1: f64,
    b1: f64,
}

impl MeasurementBasis {
    pub fn new(a0: f64, b0: f64, a1: f64, b1: f64) -> Result<Self> {
        if [a0, b0, a1, b1].iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidParameter("basis amplitudes must be non-negative".into()));
        }
        for (a, b) in [(a0, b0), (a1, b1)] {
            if (a * a + b * b - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidParameter(format!("amplitudes ({a}, {b}) are not normalized")));
            }
        }
        Ok(Self { a0, b0, a1, b1 })
    }

    /// Basis with `b_i = √(1 - a_i²)`.
    pub fn from_amplitudes(a0: f64, a1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a0) || !(0.0..=1.0).contains(&a1) {
            return Err(Error::InvalidParameter(format!("amplitudes ({a0}, {a1}) outside [0, 1]")));
        }
        Self::new(a0, (1.0 - a0 * a0).sqrt(), a1, (1.0 - a1 * a1).sqrt())
    }

    pub fn bell() -> Self {
        let h = FRAC_1_SQRT_2;
        Self { a0: h, b0: h, a1: h, b1: h }
    }

    pub fn amplitudes(&self) -> (f64, f64, f64, f64) {
        (self.a0, self.b0, self.a1, self.b1)
    }

    /// `|a0 b0| + |a1 b1|`; equals 1 only for the Bell basis.
    pub fn entangling_weight(&self) -> f64 {
        self.a0 * self.b0 + self.a1 * self.b1
    }

    /// The four basis vectors in `Φ̃+, Φ̃-, Ψ̃+, Ψ̃-` order.
    pub fn vectors(&self) -> [StateVector; 4] {
        let (a0, b0, a1, b1) = self.amplitudes();
        [
            StateVector::from_real(&[a0, 0.0, 0.0, b0]),
            StateVector::from_real(&[b0, 0.0, 0.0, -a0]),
            StateVector::from_real(&[0.0, a1, b1, 0.0]),
            StateVector::from_real(&[0.0, b1, -a1, 0.0]),
        ]
    }

    /// Gram matrix of [`Self::vectors`].
    pub fn gram(&self) -> ComplexMatrix {
        let v = self.vectors();
        ComplexMatrix::from_fn(4, 4, |i, j| v[i].inner(&v[j]))
    }
}

/// Projects the `measured` qubits of a pure state onto `onto`.
///
/// Returns the branch probability and the normalized state of the remaining
/// qubits (in register order), or `None` for a zero-probability branch.
pub fn project_pure<S: AsRef<str>>(
    state: &StateVector,
    reg: &QubitRegister,
    measured: &[S],
    onto: &StateVector,
) -> Result<(f64, Option<StateVector>)> {
    if state.dim() != reg.dim() {
        return Err(Error::Dimension { expected: reg.dim(), found: state.dim() });
    }
    let split = IndexSplit::new(reg.len(), reg.positions(measured)?);
    if onto.dim() != split.sub_dim() {
        return Err(Error::Dimension { expected: split.sub_dim(), found: onto.dim() });
    }
    let amps = state.amps();
    let reduced = StateVector::new(
        (0..split.rest_dim())
            .map(|k| (0..split.sub_dim()).map(|m| onto.amps()[m].conj() * amps[split.compose(m, k)]).sum())
            .collect(),
    );
    let p = reduced.norm_sqr();
    Ok((p, (p > PROB_FLOOR).then(|| reduced.scale(real(1.0 / p.sqrt())))))
}

/// Density-matrix analogue of [`project_pure`]:
/// `Tr_measured[(I ⊗ P) ρ (I ⊗ P)] / p` with `P = |onto⟩⟨onto|`.
pub fn project_mixed<S: AsRef<str>>(
    rho: &ComplexMatrix,
    reg: &QubitRegister,
    measured: &[S],
    onto: &StateVector,
) -> Result<(f64, Option<ComplexMatrix>)> {
    if rho.rows() != reg.dim() || !rho.is_square() {
        return Err(Error::Dimension { expected: reg.dim(), found: rho.rows() });
    }
    let split = IndexSplit::new(reg.len(), reg.positions(measured)?);
    if onto.dim() != split.sub_dim() {
        return Err(Error::Dimension { expected: split.sub_dim(), found: onto.dim() });
    }
    let b = onto.amps();
    let (kd, md) = (split.rest_dim(), split.sub_dim());
    let reduced = ComplexMatrix::from_fn(kd, kd, |k, l| {
        let mut acc = ZERO;
        for m in 0..md {
            if b[m] == ZERO {
                continue;
            }
            for n in 0..md {
                if b[n] == ZERO {
                    continue;
                }
                acc += b[m].conj() * rho[(split.compose(m, k), split.compose(n, l))] * b[n];
            }
        }
        acc
    });
    let p = reduced.trace().re;
    Ok((p, (p > PROB_FLOOR).then(|| reduced.scale_real(1.0 / p))))
}

fn bell_order() -> [OutcomeLabel; 4] {
    BellLabel::ALL.map(OutcomeLabel::Bell)
}

/// Outcomes of measuring `BC` of `|φ⟩_AB |φ⟩_CD` in `basis`, as pure states
/// of `AD`.
pub fn swap_pure_pairs(ab: &SchmidtPair, cd: &SchmidtPair, basis: &MeasurementBasis) -> Vec<SwapOutcome<StateVector>> {
    let (p0, p1, q0, q1) = (ab.p0(), ab.p1(), cd.p0(), cd.p1());
    let (a0, b0, a1, b1) = basis.amplitudes();
    let (s00, s11) = ((p0 * q0).sqrt(), (p1 * q1).sqrt());
    let (s01, s10) = ((p0 * q1).sqrt(), (p1 * q0).sqrt());
    // unnormalized AD amplitudes over |00⟩, |01⟩, |10⟩, |11⟩
    let branches: [[f64; 4]; 4] = [
        [s00 * a0, 0.0, 0.0, s11 * b0],
        [s00 * b0, 0.0, 0.0, -s11 * a0],
        [0.0, s01 * a1, s10 * b1, 0.0],
        [0.0, s01 * b1, -s10 * a1, 0.0],
    ];
    let probabilities = [
        p0 * q0 * a0 * a0 + p1 * q1 * b0 * b0,
        p0 * q0 * b0 * b0 + p1 * q1 * a0 * a0,
        p0 * q1 * a1 * a1 + q0 * p1 * b1 * b1,
        p0 * q1 * b1 * b1 + q0 * p1 * a1 * a1,
    ];
    bell_order()
        .into_iter()
        .zip(branches.iter().zip(probabilities))
        .map(|(label, (amps, p))| {
            SwapOutcome::new(label, p, || {
                let n = p.sqrt();
                StateVector::from_real(&amps.map(|x| x / n))
            })
        })
        .collect()
}

/// Numeric twin of [`swap_pure_pairs`]: full four-qubit projection.
pub fn swap_pure_pairs_numeric(
    ab: &SchmidtPair,
    cd: &SchmidtPair,
    basis: &MeasurementBasis,
) -> Result<Vec<SwapOutcome<StateVector>>> {
    let reg = QubitRegister::from_chars("ABCD")?;
    let full = ab.state().kron(&cd.state());
    bell_order()
        .into_iter()
        .zip(basis.vectors())
        .map(|(label, v)| {
            let (p, state) = project_pure(&full, &reg, &["B", "C"], &v)?;
            Ok(SwapOutcome { label, probability: p, state })
        })
        .collect()
}

/// `4√(p0 p0' p1 p1') (|a0 b0| + |a1 b1|)`
pub fn average_swapped_concurrence_pure(ab: &SchmidtPair, cd: &SchmidtPair, basis: &MeasurementBasis) -> f64 {
    4.0 * (ab.p0() * cd.p0() * ab.p1() * cd.p1()).sqrt() * basis.entangling_weight()
}

/// Bell-basis average negativity: `N_AB · N_CD`.
pub fn average_swapped_negativity_pure(ab: &SchmidtPair, cd: &SchmidtPair) -> f64 {
    negativity_schmidt(ab) * negativity_schmidt(cd)
}

/// Probability-weighted concurrence of the `AD` outcomes.
pub fn weighted_swapped_concurrence(outcomes: &[SwapOutcome<StateVector>]) -> Result<f64> {
    weighted_average(outcomes, concurrence_two_qubit_pure)
}

/// `(|x⟩ ± |x̄⟩)/√2` with `x = g/2` and the minus sign on odd `g`.
pub fn ghz_basis() -> [StateVector; 8] {
    std::array::from_fn(|g| {
        let x = g / 2;
        let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
        let mut amps = [0.0; 8];
        amps[x] = FRAC_1_SQRT_2;
        amps[7 - x] = sign * FRAC_1_SQRT_2;
        StateVector::from_real(&amps)
    })
}

fn schmidt_weight(sp: &SchmidtPair, bit: usize) -> f64 {
    if bit == 0 {
        sp.p0()
    } else {
        sp.p1()
    }
}

/// Outcomes of a GHZ measurement on `BDF` of three Schmidt pairs, as pure
/// states of `ACE`.
pub fn swap_three_pairs_ghz(ab: &SchmidtPair, cd: &SchmidtPair, ef: &SchmidtPair) -> Vec<SwapOutcome<StateVector>> {
    let weight =
        |x: usize| schmidt_weight(ab, (x >> 2) & 1) * schmidt_weight(cd, (x >> 1) & 1) * schmidt_weight(ef, x & 1);
    (0..8u8)
        .map(|g| {
            let x = usize::from(g / 2);
            let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
            let (w, wbar) = (weight(x), weight(7 - x));
            let p = (w + wbar) / 2.0;
            SwapOutcome::new(OutcomeLabel::Ghz(g), p, || {
                let norm = (2.0 * p).sqrt();
                let mut amps = [0.0; 8];
                amps[x] = w.sqrt() / norm;
                amps[7 - x] = sign * wbar.sqrt() / norm;
                StateVector::from_real(&amps)
            })
        })
        .collect()
}

/// Numeric twin of [`swap_three_pairs_ghz`]: full six-qubit projection.
pub fn swap_three_pairs_ghz_numeric(
    ab: &SchmidtPair,
    cd: &SchmidtPair,
    ef: &SchmidtPair,
) -> Result<Vec<SwapOutcome<StateVector>>> {
    let reg = QubitRegister::from_chars("ABCDEF")?;
    let full = ab.state().kron(&cd.state()).kron(&ef.state());
    ghz_basis()
        .iter()
        .enumerate()
        .map(|(g, v)| {
            let (p, state) = project_pure(&full, &reg, &["B", "D", "F"], v)?;
            Ok(SwapOutcome { label: OutcomeLabel::Ghz(g as u8), probability: p, state })
        })
        .collect()
}

/// `C_AB · C_CD · C_EF`
pub fn average_tripartite_concurrence(ab: &SchmidtPair, cd: &SchmidtPair, ef: &SchmidtPair) -> f64 {
    concurrence_schmidt(ab) * concurrence_schmidt(cd) * concurrence_schmidt(ef)
}

/// `N_AB · N_CD · N_EF`
pub fn average_tripartite_negativity(ab: &SchmidtPair, cd: &SchmidtPair, ef: &SchmidtPair) -> f64 {
    negativity_schmidt(ab) * negativity_schmidt(cd) * negativity_schmidt(ef)
}

/// Probability-weighted geometric-mean measure over GHZ outcomes.
pub fn weighted_tripartite(outcomes: &[SwapOutcome<StateVector>], measure: Measure) -> Result<f64> {
    weighted_average(outcomes, |v| tripartite_measure_geometric(Tripartite::Pure(v), measure))
}

/// `(P_Φ, P_Ψ)`: probability of each `Φ±` and each `Ψ±` Bell outcome when
/// swapping two identical noisy pairs.
pub fn noisy_branch_probabilities(params: &NoisyPairParams) -> (f64, f64) {
    let (a, p0, p1) = (params.alpha(), params.p0(), params.p1());
    let a2 = a * a;
    let p_phi = a2 / 2.0 * (p0 * p0 + p1 * p1) + (1.0 - a2) / 4.0;
    let p_psi = a2 * p0 * p1 + (1.0 - a2) / 4.0;
    (p_phi, p_psi)
}

fn same_pair(x: &NoisyPairParams, y: &NoisyPairParams) -> bool {
    (x.alpha() - y.alpha()).abs() <= PROB_TOL && (x.p0() - y.p0()).abs() <= PROB_TOL
}

/// Bell-measurement swap of two identical noisy pairs, closed form.
///
/// Each `AD` outcome is an X state: the coherent part `(α²/2)(p0|00⟩ ±
/// p1|11⟩)(…)` or `(α² p0 p1/2)(|01⟩ ± |10⟩)(…)` plus the shared diagonal
/// noise `d(a, d) = α(1-α)(p_a + p_d)/8 + (1-α)²/16`.
pub fn swap_noisy_pairs(params: &NoisyPairParams, params2: &NoisyPairParams) -> Result<Vec<SwapOutcome<XState>>> {
    if !same_pair(params, params2) {
        return Err(Error::MismatchedPairs);
    }
    let (a, p0, p1) = (params.alpha(), params.p0(), params.p1());
    let a2 = a * a;
    let p = [p0, p1];
    let noise = |x: usize, y: usize| a * (1.0 - a) / 8.0 * (p[x] + p[y]) + (1.0 - a).powi(2) / 16.0;
    let (p_phi, p_psi) = noisy_branch_probabilities(params);
    let mut out = Vec::with_capacity(4);
    for label in BellLabel::ALL {
        let sign = match label {
            BellLabel::PhiPlus | BellLabel::PsiPlus => 1.0,
            BellLabel::PhiMinus | BellLabel::PsiMinus => -1.0,
        };
        let prob = if label.is_phi() { p_phi } else { p_psi };
        let outcome = SwapOutcome::new(OutcomeLabel::Bell(label), prob, || {
            let (d, e14, e23) = if label.is_phi() {
                let coherent = a2 / 2.0;
                (
                    [coherent * p0 * p0 + noise(0, 0), noise(0, 1), noise(1, 0), coherent * p1 * p1 + noise(1, 1)],
                    sign * coherent * p0 * p1,
                    0.0,
                )
            } else {
                let coherent = a2 * p0 * p1 / 2.0;
                ([noise(0, 0), coherent + noise(0, 1), coherent + noise(1, 0), noise(1, 1)], 0.0, sign * coherent)
            };
            (d.map(|x| x / prob), e14 / prob, e23 / prob)
        });
        let outcome = match outcome.state {
            Some((d, e14, e23)) => SwapOutcome {
                label: outcome.label,
                probability: prob,
                state: Some(XState::new(d, real(e14), real(e23))?),
            },
            None => SwapOutcome { label: outcome.label, probability: prob, state: None },
        };
        out.push(outcome);
    }
    Ok(out)
}

/// Numeric swap of two arbitrary two-qubit density matrices: builds
/// `ρ_AB ⊗ ρ_CD`, projects `BC` onto each Bell state and traces `BC` out.
pub fn swap_noisy_pairs_numeric(
    rho_ab: &ComplexMatrix,
    rho_cd: &ComplexMatrix,
) -> Result<Vec<SwapOutcome<ComplexMatrix>>> {
    for rho in [rho_ab, rho_cd] {
        if rho.rows() != 4 {
            return Err(Error::Dimension { expected: 4, found: rho.rows() });
        }
        rho.check_density()?;
    }
    let reg = QubitRegister::from_chars("ABCD")?;
    let full = kron(rho_ab, rho_cd);
    BellLabel::ALL
        .into_iter()
        .map(|label| {
            let (p, state) = project_mixed(&full, &reg, &["B", "C"], &label.state())?;
            Ok(SwapOutcome { label: OutcomeLabel::Bell(label), probability: p, state })
        })
        .collect()
}

/// Concurrence of the `AD` state after Bell outcome `label`.
pub fn noisy_outcome_concurrence(params: &NoisyPairParams, label: BellLabel) -> Result<f64> {
    let (a, p0, p1) = (params.alpha(), params.p0(), params.p1());
    let a2 = a * a;
    let (p_phi, p_psi) = noisy_branch_probabilities(params);
    let (prob, excess) = if label.is_phi() {
        (p_phi, a2 * p0 * p1 - (1.0 - a2) / 8.0)
    } else {
        let root = (1.0 + 2.0 * a - 3.0 * a2 + 16.0 * a2 * p0 * p1).sqrt();
        (p_psi, a2 * p0 * p1 - (1.0 - a) / 8.0 * root)
    };
    if prob <= PROB_FLOOR {
        return Err(Error::ZeroProbability);
    }
    Ok(excess.max(0.0) / prob)
}

/// Negativity of the `AD` state after Bell outcome `label`.
pub fn noisy_outcome_negativity(params: &NoisyPairParams, label: BellLabel) -> Result<f64> {
    let (prob, deficit) = noisy_negativity_parts(params, label);
    if prob <= PROB_FLOOR {
        return Err(Error::ZeroProbability);
    }
    Ok(-2.0 * deficit.min(0.0) / prob)
}

fn noisy_negativity_parts(params: &NoisyPairParams, label: BellLabel) -> (f64, f64) {
    let (a, p0, p1) = (params.alpha(), params.p0(), params.p1());
    let a2 = a * a;
    let (p_phi, p_psi) = noisy_branch_probabilities(params);
    if label.is_phi() {
        (p_phi, (1.0 - a2) / 16.0 - a2 * p0 * p1 / 2.0)
    } else {
        let root = (a2 * a2 * p0 * p0 * p1 * p1 / 4.0 + (1.0 - a).powi(2) * a2 * (p0 - p1).powi(2) / 64.0).sqrt();
        (p_psi, (1.0 - a2) / 16.0 - root)
    }
}

/// `2 P_Φ C(ρ^{Φ+}) + 2 P_Ψ C(ρ^{Ψ+})`, with zero-probability branches
/// contributing nothing.
pub fn average_noisy_concurrence(params: &NoisyPairParams) -> f64 {
    let (p_phi, p_psi) = noisy_branch_probabilities(params);
    let term = |label, prob: f64| {
        if prob <= PROB_FLOOR {
            0.0
        } else {
            2.0 * prob * noisy_outcome_concurrence(params, label).unwrap_or(0.0)
        }
    };
    term(BellLabel::PhiPlus, p_phi) + term(BellLabel::PsiPlus, p_psi)
}

/// `2 P_Φ N(ρ^{Φ±}) + 2 P_Ψ N(ρ^{Ψ±})`.
pub fn average_noisy_negativity(params: &NoisyPairParams) -> f64 {
    let (p_phi, p_psi) = noisy_branch_probabilities(params);
    let term = |label, prob: f64| {
        if prob <= PROB_FLOOR {
            0.0
        } else {
            2.0 * prob * noisy_outcome_negativity(params, label).unwrap_or(0.0)
        }
    };
    term(BellLabel::PhiPlus, p_phi) + term(BellLabel::PsiPlus, p_psi)
}
