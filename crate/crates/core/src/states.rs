//! State constructors: Schmidt-form pairs, white-noise mixtures, X states
//! and the Bloch (correlation-matrix) representation.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{kron, pauli, real, singular_values, ComplexMatrix, StateVector, ZERO};

/// Tolerance on probability sums and X-state positivity.
pub const PROB_TOL: f64 = 1e-12;

/// Weight of the `I/√2 ⊗ I/√2` component of any two-qubit density matrix.
/// Used as the scalar corner of the Bloch matrix by [`combo_criterion`].
pub const COMBO_SCALAR: f64 = 0.5;

/// Biqubit pure state `√p0|00⟩ + √p1|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchmidtPair {
    p0: f64,
    p1: f64,
}

impl SchmidtPair {
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        if !(p0 >= 0.0 && p1 >= 0.0) || (p0 + p1 - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidParameter(format!(
                "Schmidt weights must be non-negative and sum to one, got ({p0}, {p1})"
            )));
        }
        Ok(Self { p0, p1 })
    }

    /// Pair with `p1 = 1 - p0`.
    pub fn from_p0(p0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidParameter(format!("p0 = {p0} outside [0, 1]")));
        }
        Ok(Self { p0, p1: 1.0 - p0 })
    }

    pub fn maximally_entangled() -> Self {
        Self { p0: 0.5, p1: 0.5 }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn state(&self) -> StateVector {
        schmidt_pair_state(self)
    }
}

pub fn schmidt_pair_state(sp: &SchmidtPair) -> StateVector {
    StateVector::from_real(&[sp.p0.sqrt(), 0.0, 0.0, sp.p1.sqrt()])
}

/// Schmidt weights of a two-qubit pure state, larger weight first.
pub fn schmidt_decompose(v: &StateVector) -> Result<SchmidtPair> {
    if v.dim() != 4 {
        return Err(Error::Dimension { expected: 4, found: v.dim() });
    }
    v.check_normalized()?;
    let amplitudes = ComplexMatrix::new(2, 2, v.amps().to_vec())?;
    let s = singular_values(&amplitudes);
    let (p0, p1) = (s[0] * s[0], s[1] * s[1]);
    let total = p0 + p1;
    SchmidtPair::new(p0 / total, p1 / total)
}

/// A Schmidt pair mixed with white noise at visibility `alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisyPairParams {
    pub schmidt: SchmidtPair,
    alpha: f64,
}

impl NoisyPairParams {
    pub fn new(schmidt: SchmidtPair, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("visibility {alpha} outside [0, 1]")));
        }
        Ok(Self { schmidt, alpha })
    }

    pub fn from_p0(p0: f64, alpha: f64) -> Result<Self> {
        Self::new(SchmidtPair::from_p0(p0)?, alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p0(&self) -> f64 {
        self.schmidt.p0
    }

    pub fn p1(&self) -> f64 {
        self.schmidt.p1
    }

    pub fn state(&self) -> XState {
        depolarize_params(self)
    }
}

/// Two-qubit density matrix supported on the diagonal and anti-diagonal.
///
/// `d` holds `ρ11, ρ22, ρ33, ρ44`; `e14 = ρ14` and `e23 = ρ23` (their
/// conjugates sit at `ρ41`, `ρ32`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XState {
    d: [f64; 4],
    e14: Complex64,
    e23: Complex64,
}

/// Half sums and differences of the X-state diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateSpectralParts {
    pub u_plus: f64,
    pub u_minus: f64,
    pub r_plus: f64,
    pub r_minus: f64,
}

impl XState {
    pub fn new(d: [f64; 4], e14: Complex64, e23: Complex64) -> Result<Self> {
        if d.iter().any(|&x| !(x >= -PROB_TOL)) {
            return Err(Error::NotDensity(format!("negative diagonal entry in {d:?}")));
        }
        let total: f64 = d.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::NotDensity(format!("X-state trace {total}")));
        }
        if e14.norm() > (d[0] * d[3]).max(0.0).sqrt() + PROB_TOL
            || e23.norm() > (d[1] * d[2]).max(0.0).sqrt() + PROB_TOL
        {
            return Err(Error::NotDensity("anti-diagonal entries violate positivity".into()));
        }
        Ok(Self { d, e14, e23 })
    }

    /// Reads an X state from a matrix, requiring the off-X entries to vanish.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Dimension { expected: 4, found: m.rows() });
        }
        m.check_density()?;
        for r in 0..4 {
            for c in 0..4 {
                if r != c && r + c != 3 && m[(r, c)].norm() > PROB_TOL {
                    return Err(Error::NotDensity(format!("entry ({r},{c}) outside the X pattern")));
                }
            }
        }
        Self::new([m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re], m[(0, 3)], m[(1, 2)])
    }

    pub fn diagonal(&self) -> [f64; 4] {
        self.d
    }

    pub fn e14(&self) -> Complex64 {
        self.e14
    }

    pub fn e23(&self) -> Complex64 {
        self.e23
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for (i, &d) in self.d.iter().enumerate() {
            m[(i, i)] = real(d);
        }
        m[(0, 3)] = self.e14;
        m[(3, 0)] = self.e14.conj();
        m[(1, 2)] = self.e23;
        m[(2, 1)] = self.e23.conj();
        m
    }

    pub fn spectral_parts(&self) -> XStateSpectralParts {
        let [d11, d22, d33, d44] = self.d;
        XStateSpectralParts {
            u_plus: (d11 + d44) / 2.0,
            u_minus: (d11 - d44) / 2.0,
            r_plus: (d22 + d33) / 2.0,
            r_minus: (d22 - d33) / 2.0,
        }
    }
}

/// `α|φ⟩⟨φ| + (1-α) I/4` for the Schmidt pair `sp`.
pub fn depolarize(sp: &SchmidtPair, alpha: f64) -> Result<XState> {
    Ok(depolarize_params(&NoisyPairParams::new(*sp, alpha)?))
}

fn depolarize_params(params: &NoisyPairParams) -> XState {
    let (a, p0, p1) = (params.alpha, params.p0(), params.p1());
    let noise = (1.0 - a) / 4.0;
    XState { d: [noise + a * p0, noise, noise, noise + a * p1], e14: real(a * (p0 * p1).sqrt()), e23: ZERO }
}

/// Local Bloch vectors, correlation matrix and the scalar corner `c`.
///
/// With `B_μ = σ_μ/√2`: `r_μ = Tr(ρ B_μ ⊗ I/2)`, `s_ν = Tr(ρ I/2 ⊗ B_ν)`,
/// `t_μν = Tr(ρ B_μ ⊗ B_ν)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochMatrix {
    pub c: f64,
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

fn local_operator(mu: usize, nu: usize) -> ComplexMatrix {
    let half_id = ComplexMatrix::identity(2).scale_real(0.5);
    let b = |k: usize| pauli(k).scale_real(FRAC_1_SQRT_2);
    match (mu, nu) {
        (0, 0) => kron(&half_id, &half_id),
        (m, 0) => kron(&b(m), &half_id),
        (0, n) => kron(&half_id, &b(n)),
        (m, n) => kron(&b(m), &b(n)),
    }
}

fn trace_against(rho: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    (rho * op).trace().re
}

pub fn bloch_decompose(rho: &ComplexMatrix, c: f64) -> Result<BlochMatrix> {
    if rho.rows() != 4 {
        return Err(Error::Dimension { expected: 4, found: rho.rows() });
    }
    rho.check_density()?;
    let r = std::array::from_fn(|i| trace_against(rho, &local_operator(i + 1, 0)));
    let s = std::array::from_fn(|i| trace_against(rho, &local_operator(0, i + 1)));
    let t = std::array::from_fn(|i| std::array::from_fn(|j| trace_against(rho, &local_operator(i + 1, j + 1))));
    Ok(BlochMatrix { c, r, s, t })
}

impl BlochMatrix {
    /// The 4×4 block matrix `[[c, sᵀ], [r, T]]`.
    pub fn block(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| {
            real(match (i, j) {
                (0, 0) => self.c,
                (0, j) => self.s[j - 1],
                (i, 0) => self.r[i - 1],
                (i, j) => self.t[i - 1][j - 1],
            })
        })
    }

    pub fn correlation(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(3, 3, |i, j| real(self.t[i][j]))
    }

    /// Ky Fan norm (sum of singular values) of the block matrix.
    pub fn ky_fan_norm(&self) -> f64 {
        singular_values(&self.block()).iter().sum()
    }

    /// Density matrix rebuilt from `r`, `s`, `T`.
    ///
    /// The local operators `B_μ ⊗ I/2` have Hilbert-Schmidt norm `1/2`, so
    /// their coefficients carry a factor of two.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut rho = ComplexMatrix::identity(4).scale_real(0.25);
        for i in 0..3 {
            rho = &rho + &local_operator(i + 1, 0).scale_real(2.0 * self.r[i]);
            rho = &rho + &local_operator(0, i + 1).scale_real(2.0 * self.s[i]);
            for j in 0..3 {
                rho = &rho + &local_operator(i + 1, j + 1).scale_real(self.t[i][j]);
            }
        }
        rho
    }
}

/// `‖T̃‖_KF - 1` with the scalar corner fixed to [`COMBO_SCALAR`]; positive
/// values certify entanglement.
pub fn combo_criterion(rho: &ComplexMatrix) -> Result<f64> {
    Ok(bloch_decompose(rho, COMBO_SCALAR)?.ky_fan_norm() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{c64, hermitian_eigenvalues, partial_transpose, QubitRegister};
    use proptest::prelude::*;

    fn bell() -> ComplexMatrix {
        SchmidtPair::maximally_entangled().state().density()
    }

    #[test]
    fn schmidt_pair_states() {
        assert_eq!(SchmidtPair::new(1.0, 0.0).unwrap().state(), StateVector::basis(4, 0));
        let h = FRAC_1_SQRT_2;
        let bell = SchmidtPair::maximally_entangled().state();
        assert!(bell.max_abs_diff(&StateVector::from_real(&[h, 0.0, 0.0, h])) < 1e-16);
        let v = SchmidtPair::from_p0(0.3).unwrap().state();
        let expected = StateVector::from_real(&[0.3f64.sqrt(), 0.0, 0.0, 0.7f64.sqrt()]);
        assert!(v.max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn schmidt_pair_rejects_bad_weights() {
        assert!(SchmidtPair::new(0.6, 0.6).is_err());
        assert!(SchmidtPair::new(-0.1, 1.1).is_err());
        assert!(SchmidtPair::from_p0(1.5).is_err());
    }

    #[test]
    fn decompose_known_states() {
        let h = FRAC_1_SQRT_2;
        let sp = schmidt_decompose(&StateVector::from_real(&[h, 0.0, 0.0, h])).unwrap();
        assert!((sp.p0() - 0.5).abs() < 1e-15 && (sp.p1() - 0.5).abs() < 1e-15);
        let sp = schmidt_decompose(&StateVector::basis(4, 0b01)).unwrap();
        assert!((sp.p0() - 1.0).abs() < 1e-15 && sp.p1().abs() < 1e-15);
    }

    #[test]
    fn decompose_is_phase_invariant() {
        let v = StateVector::new(vec![
            Complex64::from_polar(0.3f64.sqrt(), 0.7),
            ZERO,
            ZERO,
            Complex64::from_polar(0.7f64.sqrt(), -1.9),
        ]);
        let sp = schmidt_decompose(&v).unwrap();
        assert!((sp.p0() - 0.7).abs() < 1e-12 && (sp.p1() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn decompose_rejects_unnormalized() {
        let v = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(schmidt_decompose(&v), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn depolarize_limits() {
        let x = depolarize(&SchmidtPair::maximally_entangled(), 1.0).unwrap();
        assert!(x.to_matrix().max_abs_diff(&bell()) < 1e-15);
        let x = depolarize(&SchmidtPair::from_p0(0.2).unwrap(), 0.0).unwrap();
        assert!(x.to_matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-16);
    }

    #[test]
    fn depolarize_midpoint() {
        let x = depolarize(&SchmidtPair::maximally_entangled(), 0.5).unwrap();
        let d = x.diagonal();
        for (got, want) in d.iter().zip([0.375, 0.125, 0.125, 0.375]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((x.e14() - real(0.25)).norm() < 1e-15);
        assert_eq!(x.e23(), ZERO);
    }

    #[test]
    fn depolarize_rejects_bad_alpha() {
        assert!(depolarize(&SchmidtPair::maximally_entangled(), 1.2).is_err());
    }

    #[test]
    fn depolarized_matrix_matches_literal_form() {
        for i in 0..=20 {
            for j in 0..=20 {
                let (p0, a) = (i as f64 / 20.0, j as f64 / 20.0);
                let p1 = 1.0 - p0;
                let x = depolarize(&SchmidtPair::from_p0(p0).unwrap(), a).unwrap();
                let n = (1.0 - a) / 4.0;
                let c = a * p0.sqrt() * p1.sqrt();
                let literal = ComplexMatrix::from_real(
                    4,
                    4,
                    &[n + a * p0, 0.0, 0.0, c, 0.0, n, 0.0, 0.0, 0.0, 0.0, n, 0.0, c, 0.0, 0.0, n + a * p1],
                )
                .unwrap();
                assert!(x.to_matrix().max_abs_diff(&literal) < 1e-15);
                // the X-state invariants hold on the grid
                assert!(XState::new(x.diagonal(), x.e14(), x.e23()).is_ok());
                assert!(x.to_matrix().check_density().is_ok());
            }
        }
    }

    #[test]
    fn xstate_rejects_non_positive_coherence() {
        let err = XState::new([0.25; 4], real(0.3), ZERO).unwrap_err();
        assert!(matches!(err, Error::NotDensity(_)));
        assert!(XState::new([0.5, 0.5, 0.1, 0.0], ZERO, ZERO).is_err());
    }

    #[test]
    fn xstate_matrix_roundtrip() {
        let x = XState::new([0.4, 0.1, 0.2, 0.3], c64(0.1, -0.2), c64(0.05, 0.1)).unwrap();
        assert_eq!(XState::from_matrix(&x.to_matrix()).unwrap(), x);
        let mut m = x.to_matrix();
        m[(0, 1)] = real(0.01);
        m[(1, 0)] = real(0.01);
        assert!(XState::from_matrix(&m).is_err());
    }

    #[test]
    fn spectral_parts() {
        let x = XState::new([0.4, 0.1, 0.2, 0.3], ZERO, ZERO).unwrap();
        let s = x.spectral_parts();
        assert!((s.u_plus - 0.35).abs() < 1e-15 && (s.u_minus - 0.05).abs() < 1e-15);
        assert!((s.r_plus - 0.15).abs() < 1e-15 && (s.r_minus + 0.05).abs() < 1e-15);
    }

    #[test]
    fn bloch_of_maximally_mixed() {
        let b = bloch_decompose(&ComplexMatrix::identity(4).scale_real(0.25), 0.0).unwrap();
        assert!(b.r.iter().chain(&b.s).all(|x| x.abs() < 1e-16));
        assert!(b.t.iter().flatten().all(|x| x.abs() < 1e-16));
    }

    #[test]
    fn bloch_of_bell_state() {
        let b = bloch_decompose(&bell(), 0.5).unwrap();
        let expected = [[0.5, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((b.t[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
        assert!(b.r.iter().chain(&b.s).all(|x| x.abs() < 1e-16));
        assert_eq!(b.c, 0.5);
    }

    #[test]
    fn isotropic_local_vectors_vanish() {
        for k in 0..=10 {
            let a = k as f64 / 10.0;
            let x = depolarize(&SchmidtPair::maximally_entangled(), a).unwrap();
            let b = bloch_decompose(&x.to_matrix(), 0.5).unwrap();
            assert!(b.r.iter().chain(&b.s).all(|v| v.abs() < 1e-16));
        }
    }

    #[test]
    fn bloch_rejects_non_density() {
        assert!(bloch_decompose(&ComplexMatrix::from_diag(&[1.0, 1.0, 0.0, 0.0]), 0.0).is_err());
    }

    #[test]
    fn combo_threshold_on_isotropic_line() {
        let x = depolarize(&SchmidtPair::maximally_entangled(), 1.0 / 3.0).unwrap();
        assert!(combo_criterion(&x.to_matrix()).unwrap().abs() < 1e-10);
        let f = combo_criterion(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert!(f < 0.0);
    }

    fn ppt_entangled(rho: &ComplexMatrix) -> f64 {
        let reg = QubitRegister::from_chars("AB").unwrap();
        let pt = partial_transpose(rho, &reg, &["B"]).unwrap();
        hermitian_eigenvalues(&pt).unwrap()[0]
    }

    #[test]
    fn combo_sign_matches_ppt_on_grid() {
        // PPT oracle: minimum eigenvalue of the partial transpose
        for i in 0..=40 {
            for j in 0..=40 {
                let (a, p0) = (i as f64 / 40.0, j as f64 / 40.0);
                let rho = depolarize(&SchmidtPair::from_p0(p0).unwrap(), a).unwrap().to_matrix();
                let f = combo_criterion(&rho).unwrap();
                let min_eig = ppt_entangled(&rho);
                if f.abs() > 1e-10 || min_eig.abs() > 1e-10 {
                    assert_eq!(f > 0.0, min_eig < 0.0, "alpha={a} p0={p0} f={f} min_eig={min_eig}");
                }
            }
        }
    }

    #[test]
    fn combo_region_matches_concurrence_threshold() {
        for i in 0..=100 {
            for j in 0..=100 {
                let (a, p0) = (i as f64 / 100.0, j as f64 / 100.0);
                let rho = depolarize(&SchmidtPair::from_p0(p0).unwrap(), a).unwrap().to_matrix();
                let f = combo_criterion(&rho).unwrap();
                let margin = a - 1.0 / (1.0 + 4.0 * (p0 * (1.0 - p0)).sqrt());
                if f.abs() > 1e-10 && margin.abs() > 1e-10 {
                    assert_eq!(f > 0.0, margin > 0.0, "alpha={a} p0={p0}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn decompose_inverts_state(p0 in 0.5f64..=1.0) {
            let sp = SchmidtPair::from_p0(p0).unwrap();
            let back = schmidt_decompose(&sp.state()).unwrap();
            prop_assert!((back.p0() - sp.p0()).abs() <= 1e-12);
            prop_assert!((back.p1() - sp.p1()).abs() <= 1e-12);
        }

        #[test]
        fn bloch_recomputes_and_reconstructs(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rho = crate::random::density_matrix(&mut rng, 4);
            let b = bloch_decompose(&rho, 0.5).unwrap();
            prop_assert!(b.reconstruct().max_abs_diff(&rho) <= 1e-12);
            let again = bloch_decompose(&b.reconstruct(), 0.5).unwrap();
            for i in 0..3 {
                prop_assert!((again.r[i] - b.r[i]).abs() <= 1e-12);
                prop_assert!((again.s[i] - b.s[i]).abs() <= 1e-12);
                for j in 0..3 {
                    prop_assert!((again.t[i][j] - b.t[i][j]).abs() <= 1e-12);
                }
            }
        }
    }
}
