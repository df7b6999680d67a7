//! Entanglement quantifiers.
//!
//! Negativity uses the doubled convention `N = ‖ρ^{T_B}‖₁ - 1`, so Bell
//! states score 1. Concurrence of pure states uses `√(2(1 - Tr ρ_A²))`.

use crate::error::{Error, Result};

/// Negative partial-transpose eigenvalues of smaller magnitude are treated as
/// round-off. Keeps products and cube roots of exactly separable cuts at zero.
pub const SPECTRAL_NOISE: f64 = 1e-14;
use crate::states::{SchmidtPair, XState};
use crate::tensor::{
    hermitian_eigen, hermitian_eigenvalues, partial_trace, partial_transpose, singular_values, ComplexMatrix,
    QubitRegister, StateVector,
};

/// Two complementary groups of qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteCut {
    side_a: Vec<String>,
    side_b: Vec<String>,
}

impl BipartiteCut {
    pub fn new<S: AsRef<str>>(reg: &QubitRegister, side_a: &[S], side_b: &[S]) -> Result<Self> {
        let a = reg.positions(side_a)?;
        let b = reg.positions(side_b)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidCut("both sides must be non-empty".into()));
        }
        if a.iter().any(|p| b.contains(p)) {
            return Err(Error::InvalidCut("sides overlap".into()));
        }
        if a.len() + b.len() != reg.len() {
            return Err(Error::InvalidCut("sides do not cover the register".into()));
        }
        let names = |pos: Vec<usize>| pos.into_iter().map(|p| reg.labels()[p].clone()).collect();
        Ok(Self { side_a: names(a), side_b: names(b) })
    }

    /// `side_a` against everything else in `reg`.
    pub fn split<S: AsRef<str>>(reg: &QubitRegister, side_a: &[S]) -> Result<Self> {
        let a = reg.positions(side_a)?;
        let rest: Vec<String> = reg.complement(&a).into_iter().map(|p| reg.labels()[p].clone()).collect();
        let a: Vec<String> = side_a.iter().map(|s| s.as_ref().to_owned()).collect();
        Self::new(reg, &a, &rest)
    }

    pub fn side_a(&self) -> &[String] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[String] {
        &self.side_b
    }

    fn check_against(&self, reg: &QubitRegister) -> Result<()> {
        let covered = reg.positions(&self.side_a)?.len() + reg.positions(&self.side_b)?.len();
        if covered != reg.len() {
            return Err(Error::InvalidCut("cut does not match register".into()));
        }
        Ok(())
    }
}

pub fn concurrence_pure(v: &StateVector, reg: &QubitRegister, cut: &BipartiteCut) -> Result<f64> {
    if v.dim() != reg.dim() {
        return Err(Error::Dimension { expected: reg.dim(), found: v.dim() });
    }
    v.check_normalized()?;
    cut.check_against(reg)?;
    let reduced = partial_trace(&v.density(), reg, cut.side_a())?;
    // 1 - Tr ρ² = (Tr ρ)² - Tr ρ², summed as 2×2 principal minors so that
    // weakly entangled states do not lose their value to cancellation.
    let n = reduced.rows();
    let mut minors = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            minors += reduced[(i, i)].re * reduced[(j, j)].re - reduced[(i, j)].norm_sqr();
        }
    }
    Ok(2.0 * minors.max(0.0).sqrt())
}

/// `2√(p0 p1)`
pub fn concurrence_schmidt(sp: &SchmidtPair) -> f64 {
    2.0 * (sp.p0() * sp.p1()).sqrt()
}

pub fn concurrence_xstate(x: &XState) -> f64 {
    let [d11, d22, d33, d44] = x.diagonal();
    let outer = 2.0 * (x.e14().norm() - (d22 * d33).sqrt());
    let inner = 2.0 * (x.e23().norm() - (d11 * d44).sqrt());
    outer.max(inner).max(0.0)
}

/// Mixed-state concurrence `max(0, λ₁ - λ₂ - λ₃ - λ₄)` from the spectral
/// definition, independent of any closed form.
///
/// The `λᵢ` are the singular values of `Wᵀ (σ_y⊗σ_y) W` where `ρ = W W†`;
/// this avoids square roots of near-zero eigenvalues of `ρ ρ̃`.
pub fn concurrence_wootters_oracle(rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension { expected: 4, found: rho.rows() });
    }
    rho.check_density()?;
    let eig = hermitian_eigen(rho)?;
    let w = ComplexMatrix::from_fn(4, 4, |r, c| eig.vectors[(r, c)] * eig.values[c].max(0.0).sqrt());
    let yy = crate::tensor::kron(&crate::tensor::pauli(2), &crate::tensor::pauli(2));
    let tau = &(&w.transpose() * &yy) * &w;
    let s = singular_values(&tau);
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Spectral negativity across `cut`: `-2 Σ` negative eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &ComplexMatrix, reg: &QubitRegister, cut: &BipartiteCut) -> Result<f64> {
    if rho.rows() != reg.dim() {
        return Err(Error::Dimension { expected: reg.dim(), found: rho.rows() });
    }
    rho.check_density()?;
    cut.check_against(reg)?;
    let pt = partial_transpose(rho, reg, cut.side_b())?;
    let neg: f64 = hermitian_eigenvalues(&pt)?.into_iter().filter(|&e| e < -SPECTRAL_NOISE).sum();
    Ok(-2.0 * neg)
}

/// `2√p0 √p1`
pub fn negativity_schmidt(sp: &SchmidtPair) -> f64 {
    2.0 * sp.p0().sqrt() * sp.p1().sqrt()
}

pub fn negativity_xstate(x: &XState) -> f64 {
    let sp = x.spectral_parts();
    let outer = sp.r_plus - (sp.r_minus.powi(2) + x.e14().norm_sqr()).sqrt();
    let inner = sp.u_plus - (sp.u_minus.powi(2) + x.e23().norm_sqr()).sqrt();
    -2.0 * outer.min(inner).min(0.0)
}

/// Two-qubit negativity of a 4×4 density matrix across `A|B`.
pub fn negativity_two_qubit(rho: &ComplexMatrix) -> Result<f64> {
    let reg = QubitRegister::from_chars("AB")?;
    let cut = BipartiteCut::split(&reg, &["A"])?;
    negativity(rho, &reg, &cut)
}

/// Two-qubit pure-state concurrence across `A|B`.
pub fn concurrence_two_qubit_pure(v: &StateVector) -> Result<f64> {
    let reg = QubitRegister::from_chars("AB")?;
    let cut = BipartiteCut::split(&reg, &["A"])?;
    concurrence_pure(v, &reg, &cut)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Concurrence,
    Negativity,
}

/// A three-qubit state handed to the tripartite measures.
#[derive(Clone, Copy, Debug)]
pub enum Tripartite<'a> {
    Pure(&'a StateVector),
    Mixed(&'a ComplexMatrix),
}

/// `[M_{A-BC}, M_{B-AC}, M_{C-AB}]`. Concurrence is only defined for pure
/// input.
pub fn one_vs_rest(state: Tripartite<'_>, measure: Measure) -> Result<[f64; 3]> {
    let reg = QubitRegister::from_chars("ABC")?;
    let mut out = [0.0; 3];
    for (k, label) in ["A", "B", "C"].iter().enumerate() {
        let cut = BipartiteCut::split(&reg, &[*label])?;
        out[k] = match (measure, state) {
            (Measure::Concurrence, Tripartite::Pure(v)) => concurrence_pure(v, &reg, &cut)?,
            (Measure::Concurrence, Tripartite::Mixed(_)) => {
                return Err(Error::InvalidParameter("tripartite concurrence is only defined for pure states".into()))
            }
            (Measure::Negativity, Tripartite::Pure(v)) => {
                v.check_normalized()?;
                negativity(&v.density(), &reg, &cut)?
            }
            (Measure::Negativity, Tripartite::Mixed(rho)) => negativity(rho, &reg, &cut)?,
        };
    }
    Ok(out)
}

/// Geometric mean of the three one-versus-two values; vanishes on
/// biseparable states.
pub fn tripartite_measure_geometric(state: Tripartite<'_>, measure: Measure) -> Result<f64> {
    let m = one_vs_rest(state, measure)?;
    Ok((m[0] * m[1] * m[2]).cbrt())
}

/// Arithmetic mean of the three one-versus-two values.
pub fn tripartite_measure_mean(state: Tripartite<'_>, measure: Measure) -> Result<f64> {
    let m = one_vs_rest(state, measure)?;
    Ok((m[0] + m[1] + m[2]) / 3.0)
}
