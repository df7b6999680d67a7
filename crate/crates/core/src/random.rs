//! Seeded samplers for randomized cross-checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::states::XState;
use crate::tensor::{c64, ComplexMatrix, StateVector};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state of dimension `dim`.
pub fn state_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    let v = StateVector::new((0..dim).map(|_| gaussian_complex(rng)).collect());
    v.normalized().expect("gaussian sample has nonzero norm")
}

/// Random full-rank density matrix `G G† / Tr(G G†)` with Ginibre `G`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let rho = &g * &g.dagger();
    let tr = rho.trace().re;
    let mut rho = rho.scale_real(1.0 / tr);
    // Force exact Hermiticity.
    for r in 0..dim {
        rho[(r, r)].im = 0.0;
        for c in r + 1..dim {
            rho[(c, r)] = rho[(r, c)].conj();
        }
    }
    rho
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c64(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j])
}

/// Random valid X state with complex anti-diagonal entries.
pub fn xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.random::<f64>().max(1e-300).ln());
    let total: f64 = raw.iter().sum();
    let d = raw.map(|x| x / total);
    let mut coherence = |bound: f64| {
        let r: f64 = rng.random();
        let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(r * bound, phi)
    };
    let e14 = coherence((d[0] * d[3]).sqrt());
    let e23 = coherence((d[1] * d[2]).sqrt());
    XState::new(d, e14, e23).expect("sampled X state satisfies positivity")
}
