use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use swapkit_core::measures::{
    concurrence_two_qubit_pure, concurrence_wootters_oracle, concurrence_xstate, negativity_two_qubit,
    negativity_xstate,
};
use swapkit_core::swap::{
    average_swapped_concurrence_pure, noisy_outcome_concurrence, noisy_outcome_negativity, swap_noisy_pairs,
    swap_noisy_pairs_numeric, swap_pure_pairs, swap_pure_pairs_numeric, swap_three_pairs_ghz,
    swap_three_pairs_ghz_numeric, total_probability, weighted_average, SwapOutcome,
};
use swapkit_core::teleport::{teleport_probabilistic, total_success_probability};
use swapkit_core::{
    random, ChannelState, MeasurementBasis, NoisyPairParams, OutcomeLabel, SchmidtPair, StateVector, UnknownQubit,
};

use crate::config::ConfigError;
use crate::CliError;

type Check = fn(&mut ChaCha8Rng, usize) -> swapkit_core::Result<f64>;

const CHECKS: [(&str, f64, Check); 10] = [
    ("xstate-concurrence", 1e-10, xstate_concurrence),
    ("xstate-negativity", 1e-10, xstate_negativity),
    ("swap-pure-projection", 1e-10, swap_pure_projection),
    ("swap-ghz-projection", 1e-10, swap_ghz_projection),
    ("swap-noisy-projection", 1e-10, swap_noisy_projection),
    ("noisy-measures", 1e-10, noisy_measures),
    ("pure-average-formula", 1e-12, pure_average_formula),
    ("teleport-success-fidelity", 1e-12, teleport_success_fidelity),
    ("teleport-success-probability", 1e-12, teleport_success_probability),
    ("probability-conservation", 1e-12, probability_conservation),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,max_deviation,tolerance,verdict\n");
        for r in &self.rows {
            let verdict = if r.passed() { "pass" } else { "fail" };
            out.push_str(&format!("{},{:.3e},{:e},{verdict}\n", r.name, r.max_deviation, r.tolerance));
        }
        out
    }
}

/// Runs every cross-check `trials` times. Each check draws from its own
/// stream of `seed`, so the report is independent of scheduling.
pub fn run_oracle_suite(seed: u64, trials: usize) -> Result<Report, CliError> {
    if trials == 0 {
        return Err(ConfigError::NoTrials.into());
    }
    let rows = CHECKS
        .par_iter()
        .enumerate()
        .map(|(k, (name, tolerance, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            Ok(CheckRow { name, max_deviation: check(&mut rng, trials)?, tolerance: *tolerance })
        })
        .collect::<swapkit_core::Result<_>>()?;
    Ok(Report { rows })
}

fn schmidt<R: Rng>(rng: &mut R) -> SchmidtPair {
    SchmidtPair::from_p0(rng.random()).expect("unit interval")
}

fn noisy<R: Rng>(rng: &mut R) -> NoisyPairParams {
    NoisyPairParams::from_p0(rng.random(), rng.random()).expect("unit interval")
}

fn outcome_gap(a: &[SwapOutcome<StateVector>], b: &[SwapOutcome<StateVector>]) -> f64 {
    a.iter().zip(b).fold(0.0, |worst: f64, (x, y)| {
        let states = match (&x.state, &y.state) {
            (Some(s), Some(t)) => s.max_abs_diff(t),
            _ => 0.0,
        };
        worst.max((x.probability - y.probability).abs()).max(states)
    })
}

fn xstate_concurrence(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x = random::xstate(rng);
        worst = worst.max((concurrence_xstate(&x) - concurrence_wootters_oracle(&x.to_matrix())?).abs());
    }
    Ok(worst)
}

fn xstate_negativity(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x = random::xstate(rng);
        worst = worst.max((negativity_xstate(&x) - negativity_two_qubit(&x.to_matrix())?).abs());
    }
    Ok(worst)
}

fn swap_pure_projection(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (x, y) = (schmidt(rng), schmidt(rng));
        let basis = MeasurementBasis::from_amplitudes(rng.random(), rng.random())?;
        worst = worst.max(outcome_gap(&swap_pure_pairs(&x, &y, &basis), &swap_pure_pairs_numeric(&x, &y, &basis)?));
    }
    Ok(worst)
}

fn swap_ghz_projection(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (x, y, z) = (schmidt(rng), schmidt(rng), schmidt(rng));
        worst = worst.max(outcome_gap(&swap_three_pairs_ghz(&x, &y, &z), &swap_three_pairs_ghz_numeric(&x, &y, &z)?));
    }
    Ok(worst)
}

fn swap_noisy_projection(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let params = noisy(rng);
        let rho = params.state().to_matrix();
        let numeric = swap_noisy_pairs_numeric(&rho, &rho)?;
        for (a, n) in swap_noisy_pairs(&params, &params)?.iter().zip(&numeric) {
            worst = worst.max((a.probability - n.probability).abs());
            if let (Some(s), Some(t)) = (&a.state, &n.state) {
                worst = worst.max(s.to_matrix().max_abs_diff(t));
            }
        }
    }
    Ok(worst)
}

fn noisy_measures(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let params = noisy(rng);
        let rho = params.state().to_matrix();
        for o in swap_noisy_pairs_numeric(&rho, &rho)? {
            let (OutcomeLabel::Bell(label), Some(state)) = (o.label, o.state) else { continue };
            let c = noisy_outcome_concurrence(&params, label)?;
            let n = noisy_outcome_negativity(&params, label)?;
            worst = worst
                .max((c - concurrence_wootters_oracle(&state)?).abs())
                .max((n - negativity_two_qubit(&state)?).abs());
        }
    }
    Ok(worst)
}

fn pure_average_formula(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (x, y) = (schmidt(rng), schmidt(rng));
        let basis = MeasurementBasis::from_amplitudes(rng.random(), rng.random())?;
        let simulated = weighted_average(&swap_pure_pairs(&x, &y, &basis), concurrence_two_qubit_pure)?;
        worst = worst.max((simulated - average_swapped_concurrence_pure(&x, &y, &basis)).abs());
    }
    Ok(worst)
}

fn random_channel<R: Rng>(rng: &mut R) -> swapkit_core::Result<(ChannelState, f64)> {
    let a2: f64 = rng.random_range(0.5..=1.0);
    let b = (1.0 - a2).sqrt();
    Ok((ChannelState::pure(a2.sqrt(), b)?, b))
}

fn teleport_success_fidelity(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (channel, _) = random_channel(rng)?;
        let chi = UnknownQubit::random(rng);
        for r in teleport_probabilistic(&chi, &channel)?.iter().filter(|r| r.success) {
            if let Some(f) = r.fidelity {
                worst = worst.max((f - 1.0).abs());
            }
        }
    }
    Ok(worst)
}

fn teleport_success_probability(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (channel, b) = random_channel(rng)?;
        let chi = UnknownQubit::random(rng);
        let total = total_success_probability(&teleport_probabilistic(&chi, &channel)?);
        worst = worst.max((total - 2.0 * b * b).abs());
    }
    Ok(worst)
}

fn probability_conservation(rng: &mut ChaCha8Rng, trials: usize) -> swapkit_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (x, y, z) = (schmidt(rng), schmidt(rng), schmidt(rng));
        let basis = MeasurementBasis::from_amplitudes(rng.random(), rng.random())?;
        let params = noisy(rng);
        let (r1, r2) = (random::density_matrix(rng, 4), random::density_matrix(rng, 4));
        let (channel, _) = random_channel(rng)?;
        let chi = UnknownQubit::random(rng);
        let teleport: f64 = teleport_probabilistic(&chi, &channel)?.iter().map(|r| r.probability()).sum();
        for total in [
            total_probability(&swap_pure_pairs(&x, &y, &basis)),
            total_probability(&swap_three_pairs_ghz(&x, &y, &z)),
            total_probability(&swap_noisy_pairs(&params, &params)?),
            total_probability(&swap_noisy_pairs_numeric(&r1, &r2)?),
            teleport,
        ] {
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(worst)
}
