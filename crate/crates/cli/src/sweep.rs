use std::fs;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use swapkit_core::measures::{concurrence_two_qubit_pure, concurrence_xstate, negativity_two_qubit, negativity_xstate};
use swapkit_core::states::combo_criterion;
use swapkit_core::swap::{
    average_noisy_concurrence, average_noisy_negativity, average_swapped_concurrence_pure, swap_pure_pairs,
    swap_three_pairs_ghz, weighted_average, weighted_tripartite,
};
use swapkit_core::teleport::{average_success_fidelity, teleport_noisy_all, total_success_probability};
use swapkit_core::{BellLabel, ChannelState, Measure, MeasurementBasis, NoisyPairParams, SchmidtPair, UnknownQubit};

use crate::config::{Experiment, SweepConfig};
use crate::format::csv_row;
use crate::CliError;

/// Slack on the post-sweep inequality checks.
pub const ASSERT_TOL: f64 = 1e-12;
/// Agreement between simulated and closed-form columns.
pub const SIMULATION_TOL: f64 = 1e-10;
/// Random input qubits averaged per teleport cell.
pub const TELEPORT_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub violations: Vec<String>,
}

impl SweepOutput {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&csv_row(row));
            out.push('\n');
        }
        out
    }
}

pub fn header(experiment: Experiment) -> Vec<&'static str> {
    match experiment {
        Experiment::Fig2Region => {
            vec!["alpha", "p0", "combo", "negativity", "concurrence", "ppt_entangled", "combo_entangled"]
        }
        Experiment::Fig3Measures => vec!["p0", "alpha", "concurrence", "negativity"],
        Experiment::Fig4Conc => vec!["alpha", "p0", "C_input", "C_av", "C_product"],
        Experiment::Fig5Neg => vec!["alpha", "p0", "N_input", "N_av", "N_product"],
        Experiment::Fig6Compare => vec!["alpha", "p0", "C_av", "N_av", "C_product", "N_product"],
        Experiment::SwapPure => vec!["p0", "q0", "a0", "a1", "C_av", "C_av_formula", "C_bell"],
        Experiment::SwapGhz => vec!["p0", "q0", "r0", "C_av", "N_av", "C_product", "N_product"],
        Experiment::Teleport => vec!["p0", "alpha", "success_probability", "mean_fidelity"],
    }
}

struct Cell {
    row: Vec<f64>,
    violations: Vec<String>,
}

impl Cell {
    fn new(row: Vec<f64>) -> Self {
        Self { row, violations: Vec::new() }
    }

    fn check(mut self, ok: bool, what: impl FnOnce() -> String) -> Self {
        if !ok {
            self.violations.push(what());
        }
        self
    }
}

fn noisy(p0: f64, alpha: f64) -> swapkit_core::Result<NoisyPairParams> {
    NoisyPairParams::from_p0(p0, alpha)
}

fn evaluate(experiment: Experiment, x: &[f64], rng: &mut ChaCha8Rng) -> swapkit_core::Result<Cell> {
    let at = || format!("{experiment} at {x:?}");
    Ok(match experiment {
        Experiment::Fig2Region => {
            let (alpha, p0) = (x[0], x[1]);
            let state = noisy(p0, alpha)?.state();
            let rho = state.to_matrix();
            let f = combo_criterion(&rho)?;
            let n = negativity_two_qubit(&rho)?;
            let ppt = n > SIMULATION_TOL;
            let combo = f > 0.0;
            Cell::new(vec![
                alpha,
                p0,
                f,
                n,
                concurrence_xstate(&state),
                f64::from(u8::from(ppt)),
                f64::from(u8::from(combo)),
            ])
            .check(ppt == combo || f.abs() <= SIMULATION_TOL, || {
                format!("{}: combo criterion disagrees with PPT", at())
            })
        }
        Experiment::Fig3Measures => {
            let (p0, alpha) = (x[0], x[1]);
            let state = noisy(p0, alpha)?.state();
            let (c, n) = (concurrence_xstate(&state), negativity_xstate(&state));
            Cell::new(vec![p0, alpha, c, n]).check(c + ASSERT_TOL >= n, || format!("{}: N exceeds C", at()))
        }
        Experiment::Fig4Conc | Experiment::Fig5Neg => {
            let (alpha, p0) = (x[0], x[1]);
            let params = noisy(p0, alpha)?;
            let state = params.state();
            let (input, av) = if experiment == Experiment::Fig4Conc {
                (concurrence_xstate(&state), average_noisy_concurrence(&params))
            } else {
                (negativity_xstate(&state), average_noisy_negativity(&params))
            };
            let product = input * input;
            Cell::new(vec![alpha, p0, input, av, product])
                .check(av <= product + ASSERT_TOL, || format!("{}: average exceeds product", at()))
        }
        Experiment::Fig6Compare => {
            let (alpha, p0) = (x[0], x[1]);
            let params = noisy(p0, alpha)?;
            let state = params.state();
            let (c, n) = (concurrence_xstate(&state), negativity_xstate(&state));
            let (c_av, n_av) = (average_noisy_concurrence(&params), average_noisy_negativity(&params));
            Cell::new(vec![alpha, p0, c_av, n_av, c * c, n * n])
                .check(c_av + ASSERT_TOL >= n_av, || format!("{}: N_av exceeds C_av", at()))
        }
        Experiment::SwapPure => {
            let (p0, q0, a0, a1) = (x[0], x[1], x[2], x[3]);
            let (ab, cd) = (SchmidtPair::from_p0(p0)?, SchmidtPair::from_p0(q0)?);
            let basis = MeasurementBasis::from_amplitudes(a0, a1)?;
            let simulated = weighted_average(&swap_pure_pairs(&ab, &cd, &basis), concurrence_two_qubit_pure)?;
            let formula = average_swapped_concurrence_pure(&ab, &cd, &basis);
            let bell = average_swapped_concurrence_pure(&ab, &cd, &MeasurementBasis::bell());
            Cell::new(vec![p0, q0, a0, a1, simulated, formula, bell])
                .check((simulated - formula).abs() <= SIMULATION_TOL, || {
                    format!("{}: simulation disagrees with formula", at())
                })
                .check(formula <= bell + ASSERT_TOL, || format!("{}: basis exceeds Bell value", at()))
        }
        Experiment::SwapGhz => {
            let pairs = [SchmidtPair::from_p0(x[0])?, SchmidtPair::from_p0(x[1])?, SchmidtPair::from_p0(x[2])?];
            let out = swap_three_pairs_ghz(&pairs[0], &pairs[1], &pairs[2]);
            let c_av = weighted_tripartite(&out, Measure::Concurrence)?;
            let n_av = weighted_tripartite(&out, Measure::Negativity)?;
            let c_product: f64 = pairs.iter().map(|p| 2.0 * (p.p0() * p.p1()).sqrt()).product();
            let n_product = c_product;
            Cell::new(vec![x[0], x[1], x[2], c_av, n_av, c_product, n_product])
                .check((c_av - c_product).abs() <= SIMULATION_TOL, || format!("{}: C_av departs from product", at()))
                .check((n_av - n_product).abs() <= SIMULATION_TOL, || format!("{}: N_av departs from product", at()))
        }
        Experiment::Teleport => {
            let (p0, alpha) = (x[0], x[1]);
            let channel = ChannelState::from_noisy_swap(&noisy(p0, alpha)?, BellLabel::PhiPlus)?;
            let mut success = 0.0;
            let mut fidelity = 0.0;
            let mut counted = 0usize;
            for _ in 0..TELEPORT_SAMPLES {
                let chi = UnknownQubit::random(rng);
                let results = teleport_noisy_all(&chi, &channel)?;
                success += total_success_probability(&results);
                if let Some(f) = average_success_fidelity(&results) {
                    fidelity += f;
                    counted += 1;
                }
            }
            let mean_fidelity = if counted > 0 { fidelity / counted as f64 } else { f64::NAN };
            Cell::new(vec![p0, alpha, success / TELEPORT_SAMPLES as f64, mean_fidelity])
                .check(mean_fidelity.is_nan() || (0.0..=1.0 + ASSERT_TOL).contains(&mean_fidelity), || {
                    format!("{}: fidelity outside [0, 1]", at())
                })
        }
    })
}

/// Evaluates every grid point in parallel; rows come back in grid order and
/// each cell draws from its own stream of `seed`.
pub fn compute(cfg: &SweepConfig) -> Result<SweepOutput, CliError> {
    let points = cfg.points();
    let cells: Vec<Cell> = points
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            evaluate(cfg.experiment, x, &mut rng)
        })
        .collect::<swapkit_core::Result<_>>()?;
    let mut rows = Vec::with_capacity(cells.len());
    let mut violations = Vec::new();
    for cell in cells {
        rows.push(cell.row);
        violations.extend(cell.violations);
    }
    Ok(SweepOutput { header: header(cfg.experiment), rows, violations })
}

/// Runs the sweep and writes the CSV to `cfg.output_path`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, CliError> {
    let output = compute(cfg)?;
    let mut file = fs::File::create(&cfg.output_path).map_err(|e| CliError::io(&cfg.output_path, e))?;
    file.write_all(output.to_csv().as_bytes()).map_err(|e| CliError::io(&cfg.output_path, e))?;
    Ok(output)
}
