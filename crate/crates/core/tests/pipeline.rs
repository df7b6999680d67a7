use proptest::prelude::*;
use swapkit_core::measures::{concurrence_xstate, negativity_two_qubit};
use swapkit_core::swap::{average_noisy_concurrence, swap_noisy_pairs, total_probability};
use swapkit_core::teleport::{average_success_fidelity, teleport_noisy_all, total_success_probability};
use swapkit_core::{BellLabel, ChannelState, NoisyPairParams, UnknownQubit};

#[test]
fn swapped_channel_teleports_with_visibility_dependent_fidelity() {
    for (alpha, expected) in [(1.0, 1.0), (0.5, 0.625), (0.0, 0.5)] {
        let params = NoisyPairParams::from_p0(0.5, alpha).unwrap();
        let channel = ChannelState::from_noisy_swap(&params, BellLabel::PhiPlus).unwrap();
        let results = teleport_noisy_all(&UnknownQubit::plus(), &channel).unwrap();
        assert!((total_success_probability(&results) - 1.0).abs() < 1e-12);
        let f = average_success_fidelity(&results).unwrap();
        assert!((f - expected).abs() < 1e-12, "alpha {alpha}: {f}");
    }
}

#[test]
fn swapped_outcomes_are_valid_states() {
    let params = NoisyPairParams::from_p0(0.2, 0.7).unwrap();
    for o in swap_noisy_pairs(&params, &params).unwrap() {
        let rho = o.state.unwrap().to_matrix();
        rho.check_density().unwrap();
        assert!(negativity_two_qubit(&rho).unwrap() >= 0.0);
    }
}

proptest! {
    #[test]
    fn swapping_never_increases_average_concurrence(p0 in 0.0f64..=1.0, alpha in 0.0f64..=1.0) {
        let params = NoisyPairParams::from_p0(p0, alpha).unwrap();
        let c = concurrence_xstate(&params.state());
        prop_assert!(average_noisy_concurrence(&params) <= c * c + 1e-12);
        let outcomes = swap_noisy_pairs(&params, &params).unwrap();
        prop_assert!((total_probability(&outcomes) - 1.0).abs() < 1e-12);
    }
}
