//! Few-qubit simulation of entanglement swapping.
//!
//! Dense state vectors and density matrices over registers of up to six
//! qubits, the concurrence and negativity measures, swapping of pure, noisy
//! and three-pair systems, and teleportation through the resulting channels.

pub mod error;
pub mod measures;
pub mod random;
pub mod states;
pub mod swap;
pub mod teleport;
pub mod tensor;

pub use error::{Error, Result};
pub use measures::{BipartiteCut, Measure, Tripartite};
pub use num_complex::Complex64;
pub use states::{BlochMatrix, NoisyPairParams, SchmidtPair, XState};
pub use swap::{BellLabel, MeasurementBasis, OutcomeLabel, SwapOutcome};
pub use teleport::{ChannelState, PureChannel, TeleportResult, UnknownQubit};
pub use tensor::{ComplexMatrix, QubitRegister, StateVector};
