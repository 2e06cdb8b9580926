//! Quantum channel representations: superoperators, Kraus lists and Choi
//! matrices, with composition, tensor powers and CPTP checks.

mod choi;
mod divisibility;
pub mod library;
mod map;

pub use choi::{is_cptp, min_choi_eig, to_choi, trace_preservation_defect, ChoiMatrix, CptpReport};
pub use divisibility::{intermediate_map, pauli_transfer, smallest_singular_value, PauliTransfer};
pub use map::{
    compose, kraus_tp_deviation, tensor, tensor_power, LinearMap, QuantumChannel, Superoperator,
};
