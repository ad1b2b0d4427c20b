//! Truncated two-mode Fock-space simulator for NOON-state generation.
//!
//! A 50-50 beam splitter turns a suitable two-mode input into the entangled
//! state `(|N,0> + |0,N>)/sqrt(2)` after post-selecting on the total photon
//! number N. This crate builds the relevant inputs (squeezed vacuum,
//! coherent, even/odd superposed-coherent "cat" states), applies the
//! splitter unitary through two independent routes, and reports the NOON
//! fidelity, the post-selection probability, and the overlap with the ideal
//! input, including closed forms and the parameter sweeps behind them.
//!
//! Everything is a pure function over immutable value types; sweeps and
//! optimizations parallelize with deterministic output ordering.

pub mod beamsplitter;
pub mod error;
pub mod fock;
pub mod math;
pub mod optimize;
pub mod postselect;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use beamsplitter::{
    apply_direct, apply_disentangled, disentangle, gamma_5050, verify_unitary, BeamSplitterConfig,
};
pub use fock::{BipartiteState, BlockVector, SingleModeState};
pub use postselect::{
    analytic_overlap_cat, analyze, noon_fidelity, postselection_overlap, sv_cs_fidelity,
    PostSelectionResult,
};
pub use states::{
    build_input, cat, coherent, ideal_input, noon, number_state, squeezed_vacuum, CatParity,
    Cutoff, FamilyTag, InputFamily,
};
