//! Emulator for a two-qubit NMR-style quantum computer.
//!
//! The machine is two spin-1/2 nuclei with an Ising coupling, static fields
//! along `z`, and sinusoidal transverse fields that implement single-qubit
//! rotations. Programs are sequences of elementary operations (EOs): time
//! intervals during which every Hamiltonian parameter is held fixed. The
//! time-dependent Schrödinger equation is integrated per EO with an exactly
//! unitary second-order product formula, or with a closed-form propagator
//! when the EO is diagonal.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`]: state vectors, preparation and qubit expectation values.
//! * [`hamiltonian`]: EO parameters, machine constants, `H(t)`.
//! * [`integrator`]: product formula, exact diagonal and dense reference propagators.
//! * [`gates`]: ideal gate matrices and ideal-machine EO parameters.
//! * [`pulse`]: resonant pulse design and commensurability utilities.
//! * [`programs`]: CNOT, `(CNOT)^5` and Grover sequences in each implementation style.
//! * [`experiment`]: batch runs, result tables and the verification suite.
//!
//! Basis states of two qubits are ordered `|00>, |10>, |01>, |11>`: qubit 1 is
//! the fast index, so amplitude `i` belongs to `|b1 b2>` with `i = b1 + 2 b2`.

pub mod error;
pub mod experiment;
pub mod gates;
pub mod hamiltonian;
pub mod integrator;
pub mod programs;
pub mod pulse;
pub mod reference;
pub mod state;

pub use error::{Error, Result};
pub use experiment::{
    emit_table, perturb_duration_study, run_experiment, verify_suite, ExperimentSpec, OutputFormat,
    ResultTable, VerifyReport,
};
pub use gates::{compose, ideal_eo_params, ideal_gate, GateName, IdealGate};
pub use hamiltonian::{hamiltonian_at, validate_machine, EoParams, MachineConfig};
pub use integrator::{evolve, evolve_reference, IntegratorConfig, Method};
pub use programs::{
    build_cnot, build_grover, build_qa, CnotVariant, ImplStyle, InputState, Program,
};
pub use pulse::{design_pulse, Axis, Direction, PulseDesign, PulseRequest, RationalGamma, SfMode};
pub use state::{QubitExpectation, StateVector};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Dense two-qubit operator.
pub type Mat4 = nalgebra::Matrix4<C64>;
