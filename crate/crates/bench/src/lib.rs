//! Fixtures shared by the criterion benchmarks in `benches/`.

use nmrqc_core::gates::GateName;
use nmrqc_core::pulse::pulse_for_gate;
use nmrqc_core::{EoParams, MachineConfig, RationalGamma, SfMode};

/// The `Y1` pulse on the default machine at pulse-duration integer `k`.
pub fn y1_pulse(k: u64, mode: SfMode) -> EoParams {
    pulse_for_gate(
        &GateName::Y(1),
        &MachineConfig::default(),
        RationalGamma::default(),
        k,
        mode,
    )
    .expect("Y1 is a single-spin rotation")
    .1
}

/// The `Y2` pulse, the longest single EO of the pulse tables (`tau/2pi = 128 k`).
pub fn y2_pulse(k: u64, mode: SfMode) -> EoParams {
    pulse_for_gate(
        &GateName::Y(2),
        &MachineConfig::default(),
        RationalGamma::default(),
        k,
        mode,
    )
    .expect("Y2 is a single-spin rotation")
    .1
}
