//! Executable EO sequences: the three CNOT realisations, the `(CNOT)^5`
//! quantum algorithms QA1/QA2, and the four Grover search sequences, each in
//! ideal, static-axis SF or rotating SF style.
//!
//! Sequences are written in operator order (rightmost gate acts first), as in
//! `CNOT_1 = Y1 X1' Ybar1 X2' Ybar2 I' Y2`. A [`Program`] stores the EOs in
//! application order: the first EO acts first.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{ideal_eo_params, GateName};
use crate::hamiltonian::{EoParams, MachineConfig};
use crate::integrator::{propagator, IntegratorConfig, Method};
use crate::pulse::{
    design_pulse, pulse_for_gate, Axis, Direction, PulseRequest, RationalGamma, SfMode,
};
use crate::state::{StateVector, NORM_TOL};
use crate::Mat4;

/// How single-qubit gates are realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplStyle {
    /// Constant fields on the ideal machine (no resonance conditions).
    Ideal,
    StaticSf,
    RotatingSf,
}

impl ImplStyle {
    pub fn sf_mode(self) -> Option<SfMode> {
        match self {
            ImplStyle::Ideal => None,
            ImplStyle::StaticSf => Some(SfMode::StaticAxis),
            ImplStyle::RotatingSf => Some(SfMode::Rotating),
        }
    }
}

impl FromStr for ImplStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ideal" => Ok(ImplStyle::Ideal),
            "static" | "static_sf" | "static_axis" => Ok(ImplStyle::StaticSf),
            "rotating" | "rotating_sf" => Ok(ImplStyle::RotatingSf),
            _ => Err(Error::config(format!(
                "unknown style '{s}' (ideal|static_sf|rotating_sf)"
            ))),
        }
    }
}

/// Which CNOT decomposition to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CnotVariant {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    /// `Xbar1 Y1' X2' X1 Ybar2 I' Y2`: the third decomposition with the
    /// commuting pair `Ybar2`, `X1` executed in the order that reproduces
    /// the published results.
    #[serde(rename = "3")]
    Three,
    /// `Xbar1 Y1' X2' Ybar2 X1 I' Y2`, the third decomposition as printed.
    #[serde(rename = "3-printed")]
    ThreePrinted,
}

impl CnotVariant {
    /// Operator-order gate list.
    pub fn gates(self) -> Vec<GateName> {
        use GateName::*;
        match self {
            CnotVariant::One => vec![Y(1), XPrime(1), Ybar(1), XPrime(2), Ybar(2), IPrime, Y(2)],
            CnotVariant::Two => vec![Y(1), XPrime(1), XPrime(2), Ybar(1), Ybar(2), IPrime, Y(2)],
            CnotVariant::Three => vec![Xbar(1), YPrime1, XPrime(2), X(1), Ybar(2), IPrime, Y(2)],
            CnotVariant::ThreePrinted => {
                vec![Xbar(1), YPrime1, XPrime(2), Ybar(2), X(1), IPrime, Y(2)]
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CnotVariant::One => "1",
            CnotVariant::Two => "2",
            CnotVariant::Three => "3",
            CnotVariant::ThreePrinted => "3-printed",
        }
    }
}

impl FromStr for CnotVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(CnotVariant::One),
            "2" => Ok(CnotVariant::Two),
            "3" => Ok(CnotVariant::Three),
            "3-printed" | "3p" => Ok(CnotVariant::ThreePrinted),
            _ => Err(Error::config(format!(
                "unknown CNOT variant '{s}' (1|2|3|3-printed)"
            ))),
        }
    }
}

/// Input preparation; always exact (matrix) rotations from `|00>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputState {
    Basis([u8; 2]),
    Singlet,
}

impl InputState {
    pub fn prepare(self) -> StateVector {
        match self {
            InputState::Basis(bits) => StateVector::basis(2, &bits).expect("two bits"),
            InputState::Singlet => StateVector::singlet(),
        }
    }
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputState::Basis([a, b]) => write!(f, "|{a}{b}>"),
            InputState::Singlet => write!(f, "|singlet>"),
        }
    }
}

impl FromStr for InputState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('|').trim_end_matches('>');
        match t {
            "00" => Ok(InputState::Basis([0, 0])),
            "10" => Ok(InputState::Basis([1, 0])),
            "01" => Ok(InputState::Basis([0, 1])),
            "11" => Ok(InputState::Basis([1, 1])),
            "singlet" => Ok(InputState::Singlet),
            _ => Err(Error::config(format!(
                "unknown input '{s}' (00|10|01|11|singlet)"
            ))),
        }
    }
}

/// How the trailing `Y1` of QA2 is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FinalRotationStyle {
    /// In the program's own style (a pulse for SF styles).
    #[default]
    Program,
    /// As the ideal-machine EO.
    Exact,
}

impl FromStr for FinalRotationStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "program" => Ok(FinalRotationStyle::Program),
            "exact" => Ok(FinalRotationStyle::Exact),
            _ => Err(Error::config(format!(
                "unknown final rotation style '{s}' (program|exact)"
            ))),
        }
    }
}

/// Time origin of the sinusoidal fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SfPhase {
    /// Every EO starts its fields at `t = 0` with the designed phases.
    #[default]
    Reset,
    /// One clock for the whole program.
    Continuous,
}

/// Which quantum algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qa {
    /// `(CNOT)^5` on a basis state.
    Qa1,
    /// `Y1 (CNOT)^5` on the singlet.
    Qa2,
}

/// Everything that shapes how gates become EOs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildOptions {
    pub machine: MachineConfig,
    pub style: ImplStyle,
    /// Pulse-duration integer; the table subscript is `s = 2kMN^2`.
    pub k: u64,
    /// Defaults to the best small-denominator fraction of `machine.gamma`.
    pub gamma: Option<RationalGamma>,
    /// Product-formula step `delta/2pi` for pulses.
    pub delta_over_2pi: f64,
    /// Added to `tau/2pi` of every `I'`.
    pub iprime_tau_offset: f64,
    /// Switch off the Ising coupling during single-qubit pulses.
    pub zero_j_in_pulses: bool,
    pub final_rotation: FinalRotationStyle,
    pub sf_phase: SfPhase,
    /// Decomposition used when a bare `CNOT` gate is expanded.
    pub cnot_variant: CnotVariant,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            machine: MachineConfig::default(),
            style: ImplStyle::Ideal,
            k: 1,
            gamma: None,
            delta_over_2pi: 0.01,
            iprime_tau_offset: 0.0,
            zero_j_in_pulses: false,
            final_rotation: FinalRotationStyle::Program,
            sf_phase: SfPhase::Reset,
            cnot_variant: CnotVariant::One,
        }
    }
}

impl BuildOptions {
    pub fn styled(style: ImplStyle, k: u64) -> Self {
        Self {
            style,
            k,
            ..Self::default()
        }
    }

    pub fn gamma(&self) -> Result<RationalGamma> {
        match self.gamma {
            Some(g) => RationalGamma::new(g.n, g.m),
            None => RationalGamma::for_machine(&self.machine),
        }
    }

    /// Table subscript `s = 2kMN^2`.
    pub fn s(&self) -> Result<u64> {
        let g = self.gamma()?;
        Ok(2 * self.k * g.m * g.n * g.n)
    }

    fn iprime(&self, label: &str) -> EoParams {
        let m = &self.machine;
        EoParams::free_evolution(
            label,
            m.ising_tau_over_2pi() + self.iprime_tau_offset,
            m.j,
            m.h1z,
            m.h2z,
        )
        .with_delta(1.0)
    }

    fn finish_pulse(&self, mut eo: EoParams) -> EoParams {
        eo.delta_over_2pi = self.delta_over_2pi;
        if self.zero_j_in_pulses {
            eo.j = 0.0;
        }
        eo
    }

    /// EOs realising one gate, in application order.
    pub fn gate_eos(&self, name: &GateName) -> Result<Vec<EoParams>> {
        let machine = &self.machine;
        let Some(mode) = self.style.sf_mode() else {
            return match name {
                GateName::IPrime => Ok(vec![self.iprime("I'")]),
                GateName::Cnot => self.sequence_eos(&self.cnot_variant.gates()),
                _ => Ok(vec![ideal_eo_params(name, machine)?]),
            };
        };
        match name {
            GateName::IPrime => Ok(vec![self.iprime("I'")]),
            GateName::I => Ok(vec![ideal_eo_params(name, machine)?]),
            GateName::Cnot => self.sequence_eos(&self.cnot_variant.gates()),
            GateName::G => {
                // G = Y2 X2'' Ybar2 Y1 X1'' Ybar1 exp(-i tau H_NMR)
                use GateName::*;
                let m = &self.machine;
                let mut eos = vec![EoParams::free_evolution(
                    "H_NMR",
                    m.ising_tau_over_2pi(),
                    m.j,
                    m.h1z,
                    m.h2z,
                )
                .with_delta(1.0)];
                eos.extend(self.sequence_eos(&[
                    Y(2),
                    XDoublePrime(2),
                    Ybar(2),
                    Y(1),
                    XDoublePrime(1),
                    Ybar(1),
                ])?);
                Ok(eos)
            }
            GateName::P(_) => Err(Error::config(format!(
                "gate {name} has no pulse realisation"
            ))),
            _ => {
                let (_, eo) = pulse_for_gate(name, machine, self.gamma()?, self.k, mode)?;
                Ok(vec![self.finish_pulse(eo)])
            }
        }
    }

    /// EOs of an operator-order gate list, in application order.
    pub fn sequence_eos(&self, gates: &[GateName]) -> Result<Vec<EoParams>> {
        let mut eos = Vec::new();
        for g in gates.iter().rev() {
            eos.extend(self.gate_eos(g)?);
        }
        Ok(eos)
    }
}

/// A named EO sequence with its input and, when known, the ideal answer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Program {
    pub name: String,
    /// Application order.
    pub eos: Vec<EoParams>,
    pub input: InputState,
    pub expected: Option<(f64, f64)>,
    pub sf_phase: SfPhase,
}

fn cnot_output(input: InputState) -> Option<(f64, f64)> {
    match input {
        InputState::Basis([b1, b2]) => Some((b1 as f64, (b1 ^ b2) as f64)),
        InputState::Singlet => None,
    }
}

pub fn build_cnot(variant: CnotVariant, opts: &BuildOptions) -> Result<Program> {
    let input = InputState::Basis([0, 0]);
    Ok(Program {
        name: format!("CNOT_{}", variant.label()),
        eos: opts.sequence_eos(&variant.gates())?,
        input,
        expected: cnot_output(input),
        sf_phase: opts.sf_phase,
    })
}

/// QA1 = `(CNOT)^5` on a basis state; QA2 = `Y1 (CNOT)^5` on the singlet.
pub fn build_qa(
    which: Qa,
    input: InputState,
    variant: CnotVariant,
    opts: &BuildOptions,
) -> Result<Program> {
    let cnot = opts.sequence_eos(&variant.gates())?;
    let mut eos = Vec::with_capacity(5 * cnot.len() + 1);
    for _ in 0..5 {
        eos.extend(cnot.iter().cloned());
    }
    let expected = match (which, input) {
        (Qa::Qa1, InputState::Basis(_)) => cnot_output(input),
        (Qa::Qa2, InputState::Singlet) => {
            let y1 = match opts.final_rotation {
                FinalRotationStyle::Program => opts.gate_eos(&GateName::Y(1))?,
                FinalRotationStyle::Exact => vec![ideal_eo_params(&GateName::Y(1), &opts.machine)?],
            };
            eos.extend(y1);
            Some((1.0, 1.0))
        }
        (Qa::Qa1, InputState::Singlet) => {
            return Err(Error::config(
                "QA1 takes a basis-state input; use QA2 for the singlet",
            ))
        }
        (Qa::Qa2, InputState::Basis(_)) => {
            return Err(Error::config("QA2 takes the singlet input"))
        }
    };
    let name = match which {
        Qa::Qa1 => format!("(CNOT_{})^5 {input}", variant.label()),
        Qa::Qa2 => format!("Y1 (CNOT_{})^5 {input}", variant.label()),
    };
    Ok(Program {
        name,
        eos,
        input,
        expected,
        sf_phase: opts.sf_phase,
    })
}

/// QA1 for basis inputs and QA2 for the singlet.
pub fn build_qa_for_input(
    input: InputState,
    variant: CnotVariant,
    opts: &BuildOptions,
) -> Result<Program> {
    let which = match input {
        InputState::Singlet => Qa::Qa2,
        InputState::Basis(_) => Qa::Qa1,
    };
    build_qa(which, input, variant, opts)
}

/// Operator-order Grover sequence `U_item`.
pub fn grover_gates(item: usize) -> Result<Vec<GateName>> {
    use GateName::*;
    if item > 3 {
        return Err(Error::config(format!("Grover item {item} outside 0..=3")));
    }
    let m1 = if item == 0 || item == 1 {
        X(1)
    } else {
        Xbar(1)
    };
    let m2 = if item == 0 || item == 2 {
        X(2)
    } else {
        Xbar(2)
    };
    Ok(vec![
        X(1),
        Ybar(1),
        X(2),
        Ybar(2),
        G,
        m1,
        Ybar(1),
        m2,
        Ybar(2),
        G,
        Xbar(1),
        Xbar(1),
        Ybar(1),
        Xbar(2),
        Xbar(2),
        Ybar(2),
    ])
}

pub fn build_grover(item: usize, opts: &BuildOptions) -> Result<Program> {
    let gates = grover_gates(item)?;
    Ok(Program {
        name: format!("Grover item {item}"),
        eos: opts.sequence_eos(&gates)?,
        input: InputState::Basis([0, 0]),
        expected: Some(((item & 1) as f64, (item >> 1) as f64)),
        sf_phase: opts.sf_phase,
    })
}

/// Shared cache of single-EO propagators.
#[derive(Debug, Default)]
pub struct PropagatorCache {
    map: Mutex<HashMap<Vec<u64>, Mat4>>,
}

impl PropagatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(eo: &EoParams, t0: f64) -> Vec<u64> {
        let mut k = vec![
            eo.tau_over_2pi,
            eo.j,
            eo.omega,
            eo.phi_x,
            eo.phi_y,
            eo.delta_over_2pi,
            t0,
        ];
        k.extend(eo.static_fields.iter().flatten());
        k.extend(eo.sf_amplitudes.iter().flatten());
        k.into_iter().map(f64::to_bits).collect()
    }

    fn get_or_compute(&self, eo: &EoParams, t0: f64) -> Result<Mat4> {
        let key = Self::key(eo, t0);
        if let Some(u) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(*u);
        }
        // computed outside the lock so independent EOs proceed in parallel
        let cfg = IntegratorConfig::new(eo.delta_over_2pi, Method::auto_for(eo));
        let u = propagator(eo, &cfg, t0)?;
        self.map.lock().expect("cache lock").insert(key, u);
        Ok(u)
    }
}

impl Program {
    /// Product of the EO propagators (`U = U_n ... U_1`).
    pub fn unitary(&self, cache: &PropagatorCache) -> Result<Mat4> {
        let mut u = Mat4::identity();
        let mut t0 = 0.0;
        for eo in &self.eos {
            let origin = match self.sf_phase {
                SfPhase::Reset => 0.0,
                SfPhase::Continuous => t0,
            };
            u = cache.get_or_compute(eo, origin)? * u;
            t0 += 2.0 * PI * eo.tau_over_2pi;
        }
        Ok(u)
    }

    /// Runs the program on its declared input.
    pub fn run(&self, cache: &PropagatorCache) -> Result<StateVector> {
        self.run_on(&self.input.prepare(), cache)
    }

    pub fn run_on(&self, state: &StateVector, cache: &PropagatorCache) -> Result<StateVector> {
        let out = state.apply_mat4(&self.unitary(cache)?)?;
        if !out.is_normalized(NORM_TOL) {
            return Err(Error::NumericalIntegrity(format!(
                "{}: norm drifted to {}",
                self.name,
                out.norm()
            )));
        }
        Ok(out)
    }

    /// Total duration `tau/2pi`.
    pub fn duration_over_2pi(&self) -> f64 {
        self.eos.iter().map(|e| e.tau_over_2pi).sum()
    }
}

/// Full unitary of a program, evolving the four basis columns EO by EO.
pub fn program_unitary(program: &Program) -> Result<Mat4> {
    program.unitary(&PropagatorCache::new())
}

/// Parses an angle: radians (`1.5708`), or multiples of pi such as `pi`,
/// `pi/2`, `3pi/4`, `0.5*pi`, `-pi/2`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase().replace(' ', "");
    let bad = || Error::config(format!("cannot parse angle '{text}'"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

/// Parses a pulse axis: `x`, `y`, or an inverse `-x`, `xbar`, `-y`, `ybar`.
pub fn parse_axis(text: &str) -> Result<(Axis, Direction)> {
    match text.trim().to_ascii_lowercase().as_str() {
        "x" => Ok((Axis::X, Direction::Forward)),
        "y" => Ok((Axis::Y, Direction::Forward)),
        "-x" | "xbar" => Ok((Axis::X, Direction::Inverse)),
        "-y" | "ybar" => Ok((Axis::Y, Direction::Inverse)),
        _ => Err(Error::config(format!("unknown axis '{text}' (x|y|-x|-y)"))),
    }
}

/// Parses the program text format. One EO (or gate) per line, first line
/// acts first:
///
/// ```text
/// # comment
/// input singlet
/// gate Y2
/// pulse 1 pi/2 y rotating 1
/// diagonal 1162790.6976744186
/// ```
///
/// `gate` lines expand in the style of `opts`; `pulse` lines take
/// `<spin> <angle> <axis> <rotating|static> <k>`; `diagonal` is free
/// evolution of the machine for the given `tau/2pi`. `input` is optional
/// (default `|00>`).
pub fn parse_program(name: &str, text: &str, opts: &BuildOptions) -> Result<Program> {
    let mut eos = Vec::new();
    let mut input = InputState::Basis([0, 0]);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| Error::config(format!("line {}: {e}", lineno + 1));
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["gate", g] => {
                let gate: GateName = g.parse().map_err(at)?;
                eos.extend(opts.gate_eos(&gate).map_err(at)?);
            }
            ["pulse", spin, angle, axis, mode, k] => {
                let target_spin: usize = spin
                    .parse()
                    .map_err(|_| at(Error::config(format!("bad spin '{spin}'"))))?;
                let (axis, direction) = parse_axis(axis).map_err(at)?;
                let k: u64 = k
                    .parse()
                    .map_err(|_| at(Error::config(format!("bad k '{k}'"))))?;
                let req = PulseRequest {
                    target_spin,
                    angle: parse_angle(angle).map_err(at)?,
                    axis,
                    direction,
                    gamma: opts.gamma().map_err(at)?,
                    k,
                    mode: mode.parse().map_err(at)?,
                };
                let (_, mut eo) = design_pulse(&req, &opts.machine).map_err(at)?;
                eo.label = format!("pulse{}", lineno + 1);
                eos.push(opts.finish_pulse(eo));
            }
            ["diagonal", tau] => {
                let tau: f64 = tau
                    .parse()
                    .map_err(|_| at(Error::config(format!("bad duration '{tau}'"))))?;
                if !tau.is_finite() || tau < 0.0 {
                    return Err(at(Error::config(
                        "duration must be finite and non-negative",
                    )));
                }
                let m = &opts.machine;
                eos.push(
                    EoParams::free_evolution("diagonal", tau, m.j, m.h1z, m.h2z).with_delta(1.0),
                );
            }
            ["input", s] => input = s.parse().map_err(at)?,
            _ => return Err(at(Error::config(format!("cannot parse '{line}'")))),
        }
    }
    Ok(Program {
        name: name.to_string(),
        eos,
        input,
        expected: None,
        sf_phase: opts.sf_phase,
    })
}
