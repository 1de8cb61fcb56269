//! Design of resonant sinusoidal-field (SF) pulses for single-spin rotations.
//!
//! With `gamma = N/M`, a pulse on spin 1 lasts `t/2pi = 2kMN^2 / h1z` and a
//! pulse on spin 2 lasts `t/2pi = 2kM^3 / h1z`. These durations make every
//! static precession an integer number of full turns, so the spectator spin
//! comes back unchanged and no phase is left behind. The field amplitude on
//! the target spin is `(phi/2pi) / (t/2pi)`; the other spin sees `gamma`
//! times the spin-1 field because both nuclei share the same coil.
//!
//! A rotating SF has both transverse components and acts exactly in the
//! rotating frame. A static-axis SF oscillates along one axis; only its
//! co-rotating half is resonant, so its amplitude is doubled.

use std::f64::consts::PI;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{GateName, RotationAxis};
use crate::hamiltonian::{EoParams, MachineConfig};

/// Rotation axis of a pulse.
pub type Axis = RotationAxis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SfMode {
    Rotating,
    StaticAxis,
}

impl std::str::FromStr for SfMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotating" | "rotating_sf" | "rot" => Ok(SfMode::Rotating),
            "static" | "static_axis" | "static_sf" => Ok(SfMode::StaticAxis),
            _ => Err(Error::config(format!(
                "unknown SF mode '{s}' (rotating|static)"
            ))),
        }
    }
}

/// `gamma = N/M` with `0 < N < M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalGamma {
    pub n: u64,
    pub m: u64,
}

impl Default for RationalGamma {
    fn default() -> Self {
        Self { n: 1, m: 4 }
    }
}

impl RationalGamma {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if n == 0 || n >= m {
            return Err(Error::config(format!(
                "gamma = {n}/{m} must satisfy 0 < N < M"
            )));
        }
        let g = n.gcd(&m);
        Ok(Self { n: n / g, m: m / g })
    }

    /// Closest fraction with denominator at most `max_denominator`.
    pub fn approximate(gamma: f64, max_denominator: u64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::config(format!("gamma = {gamma} outside (0, 1)")));
        }
        // Stern-Brocot / continued-fraction search for the best approximation
        let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
        let mut x = gamma;
        loop {
            let a = x.floor();
            let a_u = a as u64;
            let (p2, q2) = (a_u * p1 + p0, a_u * q1 + q0);
            if q2 > max_denominator {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = x - a;
            if frac < 1e-12 {
                break;
            }
            x = 1.0 / frac;
        }
        Self::new(p1, q1)
    }

    pub fn value(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    pub fn for_machine(machine: &MachineConfig) -> Result<Self> {
        Self::approximate(machine.gamma, 1_000_000)
    }
}

/// Input of [`design_pulse`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseRequest {
    /// 1 or 2.
    pub target_spin: usize,
    /// Rotation angle in radians, `0 <= angle <= 4 pi`.
    pub angle: f64,
    pub axis: Axis,
    pub direction: Direction,
    pub gamma: RationalGamma,
    pub k: u64,
    pub mode: SfMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Poor,
    Marginal,
    Good,
}

/// The commensurability margin `2kNM(M-N)`, which must be much larger than one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margin {
    pub value: u64,
    pub verdict: Verdict,
}

/// Derived pulse schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseDesign {
    pub target_spin: usize,
    pub angle_phi: f64,
    pub axis: Axis,
    pub direction: Direction,
    pub k: u64,
    pub gamma: RationalGamma,
    /// Table subscript `2kMN^2`.
    pub s: u64,
    pub t_over_2pi: f64,
    /// Field strength on each spin (positive; signs live in the EO).
    pub amplitude_spin1: f64,
    pub amplitude_spin2: f64,
    pub omega: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub mode: SfMode,
    pub margin: Margin,
}

pub fn commensurability_margin(gamma: RationalGamma, k: u64) -> Margin {
    let value = 2 * k * gamma.n * gamma.m * (gamma.m - gamma.n);
    let verdict = if value < 50 {
        Verdict::Poor
    } else if value < 500 {
        Verdict::Marginal
    } else {
        Verdict::Good
    };
    Margin { value, verdict }
}

/// `(t1/2pi, t2/2pi) = (2kMN^2, 2kM^3)` in units of `1/h1z`.
pub fn hypothetical_durations(gamma: RationalGamma, k: u64) -> (u64, u64) {
    let (n, m) = (gamma.n, gamma.m);
    (2 * k * m * n * n, 2 * k * m * m * m)
}

/// Designs the pulse and the EO that realises it on `machine`.
pub fn design_pulse(
    req: &PulseRequest,
    machine: &MachineConfig,
) -> Result<(PulseDesign, EoParams)> {
    if !(1..=2).contains(&req.target_spin) {
        return Err(Error::config(format!(
            "target spin {} is not 1 or 2",
            req.target_spin
        )));
    }
    if !(0.0..=4.0 * PI).contains(&req.angle) {
        return Err(Error::config(format!(
            "rotation angle {} outside [0, 4 pi]",
            req.angle
        )));
    }
    if req.k == 0 {
        return Err(Error::config("pulse duration integer k must be at least 1"));
    }
    let gamma = RationalGamma::new(req.gamma.n, req.gamma.m)?;
    let (t1, t2) = hypothetical_durations(gamma, req.k);
    let turns = req.angle / (2.0 * PI);
    let g = gamma.value();
    let (t_over_2pi, a1, a2, omega) = if req.target_spin == 1 {
        let t = t1 as f64 / machine.h1z;
        let a1 = turns / t;
        (t, a1, g * a1, machine.h1z)
    } else {
        let t = t2 as f64 / machine.h1z;
        let a2 = turns / t;
        (t, a2 / g, a2, machine.h2z)
    };
    let sign = match req.direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    // (x-channel factor, y-channel factor, phi_x, phi_y)
    let (fx, fy, phi_x, phi_y) = match (req.mode, req.axis) {
        (SfMode::Rotating, Axis::Y) => (1.0, 1.0, 0.0, PI / 2.0),
        (SfMode::Rotating, Axis::X) => (-1.0, -1.0, -PI / 2.0, 0.0),
        (SfMode::StaticAxis, Axis::Y) => (2.0, 0.0, 0.0, 0.0),
        (SfMode::StaticAxis, Axis::X) => (0.0, -2.0, 0.0, 0.0),
    };
    let design = PulseDesign {
        target_spin: req.target_spin,
        angle_phi: req.angle,
        axis: req.axis,
        direction: req.direction,
        k: req.k,
        gamma,
        s: t1,
        t_over_2pi,
        amplitude_spin1: a1,
        amplitude_spin2: a2,
        omega,
        phi_x,
        phi_y,
        mode: req.mode,
        margin: commensurability_margin(gamma, req.k),
    };
    let eo = EoParams {
        label: String::new(),
        tau_over_2pi: t_over_2pi,
        j: machine.j,
        static_fields: [[0.0, 0.0, machine.h1z], [0.0, 0.0, machine.h2z]],
        sf_amplitudes: [
            [sign * fx * a1, sign * fy * a1],
            [sign * fx * a2, sign * fy * a2],
        ],
        omega,
        phi_x,
        phi_y,
        delta_over_2pi: 0.01,
    };
    Ok((design, eo))
}

/// Pulse realising a single-spin gate. Negative rotation angles become
/// inverse pulses.
pub fn pulse_for_gate(
    name: &GateName,
    machine: &MachineConfig,
    gamma: RationalGamma,
    k: u64,
    mode: SfMode,
) -> Result<(PulseDesign, EoParams)> {
    let (spin, axis, turns) = name
        .as_rotation(machine)
        .ok_or_else(|| Error::config(format!("gate {name} is not a single-spin rotation")))?;
    let req = PulseRequest {
        target_spin: spin,
        angle: 2.0 * PI * turns.abs(),
        axis,
        direction: if turns < 0.0 {
            Direction::Inverse
        } else {
            Direction::Forward
        },
        gamma,
        k,
        mode,
    };
    let (design, mut eo) = design_pulse(&req, machine)?;
    eo.label = name.to_string();
    Ok((design, eo))
}

/// Distance from the identity, `2 |sin(t |v| / 4)|`, of the rotation the
/// spectator spin undergoes in the frame rotating with the target spin.
/// `|v| = sqrt((h1z - h2z)^2 + h~_spectator^2)`. Zero when `t |v|` is a
/// multiple of `4 pi`; two (the maximum) at `t |v| = 2 pi`.
pub fn spectator_residual(design: &PulseDesign, machine: &MachineConfig) -> f64 {
    let spectator_amp = if design.target_spin == 1 {
        design.amplitude_spin2
    } else {
        design.amplitude_spin1
    };
    let v = (machine.h1z - machine.h2z).hypot(spectator_amp);
    // t|v|/4 = (pi/2) (t/2pi) |v|; reduce in turns for precision
    let quarter_turns = (0.25 * design.t_over_2pi * v).rem_euclid(1.0);
    2.0 * (2.0 * PI * quarter_turns).sin().abs()
}

/// Outcome of [`commensurability_check_n`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NCheck {
    pub frequencies: Vec<String>,
    /// Smallest `k1` for which `k1 (1 - f_j / f_1)` is an integer for every `j`.
    pub k1: u64,
}

/// Parses `p/q`, an integer, or a finite decimal into an exact fraction.
pub fn parse_rational(text: &str) -> Result<Ratio<i64>> {
    let t = text.trim();
    let bad = || {
        Error::config(format!(
            "'{text}' is not a rational number (use p/q or a finite decimal)"
        ))
    };
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 15
    {
        return Err(bad());
    }
    let whole: i64 = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let r = Ratio::new(whole, 10i64.pow(frac_part.len() as u32));
    Ok(if neg { -r } else { r })
}

/// Commensurability of `n` precession frequencies with the first one.
pub fn commensurability_check_n(frequencies: &[&str]) -> Result<NCheck> {
    if frequencies.len() < 2 {
        return Err(Error::config("need at least two frequencies"));
    }
    let f: Vec<Ratio<i64>> = frequencies
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    if f[0] == Ratio::from_integer(0) {
        return Err(Error::config("the reference frequency must be nonzero"));
    }
    let one = Ratio::from_integer(1);
    let k1 = f[1..]
        .iter()
        .map(|fj| (one - fj / f[0]).denom().unsigned_abs())
        .fold(1u64, |acc, q| acc.lcm(&q));
    Ok(NCheck {
        frequencies: frequencies.iter().map(|s| s.trim().to_string()).collect(),
        k1,
    })
}
