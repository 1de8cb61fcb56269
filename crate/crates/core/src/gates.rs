//! Ideal gate matrices and the parameters of the ideal-machine EOs that
//! realise them.
//!
//! Rotations follow `X_j = exp(i pi S_j^x / 2)` and `Y_j = exp(i pi S_j^y / 2)`;
//! the barred gates are their inverses. An EO with a constant field `h` along
//! `a` on spin `j` for a time `tau` produces `exp(i tau h S_j^a)`, so the
//! rotation angle of an EO is `2 pi (tau/2pi) h`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamiltonian::{EoParams, MachineConfig};
use crate::integrator::diagonal_phases;
use crate::{Mat4, C64};

/// Rotation axis of a single-spin gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationAxis {
    X,
    Y,
}

/// Names of the ideal gate set. Spin indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum GateName {
    X(usize),
    Y(usize),
    Xbar(usize),
    Ybar(usize),
    /// `X'_j`: corrects the `z` precession accumulated during `I'`.
    XPrime(usize),
    /// `Y'_1`, the `y` counterpart of `X'_1`.
    YPrime1,
    /// `X''_j`: corrects the precession accumulated during the physical `G`.
    XDoublePrime(usize),
    /// Ising evolution with equal fields `h = -J/2` (a controlled phase).
    I,
    /// Ising evolution of the physical machine with its own static fields.
    IPrime,
    /// Diagonal phase gate `diag(e^{i phi_0}, ..., e^{i phi_3})`.
    P([f64; 4]),
    G,
    Cnot,
}

impl GateName {
    fn spin_checked(self) -> Result<Self> {
        let spin = match &self {
            GateName::X(j)
            | GateName::Y(j)
            | GateName::Xbar(j)
            | GateName::Ybar(j)
            | GateName::XPrime(j)
            | GateName::XDoublePrime(j) => Some(*j),
            _ => None,
        };
        match spin {
            Some(j) if !(1..=2).contains(&j) => Err(Error::config(format!(
                "gate {self}: spin index {j} is not 1 or 2"
            ))),
            _ => Ok(self),
        }
    }

    /// Single-spin rotations as `(spin, axis, turns)` for the default machine.
    pub fn as_rotation(&self, machine: &MachineConfig) -> Option<(usize, RotationAxis, f64)> {
        let primes = derive_primed_angles(machine);
        match *self {
            GateName::X(j) => Some((j, RotationAxis::X, 0.25)),
            GateName::Y(j) => Some((j, RotationAxis::Y, 0.25)),
            GateName::Xbar(j) => Some((j, RotationAxis::X, -0.25)),
            GateName::Ybar(j) => Some((j, RotationAxis::Y, -0.25)),
            GateName::XPrime(1) => Some((1, RotationAxis::X, primes.x1_prime)),
            GateName::XPrime(2) => Some((2, RotationAxis::X, primes.x2_prime)),
            GateName::YPrime1 => Some((1, RotationAxis::Y, primes.y1_prime)),
            GateName::XDoublePrime(1) => Some((1, RotationAxis::X, primes.x1_double_prime)),
            GateName::XDoublePrime(2) => Some((2, RotationAxis::X, primes.x2_double_prime)),
            _ => None,
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateName::X(j) => write!(f, "X{j}"),
            GateName::Y(j) => write!(f, "Y{j}"),
            GateName::Xbar(j) => write!(f, "Xbar{j}"),
            GateName::Ybar(j) => write!(f, "Ybar{j}"),
            GateName::XPrime(j) => write!(f, "X{j}'"),
            GateName::YPrime1 => write!(f, "Y1'"),
            GateName::XDoublePrime(j) => write!(f, "X{j}''"),
            GateName::I => write!(f, "I"),
            GateName::IPrime => write!(f, "I'"),
            GateName::P(p) => write!(f, "P({},{},{},{})", p[0], p[1], p[2], p[3]),
            GateName::G => write!(f, "G"),
            GateName::Cnot => write!(f, "CNOT"),
        }
    }
}

impl FromStr for GateName {
    type Err = Error;

    /// Accepts `X1`, `Xbar1`, `X1bar`, `X1'`, `X1p`, `X1''`, `X1pp`, `Y1'`, `I`,
    /// `I'`, `Ip`, `G`, `CNOT` and `P(phi0,phi1,phi2,phi3)` (radians).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::config(format!("unknown gate name '{s}'"));
        let upper = s.to_ascii_uppercase();
        match upper.as_str() {
            "I" => return Ok(GateName::I),
            "I'" | "IP" | "IPRIME" => return Ok(GateName::IPrime),
            "G" => return Ok(GateName::G),
            "CNOT" => return Ok(GateName::Cnot),
            _ => {}
        }
        if let Some(inner) = upper.strip_prefix("P(").and_then(|r| r.strip_suffix(')')) {
            let phis: Vec<f64> = inner
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| unknown())?;
            let phis: [f64; 4] = phis.try_into().map_err(|_| unknown())?;
            return Ok(GateName::P(phis));
        }
        let mut chars = upper.chars();
        let axis = chars.next().ok_or_else(unknown)?;
        let rest: String = chars.collect();
        let (bar_prefix, rest) = match rest.strip_prefix("BAR") {
            Some(r) => (true, r.to_string()),
            None => (false, rest),
        };
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let suffix = &rest[digits.len()..];
        let spin: usize = digits.parse().map_err(|_| unknown())?;
        let name = match (axis, bar_prefix, suffix) {
            ('X', false, "") => GateName::X(spin),
            ('Y', false, "") => GateName::Y(spin),
            ('X', true, "") | ('X', false, "BAR") => GateName::Xbar(spin),
            ('Y', true, "") | ('Y', false, "BAR") => GateName::Ybar(spin),
            ('X', false, "'" | "P" | "PRIME") => GateName::XPrime(spin),
            ('Y', false, "'" | "P" | "PRIME") if spin == 1 => GateName::YPrime1,
            ('X', false, "''" | "PP" | "DPRIME") => GateName::XDoublePrime(spin),
            _ => return Err(unknown()),
        };
        name.spin_checked()
    }
}

/// A named exact unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealGate {
    pub name: GateName,
    pub matrix: Mat4,
}

/// Rotation angles (in turns, i.e. angle / 2pi) of the phase-correcting gates.
///
/// With `tau = -pi/J` and `h = -J/2` the `I'` evolution differs from `I` by a
/// `z` precession of `tau (h_jz - h)` on spin `j`; the physical `G` carries
/// `tau h_jz`. Each primed gate undoes that precession by an `x` (or `y`)
/// rotation sandwiched between `Y` rotations. Spin-1/2 rotations have period
/// `4 pi`, so the angles are reduced modulo two turns and applied as inverse
/// (negative) rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimedAngles {
    pub x1_prime: f64,
    pub x2_prime: f64,
    pub y1_prime: f64,
    pub x1_double_prime: f64,
    pub x2_double_prime: f64,
}

pub fn derive_primed_angles(machine: &MachineConfig) -> PrimedAngles {
    let tau = machine.ising_tau_over_2pi();
    let h = -machine.j / 2.0;
    let reduce = |turns: f64| -turns.rem_euclid(2.0);
    let x1 = reduce(tau * machine.h1z - tau * h);
    PrimedAngles {
        x1_prime: x1,
        x2_prime: reduce(tau * machine.h2z - tau * h),
        y1_prime: x1,
        x1_double_prime: reduce(tau * machine.h1z),
        x2_double_prime: reduce(tau * machine.h2z),
    }
}

/// `exp(i 2pi turns S_spin^axis)` embedded in the two-qubit space.
pub fn rotation(spin: usize, axis: RotationAxis, turns: f64) -> Mat4 {
    let half = std::f64::consts::PI * turns;
    let (s, c) = half.sin_cos();
    // cos + i sin sigma
    let single = match axis {
        RotationAxis::X => [
            [C64::new(c, 0.0), C64::new(0.0, s)],
            [C64::new(0.0, s), C64::new(c, 0.0)],
        ],
        RotationAxis::Y => [
            [C64::new(c, 0.0), C64::new(s, 0.0)],
            [C64::new(-s, 0.0), C64::new(c, 0.0)],
        ],
    };
    let bit = spin - 1;
    let other = 1 - bit;
    Mat4::from_fn(|r, col| {
        if (r >> other) & 1 != (col >> other) & 1 {
            C64::new(0.0, 0.0)
        } else {
            single[(r >> bit) & 1][(col >> bit) & 1]
        }
    })
}

fn diagonal(phases: [C64; 4]) -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::from(phases))
}

/// Exact matrix of a gate; machine-dependent gates use the default machine.
pub fn ideal_gate(name: &GateName) -> Result<IdealGate> {
    ideal_gate_for(name, &MachineConfig::default())
}

/// As [`ideal_gate`] for an explicit machine.
pub fn ideal_gate_for(name: &GateName, machine: &MachineConfig) -> Result<IdealGate> {
    let name = name.clone().spin_checked()?;
    let matrix = if let Some((spin, axis, turns)) = name.as_rotation(machine) {
        rotation(spin, axis, turns)
    } else {
        match &name {
            GateName::I | GateName::IPrime | GateName::G => {
                diagonal(diagonal_phases(&ideal_eo_params(&name, machine)?))
            }
            GateName::P(phis) => diagonal(phis.map(|p| C64::from_polar(1.0, p))),
            GateName::Cnot => {
                // |10> <-> |11>, the other two basis states fixed
                let one = C64::new(1.0, 0.0);
                let mut m = Mat4::zeros();
                m[(0, 0)] = one;
                m[(2, 2)] = one;
                m[(3, 1)] = one;
                m[(1, 3)] = one;
                m
            }
            _ => unreachable!("rotations are handled above"),
        }
    };
    Ok(IdealGate { name, matrix })
}

/// Product of the gates written in operator order: the rightmost name acts
/// first, as in `Ybar2 I Y2`.
pub fn compose(sequence: &[GateName]) -> Result<Mat4> {
    compose_for(sequence, &MachineConfig::default())
}

pub fn compose_for(sequence: &[GateName], machine: &MachineConfig) -> Result<Mat4> {
    if sequence.is_empty() {
        return Err(Error::config("compose needs at least one gate"));
    }
    sequence.iter().try_fold(Mat4::identity(), |acc, g| {
        Ok(acc * ideal_gate_for(g, machine)?.matrix)
    })
}

/// The ideal-machine EO realising `name` (the rows of the ideal-QC parameter
/// table), with step `delta/2pi = 1`.
///
/// `G` is the pure Ising evolution with `tau = -pi/J` and no fields, which is
/// exactly `diag(e^{-i pi/4}, e^{i pi/4}, e^{i pi/4}, e^{-i pi/4})`.
pub fn ideal_eo_params(name: &GateName, machine: &MachineConfig) -> Result<EoParams> {
    let name = name.clone().spin_checked()?;
    let label = name.to_string();
    let tau_i = machine.ising_tau_over_2pi();
    let mut eo = EoParams {
        label: label.clone(),
        j: machine.j,
        delta_over_2pi: 1.0,
        ..EoParams::default()
    };
    if let Some((spin, axis, turns)) = name.as_rotation(machine) {
        let k = match axis {
            RotationAxis::X => 0,
            RotationAxis::Y => 1,
        };
        // quarter turns run for tau/2pi = 0.25 at unit field, the rest for 1
        let tau = if turns.abs() == 0.25 { 0.25 } else { 1.0 };
        eo.tau_over_2pi = tau;
        eo.static_fields[spin - 1][k] = turns / tau;
        return Ok(eo);
    }
    match name {
        GateName::I => {
            let h = -machine.j / 2.0;
            Ok(EoParams::free_evolution(&label, tau_i, machine.j, h, h).with_delta(1.0))
        }
        GateName::IPrime => {
            Ok(
                EoParams::free_evolution(&label, tau_i, machine.j, machine.h1z, machine.h2z)
                    .with_delta(1.0),
            )
        }
        GateName::G => {
            Ok(EoParams::free_evolution(&label, tau_i, machine.j, 0.0, 0.0).with_delta(1.0))
        }
        _ => Err(Error::config(format!(
            "gate {name} has no elementary-operation form on the ideal machine"
        ))),
    }
}
