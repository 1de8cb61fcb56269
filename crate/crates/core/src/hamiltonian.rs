//! Two-spin Hamiltonian with Ising coupling, static fields and sinusoidal
//! transverse fields (SFs):
//!
//! ```text
//! H(t) = -J S1z S2z - sum_{j,a} h[j][a] Sj^a
//!        - (h~[1][x] S1x + h~[2][x] S2x) sin(w t + phi_x)
//!        - (h~[1][y] S1y + h~[2][y] S2y) sin(w t + phi_y)
//! ```
//!
//! Units: hbar = 1 and the spin-1 static field sets the frequency scale.
//! Durations and step sizes are stored divided by `2 pi`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Mat4, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    X,
    Y,
    Z,
}

/// Coupling, fields and field ratio of the physical machine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MachineConfig {
    pub j: f64,
    pub h1z: f64,
    pub h2z: f64,
    /// Ratio of the field seen by spin 2 to the field seen by spin 1.
    pub gamma: f64,
}

impl Default for MachineConfig {
    /// Carbon-13 labelled chloroform rescaled to `h1z = 1`.
    fn default() -> Self {
        Self {
            j: -0.43e-6,
            h1z: 1.0,
            h2z: 0.25,
            gamma: 0.25,
        }
    }
}

impl MachineConfig {
    /// `tau / 2pi` of the free Ising evolution with `-tau J = pi`.
    pub fn ising_tau_over_2pi(&self) -> f64 {
        -1.0 / (2.0 * self.j)
    }
}

/// One elementary operation: a duration during which every Hamiltonian
/// parameter is constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EoParams {
    pub label: String,
    pub tau_over_2pi: f64,
    pub j: f64,
    /// `h[spin][x|y|z]`, spin 0 is qubit 1.
    pub static_fields: [[f64; 3]; 2],
    /// `h~[spin][x|y]`.
    pub sf_amplitudes: [[f64; 2]; 2],
    pub omega: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub delta_over_2pi: f64,
}

impl Default for EoParams {
    fn default() -> Self {
        Self {
            label: String::new(),
            tau_over_2pi: 0.0,
            j: 0.0,
            static_fields: [[0.0; 3]; 2],
            sf_amplitudes: [[0.0; 2]; 2],
            omega: 0.0,
            phi_x: 0.0,
            phi_y: 0.0,
            delta_over_2pi: 1.0,
        }
    }
}

impl EoParams {
    /// Free evolution under `-J S1z S2z - h1z S1z - h2z S2z`.
    pub fn free_evolution(label: &str, tau_over_2pi: f64, j: f64, h1z: f64, h2z: f64) -> Self {
        let mut eo = Self {
            label: label.to_string(),
            tau_over_2pi,
            j,
            ..Self::default()
        };
        eo.static_fields[0][2] = h1z;
        eo.static_fields[1][2] = h2z;
        eo
    }

    pub fn with_delta(mut self, delta_over_2pi: f64) -> Self {
        self.delta_over_2pi = delta_over_2pi;
        self
    }

    pub fn tau(&self) -> f64 {
        2.0 * PI * self.tau_over_2pi
    }

    pub fn has_sf(&self) -> bool {
        self.sf_amplitudes.iter().flatten().any(|&a| a != 0.0)
    }

    /// No transverse term at all: `H` is diagonal and constant.
    pub fn is_diagonal(&self) -> bool {
        !self.has_sf()
            && self
                .static_fields
                .iter()
                .all(|h| h[0] == 0.0 && h[1] == 0.0)
    }

    /// Diagonal of the `z` and Ising part of `H`, in basis order.
    pub fn diagonal_energies(&self) -> [f64; 4] {
        let mut e = [0.0; 4];
        for (i, ei) in e.iter_mut().enumerate() {
            let s1 = if i & 1 == 0 { 0.5 } else { -0.5 };
            let s2 = if i & 2 == 0 { 0.5 } else { -0.5 };
            *ei = -self.j * s1 * s2 - self.static_fields[0][2] * s1 - self.static_fields[1][2] * s2;
        }
        e
    }

    /// Transverse field `(bx, by)` acting on `spin` (0-based) at time `t`.
    #[inline]
    pub(crate) fn transverse_field(&self, spin: usize, sin_x: f64, sin_y: f64) -> (f64, f64) {
        let h = &self.static_fields[spin];
        let a = &self.sf_amplitudes[spin];
        (h[0] + a[0] * sin_x, h[1] + a[1] * sin_y)
    }
}

/// `S_j^a` on two qubits (`j` is 1-based).
pub fn spin_op(j: usize, component: Component) -> Mat4 {
    let z = C64::new(0.0, 0.0);
    let single = match component {
        Component::X => [[z, C64::new(0.5, 0.0)], [C64::new(0.5, 0.0), z]],
        Component::Y => [[z, C64::new(0.0, -0.5)], [C64::new(0.0, 0.5), z]],
        Component::Z => [[C64::new(0.5, 0.0), z], [z, C64::new(-0.5, 0.0)]],
    };
    let bit = j - 1;
    Mat4::from_fn(|r, c| {
        let other = 1 - bit;
        if (r >> other) & 1 != (c >> other) & 1 {
            return z;
        }
        single[(r >> bit) & 1][(c >> bit) & 1]
    })
}

/// `H(t)` of the EO, `t` in natural time units measured from the EO start.
pub fn hamiltonian_at(params: &EoParams, t: f64) -> Mat4 {
    let sx = params.omega * t + params.phi_x;
    let sy = params.omega * t + params.phi_y;
    let (sin_x, sin_y) = (sx.sin(), sy.sin());
    let mut h = spin_op(1, Component::Z) * spin_op(2, Component::Z) * C64::new(-params.j, 0.0);
    for spin in 0..2 {
        let (bx, by) = params.transverse_field(spin, sin_x, sin_y);
        let bz = params.static_fields[spin][2];
        let j = spin + 1;
        h -= spin_op(j, Component::X) * C64::new(bx, 0.0);
        h -= spin_op(j, Component::Y) * C64::new(by, 0.0);
        h -= spin_op(j, Component::Z) * C64::new(bz, 0.0);
    }
    h
}

/// Checks that every field on spin 2 is `gamma` times the field on spin 1 and
/// that `0 < gamma < 1`.
pub fn validate_machine(params: &EoParams, machine: &MachineConfig) -> Result<()> {
    let gamma = machine.gamma;
    let mut violations = Vec::new();
    if !(gamma > 0.0 && gamma < 1.0) {
        violations.push(format!("gamma = {gamma} outside (0, 1)"));
    }
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-12);
    for (k, name) in ["x", "y", "z"].iter().enumerate() {
        let (h1, h2) = (params.static_fields[0][k], params.static_fields[1][k]);
        if !close(h2, gamma * h1) {
            violations.push(format!(
                "{}: static h2{name} = {h2} is not gamma * h1{name} = {}",
                params.label,
                gamma * h1
            ));
        }
    }
    for (k, name) in ["x", "y"].iter().enumerate() {
        let (a1, a2) = (params.sf_amplitudes[0][k], params.sf_amplitudes[1][k]);
        if !close(a2, gamma * a1) {
            violations.push(format!(
                "{}: SF h~2{name} = {a2} is not gamma * h~1{name} = {}",
                params.label,
                gamma * a1
            ));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_elem(m: &Mat4) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn sample_eo() -> EoParams {
        EoParams {
            label: "sample".into(),
            tau_over_2pi: 8.0,
            j: -0.43e-6,
            static_fields: [[0.1, -0.2, 1.0], [0.3, 0.05, 0.25]],
            sf_amplitudes: [[0.0312, -0.07], [0.011, 0.02]],
            omega: 1.0,
            phi_x: -PI / 2.0,
            phi_y: 0.3,
            delta_over_2pi: 0.01,
        }
    }

    #[test]
    fn ising_only_is_diagonal() {
        let j = -0.43e-6;
        let eo = EoParams {
            j,
            ..EoParams::default()
        };
        let h = hamiltonian_at(&eo, 0.0);
        let expected = [-j / 4.0, j / 4.0, j / 4.0, -j / 4.0];
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { expected[r] } else { 0.0 };
                assert!((h[(r, c)] - C64::new(want, 0.0)).norm() < 1e-22);
            }
        }
    }

    #[test]
    fn ising_with_equal_fields_matches_phase_table() {
        // H_I = -J S1z S2z - h S1z - h S2z; e^{-i tau H_I} must carry the
        // phases tau(J/4 + h), -tau J/4, -tau J/4, tau(J/4 - h).
        let j = -0.43e-6;
        let h = -j / 2.0;
        let eo = EoParams::free_evolution("I", 1.0, j, h, h);
        let m = hamiltonian_at(&eo, 0.0);
        let diag = [-j / 4.0 - h, j / 4.0, j / 4.0, -j / 4.0 + h];
        for i in 0..4 {
            assert!((m[(i, i)].re - diag[i]).abs() < 1e-22);
        }
        let tau = 1.7;
        let phases = [
            tau * (j / 4.0 + h),
            -tau * j / 4.0,
            -tau * j / 4.0,
            tau * (j / 4.0 - h),
        ];
        for i in 0..4 {
            assert!((-tau * m[(i, i)].re - phases[i]).abs() < 1e-20);
        }
        for (e, d) in eo.diagonal_energies().iter().zip(diag) {
            assert!((e - d).abs() < 1e-22);
        }
    }

    #[test]
    fn transverse_vanishes_at_zero_phase() {
        let mut eo = EoParams::free_evolution("y", 1.0, 0.0, 1.0, 0.25);
        eo.sf_amplitudes[0][1] = 0.5;
        eo.omega = 1.0;
        let h = hamiltonian_at(&eo, 0.0);
        assert!(h[(0, 1)].norm() == 0.0 && h[(1, 0)].norm() == 0.0);
        let h = hamiltonian_at(&eo, 0.4);
        assert!(h[(0, 1)].norm() > 0.0);
    }

    #[test]
    fn hermitian_everywhere() {
        let eo = sample_eo();
        for i in 0..50 {
            let h = hamiltonian_at(&eo, 0.37 * i as f64);
            assert!(max_elem(&(h - h.adjoint())) < 1e-14);
        }
    }

    #[test]
    fn static_only_is_time_independent() {
        let mut eo = sample_eo();
        eo.sf_amplitudes = [[0.0; 2]; 2];
        assert_eq!(hamiltonian_at(&eo, 0.0), hamiltonian_at(&eo, 123.4));
    }

    #[test]
    fn linear_in_each_field() {
        let base = sample_eo();
        let t = 2.3;
        let h0 = hamiltonian_at(&base, t);
        for spin in 0..2 {
            for k in 0..3 {
                let mut eo = base.clone();
                eo.static_fields[spin][k] += 0.125;
                let mut eo2 = base.clone();
                eo2.static_fields[spin][k] += 0.25;
                let d1 = hamiltonian_at(&eo, t) - h0;
                let d2 = hamiltonian_at(&eo2, t) - h0;
                assert!(max_elem(&(d2 - d1 * C64::new(2.0, 0.0))) < 1e-14);
            }
        }
    }

    #[test]
    fn spin_ops_commutation() {
        let x = spin_op(1, Component::X);
        let y = spin_op(1, Component::Y);
        let z = spin_op(1, Component::Z);
        let comm = x * y - y * x;
        assert!(max_elem(&(comm - z * C64::new(0.0, 1.0))) < 1e-15);
        // different spins commute
        let x2 = spin_op(2, Component::X);
        assert!(max_elem(&(x * x2 - x2 * x)) < 1e-15);
    }

    fn table_iv_x1() -> EoParams {
        EoParams {
            label: "X1".into(),
            tau_over_2pi: 8.0,
            j: -0.43e-6,
            static_fields: [[0.0, 0.0, 1.0], [0.0, 0.0, 0.25]],
            sf_amplitudes: [[-0.03125, -0.03125], [-0.0078125, -0.0078125]],
            omega: 1.0,
            phi_x: -PI / 2.0,
            phi_y: 0.0,
            delta_over_2pi: 0.01,
        }
    }

    #[test]
    fn validate_accepts_proportional_fields() {
        assert!(validate_machine(&table_iv_x1(), &MachineConfig::default()).is_ok());
    }

    #[test]
    fn validate_rejects_broken_ratio() {
        let mut eo = table_iv_x1();
        eo.sf_amplitudes[1][0] = eo.sf_amplitudes[0][0];
        match validate_machine(&eo, &MachineConfig::default()) {
            Err(Error::Validation(v)) => {
                assert_eq!(v.len(), 1);
                assert!(v[0].contains("h~2x"), "{v:?}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_gamma_outside_unit_interval() {
        let machine = MachineConfig {
            gamma: 1.5,
            ..MachineConfig::default()
        };
        let err = validate_machine(&table_iv_x1(), &machine).unwrap_err();
        assert!(err.to_string().contains("outside (0, 1)"));
    }

    #[test]
    fn ising_duration() {
        let tau = MachineConfig::default().ising_tau_over_2pi();
        assert!((tau - 1162790.6977).abs() < 5e-5);
    }
}
