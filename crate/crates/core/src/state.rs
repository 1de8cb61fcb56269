//! State vectors of an `n`-spin register.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::{Mat4, C64};

/// Tolerance on `U^dagger U = 1` accepted by [`StateVector::apply_unitary`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// Tolerance on the norm of a state handed to the integrator.
pub const NORM_TOL: f64 = 1e-10;

/// Pure state of `n` spin-1/2 qubits.
///
/// Amplitude `i` belongs to the basis state whose bit `j - 1` (qubit `j`) is
/// `(i >> (j - 1)) & 1`; for two qubits this is `|00>, |10>, |01>, |11>`.
/// The global phase is part of the state and is never normalized away.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

/// `<Q_j>` with `Q_j = 1/2 - S_j^z`: 0 for spin up, 1 for spin down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitExpectation {
    pub qubit_index: usize,
    pub value: f64,
}

impl StateVector {
    /// Builds a state from raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::config(format!(
                "amplitude count {len} is not 2^n with n >= 1"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Basis state `|b1 b2 ... bn>`.
    pub fn basis(n_qubits: usize, bits: &[u8]) -> Result<Self> {
        if n_qubits == 0 || bits.len() != n_qubits {
            return Err(Error::config(format!(
                "expected {n_qubits} bits, got {}",
                bits.len()
            )));
        }
        let mut index = 0usize;
        for (j, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => index |= 1 << j,
                _ => return Err(Error::config(format!("bit {j} is {b}, not 0 or 1"))),
            }
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// The singlet `(|01> - |10>)/sqrt(2)`, prepared from `|00>` by exact
    /// matrix operations: `Ybar_1`, the logical CNOT, then a `pi` rotation of
    /// spin 2 about `-y`.
    pub fn singlet() -> Self {
        use crate::gates::{ideal_gate, GateName};
        let zero = Self::basis(2, &[0, 0]).expect("two bits");
        let steps = [
            GateName::Ybar(1),
            GateName::Cnot,
            GateName::Ybar(2),
            GateName::Ybar(2),
        ];
        steps.iter().fold(zero, |state, name| {
            let gate = ideal_gate(name).expect("fixed gate");
            state.apply_mat4_unchecked(&gate.matrix)
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `<Q_j>`, the probability that qubit `j` (1-based) reads 1.
    pub fn expectation_qubit(&self, j: usize) -> Result<QubitExpectation> {
        if j == 0 || j > self.n_qubits {
            return Err(Error::config(format!(
                "qubit index {j} outside 1..={}",
                self.n_qubits
            )));
        }
        let mask = 1usize << (j - 1);
        let value = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>();
        Ok(QubitExpectation {
            qubit_index: j,
            value: value.clamp(0.0, 1.0),
        })
    }

    /// `(<Q_1>, <Q_2>)` of a two-qubit state; the `(a, b)` pair of the tables.
    pub fn qubit_pair(&self) -> (f64, f64) {
        let a = self
            .expectation_qubit(1)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        let b = self
            .expectation_qubit(2)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        (a, b)
    }

    /// `U |self>`, rejecting matrices that are not unitary to [`UNITARITY_TOL`].
    pub fn apply_unitary(&self, u: &DMatrix<C64>) -> Result<Self> {
        let dim = self.amplitudes.len();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::config(format!(
                "operator is {}x{}, state has dimension {dim}",
                u.nrows(),
                u.ncols()
            )));
        }
        let defect = unitarity_defect(u);
        if defect > UNITARITY_TOL {
            return Err(Error::NumericalIntegrity(format!(
                "operator is not unitary: max |U^dagger U - 1| = {defect:e}"
            )));
        }
        let v = DVector::from_column_slice(&self.amplitudes);
        let out = u * v;
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: out.iter().copied().collect(),
        })
    }

    /// Two-qubit convenience wrapper over [`apply_unitary`](Self::apply_unitary).
    pub fn apply_mat4(&self, u: &Mat4) -> Result<Self> {
        let dense = DMatrix::from_iterator(4, 4, u.iter().copied());
        self.apply_unitary(&dense)
    }

    pub(crate) fn apply_mat4_unchecked(&self, u: &Mat4) -> Self {
        debug_assert_eq!(self.n_qubits, 2);
        let a = self.as_array4();
        let mut out = [C64::new(0.0, 0.0); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| u[(r, c)] * a[c]).sum();
        }
        Self::from_array4(out)
    }

    pub(crate) fn as_array4(&self) -> [C64; 4] {
        let mut a = [C64::new(0.0, 0.0); 4];
        a.copy_from_slice(&self.amplitudes[..4]);
        a
    }

    pub(crate) fn from_array4(a: [C64; 4]) -> Self {
        Self {
            n_qubits: 2,
            amplitudes: a.to_vec(),
        }
    }

    /// Largest `|a_i - b_i|` between two states of equal size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Like [`max_abs_diff`](Self::max_abs_diff) after removing the global
    /// phase that best aligns `other` with `self`.
    pub fn phase_aligned_diff(&self, other: &Self) -> f64 {
        let overlap: C64 = other
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(o, s)| o.conj() * s)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(s, o)| (s - o * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// `max |U^dagger U - 1|` over all elements.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for r in 0..prod.nrows() {
        for c in 0..prod.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{ideal_gate, GateName};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_layout_has_qubit_one_fast() {
        let amps = |bits: &[u8]| StateVector::basis(2, bits).unwrap().amplitudes().to_vec();
        assert_eq!(amps(&[0, 0])[0], c(1.0, 0.0));
        assert_eq!(amps(&[1, 0])[1], c(1.0, 0.0));
        assert_eq!(amps(&[0, 1])[2], c(1.0, 0.0));
        assert_eq!(amps(&[1, 1])[3], c(1.0, 0.0));
        assert_eq!(amps(&[1, 1]).iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn basis_rejects_length_mismatch() {
        assert!(matches!(StateVector::basis(2, &[0]), Err(Error::Config(_))));
        assert!(matches!(
            StateVector::basis(2, &[0, 2]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn singlet_amplitudes() {
        let s = StateVector::singlet();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [c(0.0, 0.0), c(-h, 0.0), c(h, 0.0), c(0.0, 0.0)];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-15, "{a} vs {e}");
        }
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.expectation_qubit(1).unwrap().value - 0.5).abs() < 1e-15);
        assert!((s.expectation_qubit(2).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let s11 = StateVector::basis(2, &[1, 1]).unwrap();
        assert_eq!(s11.expectation_qubit(1).unwrap().value, 1.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (|01> - |11>)/sqrt(2)
        let st =
            StateVector::from_amplitudes(vec![c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(-h, 0.0)])
                .unwrap();
        assert!((st.expectation_qubit(2).unwrap().value - 1.0).abs() < 1e-15);
        assert!((st.expectation_qubit(1).unwrap().value - 0.5).abs() < 1e-15);

        assert!(matches!(st.expectation_qubit(0), Err(Error::Config(_))));
        assert!(matches!(st.expectation_qubit(3), Err(Error::Config(_))));
    }

    #[test]
    fn expectation_matches_explicit_sz() {
        let s = StateVector::from_amplitudes(vec![
            c(0.1, 0.2),
            c(-0.3, 0.4),
            c(0.5, 0.0),
            c(0.0, -0.6),
        ])
        .unwrap();
        let norm2: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        for j in 1..=2 {
            let sz = crate::hamiltonian::spin_op(j, crate::hamiltonian::Component::Z);
            let a = s.as_array4();
            let sz_expect: f64 = (0..4).map(|i| (a[i].conj() * sz[(i, i)] * a[i]).re).sum();
            let via_sz = 0.5 * norm2 - sz_expect;
            let via_marginal = s.expectation_qubit(j).unwrap().value;
            assert!((via_sz - via_marginal).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = StateVector::singlet();
        let out = s.apply_unitary(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn x1_and_y2_on_11() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s11 = StateVector::basis(2, &[1, 1]).unwrap();
        let x1 = ideal_gate(&GateName::X(1)).unwrap();
        let out = s11.apply_mat4(&x1.matrix).unwrap();
        // (|11> + i|01>)/sqrt(2)
        let expected = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, h), c(h, 0.0)];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-15);
        }
        let y2 = ideal_gate(&GateName::Y(2)).unwrap();
        let out = s11.apply_mat4(&y2.matrix).unwrap();
        // (|10> + |11>)/sqrt(2)
        let expected = [c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0), c(h, 0.0)];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-15);
        }
    }

    #[test]
    fn non_unitary_is_rejected() {
        let s = StateVector::basis(2, &[0, 0]).unwrap();
        let m = DMatrix::from_element(4, 4, c(0.5, 0.0));
        assert!(matches!(
            s.apply_unitary(&m),
            Err(Error::NumericalIntegrity(_))
        ));
        let wrong_size = DMatrix::identity(2, 2);
        assert!(matches!(
            s.apply_unitary(&wrong_size),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn phase_alignment_ignores_global_phase() {
        let s = StateVector::singlet();
        let phase = C64::from_polar(1.0, 0.7);
        let t = StateVector::from_amplitudes(s.amplitudes().iter().map(|a| a * phase).collect())
            .unwrap();
        assert!(s.max_abs_diff(&t) > 0.1);
        assert!(s.phase_aligned_diff(&t) < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn gate_name() -> impl Strategy<Value = GateName> {
            prop_oneof![
                (1usize..=2).prop_map(GateName::X),
                (1usize..=2).prop_map(GateName::Y),
                (1usize..=2).prop_map(GateName::Xbar),
                (1usize..=2).prop_map(GateName::Ybar),
                Just(GateName::Cnot),
                Just(GateName::G),
                Just(GateName::IPrime),
            ]
        }

        proptest! {
            #[test]
            fn norm_is_conserved(gates in proptest::collection::vec(gate_name(), 1..40),
                                 re in proptest::collection::vec(-1.0f64..1.0, 4),
                                 im in proptest::collection::vec(-1.0f64..1.0, 4)) {
                let raw: Vec<C64> = re.iter().zip(&im).map(|(&r, &i)| C64::new(r, i)).collect();
                let n = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                prop_assume!(n > 1e-3);
                let mut s = StateVector::from_amplitudes(raw.iter().map(|a| a / n).collect()).unwrap();
                for g in &gates {
                    s = s.apply_mat4(&ideal_gate(g).unwrap().matrix).unwrap();
                }
                prop_assert!((s.norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}
