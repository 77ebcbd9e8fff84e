//! Dense state vectors of the head/tape network, reduced density matrices and
//! Bloch vectors.
//!
//! Basis states `|j k … l⟩` are ordered lexicographically with the head
//! (spin 0) as the most significant bit, so for two spins the amplitude order
//! is `|00⟩, |01⟩, |10⟩, |11⟩`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{QtmError, Result};
use crate::gates::{lambda_operator, GateMatrix, Generator};

/// Largest supported network.
pub const MAX_SPINS: usize = 16;
/// Normalisation tolerance for states handed in by callers.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Norm drift that counts as a simulator bug rather than rounding.
pub const NORM_DRIFT_LIMIT: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Initial state of a single tape spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapeSpin {
    Zero,
    One,
    /// `(|0⟩ + |1⟩)/√2`, the `+1` eigenstate of `λ̂1`.
    Plus,
    /// `(|0⟩ − |1⟩)/√2`, the `−1` eigenstate of `λ̂1`.
    Minus,
}

impl TapeSpin {
    pub fn amplitudes(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            TapeSpin::Zero => [ONE, ZERO],
            TapeSpin::One => [ZERO, ONE],
            TapeSpin::Plus => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            TapeSpin::Minus => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }
}

impl FromStr for TapeSpin {
    type Err = QtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(TapeSpin::Zero),
            "1" => Ok(TapeSpin::One),
            "+" => Ok(TapeSpin::Plus),
            "-" => Ok(TapeSpin::Minus),
            other => Err(QtmError::InvalidArgument(format!(
                "tape spin `{other}` (expected 0, 1, + or -)"
            ))),
        }
    }
}

impl fmt::Display for TapeSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TapeSpin::Zero => "0",
            TapeSpin::One => "1",
            TapeSpin::Plus => "+",
            TapeSpin::Minus => "-",
        })
    }
}

/// Pure state of an `N`-spin network: head is spin 0, tape spins are `1..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    num_spins: usize,
    amplitudes: Vec<Complex64>,
}

impl NetworkState {
    pub fn from_amplitudes(num_spins: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_spin_count(num_spins)?;
        let expected = 1usize << num_spins;
        if amplitudes.len() != expected {
            return Err(QtmError::AmplitudeLength {
                got: amplitudes.len(),
                expected,
            });
        }
        let state = NetworkState { num_spins, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QtmError::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_spins: usize, index: usize) -> Result<Self> {
        check_spin_count(num_spins)?;
        let dim = 1usize << num_spins;
        if index >= dim {
            return Err(QtmError::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(NetworkState { num_spins, amplitudes })
    }

    /// Product state `|φ0⟩ ⊗ |t1⟩ ⊗ … ⊗ |tM⟩` with the head prepared as
    /// `cos(φ0/2)|0⟩ − i·sin(φ0/2)|1⟩`.
    pub fn product(head_angle: f64, tape: &[TapeSpin]) -> Result<Self> {
        if !head_angle.is_finite() {
            return Err(QtmError::InvalidArgument(format!("head angle {head_angle}")));
        }
        check_spin_count(tape.len() + 1)?;
        let head = head_amplitudes(head_angle);
        let mut amplitudes = head.to_vec();
        for spin in tape {
            let local = spin.amplitudes();
            amplitudes = amplitudes.iter().flat_map(|&a| [a * local[0], a * local[1]]).collect();
        }
        Ok(NetworkState {
            num_spins: tape.len() + 1,
            amplitudes,
        })
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a one- or two-spin gate. The first target indexes the most
    /// significant bit of the gate's own basis.
    pub fn apply_gate(&self, gate: &GateMatrix, targets: &[usize]) -> Result<Self> {
        let k = targets.len();
        if gate.dim() != 1 << k {
            return Err(QtmError::GateArity {
                dim: gate.dim(),
                targets: k,
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.num_spins {
                return Err(QtmError::SpinOutOfRange {
                    index: t,
                    num_spins: self.num_spins,
                });
            }
            if targets[..i].contains(&t) {
                return Err(QtmError::DuplicateTarget(t));
            }
        }

        let masks: Vec<usize> = targets.iter().map(|&t| 1usize << (self.num_spins - 1 - t)).collect();
        let target_mask: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..gate.dim())
            .map(|local| {
                (0..k)
                    .filter(|bit| local & (1 << (k - 1 - bit)) != 0)
                    .map(|bit| masks[bit])
                    .sum()
            })
            .collect();

        let mut out = vec![ZERO; self.dim()];
        let mut gathered = vec![ZERO; gate.dim()];
        for base in (0..self.dim()).filter(|i| i & target_mask == 0) {
            for (slot, &off) in gathered.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                out[base | off] = (0..gate.dim()).map(|col| gate.entry(row, col) * gathered[col]).sum();
            }
        }

        let next = NetworkState {
            num_spins: self.num_spins,
            amplitudes: out,
        };
        let norm = next.norm();
        if (norm - 1.0).abs() > NORM_DRIFT_LIMIT {
            return Err(QtmError::NormDrift { norm });
        }
        Ok(next)
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &NetworkState) -> Result<Complex64> {
        if self.num_spins != other.num_spins {
            return Err(QtmError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance `‖self − other‖` between amplitude vectors.
    pub fn distance(&self, other: &NetworkState) -> Result<f64> {
        if self.num_spins != other.num_spins {
            return Err(QtmError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Reduced density matrix of one spin, tracing out all others.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        if keep >= self.num_spins {
            return Err(QtmError::SpinOutOfRange {
                index: keep,
                num_spins: self.num_spins,
            });
        }
        let mask = 1usize << (self.num_spins - 1 - keep);
        let mut rho = [[ZERO; 2]; 2];
        for i in (0..self.dim()).filter(|i| i & mask == 0) {
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | mask];
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][0] += a1 * a0.conj();
            rho[1][1] += a1 * a1.conj();
        }
        Ok(DensityMatrix {
            dim: 2,
            entries: rho.iter().flatten().copied().collect(),
        })
    }

    pub fn head_bloch(&self) -> BlochVector {
        self.partial_trace(0)
            .and_then(|rho| rho.bloch_vector())
            .expect("head spin always present")
    }

    pub fn tape_bloch(&self) -> BlochVector {
        self.partial_trace(1)
            .and_then(|rho| rho.bloch_vector())
            .expect("network has at least one tape spin")
    }
}

/// Head amplitudes `(cos(φ/2), −i·sin(φ/2))`.
pub fn head_amplitudes(head_angle: f64) -> [Complex64; 2] {
    let (s, c) = (head_angle / 2.0).sin_cos();
    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)]
}

fn check_spin_count(n: usize) -> Result<()> {
    if (2..=MAX_SPINS).contains(&n) {
        Ok(())
    } else {
        Err(QtmError::SpinCount { got: n, max: MAX_SPINS })
    }
}

/// A density operator stored as a dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity within `1e-12`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(QtmError::InvalidDensityMatrix(format!(
                "{} entries for dimension {dim}",
                entries.len()
            )));
        }
        let rho = DensityMatrix { dim, entries };
        let tol = NORM_TOLERANCE;
        for r in 0..dim {
            for c in 0..dim {
                if (rho.entry(r, c) - rho.entry(c, r).conj()).norm() > tol {
                    return Err(QtmError::InvalidDensityMatrix("not Hermitian".into()));
                }
            }
        }
        let trace = rho.trace();
        if (trace - 1.0).abs() > tol {
            return Err(QtmError::InvalidDensityMatrix(format!("trace {trace}")));
        }
        if dim == 2 {
            // det ≥ 0 together with unit trace means both eigenvalues are ≥ 0.
            let det = (rho.entry(0, 0) * rho.entry(1, 1) - rho.entry(0, 1) * rho.entry(1, 0)).re;
            if det < -tol {
                return Err(QtmError::InvalidDensityMatrix(format!(
                    "negative eigenvalue (det {det})"
                )));
            }
        }
        Ok(rho)
    }

    /// Projector `|ψ⟩⟨ψ|` onto a full network state.
    pub fn from_pure(state: &NetworkState) -> Self {
        let a = state.amplitudes();
        let entries = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
        DensityMatrix { dim: a.len(), entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// `Tr((ρ − σ)²)` for Hermitian `ρ`, `σ`.
    pub fn squared_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(QtmError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum())
    }

    /// `Tr(ρ·λ̂_i)` for a single-spin operator.
    pub fn expectation(&self, op: &GateMatrix) -> Result<Complex64> {
        if op.dim() != self.dim {
            return Err(QtmError::DimensionMismatch {
                left: self.dim,
                right: op.dim(),
            });
        }
        Ok((0..self.dim)
            .flat_map(|r| (0..self.dim).map(move |c| (r, c)))
            .map(|(r, c)| self.entry(r, c) * op.entry(c, r))
            .sum())
    }

    /// Bloch vector `(Tr ρλ̂1, Tr ρλ̂2, Tr ρλ̂3)` of a single-spin state.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        if self.dim != 2 {
            return Err(QtmError::DimensionMismatch {
                left: self.dim,
                right: 2,
            });
        }
        let component = |g| self.expectation(&lambda_operator(g)).map(|z| z.re);
        Ok(BlochVector {
            l1: component(Generator::Lambda1)?,
            l2: component(Generator::Lambda2)?,
            l3: component(Generator::Lambda3)?,
        })
    }
}

/// Expectation values of `λ̂1, λ̂2, λ̂3` for one spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.l1 * self.l1 + self.l2 * self.l2 + self.l3 * self.l3).sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let d = [self.l1 - other.l1, self.l2 - other.l2, self.l3 - other.l3];
        d.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{head_rotation, qcnot};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn product_state_examples() {
        let s = NetworkState::product(0.0, &[TapeSpin::Zero]).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);

        let s = NetworkState::product(0.0, &[TapeSpin::Plus]).unwrap();
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert_eq!(s.amplitudes(), &[h, h, ZERO, ZERO]);

        let s = NetworkState::product(0.001, &[TapeSpin::Zero]).unwrap();
        let want = [c(0.0005f64.cos(), 0.0), ZERO, c(0.0, -0.0005f64.sin()), ZERO];
        for (a, b) in s.amplitudes().iter().zip(want) {
            assert!(close(*a, b, 1e-16));
        }
    }

    #[test]
    fn product_state_validation() {
        assert!(matches!(
            NetworkState::product(0.0, &[]),
            Err(QtmError::SpinCount { got: 1, .. })
        ));
        assert!(NetworkState::product(f64::NAN, &[TapeSpin::Zero]).is_err());
        let wide = NetworkState::product(0.3, &[TapeSpin::Plus; 15]).unwrap();
        assert_eq!(wide.dim(), 1 << 16);
        assert!(NetworkState::product(0.3, &[TapeSpin::Plus; 16]).is_err());
    }

    #[test]
    fn from_amplitudes_checks() {
        assert!(matches!(
            NetworkState::from_amplitudes(2, vec![ONE; 3]),
            Err(QtmError::AmplitudeLength { got: 3, expected: 4 })
        ));
        assert!(matches!(
            NetworkState::from_amplitudes(2, vec![ONE, ONE, ZERO, ZERO]),
            Err(QtmError::NotNormalized { .. })
        ));
    }

    #[test]
    fn identity_and_sign_of_full_turn() {
        let s = NetworkState::product(0.4, &[TapeSpin::Plus]).unwrap();
        let same = s.apply_gate(&GateMatrix::identity(2), &[0]).unwrap();
        assert_eq!(same, s);

        let zero = NetworkState::basis(2, 0).unwrap();
        let turned = zero.apply_gate(&head_rotation(2.0 * PI), &[0]).unwrap();
        assert!(close(turned.amplitudes()[0], c(-1.0, 0.0), 1e-15));
        assert!(turned.amplitudes()[1..].iter().all(|a| a.norm() < 1e-15));
    }

    #[test]
    fn qcnot_flips_tape_when_head_is_zero() {
        let s = NetworkState::basis(2, 0)
            .unwrap()
            .apply_gate(&qcnot(), &[0, 1])
            .unwrap();
        assert_eq!(s, NetworkState::basis(2, 1).unwrap());
        let s = NetworkState::basis(2, 2)
            .unwrap()
            .apply_gate(&qcnot(), &[0, 1])
            .unwrap();
        assert_eq!(s, NetworkState::basis(2, 2).unwrap());
    }

    #[test]
    fn reversed_targets_swap_roles() {
        // With targets [1, 0] the tape controls and the head is flipped.
        let s = NetworkState::basis(2, 0)
            .unwrap()
            .apply_gate(&qcnot(), &[1, 0])
            .unwrap();
        assert_eq!(s, NetworkState::basis(2, 2).unwrap());
    }

    #[test]
    fn gate_target_errors() {
        let s = NetworkState::basis(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&head_rotation(0.1), &[2]),
            Err(QtmError::SpinOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            s.apply_gate(&qcnot(), &[1, 1]),
            Err(QtmError::DuplicateTarget(1))
        ));
        assert!(matches!(s.apply_gate(&qcnot(), &[0]), Err(QtmError::GateArity { .. })));
    }

    #[test]
    fn inner_product_examples() {
        let a = NetworkState::basis(2, 0).unwrap();
        let b = NetworkState::basis(2, 1).unwrap();
        assert!(close(a.inner_product(&a).unwrap(), ONE, 1e-15));
        assert_eq!(a.inner_product(&b).unwrap(), ZERO);
        let delta = 0.37;
        let p = NetworkState::product(delta, &[TapeSpin::Zero]).unwrap();
        assert!(close(a.inner_product(&p).unwrap(), c((delta / 2.0).cos(), 0.0), 1e-15));
        let three = NetworkState::basis(3, 0).unwrap();
        assert!(matches!(
            a.inner_product(&three),
            Err(QtmError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let rho = NetworkState::basis(2, 0).unwrap().partial_trace(0).unwrap();
        assert_eq!(rho.entry(0, 0), ONE);
        assert_eq!(rho.entry(1, 1), ZERO);
        assert_eq!(
            rho.bloch_vector().unwrap(),
            BlochVector {
                l1: 0.0,
                l2: 0.0,
                l3: -1.0
            }
        );

        let h = c(FRAC_1_SQRT_2, 0.0);
        let bell = NetworkState::from_amplitudes(2, vec![h, ZERO, ZERO, h]).unwrap();
        for keep in [0, 1] {
            let rho = bell.partial_trace(keep).unwrap();
            assert!(close(rho.entry(0, 0), c(0.5, 0.0), 1e-15));
            assert!(close(rho.entry(1, 1), c(0.5, 0.0), 1e-15));
            assert!(rho.entry(0, 1).norm() < 1e-15);
            let b = rho.bloch_vector().unwrap();
            assert!(b.norm() < 1e-15);
        }
        assert!(bell.partial_trace(2).is_err());
    }

    #[test]
    fn tape_trace_sees_tape_bit() {
        let s = NetworkState::basis(2, 1).unwrap();
        assert_eq!(s.tape_bloch().l3, 1.0);
        assert_eq!(s.head_bloch().l3, -1.0);
    }

    #[test]
    fn two_steps_from_ground_state() {
        // Rotate the head by 2π/5, then QCNOT: the head populations become
        // cos²(π/5), sin²(π/5) and the Bloch vector collapses onto the λ3 axis.
        let alpha = 2.0 * PI / 5.0;
        let s = NetworkState::basis(2, 0)
            .unwrap()
            .apply_gate(&head_rotation(alpha), &[0])
            .unwrap()
            .apply_gate(&qcnot(), &[0, 1])
            .unwrap();
        let rho = s.partial_trace(0).unwrap();
        let cos2 = (PI / 5.0).cos().powi(2);
        assert!(close(rho.entry(0, 0), c(cos2, 0.0), 1e-15));
        assert!(close(rho.entry(1, 1), c(1.0 - cos2, 0.0), 1e-15));
        assert!(rho.entry(0, 1).norm() < 1e-15);
        let b = rho.bloch_vector().unwrap();
        assert!(b.l1.abs() < 1e-15 && b.l2.abs() < 1e-15);
        assert!((b.l3 + alpha.cos()).abs() < 1e-15);
        assert!((b.l3 + 0.309_016_994_374_947_4).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(2, vec![ONE, ZERO, ZERO, ZERO]).is_ok());
        assert!(DensityMatrix::new(2, vec![c(0.5, 0.0), ONE, ZERO, c(0.5, 0.0)]).is_err());
        assert!(DensityMatrix::new(2, vec![c(0.7, 0.0), ZERO, ZERO, c(0.7, 0.0)]).is_err());
        assert!(DensityMatrix::new(2, vec![c(1.5, 0.0), ZERO, ZERO, c(-0.5, 0.0)]).is_err());
        assert!(DensityMatrix::new(2, vec![ONE; 3]).is_err());
        let four = DensityMatrix::from_pure(&NetworkState::basis(2, 0).unwrap());
        assert!(four.bloch_vector().is_err());
    }
}
