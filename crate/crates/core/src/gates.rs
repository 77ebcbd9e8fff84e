//! Single-spin transition operators, the driven head rotation, the
//! head-controlled NOT and the alternating step protocol.

use num_complex::Complex64;

use crate::drive::DriveSequence;
use crate::error::{QtmError, Result};
use crate::statevec::{BlochVector, NetworkState};

/// Unitarity tolerance for gate construction.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A unitary on one (dim 2) or two (dim 4) spins, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(QtmError::GateDimension { dim });
        }
        if entries.len() != dim * dim {
            return Err(QtmError::AmplitudeLength {
                got: entries.len(),
                expected: dim * dim,
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QtmError::NonUnitary { defect: f64::NAN });
        }
        let gate = GateMatrix { dim, entries };
        let defect = gate.adjoint().mul(&gate)?.max_deviation(&GateMatrix::identity(dim));
        if defect > UNITARY_TOLERANCE {
            return Err(QtmError::NonUnitary { defect });
        }
        Ok(gate)
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim * dim)
            .map(|i| if i / dim == i % dim { ONE } else { ZERO })
            .collect();
        GateMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let entries = (0..d * d).map(|i| self.entry(i % d, i / d).conj()).collect();
        GateMatrix { dim: d, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &GateMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(QtmError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let d = self.dim;
        let entries = (0..d * d)
            .map(|i| (0..d).map(|k| self.entry(i / d, k) * rhs.entry(k, i % d)).sum())
            .collect();
        Ok(GateMatrix { dim: d, entries })
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_deviation(&self, other: &GateMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_deviation(&self.adjoint()) <= tol
    }

    /// Kronecker product `self ⊗ rhs` of two single-spin operators.
    pub fn kron(&self, rhs: &GateMatrix) -> Result<Self> {
        if self.dim != 2 || rhs.dim != 2 {
            return Err(QtmError::GateDimension {
                dim: self.dim * rhs.dim,
            });
        }
        let entries = (0..16)
            .map(|i| {
                let (r, c) = (i / 4, i % 4);
                self.entry(r / 2, c / 2) * rhs.entry(r % 2, c % 2)
            })
            .collect();
        Ok(GateMatrix { dim: 4, entries })
    }
}

/// The four single-spin transition operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Identity,
    Lambda1,
    Lambda2,
    Lambda3,
}

impl Generator {
    pub fn from_index(kind: u8) -> Result<Self> {
        match kind {
            0 => Ok(Generator::Identity),
            1 => Ok(Generator::Lambda1),
            2 => Ok(Generator::Lambda2),
            3 => Ok(Generator::Lambda3),
            k => Err(QtmError::InvalidArgument(format!("operator kind {k} (expected 0..=3)"))),
        }
    }
}

/// `λ̂1 = P01 + P10`, `λ̂2 = iP01 − iP10`, `λ̂3 = P11 − P00`, `λ̂0 = 1`.
pub fn lambda_operator(kind: Generator) -> GateMatrix {
    let entries = match kind {
        Generator::Identity => vec![ONE, ZERO, ZERO, ONE],
        Generator::Lambda1 => vec![ZERO, ONE, ONE, ZERO],
        Generator::Lambda2 => vec![ZERO, I, -I, ZERO],
        Generator::Lambda3 => vec![-ONE, ZERO, ZERO, ONE],
    };
    GateMatrix { dim: 2, entries }
}

/// `cos(α/2)·1 − i·sin(α/2)·λ̂1`.
pub fn head_rotation(alpha: f64) -> GateMatrix {
    let (s, c) = (alpha / 2.0).sin_cos();
    let diag = Complex64::new(c, 0.0);
    let off = Complex64::new(0.0, -s);
    GateMatrix {
        dim: 2,
        entries: vec![diag, off, off, diag],
    }
}

/// `P00 ⊗ λ̂1 + P11 ⊗ 1`: the head (first target) flips the tape when in `|0⟩`.
pub fn qcnot() -> GateMatrix {
    let mut entries = vec![ZERO; 16];
    entries[1] = ONE; // |00⟩ ← |01⟩
    entries[4] = ONE; // |01⟩ ← |00⟩
    entries[10] = ONE;
    entries[15] = ONE;
    GateMatrix { dim: 4, entries }
}

/// States `|ψ_0⟩ … |ψ_N⟩` of a driven run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<NetworkState>,
    drive: Option<DriveSequence>,
    angles: Vec<f64>,
}

impl Trajectory {
    pub fn states(&self) -> &[NetworkState] {
        &self.states
    }

    pub fn drive(&self) -> Option<&DriveSequence> {
        self.drive.as_ref()
    }

    /// Head angles `α_1, α_2, …` consumed by the run.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Number of steps taken; the trajectory holds one more state.
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn state(&self, n: usize) -> Result<&NetworkState> {
        self.states.get(n).ok_or(QtmError::StepOutOfRange {
            step: n,
            len: self.states.len(),
        })
    }

    pub fn head_bloch(&self) -> Vec<BlochVector> {
        self.states.iter().map(NetworkState::head_bloch).collect()
    }

    pub fn tape_bloch(&self) -> Vec<BlochVector> {
        self.states.iter().map(NetworkState::tape_bloch).collect()
    }
}

/// Runs `total_steps` alternating steps: `n = 2m−1` rotates the head by
/// `α_m`, `n = 2m` applies the QCNOT to (head, tape spin 1).
pub fn run(initial: &NetworkState, drive: &DriveSequence, total_steps: usize) -> Result<Trajectory> {
    let angles = drive.angles(total_steps.div_ceil(2));
    let mut traj = run_with_angles(initial, &angles, total_steps)?;
    traj.drive = Some(*drive);
    Ok(traj)
}

/// Like [`run`] with an explicit angle list.
pub fn run_with_angles(initial: &NetworkState, angles: &[f64], total_steps: usize) -> Result<Trajectory> {
    let required = total_steps.div_ceil(2);
    if angles.len() < required {
        return Err(QtmError::DriveExhausted {
            available: angles.len(),
            required,
        });
    }
    if let Some(bad) = angles[..required].iter().find(|a| !a.is_finite()) {
        return Err(QtmError::InvalidArgument(format!("drive angle {bad}")));
    }
    let cnot = qcnot();
    let mut states = Vec::with_capacity(total_steps + 1);
    states.push(initial.clone());
    for n in 1..=total_steps {
        let prev = &states[n - 1];
        let next = if n % 2 == 1 {
            prev.apply_gate(&head_rotation(angles[(n - 1) / 2]), &[0])?
        } else {
            prev.apply_gate(&cnot, &[0, 1])?
        };
        states.push(next);
    }
    Ok(Trajectory {
        states,
        drive: None,
        angles: angles[..required].to_vec(),
    })
}

/// Streams the same protocol as [`run_with_angles`] without storing the
/// states; `visit` sees `(n, |ψ_n⟩)` for `n = 0..=total_steps`.
pub fn for_each_step<F>(
    initial: &NetworkState,
    angles: &[f64],
    total_steps: usize,
    mut visit: F,
) -> Result<NetworkState>
where
    F: FnMut(usize, &NetworkState),
{
    let required = total_steps.div_ceil(2);
    if angles.len() < required {
        return Err(QtmError::DriveExhausted {
            available: angles.len(),
            required,
        });
    }
    let cnot = qcnot();
    let mut state = initial.clone();
    visit(0, &state);
    for n in 1..=total_steps {
        state = if n % 2 == 1 {
            state.apply_gate(&head_rotation(angles[(n - 1) / 2]), &[0])?
        } else {
            state.apply_gate(&cnot, &[0, 1])?
        };
        visit(n, &state);
    }
    Ok(state)
}
