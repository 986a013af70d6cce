//! Extraction of single-particle entanglement into two boxes.
//!
//! A particle in the first excited state of a well is split into half-modes
//! living on the left (A) and right (B) halves. Each half is coupled by an
//! instantaneous pulse `exp(i g V)` to a box holding one particle; a particle
//! meeting the well particle may fuse into a molecule. Tracing out the well
//! leaves a two-qubit state of the boxes with
//! `|up>` = particle, no molecule and `|down>` = molecule, no particle.
//!
//! The dynamics never leaves a four-dimensional subspace, so everything is
//! exact 4-vector and 4x4 matrix arithmetic.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::negativity::{negativity_of_density_matrix, PartialTransposeSpectrum};

/// Basis configurations of the closed subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    /// Well particle in the A half, both box particles present.
    WellA,
    /// Well particle in the B half, both box particles present.
    WellB,
    /// Molecule in box A, particle in box B, well empty.
    MoleculeA,
    /// Molecule in box B, particle in box A, well empty.
    MoleculeB,
}

impl Configuration {
    pub const ALL: [Configuration; 4] = [
        Configuration::WellA,
        Configuration::WellB,
        Configuration::MoleculeA,
        Configuration::MoleculeB,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolState {
    amplitudes: [Complex64; 4],
}

impl ProtocolState {
    pub fn amplitude(&self, configuration: Configuration) -> Complex64 {
        self.amplitudes[configuration.index()]
    }

    /// Amplitudes ordered as [`Configuration::ALL`].
    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Well particle in the first excited state, one particle in each box,
/// no molecules. The well particle is an equal superposition of the halves.
pub fn build_initial_state() -> ProtocolState {
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    ProtocolState {
        amplitudes: [half, half, zero, zero],
    }
}

/// Applies the pulse `exp(i g V)`.
///
/// `V` swaps `WellA <-> MoleculeA` and `WellB <-> MoleculeB`, so on each
/// 2x2 block the exponential is `cos g * 1 + i sin g * X`.
pub fn apply_coupling(state: &ProtocolState, g: f64) -> ProtocolState {
    let (sin, cos) = g.sin_cos();
    let c = Complex64::new(cos, 0.0);
    let s = Complex64::new(0.0, sin);
    let [wa, wb, ma, mb] = state.amplitudes;
    ProtocolState {
        amplitudes: [c * wa + s * ma, c * wb + s * mb, s * wa + c * ma, s * wb + c * mb],
    }
}

/// Two-qubit density matrix of the boxes, basis index `2 * a + b` with
/// `up = 0` and `down = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix4<Complex64>,
}

const UP_UP: usize = 0;
const UP_DOWN: usize = 1;
const DOWN_UP: usize = 2;

impl TwoQubitState {
    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.symmetric_eigenvalues().min()
    }

    /// Negativity from the partial transpose on box B, found numerically.
    pub fn negativity(&self) -> PartialTransposeSpectrum {
        let dense = DMatrix::from_iterator(4, 4, self.matrix.iter().copied());
        negativity_of_density_matrix(&dense, 2, 2)
    }
}

/// Traces out the well particle.
///
/// The well can hold its particle in A, in B, or be empty; each of those
/// orthogonal well states tags a conditional box vector, and the reduced
/// state is the sum of their projectors.
pub fn reduced_box_state(state: &ProtocolState) -> TwoQubitState {
    let zero = Complex64::new(0.0, 0.0);
    let amp = |c: Configuration| state.amplitude(c);

    let mut well_in_a = [zero; 4];
    well_in_a[UP_UP] = amp(Configuration::WellA);
    let mut well_in_b = [zero; 4];
    well_in_b[UP_UP] = amp(Configuration::WellB);
    let mut well_empty = [zero; 4];
    well_empty[DOWN_UP] = amp(Configuration::MoleculeA);
    well_empty[UP_DOWN] = amp(Configuration::MoleculeB);

    let mut matrix = Matrix4::<Complex64>::zeros();
    for branch in [well_in_a, well_in_b, well_empty] {
        for i in 0..4 {
            for j in 0..4 {
                matrix[(i, j)] += branch[i] * branch[j].conj();
            }
        }
    }
    TwoQubitState { matrix }
}

/// Closed-form negativity of the extracted state,
/// `(sqrt(cos^4 g + sin^4 g) - cos^2 g) / 2`, as a nonnegative magnitude.
pub fn analytic_extraction_negativity(g: f64) -> f64 {
    let (sin, cos) = g.sin_cos();
    let (c2, s2) = (cos * cos, sin * sin);
    let value = 0.5 * ((c2 * c2 + s2 * s2).sqrt() - c2);
    value.max(0.0)
}

/// The full pipeline for one coupling strength.
pub fn extracted_state(g: f64) -> TwoQubitState {
    reduced_box_state(&apply_coupling(&build_initial_state(), g))
}
