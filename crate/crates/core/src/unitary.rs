//! Random unitaries built from Givens rotations and diagonal phases.
//!
//! Used to check that scalar products and outcome statistics are unchanged
//! when every vector is carried by the same unitary evolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{check_dims, Result};
use crate::hilbert::StateVector;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    /// Rotation by `theta` in the `(i, j)` plane with relative phase `phi`.
    Givens { i: usize, j: usize, theta: f64, phi: f64 },
    /// Multiply amplitude `i` by `e^{i·angle}`.
    Phase { i: usize, angle: f64 },
}

/// A unitary on `C^dim` stored as an ordered product of elementary steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    steps: Vec<Step>,
}

impl Unitary {
    pub fn identity(dim: usize) -> Self {
        Self { dim, steps: Vec::new() }
    }

    /// `rotations` random Givens rotations followed by a random phase on every axis.
    ///
    /// Panics if `dim == 0`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rotations: usize, rng: &mut R) -> Self {
        assert!(dim >= 1);
        let mut steps = Vec::with_capacity(rotations + dim);
        if dim >= 2 {
            for _ in 0..rotations {
                let i = rng.random_range(0..dim);
                let mut j = rng.random_range(0..dim - 1);
                if j >= i {
                    j += 1;
                }
                steps.push(Step::Givens {
                    i,
                    j,
                    theta: rng.random_range(0.0..2.0 * PI),
                    phi: rng.random_range(0.0..2.0 * PI),
                });
            }
        }
        for i in 0..dim {
            steps.push(Step::Phase { i, angle: rng.random_range(0.0..2.0 * PI) });
        }
        Self { dim, steps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_dims(self.dim, v.dim())?;
        let mut amps = v.amplitudes().to_vec();
        for step in &self.steps {
            match *step {
                Step::Givens { i, j, theta, phi } => {
                    let (s, c) = theta.sin_cos();
                    let e = Complex64::from_polar(1.0, phi);
                    let (a, b) = (amps[i], amps[j]);
                    amps[i] = a * c - b * s * e.conj();
                    amps[j] = a * s * e + b * c;
                }
                Step::Phase { i, angle } => {
                    amps[i] *= Complex64::from_polar(1.0, angle);
                }
            }
        }
        StateVector::new(amps)
    }
}
