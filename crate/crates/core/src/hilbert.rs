//! Dense finite-dimensional Hilbert-space arithmetic.
//!
//! The scalar product conjugates its *second* argument,
//! `(a, b) = Σ aᵢ·conj(bᵢ)`, so `⟨b|a⟩ = (a, b)`. Everything else in the
//! crate goes through [`inner_product`] and inherits that convention.
//!
//! Real vectors are complex vectors whose imaginary parts are exactly zero;
//! [`Field::Real`] only constrains inputs, it never selects a different
//! arithmetic path.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dims, QamError, Result};

/// Admission tolerance for unit-norm states.
pub const NORM_TOL: f64 = 1e-9;
/// Norms at or below this are treated as the zero vector.
pub const ZERO_TOL: f64 = 1e-12;
/// Largest `|⟨ψᵢ|ψⱼ⟩|` accepted between members of an orthonormal set.
pub const ORTHO_TOL: f64 = 1e-8;

/// Scalar field a collection of states lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    Real,
    #[default]
    Complex,
}

impl Field {
    /// Whether `v` is admissible in this field.
    pub fn admits(self, v: &StateVector) -> bool {
        match self {
            Field::Real => v.is_real(),
            Field::Complex => true,
        }
    }

    pub fn check(self, v: &StateVector) -> Result<()> {
        if self.admits(v) {
            Ok(())
        } else {
            Err(QamError::Field(
                "REAL field requires every imaginary part to be exactly zero".into(),
            ))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "REAL",
            Field::Complex => "COMPLEX",
        })
    }
}

impl FromStr for Field {
    type Err = QamError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "REAL" => Ok(Field::Real),
            "COMPLEX" => Ok(Field::Complex),
            other => Err(QamError::InvalidArgument(format!(
                "unknown field {other:?}, expected REAL or COMPLEX"
            ))),
        }
    }
}

/// Dense complex amplitude vector with at least one finite entry.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(QamError::EmptyVector);
        }
        if let Some(index) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QamError::NonFinite { index });
        }
        Ok(Self { amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩` of dimension `dim`.
    ///
    /// Panics if `index >= dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|z| z.im == 0.0)
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|&z| z * c).collect(),
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: Complex64, other: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), other.dim())?;
        Ok(StateVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(&a, &b)| a + c * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }

    /// Representative of the ray with its first non-negligible amplitude real
    /// and positive. Vectors with no such amplitude are returned unchanged.
    pub fn canonical_ray(&self) -> StateVector {
        let Some(lead) = self.amps.iter().position(|z| z.norm() > ZERO_TOL) else {
            return self.clone();
        };
        let a = self.amps[lead];
        if a.im == 0.0 && a.re > 0.0 {
            return self.clone();
        }
        let modulus = a.norm();
        let phase = a.conj() / modulus;
        let mut amps: Vec<Complex64> = self.amps.iter().map(|&z| z * phase).collect();
        amps[lead] = Complex64::new(modulus, 0.0);
        // keep real vectors exactly real
        if self.is_real() {
            for z in &mut amps {
                z.im = 0.0;
            }
        }
        StateVector { amps }
    }
}

/// A [`StateVector`] whose norm is within [`NORM_TOL`] of one.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitState(StateVector);

impl UnitState {
    pub fn new(v: StateVector) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() <= NORM_TOL {
            Ok(Self(v))
        } else {
            Err(QamError::NotNormalized { norm: n, tol: NORM_TOL })
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self(StateVector::basis(dim, index))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(StateVector::from_real(values)?)
    }

    pub fn as_vector(&self) -> &StateVector {
        &self.0
    }

    pub fn into_vector(self) -> StateVector {
        self.0
    }

    /// Canonical representative of the same ray; still unit norm.
    pub fn canonical_ray(&self) -> UnitState {
        UnitState(self.0.canonical_ray())
    }
}

impl Deref for UnitState {
    type Target = StateVector;

    fn deref(&self) -> &StateVector {
        &self.0
    }
}

impl AsRef<StateVector> for UnitState {
    fn as_ref(&self) -> &StateVector {
        &self.0
    }
}

/// Hermitian scalar product `Σ aᵢ·conj(bᵢ)`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(&x, &y)| x * y.conj())
        .sum())
}

pub fn norm(a: &StateVector) -> f64 {
    a.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(a: &StateVector) -> Result<UnitState> {
    let n = norm(a);
    if n <= ZERO_TOL {
        return Err(QamError::ZeroVector { norm: n });
    }
    Ok(UnitState(StateVector {
        amps: a.amps.iter().map(|z| z.unscale(n)).collect(),
    }))
}

/// Registration probability `|⟨ψ|φ⟩|² / (⟨ψ|ψ⟩⟨φ|φ⟩)`.
///
/// Inputs need not be normalized; the result is clamped to `[0, 1]`.
pub fn transition_probability(phi: &StateVector, psi: &StateVector) -> Result<f64> {
    let overlap = inner_product(phi, psi)?;
    let np = phi.amps.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let ns = psi.amps.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if np.sqrt() <= ZERO_TOL {
        return Err(QamError::ZeroVector { norm: np.sqrt() });
    }
    if ns.sqrt() <= ZERO_TOL {
        return Err(QamError::ZeroVector { norm: ns.sqrt() });
    }
    Ok((overlap.norm_sqr() / (np * ns)).clamp(0.0, 1.0))
}

/// `P_ψ φ = |ψ⟩⟨ψ|φ⟩`, the component of `phi` along `psi`.
pub fn apply_projector(psi: &UnitState, phi: &StateVector) -> Result<StateVector> {
    let coeff = inner_product(phi, psi)?;
    Ok(psi.scale(coeff))
}

/// True when `a` and `b` describe the same ray up to `tol` in transition probability.
pub fn ray_equal(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool> {
    check_dims(a.dim(), b.dim())?;
    let a = normalize(a)?;
    let b = normalize(b)?;
    Ok(transition_probability(&a, &b)? >= 1.0 - tol)
}

/// Uniform draw from the unit sphere of `field^dim`: i.i.d. standard normal
/// components, normalized.
///
/// Panics if `dim == 0`.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, field: Field, rng: &mut R) -> UnitState {
    assert!(dim >= 1, "random_unit_vector needs dim >= 1");
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = match field {
                    Field::Real => 0.0,
                    Field::Complex => rng.sample(StandardNormal),
                };
                Complex64::new(re, im)
            })
            .collect();
        let v = StateVector { amps };
        if let Ok(u) = normalize(&v) {
            return u;
        }
    }
}
