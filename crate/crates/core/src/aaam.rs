//! Auto-associative memory: orthonormal basis for the span of stored images,
//! and error correction by orthogonal projection onto that span.

use num_complex::Complex64;

use crate::error::{check_dims, QamError, Result};
use crate::hilbert::{
    inner_product, norm, normalize, transition_probability, StateVector, UnitState, NORM_TOL,
    ORTHO_TOL, ZERO_TOL,
};

/// Default relative tolerance below which an image counts as linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-10;
/// Projections with norm at or below this carry no usable direction.
pub const SPAN_TOL: f64 = 1e-6;

/// Orthonormal basis `q₁..q_r` for the linear span of the ingested images.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Vec<UnitState>,
    source_count: usize,
    ambient_dim: usize,
}

impl Subspace {
    /// Wraps an already orthonormal set, e.g. one read back from disk.
    pub fn from_orthonormal(basis: Vec<UnitState>, source_count: usize) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(QamError::InvalidArgument("subspace basis is empty".into()));
        };
        let ambient_dim = first.dim();
        for q in &basis {
            check_dims(ambient_dim, q.dim())?;
            if (q.norm() - 1.0).abs() > NORM_TOL {
                return Err(QamError::NotNormalized { norm: q.norm(), tol: NORM_TOL });
            }
        }
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let overlap = inner_product(&basis[i], &basis[j])?.norm();
                if overlap > ORTHO_TOL {
                    return Err(QamError::Basis(format!(
                        "span vectors {i} and {j} overlap by {overlap:e}"
                    )));
                }
            }
        }
        if basis.len() > ambient_dim || basis.len() > source_count {
            return Err(QamError::InvalidArgument(format!(
                "rank {} exceeds min(source_count {source_count}, dim {ambient_dim})",
                basis.len()
            )));
        }
        Ok(Self { basis, source_count, ambient_dim })
    }

    pub fn basis(&self) -> &[UnitState] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// An image whose residual falls below `tol·‖image‖` (or whose own norm is
/// at most [`ZERO_TOL`]) is dropped as dependent on those before it.
pub fn build_span(images: &[StateVector], tol: f64) -> Result<Subspace> {
    let Some(first) = images.first() else {
        return Err(QamError::InvalidArgument("no images to span".into()));
    };
    if !(tol > 0.0) {
        return Err(QamError::InvalidArgument(format!("dependence tolerance {tol} must be positive")));
    }
    let dim = first.dim();
    let mut basis: Vec<UnitState> = Vec::new();
    for img in images {
        check_dims(dim, img.dim())?;
        let original = norm(img);
        if original <= ZERO_TOL {
            continue;
        }
        let mut v = img.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = inner_product(&v, q)?;
                v = v.add_scaled(-c, q)?;
            }
        }
        if norm(&v) < tol * original {
            continue;
        }
        basis.push(normalize(&v)?);
    }
    if basis.is_empty() {
        return Err(QamError::AllDegenerate { count: images.len() });
    }
    Ok(Subspace { basis, source_count: images.len(), ambient_dim: dim })
}

/// `x̂ = Σₖ qₖ⟨qₖ|x⟩`.
pub fn project_onto_span(sub: &Subspace, x: &StateVector) -> Result<StateVector> {
    check_dims(sub.ambient_dim, x.dim())?;
    let mut acc = StateVector::new(vec![Complex64::new(0.0, 0.0); x.dim()])?;
    for q in &sub.basis {
        let c = inner_product(x, q)?;
        acc = acc.add_scaled(c, q)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionReport {
    /// Unit ray along the projection of the normalized input.
    pub corrected: UnitState,
    /// `‖x̂‖²` for the normalized input.
    pub in_span_fraction: f64,
    /// `‖x − x̂‖` for the normalized input.
    pub residual_norm: f64,
}

/// Project the normalized input onto the span and renormalize.
pub fn correct(sub: &Subspace, x: &StateVector) -> Result<CorrectionReport> {
    check_dims(sub.ambient_dim, x.dim())?;
    let x = normalize(x)?;
    let projected = project_onto_span(sub, &x)?;
    let projection_norm = norm(&projected);
    if projection_norm <= SPAN_TOL {
        return Err(QamError::OutOfSpan { projection_norm });
    }
    let residual_norm = norm(&x.sub(&projected)?);
    Ok(CorrectionReport {
        corrected: normalize(&projected)?,
        in_span_fraction: (projection_norm * projection_norm).min(1.0),
        residual_norm,
    })
}

/// `1 − |⟨reference|candidate⟩|²`; zero exactly for identical rays.
pub fn recall_error(reference: &UnitState, candidate: &UnitState) -> Result<f64> {
    Ok(1.0 - transition_probability(candidate, reference)?)
}
