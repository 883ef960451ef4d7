//! Projective measurement: basis measurements with Born-rule sampling and
//! collapse, two-outcome filters, and sequential filter chains.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{check_dims, QamError, Result};
use crate::hilbert::{
    apply_projector, inner_product, normalize, transition_probability, StateVector, UnitState,
    NORM_TOL,
    ORTHO_TOL,
};
use crate::rng::seeded_rng;

/// Label used for the residual channel in exported tables.
pub const RESIDUAL_LABEL: &str = "RESIDUAL";

/// Ordered set of mutually orthonormal outcome states.
///
/// A partial basis (fewer outcomes than the dimension) is allowed; the
/// probability that falls outside its span is reported on a residual channel.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    outcomes: Vec<UnitState>,
    dim: usize,
}

impl MeasurementBasis {
    pub fn new(outcomes: Vec<UnitState>) -> Result<Self> {
        let Some(first) = outcomes.first() else {
            return Err(QamError::Basis("a basis needs at least one outcome".into()));
        };
        let dim = first.dim();
        for o in &outcomes {
            check_dims(dim, o.dim())?;
        }
        if outcomes.len() > dim {
            return Err(QamError::Basis(format!(
                "{} outcomes exceed dimension {dim}",
                outcomes.len()
            )));
        }
        for i in 0..outcomes.len() {
            for j in i + 1..outcomes.len() {
                let overlap = inner_product(&outcomes[i], &outcomes[j])?.norm();
                if overlap > ORTHO_TOL {
                    return Err(QamError::Basis(format!(
                        "outcomes {i} and {j} overlap by {overlap:e}"
                    )));
                }
            }
        }
        Ok(Self { outcomes, dim })
    }

    /// The full computational basis of `C^dim`.
    pub fn computational(dim: usize) -> Self {
        Self {
            outcomes: (0..dim).map(|k| UnitState::basis(dim, k)).collect(),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.outcomes.len() == self.dim
    }

    pub fn outcomes(&self) -> &[UnitState] {
        &self.outcomes
    }
}

/// Which channel a measurement registered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Channel(usize),
    /// The state was found outside the span of a partial basis.
    Residual,
}

impl Outcome {
    /// Position in an `outcome_distribution` vector for a basis of `len` outcomes.
    pub fn slot(self, len: usize) -> usize {
        match self {
            Outcome::Channel(i) => i,
            Outcome::Residual => len,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome: Outcome,
    pub post_state: UnitState,
    pub probability: f64,
}

fn check_unit(chi: &UnitState) -> Result<()> {
    let n = chi.norm();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(QamError::NotNormalized { norm: n, tol: NORM_TOL });
    }
    Ok(())
}

/// Born probabilities `|⟨ψᵢ|χ⟩|²` for each outcome, followed by the residual
/// `1 − Σ Prᵢ` clamped to `[0, 1]`.
pub fn outcome_distribution(basis: &MeasurementBasis, chi: &UnitState) -> Result<Vec<f64>> {
    check_dims(basis.dim, chi.dim())?;
    check_unit(chi)?;
    let mut probs = Vec::with_capacity(basis.len() + 1);
    for psi in &basis.outcomes {
        probs.push(inner_product(chi, psi)?.norm_sqr());
    }
    let total: f64 = probs.iter().sum();
    probs.push((1.0 - total).clamp(0.0, 1.0));
    Ok(probs)
}

/// Index chosen by cumulative-sum inversion of the uniform draw `u ∈ [0, 1)`.
///
/// Falls back to the last slot with positive weight when rounding leaves `u`
/// past the running total.
fn invert_cdf(probs: &[f64], u: f64) -> usize {
    let mut cum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Component of `chi` orthogonal to every basis outcome.
fn residual_component(basis: &MeasurementBasis, chi: &UnitState) -> Result<StateVector> {
    let mut rest = chi.as_vector().clone();
    for psi in &basis.outcomes {
        let p = apply_projector(psi, chi)?;
        rest = rest.sub(&p)?;
    }
    Ok(rest)
}

/// One projective measurement of `chi`, collapsing onto the registered outcome.
pub fn measure<R: Rng + ?Sized>(
    basis: &MeasurementBasis,
    chi: &UnitState,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    let probs = outcome_distribution(basis, chi)?;
    let k = basis.len();
    let slot = invert_cdf(&probs, rng.random::<f64>());
    if slot < k {
        return Ok(MeasurementRecord {
            outcome: Outcome::Channel(slot),
            post_state: basis.outcomes[slot].clone(),
            probability: probs[slot],
        });
    }
    match normalize(&residual_component(basis, chi)?) {
        Ok(post_state) => Ok(MeasurementRecord {
            outcome: Outcome::Residual,
            post_state,
            probability: probs[k],
        }),
        // Residual weight was rounding noise; register the likeliest channel.
        Err(QamError::ZeroVector { .. }) => {
            let best = argmax(&probs[..k]);
            Ok(MeasurementRecord {
                outcome: Outcome::Channel(best),
                post_state: basis.outcomes[best].clone(),
                probability: probs[best],
            })
        }
        Err(e) => Err(e),
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterOutcome {
    Pass,
    Absorb,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterRecord {
    pub outcome: FilterOutcome,
    /// `psi` on PASS; the normalized complement of `chi` on ABSORB.
    pub post_state: UnitState,
    pub probability: f64,
}

/// Two-outcome device `P_ψ`: passes `chi` with its transition probability to `psi`.
pub fn filter<R: Rng + ?Sized>(psi: &UnitState, chi: &UnitState, rng: &mut R) -> Result<FilterRecord> {
    let p_pass = transition_probability(chi, psi)?;
    let u: f64 = rng.random();
    if u < p_pass {
        return Ok(FilterRecord {
            outcome: FilterOutcome::Pass,
            post_state: psi.clone(),
            probability: p_pass,
        });
    }
    let along = apply_projector(psi, chi)?;
    let post_state = match normalize(&chi.sub(&along)?) {
        Ok(s) => s,
        Err(QamError::ZeroVector { .. }) => {
            return Ok(FilterRecord {
                outcome: FilterOutcome::Pass,
                post_state: psi.clone(),
                probability: p_pass,
            })
        }
        Err(e) => return Err(e),
    };
    Ok(FilterRecord {
        outcome: FilterOutcome::Absorb,
        post_state,
        probability: 1.0 - p_pass,
    })
}

/// Survival probability of `chi` through the filters in order:
/// `|⟨f₁|χ⟩|² · Π |⟨fₖ|fₖ₋₁⟩|²`.
pub fn filter_chain(filters: &[UnitState], chi: &UnitState) -> Result<f64> {
    let Some(first) = filters.first() else {
        return Err(QamError::InvalidArgument("filter chain is empty".into()));
    };
    for f in filters {
        check_dims(chi.dim(), f.dim())?;
    }
    let mut p = transition_probability(chi, first)?;
    for pair in filters.windows(2) {
        p *= transition_probability(&pair[0], &pair[1])?;
    }
    Ok(p)
}

/// Per-particle simulation of a filter chain; returns how many of `particles`
/// survived every filter.
pub fn filter_chain_sampled<R: Rng + ?Sized>(
    filters: &[UnitState],
    chi: &UnitState,
    particles: usize,
    rng: &mut R,
) -> Result<usize> {
    if filters.is_empty() {
        return Err(QamError::InvalidArgument("filter chain is empty".into()));
    }
    for f in filters {
        check_dims(chi.dim(), f.dim())?;
    }
    let mut survived = 0;
    'particle: for _ in 0..particles {
        let mut state = chi.clone();
        for f in filters {
            let rec = filter(f, &state, rng)?;
            if rec.outcome == FilterOutcome::Absorb {
                continue 'particle;
            }
            state = rec.post_state;
        }
        survived += 1;
    }
    Ok(survived)
}

/// Outcome counts over repeated measurements of identically prepared states.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// One entry per basis outcome, then the residual channel.
    pub counts: Vec<u64>,
    pub exact: Vec<f64>,
    pub shots: u64,
}

impl Histogram {
    pub fn frequency(&self, slot: usize) -> f64 {
        self.counts[slot] as f64 / self.shots as f64
    }

    /// CSV with columns `outcome_label,count,empirical_frequency,exact_probability`.
    ///
    /// `labels` names the basis outcomes; the residual row uses [`RESIDUAL_LABEL`].
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::from("outcome_label,count,empirical_frequency,exact_probability\n");
        for slot in 0..self.counts.len() {
            let label = labels.get(slot).map(String::as_str).unwrap_or(RESIDUAL_LABEL);
            let _ = writeln!(
                out,
                "{},{},{},{}",
                label,
                self.counts[slot],
                self.frequency(slot),
                self.exact[slot]
            );
        }
        out
    }
}

/// Measure `n` fresh copies of `chi` using one generator seeded with `seed`.
pub fn sample_counts(basis: &MeasurementBasis, chi: &UnitState, n: u64, seed: u64) -> Result<Histogram> {
    if n == 0 {
        return Err(QamError::InvalidArgument("sample count must be at least 1".into()));
    }
    let exact = outcome_distribution(basis, chi)?;
    let mut rng = seeded_rng(seed);
    let mut counts = vec![0u64; basis.len() + 1];
    for _ in 0..n {
        let rec = measure(basis, chi, &mut rng)?;
        counts[rec.outcome.slot(basis.len())] += 1;
    }
    Ok(Histogram { counts, exact, shots: n })
}
