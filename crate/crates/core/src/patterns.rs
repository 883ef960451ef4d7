//! Max-channel recognition over a bank of stored pattern rays.
//!
//! Each pattern `w(k)` is a unit ray; the channel whose pattern best matches
//! the input signal names the recognized value. Recognition runs in three
//! flavours:
//!
//! * deterministic: argmax of the transition probability to every pattern;
//! * sampled: one projective measurement in the basis formed by the patterns,
//!   which requires the bank to be orthonormal;
//! * multi-copy: many copies of the signal spread over rank-1 filters, one per
//!   pattern, and the filter with the highest empirical pass rate wins. This
//!   works for non-orthogonal banks.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;

use crate::error::{check_dims, QamError, Result};
use crate::hilbert::{
    inner_product, normalize, transition_probability, Field, StateVector, UnitState, ORTHO_TOL,
};
use crate::measurement::{argmax, measure, MeasurementBasis, Outcome, RESIDUAL_LABEL};

/// Labeled set of unit pattern rays sharing one dimension and field.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternBank {
    labels: Vec<String>,
    patterns: Vec<UnitState>,
    dim: usize,
    field: Field,
    orthogonal: bool,
}

impl PatternBank {
    /// Builds a bank, storing each pattern in canonical ray form.
    ///
    /// Patterns must be unit norm, admissible in `field`, and carry unique,
    /// non-empty, whitespace-free labels.
    pub fn new(field: Field, entries: Vec<(String, UnitState)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return Err(QamError::InvalidArgument("pattern bank is empty".into()));
        };
        let dim = first.dim();
        let mut seen = HashSet::new();
        let mut labels = Vec::with_capacity(entries.len());
        let mut patterns = Vec::with_capacity(entries.len());
        for (label, w) in entries {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(QamError::InvalidArgument(format!(
                    "label {label:?} must be non-empty and contain no whitespace"
                )));
            }
            if !seen.insert(label.clone()) {
                return Err(QamError::DuplicateLabel(label));
            }
            check_dims(dim, w.dim())?;
            field.check(&w)?;
            labels.push(label);
            patterns.push(w.canonical_ray());
        }
        let orthogonal = first_non_orthogonal_pair(&patterns)?.is_none();
        Ok(Self { labels, patterns, dim, field, orthogonal })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// True when every pair of patterns overlaps by at most [`ORTHO_TOL`].
    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn patterns(&self) -> &[UnitState] {
        &self.patterns
    }

    pub fn label(&self, channel: usize) -> &str {
        &self.labels[channel]
    }

    pub fn pattern(&self, channel: usize) -> &UnitState {
        &self.patterns[channel]
    }

    pub fn channel_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &UnitState)> {
        self.labels.iter().map(String::as_str).zip(&self.patterns)
    }
}

fn first_non_orthogonal_pair(patterns: &[UnitState]) -> Result<Option<(usize, usize, f64)>> {
    for i in 0..patterns.len() {
        for j in i + 1..patterns.len() {
            let overlap = inner_product(&patterns[i], &patterns[j])?.norm();
            if overlap > ORTHO_TOL {
                return Ok(Some((i, j, overlap)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecognitionMode {
    Deterministic,
    Sampled,
    MultiCopy,
}

impl fmt::Display for RecognitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecognitionMode::Deterministic => "deterministic",
            RecognitionMode::Sampled => "sampled",
            RecognitionMode::MultiCopy => "multicopy",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecognitionResult {
    pub label: String,
    /// Pattern index, or `bank.len()` when a sampled measurement landed on the
    /// residual channel.
    pub channel_index: usize,
    /// Transition probability (deterministic, sampled) or empirical pass rate
    /// (multi-copy).
    pub score: f64,
    pub mode: RecognitionMode,
}

/// Formal-neuron activation `A = (w, s) = Σ wᵢ sᵢ` over real vectors.
pub fn neuron_activation(w: &StateVector, s: &StateVector) -> Result<f64> {
    check_dims(w.dim(), s.dim())?;
    if !w.is_real() || !s.is_real() {
        return Err(QamError::Field("neuron activation is defined for real vectors only".into()));
    }
    Ok(inner_product(w, s)?.re)
}

/// Threshold unit `θ(A − A₀)`: 1 when `activation > threshold`, else 0.
pub fn threshold_output(activation: f64, threshold: f64) -> u8 {
    u8::from(activation > threshold)
}

/// Deterministic recognition: the channel with the largest transition
/// probability to the normalized signal, lowest index on ties.
pub fn classify_max_channel(bank: &PatternBank, s: &StateVector) -> Result<RecognitionResult> {
    let scores = channel_scores(bank, s)?;
    let best = argmax(&scores);
    Ok(RecognitionResult {
        label: bank.labels[best].clone(),
        channel_index: best,
        score: scores[best],
        mode: RecognitionMode::Deterministic,
    })
}

/// Transition probability from the normalized signal to every pattern.
pub fn channel_scores(bank: &PatternBank, s: &StateVector) -> Result<Vec<f64>> {
    check_dims(bank.dim, s.dim())?;
    let s = normalize(s)?;
    bank.patterns
        .iter()
        .map(|w| transition_probability(&s, w))
        .collect()
}

/// Single projective measurement of `s` in the basis formed by the bank.
///
/// If the signal has weight outside the span of the patterns, the measurement
/// may land on the residual channel; the result then carries
/// [`RESIDUAL_LABEL`] and `channel_index == bank.len()`.
pub fn recognize_sampled<R: Rng + ?Sized>(
    bank: &PatternBank,
    s: &UnitState,
    rng: &mut R,
) -> Result<RecognitionResult> {
    check_dims(bank.dim, s.dim())?;
    let basis = bank_basis(bank)?;
    let rec = measure(&basis, s, rng)?;
    let (label, channel_index) = match rec.outcome {
        Outcome::Channel(i) => (bank.labels[i].clone(), i),
        Outcome::Residual => (RESIDUAL_LABEL.to_string(), bank.len()),
    };
    Ok(RecognitionResult {
        label,
        channel_index,
        score: rec.probability,
        mode: RecognitionMode::Sampled,
    })
}

/// The bank viewed as a measurement basis; fails for non-orthogonal banks.
pub fn bank_basis(bank: &PatternBank) -> Result<MeasurementBasis> {
    if let Some((i, j, overlap)) = first_non_orthogonal_pair(&bank.patterns)? {
        return Err(QamError::Orthogonality { i, j, overlap });
    }
    MeasurementBasis::new(bank.patterns.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiCopyOutcome {
    pub result: RecognitionResult,
    /// Copies routed to each filter.
    pub copies: Vec<u64>,
    /// Copies that passed each filter.
    pub passes: Vec<u64>,
}

impl MultiCopyOutcome {
    /// Empirical pass rate of each filter.
    pub fn pass_rates(&self) -> Vec<f64> {
        self.passes
            .iter()
            .zip(&self.copies)
            .map(|(&p, &c)| p as f64 / c as f64)
            .collect()
    }
}

/// Copies per filter when `m` copies are dealt round-robin over `k` filters.
pub fn round_robin_allocation(m: u64, k: usize) -> Vec<u64> {
    let k64 = k as u64;
    (0..k64).map(|i| m / k64 + u64::from(i < m % k64)).collect()
}

/// Recognition from `m` identical copies of the signal, dealt round-robin to
/// one rank-1 filter per pattern. Each copy passes filter `k` independently
/// with probability `|⟨w(k)|s⟩|²`; the filter with the highest pass rate
/// wins, lowest index on ties.
pub fn multi_copy_recognize<R: Rng + ?Sized>(
    bank: &PatternBank,
    s: &UnitState,
    m: u64,
    rng: &mut R,
) -> Result<MultiCopyOutcome> {
    check_dims(bank.dim, s.dim())?;
    let k = bank.len();
    if m < k as u64 {
        return Err(QamError::InsufficientCopies { copies: m as usize, channels: k });
    }
    let pass_probs = bank
        .patterns
        .iter()
        .map(|w| transition_probability(s, w))
        .collect::<Result<Vec<_>>>()?;
    let copies = round_robin_allocation(m, k);
    let mut passes = vec![0u64; k];
    for copy in 0..m {
        let channel = (copy % k as u64) as usize;
        if rng.random::<f64>() < pass_probs[channel] {
            passes[channel] += 1;
        }
    }
    let rates: Vec<f64> = passes
        .iter()
        .zip(&copies)
        .map(|(&p, &c)| p as f64 / c as f64)
        .collect();
    let best = argmax(&rates);
    Ok(MultiCopyOutcome {
        result: RecognitionResult {
            label: bank.labels[best].clone(),
            channel_index: best,
            score: rates[best],
            mode: RecognitionMode::MultiCopy,
        },
        copies,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn unit(v: &[f64]) -> UnitState {
        UnitState::from_real(v).unwrap()
    }

    fn bank(field: Field, pats: &[&[f64]]) -> PatternBank {
        PatternBank::new(
            field,
            pats.iter()
                .enumerate()
                .map(|(i, p)| (format!("p{i}"), unit(p)))
                .collect(),
        )
        .unwrap()
    }

    fn sqrt_pair(p: f64) -> [f64; 2] {
        [p.sqrt(), (1.0 - p).sqrt()]
    }

    #[test]
    fn activation_examples() {
        let a = |w: &[f64], s: &[f64]| {
            neuron_activation(&StateVector::from_real(w).unwrap(), &StateVector::from_real(s).unwrap())
                .unwrap()
        };
        assert_eq!(a(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 1.0);
        assert!(a(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).abs() < 1e-16);
        assert_eq!(a(&[0.6, 0.8], &[1.0, 0.0]), 0.6);
    }

    #[test]
    fn activation_rejects_complex_and_mismatch() {
        let w = StateVector::new(vec![Complex64::new(0.0, 1.0)]).unwrap();
        let s = StateVector::from_real(&[1.0]).unwrap();
        assert!(matches!(neuron_activation(&w, &s), Err(QamError::Field(_))));
        let s2 = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert!(matches!(neuron_activation(&s, &s2), Err(QamError::Dimension { .. })));
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_output(0.9, 0.5), 1);
        assert_eq!(threshold_output(0.1, 0.5), 0);
        assert_eq!(threshold_output(0.5, 0.5), 0);
    }

    #[test]
    fn bank_validation() {
        assert!(PatternBank::new(Field::Real, vec![]).is_err());
        let dup = vec![("a".to_string(), unit(&[1.0, 0.0])), ("a".to_string(), unit(&[0.0, 1.0]))];
        assert_eq!(PatternBank::new(Field::Real, dup).unwrap_err(), QamError::DuplicateLabel("a".into()));
        let spaced = vec![("a b".to_string(), unit(&[1.0, 0.0]))];
        assert!(PatternBank::new(Field::Real, spaced).is_err());
        let cplx = UnitState::new(StateVector::new(vec![Complex64::new(0.0, 1.0)]).unwrap()).unwrap();
        assert!(matches!(
            PatternBank::new(Field::Real, vec![("c".into(), cplx.clone())]),
            Err(QamError::Field(_))
        ));
        // canonical form turns i into 1
        let b = PatternBank::new(Field::Complex, vec![("c".into(), cplx)]).unwrap();
        assert_eq!(b.pattern(0).amplitudes()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn orthogonal_flag() {
        assert!(bank(Field::Real, &[&[1.0, 0.0], &[0.0, 1.0]]).is_orthogonal());
        assert!(!bank(Field::Real, &[&[1.0, 0.0], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).is_orthogonal());
    }

    #[test]
    fn classify_examples() {
        let b = bank(Field::Real, &[&[1.0, 0.0, 0.0], &[0.0, 0.6, 0.8], &[0.0, 0.8, -0.6]]);
        let r = classify_max_channel(&b, b.pattern(1)).unwrap();
        assert_eq!((r.channel_index, r.label.as_str()), (1, "p1"));
        assert!((r.score - 1.0).abs() < 1e-12);

        let scaled = b.pattern(2).scale(Complex64::new(7.0, 0.0));
        let r = classify_max_channel(&b, &scaled).unwrap();
        assert_eq!(r.channel_index, 2);
        assert!((r.score - 1.0).abs() < 1e-12);

        let b2 = bank(Field::Real, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let r = classify_max_channel(&b2, &StateVector::from_real(&[0.6, 0.8]).unwrap()).unwrap();
        assert_eq!(r.channel_index, 1);
        assert!((r.score - 0.64).abs() < 1e-15);
        assert_eq!(r.mode, RecognitionMode::Deterministic);
    }

    #[test]
    fn classify_ties_go_to_lowest_channel() {
        let b = bank(Field::Real, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let r = classify_max_channel(&b, &StateVector::from_real(&[1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(r.channel_index, 0);
    }

    #[test]
    fn classify_rejects_zero_signal() {
        let b = bank(Field::Real, &[&[1.0, 0.0]]);
        let zero = StateVector::from_real(&[0.0, 0.0]).unwrap();
        assert!(matches!(classify_max_channel(&b, &zero), Err(QamError::ZeroVector { .. })));
    }

    #[test]
    fn sampled_exact_pattern_is_certain() {
        let b = bank(Field::Real, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let mut rng = seeded_rng(12);
        for _ in 0..1000 {
            let r = recognize_sampled(&b, b.pattern(1), &mut rng).unwrap();
            assert_eq!(r.channel_index, 1);
            assert_eq!(r.mode, RecognitionMode::Sampled);
        }
    }

    #[test]
    fn sampled_superposition_split() {
        let b = bank(Field::Real, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let s = unit(&[0.0, 0.6, 0.8]);
        let n = 100_000u64;
        let mut rng = seeded_rng(31);
        let hits = (0..n)
            .filter(|_| recognize_sampled(&b, &s, &mut rng).unwrap().channel_index == 1)
            .count();
        let sigma = (0.36f64 * 0.64 / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - 0.36).abs() <= 3.0 * sigma);
    }

    #[test]
    fn sampled_reports_residual_outside_span() {
        let b = bank(Field::Real, &[&[1.0, 0.0]]);
        let mut rng = seeded_rng(0);
        let r = recognize_sampled(&b, &UnitState::basis(2, 1), &mut rng).unwrap();
        assert_eq!(r.channel_index, 1);
        assert_eq!(r.label, RESIDUAL_LABEL);
    }

    #[test]
    fn sampled_rejects_non_orthogonal_bank() {
        let b = bank(Field::Real, &[&[1.0, 0.0], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]);
        let err = recognize_sampled(&b, &unit(&[1.0, 0.0]), &mut seeded_rng(0)).unwrap_err();
        assert!(matches!(err, QamError::Orthogonality { i: 0, j: 1, .. }));
    }

    #[test]
    fn allocation_is_round_robin() {
        assert_eq!(round_robin_allocation(10, 3), vec![4, 3, 3]);
        assert_eq!(round_robin_allocation(3, 3), vec![1, 1, 1]);
        assert_eq!(round_robin_allocation(2000, 2), vec![1000, 1000]);
    }

    #[test]
    fn multi_copy_exact_pattern() {
        let b = bank(Field::Real, &[&[1.0, 0.0], &[0.0, 1.0]]);
        for m in [2u64, 5, 101] {
            let out = multi_copy_recognize(&b, b.pattern(1), m, &mut seeded_rng(m)).unwrap();
            assert_eq!(out.result.channel_index, 1);
            assert_eq!(out.result.score, 1.0);
            assert_eq!(out.copies.iter().sum::<u64>(), m);
        }
        // overlapping patterns: the exact match still dominates once copies are plentiful
        let b = bank(Field::Real, &[&[1.0, 0.0], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]);
        let out = multi_copy_recognize(&b, b.pattern(1), 2000, &mut seeded_rng(1)).unwrap();
        assert_eq!(out.result.channel_index, 1);
        assert_eq!(out.result.score, 1.0);
    }

    #[test]
    fn multi_copy_non_orthogonal_rates() {
        let s = UnitState::basis(2, 0);
        let b = bank(Field::Real, &[&sqrt_pair(0.9), &sqrt_pair(0.4)]);
        assert!(!b.is_orthogonal());
        let out = multi_copy_recognize(&b, &s, 2000, &mut seeded_rng(2)).unwrap();
        assert_eq!(out.result.channel_index, 0);
        assert_eq!(out.copies, vec![1000, 1000]);
        for (rate, p) in out.pass_rates().into_iter().zip([0.9f64, 0.4]) {
            let sigma = (p * (1.0 - p) / 1000.0).sqrt();
            assert!((rate - p).abs() <= 4.0 * sigma, "rate {rate} vs {p}");
        }
    }

    #[test]
    fn multi_copy_minimum_allocation() {
        let b = bank(Field::Real, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let out = multi_copy_recognize(&b, &unit(&[0.6, 0.8]), 2, &mut seeded_rng(4)).unwrap();
        assert_eq!(out.copies, vec![1, 1]);
        assert!(out.result.channel_index < 2);
        assert!(matches!(
            multi_copy_recognize(&b, &unit(&[0.6, 0.8]), 1, &mut seeded_rng(4)),
            Err(QamError::InsufficientCopies { copies: 1, channels: 2 })
        ));
    }
}
