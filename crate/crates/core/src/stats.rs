//! Overlap statistics of random rays and Gram diagnostics for pattern banks.
//!
//! For two independent uniform unit vectors in `R^N` the squared overlap has
//! mean `1/N`, so `N·E[(w,v)²]` stays near 1 while the typical overlap
//! shrinks like `N^{-1/2}`.

use std::fmt::Write as _;
use std::thread;

use crate::error::{QamError, Result};
use crate::hilbert::{inner_product, random_unit_vector, Field};
use crate::patterns::PatternBank;
use crate::rng::{seeded_rng, split_seed};

/// Number of independent sub-streams a statistics run is split into. The
/// partition is fixed, so results do not depend on how many threads run it.
pub const STAT_STREAMS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSummary {
    pub dim: usize,
    pub trials: u64,
    pub field: Field,
    pub seed: u64,
    pub mean_abs_overlap: f64,
    pub mean_sq_overlap: f64,
    /// `dim · mean_sq_overlap`.
    pub scaled_mean_sq: f64,
}

impl OverlapSummary {
    pub const CSV_HEADER: &'static str = "dim,trials,mean_abs_overlap,mean_sq_overlap,scaled_mean_sq,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.dim, self.trials, self.mean_abs_overlap, self.mean_sq_overlap, self.scaled_mean_sq, self.seed
        )
    }
}

/// Header plus one row per summary.
pub fn overlap_csv(rows: &[OverlapSummary]) -> String {
    let mut out = format!("{}\n", OverlapSummary::CSV_HEADER);
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn stream_trials(trials: u64, stream: usize) -> u64 {
    let k = STAT_STREAMS as u64;
    trials / k + u64::from((stream as u64) < trials % k)
}

/// Sums of `|(w,v)|` and `|(w,v)|²` over one sub-stream.
fn run_stream(dim: usize, trials: u64, field: Field, seed: u64) -> (f64, f64) {
    let mut rng = seeded_rng(seed);
    let mut sum_abs = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let w = random_unit_vector(dim, field, &mut rng);
        let v = random_unit_vector(dim, field, &mut rng);
        let ip = inner_product(&w, &v).expect("equal dimensions");
        sum_abs += ip.norm();
        sum_sq += ip.norm_sqr();
    }
    (sum_abs, sum_sq)
}

/// Overlap statistics over `trials` independent pairs of random unit vectors,
/// computed on the current thread.
pub fn overlap_statistic(dim: usize, trials: u64, field: Field, seed: u64) -> Result<OverlapSummary> {
    overlap_statistic_threaded(dim, trials, field, seed, 1)
}

/// As [`overlap_statistic`], spreading the fixed sub-streams over `threads`
/// workers. The result is bit-identical for every thread count.
pub fn overlap_statistic_threaded(
    dim: usize,
    trials: u64,
    field: Field,
    seed: u64,
    threads: usize,
) -> Result<OverlapSummary> {
    if dim < 2 {
        return Err(QamError::InvalidArgument(format!("overlap statistics need dim >= 2, got {dim}")));
    }
    if trials == 0 {
        return Err(QamError::InvalidArgument("trials must be at least 1".into()));
    }
    let threads = threads.clamp(1, STAT_STREAMS);
    let mut partials = vec![(0.0, 0.0); STAT_STREAMS];
    if threads == 1 {
        for (s, slot) in partials.iter_mut().enumerate() {
            *slot = run_stream(dim, stream_trials(trials, s), field, split_seed(seed, s));
        }
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|worker| {
                    scope.spawn(move || {
                        (worker..STAT_STREAMS)
                            .step_by(threads)
                            .map(|s| (s, run_stream(dim, stream_trials(trials, s), field, split_seed(seed, s))))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (s, sums) in h.join().expect("statistics worker panicked") {
                    partials[s] = sums;
                }
            }
        });
    }
    // reduce in stream order
    let (sum_abs, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, q), &(pa, pq)| (a + pa, q + pq));
    let n = trials as f64;
    let mean_sq_overlap = sum_sq / n;
    Ok(OverlapSummary {
        dim,
        trials,
        field,
        seed,
        mean_abs_overlap: sum_abs / n,
        mean_sq_overlap,
        scaled_mean_sq: dim as f64 * mean_sq_overlap,
    })
}

/// Absolute Gram matrix `|⟨w(i),w(j)⟩|` of a bank.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    /// Largest off-diagonal entry; 0 for a single pattern.
    pub max_off_diagonal: f64,
}

impl GramReport {
    /// Matrix as CSV (first column and header carry labels), followed by a
    /// `max_off_diagonal,<value>` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.matrix) {
            out.push_str(l);
            for x in row {
                let _ = write!(out, ",{x}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "max_off_diagonal,{}", self.max_off_diagonal);
        out
    }
}

pub fn gram_report(bank: &PatternBank) -> GramReport {
    let pats = bank.patterns();
    let k = pats.len();
    let mut matrix = vec![vec![0.0; k]; k];
    let mut max_off_diagonal: f64 = 0.0;
    for i in 0..k {
        for j in i..k {
            let g = inner_product(&pats[i], &pats[j]).expect("bank patterns share a dimension").norm();
            matrix[i][j] = g;
            matrix[j][i] = g;
            if i != j {
                max_off_diagonal = max_off_diagonal.max(g);
            }
        }
    }
    GramReport { labels: bank.labels().to_vec(), matrix, max_off_diagonal }
}
