use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qam::aaam::{build_span, correct};
use qam::measurement::{filter_chain, filter_chain_sampled, sample_counts, RESIDUAL_LABEL};
use qam::patterns::{
    bank_basis, channel_scores, classify_max_channel, multi_copy_recognize, recognize_sampled, PatternBank,
};
use qam::pgm::{image_to_state, read_pgm};
use qam::rng::seeded_rng;
use qam::stats::{gram_report, overlap_csv, overlap_statistic_threaded};
use qam::store::{read_bank, read_state, write_bank, write_state, STATE_MAGIC};
use qam::{normalize, Field, QamError, StateVector, UnitState};

use crate::cli::{Command, ModeArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Data(QamError),
}

impl From<QamError> for CliError {
    fn from(e: QamError) -> Self {
        CliError::Data(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Data(_) => 2,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Io { path, source } => format!("IoError: {}: {source}", path.display()),
            CliError::Data(e) => format!("{}: {e}", e.kind_name()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_text(path: &Path) -> CliResult<String> {
    let bytes = read_file(path)?;
    String::from_utf8(bytes)
        .map_err(|_| CliError::Data(QamError::Format(format!("{} is not UTF-8 text", path.display()))))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_bank(path: &Path) -> CliResult<PatternBank> {
    Ok(read_bank(&read_text(path)?)?)
}

/// A unit state from either a PGM graymap or a QAMSTATE file.
fn load_state(path: &Path) -> CliResult<UnitState> {
    let bytes = read_file(path)?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        return Ok(image_to_state(&read_pgm(&bytes)?)?);
    }
    if bytes.starts_with(STATE_MAGIC.as_bytes()) {
        let text = String::from_utf8(bytes)
            .map_err(|_| QamError::Format(format!("{} is not UTF-8 text", path.display())))?;
        let (_, v, _) = read_state(&text)?;
        return Ok(normalize(&v)?);
    }
    Err(CliError::Data(QamError::Format(format!(
        "{}: expected a PGM image (P2/P5) or a {STATE_MAGIC} file",
        path.display()
    ))))
}

fn load_image_vector(path: &Path) -> CliResult<StateVector> {
    Ok(load_state(path)?.into_vector())
}

/// Runs one subcommand and returns what it prints on stdout.
pub fn run(command: Command) -> CliResult<String> {
    match command {
        Command::BankBuild { out, entries, field } => bank_build(&out, &entries, field.into()),
        Command::Recognize { bank, input, mode, copies, samples, seed } => {
            recognize(&bank, &input, mode, copies, samples, seed)
        }
        Command::Correct { images, input, tol, out } => correct_cmd(&images, &input, tol, &out),
        Command::Measure { bank, input, samples, seed } => measure_cmd(&bank, &input, samples, seed),
        Command::Chain { filters, input, samples, seed } => chain(&filters, &input, samples, seed),
        Command::Stats { dims, trials, seed, field, threads } => stats(&dims, trials, seed, field.into(), threads),
        Command::Gram { bank } => Ok(gram_report(&load_bank(&bank)?).to_csv()),
    }
}

fn bank_build(out: &Path, entries: &[String], field: Field) -> CliResult<String> {
    if entries.len() % 2 != 0 {
        return Err(CliError::Usage("--label takes a label and an image path".into()));
    }
    let mut patterns = Vec::with_capacity(entries.len() / 2);
    for pair in entries.chunks_exact(2) {
        patterns.push((pair[0].clone(), load_state(Path::new(&pair[1]))?));
    }
    let bank = PatternBank::new(field, patterns)?;
    write_file(out, &write_bank(&bank))?;
    Ok(format!(
        "patterns,dim,field,orthogonal\n{},{},{},{}\n",
        bank.len(),
        bank.dim(),
        bank.field(),
        bank.is_orthogonal()
    ))
}

fn recognize(bank: &Path, input: &Path, mode: ModeArg, copies: u64, samples: u64, seed: u64) -> CliResult<String> {
    let bank = load_bank(bank)?;
    let s = load_state(input)?;
    let mut out = String::from("mode,label,channel,score\n");
    match mode {
        ModeArg::Deterministic => {
            let r = classify_max_channel(&bank, &s)?;
            let _ = writeln!(out, "{},{},{},{}", r.mode, r.label, r.channel_index, r.score);
        }
        ModeArg::Sampled => {
            // Modal channel over the shots; score is its empirical frequency.
            let mut rng = seeded_rng(seed);
            let mut counts = vec![0u64; bank.len() + 1];
            for _ in 0..samples {
                counts[recognize_sampled(&bank, &s, &mut rng)?.channel_index] += 1;
            }
            let mut best = 0;
            for (i, &c) in counts.iter().enumerate() {
                if c > counts[best] {
                    best = i;
                }
            }
            let label = if best < bank.len() { bank.label(best) } else { RESIDUAL_LABEL };
            let _ = writeln!(out, "sampled,{},{},{}", label, best, counts[best] as f64 / samples as f64);
        }
        ModeArg::Multicopy => {
            let mc = multi_copy_recognize(&bank, &s, copies, &mut seeded_rng(seed))?;
            let r = &mc.result;
            let _ = writeln!(out, "{},{},{},{}", r.mode, r.label, r.channel_index, r.score);
            let exact = channel_scores(&bank, &s)?;
            out.push_str("\nchannel_label,copies,passes,pass_rate,exact_probability\n");
            for (k, rate) in mc.pass_rates().iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{},{}", bank.label(k), mc.copies[k], mc.passes[k], rate, exact[k]);
            }
        }
    }
    Ok(out)
}

fn correct_cmd(images: &[PathBuf], input: &Path, tol: f64, out: &Path) -> CliResult<String> {
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let vectors = images.iter().map(|p| load_image_vector(p)).collect::<CliResult<Vec<_>>>()?;
    let span = build_span(&vectors, tol)?;
    let x = load_state(input)?;
    let report = correct(&span, &x)?;
    let field = if report.corrected.is_real() { Field::Real } else { Field::Complex };
    write_file(out, &write_state("corrected", &report.corrected, field))?;
    Ok(format!(
        "in_span_fraction,residual_norm,rank\n{},{},{}\n",
        report.in_span_fraction,
        report.residual_norm,
        span.rank()
    ))
}

fn measure_cmd(bank: &Path, input: &Path, samples: u64, seed: u64) -> CliResult<String> {
    let bank = load_bank(bank)?;
    let chi = load_state(input)?;
    let basis = bank_basis(&bank)?;
    let hist = sample_counts(&basis, &chi, samples, seed)?;
    Ok(hist.to_csv(bank.labels()))
}

fn chain(filters: &[PathBuf], input: &Path, samples: Option<u64>, seed: u64) -> CliResult<String> {
    let filters = filters.iter().map(|p| load_state(p)).collect::<CliResult<Vec<_>>>()?;
    let chi = load_state(input)?;
    let p = filter_chain(&filters, &chi)?;
    match samples {
        None => Ok(format!("survival_probability\n{p}\n")),
        Some(n) => {
            let survived = filter_chain_sampled(&filters, &chi, n as usize, &mut seeded_rng(seed))?;
            let freq = survived as f64 / n as f64;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            Ok(format!(
                "survival_probability,particles,survivors,sampled_survival,sigma\n{p},{n},{survived},{freq},{sigma}\n"
            ))
        }
    }
}

fn stats(dims: &[usize], trials: u64, seed: u64, field: Field, threads: usize) -> CliResult<String> {
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(CliError::Usage(format!("--dims entries must be at least 2, got {d}")));
    }
    let rows = dims
        .iter()
        .map(|&d| overlap_statistic_threaded(d, trials, field, seed, threads))
        .collect::<qam::Result<Vec<_>>>()?;
    Ok(overlap_csv(&rows))
}
